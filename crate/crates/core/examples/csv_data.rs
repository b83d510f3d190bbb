//! Writing synthetic data to CSV, reading it back and drawing a balanced
//! subsample.

use mukit::datagen::{balanced_subsample, gen_synthetic, load_csv, write_csv, CsvSchema, SyntheticSpec};
use mukit::error::Result;

pub fn run_example() -> Result<(bool, usize, usize)> {
    let dir = std::env::temp_dir().join(format!("mukit-csv-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("data.csv");

    let (x, y, _) = gen_synthetic(&SyntheticSpec::new(400, 4, 21).with_noise(0.5))?;
    write_csv(&path, &x, &y)?;
    let (x2, y2) = load_csv(&path, &CsvSchema::default())?;
    let same = x == x2 && y == y2;
    println!("{} rows written and read back, identical: {same}", x2.nrows());

    let (_, sy) = balanced_subsample(&x2, &y2, 100, 3)?;
    let pos = sy.positives();
    println!("balanced subsample of 100: {pos} positive, {} negative", sy.len() - pos);
    std::fs::remove_dir_all(&dir)?;
    Ok((same, pos, sy.len() - pos))
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
