//! Small version of the sketch-size experiment, written as CSV and SVG.

use mukit::datagen::SyntheticSpec;
use mukit::error::Result;
use mukit::experiment::{render_svg, run_experiment, ExperimentConfig, ExperimentOutput};

pub fn run_example() -> Result<ExperimentOutput> {
    let cfg = ExperimentConfig::synthetic(SyntheticSpec::new(400, 5, 1), vec![32, 64, 128], vec![0, 1, 2]);
    let out = run_experiment(&cfg)?;
    print!("{}", out.to_csv_string());
    let svg = std::env::temp_dir().join("mukit-experiment-example.svg");
    std::fs::write(&svg, render_svg(&out))?;
    println!("chart written to {}", svg.display());
    Ok(out)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
