//! Synthetic logistic data, CSV input/output and label-balanced subsampling.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::data::{DataMatrix, LabelVector, ParamVector};
use crate::error::{MuError, Result};
use crate::rng::{self, Stream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub noise_std: f64,
    /// Fixed `beta`; drawn uniformly on the unit sphere when absent.
    pub beta: Option<Vec<f64>>,
}

impl SyntheticSpec {
    pub fn new(n: usize, d: usize, seed: u64) -> Self {
        Self {
            n,
            d,
            seed,
            noise_std: 1.0,
            beta: None,
        }
    }

    pub fn with_noise(mut self, noise_std: f64) -> Self {
        self.noise_std = noise_std;
        self
    }

    pub fn with_beta(mut self, beta: Vec<f64>) -> Self {
        self.beta = Some(beta);
        self
    }
}

/// Gaussian rows with labels `y_i = 1` iff `1 / (1 + exp(-beta^T x_i + e_i)) > 1/2`,
/// `e_i ~ N(0, noise_std^2)`.
///
/// Rows and noise come from separate streams and are drawn in row order, so
/// the first `m` rows do not depend on `n`.
pub fn gen_synthetic(spec: &SyntheticSpec) -> Result<(DataMatrix, LabelVector, ParamVector)> {
    let SyntheticSpec { n, d, seed, noise_std, .. } = *spec;
    if n == 0 || d == 0 {
        return Err(MuError::InvalidInput(format!("synthetic shape {n}x{d} is empty")));
    }
    if !(noise_std >= 0.0 && noise_std.is_finite()) {
        return Err(MuError::InvalidInput(format!("noise_std {noise_std} is not a finite nonnegative value")));
    }
    let beta = match &spec.beta {
        Some(b) if b.len() != d => {
            return Err(MuError::Dimension(format!("fixed beta has {} entries, d = {d}", b.len())))
        }
        Some(b) => b.clone(),
        None => rng::unit_sphere(&mut rng::stream(seed, Stream::Beta), d),
    };
    let mut rows = rng::stream(seed, Stream::Matrix);
    let mut noise = rng::stream(seed, Stream::Noise);
    let mut data = Vec::with_capacity(n * d);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let start = data.len();
        data.extend((0..d).map(|_| rng::gaussian(&mut rows)));
        let score: f64 = data[start..].iter().zip(&beta).map(|(x, b)| x * b).sum();
        let e = noise_std * rng::gaussian(&mut noise);
        let p = 1.0 / (1.0 + (-score + e).exp());
        labels.push(if p > 0.5 { 1.0 } else { -1.0 });
    }
    Ok((
        DataMatrix::from_row_slice(n, d, &data)?,
        LabelVector::new(labels)?,
        ParamVector::new(beta)?,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColumnRef {
    Name(String),
    Index(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeatureSelect {
    /// Every non-label column; all must be numeric.
    All,
    /// Only columns whose every value parses as a real.
    Numeric,
    Columns(Vec<ColumnRef>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvSchema {
    pub label_column: ColumnRef,
    pub positive_label: String,
    pub negative_label: String,
    pub delimiter: u8,
    pub has_header: bool,
    pub features: FeatureSelect,
}

impl Default for CsvSchema {
    /// The layout written by [`write_csv`].
    fn default() -> Self {
        Self {
            label_column: ColumnRef::Name("label".into()),
            positive_label: "1".into(),
            negative_label: "-1".into(),
            delimiter: b',',
            has_header: true,
            features: FeatureSelect::All,
        }
    }
}

pub fn load_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<(DataMatrix, LabelVector)> {
    load_csv_from(File::open(path)?, schema)
}

pub fn load_csv_from<R: Read>(reader: R, schema: &CsvSchema) -> Result<(DataMatrix, LabelVector)> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter)
        .has_headers(schema.has_header)
        .flexible(true)
        .from_reader(reader);
    let header: Option<Vec<String>> = if schema.has_header {
        let h = rdr.headers().map_err(|e| csv_err(1, e))?;
        Some(h.iter().map(|s| s.trim().to_string()).collect())
    } else {
        None
    };
    let first_line = if schema.has_header { 2 } else { 1 };

    let mut records: Vec<(usize, Vec<String>)> = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let line = first_line + k;
        let rec = rec.map_err(|e| csv_err(line, e))?;
        records.push((line, rec.iter().map(|s| s.trim().to_string()).collect()));
    }
    let width = header
        .as_ref()
        .map(Vec::len)
        .or_else(|| records.first().map(|(_, r)| r.len()))
        .unwrap_or(0);
    for (line, r) in &records {
        if r.len() != width {
            return Err(MuError::Csv {
                line: *line,
                msg: format!("expected {width} fields, found {}", r.len()),
            });
        }
    }
    let resolve = |c: &ColumnRef| -> Result<usize> {
        match c {
            ColumnRef::Index(i) if *i < width => Ok(*i),
            ColumnRef::Index(i) => Err(MuError::InvalidInput(format!("column {i} out of range ({width} columns)"))),
            ColumnRef::Name(name) => header
                .as_ref()
                .and_then(|h| h.iter().position(|x| x == name))
                .ok_or_else(|| MuError::InvalidInput(format!("no column named {name:?}"))),
        }
    };
    let label_col = resolve(&schema.label_column)?;
    let features: Vec<usize> = match &schema.features {
        FeatureSelect::All => (0..width).filter(|&j| j != label_col).collect(),
        FeatureSelect::Numeric => (0..width)
            .filter(|&j| j != label_col && records.iter().all(|(_, r)| r[j].parse::<f64>().is_ok()))
            .collect(),
        FeatureSelect::Columns(cols) => cols.iter().map(resolve).collect::<Result<_>>()?,
    };
    if features.contains(&label_col) {
        return Err(MuError::InvalidInput("label column is also selected as a feature".into()));
    }
    if features.is_empty() || records.is_empty() {
        return Err(MuError::InvalidInput("no feature columns or no data rows".into()));
    }

    let mut data = Vec::with_capacity(records.len() * features.len());
    let mut labels = Vec::with_capacity(records.len());
    for (line, r) in &records {
        let token = &r[label_col];
        labels.push(if *token == schema.positive_label {
            1.0
        } else if *token == schema.negative_label {
            -1.0
        } else {
            return Err(MuError::Csv {
                line: *line,
                msg: format!("unknown label token {token:?}"),
            });
        });
        for &j in &features {
            let v: f64 = r[j].parse().map_err(|_| MuError::Csv {
                line: *line,
                msg: format!("non-numeric feature {:?} in column {j}", r[j]),
            })?;
            data.push(v);
        }
    }
    Ok((
        DataMatrix::from_row_slice(records.len(), features.len(), &data)?,
        LabelVector::new(labels)?,
    ))
}

fn csv_err(line: usize, e: csv::Error) -> MuError {
    MuError::Csv {
        line: e.position().map_or(line, |p| p.line() as usize),
        msg: e.to_string(),
    }
}

/// 17 significant digits, enough to read back the same `f64`.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Header `x0,...,x{d-1},label`, labels written as `1` / `-1`.
pub fn write_csv_to<W: Write>(writer: W, x: &DataMatrix, y: &LabelVector) -> Result<()> {
    if x.nrows() != y.len() {
        return Err(MuError::Dimension(format!("{} rows against {} labels", x.nrows(), y.len())));
    }
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = (0..x.ncols()).map(|j| format!("x{j}")).collect();
    header.push("label".into());
    w.write_record(&header).map_err(|e| csv_err(1, e))?;
    for i in 0..x.nrows() {
        let mut rec: Vec<String> = x.row(i).into_iter().map(format_real).collect();
        rec.push(if y.as_slice()[i] > 0.0 { "1" } else { "-1" }.into());
        w.write_record(&rec).map_err(|e| csv_err(i + 2, e))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(path: impl AsRef<Path>, x: &DataMatrix, y: &LabelVector) -> Result<()> {
    write_csv_to(File::create(path)?, x, y)
}

/// Up to `m / 2` positives (all of them if there are fewer), negatives for
/// the rest, topped up with positives when negatives run out. Output order is
/// shuffled.
pub fn balanced_subsample(x: &DataMatrix, y: &LabelVector, m: usize, seed: u64) -> Result<(DataMatrix, LabelVector)> {
    let n = x.nrows();
    if y.len() != n {
        return Err(MuError::Dimension(format!("{n} rows against {} labels", y.len())));
    }
    if m == 0 || m > n {
        return Err(MuError::InvalidInput(format!("subsample size {m} not in 1..={n}")));
    }
    let mut rng = rng::stream(seed, Stream::Subsample);
    let (mut pos, mut neg): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| y.as_slice()[i] > 0.0);
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);
    let take_pos = pos.len().min(m / 2).max(m.saturating_sub(neg.len()));
    let take_neg = m - take_pos;
    let mut idx: Vec<usize> = pos[..take_pos].iter().chain(&neg[..take_neg]).copied().collect();
    idx.shuffle(&mut rng);

    let rows: Vec<Vec<f64>> = idx.iter().map(|&i| x.row(i)).collect();
    let labels = idx.iter().map(|&i| y.as_slice()[i]).collect();
    Ok((DataMatrix::from_rows(&rows)?, LabelVector::new(labels)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_labels_follow_the_score() {
        let (x, y, b) = gen_synthetic(&SyntheticSpec::new(200, 5, 3).with_noise(0.0)).unwrap();
        let z = x.mul_vec(&b).unwrap();
        for (zi, yi) in z.iter().zip(y.as_slice()) {
            assert_eq!(*yi, if *zi > 0.0 { 1.0 } else { -1.0 });
        }
        assert!((b.norm_l2() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rows_are_prefix_stable() {
        let (small, ys, _) = gen_synthetic(&SyntheticSpec::new(10, 4, 7)).unwrap();
        let (big, yb, _) = gen_synthetic(&SyntheticSpec::new(50, 4, 7)).unwrap();
        for i in 0..10 {
            assert_eq!(small.row(i), big.row(i));
            assert_eq!(ys.as_slice()[i], yb.as_slice()[i]);
        }
    }

    #[test]
    fn header_and_tokens() {
        let text = "a,b,y\n1.5,2,pos\n-3,0.25,neg\n";
        let schema = CsvSchema {
            label_column: ColumnRef::Name("y".into()),
            positive_label: "pos".into(),
            negative_label: "neg".into(),
            ..CsvSchema::default()
        };
        let (x, y) = load_csv_from(text.as_bytes(), &schema).unwrap();
        assert_eq!((x.nrows(), x.ncols()), (2, 2));
        assert_eq!(y.as_slice(), &[1.0, -1.0]);
        assert_eq!(x.get(1, 1), 0.25);

        let bad = "a,b,y\n1,2,pos\n3,4,maybe\n";
        match load_csv_from(bad.as_bytes(), &schema) {
            Err(MuError::Csv { line, msg }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("maybe"));
            }
            other => panic!("expected csv error, got {other:?}"),
        }
    }

    #[test]
    fn numeric_selection_skips_text_columns() {
        let text = "proto,dur,label\ntcp,1.0,1\nudp,2.5,-1\n";
        let schema = CsvSchema {
            features: FeatureSelect::Numeric,
            ..CsvSchema::default()
        };
        let (x, _) = load_csv_from(text.as_bytes(), &schema).unwrap();
        assert_eq!(x.ncols(), 1);
        assert!(load_csv_from(text.as_bytes(), &CsvSchema::default()).is_err());
    }

    #[test]
    fn subsample_counts() {
        let x = DataMatrix::from_rows(&(0..100).map(|i| vec![i as f64]).collect::<Vec<_>>()).unwrap();
        let signs = |p: usize| LabelVector::new((0..100).map(|i| if i < p { 1.0 } else { -1.0 }).collect()).unwrap();

        let (_, y) = balanced_subsample(&x, &signs(10), 20, 1).unwrap();
        assert_eq!(y.positives(), 10);
        let (_, y) = balanced_subsample(&x, &signs(5), 20, 1).unwrap();
        assert_eq!((y.positives(), y.len()), (5, 20));

        let (full, y) = balanced_subsample(&x, &signs(70), 100, 1).unwrap();
        assert_eq!(y.positives(), 70);
        let mut vals: Vec<f64> = (0..100).map(|i| full.get(i, 0)).collect();
        vals.sort_by(f64::total_cmp);
        assert_eq!(vals, (0..100).map(|i| i as f64).collect::<Vec<_>>());

        assert!(balanced_subsample(&x, &signs(5), 101, 1).is_err());
    }
}
