use mukit::data::{DataMatrix, LabelVector};
use mukit::datagen::{
    balanced_subsample, gen_synthetic, load_csv, load_csv_from, write_csv, write_csv_to, ColumnRef, CsvSchema,
    FeatureSelect, SyntheticSpec,
};
use mukit::error::MuError;

#[test]
fn csv_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    let (x, y, _) = gen_synthetic(&SyntheticSpec::new(150, 7, 12)).unwrap();
    write_csv(&path, &x, &y).unwrap();
    let (x2, y2) = load_csv(&path, &CsvSchema::default()).unwrap();
    assert_eq!(x.to_row_major(), x2.to_row_major());
    assert_eq!(y, y2);

    // Extreme magnitudes survive too.
    let odd = DataMatrix::from_rows(&[vec![1e-300, -f64::MAX], vec![0.1 + 0.2, f64::MIN_POSITIVE]]).unwrap();
    let labels = LabelVector::new(vec![1.0, -1.0]).unwrap();
    let mut buf = Vec::new();
    write_csv_to(&mut buf, &odd, &labels).unwrap();
    let (back, _) = load_csv_from(buf.as_slice(), &CsvSchema::default()).unwrap();
    assert_eq!(back, odd);
}

#[test]
fn synthetic_rows_do_not_depend_on_n() {
    let (small, ys, _) = gen_synthetic(&SyntheticSpec::new(20, 4, 3)).unwrap();
    let (large, yl, _) = gen_synthetic(&SyntheticSpec::new(200, 4, 3)).unwrap();
    for i in 0..20 {
        assert_eq!(small.row(i), large.row(i));
        assert_eq!(ys.as_slice()[i], yl.as_slice()[i]);
    }
    let (other, _, _) = gen_synthetic(&SyntheticSpec::new(20, 4, 4)).unwrap();
    assert_ne!(small, other);
}

#[test]
fn custom_schema() {
    let text = "id;f1;class;f2\na;1.5;yes;2\nb;-0.5;no;3\nc;0;yes;-1\n";
    let schema = CsvSchema {
        label_column: ColumnRef::Name("class".into()),
        positive_label: "yes".into(),
        negative_label: "no".into(),
        delimiter: b';',
        has_header: true,
        features: FeatureSelect::Numeric,
    };
    let (x, y) = load_csv_from(text.as_bytes(), &schema).unwrap();
    assert_eq!((x.nrows(), x.ncols()), (3, 2));
    assert_eq!(x.row(1), vec![-0.5, 3.0]);
    assert_eq!(y.as_slice(), &[1.0, -1.0, 1.0]);

    let headerless = "1,2,+\n3,4,-\n";
    let schema = CsvSchema {
        label_column: ColumnRef::Index(2),
        positive_label: "+".into(),
        negative_label: "-".into(),
        has_header: false,
        ..CsvSchema::default()
    };
    let (x, y) = load_csv_from(headerless.as_bytes(), &schema).unwrap();
    assert_eq!(x.row(1), vec![3.0, 4.0]);
    assert_eq!(y.as_slice(), &[1.0, -1.0]);
}

#[test]
fn bad_rows_name_the_line() {
    let text = "x0,label\n1,1\n2,maybe\n";
    match load_csv_from(text.as_bytes(), &CsvSchema::default()) {
        Err(MuError::Csv { line, msg }) => {
            assert_eq!(line, 3);
            assert!(msg.contains("maybe"));
        }
        other => panic!("expected a csv error, got {other:?}"),
    }
    let text = "x0,label\n1,1\nabc,-1\n";
    assert!(matches!(load_csv_from(text.as_bytes(), &CsvSchema::default()), Err(MuError::Csv { line: 3, .. })));
    let text = "x0,label\n1,1\n2\n";
    assert!(matches!(load_csv_from(text.as_bytes(), &CsvSchema::default()), Err(MuError::Csv { line: 3, .. })));
}

fn labelled(pos: usize, neg: usize) -> (DataMatrix, LabelVector) {
    let n = pos + neg;
    let x = DataMatrix::from_row_slice(n, 1, &(0..n).map(|i| i as f64).collect::<Vec<_>>()).unwrap();
    let y = LabelVector::new((0..n).map(|i| if i < pos { 1.0 } else { -1.0 }).collect()).unwrap();
    (x, y)
}

#[test]
fn balanced_subsample_counts() {
    let (x, y) = labelled(10, 90);
    let (_, s) = balanced_subsample(&x, &y, 20, 1).unwrap();
    assert_eq!((s.positives(), s.len()), (10, 20));

    let (x, y) = labelled(5, 95);
    let (_, s) = balanced_subsample(&x, &y, 20, 1).unwrap();
    assert_eq!((s.positives(), s.len()), (5, 20));

    let (x, y) = labelled(30, 70);
    let (sx, sy) = balanced_subsample(&x, &y, 100, 1).unwrap();
    let mut ids: Vec<f64> = sx.to_row_major();
    ids.sort_by(f64::total_cmp);
    assert_eq!(ids, (0..100).map(|i| i as f64).collect::<Vec<_>>());
    assert_eq!(sy.positives(), 30);

    assert!(balanced_subsample(&x, &y, 101, 1).is_err());
    assert_eq!(balanced_subsample(&x, &y, 40, 9).unwrap(), balanced_subsample(&x, &y, 40, 9).unwrap());
}
