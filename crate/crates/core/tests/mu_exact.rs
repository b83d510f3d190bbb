use mukit::data::{DataMatrix, LabelVector, ParamVector, SignedData};
use mukit::loss::{mu_ratio, oriented_ratio, split_masses};
use mukit::mu_exact::{compute_mu_exact, compute_mu_exact_signed};
use mukit::mu_oracle::mu_bruteforce_signed;
use mukit::rng::{self, Stream};
use rand::Rng;

fn random_integer_instance(seed: u64) -> SignedData {
    let mut r = rng::stream(seed, Stream::Matrix);
    let n = r.gen_range(2..=8);
    let d = r.gen_range(1..=3);
    loop {
        let data: Vec<f64> = (0..n * d).map(|_| r.gen_range(-5..=5) as f64).collect();
        let m = DataMatrix::from_row_slice(n, d, &data).unwrap();
        if !m.is_zero() {
            return SignedData::from_signed(m);
        }
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn matches_bruteforce_on_integer_instances() {
    for seed in 0..60 {
        let a = random_integer_instance(seed);
        let lp = compute_mu_exact_signed(&a, 1.0).unwrap();
        let bf = mu_bruteforce_signed(&a).unwrap();
        assert!(rel_close(lp.mu, bf.mu, 1e-6), "seed {seed}: lp {} oracle {}", lp.mu, bf.mu);
    }
}

#[test]
fn budget_invariance_and_witness() {
    for seed in 100..130 {
        let a = random_integer_instance(seed);
        let one = compute_mu_exact_signed(&a, 1.0).unwrap();
        let ten = compute_mu_exact_signed(&a, 10.0).unwrap();
        assert!(rel_close(one.mu, ten.mu, 1e-8), "seed {seed}: {} vs {}", one.mu, ten.mu);
        if one.mu.is_finite() {
            let r = mu_ratio(&a, &one.beta_star).unwrap().unwrap();
            assert!(rel_close(r, one.mu, 1e-9));
        }
    }
}

#[test]
fn random_probes_never_exceed_mu() {
    let mut r = rng::stream(5, Stream::Matrix);
    let (n, d) = (30, 4);
    let data: Vec<f64> = (0..n * d).map(|_| rng::gaussian(&mut r)).collect();
    let a = SignedData::from_signed(DataMatrix::from_row_slice(n, d, &data).unwrap());
    let res = compute_mu_exact_signed(&a, 1.0).unwrap();
    assert!(res.mu.is_finite() && res.mu >= 1.0);
    let mut probe = rng::stream(5, Stream::Probe);
    for _ in 0..100 {
        let beta = ParamVector::new(rng::unit_sphere(&mut probe, d)).unwrap();
        let m = split_masses(a.apply(&beta).unwrap().as_slice());
        assert!(oriented_ratio(m).unwrap() <= res.mu + 1e-9);
    }
}

#[test]
fn row_permutation_invariance() {
    let mut r = rng::stream(9, Stream::Matrix);
    let (n, d) = (25, 3);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..d).map(|_| rng::gaussian(&mut r)).collect())
        .collect();
    let labels: Vec<i8> = (0..n).map(|i| if i % 3 == 0 { -1 } else { 1 }).collect();
    let x = DataMatrix::from_rows(&rows).unwrap();
    let y = LabelVector::from_signs(&labels).unwrap();
    let base = compute_mu_exact(&x, &y, 1.0).unwrap().mu;

    let perm: Vec<usize> = (0..n).rev().collect();
    let xp = DataMatrix::from_rows(&perm.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>()).unwrap();
    let yp = LabelVector::from_signs(&perm.iter().map(|&i| labels[i]).collect::<Vec<_>>()).unwrap();
    let permuted = compute_mu_exact(&xp, &yp, 1.0).unwrap().mu;
    assert!(rel_close(base, permuted, 1e-9), "{base} vs {permuted}");
}
