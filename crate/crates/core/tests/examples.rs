//! Runs every example and checks what it reports.

#[allow(dead_code)]
#[path = "../examples/brute_force_oracle.rs"]
mod brute_force_oracle;
#[allow(dead_code)]
#[path = "../examples/csv_data.rs"]
mod csv_data;
#[allow(dead_code)]
#[path = "../examples/exact_mu.rs"]
mod exact_mu;
#[allow(dead_code)]
#[path = "../examples/experiment_grid.rs"]
mod experiment_grid;
#[allow(dead_code)]
#[path = "../examples/hypercube_instance.rs"]
mod hypercube_instance;
#[allow(dead_code)]
#[path = "../examples/index_encoding.rs"]
mod index_encoding;
#[allow(dead_code)]
#[path = "../examples/lowrank_bound.rs"]
mod lowrank_bound;
#[allow(dead_code)]
#[path = "../examples/relu_reduction.rs"]
mod relu_reduction;
#[allow(dead_code)]
#[path = "../examples/sign_program.rs"]
mod sign_program;
#[allow(dead_code)]
#[path = "../examples/simplex_lp.rs"]
mod simplex_lp;
#[allow(dead_code)]
#[path = "../examples/sketch_bounds.rs"]
mod sketch_bounds;
#[allow(dead_code)]
#[path = "../examples/verify_suites.rs"]
mod verify_suites;

#[test]
fn exact_mu_example() {
    let (noisy, separable) = exact_mu::run_example().unwrap();
    assert!(noisy.is_finite() && noisy >= 1.0);
    assert_eq!(separable, f64::INFINITY);
}

#[test]
fn oracle_example_agrees() {
    let (lp, bf) = brute_force_oracle::run_example().unwrap();
    assert!((lp - bf).abs() <= 1e-6 * lp.abs().max(1.0), "{lp} vs {bf}");
}

#[test]
fn sketch_example_reports_ordered_bounds() {
    let (exact, bounds) = sketch_bounds::run_example().unwrap();
    assert!(exact >= 1.0);
    for b in bounds {
        assert!(b.lower <= b.upper);
        assert!(b.certified);
    }
}

#[test]
fn simplex_example_optimum() {
    let (value, x) = simplex_lp::run_example().unwrap();
    // Vertex a = 3, b = 1.
    assert!((value - 11.0).abs() < 1e-9);
    assert!((x[0] - 3.0).abs() < 1e-9 && (x[1] - 1.0).abs() < 1e-9);
}

#[test]
fn sign_program_example_consistent() {
    let [milp, orth, desc] = sign_program::run_example().unwrap();
    assert!((milp - orth).abs() < 1e-8);
    assert!(desc >= orth - 1e-10);
}

#[test]
fn lowrank_example_within_bound() {
    let rows = lowrank_bound::run_example().unwrap();
    for (r, gap, bound) in rows {
        assert!(gap <= bound + 1e-9, "rank {r}");
    }
}

#[test]
fn hypercube_example_mu_small() {
    for (k, mu, _) in hypercube_instance::run_example().unwrap() {
        assert!(mu <= 4.0 + 1e-6, "k={k}");
    }
}

#[test]
fn index_example_recovers_bits() {
    assert_eq!(index_encoding::run_example().unwrap(), 16);
}

#[test]
fn reduction_example_shrinks() {
    let rows = relu_reduction::run_example().unwrap();
    assert!(rows.iter().all(|(_, e, b)| e <= b));
    assert!(rows.last().unwrap().1 < rows[0].1);
}

#[test]
fn csv_example_round_trips() {
    let (same, pos, neg) = csv_data::run_example().unwrap();
    assert!(same);
    assert_eq!(pos + neg, 100);
    assert!(pos.abs_diff(neg) <= 1 || pos < 50);
}

#[test]
fn experiment_example_rows() {
    let out = experiment_grid::run_example().unwrap();
    assert_eq!(out.rows.len(), 1 + 3 * 3 * 3);
    assert!(out.all_succeeded());
}

#[test]
fn verify_example_suites_pass() {
    for s in verify_suites::run_example().unwrap() {
        assert!(s.passed, "{}", s.line());
    }
}
