use proptest::prelude::*;

use mukit::data::{DataMatrix, ParamVector, SignedData};
use mukit::loss::mu_ratio;
use mukit::lp::{solve_lp, LpProblem, LpStatus};
use mukit::mu_exact::compute_mu_exact_signed;
use mukit::mu_sketch::{min_neg_mass_descent, min_neg_mass_orthants};

fn matrix(max_n: usize, max_d: usize) -> impl Strategy<Value = DataMatrix> {
    (2..=max_n, 1..=max_d).prop_flat_map(|(n, d)| {
        prop::collection::vec(-4i32..=4, n * d).prop_filter_map("nonzero", move |v| {
            let data: Vec<f64> = v.iter().map(|&x| x as f64).collect();
            let m = DataMatrix::from_row_slice(n, d, &data).ok()?;
            (!m.is_zero()).then_some(m)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mu_at_least_one_and_dominates_probes(m in matrix(10, 3), probe in prop::collection::vec(-1.0f64..1.0, 3)) {
        let a = SignedData::from_signed(m);
        let mu = compute_mu_exact_signed(&a, 1.0).unwrap().mu;
        prop_assert!(mu >= 1.0 - 1e-9);
        let beta = ParamVector::new(probe[..a.ncols()].to_vec()).unwrap();
        if let Some(r) = mu_ratio(&a, &beta).unwrap() {
            prop_assert!(r <= mu * (1.0 + 1e-7) || mu.is_infinite());
        }
    }

    #[test]
    fn mu_invariant_under_column_mixing(m in matrix(10, 2), s in 0.2f64..5.0, c in -2.0f64..2.0) {
        let a = SignedData::from_signed(m.clone());
        let mut mixed = m.into_matrix();
        if mixed.ncols() == 2 {
            let col0 = mixed.column(0).clone_owned();
            let col1 = mixed.column(1).clone_owned();
            mixed.set_column(0, &(col0.clone() * s));
            mixed.set_column(1, &(col1 + col0 * c));
        } else {
            mixed *= s;
        }
        let b = SignedData::from_signed(DataMatrix::new(mixed).unwrap());
        let (ma, mb) = (compute_mu_exact_signed(&a, 1.0).unwrap().mu, compute_mu_exact_signed(&b, 1.0).unwrap().mu);
        if ma.is_finite() && mb.is_finite() {
            prop_assert!((ma - mb).abs() <= 1e-6 * ma.max(1.0), "{} vs {}", ma, mb);
        } else {
            prop_assert_eq!(ma.is_finite(), mb.is_finite());
        }
    }

    #[test]
    fn descent_never_beats_orthants(m in matrix(20, 4), seed in 0u64..1000) {
        let exact = min_neg_mass_orthants(&m).unwrap();
        let desc = min_neg_mass_descent(&m, 3, seed).unwrap();
        prop_assert!(desc.t >= exact.t - 1e-9);
        prop_assert!((exact.beta.norm_l1() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn simplex_solution_is_feasible_and_beats_vertices(
        a in prop::collection::vec(0.0f64..3.0, 6),
        b in prop::collection::vec(1.0f64..5.0, 2),
        c in prop::collection::vec(-2.0f64..2.0, 3),
    ) {
        // min c^T x over a bounded polytope with x = 0 feasible.
        let mut lp = LpProblem::new(c.clone());
        lp.add_le(a[..3].to_vec(), b[0]).add_le(a[3..].to_vec(), b[1]);
        for j in 0..3 {
            lp.set_bounds(j, 0.0, 2.0);
        }
        let sol = solve_lp(&lp).unwrap();
        prop_assert_eq!(sol.status, LpStatus::Optimal);
        prop_assert!(lp.max_violation(&sol.x) <= 1e-8);
        // Every feasible box corner is no better than the optimum.
        for mask in 0..8u32 {
            let x: Vec<f64> = (0..3).map(|j| if mask >> j & 1 == 1 { 2.0 } else { 0.0 }).collect();
            if lp.max_violation(&x) <= 0.0 {
                prop_assert!(sol.objective <= lp.objective_value(&x) + 1e-8);
            }
        }
    }
}
