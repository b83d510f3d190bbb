//! Sketched bounds on μ: a dense Cauchy sketch conditions a basis `U` of the
//! column space, and a big-M program finds the least negative mass of `U beta`
//! over the ℓ1 unit sphere.

use std::collections::HashSet;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::data::{standardize, DataMatrix, LabelVector, ParamVector, SignedData};
use crate::error::{MuError, Result};
use crate::lp::{BranchAndBound, LpError, LpProblem, LpStatus, MilpOptions, MilpProblem, SimplexSolver};
use crate::rng::{self, Stream};

/// Big-M constant. `||beta||_1 = 1` bounds every `|beta_i|` by one, so the
/// split variables never exceed two.
pub const BIG_M: f64 = 2.0;
pub const SKETCH_RETRIES: u64 = 3;
const RANK_TOL: f64 = 1e-10;
/// Largest column count for which [`SignSearch::Auto`] enumerates orthants.
pub const ORTHANT_MAX_COLS: usize = 12;
pub const DEFAULT_STARTS: usize = 4;

/// How [`approx_mu_bounds`] solves the sign program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignSearch {
    /// Orthant enumeration up to [`ORTHANT_MAX_COLS`] columns, descent beyond.
    Auto,
    /// Branch-and-bound on the big-M program.
    Milp,
    /// One small LP per sign pattern. Exact, `2^d` solves.
    Orthants,
    /// Sign descent from this many starting patterns. Not certified.
    Descent { starts: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SketchConfig {
    pub n_prime: usize,
    pub delta: f64,
    pub seed: u64,
    /// Branch-and-bound budget for the sign program.
    pub max_nodes: usize,
    pub search: SignSearch,
    /// Multiplier turning the lower bound into the upper one. `None` uses
    /// `d * ln(d / delta)`.
    pub upper_factor: Option<f64>,
}

impl SketchConfig {
    pub fn new(n_prime: usize, delta: f64, seed: u64) -> Self {
        Self {
            n_prime,
            delta,
            seed,
            max_nodes: MilpOptions::default().max_nodes,
            search: SignSearch::Auto,
            upper_factor: None,
        }
    }

    pub fn validate(&self, d: usize) -> Result<()> {
        if self.n_prime < d {
            return Err(MuError::InvalidInput(format!(
                "sketch size {} is below the column count {d}",
                self.n_prime
            )));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(MuError::InvalidInput(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if self.max_nodes == 0 {
            return Err(MuError::InvalidInput("node budget must be positive".into()));
        }
        if self.search == (SignSearch::Descent { starts: 0 }) {
            return Err(MuError::InvalidInput("descent needs at least one start".into()));
        }
        Ok(())
    }

    pub fn factor(&self, d: usize) -> f64 {
        self.upper_factor
            .unwrap_or_else(|| d as f64 * (d as f64 / self.delta).ln())
    }
}

/// `S A` with `S` an `n' x n` matrix of standard Cauchy entries divided by `n'`.
pub fn cauchy_sketch(a: &SignedData, cfg: &SketchConfig) -> Result<DataMatrix> {
    cauchy_sketch_with_seed(a, cfg.n_prime, cfg.seed)
}

fn cauchy_sketch_with_seed(a: &SignedData, n_prime: usize, seed: u64) -> Result<DataMatrix> {
    if n_prime == 0 {
        return Err(MuError::InvalidInput("sketch size must be positive".into()));
    }
    let am = a.matrix().as_matrix();
    let (n, d) = (am.nrows(), am.ncols());
    let mut rng = rng::stream(seed, Stream::Sketch);
    let scale = 1.0 / n_prime as f64;
    let mut out = DMatrix::zeros(n_prime, d);
    for k in 0..n_prime {
        for i in 0..n {
            let s = rng::cauchy(&mut rng) * scale;
            for j in 0..d {
                out[(k, j)] += s * am[(i, j)];
            }
        }
    }
    DataMatrix::new(out)
}

/// `U = A R^{-1}` from the QR factorization of a sketch of `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionedBasis {
    pub u: DataMatrix,
    pub r: DMatrix<f64>,
    /// `sum_j ||U e_j||_1`.
    pub alpha: f64,
    /// `max_j ||R^{-1} e_j||_1`: a unit coordinate step in `U`-space is at
    /// most this long in the original parameters.
    pub beta_bound: f64,
}

pub fn well_conditioned_basis(a: &SignedData, sketched: &DataMatrix) -> Result<ConditionedBasis> {
    let d = a.ncols();
    if sketched.ncols() != d {
        return Err(MuError::Dimension(format!(
            "sketch has {} columns, data has {d}",
            sketched.ncols()
        )));
    }
    if sketched.nrows() < d {
        return Err(MuError::RankDeficientSketch {
            rank: sketched.nrows(),
            cols: d,
        });
    }
    let r = sketched.as_matrix().clone().qr().r();
    let diag_max = r.diagonal().amax();
    let rank = r
        .diagonal()
        .iter()
        .filter(|v| v.abs() > RANK_TOL * diag_max)
        .count();
    if diag_max == 0.0 || rank < d {
        return Err(MuError::RankDeficientSketch { rank, cols: d });
    }
    // U R = A, i.e. R^T U^T = A^T.
    let ut = r
        .transpose()
        .solve_lower_triangular(&a.matrix().as_matrix().transpose())
        .ok_or(MuError::RankDeficientSketch { rank, cols: d })?;
    let u = DataMatrix::new(ut.transpose())?;
    let alpha = u.as_matrix().iter().map(|v| v.abs()).sum();
    let rinv = r
        .clone()
        .try_inverse()
        .ok_or(MuError::RankDeficientSketch { rank, cols: d })?;
    let beta_bound = rinv
        .column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    Ok(ConditionedBasis {
        u,
        r,
        alpha,
        beta_bound,
    })
}

/// Column layout of the sign program built by [`build_neg_mass_milp`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NegMassLayout {
    pub n: usize,
    pub d: usize,
}

impl NegMassLayout {
    pub fn beta(&self, i: usize) -> usize {
        i
    }
    pub fn pos(&self, i: usize) -> usize {
        self.d + i
    }
    pub fn neg(&self, i: usize) -> usize {
        self.d + self.n + i
    }
    pub fn c(&self, i: usize) -> usize {
        self.d + 2 * self.n + i
    }
    pub fn dd(&self, i: usize) -> usize {
        2 * self.d + 2 * self.n + i
    }
    pub fn h(&self, i: usize) -> usize {
        3 * self.d + 2 * self.n + i
    }
    pub fn v(&self, i: usize) -> usize {
        4 * self.d + 2 * self.n + i
    }
    pub fn num_vars(&self) -> usize {
        5 * self.d + 2 * self.n
    }
}

/// The sign program: minimize `sum b` subject to `U beta = a - b`,
/// `h = c - beta = dd + beta`, `c <= M v`, `dd <= M (1 - v)`, `sum h >= 1`,
/// all of `a, b, c, dd, h >= 0` and `v` binary.
pub fn build_neg_mass_milp(u: &DataMatrix) -> (MilpProblem, NegMassLayout) {
    let (n, d) = (u.nrows(), u.ncols());
    let lay = NegMassLayout { n, d };
    let nv = lay.num_vars();
    let mut objective = vec![0.0; nv];
    for i in 0..n {
        objective[lay.neg(i)] = 1.0;
    }
    let mut lp = LpProblem::new(objective);
    for i in 0..d {
        lp.set_free(lay.beta(i));
        lp.set_bounds(lay.v(i), 0.0, 1.0);
    }
    let um = u.as_matrix();
    for k in 0..n {
        let mut row = vec![0.0; nv];
        for i in 0..d {
            row[lay.beta(i)] = um[(k, i)];
        }
        row[lay.pos(k)] = -1.0;
        row[lay.neg(k)] = 1.0;
        lp.add_eq(row, 0.0);
    }
    for i in 0..d {
        let mut row = vec![0.0; nv];
        row[lay.h(i)] = 1.0;
        row[lay.c(i)] = -1.0;
        row[lay.beta(i)] = 1.0;
        lp.add_eq(row, 0.0);

        let mut row = vec![0.0; nv];
        row[lay.h(i)] = 1.0;
        row[lay.dd(i)] = -1.0;
        row[lay.beta(i)] = -1.0;
        lp.add_eq(row, 0.0);
    }
    for i in 0..d {
        let mut row = vec![0.0; nv];
        row[lay.c(i)] = 1.0;
        row[lay.v(i)] = -BIG_M;
        lp.add_le(row, 0.0);

        let mut row = vec![0.0; nv];
        row[lay.dd(i)] = 1.0;
        row[lay.v(i)] = BIG_M;
        lp.add_le(row, BIG_M);
    }
    let mut row = vec![0.0; nv];
    for i in 0..d {
        row[lay.h(i)] = 1.0;
    }
    lp.add_ge(row, 1.0);
    let binaries = (0..d).map(|i| lay.v(i)).collect();
    (MilpProblem::new(lp, binaries), lay)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NegMass {
    /// Least negative mass found over `||beta||_1 = 1`.
    pub t: f64,
    pub beta: ParamVector,
    /// `false` when the node budget ran out and `t` is only the best found.
    pub exact: bool,
    pub nodes: usize,
    /// Largest `c_i * dd_i` at the reported point.
    pub complementarity: f64,
}

/// `min ||(U beta)^-||_1` over `||beta||_1 = 1`, by branch-and-bound on the
/// sign program with at most `max_nodes` relaxations.
pub fn solve_min_neg_mass(u: &DataMatrix, max_nodes: usize) -> Result<NegMass> {
    if u.is_zero() {
        return Err(MuError::ZeroMatrix);
    }
    let (milp, lay) = build_neg_mass_milp(u);
    let mut bb = BranchAndBound::new(MilpOptions {
        max_nodes,
        ..MilpOptions::default()
    });
    let (sol, exact) = match bb.solve(&milp) {
        Ok(sol) => (sol, true),
        Err(LpError::NodeLimit {
            incumbent: Some(sol),
            ..
        }) => (*sol, false),
        Err(e) => return Err(e.into()),
    };
    if !sol.is_optimal() {
        return Err(MuError::LpStatus(sol.status));
    }
    let raw: Vec<f64> = (0..lay.d).map(|i| sol.x[lay.beta(i)]).collect();
    let l1: f64 = raw.iter().map(|v| v.abs()).sum();
    let beta = ParamVector::new(raw.iter().map(|v| v / l1).collect())?;
    // Recompute the mass at the normalized point rather than trusting the
    // solver objective.
    let t = neg_mass(u, &beta)?;
    let complementarity = (0..lay.d)
        .map(|i| sol.x[lay.c(i)] * sol.x[lay.dd(i)])
        .fold(0.0, f64::max);
    Ok(NegMass {
        t,
        beta,
        exact,
        nodes: bb.nodes_explored(),
        complementarity,
    })
}

/// Least negative mass over the hyperplane `sigma^T beta = 1`.
///
/// Every point of that hyperplane has `||beta||_1 >= 1`, so the value bounds
/// `t` from above, and it is no larger than the minimum over the orthant
/// facet `sigma`. Taking the minimum over all sign patterns therefore gives
/// `t` exactly. Solved through its dual, which has only `d` rows:
/// `max lambda` subject to `U^T y + lambda sigma = 0`, `0 <= y <= 1`.
/// The returned `t` is the mass of the normalized minimizer.
pub fn orthant_neg_mass(u: &DataMatrix, sigma: &[f64]) -> Result<NegMass> {
    let (n, d) = (u.nrows(), u.ncols());
    if sigma.len() != d {
        return Err(MuError::Dimension(format!(
            "sign pattern has {} entries, U has {d} columns",
            sigma.len()
        )));
    }
    let um = u.as_matrix();
    let mut objective = vec![0.0; n + 1];
    objective[n] = -1.0;
    let mut lp = LpProblem::new(objective);
    for k in 0..n {
        lp.set_bounds(k, 0.0, 1.0);
    }
    lp.set_free(n);
    for j in 0..d {
        let mut row: Vec<f64> = um.column(j).iter().copied().collect();
        row.push(sigma[j]);
        lp.add_eq(row, 0.0);
    }
    let sol = SimplexSolver::default().solve(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(MuError::LpStatus(sol.status));
    }
    let raw: Vec<f64> = sol.duals[..d].iter().map(|v| -v).collect();
    let l1: f64 = raw.iter().map(|v| v.abs()).sum();
    let beta = if l1 > 0.0 {
        raw.iter().map(|v| v / l1).collect()
    } else {
        sigma.iter().map(|s| s / d as f64).collect()
    };
    let beta = ParamVector::new(beta)?;
    Ok(NegMass {
        t: neg_mass(u, &beta)?,
        beta,
        exact: true,
        nodes: 1,
        complementarity: 0.0,
    })
}

/// `t` by enumerating all `2^d` sign patterns.
pub fn min_neg_mass_orthants(u: &DataMatrix) -> Result<NegMass> {
    let d = u.ncols();
    if u.is_zero() {
        return Err(MuError::ZeroMatrix);
    }
    if d >= usize::BITS as usize - 1 {
        return Err(MuError::SizeGuard(format!("{d} columns is too many orthants")));
    }
    let mut best: Option<NegMass> = None;
    let mut solves = 0;
    for mask in 0..(1usize << d) {
        let sigma: Vec<f64> = (0..d)
            .map(|j| if mask >> j & 1 == 1 { -1.0 } else { 1.0 })
            .collect();
        let cand = orthant_neg_mass(u, &sigma)?;
        solves += 1;
        if best.as_ref().is_none_or(|b| cand.t < b.t) {
            best = Some(cand);
        }
    }
    let mut best = best.expect("at least one orthant");
    best.nodes = solves;
    Ok(best)
}

/// Upper estimate of `t` by sign descent.
///
/// From a pattern `sigma`, solve [`orthant_neg_mass`] and move to the signs
/// of the minimizer. The mass never increases along the way, so each start
/// ends at a pattern that reproduces itself. Starts are the signs of
/// `U^T 1` and `starts - 1` seeded random patterns.
pub fn min_neg_mass_descent(u: &DataMatrix, starts: usize, seed: u64) -> Result<NegMass> {
    let d = u.ncols();
    if u.is_zero() {
        return Err(MuError::ZeroMatrix);
    }
    let mut rng = rng::stream(seed, Stream::Signs);
    let col_sums: Vec<f64> = u.as_matrix().row_sum().iter().copied().collect();
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    let mut best: Option<NegMass> = None;
    let mut solves = 0;
    for s in 0..starts.max(1) {
        let mut sigma: Vec<f64> = if s == 0 {
            col_sums.iter().map(|v| if *v < 0.0 { -1.0 } else { 1.0 }).collect()
        } else {
            (0..d).map(|_| rng::rademacher(&mut rng)).collect()
        };
        while seen.insert(sigma.iter().map(|v| *v < 0.0).collect()) {
            let cand = orthant_neg_mass(u, &sigma)?;
            solves += 1;
            let next: Vec<f64> = cand
                .beta
                .as_slice()
                .iter()
                .zip(&sigma)
                .map(|(b, s)| if *b > 0.0 { 1.0 } else if *b < 0.0 { -1.0 } else { *s })
                .collect();
            if best.as_ref().is_none_or(|b| cand.t < b.t) {
                best = Some(cand);
            }
            sigma = next;
        }
    }
    let mut best = best.expect("at least one start");
    best.exact = false;
    best.nodes = solves;
    Ok(best)
}

fn neg_mass(u: &DataMatrix, beta: &ParamVector) -> Result<f64> {
    Ok(u.mul_vec(beta)?.iter().map(|v| (-v).max(0.0)).sum())
}

/// Dispatches on `search`. `seed` feeds the random descent starts.
pub fn min_neg_mass(u: &DataMatrix, search: SignSearch, max_nodes: usize, seed: u64) -> Result<NegMass> {
    match search {
        SignSearch::Milp => solve_min_neg_mass(u, max_nodes),
        SignSearch::Orthants => min_neg_mass_orthants(u),
        SignSearch::Descent { starts } => min_neg_mass_descent(u, starts, seed),
        SignSearch::Auto if u.ncols() <= ORTHANT_MAX_COLS => min_neg_mass_orthants(u),
        SignSearch::Auto => min_neg_mass_descent(u, DEFAULT_STARTS, seed),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuBounds {
    pub t: f64,
    pub lower: f64,
    pub upper: f64,
    pub upper_factor: f64,
    /// Rows and columns of the conditioned basis.
    pub basis_dims: (usize, usize),
    pub alpha: f64,
    pub beta_bound: f64,
    /// The sign program was solved to optimality.
    pub certified: bool,
    pub nodes: usize,
    /// Seed that produced a full-rank sketch.
    pub sketch_seed: u64,
}

pub fn approx_mu_bounds(x: &DataMatrix, y: &LabelVector, cfg: &SketchConfig) -> Result<MuBounds> {
    approx_mu_bounds_signed(&standardize(x, y)?, cfg)
}

pub fn approx_mu_bounds_signed(a: &SignedData, cfg: &SketchConfig) -> Result<MuBounds> {
    let d = a.ncols();
    cfg.validate(d)?;
    if a.matrix().is_zero() {
        return Err(MuError::ZeroMatrix);
    }
    let mut last_err = None;
    for attempt in 0..SKETCH_RETRIES {
        let seed = retry_seed(cfg.seed, attempt);
        let sketched = cauchy_sketch_with_seed(a, cfg.n_prime, seed)?;
        let basis = match well_conditioned_basis(a, &sketched) {
            Ok(b) => b,
            Err(e @ MuError::RankDeficientSketch { .. }) => {
                last_err = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let neg = min_neg_mass(&basis.u, cfg.search, cfg.max_nodes, seed)?;
        let factor = cfg.factor(d);
        let zero = neg.t <= 1e-9 * basis.alpha;
        let (lower, upper) = if zero {
            (f64::INFINITY, f64::INFINITY)
        } else {
            (1.0 / neg.t, factor / neg.t)
        };
        return Ok(MuBounds {
            t: neg.t,
            lower,
            upper,
            upper_factor: factor,
            basis_dims: (basis.u.nrows(), basis.u.ncols()),
            alpha: basis.alpha,
            beta_bound: basis.beta_bound,
            certified: neg.exact,
            nodes: neg.nodes,
            sketch_seed: seed,
        });
    }
    Err(last_err.expect("at least one attempt"))
}

/// Seed of the `attempt`-th sketch; attempt 0 is the configured seed.
pub fn retry_seed(seed: u64, attempt: u64) -> u64 {
    seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// `S A` rows as a sketched data set, for computing μ on the sketch itself.
pub fn sketched_signed(a: &SignedData, cfg: &SketchConfig) -> Result<SignedData> {
    Ok(SignedData::from_signed(cauchy_sketch(a, cfg)?))
}

/// Median over `probes` of `||S A beta||_1 / ||A beta||_1` for random unit `beta`.
pub fn median_distortion(a: &SignedData, sketched: &DataMatrix, probes: usize, seed: u64) -> Result<f64> {
    let mut rng = rng::stream(seed, Stream::Probe);
    let mut ratios = Vec::with_capacity(probes);
    for _ in 0..probes {
        let beta = ParamVector::new(rng::unit_sphere(&mut rng, a.ncols()))?;
        let full: f64 = a.apply(&beta)?.iter().map(|v| v.abs()).sum();
        let sk: f64 = sketched.mul_vec(&beta)?.iter().map(|v| v.abs()).sum();
        if full > 0.0 {
            ratios.push(sk / full);
        }
    }
    if ratios.is_empty() {
        return Err(MuError::ZeroMatrix);
    }
    ratios.sort_by(f64::total_cmp);
    Ok(ratios[ratios.len() / 2])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> DataMatrix {
        DataMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn neg_mass_small_cases() {
        let t = solve_min_neg_mass(&mat(&[&[1.0], &[-1.0]]), 1000).unwrap();
        assert!((t.t - 1.0).abs() < 1e-12 && t.exact);
        assert!(solve_min_neg_mass(&mat(&[&[1.0], &[1.0]]), 1000).unwrap().t < 1e-12);
        assert!(solve_min_neg_mass(&mat(&[&[1.0, 0.0], &[0.0, 1.0]]), 1000).unwrap().t < 1e-12);
    }

    #[test]
    fn sketch_shape_and_determinism() {
        let a = SignedData::from_signed(mat(&[&[1.0, 2.0], &[3.0, -1.0], &[0.5, 0.5]]));
        let cfg = SketchConfig::new(5, 0.1, 42);
        let s1 = cauchy_sketch(&a, &cfg).unwrap();
        let s2 = cauchy_sketch(&a, &cfg).unwrap();
        assert_eq!((s1.nrows(), s1.ncols()), (5, 2));
        assert_eq!(s1, s2);
    }

    #[test]
    fn basis_reconstructs_data() {
        let a = SignedData::from_signed(mat(&[&[1.0, 2.0], &[3.0, -1.0], &[0.5, 0.5], &[-2.0, 1.0]]));
        let sk = cauchy_sketch(&a, &SketchConfig::new(4, 0.1, 3)).unwrap();
        let b = well_conditioned_basis(&a, &sk).unwrap();
        let back = b.u.as_matrix() * &b.r;
        let err = (back - a.matrix().as_matrix()).amax();
        assert!(err <= 1e-10 * a.matrix().as_matrix().amax());
    }

    #[test]
    fn rank_deficient_sketch_reported() {
        let a = SignedData::from_signed(mat(&[&[1.0, 2.0], &[2.0, 4.0]]));
        let sk = cauchy_sketch(&a, &SketchConfig::new(3, 0.1, 1)).unwrap();
        assert!(matches!(
            well_conditioned_basis(&a, &sk),
            Err(MuError::RankDeficientSketch { .. })
        ));
        assert!(matches!(
            approx_mu_bounds_signed(&a, &SketchConfig::new(3, 0.1, 1)),
            Err(MuError::RankDeficientSketch { .. })
        ));
    }

    #[test]
    fn separable_gives_infinite_bounds() {
        let a = SignedData::from_signed(mat(&[&[1.0, 0.2], &[2.0, -0.1], &[0.5, 0.0]]));
        let b = approx_mu_bounds_signed(&a, &SketchConfig::new(3, 0.1, 5)).unwrap();
        assert_eq!((b.lower, b.upper), (f64::INFINITY, f64::INFINITY));
    }

    fn random_u(seed: u64, n: usize, d: usize) -> DataMatrix {
        let mut r = rng::stream(seed, Stream::Matrix);
        let data: Vec<f64> = (0..n * d).map(|_| rng::gaussian(&mut r) + 0.3).collect();
        DataMatrix::from_row_slice(n, d, &data).unwrap()
    }

    #[test]
    fn orthants_match_milp() {
        for seed in 0..8 {
            let u = random_u(seed, 12, 3);
            let milp = solve_min_neg_mass(&u, 10_000).unwrap();
            let orth = min_neg_mass_orthants(&u).unwrap();
            assert!((milp.t - orth.t).abs() <= 1e-8, "seed {seed}: {} vs {}", milp.t, orth.t);
            assert!(milp.complementarity <= 1e-8);
        }
    }

    #[test]
    fn descent_bounds_exact_from_above() {
        for seed in 0..4 {
            let u = random_u(seed, 40, 6);
            let exact = min_neg_mass_orthants(&u).unwrap();
            let desc = min_neg_mass_descent(&u, 3, seed).unwrap();
            assert!(desc.t >= exact.t - 1e-12 && !desc.exact);
            assert_eq!(exact.nodes, 64);
        }
    }
}
