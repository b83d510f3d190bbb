//! Numerical checks of the hardness constructions and the low-rank bounds.
//!
//! Each suite reports its worst observed margin along with a pass flag, so
//! a failing check still says by how much.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::{
    block_diagonal, build_index_encoding, case_analysis, check_reduction, default_mu_weight, default_tau, embed_block,
    gen_near_orthogonal, gen_weighted_hypercube, log2, design_k_prime, query_bit, random_bits, IndexInstance,
};
use crate::data::{standardize, DataMatrix, ParamVector};
use crate::error::Result;
use crate::loss::relu_loss;
use crate::lowrank::{additive_bound, loss_gap, tightness_instance, truncated_svd};
use crate::mu_exact::compute_mu_exact_signed;
use crate::rng::{self, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Instances per suite.
    pub instances: u64,
    /// Random directions per instance.
    pub probes: usize,
    /// Size of the index encoding.
    pub index_n: usize,
    /// Bits queried per index instance.
    pub index_queries: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            instances: 10,
            probes: 1000,
            index_n: 256,
            index_queries: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub failures: usize,
    /// Worst value of the checked quantity.
    pub worst: f64,
    pub detail: String,
}

impl SuiteResult {
    fn new(name: &str, checks: usize, failures: usize, worst: f64, detail: String) -> Self {
        Self {
            name: name.into(),
            passed: failures == 0,
            checks,
            failures,
            worst,
            detail,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: {}/{} checks ok, worst {:.6}, {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.checks - self.failures,
            self.checks,
            self.worst,
            self.detail
        )
    }
}

fn random_direction(rng: &mut impl Rng, d: usize) -> Result<ParamVector> {
    ParamVector::new(rng::unit_sphere(rng, d))
}

fn gaussian_matrix(rng: &mut impl Rng, n: usize, d: usize) -> Result<DataMatrix> {
    let data: Vec<f64> = (0..n * d).map(|_| rng::gaussian(rng)).collect();
    DataMatrix::from_row_slice(n, d, &data)
}

/// `|L(t beta)/t - R(beta)| <= n/t` on Gaussian data.
pub fn verify_reduction(cfg: &VerifyConfig, n: usize, d: usize, scales: &[f64]) -> Result<SuiteResult> {
    let (mut checks, mut failures, mut worst) = (0, 0, 0.0f64);
    for inst in 0..cfg.instances {
        let seed = cfg.seed.wrapping_add(inst);
        let x = gaussian_matrix(&mut rng::stream(seed, Stream::Matrix), n, d)?;
        let mut probe = rng::stream(seed, Stream::Probe);
        for _ in 0..cfg.probes {
            let beta = random_direction(&mut probe, d)?;
            for &t in scales {
                let c = check_reduction(&x, &beta, t)?;
                checks += 1;
                failures += usize::from(!c.holds());
                worst = worst.max(c.error / c.bound);
            }
        }
    }
    Ok(SuiteResult::new(
        "reduction",
        checks,
        failures,
        worst,
        "worst is error / (n/t)".into(),
    ))
}

/// Exact μ at most 4 and `R(beta) >= 3 ||beta||_1` on weighted hypercubes.
pub fn verify_hypercube(cfg: &VerifyConfig, ks: &[usize]) -> Result<SuiteResult> {
    let (mut checks, mut failures) = (0, 0);
    let (mut max_mu, mut min_ratio) = (0.0f64, f64::INFINITY);
    for &k in ks {
        for inst in 0..cfg.instances {
            let seed = cfg.seed.wrapping_add(inst);
            let h = gen_weighted_hypercube(k, seed)?;
            let mu = compute_mu_exact_signed(&standardize(&h.x, &h.y)?, 1.0)?.mu;
            checks += 1;
            failures += usize::from(mu > 4.0 + 1e-6);
            max_mu = max_mu.max(mu);
            let mut probe = rng::stream(seed, Stream::Probe);
            for _ in 0..cfg.probes {
                let beta = random_direction(&mut probe, k)?;
                let ratio = relu_loss(&h.x, &beta)? / beta.norm_l1();
                checks += 1;
                failures += usize::from(ratio < 3.0);
                min_ratio = min_ratio.min(ratio);
            }
        }
    }
    Ok(SuiteResult::new(
        "hypercube",
        checks,
        failures,
        max_mu,
        format!("worst is max mu, min R/|beta|_1 = {min_ratio:.6}"),
    ))
}

/// Sampled sign matrices stay below their inner-product threshold.
pub fn verify_near_orthogonal(cfg: &VerifyConfig, n: usize, k: usize) -> Result<SuiteResult> {
    let tau = default_tau(n, k);
    let (mut failures, mut worst) = (0, 0.0f64);
    for inst in 0..cfg.instances {
        let m = gen_near_orthogonal(n, k, tau, cfg.seed.wrapping_add(inst), 10)?;
        failures += usize::from(m.max_inner > tau);
        worst = worst.max(m.max_inner);
    }
    Ok(SuiteResult::new(
        "near-orthogonal",
        cfg.instances as usize,
        failures,
        worst,
        format!("tau = {tau:.3}"),
    ))
}

/// Index encoding with the default parameters for `n`.
pub fn index_instance(n: usize, seed: u64) -> Result<IndexInstance> {
    let m = gen_near_orthogonal(n / 2, design_k_prime(n), 4.0 * log2(n).powi(2), seed, 10)?;
    build_index_encoding(&random_bits(n / 2, seed), default_mu_weight(n), &m)
}

/// ReLU values scaled by an independent uniform `[1, 2]` factor per query.
pub fn perturbed_relu_oracle(x: &DataMatrix, seed: u64) -> impl FnMut(&ParamVector) -> f64 + '_ {
    let mut rng = rng::stream(seed, Stream::Noise);
    move |beta| relu_loss(x, beta).map_or(f64::NAN, |r| r * rng.gen_range(1.0..=2.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexStats {
    pub queries: usize,
    pub wrong_exact: usize,
    pub wrong_perturbed: usize,
    pub case_failures: usize,
    pub min_bit_one: f64,
    pub max_bit_zero: f64,
}

impl IndexStats {
    pub fn separation(&self) -> f64 {
        self.min_bit_one / self.max_bit_zero
    }
}

pub fn index_recovery(n: usize, seeds: impl IntoIterator<Item = u64>, queries: usize) -> Result<IndexStats> {
    let mut s = IndexStats {
        queries: 0,
        wrong_exact: 0,
        wrong_perturbed: 0,
        case_failures: 0,
        min_bit_one: f64::INFINITY,
        max_bit_zero: 0.0,
    };
    for seed in seeds {
        let inst = index_instance(n, seed)?;
        let mut noisy = perturbed_relu_oracle(&inst.x, seed);
        for i in 0..queries.min(inst.bits.len()) {
            let bit = inst.bits[i];
            let r = inst.relu_at_query(i)?;
            if bit {
                s.min_bit_one = s.min_bit_one.min(r);
            } else {
                s.max_bit_zero = s.max_bit_zero.max(r);
            }
            s.queries += 1;
            s.wrong_exact += usize::from(query_bit(&inst, i, |b| relu_loss(&inst.x, b).unwrap_or(f64::NAN))? != bit);
            s.wrong_perturbed += usize::from(query_bit(&inst, i, &mut noisy)? != bit);
            s.case_failures += usize::from(!case_analysis(&inst, i)?.holds());
        }
    }
    Ok(s)
}

pub fn verify_index(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let seeds = (0..cfg.instances).map(|i| cfg.seed.wrapping_add(i));
    let s = index_recovery(cfg.index_n, seeds, cfg.index_queries)?;
    let failures = s.wrong_exact + s.wrong_perturbed + s.case_failures + usize::from(s.separation() < 2.0);
    Ok(SuiteResult::new(
        "index-recovery",
        3 * s.queries + 1,
        failures,
        s.separation(),
        format!(
            "worst is the bit-1 / bit-0 loss ratio, {} exact and {} perturbed misreads",
            s.wrong_exact, s.wrong_perturbed
        ),
    ))
}

/// Two index encodings side by side; each block answers its own queries.
pub fn verify_blocks(cfg: &VerifyConfig, n: usize) -> Result<SuiteResult> {
    let (a, b) = (index_instance(n, cfg.seed)?, index_instance(n, cfg.seed.wrapping_add(1))?);
    let ones = |inst: &IndexInstance| crate::data::LabelVector::constant(inst.x.nrows(), 1.0);
    let (x, _) = block_diagonal(&[(a.x.clone(), ones(&a)?), (b.x.clone(), ones(&b)?)])?;
    let cols = [a.x.ncols(), b.x.ncols()];
    let (mut checks, mut failures) = (0, 0);
    for (j, inst) in [&a, &b].into_iter().enumerate() {
        for i in 0..cfg.index_queries.min(inst.bits.len()) {
            let q = embed_block(&cols, j, &inst.query_vector(i)?)?;
            let joint = relu_loss(&x, &q)?;
            checks += 1;
            failures += usize::from((joint - inst.relu_at_query(i)?).abs() > 1e-9 * joint.max(1.0));
        }
    }
    Ok(SuiteResult::new(
        "block-composition",
        checks,
        failures,
        0.0,
        "joint loss equals the block loss".into(),
    ))
}

/// Additive bound on random data against the truncated SVD.
pub fn verify_lowrank(cfg: &VerifyConfig, n: usize, d: usize) -> Result<SuiteResult> {
    let (mut checks, mut failures, mut worst) = (0, 0, 0.0f64);
    for inst in 0..cfg.instances {
        let seed = cfg.seed.wrapping_add(inst);
        let mut rng = rng::stream(seed, Stream::Matrix);
        let x = gaussian_matrix(&mut rng, n, d)?;
        let r = rng.gen_range(0..=d.min(n));
        let approx = truncated_svd(&x, r)?;
        let beta = ParamVector::new((0..d).map(|_| 3.0 * rng::gaussian(&mut rng)).collect())?;
        let gap = loss_gap(&x, &approx.x_tilde, &beta)?;
        let bound = additive_bound(&x, &approx.x_tilde, &beta)?;
        checks += 1;
        failures += usize::from(gap > bound * (1.0 + 1e-12) + 1e-12);
        if bound > 1e-9 {
            worst = worst.max(gap / bound);
        }
    }
    Ok(SuiteResult::new(
        "lowrank-bound",
        checks,
        failures,
        worst,
        "worst is gap / bound".into(),
    ))
}

/// Scaled identity instances reach the additive bound.
pub fn verify_tightness(sizes: &[usize], x: f64, s: f64) -> Result<SuiteResult> {
    let (mut failures, mut worst) = (0, f64::INFINITY);
    for &n in sizes {
        let ratio = tightness_instance(n, x, s)?.ratio()?.unwrap_or(0.0);
        failures += usize::from(ratio < 1.0 - 1e-6);
        worst = worst.min(ratio);
    }
    Ok(SuiteResult::new(
        "lowrank-tightness",
        sizes.len(),
        failures,
        worst,
        "worst is |gap| / (s n)".into(),
    ))
}

/// Every suite with its default shape.
pub fn verify_all(cfg: &VerifyConfig) -> Result<Vec<SuiteResult>> {
    Ok(vec![
        verify_reduction(cfg, 20, 3, &[10.0, 1e2, 1e3, 1e4])?,
        verify_hypercube(cfg, &[2, 3, 4])?,
        verify_near_orthogonal(cfg, 128, 2401)?,
        verify_index(cfg)?,
        verify_blocks(cfg, 64)?,
        verify_lowrank(cfg, 30, 6)?,
        verify_tightness(&[1, 4, 16], 30.0, 0.5)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let cfg = VerifyConfig {
            instances: 2,
            probes: 20,
            index_n: 64,
            index_queries: 8,
            ..VerifyConfig::default()
        };
        assert!(verify_reduction(&cfg, 10, 2, &[10.0, 1e4]).unwrap().passed);
        assert!(verify_index(&cfg).unwrap().passed);
        assert!(verify_blocks(&cfg, 32).unwrap().passed);
        assert!(verify_tightness(&[1, 4], 30.0, 0.5).unwrap().passed);
    }
}
