//! Best-first branch-and-bound over binary variables.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::simplex::PreparedLp;
use super::{LpError, LpProblem, LpSolution, LpStatus, SimplexOptions, SimplexSolver};

/// An [`LpProblem`] in which the listed variables must take values in `{0, 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MilpProblem {
    pub base: LpProblem,
    pub binaries: Vec<usize>,
}

impl MilpProblem {
    pub fn new(base: LpProblem, binaries: Vec<usize>) -> Self {
        Self { base, binaries }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MilpOptions {
    /// Maximum number of relaxations solved before giving up.
    pub max_nodes: usize,
    /// A binary within this distance of 0 or 1 counts as integral.
    pub int_tol: f64,
    pub simplex: SimplexOptions,
}

impl Default for MilpOptions {
    fn default() -> Self {
        Self {
            max_nodes: 100_000,
            int_tol: 1e-6,
            simplex: SimplexOptions::default(),
        }
    }
}

pub fn solve_milp(p: &MilpProblem, options: MilpOptions) -> Result<LpSolution, LpError> {
    BranchAndBound::new(options).solve(p)
}

struct Node {
    bound: f64,
    depth: usize,
    seq: usize,
    fixings: Vec<(usize, f64)>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // BinaryHeap pops the maximum, so "greater" means "explore first":
    // lower bound, then deeper, then older.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then(self.depth.cmp(&other.depth))
            .then(other.seq.cmp(&self.seq))
    }
}

/// Branch-and-bound driver. Keeps statistics of the last solve.
#[derive(Debug, Clone, Default)]
pub struct BranchAndBound {
    options: MilpOptions,
    nodes: usize,
}

impl BranchAndBound {
    pub fn new(options: MilpOptions) -> Self {
        Self { options, nodes: 0 }
    }

    /// Relaxations solved during the last call to [`solve`](Self::solve).
    pub fn nodes_explored(&self) -> usize {
        self.nodes
    }

    pub fn solve(&mut self, p: &MilpProblem) -> Result<LpSolution, LpError> {
        p.base.validate()?;
        let n = p.base.num_vars();
        if let Some(&j) = p.binaries.iter().find(|&&j| j >= n) {
            return Err(LpError::Dimension(format!(
                "binary index {j} out of range for {n} variables"
            )));
        }
        self.nodes = 0;
        let prepared = PreparedLp::new(&p.base, self.options.simplex.feas_tol);
        let mut lp = SimplexSolver::new(self.options.simplex);
        let mut lower = p.base.lower.clone();
        let mut upper = p.base.upper.clone();
        for &j in &p.binaries {
            lower[j] = lower[j].max(0.0);
            upper[j] = upper[j].min(1.0);
        }

        let mut heap = BinaryHeap::new();
        heap.push(Node {
            bound: f64::NEG_INFINITY,
            depth: 0,
            seq: 0,
            fixings: Vec::new(),
        });
        let mut seq = 1;
        let mut incumbent: Option<LpSolution> = None;
        let mut total_iterations = 0;

        while let Some(node) = heap.pop() {
            if let Some(inc) = &incumbent {
                if node.bound >= inc.objective - prune_gap(inc.objective) {
                    continue;
                }
            }
            if self.nodes >= self.options.max_nodes {
                return Err(LpError::NodeLimit {
                    limit: self.options.max_nodes,
                    incumbent: incumbent.map(Box::new),
                });
            }
            self.nodes += 1;

            let (lo, up) = apply_fixings(&lower, &upper, &node.fixings);
            let relax = lp.solve_prepared(&prepared, &lo, &up)?;
            total_iterations += relax.iterations;
            match relax.status {
                LpStatus::Infeasible => continue,
                LpStatus::Unbounded => {
                    if node.depth == 0 {
                        return Ok(LpSolution::unbounded(total_iterations));
                    }
                    continue;
                }
                LpStatus::Optimal => {}
            }
            if let Some(inc) = &incumbent {
                if relax.objective >= inc.objective - prune_gap(inc.objective) {
                    continue;
                }
            }

            let branch = p
                .binaries
                .iter()
                .map(|&j| (j, (relax.x[j] - relax.x[j].round()).abs()))
                .filter(|&(_, frac)| frac > self.options.int_tol)
                .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)));

            match branch {
                None => {
                    // Snap the binaries and re-solve so the reported point is exact.
                    let mut fixed = node.fixings.clone();
                    for &j in &p.binaries {
                        fixed.push((j, relax.x[j].round()));
                    }
                    let (lo, up) = apply_fixings(&lower, &upper, &fixed);
                    let clean = lp.solve_prepared(&prepared, &lo, &up)?;
                    total_iterations += clean.iterations;
                    let sol = if clean.is_optimal() { clean } else { relax };
                    if incumbent.as_ref().is_none_or(|inc| sol.objective < inc.objective) {
                        incumbent = Some(sol);
                    }
                }
                Some((j, _)) => {
                    for value in [0.0, 1.0] {
                        let mut fixings = node.fixings.clone();
                        fixings.push((j, value));
                        heap.push(Node {
                            bound: relax.objective,
                            depth: node.depth + 1,
                            seq,
                            fixings,
                        });
                        seq += 1;
                    }
                }
            }
        }

        Ok(match incumbent {
            Some(mut sol) => {
                sol.iterations = total_iterations;
                sol
            }
            None => LpSolution::infeasible(total_iterations),
        })
    }
}

fn prune_gap(objective: f64) -> f64 {
    1e-9 * (1.0 + objective.abs())
}

fn apply_fixings(lower: &[f64], upper: &[f64], fixings: &[(usize, f64)]) -> (Vec<f64>, Vec<f64>) {
    let mut lo = lower.to_vec();
    let mut up = upper.to_vec();
    for &(j, v) in fixings {
        lo[j] = v;
        up[j] = v;
    }
    (lo, up)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_binary() {
        let mut base = LpProblem::new(vec![-1.0]);
        base.set_bounds(0, 0.0, 1.0);
        let s = solve_milp(&MilpProblem::new(base, vec![0]), MilpOptions::default()).unwrap();
        assert!((s.objective + 1.0).abs() < 1e-12);
        assert_eq!(s.x[0], 1.0);
    }

    #[test]
    fn big_m_complementarity() {
        // min x + y with x + y >= 1, x <= 2v, y <= 2(1 - v).
        let mut base = LpProblem::new(vec![1.0, 1.0, 0.0]);
        base.set_bounds(2, 0.0, 1.0);
        base.add_ge(vec![1.0, 1.0, 0.0], 1.0)
            .add_le(vec![1.0, 0.0, -2.0], 0.0)
            .add_le(vec![0.0, 1.0, 2.0], 2.0);
        let s = solve_milp(&MilpProblem::new(base, vec![2]), MilpOptions::default()).unwrap();
        assert!((s.objective - 1.0).abs() < 1e-12);
        assert!(s.x[0] * s.x[1] == 0.0);
    }

    #[test]
    fn knapsack_needs_branching() {
        // max 5a + 4b + 3c subject to three packing rows; best pick is {a, b}
        let mut base = LpProblem::new(vec![-5.0, -4.0, -3.0]);
        base.add_le(vec![2.0, 3.0, 1.0], 5.0)
            .add_le(vec![4.0, 1.0, 2.0], 11.0)
            .add_le(vec![3.0, 4.0, 2.0], 8.0);
        for j in 0..3 {
            base.set_bounds(j, 0.0, 1.0);
        }
        let mut bb = BranchAndBound::new(MilpOptions::default());
        let s = bb.solve(&MilpProblem::new(base, vec![0, 1, 2])).unwrap();
        assert!((s.objective + 9.0).abs() < 1e-9);
        assert!(bb.nodes_explored() >= 1);
    }

    #[test]
    fn infeasible_milp() {
        // 0.3 <= v <= 0.7 has no binary point.
        let mut base = LpProblem::new(vec![1.0]);
        base.add_ge(vec![1.0], 0.3).add_le(vec![1.0], 0.7);
        let s = solve_milp(&MilpProblem::new(base, vec![0]), MilpOptions::default()).unwrap();
        assert_eq!(s.status, LpStatus::Infeasible);
    }

    #[test]
    fn node_limit_returns_incumbent_slot() {
        let mut base = LpProblem::new(vec![-1.0, -1.0]);
        base.add_le(vec![2.0, 2.0], 3.0);
        let p = MilpProblem::new(base, vec![0, 1]);
        let opts = MilpOptions {
            max_nodes: 1,
            ..MilpOptions::default()
        };
        assert!(matches!(solve_milp(&p, opts), Err(LpError::NodeLimit { limit: 1, .. })));
    }
}
