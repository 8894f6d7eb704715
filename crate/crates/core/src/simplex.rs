//! Dense two-phase simplex solver.
//!
//! Minimizes `c·x` subject to `A x {<=, =, >=} b` and `x >= 0`. Phase 1
//! minimizes the sum of artificial variables to find a basic feasible point (or
//! prove there is none); phase 2 optimizes the real objective from there.
//! Entering and leaving variables follow Bland's smallest-index rule, which
//! rules out cycling.
//!
//! The problems fed to this solver (local-polytope membership and L1-distance
//! programs) are small and well scaled, so a dense tableau is simpler and more
//! auditable than a factorized implementation, and float arithmetic with the
//! tolerances below is ample.

use crate::error::{Error, Result};

/// Smallest magnitude accepted for a pivot element or a reduced-cost
/// improvement.
pub const PIVOT_TOL: f64 = 1e-11;

/// Feasibility threshold: phase 1 must drive the artificial sum below this for
/// the program to count as feasible.
pub const CONSTRAINT_TOL: f64 = 1e-9;

/// Relative width within which two ratio-test values count as tied (ties are
/// broken by the smaller basic-variable index).
const RATIO_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Self {
            coeffs,
            relation,
            rhs,
        }
    }
}

/// A linear program in minimization form over non-negative variables.
#[derive(Debug, Clone)]
pub struct Lp {
    pub num_vars: usize,
    /// Cost coefficients, one per variable; the solver minimizes.
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Values of the structural variables (empty unless `Optimal`).
    pub x: Vec<f64>,
    /// `c·x` at the solution; for `Infeasible`, the residual artificial sum.
    pub objective: f64,
    /// Total simplex pivots across both phases.
    pub iterations: usize,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    iterations: usize,
    max_iterations: usize,
}

enum RunOutcome {
    Converged,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize, obj: &mut [f64]) {
        let inv = 1.0 / self.rows[r][c];
        for v in &mut self.rows[r] {
            *v *= inv;
        }
        self.rhs[r] *= inv;
        self.rows[r][c] = 1.0;

        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c];
            if f != 0.0 {
                for j in 0..self.rows[i].len() {
                    self.rows[i][j] -= f * self.rows[r][j];
                }
                self.rows[i][c] = 0.0;
                self.rhs[i] -= f * self.rhs[r];
            }
        }
        let f = obj[c];
        if f != 0.0 {
            for (o, v) in obj.iter_mut().zip(&self.rows[r]) {
                *o -= f * v;
            }
            obj[c] = 0.0;
        }
        self.basis[r] = c;
        self.iterations += 1;
    }

    /// Pivots until no reduced cost among the first `allowed_cols` columns is
    /// below `-PIVOT_TOL`. Bland's rule throughout.
    fn run(&mut self, obj: &mut [f64], allowed_cols: usize) -> Result<RunOutcome> {
        loop {
            if self.iterations > self.max_iterations {
                return Err(Error::Solver(format!(
                    "simplex exceeded {} iterations",
                    self.max_iterations
                )));
            }
            let entering = (0..allowed_cols).find(|&j| obj[j] < -PIVOT_TOL);
            let Some(c) = entering else {
                return Ok(RunOutcome::Converged);
            };

            let mut best: Option<(usize, f64)> = None;
            for r in 0..self.rows.len() {
                let a = self.rows[r][c];
                if a > PIVOT_TOL {
                    let ratio = self.rhs[r].max(0.0) / a;
                    match best {
                        None => best = Some((r, ratio)),
                        Some((br, bratio)) => {
                            let tie = (ratio - bratio).abs() <= RATIO_TIE * (1.0 + bratio.abs());
                            if (!tie && ratio < bratio)
                                || (tie && self.basis[r] < self.basis[br])
                            {
                                best = Some((r, ratio.min(bratio)));
                            }
                        }
                    }
                }
            }
            let Some((r, _)) = best else {
                return Ok(RunOutcome::Unbounded);
            };
            self.pivot(r, c, obj);
        }
    }
}

/// Solves the program. Returns `Err` only if the iteration safeguard trips,
/// which for well-posed inputs indicates a bug rather than a property of the
/// program.
pub fn solve(lp: &Lp) -> Result<LpSolution> {
    let n = lp.num_vars;
    assert_eq!(lp.objective.len(), n, "objective length must match num_vars");
    for (i, c) in lp.constraints.iter().enumerate() {
        assert_eq!(
            c.coeffs.len(),
            n,
            "constraint {i} coefficient length must match num_vars"
        );
    }

    let m = lp.constraints.len();
    let n_slack = lp
        .constraints
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count();
    // After rhs normalization: Eq rows and Ge rows need an artificial; a Le
    // row with negative rhs flips to Ge (and vice versa).
    let n_art = lp
        .constraints
        .iter()
        .filter(|c| match (c.relation, c.rhs < 0.0) {
            (Relation::Eq, _) => true,
            (Relation::Le, neg) => neg,
            (Relation::Ge, neg) => !neg,
        })
        .count();
    let art_start = n + n_slack;
    let total = art_start + n_art;

    let mut rows = vec![vec![0.0; total]; m];
    let mut rhs = vec![0.0; m];
    let mut basis = vec![0usize; m];
    let mut next_slack = n;
    let mut next_art = art_start;

    for (r, con) in lp.constraints.iter().enumerate() {
        // Normalize to rhs >= 0 so slack-or-artificial can start basic.
        let (sign, relation) = if con.rhs < 0.0 {
            let rel = match con.relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
            (-1.0, rel)
        } else {
            (1.0, con.relation)
        };
        for (j, &v) in con.coeffs.iter().enumerate() {
            rows[r][j] = sign * v;
        }
        rhs[r] = sign * con.rhs;

        match relation {
            Relation::Le => {
                rows[r][next_slack] = 1.0;
                basis[r] = next_slack;
                next_slack += 1;
            }
            Relation::Ge => {
                rows[r][next_slack] = -1.0;
                next_slack += 1;
                rows[r][next_art] = 1.0;
                basis[r] = next_art;
                next_art += 1;
            }
            Relation::Eq => {
                rows[r][next_art] = 1.0;
                basis[r] = next_art;
                next_art += 1;
            }
        }
    }
    debug_assert!(next_slack <= art_start && next_art <= total);

    let mut tableau = Tableau {
        rows,
        rhs,
        basis,
        iterations: 0,
        max_iterations: 1000 + 20 * (m + total),
    };

    // Phase 1: minimize the artificial sum. Artificial columns never enter, so
    // once one leaves the basis it is effectively dropped.
    if n_art > 0 {
        let mut obj1 = vec![0.0; total];
        for j in art_start..total {
            obj1[j] = 1.0;
        }
        for r in 0..m {
            if tableau.basis[r] >= art_start {
                for (o, v) in obj1.iter_mut().zip(&tableau.rows[r]) {
                    *o -= v;
                }
            }
        }
        match tableau.run(&mut obj1, art_start)? {
            RunOutcome::Converged => {}
            RunOutcome::Unbounded => {
                return Err(Error::Solver(
                    "phase 1 reported unbounded, which is impossible".into(),
                ));
            }
        }
        let artificial_sum: f64 = (0..m)
            .filter(|&r| tableau.basis[r] >= art_start)
            .map(|r| tableau.rhs[r].max(0.0))
            .sum();
        if artificial_sum > CONSTRAINT_TOL {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                x: Vec::new(),
                objective: artificial_sum,
                iterations: tableau.iterations,
            });
        }

        // Pivot residual zero-level artificials out of the basis; a row that
        // offers no pivot is linearly dependent and is dropped.
        let mut r = 0;
        while r < tableau.rows.len() {
            if tableau.basis[r] >= art_start {
                let pivot_col =
                    (0..art_start).find(|&j| tableau.rows[r][j].abs() > PIVOT_TOL);
                match pivot_col {
                    Some(c) => {
                        let mut dummy = vec![0.0; total];
                        tableau.pivot(r, c, &mut dummy);
                    }
                    None => {
                        tableau.rows.remove(r);
                        tableau.rhs.remove(r);
                        tableau.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    // Phase 2 on the real objective (slacks cost nothing).
    let mut full_costs = vec![0.0; total];
    full_costs[..n].copy_from_slice(&lp.objective);
    let mut obj2 = full_costs.clone();
    for r in 0..tableau.rows.len() {
        let cb = full_costs[tableau.basis[r]];
        if cb != 0.0 {
            for (o, v) in obj2.iter_mut().zip(&tableau.rows[r]) {
                *o -= cb * v;
            }
        }
    }
    let status = match tableau.run(&mut obj2, art_start)? {
        RunOutcome::Converged => LpStatus::Optimal,
        RunOutcome::Unbounded => LpStatus::Unbounded,
    };

    if status != LpStatus::Optimal {
        return Ok(LpSolution {
            status,
            x: Vec::new(),
            objective: f64::NEG_INFINITY,
            iterations: tableau.iterations,
        });
    }

    let mut x = vec![0.0; n];
    for r in 0..tableau.rows.len() {
        if tableau.basis[r] < n {
            x[tableau.basis[r]] = tableau.rhs[r].max(0.0);
        }
    }
    let objective = lp
        .objective
        .iter()
        .zip(&x)
        .map(|(c, v)| c * v)
        .sum::<f64>();
    Ok(LpSolution {
        status,
        x,
        objective,
        iterations: tableau.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn le(coeffs: &[f64], rhs: f64) -> Constraint {
        Constraint::new(coeffs.to_vec(), Relation::Le, rhs)
    }

    fn ge(coeffs: &[f64], rhs: f64) -> Constraint {
        Constraint::new(coeffs.to_vec(), Relation::Ge, rhs)
    }

    fn eq(coeffs: &[f64], rhs: f64) -> Constraint {
        Constraint::new(coeffs.to_vec(), Relation::Eq, rhs)
    }

    #[test]
    fn minimizes_simple_bounded_program() {
        // min x1 subject to x1 >= 3.
        let lp = Lp {
            num_vars: 1,
            objective: vec![1.0],
            constraints: vec![ge(&[1.0], 3.0)],
        };
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 3.0).abs() < 1e-9);
        assert!((sol.x[0] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn maximization_via_negated_costs() {
        // max x1 + x2 s.t. x1 + 2x2 <= 4, 3x1 + x2 <= 6: optimum at (1.6, 1.2).
        let lp = Lp {
            num_vars: 2,
            objective: vec![-1.0, -1.0],
            constraints: vec![le(&[1.0, 2.0], 4.0), le(&[3.0, 1.0], 6.0)],
        };
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective + 2.8).abs() < 1e-9);
        assert!((sol.x[0] - 1.6).abs() < 1e-9);
        assert!((sol.x[1] - 1.2).abs() < 1e-9);
    }

    #[test]
    fn detects_infeasibility() {
        let lp = Lp {
            num_vars: 1,
            objective: vec![0.0],
            constraints: vec![le(&[1.0], 1.0), ge(&[1.0], 2.0)],
        };
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
        assert!(sol.objective > 0.5);
    }

    #[test]
    fn detects_unboundedness() {
        let lp = Lp {
            num_vars: 1,
            objective: vec![-1.0],
            constraints: vec![ge(&[1.0], 0.0)],
        };
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
    }

    #[test]
    fn handles_equalities_and_negative_rhs() {
        // x1 - x2 = -1, x1 + x2 = 3 -> (1, 2); minimize x1.
        let lp = Lp {
            num_vars: 2,
            objective: vec![1.0, 0.0],
            constraints: vec![eq(&[1.0, -1.0], -1.0), eq(&[1.0, 1.0], 3.0)],
        };
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[0] - 1.0).abs() < 1e-9);
        assert!((sol.x[1] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn redundant_equalities_are_tolerated() {
        let lp = Lp {
            num_vars: 2,
            objective: vec![1.0, 1.0],
            constraints: vec![
                eq(&[1.0, 1.0], 1.0),
                eq(&[2.0, 2.0], 2.0),
                eq(&[1.0, 1.0], 1.0),
            ],
        };
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-9);
    }

    #[test]
    fn survives_beale_cycling_example() {
        // The classic degenerate program that cycles under the naive
        // largest-coefficient rule; Bland's rule must terminate at -1/20.
        let lp = Lp {
            num_vars: 4,
            objective: vec![-0.75, 150.0, -0.02, 6.0],
            constraints: vec![
                le(&[0.25, -60.0, -1.0 / 25.0, 9.0], 0.0),
                le(&[0.5, -90.0, -1.0 / 50.0, 3.0], 0.0),
                le(&[0.0, 0.0, 1.0, 0.0], 1.0),
            ],
        };
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective + 0.05).abs() < 1e-9, "got {}", sol.objective);
        assert!((sol.x[0] - 0.04).abs() < 1e-9);
        assert!((sol.x[2] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn identical_inputs_give_identical_solutions() {
        let lp = Lp {
            num_vars: 3,
            objective: vec![1.0, 2.0, 0.5],
            constraints: vec![
                ge(&[1.0, 1.0, 1.0], 1.0),
                le(&[1.0, 0.0, 2.0], 3.0),
                eq(&[0.0, 1.0, 1.0], 0.5),
            ],
        };
        let a = solve(&lp).unwrap();
        let b = solve(&lp).unwrap();
        assert_eq!(a.status, b.status);
        assert_eq!(a.x, b.x);
        assert_eq!(a.iterations, b.iterations);
    }
}
