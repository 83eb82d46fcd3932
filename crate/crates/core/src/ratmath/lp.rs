//! Exact feasibility for systems `aᵢ·x ≥ bᵢ` / `aᵢ·x = bᵢ` over free
//! variables.
//!
//! Phase I of the simplex method is run on a dense rational tableau with
//! Bland's rule. A feasible system yields a witness point; an infeasible one
//! yields Farkas multipliers `y` (non-negative on `≥` rows, free on `=` rows)
//! with `Σ yᵢ aᵢ = 0` and `Σ yᵢ bᵢ = 1`, i.e. the combined relation `0 ≥ 1`.
//! Both are re-checked exactly before they are returned.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `coeffs · x ≥ rhs`
    Ge,
    /// `coeffs · x = rhs`
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl LinearConstraint {
    pub fn ge(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self { coeffs, relation: Relation::Ge, rhs }
    }

    pub fn eq(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Self { coeffs, relation: Relation::Eq, rhs }
    }

    /// Encodes a strict homogeneous constraint `s(x) > 0` as the slice
    /// `s(x) = 1`. Only sound when every other constraint in the system is
    /// homogeneous, so that any point with `s > 0` rescales onto the slice.
    pub fn positive_slice(coeffs: Vec<Rational>) -> Self {
        Self::eq(coeffs, Rational::one())
    }

    fn lhs(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum()
    }

    pub fn holds_at(&self, x: &[Rational]) -> bool {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible { witness: Vec<Rational> },
    Infeasible { certificate: Vec<Rational> },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("constraint system is empty")]
    EmptySystem,
    #[error("constraint {index} has {found} coefficients, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("internal error: {0} failed exact re-verification")]
    VerificationFailed(&'static str),
}

/// True iff `witness` satisfies every constraint exactly.
pub fn check_witness(constraints: &[LinearConstraint], witness: &[Rational]) -> bool {
    constraints
        .iter()
        .all(|c| c.coeffs.len() == witness.len() && c.holds_at(witness))
}

/// True iff `y` is a valid infeasibility certificate: non-negative on `≥`
/// rows, `Σ yᵢ aᵢ ≡ 0` and `Σ yᵢ bᵢ > 0`.
pub fn check_certificate(num_vars: usize, constraints: &[LinearConstraint], y: &[Rational]) -> bool {
    if y.len() != constraints.len() {
        return false;
    }
    let signs_ok = constraints
        .iter()
        .zip(y)
        .all(|(c, m)| c.relation == Relation::Eq || !m.is_negative());
    let combined_zero = (0..num_vars).all(|k| {
        constraints
            .iter()
            .zip(y)
            .map(|(c, m)| m * &c.coeffs[k])
            .sum::<Rational>()
            .is_zero()
    });
    let rhs: Rational = constraints.iter().zip(y).map(|(c, m)| m * &c.rhs).sum();
    signs_ok && combined_zero && rhs.is_positive()
}

/// Decides feasibility of the system over `num_vars` free variables.
pub fn lp_feasible(num_vars: usize, constraints: &[LinearConstraint]) -> Result<LpOutcome, LpError> {
    if constraints.is_empty() {
        return Err(LpError::EmptySystem);
    }
    for (index, c) in constraints.iter().enumerate() {
        if c.coeffs.len() != num_vars {
            return Err(LpError::DimensionMismatch {
                index,
                expected: num_vars,
                found: c.coeffs.len(),
            });
        }
    }

    let outcome = PhaseOne::build(num_vars, constraints).solve();
    match &outcome {
        LpOutcome::Feasible { witness } if !check_witness(constraints, witness) => {
            Err(LpError::VerificationFailed("feasibility witness"))
        }
        LpOutcome::Infeasible { certificate }
            if !check_certificate(num_vars, constraints, certificate) =>
        {
            Err(LpError::VerificationFailed("infeasibility certificate"))
        }
        _ => Ok(outcome),
    }
}

/// Phase I tableau for `A'z + w = b'`, `z, w ≥ 0`, minimising `Σ w`.
///
/// Column layout: `x⁺ (n) | x⁻ (n) | slacks (one per ≥ row) | artificials (m)`.
struct PhaseOne {
    num_vars: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    /// Reduced costs of every column.
    reduced: Vec<Rational>,
    basis: Vec<usize>,
    /// ±1 applied to each original row so that `b' ≥ 0`.
    row_sign: Vec<Rational>,
    original_rhs: Vec<Rational>,
    artificial_start: usize,
}

impl PhaseOne {
    fn build(n: usize, constraints: &[LinearConstraint]) -> Self {
        let m = constraints.len();
        let num_slacks = constraints
            .iter()
            .filter(|c| c.relation == Relation::Ge)
            .count();
        let artificial_start = 2 * n + num_slacks;
        let width = artificial_start + m;

        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut row_sign = Vec::with_capacity(m);
        let mut slack = 2 * n;
        for (i, c) in constraints.iter().enumerate() {
            let sign = if c.rhs.is_negative() { -Rational::one() } else { Rational::one() };
            let mut row = vec![Rational::zero(); width];
            for (k, a) in c.coeffs.iter().enumerate() {
                row[k] = &sign * a;
                row[n + k] = -(&sign * a);
            }
            if c.relation == Relation::Ge {
                row[slack] = -sign.clone();
                slack += 1;
            }
            row[artificial_start + i] = Rational::one();
            rows.push(row);
            rhs.push(&sign * &c.rhs);
            row_sign.push(sign);
        }

        // Costs are 1 on artificials; the initial basis is all artificials.
        let reduced = (0..width)
            .map(|j| {
                let cost = if j >= artificial_start { Rational::one() } else { Rational::zero() };
                cost - rows.iter().map(|r| &r[j]).sum::<Rational>()
            })
            .collect();

        Self {
            num_vars: n,
            rows,
            rhs,
            reduced,
            basis: (artificial_start..width).collect(),
            row_sign,
            original_rhs: constraints.iter().map(|c| c.rhs.clone()).collect(),
            artificial_start,
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v /= &p;
        }
        self.rhs[row] /= &p;
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][col].is_zero() {
                continue;
            }
            let factor = self.rows[r][col].clone();
            for (v, pv) in self.rows[r].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
            self.rhs[r] -= &factor * &pivot_rhs;
        }
        let factor = self.reduced[col].clone();
        if !factor.is_zero() {
            for (v, pv) in self.reduced.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    fn solve(mut self) -> LpOutcome {
        // Bland's rule: lowest-index improving column, ties in the ratio test
        // broken by the lowest basic variable index.
        while let Some(col) = self.reduced.iter().position(|r| r.is_negative()) {
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &best {
                    None => true,
                    Some((br, bratio)) => {
                        ratio < *bratio || (ratio == *bratio && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            // Phase I is bounded below by zero, so an improving column always
            // has a blocking row.
            let (row, _) = best.expect("phase I objective is bounded");
            self.pivot(row, col);
        }

        let objective: Rational = self
            .basis
            .iter()
            .zip(&self.rhs)
            .filter(|(b, _)| **b >= self.artificial_start)
            .map(|(_, v)| v.clone())
            .sum();

        if objective.is_zero() {
            let n = self.num_vars;
            let mut z = vec![Rational::zero(); 2 * n];
            for (b, v) in self.basis.iter().zip(&self.rhs) {
                if *b < 2 * n {
                    z[*b] = v.clone();
                }
            }
            let witness = (0..n).map(|k| &z[k] - &z[n + k]).collect();
            return LpOutcome::Feasible { witness };
        }

        // Dual values from the artificial columns: reduced cost = 1 − yᵢ.
        let mut y: Vec<Rational> = (0..self.rows.len())
            .map(|i| {
                let dual = Rational::one() - &self.reduced[self.artificial_start + i];
                dual * &self.row_sign[i]
            })
            .collect();
        let combined: Rational = y.iter().zip(&self.original_rhs).map(|(a, b)| a * b).sum();
        for v in y.iter_mut() {
            *v /= &combined;
        }
        LpOutcome::Infeasible { certificate: y }
    }
}
