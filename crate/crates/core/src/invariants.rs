//! Characteristic numbers of the manifolds in play and how they move under
//! blow-up and rational blow-down, plus Seiberg-Witten dimension,
//! wall-crossing and Einstein-obstruction arithmetic.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{blow_up, Ambient, HomologyClass, LatticeError};
use crate::ratmath::{ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantsError {
    #[error("b2- = {b2minus} leaves no room for C_{p} (needs {need})")]
    InsufficientRank { b2minus: u32, p: u32, need: u32 },
    #[error("rational blow-down needs p >= 2, got {0}")]
    InvalidP(u32),
    #[error("formal dimension ({numerator})/4 is not an integer")]
    NonIntegral { numerator: i64 },
    #[error("formal dimension {0} is negative")]
    NegativeDimension(i64),
    #[error("wall crossing needs a non-negative even argument, got {0}")]
    OddDimension(i64),
    #[error("homeomorphism type needs a simply connected manifold")]
    NotSimplyConnected,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ManifoldInvariants {
    pub b2plus: u32,
    pub b2minus: u32,
    pub euler: i64,
    pub signature: i64,
    pub c1sq: i64,
    pub parity: Parity,
    pub simply_connected: bool,
}

impl ManifoldInvariants {
    fn recompute(mut self) -> Self {
        self.c1sq = 3 * self.signature + 2 * self.euler;
        self
    }

    /// `c₁² = 3σ + 2e` and `σ = b₂⁺ − b₂⁻`; when simply connected also
    /// `e = 2 + b₂⁺ + b₂⁻`.
    pub fn is_consistent(&self) -> bool {
        let sig = i64::from(self.b2plus) - i64::from(self.b2minus);
        let euler_ok = !self.simply_connected
            || self.euler == 2 + i64::from(self.b2plus) + i64::from(self.b2minus);
        self.c1sq == 3 * self.signature + 2 * self.euler && self.signature == sig && euler_ok
    }

    /// Numeric fields `(b₂⁺, b₂⁻, e, σ, c₁²)`.
    pub fn numeric(&self) -> (u32, u32, i64, i64, i64) {
        (self.b2plus, self.b2minus, self.euler, self.signature, self.c1sq)
    }

    /// Connected sum with `CP̄²`.
    pub fn blow_up(&self) -> Self {
        Self {
            b2minus: self.b2minus + 1,
            euler: self.euler + 1,
            signature: self.signature - 1,
            parity: Parity::Odd,
            ..*self
        }
        .recompute()
    }

    /// Replaces a negative definite `C_p` by a rational ball: `b₂⁻`, `e`
    /// drop by `p − 1` and `σ` rises by `p − 1` (Novikov additivity), so `c₁²`
    /// rises by `p − 1`.
    ///
    /// Simple connectivity of the result is not computable from this data;
    /// it is kept only when `assume_simply_connected` is set. A form with
    /// `σ ≢ 0 (mod 8)` is necessarily odd; otherwise parity is carried over.
    pub fn rational_blowdown(&self, p: u32, assume_simply_connected: bool) -> Result<Self, InvariantsError> {
        if p < 2 {
            return Err(InvariantsError::InvalidP(p));
        }
        let k = p - 1;
        if self.b2minus < k {
            return Err(InvariantsError::InsufficientRank { b2minus: self.b2minus, p, need: k });
        }
        let signature = self.signature + i64::from(k);
        let parity = if signature.rem_euclid(8) != 0 { Parity::Odd } else { self.parity };
        Ok(Self {
            b2minus: self.b2minus - k,
            euler: self.euler - i64::from(k),
            signature,
            parity,
            simply_connected: self.simply_connected && assume_simply_connected,
            ..*self
        }
        .recompute())
    }
}

/// `CP² # n·CP̄²`.
pub fn rational_surface_invariants(n: u32) -> ManifoldInvariants {
    let n64 = i64::from(n);
    ManifoldInvariants {
        b2plus: 1,
        b2minus: n,
        euler: 3 + n64,
        signature: 1 - n64,
        c1sq: 9 - n64,
        parity: Parity::Odd,
        simply_connected: true,
    }
}

/// Formal dimension `(c₁(L)² − 3σ − 2e)/4` of the Seiberg-Witten moduli space.
pub fn sw_dimension(c1sq_of_l: i64, inv: &ManifoldInvariants) -> Result<i64, InvariantsError> {
    let numerator = c1sq_of_l - 3 * inv.signature - 2 * inv.euler;
    if numerator.rem_euclid(4) != 0 {
        return Err(InvariantsError::NonIntegral { numerator });
    }
    let d = numerator / 4;
    if d < 0 {
        return Err(InvariantsError::NegativeDimension(d));
    }
    Ok(d)
}

/// `SW⁺(L) − SW⁻(L) = −(−1)^d`, taking the exponent `d` directly. The
/// argument must be non-negative and even.
pub fn wall_crossing_delta(d: i64) -> Result<i64, InvariantsError> {
    if d < 0 || d % 2 != 0 {
        return Err(InvariantsError::OddDimension(d));
    }
    Ok(-1)
}

/// Wall crossing read from the moduli-space dimension `2·d_L`: returns
/// `−(−1)^{d_L}`.
pub fn wall_crossing_delta_from_moduli_dim(dim: i64) -> Result<i64, InvariantsError> {
    if dim < 0 || dim % 2 != 0 {
        return Err(InvariantsError::OddDimension(dim));
    }
    let half = dim / 2;
    Ok(if half % 2 == 0 { -1 } else { 1 })
}

/// Which small-perturbation chamber a characteristic class falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Chamber {
    /// `c₁(L)·[ω] > 0`
    Plus,
    /// `c₁(L)·[ω] < 0`
    Minus,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SwRecord {
    pub label: String,
    pub dimension: i64,
    pub wall_crossing_delta: Option<i64>,
    pub chamber: Chamber,
}

impl SwRecord {
    pub fn new(label: impl Into<String>, c1sq_of_l: i64, inv: &ManifoldInvariants, chamber: Chamber) -> Result<Self, InvariantsError> {
        let dimension = sw_dimension(c1sq_of_l, inv)?;
        let wall_crossing_delta = wall_crossing_delta_from_moduli_dim(dimension).ok();
        Ok(Self { label: label.into(), dimension, wall_crossing_delta, chamber })
    }
}

/// Upper bound `(2e + 3σ − 8d)/2` on the number of `CP̄²` summands that
/// split off a manifold carrying an Einstein metric and a monopole class
/// whose moduli space has dimension `d`.
pub fn kotschick_bound(inv: &ManifoldInvariants, d: i64) -> Rational {
    ratio(2 * inv.euler + 3 * inv.signature - 8 * d, 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HomeoType {
    /// `CP² # k·CP̄²`
    RationalSurface { k: u32 },
    Unclassified,
}

impl fmt::Display for HomeoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomeoType::RationalSurface { k: 0 } => f.write_str("CP²"),
            HomeoType::RationalSurface { k: 1 } => f.write_str("CP² # CP̄²"),
            HomeoType::RationalSurface { k } => write!(f, "CP² # {k}CP̄²"),
            HomeoType::Unclassified => f.write_str("unclassified"),
        }
    }
}

/// Freedman: a simply connected closed 4-manifold with odd form,
/// `b₂⁺ = 1` and `b₂⁻ = k` is homeomorphic to `CP² # k·CP̄²`.
pub fn homeo_type(inv: &ManifoldInvariants) -> Result<HomeoType, InvariantsError> {
    if !inv.simply_connected {
        return Err(InvariantsError::NotSimplyConnected);
    }
    Ok(match (inv.b2plus, inv.parity) {
        (1, Parity::Odd) => HomeoType::RationalSurface { k: inv.b2minus },
        _ => HomeoType::Unclassified,
    })
}

/// Basic classes after one blow-up: every `c` gives `c + E` and `c − E`.
pub fn blowup_basic_classes(classes: &[HomologyClass]) -> Result<(Ambient, Vec<HomologyClass>), InvariantsError> {
    let Some(first) = classes.first() else {
        return Ok((Ambient::new(0), Vec::new()));
    };
    let (ambient, moved, e) = blow_up(first.ambient(), classes)?;
    let out = moved.iter().flat_map(|c| [c + &e, c - &e]).collect();
    Ok((ambient, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmath::rat;
    use proptest::prelude::*;

    #[test]
    fn rational_surfaces() {
        assert_eq!(rational_surface_invariants(13).numeric(), (1, 13, 16, -12, -4));
        assert_eq!(rational_surface_invariants(7).c1sq, 2);
        assert_eq!(rational_surface_invariants(9).numeric(), (1, 9, 12, -8, 0));
        assert!(rational_surface_invariants(0).is_consistent());
    }

    #[test]
    fn blowdowns() {
        let x7 = rational_surface_invariants(13).rational_blowdown(7, true).unwrap();
        assert_eq!(x7.numeric(), (1, 7, 10, -6, 2));
        assert!(x7.is_consistent());
        let x5 = rational_surface_invariants(12).rational_blowdown(5, true).unwrap();
        assert_eq!(x5.numeric(), (1, 8, 11, -7, 1));
        let x2 = rational_surface_invariants(13).rational_blowdown(2, true).unwrap();
        assert_eq!(x2.numeric(), (1, 12, 15, -11, -3));

        let unasserted = rational_surface_invariants(13).rational_blowdown(7, false).unwrap();
        assert!(!unasserted.simply_connected);
        assert_eq!(homeo_type(&unasserted), Err(InvariantsError::NotSimplyConnected));

        assert!(matches!(
            rational_surface_invariants(3).rational_blowdown(7, true),
            Err(InvariantsError::InsufficientRank { .. })
        ));
        assert_eq!(
            rational_surface_invariants(3).rational_blowdown(1, true),
            Err(InvariantsError::InvalidP(1))
        );
    }

    #[test]
    fn sw_dimensions() {
        let x7 = rational_surface_invariants(13).rational_blowdown(7, true).unwrap();
        assert_eq!(sw_dimension(2, &x7), Ok(0));
        let r7 = rational_surface_invariants(7);
        assert_eq!(sw_dimension(2, &r7), Ok(0));
        assert_eq!(sw_dimension(10, &r7), Ok(2));
        assert_eq!(sw_dimension(3, &r7), Err(InvariantsError::NonIntegral { numerator: 1 }));
        assert_eq!(sw_dimension(-2, &r7), Err(InvariantsError::NegativeDimension(-1)));
    }

    #[test]
    fn wall_crossing() {
        assert_eq!(wall_crossing_delta(0), Ok(-1));
        assert_eq!(wall_crossing_delta(2), Ok(-1));
        assert_eq!(wall_crossing_delta(1), Err(InvariantsError::OddDimension(1)));
        assert_eq!(wall_crossing_delta(-2), Err(InvariantsError::OddDimension(-2)));
        assert_eq!(wall_crossing_delta_from_moduli_dim(0), Ok(-1));
        assert_eq!(wall_crossing_delta_from_moduli_dim(2), Ok(1));
        assert_eq!(wall_crossing_delta_from_moduli_dim(4), Ok(-1));
        assert!(wall_crossing_delta_from_moduli_dim(3).is_err());
    }

    #[test]
    fn kotschick() {
        let x7 = rational_surface_invariants(13).rational_blowdown(7, true).unwrap();
        assert_eq!(kotschick_bound(&x7.blow_up(), 0), ratio(1, 2));
        assert_eq!(kotschick_bound(&x7, 0), rat(1));
        assert_eq!(kotschick_bound(&rational_surface_invariants(9), 0), rat(0));
    }

    #[test]
    fn homeomorphism_types() {
        let mk = |b2minus| ManifoldInvariants { b2minus, ..rational_surface_invariants(b2minus) };
        assert_eq!(homeo_type(&mk(7)).unwrap().to_string(), "CP² # 7CP̄²");
        assert_eq!(homeo_type(&mk(8)).unwrap().to_string(), "CP² # 8CP̄²");
        assert_eq!(homeo_type(&mk(0)).unwrap().to_string(), "CP²");
        let even = ManifoldInvariants { parity: Parity::Even, ..mk(1) };
        assert_eq!(homeo_type(&even).unwrap(), HomeoType::Unclassified);
    }

    #[test]
    fn basic_classes_after_blow_up() {
        let a = Ambient::new(7);
        let k7 = (1..=7).fold(3 * &a.h(), |acc, i| &acc - &a.e(i));
        let (a8, out) = blowup_basic_classes(std::slice::from_ref(&k7)).unwrap();
        assert_eq!(a8.n, 8);
        assert_eq!(out.len(), 2);
        for c in &out {
            assert_eq!(c.square(), k7.square() - 1);
            assert!(c.is_characteristic());
        }
        assert_eq!(out[0].coeffs()[8], 1);
        assert_eq!(out[1].coeffs()[8], -1);
        assert!(blowup_basic_classes(&[]).unwrap().1.is_empty());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn transforms_keep_c1sq_formula(n in 0u32..=20, p in 2u32..=12, ups in 0usize..4) {
            let mut inv = rational_surface_invariants(n);
            prop_assert_eq!(sw_dimension(inv.c1sq, &inv), Ok(0));
            for _ in 0..ups {
                inv = inv.blow_up();
                prop_assert!(inv.is_consistent());
            }
            if let Ok(x) = inv.rational_blowdown(p, true) {
                prop_assert!(x.is_consistent());
                prop_assert_eq!(x.c1sq, inv.c1sq + i64::from(p - 1));
                prop_assert_eq!(sw_dimension(x.c1sq, &x), Ok(0));
            }
            let d = i64::from(p);
            prop_assert_eq!(kotschick_bound(&inv, d) - kotschick_bound(&inv, d + 1), rat(4));
        }
    }
}
