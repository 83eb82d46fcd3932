//! Second homology of `CP² # n·CP̄²` with the diagonal form
//! `⟨1⟩ ⊕ n⟨−1⟩` in the basis `(h, e₁, …, eₙ)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("classes live in different ambients (n = {left} vs n = {right})")]
    AmbientMismatch { left: usize, right: usize },
    #[error("coefficient vector has length {found}, ambient rank is {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("the fiber class needs at least 9 blow-ups, ambient has {0}")]
    TooFewBlowups(usize),
    #[error("light cone precondition violated: {0}")]
    PreconditionViolated(&'static str),
}

/// `CP²` blown up `n` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Ambient {
    pub n: usize,
}

impl Ambient {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn rank(&self) -> usize {
        self.n + 1
    }

    pub fn zero(&self) -> HomologyClass {
        HomologyClass { ambient: *self, coeffs: vec![0; self.rank()] }
    }

    pub fn class(&self, coeffs: Vec<i64>) -> Result<HomologyClass, LatticeError> {
        if coeffs.len() != self.rank() {
            return Err(LatticeError::RankMismatch { expected: self.rank(), found: coeffs.len() });
        }
        Ok(HomologyClass { ambient: *self, coeffs })
    }

    /// The line class `h`.
    pub fn h(&self) -> HomologyClass {
        self.basis(0)
    }

    /// Exceptional class `eᵢ`, 1-based. Panics when `i ∉ 1..=n`.
    pub fn e(&self, i: usize) -> HomologyClass {
        assert!((1..=self.n).contains(&i), "e_{i} is not in an ambient with n = {}", self.n);
        self.basis(i)
    }

    fn basis(&self, idx: usize) -> HomologyClass {
        let mut c = self.zero();
        c.coeffs[idx] = 1;
        c
    }

    /// Standard canonical class `−3h + e₁ + … + eₙ`.
    pub fn canonical(&self) -> HomologyClass {
        let mut c = self.zero();
        c.coeffs[0] = -3;
        c.coeffs[1..].fill(1);
        c
    }

    /// Elliptic fiber `f = 3h − e₁ − … − e₉`.
    pub fn fiber(&self) -> Result<HomologyClass, LatticeError> {
        if self.n < 9 {
            return Err(LatticeError::TooFewBlowups(self.n));
        }
        let mut c = self.zero();
        c.coeffs[0] = 3;
        c.coeffs[1..=9].fill(-1);
        Ok(c)
    }

    pub fn standard_classes(&self) -> Result<StandardClasses, LatticeError> {
        Ok(StandardClasses {
            h: self.h(),
            e: (1..=self.n).map(|i| self.e(i)).collect(),
            fiber: self.fiber()?,
            canonical: self.canonical(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardClasses {
    pub h: HomologyClass,
    pub e: Vec<HomologyClass>,
    pub fiber: HomologyClass,
    pub canonical: HomologyClass,
}

/// Integral class `c₀·h + c₁·e₁ + … + cₙ·eₙ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomologyClass {
    ambient: Ambient,
    coeffs: Vec<i64>,
}

impl HomologyClass {
    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn same_ambient(&self, other: &Self) -> Result<(), LatticeError> {
        if self.ambient != other.ambient {
            return Err(LatticeError::AmbientMismatch {
                left: self.ambient.n,
                right: other.ambient.n,
            });
        }
        Ok(())
    }

    /// Intersection pairing under `diag(+1, −1, …, −1)`.
    pub fn pair(&self, other: &Self) -> Result<i64, LatticeError> {
        self.same_ambient(other)?;
        Ok(self.coeffs[0] * other.coeffs[0]
            - self.coeffs[1..]
                .iter()
                .zip(&other.coeffs[1..])
                .map(|(a, b)| a * b)
                .sum::<i64>())
    }

    pub fn square(&self) -> i64 {
        self.pair(self).expect("same ambient")
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, LatticeError> {
        self.same_ambient(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, LatticeError> {
        self.same_ambient(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(i64, i64) -> i64) -> Self {
        Self {
            ambient: self.ambient,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// Characteristic iff `c·x ≡ x·x (mod 2)` for all `x`; for a diagonal
    /// odd form this means every coefficient is odd.
    pub fn is_characteristic(&self) -> bool {
        self.coeffs.iter().all(|c| c.rem_euclid(2) == 1)
    }

    /// Zero-extension into `CP² # (n+1)·CP̄²`.
    fn extended(&self, ambient: Ambient) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(ambient.rank(), 0);
        Self { ambient, coeffs }
    }
}

/// Blows up once: re-embeds `classes` by zero-extension and returns the new
/// ambient, the re-embedded classes and the new exceptional class.
pub fn blow_up(
    ambient: Ambient,
    classes: &[HomologyClass],
) -> Result<(Ambient, Vec<HomologyClass>, HomologyClass), LatticeError> {
    if let Some(c) = classes.iter().find(|c| c.ambient != ambient) {
        return Err(LatticeError::AmbientMismatch { left: ambient.n, right: c.ambient.n });
    }
    let bigger = Ambient::new(ambient.n + 1);
    let moved = classes.iter().map(|c| c.extended(bigger)).collect();
    Ok((bigger, moved, bigger.e(bigger.n)))
}

/// Sign of `c·w` for `c ≠ 0`, `c² ≥ 0` and `w² > 0`. In a lattice with
/// `b₂⁺ = 1` the light cone lemma makes this pairing nonzero.
pub fn light_cone_sign(c: &HomologyClass, w: &HomologyClass) -> Result<i8, LatticeError> {
    if c.is_zero() {
        return Err(LatticeError::PreconditionViolated("c = 0"));
    }
    if c.square() < 0 {
        return Err(LatticeError::PreconditionViolated("c·c < 0"));
    }
    if w.square() <= 0 {
        return Err(LatticeError::PreconditionViolated("w·w <= 0"));
    }
    let p = c.pair(w)?;
    debug_assert!(p != 0, "light cone lemma violated");
    Ok(if p > 0 { 1 } else { -1 })
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &HomologyClass {
            type Output = HomologyClass;
            fn $method(self, rhs: &HomologyClass) -> HomologyClass {
                self.$checked(rhs).expect("classes must share an ambient")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);

impl Mul<&HomologyClass> for i64 {
    type Output = HomologyClass;
    fn mul(self, rhs: &HomologyClass) -> HomologyClass {
        HomologyClass {
            ambient: rhs.ambient,
            coeffs: rhs.coeffs.iter().map(|c| self * c).collect(),
        }
    }
}

impl Neg for &HomologyClass {
    type Output = HomologyClass;
    fn neg(self) -> HomologyClass {
        -1 * self
    }
}

impl fmt::Display for HomologyClass {
    /// Renders e.g. `12h - 4e1 - … + e9`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = if i == 0 { "h".to_string() } else { format!("e{i}") };
            let mag = c.unsigned_abs();
            let term = if mag == 1 { name } else { format!("{mag}{name}") };
            if out.is_empty() {
                out = if c < 0 { format!("-{term}") } else { term };
            } else {
                out.push_str(if c < 0 { " - " } else { " + " });
                out.push_str(&term);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl Serialize for HomologyClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn diagonal_form() {
        let a = Ambient::new(2);
        assert_eq!(a.h().pair(&a.h()).unwrap(), 1);
        assert_eq!(a.e(1).pair(&a.e(2)).unwrap(), 0);
        assert_eq!(a.e(1).pair(&a.e(1)).unwrap(), -1);
        assert!(matches!(
            a.h().pair(&Ambient::new(3).h()),
            Err(LatticeError::AmbientMismatch { .. })
        ));
    }

    #[test]
    fn fiber_and_canonical() {
        let a9 = Ambient::new(9);
        let f = a9.fiber().unwrap();
        assert_eq!(f.square(), 0);
        assert_eq!(a9.canonical(), -&f);

        let a13 = Ambient::new(13);
        let std = a13.standard_classes().unwrap();
        assert_eq!(std.canonical.pair(&std.fiber).unwrap(), 0);
        let tail = (10..=13).fold(a13.zero(), |acc, i| &acc + &a13.e(i));
        assert_eq!(std.canonical, &(-&std.fiber) + &tail);

        assert_eq!(Ambient::new(8).fiber(), Err(LatticeError::TooFewBlowups(8)));
        assert!(Ambient::new(8).standard_classes().is_err());
    }

    #[test]
    fn prop_3_4_sphere_has_square_minus_nine() {
        let a = Ambient::new(13);
        let f = a.fiber().unwrap();
        let mut s = &(4 * &f) + &a.e(9);
        for i in 10..=13 {
            s = &s - &(2 * &a.e(i));
        }
        assert_eq!(s.square(), -9);
        assert_eq!(s.to_string(), "12h - 4e1 - 4e2 - 4e3 - 4e4 - 4e5 - 4e6 - 4e7 - 4e8 - 3e9 - 2e10 - 2e11 - 2e12 - 2e13");
    }

    #[test]
    fn blow_up_basics() {
        let (a1, moved, e) = blow_up(Ambient::new(0), &[]).unwrap();
        assert_eq!(a1.n, 1);
        assert!(moved.is_empty());
        assert_eq!(e, a1.e(1));
        assert_eq!(e.square(), -1);

        let a12 = Ambient::new(12);
        let h = a12.h();
        let f = a12.fiber().unwrap();
        let (a13, moved, e) = blow_up(a12, &[h.clone(), f.clone(), a12.canonical()]).unwrap();
        assert_eq!(moved[0].pair(&moved[1]).unwrap(), h.pair(&f).unwrap());
        assert_eq!(&moved[2] + &e, a13.canonical());
        assert!(blow_up(a12, &[a13.h()]).is_err());
    }

    #[test]
    fn characteristic_examples() {
        assert!(Ambient::new(13).canonical().is_characteristic());
        assert!(!Ambient::new(2).h().is_characteristic());
        assert!(!Ambient::new(9).zero().is_characteristic());
    }

    #[test]
    fn light_cone_examples() {
        let a = Ambient::new(7);
        let mut c = 3 * &a.h();
        for i in 1..=7 {
            c = &c - &a.e(i);
        }
        assert_eq!(c.square(), 2);
        assert_eq!(light_cone_sign(&c, &a.h()).unwrap(), 1);
        assert_eq!(light_cone_sign(&a.h(), &a.h()).unwrap(), 1);
        assert_eq!(light_cone_sign(&-&c, &a.h()).unwrap(), -1);
        assert!(light_cone_sign(&a.zero(), &a.h()).is_err());
        assert!(light_cone_sign(&a.e(1), &a.h()).is_err());
        assert!(light_cone_sign(&a.h(), &a.e(1)).is_err());
    }

    fn class_in(n: usize) -> impl Strategy<Value = HomologyClass> {
        proptest::collection::vec(-6i64..=6, n + 1)
            .prop_map(move |v| Ambient::new(n).class(v).unwrap())
    }

    fn triple() -> impl Strategy<Value = (HomologyClass, HomologyClass, HomologyClass, i64)> {
        (0usize..=13).prop_flat_map(|n| (class_in(n), class_in(n), class_in(n), -5i64..=5))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn pairing_symmetric_bilinear((x, y, z, k) in triple()) {
            prop_assert_eq!(x.pair(&y).unwrap(), y.pair(&x).unwrap());
            prop_assert_eq!((&x + &y).pair(&z).unwrap(), x.pair(&z).unwrap() + y.pair(&z).unwrap());
            prop_assert_eq!((k * &x).pair(&y).unwrap(), k * x.pair(&y).unwrap());
        }

        #[test]
        fn blow_up_is_isometric((x, y, z, _) in triple()) {
            let old = [x, y, z];
            let (_, moved, e) = blow_up(old[0].ambient(), &old).unwrap();
            for i in 0..3 {
                prop_assert_eq!(moved[i].pair(&e).unwrap(), 0);
                for j in 0..3 {
                    prop_assert_eq!(moved[i].pair(&moved[j]).unwrap(), old[i].pair(&old[j]).unwrap());
                }
            }
            prop_assert_eq!(e.square(), -1);
        }

        #[test]
        fn characteristic_matches_definition(c in (0usize..=13).prop_flat_map(class_in),
                                             xs in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 14), 8)) {
            // Brute force over the basis plus random test vectors.
            let a = c.ambient();
            let mut probes: Vec<HomologyClass> = std::iter::once(a.h()).chain((1..=a.n).map(|i| a.e(i))).collect();
            probes.extend(xs.into_iter().map(|v| a.class(v[..a.rank()].to_vec()).unwrap()));
            let brute = probes.iter().all(|x| (c.pair(x).unwrap() - x.square()).rem_euclid(2) == 0);
            prop_assert_eq!(c.is_characteristic(), brute);
        }

        #[test]
        fn light_cone_nonvanishing(n in 0usize..=13,
                                   ce in proptest::collection::vec(-5i64..=5, 13),
                                   we in proptest::collection::vec(-5i64..=5, 13),
                                   cextra in 0i64..3, wextra in 1i64..3,
                                   csign in any::<bool>(), wsign in any::<bool>()) {
            let a = Ambient::new(n);
            let norm = |v: &[i64]| v[..n].iter().map(|x| x * x).sum::<i64>();
            let isqrt_ceil = |s: i64| (0..).find(|k: &i64| k * k >= s).unwrap();
            let h0 = isqrt_ceil(norm(&ce)) + cextra;
            let mut h1 = isqrt_ceil(norm(&we));
            if h1 * h1 == norm(&we) { h1 += wextra; }
            let mk = |h: i64, v: &[i64], neg: bool| {
                let mut coeffs = vec![if neg { -h } else { h }];
                coeffs.extend_from_slice(&v[..n]);
                a.class(coeffs).unwrap()
            };
            let c = mk(h0, &ce, csign);
            let w = mk(h1, &we, wsign);
            prop_assume!(!c.is_zero());
            prop_assert!(c.square() >= 0 && w.square() > 0);
            prop_assert_ne!(c.pair(&w).unwrap(), 0);
            prop_assert!(light_cone_sign(&c, &w).is_ok());
        }
    }
}
