//! Symbolic symplectic classes `[ω] = a·h − Σ bᵢ·eᵢ`, their restrictions to
//! a configuration `C_p` in dual-basis coordinates, the pairing of
//! `K_p·[ω_p]` after rational blow-down, and exact positivity certificates
//! over the symplectic cone
//!
//! ```text
//! a ≥ b₁ ≥ … ≥ bₙ ≥ 0,   3a > b₁ + … + bₙ.
//! ```

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::lattice::HomologyClass;
use crate::plumbing::Configuration;
use crate::ratmath::{
    common_denominator, lp_feasible, rat, LinearConstraint, LpError, LpOutcome, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("configuration has no embedded classes")]
    MissingEmbedding,
    #[error("ambient mismatch: expected n = {expected}, found n = {found}")]
    AmbientMismatch { expected: usize, found: usize },
    #[error("dual coordinates belong to different configurations (p = {0} vs p = {1})")]
    ConfigMismatch(usize, usize),
    #[error("pairing two symbolic restrictions is not linear")]
    Nonlinear,
    #[error("form has a nonzero constant term")]
    NotHomogeneous,
    #[error("cone must have exactly one strict constraint, found {0}")]
    MultipleStrict(usize),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Exact linear form `c + α·a + Σ βᵢ·bᵢ` in the symbols of an ambient with
/// `n` blow-ups.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearForm {
    /// `coeffs[0]` multiplies `a`, `coeffs[i]` multiplies `bᵢ`.
    coeffs: Vec<Rational>,
    constant: Rational,
}

impl LinearForm {
    pub fn zero(n: usize) -> Self {
        Self { coeffs: vec![Rational::zero(); n + 1], constant: Rational::zero() }
    }

    pub fn constant(n: usize, value: Rational) -> Self {
        Self { constant: value, ..Self::zero(n) }
    }

    /// The symbol `a`.
    pub fn a(n: usize) -> Self {
        Self::zero(n).with(0, Rational::one())
    }

    /// The symbol `bᵢ`, 1-based. Panics when `i ∉ 1..=n`.
    pub fn b(n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i), "b{i} outside 1..={n}");
        Self::zero(n).with(i, Rational::one())
    }

    /// Builds a homogeneous form from integer coefficients `(α, β₁, …, βₙ)`.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        assert!(!coeffs.is_empty());
        Self { coeffs: coeffs.iter().map(|&c| rat(c)).collect(), constant: Rational::zero() }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty());
        Self { coeffs, constant: Rational::zero() }
    }

    fn with(mut self, idx: usize, v: Rational) -> Self {
        self.coeffs[idx] = v;
        self
    }

    /// Number of blow-ups whose symbols this form ranges over.
    pub fn n(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn is_homogeneous(&self) -> bool {
        self.constant.is_zero()
    }

    /// True when only the constant term is nonzero.
    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.is_constant() && self.constant.is_zero()
    }

    pub fn symbol_name(idx: usize) -> String {
        if idx == 0 {
            "a".to_string()
        } else {
            format!("b{idx}")
        }
    }

    /// Names of the symbols with nonzero coefficient, in order.
    pub fn symbols(&self) -> Vec<String> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| Self::symbol_name(i))
            .collect()
    }

    /// Value at the point `(a, b₁, …, bₙ)`.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.coeffs.len(), "point dimension");
        &self.constant + self.coeffs.iter().zip(point).map(|(c, x)| c * x).sum::<Rational>()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
            constant: &self.constant * k,
        }
    }

    fn combine(&self, other: &Self, sign: i64) -> Self {
        assert_eq!(self.n(), other.n(), "linear forms over different symbol sets");
        let s = rat(sign);
        Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x + &s * y).collect(),
            constant: &self.constant + &s * &other.constant,
        }
    }

    /// Splits the form as `factor · integral_form` where the integral form
    /// has coprime integer coefficients and a positive `a`-coefficient when
    /// possible (`54/7·a − 18/7·b₁ …` becomes `1/7 · (54a − 18b₁ …)`).
    pub fn factored(&self) -> (Rational, LinearForm) {
        if self.is_zero() {
            return (Rational::one(), self.clone());
        }
        let all = self.coeffs.iter().chain(std::iter::once(&self.constant));
        let den = common_denominator(all.clone());
        let ints: Vec<_> = all.map(|v| (v * Rational::from_integer(den.clone())).to_integer()).collect();
        let gcd = ints
            .iter()
            .fold(num_bigint::BigInt::zero(), |g, v| num_integer::Integer::gcd(&g, v));
        let mut factor = Rational::new(gcd, den);
        let lead = self.coeffs.iter().chain(std::iter::once(&self.constant)).find(|c| !c.is_zero());
        if lead.is_some_and(|c| c.is_negative()) {
            factor = -factor;
        }
        (factor.clone(), self.scale(&factor.recip()))
    }

    /// `1/7·(54a - 18b1 - …)`-style rendering.
    pub fn factored_string(&self) -> String {
        let (factor, inner) = self.factored();
        if factor.abs().is_one() {
            self.to_string()
        } else {
            format!("{factor}·({inner})")
        }
    }
}

impl fmt::Display for LinearForm {
    /// Renders e.g. `54/7·a - 18/7·b1 - 5/7·b13`; integer coefficients
    /// are written without the dot (`3a - b1`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (c, Some(Self::symbol_name(i))))
            .chain(std::iter::once((&self.constant, None)));
        for (c, name) in terms {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = match (&name, mag.is_integer()) {
                (None, _) => mag.to_string(),
                (Some(s), true) if mag.is_one() => s.clone(),
                (Some(s), true) => format!("{mag}{s}"),
                (Some(s), false) => format!("{mag}·{s}"),
            };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl Serialize for LinearForm {
    /// Symbol → exact fraction string, nonzero entries only, in symbol order.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let nonzero: Vec<_> = self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let extra = usize::from(!self.constant.is_zero());
        let mut map = s.serialize_map(Some(nonzero.len() + extra))?;
        for (i, c) in nonzero {
            map.serialize_entry(&Self::symbol_name(i), &c.to_string())?;
        }
        if extra == 1 {
            map.serialize_entry("1", &self.constant.to_string())?;
        }
        map.end()
    }
}

impl Add for &LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: &LinearForm) -> LinearForm {
        self.combine(rhs, 1)
    }
}

impl Sub for &LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: &LinearForm) -> LinearForm {
        self.combine(rhs, -1)
    }
}

impl Neg for &LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        self.scale(&rat(-1))
    }
}

impl Mul<&LinearForm> for &Rational {
    type Output = LinearForm;
    fn mul(self, rhs: &LinearForm) -> LinearForm {
        rhs.scale(self)
    }
}

/// The symbolic class `a·h − Σ bᵢ·eᵢ` on `CP² # n·CP̄²`; it pairs as
/// `ω·h = a`, `ω·eᵢ = bᵢ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolicClass {
    pub n: usize,
}

impl SymbolicClass {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    /// `ω·x` as a linear form.
    pub fn pair(&self, x: &HomologyClass) -> Result<LinearForm, ConeError> {
        if x.ambient().n != self.n {
            return Err(ConeError::AmbientMismatch { expected: self.n, found: x.ambient().n });
        }
        Ok(LinearForm::from_i64(x.coeffs()))
    }
}

/// Homogeneous inequalities `nonstrict ≥ 0`, `strict > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeSystem {
    pub n: usize,
    pub nonstrict: Vec<LinearForm>,
    pub strict: Vec<LinearForm>,
}

impl ConeSystem {
    /// True iff `point` satisfies every constraint.
    pub fn contains(&self, point: &[Rational]) -> bool {
        self.nonstrict.iter().all(|f| !f.eval(point).is_negative())
            && self.strict.iter().all(|f| f.eval(point).is_positive())
    }
}

/// `a − b₁ ≥ 0, bᵢ − bᵢ₊₁ ≥ 0, bₙ ≥ 0` and `3a − Σ bᵢ > 0`.
pub fn symplectic_cone(n: usize) -> ConeSystem {
    assert!(n >= 1, "symplectic cone needs n >= 1");
    let mut nonstrict = vec![&LinearForm::a(n) - &LinearForm::b(n, 1)];
    for i in 1..n {
        nonstrict.push(&LinearForm::b(n, i) - &LinearForm::b(n, i + 1));
    }
    nonstrict.push(LinearForm::b(n, n));
    let mut strict = LinearForm::a(n).scale(&rat(3));
    for i in 1..=n {
        strict = &strict - &LinearForm::b(n, i);
    }
    ConeSystem { n, nonstrict, strict: vec![strict] }
}

/// Coordinates of a restricted class against the dual basis `γ₁, …, γ_{p−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualCoords {
    pub p: usize,
    pub coords: Vec<LinearForm>,
}

impl DualCoords {
    /// True when every coordinate is a number (restriction of an integral class).
    pub fn is_numeric(&self) -> bool {
        self.coords.iter().all(LinearForm::is_constant)
    }

    /// Pretty form such as `7γ6` or `(b4 - b7)γ1 + …`.
    pub fn to_gamma_string(&self) -> String {
        let parts: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let g = format!("γ{}", i + 1);
                if c.is_constant() {
                    let v = c.constant_term();
                    if v.is_one() {
                        g
                    } else {
                        format!("{v}{g}")
                    }
                } else {
                    format!("({c}){g}")
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn embedded(config: &Configuration, n: usize) -> Result<&[HomologyClass], ConeError> {
    let classes = config.embedded_classes().ok_or(ConeError::MissingEmbedding)?;
    let found = classes[0].ambient().n;
    if found != n {
        return Err(ConeError::AmbientMismatch { expected: found, found: n });
    }
    Ok(classes)
}

/// `x|_{C_p} = Σ (x·uᵢ)·γᵢ` for an integral class.
pub fn restrict_class(x: &HomologyClass, config: &Configuration) -> Result<DualCoords, ConeError> {
    let n = x.ambient().n;
    let coords = embedded(config, n)?
        .iter()
        .map(|u| {
            let v = x.pair(u).expect("ambient checked");
            LinearForm::constant(n, rat(v))
        })
        .collect();
    Ok(DualCoords { p: config.p(), coords })
}

/// `[ω|_{C_p}] = Σ (ω·uᵢ)·γᵢ` for the symbolic class.
pub fn restrict_symbolic(omega: &SymbolicClass, config: &Configuration) -> Result<DualCoords, ConeError> {
    let coords = embedded(config, omega.n)?
        .iter()
        .map(|u| omega.pair(u))
        .collect::<Result<_, _>>()?;
    Ok(DualCoords { p: config.p(), coords })
}

/// `xᵀ Q y` with `Q = P⁻¹`. At least one side must be numeric.
pub fn pair_dual(config: &Configuration, x: &DualCoords, y: &DualCoords) -> Result<LinearForm, ConeError> {
    for d in [x, y] {
        if d.p != config.p() {
            return Err(ConeError::ConfigMismatch(d.p, config.p()));
        }
    }
    let (num, sym) = match (x.is_numeric(), y.is_numeric()) {
        (true, _) => (x, y),
        (false, true) => (y, x),
        (false, false) => return Err(ConeError::Nonlinear),
    };
    let n = sym.coords[0].n();
    let q = config.dual_form();
    let mut out = LinearForm::zero(n);
    for (i, xi) in num.coords.iter().enumerate() {
        let xi = xi.constant_term();
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in sym.coords.iter().enumerate() {
            let k = xi * q.get(i, j);
            if !k.is_zero() {
                out = &out + &yj.scale(&k);
            }
        }
    }
    Ok(out)
}

/// Every intermediate of the blow-down pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowdownPairing {
    pub canonical_restricted: DualCoords,
    pub omega_restricted: DualCoords,
    /// `K·[ω]` in the ambient.
    pub ambient_term: LinearForm,
    /// `K|_{C_p} · [ω|_{C_p}]`.
    pub restricted_term: LinearForm,
    /// `K_p·[ω_p] = K·[ω] − K|_{C_p}·[ω|_{C_p}]`.
    pub result: LinearForm,
}

/// `K_p·[ω_p] = K·[ω] − K|_{C_p}·[ω|_{C_p}]`; the rational ball contributes
/// nothing since its rational second cohomology vanishes.
pub fn blowdown_pairing(canonical: &HomologyClass, config: &Configuration) -> Result<BlowdownPairing, ConeError> {
    let n = canonical.ambient().n;
    let omega = SymbolicClass::new(n);
    let canonical_restricted = restrict_class(canonical, config)?;
    let omega_restricted = restrict_symbolic(&omega, config)?;
    let ambient_term = omega.pair(canonical)?;
    let restricted_term = pair_dual(config, &canonical_restricted, &omega_restricted)?;
    let result = &ambient_term - &restricted_term;
    Ok(BlowdownPairing { canonical_restricted, omega_restricted, ambient_term, restricted_term, result })
}

/// Proof that `f > 0` on the cone: `ν·f = μ·s + Σ λᵢ·Nᵢ` identically, with
/// `λ ≥ 0`, `ν ≥ 0`, `μ > 0`. When `ν > 0` this exhibits `f` as a positive
/// combination of the constraints; `ν = 0` means the cone itself is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivityCertificate {
    pub nonstrict_multipliers: Vec<Rational>,
    pub strict_multiplier: Rational,
    pub form_multiplier: Rational,
}

impl PositivityCertificate {
    /// Re-expands the identity exactly. Independent of the LP code path.
    pub fn verify(&self, f: &LinearForm, cone: &ConeSystem) -> bool {
        if cone.strict.len() != 1 || self.nonstrict_multipliers.len() != cone.nonstrict.len() {
            return false;
        }
        if self.nonstrict_multipliers.iter().any(Signed::is_negative)
            || self.form_multiplier.is_negative()
            || !self.strict_multiplier.is_positive()
        {
            return false;
        }
        let mut rhs = cone.strict[0].scale(&self.strict_multiplier);
        for (l, g) in self.nonstrict_multipliers.iter().zip(&cone.nonstrict) {
            rhs = &rhs + &g.scale(l);
        }
        f.scale(&self.form_multiplier) == rhs
    }

    /// `f = (1/ν)·s + Σ (λᵢ/ν)·Nᵢ`, nonzero terms only. Empty when `ν = 0`.
    pub fn decomposition(&self, cone: &ConeSystem) -> Vec<(Rational, LinearForm)> {
        if self.form_multiplier.is_zero() {
            return Vec::new();
        }
        let inv = self.form_multiplier.recip();
        std::iter::once((&self.strict_multiplier * &inv, cone.strict[0].clone()))
            .chain(
                self.nonstrict_multipliers
                    .iter()
                    .zip(&cone.nonstrict)
                    .map(|(l, g)| (l * &inv, g.clone())),
            )
            .filter(|(c, _)| !c.is_zero())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PositivityResult {
    Positive(PositivityCertificate),
    /// A cone point `(a, b₁, …, bₙ)` at which the form is `≤ 0`.
    NotPositive { witness: Vec<Rational> },
}

impl PositivityResult {
    pub fn is_positive(&self) -> bool {
        matches!(self, PositivityResult::Positive(_))
    }
}

fn check_shape(f: &LinearForm, cone: &ConeSystem) -> Result<(), ConeError> {
    if f.n() != cone.n {
        return Err(ConeError::AmbientMismatch { expected: cone.n, found: f.n() });
    }
    let all = cone.nonstrict.iter().chain(&cone.strict);
    if !f.is_homogeneous() || all.clone().any(|g| !g.is_homogeneous()) {
        return Err(ConeError::NotHomogeneous);
    }
    Ok(())
}

/// Decides `f > 0` on `{nonstrict ≥ 0, s > 0}` via feasibility of
/// `{nonstrict ≥ 0, s = 1, f ≤ 0}`; by homogeneity every point with `s > 0`
/// rescales onto the slice `s = 1`.
pub fn certify_positive(f: &LinearForm, cone: &ConeSystem) -> Result<PositivityResult, ConeError> {
    check_shape(f, cone)?;
    if cone.strict.len() != 1 {
        return Err(ConeError::MultipleStrict(cone.strict.len()));
    }
    let vars = cone.n + 1;
    let mut system: Vec<LinearConstraint> = cone
        .nonstrict
        .iter()
        .map(|g| LinearConstraint::ge(g.coeffs().to_vec(), Rational::zero()))
        .collect();
    system.push(LinearConstraint::positive_slice(cone.strict[0].coeffs().to_vec()));
    system.push(LinearConstraint::ge((-f).coeffs().to_vec(), Rational::zero()));

    let result = match lp_feasible(vars, &system)? {
        LpOutcome::Feasible { witness } => PositivityResult::NotPositive { witness },
        LpOutcome::Infeasible { certificate } => {
            // Σλᵢ Nᵢ + μ s − ν f ≡ 0 with μ·1 > 0.
            let k = cone.nonstrict.len();
            PositivityResult::Positive(PositivityCertificate {
                nonstrict_multipliers: certificate[..k].to_vec(),
                strict_multiplier: certificate[k].clone(),
                form_multiplier: certificate[k + 1].clone(),
            })
        }
    };
    let sound = match &result {
        PositivityResult::Positive(cert) => cert.verify(f, cone),
        PositivityResult::NotPositive { witness } => {
            cone.contains(witness) && !f.eval(witness).is_positive()
        }
    };
    if !sound {
        return Err(LpError::VerificationFailed("positivity verdict").into());
    }
    Ok(result)
}

/// Decides `f ≥ 0` on the closed cone `{nonstrict ≥ 0}` via feasibility of
/// `{nonstrict ≥ 0, f = −1}`. Returns the multipliers `λ ≥ 0` with
/// `f = Σ λᵢ·Nᵢ` when it holds, or a point where `f < 0`.
pub fn certify_nonnegative(f: &LinearForm, cone: &ConeSystem) -> Result<Result<Vec<Rational>, Vec<Rational>>, ConeError> {
    check_shape(f, cone)?;
    let vars = cone.n + 1;
    let mut system: Vec<LinearConstraint> = cone
        .nonstrict
        .iter()
        .map(|g| LinearConstraint::ge(g.coeffs().to_vec(), Rational::zero()))
        .collect();
    system.push(LinearConstraint::eq(f.coeffs().to_vec(), rat(-1)));
    match lp_feasible(vars, &system)? {
        LpOutcome::Feasible { witness } => Ok(Err(witness)),
        LpOutcome::Infeasible { certificate } => {
            // Σλᵢ Nᵢ + μ f ≡ 0 and −μ > 0, so f = Σ (λᵢ/−μ) Nᵢ.
            let k = cone.nonstrict.len();
            let mu = -certificate[k].clone();
            let lambdas: Vec<Rational> = certificate[..k].iter().map(|l| l / &mu).collect();
            let recombined = lambdas
                .iter()
                .zip(&cone.nonstrict)
                .fold(LinearForm::zero(cone.n), |acc, (l, g)| &acc + &g.scale(l));
            if recombined != *f {
                return Err(LpError::VerificationFailed("nonnegativity certificate").into());
            }
            Ok(Ok(lambdas))
        }
    }
}
