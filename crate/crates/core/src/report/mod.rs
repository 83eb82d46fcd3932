//! End-to-end pipelines: scenario in, exact report out.
//!
//! Every number in a report is an exact integer or `num/den` string. Facts
//! the pipeline computes are tagged `COMPUTED`; cited geometric or
//! gauge-theoretic inputs are tagged `ASSUMED`.

mod reference;
mod scenario;
mod text;

use serde::Serialize;
use thiserror::Error;

use crate::cone::{
    blowdown_pairing, certify_positive, symplectic_cone, ConeError, DualCoords, LinearForm,
    PositivityResult,
};
use crate::invariants::{
    homeo_type, kotschick_bound, rational_surface_invariants, sw_dimension, blowup_basic_classes,
    Chamber, InvariantsError, ManifoldInvariants, Parity, SwRecord,
};
use crate::lattice::{Ambient, HomologyClass};
use crate::plumbing::{make_cp, make_e6_tilde, Configuration, Mismatch, PlumbingError};
use crate::ratmath::{rat, Matrix};

pub use reference::{check_against_reference, has_reference, ReferenceCheck};
pub use scenario::{Assumption, Builtin, ParseError, Scenario};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Input(String),
    #[error("embedding check failed at Gram entry ({}, {}): expected {}, found {}", .0.row, .0.col, .0.expected, .0.found)]
    EmbeddingFailed(Mismatch),
    #[error("{stage}: {message}")]
    Stage { stage: &'static str, message: String },
}

impl ReportError {
    /// 1 for verification failures, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            ReportError::Parse { .. } | ReportError::Input(_) => 2,
            ReportError::EmbeddingFailed(_) | ReportError::Stage { .. } => 1,
        }
    }
}

fn stage<E: std::fmt::Display>(stage: &'static str) -> impl FnOnce(E) -> ReportError {
    move |e| ReportError::Stage { stage, message: e.to_string() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Computed,
    Assumed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conclusion {
    pub id: usize,
    pub statement: String,
    pub status: Status,
    pub basis: String,
    /// Ids of earlier conclusions this one depends on.
    pub relies_on: Vec<usize>,
}

#[derive(Default)]
struct Chain(Vec<Conclusion>);

impl Chain {
    fn push(&mut self, status: Status, statement: impl Into<String>, basis: impl Into<String>, relies_on: &[usize]) -> usize {
        let id = self.0.len() + 1;
        self.0.push(Conclusion {
            id,
            statement: statement.into(),
            status,
            basis: basis.into(),
            relies_on: relies_on.to_vec(),
        });
        id
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassEcho {
    pub label: String,
    pub coeffs: Vec<i64>,
    pub text: String,
    pub square: i64,
}

impl ClassEcho {
    fn new(label: impl Into<String>, c: &HomologyClass) -> Self {
        Self { label: label.into(), coeffs: c.coeffs().to_vec(), text: c.to_string(), square: c.square() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScenarioEcho {
    pub name: String,
    pub n: usize,
    pub p: usize,
    pub classes: Vec<ClassEcho>,
    pub canonical: ClassEcho,
    pub cone: String,
    pub assumptions: Vec<Assumption>,
}

fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    m.row_vecs().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

/// `−1/49 · [[41, 33, …], …]`.
pub fn factored_matrix_string(m: &Matrix) -> String {
    let (k, rows) = m.factored();
    let body: Vec<String> = rows
        .iter()
        .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("{k} · [{}]", body.join(", "))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigurationEcho {
    pub p: usize,
    pub weights: Vec<i64>,
    pub plumbing_matrix: Vec<Vec<String>>,
    pub dual_form: Vec<Vec<String>>,
    pub dual_form_factored: String,
    pub determinant_abs: String,
    pub negative_definite: bool,
    pub boundary: String,
}

impl ConfigurationEcho {
    fn new(config: &Configuration) -> Self {
        Self {
            p: config.p(),
            weights: config.graph().weights(),
            plumbing_matrix: matrix_strings(config.plumbing_matrix()),
            dual_form: matrix_strings(config.dual_form()),
            dual_form_factored: factored_matrix_string(config.dual_form()),
            determinant_abs: config.determinant_abs().to_string(),
            negative_definite: config.plumbing_matrix().is_negative_definite(),
            boundary: config.boundary().to_string(),
        }
    }
}

impl ConfigurationEcho {
    pub fn to_text(&self) -> String {
        text::configuration(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }
}

/// `plumbing --p k` output.
pub fn plumbing_summary(p: i64) -> Result<ConfigurationEcho, ReportError> {
    let config = make_cp(p).map_err(|e| ReportError::Input(e.to_string()))?;
    Ok(ConfigurationEcho::new(&config))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingEcho {
    pub gram: Vec<Vec<i64>>,
    pub diagonal_checked: usize,
    pub off_diagonal_checked: usize,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberEcho {
    pub classes: Vec<ClassEcho>,
    pub multiplicities: Vec<i64>,
    pub fiber_sum: ClassEcho,
    pub fiber_sum_matches: bool,
    pub canonical_pairings: Vec<i64>,
    /// For each `uᵢ`, the fiber component it coincides with, if any.
    pub identified: Vec<Option<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionEcho {
    pub coords: Vec<String>,
    pub gamma: String,
}

impl RestrictionEcho {
    fn new(d: &DualCoords) -> Self {
        Self { coords: d.coords.iter().map(ToString::to_string).collect(), gamma: d.to_gamma_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionSection {
    pub canonical: RestrictionEcho,
    pub omega: RestrictionEcho,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormEcho {
    pub text: String,
    pub factored: String,
    pub coefficients: LinearForm,
}

impl FormEcho {
    fn new(f: &LinearForm) -> Self {
        Self { text: f.to_string(), factored: f.factored_string(), coefficients: f.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairingSection {
    /// `K·[ω]`
    pub ambient_term: FormEcho,
    /// `K|C · [ω|C]`
    pub restricted_term: FormEcho,
    /// `K_p·[ω_p]`
    pub blown_down: FormEcho,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeEcho {
    pub nonstrict: Vec<String>,
    pub strict: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightedConstraint {
    pub coefficient: String,
    pub constraint: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateEcho {
    pub form_multiplier: String,
    pub strict_multiplier: String,
    pub nonstrict_multipliers: Vec<String>,
    /// The form as a non-negative combination of the cone constraints.
    pub decomposition: Vec<WeightedConstraint>,
    pub verified: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Positive,
    NotPositive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PositivitySection {
    pub cone: ConeEcho,
    pub verdict: Verdict,
    pub certificate: Option<CertificateEcho>,
    /// Cone point `(a, b1, …, bn)` where the form is not positive.
    pub witness: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantRow {
    pub stage: String,
    pub b2plus: u32,
    pub b2minus: u32,
    pub euler: i64,
    pub signature: i64,
    pub c1sq: i64,
    pub parity: Parity,
    pub simply_connected: bool,
    pub consistent: bool,
}

impl InvariantRow {
    fn new(stage: impl Into<String>, inv: &ManifoldInvariants) -> Self {
        Self {
            stage: stage.into(),
            b2plus: inv.b2plus,
            b2minus: inv.b2minus,
            euler: inv.euler,
            signature: inv.signature,
            c1sq: inv.c1sq,
            parity: inv.parity,
            simply_connected: inv.simply_connected,
            consistent: inv.is_consistent(),
        }
    }

    pub fn numeric(&self) -> (u32, u32, i64, i64, i64) {
        (self.b2plus, self.b2minus, self.euler, self.signature, self.c1sq)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantSection {
    pub rows: Vec<InvariantRow>,
    /// `None` when simple connectivity is not asserted.
    pub homeo_type: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SwSection {
    pub records: Vec<SwRecord>,
    pub c1sq_nonnegative: bool,
    pub b2minus_at_most_9: bool,
    /// Sign of `(−K_p)·[ω_p]`, known when positivity is certified.
    pub anticanonical_sign: Option<i8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlowdownReport {
    pub kind: &'static str,
    pub scenario: ScenarioEcho,
    pub configuration: ConfigurationEcho,
    pub embedding: EmbeddingEcho,
    pub fiber: Option<FiberEcho>,
    pub restriction: RestrictionSection,
    pub pairing: PairingSection,
    pub positivity: PositivitySection,
    pub invariants: InvariantSection,
    pub seiberg_witten: SwSection,
    pub conclusions: Vec<Conclusion>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasicClassEcho {
    pub class: ClassEcho,
    pub characteristic: bool,
    pub sw_dimension: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KotschickSection {
    pub euler: i64,
    pub signature: i64,
    pub d: i64,
    pub bound: String,
    pub split_off: i64,
    /// `split_off ≤ bound`; false is the contradiction.
    pub bound_satisfied: bool,
    pub contradiction: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EinsteinReport {
    pub kind: &'static str,
    pub source: InvariantRow,
    pub canonical_model: ClassEcho,
    pub canonical_model_characteristic: bool,
    pub blown_up: InvariantRow,
    pub exceptional: ClassEcho,
    pub basic_classes: Vec<BasicClassEcho>,
    /// `3σ + 2e` of the blow-up; `d = (c² − (3σ + 2e))/4`.
    pub three_sigma_plus_two_e: i64,
    pub d: i64,
    pub kotschick: KotschickSection,
    pub conclusions: Vec<Conclusion>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Report {
    Blowdown(Box<BlowdownReport>),
    Einstein(Box<EinsteinReport>),
}

impl Report {
    /// Pretty JSON with a fixed key order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        match self {
            Report::Blowdown(r) => text::blowdown(r),
            Report::Einstein(r) => text::einstein(r),
        }
    }

    pub fn as_blowdown(&self) -> Option<&BlowdownReport> {
        match self {
            Report::Blowdown(r) => Some(r),
            Report::Einstein(_) => None,
        }
    }

    pub fn as_einstein(&self) -> Option<&EinsteinReport> {
        match self {
            Report::Einstein(r) => Some(r),
            Report::Blowdown(_) => None,
        }
    }
}

pub fn run_main1() -> Result<Report, ReportError> {
    run_scenario(&Scenario::builtin(Builtin::C7Main))
}

pub fn run_main2() -> Result<Report, ReportError> {
    run_scenario(&Scenario::builtin(Builtin::C5Main))
}

/// Parses and runs a scenario file.
pub fn run_scenario_file(path: &std::path::Path) -> Result<Report, ReportError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ReportError::Input(format!("{}: {e}", path.display())))?;
    let scenario = Scenario::parse(&text)
        .map_err(|source| ReportError::Parse { path: path.display().to_string(), source })?;
    run_scenario(&scenario)
}

fn input<E: std::fmt::Display>(e: E) -> ReportError {
    ReportError::Input(e.to_string())
}

fn fiber_section(ambient: Ambient, classes: &[HomologyClass], canonical: &HomologyClass) -> Option<FiberEcho> {
    let e6 = make_e6_tilde();
    let in_ambient = e6.classes_in(ambient).ok()?;
    let fiber = ambient.fiber().ok()?;
    let sum = in_ambient
        .iter()
        .zip(&e6.multiplicities)
        .fold(ambient.zero(), |acc, (s, &m)| &acc + &(m * s));
    let label = |i: usize| format!("S{}", i + 1);
    Some(FiberEcho {
        classes: in_ambient.iter().enumerate().map(|(i, s)| ClassEcho::new(label(i), s)).collect(),
        multiplicities: e6.multiplicities.clone(),
        fiber_sum_matches: sum == fiber,
        fiber_sum: ClassEcho::new("f", &sum),
        canonical_pairings: in_ambient.iter().map(|s| canonical.pair(s).expect("same ambient")).collect(),
        identified: classes
            .iter()
            .map(|u| in_ambient.iter().position(|s| s == u).map(label))
            .collect(),
    })
}

/// verify_embedding → restrict → pair → blow-down pairing → positivity →
/// invariants → conclusions.
pub fn run_scenario(s: &Scenario) -> Result<Report, ReportError> {
    let ambient = Ambient::new(s.n);
    if s.classes.len() + 1 != s.p {
        return Err(ReportError::Input(format!("p = {} needs {} classes, found {}", s.p, s.p - 1, s.classes.len())));
    }
    for c in s.classes.iter().chain(std::iter::once(&s.canonical)) {
        if c.ambient() != ambient {
            return Err(ReportError::Input(format!("class {c} is not in CP² # {}CP̄²", s.n)));
        }
    }
    if s.n == 0 {
        return Err(ReportError::Input("n must be at least 1".into()));
    }
    let p = i64::try_from(s.p).map_err(input)?;
    let config = make_cp(p).map_err(input)?;

    let check = config.verify_embedding(&s.classes).map_err(input)?;
    if let Some(m) = check.mismatch {
        return Err(ReportError::EmbeddingFailed(m));
    }
    let config = config.with_embedding(s.classes.clone()).map_err(|e| match e {
        PlumbingError::EmbeddingFailed(m) => ReportError::EmbeddingFailed(m),
        other => input(other),
    })?;
    let k = s.p - 1;
    let embedding = EmbeddingEcho {
        gram: check.gram,
        diagonal_checked: k,
        off_diagonal_checked: k * (k - 1) / 2,
        matches: true,
    };

    let pairing = blowdown_pairing(&s.canonical, &config).map_err(stage::<ConeError>("pairing"))?;
    let cone = symplectic_cone(s.n);
    let verdict = certify_positive(&pairing.result, &cone).map_err(stage::<ConeError>("positivity"))?;
    let positivity = match &verdict {
        PositivityResult::Positive(cert) => {
            let verified = cert.verify(&pairing.result, &cone);
            if !verified {
                return Err(ReportError::Stage { stage: "positivity", message: "certificate failed independent check".into() });
            }
            PositivitySection {
                cone: cone_echo(&cone),
                verdict: Verdict::Positive,
                certificate: Some(CertificateEcho {
                    form_multiplier: cert.form_multiplier.to_string(),
                    strict_multiplier: cert.strict_multiplier.to_string(),
                    nonstrict_multipliers: cert.nonstrict_multipliers.iter().map(ToString::to_string).collect(),
                    decomposition: cert
                        .decomposition(&cone)
                        .into_iter()
                        .map(|(c, g)| WeightedConstraint { coefficient: c.to_string(), constraint: g.to_string() })
                        .collect(),
                    verified,
                }),
                witness: None,
            }
        }
        PositivityResult::NotPositive { witness } => PositivitySection {
            cone: cone_echo(&cone),
            verdict: Verdict::NotPositive,
            certificate: None,
            witness: Some(witness.iter().map(ToString::to_string).collect()),
        },
    };
    let positive = verdict.is_positive();

    let n32 = u32::try_from(s.n).map_err(input)?;
    let p32 = u32::try_from(s.p).map_err(input)?;
    let before = rational_surface_invariants(n32);
    let sc = s.assumes_simply_connected();
    let after = before.rational_blowdown(p32, sc).map_err(stage::<InvariantsError>("invariants"))?;
    let homeo = homeo_type(&after).ok();
    let invariants = InvariantSection {
        rows: vec![
            InvariantRow::new(format!("CP² # {}CP̄²", s.n), &before),
            InvariantRow::new(format!("X_{} (rational blow-down of C_{})", s.p, s.p), &after),
        ],
        homeo_type: homeo.map(|h| h.to_string()),
    };

    let chamber = if positive { Chamber::Minus } else { Chamber::Undetermined };
    let records = SwRecord::new(format!("-K_{}", s.p), after.c1sq, &after, chamber)
        .map(|r| vec![r])
        .unwrap_or_default();
    let seiberg_witten = SwSection {
        records,
        c1sq_nonnegative: after.c1sq >= 0,
        b2minus_at_most_9: after.b2minus <= 9,
        anticanonical_sign: positive.then_some(-1),
    };

    let conclusions = blowdown_conclusions(s, &pairing.result, positive, &after, homeo.map(|h| h.to_string()), &seiberg_witten);

    let fiber = if s.n >= 9 { fiber_section(ambient, &s.classes, &s.canonical) } else { None };

    Ok(Report::Blowdown(Box::new(BlowdownReport {
        kind: "blowdown",
        scenario: ScenarioEcho {
            name: s.name.clone(),
            n: s.n,
            p: s.p,
            classes: s.classes.iter().enumerate().map(|(i, c)| ClassEcho::new(format!("u{}", i + 1), c)).collect(),
            canonical: ClassEcho::new("K", &s.canonical),
            cone: "standard".into(),
            assumptions: s.assumptions.clone(),
        },
        configuration: ConfigurationEcho::new(&config),
        embedding,
        fiber,
        restriction: RestrictionSection {
            canonical: RestrictionEcho::new(&pairing.canonical_restricted),
            omega: RestrictionEcho::new(&pairing.omega_restricted),
        },
        pairing: PairingSection {
            ambient_term: FormEcho::new(&pairing.ambient_term),
            restricted_term: FormEcho::new(&pairing.restricted_term),
            blown_down: FormEcho::new(&pairing.result),
        },
        positivity,
        invariants,
        seiberg_witten,
        conclusions,
        notes: vec![
            "Reports compare computed forms and invariants only; agreement between two scenarios does not decide whether the resulting manifolds are diffeomorphic.".into(),
        ],
    })))
}

fn cone_echo(cone: &crate::cone::ConeSystem) -> ConeEcho {
    ConeEcho {
        nonstrict: cone.nonstrict.iter().map(|g| format!("{g} >= 0")).collect(),
        strict: cone.strict.iter().map(|g| format!("{g} > 0")).collect(),
    }
}

fn blowdown_conclusions(
    s: &Scenario,
    form: &LinearForm,
    positive: bool,
    after: &ManifoldInvariants,
    homeo: Option<String>,
    sw: &SwSection,
) -> Vec<Conclusion> {
    use Status::{Assumed, Computed};
    let p = s.p;
    let mut c = Chain::default();

    let gram = c.push(Computed, format!("u1..u{} have Gram matrix P, so C_{p} embeds in the lattice of CP² # {}CP̄²", p - 1, s.n), "pairwise lattice arithmetic", &[]);
    let spheres = c.push(Assumed, format!("u1..u{} are represented by symplectic spheres meeting positively and transversally", p - 1), "geometric construction of the configuration", &[]);
    let symington = c.push(Assumed, format!("X_{p} carries a symplectic form ω_{p} agreeing with ω off C_{p}"), "Symington: rational blow-down of symplectic spheres", &[spheres]);
    let cone = c.push(Assumed, "every symplectic class on the ambient is a·h - Σ bi·ei with a ≥ b1 ≥ … ≥ bn ≥ 0 and 3a > Σ bi", "Li-Liu uniqueness of symplectic structures on rational surfaces", &[]);
    let sign = if positive {
        c.push(Computed, format!("K_{p}·[ω_{p}] = {} > 0 on the whole cone", form.factored_string()), "rational positivity certificate, independently re-verified", &[gram, cone, symington])
    } else {
        c.push(Computed, format!("K_{p}·[ω_{p}] = {} is not positive everywhere on the cone (see witness)", form.factored_string()), "feasible point of the linear system", &[gram, cone])
    };
    let pi1 = match s.assumed("simply_connected") {
        Some(a) if a.value => Some(c.push(Assumed, format!("X_{p} is simply connected"), a.justification.clone(), &[])),
        _ => None,
    };
    let inv = c.push(
        Computed,
        format!(
            "X_{p} has (b2+, b2-, e, σ, c1²) = ({}, {}, {}, {}, {})",
            after.b2plus, after.b2minus, after.euler, after.signature, after.c1sq
        ),
        "rank bookkeeping under rational blow-down",
        &[gram],
    );
    let homeo_id = match (homeo, pi1) {
        (Some(h), Some(pi1)) => {
            let freedman = c.push(Assumed, "a simply connected closed 4-manifold with odd form is determined up to homeomorphism by b2+ and b2-", "Freedman classification", &[]);
            Some(c.push(Assumed, format!("X_{p} is homeomorphic to {h}"), "invariants plus classification", &[inv, pi1, freedman]))
        }
        _ => None,
    };
    if !positive {
        c.push(Computed, "positivity of the canonical pairing is not established; the exotic-structure argument does not apply", "verdict NotPositive", &[sign]);
        return c.0;
    }
    let taubes = c.push(Assumed, format!("SW⁻(-K_{p}) = ±1 for the symplectic structure ω_{p}"), "Taubes; Li-Liu chamber convention for b2+ = 1", &[symington]);
    let well = sw.c1sq_nonnegative && sw.b2minus_at_most_9;
    let wd = c.push(
        Computed,
        format!(
            "b2- = {} ≤ 9 and c1² = {} ≥ 0: {}",
            after.b2minus,
            after.c1sq,
            if well { "the small-perturbation invariant SW° is well defined" } else { "the small-perturbation invariant is not known to be well defined" }
        ),
        "light cone lemma",
        &[inv],
    );
    if !well {
        return c.0;
    }
    let psc = c.push(Assumed, "CP² # kCP̄² carries positive scalar curvature, so SW° vanishes on it", "Weitzenböck vanishing", &[]);
    let mut deps = vec![sign, taubes, wd, psc];
    deps.extend(homeo_id);
    c.push(Assumed, format!("X_{p} is not diffeomorphic to CP² # {}CP̄²", after.b2minus), "SW°(-K) differs", &deps);
    c.0
}

/// Obstruction to Einstein metrics on `X₇ # CP̄²`, built on the `C₇`
/// pipeline.
pub fn run_main3() -> Result<Report, ReportError> {
    use Status::{Assumed, Computed};
    let main1 = run_main1()?;
    let r1 = main1.as_blowdown().expect("blow-down report");
    let x7_row = r1.invariants.rows[1].clone();
    let s = Scenario::builtin(Builtin::C7Main);
    let x7 = rational_surface_invariants(13)
        .rational_blowdown(7, s.assumes_simply_connected())
        .map_err(stage::<InvariantsError>("invariants"))?;

    // Lattice model: X₇ has the form of CP² # 7CP̄², and its canonical class
    // is stood in for by the characteristic class −3h + Σeᵢ of square 2.
    let model = Ambient::new(7);
    let k7 = model.canonical();
    let (_, classes) = blowup_basic_classes(std::slice::from_ref(&k7)).map_err(stage::<InvariantsError>("blow-up"))?;
    let blown = x7.blow_up();
    let e = Ambient::new(8).e(8);
    let labels = ["K_7+E", "K_7-E"];
    let basic = classes
        .iter()
        .zip(labels)
        .map(|(c, l)| {
            let d = sw_dimension(c.square(), &blown).map_err(stage::<InvariantsError>("sw dimension"))?;
            Ok(BasicClassEcho { class: ClassEcho::new(l, c), characteristic: c.is_characteristic(), sw_dimension: d })
        })
        .collect::<Result<Vec<_>, ReportError>>()?;
    let d = basic[0].sw_dimension;
    let bound = kotschick_bound(&blown, d);
    let split_off = 1;
    let satisfied = rat(split_off) <= bound;

    let mut c = Chain::default();
    let inv = c.push(Computed, format!("X_7 has (b2+, b2-, e, σ, c1²) = {:?}", x7.numeric()), "C_7 blow-down pipeline", &[]);
    let basic7 = c.push(Assumed, "K_7 is a Seiberg-Witten basic class of X_7", "Taubes: the canonical class of a symplectic manifold", &[]);
    let blowup = c.push(Assumed, "K_7 + E and K_7 - E are basic classes of X_7 # CP̄²", "blow-up formula", &[basic7]);
    let dim = c.push(
        Computed,
        format!("(K_7 ± E)² = {} and 3σ + 2e = {} for X_7 # CP̄², so d = {d}", basic[0].class.square, blown.c1sq),
        "formal dimension (c1(L)² - 3σ - 2e)/4",
        &[inv],
    );
    let kot = c.push(Assumed, "an Einstein manifold with a monopole class of moduli dimension d splits off at most (2e + 3σ - 8d)/2 copies of CP̄²", "Kotschick", &[]);
    let arith = c.push(Computed, format!("{split_off} ≤ {bound} is false"), "exact arithmetic", &[dim]);
    let contra = c.push(Assumed, "X_7 # CP̄² admits no Einstein metric", "bound violated", &[blowup, kot, arith]);
    let cp8 = c.push(Assumed, "CP² # 8CP̄² admits an Einstein metric with positive scalar curvature", "Kähler-Einstein metrics on del Pezzo surfaces", &[]);
    let barlow = c.push(Assumed, "the Barlow surface is homeomorphic to CP² # 8CP̄² and admits an Einstein metric with negative scalar curvature", "Barlow; Aubin-Yau", &[]);
    let distinct = c.push(Assumed, "X_7 # CP̄², the Barlow surface and CP² # 8CP̄² are pairwise non-diffeomorphic", "Seiberg-Witten basic classes", &[blowup]);
    c.push(
        Assumed,
        "the homeomorphism type CP² # 8CP̄² carries at least three smooth structures: Einstein with positive scalar curvature, Einstein with negative scalar curvature, and no Einstein metric",
        "combination",
        &[contra, cp8, barlow, distinct],
    );

    Ok(Report::Einstein(Box::new(EinsteinReport {
        kind: "einstein",
        source: x7_row,
        canonical_model: ClassEcho::new("K_7", &k7),
        canonical_model_characteristic: k7.is_characteristic(),
        blown_up: InvariantRow::new("X_7 # CP̄²", &blown),
        exceptional: ClassEcho::new("E", &e),
        basic_classes: basic,
        three_sigma_plus_two_e: blown.c1sq,
        d,
        kotschick: KotschickSection {
            euler: blown.euler,
            signature: blown.signature,
            d,
            bound: bound.to_string(),
            split_off,
            bound_satisfied: satisfied,
            contradiction: !satisfied,
        },
        conclusions: c.0,
        notes: vec![
            "K_7 is modelled as the characteristic class -3h + e1 + … + e7 of square c1²(X_7) = 2 in a lattice of the same rank and parity; only its square and parity enter the computation.".into(),
        ],
    })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn main1_matches_builtin_scenario_file() {
        let a = run_main1().unwrap();
        let text = Scenario::builtin(Builtin::C7Main).to_file_string();
        let b = run_scenario(&Scenario::parse(&text).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn main1_chain() {
        let r = run_main1().unwrap();
        let r = r.as_blowdown().unwrap();
        assert_eq!(r.restriction.canonical.gamma, "7γ6");
        assert_eq!(r.positivity.verdict, Verdict::Positive);
        assert!(r.positivity.certificate.as_ref().unwrap().verified);
        assert_eq!(r.invariants.rows[1].numeric(), (1, 7, 10, -6, 2));
        assert_eq!(r.invariants.homeo_type.as_deref(), Some("CP² # 7CP̄²"));
        assert_eq!((r.embedding.diagonal_checked, r.embedding.off_diagonal_checked), (6, 15));
        let fib = r.fiber.as_ref().unwrap();
        assert!(fib.fiber_sum_matches);
        assert!(fib.canonical_pairings.iter().all(|&x| x == 0));
        assert_eq!(fib.identified[..5].iter().flatten().count(), 5);
        assert!(fib.identified[5].is_none());
        let last = r.conclusions.last().unwrap();
        assert!(last.statement.contains("not diffeomorphic"));
        assert_eq!(last.status, Status::Assumed);
        assert_eq!(r.seiberg_witten.records[0].dimension, 0);
        assert_eq!(r.seiberg_witten.records[0].chamber, Chamber::Minus);
    }

    #[test]
    fn main2_chain() {
        let r = run_main2().unwrap();
        let r = r.as_blowdown().unwrap();
        assert_eq!(r.restriction.canonical.gamma, "5γ4");
        assert_eq!(r.scenario.classes[3].square, -7);
        assert_eq!(r.invariants.rows[1].numeric(), (1, 8, 11, -7, 1));
        assert_eq!(r.invariants.homeo_type.as_deref(), Some("CP² # 8CP̄²"));
    }

    #[test]
    fn main3_contradiction() {
        let r = run_main3().unwrap();
        let r = r.as_einstein().unwrap();
        assert_eq!(r.kotschick.bound, "1/2");
        assert!(r.kotschick.contradiction);
        assert_eq!(r.d, 0);
        assert_eq!(r.three_sigma_plus_two_e, 1);
        assert_eq!(r.basic_classes.iter().map(|b| b.class.label.as_str()).collect::<Vec<_>>(), ["K_7+E", "K_7-E"]);
        assert!(r.basic_classes.iter().all(|b| b.class.square == 1 && b.characteristic));
        assert!(r.canonical_model_characteristic);
        assert_eq!(r.blown_up.numeric(), (1, 8, 11, -7, 1));
    }

    #[test]
    fn embedding_failures_are_verification_errors() {
        let mut s = Scenario::builtin(Builtin::C7Main);
        let e6 = make_e6_tilde().classes_in(Ambient::new(13)).unwrap();
        s.classes[5] = e6[5].clone();
        let err = run_scenario(&s).unwrap_err();
        assert_eq!(err, ReportError::EmbeddingFailed(Mismatch { row: 6, col: 6, expected: -9, found: -2 }));
        assert_eq!(err.exit_code(), 1);

        let toy = Scenario::parse("n = 2\np = 2\nclass u1 = [0, 1, -1]\ncanonical = [-3, 1, 1]\n").unwrap();
        let err = run_scenario(&toy).unwrap_err();
        assert_eq!(err, ReportError::EmbeddingFailed(Mismatch { row: 1, col: 1, expected: -4, found: -2 }));
    }

    #[test]
    fn not_positive_is_reported_not_raised() {
        // A −4 sphere in CP² # 4CP̄²: 2e1 is not a sphere class but has the
        // right square; the canonical pairing fails positivity on part of
        // the cone.
        let s = Scenario::parse("n = 4\np = 2\nclass u1 = [0, 2, 0, 0, 0]\ncanonical = [-3, 1, 1, 1, 1]\n").unwrap();
        let r = run_scenario(&s).unwrap();
        let r = r.as_blowdown().unwrap();
        assert_eq!(r.positivity.verdict, Verdict::NotPositive);
        assert!(r.positivity.witness.is_some());
        assert!(r.invariants.homeo_type.is_none());
    }

    #[test]
    fn reports_are_deterministic() {
        for f in [run_main1, run_main2, run_main3] {
            assert_eq!(f().unwrap().to_json(), f().unwrap().to_json());
        }
    }

    #[test]
    fn plumbing_summary_q7() {
        let s = plumbing_summary(7).unwrap();
        assert!(s.dual_form_factored.starts_with("-1/49 · [[41, 33, 25, 17, 9, 1]"));
        assert_eq!(s.boundary, "L(49, -6)");
        assert!(plumbing_summary(1).is_err());
    }
}
