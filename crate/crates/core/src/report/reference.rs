//! Reference values for the built-in scenarios and the Einstein report,
//! written out by hand so that `--expect-paper` compares the pipeline
//! against numbers it did not produce.

use serde::Serialize;

use super::{BlowdownReport, EinsteinReport, Report, Verdict};
use crate::cone::LinearForm;
use crate::ratmath::ratio;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReferenceCheck {
    pub item: String,
    pub expected: String,
    pub found: String,
    pub ok: bool,
}

impl ReferenceCheck {
    fn new(item: &str, expected: impl ToString, found: impl ToString) -> Self {
        let (expected, found) = (expected.to_string(), found.to_string());
        Self { item: item.into(), ok: expected == found, expected, found }
    }
}

/// `(1/den)·(a·coef₀ + Σ bᵢ·coefᵢ)`.
fn form(den: i64, coeffs: &[i64]) -> LinearForm {
    LinearForm::from_coeffs(coeffs.iter().map(|&c| ratio(c, den)).collect())
}

struct BlowdownReference {
    canonical_gamma: &'static str,
    omega_coords: Option<Vec<LinearForm>>,
    ambient_term: LinearForm,
    restricted_term: LinearForm,
    blown_down: LinearForm,
    last_square: i64,
    invariants: (u32, u32, i64, i64, i64),
    homeo: &'static str,
}

fn c7() -> BlowdownReference {
    let n = 13;
    let omega = |v: &[(usize, i64)]| {
        let mut c = vec![0; n + 1];
        for &(i, x) in v {
            c[i] = x;
        }
        form(1, &c)
    };
    let mut last = vec![12, -4, -4, -4, -4, -4, -4, -4, -4, -3];
    last.extend([-2; 4]);
    BlowdownReference {
        canonical_gamma: "7γ6",
        omega_coords: Some(vec![
            omega(&[(4, 1), (7, -1)]),
            omega(&[(1, 1), (4, -1)]),
            omega(&[(0, 1), (1, -1), (2, -1), (3, -1)]),
            omega(&[(2, 1), (5, -1)]),
            omega(&[(5, 1), (9, -1)]),
            form(1, &last),
        ]),
        ambient_term: form(1, &[-3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]),
        restricted_term: form(-7, &[75, -25, -23, -27, -25, -23, -24, -25, -24, -23, -12, -12, -12, -12]),
        blown_down: form(7, &[54, -18, -16, -20, -18, -16, -17, -18, -17, -16, -5, -5, -5, -5]),
        last_square: -9,
        invariants: (1, 7, 10, -6, 2),
        homeo: "CP² # 7CP̄²",
    }
}

fn c5() -> BlowdownReference {
    BlowdownReference {
        canonical_gamma: "5γ4",
        omega_coords: None,
        ambient_term: form(1, &[-3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]),
        restricted_term: form(-5, &[39, -13, -11, -15, -13, -12, -12, -13, -12, -12, -8, -8, -8]),
        blown_down: form(5, &[24, -8, -6, -10, -8, -7, -7, -8, -7, -7, -3, -3, -3]),
        last_square: -7,
        invariants: (1, 8, 11, -7, 1),
        homeo: "CP² # 8CP̄²",
    }
}

fn reference_for(name: &str) -> Option<BlowdownReference> {
    match name {
        "C7-main" => Some(c7()),
        "C5-main" => Some(c5()),
        _ => None,
    }
}

/// True when `--expect-paper` has values to compare against.
pub fn has_reference(report: &Report) -> bool {
    match report {
        Report::Blowdown(r) => reference_for(&r.scenario.name).is_some(),
        Report::Einstein(_) => true,
    }
}

/// Compares a report with the reference values; `None` when none exist.
pub fn check_against_reference(report: &Report) -> Option<Vec<ReferenceCheck>> {
    match report {
        Report::Blowdown(r) => reference_for(&r.scenario.name).map(|x| check_blowdown(r, &x)),
        Report::Einstein(r) => Some(check_einstein(r)),
    }
}

fn check_blowdown(r: &BlowdownReport, x: &BlowdownReference) -> Vec<ReferenceCheck> {
    let mut out = vec![
        ReferenceCheck::new("embedding", true, r.embedding.matches),
        ReferenceCheck::new(
            "square of last sphere",
            x.last_square,
            r.scenario.classes.last().map_or(0, |c| c.square),
        ),
        ReferenceCheck::new("K|C", x.canonical_gamma, &r.restriction.canonical.gamma),
    ];
    if let Some(coords) = &x.omega_coords {
        let expected: Vec<String> = coords.iter().map(ToString::to_string).collect();
        out.push(ReferenceCheck::new("ω|C", expected.join("; "), r.restriction.omega.coords.join("; ")));
    }
    out.extend([
        ReferenceCheck::new("K·ω", x.ambient_term.factored_string(), &r.pairing.ambient_term.factored),
        ReferenceCheck::new("K|C·ω|C", x.restricted_term.factored_string(), &r.pairing.restricted_term.factored),
        ReferenceCheck::new("K_p·ω_p", x.blown_down.factored_string(), &r.pairing.blown_down.factored),
        ReferenceCheck::new("verdict", "Positive", format!("{:?}", r.positivity.verdict)),
        ReferenceCheck::new(
            "certificate verified",
            true,
            r.positivity.certificate.as_ref().is_some_and(|c| c.verified) && r.positivity.verdict == Verdict::Positive,
        ),
        ReferenceCheck::new("invariants", format!("{:?}", x.invariants), format!("{:?}", r.invariants.rows[1].numeric())),
        ReferenceCheck::new("homeomorphism type", x.homeo, r.invariants.homeo_type.as_deref().unwrap_or("-")),
    ]);
    out
}

fn check_einstein(r: &EinsteinReport) -> Vec<ReferenceCheck> {
    let labels: Vec<&str> = r.basic_classes.iter().map(|b| b.class.label.as_str()).collect();
    let squares: Vec<i64> = r.basic_classes.iter().map(|b| b.class.square).collect();
    vec![
        ReferenceCheck::new("X_7 invariants", "(1, 7, 10, -6, 2)", format!("{:?}", r.source.numeric())),
        ReferenceCheck::new("basic classes", "K_7+E, K_7-E", labels.join(", ")),
        ReferenceCheck::new("squares", "[1, 1]", format!("{squares:?}")),
        ReferenceCheck::new("3σ + 2e", 1, r.three_sigma_plus_two_e),
        ReferenceCheck::new("d", 0, r.d),
        ReferenceCheck::new("bound", "1/2", &r.kotschick.bound),
        ReferenceCheck::new("contradiction", true, r.kotschick.contradiction),
    ]
}
