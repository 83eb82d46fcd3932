use std::fmt::Write as _;

use super::{BlowdownReport, Conclusion, ConfigurationEcho, EinsteinReport, InvariantRow, Status};

fn grid<T: ToString>(rows: &[Vec<T>]) -> String {
    let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for r in &cells {
        let line: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "    [ {} ]", line.join("  "));
    }
    out
}

/// Left-aligns ignoring combining marks (the bar in `CP̄²`).
fn pad(s: &str, width: usize) -> String {
    let shown = s.chars().filter(|c| !('\u{0300}'..='\u{036f}').contains(c)).count();
    format!("{s}{}", " ".repeat(width.saturating_sub(shown)))
}

fn invariant_table(rows: &[InvariantRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "    {:<40} {:>4} {:>4} {:>4} {:>4} {:>4}  {:<5} π1=0", "stage", "b2+", "b2-", "e", "σ", "c1²", "form");
    for r in rows {
        let _ = writeln!(
            out,
            "    {} {:>4} {:>4} {:>4} {:>4} {:>4}  {:<5} {}",
            pad(&r.stage, 40),
            r.b2plus,
            r.b2minus,
            r.euler,
            r.signature,
            r.c1sq,
            format!("{:?}", r.parity).to_lowercase(),
            if r.simply_connected { "yes" } else { "not asserted" }
        );
    }
    out
}

fn conclusions(list: &[Conclusion]) -> String {
    let mut out = String::new();
    for c in list {
        let tag = match c.status {
            Status::Computed => "COMPUTED",
            Status::Assumed => "ASSUMED ",
        };
        let deps = if c.relies_on.is_empty() {
            String::new()
        } else {
            let ids: Vec<String> = c.relies_on.iter().map(|i| format!("#{i}")).collect();
            format!("; uses {}", ids.join(", "))
        };
        let _ = writeln!(out, "  #{:<2} [{tag}] {}", c.id, c.statement);
        let _ = writeln!(out, "        ({}{deps})", c.basis);
    }
    out
}

/// Shared by `plumbing --p` and the blow-down report.
pub fn configuration(c: &ConfigurationEcho) -> String {
    let mut out = String::new();
    let weights: Vec<String> = c.weights.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "Configuration C_{}: linear chain with weights ({})", c.p, weights.join(", "));
    let _ = writeln!(out, "  plumbing matrix P:");
    out.push_str(&grid(&c.plumbing_matrix));
    let _ = writeln!(out, "  dual form Q = P^-1 = {}", c.dual_form_factored);
    out.push_str(&grid(&c.dual_form));
    let _ = writeln!(out, "  |det P| = {}", c.determinant_abs);
    let _ = writeln!(out, "  negative definite: {}", c.negative_definite);
    let _ = writeln!(out, "  boundary: {}", c.boundary);
    out
}

pub fn blowdown(r: &BlowdownReport) -> String {
    let mut out = String::new();
    let s = &r.scenario;
    let _ = writeln!(out, "Scenario {}: CP² # {}CP̄², p = {}", s.name, s.n, s.p);
    for c in &s.classes {
        let _ = writeln!(out, "  {} = {}   (square {})", c.label, c.text, c.square);
    }
    let _ = writeln!(out, "  K = {}", s.canonical.text);
    for a in &s.assumptions {
        let _ = writeln!(out, "  assume {} = {}: {}", a.key, a.value, a.justification);
    }
    out.push('\n');
    out.push_str(&configuration(&r.configuration));
    out.push('\n');

    let _ = writeln!(
        out,
        "Embedding: Gram matrix of u_i equals P ({} diagonal and {} off-diagonal entries checked)",
        r.embedding.diagonal_checked, r.embedding.off_diagonal_checked
    );
    out.push_str(&grid(&r.embedding.gram));
    if let Some(f) = &r.fiber {
        let _ = writeln!(out, "\nFiber components:");
        for (c, m) in f.classes.iter().zip(&f.multiplicities) {
            let _ = writeln!(out, "  {} = {}   (square {}, multiplicity {m})", c.label, c.text, c.square);
        }
        let _ = writeln!(out, "  Σ mult·S_i = {} (equals the fiber: {})", f.fiber_sum.text, f.fiber_sum_matches);
        let _ = writeln!(out, "  K·S_i = {:?}", f.canonical_pairings);
        let ids: Vec<String> = f
            .identified
            .iter()
            .enumerate()
            .map(|(i, x)| format!("u{} = {}", i + 1, x.as_deref().unwrap_or("new")))
            .collect();
        let _ = writeln!(out, "  {}", ids.join(", "));
    }

    let _ = writeln!(out, "\nRestrictions (dual basis γ_i):");
    let _ = writeln!(out, "  K|C = {}", r.restriction.canonical.gamma);
    let _ = writeln!(out, "  ω|C = {}", r.restriction.omega.gamma);
    let _ = writeln!(out, "\nPairings:");
    let _ = writeln!(out, "  K·[ω]           = {}", r.pairing.ambient_term.factored);
    let _ = writeln!(out, "  K|C·[ω|C]       = {}", r.pairing.restricted_term.factored);
    let _ = writeln!(out, "  K_{0}·[ω_{0}]       = {1}", s.p, r.pairing.blown_down.factored);

    let pos = &r.positivity;
    let _ = writeln!(out, "\nPositivity on the symplectic cone ({} + {} constraints): {:?}", pos.cone.nonstrict.len(), pos.cone.strict.len(), pos.verdict);
    if let Some(c) = &pos.certificate {
        let _ = writeln!(out, "  certificate (verified: {}): K_{}·[ω_{}] =", c.verified, s.p, s.p);
        for t in &c.decomposition {
            let _ = writeln!(out, "      {} · ({})", t.coefficient, t.constraint);
        }
    }
    if let Some(w) = &pos.witness {
        let _ = writeln!(out, "  witness (a, b1, ...) = ({})", w.join(", "));
    }

    let _ = writeln!(out, "\nInvariants:");
    out.push_str(&invariant_table(&r.invariants.rows));
    let _ = writeln!(out, "  homeomorphism type: {}", r.invariants.homeo_type.as_deref().unwrap_or("undetermined (simple connectivity not asserted)"));

    let _ = writeln!(out, "\nSeiberg-Witten:");
    for rec in &r.seiberg_witten.records {
        let _ = writeln!(
            out,
            "  {}: dimension {}, chamber {:?}, SW+ - SW- = {}",
            rec.label,
            rec.dimension,
            rec.chamber,
            rec.wall_crossing_delta.map_or("-".to_string(), |d| d.to_string())
        );
    }
    let _ = writeln!(out, "  c1² ≥ 0: {}, b2- ≤ 9: {}", r.seiberg_witten.c1sq_nonnegative, r.seiberg_witten.b2minus_at_most_9);

    let _ = writeln!(out, "\nConclusions:");
    out.push_str(&conclusions(&r.conclusions));
    for n in &r.notes {
        let _ = writeln!(out, "\nNote: {n}");
    }
    out
}

pub fn einstein(r: &EinsteinReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Einstein obstruction on X_7 # CP̄²");
    out.push_str(&invariant_table(&[r.source.clone(), r.blown_up.clone()]));
    let _ = writeln!(
        out,
        "\n  K_7 model = {} (square {}, characteristic: {})",
        r.canonical_model.text, r.canonical_model.square, r.canonical_model_characteristic
    );
    let _ = writeln!(out, "  E = {}", r.exceptional.text);
    let _ = writeln!(out, "\nBasic classes after blow-up:");
    for b in &r.basic_classes {
        let _ = writeln!(
            out,
            "  {} = {}   (square {}, characteristic: {}, SW dimension {})",
            b.class.label, b.class.text, b.class.square, b.characteristic, b.sw_dimension
        );
    }
    let _ = writeln!(out, "  3σ + 2e = {}, so d = {}", r.three_sigma_plus_two_e, r.d);
    let k = &r.kotschick;
    let _ = writeln!(
        out,
        "\nBound: k ≤ (2e + 3σ - 8d)/2 = (2·{} + 3·({}) - 8·{})/2 = {}",
        k.euler, k.signature, k.d, k.bound
    );
    let _ = writeln!(
        out,
        "  {} ≤ {}: {}",
        k.split_off,
        k.bound,
        if k.contradiction { "false, contradiction" } else { "holds" }
    );
    let _ = writeln!(out, "\nConclusions:");
    out.push_str(&conclusions(&r.conclusions));
    for n in &r.notes {
        let _ = writeln!(out, "\nNote: {n}");
    }
    out
}
