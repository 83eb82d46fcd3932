//! Flat text scenario files.
//!
//! ```text
//! # comment
//! name = C7-main
//! n = 13
//! p = 7
//! class u1 = [0, 0,0,0,1,0,0,-1,0,0,0,0,0,0]
//! ...
//! canonical = [-3, 1,1,1,1,1,1,1,1,1,1,1,1,1]
//! cone = standard
//! assume simply_connected = true "Van-Kampen, disk from S_6 hemisphere"
//! ```
//!
//! Vectors are ordered `(h, e₁, …, eₙ)`. `config = C7-main` (or `C5-main`)
//! loads a built-in configuration; only `assume` lines may accompany it.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{Ambient, HomologyClass};
use crate::plumbing::make_e6_tilde;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Builtin {
    C7Main,
    C5Main,
}

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::C7Main => "C7-main",
            Builtin::C5Main => "C5-main",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "C7-main" => Some(Builtin::C7Main),
            "C5-main" => Some(Builtin::C5Main),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assumption {
    pub key: String,
    pub value: bool,
    pub justification: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub n: usize,
    pub p: usize,
    /// `u₁, …, u_{p−1}` in order.
    pub classes: Vec<HomologyClass>,
    pub canonical: HomologyClass,
    pub assumptions: Vec<Assumption>,
}

impl Scenario {
    pub fn builtin(which: Builtin) -> Self {
        let e6 = make_e6_tilde();
        let (n, p, section, keep) = match which {
            Builtin::C7Main => (13, 7, 9, 5),
            Builtin::C5Main => (12, 5, 2, 3),
        };
        let a = Ambient::new(n);
        let fiber = a.fiber().expect("n >= 9");
        let multiple = (n - 9) as i64;
        // k(f − 2e_j) summed over the blown-up double points, resolved with
        // the section e_section.
        let sphere = (10..=n).fold(&(multiple * &fiber) + &a.e(section), |acc, j| &acc - &(2 * &a.e(j)));
        let mut classes = e6.classes_in(a).expect("n >= 9")[..keep].to_vec();
        classes.push(sphere);
        let lens = format!("L({}, {})", p * p, 1 - p as i64);
        Self {
            name: which.name().to_string(),
            n,
            p,
            classes,
            canonical: a.canonical(),
            assumptions: vec![Assumption {
                key: "simply_connected".into(),
                value: true,
                justification: format!(
                    "Van-Kampen: a generator of pi_1({lens}) bounds a disk (hemisphere of S_6 in the E6~ fiber), so the complement is simply connected"
                ),
            }],
        }
    }

    pub fn assumed(&self, key: &str) -> Option<&Assumption> {
        self.assumptions.iter().find(|a| a.key == key)
    }

    pub fn assumes_simply_connected(&self) -> bool {
        self.assumed("simply_connected").is_some_and(|a| a.value)
    }

    /// Writes the scenario in the file format accepted by [`Scenario::parse`].
    pub fn to_file_string(&self) -> String {
        let vec = |c: &HomologyClass| {
            let parts: Vec<String> = c.coeffs().iter().map(i64::to_string).collect();
            format!("[{}]", parts.join(", "))
        };
        let mut out = String::new();
        let _ = writeln!(out, "name = {}", self.name);
        let _ = writeln!(out, "n = {}", self.n);
        let _ = writeln!(out, "p = {}", self.p);
        for (i, c) in self.classes.iter().enumerate() {
            let _ = writeln!(out, "class u{} = {}", i + 1, vec(c));
        }
        let _ = writeln!(out, "canonical = {}", vec(&self.canonical));
        let _ = writeln!(out, "cone = standard");
        for a in &self.assumptions {
            let _ = writeln!(out, "assume {} = {} \"{}\"", a.key, a.value, a.justification);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut name = None;
        let mut builtin: Option<(usize, Builtin)> = None;
        let mut n: Option<(usize, usize)> = None;
        let mut p: Option<(usize, usize)> = None;
        let mut raw_classes: Vec<(usize, usize, Vec<i64>)> = Vec::new();
        let mut canonical: Option<(usize, Vec<i64>)> = None;
        let mut assumptions = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("assume ") {
                assumptions.push(parse_assumption(line_no, rest)?);
                continue;
            }
            let Some((lhs, rhs)) = line.split_once('=') else {
                return err(line_no, format!("expected `key = value`, got `{line}`"));
            };
            let (lhs, rhs) = (lhs.trim(), rhs.trim());
            match lhs {
                "name" => name = Some(rhs.to_string()),
                "config" => match Builtin::from_name(rhs) {
                    Some(b) => builtin = Some((line_no, b)),
                    None => {
                        return err(line_no, format!("unknown built-in configuration `{rhs}` (expected C7-main or C5-main)"))
                    }
                },
                "n" => n = Some((line_no, parse_usize(line_no, "n", rhs)?)),
                "p" => p = Some((line_no, parse_usize(line_no, "p", rhs)?)),
                "canonical" => canonical = Some((line_no, parse_vector(line_no, rhs)?)),
                "cone" => {
                    if rhs != "standard" {
                        return err(line_no, format!("unsupported cone `{rhs}` (only `standard`)"));
                    }
                }
                _ => {
                    let Some(label) = lhs.strip_prefix("class ") else {
                        return err(line_no, format!("unknown key `{lhs}`"));
                    };
                    let label = label.trim();
                    let index = label
                        .strip_prefix('u')
                        .and_then(|s| s.parse::<usize>().ok())
                        .filter(|&i| i >= 1);
                    let Some(index) = index else {
                        return err(line_no, format!("class label `{label}` must be u1, u2, ..."));
                    };
                    raw_classes.push((line_no, index, parse_vector(line_no, rhs)?));
                }
            }
        }

        if let Some((line, b)) = builtin {
            if n.is_some() || p.is_some() || canonical.is_some() || !raw_classes.is_empty() {
                return err(line, "`config` cannot be combined with n, p, class or canonical lines");
            }
            let mut s = Self::builtin(b);
            if let Some(nm) = name {
                s.name = nm;
            }
            if !assumptions.is_empty() {
                s.assumptions = assumptions;
            }
            return Ok(s);
        }

        let end = text.lines().count().max(1);
        let Some((n_line, n)) = n else { return err(end, "missing `n = ...`") };
        let Some((p_line, p)) = p else { return err(end, "missing `p = ...`") };
        if p < 2 {
            return err(p_line, format!("p must be at least 2, got {p}"));
        }
        let ambient = Ambient::new(n);
        let to_class = |line: usize, field: &str, v: Vec<i64>| {
            ambient.class(v).or_else(|e| err(line, format!("{field}: {e} (n = {n} from line {n_line})")))
        };

        raw_classes.sort_by_key(|(_, i, _)| *i);
        for (k, (line, i, _)) in raw_classes.iter().enumerate() {
            if *i != k + 1 {
                return err(*line, format!("class u{i} out of sequence; expected u{}", k + 1));
            }
        }
        if raw_classes.len() != p - 1 {
            return err(end, format!("p = {p} needs {} classes u1..u{}, found {}", p - 1, p - 1, raw_classes.len()));
        }
        let classes = raw_classes
            .into_iter()
            .map(|(line, i, v)| to_class(line, &format!("class u{i}"), v))
            .collect::<Result<Vec<_>, _>>()?;
        let canonical = match canonical {
            Some((line, v)) => to_class(line, "canonical", v)?,
            None => return err(end, "missing `canonical = [...]`"),
        };

        Ok(Self {
            name: name.unwrap_or_else(|| "custom".into()),
            n,
            p,
            classes,
            canonical,
            assumptions,
        })
    }
}

fn parse_usize(line: usize, field: &str, s: &str) -> Result<usize, ParseError> {
    s.parse().or_else(|_| err(line, format!("{field}: `{s}` is not a non-negative integer")))
}

fn parse_vector(line: usize, s: &str) -> Result<Vec<i64>, ParseError> {
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .map_or_else(|| err(line, format!("expected `[...]`, got `{s}`")), Ok)?;
    if inner.trim().is_empty() {
        return err(line, "empty vector");
    }
    inner
        .split(',')
        .map(|t| {
            let t = t.trim().replace('\u{2212}', "-");
            t.parse::<i64>().or_else(|_| err(line, format!("`{t}` is not an integer")))
        })
        .collect()
}

fn parse_assumption(line: usize, rest: &str) -> Result<Assumption, ParseError> {
    let Some((key, tail)) = rest.split_once('=') else {
        return err(line, "expected `assume key = true|false \"justification\"`");
    };
    let tail = tail.trim();
    let (value, just) = match tail.split_once(char::is_whitespace) {
        Some((v, j)) => (v, j.trim()),
        None => (tail, ""),
    };
    let value = match value {
        "true" => true,
        "false" => false,
        other => return err(line, format!("assumption value must be true or false, got `{other}`")),
    };
    let justification = if just.is_empty() {
        String::new()
    } else if just.len() >= 2 && just.starts_with('"') && just.ends_with('"') {
        just[1..just.len() - 1].to_string()
    } else {
        return err(line, "justification must be a double-quoted string");
    };
    Ok(Assumption { key: key.trim().to_string(), value, justification })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_round_trips_through_the_file_format() {
        for b in [Builtin::C7Main, Builtin::C5Main] {
            let s = Scenario::builtin(b);
            assert_eq!(Scenario::parse(&s.to_file_string()).unwrap(), s);
        }
    }

    #[test]
    fn builtin_spheres() {
        let s7 = Scenario::builtin(Builtin::C7Main);
        assert_eq!(s7.classes.len(), 6);
        assert_eq!(s7.classes[5].square(), -9);
        let s5 = Scenario::builtin(Builtin::C5Main);
        assert_eq!(s5.classes[3].square(), -7);
        assert_eq!(s5.classes[3].coeffs(), &[9, -3, -2, -3, -3, -3, -3, -3, -3, -3, -2, -2, -2]);
    }

    #[test]
    fn config_line() {
        let s = Scenario::parse("config = C7-main\n").unwrap();
        assert_eq!(s, Scenario::builtin(Builtin::C7Main));
        let s = Scenario::parse("config = C5-main\nassume simply_connected = false \"unchecked\"\n").unwrap();
        assert!(!s.assumes_simply_connected());
        let e = Scenario::parse("config = C7-main\nn = 13\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(Scenario::parse("config = C9-main").is_err());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "n = 2\np = 2\nclass u1 = [0, 1, x]\ncanonical = [-3, 1, 1]\n";
        let e = Scenario::parse(text).unwrap_err();
        assert_eq!(e.line, 3);

        let text = "n = 2\np = 2\nclass u1 = [0, 1]\ncanonical = [-3, 1, 1]\n";
        let e = Scenario::parse(text).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("length"));

        let text = "n = 2\np = 3\nclass u1 = [0, 1, -1]\ncanonical = [-3, 1, 1]\n";
        assert!(Scenario::parse(text).unwrap_err().message.contains("needs 2 classes"));

        assert_eq!(Scenario::parse("n = 2\nbogus\n").unwrap_err().line, 2);
        assert_eq!(Scenario::parse("n = 2\nfoo = 1\n").unwrap_err().line, 2);
        assert!(Scenario::parse("assume sc = maybe").is_err());
        assert!(Scenario::parse("assume sc = true unquoted").is_err());
    }

    #[test]
    fn unicode_minus_and_comments() {
        let text = "# p = 2 toy\nn = 2\np = 2\nclass u1 = [0, 1, \u{2212}1]\ncanonical = [\u{2212}3, 1, 1]\nassume simply_connected = true \"toy\"\n";
        let s = Scenario::parse(text).unwrap();
        assert_eq!(s.classes[0].coeffs(), &[0, 1, -1]);
        assert_eq!(s.name, "custom");
        assert!(s.assumes_simply_connected());
    }
}
