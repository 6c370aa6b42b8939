//! JSON forms of Lie series, algebra elements and diagrams.

use std::fs;
use std::path::Path;

use ellipt_core::algebra::{AlgebraElement, IntersectionForm, TruncatedAlgebra};
use ellipt_core::diagrams::{self, Diagram, DiagramElement, DiagramParts, Label};
use ellipt_core::lie::{standard_bracketing, Alphabet, Bracket, Letter, LieSeries};
use ellipt_core::{Error, Rational};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, Result};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.into(), source })
}

/// Pretty JSON with a trailing newline.
pub fn to_text<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_text(value)).map_err(|source| CliError::Io { path: path.into(), source })
}

fn load_err(location: impl Into<String>, msg: impl Into<String>) -> CliError {
    CliError::Core(Error::load(location, msg))
}

fn parse_coeff(s: &str, at: &str) -> Result<Rational> {
    s.parse().map_err(|_| load_err(at, format!("bad coefficient {s:?}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LetterJson {
    pub name: String,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieTermJson {
    pub degree: usize,
    /// A letter name or a two-element array of subtrees.
    pub bracket: Value,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieSeriesJson {
    pub alphabet: Vec<LetterJson>,
    pub truncation: usize,
    pub terms: Vec<LieTermJson>,
}

fn bracket_to_value(b: &Bracket, ab: &Alphabet) -> Value {
    match b {
        Bracket::Letter(i) => Value::String(ab.name(*i).to_string()),
        Bracket::Pair(l, r) => Value::Array(vec![bracket_to_value(l, ab), bracket_to_value(r, ab)]),
    }
}

fn bracket_from_value(v: &Value, ab: &Alphabet, at: &str) -> Result<Bracket> {
    match v {
        Value::String(s) => {
            ab.index(s).map(Bracket::Letter).ok_or_else(|| load_err(at, format!("unknown letter {s:?}")))
        }
        Value::Array(xs) if xs.len() == 2 => {
            Ok(Bracket::pair(bracket_from_value(&xs[0], ab, at)?, bracket_from_value(&xs[1], ab, at)?))
        }
        _ => Err(load_err(at, "bracket must be a letter name or a pair")),
    }
}

pub fn lie_to_json(s: &LieSeries) -> LieSeriesJson {
    let ab = s.alphabet();
    LieSeriesJson {
        alphabet: ab.letters().iter().map(|l| LetterJson { name: l.name.clone(), degree: l.degree }).collect(),
        truncation: s.truncation(),
        terms: s
            .iter()
            .map(|(d, w, c)| LieTermJson {
                degree: d,
                bracket: bracket_to_value(&standard_bracketing(w), ab),
                coeff: c.to_fraction_string(),
            })
            .collect(),
    }
}

pub fn lie_from_json(j: &LieSeriesJson) -> Result<LieSeries> {
    let ab = Alphabet::new(j.alphabet.iter().map(|l| Letter { name: l.name.clone(), degree: l.degree }).collect())?;
    let mut terms = Vec::new();
    for (k, t) in j.terms.iter().enumerate() {
        let at = format!("terms[{k}]");
        let b = bracket_from_value(&t.bracket, &ab, &at)?;
        if ab.word_degree(&b.word()) != t.degree {
            return Err(load_err(at, "degree does not match the bracket"));
        }
        terms.push((b, parse_coeff(&t.coeff, &at)?));
    }
    Ok(LieSeries::from_brackets(&ab, j.truncation, terms)?)
}

pub fn read_lie(path: &Path) -> Result<LieSeries> {
    lie_from_json(&read_json(path)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordTermJson {
    pub word: Vec<String>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraElementJson {
    pub algebra: String,
    pub truncation: usize,
    pub terms: Vec<WordTermJson>,
}

/// `t1n(n)` (with `[x_i, y_j] = t_ij`), `dk(n)` or `free(a,b,...)`.
pub fn algebra_by_name(name: &str, truncation: usize) -> Result<TruncatedAlgebra> {
    let arg = |prefix: &str| name.strip_prefix(prefix).and_then(|r| r.strip_suffix(')'));
    let count = |s: &str| s.parse::<usize>().map_err(|_| load_err("algebra", format!("bad algebra {name:?}")));
    if let Some(n) = arg("t1n(") {
        Ok(TruncatedAlgebra::t1n_with_form(count(n)?, truncation, IntersectionForm::CENTRAL)?)
    } else if let Some(n) = arg("dk(") {
        Ok(TruncatedAlgebra::dk(count(n)?, truncation)?)
    } else if let Some(names) = arg("free(") {
        let names: Vec<&str> = names.split(',').map(str::trim).collect();
        Ok(TruncatedAlgebra::free(&Alphabet::uniform(&names)?, truncation))
    } else {
        Err(load_err("algebra", format!("unknown algebra {name:?}")))
    }
}

pub fn element_to_json(alg: &TruncatedAlgebra, e: &AlgebraElement) -> AlgebraElementJson {
    AlgebraElementJson {
        algebra: alg.name().to_string(),
        truncation: e.truncation(),
        terms: e
            .iter()
            .map(|(_, w, c)| WordTermJson {
                word: w.iter().map(|&g| alg.alphabet().name(g).to_string()).collect(),
                coeff: c.to_fraction_string(),
            })
            .collect(),
    }
}

/// Loads raw words and reduces them in the named algebra.
pub fn element_from_json(j: &AlgebraElementJson) -> Result<(TruncatedAlgebra, AlgebraElement)> {
    let alg = algebra_by_name(&j.algebra, j.truncation)?;
    let mut terms = Vec::new();
    for (k, t) in j.terms.iter().enumerate() {
        let at = format!("terms[{k}]");
        let w = t
            .word
            .iter()
            .map(|g| alg.generator_index(g).ok_or_else(|| load_err(&at, format!("unknown generator {g:?}"))))
            .collect::<Result<Vec<u8>>>()?;
        terms.push((w, parse_coeff(&t.coeff, &at)?));
    }
    let e = alg.from_terms(terms);
    Ok((alg, e))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrivalentJson {
    pub edges: [u32; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LegJson {
    pub label: String,
    pub order: usize,
    pub edge: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramJson {
    pub strands: usize,
    pub slots: Vec<Vec<u32>>,
    pub trivalent: Vec<TrivalentJson>,
    pub legs: Vec<LegJson>,
}

pub fn diagram_to_json(d: &Diagram) -> DiagramJson {
    let p = d.to_parts();
    DiagramJson {
        strands: d.strands(),
        slots: p.slots,
        trivalent: p.trivalent.into_iter().map(|edges| TrivalentJson { edges }).collect(),
        legs: p
            .legs
            .into_iter()
            .enumerate()
            .map(|(order, (l, edge))| LegJson { label: l.as_char().to_string(), order, edge })
            .collect(),
    }
}

/// Canonical form of a diagram; the sign is `-1` when the input orientation
/// is opposite to the canonical one, `None` when the diagram vanishes.
pub fn diagram_from_json(j: &DiagramJson) -> Result<Option<(i64, Diagram)>> {
    if j.slots.len() != j.strands {
        return Err(load_err("slots", "one slot list per strand expected"));
    }
    let mut legs: Vec<&LegJson> = j.legs.iter().collect();
    legs.sort_by_key(|l| l.order);
    if legs.iter().enumerate().any(|(k, l)| l.order != k) {
        return Err(load_err("legs", "orders must be 0..k without gaps"));
    }
    let legs = legs
        .into_iter()
        .map(|l| {
            let mut cs = l.label.chars();
            match (cs.next().and_then(Label::from_char), cs.next()) {
                (Some(lab), None) => Ok((lab, l.edge)),
                _ => Err(load_err("legs", format!("bad label {:?}", l.label))),
            }
        })
        .collect::<Result<_>>()?;
    let parts = DiagramParts { slots: j.slots.clone(), trivalent: j.trivalent.iter().map(|t| t.edges).collect(), legs };
    Ok(diagrams::canonicalize(&parts)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramTermJson {
    pub coeff: String,
    pub diagram: DiagramJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramElementJson {
    pub strands: usize,
    pub terms: Vec<DiagramTermJson>,
}

pub fn diagram_element_to_json(n: usize, e: &DiagramElement) -> DiagramElementJson {
    DiagramElementJson {
        strands: n,
        terms: e
            .iter()
            .map(|(d, c)| DiagramTermJson { coeff: c.to_fraction_string(), diagram: diagram_to_json(d) })
            .collect(),
    }
}

pub fn diagram_element_from_json(j: &DiagramElementJson) -> Result<DiagramElement> {
    let mut out = DiagramElement::new();
    for (k, t) in j.terms.iter().enumerate() {
        let at = format!("terms[{k}]");
        if t.diagram.strands != j.strands {
            return Err(load_err(at, "strand count mismatch"));
        }
        if let Some((sign, d)) = diagram_from_json(&t.diagram)? {
            let c = parse_coeff(&t.coeff, &at)? * Rational::from_int(sign);
            ellipt_core::linalg::add_term(&mut out, d, c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ellipt_core::associator::{solve, SolverConfig};

    #[test]
    fn lie_series_round_trip() {
        let phi = solve(&SolverConfig::default()).unwrap();
        let j = lie_to_json(phi.log_phi());
        let text = to_text(&j);
        let back: LieSeriesJson = serde_json::from_str(&text).unwrap();
        assert_eq!(&lie_from_json(&back).unwrap(), phi.log_phi());
        assert!(text.contains("\"1/24\""));
    }

    #[test]
    fn non_lyndon_brackets_are_rewritten() {
        let j: LieSeriesJson = serde_json::from_value(serde_json::json!({
            "alphabet": [{"name": "A", "degree": 1}, {"name": "B", "degree": 1}],
            "truncation": 3,
            "terms": [{"degree": 2, "bracket": ["B", "A"], "coeff": "2"}]
        }))
        .unwrap();
        let s = lie_from_json(&j).unwrap();
        assert_eq!(s.coeff(&[0, 1]), Rational::from_int(-2));
        let bad: LieSeriesJson = serde_json::from_value(serde_json::json!({
            "alphabet": [{"name": "A", "degree": 1}],
            "truncation": 3,
            "terms": [{"degree": 1, "bracket": "C", "coeff": "1"}]
        }))
        .unwrap();
        assert!(lie_from_json(&bad).is_err());
    }

    #[test]
    fn element_words_reduce_on_load() {
        let j = AlgebraElementJson {
            algebra: "t1n(2)".into(),
            truncation: 3,
            terms: vec![
                WordTermJson { word: vec!["y1".into(), "x1".into()], coeff: "1/1".into() },
                WordTermJson { word: vec!["x1".into(), "y1".into()], coeff: "-1".into() },
                WordTermJson { word: vec!["t21".into()], coeff: "-1".into() },
            ],
        };
        let (alg, e) = element_from_json(&j).unwrap();
        assert!(e.is_zero());
        let x = alg.generator("x1").unwrap();
        let j = element_to_json(&alg, &x);
        assert_eq!(element_from_json(&j).unwrap().1, x);
        assert!(algebra_by_name("t2n(2)", 2).is_err());
    }

    #[test]
    fn diagram_round_trip_and_orientation_sign() {
        let j: DiagramJson = serde_json::from_value(serde_json::json!({
            "strands": 2,
            "slots": [[0], []],
            "trivalent": [{"edges": [0, 2, 1]}],
            "legs": [{"label": "x", "order": 0, "edge": 1}, {"label": "y", "order": 1, "edge": 2}]
        }))
        .unwrap();
        let (sign, d) = diagram_from_json(&j).unwrap().unwrap();
        let (sign2, d2) = diagram_from_json(&diagram_to_json(&d)).unwrap().unwrap();
        assert_eq!((sign2, &d2), (1, &d));
        let mut flipped = j.clone();
        flipped.trivalent[0].edges = [0, 1, 2];
        assert_eq!(diagram_from_json(&flipped).unwrap().unwrap(), (-sign, d));
        let mut bad = j;
        bad.legs[0].order = 3;
        assert!(diagram_from_json(&bad).is_err());
    }
}
