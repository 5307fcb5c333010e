//! JSON interchange formats.
//!
//! - posets: [`PosetJson`](crate::poset::PosetJson);
//! - flag vectors: `{"<mask>": count}` with masks ascending;
//! - polynomials: `{"<word>": coefficient}` with words in lexicographic order;
//! - triple assignments: `{"poset": …, "values": [{"x", "y", "z", "letter"}]}`;
//! - labelings: `{"poset": …, "labels": [{"x", "y", "label"}], "relation": [[l, l]]}`.
//!
//! Integers that fit in an `i64` are emitted as JSON numbers, larger ones as
//! decimal strings.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::flag::FlagVector;
use crate::labeling::{Labeling, Letter, TripleAssignment};
use crate::poly::{Alphabet, NcPoly};
use crate::poset::{GradedPoset, PosetError, PosetJson};
use crate::search::{SearchMode, SearchOutcome, SearchStatus};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("reading {path}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Invalid(String),
}

pub fn bigint_value(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(small) => Value::from(small),
        Err(_) => Value::from(v.to_string()),
    }
}

/// Pretty-printed poset JSON with a trailing newline.
pub fn poset_to_string(poset: &GradedPoset) -> String {
    let mut s = serde_json::to_string_pretty(&poset.to_json()).expect("poset serializes");
    s.push('\n');
    s
}

pub fn poset_from_str(s: &str) -> Result<GradedPoset, FormatError> {
    let json: PosetJson = serde_json::from_str(s)?;
    Ok(GradedPoset::from_json(&json)?)
}

pub fn read_poset(path: &Path) -> Result<GradedPoset, FormatError> {
    poset_from_str(&read(path)?)
}

fn read(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn flag_vector_value(v: &FlagVector) -> Value {
    let map: Map<String, Value> = v
        .iter()
        .map(|(mask, x)| (mask.to_string(), bigint_value(x)))
        .collect();
    Value::Object(map)
}

pub fn polynomial_value<A: Alphabet>(p: &NcPoly<A>) -> Value {
    let map: Map<String, Value> = p
        .terms()
        .map(|(w, c)| (w.render::<A>(), bigint_value(c)))
        .collect();
    Value::Object(map)
}

/// A poset given inline or as a path to a poset file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PosetRef {
    Inline(PosetJson),
    Path(String),
}

impl PosetRef {
    /// Relative paths resolve against `base`.
    pub fn load(&self, base: Option<&Path>) -> Result<GradedPoset, FormatError> {
        match self {
            PosetRef::Inline(json) => Ok(GradedPoset::from_json(json)?),
            PosetRef::Path(p) => {
                let path = Path::new(p);
                match base {
                    Some(dir) if path.is_relative() => read_poset(&dir.join(path)),
                    _ => read_poset(path),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TripletValue {
    pub x: String,
    pub y: String,
    pub z: String,
    pub letter: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssignmentJson {
    pub poset: PosetRef,
    pub values: Vec<TripletValue>,
}

pub fn assignment_values(poset: &GradedPoset, tau: &TripleAssignment) -> Vec<TripletValue> {
    poset
        .triplets()
        .iter()
        .zip(tau.values())
        .map(|(t, l)| TripletValue {
            x: poset.id(t.x).into(),
            y: poset.id(t.y).into(),
            z: poset.id(t.z).into(),
            letter: l.to_string(),
        })
        .collect()
}

pub fn assignment_to_json(poset: &GradedPoset, tau: &TripleAssignment) -> AssignmentJson {
    AssignmentJson {
        poset: PosetRef::Inline(poset.to_json()),
        values: assignment_values(poset, tau),
    }
}

/// Resolves named triplets against `poset`; every triplet must get exactly
/// one letter.
pub fn assignment_from_values(
    poset: &GradedPoset,
    values: &[TripletValue],
) -> Result<TripleAssignment, FormatError> {
    let mut letters: Vec<Option<Letter>> = vec![None; poset.triplets().len()];
    for v in values {
        let (x, y, z) = (
            poset.element(&v.x)?,
            poset.element(&v.y)?,
            poset.element(&v.z)?,
        );
        let i = poset.triplet_index(x, y, z).ok_or_else(|| {
            FormatError::Invalid(format!(
                "({}, {}, {}) is not a cover triplet",
                v.x, v.y, v.z
            ))
        })?;
        let mut chars = v.letter.chars();
        let letter = match (chars.next().and_then(Letter::from_char), chars.next()) {
            (Some(l), None) => l,
            _ => return Err(FormatError::Invalid(format!("bad letter `{}`", v.letter))),
        };
        if letters[i].replace(letter).is_some() {
            return Err(FormatError::Invalid(format!(
                "triplet ({}, {}, {}) assigned twice",
                v.x, v.y, v.z
            )));
        }
    }
    let values = letters
        .into_iter()
        .enumerate()
        .map(|(i, l)| {
            l.ok_or_else(|| {
                let t = poset.triplets()[i];
                FormatError::Invalid(format!(
                    "triplet ({}, {}, {}) has no letter",
                    poset.id(t.x),
                    poset.id(t.y),
                    poset.id(t.z)
                ))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TripleAssignment::new(poset, values))
}

/// Reads an assignment file, loading its poset inline or relative to the file.
pub fn read_assignment(path: &Path) -> Result<(GradedPoset, TripleAssignment), FormatError> {
    let json: AssignmentJson = serde_json::from_str(&read(path)?)?;
    let poset = json.poset.load(path.parent())?;
    let tau = assignment_from_values(&poset, &json.values)?;
    Ok((poset, tau))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabelValue {
    pub x: String,
    pub y: String,
    pub label: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabelingJson {
    pub poset: PosetRef,
    pub labels: Vec<LabelValue>,
    pub relation: Vec<[String; 2]>,
}

pub fn labeling_to_json(poset: &GradedPoset, labeling: &Labeling) -> LabelingJson {
    LabelingJson {
        poset: PosetRef::Inline(poset.to_json()),
        labels: labeling
            .labels
            .iter()
            .map(|(&(x, y), l)| LabelValue {
                x: poset.id(x).into(),
                y: poset.id(y).into(),
                label: l.clone(),
            })
            .collect(),
        relation: labeling
            .relation
            .iter()
            .map(|(l, m)| [l.clone(), m.clone()])
            .collect(),
    }
}

pub fn labeling_from_json(
    poset: &GradedPoset,
    json: &LabelingJson,
) -> Result<Labeling, FormatError> {
    let mut labels = BTreeMap::new();
    for v in &json.labels {
        let (x, y) = (poset.element(&v.x)?, poset.element(&v.y)?);
        if !poset.is_cover(x, y) {
            return Err(FormatError::Invalid(format!(
                "({}, {}) is not a cover",
                v.x, v.y
            )));
        }
        labels.insert((x, y), v.label.clone());
    }
    let relation: BTreeSet<(String, String)> = json
        .relation
        .iter()
        .map(|[l, m]| (l.clone(), m.clone()))
        .collect();
    Ok(Labeling { labels, relation })
}

pub fn mode_name(mode: SearchMode) -> &'static str {
    match mode {
        SearchMode::First => "first",
        SearchMode::CountAll => "count",
        SearchMode::EnumerateAll => "all",
    }
}

pub fn status_name(status: SearchStatus) -> &'static str {
    match status {
        SearchStatus::Found => "found",
        SearchStatus::ProvenNone => "proven_none",
    }
}

/// Search result summary; `elapsed_ms` is left out unless `with_timing`, so
/// repeated runs print identical output.
pub fn outcome_value(
    poset: &GradedPoset,
    mode: SearchMode,
    outcome: &SearchOutcome,
    with_timing: bool,
) -> Value {
    let mut map = Map::new();
    map.insert("status".into(), status_name(outcome.status).into());
    map.insert("mode".into(), mode_name(mode).into());
    if let Some(c) = outcome.count {
        map.insert("count".into(), c.into());
    }
    map.insert(
        "witness".into(),
        match &outcome.witness {
            Some(tau) => serde_json::to_value(assignment_values(poset, tau)).expect("serializes"),
            None => Value::Null,
        },
    );
    if mode == SearchMode::EnumerateAll {
        let all: Vec<Value> = outcome
            .solutions
            .iter()
            .map(|tau| {
                let word: String = tau.values().iter().map(|l| l.as_char()).collect();
                Value::from(word)
            })
            .collect();
        map.insert("solutions".into(), Value::Array(all));
    }
    let mut stats = Map::new();
    stats.insert("nodes".into(), outcome.stats.nodes.into());
    stats.insert("propagations".into(), outcome.stats.propagations.into());
    if with_timing {
        stats.insert(
            "elapsed_ms".into(),
            (outcome.stats.elapsed.as_secs_f64() * 1e3).into(),
        );
    }
    map.insert("stats".into(), Value::Object(stats));
    Value::Object(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::{flag_f_vector, flag_h_vector};
    use crate::labeling::assignment_to_labeling;
    use crate::poset::{butterfly, glued_butterflies};

    #[test]
    fn poset_text_round_trip() {
        let p = glued_butterflies(3).unwrap();
        let text = poset_to_string(&p);
        let back = poset_from_str(&text).unwrap();
        assert_eq!(poset_to_string(&back), text);
    }

    #[test]
    fn poset_json_shape() {
        let text = poset_to_string(&butterfly(2).unwrap());
        let v: Value = serde_json::from_str(&text).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["rank", "elements", "covers"]);
        assert_eq!(
            v["elements"][0],
            serde_json::json!({"id": "bot", "rank": 0})
        );
        assert_eq!(v["covers"][0], serde_json::json!(["bot", "x1"]));
    }

    #[test]
    fn flag_keys_ascend_numerically() {
        let h = flag_h_vector(&flag_f_vector(&butterfly(6).unwrap()));
        let v = flag_vector_value(&h);
        let keys: Vec<u32> = v
            .as_object()
            .unwrap()
            .keys()
            .map(|k| k.parse().unwrap())
            .collect();
        assert_eq!(keys, (0..32).collect::<Vec<_>>());
    }

    #[test]
    fn big_coefficients_become_strings() {
        assert_eq!(bigint_value(&BigInt::from(7)), Value::from(7));
        let big = BigInt::from(u64::MAX) * 4;
        assert_eq!(bigint_value(&big), Value::from(big.to_string()));
    }

    #[test]
    fn assignment_round_trip_and_errors() {
        let t2 = butterfly(2).unwrap();
        let tau = TripleAssignment::new(&t2, vec![Letter::A, Letter::B]);
        let json = assignment_to_json(&t2, &tau);
        let text = serde_json::to_string(&json).unwrap();
        let parsed: AssignmentJson = serde_json::from_str(&text).unwrap();
        let poset = parsed.poset.load(None).unwrap();
        assert_eq!(assignment_from_values(&poset, &parsed.values).unwrap(), tau);

        let mut missing = parsed.values.clone();
        missing.pop();
        assert!(assignment_from_values(&poset, &missing).is_err());
        let mut twice = parsed.values.clone();
        twice.push(twice[0].clone());
        assert!(assignment_from_values(&poset, &twice).is_err());
    }

    #[test]
    fn labeling_round_trip() {
        let t2 = butterfly(2).unwrap();
        let tau = TripleAssignment::new(&t2, vec![Letter::B, Letter::A]);
        let lab = assignment_to_labeling(&t2, &tau);
        let json = labeling_to_json(&t2, &lab);
        assert_eq!(labeling_from_json(&t2, &json).unwrap(), lab);
    }
}
