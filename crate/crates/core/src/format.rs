//! JSON encodings of automata, matrices, series and level-set DFAs.
//!
//! Scalars are JSON numbers (digits of any length) except ∞, written `"inf"`.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde_json::{json, Map, Number, Value};
use thiserror::Error;

use crate::analysis::{Decomposition, LevelSetDfa};
use crate::automata::WeightedAutomaton;
use crate::matrix::KMatrix;
use crate::semiring::{SemiringId, SemiringValue};
use crate::series::{Alphabet, TruncatedSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("schema violation: {0}")]
    Schema(String),
}

fn schema<T>(msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Schema(msg.into()))
}

pub fn value_to_json(v: &SemiringValue) -> Value {
    let text = v.to_string();
    match text.parse::<Number>() {
        Ok(n) => Value::Number(n),
        Err(_) => Value::String(text),
    }
}

pub fn value_from_json(id: SemiringId, v: &Value) -> Result<SemiringValue, FormatError> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) if s == "inf" => s.clone(),
        Value::Bool(b) if id == SemiringId::Boolean => return Ok(SemiringValue::boolean(*b)),
        other => return schema(format!("expected a scalar, got {other}")),
    };
    id.parse_value(&text).map_err(|e| FormatError::Schema(e.to_string()))
}

pub fn matrix_to_json(m: &KMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(value_to_json).collect())).collect())
}

pub fn matrix_from_json(id: SemiringId, v: &Value, rows: usize, cols: usize) -> Result<KMatrix, FormatError> {
    let Value::Array(rs) = v else {
        return schema("matrix must be a list of rows");
    };
    if rs.len() != rows {
        return schema(format!("matrix has {} rows, expected {rows}", rs.len()));
    }
    let mut out = Vec::with_capacity(rows);
    for r in rs {
        out.push(vector_from_json(id, r, cols)?);
    }
    KMatrix::from_rows(id, out).map_err(|e| FormatError::Schema(e.to_string()))
}

/// A matrix whose dimensions are read from the JSON itself.
pub fn matrix_from_json_any(id: SemiringId, v: &Value) -> Result<KMatrix, FormatError> {
    let Value::Array(rs) = v else {
        return schema("matrix must be a list of rows");
    };
    let cols = match rs.first() {
        Some(Value::Array(r)) => r.len(),
        _ => return schema("matrix must have at least one row"),
    };
    matrix_from_json(id, v, rs.len(), cols)
}

fn vector_from_json(id: SemiringId, v: &Value, len: usize) -> Result<Vec<SemiringValue>, FormatError> {
    let Value::Array(xs) = v else {
        return schema("expected a list of scalars");
    };
    if xs.len() != len {
        return schema(format!("list has {} entries, expected {len}", xs.len()));
    }
    xs.iter().map(|x| value_from_json(id, x)).collect()
}

fn field<'v>(obj: &'v Map<String, Value>, key: &str) -> Result<&'v Value, FormatError> {
    obj.get(key).ok_or_else(|| FormatError::Schema(format!("missing field `{key}`")))
}

fn object(v: &Value) -> Result<&Map<String, Value>, FormatError> {
    v.as_object().ok_or_else(|| FormatError::Schema("expected a JSON object".into()))
}

fn header(obj: &Map<String, Value>) -> Result<(SemiringId, Arc<Alphabet>), FormatError> {
    let id: SemiringId = field(obj, "semiring")?
        .as_str()
        .ok_or_else(|| FormatError::Schema("`semiring` must be a string".into()))?
        .parse()
        .map_err(|e: crate::semiring::SemiringError| FormatError::Schema(e.to_string()))?;
    let letters: Vec<String> = match field(obj, "alphabet")? {
        Value::Array(xs) => xs
            .iter()
            .map(|x| x.as_str().map(str::to_owned).ok_or_else(|| FormatError::Schema("letters must be strings".into())))
            .collect::<Result<_, _>>()?,
        _ => return schema("`alphabet` must be a list of letters"),
    };
    let alphabet = Alphabet::new(&letters).map_err(|e| FormatError::Schema(e.to_string()))?;
    Ok((id, Arc::new(alphabet)))
}

fn usize_field(obj: &Map<String, Value>, key: &str) -> Result<usize, FormatError> {
    field(obj, key)?
        .as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| FormatError::Schema(format!("`{key}` must be a nonnegative integer")))
}

pub fn automaton_to_json(a: &WeightedAutomaton) -> Value {
    let mut m = Map::new();
    for (l, t) in a.transitions().iter().enumerate() {
        m.insert(a.alphabet().letter(l).to_owned(), matrix_to_json(t));
    }
    json!({
        "semiring": a.instance().to_string(),
        "alphabet": a.alphabet().letters(),
        "dim": a.dim(),
        "alpha": a.alpha().entries().iter().map(value_to_json).collect::<Vec<_>>(),
        "beta": a.beta().entries().iter().map(value_to_json).collect::<Vec<_>>(),
        "M": m,
    })
}

pub fn automaton_from_json(v: &Value) -> Result<WeightedAutomaton, FormatError> {
    let obj = object(v)?;
    let (id, alphabet) = header(obj)?;
    let n = usize_field(obj, "dim")?;
    let alpha = vector_from_json(id, field(obj, "alpha")?, n)?;
    let beta = vector_from_json(id, field(obj, "beta")?, n)?;
    let Value::Object(ms) = field(obj, "M")? else {
        return schema("`M` must map letters to matrices");
    };
    if let Some(extra) = ms.keys().find(|k| alphabet.index_of(k).is_none()) {
        return schema(format!("`M` has a matrix for unknown letter `{extra}`"));
    }
    let mut transitions = Vec::with_capacity(alphabet.len());
    for letter in alphabet.letters() {
        match ms.get(letter) {
            Some(m) => transitions.push(matrix_from_json(id, m, n, n)?),
            None => return schema(format!("`M` has no matrix for letter `{letter}`")),
        }
    }
    let alpha = KMatrix::from_rows(id, vec![alpha]).map_err(|e| FormatError::Schema(e.to_string()))?;
    let beta = KMatrix::from_rows(id, vec![beta]).map_err(|e| FormatError::Schema(e.to_string()))?.transpose();
    WeightedAutomaton::new(alphabet, alpha, transitions, beta).map_err(|e| FormatError::Schema(e.to_string()))
}

pub fn parse_automaton(text: &str) -> Result<WeightedAutomaton, FormatError> {
    let v: Value = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    automaton_from_json(&v)
}

pub fn parse_json(text: &str) -> Result<Value, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))
}

/// Coefficients keyed by rendered word, in length-lex order.
pub fn series_to_json(s: &TruncatedSeries) -> Value {
    let mut coeffs = Map::new();
    for (w, v) in s.iter() {
        coeffs.insert(s.alphabet().render(&w), value_to_json(v));
    }
    json!({
        "semiring": s.instance().to_string(),
        "alphabet": s.alphabet().letters(),
        "bound": s.bound(),
        "coefficients": coeffs,
    })
}

pub fn dfa_to_json(d: &LevelSetDfa) -> Value {
    let transitions: Vec<Value> = d
        .transitions
        .iter()
        .map(|row| {
            let mut m = Map::new();
            for (l, &t) in row.iter().enumerate() {
                m.insert(d.alphabet.letter(l).to_owned(), json!(t));
            }
            Value::Object(m)
        })
        .collect();
    json!({
        "semiring": d.instance.to_string(),
        "alphabet": d.alphabet.letters(),
        "initial": 0,
        "states": d.states.iter().map(|v| Value::Array(v.entries().iter().map(value_to_json).collect())).collect::<Vec<_>>(),
        "transitions": transitions,
        "outputs": d.outputs.iter().map(value_to_json).collect::<Vec<_>>(),
    })
}

pub fn dfa_from_json(v: &Value) -> Result<LevelSetDfa, FormatError> {
    let obj = object(v)?;
    let (id, alphabet) = header(obj)?;
    if usize_field(obj, "initial")? != 0 {
        return schema("`initial` must be 0");
    }
    let Value::Array(raw_states) = field(obj, "states")? else {
        return schema("`states` must be a list of vectors");
    };
    let width = match raw_states.first() {
        Some(Value::Array(xs)) => xs.len(),
        _ => return schema("`states` must be a nonempty list of vectors"),
    };
    let states = raw_states
        .iter()
        .map(|s| {
            let row = vector_from_json(id, s, width)?;
            KMatrix::from_rows(id, vec![row]).map_err(|e| FormatError::Schema(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let Value::Array(raw_trans) = field(obj, "transitions")? else {
        return schema("`transitions` must be a list");
    };
    let mut transitions = Vec::with_capacity(raw_trans.len());
    for t in raw_trans {
        let t = object(t)?;
        let row = alphabet.letters().iter().map(|l| usize_field(t, l)).collect::<Result<Vec<_>, _>>()?;
        transitions.push(row);
    }
    let outputs = vector_from_json(id, field(obj, "outputs")?, states.len())?;
    LevelSetDfa::new(id, alphabet, states, transitions, outputs).map_err(|e| FormatError::Schema(e.to_string()))
}

pub fn decomposition_to_json(d: &Decomposition) -> Value {
    let dfa = d.classes.first().or(d.zero_class.as_ref()).map(|c| dfa_to_json(&c.dfa));
    let class = |c: &crate::analysis::LevelSet| json!({ "value": value_to_json(&c.value), "accepting": c.accepting.iter().collect::<Vec<_>>() });
    json!({
        "semiring": d.instance.to_string(),
        "alphabet": d.alphabet.letters(),
        "dfa": dfa,
        "classes": d.classes.iter().map(class).collect::<Vec<_>>(),
        "zero_class": d.zero_class.as_ref().map(class),
    })
}

pub fn accepting_from_json(v: &Value) -> Result<BTreeSet<usize>, FormatError> {
    let Value::Array(xs) = v else {
        return schema("`accepting` must be a list of state indices");
    };
    xs.iter().map(|x| x.as_u64().map(|n| n as usize).ok_or_else(|| FormatError::Schema("state index".into()))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::image_finite_analysis;
    use crate::automata::{compile, tests::ab_star_automaton};
    use crate::semiring::ExtNat;
    use crate::syntax::parse_expr;

    #[test]
    fn automaton_round_trip() {
        let ab = Arc::new(Alphabet::new(&["a", "b"]).unwrap());
        for id in [SemiringId::Boolean, SemiringId::NatInf, SemiringId::TropicalNatInf, SemiringId::Chain(4)] {
            let k = if id == SemiringId::Boolean { "1" } else { "3" };
            let e = parse_expr(&format!("({k}@a + b.a)*.b"), id, &ab).unwrap();
            let a = compile(&e, id, ab.clone()).unwrap();
            let text = automaton_to_json(&a).to_string();
            assert_eq!(parse_automaton(&text).unwrap(), a, "{text}");
        }
    }

    #[test]
    fn big_integers_survive() {
        let digits = "123456789012345678901234567890";
        let v = SemiringValue::ext(SemiringId::NatInf, digits.parse::<ExtNat>().unwrap()).unwrap();
        let j = value_to_json(&v);
        assert_eq!(j.to_string(), digits);
        assert_eq!(value_from_json(SemiringId::NatInf, &j).unwrap(), v);
        let inf = SemiringValue::ext(SemiringId::NatInf, ExtNat::Inf).unwrap();
        assert_eq!(value_to_json(&inf), json!("inf"));
    }

    #[test]
    fn schema_violations() {
        let good = automaton_to_json(&ab_star_automaton());
        let mut cases = Vec::new();
        let mut v = good.clone();
        v.as_object_mut().unwrap().remove("M");
        cases.push(v);
        let mut v = good.clone();
        v["dim"] = json!(3);
        cases.push(v);
        let mut v = good.clone();
        v["alpha"] = json!([2, 0]);
        cases.push(v);
        let mut v = good.clone();
        v["semiring"] = json!("reals");
        cases.push(v);
        let mut v = good.clone();
        v["M"]["c"] = json!([[0, 0], [0, 0]]);
        cases.push(v);
        let mut v = good.clone();
        v["beta"] = json!(["x", 0]);
        cases.push(v);
        for c in cases {
            assert!(matches!(automaton_from_json(&c), Err(FormatError::Schema(_))), "{c}");
        }
        assert!(matches!(parse_automaton("{"), Err(FormatError::Json(_))));
    }

    #[test]
    fn dfa_round_trip() {
        let d = image_finite_analysis(&ab_star_automaton()).unwrap();
        let v = dfa_to_json(&d);
        assert_eq!(v["states"].as_array().unwrap().len(), 3);
        assert_eq!(dfa_from_json(&v).unwrap(), d);
        assert_eq!(dfa_from_json(&parse_json(&v.to_string()).unwrap()).unwrap(), d);
    }

    #[test]
    fn series_json_keys_are_words() {
        let ab = Arc::new(Alphabet::new(&["a", "b"]).unwrap());
        let s = TruncatedSeries::char_letter(SemiringId::Boolean, ab, 1, 1);
        let v = series_to_json(&s);
        assert_eq!(v["coefficients"], json!({"eps": 0, "a": 0, "b": 1}));
    }
}
