//! JSON documents for spaces, measures, functions and sub-algebras.
//!
//! ```json
//! {
//!   "space": {"ground": ["a", "b", "c"], "atoms": [["a"], ["b", "c"]]},
//!   "measures": {
//!     "nu": {"type": "maxitive", "atom_values": {"a": 1, "b": "inf"}},
//!     "m": {"type": "additive", "atom_values": {"a": 0.5, "b": 0.5}},
//!     "w": {"type": "table", "values": {"": 0, "0": 1, "1": 1, "0+1": 3}}
//!   },
//!   "functions": {"f": {"atom_values": {"a": 3, "b": 1}}},
//!   "subalgebras": {"F": "a|b+c"}
//! }
//! ```
//!
//! Atom values are keyed by the label of any member of the atom. Table keys
//! are atom indices joined by `+`, the empty set being `""`. `∞` is written
//! `"inf"`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::classical::AdditiveMeasure;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::maxitive::{classify, MaxitiveMeasure};
use crate::possibility::SubAlgebra;
use crate::space::{all_sets, AtomSet, MeasurableFn, SetFn, SetFunction, Space, EXHAUSTIVE_BUDGET};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub ground: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<Vec<String>>>,
}

impl SpaceSpec {
    pub fn build(&self) -> Result<Space> {
        match &self.atoms {
            Some(blocks) => Space::new(&self.ground, blocks),
            None => Space::discrete(&self.ground),
        }
    }

    pub fn of(space: &Space) -> Self {
        let discrete = space.blocks().iter().all(|b| b.len() == 1);
        SpaceSpec {
            ground: space.ground().to_vec(),
            atoms: (!discrete).then(|| {
                space
                    .blocks()
                    .into_iter()
                    .map(|b| b.into_iter().map(str::to_owned).collect())
                    .collect()
            }),
        }
    }
}

/// A measure as loaded from JSON.
#[derive(Clone, Debug, PartialEq)]
pub enum Measure {
    Maxitive(MaxitiveMeasure),
    Additive(AdditiveMeasure),
    Table(SetFunction),
}

impl Measure {
    pub fn atom_count(&self) -> usize {
        match self {
            Measure::Maxitive(m) => m.atom_count(),
            Measure::Additive(m) => m.atom_count(),
            Measure::Table(t) => t.atom_count(),
        }
    }

    pub fn to_table(&self) -> Result<SetFunction> {
        match self {
            Measure::Maxitive(m) => SetFunction::tabulate(m),
            Measure::Additive(m) => SetFunction::tabulate(m),
            Measure::Table(t) => Ok(t.clone()),
        }
    }

    /// The measure as a maxitive measure; tables must be maxitive.
    pub fn to_maxitive(&self) -> Result<MaxitiveMeasure> {
        match self {
            Measure::Maxitive(m) => Ok(m.clone()),
            Measure::Additive(_) => Err(Error::Model("an additive measure was given where a maxitive one is required".into())),
            Measure::Table(t) => MaxitiveMeasure::from_set_function(t),
        }
    }

    pub fn to_additive(&self) -> Result<AdditiveMeasure> {
        match self {
            Measure::Additive(m) => Ok(m.clone()),
            _ => Err(Error::Model("an additive measure is required".into())),
        }
    }

    /// Rejects tables that are not monotone or do not vanish on `∅`.
    pub fn validate(&self) -> Result<()> {
        if let Measure::Table(t) = self {
            if t.atom_count() <= EXHAUSTIVE_BUDGET {
                let report = classify(t)?;
                if !report.monotone {
                    let w = &report.witnesses["monotone"];
                    return Err(Error::NotMonotone(format!("{:?}", w.sets)));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self, space: &Space) -> Value {
        let atom_values = |vals: &[ExtReal]| -> Value {
            let mut map = Map::new();
            for (a, v) in vals.iter().enumerate() {
                map.insert(space.atom_label(a).to_owned(), ext_json(*v));
            }
            Value::Object(map)
        };
        match self {
            Measure::Maxitive(m) => serde_json::json!({"type": "maxitive", "atom_values": atom_values(m.values())}),
            Measure::Additive(m) => serde_json::json!({"type": "additive", "atom_values": atom_values(m.masses())}),
            Measure::Table(t) => {
                let mut map = Map::new();
                for b in all_sets(t.atom_count()) {
                    map.insert(b.key(), ext_json(t.eval(b)));
                }
                serde_json::json!({"type": "table", "values": map})
            }
        }
    }
}

pub fn ext_json(v: ExtReal) -> Value {
    serde_json::to_value(v).expect("extended reals serialize")
}

pub fn function_json(space: &Space, f: &MeasurableFn) -> Value {
    let mut map = Map::new();
    for (a, v) in f.values().iter().enumerate() {
        map.insert(space.atom_label(a).to_owned(), ext_json(*v));
    }
    serde_json::json!({ "atom_values": map })
}

fn parse_ext(v: &Value, what: &str) -> Result<ExtReal> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Model(format!("{what}: {e}")))
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Model(format!("{what} must be a JSON object")))
}

/// Atom values keyed by labels, or a bare array in atom order.
fn atom_vector(space: &Space, v: &Value, what: &str) -> Result<Vec<ExtReal>> {
    let k = space.atom_count();
    if let Some(arr) = v.as_array() {
        if arr.len() != k {
            return Err(Error::DimensionMismatch { expected: k, found: arr.len() });
        }
        return arr.iter().map(|x| parse_ext(x, what)).collect();
    }
    let mut out: Vec<Option<ExtReal>> = vec![None; k];
    for (label, x) in object(v, what)? {
        let a = space.atom_of(label).ok_or_else(|| Error::UnknownElement(label.clone()))?;
        let x = parse_ext(x, what)?;
        match out[a] {
            Some(prev) if prev != x => {
                return Err(Error::Model(format!("{what}: conflicting values for atom `{}`", space.atom_label(a))))
            }
            _ => out[a] = Some(x),
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(a, x)| x.ok_or_else(|| Error::Model(format!("{what}: no value for atom `{}`", space.atom_label(a)))))
        .collect()
}

fn table_from(k: usize, values: &Map<String, Value>) -> Result<SetFunction> {
    let mut table: Vec<Option<ExtReal>> = vec![None; 1 << k];
    table[0] = Some(ExtReal::ZERO);
    for (key, x) in values {
        let set = AtomSet::parse_key(key, k)?;
        let x = parse_ext(x, "table value")?;
        if set.is_empty() && !x.is_zero() {
            return Err(Error::InvalidSetFunction("value at the empty set must be 0".into()));
        }
        table[set.bits() as usize] = Some(x);
    }
    let table = table
        .into_iter()
        .enumerate()
        .map(|(bits, x)| x.ok_or_else(|| Error::Model(format!("table has no entry for `{}`", AtomSet::from_bits(bits as u64).key()))))
        .collect::<Result<Vec<_>>>()?;
    SetFunction::new(k, table)
}

fn table_atom_count(values: &Map<String, Value>) -> Result<usize> {
    let mut k = 0;
    for key in values.keys() {
        for part in key.split('+').filter(|p| !p.is_empty()) {
            let i: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::Model(format!("bad set key `{key}`")))?;
            k = k.max(i + 1);
        }
    }
    Ok(k)
}

/// Parses a measure document against `space`.
pub fn parse_measure(space: &Space, v: &Value) -> Result<Measure> {
    let obj = object(v, "measure")?;
    let kind = obj.get("type").and_then(Value::as_str).unwrap_or("maxitive");
    match kind {
        "maxitive" => {
            let vals = obj.get("atom_values").ok_or_else(|| Error::Model("missing `atom_values`".into()))?;
            Ok(Measure::Maxitive(MaxitiveMeasure::new(atom_vector(space, vals, "atom_values")?)))
        }
        "additive" => {
            let vals = obj.get("atom_values").ok_or_else(|| Error::Model("missing `atom_values`".into()))?;
            Ok(Measure::Additive(AdditiveMeasure::new(atom_vector(space, vals, "atom_values")?)))
        }
        "table" => {
            let vals = object(obj.get("values").ok_or_else(|| Error::Model("missing `values`".into()))?, "values")?;
            Ok(Measure::Table(table_from(space.atom_count(), vals)?))
        }
        other => Err(Error::Model(format!("unknown measure type `{other}`"))),
    }
}

pub fn parse_function(space: &Space, v: &Value) -> Result<MeasurableFn> {
    let vals = match v.as_object().and_then(|o| o.get("atom_values")) {
        Some(vals) => vals,
        None => v,
    };
    Ok(MeasurableFn::new(atom_vector(space, vals, "function")?))
}

/// Discrete space implied by the keys of a standalone document.
pub fn infer_space(v: &Value) -> Result<Space> {
    if let Some(vals) = v.get("values").and_then(Value::as_object) {
        return Space::discrete(&(0..table_atom_count(vals)?).map(|i| i.to_string()).collect::<Vec<_>>());
    }
    let vals = v.get("atom_values").unwrap_or(v);
    match vals {
        Value::Object(map) => Space::discrete(&map.keys().collect::<Vec<_>>()),
        Value::Array(arr) => Ok(Space::numbered(arr.len())),
        _ => Err(Error::Model("cannot infer a space from this document".into())),
    }
}

/// The embedded `"space"` of a document, if any.
pub fn embedded_space(v: &Value) -> Result<Option<Space>> {
    match v.get("space") {
        None => Ok(None),
        Some(s) => {
            let spec: SpaceSpec = serde_json::from_value(s.clone()).map_err(|e| Error::Model(format!("space: {e}")))?;
            spec.build().map(Some)
        }
    }
}

/// A model file: one space plus named objects.
#[derive(Clone, Debug)]
pub struct ModelFile {
    pub space: Space,
    pub measures: BTreeMap<String, Measure>,
    pub functions: BTreeMap<String, MeasurableFn>,
    pub subalgebras: BTreeMap<String, SubAlgebra>,
}

impl ModelFile {
    pub fn parse(v: &Value, validate: bool) -> Result<Self> {
        let space = embedded_space(v)?.ok_or_else(|| Error::Model("model file needs a `space`".into()))?;
        let mut measures = BTreeMap::new();
        if let Some(ms) = v.get("measures") {
            for (name, m) in object(ms, "measures")? {
                let m = parse_measure(&space, m).map_err(|e| wrap(name, e))?;
                if validate {
                    m.validate().map_err(|e| wrap(name, e))?;
                }
                measures.insert(name.clone(), m);
            }
        }
        let mut functions = BTreeMap::new();
        if let Some(fs) = v.get("functions") {
            for (name, f) in object(fs, "functions")? {
                functions.insert(name.clone(), parse_function(&space, f).map_err(|e| wrap(name, e))?);
            }
        }
        let mut subalgebras = BTreeMap::new();
        if let Some(ss) = v.get("subalgebras") {
            for (name, s) in object(ss, "subalgebras")? {
                let text = s.as_str().ok_or_else(|| Error::Model(format!("sub-algebra `{name}` must be a string")))?;
                subalgebras.insert(name.clone(), SubAlgebra::parse(&space, text)?);
            }
        }
        Ok(ModelFile { space, measures, functions, subalgebras })
    }

    pub fn load(path: &Path, validate: bool) -> Result<Self> {
        ModelFile::parse(&read_json(path)?, validate)
    }
}

fn wrap(name: &str, e: Error) -> Error {
    match e {
        Error::Model(m) => Error::Model(format!("`{name}`: {m}")),
        other => other,
    }
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Model(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Model(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn model_round_trip() {
        let doc = json!({
            "space": {"ground": ["a", "b", "c"], "atoms": [["a"], ["b", "c"]]},
            "measures": {
                "nu": {"type": "maxitive", "atom_values": {"a": 1, "c": "inf"}},
                "m": {"type": "additive", "atom_values": [0.5, 0.5]},
                "w": {"type": "table", "values": {"": 0, "0": 1, "1": 1, "0+1": 3}}
            },
            "functions": {"f": {"atom_values": {"a": 3, "b": 1}}},
            "subalgebras": {"F": "a|b+c"}
        });
        let model = ModelFile::parse(&doc, true).unwrap();
        let nu = &model.measures["nu"];
        assert_eq!(nu.to_maxitive().unwrap().values(), &[ExtReal::ONE, ExtReal::INFINITY]);
        let again = parse_measure(&model.space, &nu.to_json(&model.space)).unwrap();
        assert_eq!(&again, nu);
        let w = &model.measures["w"];
        assert_eq!(&parse_measure(&model.space, &w.to_json(&model.space)).unwrap(), w);
        assert!(w.to_maxitive().is_err());
        assert_eq!(model.functions["f"].values(), &[ExtReal::of(3.0), ExtReal::ONE]);
        assert_eq!(model.subalgebras["F"].blocks().len(), 2);
        let spec = SpaceSpec::of(&model.space);
        assert_eq!(spec.build().unwrap(), model.space);
    }

    #[test]
    fn errors() {
        let space = Space::discrete(&["a", "b"]).unwrap();
        assert!(matches!(
            parse_measure(&space, &json!({"type": "maxitive", "atom_values": {"a": 1}})),
            Err(Error::Model(_))
        ));
        assert!(matches!(
            parse_measure(&space, &json!({"atom_values": {"a": 1, "z": 2}})),
            Err(Error::UnknownElement(_))
        ));
        assert!(matches!(
            parse_measure(&space, &json!({"atom_values": {"a": -1, "b": 2}})),
            Err(Error::Model(_))
        ));
        let bad = parse_measure(&space, &json!({"type": "table", "values": {"0": 2, "1": 1, "0+1": 1}})).unwrap();
        assert!(matches!(bad.validate(), Err(Error::NotMonotone(_))));
    }

    #[test]
    fn inference() {
        let s = infer_space(&json!({"atom_values": {"x": 1, "y": 2}})).unwrap();
        assert_eq!(s.ground(), &["x", "y"]);
        let s = infer_space(&json!({"type": "table", "values": {"0": 1, "1": 1, "0+1": 1}})).unwrap();
        assert_eq!(s.atom_count(), 2);
        assert_eq!(infer_space(&json!([1, 2, 3])).unwrap().atom_count(), 3);
    }
}
