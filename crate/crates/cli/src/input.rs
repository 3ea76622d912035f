//! Resolution of measure, function and sub-algebra arguments.
//!
//! An argument is a name from `--model`, inline JSON, or a path to a JSON
//! document. All arguments of one command share a space: the model's, else
//! the first embedded `"space"`, else one inferred from the primary document.

use std::path::Path;

use maxmeasure::model::{embedded_space, infer_space, parse_function, parse_measure, read_json, Measure, ModelFile};
use maxmeasure::possibility::SubAlgebra;
use maxmeasure::{Error, MeasurableFn, Result, Space};
use serde_json::Value;

enum Source {
    Measure(Measure),
    Function(MeasurableFn),
    Sub(SubAlgebra),
    Doc(Value),
    Text(String),
}

pub struct Inputs {
    pub space: Space,
    sources: Vec<(String, Source)>,
    validate: bool,
}

fn load_doc(arg: &str) -> Result<Value> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        serde_json::from_str(arg).map_err(|e| Error::Model(format!("inline JSON: {e}")))
    } else {
        read_json(Path::new(arg))
    }
}

impl Inputs {
    /// `measures` and `functions` are argument strings; the first measure (or
    /// function, if there is none) is the primary document for inference.
    pub fn load(
        model: Option<&Path>,
        validate: bool,
        measures: &[&str],
        functions: &[&str],
        subs: &[&str],
    ) -> Result<Self> {
        let model = model.map(|p| ModelFile::load(p, validate)).transpose()?;
        let mut sources = Vec::new();
        let named = |arg: &str| -> Option<Source> {
            let m = model.as_ref()?;
            if let Some(x) = m.measures.get(arg) {
                return Some(Source::Measure(x.clone()));
            }
            if let Some(x) = m.functions.get(arg) {
                return Some(Source::Function(x.clone()));
            }
            m.subalgebras.get(arg).map(|x| Source::Sub(x.clone()))
        };
        for &arg in measures.iter().chain(functions) {
            let src = match named(arg) {
                Some(s) => s,
                None => Source::Doc(load_doc(arg)?),
            };
            sources.push((arg.to_owned(), src));
        }
        for &arg in subs {
            sources.push((arg.to_owned(), named(arg).unwrap_or_else(|| Source::Text(arg.to_owned()))));
        }
        let space = match &model {
            Some(m) => m.space.clone(),
            None => {
                let mut found = None;
                for (_, s) in &sources {
                    if let Source::Doc(v) = s {
                        if let Some(sp) = embedded_space(v)? {
                            found = Some(sp);
                            break;
                        }
                    }
                }
                match found {
                    Some(sp) => sp,
                    None => match sources.iter().find_map(|(_, s)| match s {
                        Source::Doc(v) => Some(v),
                        _ => None,
                    }) {
                        Some(v) => infer_space(v)?,
                        None => return Err(Error::Model("no measure or function given".into())),
                    },
                }
            }
        };
        Ok(Inputs { space, sources, validate })
    }

    fn source(&self, arg: &str) -> Result<&Source> {
        self.sources
            .iter()
            .find(|(a, _)| a == arg)
            .map(|(_, s)| s)
            .ok_or_else(|| Error::Model(format!("`{arg}` was not loaded")))
    }

    pub fn measure(&self, arg: &str) -> Result<Measure> {
        let m = match self.source(arg)? {
            Source::Measure(m) => m.clone(),
            Source::Doc(v) => {
                let m = parse_measure(&self.space, v.get("measure").unwrap_or(v))?;
                if self.validate {
                    m.validate()?;
                }
                m
            }
            _ => return Err(Error::Model(format!("`{arg}` is not a measure"))),
        };
        if m.atom_count() != self.space.atom_count() {
            return Err(Error::DimensionMismatch { expected: self.space.atom_count(), found: m.atom_count() });
        }
        Ok(m)
    }

    pub fn function(&self, arg: &str) -> Result<MeasurableFn> {
        let f = match self.source(arg)? {
            Source::Function(f) => f.clone(),
            Source::Doc(v) => {
                let inner = ["function", "density", "y"].iter().find_map(|k| v.get(*k));
                parse_function(&self.space, inner.unwrap_or(v))?
            }
            _ => return Err(Error::Model(format!("`{arg}` is not a function"))),
        };
        if f.len() != self.space.atom_count() {
            return Err(Error::DimensionMismatch { expected: self.space.atom_count(), found: f.len() });
        }
        Ok(f)
    }

    pub fn sub(&self, arg: &str) -> Result<SubAlgebra> {
        match self.source(arg)? {
            Source::Sub(s) => Ok(s.clone()),
            Source::Text(t) => SubAlgebra::parse(&self.space, t),
            _ => Err(Error::Model(format!("`{arg}` is not a sub-algebra"))),
        }
    }
}
