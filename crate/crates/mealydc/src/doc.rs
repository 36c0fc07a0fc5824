//! JSON document layer: one document is one object, discriminated by a
//! `"kind"` field. Parsing rebuilds every object through its validating
//! constructor, so a document that parses is structurally sound (shapes,
//! index ranges, boundary agreement); laws are still the checkers' business.
//! Errors carry a path to the offending field.

use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::finset::{FinFun, FinSet};
use crate::mealy::{Cell, MealyMachine};
use crate::monad::{
    BicrossedRepresentation, DoubleMonad, LooseMonadMap, ModuleStructure, TightMonadMorphism,
};
use crate::monoid::{check_table, FinMonoid, MatchedPair};
use crate::verdict::{Error, Result};

/// Representation data bundled with the output table a representation does
/// not carry; the input to the representation-to-module conversion.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ModuleData {
    pub monad: DoubleMonad,
    pub representation: BicrossedRepresentation,
    pub sigma: Vec<Vec<usize>>,
    pub output: FinSet,
}

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Document {
    Set(FinSet),
    Fun(FinFun),
    Monoid(FinMonoid),
    Machine(MealyMachine),
    Cell(Cell),
    Monad(DoubleMonad),
    MatchedPair(MatchedPair),
    Module(ModuleStructure),
    Representation(BicrossedRepresentation),
    TightMorphism(TightMonadMorphism),
    LooseMap(LooseMonadMap),
    ModuleData(ModuleData),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Set(_) => "set",
            Document::Fun(_) => "fun",
            Document::Monoid(_) => "monoid",
            Document::Machine(_) => "machine",
            Document::Cell(_) => "cell",
            Document::Monad(_) => "monad",
            Document::MatchedPair(_) => "matched-pair",
            Document::Module(_) => "module",
            Document::Representation(_) => "representation",
            Document::TightMorphism(_) => "tight-morphism",
            Document::LooseMap(_) => "loose-map",
            Document::ModuleData(_) => "module-data",
        }
    }

    /// Serializes with the `"kind"` tag; the result re-parses to an equal
    /// document.
    pub fn to_value(&self) -> Value {
        let mut v = match self {
            Document::Set(x) => serde_json::to_value(x),
            Document::Fun(x) => serde_json::to_value(x),
            Document::Monoid(x) => serde_json::to_value(x),
            Document::Machine(x) => serde_json::to_value(x),
            Document::Cell(x) => serde_json::to_value(x),
            Document::Monad(x) => serde_json::to_value(x),
            Document::MatchedPair(x) => serde_json::to_value(x),
            Document::Module(x) => serde_json::to_value(x),
            Document::Representation(x) => serde_json::to_value(x),
            Document::TightMorphism(x) => serde_json::to_value(x),
            Document::LooseMap(x) => serde_json::to_value(x),
            Document::ModuleData(x) => serde_json::to_value(x),
        }
        .expect("documents serialize");
        v.as_object_mut()
            .expect("documents are objects")
            .insert("kind".into(), Value::String(self.kind().into()));
        v
    }
}

macro_rules! extractor {
    ($fn:ident, $variant:ident, $ty:ty, $kind:literal) => {
        impl Document {
            pub fn $fn(self) -> Result<$ty> {
                match self {
                    Document::$variant(x) => Ok(x),
                    other => Err(Error::Invalid(format!(
                        "expected a {} document, got kind {:?}",
                        $kind,
                        other.kind()
                    ))),
                }
            }
        }
    };
}

extractor!(into_set, Set, FinSet, "set");
extractor!(into_fun, Fun, FinFun, "fun");
extractor!(into_monoid, Monoid, FinMonoid, "monoid");
extractor!(into_machine, Machine, MealyMachine, "machine");
extractor!(into_cell, Cell, Cell, "cell");
extractor!(into_monad, Monad, DoubleMonad, "monad");
extractor!(into_matched_pair, MatchedPair, MatchedPair, "matched-pair");
extractor!(into_module, Module, ModuleStructure, "module");
extractor!(
    into_representation,
    Representation,
    BicrossedRepresentation,
    "representation"
);
extractor!(
    into_tight_morphism,
    TightMorphism,
    TightMonadMorphism,
    "tight-morphism"
);
extractor!(into_loose_map, LooseMap, LooseMonadMap, "loose-map");
extractor!(into_module_data, ModuleData, ModuleData, "module-data");

fn from_value<T: DeserializeOwned>(v: &Value) -> Result<T> {
    serde_path_to_error::deserialize(v.clone())
        .map_err(|e| Error::index(e.path().to_string(), e.inner().to_string()))
}

/// Prefixes nested validation errors with the field they live under.
fn at(prefix: &str, e: Error) -> Error {
    match e {
        Error::Index { path, message } => Error::Index {
            path: format!("{prefix}.{path}"),
            message,
        },
        Error::Invalid(m) => Error::Invalid(format!("{prefix}: {m}")),
        other => other,
    }
}

fn rebuild_set(path: &str, s: &FinSet) -> Result<FinSet> {
    if let Some(labels) = s.labels() {
        if labels.len() != s.size() {
            return Err(Error::index(
                format!("{path}.labels"),
                format!("{} labels for {} elements", labels.len(), s.size()),
            ));
        }
        return FinSet::with_labels(labels.to_vec()).map_err(|e| at(path, e));
    }
    Ok(s.clone())
}

fn rebuild_fun(path: &str, f: &FinFun) -> Result<FinFun> {
    let dom = rebuild_set(&format!("{path}.dom"), f.dom())?;
    let cod = rebuild_set(&format!("{path}.cod"), f.cod())?;
    FinFun::new(dom, cod, f.table().to_vec()).map_err(|e| at(path, e))
}

fn rebuild_machine(path: &str, m: &MealyMachine) -> Result<MealyMachine> {
    let input = rebuild_set(&format!("{path}.input"), m.input())?;
    let output = rebuild_set(&format!("{path}.output"), m.output())?;
    let states = rebuild_set(&format!("{path}.states"), m.states())?;
    MealyMachine::new(
        input,
        output,
        states,
        m.d_table().clone(),
        m.s_table().clone(),
    )
    .map_err(|e| at(path, e))
}

fn rebuild_monoid(path: &str, m: &FinMonoid) -> Result<FinMonoid> {
    let carrier = rebuild_set(&format!("{path}.carrier"), m.carrier())?;
    FinMonoid::new(carrier, m.unit(), m.mult_table().clone()).map_err(|e| at(path, e))
}

fn rebuild_monad(path: &str, m: &DoubleMonad) -> Result<DoubleMonad> {
    let machine = rebuild_machine(&format!("{path}.machine"), m.machine())?;
    DoubleMonad::new(machine, m.e0(), m.mu_table().clone()).map_err(|e| at(path, e))
}

/// Parses one kind-tagged document, validating every structural invariant
/// the document can express on its own.
pub fn parse_document(v: &Value) -> Result<Document> {
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Invalid("document needs a string \"kind\" field".into()))?;
    match kind {
        "set" => {
            let raw: FinSet = from_value(v)?;
            Ok(Document::Set(rebuild_set("set", &raw)?))
        }
        "fun" => {
            let raw: FinFun = from_value(v)?;
            Ok(Document::Fun(rebuild_fun("fun", &raw)?))
        }
        "monoid" => {
            let raw: FinMonoid = from_value(v)?;
            Ok(Document::Monoid(rebuild_monoid("monoid", &raw)?))
        }
        "machine" => {
            let raw: MealyMachine = from_value(v)?;
            Ok(Document::Machine(rebuild_machine("machine", &raw)?))
        }
        "cell" => {
            let raw: Cell = from_value(v)?;
            let top = rebuild_machine("top", &raw.top)?;
            let bottom = rebuild_machine("bottom", &raw.bottom)?;
            let f = rebuild_fun("f", &raw.f)?;
            let g = rebuild_fun("g", &raw.g)?;
            let alpha = rebuild_fun("alpha", &raw.alpha)?;
            Ok(Document::Cell(Cell::new(top, bottom, f, g, alpha)?))
        }
        "monad" => {
            let raw: DoubleMonad = from_value(v)?;
            Ok(Document::Monad(rebuild_monad("monad", &raw)?))
        }
        "matched-pair" => {
            let raw: MatchedPair = from_value(v)?;
            let monoid = rebuild_monoid("monoid", raw.state_monoid())?;
            let alphabet = rebuild_set("alphabet", raw.alphabet())?;
            Ok(Document::MatchedPair(MatchedPair::new(
                monoid,
                alphabet,
                raw.d_table().clone(),
                raw.s_table().clone(),
            )?))
        }
        "module" => {
            let raw: ModuleStructure = from_value(v)?;
            let monad = rebuild_monad("monad", &raw.monad)?;
            let machine = rebuild_machine("machine", &raw.machine)?;
            Ok(Document::Module(ModuleStructure::new(
                monad, machine, raw.xi,
            )?))
        }
        "representation" => {
            let raw: BicrossedRepresentation = from_value(v)?;
            let set = rebuild_set("set", &raw.set)?;
            Ok(Document::Representation(BicrossedRepresentation::new(
                set, raw.alpha, raw.beta,
            )?))
        }
        "tight-morphism" => {
            let raw: TightMonadMorphism = from_value(v)?;
            Ok(Document::TightMorphism(TightMonadMorphism {
                f: rebuild_fun("f", &raw.f)?,
                alpha: rebuild_fun("alpha", &raw.alpha)?,
            }))
        }
        "loose-map" => {
            let raw: LooseMonadMap = from_value(v)?;
            let machine = rebuild_machine("machine", &raw.machine)?;
            let nx = machine.states().size();
            // rows of delta and sigma are indexed by the source monad's
            // states, unknown here; columns and delta's entries are not
            check_table(&raw.delta, raw.delta.len(), nx, nx, "delta")?;
            if raw.sigma.len() != raw.delta.len() {
                return Err(Error::index(
                    "sigma",
                    format!(
                        "{} rows, expected {} to match delta",
                        raw.sigma.len(),
                        raw.delta.len()
                    ),
                ));
            }
            for (r, row) in raw.sigma.iter().enumerate() {
                if row.len() != nx {
                    return Err(Error::index(
                        format!("sigma[{r}]"),
                        format!("{} columns, expected {}", row.len(), nx),
                    ));
                }
            }
            Ok(Document::LooseMap(LooseMonadMap {
                machine,
                delta: raw.delta,
                sigma: raw.sigma,
            }))
        }
        "module-data" => {
            let raw: ModuleData = from_value(v)?;
            let monad = rebuild_monad("monad", &raw.monad)?;
            let set = rebuild_set("representation.set", &raw.representation.set)?;
            let representation = BicrossedRepresentation::new(
                set,
                raw.representation.alpha,
                raw.representation.beta,
            )
            .map_err(|e| at("representation", e))?;
            let output = rebuild_set("output", &raw.output)?;
            check_table(
                &raw.sigma,
                monad.alphabet().size(),
                representation.set.size(),
                output.size(),
                "sigma",
            )?;
            Ok(Document::ModuleData(ModuleData {
                monad,
                representation,
                sigma: raw.sigma,
                output,
            }))
        }
        other => Err(Error::Invalid(format!("unknown document kind {other:?}"))),
    }
}

pub fn parse_document_str(s: &str) -> Result<Document> {
    parse_document(&serde_json::from_str(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn machine_value() -> Value {
        json!({
            "kind": "machine",
            "input": { "size": 2 },
            "output": { "size": 2 },
            "states": { "size": 2 },
            "d": [[0, 1], [0, 1]],
            "s": [[0, 0], [1, 0]],
        })
    }

    #[test]
    fn machine_round_trip() {
        let doc = parse_document(&machine_value()).unwrap();
        let m = doc.clone().into_machine().unwrap();
        assert_eq!(m.d(1, 1), 1);
        let reparsed = parse_document(&doc.to_value()).unwrap();
        assert_eq!(doc, reparsed);
    }

    #[test]
    fn missing_field_names_the_field() {
        let v = json!({ "kind": "monad", "machine": machine_value(), "mu": [[0,1],[1,1]] });
        let err = parse_document(&v).unwrap_err();
        assert!(err.to_string().contains("e0"), "{err}");
    }

    #[test]
    fn out_of_range_entry_reports_row_and_column() {
        let mut v = machine_value();
        v["d"][0][1] = json!(5);
        let err = parse_document(&v).unwrap_err();
        assert!(err.to_string().contains("d[0][1]"), "{err}");
    }

    #[test]
    fn unknown_kind_is_rejected() {
        let err = parse_document(&json!({ "kind": "widget" })).unwrap_err();
        assert!(err.to_string().contains("widget"));
    }

    #[test]
    fn labels_must_match_size() {
        let err =
            parse_document(&json!({ "kind": "set", "size": 3, "labels": ["a", "b"] })).unwrap_err();
        assert!(err.to_string().contains("labels"), "{err}");
        let ok =
            parse_document(&json!({ "kind": "set", "size": 2, "labels": ["a", "b"] })).unwrap();
        assert_eq!(ok.into_set().unwrap().label(1), "b");
    }

    #[test]
    fn nested_errors_carry_a_path() {
        let v = json!({
            "kind": "cell",
            "top": machine_value(),
            "bottom": { "kind": "machine", "input": { "size": 2 }, "output": { "size": 2 },
                        "states": { "size": 1 }, "d": [[0], [0]], "s": [[0], [9]] },
            "f": { "dom": { "size": 2 }, "cod": { "size": 2 }, "table": [0, 1] },
            "g": { "dom": { "size": 2 }, "cod": { "size": 2 }, "table": [0, 1] },
            "alpha": { "dom": { "size": 2 }, "cod": { "size": 1 }, "table": [0, 0] },
        });
        let err = parse_document(&v).unwrap_err();
        assert!(err.to_string().contains("bottom.s[1][0]"), "{err}");
    }

    #[test]
    fn every_kind_round_trips() {
        let machine = machine_value();
        let monad = json!({ "kind": "monad", "machine": machine, "e0": 0, "mu": [[0,1],[1,1]] });
        let samples = vec![
            json!({ "kind": "set", "size": 3 }),
            json!({ "kind": "fun", "dom": { "size": 2 }, "cod": { "size": 3 }, "table": [2, 0] }),
            json!({ "kind": "monoid", "carrier": { "size": 2 }, "unit": 0, "mult": [[0,1],[1,1]] }),
            machine.clone(),
            monad.clone(),
            json!({ "kind": "matched-pair",
                    "monoid": { "carrier": { "size": 2 }, "unit": 0, "mult": [[0,1],[1,1]] },
                    "alphabet": { "size": 2 }, "d": [[0,1],[0,1]], "s": [[0,0],[1,0]] }),
            json!({ "kind": "module", "monad": monad, "machine": machine, "xi": [[0,1],[1,1]] }),
            json!({ "kind": "representation", "set": { "size": 2 },
                    "alpha": [[0,1],[1,1]], "beta": [[0,1],[0,1]] }),
            json!({ "kind": "tight-morphism",
                    "f": { "dom": { "size": 2 }, "cod": { "size": 2 }, "table": [0, 1] },
                    "alpha": { "dom": { "size": 2 }, "cod": { "size": 2 }, "table": [0, 1] } }),
            json!({ "kind": "loose-map", "machine": machine, "delta": [[0,1],[0,1]], "sigma": [[0,0],[1,1]] }),
            json!({ "kind": "module-data", "monad": monad,
                    "representation": { "set": { "size": 2 }, "alpha": [[0,1],[1,1]], "beta": [[0,1],[0,1]] },
                    "sigma": [[0,0],[1,0]], "output": { "size": 2 } }),
        ];
        for sample in samples {
            let doc = parse_document(&sample).unwrap_or_else(|e| panic!("{sample}: {e}"));
            let reparsed = parse_document(&doc.to_value()).unwrap();
            assert_eq!(doc, reparsed, "{}", sample);
        }
    }
}
