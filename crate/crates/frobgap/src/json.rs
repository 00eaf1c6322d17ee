//! JSON encodings of proofs, diagrams, axiom linkings and tensor stores.
//!
//! Every top-level document carries `schema_version`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use frobgap_core::diagram::{Diagram, End, NodeKind, Space, Wire, WireType};
use frobgap_core::formula::{parse_formula, print_formula, Formula, Mode, Polarity};
use frobgap_core::tensor::{Tensor, TensorError, TensorStore};
use frobgap_core::translate::AxiomLinking;
use frobgap_core::ProofTerm;
use serde_json::{json, Map, Value};
use thiserror::Error;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("missing or malformed field `{0}`")]
    Field(String),
    #[error("unsupported schema_version {0}")]
    Version(u64),
    #[error("unknown {what} `{name}`")]
    Unknown { what: &'static str, name: String },
    #[error("formula `{text}`: {error}")]
    Formula {
        text: String,
        error: frobgap_core::formula::ParseError,
    },
    #[error("proof node `{rule}` does not fit its source and target")]
    Shape { rule: String },
    #[error("{0}")]
    Tensor(#[from] TensorError),
    #[error("diagram: {0}")]
    Diagram(#[from] frobgap_core::diagram::DiagramError),
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value, JsonError> {
    v.get(name).ok_or_else(|| JsonError::Field(name.to_string()))
}

fn str_field<'a>(v: &'a Value, name: &str) -> Result<&'a str, JsonError> {
    field(v, name)?.as_str().ok_or_else(|| JsonError::Field(name.to_string()))
}

fn usize_field(v: &Value, name: &str) -> Result<usize, JsonError> {
    field(v, name)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| JsonError::Field(name.to_string()))
}

fn array_field<'a>(v: &'a Value, name: &str) -> Result<&'a Vec<Value>, JsonError> {
    field(v, name)?.as_array().ok_or_else(|| JsonError::Field(name.to_string()))
}

/// Adds `schema_version` in front of the fields of `body`.
pub fn versioned(body: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    if let Value::Object(o) = body {
        m.extend(o);
    }
    Value::Object(m)
}

fn check_version(v: &Value) -> Result<(), JsonError> {
    let ver = field(v, "schema_version")?
        .as_u64()
        .ok_or_else(|| JsonError::Field("schema_version".into()))?;
    if ver != SCHEMA_VERSION {
        return Err(JsonError::Version(ver));
    }
    Ok(())
}

// ------------------------------------------------------------------ proofs

/// `{rule, mode?, children, source, target}`, children in application order.
pub fn proof_to_json(p: &ProofTerm) -> Value {
    let arrow = p.validate().expect("proof terms handed to the encoder are valid");
    let mut m = Map::new();
    m.insert("rule".into(), json!(p.rule()));
    if let Some(mode) = p.mode() {
        m.insert("mode".into(), json!(mode.tag().to_string()));
    }
    m.insert(
        "children".into(),
        Value::Array(p.children().into_iter().map(proof_to_json).collect()),
    );
    m.insert("source".into(), json!(print_formula(&arrow.lhs)));
    m.insert("target".into(), json!(print_formula(&arrow.rhs)));
    Value::Object(m)
}

fn parse_with(text: &str, atoms: &BTreeSet<String>) -> Result<Formula, JsonError> {
    parse_formula(text, atoms).map_err(|error| JsonError::Formula {
        text: text.to_string(),
        error,
    })
}

/// Rebuilds a proof term. `atoms` lists the atoms its formulas may use.
pub fn proof_from_json(v: &Value, atoms: &BTreeSet<String>) -> Result<ProofTerm, JsonError> {
    use Formula as F;
    let rule = str_field(v, "rule")?;
    let source = parse_with(str_field(v, "source")?, atoms)?;
    let target = parse_with(str_field(v, "target")?, atoms)?;
    let kids = array_field(v, "children")?
        .iter()
        .map(|c| proof_from_json(c, atoms))
        .collect::<Result<Vec<_>, _>>()?;
    let mode = match v.get("mode").and_then(Value::as_str) {
        Some(t) => t.chars().next().and_then(Mode::from_tag),
        None => None,
    };
    let shape = || JsonError::Shape { rule: rule.to_string() };
    let two = |kids: &[ProofTerm]| -> Result<(Arc<ProofTerm>, Arc<ProofTerm>), JsonError> {
        match kids {
            [a, b] => Ok((Arc::new(a.clone()), Arc::new(b.clone()))),
            _ => Err(shape()),
        }
    };
    let one = |kids: &[ProofTerm]| -> Result<Arc<ProofTerm>, JsonError> {
        match kids {
            [a] => Ok(Arc::new(a.clone())),
            _ => Err(shape()),
        }
    };
    let p = match rule {
        "id" => ProofTerm::Id(source.clone()),
        "compose" => {
            let (f, g) = two(&kids)?;
            ProofTerm::Compose(g, f)
        }
        "mon_tensor" => {
            let (f, g) = two(&kids)?;
            ProofTerm::MonTensor(f, g)
        }
        "mon_over" => {
            let (f, g) = two(&kids)?;
            ProofTerm::MonOver(f, g)
        }
        "mon_under" => {
            let (f, g) = two(&kids)?;
            ProofTerm::MonUnder(f, g)
        }
        "mon_dia" => ProofTerm::MonDia(mode.ok_or_else(shape)?, one(&kids)?),
        "mon_box" => ProofTerm::MonBox(mode.ok_or_else(shape)?, one(&kids)?),
        "ev_under" => match &source {
            F::Tensor(a, _) => ProofTerm::EvUnder((**a).clone(), target.clone()),
            _ => return Err(shape()),
        },
        "coev_under" => match &target {
            F::Under(a, _) => ProofTerm::CoevUnder((**a).clone(), source.clone()),
            _ => return Err(shape()),
        },
        "ev_over" => match &source {
            F::Tensor(_, a) => ProofTerm::EvOver((**a).clone(), target.clone()),
            _ => return Err(shape()),
        },
        "coev_over" => match &target {
            F::Over(_, a) => ProofTerm::CoevOver((**a).clone(), source.clone()),
            _ => return Err(shape()),
        },
        "ev_box" => ProofTerm::EvBox(mode.ok_or_else(shape)?, target.clone()),
        "coev_box" => ProofTerm::CoevBox(mode.ok_or_else(shape)?, source.clone()),
        "alpha_dia" | "sigma_dia" => match &source {
            F::Tensor(ab, dc) => match (&**ab, &**dc) {
                (F::Tensor(a, b), F::Dia(Mode::X, c)) => {
                    let (a, b, c) = ((**a).clone(), (**b).clone(), (**c).clone());
                    if rule == "alpha_dia" {
                        ProofTerm::AlphaDia(a, b, c)
                    } else {
                        ProofTerm::SigmaDia(a, b, c)
                    }
                }
                _ => return Err(shape()),
            },
            _ => return Err(shape()),
        },
        other => {
            return Err(JsonError::Unknown {
                what: "rule",
                name: other.to_string(),
            })
        }
    };
    match p.validate() {
        Ok(a) if a.lhs == source && a.rhs == target => Ok(p),
        _ => Err(shape()),
    }
}

// ---------------------------------------------------------------- diagrams

fn wire_type_json(t: &WireType) -> Value {
    Value::Array(t.0.iter().map(|w| json!(w.to_string())).collect())
}

fn parse_wire(s: &str) -> Result<Wire, JsonError> {
    let (name, dual) = match s.strip_suffix('*') {
        Some(n) => (n, true),
        None => (s, false),
    };
    if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
        return Err(JsonError::Field(format!("wire `{s}`")));
    }
    Ok(Wire {
        space: Space::new(name),
        dual,
    })
}

fn wire_type_from(v: &Value, name: &str) -> Result<WireType, JsonError> {
    let items = array_field(v, name)?;
    items
        .iter()
        .map(|w| w.as_str().ok_or_else(|| JsonError::Field(name.to_string())).and_then(parse_wire))
        .collect::<Result<Vec<_>, _>>()
        .map(WireType)
}

fn parse_end(s: &str) -> Result<End, JsonError> {
    let bad = || JsonError::Field(format!("endpoint `{s}`"));
    if let Some(i) = s.strip_prefix("in") {
        return i.parse().map(End::Input).map_err(|_| bad());
    }
    if let Some(i) = s.strip_prefix("out") {
        return i.parse().map(End::Output).map_err(|_| bad());
    }
    let rest = s.strip_prefix('n').ok_or_else(bad)?;
    let (node, leg) = rest.split_once('.').ok_or_else(bad)?;
    Ok(End::Leg {
        node: node.parse().map_err(|_| bad())?,
        leg: leg.parse().map_err(|_| bad())?,
    })
}

fn node_json(k: &NodeKind) -> Value {
    match k {
        NodeKind::Generator { name, inputs, outputs } => json!({
            "kind": "generator",
            "name": name,
            "inputs": wire_type_json(inputs),
            "outputs": wire_type_json(outputs),
        }),
        NodeKind::Cup(s) => json!({"kind": "cup", "space": s.name()}),
        NodeKind::Cap(s) => json!({"kind": "cap", "space": s.name()}),
        NodeKind::Swap(a, b) => json!({"kind": "swap", "spaces": [a.name(), b.name()]}),
        NodeKind::Spider { space, ins, outs } => json!({
            "kind": "spider",
            "space": space.name(),
            "ins": ins,
            "outs": outs,
        }),
    }
}

fn node_from(v: &Value) -> Result<NodeKind, JsonError> {
    let space = |v: &Value| str_field(v, "space").map(Space::new);
    Ok(match str_field(v, "kind")? {
        "generator" => NodeKind::Generator {
            name: str_field(v, "name")?.to_string(),
            inputs: wire_type_from(v, "inputs")?,
            outputs: wire_type_from(v, "outputs")?,
        },
        "cup" => NodeKind::Cup(space(v)?),
        "cap" => NodeKind::Cap(space(v)?),
        "swap" => {
            let s = array_field(v, "spaces")?;
            let name = |i: usize| {
                s.get(i)
                    .and_then(Value::as_str)
                    .map(Space::new)
                    .ok_or_else(|| JsonError::Field("spaces".into()))
            };
            NodeKind::Swap(name(0)?, name(1)?)
        }
        "spider" => NodeKind::Spider {
            space: space(v)?,
            ins: usize_field(v, "ins")?,
            outs: usize_field(v, "outs")?,
        },
        other => {
            return Err(JsonError::Unknown {
                what: "node kind",
                name: other.to_string(),
            })
        }
    })
}

pub fn diagram_to_json(d: &Diagram) -> Value {
    versioned(json!({
        "inputs": wire_type_json(&d.inputs),
        "outputs": wire_type_json(&d.outputs),
        "nodes": d.nodes.iter().map(node_json).collect::<Vec<_>>(),
        "wires": d.wires.iter().map(|(a, b)| json!([a.to_string(), b.to_string()])).collect::<Vec<_>>(),
    }))
}

/// Decodes and checks a diagram.
pub fn diagram_from_json(v: &Value) -> Result<Diagram, JsonError> {
    check_version(v)?;
    let nodes = array_field(v, "nodes")?
        .iter()
        .map(node_from)
        .collect::<Result<Vec<_>, _>>()?;
    let mut wires = Vec::new();
    for w in array_field(v, "wires")? {
        let pair = w.as_array().filter(|p| p.len() == 2).ok_or_else(|| JsonError::Field("wires".into()))?;
        let end = |x: &Value| x.as_str().ok_or_else(|| JsonError::Field("wires".into())).and_then(parse_end);
        wires.push((end(&pair[0])?, end(&pair[1])?));
    }
    let d = Diagram {
        inputs: wire_type_from(v, "inputs")?,
        outputs: wire_type_from(v, "outputs")?,
        nodes,
        wires,
    };
    d.check()?;
    Ok(d)
}

// ----------------------------------------------------------- axiom linking

pub fn linking_to_json(l: &AxiomLinking) -> Value {
    versioned(json!({
        "occurrences": l.occurrences.iter().map(|o| json!({
            "index": o.index,
            "atom": o.atom.name(),
            "polarity": match o.polarity { Polarity::Positive => "+", Polarity::Negative => "-" },
        })).collect::<Vec<_>>(),
        "links": l.links.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
    }))
}

// ----------------------------------------------------------------- tensors

pub fn tensor_to_json(t: &Tensor) -> Value {
    json!({
        "shape": t.shape.iter().map(|(s, d)| json!([s, d])).collect::<Vec<_>>(),
        "data": t.data,
    })
}

pub fn tensor_from_json(v: &Value) -> Result<Tensor, JsonError> {
    let mut shape = Vec::new();
    for s in array_field(v, "shape")? {
        let pair = s.as_array().filter(|p| p.len() == 2).ok_or_else(|| JsonError::Field("shape".into()))?;
        let name = pair[0].as_str().ok_or_else(|| JsonError::Field("shape".into()))?;
        let dim = pair[1].as_u64().ok_or_else(|| JsonError::Field("shape".into()))?;
        shape.push((name.to_string(), dim as usize));
    }
    let data = array_field(v, "data")?
        .iter()
        .map(|x| x.as_f64().ok_or_else(|| JsonError::Field("data".into())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Tensor::new(shape, data)?)
}

/// `{schema_version, dims, seed, tensors: {name: {shape, data}}}`.
pub fn store_to_json(s: &TensorStore) -> Value {
    let tensors: Map<String, Value> = s.tensors.iter().map(|(k, t)| (k.clone(), tensor_to_json(t))).collect();
    versioned(json!({
        "dims": s.dims,
        "seed": s.seed,
        "tensors": tensors,
    }))
}

/// Decodes a store. The result does not generate missing tensors.
pub fn store_from_json(v: &Value) -> Result<TensorStore, JsonError> {
    check_version(v)?;
    let mut dims = BTreeMap::new();
    let d = field(v, "dims")?.as_object().ok_or_else(|| JsonError::Field("dims".into()))?;
    for (k, x) in d {
        let n = x.as_u64().ok_or_else(|| JsonError::Field(format!("dims.{k}")))?;
        dims.insert(k.clone(), n as usize);
    }
    let seed = match v.get("seed") {
        Some(x) => x.as_u64().ok_or_else(|| JsonError::Field("seed".into()))?,
        None => 0,
    };
    let mut tensors = BTreeMap::new();
    if let Some(t) = v.get("tensors") {
        let t = t.as_object().ok_or_else(|| JsonError::Field("tensors".into()))?;
        for (k, x) in t {
            tensors.insert(k.clone(), tensor_from_json(x)?);
        }
    }
    Ok(TensorStore {
        dims,
        seed,
        tensors,
        generate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use frobgap_core::prover::Arrow;
    use frobgap_core::{prove, SearchConfig};

    fn atoms() -> BTreeSet<String> {
        ["np", "s", "n"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn proof_round_trip() {
        let a = atoms();
        let goal = Arrow::new(
            parse_formula("np*((np\\s)/np*<x>[x]np)", &a).unwrap(),
            parse_formula("s", &a).unwrap(),
        );
        let out = prove(&goal, &SearchConfig::default()).unwrap();
        let p = &out.proofs[0];
        let v = proof_to_json(p);
        assert_eq!(v["target"], "s");
        assert_eq!(&proof_from_json(&v, &a).unwrap(), p);
    }

    #[test]
    fn proof_with_wrong_endpoints_is_rejected() {
        let v = json!({"rule": "ev_over", "children": [], "source": "s/np*np", "target": "np"});
        assert!(matches!(proof_from_json(&v, &atoms()), Err(JsonError::Shape { .. })));
    }

    #[test]
    fn diagram_round_trip() {
        let n = Space::new("N");
        let d = Diagram::spider(&n, 2, 1)
            .tensor(&Diagram::cup(&Wire::plain(Space::new("S"))))
            .tensor(&Diagram::generator(
                "f",
                WireType(vec![Wire::plain(n.clone())]),
                WireType(vec![Wire::plain(n.clone()).dual()]),
            ));
        let v = diagram_to_json(&d);
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
        assert_eq!(diagram_from_json(&v).unwrap(), d);
    }

    #[test]
    fn store_round_trip() {
        let mut s = TensorStore::seeded(&[("N", 2), ("S", 3)], 9);
        let t = s.random("x", vec![("N".into(), 2), ("S".into(), 3)]);
        s.tensors.insert("x".into(), t);
        s.generate = false;
        let text = serde_json::to_string(&store_to_json(&s)).unwrap();
        let back = store_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn version_is_checked() {
        let v = json!({"schema_version": 99, "dims": {}});
        assert!(matches!(store_from_json(&v), Err(JsonError::Version(99))));
    }
}
