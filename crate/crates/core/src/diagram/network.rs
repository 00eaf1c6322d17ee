//! A small text format for authoring lexical networks.
//!
//! ```text
//! out h:N* o:N g:N s:S*     # boundary outputs, in order
//! in x:N                    # boundary inputs (optional)
//! spider N h o g            # all legs outputs
//! spider N a -> b c         # inputs before the arrow
//! spider S s
//! cup N a b
//! cap N a b
//! swap N S a b -> c d
//! gen rejected -> x:N* y:S z:N*
//! ```
//!
//! Every name is one wire and must occur exactly twice.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use super::{Diagram, End, NodeKind, Space, Wire, WireType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("wire `{name}` occurs {count} times (line {line}); every wire needs exactly two ends")]
    Occurrences { name: String, count: usize, line: usize },
    #[error("wire `{name}` joins {a} to {b} (line {line})")]
    SpaceMismatch {
        name: String,
        a: String,
        b: String,
        line: usize,
    },
}

fn syntax(line: usize, msg: impl Into<String>) -> NetworkError {
    NetworkError::Syntax { line, msg: msg.into() }
}

fn parse_typed(line: usize, tok: &str) -> Result<(String, Wire), NetworkError> {
    let (name, ty) = tok
        .split_once(':')
        .ok_or_else(|| syntax(line, alloc::format!("expected name:Space, found `{tok}`")))?;
    let (space, dual) = match ty.strip_suffix('*') {
        Some(s) => (s, true),
        None => (ty, false),
    };
    if name.is_empty() || space.is_empty() {
        return Err(syntax(line, alloc::format!("malformed port `{tok}`")));
    }
    Ok((name.to_string(), Wire { space: Space::new(space), dual }))
}

fn split_arrow<'a>(toks: &[&'a str]) -> (Vec<&'a str>, Vec<&'a str>, bool) {
    match toks.iter().position(|t| *t == "->") {
        Some(i) => (toks[..i].to_vec(), toks[i + 1..].to_vec(), true),
        None => (Vec::new(), toks.to_vec(), false),
    }
}

/// Builds the diagram described by `text`.
pub fn frobenius_network(text: &str) -> Result<Diagram, NetworkError> {
    let mut d = Diagram::empty();
    // wire name -> (end, space, line)
    let mut ends: BTreeMap<String, Vec<(End, Space, usize)>> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    let mut note = |name: &str, e: End, s: Space, line: usize, ends: &mut BTreeMap<String, Vec<(End, Space, usize)>>| {
        if !ends.contains_key(name) {
            order.push(name.to_string());
        }
        ends.entry(name.to_string()).or_default().push((e, s, line));
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        let (head, rest) = (toks[0], &toks[1..]);
        match head {
            "out" | "in" => {
                for tok in rest {
                    let (name, w) = parse_typed(line, tok)?;
                    let e = if head == "out" {
                        d.outputs.0.push(w.clone());
                        End::Output(d.outputs.len() - 1)
                    } else {
                        d.inputs.0.push(w.clone());
                        End::Input(d.inputs.len() - 1)
                    };
                    note(&name, e, w.space, line, &mut ends);
                }
            }
            "spider" | "cup" | "cap" => {
                let space = Space::new(rest.first().ok_or_else(|| syntax(line, "missing space"))?);
                let (ins, outs, _) = split_arrow(&rest[1..]);
                let (ins, outs) = match head {
                    "spider" => (ins, outs),
                    "cup" if ins.is_empty() && outs.len() == 2 => (outs, Vec::new()),
                    "cap" if ins.is_empty() && outs.len() == 2 => (Vec::new(), outs),
                    _ => return Err(syntax(line, alloc::format!("`{head}` takes exactly two wires"))),
                };
                let kind = match head {
                    "spider" => NodeKind::spider(space.clone(), ins.len(), outs.len()),
                    "cup" => NodeKind::Cup(space.clone()),
                    _ => NodeKind::Cap(space.clone()),
                };
                let node = d.nodes.len();
                d.nodes.push(kind);
                for (leg, name) in ins.iter().chain(outs.iter()).enumerate() {
                    note(name, End::Leg { node, leg }, space.clone(), line, &mut ends);
                }
            }
            "swap" => {
                if rest.len() != 7 || rest[4] != "->" {
                    return Err(syntax(line, "expected `swap A B a b -> c d`"));
                }
                let (sa, sb) = (Space::new(rest[0]), Space::new(rest[1]));
                let node = d.nodes.len();
                d.nodes.push(NodeKind::Swap(sa.clone(), sb.clone()));
                let legs = [(rest[2], &sa), (rest[3], &sb), (rest[5], &sb), (rest[6], &sa)];
                for (leg, (name, s)) in legs.iter().enumerate() {
                    note(name, End::Leg { node, leg }, (*s).clone(), line, &mut ends);
                }
            }
            "gen" => {
                let name = rest.first().ok_or_else(|| syntax(line, "missing generator name"))?;
                let (ins, outs, _) = split_arrow(&rest[1..]);
                let mut inputs = WireType::empty();
                let mut outputs = WireType::empty();
                let mut legs = Vec::new();
                for tok in &ins {
                    let (n, w) = parse_typed(line, tok)?;
                    inputs.0.push(w.clone());
                    legs.push((n, w.space));
                }
                for tok in &outs {
                    let (n, w) = parse_typed(line, tok)?;
                    outputs.0.push(w.clone());
                    legs.push((n, w.space));
                }
                let node = d.nodes.len();
                d.nodes.push(NodeKind::Generator {
                    name: name.to_string(),
                    inputs,
                    outputs,
                });
                for (leg, (n, s)) in legs.into_iter().enumerate() {
                    note(&n, End::Leg { node, leg }, s, line, &mut ends);
                }
            }
            other => return Err(syntax(line, alloc::format!("unknown statement `{other}`"))),
        }
    }
    for name in order {
        let occ = &ends[&name];
        if occ.len() != 2 {
            return Err(NetworkError::Occurrences {
                name,
                count: occ.len(),
                line: occ[occ.len() - 1].2,
            });
        }
        if occ[0].1 != occ[1].1 {
            return Err(NetworkError::SpaceMismatch {
                name,
                a: occ[0].1.to_string(),
                b: occ[1].1.to_string(),
                line: occ[1].2,
            });
        }
        d.wires.push((occ[0].0, occ[1].0));
    }
    debug_assert!(d.check().is_ok());
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn that_network_boundary() {
        let d = frobenius_network("out h:N* o:N g:N s:S*\nspider N h o g\nspider S s\n").unwrap();
        assert_eq!(alloc::format!("{}", d.outputs), "(N*, N, N, S*)");
        assert_eq!(d.nodes.len(), 2);
        assert!(d.check().is_ok());
    }

    #[test]
    fn single_spider_is_wire_like() {
        let d = frobenius_network("in a:N\nout b:N\nspider N a -> b").unwrap();
        let nf = super::super::normalize(&d);
        assert!(nf.nodes.is_empty());
    }

    #[test]
    fn errors_carry_lines() {
        let err = frobenius_network("out a:N\nspider N a b").unwrap_err();
        assert!(matches!(err, NetworkError::Occurrences { ref name, count: 1, line: 2 } if name == "b"));
        let err = frobenius_network("out a:N\nspider S a").unwrap_err();
        assert!(matches!(err, NetworkError::SpaceMismatch { line: 2, .. }));
        let err = frobenius_network("frob N a").unwrap_err();
        assert!(matches!(err, NetworkError::Syntax { line: 1, .. }));
    }
}
