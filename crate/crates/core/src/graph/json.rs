use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{WeightedGraph, MAX_VERTICES};
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational};
use crate::{RatGraph, Rational};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexDoc {
    id: i64,
    r: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    u: i64,
    v: i64,
    lambda: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FullDoc {
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UnitDoc {
    unit: bool,
    n: i64,
    edges: Vec<(i64, i64)>,
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Parses either the full schema
/// `{"vertices":[{"id":1,"r":"0"}],"edges":[{"u":1,"v":2,"lambda":"-1"}]}`
/// or the unit shorthand `{"unit":true,"n":3,"edges":[[1,2],[2,3]]}`.
pub fn parse_graph(text: &str) -> Result<RatGraph> {
    let value: Value = serde_json::from_str(text).map_err(|e| parse_err(format!("malformed JSON: {e}")))?;
    if value.get("unit").is_some() {
        let doc: UnitDoc =
            serde_json::from_value(value).map_err(|e| parse_err(format!("unit graph: {e}")))?;
        if !doc.unit {
            return Err(parse_err("\"unit\" must be true when present"));
        }
        let n = check_count(doc.n)?;
        let offsets = vec![Rational::zero(); n];
        let edges = doc
            .edges
            .iter()
            .map(|&(u, v)| Ok((index(u, n)?, index(v, n)?, -Rational::from_integer(1.into()))))
            .collect::<Result<Vec<_>>>()?;
        build(offsets, edges)
    } else {
        let doc: FullDoc = serde_json::from_value(value).map_err(|e| parse_err(format!("graph: {e}")))?;
        let n = check_count(doc.vertices.len() as i64)?;
        let mut offsets = vec![None; n];
        for vd in &doc.vertices {
            let v = index(vd.id, n)?;
            if offsets[v].is_some() {
                return Err(parse_err(format!("duplicate vertex id {}", vd.id)));
            }
            offsets[v] = Some(parse_rational(&vd.r)?);
        }
        let offsets: Vec<Rational> = offsets.into_iter().map(|o| o.expect("ids are a permutation")).collect();
        let edges = doc
            .edges
            .iter()
            .map(|e| Ok((index(e.u, n)?, index(e.v, n)?, parse_rational(&e.lambda)?)))
            .collect::<Result<Vec<_>>>()?;
        build(offsets, edges)
    }
}

fn check_count(n: i64) -> Result<usize> {
    if n < 0 || n as usize > MAX_VERTICES {
        return Err(parse_err(format!("vertex count {n} outside 0..={MAX_VERTICES}")));
    }
    Ok(n as usize)
}

fn index(id: i64, n: usize) -> Result<usize> {
    if id < 1 || id as usize > n {
        return Err(parse_err(format!("vertex id {id} out of range 1..={n}")));
    }
    Ok(id as usize - 1)
}

fn build(offsets: Vec<Rational>, edges: Vec<(usize, usize, Rational)>) -> Result<RatGraph> {
    let mut seen = BTreeSet::new();
    for (u, v, w) in &edges {
        if u == v {
            return Err(parse_err(format!("self-loop at vertex {}", u + 1)));
        }
        if w.is_positive() {
            return Err(parse_err(format!("edge {}-{}: edge weight must be non-positive", u + 1, v + 1)));
        }
        if !seen.insert((*u.min(v), *u.max(v))) {
            return Err(parse_err(format!("duplicate edge {}-{}", u + 1, v + 1)));
        }
    }
    let nonzero: Vec<_> = edges.into_iter().filter(|(_, _, w)| !w.is_zero()).collect();
    WeightedGraph::from_edges(offsets, &nonzero).map_err(|e| parse_err(e.to_string()))
}

/// Full-schema JSON of the live subgraph, ids renumbered `1..` in order of
/// the live vertices. Unit graphs use the shorthand.
pub fn to_json(g: &RatGraph) -> Value {
    let live: Vec<usize> = g.vertices().iter().collect();
    let id = |v: usize| live.iter().position(|&x| x == v).expect("live vertex") as i64 + 1;
    if g.order() > 0 && g.is_unit() {
        let doc = UnitDoc {
            unit: true,
            n: live.len() as i64,
            edges: g.edges().map(|(u, v, _)| (id(u), id(v))).collect(),
        };
        return serde_json::to_value(doc).expect("serializable");
    }
    let doc = FullDoc {
        vertices: live
            .iter()
            .map(|&v| VertexDoc { id: id(v), r: format_rational(g.offset(v)) })
            .collect(),
        edges: g
            .edges()
            .map(|(u, v, w)| EdgeDoc { u: id(u), v: id(v), lambda: format_rational(w) })
            .collect(),
    };
    serde_json::to_value(doc).expect("serializable")
}

pub fn to_json_string(g: &RatGraph) -> String {
    serde_json::to_string(&to_json(g)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_schema() {
        let g = parse_graph(r#"{"vertices":[{"id":1,"r":"0"},{"id":2,"r":"0"}],"edges":[{"u":1,"v":2,"lambda":"-1"}]}"#)
            .unwrap();
        assert_eq!(g.order(), 2);
        assert!(g.adjacent(0, 1));
        assert!(g.is_unit());
    }

    #[test]
    fn rejects_positive_weight() {
        let err = parse_graph(r#"{"vertices":[{"id":1,"r":"0"},{"id":2,"r":"0"}],"edges":[{"u":1,"v":2,"lambda":"1"}]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("edge weight must be non-positive"), "{err}");
    }

    #[test]
    fn empty_edge_list() {
        let g = parse_graph(r#"{"vertices":[{"id":1,"r":"1/2"},{"id":2,"r":"-3"}],"edges":[]}"#).unwrap();
        assert_eq!(g.edges().count(), 0);
        assert_eq!(g.offset(0), &Rational::new(1.into(), 2.into()));
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(parse_graph("{").is_err());
        assert!(parse_graph(r#"{"vertices":[{"id":1,"r":"0"}],"edges":[{"u":1,"v":3,"lambda":"-1"}]}"#).is_err());
        assert!(parse_graph(r#"{"unit":true,"n":3,"edges":[[1,2],[2,1]]}"#).is_err());
        assert!(parse_graph(r#"{"unit":true,"n":3,"edges":[[1,1]]}"#).is_err());
        assert!(parse_graph(r#"{"vertices":[{"id":1,"r":"0"},{"id":1,"r":"0"}],"edges":[]}"#).is_err());
        assert!(parse_graph(r#"{"vertices":[{"id":1,"r":"x"}],"edges":[]}"#).is_err());
    }

    #[test]
    fn unit_shorthand_round_trip() {
        let g = parse_graph(r#"{"unit":true,"n":3,"edges":[[1,2],[2,3]]}"#).unwrap();
        assert_eq!(parse_graph(&to_json_string(&g)).unwrap(), g);
        assert!(to_json_string(&g).contains("\"unit\":true"));
    }
}
