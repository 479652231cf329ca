//! Flow combinatorics between fixed points: the directed relation alpha -> beta
//! ("something flows out of alpha and into beta"), cycle detection, and the
//! canonical layer filtration. A dataset is filterable exactly when the flow
//! digraph has no directed cycle.

use crate::fixed_point::FixedPointDataset;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowDigraph {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl FlowDigraph {
    pub fn new(vertices: Vec<String>, edges: Vec<(String, String)>) -> Result<Self> {
        let g = FlowDigraph { vertices, edges };
        g.validate()?;
        Ok(g)
    }

    pub fn from_dataset(ds: &FixedPointDataset) -> Self {
        FlowDigraph {
            vertices: ds.points.iter().map(|p| p.id.clone()).collect(),
            edges: ds.edges.clone().unwrap_or_default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(v.as_str()) {
                return Err(Error::BadInput(format!("duplicate vertex id {v:?}")));
            }
        }
        for (a, b) in &self.edges {
            for v in [a, b] {
                if !seen.contains(v.as_str()) {
                    return Err(Error::UnknownVertex { id: v.clone() });
                }
            }
        }
        Ok(())
    }

    pub fn reverse(&self) -> FlowDigraph {
        FlowDigraph {
            vertices: self.vertices.clone(),
            edges: self.edges.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        }
    }

    // successors in edge insertion order, for deterministic traversal
    fn successors(&self) -> BTreeMap<&str, Vec<&str>> {
        let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for v in &self.vertices {
            adj.entry(v.as_str()).or_default();
        }
        for (a, b) in &self.edges {
            adj.get_mut(a.as_str()).expect("validated edge").push(b.as_str());
        }
        adj
    }
}

/// Find a directed cycle, reported in flow order (last vertex flows back to
/// the first). Returns None iff the flow relation is a partial order.
pub fn detect_quasicycle(g: &FlowDigraph) -> Option<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let adj = g.successors();
    let mut mark: BTreeMap<&str, Mark> = g.vertices.iter().map(|v| (v.as_str(), Mark::New)).collect();
    let mut stack: Vec<&str> = Vec::new();

    fn visit<'a>(
        v: &'a str,
        adj: &BTreeMap<&'a str, Vec<&'a str>>,
        mark: &mut BTreeMap<&'a str, Mark>,
        stack: &mut Vec<&'a str>,
    ) -> Option<Vec<String>> {
        mark.insert(v, Mark::Active);
        stack.push(v);
        for &next in &adj[v] {
            match mark[next] {
                Mark::Done => {}
                Mark::Active => {
                    let start = stack.iter().position(|&s| s == next).expect("on stack");
                    return Some(stack[start..].iter().map(|s| s.to_string()).collect());
                }
                Mark::New => {
                    if let Some(cycle) = visit(next, adj, mark, stack) {
                        return Some(cycle);
                    }
                }
            }
        }
        stack.pop();
        mark.insert(v, Mark::Done);
        None
    }

    for v in &g.vertices {
        if mark[v.as_str()] == Mark::New {
            if let Some(cycle) = visit(v.as_str(), &adj, &mut mark, &mut stack) {
                return Some(cycle);
            }
        }
    }
    None
}

/// Antichain layers F_0..F_m with the layer index strictly increasing along
/// every edge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Filtration {
    pub layers: Vec<Vec<String>>,
}

impl Filtration {
    /// Top layer index m (layers run F_0..F_m).
    pub fn top(&self) -> usize {
        self.layers.len().saturating_sub(1)
    }

    pub fn layer_of(&self, id: &str) -> Option<usize> {
        self.layers
            .iter()
            .position(|layer| layer.iter().any(|v| v == id))
    }

    /// Check the defining invariants against a digraph: the layers partition
    /// its vertices and every edge climbs strictly.
    pub fn validate_against(&self, g: &FlowDigraph) -> Result<()> {
        let mut level: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, layer) in self.layers.iter().enumerate() {
            for v in layer {
                if level.insert(v.as_str(), i).is_some() {
                    return Err(Error::FiltrationMismatch {
                        detail: format!("vertex {v:?} appears in two layers"),
                    });
                }
            }
        }
        for v in &g.vertices {
            if !level.contains_key(v.as_str()) {
                return Err(Error::FiltrationMismatch {
                    detail: format!("vertex {v:?} missing from the filtration"),
                });
            }
        }
        if level.len() != g.vertices.len() {
            return Err(Error::FiltrationMismatch {
                detail: "filtration names vertices outside the digraph".into(),
            });
        }
        for (a, b) in &g.edges {
            if level[a.as_str()] >= level[b.as_str()] {
                return Err(Error::FiltrationMismatch {
                    detail: format!("edge {a:?} -> {b:?} does not climb strictly"),
                });
            }
        }
        Ok(())
    }
}

/// Layer every vertex at the length of the longest directed path ending
/// there. This is the minimal filtration; edge-free vertices land in F_0.
pub fn build_filtration(g: &FlowDigraph) -> Result<Filtration> {
    if let Some(cycle) = detect_quasicycle(g) {
        return Err(Error::Quasicycle { cycle });
    }
    let adj = g.successors();
    // depths via reverse topological recursion, memoized
    fn depth<'a>(
        v: &'a str,
        preds: &BTreeMap<&'a str, Vec<&'a str>>,
        memo: &mut BTreeMap<&'a str, usize>,
    ) -> usize {
        if let Some(&d) = memo.get(v) {
            return d;
        }
        let d = preds[v]
            .iter()
            .map(|&p| depth(p, preds, memo) + 1)
            .max()
            .unwrap_or(0);
        memo.insert(v, d);
        d
    }
    let mut preds: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for v in &g.vertices {
        preds.entry(v.as_str()).or_default();
    }
    for (a, adjs) in &adj {
        for &b in adjs {
            preds.get_mut(b).expect("validated edge").push(a);
        }
    }
    let mut memo = BTreeMap::new();
    let mut layers: Vec<Vec<String>> = Vec::new();
    for v in &g.vertices {
        let d = depth(v.as_str(), &preds, &mut memo);
        if layers.len() <= d {
            layers.resize(d + 1, Vec::new());
        }
        layers[d].push(v.clone());
    }
    let filt = Filtration { layers };
    debug_assert!(filt.validate_against(g).is_ok());
    Ok(filt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::p2_dataset;

    fn graph(vertices: &[&str], edges: &[(&str, &str)]) -> FlowDigraph {
        FlowDigraph::new(
            vertices.iter().map(|s| s.to_string()).collect(),
            edges
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        )
        .unwrap()
    }

    fn assert_is_cycle(g: &FlowDigraph, cycle: &[String]) {
        assert!(!cycle.is_empty());
        for i in 0..cycle.len() {
            let a = &cycle[i];
            let b = &cycle[(i + 1) % cycle.len()];
            assert!(
                g.edges.iter().any(|(x, y)| x == a && y == b),
                "missing edge {a} -> {b}"
            );
        }
    }

    #[test]
    fn three_cycle_detected() {
        let g = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]);
        let cycle = detect_quasicycle(&g).unwrap();
        assert_eq!(cycle.len(), 3);
        assert_is_cycle(&g, &cycle);
        assert!(matches!(
            build_filtration(&g),
            Err(Error::Quasicycle { .. })
        ));
    }

    #[test]
    fn p2_flow_is_filterable() {
        let g = FlowDigraph::from_dataset(&p2_dataset(0));
        assert_eq!(detect_quasicycle(&g), None);
        let filt = build_filtration(&g).unwrap();
        assert_eq!(
            filt.layers,
            vec![vec!["p2".to_string()], vec!["p1".to_string()], vec!["p0".to_string()]]
        );
        assert_eq!(filt.top(), 2);
        assert_eq!(filt.layer_of("p1"), Some(1));
    }

    #[test]
    fn diamond_layers() {
        let g = graph(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
        );
        let filt = build_filtration(&g).unwrap();
        assert_eq!(
            filt.layers,
            vec![
                vec!["a".to_string()],
                vec!["b".to_string(), "c".to_string()],
                vec!["d".to_string()]
            ]
        );
    }

    #[test]
    fn six_cycle_among_acyclic_satellites() {
        // 22 vertices: a 6-cycle c0..c5 fed by 16 acyclic satellites
        let mut vertices: Vec<String> = (0..6).map(|i| format!("c{i}")).collect();
        vertices.extend((0..16).map(|i| format!("x{i}")));
        let mut edges: Vec<(String, String)> =
            (0..6).map(|i| (format!("c{i}"), format!("c{}", (i + 1) % 6))).collect();
        edges.extend((0..16).map(|i| (format!("x{i}"), format!("c{}", i % 6))));
        let g = FlowDigraph::new(vertices, edges).unwrap();
        let cycle = detect_quasicycle(&g).unwrap();
        assert_eq!(cycle.len(), 6);
        assert!(cycle.iter().all(|v| v.starts_with('c')));
        assert_is_cycle(&g, &cycle);
        assert!(build_filtration(&g).is_err());
    }

    #[test]
    fn edge_free_vertices_sit_in_layer_zero() {
        let g = graph(&["u", "v", "w"], &[("u", "v")]);
        let filt = build_filtration(&g).unwrap();
        assert_eq!(filt.layer_of("w"), Some(0));
        assert_eq!(filt.layer_of("u"), Some(0));
        assert_eq!(filt.layer_of("v"), Some(1));
    }

    #[test]
    fn reversal_mirrors_layers() {
        let g = FlowDigraph::from_dataset(&p2_dataset(0));
        let rev = g.reverse();
        let filt = build_filtration(&rev).unwrap();
        filt.validate_against(&rev).unwrap();
        assert_eq!(
            filt.layers,
            vec![vec!["p0".to_string()], vec!["p1".to_string()], vec!["p2".to_string()]]
        );
    }

    #[test]
    fn validate_rejects_flat_edges() {
        let g = graph(&["a", "b"], &[("a", "b")]);
        let bad = Filtration {
            layers: vec![vec!["a".to_string(), "b".to_string()]],
        };
        assert!(matches!(
            bad.validate_against(&g),
            Err(Error::FiltrationMismatch { .. })
        ));
    }

    #[test]
    fn edges_must_reference_vertices() {
        assert!(matches!(
            FlowDigraph::new(vec!["a".into()], vec![("a".into(), "zz".into())]),
            Err(Error::UnknownVertex { .. })
        ));
    }

    #[test]
    fn digraph_json_round_trip() {
        let g = graph(&["a", "b"], &[("a", "b")]);
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, r#"{"vertices":["a","b"],"edges":[["a","b"]]}"#);
        let back: FlowDigraph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
    }
}
