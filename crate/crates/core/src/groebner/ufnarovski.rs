//! Ufnarovski graph of a finite set of leading words and the resulting growth classification.

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde::Serialize;

use super::GroebnerBasis;
use crate::error::{Error, Result};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Growth {
    /// Polynomial growth with the given Gelfand–Kirillov dimension (0 = finite dimensional).
    Polynomial { gk_dimension: usize },
    Exponential,
}

#[derive(Clone, Debug)]
pub struct UfnarovskiGraph {
    pub vertices: Vec<Word>,
    pub edges: Vec<(usize, usize)>,
}

pub fn ufnarovski_growth(gb: &GroebnerBasis) -> Result<(Growth, UfnarovskiGraph)> {
    if !gb.is_complete() {
        return Err(Error::Inconclusive(format!(
            "basis certified only through degree {}; growth needs a complete basis",
            gb.certified_degree()
        )));
    }
    if gb.weights().iter().any(|&w| w != 1) {
        return Err(Error::Unsupported("growth analysis requires all generator weights 1".into()));
    }
    let n = gb.n();
    let ell = gb.reducer().rules.iter().map(|r| r.lead.len()).max().unwrap_or(1);
    let verts = gb.ranked_normal_words(ell as u32 - 1);
    let index: std::collections::HashMap<&[u16], usize> =
        verts.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
    let mut graph: DiGraph<(), ()> = DiGraph::new();
    let nodes: Vec<NodeIndex> = verts.iter().map(|_| graph.add_node(())).collect();
    let mut edges = Vec::new();
    let red = gb.reducer();
    for (i, v) in verts.iter().enumerate() {
        for a in 0..n as u16 {
            let mut w = v.clone();
            w.push(a);
            if !red.is_normal(&w) {
                continue;
            }
            let j = index[&w[1..]];
            graph.add_edge(nodes[i], nodes[j], ());
            edges.push((i, j));
        }
    }
    let sccs = tarjan_scc(&graph);
    let mut comp = vec![0usize; verts.len()];
    for (c, s) in sccs.iter().enumerate() {
        for v in s {
            comp[v.index()] = c;
        }
    }
    let mut internal = vec![0usize; sccs.len()];
    for &(i, j) in &edges {
        if comp[i] == comp[j] {
            internal[comp[i]] += 1;
        }
    }
    if sccs.iter().enumerate().any(|(c, s)| internal[c] > s.len()) {
        return Ok((Growth::Exponential, graph_out(gb, verts, edges)));
    }
    // tarjan_scc yields components in reverse topological order: successors first
    let mut best = vec![0usize; sccs.len()];
    for c in 0..sccs.len() {
        let mut m = 0;
        for &(i, j) in &edges {
            if comp[i] == c && comp[j] != c {
                m = m.max(best[comp[j]]);
            }
        }
        best[c] = m + usize::from(internal[c] > 0);
    }
    let gk = best.into_iter().max().unwrap_or(0);
    Ok((Growth::Polynomial { gk_dimension: gk }, graph_out(gb, verts, edges)))
}

fn graph_out(gb: &GroebnerBasis, verts: Vec<Vec<u16>>, edges: Vec<(usize, usize)>) -> UfnarovskiGraph {
    UfnarovskiGraph {
        vertices: verts.into_iter().map(|v| gb.order().from_ranked(&Word(v))).collect(),
        edges,
    }
}
