//! The network (G, S, ρ): a DAG with ordered sources and a single sink.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Field;

/// On-disk network description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSpec {
    pub nodes: Vec<String>,
    pub sources: Vec<String>,
    pub sink: String,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub id: String,
    pub tail: String,
    pub head: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

/// A validated network. Edges are referred to by their input index.
///
/// A reversed network keeps the same `sources` and `sink` but every edge is
/// flipped, so the sink becomes the only node without in-edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    nodes: Vec<String>,
    node_index: HashMap<String, usize>,
    edges: Vec<Edge>,
    edge_index: HashMap<String, usize>,
    sources: Vec<usize>,
    sink: usize,
    order: Vec<usize>,
    position: Vec<usize>,
    in_edges: Vec<Vec<usize>>,
    out_edges: Vec<Vec<usize>>,
    reversed: bool,
}

/// Sorted, duplicate-free set of edge indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeSet(Vec<usize>);

impl EdgeSet {
    pub fn new(mut edges: Vec<usize>) -> EdgeSet {
        edges.sort_unstable();
        edges.dedup();
        EdgeSet(edges)
    }

    pub fn empty() -> EdgeSet {
        EdgeSet(Vec::new())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.0.binary_search(&e).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn mask(&self, n_edges: usize) -> Vec<bool> {
        let mut m = vec![false; n_edges];
        for &e in &self.0 {
            m[e] = true;
        }
        m
    }
}

impl FromIterator<usize> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> EdgeSet {
        EdgeSet::new(iter.into_iter().collect())
    }
}

/// The three source subsets attached to an edge set C, as source positions
/// (indices into [`Network::sources`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachSets {
    pub d: Vec<usize>,
    pub i: Vec<usize>,
    pub j: Vec<usize>,
}

impl Network {
    pub fn from_json(text: &str) -> Result<Network> {
        let spec: NetworkSpec =
            serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))?;
        Network::from_spec(&spec)
    }

    pub fn from_spec(spec: &NetworkSpec) -> Result<Network> {
        let mut node_index = HashMap::new();
        for (i, n) in spec.nodes.iter().enumerate() {
            if node_index.insert(n.clone(), i).is_some() {
                return Err(Error::MalformedInput(format!("duplicate node {n:?}")));
            }
        }
        let lookup = |name: &str| {
            node_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::MalformedInput(format!("undeclared node {name:?}")))
        };
        let mut edges = Vec::with_capacity(spec.edges.len());
        let mut edge_index = HashMap::new();
        for (i, e) in spec.edges.iter().enumerate() {
            if edge_index.insert(e.id.clone(), i).is_some() {
                return Err(Error::MalformedInput(format!("duplicate edge {:?}", e.id)));
            }
            let (tail, head) = (lookup(&e.tail)?, lookup(&e.head)?);
            if tail == head {
                return Err(Error::Cycle);
            }
            edges.push(Edge { id: e.id.clone(), tail, head });
        }
        if spec.sources.is_empty() {
            return Err(Error::MalformedInput("no source nodes".into()));
        }
        let mut sources = Vec::with_capacity(spec.sources.len());
        for s in &spec.sources {
            let idx = lookup(s)?;
            if sources.contains(&idx) {
                return Err(Error::MalformedInput(format!("duplicate source {s:?}")));
            }
            sources.push(idx);
        }
        let sink = lookup(&spec.sink)?;
        if sources.contains(&sink) {
            return Err(Error::MalformedInput("sink is also a source".into()));
        }

        let n = spec.nodes.len();
        let mut in_edges = vec![Vec::new(); n];
        let mut out_edges = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            out_edges[e.tail].push(i);
            in_edges[e.head].push(i);
        }
        for &s in &sources {
            if !in_edges[s].is_empty() {
                return Err(Error::SourceHasInEdge(spec.nodes[s].clone()));
            }
        }
        if !out_edges[sink].is_empty() {
            return Err(Error::SinkHasOutEdge(spec.nodes[sink].clone()));
        }
        let order = topo_order(&edges, &sources, &in_edges, &out_edges).ok_or(Error::Cycle)?;
        // every other node must be fed by something, otherwise edges out of
        // it would carry nothing reachable from a source
        for (v, incoming) in in_edges.iter().enumerate() {
            if v != sink && !sources.contains(&v) && incoming.is_empty() {
                return Err(Error::MalformedInput(format!(
                    "node {:?} is neither a source nor has incoming edges",
                    spec.nodes[v]
                )));
            }
        }
        let to_sink = reaches(n, sink, |e| edges[e].tail, &in_edges);
        if let Some(v) = (0..n).find(|&v| !to_sink[v]) {
            return Err(Error::UnreachableSink(spec.nodes[v].clone()));
        }

        let mut net = Network {
            nodes: spec.nodes.clone(),
            node_index,
            edges,
            edge_index,
            sources,
            sink,
            order,
            position: Vec::new(),
            in_edges,
            out_edges,
            reversed: false,
        };
        net.index_order();
        Ok(net)
    }

    fn index_order(&mut self) {
        self.position = vec![0; self.edges.len()];
        for (k, &e) in self.order.iter().enumerate() {
            self.position[e] = k;
        }
        let pos = &self.position;
        for list in self.in_edges.iter_mut().chain(self.out_edges.iter_mut()) {
            list.sort_by_key(|&e| pos[e]);
        }
    }

    /// Serializable form. For a reversed network the roles are kept as in
    /// the original, so the result does not validate.
    pub fn to_spec(&self) -> NetworkSpec {
        NetworkSpec {
            nodes: self.nodes.clone(),
            sources: self.source_names(),
            sink: self.nodes[self.sink].clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    id: e.id.clone(),
                    tail: self.nodes[e.tail].clone(),
                    head: self.nodes[e.head].clone(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_spec()).expect("network serializes")
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph network {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let shape = if self.sources.contains(&i) {
                "box"
            } else if i == self.sink {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(out, "  {n:?} [shape={shape}];");
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  {:?} -> {:?} [label={:?}];",
                self.nodes[e.tail], self.nodes[e.head], e.id
            );
        }
        out.push_str("}\n");
        out
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_name(&self, v: usize) -> &str {
        &self.nodes[v]
    }

    pub fn node_names(&self) -> &[String] {
        &self.nodes
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_name(&self, e: usize) -> &str {
        &self.edges[e].id
    }

    pub fn node(&self, name: &str) -> Result<usize> {
        self.node_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    pub fn edge_by_id(&self, id: &str) -> Result<usize> {
        self.edge_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    pub fn edge_set<S: AsRef<str>>(&self, ids: &[S]) -> Result<EdgeSet> {
        ids.iter().map(|s| self.edge_by_id(s.as_ref())).collect()
    }

    pub fn edge_names(&self, set: &EdgeSet) -> Vec<String> {
        set.iter().map(|e| self.edges[e].id.clone()).collect()
    }

    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    pub fn source_count(&self) -> usize {
        self.sources.len()
    }

    pub fn source_names(&self) -> Vec<String> {
        self.sources.iter().map(|&s| self.nodes[s].clone()).collect()
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    /// Edge indices in the topological order ≺.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Position of edge `e` in ≺.
    pub fn position(&self, e: usize) -> usize {
        self.position[e]
    }

    /// Incoming edges of `v`, sorted by ≺.
    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    /// Outgoing edges of `v`, sorted by ≺.
    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn check_edges(&self, set: &EdgeSet) -> Result<()> {
        match set.iter().find(|&e| e >= self.edges.len()) {
            Some(e) => Err(Error::UnknownEdge(format!("#{e}"))),
            None => Ok(()),
        }
    }

    /// Nodes that can reach some node of `targets` (including themselves),
    /// ignoring edges with `removed[e]` set.
    pub fn ancestors(&self, targets: &[usize], removed: &[bool]) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack: Vec<usize> = targets.to_vec();
        for &t in targets {
            seen[t] = true;
        }
        while let Some(v) = stack.pop() {
            for &e in &self.in_edges[v] {
                if removed.get(e).copied().unwrap_or(false) {
                    continue;
                }
                let u = self.edges[e].tail;
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }

    /// Nodes reachable from `starts` (including themselves), ignoring
    /// removed edges.
    pub fn descendants(&self, starts: &[usize], removed: &[bool]) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack: Vec<usize> = starts.to_vec();
        for &s in starts {
            seen[s] = true;
        }
        while let Some(v) = stack.pop() {
            for &e in &self.out_edges[v] {
                if removed.get(e).copied().unwrap_or(false) {
                    continue;
                }
                let w = self.edges[e].head;
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Source positions with a path to some edge of `c`.
    pub fn upstream_sources(&self, c: &EdgeSet) -> Vec<usize> {
        let tails: Vec<usize> = c.iter().map(|e| self.edges[e].tail).collect();
        let anc = self.ancestors(&tails, &[]);
        (0..self.sources.len()).filter(|&i| anc[self.sources[i]]).collect()
    }

    /// D_C, I_C and J_C for an edge set of the (unreversed) network.
    pub fn reach_sets(&self, c: &EdgeSet) -> Result<ReachSets> {
        self.check_edges(c)?;
        let d = self.upstream_sources(c);
        let mask = c.mask(self.edges.len());
        let alive = self.ancestors(&[self.sink], &mask);
        let i: Vec<usize> = (0..self.sources.len())
            .filter(|&k| !alive[self.sources[k]])
            .collect();
        debug_assert!(i.iter().all(|k| d.contains(k)), "I_C must be a subset of D_C");
        let j = d.iter().copied().filter(|k| !i.contains(k)).collect();
        Ok(ReachSets { d, i, j })
    }

    /// Returns `(is_cut_set, is_global_cut_set)`.
    pub fn is_cut_set(&self, c: &EdgeSet) -> Result<(bool, bool)> {
        let rs = self.reach_sets(c)?;
        Ok((!rs.i.is_empty(), rs.i.len() == self.sources.len()))
    }

    /// Flips every edge. The order ≺ is reversed, which keeps it topological.
    pub fn reverse(&self) -> Network {
        let mut net = self.clone();
        for e in net.edges.iter_mut() {
            std::mem::swap(&mut e.tail, &mut e.head);
        }
        std::mem::swap(&mut net.in_edges, &mut net.out_edges);
        net.order.reverse();
        net.reversed = !self.reversed;
        net.index_order();
        net
    }

    /// Drops sources whose coefficient is zero, so that a linear target
    /// Σ aᵢ·mᵢ becomes a plain sum over the remaining sources with inputs
    /// scaled by aᵢ. Returns the reduced network and the surviving sources
    /// with their coefficients.
    pub fn reduce_linear_to_sum(&self, field: &Field, coeffs: &[u32]) -> Result<(Network, Vec<(String, u32)>)> {
        if coeffs.len() != self.sources.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for {} sources",
                coeffs.len(),
                self.sources.len()
            )));
        }
        if let Some(&bad) = coeffs.iter().find(|&&a| !field.contains(a)) {
            return Err(Error::MalformedInput(format!("coefficient {bad} not in GF({})", field.order())));
        }
        if coeffs.iter().all(|&a| a == 0) {
            return Err(Error::AllZeroFunction);
        }
        let dropped: Vec<usize> = self
            .sources
            .iter()
            .zip(coeffs)
            .filter(|&(_, &a)| a == 0)
            .map(|(&s, _)| s)
            .collect();
        let kept: Vec<(String, u32)> = self
            .sources
            .iter()
            .zip(coeffs)
            .filter(|&(_, &a)| a != 0)
            .map(|(&s, &a)| (self.nodes[s].clone(), a))
            .collect();
        if dropped.is_empty() {
            return Ok((self.clone(), kept));
        }
        let mut spec = self.to_spec();
        let dropped_names: Vec<&str> = dropped.iter().map(|&s| self.nodes[s].as_str()).collect();
        spec.nodes.retain(|n| !dropped_names.contains(&n.as_str()));
        spec.sources.retain(|n| !dropped_names.contains(&n.as_str()));
        spec.edges.retain(|e| !dropped_names.contains(&e.tail.as_str()));
        let reduced = Network::from_spec(&spec).map_err(|e| Error::ValidationFailure(e.to_string()))?;
        Ok((reduced, kept))
    }
}

/// Nodes reachable from `start` following `next` across the lists in `adj`.
fn reaches(n: usize, start: usize, next: impl Fn(usize) -> usize, adj: &[Vec<usize>]) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &e in &adj[v] {
            let u = next(e);
            if !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen
}

/// Source out-edges first (by source, then input order), then Kahn's
/// algorithm on edges preferring the smallest input index.
fn topo_order(
    edges: &[Edge],
    sources: &[usize],
    in_edges: &[Vec<usize>],
    out_edges: &[Vec<usize>],
) -> Option<Vec<usize>> {
    let mut pending: Vec<usize> = in_edges.iter().map(Vec::len).collect();
    let mut order: Vec<usize> = sources.iter().flat_map(|&s| out_edges[s].iter().copied()).collect();
    let mut heap = BinaryHeap::new();
    let mut place = |e: usize, heap: &mut BinaryHeap<Reverse<usize>>| {
        let h = edges[e].head;
        pending[h] -= 1;
        if pending[h] == 0 {
            heap.extend(out_edges[h].iter().map(|&d| Reverse(d)));
        }
    };
    for &e in &order {
        place(e, &mut heap);
    }
    while let Some(Reverse(e)) = heap.pop() {
        order.push(e);
        place(e, &mut heap);
    }
    (order.len() == edges.len()).then_some(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn line() -> Network {
        Network::from_json(
            r#"{"nodes":["s","v","t"],"sources":["s"],"sink":"t",
                "edges":[{"id":"e1","tail":"s","head":"v"},{"id":"e2","tail":"v","head":"t"}]}"#,
        )
        .unwrap()
    }

    fn ids(net: &Network, v: &[usize]) -> Vec<String> {
        v.iter().map(|&e| net.edge_name(e).to_string()).collect()
    }

    #[test]
    fn line_order() {
        let net = line();
        assert_eq!(ids(&net, net.order()), vec!["e1", "e2"]);
    }

    #[test]
    fn fig1_shape() {
        let net = fixtures::n1();
        assert_eq!(net.source_count(), 2);
        assert_eq!(net.edge_count(), 5);
        assert_eq!(ids(&net, net.order()), vec!["e1", "e2", "e3", "e4", "e5"]);
        assert_eq!(ids(&net, net.in_edges(net.sink())), vec!["e4", "e5"]);
    }

    #[test]
    fn validation_errors() {
        let base = |edges: &str| {
            format!(r#"{{"nodes":["s","v","t"],"sources":["s"],"sink":"t","edges":[{edges}]}}"#)
        };
        let into_source = base(
            r#"{"id":"a","tail":"s","head":"v"},{"id":"b","tail":"v","head":"t"},{"id":"c","tail":"v","head":"s"}"#,
        );
        assert!(matches!(Network::from_json(&into_source), Err(Error::SourceHasInEdge(_))));
        let out_of_sink = base(
            r#"{"id":"a","tail":"s","head":"v"},{"id":"b","tail":"v","head":"t"},{"id":"c","tail":"t","head":"v"}"#,
        );
        assert!(matches!(Network::from_json(&out_of_sink), Err(Error::SinkHasOutEdge(_))));
        let unreachable = base(r#"{"id":"a","tail":"s","head":"t"}"#);
        assert_eq!(
            Network::from_json(&unreachable).unwrap_err(),
            Error::MalformedInput("node \"v\" is neither a source nor has incoming edges".into())
        );
        let cyc = r#"{"nodes":["s","a","b","t"],"sources":["s"],"sink":"t","edges":[
            {"id":"1","tail":"s","head":"a"},{"id":"2","tail":"a","head":"b"},
            {"id":"3","tail":"b","head":"a"},{"id":"4","tail":"b","head":"t"}]}"#;
        assert_eq!(Network::from_json(cyc).unwrap_err(), Error::Cycle);
        let dead_end = r#"{"nodes":["s","a","t"],"sources":["s"],"sink":"t","edges":[
            {"id":"1","tail":"s","head":"a"},{"id":"2","tail":"s","head":"t"}]}"#;
        assert_eq!(Network::from_json(dead_end).unwrap_err(), Error::UnreachableSink("a".into()));
        assert!(matches!(Network::from_json("{"), Err(Error::MalformedInput(_))));
    }

    #[test]
    fn butterfly_reach_sets() {
        let net = fixtures::butterfly();
        let rs = net.reach_sets(&EdgeSet::empty()).unwrap();
        assert!(rs.d.is_empty() && rs.i.is_empty() && rs.j.is_empty());
        let rs = net.reach_sets(&net.edge_set(&["e1", "e2"]).unwrap()).unwrap();
        assert_eq!((rs.d, rs.i, rs.j), (vec![0], vec![0], vec![]));
        let rs = net.reach_sets(&net.edge_set(&["e5"]).unwrap()).unwrap();
        assert_eq!((rs.d, rs.i), (vec![0, 1], vec![]));
        assert_eq!(net.is_cut_set(&net.edge_set(&["e8", "e9"]).unwrap()).unwrap(), (true, true));
        assert_eq!(net.is_cut_set(&net.edge_set(&["e5"]).unwrap()).unwrap(), (false, false));
        assert_eq!(net.is_cut_set(&EdgeSet::empty()).unwrap(), (false, false));
    }

    #[test]
    fn reversal() {
        let net = fixtures::butterfly();
        let rev = net.reverse();
        assert!(rev.in_edges(rev.sink()).is_empty());
        // out-edges follow the reversed order
        assert_eq!(ids(&rev, rev.out_edges(rev.sink())), vec!["e9", "e8"]);
        assert_eq!(rev.reverse(), net);
        let l = line().reverse();
        assert_eq!(l.edge(0).tail, l.node("v").unwrap());
        assert_eq!(l.edge(1).tail, l.node("t").unwrap());
    }

    #[test]
    fn linear_reduction() {
        let net = fixtures::butterfly();
        let f = Field::new(2, 1).unwrap();
        let (same, kept) = net.reduce_linear_to_sum(&f, &[1, 1]).unwrap();
        assert_eq!(same, net);
        assert_eq!(kept.len(), 2);
        let (red, kept) = net.reduce_linear_to_sum(&f, &[1, 0]).unwrap();
        assert_eq!(kept, vec![("s1".to_string(), 1)]);
        let mut names: Vec<_> = red.edges().iter().map(|e| e.id.clone()).collect();
        names.sort();
        assert_eq!(names, vec!["e1", "e2", "e5", "e6", "e7", "e8", "e9"]);
        assert_eq!(net.reduce_linear_to_sum(&f, &[0, 0]).unwrap_err(), Error::AllZeroFunction);
    }

    #[test]
    fn json_round_trip() {
        let net = fixtures::butterfly();
        assert_eq!(Network::from_json(&net.to_json()).unwrap(), net);
        assert!(net.to_dot().contains("label=\"e5\""));
    }
}
