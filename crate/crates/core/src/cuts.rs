//! Unit-capacity max-flow and the cut quantities built on it.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::{EdgeSet, Network};

const INF: i64 = i64::MAX / 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutReport {
    pub capacity: usize,
    pub cut: EdgeSet,
    /// Network nodes on the origin side of the cut (subdivision nodes omitted).
    pub source_side: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CutReportJson {
    pub capacity: usize,
    pub cut: Vec<String>,
    pub source_side: Vec<String>,
}

impl CutReport {
    pub fn to_json(&self, net: &Network) -> CutReportJson {
        CutReportJson {
            capacity: self.capacity,
            cut: net.edge_names(&self.cut),
            source_side: self.source_side.iter().map(|&v| net.node_name(v).to_string()).collect(),
        }
    }
}

/// What a cut has to separate from the origin set.
#[derive(Debug, Clone, Copy)]
pub enum Target<'a> {
    Node(usize),
    /// Every edge of the set, via subdivision nodes.
    Edges(&'a EdgeSet),
}

struct Flow {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    /// Network edge each forward arc stands for, if any.
    label: Vec<Option<usize>>,
}

impl Flow {
    fn new(n: usize) -> Flow {
        Flow {
            adj: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
            label: Vec::new(),
        }
    }

    fn arc(&mut self, u: usize, v: usize, cap: i64, label: Option<usize>) {
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(cap);
        self.label.push(label);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
        self.label.push(None);
    }

    /// Augments until no path remains or the flow exceeds `limit`.
    fn max_flow(&mut self, s: usize, t: usize, limit: i64) -> i64 {
        let mut total = 0;
        loop {
            let mut prev = vec![usize::MAX; self.adj.len()];
            let mut seen = vec![false; self.adj.len()];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for &a in &self.adj[u] {
                    let v = self.to[a];
                    if self.cap[a] > 0 && !seen[v] {
                        seen[v] = true;
                        prev[v] = a;
                        queue.push_back(v);
                    }
                }
            }
            if !seen[t] {
                return total;
            }
            let mut push = INF;
            let mut v = t;
            while v != s {
                let a = prev[v];
                push = push.min(self.cap[a]);
                v = self.to[a ^ 1];
            }
            let mut v = t;
            while v != s {
                let a = prev[v];
                self.cap[a] -= push;
                self.cap[a ^ 1] += push;
                v = self.to[a ^ 1];
            }
            total += push;
            if total > limit {
                return total;
            }
        }
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &a in &self.adj[u] {
                let v = self.to[a];
                if self.cap[a] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}

/// The network with some edges deleted (G_W when the deleted set is W).
/// Validity is not re-checked: sources may become disconnected.
#[derive(Debug, Clone)]
pub struct Residual<'a> {
    net: &'a Network,
    removed: Vec<bool>,
}

pub fn residual<'a>(net: &'a Network, w: &EdgeSet) -> Result<Residual<'a>> {
    net.check_edges(w)?;
    Ok(Residual {
        net,
        removed: w.mask(net.edge_count()),
    })
}

impl<'a> Residual<'a> {
    pub fn full(net: &'a Network) -> Residual<'a> {
        Residual {
            net,
            removed: vec![false; net.edge_count()],
        }
    }

    pub fn network(&self) -> &Network {
        self.net
    }

    pub fn is_removed(&self, e: usize) -> bool {
        self.removed[e]
    }

    pub fn present_edges(&self) -> EdgeSet {
        (0..self.net.edge_count()).filter(|&e| !self.removed[e]).collect()
    }

    /// Minimum cut separating `target` from `origin`, reported as the
    /// primary one: the edges leaving the residual-reachable side.
    /// Edges flagged in `infinite` cannot be cut; `None` is returned when
    /// every separating set would need one of them.
    pub fn cut(&self, origin: &[usize], target: Target<'_>, infinite: Option<&[bool]>) -> Result<Option<CutReport>> {
        let net = self.net;
        let n = net.node_count();
        for &u in origin {
            if u >= n {
                return Err(Error::UnknownNode(format!("#{u}")));
            }
        }
        let mut sub = vec![usize::MAX; net.edge_count()];
        let mut extra = 0;
        match target {
            Target::Node(t) => {
                if t >= n {
                    return Err(Error::UnknownNode(format!("#{t}")));
                }
                if origin.contains(&t) {
                    return Err(Error::TargetInU(net.node_name(t).to_string()));
                }
            }
            Target::Edges(w) => {
                if w.is_empty() {
                    return Err(Error::EmptyTarget);
                }
                net.check_edges(w)?;
                for e in w.iter() {
                    sub[e] = n + extra;
                    extra += 1;
                }
            }
        }
        let super_s = n + extra;
        let super_t = super_s + 1;
        let mut flow = Flow::new(super_t + 1);
        let mut edge_budget = 0i64;
        for (e, edge) in net.edges().iter().enumerate() {
            if self.removed[e] {
                continue;
            }
            let cap = if infinite.is_some_and(|m| m[e]) { INF } else { 1 };
            if cap == 1 {
                edge_budget += 1;
            }
            if sub[e] == usize::MAX {
                flow.arc(edge.tail, edge.head, cap, Some(e));
            } else {
                flow.arc(edge.tail, sub[e], cap, Some(e));
                flow.arc(sub[e], edge.head, cap, Some(e));
            }
        }
        let mut origin_sorted = origin.to_vec();
        origin_sorted.sort_unstable();
        origin_sorted.dedup();
        for &u in &origin_sorted {
            flow.arc(super_s, u, INF, None);
        }
        match target {
            Target::Node(t) => flow.arc(t, super_t, INF, None),
            Target::Edges(w) => {
                for e in w.iter() {
                    if !self.removed[e] {
                        flow.arc(sub[e], super_t, INF, None);
                    }
                }
            }
        }
        let value = flow.max_flow(super_s, super_t, edge_budget);
        if value > edge_budget {
            return Ok(None);
        }
        let side = flow.reachable(super_s);
        let mut cut = Vec::new();
        for u in 0..super_t {
            if !side[u] {
                continue;
            }
            for &a in &flow.adj[u] {
                if let Some(e) = flow.label[a] {
                    if !side[flow.to[a]] {
                        cut.push(e);
                    }
                }
            }
        }
        let cut = EdgeSet::new(cut);
        debug_assert_eq!(cut.len() as i64, value);
        Ok(Some(CutReport {
            capacity: value as usize,
            cut,
            source_side: (0..n).filter(|&v| side[v]).collect(),
        }))
    }

    fn finite_cut(&self, origin: &[usize], target: Target<'_>) -> Result<CutReport> {
        Ok(self.cut(origin, target, None)?.expect("unit capacities are finite"))
    }

    pub fn min_cut(&self, origin: &[usize], target: usize) -> Result<CutReport> {
        self.finite_cut(origin, Target::Node(target))
    }

    pub fn min_cut_edge_target(&self, origin: &[usize], w: &EdgeSet) -> Result<CutReport> {
        self.finite_cut(origin, Target::Edges(w))
    }
}

pub fn min_cut(net: &Network, origin: &[usize], target: usize) -> Result<CutReport> {
    Residual::full(net).min_cut(origin, target)
}

pub fn min_cut_edge_target(net: &Network, origin: &[usize], w: &EdgeSet) -> Result<CutReport> {
    Residual::full(net).min_cut_edge_target(origin, w)
}

/// The minimum cut closest to `origin`.
pub fn primary_min_cut(net: &Network, origin: &[usize], target: Target<'_>) -> Result<EdgeSet> {
    Ok(Residual::full(net).finite_cut(origin, target)?.cut)
}

/// Source nodes (not positions) of D_W.
pub fn upstream_source_nodes(net: &Network, w: &EdgeSet) -> Vec<usize> {
    net.upstream_sources(w).into_iter().map(|i| net.sources()[i]).collect()
}

/// Whether W equals its own primary minimum cut from D_W.
pub fn is_primary(net: &Network, w: &EdgeSet) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::EmptyTarget);
    }
    let d = upstream_source_nodes(net, w);
    Ok(primary_min_cut(net, &d, Target::Edges(w))? == *w)
}

/// min over sources of mincut(σ, ρ), with the minimizing source position.
pub fn c_min_with_source(net: &Network) -> (usize, usize) {
    net.sources()
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let c = min_cut(net, &[s], net.sink()).expect("valid network").capacity;
            (c, i)
        })
        .min()
        .expect("at least one source")
}

pub fn c_min(net: &Network) -> usize {
    c_min_with_source(net).0
}

/// Smallest cut set C with D_C = I_C, and a witness.
pub fn c_min_bar_with_witness(net: &Network) -> Result<(usize, EdgeSet)> {
    let s = net.source_count();
    assert!(s < 32, "too many sources for the subset sweep");
    let full = Residual::full(net);
    let mut best: Option<(usize, EdgeSet)> = None;
    for t_mask in 1u32..(1 << s) {
        let t: Vec<usize> = (0..s).filter(|i| t_mask >> i & 1 == 1).map(|i| net.sources()[i]).collect();
        let others: Vec<usize> = (0..s).filter(|i| t_mask >> i & 1 == 0).map(|i| net.sources()[i]).collect();
        let reach = net.descendants(&others, &[]);
        let infinite: Vec<bool> = net.edges().iter().map(|e| reach[e.tail]).collect();
        if let Some(rep) = full.cut(&t, Target::Node(net.sink()), Some(&infinite))? {
            if best.as_ref().is_none_or(|(c, _)| rep.capacity < *c) {
                best = Some((rep.capacity, rep.cut));
            }
        }
    }
    best.ok_or(Error::NoFeasibleCut)
}

pub fn c_min_bar(net: &Network) -> usize {
    c_min_bar_with_witness(net).expect("T = S is always feasible").0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(net: &Network, ids: &[&str]) -> EdgeSet {
        net.edge_set(ids).unwrap()
    }

    #[test]
    fn node_cuts() {
        let net = fixtures::line();
        let s = net.node("s").unwrap();
        assert_eq!(min_cut(&net, &[s], net.sink()).unwrap().capacity, 1);
        let n1 = fixtures::n1();
        let s1 = n1.node("s1").unwrap();
        assert_eq!(min_cut(&n1, &[s1], n1.sink()).unwrap().capacity, 1);
        let bf = fixtures::butterfly();
        let s1 = bf.node("s1").unwrap();
        assert_eq!(min_cut(&bf, &[s1], bf.sink()).unwrap().capacity, 2);
        assert_eq!(min_cut(&bf, &[bf.sink()], bf.sink()).unwrap_err(), Error::TargetInU("rho".into()));
    }

    #[test]
    fn edge_target_cuts() {
        let bf = fixtures::butterfly();
        let s1 = bf.node("s1").unwrap();
        let rep = min_cut_edge_target(&bf, &[s1], &set(&bf, &["e1", "e2"])).unwrap();
        assert_eq!(rep.capacity, 2);
        let g = fixtures::fig2();
        let u = [g.node("u1").unwrap(), g.node("u2").unwrap()];
        let w = set(&g, &["e7", "e8"]);
        let rep = min_cut_edge_target(&g, &u, &w).unwrap();
        assert_eq!(rep.capacity, 1);
        assert_eq!(primary_min_cut(&g, &u, Target::Edges(&w)).unwrap(), set(&g, &["e5"]));
        // e3 cannot be reached from u2
        let rep = min_cut_edge_target(&g, &[u[1]], &set(&g, &["e3"])).unwrap();
        assert_eq!((rep.capacity, rep.cut.is_empty()), (0, true));
        assert_eq!(min_cut_edge_target(&g, &u, &EdgeSet::empty()).unwrap_err(), Error::EmptyTarget);
    }

    #[test]
    fn butterfly_primary() {
        let bf = fixtures::butterfly();
        let both = bf.sources().to_vec();
        let w = set(&bf, &["e6"]);
        assert_eq!(primary_min_cut(&bf, &both, Target::Edges(&w)).unwrap(), set(&bf, &["e5"]));
        for (id, expect) in [("e1", true), ("e6", false), ("e7", false), ("e5", true)] {
            assert_eq!(is_primary(&bf, &set(&bf, &[id])).unwrap(), expect, "{id}");
        }
        let g = fixtures::fig2();
        assert!(!is_primary(&g, &set(&g, &["e7", "e8"])).unwrap());
    }

    #[test]
    fn residual_deletion() {
        let n1 = fixtures::n1();
        let res = residual(&n1, &set(&n1, &["e5"])).unwrap();
        let s1 = n1.node("s1").unwrap();
        assert_eq!(res.min_cut(&[s1], n1.sink()).unwrap().capacity, 0);
        let bf = fixtures::butterfly();
        let res = residual(&bf, &set(&bf, &["e1"])).unwrap();
        let s1 = bf.node("s1").unwrap();
        assert_eq!(res.min_cut(&[s1], bf.sink()).unwrap().capacity, 1);
        assert_eq!(residual(&bf, &EdgeSet::empty()).unwrap().present_edges().len(), 9);
    }

    #[test]
    fn cmin_values() {
        assert_eq!(c_min(&fixtures::n1()), 1);
        assert_eq!(c_min(&fixtures::butterfly()), 2);
        assert_eq!(c_min(&fixtures::line()), 1);
        let bf = fixtures::butterfly();
        let (v, w) = c_min_bar_with_witness(&bf).unwrap();
        assert_eq!(v, 2);
        let rs = bf.reach_sets(&w).unwrap();
        assert_eq!(rs.d, rs.i);
        assert_eq!(c_min_bar(&fixtures::n1()), 2);
        assert_eq!(c_min_bar(&fixtures::line()), 1);
    }
}
