//! Bounds on the secure computing capacity for the sum.

use serde::Serialize;

use crate::cuts;
use crate::error::{Error, Result};
use crate::network::{EdgeSet, Network};

/// Largest edge count accepted by [`upper_bound_oracle`].
pub const ORACLE_MAX_EDGES: usize = 16;

/// Cap on candidate cuts examined for the cut-structure exactness test.
const CUT_ENUMERATION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactReason {
    RZero,
    CminEqualsCminbar,
    ZeroCapacity,
    CutStructure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub r: usize,
    pub upper: usize,
    pub lower: usize,
    pub c_min: usize,
    pub c_min_bar: usize,
    pub witness_w: EdgeSet,
    pub witness_cut: EdgeSet,
    pub exact: Option<(usize, ExactReason)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactJson {
    pub value: Option<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReportJson {
    pub r: usize,
    pub upper: usize,
    pub lower: usize,
    pub c_min: usize,
    pub c_min_bar: usize,
    #[serde(rename = "witness_W")]
    pub witness_w: Vec<String>,
    pub witness_cut: Vec<String>,
    pub exact: ExactJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<usize>,
}

impl BoundReport {
    pub fn to_json(&self, net: &Network) -> BoundReportJson {
        let exact = match self.exact {
            Some((v, reason)) => ExactJson {
                value: Some(v),
                reason: serde_json::to_value(reason).unwrap().as_str().unwrap().to_string(),
            },
            None => ExactJson {
                value: None,
                reason: "none".into(),
            },
        };
        BoundReportJson {
            r: self.r,
            upper: self.upper,
            lower: self.lower,
            c_min: self.c_min,
            c_min_bar: self.c_min_bar,
            witness_w: net.edge_names(&self.witness_w),
            witness_cut: net.edge_names(&self.witness_cut),
            exact,
            oracle: None,
        }
    }
}

/// Ω(W) together with the cut C*_W achieving it.
pub fn omega_with_cut(net: &Network, w: &EdgeSet) -> Result<(usize, EdgeSet)> {
    net.check_edges(w)?;
    if w.is_empty() {
        let (c, i) = cuts::c_min_with_source(net);
        let cut = cuts::min_cut(net, &[net.sources()[i]], net.sink())?.cut;
        return Ok((c, cut));
    }
    let d = cuts::upstream_source_nodes(net, w);
    let rep = cuts::residual(net, w)?.min_cut(&d, net.sink())?;
    Ok((rep.capacity, rep.cut))
}

/// Ω(W): the smallest number of edges beyond W needed to separate every
/// source upstream of W from the sink.
pub fn omega(net: &Network, w: &EdgeSet) -> Result<usize> {
    Ok(omega_with_cut(net, w)?.0)
}

/// Visits every k-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All edge subsets of size ≤ r (or exactly r), in lexicographic order.
pub fn wiretap_sets(net: &Network, r: usize, exact_size: bool) -> Vec<EdgeSet> {
    let m = net.edge_count();
    let mut out = Vec::new();
    let lo = if exact_size { r } else { 0 };
    for k in lo..=r.min(m) {
        for_each_combination(m, k, |c| {
            out.push(EdgeSet::new(c.to_vec()));
            true
        });
    }
    out.sort();
    out
}

/// W'_r (all primary sets of size ≤ r, with ∅) or W*_r (size exactly r).
pub fn primary_wiretap_sets(net: &Network, r: usize, exact_size: bool) -> Vec<EdgeSet> {
    wiretap_sets(net, r, exact_size)
        .into_iter()
        .filter(|w| w.is_empty() || cuts::is_primary(net, w).expect("edges are valid"))
        .collect()
}

pub fn lower_bound(net: &Network, r: usize) -> usize {
    cuts::c_min(net).saturating_sub(r)
}

pub fn zero_capacity(net: &Network, r: usize) -> bool {
    r >= cuts::c_min_bar(net)
}

/// Whether some source with mincut C_min has a minimum cut C holding at
/// least r edges that no source outside I_C can reach. `None` when the
/// candidate enumeration is too large.
fn cut_structure(net: &Network, r: usize, c_min: usize) -> Option<bool> {
    let m = net.edge_count();
    for (i, &s) in net.sources().iter().enumerate() {
        if cuts::min_cut(net, &[s], net.sink()).ok()?.capacity != c_min {
            continue;
        }
        let reach = net.descendants(&[s], &[]);
        let usable: Vec<usize> = (0..m).filter(|&e| reach[net.edge(e).tail]).collect();
        if binomial(usable.len() as u64, c_min as u64) > CUT_ENUMERATION_CAP {
            return None;
        }
        let mut found = false;
        for_each_combination(usable.len(), c_min, |pick| {
            let c = EdgeSet::new(pick.iter().map(|&k| usable[k]).collect());
            let rs = net.reach_sets(&c).expect("valid edges");
            if !rs.i.contains(&i) {
                return true;
            }
            let others: Vec<usize> = (0..net.source_count())
                .filter(|k| !rs.i.contains(k))
                .map(|k| net.sources()[k])
                .collect();
            let from_others = net.descendants(&others, &[]);
            let hidden = c.iter().filter(|&e| !from_others[net.edge(e).tail]).count();
            found = hidden >= r;
            !found
        });
        if found {
            return Some(true);
        }
    }
    Some(false)
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Exact capacity when one of the closed-form conditions applies.
pub fn exact_capacity(net: &Network, r: usize) -> Option<(usize, ExactReason)> {
    let c_min = cuts::c_min(net);
    let c_bar = cuts::c_min_bar(net);
    exact_from(net, r, c_min, c_bar)
}

fn exact_from(net: &Network, r: usize, c_min: usize, c_bar: usize) -> Option<(usize, ExactReason)> {
    if r == 0 {
        return Some((c_min, ExactReason::RZero));
    }
    if c_min == c_bar {
        return Some((c_min.saturating_sub(r), ExactReason::CminEqualsCminbar));
    }
    if r >= c_bar {
        return Some((0, ExactReason::ZeroCapacity));
    }
    if r <= c_min && cut_structure(net, r, c_min) == Some(true) {
        return Some((c_min - r, ExactReason::CutStructure));
    }
    None
}

/// Minimum of Ω over the primary wiretap sets of size ≤ r.
pub fn upper_bound(net: &Network, r: usize) -> BoundReport {
    let c_min = cuts::c_min(net);
    let c_bar = cuts::c_min_bar(net);
    let mut best: Option<(usize, EdgeSet, EdgeSet)> = None;
    for w in primary_wiretap_sets(net, r, false) {
        let (v, cut) = omega_with_cut(net, &w).expect("edges are valid");
        if best.as_ref().is_none_or(|(b, _, _)| v < *b) {
            best = Some((v, w, cut));
        }
    }
    let (upper, witness_w, witness_cut) = best.expect("the empty set is always primary");
    let lower = c_min.saturating_sub(r);
    debug_assert!(lower <= upper && upper <= c_min);
    BoundReport {
        r,
        upper,
        lower,
        c_min,
        c_min_bar: c_bar,
        witness_w,
        witness_cut,
        exact: exact_from(net, r, c_min, c_bar),
    }
}

/// Upper bound for every r in `0..=r_max`, sharing one pass over the
/// primary wiretap sets.
pub fn upper_bound_profile(net: &Network, r_max: usize) -> Vec<usize> {
    let r_max = r_max.min(net.edge_count());
    let mut by_size = vec![usize::MAX; r_max + 1];
    for w in primary_wiretap_sets(net, r_max, false) {
        let v = omega(net, &w).expect("edges are valid");
        by_size[w.len()] = by_size[w.len()].min(v);
    }
    let mut best = usize::MAX;
    by_size
        .into_iter()
        .map(|v| {
            best = best.min(v);
            best
        })
        .collect()
}

/// Brute force over all pairs W ⊆ C with |W| ≤ r, I_C ≠ ∅ and D_W ⊆ I_C,
/// minimizing |C| − |W|.
pub fn upper_bound_oracle(net: &Network, r: usize) -> Result<usize> {
    let m = net.edge_count();
    if m > ORACLE_MAX_EDGES {
        return Err(Error::TooLarge {
            what: "edges",
            size: m as u64,
            limit: ORACLE_MAX_EDGES as u64,
        });
    }
    let s = net.source_count();
    assert!(s <= 32, "source sets are bitmasks");
    // D of each single edge; D_W is the union over W
    let d_edge: Vec<u32> = (0..m)
        .map(|e| mask_of(&net.upstream_sources(&EdgeSet::new(vec![e]))))
        .collect();
    let mut best = usize::MAX;
    for c_bits in 1u32..(1 << m) {
        let c: Vec<usize> = (0..m).filter(|e| c_bits >> e & 1 == 1).collect();
        if c.len().saturating_sub(r) >= best {
            continue;
        }
        let removed: Vec<bool> = (0..m).map(|e| c_bits >> e & 1 == 1).collect();
        let alive = net.ancestors(&[net.sink()], &removed);
        let i_c: u32 = mask_of(
            &(0..s)
                .filter(|&k| !alive[net.sources()[k]])
                .collect::<Vec<_>>(),
        );
        if i_c == 0 {
            continue;
        }
        for k in 0..=r.min(c.len()) {
            for_each_combination(c.len(), k, |pick| {
                let d_w = pick.iter().fold(0u32, |acc, &p| acc | d_edge[c[p]]);
                if d_w & !i_c == 0 {
                    best = best.min(c.len() - k);
                }
                true
            });
        }
    }
    Ok(best)
}

fn mask_of(positions: &[usize]) -> u32 {
    positions.iter().fold(0, |acc, &k| acc | 1 << k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(net: &Network, ids: &[&str]) -> EdgeSet {
        net.edge_set(ids).unwrap()
    }

    #[test]
    fn omega_values() {
        let bf = fixtures::butterfly();
        assert_eq!(omega(&bf, &EdgeSet::empty()).unwrap(), 2);
        assert_eq!(omega(&bf, &set(&bf, &["e1"])).unwrap(), 1);
        let n1 = fixtures::n1();
        assert_eq!(omega(&n1, &set(&n1, &["e5"])).unwrap(), 1);
    }

    #[test]
    fn primary_sets() {
        let bf = fixtures::butterfly();
        assert_eq!(primary_wiretap_sets(&bf, 0, false), vec![EdgeSet::empty()]);
        assert_eq!(primary_wiretap_sets(&bf, 0, true), vec![EdgeSet::empty()]);
        let w1: Vec<Vec<String>> = primary_wiretap_sets(&bf, 1, true)
            .iter()
            .map(|w| bf.edge_names(w))
            .collect();
        let expect: Vec<Vec<String>> = ["e1", "e2", "e3", "e4", "e5", "e8", "e9"]
            .iter()
            .map(|e| vec![e.to_string()])
            .collect();
        assert_eq!(w1, expect);
        let g = fixtures::fig2();
        let w2 = primary_wiretap_sets(&g, 2, false);
        assert!(!w2.contains(&set(&g, &["e7", "e8"])));
    }

    #[test]
    fn butterfly_bounds() {
        let bf = fixtures::butterfly();
        let rep = upper_bound(&bf, 1);
        assert_eq!((rep.upper, rep.lower, rep.c_min, rep.c_min_bar), (1, 1, 2, 2));
        assert_eq!(rep.exact, Some((1, ExactReason::CminEqualsCminbar)));
        assert_eq!(upper_bound_oracle(&bf, 1).unwrap(), 1);
        assert_eq!(upper_bound_oracle(&bf, 0).unwrap(), 2);
        assert!(zero_capacity(&bf, 2));
        assert!(!zero_capacity(&bf, 1));
    }

    #[test]
    fn fig1_bounds() {
        let n1 = fixtures::n1();
        let rep = upper_bound(&n1, 1);
        assert_eq!((rep.upper, rep.lower, rep.c_min, rep.c_min_bar), (1, 0, 1, 2));
        assert_eq!(rep.exact, None);
        assert_eq!(upper_bound_oracle(&n1, 2).unwrap(), 0);
        assert_eq!(upper_bound(&n1, 0).exact, Some((1, ExactReason::RZero)));
        assert_eq!(upper_bound(&n1, 2).exact, Some((0, ExactReason::ZeroCapacity)));
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |c| {
            seen.push(c.to_vec());
            true
        });
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(binomial(12, 3), 220);
    }
}
