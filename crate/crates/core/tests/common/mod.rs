#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use snfc::network::{EdgeSpec, Network, NetworkSpec};

/// Random valid network: 1..=3 sources, a few relays, at most `max_edges`
/// edges. Nodes are laid out in a fixed topological order, every relay gets
/// an in-edge from an earlier node and every non-sink node an out-edge to a
/// later one, so all nodes reach the sink.
pub fn random_network(seed: u64, max_edges: usize) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = rng.random_range(1..=3usize);
    let k = rng.random_range(0..=4usize).min((max_edges.saturating_sub(s)) / 2);
    let n = s + k + 1;
    let sink = n - 1;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for v in s..sink {
        edges.push((rng.random_range(0..v), v));
    }
    for u in 0..sink {
        let lo = s.max(u + 1);
        edges.push((u, rng.random_range(lo..n)));
    }
    let target = rng.random_range(edges.len()..=max_edges.max(edges.len()));
    while edges.len() < target {
        let u = rng.random_range(0..sink);
        let lo = s.max(u + 1);
        edges.push((u, rng.random_range(lo..n)));
    }
    // shuffle so input order is not the topological order
    for i in (1..edges.len()).rev() {
        let j = rng.random_range(0..=i);
        edges.swap(i, j);
    }
    let name = |v: usize| {
        if v < s {
            format!("s{}", v + 1)
        } else if v == sink {
            "rho".to_string()
        } else {
            format!("v{}", v - s + 1)
        }
    };
    let spec = NetworkSpec {
        nodes: (0..n).map(name).collect(),
        sources: (0..s).map(name).collect(),
        sink: name(sink),
        edges: edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| EdgeSpec {
                id: format!("e{}", i + 1),
                tail: name(u),
                head: name(v),
            })
            .collect(),
    };
    Network::from_spec(&spec).expect("generator builds valid networks")
}

/// The seeded corpus used by the acceptance and property tests.
pub fn corpus(count: usize) -> Vec<Network> {
    (0..count as u64).map(|seed| random_network(seed, 12)).collect()
}

/// Whether `to` is reachable from any of `from` avoiding removed edges,
/// by plain depth-first search over the edge list.
pub fn reaches(net: &Network, from: &[usize], to: usize, removed: u64) -> bool {
    let mut seen = vec![false; net.node_count()];
    let mut stack: Vec<usize> = from.to_vec();
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        if std::mem::replace(&mut seen[v], true) {
            continue;
        }
        for (e, edge) in net.edges().iter().enumerate() {
            if edge.tail == v && removed >> e & 1 == 0 {
                stack.push(edge.head);
            }
        }
    }
    false
}

/// Smallest number of edges whose removal cuts every path from `from` to
/// `to`, by trying all subsets.
pub fn brute_min_cut(net: &Network, from: &[usize], to: usize) -> usize {
    let m = net.edge_count();
    (0u64..1 << m)
        .filter(|&mask| !reaches(net, from, to, mask))
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap_or(usize::MAX)
}

/// Nodes reachable from `from` once the edges in `removed` are deleted.
pub fn reach_nodes(net: &Network, from: &[usize], removed: u64) -> Vec<bool> {
    let mut seen = vec![false; net.node_count()];
    let mut stack: Vec<usize> = from.to_vec();
    while let Some(v) = stack.pop() {
        if std::mem::replace(&mut seen[v], true) {
            continue;
        }
        for (e, edge) in net.edges().iter().enumerate() {
            if edge.tail == v && removed >> e & 1 == 0 {
                stack.push(edge.head);
            }
        }
    }
    seen
}

/// Whether removing `cut` leaves no edge of `target` (outside the cut)
/// with its tail reachable from `from`.
pub fn separates_edges(net: &Network, from: &[usize], cut: u64, target: u64) -> bool {
    let seen = reach_nodes(net, from, cut);
    (0..net.edge_count()).all(|e| target >> e & 1 == 0 || cut >> e & 1 == 1 || !seen[net.edge(e).tail])
}

pub fn mask_of(edges: impl IntoIterator<Item = usize>) -> u64 {
    edges.into_iter().fold(0, |m, e| m | 1 << e)
}

pub fn edges_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|e| mask >> e & 1 == 1).collect()
}
