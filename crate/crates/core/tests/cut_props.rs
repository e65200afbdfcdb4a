mod common;

use common::{brute_min_cut, edges_of, mask_of, random_network, reach_nodes, separates_edges};
use proptest::prelude::*;
use snfc::bounds;
use snfc::cuts::{self, Target};
use snfc::network::{EdgeSet, Network};

fn net(max_edges: usize) -> impl Strategy<Value = Network> {
    any::<u64>().prop_map(move |seed| random_network(seed, max_edges))
}

/// Non-empty subset of the sources, picked by bits of `pick`.
fn source_subset(net: &Network, pick: u64) -> Vec<usize> {
    let s = net.source_count();
    let bits = (pick % ((1 << s) - 1)) + 1;
    (0..s).filter(|i| bits >> i & 1 == 1).map(|i| net.sources()[i]).collect()
}

/// Every minimum edge set separating `target` edges from `from`.
fn all_min_edge_cuts(net: &Network, from: &[usize], target: u64) -> (usize, Vec<u64>) {
    let m = net.edge_count();
    let feasible: Vec<u64> = (0u64..1 << m).filter(|&c| separates_edges(net, from, c, target)).collect();
    let best = feasible.iter().map(|c| c.count_ones()).min().unwrap() as usize;
    (best, feasible.into_iter().filter(|c| c.count_ones() as usize == best).collect())
}

/// Nonempty W from the bits of `pick`.
fn some_edges(net: &Network, pick: u64) -> EdgeSet {
    let m = net.edge_count();
    let mut mask = pick & ((1 << m) - 1);
    if mask == 0 {
        mask = 1 << (pick % m as u64);
    }
    EdgeSet::new(edges_of(mask))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn min_cut_matches_brute_force(net in net(12), pick in any::<u64>()) {
        let from = source_subset(&net, pick);
        let rep = cuts::min_cut(&net, &from, net.sink()).unwrap();
        prop_assert_eq!(rep.capacity, brute_min_cut(&net, &from, net.sink()));
        prop_assert_eq!(rep.cut.len(), rep.capacity);
        prop_assert!(!reach_nodes(&net, &from, mask_of(rep.cut.iter()))[net.sink()]);
    }

    #[test]
    fn primary_cut_is_closest_to_origin(net in net(12), pick in any::<u64>()) {
        let from = source_subset(&net, pick);
        let primary = cuts::primary_min_cut(&net, &from, Target::Node(net.sink())).unwrap();
        let pmask = mask_of(primary.iter());
        let best = brute_min_cut(&net, &from, net.sink());
        prop_assert_eq!(primary.len(), best);
        let side = reach_nodes(&net, &from, pmask);
        prop_assert!(!side[net.sink()]);
        let m = net.edge_count();
        for other in (0u64..1 << m).filter(|c| c.count_ones() as usize == best) {
            if reach_nodes(&net, &from, other)[net.sink()] {
                continue;
            }
            // the origin side of the primary cut sits inside every other one
            let other_side = reach_nodes(&net, &from, other);
            prop_assert!(side.iter().zip(&other_side).all(|(&a, &b)| !a || b));
            prop_assert!(separates_edges(&net, &from, pmask, other));
        }
    }

    #[test]
    fn primary_edge_cut_keeps_upstream_sources(net in net(10), pick in any::<u64>()) {
        let w = some_edges(&net, pick);
        let dw = net.reach_sets(&w).unwrap().d;
        let origin = cuts::upstream_source_nodes(&net, &w);
        prop_assert_eq!(origin.len(), dw.len());
        let wmask = mask_of(w.iter());
        let hat = cuts::primary_min_cut(&net, &origin, Target::Edges(&w)).unwrap();
        let (best, all) = all_min_edge_cuts(&net, &origin, wmask);
        prop_assert_eq!(hat.len(), best);
        prop_assert_eq!(cuts::min_cut_edge_target(&net, &origin, &w).unwrap().capacity, best);
        prop_assert!(cuts::is_primary(&net, &hat).unwrap());
        let omega_hat = bounds::omega(&net, &hat).unwrap();
        let omega_w = bounds::omega(&net, &w).unwrap();
        for c in all {
            let wp = EdgeSet::new(edges_of(c));
            // a minimum cut between D_W and W has the same upstream sources
            prop_assert_eq!(&net.reach_sets(&wp).unwrap().d, &dw);
            prop_assert!(separates_edges(&net, &origin, mask_of(hat.iter()), c));
            let omega_p = bounds::omega(&net, &wp).unwrap();
            prop_assert!(omega_hat <= omega_p && omega_p <= omega_w, "{} {} {}", omega_hat, omega_p, omega_w);
        }
    }

    #[test]
    fn c_min_bar_matches_definition(net in net(14)) {
        let m = net.edge_count();
        let mut best = usize::MAX;
        for c in 0u64..1 << m {
            if c.count_ones() as usize >= best {
                continue;
            }
            let rs = net.reach_sets(&EdgeSet::new(edges_of(c))).unwrap();
            if !rs.i.is_empty() && rs.d == rs.i {
                best = c.count_ones() as usize;
            }
        }
        let c_min = cuts::c_min(&net);
        prop_assert_eq!(cuts::c_min_bar(&net), best);
        prop_assert!(c_min <= best);
        let oracle = net.sources().iter().map(|&s| brute_min_cut(&net, &[s], net.sink())).min().unwrap();
        prop_assert_eq!(c_min, oracle);
    }
}
