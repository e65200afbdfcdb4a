//! Built-in example networks and hand-written codes.

use crate::code::CodeFile;
use crate::network::{EdgeSpec, Network, NetworkSpec};

fn build(nodes: &[&str], sources: &[&str], sink: &str, edges: &[(&str, &str, &str)]) -> Network {
    let spec = NetworkSpec {
        nodes: nodes.iter().map(|s| s.to_string()).collect(),
        sources: sources.iter().map(|s| s.to_string()).collect(),
        sink: sink.to_string(),
        edges: edges
            .iter()
            .map(|&(id, tail, head)| EdgeSpec {
                id: id.into(),
                tail: tail.into(),
                head: head.into(),
            })
            .collect(),
    };
    Network::from_spec(&spec).expect("fixture is valid")
}

/// s → v → t.
pub fn line() -> Network {
    build(&["s", "v", "t"], &["s"], "t", &[("e1", "s", "v"), ("e2", "v", "t")])
}

/// Two sources; s1 feeds v twice, s2 feeds v and the sink.
pub fn n1() -> Network {
    build(
        &["s1", "s2", "v", "rho"],
        &["s1", "s2"],
        "rho",
        &[
            ("e1", "s1", "v"),
            ("e2", "s1", "v"),
            ("e3", "s2", "v"),
            ("e4", "s2", "rho"),
            ("e5", "v", "rho"),
        ],
    )
}

/// The butterfly network with two sources.
pub fn butterfly() -> Network {
    build(
        &["s1", "s2", "n3", "n4", "n5", "n6", "rho"],
        &["s1", "s2"],
        "rho",
        &[
            ("e1", "s1", "n4"),
            ("e2", "s1", "n3"),
            ("e3", "s2", "n3"),
            ("e4", "s2", "n5"),
            ("e5", "n3", "n6"),
            ("e6", "n6", "n4"),
            ("e7", "n6", "n5"),
            ("e8", "n4", "rho"),
            ("e9", "n5", "rho"),
        ],
    )
}

/// Graph used for the primary minimum cut example.
pub fn fig2() -> Network {
    build(
        &["s", "u1", "u2", "a", "b", "c", "t"],
        &["s"],
        "t",
        &[
            ("e1", "s", "u1"),
            ("e2", "s", "u2"),
            ("e3", "u1", "a"),
            ("e4", "u2", "a"),
            ("e5", "a", "b"),
            ("e6", "b", "t"),
            ("e7", "b", "c"),
            ("e8", "c", "t"),
        ],
    )
}

pub fn network(name: &str) -> Option<Network> {
    match name {
        "line" => Some(line()),
        "n1" => Some(n1()),
        "butterfly" => Some(butterfly()),
        "fig2" => Some(fig2()),
        _ => None,
    }
}

fn parse_code(text: &str) -> CodeFile {
    serde_json::from_str(text).expect("fixture code parses")
}

/// Hand code on [`n1`] over GF(2): rate 2 per source, one key symbol each.
/// e1 = k1, e2 = m1 + k1, e3 = k2, e4 = m2 + k2, e5 = e1 + e2 + e3.
pub fn fig1_code() -> CodeFile {
    parse_code(
        r#"{
  "field": "2^1",
  "modulus": [0, 1],
  "rate": 2,
  "r": 1,
  "sources": ["s1", "s2"],
  "source_matrices": {
    "s1": {"e1": [0, 1], "e2": [1, 1]},
    "s2": {"e3": [0, 1], "e4": [1, 1]}
  },
  "local_coeffs": {"e5": {"e1": 1, "e2": 1, "e3": 1}},
  "B": [[1, 0], [0, 1]],
  "decoder_D": [[1, 0], [1, 0]]
}"#,
    )
}

/// Sum code on the butterfly over GF(4) mixed with B = [[1,0],[α,1]].
pub fn example3_code() -> CodeFile {
    parse_code(
        r#"{
  "field": "2^2",
  "modulus": [1, 1, 1],
  "rate": 2,
  "r": 1,
  "sources": ["s1", "s2"],
  "source_matrices": {
    "s1": {"e1": [1, 1], "e2": [0, 1]},
    "s2": {"e3": [1, 0], "e4": [1, 1]}
  },
  "local_coeffs": {
    "e5": {"e2": 1, "e3": 1},
    "e6": {"e5": 1},
    "e7": {"e5": 1},
    "e8": {"e1": 1, "e6": 1},
    "e9": {"e4": 1, "e7": 1}
  },
  "B": [[1, 0], [2, 1]],
  "decoder_D": [[1, 0], [0, 1]]
}"#,
    )
}

/// Binary hand code on the butterfly with one message and one key symbol
/// per source: e1 = m1 + k1, e2 = k1, e3 = k2, e4 = m2 + k2.
pub fn fig6_code() -> CodeFile {
    parse_code(
        r#"{
  "field": "2^1",
  "modulus": [0, 1],
  "rate": 2,
  "r": 1,
  "sources": ["s1", "s2"],
  "source_matrices": {
    "s1": {"e1": [1, 1], "e2": [0, 1]},
    "s2": {"e3": [0, 1], "e4": [1, 1]}
  },
  "local_coeffs": {
    "e5": {"e2": 1, "e3": 1},
    "e6": {"e5": 1},
    "e7": {"e5": 0},
    "e8": {"e1": 1, "e6": 1},
    "e9": {"e4": 1, "e7": 1}
  },
  "B": [[1, 0], [0, 1]],
  "decoder_D": [[1, 0], [1, 0]]
}"#,
    )
}

/// Built-in code by name, together with the network it runs on.
pub fn code(name: &str) -> Option<(Network, CodeFile)> {
    match name {
        "fig1" => Some((n1(), fig1_code())),
        "example3" => Some((butterfly(), example3_code())),
        "fig6" => Some((butterfly(), fig6_code())),
        _ => None,
    }
}
