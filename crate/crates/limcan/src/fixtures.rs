//! The graphs used throughout the documentation and tests, shipped as JSON in `fixtures/`.

use crate::graph::{Edge, Multigraph};
use crate::setfn::GroundSet;

fn load(text: &str) -> Multigraph {
    let v: serde_json::Value = serde_json::from_str(text).expect("fixture JSON parses");
    Multigraph::from_json(&v).expect("fixture graph is valid")
}

/// The complete graph on `u0..u3` (dual graph of four general lines in the plane).
pub fn k4() -> Multigraph {
    load(include_str!("../../../fixtures/k4.json"))
}

/// Two vertices joined by three edges.
pub fn theta() -> Multigraph {
    load(include_str!("../../../fixtures/theta.json"))
}

/// Two vertices joined by two edges.
pub fn two_cycle() -> Multigraph {
    load(include_str!("../../../fixtures/two_cycle.json"))
}

/// Five vertices on two levels: `u1 u2 u3` above `u4 u5`, with a horizontal edge `u2u3`.
pub fn figure1() -> Multigraph {
    load(include_str!("../../../fixtures/figure1.json"))
}

/// A random connected multigraph on `n` vertices: a random spanning tree plus `extra` edges
/// with uniform endpoints, so loops and parallel edges occur. Genus `0` everywhere.
pub fn random_graph(n: usize, extra: usize, rng: &mut impl rand::Rng) -> Multigraph {
    assert!(n >= 1);
    let vertices = GroundSet::numbered("v", n);
    let mut ends: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    ends.extend((0..extra).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))));
    let edges = ends.into_iter().enumerate().map(|(i, ends)| Edge { id: format!("e{i}"), ends }).collect();
    Multigraph::new(vertices, edges, vec![0; n]).expect("a spanning tree keeps the graph connected")
}
