//! Worked examples on the bundled graphs.

use limcan::bricks;
use limcan::fixtures;
use limcan::graph::{Multigraph, OrderedPartition};
use limcan::residue;
use limcan::Error;
use serde_json::json;

#[test]
fn k4_permissible_pairs() {
    let g = fixtures::k4();
    let psl = bricks::enumerate_psl(&g, None).unwrap();
    assert_eq!(psl.genus, 3);
    assert_eq!(psl.bricks.len(), 43);
    assert_eq!(psl.pairs.len(), 29);
    let b0 = psl.brick_index(&bricks::vertex_brick(4, 3, 0).key()).unwrap();
    let fan = bricks::fan_for_brick(&g, &psl, b0).unwrap();
    assert_eq!(fan.maximal().len(), 3);
}

#[test]
fn theta_has_a_single_permissible_pair() {
    let g = fixtures::theta();
    let psl = bricks::enumerate_psl(&g, None).unwrap();
    assert_eq!(psl.pairs.len(), 1);
    assert!(psl.pairs[0].eta.is_positive());
}

#[test]
fn brick_volumes_sum_to_the_simplex() {
    // Δ_g in n labels has volume g^{n−1}/(n−1)!.
    for (n, g, want) in [(2, 3, (3, 1)), (3, 2, (2, 1)), (4, 3, (9, 2))] {
        let total: limcan::rat::Q = bricks::enumerate_bricks(n, g, 10_000).unwrap().iter().map(|b| b.volume()).sum();
        assert_eq!(total, limcan::rat::qr(want.0, want.1), "n = {n}, g = {g}");
    }
}

#[test]
fn trivial_partition_gamma_on_k4() {
    let g = fixtures::k4();
    let gamma = residue::gamma(&g, &OrderedPartition::trivial(4)).unwrap();
    let two = limcan::rat::q(2);
    assert_eq!(gamma.at(&["u0"]), two);
    assert_eq!(*gamma.range(), limcan::rat::q(3));
}

#[test]
fn bad_input_is_reported_as_input_error() {
    let disconnected = json!({
        "vertices": ["a", "b"],
        "edges": [],
        "genus": {}
    });
    assert!(matches!(Multigraph::from_json(&disconnected), Err(Error::Input(_))));
    assert_eq!(Error::Input(String::new()).exit_code(), 2);
    assert_eq!(Error::Cap(String::new()).exit_code(), 3);
    assert_eq!(Error::Property(String::new()).exit_code(), 4);
}
