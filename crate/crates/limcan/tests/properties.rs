//! Property tests for set-function transforms, residue spaces and the length ↔ pair round trip.

use limcan::cones;
use limcan::fixtures;
use limcan::graph::{OrderedPartition, Pair};
use limcan::potential;
use limcan::rat::Q;
use limcan::residue::{self, ResidueSpace};
use limcan::setfn::{GroundSet, SetFunction};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// A nonnegative set function on `n` labels with small rational values and `f(∅) = 0`.
fn setfn(n: usize) -> impl Strategy<Value = SetFunction> {
    prop::collection::vec((0i64..=6, 1i64..=3), 1usize << n).prop_map(move |vals| {
        let ground = GroundSet::numbered("v", n);
        let mut values: Vec<Q> = vals.into_iter().map(|(a, b)| q(a, b)).collect();
        values[0] = q(0, 1);
        SetFunction::from_values(&ground, values).unwrap()
    })
}

fn any_setfn() -> impl Strategy<Value = SetFunction> {
    (1usize..=4).prop_flat_map(setfn)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn upmin_is_nondecreasing_below_and_idempotent(f in any_setfn()) {
        let u = f.upmin();
        prop_assert!(u.is_nondecreasing());
        for m in 1..=f.ground().full() {
            prop_assert!(u.get(m) <= f.get(m));
        }
        prop_assert_eq!(u.upmin(), u);
    }

    #[test]
    fn upmin_fixes_exactly_the_nondecreasing_functions(f in any_setfn()) {
        prop_assert_eq!(f.upmin() == f, f.is_nondecreasing());
    }

    #[test]
    fn adjoint_is_an_involution_swapping_sub_and_supermodularity(f in any_setfn()) {
        let a = f.adjoint();
        prop_assert_eq!(a.adjoint(), f.clone());
        prop_assert_eq!(a.is_supermodular(), f.is_submodular());
        prop_assert_eq!(a.range(), f.range());
    }

    #[test]
    fn json_round_trip(f in any_setfn()) {
        prop_assert_eq!(SetFunction::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn residue_dimension_is_the_cycle_rank(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=6);
        let g = fixtures::random_graph(n, rng.gen_range(0..=4), &mut rng);
        let mut levels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
        let used: std::collections::BTreeSet<usize> = levels.iter().copied().collect();
        for l in &mut levels {
            *l = used.iter().position(|u| u == l).unwrap();
        }
        let pi = OrderedPartition::from_levels(&levels).unwrap();
        let space = ResidueSpace::new(&g, &pi).unwrap();
        prop_assert_eq!(space.dim(), g.cycle_rank());
        let gamma = residue::gamma(&g, &pi).unwrap();
        prop_assert!(gamma.is_nondecreasing());
        prop_assert_eq!(gamma.range().clone(), q(g.cycle_rank() as i64, 1));
    }

    #[test]
    fn lengths_lie_in_the_open_cone_of_their_pair(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = fixtures::random_graph(rng.gen_range(1..=5), rng.gen_range(0..=3), &mut rng);
        let l: Vec<Q> = (0..g.num_edges()).map(|_| q(rng.gen_range(1..=30), rng.gen_range(1..=5))).collect();
        let h: Vec<Q> = (0..g.n()).map(|_| q(rng.gen_range(0..=30), rng.gen_range(1..=5))).collect();
        let p = Pair::from_lengths(&g, &l, &h);
        prop_assert!(cones::cone_hrep(&g, &p).unwrap().interior_membership(&l));
        let back = potential::recover_level_function(&g, &l, &p).unwrap();
        prop_assert_eq!(Pair::from_lengths(&g, &l, &back), p);
    }
}
