//! The residue space `G_π ⊆ ℚ^𝔼` of a level graph and the set functions `γ_π`, `η̂_{s,π}` and
//! `η_{s,π}` built from it.
//!
//! `G_π` is the kernel of four families of linear conditions on arrow-indexed vectors `ψ`:
//!
//! 1. `ψ_a = 0` on downward arrows;
//! 2. `Σ_{a∈𝔼_v} ψ_a = 0` at every vertex;
//! 3. `ψ_a + ψ_ā = 0` on horizontal edges (loops included);
//! 4. for each level `n` and each connected component `Ξ` of the subgraph induced on the
//!    vertices strictly below `n`, the sum of `ψ` over upward arrows from level `n` into `Ξ`
//!    vanishes.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{int_arrows_inside, Multigraph, OrderedPartition, Pair};
use crate::linalg::{self, Matrix};
use crate::rat::{self, Q};
use crate::setfn::{Mask, SetFunction};

/// Row counts of the four families of conditions, for auditing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RowCounts {
    pub vanishing: usize,
    pub local: usize,
    pub rosenlicht: usize,
    pub global: usize,
}

/// An exact basis of `G_π` in reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueSpace {
    pub partition: OrderedPartition,
    /// Rows are basis vectors; columns are arrows.
    pub basis: Matrix,
    /// The stacked conditions whose kernel is `G_π`.
    pub conditions: Matrix,
    pub counts: RowCounts,
}

/// Connected components of the subgraph induced on `verts`, as masks.
pub fn components(g: &Multigraph, verts: Mask) -> Vec<Mask> {
    let mut comps = Vec::new();
    let mut left = verts;
    while left != 0 {
        let start = left.trailing_zeros() as usize;
        let mut comp: Mask = 1 << start;
        loop {
            let mut grown = comp;
            for e in g.edges() {
                let (u, v) = e.ends;
                if verts >> u & 1 == 1 && verts >> v & 1 == 1 && (comp >> u & 1 == 1 || comp >> v & 1 == 1) {
                    grown |= 1 << u | 1 << v;
                }
            }
            if grown == comp {
                break;
            }
            comp = grown;
        }
        comps.push(comp);
        left &= !comp;
    }
    comps
}

/// The conditions cutting out `G_π`, with their family sizes.
pub fn residue_conditions(g: &Multigraph, pi: &OrderedPartition) -> (Matrix, RowCounts) {
    let na = g.num_arrows();
    let unit = |arrows: &mut dyn Iterator<Item = usize>| {
        let mut row = vec![Q::zero(); na];
        for a in arrows {
            row[a] += Q::one();
        }
        row
    };
    let mut rows = Vec::new();
    let mut counts = RowCounts::default();
    for a in g.arrows().filter(|&a| pi.level(g.tail(a)) < pi.level(g.head(a))) {
        rows.push(unit(&mut std::iter::once(a)));
        counts.vanishing += 1;
    }
    for v in 0..g.n() {
        rows.push(unit(&mut g.arrows_from(v)));
        counts.local += 1;
    }
    for e in (0..g.num_edges()).filter(|&e| !pi.is_vertical(g, e)) {
        rows.push(unit(&mut [2 * e, 2 * e + 1].into_iter()));
        counts.rosenlicht += 1;
    }
    for n in 1..pi.num_levels() {
        let below: Mask = (0..n).fold(0, |m, k| m | pi.block_mask(k));
        for xi in components(g, below) {
            let arrows: Vec<usize> = g
                .arrows()
                .filter(|&a| pi.level(g.tail(a)) == n && xi >> g.head(a) & 1 == 1)
                .collect();
            if !arrows.is_empty() {
                rows.push(unit(&mut arrows.into_iter()));
                counts.global += 1;
            }
        }
    }
    (rows, counts)
}

impl ResidueSpace {
    pub fn new(g: &Multigraph, pi: &OrderedPartition) -> Result<Self> {
        if !g.validate().connected {
            return Err(Error::Input("graph not connected".into()));
        }
        let (conditions, counts) = residue_conditions(g, pi);
        let basis = linalg::kernel(&conditions, g.num_arrows());
        Ok(ResidueSpace { partition: pi.clone(), basis, conditions, counts })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `γ_π(I) = dim proj_I(G_π)`: rank of the columns of arrows with tail in `I`.
    pub fn gamma(&self, g: &Multigraph) -> SetFunction {
        SetFunction::from_fn(g.vertices(), |m| {
            let cols: Vec<usize> = g.arrows().filter(|&a| m >> g.tail(a) & 1 == 1).collect();
            rat::q(linalg::rank(&linalg::select_cols(&self.basis, &cols), cols.len()) as i64)
        })
        .unwrap()
    }

    pub fn to_json(&self, g: &Multigraph) -> Value {
        let rows: Vec<Value> = self
            .basis
            .iter()
            .map(|row| {
                let m: serde_json::Map<String, Value> =
                    g.arrows().map(|a| (g.arrow_key(a), json!(rat::fmt(&row[a])))).collect();
                Value::Object(m)
            })
            .collect();
        json!({
            "partition": self.partition.to_json(g),
            "dim": self.dim(),
            "basis": rows,
            "conditions": {
                "vanishing": self.counts.vanishing,
                "local": self.counts.local,
                "rosenlicht": self.counts.rosenlicht,
                "global": self.counts.global,
            }
        })
    }
}

/// `γ_π` for `(G, π)`.
pub fn gamma(g: &Multigraph, pi: &OrderedPartition) -> Result<SetFunction> {
    Ok(ResidueSpace::new(g, pi)?.gamma(g))
}

/// `η_{s,π} = γ_π + 𝔤 + ζ_s`, given a precomputed `γ_π`.
pub fn eta_with_gamma(g: &Multigraph, p: &Pair, gamma: &SetFunction) -> SetFunction {
    gamma.add(&g.genus_setfn()).add(&p.s.zeta(g))
}

/// `η_{s,π} = γ_π + 𝔤 + ζ_s`, of range `g`.
pub fn eta(g: &Multigraph, p: &Pair) -> Result<SetFunction> {
    check_pair(g, p)?;
    Ok(eta_with_gamma(g, p, &gamma(g, &p.pi)?))
}

/// `η̂_{s,π} = γ_π + 𝔤 + ζ_s + |A^int_s(·)|`, of range `g + |A^int_s|`.
pub fn eta_hat(g: &Multigraph, p: &Pair) -> Result<SetFunction> {
    Ok(eta(g, p)?.add(&int_arrows_inside(g, &p.s)))
}

fn check_pair(g: &Multigraph, p: &Pair) -> Result<()> {
    if crate::graph::is_slope_level_pair(g, &p.s, &p.pi) {
        Ok(())
    } else {
        Err(Error::Input("upward arrows of s and π differ (not a slope-level pair)".into()))
    }
}

/// Simpleness of `η_{s,π}` decided by the residue/edge criterion: every bipartition `(I, Iᶜ)` has
/// `γ_π(I) + γ_π(Iᶜ) > |E| − |V| + 1` or is crossed by an integer vertical edge.
pub fn eta_simple_by_criterion(g: &Multigraph, p: &Pair, gamma: &SetFunction) -> bool {
    let full = g.vertices().full();
    let cyc = rat::q(g.cycle_rank() as i64);
    let ints = p.s.sets(g).int_edges;
    (1..full).all(|m| {
        let c = full & !m;
        gamma.get(m) + gamma.get(c) > cyc
            || ints.iter().any(|&e| {
                let (u, v) = g.edges()[e].ends;
                (m >> u & 1) != (m >> v & 1)
            })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::SlopeFunction;
    use crate::rat::q;

    #[test]
    fn k4_trivial_gamma() {
        let g = fixtures::k4();
        let gam = gamma(&g, &OrderedPartition::trivial(4)).unwrap();
        for m in 1..16u32 {
            let expect = match m.count_ones() {
                1 => 2,
                _ => 3,
            };
            assert_eq!(*gam.get(m), q(expect));
        }
    }

    #[test]
    fn k4_two_level_gamma_and_eta() {
        let g = fixtures::k4();
        let pi = OrderedPartition::new(4, vec![vec![1, 2, 3], vec![0]]).unwrap();
        let gam = gamma(&g, &pi).unwrap();
        assert_eq!(*gam.get(0b1110), q(1));
        assert_eq!(*gam.get(0b0001), q(2));
        for i in 1..4 {
            assert_eq!(*gam.get(1 | 1 << i), q(3));
        }
        let mut s = SlopeFunction::zero(&g);
        for (id, t, v) in [("e01", "u0", 1), ("e01", "u1", -1), ("e02", "u2", -1), ("e03", "u3", -1)] {
            s.set(g.arrow(id, t), v);
        }
        let p = Pair::new(&g, s, pi).unwrap();
        let e = eta(&g, &p).unwrap();
        assert_eq!(*e.get(1), q(3));
        assert_eq!(*e.get(0b1110), q(1));
        assert_eq!(*e.range(), q(3));
        let eh = eta_hat(&g, &p).unwrap();
        assert_eq!(*eh.get(0b0011), q(4));
        assert_eq!(*eh.range(), q(4));
        assert_eq!(e.is_simple(), eta_simple_by_criterion(&g, &p, &gam));
    }

    #[test]
    fn figure1_global_row() {
        let g = fixtures::figure1();
        let pi = OrderedPartition::new(5, vec![vec![3, 4], vec![0, 1, 2]]).unwrap();
        let (rows, counts) = residue_conditions(&g, &pi);
        let mut want = vec![Q::zero(); g.num_arrows()];
        for (id, t) in [("e15", "u1"), ("e25", "u2"), ("e35", "u3")] {
            want[g.arrow(id, t)] = Q::one();
        }
        assert!(rows.contains(&want));
        assert_eq!(counts.global, 2);
        assert_eq!(ResidueSpace::new(&g, &pi).unwrap().dim(), g.cycle_rank());
    }
}
