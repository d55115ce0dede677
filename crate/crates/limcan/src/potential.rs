//! Potentials on metric graphs: admissible extensions of vertex functions and the
//! subintegrability solver that turns arrow weights into a level function.

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::circuits::{self, Digraph};
use crate::cones::GhostGraph;
use crate::error::{Error, Result};
use crate::graph::{edge_of, rev, Arrow, Multigraph, OrderedPartition, Pair, SlopeFunction};
use crate::rat::{self, Q};

/// The divisor of an admissible extension: integer vertex values plus at most one interior
/// point of weight one per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleDivisor {
    pub vertex: Vec<i64>,
    /// `(arrow, distance from its tail)`.
    pub interior: Vec<(Arrow, Q)>,
}

impl AdmissibleDivisor {
    pub fn degree(&self) -> i64 {
        self.vertex.iter().sum::<i64>() + self.interior.len() as i64
    }

    pub fn to_json(&self, g: &Multigraph) -> Value {
        let vertex: serde_json::Map<String, Value> = g
            .vertices()
            .elements()
            .iter()
            .zip(&self.vertex)
            .map(|(v, &d)| (v.clone(), json!(d)))
            .collect();
        let interior: Vec<Value> = self
            .interior
            .iter()
            .map(|(a, r)| json!({"arrow": g.arrow_key(*a), "dist": rat::fmt(r)}))
            .collect();
        json!({"vertex": vertex, "interior": interior})
    }
}

/// Slopes and divisor of the admissible extension of `h` to the metric graph `(G, ℓ)`.
///
/// The divisor at a vertex `x` is `Σ_{a∈𝔼_x} s(a)`. On an edge `a = uv` with `h(u) ≥ h(v)` whose
/// length does not divide `h(u) − h(v)`, the remainder `r` places a point at distance `r` from
/// `v` along `ā`.
pub fn admissible_extension(g: &Multigraph, lengths: &[Q], h: &[Q]) -> (SlopeFunction, AdmissibleDivisor) {
    let s = SlopeFunction::slope_from(g, lengths, h);
    let vertex = (0..g.n()).map(|x| g.arrows_from(x).map(|a| s.get(a)).sum()).collect();
    let mut interior = Vec::new();
    for e in 0..g.num_edges() {
        let a = if h[g.tail(2 * e)] >= h[g.head(2 * e)] { 2 * e } else { 2 * e + 1 };
        let d = &h[g.tail(a)] - &h[g.head(a)];
        let r = &d - &lengths[e] * rat::q(s.get(a));
        if !r.is_zero() {
            interior.push((rev(a), r));
        }
    }
    (s, AdmissibleDivisor { vertex, interior })
}

/// Arrow weights in `ℚ ∪ {−∞}`; `None` is `−∞`.
pub type Weights = Vec<Option<Q>>;

/// Certificate returned with a potential: the arcs achieving equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potential {
    pub h: Vec<Q>,
    pub tight: Vec<bool>,
}

/// Solves `x(a) ≤ h(tail) − h(head)` on a multigraph; see [`solve_digraph`].
pub fn subintegrability(g: &Multigraph, x: &Weights) -> Result<Vec<Q>> {
    Ok(solve_digraph(&arrow_digraph(g), x, circuits::DEFAULT_CAP)?.h)
}

/// The arrows of `G` as a digraph with reversal partners.
pub fn arrow_digraph(g: &Multigraph) -> Digraph {
    Digraph {
        n: g.n(),
        arcs: g.arrows().map(|a| (g.tail(a), g.head(a))).collect(),
        partner: g.arrows().map(|a| Some(rev(a))).collect(),
    }
}

/// Finds `h` with `x(a) ≤ h(tail) − h(head)` for every arc, with equality exactly when
/// `x(a) + x(ā) = 0` or `a` lies on a circuit of total weight `0`; `min h = 0`.
///
/// Requires `x(a) + x(ā) ≤ 0` and nonpositive circuit sums; a violation is reported with a
/// witness. Non-tight arcs are first raised by a uniform margin small enough to keep every
/// negative sum negative, after which the raising iteration (one arc at a time, by the largest
/// amount that keeps all constraints) drives the system to an exact potential.
pub fn solve_digraph(d: &Digraph, x: &Weights, cap: usize) -> Result<Potential> {
    let na = d.arcs.len();
    assert_eq!(x.len(), na);
    let finite_abs: Q = x.iter().flatten().map(|v| v.abs()).sum();
    let big = -(finite_abs + Q::one()) * rat::q(na as i64 + 1);
    let mut w: Vec<Q> = x.iter().map(|v| v.clone().unwrap_or_else(|| big.clone())).collect();

    let circuits = d.circuits(cap)?;
    let pair_sum = |w: &[Q], a: usize| d.partner[a].map(|p| &w[a] + &w[p]);
    let circ_sum = |w: &[Q], z: &[usize]| z.iter().map(|&a| w[a].clone()).sum::<Q>();

    for a in 0..na {
        if pair_sum(&w, a).is_some_and(|s| s.is_positive()) {
            return Err(Error::Guard(format!("arc {a} and its reverse have positive total weight")));
        }
    }
    for z in &circuits {
        if circ_sum(&w, z).is_positive() {
            return Err(Error::Guard(format!("circuit {z:?} has positive total weight")));
        }
    }

    let mut tight: Vec<bool> = (0..na).map(|a| pair_sum(&w, a).is_some_and(|s| s.is_zero())).collect();
    let mut margin: Option<Q> = None;
    let mut note = |v: Q| {
        if v.is_negative() && margin.as_ref().is_none_or(|m| -&v < *m) {
            margin = Some(-v);
        }
    };
    for a in 0..na {
        if let Some(s) = pair_sum(&w, a) {
            note(s);
        }
    }
    for z in &circuits {
        let s = circ_sum(&w, z);
        if s.is_zero() {
            z.iter().for_each(|&a| tight[a] = true);
        }
        note(s);
    }
    if let Some(m) = margin {
        let delta = m / rat::q(2 * (na as i64 + 1));
        for a in (0..na).filter(|&a| !tight[a]) {
            w[a] += &delta;
        }
    }

    // Raising iteration: F = arcs with negative pair sum, S = circuits with negative sum.
    let containing: Vec<Vec<usize>> =
        (0..na).map(|a| (0..circuits.len()).filter(|&i| circuits[i].contains(&a)).collect()).collect();
    loop {
        let in_s: Vec<bool> = circuits.iter().map(|z| circ_sum(&w, z).is_negative()).collect();
        let f: Vec<usize> = (0..na).filter(|&a| pair_sum(&w, a).is_some_and(|s| s.is_negative())).collect();
        let Some(a) = f.iter().copied().find(|&a| containing[a].iter().all(|&i| in_s[i])) else {
            if f.is_empty() {
                break;
            }
            return Err(Error::Property("no arc can be raised; inputs violate the hypotheses".into()));
        };
        let mut best = pair_sum(&w, a).unwrap();
        for &i in &containing[a] {
            let s = circ_sum(&w, &circuits[i]);
            if s > best {
                best = s;
            }
        }
        w[a] -= best;
    }
    // Arcs without a partner may still be loose; they are covered by the integration check.
    let h = integrate(d, &w)?;
    Ok(Potential { h, tight })
}

/// Integrates an exact potential along a spanning forest and normalizes `min h = 0`.
fn integrate(d: &Digraph, w: &[Q]) -> Result<Vec<Q>> {
    let mut h: Vec<Option<Q>> = vec![None; d.n];
    for root in 0..d.n {
        if h[root].is_some() {
            continue;
        }
        h[root] = Some(Q::zero());
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for (a, &(t, hd)) in d.arcs.iter().enumerate() {
                if t == v && h[hd].is_none() && d.partner[a].is_some() {
                    h[hd] = Some(h[v].clone().unwrap() - &w[a]);
                    stack.push(hd);
                }
            }
        }
    }
    let mut h: Vec<Q> = h.into_iter().map(Option::unwrap).collect();
    let min = h.iter().min().cloned().unwrap_or_else(Q::zero);
    h.iter_mut().for_each(|x| *x -= &min);
    for (a, &(t, hd)) in d.arcs.iter().enumerate() {
        if w[a] > &h[t] - &h[hd] {
            return Err(Error::Property(format!("integration failed on arc {a}")));
        }
    }
    Ok(h)
}

/// A level function `h` on `V` with `slope_from(ℓ, h) = s` and `level_from(h) = π`, for `ℓ` in
/// the open cone of `(s, π)`.
pub fn recover_level_function(g: &Multigraph, lengths: &[Q], p: &Pair) -> Result<Vec<Q>> {
    let gg = GhostGraph::new(g, p);
    if let Some(z) = gg.violated_circuit(lengths)? {
        return Err(Error::Guard(format!("edge lengths not in the open cone: circuit {}", gg.describe(&z))));
    }
    let x: Weights = gg
        .arcs
        .iter()
        .map(|arc| arc.slope.map(|s| match arc.arrow {
                Some(a) => &lengths[edge_of(a)] * rat::q(s),
                None => Q::zero(),
            }))
        .collect();
    let pot = solve_digraph(&gg.digraph(), &x, circuits::DEFAULT_CAP)?;
    let h: Vec<Q> = (0..g.n()).map(|v| pot.h[p.pi.level(v)].clone()).collect();
    let back = Pair { s: SlopeFunction::slope_from(g, lengths, &h), pi: OrderedPartition::level_from(&h) };
    if back != *p {
        return Err(Error::Property("recovered level function does not reproduce the pair".into()));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rat::{q, qr};

    #[test]
    fn two_vertex_extension() {
        let g = Multigraph::from_pairs(&["u", "v"], &[("e", "u", "v")]).unwrap();
        let (_, d) = admissible_extension(&g, &[q(2)], &[q(5), q(0)]);
        assert_eq!(d.vertex, vec![2, -3]);
        assert_eq!(d.interior, vec![(1, q(1))]);
        assert_eq!(d.degree(), 0);
    }

    #[test]
    fn k4_extension() {
        let g = fixtures::k4();
        let l: Vec<Q> = [1, 2, 2, 1, 1, 1].iter().map(|&x| q(x)).collect();
        let (_, d) = admissible_extension(&g, &l, &[q(1), q(0), q(0), q(0)]);
        assert_eq!(d.vertex, vec![1, -1, -1, -1]);
        assert_eq!(d.interior.len(), 2);
        assert_eq!(d.degree(), 0);
    }

    #[test]
    fn strict_when_not_tight() {
        let g = Multigraph::from_pairs(&["u", "v"], &[("e", "u", "v")]).unwrap();
        let h = subintegrability(&g, &vec![Some(q(1)), Some(q(-2))]).unwrap();
        let d = &h[0] - &h[1];
        assert!(d > q(1) && d < q(2), "{d}");
    }

    #[test]
    fn exact_potential_is_recovered() {
        let g = fixtures::k4();
        let h0 = [q(3), qr(1, 2), q(0), q(7)];
        let x: Weights = g.arrows().map(|a| Some(&h0[g.tail(a)] - &h0[g.head(a)])).collect();
        let h = subintegrability(&g, &x).unwrap();
        assert_eq!(h, h0.to_vec());
    }

    #[test]
    fn k4_recovery() {
        let g = fixtures::k4();
        let p = Pair::from_json(&g, &serde_json::from_str(include_str!("../../../fixtures/k4_pair.json")).unwrap())
            .unwrap();
        let l: Vec<Q> = [1, 2, 2, 1, 1, 1].iter().map(|&x| q(x)).collect();
        let h = recover_level_function(&g, &l, &p).unwrap();
        assert_eq!(&h[0] - &h[1], q(1));
        for i in [2, 3] {
            let d = &h[0] - &h[i];
            assert!(d > q(0) && d < q(2));
        }
        let bad: Vec<Q> = [2, 2, 2, 1, 1, 1].iter().map(|&x| q(x)).collect();
        assert!(matches!(recover_level_function(&g, &bad, &p), Err(Error::Guard(_))));
    }

    #[test]
    fn guard_reports_positive_pairs() {
        let g = Multigraph::from_pairs(&["u", "v"], &[("e", "u", "v")]).unwrap();
        assert!(matches!(subintegrability(&g, &vec![Some(q(2)), Some(q(-1))]), Err(Error::Guard(_))));
    }
}
