//! Slope-level cones `σ_{s,π} ⊆ ℝ^E_{≥0}`: ghost graphs, essential and active circuits, exact
//! H-representations, interior tests, squashing and facets.
//!
//! The ghost graph `G_π^†` has one vertex per level, the vertical edges of `G`, and a ghost edge
//! between every two levels. Ghost arrows pointing up (from a higher to a lower level, in the
//! `tail ≻ head` sense) carry slope `0` and length `1`; the others carry slope `−∞`. An edge
//! length `ℓ` is compatible with `(s, π)` when every circuit `q` of `G_π^†` has
//! `Σ_{a∈q} ℓ_a s(a) ≤ 0`, with equality exactly for circuits made of integer edges.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::circuits::{self, Digraph};
use crate::error::{Error, Result};
use crate::graph::{edge_of, rev, Arrow, Multigraph, OrderedPartition, Pair, SlopeFunction};
use crate::linalg;
use crate::lp::{Cmp, Lp, Outcome};
use crate::rat::{self, Q};
use crate::setfn::{GroundSet, PolytopeH};

/// An arc of the ghost graph, between levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhostArc {
    pub tail: usize,
    pub head: usize,
    /// The arrow of `G` this arc comes from; `None` for ghosts.
    pub arrow: Option<Arrow>,
    /// `None` stands for `−∞` (downward ghosts).
    pub slope: Option<i64>,
}

/// A circuit of the ghost graph, as arc indices.
pub type Circuit = Vec<usize>;

/// `G_π^†` with the slopes of a pair.
#[derive(Clone, Debug)]
pub struct GhostGraph {
    pub levels: usize,
    pub arcs: Vec<GhostArc>,
    labels: Vec<String>,
    integer: Vec<bool>,
}

impl GhostGraph {
    pub fn new(g: &Multigraph, p: &Pair) -> Self {
        let mut arcs = Vec::new();
        let mut labels = Vec::new();
        let mut integer = Vec::new();
        for a in g.arrows().filter(|&a| p.pi.is_vertical(g, edge_of(a))) {
            arcs.push(GhostArc {
                tail: p.pi.level(g.tail(a)),
                head: p.pi.level(g.head(a)),
                arrow: Some(a),
                slope: Some(p.s.get(a)),
            });
            labels.push(g.arrow_key(a));
            integer.push(p.s.is_integer_edge(edge_of(a)));
        }
        let k = p.pi.num_levels();
        for hi in 0..k {
            for lo in 0..hi {
                arcs.push(GhostArc { tail: hi, head: lo, arrow: None, slope: Some(0) });
                labels.push(format!("ghost:L{hi}>L{lo}"));
                arcs.push(GhostArc { tail: lo, head: hi, arrow: None, slope: None });
                labels.push(format!("ghost:L{lo}>L{hi}"));
                integer.extend([false, false]);
            }
        }
        GhostGraph { levels: k, arcs, labels, integer }
    }

    /// Reverse-arc partner of each arc.
    fn partner(&self, i: usize) -> Option<usize> {
        let arc = &self.arcs[i];
        match arc.arrow {
            Some(a) => self.arcs.iter().position(|b| b.arrow == Some(rev(a))),
            None => self.arcs.iter().position(|b| b.arrow.is_none() && b.tail == arc.head && b.head == arc.tail),
        }
    }

    /// The whole ghost graph as a digraph.
    pub fn digraph(&self) -> Digraph {
        Digraph {
            n: self.levels,
            arcs: self.arcs.iter().map(|a| (a.tail, a.head)).collect(),
            partner: (0..self.arcs.len()).map(|i| self.partner(i)).collect(),
        }
    }

    /// Circuits with no downward ghost arrow, i.e. with finite slope sum.
    pub fn finite_circuits(&self) -> Result<Vec<Circuit>> {
        let keep: Vec<usize> = (0..self.arcs.len()).filter(|&i| self.arcs[i].slope.is_some()).collect();
        let local: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(j, &i)| (i, j)).collect();
        let d = Digraph {
            n: self.levels,
            arcs: keep.iter().map(|&i| (self.arcs[i].tail, self.arcs[i].head)).collect(),
            partner: keep.iter().map(|&i| self.partner(i).and_then(|p| local.get(&p).copied())).collect(),
        };
        let mut zs: Vec<Circuit> = d
            .circuits(circuits::DEFAULT_CAP)?
            .into_iter()
            .map(|z| z.into_iter().map(|j| keep[j]).collect())
            .collect();
        zs.sort_by_key(|z| self.label_seq(z));
        Ok(zs)
    }

    /// Arc labels of a circuit, in order.
    pub fn label_seq(&self, z: &[usize]) -> Vec<String> {
        z.iter().map(|&i| self.labels[i].clone()).collect()
    }

    pub fn describe(&self, z: &[usize]) -> String {
        self.label_seq(z).join(" ")
    }

    pub fn is_ghost(&self, i: usize) -> bool {
        self.arcs[i].arrow.is_none()
    }

    /// All arcs are non-ghost arrows on integer edges.
    pub fn in_int(&self, z: &[usize]) -> bool {
        z.iter().all(|&i| !self.is_ghost(i) && self.integer[i])
    }

    /// Coefficients of `Σ_{a∈z} ℓ_a s(a)` on `ℝ^E`.
    pub fn row(&self, z: &[usize], num_edges: usize) -> Vec<Q> {
        let mut row = vec![Q::zero(); num_edges];
        for &i in z {
            if let (Some(a), Some(s)) = (self.arcs[i].arrow, self.arcs[i].slope) {
                row[edge_of(a)] += rat::q(s);
            }
        }
        row
    }

    /// Essentiality: only upward ghosts, no slope-zero arrow, no two overlapping ghosts.
    pub fn is_essential(&self, z: &[usize]) -> bool {
        if z.iter().any(|&i| self.arcs[i].slope.is_none()) {
            return false;
        }
        if z.iter().any(|&i| !self.is_ghost(i) && self.arcs[i].slope == Some(0)) {
            return false;
        }
        let ghosts: Vec<(usize, usize)> =
            z.iter().filter(|&&i| self.is_ghost(i)).map(|&i| (self.arcs[i].tail, self.arcs[i].head)).collect();
        let overlap = |(u1, v1): (usize, usize), (u2, v2): (usize, usize)| u1 > u2 && u2 >= v1 && v1 > v2;
        ghosts.iter().enumerate().all(|(i, &x)| ghosts[i + 1..].iter().all(|&y| !overlap(x, y) && !overlap(y, x)))
    }

    /// The first finite circuit on which `ℓ` breaks compatibility, if any.
    pub fn violated_circuit(&self, lengths: &[Q]) -> Result<Option<Circuit>> {
        if lengths.iter().any(|l| !l.is_positive()) {
            return Err(Error::Input("edge lengths must be positive".into()));
        }
        for z in self.finite_circuits()? {
            let sum = linalg::dot(&self.row(&z, lengths.len()), lengths);
            let ok = if self.in_int(&z) { sum.is_zero() } else { sum.is_negative() };
            if !ok {
                return Ok(Some(z));
            }
        }
        Ok(None)
    }
}

/// A row `Σ c_e ℓ_e ≤ 0` (or `= 0`) with the circuit it comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeRow {
    pub coeffs: Vec<Q>,
    pub circuit: Circuit,
}

/// H-representation of `C_{s,π}` inside `ℝ^E_{≥0}`.
#[derive(Clone, Debug)]
pub struct ConeH {
    pub pair: Pair,
    pub ghost: GhostGraph,
    pub num_edges: usize,
    pub ineqs: Vec<ConeRow>,
    pub eqs: Vec<ConeRow>,
}

/// Essential circuits of `G_π^†`, sorted by their arrow labels.
pub fn essential_circuits(g: &Multigraph, p: &Pair) -> Result<(GhostGraph, Vec<Circuit>)> {
    let gg = GhostGraph::new(g, p);
    let zs = gg.finite_circuits()?.into_iter().filter(|z| gg.is_essential(z)).collect();
    Ok((gg, zs))
}

/// One row per essential circuit (duplicates dropped); circuits of integer edges give equalities.
pub fn cone_hrep(g: &Multigraph, p: &Pair) -> Result<ConeH> {
    let (ghost, zs) = essential_circuits(g, p)?;
    let m = g.num_edges();
    let mut ineqs: Vec<ConeRow> = Vec::new();
    let mut eqs: Vec<ConeRow> = Vec::new();
    for z in zs {
        let coeffs = ghost.row(&z, m);
        if ghost.in_int(&z) {
            let neg: Vec<Q> = coeffs.iter().map(|c| -c).collect();
            if coeffs.iter().all(Zero::is_zero) || eqs.iter().any(|r| r.coeffs == coeffs || r.coeffs == neg) {
                continue;
            }
            eqs.push(ConeRow { coeffs, circuit: z });
        } else if !ineqs.iter().any(|r| r.coeffs == coeffs) {
            ineqs.push(ConeRow { coeffs, circuit: z });
        }
    }
    Ok(ConeH { pair: p.clone(), ghost, num_edges: m, ineqs, eqs })
}

impl ConeH {
    /// `ℓ` lies in the open cone: `ℓ > 0`, strict rows strict, equality rows exact.
    pub fn interior_membership(&self, lengths: &[Q]) -> bool {
        lengths.iter().all(Signed::is_positive)
            && self.ineqs.iter().all(|r| linalg::dot(&r.coeffs, lengths).is_negative())
            && self.eqs.iter().all(|r| linalg::dot(&r.coeffs, lengths).is_zero())
    }

    /// Closed membership in `C_{s,π}`.
    pub fn contains(&self, lengths: &[Q]) -> bool {
        lengths.iter().all(|l| !l.is_negative())
            && self.ineqs.iter().all(|r| !linalg::dot(&r.coeffs, lengths).is_positive())
            && self.eqs.iter().all(|r| linalg::dot(&r.coeffs, lengths).is_zero())
    }

    fn margin_lp(&self, strict: bool, extra_eqs: &[Vec<Q>]) -> (Q, Vec<Q>) {
        let rows: Vec<Vec<Q>> = self.ineqs.iter().map(|r| r.coeffs.clone()).collect();
        let mut eqs: Vec<Vec<Q>> = self.eqs.iter().map(|r| r.coeffs.clone()).collect();
        eqs.extend_from_slice(extra_eqs);
        let (strict_rows, weak_rows): (&[Vec<Q>], &[Vec<Q>]) = if strict { (&rows, &[]) } else { (&[], &rows) };
        margin(self.num_edges, strict_rows, weak_rows, &eqs)
    }

    /// A point of the open cone, if it is nonempty.
    pub fn interior_point(&self) -> Option<Vec<Q>> {
        let (t, x) = self.margin_lp(true, &[]);
        t.is_positive().then_some(x)
    }

    pub fn interior_nonempty(&self) -> bool {
        self.interior_point().is_some()
    }

    /// `z` is not inside `G^int` and `C_{s,π} ∩ H_z` contains a positive length.
    pub fn is_active(&self, z: &[usize]) -> bool {
        !self.ghost.in_int(z) && self.margin_lp(false, &[self.ghost.row(z, self.num_edges)]).0.is_positive()
    }

    pub fn edge_ground(g: &Multigraph) -> GroundSet {
        GroundSet::new(g.edges().iter().map(|e| e.id.clone())).unwrap()
    }

    /// The closed cone as a polyhedron in `ℝ^E`.
    pub fn polytope(&self, g: &Multigraph) -> PolytopeH {
        PolytopeH {
            ambient: Self::edge_ground(g),
            inequalities: self.ineqs.iter().map(|r| (r.coeffs.clone(), Q::zero())).collect(),
            equalities: self.eqs.iter().map(|r| (r.coeffs.clone(), Q::zero())).collect(),
        }
        .with_nonnegativity()
    }

    pub fn to_json(&self, g: &Multigraph) -> Value {
        let row = |r: &ConeRow| {
            let coeffs: serde_json::Map<String, Value> = r
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (g.edges()[e].id.clone(), json!(rat::fmt(c))))
                .collect();
            json!({"coeffs": coeffs, "circuit": self.ghost.label_seq(&r.circuit)})
        };
        json!({
            "pair": self.pair.to_json(g),
            "ineqs": self.ineqs.iter().map(row).collect::<Vec<_>>(),
            "eqs": self.eqs.iter().map(row).collect::<Vec<_>>(),
        })
    }
}

/// `max t` over `ℓ ∈ ℝ^m` with `ℓ ≥ t`, `t ≤ 1`, `r·ℓ ≤ −t` for strict rows, `r·ℓ ≤ 0` for weak
/// rows and `r·ℓ = 0` for equalities. Returns the optimal `(t, ℓ)`; `t > 0` certifies a point of
/// the open orthant satisfying every strict row strictly.
pub fn margin(m: usize, strict: &[Vec<Q>], weak: &[Vec<Q>], eqs: &[Vec<Q>]) -> (Q, Vec<Q>) {
    let mut lp = Lp::new(m + 1);
    let with_t = |row: &[Q], t: Q| {
        let mut r = row.to_vec();
        r.push(t);
        r
    };
    for r in strict {
        lp.add(with_t(r, Q::one()), Cmp::Le, Q::zero());
    }
    for r in weak {
        lp.add(with_t(r, Q::zero()), Cmp::Le, Q::zero());
    }
    for r in eqs {
        lp.add(with_t(r, Q::zero()), Cmp::Eq, Q::zero());
    }
    for e in 0..m {
        let mut r = vec![Q::zero(); m + 1];
        r[e] = Q::one();
        r[m] = -Q::one();
        lp.add(r, Cmp::Ge, Q::zero());
    }
    let mut r = vec![Q::zero(); m + 1];
    r[m] = Q::one();
    lp.add(r.clone(), Cmp::Le, Q::one());
    match lp.maximize(&r) {
        Outcome::Optimal { value, mut x } => {
            x.truncate(m);
            (value, x)
        }
        _ => (Q::zero(), vec![Q::zero(); m]),
    }
}

/// A common point of several open cones.
pub fn open_intersection_point(m: usize, cones: &[&ConeH]) -> Option<Vec<Q>> {
    let strict: Vec<Vec<Q>> = cones.iter().flat_map(|c| c.ineqs.iter().map(|r| r.coeffs.clone())).collect();
    let eqs: Vec<Vec<Q>> = cones.iter().flat_map(|c| c.eqs.iter().map(|r| r.coeffs.clone())).collect();
    let (t, x) = margin(m, &strict, &[], &eqs);
    t.is_positive().then_some(x)
}

/// Genus (cycle rank) of `G^int_{s,π}`: levels joined by vertical integer edges.
pub fn int_genus(g: &Multigraph, p: &Pair) -> usize {
    let k = p.pi.num_levels();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        if parent[x] != x {
            parent[x] = find(parent, parent[x]);
        }
        parent[x]
    }
    let mut edges = 0;
    let mut comps = k;
    for e in (0..g.num_edges()).filter(|&e| p.pi.is_vertical(g, e) && p.s.is_integer_edge(e)) {
        edges += 1;
        let (u, v) = g.edges()[e].ends;
        let (a, b) = (find(&mut parent, p.pi.level(u)), find(&mut parent, p.pi.level(v)));
        if a != b {
            parent[a] = b;
            comps -= 1;
        }
    }
    edges + comps - k
}

/// `dim σ_{s,π}`: `|E| − g(G^int)` when the open cone is nonempty, else the affine dimension of
/// `C_{s,π}` (`−1` when empty).
pub fn dimension(g: &Multigraph, p: &Pair) -> Result<i64> {
    let cone = cone_hrep(g, p)?;
    if cone.interior_nonempty() {
        Ok(g.num_edges() as i64 - int_genus(g, p) as i64)
    } else {
        Ok(cone.polytope(g).dimension())
    }
}

/// The pair whose cone is `C_{s,π} ∩ H_z`, for an essential active circuit `z`.
pub fn squash(g: &Multigraph, p: &Pair, z: &[usize]) -> Result<Pair> {
    let cone = cone_hrep(g, p)?;
    squash_in(g, &cone, z)
}

pub(crate) fn squash_in(g: &Multigraph, cone: &ConeH, z: &[usize]) -> Result<Pair> {
    let (gg, p) = (&cone.ghost, &cone.pair);
    if !gg.is_essential(z) {
        return Err(Error::Guard(format!("circuit {} is not essential", gg.describe(z))));
    }
    if gg.in_int(z) {
        return Err(Error::Guard(format!("circuit {} lies in G^int, so it is not active", gg.describe(z))));
    }
    if !cone.is_active(z) {
        return Err(Error::Guard(format!(
            "circuit {} is not active: every length in C ∩ H_z has a zero coordinate (LP optimum 0)",
            gg.describe(z)
        )));
    }
    let ghosts: Vec<(usize, usize)> =
        z.iter().filter(|&&i| gg.is_ghost(i)).map(|&i| (gg.arcs[i].tail, gg.arcs[i].head)).collect();
    let in_z: Vec<Arrow> = z.iter().filter_map(|&i| gg.arcs[i].arrow).collect();
    let lvl = |v: usize| p.pi.level(v);
    let mut s = p.s.clone();
    for a in g.arrows().filter(|&a| p.pi.is_vertical(g, edge_of(a))) {
        let (x, y) = (lvl(g.tail(a)), lvl(g.head(a)));
        if ghosts.iter().any(|&(u, v)| u >= x && y >= v) && p.s.get(a) > 0 {
            return Err(Error::Guard(format!("arrow {} covered by a ghost has positive slope", g.arrow_key(a))));
        }
        let case1 = in_z.contains(&rev(a)) && !p.s.is_integer_edge(edge_of(a));
        let case2 = p.s.get(rev(a)) == 0 && ghosts.iter().any(|&(u, v)| u >= x.max(y) && x.min(y) >= v);
        if case1 || case2 {
            s.set(a, p.s.get(a) + 1);
        }
    }
    // Merge the levels spanned by each ghost; `cut[k]` separates levels k−1 and k.
    let k = p.pi.num_levels();
    let cut: Vec<bool> = (0..k).map(|j| j > 0 && !ghosts.iter().any(|&(u, v)| v < j && j <= u)).collect();
    let mut new_level = vec![0usize; k];
    for j in 1..k {
        new_level[j] = new_level[j - 1] + usize::from(cut[j]);
    }
    let levels: Vec<usize> = (0..g.n()).map(|v| new_level[lvl(v)]).collect();
    let pi = OrderedPartition::from_levels(&levels)?;
    let s = SlopeFunction::new(g, s.values().to_vec())?;
    Pair::new(g, s, pi).map_err(|_| Error::Property("squashing produced a non-slope-level pair".into()))
}

/// A facet of `σ_{s,π}` meeting the open orthant, realized by one squash.
#[derive(Clone, Debug)]
pub struct Facet {
    pub pair: Pair,
    /// The lexicographically smallest circuit realizing the facet.
    pub circuit: Vec<String>,
    /// Other circuits giving the same facet.
    pub alternatives: Vec<Vec<String>>,
}

/// Facets of `σ_{s,π}` meeting `ℝ^E_{>0}`: single squashes with nonempty open cone whose
/// `G^int` genus is one more.
pub fn facets(g: &Multigraph, p: &Pair) -> Result<Vec<Facet>> {
    let cone = cone_hrep(g, p)?;
    if !cone.interior_nonempty() {
        return Err(Error::Input("the open cone of the pair is empty".into()));
    }
    let genus = int_genus(g, p);
    let (_, zs) = essential_circuits(g, p)?;
    let mut found: BTreeMap<Pair, Vec<Vec<String>>> = BTreeMap::new();
    for z in zs.iter().filter(|z| !cone.ghost.in_int(z) && cone.is_active(z)) {
        let q = squash_in(g, &cone, z)?;
        if int_genus(g, &q) == genus + 1 && cone_hrep(g, &q)?.interior_nonempty() {
            found.entry(q).or_default().push(cone.ghost.label_seq(z));
        }
    }
    Ok(found
        .into_iter()
        .map(|(pair, mut zs)| {
            zs.sort();
            let circuit = zs.remove(0);
            Facet { pair, circuit, alternatives: zs }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rat::q;

    fn k4_pair(g: &Multigraph) -> Pair {
        Pair::from_json(g, &serde_json::from_str(include_str!("../../../fixtures/k4_pair.json")).unwrap()).unwrap()
    }

    fn lengths(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn k4_pair_cone() {
        let g = fixtures::k4();
        let p = k4_pair(&g);
        let cone = cone_hrep(&g, &p).unwrap();
        assert!(cone.interior_membership(&lengths(&[1, 2, 2, 1, 1, 1])));
        assert!(!cone.interior_membership(&lengths(&[2, 2, 2, 1, 1, 1])));
        assert!(cone.interior_nonempty());
        assert_eq!(dimension(&g, &p).unwrap(), 6);
        let e = ConeH::edge_ground(&g);
        let want = PolytopeH {
            ambient: e.clone(),
            inequalities: vec![
                (lengths(&[1, -1, 0, 0, 0, 0]), q(0)),
                (lengths(&[1, 0, -1, 0, 0, 0]), q(0)),
            ],
            equalities: vec![],
        }
        .with_nonnegativity();
        assert!(cone.polytope(&g).same_set(&want));
    }

    #[test]
    fn trivial_pair_is_the_orthant() {
        let g = fixtures::k4();
        let cone = cone_hrep(&g, &Pair::trivial(&g)).unwrap();
        assert!(cone.ineqs.is_empty() && cone.eqs.is_empty());
        assert_eq!(dimension(&g, &Pair::trivial(&g)).unwrap(), 6);
    }

    #[test]
    fn double_squash() {
        let g = fixtures::k4();
        let p = k4_pair(&g);
        let fs = facets(&g, &p).unwrap();
        assert_eq!(fs.len(), 2);
        let cone = cone_hrep(&g, &p).unwrap();
        let (_, zs) = essential_circuits(&g, &p).unwrap();
        let z1 = zs.iter().find(|z| cone.ghost.describe(z) == "e02:- e01:+").unwrap();
        let p1 = squash(&g, &p, z1).unwrap();
        assert_eq!(int_genus(&g, &p1), 1);
        let (gg1, zs1) = essential_circuits(&g, &p1).unwrap();
        let z2 = zs1.iter().find(|z| gg1.describe(z) == "e03:- e01:+").unwrap();
        let p2 = squash(&g, &p1, z2).unwrap();
        for i in ["u1", "u2", "u3"] {
            let e = format!("e0{}", &i[1..]);
            assert_eq!(p2.s.get(g.arrow(&e, "u0")), 1);
            assert!(p2.s.is_integer_edge(g.edge_index(&e).unwrap()));
        }
        assert_eq!(dimension(&g, &p2).unwrap(), 4);
        assert!(cone_hrep(&g, &p2).unwrap().interior_membership(&lengths(&[1, 1, 1, 1, 1, 1])));
    }

    #[test]
    fn int_circuit_is_not_active() {
        let g = fixtures::k4();
        let p = k4_pair(&g);
        let cone = cone_hrep(&g, &p).unwrap();
        let (_, zs) = essential_circuits(&g, &p).unwrap();
        let z1 = zs.iter().find(|z| cone.ghost.describe(z) == "e02:- e01:+").unwrap();
        let p1 = squash(&g, &p, z1).unwrap();
        let (gg1, zs1) = essential_circuits(&g, &p1).unwrap();
        let zi = zs1.iter().find(|z| gg1.in_int(z)).unwrap();
        assert!(matches!(squash(&g, &p1, zi), Err(Error::Guard(_))));
    }
}
