//! Bricks of the simplex `Δ_g`, permissible slope-level pairs, the fans `Σ_B` they span, and the
//! canonical fan `Σ` obtained as their meet.
//!
//! A point `β ∈ Δ_g = {q ∈ ℚ^V_{≥0} : q(V) = g}` defines the brick
//! `B_β = {q ∈ Δ_g : ⌊β(S)⌋ ≤ q(S) ≤ ⌈β(S)⌉ for all S}`. It is full-dimensional exactly when no
//! proper nonempty subset sum of `β` is an integer; full-dimensional bricks tile `Δ_g` and are
//! identified by their floor tables.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::cones::{self, ConeH};
use crate::error::{Error, Result};
use crate::graph::{Multigraph, OrderedPartition, Pair, SlopeFunction};
use crate::linalg;
use crate::lp::{Cmp, Lp, Outcome};
use crate::rat::{self, Q};
use crate::residue;
use crate::setfn::{GroundSet, Mask, PolytopeH, SetFunction};

/// A brick of `Δ_g`, keyed by its floor table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Brick {
    pub n: usize,
    pub g: i64,
    /// `⌊β(S)⌋`, indexed by subset mask.
    pub floors: Vec<i64>,
    pub witness: Vec<Q>,
    pub full_dimensional: bool,
}

fn subset_sum(x: &[Q], m: Mask) -> Q {
    crate::setfn::bits(m).map(|i| x[i].clone()).sum()
}

/// The brick defined by `β ∈ Δ_g`.
pub fn brick_of(beta: &[Q], g: i64) -> Result<Brick> {
    let n = beta.len();
    if n == 0 || n > 16 {
        return Err(Error::Input("need between 1 and 16 coordinates".into()));
    }
    if beta.iter().any(Signed::is_negative) || beta.iter().sum::<Q>() != rat::q(g) {
        return Err(Error::Input(format!("point is not in the simplex of width {g}")));
    }
    let full: Mask = (1 << n) - 1;
    let floors: Vec<i64> = (0..=full).map(|m| rat::floor_i64(&subset_sum(beta, m))).collect();
    let full_dimensional = (1..full).all(|m| !subset_sum(beta, m).is_integer());
    Ok(Brick { n, g, floors, witness: beta.to_vec(), full_dimensional })
}

/// One side of a brick: `q(S) ≥ floor(S)` (`upper = false`) or `q(S) ≤ floor(S) + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Side {
    pub set: Mask,
    pub upper: bool,
}

impl Brick {
    pub fn full(&self) -> Mask {
        (1 << self.n) - 1
    }

    /// Canonical key: floors of the proper nonempty subsets in mask order.
    pub fn key(&self) -> String {
        (1..self.full()).map(|m| self.floors[m as usize].to_string()).collect::<Vec<_>>().join(",")
    }

    /// `⌈β(S)⌉` for a full-dimensional brick.
    pub fn ceil(&self, m: Mask) -> i64 {
        if m == 0 || m == self.full() {
            self.floors[m as usize]
        } else {
            self.floors[m as usize] + 1
        }
    }

    fn side_row(&self, side: Side) -> (Vec<Q>, Q) {
        let sign = if side.upper { Q::one() } else { -Q::one() };
        let row = (0..self.n).map(|i| if side.set >> i & 1 == 1 { sign.clone() } else { Q::zero() }).collect();
        let rhs = if side.upper { rat::q(self.ceil(side.set)) } else { rat::q(-self.floors[side.set as usize]) };
        (row, rhs)
    }

    fn sides(&self) -> impl Iterator<Item = Side> + '_ {
        (1..self.full()).flat_map(|set| [Side { set, upper: false }, Side { set, upper: true }])
    }

    /// The brick as a polytope in `ℚ^V`.
    pub fn polytope(&self, ground: &GroundSet) -> PolytopeH {
        PolytopeH {
            ambient: ground.clone(),
            inequalities: self.sides().map(|s| self.side_row(s)).collect(),
            equalities: vec![(vec![Q::one(); self.n], rat::q(self.g))],
        }
    }

    /// Facet sides with a relative-interior point: maximize the least slack `t` of the other
    /// sides while the given side is tight. The side of the complement lies on the same
    /// hyperplane and is left out.
    pub fn facets(&self) -> Vec<(Side, Vec<Q>, Q)> {
        let mut out = Vec::new();
        for side in self.sides() {
            let (row, rhs) = self.side_row(side);
            let mut lp = Lp::new(self.n + 1);
            (0..self.n).for_each(|j| lp.set_free(j));
            let ext = |r: &[Q], t: Q| {
                let mut r = r.to_vec();
                r.push(t);
                r
            };
            lp.add(ext(&vec![Q::one(); self.n], Q::zero()), Cmp::Eq, rat::q(self.g));
            lp.add(ext(&row, Q::zero()), Cmp::Eq, rhs);
            let comp = self.full() & !side.set;
            for other in self.sides().filter(|o| o.set != side.set && o.set != comp) {
                let (r, b) = self.side_row(other);
                lp.add(ext(&r, Q::one()), Cmp::Le, b);
            }
            let mut c = vec![Q::zero(); self.n + 1];
            c[self.n] = Q::one();
            lp.add(c.clone(), Cmp::Le, Q::one());
            if let Outcome::Optimal { value, mut x } = lp.maximize(&c) {
                if value.is_positive() {
                    x.truncate(self.n);
                    out.push((side, x, value));
                }
            }
        }
        out
    }

    /// Vertices, in coordinates of `ℚ^V`.
    pub fn vertices(&self) -> Vec<Vec<Q>> {
        let (rows, _) = self.projected_facets();
        vertices_of(&rows, self.n - 1).into_iter().map(|(v, _)| self.lift(&v)).collect()
    }

    fn lift(&self, p: &[Q]) -> Vec<Q> {
        let mut v = p.to_vec();
        v.push(rat::q(self.g) - p.iter().sum::<Q>());
        v
    }

    /// Facet inequalities after eliminating the last coordinate (`q_n = g − Σ_{i<n} q_i`).
    fn projected_facets(&self) -> (Vec<(Vec<Q>, Q)>, Vec<Side>) {
        let last = self.n - 1;
        let mut rows = Vec::new();
        let mut sides = Vec::new();
        for (side, _, _) in self.facets() {
            let (row, mut rhs) = self.side_row(side);
            let c = row[last].clone();
            let proj: Vec<Q> = (0..last).map(|i| &row[i] - &c).collect();
            rhs -= &c * rat::q(self.g);
            rows.push((proj, rhs));
            sides.push(side);
        }
        (rows, sides)
    }

    /// Euclidean volume of the projection to the first `n − 1` coordinates, by a pulling
    /// triangulation. `Δ_g` itself has volume `g^{n−1} / (n−1)!` in these coordinates.
    pub fn volume(&self) -> Q {
        if self.n == 1 {
            return Q::one();
        }
        let (rows, _) = self.projected_facets();
        polytope_volume(&rows, self.n - 1)
    }

    /// Exact containment `B ⊆ P_χ`, i.e. `⌈β(S)⌉ ≤ χ(S)` for every proper `S`, with `χ(V) = g`.
    pub fn contained_in(&self, chi: &SetFunction) -> Result<bool> {
        if chi.n() != self.n || *chi.range() != rat::q(self.g) {
            return Err(Error::Input(format!("set function must have range {} on {} elements", self.g, self.n)));
        }
        Ok((1..self.full()).all(|m| rat::q(self.ceil(m)) <= *chi.get(m)))
    }

    pub fn to_json(&self, ground: &GroundSet) -> Value {
        let floors: serde_json::Map<String, Value> =
            (1..self.full()).map(|m| (ground.key(m), json!(self.floors[m as usize]))).collect();
        json!({
            "key": self.key(),
            "g": self.g,
            "witness": self.witness.iter().map(rat::fmt).collect::<Vec<_>>(),
            "floors": floors,
            "full_dimensional": self.full_dimensional,
        })
    }
}

/// `contains_brick(χ, B)`.
pub fn contains_brick(chi: &SetFunction, b: &Brick) -> Result<bool> {
    b.contained_in(chi)
}

/// Vertices of `{x ∈ ℚ^d : a·x ≤ b}` (bounded), each with its set of tight rows.
fn vertices_of(rows: &[(Vec<Q>, Q)], d: usize) -> Vec<(Vec<Q>, BTreeSet<usize>)> {
    let mut found: Vec<(Vec<Q>, BTreeSet<usize>)> = Vec::new();
    let mut idx: Vec<usize> = (0..d).collect();
    if rows.len() < d {
        return found;
    }
    loop {
        let a: Vec<Vec<Q>> = idx.iter().map(|&i| rows[i].0.clone()).collect();
        let b: Vec<Q> = idx.iter().map(|&i| rows[i].1.clone()).collect();
        if linalg::rank(&a, d) == d {
            if let Some(x) = linalg::solve(&a, &b, d) {
                if rows.iter().all(|(r, c)| linalg::dot(r, &x) <= *c) && !found.iter().any(|(y, _)| *y == x) {
                    let tight = (0..rows.len()).filter(|&i| linalg::dot(&rows[i].0, &x) == rows[i].1).collect();
                    found.push((x, tight));
                }
            }
        }
        // Next combination.
        let mut k = d;
        loop {
            if k == 0 {
                return found;
            }
            k -= 1;
            if idx[k] < rows.len() - d + k {
                idx[k] += 1;
                for j in k + 1..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn affine_dim(points: &[&Vec<Q>], d: usize) -> usize {
    if points.is_empty() {
        return 0;
    }
    let diffs: Vec<Vec<Q>> = points[1..].iter().map(|p| (0..d).map(|i| &p[i] - &points[0][i]).collect()).collect();
    linalg::rank(&diffs, d)
}

/// Simplices of a pulling triangulation of the face spanned by `verts` (indices into `all`),
/// of dimension `k`.
fn triangulate(all: &[(Vec<Q>, BTreeSet<usize>)], verts: &[usize], k: usize, d: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![verts[0]]];
    }
    let apex = verts[0];
    let rows: BTreeSet<usize> = verts.iter().flat_map(|&v| all[v].1.iter().copied()).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    for r in rows {
        let sub: Vec<usize> = verts.iter().copied().filter(|&v| all[v].1.contains(&r)).collect();
        if sub.len() == verts.len() || sub.contains(&apex) || !seen.insert(sub.clone()) {
            continue;
        }
        let pts: Vec<&Vec<Q>> = sub.iter().map(|&v| &all[v].0).collect();
        if affine_dim(&pts, d) != k - 1 {
            continue;
        }
        for mut s in triangulate(all, &sub, k - 1, d) {
            s.push(apex);
            out.push(s);
        }
    }
    out
}

fn polytope_volume(rows: &[(Vec<Q>, Q)], d: usize) -> Q {
    let verts = vertices_of(rows, d);
    let idx: Vec<usize> = (0..verts.len()).collect();
    let mut fact = Q::one();
    (1..=d).for_each(|i| fact *= rat::q(i as i64));
    triangulate(&verts, &idx, d, d)
        .into_iter()
        .map(|s| {
            let m: Vec<Vec<Q>> = s[1..].iter().map(|&v| (0..d).map(|i| &verts[v].0[i] - &verts[s[0]].0[i]).collect()).collect();
            linalg::det(&m).abs() / &fact
        })
        .sum()
}

/// The full-dimensional brick containing vertex `i` of `Δ_g`.
pub fn vertex_brick(n: usize, g: i64, i: usize) -> Brick {
    let eps = rat::qr(1, n as i64 + 1);
    let beta: Vec<Q> = (0..n).map(|j| if j == i { rat::q(g) - &eps * rat::q(n as i64 - 1) } else { eps.clone() }).collect();
    brick_of(&beta, g).unwrap()
}

/// All full-dimensional bricks of `Δ_g` on `n` labels, by breadth-first search across walls.
pub fn enumerate_bricks(n: usize, g: i64, cap: usize) -> Result<Vec<Brick>> {
    if n == 0 || g < 1 {
        return Err(Error::Input("bricks need n ≥ 1 and g ≥ 1".into()));
    }
    let start = vertex_brick(n, g, 0);
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut out = vec![start.clone()];
    seen.insert(start.key(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let b = out[i].clone();
        for (side, p, t) in b.facets() {
            let value = if side.upper { b.ceil(side.set) } else { b.floors[side.set as usize] };
            if value == 0 || value == g {
                continue;
            }
            // Step across the wall along e_i − e_j, i ∈ S, j ∉ S.
            let inside = (0..n).find(|&k| side.set >> k & 1 == 1).unwrap();
            let outside = (0..n).find(|&k| side.set >> k & 1 == 0).unwrap();
            let step = &t / rat::q(2);
            let mut beta = p.clone();
            if side.upper {
                beta[inside] += &step;
                beta[outside] -= &step;
            } else {
                beta[inside] -= &step;
                beta[outside] += &step;
            }
            let nb = brick_of(&beta, g)?;
            debug_assert!(nb.full_dimensional);
            if let std::collections::btree_map::Entry::Vacant(e) = seen.entry(nb.key()) {
                if out.len() >= cap {
                    return Err(Error::Cap(format!("more than {cap} bricks")));
                }
                e.insert(out.len());
                queue.push_back(out.len());
                out.push(nb);
            }
        }
    }
    Ok(out)
}

/// Independent oracle: keys of bricks hit by `samples` random generic points of `Δ_g`.
pub fn sample_brick_keys(n: usize, g: i64, samples: usize, rng: &mut impl Rng) -> BTreeSet<String> {
    let den = 1_000_003i64;
    let mut keys = BTreeSet::new();
    for _ in 0..samples {
        let mut cuts: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(0..=g * den)).collect();
        cuts.sort_unstable();
        cuts.insert(0, 0);
        cuts.push(g * den);
        let beta: Vec<Q> = cuts.windows(2).map(|w| rat::qr(w[1] - w[0], den)).collect();
        let b = brick_of(&beta, g).unwrap();
        if b.full_dimensional {
            keys.insert(b.key());
        }
    }
    keys
}

/// A permissible slope-level pair with its data.
#[derive(Clone, Debug)]
pub struct PermissiblePair {
    pub pair: Pair,
    pub eta: SetFunction,
    pub upmin: SetFunction,
    pub polytope: PolytopeH,
    pub cone: ConeH,
    pub interior_point: Vec<Q>,
    /// Indices of the bricks contained in the polytope.
    pub bricks: Vec<usize>,
}

/// The result of [`enumerate_psl`].
#[derive(Clone, Debug)]
pub struct Psl {
    pub genus: i64,
    pub bound: i64,
    pub bricks: Vec<Brick>,
    pub pairs: Vec<PermissiblePair>,
}

/// All ordered partitions of `{0..n}`.
pub fn ordered_partitions(n: usize) -> Vec<OrderedPartition> {
    fn rec(v: usize, n: usize, level: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if v == n {
            let used: BTreeSet<usize> = level.iter().copied().collect();
            if used.len() == k {
                out.push(level.clone());
            }
            return;
        }
        for l in 0..k {
            level.push(l);
            rec(v + 1, n, level, k, out);
            level.pop();
        }
    }
    let mut out = Vec::new();
    for k in 1..=n {
        let mut levels = Vec::new();
        rec(0, n, &mut Vec::new(), k, &mut levels);
        out.extend(levels.into_iter().map(|l| OrderedPartition::from_levels(&l).unwrap()));
    }
    out
}

/// The default slope bound `2(g + max valence)`.
pub fn default_bound(g: &Multigraph) -> i64 {
    let valence = (0..g.n()).map(|v| g.arrows_from(v).count()).max().unwrap_or(0);
    2 * (g.total_genus() + valence) as i64
}

/// Slope functions with `A_s = A_π`, `|s| ≤ bound`, and `η_{s,π}` positive on every lower set
/// of levels; `η` positivity on a lower set `J` forces
/// `Σ_{vertical a from Jᶜ to J} (−s(ā) − 1) ≤ γ_π(J) + 𝔤(J) − 1`, with nonnegative terms.
fn slope_candidates(g: &Multigraph, pi: &OrderedPartition, gamma: &SetFunction, bound: i64) -> Vec<SlopeFunction> {
    let k = pi.num_levels();
    let genus = g.genus_setfn();
    let mut budget: Vec<i64> = vec![i64::MAX; k];
    for (c, b) in budget.iter_mut().enumerate().skip(1) {
        let lower: Mask = (0..c).fold(0, |m, l| m | pi.block_mask(l));
        *b = rat::to_i64(&(gamma.get(lower) + genus.get(lower))) - 1;
    }
    if budget.iter().any(|&b| b < 0) {
        return Vec::new();
    }
    // Upward arrow of each vertical edge, with the cuts it crosses.
    let vertical: Vec<(usize, usize, usize)> = (0..g.num_edges())
        .filter(|&e| pi.is_vertical(g, e))
        .map(|e| {
            let a = if pi.is_upward(g, 2 * e) { 2 * e } else { 2 * e + 1 };
            (a, pi.level(g.head(a)), pi.level(g.tail(a)))
        })
        .collect();
    let mut out = Vec::new();
    let mut s = SlopeFunction::zero(g);
    fn rec(
        i: usize,
        vertical: &[(usize, usize, usize)],
        budget: &mut [i64],
        bound: i64,
        s: &mut SlopeFunction,
        out: &mut Vec<SlopeFunction>,
    ) {
        if i == vertical.len() {
            out.push(s.clone());
            return;
        }
        let (a, lo, hi) = vertical[i];
        // Options (s(a), s(ā), cost): integer (k, −k, k − 1) and noninteger (k, −k − 1, k).
        let mut options = Vec::new();
        for k in 1..=bound {
            options.push((k, -k, k - 1));
        }
        for k in 0..bound {
            options.push((k, -k - 1, k));
        }
        for (up, down, cost) in options {
            if (lo + 1..=hi).any(|c| budget[c] < cost) {
                continue;
            }
            (lo + 1..=hi).for_each(|c| budget[c] -= cost);
            s.set(a, up);
            s.set(crate::graph::rev(a), down);
            rec(i + 1, vertical, budget, bound, s, out);
            (lo + 1..=hi).for_each(|c| budget[c] += cost);
        }
        s.set(a, 0);
        s.set(crate::graph::rev(a), 0);
    }
    rec(0, &vertical, &mut budget, bound, &mut s, &mut out);
    out
}

/// Pairs passing the set-function tests (positivity and simpleness of `η`), before the cone test.
fn eta_candidates(g: &Multigraph, bound: i64) -> Result<Vec<(Pair, SetFunction)>> {
    let mut out = Vec::new();
    for pi in ordered_partitions(g.n()) {
        let gamma = residue::gamma(g, &pi)?;
        for s in slope_candidates(g, &pi, &gamma, bound) {
            let p = Pair { s, pi: pi.clone() };
            let eta = residue::eta_with_gamma(g, &p, &gamma);
            if eta.is_positive() && eta.is_simple() {
                out.push((p, eta));
            }
        }
    }
    Ok(out)
}

/// Permissible slope-level pairs: `η_{s,π}` positive and simple and the open cone nonempty.
///
/// Slopes are searched up to `bound` (default [`default_bound`]); the search is repeated with
/// `bound + 1`, doubling until the candidate set is stable.
pub fn enumerate_psl(g: &Multigraph, bound: Option<i64>) -> Result<Psl> {
    let genus = g.total_genus() as i64;
    if genus < 1 {
        return Err(Error::Input("permissible pairs need genus g ≥ 1".into()));
    }
    if g.n() > 6 {
        return Err(Error::Input("permissible pairs are enumerated for at most 6 vertices".into()));
    }
    let mut b = bound.unwrap_or_else(|| default_bound(g)).max(1);
    let mut cands = eta_candidates(g, b)?;
    loop {
        let next = eta_candidates(g, b + 1)?;
        if next.len() == cands.len() {
            break;
        }
        b *= 2;
        cands = eta_candidates(g, b)?;
    }
    let bricks = enumerate_bricks(g.n(), genus, 100_000)?;
    let mut pairs = Vec::new();
    for (pair, eta) in cands {
        let cone = cones::cone_hrep(g, &pair)?;
        let Some(interior_point) = cone.interior_point() else { continue };
        let upmin = eta.upmin();
        let polytope = upmin.polytope_hrep()?;
        let contained =
            (0..bricks.len()).filter(|&i| bricks[i].contained_in(&upmin).unwrap_or(false)).collect();
        pairs.push(PermissiblePair { pair, eta, upmin, polytope, cone, interior_point, bricks: contained });
    }
    Ok(Psl { genus, bound: b, bricks, pairs })
}

impl Psl {
    /// Indices of `PSL(B)` for the brick with index `b`.
    pub fn for_brick(&self, b: usize) -> Vec<usize> {
        (0..self.pairs.len()).filter(|&i| self.pairs[i].bricks.contains(&b)).collect()
    }

    pub fn brick_index(&self, key: &str) -> Option<usize> {
        self.bricks.iter().position(|b| b.key() == key)
    }

    /// `𝔖_ℓ`: indices of permissible pairs whose open cone contains `ℓ`.
    pub fn pairs_at(&self, lengths: &[Q]) -> Vec<usize> {
        (0..self.pairs.len()).filter(|&i| self.pairs[i].cone.interior_membership(lengths)).collect()
    }

    pub fn to_json(&self, g: &Multigraph) -> Value {
        json!({
            "genus": self.genus,
            "bound": self.bound,
            "bricks": self.bricks.len(),
            "pairs": self.pairs.iter().map(|p| json!({
                "pair": p.pair.to_json(g),
                "label": p.pair.label(g),
                "upmin_eta": p.upmin.to_json(),
                "interior_point": g.lengths_to_json(&p.interior_point),
                "bricks": p.bricks.iter().map(|&b| self.bricks[b].key()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// A cone of a fan, as an intersection of slope-level cones.
#[derive(Clone, Debug)]
pub struct FanCone {
    /// Indices into the permissible pairs.
    pub pairs: Vec<usize>,
    pub hrep: PolytopeH,
    pub dim: i64,
    pub witness: Vec<Q>,
    /// Bricks whose polytopes contain this cone's pairs.
    pub bricks: Vec<usize>,
}

/// Cones meeting `ℝ^E_{>0}`; boundary faces are their coordinate restrictions.
#[derive(Clone, Debug)]
pub struct Fan {
    pub cones: Vec<FanCone>,
    /// `(i, j)` when cone `i` is a proper face of cone `j`.
    pub incidence: Vec<(usize, usize)>,
}

fn intersection_hrep(g: &Multigraph, psl: &Psl, pairs: &[usize]) -> PolytopeH {
    let mut p = PolytopeH {
        ambient: ConeH::edge_ground(g),
        inequalities: Vec::new(),
        equalities: Vec::new(),
    };
    for &i in pairs {
        let c = &psl.pairs[i].cone;
        p.inequalities.extend(c.ineqs.iter().map(|r| (r.coeffs.clone(), Q::zero())));
        p.equalities.extend(c.eqs.iter().map(|r| (r.coeffs.clone(), Q::zero())));
    }
    let mut p = p.with_nonnegativity();
    for rows in [&mut p.inequalities, &mut p.equalities] {
        let mut seen = BTreeSet::new();
        rows.retain(|r| seen.insert(r.clone()));
    }
    p
}

fn bounded(p: &PolytopeH) -> PolytopeH {
    let mut b = p.clone();
    b.inequalities.push((vec![Q::one(); p.ambient.len()], Q::one()));
    b
}

fn intersect(a: &PolytopeH, b: &PolytopeH) -> PolytopeH {
    let mut c = a.clone();
    c.inequalities.extend(b.inequalities.iter().cloned());
    c.equalities.extend(b.equalities.iter().cloned());
    c
}

/// The smallest face of `a` containing `c ⊆ a`: rows of `a` that vanish on all of `c` become
/// equalities.
fn smallest_face(a: &PolytopeH, c: &PolytopeH) -> PolytopeH {
    let cb = bounded(c);
    let mut f = a.clone();
    let mut keep = Vec::new();
    for (r, b) in &a.inequalities {
        let neg: Vec<Q> = r.iter().map(|x| -x).collect();
        match cb.maximize(&neg) {
            Some(m) if m == -b.clone() => f.equalities.push((r.clone(), b.clone())),
            _ => keep.push((r.clone(), b.clone())),
        }
    }
    f.inequalities = keep;
    f
}

/// `a ∩ b` is a face of both cones.
pub fn common_face(a: &PolytopeH, b: &PolytopeH) -> bool {
    let c = intersect(a, b);
    smallest_face(a, &c).is_subset_of(b) && smallest_face(b, &c).is_subset_of(a)
}

fn finish_fan(mut cones: Vec<FanCone>) -> Fan {
    cones.sort_by(|x, y| y.dim.cmp(&x.dim).then(x.pairs.cmp(&y.pairs)));
    let mut incidence = Vec::new();
    for i in 0..cones.len() {
        for j in 0..cones.len() {
            if i != j
                && cones[i].dim < cones[j].dim
                && cones[j].hrep.contains(&cones[i].witness)
                && cones[i].hrep.is_subset_of(&cones[j].hrep)
            {
                incidence.push((i, j));
            }
        }
    }
    Fan { cones, incidence }
}

/// `Σ_B`: the cones of `PSL(B)`, with the fan axioms certified by exact LPs: pairwise
/// intersections are common faces, each one meeting `ℝ^E_{>0}` is again a cone of the
/// collection, and open cones are pairwise disjoint.
pub fn fan_for_brick(g: &Multigraph, psl: &Psl, b: usize) -> Result<Fan> {
    let members = psl.for_brick(b);
    let hreps: Vec<PolytopeH> = members.iter().map(|&i| psl.pairs[i].cone.polytope(g)).collect();
    let m = g.num_edges();
    for x in 0..members.len() {
        for y in x + 1..members.len() {
            let (cx, cy) = (&psl.pairs[members[x]].cone, &psl.pairs[members[y]].cone);
            if cones::open_intersection_point(m, &[cx, cy]).is_some() {
                return Err(Error::Property("two open cones of PSL(B) intersect".into()));
            }
            if !common_face(&hreps[x], &hreps[y]) {
                return Err(Error::Property("cone intersection is not a common face".into()));
            }
            let c = intersect(&hreps[x], &hreps[y]);
            let positive = {
                let rows: Vec<Vec<Q>> = c.inequalities.iter().map(|(r, _)| r.clone()).collect();
                let eqs: Vec<Vec<Q>> = c.equalities.iter().map(|(r, _)| r.clone()).collect();
                cones::margin(m, &[], &rows, &eqs).0.is_positive()
            };
            if positive && !hreps.iter().any(|h| h.same_set(&c)) {
                return Err(Error::Property("a common face meeting the open orthant is not in the fan".into()));
            }
        }
    }
    let cones = members
        .iter()
        .zip(hreps)
        .map(|(&i, hrep)| FanCone {
            pairs: vec![i],
            dim: m as i64 - cones::int_genus(g, &psl.pairs[i].pair) as i64,
            hrep,
            witness: psl.pairs[i].interior_point.clone(),
            bricks: psl.pairs[i].bricks.clone(),
        })
        .collect();
    Ok(finish_fan(cones))
}

/// The canonical fan `Σ = ⋀_B Σ_B`: one cone `⋂_{(s,π)∈𝔖} σ_{s,π}` for each set `𝔖` made of one
/// `PSL(B)` member per brick whose open cones have a common point. Each cone records its `𝔖`.
pub fn canonical_fan(g: &Multigraph, psl: &Psl) -> Result<Fan> {
    let m = g.num_edges();
    let mut groups: Vec<Vec<usize>> = (0..psl.bricks.len()).map(|b| psl.for_brick(b)).collect();
    if groups.iter().any(Vec::is_empty) {
        return Err(Error::Property("a brick has no permissible pair".into()));
    }
    groups.sort();
    groups.dedup();
    let mut found: BTreeMap<Vec<usize>, Vec<Q>> = BTreeMap::new();
    fn rec(
        k: usize,
        groups: &[Vec<usize>],
        chosen: &mut Vec<usize>,
        psl: &Psl,
        m: usize,
        found: &mut BTreeMap<Vec<usize>, Vec<Q>>,
    ) {
        let cs: Vec<&ConeH> = chosen.iter().map(|&i| &psl.pairs[i].cone).collect();
        let Some(pt) = cones::open_intersection_point(m, &cs) else { return };
        if k == groups.len() {
            let mut key = chosen.clone();
            key.sort_unstable();
            key.dedup();
            found.entry(key).or_insert(pt);
            return;
        }
        for &i in &groups[k] {
            let dup = chosen.contains(&i);
            if !dup {
                chosen.push(i);
            }
            rec(k + 1, groups, chosen, psl, m, found);
            if !dup {
                chosen.pop();
            }
        }
    }
    rec(0, &groups, &mut Vec::new(), psl, m, &mut found);
    let cones = found
        .into_iter()
        .map(|(pairs, witness)| {
            let hrep = intersection_hrep(g, psl, &pairs);
            let eqs: Vec<Vec<Q>> = hrep.equalities.iter().map(|(r, _)| r.clone()).collect();
            let dim = m as i64 - linalg::rank(&eqs, m) as i64;
            let bricks =
                (0..psl.bricks.len()).filter(|&b| pairs.iter().any(|i| psl.pairs[*i].bricks.contains(&b))).collect();
            FanCone { pairs, hrep, dim, witness, bricks }
        })
        .collect();
    Ok(finish_fan(cones))
}

impl Fan {
    pub fn maximal(&self) -> Vec<usize> {
        (0..self.cones.len()).filter(|&i| !self.incidence.iter().any(|&(f, _)| f == i)).collect()
    }

    pub fn to_json(&self, g: &Multigraph, psl: &Psl) -> Value {
        let cones: Vec<Value> = self
            .cones
            .iter()
            .map(|c| {
                let hrep = json!({
                    "ineqs": c.hrep.inequalities.iter().filter(|(r, _)| r.iter().filter(|x| !x.is_zero()).count() > 1 || r.iter().any(|x| x.is_positive()))
                        .map(|(r, _)| edge_row(g, r)).collect::<Vec<_>>(),
                    "eqs": c.hrep.equalities.iter().map(|(r, _)| edge_row(g, r)).collect::<Vec<_>>(),
                });
                json!({
                    "pairs": c.pairs.iter().map(|&i| psl.pairs[i].pair.to_json(g)).collect::<Vec<_>>(),
                    "hrep": hrep,
                    "dim": c.dim,
                    "witness": g.lengths_to_json(&c.witness),
                    "bricks": c.bricks.iter().map(|&b| psl.bricks[b].key()).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "support": "nonnegative orthant",
            "cones": cones,
            "incidence": self.incidence.iter().map(|&(i, j)| json!({"face": i, "of": j})).collect::<Vec<_>>(),
        })
    }
}

fn edge_row(g: &Multigraph, r: &[Q]) -> Value {
    let m: serde_json::Map<String, Value> = r
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (g.edges()[e].id.clone(), json!(rat::fmt(c))))
        .collect();
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rat::{q, qr};

    #[test]
    fn segment_bricks() {
        assert_eq!(enumerate_bricks(2, 1, 100).unwrap().len(), 1);
        assert_eq!(enumerate_bricks(2, 2, 100).unwrap().len(), 2);
        let b = brick_of(&[qr(1, 2), qr(1, 2)], 1).unwrap();
        assert!(b.full_dimensional);
        assert!(!brick_of(&[q(1), q(0)], 1).unwrap().full_dimensional);
    }

    #[test]
    fn tiling_volumes() {
        for (n, g) in [(2, 3), (3, 2), (3, 3), (4, 2)] {
            let bricks = enumerate_bricks(n, g, 10_000).unwrap();
            let total: Q = bricks.iter().map(Brick::volume).sum();
            let mut want = Q::one();
            for i in 1..n as i64 {
                want = want * q(g) / q(i);
            }
            assert_eq!(total, want, "n={n} g={g}");
        }
    }

    #[test]
    fn vertex_brick_is_b0() {
        let b = vertex_brick(4, 3, 0);
        assert_eq!(b.floors[0b1110], 0);
        assert_eq!(b.ceil(0b1110), 1);
        assert_eq!(b.volume(), qr(1, 6));
    }

    #[test]
    fn two_cycle_psl_is_trivial() {
        let g = fixtures::two_cycle();
        let psl = enumerate_psl(&g, None).unwrap();
        assert_eq!(psl.pairs.len(), 1);
        assert_eq!(psl.pairs[0].pair, Pair::trivial(&g));
    }
}
