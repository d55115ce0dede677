//! Multigraphs with arrows, level structures, slope functions and the slope function `ζ_s`.
//!
//! Every edge `e` carries two arrows: `2e` runs from the first listed endpoint to the second
//! (`"e:+"`), `2e+1` runs back (`"e:-"`). Loops and parallel edges need no special casing.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rat::{self, Q};
use crate::setfn::{GroundSet, Mask, SetFunction};

/// Arrow index: `2·edge + orientation`.
pub type Arrow = usize;

/// The reversed arrow `ā`.
pub fn rev(a: Arrow) -> Arrow {
    a ^ 1
}

pub fn edge_of(a: Arrow) -> usize {
    a / 2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub ends: (usize, usize),
}

/// A connected multigraph with a genus function on its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    vertices: GroundSet,
    edges: Vec<Edge>,
    genus: Vec<u32>,
}

/// Result of [`Multigraph::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub connected: bool,
    pub genus: i64,
}

impl Multigraph {
    /// Builds and validates a graph; edges are `(id, tail label, head label)`.
    pub fn new(vertices: GroundSet, edges: Vec<Edge>, genus: Vec<u32>) -> Result<Self> {
        let n = vertices.len();
        if genus.len() != n {
            return Err(Error::Input("genus function must have one entry per vertex".into()));
        }
        for (i, e) in edges.iter().enumerate() {
            if e.ends.0 >= n || e.ends.1 >= n {
                return Err(Error::Input(format!("edge {} has an unknown endpoint", e.id)));
            }
            if edges[..i].iter().any(|f| f.id == e.id) {
                return Err(Error::Input(format!("duplicate edge id {:?}", e.id)));
            }
        }
        let g = Multigraph { vertices, edges, genus };
        if !g.validate().connected {
            return Err(Error::Input("graph not connected".into()));
        }
        Ok(g)
    }

    /// Convenience constructor from labelled pairs, with genus `0` everywhere.
    pub fn from_pairs(labels: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self> {
        let vertices = GroundSet::new(labels.iter().copied())?;
        let edges = edges
            .iter()
            .map(|(id, u, v)| {
                Ok(Edge { id: id.to_string(), ends: (vertices.index_of(u)?, vertices.index_of(v)?) })
            })
            .collect::<Result<Vec<_>>>()?;
        let n = vertices.len();
        Multigraph::new(vertices, edges, vec![0; n])
    }

    /// Same graph, different genus function.
    pub fn with_genus(mut self, genus: Vec<u32>) -> Result<Self> {
        if genus.len() != self.n() {
            return Err(Error::Input("genus function must have one entry per vertex".into()));
        }
        self.genus = genus;
        Ok(self)
    }

    /// Connectivity (by traversal) and the cycle rank `|E| − |V| + 1`.
    pub fn validate(&self) -> Validation {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for (x, y) in [(e.ends.0, e.ends.1), (e.ends.1, e.ends.0)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        Validation {
            connected: seen.iter().all(|&s| s),
            genus: self.edges.len() as i64 - n as i64 + 1,
        }
    }

    pub fn vertices(&self) -> &GroundSet {
        &self.vertices
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_arrows(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn genus_fn(&self) -> &[u32] {
        &self.genus
    }

    /// `g(G) = |E| − |V| + 1`.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + 1 - self.n()
    }

    /// `g = |E| − |V| + 1 + 𝔤(V)`.
    pub fn total_genus(&self) -> usize {
        self.cycle_rank() + self.genus.iter().map(|&x| x as usize).sum::<usize>()
    }

    /// `𝔤(I) = Σ_{v∈I} 𝔤(v)` as a set function.
    pub fn genus_setfn(&self) -> SetFunction {
        SetFunction::modular(&self.vertices, &self.genus.iter().map(|&x| rat::q(x as i64)).collect::<Vec<_>>())
    }

    pub fn tail(&self, a: Arrow) -> usize {
        let e = &self.edges[edge_of(a)];
        if a.is_multiple_of(2) {
            e.ends.0
        } else {
            e.ends.1
        }
    }

    pub fn head(&self, a: Arrow) -> usize {
        self.tail(rev(a))
    }

    pub fn arrows(&self) -> std::ops::Range<Arrow> {
        0..self.num_arrows()
    }

    /// `𝔼_v`: arrows with tail `v`.
    pub fn arrows_from(&self, v: usize) -> impl Iterator<Item = Arrow> + '_ {
        self.arrows().filter(move |&a| self.tail(a) == v)
    }

    /// `𝔼(I, J)`: arrows with tail in `I` and head in `J`.
    pub fn arrows_between(&self, i: Mask, j: Mask) -> impl Iterator<Item = Arrow> + '_ {
        self.arrows().filter(move |&a| i >> self.tail(a) & 1 == 1 && j >> self.head(a) & 1 == 1)
    }

    pub fn arrow_key(&self, a: Arrow) -> String {
        format!("{}:{}", self.edges[edge_of(a)].id, if a.is_multiple_of(2) { '+' } else { '-' })
    }

    pub fn parse_arrow(&self, key: &str) -> Result<Arrow> {
        let bad = || Error::Input(format!("bad arrow key {key:?}"));
        let (id, o) = key.rsplit_once(':').ok_or_else(bad)?;
        let e = self.edge_index(id)?;
        match o {
            "+" => Ok(2 * e),
            "-" => Ok(2 * e + 1),
            _ => Err(bad()),
        }
    }

    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.id == id)
            .ok_or_else(|| Error::Input(format!("unknown edge {id:?}")))
    }

    /// The arrow of edge `id` running from `tail` to `head`.
    pub fn arrow(&self, id: &str, tail: &str) -> Arrow {
        let e = self.edge_index(id).expect("known edge");
        let t = self.vertices.index_of(tail).expect("known vertex");
        if self.edges[e].ends.0 == t {
            2 * e
        } else {
            assert_eq!(self.edges[e].ends.1, t, "{tail} is not an end of {id}");
            2 * e + 1
        }
    }

    pub fn to_json(&self) -> Value {
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|e| {
                json!({"id": e.id, "ends": [self.vertices.elements()[e.ends.0], self.vertices.elements()[e.ends.1]]})
            })
            .collect();
        let genus: BTreeMap<&str, u32> = self
            .vertices
            .elements()
            .iter()
            .map(String::as_str)
            .zip(self.genus.iter().copied())
            .collect();
        json!({"vertices": self.vertices.elements(), "edges": edges, "genus": genus})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Input(format!("graph JSON: {m}"));
        let labels: Vec<String> = v
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"vertices\""))?
            .iter()
            .map(|x| x.as_str().map(String::from).ok_or_else(|| bad("vertex labels must be strings")))
            .collect::<Result<_>>()?;
        let vertices = GroundSet::new(labels)?;
        let mut edges = Vec::new();
        for e in v.get("edges").and_then(Value::as_array).ok_or_else(|| bad("missing \"edges\""))? {
            let id = e.get("id").and_then(Value::as_str).ok_or_else(|| bad("edge without id"))?;
            let ends = e.get("ends").and_then(Value::as_array).ok_or_else(|| bad("edge without ends"))?;
            if ends.len() != 2 {
                return Err(bad("an edge has exactly two ends"));
            }
            let end = |i: usize| vertices.index_of(ends[i].as_str().ok_or_else(|| bad("ends must be labels"))?);
            edges.push(Edge { id: id.to_string(), ends: (end(0)?, end(1)?) });
        }
        let mut genus = vec![0; vertices.len()];
        if let Some(map) = v.get("genus").and_then(Value::as_object) {
            for (k, x) in map {
                genus[vertices.index_of(k)?] =
                    x.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(|| bad("genus values are naturals"))?;
            }
        }
        Multigraph::new(vertices, edges, genus)
    }

    /// Parses an edge-length map `{"e01": "1/1", ...}`; lengths must be positive.
    pub fn lengths_from_json(&self, v: &Value) -> Result<Vec<Q>> {
        let map = v.as_object().ok_or_else(|| Error::Input("edge lengths must be an object".into()))?;
        let mut out = vec![None; self.num_edges()];
        for (k, x) in map {
            let l = rat::from_json(x)?;
            if !l.is_positive() {
                return Err(Error::Input(format!("edge length of {k} must be positive")));
            }
            out[self.edge_index(k)?] = Some(l);
        }
        out.into_iter()
            .enumerate()
            .map(|(e, l)| l.ok_or_else(|| Error::Input(format!("missing length for {}", self.edges[e].id))))
            .collect()
    }

    pub fn lengths_to_json(&self, l: &[Q]) -> Value {
        let m: BTreeMap<&str, String> =
            self.edges.iter().zip(l).map(|(e, x)| (e.id.as_str(), rat::fmt(x))).collect();
        json!(m)
    }

    /// Parses a vertex map `{"u0": "1/1", ...}`.
    pub fn vertex_values_from_json(&self, v: &Value) -> Result<Vec<Q>> {
        let map = v.as_object().ok_or_else(|| Error::Input("vertex values must be an object".into()))?;
        let mut out = vec![None; self.n()];
        for (k, x) in map {
            out[self.vertices.index_of(k)?] = Some(rat::from_json(x)?);
        }
        out.into_iter()
            .enumerate()
            .map(|(i, x)| x.ok_or_else(|| Error::Input(format!("missing value for {}", self.vertices.elements()[i]))))
            .collect()
    }

    pub fn vertex_values_to_json(&self, h: &[Q]) -> Value {
        let m: BTreeMap<&str, String> =
            self.vertices.elements().iter().zip(h).map(|(v, x)| (v.as_str(), rat::fmt(x))).collect();
        json!(m)
    }
}

/// An ordered partition of the vertices; block index is the level, increasing upward.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedPartition {
    blocks: Vec<Vec<usize>>,
    level: Vec<usize>,
}

impl OrderedPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut level = vec![usize::MAX; n];
        for (k, b) in blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(Error::Input("partition blocks must be nonempty".into()));
            }
            for &v in b {
                if v >= n || level[v] != usize::MAX {
                    return Err(Error::Input("partition blocks must be disjoint vertex sets".into()));
                }
                level[v] = k;
            }
        }
        if level.contains(&usize::MAX) {
            return Err(Error::Input("partition must cover every vertex".into()));
        }
        let mut blocks = blocks;
        blocks.iter_mut().for_each(|b| b.sort_unstable());
        Ok(OrderedPartition { blocks, level })
    }

    /// The one-block partition.
    pub fn trivial(n: usize) -> Self {
        OrderedPartition::new(n, vec![(0..n).collect()]).unwrap()
    }

    pub fn from_levels(level: &[usize]) -> Result<Self> {
        let k = level.iter().max().map_or(0, |&m| m + 1);
        let mut blocks = vec![Vec::new(); k];
        for (v, &l) in level.iter().enumerate() {
            blocks[l].push(v);
        }
        OrderedPartition::new(level.len(), blocks)
    }

    /// Fibers of `h`, ordered by increasing value.
    pub fn level_from(h: &[Q]) -> Self {
        let mut values: Vec<&Q> = h.iter().collect();
        values.sort();
        values.dedup();
        let level: Vec<usize> = h.iter().map(|x| values.binary_search(&x).unwrap()).collect();
        OrderedPartition::from_levels(&level).unwrap()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_levels(&self) -> usize {
        self.blocks.len()
    }

    pub fn level(&self, v: usize) -> usize {
        self.level[v]
    }

    pub fn levels(&self) -> &[usize] {
        &self.level
    }

    pub fn block_mask(&self, k: usize) -> Mask {
        self.blocks[k].iter().fold(0, |m, &v| m | 1 << v)
    }

    pub fn is_upward(&self, g: &Multigraph, a: Arrow) -> bool {
        self.level[g.tail(a)] > self.level[g.head(a)]
    }

    pub fn is_vertical(&self, g: &Multigraph, e: usize) -> bool {
        let (u, v) = g.edges()[e].ends;
        self.level[u] != self.level[v]
    }

    /// `A_π`: upward arrows.
    pub fn upward_arrows(&self, g: &Multigraph) -> Vec<Arrow> {
        g.arrows().filter(|&a| self.is_upward(g, a)).collect()
    }

    /// `self` is obtained from `finer` by merging consecutive blocks.
    pub fn coarsens(&self, finer: &OrderedPartition) -> bool {
        let n = self.level.len();
        (0..n).all(|u| {
            (0..n).all(|v| {
                let (fu, fv) = (finer.level[u], finer.level[v]);
                let (cu, cv) = (self.level[u], self.level[v]);
                fu > fv && cu >= cv || fu == fv && cu == cv || fu < fv && cu <= cv
            })
        })
    }

    pub fn to_json(&self, g: &Multigraph) -> Value {
        json!(self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&v| g.vertices().elements()[v].clone()).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    }

    pub fn from_json(g: &Multigraph, v: &Value) -> Result<Self> {
        let blocks = v
            .as_array()
            .ok_or_else(|| Error::Input("a partition is an array of arrays".into()))?
            .iter()
            .map(|b| {
                b.as_array()
                    .ok_or_else(|| Error::Input("a partition is an array of arrays".into()))?
                    .iter()
                    .map(|x| g.vertices().index_of(x.as_str().unwrap_or("")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        OrderedPartition::new(g.n(), blocks)
    }
}

/// Integer labels on arrows with `s(a) + s(ā) ∈ {−1, 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlopeFunction {
    values: Vec<i64>,
}

/// The arrow and edge sets attached to a slope function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeSets {
    /// `A_s = {a : s(ā) < 0}`.
    pub upward: Vec<Arrow>,
    /// `Ā_s`: reverses of `A_s`.
    pub downward: Vec<Arrow>,
    /// Integer vertical edges.
    pub int_edges: Vec<usize>,
    /// `A^int_s`: upward arrows over integer edges.
    pub int_upward: Vec<Arrow>,
    /// Arrows with `s(a) = s(ā) = 0`.
    pub horizontal: Vec<Arrow>,
}

impl SlopeFunction {
    pub fn new(g: &Multigraph, values: Vec<i64>) -> Result<Self> {
        if values.len() != g.num_arrows() {
            return Err(Error::Input("slope function needs one value per arrow".into()));
        }
        for a in g.arrows().step_by(2) {
            let t = values[a] + values[rev(a)];
            if t != 0 && t != -1 {
                return Err(Error::Input(format!(
                    "s(a) + s(ā) = {t} on edge {}; must be 0 or -1",
                    g.edges()[edge_of(a)].id
                )));
            }
        }
        Ok(SlopeFunction { values })
    }

    pub fn zero(g: &Multigraph) -> Self {
        SlopeFunction { values: vec![0; g.num_arrows()] }
    }

    /// `s(a) = ⌊(h(tail) − h(head)) / ℓ_a⌋`.
    pub fn slope_from(g: &Multigraph, lengths: &[Q], h: &[Q]) -> Self {
        let values = g
            .arrows()
            .map(|a| {
                let l = &lengths[edge_of(a)];
                assert!(l.is_positive(), "edge lengths must be positive");
                rat::floor_i64(&((&h[g.tail(a)] - &h[g.head(a)]) / l))
            })
            .collect();
        SlopeFunction { values }
    }

    pub fn get(&self, a: Arrow) -> i64 {
        self.values[a]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn set(&mut self, a: Arrow, v: i64) {
        self.values[a] = v;
    }

    pub fn is_integer_edge(&self, e: usize) -> bool {
        self.values[2 * e] + self.values[2 * e + 1] == 0
    }

    pub fn is_horizontal(&self, a: Arrow) -> bool {
        self.values[a] == 0 && self.values[rev(a)] == 0
    }

    /// `a ∈ A_s`.
    pub fn is_upward(&self, a: Arrow) -> bool {
        self.values[rev(a)] < 0
    }

    pub fn is_vertical_edge(&self, e: usize) -> bool {
        !self.is_horizontal(2 * e)
    }

    pub fn sets(&self, g: &Multigraph) -> SlopeSets {
        let upward: Vec<Arrow> = g.arrows().filter(|&a| self.is_upward(a)).collect();
        let downward = upward.iter().map(|&a| rev(a)).collect();
        let int_edges: Vec<usize> = (0..g.num_edges())
            .filter(|&e| self.is_vertical_edge(e) && self.is_integer_edge(e))
            .collect();
        let int_upward = upward.iter().copied().filter(|&a| self.is_integer_edge(edge_of(a))).collect();
        let horizontal = g.arrows().filter(|&a| self.is_horizontal(a)).collect();
        SlopeSets { upward, downward, int_edges, int_upward, horizontal }
    }

    /// Pointwise `self ≥ other`.
    pub fn dominates(&self, other: &Self) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a >= b)
    }

    /// `ζ_s(I) = |A_s(Iᶜ, I)| + Σ_{a∈𝔼(I,Iᶜ)} s(a)`.
    pub fn zeta(&self, g: &Multigraph) -> SetFunction {
        let full = g.vertices().full();
        SetFunction::from_fn(g.vertices(), |m| {
            let c = full & !m;
            let up = g.arrows_between(c, m).filter(|&a| self.is_upward(a)).count() as i64;
            let sum: i64 = g.arrows_between(m, c).map(|a| self.values[a]).sum();
            rat::q(up + sum)
        })
        .unwrap()
    }

    pub fn to_json(&self, g: &Multigraph) -> Value {
        let m: BTreeMap<String, i64> = g.arrows().map(|a| (g.arrow_key(a), self.values[a])).collect();
        json!(m)
    }

    pub fn from_json(g: &Multigraph, v: &Value) -> Result<Self> {
        let map = v.as_object().ok_or_else(|| Error::Input("a slope function is an object".into()))?;
        let mut values = vec![None; g.num_arrows()];
        for (k, x) in map {
            let s = x
                .as_i64()
                .or_else(|| x.as_str().and_then(|s| s.trim().parse().ok()))
                .ok_or_else(|| Error::Input(format!("slope of {k} must be an integer")))?;
            values[g.parse_arrow(k)?] = Some(s);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(a, x)| x.ok_or_else(|| Error::Input(format!("missing slope for {}", g.arrow_key(a)))))
            .collect::<Result<_>>()?;
        SlopeFunction::new(g, values)
    }
}

/// A slope function and an ordered partition with the same upward arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair {
    pub s: SlopeFunction,
    pub pi: OrderedPartition,
}

/// `A_s = A_π`.
pub fn is_slope_level_pair(g: &Multigraph, s: &SlopeFunction, pi: &OrderedPartition) -> bool {
    g.arrows().all(|a| s.is_upward(a) == pi.is_upward(g, a))
}

impl Pair {
    pub fn new(g: &Multigraph, s: SlopeFunction, pi: OrderedPartition) -> Result<Self> {
        if !is_slope_level_pair(g, &s, &pi) {
            return Err(Error::Input("upward arrows of s and π differ (not a slope-level pair)".into()));
        }
        Ok(Pair { s, pi })
    }

    pub fn trivial(g: &Multigraph) -> Self {
        Pair { s: SlopeFunction::zero(g), pi: OrderedPartition::trivial(g.n()) }
    }

    /// The pair induced by edge lengths and a level function.
    pub fn from_lengths(g: &Multigraph, lengths: &[Q], h: &[Q]) -> Self {
        Pair { s: SlopeFunction::slope_from(g, lengths, h), pi: OrderedPartition::level_from(h) }
    }

    pub fn to_json(&self, g: &Multigraph) -> Value {
        json!({"slopes": self.s.to_json(g), "partition": self.pi.to_json(g)})
    }

    pub fn from_json(g: &Multigraph, v: &Value) -> Result<Self> {
        let s = SlopeFunction::from_json(g, v.get("slopes").ok_or_else(|| Error::Input("missing \"slopes\"".into()))?)?;
        let pi = OrderedPartition::from_json(
            g,
            v.get("partition").ok_or_else(|| Error::Input("missing \"partition\"".into()))?,
        )?;
        Pair::new(g, s, pi)
    }

    /// Human-readable label, e.g. `[u1 u2 u3 | u0] e01:+=1 …` listing nonzero slopes.
    pub fn label(&self, g: &Multigraph) -> String {
        PairLabel(g, self).to_string()
    }
}

struct PairLabel<'a>(&'a Multigraph, &'a Pair);

impl fmt::Display for PairLabel<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (g, p) = (self.0, self.1);
        let blocks: Vec<String> = p
            .pi
            .blocks()
            .iter()
            .map(|b| b.iter().map(|&v| g.vertices().elements()[v].as_str()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", blocks.join(" | "))?;
        for a in g.arrows().filter(|&a| p.s.get(a) != 0) {
            write!(f, " {}={}", g.arrow_key(a), p.s.get(a))?;
        }
        Ok(())
    }
}

/// `|A^int_s(I)|` as a set function: integer upward arrows with both ends in `I`.
pub fn int_arrows_inside(g: &Multigraph, s: &SlopeFunction) -> SetFunction {
    let int_up = s.sets(g).int_upward;
    SetFunction::from_fn(g.vertices(), |m| {
        rat::q(int_up.iter().filter(|&&a| m >> g.tail(a) & 1 == 1 && m >> g.head(a) & 1 == 1).count() as i64)
    })
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rat::q;

    #[test]
    fn k4_example_pair() {
        let g = fixtures::k4();
        let l: Vec<Q> = [1, 2, 2, 1, 1, 1].iter().map(|&x| q(x)).collect();
        let h = [q(1), q(0), q(0), q(0)];
        let p = Pair::from_lengths(&g, &l, &h);
        assert!(is_slope_level_pair(&g, &p.s, &p.pi));
        assert_eq!(p.pi.blocks(), &[vec![1, 2, 3], vec![0]]);
        assert_eq!(p.s.get(g.arrow("e01", "u0")), 1);
        assert_eq!(p.s.get(g.arrow("e01", "u1")), -1);
        assert_eq!(p.s.get(g.arrow("e02", "u0")), 0);
        assert_eq!(p.s.get(g.arrow("e02", "u2")), -1);
        let sets = p.s.sets(&g);
        assert_eq!(sets.int_upward, vec![g.arrow("e01", "u0")]);
        // ζ(I) = [u0 ∈ I] − [u0, u1 ∈ I]: a modular part plus −|A^int(I)|.
        let z = p.s.zeta(&g);
        for m in 1..16u32 {
            let expect = (m & 1) as i64 - (m & 3 == 3) as i64;
            assert_eq!(*z.get(m), q(expect), "ζ at {m:b}");
        }
    }

    #[test]
    fn two_vertex_slopes() {
        let g = Multigraph::from_pairs(&["u", "v"], &[("e", "u", "v")]).unwrap();
        let s = SlopeFunction::slope_from(&g, &[q(2)], &[q(5), q(0)]);
        assert_eq!(s.values(), &[2, -3]);
    }

    #[test]
    fn genus_and_connectivity() {
        assert_eq!(fixtures::k4().validate().genus, 3);
        let loop_ = Multigraph::from_pairs(&["v"], &[("l", "v", "v")]).unwrap();
        assert_eq!(loop_.validate().genus, 1);
        assert!(Multigraph::from_pairs(&["a", "b"], &[]).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let g = fixtures::figure1();
        assert_eq!(Multigraph::from_json(&g.to_json()).unwrap(), g);
        let p = Pair::trivial(&g);
        assert_eq!(Pair::from_json(&g, &p.to_json(&g)).unwrap(), p);
    }
}
