//! Set functions on a finite ground set: submodularity, adjoints, the `UpMin` and `DownSum`
//! transforms, the functions `ξ_J`, simpleness and base polytopes.
//!
//! A [`SetFunction`] is a dense table over all `2^n` subsets, indexed by bitmask (bit `i` is the
//! `i`-th ground element). Values are exact rationals and the empty set always maps to `0`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg;
use crate::lp::{Cmp, Lp};
use crate::rat::{self, Q};

/// Largest supported ground set.
pub const MAX_GROUND: usize = 20;

/// Subset of a ground set, as a bitmask.
pub type Mask = u32;

/// Ordered sequence of distinct labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSet {
    elements: Vec<String>,
}

impl GroundSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let elements: Vec<String> = labels.into_iter().map(Into::into).collect();
        if elements.is_empty() || elements.len() > MAX_GROUND {
            return Err(Error::Input(format!(
                "ground set size {} outside 1..={MAX_GROUND}",
                elements.len()
            )));
        }
        for (i, e) in elements.iter().enumerate() {
            if elements[..i].contains(e) {
                return Err(Error::Input(format!("duplicate label {e:?}")));
            }
        }
        Ok(GroundSet { elements })
    }

    /// Labels `prefix0 … prefix{n-1}`.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        GroundSet::new((0..n).map(|i| format!("{prefix}{i}"))).expect("valid ground set")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn full(&self) -> Mask {
        if self.len() == 32 {
            Mask::MAX
        } else {
            (1 << self.len()) - 1
        }
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.elements
            .iter()
            .position(|e| e == label)
            .ok_or_else(|| Error::Input(format!("unknown element {label:?}")))
    }

    pub fn mask_of<'a>(&self, labels: impl IntoIterator<Item = &'a str>) -> Result<Mask> {
        labels
            .into_iter()
            .try_fold(0, |m, l| Ok(m | 1 << self.index_of(l)?))
    }

    /// Comma-joined labels of a subset, in ground order; `""` for the empty set.
    pub fn key(&self, m: Mask) -> String {
        self.labels(m).join(",")
    }

    pub fn labels(&self, m: Mask) -> Vec<&str> {
        (0..self.len())
            .filter(|i| m >> i & 1 == 1)
            .map(|i| self.elements[i].as_str())
            .collect()
    }

    pub fn parse_key(&self, key: &str) -> Result<Mask> {
        if key.trim().is_empty() {
            return Ok(0);
        }
        self.mask_of(key.split(',').map(str::trim))
    }
}

/// Iterates over the elements (bit positions) of a mask.
pub fn bits(m: Mask) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| m >> i & 1 == 1)
}

/// Iterates over all submasks of `m`, including `0` and `m`.
pub fn submasks(m: Mask) -> impl Iterator<Item = Mask> {
    let mut next = Some(m);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & m) };
        Some(cur)
    })
}

/// A function `2^V → ℚ` with value `0` at the empty set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFunction {
    ground: GroundSet,
    values: Vec<Q>,
}

/// Flags decided by exhaustive scans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Properties {
    pub submodular: bool,
    pub supermodular: bool,
    pub nondecreasing: bool,
    pub nonnegative: bool,
    pub positive: bool,
    pub simple: bool,
    pub range: Q,
}

impl SetFunction {
    pub fn zero(ground: &GroundSet) -> Self {
        SetFunction { ground: ground.clone(), values: vec![Q::zero(); 1 << ground.len()] }
    }

    /// Builds a function from `f(mask)`. The value at `0` must be zero.
    pub fn from_fn(ground: &GroundSet, f: impl FnMut(Mask) -> Q) -> Result<Self> {
        let values: Vec<Q> = (0..1u32 << ground.len()).map(f).collect();
        Self::from_values(ground, values)
    }

    pub fn from_values(ground: &GroundSet, values: Vec<Q>) -> Result<Self> {
        if values.len() != 1 << ground.len() {
            return Err(Error::Input("value table has the wrong length".into()));
        }
        if !values[0].is_zero() {
            return Err(Error::Input("a set function must vanish on the empty set".into()));
        }
        Ok(SetFunction { ground: ground.clone(), values })
    }

    /// The modular function `I ↦ Σ_{v∈I} q(v)`.
    pub fn modular(ground: &GroundSet, q: &[Q]) -> Self {
        assert_eq!(q.len(), ground.len());
        Self::from_fn(ground, |m| bits(m).map(|i| q[i].clone()).sum()).unwrap()
    }

    /// `1_J`: the indicator of the single subset `J`.
    pub fn indicator(ground: &GroundSet, j: Mask) -> Result<Self> {
        if j == 0 {
            return Err(Error::Input("the indicator of the empty set is not a set function".into()));
        }
        Self::from_fn(ground, |m| if m == j { rat::one() } else { Q::zero() })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.len()
    }

    pub fn get(&self, m: Mask) -> &Q {
        &self.values[m as usize]
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    /// Value at the subset named by labels.
    pub fn at(&self, labels: &[&str]) -> Q {
        self.get(self.ground.mask_of(labels.iter().copied()).expect("known labels")).clone()
    }

    pub fn set(&mut self, m: Mask, v: Q) {
        assert!(m != 0 || v.is_zero(), "value at the empty set must stay zero");
        self.values[m as usize] = v;
    }

    pub fn range(&self) -> &Q {
        self.get(self.ground.full())
    }

    fn zip(&self, other: &Self, f: impl Fn(&Q, &Q) -> Q) -> Self {
        assert_eq!(self.ground, other.ground, "set functions on different ground sets");
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect();
        SetFunction { ground: self.ground.clone(), values }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Q) -> Self {
        let values = self.values.iter().map(|a| a * c).collect();
        SetFunction { ground: self.ground.clone(), values }
    }

    /// Pointwise `self ≥ other`.
    pub fn dominates(&self, other: &Self) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a >= b)
    }

    pub fn is_submodular(&self) -> bool {
        self.local_exchange(|lhs, rhs| lhs >= rhs)
    }

    pub fn is_supermodular(&self) -> bool {
        self.local_exchange(|lhs, rhs| lhs <= rhs)
    }

    pub fn is_modular(&self) -> bool {
        self.local_exchange(|lhs, rhs| lhs == rhs)
    }

    /// Checks `f(I+i) + f(I+j)` against `f(I+i+j) + f(I)` for all `I` and `i ≠ j ∉ I`, which is
    /// equivalent to the statement for all pairs of subsets.
    fn local_exchange(&self, ok: impl Fn(&Q, &Q) -> bool) -> bool {
        let n = self.n();
        for m in 0..1u32 << n {
            for i in (0..n).filter(|i| m >> i & 1 == 0) {
                for j in (i + 1..n).filter(|j| m >> j & 1 == 0) {
                    let lhs = self.get(m | 1 << i) + self.get(m | 1 << j);
                    let rhs = self.get(m | 1 << i | 1 << j) + self.get(m);
                    if !ok(&lhs, &rhs) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_nondecreasing(&self) -> bool {
        let n = self.n();
        (0..1u32 << n).all(|m| {
            (0..n).filter(|i| m >> i & 1 == 0).all(|i| self.get(m) <= self.get(m | 1 << i))
        })
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    /// Positive on every nonempty subset.
    pub fn is_positive(&self) -> bool {
        self.values.iter().skip(1).all(|v| v.is_positive())
    }

    /// `f(I) + f(Iᶜ) > f(V)` for every bipartition into nonempty parts.
    pub fn is_simple(&self) -> bool {
        self.simpleness_witness().is_none()
    }

    /// A nonempty proper subset violating simpleness, if any.
    pub fn simpleness_witness(&self) -> Option<Mask> {
        let full = self.ground.full();
        (1..full).find(|&m| self.get(m) + self.get(full & !m) <= *self.range())
    }

    pub fn properties(&self) -> Properties {
        Properties {
            submodular: self.is_submodular(),
            supermodular: self.is_supermodular(),
            nondecreasing: self.is_nondecreasing(),
            nonnegative: self.is_nonnegative(),
            positive: self.is_positive(),
            simple: self.is_simple(),
            range: self.range().clone(),
        }
    }

    /// `f*(I) = f(V) − f(V∖I)`.
    pub fn adjoint(&self) -> Self {
        let full = self.ground.full();
        let r = self.range().clone();
        Self::from_fn(&self.ground, |m| &r - self.get(full & !m)).unwrap()
    }

    /// `UpMin(f)(I) = min_{K ⊇ I} f(K)` for nonempty `I`, by a per-element superset sweep.
    pub fn upmin(&self) -> Self {
        let n = self.n();
        let mut v = self.values.clone();
        for i in 0..n {
            for m in (0..1u32 << n).filter(|m| m >> i & 1 == 0) {
                let up = m as usize | 1 << i;
                if v[up] < v[m as usize] {
                    v[m as usize] = v[up].clone();
                }
            }
        }
        // The value at ∅ is pinned to 0 so the result stays a set function; it agrees with the
        // superset minimum whenever `f` is nonnegative.
        v[0] = Q::zero();
        SetFunction { ground: self.ground.clone(), values: v }
    }

    /// `DownSum(ε)(I) = Σ_{J⊆I} ε(J)`, by a per-element subset sweep.
    pub fn downsum(&self) -> Self {
        let n = self.n();
        let mut v = self.values.clone();
        for i in 0..n {
            for m in (0..1u32 << n).filter(|m| m >> i & 1 == 1) {
                let lo = v[(m & !(1 << i)) as usize].clone();
                v[m as usize] += lo;
            }
        }
        SetFunction { ground: self.ground.clone(), values: v }
    }

    /// `ξ_J(I) = −1` if `I ⊇ J`, else `0`. Rejects `J = ∅`.
    pub fn xi(ground: &GroundSet, j: Mask) -> Result<Self> {
        if j == 0 {
            return Err(Error::Input("ξ_∅ is not a set function (it is −1 at ∅)".into()));
        }
        Self::from_fn(ground, |m| if m & j == j { -rat::one() } else { Q::zero() })
    }

    /// `Σ_i ξ_{J_i}`.
    pub fn xi_sum(ground: &GroundSet, js: &[Mask]) -> Result<Self> {
        js.iter().try_fold(Self::zero(ground), |acc, &j| Ok(acc.add(&Self::xi(ground, j)?)))
    }

    /// H-representation of the base polytope `{q : q(I) ≤ f(I), q(V) = f(V)}`.
    pub fn polytope_hrep(&self) -> Result<PolytopeH> {
        if !self.is_submodular() {
            return Err(Error::Input("base polytopes require a submodular function".into()));
        }
        Ok(self.polytope_hrep_unchecked())
    }

    pub(crate) fn polytope_hrep_unchecked(&self) -> PolytopeH {
        let n = self.n();
        let full = self.ground.full();
        let row = |m: Mask| (0..n).map(|i| Q::from_integer((m >> i & 1).into())).collect::<Vec<_>>();
        PolytopeH {
            ambient: self.ground.clone(),
            inequalities: (1..full).map(|m| (row(m), self.get(m).clone())).collect(),
            equalities: vec![(row(full), self.range().clone())],
        }
    }

    pub fn to_json(&self) -> Value {
        let values: BTreeMap<String, String> = (0..=self.ground.full())
            .map(|m| (self.ground.key(m), rat::fmt(self.get(m))))
            .collect();
        json!({ "ground": self.ground.elements(), "values": values })
    }

    /// Parses `{"ground": [...], "values": {"u0,u1": "p/q", ...}}`. Missing subsets are an error.
    pub fn from_json(v: &Value) -> Result<Self> {
        let ground = v
            .get("ground")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Input("missing \"ground\" array".into()))?;
        let labels: Vec<String> = ground
            .iter()
            .map(|x| x.as_str().map(String::from))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Input("ground labels must be strings".into()))?;
        let ground = GroundSet::new(labels)?;
        let table = v
            .get("values")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Input("missing \"values\" object".into()))?;
        let mut values: Vec<Option<Q>> = vec![None; 1 << ground.len()];
        for (k, x) in table {
            values[ground.parse_key(k)? as usize] = Some(rat::from_json(x)?);
        }
        values[0].get_or_insert_with(Q::zero);
        let values = values
            .into_iter()
            .enumerate()
            .map(|(m, x)| x.ok_or_else(|| Error::Input(format!("missing value for {{{}}}", ground.key(m as Mask)))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(&ground, values)
    }
}

/// `{q : a·q ≤ b (inequalities), a·q = b (equalities)}` in `ℚ^V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeH {
    pub ambient: GroundSet,
    pub inequalities: Vec<(Vec<Q>, Q)>,
    pub equalities: Vec<(Vec<Q>, Q)>,
}

impl PolytopeH {
    pub fn contains(&self, q: &[Q]) -> bool {
        self.inequalities.iter().all(|(a, b)| linalg::dot(a, q) <= *b)
            && self.equalities.iter().all(|(a, b)| linalg::dot(a, q) == *b)
    }

    /// Adds `q ≥ 0`.
    pub fn with_nonnegativity(mut self) -> Self {
        let n = self.ambient.len();
        for i in 0..n {
            let mut a = vec![Q::zero(); n];
            a[i] = -rat::one();
            self.inequalities.push((a, Q::zero()));
        }
        self
    }

    fn lp(&self) -> Lp {
        let n = self.ambient.len();
        let mut lp = Lp::new(n);
        (0..n).for_each(|j| lp.set_free(j));
        for (a, b) in &self.inequalities {
            lp.add(a.clone(), Cmp::Le, b.clone());
        }
        for (a, b) in &self.equalities {
            lp.add(a.clone(), Cmp::Eq, b.clone());
        }
        lp
    }

    pub fn is_empty(&self) -> bool {
        self.lp().feasible_point().is_none()
    }

    /// `max c·q` over the polytope (`None` if empty or unbounded).
    pub fn maximize(&self, c: &[Q]) -> Option<Q> {
        self.lp().maximize(c).value().cloned()
    }

    /// Affine dimension, `-1` for the empty set.
    pub fn dimension(&self) -> i64 {
        if self.is_empty() {
            return -1;
        }
        let mut eqs: Vec<Vec<Q>> = self.equalities.iter().map(|(a, _)| a.clone()).collect();
        for (a, b) in &self.inequalities {
            let neg: Vec<Q> = a.iter().map(|x| -x).collect();
            // min a·q = −max(−a·q); the row is an implicit equality when min a·q = b.
            if let Some(m) = self.maximize(&neg) {
                if -m == *b {
                    eqs.push(a.clone());
                }
            }
        }
        let n = self.ambient.len();
        n as i64 - linalg::rank(&eqs, n) as i64
    }

    /// `self ⊆ other`, decided by maximizing each row of `other` over `self`.
    pub fn is_subset_of(&self, other: &PolytopeH) -> bool {
        if self.is_empty() {
            return true;
        }
        let le = |a: &[Q], b: &Q| self.maximize(a).is_some_and(|m| m <= *b);
        let has = |rows: &[(Vec<Q>, Q)], a: &[Q], b: &Q| rows.iter().any(|(x, y)| x == a && y == b);
        other.inequalities.iter().all(|(a, b)| has(&self.inequalities, a, b) || has(&self.equalities, a, b) || le(a, b))
            && other.equalities.iter().all(|(a, b)| {
                if has(&self.equalities, a, b) {
                    return true;
                }
                let neg: Vec<Q> = a.iter().map(|x| -x).collect();
                le(a, b) && le(&neg, &-b.clone())
            })
    }

    pub fn same_set(&self, other: &PolytopeH) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    /// Drops inequalities implied by the others (exact LP redundancy test).
    pub fn canonicalize(&self) -> PolytopeH {
        let mut out = self.clone();
        let mut i = 0;
        while i < out.inequalities.len() {
            let (a, b) = out.inequalities[i].clone();
            let mut rest = out.clone();
            rest.inequalities.remove(i);
            if rest.maximize(&a).is_some_and(|m| m <= b) {
                out = rest;
            } else {
                i += 1;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::q;

    fn example() -> SetFunction {
        let g = GroundSet::numbered("u", 4);
        SetFunction::from_fn(&g, |m| {
            let has0 = m & 1 == 1;
            let others = (m >> 1).count_ones();
            q(match (has0, others) {
                (false, 0) => 0,
                (false, _) => 1,
                (true, 0 | 1) => 5,
                (true, 2) => 4,
                (true, _) => 3,
            })
        })
        .unwrap()
    }

    #[test]
    fn example_properties() {
        let f = example();
        let p = f.properties();
        assert!(p.submodular && p.simple && p.positive);
        assert_eq!(p.range, q(3));
        assert_eq!(f.adjoint().at(&["u1"]), q(-1));
        assert_eq!(f.adjoint().adjoint(), f);
    }

    #[test]
    fn upmin_example() {
        let chi = example().upmin();
        for m in 1..16u32 {
            assert_eq!(*chi.get(m), q(if m & 1 == 1 { 3 } else { 1 }));
        }
    }

    #[test]
    fn xi_and_downsum() {
        let g = GroundSet::numbered("v", 3);
        let j = 0b011;
        let xi = SetFunction::xi(&g, j).unwrap();
        assert_eq!(xi, SetFunction::indicator(&g, j).unwrap().downsum().scale(&q(-1)));
        assert!(xi.is_submodular());
        assert!(SetFunction::xi(&g, 0).is_err());
    }

    #[test]
    fn zero_function_not_simple() {
        let g = GroundSet::numbered("v", 2);
        assert!(!SetFunction::zero(&g).is_simple());
        assert!(SetFunction::zero(&GroundSet::numbered("v", 1)).is_simple());
    }

    #[test]
    fn json_roundtrip() {
        let f = example();
        assert_eq!(SetFunction::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn example_polytope_is_a_brick() {
        let chi = example().upmin();
        let p = chi.polytope_hrep().unwrap();
        assert_eq!(p.dimension(), 3);
        assert!(p.contains(&[q(2), q(1), q(0), q(0)]));
        assert!(!p.contains(&[q(1), q(1), q(1), q(0)]));
    }
}
