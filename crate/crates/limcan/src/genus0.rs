//! Explicit realization on nodal curves whose components are all projective lines.
//!
//! On the component of `v` the branch `p^a` of each arrow `a ∈ 𝔼_v` sits at an affine
//! coordinate; a meromorphic differential is `N(z)/∏_a (z − p^a)^{m_a} dz` with no pole at
//! infinity. Spaces of such differentials with prescribed pole and zero bounds have closed-form
//! bases, residues are Laurent coefficients, and the spaces `Ŵ_{s,π}`, `Ŵ⁺_{s,π}` and
//! `W^exp_{s,π}(ρ)` are exact kernels in the resulting coordinates.
//!
//! The value of a differential at `p^a` as a section of `ω(k p^a)` is read with the local
//! parameter `t = c_a (z − p^a)`, where `c_a` is the configuration's scale at `a` (1 unless set):
//! it is the coefficient of `t^{−k} dt`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{rev, Arrow, Multigraph, Pair, SlopeFunction};
use crate::linalg::{self, Matrix};
use crate::qlinalg::{random_q, DecomposedSpace, RationalSubspace};
use crate::rat::{self, Q};
use crate::residue::residue_conditions;

/// Polynomials over ℚ, coefficients from degree 0 up.
pub type Poly = Vec<Q>;

pub fn poly_mul(a: &[Q], b: &[Q]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `(z − p)^k`.
pub fn linear_power(p: &Q, k: usize) -> Poly {
    (0..k).fold(vec![Q::one()], |acc, _| poly_mul(&acc, &[-p.clone(), Q::one()]))
}

/// `f(t + c)`.
pub fn poly_shift(f: &[Q], c: &Q) -> Poly {
    // Horner's scheme in the variable t.
    let mut out: Poly = Vec::new();
    for x in f.iter().rev() {
        out = poly_mul(&out, &[c.clone(), Q::one()]);
        if out.is_empty() {
            out.push(Q::zero());
        }
        out[0] += x;
    }
    out
}

/// First `n` Taylor coefficients at `0` of `num/den`, for `den(0) ≠ 0`.
pub fn series_div(num: &[Q], den: &[Q], n: usize) -> Vec<Q> {
    let d0 = den[0].clone();
    let mut out: Vec<Q> = Vec::with_capacity(n);
    for i in 0..n {
        let mut c = num.get(i).cloned().unwrap_or_else(Q::zero);
        for j in 1..=i.min(den.len().saturating_sub(1)) {
            c -= &den[j] * &out[i - j];
        }
        out.push(c / &d0);
    }
    out
}

fn pow(x: &Q, e: i64) -> Q {
    let b = if e < 0 { Q::one() / x } else { x.clone() };
    (0..e.unsigned_abs()).fold(Q::one(), |acc, _| acc * &b)
}

/// Branch points on each component, plus the local parameter scales.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedConfig {
    /// Affine coordinate of `p^a` on the component of `tail(a)`, per arrow.
    pub points: Vec<Q>,
    /// Local parameter at `p^a` is `scales[a] · (z − p^a)`.
    pub scales: Vec<Q>,
    pub seed: Option<u64>,
}

impl MarkedConfig {
    pub fn new(g: &Multigraph, points: Vec<Q>) -> Result<Self> {
        if points.len() != g.num_arrows() {
            return Err(Error::Input("one branch point per arrow is required".into()));
        }
        for v in 0..g.n() {
            let mut ps: Vec<&Q> = g.arrows_from(v).map(|a| &points[a]).collect();
            ps.sort();
            if ps.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Input(format!("coincident branch points on {}", g.vertices().elements()[v])));
            }
        }
        let scales = vec![Q::one(); points.len()];
        Ok(MarkedConfig { points, scales, seed: None })
    }

    /// Distinct random points on each component.
    pub fn random(g: &Multigraph, seed: u64, rng: &mut impl Rng) -> Self {
        loop {
            let points = g.arrows().map(|_| random_q(rng)).collect();
            if let Ok(mut c) = Self::new(g, points) {
                c.seed = Some(seed);
                return c;
            }
        }
    }

    pub fn with_scales(mut self, scales: Vec<Q>) -> Result<Self> {
        if scales.len() != self.points.len() || scales.iter().any(Zero::is_zero) {
            return Err(Error::Input("one nonzero scale per arrow is required".into()));
        }
        self.scales = scales;
        Ok(self)
    }

    pub fn to_json(&self, g: &Multigraph) -> Value {
        let pts: BTreeMap<String, String> = g.arrows().map(|a| (g.arrow_key(a), rat::fmt(&self.points[a]))).collect();
        json!({ "points": pts, "seed": self.seed })
    }
}

/// `N(z)/∏_a (z − p^a)^{m_a} dz` on the component of `vertex`, where `twist[a] = k_a` bounds the
/// divisor: poles of order at most `m_a = max(0, k_a)`, zeros of order at least `−k_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalDifferential {
    pub vertex: usize,
    pub arrows: Vec<Arrow>,
    pub points: Vec<Q>,
    pub scales: Vec<Q>,
    pub twists: Vec<i64>,
    pub numerator: Poly,
}

impl RationalDifferential {
    fn order(&self, i: usize) -> usize {
        self.twists[i].max(0) as usize
    }

    /// Taylor coefficients of `f·(z − p)^m` at `p = p^{arrows[i]}`, up to `len`.
    fn local_series(&self, i: usize, len: usize) -> Vec<Q> {
        let p = &self.points[i];
        let other = (0..self.arrows.len())
            .filter(|&j| j != i)
            .fold(vec![Q::one()], |acc, j| poly_mul(&acc, &linear_power(&self.points[j], self.order(j))));
        series_div(&poly_shift(&self.numerator, p), &poly_shift(&other, p), len)
    }

    fn index(&self, a: Arrow) -> usize {
        self.arrows.iter().position(|&b| b == a).expect("arrow on this component")
    }

    /// The Laurent residue at `p^a`.
    pub fn residue(&self, a: Arrow) -> Q {
        let i = self.index(a);
        match self.order(i) {
            0 => Q::zero(),
            m => self.local_series(i, m).pop().unwrap(),
        }
    }

    /// The value at `p^a` as a section of `ω(k_a p^a)`: the coefficient of `t^{−k_a} dt` for the
    /// local parameter `t = c_a (z − p^a)`.
    pub fn leading_coeff(&self, a: Arrow) -> Q {
        let i = self.index(a);
        let (m, k) = (self.order(i) as i64, self.twists[i]);
        let alpha = self.local_series(i, (m - k + 1) as usize).pop().unwrap();
        alpha * pow(&self.scales[i], k - 1)
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = self.clone();
        for x in &mut out.numerator {
            *x *= c;
        }
        out
    }
}

/// Residues per arrow of `𝔼_v`.
pub fn residue_vector(w: &RationalDifferential) -> Vec<(Arrow, Q)> {
    w.arrows.iter().map(|&a| (a, w.residue(a))).collect()
}

pub fn leading_coeff(w: &RationalDifferential, a: Arrow) -> Q {
    w.leading_coeff(a)
}

/// A basis of `H^0(ℙ¹, ω(Σ_i k_i p_i))` for distinct points: `Z(z)·z^j dz / ∏ (z − p_i)^{m_i}`
/// where `Z` carries the forced zeros. Its dimension is `max(0, Σ k_i − 1)`.
pub fn basis_on(vertex: usize, arrows: Vec<Arrow>, points: Vec<Q>, scales: Vec<Q>, twists: Vec<i64>) -> Vec<RationalDifferential> {
    let zeros = points
        .iter()
        .zip(&twists)
        .filter(|(_, &k)| k < 0)
        .fold(vec![Q::one()], |acc, (p, &k)| poly_mul(&acc, &linear_power(p, (-k) as usize)));
    let dim = (twists.iter().sum::<i64>() - 1).max(0) as usize;
    (0..dim)
        .map(|j| {
            let mut mono = vec![Q::zero(); j + 1];
            mono[j] = Q::one();
            RationalDifferential {
                vertex,
                arrows: arrows.clone(),
                points: points.clone(),
                scales: scales.clone(),
                twists: twists.clone(),
                numerator: poly_mul(&zeros, &mono),
            }
        })
        .collect()
}

/// A basis of `H^0(C_v, ω(Σ_a k_a p^a))` over the arrows `a ∈ 𝔼_v`.
pub fn basis_with_twists(g: &Multigraph, cfg: &MarkedConfig, v: usize, twist: impl Fn(Arrow) -> i64) -> Vec<RationalDifferential> {
    let arrows: Vec<Arrow> = g.arrows_from(v).collect();
    let twists = arrows.iter().map(|&a| twist(a)).collect();
    let points = arrows.iter().map(|&a| cfg.points[a].clone()).collect();
    let scales = arrows.iter().map(|&a| cfg.scales[a].clone()).collect();
    basis_on(v, arrows, points, scales, twists)
}

/// A basis of `H^0(C_v, L_{s,v})` with `L_{s,v} = ω_v(Σ_a (1 + s(a)) p^a)`.
pub fn diff_basis(g: &Multigraph, cfg: &MarkedConfig, v: usize, s: &SlopeFunction) -> Vec<RationalDifferential> {
    basis_with_twists(g, cfg, v, |a| 1 + s.get(a))
}

/// Per-vertex bases of `⊕_v H^0(C_v, ω(D_v))`, whose concatenation gives coordinates on the sum.
#[derive(Clone, Debug)]
pub struct Frame {
    pub blocks: Vec<Vec<RationalDifferential>>,
    pub ambient: DecomposedSpace,
}

impl Frame {
    pub fn new(g: &Multigraph, cfg: &MarkedConfig, twist: impl Fn(Arrow) -> i64) -> Self {
        let blocks: Vec<Vec<RationalDifferential>> = (0..g.n()).map(|v| basis_with_twists(g, cfg, v, &twist)).collect();
        let ambient = DecomposedSpace::new(g.vertices().clone(), blocks.iter().map(Vec::len).collect())
            .expect("one block per vertex");
        Frame { blocks, ambient }
    }

    fn elements(&self) -> impl Iterator<Item = &RationalDifferential> {
        self.blocks.iter().flatten()
    }

    /// The residue map as a matrix: one row per arrow, one column per coordinate.
    pub fn residue_matrix(&self, g: &Multigraph) -> Matrix {
        let mut m = vec![vec![Q::zero(); self.ambient.total()]; g.num_arrows()];
        for (j, w) in self.elements().enumerate() {
            for (a, r) in residue_vector(w) {
                m[a][j] = r;
            }
        }
        m
    }

    /// The linear form `coordinates ↦ leading coefficient at p^a`.
    pub fn leading_form(&self, g: &Multigraph, a: Arrow) -> Vec<Q> {
        let v = g.tail(a);
        let mut f = vec![Q::zero(); self.ambient.total()];
        for (j, w) in self.ambient.block(v).zip(&self.blocks[v]) {
            f[j] = w.leading_coeff(a);
        }
        f
    }

    /// The differential at each vertex for a coordinate vector.
    pub fn evaluate(&self, x: &[Q]) -> Vec<Poly> {
        self.blocks
            .iter()
            .enumerate()
            .map(|(v, b)| {
                let mut n: Poly = Vec::new();
                for (j, w) in self.ambient.block(v).zip(b) {
                    let t = w.scale(&x[j]).numerator;
                    if n.len() < t.len() {
                        n.resize(t.len(), Q::zero());
                    }
                    for (y, z) in n.iter_mut().zip(t) {
                        *y += z;
                    }
                }
                n
            })
            .collect()
    }
}

fn require_genus_zero(g: &Multigraph) -> Result<()> {
    if g.genus_fn().iter().any(|&x| x != 0) {
        return Err(Error::Input("realization needs every component of genus 0".into()));
    }
    if g.cycle_rank() == 0 {
        return Err(Error::Guard("the graph has genus 0; there are no canonical series".into()));
    }
    Ok(())
}

/// `Res^{-1}(G_π)` inside the frame, as a subspace.
fn residue_preimage(g: &Multigraph, p: &Pair, frame: &Frame) -> RationalSubspace {
    let (conds, _) = residue_conditions(g, &p.pi);
    let res = frame.residue_matrix(g);
    let forms = linalg::mul(&conds, &res, frame.ambient.total());
    RationalSubspace::whole(frame.ambient.clone()).cut(&forms)
}

/// `Ŵ_{s,π} = Res^{-1}(G_π) ∩ ⊕_v H^0(C_v, L_{s,v})`, with its frame.
pub fn w_hat(g: &Multigraph, cfg: &MarkedConfig, p: &Pair) -> Result<(Frame, RationalSubspace)> {
    require_genus_zero(g)?;
    let frame = Frame::new(g, cfg, |a| 1 + p.s.get(a));
    let w = residue_preimage(g, p, &frame);
    Ok((frame, w))
}

/// `Ŵ⁺_{s,π}`: as [`w_hat`] with `L_{s,v}` replaced by `ω_v(P_{s,v})`, dropping the forced zeros.
pub fn w_hat_plus(g: &Multigraph, cfg: &MarkedConfig, p: &Pair) -> Result<(Frame, RationalSubspace)> {
    require_genus_zero(g)?;
    let frame = Frame::new(g, cfg, |a| (1 + p.s.get(a)).max(0));
    let w = residue_preimage(g, p, &frame);
    Ok((frame, w))
}

/// `deg N_{s,v}`: total order of the forced zeros at `v`.
pub fn zero_degree(g: &Multigraph, s: &SlopeFunction, v: usize) -> i64 {
    g.arrows_from(v).map(|a| (-1 - s.get(a)).max(0)).sum()
}

/// Nonzero gluing constants `ρ_e`, one per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingData {
    pub rho: Vec<Q>,
}

impl GluingData {
    pub fn new(g: &Multigraph, rho: Vec<Q>) -> Result<Self> {
        if rho.len() != g.num_edges() {
            return Err(Error::Input("one gluing constant per edge is required".into()));
        }
        if let Some(e) = rho.iter().position(Zero::is_zero) {
            return Err(Error::Input(format!("gluing constant of {} is zero", g.edges()[e].id)));
        }
        Ok(GluingData { rho })
    }

    pub fn ones(g: &Multigraph) -> Self {
        GluingData { rho: vec![Q::one(); g.num_edges()] }
    }

    pub fn from_json(g: &Multigraph, v: &Value) -> Result<Self> {
        Self::new(g, g.lengths_from_json(v).or_else(|_| parse_edge_map(g, v))?)
    }

    pub fn to_json(&self, g: &Multigraph) -> Value {
        let m: BTreeMap<&str, String> = g.edges().iter().zip(&self.rho).map(|(e, r)| (e.id.as_str(), rat::fmt(r))).collect();
        json!(m)
    }
}

fn parse_edge_map(g: &Multigraph, v: &Value) -> Result<Vec<Q>> {
    let map = v.as_object().ok_or_else(|| Error::Input("gluing data is an object keyed by edge id".into()))?;
    let mut out = vec![None; g.num_edges()];
    for (k, x) in map {
        out[g.edge_index(k)?] = Some(rat::from_json(x)?);
    }
    out.into_iter()
        .enumerate()
        .map(|(e, x)| x.ok_or_else(|| Error::Input(format!("missing gluing constant for {}", g.edges()[e].id))))
        .collect()
}

/// The gluing row at an integer upward arrow `a` from `u` to `v`:
/// `−ρ_e^{−s(a)} · lc(ω_u, a) + lc(ω_v, ā)`.
pub fn gluing_form(g: &Multigraph, frame: &Frame, s: &SlopeFunction, rho: &GluingData, a: Arrow) -> Vec<Q> {
    let c = -pow(&rho.rho[crate::graph::edge_of(a)], -s.get(a));
    let mut f: Vec<Q> = frame.leading_form(g, a).into_iter().map(|x| x * &c).collect();
    for (x, y) in f.iter_mut().zip(frame.leading_form(g, rev(a))) {
        *x += y;
    }
    f
}

/// `W^exp_{s,π}(ρ) = Ŵ_{s,π} ∩ H^0(X, L_s^ρ)`: `Ŵ` cut by one gluing row per arrow of `A^int_s`.
pub fn w_exp(g: &Multigraph, cfg: &MarkedConfig, p: &Pair, rho: &GluingData) -> Result<(Frame, RationalSubspace)> {
    let (frame, w) = w_hat(g, cfg, p)?;
    let forms: Matrix = p.s.sets(g).int_upward.iter().map(|&a| gluing_form(g, &frame, &p.s, rho, a)).collect();
    let cut = w.cut(&forms);
    Ok((frame, cut))
}

/// Coefficients `a_{i,j,r}` of a plane quartic `Σ a_{i,j,r} x1^i x2^j x3^r`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Quartic(pub BTreeMap<[u32; 3], Q>);

impl Quartic {
    /// The 15 exponent triples of degree 4, in lexicographic order.
    pub fn monomials() -> Vec<[u32; 3]> {
        let mut out = Vec::new();
        for i in 0..=4 {
            for j in 0..=4 - i {
                out.push([i, j, 4 - i - j]);
            }
        }
        out
    }

    pub fn get(&self, i: u32, j: u32, r: u32) -> Q {
        self.0.get(&[i, j, r]).cloned().unwrap_or_else(Q::zero)
    }

    /// Parses `{"a_ijr": "p/q"}`; the `a_` prefix is optional and the exponents may be
    /// comma-separated (`"4,0,0"`).
    pub fn from_json(v: &Value) -> Result<Self> {
        let map = v.as_object().ok_or_else(|| Error::Input("a quartic is an object of coefficients".into()))?;
        let mut out = BTreeMap::new();
        for (k, x) in map {
            let digits: String = k.strip_prefix("a_").unwrap_or(k).chars().filter(|&c| c != ',').collect();
            let e: Vec<u32> = digits.chars().filter_map(|c| c.to_digit(10)).collect();
            if e.len() != 3 || digits.len() != 3 || e.iter().sum::<u32>() != 4 {
                return Err(Error::Input(format!("bad quartic coefficient key {k}")));
            }
            out.insert([e[0], e[1], e[2]], rat::from_json(x)?);
        }
        Ok(Quartic(out))
    }
}

/// Coefficient rows of the six leading-coefficient formulas, in edge order
/// `01, 02, 03, 12, 13, 23`, over [`Quartic::monomials`].
pub fn quartic_rows() -> Matrix {
    let mons = Quartic::monomials();
    let row = |plus: &[[u32; 3]], minus: &[[u32; 3]]| -> Vec<Q> {
        mons.iter()
            .map(|m| {
                if plus.contains(m) {
                    Q::one()
                } else if minus.contains(m) {
                    -Q::one()
                } else {
                    Q::zero()
                }
            })
            .collect()
    };
    vec![
        row(&[[0, 4, 0], [0, 2, 2], [0, 0, 4]], &[[0, 3, 1], [0, 1, 3]]),
        row(&[[4, 0, 0], [2, 0, 2], [0, 0, 4]], &[[3, 0, 1], [1, 0, 3]]),
        row(&[[4, 0, 0], [2, 2, 0], [0, 4, 0]], &[[3, 1, 0], [1, 3, 0]]),
        row(&[[0, 0, 4]], &[]),
        row(&[[0, 4, 0]], &[]),
        row(&[[4, 0, 0]], &[]),
    ]
}

/// Leading coefficients on the six nodes of four general lines `x1, x2, x3, x1+x2+x3` for the
/// pencil `L0 L1 L2 L3 − tF`. A zero value means the quartic meets a node: an error.
pub fn rho_from_quartic(f: &Quartic) -> Result<Vec<Q>> {
    let x: Vec<Q> = Quartic::monomials().iter().map(|m| f.get(m[0], m[1], m[2])).collect();
    let rho = linalg::mul_vec(&quartic_rows(), &x);
    const NAMES: [&str; 6] = ["01", "02", "03", "12", "13", "23"];
    if let Some(e) = rho.iter().position(Zero::is_zero) {
        return Err(Error::Guard(format!("ρ_{} = 0: the pencil is degenerate at a node", NAMES[e])));
    }
    Ok(rho)
}

/// A quartic whose leading coefficients are `target`, by an exact linear solve.
pub fn quartic_for_rho(target: &[Q]) -> Option<Quartic> {
    let mons = Quartic::monomials();
    let x = linalg::solve(&quartic_rows(), target, mons.len())?;
    Some(Quartic(mons.into_iter().zip(x).filter(|(_, c)| !c.is_zero()).collect()))
}

/// The certified outcome of realizing one slope-level pair on a random configuration.
#[derive(Clone, Debug)]
pub struct RealizationReport {
    pub config: MarkedConfig,
    pub draws: usize,
    pub dim_hat: usize,
    pub dim_exp: usize,
    pub nu_hat: crate::setfn::SetFunction,
    pub nu_exp: crate::setfn::SetFunction,
    pub w_exp: RationalSubspace,
}

impl RealizationReport {
    pub fn to_json(&self, g: &Multigraph) -> Value {
        json!({
            "config": self.config.to_json(g),
            "draws": self.draws,
            "dim_hat": self.dim_hat,
            "dim": self.dim_exp,
            "nu_star_hat": self.nu_hat.to_json(),
            "nu_star": self.nu_exp.to_json(),
            "basis": crate::qlinalg::matrix_to_json(&self.w_exp.basis),
        })
    }
}

/// Checks that hold for every configuration: residue sums vanish, `W^exp ⊆ Ŵ`, the identity
/// `η̂(I) = dim proj_I(Ŵ⁺) − Σ_{v∈I} deg N_{s,v}`, and that elements of `W^exp` vanish on one
/// branch of an integer node exactly when they vanish on the other.
pub fn structural_checks(g: &Multigraph, cfg: &MarkedConfig, p: &Pair, rho: &GluingData) -> Result<()> {
    let fail = |m: &str| Err(Error::Property(m.to_string()));
    let (frame, hat) = w_hat(g, cfg, p)?;
    for w in frame.blocks.iter().flatten() {
        if residue_vector(w).into_iter().map(|(_, r)| r).sum::<Q>() != Q::zero() {
            return fail("residues of a basis differential do not sum to zero");
        }
    }
    let (_, exp) = w_exp(g, cfg, p, rho)?;
    if !hat.contains(&exp) {
        return fail("W^exp is not contained in Ŵ");
    }
    let (_, plus) = w_hat_plus(g, cfg, p)?;
    let eta_hat = crate::residue::eta_hat(g, p)?;
    for m in 1..=g.vertices().full() {
        let zeros: i64 = crate::setfn::bits(m).map(|v| zero_degree(g, &p.s, v)).sum();
        if rat::q(plus.projection_dim(m) as i64 - zeros) != *eta_hat.get(m) {
            return fail(&format!("η̂ ≠ dim proj(Ŵ⁺) − deg N at {}", g.vertices().key(m)));
        }
    }
    for &a in &p.s.sets(g).int_upward {
        let (fu, fv) = (frame.leading_form(g, a), frame.leading_form(g, rev(a)));
        for x in &exp.basis {
            if linalg::dot(&fu, x).is_zero() != linalg::dot(&fv, x).is_zero() {
                return fail("an element of W^exp vanishes on only one branch of an integer node");
            }
        }
    }
    Ok(())
}

/// Realizes `(s, π)` on random configurations until `ν*_Ŵ = UpMin(η̂)` with
/// `dim Ŵ = g + |A^int_s|` and `ν*_{W^exp} = UpMin(η)` with `dim W^exp = g`; at most
/// [`crate::qlinalg::MAX_DRAWS`] configurations are tried. Requires `η ≥ 0` (hence `η̂ ≥ 0`).
/// When every block projection of `W^exp` is nonzero, also checks that it generates the glued
/// sheaf at each integer node.
pub fn realize(g: &Multigraph, p: &Pair, rho: &GluingData, seed: u64, rng: &mut impl Rng) -> Result<RealizationReport> {
    require_genus_zero(g)?;
    let eta = crate::residue::eta(g, p)?;
    if !eta.is_nonnegative() {
        return Err(Error::Guard("η_{s,π} takes a negative value".into()));
    }
    let eta_hat = crate::residue::eta_hat(g, p)?;
    let genus = g.total_genus();
    let ints = p.s.sets(g).int_upward;
    for draws in 1..=crate::qlinalg::MAX_DRAWS {
        let cfg = MarkedConfig::random(g, seed, rng);
        let (_, hat) = w_hat(g, &cfg, p)?;
        let (frame, exp) = w_exp(g, &cfg, p, rho)?;
        let (nu_hat, nu_exp) = (hat.nu_star(), exp.nu_star());
        if nu_hat != eta_hat.upmin() || hat.dim() != genus + ints.len() || nu_exp != eta.upmin() || exp.dim() != genus {
            continue;
        }
        structural_checks(g, &cfg, p, rho)?;
        if exp.vanishing_blocks().is_empty() {
            for &a in &ints {
                let (fu, fv) = (frame.leading_form(g, a), frame.leading_form(g, rev(a)));
                if !exp.basis.iter().any(|x| !linalg::dot(&fu, x).is_zero() && !linalg::dot(&fv, x).is_zero()) {
                    return Err(Error::Property(format!("W^exp does not generate at the node {}", g.edges()[crate::graph::edge_of(a)].id)));
                }
            }
        }
        return Ok(RealizationReport {
            config: cfg,
            draws,
            dim_hat: hat.dim(),
            dim_exp: exp.dim(),
            nu_hat,
            nu_exp,
            w_exp: exp,
        });
    }
    Err(Error::Property(format!("no configuration in general position after {} draws", crate::qlinalg::MAX_DRAWS)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rat::{q, qr};

    fn one_vertex(points: &[i64], twists: &[i64]) -> Vec<RationalDifferential> {
        let n = points.len();
        basis_on(0, (0..n).collect(), points.iter().map(|&p| q(p)).collect(), vec![q(1); n], twists.to_vec())
    }

    #[test]
    fn basis_dimensions() {
        assert_eq!(one_vertex(&[0, 1, 2], &[1, 1, 1]).len(), 2);
        assert_eq!(one_vertex(&[5], &[2]).len(), 1);
        assert_eq!(one_vertex(&[0, 1, 2], &[2, 1, -2]).len(), 0);
    }

    #[test]
    fn residues_by_partial_fractions() {
        // dz / (z (z − 1)).
        let w = &one_vertex(&[0, 1], &[1, 1])[0];
        assert!(w.numerator == vec![q(1)]);
        assert_eq!(w.residue(0), q(-1));
        assert_eq!(w.residue(1), q(1));
        // dz / z².
        let w = &one_vertex(&[0], &[2])[0];
        assert_eq!(w.residue(0), q(0));
        assert_eq!(w.leading_coeff(0), q(1));
        assert_eq!(w.scale(&qr(3, 2)).leading_coeff(0), qr(3, 2));
    }

    #[test]
    fn forced_zero_gives_zero_value() {
        // A zero of order 2 at z = 2 read in ω(−p) has value 0 there.
        let w = &one_vertex(&[0, 1, 2], &[4, 1, -2])[0];
        let mut deeper = w.clone();
        deeper.twists[2] = -1;
        assert_eq!(deeper.leading_coeff(2), q(0));
    }

    #[test]
    fn residue_sums_vanish() {
        for w in one_vertex(&[0, 3, -2, 7], &[2, 1, 3, -1]) {
            let s: Q = residue_vector(&w).into_iter().map(|(_, r)| r).sum();
            assert_eq!(s, q(0));
        }
    }

    #[test]
    fn quartic_formulas() {
        let f = Quartic::from_json(&json!({"a_400": "1", "a_040": "1", "a_004": "1"})).unwrap();
        assert_eq!(rho_from_quartic(&f).unwrap(), [2, 2, 2, 1, 1, 1].map(q).to_vec());
        let g = Quartic::from_json(&json!({"4,0,0": "1/1", "0,4,0": "1", "0,0,4": "1"})).unwrap();
        assert_eq!(g, f);
        let f = Quartic::from_json(&json!({"a_400": "1"})).unwrap();
        assert!(matches!(rho_from_quartic(&f), Err(Error::Guard(ref m)) if m.contains("ρ_01")));
        let target = vec![q(1); 6];
        assert_eq!(rho_from_quartic(&quartic_for_rho(&target).unwrap()).unwrap(), target);
    }

    #[test]
    fn trivial_pair_on_k4() {
        let g = fixtures::k4();
        let cfg = MarkedConfig::new(&g, (0..12).map(|i| q(i % 3 + i / 3 * 10)).collect()).unwrap();
        let p = Pair::trivial(&g);
        let (_, w) = w_hat(&g, &cfg, &p).unwrap();
        assert_eq!(w.dim(), 3);
        let (_, wp) = w_hat_plus(&g, &cfg, &p).unwrap();
        assert_eq!(w, wp);
    }
}
