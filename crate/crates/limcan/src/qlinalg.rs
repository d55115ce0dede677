//! Exact subspace calculus in decomposed spaces `U = ⊕_v U_v`: the projection-dimension function
//! `ν*_W(I) = dim proj_I(W)`, complete flags, and the two ways of cutting a subspace so that its
//! set function follows the `UpMin` transform.
//!
//! Genericity is never assumed silently. Random flags and hyperplanes are drawn from a seeded
//! generator, the claimed set function of the cut space is checked exactly, and a draw that fails
//! the check is replaced by a fresh one, at most [`MAX_DRAWS`] times.

use std::ops::Range;

use num_traits::Zero;
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rat::{self, Q};
use crate::setfn::{bits, GroundSet, Mask, SetFunction};

/// Draws allowed before a genericity check is reported as a failure.
pub const MAX_DRAWS: usize = 5;

/// Shared denominator of random rationals (a prime).
pub const RANDOM_DENOMINATOR: i64 = 1_000_003;

/// A random rational `k / 1000003` with `|k| ≤ 10^6`.
pub fn random_q(rng: &mut impl Rng) -> Q {
    rat::qr(rng.gen_range(-1_000_000..=1_000_000), RANDOM_DENOMINATOR)
}

pub fn random_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix {
    (0..rows).map(|_| (0..cols).map(|_| random_q(rng)).collect()).collect()
}

/// `U = ⊕_{v∈V} U_v`, with the coordinates of `U_v` forming one contiguous block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecomposedSpace {
    ground: GroundSet,
    dims: Vec<usize>,
    offsets: Vec<usize>,
}

impl DecomposedSpace {
    pub fn new(ground: GroundSet, dims: Vec<usize>) -> Result<Self> {
        if dims.len() != ground.len() {
            return Err(Error::Input(format!("{} block dimensions for {} parts", dims.len(), ground.len())));
        }
        let offsets = dims
            .iter()
            .scan(0, |acc, d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect();
        Ok(DecomposedSpace { ground, dims, offsets })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn block(&self, v: usize) -> Range<usize> {
        self.offsets[v]..self.offsets[v] + self.dims[v]
    }

    /// Coordinates of `U_I`, in block order.
    pub fn coords(&self, m: Mask) -> Vec<usize> {
        bits(m).flat_map(|v| self.block(v)).collect()
    }

    pub fn dim_of(&self, m: Mask) -> usize {
        bits(m).map(|v| self.dims[v]).sum()
    }

    /// Embeds a vector of `U_I` into `U`.
    pub fn lift(&self, m: Mask, x: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.total()];
        for (c, xi) in self.coords(m).into_iter().zip(x) {
            out[c] = xi.clone();
        }
        out
    }
}

/// A subspace `W ⊆ U`, stored as a basis in reduced row-echelon form, so that equal subspaces
/// have equal representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSubspace {
    pub ambient: DecomposedSpace,
    pub basis: Matrix,
}

impl RationalSubspace {
    /// The span of `rows`.
    pub fn new(ambient: DecomposedSpace, rows: &[Vec<Q>]) -> Result<Self> {
        let n = ambient.total();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Input(format!("spanning vectors must have length {n}")));
        }
        let basis = linalg::rref(rows, n).0;
        Ok(RationalSubspace { ambient, basis })
    }

    pub fn whole(ambient: DecomposedSpace) -> Self {
        let n = ambient.total();
        let basis = (0..n)
            .map(|i| {
                let mut e = vec![Q::zero(); n];
                e[i] = rat::one();
                e
            })
            .collect();
        RationalSubspace { ambient, basis }
    }

    /// A random subspace of dimension `dim` (full rank with probability one; retried otherwise).
    pub fn random(ambient: DecomposedSpace, dim: usize, rng: &mut impl Rng) -> Result<Self> {
        let n = ambient.total();
        if dim > n {
            return Err(Error::Input(format!("dimension {dim} exceeds ambient dimension {n}")));
        }
        for _ in 0..MAX_DRAWS {
            let w = Self::new(ambient.clone(), &random_matrix(dim, n, rng))?;
            if w.dim() == dim {
                return Ok(w);
            }
        }
        Err(Error::Property("random vectors stayed dependent".into()))
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `dim proj_I(W)`.
    pub fn projection_dim(&self, m: Mask) -> usize {
        let cols = self.ambient.coords(m);
        linalg::rank(&linalg::select_cols(&self.basis, &cols), cols.len())
    }

    /// A spanning set of `proj_I(W)` in the coordinates of `U_I`.
    pub fn projection(&self, m: Mask) -> Matrix {
        let cols = self.ambient.coords(m);
        linalg::rref(&linalg::select_cols(&self.basis, &cols), cols.len()).0
    }

    /// `ν*_W`.
    pub fn nu_star(&self) -> SetFunction {
        SetFunction::from_fn(self.ambient.ground(), |m| rat::q(self.projection_dim(m) as i64))
            .expect("same ground set")
    }

    /// `W ∩ ker(f_1) ∩ … ∩ ker(f_k)` for linear forms on `U`.
    pub fn cut(&self, forms: &[Vec<Q>]) -> Self {
        let basis = linalg::restrict(&self.basis, forms, self.ambient.total());
        RationalSubspace { ambient: self.ambient.clone(), basis }
    }

    /// `W ∩ proj_I^{-1}(F)` for a subspace `F ⊆ U_I` spanned by `rows`.
    pub fn cut_preimage(&self, m: Mask, rows: &[Vec<Q>]) -> Self {
        let forms: Matrix = linalg::kernel(rows, self.ambient.dim_of(m))
            .iter()
            .map(|f| self.ambient.lift(m, f))
            .collect();
        self.cut(&forms)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.cut(&linalg::kernel(&other.basis, self.ambient.total()))
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> bool {
        let n = self.ambient.total();
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        linalg::rank(&rows, n) == self.dim()
    }

    /// Parts `v` with `proj_v(W) = 0`.
    pub fn vanishing_blocks(&self) -> Vec<usize> {
        (0..self.ambient.ground().len()).filter(|&v| self.projection_dim(1 << v) == 0).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "parts": self.ambient.ground().elements(),
            "block_dims": self.ambient.dims(),
            "dim": self.dim(),
            "basis": matrix_to_json(&self.basis),
        })
    }
}

/// Row-major `"p/q"` strings.
pub fn matrix_to_json(m: &[Vec<Q>]) -> Value {
    json!(m.iter().map(|r| r.iter().map(rat::fmt).collect::<Vec<_>>()).collect::<Vec<_>>())
}

/// `ν*_W`.
pub fn nu_star(w: &RationalSubspace) -> SetFunction {
    w.nu_star()
}

/// A complete flag of `U_I`: `F^i` is spanned by rows `i..` of `basis`, so `codim(F^i, U_I) = i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    pub set: Mask,
    pub basis: Matrix,
}

impl Flag {
    pub fn new(ambient: &DecomposedSpace, set: Mask, basis: Matrix) -> Result<Self> {
        let d = ambient.dim_of(set);
        if set == 0 || basis.len() != d || linalg::rank(&basis, d) != d {
            return Err(Error::Input("a flag needs a nonempty set and a basis of U_I".into()));
        }
        Ok(Flag { set, basis })
    }

    pub fn random(ambient: &DecomposedSpace, set: Mask, rng: &mut impl Rng) -> Result<Self> {
        let d = ambient.dim_of(set);
        for _ in 0..MAX_DRAWS {
            if let Ok(f) = Self::new(ambient, set, random_matrix(d, d, rng)) {
                return Ok(f);
            }
        }
        Err(Error::Property("random square matrices stayed singular".into()))
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// `F^i`, as a spanning set.
    pub fn level(&self, i: usize) -> &[Vec<Q>] {
        &self.basis[i.min(self.len())..]
    }
}

/// Cut by `proj_I^{-1}(F^e)` for the flag's set `I`.
#[derive(Clone, Debug)]
pub struct FlagCut {
    pub flag: Flag,
    pub exponent: usize,
}

/// The multiset `𝒥` of a cut plan: the set of each flag, repeated by its exponent.
pub fn plan_sets(plan: &[FlagCut]) -> Vec<Mask> {
    plan.iter().flat_map(|c| std::iter::repeat_n(c.flag.set, c.exponent)).collect()
}

/// `W ∩ ⋂ proj_I^{-1}(F_I^e)`, with no precondition.
pub fn intersect_flags(w: &RationalSubspace, plan: &[FlagCut]) -> RationalSubspace {
    plan.iter().fold(w.clone(), |acc, c| acc.cut_preimage(c.flag.set, c.flag.level(c.exponent)))
}

/// The set function a cut should realize: `UpMin(ν*_W + ξ_𝒥)`, or the first `I` at which
/// `ν*_W + ξ_𝒥` is negative.
pub fn expected_upmin(w: &RationalSubspace, js: &[Mask]) -> Result<std::result::Result<SetFunction, Mask>> {
    let f = w.nu_star().add(&SetFunction::xi_sum(w.ambient.ground(), js)?);
    Ok(match (1..=f.ground().full()).find(|&m| f.get(m) < &Q::zero()) {
        Some(m) => Err(m),
        None => Ok(f.upmin()),
    })
}

/// `W′ = W ∩ ⋂ proj_I^{-1}(F_I^e)` when `ν*_W + ξ_𝒥 ≥ 0`.
///
/// When the inequality fails the cut space degenerates: some block projection vanishes. That is
/// reported as [`Error::Guard`], naming the block.
pub fn cut_by_flags(w: &RationalSubspace, plan: &[FlagCut]) -> Result<RationalSubspace> {
    for c in plan {
        if c.exponent > c.flag.len() {
            return Err(Error::Input(format!("exponent {} exceeds the flag length {}", c.exponent, c.flag.len())));
        }
    }
    let cut = intersect_flags(w, plan);
    match expected_upmin(w, &plan_sets(plan))? {
        Ok(_) => Ok(cut),
        Err(m) => {
            let ground = w.ambient.ground();
            let zero: Vec<&str> = cut.vanishing_blocks().iter().map(|&v| ground.elements()[v].as_str()).collect();
            Err(Error::Guard(format!(
                "ν*_W + ξ_𝒥 is negative at {}; the cut space has zero projection on [{}]",
                ground.key(m),
                zero.join(", ")
            )))
        }
    }
}

/// A cut with its certificate.
#[derive(Clone, Debug)]
pub struct Realization {
    pub space: RationalSubspace,
    pub nu_star: SetFunction,
    /// Random draws used, at least 1.
    pub draws: usize,
}

fn random_split(total: usize, rng: &mut impl Rng) -> Vec<usize> {
    if total < 2 || rng.gen_bool(0.5) {
        return vec![total];
    }
    let k = rng.gen_range(0..=total);
    vec![k, total - k]
}

/// Cuts `W` by random flags so that `ν*` of the result is `UpMin(ν*_W + ξ_𝒥)` and the
/// codimension is `|𝒥|`. Each set of `𝒥` gets one or two flags, splitting its multiplicity.
pub fn realize_by_flags(w: &RationalSubspace, js: &[Mask], rng: &mut impl Rng) -> Result<Realization> {
    let target = expected_upmin(w, js)?
        .map_err(|m| Error::Guard(format!("ν*_W + ξ_𝒥 is negative at {}", w.ambient.ground().key(m))))?;
    let mut sets: Vec<Mask> = js.to_vec();
    sets.sort_unstable();
    sets.dedup();
    for draws in 1..=MAX_DRAWS {
        let mut plan = Vec::new();
        for &s in &sets {
            let count = js.iter().filter(|&&j| j == s).count();
            for e in random_split(count, rng) {
                plan.push(FlagCut { flag: Flag::random(&w.ambient, s, rng)?, exponent: e });
            }
        }
        let space = cut_by_flags(w, &plan)?;
        let nu = space.nu_star();
        if nu == target && w.dim() - space.dim() == js.len() {
            return Ok(Realization { space, nu_star: nu, draws });
        }
    }
    Err(Error::Property(format!("no flags in general position after {MAX_DRAWS} draws")))
}

/// One index `i` of a gluing cut: the set `J_i` and, per element `v` of `J_i` (in increasing
/// order), a subspace `H_{i,v} ⊆ U_v` of codimension at most one, given by a normal vector or
/// `None` for `H_{i,v} = U_v`.
#[derive(Clone, Debug)]
pub struct GlueCut {
    pub set: Mask,
    pub normals: Vec<Option<Vec<Q>>>,
}

impl GlueCut {
    fn normal(&self, v: usize) -> Option<&Vec<Q>> {
        let k = bits(self.set).position(|u| u == v)?;
        self.normals[k].as_ref().filter(|n| n.iter().any(|x| !x.is_zero()))
    }
}

/// `W ∩ ⋂_{i, v∈S_i} proj_v^{-1}(H_{i,v})`.
fn cut_local(w: &RationalSubspace, cuts: &[GlueCut], selection: &[Mask]) -> RationalSubspace {
    let mut forms = Vec::new();
    for (c, &s) in cuts.iter().zip(selection) {
        for v in bits(s) {
            if let Some(n) = c.normal(v) {
                forms.push(w.ambient.lift(1 << v, n));
            }
        }
    }
    w.cut(&forms)
}

/// `W ∩ ⋂_i proj_{J_i}^{-1}(H_i)` for general hyperplanes `H_i ⊂ U_{J_i}` containing
/// `⊕_{v∈J_i} H_{i,v}`, so that `ν*` of the result is `UpMin(ν*_W + ξ_𝒥)`.
///
/// The hypothesis is certified first: for every selection `S_i ⊆ J_i` with
/// `ν*_W + Σ_i Σ_{v∈S_i} ξ_v ≥ 0`, the local cut must realize that transform. A failure, or a
/// degenerate `⊕H_{i,v} = U_{J_i}`, is an [`Error::Guard`].
pub fn cut_by_glue_hyperplanes(w: &RationalSubspace, cuts: &[GlueCut], rng: &mut impl Rng) -> Result<Realization> {
    let ground = w.ambient.ground().clone();
    for c in cuts {
        if c.set == 0 || c.normals.len() != c.set.count_ones() as usize {
            return Err(Error::Input("each gluing cut needs a nonempty set and one entry per element".into()));
        }
        for (v, n) in bits(c.set).zip(&c.normals) {
            if n.as_ref().is_some_and(|n| n.len() != w.ambient.dims()[v]) {
                return Err(Error::Input(format!("normal at {} has the wrong length", ground.elements()[v])));
            }
        }
    }
    let js: Vec<Mask> = cuts.iter().map(|c| c.set).collect();
    let target = expected_upmin(w, &js)?
        .map_err(|m| Error::Guard(format!("ν*_W + ξ_𝒥 is negative at {}", ground.key(m))))?;
    let phi = w.nu_star();
    let mut selection = vec![0; cuts.len()];
    loop {
        let singles: Vec<Mask> = selection.iter().flat_map(|&s| bits(s).map(|v| 1 << v)).collect();
        let f = phi.add(&SetFunction::xi_sum(&ground, &singles)?);
        if f.is_nonnegative() && cut_local(w, cuts, &selection).nu_star() != f.upmin() {
            let sel: Vec<String> = selection.iter().map(|&s| ground.key(s)).collect();
            return Err(Error::Guard(format!("local hyperplanes fail the hypothesis at [{}]", sel.join("; "))));
        }
        // Next selection, as a mixed-radix counter over the subsets of each J_i.
        let mut i = 0;
        while i < cuts.len() {
            selection[i] = (selection[i].wrapping_sub(cuts[i].set)) & cuts[i].set;
            if selection[i] != 0 {
                break;
            }
            i += 1;
        }
        if i == cuts.len() {
            break;
        }
    }
    for c in cuts {
        if bits(c.set).all(|v| c.normal(v).is_none()) {
            return Err(Error::Guard(format!("⊕H_v = U_J for J = {}", ground.key(c.set))));
        }
    }
    for draws in 1..=MAX_DRAWS {
        let forms: Matrix = cuts
            .iter()
            .map(|c| {
                let mut f = vec![Q::zero(); w.ambient.total()];
                for v in bits(c.set) {
                    if let Some(n) = c.normal(v) {
                        let lam = random_q(rng);
                        for (x, y) in f.iter_mut().zip(w.ambient.lift(1 << v, n)) {
                            *x += &lam * y;
                        }
                    }
                }
                f
            })
            .collect();
        let space = w.cut(&forms);
        let nu = space.nu_star();
        if nu == target {
            return Ok(Realization { space, nu_star: nu, draws });
        }
    }
    Err(Error::Property(format!("no general hyperplanes found after {MAX_DRAWS} draws")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::q;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn space(dims: &[usize]) -> DecomposedSpace {
        DecomposedSpace::new(GroundSet::numbered("v", dims.len()), dims.to_vec()).unwrap()
    }

    #[test]
    fn diagonal_line() {
        let w = RationalSubspace::new(space(&[1, 1]), &[vec![q(1), q(1)]]).unwrap();
        let nu = w.nu_star();
        assert_eq!(nu.values(), &[q(0), q(1), q(1), q(1)]);
    }

    #[test]
    fn whole_space_is_modular() {
        let u = space(&[2, 0, 3]);
        let nu = RationalSubspace::whole(u.clone()).nu_star();
        for m in 0..8 {
            assert_eq!(*nu.get(m), q(u.dim_of(m) as i64));
        }
    }

    #[test]
    fn preimage_cut() {
        let u = space(&[2, 1]);
        let w = RationalSubspace::whole(u);
        // proj_{v0}^{-1}(span(e0)) kills the second coordinate of U_{v0}.
        let c = w.cut_preimage(1, &[vec![q(1), q(0)]]);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.projection_dim(1), 1);
        assert!(w.contains(&c) && !c.contains(&w));
        assert_eq!(w.intersect(&c), c);
    }

    #[test]
    fn one_flag_cut_follows_upmin() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let w = RationalSubspace::random(space(&[2, 2, 1]), 3, &mut rng).unwrap();
        let r = realize_by_flags(&w, &[0b001], &mut rng).unwrap();
        assert_eq!(r.space.dim(), 2);
        assert_eq!(r.nu_star, w.nu_star().add(&SetFunction::xi(w.ambient.ground(), 1).unwrap()).upmin());
    }

    #[test]
    fn negative_plan_reports_a_vanishing_block() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let w = RationalSubspace::random(space(&[1, 2]), 2, &mut rng).unwrap();
        let plan = [FlagCut { flag: Flag::random(&w.ambient, 1, &mut rng).unwrap(), exponent: 1 }];
        // ν*({v0}) = 1, so a second cut at v0 is not allowed.
        let mut twice = plan.to_vec();
        twice.push(FlagCut { flag: Flag::random(&w.ambient, 1, &mut rng).unwrap(), exponent: 1 });
        assert!(cut_by_flags(&w, &plan).is_ok());
        let err = cut_by_flags(&w, &twice).unwrap_err();
        assert!(matches!(err, Error::Guard(ref m) if m.contains("[v0]")), "{err}");
    }

    #[test]
    fn glue_cut_on_a_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let w = RationalSubspace::random(space(&[2, 2]), 3, &mut rng).unwrap();
        let cut = GlueCut { set: 0b11, normals: vec![Some(vec![q(1), q(2)]), Some(vec![q(3), q(-1)])] };
        let r = cut_by_glue_hyperplanes(&w, &[cut], &mut rng).unwrap();
        assert_eq!(r.space.dim(), 2);
        let empty = cut_by_glue_hyperplanes(&w, &[], &mut rng).unwrap();
        assert_eq!(empty.space, w);
        let flat = GlueCut { set: 0b11, normals: vec![None, None] };
        assert!(matches!(cut_by_glue_hyperplanes(&w, &[flat], &mut rng), Err(Error::Guard(_))));
    }
}
