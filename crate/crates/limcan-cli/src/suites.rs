//! The verification suites behind `limcan verify`.
//!
//! Each suite reproduces a worked example or checks a theorem as an exact property over seeded
//! random instances. Expected values come from independent oracles: tables written out by hand,
//! brute-force enumeration, or closed formulas. A suite passes when every check holds exactly.

use std::collections::BTreeSet;

use limcan::bricks;
use limcan::cones;
use limcan::genus0::{self, GluingData, MarkedConfig, Quartic};
use limcan::graph::{rev, Arrow, Multigraph, OrderedPartition, Pair, SlopeFunction};
use limcan::linalg;
use limcan::potential::{self, Weights};
use limcan::qlinalg::{self, DecomposedSpace, Flag, FlagCut, GlueCut, RationalSubspace};
use limcan::rat::{q, qr, Q};
use limcan::residue::{self, ResidueSpace};
use limcan::setfn::{bits, GroundSet, Mask, PolytopeH, SetFunction};
use limcan::{circuits, fixtures, Error, Result};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// At most this many failure messages are kept per suite.
const MAX_MESSAGES: usize = 20;

/// Tallies checks and keeps the first failure messages.
#[derive(Debug, Default)]
pub struct Check {
    pub instances: usize,
    pub failed: usize,
    pub messages: Vec<String>,
}

impl Check {
    /// Records one check.
    pub fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, msg: String) {
        self.failed += 1;
        if self.messages.len() < MAX_MESSAGES {
            self.messages.push(msg);
        }
    }
}

/// The outcome of one suite.
#[derive(Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub title: &'static str,
    pub seed: u64,
    pub check: Check,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.check.failed == 0
    }

    /// One human-readable line.
    pub fn line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!("{verdict} {:<18} {} ({} checks", self.name, self.title, self.check.instances);
        if self.check.failed > 0 {
            s += &format!(", {} failed: {}", self.check.failed, self.check.messages.join("; "));
        }
        s + ")"
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.name,
            "title": self.title,
            "seed": self.seed,
            "passed": self.passed(),
            "checks": self.check.instances,
            "failed": self.check.failed,
            "failures": self.check.messages,
        })
    }
}

type SuiteFn = fn(&mut ChaCha8Rng, &mut Check) -> Result<()>;

/// A named suite.
pub struct Suite {
    pub name: &'static str,
    pub title: &'static str,
    run: SuiteFn,
}

/// Every suite, in report order.
pub const SUITES: [Suite; 11] = [
    Suite { name: "upmin-example", title: "UpMin of the four-lines function", run: upmin_example },
    Suite { name: "k4-example", title: "the K4 worked example", run: k4_example },
    Suite { name: "residue-dimension", title: "dim G_π = |E| − |V| + 1", run: residue_dimension },
    Suite { name: "monotonicity", title: "γ, ζ monotonicity and the ζ identities", run: monotonicity },
    Suite { name: "subintegrability", title: "potentials and their equality sets", run: subintegrability },
    Suite { name: "cone-roundtrip", title: "lengths ↔ slope-level pairs", run: cone_roundtrip },
    Suite { name: "squash", title: "squashing and facets over the PSL", run: squash },
    Suite { name: "brick-tiling", title: "unique PSL(B) hit and brick volumes", run: brick_tiling },
    Suite { name: "flag-cuts", title: "flag and gluing cuts realize UpMin", run: flag_cuts },
    Suite { name: "realization", title: "genus-0 realization of Ŵ and W^exp", run: realization },
    Suite { name: "quartic", title: "leading coefficients from a quartic", run: quartic },
];

/// Runs one suite with its own generator derived from `seed`.
pub fn run_suite(index: usize, seed: u64) -> SuiteReport {
    let suite = &SUITES[index];
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(index as u64));
    let mut check = Check::default();
    if let Err(e) = (suite.run)(&mut rng, &mut check) {
        check.instances += 1;
        check.fail(format!("aborted: {e}"));
    }
    SuiteReport { name: suite.name, title: suite.title, seed, check }
}

/// Runs `"all"` or the named suite.
pub fn run(selection: &str, seed: u64) -> Result<Vec<SuiteReport>> {
    if selection == "all" {
        return Ok((0..SUITES.len()).map(|i| run_suite(i, seed)).collect());
    }
    let i = SUITES.iter().position(|s| s.name == selection).ok_or_else(|| {
        let names: Vec<&str> = SUITES.iter().map(|s| s.name).collect();
        Error::Input(format!("unknown suite {selection:?}; expected all or one of {}", names.join(", ")))
    })?;
    Ok(vec![run_suite(i, seed)])
}

fn fixture(name: &str) -> Value {
    let text = match name {
        "example_phi" => include_str!("../../../fixtures/example_phi.json"),
        "k4_pair" => include_str!("../../../fixtures/k4_pair.json"),
        "quartic_fermat" => include_str!("../../../fixtures/quartic_fermat.json"),
        _ => unreachable!("unknown fixture {name}"),
    };
    serde_json::from_str(text).expect("fixture JSON parses")
}

fn table(ground: &GroundSet, f: impl Fn(Mask) -> i64) -> SetFunction {
    SetFunction::from_fn(ground, |m| q(f(m))).expect("valid table")
}

/// `Σ c_e ℓ_e` as a row over the edges of `g`.
fn edge_row(g: &Multigraph, terms: &[(&str, i64)]) -> Vec<Q> {
    let mut row = vec![Q::zero(); g.num_edges()];
    for (id, c) in terms {
        row[g.edge_index(id).expect("known edge")] += q(*c);
    }
    row
}

/// The closed cone `{ℓ ≥ 0 : rows ≤ 0, eqs = 0}` in `ℝ^E`.
fn edge_cone(g: &Multigraph, rows: Vec<Vec<Q>>, eqs: Vec<Vec<Q>>) -> PolytopeH {
    PolytopeH {
        ambient: cones::ConeH::edge_ground(g),
        inequalities: rows.into_iter().map(|r| (r, Q::zero())).collect(),
        equalities: eqs.into_iter().map(|r| (r, Q::zero())).collect(),
    }
    .with_nonnegativity()
}

/// A cone (all right-hand sides zero) meets the open orthant.
fn meets_open_orthant(h: &PolytopeH) -> bool {
    let weak: Vec<Vec<Q>> = h.inequalities.iter().map(|(a, _)| a.clone()).collect();
    let eqs: Vec<Vec<Q>> = h.equalities.iter().map(|(a, _)| a.clone()).collect();
    cones::margin(h.ambient.len(), &[], &weak, &eqs).0.is_positive()
}

/// A random positive rational with a large prime denominator: generic for every wall we meet.
fn generic_positive(rng: &mut impl Rng) -> Q {
    qr(rng.gen_range(1..=1_000_000), 1_000_003)
}

fn slope_table(g: &Multigraph, f: impl Fn(usize, usize) -> i64) -> SlopeFunction {
    let values = g.arrows().map(|a| f(g.tail(a), g.head(a))).collect();
    SlopeFunction::new(g, values).expect("valid slopes")
}

// ---------------------------------------------------------------------------------------------

/// The four-lines function and its UpMin transform, against the tables written out by hand.
fn upmin_example(_: &mut ChaCha8Rng, c: &mut Check) -> Result<()> {
    let phi = SetFunction::from_json(&fixture("example_phi"))?;
    let ground = phi.ground().clone();
    // u0 is bit 0.
    let expect_phi = table(&ground, |m| match (m, m & 1, m.count_ones()) {
        (0, _, _) => 0,
        (_, 0, _) => 1,
        (_, _, 1 | 2) => 5,
        (_, _, 3) => 4,
        _ => 3,
    });
    c.expect(phi == expect_phi, || "fixture φ differs from the tabulated function".into());
    c.expect(phi.is_submodular(), || "φ is not submodular".into());
    let chi = phi.upmin();
    for m in 0..=ground.full() {
        let want = if m == 0 { 0 } else if m & 1 == 1 { 3 } else { 1 };
        c.expect(*chi.get(m) == q(want), || format!("χ({}) = {}, expected {want}", ground.key(m), chi.get(m)));
    }
    Ok(())
}

fn k4_example(_: &mut ChaCha8Rng, c: &mut Check) -> Result<()> {
    let g = fixtures::k4();
    let ground = g.vertices().clone();
    let key = |m: Mask| ground.key(m);

    // (a) The trivial pair: γ is 2 on singletons, 3 on pairs, range 3, and equals its UpMin.
    let gamma0 = residue::gamma(&g, &OrderedPartition::trivial(4))?;
    for m in 1..16u32 {
        match m.count_ones() {
            1 => c.expect(*gamma0.get(m) == q(2), || format!("γ_π0({}) ≠ 2", key(m))),
            2 => c.expect(*gamma0.get(m) == q(3), || format!("γ_π0({}) ≠ 3", key(m))),
            _ => {}
        }
    }
    c.expect(*gamma0.range() == q(3), || "γ_π0 has range ≠ 3".into());
    c.expect(gamma0.upmin() == gamma0, || "UpMin(γ_π0) ≠ γ_π0".into());

    // (b) The second pair: u0 above u1 u2 u3, s(a01) = 1, s(a_i0) = −1, all else 0.
    let p = Pair::from_json(&g, &fixture("k4_pair"))?;
    let s = slope_table(&g, |t, h| match (t, h) {
        (0, 1) => 1,
        (_, 0) => -1,
        _ => 0,
    });
    c.expect(p.s == s, || "fixture slopes differ from the worked example".into());
    c.expect(p.pi.blocks() == [vec![1, 2, 3], vec![0]], || "fixture partition differs".into());
    let gamma = residue::gamma(&g, &p.pi)?;
    c.expect(*gamma.get(0b1110) == q(1), || "γ_π({u1,u2,u3}) ≠ 1".into());
    c.expect(*gamma.get(0b0001) == q(2), || "γ_π({u0}) ≠ 2".into());
    for i in 1..4 {
        c.expect(*gamma.get(1 | 1 << i) == q(3), || format!("γ_π({{u0,u{i}}}) ≠ 3"));
    }
    let zeta = p.s.zeta(&g);
    c.expect(*zeta.get(1) == q(1), || "ζ_s({u0}) ≠ 1".into());
    let eta = residue::eta(&g, &p)?;
    c.expect(*eta.get(1) == q(3), || "η({u0}) ≠ 3".into());
    for i in 1..4 {
        c.expect(*eta.get(1 << i) == q(1), || format!("η({{u{i}}}) ≠ 1"));
    }
    c.expect(*eta.get(0b1110) == q(1), || "η({u1,u2,u3}) ≠ 1".into());
    let chi = table(&ground, |m| if m == 0 { 0 } else if m & 1 == 1 { 3 } else { 1 });
    c.expect(eta.upmin() == chi, || "UpMin(η) differs from the tabulated values".into());

    // (c) σ^0_1 = {ℓ01 ≤ ℓ02, ℓ01 ≤ ℓ03}.
    let sigma = |i: &str, j: &str, k: &str| {
        edge_cone(&g, vec![edge_row(&g, &[(i, 1), (j, -1)]), edge_row(&g, &[(i, 1), (k, -1)])], vec![])
    };
    let sigma01 = sigma("e01", "e02", "e03");
    let cone = cones::cone_hrep(&g, &p)?;
    c.expect(cone.polytope(&g).same_set(&sigma01), || "σ_{s,π} ≠ {ℓ01 ≤ ℓ02, ℓ01 ≤ ℓ03}".into());

    // (d) P_{s,π} = B0 = Δ3 ∩ {q1 + q2 + q3 ≤ 1}.
    let b0 = bricks::vertex_brick(4, 3, 0);
    let delta_cut = PolytopeH {
        ambient: ground.clone(),
        inequalities: vec![(vec![q(0), q(1), q(1), q(1)], q(1))],
        equalities: vec![(vec![q(1); 4], q(3))],
    }
    .with_nonnegativity();
    let p_eta = eta.upmin().polytope_hrep()?;
    c.expect(p_eta.same_set(&delta_cut), || "P_{s,π} ≠ Δ3 ∩ {q1+q2+q3 ≤ 1}".into());
    c.expect(b0.polytope(&ground).same_set(&delta_cut), || "B0 ≠ Δ3 ∩ {q1+q2+q3 ≤ 1}".into());

    // (e) Squashing along a20·a01 and a30·a01, in either order, gives s0 with η = φ.
    let a = |i: usize, j: usize| g.arrow(&format!("e{}{}", i.min(j), i.max(j)), &format!("u{i}"));
    let z1 = [a(2, 0), a(0, 1)];
    let z2 = [a(3, 0), a(0, 1)];
    let s0 = Pair::new(&g, slope_table(&g, |t, h| match (t, h) {
        (0, _) => 1,
        (_, 0) => -1,
        _ => 0,
    }), p.pi.clone())?;
    for (first, second) in [(z1, z2), (z2, z1)] {
        let mid = cones::squash(&g, &p, &circuit_through(&g, &p, &first)?)?;
        let end = cones::squash(&g, &mid, &circuit_through(&g, &mid, &second)?)?;
        c.expect(end == s0, || format!("double squash gives {}", end.label(&g)));
    }
    let zeta0 = s0.s.zeta(&g);
    let expect_zeta0 = table(&ground, |m| if m & 1 == 1 { 4 - m.count_ones() as i64 } else { 0 });
    c.expect(zeta0 == expect_zeta0, || "ζ_{s0} differs from the tabulated values".into());
    let phi = SetFunction::from_json(&fixture("example_phi"))?;
    c.expect(residue::eta(&g, &s0)? == phi, || "η_{s0,π} ≠ φ".into());

    // (f) Σ_{B0}: three maximal cones σ^0_i; the smallest cone meeting ℝ>0 is ℓ01 = ℓ02 = ℓ03.
    let psl = bricks::enumerate_psl(&g, None)?;
    let bi = psl.brick_index(&b0.key()).ok_or_else(|| Error::Property("B0 not enumerated".into()))?;
    let fan = bricks::fan_for_brick(&g, &psl, bi)?;
    let maximal = fan.maximal();
    c.expect(maximal.len() == 3, || format!("Σ_B0 has {} maximal cones", maximal.len()));
    let expected = [sigma01, sigma("e02", "e01", "e03"), sigma("e03", "e01", "e02")];
    for want in &expected {
        let hits = maximal.iter().filter(|&&i| fan.cones[i].hrep.same_set(want)).count();
        c.expect(hits == 1, || format!("{hits} maximal cones of Σ_B0 match a σ^0_i"));
    }
    let star = edge_cone(
        &g,
        vec![],
        vec![edge_row(&g, &[("e01", 1), ("e02", -1)]), edge_row(&g, &[("e01", 1), ("e03", -1)])],
    );
    let meeting: Vec<usize> = (0..fan.cones.len()).filter(|&i| meets_open_orthant(&fan.cones[i].hrep)).collect();
    let smallest = meeting.iter().copied().min_by_key(|&i| fan.cones[i].dim);
    c.expect(smallest.is_some_and(|i| fan.cones[i].hrep.same_set(&star)), || {
        "the smallest cone of Σ_B0 meeting ℝ>0 is not ℓ01 = ℓ02 = ℓ03".into()
    });
    for &i in &meeting {
        c.expect(star.is_subset_of(&fan.cones[i].hrep), || format!("cone {i} of Σ_B0 does not contain ℓ01 = ℓ02 = ℓ03"));
    }

    // (g) Every cone of Σ(K4) meeting ℝ>0 contains the constant ray, which is itself a cone.
    let sigma_fan = bricks::canonical_fan(&g, &psl)?;
    let ones = vec![Q::one(); g.num_edges()];
    let mut ray = false;
    for (i, cone) in sigma_fan.cones.iter().enumerate() {
        if meets_open_orthant(&cone.hrep) {
            c.expect(cone.hrep.contains(&ones), || format!("cone {i} of Σ misses the constant ray"));
            ray |= cone.dim == 1;
        }
    }
    c.expect(ray, || "the constant ray is not a cone of Σ".into());
    Ok(())
}

/// The finite essential circuit of `p` made of exactly these arrows.
fn circuit_through(g: &Multigraph, p: &Pair, arrows: &[Arrow]) -> Result<Vec<usize>> {
    let (gg, zs) = cones::essential_circuits(g, p)?;
    let want: BTreeSet<Arrow> = arrows.iter().copied().collect();
    zs.into_iter()
        .find(|z| z.iter().all(|&i| !gg.is_ghost(i)) && z.iter().filter_map(|&i| gg.arcs[i].arrow).collect::<BTreeSet<_>>() == want)
        .ok_or_else(|| Error::Property(format!("no essential circuit on {arrows:?}")))
}

// ---------------------------------------------------------------------------------------------

fn random_partition(n: usize, rng: &mut impl Rng) -> OrderedPartition {
    let h: Vec<Q> = (0..n).map(|_| q(rng.gen_range(0..n as i64))).collect();
    OrderedPartition::level_from(&h)
}

fn residue_dimension(rng: &mut ChaCha8Rng, c: &mut Check) -> Result<()> {
    let mut loops = 0;
    let mut parallel = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=7);
        let g = fixtures::random_graph(n, rng.gen_range(0..=4), rng);
        let ends: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.ends.0.min(e.ends.1), e.ends.0.max(e.ends.1))).collect();
        loops += usize::from(ends.iter().any(|(u, v)| u == v));
        parallel += usize::from(ends.iter().collect::<BTreeSet<_>>().len() < ends.len());
        let pi = random_partition(n, rng);
        let space = ResidueSpace::new(&g, &pi)?;
        let want = g.num_edges() + 1 - n;
        c.expect(space.dim() == want, || format!("dim G_π = {} on a graph with cycle rank {want}", space.dim()));
        c.expect(*space.gamma(&g).range() == q(want as i64), || "γ_π(V) ≠ dim G_π".into());
    }
    c.expect(loops > 0 && parallel > 0, || "the sample has no loops or no parallel edges".into());
    Ok(())
}

/// A slope function with random values: each edge integer or not, values in `[−2, 2]`.
fn random_slopes(g: &Multigraph, rng: &mut impl Rng) -> SlopeFunction {
    let mut values = vec![0; g.num_arrows()];
    for a in g.arrows().step_by(2) {
        let k = rng.gen_range(-2..=2);
        values[a] = k;
        values[rev(a)] = -k - i64::from(rng.gen_bool(0.5));
    }
    SlopeFunction::new(g, values).expect("valid slopes")
}

fn monotonicity(rng: &mut ChaCha8Rng, c: &mut Check) -> Result<()> {
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let g = fixtures::random_graph(n, rng.gen_range(0..=3), rng);
        let ground = g.vertices();
        let full = ground.full();

        // γ grows under coarsening: merge random consecutive levels.
        let pi = random_partition(n, rng);
        let merge: Vec<bool> = (0..pi.num_levels()).map(|_| rng.gen_bool(0.5)).collect();
        let mut new_level = vec![0usize; pi.num_levels()];
        for k in 1..pi.num_levels() {
            new_level[k] = new_level[k - 1] + usize::from(!merge[k]);
        }
        let coarse = OrderedPartition::from_levels(&(0..n).map(|v| new_level[pi.level(v)]).collect::<Vec<_>>())?;
        c.expect(coarse.coarsens(&pi), || "merged partition does not coarsen".into());
        let (gf, gc) = (residue::gamma(&g, &pi)?, residue::gamma(&g, &coarse)?);
        c.expect(gc.dominates(&gf), || "γ_{π′} < γ_π somewhere for a coarsening π′".into());

        // ζ grows with s: raise one arrow of some non-integer edges.
        let s = random_slopes(&g, rng);
        let mut raised = s.values().to_vec();
        for a in g.arrows().step_by(2) {
            if raised[a] + raised[rev(a)] == -1 && rng.gen_bool(0.5) {
                let b = if rng.gen_bool(0.5) { a } else { rev(a) };
                raised[b] += 1;
            }
        }
        let s2 = SlopeFunction::new(&g, raised)?;
        c.expect(s2.zeta(&g).dominates(&s.zeta(&g)), || "ζ_{s′} < ζ_s somewhere for s′ ≥ s".into());

        // ζ_s − φ1 and ζ_s − φ2 are modular.
        let zeta = s.zeta(&g);
        let int_up = s.sets(&g).int_upward;
        let inside = |m: Mask, v: usize| m >> v & 1 == 1;
        let phi1 = table(ground, |m| {
            int_up.iter().filter(|&&a| !inside(m, g.tail(a)) && inside(m, g.head(a))).count() as i64
        });
        let phi2 = table(ground, |m| {
            -(int_up.iter().filter(|&&a| inside(m, g.tail(a)) && inside(m, g.head(a))).count() as i64)
        });
        c.expect(zeta.sub(&phi1).is_modular(), || "ζ_s − |A^int_s(Iᶜ, I)| is not modular".into());
        c.expect(zeta.sub(&phi2).is_modular(), || "ζ_s + |A^int_s(I)| is not modular".into());

        // Σ_{𝔼(I,Iᶜ)} s = Σ_{𝔼_I} s + |A_s(I) − A^int_s(I)| for every I.
        let sv = s.values();
        let up: Vec<Arrow> = g.arrows().filter(|&a| sv[rev(a)] < 0).collect();
        let ok = (0..=full).all(|m| {
            let out: i64 = g.arrows().filter(|&a| inside(m, g.tail(a)) && !inside(m, g.head(a))).map(|a| sv[a]).sum();
            let from: i64 = g.arrows().filter(|&a| inside(m, g.tail(a))).map(|a| sv[a]).sum();
            let nonint = up
                .iter()
                .filter(|&&a| inside(m, g.tail(a)) && inside(m, g.head(a)) && sv[a] + sv[rev(a)] != 0)
                .count() as i64;
            out == from + nonint
        });
        c.expect(ok, || "the outgoing-slope identity fails".into());
    }
    Ok(())
}

// ---------------------------------------------------------------------------------------------

/// Arrows lying on some simple directed cycle of total weight zero, by exhaustive search.
fn zero_cycle_arrows(g: &Multigraph, x: &[Q]) -> Vec<bool> {
    fn walk(
        g: &Multigraph,
        x: &[Q],
        start: usize,
        v: usize,
        path: &mut Vec<Arrow>,
        seen: &mut Vec<bool>,
        mark: &mut Vec<bool>,
    ) {
        for a in g.arrows().filter(|&a| g.tail(a) == v) {
            let h = g.head(a);
            if h == start {
                path.push(a);
                if path.iter().map(|&b| &x[b]).sum::<Q>().is_zero() {
                    path.iter().for_each(|&b| mark[b] = true);
                }
                path.pop();
            } else if h > start && !seen[h] {
                seen[h] = true;
                path.push(a);
                walk(g, x, start, h, path, seen, mark);
                path.pop();
                seen[h] = false;
            }
        }
    }
    let mut mark = vec![false; g.num_arrows()];
    for start in 0..g.n() {
        let mut seen = vec![false; g.n()];
        seen[start] = true;
        walk(g, x, start, start, &mut Vec::new(), &mut seen, &mut mark);
    }
    mark
}

fn subintegrability(rng: &mut ChaCha8Rng, c: &mut Check) -> Result<()> {
    for _ in 0..500 {
        let n = rng.gen_range(1..=6);
        let g = fixtures::random_graph(n, rng.gen_range(0..=3), rng);
        // x = dh0 − δ with δ ≥ 0 (often 0) satisfies both hypotheses.
        let h0: Vec<Q> = (0..n).map(|_| q(rng.gen_range(-5..=5))).collect();
        let x: Vec<Q> = g
            .arrows()
            .map(|a| {
                let slack = if rng.gen_bool(0.5) { Q::zero() } else { qr(rng.gen_range(1..=12), 4) };
                &h0[g.tail(a)] - &h0[g.head(a)] - slack
            })
            .collect();
        let weights: Weights = x.iter().cloned().map(Some).collect();
        let h = potential::solve_digraph(&potential::arrow_digraph(&g), &weights, circuits::DEFAULT_CAP)?.h;
        c.expect(h.iter().min().is_some_and(Zero::is_zero), || "min h ≠ 0".into());
        let on_zero_cycle = zero_cycle_arrows(&g, &x);
        let ok = g.arrows().all(|a| {
            let dh = &h[g.tail(a)] - &h[g.head(a)];
            let forced = (&x[a] + &x[rev(a)]).is_zero() || on_zero_cycle[a];
            x[a] <= dh && (x[a] == dh) == forced
        });
        c.expect(ok, || "a potential inequality or its equality set is wrong".into());
    }
    Ok(())
}

// ---------------------------------------------------------------------------------------------

fn cone_roundtrip(rng: &mut ChaCha8Rng, c: &mut Check) -> Result<()> {
    // (ℓ, h) → (s, π): ℓ lies in the open cone, and h is recovered up to the same pair.
    for i in 0..100 {
        let g = if i % 4 == 0 { fixtures::k4() } else { fixtures::random_graph(rng.gen_range(1..=5), rng.gen_range(0..=3), rng) };
        let l: Vec<Q> = (0..g.num_edges()).map(|_| qr(rng.gen_range(1..=40), rng.gen_range(1..=6))).collect();
        let h: Vec<Q> = (0..g.n()).map(|_| qr(rng.gen_range(0..=40), rng.gen_range(1..=6))).collect();
        let p = Pair::from_lengths(&g, &l, &h);
        c.expect(cones::cone_hrep(&g, &p)?.interior_membership(&l), || format!("ℓ not in the open cone of {}", p.label(&g)));
        let back = potential::recover_level_function(&g, &l, &p)?;
        c.expect(Pair::from_lengths(&g, &l, &back) == p, || "recovered h gives another pair".into());
    }
    // Interior points of permissible cones: the recorded ones, then generic lengths.
    let mut hits = 0;
    for g in [fixtures::k4(), fixtures::theta()] {
        let psl = bricks::enumerate_psl(&g, None)?;
        let mut points: Vec<Vec<Q>> = psl.pairs.iter().map(|p| p.interior_point.clone()).collect();
        points.extend((0..60).map(|_| (0..g.num_edges()).map(|_| generic_positive(rng)).collect()));
        for l in points {
            for i in psl.pairs_at(&l) {
                let p = &psl.pairs[i].pair;
                let h = potential::recover_level_function(&g, &l, p)?;
                c.expect(Pair::from_lengths(&g, &l, &h) == *p, || format!("h does not reproduce {}", p.label(&g)));
                hits += 1;
            }
        }
    }
    c.expect(hits >= 100, || format!("only {hits} interior points sampled"));
    Ok(())
}

fn squash(_: &mut ChaCha8Rng, c: &mut Check) -> Result<()> {
    for g in [fixtures::k4(), fixtures::theta()] {
        let m = g.num_edges() as i64;
        let psl = bricks::enumerate_psl(&g, None)?;
        for pp in &psl.pairs {
            let p = &pp.pair;
            let cone = &pp.cone;
            let closed = cone.polytope(&g);
            let genus = cones::int_genus(&g, p);
            c.expect(closed.dimension() == m - genus as i64, || format!("dim σ ≠ |E| − g(G^int) for {}", p.label(&g)));
            let eta = &pp.eta;
            let ints: BTreeSet<usize> = p.s.sets(&g).int_edges.into_iter().collect();
            let (_, zs) = cones::essential_circuits(&g, p)?;
            for z in zs.iter().filter(|z| cone.is_active(z)) {
                let q = cones::squash(&g, p, z)?;
                let what = || format!("{} along {}", p.label(&g), cone.ghost.describe(z));
                let mut face = closed.clone();
                face.equalities.push((cone.ghost.row(z, g.num_edges()), Q::zero()));
                c.expect(cones::cone_hrep(&g, &q)?.polytope(&g).same_set(&face), || format!("C′ ≠ C ∩ H_z: {}", what()));
                c.expect(q.pi.coarsens(&p.pi), || format!("π′ does not coarsen π: {}", what()));
                c.expect(q.s.dominates(&p.s), || format!("s′ ≱ s: {}", what()));
                let ints2: BTreeSet<usize> = q.s.sets(&g).int_edges.into_iter().collect();
                c.expect(ints.is_subset(&ints2), || format!("E^int shrinks: {}", what()));
                c.expect(residue::eta(&g, &q)?.dominates(eta), || format!("η′ ≱ η: {}", what()));
            }
            for f in cones::facets(&g, p)? {
                let g2 = cones::int_genus(&g, &f.pair);
                c.expect(g2 == genus + 1, || format!("facet of {} has g(G^int) = {g2}", p.label(&g)));
                let d = cones::cone_hrep(&g, &f.pair)?.polytope(&g).dimension();
                c.expect(d == m - genus as i64 - 1, || format!("facet of {} has dimension {d}", p.label(&g)));
            }
        }
    }
    Ok(())
}

fn brick_tiling(rng: &mut ChaCha8Rng, c: &mut Check) -> Result<()> {
    for g in [fixtures::k4(), fixtures::theta()] {
        let psl = bricks::enumerate_psl(&g, None)?;
        let per_brick: Vec<Vec<usize>> = (0..psl.bricks.len()).map(|b| psl.for_brick(b)).collect();
        for _ in 0..50 {
            let l: Vec<Q> = (0..g.num_edges()).map(|_| generic_positive(rng)).collect();
            let hit: BTreeSet<usize> = psl.pairs_at(&l).into_iter().collect();
            for (b, pairs) in per_brick.iter().enumerate() {
                let k = pairs.iter().filter(|i| hit.contains(i)).count();
                c.expect(k == 1, || format!("{k} pairs of PSL({}) contain ℓ", psl.bricks[b].key()));
            }
        }
    }
    for n in 1..=4usize {
        for genus in 1..=4i64 {
            let all = bricks::enumerate_bricks(n, genus, 100_000)?;
            let total: Q = all.iter().map(|b| b.volume()).sum();
            let fact: i64 = (1..n as i64).product();
            let want = Q::from_integer(num_bigint::BigInt::from(genus).pow(n as u32 - 1)) / q(fact);
            c.expect(total == want, || format!("brick volumes sum to {total} on Δ_{genus} with {n} labels"));
            let keys: BTreeSet<String> = all.iter().map(|b| b.key()).collect();
            let sampled = bricks::sample_brick_keys(n, genus, 200, rng);
            c.expect(sampled.is_subset(&keys), || format!("a sampled brick is missing (n = {n}, g = {genus})"));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------------------------

fn random_space(rng: &mut impl Rng) -> Result<RationalSubspace> {
    let n = rng.gen_range(1..=4);
    let dims: Vec<usize> = loop {
        let d: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
        let t: usize = d.iter().sum();
        if (1..=10).contains(&t) {
            break d;
        }
    };
    let total = dims.iter().sum();
    let u = DecomposedSpace::new(GroundSet::numbered("v", n), dims)?;
    RationalSubspace::random(u, rng.gen_range(1..=total), rng)
}

fn random_sets(full: Mask, k: usize, rng: &mut impl Rng) -> Vec<Mask> {
    (0..k).map(|_| rng.gen_range(1..=full)).collect()
}

fn flag_cuts(rng: &mut ChaCha8Rng, c: &mut Check) -> Result<()> {
    // Flags: realized UpMin and codimension when ν* + ξ ≥ 0, a vanishing block otherwise.
    let (mut realized, mut degenerate, mut tries) = (0, 0, 0);
    while (realized < 100 || degenerate < 20) && tries < 2000 {
        tries += 1;
        let w = random_space(rng)?;
        let ground = w.ambient.ground().clone();
        let js = random_sets(ground.full(), rng.gen_range(0..=3), rng);
        let distinct: BTreeSet<Mask> = js.iter().copied().collect();
        if distinct.iter().any(|&s| js.iter().filter(|&&j| j == s).count() > w.ambient.dim_of(s)) {
            continue;
        }
        let f = w.nu_star().add(&SetFunction::xi_sum(&ground, &js)?);
        if f.is_nonnegative() {
            let r = qlinalg::realize_by_flags(&w, &js, rng)?;
            let nu = r.space.nu_star();
            c.expect(nu == f.upmin(), || "ν* of the flag cut ≠ UpMin(ν*_W + ξ)".into());
            c.expect(w.dim() - r.space.dim() == js.len(), || "codim of the flag cut ≠ |𝒥|".into());
            c.expect(w.contains(&r.space), || "the flag cut is not inside W".into());
            realized += 1;
        } else {
            let mut plan = Vec::new();
            for &s in &distinct {
                let e = js.iter().filter(|&&j| j == s).count();
                plan.push(FlagCut { flag: Flag::random(&w.ambient, s, rng)?, exponent: e });
            }
            let cut = qlinalg::intersect_flags(&w, &plan);
            c.expect(!cut.vanishing_blocks().is_empty(), || "ν* + ξ < 0 but no block projection vanishes".into());
            c.expect(matches!(qlinalg::cut_by_flags(&w, &plan), Err(Error::Guard(_))), || "negative plan not reported".into());
            degenerate += 1;
        }
    }
    c.expect(realized >= 100, || format!("only {realized} realizable flag instances"));

    // Gluing hyperplanes.
    let (mut glued, mut tries) = (0, 0);
    while glued < 100 && tries < 2000 {
        tries += 1;
        let w = random_space(rng)?;
        let ground = w.ambient.ground().clone();
        let dims = w.ambient.dims().to_vec();
        let cuts: Vec<GlueCut> = random_sets(ground.full(), rng.gen_range(1..=3), rng)
            .into_iter()
            .map(|set| GlueCut {
                set,
                normals: bits(set)
                    .map(|v| (dims[v] > 0 && rng.gen_bool(0.8)).then(|| (0..dims[v]).map(|_| qlinalg::random_q(rng)).collect()))
                    .collect(),
            })
            .collect();
        if cuts.iter().any(|cut| cut.normals.iter().all(Option::is_none)) {
            continue;
        }
        let js: Vec<Mask> = cuts.iter().map(|cut| cut.set).collect();
        let f = w.nu_star().add(&SetFunction::xi_sum(&ground, &js)?);
        if !f.is_nonnegative() {
            continue;
        }
        match qlinalg::cut_by_glue_hyperplanes(&w, &cuts, rng) {
            Ok(r) => {
                c.expect(r.space.nu_star() == f.upmin(), || "ν* of the gluing cut ≠ UpMin(ν*_W + ξ)".into());
                glued += 1;
            }
            // The hypothesis on the local hyperplanes does not hold for this draw.
            Err(Error::Guard(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    c.expect(glued >= 100, || format!("only {glued} gluing instances satisfied the hypothesis"));
    Ok(())
}

// ---------------------------------------------------------------------------------------------

fn random_rho(g: &Multigraph, rng: &mut impl Rng) -> GluingData {
    let rho = (0..g.num_edges())
        .map(|_| loop {
            let x = qlinalg::random_q(rng);
            if !x.is_zero() {
                break x;
            }
        })
        .collect();
    GluingData::new(g, rho).expect("nonzero constants")
}

/// Outcome of one (configuration, pair) realization attempt.
fn realization_matches(g: &Multigraph, cfg: &MarkedConfig, p: &Pair, rho: &GluingData) -> Result<bool> {
    let genus = g.total_genus();
    let ints = p.s.sets(g).int_upward.len();
    let (_, hat) = genus0::w_hat(g, cfg, p)?;
    let (_, exp) = genus0::w_exp(g, cfg, p, rho)?;
    Ok(hat.dim() == genus + ints
        && hat.nu_star() == residue::eta_hat(g, p)?.upmin()
        && exp.dim() == genus
        && exp.nu_star() == residue::eta(g, p)?.upmin())
}

fn realization(rng: &mut ChaCha8Rng, c: &mut Check) -> Result<()> {
    for g in [fixtures::k4(), fixtures::theta()] {
        let psl = bricks::enumerate_psl(&g, None)?;
        for k in 0..30u64 {
            let rho = random_rho(&g, rng);
            let mut cfg = MarkedConfig::random(&g, k, rng);
            for pp in &psl.pairs {
                let mut draws = 1;
                while !realization_matches(&g, &cfg, &pp.pair, &rho)? && draws < qlinalg::MAX_DRAWS {
                    cfg = MarkedConfig::random(&g, k, rng);
                    draws += 1;
                }
                c.expect(realization_matches(&g, &cfg, &pp.pair, &rho)?, || {
                    format!("no generic configuration realizes {}", pp.pair.label(&g))
                });
                let checks = genus0::structural_checks(&g, &cfg, &pp.pair, &rho);
                c.expect(checks.is_ok(), || format!("{}: {}", pp.pair.label(&g), checks.unwrap_err()));
            }
        }
    }

    // A pair with η ≥ 0 vanishing on a nonempty set: the matching block projections of W^exp
    // are zero.
    let theta = fixtures::theta();
    let p = degenerate_pair(&theta);
    let eta = residue::eta(&theta, &p)?;
    c.expect(eta.is_nonnegative() && !eta.is_positive(), || "the degenerate pair has η > 0".into());
    let chi = eta.upmin();
    let zero: Vec<usize> = (0..theta.n()).filter(|&v| chi.get(1 << v).is_zero()).collect();
    for _ in 0..5 {
        let cfg = MarkedConfig::random(&theta, 0, rng);
        let (_, exp) = genus0::w_exp(&theta, &cfg, &p, &random_rho(&theta, rng))?;
        c.expect(!zero.is_empty() && exp.vanishing_blocks() == zero, || {
            format!("W^exp vanishes on blocks {:?}, UpMin(η) on {zero:?}", exp.vanishing_blocks())
        });
    }

    let g = fixtures::k4();
    // Rescaling the local parameter at p^a by c_a and ρ_e by c_a·c_ā leaves W^exp unchanged.
    let p = Pair::from_json(&g, &fixture("k4_pair"))?;
    for _ in 0..5 {
        let cfg = MarkedConfig::random(&g, 0, rng);
        let rho = random_rho(&g, rng);
        let scales: Vec<Q> = random_rho(&g, rng).rho.into_iter().chain(random_rho(&g, rng).rho).collect();
        let scaled = cfg.clone().with_scales(scales.clone())?;
        let rho2: Vec<Q> = (0..g.num_edges()).map(|e| &rho.rho[e] * &scales[2 * e] * &scales[2 * e + 1]).collect();
        let (_, w1) = genus0::w_exp(&g, &cfg, &p, &rho)?;
        let (_, w2) = genus0::w_exp(&g, &scaled, &p, &GluingData::new(&g, rho2)?)?;
        c.expect(w1 == w2, || "W^exp changes under a rescaling of the local parameters".into());
    }
    Ok(())
}

/// On the theta graph, `u` one level above `v` with all lengths 2: every arrow from `u` has
/// slope 0 and every arrow from `v` slope −1, so `η({v}) = 0`.
fn degenerate_pair(theta: &Multigraph) -> Pair {
    let l = vec![q(2); theta.num_edges()];
    Pair::from_lengths(theta, &l, &[q(1), q(0)])
}

// ---------------------------------------------------------------------------------------------

fn quartic(rng: &mut ChaCha8Rng, c: &mut Check) -> Result<()> {
    let f = Quartic::from_json(&fixture("quartic_fermat"))?;
    let rho = genus0::rho_from_quartic(&f)?;
    c.expect(rho == [2, 2, 2, 1, 1, 1].map(q).to_vec(), || format!("ρ(x1⁴ + x2⁴ + x3⁴) = {rho:?}"));
    let single = Quartic([([4, 0, 0], Q::one())].into_iter().collect());
    c.expect(matches!(genus0::rho_from_quartic(&single), Err(Error::Guard(_))), || "x1⁴ is not degenerate".into());
    let rows = genus0::quartic_rows();
    c.expect(linalg::rank(&rows, rows[0].len()) == 6, || "the six formulas are not independent".into());
    let mut targets = vec![vec![Q::one(); 6]];
    targets.extend((0..20).map(|_| (0..6).map(|_| qlinalg::random_q(rng)).filter(|x| !x.is_zero()).collect::<Vec<_>>()));
    for t in targets.into_iter().filter(|t| t.len() == 6) {
        let back = genus0::quartic_for_rho(&t).map(|f| genus0::rho_from_quartic(&f));
        c.expect(matches!(back, Some(Ok(ref r)) if *r == t), || "a target ρ is not reached by any quartic".into());
    }
    Ok(())
}
