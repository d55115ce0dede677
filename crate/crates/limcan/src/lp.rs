//! Exact two-phase simplex over ℚ with Bland's anti-cycling rule.
//!
//! Small dense problems only: the cones, bricks and polytopes in this crate have at most a few
//! dozen variables and a few hundred rows.

use num_traits::{One, Signed, Zero};

use crate::rat::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

/// A linear program `max c·x` subject to `rows`, with `x_j ≥ 0` unless `free[j]`.
#[derive(Clone, Debug)]
pub struct Lp {
    pub nvars: usize,
    pub free: Vec<bool>,
    pub rows: Vec<(Vec<Q>, Cmp, Q)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Infeasible,
    Unbounded,
    Optimal { value: Q, x: Vec<Q> },
}

impl Outcome {
    pub fn value(&self) -> Option<&Q> {
        match self {
            Outcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl Lp {
    /// Nonnegative variables, no rows.
    pub fn new(nvars: usize) -> Self {
        Lp { nvars, free: vec![false; nvars], rows: Vec::new() }
    }

    pub fn set_free(&mut self, j: usize) {
        self.free[j] = true;
    }

    pub fn add(&mut self, coeffs: Vec<Q>, cmp: Cmp, rhs: Q) {
        debug_assert_eq!(coeffs.len(), self.nvars);
        self.rows.push((coeffs, cmp, rhs));
    }

    /// Maximizes `c·x`.
    pub fn maximize(&self, c: &[Q]) -> Outcome {
        // Column layout: one column per nonnegative variable, two per free variable.
        let mut col_of = Vec::with_capacity(self.nvars);
        let mut nstruct = 0;
        for j in 0..self.nvars {
            col_of.push(nstruct);
            nstruct += if self.free[j] { 2 } else { 1 };
        }
        let expand = |coeffs: &[Q]| {
            let mut out = vec![Q::zero(); nstruct];
            for j in 0..self.nvars {
                out[col_of[j]] = coeffs[j].clone();
                if self.free[j] {
                    out[col_of[j] + 1] = -coeffs[j].clone();
                }
            }
            out
        };
        let m = self.rows.len();
        let mut rows: Vec<(Vec<Q>, Cmp, Q)> = Vec::with_capacity(m);
        for (a, cmp, b) in &self.rows {
            let mut a = expand(a);
            let (mut cmp, mut b) = (*cmp, b.clone());
            if b.is_negative() {
                a.iter_mut().for_each(|x| *x = -x.clone());
                b = -b;
                cmp = match cmp {
                    Cmp::Le => Cmp::Ge,
                    Cmp::Ge => Cmp::Le,
                    Cmp::Eq => Cmp::Eq,
                };
            }
            rows.push((a, cmp, b));
        }
        let nslack = rows.iter().filter(|r| r.1 != Cmp::Eq).count();
        let nart = rows.iter().filter(|r| r.1 != Cmp::Le).count();
        let ncols = nstruct + nslack + nart;
        let mut t: Vec<Vec<Q>> = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut si, mut ai) = (nstruct, nstruct + nslack);
        for (a, cmp, b) in rows {
            let mut row = a;
            row.resize(ncols + 1, Q::zero());
            row[ncols] = b;
            match cmp {
                Cmp::Le => {
                    row[si] = Q::one();
                    basis.push(si);
                    si += 1;
                }
                Cmp::Ge => {
                    row[si] = -Q::one();
                    si += 1;
                    row[ai] = Q::one();
                    basis.push(ai);
                    ai += 1;
                }
                Cmp::Eq => {
                    row[ai] = Q::one();
                    basis.push(ai);
                    ai += 1;
                }
            }
            t.push(row);
        }
        let art_start = nstruct + nslack;

        // Phase 1: maximize −Σ artificials.
        if nart > 0 {
            let mut c1 = vec![Q::zero(); ncols];
            for x in c1.iter_mut().skip(art_start) {
                *x = -Q::one();
            }
            let mut tab = Tableau::new(t, basis, &c1);
            if tab.run(ncols).is_err() {
                unreachable!("phase one is bounded");
            }
            if tab.objective_value().is_negative() {
                return Outcome::Infeasible;
            }
            // Drive artificials out of the basis; drop redundant rows.
            let mut r = 0;
            while r < tab.t.len() {
                if tab.basis[r] >= art_start {
                    if let Some(j) = (0..art_start).find(|&j| !tab.t[r][j].is_zero()) {
                        tab.pivot(r, j);
                    } else {
                        tab.t.remove(r);
                        tab.basis.remove(r);
                        continue;
                    }
                }
                r += 1;
            }
            t = tab.t;
            basis = tab.basis;
            for row in t.iter_mut() {
                let rhs = row[ncols].clone();
                row.truncate(art_start);
                row.push(rhs);
            }
        }
        let ncols2 = art_start;
        let mut c2 = expand(c);
        c2.resize(ncols2, Q::zero());
        let mut tab = Tableau::new(t, basis, &c2);
        if tab.run(ncols2).is_err() {
            return Outcome::Unbounded;
        }
        let mut xs = vec![Q::zero(); ncols2];
        for (r, &b) in tab.basis.iter().enumerate() {
            xs[b] = tab.t[r][ncols2].clone();
        }
        let x = (0..self.nvars)
            .map(|j| {
                let v = xs[col_of[j]].clone();
                if self.free[j] {
                    v - &xs[col_of[j] + 1]
                } else {
                    v
                }
            })
            .collect();
        Outcome::Optimal { value: tab.objective_value(), x }
    }

    /// Some feasible point, if any.
    pub fn feasible_point(&self) -> Option<Vec<Q>> {
        match self.maximize(&vec![Q::zero(); self.nvars]) {
            Outcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}

struct Tableau {
    t: Vec<Vec<Q>>,
    basis: Vec<usize>,
    /// Reduced costs followed by `−objective` in the last slot.
    z: Vec<Q>,
}

impl Tableau {
    fn new(t: Vec<Vec<Q>>, basis: Vec<usize>, c: &[Q]) -> Self {
        let ncols = c.len();
        let mut z: Vec<Q> = c.to_vec();
        z.push(Q::zero());
        for (r, &b) in basis.iter().enumerate() {
            if b < ncols && !z[b].is_zero() {
                let f = z[b].clone();
                for (zj, tj) in z.iter_mut().zip(&t[r]) {
                    if !tj.is_zero() {
                        *zj -= &f * tj;
                    }
                }
            }
        }
        Tableau { t, basis, z }
    }

    fn objective_value(&self) -> Q {
        -self.z.last().unwrap().clone()
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Q::one() / &self.t[r][c];
        for x in self.t[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        if !self.z[c].is_zero() {
            let f = self.z[c].clone();
            for (x, y) in self.z.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs primal simplex to optimality; `Err(())` when unbounded.
    fn run(&mut self, ncols: usize) -> Result<(), ()> {
        loop {
            let Some(enter) = (0..ncols).find(|&j| self.z[j].is_positive()) else {
                return Ok(());
            };
            let mut leave: Option<(usize, Q)> = None;
            for (r, row) in self.t.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[ncols_rhs(row)] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return Err(());
            };
            self.pivot(r, enter);
        }
    }
}

fn ncols_rhs(row: &[Q]) -> usize {
    row.len() - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qr};

    #[test]
    fn textbook() {
        // max 3x + 2y s.t. x + y ≤ 4, x + 3y ≤ 6, x ≤ 3.
        let mut lp = Lp::new(2);
        lp.add(vec![q(1), q(1)], Cmp::Le, q(4));
        lp.add(vec![q(1), q(3)], Cmp::Le, q(6));
        lp.add(vec![q(1), q(0)], Cmp::Le, q(3));
        assert_eq!(lp.maximize(&[q(3), q(2)]).value(), Some(&q(11)));
    }

    #[test]
    fn equality_free_and_infeasible() {
        let mut lp = Lp::new(2);
        lp.set_free(0);
        lp.add(vec![q(1), q(1)], Cmp::Eq, q(-1));
        lp.add(vec![q(0), q(2)], Cmp::Ge, q(1));
        match lp.maximize(&[q(1), q(0)]) {
            Outcome::Optimal { value, x } => {
                assert_eq!(value, qr(-3, 2));
                assert_eq!(x, vec![qr(-3, 2), qr(1, 2)]);
            }
            o => panic!("{o:?}"),
        }
        lp.add(vec![q(1), q(0)], Cmp::Ge, q(0));
        assert_eq!(lp.maximize(&[q(0), q(0)]), Outcome::Infeasible);
    }

    #[test]
    fn unbounded() {
        let mut lp = Lp::new(1);
        lp.add(vec![q(1)], Cmp::Ge, q(1));
        assert_eq!(lp.maximize(&[q(1)]), Outcome::Unbounded);
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = Lp::new(2);
        lp.add(vec![q(1), q(1)], Cmp::Eq, q(2));
        lp.add(vec![q(2), q(2)], Cmp::Eq, q(4));
        assert_eq!(lp.maximize(&[q(1), q(0)]).value(), Some(&q(2)));
    }
}
