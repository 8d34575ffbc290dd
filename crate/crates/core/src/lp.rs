//! Exact linear programming over the rationals.
//!
//! Two-phase tableau simplex with Bland's rule (no cycling). Problems here are
//! tiny: redundancy tests, feasibility, implicit-equality detection, and
//! boundedness checks for H-polytopes.

use crate::linalg::{Mat, RVec};
use crate::rat::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, point: RVec },
    Infeasible,
    Unbounded,
}

/// Maximize `c . x` subject to `a x <= b` with `x` free.
pub fn maximize(a: &Mat, b: &[Rat], c: &[Rat]) -> LpOutcome {
    assert_eq!(a.rows, b.len());
    assert_eq!(a.cols, c.len());
    let n = a.cols;
    let m = a.rows;
    // Standard form: y = [x+, x-, slack], M y = d, y >= 0.
    let cols = 2 * n + m;
    let mut mat = Mat::zero(m, cols);
    for i in 0..m {
        for j in 0..n {
            mat[(i, j)] = a[(i, j)].clone();
            mat[(i, n + j)] = -&a[(i, j)];
        }
        mat[(i, 2 * n + i)] = Rat::one();
    }
    let mut obj = vec![Rat::zero(); cols];
    for j in 0..n {
        obj[j] = c[j].clone();
        obj[n + j] = -&c[j];
    }
    match solve_standard(mat, b.to_vec(), obj) {
        StdOutcome::Infeasible => LpOutcome::Infeasible,
        StdOutcome::Unbounded => LpOutcome::Unbounded,
        StdOutcome::Optimal { value, point } => {
            let x: RVec = (0..n).map(|j| &point[j] - &point[n + j]).collect();
            LpOutcome::Optimal { value, point: x }
        }
    }
}

pub fn is_feasible(a: &Mat, b: &[Rat]) -> bool {
    !matches!(maximize(a, b, &vec![Rat::zero(); a.cols]), LpOutcome::Infeasible)
}

enum StdOutcome {
    Optimal { value: Rat, point: RVec },
    Infeasible,
    Unbounded,
}

/// Maximize `obj . y` subject to `mat y = rhs`, `y >= 0`.
fn solve_standard(mut mat: Mat, mut rhs: RVec, obj: RVec) -> StdOutcome {
    let m = mat.rows;
    let n = mat.cols;
    // Normalize rhs >= 0.
    for i in 0..m {
        if rhs[i].is_negative() {
            for j in 0..n {
                mat[(i, j)] = -&mat[(i, j)];
            }
            rhs[i] = -&rhs[i];
        }
    }
    // Phase 1: artificial basis.
    let mut tab = Tableau::with_artificials(mat, rhs);
    let phase1_obj: RVec = (0..n)
        .map(|_| Rat::zero())
        .chain((0..m).map(|_| -Rat::one()))
        .collect();
    tab.run(&phase1_obj);
    if !tab.objective_value(&phase1_obj).is_zero() {
        return StdOutcome::Infeasible;
    }
    tab.drop_artificials(n);
    // Phase 2.
    let mut obj2 = obj;
    obj2.resize(tab.cols(), Rat::zero());
    if !tab.run(&obj2) {
        return StdOutcome::Unbounded;
    }
    let mut point = vec![Rat::zero(); n];
    for (i, &bv) in tab.basis.iter().enumerate() {
        if bv < n {
            point[bv] = tab.rhs[i].clone();
        }
    }
    StdOutcome::Optimal { value: tab.objective_value(&obj2), point }
}

struct Tableau {
    mat: Mat,
    rhs: RVec,
    basis: Vec<usize>,
    live: Vec<bool>,
}

impl Tableau {
    fn with_artificials(mat: Mat, rhs: RVec) -> Tableau {
        let m = mat.rows;
        let full = mat.hstack(&Mat::identity(m));
        let basis = (mat.cols..mat.cols + m).collect();
        let live = vec![true; full.cols];
        Tableau { mat: full, rhs, basis, live }
    }

    fn cols(&self) -> usize {
        self.mat.cols
    }

    fn objective_value(&self, obj: &[Rat]) -> Rat {
        let mut v = Rat::zero();
        for (i, &bv) in self.basis.iter().enumerate() {
            v += &obj[bv] * &self.rhs[i];
        }
        v
    }

    fn reduced_cost(&self, obj: &[Rat], j: usize) -> Rat {
        let mut v = obj[j].clone();
        for (i, &bv) in self.basis.iter().enumerate() {
            v -= &obj[bv] * &self.mat[(i, j)];
        }
        v
    }

    /// Bland-rule simplex; returns false on unboundedness.
    fn run(&mut self, obj: &[Rat]) -> bool {
        loop {
            let entering = (0..self.cols())
                .find(|&j| self.live[j] && !self.basis.contains(&j) && self.reduced_cost(obj, j).is_positive());
            let Some(j) = entering else {
                return true;
            };
            let mut best: Option<(Rat, usize)> = None;
            for i in 0..self.mat.rows {
                if self.mat[(i, j)].is_positive() {
                    let ratio = &self.rhs[i] / &self.mat[(i, j)];
                    let better = match &best {
                        None => true,
                        Some((r, bi)) => {
                            ratio < *r || (ratio == *r && self.basis[i] < self.basis[*bi])
                        }
                    };
                    if better {
                        best = Some((ratio, i));
                    }
                }
            }
            let Some((_, leave_row)) = best else {
                return false;
            };
            self.pivot(leave_row, j);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.mat[(row, col)].recip();
        for j in 0..self.cols() {
            self.mat[(row, j)] = &self.mat[(row, j)] * &inv;
        }
        self.rhs[row] = &self.rhs[row] * &inv;
        for i in 0..self.mat.rows {
            if i == row || self.mat[(i, col)].is_zero() {
                continue;
            }
            let f = self.mat[(i, col)].clone();
            for j in 0..self.cols() {
                let v = &self.mat[(i, j)] - &(&f * &self.mat[(row, j)]);
                self.mat[(i, j)] = v;
            }
            let v = &self.rhs[i] - &(&f * &self.rhs[row]);
            self.rhs[i] = v;
        }
        self.basis[row] = col;
    }

    /// After phase 1, pivot zero-value artificials out of the basis and
    /// deactivate all artificial columns (`n` = count of real columns).
    fn drop_artificials(&mut self, n: usize) {
        for i in 0..self.mat.rows {
            if self.basis[i] >= n {
                if let Some(j) = (0..n).find(|&j| self.live[j] && !self.mat[(i, j)].is_zero()) {
                    self.pivot(i, j);
                }
                // A row that cannot be pivoted is identically zero on real
                // columns (redundant constraint); its artificial stays basic
                // at value zero and never re-enters because the column is
                // marked dead below.
            }
        }
        for j in n..self.cols() {
            self.live[j] = false;
        }
    }
}
