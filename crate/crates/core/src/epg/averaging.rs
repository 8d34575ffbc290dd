//! Invariant forms, coinvariants, the averaging isomorphisms, and partitions
//! of unity on étale proper groupoids.
//!
//! Structure-map push-forwards always carry the canonical relative
//! orientation of a chart-wise invertible map.

use std::collections::BTreeMap;

use super::Groupoid;
use crate::chart::ChartComplex;
use crate::error::{Error, Result};
use crate::forms::{Cell, PPForm};
use crate::orient::{Orientation, RelOrientation};
use crate::poly::Poly;
use crate::polytope::Polytope;
use crate::rat::Rat;
use crate::simplex::triangulate;

/// Exact invariance test: s^* a = t^* a.
pub fn is_invariant(g: &Groupoid, a: &PPForm) -> Result<bool> {
    let sa = a.pullback(&g.x1, &g.x0, &g.s)?;
    let ta = a.pullback(&g.x1, &g.x0, &g.t)?;
    sa.equals(&g.x1, &ta)
}

/// The averaging map t_* s^* with canonical orientations. Sends cleanly
/// supported forms to invariant forms and kills the coinvariant relations.
pub fn j_map(g: &Groupoid, a: &PPForm) -> Result<PPForm> {
    let sa = a.pullback(&g.x1, &g.x0, &g.s)?;
    let o = RelOrientation::canonical(&g.t)?;
    sa.pushforward_local_diffeo(&g.x1, &g.x0, &g.t, &o)
}

/// The opposite-route averaging s_* t^*; equal to `j_map` on all inputs.
pub fn j_map_transposed(g: &Groupoid, a: &PPForm) -> Result<PPForm> {
    let ta = a.pullback(&g.x1, &g.x0, &g.t)?;
    let o = RelOrientation::canonical(&g.s)?;
    ta.pushforward_local_diffeo(&g.x1, &g.x0, &g.s, &o)
}

/// Number of arrows into each object, as a piecewise-constant function.
pub fn arrow_count(g: &Groupoid) -> Result<PPForm> {
    j_map(g, &PPForm::constant(&g.x0, Rat::one()))
}

/// Multiplication by a partition of unity: K(a) = [rho a].
pub fn k_map(g: &Groupoid, rho: &PPForm, a: &PPForm) -> Result<PPForm> {
    rho.wedge(&g.x0, a)
}

/// Coinvariant representatives are equal iff averaging kills the difference.
pub fn coinvariant_eq(g: &Groupoid, a: &PPForm, b: &PPForm) -> Result<bool> {
    Ok(j_map(g, &a.sub(&g.x0, b)?)?.is_zero())
}

/// Integration over the groupoid: the push-forward to the point, computed as
/// the weighted integral of `rho * xi` over the object space.
pub fn integrate(g: &Groupoid, rho: &PPForm, o0: &Orientation, xi: &PPForm) -> Result<Rat> {
    rho.wedge(&g.x0, xi)?.integrate(&g.x0, o0)
}

/// Exact validation that `rho` is a partition of unity: degree zero, at
/// least C^1, values in [0,1] (certified by Bernstein coefficients), and
/// t_* s^* rho = 1.
pub fn is_partition(g: &Groupoid, rho: &PPForm) -> Result<bool> {
    if rho.degree != 0 || !rho.smoothness.at_least(1) {
        return Ok(false);
    }
    if !range_within_unit_interval(&g.x0, rho)? {
        return Ok(false);
    }
    let avg = j_map(g, rho)?;
    avg.equals(&g.x0, &PPForm::constant(&g.x0, Rat::one()))
}

/// Partition-of-unity search: recorded hint first, then the constant
/// candidate from the arrow count; otherwise a loud failure (the example
/// needs a finer presentation).
pub fn find_partition(g: &Groupoid) -> Result<PPForm> {
    if let Some(hint) = &g.partition_hint {
        if is_partition(g, hint)? {
            return Ok(hint.clone());
        }
        return Err(Error::Partition("recorded partition hint fails validation".into()));
    }
    let count = arrow_count(g)?;
    if let Some(n) = constant_value(&count) {
        if n.is_positive() {
            let rho = PPForm::constant(&g.x0, Rat::one() / n);
            if is_partition(g, &rho)? {
                return Ok(rho);
            }
        }
    }
    Err(Error::Partition(
        "no constant partition and no recorded construction; refine the presentation".into(),
    ))
}

/// The constant value of a degree-0 form, when it is a single constant
/// across all charts and cells.
fn constant_value(a: &PPForm) -> Option<Rat> {
    let mut value: Option<Rat> = None;
    for cells in &a.charts {
        for cell in cells {
            let c = cell.coeffs.get(&vec![]).cloned().unwrap_or(Poly::zero(0));
            let v = c.constant_value()?;
            match &value {
                None => value = Some(v),
                Some(u) if *u == v => {}
                _ => return None,
            }
        }
    }
    value
}

/// Certified range check 0 <= f <= 1 via Bernstein coefficients over a
/// triangulation, with degree elevation retries.
pub fn range_within_unit_interval(base: &ChartComplex, f: &PPForm) -> Result<bool> {
    if f.degree != 0 {
        return Ok(false);
    }
    for cells in &f.charts {
        for cell in cells {
            let p = cell.coeffs.get(&vec![]).cloned().unwrap_or(Poly::zero(base.dim));
            for s in triangulate(&cell.polytope)? {
                if base.dim == 0 {
                    let v = p.eval(&[]);
                    if v.is_negative() || (Rat::one() - v.clone()).is_negative() {
                        return Ok(false);
                    }
                    continue;
                }
                let q = p.compose_affine(&s.chart())?;
                if !bernstein_in_unit_interval(&q)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Are all values of `q` on the standard simplex within [0,1]? Sufficient
/// certificate via barycentric Bernstein coefficients with degree elevation.
fn bernstein_in_unit_interval(q: &Poly) -> Result<bool> {
    if q.is_zero() {
        return Ok(true);
    }
    let d = q.ambient_dim;
    let deg = q.total_degree();
    let all_lambda = {
        let mut p = Poly::zero(d + 1);
        for i in 0..=d {
            p = p.add(&Poly::var(d + 1, i));
        }
        p
    };
    // Homogenize into d+1 variables (lambda_1..lambda_d, lambda_0): each
    // term picks up the missing degree as a power of the full sum.
    let mut homog = Poly::zero(d + 1);
    for (e, c) in q.terms() {
        let total: u32 = e.iter().sum();
        let mut exps = e.clone();
        exps.push(0);
        let mono = Poly::monomial(exps, c.clone());
        homog = homog.add(&mono.mul(&all_lambda.pow(deg - total)));
    }
    let mut current = homog;
    let mut degree = deg;
    for _ in 0..=8 {
        if bernstein_coeffs_in_unit(&current, degree) {
            return Ok(true);
        }
        current = current.mul(&all_lambda);
        degree += 1;
    }
    Ok(false)
}

fn bernstein_coeffs_in_unit(homog: &Poly, degree: u32) -> bool {
    let dfac = Rat::factorial(degree as u64);
    for (e, c) in homog.terms() {
        let mut beta_fac = Rat::one();
        for &k in e {
            beta_fac *= Rat::factorial(k as u64);
        }
        let b = &(c * &beta_fac) / &dfac;
        if b.is_negative() || (Rat::one() - b.clone()).is_negative() {
            return false;
        }
    }
    true
}

/// C^1 partition of unity subordinate to a chain of overlapping intervals:
/// cubic blends on consecutive overlaps, constant elsewhere. Returns the
/// mesh cells (with polynomial values) per patch.
pub fn interval_chain_partition(patches: &[Polytope]) -> Result<Vec<Vec<Cell>>> {
    let mut info: Vec<(usize, Rat, Rat)> = Vec::new();
    for (i, p) in patches.iter().enumerate() {
        if p.ambient_dim != 1 || !p.is_full_dim() {
            return Err(Error::Partition("chain solver needs 1-dimensional patches".into()));
        }
        let vs = p.vertices();
        info.push((i, vs[0][0].clone(), vs[vs.len() - 1][0].clone()));
    }
    info.sort_by(|a, b| a.1.cmp(&b.1).then(a.2.cmp(&b.2)));
    let k = info.len();
    for w in info.windows(2) {
        let (_, ref lo1, ref hi1) = w[0];
        let (_, ref lo2, ref hi2) = w[1];
        if !(lo1 < lo2 && hi1 < hi2 && lo2 < hi1) {
            return Err(Error::Partition(
                "patches do not form a strictly increasing overlapping chain".into(),
            ));
        }
    }
    for i in 0..k.saturating_sub(2) {
        if info[i + 2].1 < info[i].2 {
            return Err(Error::Partition("triple overlap; chain solver does not apply".into()));
        }
    }
    let mut out: Vec<Vec<Cell>> = vec![vec![]; k];
    for pos in 0..k {
        let (orig, lo, hi) = info[pos].clone();
        let mut cells = Vec::new();
        // Rising blend on the previous overlap.
        let left_plateau_start = if pos == 0 {
            lo.clone()
        } else {
            let prev_hi = info[pos - 1].2.clone();
            let up = one_minus(&hermite_down(&lo, &prev_hi));
            cells.push(value_cell(&lo, &prev_hi, up)?);
            prev_hi
        };
        let right_plateau_end = if pos + 1 == k { hi.clone() } else { info[pos + 1].1.clone() };
        if left_plateau_start < right_plateau_end {
            cells.push(value_cell(&left_plateau_start, &right_plateau_end, Poly::one(1))?);
        }
        if pos + 1 < k {
            let next_lo = info[pos + 1].1.clone();
            let down = hermite_down(&next_lo, &hi);
            cells.push(value_cell(&next_lo, &hi, down)?);
        }
        out[orig] = cells;
    }
    Ok(out)
}

fn value_cell(lo: &Rat, hi: &Rat, p: Poly) -> Result<Cell> {
    let polytope = Polytope::box_(&[lo.clone()], &[hi.clone()])?;
    let mut coeffs = BTreeMap::new();
    if !p.is_zero() {
        coeffs.insert(vec![], p);
    }
    Ok(Cell { polytope, coeffs })
}

/// Cubic decreasing from 1 at `p` to 0 at `q` with vanishing derivative at
/// both ends.
fn hermite_down(p: &Rat, q: &Rat) -> Poly {
    // h(x) = 1 - 3 tau^2 + 2 tau^3 with tau = (x - p) / (q - p).
    let width = q - p;
    let tau = Poly::affine(&[width.recip()], &(-(p / &width)));
    let tau2 = tau.mul(&tau);
    let tau3 = tau2.mul(&tau);
    Poly::one(1)
        .add(&tau2.scale(&Rat::from_int(-3)))
        .add(&tau3.scale(&Rat::from_int(2)))
}

fn one_minus(p: &Poly) -> Poly {
    Poly::one(1).sub(p)
}

/// Invariant test forms: averaging applied to monomial forms, up to a
/// coefficient degree bound. Zero results are dropped.
pub fn invariant_family(g: &Groupoid, degree: usize, bound: u32) -> Result<Vec<PPForm>> {
    let mut out = Vec::new();
    for raw in crate::suites::monomial_test_forms(&g.x0, degree, bound) {
        let averaged = j_map(g, &raw)?;
        if !averaged.is_zero() {
            out.push(averaged);
        }
    }
    Ok(out)
}
