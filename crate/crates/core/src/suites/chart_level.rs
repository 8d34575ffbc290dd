//! Chart-level integration and orientation identities: normalization,
//! push-forward composition, the projection formula, base change, the
//! boundary integration identity with its sign, and the four orientation
//! lemmas for pull-back diagrams.

use crate::chart::{ChartComplex, ChartMap};
use crate::error::Result;
use crate::fiberprod::{fiber_product, FiberProduct};
use crate::forms::PPForm;
use crate::mwc::{parity_sign, pushforward, vertical_boundary};
use crate::orient::{Orientation, RelOrientation};
use crate::report::{Check, SuiteOutcome};

/// Push-forward to a point equals integration in top degree and vanishes
/// otherwise.
pub fn normalization_suite(
    m: &ChartComplex,
    o: &Orientation,
    forms: &[PPForm],
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("pushforward_to_point_normalization");
    let pt = ChartComplex::point();
    let f = ChartMap::to_point(m);
    // Relative orientation of the map to the point induced by o.
    let o_rel = RelOrientation(o.0.clone());
    for (i, a) in forms.iter().enumerate() {
        let pushed = pushforward(m, &pt, &f, &o_rel, a)?;
        let integral = a.integrate(m, o)?;
        let expected = PPForm::constant(&pt, integral);
        let ok = pushed.equals(&pt, &expected)?;
        out.push(Check::of(
            format!("form {i} degree {}", a.degree),
            ok,
            "push-forward to point does not match integration",
        ));
    }
    Ok(out)
}

/// `(g . f)_* = g_* . f_*` for stacked standard-form submersions with the
/// composite relative orientation.
#[allow(clippy::too_many_arguments)]
pub fn pushforward_composition_suite(
    m: &ChartComplex,
    n: &ChartComplex,
    q: &ChartComplex,
    f: &ChartMap,
    g: &ChartMap,
    o_f: &RelOrientation,
    o_g: &RelOrientation,
    gf: &ChartMap,
    forms: &[PPForm],
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("pushforward_composition");
    let o_gf = RelOrientation::compose(o_g, o_f, f);
    for (i, a) in forms.iter().enumerate() {
        let two = pushforward(n, q, g, o_g, &pushforward(m, n, f, o_f, a)?)?;
        let one = pushforward(m, q, gf, &o_gf, a)?;
        out.push(Check::of(
            format!("form {i} degree {}", a.degree),
            one.equals(q, &two)?,
            "composite push-forward differs from iterated push-forward",
        ));
    }
    Ok(out)
}

/// Projection formula `f_*(f^* a ^ b) = a ^ f_* b`.
pub fn projection_formula_suite(
    m: &ChartComplex,
    n: &ChartComplex,
    f: &ChartMap,
    o_f: &RelOrientation,
    alphas: &[PPForm],
    betas: &[PPForm],
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("projection_formula");
    for (i, alpha) in alphas.iter().enumerate() {
        for (j, beta) in betas.iter().enumerate() {
            let lhs = pushforward(
                m,
                n,
                f,
                o_f,
                &alpha.pullback(m, n, f)?.wedge(m, beta)?,
            )?;
            let rhs = alpha.wedge(n, &pushforward(m, n, f, o_f, beta)?)?;
            out.push(Check::of(
                format!("alpha {i} (deg {}), beta {j} (deg {})", alpha.degree, beta.degree),
                lhs.equals(n, &rhs)?,
                "projection formula fails",
            ));
        }
    }
    Ok(out)
}

/// Base change `q_* p^* a = f^* g_* a` over the fiber product of
/// `f : M -> N` (strongly smooth) and `g : P -> N` (standard-form
/// submersion), with `q` carrying the pull-back relative orientation.
#[allow(clippy::too_many_arguments)]
pub fn base_change_suite(
    m: &ChartComplex,
    n: &ChartComplex,
    p: &ChartComplex,
    f: &ChartMap,
    g: &ChartMap,
    o_g: &RelOrientation,
    alphas: &[PPForm],
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("base_change");
    let fp = fiber_product(m, f, p, g, n)?;
    let o_q = fp.pullback_rel_orientation(f, g, o_g)?;
    for (i, alpha) in alphas.iter().enumerate() {
        let lhs = pushforward(
            &fp.complex,
            m,
            &fp.proj_m,
            &o_q,
            &alpha.pullback(&fp.complex, p, &fp.proj_p)?,
        )?;
        let rhs = pushforward(p, n, g, o_g, alpha)?.pullback(m, n, f)?;
        out.push(Check::of(
            format!("alpha {i} degree {}", alpha.degree),
            lhs.equals(m, &rhs)?,
            "base change fails",
        ));
    }
    Ok(out)
}

/// Boundary integration identity for a strongly smooth standard-form proper
/// submersion: `d(f_* xi) = f_*(d xi) + (-1)^(s+t) (f . i_vertical)_* xi`.
pub fn stokes_suite(
    m: &ChartComplex,
    n: &ChartComplex,
    f: &ChartMap,
    o_f: &RelOrientation,
    xis: &[PPForm],
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("fiber_stokes");
    let vb = vertical_boundary(m, n, f)?;
    let s = m.dim as i64;
    for (i, xi) in xis.iter().enumerate() {
        let t = xi.degree as i64;
        let lhs = pushforward(m, n, f, o_f, xi)?.d(n)?;
        let interior = pushforward(m, n, f, o_f, &xi.d(m)?)?;
        let restricted = xi.pullback(&vb.complex, m, &vb.inclusion)?;
        // Induced relative orientation: boundary inclusion then f.
        let o_comp = RelOrientation(
            vb.inclusion
                .assignments
                .iter()
                .enumerate()
                .map(|(bi, a)| vb.rel_or.0[bi] * o_f.0[a.target_chart])
                .collect(),
        );
        let boundary_term =
            pushforward(&vb.complex, n, &vb.composite, &o_comp, &restricted)?;
        let rhs = interior.add(n, &boundary_term.scale(&parity_sign(s + t).rat()))?;
        let ok = lhs.equals(n, &rhs)?;
        out.push(Check::of(
            format!("xi {i} degree {t}"),
            ok,
            "boundary integration identity fails",
        ));
    }
    Ok(out)
}

/// When the second leg is a local diffeomorphism, the pull-back of its
/// canonical relative orientation is the canonical relative orientation of
/// the first projection.
pub fn pullback_canonical_orientation_suite(
    m: &ChartComplex,
    n: &ChartComplex,
    p: &ChartComplex,
    f: &ChartMap,
    g: &ChartMap,
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("pullback_canonical_orientation");
    let fp = fiber_product(m, f, p, g, n)?;
    let pulled = fp.pullback_rel_orientation(f, g, &RelOrientation::canonical(g)?)?;
    let canonical = RelOrientation::canonical(&fp.proj_m)?;
    for (c, (a, b)) in pulled.0.iter().zip(&canonical.0).enumerate() {
        out.push(Check::of(
            format!("fiber chart {c}"),
            a == b,
            format!("pulled-back canonical orientation {a} vs canonical {b}"),
        ));
    }
    Ok(out)
}

/// Swap comparison: `g^* o^f . o^theta_c = (-1)^(rdim f * rdim g) tg^* o^f`
/// where theta is the factor swap.
pub fn orientation_swap_suite(
    m: &ChartComplex,
    n: &ChartComplex,
    p: &ChartComplex,
    f: &ChartMap,
    g: &ChartMap,
    o_f: &RelOrientation,
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("orientation_swap_sign");
    let fp = fiber_product(m, f, p, g, n)?;
    let pf = fiber_product(p, g, m, f, n)?;
    let theta = fp.swap_map(&pf)?;
    let o_theta = RelOrientation::canonical(&theta)?;
    // Pull-back orientation of the first projection of P x_N M along g.
    let g_pull = pf.pullback_rel_orientation(g, f, o_f)?;
    let transpose = fp.transpose_pullback_rel_orientation(f, g, o_f)?;
    let rdim_f = m.dim as i64 - n.dim as i64;
    let rdim_g = p.dim as i64 - n.dim as i64;
    let parity = parity_sign(rdim_f * rdim_g);
    for (c, th) in theta.assignments.iter().enumerate() {
        let lhs = o_theta.0[c] * g_pull.0[th.target_chart];
        let rhs = parity * transpose.0[c];
        out.push(Check::of(
            format!("fiber chart {c}"),
            lhs == rhs,
            format!("swap sign {lhs} vs {rhs}"),
        ));
    }
    Ok(out)
}

/// For a chart-wise affine diffeomorphism with the canonical relative
/// orientation, pull-back equals push-forward along the inverse.
pub fn inverse_diffeo_suite(
    m: &ChartComplex,
    n: &ChartComplex,
    f: &ChartMap,
    alphas: &[PPForm],
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("pushforward_inverse_diffeo");
    let finv = f.inverse(m, n)?;
    let o_inv = RelOrientation::canonical(&finv)?;
    for (i, alpha) in alphas.iter().enumerate() {
        let lhs = alpha.pullback(m, n, f)?;
        let rhs = pushforward(n, m, &finv, &o_inv, alpha)?;
        out.push(Check::of(
            format!("alpha {i} degree {}", alpha.degree),
            lhs.equals(m, &rhs)?,
            "pull-back differs from inverse push-forward",
        ));
    }
    Ok(out)
}

/// Transposed base change with its sign: for `f : M -> N` a standard-form
/// submersion with relative orientation and `g : P -> N` strongly smooth,
/// equipping `p : M x_N P -> P` with the transpose pull-back orientation,
/// `p_* q^* a = (-1)^(rdim f * rdim g) g^* f_* a`.
#[allow(clippy::too_many_arguments)]
pub fn transpose_base_change_suite(
    m: &ChartComplex,
    n: &ChartComplex,
    p: &ChartComplex,
    f: &ChartMap,
    g: &ChartMap,
    o_f: &RelOrientation,
    alphas: &[PPForm],
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("transpose_base_change_sign");
    let fp = fiber_product(m, f, p, g, n)?;
    let o_p = fp.transpose_pullback_rel_orientation(f, g, o_f)?;
    let rdim_f = m.dim as i64 - n.dim as i64;
    let rdim_g = p.dim as i64 - n.dim as i64;
    let sign = parity_sign(rdim_f * rdim_g).rat();
    for (i, alpha) in alphas.iter().enumerate() {
        let lhs = pushforward(
            &fp.complex,
            p,
            &fp.proj_p,
            &o_p,
            &alpha.pullback(&fp.complex, m, &fp.proj_m)?,
        )?;
        let rhs = pushforward(m, n, f, o_f, alpha)?.pullback(p, n, g)?.scale(&sign);
        out.push(Check::of(
            format!("alpha {i} degree {}", alpha.degree),
            lhs.equals(p, &rhs)?,
            "transposed base change sign fails",
        ));
    }
    Ok(out)
}

/// Convenience wrapper exposing the fiber product for scenario plumbing.
pub fn build_fiber_product(
    m: &ChartComplex,
    f: &ChartMap,
    p: &ChartComplex,
    g: &ChartMap,
    n: &ChartComplex,
) -> Result<FiberProduct> {
    fiber_product(m, f, p, g, n)
}
