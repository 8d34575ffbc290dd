//! Orbifold-level verification: the five main identities for fractions
//! (2-morphism equalization, composition, the projection formula, base
//! change over weak fiber products, and the boundary integration identity),
//! plus presentation independence of integrals.

use crate::epg::averaging::invariant_family;
use crate::epg::boundary::vertical_boundary_groupoid;
use crate::epg::functor::{functor_pushforward, NaturalTransformation, RelOrientedFunctor};
use crate::epg::wfp::weak_fiber_product;
use crate::epg::Groupoid;
use crate::error::{Error, Result};
use crate::forms::PPForm;
use crate::mwc::parity_sign;
use crate::orb::OrbMorphism;
use crate::orient::{Orientation, RelOrientation};
use crate::rat::Rat;
use crate::report::{Check, SuiteOutcome};

/// Morphisms intertwined by a 2-morphism act equally on forms. The fractions
/// must share their inner presentation; the transformation relates the two
/// outer functors.
pub fn orb_two_morphism_suite(
    f: &OrbMorphism,
    g: &OrbMorphism,
    alpha: &NaturalTransformation,
    check_pushforward: bool,
    bound: u32,
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("orb_two_morphism");
    for c in alpha.validate(&f.inner, &f.target, &f.f, &g.f)?.checks {
        out.push(c);
    }
    for deg in 0..=f.target.x0.dim {
        for (i, a) in invariant_family(&f.target, deg, bound)?.iter().enumerate() {
            let fa = f.pullback(a)?;
            let ga = g.pullback(a)?;
            out.push(Check::of(
                format!("pull-backs agree: degree {deg} form {i}"),
                fa.equals(&f.source.x0, &ga)?,
                "pull-backs differ along a 2-morphism",
            ));
        }
    }
    if check_pushforward {
        let rf = f.oriented_functor()?;
        let rg = g.oriented_functor()?;
        for c in alpha.validate_oriented(&f.target, &rf, &rg)?.checks {
            out.push(c);
        }
        for deg in 0..=f.source.x0.dim {
            for (i, a) in invariant_family(&f.source, deg, bound)?.iter().enumerate() {
                let fa = f.pushforward(a)?;
                let ga = g.pushforward(a)?;
                out.push(Check::of(
                    format!("push-forwards agree: degree {deg} form {i}"),
                    fa.equals(&f.target.x0, &ga)?,
                    "push-forwards differ along an oriented 2-morphism",
                ));
            }
        }
    }
    Ok(out)
}

/// Composition compatibility: (f . g)^* = g^* . f^* and, with orientations,
/// (f . g)_* = f_* . g_*.
pub fn orb_composition_suite(
    f: &OrbMorphism,
    g: &OrbMorphism,
    bound: u32,
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("orb_composition");
    let composite = OrbMorphism::compose(f, g)?;
    for c in composite.validate()?.checks {
        out.push(Check { name: format!("composite: {}", c.name), ..c });
    }
    for deg in 0..=f.target.x0.dim {
        for (i, a) in invariant_family(&f.target, deg, bound)?.iter().enumerate() {
            let lhs = composite.pullback(a)?;
            let rhs = g.pullback(&f.pullback(a)?)?;
            out.push(Check::of(
                format!("pull-back: degree {deg} form {i}"),
                lhs.equals(&g.source.x0, &rhs)?,
                "composite pull-back differs",
            ));
        }
    }
    if composite.orientation.is_some() {
        for deg in 0..=g.source.x0.dim {
            for (i, a) in invariant_family(&g.source, deg, bound)?.iter().enumerate() {
                let lhs = composite.pushforward(a)?;
                let rhs = f.pushforward(&g.pushforward(a)?)?;
                out.push(Check::of(
                    format!("push-forward: degree {deg} form {i}"),
                    lhs.equals(&f.target.x0, &rhs)?,
                    "composite push-forward differs",
                ));
            }
        }
    }
    Ok(out)
}

/// Projection formula for a relatively oriented proper submersion fraction.
pub fn orb_projection_formula_suite(f: &OrbMorphism, bound: u32) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("orb_projection_formula");
    for adeg in 0..=f.target.x0.dim {
        for (ai, alpha) in invariant_family(&f.target, adeg, bound)?.iter().enumerate() {
            for bdeg in 0..=f.source.x0.dim {
                for (bi, beta) in invariant_family(&f.source, bdeg, 1)?.iter().enumerate() {
                    let lhs =
                        f.pushforward(&f.pullback(alpha)?.wedge(&f.source.x0, beta)?)?;
                    let rhs = alpha.wedge(&f.target.x0, &f.pushforward(beta)?)?;
                    out.push(Check::of(
                        format!("alpha {adeg}.{ai}, beta {bdeg}.{bi}"),
                        lhs.equals(&f.target.x0, &rhs)?,
                        "projection formula fails for the fraction",
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Base change over the weak fiber product of two fractions: with
/// `q = (R . A1)|Id` carrying the pull-back relative orientation,
/// `q_* p^* a = f^* g_* a`.
pub fn orb_base_change_suite(
    f: &OrbMorphism,
    g: &OrbMorphism,
    bound: u32,
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("orb_base_change");
    if f.target.x0.dim != g.target.x0.dim {
        return Err(Error::Validation("base change needs a common target".into()));
    }
    let z = &f.target;
    let wfp = weak_fiber_product(&f.inner, &g.inner, z, &f.f, &g.f)?;
    let p_groupoid = wfp.groupoid.clone();
    // q = (R . A1) | Id with the pull-back relative orientation
    // o^R_c . F^* o^G.
    let (og0, og1) = g
        .orientation
        .clone()
        .ok_or_else(|| Error::Validation("second leg needs orientation".into()))?;
    let (oa10, oa11) = wfp.pullback_orientation(z, &g.f, &og0, &og1)?;
    let q_functor = f.r.compose(&wfp.a1)?;
    let q_orientation = (
        RelOrientation::compose(&RelOrientation::canonical(&f.r.f0)?, &oa10, &wfp.a1.f0),
        RelOrientation::compose(&RelOrientation::canonical(&f.r.f1)?, &oa11, &wfp.a1.f1),
    );
    let q = OrbMorphism::from_functor(&p_groupoid, &f.source, q_functor, Some(q_orientation));
    let p = OrbMorphism::from_functor(
        &p_groupoid,
        &g.source,
        g.r.compose(&wfp.a2)?,
        None,
    );
    for deg in 0..=g.source.x0.dim {
        for (i, a) in invariant_family(&g.source, deg, bound)?.iter().enumerate() {
            let lhs = q.pushforward(&p.pullback(a)?)?;
            let rhs = f.pullback(&g.pushforward(a)?)?;
            out.push(Check::of(
                format!("degree {deg} form {i}"),
                lhs.equals(&f.source.x0, &rhs)?,
                "orbifold base change fails",
            ));
        }
    }
    Ok(out)
}

/// Boundary integration identity for a strongly smooth relatively oriented
/// proper submersion fraction: the boundary term lives on the fiberwise
/// boundary of the inner presentation with the induced orientation.
pub fn orb_stokes_suite(f: &OrbMorphism, xis: &[PPForm]) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("orb_stokes");
    let rf = f.oriented_functor()?;
    let inner = &f.inner;
    let target = &f.target;
    let vbg = vertical_boundary_groupoid(inner, target, &f.f)?;
    let vb0 = crate::mwc::vertical_boundary(&inner.x0, &target.x0, &f.f.f0)?;
    let vb1 = crate::mwc::vertical_boundary(&inner.x1, &target.x1, &f.f.f1)?;
    let mut vgroup = vbg.sub.groupoid.clone();
    let rho = crate::epg::averaging::find_partition(inner)?;
    vgroup.partition_hint = Some(rho.pullback(&vgroup.x0, &inner.x0, &vbg.incl.f0)?);
    let fv = crate::epg::functor::GroupoidFunctor {
        f0: vb0.composite.clone(),
        f1: vb1.composite.clone(),
        proper: true,
        submersion: true,
    };
    let o0 = RelOrientation(
        vbg.incl
            .f0
            .assignments
            .iter()
            .enumerate()
            .map(|(k, a)| vbg.rel_or0.0[k] * rf.o0.0[a.target_chart])
            .collect(),
    );
    let o1 = RelOrientation(
        vbg.incl
            .f1
            .assignments
            .iter()
            .enumerate()
            .map(|(k, a)| vbg.rel_or1.0[k] * rf.o1.0[a.target_chart])
            .collect(),
    );
    let fv_oriented = RelOrientedFunctor { functor: fv, o0, o1 };
    let s = f.source.x0.dim as i64;
    for (i, xi) in xis.iter().enumerate() {
        let t = xi.degree as i64;
        let lhs = f.pushforward(xi)?.d(&target.x0)?;
        let interior = f.pushforward(&xi.d(&f.source.x0)?)?;
        // Boundary term through the inner presentation: restrict the
        // refinement pull-back of xi to the fiberwise boundary.
        let pulled = crate::epg::functor::functor_pullback(inner, &f.source, &f.r, xi)?;
        let restricted = pulled.pullback(&vgroup.x0, &inner.x0, &vbg.incl.f0)?;
        let boundary = functor_pushforward(&vgroup, target, &fv_oriented, &restricted)?;
        let rhs = interior.add(&target.x0, &boundary.scale(&parity_sign(s + t).rat()))?;
        out.push(Check::of(
            format!("form {i} degree {t}"),
            lhs.equals(&target.x0, &rhs)?,
            "orbifold boundary integration identity fails",
        ));
    }
    Ok(out)
}

/// Equal integrals across equivalent presentations connected by refinements.
pub fn presentation_independence_suite(
    presentations: &[(String, Groupoid, Orientation, PPForm)],
    expected: Option<Rat>,
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("presentation_independence");
    let mut value: Option<Rat> = expected;
    for (name, g, o, xi) in presentations {
        let total = crate::orb::integrate(g, o, xi)?;
        match &value {
            None => value = Some(total),
            Some(v) => out.push(Check::of(
                format!("presentation {name}"),
                &total == v,
                format!("integral {total} differs from {v}"),
            )),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{ChartAssignment, ChartComplex, ChartMap, MapFlags, ProductData};
    use crate::epg::functor::GroupoidFunctor;
    use crate::epg::mirror_interval;
    use crate::poly::Poly;
    use crate::polytope::Polytope;

    fn r(v: i64) -> Rat {
        Rat::from_int(v)
    }

    fn square_to_interval_fraction() -> OrbMorphism {
        let sq = ChartComplex::single(Polytope::box_(&[r(0), r(0)], &[r(1), r(1)]).unwrap())
            .unwrap();
        let iv = ChartComplex::single(Polytope::interval(0, 1)).unwrap();
        let gx = Groupoid::trivial(sq.clone()).unwrap();
        let gy = Groupoid::trivial(iv.clone()).unwrap();
        let proj = |src: &ChartComplex, tgt: &ChartComplex| {
            ChartMap::new(
                src,
                tgt,
                vec![ChartAssignment {
                    target_chart: 0,
                    map: crate::affine::AffineMap::coordinate_projection(2, &[0]),
                }],
                MapFlags {
                    strongly_smooth: true,
                    submersion_standard_form: true,
                    proper: true,
                    local_diffeo: false,
                },
                vec![Some(ProductData {
                    split: crate::affine::AffineMap::identity(2),
                    base_dim: 1,
                    ident: crate::affine::AffineMap::identity(1),
                })],
            )
            .unwrap()
        };
        OrbMorphism::from_functor(
            &gx,
            &gy,
            GroupoidFunctor {
                f0: proj(&sq, &iv),
                f1: proj(&sq, &iv),
                proper: true,
                submersion: true,
            },
            Some((RelOrientation::plus(1), RelOrientation::plus(1))),
        )
    }

    #[test]
    fn projection_fraction_suites() {
        let f = square_to_interval_fraction();
        let pf = orb_projection_formula_suite(&f, 1).unwrap();
        assert!(pf.passed(), "{:?}", pf.first_failure());
        let xis: Vec<PPForm> = (0..=2)
            .flat_map(|d| invariant_family(&f.source, d, 1).unwrap())
            .collect();
        let st = orb_stokes_suite(&f, &xis).unwrap();
        assert!(st.passed(), "{:?}", st.first_failure());
    }

    #[test]
    fn composition_of_projection_with_identity() {
        let f = square_to_interval_fraction();
        let idx = OrbMorphism::identity(&f.source);
        let comp = orb_composition_suite(&f, &idx, 1).unwrap();
        assert!(comp.passed(), "{:?}", comp.first_failure());
        let idy = OrbMorphism::identity(&f.target);
        let comp2 = orb_composition_suite(&idy, &f, 1).unwrap();
        assert!(comp2.passed(), "{:?}", comp2.first_failure());
    }

    #[test]
    fn base_change_on_square_projections() {
        let f = square_to_interval_fraction();
        let g = square_to_interval_fraction();
        let bc = orb_base_change_suite(&f, &g, 1).unwrap();
        assert!(bc.passed(), "{:?}", bc.first_failure());
    }

    #[test]
    fn two_morphism_on_mirror_inner_symmetry() {
        // F = identity and G = conjugation by the reflection on the mirror
        // groupoid are related by the 2-morphism sending x to the reflection
        // arrow at x.
        let g = mirror_interval().unwrap();
        let refl_arrow = ChartMap::new(
            &g.x0,
            &g.x1,
            vec![ChartAssignment {
                target_chart: 1,
                map: crate::affine::AffineMap::identity(1),
            }],
            MapFlags { local_diffeo: true, proper: true, ..Default::default() },
            vec![None],
        )
        .unwrap();
        // G: objects x -> -x; arrows conjugated (the action commutes here).
        let neg = crate::affine::AffineMap::new(
            crate::linalg::Mat::from_rows(vec![vec![r(-1)]]),
            vec![r(0)],
        );
        let g0 = ChartMap::new(
            &g.x0,
            &g.x0,
            vec![ChartAssignment { target_chart: 0, map: neg.clone() }],
            MapFlags { local_diffeo: true, strongly_smooth: true, proper: true, ..Default::default() },
            vec![None],
        )
        .unwrap();
        let g1 = ChartMap::new(
            &g.x1,
            &g.x1,
            vec![
                ChartAssignment { target_chart: 0, map: neg.clone() },
                ChartAssignment { target_chart: 1, map: neg.clone() },
            ],
            MapFlags { local_diffeo: true, proper: true, ..Default::default() },
            vec![None, None],
        )
        .unwrap();
        let conj = GroupoidFunctor { f0: g0, f1: g1, proper: true, submersion: true };
        assert!(conj.validate(&g, &g).unwrap().passed());
        let f_m = OrbMorphism::identity(&g);
        let g_m = OrbMorphism::from_functor(
            &g,
            &g,
            conj,
            Some((RelOrientation(vec![crate::rat::Sign::Minus]),
                  RelOrientation(vec![crate::rat::Sign::Minus, crate::rat::Sign::Minus]))),
        );
        let alpha = NaturalTransformation { alpha: refl_arrow, o_alpha: None };
        let rep = orb_two_morphism_suite(&f_m, &g_m, &alpha, false, 2).unwrap();
        assert!(rep.passed(), "{:?}", rep.first_failure());
    }

    #[test]
    fn mirror_presentations_share_integrals() {
        let g = mirror_interval().unwrap();
        let patches = vec![vec![
            Polytope::box_(&[r(-1)], &[Rat::new(1, 4)]).unwrap(),
            Polytope::box_(&[-Rat::new(1, 4)], &[r(1)]).unwrap(),
        ]];
        let (refined, func) = Groupoid::refine_by_cover(&g, patches).unwrap();
        let xi = PPForm::monomial_form(&g.x0, &[0], Poly::monomial(vec![2], r(1))).unwrap();
        let xi_up = crate::epg::functor::functor_pullback(&refined, &g, &func, &xi).unwrap();
        let pres = vec![
            (
                "action".to_string(),
                g.clone(),
                Orientation::standard(&g.x0),
                xi,
            ),
            (
                "cover refinement".to_string(),
                refined.clone(),
                Orientation::standard(&refined.x0),
                xi_up,
            ),
        ];
        let rep = presentation_independence_suite(&pres, Some(Rat::new(1, 3))).unwrap();
        assert!(rep.passed(), "{:?}", rep.first_failure());
    }
}
