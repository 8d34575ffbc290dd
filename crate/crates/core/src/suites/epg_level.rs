//! Groupoid-level identity suites: averaging symmetry and inverses, the
//! module structure of coinvariants, refinement inverses, partition
//! transport, functor push-forward identities, base change over weak fiber
//! products, and the boundary integration identity.

use crate::epg::averaging::{
    self, arrow_count, coinvariant_eq, find_partition, invariant_family, is_invariant,
    is_partition, j_map, j_map_transposed, k_map,
};
use crate::epg::boundary::{boundary_groupoid, vertical_boundary_groupoid};
use crate::epg::functor::{
    functor_pullback, functor_pushforward, pushforward_partition, refinement_pushforward,
    validate_refinement, GroupoidFunctor, RelOrientedFunctor,
};
use crate::epg::wfp::{weak_fiber_product, WeakFiberProduct};
use crate::epg::Groupoid;
use crate::error::Result;
use crate::forms::PPForm;
use crate::mwc::parity_sign;
use crate::orient::RelOrientation;
use crate::rat::Rat;
use crate::report::{Check, SuiteOutcome};
use crate::suites::monomial_test_forms;

/// Both averaging routes agree on cleanly supported forms.
pub fn averaging_symmetry_suite(g: &Groupoid, bound: u32) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("averaging_symmetry");
    for deg in 0..=g.x0.dim {
        for (i, a) in monomial_test_forms(&g.x0, deg, bound).iter().enumerate() {
            let lhs = j_map(g, a)?;
            let rhs = j_map_transposed(g, a)?;
            out.push(Check::of(
                format!("degree {deg} form {i}"),
                lhs.equals(&g.x0, &rhs)?,
                "t_* s^* differs from s_* t^*",
            ));
        }
    }
    Ok(out)
}

/// Averaging kills the coinvariant relations and lands in invariant forms.
pub fn averaging_range_suite(g: &Groupoid, bound: u32) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("averaging_range");
    let os = RelOrientation::canonical(&g.s)?;
    let ot = RelOrientation::canonical(&g.t)?;
    for deg in 0..=g.x1.dim {
        for (i, eta) in monomial_test_forms(&g.x1, deg, bound).iter().enumerate() {
            let rel = eta
                .pushforward_local_diffeo(&g.x1, &g.x0, &g.s, &os)?
                .sub(&g.x0, &eta.pushforward_local_diffeo(&g.x1, &g.x0, &g.t, &ot)?)?;
            out.push(Check::of(
                format!("relation killed: degree {deg} form {i}"),
                j_map(g, &rel)?.is_zero(),
                "averaging does not kill a coinvariant relation",
            ));
        }
    }
    for deg in 0..=g.x0.dim {
        for (i, a) in monomial_test_forms(&g.x0, deg, bound).iter().enumerate() {
            out.push(Check::of(
                format!("invariance of output: degree {deg} form {i}"),
                is_invariant(g, &j_map(g, a)?)?,
                "averaged form is not invariant",
            ));
        }
    }
    Ok(out)
}

/// The averaging maps are mutually inverse between invariant forms and
/// coinvariants.
pub fn averaging_inverse_suite(g: &Groupoid, bound: u32) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("averaging_inverse");
    let rho = find_partition(g)?;
    for deg in 0..=g.x0.dim {
        for (i, a) in invariant_family(g, deg, bound)?.iter().enumerate() {
            let jk = j_map(g, &k_map(g, &rho, a)?)?;
            out.push(Check::of(
                format!("JK = id: degree {deg} form {i}"),
                jk.equals(&g.x0, a)?,
                "J(K(a)) differs from a",
            ));
        }
        for (i, c) in monomial_test_forms(&g.x0, deg, bound).iter().enumerate() {
            let kj = k_map(g, &rho, &j_map(g, c)?)?;
            out.push(Check::of(
                format!("KJ = id: degree {deg} representative {i}"),
                coinvariant_eq(g, &kj, c)?,
                "K(J(c)) differs from c as a coinvariant",
            ));
        }
    }
    Ok(out)
}

/// K does not depend on the choice of partition.
pub fn partition_independence_suite(
    g: &Groupoid,
    rho1: &PPForm,
    rho2: &PPForm,
    bound: u32,
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("partition_independence");
    out.push(Check::of("first candidate is a partition", is_partition(g, rho1)?, "invalid"));
    out.push(Check::of("second candidate is a partition", is_partition(g, rho2)?, "invalid"));
    for deg in 0..=g.x0.dim {
        for (i, a) in invariant_family(g, deg, bound)?.iter().enumerate() {
            let k1 = k_map(g, rho1, a)?;
            let k2 = k_map(g, rho2, a)?;
            out.push(Check::of(
                format!("degree {deg} form {i}"),
                coinvariant_eq(g, &k1, &k2)?,
                "K outputs of the two partitions differ as coinvariants",
            ));
        }
    }
    Ok(out)
}

/// Pull-back and push-forward along a refinement are mutually inverse.
pub fn refinement_inverse_suite(
    fine: &Groupoid,
    coarse: &Groupoid,
    r: &GroupoidFunctor,
    bound: u32,
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("refinement_inverse");
    for c in validate_refinement(fine, coarse, r)?.checks {
        out.push(c);
    }
    for deg in 0..=coarse.x0.dim {
        for (i, a) in invariant_family(coarse, deg, bound)?.iter().enumerate() {
            let back = refinement_pushforward(fine, coarse, r, &functor_pullback(fine, coarse, r, a)?)?;
            out.push(Check::of(
                format!("push after pull: degree {deg} form {i}"),
                back.equals(&coarse.x0, a)?,
                "push-forward does not invert pull-back",
            ));
        }
        for (i, b) in invariant_family(fine, deg, bound.min(1))?.iter().enumerate() {
            let up = functor_pullback(fine, coarse, r, &refinement_pushforward(fine, coarse, r, b)?)?;
            out.push(Check::of(
                format!("pull after push: degree {deg} form {i}"),
                up.equals(&fine.x0, b)?,
                "pull-back does not invert push-forward",
            ));
        }
    }
    Ok(out)
}

/// The exterior derivative commutes with both averaging maps.
pub fn d_commutes_averaging_suite(g: &Groupoid, bound: u32) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("d_commutes_averaging");
    let rho = find_partition(g)?;
    for deg in 0..g.x0.dim {
        for (i, a) in monomial_test_forms(&g.x0, deg, bound).iter().enumerate() {
            let lhs = j_map(g, a)?.d(&g.x0)?;
            let rhs = j_map(g, &a.d(&g.x0)?)?;
            out.push(Check::of(
                format!("dJ = Jd: degree {deg} form {i}"),
                lhs.equals(&g.x0, &rhs)?,
                "d does not commute with averaging",
            ));
        }
        for (i, a) in invariant_family(g, deg, bound)?.iter().enumerate() {
            if !a.smoothness.at_least(1) || !rho.smoothness.at_least(1) {
                continue;
            }
            let lhs = k_map(g, &rho, a)?.d(&g.x0)?;
            let rhs = k_map(g, &rho, &a.d(&g.x0)?)?;
            out.push(Check::of(
                format!("dK = Kd coinvariantly: degree {deg} form {i}"),
                coinvariant_eq(g, &lhs, &rhs)?,
                "d does not commute with the partition map",
            ));
        }
    }
    Ok(out)
}

/// Coinvariants form a module over invariant forms and averaging is linear
/// over them.
pub fn module_structure_suite(g: &Groupoid, bound: u32) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("coinvariant_module");
    let os = RelOrientation::canonical(&g.s)?;
    let ot = RelOrientation::canonical(&g.t)?;
    for zdeg in 0..=g.x0.dim {
        for (zi, zeta) in invariant_family(g, zdeg, 1)?.iter().enumerate() {
            for edeg in 0..=g.x0.dim {
                for (ei, eta) in monomial_test_forms(&g.x0, edeg, bound).iter().enumerate() {
                    let lhs = j_map(g, &zeta.wedge(&g.x0, eta)?)?;
                    let rhs = zeta.wedge(&g.x0, &j_map(g, eta)?)?;
                    out.push(Check::of(
                        format!("J linear over invariants: {zdeg}.{zi} x {edeg}.{ei}"),
                        lhs.equals(&g.x0, &rhs)?,
                        "averaging is not linear over invariant forms",
                    ));
                }
            }
            // The module action preserves the relations.
            for (ei, eta) in monomial_test_forms(&g.x1, 0, 1).iter().enumerate() {
                let rel = eta
                    .pushforward_local_diffeo(&g.x1, &g.x0, &g.s, &os)?
                    .sub(&g.x0, &eta.pushforward_local_diffeo(&g.x1, &g.x0, &g.t, &ot)?)?;
                let wedged = zeta.wedge(&g.x0, &rel)?;
                out.push(Check::of(
                    format!("module action preserves relations: {zdeg}.{zi} x {ei}"),
                    j_map(g, &wedged)?.is_zero(),
                    "invariant wedge leaves the relation subspace",
                ));
            }
        }
    }
    Ok(out)
}

/// Push-forward along composable relatively oriented proper submersions is
/// functorial.
pub fn epg_pushforward_composition_suite(
    x: &Groupoid,
    y: &Groupoid,
    z: &Groupoid,
    g_xy: &RelOrientedFunctor,
    f_yz: &RelOrientedFunctor,
    composite: &RelOrientedFunctor,
    bound: u32,
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("epg_pushforward_composition");
    for deg in 0..=x.x0.dim {
        for (i, a) in invariant_family(x, deg, bound)?.iter().enumerate() {
            let two = functor_pushforward(y, z, f_yz, &functor_pushforward(x, y, g_xy, a)?)?;
            let one = functor_pushforward(x, z, composite, a)?;
            out.push(Check::of(
                format!("degree {deg} form {i}"),
                one.equals(&z.x0, &two)?,
                "composite push-forward differs from iterated",
            ));
        }
    }
    Ok(out)
}

/// Projection formula at the groupoid level.
pub fn epg_projection_formula_suite(
    x: &Groupoid,
    y: &Groupoid,
    f: &RelOrientedFunctor,
    bound: u32,
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("epg_projection_formula");
    for adeg in 0..=y.x0.dim {
        for (ai, alpha) in invariant_family(y, adeg, bound)?.iter().enumerate() {
            for bdeg in 0..=x.x0.dim {
                for (bi, beta) in invariant_family(x, bdeg, 1)?.iter().enumerate() {
                    let pulled = functor_pullback(x, y, &f.functor, alpha)?;
                    let lhs = functor_pushforward(x, y, f, &pulled.wedge(&x.x0, beta)?)?;
                    let rhs = alpha.wedge(&y.x0, &functor_pushforward(x, y, f, beta)?)?;
                    out.push(Check::of(
                        format!("alpha {adeg}.{ai}, beta {bdeg}.{bi}"),
                        lhs.equals(&y.x0, &rhs)?,
                        "projection formula fails",
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Weak fiber product validation: the groupoid, both projections, and the
/// comparison transformation.
pub fn wfp_valid_suite(
    x: &Groupoid,
    y: &Groupoid,
    z: &Groupoid,
    f: &GroupoidFunctor,
    g: &GroupoidFunctor,
) -> Result<(SuiteOutcome, WeakFiberProduct)> {
    let mut out = SuiteOutcome::new("weak_fiber_product_valid");
    let wfp = weak_fiber_product(x, y, z, f, g)?;
    for c in wfp.groupoid.validate().checks {
        out.push(c);
    }
    for c in wfp.a1.validate(&wfp.groupoid, x)?.checks {
        out.push(Check {
            name: format!("first projection: {}", c.name),
            ..c
        });
    }
    for c in wfp.a2.validate(&wfp.groupoid, y)?.checks {
        out.push(Check {
            name: format!("second projection: {}", c.name),
            ..c
        });
    }
    let fa1 = f.compose(&wfp.a1)?;
    let ga2 = g.compose(&wfp.a2)?;
    for c in wfp.alpha.validate(&wfp.groupoid, z, &ga2, &fa1)?.checks {
        out.push(Check {
            name: format!("comparison transformation: {}", c.name),
            ..c
        });
    }
    Ok((out, wfp))
}

/// Partition of unity on a weak fiber product as the product of pulled-back
/// partitions.
pub fn partition_fiber_product_suite(
    x: &Groupoid,
    y: &Groupoid,
    z: &Groupoid,
    f: &GroupoidFunctor,
    g: &GroupoidFunctor,
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("partition_fiber_product");
    let wfp = weak_fiber_product(x, y, z, f, g)?;
    let rho_x = find_partition(x)?;
    let rho_y = find_partition(y)?;
    let pulled_x = functor_pullback(&wfp.groupoid, x, &wfp.a1, &rho_x)?;
    let pulled_y = functor_pullback(&wfp.groupoid, y, &wfp.a2, &rho_y)?;
    let rho = pulled_x.wedge(&wfp.groupoid.x0, &pulled_y)?;
    out.push(Check::of(
        "product of pulled-back partitions is a partition",
        is_partition(&wfp.groupoid, &rho)?,
        "product partition fails validation",
    ));
    Ok(out)
}

/// Partition restriction to the boundary groupoid.
pub fn partition_boundary_suite(g: &Groupoid) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("partition_boundary");
    let rho = find_partition(g)?;
    let bg = boundary_groupoid(g)?;
    if bg.groupoid.x0.is_empty() {
        out.push(Check::pass("empty boundary"));
        return Ok(out);
    }
    let restricted = rho.pullback(&bg.groupoid.x0, &g.x0, &bg.incl0)?;
    out.push(Check::of(
        "restricted partition is a partition on the boundary",
        is_partition(&bg.groupoid, &restricted)?,
        "boundary restriction fails",
    ));
    Ok(out)
}

/// Partition transported along a refinement.
pub fn partition_refinement_suite(
    fine: &Groupoid,
    coarse: &Groupoid,
    r: &GroupoidFunctor,
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("partition_refinement_transport");
    let rho = find_partition(fine)?;
    let pushed = pushforward_partition(fine, coarse, r, &rho)?;
    out.push(Check::of(
        "pushed partition is a partition downstairs",
        is_partition(coarse, &pushed)?,
        "refinement transport fails",
    ));
    Ok(out)
}

/// Base change over a weak fiber product: A1_* A2^* = F^* G_*.
pub fn epg_base_change_suite(
    x: &Groupoid,
    y: &Groupoid,
    z: &Groupoid,
    f: &GroupoidFunctor,
    g: &RelOrientedFunctor,
    bound: u32,
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("epg_base_change");
    let wfp = weak_fiber_product(x, y, z, f, &g.functor)?;
    let (o_a10, o_a11) = wfp.pullback_orientation(z, &g.functor, &g.o0, &g.o1)?;
    let a1 = RelOrientedFunctor { functor: wfp.a1.clone(), o0: o_a10, o1: o_a11 };
    for deg in 0..=y.x0.dim {
        for (i, xi) in invariant_family(y, deg, bound)?.iter().enumerate() {
            let lhs = functor_pushforward(
                &wfp.groupoid,
                x,
                &a1,
                &functor_pullback(&wfp.groupoid, y, &wfp.a2, xi)?,
            )?;
            let rhs = functor_pullback(x, z, f, &functor_pushforward(y, z, g, xi)?)?;
            out.push(Check::of(
                format!("degree {deg} form {i}"),
                lhs.equals(&x.x0, &rhs)?,
                "base change over the weak fiber product fails",
            ));
        }
    }
    Ok(out)
}

/// Boundary integration identity at the groupoid level, with the fiberwise
/// boundary and the induced relative orientation.
pub fn epg_stokes_suite(
    x: &Groupoid,
    y: &Groupoid,
    f: &RelOrientedFunctor,
    xis: &[PPForm],
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("epg_stokes");
    let vbg = vertical_boundary_groupoid(x, y, &f.functor)?;
    let vb0 = crate::mwc::vertical_boundary(&x.x0, &y.x0, &f.functor.f0)?;
    let vb1 = crate::mwc::vertical_boundary(&x.x1, &y.x1, &f.functor.f1)?;
    if vb0.complex.len() != vbg.sub.groupoid.x0.len() || vb1.complex.len() != vbg.sub.groupoid.x1.len()
    {
        out.push(Check::fail("vertical boundary alignment", "chart counts differ"));
        return Ok(out);
    }
    // Partition on the vertical boundary: restriction of the partition
    // upstairs (validated transport).
    let mut vgroup = vbg.sub.groupoid.clone();
    let rho = find_partition(x)?;
    vgroup.partition_hint = Some(rho.pullback(&vgroup.x0, &x.x0, &vbg.incl.f0)?);
    let fv = GroupoidFunctor {
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
            .map(|(k, a)| vbg.rel_or0.0[k] * f.o0.0[a.target_chart])
            .collect(),
    );
    let o1 = RelOrientation(
        vbg.incl
            .f1
            .assignments
            .iter()
            .enumerate()
            .map(|(k, a)| vbg.rel_or1.0[k] * f.o1.0[a.target_chart])
            .collect(),
    );
    let fv_oriented = RelOrientedFunctor { functor: fv, o0, o1 };
    let m = x.x0.dim as i64;
    for (i, xi) in xis.iter().enumerate() {
        let k = xi.degree as i64;
        let lhs = functor_pushforward(x, y, f, xi)?.d(&y.x0)?;
        let interior = functor_pushforward(x, y, f, &xi.d(&x.x0)?)?;
        let restricted = xi.pullback(&vgroup.x0, &x.x0, &vbg.incl.f0)?;
        let boundary = functor_pushforward(&vgroup, y, &fv_oriented, &restricted)?;
        let rhs = interior.add(&y.x0, &boundary.scale(&parity_sign(m + k).rat()))?;
        out.push(Check::of(
            format!("form {i} degree {k}"),
            lhs.equals(&y.x0, &rhs)?,
            "boundary integration identity fails at groupoid level",
        ));
    }
    Ok(out)
}

/// Arrow-count sanity used by scenario fixtures.
pub fn arrow_count_is(g: &Groupoid, n: i64) -> Result<bool> {
    arrow_count(g)?.equals(&g.x0, &PPForm::constant(&g.x0, Rat::from_int(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{ChartComplex, ChartMap};
    use crate::epg::{klein_square, mirror_interval};
    use crate::polytope::Polytope;

    #[test]
    fn averaging_suites_on_quotient_examples() {
        for g in [mirror_interval().unwrap(), klein_square().unwrap()] {
            assert!(averaging_symmetry_suite(&g, 2).unwrap().passed());
            assert!(averaging_range_suite(&g, 2).unwrap().passed());
            let inv = averaging_inverse_suite(&g, 1).unwrap();
            assert!(inv.passed(), "{:?}", inv.first_failure());
            let d = d_commutes_averaging_suite(&g, 2).unwrap();
            assert!(d.passed(), "{:?}", d.first_failure());
            let m = module_structure_suite(&g, 1).unwrap();
            assert!(m.passed(), "{:?}", m.first_failure());
        }
    }

    #[test]
    fn cover_averaging_suites() {
        let r = |v: i64| Rat::from_int(v);
        let patches = vec![
            Polytope::box_(&[r(0)], &[Rat::new(6, 5)]).unwrap(),
            Polytope::box_(&[Rat::new(4, 5)], &[r(2)]).unwrap(),
        ];
        let g = Groupoid::cover(1, patches).unwrap();
        assert!(averaging_symmetry_suite(&g, 2).unwrap().passed());
        let inv = averaging_inverse_suite(&g, 1).unwrap();
        assert!(inv.passed(), "{:?}", inv.first_failure());
    }

    #[test]
    fn partition_suites() {
        let g = mirror_interval().unwrap();
        // Two different valid partitions: the constant and a lopsided blend
        // rho(x) with rho(x) + rho(-x) = 1: take rho = (1 + x)/2... which is
        // smooth and in [0,1] on [-1,1].
        let rho1 = find_partition(&g).unwrap();
        let rho2 = PPForm::from_chart_polys(
            &g.x0,
            vec![crate::poly::Poly::affine(&[Rat::new(1, 2)], &Rat::new(1, 2))],
        )
        .unwrap();
        let rep = partition_independence_suite(&g, &rho1, &rho2, 2).unwrap();
        assert!(rep.passed(), "{:?}", rep.first_failure());
        let pb = partition_boundary_suite(&g).unwrap();
        assert!(pb.passed(), "{:?}", pb.first_failure());
    }

    #[test]
    fn wfp_and_base_change_on_trivial_projection() {
        // X = square, Y = square, Z = interval, F = G = projection functors.
        let r = |v: i64| Rat::from_int(v);
        let sq = ChartComplex::single(Polytope::box_(&[r(0), r(0)], &[r(1), r(1)]).unwrap())
            .unwrap();
        let iv = ChartComplex::single(Polytope::interval(0, 1)).unwrap();
        let gx = Groupoid::trivial(sq.clone()).unwrap();
        let gz = Groupoid::trivial(iv.clone()).unwrap();
        let proj = |src: &ChartComplex, tgt: &ChartComplex| {
            ChartMap::new(
                src,
                tgt,
                vec![crate::chart::ChartAssignment {
                    target_chart: 0,
                    map: crate::affine::AffineMap::coordinate_projection(2, &[0]),
                }],
                crate::chart::MapFlags {
                    strongly_smooth: true,
                    submersion_standard_form: true,
                    proper: true,
                    local_diffeo: false,
                },
                vec![Some(crate::chart::ProductData {
                    split: crate::affine::AffineMap::identity(2),
                    base_dim: 1,
                    ident: crate::affine::AffineMap::identity(1),
                })],
            )
            .unwrap()
        };
        let func = GroupoidFunctor {
            f0: proj(&sq, &iv),
            f1: proj(&sq, &iv),
            proper: true,
            submersion: true,
        };
        let (valid, _wfp) = wfp_valid_suite(&gx, &gx, &gz, &func, &func).unwrap();
        assert!(valid.passed(), "{:?}", valid.first_failure());
        let part = partition_fiber_product_suite(&gx, &gx, &gz, &func, &func).unwrap();
        assert!(part.passed(), "{:?}", part.first_failure());
        let oriented = RelOrientedFunctor {
            functor: func.clone(),
            o0: RelOrientation::plus(1),
            o1: RelOrientation::plus(1),
        };
        let bc = epg_base_change_suite(&gx, &gx, &gz, &func, &oriented, 1).unwrap();
        assert!(bc.passed(), "{:?}", bc.first_failure());
        // Stokes at groupoid level on the projection.
        let xis: Vec<PPForm> = (0..=2)
            .flat_map(|d| invariant_family(&gx, d, 1).unwrap())
            .collect();
        let st = epg_stokes_suite(&gx, &gz, &oriented, &xis).unwrap();
        assert!(st.passed(), "{:?}", st.first_failure());
    }

    #[test]
    fn refinement_suite_on_mirror_cover() {
        let g = mirror_interval().unwrap();
        let patches = vec![vec![
            Polytope::box_(&[Rat::from_int(-1)], &[Rat::new(1, 4)]).unwrap(),
            Polytope::box_(&[-Rat::new(1, 4)], &[Rat::from_int(1)]).unwrap(),
        ]];
        let (refined, func) = Groupoid::refine_by_cover(&g, patches).unwrap();
        let rep = refinement_inverse_suite(&refined, &g, &func, 1).unwrap();
        assert!(rep.passed(), "{:?}", rep.first_failure());
        let part = partition_refinement_suite(&refined, &g, &func).unwrap();
        assert!(part.passed(), "{:?}", part.first_failure());
    }

    #[test]
    fn epg_projection_and_composition_via_point() {
        // Klein square -> point: push-forward composition against identity.
        let g = klein_square().unwrap();
        let pt = Groupoid::point().unwrap();
        let to_pt = GroupoidFunctor {
            f0: ChartMap::to_point(&g.x0),
            f1: ChartMap::to_point(&g.x1),
            proper: true,
            submersion: true,
        };
        let oriented = RelOrientedFunctor {
            functor: to_pt,
            o0: RelOrientation::plus(1),
            o1: RelOrientation::plus(4),
        };
        let pf = epg_projection_formula_suite(&g, &pt, &oriented, 1).unwrap();
        assert!(pf.passed(), "{:?}", pf.first_failure());
        let idf = RelOrientedFunctor {
            functor: GroupoidFunctor::identity(&pt),
            o0: RelOrientation::plus(1),
            o1: RelOrientation::plus(1),
        };
        let comp = epg_pushforward_composition_suite(&g, &pt, &pt, &oriented, &idf, &oriented, 1)
            .unwrap();
        assert!(comp.passed(), "{:?}", comp.first_failure());
    }
}
