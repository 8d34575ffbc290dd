//! Functors of étale proper groupoids, natural transformations, refinement
//! validation, and the induced operations on invariant forms.

use super::averaging;
use super::{chart_maps_equal, Groupoid};
use crate::chart::ChartMap;
use crate::error::Result;
use crate::fiberprod::fiber_product;
use crate::forms::PPForm;
use crate::mwc::pushforward;
use crate::orient::RelOrientation;
use crate::polytope::Polytope;
use crate::report::{Check, SuiteOutcome};

/// A smooth functor: chart maps on objects and arrows commuting with all
/// structure maps. `proper` always holds over compact charts; `submersion`
/// records standard-form data availability on `f0`/`f1`.
#[derive(Clone, Debug)]
pub struct GroupoidFunctor {
    pub f0: ChartMap,
    pub f1: ChartMap,
    pub proper: bool,
    pub submersion: bool,
}

impl GroupoidFunctor {
    pub fn identity(g: &Groupoid) -> GroupoidFunctor {
        GroupoidFunctor {
            f0: ChartMap::identity(&g.x0),
            f1: ChartMap::identity(&g.x1),
            proper: true,
            submersion: true,
        }
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &GroupoidFunctor) -> Result<GroupoidFunctor> {
        Ok(GroupoidFunctor {
            f0: self.f0.compose(&other.f0)?,
            f1: self.f1.compose(&other.f1)?,
            proper: self.proper && other.proper,
            submersion: self.submersion && other.submersion,
        })
    }

    pub fn is_local_diffeo(&self) -> bool {
        self.f0.assignments.iter().all(|a| a.map.is_invertible())
            && self.f1.assignments.iter().all(|a| a.map.is_invertible())
    }

    /// Exact functor-equation validation.
    pub fn validate(&self, x: &Groupoid, y: &Groupoid) -> Result<SuiteOutcome> {
        let mut out = SuiteOutcome::new("functor_valid");
        out.push(eq(
            "s . F1 = F0 . s",
            &y.s.compose(&self.f1)?,
            &self.f0.compose(&x.s)?,
        ));
        out.push(eq(
            "t . F1 = F0 . t",
            &y.t.compose(&self.f1)?,
            &self.f0.compose(&x.t)?,
        ));
        out.push(eq(
            "e . F0 = F1 . e",
            &y.e.compose(&self.f0)?,
            &self.f1.compose(&x.e)?,
        ));
        out.push(eq(
            "i . F1 = F1 . i",
            &y.inv.compose(&self.f1)?,
            &self.f1.compose(&x.inv)?,
        ));
        // Compatibility with composition via the induced map on composables.
        let fa = self.f1.compose(&x.composable.proj_m)?;
        let fb = self.f1.compose(&x.composable.proj_p)?;
        let induced = y.composable.map_into(&x.composable.complex, &fa, &fb)?;
        out.push(eq(
            "F1 . m = m . (F1 x F1)",
            &self.f1.compose(&x.m)?,
            &y.m.compose(&induced)?,
        ));
        Ok(out)
    }
}

fn eq(name: &str, a: &ChartMap, b: &ChartMap) -> Check {
    Check::of(name, chart_maps_equal(a, b), "chart maps differ")
}

/// A functor together with a relative orientation satisfying the
/// structure-map compatibility equations.
#[derive(Clone, Debug)]
pub struct RelOrientedFunctor {
    pub functor: GroupoidFunctor,
    pub o0: RelOrientation,
    pub o1: RelOrientation,
}

impl RelOrientedFunctor {
    pub fn canonical(g: &Groupoid, f: GroupoidFunctor) -> Result<RelOrientedFunctor> {
        let _ = g;
        let o0 = RelOrientation::canonical(&f.f0)?;
        let o1 = RelOrientation::canonical(&f.f1)?;
        Ok(RelOrientedFunctor { functor: f, o0, o1 })
    }

    /// Compatibility: composing with the canonical orientations of source and
    /// target maps in either order agrees.
    pub fn validate(&self, x: &Groupoid, y: &Groupoid) -> Result<SuiteOutcome> {
        let mut out = SuiteOutcome::new("functor_orientation_compatible");
        let cs_y = RelOrientation::canonical(&y.s)?;
        let ct_y = RelOrientation::canonical(&y.t)?;
        let cs_x = RelOrientation::canonical(&x.s)?;
        let ct_x = RelOrientation::canonical(&x.t)?;
        for c in 0..x.x1.len() {
            let f1_tgt = self.functor.f1.assignments[c].target_chart;
            let sx_tgt = x.s.assignments[c].target_chart;
            let tx_tgt = x.t.assignments[c].target_chart;
            let lhs_s = cs_y.0[f1_tgt] * self.o1.0[c];
            let rhs_s = self.o0.0[sx_tgt] * cs_x.0[c];
            out.push(Check::of(
                format!("source compatibility on arrow chart {c}"),
                lhs_s == rhs_s,
                format!("{lhs_s} vs {rhs_s}"),
            ));
            let lhs_t = ct_y.0[f1_tgt] * self.o1.0[c];
            let rhs_t = self.o0.0[tx_tgt] * ct_x.0[c];
            out.push(Check::of(
                format!("target compatibility on arrow chart {c}"),
                lhs_t == rhs_t,
                format!("{lhs_t} vs {rhs_t}"),
            ));
        }
        Ok(out)
    }

    pub fn compose(&self, other: &RelOrientedFunctor) -> Result<RelOrientedFunctor> {
        Ok(RelOrientedFunctor {
            functor: self.functor.compose(&other.functor)?,
            o0: RelOrientation::compose(&self.o0, &other.o0, &other.functor.f0),
            o1: RelOrientation::compose(&self.o1, &other.o1, &other.functor.f1),
        })
    }
}

/// A natural transformation between functors `F, G : X -> Y`, given by its
/// underlying chart map `X0 -> Y1`, with optional relative orientation.
#[derive(Clone, Debug)]
pub struct NaturalTransformation {
    pub alpha: ChartMap,
    pub o_alpha: Option<RelOrientation>,
}

impl NaturalTransformation {
    pub fn validate(
        &self,
        x: &Groupoid,
        y: &Groupoid,
        f: &GroupoidFunctor,
        g: &GroupoidFunctor,
    ) -> Result<SuiteOutcome> {
        let mut out = SuiteOutcome::new("natural_transformation_valid");
        out.push(eq("s . alpha = F0", &y.s.compose(&self.alpha)?, &f.f0));
        out.push(eq("t . alpha = G0", &y.t.compose(&self.alpha)?, &g.f0));
        // Naturality: alpha(t(a)) . F1(a) = G1(a) . alpha(s(a)).
        let lhs_pair = y.composable.map_into(
            &x.x1,
            &self.alpha.compose(&x.t)?,
            &f.f1,
        )?;
        let rhs_pair = y.composable.map_into(
            &x.x1,
            &g.f1,
            &self.alpha.compose(&x.s)?,
        )?;
        out.push(eq(
            "naturality square",
            &y.m.compose(&lhs_pair)?,
            &y.m.compose(&rhs_pair)?,
        ));
        if let Some(oa) = &self.o_alpha {
            // Orientation condition relating alpha to the orientations of F, G
            // is checked in `oriented_transformation_valid`.
            let _ = oa;
        }
        Ok(out)
    }

    /// Orientation compatibility with relatively oriented F and G.
    pub fn validate_oriented(
        &self,
        y: &Groupoid,
        f: &RelOrientedFunctor,
        g: &RelOrientedFunctor,
    ) -> Result<SuiteOutcome> {
        let mut out = SuiteOutcome::new("transformation_orientation_compatible");
        let Some(oa) = &self.o_alpha else {
            out.push(Check::fail("orientation data", "no orientation on the transformation"));
            return Ok(out);
        };
        let cs = RelOrientation::canonical(&y.s)?;
        let ct = RelOrientation::canonical(&y.t)?;
        for c in 0..self.alpha.assignments.len() {
            let tgt = self.alpha.assignments[c].target_chart;
            out.push(Check::of(
                format!("source side on object chart {c}"),
                cs.0[tgt] * oa.0[c] == f.o0.0[c],
                "o^s_c . o^alpha differs from o^F0",
            ));
            out.push(Check::of(
                format!("target side on object chart {c}"),
                ct.0[tgt] * oa.0[c] == g.o0.0[c],
                "o^t_c . o^alpha differs from o^G0",
            ));
        }
        Ok(out)
    }
}

/// Pull-back of invariant forms along a functor.
pub fn functor_pullback(x: &Groupoid, y: &Groupoid, f: &GroupoidFunctor, a: &PPForm) -> Result<PPForm> {
    a.pullback(&x.x0, &y.x0, &f.f0)
}

/// Push-forward of invariant forms along a relatively oriented proper
/// submersion: averaging after the chart-level push of a partition-weighted
/// representative.
pub fn functor_pushforward(
    x: &Groupoid,
    y: &Groupoid,
    f: &RelOrientedFunctor,
    a: &PPForm,
) -> Result<PPForm> {
    let rho = averaging::find_partition(x)?;
    let rep = averaging::k_map(x, &rho, a)?;
    let pushed = pushforward(&x.x0, &y.x0, &f.functor.f0, &f.o0, &rep)?;
    averaging::j_map(y, &pushed)
}

/// Refinement validation: chart-wise invertible, essentially surjective
/// (exact polytope covering), and fully faithful (the arrow square is
/// a chart-wise bijection).
pub fn validate_refinement(x: &Groupoid, y: &Groupoid, r: &GroupoidFunctor) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("refinement_valid");
    let functor_ok = r.validate(x, y)?;
    for c in functor_ok.checks {
        out.push(c);
    }
    out.push(Check::of(
        "chart-wise invertible",
        r.is_local_diffeo(),
        "functor is not a local diffeomorphism",
    ));
    if !out.passed() {
        return Ok(out);
    }
    // Essential surjectivity: the map (x, arrow) -> s(arrow) out of
    // X0 x_{Y0} Y1 covers Y0 exactly.
    let e = fiber_product(&x.x0, &r.f0, &y.x1, &y.t, &y.x0)?;
    let reach = y.s.compose(&e.proj_p)?;
    let mut images: Vec<Vec<Polytope>> = vec![vec![]; y.x0.len()];
    for (ci, a) in reach.assignments.iter().enumerate() {
        images[a.target_chart].push(e.complex.charts[ci].image_invertible(&a.map)?);
    }
    for (ci, chart) in y.x0.charts.iter().enumerate() {
        out.push(Check::of(
            format!("essential surjectivity onto object chart {ci}"),
            Polytope::union_covers(chart, &images[ci])?,
            "object chart not covered",
        ));
    }
    // Full faithfulness: X1 = (X0 x X0) x_{Y0 x Y0} Y1 chart-wise.
    let ff = fiber_product(
        &e.complex,
        &y.s.compose(&e.proj_p)?,
        &x.x0,
        &r.f0,
        &y.x0,
    )?;
    // The canonical comparison: a -> ((t(a), R1(a)), s(a)).
    let into_e = e.map_into(&x.x1, &x.t, &r.f1)?;
    let cmp = ff.map_into(&x.x1, &into_e, &x.s)?;
    let mut hits = vec![0usize; ff.complex.len()];
    let mut ok = true;
    let mut witness = String::new();
    for (c, a) in cmp.assignments.iter().enumerate() {
        hits[a.target_chart] += 1;
        if !a.map.is_invertible() {
            ok = false;
            witness = format!("arrow chart {c} maps non-invertibly");
            break;
        }
        let img = x.x1.charts[c].image_invertible(&a.map)?;
        if img != ff.complex.charts[a.target_chart] {
            ok = false;
            witness = format!("arrow chart {c} is not onto its comparison chart");
            break;
        }
    }
    if ok {
        if let Some(missed) = hits.iter().position(|&h| h != 1) {
            ok = false;
            witness = format!("comparison chart {missed} hit {} times", hits[missed]);
        }
    }
    out.push(Check::of("fully faithful", ok, witness));
    Ok(out)
}

/// Push-forward along a refinement with the canonical relative orientation.
pub fn refinement_pushforward(x: &Groupoid, y: &Groupoid, r: &GroupoidFunctor, a: &PPForm) -> Result<PPForm> {
    let oriented = RelOrientedFunctor::canonical(x, r.clone())?;
    functor_pushforward(x, y, &oriented, a)
}

/// Push-forward of a partition of unity along a refinement is a partition
/// of unity downstairs (chart-level push, no averaging).
pub fn pushforward_partition(
    x: &Groupoid,
    y: &Groupoid,
    r: &GroupoidFunctor,
    rho: &PPForm,
) -> Result<PPForm> {
    let o = RelOrientation::canonical(&r.f0)?;
    rho.pushforward_local_diffeo(&x.x0, &y.x0, &r.f0, &o)
}

/// Equalization along a 2-morphism: F^* = G^* on an invariant test family;
/// with orientation data on everything, F_* = G_* as well.
#[allow(clippy::too_many_arguments)]
pub fn two_morphism_suite(
    x: &Groupoid,
    y: &Groupoid,
    f: &GroupoidFunctor,
    g: &GroupoidFunctor,
    alpha: &NaturalTransformation,
    oriented: Option<(&RelOrientedFunctor, &RelOrientedFunctor)>,
    degree_bound: u32,
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("two_morphism_equalizes");
    let valid = alpha.validate(x, y, f, g)?;
    for c in valid.checks {
        out.push(c);
    }
    for deg in 0..=y.x0.dim {
        for (i, a) in averaging::invariant_family(y, deg, degree_bound)?.iter().enumerate() {
            let fa = functor_pullback(x, y, f, a)?;
            let ga = functor_pullback(x, y, g, a)?;
            out.push(Check::of(
                format!("pullbacks agree on degree {deg} form {i}"),
                fa.equals(&x.x0, &ga)?,
                "pullbacks differ",
            ));
        }
    }
    if let Some((rf, rg)) = oriented {
        let or_valid = alpha.validate_oriented(y, rf, rg)?;
        for c in or_valid.checks {
            out.push(c);
        }
        for deg in 0..=x.x0.dim {
            for (i, a) in averaging::invariant_family(x, deg, degree_bound)?.iter().enumerate() {
                let fa = functor_pushforward(x, y, rf, a)?;
                let ga = functor_pushforward(x, y, rg, a)?;
                out.push(Check::of(
                    format!("pushforwards agree on degree {deg} form {i}"),
                    fa.equals(&y.x0, &ga)?,
                    "pushforwards differ",
                ));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epg::mirror_interval;
    use crate::poly::Poly;
    use crate::rat::Rat;

    fn r(v: i64) -> Rat {
        Rat::from_int(v)
    }

    #[test]
    fn identity_functor_is_refinement() {
        let g = mirror_interval().unwrap();
        let id = GroupoidFunctor::identity(&g);
        let rep = validate_refinement(&g, &g, &id).unwrap();
        assert!(rep.passed(), "{:?}", rep.first_failure());
    }

    #[test]
    fn cover_refinement_functor_is_refinement() {
        let g = mirror_interval().unwrap();
        let patches = vec![vec![
            Polytope::box_(&[r(-1)], &[Rat::new(1, 4)]).unwrap(),
            Polytope::box_(&[-Rat::new(1, 4)], &[r(1)]).unwrap(),
        ]];
        let (refined, func) = crate::epg::Groupoid::refine_by_cover(&g, patches).unwrap();
        let rep = validate_refinement(&refined, &g, &func).unwrap();
        assert!(rep.passed(), "{:?}", rep.first_failure());
    }

    #[test]
    fn inclusion_into_mirror_is_not_fully_faithful() {
        // Trivial groupoid on [-1,1] includes into the mirror groupoid as the
        // identity arrows: a local diffeomorphism and essentially surjective,
        // but the reflection arrows are not reached.
        let y = mirror_interval().unwrap();
        let x = crate::epg::Groupoid::trivial(y.x0.clone()).unwrap();
        let f = GroupoidFunctor {
            f0: ChartMap::identity(&y.x0),
            f1: y.e.clone(),
            proper: true,
            submersion: true,
        };
        let rep = f.validate(&x, &y).unwrap();
        assert!(rep.passed(), "{:?}", rep.first_failure());
        let refin = validate_refinement(&x, &y, &f).unwrap();
        assert!(!refin.passed());
        let failing = refin.first_failure().unwrap();
        assert_eq!(failing.name, "fully faithful");
    }

    #[test]
    fn refinement_pushforward_inverts_pullback() {
        let g = mirror_interval().unwrap();
        let patches = vec![vec![
            Polytope::box_(&[r(-1)], &[Rat::new(1, 4)]).unwrap(),
            Polytope::box_(&[-Rat::new(1, 4)], &[r(1)]).unwrap(),
        ]];
        let (refined, func) = crate::epg::Groupoid::refine_by_cover(&g, patches).unwrap();
        for deg in 0..=1usize {
            for a in averaging::invariant_family(&g, deg, 2).unwrap() {
                let pulled = functor_pullback(&refined, &g, &func, &a).unwrap();
                let back = refinement_pushforward(&refined, &g, &func, &pulled).unwrap();
                assert!(back.equals(&g.x0, &a).unwrap(), "R_* R^* = id fails");
            }
            for b in averaging::invariant_family(&refined, deg, 1).unwrap() {
                let down = refinement_pushforward(&refined, &g, &func, &b).unwrap();
                let up = functor_pullback(&refined, &g, &func, &down).unwrap();
                assert!(up.equals(&refined.x0, &b).unwrap(), "R^* R_* = id fails");
            }
        }
    }

    #[test]
    fn mirror_pushforward_to_point_gives_one_third() {
        let g = mirror_interval().unwrap();
        let pt = crate::epg::Groupoid::point().unwrap();
        let f = GroupoidFunctor {
            f0: ChartMap::to_point(&g.x0),
            f1: ChartMap::to_point(&g.x1),
            proper: true,
            submersion: true,
        };
        let rep = f.validate(&g, &pt).unwrap();
        assert!(rep.passed(), "{:?}", rep.first_failure());
        let oriented = RelOrientedFunctor {
            functor: f,
            o0: crate::orient::RelOrientation::plus(1),
            o1: crate::orient::RelOrientation::plus(2),
        };
        // x^2 dx is not invariant on the mirror groupoid, but the weighted
        // integral of the representative is still the quotient integral.
        let x2dx = PPForm::monomial_form(&g.x0, &[0], Poly::monomial(vec![2], r(1))).unwrap();
        assert!(!averaging::is_invariant(&g, &x2dx).unwrap());
        let pushed = functor_pushforward(&g, &pt, &oriented, &x2dx).unwrap();
        let expected = PPForm::constant(&pt.x0, Rat::new(1, 3));
        assert!(pushed.equals(&pt.x0, &expected).unwrap());
    }
}
