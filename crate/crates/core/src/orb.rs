//! The localized category: morphisms of orbifolds as fractions F|R with R a
//! refinement, composition through the explicit weak fiber product, and the
//! induced operations on invariant forms.

use crate::epg::averaging;
use crate::epg::functor::{
    functor_pullback, functor_pushforward, refinement_pushforward, validate_refinement,
    GroupoidFunctor, RelOrientedFunctor,
};
use crate::epg::wfp::weak_fiber_product;
use crate::epg::Groupoid;
use crate::error::{Error, Result};
use crate::forms::PPForm;
use crate::orient::{Orientation, RelOrientation};
use crate::rat::Rat;
use crate::report::SuiteOutcome;

/// A morphism of orbifolds: a fraction X <-R- X' -F-> Y with R a refinement.
/// Properness, submersion, and orientation data are read off F.
#[derive(Clone, Debug)]
pub struct OrbMorphism {
    pub source: Groupoid,
    pub target: Groupoid,
    pub inner: Groupoid,
    pub r: GroupoidFunctor,
    pub f: GroupoidFunctor,
    /// Relative orientation of F (object and arrow level), when provided.
    pub orientation: Option<(RelOrientation, RelOrientation)>,
}

impl OrbMorphism {
    pub fn identity(g: &Groupoid) -> OrbMorphism {
        OrbMorphism {
            source: g.clone(),
            target: g.clone(),
            inner: g.clone(),
            r: GroupoidFunctor::identity(g),
            f: GroupoidFunctor::identity(g),
            orientation: Some((
                RelOrientation::plus(g.x0.len()),
                RelOrientation::plus(g.x1.len()),
            )),
        }
    }

    /// A morphism represented by a plain functor (R = id).
    pub fn from_functor(
        x: &Groupoid,
        y: &Groupoid,
        f: GroupoidFunctor,
        orientation: Option<(RelOrientation, RelOrientation)>,
    ) -> OrbMorphism {
        OrbMorphism {
            source: x.clone(),
            target: y.clone(),
            inner: x.clone(),
            r: GroupoidFunctor::identity(x),
            f,
            orientation,
        }
    }

    pub fn rdim(&self) -> i64 {
        self.source.dim() as i64 - self.target.dim() as i64
    }

    pub fn oriented_functor(&self) -> Result<RelOrientedFunctor> {
        let (o0, o1) = self
            .orientation
            .clone()
            .ok_or_else(|| Error::Validation("morphism carries no orientation".into()))?;
        Ok(RelOrientedFunctor { functor: self.f.clone(), o0, o1 })
    }

    pub fn validate(&self) -> Result<SuiteOutcome> {
        let mut out = SuiteOutcome::new("orb_morphism_valid");
        for c in validate_refinement(&self.inner, &self.source, &self.r)?.checks {
            out.push(c);
        }
        for c in self.f.validate(&self.inner, &self.target)?.checks {
            out.push(c);
        }
        if self.orientation.is_some() {
            let rf = self.oriented_functor()?;
            for c in rf.validate(&self.inner, &self.target)?.checks {
                out.push(c);
            }
        }
        Ok(out)
    }

    /// Pull-back on invariant forms: refinement push-forward after the
    /// functor pull-back.
    pub fn pullback(&self, a: &PPForm) -> Result<PPForm> {
        let pulled = functor_pullback(&self.inner, &self.target, &self.f, a)?;
        refinement_pushforward(&self.inner, &self.source, &self.r, &pulled)
    }

    /// Push-forward on invariant forms (relatively oriented proper
    /// submersion): functor push-forward after the refinement pull-back.
    pub fn pushforward(&self, a: &PPForm) -> Result<PPForm> {
        let rf = self.oriented_functor()?;
        let pulled = functor_pullback(&self.inner, &self.source, &self.r, a)?;
        functor_pushforward(&self.inner, &self.target, &rf, &pulled)
    }

    /// Composition f . g of fractions through the weak fiber product of the
    /// middle legs; the new refinement is the composite projection.
    pub fn compose(f: &OrbMorphism, g: &OrbMorphism) -> Result<OrbMorphism> {
        let wfp = weak_fiber_product(&g.inner, &f.inner, &g.target, &g.f, &f.r)?;
        let r_prime = wfp.a1.clone();
        let g_prime = wfp.a2.clone();
        let orientation = match &g.orientation {
            Some((og0, og1)) => {
                // Transpose pull-back of the orientation of G onto the second
                // projection, composed with the orientation of F.
                let (oa20, oa21) =
                    wfp.transpose_pullback_orientation(&g.target, &g.f, og0, og1)?;
                match &f.orientation {
                    Some((of0, of1)) => Some((
                        RelOrientation::compose(of0, &oa20, &g_prime.f0),
                        RelOrientation::compose(of1, &oa21, &g_prime.f1),
                    )),
                    None => None,
                }
            }
            None => None,
        };
        Ok(OrbMorphism {
            source: g.source.clone(),
            target: f.target.clone(),
            inner: wfp.groupoid.clone(),
            r: g.r.compose(&r_prime)?,
            f: f.f.compose(&g_prime)?,
            orientation,
        })
    }
}

/// Integration of an invariant form over an oriented groupoid: the weighted
/// integral of a partition-damped representative.
pub fn integrate(g: &Groupoid, o0: &Orientation, xi: &PPForm) -> Result<Rat> {
    let rho = averaging::find_partition(g)?;
    averaging::integrate(g, &rho, o0, xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{ChartComplex, ChartMap};
    use crate::epg::mirror_interval;
    use crate::poly::Poly;
    use crate::polytope::Polytope;

    fn r(v: i64) -> Rat {
        Rat::from_int(v)
    }

    #[test]
    fn identity_fraction_acts_as_identity() {
        let g = mirror_interval().unwrap();
        let id = OrbMorphism::identity(&g);
        assert!(id.validate().unwrap().passed());
        for a in averaging::invariant_family(&g, 1, 2).unwrap() {
            assert!(id.pullback(&a).unwrap().equals(&g.x0, &a).unwrap());
            assert!(id.pushforward(&a).unwrap().equals(&g.x0, &a).unwrap());
        }
    }

    #[test]
    fn mirror_integral_through_the_quotient_map() {
        // The mirror orbifold maps to the point orbifold; the push-forward of
        // the invariant average of x^2 dx integrates the quotient.
        let g = mirror_interval().unwrap();
        let pt = Groupoid::point().unwrap();
        // The mirror orbifold is non-orientable as a groupoid (the reflection
        // reverses orientation), so the quotient map carries no compatible
        // relative orientation; the integral is defined by the weighted
        // formula over the object space with its standard orientation.
        let to_pt = OrbMorphism::from_functor(
            &g,
            &pt,
            GroupoidFunctor {
                f0: ChartMap::to_point(&g.x0),
                f1: ChartMap::to_point(&g.x1),
                proper: true,
                submersion: true,
            },
            Some((RelOrientation::plus(1), RelOrientation::plus(2))),
        );
        let x2dx = PPForm::monomial_form(&g.x0, &[0], Poly::monomial(vec![2], r(1))).unwrap();
        let pushed = to_pt.pushforward(&x2dx).unwrap();
        assert!(pushed
            .equals(&pt.x0, &PPForm::constant(&pt.x0, Rat::new(1, 3)))
            .unwrap());
    }

    #[test]
    fn composition_with_identity_preserves_operations() {
        let g = mirror_interval().unwrap();
        let id = OrbMorphism::identity(&g);
        let composite = OrbMorphism::compose(&id, &id).unwrap();
        assert!(composite.validate().unwrap().passed(), "{:?}", composite.validate().unwrap().first_failure());
        for a in averaging::invariant_family(&g, 1, 2).unwrap() {
            let via_composite = composite.pullback(&a).unwrap();
            assert!(via_composite.equals(&g.x0, &a).unwrap());
            let pushed = composite.pushforward(&a).unwrap();
            assert!(pushed.equals(&g.x0, &a).unwrap());
        }
    }

    #[test]
    fn refinement_fraction_pushes_forward_as_identity() {
        let g = mirror_interval().unwrap();
        let patches = vec![vec![
            Polytope::box_(&[r(-1)], &[Rat::new(1, 4)]).unwrap(),
            Polytope::box_(&[-Rat::new(1, 4)], &[r(1)]).unwrap(),
        ]];
        let (refined, func) = Groupoid::refine_by_cover(&g, patches).unwrap();
        // The fraction X <-R- X' -R-> X given by the refinement both ways.
        let frac = OrbMorphism {
            source: g.clone(),
            target: g.clone(),
            inner: refined.clone(),
            r: func.clone(),
            f: func.clone(),
            orientation: Some((
                RelOrientation::canonical(&func.f0).unwrap(),
                RelOrientation::canonical(&func.f1).unwrap(),
            )),
        };
        assert!(frac.validate().unwrap().passed());
        for a in averaging::invariant_family(&g, 1, 2).unwrap() {
            assert!(frac.pullback(&a).unwrap().equals(&g.x0, &a).unwrap());
            assert!(frac.pushforward(&a).unwrap().equals(&g.x0, &a).unwrap());
        }
    }

    #[test]
    fn presentation_independence_of_the_interval_integral() {
        // Trivial presentation vs cover presentation of [0,2]: equal integrals.
        let seg = ChartComplex::single(Polytope::interval(0, 2)).unwrap();
        let trivial = Groupoid::trivial(seg).unwrap();
        let patches = vec![
            Polytope::box_(&[r(0)], &[Rat::new(6, 5)]).unwrap(),
            Polytope::box_(&[Rat::new(4, 5)], &[r(2)]).unwrap(),
        ];
        let cover = Groupoid::cover(1, patches).unwrap();
        let xi = PPForm::monomial_form(&trivial.x0, &[0], Poly::monomial(vec![2], r(1))).unwrap();
        let o_triv = Orientation::standard(&trivial.x0);
        let total = integrate(&trivial, &o_triv, &xi).unwrap();
        assert_eq!(total, Rat::new(8, 3));
        // The same form restricted to the cover presentation.
        let incl0 = ChartMap::new(
            &cover.x0,
            &trivial.x0,
            (0..cover.x0.len())
                .map(|_| crate::chart::ChartAssignment {
                    target_chart: 0,
                    map: crate::affine::AffineMap::identity(1),
                })
                .collect(),
            crate::chart::MapFlags { local_diffeo: true, proper: true, ..Default::default() },
            vec![None; cover.x0.len()],
        )
        .unwrap();
        let xi_cover = xi.pullback(&cover.x0, &trivial.x0, &incl0).unwrap();
        let o_cover = Orientation::standard(&cover.x0);
        assert_eq!(integrate(&cover, &o_cover, &xi_cover).unwrap(), Rat::new(8, 3));
    }
}
