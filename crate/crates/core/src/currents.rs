//! Currents on orbifold presentations: lazy evaluation trees dual to
//! compactly supported invariant forms. Equality of currents is always
//! "equal on a spanning test family"; the families are polynomial forms of
//! bounded degree, invariantized by averaging, with facet-vanishing factors
//! for the relative variant.

use crate::epg::averaging;
use crate::epg::Groupoid;
use crate::error::{Error, Result};
use crate::forms::PPForm;
use crate::mwc::parity_sign;
use crate::orb::OrbMorphism;
use crate::orient::Orientation;
use crate::poly::Poly;
use crate::polytope::Polytope;
use crate::rat::Rat;

/// A groupoid with a chosen orientation of its object space, over which
/// form-induced currents integrate.
#[derive(Clone, Debug)]
pub struct OrientedBase {
    pub groupoid: Groupoid,
    pub o0: Orientation,
}

impl OrientedBase {
    pub fn standard(g: &Groupoid) -> OrientedBase {
        OrientedBase { groupoid: g.clone(), o0: Orientation::standard(&g.x0) }
    }

    pub fn dim(&self) -> i64 {
        self.groupoid.dim() as i64
    }
}

/// One weighted parametrized polytope of a chain current.
#[derive(Clone, Debug)]
pub struct ChainCell {
    pub chart: usize,
    /// Parameter polytope in its own coordinates.
    pub cell: Polytope,
    /// Affine parametrization into the chart's space.
    pub param: crate::affine::AffineMap,
    pub weight: Rat,
}

#[derive(Clone, Debug)]
pub enum CurrentKind {
    /// Integration against an invariant form.
    Form(PPForm),
    /// Integration over a weighted chain of parametrized polytopes.
    Chain(Vec<ChainCell>),
    /// Push-forward along a proper morphism.
    Push { f: OrbMorphism, inner: Box<Current> },
    /// Pull-back along a relatively oriented submersion.
    Pull { f: OrbMorphism, inner: Box<Current> },
    /// Exterior derivative.
    Deriv(Box<Current>),
    /// Module actions: eta ^ zeta (left) and zeta ^ eta (right).
    LeftWedge { eta: PPForm, inner: Box<Current> },
    RightWedge { inner: Box<Current>, eta: PPForm },
    /// Rational linear combination.
    Combo(Vec<(Rat, Current)>),
}

#[derive(Clone, Debug)]
pub struct Current {
    pub base: OrientedBase,
    /// Cohomological degree: pairs with test forms of degree dim - degree.
    pub degree: i64,
    pub kind: CurrentKind,
}

impl Current {
    pub fn form_induced(base: &OrientedBase, gamma: PPForm) -> Current {
        Current { base: base.clone(), degree: gamma.degree as i64, kind: CurrentKind::Form(gamma) }
    }

    pub fn chain(base: &OrientedBase, cells: Vec<ChainCell>) -> Result<Current> {
        let q = cells
            .first()
            .map(|c| c.cell.ambient_dim)
            .ok_or_else(|| Error::Validation("empty chain".into()))?;
        for c in &cells {
            if c.cell.ambient_dim != q || c.param.domain_dim() != q {
                return Err(Error::Validation("chain cells of mixed dimension".into()));
            }
            if c.param.codomain_dim() != base.groupoid.dim() {
                return Err(Error::Dim("chain parametrization arity".into()));
            }
            if c.chart >= base.groupoid.x0.len() {
                return Err(Error::Validation("chain chart index out of range".into()));
            }
        }
        Ok(Current {
            base: base.clone(),
            degree: base.dim() - q as i64,
            kind: CurrentKind::Chain(cells),
        })
    }

    /// Push-forward along a proper morphism; degree drops by the relative
    /// dimension of the morphism.
    pub fn pushforward(target_base: &OrientedBase, f: &OrbMorphism, inner: Current) -> Current {
        let degree = inner.degree - f.rdim();
        Current {
            base: target_base.clone(),
            degree,
            kind: CurrentKind::Push { f: f.clone(), inner: Box::new(inner) },
        }
    }

    /// Pull-back along a relatively oriented submersion; degree unchanged.
    pub fn pullback(source_base: &OrientedBase, f: &OrbMorphism, inner: Current) -> Current {
        Current {
            base: source_base.clone(),
            degree: inner.degree,
            kind: CurrentKind::Pull { f: f.clone(), inner: Box::new(inner) },
        }
    }

    pub fn derivative(inner: Current) -> Current {
        Current {
            base: inner.base.clone(),
            degree: inner.degree + 1,
            kind: CurrentKind::Deriv(Box::new(inner)),
        }
    }

    pub fn left_wedge(eta: PPForm, inner: Current) -> Current {
        Current {
            base: inner.base.clone(),
            degree: inner.degree + eta.degree as i64,
            kind: CurrentKind::LeftWedge { eta, inner: Box::new(inner) },
        }
    }

    pub fn right_wedge(inner: Current, eta: PPForm) -> Current {
        Current {
            base: inner.base.clone(),
            degree: inner.degree + eta.degree as i64,
            kind: CurrentKind::RightWedge { inner: Box::new(inner), eta },
        }
    }

    /// Exact evaluation against a compactly supported invariant test form.
    /// Degree mismatches evaluate to zero.
    pub fn evaluate(&self, eta: &PPForm) -> Result<Rat> {
        if eta.degree as i64 != self.base.dim() - self.degree {
            return Ok(Rat::zero());
        }
        let x0 = &self.base.groupoid.x0;
        match &self.kind {
            CurrentKind::Form(gamma) => {
                let wedge = gamma.wedge(x0, eta)?;
                crate::orb::integrate(&self.base.groupoid, &self.base.o0, &wedge)
            }
            CurrentKind::Chain(cells) => {
                let mut acc = Rat::zero();
                for cell in cells {
                    let mini = crate::chart::ChartComplex::single(cell.cell.clone())?;
                    let incl = crate::chart::ChartMap::new(
                        &mini,
                        x0,
                        vec![crate::chart::ChartAssignment {
                            target_chart: cell.chart,
                            map: cell.param.clone(),
                        }],
                        crate::chart::MapFlags { proper: true, ..Default::default() },
                        vec![None],
                    )?;
                    let pulled = eta.pullback(&mini, x0, &incl)?;
                    let val = pulled.integrate(&mini, &Orientation::standard(&mini))?;
                    acc += &cell.weight * &val;
                }
                Ok(acc)
            }
            CurrentKind::Push { f, inner } => {
                let pulled = f.pullback(eta)?;
                let sign = parity_sign(eta.degree as i64 * f.rdim()).rat();
                Ok(&sign * &inner.evaluate(&pulled)?)
            }
            CurrentKind::Pull { f, inner } => {
                let pushed = f.pushforward(eta)?;
                inner.evaluate(&pushed)
            }
            CurrentKind::Deriv(inner) => {
                let deta = eta.d(x0)?;
                let sign = parity_sign(1 + inner.degree).rat();
                Ok(&sign * &inner.evaluate(&deta)?)
            }
            CurrentKind::LeftWedge { eta: left, inner } => {
                let wedged = left.wedge(x0, eta)?;
                let sign = parity_sign(left.degree as i64 * inner.degree).rat();
                Ok(&sign * &inner.evaluate(&wedged)?)
            }
            CurrentKind::RightWedge { inner, eta: right } => {
                let wedged = right.wedge(x0, eta)?;
                inner.evaluate(&wedged)
            }
            CurrentKind::Combo(parts) => {
                let mut acc = Rat::zero();
                for (c, z) in parts {
                    acc += c * &z.evaluate(eta)?;
                }
                Ok(acc)
            }
        }
    }
}

/// Invariant polynomial test family of a given form degree with coefficient
/// degree bound.
pub fn test_family(g: &Groupoid, degree: usize, bound: u32) -> Result<Vec<PPForm>> {
    averaging::invariant_family(g, degree, bound)
}

/// Test family vanishing on the boundary: monomials damped by the product of
/// facet functionals of each chart, then invariantized by averaging.
pub fn relative_test_family(g: &Groupoid, degree: usize, bound: u32) -> Result<Vec<PPForm>> {
    let damp = facet_vanishing_factor(&g.x0)?;
    let mut out = Vec::new();
    for raw in crate::suites::monomial_test_forms(&g.x0, degree, bound) {
        let averaged = averaging::j_map(g, &damp.wedge(&g.x0, &raw)?)?;
        if !averaged.is_zero() {
            out.push(averaged);
        }
    }
    Ok(out)
}

/// The product of all facet slack functionals, per chart: a polynomial
/// vanishing exactly on the chart boundary.
pub fn facet_vanishing_factor(base: &crate::chart::ChartComplex) -> Result<PPForm> {
    let polys = base
        .charts
        .iter()
        .map(|chart| {
            let mut p = Poly::one(base.dim);
            for h in &chart.halfspaces {
                let neg: Vec<Rat> = h.normal.iter().map(|x| -x).collect();
                p = p.mul(&Poly::affine(&neg, &h.offset));
            }
            p
        })
        .collect();
    PPForm::from_chart_polys(base, polys)
}

/// Check the relative condition: the pull-back to the boundary vanishes.
pub fn is_relative(base: &crate::chart::ChartComplex, eta: &PPForm) -> Result<bool> {
    let b = crate::chart::build_boundary(base)?;
    if b.boundary.is_empty() {
        return Ok(true);
    }
    Ok(eta.pullback(&b.boundary, base, &b.inclusion)?.is_zero())
}
