//! Toolkit combining charts, orientations, and forms: push-forward dispatch,
//! composition of standard-form submersions, and the fiberwise-boundary
//! restriction used by the boundary integration identity.

use crate::affine::AffineMap;
use crate::chart::{
    build_boundary, horizontal_flags, ChartAssignment, ChartComplex, ChartMap, MapFlags,
    ProductData,
};
use crate::error::{Error, Result};
use crate::forms::PPForm;
use crate::linalg::{rvec_is_zero, rvec_sub};
use crate::orient::{relative_boundary_orientation, RelOrientation};
use crate::rat::Sign;

/// Push-forward along a proper map that is either a standard-form submersion
/// or chart-wise invertible.
pub fn pushforward(
    source: &ChartComplex,
    target: &ChartComplex,
    f: &ChartMap,
    o: &RelOrientation,
    a: &PPForm,
) -> Result<PPForm> {
    if f.flags.submersion_standard_form {
        a.pushforward_submersion(source, target, f, o)
    } else if f.flags.local_diffeo {
        a.pushforward_local_diffeo(source, target, f, o)
    } else {
        Err(Error::Unsupported(
            "push-forward requires a standard-form submersion or local diffeomorphism".into(),
        ))
    }
}

/// Relative dimension of a map between complexes.
pub fn rdim(source: &ChartComplex, target: &ChartComplex) -> i64 {
    source.dim as i64 - target.dim as i64
}

/// Composite of two standard-form submersions, with composite product data:
/// the fiber of the composite is (fiber of g) then (fiber of f), so fiber
/// integration of the composite matches g-after-f integration order.
pub fn compose_standard_submersions(
    m: &ChartComplex,
    _n: &ChartComplex,
    q: &ChartComplex,
    f: &ChartMap,
    g: &ChartMap,
) -> Result<ChartMap> {
    if !f.flags.submersion_standard_form || !g.flags.submersion_standard_form {
        return Err(Error::Unsupported("composition needs standard-form submersions".into()));
    }
    let mut assignments = Vec::with_capacity(f.assignments.len());
    let mut pds = Vec::with_capacity(f.assignments.len());
    for (ci, af) in f.assignments.iter().enumerate() {
        let ag = &g.assignments[af.target_chart];
        let pdf = f.product_datum(ci)?;
        let pdg = g.product_datum(af.target_chart)?;
        let fiber_f = m.dim - pdf.base_dim;
        let base_change = pdg.split.compose(&pdf.ident)?; // base_f coords -> (base_g, fiber_g)
        let split = base_change.product(&AffineMap::identity(fiber_f)).compose(&pdf.split)?;
        let pd = ProductData { split, base_dim: pdg.base_dim, ident: pdg.ident.clone() };
        assignments.push(ChartAssignment {
            target_chart: ag.target_chart,
            map: ag.map.compose(&af.map)?,
        });
        pds.push(Some(pd));
    }
    ChartMap::new(
        m,
        q,
        assignments,
        MapFlags {
            strongly_smooth: f.flags.strongly_smooth && g.flags.strongly_smooth,
            submersion_standard_form: true,
            local_diffeo: f.flags.local_diffeo && g.flags.local_diffeo,
            proper: true,
        },
        pds,
    )
}

/// Composite `g . f` where `g` is chart-wise invertible: product data of `f`
/// survives with the base identification composed into `g`.
pub fn compose_through_invertible(
    source: &ChartComplex,
    target: &ChartComplex,
    f: &ChartMap,
    g: &ChartMap,
) -> Result<ChartMap> {
    let plain = g.compose(f)?;
    if !f.flags.submersion_standard_form {
        return ChartMap::new(
            source,
            target,
            plain.assignments,
            MapFlags {
                local_diffeo: f.flags.local_diffeo && g.flags.local_diffeo,
                proper: true,
                ..Default::default()
            },
            vec![None; source.len()],
        );
    }
    let mut pds = Vec::with_capacity(source.len());
    for (ci, a) in f.assignments.iter().enumerate() {
        let pd = f.product_datum(ci)?;
        let next = &g.assignments[a.target_chart];
        if !next.map.is_invertible() {
            return Err(Error::Unsupported(
                "composite needs the outer map chart-wise invertible".into(),
            ));
        }
        pds.push(Some(ProductData {
            split: pd.split.clone(),
            base_dim: pd.base_dim,
            ident: next.map.compose(&pd.ident)?,
        }));
    }
    ChartMap::new(
        source,
        target,
        plain.assignments,
        MapFlags {
            submersion_standard_form: true,
            local_diffeo: f.flags.local_diffeo && g.flags.local_diffeo,
            proper: true,
            ..Default::default()
        },
        pds,
    )
}

/// The fiberwise boundary of a strongly smooth standard-form submersion: the
/// vertical part of the boundary, its inclusion, the restricted relative
/// boundary orientation, and the composite map to the target in standard
/// form.
pub struct VerticalBoundary {
    pub complex: ChartComplex,
    /// Inclusion into the source complex.
    pub inclusion: ChartMap,
    /// Relative boundary orientation restricted to the vertical part.
    pub rel_or: RelOrientation,
    /// The composite (f restricted to the fiberwise boundary), standard form.
    pub composite: ChartMap,
}

pub fn vertical_boundary(
    source: &ChartComplex,
    target: &ChartComplex,
    f: &ChartMap,
) -> Result<VerticalBoundary> {
    if !f.flags.strongly_smooth || !f.flags.submersion_standard_form {
        return Err(Error::Unsupported(
            "fiberwise boundary needs a strongly smooth standard-form submersion".into(),
        ));
    }
    let boundary = build_boundary(source)?;
    let horizontal = horizontal_flags(source, target, f, &boundary)?;
    let full_rel = relative_boundary_orientation(source, &boundary)?;
    let mut charts = Vec::new();
    let mut incl_assign = Vec::new();
    let mut rel_signs = Vec::new();
    let mut comp_assign = Vec::new();
    let mut comp_pd = Vec::new();
    for (bi, fid) in boundary.facets.iter().enumerate() {
        if horizontal[bi] {
            continue;
        }
        let parent = fid.parent_chart;
        let h = &source.charts[parent].halfspaces[fid.halfspace];
        let param = &boundary.inclusion.assignments[bi].map;
        let pd = f.product_datum(parent)?;
        let b = pd.base_dim;
        let fiber_dim = source.dim - b;
        // Facet functional in split coordinates.
        let split_inv = pd.split.inverse()?;
        let n_split = split_inv.matrix.transpose().mul_vec(&h.normal);
        let off_split =
            &h.offset - &crate::linalg::rvec_dot(&h.normal, &split_inv.offset);
        if !rvec_is_zero(&n_split[b..]) && !rvec_is_zero(&n_split[..b]) {
            return Err(Error::Geometry(
                "product chart facet with mixed base/fiber normal".into(),
            ));
        }
        if rvec_is_zero(&n_split[b..]) {
            return Err(Error::Geometry(
                "vertical facet classified as horizontal in split coordinates".into(),
            ));
        }
        // Parametrize the fiber facet and build the restricted splitting.
        let fiber_normal = n_split[b..].to_vec();
        let p_f = crate::polytope::Polytope::hyperplane_param(&fiber_normal, &off_split);
        let lin = &p_f.matrix;
        let gram = lin.transpose().mul_mat(lin);
        let left_inv = gram.inverse()?.mul_mat(&lin.transpose());
        let c_map = pd.split.compose(param)?;
        let base_part = AffineMap::coordinate_projection(source.dim, &(0..b).collect::<Vec<_>>())
            .compose(&c_map)?;
        let fiber_part = AffineMap::coordinate_projection(
            source.dim,
            &(b..source.dim).collect::<Vec<_>>(),
        )
        .compose(&c_map)?;
        // u -> left_inv (fiber_part(u) - p_f.offset)
        let fiber_param_coords = AffineMap::new(
            left_inv.mul_mat(&fiber_part.matrix),
            left_inv.mul_vec(&rvec_sub(&fiber_part.offset, &p_f.offset)),
        );
        let split_v = base_part.stack(&fiber_param_coords);
        if !split_v.is_invertible() {
            return Err(Error::Geometry("degenerate vertical splitting".into()));
        }
        // Consistency: ident . proj_base . split_v == f . param.
        let proj =
            AffineMap::coordinate_projection(source.dim - 1, &(0..b).collect::<Vec<_>>());
        let rebuilt = pd.ident.compose(&proj.compose(&split_v)?)?;
        let direct = f.assignments[parent].map.compose(param)?;
        if rebuilt != direct {
            return Err(Error::Geometry("vertical splitting does not factor the map".into()));
        }
        let _ = fiber_dim;
        charts.push(boundary.boundary.charts[bi].clone());
        incl_assign.push(ChartAssignment { target_chart: parent, map: param.clone() });
        rel_signs.push(full_rel.0[bi]);
        comp_assign.push(ChartAssignment {
            target_chart: f.assignments[parent].target_chart,
            map: direct,
        });
        comp_pd.push(Some(ProductData {
            split: split_v,
            base_dim: b,
            ident: pd.ident.clone(),
        }));
    }
    let complex = ChartComplex::new(source.dim - 1, charts)?;
    let inclusion = ChartMap::new(
        &complex,
        source,
        incl_assign,
        MapFlags { strongly_smooth: true, proper: true, ..Default::default() },
        vec![None; complex.len()],
    )?;
    let composite = ChartMap::new(
        &complex,
        target,
        comp_assign,
        MapFlags {
            strongly_smooth: true,
            submersion_standard_form: true,
            local_diffeo: complex.dim == target.dim,
            proper: true,
        },
        comp_pd,
    )?;
    Ok(VerticalBoundary {
        complex,
        inclusion,
        rel_or: RelOrientation(rel_signs),
        composite,
    })
}

/// Check two relative orientations for equality (same map).
pub fn rel_or_eq(a: &RelOrientation, b: &RelOrientation) -> bool {
    a.0 == b.0
}

/// Sign (-1)^k as a convenience.
pub fn parity_sign(k: i64) -> Sign {
    if k.rem_euclid(2) == 0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orient::Orientation;
    use crate::poly::Poly;
    use crate::polytope::Polytope;
    use crate::rat::Rat;

    fn r(v: i64) -> Rat {
        Rat::from_int(v)
    }

    fn box_complex(lo: &[i64], hi: &[i64]) -> ChartComplex {
        let lo: Vec<Rat> = lo.iter().map(|&v| r(v)).collect();
        let hi: Vec<Rat> = hi.iter().map(|&v| r(v)).collect();
        ChartComplex::single(Polytope::box_(&lo, &hi).unwrap()).unwrap()
    }

    fn drop_last_proj(src: &ChartComplex, tgt: &ChartComplex) -> ChartMap {
        let n = src.dim;
        ChartMap::new(
            src,
            tgt,
            vec![ChartAssignment {
                target_chart: 0,
                map: AffineMap::coordinate_projection(n, &(0..n - 1).collect::<Vec<_>>()),
            }],
            MapFlags {
                strongly_smooth: true,
                submersion_standard_form: true,
                proper: true,
                local_diffeo: false,
            },
            vec![Some(ProductData {
                split: AffineMap::identity(n),
                base_dim: n - 1,
                ident: AffineMap::identity(n - 1),
            })],
        )
        .unwrap()
    }

    #[test]
    fn composite_submersion_pushforward_agrees_with_iterated() {
        // cube -> square -> interval.
        let cube = box_complex(&[0, 0, 0], &[1, 1, 1]);
        let sq = box_complex(&[0, 0], &[1, 1]);
        let iv = box_complex(&[0], &[1]);
        let f = drop_last_proj(&cube, &sq);
        let g = drop_last_proj(&sq, &iv);
        let gf = compose_standard_submersions(&cube, &sq, &iv, &f, &g).unwrap();
        let of = RelOrientation::plus(1);
        let a = PPForm::monomial_form(&cube, &[0, 1, 2], Poly::monomial(vec![1, 1, 1], r(6)))
            .unwrap();
        let two_step = pushforward(
            &sq,
            &iv,
            &g,
            &of,
            &pushforward(&cube, &sq, &f, &of, &a).unwrap(),
        )
        .unwrap();
        let one_step = pushforward(&cube, &iv, &gf, &of, &a).unwrap();
        assert!(one_step.equals(&iv, &two_step).unwrap());
        // Sanity: the pushed value integrates to the full integral.
        let o = Orientation::standard(&iv);
        assert_eq!(one_step.integrate(&iv, &o).unwrap(), two_step.integrate(&iv, &o).unwrap());
    }

    #[test]
    fn vertical_boundary_of_square_projection() {
        let sq = box_complex(&[0, 0], &[1, 1]);
        let iv = box_complex(&[0], &[1]);
        let f = drop_last_proj(&sq, &iv);
        let vb = vertical_boundary(&sq, &iv, &f).unwrap();
        assert_eq!(vb.complex.len(), 2); // {y=0}, {y=1}
        assert_eq!(vb.complex.dim, 1);
        // Composite maps are chart-wise invertible (fiber dimension drops to 0).
        assert!(vb.composite.flags.submersion_standard_form);
        for a in &vb.composite.assignments {
            assert!(a.map.is_invertible());
        }
    }
}
