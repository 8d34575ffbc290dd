//! Boundary groupoids: facet-wise object and arrow spaces with restricted
//! structure maps. Requires depth preservation: every structure map must send
//! facets into facets (true for the quotient and trivial families; cover
//! groupoids with artificial overlap boundary are rejected honestly).

use super::functor::GroupoidFunctor;
use super::Groupoid;
use crate::affine::AffineMap;
use crate::chart::{build_boundary, BoundaryPresentation, ChartAssignment, ChartComplex, ChartMap, MapFlags};
use crate::error::{Error, Result};
use crate::linalg::rvec_sub;
use crate::orient::{relative_boundary_orientation, RelOrientation};


pub struct BoundaryGroupoid {
    pub groupoid: Groupoid,
    /// Inclusion maps into the parent groupoid (object and arrow level).
    pub incl0: ChartMap,
    pub incl1: ChartMap,
    /// Relative boundary orientations of the inclusions.
    pub rel_or0: RelOrientation,
    pub rel_or1: RelOrientation,
    /// Facet bookkeeping for the object and arrow boundaries.
    pub b0: BoundaryPresentation,
    pub b1: BoundaryPresentation,
}

/// Restrict a chart map to boundaries: each facet chart must map into a
/// unique facet of its target chart.
pub fn restrict_to_boundary(
    map: &ChartMap,
    src_boundary: &BoundaryPresentation,
    tgt: &ChartComplex,
    tgt_boundary: &BoundaryPresentation,
) -> Result<ChartMap> {
    let mut assignments = Vec::with_capacity(src_boundary.boundary.len());
    for (bi, fid) in src_boundary.facets.iter().enumerate() {
        let a = &map.assignments[fid.parent_chart];
        let param = &src_boundary.inclusion.assignments[bi].map;
        let composite = a.map.compose(param)?;
        let (tidx, restricted) =
            receiving_facet(&composite, a.target_chart, tgt, tgt_boundary)?;
        assignments.push(ChartAssignment { target_chart: tidx, map: restricted });
    }
    ChartMap::new(
        &src_boundary.boundary,
        &tgt_boundary.boundary,
        assignments,
        MapFlags { proper: true, ..Default::default() },
        vec![None; src_boundary.boundary.len()],
    )
}

/// Find the unique facet of `tgt.charts[tgt_chart]` containing the image of
/// an affine map out of facet coordinates, and factor the map through the
/// facet parametrization.
pub fn receiving_facet(
    composite: &AffineMap,
    tgt_chart: usize,
    tgt: &ChartComplex,
    tgt_boundary: &BoundaryPresentation,
) -> Result<(usize, AffineMap)> {
    let chart = &tgt.charts[tgt_chart];
    let mut found: Option<usize> = None;
    for (bj, fid) in tgt_boundary.facets.iter().enumerate() {
        if fid.parent_chart != tgt_chart {
            continue;
        }
        let h = &chart.halfspaces[fid.halfspace];
        // Slack of the facet functional after the composite: must vanish
        // identically for the image to lie in this facet.
        let lin = composite.matrix.transpose().mul_vec(&h.normal);
        let cst = &h.offset - &crate::linalg::rvec_dot(&h.normal, &composite.offset);
        if crate::linalg::rvec_is_zero(&lin) && cst.is_zero() {
            if found.is_some() {
                return Err(Error::Geometry(
                    "facet image lies in a corner; boundary restriction is ambiguous".into(),
                ));
            }
            found = Some(bj);
        }
    }
    let Some(bj) = found else {
        return Err(Error::Geometry(
            "structure map does not preserve boundary depth; no boundary groupoid".into(),
        ));
    };
    // Factor through the facet parametrization: param is injective affine,
    // so solve param(u) = composite(x) exactly.
    let param = &tgt_boundary.inclusion.assignments[bj].map;
    let lin = &param.matrix;
    let gram = lin.transpose().mul_mat(lin);
    let left = gram.inverse()?.mul_mat(&lin.transpose());
    let restricted = AffineMap::new(
        left.mul_mat(&composite.matrix),
        left.mul_vec(&rvec_sub(&composite.offset, &param.offset)),
    );
    // Exactness: param . restricted must reproduce the composite.
    if param.compose(&restricted)? != *composite {
        return Err(Error::Geometry("facet factorization failed".into()));
    }
    Ok((bj, restricted))
}

/// Build the boundary groupoid of a depth-preserving groupoid.
pub fn boundary_groupoid(g: &Groupoid) -> Result<BoundaryGroupoid> {
    let b0 = build_boundary(&g.x0)?;
    let b1 = build_boundary(&g.x1)?;
    let s_b = restrict_to_boundary(&g.s, &b1, &g.x0, &b0)?;
    let t_b = restrict_to_boundary(&g.t, &b1, &g.x0, &b0)?;
    let i_b = restrict_to_boundary(&g.inv, &b1, &g.x1, &b1)?;
    let e_b = restrict_to_boundary(&g.e, &b0, &g.x1, &b1)?;
    let parent_cp = g.composable.clone();
    let parent_m = g.m.clone();
    let b1c = b1.clone();
    let x1 = g.x1.clone();
    let groupoid = Groupoid::assemble(
        b0.boundary.clone(),
        b1.boundary.clone(),
        s_b,
        t_b,
        move |cp| {
            // Composition restricted to facets: embed the boundary pair into
            // the parent composable chart, apply m, factor through the
            // receiving facet of the composite's target chart.
            let mut assignments = Vec::with_capacity(cp.charts.len());
            for fc in &cp.charts {
                let a_facet = fc.m_chart;
                let b_facet = fc.p_chart;
                let a_parent = b1c.facets[a_facet].parent_chart;
                let b_parent = b1c.facets[b_facet].parent_chart;
                let Some((pidx, pchart)) = parent_cp
                    .charts
                    .iter()
                    .enumerate()
                    .find(|(_, c)| c.m_chart == a_parent && c.p_chart == b_parent)
                else {
                    return Err(Error::Geometry("missing parent composable chart".into()));
                };
                // Graph coordinates of the boundary pair are a-facet
                // coordinates; lift to parent graph coordinates.
                let lift = pchart
                    .to_m
                    .inverse()?
                    .compose(&b1c.inclusion.assignments[a_facet].map.compose(&fc.to_m)?)?;
                let composite = parent_m.assignments[pidx].map.compose(&lift)?;
                let m_target = parent_m.assignments[pidx].target_chart;
                let (tidx, restricted) = receiving_facet(&composite, m_target, &x1, &b1c)?;
                assignments.push(ChartAssignment { target_chart: tidx, map: restricted });
            }
            ChartMap::new(
                &cp.complex,
                &b1c.boundary,
                assignments,
                MapFlags { proper: true, ..Default::default() },
                vec![None; cp.charts.len()],
            )
        },
        i_b,
        e_b,
    )?;
    let rel_or0 = relative_boundary_orientation(&g.x0, &b0)?;
    let rel_or1 = relative_boundary_orientation(&g.x1, &b1)?;
    Ok(BoundaryGroupoid {
        groupoid,
        incl0: b0.inclusion.clone(),
        incl1: b1.inclusion.clone(),
        rel_or0,
        rel_or1,
        b0,
        b1,
    })
}

/// Extract the full sub-groupoid on subsets of object and arrow charts; the
/// subsets must be closed under all structure maps.
pub struct SubGroupoid {
    pub groupoid: Groupoid,
    /// Indices of the kept charts in the parent complexes.
    pub keep0: Vec<usize>,
    pub keep1: Vec<usize>,
    pub incl0: ChartMap,
    pub incl1: ChartMap,
}

pub fn subgroupoid(g: &Groupoid, keep0: &[usize], keep1: &[usize]) -> Result<SubGroupoid> {
    let mut index0 = vec![None; g.x0.len()];
    for (new, &old) in keep0.iter().enumerate() {
        index0[old] = Some(new);
    }
    let mut index1 = vec![None; g.x1.len()];
    for (new, &old) in keep1.iter().enumerate() {
        index1[old] = Some(new);
    }
    let x0 = ChartComplex::new(
        g.x0.dim,
        keep0.iter().map(|&i| g.x0.charts[i].clone()).collect(),
    )?;
    let x1 = ChartComplex::new(
        g.x1.dim,
        keep1.iter().map(|&i| g.x1.charts[i].clone()).collect(),
    )?;
    let restrict = |map: &ChartMap, from: &[usize], to_index: &[Option<usize>], role: &str| -> Result<Vec<ChartAssignment>> {
        from.iter()
            .map(|&old| {
                let a = &map.assignments[old];
                let Some(new_target) = to_index[a.target_chart] else {
                    return Err(Error::Validation(format!(
                        "{role} map leaves the sub-groupoid from chart {old}"
                    )));
                };
                Ok(ChartAssignment { target_chart: new_target, map: a.map.clone() })
            })
            .collect()
    };
    let ld = MapFlags { local_diffeo: true, proper: true, ..Default::default() };
    let s = ChartMap::new(&x1, &x0, restrict(&g.s, keep1, &index0, "source")?, ld, vec![None; x1.len()])?;
    let t = ChartMap::new(&x1, &x0, restrict(&g.t, keep1, &index0, "target")?, ld, vec![None; x1.len()])?;
    let e = ChartMap::new(&x0, &x1, restrict(&g.e, keep0, &index1, "identity")?, ld, vec![None; x0.len()])?;
    let inv = ChartMap::new(&x1, &x1, restrict(&g.inv, keep1, &index1, "inverse")?, ld, vec![None; x1.len()])?;
    let parent_cp = g.composable.clone();
    let parent_m = g.m.clone();
    let keep1v = keep1.to_vec();
    let index1v = index1.clone();
    let x1c = x1.clone();
    let groupoid = Groupoid::assemble(x0.clone(), x1.clone(), s, t, move |cp| {
        let mut assignments = Vec::with_capacity(cp.charts.len());
        for fc in &cp.charts {
            let a_old = keep1v[fc.m_chart];
            let b_old = keep1v[fc.p_chart];
            let Some((pidx, pchart)) = parent_cp
                .charts
                .iter()
                .enumerate()
                .find(|(_, c)| c.m_chart == a_old && c.p_chart == b_old)
            else {
                return Err(Error::Geometry("missing parent composable chart".into()));
            };
            let lift = pchart.to_m.inverse()?.compose(&fc.to_m)?;
            let map = parent_m.assignments[pidx].map.compose(&lift)?;
            let Some(new_target) = index1v[parent_m.assignments[pidx].target_chart] else {
                return Err(Error::Validation("composition leaves the sub-groupoid".into()));
            };
            assignments.push(ChartAssignment { target_chart: new_target, map });
        }
        ChartMap::new(&cp.complex, &x1c, assignments, ld, vec![None; cp.charts.len()])
    }, inv, e)?;
    let incl0 = ChartMap::new(
        &groupoid.x0,
        &g.x0,
        keep0
            .iter()
            .map(|&old| ChartAssignment { target_chart: old, map: AffineMap::identity(g.x0.dim) })
            .collect(),
        ld,
        vec![None; keep0.len()],
    )?;
    let incl1 = ChartMap::new(
        &groupoid.x1,
        &g.x1,
        keep1
            .iter()
            .map(|&old| ChartAssignment { target_chart: old, map: AffineMap::identity(g.x1.dim) })
            .collect(),
        ld,
        vec![None; keep1.len()],
    )?;
    Ok(SubGroupoid { groupoid, keep0: keep0.to_vec(), keep1: keep1.to_vec(), incl0, incl1 })
}

/// The fiberwise (vertical) boundary sub-groupoid of the boundary groupoid
/// with respect to a strongly smooth functor, together with the composite
/// inclusion data needed for boundary integration identities.
pub struct VerticalBoundaryGroupoid {
    pub sub: SubGroupoid,
    /// Inclusion functor into the parent groupoid X (not the boundary).
    pub incl: GroupoidFunctor,
    /// Relative boundary orientation restricted to the vertical charts.
    pub rel_or0: RelOrientation,
    pub rel_or1: RelOrientation,
}

pub fn vertical_boundary_groupoid(
    x: &Groupoid,
    y: &Groupoid,
    f: &GroupoidFunctor,
) -> Result<VerticalBoundaryGroupoid> {
    let bg = boundary_groupoid(x)?;
    let hor0 = crate::chart::horizontal_flags(&x.x0, &y.x0, &f.f0, &bg.b0)?;
    let hor1 = crate::chart::horizontal_flags(&x.x1, &y.x1, &f.f1, &bg.b1)?;
    let keep0: Vec<usize> = hor0.iter().enumerate().filter(|(_, &h)| !h).map(|(i, _)| i).collect();
    let keep1: Vec<usize> = hor1.iter().enumerate().filter(|(_, &h)| !h).map(|(i, _)| i).collect();
    let sub = subgroupoid(&bg.groupoid, &keep0, &keep1)?;
    let incl0 = bg.incl0.compose(&sub.incl0)?;
    let incl1 = bg.incl1.compose(&sub.incl1)?;
    let rel_or0 = RelOrientation(keep0.iter().map(|&i| bg.rel_or0.0[i]).collect());
    let rel_or1 = RelOrientation(keep1.iter().map(|&i| bg.rel_or1.0[i]).collect());
    Ok(VerticalBoundaryGroupoid {
        sub,
        incl: GroupoidFunctor { f0: incl0, f1: incl1, proper: true, submersion: false },
        rel_or0,
        rel_or1,
    })
}
