//! Manifolds with corners as complexes of full-dimensional polytope charts,
//! and affine maps between them.

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::linalg::rvec_is_zero;
use crate::polytope::Polytope;
/// A manifold with corners of dimension `dim`: a finite disjoint union of
/// compact polytope charts, each full-dimensional in its own copy of
/// rational `dim`-space.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartComplex {
    pub dim: usize,
    pub charts: Vec<Polytope>,
}

impl ChartComplex {
    pub fn new(dim: usize, charts: Vec<Polytope>) -> Result<Self> {
        for (i, c) in charts.iter().enumerate() {
            if c.ambient_dim != dim {
                return Err(Error::Dim(format!("chart {i} lives in dim {}", c.ambient_dim)));
            }
            if !c.is_full_dim() {
                return Err(Error::Geometry(format!("chart {i} is not full-dimensional")));
            }
        }
        Ok(ChartComplex { dim, charts })
    }

    pub fn empty(dim: usize) -> Self {
        ChartComplex { dim, charts: vec![] }
    }

    pub fn single(chart: Polytope) -> Result<Self> {
        let dim = chart.ambient_dim;
        ChartComplex::new(dim, vec![chart])
    }

    pub fn point() -> Self {
        ChartComplex::single(Polytope::point()).expect("point complex")
    }

    pub fn len(&self) -> usize {
        self.charts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charts.is_empty()
    }

    /// Disjoint union, preserving chart order (self first).
    pub fn disjoint_union(&self, other: &ChartComplex) -> Result<ChartComplex> {
        if self.dim != other.dim {
            return Err(Error::Dim("disjoint union of different dimensions".into()));
        }
        let mut charts = self.charts.clone();
        charts.extend(other.charts.iter().cloned());
        ChartComplex::new(self.dim, charts)
    }
}

/// Certificate that a chart map is, on one chart, an affine change of
/// coordinates followed by a coordinate projection: `map = ident . proj .
/// split` where `split` identifies the chart with a product polytope
/// `Base x Fiber` and `ident` identifies the base factor with its image.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductData {
    /// Invertible self-map of the chart's ambient space; sends the chart to a
    /// product polytope with base coordinates first.
    pub split: AffineMap,
    pub base_dim: usize,
    /// Invertible map from base coordinates into the target chart's space.
    pub ident: AffineMap,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MapFlags {
    #[serde(default)]
    pub strongly_smooth: bool,
    #[serde(default)]
    pub submersion_standard_form: bool,
    #[serde(default)]
    pub local_diffeo: bool,
    #[serde(default)]
    pub proper: bool,
}

/// Per-chart assignment of a map of chart complexes.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartAssignment {
    pub target_chart: usize,
    pub map: AffineMap,
}

/// A map of chart complexes: per source chart, an affine map into one target
/// chart. Flags are validated at construction against the exact geometry.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartMap {
    pub assignments: Vec<ChartAssignment>,
    pub flags: MapFlags,
    pub product_data: Vec<Option<ProductData>>,
}

impl ChartMap {
    /// Validating constructor. `flags` are the declared flags; each declared
    /// flag is checked exactly and an invalid declaration is an error.
    pub fn new(
        source: &ChartComplex,
        target: &ChartComplex,
        assignments: Vec<ChartAssignment>,
        flags: MapFlags,
        product_data: Vec<Option<ProductData>>,
    ) -> Result<ChartMap> {
        if assignments.len() != source.len() {
            return Err(Error::Validation(format!(
                "{} assignments for {} source charts",
                assignments.len(),
                source.len()
            )));
        }
        if product_data.len() != assignments.len() {
            return Err(Error::Validation("product data arity".into()));
        }
        for (i, a) in assignments.iter().enumerate() {
            if a.target_chart >= target.len() {
                return Err(Error::Validation(format!("chart {i}: bad target index")));
            }
            if a.map.domain_dim() != source.dim || a.map.codomain_dim() != target.dim {
                return Err(Error::Dim(format!("chart {i}: affine map shape")));
            }
            // Image containment: convexity reduces it to the vertices.
            let tgt = &target.charts[a.target_chart];
            for v in source.charts[i].vertices() {
                if !tgt.contains(&a.map.apply(v)) {
                    return Err(Error::Validation(format!(
                        "chart {i}: image leaves target chart {}",
                        a.target_chart
                    )));
                }
            }
        }
        let map = ChartMap { assignments, flags, product_data };
        if flags.local_diffeo {
            for (i, a) in map.assignments.iter().enumerate() {
                if !a.map.is_invertible() {
                    return Err(Error::Validation(format!(
                        "chart {i}: declared local diffeo but affine part is singular"
                    )));
                }
            }
        }
        if flags.submersion_standard_form {
            map.validate_product_data(source, target)?;
        }
        if flags.strongly_smooth {
            map.validate_strongly_smooth(source, target)?;
        }
        // Properness follows from compactness of charts, which the complex
        // constructor enforces; the flag carries no extra condition here.
        Ok(map)
    }

    pub fn identity(complex: &ChartComplex) -> ChartMap {
        let assignments = (0..complex.len())
            .map(|i| ChartAssignment { target_chart: i, map: AffineMap::identity(complex.dim) })
            .collect();
        ChartMap {
            assignments,
            flags: MapFlags {
                strongly_smooth: true,
                submersion_standard_form: true,
                local_diffeo: true,
                proper: true,
            },
            product_data: (0..complex.len())
                .map(|_| {
                    Some(ProductData {
                        split: AffineMap::identity(complex.dim),
                        base_dim: complex.dim,
                        ident: AffineMap::identity(complex.dim),
                    })
                })
                .collect(),
        }
    }

    /// The unique map to the point complex.
    pub fn to_point(source: &ChartComplex) -> ChartMap {
        let assignments = (0..source.len())
            .map(|_| ChartAssignment {
                target_chart: 0,
                map: AffineMap::constant(source.dim, vec![]),
            })
            .collect();
        ChartMap {
            assignments,
            flags: MapFlags {
                strongly_smooth: true,
                submersion_standard_form: true,
                local_diffeo: source.dim == 0,
                proper: true,
            },
            product_data: (0..source.len())
                .map(|_| {
                    Some(ProductData {
                        split: AffineMap::identity(source.dim),
                        base_dim: 0,
                        ident: AffineMap::identity(0),
                    })
                })
                .collect(),
        }
    }

    /// Composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &ChartMap) -> Result<ChartMap> {
        let assignments = other
            .assignments
            .iter()
            .map(|a| {
                let next = &self.assignments[a.target_chart];
                Ok(ChartAssignment {
                    target_chart: next.target_chart,
                    map: next.map.compose(&a.map)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ChartMap {
            assignments,
            flags: MapFlags {
                strongly_smooth: self.flags.strongly_smooth && other.flags.strongly_smooth,
                submersion_standard_form: false,
                local_diffeo: self.flags.local_diffeo && other.flags.local_diffeo,
                proper: self.flags.proper && other.flags.proper,
            },
            product_data: vec![None; other.assignments.len()],
        })
    }

    /// Inverse of a chart-wise affine bijection whose chart assignment is a
    /// bijection on chart indices.
    pub fn inverse(&self, source: &ChartComplex, target: &ChartComplex) -> Result<ChartMap> {
        if source.len() != target.len() {
            return Err(Error::Unsupported("inverse: chart counts differ".into()));
        }
        let mut assignments = vec![None; target.len()];
        for (i, a) in self.assignments.iter().enumerate() {
            if assignments[a.target_chart].is_some() {
                return Err(Error::Unsupported("inverse: chart assignment not bijective".into()));
            }
            assignments[a.target_chart] =
                Some(ChartAssignment { target_chart: i, map: a.map.inverse()? });
        }
        let assignments: Vec<_> = assignments
            .into_iter()
            .map(|a| a.ok_or_else(|| Error::Unsupported("inverse: unassigned chart".into())))
            .collect::<Result<_>>()?;
        ChartMap::new(
            target,
            source,
            assignments,
            MapFlags { local_diffeo: true, proper: true, ..Default::default() },
            vec![None; target.len()],
        )
    }

    pub fn is_local_diffeo(&self) -> bool {
        self.flags.local_diffeo
    }

    /// Exact product-structure validation for standard-form submersions.
    pub fn validate_product_data(
        &self,
        source: &ChartComplex,
        target: &ChartComplex,
    ) -> Result<()> {
        for (i, a) in self.assignments.iter().enumerate() {
            let Some(pd) = &self.product_data[i] else {
                return Err(Error::Validation(format!(
                    "chart {i}: standard-form submersion without product data"
                )));
            };
            if !pd.split.is_invertible() {
                return Err(Error::Validation(format!("chart {i}: split map singular")));
            }
            if pd.ident.domain_dim() != pd.base_dim
                || pd.ident.codomain_dim() != target.dim
                || pd.base_dim != target.dim
                || !pd.ident.is_invertible()
            {
                return Err(Error::Validation(format!(
                    "chart {i}: base identification must be invertible onto target space"
                )));
            }
            // map == ident . proj_base . split, exactly.
            let proj = AffineMap::coordinate_projection(source.dim, &(0..pd.base_dim).collect::<Vec<_>>());
            let rebuilt = pd.ident.compose(&proj.compose(&pd.split)?)?;
            if rebuilt != a.map {
                return Err(Error::Validation(format!(
                    "chart {i}: product data does not reproduce the map"
                )));
            }
            // split(chart) must be a product polytope: every canonical
            // halfspace involves only base or only fiber coordinates.
            let img = source.charts[i].image_invertible(&pd.split)?;
            for h in &img.halfspaces {
                let base_part = !rvec_is_zero(&h.normal[..pd.base_dim]);
                let fiber_part = !rvec_is_zero(&h.normal[pd.base_dim..]);
                if base_part && fiber_part {
                    return Err(Error::Validation(format!(
                        "chart {i}: split image is not a product polytope"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Standard-form-submersion data accessor.
    pub fn product_datum(&self, chart: usize) -> Result<&ProductData> {
        self.product_data[chart]
            .as_ref()
            .ok_or_else(|| Error::Unsupported(format!("chart {chart}: no product data")))
    }

    /// Exact strong-smoothness check: for every source chart and every facet
    /// functional `b` of its target chart, the composite `b . f` either
    /// vanishes identically or its zero set meets the chart in a facet (or
    /// not at all).
    pub fn validate_strongly_smooth(
        &self,
        source: &ChartComplex,
        target: &ChartComplex,
    ) -> Result<()> {
        for (i, a) in self.assignments.iter().enumerate() {
            let chart = &source.charts[i];
            let tgt = &target.charts[a.target_chart];
            for h in &tgt.halfspaces {
                // slack(x) = offset - normal . f(x), nonnegative on the chart.
                let lin = a.map.matrix.transpose().mul_vec(&h.normal);
                let cst = &h.offset - &crate::linalg::rvec_dot(&h.normal, &a.map.offset);
                if rvec_is_zero(&lin) {
                    continue; // constant slack: either identically zero or never zero
                }
                let cut = chart.cut_with_equality(&lin, &cst)?;
                if cut.is_empty() {
                    continue;
                }
                match cut.dim() {
                    Some(d) if d + 1 == source.dim => {} // a facet: boundary defining
                    Some(d) if d == source.dim => {
                        return Err(Error::Validation(format!(
                            "chart {i}: boundary functional vanishes on a full-dimensional set"
                        )));
                    }
                    _ => {
                        return Err(Error::Validation(format!(
                            "chart {i}: target boundary functional vanishes only on a corner; \
                             map is not strongly smooth"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Identifier of one facet of one chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FacetId {
    pub parent_chart: usize,
    pub halfspace: usize,
}

/// The boundary of a chart complex: one (dim-1)-chart per facet of each
/// chart, with the inclusion map into the parent complex.
#[derive(Clone, Debug)]
pub struct BoundaryPresentation {
    pub boundary: ChartComplex,
    pub inclusion: ChartMap,
    pub facets: Vec<FacetId>,
}

/// Build the boundary presentation. Corners of depth k are covered by k
/// facet charts (counted with multiplicity through their closures).
pub fn build_boundary(m: &ChartComplex) -> Result<BoundaryPresentation> {
    if m.dim == 0 {
        return Ok(BoundaryPresentation {
            boundary: ChartComplex::empty(0),
            inclusion: ChartMap { assignments: vec![], flags: MapFlags::default(), product_data: vec![] },
            facets: vec![],
        });
    }
    let mut charts = Vec::new();
    let mut assignments = Vec::new();
    let mut facets = Vec::new();
    for (ci, chart) in m.charts.iter().enumerate() {
        for hi in 0..chart.halfspaces.len() {
            let (facet, param) = chart.facet(hi)?;
            if facet.is_empty() || facet.dim() != Some(m.dim - 1) {
                return Err(Error::Geometry(format!(
                    "chart {ci}: halfspace {hi} does not cut a facet"
                )));
            }
            charts.push(facet);
            assignments.push(ChartAssignment { target_chart: ci, map: param });
            facets.push(FacetId { parent_chart: ci, halfspace: hi });
        }
    }
    let boundary = ChartComplex::new(m.dim - 1, charts)?;
    let inclusion = ChartMap::new(
        &boundary,
        m,
        assignments,
        MapFlags { strongly_smooth: true, proper: true, ..Default::default() },
        vec![None; boundary.len()],
    )?;
    Ok(BoundaryPresentation { boundary, inclusion, facets })
}

/// Vertical/horizontal decomposition of the boundary with respect to a
/// strongly smooth map: a facet is horizontal when some target facet
/// functional pulls back to a boundary-defining functional along it.
/// Returns `true` per boundary chart iff the facet is horizontal.
pub fn horizontal_flags(
    source: &ChartComplex,
    target: &ChartComplex,
    f: &ChartMap,
    boundary: &BoundaryPresentation,
) -> Result<Vec<bool>> {
    if !f.flags.strongly_smooth {
        return Err(Error::Validation("boundary decomposition needs a strongly smooth map".into()));
    }
    let mut out = Vec::with_capacity(boundary.facets.len());
    for (bi, fid) in boundary.facets.iter().enumerate() {
        let a = &f.assignments[fid.parent_chart];
        let tgt = &target.charts[a.target_chart];
        let param = &boundary.inclusion.assignments[bi].map;
        let mut horizontal = false;
        for h in &tgt.halfspaces {
            // slack of the target facet functional composed with f, on the facet.
            let lin = a.map.matrix.transpose().mul_vec(&h.normal);
            if rvec_is_zero(&lin) {
                continue; // b . f identically constant; never boundary defining
            }
            let cst = &h.offset - &crate::linalg::rvec_dot(&h.normal, &a.map.offset);
            // Restrict to the facet: compose with the facet parametrization.
            let rest_lin = param.matrix.transpose().mul_vec(&lin);
            let rest_cst = &cst - &crate::linalg::rvec_dot(&lin, &param.offset);
            if rvec_is_zero(&rest_lin) && rest_cst.is_zero() {
                horizontal = true;
                break;
            }
        }
        let _ = source;
        out.push(horizontal);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::Rat;

    fn r(v: i64) -> Rat {
        Rat::from_int(v)
    }

    fn square() -> ChartComplex {
        ChartComplex::single(Polytope::box_(&[r(0), r(0)], &[r(1), r(1)]).unwrap()).unwrap()
    }

    fn interval() -> ChartComplex {
        ChartComplex::single(Polytope::interval(0, 1)).unwrap()
    }

    fn proj1(src: &ChartComplex, tgt: &ChartComplex) -> ChartMap {
        ChartMap::new(
            src,
            tgt,
            vec![ChartAssignment {
                target_chart: 0,
                map: AffineMap::coordinate_projection(2, &[0]),
            }],
            MapFlags {
                strongly_smooth: true,
                submersion_standard_form: true,
                proper: true,
                local_diffeo: false,
            },
            vec![Some(ProductData {
                split: AffineMap::identity(2),
                base_dim: 1,
                ident: AffineMap::identity(1),
            })],
        )
        .unwrap()
    }

    #[test]
    fn boundary_counts() {
        let sq = square();
        let b = build_boundary(&sq).unwrap();
        assert_eq!(b.boundary.len(), 4);
        let iv = interval();
        let b = build_boundary(&iv).unwrap();
        assert_eq!(b.boundary.len(), 2);
        assert_eq!(b.boundary.dim, 0);
        let cube = ChartComplex::single(
            Polytope::box_(&[r(0), r(0), r(0)], &[r(1), r(1), r(1)]).unwrap(),
        )
        .unwrap();
        let b = build_boundary(&cube).unwrap();
        assert_eq!(b.boundary.len(), 6);
        // The corner (0,0,0) lies in the closures of exactly 3 facet charts.
        let corner = vec![r(0), r(0), r(0)];
        let mut count = 0;
        for (bi, a) in b.inclusion.assignments.iter().enumerate() {
            let chart = &b.boundary.charts[bi];
            if chart.vertices().iter().any(|v| a.map.apply(v) == corner) {
                count += 1;
            }
        }
        assert_eq!(count, 3);
    }

    #[test]
    fn vertical_horizontal_split_of_projection() {
        let sq = square();
        let iv = interval();
        let f = proj1(&sq, &iv);
        let b = build_boundary(&sq).unwrap();
        let hor = horizontal_flags(&sq, &iv, &f, &b).unwrap();
        // Horizontal: facets mapping into the target boundary {x=0},{x=1};
        // vertical: {y=0},{y=1}.
        let mut hor_normals = Vec::new();
        let mut vert_normals = Vec::new();
        for (bi, fid) in b.facets.iter().enumerate() {
            let n = &sq.charts[0].halfspaces[fid.halfspace].normal;
            if hor[bi] {
                hor_normals.push(n.clone());
            } else {
                vert_normals.push(n.clone());
            }
        }
        assert_eq!(hor.len(), 4);
        assert!(hor_normals.iter().all(|n| n[1].is_zero()));
        assert!(vert_normals.iter().all(|n| n[0].is_zero()));
        assert_eq!(hor_normals.len(), 2);
        assert_eq!(vert_normals.len(), 2);
    }

    #[test]
    fn identity_map_has_fully_horizontal_boundary() {
        let sq = square();
        let id = ChartMap::identity(&sq);
        let b = build_boundary(&sq).unwrap();
        let hor = horizontal_flags(&sq, &sq, &id, &b).unwrap();
        assert!(hor.iter().all(|&h| h));
    }

    #[test]
    fn constant_map_has_fully_vertical_boundary() {
        let sq = square();
        let iv = interval();
        let f = ChartMap::new(
            &sq,
            &iv,
            vec![ChartAssignment {
                target_chart: 0,
                map: AffineMap::constant(2, vec![Rat::new(1, 2)]),
            }],
            MapFlags { strongly_smooth: true, proper: true, ..Default::default() },
            vec![None],
        )
        .unwrap();
        let b = build_boundary(&sq).unwrap();
        let hor = horizontal_flags(&sq, &iv, &f, &b).unwrap();
        assert!(hor.iter().all(|&h| !h));
    }

    #[test]
    fn strongly_smooth_rejects_diagonal_functional() {
        // f(x, y) = (x + y)/2 into [0,1]: the facet functional x of the
        // target vanishes only at the corner (0,0).
        let sq = square();
        let iv = interval();
        let err = ChartMap::new(
            &sq,
            &iv,
            vec![ChartAssignment {
                target_chart: 0,
                map: AffineMap::new(
                    crate::linalg::Mat::from_rows(vec![vec![Rat::new(1, 2), Rat::new(1, 2)]]),
                    vec![r(0)],
                ),
            }],
            MapFlags { strongly_smooth: true, proper: true, ..Default::default() },
            vec![None],
        );
        assert!(err.is_err());
    }

    #[test]
    fn image_containment_enforced() {
        let sq = square();
        let iv = interval();
        let err = ChartMap::new(
            &sq,
            &iv,
            vec![ChartAssignment {
                target_chart: 0,
                map: AffineMap::new(
                    crate::linalg::Mat::from_rows(vec![vec![r(2), r(0)]]),
                    vec![r(0)],
                ),
            }],
            MapFlags::default(),
            vec![None],
        );
        assert!(err.is_err());
    }
}
