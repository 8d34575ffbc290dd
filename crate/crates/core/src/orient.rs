//! Orientations and relative orientations as per-chart signs.
//!
//! Charts are connected and carry ambient coordinates, so an orientation is a
//! sign against the standard coordinate orientation, and a relative
//! orientation of a map is a sign against the standard trivializations on
//! both sides. All conventions below are pinned by determinant computations
//! and exercised by the sign suites.

use crate::chart::{BoundaryPresentation, ChartComplex, ChartMap};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::rat::Sign;

/// One sign per chart, against the standard ambient orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation(pub Vec<Sign>);

impl Orientation {
    pub fn standard(complex: &ChartComplex) -> Self {
        Orientation(vec![Sign::Plus; complex.len()])
    }

    pub fn reversed(&self) -> Self {
        Orientation(self.0.iter().map(|s| s.flip()).collect())
    }
}

/// One sign per source chart of a map, against the standard trivialization
/// of the relative orientation system by ambient coordinates on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelOrientation(pub Vec<Sign>);

impl RelOrientation {
    pub fn plus(n: usize) -> Self {
        RelOrientation(vec![Sign::Plus; n])
    }

    pub fn reversed(&self) -> Self {
        RelOrientation(self.0.iter().map(|s| s.flip()).collect())
    }

    /// The canonical relative orientation of a local diffeomorphism: per
    /// chart, the sign of the determinant of the affine part.
    pub fn canonical(map: &ChartMap) -> Result<RelOrientation> {
        let signs = map
            .assignments
            .iter()
            .map(|a| a.map.det_sign())
            .collect::<Result<Vec<_>>>()?;
        Ok(RelOrientation(signs))
    }

    /// Composite relative orientation for `g . f`: per source chart of `f`,
    /// the product of the `f`-sign with the `g`-sign on the chart `f` hits.
    pub fn compose(o_g: &RelOrientation, o_f: &RelOrientation, f: &ChartMap) -> RelOrientation {
        RelOrientation(
            f.assignments
                .iter()
                .enumerate()
                .map(|(i, a)| o_f.0[i] * o_g.0[a.target_chart])
                .collect(),
        )
    }

    /// The relative orientation induced by orientations on source and target:
    /// source sign times the sign of the target chart the source chart maps to.
    pub fn induced(o_src: &Orientation, o_tgt: &Orientation, f: &ChartMap) -> RelOrientation {
        RelOrientation(
            f.assignments
                .iter()
                .enumerate()
                .map(|(i, a)| o_src.0[i] * o_tgt.0[a.target_chart])
                .collect(),
        )
    }

    /// Given an orientation downstairs, the orientation upstairs that this
    /// relative orientation induces.
    pub fn orient_source(&self, o_tgt: &Orientation, f: &ChartMap) -> Orientation {
        Orientation(
            f.assignments
                .iter()
                .enumerate()
                .map(|(i, a)| self.0[i] * o_tgt.0[a.target_chart])
                .collect(),
        )
    }
}

/// The relative boundary orientation of the inclusion: per facet chart, the
/// sign of det [outward normal | facet frame], where the facet frame is the
/// linear part of the facet parametrization. Convention: a facet basis B is
/// positive when (N, B) is a positive basis of the parent chart.
pub fn relative_boundary_orientation(
    m: &ChartComplex,
    boundary: &BoundaryPresentation,
) -> Result<RelOrientation> {
    let mut signs = Vec::with_capacity(boundary.facets.len());
    for (bi, fid) in boundary.facets.iter().enumerate() {
        let chart = &m.charts[fid.parent_chart];
        let h = &chart.halfspaces[fid.halfspace];
        let param = &boundary.inclusion.assignments[bi].map;
        let mut cols = vec![h.normal.clone()];
        for j in 0..param.matrix.cols {
            cols.push(param.matrix.col(j));
        }
        let det = Mat::from_cols(cols).det();
        signs.push(Sign::from_det(&det).map_err(|_| {
            Error::Geometry(format!("degenerate facet frame on boundary chart {bi}"))
        })?);
    }
    Ok(RelOrientation(signs))
}

/// Induced orientation of the boundary: parent sign times the relative
/// boundary orientation sign.
pub fn boundary_orientation(
    m: &ChartComplex,
    boundary: &BoundaryPresentation,
    o: &Orientation,
) -> Result<Orientation> {
    let rel = relative_boundary_orientation(m, boundary)?;
    Ok(Orientation(
        boundary
            .facets
            .iter()
            .zip(&rel.0)
            .map(|(fid, s)| o.0[fid.parent_chart] * *s)
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::build_boundary;
    use crate::polytope::Polytope;
    use crate::rat::Rat;

    #[test]
    fn interval_boundary_signs() {
        // On [0,1] with the standard orientation, the facet at 1 is positive
        // and the facet at 0 negative.
        let m = ChartComplex::single(Polytope::interval(0, 1)).unwrap();
        let b = build_boundary(&m).unwrap();
        let o = boundary_orientation(&m, &b, &Orientation::standard(&m)).unwrap();
        for (bi, fid) in b.facets.iter().enumerate() {
            let h = &m.charts[0].halfspaces[fid.halfspace];
            if h.normal[0].is_positive() {
                assert_eq!(o.0[bi], Sign::Plus); // facet {1}
            } else {
                assert_eq!(o.0[bi], Sign::Minus); // facet {0}
            }
        }
        // Orientation reversal flips both facet signs.
        let o_rev =
            boundary_orientation(&m, &b, &Orientation::standard(&m).reversed()).unwrap();
        assert_eq!(o_rev.0, o.reversed().0);
    }

    #[test]
    fn canonical_orientation_of_reflection() {
        let m = ChartComplex::single(Polytope::interval(-1, 1)).unwrap();
        let refl = ChartMap::new(
            &m,
            &m,
            vec![crate::chart::ChartAssignment {
                target_chart: 0,
                map: crate::affine::AffineMap::new(
                    Mat::from_rows(vec![vec![Rat::from_int(-1)]]),
                    vec![Rat::zero()],
                ),
            }],
            crate::chart::MapFlags { local_diffeo: true, proper: true, ..Default::default() },
            vec![None],
        )
        .unwrap();
        assert_eq!(RelOrientation::canonical(&refl).unwrap().0, vec![Sign::Minus]);
        let id = ChartMap::identity(&m);
        assert_eq!(RelOrientation::canonical(&id).unwrap().0, vec![Sign::Plus]);
    }
}
