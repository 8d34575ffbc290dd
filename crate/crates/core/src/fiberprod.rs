//! Fiber products of transverse chart maps, in graph coordinates, together
//! with the orientation calculus for pull-back diagrams.
//!
//! Supported shapes: at least one leg is a chart-wise invertible map or a
//! standard-form submersion. These are the shapes the groupoid constructions
//! need (structure maps are chart-wise invertible; push-forward legs are
//! standard-form submersions) and the only ones closed over affine data.

use crate::affine::AffineMap;
use crate::chart::{ChartAssignment, ChartComplex, ChartMap, MapFlags, ProductData};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::orient::{Orientation, RelOrientation};
use crate::polytope::Polytope;
use crate::rat::{Rat, Sign};

/// One chart of a fiber product `M x_N P`, realized in graph coordinates.
#[derive(Clone, Debug)]
pub struct FpChart {
    pub m_chart: usize,
    pub p_chart: usize,
    /// Affine maps from graph coordinates to the two factor chart spaces.
    pub to_m: AffineMap,
    pub to_p: AffineMap,
    /// Left inverse of the stacked embedding (x_m; x_p) -> graph coordinates.
    pub recover: AffineMap,
}

#[derive(Clone, Debug)]
pub struct FiberProduct {
    pub complex: ChartComplex,
    pub charts: Vec<FpChart>,
    /// Projection onto the first factor (q in the pull-back square).
    pub proj_m: ChartMap,
    /// Projection onto the second factor (p in the pull-back square).
    pub proj_p: ChartMap,
    pub dim_m: usize,
    pub dim_p: usize,
    pub dim_n: usize,
}

/// Fiber product of `f : M -> N` and `g : P -> N` over chart pairs with a
/// common target chart. Empty and lower-dimensional chart pairs are dropped.
pub fn fiber_product(
    m: &ChartComplex,
    f: &ChartMap,
    p: &ChartComplex,
    g: &ChartMap,
    n: &ChartComplex,
) -> Result<FiberProduct> {
    let dim_q = (m.dim + p.dim)
        .checked_sub(n.dim)
        .ok_or_else(|| Error::Dim("fiber product of maps from too-small spaces".into()))?;
    let mut charts = Vec::new();
    let mut polys = Vec::new();
    let mut m_assign = Vec::new();
    let mut p_assign = Vec::new();
    let mut m_pd: Vec<Option<ProductData>> = Vec::new();
    let mut p_pd: Vec<Option<ProductData>> = Vec::new();
    for (cm, am) in f.assignments.iter().enumerate() {
        for (cp, ap) in g.assignments.iter().enumerate() {
            if am.target_chart != ap.target_chart {
                continue;
            }
            // Exact transversality: df + (-dg) surjective onto the target.
            let stacked = am.map.matrix.hstack(&neg_mat(&ap.map.matrix));
            if stacked.rank() != n.dim {
                return Err(Error::Validation(format!(
                    "chart pair ({cm},{cp}): maps are not transverse"
                )));
            }
            let built = build_pair(m, cm, am, p, cp, ap, g, f, dim_q)?;
            let Some(built) = built else {
                continue;
            };
            polys.push(built.polytope);
            charts.push(FpChart {
                m_chart: cm,
                p_chart: cp,
                to_m: built.to_m.clone(),
                to_p: built.to_p.clone(),
                recover: built.recover,
            });
            m_assign.push(ChartAssignment { target_chart: cm, map: built.to_m });
            p_assign.push(ChartAssignment { target_chart: cp, map: built.to_p });
            m_pd.push(built.m_product);
            p_pd.push(built.p_product);
        }
    }
    let complex = ChartComplex::new(dim_q, polys)?;
    let proj_m = make_projection(&complex, m, m_assign, m_pd)?;
    let proj_p = make_projection(&complex, p, p_assign, p_pd)?;
    Ok(FiberProduct {
        complex,
        charts,
        proj_m,
        proj_p,
        dim_m: m.dim,
        dim_p: p.dim,
        dim_n: n.dim,
    })
}

/// Builds a projection chart map, keeping standard-form product data only
/// when it validates exactly.
fn make_projection(
    source: &ChartComplex,
    target: &ChartComplex,
    assignments: Vec<ChartAssignment>,
    product_data: Vec<Option<ProductData>>,
) -> Result<ChartMap> {
    let n = assignments.len();
    let local_diffeo = !assignments.is_empty() && assignments.iter().all(|a| a.map.is_invertible());
    let with_pd = !product_data.is_empty() && product_data.iter().all(|d| d.is_some());
    if with_pd {
        let flags = MapFlags {
            local_diffeo,
            submersion_standard_form: true,
            strongly_smooth: false,
            proper: true,
        };
        if let Ok(map) =
            ChartMap::new(source, target, assignments.clone(), flags, product_data.clone())
        {
            return Ok(map);
        }
    }
    ChartMap::new(
        source,
        target,
        assignments,
        MapFlags { local_diffeo, proper: true, ..Default::default() },
        vec![None; n],
    )
}

struct BuiltChart {
    polytope: Polytope,
    to_m: AffineMap,
    to_p: AffineMap,
    recover: AffineMap,
    m_product: Option<ProductData>,
    p_product: Option<ProductData>,
}

#[allow(clippy::too_many_arguments)]
fn build_pair(
    m: &ChartComplex,
    cm: usize,
    am: &ChartAssignment,
    p: &ChartComplex,
    cp: usize,
    ap: &ChartAssignment,
    g: &ChartMap,
    f: &ChartMap,
    dim_q: usize,
) -> Result<Option<BuiltChart>> {
    let chart_m = &m.charts[cm];
    let chart_p = &p.charts[cp];
    // Preferred shapes, in order: g invertible, g standard form, f invertible,
    // f standard form.
    if ap.map.is_invertible() {
        // Graph coordinates = M coordinates; the second component is
        // determined by g^{-1} . f.
        let to_p = ap.map.inverse()?.compose(&am.map)?;
        let q = chart_p.affine_preimage(&to_p, chart_m)?;
        if !q.is_full_dim() || q.dim() != Some(dim_q) {
            return Ok(None);
        }
        let to_m = AffineMap::identity(m.dim);
        let recover = AffineMap::coordinate_projection(m.dim + p.dim, &(0..m.dim).collect::<Vec<_>>());
        // When f is a standard-form submersion, so is the second projection:
        // its base identification is g^{-1} composed with f's.
        let p_product = if f.flags.submersion_standard_form {
            let pdf = f.product_datum(cm)?;
            Some(ProductData {
                split: pdf.split.clone(),
                base_dim: pdf.base_dim,
                ident: ap.map.inverse()?.compose(&pdf.ident)?,
            })
        } else {
            None
        };
        return Ok(Some(BuiltChart {
            polytope: q,
            to_m,
            to_p,
            recover,
            m_product: None,
            p_product,
        }));
    }
    if g.flags.submersion_standard_form {
        let pd = g.product_datum(cp)?;
        let b = pd.base_dim;
        let fiber_dim = p.dim - b;
        // Graph coordinates (x_m, t): second factor point is
        // split^{-1}(ident^{-1}(f(x_m)), t).
        let base_of_m = pd.ident.inverse()?.compose(&am.map)?; // M space -> base coords
        let proj_m_coords =
            AffineMap::coordinate_projection(m.dim + fiber_dim, &(0..m.dim).collect::<Vec<_>>());
        let proj_t = AffineMap::coordinate_projection(
            m.dim + fiber_dim,
            &(m.dim..m.dim + fiber_dim).collect::<Vec<_>>(),
        );
        let to_p = pd
            .split
            .inverse()?
            .compose(&base_of_m.compose(&proj_m_coords)?.stack(&proj_t))?;
        // Domain: chart_m x (bounding box of the fiber coordinates).
        let split_img = chart_p.image_invertible(&pd.split)?;
        let fiber_box = coord_box(&split_img, b, p.dim)?;
        let domain = product_polytope(chart_m, &fiber_box)?;
        let q = chart_p.affine_preimage(&to_p, &domain)?;
        if !q.is_full_dim() || q.dim() != Some(dim_q) {
            return Ok(None);
        }
        let to_m = proj_m_coords;
        let split_p = pd.split.clone();
        // recover(x_m, x_p) = (x_m, fiber coords of split(x_p)).
        let pick_m = AffineMap::coordinate_projection(m.dim + p.dim, &(0..m.dim).collect::<Vec<_>>());
        let pick_p =
            AffineMap::coordinate_projection(m.dim + p.dim, &(m.dim..m.dim + p.dim).collect::<Vec<_>>());
        let fiber_of_p = AffineMap::coordinate_projection(p.dim, &(b..p.dim).collect::<Vec<_>>())
            .compose(&split_p)?
            .compose(&pick_p)?;
        let recover = pick_m.stack(&fiber_of_p);
        // q is a product over the M factor by construction.
        let m_product = Some(ProductData {
            split: AffineMap::identity(m.dim + fiber_dim),
            base_dim: m.dim,
            ident: AffineMap::identity(m.dim),
        });
        // With f also in standard form, the second projection is a
        // standard-form submersion: reorder graph coordinates (x_m, t) as
        // (base_f(x_m), t, fiber_f(x_m)) and identify (base_f, t) with the
        // second factor through g's splitting.
        let p_product = if f.flags.submersion_standard_form {
            let pdf = f.product_datum(cm)?;
            let bf = pdf.base_dim;
            let sf = pdf.split.clone();
            let m_part =
                AffineMap::coordinate_projection(m.dim + fiber_dim, &(0..m.dim).collect::<Vec<_>>());
            let t_part = AffineMap::coordinate_projection(
                m.dim + fiber_dim,
                &(m.dim..m.dim + fiber_dim).collect::<Vec<_>>(),
            );
            let y_of = AffineMap::coordinate_projection(m.dim, &(0..bf).collect::<Vec<_>>())
                .compose(&sf)?
                .compose(&m_part)?;
            let s_of = AffineMap::coordinate_projection(m.dim, &(bf..m.dim).collect::<Vec<_>>())
                .compose(&sf)?
                .compose(&m_part)?;
            let split_p = y_of.stack(&t_part).stack(&s_of);
            let base_to_base = pd.ident.inverse()?.compose(&pdf.ident)?;
            let ident_p = pd
                .split
                .inverse()?
                .compose(&base_to_base.product(&AffineMap::identity(fiber_dim)))?;
            Some(ProductData { split: split_p, base_dim: bf + fiber_dim, ident: ident_p })
        } else {
            None
        };
        return Ok(Some(BuiltChart {
            polytope: q,
            to_m,
            to_p,
            recover,
            m_product,
            p_product,
        }));
    }
    if am.map.is_invertible() {
        // Graph coordinates = P coordinates.
        let to_m = am.map.inverse()?.compose(&ap.map)?;
        let q = chart_m.affine_preimage(&to_m, chart_p)?;
        if !q.is_full_dim() || q.dim() != Some(dim_q) {
            return Ok(None);
        }
        let to_p = AffineMap::identity(p.dim);
        let recover =
            AffineMap::coordinate_projection(m.dim + p.dim, &(m.dim..m.dim + p.dim).collect::<Vec<_>>());
        let m_product = if g.flags.submersion_standard_form {
            let pdg = g.product_datum(cp)?;
            Some(ProductData {
                split: pdg.split.clone(),
                base_dim: pdg.base_dim,
                ident: am.map.inverse()?.compose(&pdg.ident)?,
            })
        } else {
            None
        };
        return Ok(Some(BuiltChart {
            polytope: q,
            to_m,
            to_p,
            recover,
            m_product,
            p_product: None,
        }));
    }
    if f.flags.submersion_standard_form {
        let pd = f.product_datum(cm)?;
        let b = pd.base_dim;
        let fiber_dim = m.dim - b;
        // Graph coordinates (x_p, t).
        let base_of_p = pd.ident.inverse()?.compose(&ap.map)?;
        let proj_p_coords =
            AffineMap::coordinate_projection(p.dim + fiber_dim, &(0..p.dim).collect::<Vec<_>>());
        let proj_t = AffineMap::coordinate_projection(
            p.dim + fiber_dim,
            &(p.dim..p.dim + fiber_dim).collect::<Vec<_>>(),
        );
        let to_m = pd
            .split
            .inverse()?
            .compose(&base_of_p.compose(&proj_p_coords)?.stack(&proj_t))?;
        let split_img = chart_m.image_invertible(&pd.split)?;
        let fiber_box = coord_box(&split_img, b, m.dim)?;
        let domain = product_polytope(chart_p, &fiber_box)?;
        let q = chart_m.affine_preimage(&to_m, &domain)?;
        if !q.is_full_dim() || q.dim() != Some(dim_q) {
            return Ok(None);
        }
        let to_p = proj_p_coords;
        let pick_m = AffineMap::coordinate_projection(m.dim + p.dim, &(0..m.dim).collect::<Vec<_>>());
        let pick_p =
            AffineMap::coordinate_projection(m.dim + p.dim, &(m.dim..m.dim + p.dim).collect::<Vec<_>>());
        let fiber_of_m = AffineMap::coordinate_projection(m.dim, &(b..m.dim).collect::<Vec<_>>())
            .compose(&pd.split.clone())?
            .compose(&pick_m)?;
        let recover = pick_p.stack(&fiber_of_m);
        let p_product = Some(ProductData {
            split: AffineMap::identity(p.dim + fiber_dim),
            base_dim: p.dim,
            ident: AffineMap::identity(p.dim),
        });
        let m_product = if g.flags.submersion_standard_form {
            let pdg = g.product_datum(cp)?;
            let bg = pdg.base_dim;
            let sg = pdg.split.clone();
            let p_part =
                AffineMap::coordinate_projection(p.dim + fiber_dim, &(0..p.dim).collect::<Vec<_>>());
            let t_part = AffineMap::coordinate_projection(
                p.dim + fiber_dim,
                &(p.dim..p.dim + fiber_dim).collect::<Vec<_>>(),
            );
            let y_of = AffineMap::coordinate_projection(p.dim, &(0..bg).collect::<Vec<_>>())
                .compose(&sg)?
                .compose(&p_part)?;
            let s_of = AffineMap::coordinate_projection(p.dim, &(bg..p.dim).collect::<Vec<_>>())
                .compose(&sg)?
                .compose(&p_part)?;
            let split_m = y_of.stack(&t_part).stack(&s_of);
            let base_to_base = pd.ident.inverse()?.compose(&pdg.ident)?;
            let ident_m = pd
                .split
                .inverse()?
                .compose(&base_to_base.product(&AffineMap::identity(fiber_dim)))?;
            Some(ProductData { split: split_m, base_dim: bg + fiber_dim, ident: ident_m })
        } else {
            None
        };
        return Ok(Some(BuiltChart {
            polytope: q,
            to_m,
            to_p,
            recover,
            m_product,
            p_product,
        }));
    }
    Err(Error::Unsupported(format!(
        "chart pair ({cm},{cp}): neither leg is invertible or a standard-form submersion"
    )))
}

fn neg_mat(m: &Mat) -> Mat {
    let mut out = m.clone();
    for i in 0..m.rows {
        for j in 0..m.cols {
            out[(i, j)] = -&m[(i, j)];
        }
    }
    out
}

/// Axis box of coordinates `lo..hi` of a polytope, padded by one.
fn coord_box(p: &Polytope, lo: usize, hi: usize) -> Result<Polytope> {
    let vs = p.vertices();
    assert!(!vs.is_empty());
    let mut mins: Vec<Rat> = vs[0][lo..hi].to_vec();
    let mut maxs = mins.clone();
    for v in vs {
        for (k, x) in v[lo..hi].iter().enumerate() {
            if x < &mins[k] {
                mins[k] = x.clone();
            }
            if x > &maxs[k] {
                maxs[k] = x.clone();
            }
        }
    }
    let one = Rat::one();
    let mins: Vec<Rat> = mins.iter().map(|x| x - &one).collect();
    let maxs: Vec<Rat> = maxs.iter().map(|x| x + &one).collect();
    Polytope::box_(&mins, &maxs)
}

/// Product polytope `a x b`.
fn product_polytope(a: &Polytope, b: &Polytope) -> Result<Polytope> {
    use crate::polytope::Halfspace;
    let d = a.ambient_dim + b.ambient_dim;
    let mut hs = Vec::new();
    for h in &a.halfspaces {
        let mut n = h.normal.clone();
        n.extend(std::iter::repeat(Rat::zero()).take(b.ambient_dim));
        hs.push(Halfspace::new(n, h.offset.clone()));
    }
    for h in &b.halfspaces {
        let mut n = vec![Rat::zero(); a.ambient_dim];
        n.extend(h.normal.iter().cloned());
        hs.push(Halfspace::new(n, h.offset.clone()));
    }
    Polytope::new(d, hs)
}

impl FiberProduct {
    /// Sign of the splitting isomorphism `phi = (r, df - dg)` from
    /// `TM + TP` to `TQ + TN`, with `TQ` framed by the graph coordinates.
    /// Independent of the choice of left inverse `r`.
    fn phi_sign(&self, chart: usize, f: &ChartMap, g: &ChartMap) -> Result<Sign> {
        let fp = &self.charts[chart];
        let lf = &f.assignments[fp.m_chart].map.matrix;
        let lg = &g.assignments[fp.p_chart].map.matrix;
        // Graph frame in TM + TP.
        let w = fp.to_m.matrix.vstack(&fp.to_p.matrix);
        let wt = w.transpose();
        let gram = wt.mul_mat(&w);
        let r = gram.inverse()?.mul_mat(&wt);
        let big_f = lf.hstack(&neg_mat(lg));
        let phi = r.vstack(&big_f);
        Sign::from_det(&phi.det())
            .map_err(|_| Error::Geometry(format!("degenerate splitting on fp chart {chart}")))
    }

    /// Orientation of the fiber product from orientations of the three
    /// corners, normalized so the splitting isomorphism has sign
    /// (-1)^(dim P * dim N).
    pub fn orientation(
        &self,
        f: &ChartMap,
        g: &ChartMap,
        o_m: &Orientation,
        o_p: &Orientation,
        o_n: &Orientation,
    ) -> Result<Orientation> {
        let parity = Sign::pow(self.dim_p * self.dim_n);
        let mut signs = Vec::with_capacity(self.charts.len());
        for (i, fp) in self.charts.iter().enumerate() {
            let phi = self.phi_sign(i, f, g)?;
            let cn = f.assignments[fp.m_chart].target_chart;
            signs.push(parity * phi * o_m.0[fp.m_chart] * o_p.0[fp.p_chart] * o_n.0[cn]);
        }
        Ok(Orientation(signs))
    }

    /// Pull-back relative orientation of the projection `q : M x_N P -> M`
    /// induced by a relative orientation of `g`.
    pub fn pullback_rel_orientation(
        &self,
        f: &ChartMap,
        g: &ChartMap,
        o_g: &RelOrientation,
    ) -> Result<RelOrientation> {
        let parity = Sign::pow(self.dim_p * self.dim_n);
        let mut signs = Vec::with_capacity(self.charts.len());
        for (i, fp) in self.charts.iter().enumerate() {
            let phi = self.phi_sign(i, f, g)?;
            signs.push(parity * phi * o_g.0[fp.p_chart]);
        }
        Ok(RelOrientation(signs))
    }

    /// Transpose pull-back relative orientation of the projection
    /// `p : M x_N P -> P` induced by a relative orientation of `f`.
    pub fn transpose_pullback_rel_orientation(
        &self,
        f: &ChartMap,
        g: &ChartMap,
        o_f: &RelOrientation,
    ) -> Result<RelOrientation> {
        let parity = Sign::pow(self.dim_p * self.dim_n);
        let mut signs = Vec::with_capacity(self.charts.len());
        for (i, fp) in self.charts.iter().enumerate() {
            let phi = self.phi_sign(i, f, g)?;
            signs.push(parity * phi * o_f.0[fp.m_chart]);
        }
        Ok(RelOrientation(signs))
    }

    /// The factor-swap map onto the fiber product built with the legs in the
    /// opposite order: a chart-wise affine bijection.
    pub fn swap_map(&self, swapped: &FiberProduct) -> Result<ChartMap> {
        let mut assignments = Vec::with_capacity(self.charts.len());
        for fp in &self.charts {
            let Some((j, other)) = swapped
                .charts
                .iter()
                .enumerate()
                .find(|(_, o)| o.m_chart == fp.p_chart && o.p_chart == fp.m_chart)
            else {
                return Err(Error::Geometry("swap: missing mirror chart".into()));
            };
            let map = other.recover.compose(&fp.to_p.stack(&fp.to_m))?;
            assignments.push(ChartAssignment { target_chart: j, map });
        }
        ChartMap::new(
            &self.complex,
            &swapped.complex,
            assignments,
            MapFlags { local_diffeo: true, proper: true, ..Default::default() },
            vec![None; self.charts.len()],
        )
    }

    /// The chart map into the fiber product induced by a compatible pair of
    /// maps into the two factors. Each source chart must land in a single
    /// fiber-product chart (the one indexed by the pair of target charts).
    pub fn map_into(
        &self,
        source: &ChartComplex,
        into_m: &ChartMap,
        into_p: &ChartMap,
    ) -> Result<ChartMap> {
        let mut assignments = Vec::with_capacity(source.len());
        for ci in 0..source.len() {
            let am = &into_m.assignments[ci];
            let ap = &into_p.assignments[ci];
            let Some((idx, _)) = self
                .charts
                .iter()
                .enumerate()
                .find(|(_, c)| c.m_chart == am.target_chart && c.p_chart == ap.target_chart)
            else {
                return Err(Error::Geometry(format!(
                    "map_into: no fiber-product chart for pair ({}, {})",
                    am.target_chart, ap.target_chart
                )));
            };
            let map = self.induced_map(idx, &am.map, &ap.map)?;
            assignments.push(ChartAssignment { target_chart: idx, map });
        }
        ChartMap::new(
            source,
            &self.complex,
            assignments,
            MapFlags { proper: true, ..Default::default() },
            vec![None; source.len()],
        )
    }

    /// The affine map into graph coordinates induced by a compatible pair of
    /// maps into the two factors; exact consistency is asserted.
    pub fn induced_map(
        &self,
        chart: usize,
        into_m: &AffineMap,
        into_p: &AffineMap,
    ) -> Result<AffineMap> {
        let fp = &self.charts[chart];
        let stacked = into_m.stack(into_p);
        let induced = fp.recover.compose(&stacked)?;
        // The pair must actually land on the fiber-product locus.
        let rebuilt = fp.to_m.compose(&induced)?.stack(&fp.to_p.compose(&induced)?);
        if rebuilt != stacked {
            return Err(Error::Geometry(
                "induced map: components do not satisfy the fiber relation".into(),
            ));
        }
        Ok(induced)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::MapFlags;
    use crate::rat::Rat;

    fn r(v: i64) -> Rat {
        Rat::from_int(v)
    }

    fn square() -> ChartComplex {
        ChartComplex::single(Polytope::box_(&[r(0), r(0)], &[r(1), r(1)]).unwrap()).unwrap()
    }

    fn interval01() -> ChartComplex {
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
    fn diagonal_of_identity_legs() {
        let m = interval01();
        let id = ChartMap::identity(&m);
        let fp = fiber_product(&m, &id, &m, &id, &m).unwrap();
        assert_eq!(fp.complex.len(), 1);
        assert_eq!(fp.complex.dim, 1);
        assert_eq!(fp.complex.charts[0], m.charts[0]);
    }

    #[test]
    fn square_projections_give_cube() {
        let sq = square();
        let iv = interval01();
        let f = proj1(&sq, &iv);
        let g = proj1(&sq, &iv);
        let fp = fiber_product(&sq, &f, &sq, &g, &iv).unwrap();
        assert_eq!(fp.complex.dim, 3);
        assert_eq!(fp.complex.len(), 1);
        let cube = Polytope::box_(&[r(0), r(0), r(0)], &[r(1), r(1), r(1)]).unwrap();
        assert_eq!(fp.complex.charts[0], cube);
        // q is a standard-form submersion, p is affine onto the other square.
        assert!(fp.proj_m.flags.submersion_standard_form);
    }

    #[test]
    fn invertible_leg_gives_preimage_in_m_coordinates() {
        let m = interval01();
        let p = ChartComplex::single(Polytope::box_(&[Rat::new(1, 2)], &[r(2)]).unwrap()).unwrap();
        let n = ChartComplex::single(Polytope::interval(0, 2)).unwrap();
        let f = ChartMap::new(
            &m,
            &n,
            vec![ChartAssignment { target_chart: 0, map: AffineMap::identity(1) }],
            MapFlags { strongly_smooth: true, proper: true, ..Default::default() },
            vec![None],
        )
        .unwrap();
        let g = ChartMap::new(
            &p,
            &n,
            vec![ChartAssignment { target_chart: 0, map: AffineMap::identity(1) }],
            MapFlags { local_diffeo: true, proper: true, ..Default::default() },
            vec![None],
        )
        .unwrap();
        let fp = fiber_product(&m, &f, &p, &g, &n).unwrap();
        assert_eq!(fp.complex.len(), 1);
        // Chart is [1/2, 1] in M coordinates, q a local diffeo.
        let expected = Polytope::box_(&[Rat::new(1, 2)], &[r(1)]).unwrap();
        assert_eq!(fp.complex.charts[0], expected);
        assert!(fp.proj_m.flags.local_diffeo);
    }

    #[test]
    fn disjoint_images_drop_charts() {
        let m = interval01();
        let p = ChartComplex::single(Polytope::box_(&[r(3)], &[r(4)]).unwrap()).unwrap();
        let n = ChartComplex::single(Polytope::interval(0, 4)).unwrap();
        let mk = |src: &ChartComplex| {
            ChartMap::new(
                src,
                &n,
                vec![ChartAssignment { target_chart: 0, map: AffineMap::identity(1) }],
                MapFlags { local_diffeo: true, proper: true, ..Default::default() },
                vec![None],
            )
            .unwrap()
        };
        let fp = fiber_product(&m, &mk(&m), &p, &mk(&p), &n).unwrap();
        assert_eq!(fp.complex.len(), 0);
    }

    #[test]
    fn product_orientation_when_target_is_point() {
        // N = point: the fiber product is M x P with the product orientation;
        // check the parity factor (-1)^{dim P * dim N} = +1 collapses and the
        // splitting sign matches the product frame.
        let m = interval01();
        let p = interval01();
        let n = ChartComplex::point();
        let f = ChartMap::to_point(&m);
        let g = ChartMap::to_point(&p);
        let fp = fiber_product(&m, &f, &p, &g, &n).unwrap();
        assert_eq!(fp.complex.dim, 2);
        let o = fp
            .orientation(
                &f,
                &g,
                &Orientation::standard(&m),
                &Orientation::standard(&p),
                &Orientation::standard(&n),
            )
            .unwrap();
        assert_eq!(o.0, vec![Sign::Plus]);
        // Reversing one factor reverses the product.
        let o = fp
            .orientation(
                &f,
                &g,
                &Orientation::standard(&m).reversed(),
                &Orientation::standard(&p),
                &Orientation::standard(&n),
            )
            .unwrap();
        assert_eq!(o.0, vec![Sign::Minus]);
    }

    #[test]
    fn fiber_orientation_convention_oracle() {
        // The fiber {y} x_S Q of the projection Q = [0,1]^2 -> S = [0,1]
        // carries the standard fiber-coordinate orientation: the splitting
        // phi on bases (dy, dt) -> (fiber, N) has matrix [[0,1],[-1,0]] with
        // determinant +1, and the demanded sign is (-1)^{dim P dim N} =
        // (-1)^{2*1} = +1. Frozen: standard t-orientation, no sign.
        let det = Mat::from_rows(vec![
            vec![r(0), r(1)],
            vec![r(-1), r(0)],
        ])
        .det();
        assert_eq!(det, r(1));

        // Engine route: point inclusion against the projection.
        let pt = ChartComplex::point();
        let sq = square();
        let iv = interval01();
        let incl = ChartMap::new(
            &pt,
            &iv,
            vec![ChartAssignment {
                target_chart: 0,
                map: AffineMap::constant(0, vec![Rat::new(1, 2)]),
            }],
            MapFlags { strongly_smooth: true, proper: true, ..Default::default() },
            vec![None],
        )
        .unwrap();
        let g = proj1(&sq, &iv);
        let fp = fiber_product(&pt, &incl, &sq, &g, &iv).unwrap();
        assert_eq!(fp.complex.dim, 1);
        let o = fp
            .orientation(
                &incl,
                &g,
                &Orientation::standard(&pt),
                &Orientation::standard(&sq),
                &Orientation::standard(&iv),
            )
            .unwrap();
        assert_eq!(o.0, vec![Sign::Plus], "fiber orientation must be the standard one");
    }

    #[test]
    fn swap_map_is_affine_bijection() {
        let sq = square();
        let iv = interval01();
        let f = proj1(&sq, &iv);
        let g = proj1(&sq, &iv);
        let fp = fiber_product(&sq, &f, &sq, &g, &iv).unwrap();
        let pf = fiber_product(&sq, &g, &sq, &f, &iv).unwrap();
        let theta = fp.swap_map(&pf).unwrap();
        // theta must send the chart onto the mirror chart exactly.
        let img = fp.complex.charts[0].image_invertible(&theta.assignments[0].map).unwrap();
        assert_eq!(img, pf.complex.charts[0]);
    }
}
