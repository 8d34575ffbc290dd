//! Piecewise-polynomial differential forms on chart complexes.
//!
//! A form carries, per chart, a polytopal mesh and per cell one polynomial
//! coefficient for each strictly increasing multi-index of the form's degree.
//! The smoothness class across cell interfaces is computed exactly: the
//! difference of adjacent coefficients factors as a power of the interface
//! functional, and that multiplicity is decidable.

use std::collections::BTreeMap;

use crate::affine::AffineMap;
use crate::chart::{ChartComplex, ChartMap};
use crate::error::{Error, Result};
use crate::linalg::{rvec_dot, Mat};
use crate::orient::{Orientation, RelOrientation};
use crate::poly::Poly;
use crate::polytope::Polytope;
use crate::rat::{Rat, Sign};
use crate::simplex::integrate_poly_polytope;

/// Interface smoothness class. `Class(0)` is continuity; `Discontinuous`
/// arises from sheet-count functions on partial covers and admits no exterior
/// derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Smoothness {
    Discontinuous,
    Class(u32),
    Infinite,
}

impl Smoothness {
    pub fn min(self, other: Smoothness) -> Smoothness {
        std::cmp::min(self, other)
    }

    pub fn at_least(self, r: u32) -> bool {
        match self {
            Smoothness::Infinite => true,
            Smoothness::Class(k) => k >= r,
            Smoothness::Discontinuous => false,
        }
    }
}

impl std::fmt::Display for Smoothness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Smoothness::Infinite => write!(f, "C^inf"),
            Smoothness::Class(k) => write!(f, "C^{k}"),
            Smoothness::Discontinuous => write!(f, "discontinuous"),
        }
    }
}

/// One mesh cell with its coefficient table. Keys are strictly increasing
/// multi-indices; absent keys mean zero.
#[derive(Clone, Debug)]
pub struct Cell {
    pub polytope: Polytope,
    pub coeffs: BTreeMap<Vec<usize>, Poly>,
}

impl Cell {
    fn coeff(&self, idx: &[usize]) -> Poly {
        self.coeffs.get(idx).cloned().unwrap_or_else(|| Poly::zero(self.polytope.ambient_dim))
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, p| !p.is_zero());
    }
}

#[derive(Clone, Debug)]
pub struct PPForm {
    pub degree: usize,
    pub smoothness: Smoothness,
    /// One mesh per chart of the base complex.
    pub charts: Vec<Vec<Cell>>,
}

/// All strictly increasing multi-indices of length `k` in `0..dim`.
pub fn multi_indices(dim: usize, k: usize) -> Vec<Vec<usize>> {
    crate::polytope::combinations(dim, k)
}

/// Sign of merging two disjoint increasing index sets (parity of the number
/// of transpositions needed to sort the concatenation).
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Sign, Vec<usize>)> {
    let mut inversions = 0usize;
    for &i in a {
        for &j in b {
            if i == j {
                return None;
            }
            if i > j {
                inversions += 1;
            }
        }
    }
    let mut merged: Vec<usize> = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    Some((Sign::pow(inversions), merged))
}

impl PPForm {
    pub fn zero(base: &ChartComplex, degree: usize) -> PPForm {
        let charts = base
            .charts
            .iter()
            .map(|c| vec![Cell { polytope: c.clone(), coeffs: BTreeMap::new() }])
            .collect();
        PPForm { degree, smoothness: Smoothness::Infinite, charts }
    }

    /// Degree-0 form with one polynomial per chart.
    pub fn from_chart_polys(base: &ChartComplex, polys: Vec<Poly>) -> Result<PPForm> {
        if polys.len() != base.len() {
            return Err(Error::Validation("one polynomial per chart required".into()));
        }
        let charts = base
            .charts
            .iter()
            .zip(polys)
            .map(|(c, p)| {
                let mut coeffs = BTreeMap::new();
                if !p.is_zero() {
                    coeffs.insert(vec![], p);
                }
                vec![Cell { polytope: c.clone(), coeffs }]
            })
            .collect();
        Ok(PPForm { degree: 0, smoothness: Smoothness::Infinite, charts })
    }

    pub fn constant(base: &ChartComplex, value: Rat) -> PPForm {
        let polys = base.charts.iter().map(|_| Poly::constant(base.dim, value.clone())).collect();
        PPForm::from_chart_polys(base, polys).expect("constant form")
    }

    /// Single-term form `p dx_I` on every chart.
    pub fn monomial_form(base: &ChartComplex, idx: &[usize], p: Poly) -> Result<PPForm> {
        let degree = idx.len();
        if idx.windows(2).any(|w| w[0] >= w[1]) || idx.iter().any(|&i| i >= base.dim) {
            return Err(Error::Validation(format!("bad multi-index {idx:?}")));
        }
        if p.ambient_dim != base.dim {
            return Err(Error::Dim("coefficient arity".into()));
        }
        let charts = base
            .charts
            .iter()
            .map(|c| {
                let mut coeffs = BTreeMap::new();
                if !p.is_zero() {
                    coeffs.insert(idx.to_vec(), p.clone());
                }
                vec![Cell { polytope: c.clone(), coeffs }]
            })
            .collect();
        let mut form = PPForm { degree, smoothness: Smoothness::Infinite, charts };
        form.normalize(base)?;
        Ok(form)
    }

    /// Validating constructor for externally supplied forms: meshes must tile
    /// each chart with full-dimensional, interior-disjoint cells.
    pub fn validated(
        base: &ChartComplex,
        degree: usize,
        charts: Vec<Vec<Cell>>,
        declared_smoothness: Option<u32>,
    ) -> Result<PPForm> {
        if charts.len() != base.len() {
            return Err(Error::Validation("one mesh per chart required".into()));
        }
        for (ci, cells) in charts.iter().enumerate() {
            let chart = &base.charts[ci];
            for (k, cell) in cells.iter().enumerate() {
                if !cell.polytope.is_full_dim() {
                    return Err(Error::Validation(format!("chart {ci} cell {k}: not full-dim")));
                }
                if !chart.contains_polytope(&cell.polytope) {
                    return Err(Error::Validation(format!(
                        "chart {ci} cell {k}: leaves the chart"
                    )));
                }
                for idx in cell.coeffs.keys() {
                    if idx.len() != degree
                        || idx.windows(2).any(|w| w[0] >= w[1])
                        || idx.iter().any(|&i| i >= base.dim)
                    {
                        return Err(Error::Validation(format!(
                            "chart {ci} cell {k}: bad multi-index {idx:?}"
                        )));
                    }
                }
                for (l, other) in cells.iter().enumerate().skip(k + 1) {
                    let meet = cell.polytope.intersect(&other.polytope)?;
                    if meet.is_full_dim() {
                        return Err(Error::Validation(format!(
                            "chart {ci}: cells {k} and {l} overlap"
                        )));
                    }
                }
            }
            let polys: Vec<Polytope> = cells.iter().map(|c| c.polytope.clone()).collect();
            if !Polytope::union_covers(chart, &polys)? {
                return Err(Error::Validation(format!("chart {ci}: mesh does not tile the chart")));
            }
        }
        let mut form = PPForm { degree, smoothness: Smoothness::Infinite, charts };
        form.normalize(base)?;
        if let Some(r) = declared_smoothness {
            if !form.smoothness.at_least(r) {
                return Err(Error::Smoothness(format!(
                    "declared C^{r} but computed {}",
                    form.smoothness
                )));
            }
        }
        Ok(form)
    }

    /// Recompute the exact smoothness class and prune zero coefficients.
    fn normalize(&mut self, base: &ChartComplex) -> Result<()> {
        for cells in &mut self.charts {
            for c in cells.iter_mut() {
                c.prune();
            }
        }
        self.smoothness = self.compute_smoothness(base)?;
        Ok(())
    }

    fn compute_smoothness(&self, base: &ChartComplex) -> Result<Smoothness> {
        let mut overall = Smoothness::Infinite;
        for (ci, cells) in self.charts.iter().enumerate() {
            let dim = base.dim;
            for a in 0..cells.len() {
                for b in a + 1..cells.len() {
                    let meet = cells[a].polytope.intersect(&cells[b].polytope)?;
                    if meet.is_empty() || meet.dim() != Some(dim.saturating_sub(1)) || dim == 0 {
                        continue;
                    }
                    let Some(eq) = meet.equalities().first() else {
                        continue;
                    };
                    // Change coordinates so the interface is {u_0 = 0}.
                    let t = interface_chart(&eq.normal, &eq.offset)?;
                    for idx in multi_indices(dim, self.degree) {
                        let diff = cells[a].coeff(&idx).sub(&cells[b].coeff(&idx));
                        if diff.is_zero() {
                            continue;
                        }
                        let mult = diff
                            .compose_affine(&t)?
                            .var_multiplicity(0)
                            .expect("nonzero polynomial");
                        let class = if mult == 0 {
                            Smoothness::Discontinuous
                        } else {
                            Smoothness::Class(mult - 1)
                        };
                        overall = overall.min(class);
                        let _ = ci;
                    }
                }
            }
        }
        Ok(overall)
    }

    pub fn is_zero(&self) -> bool {
        self.charts.iter().all(|cells| cells.iter().all(|c| c.coeffs.is_empty()))
    }

    pub fn scale(&self, c: &Rat) -> PPForm {
        let charts = self
            .charts
            .iter()
            .map(|cells| {
                cells
                    .iter()
                    .map(|cell| {
                        let coeffs = cell
                            .coeffs
                            .iter()
                            .map(|(k, p)| (k.clone(), p.scale(c)))
                            .filter(|(_, p)| !p.is_zero())
                            .collect();
                        Cell { polytope: cell.polytope.clone(), coeffs }
                    })
                    .collect()
            })
            .collect();
        PPForm { degree: self.degree, smoothness: self.smoothness, charts }
    }

    pub fn neg(&self) -> PPForm {
        self.scale(&-Rat::one())
    }

    /// Value of the coefficient table at a point of a chart (cell located by
    /// containment; interior points are unambiguous).
    fn cell_at<'a>(cells: &'a [Cell], point: &[Rat]) -> Option<&'a Cell> {
        cells.iter().find(|c| c.polytope.contains(point))
    }

    pub fn add(&self, base: &ChartComplex, other: &PPForm) -> Result<PPForm> {
        // The zero form belongs to every degree.
        if self.is_zero() && self.degree != other.degree {
            return Ok(other.clone());
        }
        if other.is_zero() && self.degree != other.degree {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(Error::Validation("adding forms of different degree".into()));
        }
        let mut charts = Vec::with_capacity(self.charts.len());
        for (ci, (ca, cb)) in self.charts.iter().zip(&other.charts).enumerate() {
            let mesh = refine_meshes(ca, cb)?;
            let mut cells = Vec::with_capacity(mesh.len());
            for poly in mesh {
                let pt = poly.interior_point();
                let mut coeffs: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();
                for src in [Self::cell_at(ca, &pt), Self::cell_at(cb, &pt)].into_iter().flatten() {
                    for (k, p) in &src.coeffs {
                        let entry =
                            coeffs.entry(k.clone()).or_insert_with(|| Poly::zero(p.ambient_dim));
                        *entry = entry.add(p);
                    }
                }
                coeffs.retain(|_, p| !p.is_zero());
                cells.push(Cell { polytope: poly, coeffs });
            }
            let _ = ci;
            charts.push(cells);
        }
        let mut out = PPForm { degree: self.degree, smoothness: Smoothness::Infinite, charts };
        out.normalize(base)?;
        Ok(out)
    }

    pub fn sub(&self, base: &ChartComplex, other: &PPForm) -> Result<PPForm> {
        self.add(base, &other.neg())
    }

    pub fn equals(&self, base: &ChartComplex, other: &PPForm) -> Result<bool> {
        if self.is_zero() && other.is_zero() {
            return Ok(true);
        }
        if self.degree != other.degree {
            return Ok(false);
        }
        Ok(self.sub(base, other)?.is_zero())
    }

    pub fn wedge(&self, base: &ChartComplex, other: &PPForm) -> Result<PPForm> {
        let degree = self.degree + other.degree;
        let mut charts = Vec::with_capacity(self.charts.len());
        for (ca, cb) in self.charts.iter().zip(&other.charts) {
            let mesh = refine_meshes(ca, cb)?;
            let mut cells = Vec::with_capacity(mesh.len());
            for poly in mesh {
                let pt = poly.interior_point();
                let mut coeffs: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();
                if let (Some(a), Some(b)) = (Self::cell_at(ca, &pt), Self::cell_at(cb, &pt)) {
                    for (ia, pa) in &a.coeffs {
                        for (ib, pb) in &b.coeffs {
                            if let Some((sign, merged)) = merge_sign(ia, ib) {
                                let term = pa.mul(pb).scale(&sign.rat());
                                let entry = coeffs
                                    .entry(merged)
                                    .or_insert_with(|| Poly::zero(base.dim));
                                *entry = entry.add(&term);
                            }
                        }
                    }
                }
                coeffs.retain(|_, p| !p.is_zero());
                cells.push(Cell { polytope: poly, coeffs });
            }
            charts.push(cells);
        }
        let mut out = PPForm { degree, smoothness: Smoothness::Infinite, charts };
        out.normalize(base)?;
        Ok(out)
    }

    /// Exterior derivative, convention `d(f dx_I) = df ^ dx_I`.
    pub fn d(&self, base: &ChartComplex) -> Result<PPForm> {
        if !self.smoothness.at_least(1) {
            return Err(Error::Smoothness(format!(
                "d of a {} form across cell interfaces",
                self.smoothness
            )));
        }
        let mut charts = Vec::with_capacity(self.charts.len());
        for cells in &self.charts {
            let mut out_cells = Vec::with_capacity(cells.len());
            for cell in cells {
                let mut coeffs: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();
                for (idx, p) in &cell.coeffs {
                    for j in 0..base.dim {
                        let dp = p.derivative(j);
                        if dp.is_zero() {
                            continue;
                        }
                        if let Some((sign, merged)) = merge_sign(&[j], idx) {
                            let entry =
                                coeffs.entry(merged).or_insert_with(|| Poly::zero(base.dim));
                            *entry = entry.add(&dp.scale(&sign.rat()));
                        }
                    }
                }
                coeffs.retain(|_, p| !p.is_zero());
                out_cells.push(Cell { polytope: cell.polytope.clone(), coeffs });
            }
            charts.push(out_cells);
        }
        let mut out = PPForm { degree: self.degree + 1, smoothness: Smoothness::Infinite, charts };
        out.normalize(base)?;
        Ok(out)
    }

    /// Pull-back along a chart map (`source -> target`); functorial.
    pub fn pullback(
        &self,
        source: &ChartComplex,
        _target: &ChartComplex,
        f: &ChartMap,
    ) -> Result<PPForm> {
        let mut charts = Vec::with_capacity(source.len());
        for (ci, a) in f.assignments.iter().enumerate() {
            let chart = &source.charts[ci];
            let tcells = &self.charts[a.target_chart];
            let lin = &a.map.matrix;
            // Preimages of target cells can overlap when the image lies in
            // the mesh skeleton; build a disjoint mesh greedily (forms are
            // continuous along the skeleton in that case, so any containing
            // cell gives the same restriction).
            let mut mesh: Vec<Polytope> = Vec::new();
            for tcell in tcells {
                let pre = tcell.polytope.affine_preimage(&a.map, chart)?;
                if !pre.is_full_dim() {
                    continue;
                }
                let mut pieces = vec![pre];
                for existing in &mesh {
                    let mut next = Vec::new();
                    for piece in pieces {
                        next.extend(existing.complement_within(&piece)?);
                    }
                    pieces = next;
                }
                mesh.extend(pieces);
            }
            if mesh.is_empty() {
                return Err(Error::Geometry(format!(
                    "pullback: chart {ci} has no full-dimensional preimage cells"
                )));
            }
            let mut cells = Vec::new();
            for poly in mesh {
                let image_pt = a.map.apply(&poly.interior_point());
                let Some(tcell) = Self::cell_at(tcells, &image_pt) else {
                    return Err(Error::Geometry("pullback: unlocated image point".into()));
                };
                let mut coeffs: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();
                for (idx, p) in &tcell.coeffs {
                    let comp = p.compose_affine(&a.map)?;
                    for jdx in multi_indices(source.dim, self.degree) {
                        let minor = lin.submatrix(idx, &jdx).det();
                        if minor.is_zero() {
                            continue;
                        }
                        let entry =
                            coeffs.entry(jdx).or_insert_with(|| Poly::zero(source.dim));
                        *entry = entry.add(&comp.scale(&minor));
                    }
                }
                coeffs.retain(|_, p| !p.is_zero());
                cells.push(Cell { polytope: poly, coeffs });
            }
            charts.push(cells);
        }
        let mut out = PPForm { degree: self.degree, smoothness: Smoothness::Infinite, charts };
        out.normalize(source)?;
        Ok(out)
    }

    /// Integration of a top-degree form against an orientation; lower or
    /// higher degree integrates to zero.
    pub fn integrate(&self, base: &ChartComplex, o: &Orientation) -> Result<Rat> {
        if self.degree != base.dim {
            return Ok(Rat::zero());
        }
        let top: Vec<usize> = (0..base.dim).collect();
        let mut acc = Rat::zero();
        for (ci, cells) in self.charts.iter().enumerate() {
            let mut chart_acc = Rat::zero();
            for cell in cells {
                let p = cell.coeff(&top);
                if p.is_zero() {
                    continue;
                }
                chart_acc += integrate_poly_polytope(&p, &cell.polytope)?;
            }
            acc += &chart_acc * &o.0[ci].rat();
        }
        Ok(acc)
    }

    /// Push-forward along a chart-wise invertible map with relative
    /// orientation `o`: per target point, the signed sum over preimage
    /// sheets of the inverse pull-backs.
    pub fn pushforward_local_diffeo(
        &self,
        _source: &ChartComplex,
        target: &ChartComplex,
        f: &ChartMap,
        o: &RelOrientation,
    ) -> Result<PPForm> {
        if !f.flags.local_diffeo {
            return Err(Error::Unsupported("push-forward needs a chart-wise invertible map".into()));
        }
        let mut contributions: Vec<Vec<Vec<Cell>>> = vec![vec![]; target.len()];
        for (ci, a) in f.assignments.iter().enumerate() {
            let inv = a.map.inverse()?;
            let kappa = (o.0[ci] * a.map.det_sign()?).rat();
            let mut cells = Vec::new();
            for cell in &self.charts[ci] {
                let img = cell.polytope.image_invertible(&a.map)?;
                if !img.is_full_dim() {
                    continue;
                }
                let mut coeffs: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();
                for (idx, p) in &cell.coeffs {
                    let comp = p.compose_affine(&inv)?.scale(&kappa);
                    for jdx in multi_indices(target.dim, self.degree) {
                        let minor = inv.matrix.submatrix(idx, &jdx).det();
                        if minor.is_zero() {
                            continue;
                        }
                        let entry =
                            coeffs.entry(jdx).or_insert_with(|| Poly::zero(target.dim));
                        *entry = entry.add(&comp.scale(&minor));
                    }
                }
                coeffs.retain(|_, p| !p.is_zero());
                cells.push(Cell { polytope: img, coeffs });
            }
            contributions[a.target_chart].push(cells);
        }
        overlay_sum(target, self.degree, contributions)
    }

    /// Push-forward (fiber integration) along a standard-form proper
    /// submersion with relative orientation `o`. Degree drops by the fiber
    /// dimension; fibers carry the standard fiber-coordinate orientation.
    pub fn pushforward_submersion(
        &self,
        source: &ChartComplex,
        target: &ChartComplex,
        f: &ChartMap,
        o: &RelOrientation,
    ) -> Result<PPForm> {
        if !f.flags.submersion_standard_form {
            return Err(Error::Unsupported(
                "push-forward needs a standard-form submersion".into(),
            ));
        }
        let fiber_dim = source.dim - target.dim;
        let degree = self.degree.checked_sub(fiber_dim);
        let mut contributions: Vec<Vec<Vec<Cell>>> = vec![vec![]; target.len()];
        for (ci, a) in f.assignments.iter().enumerate() {
            let pd = f.product_datum(ci)?;
            let split_inv = pd.split.inverse()?;
            let kappa = (o.0[ci] * pd.split.det_sign()? * pd.ident.det_sign()?).rat();
            // Transport to split coordinates.
            let mut cells: Vec<Cell> = Vec::new();
            for cell in &self.charts[ci] {
                let img = cell.polytope.image_invertible(&pd.split)?;
                if !img.is_full_dim() {
                    continue;
                }
                let mut coeffs: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();
                for (idx, p) in &cell.coeffs {
                    let comp = p.compose_affine(&split_inv)?;
                    for jdx in multi_indices(source.dim, self.degree) {
                        let minor = split_inv.matrix.submatrix(idx, &jdx).det();
                        if minor.is_zero() {
                            continue;
                        }
                        let entry =
                            coeffs.entry(jdx).or_insert_with(|| Poly::zero(source.dim));
                        *entry = entry.add(&comp.scale(&minor));
                    }
                }
                coeffs.retain(|_, p| !p.is_zero());
                cells.push(Cell { polytope: img, coeffs });
            }
            // Integrate out fiber coordinates one at a time, last first.
            for dim_now in (pd.base_dim + 1..=source.dim).rev() {
                cells = fiber_integrate_last(cells, dim_now)?;
            }
            // Identify the base with its image in the target chart.
            let ident_inv = pd.ident.inverse()?;
            let mut mapped = Vec::with_capacity(cells.len());
            for cell in cells {
                let img = cell.polytope.image_invertible(&pd.ident)?;
                if !img.is_full_dim() {
                    continue;
                }
                let mut coeffs: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();
                for (idx, p) in &cell.coeffs {
                    let comp = p.compose_affine(&ident_inv)?.scale(&kappa);
                    for jdx in multi_indices(target.dim, degree.unwrap_or(0)) {
                        let minor = ident_inv.matrix.submatrix(idx, &jdx).det();
                        if minor.is_zero() {
                            continue;
                        }
                        let entry =
                            coeffs.entry(jdx).or_insert_with(|| Poly::zero(target.dim));
                        *entry = entry.add(&comp.scale(&minor));
                    }
                }
                coeffs.retain(|_, p| !p.is_zero());
                mapped.push(Cell { polytope: img, coeffs });
            }
            contributions[a.target_chart].push(mapped);
        }
        match degree {
            Some(k) => overlay_sum(target, k, contributions),
            // Degree below the fiber dimension: nothing survives.
            None => Ok(PPForm::zero(target, 0)),
        }
    }
}

/// Change of coordinates mapping {u_0 = 0} onto the hyperplane
/// `normal . x = offset`.
fn interface_chart(normal: &[Rat], offset: &Rat) -> Result<AffineMap> {
    let d = normal.len();
    let nn = rvec_dot(normal, normal);
    let base: Vec<Rat> = normal.iter().map(|x| &(x * offset) / &nn).collect();
    let mut cols: Vec<Vec<Rat>> = vec![normal.iter().map(|x| x / &nn).collect()];
    cols.extend(Mat::from_rows(vec![normal.to_vec()]).null_space());
    let m = Mat::from_cols(cols);
    if m.rows != d || m.cols != d {
        return Err(Error::Geometry("interface chart shape".into()));
    }
    Ok(AffineMap::new(m, base))
}

/// Common refinement of two meshes of the same chart.
fn refine_meshes(a: &[Cell], b: &[Cell]) -> Result<Vec<Polytope>> {
    let mut out = Vec::new();
    for ca in a {
        for cb in b {
            let meet = ca.polytope.intersect(&cb.polytope)?;
            if meet.is_full_dim() {
                out.push(meet);
            }
        }
    }
    Ok(out)
}

/// Assemble per-target-chart contributions (each a list of cells covering
/// part of the chart) into a single form by refining against all
/// contribution meshes and summing coefficients; uncovered regions are zero.
fn overlay_sum(
    target: &ChartComplex,
    degree: usize,
    contributions: Vec<Vec<Vec<Cell>>>,
) -> Result<PPForm> {
    let mut charts = Vec::with_capacity(target.len());
    for (ci, contribs) in contributions.into_iter().enumerate() {
        let chart = &target.charts[ci];
        let mut mesh = vec![chart.clone()];
        for contrib in &contribs {
            let mut next = Vec::new();
            for m in &mesh {
                let mut rest = vec![m.clone()];
                for cell in contrib {
                    let meet = m.intersect(&cell.polytope)?;
                    if meet.is_full_dim() {
                        next.push(meet);
                    }
                    let mut remaining = Vec::new();
                    for r in rest {
                        remaining.extend(cell.polytope.complement_within(&r)?);
                    }
                    rest = remaining;
                }
                next.extend(rest);
            }
            mesh = next;
        }
        let mut cells = Vec::with_capacity(mesh.len());
        for poly in mesh {
            let pt = poly.interior_point();
            let mut coeffs: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();
            for contrib in &contribs {
                if let Some(cell) = PPForm::cell_at(contrib, &pt) {
                    for (k, p) in &cell.coeffs {
                        let entry =
                            coeffs.entry(k.clone()).or_insert_with(|| Poly::zero(target.dim));
                        *entry = entry.add(p);
                    }
                }
            }
            coeffs.retain(|_, p| !p.is_zero());
            cells.push(Cell { polytope: poly, coeffs });
        }
        charts.push(cells);
    }
    let mut out = PPForm { degree, smoothness: Smoothness::Infinite, charts };
    out.normalize(target)?;
    Ok(out)
}

/// One step of exact fiber integration: integrate out the last coordinate of
/// every cell. Cells live in dimension `dim`; the result lives in `dim - 1`.
/// Convention: `p dx_J ^ dt` integrates to `(int p dt) dx_J` (the fiber
/// coordinate is last, with its standard orientation).
fn fiber_integrate_last(cells: Vec<Cell>, dim: usize) -> Result<Vec<Cell>> {
    let t = dim - 1;
    let mut out: Vec<Cell> = Vec::new();
    for cell in cells {
        // Split constraints by their t-coefficient.
        let mut base_hs = Vec::new();
        let mut lowers: Vec<(Vec<Rat>, Rat)> = Vec::new(); // t >= c + n.y
        let mut uppers: Vec<(Vec<Rat>, Rat)> = Vec::new(); // t <= c + n.y
        for h in &cell.polytope.halfspaces {
            let coef = &h.normal[t];
            if coef.is_zero() {
                base_hs.push(crate::polytope::Halfspace::new(
                    h.normal[..t].to_vec(),
                    h.offset.clone(),
                ));
            } else {
                // n_y . y + coef * t <= off  =>  t (<= or >=) (off - n_y.y)/coef
                let inv = coef.recip();
                let lin: Vec<Rat> = h.normal[..t].iter().map(|x| -&(x * &inv)).collect();
                let cst = &h.offset * &inv;
                if coef.is_positive() {
                    uppers.push((lin, cst));
                } else {
                    lowers.push((lin, cst));
                }
            }
        }
        lowers.sort();
        lowers.dedup();
        uppers.sort();
        uppers.dedup();
        if lowers.is_empty() || uppers.is_empty() {
            return Err(Error::Geometry("fiber integration: cell unbounded in fiber".into()));
        }
        for (lj, (ll, lc)) in lowers.iter().enumerate() {
            for (uk, (ul, uc)) in uppers.iter().enumerate() {
                // Chamber: this lower bound dominates, this upper bound
                // dominates, and the fiber segment is nonempty.
                let mut hs = base_hs.clone();
                for (oi, (ol, oc)) in lowers.iter().enumerate() {
                    if oi == lj {
                        continue;
                    }
                    // ll.y + lc >= ol.y + oc
                    let n: Vec<Rat> = ol.iter().zip(ll).map(|(o, l)| o - l).collect();
                    hs.push(crate::polytope::Halfspace::new(n, lc - oc));
                }
                for (oi, (ol, oc)) in uppers.iter().enumerate() {
                    if oi == uk {
                        continue;
                    }
                    // ul.y + uc <= ol.y + oc
                    let n: Vec<Rat> = ul.iter().zip(ol).map(|(u, o)| u - o).collect();
                    hs.push(crate::polytope::Halfspace::new(n, oc - uc));
                }
                {
                    // lower <= upper
                    let n: Vec<Rat> = ll.iter().zip(ul).map(|(l, u)| l - u).collect();
                    hs.push(crate::polytope::Halfspace::new(n, uc - lc));
                }
                let chamber = Polytope::new_for_mesh(t, hs)?;
                let Some(chamber) = chamber else { continue };
                // Integrate each coefficient with a trailing t-index.
                let mut coeffs: BTreeMap<Vec<usize>, Poly> = BTreeMap::new();
                let lower_map = bound_subst(t, ll, lc);
                let upper_map = bound_subst(t, ul, uc);
                for (idx, p) in &cell.coeffs {
                    let Some(pos) = idx.iter().position(|&i| i == t) else {
                        continue;
                    };
                    debug_assert_eq!(pos, idx.len() - 1, "t is the largest index");
                    let jdx: Vec<usize> = idx[..idx.len() - 1].to_vec();
                    let anti = t_antiderivative(p, t);
                    let val = anti
                        .compose_affine(&upper_map)?
                        .sub(&anti.compose_affine(&lower_map)?);
                    if val.is_zero() {
                        continue;
                    }
                    let entry = coeffs.entry(jdx).or_insert_with(|| Poly::zero(t));
                    *entry = entry.add(&val);
                }
                coeffs.retain(|_, p| !p.is_zero());
                out.push(Cell { polytope: chamber, coeffs });
            }
        }
    }
    // Chambers from different cells may overlap; merge by summation on a
    // common refinement of everything.
    merge_cells(t, out)
}

/// Substitution (y) -> (y, c + n.y) used to evaluate antiderivatives at an
/// affine bound.
fn bound_subst(base_dim: usize, lin: &[Rat], cst: &Rat) -> AffineMap {
    let mut m = Mat::zero(base_dim + 1, base_dim);
    for i in 0..base_dim {
        m[(i, i)] = Rat::one();
    }
    for (j, c) in lin.iter().enumerate() {
        m[(base_dim, j)] = c.clone();
    }
    let mut off = vec![Rat::zero(); base_dim + 1];
    off[base_dim] = cst.clone();
    AffineMap::new(m, off)
}

fn t_antiderivative(p: &Poly, t: usize) -> Poly {
    let mut out = Poly::zero(p.ambient_dim);
    for (e, c) in p.terms() {
        let mut e2 = e.clone();
        e2[t] += 1;
        let k = Rat::from_int(e2[t] as i64);
        out = out.add(&Poly::monomial(e2, c / &k));
    }
    out
}

/// Sum overlapping cells on their common refinement (within one chart-sized
/// region; cells need not cover anything).
fn merge_cells(dim: usize, cells: Vec<Cell>) -> Result<Vec<Cell>> {
    let mut merged: Vec<Cell> = Vec::new();
    for cell in cells {
        if merged.is_empty() {
            merged.push(cell);
            continue;
        }
        // Refine: split the new cell against existing ones, accumulating.
        let mut pending = vec![cell];
        let mut next: Vec<Cell> = Vec::new();
        for old in merged.drain(..) {
            let mut old_rests = vec![old.clone()];
            let mut still_pending = Vec::new();
            for newc in pending {
                let meet = old.polytope.intersect(&newc.polytope)?;
                if meet.is_full_dim() {
                    // Overlap region: coefficient sum.
                    let mut coeffs = old.coeffs.clone();
                    for (k, p) in &newc.coeffs {
                        let entry =
                            coeffs.entry(k.clone()).or_insert_with(|| Poly::zero(dim));
                        *entry = entry.add(p);
                    }
                    coeffs.retain(|_, p| !p.is_zero());
                    next.push(Cell { polytope: meet.clone(), coeffs });
                    // The old cell minus the overlap keeps old coefficients.
                    let mut new_old_rests = Vec::new();
                    for r in old_rests {
                        for piece in meet.complement_within(&r.polytope)? {
                            new_old_rests
                                .push(Cell { polytope: piece, coeffs: old.coeffs.clone() });
                        }
                    }
                    old_rests = new_old_rests;
                    // The new cell minus the overlap stays pending.
                    for piece in meet.complement_within(&newc.polytope)? {
                        still_pending.push(Cell { polytope: piece, coeffs: newc.coeffs.clone() });
                    }
                } else {
                    still_pending.push(newc);
                }
            }
            next.extend(old_rests);
            pending = still_pending;
        }
        next.extend(pending);
        merged = next;
    }
    Ok(merged)
}

impl Polytope {
    /// Mesh-internal constructor: canonicalize, keep only full-dimensional
    /// results, treat empties as `None`.
    fn new_for_mesh(
        dim: usize,
        hs: Vec<crate::polytope::Halfspace>,
    ) -> Result<Option<Polytope>> {
        if dim == 0 {
            // Feasibility of constant constraints.
            if hs.iter().any(|h| h.offset.is_negative()) {
                return Ok(None);
            }
            return Ok(Some(Polytope::point()));
        }
        match Polytope::new(dim, hs) {
            Ok(p) if p.is_full_dim() => Ok(Some(p)),
            Ok(_) => Ok(None),
            Err(Error::Unbounded(msg)) => Err(Error::Geometry(format!(
                "mesh cell unbounded: {msg}"
            ))),
            Err(e) => Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{ChartAssignment, MapFlags, ProductData};

    fn r(v: i64) -> Rat {
        Rat::from_int(v)
    }

    fn interval01() -> ChartComplex {
        ChartComplex::single(Polytope::interval(0, 1)).unwrap()
    }

    fn square() -> ChartComplex {
        ChartComplex::single(Polytope::box_(&[r(0), r(0)], &[r(1), r(1)]).unwrap()).unwrap()
    }

    fn xdx(base: &ChartComplex) -> PPForm {
        PPForm::monomial_form(base, &[0], Poly::var(base.dim, 0)).unwrap()
    }

    #[test]
    fn wedge_alternation_and_antisymmetry() {
        let sq = square();
        let dx = PPForm::monomial_form(&sq, &[0], Poly::one(2)).unwrap();
        let dy = PPForm::monomial_form(&sq, &[1], Poly::one(2)).unwrap();
        assert!(dx.wedge(&sq, &dx).unwrap().is_zero());
        let xy = dx.wedge(&sq, &dy).unwrap();
        let yx = dy.wedge(&sq, &dx).unwrap();
        assert!(xy.add(&sq, &yx).unwrap().is_zero());
        // (x dx) ^ (y dy) = xy dx^dy
        let a = PPForm::monomial_form(&sq, &[0], Poly::var(2, 0)).unwrap();
        let b = PPForm::monomial_form(&sq, &[1], Poly::var(2, 1)).unwrap();
        let w = a.wedge(&sq, &b).unwrap();
        let expected =
            PPForm::monomial_form(&sq, &[0, 1], Poly::monomial(vec![1, 1], Rat::one())).unwrap();
        assert!(w.equals(&sq, &expected).unwrap());
    }

    #[test]
    fn exterior_derivative_examples() {
        let sq = square();
        assert!(PPForm::constant(&sq, r(5)).d(&sq).unwrap().is_zero());
        // d(x dy) = dx^dy
        let xdy = PPForm::monomial_form(&sq, &[1], Poly::var(2, 0)).unwrap();
        let expected = PPForm::monomial_form(&sq, &[0, 1], Poly::one(2)).unwrap();
        assert!(xdy.d(&sq).unwrap().equals(&sq, &expected).unwrap());
        // d(x^2 y dx) = -x^2 dx^dy under d(f dx_I) = df ^ dx_I.
        let f = Poly::monomial(vec![2, 1], Rat::one());
        let form = PPForm::monomial_form(&sq, &[0], f).unwrap();
        let expected = PPForm::monomial_form(&sq, &[0, 1], Poly::monomial(vec![2, 0], -Rat::one()))
            .unwrap();
        assert!(form.d(&sq).unwrap().equals(&sq, &expected).unwrap());
        // d . d = 0
        let mixed = PPForm::monomial_form(&sq, &[0], Poly::monomial(vec![2, 3], Rat::new(7, 3)))
            .unwrap();
        assert!(mixed.d(&sq).unwrap().d(&sq).unwrap().is_zero());
    }

    #[test]
    fn pullback_chain_rule_example() {
        // f(t) = (t, 2t) into the square, a = x dy  =>  2t dt.
        let iv = interval01();
        let half_sq = ChartComplex::single(
            Polytope::box_(&[r(0), r(0)], &[r(1), r(2)]).unwrap(),
        )
        .unwrap();
        let f = ChartMap::new(
            &iv,
            &half_sq,
            vec![ChartAssignment {
                target_chart: 0,
                map: AffineMap::new(
                    Mat::from_rows(vec![vec![r(1)], vec![r(2)]]),
                    vec![r(0), r(0)],
                ),
            }],
            MapFlags { strongly_smooth: false, proper: true, ..Default::default() },
            vec![None],
        )
        .unwrap();
        let a = PPForm::monomial_form(&half_sq, &[1], Poly::var(2, 0)).unwrap();
        let pulled = a.pullback(&iv, &half_sq, &f).unwrap();
        let expected =
            PPForm::monomial_form(&iv, &[0], Poly::monomial(vec![1], r(2))).unwrap();
        assert!(pulled.equals(&iv, &expected).unwrap());
        // Degree overflow pulls to zero.
        let top = PPForm::monomial_form(&half_sq, &[0, 1], Poly::one(2)).unwrap();
        assert!(top.pullback(&iv, &half_sq, &f).unwrap().is_zero());
        // Identity pull-back is the identity.
        let id = ChartMap::identity(&half_sq);
        assert!(a.pullback(&half_sq, &half_sq, &id).unwrap().equals(&half_sq, &a).unwrap());
    }

    #[test]
    fn integrate_normalization_and_orientation() {
        let iv = interval01();
        let dx = PPForm::monomial_form(&iv, &[0], Poly::one(1)).unwrap();
        let o = Orientation::standard(&iv);
        assert_eq!(dx.integrate(&iv, &o).unwrap(), r(1));
        assert_eq!(dx.integrate(&iv, &o.reversed()).unwrap(), r(-1));
        // degree mismatch integrates to zero
        let f0 = PPForm::constant(&iv, r(3));
        assert_eq!(f0.integrate(&iv, &o).unwrap(), Rat::zero());
        // iterated-integral oracle: xy over the unit square is 1/4
        let sq = square();
        let xy = PPForm::monomial_form(&sq, &[0, 1], Poly::monomial(vec![1, 1], Rat::one()))
            .unwrap();
        assert_eq!(xy.integrate(&sq, &Orientation::standard(&sq)).unwrap(), Rat::new(1, 4));
    }

    fn proj1_map(sq: &ChartComplex, iv: &ChartComplex) -> ChartMap {
        ChartMap::new(
            sq,
            iv,
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
    fn pushforward_projection_convention() {
        // Frozen by the fiber-orientation oracle: proj_* (dx^dy) = +dx.
        let sq = square();
        let iv = interval01();
        let f = proj1_map(&sq, &iv);
        let o = RelOrientation::plus(1);
        let top = PPForm::monomial_form(&sq, &[0, 1], Poly::one(2)).unwrap();
        let pushed = top.pushforward_submersion(&sq, &iv, &f, &o).unwrap();
        let expected = PPForm::monomial_form(&iv, &[0], Poly::one(1)).unwrap();
        assert!(pushed.equals(&iv, &expected).unwrap());
        // Degree below the fiber dimension dies.
        let f0 = PPForm::constant(&sq, r(1));
        assert!(f0.pushforward_submersion(&sq, &iv, &f, &o).unwrap().is_zero());
        // To the point: top form integrates.
        let pt = ChartComplex::point();
        let to_pt = ChartMap::to_point(&sq);
        let xy = PPForm::monomial_form(&sq, &[0, 1], Poly::monomial(vec![1, 1], Rat::one()))
            .unwrap();
        let pushed = xy.pushforward_submersion(&sq, &pt, &to_pt, &o).unwrap();
        let expected = PPForm::constant(&pt, Rat::new(1, 4));
        assert!(pushed.equals(&pt, &expected).unwrap());
    }

    #[test]
    fn pushforward_double_cover_counts_sheets() {
        // Two source charts mapping onto one interval: push-forward of 1 is 2.
        let two = ChartComplex::new(
            1,
            vec![Polytope::interval(0, 1), Polytope::interval(0, 1)],
        )
        .unwrap();
        let iv = interval01();
        let f = ChartMap::new(
            &two,
            &iv,
            vec![
                ChartAssignment { target_chart: 0, map: AffineMap::identity(1) },
                ChartAssignment { target_chart: 0, map: AffineMap::identity(1) },
            ],
            MapFlags { local_diffeo: true, proper: true, ..Default::default() },
            vec![None, None],
        )
        .unwrap();
        let one = PPForm::constant(&two, r(1));
        let pushed = one
            .pushforward_local_diffeo(&two, &iv, &f, &RelOrientation::canonical(&f).unwrap())
            .unwrap();
        assert!(pushed.equals(&iv, &PPForm::constant(&iv, r(2))).unwrap());
    }

    #[test]
    fn pushforward_inverse_diffeo_matches_pullback() {
        // For a global affine diffeo with canonical orientation, f_* = (f^{-1})^*.
        let iv = interval01();
        let shifted = ChartComplex::single(Polytope::interval(1, 2)).unwrap();
        let f = ChartMap::new(
            &iv,
            &shifted,
            vec![ChartAssignment { target_chart: 0, map: AffineMap::translation(vec![r(1)]) }],
            MapFlags { local_diffeo: true, proper: true, ..Default::default() },
            vec![None],
        )
        .unwrap();
        let finv = f.inverse(&iv, &shifted).unwrap();
        let a = xdx(&iv);
        let pushed = a
            .pushforward_local_diffeo(&iv, &shifted, &f, &RelOrientation::canonical(&f).unwrap())
            .unwrap();
        let pulled = a.pullback(&shifted, &iv, &finv).unwrap();
        assert!(pushed.equals(&shifted, &pulled).unwrap());
    }

    #[test]
    fn smoothness_of_piecewise_mesh() {
        // Two cells of [0,1]: x^2 on [0,1/2], linear continuation on [1/2,1]:
        // values agree at 1/2 but derivatives disagree -> C^0.
        let iv = interval01();
        let left = Polytope::box_(&[r(0)], &[Rat::new(1, 2)]).unwrap();
        let right = Polytope::box_(&[Rat::new(1, 2)], &[r(1)]).unwrap();
        let mut c0 = BTreeMap::new();
        c0.insert(vec![], Poly::monomial(vec![2], Rat::one()));
        let mut c1 = BTreeMap::new();
        c1.insert(
            vec![],
            Poly::affine(&[Rat::from_int(3)], &-Rat::new(5, 4)),
        );
        let f = PPForm::validated(
            &iv,
            0,
            vec![vec![
                Cell { polytope: left.clone(), coeffs: c0.clone() },
                Cell { polytope: right.clone(), coeffs: c1 },
            ]],
            None,
        )
        .unwrap();
        assert_eq!(f.smoothness, Smoothness::Class(0));
        assert!(f.d(&iv).is_err());
        // A genuinely C^1 spline: x^2 then (1/2)(2x - 1/2)... use Hermite-ish
        // pieces 2x^2 and -2x^2 + 4x - 1 matching value and slope at 1/2.
        let mut h0 = BTreeMap::new();
        h0.insert(vec![], Poly::monomial(vec![2], r(2)));
        let mut h1 = BTreeMap::new();
        h1.insert(
            vec![],
            Poly::from_wire(
                1,
                &[("0".into(), "-1".into()), ("1".into(), "4".into()), ("2".into(), "-2".into())]
                    .into_iter()
                    .collect(),
            )
            .unwrap(),
        );
        let g = PPForm::validated(
            &iv,
            0,
            vec![vec![
                Cell { polytope: left, coeffs: h0 },
                Cell { polytope: right, coeffs: h1 },
            ]],
            Some(1),
        )
        .unwrap();
        assert_eq!(g.smoothness, Smoothness::Class(1));
        let dg = g.d(&iv).unwrap();
        assert_eq!(dg.smoothness, Smoothness::Class(0));
        // Stokes on [0,1]: integral of dg equals g(1) - g(0) = 1 - 0.
        let o = Orientation::standard(&iv);
        assert_eq!(dg.integrate(&iv, &o).unwrap(), r(1));
    }

    #[test]
    fn leibniz_rule() {
        let sq = square();
        let a = PPForm::monomial_form(&sq, &[0], Poly::monomial(vec![1, 2], Rat::new(2, 3)))
            .unwrap();
        let b = PPForm::monomial_form(&sq, &[1], Poly::monomial(vec![3, 0], r(5))).unwrap();
        let lhs = a.wedge(&sq, &b).unwrap().d(&sq).unwrap();
        let da_b = a.d(&sq).unwrap().wedge(&sq, &b).unwrap();
        let a_db = a.wedge(&sq, &b.d(&sq).unwrap()).unwrap();
        // |a| = 1: d(a^b) = da^b - a^db.
        let rhs = da_b.sub(&sq, &a_db).unwrap();
        assert!(lhs.equals(&sq, &rhs).unwrap());
    }

    #[test]
    fn fiber_integration_over_triangle_cells() {
        // Mesh of the square into two triangles; fiber integration of dx^dy
        // over proj_1 must still give +dx (chamber decomposition at work).
        let sq = square();
        let iv = interval01();
        let f = proj1_map(&sq, &iv);
        let lower = Polytope::new(
            2,
            vec![
                crate::polytope::Halfspace::new(vec![r(-1), r(0)], r(0)),
                crate::polytope::Halfspace::new(vec![r(0), r(-1)], r(0)),
                crate::polytope::Halfspace::new(vec![r(-1), r(1)], r(0)),
                crate::polytope::Halfspace::new(vec![r(1), r(0)], r(1)),
            ],
        )
        .unwrap();
        let upper = Polytope::new(
            2,
            vec![
                crate::polytope::Halfspace::new(vec![r(-1), r(0)], r(0)),
                crate::polytope::Halfspace::new(vec![r(0), r(1)], r(1)),
                crate::polytope::Halfspace::new(vec![r(1), r(-1)], r(0)),
                crate::polytope::Halfspace::new(vec![r(1), r(0)], r(1)),
            ],
        )
        .unwrap();
        let mut cl = BTreeMap::new();
        cl.insert(vec![0, 1], Poly::one(2));
        let mut cu = BTreeMap::new();
        cu.insert(vec![0, 1], Poly::one(2));
        let a = PPForm::validated(
            &sq,
            2,
            vec![vec![
                Cell { polytope: lower, coeffs: cl },
                Cell { polytope: upper, coeffs: cu },
            ]],
            None,
        )
        .unwrap();
        let pushed = a
            .pushforward_submersion(&sq, &iv, &f, &RelOrientation::plus(1))
            .unwrap();
        let expected = PPForm::monomial_form(&iv, &[0], Poly::one(1)).unwrap();
        assert!(pushed.equals(&iv, &expected).unwrap());
    }
}
