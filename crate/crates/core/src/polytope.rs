//! Compact convex rational polytopes in H-representation.
//!
//! `normal . x <= offset` per halfspace. Construction canonicalizes: exact LP
//! feasibility, boundedness enforcement, implicit-equality detection (giving
//! the affine dimension), irredundancy, normalization, and deterministic
//! ordering. The empty polytope is a first-class value.

use once_cell::sync::OnceCell;

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::linalg::{rvec_dot, rvec_is_zero, Mat, RVec};
use crate::lp::{maximize, LpOutcome};
use crate::rat::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Halfspace {
    pub normal: RVec,
    pub offset: Rat,
}

impl Halfspace {
    pub fn new(normal: RVec, offset: Rat) -> Self {
        Halfspace { normal, offset }
    }

    /// Scale so the normal has coprime integer entries (direction preserved).
    fn normalized(&self) -> Halfspace {
        let mut denom_lcm = BigInt::one();
        for x in &self.normal {
            denom_lcm = denom_lcm.lcm(x.denom());
        }
        let mut scaled: Vec<BigInt> = self
            .normal
            .iter()
            .map(|x| x.numer() * (&denom_lcm / x.denom()))
            .collect();
        let mut g = BigInt::zero();
        for x in &scaled {
            g = g.gcd(x);
        }
        if g.is_zero() {
            return self.clone();
        }
        for x in &mut scaled {
            *x /= &g;
        }
        // factor = denom_lcm / g (positive)
        let factor = Rat::from_big(denom_lcm, g);
        let normal = scaled.into_iter().map(|x| Rat::from_big(x, BigInt::one())).collect();
        Halfspace { normal, offset: &self.offset * &factor }
    }

    pub fn eval_slack(&self, x: &[Rat]) -> Rat {
        &self.offset - &rvec_dot(&self.normal, x)
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        !self.eval_slack(x).is_negative()
    }

    /// The reversed halfspace `normal . x >= offset`.
    pub fn flipped(&self) -> Halfspace {
        Halfspace {
            normal: self.normal.iter().map(|x| -x).collect(),
            offset: -&self.offset,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Polytope {
    pub ambient_dim: usize,
    /// Canonical irredundant halfspaces (sorted); empty polytope has none.
    pub halfspaces: Vec<Halfspace>,
    empty: bool,
    /// Affine dimension; 0 for the empty polytope by convention.
    dim: usize,
    /// Normals of implicit equalities (affine hull cuts), canonicalized.
    equalities: Vec<Halfspace>,
    /// Cached relative-interior point (always set for full-dimensional).
    inner: Option<RVec>,
    vertices: OnceCell<Vec<RVec>>,
}

impl PartialEq for Polytope {
    /// Set equality (both polytopes are compact convex hulls of vertices).
    fn eq(&self, other: &Polytope) -> bool {
        if self.ambient_dim != other.ambient_dim {
            return false;
        }
        if self.empty || other.empty {
            return self.empty == other.empty;
        }
        self.vertices().iter().all(|v| other.contains(v))
            && other.vertices().iter().all(|v| self.contains(v))
    }
}

impl Eq for Polytope {}

impl Polytope {
    /// Canonicalizing constructor. Errors on unbounded input.
    pub fn new(ambient_dim: usize, halfspaces: Vec<Halfspace>) -> Result<Polytope> {
        Polytope::canonicalize(ambient_dim, halfspaces, false)
    }

    /// Constructor for polytopes known to be subsets of a bounded set
    /// (intersections, preimages against bounded domains, facets); skips the
    /// boundedness probes.
    fn new_known_bounded(ambient_dim: usize, halfspaces: Vec<Halfspace>) -> Result<Polytope> {
        Polytope::canonicalize(ambient_dim, halfspaces, true)
    }

    fn canonicalize(
        ambient_dim: usize,
        halfspaces: Vec<Halfspace>,
        known_bounded: bool,
    ) -> Result<Polytope> {
        for h in &halfspaces {
            if h.normal.len() != ambient_dim {
                return Err(Error::Dim(format!(
                    "halfspace normal arity {} in ambient dim {ambient_dim}",
                    h.normal.len()
                )));
            }
        }
        // Drop trivial 0 <= c constraints; detect trivially infeasible ones.
        let mut hs: Vec<Halfspace> = Vec::new();
        for h in &halfspaces {
            if rvec_is_zero(&h.normal) {
                if h.offset.is_negative() {
                    return Ok(Polytope::empty(ambient_dim));
                }
                continue;
            }
            hs.push(h.normalized());
        }
        hs.sort_by(cmp_halfspace);
        hs.dedup();

        if ambient_dim == 0 {
            return Ok(Polytope {
                ambient_dim: 0,
                halfspaces: vec![],
                empty: false,
                dim: 0,
                equalities: vec![],
                inner: Some(vec![]),
                vertices: OnceCell::new(),
            });
        }
        if hs.is_empty() {
            return Err(Error::Unbounded("no constraints".into()));
        }

        // One max-slack LP decides emptiness, detects interior points, and
        // produces a relative-interior witness for the full-dimensional case:
        // maximize t subject to n_i.x + t <= c_i and t <= 1.
        let m = hs.len();
        let mut cheb = Mat::zero(m + 1, ambient_dim + 1);
        let mut rhs: RVec = Vec::with_capacity(m + 1);
        for (i, h) in hs.iter().enumerate() {
            for j in 0..ambient_dim {
                cheb[(i, j)] = h.normal[j].clone();
            }
            cheb[(i, ambient_dim)] = Rat::one();
            rhs.push(h.offset.clone());
        }
        cheb[(m, ambient_dim)] = Rat::one();
        rhs.push(Rat::one());
        let mut obj = vec![Rat::zero(); ambient_dim + 1];
        obj[ambient_dim] = Rat::one();
        let (slack, inner) = match maximize(&cheb, &rhs, &obj) {
            LpOutcome::Optimal { value, point } => {
                let x = point[..ambient_dim].to_vec();
                (value, x)
            }
            _ => unreachable!("max-slack program is feasible and bounded"),
        };
        if slack.is_negative() {
            return Ok(Polytope::empty(ambient_dim));
        }

        let (a, b) = to_system(ambient_dim, &hs);
        if !known_bounded {
            // Boundedness: max and min of every coordinate must be attained.
            for i in 0..ambient_dim {
                for sgn in [1i64, -1] {
                    let mut c = vec![Rat::zero(); ambient_dim];
                    c[i] = Rat::from_int(sgn);
                    if matches!(maximize(&a, &b, &c), LpOutcome::Unbounded) {
                        return Err(Error::Unbounded(format!("coordinate {i} unbounded")));
                    }
                }
            }
        }

        let full_dim = slack.is_positive();
        let mut equalities = Vec::new();
        if !full_dim {
            // Implicit equalities: halfspaces tight on all of P.
            for h in &hs {
                let neg: RVec = h.normal.iter().map(|x| -x).collect();
                if let LpOutcome::Optimal { value, .. } = maximize(&a, &b, &neg) {
                    // min of normal.x is -value.
                    if -&value == h.offset {
                        equalities.push(h.clone());
                    }
                }
            }
        }
        let eq_rank = if equalities.is_empty() {
            0
        } else {
            Mat::from_rows(equalities.iter().map(|h| h.normal.clone()).collect()).rank()
        };
        let dim = ambient_dim - eq_rank;

        // Irredundancy: drop halfspaces implied by the others. A bounded
        // full-dimensional polytope needs at least dim+1 facets, so small
        // systems are already irredundant.
        let mut kept = hs.clone();
        if !(full_dim && m <= ambient_dim + 1) {
            let mut i = 0;
            while i < kept.len() {
                let mut trial = kept.clone();
                let h = trial.remove(i);
                // Bound the test LP so it cannot be unbounded.
                let mut bounded = trial.clone();
                bounded.push(Halfspace::new(h.normal.clone(), &h.offset + &Rat::one()));
                let (ta, tb) = to_system(ambient_dim, &bounded);
                match maximize(&ta, &tb, &h.normal) {
                    LpOutcome::Optimal { value, .. } if value <= h.offset => {
                        kept = trial;
                    }
                    _ => i += 1,
                }
            }
        }
        Ok(Polytope {
            ambient_dim,
            halfspaces: kept,
            empty: false,
            dim,
            equalities,
            inner: full_dim.then_some(inner),
            vertices: OnceCell::new(),
        })
    }

    pub fn empty(ambient_dim: usize) -> Polytope {
        Polytope {
            ambient_dim,
            halfspaces: vec![],
            empty: true,
            dim: 0,
            equalities: vec![],
            inner: None,
            vertices: OnceCell::new(),
        }
    }

    /// The unique point of 0-dimensional space.
    pub fn point() -> Polytope {
        Polytope::new(0, vec![]).expect("point polytope")
    }

    /// Axis-aligned box with rational corners.
    pub fn box_(lo: &[Rat], hi: &[Rat]) -> Result<Polytope> {
        assert_eq!(lo.len(), hi.len());
        let d = lo.len();
        let mut hs = Vec::new();
        for i in 0..d {
            let mut n = vec![Rat::zero(); d];
            n[i] = Rat::one();
            hs.push(Halfspace::new(n.clone(), hi[i].clone()));
            let neg: RVec = n.iter().map(|x| -x).collect();
            hs.push(Halfspace::new(neg, -&lo[i]));
        }
        Polytope::new_known_bounded(d, hs)
    }

    pub fn interval(lo: i64, hi: i64) -> Polytope {
        Polytope::box_(&[Rat::from_int(lo)], &[Rat::from_int(hi)]).expect("interval")
    }

    /// Standard simplex {x_i >= 0, sum x_i <= 1}.
    pub fn standard_simplex(d: usize) -> Polytope {
        let mut hs = Vec::new();
        for i in 0..d {
            let mut n = vec![Rat::zero(); d];
            n[i] = -Rat::one();
            hs.push(Halfspace::new(n, Rat::zero()));
        }
        hs.push(Halfspace::new(vec![Rat::one(); d], Rat::one()));
        Polytope::new(d, hs).expect("standard simplex")
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    /// Affine dimension (None for the empty polytope).
    pub fn dim(&self) -> Option<usize> {
        if self.empty {
            None
        } else {
            Some(self.dim)
        }
    }

    pub fn is_full_dim(&self) -> bool {
        !self.empty && self.dim == self.ambient_dim
    }

    pub fn equalities(&self) -> &[Halfspace] {
        &self.equalities
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        assert_eq!(x.len(), self.ambient_dim);
        !self.empty && self.halfspaces.iter().all(|h| h.contains(x))
    }

    pub fn vertices(&self) -> &Vec<RVec> {
        self.vertices.get_or_init(|| {
            if self.empty {
                return vec![];
            }
            if self.ambient_dim == 0 {
                return vec![vec![]];
            }
            let d = self.ambient_dim;
            let m = self.halfspaces.len();
            let mut verts: Vec<RVec> = Vec::new();
            for idx in combinations(m, d) {
                let a = Mat::from_rows(
                    idx.iter().map(|&i| self.halfspaces[i].normal.clone()).collect(),
                );
                if a.rank() != d {
                    continue;
                }
                let b: RVec = idx.iter().map(|&i| self.halfspaces[i].offset.clone()).collect();
                if let Some(x) = a.solve(&b) {
                    if self.contains(&x) && !verts.contains(&x) {
                        verts.push(x);
                    }
                }
            }
            verts.sort();
            verts
        })
    }

    /// A relative-interior point: the cached max-slack witness when the
    /// polytope is full-dimensional, else the vertex barycenter.
    pub fn interior_point(&self) -> RVec {
        match &self.inner {
            Some(x) => x.clone(),
            None => self.barycenter(),
        }
    }

    /// Exact barycenter of the vertex set: a relative-interior point.
    pub fn barycenter(&self) -> RVec {
        let vs = self.vertices();
        assert!(!vs.is_empty(), "barycenter of empty polytope");
        let n = Rat::from_int(vs.len() as i64);
        (0..self.ambient_dim)
            .map(|i| {
                let mut acc = Rat::zero();
                for v in vs {
                    acc += v[i].clone();
                }
                &acc / &n
            })
            .collect()
    }

    pub fn intersect(&self, other: &Polytope) -> Result<Polytope> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::Dim("intersection in different ambient spaces".into()));
        }
        if self.empty || other.empty {
            return Ok(Polytope::empty(self.ambient_dim));
        }
        let mut hs = self.halfspaces.clone();
        hs.extend(other.halfspaces.iter().cloned());
        Polytope::new_known_bounded(self.ambient_dim, hs)
    }

    /// Intersection with the hyperplane `lin . x = cst`.
    pub fn cut_with_equality(&self, lin: &[Rat], cst: &Rat) -> Result<Polytope> {
        if self.empty {
            return Ok(Polytope::empty(self.ambient_dim));
        }
        let mut hs = self.halfspaces.clone();
        hs.push(Halfspace::new(lin.to_vec(), cst.clone()));
        hs.push(Halfspace::new(lin.iter().map(|x| -x).collect(), -cst));
        Polytope::new_known_bounded(self.ambient_dim, hs)
    }

    /// `domain ∩ a^{-1}(self)`: pull every halfspace through the affine map.
    pub fn affine_preimage(&self, a: &AffineMap, domain: &Polytope) -> Result<Polytope> {
        if a.codomain_dim() != self.ambient_dim {
            return Err(Error::Dim(format!(
                "preimage: map into dim {} of polytope in dim {}",
                a.codomain_dim(),
                self.ambient_dim
            )));
        }
        if a.domain_dim() != domain.ambient_dim {
            return Err(Error::Dim("preimage: domain polytope dimension".into()));
        }
        if self.empty || domain.empty {
            return Ok(Polytope::empty(domain.ambient_dim));
        }
        let mut hs = domain.halfspaces.clone();
        let at = a.matrix.transpose();
        for h in &self.halfspaces {
            // n.(Mx + t) <= c  =>  (M^T n).x <= c - n.t
            hs.push(Halfspace::new(
                at.mul_vec(&h.normal),
                &h.offset - &rvec_dot(&h.normal, &a.offset),
            ));
        }
        Polytope::new_known_bounded(domain.ambient_dim, hs)
    }

    /// Image under an invertible affine map.
    pub fn image_invertible(&self, a: &AffineMap) -> Result<Polytope> {
        let inv = a.inverse()?;
        if self.empty {
            return Ok(Polytope::empty(a.codomain_dim()));
        }
        self.affine_preimage(&inv, &Polytope::free_space_stub(a.codomain_dim(), self, a)?)
    }

    // Image helper: bounding box of the image provides a bounded "domain".
    fn free_space_stub(dim: usize, src: &Polytope, a: &AffineMap) -> Result<Polytope> {
        let verts = src.vertices();
        assert!(!verts.is_empty());
        let imgs: Vec<RVec> = verts.iter().map(|v| a.apply(v)).collect();
        let mut lo = imgs[0].clone();
        let mut hi = imgs[0].clone();
        for p in &imgs {
            for i in 0..dim {
                if p[i] < lo[i] {
                    lo[i] = p[i].clone();
                }
                if p[i] > hi[i] {
                    hi[i] = p[i].clone();
                }
            }
        }
        Polytope::box_(&lo, &hi)
    }

    /// Does `self` contain `other` (as sets)?
    pub fn contains_polytope(&self, other: &Polytope) -> bool {
        other.is_empty() || other.vertices().iter().all(|v| self.contains(v))
    }

    /// Decompose `region \ self` into polytopes with disjoint interiors.
    /// Only full-dimensional pieces are returned.
    pub fn complement_within(&self, region: &Polytope) -> Result<Vec<Polytope>> {
        assert_eq!(self.ambient_dim, region.ambient_dim);
        if self.empty {
            return Ok(vec![region.clone()]);
        }
        let mut pieces = Vec::new();
        let mut prefix: Vec<Halfspace> = Vec::new();
        for h in &self.halfspaces {
            let mut hs = region.halfspaces.clone();
            hs.extend(prefix.iter().cloned());
            hs.push(h.flipped());
            let piece = Polytope::new_known_bounded(self.ambient_dim, hs)?;
            if piece.is_full_dim() {
                pieces.push(piece);
            }
            prefix.push(h.clone());
        }
        Ok(pieces)
    }

    /// Is `region` covered by the union of `parts` (up to measure zero, which
    /// for closed sets implies actual covering)?
    pub fn union_covers(region: &Polytope, parts: &[Polytope]) -> Result<bool> {
        let mut leftover = vec![region.clone()];
        if region.is_empty() {
            return Ok(true);
        }
        for part in parts {
            let mut next = Vec::new();
            for piece in &leftover {
                if part.contains_polytope(piece) {
                    continue;
                }
                next.extend(part.complement_within(piece)?);
            }
            leftover = next;
            if leftover.is_empty() {
                return Ok(true);
            }
        }
        Ok(leftover.is_empty())
    }

    /// Affine parametrization of the hyperplane `normal . x = offset`:
    /// a map from (d-1)-space onto the hyperplane.
    pub fn hyperplane_param(normal: &[Rat], offset: &Rat) -> AffineMap {
        let d = normal.len();
        assert!(!rvec_is_zero(normal), "degenerate hyperplane");
        let nn = rvec_dot(normal, normal);
        let base: RVec = normal.iter().map(|x| &(x * offset) / &nn).collect();
        let basis = Mat::from_rows(vec![normal.to_vec()]).null_space();
        assert_eq!(basis.len(), d - 1);
        let mut m = Mat::zero(d, d - 1);
        for (j, col) in basis.iter().enumerate() {
            for i in 0..d {
                m[(i, j)] = col[i].clone();
            }
        }
        AffineMap::new(m, base)
    }

    /// The facet polytope cut by canonical halfspace `i`, in its own
    /// (d-1)-dimensional coordinates, with the inclusion parametrization.
    pub fn facet(&self, i: usize) -> Result<(Polytope, AffineMap)> {
        let h = &self.halfspaces[i];
        let param = Polytope::hyperplane_param(&h.normal, &h.offset);
        let facet = self.affine_preimage(&param, &big_box(param.domain_dim(), self, &param)?)?;
        Ok((facet, param))
    }
}

/// Bounded parameter-space box that surely contains the preimage of `p`
/// under the injective affine `param`.
fn big_box(dim: usize, p: &Polytope, param: &AffineMap) -> Result<Polytope> {
    // Solve param(u) = v for each vertex v to bound the preimage.
    if p.is_empty() {
        return Polytope::box_(&vec![Rat::zero(); dim], &vec![Rat::zero(); dim]);
    }
    let mut lo = vec![Rat::zero(); dim];
    let mut hi = vec![Rat::zero(); dim];
    let mut init = false;
    for v in p.vertices() {
        let rhs: RVec = v.iter().zip(&param.offset).map(|(a, b)| a - b).collect();
        if let Some(u) = param.matrix.solve(&rhs) {
            if !init {
                lo = u.clone();
                hi = u;
                init = true;
            } else {
                for i in 0..dim {
                    if u[i] < lo[i] {
                        lo[i] = u[i].clone();
                    }
                    if u[i] > hi[i] {
                        hi[i] = u[i].clone();
                    }
                }
            }
        }
    }
    if !init {
        // Preimage is empty; any box will do.
        lo = vec![-Rat::one(); dim];
        hi = vec![Rat::one(); dim];
    }
    let one = Rat::one();
    let lo: RVec = lo.iter().map(|x| x - &one).collect();
    let hi: RVec = hi.iter().map(|x| x + &one).collect();
    Polytope::box_(&lo, &hi)
}

fn to_system(dim: usize, hs: &[Halfspace]) -> (Mat, RVec) {
    let a = Mat::from_rows(hs.iter().map(|h| h.normal.clone()).collect());
    let b: RVec = hs.iter().map(|h| h.offset.clone()).collect();
    if hs.is_empty() {
        (Mat::zero(0, dim), vec![])
    } else {
        (a, b)
    }
}

fn cmp_halfspace(a: &Halfspace, b: &Halfspace) -> std::cmp::Ordering {
    a.normal.cmp(&b.normal).then_with(|| a.offset.cmp(&b.offset))
}

/// All k-subsets of {0..n} in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] + 1 <= n - (k - i) {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rat {
        Rat::from_int(v)
    }

    #[test]
    fn unit_square_canonical() {
        let p = Polytope::box_(&[r(0), r(0)], &[r(1), r(1)]).unwrap();
        assert!(p.is_full_dim());
        assert_eq!(p.halfspaces.len(), 4);
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.barycenter(), vec![Rat::new(1, 2), Rat::new(1, 2)]);
    }

    #[test]
    fn redundant_halfspace_removed() {
        let mut p = Polytope::box_(&[r(0)], &[r(1)]).unwrap();
        let mut hs = p.halfspaces.clone();
        hs.push(Halfspace::new(vec![r(1)], r(5)));
        hs.push(Halfspace::new(vec![r(2)], r(2))); // duplicate of x <= 1
        p = Polytope::new(1, hs).unwrap();
        assert_eq!(p.halfspaces.len(), 2);
    }

    #[test]
    fn empty_and_unbounded() {
        let hs = vec![
            Halfspace::new(vec![r(1)], r(0)),
            Halfspace::new(vec![r(-1)], r(-1)),
        ];
        assert!(Polytope::new(1, hs).unwrap().is_empty());
        let hs = vec![Halfspace::new(vec![r(1)], r(0))];
        assert!(matches!(Polytope::new(1, hs), Err(Error::Unbounded(_))));
    }

    #[test]
    fn lower_dimensional_intersection() {
        let p = Polytope::box_(&[r(0), r(0)], &[r(1), r(1)]).unwrap();
        let q = Polytope::box_(&[r(1), r(0)], &[r(2), r(1)]).unwrap();
        let i = p.intersect(&q).unwrap();
        assert!(!i.is_empty());
        assert_eq!(i.dim(), Some(1));
        assert!(!i.is_full_dim());
    }

    #[test]
    fn preimage_of_interval_under_projection() {
        // P = [0,1], a(x, y) = x, D = [0,2]^2  =>  [0,1] x [0,2].
        let p = Polytope::interval(0, 1);
        let d = Polytope::box_(&[r(0), r(0)], &[r(2), r(2)]).unwrap();
        let a = AffineMap::coordinate_projection(2, &[0]);
        let pre = p.affine_preimage(&a, &d).unwrap();
        let expected = Polytope::box_(&[r(0), r(0)], &[r(1), r(2)]).unwrap();
        assert_eq!(pre, expected);
        // identity, P = D => P
        let id = AffineMap::identity(1);
        assert_eq!(p.affine_preimage(&id, &p).unwrap(), p);
        // disjoint under the map => empty
        let far = Polytope::interval(5, 6);
        assert!(far.affine_preimage(&a, &d).unwrap().is_empty());
    }

    #[test]
    fn cube_vertices_and_facets() {
        let p = Polytope::box_(&[r(0), r(0), r(0)], &[r(1), r(1), r(1)]).unwrap();
        assert_eq!(p.vertices().len(), 8);
        assert_eq!(p.halfspaces.len(), 6);
        for i in 0..6 {
            let (f, param) = p.facet(i).unwrap();
            assert!(f.is_full_dim());
            assert_eq!(f.ambient_dim, 2);
            assert_eq!(f.vertices().len(), 4);
            for v in f.vertices() {
                assert!(p.contains(&param.apply(v)));
            }
        }
    }

    #[test]
    fn complement_and_covering() {
        let region = Polytope::box_(&[r(0), r(0)], &[r(2), r(1)]).unwrap();
        let left = Polytope::box_(&[r(0), r(0)], &[r(1), r(1)]).unwrap();
        let right = Polytope::box_(&[r(1), r(0)], &[r(2), r(1)]).unwrap();
        let comp = left.complement_within(&region).unwrap();
        assert_eq!(comp.len(), 1);
        assert_eq!(comp[0], right);
        assert!(Polytope::union_covers(&region, &[left.clone(), right.clone()]).unwrap());
        assert!(!Polytope::union_covers(&region, &[left]).unwrap());
    }

    #[test]
    fn image_under_invertible_map() {
        let p = Polytope::interval(-1, 1);
        let a = AffineMap::new(Mat::from_rows(vec![vec![r(-1)]]), vec![r(0)]);
        assert_eq!(p.image_invertible(&a).unwrap(), p);
        let shift = AffineMap::translation(vec![r(3)]);
        assert_eq!(p.image_invertible(&shift).unwrap(), Polytope::interval(2, 4));
    }

    #[test]
    fn point_polytope() {
        let p = Polytope::point();
        assert!(p.is_full_dim());
        assert_eq!(p.dim(), Some(0));
        assert_eq!(p.vertices(), &vec![vec![]]);
    }

    #[test]
    fn set_equality_ignores_representation() {
        let p = Polytope::box_(&[r(0)], &[r(1)]).unwrap();
        let mut hs = p.halfspaces.clone();
        hs.push(Halfspace::new(vec![Rat::new(1, 7)], Rat::new(1, 14)));
        let q = Polytope::new(1, hs).unwrap();
        assert_eq!(q.vertices(), &vec![vec![r(0)], vec![Rat::new(1, 2)]]);
        assert_ne!(p, q);
        let q2 = Polytope::new(
            1,
            vec![
                Halfspace::new(vec![Rat::new(2, 3)], Rat::new(2, 3)),
                Halfspace::new(vec![r(-5)], r(0)),
            ],
        )
        .unwrap();
        assert_eq!(p, q2);
    }
}
