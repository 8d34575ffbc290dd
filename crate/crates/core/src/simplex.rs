//! Simplices, exact integration of polynomials, and triangulation.

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::linalg::{rvec_sub, Mat, RVec};
use crate::poly::Poly;
use crate::polytope::Polytope;
use crate::rat::Rat;

/// A d-simplex in R^d given by d+1 vertices (possibly degenerate).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Simplex {
    pub vertices: Vec<RVec>,
}

impl Simplex {
    pub fn new(mut vertices: Vec<RVec>) -> Self {
        let d = vertices.len().checked_sub(1).expect("simplex needs vertices");
        assert!(vertices.iter().all(|v| v.len() == d), "simplex vertex arity");
        vertices.sort();
        Simplex { vertices }
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// The affine map sending the standard simplex onto this one.
    pub fn chart(&self) -> AffineMap {
        let d = self.dim();
        let cols: Vec<RVec> =
            (1..=d).map(|i| rvec_sub(&self.vertices[i], &self.vertices[0])).collect();
        AffineMap::new(Mat::from_cols(cols), self.vertices[0].clone())
    }

    pub fn volume(&self) -> Rat {
        let d = self.dim();
        if d == 0 {
            return Rat::one();
        }
        let det = self.chart().det();
        &det.abs() / &Rat::factorial(d as u64)
    }
}

/// Exact integral of a monomial over the standard simplex:
/// integral of t^a over {t_i >= 0, sum t <= 1} equals (prod a_i!) / (d + sum a)!.
fn monomial_over_standard_simplex(exps: &[u32]) -> Rat {
    let d = exps.len() as u64;
    let mut numer = Rat::one();
    let mut total = 0u64;
    for &a in exps {
        numer *= Rat::factorial(a as u64);
        total += a as u64;
    }
    &numer / &Rat::factorial(d + total)
}

/// Exact Lebesgue integral of `p` over `s`.
pub fn integrate_poly_simplex(p: &Poly, s: &Simplex) -> Result<Rat> {
    if p.ambient_dim != s.dim() {
        return Err(Error::Dim(format!(
            "integrate: polynomial in dim {} over {}-simplex",
            p.ambient_dim,
            s.dim()
        )));
    }
    if s.dim() == 0 {
        return Ok(p.eval(&[]));
    }
    let chart = s.chart();
    let jac = chart.det().abs();
    if jac.is_zero() {
        return Ok(Rat::zero());
    }
    let q = p.compose_affine(&chart)?;
    let mut acc = Rat::zero();
    for (e, c) in q.terms() {
        acc += c * &monomial_over_standard_simplex(e);
    }
    Ok(&acc * &jac)
}

/// Deterministic triangulation of a full-dimensional polytope: cone from the
/// lexicographically smallest vertex over recursively triangulated facets.
/// Every output vertex is a vertex of `p`; interiors are disjoint and the
/// union is `p`.
pub fn triangulate(p: &Polytope) -> Result<Vec<Simplex>> {
    if p.is_empty() {
        return Err(Error::Geometry("triangulate: empty polytope".into()));
    }
    if !p.is_full_dim() {
        return Err(Error::Geometry("triangulate: polytope not full-dimensional".into()));
    }
    let d = p.ambient_dim;
    if d == 0 {
        return Ok(vec![Simplex::new(vec![vec![]])]);
    }
    let verts = p.vertices();
    let apex = verts.first().expect("nonempty polytope has vertices").clone();
    let mut out = Vec::new();
    for i in 0..p.halfspaces.len() {
        let h = &p.halfspaces[i];
        if h.eval_slack(&apex).is_zero() {
            continue; // facet contains the apex
        }
        let (facet, param) = p.facet(i)?;
        for s in triangulate(&facet)? {
            let mut vs: Vec<RVec> = s.vertices.iter().map(|v| param.apply(v)).collect();
            vs.push(apex.clone());
            out.push(Simplex::new(vs));
        }
    }
    out.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    Ok(out)
}

/// Exact integral of `p` over a full-dimensional polytope.
pub fn integrate_poly_polytope(p: &Poly, pt: &Polytope) -> Result<Rat> {
    if pt.is_empty() {
        return Ok(Rat::zero());
    }
    let mut acc = Rat::zero();
    for s in triangulate(pt)? {
        acc += integrate_poly_simplex(p, &s)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rat {
        Rat::from_int(v)
    }

    #[test]
    fn constant_over_standard_simplex() {
        // Volume of the standard 2-simplex is 1/2.
        let s = Simplex::new(vec![vec![r(0), r(0)], vec![r(1), r(0)], vec![r(0), r(1)]]);
        assert_eq!(integrate_poly_simplex(&Poly::one(2), &s).unwrap(), Rat::new(1, 2));
        assert_eq!(s.volume(), Rat::new(1, 2));
    }

    #[test]
    fn degenerate_simplex_integrates_to_zero() {
        let s = Simplex::new(vec![vec![r(0), r(0)], vec![r(1), r(1)], vec![r(2), r(2)]]);
        assert_eq!(integrate_poly_simplex(&Poly::one(2), &s).unwrap(), Rat::zero());
    }

    #[test]
    fn xy_over_standard_simplex_matches_riemann_oracle() {
        // Independent oracle: midpoint Riemann sums over the triangle
        // {x,y >= 0, x+y <= 1} at four refinement levels, Richardson-checked.
        let oracle = |n: u32| -> f64 {
            let h = 1.0 / n as f64;
            let mut acc = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let x = (i as f64 + 0.5) * h;
                    let y = (j as f64 + 0.5) * h;
                    if x + y <= 1.0 {
                        acc += x * y * h * h;
                    }
                }
            }
            acc
        };
        let estimates: Vec<f64> = [16u32, 32, 64, 128].iter().map(|&n| oracle(n)).collect();
        let frozen = 1.0 / 24.0;
        // The sequence converges towards 1/24.
        for w in estimates.windows(2) {
            assert!((w[1] - frozen).abs() <= (w[0] - frozen).abs() + 1e-12);
        }
        assert!((estimates[3] - frozen).abs() < 2e-3);

        let s = Simplex::new(vec![vec![r(0), r(0)], vec![r(1), r(0)], vec![r(0), r(1)]]);
        let xy = Poly::monomial(vec![1, 1], Rat::one());
        assert_eq!(integrate_poly_simplex(&xy, &s).unwrap(), Rat::new(1, 24));
    }

    #[test]
    fn triangulation_counts() {
        let square = Polytope::box_(&[r(0), r(0)], &[r(1), r(1)]).unwrap();
        assert_eq!(triangulate(&square).unwrap().len(), 2);
        let simplex = Polytope::standard_simplex(3);
        let t = triangulate(&simplex).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].volume(), Rat::new(1, 6));
        let cube = Polytope::box_(&[r(0), r(0), r(0)], &[r(1), r(1), r(1)]).unwrap();
        assert_eq!(triangulate(&cube).unwrap().len(), 6);
    }

    #[test]
    fn triangulation_volume_additivity() {
        let cube = Polytope::box_(&[r(-1), r(0), r(2)], &[r(3), r(5), r(4)]).unwrap();
        let total: Rat =
            triangulate(&cube).unwrap().iter().fold(Rat::zero(), |a, s| a + s.volume());
        assert_eq!(total, r(4 * 5 * 2));
    }

    #[test]
    fn change_of_variables() {
        // integrate(p, a(S)) = |det a| * integrate(p o a, S) for invertible a.
        let s = Simplex::new(vec![vec![r(0), r(0)], vec![r(2), r(1)], vec![r(1), r(3)]]);
        let a = AffineMap::new(
            Mat::from_rows(vec![vec![r(1), r(2)], vec![r(0), r(1)]]),
            vec![Rat::new(1, 3), r(-1)],
        );
        let p = Poly::from_wire(
            2,
            &[("2,0".into(), "1".into()), ("1,1".into(), "-3".into())].into_iter().collect(),
        )
        .unwrap();
        let image = Simplex::new(s.vertices.iter().map(|v| a.apply(v)).collect());
        let lhs = integrate_poly_simplex(&p, &image).unwrap();
        let rhs = &a.det().abs()
            * &integrate_poly_simplex(&p.compose_affine(&a).unwrap(), &s).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn integration_linearity() {
        let s = Simplex::new(vec![vec![r(0), r(0)], vec![r(1), r(0)], vec![r(0), r(2)]]);
        let p = Poly::monomial(vec![2, 0], Rat::new(3, 7));
        let q = Poly::monomial(vec![0, 1], Rat::new(-1, 2));
        let lhs = integrate_poly_simplex(&p.add(&q), &s).unwrap();
        let rhs = integrate_poly_simplex(&p, &s).unwrap() + integrate_poly_simplex(&q, &s).unwrap();
        assert_eq!(lhs, rhs);
    }
}
