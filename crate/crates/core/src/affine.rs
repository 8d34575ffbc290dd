//! Exact affine maps `x -> matrix * x + offset`.

use crate::error::{Error, Result};
use crate::linalg::{rvec_add, Mat, RVec};
use crate::rat::{Rat, Sign};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineMap {
    /// codomain_dim x domain_dim.
    pub matrix: Mat,
    pub offset: RVec,
}

impl AffineMap {
    pub fn new(matrix: Mat, offset: RVec) -> Self {
        assert_eq!(matrix.rows, offset.len(), "affine map shape");
        AffineMap { matrix, offset }
    }

    pub fn identity(n: usize) -> Self {
        AffineMap::new(Mat::identity(n), vec![Rat::zero(); n])
    }

    /// Constant map onto a point.
    pub fn constant(domain_dim: usize, point: RVec) -> Self {
        AffineMap::new(Mat::zero(point.len(), domain_dim), point)
    }

    /// Projection onto a subset of coordinates, in the given order.
    pub fn coordinate_projection(domain_dim: usize, coords: &[usize]) -> Self {
        let mut m = Mat::zero(coords.len(), domain_dim);
        for (i, &c) in coords.iter().enumerate() {
            m[(i, c)] = Rat::one();
        }
        AffineMap::new(m, vec![Rat::zero(); coords.len()])
    }

    /// Translation by `v`.
    pub fn translation(v: RVec) -> Self {
        AffineMap::new(Mat::identity(v.len()), v)
    }

    pub fn domain_dim(&self) -> usize {
        self.matrix.cols
    }

    pub fn codomain_dim(&self) -> usize {
        self.matrix.rows
    }

    pub fn apply(&self, x: &[Rat]) -> RVec {
        rvec_add(&self.matrix.mul_vec(x), &self.offset)
    }

    /// `self` after `other`: (self . other)(x) = self(other(x)).
    pub fn compose(&self, other: &AffineMap) -> Result<AffineMap> {
        if other.codomain_dim() != self.domain_dim() {
            return Err(Error::Dim(format!(
                "compose: {}->{} after {}->{}",
                self.domain_dim(),
                self.codomain_dim(),
                other.domain_dim(),
                other.codomain_dim()
            )));
        }
        Ok(AffineMap::new(
            self.matrix.mul_mat(&other.matrix),
            rvec_add(&self.matrix.mul_vec(&other.offset), &self.offset),
        ))
    }

    pub fn is_square(&self) -> bool {
        self.matrix.rows == self.matrix.cols
    }

    pub fn det(&self) -> Rat {
        self.matrix.det()
    }

    pub fn det_sign(&self) -> Result<Sign> {
        Sign::from_det(&self.det())
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && !self.det().is_zero()
    }

    pub fn inverse(&self) -> Result<AffineMap> {
        if !self.is_square() {
            return Err(Error::Geometry("inverse of non-square affine map".into()));
        }
        let inv = self.matrix.inverse()?;
        let off: RVec = inv.mul_vec(&self.offset).iter().map(|x| -x).collect();
        Ok(AffineMap::new(inv, off))
    }

    /// Stack two maps with a common domain: x -> (f(x), g(x)).
    pub fn stack(&self, other: &AffineMap) -> AffineMap {
        assert_eq!(self.domain_dim(), other.domain_dim());
        let mut off = self.offset.clone();
        off.extend(other.offset.iter().cloned());
        AffineMap::new(self.matrix.vstack(&other.matrix), off)
    }

    /// Product map (f x g)(x, y) = (f(x), g(y)).
    pub fn product(&self, other: &AffineMap) -> AffineMap {
        let rows = self.codomain_dim() + other.codomain_dim();
        let cols = self.domain_dim() + other.domain_dim();
        let mut m = Mat::zero(rows, cols);
        for i in 0..self.codomain_dim() {
            for j in 0..self.domain_dim() {
                m[(i, j)] = self.matrix[(i, j)].clone();
            }
        }
        for i in 0..other.codomain_dim() {
            for j in 0..other.domain_dim() {
                m[(self.codomain_dim() + i, self.domain_dim() + j)] = other.matrix[(i, j)].clone();
            }
        }
        let mut off = self.offset.clone();
        off.extend(other.offset.iter().cloned());
        AffineMap::new(m, off)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_invert() {
        let f = AffineMap::new(
            Mat::from_rows(vec![
                vec![Rat::from_int(0), Rat::from_int(-1)],
                vec![Rat::from_int(1), Rat::from_int(0)],
            ]),
            vec![Rat::from_int(1), Rat::from_int(2)],
        );
        let g = f.inverse().unwrap();
        let id = f.compose(&g).unwrap();
        assert_eq!(id, AffineMap::identity(2));
        let x = vec![Rat::new(3, 7), Rat::new(-1, 2)];
        assert_eq!(g.apply(&f.apply(&x)), x);
        assert_eq!(f.det_sign().unwrap(), Sign::Plus);
    }

    #[test]
    fn projections_and_products() {
        let p = AffineMap::coordinate_projection(3, &[0, 2]);
        let x = vec![Rat::from_int(1), Rat::from_int(2), Rat::from_int(3)];
        assert_eq!(p.apply(&x), vec![Rat::from_int(1), Rat::from_int(3)]);
        let f = AffineMap::identity(1);
        let g = AffineMap::translation(vec![Rat::from_int(5)]);
        let fg = f.product(&g);
        assert_eq!(
            fg.apply(&[Rat::from_int(1), Rat::from_int(2)]),
            vec![Rat::from_int(1), Rat::from_int(7)]
        );
    }
}
