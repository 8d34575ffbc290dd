//! Multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use crate::affine::AffineMap;
use crate::error::{Error, Result};
use crate::rat::Rat;

/// Polynomial in `ambient_dim` variables. No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    pub ambient_dim: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Poly {
    pub fn zero(ambient_dim: usize) -> Self {
        Poly { ambient_dim, terms: BTreeMap::new() }
    }

    pub fn constant(ambient_dim: usize, c: Rat) -> Self {
        let mut p = Poly::zero(ambient_dim);
        p.add_term(vec![0; ambient_dim], c);
        p
    }

    pub fn one(ambient_dim: usize) -> Self {
        Poly::constant(ambient_dim, Rat::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(ambient_dim: usize, i: usize) -> Self {
        assert!(i < ambient_dim);
        let mut e = vec![0u32; ambient_dim];
        e[i] = 1;
        let mut p = Poly::zero(ambient_dim);
        p.add_term(e, Rat::one());
        p
    }

    /// Monomial `c * x^exps`.
    pub fn monomial(exps: Vec<u32>, c: Rat) -> Self {
        let mut p = Poly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// The affine function `offset + coeffs . x`.
    pub fn affine(coeffs: &[Rat], offset: &Rat) -> Self {
        let n = coeffs.len();
        let mut p = Poly::constant(n, offset.clone());
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0u32; n];
                e[i] = 1;
                p.add_term(e, c.clone());
            }
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Rat) {
        assert_eq!(exps.len(), self.ambient_dim, "exponent arity");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        let mut out = Poly::zero(self.ambient_dim);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.ambient_dim);
        }
        let mut out = Poly::zero(self.ambient_dim);
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), c * v);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut out = Poly::zero(self.ambient_dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.ambient_dim);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        assert_eq!(x.len(), self.ambient_dim);
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                t *= xi.pow(k);
            }
            acc += t;
        }
        acc
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Poly {
        assert!(i < self.ambient_dim);
        let mut out = Poly::zero(self.ambient_dim);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * &Rat::from_int(e[i] as i64));
        }
        out
    }

    /// Exact composition `q(x) = p(a(x))`.
    ///
    /// `a` maps a `domain_dim`-space into the space of `p`'s variables.
    pub fn compose_affine(&self, a: &AffineMap) -> Result<Poly> {
        if a.codomain_dim() != self.ambient_dim {
            return Err(Error::Dim(format!(
                "compose: map into dim {} against polynomial in dim {}",
                a.codomain_dim(),
                self.ambient_dim
            )));
        }
        let n = a.domain_dim();
        // Substituted coordinate functions.
        let subs: Vec<Poly> =
            (0..self.ambient_dim).map(|i| Poly::affine(a.matrix.row(i), &a.offset[i])).collect();
        let mut out = Poly::zero(n);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(n, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&subs[i].pow(k));
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Largest `k` such that `x_i^k` divides the polynomial. `None` when zero.
    pub fn var_multiplicity(&self, i: usize) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        Some(self.terms.keys().map(|e| e[i]).min().unwrap())
    }

    /// Map-based wire format: keys are comma-joined exponents, values rationals.
    pub fn to_wire(&self) -> BTreeMap<String, String> {
        self.terms
            .iter()
            .map(|(e, c)| {
                let key = e.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
                (key, c.to_string())
            })
            .collect()
    }

    pub fn from_wire(ambient_dim: usize, wire: &BTreeMap<String, String>) -> Result<Poly> {
        let mut p = Poly::zero(ambient_dim);
        for (k, v) in wire {
            let exps: Vec<u32> = if k.trim().is_empty() {
                vec![]
            } else {
                k.split(',')
                    .map(|s| {
                        s.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent {s:?}")))
                    })
                    .collect::<Result<_>>()?
            };
            if exps.len() != ambient_dim {
                return Err(Error::Parse(format!(
                    "exponent key {k:?} has arity {} but ambient dim is {ambient_dim}",
                    exps.len()
                )));
            }
            p.add_term(exps, Rat::parse(v)?);
        }
        Ok(p)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &k) in e.iter().enumerate() {
                if k == 1 {
                    write!(f, "*x{i}")?;
                } else if k > 1 {
                    write!(f, "*x{i}^{k}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat;

    #[test]
    fn compose_with_translation() {
        // p = x^2, a(t) = t + 1 => t^2 + 2t + 1.
        let p = Poly::monomial(vec![2], Rat::one());
        let a = AffineMap::new(Mat::identity(1), vec![Rat::one()]);
        let q = p.compose_affine(&a).unwrap();
        let expected = Poly::from_wire(
            1,
            &[("0".into(), "1".into()), ("1".into(), "2".into()), ("2".into(), "1".into())]
                .into_iter()
                .collect(),
        )
        .unwrap();
        assert_eq!(q, expected);
    }

    #[test]
    fn compose_trivial_cases() {
        let one = Poly::one(2);
        let a = AffineMap::new(Mat::identity(2), vec![Rat::from_int(3), Rat::from_int(-1)]);
        assert_eq!(one.compose_affine(&a).unwrap(), one);
        let x = Poly::var(1, 0);
        let id = AffineMap::identity(1);
        assert_eq!(x.compose_affine(&id).unwrap(), x);
    }

    #[test]
    fn compose_matches_pointwise_evaluation() {
        // Independent oracle: evaluating q at sample points must agree with
        // evaluating p at the mapped points.
        let p = Poly::from_wire(
            2,
            &[("2,1".into(), "3".into()), ("0,2".into(), "-1/2".into()), ("1,0".into(), "7".into())]
                .into_iter()
                .collect(),
        )
        .unwrap();
        let a = AffineMap::new(
            Mat::from_rows(vec![
                vec![Rat::from_int(2), Rat::from_int(1)],
                vec![Rat::from_int(-1), Rat::from_int(3)],
            ]),
            vec![Rat::new(1, 2), Rat::from_int(-2)],
        );
        let q = p.compose_affine(&a).unwrap();
        for i in -3..4 {
            for j in -3..4 {
                let x = vec![Rat::new(i, 2), Rat::new(j, 3)];
                assert_eq!(q.eval(&x), p.eval(&a.apply(&x)));
            }
        }
    }

    #[test]
    fn compose_distributes_over_multiplication() {
        let p = Poly::affine(&[Rat::from_int(1), Rat::from_int(2)], &Rat::one());
        let q = Poly::monomial(vec![1, 1], Rat::from_int(3));
        let a = AffineMap::new(
            Mat::from_rows(vec![
                vec![Rat::from_int(0), Rat::from_int(1)],
                vec![Rat::from_int(1), Rat::from_int(1)],
            ]),
            vec![Rat::from_int(1), Rat::zero()],
        );
        let lhs = p.mul(&q).compose_affine(&a).unwrap();
        let rhs = p.compose_affine(&a).unwrap().mul(&q.compose_affine(&a).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivative_and_multiplicity() {
        let p = Poly::monomial(vec![3, 1], Rat::from_int(2));
        assert_eq!(p.derivative(0), Poly::monomial(vec![2, 1], Rat::from_int(6)));
        assert_eq!(p.var_multiplicity(0), Some(3));
        assert_eq!(p.var_multiplicity(1), Some(1));
        assert_eq!(Poly::zero(2).var_multiplicity(0), None);
    }
}
