//! Sparse multivariate polynomials over exact rationals, just enough for the
//! symbolic elimination steps: arithmetic, scaling, and partial derivatives.
//! Monomials are exponent vectors of a fixed arity; coefficients are
//! `BigRational`, so no intermediate result ever rounds.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    /// Number of variables; every exponent key has this length.
    arity: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl RatPoly {
    pub fn zero(arity: usize) -> Self {
        RatPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: BigRational) -> Self {
        let mut p = RatPoly::zero(arity);
        p.add_term(vec![0; arity], c);
        p
    }

    /// Rational constant from an integer pair.
    pub fn rational(arity: usize, numer: i64, denom: i64) -> Self {
        RatPoly::constant(
            arity,
            BigRational::new(BigInt::from(numer), BigInt::from(denom)),
        )
    }

    /// The variable `x_i`.
    pub fn var(arity: usize, i: usize) -> Self {
        assert!(i < arity, "variable index out of range");
        let mut expo = vec![0; arity];
        expo[i] = 1;
        let mut p = RatPoly::zero(arity);
        p.add_term(expo, BigRational::one());
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, expo: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(expo);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> RatPoly {
        if c.is_zero() {
            return RatPoly::zero(self.arity);
        }
        RatPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut out = RatPoly::zero(self.arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let expo: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(expo, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> RatPoly {
        let mut out = RatPoly::constant(self.arity, BigRational::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative with respect to `x_i`.
    pub fn diff(&self, i: usize) -> RatPoly {
        assert!(i < self.arity, "variable index out of range");
        let mut out = RatPoly::zero(self.arity);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut expo = e.clone();
            expo[i] -= 1;
            out.add_term(expo, c * BigRational::from(BigInt::from(e[i])));
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.arity, "arity mismatch");
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    term *= x;
                }
            }
            acc += term;
        }
        acc
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest monomial first reads more naturally
        for (e, c) in self.terms.iter().rev() {
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
