//! Second-order jet arithmetic: value, gradient and symmetric Hessian with
//! respect to `m` independent variables, propagated by truncated-Taylor rules.
//!
//! This is the differentiation backend of the whole pipeline; no finite
//! differences are involved at this level.

use nalgebra::{DMatrix, DVector};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value + gradient + Hessian of a scalar quantity with respect to `m`
/// parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub g: DVector<f64>,
    pub h: DMatrix<f64>,
}

impl Jet {
    /// Constant value: zero derivatives.
    pub fn constant(v: f64, m: usize) -> Self {
        Jet {
            v,
            g: DVector::zeros(m),
            h: DMatrix::zeros(m, m),
        }
    }

    /// The i-th independent variable seeded at value `v`.
    pub fn variable(v: f64, i: usize, m: usize) -> Self {
        let mut g = DVector::zeros(m);
        g[i] = 1.0;
        Jet {
            v,
            g,
            h: DMatrix::zeros(m, m),
        }
    }

    /// Seed a full parameter point: one variable jet per component.
    pub fn seed(u: &[f64]) -> Vec<Jet> {
        let m = u.len();
        u.iter()
            .enumerate()
            .map(|(i, &v)| Jet::variable(v, i, m))
            .collect()
    }

    pub fn nvars(&self) -> usize {
        self.g.len()
    }

    /// Constant of the same variable count as `self`.
    pub fn constant_like(&self, v: f64) -> Self {
        Jet::constant(v, self.nvars())
    }

    /// Chain rule for a scalar function with first/second derivative `d1`, `d2`
    /// at `self.v`.
    fn chain(&self, v: f64, d1: f64, d2: f64) -> Jet {
        let h = &self.h * d1 + (&self.g * self.g.transpose()) * d2;
        Jet {
            v,
            g: &self.g * d1,
            h,
        }
    }

    pub fn sin(&self) -> Jet {
        self.chain(self.v.sin(), self.v.cos(), -self.v.sin())
    }

    pub fn cos(&self) -> Jet {
        self.chain(self.v.cos(), -self.v.sin(), -self.v.cos())
    }

    pub fn sinh(&self) -> Jet {
        self.chain(self.v.sinh(), self.v.cosh(), self.v.sinh())
    }

    pub fn cosh(&self) -> Jet {
        self.chain(self.v.cosh(), self.v.sinh(), self.v.cosh())
    }

    pub fn tanh(&self) -> Jet {
        let t = self.v.tanh();
        let sech2 = 1.0 - t * t;
        self.chain(t, sech2, -2.0 * t * sech2)
    }

    pub fn exp(&self) -> Jet {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    /// Natural log; caller must ensure `self.v > 0`.
    pub fn ln(&self) -> Jet {
        self.chain(self.v.ln(), 1.0 / self.v, -1.0 / (self.v * self.v))
    }

    /// Square root; caller must ensure `self.v > 0`.
    pub fn sqrt(&self) -> Jet {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }

    /// Integer power with the analytic rule `k x^{k-1}`, `k(k-1) x^{k-2}`.
    pub fn powi(&self, k: i32) -> Jet {
        let kf = f64::from(k);
        self.chain(
            self.v.powi(k),
            kf * self.v.powi(k - 1),
            kf * (kf - 1.0) * self.v.powi(k - 2),
        )
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        Jet {
            v: self.v + rhs.v,
            g: &self.g + &rhs.g,
            h: &self.h + &rhs.h,
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        Jet {
            v: self.v - rhs.v,
            g: &self.g - &rhs.g,
            h: &self.h - &rhs.h,
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let cross = &self.g * rhs.g.transpose();
        Jet {
            v: self.v * rhs.v,
            g: &self.g * rhs.v + &rhs.g * self.v,
            h: &self.h * rhs.v + &rhs.h * self.v + &cross + cross.transpose(),
        }
    }
}

impl Div for &Jet {
    type Output = Jet;
    fn div(self, rhs: &Jet) -> Jet {
        let q = self.v / rhs.v;
        let g = (&self.g - &rhs.g * q) / rhs.v;
        let cross = &g * rhs.g.transpose();
        let h = (&self.h - &rhs.h * q - &cross - cross.transpose()) / rhs.v;
        Jet { v: q, g, h }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            v: -self.v,
            g: -&self.g,
            h: -&self.h,
        }
    }
}

macro_rules! forward_value_ops {
    ($($trait:ident :: $method:ident),*) => {$(
        impl $trait for Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                $trait::$method(&self, &rhs)
            }
        }
    )*};
}
forward_value_ops!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        -&self
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        Jet {
            v: self.v * rhs,
            g: &self.g * rhs,
            h: &self.h * rhs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn fd2<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> (f64, f64) {
        let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
        let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        (d1, d2)
    }

    #[test]
    fn bilinear_product() {
        let u = Jet::seed(&[3.0, 5.0]);
        let p = &u[0] * &u[1];
        assert_eq!(p.v, 15.0);
        assert_eq!(p.g.as_slice(), &[5.0, 3.0]);
        assert_eq!(p.h[(0, 1)], 1.0);
        assert_eq!(p.h[(1, 0)], 1.0);
        assert_eq!(p.h[(0, 0)], 0.0);
    }

    #[test]
    fn sinh_at_zero() {
        let u = Jet::seed(&[0.0]);
        let s = u[0].sinh();
        assert_eq!(s.v, 0.0);
        assert_eq!(s.g[0], 1.0);
        assert_eq!(s.h[(0, 0)], 0.0);
    }

    #[test]
    fn hyperbolic_identity() {
        let u = Jet::seed(&[0.7]);
        let c = u[0].cosh();
        let s = u[0].sinh();
        let id = &(&c * &c) - &(&s * &s);
        assert_abs_diff_eq!(id.v, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(id.g[0], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(id.h[(0, 0)], 0.0, epsilon = 1e-13);
        // cross-check against finite differences
        let (d1, d2) = fd2(|x| x.cosh().powi(2) - x.sinh().powi(2), 0.7, 1e-5);
        assert_abs_diff_eq!(id.g[0], d1, epsilon = 1e-6);
        assert_abs_diff_eq!(id.h[(0, 0)], d2, epsilon = 1e-4);
    }

    #[test]
    fn elementary_functions_match_finite_differences() {
        type UnaryPair = (fn(&Jet) -> Jet, fn(f64) -> f64);
        let cases: Vec<(UnaryPair, f64)> = vec![
            ((Jet::sin, f64::sin), 0.83),
            ((Jet::cos, f64::cos), -0.4),
            ((Jet::sinh, f64::sinh), 0.31),
            ((Jet::cosh, f64::cosh), 0.31),
            ((Jet::tanh, f64::tanh), 1.2),
            ((Jet::exp, f64::exp), -0.5),
            ((Jet::ln, f64::ln), 1.7),
            ((Jet::sqrt, f64::sqrt), 2.3),
        ];
        for ((jf, ff), x) in cases {
            let u = Jet::seed(&[x]);
            let j = jf(&u[0]);
            let (d1, d2) = fd2(ff, x, 1e-5);
            assert_abs_diff_eq!(j.g[0], d1, epsilon = 1e-6 * (1.0 + d1.abs()));
            assert_abs_diff_eq!(j.h[(0, 0)], d2, epsilon = 1e-4 * (1.0 + d2.abs()));
        }
    }

    #[test]
    fn division_rule() {
        let u = Jet::seed(&[1.3, -0.4]);
        let q = &u[0].sinh() / &u[1].cosh();
        let f = |a: f64, b: f64| a.sinh() / b.cosh();
        let h = 1e-5;
        let da = (f(1.3 + h, -0.4) - f(1.3 - h, -0.4)) / (2.0 * h);
        let dab = (f(1.3 + h, -0.4 + h) - f(1.3 + h, -0.4 - h) - f(1.3 - h, -0.4 + h)
            + f(1.3 - h, -0.4 - h))
            / (4.0 * h * h);
        assert_abs_diff_eq!(q.g[0], da, epsilon = 1e-6);
        assert_abs_diff_eq!(q.h[(0, 1)], dab, epsilon = 1e-4);
        assert_abs_diff_eq!(q.h[(0, 1)], q.h[(1, 0)], epsilon = 1e-14);
    }

    #[test]
    fn negative_integer_power() {
        let u = Jet::seed(&[1.5]);
        let p = u[0].powi(-2);
        assert_abs_diff_eq!(p.v, 1.5f64.powi(-2), epsilon = 1e-15);
        assert_abs_diff_eq!(p.g[0], -2.0 * 1.5f64.powi(-3), epsilon = 1e-14);
        assert_abs_diff_eq!(p.h[(0, 0)], 6.0 * 1.5f64.powi(-4), epsilon = 1e-13);
    }
}
