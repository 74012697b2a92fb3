//! Evaluation of chart expressions over plain reals and over second-order
//! jets. Domain violations (square root of a negative, log of a non-positive,
//! division by zero) are reported with the offending node's location.

use super::{BinOp, ChartError, ChartExpr, ChartProgram, Func};
use crate::jet::Jet;

/// Value, gradient and Hessian of every chart component at one parameter
/// point.
#[derive(Debug, Clone)]
pub struct ComponentJet(pub Vec<Jet>);

fn domain(span: super::Span, func: &'static str, msg: String) -> ChartError {
    ChartError::Domain {
        line: span.line,
        col: span.col,
        func,
        msg,
    }
}

/// Evaluate one expression over plain reals.
pub fn eval_f64(expr: &ChartExpr, u: &[f64]) -> Result<f64, ChartError> {
    Ok(match expr {
        ChartExpr::Num(v, _) => *v,
        ChartExpr::Param(i, _) => u[*i],
        ChartExpr::Pi(_) => std::f64::consts::PI,
        ChartExpr::Neg(e, _) => -eval_f64(e, u)?,
        ChartExpr::Bin(op, a, b, span) => {
            let a = eval_f64(a, u)?;
            let b = eval_f64(b, u)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == 0.0 {
                        return Err(domain(*span, "/", "division by zero".into()));
                    }
                    a / b
                }
            }
        }
        ChartExpr::Pow(base, k, span) => {
            let b = eval_f64(base, u)?;
            if b == 0.0 && *k < 0 {
                return Err(domain(*span, "^", "zero to negative power".into()));
            }
            b.powi(*k)
        }
        ChartExpr::Call(func, arg, span) => {
            let x = eval_f64(arg, u)?;
            apply_func_f64(*func, x, *span)?
        }
    })
}

fn apply_func_f64(func: Func, x: f64, span: super::Span) -> Result<f64, ChartError> {
    Ok(match func {
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Sinh => x.sinh(),
        Func::Cosh => x.cosh(),
        Func::Tanh => x.tanh(),
        Func::Exp => x.exp(),
        Func::Log => {
            if x <= 0.0 {
                return Err(domain(span, "log", format!("log of non-positive {x}")));
            }
            x.ln()
        }
        Func::Sqrt => {
            if x < 0.0 {
                return Err(domain(span, "sqrt", format!("sqrt of negative {x}")));
            }
            x.sqrt()
        }
    })
}

/// Evaluate one expression over jets seeded at `u`.
pub fn eval_jet_expr(expr: &ChartExpr, u: &[Jet]) -> Result<Jet, ChartError> {
    let m = u[0].nvars();
    Ok(match expr {
        ChartExpr::Num(v, _) => Jet::constant(*v, m),
        ChartExpr::Param(i, _) => u[*i].clone(),
        ChartExpr::Pi(_) => Jet::constant(std::f64::consts::PI, m),
        ChartExpr::Neg(e, _) => -eval_jet_expr(e, u)?,
        ChartExpr::Bin(op, a, b, span) => {
            let a = eval_jet_expr(a, u)?;
            let b = eval_jet_expr(b, u)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b.v == 0.0 {
                        return Err(domain(*span, "/", "division by zero".into()));
                    }
                    a / b
                }
            }
        }
        ChartExpr::Pow(base, k, span) => {
            let b = eval_jet_expr(base, u)?;
            if b.v == 0.0 && *k < 0 {
                return Err(domain(*span, "^", "zero to negative power".into()));
            }
            b.powi(*k)
        }
        ChartExpr::Call(func, arg, span) => {
            let x = eval_jet_expr(arg, u)?;
            match func {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Sinh => x.sinh(),
                Func::Cosh => x.cosh(),
                Func::Tanh => x.tanh(),
                Func::Exp => x.exp(),
                Func::Log => {
                    if x.v <= 0.0 {
                        return Err(domain(*span, "log", format!("log of non-positive {}", x.v)));
                    }
                    x.ln()
                }
                Func::Sqrt => {
                    if x.v < 0.0 {
                        return Err(domain(*span, "sqrt", format!("sqrt of negative {}", x.v)));
                    }
                    x.sqrt()
                }
            }
        }
    })
}

/// Exact value, gradient and Hessian of every component of a chart program at
/// the parameter point `u`, via jet arithmetic.
pub fn eval_jet(prog: &ChartProgram, u: &[f64]) -> Result<ComponentJet, ChartError> {
    assert_eq!(u.len(), prog.param_count, "parameter point arity");
    let seeds = Jet::seed(u);
    let jets = prog
        .components
        .iter()
        .map(|c| eval_jet_expr(c, &seeds))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ComponentJet(jets))
}

#[cfg(test)]
mod tests {
    use super::super::parse_expr;
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bilinear_component() {
        let e = parse_expr("u1 * u2", 2, 1, 1).unwrap();
        let j = eval_jet_expr(&e, &Jet::seed(&[3.0, 5.0])).unwrap();
        assert_eq!(j.v, 15.0);
        assert_eq!(j.g.as_slice(), &[5.0, 3.0]);
        assert_eq!(j.h[(0, 1)], 1.0);
        assert_eq!(j.h[(1, 1)], 0.0);
    }

    #[test]
    fn sinh_component_at_zero() {
        let e = parse_expr("sinh(u1)", 1, 1, 1).unwrap();
        let j = eval_jet_expr(&e, &Jet::seed(&[0.0])).unwrap();
        assert_eq!(j.v, 0.0);
        assert_eq!(j.g[0], 1.0);
        assert_eq!(j.h[(0, 0)], 0.0);
    }

    #[test]
    fn hyperbolic_identity_has_flat_jets() {
        let e = parse_expr("cosh(u1)^2 - sinh(u1)^2", 1, 1, 1).unwrap();
        for x in [0.0, 0.7, -1.3] {
            let j = eval_jet_expr(&e, &Jet::seed(&[x])).unwrap();
            assert_abs_diff_eq!(j.v, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(j.g[0], 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(j.h[(0, 0)], 0.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn sqrt_domain_error_is_located() {
        let e = parse_expr("sqrt(u1 - 2)", 1, 7, 1).unwrap();
        let err = eval_jet_expr(&e, &Jet::seed(&[0.0])).unwrap_err();
        assert!(matches!(err, ChartError::Domain { line: 7, func: "sqrt", .. }), "{err:?}");
    }

    #[test]
    fn f64_and_jet_values_agree() {
        let e = parse_expr("exp(tanh(u1) * u2) + pi / (1 + u2^2)", 2, 1, 1).unwrap();
        let u = [0.4, -0.8];
        let plain = eval_f64(&e, &u).unwrap();
        let jet = eval_jet_expr(&e, &Jet::seed(&u)).unwrap();
        assert_eq!(plain, jet.v);
    }
}
