//! A small expression language for user-defined immersion charts.
//!
//! Chart file layout:
//!
//! ```text
//! # comment
//! params m=2 space=H3_1(1)
//! x1 = sqrt(1 - 0.5^2) * u1
//! x2 = ...
//! ```
//!
//! One `x<k> = expr` binding per ambient coordinate, whitespace-insensitive,
//! `#` starts a comment. Expressions use `+ - * /`, unary `-`, `^` with
//! integer exponents, the functions `sin cos sinh cosh tanh exp log sqrt`
//! and the constant `pi`.

mod eval;
mod lexer;
mod parser;

pub use eval::{eval_f64, eval_jet, eval_jet_expr, ComponentJet};
pub use lexer::{Span, Token, TokenKind};
pub use parser::parse_expr;

use crate::ambient::SpaceForm;
use thiserror::Error;

/// Built-in unary functions of the chart grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

/// Binary operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Abstract syntax tree of a chart component expression. Every node carries
/// its source location for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub enum ChartExpr {
    Num(f64, Span),
    /// Parameter `u(i+1)`, zero-based index.
    Param(usize, Span),
    Pi(Span),
    Neg(Box<ChartExpr>, Span),
    Bin(BinOp, Box<ChartExpr>, Box<ChartExpr>, Span),
    /// Integer power `base ^ k`.
    Pow(Box<ChartExpr>, i32, Span),
    Call(Func, Box<ChartExpr>, Span),
}

impl ChartExpr {
    pub fn span(&self) -> Span {
        match self {
            ChartExpr::Num(_, s)
            | ChartExpr::Param(_, s)
            | ChartExpr::Pi(s)
            | ChartExpr::Neg(_, s)
            | ChartExpr::Bin(_, _, _, s)
            | ChartExpr::Pow(_, _, s)
            | ChartExpr::Call(_, _, s) => *s,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            ChartExpr::Bin(BinOp::Add | BinOp::Sub, ..) => 10,
            ChartExpr::Bin(BinOp::Mul | BinOp::Div, ..) => 20,
            ChartExpr::Neg(..) => 25,
            ChartExpr::Pow(..) => 30,
            _ => 100,
        }
    }
}

impl std::fmt::Display for ChartExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fn child(
            f: &mut std::fmt::Formatter<'_>,
            e: &ChartExpr,
            parens: bool,
        ) -> std::fmt::Result {
            if parens {
                write!(f, "(")?;
            }
            write!(f, "{e}")?;
            if parens {
                write!(f, ")")?;
            }
            Ok(())
        }
        match self {
            ChartExpr::Num(v, _) => write!(f, "{v}"),
            ChartExpr::Param(i, _) => write!(f, "u{}", i + 1),
            ChartExpr::Pi(_) => write!(f, "pi"),
            ChartExpr::Neg(e, _) => {
                write!(f, "-")?;
                child(f, e, e.precedence() < self.precedence())
            }
            ChartExpr::Bin(op, a, b, _) => {
                let p = self.precedence();
                child(f, a, a.precedence() < p)?;
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                };
                write!(f, " {sym} ")?;
                // `-` and `/` are left-associative: parenthesize an
                // equal-precedence right child.
                child(f, b, b.precedence() <= p)
            }
            ChartExpr::Pow(base, k, _) => {
                child(f, base, base.precedence() <= self.precedence())?;
                write!(f, "^{k}")
            }
            ChartExpr::Call(func, arg, _) => write!(f, "{}({arg})", func.name()),
        }
    }
}

/// A fully parsed chart: one expression per ambient coordinate.
#[derive(Debug, Clone)]
pub struct ChartProgram {
    pub param_count: usize,
    pub space_form: SpaceForm,
    /// Component expressions `x1..xN` in coordinate order.
    pub components: Vec<ChartExpr>,
}

/// Located chart-language error.
#[derive(Debug, Error)]
pub enum ChartError {
    #[error("{line}:{col}: lexer error: {msg}")]
    Lex { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: parse error: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown symbol `{name}`")]
    UnknownSymbol { line: usize, col: usize, name: String },
    #[error("{line}:{col}: domain error in {func}: {msg}")]
    Domain {
        line: usize,
        col: usize,
        func: &'static str,
        msg: String,
    },
    #[error("chart header error: {0}")]
    Header(String),
    #[error("binding error: {0}")]
    Binding(String),
}

/// Parse a complete chart file into a [`ChartProgram`].
pub fn parse_chart(source: &str) -> Result<ChartProgram, ChartError> {
    let mut header: Option<(usize, SpaceForm)> = None;
    let mut bindings: Vec<(usize, ChartExpr)> = Vec::new();

    for (lineno, raw) in source.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        if header.is_none() {
            header = Some(parse_header(line)?);
            continue;
        }
        let (m, _) = header.as_ref().unwrap();
        let eq = line.find('=').ok_or_else(|| {
            ChartError::Binding(format!("line {}: expected `x<k> = expr`", lineno + 1))
        })?;
        let lhs = line[..eq].trim();
        let k: usize = lhs
            .strip_prefix('x')
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| {
                ChartError::Binding(format!("line {}: bad binding target `{lhs}`", lineno + 1))
            })?;
        let expr = parse_expr(&line[eq + 1..], *m, lineno + 1, eq + 2)?;
        bindings.push((k, expr));
    }

    let (param_count, space_form) =
        header.ok_or_else(|| ChartError::Header("missing `params m=... space=...` line".into()))?;
    let n = space_form.ambient_signature.dim();
    let mut components: Vec<Option<ChartExpr>> = vec![None; n];
    for (k, expr) in bindings {
        if k == 0 || k > n {
            return Err(ChartError::Binding(format!(
                "binding x{k} out of range 1..{n}"
            )));
        }
        if components[k - 1].is_some() {
            return Err(ChartError::Binding(format!("duplicate binding for x{k}")));
        }
        components[k - 1] = Some(expr);
    }
    let components = components
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| ChartError::Binding(format!("missing binding for x{}", i + 1))))
        .collect::<Result<Vec<_>, _>>()?;

    Ok(ChartProgram {
        param_count,
        space_form,
        components,
    })
}

fn parse_header(line: &str) -> Result<(usize, SpaceForm), ChartError> {
    let line = line.trim();
    let rest = line
        .strip_prefix("params")
        .ok_or_else(|| ChartError::Header(format!("expected `params ...`, got `{line}`")))?;
    let mut m: Option<usize> = None;
    let mut space: Option<SpaceForm> = None;
    for field in rest.split_whitespace() {
        if let Some(v) = field.strip_prefix("m=") {
            m = Some(
                v.parse()
                    .map_err(|_| ChartError::Header(format!("bad m `{v}`")))?,
            );
        } else if let Some(v) = field.strip_prefix("space=") {
            space = Some(
                SpaceForm::parse(v).map_err(|e| ChartError::Header(format!("bad space: {e}")))?,
            );
        } else {
            return Err(ChartError::Header(format!("unknown header field `{field}`")));
        }
    }
    match (m, space) {
        (Some(m), Some(s)) if m >= 1 => Ok((m, s)),
        (Some(_), Some(_)) => Err(ChartError::Header("m must be at least 1".into())),
        _ => Err(ChartError::Header("header needs both m= and space=".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_simple_chart() {
        let src = "\
# a totally geodesic slice
params m=2 space=H3_1(1)
x1 = sqrt(1 - 0.5^2) * u1
x2 = sqrt(1 - 0.5^2) * u2
x3 = sqrt(1 - 0.5^2) * sqrt(1 + u1^2 + u2^2)
x4 = 0.5
";
        let prog = parse_chart(src).unwrap();
        assert_eq!(prog.param_count, 2);
        assert_eq!(prog.components.len(), 4);
        assert!(matches!(
            &prog.components[0],
            ChartExpr::Bin(BinOp::Mul, a, _, _) if matches!(**a, ChartExpr::Call(Func::Sqrt, ..))
        ));
    }

    #[test]
    fn sqrt_sinh_expression() {
        let e = parse_expr("sqrt(1 - 0.5^2) * sinh(u1)", 2, 1, 1).unwrap();
        match e {
            ChartExpr::Bin(BinOp::Mul, a, b, _) => {
                assert!(matches!(*a, ChartExpr::Call(Func::Sqrt, ..)));
                assert!(matches!(*b, ChartExpr::Call(Func::Sinh, ..)));
            }
            other => panic!("unexpected shape {other:?}"),
        }
    }

    #[test]
    fn trailing_operator_is_a_parse_error() {
        let err = parse_expr("u1 +", 2, 1, 1).unwrap_err();
        assert!(matches!(err, ChartError::Parse { .. }), "{err}");
    }

    #[test]
    fn unknown_symbol_is_located() {
        let err = parse_expr("u3 + 1", 2, 4, 1).unwrap_err();
        match err {
            ChartError::UnknownSymbol { line, name, .. } => {
                assert_eq!(line, 4);
                assert_eq!(name, "u3");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_and_missing_bindings() {
        let dup = "params m=1 space=R3_1\nx1 = u1\nx1 = u1\nx2 = u1\nx3 = 0\n";
        assert!(matches!(parse_chart(dup), Err(ChartError::Binding(_))));
        let missing = "params m=1 space=R3_1\nx1 = u1\nx2 = u1\n";
        assert!(matches!(parse_chart(missing), Err(ChartError::Binding(_))));
    }

    #[test]
    fn non_integer_exponent_rejected() {
        assert!(parse_expr("u1^0.5", 1, 1, 1).is_err());
        assert!(parse_expr("u1^u1", 1, 1, 1).is_err());
        assert!(parse_expr("u1^-2", 1, 1, 1).is_ok());
    }

    #[test]
    fn pretty_print_reparses_identically() {
        let cases = [
            "u1 + u2 * u1",
            "-(u1 + u2)",
            "u1 - (u2 - 1)",
            "(u1 + u2)^3",
            "sqrt(1 + u1^2) / cosh(u2)",
            "u1 - u2 - 1",
            "--u1",
            "2^2^3",
        ];
        for src in cases {
            let a = parse_expr(src, 2, 1, 1).unwrap();
            let b = parse_expr(&a.to_string(), 2, 1, 1).unwrap();
            assert!(trees_equal(&a, &b), "round trip of `{src}` -> `{a}`");
        }
    }

    /// Structural equality ignoring spans.
    fn trees_equal(a: &ChartExpr, b: &ChartExpr) -> bool {
        use ChartExpr::*;
        match (a, b) {
            (Num(x, _), Num(y, _)) => x == y,
            (Param(i, _), Param(j, _)) => i == j,
            (Pi(_), Pi(_)) => true,
            (Neg(x, _), Neg(y, _)) => trees_equal(x, y),
            (Bin(o1, a1, b1, _), Bin(o2, a2, b2, _)) => {
                o1 == o2 && trees_equal(a1, a2) && trees_equal(b1, b2)
            }
            (Pow(x, k1, _), Pow(y, k2, _)) => k1 == k2 && trees_equal(x, y),
            (Call(f1, x, _), Call(f2, y, _)) => f1 == f2 && trees_equal(x, y),
            _ => false,
        }
    }

    proptest! {
        /// Parsing is total: arbitrary text never panics.
        #[test]
        fn parsing_never_panics(src in ".{0,80}") {
            let _ = parse_expr(&src, 3, 1, 1);
            let _ = parse_chart(&src);
        }

        /// Generated expressions survive a print/reparse cycle structurally.
        #[test]
        fn generated_expr_round_trip(e in arb_expr(3)) {
            let printed = e.to_string();
            let reparsed = parse_expr(&printed, 2, 1, 1).unwrap();
            prop_assert!(trees_equal(&e, &reparsed), "printed `{printed}`");
        }
    }

    fn arb_expr(depth: u32) -> impl Strategy<Value = ChartExpr> {
        let sp = Span { line: 1, col: 1 };
        let leaf = prop_oneof![
            (0u8..=40).prop_map(move |v| ChartExpr::Num(f64::from(v) * 0.25, sp)),
            (0usize..2).prop_map(move |i| ChartExpr::Param(i, sp)),
            Just(ChartExpr::Pi(sp)),
        ];
        leaf.prop_recursive(depth, 32, 2, move |inner| {
            prop_oneof![
                (inner.clone(), inner.clone(), 0u8..4).prop_map(move |(a, b, op)| {
                    let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div][op as usize];
                    ChartExpr::Bin(op, Box::new(a), Box::new(b), sp)
                }),
                inner.clone().prop_map(move |a| ChartExpr::Neg(Box::new(a), sp)),
                (inner.clone(), 0i32..4)
                    .prop_map(move |(a, k)| ChartExpr::Pow(Box::new(a), k, sp)),
                (inner, 0u8..3).prop_map(move |(a, f)| {
                    let f = [Func::Sin, Func::Cosh, Func::Tanh][f as usize];
                    ChartExpr::Call(f, Box::new(a), sp)
                }),
            ]
        })
    }
}
