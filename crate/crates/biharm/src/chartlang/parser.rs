//! Pratt parser with standard precedence: `^` > unary `-` > `* /` > `+ -`,
//! `^` binding tighter on the left (right-associative) and restricted to
//! integer exponents.

use super::lexer::{lex, Token, TokenKind};
use super::{BinOp, ChartError, ChartExpr, Func};

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    param_count: usize,
}

/// Parse a single expression with parameters `u1..u<param_count>`.
pub fn parse_expr(
    src: &str,
    param_count: usize,
    line: usize,
    col0: usize,
) -> Result<ChartExpr, ChartError> {
    let tokens = lex(src, line, col0)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        param_count,
    };
    let expr = p.expr(0)?;
    let t = p.peek().clone();
    if t.kind != TokenKind::Eof {
        return Err(p.err_at(&t, format!("unexpected trailing token {:?}", t.kind)));
    }
    Ok(expr)
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn err_at(&self, t: &Token, msg: String) -> ChartError {
        ChartError::Parse {
            line: t.span.line,
            col: t.span.col,
            msg,
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<ChartExpr, ChartError> {
        let mut lhs = self.prefix()?;
        loop {
            let (op, bp) = match self.peek().kind {
                TokenKind::Plus => (BinOp::Add, 10),
                TokenKind::Minus => (BinOp::Sub, 10),
                TokenKind::Star => (BinOp::Mul, 20),
                TokenKind::Slash => (BinOp::Div, 20),
                TokenKind::Caret => {
                    if 30 < min_bp {
                        break;
                    }
                    let caret = self.advance();
                    let k = self.integer_exponent(&caret)?;
                    lhs = ChartExpr::Pow(Box::new(lhs), k, caret.span);
                    continue;
                }
                _ => break,
            };
            if bp < min_bp {
                break;
            }
            let tok = self.advance();
            // left-associativity: right operand must bind strictly tighter
            let rhs = self.expr(bp + 1)?;
            lhs = ChartExpr::Bin(op, Box::new(lhs), Box::new(rhs), tok.span);
        }
        Ok(lhs)
    }

    /// Exponents are integer literals, optionally negated.
    fn integer_exponent(&mut self, caret: &Token) -> Result<i32, ChartError> {
        let mut sign = 1i32;
        if self.peek().kind == TokenKind::Minus {
            self.advance();
            sign = -1;
        }
        let t = self.advance();
        match t.kind {
            TokenKind::Number(v) if v.fract() == 0.0 && v.abs() <= f64::from(i32::MAX) => {
                Ok(sign * v as i32)
            }
            _ => Err(self.err_at(caret, "exponent must be an integer literal".into())),
        }
    }

    fn prefix(&mut self) -> Result<ChartExpr, ChartError> {
        let t = self.advance();
        match t.kind {
            TokenKind::Number(v) => Ok(self.maybe_pow(ChartExpr::Num(v, t.span))?),
            TokenKind::Minus => {
                // unary minus binds looser than ^, tighter than * /
                let inner = self.expr(25)?;
                Ok(ChartExpr::Neg(Box::new(inner), t.span))
            }
            TokenKind::LParen => {
                let inner = self.expr(0)?;
                let close = self.advance();
                if close.kind != TokenKind::RParen {
                    return Err(self.err_at(&close, "expected `)`".into()));
                }
                Ok(self.maybe_pow(inner)?)
            }
            TokenKind::Ident(name) => {
                if name == "pi" {
                    return self.maybe_pow(ChartExpr::Pi(t.span));
                }
                if let Some(func) = Func::from_name(&name) {
                    let open = self.advance();
                    if open.kind != TokenKind::LParen {
                        return Err(self.err_at(&open, format!("expected `(` after {name}")));
                    }
                    let arg = self.expr(0)?;
                    let close = self.advance();
                    if close.kind != TokenKind::RParen {
                        return Err(self.err_at(&close, "expected `)`".into()));
                    }
                    return self.maybe_pow(ChartExpr::Call(func, Box::new(arg), t.span));
                }
                if let Some(digits) = name.strip_prefix('u') {
                    if let Ok(i) = digits.parse::<usize>() {
                        if i >= 1 && i <= self.param_count {
                            return self.maybe_pow(ChartExpr::Param(i - 1, t.span));
                        }
                    }
                }
                Err(ChartError::UnknownSymbol {
                    line: t.span.line,
                    col: t.span.col,
                    name,
                })
            }
            TokenKind::Eof => Err(self.err_at(&t, "unexpected end of input".into())),
            ref other => Err(self.err_at(&t, format!("unexpected token {other:?}"))),
        }
    }

    /// Attach a `^k` suffix directly after an atom so `u1^2` parses with the
    /// power binding tighter than unary minus.
    fn maybe_pow(&mut self, base: ChartExpr) -> Result<ChartExpr, ChartError> {
        if self.peek().kind == TokenKind::Caret {
            let caret = self.advance();
            let k = self.integer_exponent(&caret)?;
            return Ok(ChartExpr::Pow(Box::new(base), k, caret.span));
        }
        Ok(base)
    }
}
