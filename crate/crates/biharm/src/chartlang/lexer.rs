use super::ChartError;

/// Source location (1-based line and column).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

/// Tokenize one expression. `line`/`col0` locate the expression inside its
/// chart file so diagnostics point at the original source.
pub fn lex(src: &str, line: usize, col0: usize) -> Result<Vec<Token>, ChartError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let span = Span {
            line,
            col: col0 + i,
        };
        match c {
            ' ' | '\t' | '\r' => {
                i += 1;
            }
            '+' => {
                tokens.push(Token { kind: TokenKind::Plus, span });
                i += 1;
            }
            '-' => {
                tokens.push(Token { kind: TokenKind::Minus, span });
                i += 1;
            }
            '*' => {
                tokens.push(Token { kind: TokenKind::Star, span });
                i += 1;
            }
            '/' => {
                tokens.push(Token { kind: TokenKind::Slash, span });
                i += 1;
            }
            '^' => {
                tokens.push(Token { kind: TokenKind::Caret, span });
                i += 1;
            }
            '(' => {
                tokens.push(Token { kind: TokenKind::LParen, span });
                i += 1;
            }
            ')' => {
                tokens.push(Token { kind: TokenKind::RParen, span });
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.') {
                    i += 1;
                }
                // exponent suffix like 1.5e-3
                if i < bytes.len() && matches!(bytes[i] as char, 'e' | 'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && matches!(bytes[j] as char, '+' | '-') {
                        j += 1;
                    }
                    let digits_start = j;
                    while j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                        j += 1;
                    }
                    if j > digits_start {
                        i = j;
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ChartError::Lex {
                    line,
                    col: col0 + start,
                    msg: format!("bad number `{text}`"),
                })?;
                tokens.push(Token {
                    kind: TokenKind::Number(value),
                    span,
                });
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_alphanumeric() {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(src[start..i].to_string()),
                    span,
                });
            }
            other => {
                return Err(ChartError::Lex {
                    line,
                    col: col0 + i,
                    msg: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        span: Span {
            line,
            col: col0 + bytes.len(),
        },
    });
    Ok(tokens)
}
