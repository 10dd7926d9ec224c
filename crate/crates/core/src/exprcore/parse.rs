//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' exponent)?
//! exponent := '-'? (integer | parameter | '(' expr ')')
//! atom   := integer | name | parameter | '(' expr ')'
//! ```
//!
//! Parameters are integer-valued names bound by the caller (family
//! templates bind `k`). Exponents must evaluate to integer constants.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use super::expr::Expr;
use super::{ExprError, Rat};
use crate::jetspace::SpaceSpec;

pub fn parse_expr(text: &str, space: &SpaceSpec) -> Result<Expr, ExprError> {
    parse_expr_with_params(text, space, &[])
}

/// Parses with extra integer-valued names in scope.
pub fn parse_expr_with_params(text: &str, space: &SpaceSpec, params: &[(&str, i64)]) -> Result<Expr, ExprError> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        space,
        params,
        end: text.chars().count(),
    };
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(t) => Err(ExprError::Syntax {
            pos: t.pos,
            message: format!("unexpected {}", t.kind.describe()),
        }),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("name `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: Tok,
    /// Zero-based character offset.
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let kind = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                if i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_') {
                    return Err(ExprError::Syntax {
                        pos: i,
                        message: "missing operator between number and name".into(),
                    });
                }
                out.push(Token {
                    kind: Tok::Int(s.parse().expect("digits")),
                    pos: start,
                });
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token {
                    kind: Tok::Ident(chars[start..i].iter().collect()),
                    pos: start,
                });
                continue;
            }
            other => {
                return Err(ExprError::Syntax {
                    pos: i,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push(Token { kind, pos: start });
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    space: &'a SpaceSpec,
    params: &'a [(&'a str, i64)],
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> usize {
        self.peek().map(|t| t.pos).unwrap_or(self.end)
    }

    fn eat(&mut self, kind: &Tok) -> bool {
        if self.peek().is_some_and(|t| &t.kind == kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: Tok) -> Result<(), ExprError> {
        if self.eat(&kind) {
            return Ok(());
        }
        Err(ExprError::Syntax {
            pos: self.here(),
            message: format!(
                "expected {}, found {}",
                kind.describe(),
                self.peek().map(|t| t.kind.describe()).unwrap_or_else(|| "end of input".into())
            ),
        })
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = &acc * &self.unary()?;
            } else if self.peek().is_some_and(|t| t.kind == Tok::Slash) {
                let pos = self.here();
                self.pos += 1;
                let rhs = self.unary()?;
                if rhs.is_zero() {
                    return Err(ExprError::ZeroDenominator { pos });
                }
                acc = acc.checked_div(&rhs)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat(&Tok::Minus) {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let pos = self.here();
        let negative = self.eat(&Tok::Minus);
        let exp = if self.eat(&Tok::LParen) {
            let e = self.expr()?;
            self.expect(Tok::RParen)?;
            e
        } else {
            match self.peek().map(|t| t.kind.clone()) {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    Expr::constant(Rat::from_integer(n))
                }
                Some(Tok::Ident(name)) if self.param(&name).is_some() => {
                    self.pos += 1;
                    Expr::int(self.param(&name).unwrap())
                }
                _ => {
                    return Err(ExprError::Syntax {
                        pos,
                        message: "exponent must be an integer".into(),
                    })
                }
            }
        };
        let k = exp
            .as_constant()
            .filter(|c| c.denom().is_one())
            .ok_or(ExprError::Syntax {
                pos,
                message: "exponent must be an integer constant".into(),
            })?;
        let k = k.numer().to_i64().ok_or(ExprError::ExponentOverflow)?;
        let k = if negative { -k } else { k };
        base.pow_int(k).map_err(|e| match e {
            ExprError::ZeroToNegativePower => ExprError::ZeroDenominator { pos },
            other => other,
        })
    }

    fn param(&self, name: &str) -> Option<i64> {
        self.params.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(ExprError::Syntax {
                pos: self.end,
                message: "unexpected end of input".into(),
            });
        };
        self.pos += 1;
        match tok.kind {
            Tok::Int(n) => Ok(Expr::constant(Rat::from_integer(n))),
            Tok::Ident(name) => {
                if let Some(v) = self.param(&name) {
                    return Ok(Expr::int(v));
                }
                match self.space.resolve(&name) {
                    Some(c) => Ok(Expr::var(c)),
                    None => Err(ExprError::UnknownVariable { name, pos: tok.pos }),
                }
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            other => Err(ExprError::Syntax {
                pos: tok.pos,
                message: format!("unexpected {}", other.describe()),
            }),
        }
    }
}
