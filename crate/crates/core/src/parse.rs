//! Polynomial expressions: `+ - * ^`, parentheses, integer and `p/q`
//! literals, and variables `x1..xn` (or `y1..yn`).
//!
//! `^` binds tighter than unary minus, so `-x1^2` is `-(x1^2)`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Rat;

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err(pos: usize, msg: impl Into<String>) -> Error {
        Error::Parse { pos, msg: msg.into() }
    }

    fn next(&mut self) -> Result<(usize, Tok)> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(self.pos) else {
            return Ok((start, Tok::End));
        };
        self.pos += 1;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                let end = self.digits_end();
                Tok::Num(self.src[start..end].parse().expect("ascii digits"))
            }
            b'x' | b'y' => {
                let end = self.digits_end();
                if end == self.pos {
                    return Err(Self::err(start, "expected a variable index"));
                }
                let idx = self.src[self.pos..end]
                    .parse()
                    .map_err(|_| Self::err(start, "variable index too large"))?;
                self.pos = end;
                Tok::Var(idx)
            }
            _ => {
                let ch = self.src[start..].chars().next().expect("nonempty");
                return Err(Self::err(start, format!("unexpected character {ch:?}")));
            }
        };
        if let Tok::Num(_) = tok {
            self.pos = self.digits_end();
        }
        Ok((start, tok))
    }

    fn digits_end(&self) -> usize {
        let bytes = self.src.as_bytes();
        let mut end = self.pos;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        end
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: (usize, Tok),
    n: usize,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(usize, Tok)> {
        let next = self.lexer.next()?;
        Ok(std::mem::replace(&mut self.peeked, next))
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peeked.1 {
                Tok::Plus => {
                    self.bump()?;
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump()?;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while self.peeked.1 == Tok::Star {
            self.bump()?;
            acc = acc.mul(&self.unary()?);
        }
        if self.peeked.1 == Tok::Slash {
            return Err(Lexer::err(self.peeked.0, "division is only allowed inside rational literals"));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peeked.1 {
            Tok::Minus => {
                self.bump()?;
                Ok(self.unary()?.neg())
            }
            Tok::Plus => {
                self.bump()?;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peeked.1 != Tok::Caret {
            return Ok(base);
        }
        self.bump()?;
        match self.bump()? {
            (_, Tok::Num(k)) => {
                let k = u32::try_from(k).map_err(|_| Lexer::err(self.peeked.0, "exponent too large"))?;
                Ok(base.pow(k))
            }
            (pos, Tok::Minus) => Err(Lexer::err(pos, "negative exponent")),
            (pos, _) => Err(Lexer::err(pos, "expected a non-negative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.bump()? {
            (_, Tok::Num(p)) => {
                if self.peeked.1 != Tok::Slash {
                    return Ok(Polynomial::constant(self.n, Rat::from_integer(p)));
                }
                self.bump()?;
                match self.bump()? {
                    (pos, Tok::Num(q)) if q.is_zero() => Err(Lexer::err(pos, "zero denominator")),
                    (_, Tok::Num(q)) => Ok(Polynomial::constant(self.n, Rat::new(p, q))),
                    (pos, _) => Err(Lexer::err(pos, "expected an integer denominator")),
                }
            }
            (pos, Tok::Var(j)) => {
                if j == 0 || j > self.n {
                    return Err(Lexer::err(pos, format!("variable index {j} outside 1..={}", self.n)));
                }
                Ok(Polynomial::var(self.n, j))
            }
            (_, Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump()? {
                    (_, Tok::RParen) => Ok(inner),
                    (pos, _) => Err(Lexer::err(pos, "expected ')'")),
                }
            }
            (pos, Tok::End) => Err(Lexer::err(pos, "unexpected end of input")),
            (pos, t) => Err(Lexer::err(pos, format!("unexpected token {t:?}"))),
        }
    }
}

/// Parses `src` as a polynomial in `n` variables.
pub fn parse_polynomial(src: &str, n: usize) -> Result<Polynomial> {
    let mut lexer = Lexer { src, pos: 0 };
    let first = lexer.next()?;
    let mut p = Parser { lexer, peeked: first, n };
    let out = p.expr()?;
    match p.peeked {
        (_, Tok::End) => Ok(out),
        (pos, _) => Err(Lexer::err(pos, "trailing input")),
    }
}
