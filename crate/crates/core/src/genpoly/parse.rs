use num_bigint::BigInt;

use super::{Atom, Expr};
use crate::error::{Error, Result};

/// Parses a constant-free generalized polynomial.
///
/// Constants in a product attach to the nearest variable of that product, so
/// `2*n*m` is `(2n)·m`; a product without any variable is rejected.
pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err(format!("unexpected '{}'", p.chars[p.pos])));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

enum Factor {
    Const(Atom),
    Var(usize),
    Node(Expr),
}

impl Parser {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term(false)?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let rhs = self.term(false)?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some('-') => {
                    self.pos += 1;
                    let rhs = self.term(true)?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self, negate: bool) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        let mut pending: Vec<Atom> = if negate { vec![Atom::Int(BigInt::from(-1))] } else { Vec::new() };
        let mut factors: Vec<Expr> = Vec::new();
        let mut last_var: Option<usize> = None;
        loop {
            match self.factor(&mut pending)? {
                Factor::Const(a) => pending.push(a),
                Factor::Var(v) => {
                    factors.push(Expr::Linear {
                        coeff: std::mem::take(&mut pending),
                        var: v,
                    });
                    last_var = Some(factors.len() - 1);
                }
                Factor::Node(e) => factors.push(e),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        if !pending.is_empty() {
            match last_var {
                Some(i) => {
                    if let Expr::Linear { coeff, .. } = &mut factors[i] {
                        coeff.append(&mut pending);
                    }
                }
                None => {
                    return Err(Error::Parse {
                        pos: start,
                        msg: "constant leaf: every constant must multiply a variable".into(),
                    })
                }
            }
        }
        let mut it = factors.into_iter();
        let first = it.next().expect("a term has at least one factor");
        Ok(it.fold(first, |acc, f| Expr::Mul(Box::new(acc), Box::new(f))))
    }

    fn factor(&mut self, pending: &mut Vec<Atom>) -> Result<Factor> {
        let Some(c) = self.peek() else {
            return Err(self.err("unexpected end of input"));
        };
        match c {
            '-' => {
                self.pos += 1;
                if matches!(self.chars.get(self.pos), Some(d) if d.is_ascii_digit()) {
                    return Ok(Factor::Const(self.number(true)?));
                }
                pending.push(Atom::Int(BigInt::from(-1)));
                self.factor(pending)
            }
            '0'..='9' => Ok(Factor::Const(self.number(false)?)),
            '(' => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(Factor::Node(e))
            }
            '[' => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(']')?;
                Ok(Factor::Node(Expr::Frac(Box::new(e))))
            }
            c if c.is_ascii_alphabetic() => self.ident(),
            _ => Err(self.err(format!("unexpected '{c}'"))),
        }
    }

    fn number(&mut self, negative: bool) -> Result<Atom> {
        let start = self.pos;
        while matches!(self.chars.get(self.pos), Some(d) if d.is_ascii_digit()) {
            self.pos += 1;
        }
        let int: String = self.chars[start..self.pos].iter().collect();
        let mut frac = String::new();
        if self.chars.get(self.pos) == Some(&'.') {
            self.pos += 1;
            let fs = self.pos;
            while matches!(self.chars.get(self.pos), Some(d) if d.is_ascii_digit()) {
                self.pos += 1;
            }
            frac = self.chars[fs..self.pos].iter().collect();
            if frac.is_empty() {
                return Err(self.err("digits expected after '.'"));
            }
        }
        let mut digits: BigInt = format!("{int}{frac}").parse().map_err(|_| self.err("bad number"))?;
        if negative {
            digits = -digits;
        }
        Ok(if frac.is_empty() {
            Atom::Int(digits)
        } else {
            Atom::Dec {
                digits,
                scale: frac.len() as u32,
            }
        })
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.chars.get(self.pos), Some(d) if d.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| Error::Parse {
            pos: start,
            msg: "nonnegative integer expected".into(),
        })
    }

    fn ident(&mut self) -> Result<Factor> {
        let start = self.pos;
        while matches!(self.chars.get(self.pos), Some(c) if c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        let word: String = self.chars[start..self.pos].iter().collect();
        let bad = |msg: String| Error::Parse { pos: start, msg };
        match word.as_str() {
            "n" => Ok(Factor::Var(0)),
            "m" => Ok(Factor::Var(1)),
            "pi" => Ok(Factor::Const(Atom::Pi)),
            "e" => Ok(Factor::Const(Atom::E)),
            "sqrt" => {
                self.expect('(')?;
                let k = self.uint()?;
                self.expect(')')?;
                Ok(Factor::Const(Atom::Sqrt(k)))
            }
            "root" => {
                self.expect('(')?;
                let k = self.uint()?;
                self.expect(',')?;
                let jpos = self.pos;
                let j = self.uint()?;
                self.expect(')')?;
                let j = u32::try_from(j).ok().filter(|&j| j >= 1).ok_or(Error::Parse {
                    pos: jpos,
                    msg: "root index must be a positive integer".into(),
                })?;
                Ok(Factor::Const(Atom::Root(k, j)))
            }
            w if w.starts_with('x') && w.len() > 1 && w[1..].bytes().all(|b| b.is_ascii_digit()) => {
                let k: usize = w[1..].parse().map_err(|_| bad(format!("bad variable '{w}'")))?;
                if k == 0 {
                    return Err(bad("variables are numbered from x1".into()));
                }
                Ok(Factor::Var(k - 1))
            }
            w => Err(bad(format!("unknown identifier '{w}'"))),
        }
    }
}
