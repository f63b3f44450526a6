//! Multivector expression language.
//!
//! Grammar, loosest binding first (all binary levels left-associative):
//!
//! ```text
//! sum      := product (('+' | '-') product)*
//! product  := dotted ('*' dotted)*
//! dotted   := contract ('.' contract)*
//! contract := wedged (('_|' | '|_') wedged)*
//! wedged   := unary ('^' unary)*
//! unary    := '-' unary | postfix
//! postfix  := atom ('!' | '!!')*
//! atom     := number | blade | '(' sum ')'
//! ```
//!
//! Numbers are integers, fractions `p/q` (no spaces) or decimals `2.5`, all
//! read exactly. Blades are `e` followed by single-digit indices (`e013`) or
//! a braced list (`e{0,1,11}`); indices may come in any order, the
//! permutation sign is applied. Unicode aliases: `∧` for `^`, `⌋` for `_|`,
//! `⌊` for `|_`, `·` for `.`, `−` for `-`, `×` and `∗` for `*`.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::multivector::Multivector;
use crate::scalar::Rational;
use crate::signatures::{sort_count, IndexList, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Dot,
    LeftContract,
    RightContract,
    Wedge,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Dot => ".",
            BinOp::LeftContract => "_|",
            BinOp::RightContract => "|_",
            BinOp::Wedge => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul => 2,
            BinOp::Dot => 3,
            BinOp::LeftContract | BinOp::RightContract => 4,
            BinOp::Wedge => 5,
        }
    }
}

/// Parsed expression. Blade indices are validated against the session
/// signature during parsing; `sign` carries the sorting parity.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(Rational),
    Blade { list: IndexList, sign: i8 },
    Neg(Box<Expr>),
    Hodge(Box<Expr>),
    InvHodge(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

impl fmt::Display for Expr {
    /// Fully parenthesized form; reparses to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(r) => write!(f, "{r}"),
            Expr::Blade { list, sign } => {
                let idx: Vec<String> = list.iter().map(|i| i.to_string()).collect();
                let name = format!("e{{{}}}", idx.join(","));
                if *sign < 0 {
                    write!(f, "(-{name})")
                } else {
                    write!(f, "{name}")
                }
            }
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Hodge(e) => write!(f, "({e})!"),
            Expr::InvHodge(e) => write!(f, "({e})!!"),
            Expr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Blade(IndexList, i8),
    Op(BinOp),
    Minus,
    Bang,
    BangBang,
    LParen,
    RParen,
    End,
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        message: message.into(),
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    sig: Signature,
}

impl<'a> Lexer<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn number(&mut self, start: usize) -> Result<Tok> {
        let int: BigInt = self.digits().parse().map_err(|_| syntax(start, "malformed number"))?;
        let rest = self.rest().as_bytes();
        if rest.len() >= 2 && rest[0] == b'/' && rest[1].is_ascii_digit() {
            self.pos += 1;
            let at = self.pos;
            let den: BigInt = self.digits().parse().map_err(|_| syntax(at, "malformed denominator"))?;
            if den == BigInt::from(0) {
                return Err(syntax(at, "zero denominator"));
            }
            return Ok(Tok::Num(Rational::new(int, den)));
        }
        if rest.len() >= 2 && rest[0] == b'.' && rest[1].is_ascii_digit() {
            self.pos += 1;
            let frac = self.digits();
            let scale = BigInt::from(10).pow(frac.len() as u32);
            let num = int * &scale + frac.parse::<BigInt>().map_err(|_| syntax(start, "malformed number"))?;
            return Ok(Tok::Num(Rational::new(num, scale)));
        }
        Ok(Tok::Num(Rational::from_integer(int)))
    }

    fn index(&self, value: usize, at: usize, seen: &mut Vec<usize>) -> Result<()> {
        if value >= self.sig.dim() {
            return Err(syntax(at, format!("index {value} out of range for signature {}", self.sig)));
        }
        if seen.contains(&value) {
            return Err(syntax(at, format!("repeated index {value} in blade")));
        }
        seen.push(value);
        Ok(())
    }

    fn blade(&mut self, start: usize) -> Result<Tok> {
        let mut seen = Vec::new();
        if self.peek() == Some('{') {
            self.pos += 1;
            loop {
                self.skip_space();
                let at = self.pos;
                let d = self.digits();
                if d.is_empty() {
                    if seen.is_empty() && self.peek() == Some('}') {
                        self.pos += 1;
                        break;
                    }
                    return Err(syntax(at, "expected an index in blade list"));
                }
                let v: usize = d.parse().map_err(|_| syntax(at, "index too large"))?;
                self.index(v, at, &mut seen)?;
                self.skip_space();
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some('}') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(syntax(self.pos, "expected ',' or '}' in blade list")),
                }
            }
        } else {
            let at = self.pos;
            let d = self.digits();
            if d.is_empty() {
                return Err(syntax(start, "blade needs indices, e.g. e01 or e{0,1}"));
            }
            for (n, c) in d.bytes().enumerate() {
                self.index((c - b'0') as usize, at + n, &mut seen)?;
            }
        }
        if self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_' && !self.rest().starts_with("_|")) {
            return Err(syntax(self.pos, "unexpected character after blade"));
        }
        let sorted = sort_count(&seen);
        let list = sorted.list.expect("indices checked distinct");
        Ok(Tok::Blade(list, sorted.sign))
    }

    fn skip_space(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += self.peek().map_or(0, char::len_utf8);
        }
    }

    fn next(&mut self) -> Result<(usize, Tok)> {
        self.skip_space();
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Ok((start, Tok::End));
        };
        let fixed: &[(&str, Tok)] = &[
            ("!!", Tok::BangBang),
            ("!", Tok::Bang),
            ("_|", Tok::Op(BinOp::LeftContract)),
            ("|_", Tok::Op(BinOp::RightContract)),
            ("^", Tok::Op(BinOp::Wedge)),
            ("∧", Tok::Op(BinOp::Wedge)),
            ("⌋", Tok::Op(BinOp::LeftContract)),
            ("⌊", Tok::Op(BinOp::RightContract)),
            (".", Tok::Op(BinOp::Dot)),
            ("·", Tok::Op(BinOp::Dot)),
            ("*", Tok::Op(BinOp::Mul)),
            ("∗", Tok::Op(BinOp::Mul)),
            ("×", Tok::Op(BinOp::Mul)),
            ("+", Tok::Op(BinOp::Add)),
            ("-", Tok::Minus),
            ("−", Tok::Minus),
            ("(", Tok::LParen),
            (")", Tok::RParen),
        ];
        for (text, tok) in fixed {
            if self.rest().starts_with(text) {
                self.pos += text.len();
                return Ok((start, tok.clone()));
            }
        }
        if c.is_ascii_digit() {
            return Ok((start, self.number(start)?));
        }
        if c == 'e' {
            self.pos += 1;
            return Ok((start, self.blade(start)?));
        }
        Err(syntax(start, format!("unknown token '{c}'")))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
}

impl Parser<'_> {
    fn advance(&mut self) -> Result<()> {
        let (at, tok) = self.lexer.next()?;
        self.at = at;
        self.tok = tok;
        Ok(())
    }

    fn binop(&self) -> Option<BinOp> {
        match self.tok {
            Tok::Op(op) => Some(op),
            Tok::Minus => Some(BinOp::Sub),
            _ => None,
        }
    }

    fn expr(&mut self, min_prec: u8) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binop() {
            if op.precedence() < min_prec {
                break;
            }
            self.advance()?;
            let rhs = self.expr(op.precedence() + 1)?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.tok == Tok::Minus {
            self.advance()?;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let mut e = self.atom()?;
        loop {
            match self.tok {
                Tok::Bang => e = Expr::Hodge(Box::new(e)),
                Tok::BangBang => e = Expr::InvHodge(Box::new(e)),
                _ => return Ok(e),
            }
            self.advance()?;
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let e = match std::mem::replace(&mut self.tok, Tok::End) {
            Tok::Num(r) => Expr::Number(r),
            Tok::Blade(list, sign) => Expr::Blade { list, sign },
            Tok::LParen => {
                self.advance()?;
                let inner = self.expr(1)?;
                if self.tok != Tok::RParen {
                    return Err(syntax(self.at, "expected ')'"));
                }
                inner
            }
            Tok::End => return Err(syntax(self.at, "unexpected end of input")),
            _ => return Err(syntax(self.at, "expected a number, blade or '('")),
        };
        self.advance()?;
        Ok(e)
    }
}

/// Parse `src`, validating blade indices against `sig`.
pub fn parse(src: &str, sig: Signature) -> Result<Expr> {
    let mut p = Parser {
        lexer: Lexer { src, pos: 0, sig },
        tok: Tok::End,
        at: 0,
    };
    p.advance()?;
    let e = p.expr(1)?;
    if p.tok != Tok::End {
        return Err(syntax(p.at, "unexpected token after expression"));
    }
    Ok(e)
}

fn as_scalar(v: &Multivector<Rational>) -> Option<Rational> {
    v.terms().all(|(l, _)| l.is_empty()).then(|| v.scalar_part())
}

/// Exact evaluation in `sig`.
pub fn eval(e: &Expr, sig: Signature) -> Result<Multivector<Rational>> {
    Ok(match e {
        Expr::Number(r) => Multivector::scalar(sig, r.clone()),
        Expr::Blade { list, sign } => Multivector::blade(sig, *list, Rational::from_integer(BigInt::from(*sign)))?,
        Expr::Neg(a) => -eval(a, sig)?,
        Expr::Hodge(a) => eval(a, sig)?.hodge(),
        Expr::InvHodge(a) => eval(a, sig)?.inv_hodge(),
        Expr::Binary(op, a, b) => {
            let (x, y) = (eval(a, sig)?, eval(b, sig)?);
            match op {
                BinOp::Add => x.checked_add(&y)?,
                BinOp::Sub => x.checked_sub(&y)?,
                BinOp::Wedge => x.wedge(&y)?,
                BinOp::Dot => Multivector::scalar(sig, x.dot(&y)?),
                BinOp::LeftContract => x.left_contraction(&y)?,
                BinOp::RightContract => x.right_contraction(&y)?,
                BinOp::Mul => match (as_scalar(&x), as_scalar(&y)) {
                    (Some(s), _) => y.scale(&s),
                    (_, Some(s)) => x.scale(&s),
                    _ => {
                        return Err(Error::Domain {
                            op: "*",
                            requirement: "a scalar operand on at least one side",
                        })
                    }
                },
            }
        }
    })
}

/// Parse, evaluate and render in canonical form.
pub fn eval_str(src: &str, sig: Signature) -> Result<String> {
    Ok(eval(&parse(src, sig)?, sig)?.to_string())
}
