//! Recursive-descent parser for coefficient expressions and algebra elements.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | base ('^' ['-'] integer)?
//! base   := integer | 'I' | name | '(' expr ')'
//! ```
//!
//! Names resolve to ring symbols, or to generators when an alphabet is
//! given. Division is only allowed by unit monomials.

use std::sync::Arc;

use thiserror::Error;

use crate::freealg::{Alphabet, Element, Word};
use crate::symring::{Coefficient, GaussianRational, Ring};

pub const MAX_EXPONENT: i64 = 64;
pub const MAX_TERMS: usize = 512;
const MAX_DEPTH: usize = 64;
const MAX_DIGITS: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Clone, Debug)]
enum Value {
    Scalar(Coefficient),
    Elem(Element),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    depth: usize,
    ring: &'a Arc<Ring>,
    alphabet: Option<&'a Arc<Alphabet>>,
}

/// Parses a coefficient over `ring`.
pub fn parse_expression(ring: &Arc<Ring>, src: &str) -> Result<Coefficient, ParseError> {
    let mut p = Parser {
        src,
        pos: 0,
        depth: 0,
        ring,
        alphabet: None,
    };
    match p.parse_all()? {
        Value::Scalar(c) => Ok(c),
        Value::Elem(_) => unreachable!("no alphabet given"),
    }
}

/// Parses a linear combination of words, e.g. `y*x - q^-1 * x*y`.
pub fn parse_element(
    alphabet: &Arc<Alphabet>,
    ring: &Arc<Ring>,
    src: &str,
) -> Result<Element, ParseError> {
    let mut p = Parser {
        src,
        pos: 0,
        depth: 0,
        ring,
        alphabet: Some(alphabet),
    };
    Ok(match p.parse_all()? {
        Value::Scalar(c) => Element::one(alphabet, ring).scale(&c),
        Value::Elem(e) => e,
    })
}

impl Value {
    fn size(&self) -> usize {
        match self {
            Value::Scalar(c) => c.num_terms(),
            Value::Elem(e) => e.terms().map(|(_, c)| c.num_terms()).sum(),
        }
    }
}

impl<'a> Parser<'a> {
    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.src[self.pos..].chars().next() {
            self.pos += c.len_utf8();
        }
    }

    fn parse_all(&mut self) -> Result<Value, ParseError> {
        if self.peek().is_none() {
            return self.err(self.pos, "empty expression");
        }
        let v = self.expr()?;
        if let Some(c) = self.peek() {
            return self.err(self.pos, format!("unexpected `{c}`"));
        }
        Ok(v)
    }

    fn guard(&self, at: usize, v: Value) -> Result<Value, ParseError> {
        if v.size() > MAX_TERMS {
            return self.err(at, format!("expression exceeds {MAX_TERMS} terms"));
        }
        Ok(v)
    }

    fn expr(&mut self) -> Result<Value, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.err(self.pos, "expression nested too deeply");
        }
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            let at = self.pos;
            self.bump();
            let rhs = self.term()?;
            acc = self.guard(at, self.add(acc, rhs, op == '-'))?;
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.factor()?;
        while let Some(op @ ('*' | '/')) = self.peek() {
            let at = self.pos;
            self.bump();
            let rhs_at = self.pos;
            let rhs = self.factor()?;
            acc = if op == '*' {
                self.mul(acc, rhs)
            } else {
                let Value::Scalar(d) = rhs else {
                    return self.err(rhs_at, "can only divide by a coefficient");
                };
                let inv = match d.inverse() {
                    Ok(inv) => inv,
                    Err(_) => return self.err(rhs_at, format!("division by non-unit `{d}`")),
                };
                self.mul(acc, Value::Scalar(inv))
            };
            acc = self.guard(at, acc)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Value, ParseError> {
        if self.peek() == Some('-') {
            self.bump();
            self.depth += 1;
            if self.depth > MAX_DEPTH {
                return self.err(self.pos, "expression nested too deeply");
            }
            let v = self.factor()?;
            self.depth -= 1;
            return Ok(self.neg(v));
        }
        let base = self.base()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        let at = self.pos;
        self.bump();
        let neg = if self.peek() == Some('-') {
            self.bump();
            true
        } else {
            false
        };
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits();
        if digits.is_empty() {
            return self.err(start, "expected integer exponent");
        }
        let e: i64 = match digits.parse::<i64>() {
            Ok(e) if e <= MAX_EXPONENT => e,
            _ => return self.err(start, format!("exponent larger than {MAX_EXPONENT}")),
        };
        let e = if neg { -e } else { e };
        let v = match base {
            Value::Scalar(c) if e < 0 => match c.pow(e) {
                Ok(p) => Value::Scalar(p),
                Err(_) => return self.err(at, format!("negative power of non-unit `{c}`")),
            },
            Value::Scalar(c) => {
                let mut acc = Coefficient::one(self.ring);
                for _ in 0..e {
                    acc = &acc * &c;
                    if acc.num_terms() > MAX_TERMS {
                        return self.err(at, format!("expression exceeds {MAX_TERMS} terms"));
                    }
                }
                Value::Scalar(acc)
            }
            Value::Elem(x) => {
                if e < 0 {
                    return self.err(at, "negative power of an algebra element");
                }
                let mut acc = Element::one(x.alphabet(), x.ring());
                for _ in 0..e {
                    acc = &acc * &x;
                    if acc.num_terms() > MAX_TERMS {
                        return self.err(at, format!("expression exceeds {MAX_TERMS} terms"));
                    }
                }
                Value::Elem(acc)
            }
        };
        self.guard(at, v)
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn base(&mut self) -> Result<Value, ParseError> {
        let start = self.pos;
        match self.peek() {
            None => self.err(self.pos, "unexpected end of input"),
            Some('(') => {
                self.bump();
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return self.err(self.pos, "expected `)`");
                }
                self.bump();
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let d = self.digits();
                if d.len() > MAX_DIGITS {
                    return self.err(start, "integer literal too long");
                }
                let n: num_bigint::BigInt = d.parse().expect("ascii digits");
                let g = GaussianRational::real(num_rational::BigRational::from_integer(n));
                Ok(Value::Scalar(Coefficient::constant(self.ring, g)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.src[self.pos..]
                    .starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_')
                {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                if name == "I" {
                    return Ok(Value::Scalar(Coefficient::imaginary_unit(self.ring)));
                }
                if let Ok(c) = Coefficient::symbol(self.ring, name) {
                    return Ok(Value::Scalar(c));
                }
                if let Some(alpha) = self.alphabet {
                    if let Some(p) = alpha.position(name) {
                        return Ok(Value::Elem(Element::word(alpha, self.ring, Word(vec![p]))));
                    }
                    return self.err(start, format!("unknown symbol or generator `{name}`"));
                }
                self.err(start, format!("undeclared symbol `{name}`"))
            }
            Some(c) => self.err(start, format!("unexpected `{c}`")),
        }
    }

    fn promote(&self, v: Value) -> Element {
        match v {
            Value::Elem(e) => e,
            Value::Scalar(c) => {
                let alpha = self.alphabet.expect("elements only arise with an alphabet");
                Element::one(alpha, self.ring).scale(&c)
            }
        }
    }

    fn add(&self, a: Value, b: Value, minus: bool) -> Value {
        match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => {
                Value::Scalar(if minus { &x - &y } else { &x + &y })
            }
            (a, b) => {
                let (x, y) = (self.promote(a), self.promote(b));
                Value::Elem(if minus { &x - &y } else { &x + &y })
            }
        }
    }

    fn mul(&self, a: Value, b: Value) -> Value {
        match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x * &y),
            (Value::Scalar(c), Value::Elem(e)) | (Value::Elem(e), Value::Scalar(c)) => {
                Value::Elem(e.scale(&c))
            }
            (Value::Elem(x), Value::Elem(y)) => Value::Elem(&x * &y),
        }
    }

    fn neg(&self, v: Value) -> Value {
        match v {
            Value::Scalar(c) => Value::Scalar(-&c),
            Value::Elem(e) => Value::Elem(-&e),
        }
    }
}
