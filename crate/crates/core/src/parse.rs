//! Text syntax.
//!
//! Steenrod algebra elements: `Sq[5,2,1] + Sq[6,2]`, products with `*`,
//! parentheses, Milnor basis elements `M[8,4,2,1]`, the unit `1` and zero `0`.
//! `Sq[...]` entries need not be admissible; the result is always normalized.
//!
//! Stiefel–Whitney polynomials: `w[4]*w[2]^2 + w[8]`, with `1` and `0`.

use crate::error::{Error, Result};
use crate::milnor::{milnor_to_admissible, MilnorElement, MilnorSeq};
use crate::serre_cartan::{normalize, product, Element, Word};
use crate::thom_sw::{SWMonomial, SWPolynomial};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
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

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.err(format!("expected {c:?}, found {found:?}")),
                None => self.err(format!("expected {c:?}, found end of input")),
            }
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.src[start..]
            .bytes()
            .take_while(u8::is_ascii_digit)
            .count();
        if digits == 0 {
            return self.err("expected a number");
        }
        self.pos += digits;
        self.src[start..self.pos].parse().map_err(|_| Error::Parse {
            position: start,
            message: "number out of range".into(),
        })
    }

    /// `[n, n, ...]`, possibly empty.
    fn list(&mut self) -> Result<Vec<u32>> {
        self.expect('[')?;
        let mut out = Vec::new();
        if self.eat(']') {
            return Ok(out);
        }
        loop {
            out.push(self.number()?);
            if self.eat(']') {
                return Ok(out);
            }
            self.expect(',')?;
        }
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("unexpected {c:?}")),
        }
    }
}

/// A parsed value; a literal `0` has no degree until it meets another term.
enum Value {
    Zero,
    El(Element),
}

fn sum(at: usize, a: Value, b: Value) -> Result<Value> {
    Ok(match (a, b) {
        (Value::Zero, v) | (v, Value::Zero) => v,
        (Value::El(x), Value::El(y)) => Value::El(x.checked_add(&y).map_err(|e| Error::Parse {
            position: at,
            message: e.to_string(),
        })?),
    })
}

fn element_expr(c: &mut Cursor) -> Result<Value> {
    let mut acc = element_term(c)?;
    loop {
        c.skip_ws();
        let at = c.pos;
        if !c.eat('+') {
            return Ok(acc);
        }
        let rhs = element_term(c)?;
        acc = sum(at, acc, rhs)?;
    }
}

fn element_term(c: &mut Cursor) -> Result<Value> {
    let mut acc = element_factor(c)?;
    while c.eat('*') {
        let rhs = element_factor(c)?;
        acc = match (acc, rhs) {
            (Value::El(x), Value::El(y)) => Value::El(product(&x, &y)),
            _ => Value::Zero,
        };
    }
    Ok(acc)
}

fn element_factor(c: &mut Cursor) -> Result<Value> {
    if c.eat('(') {
        let v = element_expr(c)?;
        c.expect(')')?;
        return Ok(v);
    }
    if c.eat_str("Sq") {
        let entries = c.list()?;
        return Ok(Value::El(normalize(&Word::from_exponents(&entries))));
    }
    if c.eat_str("M") {
        let entries = c.list()?;
        let m = MilnorElement::from_seq(MilnorSeq::new(&entries));
        return Ok(Value::El(milnor_to_admissible(&m)));
    }
    match c.peek() {
        Some('0') | Some('1') => {
            let start = c.pos;
            match c.number()? {
                0 => Ok(Value::Zero),
                1 => Ok(Value::El(Element::unit())),
                _ => Err(Error::Parse {
                    position: start,
                    message: "only the constants 0 and 1 are allowed".into(),
                }),
            }
        }
        Some(found) => c.err(format!(
            "expected Sq[...], M[...], 0, 1 or '(', found {found:?}"
        )),
        None => c.err("unexpected end of input"),
    }
}

/// Parses and normalizes an element. A bare `0` is zero in degree 0.
pub fn parse_element(src: &str) -> Result<Element> {
    let mut c = Cursor::new(src);
    let v = element_expr(&mut c)?;
    c.finish()?;
    Ok(match v {
        Value::Zero => Element::zero(0),
        Value::El(e) => e,
    })
}

enum PolyValue {
    Zero,
    Poly(SWPolynomial),
}

/// Parses a Stiefel–Whitney polynomial. A bare `0` is zero in degree 0.
pub fn parse_sw_polynomial(src: &str) -> Result<SWPolynomial> {
    let mut c = Cursor::new(src);
    let mut acc = PolyValue::Zero;
    loop {
        let at = c.pos;
        let m = sw_monomial(&mut c)?;
        acc = match (acc, m) {
            (PolyValue::Zero, v) | (v, PolyValue::Zero) => v,
            (PolyValue::Poly(x), PolyValue::Poly(y)) => {
                PolyValue::Poly(x.checked_add(&y).map_err(|e| Error::Parse {
                    position: at,
                    message: e.to_string(),
                })?)
            }
        };
        if !c.eat('+') {
            break;
        }
    }
    c.finish()?;
    Ok(match acc {
        PolyValue::Zero => SWPolynomial::zero(0),
        PolyValue::Poly(p) => p,
    })
}

fn sw_monomial(c: &mut Cursor) -> Result<PolyValue> {
    let mut indices = Vec::new();
    let mut zero = false;
    loop {
        if c.eat_str("w") {
            c.expect('[')?;
            let start = c.pos;
            let i = c.number()?;
            if i == 0 {
                return Err(Error::Parse {
                    position: start,
                    message: "generator index must be positive (w[0] is 1)".into(),
                });
            }
            c.expect(']')?;
            let e = if c.eat('^') { c.number()? } else { 1 };
            indices.extend(std::iter::repeat_n(i, e as usize));
        } else {
            match c.peek() {
                Some('0') | Some('1') => {
                    let start = c.pos;
                    match c.number()? {
                        0 => zero = true,
                        1 => {}
                        _ => {
                            return Err(Error::Parse {
                                position: start,
                                message: "only the constants 0 and 1 are allowed".into(),
                            })
                        }
                    }
                }
                Some(found) => return c.err(format!("expected w[...], 0 or 1, found {found:?}")),
                None => return c.err("unexpected end of input"),
            }
        }
        if !c.eat('*') {
            break;
        }
    }
    Ok(if zero {
        PolyValue::Zero
    } else {
        PolyValue::Poly(SWPolynomial::from_monomial(SWMonomial::from_indices(
            &indices,
        )))
    })
}
