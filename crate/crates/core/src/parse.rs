//! Ring specifications and element expressions.
//!
//! Ring syntax: `Z`, `Q`, `Z/n`, `Z[i]`, `Cyclo(n)`, `Q(t)`, `Q(t^(1/n))`,
//! followed by any number of suffixes `[x]`, `[x,1/x]`, `[x^(1/n)]` and an
//! optional final `/(poly)` on a polynomial ring over `Z`, `Q` or `Z/n`.
//!
//! Element syntax: `+ - * / ^`, parentheses, integer literals and variable
//! names. Juxtaposition multiplies (`2t`, `(1+t)(1-t)`). Exponents are
//! signed integers or parenthesized fractions (`t^-2`, `t^(1/6)`); a
//! fractional exponent must sit on a bare variable. Unary minus binds
//! looser than `^`, so `-t^2` is `-(t^2)`. Division needs a unit divisor.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring};

/// Arithmetic needed to evaluate an expression.
pub trait ExprTarget {
    type Value: Clone;
    fn constant(&self, n: &BigInt) -> Result<Self::Value>;
    fn variable(&self, name: &str) -> Result<Self::Value>;
    /// name^(num/den) with den > 1 and the fraction reduced.
    fn fractional_power(&self, name: &str, num: i64, den: u64) -> Result<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn neg(&self, a: &Self::Value) -> Result<Self::Value>;
    fn div(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn pow(&self, a: &Self::Value, e: i64) -> Result<Self::Value>;
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|x| x.1).collect();
            out.push((pos, Tok::Num(s.parse().unwrap())));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((pos, Tok::Ident(chars[start..i].iter().map(|x| x.1).collect())));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse { pos, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser<'a, T: ExprTarget> {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    end: usize,
    target: &'a T,
}

impl<T: ExprTarget> Parser<'_, T> {
    fn pos(&self) -> usize {
        self.toks.get(self.idx).map_or(self.end, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn err<V>(&self, msg: impl Into<String>) -> Result<V> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn at(&self, pos: usize, r: Result<T::Value>) -> Result<T::Value> {
        r.map_err(|e| match e {
            Error::Parse { .. } => e,
            other => Error::Parse { pos, msg: other.to_string() },
        })
    }

    fn expr(&mut self) -> Result<T::Value> {
        let mut acc = self.term()?;
        loop {
            let pos = self.pos();
            if self.eat('+') {
                let rhs = self.term()?;
                acc = self.at(pos, self.target.add(&acc, &rhs))?;
            } else if self.eat('-') {
                let rhs = self.term()?;
                acc = self.at(pos, self.target.sub(&acc, &rhs))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<T::Value> {
        let mut acc = self.unary()?;
        loop {
            let pos = self.pos();
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = self.at(pos, self.target.mul(&acc, &rhs))?;
            } else if self.eat('/') {
                let rhs = self.unary()?;
                acc = self.at(pos, self.target.div(&acc, &rhs))?;
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Sym('('))) {
                let rhs = self.power()?;
                acc = self.at(pos, self.target.mul(&acc, &rhs))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<T::Value> {
        let pos = self.pos();
        if self.eat('-') {
            let v = self.unary()?;
            return self.at(pos, self.target.neg(&v));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<T::Value> {
        let pos = self.pos();
        let (base, name) = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let (num, den) = self.exponent()?;
        if den == 1 {
            return self.at(pos, self.target.pow(&base, num));
        }
        match name {
            Some(n) => self.at(pos, self.target.fractional_power(&n, num, den)),
            None => Err(Error::Parse { pos, msg: "fractional exponent needs a bare variable".into() }),
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.idx += 1;
                let v: i64 = match i64::try_from(n) {
                    Ok(v) => v,
                    Err(_) => return self.err("exponent out of range"),
                };
                Ok(if neg { -v } else { v })
            }
            _ => self.err("expected an integer exponent"),
        }
    }

    fn exponent(&mut self) -> Result<(i64, u64)> {
        if !self.eat('(') {
            return Ok((self.signed_int()?, 1));
        }
        let num = self.signed_int()?;
        let mut den = 1u64;
        if self.eat('/') {
            let d = self.signed_int()?;
            if d <= 0 {
                return self.err("exponent denominator must be positive");
            }
            den = d as u64;
        }
        if !self.eat(')') {
            return self.err("expected ')'");
        }
        let g = num.unsigned_abs().gcd(&den).max(1);
        Ok((num / g as i64, den / g))
    }

    fn primary(&mut self) -> Result<(T::Value, Option<String>)> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.idx += 1;
                Ok((self.at(pos, self.target.constant(&n))?, None))
            }
            Some(Tok::Ident(name)) => {
                self.idx += 1;
                Ok((self.at(pos, self.target.variable(&name))?, Some(name)))
            }
            Some(Tok::Sym('(')) => {
                self.idx += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok((v, None))
            }
            Some(t) => self.err(format!("unexpected {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Evaluates `text` against an arbitrary target.
pub fn parse_expr<T: ExprTarget>(target: &T, text: &str) -> Result<T::Value> {
    let toks = lex(text)?;
    let mut p = Parser { toks, idx: 0, end: text.len(), target };
    let v = p.expr()?;
    if p.idx != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(v)
}

impl ExprTarget for Ring {
    type Value = Elem;

    fn constant(&self, n: &BigInt) -> Result<Elem> {
        Ok(self.from_bigint(n))
    }

    fn variable(&self, name: &str) -> Result<Elem> {
        if self.var() == Some(name) {
            return self.generator();
        }
        match self.base() {
            Some(base) => self.lift(&base.variable(name)?),
            None => Err(Error::Domain(format!("unknown variable '{name}' in {self}"))),
        }
    }

    fn fractional_power(&self, name: &str, num: i64, den: u64) -> Result<Elem> {
        if self.puiseux_denominator().is_some() && self.var() == Some(name) {
            return self.puiseux_monomial(num, den);
        }
        Err(Error::Domain(format!("{name}^({num}/{den}) is not in {self}")))
    }

    fn add(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        a.try_add(b)
    }

    fn sub(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        a.try_sub(b)
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        a.try_mul(b)
    }

    fn neg(&self, a: &Elem) -> Result<Elem> {
        Ok(-a)
    }

    fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        let inv = b
            .try_invert()
            .ok_or_else(|| Error::NotInvertible(b.to_string()))?;
        a.try_mul(&inv)
    }

    fn pow(&self, a: &Elem, e: i64) -> Result<Elem> {
        a.pow_i(e)
    }
}

/// Parses an element of `ring`.
pub fn parse_elem(ring: &Ring, text: &str) -> Result<Elem> {
    parse_expr(ring, text)
}

/// Index of the ')' closing a parenthesis opened just before `s`.
fn matching(s: &str) -> Option<usize> {
    let mut depth = 1;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

fn var_name(s: &str) -> bool {
    let mut c = s.chars();
    c.next().is_some_and(|c| c.is_ascii_alphabetic())
        && c.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses a ring specification such as `Z/2[X]/(X^2-1)` or `Q(t^(1/6))`.
pub fn parse_ring(spec: &str) -> Result<Ring> {
    let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = |msg: &str| Error::Parse { pos: 0, msg: format!("{msg} in ring '{spec}'") };
    // the atom
    let (mut ring, mut rest) = if let Some(r) = s.strip_prefix("Z[i]") {
        (Ring::gaussian(), r)
    } else if let Some(r) = s.strip_prefix("Cyclo(") {
        let close = matching(r).ok_or_else(|| bad("missing ')'"))?;
        let p: u64 = r[..close].parse().map_err(|_| bad("bad Cyclo index"))?;
        (Ring::cyclotomic(p)?, &r[close + 1..])
    } else if let Some(r) = s.strip_prefix("Q(") {
        let close = matching(r).ok_or_else(|| bad("missing ')'"))?;
        let inner = &r[..close];
        let ring = match inner.split_once("^(1/") {
            Some((v, d)) if var_name(v) => {
                let d = d.strip_suffix(')').ok_or_else(|| bad("missing ')'"))?;
                Ring::puiseux_fractions(v, d.parse().map_err(|_| bad("bad exponent denominator"))?)?
            }
            None if var_name(inner) => Ring::rational_functions(inner),
            _ => return Err(bad("bad rational function field")),
        };
        (ring, &r[close + 1..])
    } else if let Some(r) = s.strip_prefix("Z/") {
        let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        let n: u64 = r[..end].parse().map_err(|_| bad("bad modulus"))?;
        (Ring::modular(n)?, &r[end..])
    } else if let Some(r) = s.strip_prefix('Z') {
        (Ring::integers(), r)
    } else if let Some(r) = s.strip_prefix('Q') {
        (Ring::rationals(), r)
    } else {
        return Err(bad("unknown ring"));
    };
    // suffixes
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix('[') {
            let close = r.find(']').ok_or_else(|| bad("missing ']'"))?;
            let inner = &r[..close];
            ring = if let Some((v, inv)) = inner.split_once(",1/") {
                if v != inv || !var_name(v) {
                    return Err(bad("Laurent ring needs [x,1/x]"));
                }
                Ring::laurent(&ring, v)?
            } else if let Some((v, d)) = inner.split_once("^(1/") {
                let d = d.strip_suffix(')').ok_or_else(|| bad("missing ')'"))?;
                if !var_name(v) {
                    return Err(bad("bad variable"));
                }
                Ring::puiseux(&ring, v, d.parse().map_err(|_| bad("bad exponent denominator"))?)?
            } else if var_name(inner) {
                Ring::polynomial(&ring, inner)
            } else {
                return Err(bad("bad variable"));
            };
            rest = &r[close + 1..];
        } else if let Some(r) = rest.strip_prefix("/(") {
            let close = matching(r).ok_or_else(|| bad("missing ')'"))?;
            if close + 1 != r.len() {
                return Err(bad("trailing input after modulus"));
            }
            if !ring.is_polynomial_ring() {
                return Err(bad("modulus needs a polynomial ring"));
            }
            let (base, var) = (ring.base().unwrap().clone(), ring.var().unwrap().to_string());
            let m = parse_elem(&ring, &r[..close])?;
            ring = Ring::quotient(&base, &var, &m.coeffs().unwrap())?;
            rest = "";
        } else {
            return Err(bad("unexpected suffix"));
        }
    }
    Ok(ring)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(spec: &str) -> String {
        parse_ring(spec).unwrap().to_string()
    }

    #[test]
    fn ring_specs() {
        assert_eq!(roundtrip("Z"), "Z");
        assert_eq!(roundtrip("Z/8"), "Z/8");
        assert_eq!(roundtrip("Z[i]"), "Z[i]");
        assert_eq!(roundtrip("Z[t]"), "Z[t]");
        assert_eq!(roundtrip("Z[t,1/t]"), "Z[t,1/t]");
        assert_eq!(roundtrip("Q(t)"), "Q(t)");
        assert_eq!(roundtrip("Cyclo(5)"), "Cyclo(5)");
        assert_eq!(roundtrip("Z/2[X]/(X^2-1)"), "Z/2[X]/(1+X^2)");
        assert_eq!(roundtrip("Q[X]/(X^2 - 1)"), "Q[X]/(-1+X^2)");
        assert_eq!(roundtrip("Q(t^(1/6))"), "Q(t^(1/6))");
        assert_eq!(roundtrip("Z[t]/(1+t+t^2)"), "Cyclo(3)");
        assert!(parse_ring("Z/1").is_err());
        assert!(parse_ring("R").is_err());
        assert!(parse_ring("Z/4[X]/(2X+1)").is_err());
    }

    #[test]
    fn elements() {
        let z8 = parse_ring("Z/8").unwrap();
        assert_eq!(parse_elem(&z8, "11").unwrap(), z8.from_i64(3));
        let zt = parse_ring("Z[t]").unwrap();
        let e = parse_elem(&zt, "1+t^2").unwrap();
        assert_eq!(e.coeffs().unwrap(), vec![zt.base().unwrap().from_i64(1), zt.base().unwrap().from_i64(0), zt.base().unwrap().from_i64(1)]);
        assert_eq!(parse_elem(&zt, "-t^2").unwrap(), -&zt.generator().unwrap().pow(2));
        assert_eq!(parse_elem(&zt, "(1+t)(1-t)").unwrap(), parse_elem(&zt, "1 - t^2").unwrap());
        let zi = Ring::gaussian();
        assert_eq!(parse_elem(&zi, "1+i").unwrap(), zi.gaussian_elem(1, 1).unwrap());
        assert!(parse_elem(&zt, "1/t").is_err());
    }

    #[test]
    fn parse_error_has_position() {
        let zt = parse_ring("Z[t]").unwrap();
        match parse_elem(&zt, "1 + $") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        match parse_elem(&zt, "1 + x") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
    }
}
