//! Bivariate polynomials over Z and over F_p.
//!
//! Houses the input equation P(x, y) and its mod-p reduction E(x, y), the
//! expression parser for the grammar
//!
//! ```text
//! expr   := ('-')? term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' natural)?
//! atom   := integer | 'x' | 'y' | '(' expr ')'
//! ```
//!
//! and canonical printing (terms by y-exponent then x-exponent, descending;
//! explicit '*'; '^' only for exponents >= 2).

use crate::error::{Error, Result};
use crate::fp::{Fp, Prime};
use crate::poly::{Poly, Series};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Bivariate polynomial over Z: a map from (x-exponent, y-exponent) to a
/// nonzero arbitrary-precision coefficient.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BiPolyZ {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl BiPolyZ {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn insert(&mut self, x_exp: u32, y_exp: u32, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry((x_exp, y_exp)).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&(x_exp, y_exp));
        }
    }

    pub fn add(&self, rhs: &BiPolyZ) -> BiPolyZ {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.insert(i, j, c.clone());
        }
        out
    }

    pub fn neg(&self) -> BiPolyZ {
        BiPolyZ { terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect() }
    }

    pub fn sub(&self, rhs: &BiPolyZ) -> BiPolyZ {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &BiPolyZ, err_pos: usize) -> Result<BiPolyZ> {
        let mut out = BiPolyZ::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                let i = i1.checked_add(i2).ok_or(Error::ExponentOverflow { pos: err_pos })?;
                let j = j1.checked_add(j2).ok_or(Error::ExponentOverflow { pos: err_pos })?;
                out.insert(i, j, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut k: u32, err_pos: usize) -> Result<BiPolyZ> {
        let mut base = self.clone();
        let mut acc = BiPolyZ { terms: [((0, 0), BigInt::from(1))].into_iter().collect() };
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, err_pos)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, err_pos)?;
            }
        }
        Ok(acc)
    }

    /// Degrees in x and y.
    pub fn degrees(&self) -> (u32, u32) {
        assert!(!self.is_zero(), "degrees of the zero polynomial");
        let dx = self.terms.keys().map(|&(i, _)| i).max().unwrap();
        let dy = self.terms.keys().map(|&(_, j)| j).max().unwrap();
        (dx, dy)
    }

    /// Divide out the content (gcd of all coefficients) and normalize the
    /// sign so the lexicographically greatest monomial by (y, x) is positive.
    pub fn content_normalize(&self) -> Result<BiPolyZ> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
        }
        let lead = self
            .terms
            .iter()
            .max_by_key(|(&(i, j), _)| (j, i))
            .map(|(_, c)| c.clone())
            .unwrap();
        if lead.is_negative() {
            g = -g;
        }
        Ok(BiPolyZ { terms: self.terms.iter().map(|(&k, c)| (k, c / &g)).collect() })
    }

    /// Reduction mod p. For content-normalized input the result is nonzero:
    /// jointly coprime coefficients cannot all vanish mod p.
    pub fn reduce_mod_p(&self, p: Prime) -> BiPolyFp {
        let q = BigInt::from(p.get());
        let mut terms = BTreeMap::new();
        for (&k, c) in &self.terms {
            let r = c.mod_floor(&q);
            if !r.is_zero() {
                let (_, digits) = r.to_u32_digits();
                terms.insert(k, digits[0]);
            }
        }
        BiPolyFp { p, terms }
    }
}

impl fmt::Display for BiPolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<(u32, u32)> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(i, j)| (std::cmp::Reverse(j), std::cmp::Reverse(i)));
        for (idx, &(i, j)) in keys.iter().enumerate() {
            let c = &self.terms[&(i, j)];
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write_term(f, &mag.to_string(), i, j)?;
        }
        Ok(())
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, mag: &str, i: u32, j: u32) -> fmt::Result {
    let mut parts: Vec<String> = Vec::new();
    if mag != "1" || (i == 0 && j == 0) {
        parts.push(mag.to_string());
    }
    match i {
        0 => {}
        1 => parts.push("x".into()),
        _ => parts.push(format!("x^{i}")),
    }
    match j {
        0 => {}
        1 => parts.push("y".into()),
        _ => parts.push(format!("y^{j}")),
    }
    write!(f, "{}", parts.join("*"))
}

/// Bivariate polynomial over F_p; only nonzero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiPolyFp {
    p: Prime,
    terms: BTreeMap<(u32, u32), u32>,
}

impl BiPolyFp {
    pub fn new(p: Prime, terms: impl IntoIterator<Item = ((u32, u32), u64)>) -> Self {
        let mut map = BTreeMap::new();
        for ((i, j), c) in terms {
            let c = (c % p.get() as u64) as u32;
            if c != 0 {
                map.insert((i, j), c);
            }
        }
        BiPolyFp { p, terms: map }
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degrees(&self) -> (u32, u32) {
        assert!(!self.is_zero(), "degrees of the zero polynomial");
        let dx = self.terms.keys().map(|&(i, _)| i).max().unwrap();
        let dy = self.terms.keys().map(|&(_, j)| j).max().unwrap();
        (dx, dy)
    }

    /// The coefficients a_0..a_d of E viewed in F_p[x][y]; a_d is nonzero.
    pub fn y_coefficients(&self) -> Vec<Poly> {
        assert!(!self.is_zero(), "y_coefficients of the zero polynomial");
        let (_, dy) = self.degrees();
        let mut out = Vec::with_capacity(dy as usize + 1);
        for j in 0..=dy {
            let coeffs: Vec<(usize, u64)> = self
                .terms
                .iter()
                .filter(|(&(_, jj), _)| jj == j)
                .map(|(&(i, _), &c)| (i as usize, c as u64))
                .collect();
            let deg = coeffs.iter().map(|&(i, _)| i).max();
            let mut v = vec![0u64; deg.map_or(0, |d| d + 1)];
            for (i, c) in coeffs {
                v[i] = c;
            }
            out.push(Poly::new(self.p, v));
        }
        debug_assert!(!out.last().unwrap().is_zero());
        out
    }

    /// E(x, f(x)) truncated to the precision of f, by Horner in y.
    pub fn eval_at_series(&self, f: &Series) -> Series {
        assert_eq!(self.p, f.modulus(), "modulus mismatch");
        let n = f.precision();
        let coeffs = if self.is_zero() { vec![Poly::zero(self.p)] } else { self.y_coefficients() };
        let mut acc = coeffs.last().unwrap().to_series(n);
        for a in coeffs.iter().rev().skip(1) {
            acc = acc.mul(f).add(&a.to_series(n));
        }
        acc
    }

    /// E(x, v(x)) for a polynomial argument, exactly.
    pub fn eval_at_poly(&self, v: &Poly) -> Poly {
        assert_eq!(self.p, v.modulus(), "modulus mismatch");
        let coeffs = if self.is_zero() { vec![Poly::zero(self.p)] } else { self.y_coefficients() };
        let mut acc = coeffs.last().unwrap().clone();
        for a in coeffs.iter().rev().skip(1) {
            acc = acc.mul(v).add(a);
        }
        acc
    }

    pub fn coeff(&self, x_exp: u32, y_exp: u32) -> Fp {
        Fp::new(self.p, self.terms.get(&(x_exp, y_exp)).copied().unwrap_or(0) as u64)
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

/// Parse an expression in x and y with integer coefficients.
pub fn parse_bipoly(text: &str) -> Result<BiPolyZ> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0 };
    p.skip_ws();
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<BiPolyZ> {
        self.skip_ws();
        let negate = self.eat(b'-');
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BiPolyZ> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                let pos = self.pos;
                let f = self.factor()?;
                acc = acc.mul(&f, pos)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<BiPolyZ> {
        let base = self.atom()?;
        self.skip_ws();
        if self.eat(b'^') {
            self.skip_ws();
            let pos = self.pos;
            let e = self.natural()?;
            base.pow(e, pos)
        } else {
            Ok(base)
        }
    }

    fn natural(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a natural number"));
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        digits.parse::<u32>().map_err(|_| Error::ExponentOverflow { pos: start })
    }

    fn atom(&mut self) -> Result<BiPolyZ> {
        self.skip_ws();
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(BiPolyZ { terms: [((1, 0), BigInt::from(1))].into_iter().collect() })
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(BiPolyZ { terms: [((0, 1), BigInt::from(1))].into_iter().collect() })
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(b) if b.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                let value: BigInt = digits.parse().unwrap();
                let mut out = BiPolyZ::zero();
                out.insert(0, 0, value);
                Ok(out)
            }
            _ => Err(self.error("expected an integer, 'x', 'y', or '('")),
        }
    }
}
