//! Dense univariate polynomials, Laurent polynomials, and precision-tracked
//! truncated power series over F_p.
//!
//! Besides ring arithmetic this module carries the two operators the whole
//! pipeline is built on:
//!
//! - the section (Cartier) operators `S_r(sum z_n x^n) = sum z_{pn+r} x^n`,
//! - the substitution `z(x) -> z(x^{p^i})`, which in characteristic p equals
//!   `z^{p^i}` and is performed by exponent spreading, never by powering.

use crate::error::{Error, Result};
use crate::fp::{Fp, Prime};
use std::fmt;

/// Cap on coefficient counts a single value may grow to. Exponent spreading
/// multiplies lengths by p^i, so runaway growth is turned into a clean error.
pub const PRECISION_CAP: usize = 1 << 20;

#[inline]
#[track_caller]
fn join(a: Prime, b: Prime) -> Prime {
    assert_eq!(a, b, "modulus mismatch: {a} vs {b}");
    a
}

fn trim(coeffs: &mut Vec<u32>) {
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
}

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

/// Dense polynomial over F_p. Normalized: the highest stored coefficient is
/// nonzero, and the zero polynomial stores nothing (degree "minus infinity",
/// represented as `None`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    p: Prime,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn new(p: Prime, coeffs: impl IntoIterator<Item = u64>) -> Self {
        let mut c: Vec<u32> = coeffs.into_iter().map(|v| (v % p.get() as u64) as u32).collect();
        trim(&mut c);
        Poly { p, coeffs: c }
    }

    pub fn zero(p: Prime) -> Self {
        Poly { p, coeffs: Vec::new() }
    }

    pub fn one(p: Prime) -> Self {
        Poly::new(p, [1])
    }

    pub fn constant(a: Fp) -> Self {
        Poly::new(a.modulus(), [a.value() as u64])
    }

    pub fn monomial(p: Prime, coeff: u64, exp: usize) -> Self {
        let mut c = vec![0u64; exp];
        c.push(coeff);
        Poly::new(p, c)
    }

    #[inline]
    pub fn modulus(&self) -> Prime {
        self.p
    }

    /// Degree, with `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    #[inline]
    pub fn coeff(&self, i: usize) -> Fp {
        Fp::new(self.p, self.coeffs.get(i).copied().unwrap_or(0) as u64)
    }

    #[inline]
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> Fp {
        self.coeff(0)
    }

    pub fn leading_coeff(&self) -> Fp {
        Fp::new(self.p, self.coeffs.last().copied().unwrap_or(0) as u64)
    }

    /// Smallest exponent with a nonzero coefficient (`None` for zero).
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let p = join(self.p, rhs.p);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let q = p.get();
        let mut out = vec![0u32; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut v = self.coeffs.get(i).copied().unwrap_or(0) + rhs.coeffs.get(i).copied().unwrap_or(0);
            if v >= q {
                v -= q;
            }
            *slot = v;
        }
        trim(&mut out);
        Poly { p, coeffs: out }
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Poly {
        let q = self.p.get();
        Poly {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&c| if c == 0 { 0 } else { q - c }).collect(),
        }
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        let p = join(self.p, rhs.p);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(p);
        }
        let q = p.get() as u64;
        let mut acc = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let a = a as u64;
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                acc[i + j] += a * b as u64;
            }
            // p < 2^16 keeps every partial sum far from overflow, but reduce
            // periodically anyway for very long polynomials.
            if i % 4096 == 4095 {
                for v in acc.iter_mut() {
                    *v %= q;
                }
            }
        }
        let mut out: Vec<u32> = acc.into_iter().map(|v| (v % q) as u32).collect();
        trim(&mut out);
        Poly { p, coeffs: out }
    }

    pub fn mul_scalar(&self, s: Fp) -> Poly {
        join(self.p, s.modulus());
        if s.is_zero() {
            return Poly::zero(self.p);
        }
        let q = self.p.get() as u64;
        let sv = s.value() as u64;
        Poly {
            p: self.p,
            coeffs: self.coeffs.iter().map(|&c| (c as u64 * sv % q) as u32).collect(),
        }
    }

    /// Multiply by x^k.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0u32; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { p: self.p, coeffs }
    }

    /// Quotient and remainder with `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let p = join(self.p, divisor.p);
        if divisor.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() < divisor.coeffs.len() {
            return Ok((Poly::zero(p), self.clone()));
        }
        let q = p.get() as u64;
        let lead_inv = divisor.leading_coeff().inv().expect("nonzero leading coefficient").value() as u64;
        let mut rem: Vec<u64> = self.coeffs.iter().map(|&c| c as u64).collect();
        let mut quot = vec![0u32; self.coeffs.len() - dd];
        for top in (dd..rem.len()).rev() {
            let factor = rem[top] % q * lead_inv % q;
            if factor == 0 {
                continue;
            }
            quot[top - dd] = factor as u32;
            for (k, &dc) in divisor.coeffs.iter().enumerate() {
                let idx = top - dd + k;
                let sub = factor * dc as u64 % q;
                rem[idx] = (rem[idx] % q + q - sub) % q;
            }
        }
        let mut rem: Vec<u32> = rem.into_iter().map(|v| (v % q) as u32).collect();
        rem.truncate(dd);
        trim(&mut rem);
        let mut quot_v = quot;
        trim(&mut quot_v);
        Ok((Poly { p, coeffs: quot_v }, Poly { p, coeffs: rem }))
    }

    /// Division known to be exact; panics if a remainder appears.
    pub fn exact_div(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.divrem(divisor).expect("exact division by zero");
        assert!(r.is_zero(), "division expected to be exact");
        q
    }

    pub fn pow(&self, mut k: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.p);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, rhs: &Poly) -> Poly {
        let p = join(self.p, rhs.p);
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            return Poly::zero(p);
        }
        let lc_inv = a.leading_coeff().inv().expect("nonzero leading coefficient");
        a.mul_scalar(lc_inv)
    }

    /// Section operator S_r: keeps exponents congruent to r mod p and divides
    /// them by p. The degree drops to at most deg/p.
    pub fn section(&self, r: u32) -> Poly {
        let q = self.p.get();
        assert!(r < q, "section digit {r} out of range for p = {q}");
        let mut out = Vec::with_capacity(self.coeffs.len() / q as usize + 1);
        let mut i = r as usize;
        while i < self.coeffs.len() {
            out.push(self.coeffs[i]);
            i += q as usize;
        }
        trim(&mut out);
        Poly { p: self.p, coeffs: out }
    }

    /// a(x^{p^i}) by exponent spreading.
    pub fn frobenius(&self, i: u32) -> Result<Poly> {
        match self.degree() {
            None => Ok(self.clone()),
            Some(d) => {
                let step = self.p.pow(i).map_err(|_| Error::PrecisionCapExceeded {
                    requested: usize::MAX,
                    cap: PRECISION_CAP,
                })? as u128;
                let len = d as u128 * step + 1;
                if len > PRECISION_CAP as u128 {
                    return Err(Error::PrecisionCapExceeded { requested: len.min(usize::MAX as u128) as usize, cap: PRECISION_CAP });
                }
                let mut out = vec![0u32; len as usize];
                for (e, &c) in self.coeffs.iter().enumerate() {
                    out[e * step as usize] = c;
                }
                Ok(Poly { p: self.p, coeffs: out })
            }
        }
    }

    pub fn to_series(&self, precision: usize) -> Series {
        let mut coeffs = vec![0u32; precision];
        for (i, &c) in self.coeffs.iter().enumerate().take(precision) {
            coeffs[i] = c;
        }
        Series { p: self.p, coeffs }
    }
}

impl fmt::Display for Poly {
    /// Terms in descending exponent; '*' explicit, '^' only for exponents >= 2.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (c, e) {
                (_, 0) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "x^{e}")?,
                (_, 1) => write!(f, "{c}*x")?,
                (_, _) => write!(f, "{c}*x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.p)
    }
}

/// [x^n]u by iterated sections over the p-adic digits of n, least significant
/// first; by construction it equals the direct coefficient read.
pub fn digit_coeff_extract(u: &Poly, n: u64) -> Fp {
    let p = u.modulus().get() as u64;
    let mut acc = u.clone();
    let mut n = n;
    loop {
        acc = acc.section((n % p) as u32);
        n /= p;
        if n == 0 {
            break;
        }
    }
    acc.constant_term()
}

// ---------------------------------------------------------------------------
// Truncated power series
// ---------------------------------------------------------------------------

/// A power series known modulo x^N. The stored vector always has exactly N
/// entries; arithmetic results carry the precision actually determined.
#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    p: Prime,
    coeffs: Vec<u32>,
}

impl Series {
    pub fn new(p: Prime, coeffs: impl IntoIterator<Item = u64>) -> Self {
        let coeffs = coeffs.into_iter().map(|v| (v % p.get() as u64) as u32).collect();
        Series { p, coeffs }
    }

    pub fn zero(p: Prime, precision: usize) -> Self {
        Series { p, coeffs: vec![0; precision] }
    }

    pub fn from_prefix(p: Prime, prefix: &[u32]) -> Self {
        Series::new(p, prefix.iter().map(|&v| v as u64))
    }

    #[inline]
    pub fn modulus(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of x^i; reading beyond the precision is a bug.
    #[inline]
    pub fn coeff(&self, i: usize) -> Fp {
        assert!(i < self.coeffs.len(), "coefficient {i} beyond precision {}", self.coeffs.len());
        Fp::new(self.p, self.coeffs[i] as u64)
    }

    #[inline]
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn truncate(&self, precision: usize) -> Series {
        let mut s = self.clone();
        s.coeffs.truncate(precision);
        s
    }

    pub fn add(&self, rhs: &Series) -> Series {
        let p = join(self.p, rhs.p);
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let q = p.get();
        let mut out = vec![0u32; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut v = self.coeffs[i] + rhs.coeffs[i];
            if v >= q {
                v -= q;
            }
            *slot = v;
        }
        Series { p, coeffs: out }
    }

    pub fn sub(&self, rhs: &Series) -> Series {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Series {
        let q = self.p.get();
        Series { p: self.p, coeffs: self.coeffs.iter().map(|&c| if c == 0 { 0 } else { q - c }).collect() }
    }

    pub fn mul(&self, rhs: &Series) -> Series {
        let p = join(self.p, rhs.p);
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let q = p.get() as u64;
        let mut acc = vec![0u64; n];
        for (i, &a) in self.coeffs.iter().enumerate().take(n) {
            if a == 0 {
                continue;
            }
            let a = a as u64;
            for (j, &b) in rhs.coeffs.iter().enumerate().take(n - i) {
                acc[i + j] += a * b as u64;
            }
            if i % 4096 == 4095 {
                for v in acc.iter_mut() {
                    *v %= q;
                }
            }
        }
        Series { p, coeffs: acc.into_iter().map(|v| (v % q) as u32).collect() }
    }

    pub fn mul_poly(&self, rhs: &Poly) -> Series {
        self.mul(&rhs.to_series(self.precision()))
    }

    pub fn mul_scalar(&self, s: Fp) -> Series {
        join(self.p, s.modulus());
        let q = self.p.get() as u64;
        let sv = s.value() as u64;
        Series { p: self.p, coeffs: self.coeffs.iter().map(|&c| (c as u64 * sv % q) as u32).collect() }
    }

    /// Multiplicative inverse modulo x^N; requires a unit constant term.
    pub fn inv(&self) -> Result<Series> {
        if self.coeffs.is_empty() {
            return Ok(self.clone());
        }
        let c0 = Fp::new(self.p, self.coeffs[0] as u64);
        if c0.is_zero() {
            return Err(Error::NonUnitConstantTerm);
        }
        let q = self.p.get() as u64;
        let c0_inv = c0.inv().expect("nonzero").value() as u64;
        let n = self.coeffs.len();
        let mut out = vec![0u32; n];
        out[0] = c0_inv as u32;
        for k in 1..n {
            let mut s = 0u64;
            for i in 1..=k {
                s += self.coeffs[i] as u64 * out[k - i] as u64 % q;
            }
            out[k] = ((q - s % q) % q * c0_inv % q) as u32;
        }
        Ok(Series { p: self.p, coeffs: out })
    }

    /// Section operator on a truncation: exactly ceil((N - r)/p) coefficients
    /// of the result are determined.
    pub fn section(&self, r: u32) -> Series {
        let q = self.p.get();
        assert!(r < q, "section digit {r} out of range for p = {q}");
        let n = self.coeffs.len();
        let new_n = n.saturating_sub(r as usize).div_ceil(q as usize);
        let mut out = Vec::with_capacity(new_n);
        for k in 0..new_n {
            out.push(self.coeffs[k * q as usize + r as usize]);
        }
        Series { p: self.p, coeffs: out }
    }

    /// f(x^{p^i}); the precision multiplies by p^i, subject to the cap.
    pub fn frobenius(&self, i: u32) -> Result<Series> {
        let step = self.p.pow(i).map_err(|_| Error::PrecisionCapExceeded { requested: usize::MAX, cap: PRECISION_CAP })? as u128;
        let len = self.coeffs.len() as u128 * step;
        if len > PRECISION_CAP as u128 {
            return Err(Error::PrecisionCapExceeded { requested: len.min(usize::MAX as u128) as usize, cap: PRECISION_CAP });
        }
        // Coefficient m of f(x^{p^i}) is f_{m/p^i} when p^i | m, else 0; all
        // indices below len are determined by the first N coefficients of f.
        let mut out = vec![0u32; len as usize];
        for (e, &c) in self.coeffs.iter().enumerate() {
            out[e * step as usize] = c;
        }
        Ok(Series { p: self.p, coeffs: out })
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + O(x^{}) (mod {})", self.coeffs, self.coeffs.len(), self.p)
    }
}

// ---------------------------------------------------------------------------
// Laurent polynomials
// ---------------------------------------------------------------------------

/// Finite Laurent polynomial: coefficients of x^lo, x^{lo+1}, ... with the
/// first and last stored coefficients nonzero (zero stores nothing).
#[derive(Clone, PartialEq, Eq)]
pub struct Laurent {
    p: Prime,
    lo: i64,
    coeffs: Vec<u32>,
}

impl Laurent {
    pub fn new(p: Prime, lo: i64, coeffs: impl IntoIterator<Item = u64>) -> Self {
        let coeffs: Vec<u32> = coeffs.into_iter().map(|v| (v % p.get() as u64) as u32).collect();
        Self::normalized(p, lo, coeffs)
    }

    fn normalized(p: Prime, mut lo: i64, mut coeffs: Vec<u32>) -> Self {
        let leading = coeffs.iter().take_while(|&&c| c == 0).count();
        coeffs.drain(..leading);
        lo += leading as i64;
        trim(&mut coeffs);
        if coeffs.is_empty() {
            lo = 0;
        }
        Laurent { p, lo, coeffs }
    }

    pub fn zero(p: Prime) -> Self {
        Laurent { p, lo: 0, coeffs: Vec::new() }
    }

    pub fn from_poly(a: &Poly) -> Self {
        Self::normalized(a.modulus(), 0, a.coeffs().to_vec())
    }

    #[inline]
    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent present (`None` for zero).
    pub fn lo(&self) -> Option<i64> {
        if self.is_zero() { None } else { Some(self.lo) }
    }

    /// Highest exponent present (`None` for zero).
    pub fn hi(&self) -> Option<i64> {
        if self.is_zero() { None } else { Some(self.lo + self.coeffs.len() as i64 - 1) }
    }

    pub fn coeff(&self, e: i64) -> Fp {
        let v = if e < self.lo {
            0
        } else {
            self.coeffs.get((e - self.lo) as usize).copied().unwrap_or(0)
        };
        Fp::new(self.p, v as u64)
    }

    pub fn add(&self, rhs: &Laurent) -> Laurent {
        let p = join(self.p, rhs.p);
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(rhs.lo);
        let hi = (self.lo + self.coeffs.len() as i64).max(rhs.lo + rhs.coeffs.len() as i64);
        let q = p.get();
        let mut out = vec![0u32; (hi - lo) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[(self.lo - lo) as usize + i] = c;
        }
        for (i, &c) in rhs.coeffs.iter().enumerate() {
            let slot = &mut out[(rhs.lo - lo) as usize + i];
            let mut v = *slot + c;
            if v >= q {
                v -= q;
            }
            *slot = v;
        }
        Laurent::normalized(p, lo, out)
    }

    pub fn neg(&self) -> Laurent {
        let q = self.p.get();
        Laurent {
            p: self.p,
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|&c| if c == 0 { 0 } else { q - c }).collect(),
        }
    }

    pub fn mul(&self, rhs: &Laurent) -> Laurent {
        let p = join(self.p, rhs.p);
        if self.is_zero() || rhs.is_zero() {
            return Laurent::zero(p);
        }
        let q = p.get() as u64;
        let mut acc = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                acc[i + j] += a as u64 * b as u64;
            }
        }
        let coeffs = acc.into_iter().map(|v| (v % q) as u32).collect();
        Laurent::normalized(p, self.lo + rhs.lo, coeffs)
    }

    pub fn mul_poly(&self, rhs: &Poly) -> Laurent {
        self.mul(&Laurent::from_poly(rhs))
    }

    /// f(x^{p^i}) by exponent spreading; exponent magnitudes are capped.
    pub fn frobenius(&self, i: u32) -> Result<Laurent> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let step = self.p.pow(i).map_err(|_| Error::PrecisionCapExceeded { requested: usize::MAX, cap: PRECISION_CAP })? as i128;
        let lo = self.lo as i128 * step;
        let hi = (self.lo + self.coeffs.len() as i64 - 1) as i128 * step;
        let len = hi - lo + 1;
        if len > PRECISION_CAP as i128 || lo.unsigned_abs() > PRECISION_CAP as u128 {
            return Err(Error::PrecisionCapExceeded { requested: len.min(usize::MAX as i128) as usize, cap: PRECISION_CAP });
        }
        let mut out = vec![0u32; len as usize];
        for (e, &c) in self.coeffs.iter().enumerate() {
            out[e * step as usize] = c;
        }
        Ok(Laurent::normalized(self.p, lo as i64, out))
    }

    /// Split into the strictly negative part and the polynomial part.
    pub fn split(&self) -> (Laurent, Poly) {
        let mut neg = Vec::new();
        let mut pos = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            let e = self.lo + i as i64;
            if e < 0 {
                neg.push((e, c));
            } else {
                while pos.len() < e as usize {
                    pos.push(0);
                }
                pos.push(c);
            }
        }
        let negative = if neg.is_empty() {
            Laurent::zero(self.p)
        } else {
            let lo = neg[0].0;
            let mut coeffs = vec![0u32; (-lo) as usize];
            for (e, c) in neg {
                coeffs[(e - lo) as usize] = c;
            }
            Laurent::normalized(self.p, lo, coeffs)
        };
        let mut pos = pos;
        trim(&mut pos);
        (negative, Poly { p: self.p, coeffs: pos })
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 (mod {})", self.p);
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| format!("{c}*x^{}", self.lo + i as i64))
            .collect();
        write!(f, "{} (mod {})", terms.join(" + "), self.p)
    }
}
