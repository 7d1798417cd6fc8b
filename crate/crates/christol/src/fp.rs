//! Arithmetic in the prime field F_p.

use crate::error::{Error, Result};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Largest supported modulus. Keeping p below 2^16 lets every product of two
/// residues fit a u64 with room to accumulate long dot products unreduced.
pub const MAX_MODULUS: u32 = 1 << 16;

/// A prime modulus, validated at construction by trial division.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 || p > MAX_MODULUS || !is_prime(p) {
            return Err(Error::InvalidModulus(p as u64));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// p^k, or an error if it does not fit in 64 bits.
    pub fn pow(self, k: u32) -> Result<u64> {
        (self.0 as u64).checked_pow(k).ok_or(Error::BoundOverflow)
    }

    #[inline]
    pub fn element(self, value: u64) -> Fp {
        Fp::new(self, value)
    }

    #[inline]
    pub fn zero(self) -> Fp {
        Fp { value: 0, modulus: self }
    }

    #[inline]
    pub fn one(self) -> Fp {
        Fp { value: 1 % self.0, modulus: self }
    }
}

impl fmt::Debug for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of F_p. Elements carry their modulus; operations on mixed
/// moduli are a programming error and panic.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    modulus: Prime,
}

impl Fp {
    #[inline]
    pub fn new(modulus: Prime, value: u64) -> Self {
        Fp { value: (value % modulus.0 as u64) as u32, modulus }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Prime {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(self) -> Result<Fp> {
        if self.value == 0 {
            return Err(Error::DivisionByZeroPoly);
        }
        let p = self.modulus.0 as i64;
        let (mut r0, mut r1) = (p, self.value as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1, "modulus is prime, so every nonzero element is a unit");
        Ok(Fp { value: t0.rem_euclid(p) as u32, modulus: self.modulus })
    }

    /// a^k by square-and-multiply, with 0^0 = 1.
    pub fn pow(self, mut k: u64) -> Fp {
        let p = self.modulus.0 as u64;
        let mut base = self.value as u64;
        let mut acc = 1u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            k >>= 1;
        }
        Fp { value: acc as u32, modulus: self.modulus }
    }
}

#[inline]
#[track_caller]
fn same_modulus(a: Fp, b: Fp) -> Prime {
    assert_eq!(a.modulus, b.modulus, "modulus mismatch: {} vs {}", a.modulus, b.modulus);
    a.modulus
}

impl Add for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, rhs: Fp) -> Fp {
        let p = same_modulus(self, rhs);
        let mut v = self.value + rhs.value;
        if v >= p.0 {
            v -= p.0;
        }
        Fp { value: v, modulus: p }
    }
}

impl Sub for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, rhs: Fp) -> Fp {
        let p = same_modulus(self, rhs);
        let v = if self.value >= rhs.value { self.value - rhs.value } else { self.value + p.0 - rhs.value };
        Fp { value: v, modulus: p }
    }
}

impl Mul for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, rhs: Fp) -> Fp {
        let p = same_modulus(self, rhs);
        Fp { value: (self.value as u64 * rhs.value as u64 % p.0 as u64) as u32, modulus: p }
    }
}

impl Neg for Fp {
    type Output = Fp;
    #[inline]
    fn neg(self) -> Fp {
        let v = if self.value == 0 { 0 } else { self.modulus.0 - self.value };
        Fp { value: v, modulus: self.modulus }
    }
}

impl Div for Fp {
    type Output = Fp;
    #[inline]
    fn div(self, rhs: Fp) -> Fp {
        same_modulus(self, rhs);
        self * rhs.inv().expect("division by zero in F_p")
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
