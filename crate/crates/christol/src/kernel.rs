//! Coefficient queries against a compiled series.
//!
//! A single query walks the base-p digits of each window index m, least
//! significant first, through matrix-times-column products starting from v:
//! O((deg a) e^2 log_p n) field operations however large n is. Range scans
//! share the walk: indices with a common low-digit prefix share the product
//! A_{m_j}...A_{m_0} v, and identical columns are deduplicated, so a scan
//! touches each distinct column once per digit edge.

use crate::compiler::CompiledSeries;
use crate::error::{Error, Result};
use crate::fp::{Fp, Prime};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use std::collections::HashMap;
use std::fmt;

/// Hard cap on the number of values a single range scan may return.
pub const RANGE_CAP: u64 = 1 << 26;

/// A query index: an arbitrary-precision natural number.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct BigIndex(BigUint);

impl BigIndex {
    /// Strictly decimal digits; the stored value is canonical regardless of
    /// leading zeros in the input.
    pub fn from_decimal(text: &str) -> Result<Self> {
        if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse { pos: 0, msg: format!("not a decimal natural number: {text:?}") });
        }
        Ok(BigIndex(text.parse::<BigUint>().expect("digits parse")))
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn checked_sub(&self, k: u64) -> Option<BigIndex> {
        let k = BigUint::from(k);
        (self.0 >= k).then(|| BigIndex(&self.0 - k))
    }
}

impl From<u64> for BigIndex {
    fn from(n: u64) -> Self {
        BigIndex(BigUint::from(n))
    }
}

impl From<BigUint> for BigIndex {
    fn from(n: BigUint) -> Self {
        BigIndex(n)
    }
}

impl fmt::Display for BigIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Base-p digits, least significant first, by repeated division with
/// remainder; n = 0 is the single digit [0].
pub fn digits_base_p(n: &BigIndex, p: Prime) -> Vec<u32> {
    let q = BigUint::from(p.get());
    let mut digits = Vec::new();
    let mut rest = n.0.clone();
    loop {
        let (quot, rem) = rest.div_rem(&q);
        digits.push(rem.to_u32_digits().first().copied().unwrap_or(0));
        rest = quot;
        if rest.is_zero() {
            break;
        }
    }
    digits
}

fn h_query(cs: &CompiledSeries, m: &BigIndex, ops: &mut u64) -> u32 {
    let p = cs.modulus().get();
    let e = cs.dim as u64;
    let mut w = cs.v.clone();
    for d in digits_base_p(m, cs.modulus()) {
        w = cs.mats[d as usize].matvec(&w, p);
        *ops += e * (2 * e - 1);
    }
    *ops += 2 * e - 1;
    cs.u_dot(&w)
}

/// h_m = u A_{m_l}...A_{m_1}A_{m_0} v, matrices applied to the column v
/// starting from the least significant digit.
pub fn h_coeff(cs: &CompiledSeries, m: &BigIndex) -> Fp {
    let mut ops = 0;
    Fp::new(cs.modulus(), h_query(cs, m, &mut ops) as u64)
}

fn f_query(cs: &CompiledSeries, n: &BigIndex, ops: &mut u64) -> u32 {
    let p = cs.modulus().get() as u64;
    let deg_c = cs.c.degree();
    let mut acc = 0u64;
    if let Some(dc) = deg_c {
        if n.0 <= BigUint::from(dc) {
            let idx = n.0.to_u32_digits().first().copied().unwrap_or(0) as usize;
            acc += cs.c.coeff(idx).value() as u64;
            *ops += 1;
        }
    }
    // Window m = n - deg a .. n, clamped at zero: the summand for shift j is
    // [x^j]a * h_{n-j}. Zero coefficients of a contribute nothing and are
    // skipped without a walk.
    if let Some(da) = cs.a.degree() {
        for j in 0..=da {
            let aj = cs.a.coeff(j).value() as u64;
            if aj == 0 {
                continue;
            }
            let Some(m) = n.checked_sub(j as u64) else { continue };
            let h = h_query(cs, &m, ops) as u64;
            acc += aj * h % p;
            *ops += 2;
        }
    }
    (acc % p) as u32
}

/// f_n = [x^n]c + sum_{m=n-deg a}^{n} [x^{n-m}]a * u A_{m_l}...A_{m_0} v.
pub fn f_coeff(cs: &CompiledSeries, n: &BigIndex) -> Fp {
    let mut ops = 0;
    Fp::new(cs.modulus(), f_query(cs, n, &mut ops) as u64)
}

/// Same query with an exact count of the field operations performed in the
/// matrix walks and the final combination.
pub fn f_coeff_with_ops(cs: &CompiledSeries, n: &BigIndex) -> (Fp, u64) {
    let mut ops = 0;
    let v = f_query(cs, n, &mut ops);
    (Fp::new(cs.modulus(), v as u64), ops)
}

/// Walk state for range scans: distinct columns A_{s_j}...A_{s_0} v are
/// stored once, transitions filled lazily.
struct ColumnOrbit<'a> {
    cs: &'a CompiledSeries,
    columns: Vec<Vec<u32>>,
    outputs: Vec<u32>,
    transitions: Vec<Vec<Option<usize>>>,
    index: HashMap<Vec<u32>, usize>,
}

impl<'a> ColumnOrbit<'a> {
    fn new(cs: &'a CompiledSeries) -> Self {
        let mut orbit = ColumnOrbit {
            cs,
            columns: Vec::new(),
            outputs: Vec::new(),
            transitions: Vec::new(),
            index: HashMap::new(),
        };
        orbit.intern(cs.v.clone());
        orbit
    }

    fn intern(&mut self, column: Vec<u32>) -> usize {
        if let Some(&id) = self.index.get(&column) {
            return id;
        }
        let id = self.columns.len();
        self.outputs.push(self.cs.u_dot(&column));
        self.transitions.push(vec![None; self.cs.modulus().get() as usize]);
        self.index.insert(column.clone(), id);
        self.columns.push(column);
        id
    }

    fn step(&mut self, from: usize, digit: u32) -> usize {
        if let Some(id) = self.transitions[from][digit as usize] {
            return id;
        }
        let next = self.cs.mats[digit as usize].matvec(&self.columns[from], self.cs.modulus().get());
        let id = self.intern(next);
        self.transitions[from][digit as usize] = Some(id);
        id
    }
}

/// All h_m for m in [lo, hi], as raw residues indexed by m - lo.
fn h_window(cs: &CompiledSeries, lo: u64, hi: u64) -> Vec<u32> {
    let p = cs.modulus().get() as u64;
    let mut out = vec![0u32; (hi - lo + 1) as usize];
    let mut orbit = ColumnOrbit::new(cs);

    // Depth-first over digit strings, least significant digit first; the
    // string (s_0..s_j) stands for m = sum s_i p^i and extending it appends
    // the next more significant digit. A node is recorded when its last
    // digit is nonzero (plus the single string "0" for m = 0). A subtree is
    // entered only if appending a nonzero digit somewhere above can still
    // land in the window, which also bounds the depth by log_p(hi).
    let mut stack: Vec<(u64, u32, usize)> = vec![(0, 0, 0)];
    while let Some((value, level, state)) = stack.pop() {
        let step = (p as u128).pow(level);
        for digit in 0..p as u32 {
            let child_value = value as u128 + digit as u128 * step;
            if child_value > hi as u128 {
                break;
            }
            let record = (digit != 0 || (value == 0 && level == 0)) && child_value >= lo as u128;
            // Proper extensions reach child_value + t * p^(level+1), t >= 1.
            let jump = step * p as u128;
            let t_min = if child_value + jump >= lo as u128 {
                1
            } else {
                (lo as u128 - child_value).div_ceil(jump)
            };
            let descend = child_value + t_min * jump <= hi as u128;
            if !record && !descend {
                continue;
            }
            let child = orbit.step(state, digit);
            if record {
                out[(child_value as u64 - lo) as usize] = orbit.outputs[child];
            }
            if descend {
                stack.push((child_value as u64, level + 1, child));
            }
        }
    }
    out
}

/// f_n for every n in n0..=n1, elementwise equal to `f_coeff`.
pub fn f_range(cs: &CompiledSeries, n0: u64, n1: u64) -> Result<Vec<Fp>> {
    assert!(n0 <= n1, "empty range");
    let len = n1 - n0 + 1;
    if len > RANGE_CAP {
        return Err(Error::RangeTooLarge { len });
    }
    let p = cs.modulus();
    let q = p.get() as u64;
    let deg_a = cs.a.degree();
    let lo = match deg_a {
        Some(da) => n0.saturating_sub(da as u64),
        None => n0,
    };
    let h = h_window(cs, lo, n1);

    let mut out = Vec::with_capacity(len as usize);
    for n in n0..=n1 {
        let mut acc = 0u64;
        if let Some(dc) = cs.c.degree() {
            if n <= dc as u64 {
                acc += cs.c.coeff(n as usize).value() as u64;
            }
        }
        if let Some(da) = deg_a {
            for j in 0..=da.min(n as usize) {
                let aj = cs.a.coeff(j).value() as u64;
                if aj == 0 {
                    continue;
                }
                let m = n - j as u64;
                acc += aj * h[(m - lo) as usize] as u64 % q;
            }
        }
        out.push(Fp::new(p, acc % q));
    }
    Ok(out)
}
