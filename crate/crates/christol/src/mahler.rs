//! Derivation of a Mahler equation sum_{i=0}^{k} c_i(x) f(x^{p^i}) = 0 from
//! the algebraic equation E(x, f(x)) = 0.
//!
//! The route: represent the powers f^n over the basis 1, f, .., f^{d-1} with
//! a polynomial denominator, take the d+1 representations at n = 1, p, ...,
//! p^d, and extract a linear dependency. If the lowest coefficient of the
//! raw relation vanishes, section operators strip leading powers of p off
//! the indices until it does not.

use crate::bipoly::BiPolyFp;
use crate::error::{Error, Result};
use crate::fp::Prime;
use crate::linalg::dependency;
use crate::poly::{Poly, Series};

/// Cap on p^d; the power sweep below runs p^d sequential steps.
pub const POWER_SWEEP_CAP: u64 = 1 << 20;

/// The identity a_{d,n} f^n = sum_{i<d} a_{i,n} f^i with a_{d,n} nonzero.
#[derive(Clone, Debug)]
pub struct PowerRep {
    pub n: u64,
    /// a_{0,n} .. a_{d-1,n}
    pub numer: Vec<Poly>,
    /// a_{d,n}
    pub lead: Poly,
}

/// Representations of f^n for n at the given checkpoints (ascending), where
/// f satisfies sum a_i f^i = 0 with the given y-coefficients of E.
fn power_sweep(e_coeffs: &[Poly], checkpoints: &[u64]) -> Vec<PowerRep> {
    let d = e_coeffs.len() - 1;
    assert!(d >= 1, "y-degree must be at least 1");
    let lead_coeff = &e_coeffs[d];
    assert!(!lead_coeff.is_zero(), "leading y-coefficient must be nonzero");
    let p = lead_coeff.modulus();
    let deg_x = e_coeffs.iter().filter_map(|a| a.degree()).max().unwrap_or(0);

    // The equation rearranged as a_d f^d = sum_{i<d} (-a_i) f^i.
    let rearranged: Vec<Poly> = e_coeffs[..d].iter().map(|a| a.neg()).collect();

    let unit_rep = |i: u64| -> (Vec<Poly>, Poly) {
        let mut numer = vec![Poly::zero(p); d];
        numer[i as usize] = Poly::one(p);
        (numer, Poly::one(p))
    };

    let mut out = Vec::with_capacity(checkpoints.len());
    let mut want = checkpoints.iter().peekable();
    let top = *checkpoints.last().expect("at least one checkpoint");
    let mut numer: Vec<Poly> = Vec::new();
    let mut lead = Poly::one(p);
    for n in 0..=top {
        if n < d as u64 {
            (numer, lead) = unit_rep(n);
        } else if n == d as u64 {
            numer = rearranged.clone();
            lead = lead_coeff.clone();
        } else {
            lead = lead.mul(lead_coeff);
            let prev_top = numer[d - 1].clone();
            let mut next = Vec::with_capacity(d);
            for i in 0..d {
                let mut t = prev_top.mul(&rearranged[i]);
                if i > 0 {
                    t = t.add(&numer[i - 1].mul(lead_coeff));
                }
                next.push(t);
            }
            numer = next;
        }
        if n >= d as u64 {
            let max_deg = numer.iter().filter_map(|a| a.degree()).max().unwrap_or(0);
            assert!(
                max_deg as u64 <= (n - d as u64 + 1) * deg_x as u64,
                "power representation degree bound violated at n = {n}"
            );
        }
        while want.peek() == Some(&&n) {
            out.push(PowerRep { n, numer: numer.clone(), lead: lead.clone() });
            want.next();
        }
    }
    out
}

/// The representation of f^n over 1, f, .., f^{d-1}, given the
/// y-coefficients a_0..a_d of E.
pub fn power_representation(e_coeffs: &[Poly], n: u64) -> PowerRep {
    power_sweep(e_coeffs, &[n]).pop().unwrap()
}

/// A Mahler equation sum c_i(x) f(x^{p^i}) = 0, c_0 nonzero, together with
/// the provenance data its degree bound is stated against.
#[derive(Clone, Debug)]
pub struct MahlerEquation {
    p: Prime,
    coeffs: Vec<Poly>,
    pub deg_y_e: u32,
    pub deg_x_e: u32,
}

impl MahlerEquation {
    pub fn modulus(&self) -> Prime {
        self.p
    }

    /// c_0 .. c_k.
    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn c0(&self) -> &Poly {
        &self.coeffs[0]
    }

    /// k, the highest power of p appearing as x -> x^{p^k}.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// k = 0 means the relation is c_0(x) f(x) = 0, forcing f = 0.
    pub fn is_zero_forcing(&self) -> bool {
        self.order() == 0
    }

    /// The Lemma-F-style bound (d+1)(p^d - d + 1) deg_x E on deg c_0.
    pub fn c0_degree_bound(&self) -> u64 {
        degree_bound(self.p, self.deg_y_e, self.deg_x_e).expect("checked at derivation")
    }

    /// sum c_i(x) f(x^{p^i}) truncated to the precision of f.
    pub fn residual(&self, f: &Series) -> Series {
        assert_eq!(self.p, f.modulus(), "modulus mismatch");
        let n = f.precision();
        let mut acc = Series::zero(self.p, n);
        let mut step = 1usize;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                step = step.saturating_mul(self.p.get() as usize);
            }
            // f(x^{p^i}) mod x^n, by exponent spreading capped at n.
            let mut spread = vec![0u32; n];
            for (e, &v) in f.coeffs().iter().enumerate() {
                match e.checked_mul(step) {
                    Some(idx) if idx < n => spread[idx] = v,
                    _ => break,
                }
            }
            acc = acc.add(&Series::new(self.p, spread.into_iter().map(|v| v as u64)).mul_poly(c));
        }
        acc
    }
}

fn degree_bound(p: Prime, d: u32, deg_x: u32) -> Result<u64> {
    let pd = p.pow(d)?;
    let factor = (d as u64 + 1)
        .checked_mul(pd - d as u64 + 1)
        .and_then(|v| v.checked_mul(deg_x as u64))
        .ok_or(Error::BoundOverflow)?;
    Ok(factor)
}

/// Derive a Mahler equation for the roots of E. Every power-series root of E
/// satisfies the returned equation.
pub fn derive_mahler(e: &BiPolyFp) -> Result<MahlerEquation> {
    if e.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let p = e.modulus();
    let (deg_x, d) = e.degrees();
    if d == 0 {
        return Err(Error::NoRelationModP { p: p.get() });
    }
    let pd = p.pow(d).map_err(|_| Error::InstanceTooLarge { pd: u64::MAX, cap: POWER_SWEEP_CAP })?;
    if pd > POWER_SWEEP_CAP {
        return Err(Error::InstanceTooLarge { pd, cap: POWER_SWEEP_CAP });
    }

    // Representations of f(x^{p^i}) = f^{p^i} for i = 0..d.
    let checkpoints: Vec<u64> = (0..=d).map(|i| p.pow(i).unwrap()).collect();
    let reps = power_sweep(&e.y_coefficients(), &checkpoints);

    // A dependency among the numerator tuples, then clear the denominators.
    let tuples: Vec<Vec<Poly>> = reps.iter().map(|r| r.numer.clone()).collect();
    let relation = dependency(&tuples);
    let mut raw: Vec<Poly> = relation.iter().zip(&reps).map(|(c, r)| c.mul(&r.lead)).collect();

    // Strip leading zero coefficients: each section application turns
    // f(x^{p^i}) into f(x^{p^{i-1}}), using the witness digit that keeps the
    // lowest coefficient nonzero.
    let j = raw.iter().position(|c| !c.is_zero()).expect("nontrivial relation");
    let mut coeffs: Vec<Poly> = raw.drain(j..).collect();
    for _ in 0..j {
        let witness = coeffs[0].order().expect("lowest coefficient stays nonzero");
        let r = (witness as u64 % p.get() as u64) as u32;
        for c in coeffs.iter_mut() {
            *c = c.section(r);
        }
    }
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }

    assert!(!coeffs[0].is_zero(), "c_0 must be nonzero");
    assert!(coeffs.len() as u32 <= d + 1, "k exceeds deg_y E");
    let bound = degree_bound(p, d, deg_x)?;
    assert!(
        coeffs[0].degree().unwrap_or(0) as u64 <= bound,
        "deg c_0 = {:?} exceeds the bound {bound}",
        coeffs[0].degree()
    );

    Ok(MahlerEquation { p, coeffs, deg_y_e: d, deg_x_e: deg_x })
}
