//! Compilation of a Mahler equation plus initial coefficients into the
//! linear representation (a, c, e, u, A_0..A_{p-1}, v).
//!
//! The change of variable f = c_0 g splits g into a negative part g_- and a
//! power series h satisfying h = b + d_1 h(x^p) + ... + d_k h(x^{p^k}) with
//! polynomial b and d_i = -c_i c_0^{p^i - 2}. The span of
//! B = (x^j, x^j h(x^{p^i})) for j <= D is closed under every section
//! operator S_r, and the matrices of S_r over B, together with the row of
//! constant terms u and the coordinate column v of h, realize
//! h_m = u A_{m_l}...A_{m_0} v. Finally a = c_0 and c = c_0 g_-, so that
//! f = c + a h.

use crate::bipoly::{parse_bipoly, BiPolyFp};
use crate::error::{Error, Result};
use crate::fp::{Fp, Prime};
use crate::mahler::{derive_mahler, MahlerEquation};
use crate::oracle::{self, SolveOptions};
use crate::poly::{Laurent, Poly, Series};
use serde::{Deserialize, Serialize};

/// Default cap on the representation dimension e.
pub const DEFAULT_DIM_CAP: usize = 4096;

#[derive(Clone, Debug)]
pub struct CompileOptions {
    pub dim_cap: usize,
    /// Used when the prefix is resolved automatically from the oracle.
    pub solve: SolveOptions,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions { dim_cap: DEFAULT_DIM_CAP, solve: SolveOptions::default() }
    }
}

/// Initial coefficients: given explicitly, or the lexicographically least
/// oracle root.
#[derive(Clone, Debug)]
pub enum PrefixSource {
    Explicit(Vec<u32>),
    Auto,
}

/// Data of the change of variable f = c_0 g, g = g_- + h.
#[derive(Clone, Debug)]
pub struct ChangeOfVariable {
    /// Negative part of f/c_0; only negative exponents.
    pub g_minus: Laurent,
    /// The inhomogeneous term; its negative exponents cancel exactly.
    pub b: Poly,
    /// d_1..d_k.
    pub d_polys: Vec<Poly>,
    /// D = max(deg b, deg d_i), with an all-zero collection giving 0.
    pub deg_bound: usize,
    /// h(0), read off the series expansion of f/c_0.
    pub h0: Fp,
}

pub fn change_of_variable(eq: &MahlerEquation, prefix: &[u32], dim_cap: usize) -> Result<ChangeOfVariable> {
    let p = eq.modulus();
    let k = eq.order();
    assert!(k >= 1, "k = 0 relations short-circuit to the zero representation");
    let c0 = eq.c0();
    let deg_c0 = c0.degree().expect("c_0 is nonzero");
    if prefix.len() < deg_c0 + 1 {
        return Err(Error::PrefixTooShort { needed: deg_c0 + 1, got: prefix.len() });
    }

    // Degrees of the d_i are known before computing them; refuse hopeless
    // instances before raising c_0 to a huge power.
    let mut predicted = 0u64;
    for (i, ci) in eq.coeffs().iter().enumerate().skip(1) {
        if let Some(dc) = ci.degree() {
            let e = p.pow(i as u32)? - 2;
            predicted = predicted.max(dc as u64 + e * deg_c0 as u64);
        }
    }
    let min_dim = (predicted + 1).saturating_mul(k as u64 + 2);
    if min_dim > dim_cap as u64 {
        return Err(Error::DimensionCapExceeded {
            dim: min_dim.min(usize::MAX as u64) as usize,
            cap: dim_cap,
        });
    }

    // g = f / c_0 from the prefix: with c_0 = x^w c~ and c~(0) != 0, the
    // series q = f / c~ determines g_- (entries of q below index w) and
    // h(0) = q_w.
    let w = c0.order().expect("c_0 is nonzero");
    let c_tilde = Poly::new(p, c0.coeffs()[w..].iter().map(|&v| v as u64));
    let f_series = Series::from_prefix(p, prefix);
    let q = f_series.mul(&c_tilde.to_series(prefix.len()).inv().expect("unit constant term"));
    let g_minus = Laurent::new(p, -(w as i64), q.coeffs()[..w].iter().map(|&v| v as u64));
    let h0 = q.coeff(w);

    let d_polys: Vec<Poly> = eq
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, ci)| -> Result<Poly> {
            let e = p.pow(i as u32)? - 2;
            Ok(ci.mul(&c0.pow(e)).neg())
        })
        .collect::<Result<_>>()?;

    // b = -L(x, M) g_- = -g_- + sum d_i g_-(x^{p^i}); the negative exponents
    // cancel exactly for an honest prefix.
    let mut b_laurent = g_minus.neg();
    for (i, di) in d_polys.iter().enumerate() {
        let spread = g_minus.frobenius(i as u32 + 1)?;
        b_laurent = b_laurent.add(&spread.mul_poly(di));
    }
    let (negative, b) = b_laurent.split();
    if !negative.is_zero() {
        return Err(Error::CancellationFailed);
    }

    let deg_bound = d_polys
        .iter()
        .chain(std::iter::once(&b))
        .filter_map(|q| q.degree())
        .max()
        .unwrap_or(0);

    Ok(ChangeOfVariable { g_minus, b, d_polys, deg_bound, h0 })
}

/// Square matrix over F_p, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMat {
    dim: usize,
    data: Vec<u32>,
}

impl FpMat {
    pub fn zeros(dim: usize) -> Self {
        FpMat { dim, data: vec![0; dim * dim] }
    }

    pub fn from_raw(dim: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), dim * dim);
        FpMat { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: u32) {
        self.data[row * self.dim + col] = value;
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.data[row * self.dim + col]
    }

    /// A * w mod p. Partial sums stay below 2^63 because p < 2^16 and
    /// dim is capped far under 2^31.
    pub fn matvec(&self, w: &[u32], p: u32) -> Vec<u32> {
        debug_assert_eq!(w.len(), self.dim);
        let q = p as u64;
        let mut out = Vec::with_capacity(self.dim);
        for row in self.data.chunks_exact(self.dim) {
            let mut acc = 0u64;
            for (&a, &b) in row.iter().zip(w) {
                acc += a as u64 * b as u64;
            }
            out.push((acc % q) as u32);
        }
        out
    }
}

pub fn row_dot(u: &[u32], w: &[u32], p: u32) -> u32 {
    debug_assert_eq!(u.len(), w.len());
    let mut acc = 0u64;
    for (&a, &b) in u.iter().zip(w) {
        acc += a as u64 * b as u64;
    }
    (acc % p as u64) as u32
}

/// The compiled linear representation.
#[derive(Clone, Debug)]
pub struct CompiledSeries {
    p: Prime,
    pub a: Poly,
    pub c: Poly,
    /// e, the dimension of the representation.
    pub dim: usize,
    pub u: Vec<u32>,
    /// A_0..A_{p-1}.
    pub mats: Vec<FpMat>,
    pub v: Vec<u32>,
    /// k, the order of the Mahler equation behind the representation.
    pub mahler_k: usize,
    /// D, the degree bound of the basis layout.
    pub basis_deg: usize,
    pub h0: u32,
    /// Coefficients c_0..c_k of the Mahler equation, constant term first.
    pub mahler_coeffs: Vec<Vec<u32>>,
    /// Canonical text of the source polynomial.
    pub source: String,
}

impl CompiledSeries {
    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn u_dot(&self, w: &[u32]) -> u32 {
        row_dot(&self.u, w, self.p.get())
    }

    /// Basis order behind the coordinates: x^0..x^D, then for each i = 0..k
    /// the block x^0 h_(i) .. x^D h_(i).
    pub fn basis_layout(&self) -> String {
        format!(
            "x^0..x^{d}, then x^j*h(x^p^i) for i = 0..{k}, j = 0..{d} (blocks of {w})",
            d = self.basis_deg,
            k = self.mahler_k,
            w = self.basis_deg + 1
        )
    }

    /// Coordinates of f = c + a*h itself: c in the power block and the
    /// coefficients of a in the h_(0) block. This is the start column for
    /// the automaton view of f.
    pub fn initial_f_column(&self) -> Vec<u32> {
        let width = self.basis_deg + 1;
        let mut col = vec![0u32; self.dim];
        for (j, &cj) in self.c.coeffs().iter().enumerate() {
            col[j] = cj;
        }
        for (j, &aj) in self.a.coeffs().iter().enumerate() {
            col[width + j] = aj;
        }
        col
    }
}

fn assert_structural_invariants(cs: &CompiledSeries) {
    let p = cs.p.get();
    // u A_0 = u: an extra leading zero digit never changes a query.
    let a0 = &cs.mats[0];
    for col in 0..cs.dim {
        let mut acc = 0u64;
        for row in 0..cs.dim {
            acc += cs.u[row] as u64 * a0.get(row, col) as u64;
        }
        assert_eq!((acc % p as u64) as u32, cs.u[col], "u A_0 != u at column {col}");
    }
    // v is a standard basis column.
    assert_eq!(cs.v.iter().filter(|&&x| x == 1).count(), 1, "v must have a single 1");
    assert!(cs.v.iter().all(|&x| x == 0 || x == 1), "v must be a 0/1 column");
    // e = (D+1)(k+2).
    assert_eq!(cs.dim, (cs.basis_deg + 1) * (cs.mahler_k + 2), "e != (D+1)(k+2)");
    // h_0 = u A_0 v equals the h(0) read from the prefix.
    let w = a0.matvec(&cs.v, p);
    assert_eq!(cs.u_dot(&w), cs.h0, "u A_0 v != h(0)");
}

/// The representation of the zero series, used when the Mahler relation is
/// c_0 f = 0: basis (x^0, x^0 h) with h = 0.
pub fn zero_representation(eq: &MahlerEquation, source: String) -> CompiledSeries {
    let p = eq.modulus();
    let mut a0 = FpMat::zeros(2);
    a0.set(0, 0, 1);
    let mut mats = vec![FpMat::zeros(2); p.get() as usize];
    mats[0] = a0;
    let cs = CompiledSeries {
        p,
        a: Poly::zero(p),
        c: Poly::zero(p),
        dim: 2,
        u: vec![1, 0],
        mats,
        v: vec![0, 1],
        mahler_k: 0,
        basis_deg: 0,
        h0: 0,
        mahler_coeffs: eq.coeffs().iter().map(|c| c.coeffs().to_vec()).collect(),
        source,
    };
    assert_structural_invariants(&cs);
    cs
}

pub fn build_representation(
    eq: &MahlerEquation,
    cov: &ChangeOfVariable,
    source: String,
    dim_cap: usize,
) -> Result<CompiledSeries> {
    let p = eq.modulus();
    let q = p.get();
    let k = eq.order();
    let a = eq.c0().clone();
    let deg_a = a.degree().expect("c_0 nonzero");

    // The basis bound D. Closure under sections only needs max(deg b,
    // deg d_i), but the automaton start column places the coefficients of a
    // itself in the h_(0) block, so D also covers deg a. For p >= 3, or
    // k >= 2, deg d_k = deg c_k + (p^k - 2) deg c_0 >= deg c_0 makes this a
    // no-op; only p = 2, k = 1 can differ.
    let deg_bound = cov.deg_bound.max(deg_a);
    let width = deg_bound + 1;
    let dim = width * (k + 2);
    if dim > dim_cap {
        return Err(Error::DimensionCapExceeded { dim, cap: dim_cap });
    }
    let idx_pow = |j: usize| j;
    let idx_h = |i: usize, j: usize| width * (i + 1) + j;

    // c = c_0 g_-: the lowest exponent of the product is ord c_0 - ord c_0.
    let (neg, c) = cov.g_minus.mul_poly(&a).split();
    assert!(neg.is_zero(), "c_0 g_- is a polynomial");
    debug_assert!(c.is_zero() || c.degree() < a.degree(), "deg c < deg a");

    let mut u = vec![0u32; dim];
    u[idx_pow(0)] = 1;
    for i in 0..=k {
        u[idx_h(i, 0)] = cov.h0.value();
    }

    let mut v = vec![0u32; dim];
    v[idx_h(0, 0)] = 1;

    let mut mats = Vec::with_capacity(q as usize);
    for r in 0..q {
        let mut mat = FpMat::zeros(dim);
        // S_r(x^j) = x^{(j-r)/p} when j = r mod p, else 0.
        for j in 0..=deg_bound {
            if j as u32 % q == r {
                mat.set(idx_pow((j - r as usize) / q as usize), idx_pow(j), 1);
            }
        }
        // S_r(x^j h_(i)) = S_r(x^j) h_(i-1) for i >= 1.
        for i in 1..=k {
            for j in 0..=deg_bound {
                if j as u32 % q == r {
                    mat.set(idx_h(i - 1, (j - r as usize) / q as usize), idx_h(i, j), 1);
                }
            }
        }
        // S_r(x^j h) via h = b + sum d_i h_(i): S_r(x^j b) lands among the
        // pure powers, S_r(x^j d_i) multiplies h_(i-1). Every expansion
        // degree stays at most 2D/p <= D.
        for j in 0..=deg_bound {
            let col = idx_h(0, j);
            let pb = cov.b.shift_up(j).section(r);
            assert!(pb.degree().unwrap_or(0) <= deg_bound, "section degree exceeds D");
            for (t, &coeff) in pb.coeffs().iter().enumerate() {
                if coeff != 0 {
                    mat.set(idx_pow(t), col, coeff);
                }
            }
            for (i, di) in cov.d_polys.iter().enumerate() {
                let pd = di.shift_up(j).section(r);
                assert!(pd.degree().unwrap_or(0) <= deg_bound, "section degree exceeds D");
                for (t, &coeff) in pd.coeffs().iter().enumerate() {
                    if coeff != 0 {
                        mat.set(idx_h(i, t), col, coeff);
                    }
                }
            }
        }
        mats.push(mat);
    }

    let cs = CompiledSeries {
        p,
        a,
        c,
        dim,
        u,
        mats,
        v,
        mahler_k: k,
        basis_deg: deg_bound,
        h0: cov.h0.value(),
        mahler_coeffs: eq.coeffs().iter().map(|c| c.coeffs().to_vec()).collect(),
        source,
    };
    assert_structural_invariants(&cs);
    Ok(cs)
}

/// A full compilation, keeping the intermediates a caller may want to
/// report or test against.
#[derive(Clone, Debug)]
pub struct Compilation {
    pub compiled: CompiledSeries,
    pub equation: MahlerEquation,
    pub reduced: BiPolyFp,
    pub prefix: Vec<u32>,
}

/// Compile a reduced equation E with the given prefix source.
pub fn compile_equation(
    reduced: &BiPolyFp,
    source: String,
    prefix: &PrefixSource,
    opts: &CompileOptions,
) -> Result<Compilation> {
    let p = reduced.modulus();
    let equation = derive_mahler(reduced)?;

    let prefix: Vec<u32> = match prefix {
        PrefixSource::Explicit(values) => {
            let values: Vec<u32> = values.iter().map(|&t| t % p.get()).collect();
            // The honest-input gate: necessary, not sufficient.
            if !oracle::verify_prefix(reduced, &values) {
                return Err(Error::PrefixRejected);
            }
            values
        }
        PrefixSource::Auto => {
            let needed = match equation.c0().degree() {
                Some(d) if !equation.is_zero_forcing() => d + 1,
                _ => 1,
            };
            let sol = oracle::solve_series(reduced, needed, None, &opts.solve)?;
            if sol.roots.is_empty() {
                return Err(Error::NoRoots);
            }
            if !sol.complete {
                return Err(Error::AmbiguousBranch { found: sol.roots.len() });
            }
            sol.roots[0].coeffs().to_vec()
        }
    };

    let compiled = if equation.is_zero_forcing() {
        zero_representation(&equation, source)
    } else {
        let cov = change_of_variable(&equation, &prefix, opts.dim_cap)?;
        build_representation(&equation, &cov, source, opts.dim_cap)?
    };

    Ok(Compilation { compiled, equation, reduced: reduced.clone(), prefix })
}

/// Parse, normalize, reduce mod p, and compile.
pub fn compile_text(text: &str, p: Prime, prefix: &PrefixSource, opts: &CompileOptions) -> Result<Compilation> {
    let normalized = parse_bipoly(text)?.content_normalize()?;
    let reduced = normalized.reduce_mod_p(p);
    compile_equation(&reduced, normalized.to_string(), prefix, opts)
}

// ---------------------------------------------------------------------------
// Serialization (format 1)
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CompiledDoc {
    format: u32,
    p: u32,
    a: Vec<u32>,
    c: Vec<u32>,
    e: usize,
    u: Vec<u32>,
    #[serde(rename = "A")]
    mats: Vec<Vec<u32>>,
    v: Vec<u32>,
    k: usize,
    #[serde(rename = "D")]
    basis_deg: usize,
    h0: u32,
    mahler: Vec<Vec<u32>>,
    source: String,
}

fn schema_err(path: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::Schema { path: path.into(), msg: msg.into() }
}

impl CompiledSeries {
    pub fn to_json(&self) -> String {
        let doc = CompiledDoc {
            format: 1,
            p: self.p.get(),
            a: self.a.coeffs().to_vec(),
            c: self.c.coeffs().to_vec(),
            e: self.dim,
            u: self.u.clone(),
            mats: self.mats.iter().map(|m| m.data().to_vec()).collect(),
            v: self.v.clone(),
            k: self.mahler_k,
            basis_deg: self.basis_deg,
            h0: self.h0,
            mahler: self.mahler_coeffs.clone(),
            source: self.source.clone(),
        };
        serde_json::to_string(&doc).expect("serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<CompiledSeries> {
        let doc: CompiledDoc = serde_json::from_str(text)?;
        if doc.format != 1 {
            return Err(schema_err("format", format!("unsupported format {}", doc.format)));
        }
        let p = Prime::new(doc.p)
            .map_err(|_| schema_err("p", format!("{} is not a supported prime", doc.p)))?;
        let q = doc.p;
        let e = doc.e;
        if e == 0 {
            return Err(schema_err("e", "dimension must be positive"));
        }
        if e != (doc.basis_deg + 1) * (doc.k + 2) {
            return Err(schema_err(
                "e",
                format!("expected (D+1)(k+2) = {}", (doc.basis_deg + 1) * (doc.k + 2)),
            ));
        }
        let check_values = |name: &str, values: &[u32]| -> Result<()> {
            match values.iter().position(|&x| x >= q) {
                Some(i) => Err(schema_err(format!("{name}[{i}]"), format!("value not reduced mod {q}"))),
                None => Ok(()),
            }
        };
        if doc.u.len() != e {
            return Err(schema_err("u", format!("expected {e} entries, got {}", doc.u.len())));
        }
        if doc.v.len() != e {
            return Err(schema_err("v", format!("expected {e} entries, got {}", doc.v.len())));
        }
        if doc.v.iter().filter(|&&x| x == 1).count() != 1 || doc.v.iter().any(|&x| x > 1) {
            return Err(schema_err("v", "expected a standard basis column"));
        }
        if doc.mats.len() != q as usize {
            return Err(schema_err("A", format!("expected {q} matrices, got {}", doc.mats.len())));
        }
        for (i, m) in doc.mats.iter().enumerate() {
            if m.len() != e * e {
                return Err(schema_err(
                    format!("A[{i}]"),
                    format!("expected {} entries, got {}", e * e, m.len()),
                ));
            }
            check_values(&format!("A[{i}]"), m)?;
        }
        check_values("a", &doc.a)?;
        check_values("c", &doc.c)?;
        check_values("u", &doc.u)?;
        if doc.h0 >= q {
            return Err(schema_err("h0", format!("value not reduced mod {q}")));
        }
        if doc.mahler.len() != doc.k + 1 {
            return Err(schema_err(
                "mahler",
                format!("expected {} coefficient arrays, got {}", doc.k + 1, doc.mahler.len()),
            ));
        }
        for (i, m) in doc.mahler.iter().enumerate() {
            check_values(&format!("mahler[{i}]"), m)?;
        }
        if doc.a.last() == Some(&0) {
            return Err(schema_err("a", "not normalized: trailing zero"));
        }
        if doc.c.last() == Some(&0) {
            return Err(schema_err("c", "not normalized: trailing zero"));
        }
        Ok(CompiledSeries {
            p,
            a: Poly::new(p, doc.a.iter().map(|&x| x as u64)),
            c: Poly::new(p, doc.c.iter().map(|&x| x as u64)),
            dim: e,
            u: doc.u,
            mats: doc.mats.into_iter().map(|m| FpMat::from_raw(e, m)).collect(),
            v: doc.v,
            mahler_k: doc.k,
            basis_deg: doc.basis_deg,
            h0: doc.h0,
            mahler_coeffs: doc.mahler,
            source: doc.source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn catalan_prefix_mod2() -> Vec<u32> {
        vec![0, 1, 1, 0, 1, 0, 0, 0, 1, 0]
    }

    fn compile_catalan_mod2() -> Compilation {
        compile_text(
            "y - y^2 - x",
            p(2),
            &PrefixSource::Explicit(catalan_prefix_mod2()),
            &CompileOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn catalan_mod_2_change_of_variable() {
        let comp = compile_catalan_mod2();
        let eq = &comp.equation;
        let cov = change_of_variable(eq, &catalan_prefix_mod2(), DEFAULT_DIM_CAP).unwrap();
        assert!(cov.g_minus.is_zero());
        assert!(cov.b.is_zero());
        assert_eq!(cov.d_polys.len(), 2);
        assert_eq!(cov.d_polys[0], Poly::new(p(2), [1, 1]));
        assert_eq!(cov.d_polys[1], Poly::new(p(2), [0, 0, 1]));
        assert_eq!(cov.deg_bound, 2);
        assert_eq!(cov.h0.value(), 1);
    }

    #[test]
    fn catalan_mod_2_representation_shape() {
        let comp = compile_catalan_mod2();
        let cs = &comp.compiled;
        assert_eq!(cs.dim, 12);
        assert_eq!(cs.a, Poly::new(p(2), [0, 1]));
        assert!(cs.c.is_zero());
        assert_eq!(cs.mahler_k, 2);
        assert_eq!(cs.basis_deg, 2);
        assert_eq!(cs.h0, 1);
        // u: constant terms, 1 at x^0 and h(0) at the start of every h block
        assert_eq!(cs.u, vec![1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0]);
        assert_eq!(cs.v, vec![0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn constant_c0_means_no_negative_part() {
        let comp =
            compile_text("y - x - 1", p(3), &PrefixSource::Auto, &CompileOptions::default())
                .unwrap();
        let cov = change_of_variable(&comp.equation, &comp.prefix, DEFAULT_DIM_CAP).unwrap();
        if comp.equation.c0().order() == Some(0) {
            assert!(cov.g_minus.is_zero());
            assert!(comp.compiled.c.is_zero());
        }
    }

    #[test]
    fn zero_forcing_compiles_to_zero_representation() {
        let comp =
            compile_text("y^2", p(3), &PrefixSource::Auto, &CompileOptions::default()).unwrap();
        let cs = &comp.compiled;
        assert!(cs.a.is_zero());
        assert!(cs.c.is_zero());
        assert_eq!(cs.dim, 2);
        assert_eq!(cs.mahler_k, 0);
    }

    #[test]
    fn corrupted_prefix_is_rejected() {
        let mut bad = catalan_prefix_mod2();
        bad[2] = 0;
        let err = compile_text(
            "y - y^2 - x",
            p(2),
            &PrefixSource::Explicit(bad),
            &CompileOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::PrefixRejected));
    }

    #[test]
    fn short_prefix_is_rejected() {
        let err = compile_text(
            "y - y^2 - x",
            p(2),
            &PrefixSource::Explicit(vec![0]),
            &CompileOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::PrefixTooShort { .. }));
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let err = compile_text(
            "y - y^2 - x",
            p(5),
            &PrefixSource::Auto,
            &CompileOptions { dim_cap: 16, ..Default::default() },
        )
        .unwrap_err();
        assert!(matches!(err, Error::DimensionCapExceeded { .. }));
    }

    #[test]
    fn json_round_trip() {
        let comp = compile_catalan_mod2();
        let cs = &comp.compiled;
        let text = cs.to_json();
        let back = CompiledSeries::from_json(&text).unwrap();
        assert_eq!(back.dim, cs.dim);
        assert_eq!(back.u, cs.u);
        assert_eq!(back.v, cs.v);
        assert_eq!(back.mats, cs.mats);
        assert_eq!(back.a, cs.a);
        assert_eq!(back.c, cs.c);
        assert_eq!(back.mahler_coeffs, cs.mahler_coeffs);
        assert_eq!(back.source, cs.source);
    }

    #[test]
    fn tampered_matrix_is_named_in_schema_error() {
        let comp = compile_catalan_mod2();
        let mut value: serde_json::Value = serde_json::from_str(&comp.compiled.to_json()).unwrap();
        let arr = value["A"][0].as_array_mut().unwrap();
        arr.pop();
        let err = CompiledSeries::from_json(&value.to_string()).unwrap_err();
        match err {
            Error::Schema { path, .. } => assert_eq!(path, "A[0]"),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn auto_prefix_matches_explicit_catalan() {
        let auto =
            compile_text("y - y^2 - x", p(2), &PrefixSource::Auto, &CompileOptions::default())
                .unwrap();
        let explicit = compile_catalan_mod2();
        // The lexicographically least root starts 0,1,1,..., i.e. the same
        // branch the explicit prefix pins.
        assert_eq!(auto.compiled.u, explicit.compiled.u);
        assert_eq!(auto.compiled.mats, explicit.compiled.mats);
        assert_eq!(auto.compiled.a, explicit.compiled.a);
        assert_eq!(auto.compiled.c, explicit.compiled.c);
    }
}
