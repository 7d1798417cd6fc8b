//! Constructive linear algebra over F_p[x].
//!
//! Determinants are computed by fraction-free (Bareiss) elimination with
//! exact polynomial division, which stays inside F_p[x] and yields exactly
//! the Cramer data the dependency construction needs: given d+1 vectors of
//! length d with entries of degree at most c, it produces polynomials
//! d_1..d_{d+1}, not all zero, with sum d_i v_i = 0 and deg d_i <= d*c.

use crate::fp::Prime;
use crate::poly::Poly;

/// Row-major matrix of polynomials sharing one modulus.
#[derive(Clone, Debug)]
pub struct PolyMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn from_rows(p: Prime, rows: Vec<Vec<Poly>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged matrix");
            for e in row {
                assert_eq!(e.modulus(), p, "modulus mismatch");
                entries.push(e);
            }
        }
        PolyMatrix { p, rows: nrows, cols: ncols, entries }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut rows = vec![vec![Poly::zero(p); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = Poly::one(p);
        }
        Self::from_rows(p, rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    fn to_grid(&self) -> Vec<Vec<Poly>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect()).collect()
    }

    /// Exact determinant; the degree is at most the sum of per-row maxima.
    pub fn det(&self) -> Poly {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        bareiss_det(self.p, self.to_grid())
    }
}

fn bareiss_det(p: Prime, mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(p);
    }
    let mut negate = false;
    let mut prev = Poly::one(p);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Poly::zero(p);
            };
            m.swap(k, swap);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.exact_div(&prev);
            }
            m[i][k] = Poly::zero(p);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate { det.neg() } else { det }
}

/// Rank over F_p(x) by cross-multiplication elimination (no division).
fn rank(mut m: Vec<Vec<Poly>>) -> usize {
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pivot) = (r..nrows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pivot);
        for i in r + 1..nrows {
            if m[i][c].is_zero() {
                continue;
            }
            let f1 = m[r][c].clone();
            let f2 = m[i][c].clone();
            for j in c..ncols {
                m[i][j] = m[i][j].mul(&f1).sub(&m[r][j].mul(&f2));
            }
        }
        r += 1;
        if r == nrows {
            break;
        }
    }
    r
}

fn restrict(vector: &[Poly], cols: &[usize]) -> Vec<Poly> {
    cols.iter().map(|&c| vector[c].clone()).collect()
}

/// Greedy from the lowest index: a maximal independent set of columns,
/// judged over all rows.
fn independent_cols(vectors: &[Vec<Poly>]) -> Vec<usize> {
    let dim = vectors[0].len();
    let mut sel: Vec<usize> = Vec::new();
    for c in 0..dim {
        let mut cand = sel.clone();
        cand.push(c);
        let m: Vec<Vec<Poly>> = vectors.iter().map(|v| restrict(v, &cand)).collect();
        if rank(m) == cand.len() {
            sel = cand;
        }
    }
    sel
}

/// Greedy from the lowest index: `want` independent rows among `rows`,
/// restricted to `cols`; `None` if the rank falls short.
fn independent_rows(vectors: &[Vec<Poly>], rows: &[usize], cols: &[usize], want: usize) -> Option<Vec<usize>> {
    let mut sel: Vec<usize> = Vec::new();
    for &r in rows {
        let mut cand = sel.clone();
        cand.push(r);
        let m: Vec<Vec<Poly>> = cand.iter().map(|&i| restrict(&vectors[i], cols)).collect();
        if rank(m) == cand.len() {
            sel = cand;
            if sel.len() == want {
                return Some(sel);
            }
        }
    }
    None
}

/// A linear dependency over F_p[x] among d+1 vectors of length d.
///
/// Returns coefficients, not all zero, with componentwise sum d_i v_i = 0 and
/// deg d_i bounded by d times the largest entry degree. The output is
/// normalized: divided by the common polynomial factor, and scaled so the
/// first nonzero coefficient is monic.
pub fn dependency(vectors: &[Vec<Poly>]) -> Vec<Poly> {
    let count = vectors.len();
    assert!(count >= 2, "need at least two vectors");
    let dim = vectors[0].len();
    assert!(count == dim + 1, "expected {} vectors of length {dim}", dim + 1);
    let p = vectors[0][0].modulus();
    for v in vectors {
        assert_eq!(v.len(), dim, "ragged input");
        for e in v {
            assert_eq!(e.modulus(), p, "modulus mismatch");
        }
    }

    let max_deg = vectors.iter().flatten().filter_map(|e| e.degree()).max();
    let mut out = vec![Poly::zero(p); count];

    let cols = independent_cols(vectors);
    if cols.is_empty() {
        // All vectors are zero; any unit coefficient works.
        out[0] = Poly::one(p);
        return out;
    }
    let rho = cols.len();

    let mut solved = false;
    for excluded in 0..count {
        let rest: Vec<usize> = (0..count).filter(|&i| i != excluded).collect();
        let Some(sel) = independent_rows(vectors, &rest, &cols, rho) else { continue };
        let base: Vec<Vec<Poly>> = sel.iter().map(|&i| restrict(&vectors[i], &cols)).collect();
        let det_base = bareiss_det(p, base.clone());
        debug_assert!(!det_base.is_zero());
        out[excluded] = det_base;
        let replacement: Vec<Poly> = restrict(&vectors[excluded], &cols).iter().map(|e| e.neg()).collect();
        for (slot, &row) in sel.iter().enumerate() {
            let mut grid = base.clone();
            grid[slot] = replacement.clone();
            out[row] = bareiss_det(p, grid);
        }
        solved = true;
        break;
    }
    assert!(solved, "a full-rank row subset always exists");

    // Divide out the common polynomial factor and make the first nonzero
    // coefficient monic.
    let mut g = Poly::zero(p);
    for d in out.iter().filter(|d| !d.is_zero()) {
        g = g.gcd(d);
    }
    for d in out.iter_mut() {
        if !d.is_zero() {
            *d = d.exact_div(&g);
        }
    }
    let scale = out
        .iter()
        .find(|d| !d.is_zero())
        .expect("nontrivial dependency")
        .leading_coeff()
        .inv()
        .expect("nonzero leading coefficient");
    for d in out.iter_mut() {
        *d = d.mul_scalar(scale);
    }

    debug_assert!(check_dependency(vectors, &out, max_deg), "dependency postconditions violated");
    out
}

/// The three postconditions: zero sum, nontriviality, degree bound.
pub fn check_dependency(vectors: &[Vec<Poly>], coeffs: &[Poly], max_input_deg: Option<usize>) -> bool {
    let p = vectors[0][0].modulus();
    let dim = vectors[0].len();
    if coeffs.iter().all(|d| d.is_zero()) {
        return false;
    }
    let bound = dim * max_input_deg.unwrap_or(0);
    if coeffs.iter().filter_map(|d| d.degree()).any(|d| d > bound) {
        return false;
    }
    for c in 0..dim {
        let mut acc = Poly::zero(p);
        for (d, v) in coeffs.iter().zip(vectors) {
            acc = acc.add(&d.mul(&v[c]));
        }
        if !acc.is_zero() {
            return false;
        }
    }
    true
}
