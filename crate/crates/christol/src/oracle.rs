//! Brute-force ground truth: power-series roots of E(x, y) = 0 by
//! branch-and-prune expansion, prefix verification, divergence search, and
//! the closed-form bound calculators.
//!
//! Branch-and-prune rather than Newton/Hensel lifting: in characteristic p
//! the y-derivative of E can vanish identically on a root, so quadratic
//! lifting is not universally applicable. Expansion maintains, per branch,
//! the evaluations of all Hasse y-derivatives of E at the current prefix;
//! extending the prefix by t x^m updates them exactly in O(d^2 N).

use crate::bipoly::{BiPolyFp, BiPolyZ};
use crate::error::{Error, Result};
use crate::fp::{Fp, Prime};
use crate::poly::Series;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Abort once more than this many branches are alive at one level.
    pub max_branches: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { max_branches: 100_000 }
    }
}

/// All truncations consistent with E to the stated precision. If the branch
/// cap was hit, `complete` is false and `precision` is the depth actually
/// reached; each member still satisfies E = 0 mod x^precision.
#[derive(Clone, Debug)]
pub struct SolutionSet {
    pub precision: usize,
    pub roots: Vec<Series>,
    pub complete: bool,
}

struct Branch {
    coeffs: Vec<u32>,
    /// hasse[j] = j-th Hasse y-derivative of E evaluated at the prefix,
    /// all to the target precision.
    hasse: Vec<Vec<u32>>,
}

fn pascal_mod(n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut table = vec![vec![0u64; n + 1]; n + 1];
    for i in 0..=n {
        table[i][0] = 1;
        for j in 1..=i {
            table[i][j] = (table[i - 1][j - 1] + table[i - 1][j]) % p;
        }
    }
    table
}

fn extend_hasse(hasse: &[Vec<u32>], t: u32, m: usize, pascal: &[Vec<u64>], p: u64) -> Vec<Vec<u32>> {
    if t == 0 {
        return hasse.to_vec();
    }
    let n = hasse[0].len();
    let d1 = hasse.len();
    let mut out = Vec::with_capacity(d1);
    for j in 0..d1 {
        let mut v = hasse[j].clone();
        let mut t_pow = 1u64;
        for i in j + 1..d1 {
            t_pow = t_pow * t as u64 % p;
            let coef = pascal[i][j] * t_pow % p;
            if coef == 0 {
                continue;
            }
            let Some(offset) = (i - j).checked_mul(m) else { continue };
            if offset >= n {
                continue;
            }
            for pos in offset..n {
                v[pos] = ((v[pos] as u64 + coef * hasse[i][pos - offset] as u64) % p) as u32;
            }
        }
        out.push(v);
    }
    out
}

/// Breadth-first expansion of all roots of E to the requested precision.
/// Constrained positions are read from `prefix` instead of branching; they
/// are still pruned against the equation.
///
/// Branches are explored to twice the requested precision before truncating
/// the survivors back. A coefficient near the precision boundary only shows
/// up in the equation at roughly twice its own index, so without the deeper
/// sweep every branch with a junk coefficient in the top half would count as
/// a root of its truncation. The completeness flag refers to the deep sweep.
pub fn solve_series(
    e: &BiPolyFp,
    precision: usize,
    prefix: Option<&[u32]>,
    opts: &SolveOptions,
) -> Result<SolutionSet> {
    if e.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let p = e.modulus();
    let (_, d) = e.degrees();
    if d == 0 {
        return Err(Error::NoRelationModP { p: p.get() });
    }
    let q = p.get() as u64;
    let pascal = pascal_mod(d as usize, q);
    let coeffs = e.y_coefficients();
    let sweep = 2 * precision;

    let init: Vec<Vec<u32>> = coeffs.iter().map(|a| a.to_series(sweep).coeffs().to_vec()).collect();
    let mut branches = vec![Branch { coeffs: Vec::new(), hasse: init }];

    let collect = |branches: &[Branch], up_to: usize, complete: bool| -> SolutionSet {
        let mut roots: Vec<Vec<u32>> =
            branches.iter().map(|b| b.coeffs[..up_to.min(b.coeffs.len())].to_vec()).collect();
        roots.sort();
        roots.dedup();
        SolutionSet {
            precision: up_to,
            roots: roots.iter().map(|c| Series::from_prefix(p, c)).collect(),
            complete,
        }
    };

    for m in 0..sweep {
        let constrained = prefix.and_then(|pre| pre.get(m)).map(|&t| (t as u64 % q) as u32);
        let mut children: Vec<Branch> = Vec::new();
        let mut capped = false;
        'level: for br in &branches {
            let candidates: Vec<u32> = match constrained {
                Some(t) => vec![t],
                None => (0..p.get()).collect(),
            };
            for t in candidates {
                let hasse = extend_hasse(&br.hasse, t, m, &pascal, q);
                if hasse[0][m] != 0 {
                    continue;
                }
                if children.len() == opts.max_branches {
                    capped = true;
                    break 'level;
                }
                let mut coeffs = br.coeffs.clone();
                coeffs.push(t);
                children.push(Branch { coeffs, hasse });
            }
        }
        if capped {
            // Report the survivors of the last fully explored level.
            return Ok(collect(&branches, m.min(precision), false));
        }
        branches = children;
        if branches.is_empty() {
            return Ok(SolutionSet { precision, roots: Vec::new(), complete: true });
        }
    }

    Ok(collect(&branches, precision, true))
}

/// Necessary condition for an honest prefix: E(x, prefix) = 0 mod x^len.
pub fn verify_prefix(e: &BiPolyFp, prefix: &[u32]) -> bool {
    e.eval_at_series(&Series::from_prefix(e.modulus(), prefix)).is_zero()
}

/// Coefficient n of the unique oracle root selected by the prefix.
pub fn naive_coeff(e: &BiPolyFp, prefix: &[u32], n: usize, opts: &SolveOptions) -> Result<Fp> {
    let p = e.modulus();
    if n < prefix.len() {
        return Ok(Fp::new(p, prefix[n] as u64));
    }
    let sol = solve_series(e, n + 1, Some(prefix), opts)?;
    if !sol.complete {
        return Err(Error::AmbiguousBranch { found: sol.roots.len() });
    }
    match sol.roots.len() {
        0 => Err(Error::EmptyBranch),
        1 => Ok(sol.roots[0].coeff(n)),
        found => Err(Error::AmbiguousBranch { found }),
    }
}

/// Least n with f_n != g_n, or None if the truncations agree throughout.
pub fn first_divergence(f: &Series, g: &Series) -> Result<Option<usize>> {
    if f.precision() != g.precision() {
        return Err(Error::PrecisionMismatch(f.precision(), g.precision()));
    }
    Ok(f.coeffs().iter().zip(g.coeffs()).position(|(a, b)| a != b))
}

fn theorem_a_bound(p: Prime, deg_x: u32, deg_y: u32) -> Result<u64> {
    if deg_y < 1 {
        return Err(Error::DegreeTooSmall { needed: 1, got: deg_y });
    }
    let pd = p.pow(deg_y)?;
    (deg_y as u64 + 1)
        .checked_mul(pd - deg_y as u64 + 1)
        .and_then(|v| v.checked_mul(deg_x as u64))
        .ok_or(Error::BoundOverflow)
}

/// h = (d+1)(p^d - d + 1) deg_x P for the integer input polynomial.
pub fn bound_h(p: Prime, poly: &BiPolyZ) -> Result<u64> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (dx, dy) = poly.degrees();
    theorem_a_bound(p, dx, dy)
}

/// The same expression evaluated on the mod-p reduction E: two distinct
/// roots of E must differ at some index not exceeding it.
pub fn bound_corollary_g(e: &BiPolyFp) -> Result<u64> {
    if e.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (dx, dy) = e.degrees();
    theorem_a_bound(e.modulus(), dx, dy)
}

/// (d^2 + d - 4)/2 * deg_x P, the characteristic-zero divergence bound;
/// meaningful only for d >= 2.
pub fn bound_prop_h(poly: &BiPolyZ) -> Result<u64> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (dx, dy) = poly.degrees();
    if dy < 2 {
        return Err(Error::DegreeTooSmall { needed: 2, got: dy });
    }
    let d = dy as u64;
    (d * d + d - 4)
        .checked_div(2)
        .and_then(|v| v.checked_mul(dx as u64))
        .ok_or(Error::BoundOverflow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoly::parse_bipoly;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn reduced(text: &str, q: u32) -> BiPolyFp {
        parse_bipoly(text).unwrap().content_normalize().unwrap().reduce_mod_p(p(q))
    }

    fn opts() -> SolveOptions {
        SolveOptions::default()
    }

    #[test]
    fn catalan_roots_mod_2() {
        let e = reduced("y^2 - y + x", 2);
        let sol = solve_series(&e, 9, None, &opts()).unwrap();
        assert!(sol.complete);
        let want_a = [0u32, 1, 1, 0, 1, 0, 0, 0, 1];
        let want_b = [1u32, 1, 1, 0, 1, 0, 0, 0, 1];
        assert_eq!(sol.roots.len(), 2);
        assert_eq!(sol.roots[0].coeffs(), &want_a);
        assert_eq!(sol.roots[1].coeffs(), &want_b);
    }

    #[test]
    fn plus_minus_x_mod_3() {
        let e = reduced("y^2 - x^2", 3);
        let sol = solve_series(&e, 4, None, &opts()).unwrap();
        assert!(sol.complete);
        assert_eq!(sol.roots.len(), 2);
        assert_eq!(sol.roots[0].coeffs(), &[0, 1, 0, 0]);
        assert_eq!(sol.roots[1].coeffs(), &[0, 2, 0, 0]);
    }

    #[test]
    fn single_linear_root() {
        let e = reduced("y - x", 5);
        let sol = solve_series(&e, 3, None, &opts()).unwrap();
        assert!(sol.complete);
        assert_eq!(sol.roots.len(), 1);
        assert_eq!(sol.roots[0].coeffs(), &[0, 1, 0]);
    }

    #[test]
    fn branch_cap_reports_incomplete() {
        // Both linear-term choices survive level 1, so a cap of one branch
        // trips immediately and the survivors of level 0 come back.
        let e = reduced("y^2 - x^2", 3);
        let sol = solve_series(&e, 4, None, &SolveOptions { max_branches: 1 }).unwrap();
        assert!(!sol.complete);
        assert!(sol.precision < 4);
        for r in &sol.roots {
            assert!(e.eval_at_series(r).is_zero());
        }

        // y^2 + x^2 mod 2 leaves coefficients f_j with 2j >= sweep depth
        // unconstrained, so the live set doubles per level near the end and
        // the cap trips even with room for thousands of branches.
        let e = reduced("y^2 - x^2", 2);
        let sol = solve_series(&e, 64, None, &SolveOptions { max_branches: 4000 }).unwrap();
        assert!(!sol.complete);
        for r in &sol.roots {
            assert!(e.eval_at_series(r).is_zero());
        }
    }

    #[test]
    fn verify_prefix_examples() {
        let e = reduced("y^2 - y + x", 2);
        assert!(verify_prefix(&e, &[0, 1, 1, 0, 1, 0, 0, 0, 1, 0]));
        assert!(verify_prefix(&e, &[1, 1, 1, 0, 1, 0, 0, 0, 1, 0]));
        assert!(!verify_prefix(&e, &[0, 1, 0, 0, 1, 0, 0, 0, 1, 0]));
    }

    #[test]
    fn verify_prefix_is_monotone() {
        let e = reduced("y - 1 - x*y^2", 3);
        let sol = solve_series(&e, 24, None, &opts()).unwrap();
        let root = &sol.roots[0];
        for len in (0..=24).rev() {
            assert!(verify_prefix(&e, &root.coeffs()[..len]));
        }
        // and a corrupted prefix fails from the corruption point on
        let mut bad = root.coeffs().to_vec();
        bad[20] = (bad[20] + 1) % 3;
        assert!(!verify_prefix(&e, &bad));
        assert!(verify_prefix(&e, &bad[..20]));
    }

    #[test]
    fn naive_coeff_examples() {
        let e3 = reduced("y - y^2 - x", 3);
        let prefix = [0u32, 1, 1, 2];
        assert_eq!(naive_coeff(&e3, &prefix, 6, &opts()).unwrap().value(), 0);
        assert_eq!(naive_coeff(&e3, &prefix, 2, &opts()).unwrap().value(), 1);

        let e2 = reduced("y - y^2 - x", 2);
        assert_eq!(naive_coeff(&e2, &[0, 1], 8, &opts()).unwrap().value(), 1);

        // Without enough prefix to pin the branch, both roots survive.
        assert!(matches!(
            naive_coeff(&e2, &[], 3, &opts()),
            Err(Error::AmbiguousBranch { found: 2 })
        ));
        // An impossible prefix kills every branch.
        assert!(matches!(naive_coeff(&e2, &[0, 0, 1], 3, &opts()), Err(Error::EmptyBranch)));
    }

    #[test]
    fn first_divergence_examples() {
        let x = Series::new(p(3), [0u64, 1, 0, 0]);
        let two_x = Series::new(p(3), [0u64, 2, 0, 0]);
        assert_eq!(first_divergence(&x, &two_x).unwrap(), Some(1));
        assert_eq!(first_divergence(&x, &x.clone()).unwrap(), None);

        let e = reduced("y^2 - y + x", 2);
        let sol = solve_series(&e, 9, None, &opts()).unwrap();
        assert_eq!(first_divergence(&sol.roots[0], &sol.roots[1]).unwrap(), Some(0));

        let short = Series::new(p(3), [0u64, 1]);
        assert!(matches!(first_divergence(&x, &short), Err(Error::PrecisionMismatch(4, 2))));
    }

    #[test]
    fn bound_examples() {
        let cat = parse_bipoly("y^2 - y + x").unwrap();
        assert_eq!(bound_h(p(2), &cat).unwrap(), 9);

        let sq = parse_bipoly("y^2 - x^2").unwrap();
        let e3 = sq.content_normalize().unwrap().reduce_mod_p(p(3));
        assert_eq!(bound_corollary_g(&e3).unwrap(), 48);
        assert_eq!(bound_prop_h(&sq).unwrap(), 2);

        assert!(matches!(
            bound_prop_h(&parse_bipoly("y - x").unwrap()),
            Err(Error::DegreeTooSmall { needed: 2, got: 1 })
        ));
    }

    #[test]
    fn catalan_mod_2_pattern_to_4096() {
        let e = reduced("y - y^2 - x", 2);
        let prefix = [0u32, 1, 1, 0, 1, 0, 0, 0, 1, 0];
        let n = 1 << 12;
        let sol = solve_series(&e, n, Some(&prefix), &opts()).unwrap();
        assert!(sol.complete);
        assert_eq!(sol.roots.len(), 1);
        let root = &sol.roots[0];
        for i in 0..n {
            let expect = (i as u64).is_power_of_two() as u32;
            assert_eq!(root.coeff(i).value(), expect, "at {i}");
        }
    }
}
