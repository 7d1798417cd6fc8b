//! Coefficient extraction for algebraic power series over F_p.
//!
//! An algebraic power series f in F_p[[x]] is given by a bivariate equation
//! P(x, f(x)) = 0 together with finitely many initial coefficients. This
//! crate compiles that data into a matrix linear representation
//! (a, c, e, u, A_0..A_{p-1}, v) with
//!
//! ```text
//! f_n = [x^n]c(x) + sum_{m=n-deg a}^{n} [x^{n-m}]a(x) * u A_{m_l}...A_{m_0} v
//! ```
//!
//! where (m_l...m_0)_p is the base-p expansion of m, so a coefficient query
//! costs O(log n) field operations however large n is. Along the way it
//! derives the Mahler equation of f, and from the compiled form it can emit
//! the equivalent finite automaton with output.
//!
//! Module map:
//!
//! - [`fp`]: the field F_p.
//! - [`poly`]: dense polynomials, Laurent polynomials, truncated series,
//!   section operators, Frobenius substitution.
//! - [`bipoly`]: bivariate polynomials over Z and F_p, parsing and reduction.
//! - [`linalg`]: polynomial matrix determinants and dependency relations.
//! - [`mahler`]: derivation of sum c_i(x) f(x^{p^i}) = 0 from the equation.
//! - [`compiler`]: the linear representation itself.
//! - [`kernel`]: O(log n) coefficient queries against a compiled series.
//! - [`oracle`]: brute-force root expansion, prefix checks, bound formulas.
//! - [`dfao`]: automata with output, minimization, DOT/JSON export.

pub mod bipoly;
pub mod compiler;
pub mod dfao;
pub mod error;
pub mod fp;
pub mod kernel;
pub mod linalg;
pub mod mahler;
pub mod oracle;
pub mod poly;

pub use error::{Error, Result};
