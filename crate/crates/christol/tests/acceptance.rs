//! Acceptance suite. Each test prints one PASS line (plus per-instance skip
//! notes where an instance has no usable oracle ground truth); a failed
//! assertion fails the criterion. Run with `--nocapture` to see the lines.

use christol::bipoly::{parse_bipoly, BiPolyFp};
use christol::compiler::{
    change_of_variable, compile_equation, CompileOptions, Compilation, PrefixSource,
    DEFAULT_DIM_CAP,
};
use christol::dfao::{build_dfao, Dfao};
use christol::fp::{Fp, Prime};
use christol::kernel::{digits_base_p, f_coeff, f_coeff_with_ops, f_range, BigIndex};
use christol::mahler::{derive_mahler, power_representation};
use christol::oracle::{
    bound_corollary_g, bound_h, bound_prop_h, first_divergence, solve_series, SolveOptions,
};
use christol::poly::{digit_coeff_extract, Poly, Series};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;
use std::time::Instant;

const CORPUS_POLYS: [&str; 5] =
    ["y^2 - y + x", "y^2 - x^2", "(1+x)*y^2 + y + x", "y^3 + x*y + x^2", "y - 1 - x*y^2"];
const CORPUS_PRIMES: [u32; 3] = [2, 3, 5];
const ORACLE_PRECISION: usize = 512;

/// Integer Catalan numbers c_1..c_24 (c_0 := 0 for the generating function).
const CATALAN: [u64; 24] = [
    1,
    1,
    2,
    5,
    14,
    42,
    132,
    429,
    1430,
    4862,
    16796,
    58786,
    208012,
    742900,
    2674440,
    9694845,
    35357670,
    129644790,
    477638700,
    1767263190,
    6564120420,
    24466267020,
    91482563640,
    343059613650,
];

fn prime(q: u32) -> Prime {
    Prime::new(q).unwrap()
}

fn catalan_prefix(q: u32, len: usize) -> Vec<u32> {
    assert!(len <= CATALAN.len() + 1);
    let mut prefix = vec![0u32];
    prefix.extend(CATALAN.iter().take(len - 1).map(|&c| (c % q as u64) as u32));
    prefix
}

/// The paper's five-state automaton for the Catalan numbers mod 3, reading
/// the ternary digits of n - 1 least significant first. States in order
/// a_1, b_1, c_2, d_0, e_2; outputs are the subscripts.
fn catalan_mod3_fixture() -> Dfao {
    Dfao::from_parts(
        prime(3),
        vec![1, 1, 2, 0, 2],
        0,
        vec![
            vec![1, 1, 4],
            vec![1, 2, 3],
            vec![2, 1, 3],
            vec![3, 3, 3],
            vec![2, 3, 4],
        ],
        1,
    )
    .unwrap()
}

struct CorpusInstance {
    q: u32,
    text: &'static str,
    reduced: BiPolyFp,
    /// Oracle roots to ORACLE_PRECISION; None when the oracle could not
    /// complete the sweep (branch cap) and ground truth is unavailable.
    roots: Option<Vec<Series>>,
    /// One compilation per root, same order.
    compiled: Vec<Compilation>,
}

fn corpus() -> &'static [CorpusInstance] {
    static CORPUS: OnceLock<Vec<CorpusInstance>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut out = Vec::new();
        for q in CORPUS_PRIMES {
            let p = prime(q);
            for text in CORPUS_POLYS {
                let reduced =
                    parse_bipoly(text).unwrap().content_normalize().unwrap().reduce_mod_p(p);
                let sol = solve_series(
                    &reduced,
                    ORACLE_PRECISION,
                    None,
                    &SolveOptions { max_branches: 10_000 },
                )
                .unwrap();
                let roots = sol.complete.then_some(sol.roots);
                let compiled = roots
                    .as_deref()
                    .unwrap_or(&[])
                    .iter()
                    .map(|root| {
                        compile_equation(
                            &reduced,
                            text.to_string(),
                            &PrefixSource::Explicit(root.coeffs().to_vec()),
                            &CompileOptions::default(),
                        )
                        .unwrap_or_else(|err| panic!("compile {text} mod {q}: {err}"))
                    })
                    .collect();
                out.push(CorpusInstance { q, text, reduced, roots, compiled });
            }
        }
        out
    })
}

fn skip_note(inst: &CorpusInstance) -> String {
    format!(
        "      skipped {} mod {}: oracle sweep hit the branch cap, no complete ground truth",
        inst.text, inst.q
    )
}

fn catalan_mod2() -> &'static Compilation {
    static ONE: OnceLock<Compilation> = OnceLock::new();
    ONE.get_or_init(|| {
        let p = prime(2);
        let reduced =
            parse_bipoly("y^2 - y + x").unwrap().content_normalize().unwrap().reduce_mod_p(p);
        let h = bound_h(p, &parse_bipoly("y^2 - y + x").unwrap()).unwrap();
        assert_eq!(h, 9);
        compile_equation(
            &reduced,
            "y^2 - y + x".to_string(),
            &PrefixSource::Explicit(catalan_prefix(2, h as usize + 1)),
            &CompileOptions::default(),
        )
        .unwrap()
    })
}

fn catalan_mod3() -> &'static Compilation {
    static ONE: OnceLock<Compilation> = OnceLock::new();
    ONE.get_or_init(|| {
        let p = prime(3);
        let reduced =
            parse_bipoly("y^2 - y + x").unwrap().content_normalize().unwrap().reduce_mod_p(p);
        let h = bound_h(p, &parse_bipoly("y^2 - y + x").unwrap()).unwrap();
        assert_eq!(h, 24);
        compile_equation(
            &reduced,
            "y^2 - y + x".to_string(),
            &PrefixSource::Explicit(catalan_prefix(3, h as usize + 1)),
            &CompileOptions::default(),
        )
        .unwrap()
    })
}

#[test]
fn a01_catalan_mod_2_power_of_two_pattern() {
    let start = Instant::now();
    let cs = &catalan_mod2().compiled;
    let top = 1u64 << 16;
    let values = f_range(cs, 0, top).unwrap();
    for n in 1..=top {
        let expect = n.is_power_of_two() as u32;
        assert_eq!(values[n as usize].value(), expect, "f_{n} mod 2");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}, budget 10 s");
    println!("[ 1/12] catalan mod 2: f_n = 1 iff n is a power of two, n <= 2^16 ({elapsed:?}): PASS");
}

#[test]
fn a02_catalan_mod_3_matches_paper_automaton() {
    let start = Instant::now();
    let cs = &catalan_mod3().compiled;
    let fixture = catalan_mod3_fixture();
    let top = 3u64.pow(10);
    let values = f_range(cs, 1, top).unwrap();
    for n in 1..=top {
        let from_fixture = fixture.run(&BigIndex::from(n)).unwrap();
        assert_eq!(values[(n - 1) as usize], from_fixture, "disagreement at n = {n}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, budget 60 s");
    println!("[ 2/12] catalan mod 3 equals the five-state reference automaton, n <= 3^10 ({elapsed:?}): PASS");
}

#[test]
fn a03_catalan_mod_3_spot_values() {
    let cs = &catalan_mod3().compiled;
    let got: Vec<u32> = (1u64..=6).map(|n| f_coeff(cs, &BigIndex::from(n)).value()).collect();
    assert_eq!(got, vec![1, 1, 2, 2, 2, 0]);
    println!("[ 3/12] catalan mod 3 spot values f_1..f_6 = (1,1,2,2,2,0): PASS");
}

#[test]
fn a04_oracle_equivalence_corpus() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x04);
    let mut checked = 0usize;
    let mut skipped = Vec::new();
    for inst in corpus() {
        let Some(roots) = &inst.roots else {
            skipped.push(skip_note(inst));
            continue;
        };
        for (root, comp) in roots.iter().zip(&inst.compiled) {
            let cs = &comp.compiled;
            let range = f_range(cs, 0, ORACLE_PRECISION as u64 - 1).unwrap();
            for n in 0..ORACLE_PRECISION {
                assert_eq!(
                    range[n],
                    root.coeff(n),
                    "{} mod {}: range query disagrees with the oracle at n = {n}",
                    inst.text,
                    inst.q
                );
            }
            // The same through single queries, on a sample.
            for _ in 0..12 {
                let n = rng.gen_range(0..ORACLE_PRECISION);
                assert_eq!(
                    f_coeff(cs, &BigIndex::from(n as u64)),
                    root.coeff(n),
                    "{} mod {}: single query disagrees at n = {n}",
                    inst.text,
                    inst.q
                );
            }
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}, budget 5 min");
    println!(
        "[ 4/12] oracle equivalence, n < {ORACLE_PRECISION} on {checked} compiled roots ({} skips, {elapsed:?}): PASS",
        skipped.len()
    );
    for s in skipped {
        println!("{s}");
    }
}

#[test]
fn a05_degree_bounds_on_every_derivation() {
    let mut derivations = 0usize;
    for inst in corpus() {
        let eq = derive_mahler(&inst.reduced).unwrap();
        let (deg_x, d) = inst.reduced.degrees();
        let bound = (d as u64 + 1) * ((inst.q as u64).pow(d) - d as u64 + 1) * deg_x as u64;
        assert!(
            eq.c0().degree().unwrap_or(0) as u64 <= bound,
            "{} mod {}: deg c_0 exceeds (d+1)(p^d-d+1)deg_x E",
            inst.text,
            inst.q
        );
        assert!(eq.order() as u32 <= d, "{} mod {}: k > d", inst.text, inst.q);
        // Intermediate power representations carry their own asserted bound;
        // recompute the checkpoints here so the acceptance run exercises it.
        let coeffs = inst.reduced.y_coefficients();
        for i in 0..=d {
            let n = (inst.q as u64).pow(i);
            let rep = power_representation(&coeffs, n);
            let max_deg = rep.numer.iter().filter_map(|a| a.degree()).max().unwrap_or(0);
            if n >= d as u64 {
                assert!(
                    max_deg as u64 <= (n - d as u64 + 1) * deg_x as u64,
                    "{} mod {}: power representation degree bound at n = {n}",
                    inst.text,
                    inst.q
                );
            }
        }
        derivations += 1;
    }
    let _ = derivations;
    println!("[ 5/12] degree bounds (deg c_0, power representations, k <= d) on {derivations} derivations: PASS");
}

#[test]
fn a06_structural_invariants() {
    let mut checked = 0usize;
    for inst in corpus() {
        for comp in &inst.compiled {
            let cs = &comp.compiled;
            let p = cs.modulus().get();
            // u A_0 = u
            for col in 0..cs.dim {
                let mut acc = 0u64;
                for row in 0..cs.dim {
                    acc += cs.u[row] as u64 * cs.mats[0].get(row, col) as u64;
                }
                assert_eq!(
                    (acc % p as u64) as u32,
                    cs.u[col],
                    "{} mod {}: u A_0 != u",
                    inst.text,
                    inst.q
                );
            }
            // v is a standard basis column
            assert_eq!(cs.v.iter().filter(|&&x| x == 1).count(), 1);
            assert!(cs.v.iter().all(|&x| x <= 1));
            // e = (D+1)(k+2)
            assert_eq!(cs.dim, (cs.basis_deg + 1) * (cs.mahler_k + 2));
            // b's negative part cancels exactly: recompute the change of
            // variable and demand success plus a polynomial b.
            if !comp.equation.is_zero_forcing() {
                let cov = change_of_variable(&comp.equation, &comp.prefix, DEFAULT_DIM_CAP)
                    .expect("negative part must cancel");
                let _ = cov.b;
            }
            checked += 1;
        }
    }
    println!("[ 6/12] structural invariants (u A_0 = u, v standard, e = (D+1)(k+2), b cancellation) on {checked} compilations: PASS");
}

#[test]
fn a07_section_operator_property_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x07);
    let cases = 1000;
    for q in CORPUS_PRIMES {
        let p = prime(q);
        let rand_poly = |rng: &mut ChaCha8Rng, max_len: usize| {
            let len = rng.gen_range(0..=max_len);
            Poly::new(p, (0..len).map(|_| rng.gen_range(0..q as u64)))
        };
        // Frobenius substitution equals powering (k = 1, 2).
        for _ in 0..cases {
            let z = rand_poly(&mut rng, 12);
            for k in [1u32, 2] {
                let pk = (q as u64).pow(k);
                assert_eq!(z.pow(pk), z.frobenius(k).unwrap(), "z^(p^k) != z(x^(p^k)) mod {q}");
            }
        }
        // Linearity of sections.
        for _ in 0..cases {
            let (u, v) = (rand_poly(&mut rng, 16), rand_poly(&mut rng, 16));
            let (a, b) = (
                Fp::new(p, rng.gen_range(0..q as u64)),
                Fp::new(p, rng.gen_range(0..q as u64)),
            );
            let r = rng.gen_range(0..q);
            let lhs = u.mul_scalar(a).add(&v.mul_scalar(b)).section(r);
            let rhs = u.section(r).mul_scalar(a).add(&v.section(r).mul_scalar(b));
            assert_eq!(lhs, rhs, "linearity mod {q}");
        }
        // Product rule: S_r(uv) = sum_{s+t = r mod p} x^((s+t)/p) S_s(u) S_t(v).
        for _ in 0..cases {
            let (u, v) = (rand_poly(&mut rng, 14), rand_poly(&mut rng, 14));
            let r = rng.gen_range(0..q);
            let mut rhs = Poly::zero(p);
            for s in 0..q {
                for t in 0..q {
                    if (s + t) % q == r {
                        let shift = ((s + t) / q) as usize;
                        rhs = rhs.add(&u.section(s).mul(&v.section(t)).shift_up(shift));
                    }
                }
            }
            assert_eq!(u.mul(&v).section(r), rhs, "product rule mod {q}");
        }
        // S_r(u(x) v(x^p)) = S_r(u) v.
        for _ in 0..cases {
            let (u, v) = (rand_poly(&mut rng, 16), rand_poly(&mut rng, 8));
            let r = rng.gen_range(0..q);
            let lhs = u.mul(&v.frobenius(1).unwrap()).section(r);
            assert_eq!(lhs, u.section(r).mul(&v), "S_r(u v(x^p)) mod {q}");
        }
        // Digit extraction equals the direct coefficient read.
        for _ in 0..10_000 {
            let u = rand_poly(&mut rng, 24);
            let n = rng.gen_range(0..32u64);
            assert_eq!(
                digit_coeff_extract(&u, n),
                u.coeff(n as usize),
                "digit extraction mod {q}"
            );
        }
        // Some section of a nonzero polynomial is nonzero, and the witness
        // digit construction finds one.
        for _ in 0..cases {
            let u = rand_poly(&mut rng, 16);
            if u.is_zero() {
                continue;
            }
            assert!((0..q).any(|r| !u.section(r).is_zero()), "D.5 existence mod {q}");
            let witness = (u.order().unwrap() as u64 % q as u64) as u32;
            assert!(!u.section(witness).is_zero(), "D.5 witness digit mod {q}");
        }
        // deg S_r(a) <= deg(a)/p.
        for _ in 0..cases {
            let u = rand_poly(&mut rng, 20);
            let r = rng.gen_range(0..q);
            let s = u.section(r);
            if let (Some(ds), Some(du)) = (s.degree(), u.degree()) {
                assert!(ds <= du / q as usize, "degree drop mod {q}");
            }
        }
        // Reconstruction: u = sum_r x^r (S_r u)(x^p).
        for _ in 0..cases {
            let u = rand_poly(&mut rng, 20);
            let mut back = Poly::zero(p);
            for r in 0..q {
                back = back.add(&u.section(r).frobenius(1).unwrap().shift_up(r as usize));
            }
            assert_eq!(back, u, "reconstruction mod {q}");
        }
    }
    println!("[ 7/12] section operator property suites, >= 1000 cases per law per p in {{2,3,5}}: PASS");
}

#[test]
fn a08_mahler_residuals() {
    let mut checked = 0usize;
    let mut skipped = Vec::new();
    for inst in corpus() {
        let Some(roots) = &inst.roots else {
            skipped.push(skip_note(inst));
            continue;
        };
        let eq = derive_mahler(&inst.reduced).unwrap();
        for root in roots {
            let truncated = root.truncate(256);
            assert!(
                eq.residual(&truncated).is_zero(),
                "{} mod {}: Mahler residual nonzero",
                inst.text,
                inst.q
            );
            checked += 1;
        }
    }
    println!(
        "[ 8/12] Mahler residual = 0 mod x^256 for {checked} oracle roots ({} skips): PASS",
        skipped.len()
    );
    for s in skipped {
        println!("{s}");
    }
}

#[test]
fn a09_large_index_performance() {
    let cs = &catalan_mod3().compiled;
    let fixture = catalan_mod3_fixture();

    let n = BigIndex::from_decimal(&format!("1{}", "0".repeat(500))).unwrap();
    let start = Instant::now();
    let value = f_coeff(cs, &n);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "10^500 query took {elapsed:?}");
    assert_eq!(value, fixture.run(&n).unwrap(), "kernel and reference automaton disagree at 10^500");

    let mut ratios = Vec::new();
    for exp in [3usize, 6, 12, 24] {
        let n = BigIndex::from_decimal(&format!("1{}", "0".repeat(exp))).unwrap();
        let digits = digits_base_p(&n, cs.modulus()).len() as f64;
        let (value, ops) = f_coeff_with_ops(cs, &n);
        assert_eq!(value, fixture.run(&n).unwrap(), "disagreement at 10^{exp}");
        ratios.push(ops as f64 / digits);
    }
    let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
    assert!(
        max / min <= 2.0,
        "field-operation count not within a factor-2 linear fit in log n: {ratios:?}"
    );
    println!(
        "[ 9/12] large indices: 10^500 in {elapsed:?} and matches the reference automaton; op count linear in log n (spread {:.3}): PASS",
        max / min
    );
}

#[test]
fn a10_corollary_g_divergence_bounds() {
    // The worked pair: y^2 - x^2 mod 3 has roots x and 2x.
    let p3 = prime(3);
    let sq = parse_bipoly("y^2 - x^2").unwrap().content_normalize().unwrap().reduce_mod_p(p3);
    let sol = solve_series(&sq, 4, None, &SolveOptions::default()).unwrap();
    assert_eq!(sol.roots.len(), 2);
    let div = first_divergence(&sol.roots[0], &sol.roots[1]).unwrap();
    assert_eq!(div, Some(1));
    assert_eq!(bound_corollary_g(&sq).unwrap(), 48);

    let mut pairs = 0usize;
    let mut skipped = Vec::new();
    for inst in corpus() {
        let Some(roots) = &inst.roots else {
            skipped.push(skip_note(inst));
            continue;
        };
        let bound = bound_corollary_g(&inst.reduced).unwrap();
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                let div = first_divergence(&roots[i], &roots[j])
                    .unwrap()
                    .expect("distinct oracle roots must diverge");
                assert!(
                    div as u64 <= bound,
                    "{} mod {}: divergence {div} over the bound {bound}",
                    inst.text,
                    inst.q
                );
                pairs += 1;
            }
        }
    }
    println!(
        "[10/12] Corollary-G divergence bound on {pairs} root pairs, and x vs 2x diverges at 1 <= 48 ({} skips): PASS",
        skipped.len()
    );
    for s in skipped {
        println!("{s}");
    }
}

#[test]
fn a11_bounds_calculator() {
    let cat = parse_bipoly("y^2 - y + x").unwrap();
    assert_eq!(bound_h(prime(2), &cat).unwrap(), 9);
    let sq = parse_bipoly("y^2 - x^2").unwrap();
    let sq3 = sq.content_normalize().unwrap().reduce_mod_p(prime(3));
    assert_eq!(bound_corollary_g(&sq3).unwrap(), 48);
    assert_eq!(bound_prop_h(&sq).unwrap(), 2);
    println!("[11/12] bound calculators: h = 9, corollary-G = 48, characteristic-zero = 2: PASS");
}

#[test]
fn a12_dfao_consistency() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x12);
    let mut automata = 0usize;
    for inst in corpus() {
        for comp in &inst.compiled {
            let cs = &comp.compiled;
            let automaton = build_dfao(cs, 1 << 20).unwrap();
            let kernel_values = f_range(cs, 0, 10_000).unwrap();
            for (n, expect) in kernel_values.iter().enumerate() {
                let got = automaton.run(&BigIndex::from(n as u64)).unwrap();
                assert_eq!(
                    got, *expect,
                    "{} mod {}: automaton vs kernel at n = {n}",
                    inst.text, inst.q
                );
            }
            let minimized = automaton.minimize();
            assert!(minimized.state_count() <= automaton.state_count());
            for _ in 0..10_000 {
                let len = rng.gen_range(0..=24usize);
                let digits: Vec<u32> =
                    (0..len).map(|_| rng.gen_range(0..inst.q)).collect();
                assert_eq!(
                    automaton.run_digits(&digits),
                    minimized.run_digits(&digits),
                    "{} mod {}: minimization changed an output",
                    inst.text,
                    inst.q
                );
            }
            automata += 1;
        }
    }
    let elapsed = start.elapsed();
    println!(
        "[12/12] automaton = kernel for n <= 10^4 and minimization preserves outputs, {automata} automata ({elapsed:?}): PASS"
    );
}
