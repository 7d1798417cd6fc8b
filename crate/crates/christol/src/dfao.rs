//! Deterministic finite automata with output.
//!
//! A compiled series induces one: states are the distinct columns reachable
//! from the start column under s -> A_r s, the output of a state is u.s, and
//! a run feeds the base-p digits of the index least significant first. The
//! module also hosts externally specified automata (via `from_parts` or the
//! JSON schema), whose index convention may differ by an offset: the
//! automaton reads the digits of n - offset.

use crate::compiler::CompiledSeries;
use crate::error::{Error, Result};
use crate::fp::{Fp, Prime};
use crate::kernel::{digits_base_p, BigIndex};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfao {
    p: Prime,
    outputs: Vec<u32>,
    initial: usize,
    /// transitions[state][digit]
    transitions: Vec<Vec<usize>>,
    offset: u32,
}

impl Dfao {
    pub fn from_parts(
        p: Prime,
        outputs: Vec<u32>,
        initial: usize,
        transitions: Vec<Vec<usize>>,
        offset: u32,
    ) -> Result<Self> {
        let states = outputs.len();
        if states == 0 {
            return Err(Error::Schema { path: "states".into(), msg: "need at least one state".into() });
        }
        if initial >= states {
            return Err(Error::Schema { path: "initial".into(), msg: format!("state {initial} out of range") });
        }
        if offset > 1 {
            return Err(Error::Schema { path: "offset".into(), msg: "offset must be 0 or 1".into() });
        }
        if let Some(i) = outputs.iter().position(|&o| o >= p.get()) {
            return Err(Error::Schema { path: format!("states[{i}]"), msg: format!("output not reduced mod {p}") });
        }
        if transitions.len() != states {
            return Err(Error::Schema {
                path: "transitions".into(),
                msg: format!("expected {states} rows, got {}", transitions.len()),
            });
        }
        for (s, row) in transitions.iter().enumerate() {
            if row.len() != p.get() as usize {
                return Err(Error::Schema {
                    path: format!("transitions[{s}]"),
                    msg: format!("expected {} entries, got {}", p.get(), row.len()),
                });
            }
            if let Some(d) = row.iter().position(|&t| t >= states) {
                return Err(Error::Schema {
                    path: format!("transitions[{s}][{d}]"),
                    msg: "target state out of range".into(),
                });
            }
        }
        Ok(Dfao { p, outputs, initial, transitions, offset })
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn state_count(&self) -> usize {
        self.outputs.len()
    }

    pub fn offset(&self) -> u32 {
        self.offset
    }

    pub fn outputs(&self) -> &[u32] {
        &self.outputs
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn transitions(&self) -> &[Vec<usize>] {
        &self.transitions
    }

    /// Feed a digit string (least significant first) and return the final
    /// state's output. No offset handling.
    pub fn run_digits(&self, digits: &[u32]) -> Fp {
        let mut state = self.initial;
        for &d in digits {
            state = self.transitions[state][d as usize];
        }
        Fp::new(self.p, self.outputs[state] as u64)
    }

    /// Output for index n: feeds the base-p digits of n - offset.
    pub fn run(&self, n: &BigIndex) -> Result<Fp> {
        let shifted = n.checked_sub(self.offset as u64).ok_or_else(|| Error::IndexBelowOffset {
            index: n.to_string(),
            offset: self.offset,
        })?;
        Ok(self.run_digits(&digits_base_p(&shifted, self.p)))
    }

    /// Moore minimization: drop unreachable states, then refine the
    /// output-seeded partition until stable. Output-equivalent on every
    /// digit string, and minimal among reachable-state automata with this
    /// convention.
    pub fn minimize(&self) -> Dfao {
        let q = self.p.get() as usize;

        // Reachable states, renumbered by discovery order.
        let mut order: Vec<usize> = vec![self.initial];
        let mut seen: HashMap<usize, usize> = HashMap::from([(self.initial, 0)]);
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            for d in 0..q {
                let t = self.transitions[s][d];
                if !seen.contains_key(&t) {
                    seen.insert(t, order.len());
                    order.push(t);
                }
            }
            i += 1;
        }
        let outputs: Vec<u32> = order.iter().map(|&s| self.outputs[s]).collect();
        let transitions: Vec<Vec<usize>> = order
            .iter()
            .map(|&s| (0..q).map(|d| seen[&self.transitions[s][d]]).collect())
            .collect();
        let n = order.len();

        // Partition refinement; class ids assigned by first occurrence so
        // the result is deterministic.
        let mut class: Vec<usize> = {
            let mut first: HashMap<u32, usize> = HashMap::new();
            let mut next = 0;
            outputs
                .iter()
                .map(|&o| {
                    *first.entry(o).or_insert_with(|| {
                        let id = next;
                        next += 1;
                        id
                    })
                })
                .collect()
        };
        loop {
            // First-occurrence ids make the labeling canonical for the
            // partition, so vector equality is a valid fixed-point test.
            let mut signature_ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut next_class = vec![0usize; n];
            for s in 0..n {
                let sig = (class[s], (0..q).map(|d| class[transitions[s][d]]).collect::<Vec<_>>());
                let fresh = signature_ids.len();
                next_class[s] = *signature_ids.entry(sig).or_insert(fresh);
            }
            if next_class == class {
                break;
            }
            class = next_class;
        }

        let class_count = class.iter().copied().max().unwrap() + 1;
        let mut rep = vec![usize::MAX; class_count];
        for s in 0..n {
            if rep[class[s]] == usize::MAX {
                rep[class[s]] = s;
            }
        }
        let outputs: Vec<u32> = rep.iter().map(|&s| outputs[s]).collect();
        let transitions: Vec<Vec<usize>> =
            rep.iter().map(|&s| (0..q).map(|d| class[transitions[s][d]]).collect()).collect();
        Dfao { p: self.p, outputs, initial: class[0], transitions, offset: self.offset }
    }

    /// DOT digraph: one node per state (label "name/output", initial drawn
    /// with a double circle), one edge per (state, digit).
    pub fn export_dot(&self) -> String {
        let mut out = String::from("digraph dfao {\n  rankdir=LR;\n");
        for (s, &o) in self.outputs.iter().enumerate() {
            let shape = if s == self.initial { "doublecircle" } else { "circle" };
            out.push_str(&format!("  s{s} [shape={shape}, label=\"s{s}/{o}\"];\n"));
        }
        for (s, row) in self.transitions.iter().enumerate() {
            for (d, &t) in row.iter().enumerate() {
                out.push_str(&format!("  s{s} -> s{t} [label=\"{d}\"];\n"));
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        let doc = DfaoDoc {
            format: 1,
            p: self.p.get(),
            states: self.outputs.clone(),
            initial: self.initial,
            transitions: self.transitions.clone(),
            offset: self.offset,
        };
        serde_json::to_string(&doc).expect("serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Dfao> {
        let doc: DfaoDoc = serde_json::from_str(text)?;
        if doc.format != 1 {
            return Err(Error::Schema { path: "format".into(), msg: format!("unsupported format {}", doc.format) });
        }
        let p = Prime::new(doc.p)
            .map_err(|_| Error::Schema { path: "p".into(), msg: format!("{} is not a supported prime", doc.p) })?;
        Dfao::from_parts(p, doc.states, doc.initial, doc.transitions, doc.offset)
    }
}

#[derive(Serialize, Deserialize)]
struct DfaoDoc {
    format: u32,
    p: u32,
    /// Output per state.
    states: Vec<u32>,
    initial: usize,
    /// State-major, digit-minor.
    transitions: Vec<Vec<usize>>,
    offset: u32,
}

/// The automaton of a compiled series: reachable columns from the start
/// column of f under s -> A_r s, outputs u.s, offset 0. The start column
/// encodes f = c + a h itself, so a run on the digits of n returns f_n.
pub fn build_dfao(cs: &CompiledSeries, state_cap: usize) -> Result<Dfao> {
    let q = cs.modulus().get();
    let start = cs.initial_f_column();
    let mut index: HashMap<Vec<u32>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut columns = vec![start];
    let mut outputs = vec![cs.u_dot(&columns[0])];
    let mut transitions: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    while next < columns.len() {
        let mut row = Vec::with_capacity(q as usize);
        for r in 0..q {
            let w = cs.mats[r as usize].matvec(&columns[next], q);
            let id = match index.get(&w) {
                Some(&id) => id,
                None => {
                    let id = columns.len();
                    if id >= state_cap {
                        return Err(Error::StateCapExceeded { reached: id + 1 });
                    }
                    index.insert(w.clone(), id);
                    outputs.push(cs.u_dot(&w));
                    columns.push(w);
                    id
                }
            };
            row.push(id);
        }
        transitions.push(row);
        next += 1;
    }
    Dfao::from_parts(cs.modulus(), outputs, 0, transitions, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::{compile_text, CompileOptions, PrefixSource};

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    /// The five-state automaton for the Catalan numbers mod 3; states
    /// a_1, b_1, c_2, d_0, e_2 in this order, reading digits of n - 1.
    pub fn catalan_mod3_fixture() -> Dfao {
        Dfao::from_parts(
            p(3),
            vec![1, 1, 2, 0, 2],
            0,
            vec![
                vec![1, 1, 4], // a -0,1-> b, -2-> e
                vec![1, 2, 3], // b -0-> b, -1-> c, -2-> d
                vec![2, 1, 3], // c -0-> c, -1-> b, -2-> d
                vec![3, 3, 3], // d absorbing
                vec![2, 3, 4], // e -0-> c, -1-> d, -2-> e
            ],
            1,
        )
        .unwrap()
    }

    #[test]
    fn fixture_run_examples() {
        let d = catalan_mod3_fixture();
        assert_eq!(d.run(&BigIndex::from(6)).unwrap().value(), 0);
        assert_eq!(d.run(&BigIndex::from(1)).unwrap().value(), 1);
        assert_eq!(d.run(&BigIndex::from(3)).unwrap().value(), 2);
        // below the offset
        assert!(matches!(d.run(&BigIndex::from(0)), Err(Error::IndexBelowOffset { .. })));
    }

    #[test]
    fn fixture_dot_counts() {
        let d = catalan_mod3_fixture();
        let dot = d.export_dot();
        let nodes = dot.lines().filter(|l| l.contains("shape=")).count();
        let edges = dot.lines().filter(|l| l.contains("->")).count();
        assert_eq!(nodes, 5);
        assert_eq!(edges, 15);
    }

    #[test]
    fn single_state_dot() {
        let d = Dfao::from_parts(p(3), vec![0], 0, vec![vec![0, 0, 0]], 0).unwrap();
        let dot = d.export_dot();
        assert_eq!(dot.lines().filter(|l| l.contains("shape=")).count(), 1);
        assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), 3);
    }

    #[test]
    fn json_round_trip() {
        let d = catalan_mod3_fixture();
        let back = Dfao::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);

        let mut v: serde_json::Value = serde_json::from_str(&d.to_json()).unwrap();
        v["transitions"][2] = serde_json::json!([0, 1]);
        match Dfao::from_json(&v.to_string()) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "transitions[2]"),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn catalan_mod_2_automaton_pattern() {
        let comp = compile_text(
            "y - y^2 - x",
            p(2),
            &PrefixSource::Explicit(vec![0, 1, 1, 0, 1, 0, 0, 0, 1, 0]),
            &CompileOptions::default(),
        )
        .unwrap();
        let d = build_dfao(&comp.compiled, 1 << 16).unwrap();
        for n in 0u64..(1 << 12) {
            let expect = n.is_power_of_two() as u32;
            assert_eq!(d.run(&BigIndex::from(n)).unwrap().value(), expect, "at n = {n}");
        }
    }

    #[test]
    fn zero_series_automaton_minimizes_to_one_absorbing_state() {
        let comp =
            compile_text("y^2", p(3), &PrefixSource::Auto, &CompileOptions::default()).unwrap();
        let d = build_dfao(&comp.compiled, 64).unwrap().minimize();
        assert_eq!(d.state_count(), 1);
        assert_eq!(d.outputs(), &[0]);
        assert_eq!(d.run(&BigIndex::from(12345u64)).unwrap().value(), 0);
    }

    #[test]
    fn state_cap_is_reported() {
        let comp = compile_text(
            "y - y^2 - x",
            p(2),
            &PrefixSource::Auto,
            &CompileOptions::default(),
        )
        .unwrap();
        assert!(matches!(
            build_dfao(&comp.compiled, 2),
            Err(Error::StateCapExceeded { .. })
        ));
    }

    #[test]
    fn minimize_merges_duplicate_states() {
        // Two copies of the same behavior glued together.
        let d = Dfao::from_parts(
            p(2),
            vec![0, 1, 1],
            0,
            vec![vec![1, 2], vec![1, 1], vec![2, 2]],
            0,
        )
        .unwrap();
        let m = d.minimize();
        assert_eq!(m.state_count(), 2);
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..2000 {
            let len = (next() % 12) as usize;
            let digits: Vec<u32> = (0..len).map(|_| (next() % 2) as u32).collect();
            assert_eq!(d.run_digits(&digits), m.run_digits(&digits));
        }
    }

    #[test]
    fn minimize_is_stable_on_minimal_input() {
        let d = catalan_mod3_fixture();
        let m = d.minimize();
        assert_eq!(m.state_count(), 5);
        assert_eq!(m, m.minimize());
    }
}
