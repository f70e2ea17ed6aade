//! Small automata used throughout the tests, benches and documentation.

use std::collections::BTreeMap;

use crate::model::{FiniteAutomaton, ProceduralAlphabet, PushdownAlphabet, Symbol, Vra};
use crate::vpa::Vpa;

/// Builds an automaton from state names; states get ids in listing order.
pub fn fa(states: &[&str], initials: &[&str], finals: &[&str], transitions: &[(&str, &str, &str)]) -> FiniteAutomaton {
    let mut out = FiniteAutomaton::new();
    let ids: BTreeMap<&str, _> = states.iter().map(|s| (*s, out.add_state(*s))).collect();
    initials.iter().for_each(|s| out.add_initial(ids[s]));
    finals.iter().for_each(|s| out.add_final(ids[s]));
    for (q, a, p) in transitions {
        out.add_transition(ids[q], *a, ids[p]);
    }
    out
}

fn abc() -> PushdownAlphabet {
    PushdownAlphabet::new(["a"], ["c"], ["r"])
}

fn rt_link() -> ProceduralAlphabet {
    let mut p = ProceduralAlphabet::new();
    p.insert("R", "c", "r");
    p.insert("T", "c", "r");
    p
}

/// Two procedures `R`, `T` on `(c, r)`; accepts `ccrar` and `car`.
pub fn running_example() -> Vra {
    let start = fa(&["s0", "s1"], &["s0"], &["s1"], &[("s0", "R", "s1")]);
    let r = fa(&["r0", "r1"], &["r0"], &["r1"], &[("r0", "T", "r0"), ("r0", "R", "r1"), ("r0", "a", "r1")]);
    let t = fa(&["t0"], &["t0"], &["t0"], &[("t0", "R", "t0"), ("t0", "T", "t0")]);
    let modules = BTreeMap::from([(Symbol::new("R"), r), (Symbol::new("T"), t)]);
    Vra::assemble(abc(), rt_link(), modules, start)
}

/// A deterministic VRA that is not an SPA: `R` and `T` share the call `c`.
pub fn deterministic_example() -> Vra {
    let start = fa(&["s0", "s1", "s2"], &["s0"], &["s2"], &[("s0", "R", "s1"), ("s1", "T", "s2")]);
    let r = fa(&["r0", "r1"], &["r0"], &["r1"], &[("r0", "a", "r1")]);
    let t = fa(&["t0"], &["t0"], &["t0"], &[("t0", "R", "t0")]);
    let modules = BTreeMap::from([(Symbol::new("R"), r), (Symbol::new("T"), t)]);
    Vra::assemble(abc(), rt_link(), modules, start)
}

/// One-symbol stack VPA over `a`, `c`, `r`; accepts `accrar`.
pub fn stack_example() -> Vpa {
    let mut v = Vpa::new(abc());
    let q0 = v.add_state("q0");
    let q1 = v.add_state("q1");
    v.initials.insert(q0);
    v.finals.insert(q0);
    v.stack_alphabet.insert(Symbol::new("g"));
    v.internal.insert((q0, "a".into(), q1));
    v.calls.insert((q1, "c".into(), q1, "g".into()));
    v.returns.insert((q1, "r".into(), "g".into(), q0));
    v.returns.insert((q0, "r".into(), "g".into(), q0));
    v
}
