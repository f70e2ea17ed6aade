//! Finite-automaton constructions: subset construction, relabeling,
//! selective products and the ε-free regular closures.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::Error;
use crate::model::{FiniteAutomaton, StateId, Symbol};

/// Which states of a product component count as accepting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selector {
    Finals,
    CoFinals,
}

/// Whether a construction keeps only reachable states or the full state space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Scope {
    #[default]
    Reachable,
    Full,
}

fn subset_name(fa: &FiniteAutomaton, set: &[StateId]) -> String {
    let names: Vec<&str> = set.iter().map(|q| fa.name(*q)).collect();
    format!("{{{}}}", names.join(","))
}

/// Subset construction over `labels`, restricted to reachable subsets.
///
/// The initial subset is the set of all initial states and the empty subset
/// is the sink. State names list the members, e.g. `{r0,r1}`.
pub fn determinize_complete(fa: &FiniteAutomaton, labels: &BTreeSet<Symbol>) -> FiniteAutomaton {
    determinize_with(fa, labels, Scope::Reachable)
}

/// Subset construction over `labels` with one state per subset of `Q`.
pub fn determinize_complete_full(fa: &FiniteAutomaton, labels: &BTreeSet<Symbol>) -> FiniteAutomaton {
    determinize_with(fa, labels, Scope::Full)
}

pub fn determinize_with(fa: &FiniteAutomaton, labels: &BTreeSet<Symbol>, scope: Scope) -> FiniteAutomaton {
    let mut out = FiniteAutomaton::new();
    let mut ids: BTreeMap<Vec<StateId>, StateId> = BTreeMap::new();
    let mut queue: VecDeque<(Vec<StateId>, StateId)> = VecDeque::new();
    let mut intern = |set: Vec<StateId>, out: &mut FiniteAutomaton, queue: &mut VecDeque<(Vec<StateId>, StateId)>| {
        if let Some(id) = ids.get(&set) {
            return *id;
        }
        let id = out.add_state(subset_name(fa, &set));
        if set.iter().any(|q| fa.is_final(*q)) {
            out.add_final(id);
        }
        ids.insert(set.clone(), id);
        queue.push_back((set, id));
        id
    };

    if scope == Scope::Full {
        let states: Vec<StateId> = fa.states().collect();
        assert!(states.len() < 28, "full subset construction over {} states", states.len());
        for mask in 0u32..(1u32 << states.len()) {
            let set: Vec<StateId> =
                states.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, q)| *q).collect();
            intern(set, &mut out, &mut queue);
        }
    }
    let initial: Vec<StateId> = fa.initials().iter().copied().collect();
    let init = intern(initial, &mut out, &mut queue);
    out.add_initial(init);

    while let Some((set, src)) = queue.pop_front() {
        let set: BTreeSet<StateId> = set.into_iter().collect();
        for a in labels {
            let img: Vec<StateId> = fa.image(&set, a).into_iter().collect();
            let dst = intern(img, &mut out, &mut queue);
            out.add_transition(src, a.clone(), dst);
        }
    }
    out
}

/// Replaces every transition `q -a-> p` by `q -b-> p` for each `b` in `expand[a]`.
pub fn relabel_to_supersets(
    fa: &FiniteAutomaton,
    expand: &BTreeMap<Symbol, BTreeSet<Symbol>>,
) -> Result<FiniteAutomaton, Error> {
    if let Some(a) = fa.labels().into_iter().find(|a| !expand.contains_key(a)) {
        return Err(Error::MissingExpansion(a));
    }
    Ok(fa.flat_map_labels(|a| expand[a].iter().cloned().collect()))
}

/// Synchronous product of complete DFAs over `labels`. A tuple is final iff
/// every component satisfies its selector. An empty list yields the
/// one-state DFA accepting every word.
pub fn product_select(
    fas: &[&FiniteAutomaton],
    selectors: &[Selector],
    labels: &BTreeSet<Symbol>,
    scope: Scope,
) -> Result<FiniteAutomaton, Error> {
    assert_eq!(fas.len(), selectors.len());
    if fas.iter().any(|fa| !fa.is_complete_dfa(labels)) {
        return Err(Error::NotDeterministicComplete);
    }
    let accepting = |tuple: &[StateId]| {
        tuple.iter().zip(fas).zip(selectors).all(|((q, fa), sel)| match sel {
            Selector::Finals => fa.is_final(*q),
            Selector::CoFinals => !fa.is_final(*q),
        })
    };
    let name = |tuple: &[StateId]| {
        let parts: Vec<&str> = tuple.iter().zip(fas).map(|(q, fa)| fa.name(*q)).collect();
        format!("({})", parts.join(","))
    };
    let step = |tuple: &[StateId], a: &Symbol| -> Vec<StateId> {
        tuple.iter().zip(fas).map(|(q, fa)| fa.successors(*q, a).next().expect("complete")).collect()
    };

    let mut out = FiniteAutomaton::new();
    let mut ids: BTreeMap<Vec<StateId>, StateId> = BTreeMap::new();
    let mut queue: VecDeque<(Vec<StateId>, StateId)> = VecDeque::new();
    let mut add = |t: Vec<StateId>, out: &mut FiniteAutomaton, queue: &mut VecDeque<(Vec<StateId>, StateId)>| {
        if let Some(id) = ids.get(&t) {
            return *id;
        }
        let id = out.add_state(name(&t));
        if accepting(&t) {
            out.add_final(id);
        }
        ids.insert(t.clone(), id);
        queue.push_back((t, id));
        id
    };

    if scope == Scope::Full {
        let spaces: Vec<Vec<StateId>> = fas.iter().map(|fa| fa.states().collect()).collect();
        let total: usize = spaces.iter().map(Vec::len).product();
        for mut k in 0..total {
            let mut t = vec![StateId(0); fas.len()];
            for i in (0..fas.len()).rev() {
                t[i] = spaces[i][k % spaces[i].len()];
                k /= spaces[i].len();
            }
            add(t, &mut out, &mut queue);
        }
    }
    let initial: Vec<StateId> = fas.iter().map(|fa| *fa.initials().iter().next().unwrap()).collect();
    let init = add(initial, &mut out, &mut queue);
    out.add_initial(init);
    while let Some((t, src)) = queue.pop_front() {
        for a in labels {
            let dst = add(step(&t, a), &mut out, &mut queue);
            out.add_transition(src, a.clone(), dst);
        }
    }
    Ok(out)
}

/// Reachable synchronized product of two automata. A label `x` of `a`
/// synchronizes with each `(y, z)` in `partners(x)`: a `y`-transition of `b`
/// yields a `z`-transition. A pair is final iff `accept(final_a, final_b)`.
pub fn fa_product(
    a: &FiniteAutomaton,
    b: &FiniteAutomaton,
    partners: impl Fn(&Symbol) -> Vec<(Symbol, Symbol)>,
    accept: impl Fn(bool, bool) -> bool,
) -> FiniteAutomaton {
    let mut out = FiniteAutomaton::new();
    let mut ids: BTreeMap<(StateId, StateId), StateId> = BTreeMap::new();
    let mut queue: VecDeque<((StateId, StateId), StateId)> = VecDeque::new();
    let mut add = |q: (StateId, StateId), out: &mut FiniteAutomaton, queue: &mut VecDeque<_>| {
        *ids.entry(q).or_insert_with(|| {
            let id = out.add_state(format!("({},{})", a.name(q.0), b.name(q.1)));
            if accept(a.is_final(q.0), b.is_final(q.1)) {
                out.add_final(id);
            }
            queue.push_back((q, id));
            id
        })
    };
    for qa in a.initials() {
        for qb in b.initials() {
            let id = add((*qa, *qb), &mut out, &mut queue);
            out.add_initial(id);
        }
    }
    while let Some(((qa, qb), src)) = queue.pop_front() {
        for (la, pas) in a.outgoing(qa) {
            for (lb, l) in partners(la) {
                let pbs: Vec<StateId> = b.successors(qb, &lb).collect();
                for pa in pas {
                    for pb in &pbs {
                        let dst = add((*pa, *pb), &mut out, &mut queue);
                        out.add_transition(src, l.clone(), dst);
                    }
                }
            }
        }
    }
    out
}

fn disjoint_pair(a: &FiniteAutomaton, b: &FiniteAutomaton) -> (FiniteAutomaton, FiniteAutomaton) {
    let a = a.renumbered(0);
    let b = b.renumbered(a.id_bound());
    (a, b)
}

fn merge_into(out: &mut FiniteAutomaton, fa: &FiniteAutomaton) {
    for q in fa.states() {
        out.insert_state(q, fa.name(q));
    }
    for (q, a, p) in fa.transitions() {
        out.add_transition(q, a.clone(), p);
    }
}

/// Reachable product over identical labels.
pub fn fa_intersection(a: &FiniteAutomaton, b: &FiniteAutomaton, accept: impl Fn(bool, bool) -> bool) -> FiniteAutomaton {
    fa_product(a, b, |l| vec![(l.clone(), l.clone())], accept)
}

/// Disjoint union.
pub fn fa_union(a: &FiniteAutomaton, b: &FiniteAutomaton) -> FiniteAutomaton {
    let (a, b) = disjoint_pair(a, b);
    let mut out = FiniteAutomaton::new();
    merge_into(&mut out, &a);
    merge_into(&mut out, &b);
    for q in a.initials().iter().chain(b.initials()) {
        out.add_initial(*q);
    }
    for q in a.finals().iter().chain(b.finals()) {
        out.add_final(*q);
    }
    out
}

/// Concatenation: every transition of `a` into a final state is doubled
/// into every initial state of `b`.
pub fn fa_concat(a: &FiniteAutomaton, b: &FiniteAutomaton) -> FiniteAutomaton {
    let (a, b) = disjoint_pair(a, b);
    let mut out = FiniteAutomaton::new();
    merge_into(&mut out, &a);
    merge_into(&mut out, &b);
    for (q, l, p) in a.transitions() {
        if a.is_final(p) {
            for i in b.initials() {
                out.add_transition(q, l.clone(), *i);
            }
        }
    }
    let a_eps = a.initials().iter().any(|q| a.is_final(*q));
    let b_eps = b.initials().iter().any(|q| b.is_final(*q));
    for q in a.initials() {
        out.add_initial(*q);
    }
    if a_eps {
        for q in b.initials() {
            out.add_initial(*q);
        }
    }
    for q in b.finals() {
        out.add_final(*q);
    }
    if b_eps {
        for q in a.finals() {
            out.add_final(*q);
        }
    }
    out
}

/// Kleene star with a fresh initial and final state.
pub fn fa_star(a: &FiniteAutomaton) -> FiniteAutomaton {
    let a = a.renumbered(1);
    let mut out = FiniteAutomaton::new();
    let s = StateId(0);
    out.insert_state(s, "star");
    merge_into(&mut out, &a);
    for (q, l, p) in a.transitions() {
        if a.is_final(p) {
            for i in a.initials() {
                out.add_transition(q, l.clone(), *i);
            }
        }
    }
    let from_initials: Vec<(Symbol, StateId)> = out
        .transitions()
        .filter(|(q, _, _)| a.is_initial(*q))
        .map(|(_, l, p)| (l.clone(), p))
        .collect();
    for (l, p) in from_initials {
        out.add_transition(s, l, p);
    }
    out.add_initial(s);
    out.add_final(s);
    for q in a.finals() {
        out.add_final(*q);
    }
    out
}

/// Complement of a complete DFA over `labels`.
pub fn fa_complement_dfa(fa: &FiniteAutomaton, labels: &BTreeSet<Symbol>) -> Result<FiniteAutomaton, Error> {
    if !fa.is_complete_dfa(labels) {
        return Err(Error::NotDeterministicComplete);
    }
    let mut out = fa.clone();
    out.set_finals(fa.states().filter(|q| !fa.is_final(*q)).collect());
    Ok(out)
}

/// Regular membership of a label word.
pub fn fa_member(fa: &FiniteAutomaton, word: &[Symbol]) -> bool {
    let mut cur: BTreeSet<StateId> = fa.initials().clone();
    for a in word {
        cur = fa.image(&cur, a);
        if cur.is_empty() {
            return false;
        }
    }
    cur.iter().any(|q| fa.is_final(*q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fa, running_example};
    use proptest::prelude::*;

    fn labels(xs: &[&str]) -> BTreeSet<Symbol> {
        xs.iter().map(|s| Symbol::new(*s)).collect()
    }

    fn w(s: &str) -> Vec<Symbol> {
        s.chars().map(|c| Symbol::new(c.to_string())).collect()
    }

    #[test]
    fn start_of_running_example_determinizes_to_three_states() {
        let v = running_example();
        let d = determinize_complete(&v.start, &labels(&["a", "R"]));
        assert_eq!(d.state_count(), 3);
        assert!(d.is_complete_dfa(&labels(&["a", "R"])));
        let names: BTreeSet<&str> = d.states().map(|q| d.name(q)).collect();
        assert_eq!(names, ["{s0}", "{s1}", "{}"].into_iter().collect());
        let full = determinize_complete_full(&v.start, &labels(&["a", "R"]));
        assert_eq!(full.state_count(), 4);
    }

    #[test]
    fn relabel_expands_and_reports_missing() {
        let v = running_example();
        let expand = BTreeMap::from([(Symbol::new("R"), labels(&["{R}", "{R,T}"]))]);
        let out = relabel_to_supersets(&v.start, &expand).unwrap();
        let got: BTreeSet<Symbol> = out.labels();
        assert_eq!(got, labels(&["{R}", "{R,T}"]));
        assert_eq!(out.transition_count(), 2);
        let r = &v.modules[&Symbol::new("R")];
        assert_eq!(relabel_to_supersets(r, &expand), Err(Error::MissingExpansion(Symbol::new("T"))));
    }

    #[test]
    fn empty_product_is_universal() {
        let l = labels(&["a", "b"]);
        let p = product_select(&[], &[], &l, Scope::Reachable).unwrap();
        assert_eq!(p.state_count(), 1);
        assert!(fa_member(&p, &w("abba")) && fa_member(&p, &[]));
    }

    #[test]
    fn product_requires_complete_dfas() {
        let v = running_example();
        let r = &v.modules[&Symbol::new("R")];
        let l = labels(&["a", "R", "T"]);
        assert_eq!(
            product_select(&[r], &[Selector::Finals], &l, Scope::Reachable),
            Err(Error::NotDeterministicComplete)
        );
    }

    #[test]
    fn full_product_counts_all_tuples() {
        let l = labels(&["a"]);
        let x = determinize_complete_full(&fa(&["p", "q"], &["p"], &["q"], &[("p", "a", "q")]), &l);
        let y = determinize_complete_full(&fa(&["s"], &["s"], &[], &[("s", "a", "s")]), &l);
        let p = product_select(&[&x, &y], &[Selector::Finals, Selector::CoFinals], &l, Scope::Full).unwrap();
        assert_eq!(p.state_count(), 8);
        let r = product_select(&[&x, &y], &[Selector::Finals, Selector::CoFinals], &l, Scope::Reachable).unwrap();
        assert!(r.state_count() <= 8);
        assert!(fa_member(&r, &w("a")) && !fa_member(&r, &w("")));
    }

    fn arb_fa() -> impl Strategy<Value = FiniteAutomaton> {
        (1usize..4, proptest::collection::vec((0usize..4, 0usize..2, 0usize..4), 0..8), any::<u8>(), any::<u8>())
            .prop_map(|(n, ts, init, fin)| {
                let mut out = FiniteAutomaton::new();
                let ids: Vec<StateId> = (0..n).map(|i| out.add_state(format!("q{i}"))).collect();
                for (i, q) in ids.iter().enumerate() {
                    if init >> i & 1 == 1 {
                        out.add_initial(*q);
                    }
                    if fin >> i & 1 == 1 {
                        out.add_final(*q);
                    }
                }
                for (q, a, p) in ts {
                    out.add_transition(ids[q % n], if a == 0 { "a" } else { "b" }, ids[p % n]);
                }
                out
            })
    }

    fn arb_word() -> impl Strategy<Value = Vec<Symbol>> {
        proptest::collection::vec(prop_oneof![Just(Symbol::new("a")), Just(Symbol::new("b"))], 0..6)
    }

    proptest! {
        #[test]
        fn determinize_preserves_language(x in arb_fa(), word in arb_word()) {
            let l = labels(&["a", "b"]);
            let d = determinize_complete(&x, &l);
            prop_assert!(d.is_complete_dfa(&l));
            prop_assert_eq!(fa_member(&d, &word), fa_member(&x, &word));
            let c = fa_complement_dfa(&d, &l).unwrap();
            prop_assert_eq!(fa_member(&c, &word), !fa_member(&x, &word));
        }

        #[test]
        fn regular_closures(x in arb_fa(), y in arb_fa(), word in arb_word()) {
            prop_assert_eq!(fa_member(&fa_union(&x, &y), &word), fa_member(&x, &word) || fa_member(&y, &word));
            let split = (0..=word.len()).any(|i| fa_member(&x, &word[..i]) && fa_member(&y, &word[i..]));
            prop_assert_eq!(fa_member(&fa_concat(&x, &y), &word), split);
            let both = fa_intersection(&x, &y, |p, q| p && q);
            prop_assert_eq!(fa_member(&both, &word), fa_member(&x, &word) && fa_member(&y, &word));
        }

        #[test]
        fn star_matches_factorization(x in arb_fa(), word in arb_word()) {
            // reach[i]: word[..i] is in L(x)*
            let mut reach = vec![false; word.len() + 1];
            reach[0] = true;
            for i in 1..=word.len() {
                reach[i] = (0..i).any(|j| reach[j] && fa_member(&x, &word[j..i]));
            }
            prop_assert_eq!(fa_member(&fa_star(&x), &word), reach[word.len()]);
        }
    }
}
