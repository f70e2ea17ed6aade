//! Determinism predicates, codeterminism and completeness checks, and the
//! translation into the codeterministic complete normal form.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::decide::{is_empty, is_universal};
use crate::fa::{determinize_with, fa_intersection, fa_union, product_select, relabel_to_supersets, Scope, Selector};
use crate::model::{FiniteAutomaton, ModuleTag, ProcOrigin, ProceduralAlphabet, StateId, Symbol, Vra, Word};
use crate::ops::vra_intersect;

/// A procedural symbol of the normal form: a set of original procedures
/// sharing the call/return pair `pair`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProcSubsetSymbol {
    pub pair: (Symbol, Symbol),
    pub members: BTreeSet<Symbol>,
}

impl ProcSubsetSymbol {
    /// Display name such as `{R,T}<c,r>`.
    pub fn name(&self) -> Symbol {
        let ms: Vec<&str> = self.members.iter().map(Symbol::as_str).collect();
        Symbol::new(format!("{{{}}}<{},{}>", ms.join(","), self.pair.0, self.pair.1))
    }
}

/// Why a VRA is not deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DetIssue {
    InitialCount { module: ModuleTag, count: usize },
    Nondeterministic { module: ModuleTag, state: String, label: Symbol },
    /// Two procedural transitions leave `state` on symbols with the same call.
    CallConflict { module: ModuleTag, state: String, call: Symbol, procedures: (Symbol, Symbol) },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetReport {
    pub deterministic: bool,
    pub issues: Vec<DetIssue>,
}

/// Every automaton is a DFA and no state has transitions on two procedural
/// symbols sharing a call letter.
pub fn is_deterministic(v: &Vra) -> DetReport {
    let mut issues = Vec::new();
    for (tag, fa) in v.automata() {
        if fa.initials().len() != 1 {
            issues.push(DetIssue::InitialCount { module: tag.clone(), count: fa.initials().len() });
        }
        for q in fa.states() {
            let mut by_call: BTreeMap<&Symbol, &Symbol> = BTreeMap::new();
            for (label, targets) in fa.outgoing(q) {
                if targets.len() > 1 {
                    issues.push(DetIssue::Nondeterministic {
                        module: tag.clone(),
                        state: fa.name(q).to_string(),
                        label: label.clone(),
                    });
                }
                let Some((c, _)) = v.procedural.link(label) else { continue };
                match by_call.get(c) {
                    Some(first) => issues.push(DetIssue::CallConflict {
                        module: tag.clone(),
                        state: fa.name(q).to_string(),
                        call: c.clone(),
                        procedures: ((*first).clone(), label.clone()),
                    }),
                    None => {
                        by_call.insert(c, label);
                    }
                }
            }
        }
    }
    DetReport { deterministic: issues.is_empty(), issues }
}

/// Deterministic with an injective call part of the linking function.
pub fn is_spa(v: &Vra) -> bool {
    let calls: BTreeSet<&Symbol> = v.procedural.iter().map(|(_, (c, _))| c).collect();
    calls.len() == v.procedural.len() && is_deterministic(v).deterministic
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodetWitness {
    pub procedures: (Symbol, Symbol),
    /// A word accepted by both procedures.
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodetReport {
    pub codeterministic: bool,
    pub witness: Option<CodetWitness>,
}

/// Procedures linked to the same call/return pair have disjoint languages.
///
/// If all such automata have pairwise disjoint regular languages the answer
/// is immediate: a well-matched word then has at most one regular
/// abstraction per automaton, by induction on depth. Otherwise every pair is
/// checked by intersecting the two re-rooted VRAs and testing emptiness.
pub fn is_codeterministic(v: &Vra) -> CodetReport {
    let pairs = competing_pairs(v);
    let regular_disjoint = pairs.iter().all(|(j, k)| {
        let p = fa_intersection(&v.modules[j], &v.modules[k], |a, b| a && b);
        !p.reachable().iter().any(|q| p.is_final(*q))
    });
    if regular_disjoint {
        return CodetReport { codeterministic: true, witness: None };
    }
    is_codeterministic_exhaustive(v)
}

/// The intersection-and-emptiness check on every pair, without the regular shortcut.
pub fn is_codeterministic_exhaustive(v: &Vra) -> CodetReport {
    for (j, k) in competing_pairs(v) {
        let (a, b) = (v.rerooted(&j).unwrap(), v.rerooted(&k).unwrap());
        let both = vra_intersect(&a, &b).expect("same alphabet");
        let cert = is_empty(&both);
        if let Some(word) = cert.witness {
            return CodetReport { codeterministic: false, witness: Some(CodetWitness { procedures: (j, k), word }) };
        }
    }
    CodetReport { codeterministic: true, witness: None }
}

fn competing_pairs(v: &Vra) -> Vec<(Symbol, Symbol)> {
    let mut out = Vec::new();
    for (c, r) in v.alphabet.pairs() {
        let js = v.procedural.of_pair(&c, &r);
        for (i, j) in js.iter().enumerate() {
            for k in &js[i + 1..] {
                if v.modules.contains_key(j) && v.modules.contains_key(k) {
                    out.push((j.clone(), k.clone()));
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompleteFailure {
    /// An automaton has no transition on `label` from `state`.
    MissingTransition { module: ModuleTag, state: String, label: Symbol },
    /// No procedure linked to `(call, ret)` accepts `word`.
    Uncovered { call: Symbol, ret: Symbol, word: Word },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompleteReport {
    pub complete: bool,
    pub failure: Option<CompleteFailure>,
}

/// Every automaton is complete and, for each call/return pair, the linked
/// procedures together accept every well-matched word.
pub fn is_complete(v: &Vra) -> CompleteReport {
    let labels = v.labels();
    for (tag, fa) in v.automata() {
        if let Some((q, label)) = fa.first_incomplete(&labels) {
            let failure = CompleteFailure::MissingTransition { module: tag, state: fa.name(q).to_string(), label };
            return CompleteReport { complete: false, failure: Some(failure) };
        }
    }
    for (c, r) in v.alphabet.pairs() {
        let start = v
            .procedural
            .of_pair(&c, &r)
            .iter()
            .filter_map(|j| v.modules.get(j))
            .fold(FiniteAutomaton::new(), |acc, fa| fa_union(&acc, fa));
        let derived = Vra::assemble(v.alphabet.clone(), v.procedural.clone(), v.modules.clone(), start);
        let verdict = is_universal(&derived);
        if !verdict.holds {
            let word = verdict.counterexample.expect("non-universal comes with a counterexample");
            return CompleteReport { complete: false, failure: Some(CompleteFailure::Uncovered { call: c, ret: r, word }) };
        }
    }
    CompleteReport { complete: true, failure: None }
}

/// Cheap sufficient condition used before complementing: every module is a
/// complete DFA and, for each call/return pair, the modules' regular
/// languages partition all label words.
pub fn modules_in_normal_form(v: &Vra) -> bool {
    let labels = v.labels();
    if !v.modules.values().all(|fa| fa.is_complete_dfa(&labels)) {
        return false;
    }
    v.alphabet.pairs().iter().all(|(c, r)| {
        let fas: Vec<&FiniteAutomaton> = v.procedural.of_pair(c, r).iter().filter_map(|j| v.modules.get(j)).collect();
        regular_partition(&fas, &labels)
    })
}

/// Every reachable tuple of the joint product has exactly one final component.
fn regular_partition(fas: &[&FiniteAutomaton], labels: &BTreeSet<Symbol>) -> bool {
    if fas.is_empty() {
        return false;
    }
    let init: Vec<StateId> = fas.iter().map(|fa| *fa.initials().iter().next().unwrap()).collect();
    let mut seen = BTreeSet::from([init.clone()]);
    let mut queue = VecDeque::from([init]);
    while let Some(t) = queue.pop_front() {
        if t.iter().zip(fas).filter(|(q, fa)| fa.is_final(**q)).count() != 1 {
            return false;
        }
        for a in labels {
            let next: Vec<StateId> = t.iter().zip(fas).map(|(q, fa)| fa.successors(*q, a).next().unwrap()).collect();
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    true
}

type Subset = (Symbol, BTreeSet<Symbol>);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CodetOptions {
    /// Keep only reachable subsets and product tuples, and drop modules not
    /// referenced from the start automaton.
    pub trim: bool,
}

/// Equivalent codeterministic complete VRA whose automata are complete DFAs.
///
/// The procedural alphabet becomes all subsets of each `Σ_proc^<c,r>`
/// (one entry per call/return pair, including pairs with no procedure).
/// Untrimmed, the start automaton has `2^|Q^S|` states and each pair
/// contributes `2^|Σ^<c,r>| · 2^(Σ_J |Q^J|)` states.
pub fn codet_complete(v: &Vra, opts: CodetOptions) -> Vra {
    let scope = if opts.trim { Scope::Reachable } else { Scope::Full };
    let mut procedural = ProceduralAlphabet::new();
    let mut origins = BTreeMap::new();
    // per pair: (original procedures, [(subset symbol, members)])
    let mut families: Vec<(Vec<Symbol>, Vec<Subset>)> = Vec::new();
    let mut expand: BTreeMap<Symbol, BTreeSet<Symbol>> =
        v.alphabet.internal.iter().map(|a| (a.clone(), BTreeSet::from([a.clone()]))).collect();
    for (c, r) in v.alphabet.pairs() {
        let js = v.procedural.of_pair(&c, &r);
        let mut subsets = Vec::new();
        for mask in 0u64..(1u64 << js.len()) {
            let members: BTreeSet<Symbol> =
                js.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, j)| j.clone()).collect();
            let origin = ProcSubsetSymbol { pair: (c.clone(), r.clone()), members: members.clone() };
            let mut name = origin.name();
            while v.alphabet.contains(&name) {
                name = Symbol::new(format!("{name}'"));
            }
            procedural.insert(name.clone(), c.clone(), r.clone());
            origins.insert(name.clone(), ProcOrigin::Subset(origin));
            for j in &members {
                expand.entry(j.clone()).or_default().insert(name.clone());
            }
            subsets.push((name, members));
        }
        families.push((js, subsets));
    }
    for j in v.procedural.symbols() {
        expand.entry(j.clone()).or_default();
    }
    let labels: BTreeSet<Symbol> = v.alphabet.internal.iter().chain(procedural.symbols()).cloned().collect();
    let lift = |fa: &FiniteAutomaton| {
        let relabeled = relabel_to_supersets(fa, &expand).expect("every label has an expansion");
        determinize_with(&relabeled, &labels, scope)
    };
    let start = lift(&v.start);
    let lifted: BTreeMap<Symbol, FiniteAutomaton> = v.modules.iter().map(|(j, fa)| (j.clone(), lift(fa))).collect();
    let mut modules = BTreeMap::new();
    for (js, subsets) in &families {
        let fas: Vec<&FiniteAutomaton> = js.iter().map(|j| &lifted[j]).collect();
        for (name, members) in subsets {
            let selectors: Vec<Selector> =
                js.iter().map(|j| if members.contains(j) { Selector::Finals } else { Selector::CoFinals }).collect();
            let b = product_select(&fas, &selectors, &labels, scope).expect("lifted automata are complete DFAs");
            modules.insert(name.clone(), b);
        }
    }
    if opts.trim {
        let mut keep = BTreeSet::new();
        let mut todo: Vec<Symbol> = start.labels().into_iter().filter(|l| modules.contains_key(l)).collect();
        while let Some(j) = todo.pop() {
            if keep.insert(j.clone()) {
                todo.extend(modules[&j].labels().into_iter().filter(|l| modules.contains_key(l)));
            }
        }
        modules.retain(|j, _| keep.contains(j));
        let dropped: Vec<Symbol> = procedural.symbols().filter(|j| !keep.contains(*j)).cloned().collect();
        for j in dropped {
            procedural.remove(&j);
            origins.remove(&j);
        }
    }
    let mut out = Vra::assemble(v.alphabet.clone(), procedural, modules, start);
    out.origins = origins;
    out
}

/// The untrimmed state count of [`codet_complete`] for `v`.
pub fn codet_state_formula(v: &Vra) -> u128 {
    let mut total = 1u128 << v.start.state_count();
    for (c, r) in v.alphabet.pairs() {
        let js = v.procedural.of_pair(&c, &r);
        let qs: usize = js.iter().map(|j| v.modules[j].state_count()).sum();
        total += (1u128 << js.len()) * (1u128 << qs);
    }
    total
}
