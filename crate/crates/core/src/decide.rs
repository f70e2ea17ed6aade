//! Emptiness by marking reachable states, and the decision problems that
//! reduce to it through complement and intersection.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::Error;
use crate::model::{ModuleTag, StateId, Symbol, Vra, Word};
use crate::ops::{vra_complement, vra_intersect};

/// Outcome of the emptiness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmptinessCertificate {
    pub empty: bool,
    /// States marked reachable when the worklist ran dry.
    pub reach: BTreeSet<StateId>,
    /// Procedural symbols whose language was found nonempty.
    pub enabled: BTreeSet<Symbol>,
    /// A word of `L(v)` when nonempty.
    pub witness: Option<Word>,
}

/// Decides `L(v) = ∅`.
///
/// Starting from every initial state, a state is marked when it is the
/// target of an internal transition or of a transition on an enabled
/// procedural symbol from a marked state. Marking a final state of `A^J`
/// enables `J` and revisits the `J`-transitions of marked states.
pub fn is_empty(v: &Vra) -> EmptinessCertificate {
    let owners = v.owners();
    let mut done: BTreeSet<StateId> = BTreeSet::new();
    let mut enabled: BTreeSet<Symbol> = BTreeSet::new();
    let mut queued: BTreeSet<StateId> = BTreeSet::new();
    let mut reach: VecDeque<StateId> = VecDeque::new();
    // q -> (predecessor, label); absent for initial states
    let mut pred: BTreeMap<StateId, (StateId, Symbol)> = BTreeMap::new();
    // J -> final state of A^J that enabled it
    let mut enabler: BTreeMap<Symbol, StateId> = BTreeMap::new();

    for (_, fa) in v.automata() {
        for q in fa.initials() {
            if queued.insert(*q) {
                reach.push_back(*q);
            }
        }
    }
    let mut push = |p: StateId, from: StateId, label: &Symbol, done: &BTreeSet<StateId>, reach: &mut VecDeque<StateId>| {
        if !done.contains(&p) && queued.insert(p) {
            pred.insert(p, (from, label.clone()));
            reach.push_back(p);
        }
    };

    while let Some(q) = reach.pop_front() {
        done.insert(q);
        let Some(tag) = owners.get(&q) else { continue };
        let fa = v.module(tag).unwrap();
        for (a, ps) in fa.outgoing(q) {
            if v.alphabet.internal.contains(a) || enabled.contains(a) {
                for p in ps {
                    push(*p, q, a, &done, &mut reach);
                }
            }
        }
        if let ModuleTag::Proc(j) = tag {
            if fa.is_final(q) && !enabled.contains(j) {
                enabled.insert(j.clone());
                enabler.insert(j.clone(), q);
                for q2 in done.clone() {
                    let owner = v.module(&owners[&q2]).unwrap();
                    for p in owner.successors(q2, j) {
                        push(p, q2, j, &done, &mut reach);
                    }
                }
            }
        }
    }

    let target = v.start.finals().iter().find(|q| done.contains(q)).copied();
    let witness = target.map(|f| {
        let mut memo = BTreeMap::new();
        Word(word_to(v, f, &pred, &enabler, &mut memo))
    });
    EmptinessCertificate { empty: target.is_none(), reach: done, enabled, witness }
}

// Every recursive call is on a state marked strictly earlier, so this terminates.
fn word_to(
    v: &Vra,
    q: StateId,
    pred: &BTreeMap<StateId, (StateId, Symbol)>,
    enabler: &BTreeMap<Symbol, StateId>,
    memo: &mut BTreeMap<StateId, Vec<Symbol>>,
) -> Vec<Symbol> {
    if let Some(w) = memo.get(&q) {
        return w.clone();
    }
    let w = match pred.get(&q) {
        None => Vec::new(),
        Some((from, label)) => {
            let mut w = word_to(v, *from, pred, enabler, memo);
            match v.procedural.link(label) {
                Some((c, r)) => {
                    w.push(c.clone());
                    w.extend(word_to(v, enabler[label], pred, enabler, memo));
                    w.push(r.clone());
                }
                None => w.push(label.clone()),
            }
            w
        }
    };
    memo.insert(q, w.clone());
    w
}

/// A yes/no answer with a counterexample word for "no".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub counterexample: Option<Word>,
}

impl Verdict {
    fn from_emptiness(cert: EmptinessCertificate) -> Self {
        Verdict { holds: cert.empty, counterexample: cert.witness }
    }
}

/// `L(v)` is every well-matched word.
pub fn is_universal(v: &Vra) -> Verdict {
    Verdict::from_emptiness(is_empty(&vra_complement(v)))
}

/// `L(a) ⊆ L(b)`; the counterexample is in `L(a) \ L(b)`.
pub fn includes(a: &Vra, b: &Vra) -> Result<Verdict, Error> {
    let diff = vra_intersect(a, &vra_complement(b))?;
    Ok(Verdict::from_emptiness(is_empty(&diff)))
}

/// `L(a) = L(b)`; the counterexample is in the symmetric difference.
pub fn equivalent(a: &Vra, b: &Vra) -> Result<Verdict, Error> {
    let ab = includes(a, b)?;
    if !ab.holds {
        return Ok(ab);
    }
    includes(b, a)
}
