//! Visibly pushdown automata and the translations between VPAs and VRAs.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::model::{
    nest, FiniteAutomaton, LetterKind, ProcOrigin, ProceduralAlphabet, PushdownAlphabet, Segment, StateId, Symbol,
    Vra, Word,
};

/// A visibly pushdown automaton accepting by final state and empty stack.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vpa {
    pub alphabet: PushdownAlphabet,
    pub stack_alphabet: BTreeSet<Symbol>,
    pub names: BTreeMap<StateId, String>,
    pub initials: BTreeSet<StateId>,
    pub finals: BTreeSet<StateId>,
    /// `(q, a, q')`
    pub internal: BTreeSet<(StateId, Symbol, StateId)>,
    /// `(q, c, q', γ)`: read `c`, push `γ`.
    pub calls: BTreeSet<(StateId, Symbol, StateId, Symbol)>,
    /// `(q, r, γ, q')`: read `r`, pop `γ`.
    pub returns: BTreeSet<(StateId, Symbol, Symbol, StateId)>,
}

impl Vpa {
    pub fn new(alphabet: PushdownAlphabet) -> Self {
        Vpa { alphabet, ..Default::default() }
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> StateId {
        let id = StateId(self.names.keys().next_back().map_or(0, |q| q.0 + 1));
        self.names.insert(id, name.into());
        id
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.names.keys().copied()
    }

    pub fn name(&self, q: StateId) -> &str {
        self.names.get(&q).map(String::as_str).unwrap_or("?")
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.names.iter().find(|(_, n)| n.as_str() == name).map(|(q, _)| *q)
    }

    /// Pairwise distinct state labels: the name, suffixed with the id when shared.
    pub fn state_labels(&self) -> BTreeMap<StateId, String> {
        let mut count: BTreeMap<&str, usize> = BTreeMap::new();
        for n in self.names.values() {
            *count.entry(n).or_default() += 1;
        }
        self.names
            .iter()
            .map(|(q, n)| (*q, if count[n.as_str()] == 1 { n.clone() } else { format!("{n}#{}", q.0) }))
            .collect()
    }

    /// `|Q| + |δ|`.
    pub fn size(&self) -> usize {
        self.names.len() + self.internal.len() + self.calls.len() + self.returns.len()
    }
}

/// A VPA state with its stack; `stack[0]` is the top.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VpaConfiguration {
    pub state: StateId,
    pub stack: Vec<Symbol>,
}

/// One step of a VPA.
pub fn vpa_step(p: &Vpa, c: &VpaConfiguration, letter: &Symbol) -> BTreeSet<VpaConfiguration> {
    let mut out = BTreeSet::new();
    match p.alphabet.kind(letter) {
        Some(LetterKind::Internal) => {
            for (q, a, q2) in &p.internal {
                if *q == c.state && a == letter {
                    out.insert(VpaConfiguration { state: *q2, stack: c.stack.clone() });
                }
            }
        }
        Some(LetterKind::Call) => {
            for (q, a, q2, g) in &p.calls {
                if *q == c.state && a == letter {
                    let mut stack = vec![g.clone()];
                    stack.extend_from_slice(&c.stack);
                    out.insert(VpaConfiguration { state: *q2, stack });
                }
            }
        }
        Some(LetterKind::Return) => {
            if let Some((top, rest)) = c.stack.split_first() {
                for (q, a, g, q2) in &p.returns {
                    if *q == c.state && a == letter && g == top {
                        out.insert(VpaConfiguration { state: *q2, stack: rest.to_vec() });
                    }
                }
            }
        }
        None => {}
    }
    out
}

type Relation = BTreeMap<StateId, BTreeSet<StateId>>;

struct VpaSummaries<'a> {
    p: &'a Vpa,
    returns: BTreeMap<(StateId, &'a Symbol, &'a Symbol), Vec<StateId>>,
}

impl<'a> VpaSummaries<'a> {
    fn new(p: &'a Vpa) -> Self {
        let mut returns: BTreeMap<_, Vec<StateId>> = BTreeMap::new();
        for (q, r, g, q2) in &p.returns {
            returns.entry((*q, r, g)).or_default().push(*q2);
        }
        VpaSummaries { p, returns }
    }

    fn image(&self, from: &BTreeSet<StateId>, seg: &Segment, memo: &mut Vec<(*const Segment, Relation)>) -> BTreeSet<StateId> {
        match seg {
            Segment::Letter(a) => self
                .p
                .internal
                .iter()
                .filter(|(q, b, _)| b == a && from.contains(q))
                .map(|(_, _, q2)| *q2)
                .collect(),
            Segment::Nested { .. } => {
                let rel = self.block(seg, memo);
                from.iter().filter_map(|q| rel.get(q)).flatten().copied().collect()
            }
        }
    }

    fn run(&self, from: BTreeSet<StateId>, segs: &[Segment], memo: &mut Vec<(*const Segment, Relation)>) -> BTreeSet<StateId> {
        segs.iter().fold(from, |set, s| self.image(&set, s, memo))
    }

    /// `{(q, p) : <q, ε> -c w r-> <p, ε>}` for the block `c w r`.
    fn block(&self, seg: &Segment, memo: &mut Vec<(*const Segment, Relation)>) -> Relation {
        let key = seg as *const Segment;
        if let Some((_, rel)) = memo.iter().find(|(k, _)| *k == key) {
            return rel.clone();
        }
        let Segment::Nested { call, inner, ret } = seg else { unreachable!() };
        let mut rel = Relation::new();
        for (q, c, q2, g) in &self.p.calls {
            if c != call {
                continue;
            }
            let mid = self.run(BTreeSet::from([*q2]), inner, memo);
            for p2 in mid {
                for p in self.returns.get(&(p2, ret, g)).into_iter().flatten() {
                    rel.entry(*q).or_default().insert(*p);
                }
            }
        }
        memo.push((key, rel.clone()));
        rel
    }
}

/// Membership in `L(p)`; ill-matched words are rejected.
pub fn vpa_member(p: &Vpa, w: &Word) -> Result<bool, Error> {
    let Some(segs) = nest(&p.alphabet, w)? else { return Ok(false) };
    let s = VpaSummaries::new(p);
    let mut memo = Vec::new();
    let end = s.run(p.initials.clone(), &segs, &mut memo);
    Ok(end.iter().any(|q| p.finals.contains(q)))
}

/// Equivalent VPA over the same states, with the VRA's states as stack symbols.
pub fn vra_to_vpa(v: &Vra) -> Vpa {
    let labels = v.state_labels();
    let mut out = Vpa::new(v.alphabet.clone());
    for (q, l) in &labels {
        out.names.insert(*q, l.clone());
    }
    out.stack_alphabet = labels.values().map(Symbol::new).collect();
    out.initials = v.start.initials().clone();
    out.finals = v.start.finals().clone();
    for (_, fa) in v.automata() {
        for (q, a, p) in fa.transitions() {
            if v.alphabet.internal.contains(a) {
                out.internal.insert((q, a.clone(), p));
            } else if let (Some((c, _)), Some(callee)) = (v.procedural.link(a), v.modules.get(a)) {
                for i in callee.initials() {
                    out.calls.insert((q, c.clone(), *i, Symbol::new(&labels[&p])));
                }
            }
        }
    }
    for (j, (_, r)) in v.procedural.iter() {
        let Some(fa) = v.modules.get(j) else { continue };
        for q in fa.finals() {
            for (p, l) in &labels {
                out.returns.insert((*q, r.clone(), Symbol::new(l), *p));
            }
        }
    }
    out
}

/// Equivalent VRA with one procedure `<q, p, c, r>` per pair of states and
/// call/return pair. With `trim`, only procedures reachable from the start
/// automaton are kept and unreachable states are dropped.
pub fn vpa_to_vra(p: &Vpa, trim: bool) -> Vra {
    let labels = p.state_labels();
    let states: Vec<StateId> = p.states().collect();
    let mut procedural = ProceduralAlphabet::new();
    let mut origins = BTreeMap::new();
    let mut sym = BTreeMap::new();
    for q in &states {
        for q2 in &states {
            for (c, r) in p.alphabet.pairs() {
                let j = Symbol::new(format!("<{},{},{},{}>", labels[q], labels[q2], c, r));
                procedural.insert(j.clone(), c.clone(), r.clone());
                origins.insert(
                    j.clone(),
                    ProcOrigin::Summary { from: labels[q].clone(), to: labels[q2].clone(), call: c.clone(), ret: r.clone() },
                );
                sym.insert((*q, *q2, c, r), j);
            }
        }
    }
    let mut template = FiniteAutomaton::new();
    for q in &states {
        template.insert_state(*q, p.name(*q));
    }
    for (q, a, q2) in &p.internal {
        template.add_transition(*q, a.clone(), *q2);
    }
    for (q1, c, q2, g) in &p.calls {
        for (p2, r, g2, p1) in &p.returns {
            if g == g2 {
                template.add_transition(*q1, sym[&(*q2, *p2, c.clone(), r.clone())].clone(), *p1);
            }
        }
    }
    let with_ends = |init: &BTreeSet<StateId>, fin: &BTreeSet<StateId>| {
        let mut fa = template.clone();
        init.iter().for_each(|q| fa.add_initial(*q));
        fin.iter().for_each(|q| fa.add_final(*q));
        if trim {
            fa.trim_unreachable()
        } else {
            fa
        }
    };
    let start = with_ends(&p.initials, &p.finals);
    let mut modules = BTreeMap::new();
    for ((q, q2, _, _), j) in &sym {
        modules.insert(j.clone(), with_ends(&BTreeSet::from([*q]), &BTreeSet::from([*q2])));
    }
    if trim {
        let mut keep: BTreeSet<Symbol> = BTreeSet::new();
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
    let mut v = Vra::assemble(p.alphabet.clone(), procedural, modules, start);
    v.origins = origins;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{running_example, stack_example};
    use crate::semantics::{vra_member, Configuration, Stepper};

    #[test]
    fn stack_example_accepts_accrar() {
        let p = stack_example();
        assert!(vpa_member(&p, &Word::from_chars("accrar")).unwrap());
        assert!(vpa_member(&p, &Word::from_chars("")).unwrap());
        assert!(!vpa_member(&p, &Word::from_chars("acc")).unwrap());
        assert!(!vpa_member(&p, &Word::from_chars("a")).unwrap());
    }

    #[test]
    fn trimmed_translation_keeps_two_procedures() {
        let v = vpa_to_vra(&stack_example(), true);
        let procs: Vec<&str> = v.procedural.symbols().map(Symbol::as_str).collect();
        assert_eq!(procs, vec!["<q1,q0,c,r>", "<q1,q1,c,r>"]);
        for fa in v.modules.values() {
            assert_eq!(fa.state_count(), 2);
            assert_eq!(fa.transition_count(), 3);
        }
        assert!(vra_member(&v, &Word::from_chars("accrar")).unwrap().accepted);
    }

    #[test]
    fn untrimmed_translation_has_all_quadruples() {
        let v = vpa_to_vra(&stack_example(), false);
        assert_eq!(v.procedural.len(), 4);
        assert_eq!(v.state_count(), 2 * 5);
    }

    #[test]
    fn vra_to_vpa_steps_agree() {
        let v = running_example();
        let p = vra_to_vpa(&v);
        let labels = v.state_labels();
        let s = Stepper::new(&v);
        let lift = |c: &Configuration| VpaConfiguration {
            state: c.state,
            stack: c.stack.iter().map(|q| Symbol::new(&labels[q])).collect(),
        };
        let letters: Vec<Symbol> = v.alphabet.letters().cloned().collect();
        let mut frontier: BTreeSet<Configuration> = s.initial_configurations().collect();
        for _ in 0..4 {
            let mut next = BTreeSet::new();
            for c in &frontier {
                for a in &letters {
                    let a_vra: BTreeSet<VpaConfiguration> = s.step(c, a).iter().map(lift).collect();
                    let a_vpa = vpa_step(&p, &lift(c), a);
                    assert_eq!(a_vra, a_vpa, "from {c} on {a}");
                    next.extend(s.step(c, a));
                }
            }
            frontier = next;
        }
    }
}
