//! Recursive-run semantics: configurations, the one-letter step relation,
//! membership and per-module summaries of well-matched words.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::Error;
use crate::model::{nest, FiniteAutomaton, LetterKind, ModuleTag, Segment, StateId, Symbol, Vra, Word};

/// A state together with a stack of return states; `stack[0]` is the top.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub state: StateId,
    pub stack: Vec<StateId>,
}

impl Configuration {
    pub fn new(state: StateId) -> Self {
        Configuration { state, stack: Vec::new() }
    }

    pub fn with_stack(state: StateId, stack: Vec<StateId>) -> Self {
        Configuration { state, stack }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let stack: Vec<String> = self.stack.iter().map(ToString::to_string).collect();
        write!(f, "<{}, [{}]>", self.state, stack.join(" "))
    }
}

/// Configurations `ρ_0 .. ρ_n` visited while reading `word` (`n = |word|`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursiveRun {
    pub word: Word,
    pub configurations: Vec<Configuration>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rejection {
    NotWellMatched,
    NoAcceptingRun,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub accepted: bool,
    /// An accepting run when `accepted`.
    pub witness: Option<RecursiveRun>,
    pub rejection: Option<Rejection>,
}

/// Precomputed lookups for stepping configurations of one VRA.
pub struct Stepper<'a> {
    v: &'a Vra,
    owner: HashMap<StateId, ModuleTag>,
    callees: HashMap<Symbol, Vec<Symbol>>,
}

impl<'a> Stepper<'a> {
    pub fn new(v: &'a Vra) -> Self {
        let owner = v.owners().into_iter().collect();
        let mut callees: HashMap<Symbol, Vec<Symbol>> = HashMap::new();
        for (j, (c, _)) in v.procedural.iter() {
            callees.entry(c.clone()).or_default().push(j.clone());
        }
        Stepper { v, owner, callees }
    }

    pub fn vra(&self) -> &'a Vra {
        self.v
    }

    fn fa_of(&self, q: StateId) -> Option<&'a FiniteAutomaton> {
        self.owner.get(&q).and_then(|t| self.v.module(t))
    }

    /// Configurations reachable from `c` by reading `letter`.
    pub fn step(&self, c: &Configuration, letter: &Symbol) -> BTreeSet<Configuration> {
        let mut out = BTreeSet::new();
        let Some(fa) = self.fa_of(c.state) else { return out };
        match self.v.alphabet.kind(letter) {
            Some(LetterKind::Internal) => {
                for p in fa.successors(c.state, letter) {
                    out.insert(Configuration::with_stack(p, c.stack.clone()));
                }
            }
            Some(LetterKind::Call) => {
                for j in self.callees.get(letter).into_iter().flatten() {
                    let Some(callee) = self.v.modules.get(j) else { continue };
                    for p in fa.successors(c.state, j) {
                        for i in callee.initials() {
                            let mut stack = Vec::with_capacity(c.stack.len() + 1);
                            stack.push(p);
                            stack.extend_from_slice(&c.stack);
                            out.insert(Configuration::with_stack(*i, stack));
                        }
                    }
                }
            }
            Some(LetterKind::Return) => {
                let returns = match self.owner.get(&c.state) {
                    Some(ModuleTag::Proc(j)) => {
                        fa.is_final(c.state) && self.v.procedural.link(j).is_some_and(|(_, r)| r == letter)
                    }
                    _ => false,
                };
                if let (true, Some((top, rest))) = (returns, c.stack.split_first()) {
                    out.insert(Configuration::with_stack(*top, rest.to_vec()));
                }
            }
            None => {}
        }
        out
    }

    pub fn initial_configurations(&self) -> impl Iterator<Item = Configuration> + '_ {
        self.v.start.initials().iter().map(|q| Configuration::new(*q))
    }

    pub fn is_accepting(&self, c: &Configuration) -> bool {
        c.stack.is_empty() && self.v.start.is_final(c.state)
    }
}

/// One step of the recursive-run semantics.
pub fn step(v: &Vra, c: &Configuration, letter: &Symbol) -> Result<BTreeSet<Configuration>, Error> {
    if !v.alphabet.contains(letter) {
        return Err(Error::UnknownSymbol(letter.to_string()));
    }
    Ok(Stepper::new(v).step(c, letter))
}

/// Checks that `run` is an accepting recursive run of `v` on its word.
pub fn validate_run(v: &Vra, run: &RecursiveRun) -> bool {
    let cs = &run.configurations;
    if cs.len() != run.word.len() + 1 {
        return false;
    }
    let s = Stepper::new(v);
    let first = &cs[0];
    if !(first.stack.is_empty() && v.start.is_initial(first.state)) {
        return false;
    }
    for (k, a) in run.word.letters().iter().enumerate() {
        if !s.step(&cs[k], a).contains(&cs[k + 1]) {
            return false;
        }
    }
    s.is_accepting(cs.last().unwrap())
}

enum Item {
    Letter(Symbol),
    Block(usize),
}

struct Block {
    call: Symbol,
    ret: Symbol,
    items: Vec<Item>,
}

/// A well-matched word as a tree of blocks; children precede parents.
struct Nested {
    blocks: Vec<Block>,
    top: Vec<Item>,
}

impl Nested {
    fn new(segs: Vec<Segment>) -> Self {
        let mut blocks = Vec::new();
        let top = Self::flatten(segs, &mut blocks);
        Nested { blocks, top }
    }

    fn flatten(segs: Vec<Segment>, blocks: &mut Vec<Block>) -> Vec<Item> {
        segs.into_iter()
            .map(|s| match s {
                Segment::Letter(a) => Item::Letter(a),
                Segment::Nested { call, inner, ret } => {
                    let items = Self::flatten(inner, blocks);
                    blocks.push(Block { call, ret, items });
                    Item::Block(blocks.len() - 1)
                }
            })
            .collect()
    }
}

/// Procedure summaries of a nested word: `enabled[b]` holds the procedural
/// symbols `J` linked to block `b`'s call/return whose language contains
/// the block's inner word.
struct Summaries<'a> {
    v: &'a Vra,
    nested: Nested,
    enabled: Vec<BTreeSet<Symbol>>,
}

impl<'a> Summaries<'a> {
    fn new(v: &'a Vra, segs: Vec<Segment>) -> Self {
        let nested = Nested::new(segs);
        let mut s = Summaries { v, nested, enabled: Vec::new() };
        for b in 0..s.nested.blocks.len() {
            let block = &s.nested.blocks[b];
            let mut en = BTreeSet::new();
            for j in v.procedural.of_pair(&block.call, &block.ret) {
                if let Some(fa) = v.modules.get(&j) {
                    if s.accepts(fa, &block.items) {
                        en.insert(j);
                    }
                }
            }
            s.enabled.push(en);
        }
        s
    }

    fn image(&self, fa: &FiniteAutomaton, set: &BTreeSet<StateId>, item: &Item) -> BTreeSet<StateId> {
        match item {
            Item::Letter(a) => fa.image(set, a),
            Item::Block(b) => self.enabled[*b].iter().flat_map(|j| fa.image(set, j)).collect(),
        }
    }

    /// Forward state sets before and after each item.
    fn forward(&self, fa: &FiniteAutomaton, from: BTreeSet<StateId>, items: &[Item]) -> Vec<BTreeSet<StateId>> {
        let mut out = Vec::with_capacity(items.len() + 1);
        out.push(from);
        for it in items {
            let next = self.image(fa, out.last().unwrap(), it);
            out.push(next);
        }
        out
    }

    fn accepts(&self, fa: &FiniteAutomaton, items: &[Item]) -> bool {
        let fwd = self.forward(fa, fa.initials().clone(), items);
        fwd.last().unwrap().iter().any(|q| fa.is_final(*q))
    }

    /// An accepting state path of `fa` over `items`, with the procedural
    /// symbol used at each block.
    fn trace(&self, fa: &FiniteAutomaton, items: &[Item]) -> Option<(Vec<StateId>, Vec<Option<Symbol>>)> {
        let fwd = self.forward(fa, fa.initials().clone(), items);
        let mut p = *fwd.last().unwrap().iter().find(|q| fa.is_final(**q))?;
        let mut states = vec![p];
        let mut used = Vec::with_capacity(items.len());
        for (k, it) in items.iter().enumerate().rev() {
            let (q, j) = match it {
                Item::Letter(a) => (*fwd[k].iter().find(|q| fa.has_transition(**q, a, p)).unwrap(), None),
                Item::Block(b) => self.enabled[*b]
                    .iter()
                    .find_map(|j| fwd[k].iter().find(|q| fa.has_transition(**q, j, p)).map(|q| (*q, Some(j.clone()))))
                    .unwrap(),
            };
            states.push(q);
            used.push(j);
            p = q;
        }
        states.reverse();
        used.reverse();
        Some((states, used))
    }

    fn expand(&self, fa: &FiniteAutomaton, items: &[Item], stack: &[StateId], out: &mut Vec<Configuration>) {
        let (states, used) = self.trace(fa, items).expect("accepted items have a trace");
        out.push(Configuration::with_stack(states[0], stack.to_vec()));
        for (k, it) in items.iter().enumerate() {
            if let Item::Block(b) = it {
                let j = used[k].as_ref().unwrap();
                let mut inner_stack = vec![states[k + 1]];
                inner_stack.extend_from_slice(stack);
                self.expand(&self.v.modules[j], &self.nested.blocks[*b].items, &inner_stack, out);
            }
            out.push(Configuration::with_stack(states[k + 1], stack.to_vec()));
        }
    }
}

/// Membership of `w` in `L(v)`. Ill-matched words are rejected; accepted
/// words come with an accepting recursive run.
pub fn vra_member(v: &Vra, w: &Word) -> Result<Membership, Error> {
    let Some(segs) = nest(&v.alphabet, w)? else {
        return Ok(Membership { accepted: false, witness: None, rejection: Some(Rejection::NotWellMatched) });
    };
    let s = Summaries::new(v, segs);
    if !s.accepts(&v.start, &s.nested.top) {
        return Ok(Membership { accepted: false, witness: None, rejection: Some(Rejection::NoAcceptingRun) });
    }
    let mut configurations = Vec::with_capacity(w.len() + 1);
    s.expand(&v.start, &s.nested.top, &[], &mut configurations);
    Ok(Membership {
        accepted: true,
        witness: Some(RecursiveRun { word: w.clone(), configurations }),
        rejection: None,
    })
}

/// For each automaton, the pairs `(q, p)` with `<q, ε> -w-> <p, ε>`.
pub fn module_relation(v: &Vra, w: &Word) -> Result<BTreeMap<ModuleTag, BTreeSet<(StateId, StateId)>>, Error> {
    let segs = nest(&v.alphabet, w)?.ok_or(Error::NotWellMatched)?;
    let s = Summaries::new(v, segs);
    let mut out = BTreeMap::new();
    for (tag, fa) in v.automata() {
        let mut rel = BTreeSet::new();
        for q in fa.states() {
            let fwd = s.forward(fa, BTreeSet::from([q]), &s.nested.top);
            rel.extend(fwd.last().unwrap().iter().map(|p| (q, *p)));
        }
        out.insert(tag, rel);
    }
    Ok(out)
}

/// The automata whose recursive language contains the well-matched word `w`.
pub fn accepting_modules(v: &Vra, w: &Word) -> Result<BTreeSet<ModuleTag>, Error> {
    let segs = nest(&v.alphabet, w)?.ok_or(Error::NotWellMatched)?;
    let s = Summaries::new(v, segs);
    Ok(v.automata().filter(|(_, fa)| s.accepts(fa, &s.nested.top)).map(|(t, _)| t).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{deterministic_example, running_example};

    fn id(v: &Vra, name: &str) -> StateId {
        v.automata().find_map(|(_, fa)| fa.state_by_name(name)).unwrap()
    }

    fn member(v: &Vra, s: &str) -> bool {
        vra_member(v, &Word::from_chars(s)).unwrap().accepted
    }

    #[test]
    fn running_example_memberships() {
        let v = running_example();
        assert!(member(&v, "ccrar"));
        assert!(member(&v, "car"));
        assert!(!member(&v, "ccarar"));
        assert!(!member(&v, ""));
        for prefix in ["c", "cc", "ccr", "ccra"] {
            let m = vra_member(&v, &Word::from_chars(prefix)).unwrap();
            assert_eq!(m.rejection, Some(Rejection::NotWellMatched), "{prefix}");
        }
    }

    #[test]
    fn witness_is_the_documented_run() {
        let v = running_example();
        let m = vra_member(&v, &Word::from_chars("ccrar")).unwrap();
        let run = m.witness.unwrap();
        assert!(validate_run(&v, &run));
        let (s0, s1, r0, r1, t0) = (id(&v, "s0"), id(&v, "s1"), id(&v, "r0"), id(&v, "r1"), id(&v, "t0"));
        let expected = vec![
            Configuration::new(s0),
            Configuration::with_stack(r0, vec![s1]),
            Configuration::with_stack(t0, vec![r0, s1]),
            Configuration::with_stack(r0, vec![s1]),
            Configuration::with_stack(r1, vec![s1]),
            Configuration::new(s1),
        ];
        assert_eq!(run.configurations, expected);
    }

    #[test]
    fn step_examples() {
        let v = running_example();
        let (s0, s1, r0, r1, t0) = (id(&v, "s0"), id(&v, "s1"), id(&v, "r0"), id(&v, "r1"), id(&v, "t0"));
        let got = step(&v, &Configuration::new(s0), &"c".into()).unwrap();
        assert_eq!(got, BTreeSet::from([Configuration::with_stack(r0, vec![s1])]));
        let got = step(&v, &Configuration::with_stack(r0, vec![s1]), &"c".into()).unwrap();
        let want = BTreeSet::from([
            Configuration::with_stack(t0, vec![r0, s1]),
            Configuration::with_stack(r0, vec![r1, s1]),
        ]);
        assert_eq!(got, want);
        let got = step(&v, &Configuration::with_stack(t0, vec![r0, s1]), &"r".into()).unwrap();
        assert_eq!(got, BTreeSet::from([Configuration::with_stack(r0, vec![s1])]));
        assert!(step(&v, &Configuration::new(s1), &"r".into()).unwrap().is_empty());
        assert_eq!(step(&v, &Configuration::new(s0), &"z".into()), Err(Error::UnknownSymbol("z".into())));
    }

    #[test]
    fn module_relation_examples() {
        let v = running_example();
        let r = ModuleTag::Proc("R".into());
        let (r0, r1) = (id(&v, "r0"), id(&v, "r1"));
        let rel = module_relation(&v, &Word::from_chars("cr")).unwrap();
        assert!(rel[&r].contains(&(r0, r0)));
        let rel = module_relation(&v, &Word::from_chars("a")).unwrap();
        assert!(rel[&r].contains(&(r0, r1)));
        assert_eq!(module_relation(&v, &Word::from_chars("rc")), Err(Error::NotWellMatched));
    }

    #[test]
    fn deterministic_example_memberships() {
        let v = deterministic_example();
        assert!(member(&v, "carcr"));
        assert!(!member(&v, "carcar"));
    }

    #[test]
    fn accepting_modules_of_car() {
        let v = running_example();
        let got = accepting_modules(&v, &Word::from_chars("car")).unwrap();
        let want = BTreeSet::from([ModuleTag::Start, ModuleTag::Proc("R".into()), ModuleTag::Proc("T".into())]);
        assert_eq!(got, want);
    }
}
