//! Alphabets, finite automata, visibly recursive automata and words.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::codet::ProcSubsetSymbol;
use crate::error::Error;
use crate::ops::ProcPairSymbol;

/// An alphabet symbol. Two symbols are equal iff their names are equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: impl AsRef<str>) -> Self {
        Symbol(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl From<String> for Symbol {
    fn from(s: String) -> Self {
        Symbol(Arc::from(s))
    }
}

impl From<&Symbol> for Symbol {
    fn from(s: &Symbol) -> Self {
        s.clone()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d).map(Symbol::from)
    }
}

/// Opaque state identifier. Unique across all automata of a valid [`Vra`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LetterKind {
    Internal,
    Call,
    Return,
}

impl fmt::Display for LetterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LetterKind::Internal => "internal",
            LetterKind::Call => "call",
            LetterKind::Return => "return",
        })
    }
}

/// The three parts of a pushdown alphabet. Disjointness is checked by
/// [`validate_vra`], not enforced here.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PushdownAlphabet {
    pub internal: BTreeSet<Symbol>,
    pub call: BTreeSet<Symbol>,
    pub ret: BTreeSet<Symbol>,
}

impl PushdownAlphabet {
    pub fn new<I, C, R>(internal: I, call: C, ret: R) -> Self
    where
        I: IntoIterator,
        I::Item: Into<Symbol>,
        C: IntoIterator,
        C::Item: Into<Symbol>,
        R: IntoIterator,
        R::Item: Into<Symbol>,
    {
        PushdownAlphabet {
            internal: internal.into_iter().map(Into::into).collect(),
            call: call.into_iter().map(Into::into).collect(),
            ret: ret.into_iter().map(Into::into).collect(),
        }
    }

    /// Kind of `s`, preferring internal, then call, then return.
    pub fn kind(&self, s: &Symbol) -> Option<LetterKind> {
        if self.internal.contains(s) {
            Some(LetterKind::Internal)
        } else if self.call.contains(s) {
            Some(LetterKind::Call)
        } else if self.ret.contains(s) {
            Some(LetterKind::Return)
        } else {
            None
        }
    }

    /// Internal letters, then calls, then returns.
    pub fn letters(&self) -> impl Iterator<Item = &Symbol> {
        self.internal.iter().chain(&self.call).chain(&self.ret)
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.kind(s).is_some()
    }

    /// All call/return pairs in lexicographic order.
    pub fn pairs(&self) -> Vec<(Symbol, Symbol)> {
        let mut out = Vec::with_capacity(self.call.len() * self.ret.len());
        for c in &self.call {
            for r in &self.ret {
                out.push((c.clone(), r.clone()));
            }
        }
        out
    }
}

/// Procedural symbols with their linking function `J -> (call, return)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProceduralAlphabet {
    link: BTreeMap<Symbol, (Symbol, Symbol)>,
}

impl ProceduralAlphabet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, j: impl Into<Symbol>, call: impl Into<Symbol>, ret: impl Into<Symbol>) {
        self.link.insert(j.into(), (call.into(), ret.into()));
    }

    pub fn remove(&mut self, j: &Symbol) -> Option<(Symbol, Symbol)> {
        self.link.remove(j)
    }

    pub fn link(&self, j: &Symbol) -> Option<&(Symbol, Symbol)> {
        self.link.get(j)
    }

    pub fn contains(&self, j: &Symbol) -> bool {
        self.link.contains_key(j)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.link.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &(Symbol, Symbol))> {
        self.link.iter()
    }

    pub fn len(&self) -> usize {
        self.link.len()
    }

    pub fn is_empty(&self) -> bool {
        self.link.is_empty()
    }

    /// Procedural symbols linked to `(call, ret)`, sorted.
    pub fn of_pair(&self, call: &Symbol, ret: &Symbol) -> Vec<Symbol> {
        self.link
            .iter()
            .filter(|(_, (c, r))| c == call && r == ret)
            .map(|(j, _)| j.clone())
            .collect()
    }

    /// Procedural symbols whose call part is `call`, sorted.
    pub fn with_call(&self, call: &Symbol) -> Vec<Symbol> {
        self.link.iter().filter(|(_, (c, _))| c == call).map(|(j, _)| j.clone()).collect()
    }
}

/// A nondeterministic finite automaton without ε-transitions.
///
/// Transitions may mention states that were never declared; such automata
/// are reported by [`validate_vra`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteAutomaton {
    names: BTreeMap<StateId, String>,
    initials: BTreeSet<StateId>,
    finals: BTreeSet<StateId>,
    delta: BTreeMap<StateId, BTreeMap<Symbol, BTreeSet<StateId>>>,
}

impl FiniteAutomaton {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a state with the next unused id.
    pub fn add_state(&mut self, name: impl Into<String>) -> StateId {
        let next = self
            .names
            .keys()
            .next_back()
            .into_iter()
            .chain(self.delta.keys().next_back())
            .map(|q| q.0 + 1)
            .max()
            .unwrap_or(0);
        let id = StateId(next);
        self.names.insert(id, name.into());
        id
    }

    pub fn insert_state(&mut self, id: StateId, name: impl Into<String>) {
        self.names.insert(id, name.into());
    }

    pub fn add_initial(&mut self, q: StateId) {
        self.initials.insert(q);
    }

    pub fn add_final(&mut self, q: StateId) {
        self.finals.insert(q);
    }

    pub fn set_finals(&mut self, finals: BTreeSet<StateId>) {
        self.finals = finals;
    }

    pub fn add_transition(&mut self, q: StateId, label: impl Into<Symbol>, p: StateId) {
        self.delta.entry(q).or_default().entry(label.into()).or_default().insert(p);
    }

    pub fn states(&self) -> impl DoubleEndedIterator<Item = StateId> + '_ {
        self.names.keys().copied()
    }

    pub fn contains(&self, q: StateId) -> bool {
        self.names.contains_key(&q)
    }

    pub fn name(&self, q: StateId) -> &str {
        self.names.get(&q).map(String::as_str).unwrap_or("?")
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.names.iter().find(|(_, n)| n.as_str() == name).map(|(q, _)| *q)
    }

    pub fn initials(&self) -> &BTreeSet<StateId> {
        &self.initials
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn is_initial(&self, q: StateId) -> bool {
        self.initials.contains(&q)
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals.contains(&q)
    }

    pub fn successors(&self, q: StateId, label: &Symbol) -> impl Iterator<Item = StateId> + '_ {
        self.delta.get(&q).and_then(|m| m.get(label)).into_iter().flatten().copied()
    }

    /// Outgoing transitions of `q`, grouped by label in label order.
    pub fn outgoing(&self, q: StateId) -> impl Iterator<Item = (&Symbol, &BTreeSet<StateId>)> {
        self.delta.get(&q).into_iter().flatten()
    }

    /// All transitions as `(source, label, target)` in lexicographic order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, &Symbol, StateId)> {
        self.delta
            .iter()
            .flat_map(|(q, m)| m.iter().flat_map(move |(a, ps)| ps.iter().map(move |p| (*q, a, *p))))
    }

    pub fn has_transition(&self, q: StateId, label: &Symbol, p: StateId) -> bool {
        self.delta.get(&q).and_then(|m| m.get(label)).is_some_and(|ps| ps.contains(&p))
    }

    pub fn labels(&self) -> BTreeSet<Symbol> {
        self.delta.values().flat_map(|m| m.keys().cloned()).collect()
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn transition_count(&self) -> usize {
        self.delta.values().flat_map(|m| m.values()).map(BTreeSet::len).sum()
    }

    /// `|Q| + |δ|`.
    pub fn size(&self) -> usize {
        self.state_count() + self.transition_count()
    }

    /// Exactly one initial state and at most one successor per state and label.
    pub fn is_deterministic(&self) -> bool {
        self.initials.len() == 1 && self.delta.values().flat_map(|m| m.values()).all(|ps| ps.len() <= 1)
    }

    /// Every state has at least one successor on every label in `labels`.
    pub fn is_complete(&self, labels: &BTreeSet<Symbol>) -> bool {
        self.first_incomplete(labels).is_none()
    }

    pub fn first_incomplete(&self, labels: &BTreeSet<Symbol>) -> Option<(StateId, Symbol)> {
        for q in self.states() {
            for a in labels {
                if self.successors(q, a).next().is_none() {
                    return Some((q, a.clone()));
                }
            }
        }
        None
    }

    pub fn is_complete_dfa(&self, labels: &BTreeSet<Symbol>) -> bool {
        self.is_deterministic()
            && self.is_complete(labels)
            && self.labels().is_subset(labels)
    }

    /// Post-image of `set` under `label`.
    pub fn image(&self, set: &BTreeSet<StateId>, label: &Symbol) -> BTreeSet<StateId> {
        set.iter().flat_map(|q| self.successors(*q, label)).collect()
    }

    /// States reachable from the initial states.
    pub fn reachable(&self) -> BTreeSet<StateId> {
        let mut seen: BTreeSet<StateId> = self.initials.clone();
        let mut todo: Vec<StateId> = seen.iter().copied().collect();
        while let Some(q) = todo.pop() {
            for (_, ps) in self.outgoing(q) {
                for p in ps {
                    if seen.insert(*p) {
                        todo.push(*p);
                    }
                }
            }
        }
        seen
    }

    /// Sub-automaton induced by `keep`.
    pub fn restrict(&self, keep: &BTreeSet<StateId>) -> Self {
        let mut out = FiniteAutomaton::new();
        for (q, n) in &self.names {
            if keep.contains(q) {
                out.names.insert(*q, n.clone());
            }
        }
        out.initials = self.initials.intersection(keep).copied().collect();
        out.finals = self.finals.intersection(keep).copied().collect();
        for (q, a, p) in self.transitions() {
            if keep.contains(&q) && keep.contains(&p) {
                out.add_transition(q, a.clone(), p);
            }
        }
        out
    }

    /// Drops states unreachable from the initial states.
    pub fn trim_unreachable(&self) -> Self {
        self.restrict(&self.reachable())
    }

    /// Renames every state through `f`, which must be injective.
    pub fn map_states(&self, mut f: impl FnMut(StateId) -> StateId) -> Self {
        let mut out = FiniteAutomaton::new();
        let mut cache = BTreeMap::new();
        let mut g = |q: StateId| *cache.entry(q).or_insert_with(|| f(q));
        for (q, n) in &self.names {
            out.names.insert(g(*q), n.clone());
        }
        out.initials = self.initials.iter().map(|q| g(*q)).collect();
        out.finals = self.finals.iter().map(|q| g(*q)).collect();
        for (q, a, p) in self.transitions() {
            out.add_transition(g(q), a.clone(), g(p));
        }
        out
    }

    /// Replaces each label by the labels `f` returns (none drops the transition).
    pub fn flat_map_labels(&self, mut f: impl FnMut(&Symbol) -> Vec<Symbol>) -> Self {
        let mut out = FiniteAutomaton {
            names: self.names.clone(),
            initials: self.initials.clone(),
            finals: self.finals.clone(),
            delta: BTreeMap::new(),
        };
        for (q, a, p) in self.transitions() {
            for b in f(a) {
                out.add_transition(q, b, p);
            }
        }
        out
    }

    /// Renumbers states to `offset, offset+1, ...` in id order, including
    /// undeclared states mentioned by transitions.
    pub fn renumbered(&self, offset: u32) -> Self {
        let mut all: BTreeSet<StateId> = self.names.keys().copied().collect();
        all.extend(self.initials.iter().chain(&self.finals));
        for (q, _, p) in self.transitions() {
            all.insert(q);
            all.insert(p);
        }
        let map: BTreeMap<StateId, StateId> =
            all.into_iter().enumerate().map(|(i, q)| (q, StateId(offset + i as u32))).collect();
        self.map_states(|q| map[&q])
    }

    /// One past the largest id mentioned anywhere in the automaton.
    pub fn id_bound(&self) -> u32 {
        let mut hi = 0;
        let mut bump = |q: &StateId| hi = hi.max(q.0 + 1);
        self.names.keys().for_each(&mut bump);
        self.initials.iter().chain(&self.finals).for_each(&mut bump);
        for (q, _, p) in self.transitions() {
            bump(&q);
            bump(&p);
        }
        hi
    }
}

/// Module of a VRA: the starting automaton or the automaton of a procedural symbol.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModuleTag {
    Start,
    Proc(Symbol),
}

impl fmt::Display for ModuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleTag::Start => f.write_str("S"),
            ModuleTag::Proc(j) => write!(f, "{j}"),
        }
    }
}

/// How a synthesized procedural symbol was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProcOrigin {
    Subset(ProcSubsetSymbol),
    Pair(ProcPairSymbol),
    /// A procedure of a VPA translation: enter at `from`, leave at `to`.
    Summary { from: String, to: String, call: Symbol, ret: Symbol },
    /// A symbol renamed apart to keep two operands' procedural alphabets disjoint.
    Renamed { renamed: Symbol },
}

/// A visibly recursive automaton.
///
/// Fields are public so ill-formed automata can be built and diagnosed with
/// [`validate_vra`]; the algorithms assume a valid automaton.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vra {
    pub alphabet: PushdownAlphabet,
    pub procedural: ProceduralAlphabet,
    pub modules: BTreeMap<Symbol, FiniteAutomaton>,
    pub start: FiniteAutomaton,
    pub origins: BTreeMap<Symbol, ProcOrigin>,
}

impl Vra {
    /// Builds a VRA, renumbering states so that automata are disjoint:
    /// the start automaton first, then modules in symbol order.
    pub fn assemble(
        alphabet: PushdownAlphabet,
        procedural: ProceduralAlphabet,
        modules: BTreeMap<Symbol, FiniteAutomaton>,
        start: FiniteAutomaton,
    ) -> Vra {
        let start = start.renumbered(0);
        let mut next = start.id_bound();
        let modules = modules
            .into_iter()
            .map(|(j, fa)| {
                let fa = fa.renumbered(next);
                next = next.max(fa.id_bound());
                (j, fa)
            })
            .collect();
        Vra { alphabet, procedural, modules, start, origins: BTreeMap::new() }
    }

    pub fn module(&self, tag: &ModuleTag) -> Option<&FiniteAutomaton> {
        match tag {
            ModuleTag::Start => Some(&self.start),
            ModuleTag::Proc(j) => self.modules.get(j),
        }
    }

    /// The start automaton followed by the modules in symbol order.
    pub fn automata(&self) -> impl Iterator<Item = (ModuleTag, &FiniteAutomaton)> {
        std::iter::once((ModuleTag::Start, &self.start))
            .chain(self.modules.iter().map(|(j, fa)| (ModuleTag::Proc(j.clone()), fa)))
    }

    /// `Σ_int ∪ Σ_proc`, the label set of every automaton.
    pub fn labels(&self) -> BTreeSet<Symbol> {
        self.alphabet.internal.iter().chain(self.procedural.symbols()).cloned().collect()
    }

    pub fn state_count(&self) -> usize {
        self.automata().map(|(_, fa)| fa.state_count()).sum()
    }

    pub fn transition_count(&self) -> usize {
        self.automata().map(|(_, fa)| fa.transition_count()).sum()
    }

    /// Total number of states plus transitions.
    pub fn size(&self) -> usize {
        self.state_count() + self.transition_count()
    }

    /// Owning module of each declared state.
    pub fn owners(&self) -> BTreeMap<StateId, ModuleTag> {
        let mut out = BTreeMap::new();
        for (tag, fa) in self.automata() {
            for q in fa.states() {
                out.entry(q).or_insert_with(|| tag.clone());
            }
        }
        out
    }

    /// Display name of a state, wherever it lives.
    pub fn state_name(&self, q: StateId) -> &str {
        self.automata().find(|(_, fa)| fa.contains(q)).map(|(_, fa)| fa.name(q)).unwrap_or("?")
    }

    /// Pairwise distinct labels for all states: the display name when it is
    /// unique, otherwise `module/name`, with a numeric suffix as last resort.
    pub fn state_labels(&self) -> BTreeMap<StateId, String> {
        let mut count: BTreeMap<&str, usize> = BTreeMap::new();
        for (_, fa) in self.automata() {
            for q in fa.states() {
                *count.entry(fa.name(q)).or_default() += 1;
            }
        }
        let mut taken: BTreeSet<String> = count
            .iter()
            .filter(|(_, n)| **n == 1)
            .map(|(s, _)| s.to_string())
            .collect();
        let mut out = BTreeMap::new();
        for (tag, fa) in self.automata() {
            for q in fa.states() {
                let name = fa.name(q);
                let label = if count[name] == 1 {
                    name.to_string()
                } else {
                    let base = format!("{tag}/{name}");
                    let mut cand = base.clone();
                    let mut k = 1;
                    while taken.contains(&cand) {
                        cand = format!("{base}#{k}");
                        k += 1;
                    }
                    taken.insert(cand.clone());
                    cand
                };
                out.insert(q, label);
            }
        }
        out
    }

    /// Same modules, with the start replaced by a fresh copy of the module of `j`.
    pub fn rerooted(&self, j: &Symbol) -> Option<Vra> {
        let fa = self.modules.get(j)?.clone();
        let mut v = Vra::assemble(self.alphabet.clone(), self.procedural.clone(), self.modules.clone(), fa);
        v.origins = self.origins.clone();
        Some(v)
    }
}

/// A structural problem in a [`Vra`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    /// A pushdown letter occurs in two parts of the alphabet.
    OverlappingLetter { symbol: Symbol, kinds: (LetterKind, LetterKind) },
    /// A procedural symbol is also a pushdown letter.
    ProceduralClash { symbol: Symbol },
    /// The linking function maps outside `Σ_call × Σ_ret`.
    BadLink { procedure: Symbol, call: Symbol, ret: Symbol },
    MissingModule { procedure: Symbol },
    OrphanModule { symbol: Symbol },
    /// A state id is used by more than one automaton.
    SharedState { state: StateId, modules: Vec<ModuleTag> },
    UnknownLabel { module: ModuleTag, label: Symbol },
    /// An initial, final or transition endpoint that is not a declared state.
    UndeclaredState { module: ModuleTag, state: StateId },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::OverlappingLetter { symbol, kinds } => {
                write!(f, "letter `{symbol}` is both {} and {}", kinds.0, kinds.1)
            }
            Diagnostic::ProceduralClash { symbol } => {
                write!(f, "procedural symbol `{symbol}` is also a pushdown letter")
            }
            Diagnostic::BadLink { procedure, call, ret } => {
                write!(f, "`{procedure}` is linked to ({call}, {ret}), outside call x return")
            }
            Diagnostic::MissingModule { procedure } => write!(f, "no automaton for `{procedure}`"),
            Diagnostic::OrphanModule { symbol } => {
                write!(f, "automaton `{symbol}` has no procedural symbol")
            }
            Diagnostic::SharedState { state, modules } => {
                let ms: Vec<String> = modules.iter().map(ToString::to_string).collect();
                write!(f, "state {state} is shared by automata {}", ms.join(", "))
            }
            Diagnostic::UnknownLabel { module, label } => {
                write!(f, "automaton {module} uses label `{label}` outside internal and procedural symbols")
            }
            Diagnostic::UndeclaredState { module, state } => {
                write!(f, "automaton {module} refers to undeclared state {state}")
            }
        }
    }
}

/// Structural diagnostics for `v`; empty iff `v` is well formed.
pub fn validate_vra(v: &Vra) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let a = &v.alphabet;
    for s in &a.internal {
        if a.call.contains(s) {
            out.push(Diagnostic::OverlappingLetter { symbol: s.clone(), kinds: (LetterKind::Internal, LetterKind::Call) });
        }
        if a.ret.contains(s) {
            out.push(Diagnostic::OverlappingLetter { symbol: s.clone(), kinds: (LetterKind::Internal, LetterKind::Return) });
        }
    }
    for s in a.call.intersection(&a.ret) {
        out.push(Diagnostic::OverlappingLetter { symbol: s.clone(), kinds: (LetterKind::Call, LetterKind::Return) });
    }
    for (j, (c, r)) in v.procedural.iter() {
        if a.contains(j) {
            out.push(Diagnostic::ProceduralClash { symbol: j.clone() });
        }
        if !a.call.contains(c) || !a.ret.contains(r) {
            out.push(Diagnostic::BadLink { procedure: j.clone(), call: c.clone(), ret: r.clone() });
        }
        if !v.modules.contains_key(j) {
            out.push(Diagnostic::MissingModule { procedure: j.clone() });
        }
    }
    for j in v.modules.keys() {
        if !v.procedural.contains(j) {
            out.push(Diagnostic::OrphanModule { symbol: j.clone() });
        }
    }
    let mut users: BTreeMap<StateId, Vec<ModuleTag>> = BTreeMap::new();
    for (tag, fa) in v.automata() {
        for q in fa.states() {
            users.entry(q).or_default().push(tag.clone());
        }
    }
    for (q, tags) in users {
        if tags.len() > 1 {
            out.push(Diagnostic::SharedState { state: q, modules: tags });
        }
    }
    let labels = v.labels();
    for (tag, fa) in v.automata() {
        for l in fa.labels() {
            if !labels.contains(&l) {
                out.push(Diagnostic::UnknownLabel { module: tag.clone(), label: l });
            }
        }
        let mut undeclared = BTreeSet::new();
        for q in fa.initials().iter().chain(fa.finals()) {
            if !fa.contains(*q) {
                undeclared.insert(*q);
            }
        }
        for (q, _, p) in fa.transitions() {
            for s in [q, p] {
                if !fa.contains(s) {
                    undeclared.insert(s);
                }
            }
        }
        for q in undeclared {
            out.push(Diagnostic::UndeclaredState { module: tag.clone(), state: q });
        }
    }
    out
}

/// A finite word over a pushdown alphabet.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn new(letters: impl IntoIterator<Item = impl Into<Symbol>>) -> Self {
        Word(letters.into_iter().map(Into::into).collect())
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// One letter per character; convenient for single-character alphabets.
    pub fn from_chars(s: &str) -> Self {
        Word(s.chars().map(|c| Symbol::new(c.to_string())).collect())
    }

    /// Whitespace-separated letter names, each of which must be in `alphabet`.
    pub fn parse(text: &str, alphabet: &PushdownAlphabet) -> Result<Self, Error> {
        let w = Word::new(text.split_whitespace());
        w.check(alphabet)?;
        Ok(w)
    }

    /// Fails with the first letter outside `alphabet`.
    pub fn check(&self, alphabet: &PushdownAlphabet) -> Result<(), Error> {
        match self.0.iter().find(|s| !alphabet.contains(s)) {
            Some(s) => Err(Error::UnknownSymbol(s.to_string())),
            None => Ok(()),
        }
    }

    pub fn letters(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).cloned().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let parts: Vec<&str> = self.0.iter().map(Symbol::as_str).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Nesting structure of a well-matched word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Segment {
    Letter(Symbol),
    Nested { call: Symbol, inner: Vec<Segment>, ret: Symbol },
}

impl Segment {
    pub fn push_letters(&self, out: &mut Vec<Symbol>) {
        match self {
            Segment::Letter(a) => out.push(a.clone()),
            Segment::Nested { call, inner, ret } => {
                out.push(call.clone());
                inner.iter().for_each(|s| s.push_letters(out));
                out.push(ret.clone());
            }
        }
    }
}

pub fn segments_word(segs: &[Segment]) -> Word {
    let mut out = Vec::new();
    segs.iter().for_each(|s| s.push_letters(&mut out));
    Word(out)
}

/// Parses `w` into its nesting structure, or `None` if it is not well matched.
pub fn nest(alphabet: &PushdownAlphabet, w: &Word) -> Result<Option<Vec<Segment>>, Error> {
    w.check(alphabet)?;
    let mut stack: Vec<(Symbol, Vec<Segment>)> = Vec::new();
    let mut cur: Vec<Segment> = Vec::new();
    for s in w.letters() {
        match alphabet.kind(s) {
            Some(LetterKind::Internal) => cur.push(Segment::Letter(s.clone())),
            Some(LetterKind::Call) => stack.push((s.clone(), std::mem::take(&mut cur))),
            Some(LetterKind::Return) => match stack.pop() {
                Some((call, outer)) => {
                    let inner = std::mem::replace(&mut cur, outer);
                    cur.push(Segment::Nested { call, inner, ret: s.clone() });
                }
                None => return Ok(None),
            },
            None => unreachable!("checked above"),
        }
    }
    Ok(stack.is_empty().then_some(cur))
}

/// `c w r` occurring at top level of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub call: Symbol,
    pub inner: Word,
    pub ret: Symbol,
}

/// `u_0 c_1 w_1 r_1 u_1 ... c_n w_n r_n u_n` with `runs = [u_0..u_n]` and
/// `factors = [c_i w_i r_i]`, so `runs.len() == factors.len() + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub runs: Vec<Word>,
    pub factors: Vec<Factor>,
}

impl Decomposition {
    pub fn word(&self) -> Word {
        let mut out = self.runs[0].0.clone();
        for (f, u) in self.factors.iter().zip(&self.runs[1..]) {
            out.push(f.call.clone());
            out.extend(f.inner.0.iter().cloned());
            out.push(f.ret.clone());
            out.extend(u.0.iter().cloned());
        }
        Word(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WellMatchedInfo {
    pub is_well_matched: bool,
    /// Largest number of pending calls over all prefixes.
    pub depth: usize,
    pub decomposition: Option<Decomposition>,
}

/// Well-matchedness, nesting depth and top-level decomposition of `w`.
pub fn classify(alphabet: &PushdownAlphabet, w: &Word) -> Result<WellMatchedInfo, Error> {
    let segs = nest(alphabet, w)?;
    let mut open = 0usize;
    let mut depth = 0usize;
    for s in w.letters() {
        match alphabet.kind(s) {
            Some(LetterKind::Call) => {
                open += 1;
                depth = depth.max(open);
            }
            Some(LetterKind::Return) => open = open.saturating_sub(1),
            _ => {}
        }
    }
    let decomposition = segs.map(|segs| {
        let mut runs = vec![Word::empty()];
        let mut factors = Vec::new();
        for s in segs {
            match s {
                Segment::Letter(a) => runs.last_mut().unwrap().0.push(a),
                Segment::Nested { call, inner, ret } => {
                    factors.push(Factor { call, inner: segments_word(&inner), ret });
                    runs.push(Word::empty());
                }
            }
        }
        Decomposition { runs, factors }
    });
    Ok(WellMatchedInfo { is_well_matched: decomposition.is_some(), depth, decomposition })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn abc() -> PushdownAlphabet {
        PushdownAlphabet::new(["a"], ["c"], ["r"])
    }

    #[test]
    fn classify_examples() {
        let a = abc();
        let i = classify(&a, &Word::from_chars("ccrar")).unwrap();
        assert!(i.is_well_matched);
        assert_eq!(i.depth, 2);
        let d = i.decomposition.unwrap();
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.factors[0].inner, Word::from_chars("cra"));
        assert_eq!(d.word(), Word::from_chars("ccrar"));

        let e = classify(&a, &Word::empty()).unwrap();
        assert!(e.is_well_matched && e.depth == 0);
        assert!(!classify(&a, &Word::from_chars("rc")).unwrap().is_well_matched);
        assert!(classify(&a, &Word::from_chars("accrar")).unwrap().is_well_matched);
        assert_eq!(
            classify(&a, &Word::from_chars("cxr")),
            Err(Error::UnknownSymbol("x".into()))
        );
    }

    #[test]
    fn decomposition_runs_and_factors() {
        let a = abc();
        let d = classify(&a, &Word::from_chars("acracr"))
            .unwrap()
            .decomposition
            .unwrap();
        assert_eq!(d.runs, vec![Word::from_chars("a"), Word::from_chars("a"), Word::empty()]);
        assert_eq!(d.factors.len(), 2);
    }

    #[test]
    fn fixtures_are_valid() {
        assert!(validate_vra(&fixtures::running_example()).is_empty());
        assert!(validate_vra(&fixtures::deterministic_example()).is_empty());
    }

    #[test]
    fn shared_state_is_one_diagnostic() {
        let mut v = fixtures::running_example();
        let t0 = v.modules[&Symbol::new("T")].states().next().unwrap();
        let r = v.modules.get_mut(&Symbol::new("R")).unwrap();
        r.insert_state(t0, "shared");
        let d = validate_vra(&v);
        assert_eq!(d.len(), 1, "{d:?}");
        assert!(matches!(d[0], Diagnostic::SharedState { .. }));
    }

    #[test]
    fn bad_link_is_one_diagnostic() {
        let mut v = fixtures::running_example();
        v.procedural.insert("R", "c", "x");
        let d = validate_vra(&v);
        assert_eq!(d, vec![Diagnostic::BadLink { procedure: "R".into(), call: "c".into(), ret: "x".into() }]);
    }

    #[test]
    fn empty_call_alphabet_is_legal() {
        let mut start = FiniteAutomaton::new();
        let q = start.add_state("q");
        start.add_initial(q);
        start.add_final(q);
        start.add_transition(q, "a", q);
        let v = Vra::assemble(
            PushdownAlphabet::new(["a"], Vec::<&str>::new(), Vec::<&str>::new()),
            ProceduralAlphabet::new(),
            BTreeMap::new(),
            start,
        );
        assert!(validate_vra(&v).is_empty());
    }

    #[test]
    fn state_labels_disambiguate() {
        let mut fa = FiniteAutomaton::new();
        let q = fa.add_state("x");
        fa.add_initial(q);
        let mut modules = BTreeMap::new();
        modules.insert(Symbol::new("J"), fa.clone());
        let mut p = ProceduralAlphabet::new();
        p.insert("J", "c", "r");
        let v = Vra::assemble(abc(), p, modules, fa);
        let labels: BTreeSet<String> = v.state_labels().into_values().collect();
        assert_eq!(labels, ["J/x".to_string(), "S/x".to_string()].into_iter().collect());
    }
}
