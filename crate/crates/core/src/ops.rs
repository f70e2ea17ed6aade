//! Closure operations on VRAs: union, concatenation, star, intersection,
//! complement, and their variants that keep the codeterministic complete
//! normal form.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::codet::{codet_complete, modules_in_normal_form, CodetOptions};
use crate::error::Error;
use crate::fa::{
    determinize_complete, fa_concat, fa_intersection, fa_product, fa_star, fa_union, relabel_to_supersets,
};
use crate::model::{FiniteAutomaton, ProcOrigin, ProceduralAlphabet, Symbol, Vra};

/// A procedural symbol of a product: a procedure of each operand, both
/// linked to `pair`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProcPairSymbol {
    pub left: Symbol,
    pub right: Symbol,
    pub pair: (Symbol, Symbol),
}

impl ProcPairSymbol {
    /// Display name `<left,right>`.
    pub fn name(&self) -> Symbol {
        Symbol::new(format!("<{},{}>", self.left, self.right))
    }
}

fn same_alphabet(a: &Vra, b: &Vra) -> Result<(), Error> {
    if a.alphabet == b.alphabet {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch)
    }
}

/// Renames the procedural symbols of `b` that clash with `a`'s by appending
/// primes, recording the original name.
fn rename_apart(a: &Vra, b: &Vra) -> Vra {
    let mut rename: BTreeMap<Symbol, Symbol> = BTreeMap::new();
    let mut taken: BTreeSet<Symbol> = a.procedural.symbols().chain(b.procedural.symbols()).cloned().collect();
    for j in b.procedural.symbols() {
        if a.procedural.contains(j) {
            let mut fresh = Symbol::new(format!("{j}'"));
            while taken.contains(&fresh) || a.alphabet.contains(&fresh) {
                fresh = Symbol::new(format!("{fresh}'"));
            }
            taken.insert(fresh.clone());
            rename.insert(j.clone(), fresh);
        }
    }
    if rename.is_empty() {
        return b.clone();
    }
    let map = |l: &Symbol| vec![rename.get(l).cloned().unwrap_or_else(|| l.clone())];
    let mut procedural = ProceduralAlphabet::new();
    let mut origins = BTreeMap::new();
    for (j, (c, r)) in b.procedural.iter() {
        let k = map(j).pop().unwrap();
        if let Some(o) = b.origins.get(j) {
            origins.insert(k.clone(), o.clone());
        }
        if k != *j {
            origins.insert(k.clone(), ProcOrigin::Renamed { renamed: j.clone() });
        }
        procedural.insert(k, c.clone(), r.clone());
    }
    let modules = b.modules.iter().map(|(j, fa)| (map(j).pop().unwrap(), fa.flat_map_labels(map))).collect();
    Vra { alphabet: b.alphabet.clone(), procedural, modules, start: b.start.flat_map_labels(map), origins }
}

/// Both operands' modules side by side, with `start` as the new start automaton.
fn side_by_side(a: &Vra, b: &Vra, start: FiniteAutomaton) -> Vra {
    let mut procedural = a.procedural.clone();
    for (j, (c, r)) in b.procedural.iter() {
        procedural.insert(j.clone(), c.clone(), r.clone());
    }
    let mut modules = a.modules.clone();
    modules.extend(b.modules.iter().map(|(j, fa)| (j.clone(), fa.clone())));
    let mut out = Vra::assemble(a.alphabet.clone(), procedural, modules, start);
    out.origins = a.origins.clone();
    out.origins.extend(b.origins.iter().map(|(j, o)| (j.clone(), o.clone())));
    out
}

/// `L(a) ∪ L(b)`.
pub fn vra_union(a: &Vra, b: &Vra) -> Result<Vra, Error> {
    same_alphabet(a, b)?;
    let b = rename_apart(a, b);
    Ok(side_by_side(a, &b, fa_union(&a.start, &b.start)))
}

/// `L(a) · L(b)`.
pub fn vra_concat(a: &Vra, b: &Vra) -> Result<Vra, Error> {
    same_alphabet(a, b)?;
    let b = rename_apart(a, b);
    Ok(side_by_side(a, &b, fa_concat(&a.start, &b.start)))
}

/// `L(a)*`.
pub fn vra_star(a: &Vra) -> Vra {
    let mut out = Vra::assemble(a.alphabet.clone(), a.procedural.clone(), a.modules.clone(), fa_star(&a.start));
    out.origins = a.origins.clone();
    out
}

/// Pair symbols `<J1, J2>` for procedures of `a` and `b` sharing a call/return pair.
struct Pairing {
    procedural: ProceduralAlphabet,
    origins: BTreeMap<Symbol, ProcOrigin>,
    /// left procedure -> [(right procedure, pair symbol)]
    by_left: BTreeMap<Symbol, Vec<(Symbol, Symbol)>>,
    /// right procedure -> pair symbols
    by_right: BTreeMap<Symbol, BTreeSet<Symbol>>,
    internal: BTreeSet<Symbol>,
}

impl Pairing {
    fn new(a: &Vra, b: &Vra) -> Self {
        let mut p = Pairing {
            procedural: ProceduralAlphabet::new(),
            origins: BTreeMap::new(),
            by_left: BTreeMap::new(),
            by_right: BTreeMap::new(),
            internal: a.alphabet.internal.clone(),
        };
        for (c, r) in a.alphabet.pairs() {
            for j1 in a.procedural.of_pair(&c, &r) {
                for j2 in b.procedural.of_pair(&c, &r) {
                    let origin = ProcPairSymbol { left: j1.clone(), right: j2.clone(), pair: (c.clone(), r.clone()) };
                    let mut name = origin.name();
                    while a.alphabet.contains(&name) {
                        name = Symbol::new(format!("{name}'"));
                    }
                    p.procedural.insert(name.clone(), c.clone(), r.clone());
                    p.origins.insert(name.clone(), ProcOrigin::Pair(origin));
                    p.by_left.entry(j1.clone()).or_default().push((j2.clone(), name.clone()));
                    p.by_right.entry(j2).or_default().insert(name);
                }
            }
        }
        p
    }

    fn partners(&self, x: &Symbol) -> Vec<(Symbol, Symbol)> {
        if self.internal.contains(x) {
            vec![(x.clone(), x.clone())]
        } else {
            self.by_left.get(x).cloned().unwrap_or_default()
        }
    }

    fn product(&self, x: &FiniteAutomaton, y: &FiniteAutomaton, accept: impl Fn(bool, bool) -> bool) -> FiniteAutomaton {
        fa_product(x, y, |l| self.partners(l), accept)
    }

    fn modules(&self, a: &Vra, b: &Vra) -> BTreeMap<Symbol, FiniteAutomaton> {
        let mut out = BTreeMap::new();
        for (j, origin) in &self.origins {
            let ProcOrigin::Pair(o) = origin else { unreachable!() };
            out.insert(j.clone(), self.product(&a.modules[&o.left], &b.modules[&o.right], |x, y| x && y));
        }
        out
    }

    fn labels(&self) -> BTreeSet<Symbol> {
        self.internal.iter().chain(self.procedural.symbols()).cloned().collect()
    }

    /// `J1 -> {<J1, J2>}` on the left operand's labels.
    fn left_expansion(&self, a: &Vra) -> BTreeMap<Symbol, BTreeSet<Symbol>> {
        let mut e: BTreeMap<Symbol, BTreeSet<Symbol>> =
            self.internal.iter().map(|x| (x.clone(), BTreeSet::from([x.clone()]))).collect();
        for j in a.procedural.symbols() {
            e.insert(j.clone(), self.by_left.get(j).into_iter().flatten().map(|(_, s)| s.clone()).collect());
        }
        e
    }

    /// `J2 -> {<J1, J2>}` on the right operand's labels.
    fn right_expansion(&self, b: &Vra) -> BTreeMap<Symbol, BTreeSet<Symbol>> {
        let mut e: BTreeMap<Symbol, BTreeSet<Symbol>> =
            self.internal.iter().map(|x| (x.clone(), BTreeSet::from([x.clone()]))).collect();
        for j in b.procedural.symbols() {
            e.insert(j.clone(), self.by_right.get(j).cloned().unwrap_or_default());
        }
        e
    }

    /// Like [`Pairing::build`], but only materializes pair modules reachable
    /// through procedural transitions from `start`.
    fn build_referenced(mut self, a: &Vra, b: &Vra, start: FiniteAutomaton) -> Vra {
        let mut modules = BTreeMap::new();
        let mut todo: Vec<Symbol> = start.labels().into_iter().filter(|l| self.origins.contains_key(l)).collect();
        while let Some(j) = todo.pop() {
            if modules.contains_key(&j) {
                continue;
            }
            let ProcOrigin::Pair(o) = &self.origins[&j] else { unreachable!() };
            let m = self.product(&a.modules[&o.left], &b.modules[&o.right], |x, y| x && y);
            todo.extend(m.labels().into_iter().filter(|l| self.origins.contains_key(l) && !modules.contains_key(l)));
            modules.insert(j, m);
        }
        let unused: Vec<Symbol> = self.procedural.symbols().filter(|j| !modules.contains_key(*j)).cloned().collect();
        for j in unused {
            self.procedural.remove(&j);
            self.origins.remove(&j);
        }
        let mut out = Vra::assemble(a.alphabet.clone(), self.procedural, modules, start);
        out.origins = self.origins;
        out
    }

    fn build(self, a: &Vra, b: &Vra, start: FiniteAutomaton) -> Vra {
        let modules = self.modules(a, b);
        let mut out = Vra::assemble(a.alphabet.clone(), self.procedural, modules, start);
        out.origins = self.origins;
        out
    }
}

/// `L(a) ∩ L(b)` by synchronized products of the start automata and of
/// pairs of modules sharing a call/return pair. Only pairs reachable from
/// the start product are built.
pub fn vra_intersect(a: &Vra, b: &Vra) -> Result<Vra, Error> {
    same_alphabet(a, b)?;
    let pairing = Pairing::new(a, b);
    let start = pairing.product(&a.start, &b.start, |x, y| x && y);
    Ok(pairing.build_referenced(a, b, start))
}

/// The start automaton is a complete DFA and the modules are in normal form.
pub fn is_normal_form(v: &Vra) -> bool {
    v.start.is_complete_dfa(&v.labels()) && modules_in_normal_form(v)
}

/// Well-matched words not in `L(a)`.
///
/// When the modules are already in normal form only the start automaton is
/// determinized; otherwise the trimmed normal form is built first.
pub fn vra_complement(a: &Vra) -> Vra {
    let mut b = if modules_in_normal_form(a) {
        let mut b = a.clone();
        let labels = a.labels();
        if !a.start.is_complete_dfa(&labels) {
            b = Vra::assemble(a.alphabet.clone(), a.procedural.clone(), a.modules.clone(), determinize_complete(&a.start, &labels));
            b.origins = a.origins.clone();
        }
        b
    } else {
        codet_complete(a, CodetOptions { trim: true })
    };
    let flipped = b.start.states().filter(|q| !b.start.is_final(*q)).collect();
    b.start.set_finals(flipped);
    b
}

fn require_normal(v: &Vra) -> Result<(), Error> {
    if is_normal_form(v) {
        Ok(())
    } else {
        Err(Error::NotCodetComplete)
    }
}

fn cc_setup(a: &Vra, b: &Vra) -> Result<(Pairing, FiniteAutomaton, FiniteAutomaton), Error> {
    same_alphabet(a, b)?;
    require_normal(a)?;
    require_normal(b)?;
    let pairing = Pairing::new(a, b);
    let left = relabel_to_supersets(&a.start, &pairing.left_expansion(a))?;
    let right = relabel_to_supersets(&b.start, &pairing.right_expansion(b))?;
    Ok((pairing, left, right))
}

/// Union of two normal-form VRAs, in normal form.
pub fn vra_union_cc(a: &Vra, b: &Vra) -> Result<Vra, Error> {
    let (pairing, left, right) = cc_setup(a, b)?;
    let start = fa_intersection(&left, &right, |x, y| x || y);
    Ok(pairing.build(a, b, start))
}

/// Intersection of two normal-form VRAs, in normal form.
pub fn vra_intersect_cc(a: &Vra, b: &Vra) -> Result<Vra, Error> {
    let (pairing, left, right) = cc_setup(a, b)?;
    let start = fa_intersection(&left, &right, |x, y| x && y);
    Ok(pairing.build(a, b, start))
}

/// Concatenation of two normal-form VRAs, in normal form.
pub fn vra_concat_cc(a: &Vra, b: &Vra) -> Result<Vra, Error> {
    let (pairing, left, right) = cc_setup(a, b)?;
    let start = determinize_complete(&fa_concat(&left, &right), &pairing.labels());
    Ok(pairing.build(a, b, start))
}

/// Kleene star of a normal-form VRA, in normal form.
pub fn vra_star_cc(a: &Vra) -> Result<Vra, Error> {
    require_normal(a)?;
    let start = determinize_complete(&fa_star(&a.start), &a.labels());
    let mut out = Vra::assemble(a.alphabet.clone(), a.procedural.clone(), a.modules.clone(), start);
    out.origins = a.origins.clone();
    Ok(out)
}
