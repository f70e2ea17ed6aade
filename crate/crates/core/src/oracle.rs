//! Reference implementations for differential testing: enumeration of
//! well-matched words, membership by exhaustive configuration search,
//! bounded equivalence, and a seeded random VRA generator.
//!
//! Nothing here shares code with the membership algorithm in
//! [`crate::semantics::vra_member`]; brute-force search only uses the
//! one-letter step relation.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::model::{FiniteAutomaton, ProceduralAlphabet, PushdownAlphabet, Symbol, Vra, Word};
use crate::semantics::{vra_member, Configuration, Stepper};
use crate::vpa::{vpa_member, Vpa};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_len: usize,
    pub max_words: usize,
    pub alphabet: PushdownAlphabet,
}

impl EnumerationBudget {
    pub fn new(alphabet: PushdownAlphabet, max_len: usize) -> Self {
        EnumerationBudget { max_len, max_words: 2_000_000, alphabet }
    }
}

/// All well-matched words of length at most `max_len`, shortest first and
/// lexicographic within a length (internal < call < return letters, each
/// part in name order).
pub fn enumerate_wm(budget: &EnumerationBudget) -> Result<Vec<Word>, Error> {
    let a = &budget.alphabet;
    let order: BTreeMap<&Symbol, usize> = a.letters().enumerate().map(|(i, s)| (s, i)).collect();
    // by_len[n]: words of length n, generated from S -> ε | a S | c S r S
    let mut by_len: Vec<Vec<Vec<Symbol>>> = vec![vec![Vec::new()]];
    let mut total = 1usize;
    for n in 1..=budget.max_len {
        let mut words: Vec<Vec<Symbol>> = Vec::new();
        for x in &a.internal {
            for w in &by_len[n - 1] {
                let mut v = Vec::with_capacity(n);
                v.push(x.clone());
                v.extend(w.iter().cloned());
                words.push(v);
            }
        }
        if n >= 2 {
            for c in &a.call {
                for k in 0..=n - 2 {
                    for inner in &by_len[k] {
                        for r in &a.ret {
                            for rest in &by_len[n - 2 - k] {
                                let mut v = Vec::with_capacity(n);
                                v.push(c.clone());
                                v.extend(inner.iter().cloned());
                                v.push(r.clone());
                                v.extend(rest.iter().cloned());
                                words.push(v);
                            }
                        }
                    }
                }
            }
        }
        total += words.len();
        if total > budget.max_words {
            return Err(Error::BudgetExceeded(budget.max_words));
        }
        words.sort_by_cached_key(|w| w.iter().map(|s| order[s]).collect::<Vec<_>>());
        by_len.push(words);
    }
    Ok(by_len.into_iter().flatten().map(Word).collect())
}

/// Number of well-matched words of length `n`, by counting letter sequences
/// whose pending-call count never goes negative and ends at zero.
pub fn count_wm(alphabet: &PushdownAlphabet, n: usize) -> u128 {
    let (i, c, r) = (alphabet.internal.len() as u128, alphabet.call.len() as u128, alphabet.ret.len() as u128);
    let mut dp = vec![0u128; n + 2];
    dp[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u128; n + 2];
        for d in 0..=n {
            if dp[d] == 0 {
                continue;
            }
            next[d] += dp[d] * i;
            next[d + 1] += dp[d] * c;
            if d > 0 {
                next[d - 1] += dp[d] * r;
            }
        }
        dp = next;
    }
    dp[0]
}

/// Membership by breadth-first search over configurations, discarding
/// configurations whose stack exceeds `stack_bound`.
pub fn brute_force_member(v: &Vra, w: &Word, stack_bound: usize) -> bool {
    let s = Stepper::new(v);
    let mut frontier: BTreeSet<Configuration> = s.initial_configurations().collect();
    for a in w.letters() {
        let mut next = BTreeSet::new();
        for c in &frontier {
            next.extend(s.step(c, a).into_iter().filter(|d| d.stack.len() <= stack_bound));
        }
        if next.is_empty() {
            return false;
        }
        frontier = next;
    }
    frontier.iter().any(|c| s.is_accepting(c))
}

/// Anything that decides membership of words over a pushdown alphabet.
pub trait Acceptor {
    fn accepts(&self, w: &Word) -> bool;
}

impl Acceptor for Vra {
    fn accepts(&self, w: &Word) -> bool {
        vra_member(self, w).map(|m| m.accepted).unwrap_or(false)
    }
}

impl Acceptor for Vpa {
    fn accepts(&self, w: &Word) -> bool {
        vpa_member(self, w).unwrap_or(false)
    }
}

/// A VRA decided by [`brute_force_member`] with the word length as stack bound.
pub struct BruteForce<'a>(pub &'a Vra);

impl Acceptor for BruteForce<'_> {
    fn accepts(&self, w: &Word) -> bool {
        brute_force_member(self.0, w, w.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equal,
    DifferAt(Word),
}

/// Compares two acceptors on every well-matched word within the budget;
/// reports the first word (in enumeration order) where they disagree.
pub fn bounded_equiv(a: &dyn Acceptor, b: &dyn Acceptor, budget: &EnumerationBudget) -> Result<Equivalence, Error> {
    for w in enumerate_wm(budget)? {
        if a.accepts(&w) != b.accepts(&w) {
            return Ok(Equivalence::DifferAt(w));
        }
    }
    Ok(Equivalence::Equal)
}

/// Shape of generated VRAs. Ranges are inclusive.
#[derive(Clone, Debug)]
pub struct RandomVraConfig {
    /// Number of automata including the start automaton.
    pub automata: (usize, usize),
    pub states: (usize, usize),
    pub density: (f64, f64),
    pub letters_per_part: (usize, usize),
}

impl Default for RandomVraConfig {
    fn default() -> Self {
        RandomVraConfig { automata: (1, 4), states: (1, 4), density: (0.3, 0.8), letters_per_part: (1, 2) }
    }
}

/// A random valid VRA. Letters are `a b` (internal), `c d` (call), `r s`
/// (return) and procedures `A B C`, so words can be written one letter per
/// character.
pub fn random_vra(seed: u64, cfg: &RandomVraConfig) -> Vra {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let part = |names: &[&str], rng: &mut ChaCha8Rng| -> Vec<Symbol> {
        let k = rng.gen_range(cfg.letters_per_part.0..=cfg.letters_per_part.1).min(names.len());
        names[..k].iter().map(Symbol::new).collect()
    };
    let internal = part(&["a", "b"], &mut rng);
    let call = part(&["c", "d"], &mut rng);
    let ret = part(&["r", "s"], &mut rng);
    let alphabet = PushdownAlphabet::new(internal.clone(), call.clone(), ret.clone());
    let n_procs = rng.gen_range(cfg.automata.0..=cfg.automata.1) - 1;
    let proc_names = ["A", "B", "C", "D", "E"];
    let mut procedural = ProceduralAlphabet::new();
    for j in &proc_names[..n_procs.min(proc_names.len())] {
        let c = call[rng.gen_range(0..call.len())].clone();
        let r = ret[rng.gen_range(0..ret.len())].clone();
        procedural.insert(*j, c, r);
    }
    let labels: Vec<Symbol> = alphabet.internal.iter().chain(procedural.symbols()).cloned().collect();
    let density = rng.gen_range(cfg.density.0..=cfg.density.1);
    let automaton = |prefix: &str, rng: &mut ChaCha8Rng| {
        let n = rng.gen_range(cfg.states.0..=cfg.states.1);
        let mut fa = FiniteAutomaton::new();
        let qs: Vec<_> = (0..n).map(|i| fa.add_state(format!("{prefix}{i}"))).collect();
        fa.add_initial(qs[0]);
        for q in &qs[1..] {
            if rng.gen_bool(0.15) {
                fa.add_initial(*q);
            }
        }
        for q in &qs {
            if rng.gen_bool(0.4) {
                fa.add_final(*q);
            }
        }
        for q in &qs {
            for l in &labels {
                if rng.gen_bool(density) {
                    fa.add_transition(*q, l.clone(), qs[rng.gen_range(0..n)]);
                    if rng.gen_bool(density * density / 2.0) {
                        fa.add_transition(*q, l.clone(), qs[rng.gen_range(0..n)]);
                    }
                }
            }
        }
        fa
    };
    let start = automaton("s", &mut rng);
    let modules: BTreeMap<Symbol, FiniteAutomaton> = procedural
        .symbols()
        .cloned()
        .collect::<Vec<_>>()
        .into_iter()
        .map(|j| {
            let prefix = j.as_str().to_lowercase();
            (j, automaton(&prefix, &mut rng))
        })
        .collect();
    Vra::assemble(alphabet, procedural, modules, start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::running_example;
    use crate::model::{classify, validate_vra};
    use proptest::prelude::*;

    fn abc() -> PushdownAlphabet {
        PushdownAlphabet::new(["a"], ["c"], ["r"])
    }

    #[test]
    fn small_enumeration() {
        let ws = enumerate_wm(&EnumerationBudget::new(abc(), 2)).unwrap();
        let got: Vec<String> = ws.iter().map(|w| w.letters().iter().map(Symbol::as_str).collect()).collect();
        assert_eq!(got, vec!["", "a", "aa", "cr"]);
    }

    #[test]
    fn enumeration_counts_match_dp() {
        for alphabet in [abc(), PushdownAlphabet::new(["a", "b"], ["c", "d"], ["r"])] {
            let ws = enumerate_wm(&EnumerationBudget::new(alphabet.clone(), 8)).unwrap();
            for n in 0..=8 {
                let k = ws.iter().filter(|w| w.len() == n).count() as u128;
                assert_eq!(k, count_wm(&alphabet, n), "length {n}");
            }
            assert!(ws.iter().all(|w| classify(&alphabet, w).unwrap().is_well_matched));
            let unique: BTreeSet<&Word> = ws.iter().collect();
            assert_eq!(unique.len(), ws.len());
        }
        // Motzkin numbers for the one-letter-per-part alphabet
        let m: Vec<u128> = (0..=10).map(|n| count_wm(&abc(), n)).collect();
        assert_eq!(m, vec![1, 1, 2, 4, 9, 21, 51, 127, 323, 835, 2188]);
    }

    #[test]
    fn budget_is_enforced() {
        let b = EnumerationBudget { max_len: 6, max_words: 10, alphabet: abc() };
        assert_eq!(enumerate_wm(&b), Err(Error::BudgetExceeded(10)));
    }

    #[test]
    fn brute_force_agrees_on_running_example() {
        let v = running_example();
        assert!(brute_force_member(&v, &Word::from_chars("ccrar"), 5));
        assert!(!brute_force_member(&v, &Word::from_chars("ccarar"), 6));
        assert!(!brute_force_member(&v, &Word::from_chars("ccra"), 4));
    }

    #[test]
    fn random_vras_are_valid_and_deterministic_in_seed() {
        let cfg = RandomVraConfig::default();
        for seed in 0..50 {
            let v = random_vra(seed, &cfg);
            assert!(validate_vra(&v).is_empty(), "seed {seed}: {:?}", validate_vra(&v));
            assert_eq!(v, random_vra(seed, &cfg));
            assert!((1..=4).contains(&(v.modules.len() + 1)));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn member_matches_brute_force(seed in 0u64..10_000, pick in 0usize..1000) {
            let v = random_vra(seed, &RandomVraConfig::default());
            let ws = enumerate_wm(&EnumerationBudget::new(v.alphabet.clone(), 5)).unwrap();
            let w = &ws[pick % ws.len()];
            prop_assert_eq!(vra_member(&v, w).unwrap().accepted, brute_force_member(&v, w, w.len()));
        }
    }
}
