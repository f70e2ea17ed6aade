//! Inputs shared by the criterion benchmarks in `benches/`.

use vra_core::oracle::{enumerate_wm, random_vra, EnumerationBudget, RandomVraConfig};
use vra_core::{Vra, Word};

/// Seeded random VRAs with the default generator shape.
pub fn random_suite(n: u64) -> Vec<Vra> {
    (0..n).map(|seed| random_vra(seed, &RandomVraConfig::default())).collect()
}

/// The longest well-matched words of length at most `max_len` over `v`'s alphabet.
pub fn longest_words(v: &Vra, max_len: usize, take: usize) -> Vec<Word> {
    let mut ws = enumerate_wm(&EnumerationBudget::new(v.alphabet.clone(), max_len)).expect("small budget");
    ws.reverse();
    ws.truncate(take);
    ws
}

/// The word `c^n a r^n`, nested `n` deep.
pub fn nested_word(n: usize) -> Word {
    let mut letters = vec!["c"; n];
    letters.push("a");
    letters.extend(std::iter::repeat_n("r", n));
    Word::new(letters)
}
