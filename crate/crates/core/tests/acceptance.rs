//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Ground truth comes from the step relation and word enumeration,
//! never from the algorithm under test.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use vra_core::codet::{codet_complete, codet_state_formula, is_codeterministic, is_complete, is_deterministic, is_spa, CodetOptions, DetIssue};
use vra_core::decide::{equivalent, includes, is_empty, is_universal};
use vra_core::fixtures::{deterministic_example, running_example, stack_example};
use vra_core::io::{export_dot, load_vpa, load_vra, save_vpa, save_vra};
use vra_core::ops::{
    vra_complement, vra_concat, vra_concat_cc, vra_intersect, vra_intersect_cc, vra_star, vra_star_cc, vra_union, vra_union_cc,
};
use vra_core::oracle::{bounded_equiv, count_wm, enumerate_wm, random_vra, EnumerationBudget, Equivalence, RandomVraConfig};
use vra_core::semantics::{accepting_modules, vra_member, Configuration, Rejection, Stepper};
use vra_core::vpa::{vpa_member, vpa_to_vra, vra_to_vpa};
use vra_core::{LetterKind, ModuleTag, ProcOrigin, PushdownAlphabet, Symbol, Vra, Word};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn member(v: &Vra, w: &Word) -> bool {
    vra_member(v, w).unwrap().accepted
}

fn words(alphabet: &PushdownAlphabet, max_len: usize) -> Vec<Word> {
    enumerate_wm(&EnumerationBudget::new(alphabet.clone(), max_len)).unwrap()
}

fn is_wm(alphabet: &PushdownAlphabet, w: &[Symbol]) -> bool {
    let mut depth = 0usize;
    for a in w {
        match alphabet.kind(a) {
            Some(LetterKind::Call) => depth += 1,
            Some(LetterKind::Return) if depth == 0 => return false,
            Some(LetterKind::Return) => depth -= 1,
            _ => {}
        }
    }
    depth == 0
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn pair_cfg(i: usize) -> RandomVraConfig {
    let k = 1 + i % 2;
    RandomVraConfig { letters_per_part: (k, k), ..RandomVraConfig::default() }
}

/// Random operand pairs over a shared alphabet.
fn random_pairs(n: usize, base: u64) -> Vec<(Vra, Vra)> {
    (0..n)
        .map(|i| {
            let cfg = pair_cfg(i);
            (random_vra(base + 2 * i as u64, &cfg), random_vra(base + 2 * i as u64 + 1, &cfg))
        })
        .collect()
}

/// Walks every prefix of a well-matched word up to `max_len`, carrying the
/// set of reachable configurations, and compares with `vra_member` at each
/// well-matched prefix. Returns the number of words compared.
fn differential(v: &Vra, max_len: usize) -> Result<usize, String> {
    let stepper = Stepper::new(v);
    let letters: Vec<(Symbol, LetterKind)> = v.alphabet.letters().map(|a| (a.clone(), v.alphabet.kind(a).unwrap())).collect();
    let mut prefix = Vec::new();
    let mut count = 0;
    let frontier: BTreeSet<Configuration> = stepper.initial_configurations().collect();
    walk(&stepper, &letters, max_len, &mut prefix, 0, &frontier, &mut count)?;
    Ok(count)
}

fn walk(
    s: &Stepper,
    letters: &[(Symbol, LetterKind)],
    max_len: usize,
    prefix: &mut Vec<Symbol>,
    pending: usize,
    frontier: &BTreeSet<Configuration>,
    count: &mut usize,
) -> Result<(), String> {
    if pending == 0 {
        *count += 1;
        let w = Word(prefix.clone());
        let oracle = frontier.iter().any(|c| s.is_accepting(c));
        if member(s.vra(), &w) != oracle {
            return Err(format!("disagreement on `{w}`: oracle says {oracle}"));
        }
    }
    if prefix.len() == max_len {
        return Ok(());
    }
    for (a, kind) in letters {
        let pending = match kind {
            LetterKind::Call => pending + 1,
            LetterKind::Return if pending == 0 => continue,
            LetterKind::Return => pending - 1,
            LetterKind::Internal => pending,
        };
        if pending > max_len - prefix.len() - 1 {
            continue;
        }
        let next: BTreeSet<Configuration> = frontier.iter().flat_map(|c| s.step(c, a)).collect();
        prefix.push(a.clone());
        walk(s, letters, max_len, prefix, pending, &next, count)?;
        prefix.pop();
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let v = running_example();
    for w in ["ccrar", "car"] {
        ensure(member(&v, &Word::from_chars(w)), || format!("running example rejects {w}"))?;
    }
    for w in ["ccarar", ""] {
        ensure(!member(&v, &Word::from_chars(w)), || format!("running example accepts `{w}`"))?;
    }
    for w in ["c", "cc", "ccr", "ccra"] {
        let m = vra_member(&v, &Word::from_chars(w)).unwrap();
        ensure(!m.accepted && m.rejection == Some(Rejection::NotWellMatched), || format!("prefix {w}: {m:?}"))?;
    }
    let d = deterministic_example();
    ensure(member(&d, &Word::from_chars("carcr")), || "deterministic example rejects carcr".into())?;
    ensure(!member(&d, &Word::from_chars("carcar")), || "deterministic example accepts carcar".into())?;
    ensure(vpa_member(&stack_example(), &Word::from_chars("accrar")).unwrap(), || "VPA rejects accrar".into())?;
    Ok("12 fixture verdicts exact".into())
}

fn criterion_2() -> Outcome {
    let mut vras = vec![running_example(), deterministic_example(), vpa_to_vra(&stack_example(), true), vpa_to_vra(&stack_example(), false)];
    vras.extend((0..100).map(|seed| random_vra(seed, &RandomVraConfig::default())));
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get());
    let chunk = vras.len().div_ceil(threads);
    let results: Vec<Result<usize, String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = vras
            .chunks(chunk)
            .map(|vs| {
                scope.spawn(move || {
                    let mut total = 0;
                    for v in vs {
                        let n = differential(v, 8)?;
                        let expected: u128 = (0..=8).map(|k| count_wm(&v.alphabet, k)).sum();
                        ensure(n as u128 == expected, || format!("walk visited {n} words, expected {expected}"))?;
                        total += n;
                    }
                    Ok(total)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut total = 0;
    for r in results {
        total += r?;
    }
    Ok(format!("{} automata, {total} words, 0 disagreements", vras.len()))
}

fn criterion_3() -> Outcome {
    let budget = |a: &PushdownAlphabet| EnumerationBudget::new(a.clone(), 8);
    let mut worst_quadratic: f64 = 0.0;
    let mut sources = vec![running_example(), deterministic_example()];
    sources.extend((500..520).map(|seed| random_vra(seed, &RandomVraConfig::default())));
    for v in &sources {
        let p = vra_to_vpa(v);
        let eq = bounded_equiv(v, &p, &budget(&v.alphabet)).unwrap();
        ensure(eq == Equivalence::Equal, || format!("VRA to VPA differs: {eq:?}"))?;
        let bound = 4 * v.size() * v.size();
        ensure(p.size() <= bound, || format!("VPA size {} exceeds 4|A|^2 = {bound}", p.size()))?;
        worst_quadratic = worst_quadratic.max(p.size() as f64 / (v.size() * v.size()) as f64);
    }
    let p = stack_example();
    let mut worst_quartic: f64 = 0.0;
    for trim in [false, true] {
        let v = vpa_to_vra(&p, trim);
        let eq = bounded_equiv(&p, &v, &budget(&p.alphabet)).unwrap();
        ensure(eq == Equivalence::Equal, || format!("VPA to VRA (trim {trim}) differs: {eq:?}"))?;
    }
    let mut vpas = vec![p];
    vpas.extend(sources.iter().skip(2).take(10).map(vra_to_vpa));
    for p in &vpas {
        let v = vpa_to_vra(p, false);
        let c = v.size() as f64 / (p.size() as f64).powi(4);
        ensure(c <= 1.0, || format!("untrimmed VRA size {} exceeds |P|^4 with |P| = {}", v.size(), p.size()))?;
        worst_quartic = worst_quartic.max(c);
    }
    let fig6 = vpa_to_vra(&vpas[0], false).size() as f64 / (vpas[0].size() as f64).powi(4);
    Ok(format!(
        "bounded-equal to length 8; VPA size <= {worst_quadratic:.3}|A|^2 (bound 4); untrimmed VRA size <= c|P|^4 with measured c = {fig6:.4} on the stack example, max {worst_quartic:.4} over {} inputs (bound 1)",
        vpas.len()
    ))
}

fn criterion_4() -> Outcome {
    let v = running_example();
    let b = codet_complete(&v, CodetOptions::default());
    let subsets: BTreeSet<BTreeSet<String>> = b
        .origins
        .values()
        .filter_map(|o| match o {
            ProcOrigin::Subset(s) => Some(s.members.iter().map(|j| j.to_string()).collect()),
            _ => None,
        })
        .collect();
    let want: BTreeSet<BTreeSet<String>> = [vec![], vec!["R"], vec!["T"], vec!["R", "T"]]
        .into_iter()
        .map(|s| s.into_iter().map(String::from).collect())
        .collect();
    ensure(subsets == want && b.procedural.len() == 4, || format!("subset symbols {subsets:?}"))?;
    ensure(is_codeterministic(&b).codeterministic, || "not codeterministic".into())?;
    let comp = is_complete(&b);
    ensure(comp.complete, || format!("not complete: {:?}", comp.failure))?;
    let labels = b.labels();
    for (tag, fa) in b.automata() {
        ensure(fa.is_complete_dfa(&labels), || format!("{tag} is not a complete DFA"))?;
    }
    let eq = bounded_equiv(&b, &v, &EnumerationBudget::new(v.alphabet.clone(), 8)).unwrap();
    ensure(eq == Equivalence::Equal, || format!("language changed: {eq:?}"))?;
    // 2^|Q^S| + 2^|{R,T}| * 2^(|Q^R| + |Q^T|), counted from the fixture
    let qs = v.start.state_count() as u32;
    let qj: u32 = v.modules.values().map(|fa| fa.state_count() as u32).sum();
    let expected = 2usize.pow(qs) + 2usize.pow(2) * 2usize.pow(qj);
    ensure(b.state_count() == expected && codet_state_formula(&v) == expected as u128, || {
        format!("{} states, formula {}, expected {expected}", b.state_count(), codet_state_formula(&v))
    })?;
    Ok(format!("4 subset symbols, {} states = formula, both predicates hold, bounded-equal to length 8", b.state_count()))
}

fn check_partition(b: &Vra, max_len: usize) -> Result<usize, String> {
    let ws = words(&b.alphabet, max_len);
    for w in &ws {
        let acc = accepting_modules(b, w).unwrap();
        for (c, r) in b.alphabet.pairs() {
            let hits = b.procedural.of_pair(&c, &r).into_iter().filter(|j| acc.contains(&ModuleTag::Proc(j.clone()))).count();
            ensure(hits == 1, || format!("`{w}` accepted by {hits} modules for <{c},{r}>"))?;
        }
    }
    Ok(ws.len())
}

fn criterion_5() -> Outcome {
    let trim = CodetOptions { trim: true };
    let mut checked = 0;
    let mut sources = vec![running_example()];
    sources.extend((200..220).map(|seed| random_vra(seed, &RandomVraConfig::default())));
    for v in &sources {
        let b = codet_complete(v, trim);
        checked += check_partition(&b, 6)?;
        let eq = bounded_equiv(&b, v, &EnumerationBudget::new(v.alphabet.clone(), 6)).unwrap();
        ensure(eq == Equivalence::Equal, || format!("normal form changed the language: {eq:?}"))?;
    }
    Ok(format!("{} automata, {checked} word checks, each pair accepted by exactly one module", sources.len()))
}

fn concat_oracle(a: &Vra, b: &Vra, w: &Word) -> bool {
    (0..=w.len()).any(|i| {
        let (x, y) = w.0.split_at(i);
        is_wm(&a.alphabet, x) && member(a, &Word(x.to_vec())) && member(b, &Word(y.to_vec()))
    })
}

fn star_oracle(a: &Vra, w: &Word) -> bool {
    let n = w.len();
    let mut ok = vec![false; n + 1];
    ok[0] = true;
    for j in 1..=n {
        ok[j] = (0..j).any(|i| ok[i] && is_wm(&a.alphabet, &w.0[i..j]) && member(a, &Word(w.0[i..j].to_vec())));
    }
    ok[n]
}

// Documented size constants for the closure constructions.
const UNION_C: usize = 1;
const CONCAT_C: usize = 2;
const STAR_C: usize = 2;
const INTERSECT_C: usize = 2;

fn criterion_6() -> Outcome {
    let mut ratios = [0f64; 4];
    for (a, b) in random_pairs(20, 1000) {
        let concat = vra_concat(&a, &b).unwrap();
        let star = vra_star(&a);
        let union = vra_union(&a, &b).unwrap();
        let inter = vra_intersect(&a, &b).unwrap();
        let comp = vra_complement(&a);
        for w in words(&a.alphabet, 6) {
            let (ia, ib) = (member(&a, &w), member(&b, &w));
            ensure(member(&concat, &w) == concat_oracle(&a, &b, &w), || format!("concat differs on `{w}`"))?;
            ensure(member(&star, &w) == star_oracle(&a, &w), || format!("star differs on `{w}`"))?;
            ensure(member(&union, &w) == (ia || ib), || format!("union differs on `{w}`"))?;
            ensure(member(&inter, &w) == (ia && ib), || format!("intersection differs on `{w}`"))?;
            ensure(member(&comp, &w) == !ia, || format!("complement differs on `{w}`"))?;
        }
        let (sa, sb) = (a.size(), b.size());
        ensure(union.size() <= UNION_C * (sa + sb) + 2, || format!("union size {} vs {sa}+{sb}", union.size()))?;
        ensure(concat.size() <= CONCAT_C * (sa + sb), || format!("concat size {} vs {sa}+{sb}", concat.size()))?;
        ensure(star.size() <= STAR_C * sa + 2, || format!("star size {} vs {sa}", star.size()))?;
        ensure(inter.size() <= INTERSECT_C * sa * sb, || format!("intersection size {} vs {sa}*{sb}", inter.size()))?;
        ensure(comp.state_count() as u128 <= codet_state_formula(&a), || format!("complement has {} states", comp.state_count()))?;
        ratios[0] = ratios[0].max(union.size() as f64 / (sa + sb) as f64);
        ratios[1] = ratios[1].max(concat.size() as f64 / (sa + sb) as f64);
        ratios[2] = ratios[2].max(star.size() as f64 / sa as f64);
        ratios[3] = ratios[3].max(inter.size() as f64 / (sa * sb) as f64);
    }
    Ok(format!(
        "20 pairs exact to length 6; max size ratios union {:.2}, concat {:.2}, star {:.2}, intersection {:.2} (per |A||B|); complement within the normal-form state bound",
        ratios[0], ratios[1], ratios[2], ratios[3]
    ))
}

fn criterion_7() -> Outcome {
    let mut nonempty = 0;
    let mut empty = 0;
    let mut long = 0;
    for seed in 300..350 {
        let v = random_vra(seed, &RandomVraConfig::default());
        let shortest = words(&v.alphabet, 8).into_iter().find(|w| member(&v, w));
        let cert = is_empty(&v);
        if let Some(w) = &cert.witness {
            ensure(member(&v, w), || format!("seed {seed}: witness `{w}` rejected"))?;
        }
        match (&shortest, cert.empty) {
            (Some(w), true) => return Err(format!("seed {seed}: reported empty but accepts `{w}`")),
            (Some(_), false) => nonempty += 1,
            (None, true) => empty += 1,
            (None, false) => long += 1,
        }
    }
    let mut counterexamples = 0;
    for seed in 400..420 {
        let v = random_vra(seed, &RandomVraConfig::default());
        let oracle = words(&v.alphabet, 6).into_iter().find(|w| !member(&v, w));
        let u = is_universal(&v);
        if let Some(w) = &u.counterexample {
            ensure(!u.holds && !member(&v, w) && is_wm(&v.alphabet, &w.0), || format!("seed {seed}: bad universality counterexample `{w}`"))?;
            counterexamples += 1;
        }
        ensure(oracle.is_none() || !u.holds, || format!("seed {seed}: universal but rejects {:?}", oracle))?;
    }
    let b = codet_complete(&running_example(), CodetOptions::default());
    let universal = vra_complement(&vra_intersect_cc(&b, &vra_complement(&b)).unwrap());
    ensure(is_universal(&universal).holds, || "complement of an empty language is not universal".into())?;
    for (i, (a, b)) in random_pairs(20, 2000).into_iter().enumerate() {
        let ws = words(&a.alphabet, 6);
        let inc = includes(&a, &b).unwrap();
        let oracle = ws.iter().find(|w| member(&a, w) && !member(&b, w));
        ensure(oracle.is_none() || !inc.holds, || format!("pair {i}: inclusion holds but `{}` separates", oracle.unwrap()))?;
        if let Some(w) = &inc.counterexample {
            ensure(member(&a, w) && !member(&b, w), || format!("pair {i}: bad inclusion counterexample `{w}`"))?;
            counterexamples += 1;
        }
        let eq = equivalent(&a, &b).unwrap();
        let oracle = ws.iter().find(|w| member(&a, w) != member(&b, w));
        ensure(oracle.is_none() || !eq.holds, || format!("pair {i}: equivalent but `{}` separates", oracle.unwrap()))?;
        if let Some(w) = &eq.counterexample {
            ensure(member(&a, w) != member(&b, w), || format!("pair {i}: bad equivalence counterexample `{w}`"))?;
            counterexamples += 1;
        }
        let meet = vra_intersect(&a, &b).unwrap();
        ensure(includes(&meet, &a).unwrap().holds, || format!("pair {i}: A meet B not included in A"))?;
        ensure(equivalent(&a, &a).unwrap().holds, || format!("pair {i}: A not equivalent to itself"))?;
    }
    Ok(format!(
        "emptiness: {nonempty} nonempty and {empty} empty agree with the oracle, {long} with witnesses beyond length 8 validated; {counterexamples} counterexamples validated"
    ))
}

fn criterion_8() -> Outcome {
    let v = running_example();
    let det = is_deterministic(&v);
    let cites_r0 = det.issues.iter().any(|i| {
        matches!(i, DetIssue::CallConflict { state, procedures, .. } if state == "r0" && procedures == &(Symbol::new("R"), Symbol::new("T")))
    });
    ensure(!det.deterministic && cites_r0, || format!("{det:?}"))?;
    let d = deterministic_example();
    ensure(is_deterministic(&d).deterministic, || "deterministic example rejected".into())?;
    ensure(!is_spa(&d), || "deterministic example reported as SPA".into())?;
    let rep = is_codeterministic(&v);
    let wit = rep.witness.clone().ok_or("no codeterminism witness")?;
    ensure(!rep.codeterministic, || "running example reported codeterministic".into())?;
    let acc = accepting_modules(&v, &wit.word).unwrap();
    let (j1, j2) = &wit.procedures;
    ensure(acc.contains(&ModuleTag::Proc(j1.clone())) && acc.contains(&ModuleTag::Proc(j2.clone())), || {
        format!("witness `{}` not in both {j1} and {j2}", wit.word)
    })?;
    let (r1, r2) = (v.rerooted(j1).unwrap(), v.rerooted(j2).unwrap());
    let shortest = words(&v.alphabet, 6).into_iter().find(|w| member(&r1, w) && member(&r2, w)).ok_or("oracle found no common word")?;
    ensure(wit.word.len() == shortest.len(), || format!("witness `{}` longer than `{shortest}`", wit.word))?;
    Ok(format!("r0 conflict cited; codeterminism witness `{}` shared by {j1} and {j2}", wit.word))
}

fn criterion_9() -> Outcome {
    let b = codet_complete(&running_example(), CodetOptions::default());
    let outs = [
        ("union", vra_union_cc(&b, &b).unwrap()),
        ("intersection", vra_intersect_cc(&b, &b).unwrap()),
        ("concatenation", vra_concat_cc(&b, &b).unwrap()),
        ("star", vra_star_cc(&b).unwrap()),
    ];
    let budget = EnumerationBudget::new(b.alphabet.clone(), 6);
    for (name, o) in &outs {
        ensure(is_codeterministic(o).codeterministic, || format!("{name} not codeterministic"))?;
        let c = is_complete(o);
        ensure(c.complete, || format!("{name} not complete: {:?}", c.failure))?;
        let labels = o.labels();
        for (tag, fa) in o.automata() {
            ensure(tag == ModuleTag::Start || fa.is_complete_dfa(&labels), || format!("{name}: {tag} not a complete DFA"))?;
        }
        ensure(o.start.is_complete_dfa(&labels), || format!("{name}: start not a complete DFA"))?;
    }
    for (o, plain) in [(&outs[0].1, vra_union(&b, &b).unwrap()), (&outs[2].1, vra_concat(&b, &b).unwrap())] {
        let eq = bounded_equiv(o, &plain, &budget).unwrap();
        ensure(eq == Equivalence::Equal, || format!("language mismatch {eq:?}"))?;
    }
    let sizes: Vec<String> = outs.iter().map(|(n, o)| format!("{n} {}", o.size())).collect();
    Ok(format!("all four outputs codeterministic and complete with complete DFAs ({})", sizes.join(", ")))
}

fn criterion_10() -> Outcome {
    let vras = [
        ("running.vra.json", running_example()),
        ("deterministic.vra.json", deterministic_example()),
        ("running-normal-form.vra.json", codet_complete(&running_example(), CodetOptions::default())),
    ];
    for (file, v) in &vras {
        let text = save_vra(v);
        let back = load_vra(&text).map_err(|e| e.to_string())?;
        ensure(save_vra(&back) == text, || format!("{file}: save after load differs"))?;
        let on_disk = std::fs::read_to_string(fixtures_dir().join(file)).map_err(|e| format!("{file}: {e}"))?;
        ensure(on_disk == text, || format!("{file} differs from the programmatic fixture"))?;
        let dot = export_dot(v);
        ensure(dot == export_dot(&back) && dot == export_dot(v), || format!("{file}: DOT output unstable"))?;
        ensure(dot.matches("subgraph cluster_").count() == 1 + v.procedural.len(), || format!("{file}: cluster count"))?;
    }
    let p = stack_example();
    let text = save_vpa(&p);
    let on_disk = std::fs::read_to_string(fixtures_dir().join("stack.vpa.json")).map_err(|e| e.to_string())?;
    ensure(on_disk == text, || "stack.vpa.json differs".into())?;
    let back = load_vpa(&on_disk).map_err(|e| e.to_string())?;
    ensure(save_vpa(&back) == text, || "VPA save after load differs".into())?;
    ensure(vpa_member(&back, &Word::from_chars("accrar")).unwrap(), || "loaded VPA rejects accrar".into())?;
    Ok("4 fixtures round-trip byte for byte; DOT stable".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("fixture memberships", criterion_1),
        ("membership agrees with brute force", criterion_2),
        ("VRA/VPA translations", criterion_3),
        ("codeterministic complete normal form", criterion_4),
        ("partition per call/return pair", criterion_5),
        ("closure operations", criterion_6),
        ("decision procedures", criterion_7),
        ("structural predicates", criterion_8),
        ("normal form preserved by closures", criterion_9),
        ("serialization and DOT", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {why}", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
