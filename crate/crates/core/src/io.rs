//! JSON interchange for VRAs and VPAs, and Graphviz export.
//!
//! Output is canonical: object keys are sorted, state and symbol lists are
//! sorted by name, so `save(load(text)) == text` for any saved text. The
//! format is described in `docs/format.md`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::model::{validate_vra, FiniteAutomaton, LetterKind, ProcOrigin, ProceduralAlphabet, PushdownAlphabet, StateId, Symbol, Vra};
use crate::vpa::Vpa;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlphabetJson {
    internal: Vec<Symbol>,
    call: Vec<Symbol>,
    ret: Vec<Symbol>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FaJson {
    states: Vec<String>,
    initials: Vec<String>,
    finals: Vec<String>,
    transitions: Vec<(String, Symbol, String)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProcJson {
    symbol: Symbol,
    call: Symbol,
    ret: Symbol,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    origin: Option<ProcOrigin>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VraJson {
    alphabet: AlphabetJson,
    procedural: Vec<ProcJson>,
    modules: BTreeMap<Symbol, FaJson>,
    start: FaJson,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VpaJson {
    alphabet: AlphabetJson,
    stack_alphabet: Vec<Symbol>,
    states: Vec<String>,
    initials: Vec<String>,
    finals: Vec<String>,
    internal_transitions: Vec<(String, Symbol, String)>,
    call_transitions: Vec<(String, Symbol, String, Symbol)>,
    return_transitions: Vec<(String, Symbol, Symbol, String)>,
}

fn alphabet_json(a: &PushdownAlphabet) -> AlphabetJson {
    AlphabetJson {
        internal: a.internal.iter().cloned().collect(),
        call: a.call.iter().cloned().collect(),
        ret: a.ret.iter().cloned().collect(),
    }
}

fn alphabet_from(a: AlphabetJson) -> PushdownAlphabet {
    PushdownAlphabet::new(a.internal, a.call, a.ret)
}

fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

fn to_canonical(value: impl Serialize) -> String {
    // serde_json's map type is ordered by key, which gives sorted output
    let v = serde_json::to_value(value).expect("automata serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

fn fa_json(fa: &FiniteAutomaton, labels: &BTreeMap<StateId, String>) -> FaJson {
    let l = |q: &StateId| labels.get(q).cloned().unwrap_or_else(|| format!("?{}", q.0));
    FaJson {
        states: sorted(fa.states().map(|q| l(&q)).collect()),
        initials: sorted(fa.initials().iter().map(l).collect()),
        finals: sorted(fa.finals().iter().map(l).collect()),
        transitions: sorted(fa.transitions().map(|(q, a, p)| (l(&q), a.clone(), l(&p))).collect()),
    }
}

/// Canonical JSON text of `v`.
pub fn save_vra(v: &Vra) -> String {
    let labels = v.state_labels();
    let json = VraJson {
        alphabet: alphabet_json(&v.alphabet),
        procedural: v
            .procedural
            .iter()
            .map(|(j, (c, r))| ProcJson { symbol: j.clone(), call: c.clone(), ret: r.clone(), origin: v.origins.get(j).cloned() })
            .collect(),
        modules: v.modules.iter().map(|(j, fa)| (j.clone(), fa_json(fa, &labels))).collect(),
        start: fa_json(&v.start, &labels),
    };
    to_canonical(json)
}

/// State names are global: the same name in two automata denotes one
/// state, which validation then reports as shared.
struct Namer {
    ids: BTreeMap<String, StateId>,
}

impl Namer {
    fn id(&mut self, name: &str) -> StateId {
        let next = StateId(self.ids.len() as u32);
        *self.ids.entry(name.to_string()).or_insert(next)
    }

    fn fa(&mut self, j: FaJson) -> FiniteAutomaton {
        let mut fa = FiniteAutomaton::new();
        for s in &j.states {
            let q = self.id(s);
            fa.insert_state(q, s.clone());
        }
        for s in &j.initials {
            let q = self.id(s);
            fa.add_initial(q);
        }
        for s in &j.finals {
            let q = self.id(s);
            fa.add_final(q);
        }
        for (q, a, p) in j.transitions {
            let (q, p) = (self.id(&q), self.id(&p));
            fa.add_transition(q, a, p);
        }
        fa
    }
}

/// Parses and validates a VRA.
pub fn load_vra(text: &str) -> Result<Vra, Error> {
    let json: VraJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut namer = Namer { ids: BTreeMap::new() };
    let start = namer.fa(json.start);
    let modules = json.modules.into_iter().map(|(j, fa)| (j, namer.fa(fa))).collect();
    let mut procedural = ProceduralAlphabet::new();
    let mut origins = BTreeMap::new();
    for p in json.procedural {
        if procedural.contains(&p.symbol) {
            return Err(Error::Parse(format!("procedural symbol `{}` listed twice", p.symbol)));
        }
        if let Some(o) = p.origin {
            origins.insert(p.symbol.clone(), o);
        }
        procedural.insert(p.symbol, p.call, p.ret);
    }
    let v = Vra { alphabet: alphabet_from(json.alphabet), procedural, modules, start, origins };
    let diags = validate_vra(&v);
    if diags.is_empty() {
        Ok(v)
    } else {
        Err(Error::Validation(diags))
    }
}

/// Canonical JSON text of `p`.
pub fn save_vpa(p: &Vpa) -> String {
    let labels = p.state_labels();
    let l = |q: &StateId| labels[q].clone();
    let json = VpaJson {
        alphabet: alphabet_json(&p.alphabet),
        stack_alphabet: p.stack_alphabet.iter().cloned().collect(),
        states: sorted(labels.values().cloned().collect()),
        initials: sorted(p.initials.iter().map(l).collect()),
        finals: sorted(p.finals.iter().map(l).collect()),
        internal_transitions: sorted(p.internal.iter().map(|(q, a, q2)| (l(q), a.clone(), l(q2))).collect()),
        call_transitions: sorted(p.calls.iter().map(|(q, c, q2, g)| (l(q), c.clone(), l(q2), g.clone())).collect()),
        return_transitions: sorted(p.returns.iter().map(|(q, r, g, q2)| (l(q), r.clone(), g.clone(), l(q2))).collect()),
    };
    to_canonical(json)
}

/// Parses and checks a VPA: states, letters of the right kind, stack symbols.
pub fn load_vpa(text: &str) -> Result<Vpa, Error> {
    let json: VpaJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut p = Vpa::new(alphabet_from(json.alphabet));
    p.stack_alphabet = json.stack_alphabet.into_iter().collect();
    let mut ids = BTreeMap::new();
    for s in &json.states {
        if ids.contains_key(s) {
            return Err(Error::Parse(format!("state `{s}` listed twice")));
        }
        ids.insert(s.clone(), p.add_state(s.clone()));
    }
    let mut problems = Vec::new();
    let id = |s: &str, problems: &mut Vec<String>| match ids.get(s) {
        Some(q) => Some(*q),
        None => {
            problems.push(format!("undeclared state `{s}`"));
            None
        }
    };
    let kind = |a: &Symbol, want: LetterKind, problems: &mut Vec<String>| {
        let ok = p.alphabet.kind(a) == Some(want);
        if !ok {
            problems.push(format!("`{a}` is not a {want} letter"));
        }
        ok
    };
    let stack = p.stack_alphabet.clone();
    let gamma = |g: &Symbol, problems: &mut Vec<String>| {
        let ok = stack.contains(g);
        if !ok {
            problems.push(format!("`{g}` is not a stack symbol"));
        }
        ok
    };
    for s in &json.initials {
        if let Some(q) = id(s, &mut problems) {
            p.initials.insert(q);
        }
    }
    for s in &json.finals {
        if let Some(q) = id(s, &mut problems) {
            p.finals.insert(q);
        }
    }
    for (q, a, q2) in json.internal_transitions {
        if let (Some(q), true, Some(q2)) = (id(&q, &mut problems), kind(&a, LetterKind::Internal, &mut problems), id(&q2, &mut problems)) {
            p.internal.insert((q, a, q2));
        }
    }
    for (q, c, q2, g) in json.call_transitions {
        let ok = kind(&c, LetterKind::Call, &mut problems) & gamma(&g, &mut problems);
        if let (Some(q), true, Some(q2)) = (id(&q, &mut problems), ok, id(&q2, &mut problems)) {
            p.calls.insert((q, c, q2, g));
        }
    }
    for (q, r, g, q2) in json.return_transitions {
        let ok = kind(&r, LetterKind::Return, &mut problems) & gamma(&g, &mut problems);
        if let (Some(q), true, Some(q2)) = (id(&q, &mut problems), ok, id(&q2, &mut problems)) {
            p.returns.insert((q, r, g, q2));
        }
    }
    if problems.is_empty() {
        Ok(p)
    } else {
        Err(Error::Parse(problems.join("; ")))
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(ch),
        }
    }
    out.push('"');
    out
}

/// Graphviz text with one cluster per automaton; final states are double
/// circles and initial states have an entry arrow.
pub fn export_dot(v: &Vra) -> String {
    let labels = v.state_labels();
    let mut out = String::from("digraph vra {\n  rankdir=LR;\n  node [shape=circle];\n");
    for (k, (tag, fa)) in v.automata().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{k} {{");
        let _ = writeln!(out, "    label={};", quote(&tag.to_string()));
        let _ = writeln!(out, "    style=dashed;");
        // node names follow label order so output is independent of state ids
        let mut order: Vec<StateId> = fa.states().collect();
        order.sort_by(|x, y| labels[x].cmp(&labels[y]));
        let node: BTreeMap<StateId, String> = order.iter().enumerate().map(|(i, q)| (*q, format!("n{k}_{i}"))).collect();
        for q in &order {
            let shape = if fa.is_final(*q) { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "    {} [label={}, shape={shape}];", node[q], quote(&labels[q]));
        }
        for q in order.iter().filter(|q| fa.is_initial(**q)) {
            let _ = writeln!(out, "    {0}_init [shape=point];", node[q]);
            let _ = writeln!(out, "    {0}_init -> {0};", node[q]);
        }
        let mut edges: BTreeMap<(&str, &str), BTreeSet<&Symbol>> = BTreeMap::new();
        for (q, a, p) in fa.transitions() {
            edges.entry((node[&q].as_str(), node[&p].as_str())).or_default().insert(a);
        }
        for ((q, p), ls) in edges {
            let l: Vec<&str> = ls.iter().map(|s| s.as_str()).collect();
            let _ = writeln!(out, "    {q} -> {p} [label={}];", quote(&l.join(", ")));
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

/// Graphviz text for a VPA; call edges read `c / push g` and return edges
/// `r / pop g`.
pub fn export_vpa_dot(p: &Vpa) -> String {
    let labels = p.state_labels();
    let mut order: Vec<StateId> = p.states().collect();
    order.sort_by(|x, y| labels[x].cmp(&labels[y]));
    let node: BTreeMap<StateId, String> = order.iter().enumerate().map(|(i, q)| (*q, format!("n{i}"))).collect();
    let mut out = String::from("digraph vpa {\n  rankdir=LR;\n  node [shape=circle];\n");
    for q in &order {
        let shape = if p.finals.contains(q) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  {} [label={}, shape={shape}];", node[q], quote(&labels[q]));
    }
    for q in order.iter().filter(|q| p.initials.contains(q)) {
        let _ = writeln!(out, "  {0}_init [shape=point];", node[q]);
        let _ = writeln!(out, "  {0}_init -> {0};", node[q]);
    }
    let mut edges: BTreeMap<(&str, &str), BTreeSet<String>> = BTreeMap::new();
    for (q, a, q2) in &p.internal {
        edges.entry((&node[q], &node[q2])).or_default().insert(a.to_string());
    }
    for (q, c, q2, g) in &p.calls {
        edges.entry((&node[q], &node[q2])).or_default().insert(format!("{c} / push {g}"));
    }
    for (q, r, g, q2) in &p.returns {
        edges.entry((&node[q], &node[q2])).or_default().insert(format!("{r} / pop {g}"));
    }
    for ((q, q2), ls) in edges {
        let l: Vec<&str> = ls.iter().map(String::as_str).collect();
        let _ = writeln!(out, "  {q} -> {q2} [label={}];", quote(&l.join(", ")));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codet::{codet_complete, CodetOptions};
    use crate::fixtures::{deterministic_example, running_example, stack_example};
    use crate::vpa::vpa_to_vra;

    #[test]
    fn vra_round_trip_is_identity_on_text() {
        for v in [running_example(), deterministic_example(), codet_complete(&running_example(), CodetOptions::default()), vpa_to_vra(&stack_example(), true)] {
            let text = save_vra(&v);
            let back = load_vra(&text).unwrap();
            assert_eq!(save_vra(&back), text);
            assert_eq!(back.size(), v.size());
            assert_eq!(back.origins, v.origins);
        }
    }

    #[test]
    fn vpa_round_trip() {
        let text = save_vpa(&stack_example());
        assert_eq!(save_vpa(&load_vpa(&text).unwrap()), text);
    }

    #[test]
    fn subset_origin_serializes_with_pair_and_members() {
        let text = save_vra(&codet_complete(&running_example(), CodetOptions::default()));
        assert!(text.contains("\"members\""));
        assert!(text.contains("\"pair\": [\n          \"c\",\n          \"r\"\n        ]"), "{text}");
    }

    #[test]
    fn shared_state_names_fail_validation() {
        let text = save_vra(&running_example()).replace("\"t0\"", "\"r0\"");
        match load_vra(&text) {
            Err(Error::Validation(d)) => assert!(!d.is_empty()),
            other => panic!("{other:?}"),
        }
        assert!(matches!(load_vra("{"), Err(Error::Parse(_))));
        let overlap = save_vra(&running_example()).replacen("\"c\"\n    ],\n    \"internal\": [\n      \"a\"", "\"c\"\n    ],\n    \"internal\": [\n      \"c\"", 1);
        match load_vra(&overlap) {
            Err(e @ Error::Validation(_)) => assert!(e.to_string().contains('c'), "{e}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dot_is_deterministic_with_one_cluster_per_automaton() {
        let b = codet_complete(&running_example(), CodetOptions::default());
        let d = export_dot(&b);
        assert_eq!(d, export_dot(&b.clone()));
        assert_eq!(d, export_dot(&load_vra(&save_vra(&b)).unwrap()));
        assert_eq!(d.matches("subgraph cluster_").count(), 1 + b.procedural.len());
        let rendered = export_dot(&running_example());
        assert!(rendered.contains("doublecircle"));
        for name in ["S", "R", "T"] {
            assert!(rendered.contains(&format!("label=\"{name}\";")), "{rendered}");
        }
        let vpa = export_vpa_dot(&stack_example());
        assert!(vpa.contains("c / push g") && vpa.contains("r / pop g"), "{vpa}");
        assert_eq!(vpa, export_vpa_dot(&load_vpa(&save_vpa(&stack_example())).unwrap()));
    }
}
