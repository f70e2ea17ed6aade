//! JSON renderings of certificates for `--explain`. States appear under the
//! same names used in saved files.

use serde_json::{json, Value};
use vra_core::codet::{CodetReport, CompleteFailure, CompleteReport, DetIssue, DetReport};
use vra_core::decide::{EmptinessCertificate, Verdict};
use vra_core::semantics::{Membership, Rejection};
use vra_core::{Vra, WellMatchedInfo, Word};

pub fn word(w: &Word) -> Value {
    json!(w.letters().iter().map(|a| a.as_str()).collect::<Vec<_>>())
}

pub fn membership(v: &Vra, m: &Membership) -> Value {
    let labels = v.state_labels();
    let run = m.witness.as_ref().map(|run| {
        run.configurations
            .iter()
            .map(|c| json!({ "state": labels[&c.state], "stack": c.stack.iter().map(|q| &labels[q]).collect::<Vec<_>>() }))
            .collect::<Vec<_>>()
    });
    let rejection = m.rejection.map(|r| match r {
        Rejection::NotWellMatched => "not well matched",
        Rejection::NoAcceptingRun => "no accepting run",
    });
    json!({ "accepted": m.accepted, "run": run, "rejection": rejection })
}

pub fn classification(info: &WellMatchedInfo) -> Value {
    let decomposition = info.decomposition.as_ref().map(|d| {
        json!({
            "runs": d.runs.iter().map(word).collect::<Vec<_>>(),
            "factors": d.factors.iter().map(|f| json!({ "call": f.call.as_str(), "inner": word(&f.inner), "ret": f.ret.as_str() })).collect::<Vec<_>>(),
        })
    });
    json!({ "well_matched": info.is_well_matched, "depth": info.depth, "decomposition": decomposition })
}

pub fn emptiness(v: &Vra, cert: &EmptinessCertificate) -> Value {
    let labels = v.state_labels();
    json!({
        "empty": cert.empty,
        "reached": cert.reach.iter().map(|q| &labels[q]).collect::<Vec<_>>(),
        "enabled": cert.enabled.iter().map(|j| j.as_str()).collect::<Vec<_>>(),
        "witness": cert.witness.as_ref().map(word),
    })
}

pub fn verdict(v: &Verdict) -> Value {
    json!({ "holds": v.holds, "counterexample": v.counterexample.as_ref().map(word) })
}

pub fn codet(r: &CodetReport) -> Value {
    let witness = r.witness.as_ref().map(|w| json!({ "procedures": [w.procedures.0.as_str(), w.procedures.1.as_str()], "word": word(&w.word) }));
    json!({ "codeterministic": r.codeterministic, "witness": witness })
}

pub fn complete(r: &CompleteReport) -> Value {
    let failure = r.failure.as_ref().map(|f| match f {
        CompleteFailure::MissingTransition { module, state, label } => {
            json!({ "missing_transition": { "module": module.to_string(), "state": state, "label": label.as_str() } })
        }
        CompleteFailure::Uncovered { call, ret, word: w } => {
            json!({ "uncovered": { "call": call.as_str(), "ret": ret.as_str(), "word": word(w) } })
        }
    });
    json!({ "complete": r.complete, "failure": failure })
}

pub fn det(r: &DetReport) -> Value {
    let issues: Vec<Value> = r
        .issues
        .iter()
        .map(|i| match i {
            DetIssue::InitialCount { module, count } => json!({ "initial_count": { "module": module.to_string(), "count": count } }),
            DetIssue::Nondeterministic { module, state, label } => {
                json!({ "nondeterministic": { "module": module.to_string(), "state": state, "label": label.as_str() } })
            }
            DetIssue::CallConflict { module, state, call, procedures } => json!({
                "call_conflict": {
                    "module": module.to_string(),
                    "state": state,
                    "call": call.as_str(),
                    "procedures": [procedures.0.as_str(), procedures.1.as_str()],
                }
            }),
        })
        .collect();
    json!({ "deterministic": r.deterministic, "issues": issues })
}
