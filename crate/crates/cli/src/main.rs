//! `vra`: command-line access to the library.
//!
//! Exit status is 0 for an affirmative verdict or a successful
//! transformation, 1 for a negative verdict and 2 for unusable input.

mod explain;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use vra_core::codet::{codet_complete, is_codeterministic, is_complete, is_deterministic, is_spa, CodetOptions};
use vra_core::decide::{equivalent, includes, is_empty, is_universal};
use vra_core::io::{export_dot, export_vpa_dot, load_vpa, load_vra, save_vpa, save_vra};
use vra_core::ops::{
    vra_complement, vra_concat, vra_concat_cc, vra_intersect, vra_intersect_cc, vra_star, vra_star_cc, vra_union, vra_union_cc,
};
use vra_core::oracle::{bounded_equiv, random_vra, Acceptor, EnumerationBudget, Equivalence, RandomVraConfig};
use vra_core::semantics::vra_member;
use vra_core::vpa::{vpa_to_vra, vra_to_vpa};
use vra_core::{classify, Vpa, Vra, Word};

#[derive(Parser)]
#[command(name = "vra", version, about = "Visibly recursive automata: membership, normal forms, closures and decisions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// Automaton JSON file; `-` or absent reads standard input.
    #[arg(long, short)]
    input: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Explain {
    /// Write witnesses and certificates as JSON to standard error.
    #[arg(long)]
    explain: bool,
}

#[derive(Args, Clone)]
struct Trim {
    /// Drop unreachable states and unreferenced procedures (default).
    #[arg(long, overrides_with = "no_trim")]
    trim: bool,
    /// Keep the full construction.
    #[arg(long, overrides_with = "trim")]
    no_trim: bool,
}

impl Trim {
    fn enabled(&self) -> bool {
        !self.no_trim
    }
}

#[derive(Args, Clone)]
struct Output {
    /// Write the result here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Is the word in the language? Letters are separated by whitespace.
    Member {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        explain: Explain,
        word: Vec<String>,
    },
    /// Well-matchedness, depth and decomposition of a word over the input's alphabet.
    Classify {
        #[command(flatten)]
        input: Input,
        word: Vec<String>,
    },
    /// Decision procedures and structural predicates.
    Decide {
        problem: Problem,
        #[command(flatten)]
        input: Input,
        /// Second operand for `includes` and `equiv`.
        #[arg(long)]
        other: Option<PathBuf>,
        #[command(flatten)]
        explain: Explain,
    },
    /// Closure operations.
    Op {
        op: Operation,
        #[command(flatten)]
        input: Input,
        /// Second operand for binary operations.
        #[arg(long)]
        other: Option<PathBuf>,
        /// Use the variants that keep both operands' normal form.
        #[arg(long)]
        cc: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Translate between VRAs and visibly pushdown automata.
    Translate {
        direction: Direction,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        trim: Trim,
        #[command(flatten)]
        output: Output,
    },
    /// Normal forms.
    Normalize {
        form: Form,
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        trim: Trim,
        #[command(flatten)]
        output: Output,
    },
    /// A seeded random VRA.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Upper bound on automata, the start automaton included (at most 6).
        #[arg(long, default_value_t = 4)]
        max_automata: usize,
        /// Upper bound on states per automaton.
        #[arg(long, default_value_t = 4)]
        max_states: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Compare two automata (VRA or VPA) on all well-matched words up to a length.
    BoundedEquiv {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        other: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[command(flatten)]
        explain: Explain,
    },
    /// Graphviz rendering of a VRA or VPA.
    Dot {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Empty,
    Universal,
    Includes,
    Equiv,
    Codet,
    Complete,
    Det,
    Spa,
}

#[derive(Clone, Copy, ValueEnum)]
enum Operation {
    Concat,
    Star,
    Union,
    Intersect,
    Complement,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    ToVpa,
    ToVra,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    CodetComplete,
}

enum Outcome {
    Yes,
    No,
}

impl From<bool> for Outcome {
    fn from(b: bool) -> Self {
        if b {
            Outcome::Yes
        } else {
            Outcome::No
        }
    }
}

enum Automaton {
    Vra(Vra),
    Vpa(Vpa),
}

impl Automaton {
    fn acceptor(&self) -> &dyn Acceptor {
        match self {
            Automaton::Vra(v) => v,
            Automaton::Vpa(p) => p,
        }
    }

    fn alphabet(&self) -> &vra_core::PushdownAlphabet {
        match self {
            Automaton::Vra(v) => &v.alphabet,
            Automaton::Vpa(p) => &p.alphabet,
        }
    }
}

fn read_text(path: Option<&PathBuf>) -> Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
            Ok(s)
        }
    }
}

fn read_vra(path: Option<&PathBuf>) -> Result<Vra> {
    let text = read_text(path)?;
    load_vra(&text).map_err(|e| anyhow!("{}: {e}", describe(path)))
}

fn read_vpa(path: Option<&PathBuf>) -> Result<Vpa> {
    let text = read_text(path)?;
    load_vpa(&text).map_err(|e| anyhow!("{}: {e}", describe(path)))
}

/// VPA documents carry a stack alphabet; everything else is read as a VRA.
fn read_any(path: Option<&PathBuf>) -> Result<Automaton> {
    let text = read_text(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| anyhow!("{}: parse error: {e}", describe(path)))?;
    if value.get("stack_alphabet").is_some() {
        Ok(Automaton::Vpa(load_vpa(&text).map_err(|e| anyhow!("{}: {e}", describe(path)))?))
    } else {
        Ok(Automaton::Vra(load_vra(&text).map_err(|e| anyhow!("{}: {e}", describe(path)))?))
    }
}

fn describe(path: Option<&PathBuf>) -> String {
    match path {
        Some(p) if p.as_os_str() != "-" => p.display().to_string(),
        _ => "<stdin>".into(),
    }
}

fn other(path: &Option<PathBuf>, what: &str) -> Result<Vra> {
    let p = path.as_ref().ok_or_else(|| anyhow!("`{what}` needs --other"))?;
    read_vra(Some(p))
}

fn emit(output: &Output, text: &str) -> Result<()> {
    match &output.output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn explain(enabled: bool, value: Value) {
    if enabled {
        eprintln!("{}", serde_json::to_string_pretty(&value).expect("JSON values serialize"));
    }
}

fn word(v: &Vra, letters: &[String]) -> Result<Word> {
    Ok(Word::parse(&letters.join(" "), &v.alphabet)?)
}

fn verdict(holds: bool, yes: &str, no: &str) -> Outcome {
    println!("{}", if holds { yes } else { no });
    holds.into()
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Member { input, explain: ex, word: letters } => {
            let v = read_vra(input.input.as_ref())?;
            let w = word(&v, &letters)?;
            let m = vra_member(&v, &w)?;
            explain(ex.explain, explain::membership(&v, &m));
            Ok(verdict(m.accepted, "accepted", "rejected"))
        }
        Command::Classify { input, word: letters } => {
            let v = read_vra(input.input.as_ref())?;
            let w = word(&v, &letters)?;
            let info = classify(&v.alphabet, &w)?;
            println!("{}", serde_json::to_string_pretty(&explain::classification(&info))?);
            Ok(info.is_well_matched.into())
        }
        Command::Decide { problem, input, other: second, explain: ex } => {
            let v = read_vra(input.input.as_ref())?;
            decide(problem, &v, &second, ex.explain)
        }
        Command::Op { op, input, other: second, cc, output } => {
            let a = read_vra(input.input.as_ref())?;
            let out = match (op, cc) {
                (Operation::Concat, false) => vra_concat(&a, &other(&second, "concat")?)?,
                (Operation::Concat, true) => vra_concat_cc(&a, &other(&second, "concat")?)?,
                (Operation::Union, false) => vra_union(&a, &other(&second, "union")?)?,
                (Operation::Union, true) => vra_union_cc(&a, &other(&second, "union")?)?,
                (Operation::Intersect, false) => vra_intersect(&a, &other(&second, "intersect")?)?,
                (Operation::Intersect, true) => vra_intersect_cc(&a, &other(&second, "intersect")?)?,
                (Operation::Star, false) => vra_star(&a),
                (Operation::Star, true) => vra_star_cc(&a)?,
                (Operation::Complement, _) => vra_complement(&a),
            };
            emit(&output, &save_vra(&out))?;
            Ok(Outcome::Yes)
        }
        Command::Translate { direction, input, trim, output } => {
            let text = match direction {
                Direction::ToVpa => save_vpa(&vra_to_vpa(&read_vra(input.input.as_ref())?)),
                Direction::ToVra => save_vra(&vpa_to_vra(&read_vpa(input.input.as_ref())?, trim.enabled())),
            };
            emit(&output, &text)?;
            Ok(Outcome::Yes)
        }
        Command::Normalize { form: Form::CodetComplete, input, trim, output } => {
            let v = read_vra(input.input.as_ref())?;
            emit(&output, &save_vra(&codet_complete(&v, CodetOptions { trim: trim.enabled() })))?;
            Ok(Outcome::Yes)
        }
        Command::Random { seed, max_automata, max_states, output } => {
            if max_automata == 0 || max_states == 0 {
                bail!("--max-automata and --max-states must be positive");
            }
            let cfg = RandomVraConfig { automata: (1, max_automata.min(6)), states: (1, max_states), ..RandomVraConfig::default() };
            emit(&output, &save_vra(&random_vra(seed, &cfg)))?;
            Ok(Outcome::Yes)
        }
        Command::BoundedEquiv { input, other: second, max_len, explain: ex } => {
            let a = read_any(input.input.as_ref())?;
            let b = read_any(Some(&second))?;
            if a.alphabet() != b.alphabet() {
                bail!("operands have different pushdown alphabets");
            }
            let budget = EnumerationBudget::new(a.alphabet().clone(), max_len);
            match bounded_equiv(a.acceptor(), b.acceptor(), &budget)? {
                Equivalence::Equal => Ok(verdict(true, "equal", "")),
                Equivalence::DifferAt(w) => {
                    explain(ex.explain, json!({ "differ_at": explain::word(&w) }));
                    Ok(verdict(false, "", &format!("differ at: {w}")))
                }
            }
        }
        Command::Dot { input, output } => {
            let text = match read_any(input.input.as_ref())? {
                Automaton::Vra(v) => export_dot(&v),
                Automaton::Vpa(p) => export_vpa_dot(&p),
            };
            emit(&output, &text)?;
            Ok(Outcome::Yes)
        }
    }
}

fn decide(problem: Problem, v: &Vra, second: &Option<PathBuf>, ex: bool) -> Result<Outcome> {
    Ok(match problem {
        Problem::Empty => {
            let cert = is_empty(v);
            explain(ex, explain::emptiness(v, &cert));
            verdict(cert.empty, "empty", "nonempty")
        }
        Problem::Universal => {
            let u = is_universal(v);
            explain(ex, explain::verdict(&u));
            verdict(u.holds, "universal", "not universal")
        }
        Problem::Includes => {
            let u = includes(v, &other(second, "includes")?)?;
            explain(ex, explain::verdict(&u));
            verdict(u.holds, "included", "not included")
        }
        Problem::Equiv => {
            let u = equivalent(v, &other(second, "equiv")?)?;
            explain(ex, explain::verdict(&u));
            verdict(u.holds, "equivalent", "not equivalent")
        }
        Problem::Codet => {
            let r = is_codeterministic(v);
            explain(ex, explain::codet(&r));
            verdict(r.codeterministic, "codeterministic", "not codeterministic")
        }
        Problem::Complete => {
            let r = is_complete(v);
            explain(ex, explain::complete(&r));
            verdict(r.complete, "complete", "not complete")
        }
        Problem::Det => {
            let r = is_deterministic(v);
            explain(ex, explain::det(&r));
            verdict(r.deterministic, "deterministic", "not deterministic")
        }
        Problem::Spa => verdict(is_spa(v), "SPA", "not an SPA"),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Yes) => ExitCode::SUCCESS,
        Ok(Outcome::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
