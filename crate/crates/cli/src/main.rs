//! `kleene`: evaluate expressions, compare and compile them, check and search
//! simulations, decompose automata, compute ω-powers and fuzz the laws.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use kleene_core::analysis::{
    certify_omega, decompose, distinguishing_word, omega_power, AnalysisError, OmegaOracleConfig,
};
use kleene_core::automata::{behavior, compile, eval_series, AutomatonError, RationalExpr, WeightedAutomaton};
use kleene_core::format::{
    automaton_from_json, automaton_to_json, decomposition_to_json, matrix_from_json_any, matrix_to_json, parse_json,
    series_to_json, FormatError,
};
use kleene_core::laws::{rewrite, run_suite, LawConfig, Suite, SuiteOutcome};
use kleene_core::matrix::{classify, KMatrix, MatrixShape};
use kleene_core::random::{self, trial_rng};
use kleene_core::semiring::SemiringId;
use kleene_core::series::{Alphabet, TruncatedSeries};
use kleene_core::simulation::{
    check_simulation, joint_intermediate, search_simulation, verify_chain, ChainStep, Orientation, SearchLimits,
    SimulationChain, SimulationError,
};
use kleene_core::syntax::{parse_expr, SyntaxError};

#[derive(Debug, thiserror::Error)]
enum CliError {
    /// Malformed input text, file or flag value.
    #[error("{0}")]
    Input(String),
    /// Well-formed input the command cannot handle.
    #[error("{0}")]
    Unsupported(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Unsupported(_) => 3,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SyntaxError> for CliError {
    fn from(e: SyntaxError) -> Self {
        if e.is_parse() {
            CliError::Input(e.to_string())
        } else {
            CliError::Unsupported(e.to_string())
        }
    }
}

impl From<AutomatonError> for CliError {
    fn from(e: AutomatonError) -> Self {
        CliError::Unsupported(e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Malformed(_) | AnalysisError::Incompatible(_) => CliError::Input(e.to_string()),
            _ => CliError::Unsupported(e.to_string()),
        }
    }
}

impl From<SimulationError> for CliError {
    fn from(e: SimulationError) -> Self {
        match e {
            SimulationError::InfiniteCarrier(_) | SimulationError::TooLarge { .. } => {
                CliError::Unsupported(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

type Outcome = Result<bool, CliError>;

#[derive(Parser)]
#[command(name = "kleene", version, about = "Weighted automata and star semirings workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// boolean, nat-inf, tropical-nat-inf or chain(n)
    #[arg(long, default_value = "boolean")]
    semiring: String,
    /// Comma-separated letters.
    #[arg(long, default_value = "a,b")]
    alphabet: String,
    /// Word length bound L.
    #[arg(long = "len", default_value_t = 4)]
    len: usize,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

impl Common {
    fn semiring(&self) -> Result<SemiringId, CliError> {
        self.semiring.parse().map_err(|e| CliError::Input(format!("--semiring: {e}")))
    }

    fn alphabet(&self) -> Result<Arc<Alphabet>, CliError> {
        Alphabet::parse_list(&self.alphabet).map(Arc::new).map_err(|e| CliError::Input(format!("--alphabet: {e}")))
    }

    fn expr(&self, text: &str) -> Result<RationalExpr, CliError> {
        Ok(parse_expr(text, self.semiring()?, &*self.alphabet()?)?)
    }
}

#[derive(Args, Clone, Copy)]
struct OmegaFlags {
    /// Iterates examined by the ω oracle (default 2L+8).
    #[arg(long = "omega-horizon")]
    horizon: Option<usize>,
    /// Finite threshold an iterate must reach to certify an infinite coefficient.
    #[arg(long = "omega-bound", default_value_t = 1_000_000)]
    bound: u64,
}

impl OmegaFlags {
    fn config(self) -> OmegaOracleConfig {
        OmegaOracleConfig { horizon: self.horizon, infinity_bound: self.bound }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the coefficients of an expression, evaluated directly and through its compiled automaton.
    Eval {
        expr: String,
        #[command(flatten)]
        common: Common,
        /// Skip zero coefficients.
        #[arg(long)]
        nonzero: bool,
    },
    /// Compare two expressions.
    Equiv {
        left: String,
        right: String,
        #[command(flatten)]
        common: Common,
    },
    /// Compile an expression to an automaton in JSON.
    Compile {
        expr: String,
        #[command(flatten)]
        common: Common,
        /// Write to a file instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check that a matrix is a simulation from one automaton to another.
    Simcheck {
        from: PathBuf,
        to: PathBuf,
        /// JSON list of rows.
        witness: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// List every simulation matrix between two automata over a finite carrier.
    Simsearch {
        from: PathBuf,
        to: PathBuf,
        /// functional, dual_functional, diagonal, invertible_diagonal or general
        #[arg(long)]
        shape: Option<String>,
        /// Largest number of witness entries searched.
        #[arg(long, default_value_t = SearchLimits::default().max_cells)]
        max_cells: usize,
        #[arg(long)]
        json: bool,
    },
    /// Verify a chain of simulations given as JSON `{automata, steps}`.
    Chain {
        file: PathBuf,
        #[arg(long = "len", default_value_t = 6)]
        len: usize,
        #[arg(long)]
        json: bool,
    },
    /// Split the behavior of an automaton over a finite carrier into level sets.
    Decompose {
        file: PathBuf,
        /// Words up to this length are listed per level set.
        #[arg(long = "len", default_value_t = 4)]
        len: usize,
        #[arg(long)]
        json: bool,
    },
    /// ω-power of an expression's series over nat-inf, with an iterate check.
    Omega {
        expr: String,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        omega: OmegaFlags,
        /// Exit 1 when the iterate check fails.
        #[arg(long)]
        strict: bool,
    },
    /// Run the randomized law suites.
    Axioms {
        #[arg(long, default_value = "boolean")]
        semiring: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "len", default_value_t = 6)]
        len: usize,
        /// Run only these suites (repeatable).
        #[arg(long)]
        suite: Vec<String>,
        #[command(flatten)]
        omega: OmegaFlags,
        #[arg(long)]
        json: bool,
    },
    /// Sample equivalent boolean automata and count how they are linked by simulations.
    Probe {
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Expression size.
        #[arg(long, default_value_t = 3)]
        size: usize,
        #[arg(long, default_value = "a,b")]
        alphabet: String,
        #[arg(long, default_value_t = 16)]
        max_cells: usize,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval { expr, common, nonzero } => cmd_eval(&expr, &common, nonzero),
        Command::Equiv { left, right, common } => cmd_equiv(&left, &right, &common),
        Command::Compile { expr, common, output } => cmd_compile(&expr, &common, output.as_deref()),
        Command::Simcheck { from, to, witness, json } => cmd_simcheck(&from, &to, &witness, json),
        Command::Simsearch { from, to, shape, max_cells, json } => {
            cmd_simsearch(&from, &to, shape.as_deref(), max_cells, json)
        }
        Command::Chain { file, len, json } => cmd_chain(&file, len, json),
        Command::Decompose { file, len, json } => cmd_decompose(&file, len, json),
        Command::Omega { expr, common, omega, strict } => cmd_omega(&expr, &common, omega, strict),
        Command::Axioms { semiring, trials, seed, len, suite, omega, json } => {
            cmd_axioms(&semiring, trials, seed, len, &suite, omega, json)
        }
        Command::Probe { trials, seed, size, alphabet, max_cells, json } => {
            cmd_probe(trials, seed, size, &alphabet, max_cells, json)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    parse_json(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_automaton(path: &Path) -> Result<WeightedAutomaton, CliError> {
    automaton_from_json(&read_json(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_eval(text: &str, c: &Common, nonzero: bool) -> Outcome {
    let (id, alphabet) = (c.semiring()?, c.alphabet()?);
    let e = c.expr(text)?;
    let direct = eval_series(&e, id, alphabet.clone(), c.len)?;
    let automaton = compile(&e, id, alphabet)?;
    let compiled = behavior(&automaton, c.len);
    let agree = direct == compiled;
    if c.json {
        print_json(&json!({
            "eval": series_to_json(&direct),
            "compile": series_to_json(&compiled),
            "dim": automaton.dim(),
            "agree": agree,
        }));
        return Ok(agree);
    }
    if agree {
        for line in direct.to_lines(!nonzero) {
            println!("{line}");
        }
        println!("# eval and compile agree up to {} (automaton dim {})", c.len, automaton.dim());
    } else {
        for ((w, x), (_, y)) in direct.iter().zip(compiled.iter()) {
            let flag = if x == y { "" } else { "  MISMATCH" };
            if !nonzero || !x.is_zero() || !y.is_zero() {
                println!("{}: eval {x}, compile {y}{flag}", direct.alphabet().render(&w));
            }
        }
        println!("# eval and compile disagree");
    }
    Ok(agree)
}

fn cmd_equiv(left: &str, right: &str, c: &Common) -> Outcome {
    let (id, alphabet) = (c.semiring()?, c.alphabet()?);
    let a = compile(&c.expr(left)?, id, alphabet.clone())?;
    let b = compile(&c.expr(right)?, id, alphabet.clone())?;
    let (sa, sb) = (behavior(&a, c.len), behavior(&b, c.len));
    let truncated = sa.first_difference(&sb);
    let exact = if id.carrier().is_some() { Some(distinguishing_word(&a, &b)?) } else { None };
    let equal = truncated.is_none() && !matches!(exact, Some(Some(_)));
    if c.json {
        let word = |w: &Option<kleene_core::Word>| w.as_ref().map(|w| alphabet.render(w));
        print_json(&json!({
            "equivalent": equal,
            "len": c.len,
            "first_difference": word(&truncated),
            "exact": exact.as_ref().map(|d| json!({ "equivalent": d.is_none(), "first_difference": word(d) })),
        }));
        return Ok(equal);
    }
    match &truncated {
        None => println!("EQUIV up to {}", c.len),
        Some(w) => println!(
            "DIFFER at {}: {} vs {}",
            alphabet.render(w),
            sa.coeff(w).expect("in range"),
            sb.coeff(w).expect("in range")
        ),
    }
    match &exact {
        Some(None) => println!("exact: equivalent on all words"),
        Some(Some(w)) => {
            let bound = w.len();
            let (x, y) = (behavior(&a, bound), behavior(&b, bound));
            println!(
                "exact: differ at {} (length {}): {} vs {}",
                alphabet.render(w),
                w.len(),
                x.coeff(w).expect("in range"),
                y.coeff(w).expect("in range")
            );
        }
        None => {}
    }
    Ok(equal)
}

fn cmd_compile(text: &str, c: &Common, output: Option<&Path>) -> Outcome {
    let a = compile(&c.expr(text)?, c.semiring()?, c.alphabet()?)?;
    let body = serde_json::to_string_pretty(&automaton_to_json(&a)).expect("serializable");
    match output {
        Some(path) => fs::write(path, body + "\n").map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        None => println!("{body}"),
    }
    Ok(true)
}

fn cmd_simcheck(from: &Path, to: &Path, witness: &Path, json: bool) -> Outcome {
    let (a, b) = (read_automaton(from)?, read_automaton(to)?);
    let x = matrix_from_json_any(a.instance(), &read_json(witness)?)?;
    let r = check_simulation(&a, &b, &x)?;
    if json {
        let letters: serde_json::Map<String, Value> =
            a.alphabet().letters().iter().cloned().zip(r.transitions.iter().map(|&t| json!(t))).collect();
        print_json(&json!({
            "valid": r.valid(),
            "initial": r.initial,
            "transitions": letters,
            "final": r.final_,
            "shape": classify(&x).name(),
        }));
        return Ok(r.valid());
    }
    println!("initial (alpha X = gamma): {}", yes(r.initial));
    for (l, ok) in a.alphabet().letters().iter().zip(&r.transitions) {
        println!("transition {l} (M X = X N): {}", yes(*ok));
    }
    println!("final (beta = X delta): {}", yes(r.final_));
    println!("witness shape: {}", classify(&x));
    println!("{}", if r.valid() { "SIMULATION" } else { "NOT A SIMULATION" });
    Ok(r.valid())
}

fn cmd_simsearch(from: &Path, to: &Path, shape: Option<&str>, max_cells: usize, json: bool) -> Outcome {
    let (a, b) = (read_automaton(from)?, read_automaton(to)?);
    let shape = shape
        .map(|s| MatrixShape::parse(s).ok_or_else(|| CliError::Input(format!("--shape: unknown shape `{s}`"))))
        .transpose()?;
    let found = search_simulation(&a, &b, shape, SearchLimits { max_cells })?;
    if json {
        print_json(&json!({
            "count": found.len(),
            "witnesses": found.iter().map(matrix_to_json).collect::<Vec<_>>(),
        }));
        return Ok(!found.is_empty());
    }
    println!("{} witness(es)", found.len());
    for x in &found {
        println!("{} {}", classify(x), x);
    }
    Ok(!found.is_empty())
}

fn chain_from_json(v: &Value) -> Result<SimulationChain, CliError> {
    let bad = |m: &str| CliError::Input(format!("chain: {m}"));
    let automata = v
        .get("automata")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("`automata` must be a list"))?
        .iter()
        .map(automaton_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    let id = automata.first().ok_or_else(|| bad("no automata"))?.instance();
    let steps = v
        .get("steps")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("`steps` must be a list"))?
        .iter()
        .map(|s| {
            let orientation = match s.get("orientation").and_then(Value::as_str) {
                Some("forward") => Orientation::Forward,
                Some("backward") => Orientation::Backward,
                _ => return Err(bad("`orientation` must be \"forward\" or \"backward\"")),
            };
            let matrix = matrix_from_json_any(id, s.get("matrix").ok_or_else(|| bad("step without `matrix`"))?)?;
            Ok(ChainStep { matrix, orientation })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(SimulationChain { automata, steps })
}

fn cmd_chain(file: &Path, len: usize, json: bool) -> Outcome {
    let chain = chain_from_json(&read_json(file)?)?;
    let r = verify_chain(&chain, len)?;
    if json {
        print_json(&json!({
            "valid": r.valid,
            "broken_link": r.broken_link,
            "strong": r.strong,
            "shapes": r.shapes.iter().map(|s| s.name()).collect::<Vec<_>>(),
            "behaviors_equal": r.behaviors_equal,
            "len": r.bound,
        }));
        return Ok(r.valid);
    }
    for (i, (step, shape)) in chain.steps.iter().zip(&r.shapes).enumerate() {
        let arrow = match step.orientation {
            Orientation::Forward => format!("C{i} -> C{}", i + 1),
            Orientation::Backward => format!("C{} -> C{i}", i + 1),
        };
        let ok = if r.broken_link == Some(i) { "broken" } else { "ok" };
        println!("step {i}: {arrow} {shape} {ok}");
    }
    println!("valid: {}", yes(r.valid));
    println!("strong: {}", yes(r.strong));
    println!("endpoint behaviors equal up to {}: {}", r.bound, yes(r.behaviors_equal));
    Ok(r.valid)
}

fn cmd_decompose(file: &Path, len: usize, json: bool) -> Outcome {
    let a = read_automaton(file)?;
    let d = decompose(&a)?;
    if json {
        print_json(&decomposition_to_json(&d));
        return Ok(true);
    }
    let dfa = d.classes.first().or(d.zero_class.as_ref()).map(|c| c.dfa.len()).unwrap_or(0);
    println!("level-set DFA: {dfa} states");
    println!("level sets: {}", d.classes.len());
    let words = TruncatedSeries::zero(a.instance(), a.alphabet().clone(), len);
    for c in &d.classes {
        let members: Vec<String> =
            words.iter().filter(|(w, _)| c.accepts(w)).map(|(w, _)| a.alphabet().render(&w)).collect();
        let states: Vec<String> = c.accepting.iter().map(usize::to_string).collect();
        println!("value {}: accepting states {{{}}}", c.value, states.join(", "));
        println!("  words up to {len}: {}", members.join(" "));
    }
    Ok(true)
}

fn cmd_omega(text: &str, c: &Common, flags: OmegaFlags, strict: bool) -> Outcome {
    let id = c.semiring()?;
    let s = eval_series(&c.expr(text)?, id, c.alphabet()?, c.len)?;
    let w = omega_power(&s)?;
    let cert = certify_omega(&s, &w, flags.config())?;
    if c.json {
        print_json(&json!({
            "omega": series_to_json(&w),
            "check": {
                "horizon": cert.horizon,
                "bound": cert.infinity_bound,
                "monotone": cert.monotone,
                "dominated": cert.dominated,
                "attained": cert.attained,
                "crossed": cert.crossed,
                "failures": cert.failures.iter().map(|f| json!({
                    "word": f.word,
                    "kind": format!("{:?}", f.kind),
                    "reached": f.reached,
                    "expected": f.expected,
                })).collect::<Vec<_>>(),
            },
        }));
        return Ok(!strict || cert.passes());
    }
    for line in w.to_lines(true) {
        println!("{line}");
    }
    println!(
        "# iterates 1..{}: monotone {}, dominated {}, finite values attained {}, bound {} crossed {}",
        cert.horizon,
        yes(cert.monotone),
        yes(cert.dominated),
        yes(cert.attained),
        cert.infinity_bound,
        yes(cert.crossed)
    );
    for f in cert.failures.iter().take(5) {
        println!("#   {}: {:?}, reached {}, expected {}", f.word, f.kind, f.reached, f.expected);
    }
    Ok(!strict || cert.passes())
}

fn outcome_json(o: &SuiteOutcome) -> Value {
    json!({
        "suite": o.suite.name(),
        "semiring": o.instance.to_string(),
        "trials": o.trials,
        "passed": o.passed,
        "vacuous": o.vacuous,
        "failures": o.failures,
        "first_failure": o.first_failure.as_ref().map(|f| json!({
            "trial": f.trial,
            "detail": f.detail,
            "inputs": f.inputs,
        })),
    })
}

fn cmd_axioms(
    semiring: &str,
    trials: usize,
    seed: u64,
    len: usize,
    names: &[String],
    omega: OmegaFlags,
    json: bool,
) -> Outcome {
    let id: SemiringId = semiring.parse().map_err(|e| CliError::Input(format!("--semiring: {e}")))?;
    if trials == 0 {
        return Err(CliError::Input("--trials must be at least 1".into()));
    }
    let suites: Vec<Suite> = if names.is_empty() {
        Suite::ALL.into_iter().filter(|s| s.applies_to(id)).collect()
    } else {
        let mut v = Vec::new();
        for n in names {
            let s = Suite::parse(n).ok_or_else(|| CliError::Input(format!("--suite: unknown suite `{n}`")))?;
            if !s.applies_to(id) {
                return Err(CliError::Unsupported(format!("suite {} does not apply to {id}", s.name())));
            }
            v.push(s);
        }
        v
    };
    let config = LawConfig { seed, trials, bound: len, omega: omega.config() };
    let outcomes: Vec<SuiteOutcome> = suites.iter().map(|&s| run_suite(s, id, &config)).collect();
    let failed = outcomes.iter().filter(|o| !o.ok()).count();
    if json {
        print_json(&json!({
            "semiring": id.to_string(),
            "seed": seed,
            "trials": trials,
            "suites": outcomes.iter().map(outcome_json).collect::<Vec<_>>(),
        }));
        return Ok(failed == 0);
    }
    for o in &outcomes {
        let status = if o.ok() { "pass" } else { "FAIL" };
        println!("{:<20} {}/{} {} ({} vacuous)", o.suite.name(), o.passed, o.trials, status, o.vacuous);
        if let Some(f) = &o.first_failure {
            println!("  {} failures; first at trial {}: {}", o.failures, f.trial, f.detail);
            println!("  reproducer: {}", serde_json::to_string(&f.inputs).expect("serializable"));
        }
    }
    if failed == 0 {
        println!("all {} suites pass on {id}", outcomes.len());
    } else {
        println!("{failed} of {} suites failed on {id}", outcomes.len());
    }
    Ok(failed == 0)
}

#[derive(Default)]
struct ProbeTally {
    searched: usize,
    too_large: usize,
    one_step: usize,
    one_step_strong: usize,
    two_step: usize,
    two_step_strong: usize,
}

fn one_step(a: &WeightedAutomaton, b: &WeightedAutomaton, max_cells: usize) -> Result<Option<Vec<KMatrix>>, CliError> {
    let limits = SearchLimits { max_cells };
    let mut all = Vec::new();
    for (x, y) in [(a, b), (b, a)] {
        match search_simulation(x, y, None, limits) {
            Ok(found) => all.extend(found),
            Err(SimulationError::TooLarge { .. }) => return Ok(None),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Some(all))
}

fn cmd_probe(trials: usize, seed: u64, size: usize, alphabet: &str, max_cells: usize, json: bool) -> Outcome {
    if size == 0 {
        return Err(CliError::Input("--size must be at least 1".into()));
    }
    let alphabet = Arc::new(Alphabet::parse_list(alphabet).map_err(|e| CliError::Input(format!("--alphabet: {e}")))?);
    let id = SemiringId::Boolean;
    let mut t = ProbeTally::default();
    for i in 0..trials {
        let mut rng = trial_rng(seed, 0x70_72, i as u64);
        let e = random::expression(id, &alphabet, size, &mut rng);
        let f = rewrite(&e, &mut rng);
        let a = compile(&e, id, alphabet.clone())?;
        let b = compile(&f, id, alphabet.clone())?;
        match one_step(&a, &b, max_cells)? {
            None => t.too_large += 1,
            Some(found) => {
                t.searched += 1;
                if !found.is_empty() {
                    t.one_step += 1;
                }
                if found.iter().any(|x| classify(x).is_strong()) {
                    t.one_step_strong += 1;
                }
            }
        }
        if let Some(chain) = joint_intermediate(&a, &b)? {
            let r = verify_chain(&chain, 0)?;
            if r.valid {
                t.two_step += 1;
                if r.strong {
                    t.two_step_strong += 1;
                }
            }
        }
    }
    if json {
        print_json(&json!({
            "pairs": trials,
            "size": size,
            "max_cells": max_cells,
            "searched": t.searched,
            "too_large": t.too_large,
            "one_step": t.one_step,
            "one_step_strong": t.one_step_strong,
            "two_step": t.two_step,
            "two_step_strong": t.two_step_strong,
        }));
        return Ok(true);
    }
    println!("equivalent boolean pairs: {trials} (expression size {size})");
    println!(
        "one-step simulation: {} of {} searched ({} strong); {} pairs over {} cells skipped",
        t.one_step, t.searched, t.one_step_strong, t.too_large, max_cells
    );
    println!("two-step via joint intermediate: {} of {trials} ({} strong)", t.two_step, t.two_step_strong);
    Ok(true)
}
