//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use kleene_core::analysis::{decompose, omega_power, reconstruct, OmegaOracleConfig};
use kleene_core::automata::{behavior, compile, RationalExpr, WeightedAutomaton};
use kleene_core::laws::{run_suite, LawConfig, Suite, SuiteOutcome};
use kleene_core::matrix::KMatrix;
use kleene_core::semiring::SemiringId;
use kleene_core::series::{ser_add, Alphabet, TruncatedSeries, Word};
use kleene_core::simulation::{verify_chain, ChainStep, Orientation, SimulationChain};

const SEED: u64 = 20_240_531;

const ALL_INSTANCES: [SemiringId; 4] =
    [SemiringId::Boolean, SemiringId::NatInf, SemiringId::TropicalNatInf, SemiringId::Chain(3)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn config(trials: usize, bound: usize) -> LawConfig {
    LawConfig { seed: SEED, trials, bound, omega: OmegaOracleConfig::default() }
}

/// Runs `suite` on each instance; passes when every trial passes and at least
/// `min_effective` trials per instance had their premise hold.
fn suites(suite: Suite, instances: &[SemiringId], cfg: &LawConfig, min_effective: usize) -> Outcome {
    let outs: Vec<SuiteOutcome> = instances.iter().map(|&id| run_suite(suite, id, cfg)).collect();
    let mut parts = Vec::new();
    let mut pass = true;
    for o in &outs {
        let effective = o.passed - o.vacuous;
        let ok = o.ok() && effective >= min_effective;
        pass &= ok;
        parts.push(format!("{} {}/{}", o.instance, o.passed, o.trials));
        if let Some(f) = &o.first_failure {
            parts.push(format!("[{} failures; first at trial {}: {}]", o.failures, f.trial, f.detail));
        }
        if o.ok() && effective < min_effective {
            parts.push(format!("[only {effective} non-vacuous trials, need {min_effective}]"));
        }
    }
    Outcome { pass, detail: parts.join(", ") }
}

fn both(a: Outcome, b: Outcome) -> Outcome {
    Outcome { pass: a.pass && b.pass, detail: format!("{}; {}", a.detail, b.detail) }
}

fn star_axioms() -> Outcome {
    suites(Suite::StarAxioms, &ALL_INSTANCES, &config(1000, 6), 1000)
}

fn matrix_laws() -> Outcome {
    suites(Suite::MatrixStar, &ALL_INSTANCES, &config(200, 6), 200)
}

fn functorial() -> Outcome {
    suites(Suite::FunctorialStar, &ALL_INSTANCES, &config(500, 6), 500)
}

fn series_star() -> Outcome {
    let proper = suites(Suite::SeriesStar, &ALL_INSTANCES, &config(200, 6), 200);
    let reduction =
        suites(Suite::SeriesStar, &[SemiringId::NatInf], &LawConfig { seed: SEED + 1, ..config(100, 6) }, 100);
    both(proper, reduction)
}

fn kleene() -> Outcome {
    suites(Suite::Kleene, &ALL_INSTANCES, &config(500, 6), 500)
}

fn constant_star() -> Outcome {
    let finite = [SemiringId::Boolean, SemiringId::Chain(3)]
        .map(|id| suites(Suite::ConstantStar, &[id], &config(id.carrier().unwrap().len(), 6), 1));
    let [b, c] = finite;
    let sampled = suites(Suite::ConstantStar, &[SemiringId::NatInf, SemiringId::TropicalNatInf], &config(100, 6), 100);
    both(both(b, c), sampled)
}

fn letters(names: &[&str]) -> Arc<Alphabet> {
    Arc::new(Alphabet::new(names).unwrap())
}

fn simulation() -> Outcome {
    let random = suites(Suite::Simulation, &[SemiringId::Boolean, SemiringId::Chain(3)], &config(300, 8), 300);
    let b = SemiringId::Boolean;
    let split = WeightedAutomaton::new(
        letters(&["a"]),
        KMatrix::from_u64(b, &[&[1, 0, 0]]),
        vec![KMatrix::from_u64(b, &[&[0, 1, 1], &[0, 0, 0], &[0, 0, 0]])],
        KMatrix::from_u64(b, &[&[0], &[1], &[1]]),
    )
    .unwrap();
    let single = compile(&RationalExpr::letter("a"), b, letters(&["a"])).unwrap();
    let chain = SimulationChain {
        automata: vec![split, single],
        steps: vec![ChainStep {
            matrix: KMatrix::from_u64(b, &[&[1, 0], &[0, 1], &[0, 1]]),
            orientation: Orientation::Forward,
        }],
    };
    let r = verify_chain(&chain, 8).unwrap();
    let hand = Outcome {
        pass: r.valid && r.strong && r.behaviors_equal,
        detail: format!("functional merge: valid={} strong={} equal={}", r.valid, r.strong, r.behaviors_equal),
    };
    both(random, hand)
}

fn in_ab_star(w: &str) -> bool {
    w == "eps" || (w.len().is_multiple_of(2) && w.as_bytes().chunks(2).all(|c| c == b"ab"))
}

fn decomposition() -> Outcome {
    let random = suites(Suite::Decomposition, &[SemiringId::Boolean, SemiringId::Chain(3)], &config(200, 6), 200);
    let b = SemiringId::Boolean;
    let ab_star = WeightedAutomaton::new(
        letters(&["a", "b"]),
        KMatrix::from_u64(b, &[&[1, 0]]),
        vec![KMatrix::from_u64(b, &[&[0, 1], &[0, 0]]), KMatrix::from_u64(b, &[&[0, 0], &[1, 0]])],
        KMatrix::from_u64(b, &[&[1], &[0]]),
    )
    .unwrap();
    let d = decompose(&ab_star).unwrap();
    let all = TruncatedSeries::zero(b, ab_star.alphabet().clone(), 6);
    let exact = d.classes.len() == 1
        && d.classes[0].value.is_one()
        && all.iter().all(|(w, _)| d.classes[0].accepts(&w) == in_ab_star(&ab_star.alphabet().render(&w)))
        && reconstruct(&d, 6) == behavior(&ab_star, 6);
    both(random, Outcome { pass: exact, detail: format!("(ab)* level set exact: {exact}") })
}

fn omega() -> Outcome {
    let cfg = LawConfig {
        seed: SEED,
        trials: 100,
        bound: 5,
        omega: OmegaOracleConfig { horizon: Some(18), infinity_bound: 1_000_000 },
    };
    let random = suites(Suite::OmegaPower, &[SemiringId::NatInf], &cfg, 100);
    let n = SemiringId::NatInf;
    let al = letters(&["a"]);
    let s = ser_add(&TruncatedSeries::unit(n, al.clone(), 5), &TruncatedSeries::char_letter(n, al, 5, 0)).unwrap();
    let w = omega_power(&s).unwrap();
    let worked = w.constant_term().is_one() && (1..=5).all(|k| w.coeff(&Word(vec![0; k])).unwrap().is_infinite());
    let verdict = both(random, Outcome { pass: worked, detail: format!("e + a gives eps:1, a^n:inf: {worked}") });
    // same series, crossing demanded only up to the horizon; reported, not judged
    let reach = LawConfig { omega: OmegaOracleConfig { horizon: Some(18), infinity_bound: 18 }, ..cfg };
    let diag = run_suite(Suite::OmegaPower, SemiringId::NatInf, &reach);
    Outcome {
        pass: verdict.pass,
        detail: format!("{}; diagnostic with bound 18: {}/{} pass", verdict.detail, diag.passed, diag.trials),
    }
}

fn hsharp() -> Outcome {
    suites(Suite::Hsharp, &[SemiringId::Boolean], &config(50, 6), 50)
}

/// Name, budget in seconds, check.
type Criterion = (&'static str, u64, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("star axioms on random elements", 1, star_axioms),
        ("matrix star laws", 10, matrix_laws),
        ("functorial star", 5, functorial),
        ("series star", 30, series_star),
        ("compiled behavior equals series evaluation", 60, kleene),
        ("star of a constant series", 1, constant_star),
        ("simulation soundness", 60, simulation),
        ("level-set decomposition round trip", 30, decomposition),
        ("omega power closed form", 30, omega),
        ("hsharp agrees on equivalent expressions", 30, hsharp),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*budget);
        let pass = out.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<45} {} ({:.2}s of {}s) {}",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget,
            out.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
