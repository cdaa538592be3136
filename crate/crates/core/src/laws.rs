//! Randomized invariant suites, one trial stream per suite.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::analysis::{certify_omega, decompose, omega_power, reconstruct, OmegaOracleConfig};
use crate::automata::{
    behavior, compile, eval_matrix, eval_series, hsharp, scale_automaton, star_automaton, RationalExpr,
    WeightedAutomaton,
};
use crate::format::{automaton_to_json, matrix_to_json, series_to_json, value_to_json};
use crate::matrix::KMatrix;
use crate::random;
use crate::semiring::{
    check_lpfp, check_star_axioms, leq, star_axiom_report, sum_order_witness, KSemialgebra, SemiringId, SemiringValue,
    StarSemiring,
};
use crate::series::{check_constant_star, ser_mul, ser_star, Alphabet, TruncatedSeries};
use crate::simulation::{
    check_simulation, compose, search_simulation, verify_chain, ChainStep, Orientation, SearchLimits, SimulationChain,
    SimulationWitness,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LawConfig {
    pub seed: u64,
    pub trials: usize,
    /// Word length bound for series comparisons.
    pub bound: usize,
    pub omega: OmegaOracleConfig,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig { seed: 0, trials: 100, bound: 6, omega: OmegaOracleConfig::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    StarAxioms,
    LeastPrefixedPoint,
    SumOrder,
    MatrixStar,
    FunctorialStar,
    SeriesStar,
    ConstantStar,
    Kleene,
    Simulation,
    Decomposition,
    OmegaPower,
    Absorption,
    Hsharp,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::StarAxioms,
        Suite::LeastPrefixedPoint,
        Suite::SumOrder,
        Suite::MatrixStar,
        Suite::FunctorialStar,
        Suite::SeriesStar,
        Suite::ConstantStar,
        Suite::Kleene,
        Suite::Simulation,
        Suite::Decomposition,
        Suite::OmegaPower,
        Suite::Absorption,
        Suite::Hsharp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::StarAxioms => "star-axioms",
            Suite::LeastPrefixedPoint => "least-prefixed-point",
            Suite::SumOrder => "sum-order",
            Suite::MatrixStar => "matrix-star",
            Suite::FunctorialStar => "functorial-star",
            Suite::SeriesStar => "series-star",
            Suite::ConstantStar => "constant-star",
            Suite::Kleene => "kleene",
            Suite::Simulation => "simulation",
            Suite::Decomposition => "decomposition",
            Suite::OmegaPower => "omega-power",
            Suite::Absorption => "absorption",
            Suite::Hsharp => "hsharp",
        }
    }

    pub fn parse(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn applies_to(self, id: SemiringId) -> bool {
        match self {
            Suite::Decomposition => id.carrier().is_some(),
            Suite::OmegaPower | Suite::Absorption => id == SemiringId::NatInf,
            Suite::Hsharp => id == SemiringId::Boolean,
            _ => true,
        }
    }

    fn stream(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).expect("listed") as u64
    }
}

/// Inputs and explanation of the first failing trial.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub trial: usize,
    pub detail: String,
    pub inputs: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub instance: SemiringId,
    pub trials: usize,
    pub passed: usize,
    /// Trials whose premise did not hold (counted as passed).
    pub vacuous: usize,
    pub failures: usize,
    pub first_failure: Option<Failure>,
}

impl SuiteOutcome {
    pub fn ok(&self) -> bool {
        self.failures == 0
    }
}

enum Trial {
    Pass,
    Vacuous,
    Fail(String, Value),
}

fn expect(ok: bool, detail: impl FnOnce() -> String, inputs: impl FnOnce() -> Value) -> Result<(), Trial> {
    if ok {
        Ok(())
    } else {
        Err(Trial::Fail(detail(), inputs()))
    }
}

pub fn run_suite(suite: Suite, id: SemiringId, config: &LawConfig) -> SuiteOutcome {
    let results: Vec<Trial> = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = random::trial_rng(config.seed, suite.stream(), i as u64);
            let ctx = Ctx { id, config, index: i };
            match run_trial(suite, &ctx, &mut rng) {
                Ok(t) => t,
                Err(t) => t,
            }
        })
        .collect();
    let mut out = SuiteOutcome {
        suite,
        instance: id,
        trials: config.trials,
        passed: 0,
        vacuous: 0,
        failures: 0,
        first_failure: None,
    };
    for (trial, r) in results.into_iter().enumerate() {
        match r {
            Trial::Pass => out.passed += 1,
            Trial::Vacuous => {
                out.passed += 1;
                out.vacuous += 1;
            }
            Trial::Fail(detail, inputs) => {
                out.failures += 1;
                if out.first_failure.is_none() {
                    out.first_failure = Some(Failure { trial, detail, inputs });
                }
            }
        }
    }
    out
}

/// Every suite that applies to `id`, in [`Suite::ALL`] order.
pub fn run_all(id: SemiringId, config: &LawConfig) -> Vec<SuiteOutcome> {
    Suite::ALL.into_iter().filter(|s| s.applies_to(id)).map(|s| run_suite(s, id, config)).collect()
}

struct Ctx<'c> {
    id: SemiringId,
    config: &'c LawConfig,
    index: usize,
}

fn two_letters() -> Arc<Alphabet> {
    Arc::new(Alphabet::new(&["a", "b"]).expect("valid letters"))
}

fn run_trial(suite: Suite, ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Trial, Trial> {
    match suite {
        Suite::StarAxioms => star_axioms(ctx, rng),
        Suite::LeastPrefixedPoint => least_prefixed_point(ctx, rng),
        Suite::SumOrder => sum_order(ctx, rng),
        Suite::MatrixStar => matrix_star(ctx, rng),
        Suite::FunctorialStar => functorial_star(ctx, rng),
        Suite::SeriesStar => series_star(ctx, rng),
        Suite::ConstantStar => constant_star(ctx, rng),
        Suite::Kleene => kleene(ctx, rng),
        Suite::Simulation => simulation(ctx, rng),
        Suite::Decomposition => decomposition(ctx, rng),
        Suite::OmegaPower => omega(ctx, rng),
        Suite::Absorption => absorption(ctx, rng),
        Suite::Hsharp => hsharp_agreement(ctx, rng),
    }
}

fn star_axioms(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Trial, Trial> {
    let a = random::value(ctx.id, rng);
    let b = random::value(ctx.id, rng);
    let report = check_star_axioms(&a, &b).expect("same instance");
    for c in &report.checks {
        expect(
            c.holds,
            || format!("{}: {} ≠ {}", c.identity.label(), c.lhs, c.rhs),
            || json!({ "a": value_to_json(&a), "b": value_to_json(&b) }),
        )?;
    }
    Ok(Trial::Pass)
}

fn least_prefixed_point(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Trial, Trial> {
    let a = random::value(ctx.id, rng);
    let b = random::value(ctx.id, rng);
    let mut any_premise = false;
    for dual in [false, true] {
        // half the time start from the least solution itself
        let x = if rng.gen_bool(0.5) {
            let least = if dual { b.times(&a.starred()) } else { a.starred().times(&b) };
            least.plus(&random::value(ctx.id, rng))
        } else {
            random::value(ctx.id, rng)
        };
        let r = check_lpfp(&a, &b, &x, dual).expect("same instance");
        any_premise |= r.premise;
        expect(
            r.passes(),
            || format!("{r:?}"),
            || json!({ "a": value_to_json(&a), "b": value_to_json(&b), "x": value_to_json(&x), "dual": dual }),
        )?;
    }
    Ok(if any_premise { Trial::Pass } else { Trial::Vacuous })
}

fn sum_order(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Trial, Trial> {
    let a = random::value(ctx.id, rng);
    let b = if rng.gen_bool(0.5) { a.plus(&random::value(ctx.id, rng)) } else { random::value(ctx.id, rng) };
    let inputs = || json!({ "a": value_to_json(&a), "b": value_to_json(&b) });
    let ordered = leq(&a, &b).expect("same instance");
    let witness = sum_order_witness(&a, &b).expect("same instance");
    expect(ordered == witness.is_some(), || format!("leq = {ordered}, witness = {witness:?}"), inputs)?;
    if let Some(r) = &witness {
        expect(a.plus(r) == b, || format!("{a} + {r} ≠ {b}"), inputs)?;
    }
    let s = a.plus(&b);
    expect(leq(&a, &s).expect("same instance"), || format!("{a} is not below {s}"), inputs)?;
    Ok(Trial::Pass)
}

fn matrix_star(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Trial, Trial> {
    let id = ctx.id;
    let n = rng.gen_range(1..=5);
    let density = rng.gen_range(0.2..0.8);
    let m = random::matrix(id, n, n, density, rng);
    let other = random::matrix(id, n, n, density, rng);
    let inputs = || json!({ "M": matrix_to_json(&m), "N": matrix_to_json(&other) });
    let star = m.star_matrix();
    for split in 1..n {
        let lit = m.star_split(split);
        expect(lit == star, || format!("split at {split}: {lit} ≠ {star}"), inputs)?;
    }
    let report = star_axiom_report(&m, &other);
    for c in &report.checks {
        expect(c.holds, || format!("{}: {} ≠ {}", c.identity.label(), c.lhs, c.rhs), inputs)?;
    }
    let d = random::diagonal(id, n, rng);
    let mut expected = KMatrix::zeros(n, n, id.zero());
    for i in 0..n {
        expected.set(i, i, d.get(i, i).starred());
    }
    let ds = d.star_matrix();
    expect(ds == expected, || format!("diagonal star {ds} ≠ {expected}"), || json!({ "D": matrix_to_json(&d) }))?;
    Ok(Trial::Pass)
}

/// Triples with `A·C = C·B` by construction.
fn commuting_triple(id: SemiringId, rng: &mut ChaCha8Rng) -> (KMatrix, KMatrix, KMatrix, &'static str) {
    let density = rng.gen_range(0.2..0.8);
    match rng.gen_range(0..6) {
        0 => {
            let n = rng.gen_range(1..=5);
            let p = random::permutation_matrix(id, &random::permutation(n, rng));
            let b = random::matrix(id, n, n, density, rng);
            let a = p.product(&b).product(&p.transpose());
            (a, b, p, "permutation")
        }
        1 => {
            let n = rng.gen_range(1..=4);
            let m = rng.gen_range(n..=5);
            let (a, b, c) = functional_triple(id, m, n, density, rng);
            (a, b, c, "functional")
        }
        2 => {
            let n = rng.gen_range(1..=4);
            let m = rng.gen_range(n..=5);
            let (a, b, c) = functional_triple(id, m, n, density, rng);
            (b.transpose(), a.transpose(), c.transpose(), "dual functional")
        }
        3 => {
            let (m, n) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
            let a = random::matrix(id, m, m, density, rng);
            let b = random::matrix(id, n, n, density, rng);
            (a, b, KMatrix::zeros(m, n, id.zero()), "zero")
        }
        4 => {
            let n = rng.gen_range(1..=5);
            let a = random::matrix(id, n, n, density, rng);
            let c = KMatrix::identity(n, id.zero()).scale_entries(&random::value(id, rng));
            (a.clone(), a, c, "scalar")
        }
        _ => {
            let n = rng.gen_range(1..=3);
            for _ in 0..50 {
                let a = random::matrix(id, n, n, density, rng);
                let c = random::matrix(id, n, n, density, rng);
                let b = if rng.gen_bool(0.5) { a.clone() } else { random::matrix(id, n, n, density, rng) };
                if a.product(&c) == c.product(&b) {
                    return (a, b, c, "filtered");
                }
            }
            let a = random::matrix(id, n, n, density, rng);
            (a.clone(), a.clone(), a.star_matrix(), "star")
        }
    }
}

/// `C` functional and surjective `m×n`, `B` random, and `A` chosen so that
/// `A·C = C·B`: row `i` of `A` puts `B[f(i), j]` on one preimage of `j`.
fn functional_triple(
    id: SemiringId,
    m: usize,
    n: usize,
    density: f64,
    rng: &mut ChaCha8Rng,
) -> (KMatrix, KMatrix, KMatrix) {
    let f = random::function(m, n, true, rng);
    let preimages: Vec<Vec<usize>> = (0..n).map(|j| (0..m).filter(|&i| f[i] == j).collect()).collect();
    let b = random::matrix(id, n, n, density, rng);
    let mut a = KMatrix::zeros(m, m, id.zero());
    for (i, &fi) in f.iter().enumerate() {
        for (j, pre) in preimages.iter().enumerate() {
            let target = *pre.choose(rng).expect("surjective");
            a.set(i, target, b.get(fi, j).clone());
        }
    }
    let mut c = KMatrix::zeros(m, n, id.zero());
    for (i, &j) in f.iter().enumerate() {
        c.set(i, j, id.one());
    }
    (a, b, c)
}

fn functorial_star(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Trial, Trial> {
    let (a, b, c, kind) = commuting_triple(ctx.id, rng);
    let inputs = || json!({ "kind": kind, "A": matrix_to_json(&a), "B": matrix_to_json(&b), "C": matrix_to_json(&c) });
    let r = crate::matrix::functorial_check(&a, &b, &c).expect("compatible shapes");
    expect(r.premise, || format!("{kind} construction broke A·C = C·B"), inputs)?;
    expect(r.passes(), || format!("A*·C ≠ C·B* ({kind})"), inputs)?;
    Ok(Trial::Pass)
}

fn geometric_sum(s: &TruncatedSeries) -> TruncatedSeries {
    let mut sum = s.one_like();
    let mut power = s.one_like();
    for _ in 0..s.bound() {
        power = power.mul(s);
        sum = sum.add(&power);
    }
    sum
}

fn series_star(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Trial, Trial> {
    let id = ctx.id;
    let bound = ctx.config.bound;
    let density = rng.gen_range(0.1..0.6);
    let s = random::series(id, two_letters(), bound, density, true, rng);
    let star = ser_star(&s);
    let geo = geometric_sum(&s);
    expect(
        star == geo,
        || {
            format!(
                "star and geometric sum differ at {:?}",
                star.first_difference(&geo).map(|w| s.alphabet().render(&w))
            )
        },
        || series_to_json(&s),
    )?;

    // (k + s₀)* = (k*·s₀)*·k*
    let k = random::nonzero_value(id, rng);
    let t = s.add(&TruncatedSeries::constant(k.clone(), two_letters(), bound));
    let ks = TruncatedSeries::constant(k.starred(), two_letters(), bound);
    let lhs = ser_star(&t);
    let rhs = ser_star(&ks.mul(&s)).mul(&ks);
    expect(
        lhs == rhs,
        || format!("non-proper reduction differs at {:?}", lhs.first_difference(&rhs).map(|w| t.alphabet().render(&w))),
        || series_to_json(&t),
    )?;
    Ok(Trial::Pass)
}

fn constant_star(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Trial, Trial> {
    let k = match ctx.id.carrier() {
        Some(c) => c[ctx.index % c.len()].clone(),
        None => random::value(ctx.id, rng),
    };
    let r = check_constant_star(&k, two_letters(), ctx.config.bound);
    expect(r.holds, || format!("({k}·ε)* ≠ {k}*·ε"), || json!({ "k": value_to_json(&k) }))?;
    Ok(Trial::Pass)
}

fn kleene(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Trial, Trial> {
    let id = ctx.id;
    let bound = ctx.config.bound;
    let ab = two_letters();
    let size = rng.gen_range(1..=12);
    let e = random::expression(id, &ab, size, rng);
    let a = compile(&e, id, ab.clone()).expect("valid expression");
    let lhs = behavior(&a, bound);
    let rhs = eval_series(&e, id, ab.clone(), bound).expect("valid expression");
    expect(
        lhs == rhs,
        || format!("compiled behavior differs at {:?}", lhs.first_difference(&rhs).map(|w| ab.render(&w))),
        || json!({ "expr": e.to_string() }),
    )?;

    let dim = rng.gen_range(1..=3);
    let aut = random::automaton(id, ab.clone(), dim, rng.gen_range(0.2..0.7), rng);
    let base = behavior(&aut, bound);
    let starred = behavior(&star_automaton(&aut), bound);
    let expected = ser_star(&base);
    expect(
        starred == expected,
        || "behavior of the star automaton is not the star of the behavior".into(),
        || automaton_to_json(&aut),
    )?;
    let k = random::value(id, rng);
    let scaled = behavior(&scale_automaton(&k, &aut).expect("same instance"), bound);
    expect(
        scaled == base.act(&k),
        || format!("behavior of {k}·A is not {k}·|A|"),
        || json!({ "k": value_to_json(&k), "automaton": automaton_to_json(&aut) }),
    )?;
    Ok(Trial::Pass)
}

/// `A` with `A →X B` for the functional `X` of a surjective map
/// `f: [m] → [n]` (`m ≥ n`): rows of `A` put each entry of `B` on one preimage.
fn split_automaton(b: &WeightedAutomaton, m: usize, rng: &mut ChaCha8Rng) -> (WeightedAutomaton, KMatrix) {
    let id = b.instance();
    let n = b.dim();
    assert!(m >= n, "a surjection needs m ≥ n");
    let f = random::function(m, n, true, rng);
    let preimages: Vec<Vec<usize>> = (0..n).map(|j| (0..m).filter(|&i| f[i] == j).collect()).collect();
    let place = |target: &[SemiringValue], rng: &mut ChaCha8Rng| -> Vec<SemiringValue> {
        let mut out = vec![id.zero(); m];
        for (j, v) in target.iter().enumerate() {
            let i = *preimages[j].choose(rng).expect("surjective");
            out[i] = v.clone();
        }
        out
    };
    let alpha = place(b.alpha().entries(), rng);
    let mut transitions = Vec::new();
    for nm in b.transitions() {
        let mut rows = Vec::with_capacity(m);
        for &fi in &f {
            rows.push(place(nm.row(fi), rng));
        }
        transitions.push(KMatrix::from_rows(id, rows).expect("rectangular"));
    }
    let beta: Vec<Vec<SemiringValue>> = f.iter().map(|&j| vec![b.beta().get(j, 0).clone()]).collect();
    let a = WeightedAutomaton::new(
        b.alphabet().clone(),
        KMatrix::from_rows(id, vec![alpha]).expect("row"),
        transitions,
        KMatrix::from_rows(id, beta).expect("column"),
    )
    .expect("well-formed");
    let mut x = KMatrix::zeros(m, n, id.zero());
    for (i, &j) in f.iter().enumerate() {
        x.set(i, j, id.one());
    }
    (a, x)
}

fn simulation(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Trial, Trial> {
    let id = ctx.id;
    let bound = ctx.config.bound;
    let alphabet = if rng.gen_bool(0.5) { two_letters() } else { Arc::new(Alphabet::new(&["a"]).expect("letter")) };
    let n = rng.gen_range(1..=3);
    let b = random::automaton(id, alphabet.clone(), n, rng.gen_range(0.2..0.7), rng);
    let m = rng.gen_range(n..=4);
    let (a, x) = split_automaton(&b, m, rng);
    let inputs = || json!({ "A": automaton_to_json(&a), "B": automaton_to_json(&b), "X": matrix_to_json(&x) });
    let report = check_simulation(&a, &b, &x).expect("compatible");
    expect(report.valid(), || format!("constructed witness fails: {report:?}"), inputs)?;
    let (ba, bb) = (behavior(&a, bound), behavior(&b, bound));
    expect(ba == bb, || "simulated automata differ in behavior".into(), inputs)?;

    // a second split, composed and chained
    let m2 = rng.gen_range(m..=m + 1);
    let (a2, y) = split_automaton(&a, m2, rng);
    let w1 = SimulationWitness::new(y.clone(), "A2", "A");
    let w2 = SimulationWitness::new(x.clone(), "A", "B");
    let c = compose(&w1, &w2).expect("matching endpoints");
    let r = check_simulation(&a2, &b, &c.matrix).expect("compatible");
    expect(r.valid(), || "composition of valid witnesses is invalid".into(), inputs)?;
    let chain = SimulationChain {
        automata: vec![a2, a.clone(), b.clone()],
        steps: vec![
            ChainStep { matrix: y, orientation: Orientation::Forward },
            ChainStep { matrix: x.clone(), orientation: Orientation::Forward },
        ],
    };
    let r = verify_chain(&chain, bound).expect("well-formed chain");
    expect(r.valid && r.strong && r.behaviors_equal, || format!("chain report {r:?}"), inputs)?;

    // exhaustive search: constructed pair and an unrelated pair
    if id.carrier().is_some() && m * n <= SearchLimits::default().max_cells {
        let found = search_simulation(&a, &b, None, SearchLimits::default()).expect("finite and small");
        expect(found.contains(&x), || "search misses the constructed witness".into(), inputs)?;
        let other = random::automaton(id, alphabet, m, rng.gen_range(0.2..0.7), rng);
        let found_other = search_simulation(&other, &b, None, SearchLimits::default()).expect("finite and small");
        for (src, witnesses) in [(&a, &found), (&other, &found_other)] {
            if let Some(bad) = witnesses.iter().find(|w| !check_simulation(src, &b, w).expect("compatible").valid()) {
                return Err(Trial::Fail(
                    format!("search returned {bad}, which is not a simulation"),
                    json!({ "A": automaton_to_json(src), "B": automaton_to_json(&b), "X": matrix_to_json(bad) }),
                ));
            }
            if !witnesses.is_empty() {
                expect(
                    behavior(src, bound) == bb,
                    || format!("search found {} witnesses between inequivalent automata", witnesses.len()),
                    || json!({ "A": automaton_to_json(src), "B": automaton_to_json(&b) }),
                )?;
            }
        }
    }
    Ok(Trial::Pass)
}

fn decomposition(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Trial, Trial> {
    let id = ctx.id;
    let bound = ctx.config.bound;
    let dim = rng.gen_range(1..=5);
    let a = random::automaton(id, two_letters(), dim, rng.gen_range(0.2..0.7), rng);
    let inputs = || automaton_to_json(&a);
    let d = decompose(&a).expect("finite carrier");
    let r = reconstruct(&d, bound);
    let b = behavior(&a, bound);
    expect(
        r == b,
        || format!("reconstruction differs at {:?}", r.first_difference(&b).map(|w| a.alphabet().render(&w))),
        inputs,
    )?;
    for (w, _) in b.iter() {
        let hits = d.classes.iter().chain(&d.zero_class).filter(|c| c.accepts(&w)).count();
        expect(hits == 1, || format!("{} lies in {hits} level sets", a.alphabet().render(&w)), inputs)?;
    }
    Ok(Trial::Pass)
}

/// Series over `nat-inf` with a nonzero constant term.
fn omega_input(ctx: &Ctx, rng: &mut ChaCha8Rng) -> TruncatedSeries {
    let mut s =
        random::series(SemiringId::NatInf, two_letters(), ctx.config.bound, rng.gen_range(0.1..0.5), false, rng);
    let k = if rng.gen_bool(0.5) { SemiringValue::nat_inf(1) } else { random::nonzero_value(SemiringId::NatInf, rng) };
    s.set(&crate::series::Word::empty(), k).expect("eps in range");
    s
}

fn omega(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Trial, Trial> {
    let s = omega_input(ctx, rng);
    let closed = omega_power(&s).expect("nonzero constant term");
    let cert = certify_omega(&s, &closed, ctx.config.omega).expect("nat-inf");
    expect(
        cert.passes(),
        || {
            let f = &cert.failures[0];
            format!(
                "{:?} at {}: iterates reached {} within {} steps, closed form {} (bound {})",
                f.kind, f.word, f.reached, cert.horizon, f.expected, cert.infinity_bound
            )
        },
        || series_to_json(&s),
    )?;
    Ok(Trial::Pass)
}

fn absorption(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Trial, Trial> {
    let s = omega_input(ctx, rng);
    let bound = ctx.config.bound;
    let r = random::series(SemiringId::NatInf, two_letters(), bound, 0.3, false, rng);
    let u = random::series(SemiringId::NatInf, two_letters(), bound, 0.3, false, rng);
    let inputs = || json!({ "s": series_to_json(&s), "r": series_to_json(&r), "u": series_to_json(&u) });
    let omega = omega_power(&s).expect("nonzero constant term");
    let star = ser_star(&s);
    let t = ser_mul(&star, &r).expect("same shape").add(&ser_mul(&omega, &u).expect("same shape"));
    let linear = s.mul(&t).add(&r);
    expect(linear == t, || "t ≠ s·t + r".into(), inputs)?;
    let fixed = star.mul(&r).add(&omega.mul(&t));
    expect(fixed == t, || "t ≠ s*·r + s^ω·t".into(), inputs)?;
    Ok(Trial::Pass)
}

/// Rewrites one random subterm of `e` by an identity valid in every
/// idempotent star semiring of matrices over the booleans.
pub fn rewrite<R: Rng>(e: &RationalExpr, rng: &mut R) -> RationalExpr {
    let nodes = e.size();
    let target = rng.gen_range(0..nodes);
    let mut counter = 0;
    rewrite_at(e, target, &mut counter, rng)
}

fn rewrite_at<R: Rng>(e: &RationalExpr, target: usize, counter: &mut usize, rng: &mut R) -> RationalExpr {
    let here = *counter;
    *counter += 1;
    if here == target {
        return rewrite_node(e, rng);
    }
    use RationalExpr as E;
    match e {
        E::Zero | E::One | E::Letter(_) => e.clone(),
        E::Sum(a, b) => {
            let a2 = rewrite_at(a, target, counter, rng);
            E::sum(a2, rewrite_at(b, target, counter, rng))
        }
        E::Prod(a, b) => {
            let a2 = rewrite_at(a, target, counter, rng);
            E::prod(a2, rewrite_at(b, target, counter, rng))
        }
        E::Star(a) => E::star(rewrite_at(a, target, counter, rng)),
        E::Scale(k, a) => E::scale(k.clone(), rewrite_at(a, target, counter, rng)),
    }
}

fn rewrite_node<R: Rng>(e: &RationalExpr, rng: &mut R) -> RationalExpr {
    use RationalExpr as E;
    let x = e.clone();
    let mut options: Vec<E> = vec![
        E::sum(x.clone(), x.clone()),
        E::prod(x.clone(), E::One),
        E::prod(E::One, x.clone()),
        E::sum(x.clone(), E::Zero),
    ];
    match e {
        E::Sum(a, b) => {
            options.push(E::sum((**b).clone(), (**a).clone()));
            if let E::Sum(p, q) = &**a {
                options.push(E::sum((**p).clone(), E::sum((**q).clone(), (**b).clone())));
            }
        }
        E::Prod(a, b) => {
            if let E::Prod(p, q) = &**a {
                options.push(E::prod((**p).clone(), E::prod((**q).clone(), (**b).clone())));
            }
            if let E::Sum(p, q) = &**b {
                options.push(E::sum(E::prod((**a).clone(), (**p).clone()), E::prod((**a).clone(), (**q).clone())));
            }
        }
        E::Star(a) => {
            let a = (**a).clone();
            options.push(E::sum(E::One, E::prod(a.clone(), E::star(a.clone()))));
            options.push(E::sum(E::One, E::prod(E::star(a.clone()), a.clone())));
            options.push(E::star(E::star(a.clone())));
            match &a {
                E::Sum(p, q) => {
                    let (p, q) = ((**p).clone(), (**q).clone());
                    options.push(E::prod(E::star(E::prod(E::star(p.clone()), q)), E::star(p)));
                }
                E::Prod(p, q) => {
                    let (p, q) = ((**p).clone(), (**q).clone());
                    options.push(E::sum(E::One, E::prod(p.clone(), E::prod(E::star(E::prod(q.clone(), p)), q))));
                }
                _ => {}
            }
        }
        _ => {}
    }
    options.choose(rng).expect("nonempty").clone()
}

fn hsharp_agreement(ctx: &Ctx, rng: &mut ChaCha8Rng) -> Result<Trial, Trial> {
    let id = SemiringId::Boolean;
    let ab = two_letters();
    let e1 = random::expression(id, &ab, rng.gen_range(2..=8), rng);
    let mut e2 = e1.clone();
    while e2 == e1 {
        for _ in 0..rng.gen_range(1..=3) {
            e2 = rewrite(&e2, rng);
        }
    }
    let inputs = || json!({ "e1": e1.to_string(), "e2": e2.to_string() });
    let s1 = eval_series(&e1, id, ab.clone(), ctx.config.bound).expect("valid");
    let s2 = eval_series(&e2, id, ab.clone(), ctx.config.bound).expect("valid");
    expect(s1 == s2, || "rewrite changed the truncated behavior".into(), inputs)?;
    let (a1, a2) = (compile(&e1, id, ab.clone()).expect("valid"), compile(&e2, id, ab.clone()).expect("valid"));
    for _ in 0..4 {
        let images = vec![random::matrix(id, 2, 2, 0.5, rng), random::matrix(id, 2, 2, 0.5, rng)];
        let h1 = hsharp(&a1, &images).expect("compatible");
        let h2 = hsharp(&a2, &images).expect("compatible");
        let direct = eval_matrix(&e1, &ab, &images).expect("compatible");
        expect(
            h1 == h2 && h1 == direct,
            || format!("images {} / {}: {h1} vs {h2} vs direct {direct}", images[0], images[1]),
            inputs,
        )?;
    }
    Ok(Trial::Pass)
}
