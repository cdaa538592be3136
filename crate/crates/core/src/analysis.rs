//! Level-set DFAs of automata over finite carriers, characteristic-series
//! decomposition, and the ω-power of series over `nat-inf`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::automata::WeightedAutomaton;
use crate::matrix::KMatrix;
use crate::semiring::{ExtNat, SemiringId, SemiringValue};
use crate::series::{ser_mul, ser_star, Alphabet, TruncatedSeries, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("level-set analysis needs a finite carrier; {0} is infinite")]
    InfiniteCarrier(SemiringId),
    #[error("the ω-power is only available over nat-inf, not {0}")]
    Unsupported(SemiringId),
    #[error("series is proper (constant term 0); its ω-power is 0 and the equation solution is unique, use ser_star instead")]
    ProperSeries,
    #[error("malformed DFA: {0}")]
    Malformed(String),
    #[error("automata differ in {0}")]
    Incompatible(String),
}

/// Deterministic automaton on the reachable left vectors `α·M_w`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetDfa {
    pub instance: SemiringId,
    pub alphabet: Arc<Alphabet>,
    /// Reachable `1×n` vectors in discovery order; state 0 is `α`.
    pub states: Vec<KMatrix>,
    /// `transitions[q][a]` is the state of `states[q]·M_a`.
    pub transitions: Vec<Vec<usize>>,
    /// `outputs[q] = states[q]·β`.
    pub outputs: Vec<SemiringValue>,
}

impl LevelSetDfa {
    /// Checks totality and index ranges.
    pub fn new(
        instance: SemiringId,
        alphabet: Arc<Alphabet>,
        states: Vec<KMatrix>,
        transitions: Vec<Vec<usize>>,
        outputs: Vec<SemiringValue>,
    ) -> Result<Self, AnalysisError> {
        let n = states.len();
        if n == 0 {
            return Err(AnalysisError::Malformed("no states".into()));
        }
        if transitions.len() != n || outputs.len() != n {
            return Err(AnalysisError::Malformed(format!(
                "{n} states but {} transition rows and {} outputs",
                transitions.len(),
                outputs.len()
            )));
        }
        for (q, row) in transitions.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(AnalysisError::Malformed(format!("state {q} has {} successors", row.len())));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= n) {
                return Err(AnalysisError::Malformed(format!("state {q} moves to missing state {t}")));
            }
        }
        if let Some(v) = outputs.iter().find(|v| v.instance() != instance) {
            return Err(AnalysisError::Malformed(format!("output {v} is not in {instance}")));
        }
        Ok(LevelSetDfa { instance, alphabet, states, transitions, outputs })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn run(&self, word: &Word) -> usize {
        word.letters().iter().fold(0, |q, &a| self.transitions[q][a])
    }

    pub fn output(&self, word: &Word) -> &SemiringValue {
        &self.outputs[self.run(word)]
    }

    /// States whose output is `value`.
    pub fn accepting_for(&self, value: &SemiringValue) -> BTreeSet<usize> {
        (0..self.len()).filter(|&q| self.outputs[q] == *value).collect()
    }

    /// Distinct output values in order of first discovery.
    pub fn output_values(&self) -> Vec<SemiringValue> {
        let mut seen = Vec::new();
        for v in &self.outputs {
            if !seen.contains(v) {
                seen.push(v.clone());
            }
        }
        seen
    }
}

/// Breadth-first closure of `{α}` under `v ↦ v·M_a`, letters in alphabet order.
pub fn image_finite_analysis(a: &WeightedAutomaton) -> Result<LevelSetDfa, AnalysisError> {
    let id = a.instance();
    if id.carrier().is_none() {
        return Err(AnalysisError::InfiniteCarrier(id));
    }
    let mut index: HashMap<Vec<SemiringValue>, usize> = HashMap::new();
    let mut states = vec![a.alpha().clone()];
    index.insert(a.alpha().entries().to_vec(), 0);
    let mut transitions: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(q) = queue.pop_front() {
        let row: Vec<usize> = a
            .transitions()
            .iter()
            .map(|m| {
                let next = states[q].product(m);
                let key = next.entries().to_vec();
                *index.entry(key).or_insert_with(|| {
                    states.push(next);
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                })
            })
            .collect();
        if transitions.len() <= q {
            transitions.resize(q + 1, Vec::new());
        }
        transitions[q] = row;
    }
    let outputs = states.iter().map(|v| v.product(a.beta()).get(0, 0).clone()).collect();
    Ok(LevelSetDfa { instance: id, alphabet: a.alphabet().clone(), states, transitions, outputs })
}

/// Reachable pairs `(α_A·M_w, α_B·M'_w)` of two automata over the same
/// alphabet, discovered breadth-first with letters in alphabet order, so
/// `words[q]` is the length-lex least word reaching pair `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointClosure {
    pub pairs: Vec<(KMatrix, KMatrix)>,
    pub transitions: Vec<Vec<usize>>,
    pub words: Vec<Word>,
}

pub fn joint_closure(a: &WeightedAutomaton, b: &WeightedAutomaton) -> Result<JointClosure, AnalysisError> {
    let id = a.instance();
    if id.carrier().is_none() {
        return Err(AnalysisError::InfiniteCarrier(id));
    }
    if b.instance() != id {
        return Err(AnalysisError::Incompatible(format!("semiring: {id} vs {}", b.instance())));
    }
    if a.alphabet() != b.alphabet() {
        return Err(AnalysisError::Incompatible(format!("alphabet: {} vs {}", a.alphabet(), b.alphabet())));
    }
    let key = |p: &(KMatrix, KMatrix)| [p.0.entries(), p.1.entries()].concat();
    let start = (a.alpha().clone(), b.alpha().clone());
    let mut index = HashMap::from([(key(&start), 0usize)]);
    let mut out = JointClosure { pairs: vec![start], transitions: Vec::new(), words: vec![Word::empty()] };
    let mut q = 0;
    while q < out.pairs.len() {
        let mut row = Vec::with_capacity(a.alphabet().len());
        for l in 0..a.alphabet().len() {
            let next = (out.pairs[q].0.product(a.transition(l)), out.pairs[q].1.product(b.transition(l)));
            let k = key(&next);
            let t = match index.get(&k) {
                Some(&t) => t,
                None => {
                    let t = out.pairs.len();
                    let mut w = out.words[q].clone();
                    w.0.push(l);
                    out.pairs.push(next);
                    out.words.push(w);
                    index.insert(k, t);
                    t
                }
            };
            row.push(t);
        }
        out.transitions.push(row);
        q += 1;
    }
    Ok(out)
}

/// Length-lex least word on which the behaviors differ, or `None` when the
/// automata are equivalent. Exact (no length bound) on finite carriers.
pub fn distinguishing_word(a: &WeightedAutomaton, b: &WeightedAutomaton) -> Result<Option<Word>, AnalysisError> {
    let c = joint_closure(a, b)?;
    let differs = |q: usize| c.pairs[q].0.product(a.beta()) != c.pairs[q].1.product(b.beta());
    // discovery order is by word length, but equal lengths may not be in
    // length-lex order across parents; pick the least among the shortest
    let mut best: Option<&Word> = None;
    for q in (0..c.pairs.len()).filter(|&q| differs(q)) {
        let w = &c.words[q];
        let better = match best {
            None => true,
            Some(bw) => (w.len(), w.letters()) < (bw.len(), bw.letters()),
        };
        if better {
            best = Some(w);
        }
    }
    Ok(best.cloned())
}

/// An acceptor for one level set: the shared DFA with a set of final states.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSet {
    pub value: SemiringValue,
    pub dfa: Arc<LevelSetDfa>,
    pub accepting: BTreeSet<usize>,
}

impl LevelSet {
    pub fn accepts(&self, word: &Word) -> bool {
        self.accepting.contains(&self.dfa.run(word))
    }
}

/// `r = Σ k_i·s_i` with each `s_i` the characteristic series of a level set.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub instance: SemiringId,
    pub alphabet: Arc<Alphabet>,
    /// Nonzero level sets in order of first discovery.
    pub classes: Vec<LevelSet>,
    /// Words with coefficient zero, if any DFA state outputs zero.
    pub zero_class: Option<LevelSet>,
}

pub fn decompose(a: &WeightedAutomaton) -> Result<Decomposition, AnalysisError> {
    let dfa = Arc::new(image_finite_analysis(a)?);
    let mut classes = Vec::new();
    let mut zero_class = None;
    for value in dfa.output_values() {
        let set = LevelSet { accepting: dfa.accepting_for(&value), value, dfa: dfa.clone() };
        if set.value.is_zero() {
            zero_class = Some(set);
        } else {
            classes.push(set);
        }
    }
    Ok(Decomposition { instance: a.instance(), alphabet: a.alphabet().clone(), classes, zero_class })
}

/// `Σ k_i·char(L(D_i))` over all words of length at most `bound`.
pub fn reconstruct(d: &Decomposition, bound: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(d.instance, d.alphabet.clone(), bound, |w| {
        d.classes.iter().filter(|c| c.accepts(w)).fold(d.instance.zero(), |acc, c| acc.plus(&c.value))
    })
}

/// `s^ω = k^ω·ε + ∞·s₀⁺` for `s = k + s₀` over `nat-inf` with `k ≥ 1`,
/// where `k^ω` is 1 for `k = 1` and ∞ otherwise.
pub fn omega_power(s: &TruncatedSeries) -> Result<TruncatedSeries, AnalysisError> {
    let id = s.instance();
    if id != SemiringId::NatInf {
        return Err(AnalysisError::Unsupported(id));
    }
    let k = s.constant_term();
    if k.is_zero() {
        return Err(AnalysisError::ProperSeries);
    }
    let inf = SemiringValue::ext(id, ExtNat::Inf).expect("nat-inf has ∞");
    let k_omega = if k.is_one() { id.one() } else { inf.clone() };
    let s0 = s.proper_part();
    let plus = ser_mul(&s0, &ser_star(&s0)).expect("same shape");
    let mut out = TruncatedSeries::from_fn(id, s.alphabet().clone(), s.bound(), |w| {
        let c = plus.coeff(w).expect("in range");
        if c.is_zero() {
            id.zero()
        } else {
            inf.clone()
        }
    });
    out.set(&Word::empty(), k_omega.plus(out.constant_term())).expect("eps in range");
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OmegaOracleConfig {
    /// Number of iterates `s¹ … s^N`; `None` means `2L + 8`.
    pub horizon: Option<usize>,
    /// Finite threshold standing in for ∞.
    pub infinity_bound: u64,
}

impl Default for OmegaOracleConfig {
    fn default() -> Self {
        OmegaOracleConfig { horizon: None, infinity_bound: 1_000_000 }
    }
}

impl OmegaOracleConfig {
    pub fn horizon_for(&self, bound: usize) -> usize {
        self.horizon.unwrap_or(2 * bound + 8)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaFailureKind {
    /// `(sⁿ, w)` decreased at some step.
    NotMonotone,
    /// Some iterate exceeds the closed form.
    NotDominated,
    /// A finite closed-form value was not reached by step `N`.
    NotAttained,
    /// An infinite closed-form value was not certified: no iterate reached the bound.
    NotCrossed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaFailure {
    pub word: String,
    pub kind: OmegaFailureKind,
    /// Largest iterate coefficient seen.
    pub reached: String,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaCertificate {
    pub horizon: usize,
    pub infinity_bound: u64,
    pub monotone: bool,
    pub dominated: bool,
    pub attained: bool,
    pub crossed: bool,
    pub failures: Vec<OmegaFailure>,
}

impl OmegaCertificate {
    pub fn passes(&self) -> bool {
        self.monotone && self.dominated && self.attained && self.crossed
    }
}

/// Compares `closed` against the iterates `s¹ … s^N` coefficientwise.
pub fn certify_omega(
    s: &TruncatedSeries,
    closed: &TruncatedSeries,
    config: OmegaOracleConfig,
) -> Result<OmegaCertificate, AnalysisError> {
    if s.instance() != SemiringId::NatInf {
        return Err(AnalysisError::Unsupported(s.instance()));
    }
    let horizon = config.horizon_for(s.bound());
    let mut iterates = Vec::with_capacity(horizon);
    let mut power = s.clone();
    for _ in 0..horizon {
        iterates.push(power.clone());
        power = ser_mul(&power, s).expect("same shape");
    }
    let bound = ExtNat::from(config.infinity_bound);
    let mut cert = OmegaCertificate {
        horizon,
        infinity_bound: config.infinity_bound,
        monotone: true,
        dominated: true,
        attained: true,
        crossed: true,
        failures: Vec::new(),
    };
    for (w, v) in closed.iter() {
        let seq: Vec<&ExtNat> =
            iterates.iter().map(|it| it.coeff(&w).expect("in range").as_ext().expect("nat-inf")).collect();
        let target = v.as_ext().expect("nat-inf");
        let max = seq.iter().copied().max().cloned().unwrap_or_else(ExtNat::zero);
        let mut fail = |kind| {
            cert.failures.push(OmegaFailure {
                word: closed.alphabet().render(&w),
                kind,
                reached: max.to_string(),
                expected: target.to_string(),
            });
        };
        if seq.windows(2).any(|p| p[0] > p[1]) {
            cert.monotone = false;
            fail(OmegaFailureKind::NotMonotone);
        }
        if seq.iter().any(|c| *c > target) {
            cert.dominated = false;
            fail(OmegaFailureKind::NotDominated);
        }
        if target.is_inf() {
            if max < bound {
                cert.crossed = false;
                fail(OmegaFailureKind::NotCrossed);
            }
        } else if !seq.contains(&target) && !(horizon == 0 && *target == ExtNat::zero()) {
            cert.attained = false;
            fail(OmegaFailureKind::NotAttained);
        }
    }
    Ok(cert)
}
