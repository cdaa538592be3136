//! Simulations `A →X B` between automata: `α·X = γ`, `M·X = X·N`, `β = X·δ`.

use rayon::prelude::*;
use thiserror::Error;

use crate::analysis::{joint_closure, AnalysisError};
use crate::automata::{behavior, WeightedAutomaton};
use crate::matrix::{classify, KMatrix, MatrixShape};
use crate::semiring::{SemiringError, SemiringValue};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimulationError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("automata differ in {0}")]
    Incompatible(String),
    #[error("endpoint mismatch: witness ends at `{0}` but the next starts at `{1}`")]
    EndpointMismatch(String, String),
    #[error("malformed chain: {0}")]
    MalformedChain(String),
    #[error("simulation search needs a finite carrier; {0} is infinite")]
    InfiniteCarrier(String),
    #[error("search space too large: {cells} matrix entries exceed the limit of {limit}")]
    TooLarge { cells: usize, limit: usize },
    #[error(transparent)]
    Semiring(#[from] SemiringError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationReport {
    /// `α·X = γ`
    pub initial: bool,
    /// `M_a·X = X·N_a`, per letter in alphabet order.
    pub transitions: Vec<bool>,
    /// `β = X·δ`
    pub final_: bool,
}

impl SimulationReport {
    pub fn valid(&self) -> bool {
        self.initial && self.final_ && self.transitions.iter().all(|&t| t)
    }
}

fn compatible(a: &WeightedAutomaton, b: &WeightedAutomaton) -> Result<(), SimulationError> {
    if a.instance() != b.instance() {
        return Err(SemiringError::InstanceMismatch(a.instance(), b.instance()).into());
    }
    if a.alphabet() != b.alphabet() {
        return Err(SimulationError::Incompatible(format!("alphabet: {} vs {}", a.alphabet(), b.alphabet())));
    }
    Ok(())
}

pub fn check_simulation(
    a: &WeightedAutomaton,
    b: &WeightedAutomaton,
    x: &KMatrix,
) -> Result<SimulationReport, SimulationError> {
    compatible(a, b)?;
    if x.instance() != a.instance() {
        return Err(SemiringError::InstanceMismatch(a.instance(), x.instance()).into());
    }
    if x.rows() != a.dim() || x.cols() != b.dim() {
        return Err(SimulationError::Dimension(format!(
            "witness is {}x{}, automata have dimensions {} and {}",
            x.rows(),
            x.cols(),
            a.dim(),
            b.dim()
        )));
    }
    Ok(check_unchecked(a, b, x))
}

fn check_unchecked(a: &WeightedAutomaton, b: &WeightedAutomaton, x: &KMatrix) -> SimulationReport {
    SimulationReport {
        initial: a.alpha().product(x) == *b.alpha(),
        transitions: a.transitions().iter().zip(b.transitions()).map(|(m, n)| m.product(x) == x.product(n)).collect(),
        final_: *a.beta() == x.product(b.beta()),
    }
}

/// A simulation matrix together with the names of its endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationWitness {
    pub matrix: KMatrix,
    pub shape: MatrixShape,
    pub from: String,
    pub to: String,
}

impl SimulationWitness {
    pub fn new(matrix: KMatrix, from: impl Into<String>, to: impl Into<String>) -> Self {
        let shape = classify(&matrix);
        SimulationWitness { matrix, shape, from: from.into(), to: to.into() }
    }
}

/// `A →X B` and `B →Y C` give `A →XY C`.
pub fn compose(w1: &SimulationWitness, w2: &SimulationWitness) -> Result<SimulationWitness, SimulationError> {
    if w1.to != w2.from {
        return Err(SimulationError::EndpointMismatch(w1.to.clone(), w2.from.clone()));
    }
    if w1.matrix.cols() != w2.matrix.rows() {
        return Err(SimulationError::Dimension(format!(
            "{}x{} · {}x{}",
            w1.matrix.rows(),
            w1.matrix.cols(),
            w2.matrix.rows(),
            w2.matrix.cols()
        )));
    }
    if w1.matrix.instance() != w2.matrix.instance() {
        return Err(SemiringError::InstanceMismatch(w1.matrix.instance(), w2.matrix.instance()).into());
    }
    Ok(SimulationWitness::new(w1.matrix.product(&w2.matrix), w1.from.clone(), w2.to.clone()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `C_i →X C_{i+1}`
    Forward,
    /// `C_{i+1} →X C_i`
    Backward,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainStep {
    pub matrix: KMatrix,
    pub orientation: Orientation,
}

/// Automata `C_0, …, C_k` linked by `k` simulation steps.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationChain {
    pub automata: Vec<WeightedAutomaton>,
    pub steps: Vec<ChainStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub valid: bool,
    /// Index of the first step failing its simulation conditions.
    pub broken_link: Option<usize>,
    /// Every step is functional, dual functional or invertible diagonal.
    pub strong: bool,
    pub shapes: Vec<MatrixShape>,
    /// Endpoint behaviors agree up to `bound`.
    pub behaviors_equal: bool,
    pub bound: usize,
}

pub fn verify_chain(chain: &SimulationChain, bound: usize) -> Result<ChainReport, SimulationError> {
    let Some(first) = chain.automata.first() else {
        return Err(SimulationError::MalformedChain("no automata".into()));
    };
    if chain.steps.len() + 1 != chain.automata.len() {
        return Err(SimulationError::MalformedChain(format!(
            "{} automata need {} steps, got {}",
            chain.automata.len(),
            chain.automata.len() - 1,
            chain.steps.len()
        )));
    }
    let mut broken_link = None;
    let mut shapes = Vec::with_capacity(chain.steps.len());
    for (i, step) in chain.steps.iter().enumerate() {
        let (c0, c1) = (&chain.automata[i], &chain.automata[i + 1]);
        let (src, dst) = match step.orientation {
            Orientation::Forward => (c0, c1),
            Orientation::Backward => (c1, c0),
        };
        let report = check_simulation(src, dst, &step.matrix)?;
        if !report.valid() && broken_link.is_none() {
            broken_link = Some(i);
        }
        shapes.push(classify(&step.matrix));
    }
    let last = chain.automata.last().expect("nonempty");
    compatible(first, last)?;
    Ok(ChainReport {
        valid: broken_link.is_none(),
        broken_link,
        strong: shapes.iter().all(|s| s.is_strong()),
        shapes,
        behaviors_equal: behavior(first, bound) == behavior(last, bound),
        bound,
    })
}

/// For equivalent automata over a finite carrier: the automaton `P` on the
/// reachable pairs of [`joint_closure`] and the chain `A ←X P →Y B`, where the
/// rows of `X` and `Y` are the reachable vectors. `None` when the behaviors
/// differ.
pub fn joint_intermediate(
    a: &WeightedAutomaton,
    b: &WeightedAutomaton,
) -> Result<Option<SimulationChain>, SimulationError> {
    let closure = joint_closure(a, b).map_err(|e| match e {
        AnalysisError::InfiniteCarrier(id) => SimulationError::InfiniteCarrier(id.to_string()),
        other => SimulationError::Incompatible(other.to_string()),
    })?;
    let id = a.instance();
    let n = closure.pairs.len();
    let outputs: Vec<SemiringValue> =
        closure.pairs.iter().map(|(u, _)| u.product(a.beta()).get(0, 0).clone()).collect();
    if closure.pairs.iter().zip(&outputs).any(|((_, v), o)| v.product(b.beta()).get(0, 0) != o) {
        return Ok(None);
    }
    let alpha = KMatrix::from_fn(1, n, id.zero(), |_, j| if j == 0 { id.one() } else { id.zero() });
    let transitions = (0..a.alphabet().len())
        .map(|l| {
            KMatrix::from_fn(n, n, id.zero(), |i, j| if closure.transitions[i][l] == j { id.one() } else { id.zero() })
        })
        .collect();
    let beta = KMatrix::from_fn(n, 1, id.zero(), |i, _| outputs[i].clone());
    let p = WeightedAutomaton::new(a.alphabet().clone(), alpha, transitions, beta)
        .map_err(|e| SimulationError::MalformedChain(e.to_string()))?;
    let x = KMatrix::from_fn(n, a.dim(), id.zero(), |i, j| closure.pairs[i].0.get(0, j).clone());
    let y = KMatrix::from_fn(n, b.dim(), id.zero(), |i, j| closure.pairs[i].1.get(0, j).clone());
    Ok(Some(SimulationChain {
        automata: vec![a.clone(), p, b.clone()],
        steps: vec![
            ChainStep { matrix: x, orientation: Orientation::Backward },
            ChainStep { matrix: y, orientation: Orientation::Forward },
        ],
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Upper bound on `m·n`, the number of witness entries.
    pub max_cells: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_cells: 12 }
    }
}

/// Every `X ∈ K^{m×n}` with `A →X B`, optionally restricted to matrices of
/// the given shape, in lexicographic order of their row-major entries
/// (carrier order per entry).
///
/// Rows are enumerated independently first, keeping only those that satisfy
/// their component of `β = X·δ`. The surviving rows are then combined
/// depth-first, one worker per choice of the first row, and the results are
/// concatenated in that order.
pub fn search_simulation(
    a: &WeightedAutomaton,
    b: &WeightedAutomaton,
    shape: Option<MatrixShape>,
    limits: SearchLimits,
) -> Result<Vec<KMatrix>, SimulationError> {
    compatible(a, b)?;
    let id = a.instance();
    let carrier = id.carrier().ok_or_else(|| SimulationError::InfiniteCarrier(id.to_string()))?;
    let (m, n) = (a.dim(), b.dim());
    let cells = m * n;
    if cells > limits.max_cells {
        return Err(SimulationError::TooLarge { cells, limit: limits.max_cells });
    }

    let rows_for = |i: usize| -> Vec<Vec<SemiringValue>> {
        let mut out = Vec::new();
        let mut row = vec![0usize; n];
        loop {
            let values: Vec<SemiringValue> = row.iter().map(|&c| carrier[c].clone()).collect();
            let dot = values.iter().enumerate().fold(id.zero(), |acc, (j, v)| acc.plus(&v.times(b.beta().get(j, 0))));
            if dot == *a.beta().get(i, 0) {
                out.push(values);
            }
            // odometer, last entry fastest
            let mut k = n;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                row[k] += 1;
                if row[k] < carrier.len() {
                    break;
                }
                row[k] = 0;
            }
        }
    };
    let candidates: Vec<Vec<Vec<SemiringValue>>> = (0..m).map(rows_for).collect();
    if candidates.iter().any(Vec::is_empty) {
        return Ok(Vec::new());
    }
    let search = RowSearch::new(a, b, candidates);
    let first = search.start();
    let per_branch: Vec<Vec<KMatrix>> = (0..search.candidates[0].len())
        .into_par_iter()
        .map(|c| {
            let mut found = Vec::new();
            let mut picks = Vec::with_capacity(m);
            search.descend(&first, c, &mut picks, &mut found);
            found
        })
        .collect();
    Ok(per_branch.into_iter().flatten().filter(|x| shape.is_none_or(|s| s.admits(x))).collect())
}

/// Depth-first assignment of witness rows in order. A partial sum is always
/// below the full sum in the sum order, so a branch is cut as soon as some
/// partial row of `M_a·X` or `α·X` is not below its target.
struct RowSearch<'s> {
    a: &'s WeightedAutomaton,
    candidates: Vec<Vec<Vec<SemiringValue>>>,
    /// `targets[i][c][l]` is row `i` of `X·N_l` when row `i` of `X` is candidate `c`.
    targets: Vec<Vec<Vec<Vec<SemiringValue>>>>,
    /// `complete_at[l][i]`: last row index that row `i` of `M_l·X` depends on.
    complete_at: Vec<Vec<Option<usize>>>,
    gamma: Vec<SemiringValue>,
}

#[derive(Clone)]
struct Partial {
    /// `lhs[l][i]`: accumulated row `i` of `M_l·X`.
    lhs: Vec<Vec<Vec<SemiringValue>>>,
    alpha: Vec<SemiringValue>,
}

fn axpy(acc: &mut [SemiringValue], k: &SemiringValue, row: &[SemiringValue]) {
    if k.is_zero() {
        return;
    }
    for (t, v) in acc.iter_mut().zip(row) {
        *t = t.plus(&k.times(v));
    }
}

fn below_all(xs: &[SemiringValue], ys: &[SemiringValue]) -> bool {
    xs.iter().zip(ys).all(|(x, y)| x.below(y))
}

impl<'s> RowSearch<'s> {
    fn new(a: &'s WeightedAutomaton, b: &WeightedAutomaton, candidates: Vec<Vec<Vec<SemiringValue>>>) -> Self {
        let targets = candidates
            .iter()
            .map(|rows| {
                rows.iter()
                    .map(|row| {
                        let x = KMatrix::from_rows(a.instance(), vec![row.clone()]).expect("row");
                        b.transitions().iter().map(|nl| x.product(nl).entries().to_vec()).collect()
                    })
                    .collect()
            })
            .collect();
        let m = a.dim();
        let complete_at = a
            .transitions()
            .iter()
            .map(|ml| (0..m).map(|i| (0..m).rev().find(|&k| !ml.get(i, k).is_zero())).collect())
            .collect();
        RowSearch { a, candidates, targets, complete_at, gamma: b.alpha().entries().to_vec() }
    }

    fn start(&self) -> Partial {
        let n = self.gamma.len();
        let zero = self.a.instance().zero();
        Partial {
            lhs: vec![vec![vec![zero.clone(); n]; self.a.dim()]; self.a.transitions().len()],
            alpha: vec![zero; n],
        }
    }

    fn descend(&self, partial: &Partial, c: usize, picks: &mut Vec<usize>, found: &mut Vec<KMatrix>) {
        let r = picks.len();
        let m = self.a.dim();
        let row = &self.candidates[r][c];
        let mut next = partial.clone();
        for (l, ml) in self.a.transitions().iter().enumerate() {
            for i in 0..m {
                axpy(&mut next.lhs[l][i], ml.get(i, r), row);
            }
        }
        axpy(&mut next.alpha, self.a.alpha().get(0, r), row);
        picks.push(c);
        if self.consistent(&next, picks) {
            if r + 1 == m {
                let rows = picks.iter().enumerate().map(|(i, &p)| self.candidates[i][p].clone()).collect();
                found.push(KMatrix::from_rows(self.a.instance(), rows).expect("rectangular"));
            } else {
                for c2 in 0..self.candidates[r + 1].len() {
                    self.descend(&next, c2, picks, found);
                }
            }
        }
        picks.pop();
    }

    fn consistent(&self, p: &Partial, picks: &[usize]) -> bool {
        let r = picks.len() - 1;
        let last = r + 1 == self.a.dim();
        if !(if last { p.alpha == self.gamma } else { below_all(&p.alpha, &self.gamma) }) {
            return false;
        }
        for (l, rows) in p.lhs.iter().enumerate() {
            for (i, &ci) in picks.iter().enumerate() {
                let target = &self.targets[i][ci][l];
                let done = self.complete_at[l][i].is_none_or(|k| k <= r);
                let ok = if done { rows[i] == *target } else { below_all(&rows[i], target) };
                if !ok {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::automata::{compile, letter_automaton, RationalExpr};
    use crate::semiring::SemiringId;
    use crate::series::Alphabet;

    fn single_a() -> Arc<Alphabet> {
        Arc::new(Alphabet::new(&["a"]).unwrap())
    }

    /// Three states; state 1 reads `a` into both 2 and 3, both final.
    fn split_automaton() -> WeightedAutomaton {
        let b = SemiringId::Boolean;
        WeightedAutomaton::new(
            single_a(),
            KMatrix::from_u64(b, &[&[1, 0, 0]]),
            vec![KMatrix::from_u64(b, &[&[0, 1, 1], &[0, 0, 0], &[0, 0, 0]])],
            KMatrix::from_u64(b, &[&[0], &[1], &[1]]),
        )
        .unwrap()
    }

    fn merge_matrix() -> KMatrix {
        KMatrix::from_u64(SemiringId::Boolean, &[&[1, 0], &[0, 1], &[0, 1]])
    }

    #[test]
    fn identity_is_a_simulation() {
        let a = split_automaton();
        let x = KMatrix::identity(3, SemiringId::Boolean.zero());
        assert!(check_simulation(&a, &a, &x).unwrap().valid());
    }

    #[test]
    fn functional_merge_is_a_simulation() {
        let b = letter_automaton(SemiringId::Boolean, single_a(), 0);
        let r = check_simulation(&split_automaton(), &b, &merge_matrix()).unwrap();
        assert!(r.valid());
        assert_eq!(classify(&merge_matrix()), MatrixShape::Functional);
    }

    #[test]
    fn zero_witness_fails_initial_condition() {
        let b = letter_automaton(SemiringId::Boolean, single_a(), 0);
        let x = KMatrix::zeros(3, 2, SemiringId::Boolean.zero());
        let r = check_simulation(&split_automaton(), &b, &x).unwrap();
        assert!(!r.initial);
        assert!(!r.valid());
    }

    #[test]
    fn check_rejects_bad_dimensions() {
        let b = letter_automaton(SemiringId::Boolean, single_a(), 0);
        let x = KMatrix::zeros(2, 2, SemiringId::Boolean.zero());
        assert!(matches!(check_simulation(&split_automaton(), &b, &x), Err(SimulationError::Dimension(_))));
        let n = letter_automaton(SemiringId::NatInf, single_a(), 0);
        assert!(check_simulation(&n, &b, &KMatrix::zeros(2, 2, SemiringId::NatInf.zero())).is_err());
    }

    #[test]
    fn composition() {
        let id3 = SimulationWitness::new(KMatrix::identity(3, SemiringId::Boolean.zero()), "A", "A");
        let merge = SimulationWitness::new(merge_matrix(), "A", "B");
        let c = compose(&id3, &id3).unwrap();
        assert_eq!(c.matrix, id3.matrix);
        let c = compose(&id3, &merge).unwrap();
        assert_eq!(c.matrix, merge.matrix);
        assert_eq!((c.from.as_str(), c.to.as_str()), ("A", "B"));
        assert!(compose(&merge, &id3).is_err());

        let f1 = SimulationWitness::new(merge_matrix(), "A", "B");
        let f2 = SimulationWitness::new(KMatrix::from_u64(SemiringId::Boolean, &[&[0, 1], &[1, 0]]), "B", "C");
        let c = compose(&f1, &f2).unwrap();
        assert!(MatrixShape::Functional.admits(&c.matrix));
    }

    #[test]
    fn chain_verification() {
        let a = split_automaton();
        let b = letter_automaton(SemiringId::Boolean, single_a(), 0);
        let chain = SimulationChain {
            automata: vec![a.clone(), b.clone()],
            steps: vec![ChainStep { matrix: merge_matrix(), orientation: Orientation::Forward }],
        };
        let r = verify_chain(&chain, 6).unwrap();
        assert!(r.valid && r.strong && r.behaviors_equal);

        let r = verify_chain(&SimulationChain { automata: vec![a.clone()], steps: vec![] }, 6).unwrap();
        assert!(r.valid && r.strong && r.behaviors_equal);

        let broken = SimulationChain {
            automata: vec![a.clone(), b.clone(), a.clone()],
            steps: vec![
                ChainStep { matrix: merge_matrix(), orientation: Orientation::Forward },
                ChainStep {
                    matrix: KMatrix::zeros(2, 3, SemiringId::Boolean.zero()),
                    orientation: Orientation::Forward,
                },
            ],
        };
        let r = verify_chain(&broken, 6).unwrap();
        assert!(!r.valid);
        assert_eq!(r.broken_link, Some(1));

        let back = SimulationChain {
            automata: vec![a.clone(), b.clone(), a.clone()],
            steps: vec![
                ChainStep { matrix: merge_matrix(), orientation: Orientation::Forward },
                ChainStep { matrix: merge_matrix(), orientation: Orientation::Backward },
            ],
        };
        assert!(verify_chain(&back, 6).unwrap().valid);

        let malformed = SimulationChain { automata: vec![a, b], steps: vec![] };
        assert!(matches!(verify_chain(&malformed, 6), Err(SimulationError::MalformedChain(_))));
        assert!(verify_chain(&SimulationChain { automata: vec![], steps: vec![] }, 6).is_err());
    }

    #[test]
    fn search_finds_identity_and_merge() {
        let id = SemiringId::Boolean;
        let l = compile(&RationalExpr::letter("a"), id, single_a()).unwrap();
        let found = search_simulation(&l, &l, None, SearchLimits::default()).unwrap();
        assert!(found.contains(&KMatrix::identity(2, id.zero())));

        let found = search_simulation(&split_automaton(), &l, None, SearchLimits::default()).unwrap();
        assert!(found.contains(&merge_matrix()));
        let functional =
            search_simulation(&split_automaton(), &l, Some(MatrixShape::Functional), SearchLimits::default()).unwrap();
        assert_eq!(functional, vec![merge_matrix()]);
    }

    #[test]
    fn search_on_inequivalent_pair_is_empty() {
        let id = SemiringId::Boolean;
        let l = compile(&RationalExpr::letter("a"), id, single_a()).unwrap();
        let ll =
            compile(&RationalExpr::prod(RationalExpr::letter("a"), RationalExpr::letter("a")), id, single_a()).unwrap();
        assert!(search_simulation(&l, &ll, None, SearchLimits::default()).unwrap().is_empty());
    }

    #[test]
    fn search_preconditions() {
        let n = letter_automaton(SemiringId::NatInf, single_a(), 0);
        assert!(matches!(
            search_simulation(&n, &n, None, SearchLimits::default()),
            Err(SimulationError::InfiniteCarrier(_))
        ));
        let b = split_automaton();
        assert!(matches!(
            search_simulation(&b, &b, None, SearchLimits { max_cells: 4 }),
            Err(SimulationError::TooLarge { cells: 9, limit: 4 })
        ));
    }

    #[test]
    fn search_order_is_lexicographic() {
        let id = SemiringId::Chain(3);
        let a = letter_automaton(id, single_a(), 0);
        let found = search_simulation(&a, &a, None, SearchLimits::default()).unwrap();
        let keys: Vec<Vec<u32>> =
            found.iter().map(|x| x.entries().iter().map(|v| v.as_level().unwrap()).collect()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(!found.is_empty());
    }

    /// Every `X` in carrier order, first entry slowest, filtered by the conditions.
    fn naive(a: &WeightedAutomaton, b: &WeightedAutomaton) -> Vec<KMatrix> {
        let id = a.instance();
        let carrier = id.carrier().unwrap();
        let (m, n) = (a.dim(), b.dim());
        let total = carrier.len().pow((m * n) as u32);
        (0..total)
            .map(|mut code| {
                let mut entries = vec![0; m * n];
                for e in entries.iter_mut().rev() {
                    *e = code % carrier.len();
                    code /= carrier.len();
                }
                KMatrix::from_fn(m, n, id.zero(), |i, j| carrier[entries[i * n + j]].clone())
            })
            .filter(|x| check_simulation(a, b, x).unwrap().valid())
            .collect()
    }

    #[test]
    fn pruned_search_matches_naive_enumeration() {
        use crate::random;
        let mut nonempty = 0;
        for (t, id) in [SemiringId::Boolean, SemiringId::Chain(3)].into_iter().cycle().take(60).enumerate() {
            let mut rng = random::trial_rng(11, 0, t as u64);
            let al = single_a();
            let (m, n) = (1 + t % 3, 1 + (t / 3) % 2);
            let b = random::automaton(id, al.clone(), n, 0.5, &mut rng);
            let a = if t % 2 == 0 { random::automaton(id, al, m, 0.5, &mut rng) } else { b.clone() };
            let fast = search_simulation(&a, &b, None, SearchLimits::default()).unwrap();
            assert_eq!(fast, naive(&a, &b), "trial {t}");
            nonempty += usize::from(!fast.is_empty());
        }
        assert!(nonempty > 10);
    }

    #[test]
    fn joint_intermediate_links_equivalent_automata() {
        use crate::syntax::parse_expr;
        let b = SemiringId::Boolean;
        let ab = Arc::new(Alphabet::new(&["a", "b"]).unwrap());
        let c = |t: &str| compile(&parse_expr(t, b, &ab).unwrap(), b, ab.clone()).unwrap();
        let chain = joint_intermediate(&c("(a+b)*"), &c("(a*.b)*.a*")).unwrap().unwrap();
        let r = verify_chain(&chain, 6).unwrap();
        assert!(r.valid && r.behaviors_equal);
        assert_eq!(joint_intermediate(&c("a*"), &c("a.a*")).unwrap(), None);
        let n = SemiringId::NatInf;
        let l = letter_automaton(n, single_a(), 0);
        assert!(matches!(joint_intermediate(&l, &l), Err(SimulationError::InfiniteCarrier(_))));
    }
}
