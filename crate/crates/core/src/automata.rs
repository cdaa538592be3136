//! Weighted automata `(α, M, β)` over a letter alphabet, their behaviors,
//! compilation of rational expressions, and evaluation of expressions and
//! automata in other star semialgebras.
//!
//! The transition matrix `M ∈ (KΣ)^{n×n}` is stored in letter-coefficient
//! form: one `n×n` scalar matrix `M_a` per letter, with `M = Σ_a M_a·a`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::matrix::{KMatrix, Matrix, MatrixError};
use crate::semiring::{KSemialgebra, SemiringError, SemiringId, SemiringValue, StarSemiring};
use crate::series::{Alphabet, SeriesError, TruncatedSeries, WordSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("no image given for letter `{0}`")]
    MissingLetter(String),
    #[error("malformed automaton: {0}")]
    Malformed(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Element of `KΣ`: a linear combination of letters without constant term.
#[derive(Debug, Clone, PartialEq)]
pub struct LetterCombo {
    pub id: SemiringId,
    pub alphabet: Arc<Alphabet>,
    /// Nonzero coefficients by letter index.
    pub coeffs: BTreeMap<usize, SemiringValue>,
}

impl LetterCombo {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl fmt::Display for LetterCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|(l, k)| format!("{k}@{}", self.alphabet.letter(*l))).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedAutomaton {
    id: SemiringId,
    alphabet: Arc<Alphabet>,
    alpha: KMatrix,
    transitions: Vec<KMatrix>,
    beta: KMatrix,
}

impl WeightedAutomaton {
    /// `alpha` is `1×n`, `beta` is `n×1`, and `transitions` holds one `n×n`
    /// matrix per alphabet letter, in alphabet order.
    pub fn new(
        alphabet: Arc<Alphabet>,
        alpha: KMatrix,
        transitions: Vec<KMatrix>,
        beta: KMatrix,
    ) -> Result<Self, AutomatonError> {
        let id = alpha.instance();
        let n = alpha.cols();
        if n == 0 || alpha.rows() != 1 {
            return Err(AutomatonError::Malformed(format!(
                "initial vector is {}x{}, expected 1xn with n ≥ 1",
                alpha.rows(),
                alpha.cols()
            )));
        }
        if beta.rows() != n || beta.cols() != 1 {
            return Err(AutomatonError::Malformed(format!(
                "final vector is {}x{}, expected {n}x1",
                beta.rows(),
                beta.cols()
            )));
        }
        if transitions.len() != alphabet.len() {
            return Err(AutomatonError::Malformed(format!(
                "{} transition matrices for {} letters",
                transitions.len(),
                alphabet.len()
            )));
        }
        for m in transitions.iter().chain(std::iter::once(&beta)) {
            if m.instance() != id {
                return Err(SemiringError::InstanceMismatch(id, m.instance()).into());
            }
        }
        for (l, m) in transitions.iter().enumerate() {
            if m.rows() != n || m.cols() != n {
                return Err(AutomatonError::Malformed(format!(
                    "transition matrix of `{}` is {}x{}, expected {n}x{n}",
                    alphabet.letter(l),
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(WeightedAutomaton { id, alphabet, alpha, transitions, beta })
    }

    pub fn instance(&self) -> SemiringId {
        self.id
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.alpha.cols()
    }

    pub fn alpha(&self) -> &KMatrix {
        &self.alpha
    }

    pub fn beta(&self) -> &KMatrix {
        &self.beta
    }

    pub fn transitions(&self) -> &[KMatrix] {
        &self.transitions
    }

    pub fn transition(&self, letter: usize) -> &KMatrix {
        &self.transitions[letter]
    }

    /// The `KΣ` entry `M[i, j] = Σ_a (M_a)[i, j]·a`.
    pub fn entry(&self, i: usize, j: usize) -> LetterCombo {
        let coeffs = self
            .transitions
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.get(i, j).is_zero())
            .map(|(l, m)| (l, m.get(i, j).clone()))
            .collect();
        LetterCombo { id: self.id, alphabet: self.alphabet.clone(), coeffs }
    }

    fn zero_matrix(&self, rows: usize, cols: usize) -> KMatrix {
        KMatrix::zeros(rows, cols, self.id.zero())
    }

    fn same_kind(&self, other: &Self) -> Result<(), AutomatonError> {
        if self.id != other.id {
            return Err(SemiringError::InstanceMismatch(self.id, other.id).into());
        }
        if self.alphabet != other.alphabet {
            return Err(AutomatonError::Malformed(format!("alphabets {} vs {}", self.alphabet, other.alphabet)));
        }
        Ok(())
    }
}

/// `|A|` up to length `bound`: `(|A|, w) = α·M_{w₁}⋯M_{w_k}·β`.
pub fn behavior(a: &WeightedAutomaton, bound: usize) -> TruncatedSeries {
    let space = WordSpace { letters: a.alphabet.len(), bound };
    let mut vectors: Vec<KMatrix> = Vec::with_capacity(space.size());
    vectors.push(a.alpha.clone());
    for idx in 1..space.size() {
        let len = space.len_of(idx);
        let code = idx - space.offset(len);
        let parent = space.offset(len - 1) + code / space.letters;
        let letter = code % space.letters;
        let next = vectors[parent].product(&a.transitions[letter]);
        vectors.push(next);
    }
    let coeffs: Vec<SemiringValue> = vectors.iter().map(|v| v.product(&a.beta).get(0, 0).clone()).collect();
    let mut i = 0;
    TruncatedSeries::from_fn(a.id, a.alphabet.clone(), bound, |_| {
        i += 1;
        coeffs[i - 1].clone()
    })
}

/// `|A| = α·M*·β` with the star taken in the semiring of matrices over
/// truncated series; agrees with [`behavior`].
pub fn behavior_via_star(a: &WeightedAutomaton, bound: usize) -> TruncatedSeries {
    let n = a.dim();
    let zero = TruncatedSeries::zero(a.id, a.alphabet.clone(), bound);
    let letters: Vec<TruncatedSeries> =
        (0..a.alphabet.len()).map(|l| TruncatedSeries::char_letter(a.id, a.alphabet.clone(), bound, l)).collect();
    let m = Matrix::from_fn(n, n, zero.clone(), |i, j| {
        a.transitions.iter().zip(&letters).fold(zero.clone(), |acc, (ma, ch)| acc.add(&ch.act(ma.get(i, j))))
    });
    let ms = m.star_matrix();
    let mut out = zero.clone();
    for i in 0..n {
        let ai = a.alpha.get(0, i);
        if ai.is_zero() {
            continue;
        }
        for j in 0..n {
            let bj = a.beta.get(j, 0);
            if bj.is_zero() {
                continue;
            }
            out = out.add(&ms.get(i, j).act(&ai.mul(bj)));
        }
    }
    out
}

/// Behaviors agree on all words of length `≤ bound`.
pub fn equivalent_up_to(a: &WeightedAutomaton, b: &WeightedAutomaton, bound: usize) -> bool {
    a.id == b.id && a.alphabet == b.alphabet && behavior(a, bound) == behavior(b, bound)
}

/// Rational expression over an alphabet with scalars from one instance.
#[derive(Debug, Clone, PartialEq)]
pub enum RationalExpr {
    Zero,
    One,
    Letter(String),
    Sum(Box<RationalExpr>, Box<RationalExpr>),
    Prod(Box<RationalExpr>, Box<RationalExpr>),
    Star(Box<RationalExpr>),
    Scale(SemiringValue, Box<RationalExpr>),
}

impl RationalExpr {
    pub fn letter(name: &str) -> Self {
        RationalExpr::Letter(name.to_string())
    }

    pub fn sum(a: RationalExpr, b: RationalExpr) -> Self {
        RationalExpr::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: RationalExpr, b: RationalExpr) -> Self {
        RationalExpr::Prod(Box::new(a), Box::new(b))
    }

    pub fn star(a: RationalExpr) -> Self {
        RationalExpr::Star(Box::new(a))
    }

    pub fn scale(k: SemiringValue, a: RationalExpr) -> Self {
        RationalExpr::Scale(k, Box::new(a))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            RationalExpr::Zero | RationalExpr::One | RationalExpr::Letter(_) => 1,
            RationalExpr::Sum(a, b) | RationalExpr::Prod(a, b) => 1 + a.size() + b.size(),
            RationalExpr::Star(a) | RationalExpr::Scale(_, a) => 1 + a.size(),
        }
    }

    /// Checks that every letter is in `alphabet` and every scalar is in `id`.
    pub fn validate(&self, id: SemiringId, alphabet: &Alphabet) -> Result<(), AutomatonError> {
        match self {
            RationalExpr::Zero | RationalExpr::One => Ok(()),
            RationalExpr::Letter(l) => {
                alphabet.index_of(l).map(|_| ()).ok_or_else(|| AutomatonError::UnknownLetter(l.clone()))
            }
            RationalExpr::Sum(a, b) | RationalExpr::Prod(a, b) => {
                a.validate(id, alphabet)?;
                b.validate(id, alphabet)
            }
            RationalExpr::Star(a) => a.validate(id, alphabet),
            RationalExpr::Scale(k, a) => {
                if k.instance() != id {
                    return Err(SemiringError::InstanceMismatch(id, k.instance()).into());
                }
                a.validate(id, alphabet)
            }
        }
    }
}

impl fmt::Display for RationalExpr {
    /// Prints in the concrete expression syntax, fully parenthesised below
    /// the top level so that parsing the output yields the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalExpr::Zero => f.write_str("0"),
            RationalExpr::One => f.write_str("e"),
            RationalExpr::Letter(l) => f.write_str(l),
            RationalExpr::Sum(a, b) => write!(f, "({a} + {b})"),
            RationalExpr::Prod(a, b) => write!(f, "({a}.{b})"),
            RationalExpr::Star(a) => write!(f, "({a})*"),
            RationalExpr::Scale(k, a) => write!(f, "{k}@({a})"),
        }
    }
}

/// Automaton with behavior `0`.
pub fn zero_automaton(id: SemiringId, alphabet: Arc<Alphabet>) -> WeightedAutomaton {
    let z = KMatrix::zeros(1, 1, id.zero());
    let ts = vec![z.clone(); alphabet.len()];
    WeightedAutomaton { id, alphabet, alpha: z.clone(), transitions: ts, beta: z }
}

/// Automaton with behavior `ε`.
pub fn one_automaton(id: SemiringId, alphabet: Arc<Alphabet>) -> WeightedAutomaton {
    let z = KMatrix::zeros(1, 1, id.zero());
    let one = KMatrix::identity(1, id.zero());
    let ts = vec![z; alphabet.len()];
    WeightedAutomaton { id, alphabet, alpha: one.clone(), transitions: ts, beta: one }
}

/// Two-state automaton with behavior exactly the letter: `α = (1, 0)`,
/// `M_a = [[0, 1], [0, 0]]`, `β = (0, 1)ᵀ`.
pub fn letter_automaton(id: SemiringId, alphabet: Arc<Alphabet>, letter: usize) -> WeightedAutomaton {
    let one = id.one();
    let mut alpha = KMatrix::zeros(1, 2, id.zero());
    alpha.set(0, 0, one.clone());
    let mut beta = KMatrix::zeros(2, 1, id.zero());
    beta.set(1, 0, one.clone());
    let ts = (0..alphabet.len())
        .map(|l| {
            let mut m = KMatrix::zeros(2, 2, id.zero());
            if l == letter {
                m.set(0, 1, one.clone());
            }
            m
        })
        .collect();
    WeightedAutomaton { id, alphabet, alpha, transitions: ts, beta }
}

/// Block direct sum; behavior `|A| + |B|`.
pub fn sum_automaton(a: &WeightedAutomaton, b: &WeightedAutomaton) -> Result<WeightedAutomaton, AutomatonError> {
    a.same_kind(b)?;
    let (n, m) = (a.dim(), b.dim());
    let alpha = KMatrix::from_blocks(&a.alpha, &b.alpha, &a.zero_matrix(0, n), &a.zero_matrix(0, m));
    let beta = KMatrix::from_blocks(&a.beta, &a.zero_matrix(n, 0), &b.beta, &a.zero_matrix(m, 0));
    let ts = a
        .transitions
        .iter()
        .zip(&b.transitions)
        .map(|(x, y)| KMatrix::from_blocks(x, &a.zero_matrix(n, m), &a.zero_matrix(m, n), y))
        .collect();
    Ok(WeightedAutomaton { id: a.id, alphabet: a.alphabet.clone(), alpha, transitions: ts, beta })
}

/// Behavior `|A|·|B|`: `α = (α_A, (α_A·β_A)·α_B)`,
/// `M_a = [[M_{A,a}, M_{A,a}·β_A·α_B], [0, M_{B,a}]]`, `β = (0, β_B)ᵀ`.
pub fn product_automaton(a: &WeightedAutomaton, b: &WeightedAutomaton) -> Result<WeightedAutomaton, AutomatonError> {
    a.same_kind(b)?;
    let (n, m) = (a.dim(), b.dim());
    let ab = a.alpha.product(&a.beta);
    let alpha = KMatrix::from_blocks(
        &a.alpha,
        &b.alpha.scale_entries(ab.get(0, 0)),
        &a.zero_matrix(0, n),
        &a.zero_matrix(0, m),
    );
    let bridge = a.beta.product(&b.alpha);
    let beta = KMatrix::from_blocks(&a.zero_matrix(n, 1), &a.zero_matrix(n, 0), &b.beta, &a.zero_matrix(m, 0));
    let ts = a
        .transitions
        .iter()
        .zip(&b.transitions)
        .map(|(x, y)| KMatrix::from_blocks(x, &x.product(&bridge), &a.zero_matrix(m, n), y))
        .collect();
    Ok(WeightedAutomaton { id: a.id, alphabet: a.alphabet.clone(), alpha, transitions: ts, beta })
}

/// Behavior `|A|*`: `α* = (α, 1)`, `M*_a = [[(βα)*·M_a, 0], [0, 0]]`,
/// `β* = ((βα)*·β, 1)ᵀ`.
pub fn star_automaton(a: &WeightedAutomaton) -> WeightedAutomaton {
    let n = a.dim();
    let loop_star = a.beta.product(&a.alpha).star_matrix();
    let one = KMatrix::identity(1, a.id.zero());
    let alpha = KMatrix::from_blocks(&a.alpha, &one, &a.zero_matrix(0, n), &a.zero_matrix(0, 1));
    let beta = KMatrix::from_blocks(&loop_star.product(&a.beta), &a.zero_matrix(n, 0), &one, &a.zero_matrix(1, 0));
    let ts = a
        .transitions
        .iter()
        .map(|m| {
            KMatrix::from_blocks(
                &loop_star.product(m),
                &a.zero_matrix(n, 1),
                &a.zero_matrix(1, n),
                &a.zero_matrix(1, 1),
            )
        })
        .collect();
    WeightedAutomaton { id: a.id, alphabet: a.alphabet.clone(), alpha, transitions: ts, beta }
}

/// Behavior `k·|A|`: `(k·α, M, β)`.
pub fn scale_automaton(k: &SemiringValue, a: &WeightedAutomaton) -> Result<WeightedAutomaton, AutomatonError> {
    if k.instance() != a.id {
        return Err(SemiringError::InstanceMismatch(a.id, k.instance()).into());
    }
    Ok(WeightedAutomaton { alpha: a.alpha.scale_entries(k), ..a.clone() })
}

/// Compiles an expression into an automaton with the same behavior.
pub fn compile(e: &RationalExpr, id: SemiringId, alphabet: Arc<Alphabet>) -> Result<WeightedAutomaton, AutomatonError> {
    e.validate(id, &alphabet)?;
    Ok(compile_checked(e, id, &alphabet))
}

fn compile_checked(e: &RationalExpr, id: SemiringId, alphabet: &Arc<Alphabet>) -> WeightedAutomaton {
    let rec = |x: &RationalExpr| compile_checked(x, id, alphabet);
    match e {
        RationalExpr::Zero => zero_automaton(id, alphabet.clone()),
        RationalExpr::One => one_automaton(id, alphabet.clone()),
        RationalExpr::Letter(l) => {
            letter_automaton(id, alphabet.clone(), alphabet.index_of(l).expect("validated letter"))
        }
        RationalExpr::Sum(a, b) => sum_automaton(&rec(a), &rec(b)).expect("same instance"),
        RationalExpr::Prod(a, b) => product_automaton(&rec(a), &rec(b)).expect("same instance"),
        RationalExpr::Star(a) => star_automaton(&rec(a)),
        RationalExpr::Scale(k, a) => scale_automaton(k, &rec(a)).expect("validated scalar"),
    }
}

/// Evaluates `e` in a star semialgebra: letters go to `h`, `0`/`e` to the
/// zero and unit of `unit`, and operations to the algebra's own.
pub fn eval<T: KSemialgebra>(e: &RationalExpr, unit: &T, h: &dyn Fn(&str) -> Option<T>) -> Result<T, AutomatonError> {
    Ok(match e {
        RationalExpr::Zero => unit.zero_like(),
        RationalExpr::One => unit.one_like(),
        RationalExpr::Letter(l) => h(l).ok_or_else(|| AutomatonError::MissingLetter(l.clone()))?,
        RationalExpr::Sum(a, b) => eval(a, unit, h)?.add(&eval(b, unit, h)?),
        RationalExpr::Prod(a, b) => eval(a, unit, h)?.mul(&eval(b, unit, h)?),
        RationalExpr::Star(a) => eval(a, unit, h)?.star(),
        RationalExpr::Scale(k, a) => eval(a, unit, h)?.act(k),
    })
}

/// Evaluation in the truncated series semialgebra with `a ↦ char(a)`.
pub fn eval_series(
    e: &RationalExpr,
    id: SemiringId,
    alphabet: Arc<Alphabet>,
    bound: usize,
) -> Result<TruncatedSeries, AutomatonError> {
    e.validate(id, &alphabet)?;
    let unit = TruncatedSeries::unit(id, alphabet.clone(), bound);
    let h = |name: &str| alphabet.index_of(name).map(|l| TruncatedSeries::char_letter(id, alphabet.clone(), bound, l));
    eval(e, &unit, &h)
}

/// Evaluation in `K^{m×m}` with the given letter images (alphabet order).
pub fn eval_matrix(e: &RationalExpr, alphabet: &Alphabet, images: &[KMatrix]) -> Result<KMatrix, AutomatonError> {
    let (id, m) = check_images(alphabet, images)?;
    e.validate(id, alphabet)?;
    let unit = KMatrix::identity(m, id.zero());
    let h = |name: &str| alphabet.index_of(name).map(|l| images[l].clone());
    eval(e, &unit, &h)
}

fn check_images(alphabet: &Alphabet, images: &[KMatrix]) -> Result<(SemiringId, usize), AutomatonError> {
    if images.len() != alphabet.len() {
        return Err(AutomatonError::MissingLetter(alphabet.letters().get(images.len()).cloned().unwrap_or_default()));
    }
    let first = &images[0];
    let (id, m) = (first.instance(), first.rows());
    for img in images {
        if img.instance() != id {
            return Err(SemiringError::InstanceMismatch(id, img.instance()).into());
        }
        if img.rows() != m || img.cols() != m {
            return Err(AutomatonError::Dimension(format!(
                "letter image is {}x{}, expected {m}x{m}",
                img.rows(),
                img.cols()
            )));
        }
    }
    Ok((id, m))
}

/// Image of `|A|` under the morphism extending `a ↦ images[a]` into
/// `K^{m×m}`: `(α ⊗ I)·(Mh)*·(β ⊗ I)`, where `Mh` is the `nm×nm` matrix whose
/// `(i, j)` block is `Σ_a (M_a)[i, j]·h(a)`.
pub fn hsharp(a: &WeightedAutomaton, images: &[KMatrix]) -> Result<KMatrix, AutomatonError> {
    let (id, m) = check_images(&a.alphabet, images)?;
    if id != a.id {
        return Err(SemiringError::InstanceMismatch(a.id, id).into());
    }
    let n = a.dim();
    let zero = id.zero();
    let mut flat = KMatrix::zeros(n * m, n * m, zero.clone());
    for (ma, img) in a.transitions.iter().zip(images) {
        for i in 0..n {
            for j in 0..n {
                let k = ma.get(i, j);
                if k.is_zero() {
                    continue;
                }
                for p in 0..m {
                    for q in 0..m {
                        let (r, c) = (i * m + p, j * m + q);
                        let v = flat.get(r, c).add(&k.mul(img.get(p, q)));
                        flat.set(r, c, v);
                    }
                }
            }
        }
    }
    let fs = flat.star_matrix();
    let mut out = KMatrix::zeros(m, m, zero);
    for i in 0..n {
        for j in 0..n {
            let w = a.alpha.get(0, i).mul(a.beta.get(j, 0));
            if w.is_zero() {
                continue;
            }
            let blk = fs.block(i * m, j * m, m, m).scale_entries(&w);
            out = out.sum(&blk);
        }
    }
    Ok(out)
}
