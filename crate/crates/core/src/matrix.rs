//! Dense matrices over a star semiring, the block star, shape predicates and
//! functorial-star checks.

use std::fmt;

use thiserror::Error;

use crate::semiring::{KSemialgebra, SemiringError, SemiringId, SemiringValue, StarSemiring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error(transparent)]
    Semiring(#[from] SemiringError),
}

/// Row-major dense matrix. `zero` is the additive identity of the entry
/// semiring; it fixes the instance even for matrices with no entries.
#[derive(Clone, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    zero: E,
    data: Vec<E>,
}

/// Matrix over one of the scalar instances.
pub type KMatrix = Matrix<SemiringValue>;

impl<E: StarSemiring> Matrix<E> {
    pub fn zeros(rows: usize, cols: usize, zero: E) -> Self {
        Matrix { rows, cols, data: vec![zero.clone(); rows * cols], zero }
    }

    pub fn identity(n: usize, zero: E) -> Self {
        let one = zero.one_like();
        let mut m = Self::zeros(n, n, zero);
        for i in 0..n {
            m.data[i * n + i] = one.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, zero: E, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols.max(1), k % cols.max(1))).collect();
        Matrix { rows, cols, zero, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn zero_entry(&self) -> &E {
        &self.zero
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<F: StarSemiring>(&self, zero: F, f: impl Fn(&E) -> F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, zero, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.zero.clone(), |i, j| self.get(j, i).clone())
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|e| e.is_zero_like())
    }

    pub fn sum(&self, other: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect();
        Matrix { rows: self.rows, cols: self.cols, zero: self.zero.clone(), data }
    }

    pub fn product(&self, other: &Self) -> Self {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols, self.zero.clone());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero_like() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero_like() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    /// Left multiplication of every entry by `k`.
    pub fn scale_entries(&self, k: &E) -> Self {
        self.map(self.zero.clone(), |e| k.mul(e))
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, self.zero.clone(), |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// `[[a, b], [c, d]]` from four conformable blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        debug_assert_eq!(a.rows, b.rows);
        debug_assert_eq!(c.rows, d.rows);
        debug_assert_eq!(a.cols, c.cols);
        debug_assert_eq!(b.cols, d.cols);
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        Self::from_fn(rows, cols, a.zero.clone(), |i, j| match (i < a.rows, j < a.cols) {
            (true, true) => a.get(i, j).clone(),
            (true, false) => b.get(i, j - a.cols).clone(),
            (false, true) => c.get(i - a.rows, j).clone(),
            (false, false) => d.get(i - a.rows, j - a.cols).clone(),
        })
    }

    /// Star of a square matrix, splitting off the last row and column.
    ///
    /// With `M = [[X, Y], [U, V]]`, `V` 1×1:
    /// `δ = (V + U·X*·Y)*`, `α = (X + Y·V*·U)*`, `β = α·Y·V*`, `γ = δ·U·X*`.
    /// `α` is obtained as `X* + X*·Y·δ·U·X*`, which is the same matrix by the
    /// sum-star and product-star identities and needs only the one recursive
    /// star `X*`; [`Matrix::star_split`] evaluates `α` literally instead.
    pub fn star_matrix(&self) -> Self {
        assert!(self.is_square(), "star of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return self.clone();
        }
        if n == 1 {
            let mut m = self.clone();
            m.data[0] = self.data[0].star();
            return m;
        }
        let k = n - 1;
        let x = self.block(0, 0, k, k);
        let y = self.block(0, k, k, 1);
        let u = self.block(k, 0, 1, k);
        let v = self.get(k, k);

        let xs = x.star_matrix();
        let xs_y = xs.product(&y);
        let u_xs = u.product(&xs);
        let u_xs_y = u_xs.product(&y);
        let delta = v.add(u_xs_y.get(0, 0)).star();
        let vs = v.star();

        // α = X* + (X*Y) δ (UX*)
        let mut alpha = xs.clone();
        for i in 0..k {
            let left = xs_y.get(i, 0).mul(&delta);
            if left.is_zero_like() {
                continue;
            }
            for j in 0..k {
                let idx = i * k + j;
                alpha.data[idx] = alpha.data[idx].add(&left.mul(u_xs.get(0, j)));
            }
        }
        let beta = alpha.product(&y).scale_right(&vs);
        let gamma = u_xs.scale_entries(&delta);
        let dm = Self::from_fn(1, 1, self.zero.clone(), |_, _| delta.clone());
        Self::from_blocks(&alpha, &beta, &gamma, &dm)
    }

    /// Star by the block formula with the leading block `X` of size
    /// `split × split`, every block star evaluated literally:
    /// `α = (X + Y·V*·U)*`, `β = α·Y·V*`, `γ = δ·U·X*`, `δ = (V + U·X*·Y)*`.
    /// Recursive calls split off the last row and column. Exponential in the
    /// dimension; meant for cross-checking small matrices.
    pub fn star_split(&self, split: usize) -> Self {
        assert!(self.is_square(), "star of a non-square matrix");
        let n = self.rows;
        if n <= 1 {
            return self.star_matrix();
        }
        assert!(split >= 1 && split < n, "split point {split} outside 1..{n}");
        let k = split;
        let rest = n - k;
        let x = self.block(0, 0, k, k);
        let y = self.block(0, k, k, rest);
        let u = self.block(k, 0, rest, k);
        let v = self.block(k, k, rest, rest);
        let lit = |m: &Self| {
            if m.rows <= 1 {
                m.star_matrix()
            } else {
                m.star_split(m.rows - 1)
            }
        };
        let xs = lit(&x);
        let vs = lit(&v);
        let alpha = lit(&x.sum(&y.product(&vs).product(&u)));
        let delta = lit(&v.sum(&u.product(&xs).product(&y)));
        let beta = alpha.product(&y).product(&vs);
        let gamma = delta.product(&u).product(&xs);
        Self::from_blocks(&alpha, &beta, &gamma, &delta)
    }

    fn scale_right(&self, k: &E) -> Self {
        self.map(self.zero.clone(), |e| e.mul(k))
    }
}

impl<E: StarSemiring> StarSemiring for Matrix<E> {
    fn zero_like(&self) -> Self {
        Self::zeros(self.rows, self.cols, self.zero.clone())
    }

    fn one_like(&self) -> Self {
        Self::identity(self.rows, self.zero.clone())
    }

    fn add(&self, other: &Self) -> Self {
        self.sum(other)
    }

    fn mul(&self, other: &Self) -> Self {
        self.product(other)
    }

    fn star(&self) -> Self {
        self.star_matrix()
    }
}

impl KSemialgebra for KMatrix {
    fn act(&self, k: &SemiringValue) -> Self {
        self.scale_entries(k)
    }
}

impl KMatrix {
    /// Matrix over `id` from rows of scalars; every row must have equal length.
    pub fn from_rows(id: SemiringId, rows: Vec<Vec<SemiringValue>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(MatrixError::Dimension(format!("ragged rows ({} vs {c})", row.len())));
            }
            for v in row {
                if v.instance() != id {
                    return Err(SemiringError::InstanceMismatch(id, v.instance()).into());
                }
                data.push(v);
            }
        }
        Ok(Matrix { rows: r, cols: c, zero: id.zero(), data })
    }

    /// Matrix over `id` from natural-number entries, see [`SemiringId::from_u64`].
    pub fn from_u64(id: SemiringId, rows: &[&[u64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&v| id.from_u64(v)).collect()).collect();
        Self::from_rows(id, rows).expect("well-formed literal")
    }

    pub fn instance(&self) -> SemiringId {
        self.zero.instance()
    }

    fn check_instance(&self, other: &Self) -> Result<(), MatrixError> {
        if self.instance() != other.instance() {
            return Err(SemiringError::InstanceMismatch(self.instance(), other.instance()).into());
        }
        Ok(())
    }

    /// Rows of the matrix as text, e.g. `[[0, 1], [inf, 0]]`.
    pub fn to_text(&self) -> String {
        format!("{self}")
    }
}

pub fn mat_add(a: &KMatrix, b: &KMatrix) -> Result<KMatrix, MatrixError> {
    a.check_instance(b)?;
    if (a.rows, a.cols) != (b.rows, b.cols) {
        return Err(MatrixError::Dimension(format!("{}x{} + {}x{}", a.rows, a.cols, b.rows, b.cols)));
    }
    Ok(a.sum(b))
}

pub fn mat_mul(a: &KMatrix, b: &KMatrix) -> Result<KMatrix, MatrixError> {
    a.check_instance(b)?;
    if a.cols != b.rows {
        return Err(MatrixError::Dimension(format!("{}x{} · {}x{}", a.rows, a.cols, b.rows, b.cols)));
    }
    Ok(a.product(b))
}

pub fn mat_scale(k: &SemiringValue, m: &KMatrix) -> Result<KMatrix, MatrixError> {
    if k.instance() != m.instance() {
        return Err(SemiringError::InstanceMismatch(k.instance(), m.instance()).into());
    }
    Ok(m.scale_entries(k))
}

pub fn mat_star(m: &KMatrix) -> Result<KMatrix, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare(m.rows, m.cols));
    }
    Ok(m.star_matrix())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixShape {
    Functional,
    DualFunctional,
    Diagonal,
    InvertibleDiagonal,
    General,
}

impl MatrixShape {
    pub fn name(self) -> &'static str {
        match self {
            MatrixShape::Functional => "functional",
            MatrixShape::DualFunctional => "dual_functional",
            MatrixShape::Diagonal => "diagonal",
            MatrixShape::InvertibleDiagonal => "invertible_diagonal",
            MatrixShape::General => "general",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            MatrixShape::Functional,
            MatrixShape::DualFunctional,
            MatrixShape::Diagonal,
            MatrixShape::InvertibleDiagonal,
            MatrixShape::General,
        ]
        .into_iter()
        .find(|k| k.name() == s || k.name().replace('_', "-") == s)
    }

    /// Whether `m` has this shape (not necessarily as its most specific one).
    pub fn admits(self, m: &KMatrix) -> bool {
        match self {
            MatrixShape::Functional => is_functional(m),
            MatrixShape::DualFunctional => is_functional(&m.transpose()),
            MatrixShape::Diagonal => is_diagonal(m),
            MatrixShape::InvertibleDiagonal => is_invertible_diagonal(m),
            MatrixShape::General => true,
        }
    }

    /// Shapes for which a simulation chain counts as strong.
    pub fn is_strong(self) -> bool {
        matches!(self, MatrixShape::Functional | MatrixShape::DualFunctional | MatrixShape::InvertibleDiagonal)
    }
}

impl fmt::Display for MatrixShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// 0-1 matrix with exactly one 1 in each row.
pub fn is_functional(m: &KMatrix) -> bool {
    (0..m.rows).all(|i| {
        let row = m.row(i);
        row.iter().all(|e| e.is_zero() || e.is_one()) && row.iter().filter(|e| e.is_one()).count() == 1
    })
}

pub fn is_diagonal(m: &KMatrix) -> bool {
    m.is_square() && (0..m.rows).all(|i| (0..m.cols).all(|j| i == j || m.get(i, j).is_zero()))
}

pub fn is_invertible_diagonal(m: &KMatrix) -> bool {
    let id = m.instance();
    is_diagonal(m) && (0..m.rows).all(|i| id.inverse(m.get(i, i)).is_some())
}

/// Most specific shape of `m`. Invertible diagonal matrices (which include
/// the identity, the only matrix that is both diagonal and functional) take
/// precedence over the functional shapes.
pub fn classify(m: &KMatrix) -> MatrixShape {
    if is_invertible_diagonal(m) {
        MatrixShape::InvertibleDiagonal
    } else if is_functional(m) {
        MatrixShape::Functional
    } else if is_functional(&m.transpose()) {
        MatrixShape::DualFunctional
    } else if is_diagonal(m) {
        MatrixShape::Diagonal
    } else {
        MatrixShape::General
    }
}

/// Reason a functorial-star outcome is expected for an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctorialPrediction {
    /// Symmetric inductive semirings have a strong functorial star.
    SymmetricInductive,
    /// Inductive semirings have a functorial star for invertible diagonal `C`.
    InvertibleDiagonal,
    /// Atomistic inductive semirings have a functorial star for (dual) functional `C`.
    AtomisticFunctional,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctorialReport {
    /// `A·C = C·B`.
    pub premise: bool,
    /// `A*·C = C·B*`, evaluated only when the premise holds.
    pub conclusion: Option<bool>,
    pub shape: MatrixShape,
    pub predicted_by: Vec<FunctorialPrediction>,
}

impl FunctorialReport {
    pub fn passes(&self) -> bool {
        self.conclusion != Some(false)
    }
}

pub fn functorial_check(a: &KMatrix, b: &KMatrix, c: &KMatrix) -> Result<FunctorialReport, MatrixError> {
    a.check_instance(b)?;
    a.check_instance(c)?;
    if !a.is_square() || !b.is_square() || c.rows != a.rows || c.cols != b.rows {
        return Err(MatrixError::Dimension(format!(
            "A {}x{}, B {}x{}, C {}x{}",
            a.rows, a.cols, b.rows, b.cols, c.rows, c.cols
        )));
    }
    let premise = a.product(c) == c.product(b);
    let conclusion = premise.then(|| a.star_matrix().product(c) == c.product(&b.star_matrix()));
    let profile = a.instance().profile();
    let shape = classify(c);
    let mut predicted_by = Vec::new();
    if profile.symmetric_inductive {
        predicted_by.push(FunctorialPrediction::SymmetricInductive);
    }
    if shape == MatrixShape::InvertibleDiagonal {
        predicted_by.push(FunctorialPrediction::InvertibleDiagonal);
    }
    if profile.atomistic && (is_functional(c) || is_functional(&c.transpose())) {
        predicted_by.push(FunctorialPrediction::AtomisticFunctional);
    }
    Ok(FunctorialReport { premise, conclusion, shape, predicted_by })
}

impl<E: StarSemiring + fmt::Display> fmt::Display for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<E: fmt::Debug> fmt::Debug for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matrix").field("rows", &self.rows).field("cols", &self.cols).field("data", &self.data).finish()
    }
}
