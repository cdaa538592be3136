//! Formal power series over a registered instance, truncated to the words of
//! length at most `L`.
//!
//! Coefficients are stored densely in length-lexicographic word order, so a
//! series over an alphabet of size `s` holds `1 + s + … + s^L` values.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::semiring::{KSemialgebra, SemiringError, SemiringId, SemiringValue, StarSemiring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("alphabet must be nonempty")]
    EmptyAlphabet,
    #[error("duplicate letter `{0}`")]
    DuplicateLetter(String),
    #[error("`{0}` is not a valid letter name")]
    InvalidLetter(String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("word of length {len} exceeds the truncation bound {bound}")]
    WordTooLong { len: usize, bound: usize },
    #[error("series mismatch: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Semiring(#[from] SemiringError),
}

/// Ordered set of distinct letter names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<String>,
}

/// Names that would collide with the expression syntax or the `eps` output.
const RESERVED: [&str; 3] = ["e", "eps", "inf"];

impl Alphabet {
    pub fn new<S: AsRef<str>>(letters: &[S]) -> Result<Self, SeriesError> {
        if letters.is_empty() {
            return Err(SeriesError::EmptyAlphabet);
        }
        let mut out: Vec<String> = Vec::with_capacity(letters.len());
        for l in letters {
            let l = l.as_ref().trim();
            let valid = l.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && l.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                && !RESERVED.contains(&l);
            if !valid {
                return Err(SeriesError::InvalidLetter(l.to_string()));
            }
            if out.iter().any(|o| o == l) {
                return Err(SeriesError::DuplicateLetter(l.to_string()));
            }
            out.push(l.to_string());
        }
        Ok(Alphabet { letters: out })
    }

    /// Parses a comma-separated letter list such as `a,b`.
    pub fn parse_list(text: &str) -> Result<Self, SeriesError> {
        let parts: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        Self::new(&parts)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn letter(&self, index: usize) -> &str {
        &self.letters[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|l| l == name)
    }

    fn single_chars(&self) -> bool {
        self.letters.iter().all(|l| l.len() == 1)
    }

    /// Renders a word: `eps` for ε, concatenated letters when every letter
    /// is one character, dot-separated otherwise.
    pub fn render(&self, word: &Word) -> String {
        if word.is_empty() {
            return "eps".to_string();
        }
        let sep = if self.single_chars() { "" } else { "." };
        word.0.iter().map(|&i| self.letters[i].as_str()).collect::<Vec<_>>().join(sep)
    }

    /// Inverse of [`Alphabet::render`].
    pub fn parse_word(&self, text: &str) -> Result<Word, SeriesError> {
        let t = text.trim();
        if t == "eps" || t.is_empty() {
            return Ok(Word::empty());
        }
        let lookup = |s: &str| self.index_of(s).ok_or_else(|| SeriesError::UnknownLetter(s.to_string()));
        if t.contains('.') {
            return t.split('.').map(lookup).collect::<Result<_, _>>().map(Word);
        }
        if self.single_chars() {
            return t.chars().map(|c| lookup(c.encode_utf8(&mut [0u8; 4]))).collect::<Result<_, _>>().map(Word);
        }
        lookup(t).map(|i| Word(vec![i]))
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.letters.join(","))
    }
}

/// Word over an alphabet, stored as letter indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }
}

/// Dense indexing of all words of length `0..=bound` in length-lex order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct WordSpace {
    pub letters: usize,
    pub bound: usize,
}

impl WordSpace {
    /// Index of the first word of length `len`.
    pub fn offset(&self, len: usize) -> usize {
        (0..len).map(|l| self.letters.pow(l as u32)).sum()
    }

    pub fn size(&self) -> usize {
        self.offset(self.bound + 1)
    }

    pub fn index(&self, word: &[usize]) -> usize {
        self.offset(word.len()) + word.iter().fold(0, |acc, &l| acc * self.letters + l)
    }

    pub fn word(&self, mut index: usize) -> Word {
        let mut len = 0;
        while index >= self.letters.pow(len as u32) {
            index -= self.letters.pow(len as u32);
            len += 1;
        }
        let mut letters = vec![0; len];
        for slot in letters.iter_mut().rev() {
            *slot = index % self.letters;
            index /= self.letters;
        }
        Word(letters)
    }

    pub fn len_of(&self, index: usize) -> usize {
        let mut len = 0;
        let mut rest = index;
        while rest >= self.letters.pow(len as u32) {
            rest -= self.letters.pow(len as u32);
            len += 1;
        }
        len
    }

    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.size()).map(|i| self.word(i))
    }
}

/// Series `r` with coefficients `(r, w)` for all `|w| ≤ bound`.
#[derive(Clone, PartialEq)]
pub struct TruncatedSeries {
    id: SemiringId,
    alphabet: Arc<Alphabet>,
    bound: usize,
    coeffs: Vec<SemiringValue>,
}

impl TruncatedSeries {
    pub fn zero(id: SemiringId, alphabet: Arc<Alphabet>, bound: usize) -> Self {
        let space = WordSpace { letters: alphabet.len(), bound };
        TruncatedSeries { id, coeffs: vec![id.zero(); space.size()], alphabet, bound }
    }

    /// The series `k·ε`.
    pub fn constant(k: SemiringValue, alphabet: Arc<Alphabet>, bound: usize) -> Self {
        let mut s = Self::zero(k.instance(), alphabet, bound);
        s.coeffs[0] = k;
        s
    }

    /// Characteristic series of the empty word (the unit).
    pub fn unit(id: SemiringId, alphabet: Arc<Alphabet>, bound: usize) -> Self {
        Self::constant(id.one(), alphabet, bound)
    }

    /// Characteristic series of a single word; zero if `|w| > bound`.
    pub fn char_word(id: SemiringId, alphabet: Arc<Alphabet>, bound: usize, word: &Word) -> Self {
        let mut s = Self::zero(id, alphabet, bound);
        if word.len() <= bound {
            let i = s.space().index(word.letters());
            s.coeffs[i] = id.one();
        }
        s
    }

    pub fn char_letter(id: SemiringId, alphabet: Arc<Alphabet>, bound: usize, letter: usize) -> Self {
        Self::char_word(id, alphabet, bound, &Word(vec![letter]))
    }

    /// Builds a series from a coefficient function over all words `|w| ≤ bound`.
    pub fn from_fn(
        id: SemiringId,
        alphabet: Arc<Alphabet>,
        bound: usize,
        mut f: impl FnMut(&Word) -> SemiringValue,
    ) -> Self {
        let space = WordSpace { letters: alphabet.len(), bound };
        let coeffs = space
            .words()
            .map(|w| {
                let v = f(&w);
                assert_eq!(v.instance(), id, "coefficient from another instance");
                v
            })
            .collect();
        TruncatedSeries { id, alphabet, bound, coeffs }
    }

    pub fn instance(&self) -> SemiringId {
        self.id
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub(crate) fn space(&self) -> WordSpace {
        WordSpace { letters: self.alphabet.len(), bound: self.bound }
    }

    /// `(r, w)`.
    pub fn coeff(&self, w: &Word) -> Result<&SemiringValue, SeriesError> {
        if w.len() > self.bound {
            return Err(SeriesError::WordTooLong { len: w.len(), bound: self.bound });
        }
        if let Some(&bad) = w.letters().iter().find(|&&l| l >= self.alphabet.len()) {
            return Err(SeriesError::UnknownLetter(format!("#{bad}")));
        }
        Ok(&self.coeffs[self.space().index(w.letters())])
    }

    pub fn coeff_str(&self, word: &str) -> Result<&SemiringValue, SeriesError> {
        self.coeff(&self.alphabet.parse_word(word)?)
    }

    pub fn constant_term(&self) -> &SemiringValue {
        &self.coeffs[0]
    }

    pub fn set(&mut self, w: &Word, v: SemiringValue) -> Result<(), SeriesError> {
        if v.instance() != self.id {
            return Err(SemiringError::InstanceMismatch(self.id, v.instance()).into());
        }
        if w.len() > self.bound {
            return Err(SeriesError::WordTooLong { len: w.len(), bound: self.bound });
        }
        let i = self.space().index(w.letters());
        self.coeffs[i] = v;
        Ok(())
    }

    /// Coefficients in length-lex order, paired with their words.
    pub fn iter(&self) -> impl Iterator<Item = (Word, &SemiringValue)> + '_ {
        let space = self.space();
        self.coeffs.iter().enumerate().map(move |(i, v)| (space.word(i), v))
    }

    pub fn coefficients(&self) -> &[SemiringValue] {
        &self.coeffs
    }

    pub fn is_proper(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    /// The series with its constant term removed.
    pub fn proper_part(&self) -> Self {
        let mut s = self.clone();
        s.coeffs[0] = self.id.zero();
        s
    }

    /// Restriction to words of length `≤ bound` (`bound` must not exceed the current one).
    pub fn restrict(&self, bound: usize) -> Self {
        assert!(bound <= self.bound);
        let space = WordSpace { letters: self.alphabet.len(), bound };
        TruncatedSeries {
            id: self.id,
            alphabet: self.alphabet.clone(),
            bound,
            coeffs: self.coeffs[..space.size()].to_vec(),
        }
    }

    fn compatible(&self, other: &Self) -> Result<(), SeriesError> {
        if self.id != other.id {
            return Err(SemiringError::InstanceMismatch(self.id, other.id).into());
        }
        if self.alphabet != other.alphabet {
            return Err(SeriesError::Mismatch(format!("alphabets {} vs {}", self.alphabet, other.alphabet)));
        }
        if self.bound != other.bound {
            return Err(SeriesError::Mismatch(format!("bounds {} vs {}", self.bound, other.bound)));
        }
        Ok(())
    }

    fn sum(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.plus(b)).collect();
        TruncatedSeries { coeffs, ..self.clone_shell() }
    }

    /// Cauchy product `(r·s, w) = Σ_{uv = w} (r, u)(s, v)`.
    fn cauchy(&self, other: &Self) -> Self {
        let space = self.space();
        let s = space.letters;
        let mut out = vec![self.id.zero(); self.coeffs.len()];
        for len in 0..=self.bound {
            let base = space.offset(len);
            let count = s.pow(len as u32);
            for code in 0..count {
                let mut acc = self.id.zero();
                for split in 0..=len {
                    let tail = s.pow((len - split) as u32);
                    let u = space.offset(split) + code / tail;
                    let v = space.offset(len - split) + code % tail;
                    let (a, b) = (&self.coeffs[u], &other.coeffs[v]);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.plus(&a.times(b));
                }
                out[base + code] = acc;
            }
        }
        TruncatedSeries { coeffs: out, ..self.clone_shell() }
    }

    fn scaled(&self, k: &SemiringValue) -> Self {
        let coeffs = self.coeffs.iter().map(|c| k.times(c)).collect();
        TruncatedSeries { coeffs, ..self.clone_shell() }
    }

    /// Star by summation over all factorizations of each word into nonempty
    /// blocks: `(r*, ε) = (r, ε)*` and
    /// `(r*, w) = Σ_{w₁…wₙ = w, wᵢ ≠ ε} k*(r, w₁)k*…(r, wₙ)k*` with `k = (r, ε)`.
    fn starred(&self) -> Self {
        let space = self.space();
        let s = space.letters;
        let ks = self.coeffs[0].starred();
        let mut out = vec![self.id.zero(); self.coeffs.len()];
        out[0] = ks.clone();
        for len in 1..=self.bound {
            let base = space.offset(len);
            for code in 0..s.pow(len as u32) {
                let mut acc = self.id.zero();
                // bit i of `cuts` set: a block boundary after position i + 1
                for cuts in 0u64..(1u64 << (len - 1)) {
                    let mut term = ks.clone();
                    let mut start = 0;
                    for end in 1..=len {
                        if end < len && cuts & (1 << (end - 1)) == 0 {
                            continue;
                        }
                        let block_len = end - start;
                        let block = (code / s.pow((len - end) as u32)) % s.pow(block_len as u32);
                        let c = &self.coeffs[space.offset(block_len) + block];
                        if c.is_zero() {
                            term = self.id.zero();
                            break;
                        }
                        term = term.times(c).times(&ks);
                        start = end;
                    }
                    if !term.is_zero() {
                        acc = acc.plus(&term);
                    }
                }
                out[base + code] = acc;
            }
        }
        TruncatedSeries { coeffs: out, ..self.clone_shell() }
    }

    fn clone_shell(&self) -> Self {
        TruncatedSeries { id: self.id, alphabet: self.alphabet.clone(), bound: self.bound, coeffs: Vec::new() }
    }

    /// Pointwise order.
    pub fn leq(&self, other: &Self) -> Result<bool, SeriesError> {
        self.compatible(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.below(b)))
    }

    /// First word (length-lex) where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<Word> {
        let space = self.space();
        self.coeffs.iter().zip(&other.coeffs).position(|(a, b)| a != b).map(|i| space.word(i))
    }

    /// `word: value` lines in length-lex order; zero coefficients are
    /// skipped unless `all` is set.
    pub fn to_lines(&self, all: bool) -> Vec<String> {
        self.iter()
            .filter(|(_, v)| all || !v.is_zero())
            .map(|(w, v)| format!("{}: {}", self.alphabet.render(&w), v))
            .collect()
    }
}

impl StarSemiring for TruncatedSeries {
    fn zero_like(&self) -> Self {
        Self::zero(self.id, self.alphabet.clone(), self.bound)
    }

    fn one_like(&self) -> Self {
        Self::unit(self.id, self.alphabet.clone(), self.bound)
    }

    fn add(&self, other: &Self) -> Self {
        self.sum(other)
    }

    fn mul(&self, other: &Self) -> Self {
        self.cauchy(other)
    }

    fn star(&self) -> Self {
        self.starred()
    }

    fn is_zero_like(&self) -> bool {
        self.coeffs.iter().all(SemiringValue::is_zero)
    }
}

impl KSemialgebra for TruncatedSeries {
    fn act(&self, k: &SemiringValue) -> Self {
        self.scaled(k)
    }
}

pub fn ser_add(r: &TruncatedSeries, s: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    r.compatible(s)?;
    Ok(r.sum(s))
}

pub fn ser_mul(r: &TruncatedSeries, s: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    r.compatible(s)?;
    Ok(r.cauchy(s))
}

pub fn ser_scale(k: &SemiringValue, r: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    if k.instance() != r.id {
        return Err(SemiringError::InstanceMismatch(k.instance(), r.id).into());
    }
    Ok(r.scaled(k))
}

pub fn ser_star(r: &TruncatedSeries) -> TruncatedSeries {
    r.starred()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstantStarReport {
    /// `(k·ε)*`
    pub lhs: TruncatedSeries,
    /// `k*·ε`
    pub rhs: TruncatedSeries,
    pub holds: bool,
}

/// Compares the series star of `k·ε` with the scalar star `k*·ε`.
pub fn check_constant_star(k: &SemiringValue, alphabet: Arc<Alphabet>, bound: usize) -> ConstantStarReport {
    let lhs = ser_star(&TruncatedSeries::constant(k.clone(), alphabet.clone(), bound));
    let rhs = TruncatedSeries::constant(k.starred(), alphabet, bound);
    let holds = lhs == rhs;
    ConstantStarReport { lhs, rhs, holds }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[{}; {}; L={}]{{", self.id, self.alphabet, self.bound)?;
        write!(f, "{}", self.to_lines(false).join(", "))?;
        write!(f, "}}")
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.to_lines(false) {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Arc<Alphabet> {
        Arc::new(Alphabet::new(&["a", "b"]).unwrap())
    }

    fn w(alpha: &Alphabet, s: &str) -> Word {
        alpha.parse_word(s).unwrap()
    }

    #[test]
    fn alphabet_validation() {
        assert_eq!(Alphabet::new::<&str>(&[]), Err(SeriesError::EmptyAlphabet));
        assert!(matches!(Alphabet::new(&["a", "a"]), Err(SeriesError::DuplicateLetter(_))));
        assert!(matches!(Alphabet::new(&["e"]), Err(SeriesError::InvalidLetter(_))));
        assert!(matches!(Alphabet::new(&["1x"]), Err(SeriesError::InvalidLetter(_))));
        let multi = Alphabet::new(&["x1", "y"]).unwrap();
        let word = multi.parse_word("x1.y.x1").unwrap();
        assert_eq!(multi.render(&word), "x1.y.x1");
    }

    #[test]
    fn word_space_indexing_is_length_lex() {
        let space = WordSpace { letters: 2, bound: 3 };
        let words: Vec<Word> = space.words().collect();
        assert_eq!(words.len(), 15);
        assert_eq!(words[0], Word::empty());
        assert_eq!(words[1], Word(vec![0]));
        assert_eq!(words[3], Word(vec![0, 0]));
        assert_eq!(words[6], Word(vec![1, 1]));
        for (i, word) in words.iter().enumerate() {
            assert_eq!(space.index(word.letters()), i);
            assert_eq!(space.len_of(i), word.len());
        }
        let unary = WordSpace { letters: 1, bound: 4 };
        assert_eq!(unary.size(), 5);
        assert_eq!(unary.word(3), Word(vec![0, 0, 0]));
    }

    #[test]
    fn coeff_examples() {
        let al = ab();
        let id = SemiringId::Boolean;
        let a = TruncatedSeries::char_letter(id, al.clone(), 3, 0);
        assert!(a.coeff(&w(&al, "a")).unwrap().is_one());
        assert!(a.coeff(&Word::empty()).unwrap().is_zero());
        let z = TruncatedSeries::zero(id, al.clone(), 3);
        assert!(z.coeff(&w(&al, "abb")).unwrap().is_zero());
        assert_eq!(z.coeff(&w(&al, "abab")), Err(SeriesError::WordTooLong { len: 4, bound: 3 }));
    }

    #[test]
    fn product_examples() {
        let al = ab();
        let b = SemiringId::Boolean;
        let sa = TruncatedSeries::char_letter(b, al.clone(), 3, 0);
        let sb = TruncatedSeries::char_letter(b, al.clone(), 3, 1);
        let p = ser_mul(&sa, &sb).unwrap();
        assert!(p.coeff_str("ab").unwrap().is_one());
        assert!(p.coeff_str("ba").unwrap().is_zero());

        let n = SemiringId::NatInf;
        let a2 = ser_scale(&n.from_u64(2), &TruncatedSeries::char_letter(n, al.clone(), 3, 0)).unwrap();
        let a3 = ser_scale(&n.from_u64(3), &TruncatedSeries::char_letter(n, al.clone(), 3, 0)).unwrap();
        assert_eq!(*ser_mul(&a2, &a3).unwrap().coeff_str("aa").unwrap(), n.from_u64(6));

        let e = TruncatedSeries::unit(n, al.clone(), 3);
        assert_eq!(*ser_add(&e, &e).unwrap().coeff_str("eps").unwrap(), n.from_u64(2));
    }

    #[test]
    fn mismatches_are_rejected() {
        let al = ab();
        let a = TruncatedSeries::unit(SemiringId::NatInf, al.clone(), 3);
        assert!(ser_add(&a, &TruncatedSeries::unit(SemiringId::Boolean, al.clone(), 3)).is_err());
        assert!(ser_mul(&a, &TruncatedSeries::unit(SemiringId::NatInf, al.clone(), 2)).is_err());
        let other = Arc::new(Alphabet::new(&["a"]).unwrap());
        assert!(ser_add(&a, &TruncatedSeries::unit(SemiringId::NatInf, other, 3)).is_err());
        assert!(ser_scale(&SemiringValue::boolean(true), &a).is_err());
    }

    #[test]
    fn star_examples() {
        let al = ab();
        let b = SemiringId::Boolean;
        let r =
            TruncatedSeries::char_letter(b, al.clone(), 4, 0).add(&TruncatedSeries::char_letter(b, al.clone(), 4, 1));
        assert!(ser_star(&r).coefficients().iter().all(SemiringValue::is_one));

        let n = SemiringId::NatInf;
        let inf = n.infinity().unwrap();
        let r = TruncatedSeries::unit(n, al.clone(), 3).add(&TruncatedSeries::char_letter(n, al.clone(), 3, 0));
        let s = ser_star(&r);
        assert_eq!(*s.coeff_str("eps").unwrap(), inf);
        assert_eq!(*s.coeff_str("a").unwrap(), inf);
        assert!(s.coeff_str("b").unwrap().is_zero());

        let r = ser_scale(&n.from_u64(2), &TruncatedSeries::char_letter(n, al.clone(), 5, 0)).unwrap();
        let s = ser_star(&r);
        assert!(s.coeff_str("eps").unwrap().is_one());
        for k in 1..=5 {
            let word = "a".repeat(k);
            assert_eq!(*s.coeff_str(&word).unwrap(), n.from_u64(1 << k));
        }
        assert!(s.coeff_str("ab").unwrap().is_zero());
    }

    #[test]
    fn constant_star_examples() {
        let al = ab();
        let n = SemiringId::NatInf;
        let r = check_constant_star(&n.from_u64(2), al.clone(), 3);
        assert!(r.holds);
        assert_eq!(*r.lhs.coeff_str("eps").unwrap(), n.infinity().unwrap());
        assert!(r.lhs.coefficients()[1..].iter().all(SemiringValue::is_zero));

        let r = check_constant_star(&n.zero(), al.clone(), 3);
        assert!(r.holds);
        assert_eq!(r.lhs, TruncatedSeries::unit(n, al.clone(), 3));

        let r = check_constant_star(&SemiringValue::boolean(true), al.clone(), 3);
        assert!(r.holds);
        assert_eq!(r.lhs, TruncatedSeries::unit(SemiringId::Boolean, al, 3));
    }

    #[test]
    fn lines_are_length_lex() {
        let al = ab();
        let n = SemiringId::NatInf;
        let r = TruncatedSeries::from_fn(n, al, 2, |w| n.from_u64(w.len() as u64));
        assert_eq!(r.to_lines(false), vec!["a: 1", "b: 1", "aa: 2", "ab: 2", "ba: 2", "bb: 2"]);
        assert_eq!(r.to_lines(true)[0], "eps: 0");
    }
}
