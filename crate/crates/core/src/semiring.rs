//! Exact ordered semirings with a star operation.
//!
//! Four instances are registered, each with a fixed carrier and fixed
//! operation tables:
//!
//! | tag                | carrier   | `+`          | `·`               | `0` | `1`   | `a*`                 |
//! |--------------------|-----------|--------------|-------------------|-----|-------|----------------------|
//! | `boolean`          | {0, 1}    | or           | and               | 0   | 1     | 1                    |
//! | `nat-inf`          | ℕ ∪ {∞}   | saturating + | ×, with 0·∞ = 0   | 0   | 1     | 1 if a = 0, else ∞   |
//! | `tropical-nat-inf` | ℕ ∪ {∞}   | min          | + (∞ absorbing)   | ∞   | 0     | 0                    |
//! | `chain(n)`         | 0..n−1    | max          | min               | 0   | n − 1 | n − 1                |
//!
//! Every instance is commutative, so the least pre-fixed point rule and its
//! dual coincide. The canonical order of each instance is hardcoded in
//! [`leq`] and agrees with the sum order `a ⪯ b ⇔ ∃r. a + r = b`; the
//! constructive `r` is returned by [`sum_order_witness`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemiringError {
    #[error("instance mismatch: {0} vs {1}")]
    InstanceMismatch(SemiringId, SemiringId),
    #[error("unknown semiring `{0}`")]
    UnknownSemiring(String),
    #[error("chain lattices need at least 2 levels, got {0}")]
    ChainTooSmall(u32),
    #[error("`{text}` is not an element of {id}")]
    NotInCarrier { id: SemiringId, text: String },
    #[error("sums differ: {0} vs {1}")]
    SumMismatch(SemiringValue, SemiringValue),
    #[error("empty summand list")]
    EmptySummands,
}

/// Tag selecting one of the registered instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemiringId {
    Boolean,
    NatInf,
    TropicalNatInf,
    /// Chain lattice with levels `0..n`.
    Chain(u32),
}

impl SemiringId {
    pub fn chain(levels: u32) -> Result<Self, SemiringError> {
        if levels < 2 {
            return Err(SemiringError::ChainTooSmall(levels));
        }
        Ok(SemiringId::Chain(levels))
    }

    pub fn name(&self) -> String {
        self.to_string()
    }

    pub fn zero(self) -> SemiringValue {
        let raw = match self {
            SemiringId::Boolean => Raw::Bit(false),
            SemiringId::NatInf => Raw::Ext(ExtNat::zero()),
            SemiringId::TropicalNatInf => Raw::Ext(ExtNat::Inf),
            SemiringId::Chain(_) => Raw::Level(0),
        };
        SemiringValue { id: self, raw }
    }

    pub fn one(self) -> SemiringValue {
        let raw = match self {
            SemiringId::Boolean => Raw::Bit(true),
            SemiringId::NatInf => Raw::Ext(ExtNat::one()),
            SemiringId::TropicalNatInf => Raw::Ext(ExtNat::zero()),
            SemiringId::Chain(n) => Raw::Level(n - 1),
        };
        SemiringValue { id: self, raw }
    }

    /// Scalar from its textual form: `0`/`1` for boolean, digits or `inf`
    /// for the ℕ ∪ {∞} instances, a level index for chains.
    pub fn parse_value(self, text: &str) -> Result<SemiringValue, SemiringError> {
        let bad = || SemiringError::NotInCarrier { id: self, text: text.to_string() };
        let t = text.trim();
        match self {
            SemiringId::Boolean => match t {
                "0" => Ok(SemiringValue::boolean(false)),
                "1" => Ok(SemiringValue::boolean(true)),
                _ => Err(bad()),
            },
            SemiringId::NatInf | SemiringId::TropicalNatInf => {
                let ext = ExtNat::from_str(t).map_err(|_| bad())?;
                Ok(SemiringValue { id: self, raw: Raw::Ext(ext) })
            }
            SemiringId::Chain(n) => {
                let level: u32 = t.parse().map_err(|_| bad())?;
                if !t.bytes().all(|b| b.is_ascii_digit()) || level >= n {
                    return Err(bad());
                }
                Ok(SemiringValue { id: self, raw: Raw::Level(level) })
            }
        }
    }

    /// Natural number `n` read in this instance: `n`-fold sum of `1` for
    /// boolean and chains (saturating), `n` itself for the ℕ ∪ {∞} carriers.
    pub fn from_u64(self, n: u64) -> SemiringValue {
        match self {
            SemiringId::Boolean => SemiringValue::boolean(n != 0),
            SemiringId::NatInf | SemiringId::TropicalNatInf => {
                SemiringValue { id: self, raw: Raw::Ext(ExtNat::from(n)) }
            }
            SemiringId::Chain(levels) => {
                let top = u64::from(levels - 1);
                SemiringValue { id: self, raw: Raw::Level(n.min(top) as u32) }
            }
        }
    }

    pub fn infinity(self) -> Option<SemiringValue> {
        match self {
            SemiringId::NatInf | SemiringId::TropicalNatInf => {
                Some(SemiringValue { id: self, raw: Raw::Ext(ExtNat::Inf) })
            }
            _ => None,
        }
    }

    /// All carrier elements, for finite carriers only.
    pub fn carrier(self) -> Option<Vec<SemiringValue>> {
        match self {
            SemiringId::Boolean => Some(vec![SemiringValue::boolean(false), SemiringValue::boolean(true)]),
            SemiringId::Chain(n) => Some((0..n).map(|l| SemiringValue { id: self, raw: Raw::Level(l) }).collect()),
            _ => None,
        }
    }

    pub fn profile(self) -> InstanceProfile {
        match self {
            SemiringId::Boolean => InstanceProfile {
                commutative: true,
                idempotent: true,
                sum_ordered: true,
                continuous: true,
                symmetric_inductive: true,
                locally_finite: true,
                finite_carrier: true,
                carrier_size: Some(2),
                atomistic: true,
            },
            SemiringId::NatInf => InstanceProfile {
                commutative: true,
                idempotent: false,
                sum_ordered: true,
                continuous: true,
                symmetric_inductive: true,
                locally_finite: false,
                finite_carrier: false,
                carrier_size: None,
                atomistic: true,
            },
            SemiringId::TropicalNatInf => InstanceProfile {
                commutative: true,
                idempotent: true,
                sum_ordered: true,
                continuous: true,
                symmetric_inductive: true,
                // 1 generates 1, 1·1 = 2, 2·1 = 3, ...
                locally_finite: false,
                finite_carrier: false,
                carrier_size: None,
                atomistic: false,
            },
            SemiringId::Chain(n) => InstanceProfile {
                commutative: true,
                idempotent: true,
                sum_ordered: true,
                continuous: true,
                symmetric_inductive: true,
                locally_finite: true,
                finite_carrier: true,
                carrier_size: Some(n as usize),
                atomistic: false,
            },
        }
    }

    /// Multiplicative inverse of `v`, if one exists.
    ///
    /// Finite carriers are searched exhaustively. On ℕ ∪ {∞} only `1` is a
    /// unit; on the tropical carrier only its `1` (the number 0) is, since
    /// negative numbers are not in the carrier.
    pub fn inverse(self, v: &SemiringValue) -> Option<SemiringValue> {
        if v.id != self {
            return None;
        }
        match self.carrier() {
            Some(carrier) => {
                let one = self.one();
                carrier.into_iter().find(|w| v.times(w) == one && w.times(v) == one)
            }
            None => (v.is_one()).then(|| self.one()),
        }
    }
}

impl fmt::Display for SemiringId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemiringId::Boolean => write!(f, "boolean"),
            SemiringId::NatInf => write!(f, "nat-inf"),
            SemiringId::TropicalNatInf => write!(f, "tropical-nat-inf"),
            SemiringId::Chain(n) => write!(f, "chain({n})"),
        }
    }
}

impl FromStr for SemiringId {
    type Err = SemiringError;

    /// Accepts `boolean`, `nat-inf`, `tropical-nat-inf` (or `tropical`) and
    /// `chain(n)` / `chain:n` / `chainN`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t {
            "boolean" | "bool" => return Ok(SemiringId::Boolean),
            "nat-inf" => return Ok(SemiringId::NatInf),
            "tropical-nat-inf" | "tropical" => return Ok(SemiringId::TropicalNatInf),
            _ => {}
        }
        if let Some(rest) = t.strip_prefix("chain") {
            let digits = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .or_else(|| rest.strip_prefix(':'))
                .unwrap_or(rest);
            if let Ok(n) = digits.parse::<u32>() {
                return SemiringId::chain(n);
            }
        }
        Err(SemiringError::UnknownSemiring(s.to_string()))
    }
}

/// Natural number or ∞, used by the `nat-inf` and tropical carriers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtNat {
    Fin(BigUint),
    Inf,
}

impl ExtNat {
    pub fn zero() -> Self {
        ExtNat::Fin(BigUint::zero())
    }

    pub fn one() -> Self {
        ExtNat::Fin(BigUint::one())
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, ExtNat::Inf)
    }

    pub fn finite(&self) -> Option<&BigUint> {
        match self {
            ExtNat::Fin(n) => Some(n),
            ExtNat::Inf => None,
        }
    }

    fn plus(&self, other: &Self) -> Self {
        match (self, other) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => ExtNat::Fin(a + b),
            _ => ExtNat::Inf,
        }
    }

    /// Product with `0·∞ = 0`.
    fn times_absorbing_zero(&self, other: &Self) -> Self {
        match (self, other) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => ExtNat::Fin(a * b),
            (ExtNat::Fin(a), ExtNat::Inf) | (ExtNat::Inf, ExtNat::Fin(a)) if a.is_zero() => ExtNat::zero(),
            _ => ExtNat::Inf,
        }
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => a.cmp(b),
            (ExtNat::Fin(_), ExtNat::Inf) => Ordering::Less,
            (ExtNat::Inf, ExtNat::Fin(_)) => Ordering::Greater,
            (ExtNat::Inf, ExtNat::Inf) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for ExtNat {
    fn from(n: u64) -> Self {
        ExtNat::Fin(BigUint::from(n))
    }
}

impl FromStr for ExtNat {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        if s == "inf" || s == "∞" {
            return Ok(ExtNat::Inf);
        }
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(());
        }
        BigUint::from_str(s).map(ExtNat::Fin).map_err(|_| ())
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(n) => write!(f, "{n}"),
            ExtNat::Inf => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Raw {
    Bit(bool),
    Ext(ExtNat),
    Level(u32),
}

/// One exact element of a registered instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SemiringValue {
    id: SemiringId,
    raw: Raw,
}

impl SemiringValue {
    pub fn boolean(b: bool) -> Self {
        SemiringValue { id: SemiringId::Boolean, raw: Raw::Bit(b) }
    }

    pub fn nat_inf(n: u64) -> Self {
        SemiringValue { id: SemiringId::NatInf, raw: Raw::Ext(ExtNat::from(n)) }
    }

    pub fn tropical(n: u64) -> Self {
        SemiringValue { id: SemiringId::TropicalNatInf, raw: Raw::Ext(ExtNat::from(n)) }
    }

    pub fn ext(id: SemiringId, value: ExtNat) -> Result<Self, SemiringError> {
        match id {
            SemiringId::NatInf | SemiringId::TropicalNatInf => Ok(SemiringValue { id, raw: Raw::Ext(value) }),
            _ => Err(SemiringError::NotInCarrier { id, text: value.to_string() }),
        }
    }

    pub fn level(id: SemiringId, level: u32) -> Result<Self, SemiringError> {
        match id {
            SemiringId::Chain(n) if level < n => Ok(SemiringValue { id, raw: Raw::Level(level) }),
            _ => Err(SemiringError::NotInCarrier { id, text: level.to_string() }),
        }
    }

    pub fn instance(&self) -> SemiringId {
        self.id
    }

    pub fn is_zero(&self) -> bool {
        *self == self.id.zero()
    }

    pub fn is_one(&self) -> bool {
        *self == self.id.one()
    }

    /// The ℕ ∪ {∞} payload for `nat-inf` and tropical values.
    pub fn as_ext(&self) -> Option<&ExtNat> {
        match &self.raw {
            Raw::Ext(e) => Some(e),
            _ => None,
        }
    }

    pub fn as_level(&self) -> Option<u32> {
        match self.raw {
            Raw::Level(l) => Some(l),
            Raw::Bit(b) => Some(u32::from(b)),
            Raw::Ext(_) => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.raw, Raw::Ext(ExtNat::Inf))
    }

    fn same(&self, other: &Self) -> Result<(), SemiringError> {
        if self.id == other.id {
            Ok(())
        } else {
            Err(SemiringError::InstanceMismatch(self.id, other.id))
        }
    }

    /// Unchecked sum; both operands must belong to the same instance.
    pub(crate) fn plus(&self, other: &Self) -> Self {
        debug_assert_eq!(self.id, other.id);
        let raw = match (&self.raw, &other.raw) {
            (Raw::Bit(a), Raw::Bit(b)) => Raw::Bit(*a || *b),
            (Raw::Level(a), Raw::Level(b)) => Raw::Level(*a.max(b)),
            (Raw::Ext(a), Raw::Ext(b)) => match self.id {
                SemiringId::TropicalNatInf => Raw::Ext(a.min(b).clone()),
                _ => Raw::Ext(a.plus(b)),
            },
            _ => panic!("instance mismatch: {} vs {}", self.id, other.id),
        };
        SemiringValue { id: self.id, raw }
    }

    /// Unchecked product; both operands must belong to the same instance.
    pub(crate) fn times(&self, other: &Self) -> Self {
        debug_assert_eq!(self.id, other.id);
        let raw = match (&self.raw, &other.raw) {
            (Raw::Bit(a), Raw::Bit(b)) => Raw::Bit(*a && *b),
            (Raw::Level(a), Raw::Level(b)) => Raw::Level(*a.min(b)),
            (Raw::Ext(a), Raw::Ext(b)) => match self.id {
                // numeric addition; ∞ is the semiring zero and absorbs
                SemiringId::TropicalNatInf => Raw::Ext(a.plus(b)),
                _ => Raw::Ext(a.times_absorbing_zero(b)),
            },
            _ => panic!("instance mismatch: {} vs {}", self.id, other.id),
        };
        SemiringValue { id: self.id, raw }
    }

    pub(crate) fn starred(&self) -> Self {
        match self.id {
            SemiringId::NatInf if !self.is_zero() => self.id.infinity().expect("nat-inf has ∞"),
            _ => self.id.one(),
        }
    }

    pub(crate) fn below(&self, other: &Self) -> bool {
        debug_assert_eq!(self.id, other.id);
        match (&self.raw, &other.raw) {
            (Raw::Bit(a), Raw::Bit(b)) => !*a || *b,
            (Raw::Level(a), Raw::Level(b)) => a <= b,
            (Raw::Ext(a), Raw::Ext(b)) => match self.id {
                SemiringId::TropicalNatInf => b <= a,
                _ => a <= b,
            },
            _ => panic!("instance mismatch: {} vs {}", self.id, other.id),
        }
    }
}

impl fmt::Display for SemiringValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.raw {
            Raw::Bit(b) => write!(f, "{}", u8::from(*b)),
            Raw::Ext(e) => write!(f, "{e}"),
            Raw::Level(l) => write!(f, "{l}"),
        }
    }
}

pub fn add(a: &SemiringValue, b: &SemiringValue) -> Result<SemiringValue, SemiringError> {
    a.same(b)?;
    Ok(a.plus(b))
}

pub fn mul(a: &SemiringValue, b: &SemiringValue) -> Result<SemiringValue, SemiringError> {
    a.same(b)?;
    Ok(a.times(b))
}

pub fn star(a: &SemiringValue) -> SemiringValue {
    a.starred()
}

/// The canonical order of the instance.
pub fn leq(a: &SemiringValue, b: &SemiringValue) -> Result<bool, SemiringError> {
    a.same(b)?;
    Ok(a.below(b))
}

/// Constructive witness for the sum order: some `r` with `a + r = b`, or
/// `None` when `a ⪯ b` fails.
///
/// boolean and chains: `r = b`; `nat-inf`: `r = b − a` (or ∞ when `b = ∞`);
/// tropical: `r = b`.
pub fn sum_order_witness(a: &SemiringValue, b: &SemiringValue) -> Result<Option<SemiringValue>, SemiringError> {
    a.same(b)?;
    if !a.below(b) {
        return Ok(None);
    }
    let r = match (a.id, &a.raw, &b.raw) {
        (SemiringId::NatInf, Raw::Ext(ExtNat::Fin(x)), Raw::Ext(ExtNat::Fin(y))) => {
            SemiringValue { id: a.id, raw: Raw::Ext(ExtNat::Fin(y - x)) }
        }
        _ => b.clone(),
    };
    debug_assert_eq!(a.plus(&r), *b);
    Ok(Some(r))
}

/// Element operations shared by scalars, matrices and series so the matrix
/// star and automaton evaluation can run over any of them.
pub trait StarSemiring: Clone + PartialEq + fmt::Debug {
    /// Additive identity of the structure `self` lives in.
    fn zero_like(&self) -> Self;
    /// Multiplicative identity of the structure `self` lives in.
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn star(&self) -> Self;

    fn is_zero_like(&self) -> bool {
        *self == self.zero_like()
    }
}

/// A semiring with a left action of scalars from a commutative instance.
pub trait KSemialgebra: StarSemiring {
    fn act(&self, k: &SemiringValue) -> Self;
}

impl StarSemiring for SemiringValue {
    fn zero_like(&self) -> Self {
        self.id.zero()
    }

    fn one_like(&self) -> Self {
        self.id.one()
    }

    fn add(&self, other: &Self) -> Self {
        self.plus(other)
    }

    fn mul(&self, other: &Self) -> Self {
        self.times(other)
    }

    fn star(&self) -> Self {
        self.starred()
    }

    fn is_zero_like(&self) -> bool {
        self.is_zero()
    }
}

impl KSemialgebra for SemiringValue {
    fn act(&self, k: &SemiringValue) -> Self {
        k.times(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarIdentity {
    /// `a* = a·a* + 1`
    FixedPoint,
    /// `a* = a*·a + 1`
    DualFixedPoint,
    /// `(a + b)* = (a*·b)*·a*`
    SumStar,
    /// `(a·b)* = 1 + a·(b·a)*·b`
    ProductStar,
}

impl StarIdentity {
    pub const ALL: [StarIdentity; 4] =
        [StarIdentity::FixedPoint, StarIdentity::DualFixedPoint, StarIdentity::SumStar, StarIdentity::ProductStar];

    pub fn label(self) -> &'static str {
        match self {
            StarIdentity::FixedPoint => "a* = aa* + 1",
            StarIdentity::DualFixedPoint => "a* = a*a + 1",
            StarIdentity::SumStar => "(a+b)* = (a*b)*a*",
            StarIdentity::ProductStar => "(ab)* = 1 + a(ba)*b",
        }
    }

    /// Both sides of the identity evaluated at `(a, b)` in any star semiring.
    pub fn sides<T: StarSemiring>(self, a: &T, b: &T) -> (T, T) {
        let one = a.one_like();
        match self {
            StarIdentity::FixedPoint => {
                let s = a.star();
                (s.clone(), a.mul(&s).add(&one))
            }
            StarIdentity::DualFixedPoint => {
                let s = a.star();
                (s.clone(), s.mul(a).add(&one))
            }
            StarIdentity::SumStar => {
                let sa = a.star();
                (a.add(b).star(), sa.mul(b).star().mul(&sa))
            }
            StarIdentity::ProductStar => (a.mul(b).star(), one.add(&a.mul(&b.mul(a).star()).mul(b))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck<T> {
    pub identity: StarIdentity,
    pub lhs: T,
    pub rhs: T,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport<T> {
    pub checks: Vec<IdentityCheck<T>>,
}

impl<T> AxiomReport<T> {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn get(&self, identity: StarIdentity) -> Option<&IdentityCheck<T>> {
        self.checks.iter().find(|c| c.identity == identity)
    }
}

pub fn star_axiom_report<T: StarSemiring>(a: &T, b: &T) -> AxiomReport<T> {
    let checks = StarIdentity::ALL
        .iter()
        .map(|&identity| {
            let (lhs, rhs) = identity.sides(a, b);
            let holds = lhs == rhs;
            IdentityCheck { identity, lhs, rhs, holds }
        })
        .collect();
    AxiomReport { checks }
}

/// Evaluates the fixed point identity, its dual, sum-star and product-star
/// on `(a, b)`.
pub fn check_star_axioms(a: &SemiringValue, b: &SemiringValue) -> Result<AxiomReport<SemiringValue>, SemiringError> {
    a.same(b)?;
    Ok(star_axiom_report(a, b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpfpReport {
    pub dual: bool,
    /// `a·x + b ≤ x` (or `x·a + b ≤ x`).
    pub premise: bool,
    /// `a*·b ≤ x` (or `b·a* ≤ x`).
    pub conclusion: bool,
    /// `a·x + b = x` (or the dual equation).
    pub equation_premise: bool,
    /// `a*·b ⪯ x` in the sum order.
    pub equation_conclusion: bool,
}

impl LpfpReport {
    pub fn vacuous(&self) -> bool {
        !self.premise
    }

    pub fn passes(&self) -> bool {
        (!self.premise || self.conclusion) && (!self.equation_premise || self.equation_conclusion)
    }
}

/// Least pre-fixed point rule (or its dual) at `(a, b, x)`, together with its
/// equational variant `a·x + b = x ⇒ a*·b ⪯ x`.
pub fn check_lpfp(
    a: &SemiringValue,
    b: &SemiringValue,
    x: &SemiringValue,
    dual: bool,
) -> Result<LpfpReport, SemiringError> {
    a.same(b)?;
    a.same(x)?;
    let lhs = if dual { x.times(a).plus(b) } else { a.times(x).plus(b) };
    let bound = if dual { b.times(&a.starred()) } else { a.starred().times(b) };
    let equation_premise = lhs == *x;
    Ok(LpfpReport {
        dual,
        premise: lhs.below(x),
        conclusion: bound.below(x),
        equation_premise,
        equation_conclusion: sum_order_witness(&bound, x)?.is_some(),
    })
}

/// Common refinement of two equal sums: `a_i = Σ_{t ∈ a_blocks[i]} atoms[t]`
/// and `b_j = Σ_{t ∈ b_blocks[j]} atoms[t]` (indices are 0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct AtomisticWitness {
    pub atoms: Vec<SemiringValue>,
    pub a_blocks: Vec<Vec<usize>>,
    pub b_blocks: Vec<Vec<usize>>,
}

impl AtomisticWitness {
    pub fn verify(&self, a: &[SemiringValue], b: &[SemiringValue]) -> bool {
        fn covers(blocks: &[Vec<usize>], k: usize) -> bool {
            let mut seen = vec![false; k];
            for &t in blocks.iter().flatten() {
                if t >= k || seen[t] {
                    return false;
                }
                seen[t] = true;
            }
            seen.into_iter().all(|s| s)
        }
        let k = self.atoms.len();
        let Some(zero) = a.first().map(|v| v.id.zero()) else {
            return false;
        };
        let block_sum = |block: &Vec<usize>| block.iter().fold(zero.clone(), |acc, &t| acc.plus(&self.atoms[t]));
        self.a_blocks.len() == a.len()
            && self.b_blocks.len() == b.len()
            && covers(&self.a_blocks, k)
            && covers(&self.b_blocks, k)
            && self.a_blocks.iter().zip(a).all(|(blk, v)| block_sum(blk) == *v)
            && self.b_blocks.iter().zip(b).all(|(blk, v)| block_sum(blk) == *v)
    }
}

/// Bounded search for a common refinement of `Σ a_i = Σ b_j`.
///
/// Candidates for the atoms are the nonzero carrier elements on finite
/// carriers; on ℕ ∪ {∞} carriers they are the naturals up to the largest
/// finite summand plus ∞. `Ok(None)` means no witness with at most `max_k`
/// atoms exists in that pool, which does not disprove atomicity.
pub fn atomistic_witness(
    a: &[SemiringValue],
    b: &[SemiringValue],
    max_k: usize,
) -> Result<Option<AtomisticWitness>, SemiringError> {
    let first = a.first().ok_or(SemiringError::EmptySummands)?;
    if b.is_empty() {
        return Err(SemiringError::EmptySummands);
    }
    let id = first.id;
    for v in a.iter().chain(b) {
        first.same(v)?;
    }
    let zero = id.zero();
    let sum_a = a.iter().fold(zero.clone(), |acc, v| acc.plus(v));
    let sum_b = b.iter().fold(zero.clone(), |acc, v| acc.plus(v));
    if sum_a != sum_b {
        return Err(SemiringError::SumMismatch(sum_a, sum_b));
    }

    let pool: Vec<SemiringValue> = match id.carrier() {
        Some(c) => c.into_iter().filter(|v| !v.is_zero()).collect(),
        None => {
            let max_fin = a
                .iter()
                .chain(b)
                .filter_map(|v| v.as_ext().and_then(ExtNat::finite).cloned())
                .max()
                .unwrap_or_default();
            let mut pool = Vec::new();
            let mut n = BigUint::zero();
            while n <= max_fin {
                pool.push(SemiringValue { id, raw: Raw::Ext(ExtNat::Fin(n.clone())) });
                n += 1u32;
            }
            pool.push(id.infinity().expect("ℕ ∪ {∞} carrier"));
            pool.retain(|v| !v.is_zero());
            pool
        }
    };

    // An atom is a (row block, column block, value) triple; atoms are chosen
    // in nondecreasing order so each multiset is visited once.
    let pool_len = pool.len();
    let choices: Vec<(usize, usize, usize)> =
        (0..a.len()).flat_map(|i| (0..b.len()).flat_map(move |j| (0..pool_len).map(move |p| (i, j, p)))).collect();

    struct Search<'s> {
        a: &'s [SemiringValue],
        b: &'s [SemiringValue],
        pool: &'s [SemiringValue],
        choices: &'s [(usize, usize, usize)],
        zero: SemiringValue,
    }

    impl Search<'_> {
        fn run(&self, k: usize, start: usize, picked: &mut Vec<usize>) -> Option<Vec<usize>> {
            if picked.len() == k {
                return self.accepts(picked).then(|| picked.clone());
            }
            for c in start..self.choices.len() {
                picked.push(c);
                if let Some(found) = self.run(k, c, picked) {
                    return Some(found);
                }
                picked.pop();
            }
            None
        }

        fn accepts(&self, picked: &[usize]) -> bool {
            let mut sa = vec![self.zero.clone(); self.a.len()];
            let mut sb = vec![self.zero.clone(); self.b.len()];
            for &c in picked {
                let (i, j, p) = self.choices[c];
                sa[i] = sa[i].plus(&self.pool[p]);
                sb[j] = sb[j].plus(&self.pool[p]);
            }
            sa == self.a && sb == self.b
        }
    }

    let search = Search { a, b, pool: &pool, choices: &choices, zero };
    for k in 1..=max_k {
        if let Some(picked) = search.run(k, 0, &mut Vec::with_capacity(k)) {
            let mut atoms = Vec::with_capacity(k);
            let mut a_blocks = vec![Vec::new(); a.len()];
            let mut b_blocks = vec![Vec::new(); b.len()];
            for (t, &c) in picked.iter().enumerate() {
                let (i, j, p) = choices[c];
                atoms.push(pool[p].clone());
                a_blocks[i].push(t);
                b_blocks[j].push(t);
            }
            return Ok(Some(AtomisticWitness { atoms, a_blocks, b_blocks }));
        }
    }
    Ok(None)
}

/// Flags recording which structural hypotheses an instance satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceProfile {
    pub commutative: bool,
    pub idempotent: bool,
    pub sum_ordered: bool,
    pub continuous: bool,
    pub symmetric_inductive: bool,
    pub locally_finite: bool,
    pub finite_carrier: bool,
    pub carrier_size: Option<usize>,
    /// Known to admit common refinements of equal finite sums.
    pub atomistic: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> SemiringValue {
        SemiringValue::nat_inf(v)
    }
    fn inf() -> SemiringValue {
        SemiringId::NatInf.infinity().unwrap()
    }
    fn t(v: u64) -> SemiringValue {
        SemiringValue::tropical(v)
    }
    fn c3(l: u32) -> SemiringValue {
        SemiringValue::level(SemiringId::Chain(3), l).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(add(&n(2), &n(3)).unwrap(), n(5));
        assert_eq!(add(&n(7), &inf()).unwrap(), inf());
        assert_eq!(add(&t(4), &t(1)).unwrap(), t(1));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(mul(&n(0), &inf()).unwrap(), n(0));
        assert_eq!(mul(&inf(), &n(0)).unwrap(), n(0));
        assert_eq!(mul(&n(3), &inf()).unwrap(), inf());
        assert_eq!(mul(&t(2), &t(3)).unwrap(), t(5));
        assert_eq!(mul(&c3(1), &c3(2)).unwrap(), c3(1));
    }

    #[test]
    fn star_examples() {
        assert_eq!(star(&n(0)), n(1));
        assert_eq!(star(&t(3)), t(0));
        assert_eq!(star(&c3(0)), c3(2));
        assert_eq!(star(&SemiringValue::boolean(false)), SemiringValue::boolean(true));
    }

    #[test]
    fn nat_inf_star_of_two_is_limit_of_partial_sums() {
        // Σ_{i≤k} 2^i strictly increases, so the supremum is ∞.
        let mut partial = n(0);
        let mut power = n(1);
        let mut last = partial.clone();
        for _ in 0..40 {
            partial = partial.plus(&power);
            power = power.times(&n(2));
            assert!(last.below(&partial) && last != partial);
            last = partial.clone();
        }
        assert_eq!(star(&n(2)), inf());
    }

    #[test]
    fn leq_examples() {
        assert!(leq(&n(3), &inf()).unwrap());
        assert!(leq(&t(5), &t(2)).unwrap());
        assert!(!leq(&n(4), &n(3)).unwrap());
    }

    #[test]
    fn mismatched_instances_are_rejected() {
        let err = add(&n(1), &t(1)).unwrap_err();
        assert_eq!(err, SemiringError::InstanceMismatch(SemiringId::NatInf, SemiringId::TropicalNatInf));
        assert!(mul(&SemiringValue::boolean(true), &c3(1)).is_err());
        assert!(leq(&n(1), &c3(1)).is_err());
        assert!(check_star_axioms(&n(1), &t(1)).is_err());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for (id, text) in [
            (SemiringId::Boolean, "1"),
            (SemiringId::NatInf, "inf"),
            (SemiringId::NatInf, "123456789012345678901234567890"),
            (SemiringId::TropicalNatInf, "7"),
            (SemiringId::Chain(4), "3"),
        ] {
            assert_eq!(id.parse_value(text).unwrap().to_string(), text);
        }
        assert!(SemiringId::Boolean.parse_value("2").is_err());
        assert!(SemiringId::Chain(3).parse_value("3").is_err());
        assert!(SemiringId::NatInf.parse_value("-1").is_err());
        assert_eq!("chain(5)".parse::<SemiringId>().unwrap(), SemiringId::Chain(5));
        assert_eq!("chain:5".parse::<SemiringId>().unwrap(), SemiringId::Chain(5));
        assert!("chain(1)".parse::<SemiringId>().is_err());
        assert!("reals".parse::<SemiringId>().is_err());
    }

    #[test]
    fn profiles_match_declared_flags() {
        let b = SemiringId::Boolean.profile();
        assert!(b.commutative && b.idempotent && b.sum_ordered && b.continuous);
        assert!(b.symmetric_inductive && b.locally_finite && b.finite_carrier);
        assert_eq!(b.carrier_size, Some(2));

        let n = SemiringId::NatInf.profile();
        assert!(n.commutative && n.sum_ordered && n.continuous && n.symmetric_inductive);
        assert!(!n.idempotent && !n.locally_finite && !n.finite_carrier);

        let t = SemiringId::TropicalNatInf.profile();
        assert!(t.commutative && t.idempotent && t.sum_ordered && t.continuous);
        assert!(t.symmetric_inductive && !t.finite_carrier);

        let c = SemiringId::Chain(4).profile();
        assert!(c.commutative && c.idempotent && c.sum_ordered && c.continuous);
        assert!(c.symmetric_inductive && c.locally_finite && c.finite_carrier);
        assert_eq!(c.carrier_size, Some(4));
    }

    #[test]
    fn star_axiom_examples() {
        let r = check_star_axioms(&n(1), &n(0)).unwrap();
        let sum = r.get(StarIdentity::SumStar).unwrap();
        assert_eq!((sum.lhs.clone(), sum.rhs.clone()), (inf(), inf()));
        assert!(r.all_pass());

        let one = SemiringValue::boolean(true);
        let r = check_star_axioms(&one, &one).unwrap();
        let prod = r.get(StarIdentity::ProductStar).unwrap();
        assert_eq!((prod.lhs.clone(), prod.rhs.clone()), (one.clone(), one));

        assert!(check_star_axioms(&c3(1), &c3(2)).unwrap().all_pass());
    }

    #[test]
    fn lpfp_examples() {
        let r = check_lpfp(&n(0), &n(5), &n(5), false).unwrap();
        assert!(r.premise && r.conclusion && r.passes() && !r.vacuous());

        let r = check_lpfp(&n(1), &n(1), &inf(), false).unwrap();
        assert!(r.premise && r.conclusion && r.equation_premise && r.equation_conclusion);

        let r = check_lpfp(&t(2), &t(7), &t(0), false).unwrap();
        assert!(r.premise && r.conclusion && r.passes());

        // 3·1 + 0 = 3 is not ≤ 1
        let r = check_lpfp(&n(3), &n(0), &n(1), true).unwrap();
        assert!(r.vacuous() && r.passes());
    }

    #[test]
    fn lpfp_exhaustive_on_finite_carriers() {
        for id in [SemiringId::Boolean, SemiringId::Chain(3), SemiringId::Chain(4)] {
            let carrier = id.carrier().unwrap();
            for a in &carrier {
                for b in &carrier {
                    for x in &carrier {
                        for dual in [false, true] {
                            assert!(check_lpfp(a, b, x, dual).unwrap().passes());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn sum_order_coincides_with_canonical_order_on_finite_carriers() {
        for id in [SemiringId::Boolean, SemiringId::Chain(2), SemiringId::Chain(5)] {
            let carrier = id.carrier().unwrap();
            for a in &carrier {
                for b in &carrier {
                    let exists = carrier.iter().any(|r| a.plus(r) == *b);
                    assert_eq!(leq(a, b).unwrap(), exists, "{id}: {a} vs {b}");
                    assert_eq!(sum_order_witness(a, b).unwrap().is_some(), exists);
                }
            }
        }
    }

    #[test]
    fn sum_order_coincides_with_canonical_order_on_ext_carriers() {
        for id in [SemiringId::NatInf, SemiringId::TropicalNatInf] {
            let mut values: Vec<_> = (0..8).map(|k| id.from_u64(k)).collect();
            values.push(id.infinity().unwrap());
            let mut candidates: Vec<_> = (0..20).map(|k| id.from_u64(k)).collect();
            candidates.push(id.infinity().unwrap());
            for a in &values {
                for b in &values {
                    let witness = sum_order_witness(a, b).unwrap();
                    if let Some(r) = &witness {
                        assert_eq!(a.plus(r), *b);
                    }
                    // every r that could work lies in the candidate range
                    let exists = candidates.iter().any(|r| a.plus(r) == *b);
                    assert_eq!(leq(a, b).unwrap(), exists, "{id}: {a} vs {b}");
                    assert_eq!(witness.is_some(), exists);
                }
            }
        }
    }

    #[test]
    fn inverses() {
        assert_eq!(SemiringId::Boolean.inverse(&SemiringValue::boolean(true)), Some(SemiringValue::boolean(true)));
        assert_eq!(SemiringId::NatInf.inverse(&n(2)), None);
        assert_eq!(SemiringId::NatInf.inverse(&n(1)), Some(n(1)));
        assert_eq!(SemiringId::TropicalNatInf.inverse(&t(0)), Some(t(0)));
        assert_eq!(SemiringId::TropicalNatInf.inverse(&t(3)), None);
        assert_eq!(SemiringId::Chain(3).inverse(&c3(2)), Some(c3(2)));
        assert_eq!(SemiringId::Chain(3).inverse(&c3(1)), None);
    }

    #[test]
    fn atomistic_boolean_example() {
        let one = SemiringValue::boolean(true);
        let w = atomistic_witness(&[one.clone(), one.clone()], std::slice::from_ref(&one), 4).unwrap().unwrap();
        assert_eq!(w.atoms, vec![one.clone(), one.clone()]);
        assert_eq!(w.a_blocks, vec![vec![0], vec![1]]);
        assert_eq!(w.b_blocks, vec![vec![0, 1]]);
        assert!(w.verify(&[one.clone(), one.clone()], &[one]));
    }

    #[test]
    fn atomistic_nat_inf_example() {
        let a = [n(2), n(3)];
        let b = [n(4), n(1)];
        let w = atomistic_witness(&a, &b, 4).unwrap().unwrap();
        assert_eq!(w.atoms.len(), 3);
        assert!(w.verify(&a, &b));
        // the refinement c = (2, 2, 1), I = {1}, {2, 3}, J = {1, 2}, {3}
        let stated = AtomisticWitness {
            atoms: vec![n(2), n(2), n(1)],
            a_blocks: vec![vec![0], vec![1, 2]],
            b_blocks: vec![vec![0, 1], vec![2]],
        };
        assert!(stated.verify(&a, &b));
    }

    #[test]
    fn atomistic_trivial_and_errors() {
        for id in [SemiringId::Boolean, SemiringId::NatInf, SemiringId::TropicalNatInf, SemiringId::Chain(3)] {
            let one = id.one();
            let w = atomistic_witness(std::slice::from_ref(&one), std::slice::from_ref(&one), 2).unwrap().unwrap();
            assert_eq!(w.atoms, vec![one]);
            assert_eq!(w.a_blocks, vec![vec![0]]);
        }
        assert!(matches!(atomistic_witness(&[n(2)], &[n(3)], 3), Err(SemiringError::SumMismatch(_, _))));
        assert!(matches!(atomistic_witness(&[], &[n(3)], 3), Err(SemiringError::EmptySummands)));
        // 5 = 5 cannot be refined into two or fewer atoms across three blocks
        assert_eq!(atomistic_witness(&[n(5)], &[n(1), n(2), n(2)], 2).unwrap(), None);
    }
}
