//! Seeded generators for values, matrices, series, automata and expressions.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automata::{RationalExpr, WeightedAutomaton};
use crate::matrix::KMatrix;
use crate::semiring::{ExtNat, SemiringId, SemiringValue};
use crate::series::{Alphabet, TruncatedSeries};

/// Independent generator for trial `index` of stream `stream` under `seed`.
pub fn trial_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((stream << 32) ^ index);
    rng
}

/// Uniform on finite carriers. On `nat-inf` and `tropical-nat-inf`: zero and
/// one often, small numbers mostly, occasionally a large number or ∞.
pub fn value<R: Rng>(id: SemiringId, rng: &mut R) -> SemiringValue {
    if let Some(carrier) = id.carrier() {
        return carrier.choose(rng).expect("nonempty carrier").clone();
    }
    let roll = rng.gen_range(0..100);
    let ext = match roll {
        0..=14 => return id.zero(),
        15..=29 => return id.one(),
        30..=84 => ExtNat::from(rng.gen_range(0..6u64)),
        85..=92 => ExtNat::from(rng.gen_range(6..100_000u64)),
        _ => ExtNat::Inf,
    };
    SemiringValue::ext(id, ext).expect("extended carrier")
}

pub fn nonzero_value<R: Rng>(id: SemiringId, rng: &mut R) -> SemiringValue {
    loop {
        let v = value(id, rng);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Zero with probability `1 - density`, otherwise [`value`].
pub fn sparse_value<R: Rng>(id: SemiringId, density: f64, rng: &mut R) -> SemiringValue {
    if rng.gen_bool(density) {
        value(id, rng)
    } else {
        id.zero()
    }
}

pub fn matrix<R: Rng>(id: SemiringId, rows: usize, cols: usize, density: f64, rng: &mut R) -> KMatrix {
    KMatrix::from_fn(rows, cols, id.zero(), |_, _| sparse_value(id, density, rng))
}

pub fn diagonal<R: Rng>(id: SemiringId, n: usize, rng: &mut R) -> KMatrix {
    let mut m = KMatrix::zeros(n, n, id.zero());
    for i in 0..n {
        m.set(i, i, value(id, rng));
    }
    m
}

/// 0-1 matrix with one 1 per row; `surjective` asks for every column to be hit
/// (requires `rows ≥ cols`).
pub fn functional<R: Rng>(id: SemiringId, rows: usize, cols: usize, surjective: bool, rng: &mut R) -> KMatrix {
    let map = function(rows, cols, surjective, rng);
    let mut m = KMatrix::zeros(rows, cols, id.zero());
    for (i, &j) in map.iter().enumerate() {
        m.set(i, j, id.one());
    }
    m
}

/// A map `[rows] → [cols]`, surjective if asked and possible.
pub fn function<R: Rng>(rows: usize, cols: usize, surjective: bool, rng: &mut R) -> Vec<usize> {
    let mut map: Vec<usize> = (0..rows).map(|_| rng.gen_range(0..cols)).collect();
    if surjective && rows >= cols {
        let mut slots: Vec<usize> = (0..rows).collect();
        slots.shuffle(rng);
        for (j, &i) in slots.iter().take(cols).enumerate() {
            map[i] = j;
        }
    }
    map
}

pub fn permutation<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn permutation_matrix(id: SemiringId, p: &[usize]) -> KMatrix {
    let mut m = KMatrix::zeros(p.len(), p.len(), id.zero());
    for (i, &j) in p.iter().enumerate() {
        m.set(i, j, id.one());
    }
    m
}

pub fn series<R: Rng>(
    id: SemiringId,
    alphabet: Arc<Alphabet>,
    bound: usize,
    density: f64,
    proper: bool,
    rng: &mut R,
) -> TruncatedSeries {
    TruncatedSeries::from_fn(id, alphabet, bound, |w| {
        if proper && w.is_empty() {
            id.zero()
        } else {
            sparse_value(id, density, rng)
        }
    })
}

pub fn automaton<R: Rng>(
    id: SemiringId,
    alphabet: Arc<Alphabet>,
    dim: usize,
    density: f64,
    rng: &mut R,
) -> WeightedAutomaton {
    let alpha = matrix(id, 1, dim, density, rng);
    let transitions = (0..alphabet.len()).map(|_| matrix(id, dim, dim, density, rng)).collect();
    let beta = matrix(id, dim, 1, density, rng);
    WeightedAutomaton::new(alphabet, alpha, transitions, beta).expect("well-formed by construction")
}

/// A random expression with exactly `size` nodes (`size ≥ 1`).
pub fn expression<R: Rng>(id: SemiringId, alphabet: &Alphabet, size: usize, rng: &mut R) -> RationalExpr {
    assert!(size >= 1);
    if size == 1 {
        return match rng.gen_range(0..10) {
            0 => RationalExpr::Zero,
            1 => RationalExpr::One,
            _ => RationalExpr::Letter(alphabet.letters().choose(rng).expect("nonempty").clone()),
        };
    }
    if size == 2 || rng.gen_bool(0.3) {
        let inner = expression(id, alphabet, size - 1, rng);
        return if rng.gen_bool(0.6) { RationalExpr::star(inner) } else { RationalExpr::scale(value(id, rng), inner) };
    }
    let left = rng.gen_range(1..size - 1);
    let a = expression(id, alphabet, left, rng);
    let b = expression(id, alphabet, size - 1 - left, rng);
    if rng.gen_bool(0.5) {
        RationalExpr::sum(a, b)
    } else {
        RationalExpr::prod(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| trial_rng(7, 1, 3).gen()).collect();
        let b: Vec<u64> = (0..4).map(|_| trial_rng(7, 1, 3).gen()).collect();
        assert_eq!(a, b);
        assert_ne!(trial_rng(7, 1, 3).gen::<u64>(), trial_rng(7, 1, 4).gen::<u64>());
        assert_ne!(trial_rng(7, 1, 3).gen::<u64>(), trial_rng(8, 1, 3).gen::<u64>());
    }

    #[test]
    fn expressions_have_requested_size() {
        let ab = Alphabet::new(&["a", "b"]).unwrap();
        let mut rng = trial_rng(1, 0, 0);
        for size in 1..=12 {
            for id in [SemiringId::Boolean, SemiringId::NatInf] {
                let e = expression(id, &ab, size, &mut rng);
                assert_eq!(e.size(), size);
                e.validate(id, &ab).unwrap();
            }
        }
    }

    #[test]
    fn functional_maps() {
        let mut rng = trial_rng(2, 0, 0);
        for _ in 0..50 {
            let m = functional(SemiringId::Boolean, 4, 3, true, &mut rng);
            assert!(crate::matrix::is_functional(&m));
            for j in 0..3 {
                assert!((0..4).any(|i| m.get(i, j).is_one()));
            }
        }
    }

    #[test]
    fn values_stay_in_carrier() {
        let mut rng = trial_rng(3, 0, 0);
        for id in [SemiringId::Boolean, SemiringId::NatInf, SemiringId::TropicalNatInf, SemiringId::Chain(3)] {
            for _ in 0..100 {
                assert_eq!(value(id, &mut rng).instance(), id);
                assert!(!nonzero_value(id, &mut rng).is_zero());
            }
        }
    }
}
