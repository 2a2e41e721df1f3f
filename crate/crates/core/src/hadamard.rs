//! Parallel Walsh-Hadamard code over lazily evaluable word oracles.
//!
//! A word is a map from `F^arity` to `F^dim`. The honest encoding of a
//! message matrix `A` (one column per message symbol) is `b -> A b`; index
//! spaces are exponential, so words are oracles and never materialized by
//! default. Explicit words are an opt-in for micro domains, and corruptions
//! are either sparse overlays or seeded replacements so corrupted oracles
//! stay deterministic.

use crate::csp::Rational;
use crate::gf::{FieldMatrix, FieldSpec, FieldVector, GfError};
use crate::rng::Prf;
use crate::stats::Estimate;
use rand::Rng;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("index has length {got}, oracle arity is {want}")]
    IndexArity { got: usize, want: usize },
    #[error("domain of 2^{0} indices exceeds the cap of 2^{1}")]
    DomainExceedsCap(u32, u32),
    #[error("message space of 2^{0} matrices exceeds the cap of 2^{1}")]
    MessageSpaceExceedsCap(u32, u32),
    #[error("explicit oracle needs {want} values, got {got}")]
    ValueCount { got: usize, want: usize },
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Shape of a word: indices in `field^arity`, values in `field^dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleSpec {
    pub field: FieldSpec,
    pub arity: usize,
    pub dim: usize,
}

impl OracleSpec {
    pub fn domain_log2(&self) -> u32 {
        self.field.t() as u32 * self.arity as u32
    }
}

/// A deterministic, lazily evaluable word.
#[derive(Clone, Debug)]
pub enum WordOracle {
    /// The codeword of `message` (rows = dim, cols = arity).
    Honest { message: FieldMatrix },
    /// Fully materialized values in canonical index order (micro only).
    Explicit { spec: OracleSpec, values: Vec<FieldVector> },
    /// `base` with finitely many entries replaced.
    Overlay {
        base: Box<WordOracle>,
        patches: BTreeMap<FieldVector, FieldVector>,
    },
    /// `base` with each entry independently replaced by a pseudo-random
    /// value with probability `rate`, keyed by `seed`.
    Seeded {
        base: Box<WordOracle>,
        rate: f64,
        seed: u64,
    },
}

impl WordOracle {
    pub fn honest(message: FieldMatrix) -> Self {
        WordOracle::Honest { message }
    }

    /// Cap on materialized words: index spaces beyond this stay oracles.
    pub const EXPLICIT_CAP_LOG2: u32 = 16;

    pub fn explicit(spec: OracleSpec, values: Vec<FieldVector>) -> Result<Self, OracleError> {
        if spec.domain_log2() > Self::EXPLICIT_CAP_LOG2 {
            return Err(OracleError::DomainExceedsCap(
                spec.domain_log2(),
                Self::EXPLICIT_CAP_LOG2,
            ));
        }
        let want = 1usize << spec.domain_log2();
        if values.len() != want {
            return Err(OracleError::ValueCount { got: values.len(), want });
        }
        Ok(WordOracle::Explicit { spec, values })
    }

    pub fn overlay(base: WordOracle, patches: BTreeMap<FieldVector, FieldVector>) -> Self {
        WordOracle::Overlay { base: Box::new(base), patches }
    }

    pub fn seeded(base: WordOracle, rate: f64, seed: u64) -> Self {
        WordOracle::Seeded { base: Box::new(base), rate, seed }
    }

    pub fn spec(&self) -> OracleSpec {
        match self {
            WordOracle::Honest { message } => OracleSpec {
                field: message.spec(),
                arity: message.cols(),
                dim: message.rows(),
            },
            WordOracle::Explicit { spec, .. } => *spec,
            WordOracle::Overlay { base, .. } | WordOracle::Seeded { base, .. } => base.spec(),
        }
    }

    /// Evaluate the word at one index. Repeated evaluation at the same
    /// index always returns the same value.
    pub fn eval(&self, index: &FieldVector) -> Result<FieldVector, OracleError> {
        let spec = self.spec();
        if index.len() != spec.arity || index.spec() != spec.field {
            return Err(OracleError::IndexArity { got: index.len(), want: spec.arity });
        }
        Ok(match self {
            WordOracle::Honest { message } => message.mul_vector(index)?,
            WordOracle::Explicit { values, .. } => values[index.to_index() as usize].clone(),
            WordOracle::Overlay { base, patches } => match patches.get(index) {
                Some(v) => v.clone(),
                None => base.eval(index)?,
            },
            WordOracle::Seeded { base, rate, seed } => {
                let prf = Prf::new(*seed);
                let digest = index.digest();
                let h = prf.word(1, digest);
                if (h as f64 / u64::MAX as f64) < *rate {
                    let vprf = prf.derive(2);
                    let mut out = FieldVector::zero(spec.field, spec.dim);
                    for i in 0..spec.dim {
                        let w = vprf.word(digest, i as u64);
                        out.set(i, spec.field.el((w % spec.field.order() as u64) as u8));
                    }
                    out
                } else {
                    base.eval(index)?
                }
            }
        })
    }
}

/// One point of the parallel Walsh-Hadamard codeword: `A b`.
pub fn pwh_encode_point(message: &FieldMatrix, b: &FieldVector) -> Result<FieldVector, GfError> {
    message.mul_vector(b)
}

/// Three-query BLR linearity check at `(a, b)`.
pub fn blr_test(w: &WordOracle, a: &FieldVector, b: &FieldVector) -> Result<bool, OracleError> {
    let sum = a.checked_add(b).map_err(OracleError::Field)?;
    let lhs = w.eval(a)?.checked_add(&w.eval(b)?).map_err(OracleError::Field)?;
    Ok(lhs == w.eval(&sum)?)
}

pub const DEFAULT_DOMAIN_CAP_LOG2: u32 = 24;

/// Exact BLR pass rate over all ordered pairs `(a, b)`.
pub fn blr_pass_rate(w: &WordOracle, cap_log2: u32) -> Result<Rational, OracleError> {
    let spec = w.spec();
    let pair_bits = 2 * spec.domain_log2();
    if pair_bits > cap_log2 {
        return Err(OracleError::DomainExceedsCap(pair_bits, cap_log2));
    }
    let mut pass = 0u64;
    let mut total = 0u64;
    for a in FieldVector::iter_all(spec.field, spec.arity) {
        for b in FieldVector::iter_all(spec.field, spec.arity) {
            total += 1;
            if blr_test(w, &a, &b)? {
                pass += 1;
            }
        }
    }
    Ok(Rational::new(pass, total))
}

/// Seeded sampled BLR pass rate for domains too large to enumerate.
pub fn blr_pass_rate_sampled(w: &WordOracle, trials: u64, seed: u64) -> Result<Estimate, OracleError> {
    let spec = w.spec();
    let mut rng = crate::rng::sampling_rng(seed, 0);
    let mut pass = 0u64;
    for _ in 0..trials {
        let a = random_index(&mut rng, spec);
        let b = random_index(&mut rng, spec);
        if blr_test(w, &a, &b)? {
            pass += 1;
        }
    }
    Ok(Estimate::new(pass, trials, seed))
}

pub fn random_index(rng: &mut impl Rng, spec: OracleSpec) -> FieldVector {
    let mut v = FieldVector::zero(spec.field, spec.arity);
    for i in 0..spec.arity {
        v.set(i, spec.field.el(rng.gen_range(0..spec.field.order())));
    }
    v
}

/// Two-query local correction: `w[x + a] - w[a]`, which equals the
/// codeword value at `x` whenever both probes are uncorrupted.
pub fn local_correct(
    w: &WordOracle,
    x: &FieldVector,
    a: &FieldVector,
) -> Result<FieldVector, OracleError> {
    let shifted = x.checked_add(a).map_err(OracleError::Field)?;
    // subtraction is addition in characteristic two
    w.eval(&shifted)?
        .checked_add(&w.eval(a)?)
        .map_err(OracleError::Field)
}

/// Exact relative distance from the code, with the lexicographically first
/// nearest message. Enumerates the whole domain and the whole message
/// space, so it is strictly a micro-instance oracle.
pub fn distance_to_code(
    w: &WordOracle,
    cap_log2: u32,
) -> Result<(Rational, FieldMatrix), OracleError> {
    let spec = w.spec();
    let domain_bits = spec.domain_log2();
    let message_bits = spec.field.t() as u32 * (spec.dim * spec.arity) as u32;
    if domain_bits > cap_log2 {
        return Err(OracleError::DomainExceedsCap(domain_bits, cap_log2));
    }
    if message_bits > cap_log2 {
        return Err(OracleError::MessageSpaceExceedsCap(message_bits, cap_log2));
    }
    let points: Vec<(FieldVector, FieldVector)> = FieldVector::iter_all(spec.field, spec.arity)
        .map(|idx| {
            let v = w.eval(&idx)?;
            Ok((idx, v))
        })
        .collect::<Result<_, OracleError>>()?;
    let total = points.len() as u64;
    let mut best: Option<(u64, FieldMatrix)> = None;
    for message in FieldMatrix::iter_all(spec.field, spec.dim, spec.arity) {
        let mut differ = 0u64;
        for (idx, val) in &points {
            if &message.mul_vector(idx)? != val {
                differ += 1;
            }
        }
        // strict improvement keeps the lexicographically first on ties
        if best.as_ref().is_none_or(|(d, _)| differ < *d) {
            best = Some((differ, message));
        }
    }
    let (differ, message) = best.expect("message space is nonempty");
    Ok((Rational::new(differ, total), message))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{GF2, GF8};
    use proptest::prelude::*;

    fn single_flip_word() -> WordOracle {
        // PWH((1,0)) over GF(2)^2, d = 1, with the entry at (1,1) flipped
        let message = FieldMatrix::from_rows(GF2, &[vec![1, 0]]).unwrap();
        let mut patches = BTreeMap::new();
        patches.insert(
            FieldVector::from_bits(GF2, vec![1, 1]).unwrap(),
            FieldVector::from_bits(GF2, vec![0]).unwrap(),
        );
        WordOracle::overlay(WordOracle::honest(message), patches)
    }

    #[test]
    fn encode_point_examples() {
        let id = FieldMatrix::identity(GF2, 2);
        let b = FieldVector::from_bits(GF2, vec![1, 1]).unwrap();
        assert_eq!(pwh_encode_point(&id, &b).unwrap(), b);

        let zero = FieldMatrix::zero(GF8, 2, 3);
        let v = FieldVector::from_bits(GF8, vec![3, 1, 7]).unwrap();
        assert!(pwh_encode_point(&zero, &v).unwrap().is_zero());

        let m = FieldMatrix::from_rows(GF8, &[vec![2, 3]]).unwrap();
        let v = FieldVector::from_bits(GF8, vec![4, 1]).unwrap();
        assert!(pwh_encode_point(&m, &v).unwrap().is_zero());
    }

    #[test]
    fn blr_on_honest_and_corrupted() {
        let honest = WordOracle::honest(FieldMatrix::from_rows(GF2, &[vec![1, 0]]).unwrap());
        for a in FieldVector::iter_all(GF2, 2) {
            for b in FieldVector::iter_all(GF2, 2) {
                assert!(blr_test(&honest, &a, &b).unwrap());
            }
        }
        assert_eq!(blr_pass_rate(&honest, 24).unwrap(), Rational::from_integer(1));

        let flipped = single_flip_word();
        let a = FieldVector::from_bits(GF2, vec![1, 0]).unwrap();
        let b = FieldVector::from_bits(GF2, vec![0, 1]).unwrap();
        assert!(!blr_test(&flipped, &a, &b).unwrap());
        assert_eq!(blr_pass_rate(&flipped, 24).unwrap(), Rational::new(10, 16));

        // the all-zero word is a codeword
        let zero = WordOracle::honest(FieldMatrix::zero(GF2, 1, 2));
        assert_eq!(blr_pass_rate(&zero, 24).unwrap(), Rational::from_integer(1));
    }

    #[test]
    fn blr_at_origin_reduces_to_zero_check() {
        // any word: (0,0) accepts iff w[0] = 0
        let all_ones = WordOracle::explicit(
            OracleSpec { field: GF2, arity: 1, dim: 1 },
            vec![
                FieldVector::from_bits(GF2, vec![1]).unwrap(),
                FieldVector::from_bits(GF2, vec![1]).unwrap(),
            ],
        )
        .unwrap();
        let zero = FieldVector::zero(GF2, 1);
        assert!(!blr_test(&all_ones, &zero, &zero).unwrap());
    }

    #[test]
    fn local_correct_examples() {
        let message = FieldMatrix::from_rows(GF2, &[vec![1, 0]]).unwrap();
        let honest = WordOracle::honest(message.clone());
        for x in FieldVector::iter_all(GF2, 2) {
            let want = pwh_encode_point(&message, &x).unwrap();
            for a in FieldVector::iter_all(GF2, 2) {
                assert_eq!(local_correct(&honest, &x, &a).unwrap(), want);
            }
            if x.is_zero() {
                assert!(local_correct(&honest, &x, &x).unwrap().is_zero());
            }
        }
        // single corruption: correction at fixed x succeeds for >= 2 of 4 shifts
        let flipped = single_flip_word();
        let x = FieldVector::from_bits(GF2, vec![1, 0]).unwrap();
        let want = pwh_encode_point(&message, &x).unwrap();
        let good = FieldVector::iter_all(GF2, 2)
            .filter(|a| local_correct(&flipped, &x, a).unwrap() == want)
            .count();
        assert!(good >= 2);
    }

    #[test]
    fn distance_examples() {
        let message = FieldMatrix::from_rows(GF2, &[vec![1, 0]]).unwrap();
        let honest = WordOracle::honest(message.clone());
        let (d, nearest) = distance_to_code(&honest, 24).unwrap();
        assert_eq!(d, Rational::new(0, 4));
        assert_eq!(nearest, message);

        // flip the origin entry: the original message stays uniquely nearest
        let mut patches = BTreeMap::new();
        patches.insert(
            FieldVector::zero(GF2, 2),
            FieldVector::from_bits(GF2, vec![1]).unwrap(),
        );
        let origin_flip = WordOracle::overlay(WordOracle::honest(message.clone()), patches);
        let (d, nearest) = distance_to_code(&origin_flip, 24).unwrap();
        assert_eq!(d, Rational::new(1, 4));
        assert_eq!(nearest, message);

        // flipping the (1,1) entry instead creates a three-way tie at 1/4,
        // which lexicographic tie-breaking resolves to the zero message
        let (d, nearest) = distance_to_code(&single_flip_word(), 24).unwrap();
        assert_eq!(d, Rational::new(1, 4));
        assert!(nearest.is_zero());
    }

    #[test]
    fn codewords_pairwise_distance_at_least_half() {
        // GF(2), k = 2, d = 1: any two distinct codewords differ in >= 1/2
        let words: Vec<Vec<FieldVector>> = FieldMatrix::iter_all(GF2, 1, 2)
            .map(|m| {
                FieldVector::iter_all(GF2, 2)
                    .map(|b| m.mul_vector(&b).unwrap())
                    .collect()
            })
            .collect();
        for (i, w1) in words.iter().enumerate() {
            for w2 in words.iter().skip(i + 1) {
                let differ = w1.iter().zip(w2).filter(|(a, b)| a != b).count();
                assert!(differ * 2 >= w1.len());
            }
        }
    }

    #[test]
    fn caps_are_enforced() {
        let big = WordOracle::honest(FieldMatrix::zero(GF8, 2, 48));
        assert!(matches!(
            blr_pass_rate(&big, 24),
            Err(OracleError::DomainExceedsCap(288, 24))
        ));
        assert!(distance_to_code(&big, 24).is_err());
    }

    #[test]
    fn seeded_corruption_works_on_huge_index_spaces() {
        // arity 48 over GF(8): the index space has 2^144 points, far past
        // any integer index; corruption must still be deterministic
        let base = WordOracle::honest(FieldMatrix::zero(GF8, 2, 48));
        let w = WordOracle::seeded(base, 0.5, 3);
        let mut idx = FieldVector::zero(GF8, 48);
        idx.set(0, GF8.el(5));
        idx.set(47, GF8.el(1));
        assert_eq!(w.eval(&idx).unwrap(), w.eval(&idx).unwrap());
    }

    #[test]
    fn explicit_materialization_is_capped() {
        let spec = OracleSpec { field: GF2, arity: 20, dim: 1 };
        assert!(matches!(
            WordOracle::explicit(spec, vec![]),
            Err(OracleError::DomainExceedsCap(20, 16))
        ));
    }

    #[test]
    fn seeded_corruption_is_deterministic() {
        let base = WordOracle::honest(FieldMatrix::zero(GF2, 1, 2));
        let w1 = WordOracle::seeded(base.clone(), 0.5, 9);
        let w2 = WordOracle::seeded(base.clone(), 0.5, 9);
        let mut saw_corruption = false;
        for idx in FieldVector::iter_all(GF2, 2) {
            assert_eq!(w1.eval(&idx).unwrap(), w2.eval(&idx).unwrap());
            if !w1.eval(&idx).unwrap().is_zero() {
                saw_corruption = true;
            }
        }
        // rate 0 keeps the base intact
        let clean = WordOracle::seeded(base, 0.0, 9);
        for idx in FieldVector::iter_all(GF2, 2) {
            assert!(clean.eval(&idx).unwrap().is_zero());
        }
        let _ = saw_corruption;
    }

    proptest! {
        /// The encoding is additive in the index.
        #[test]
        fn encode_additive(cols in prop::collection::vec(0u8..8, 6), b1 in prop::collection::vec(0u8..8, 3), b2 in prop::collection::vec(0u8..8, 3)) {
            let message = FieldMatrix::from_rows(GF8, &[cols[0..3].to_vec(), cols[3..6].to_vec()]).unwrap();
            let v1 = FieldVector::from_bits(GF8, b1).unwrap();
            let v2 = FieldVector::from_bits(GF8, b2).unwrap();
            let lhs = pwh_encode_point(&message, &v1).unwrap()
                .add(&pwh_encode_point(&message, &v2).unwrap());
            let rhs = pwh_encode_point(&message, &v1.add(&v2)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
