//! Exact arithmetic over the characteristic-two fields GF(2), GF(4), GF(8).
//!
//! Elements are polynomial representatives packed into a bitmask (bit `i` is
//! the coefficient of `x^i`). The irreducible moduli are pinned so that
//! serialized instances are bit-exact across runs: `x` for GF(2),
//! `x^2 + x + 1` for GF(4), `x^3 + x + 1` for GF(8). Addition is XOR;
//! multiplication is carry-less multiplication followed by reduction.
//!
//! The additive flattening `chi` maps an element to its `t` coefficient
//! bits, little-endian (bit 0 first), and is an additive isomorphism onto
//! `GF(2)^t`.

use crate::bits::Bits;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("field spec mismatch: GF(2^{0}) vs GF(2^{1})")]
    SpecMismatch(u8, u8),
    #[error("extension degree {0} unsupported (must be 1, 2, or 3)")]
    BadDegree(u8),
    #[error("bitmask {value} out of range for GF(2^{t})")]
    OutOfRange { value: u8, t: u8 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("chi input has {got} bits, expected {want}")]
    ChiLength { got: usize, want: usize },
}

/// One of the three supported fields, identified by its extension degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldSpec {
    t: u8,
}

pub const GF2: FieldSpec = FieldSpec { t: 1 };
pub const GF4: FieldSpec = FieldSpec { t: 2 };
pub const GF8: FieldSpec = FieldSpec { t: 3 };

impl FieldSpec {
    pub fn new(t: u8) -> Result<Self, GfError> {
        if (1..=3).contains(&t) {
            Ok(FieldSpec { t })
        } else {
            Err(GfError::BadDegree(t))
        }
    }

    pub fn t(&self) -> u8 {
        self.t
    }

    /// Field order `2^t`.
    pub fn order(&self) -> u8 {
        1 << self.t
    }

    /// The pinned irreducible modulus, as a bitmask.
    pub fn modulus(&self) -> u16 {
        match self.t {
            1 => 0b10,
            2 => 0b111,
            _ => 0b1011,
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { spec: *self, bits: 0 }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { spec: *self, bits: 1 }
    }

    pub fn el(&self, bits: u8) -> FieldElement {
        self.try_el(bits).expect("element out of range")
    }

    pub fn try_el(&self, bits: u8) -> Result<FieldElement, GfError> {
        if bits < self.order() {
            Ok(FieldElement { spec: *self, bits })
        } else {
            Err(GfError::OutOfRange { value: bits, t: self.t })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |b| FieldElement { spec: *self, bits: b })
    }
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({})", self.order())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    spec: FieldSpec,
    bits: u8,
}

/// Carry-less (polynomial) product of two bitmasks.
const fn clmul(a: u8, b: u8) -> u16 {
    let mut acc = 0u16;
    let mut i = 0;
    while i < 8 {
        if (b >> i) & 1 == 1 {
            acc ^= (a as u16) << i;
        }
        i += 1;
    }
    acc
}

/// Reduce a polynomial bitmask modulo an irreducible of degree `t`.
const fn reduce(mut x: u16, t: u32, modulus: u16) -> u8 {
    while x >> t != 0 {
        let deg = 15 - x.leading_zeros();
        x ^= modulus << (deg - t);
    }
    x as u8
}

const fn build_mul_table<const N: usize>(t: u32, modulus: u16) -> [u8; N] {
    let order = 1u16 << t;
    let mut table = [0u8; N];
    let mut a = 0u16;
    while a < order {
        let mut b = 0u16;
        while b < order {
            table[(a << t | b) as usize] = reduce(clmul(a as u8, b as u8), t, modulus);
            b += 1;
        }
        a += 1;
    }
    table
}

static GF2_MUL: [u8; 4] = build_mul_table(1, 0b10);
static GF4_MUL: [u8; 16] = build_mul_table(2, 0b111);
static GF8_MUL: [u8; 64] = build_mul_table(3, 0b1011);

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn bits(&self) -> u8 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Addition: polynomial addition is bitwise XOR, so `a + a = 0`.
    pub fn checked_add(self, rhs: FieldElement) -> Result<FieldElement, GfError> {
        if self.spec != rhs.spec {
            return Err(GfError::SpecMismatch(self.spec.t, rhs.spec.t));
        }
        Ok(FieldElement {
            spec: self.spec,
            bits: self.bits ^ rhs.bits,
        })
    }

    /// Multiplication: carry-less product reduced by the modulus (via the
    /// compile-time product tables).
    pub fn checked_mul(self, rhs: FieldElement) -> Result<FieldElement, GfError> {
        if self.spec != rhs.spec {
            return Err(GfError::SpecMismatch(self.spec.t, rhs.spec.t));
        }
        let table: &[u8] = match self.spec.t {
            1 => &GF2_MUL,
            2 => &GF4_MUL,
            _ => &GF8_MUL,
        };
        Ok(FieldElement {
            spec: self.spec,
            bits: table[((self.bits as usize) << self.spec.t) | rhs.bits as usize],
        })
    }

    /// Multiplicative inverse of a nonzero element (by exhaustive search;
    /// the field has at most 8 elements).
    pub fn inverse(self) -> Option<FieldElement> {
        if self.is_zero() {
            return None;
        }
        self.spec.elements().find(|&c| (self * c).bits == 1)
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.checked_add(rhs).expect("field spec mismatch")
    }
}

impl std::ops::Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.checked_mul(rhs).expect("field spec mismatch")
    }
}

impl std::fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}#{}", self.bits, self.spec)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(self.bits)
    }
}

/// Flatten an element into its `t` coefficient bits, little-endian.
/// Additive: `chi(a) + chi(b) = chi(a + b)`.
pub fn chi_flatten(a: FieldElement) -> Bits {
    Bits::from_fn(a.spec.t as usize, |i| (a.bits >> i) & 1 == 1)
}

/// Inverse of [`chi_flatten`]; rejects input of the wrong length.
pub fn chi_unflatten(spec: FieldSpec, bits: &Bits) -> Result<FieldElement, GfError> {
    if bits.len() != spec.t as usize {
        return Err(GfError::ChiLength {
            got: bits.len(),
            want: spec.t as usize,
        });
    }
    let mut v = 0u8;
    for i in 0..bits.len() {
        if bits.get(i) {
            v |= 1 << i;
        }
    }
    Ok(FieldElement { spec, bits: v })
}

/// A vector over one of the supported fields. Entries are stored as raw
/// bitmasks with a shared spec.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldVector {
    spec: FieldSpec,
    elems: Vec<u8>,
}

impl FieldVector {
    pub fn zero(spec: FieldSpec, len: usize) -> Self {
        FieldVector {
            spec,
            elems: vec![0; len],
        }
    }

    pub fn from_bits(spec: FieldSpec, elems: Vec<u8>) -> Result<Self, GfError> {
        if let Some(&bad) = elems.iter().find(|&&e| e >= spec.order()) {
            return Err(GfError::OutOfRange { value: bad, t: spec.t() });
        }
        Ok(FieldVector { spec, elems })
    }

    pub fn from_elements(spec: FieldSpec, v: &[FieldElement]) -> Result<Self, GfError> {
        let mut elems = Vec::with_capacity(v.len());
        for e in v {
            if e.spec != spec {
                return Err(GfError::SpecMismatch(spec.t, e.spec.t));
            }
            elems.push(e.bits);
        }
        Ok(FieldVector { spec, elems })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn get(&self, i: usize) -> FieldElement {
        FieldElement {
            spec: self.spec,
            bits: self.elems[i],
        }
    }

    pub fn set(&mut self, i: usize, v: FieldElement) {
        assert_eq!(v.spec, self.spec, "field spec mismatch");
        self.elems[i] = v.bits;
    }

    pub fn raw(&self) -> &[u8] {
        &self.elems
    }

    pub fn is_zero(&self) -> bool {
        self.elems.iter().all(|&e| e == 0)
    }

    pub fn checked_add(&self, rhs: &FieldVector) -> Result<FieldVector, GfError> {
        if self.spec != rhs.spec {
            return Err(GfError::SpecMismatch(self.spec.t, rhs.spec.t));
        }
        if self.len() != rhs.len() {
            return Err(GfError::ShapeMismatch(format!(
                "vector lengths {} vs {}",
                self.len(),
                rhs.len()
            )));
        }
        Ok(FieldVector {
            spec: self.spec,
            elems: self
                .elems
                .iter()
                .zip(&rhs.elems)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    pub fn add(&self, rhs: &FieldVector) -> FieldVector {
        self.checked_add(rhs).expect("vector add mismatch")
    }

    pub fn dot(&self, rhs: &FieldVector) -> FieldElement {
        assert_eq!(self.spec, rhs.spec);
        assert_eq!(self.len(), rhs.len());
        let mut acc = self.spec.zero();
        for i in 0..self.len() {
            acc = acc + self.get(i) * rhs.get(i);
        }
        acc
    }

    /// Canonical index of this vector: entry 0 is the least significant
    /// base-`|F|` digit. Only valid for micro index spaces (up to 128
    /// bits); longer vectors must stay symbolic.
    pub fn to_index(&self) -> u128 {
        assert!(
            self.spec.t() as usize * self.elems.len() <= 128,
            "index space too large for a canonical integer index"
        );
        let base = self.spec.order() as u128;
        let mut idx = 0u128;
        for &e in self.elems.iter().rev() {
            idx = idx * base + e as u128;
        }
        idx
    }

    /// Order-independent digest of the entries, for keying deterministic
    /// per-index randomness at any arity.
    pub fn digest(&self) -> u64 {
        let mut h = crate::rng::splitmix64(0x1d8e_4e27_c47d_124f ^ self.elems.len() as u64);
        for &e in &self.elems {
            h = crate::rng::splitmix64(h ^ e as u64);
        }
        h
    }

    /// Inverse of [`FieldVector::to_index`].
    pub fn from_index(spec: FieldSpec, len: usize, mut idx: u128) -> Self {
        let base = spec.order() as u128;
        let mut elems = Vec::with_capacity(len);
        for _ in 0..len {
            elems.push((idx % base) as u8);
            idx /= base;
        }
        FieldVector { spec, elems }
    }

    /// All vectors of the given length in canonical index order.
    pub fn iter_all(spec: FieldSpec, len: usize) -> impl Iterator<Item = FieldVector> {
        let total = (spec.order() as u128)
            .checked_pow(len as u32)
            .expect("domain too large to enumerate");
        (0..total).map(move |i| FieldVector::from_index(spec, len, i))
    }

    /// All vectors in lexicographic order of their entry tuples.
    pub fn iter_lex(spec: FieldSpec, len: usize) -> impl Iterator<Item = FieldVector> {
        Self::iter_all(spec, len).map(move |v| {
            let mut elems = v.elems;
            elems.reverse();
            FieldVector { spec, elems }
        })
    }
}

impl std::fmt::Debug for FieldVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}#{}", self.elems, self.spec)
    }
}

impl Serialize for FieldVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.elems.serialize(s)
    }
}

/// Dense row-major matrix over one of the supported fields.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldMatrix {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl FieldMatrix {
    pub fn zero(spec: FieldSpec, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            spec,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(spec: FieldSpec, n: usize) -> Self {
        let mut m = FieldMatrix::zero(spec, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Permutation matrix `M` with `(M v)[i] = v[perm[i]]`.
    pub fn permutation(spec: FieldSpec, perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = FieldMatrix::zero(spec, n, n);
        for (i, &j) in perm.iter().enumerate() {
            assert!(j < n, "permutation target out of range");
            m.data[i * n + j] = 1;
        }
        m
    }

    pub fn from_rows(spec: FieldSpec, rows: &[Vec<u8>]) -> Result<Self, GfError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for r in rows {
            if r.len() != n_cols {
                return Err(GfError::ShapeMismatch("ragged matrix rows".into()));
            }
            for &e in r {
                if e >= spec.order() {
                    return Err(GfError::OutOfRange { value: e, t: spec.t() });
                }
                data.push(e);
            }
        }
        Ok(FieldMatrix {
            spec,
            rows: n_rows,
            cols: n_cols,
            data,
        })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        FieldElement {
            spec: self.spec,
            bits: self.data[r * self.cols + c],
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        assert_eq!(v.spec, self.spec);
        self.data[r * self.cols + c] = v.bits;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    pub fn row(&self, r: usize) -> FieldVector {
        FieldVector {
            spec: self.spec,
            elems: self.data[r * self.cols..(r + 1) * self.cols].to_vec(),
        }
    }

    pub fn column(&self, c: usize) -> FieldVector {
        FieldVector {
            spec: self.spec,
            elems: (0..self.rows).map(|r| self.data[r * self.cols + c]).collect(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec())
            .collect()
    }

    /// Matrix-vector product; errors on a column/length mismatch.
    pub fn mul_vector(&self, v: &FieldVector) -> Result<FieldVector, GfError> {
        if self.spec != v.spec {
            return Err(GfError::SpecMismatch(self.spec.t, v.spec.t));
        }
        if self.cols != v.len() {
            return Err(GfError::ShapeMismatch(format!(
                "matrix is {}x{}, vector has length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = FieldVector::zero(self.spec, self.rows);
        for r in 0..self.rows {
            let mut acc = self.spec.zero();
            for c in 0..self.cols {
                acc = acc + self.get(r, c) * v.get(c);
            }
            out.elems[r] = acc.bits;
        }
        Ok(out)
    }

    pub fn add_assign(&mut self, rhs: &FieldMatrix) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        assert_eq!(self.spec, rhs.spec);
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a ^= b;
        }
    }

    pub fn scale(&self, s: FieldElement) -> FieldMatrix {
        assert_eq!(s.spec, self.spec);
        let mut out = self.clone();
        for e in out.data.iter_mut() {
            *e = (FieldElement { spec: self.spec, bits: *e } * s).bits;
        }
        out
    }

    /// All `rows x cols` matrices in lexicographic order of their row-major
    /// entries.
    pub fn iter_all(spec: FieldSpec, rows: usize, cols: usize) -> impl Iterator<Item = FieldMatrix> {
        let n = rows * cols;
        let total = (spec.order() as u128)
            .checked_pow(n as u32)
            .expect("matrix space too large to enumerate");
        (0..total).map(move |idx| {
            let mut data = vec![0u8; n];
            let mut rem = idx;
            let base = spec.order() as u128;
            for slot in (0..n).rev() {
                data[slot] = (rem % base) as u8;
                rem /= base;
            }
            FieldMatrix { spec, rows, cols, data }
        })
    }
}

impl std::fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}#{}x{}#{}", self.to_rows(), self.rows, self.cols, self.spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent product oracle: schoolbook polynomial multiplication
    /// followed by explicit long division by the modulus.
    fn long_division_mul(spec: FieldSpec, a: u8, b: u8) -> u8 {
        let mut prod = [0u8; 16];
        for i in 0..8 {
            for j in 0..8 {
                if (a >> i) & 1 == 1 && (b >> j) & 1 == 1 {
                    prod[i + j] ^= 1;
                }
            }
        }
        // long division: repeatedly cancel the leading coefficient
        let t = spec.t() as usize;
        let modulus = spec.modulus();
        for deg in (t..16).rev() {
            if prod[deg] == 1 {
                for m in 0..=t {
                    if (modulus >> m) & 1 == 1 {
                        prod[deg - t + m] ^= 1;
                    }
                }
            }
        }
        let mut out = 0u8;
        for (i, &c) in prod.iter().take(t).enumerate() {
            out |= c << i;
        }
        out
    }

    #[test]
    fn add_examples() {
        assert_eq!((GF8.el(5) + GF8.el(3)).bits(), 6);
        for spec in [GF2, GF4, GF8] {
            for a in spec.elements() {
                assert_eq!(a + spec.zero(), a);
                assert!((a + a).is_zero());
            }
        }
    }

    #[test]
    fn mul_examples_against_long_division_oracle() {
        // x * x^2 = x^3 = x + 1 (mod x^3 + x + 1)
        assert_eq!(long_division_mul(GF8, 2, 4), 3);
        assert_eq!((GF8.el(2) * GF8.el(4)).bits(), 3);
        // (x + 1)^2 = x^2 + 1
        assert_eq!(long_division_mul(GF8, 3, 3), 5);
        assert_eq!((GF8.el(3) * GF8.el(3)).bits(), 5);
        for spec in [GF2, GF4, GF8] {
            for a in spec.elements() {
                assert_eq!(spec.one() * a, a);
                for b in spec.elements() {
                    assert_eq!((a * b).bits(), long_division_mul(spec, a.bits(), b.bits()));
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for spec in [GF2, GF4, GF8] {
            let els: Vec<_> = spec.elements().collect();
            for &a in &els {
                if !a.is_zero() {
                    let inv = a.inverse().expect("nonzero element has an inverse");
                    assert_eq!((a * inv).bits(), 1);
                }
                for &b in &els {
                    assert_eq!(a * b, b * a);
                    assert_eq!(a + b, b + a);
                    for &c in &els {
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!((a + b) + c, a + (b + c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }

    #[test]
    fn spec_mismatch_is_an_error() {
        assert!(GF8.el(1).checked_add(GF4.el(1)).is_err());
        assert!(GF8.el(1).checked_mul(GF2.el(1)).is_err());
    }

    #[test]
    fn chi_flatten_examples() {
        let b = chi_flatten(GF8.el(5));
        assert_eq!(b.to_bools(), vec![true, false, true]);
        // xor homomorphism: chi(3) + chi(5) = chi(6)
        let mut s = chi_flatten(GF8.el(3));
        s.xor_assign(&chi_flatten(GF8.el(5)));
        assert_eq!(s, chi_flatten(GF8.el(6)));
        // t = 1 identity
        assert_eq!(chi_flatten(GF2.el(1)).to_bools(), vec![true]);
    }

    #[test]
    fn chi_roundtrip_exhaustive_and_length_check() {
        for spec in [GF2, GF4, GF8] {
            for a in spec.elements() {
                assert_eq!(chi_unflatten(spec, &chi_flatten(a)).unwrap(), a);
            }
        }
        assert!(matches!(
            chi_unflatten(GF8, &Bits::zeros(2)),
            Err(GfError::ChiLength { got: 2, want: 3 })
        ));
    }

    #[test]
    fn mat_vec_examples() {
        let id = FieldMatrix::identity(GF8, 3);
        let v = FieldVector::from_bits(GF8, vec![1, 4, 7]).unwrap();
        assert_eq!(id.mul_vector(&v).unwrap(), v);
        let z = FieldMatrix::zero(GF8, 3, 3);
        assert!(z.mul_vector(&v).unwrap().is_zero());
        // [[2,3]] * (4,1) = 2*4 + 3*1 = 3 + 3 = 0
        let m = FieldMatrix::from_rows(GF8, &[vec![2, 3]]).unwrap();
        let w = FieldVector::from_bits(GF8, vec![4, 1]).unwrap();
        assert!(m.mul_vector(&w).unwrap().is_zero());
        // shape mismatch
        assert!(m.mul_vector(&v).is_err());
    }

    #[test]
    fn permutation_matrix_semantics() {
        let perm = [2usize, 0, 1];
        let m = FieldMatrix::permutation(GF8, &perm);
        let v = FieldVector::from_bits(GF8, vec![5, 6, 7]).unwrap();
        let mv = m.mul_vector(&v).unwrap();
        for (i, &target) in perm.iter().enumerate() {
            assert_eq!(mv.get(i), v.get(target));
        }
    }

    #[test]
    fn vector_index_roundtrip() {
        for spec in [GF2, GF8] {
            for v in FieldVector::iter_all(spec, 3) {
                assert_eq!(FieldVector::from_index(spec, 3, v.to_index()), v);
            }
        }
        // entry 0 is the least significant digit
        let v = FieldVector::from_index(GF8, 2, 5);
        assert_eq!(v.raw(), &[5, 0]);
    }

    /// Random subsum principle, micro version. The full exhaustive check
    /// over all dimensions is part of the acceptance suite.
    #[test]
    fn random_subsum_gf2_dims_up_to_two() {
        for rows in 1..=2usize {
            for cols in 1..=2usize {
                let mats: Vec<_> = FieldMatrix::iter_all(GF2, rows, cols).collect();
                for (i, m1) in mats.iter().enumerate() {
                    for m2 in mats.iter().skip(i + 1) {
                        let total = 1u32 << rows;
                        let mut differ = 0u32;
                        for x in FieldVector::iter_all(GF2, rows) {
                            let a: Vec<_> = (0..cols).map(|c| x.dot(&m1.column(c))).collect();
                            let b: Vec<_> = (0..cols).map(|c| x.dot(&m2.column(c))).collect();
                            if a != b {
                                differ += 1;
                            }
                        }
                        assert!(2 * differ >= total, "subsum principle violated");
                    }
                }
            }
        }
    }
}
