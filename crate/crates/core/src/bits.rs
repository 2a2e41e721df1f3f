//! Packed GF(2) vectors.
//!
//! Proof oracles treat long binary strings as vectors over GF(2); the hot
//! operations are XOR, inner products, and the quadratic form `u^T M u`
//! where `M` is a row-major flattened bit matrix. Segments can be generated
//! lazily from a [`Prf`] so that exponentially indexed words never have to
//! be materialized.

use crate::rng::Prf;
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bools(bools: &[bool]) -> Self {
        let mut b = Bits::zeros(bools.len());
        for (i, &v) in bools.iter().enumerate() {
            if v {
                b.set(i, true);
            }
        }
        b
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut b = Bits::zeros(len);
        for i in 0..len {
            if f(i) {
                b.set(i, true);
            }
        }
        b
    }

    /// `len` pseudo-random bits drawn from `prf` stream `stream`.
    pub fn from_prf(prf: &Prf, stream: u64, len: usize) -> Self {
        let n_words = len.div_ceil(64);
        let mut words: Vec<u64> = (0..n_words).map(|i| prf.word(stream, i as u64)).collect();
        if !len.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (len % 64)) - 1;
            }
        }
        Bits { len, words }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor_assign(&mut self, other: &Bits) {
        assert_eq!(self.len, other.len, "bit length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Bits) -> Bits {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Bits) -> bool {
        assert_eq!(self.len, other.len, "bit length mismatch");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    /// Word `w` of the logical subrange starting at bit `start`.
    fn range_word(&self, start: usize, w: usize) -> u64 {
        let bit = start + w * 64;
        let base = bit / 64;
        let off = bit % 64;
        let lo = self.words.get(base).copied().unwrap_or(0) >> off;
        if off == 0 {
            lo
        } else {
            lo | (self.words.get(base + 1).copied().unwrap_or(0) << (64 - off))
        }
    }

    /// Inner product of `self[start..start+other.len()]` with `other`.
    pub fn dot_range(&self, start: usize, other: &Bits) -> bool {
        debug_assert!(start + other.len <= self.len);
        let n_words = other.len.div_ceil(64);
        let mut acc = 0u64;
        for w in 0..n_words {
            let mut x = self.range_word(start, w) & other.words[w];
            if w == n_words - 1 && !other.len.is_multiple_of(64) {
                x &= (1u64 << (other.len % 64)) - 1;
            }
            acc ^= x;
        }
        acc.count_ones() % 2 == 1
    }

    /// XOR `other` into `self[start..start+other.len()]`.
    pub fn xor_range(&mut self, start: usize, other: &Bits) {
        debug_assert!(start + other.len <= self.len);
        for (i, bit) in other.iter_ones() {
            let _ = i;
            self.flip(start + bit);
        }
    }

    /// Treat `self` as a row-major `n x n` bit matrix (`self.len == n*n`)
    /// and compute `u^T M u` over GF(2).
    pub fn quad_form(&self, u: &Bits) -> bool {
        let n = u.len;
        debug_assert_eq!(self.len, n * n, "matrix/vector size mismatch");
        let mut acc = false;
        for (_, a) in u.iter_ones() {
            acc ^= self.dot_range(a * n, u);
        }
        acc
    }

    /// XOR the flattened outer product `r rp^T` (row-major) into `self`.
    pub fn xor_outer(&mut self, r: &Bits, rp: &Bits) {
        debug_assert_eq!(self.len, r.len * rp.len);
        for (_, a) in r.iter_ones() {
            let cols = rp.len;
            let start = a * cols;
            let n_words = cols.div_ceil(64);
            for w in 0..n_words {
                let chunk = rp.words[w];
                if chunk == 0 {
                    continue;
                }
                // XOR chunk into bits [start + 64w, ...) of self.
                let bit = start + w * 64;
                let base = bit / 64;
                let off = bit % 64;
                let avail = cols - w * 64;
                let masked = if avail < 64 {
                    chunk & ((1u64 << avail) - 1)
                } else {
                    chunk
                };
                self.words[base] ^= masked << off;
                if off != 0 && base + 1 < self.words.len() {
                    self.words[base + 1] ^= masked >> (64 - off);
                }
            }
        }
    }

    /// Iterator over `(rank, position)` of set bits.
    pub fn iter_ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let mut rank = 0usize;
        (0..self.words.len()).flat_map(move |wi| {
            let mut w = self.words[wi];
            let mut out = Vec::with_capacity(w.count_ones() as usize);
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                w &= w - 1;
            }
            out.into_iter().map(move |pos| {
                let r = rank;
                rank += 1;
                (r, pos)
            })
        })
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Little-endian view of the low bits of `x`.
    pub fn from_u128(len: usize, x: u128) -> Self {
        Bits::from_fn(len, |i| (x >> i) & 1 == 1)
    }
}

impl std::fmt::Debug for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let shown = self.len.min(64);
        let mut s = String::with_capacity(shown + 2);
        for i in 0..shown {
            s.push(if self.get(i) { '1' } else { '0' });
        }
        if self.len > shown {
            s.push('…');
        }
        write!(f, "Bits[{}]({})", self.len, s)
    }
}

impl Serialize for Bits {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<u8> = (0..self.len).map(|i| self.get(i) as u8).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<u8>::deserialize(d)?;
        if let Some(bad) = v.iter().find(|&&b| b > 1) {
            return Err(serde::de::Error::custom(format!("bit value {bad} not in {{0,1}}")));
        }
        Ok(Bits::from_fn(v.len(), |i| v[i] == 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut b = Bits::zeros(130);
        b.set(0, true);
        b.set(64, true);
        b.set(129, true);
        assert_eq!(b.count_ones(), 3);
        assert!(b.get(64) && !b.get(63));
        let ones: Vec<usize> = b.iter_ones().map(|(_, p)| p).collect();
        assert_eq!(ones, vec![0, 64, 129]);
    }

    #[test]
    fn dot_and_ranges() {
        let a = Bits::from_bools(&[true, false, true, true]);
        let b = Bits::from_bools(&[true, true, true, false]);
        assert!(!a.dot(&b)); // overlap {0,2}, even parity

        // dot_range across a word boundary
        let mut long = Bits::zeros(200);
        for i in [70, 71, 75] {
            long.set(i, true);
        }
        let probe = Bits::from_bools(&[true, true, false, false, false, true]);
        assert!(long.dot_range(70, &probe)); // hits 70, 71, 75: odd
    }

    #[test]
    fn quad_form_matches_naive() {
        let n = 9;
        let prf = Prf::new(5);
        let m = Bits::from_prf(&prf, 0, n * n);
        let u = Bits::from_prf(&prf, 1, n);
        let mut naive = false;
        for a in 0..n {
            for b in 0..n {
                naive ^= u.get(a) && u.get(b) && m.get(a * n + b);
            }
        }
        assert_eq!(m.quad_form(&u), naive);
    }

    #[test]
    fn outer_product_matches_naive() {
        let (rows, cols) = (5, 9);
        let prf = Prf::new(9);
        let r = Bits::from_prf(&prf, 0, rows);
        let rp = Bits::from_prf(&prf, 1, cols);
        let mut m = Bits::zeros(rows * cols);
        m.xor_outer(&r, &rp);
        for a in 0..rows {
            for b in 0..cols {
                assert_eq!(m.get(a * cols + b), r.get(a) && rp.get(b));
            }
        }
    }

    #[test]
    fn prf_bits_deterministic_and_masked() {
        let prf = Prf::new(1);
        let a = Bits::from_prf(&prf, 3, 67);
        let b = Bits::from_prf(&prf, 3, 67);
        assert_eq!(a, b);
        assert_eq!(a.len(), 67);
        // tail above len is clear: count equals bools count
        assert_eq!(a.count_ones(), a.to_bools().iter().filter(|&&x| x).count());
    }
}
