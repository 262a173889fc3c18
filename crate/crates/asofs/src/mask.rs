//! Binary feature masks — the "position" of an atom.

use rand::Rng;
use std::fmt;

/// A bit vector over the feature set: bit `i` set means feature `i` is
/// selected. Ordering is lexicographic over the bit string with feature 0
/// first, so `Ord` matches "lexicographically smallest bit string".
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureMask {
    bits: Vec<bool>,
}

impl FeatureMask {
    pub fn zeros(len: usize) -> Self {
        FeatureMask {
            bits: vec![false; len],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        FeatureMask { bits }
    }

    /// Mask with each bit drawn Bernoulli(0.5).
    pub fn bernoulli<R: Rng>(len: usize, rng: &mut R) -> Self {
        FeatureMask {
            bits: (0..len).map(|_| rng.gen_bool(0.5)).collect(),
        }
    }

    /// Decode a low-endian integer: bit `i` of `value` becomes feature `i`.
    pub fn from_index(value: u64, len: usize) -> Self {
        FeatureMask {
            bits: (0..len).map(|i| value >> i & 1 == 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn negate(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Bit value as a real coordinate (0.0 or 1.0).
    pub fn coord(&self, i: usize) -> f64 {
        if self.bits[i] {
            1.0
        } else {
            0.0
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    /// Indices of set bits.
    pub fn selected_indices(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| if b { Some(i) } else { None })
            .collect()
    }

    pub fn hamming(&self, other: &FeatureMask) -> usize {
        debug_assert_eq!(self.len(), other.len());
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Euclidean distance between the masks viewed as 0/1 vectors.
    pub fn euclidean(&self, other: &FeatureMask) -> f64 {
        (self.hamming(other) as f64).sqrt()
    }

    /// Set one uniformly random bit. Used to repair all-zero masks.
    pub fn set_random_bit<R: Rng>(&mut self, rng: &mut R) {
        let i = rng.gen_range(0..self.bits.len());
        self.bits[i] = true;
    }

    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn from_bit_string(s: &str) -> Option<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return None,
            }
        }
        Some(FeatureMask { bits })
    }
}

impl fmt::Debug for FeatureMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FeatureMask({})", self.to_bit_string())
    }
}

impl fmt::Display for FeatureMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}
