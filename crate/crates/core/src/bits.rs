//! Fixed-length bit strings used as genomes for both populations.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// A fixed-length string of bits, index 0 is the leftmost bit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        BitString {
            bits: vec![false; len],
        }
    }

    pub fn ones(len: usize) -> Self {
        BitString {
            bits: vec![true; len],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitString { bits }
    }

    /// Builds a string of `len` bits from the low bits of `value`, most significant bit first.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= 64, "from_u64 supports at most 64 bits");
        let bits = (0..len).map(|i| (value >> (len - 1 - i)) & 1 == 1).collect();
        BitString { bits }
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        BitString {
            bits: (0..len).map(|_| rng.gen::<bool>()).collect(),
        }
    }

    /// Inverse of [`BitString::from_u64`]. `None` for strings longer than 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        if self.bits.len() > 64 {
            return None;
        }
        Some(self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn set(&mut self, index: usize, value: bool) {
        self.bits[index] = value;
    }

    pub fn flip(&mut self, index: usize) {
        self.bits[index] = !self.bits[index];
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    /// Bitwise complement.
    pub fn complement(&self) -> Self {
        BitString {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    /// Circular left rotation by `k` positions: bit `i` of the result is bit `(i + k) mod len`.
    pub fn rotate_left(&self, k: usize) -> Self {
        let mut bits = self.bits.clone();
        if !bits.is_empty() {
            let k = k % bits.len();
            bits.rotate_left(k);
        }
        BitString { bits }
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::usage(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString::from_bits)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}
