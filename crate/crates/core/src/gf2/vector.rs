use std::fmt;
use std::ops::{BitXor, BitXorAssign};

use crate::error::{Error, Result};

/// A vector over GF(2), packed 64 coordinates per word.
///
/// Coordinate `i` lives in bit `i % 64` of word `i / 64`. Bits past `dim`
/// are always zero, so equality and hashing can compare words directly.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    dim: usize,
    words: Vec<u64>,
}

pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

impl BitVector {
    #[must_use]
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            words: vec![0; words_for(dim)],
        }
    }

    #[must_use]
    pub fn ones(dim: usize) -> Self {
        let mut v = Self {
            dim,
            words: vec![u64::MAX; words_for(dim)],
        };
        v.mask_tail();
        v
    }

    /// The unit vector with a single one at coordinate `i`.
    #[must_use]
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.set(i, true);
        v
    }

    /// Builds a vector of dimension `dim <= 64` from the low bits of `value`.
    ///
    /// # Panics
    /// Panics if `dim > 64`.
    #[must_use]
    pub fn from_u64(dim: usize, value: u64) -> Self {
        assert!(dim <= 64, "from_u64 supports at most 64 coordinates");
        let mut v = Self {
            dim,
            words: if dim == 0 { Vec::new() } else { vec![value] },
        };
        v.mask_tail();
        v
    }

    #[must_use]
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    fn mask_tail(&mut self) {
        let rem = self.dim % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// # Panics
    /// Panics if `i >= dim`.
    #[must_use]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.dim, "coordinate {i} out of range (dim {})", self.dim);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.dim, "coordinate {i} out of range (dim {})", self.dim);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.dim, "coordinate {i} out of range (dim {})", self.dim);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    /// Hamming weight.
    #[must_use]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// GF(2) dot product.
    #[must_use]
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.dim, other.dim, "dot: dimension mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// The packed value, when the vector fits in one word.
    #[must_use]
    pub fn to_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    /// Indices of the nonzero coordinates, ascending.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    /// Appends one coordinate at the end.
    #[must_use]
    pub fn extended(&self, bit: bool) -> Self {
        let mut out = Self::zeros(self.dim + 1);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        if bit {
            out.set(self.dim, true);
        }
        out
    }

    /// Keeps only the coordinates in `range`.
    #[must_use]
    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        assert!(range.end <= self.dim);
        let mut out = Self::zeros(range.len());
        for (k, i) in range.enumerate() {
            if self.get(i) {
                out.set(k, true);
            }
        }
        out
    }

    /// Parses a line of `0`/`1` characters, coordinate 0 first.
    pub fn parse(line: &str) -> Result<Self> {
        let line = line.trim();
        let mut v = Self::zeros(line.len());
        for (i, ch) in line.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => v.set(i, true),
                other => return Err(Error::Parse(format!("unexpected character {other:?} in bit string"))),
            }
        }
        Ok(v)
    }

    /// Little-endian hex: byte `b` holds coordinates `8b..8b+8`, coordinate
    /// `8b + j` in bit `j` of that byte.
    #[must_use]
    pub fn to_hex_le(&self) -> String {
        let nbytes = self.dim.div_ceil(8);
        let mut s = String::with_capacity(2 * nbytes);
        for b in 0..nbytes {
            let byte = (self.words[b / 8] >> (8 * (b % 8))) & 0xff;
            s.push_str(&format!("{byte:02x}"));
        }
        s
    }

    pub fn from_hex_le(dim: usize, hex: &str) -> Result<Self> {
        let nbytes = dim.div_ceil(8);
        if hex.len() != 2 * nbytes {
            return Err(Error::Parse(format!(
                "hex vector {hex:?} has {} digits, expected {} for dimension {dim}",
                hex.len(),
                2 * nbytes
            )));
        }
        let mut words = vec![0u64; words_for(dim)];
        for b in 0..nbytes {
            let byte = u64::from_str_radix(&hex[2 * b..2 * b + 2], 16)
                .map_err(|e| Error::Parse(format!("bad hex {hex:?}: {e}")))?;
            words[b / 8] |= byte << (8 * (b % 8));
        }
        let v = Self { dim, words };
        let mut masked = v.clone();
        masked.mask_tail();
        if masked != v {
            return Err(Error::Parse(format!("hex vector {hex:?} has bits beyond dimension {dim}")));
        }
        Ok(v)
    }
}

impl BitXorAssign<&BitVector> for BitVector {
    fn bitxor_assign(&mut self, rhs: &BitVector) {
        assert_eq!(self.dim, rhs.dim, "xor: dimension mismatch");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor<&BitVector> for &BitVector {
    type Output = BitVector;
    fn bitxor(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_bits_stay_zero() {
        let v = BitVector::ones(70);
        assert_eq!(v.weight(), 70);
        assert_eq!(v, BitVector::from_bits(&[true; 70]));
        let w = BitVector::from_u64(3, 0xff);
        assert_eq!(w.to_u64(), Some(0b111));
    }

    #[test]
    fn xor_is_self_inverse() {
        let a = BitVector::parse("10110").unwrap();
        let b = BitVector::parse("01100").unwrap();
        let c = &a ^ &b;
        assert_eq!(c.to_string(), "11010");
        assert!((&c ^ &c).is_zero());
    }

    #[test]
    fn hex_round_trip_and_bit_order() {
        let v = BitVector::parse("101").unwrap();
        assert_eq!(v.to_hex_le(), "05");
        let long = BitVector::from_bits(&(0..19).map(|i| i % 3 == 0).collect::<Vec<_>>());
        assert_eq!(BitVector::from_hex_le(19, &long.to_hex_le()).unwrap(), long);
        assert!(BitVector::from_hex_le(3, "0f").is_err());
        assert!(BitVector::from_hex_le(3, "5").is_err());
    }

    #[test]
    fn ones_iter_lists_support() {
        let mut v = BitVector::zeros(130);
        for i in [0, 63, 64, 129] {
            v.set(i, true);
        }
        assert_eq!(v.ones_iter().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
    }
}
