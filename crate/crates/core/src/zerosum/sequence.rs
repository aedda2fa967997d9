use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// An ordered sequence over `Z_2^d`; repetition is allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSequence {
    dim: usize,
    elements: Vec<BitVector>,
}

impl GroupSequence {
    pub fn new(dim: usize, elements: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = elements.iter().find(|e| e.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { dim, elements })
    }

    /// The columns of `m`, read left to right.
    #[must_use]
    pub fn from_matrix_columns(m: &BitMatrix) -> Self {
        Self {
            dim: m.rows(),
            elements: m.columns(),
        }
    }

    /// Elements given as integers, bit `i` being coordinate `i`.
    ///
    /// # Panics
    /// Panics if `dim > 64` or a value has bits beyond `dim`.
    #[must_use]
    pub fn from_u64s(dim: usize, values: &[u64]) -> Self {
        Self {
            dim,
            elements: values.iter().map(|&v| BitVector::from_u64(dim, v)).collect(),
        }
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    #[must_use]
    pub fn elements(&self) -> &[BitVector] {
        &self.elements
    }

    #[must_use]
    pub fn total(&self) -> BitVector {
        let mut acc = BitVector::zeros(self.dim);
        for e in &self.elements {
            acc ^= e;
        }
        acc
    }

    /// The `d x n` matrix whose columns are the elements.
    #[must_use]
    pub fn to_matrix(&self) -> BitMatrix {
        BitMatrix::from_columns(self.dim, &self.elements).expect("elements share the dimension")
    }

    #[must_use]
    pub fn prefix(&self, len: usize) -> Self {
        Self {
            dim: self.dim,
            elements: self.elements[..len.min(self.len())].to_vec(),
        }
    }

    /// One 0/1 line per element; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let elements = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(BitVector::parse)
            .collect::<Result<Vec<_>>>()?;
        let dim = elements
            .first()
            .map(BitVector::dim)
            .ok_or_else(|| Error::Parse("empty sequence".into()))?;
        Self::new(dim, elements)
    }
}

impl fmt::Display for GroupSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.elements {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Positions (0-based, sorted, distinct) of a zero-sum subsequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZeroSumWitness {
    indices: Vec<usize>,
}

impl ZeroSumWitness {
    /// Sorts the indices and rejects repeats.
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Validation(format!("repeated index in {indices:?}")));
        }
        Ok(Self { indices })
    }

    #[must_use]
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Checks range, length and that the referenced elements sum to zero.
    pub fn validate(&self, seq: &GroupSequence, length: usize) -> Result<()> {
        if self.indices.len() != length {
            return Err(Error::Validation(format!(
                "witness has {} indices, expected {length}",
                self.indices.len()
            )));
        }
        if let Some(&bad) = self.indices.iter().find(|&&i| i >= seq.len()) {
            return Err(Error::Validation(format!("index {bad} out of range for length {}", seq.len())));
        }
        let mut acc = BitVector::zeros(seq.dim());
        for &i in &self.indices {
            acc ^= &seq.elements()[i];
        }
        if !acc.is_zero() {
            return Err(Error::Validation(format!("witnessed elements sum to {acc}")));
        }
        Ok(())
    }
}

impl fmt::Display for ZeroSumWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}
