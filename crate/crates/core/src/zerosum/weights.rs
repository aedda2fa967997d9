use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A sorted set of forbidden zero-sum sizes.
///
/// At least one member is even: an all-odd `W` never interacts with the
/// sequence constants and is rejected.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightSet {
    sizes: Vec<usize>,
}

impl WeightSet {
    pub fn new(mut sizes: Vec<usize>) -> Result<Self> {
        sizes.sort_unstable();
        sizes.dedup();
        if sizes.first() == Some(&0) {
            return Err(Error::Precondition("zero is not a subset size".into()));
        }
        if !sizes.iter().any(|w| w % 2 == 0) {
            return Err(Error::Precondition(format!("weight set {sizes:?} has no even member")));
        }
        Ok(Self { sizes })
    }

    /// `{2m}`.
    ///
    /// # Panics
    /// Panics if `m == 0`.
    #[must_use]
    pub fn single(m: usize) -> Self {
        assert!(m >= 1, "m must be positive");
        Self { sizes: vec![2 * m] }
    }

    /// `2[j,m] = {2j, 2j+2, ..., 2m}`.
    ///
    /// # Panics
    /// Panics unless `1 <= j <= m`.
    #[must_use]
    pub fn even_range(j: usize, m: usize) -> Self {
        assert!(1 <= j && j <= m, "need 1 <= j <= m");
        Self {
            sizes: (j..=m).map(|i| 2 * i).collect(),
        }
    }

    /// `[1,2m] = {1, 2, ..., 2m}`.
    ///
    /// # Panics
    /// Panics if `m == 0`.
    #[must_use]
    pub fn initial(m: usize) -> Self {
        assert!(m >= 1, "m must be positive");
        Self {
            sizes: (1..=2 * m).collect(),
        }
    }

    #[must_use]
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    #[must_use]
    pub fn contains(&self, w: usize) -> bool {
        self.sizes.binary_search(&w).is_ok()
    }

    #[must_use]
    pub fn max(&self) -> usize {
        *self.sizes.last().expect("weight sets are nonempty")
    }

    #[must_use]
    pub fn min(&self) -> usize {
        self.sizes[0]
    }

    #[must_use]
    pub fn all_even(&self) -> bool {
        self.sizes.iter().all(|w| w % 2 == 0)
    }

    /// The equivalent set for subsets of a set: pairs of distinct elements
    /// never sum to zero, so a 2 is dropped whenever something else remains.
    #[must_use]
    pub fn for_sets(&self) -> Self {
        if self.sizes.len() > 1 && self.contains(2) {
            let sizes: Vec<usize> = self.sizes.iter().copied().filter(|&w| w != 2).collect();
            if sizes.iter().any(|w| w % 2 == 0) {
                return Self { sizes };
            }
        }
        self.clone()
    }

    /// Recognizes `{2m}`, `2[j,m]` and `[1,2m]`, returning `m`.
    #[must_use]
    pub fn shape(&self) -> Option<WeightShape> {
        let s = &self.sizes;
        let m = self.max() / 2;
        if self.max() % 2 == 1 {
            return None;
        }
        if s.len() == 1 {
            return Some(WeightShape::Single { m });
        }
        if s == &(1..=2 * m).collect::<Vec<_>>() {
            return Some(WeightShape::Initial { m });
        }
        let j = s[0] / 2;
        if s[0] % 2 == 0 && s == &(j..=m).map(|i| 2 * i).collect::<Vec<_>>() {
            return Some(WeightShape::EvenRange { j, m });
        }
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightShape {
    Single { m: usize },
    EvenRange { j: usize, m: usize },
    Initial { m: usize },
}

impl fmt::Display for WeightSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for WeightSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let sizes = s
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|e| Error::Parse(format!("weight {p:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(sizes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_and_shapes() {
        assert_eq!(WeightSet::even_range(2, 4).sizes(), &[4, 6, 8]);
        assert_eq!(WeightSet::initial(2).sizes(), &[1, 2, 3, 4]);
        assert_eq!(WeightSet::single(3).shape(), Some(WeightShape::Single { m: 3 }));
        assert_eq!(WeightSet::initial(2).shape(), Some(WeightShape::Initial { m: 2 }));
        assert_eq!(WeightSet::even_range(1, 3).shape(), Some(WeightShape::EvenRange { j: 1, m: 3 }));
        assert_eq!("2,6".parse::<WeightSet>().unwrap().shape(), None);
    }

    #[test]
    fn rejects_bad_sets() {
        assert!("1,3".parse::<WeightSet>().is_err());
        assert!("0,2".parse::<WeightSet>().is_err());
        assert!("x".parse::<WeightSet>().is_err());
        assert_eq!("4, 2,4".parse::<WeightSet>().unwrap().to_string(), "2,4");
    }

    #[test]
    fn set_normalization_drops_pairs() {
        assert_eq!(WeightSet::even_range(1, 2).for_sets(), WeightSet::single(2));
        assert_eq!(WeightSet::single(1).for_sets(), WeightSet::single(1));
        assert_eq!("1,2".parse::<WeightSet>().unwrap().for_sets().sizes(), &[1, 2]);
    }
}
