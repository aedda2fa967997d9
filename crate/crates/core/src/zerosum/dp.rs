//! Exact subset-sum machinery over `Z_2^d` with elements packed into
//! integers (bit `i` is coordinate `i`).

use crate::error::{Error, Result};
use crate::gf2::BitVector;

use super::sequence::{GroupSequence, ZeroSumWitness};

/// Largest dimension the dense tables accept.
pub const MAX_DP_DIM: usize = 24;
/// Cap on reachability table size, in bits.
pub const MAX_DP_BITS: u128 = 1 << 31;

const BUTTERFLY: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

/// Permutes bit positions of `x` by `p -> p ^ low` for `low < 64`.
fn xor_permute_word(mut x: u64, low: usize) -> u64 {
    for (k, &mask) in BUTTERFLY.iter().enumerate() {
        if low >> k & 1 == 1 {
            let s = 1 << k;
            x = ((x & mask) << s) | ((x >> s) & mask);
        }
    }
    x
}

/// `dst |= {g ^ v : g in src}` on packed bitsets over the group.
fn or_translated(dst: &mut [u64], src: &[u64], v: usize) {
    let (high, low) = (v >> 6, v & 63);
    for (w, &word) in src.iter().enumerate() {
        if word != 0 {
            dst[w ^ high] |= xor_permute_word(word, low);
        }
    }
}

fn contains(set: &[u64], g: usize) -> bool {
    set[g >> 6] >> (g & 63) & 1 == 1
}

pub(crate) fn pack(v: &BitVector) -> usize {
    v.to_u64().expect("dimension checked against the dp guard") as usize
}

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if d > MAX_DP_DIM {
        return Err(Error::Guard {
            what: "group dimension",
            value: d,
            limit: MAX_DP_DIM,
        });
    }
    Ok(())
}

/// Finds `r` positions of `seq` whose elements sum to zero.
///
/// Among all such index sets the one returned is lexicographically
/// smallest: every position is taken as early as the remaining suffix
/// allows.
pub fn dp_zero_sum_witness(seq: &GroupSequence, r: usize) -> Result<Option<ZeroSumWitness>> {
    let d = seq.dim();
    check_dim(d)?;
    let n = seq.len();
    if r > n {
        return Ok(None);
    }
    let bits = (n as u128 + 1) * (r as u128 + 1) * (1u128 << d);
    if bits > MAX_DP_BITS {
        return Err(Error::Guard {
            what: "dp table bits (log2)",
            value: 128 - bits.leading_zeros() as usize,
            limit: 31,
        });
    }
    let elems: Vec<usize> = seq.elements().iter().map(pack).collect();
    let words = ((1usize << d) + 63) / 64;
    let layer = (r + 1) * words;
    // reach[i][c]: sums of c-element subsets of positions i..n.
    let mut reach = vec![0u64; (n + 1) * layer];
    reach[n * layer] = 1;
    for i in (0..n).rev() {
        let (head, tail) = reach.split_at_mut((i + 1) * layer);
        let next = &tail[..layer];
        let cur = &mut head[i * layer..];
        cur.copy_from_slice(next);
        for c in 1..=r {
            or_translated(&mut cur[c * words..(c + 1) * words], &next[(c - 1) * words..c * words], elems[i]);
        }
    }
    if !contains(&reach[r * words..(r + 1) * words], 0) {
        return Ok(None);
    }
    let (mut need, mut g, mut picked) = (r, 0usize, Vec::with_capacity(r));
    for (i, &e) in elems.iter().enumerate() {
        if need == 0 {
            break;
        }
        let next = &reach[(i + 1) * layer..(i + 2) * layer];
        if contains(&next[(need - 1) * words..need * words], g ^ e) {
            picked.push(i);
            g ^= e;
            need -= 1;
        }
    }
    debug_assert!(need == 0 && g == 0);
    ZeroSumWitness::new(picked).map(Some)
}

/// Whether `seq` has a zero-sum subsequence of length exactly `r`.
pub fn has_zero_sum(seq: &GroupSequence, r: usize) -> Result<bool> {
    Ok(dp_zero_sum_witness(seq, r)?.is_some())
}

/// Incremental counts of `j`-element sub-multisets by sum, for
/// `j <= max_size`. Wrapping arithmetic keeps add/remove exact inverses.
#[derive(Clone, Debug)]
pub(crate) struct SubsetCounter {
    group: usize,
    max_size: usize,
    counts: Vec<u64>,
}

impl SubsetCounter {
    pub(crate) fn new(d: usize, max_size: usize) -> Self {
        let group = 1usize << d;
        let mut counts = vec![0u64; (max_size + 1) * group];
        counts[0] = 1;
        Self {
            group,
            max_size,
            counts,
        }
    }

    #[inline]
    pub(crate) fn count(&self, size: usize, g: usize) -> u64 {
        self.counts[size * self.group + g]
    }

    pub(crate) fn add(&mut self, v: usize) {
        let n = self.group;
        for j in (1..=self.max_size).rev() {
            let (lo, hi) = self.counts.split_at_mut(j * n);
            let prev = &lo[(j - 1) * n..];
            let cur = &mut hi[..n];
            for (g, c) in cur.iter_mut().enumerate() {
                *c = c.wrapping_add(prev[g ^ v]);
            }
        }
    }

    pub(crate) fn remove(&mut self, v: usize) {
        let n = self.group;
        for j in 1..=self.max_size {
            let (lo, hi) = self.counts.split_at_mut(j * n);
            let prev = &lo[(j - 1) * n..];
            let cur = &mut hi[..n];
            for (g, c) in cur.iter_mut().enumerate() {
                *c = c.wrapping_sub(prev[g ^ v]);
            }
        }
    }
}

/// Sizes in `sizes` for which some sub-multiset of `elems` sums to zero.
pub(crate) fn zero_sum_sizes(d: usize, elems: &[usize], sizes: &[usize]) -> Vec<usize> {
    let max = sizes.iter().copied().max().unwrap_or(0).min(elems.len());
    let mut counter = SubsetCounter::new(d, max);
    for &e in elems {
        counter.add(e);
    }
    sizes
        .iter()
        .copied()
        .filter(|&w| w >= 1 && w <= max && counter.count(w, 0) > 0)
        .collect()
}

/// Checks that `elems` are distinct vectors of dimension `d` with no
/// zero-sum subset of any size in `sizes`.
pub fn validate_set(d: usize, elems: &[BitVector], sizes: &[usize]) -> Result<()> {
    check_dim(d)?;
    if let Some(bad) = elems.iter().find(|e| e.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bad.dim(),
        });
    }
    let mut packed: Vec<usize> = elems.iter().map(pack).collect();
    packed.sort_unstable();
    if packed.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Validation("set has a repeated element".into()));
    }
    let bad = zero_sum_sizes(d, &packed, sizes);
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(format!("zero-sum subsets of sizes {bad:?}")))
    }
}
