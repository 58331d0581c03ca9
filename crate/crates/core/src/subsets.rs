//! Subset enumeration and small coordinate bitmasks.

use crate::error::{Error, Result};

/// Coordinates are packed into a `u128` for the exhaustive searches.
pub(crate) type Mask = u128;

pub(crate) const MAX_MASK_LEN: usize = 128;

pub(crate) fn check_mask_len(n: usize) -> Result<()> {
    if n > MAX_MASK_LEN {
        return Err(Error::Capacity {
            what: "code length for exhaustive search",
            actual: n,
            limit: MAX_MASK_LEN,
        });
    }
    Ok(())
}

pub(crate) fn mask_of(items: &[usize]) -> Mask {
    items.iter().fold(0, |m, &i| m | 1 << i)
}

pub(crate) fn items_of(mut m: Mask) -> Vec<usize> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

pub(crate) fn full_mask(n: usize) -> Mask {
    if n == 128 {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

/// Lexicographic `size`-subsets of `0..n`.
pub(crate) struct Combinations {
    n: usize,
    idx: Vec<usize>,
    first: bool,
    done: bool,
}

impl Combinations {
    pub(crate) fn new(n: usize, size: usize) -> Self {
        Combinations {
            n,
            idx: (0..size).collect(),
            first: true,
            done: size > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if self.first {
            self.first = false;
            return Some(self.idx.clone());
        }
        let k = self.idx.len();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return Some(self.idx.clone());
            }
        }
        self.done = true;
        None
    }
}

/// All nonempty subsets of `0..n` of size at most `max`, by size then
/// lexicographically.
pub(crate) fn subsets_up_to(n: usize, max: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..=max.min(n)).flat_map(move |s| Combinations::new(n, s))
}

/// `C(n, s)` saturating at `u64::MAX`.
pub(crate) fn binomial(n: usize, s: usize) -> u64 {
    if s > n {
        return 0;
    }
    let s = s.min(n - s);
    let mut acc: u128 = 1;
    for i in 0..s {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// `sum_{s=lo}^{hi} C(n, s)` saturating.
pub(crate) fn binomial_sum(n: usize, lo: usize, hi: usize) -> u64 {
    (lo..=hi.min(n)).fold(0u64, |acc, s| acc.saturating_add(binomial(n, s)))
}
