use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// A set partition of `{0, …, k−1}` stored as a restricted-growth string.
///
/// Entry `r` is the index of the block containing `r`; blocks are numbered in
/// order of their least element, so the encoding is unique.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    rgs: Vec<u8>,
}

impl Partition {
    /// Normalizes an arbitrary block labelling into restricted-growth form.
    pub fn from_labels<T: PartialEq>(labels: &[T]) -> Self {
        let mut seen: Vec<&T> = Vec::new();
        let mut rgs = Vec::with_capacity(labels.len());
        for label in labels {
            let idx = match seen.iter().position(|s| *s == label) {
                Some(i) => i,
                None => {
                    seen.push(label);
                    seen.len() - 1
                }
            };
            rgs.push(idx as u8);
        }
        Partition { rgs }
    }

    /// Accepts a restricted-growth string, rejecting anything not in normal form.
    pub fn from_rgs(rgs: Vec<u8>) -> Result<Self> {
        let mut next = 0u8;
        for &b in &rgs {
            if b > next {
                return Err(Error::InvalidTemplate(alloc::format!(
                    "not a restricted-growth string: {rgs:?}"
                )));
            }
            if b == next {
                next += 1;
            }
        }
        Ok(Partition { rgs })
    }

    /// Builds a partition from explicit blocks covering `{0, …, k−1}` exactly once.
    pub fn from_blocks(k: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut label = vec![usize::MAX; k];
        for (bi, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidTemplate("empty block".into()));
            }
            for &r in block {
                if r >= k {
                    return Err(Error::InvalidTemplate(alloc::format!(
                        "point {r} out of range for k={k}"
                    )));
                }
                if label[r] != usize::MAX {
                    return Err(Error::InvalidTemplate(alloc::format!(
                        "point {r} appears in two blocks"
                    )));
                }
                label[r] = bi;
            }
        }
        if let Some(r) = label.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidTemplate(alloc::format!(
                "point {r} is not covered"
            )));
        }
        Ok(Self::from_labels(&label))
    }

    pub fn singletons(k: usize) -> Self {
        Partition {
            rgs: (0..k as u8).collect(),
        }
    }

    pub fn single_block(k: usize) -> Self {
        Partition { rgs: vec![0; k] }
    }

    pub fn len(&self) -> usize {
        self.rgs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rgs.is_empty()
    }

    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    pub fn block_of(&self, r: usize) -> usize {
        self.rgs[r] as usize
    }

    pub fn block_count(&self) -> usize {
        self.rgs.iter().map(|&b| b as usize + 1).max().unwrap_or(0)
    }

    pub fn same_block(&self, r: usize, s: usize) -> bool {
        self.rgs[r] == self.rgs[s]
    }

    pub fn is_singletons(&self) -> bool {
        self.block_count() == self.len()
    }

    /// Blocks sorted by least element, each block sorted.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (r, &b) in self.rgs.iter().enumerate() {
            out[b as usize].push(r);
        }
        out
    }

    /// Common refinement.
    pub fn meet(&self, other: &Partition) -> Partition {
        let pairs: Vec<(u8, u8)> = self.rgs.iter().copied().zip(other.rgs.iter().copied()).collect();
        Self::from_labels(&pairs)
    }

    /// True when every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        let mut image = vec![u8::MAX; self.block_count()];
        for (a, b) in self.rgs.iter().zip(&other.rgs) {
            let slot = &mut image[*a as usize];
            if *slot == u8::MAX {
                *slot = *b;
            } else if *slot != *b {
                return false;
            }
        }
        true
    }

    /// Relabels points: the point `r` becomes `perm[r]`.
    pub fn relabel(&self, perm: &[usize]) -> Partition {
        let mut labels = vec![0u8; self.len()];
        for (r, &b) in self.rgs.iter().enumerate() {
            labels[perm[r]] = b;
        }
        Self::from_labels(&labels)
    }
}

/// All set partitions of `{0, …, k−1}` in lexicographic restricted-growth order.
pub fn all_partitions(k: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    if k == 0 {
        out.push(Partition { rgs: Vec::new() });
        return out;
    }
    let mut rgs = vec![0u8; k];
    let mut maxes = vec![0u8; k];
    loop {
        out.push(Partition { rgs: rgs.clone() });
        // advance to the next restricted-growth string
        let mut i = k - 1;
        loop {
            if i == 0 {
                return out;
            }
            let bound = maxes[i - 1] + 1;
            if rgs[i] < bound {
                rgs[i] += 1;
                maxes[i] = maxes[i - 1].max(rgs[i]);
                for j in i + 1..k {
                    rgs[j] = 0;
                    maxes[j] = maxes[i];
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Lexicographic-order permutations of `0..k`.
pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return out;
        };
        let j = (i + 1..k).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
}

/// Subsets of `0..n` of size `r` in lexicographic order.
pub(crate) fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > n {
        return out;
    }
    let mut c: Vec<usize> = (0..r).collect();
    loop {
        out.push(c.clone());
        let Some(i) = (0..r).rev().find(|&i| c[i] < n - r + i) else {
            return out;
        };
        c[i] += 1;
        for j in i + 1..r {
            c[j] = c[j - 1] + 1;
        }
    }
}
