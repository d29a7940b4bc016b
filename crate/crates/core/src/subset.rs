use std::fmt;

use crate::error::{Error, Result};

/// Largest universe a [`SubsetMask`] can describe.
pub const MAX_LEGS: usize = 63;

/// A subset `J` of `{1, ..., n}` stored as a bit set.
///
/// Indices are 1-based everywhere in the public API. The mask also stands for
/// the sign vector with `+1` on `J` and `-1` off it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    bits: u64,
    n: usize,
}

impl SubsetMask {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_LEGS {
            return Err(Error::Unsupported(format!(
                "at most {MAX_LEGS} legs are supported, got {n}"
            )));
        }
        Ok(SubsetMask { bits: 0, n })
    }

    pub fn full(n: usize) -> Result<Self> {
        Ok(Self::empty(n)?.complement())
    }

    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self> {
        let mut mask = Self::empty(n)?;
        for &i in indices {
            mask.insert(i)?;
        }
        Ok(mask)
    }

    /// Builds a mask from raw bits, where bit `i - 1` stands for index `i`.
    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        let mask = Self::empty(n)?;
        if bits & !mask.universe_bits() != 0 {
            return Err(Error::Contract(format!(
                "bits {bits:#x} fall outside the universe 1..={n}"
            )));
        }
        Ok(SubsetMask { bits, n })
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    fn universe_bits(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::Contract(format!(
                "index {i} outside 1..={}",
                self.n
            )));
        }
        Ok(())
    }

    pub fn insert(&mut self, i: usize) -> Result<()> {
        self.check_index(i)?;
        self.bits |= 1 << (i - 1);
        Ok(())
    }

    pub fn remove(&mut self, i: usize) -> Result<()> {
        self.check_index(i)?;
        self.bits &= !(1 << (i - 1));
        Ok(())
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && i <= self.n && self.bits & (1 << (i - 1)) != 0
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn complement(&self) -> Self {
        SubsetMask {
            bits: !self.bits & self.universe_bits(),
            n: self.n,
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.same_universe(other)?;
        Ok(SubsetMask {
            bits: self.bits | other.bits,
            n: self.n,
        })
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.same_universe(other)?;
        Ok(SubsetMask {
            bits: self.bits & other.bits,
            n: self.n,
        })
    }

    fn same_universe(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n).filter(move |&i| self.contains(i))
    }

    /// The sign vector: `+1` for members, `-1` for the rest.
    pub fn signs(&self) -> Vec<i8> {
        (1..=self.n)
            .map(|i| if self.contains(i) { 1 } else { -1 })
            .collect()
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (pos, i) in self.iter().enumerate() {
            if pos > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}
