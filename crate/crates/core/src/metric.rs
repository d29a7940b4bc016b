//! Length vectors, telescopic metric data, and the sign-sum predicates built
//! on them: signed sums, long/short subsets, the genericity gap and the
//! critical telescopic lengths.

use std::collections::BTreeSet;
use std::fmt;

use num::{BigInt, Integer, One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Endpoint, Error, Result};
use crate::scalar::Scalar;
use crate::subset::{SubsetMask, MAX_LEGS};

/// Direct `2^n` enumeration is used up to this many legs.
pub const DIRECT_ENUMERATION_LIMIT: usize = 24;

/// Meet-in-the-middle keeps two tables of `2^(n/2)` sums; past this many legs
/// the tables no longer fit comfortably in memory.
const MEET_IN_THE_MIDDLE_LIMIT: usize = 44;

/// Reachability bitsets are used for the gap when the integer-scaled total is
/// at most this large.
const REACHABILITY_SUM_LIMIT: u64 = 1 << 26;

/// Ordered list of strictly positive exact lengths, indexed `1..=len`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LengthVector(Vec<Scalar>);

impl LengthVector {
    pub fn new(lengths: Vec<Scalar>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::InvalidLengths("no lengths given".into()));
        }
        if lengths.len() > MAX_LEGS {
            return Err(Error::Unsupported(format!(
                "at most {MAX_LEGS} legs are supported, got {}",
                lengths.len()
            )));
        }
        if let Some((i, bad)) = lengths.iter().enumerate().find(|(_, x)| !x.is_positive()) {
            return Err(Error::InvalidLengths(format!(
                "length {} (position {}) is not strictly positive",
                bad,
                i + 1
            )));
        }
        Ok(LengthVector(lengths))
    }

    /// Parses a comma-separated list such as `"4,8,10"`.
    pub fn parse(list: &str) -> Result<Self> {
        let lengths = list
            .split(',')
            .map(|item| item.trim().parse::<Scalar>())
            .collect::<Result<Vec<_>>>()
            .map_err(|e| match e {
                Error::Parse { input, reason, .. } => Error::Parse {
                    field: "lengths".into(),
                    input,
                    reason,
                },
                other => other,
            })?;
        Self::new(lengths)
    }

    pub fn from_strs(items: &[&str]) -> Result<Self> {
        Self::parse(&items.join(","))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Length of leg `i` (1-based).
    pub fn get(&self, i: usize) -> &Scalar {
        &self.0[i - 1]
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Scalar> {
        self.0.iter()
    }

    pub fn total(&self) -> Scalar {
        self.0.iter().sum()
    }

    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn with_appended(&self, x: Scalar) -> Result<Self> {
        let mut v = self.0.clone();
        v.push(x);
        Self::new(v)
    }

    /// Drops leg `i` (1-based).
    pub fn without(&self, i: usize) -> Result<Self> {
        let mut v = self.0.clone();
        v.remove(i - 1);
        Self::new(v)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(Scalar::to_f64).collect()
    }
}

impl fmt::Display for LengthVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl Serialize for LengthVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Metric data of a linkage with one telescopic leg: the fixed legs
/// `l_1 <= ... <= l_{n-1}` and the interval `[lo, hi]` for leg `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TelescopicData {
    fixed: LengthVector,
    lo: Scalar,
    hi: Scalar,
}

impl TelescopicData {
    pub fn new(fixed: LengthVector, lo: Scalar, hi: Scalar) -> Result<Self> {
        if fixed.len() < 2 {
            return Err(Error::InvalidLengths(format!(
                "a telescopic linkage needs at least 2 fixed legs, got {}",
                fixed.len()
            )));
        }
        if fixed.len() + 1 > MAX_LEGS {
            return Err(Error::Unsupported(format!(
                "at most {MAX_LEGS} legs are supported"
            )));
        }
        if !fixed.is_sorted() {
            return Err(Error::InvalidLengths(format!(
                "fixed lengths ({fixed}) must be sorted ascending"
            )));
        }
        if !lo.is_positive() {
            return Err(Error::InvalidLengths(format!(
                "lower telescopic bound {lo} must be positive"
            )));
        }
        if lo >= hi {
            return Err(Error::InvalidLengths(format!(
                "telescopic interval [{lo}, {hi}] must satisfy lo < hi"
            )));
        }
        Ok(TelescopicData { fixed, lo, hi })
    }

    /// Convenience constructor from decimal strings; the fixed list must
    /// already be sorted.
    pub fn parse(fixed: &str, lo: &str, hi: &str) -> Result<Self> {
        let lo = lo.parse().map_err(|e| rename_field(e, "tele_lo"))?;
        let hi = hi.parse().map_err(|e| rename_field(e, "tele_hi"))?;
        Self::new(LengthVector::parse(fixed)?, lo, hi)
    }

    /// Number of legs including the telescopic one.
    pub fn n(&self) -> usize {
        self.fixed.len() + 1
    }

    pub fn fixed(&self) -> &LengthVector {
        &self.fixed
    }

    pub fn lo(&self) -> &Scalar {
        &self.lo
    }

    pub fn hi(&self) -> &Scalar {
        &self.hi
    }

    /// The full length vector with the telescopic leg set to `x`.
    pub fn at(&self, x: &Scalar) -> LengthVector {
        let mut v = self.fixed.0.clone();
        v.push(x.clone());
        LengthVector(v)
    }

    /// `l^-`: the telescopic leg at its lower bound.
    pub fn lower(&self) -> LengthVector {
        self.at(&self.lo)
    }

    /// `l^+`: the telescopic leg at its upper bound.
    pub fn upper(&self) -> LengthVector {
        self.at(&self.hi)
    }

    pub fn endpoint(&self, which: Endpoint) -> LengthVector {
        match which {
            Endpoint::Lower => self.lower(),
            Endpoint::Upper => self.upper(),
        }
    }
}

fn rename_field(e: Error, field: &str) -> Error {
    match e {
        Error::Parse { input, reason, .. } => Error::Parse {
            field: field.into(),
            input,
            reason,
        },
        other => other,
    }
}

fn check_universe(l: &LengthVector, j: &SubsetMask) -> Result<()> {
    if j.universe() != l.len() {
        return Err(Error::SizeMismatch {
            expected: l.len(),
            found: j.universe(),
        });
    }
    Ok(())
}

/// `<l, eps_J>`: the sum of the lengths in `J` minus the sum of the rest.
pub fn signed_sum(l: &LengthVector, j: &SubsetMask) -> Result<Scalar> {
    check_universe(l, j)?;
    let mut sum = Scalar::zero();
    for (i, x) in l.iter().enumerate() {
        if j.contains(i + 1) {
            sum += x;
        } else {
            sum -= x;
        }
    }
    Ok(sum)
}

/// `J` is long when its signed sum is positive. A vanishing sum is reported
/// as [`Error::Degenerate`] instead of being broken one way or the other.
pub fn is_long(l: &LengthVector, j: &SubsetMask) -> Result<bool> {
    let sum = signed_sum(l, j)?;
    if sum.is_zero() {
        return Err(Error::Degenerate {
            subset: j.to_string(),
        });
    }
    Ok(sum.is_positive())
}

/// `J` is short when its complement is long.
pub fn is_short(l: &LengthVector, j: &SubsetMask) -> Result<bool> {
    check_universe(l, j)?;
    is_long(l, &j.complement())
}

/// Minimum of `|sum eps_i l_i|` over all sign vectors. Zero exactly when `l`
/// lies on a wall.
pub fn genericity_gap(l: &LengthVector) -> Result<Scalar> {
    Ok(gap_witness(l)?.0)
}

/// The gap together with a sign vector attaining it.
pub fn gap_witness(l: &LengthVector) -> Result<(Scalar, SubsetMask)> {
    let scaled = Scaled::new(l.as_slice());
    let n = l.len();
    let (gap, bits): (BigInt, u64) = if let Some(small) = scaled.small() {
        let (g, b) = if n <= DIRECT_ENUMERATION_LIMIT {
            gap_direct(&small)
        } else if let Some(found) = gap_reachability(&small) {
            found
        } else if n <= MEET_IN_THE_MIDDLE_LIMIT {
            gap_meet_in_the_middle(&small)
        } else {
            return Err(Error::Unsupported(format!(
                "genericity gap for {n} legs with large common denominator"
            )));
        };
        (BigInt::from(g), b)
    } else if n <= DIRECT_ENUMERATION_LIMIT {
        gap_direct(&scaled.numer)
    } else if n <= MEET_IN_THE_MIDDLE_LIMIT {
        gap_meet_in_the_middle(&scaled.numer)
    } else {
        return Err(Error::Unsupported(format!(
            "genericity gap for {n} legs with large common denominator"
        )));
    };
    Ok((
        scaled.unscale(&gap),
        SubsetMask::from_bits(n, bits)?,
    ))
}

/// Returns the offending sign vector if `l` is not generic.
pub fn vanishing_signs(l: &LengthVector) -> Result<Option<SubsetMask>> {
    let (gap, witness) = gap_witness(l)?;
    Ok(gap.is_zero().then_some(witness))
}

/// Fails with [`Error::NonGeneric`] if some signed sum of `l` vanishes.
pub fn ensure_generic(l: &LengthVector, which: Endpoint) -> Result<()> {
    match vanishing_signs(l)? {
        Some(signs) => Err(Error::NonGeneric {
            which,
            lengths: l.to_string(),
            signs: signs.signs(),
        }),
        None => Ok(()),
    }
}

/// Metric data is generic when neither endpoint vector has a vanishing
/// signed sum.
pub fn is_generic(a: &TelescopicData) -> bool {
    check_generic(a).is_ok()
}

/// Like [`is_generic`] but reports the offending endpoint and sign vector.
pub fn check_generic(a: &TelescopicData) -> Result<()> {
    ensure_generic(&a.lower(), Endpoint::Lower)?;
    ensure_generic(&a.upper(), Endpoint::Upper)
}

/// Sorted, deduplicated values `|sum eps_i l_i|` over all sign vectors on
/// the fixed legs: the telescopic lengths at which the topology can change.
pub fn critical_lengths(fixed: &LengthVector) -> Result<Vec<Scalar>> {
    let m = fixed.len();
    if m > DIRECT_ENUMERATION_LIMIT + 2 {
        return Err(Error::Unsupported(format!(
            "critical lengths of {m} fixed legs (2^{} values)",
            m - 1
        )));
    }
    let scaled = Scaled::new(fixed.as_slice());
    let values: Vec<BigInt> = match scaled.small() {
        Some(w) => critical_values(&w).into_iter().map(|v| v.to_bigint()).collect(),
        None => critical_values(&scaled.numer),
    };
    Ok(values.iter().map(|v| scaled.unscale(v)).collect())
}

fn critical_values<T: Weight>(w: &[T]) -> Vec<T> {
    // eps_1 = +1 without loss of generality: |sum| is symmetric.
    let total = w.iter().fold(T::zero(), |acc, x| acc + x.clone());
    let offset = w[0].clone() + w[0].clone() - total;
    let mut seen = BTreeSet::new();
    for_each_subset(&w[1..], |_, _, s| {
        seen.insert((s.clone() + s.clone() + offset.clone()).abs());
    });
    seen.into_iter().collect()
}

// ---------------------------------------------------------------------------
// Integer scaling and subset enumeration shared with the counting engines.

/// Integer weights usable by the enumeration engines.
pub(crate) trait Weight: Signed + Clone + Ord + Send + Sync + fmt::Debug {
    fn to_bigint(&self) -> BigInt;
    fn from_bigint(value: &BigInt) -> Option<Self>;
}

impl Weight for i128 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(value: &BigInt) -> Option<Self> {
        value.to_i128()
    }
}

impl Weight for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn from_bigint(value: &BigInt) -> Option<Self> {
        Some(value.clone())
    }
}

/// Lengths multiplied by the least common denominator.
#[derive(Clone, Debug)]
pub(crate) struct Scaled {
    pub numer: Vec<BigInt>,
    pub denom: BigInt,
}

impl Scaled {
    pub fn new(values: &[Scalar]) -> Self {
        let denom = values
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let numer = values
            .iter()
            .map(|x| x.numer() * (&denom / x.denom()))
            .collect();
        Scaled { numer, denom }
    }

    /// Machine-integer weights when every signed sum comfortably fits.
    pub fn small(&self) -> Option<Vec<i128>> {
        let total: BigInt = self.numer.iter().map(|x| x.abs()).sum();
        if total.bits() > 120 {
            return None;
        }
        self.numer.iter().map(|x| x.to_i128()).collect()
    }

    pub fn unscale(&self, value: &BigInt) -> Scalar {
        Scalar::from_big(num::BigRational::new(value.clone(), self.denom.clone()))
    }
}

/// Visits every subset of `weights` in Gray-code order as
/// `(mask, cardinality, sum)`, updating the sum by one weight per step.
pub(crate) fn for_each_subset<T: Weight>(weights: &[T], mut visit: impl FnMut(u64, usize, &T)) {
    let m = weights.len();
    assert!(m < 64, "too many weights for subset enumeration");
    let mut sum = T::zero();
    let mut mask = 0u64;
    visit(0, 0, &sum);
    for step in 1u64..(1u64 << m) {
        let bit = step.trailing_zeros() as usize;
        if mask & (1 << bit) != 0 {
            sum = sum - weights[bit].clone();
        } else {
            sum = sum + weights[bit].clone();
        }
        mask ^= 1 << bit;
        visit(mask, mask.count_ones() as usize, &sum);
    }
}

/// Gap by direct enumeration with the last sign pinned to `+1`. Returns the
/// scaled gap and the bits of the positive indices.
fn gap_direct<T: Weight>(w: &[T]) -> (T, u64) {
    let n = w.len();
    let last = n - 1;
    let total = w.iter().fold(T::zero(), |acc, x| acc + x.clone());
    // sum = 2 S(J) - total + 2 w_last, with J ranging over the first n-1.
    let offset = w[last].clone() + w[last].clone() - total;
    let mut best: Option<(T, u64)> = None;
    for_each_subset(&w[..last], |mask, _, s| {
        let value = (s.clone() + s.clone() + offset.clone()).abs();
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, mask));
        }
    });
    let (gap, mask) = best.expect("at least one subset");
    (gap, orient(mask, n, gap_sign_positive(&w[..last], mask, &offset)))
}

fn gap_sign_positive<T: Weight>(w: &[T], mask: u64, offset: &T) -> bool {
    let s = w
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .fold(T::zero(), |acc, (_, x)| acc + x.clone());
    !(s.clone() + s + offset.clone()).is_negative()
}

/// Turns "positive indices among the first n-1, last pinned positive" into
/// the sign vector whose signed sum is nonnegative.
fn orient(mask: u64, n: usize, nonnegative: bool) -> u64 {
    let full = mask | (1 << (n - 1));
    if nonnegative {
        full
    } else {
        !full & ((1u64 << n) - 1)
    }
}

fn gap_meet_in_the_middle<T: Weight>(w: &[T]) -> (T, u64) {
    let n = w.len();
    let last = n - 1;
    let total = w.iter().fold(T::zero(), |acc, x| acc + x.clone());
    let offset = w[last].clone() + w[last].clone() - total;
    let free = &w[..last];
    let half = free.len() / 2;
    let (left, right) = free.split_at(half);

    let collect = |part: &[T]| {
        let mut out = Vec::with_capacity(1 << part.len());
        for_each_subset(part, |mask, _, s| out.push((s.clone() + s.clone(), mask)));
        out
    };
    let lefts = collect(left);
    let mut rights = collect(right);
    rights.sort();

    // minimise |a + b + offset| with a, b doubled subset sums
    let mut best: Option<(T, u64)> = None;
    for (a, amask) in &lefts {
        let target = -(a.clone() + offset.clone());
        let pos = rights.partition_point(|(b, _)| *b < target);
        for idx in [pos.checked_sub(1), Some(pos)].into_iter().flatten() {
            if let Some((b, bmask)) = rights.get(idx) {
                let value = (a.clone() + b.clone() + offset.clone()).abs();
                if best.as_ref().is_none_or(|(v, _)| value < *v) {
                    best = Some((value, amask | (bmask << half)));
                }
            }
        }
    }
    let (gap, mask) = best.expect("at least one subset");
    (gap, orient(mask, n, gap_sign_positive(free, mask, &offset)))
}

/// Gap via a reachable-sum table, for integer weights with a small total.
fn gap_reachability(w: &[i128]) -> Option<(i128, u64)> {
    let n = w.len();
    let last = n - 1;
    let weights: Vec<u64> = w[..last]
        .iter()
        .map(|&x| u64::try_from(x).ok())
        .collect::<Option<_>>()?;
    let free_total: u64 = weights.iter().sum();
    if free_total > REACHABILITY_SUM_LIMIT {
        return None;
    }
    // first_item[s] = 1 + index of the weight that first made s reachable
    let mut first_item = vec![0u8; free_total as usize + 1];
    let mut reachable = vec![false; free_total as usize + 1];
    reachable[0] = true;
    for (idx, &wi) in weights.iter().enumerate() {
        for s in (wi as usize..=free_total as usize).rev() {
            if !reachable[s] && reachable[s - wi as usize] {
                reachable[s] = true;
                first_item[s] = (idx + 1) as u8;
            }
        }
    }
    let total: i128 = w.iter().sum();
    let offset = 2 * w[last] - total;
    let (best_sum, gap) = reachable
        .iter()
        .enumerate()
        .filter(|(_, &r)| r)
        .map(|(s, _)| (s, (2 * s as i128 + offset).abs()))
        .min_by_key(|&(_, g)| g)?;

    let mut mask = 0u64;
    let mut s = best_sum;
    while s > 0 {
        let idx = first_item[s] as usize - 1;
        mask |= 1 << idx;
        s -= weights[idx] as usize;
    }
    let nonnegative = 2 * best_sum as i128 + offset >= 0;
    Some((gap, orient(mask, n, nonnegative)))
}
