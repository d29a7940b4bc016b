//! Counts of long and short subsets by cardinality.
//!
//! Three families are counted, each for every `k` at once:
//!
//! * `alpha_k(l)`: subsets `J` of `{1..n-1}` with `|J| = n-k-1` that are long.
//! * `beta_k(first, second)`: subsets `J` of `{1..n-2}` with `|J| = n-k-2`
//!   such that `J + {n}` is short for `first` and `J + {n-1}` is long for
//!   `second`.
//! * `a_k(l)`: short `(k+1)`-subsets containing the index of the longest leg.
//!
//! Each family reduces to counting subsets of some weights whose doubled sum
//! falls strictly inside a window. Two engines do that: plain bitmask
//! enumeration and a subset-sum table indexed by (cardinality, sum) for
//! lengths that scale to small integers.

use num::{BigInt, ToPrimitive};
use serde::Serialize;

use crate::error::{Endpoint, Error, Result};
use crate::metric::{ensure_generic, for_each_subset, LengthVector, Scaled, Weight};

/// Default cap on `(weights + 1) * (total + 1)` cells for the table engine.
pub const DEFAULT_DP_CELL_LIMIT: usize = 1 << 24;

/// Enumeration refuses more free weights than this.
const ENUMERATION_WEIGHT_LIMIT: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    /// Table engine when the scaled total is small enough, else enumeration.
    #[default]
    Auto,
    Enumerate,
    SubsetSumDp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountKind {
    Alpha,
    Beta,
    AFixed,
}

/// Counts indexed by `k`; out-of-range `k` reads as zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountTable {
    pub kind: CountKind,
    pub values: Vec<u64>,
    /// The length vectors the counts were taken from.
    pub provenance: Vec<String>,
}

impl CountTable {
    pub fn get(&self, k: i64) -> u64 {
        usize::try_from(k)
            .ok()
            .and_then(|k| self.values.get(k).copied())
            .unwrap_or(0)
    }
}

/// Strict window `lower < 2 * sum < upper` in scaled units.
#[derive(Clone, Debug)]
struct Window {
    lower: Option<BigInt>,
    upper: Option<BigInt>,
}

#[derive(Clone, Debug)]
pub struct Counter {
    engine: Engine,
    dp_cell_limit: usize,
}

impl Default for Counter {
    fn default() -> Self {
        Counter {
            engine: Engine::Auto,
            dp_cell_limit: DEFAULT_DP_CELL_LIMIT,
        }
    }
}

impl Counter {
    pub fn new(engine: Engine) -> Self {
        Counter {
            engine,
            ..Counter::default()
        }
    }

    pub fn with_dp_cell_limit(mut self, limit: usize) -> Self {
        self.dp_cell_limit = limit;
        self
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    pub fn alpha(&self, l: &LengthVector, k: i64) -> Result<u64> {
        Ok(self.alpha_table(l)?.get(k))
    }

    pub fn beta(&self, first: &LengthVector, second: &LengthVector, k: i64) -> Result<u64> {
        Ok(self.beta_table(first, second)?.get(k))
    }

    pub fn a_fixed(&self, l: &LengthVector, k: i64) -> Result<u64> {
        Ok(self.a_fixed_table(l)?.get(k))
    }

    /// `alpha_k(l)` for `k = 0..=n-2`.
    pub fn alpha_table(&self, l: &LengthVector) -> Result<CountTable> {
        check_min_len(l, 2)?;
        ensure_generic(l, Endpoint::Lower)?;
        self.alpha_table_unchecked(l)
    }

    pub(crate) fn alpha_table_unchecked(&self, l: &LengthVector) -> Result<CountTable> {
        let n = l.len();
        let scaled = Scaled::new(l.as_slice());
        let total: BigInt = scaled.numer.iter().sum();
        // <l, eps_J> = 2 S(J) - total > 0 for J inside {1..n-1}
        let window = Window {
            lower: Some(total),
            upper: None,
        };
        let by_card = self.count(&scaled.numer[..n - 1], &window, &index_range(1, n - 1))?;
        let values = (0..=n - 2).map(|k| by_card[n - k - 1]).collect();
        Ok(CountTable {
            kind: CountKind::Alpha,
            values,
            provenance: vec![l.to_string()],
        })
    }

    /// `beta_k(first, second)` for `k = 0..=n-2`; `first` plays the role of
    /// `l^+` in the two defining inequalities.
    pub fn beta_table(&self, first: &LengthVector, second: &LengthVector) -> Result<CountTable> {
        check_compatible(first, second)?;
        ensure_generic(first, Endpoint::Upper)?;
        ensure_generic(second, Endpoint::Lower)?;
        self.beta_table_unchecked(first, second)
    }

    pub(crate) fn beta_table_unchecked(
        &self,
        first: &LengthVector,
        second: &LengthVector,
    ) -> Result<CountTable> {
        let n = first.len();
        let mut joint = first.as_slice().to_vec();
        joint.push(second.get(n).clone());
        let scaled = Scaled::new(&joint);
        let free = &scaled.numer[..n - 2];
        let free_total: BigInt = free.iter().sum();
        let pivot = &scaled.numer[n - 2];
        let first_tele = &scaled.numer[n - 1];
        let second_tele = &scaled.numer[n];
        // J + {n} short for first:   2s - F - l_{n-1} + p < 0
        // J + {n-1} long for second: 2s - F + l_{n-1} - q > 0
        let window = Window {
            lower: Some(&free_total - pivot + second_tele),
            upper: Some(&free_total + pivot - first_tele),
        };
        let by_card = self.count(free, &window, &index_range(1, n - 2))?;
        let values = (0..=n - 2).map(|k| by_card[n - k - 2]).collect();
        Ok(CountTable {
            kind: CountKind::Beta,
            values,
            provenance: vec![first.to_string(), second.to_string()],
        })
    }

    /// `a_k(l)` for `k = 0..=n-2`. The longest leg is the largest index among
    /// the maximal entries.
    pub fn a_fixed_table(&self, l: &LengthVector) -> Result<CountTable> {
        check_min_len(l, 2)?;
        ensure_generic(l, Endpoint::Lower)?;
        self.a_fixed_table_unchecked(l)
    }

    pub(crate) fn a_fixed_table_unchecked(&self, l: &LengthVector) -> Result<CountTable> {
        let n = l.len();
        let longest = longest_index(l);
        let scaled = Scaled::new(l.as_slice());
        let total: BigInt = scaled.numer.iter().sum();
        let pinned = &scaled.numer[longest - 1];
        let others: Vec<BigInt> = scaled
            .numer
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != longest - 1)
            .map(|(_, x)| x.clone())
            .collect();
        let indices: Vec<usize> = (1..=n).filter(|&i| i != longest).collect();
        // K = J + {longest} short: 2 (w + s) - total < 0
        let window = Window {
            lower: None,
            upper: Some(total - pinned - pinned),
        };
        let by_card = self.count(&others, &window, &indices)?;
        let values = (0..=n - 2).map(|k| by_card[k]).collect();
        Ok(CountTable {
            kind: CountKind::AFixed,
            values,
            provenance: vec![l.to_string()],
        })
    }

    /// Subsets of `weights` counted by cardinality, restricted to the window.
    /// `indices` names the weights for error messages.
    fn count(&self, weights: &[BigInt], window: &Window, indices: &[usize]) -> Result<Vec<u64>> {
        let table = match self.engine {
            Engine::SubsetSumDp => Some(self.dp_weights(weights, usize::MAX).ok_or_else(|| {
                Error::Unsupported(
                    "subset-sum table needs nonnegative integer-scaled weights".into(),
                )
            })?),
            Engine::Auto => self.dp_weights(weights, self.dp_cell_limit),
            Engine::Enumerate => None,
        };
        let outcome = match table {
            Some(w) => count_dp(&w, window),
            None => {
                if weights.len() > ENUMERATION_WEIGHT_LIMIT {
                    return Err(Error::Unsupported(format!(
                        "enumerating 2^{} subsets; lengths do not scale to a small integer total",
                        weights.len()
                    )));
                }
                let small: Option<Vec<i128>> = weights.iter().map(|x| x.to_i128()).collect();
                match small {
                    Some(w) => count_enumerate(&w, window),
                    None => count_enumerate(weights, window),
                }
            }
        };
        outcome.map_err(|mask| Error::Degenerate {
            subset: describe(mask, indices),
        })
    }

    fn dp_weights(&self, weights: &[BigInt], cell_limit: usize) -> Option<Vec<u64>> {
        let w: Vec<u64> = weights
            .iter()
            .map(ToPrimitive::to_u64)
            .collect::<Option<_>>()?;
        let total = w.iter().try_fold(0u64, |acc, &x| acc.checked_add(x))?;
        let cells = (w.len() as u128 + 1) * (total as u128 + 1);
        (cells <= cell_limit as u128).then_some(w)
    }
}

fn describe(mask: u64, indices: &[usize]) -> String {
    let members: Vec<String> = indices
        .iter()
        .enumerate()
        .filter(|(pos, _)| mask & (1 << pos) != 0)
        .map(|(_, i)| i.to_string())
        .collect();
    format!("{{{}}} among {:?}", members.join(","), indices)
}

fn index_range(from: usize, to: usize) -> Vec<usize> {
    (from..=to).collect()
}

fn check_min_len(l: &LengthVector, min: usize) -> Result<()> {
    if l.len() < min {
        return Err(Error::InvalidLengths(format!(
            "need at least {min} lengths, got {}",
            l.len()
        )));
    }
    Ok(())
}

fn check_compatible(first: &LengthVector, second: &LengthVector) -> Result<()> {
    if first.len() != second.len() {
        return Err(Error::SizeMismatch {
            expected: first.len(),
            found: second.len(),
        });
    }
    check_min_len(first, 3)?;
    let n = first.len();
    if first.as_slice()[..n - 1] != second.as_slice()[..n - 1] {
        return Err(Error::Contract(format!(
            "vectors ({first}) and ({second}) must agree on legs 1..{}",
            n - 1
        )));
    }
    Ok(())
}

/// Largest index among the maximal entries.
pub fn longest_index(l: &LengthVector) -> usize {
    let max = l.iter().max().expect("nonempty length vector");
    (1..=l.len()).rev().find(|&i| l.get(i) == max).unwrap()
}

/// Bitmask enumeration. `Err(mask)` on a subset whose doubled sum hits a
/// window edge.
fn count_enumerate<T: Weight>(weights: &[T], window: &Window) -> Result<Vec<u64>, u64> {
    // Window edges are sums of at most three weights, so they fit whenever the
    // weights were narrowed to machine integers.
    let convert = |b: &Option<BigInt>| -> Option<T> {
        b.as_ref()
            .map(|x| T::from_bigint(x).expect("window edge fits the weight type"))
    };
    let lower = convert(&window.lower);
    let upper = convert(&window.upper);
    let mut counts = vec![0u64; weights.len() + 1];
    let mut degenerate = None;
    for_each_subset(weights, |mask, card, s| {
        let doubled = s.clone() + s.clone();
        if lower.as_ref() == Some(&doubled) || upper.as_ref() == Some(&doubled) {
            degenerate.get_or_insert(mask);
            return;
        }
        let above = lower.as_ref().is_none_or(|lo| doubled > *lo);
        let below = upper.as_ref().is_none_or(|hi| doubled < *hi);
        if above && below {
            counts[card] += 1;
        }
    });
    match degenerate {
        Some(mask) => Err(mask),
        None => Ok(counts),
    }
}

/// Subset-sum table over (cardinality, sum), then a window scan per
/// cardinality. `Err(mask)` marks a window edge that is hit; the mask is
/// recovered from the table.
fn count_dp(weights: &[u64], window: &Window) -> Result<Vec<u64>, u64> {
    let m = weights.len();
    let total: u64 = weights.iter().sum();
    let width = total as usize + 1;
    // table[c * width + s] = number of c-subsets with sum s
    let mut table = vec![0u64; (m + 1) * width];
    table[0] = 1;
    let mut reach = 0usize;
    for &w in weights {
        let w = w as usize;
        reach += w;
        for c in (1..=m).rev() {
            let (below, here) = table.split_at_mut(c * width);
            let prev = &below[(c - 1) * width..];
            let row = &mut here[..width];
            for s in (w..=reach).rev() {
                row[s] += prev[s - w];
            }
        }
    }

    // doubled sums strictly inside (lower, upper)
    let edge = |b: &Option<BigInt>| b.as_ref().map(|x| x.to_i128().unwrap_or(i128::MAX));
    let lower = edge(&window.lower);
    let upper = edge(&window.upper);
    for bound in [lower, upper].into_iter().flatten() {
        if bound >= 0 && bound % 2 == 0 && bound / 2 <= total as i128 {
            let s = (bound / 2) as usize;
            if let Some(c) = (0..=m).find(|&c| table[c * width + s] > 0) {
                return Err(recover_mask(weights, s, c));
            }
        }
    }
    let first = match lower {
        None => 0i128,
        Some(lo) => lo.div_euclid(2) + 1,
    }
    .max(0);
    let last = match upper {
        None => total as i128,
        Some(hi) => (hi - 1).div_euclid(2),
    }
    .min(total as i128);
    let mut counts = vec![0u64; m + 1];
    if first <= last {
        for (c, count) in counts.iter_mut().enumerate() {
            let row = &table[c * width..(c + 1) * width];
            *count = row[first as usize..=last as usize].iter().sum();
        }
    }
    Ok(counts)
}

/// Some subset of `weights` with `card` elements summing to `target`.
fn recover_mask(weights: &[u64], target: usize, card: usize) -> u64 {
    fn search(w: &[u64], idx: usize, target: u64, card: usize, mask: u64) -> Option<u64> {
        if card == 0 {
            return (target == 0).then_some(mask);
        }
        if idx == w.len() {
            return None;
        }
        if w[idx] <= target {
            if let Some(found) = search(w, idx + 1, target - w[idx], card - 1, mask | (1 << idx)) {
                return Some(found);
            }
        }
        search(w, idx + 1, target, card, mask)
    }
    search(weights, 0, target as u64, card, 0).unwrap_or(0)
}

pub fn alpha(l: &LengthVector, k: i64) -> Result<u64> {
    Counter::default().alpha(l, k)
}

pub fn beta(first: &LengthVector, second: &LengthVector, k: i64) -> Result<u64> {
    Counter::default().beta(first, second, k)
}

pub fn a_fixed(l: &LengthVector, k: i64) -> Result<u64> {
    Counter::default().a_fixed(l, k)
}

pub fn alpha_table(l: &LengthVector) -> Result<CountTable> {
    Counter::default().alpha_table(l)
}

pub fn beta_table(first: &LengthVector, second: &LengthVector) -> Result<CountTable> {
    Counter::default().beta_table(first, second)
}

pub fn a_fixed_table(l: &LengthVector) -> Result<CountTable> {
    Counter::default().a_fixed_table(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(items: &[&str]) -> LengthVector {
        LengthVector::from_strs(items).unwrap()
    }

    fn engines() -> [Counter; 2] {
        [Counter::new(Engine::Enumerate), Counter::new(Engine::SubsetSumDp)]
    }

    #[test]
    fn alpha_examples() {
        for c in engines() {
            assert_eq!(c.alpha(&lv(&["4", "8", "10", "1"]), 1).unwrap(), 3);
            assert_eq!(c.alpha(&lv(&["4", "8", "10", "12"]), 1).unwrap(), 1);
            assert_eq!(c.alpha(&lv(&["1", "1", "1", "1", "0.5"]), 1).unwrap(), 4);
            assert_eq!(c.alpha_table(&lv(&["4", "8", "10", "1"])).unwrap().values, vec![1, 3, 0]);
        }
    }

    #[test]
    fn out_of_range_k_reads_zero() {
        let l = lv(&["4", "8", "10", "1"]);
        assert_eq!(alpha(&l, -1).unwrap(), 0);
        assert_eq!(alpha(&l, 3).unwrap(), 0);
        assert_eq!(beta(&l, &l, 7).unwrap(), 0);
    }

    #[test]
    fn beta_examples() {
        let plus = lv(&["4", "8", "10", "12"]);
        let minus = lv(&["4", "8", "10", "1"]);
        for c in engines() {
            assert_eq!(c.beta(&plus, &minus, 1).unwrap(), 1);
            assert_eq!(c.beta(&minus, &plus, 1).unwrap(), 1);
            assert_eq!(c.beta(&plus, &minus, 0).unwrap(), 0);
            assert_eq!(c.beta(&minus, &plus, 0).unwrap(), 0);
        }
    }

    #[test]
    fn beta_rejects_incompatible_vectors() {
        let a = lv(&["4", "8", "10", "12"]);
        let b = lv(&["4", "9", "10", "1"]);
        assert!(matches!(beta(&a, &b, 1), Err(Error::Contract(_))));
        let c = lv(&["4", "8", "10"]);
        assert!(matches!(beta(&a, &c, 1), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn a_fixed_examples() {
        for c in engines() {
            assert_eq!(c.a_fixed(&lv(&["4", "8", "10", "12"]), 0).unwrap(), 1);
            assert_eq!(c.a_fixed(&lv(&["4", "8", "10", "12"]), 1).unwrap(), 1);
            assert_eq!(c.a_fixed(&lv(&["1", "1", "1.5"]), 0).unwrap(), 1);
        }
    }

    #[test]
    fn non_generic_vectors_are_rejected() {
        let l = lv(&["1", "1", "1", "1"]);
        for c in engines() {
            assert!(c.alpha(&l, 0).unwrap_err().is_non_generic());
            assert!(c.a_fixed(&l, 0).unwrap_err().is_non_generic());
        }
    }

    #[test]
    fn window_edges_report_degenerate_subsets() {
        // unchecked path: the table and the enumerator must both notice the tie
        let l = lv(&["1", "1", "1", "1"]);
        for c in engines() {
            let err = c.alpha_table_unchecked(&l).unwrap_err();
            assert!(matches!(err, Error::Degenerate { .. }), "{err:?}");
        }
    }

    #[test]
    fn longest_index_prefers_largest_tied_index() {
        assert_eq!(longest_index(&lv(&["1", "3", "3", "2"])), 3);
        assert_eq!(longest_index(&lv(&["5", "1"])), 1);
    }

    #[test]
    fn auto_engine_falls_back_to_enumeration() {
        // irrational-looking denominators blow the table budget
        let l = lv(&["1/7919", "3/7907", "5/7901", "2"]);
        let auto = Counter::default().with_dp_cell_limit(16);
        let direct = Counter::new(Engine::Enumerate);
        assert_eq!(auto.alpha_table(&l).unwrap(), direct.alpha_table(&l).unwrap());
    }
}
