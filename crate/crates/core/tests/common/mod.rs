//! Brute-force reference implementations and random instance generators.
//!
//! Everything here works straight from the subset definitions over
//! `BigRational`, sharing no code with the library's counting engines.

#![allow(dead_code)]

use num::{BigInt, BigRational, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use teleskope_core::metric::critical_lengths;
use teleskope_core::{LengthVector, Scalar, TelescopicData};

pub fn q(x: &Scalar) -> BigRational {
    x.as_big().clone()
}

pub fn ql(l: &LengthVector) -> Vec<BigRational> {
    l.iter().map(q).collect()
}

/// `sum_{i in J} l_i - sum_{i not in J} l_i` with bit `i` standing for leg `i + 1`.
pub fn signed(l: &[BigRational], mask: u64) -> BigRational {
    l.iter()
        .enumerate()
        .fold(BigRational::zero(), |acc, (i, x)| {
            if mask >> i & 1 == 1 {
                acc + x
            } else {
                acc - x
            }
        })
}

pub fn long(l: &[BigRational], mask: u64) -> bool {
    let s = signed(l, mask);
    assert!(!s.is_zero(), "degenerate subset {mask:b} in reference oracle");
    s.is_positive()
}

pub fn gap(l: &[BigRational]) -> BigRational {
    (0..1u64 << l.len())
        .map(|m| signed(l, m).abs())
        .min()
        .unwrap()
}

pub fn generic(l: &[BigRational]) -> bool {
    (0..1u64 << l.len()).all(|m| !signed(l, m).is_zero())
}

/// Long subsets of `{1..n-1}` of size `n-k-1`.
pub fn alpha(l: &[BigRational], k: i64) -> u64 {
    let n = l.len() as i64;
    if k < 0 || k > n - 2 {
        return 0;
    }
    let size = (n - k - 1) as u32;
    (0..1u64 << (n - 1))
        .filter(|m| m.count_ones() == size && long(l, *m))
        .count() as u64
}

/// Short subsets of `{1..n}` of size `k+1` containing `n`.
pub fn alpha_dual(l: &[BigRational], k: i64) -> u64 {
    let n = l.len() as i64;
    if k < 0 || k > n - 2 {
        return 0;
    }
    let top = 1u64 << (n - 1);
    (0..1u64 << n)
        .filter(|m| m & top != 0 && m.count_ones() as i64 == k + 1 && !long(l, *m))
        .count() as u64
}

/// `J` inside `{1..n-2}`, `|J| = n-k-2`, `J+{n}` short for `first`, `J+{n-1}`
/// long for `second`.
pub fn beta(first: &[BigRational], second: &[BigRational], k: i64) -> u64 {
    let n = first.len() as i64;
    if k < 0 || k > n - 2 {
        return 0;
    }
    let size = n - k - 2;
    if size < 0 {
        return 0;
    }
    let with_n = 1u64 << (n - 1);
    let with_pivot = 1u64 << (n - 2);
    (0..1u64 << (n - 2))
        .filter(|m| {
            m.count_ones() as i64 == size
                && !long(first, m | with_n)
                && long(second, m | with_pivot)
        })
        .count() as u64
}

/// Short `(k+1)`-subsets containing the largest index among the longest legs.
pub fn a_fixed(l: &[BigRational], k: i64) -> u64 {
    a_fixed_at(l, k, longest(l))
}

pub fn a_fixed_at(l: &[BigRational], k: i64, pinned: usize) -> u64 {
    let n = l.len();
    (0..1u64 << n)
        .filter(|m| m >> pinned & 1 == 1 && m.count_ones() as i64 == k + 1 && !long(l, *m))
        .count() as u64
}

/// 0-based position of the last maximal entry.
pub fn longest(l: &[BigRational]) -> usize {
    let max = l.iter().max().unwrap();
    l.iter().rposition(|x| x == max).unwrap()
}

pub fn betti_telescopic(minus: &[BigRational], plus: &[BigRational]) -> Vec<u64> {
    let n = minus.len() as i64;
    (0..=n - 2)
        .map(|k| {
            let v = alpha(minus, k) as i64 - beta(plus, minus, k) as i64
                + alpha(plus, n - 3 - k) as i64
                - beta(minus, plus, n - 3 - k) as i64;
            assert!(v >= 0, "negative rank");
            v as u64
        })
        .collect()
}

pub fn betti_fixed(l: &[BigRational]) -> Vec<u64> {
    let n = l.len() as i64;
    (0..=n - 3)
        .map(|k| a_fixed(l, k) + a_fixed(l, n - 3 - k))
        .collect()
}

pub fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc.try_into().unwrap()
}

pub fn endpoints(a: &TelescopicData) -> (Vec<BigRational>, Vec<BigRational>) {
    (ql(&a.lower()), ql(&a.upper()))
}

/// Pairs `{i,j}` long for every telescopic length in a dense sample of
/// `[lo, hi]` (including both ends); returns the first triple found.
pub fn rigid_triple_sampled(a: &TelescopicData, samples: usize) -> Option<[usize; 3]> {
    let n = a.n();
    let (lo, hi) = (q(a.lo()), q(a.hi()));
    let points: Vec<Vec<BigRational>> = (0..samples)
        .map(|s| {
            let t = BigRational::new(BigInt::from(s), BigInt::from(samples - 1));
            let x = &lo + (&hi - &lo) * t;
            let mut l = ql(a.fixed());
            l.push(x);
            l
        })
        .collect();
    let pair = |i: usize, j: usize| {
        let mask = (1u64 << (i - 1)) | (1u64 << (j - 1));
        points.iter().all(|l| signed(l, mask).is_positive())
    };
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                if pair(i, j) && pair(i, k) && pair(j, k) {
                    return Some([i, j, k]);
                }
            }
        }
    }
    None
}

/// Decimal with at most two fractional digits in `(0, max]`.
pub fn length(rng: &mut ChaCha8Rng, max_hundredths: u32) -> Scalar {
    let v = rng.gen_range(1..=max_hundredths) as i64;
    Scalar::from_ratio(v, 100)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Plain,
    Disconnected,
    Collapse,
    CircleFactor,
    Empty,
    Wide,
}

pub const FLAVORS: [Flavor; 6] = [
    Flavor::Plain,
    Flavor::Disconnected,
    Flavor::Collapse,
    Flavor::CircleFactor,
    Flavor::Empty,
    Flavor::Wide,
];

fn sorted(mut v: Vec<Scalar>) -> LengthVector {
    v.sort();
    LengthVector::new(v).unwrap()
}

fn try_instance(rng: &mut ChaCha8Rng, n: usize, flavor: Flavor) -> Option<TelescopicData> {
    let m = n - 1;
    let fixed: Vec<Scalar> = match flavor {
        Flavor::Disconnected => {
            // three dominant legs and a handful of small ones
            let mut v: Vec<Scalar> = (0..m - 2).map(|_| length(rng, 150)).collect();
            let big = rng.gen_range(1000..2000);
            v.push(Scalar::from_ratio(big, 100));
            v.push(Scalar::from_ratio(big + rng.gen_range(1..300), 100));
            v
        }
        Flavor::CircleFactor => {
            let mut v: Vec<Scalar> = (0..m - 1).map(|_| length(rng, 2000)).collect();
            v.push(Scalar::from_ratio(rng.gen_range(1..5), 1000));
            v
        }
        _ => (0..m).map(|_| length(rng, 2000)).collect(),
    };
    let fixed = sorted(fixed);
    let total = fixed.total();
    let total_h = (total.to_f64() * 100.0).ceil() as u32 + 1;
    let (lo, hi) = match flavor {
        Flavor::Collapse => {
            let lo = length(rng, total_h);
            let width = Scalar::from_ratio(rng.gen_range(1..20), 1000);
            (lo.clone(), &lo + &width)
        }
        Flavor::Disconnected => {
            if rng.gen_bool(0.5) {
                // telescopic leg is one of the dominant three
                let top = fixed.get(m).to_f64();
                let lo = top * rng.gen_range(0.85..1.0);
                let hi = lo + rng.gen_range(0.01..0.5);
                (dec(lo), dec(hi))
            } else {
                let lo = length(rng, 100);
                (lo.clone(), &lo + &length(rng, 200))
            }
        }
        Flavor::Empty => {
            let lo = &total + &length(rng, 500);
            (lo.clone(), &lo + &length(rng, 500))
        }
        Flavor::Wide => (length(rng, 50), &total + &length(rng, 500)),
        _ => {
            let x = length(rng, total_h);
            let y = length(rng, total_h);
            if x == y {
                return None;
            }
            (x.clone().min(y.clone()), x.max(y))
        }
    };
    let a = TelescopicData::new(fixed, lo, hi).ok()?;
    let (minus, plus) = endpoints(&a);
    (generic(&minus) && generic(&plus)).then_some(a)
}

fn dec(x: f64) -> Scalar {
    Scalar::from_ratio((x * 100.0).round().max(1.0) as i64, 100)
}

/// A generic instance with `n` legs; `flavor` steers it toward a branch.
pub fn instance(rng: &mut ChaCha8Rng, n: usize, flavor: Flavor) -> TelescopicData {
    loop {
        if let Some(a) = try_instance(rng, n, flavor) {
            return a;
        }
    }
}

/// Random flavor and `n` in `range`.
pub fn any_instance(rng: &mut ChaCha8Rng, range: std::ops::RangeInclusive<usize>) -> TelescopicData {
    let n = rng.gen_range(range);
    let flavor = FLAVORS[rng.gen_range(0..FLAVORS.len())];
    instance(rng, n, flavor)
}

/// Telescopic endpoints at least `margin` (relative to the total) away from
/// each other, from 0 and from every critical length, so that a modest grid
/// resolves the band.
pub fn resolvable(a: &TelescopicData, margin: f64) -> bool {
    let total = a.fixed().total().to_f64();
    let mut crit: Vec<f64> = critical_lengths(a.fixed()).unwrap().iter().map(|c| c.to_f64()).collect();
    crit.push(0.0);
    let (lo, hi) = (a.lo().to_f64(), a.hi().to_f64());
    hi - lo > margin * total
        && [lo, hi]
            .iter()
            .all(|x| crit.iter().all(|c| (x - c).abs() > margin * total))
}
