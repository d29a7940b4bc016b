//! Betti numbers of telescopic linkage spaces, of ordinary polygon spaces,
//! and the closed forms for the equilateral family.

use num::{BigInt, Integer, ToPrimitive};
use serde::Serialize;

use crate::combinat::Counter;
use crate::error::{Error, Result};
use crate::metric::{check_generic, ensure_generic, LengthVector, TelescopicData};
use crate::scalar::Scalar;
use crate::Endpoint;

/// Ranks of integral homology, `ranks[k]` for `k = 0..=dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiProfile {
    pub ranks: Vec<u64>,
    pub dim: usize,
    /// Integral homology is free abelian in every case this crate computes.
    pub torsion_free: bool,
    pub euler: i64,
}

impl BettiProfile {
    pub fn new(ranks: Vec<u64>) -> Self {
        assert!(!ranks.is_empty(), "profile needs at least one rank");
        let euler = ranks
            .iter()
            .enumerate()
            .map(|(k, &r)| if k % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum();
        BettiProfile {
            dim: ranks.len() - 1,
            ranks,
            torsion_free: true,
            euler,
        }
    }

    /// `ranks[k]`, zero outside `0..=dim`.
    pub fn rank(&self, k: i64) -> u64 {
        usize::try_from(k)
            .ok()
            .and_then(|k| self.ranks.get(k).copied())
            .unwrap_or(0)
    }

    pub fn b0(&self) -> u64 {
        self.ranks[0]
    }

    /// The same ranks with extra zeros up to `dim`.
    pub fn padded(&self, dim: usize) -> Self {
        let mut ranks = self.ranks.clone();
        ranks.resize(dim.max(self.dim) + 1, 0);
        BettiProfile::new(ranks)
    }

    /// Ranks of the product with a circle.
    pub fn times_circle(&self) -> Self {
        let ranks = (0..=self.dim as i64 + 1)
            .map(|k| self.rank(k) + self.rank(k - 1))
            .collect();
        BettiProfile::new(ranks)
    }
}

/// `rk H_k(M_A) = alpha_k(l-) - beta_k(l+, l-) + alpha_{n-3-k}(l+) - beta_{n-3-k}(l-, l+)`.
pub fn betti_telescopic(a: &TelescopicData) -> Result<BettiProfile> {
    betti_telescopic_with(a, &Counter::default())
}

pub fn betti_telescopic_with(a: &TelescopicData, counter: &Counter) -> Result<BettiProfile> {
    check_generic(a)?;
    let (minus, plus) = (a.lower(), a.upper());
    let alpha_minus = counter.alpha_table_unchecked(&minus)?;
    let alpha_plus = counter.alpha_table_unchecked(&plus)?;
    let beta_pm = counter.beta_table_unchecked(&plus, &minus)?;
    let beta_mp = counter.beta_table_unchecked(&minus, &plus)?;
    let n = a.n() as i64;
    let ranks = (0..=n - 2)
        .map(|k| {
            let dual = n - 3 - k;
            let value = alpha_minus.get(k) as i64 - beta_pm.get(k) as i64 + alpha_plus.get(dual)
                as i64
                - beta_mp.get(dual) as i64;
            u64::try_from(value).map_err(|_| {
                Error::Contract(format!("negative rank {value} at k = {k} for {minus} / {plus}"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BettiProfile::new(ranks))
}

/// Ranks `a_k(l) + a_{n-3-k}(l)` of the polygon space of a fixed vector.
pub fn betti_fixed(l: &LengthVector) -> Result<BettiProfile> {
    betti_fixed_with(l, &Counter::default())
}

pub fn betti_fixed_with(l: &LengthVector, counter: &Counter) -> Result<BettiProfile> {
    if l.len() < 3 {
        return Err(Error::InvalidLengths(format!(
            "polygon spaces need at least 3 legs, got {}",
            l.len()
        )));
    }
    ensure_generic(l, Endpoint::Lower)?;
    let table = counter.a_fixed_table_unchecked(l)?;
    let n = l.len() as i64;
    let ranks = (0..=n - 3)
        .map(|k| table.get(k) + table.get(n - 3 - k))
        .collect();
    Ok(BettiProfile::new(ranks))
}

/// Closed-form ranks for unit fixed legs and telescopic interval `[a, b]`.
///
/// Every branch is selected by strict inequalities; a parameter sitting on a
/// branch boundary is rejected.
pub fn betti_equilateral(n: usize, a: &Scalar, b: &Scalar) -> Result<BettiProfile> {
    if n < 3 {
        return Err(Error::InvalidLengths(format!("need n >= 3, got {n}")));
    }
    if !a.is_positive() || a >= b {
        return Err(Error::InvalidLengths(format!(
            "need 0 < a < b, got a = {a}, b = {b}"
        )));
    }
    for (name, x) in [("a", a), ("b", b)] {
        if let Some(v) = x.to_integer() {
            if v.is_odd() != (n % 2 == 1) {
                return Err(Error::NonGenericParameter(format!(
                    "{name} = {x} is an integer of opposite parity to n = {n}"
                )));
            }
        }
    }
    let ni = n as i64;
    let ranks = (0..=ni - 2)
        .map(|k| equilateral_rank(ni, k, a, b))
        .collect::<Result<Vec<_>>>()?;
    Ok(BettiProfile::new(ranks))
}

/// `x < t` or `x > t`, rejecting `x == t`.
fn below(x: &Scalar, t: i64, name: &str) -> Result<bool> {
    let t = Scalar::from_integer(t);
    if *x == t {
        return Err(Error::NonGenericParameter(format!(
            "{name} = {x} lies on the branch boundary {t}"
        )));
    }
    Ok(*x < t)
}

fn equilateral_rank(n: i64, k: i64, a: &Scalar, b: &Scalar) -> Result<u64> {
    let c = binomial;
    let m = n - 2 * k;
    let value = match m {
        m if m >= 5 => {
            if below(a, m - 1, "a")? {
                c(n - 1, k)
            } else {
                0
            }
        }
        4 => {
            if below(b, 1, "b")? {
                c(n - 1, k) + c(n - 1, k + 2) - c(n - 2, k + 1)
            } else if below(a, 3, "a")? {
                c(n - 1, k)
            } else {
                0
            }
        }
        3 => {
            if below(b, 2, "b")? {
                c(n - 1, k) + c(n - 1, k + 2)
            } else if below(a, 2, "a")? {
                c(n - 1, k)
            } else {
                0
            }
        }
        2 => {
            let a_small = below(a, 1, "a")?;
            if below(b, 1, "b")? {
                c(n - 1, k) + c(n - 1, k + 2) - c(n - 2, k)
            } else if below(b, 3, "b")? {
                if a_small {
                    c(n - 1, k) + c(n - 1, k + 2)
                } else {
                    c(n - 1, k + 2)
                }
            } else if a_small {
                c(n - 1, k)
            } else {
                0
            }
        }
        _ => {
            if below(b, 2 * k - n + 5, "b")? {
                c(n - 1, k + 2)
            } else {
                0
            }
        }
    };
    Ok(value)
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> u64 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc.to_u64().expect("binomial fits in u64")
}

/// Both sides of `chi(M_A) = (chi(M_l-) + chi(M_l+)) / 2` for odd `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerCheck {
    pub interior: i64,
    pub lower_boundary: i64,
    pub upper_boundary: i64,
    pub passed: bool,
}

/// For odd `n` the band has odd dimension, so its Euler characteristic is half
/// that of its boundary `M_l- + M_l+`.
pub fn euler_consistency(a: &TelescopicData) -> Result<EulerCheck> {
    if a.n() % 2 == 0 {
        return Err(Error::NotApplicable(format!(
            "n = {} is even; the boundary relation carries no information",
            a.n()
        )));
    }
    let interior = betti_telescopic(a)?.euler;
    let lower_boundary = boundary_euler(&a.lower())?;
    let upper_boundary = boundary_euler(&a.upper())?;
    Ok(EulerCheck {
        interior,
        lower_boundary,
        upper_boundary,
        passed: 2 * interior == lower_boundary + upper_boundary,
    })
}

/// `chi(M_l)`; the triangle space is a finite set of points.
fn boundary_euler(l: &LengthVector) -> Result<i64> {
    betti_fixed(l).map(|p| p.euler)
}
