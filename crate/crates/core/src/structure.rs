//! Nonemptiness, connected components and product decompositions of `M_A`.

use serde::Serialize;

use crate::betti::{betti_fixed, binomial, BettiProfile};
use crate::error::{Error, Result};
use crate::metric::{check_generic, genericity_gap, is_long, LengthVector, TelescopicData};
use crate::scalar::Scalar;
use crate::subset::SubsetMask;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Decomposition {
    /// `M_A = M_{l-} x [0,1]`.
    Collapse {
        lower: LengthVector,
        gap: Scalar,
        fixed_profile: BettiProfile,
    },
    /// `M_A = M_{A'} x S^1` with the shortest fixed leg removed. With
    /// recursion enabled `levels` lists each successive reduction.
    CircleFactor {
        reduced: TelescopicData,
        levels: Vec<TelescopicData>,
    },
    /// `M_A = [0,1] x (T^{n-3} + T^{n-3})`.
    TwoTori {
        torus_dim: usize,
        expected_ranks: Vec<u64>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub nonempty: bool,
    pub components: u8,
    pub rigid_triple: Option<[usize; 3]>,
    pub decompositions: Vec<Decomposition>,
    /// Smallest telescopic length admitting a closed polygon (may be negative).
    pub r: Scalar,
    /// Largest telescopic length admitting a closed polygon.
    pub big_r: Scalar,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StructureOptions {
    /// Keep stripping circle factors while the reduced data still admits one.
    pub recursive: bool,
}

/// `r = l_{n-1} - (l_1 + ... + l_{n-2})` and `R = l_1 + ... + l_{n-1}`.
pub fn reach_bounds(a: &TelescopicData) -> (Scalar, Scalar) {
    let fixed = a.fixed().as_slice();
    let (last, rest) = fixed.split_last().expect("at least two fixed legs");
    let rest_sum: Scalar = rest.iter().sum();
    (last - &rest_sum, last + &rest_sum)
}

/// `[lo, hi]` meets `[r, R]`.
pub fn is_nonempty(a: &TelescopicData) -> bool {
    let (r, big_r) = reach_bounds(a);
    a.lo() <= &big_r && a.hi() >= &r
}

/// Lexicographically smallest `i < j < k` whose three pairs stay long over
/// the whole telescopic interval.
pub fn find_rigid_triple(a: &TelescopicData) -> Result<Option<[usize; 3]>> {
    check_generic(a)?;
    find_rigid_triple_unchecked(a)
}

fn find_rigid_triple_unchecked(a: &TelescopicData) -> Result<Option<[usize; 3]>> {
    let n = a.n();
    let (lower, upper) = (a.lower(), a.upper());
    // a pair avoiding n is hardest at hi, a pair with n at lo
    let pair_long = |i: usize, j: usize| -> Result<bool> {
        let mask = SubsetMask::from_indices(n, &[i, j])?;
        let l = if j == n { &lower } else { &upper };
        is_long(l, &mask)
    };
    for i in 1..=n {
        for j in i + 1..=n {
            if !pair_long(i, j)? {
                continue;
            }
            for k in j + 1..=n {
                if pair_long(i, k)? && pair_long(j, k)? {
                    return Ok(Some([i, j, k]));
                }
            }
        }
    }
    Ok(None)
}

/// Number of components from the two connectivity inequalities, independent
/// of the homology formula.
pub fn component_count(a: &TelescopicData) -> Result<u8> {
    check_generic(a)?;
    Ok(component_count_unchecked(a))
}

fn component_count_unchecked(a: &TelescopicData) -> u8 {
    if !is_nonempty(a) {
        return 0;
    }
    let n = a.n();
    let fixed = a.fixed();
    let two = Scalar::from_integer(2);
    let total = fixed.total();
    let l = |i: usize| fixed.get(i);
    let case_a = n >= 4 && &two * &(l(n - 3) + l(n - 2)) >= &total + a.hi();
    let case_b1 = &two * &(l(n - 2) + l(n - 1)) >= &total + a.hi();
    let case_b2 = &two * &(l(n - 2) + a.lo()) >= &total + a.lo();
    if case_a || (case_b1 && case_b2) {
        2
    } else {
        1
    }
}

pub fn detect_collapse(a: &TelescopicData) -> Result<Option<Decomposition>> {
    check_generic(a)?;
    let lower = a.lower();
    let gap = genericity_gap(&lower)?;
    if &(a.hi() - a.lo()) >= &gap {
        return Ok(None);
    }
    let fixed_profile = betti_fixed(&lower)?;
    Ok(Some(Decomposition::Collapse {
        lower,
        gap,
        fixed_profile,
    }))
}

pub fn detect_circle_factor(
    a: &TelescopicData,
    options: StructureOptions,
) -> Result<Option<Decomposition>> {
    check_generic(a)?;
    let Some(reduced) = circle_reduction(a)? else {
        return Ok(None);
    };
    let mut levels = vec![reduced.clone()];
    if options.recursive {
        while let Some(next) = circle_reduction(levels.last().unwrap())? {
            levels.push(next);
        }
    }
    Ok(Some(Decomposition::CircleFactor { reduced, levels }))
}

/// `A'` when the shortest fixed leg is smaller than every positive signed sum
/// of the other legs at both endpoints.
fn circle_reduction(a: &TelescopicData) -> Result<Option<TelescopicData>> {
    if a.n() < 4 {
        return Ok(None);
    }
    let first = a.fixed().get(1);
    let others = a.fixed().without(1)?;
    for x in [a.lo(), a.hi()] {
        let rest = others.with_appended(x.clone())?;
        if &genericity_gap(&rest)? <= first {
            return Ok(None);
        }
    }
    Ok(Some(TelescopicData::new(
        others,
        a.lo().clone(),
        a.hi().clone(),
    )?))
}

pub fn classify_disconnected(a: &TelescopicData) -> Result<Option<Decomposition>> {
    check_generic(a)?;
    Ok(two_tori(a))
}

fn two_tori(a: &TelescopicData) -> Option<Decomposition> {
    if component_count_unchecked(a) != 2 {
        return None;
    }
    let n = a.n() as i64;
    Some(Decomposition::TwoTori {
        torus_dim: a.n() - 3,
        expected_ranks: (0..=n - 2).map(|k| 2 * binomial(n - 3, k)).collect(),
    })
}

pub fn structure_report(a: &TelescopicData, options: StructureOptions) -> Result<StructureReport> {
    check_generic(a)?;
    let (r, big_r) = reach_bounds(a);
    let components = component_count_unchecked(a);
    let rigid_triple = find_rigid_triple_unchecked(a)?;
    if rigid_triple.is_some() != (components == 2) {
        return Err(Error::Contract(format!(
            "rigid triple {rigid_triple:?} disagrees with component count {components}"
        )));
    }
    let decompositions = [
        detect_collapse(a)?,
        detect_circle_factor(a, options)?,
        two_tori(a),
    ]
    .into_iter()
    .flatten()
    .collect();
    Ok(StructureReport {
        nonempty: components > 0,
        components,
        rigid_triple,
        decompositions,
        r,
        big_r,
    })
}
