//! Request normalization and the report types shared by the command line and
//! the browser front ends.

use serde::Serialize;

use crate::betti::{betti_equilateral, betti_telescopic, BettiProfile};
use crate::error::{Endpoint, Error, Result};
use crate::metric::{critical_lengths, genericity_gap, LengthVector, TelescopicData};
use crate::oracle::{self, OracleOptions, OracleRun};
use crate::scalar::Scalar;
use crate::structure::{structure_report, StructureOptions, StructureReport};

/// A telescopic linkage as the user wrote it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisRequest {
    /// Fixed leg lengths in the user's order.
    pub fixed: Vec<String>,
    pub lo: String,
    pub hi: String,
    /// 1-based position of the telescopic leg among all `n` legs; `None`
    /// means last.
    pub tele_index: Option<usize>,
    #[serde(skip)]
    pub recursive: bool,
}

impl AnalysisRequest {
    pub fn new(fixed: &str, lo: &str, hi: &str) -> Self {
        AnalysisRequest {
            fixed: fixed.split(',').map(|s| s.trim().to_string()).collect(),
            lo: lo.trim().to_string(),
            hi: hi.trim().to_string(),
            tele_index: None,
            recursive: false,
        }
    }

    pub fn with_tele_index(mut self, index: Option<usize>) -> Self {
        self.tele_index = index;
        self
    }

    pub fn with_recursive(mut self, recursive: bool) -> Self {
        self.recursive = recursive;
        self
    }

    /// Sorted metric data plus `permutation[i - 1]`, the user's index of
    /// normalized leg `i`.
    pub fn normalize(&self) -> Result<Normalized> {
        let n = self.fixed.len() + 1;
        let tele = self.tele_index.unwrap_or(n);
        if tele == 0 || tele > n {
            return Err(Error::parse(
                "tele-index",
                &tele.to_string(),
                format!("must lie in 1..={n}"),
            ));
        }
        let mut legs = Vec::with_capacity(n - 1);
        for (pos, text) in self.fixed.iter().enumerate() {
            let value: Scalar = text.parse().map_err(|e| rename(e, "fixed"))?;
            if !value.is_positive() {
                return Err(Error::parse("fixed", text, "lengths must be positive"));
            }
            // user positions skip the telescopic slot
            let original = if pos + 1 < tele { pos + 1 } else { pos + 2 };
            legs.push((value, original));
        }
        legs.sort_by(|x, y| x.0.cmp(&y.0));
        let lo: Scalar = self.lo.parse().map_err(|e| rename(e, "tele_lo"))?;
        if !lo.is_positive() {
            return Err(Error::parse("tele_lo", &self.lo, "lengths must be positive"));
        }
        let hi: Scalar = self.hi.parse().map_err(|e| rename(e, "tele_hi"))?;
        let mut permutation: Vec<usize> = legs.iter().map(|l| l.1).collect();
        permutation.push(tele);
        let fixed = LengthVector::new(legs.into_iter().map(|l| l.0).collect())?;
        Ok(Normalized {
            data: TelescopicData::new(fixed, lo, hi)?,
            permutation,
        })
    }
}

fn rename(e: Error, field: &str) -> Error {
    match e {
        Error::Parse { input, reason, .. } => Error::Parse {
            field: field.to_string(),
            input,
            reason,
        },
        other => other,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Normalized {
    pub data: TelescopicData,
    pub permutation: Vec<usize>,
}

/// Open interval between consecutive critical lengths; `upper = None` is the
/// unbounded last chamber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chamber {
    pub index: usize,
    pub lower: Scalar,
    pub upper: Option<Scalar>,
}

impl Chamber {
    /// `lower + t (upper - lower)`, or `lower + 3t` when unbounded.
    pub fn sample(&self, t: &Scalar) -> Scalar {
        match &self.upper {
            Some(upper) => self.lower.lerp(upper, t),
            None => &self.lower + &(t * &Scalar::from_integer(3)),
        }
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        x > &self.lower && self.upper.as_ref().is_none_or(|u| x < u)
    }
}

/// The chambers cut out of `(0, inf)` by the critical lengths.
pub fn chambers(fixed: &LengthVector) -> Result<Vec<Chamber>> {
    let mut cuts: Vec<Scalar> = critical_lengths(fixed)?
        .into_iter()
        .filter(|c| c.is_positive())
        .collect();
    cuts.insert(0, Scalar::zero());
    let mut out: Vec<Chamber> = cuts
        .windows(2)
        .enumerate()
        .map(|(index, w)| Chamber {
            index,
            lower: w[0].clone(),
            upper: Some(w[1].clone()),
        })
        .collect();
    out.push(Chamber {
        index: out.len(),
        lower: cuts.last().unwrap().clone(),
        upper: None,
    });
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChamberContext {
    pub critical_lengths: Vec<Scalar>,
    pub lo_chamber: Chamber,
    pub hi_chamber: Chamber,
}

fn chamber_context(a: &TelescopicData) -> Result<ChamberContext> {
    let list = chambers(a.fixed())?;
    let locate = |x: &Scalar| {
        list.iter()
            .find(|c| c.contains(x))
            .cloned()
            .ok_or_else(|| Error::Contract(format!("{x} lies on a critical length")))
    };
    Ok(ChamberContext {
        critical_lengths: critical_lengths(a.fixed())?,
        lo_chamber: locate(a.lo())?,
        hi_chamber: locate(a.hi())?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Genericity {
    pub generic: bool,
    pub lower_gap: Scalar,
    pub upper_gap: Scalar,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleComparison {
    pub run: OracleRun,
    pub expected_components: u64,
    pub components_match: bool,
    pub expected_euler: Option<i64>,
    pub euler_match: Option<bool>,
}

impl OracleComparison {
    pub fn passed(&self) -> bool {
        self.components_match && self.euler_match.unwrap_or(true)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub request: AnalysisRequest,
    pub n: usize,
    pub fixed: LengthVector,
    pub lo: Scalar,
    pub hi: Scalar,
    pub permutation: Vec<usize>,
    pub genericity: Genericity,
    pub profile: BettiProfile,
    pub structure: StructureReport,
    pub chamber: ChamberContext,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleComparison>,
}

/// Betti profile, structure and chamber context for one request.
pub fn analyze(request: &AnalysisRequest) -> Result<AnalysisReport> {
    let normalized = request.normalize()?;
    let a = &normalized.data;
    let profile = betti_telescopic(a)?;
    let structure = structure_report(
        a,
        StructureOptions {
            recursive: request.recursive,
        },
    )?;
    Ok(AnalysisReport {
        request: request.clone(),
        n: a.n(),
        fixed: a.fixed().clone(),
        lo: a.lo().clone(),
        hi: a.hi().clone(),
        permutation: normalized.permutation.clone(),
        genericity: Genericity {
            generic: true,
            lower_gap: genericity_gap(&a.endpoint(Endpoint::Lower))?,
            upper_gap: genericity_gap(&a.endpoint(Endpoint::Upper))?,
        },
        profile,
        structure,
        chamber: chamber_context(a)?,
        oracle: None,
    })
}

/// [`analyze`] plus the grid oracle and its comparison with the exact ranks.
pub fn verify(request: &AnalysisRequest, resolution: Option<usize>) -> Result<AnalysisReport> {
    let mut report = analyze(request)?;
    let a = request.normalize()?.data;
    let mut options = OracleOptions::for_legs(a.n());
    if let Some(g) = resolution {
        options.resolution = g;
        options.max_resolution = options.max_resolution.max(g * 4);
    }
    let run = oracle::run(&a, options)?;
    let expected_components = report.profile.b0();
    let expected_euler = run.euler.map(|_| report.profile.euler);
    report.oracle = Some(OracleComparison {
        components_match: run.components as u64 == expected_components,
        euler_match: run.euler.zip(expected_euler).map(|(x, y)| x == y),
        expected_components,
        expected_euler,
        run,
    });
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub lo_chamber: usize,
    pub hi_chamber: usize,
    pub lo: Scalar,
    pub hi: Scalar,
    pub ranks: Vec<u64>,
    pub components: u8,
    pub empty: bool,
    /// A second sample from the same chamber pair gave the same ranks.
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub fixed: LengthVector,
    pub critical_lengths: Vec<Scalar>,
    pub chambers: Vec<Chamber>,
    pub rows: Vec<SweepRow>,
}

/// Betti profiles for every ordered pair of chambers `(lo, hi)`.
pub fn sweep(fixed: &[String]) -> Result<SweepReport> {
    let mut values = fixed
        .iter()
        .map(|s| s.parse::<Scalar>().map_err(|e| rename(e, "fixed")))
        .collect::<Result<Vec<_>>>()?;
    values.sort();
    let fixed = LengthVector::new(values)?;
    let list = chambers(&fixed)?;
    let third = Scalar::from_ratio(1, 3);
    let two_thirds = Scalar::from_ratio(2, 3);
    let half = Scalar::from_ratio(1, 2);
    let quarter = Scalar::from_ratio(1, 4);
    let three_quarters = Scalar::from_ratio(3, 4);
    let mut rows = Vec::new();
    for (i, lo_chamber) in list.iter().enumerate() {
        for hi_chamber in &list[i..] {
            let (points, spot) = if lo_chamber.index == hi_chamber.index {
                (
                    (lo_chamber.sample(&third), hi_chamber.sample(&two_thirds)),
                    (lo_chamber.sample(&quarter), hi_chamber.sample(&three_quarters)),
                )
            } else {
                (
                    (lo_chamber.sample(&half), hi_chamber.sample(&half)),
                    (lo_chamber.sample(&quarter), hi_chamber.sample(&three_quarters)),
                )
            };
            let a = TelescopicData::new(fixed.clone(), points.0.clone(), points.1.clone())?;
            let profile = betti_telescopic(&a)?;
            let b = TelescopicData::new(fixed.clone(), spot.0, spot.1)?;
            let components = crate::structure::component_count(&a)?;
            rows.push(SweepRow {
                lo_chamber: lo_chamber.index,
                hi_chamber: hi_chamber.index,
                lo: points.0,
                hi: points.1,
                consistent: betti_telescopic(&b)? == profile,
                ranks: profile.ranks,
                empty: components == 0,
                components,
            });
        }
    }
    Ok(SweepReport {
        critical_lengths: critical_lengths(&fixed)?,
        fixed,
        chambers: list,
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquilateralReport {
    pub n: usize,
    pub a: Scalar,
    pub b: Scalar,
    pub closed_form: BettiProfile,
    pub general: BettiProfile,
    pub agree: bool,
}

/// Closed forms for unit fixed legs next to the general formula.
pub fn equilateral(n: usize, a: &str, b: &str) -> Result<EquilateralReport> {
    let a: Scalar = a.parse().map_err(|e| rename(e, "a"))?;
    let b: Scalar = b.parse().map_err(|e| rename(e, "b"))?;
    let closed_form = betti_equilateral(n, &a, &b)?;
    let fixed = LengthVector::new(vec![Scalar::one(); n - 1])?;
    let general = betti_telescopic(&TelescopicData::new(fixed, a.clone(), b.clone())?)?;
    Ok(EquilateralReport {
        n,
        agree: closed_form == general,
        a,
        b,
        closed_form,
        general,
    })
}
