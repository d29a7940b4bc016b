//! Report rendering: pretty JSON, CSV and plain-text tables.

use std::fmt::Write as _;

use serde::Serialize;
use teleskope_core::analysis::{AnalysisReport, Chamber, EquilateralReport, SweepReport};
use teleskope_core::structure::Decomposition;
use teleskope_core::BettiProfile;

use crate::args::Format;
use crate::Failure;

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::new("io", e.to_string(), crate::EXIT_FAILURE))?;
    text.push('\n');
    Ok(text)
}

fn csv_text(rows: Vec<Vec<String>>) -> Result<String, Failure> {
    let io = |e: csv::Error| Failure::new("io", e.to_string(), crate::EXIT_FAILURE);
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.write_record(&row).map_err(io)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Failure::new("io", e.to_string(), crate::EXIT_FAILURE))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// `k,rank` rows.
pub fn profile_csv(profile: &BettiProfile) -> Result<String, Failure> {
    let mut rows = vec![vec!["k".to_string(), "rank".to_string()]];
    rows.extend(
        profile
            .ranks
            .iter()
            .enumerate()
            .map(|(k, r)| vec![k.to_string(), r.to_string()]),
    );
    csv_text(rows)
}

fn joined<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn chamber(c: &Chamber) -> String {
    match &c.upper {
        Some(u) => format!("#{} ({}, {})", c.index, c.lower, u),
        None => format!("#{} ({}, inf)", c.index, c.lower),
    }
}

fn yes(flag: bool) -> &'static str {
    if flag {
        "yes"
    } else {
        "no"
    }
}

fn decomposition(d: &Decomposition) -> String {
    match d {
        Decomposition::Collapse { lower, gap, .. } => {
            format!("collapse onto M({lower}) x [0,1], gap {gap}")
        }
        Decomposition::CircleFactor { reduced, levels } => format!(
            "circle factor, {} level(s), innermost ({}) with [{}, {}]",
            levels.len(),
            levels.last().unwrap_or(reduced).fixed(),
            levels.last().unwrap_or(reduced).lo(),
            levels.last().unwrap_or(reduced).hi(),
        ),
        Decomposition::TwoTori {
            torus_dim,
            expected_ranks,
        } => format!(
            "two tori T^{torus_dim} x [0,1], ranks {}",
            joined(expected_ranks, " ")
        ),
    }
}

pub fn analysis(report: &AnalysisReport, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => json(report),
        Format::Csv => profile_csv(&report.profile),
        Format::Table => Ok(analysis_table(report)),
    }
}

fn analysis_table(r: &AnalysisReport) -> String {
    let s = &r.structure;
    let mut out = String::new();
    let mut row = |key: &str, value: String| {
        let _ = writeln!(out, "{key:<15}{value}");
    };
    row("n", r.n.to_string());
    row("fixed", r.fixed.to_string());
    row("telescopic", format!("[{}, {}]", r.lo, r.hi));
    row("permutation", joined(&r.permutation, " "));
    row(
        "gaps",
        format!("lower {}, upper {}", r.genericity.lower_gap, r.genericity.upper_gap),
    );
    row("ranks", joined(&r.profile.ranks, " "));
    row("euler", r.profile.euler.to_string());
    row("torsion-free", yes(r.profile.torsion_free).to_string());
    row("nonempty", format!("{} (r = {}, R = {})", yes(s.nonempty), s.r, s.big_r));
    row("components", s.components.to_string());
    row(
        "rigid triple",
        s.rigid_triple
            .map(|t| joined(&t, " "))
            .unwrap_or_else(|| "none".to_string()),
    );
    if s.decompositions.is_empty() {
        row("decomposition", "none".to_string());
    }
    for d in &s.decompositions {
        row("decomposition", decomposition(d));
    }
    row("critical", joined(&r.chamber.critical_lengths, " "));
    row("lo chamber", chamber(&r.chamber.lo_chamber));
    row("hi chamber", chamber(&r.chamber.hi_chamber));
    if let Some(o) = &r.oracle {
        let run = &o.run;
        row(
            "grid",
            format!(
                "{} (tried {}), ambiguous {}, corner contacts {}",
                run.resolution,
                joined(&run.resolutions, " "),
                run.ambiguous,
                run.corner_contacts
            ),
        );
        row(
            "grid b0",
            format!(
                "{} vs {} {}",
                run.components,
                o.expected_components,
                if o.components_match { "ok" } else { "MISMATCH" }
            ),
        );
        if let (Some(x), Some(y), Some(m)) = (run.euler, o.expected_euler, o.euler_match) {
            row("grid euler", format!("{x} vs {y} {}", if m { "ok" } else { "MISMATCH" }));
        }
    }
    out
}

pub fn sweep(report: &SweepReport, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => json(report),
        Format::Csv => {
            let width = report.rows.first().map_or(0, |r| r.ranks.len());
            let mut header = vec!["lo_chamber".to_string(), "hi_chamber".to_string()];
            header.extend((0..width).map(|k| format!("b{k}")));
            let mut rows = vec![header];
            for r in &report.rows {
                let mut row = vec![r.lo_chamber.to_string(), r.hi_chamber.to_string()];
                row.extend(r.ranks.iter().map(|x| x.to_string()));
                rows.push(row);
            }
            csv_text(rows)
        }
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "fixed     {}", report.fixed);
            let _ = writeln!(out, "critical  {}", joined(&report.critical_lengths, " "));
            for c in &report.chambers {
                let _ = writeln!(out, "chamber   {}", chamber(c));
            }
            let _ = writeln!(out, "{:>3} {:>3}  {:<12} {:<12} ranks", "lo", "hi", "sample lo", "sample hi");
            for r in &report.rows {
                let mut line = format!(
                    "{:>3} {:>3}  {:<12} {:<12} {}",
                    r.lo_chamber,
                    r.hi_chamber,
                    r.lo.to_string(),
                    r.hi.to_string(),
                    joined(&r.ranks, " ")
                );
                if r.empty {
                    line.push_str("  (empty)");
                }
                if !r.consistent {
                    line.push_str("  (INCONSISTENT)");
                }
                let _ = writeln!(out, "{line}");
            }
            Ok(out)
        }
    }
}

pub fn equilateral(report: &EquilateralReport, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => json(report),
        Format::Csv => profile_csv(&report.general),
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "n             {}", report.n);
            let _ = writeln!(out, "interval      [{}, {}]", report.a, report.b);
            let _ = writeln!(out, "closed form   {}", joined(&report.closed_form.ranks, " "));
            let _ = writeln!(out, "general       {}", joined(&report.general.ranks, " "));
            let _ = writeln!(out, "agree         {}", yes(report.agree));
            Ok(out)
        }
    }
}
