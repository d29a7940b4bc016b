//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export wraps a `*_json` function that returns the serialized report
//! or an error message; those are plain Rust and tested natively.

use serde::Serialize;
use teleskope_core::analysis::{self, AnalysisRequest};
use teleskope_core::oracle::build_band;
use teleskope_core::TelescopicData;
use wasm_bindgen::prelude::*;

/// Largest grid the page may request.
pub const MAX_DEMO_RESOLUTION: usize = 512;

fn message(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn split_tele(tele: &str) -> Result<(&str, &str), String> {
    tele.split_once(':')
        .ok_or_else(|| format!("cannot parse tele from {tele:?}: expected lo:hi"))
}

pub fn analyze_json(fixed: &str, tele: &str) -> Result<String, String> {
    let (lo, hi) = split_tele(tele)?;
    let report = analysis::analyze(&AnalysisRequest::new(fixed, lo, hi)).map_err(message)?;
    serde_json::to_string(&report).map_err(message)
}

pub fn sweep_json(fixed: &str) -> Result<String, String> {
    let list: Vec<String> = fixed.split(',').map(|s| s.trim().to_string()).collect();
    let report = analysis::sweep(&list).map_err(message)?;
    serde_json::to_string(&report).map_err(message)
}

#[derive(Serialize)]
struct BandMask {
    resolution: usize,
    /// Row-major, `mask[y * resolution + x]` is `'1'` for marked cells.
    mask: String,
    marked_cells: usize,
    ambiguous: usize,
    ranks: Vec<u64>,
}

/// The sampled band on the 2-torus of a four-leg linkage (`fixed` has three
/// lengths, sorted or not, telescopic leg last).
pub fn band_mask_json(fixed: &str, tele: &str, resolution: usize) -> Result<String, String> {
    let (lo, hi) = split_tele(tele)?;
    if resolution > MAX_DEMO_RESOLUTION {
        return Err(format!("resolution is capped at {MAX_DEMO_RESOLUTION}"));
    }
    let normalized = AnalysisRequest::new(fixed, lo, hi).normalize().map_err(message)?;
    let a: &TelescopicData = &normalized.data;
    if a.n() != 4 {
        return Err(format!("the band view needs three fixed legs, got {}", a.n() - 1));
    }
    let band = build_band(a, resolution).map_err(message)?;
    let ranks = teleskope_core::betti::betti_telescopic(a).map_err(message)?.ranks;
    let mask = (0..band.cell_count())
        .map(|i| if band.is_marked(i) { '1' } else { '0' })
        .collect();
    serde_json::to_string(&BandMask {
        resolution,
        mask,
        marked_cells: band.marked_cells,
        ambiguous: band.ambiguous,
        ranks,
    })
    .map_err(message)
}

#[wasm_bindgen]
pub fn analyze(fixed: &str, tele: &str) -> Result<String, JsError> {
    analyze_json(fixed, tele).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sweep(fixed: &str) -> Result<String, JsError> {
    sweep_json(fixed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn band_mask(fixed: &str, tele: &str, resolution: usize) -> Result<String, JsError> {
    band_mask_json(fixed, tele, resolution).map_err(|e| JsError::new(&e))
}
