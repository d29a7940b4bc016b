use serde_json::Value;
use teleskope_web::{analyze_json, band_mask_json, sweep_json};

#[test]
fn analyze_reports_ranks() {
    let v: Value = serde_json::from_str(&analyze_json("4,8,10", "1:12").unwrap()).unwrap();
    assert_eq!(v["profile"]["ranks"], serde_json::json!([1, 3, 0]));
    assert!(analyze_json("1,1,1", "1:2").unwrap_err().contains("not generic"));
    assert!(analyze_json("4,8,10", "12").is_err());
}

#[test]
fn sweep_lists_chamber_pairs() {
    let v: Value = serde_json::from_str(&sweep_json("4,8,10").unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 15);
}

#[test]
fn band_mask_matches_grid() {
    let v: Value = serde_json::from_str(&band_mask_json("4,8,10", "1:12", 64).unwrap()).unwrap();
    let mask = v["mask"].as_str().unwrap();
    assert_eq!(mask.len(), 64 * 64);
    assert_eq!(mask.chars().filter(|&c| c == '1').count() as u64, v["marked_cells"].as_u64().unwrap());
    assert!(band_mask_json("1,1", "0.5:1.5", 64).is_err());
    assert!(band_mask_json("4,8,10", "1:12", 4096).is_err());
}
