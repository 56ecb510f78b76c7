//! Aggregation of per-matrix JSON outputs into one table.

use std::fs;
use std::path::Path;

use logrank_core::Result;
use serde_json::{Map, Value};

use crate::output::round_floats;

pub const COLUMNS: &[&str] = &[
    "name",
    "kind",
    "rows",
    "cols",
    "rank",
    "disc_lower",
    "disc_upper",
    "disc_bound",
    "disc_margin",
    "amp_t",
    "amp_mu_mass",
    "amp_mass_floor",
    "amp_size_floor",
    "mono_min_ratio",
    "depth",
    "leaves",
    "balanced_depth",
    "sqrt_target",
    "depth_ratio",
    "exact_cc",
    "nw_bound",
    "pass",
    "sparsity",
    "min_side",
    "bound_ratio",
];

fn kind_of(v: &Value) -> &'static str {
    let has = |k: &str| v.get(k).is_some();
    if has("finder_calls") {
        "prove"
    } else if has("zero_rect") && has("sqrt_eps_r") {
        "rigidity-check"
    } else if has("bound_ratio") && has("rect") {
        "zero-rect"
    } else if has("subadditive") {
        "decomposition"
    } else if has("holds") && has("bound") {
        "disc"
    } else if has("mass_floor") {
        "amplify"
    } else if has("balanced_depth") {
        "protocol"
    } else {
        "other"
    }
}

fn num(v: &Value, path: &[&str]) -> Option<f64> {
    let mut cur = v;
    for p in path {
        cur = cur.get(*p)?;
    }
    cur.as_f64()
}

/// One table row for a single output file.
pub fn row(name: &str, v: &Value) -> Map<String, Value> {
    let mut r = Map::new();
    let kind = kind_of(v);
    r.insert("name".into(), Value::String(name.into()));
    r.insert("kind".into(), Value::String(kind.into()));
    let mut put = |k: &str, x: Option<f64>| {
        if let Some(x) = x {
            let v = if x.fract() == 0.0 && x.abs() < 1e15 { serde_json::json!(x as i64) } else { serde_json::json!(x) };
            r.insert(k.into(), round_floats(v));
        }
    };
    let complexity = |v: &Value, put: &mut dyn FnMut(&str, Option<f64>)| {
        for k in ["depth", "leaves", "balanced_depth", "sqrt_target", "nw_bound", "exact_cc"] {
            put(k, num(v, &[k]));
        }
        if let (Some(d), Some(t)) = (num(v, &["balanced_depth"]), num(v, &["sqrt_target"])) {
            put("depth_ratio", Some(d / t));
        }
    };
    match kind {
        "prove" => {
            put("rows", num(v, &["rows"]));
            put("cols", num(v, &["cols"]));
            put("rank", num(v, &["rank"]));
            put("disc_lower", num(v, &["disc", "lower"]));
            put("disc_upper", num(v, &["disc", "upper"]));
            put("disc_bound", num(v, &["disc", "bound"]));
            if let (Some(u), Some(b)) = (num(v, &["disc", "upper"]), num(v, &["disc", "bound"])) {
                put("disc_margin", Some(u - b));
            }
            if let Some(first) = v["finder_calls"].get(0) {
                put("amp_t", num(first, &["t"]));
                put("amp_mu_mass", num(first, &["mu_mass"]));
                put("amp_mass_floor", num(first, &["mass_floor"]));
                put("amp_size_floor", num(first, &["size_floor"]));
            }
            let ratios: Vec<f64> = v["finder_calls"]
                .as_array()
                .into_iter()
                .flatten()
                .filter_map(|c| Some(num(c, &["mono_area"])? / num(c, &["amplified_area"])?))
                .collect();
            if !ratios.is_empty() {
                put("mono_min_ratio", Some(ratios.iter().cloned().fold(f64::INFINITY, f64::min)));
            }
            if let Some(c) = v.get("complexity").filter(|c| !c.is_null()) {
                complexity(c, &mut put);
            }
        }
        "disc" => {
            put("rank", num(v, &["rank"]));
            put("disc_lower", num(v, &["lower"]));
            put("disc_upper", num(v, &["upper"]));
            put("disc_bound", num(v, &["bound"]));
            put("disc_margin", num(v, &["margin"]));
        }
        "amplify" => {
            put("amp_t", num(v, &["t"]));
            put("amp_mu_mass", num(v, &["mu_mass"]));
            put("amp_mass_floor", num(v, &["mass_floor"]));
            put("amp_size_floor", num(v, &["size_floor"]));
        }
        "protocol" => {
            put("rows", num(v, &["rows"]));
            put("cols", num(v, &["cols"]));
            put("rank", num(v, &["rank"]));
            complexity(v, &mut put);
        }
        "rigidity-check" => {
            put("rows", num(v, &["n_rows"]));
            put("cols", num(v, &["n_cols"]));
            put("rank", num(v, &["rank"]));
            put("sparsity", num(v, &["sparsity"]));
            put("min_side", num(v, &["zero_rect", "min_side"]));
            put("bound_ratio", num(v, &["bound_ratio"]));
        }
        "zero-rect" => {
            put("rank", num(v, &["rank"]));
            put("sparsity", num(v, &["sparsity"]));
            put("min_side", num(v, &["min_side"]));
            put("bound_ratio", num(v, &["bound_ratio"]));
        }
        "decomposition" => {
            put("rank", num(v, &["rank_m"]));
            put("min_side", num(v, &["min_side"]));
        }
        _ => {}
    }
    if let Some(p) = v.get("pass").and_then(Value::as_bool) {
        r.insert("pass".into(), Value::Bool(p));
    }
    r
}

/// Rows for every `*.json` file in `dir` except `manifest.json`, sorted by
/// file name.
pub fn aggregate(dir: &Path) -> Result<Vec<Map<String, Value>>> {
    let mut files: Vec<_> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json") && p.file_name().is_some_and(|n| n != "manifest.json"))
        .collect();
    files.sort();
    files
        .iter()
        .map(|p| {
            let v: Value = serde_json::from_str(&fs::read_to_string(p)?)?;
            let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            Ok(row(&name, &v))
        })
        .collect()
}
