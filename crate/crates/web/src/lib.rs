//! Browser bindings: each entry point takes plain text inputs and returns a
//! JSON string, so the page needs no extra glue beyond `JSON.parse`.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use hisfan::conditions::{g_table, guaranteed_monomials};
use hisfan::fan::{enumerate_greedy_fan, enumerate_statistical_fan, subset_fan, FanLimits, LeafRecord};
use hisfan::groebner::{algebraic_fan, vanishing_ideal, SweepOptions};
use hisfan::{load_design, Model, MonomialOrder, OrderKind};

#[derive(Serialize)]
struct FanView {
    n: usize,
    r: usize,
    level_counts: Vec<usize>,
    counts: std::collections::BTreeMap<&'static str, usize>,
    truncated: bool,
    leaves: Vec<LeafRecord>,
}

#[derive(Serialize)]
struct GRow {
    monomial: String,
    tuple: String,
    degree: u32,
    g: String,
    guaranteed: bool,
}

#[derive(Serialize)]
struct PlannerView {
    rows: Vec<GRow>,
    guaranteed: String,
}

#[derive(Serialize)]
struct GroebnerView {
    order: String,
    generators: Vec<String>,
    leading: Vec<String>,
    standard: String,
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable")
}

/// Leaves of the statistical fan of a design given as CSV text. `mode` is
/// one of `greedy`, `subset`, `all`, `exhaustive`, `algebraic`.
pub fn fan_json(design: &str, header: bool, mode: &str, cap: usize) -> Result<String, String> {
    let d = load_design(design, header).map_err(|e| e.to_string())?;
    let limits = FanLimits {
        max_leaves: cap.max(1),
        ..FanLimits::default()
    };
    let fan = match mode {
        "greedy" => enumerate_greedy_fan(&d, &limits),
        "subset" => subset_fan(&d, &limits),
        "all" => enumerate_greedy_fan(&d, &limits).and_then(|mut f| {
            f.merge(subset_fan(&d, &limits)?);
            Ok(f)
        }),
        "exhaustive" => enumerate_statistical_fan(&d, &limits),
        "algebraic" => algebraic_fan(
            &d,
            &SweepOptions {
                include_subsets: true,
                ..SweepOptions::default()
            },
        ),
        other => return Err(format!("unknown mode {other:?}")),
    }
    .map_err(|e| e.to_string())?;
    Ok(to_json(&FanView {
        n: d.n(),
        r: d.r(),
        level_counts: d.level_counts().to_vec(),
        counts: fan.counts(),
        truncated: fan.is_truncated(),
        leaves: fan.records().into_iter().take(cap.max(1)).collect(),
    }))
}

/// `G` values for a level box such as `4,3`, marking the monomials that every
/// leaf must contain once the design has `n` points.
pub fn planner_json(levels: &str, n: usize) -> Result<String, String> {
    let levels: Vec<usize> = levels
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| format!("bad level count {s:?}")))
        .collect::<Result<_, _>>()?;
    if levels.is_empty() || levels.iter().any(|&l| l < 1) {
        return Err("level counts must be positive".into());
    }
    let cells: usize = levels.iter().product();
    if cells > 4096 {
        return Err(format!("level box has {cells} monomials; the demo stops at 4096"));
    }
    let rows = g_table(&levels)
        .into_iter()
        .map(|e| GRow {
            monomial: e.monomial.to_string(),
            tuple: e.monomial.tuple_string(),
            degree: e.degree,
            g: e.g_value.to_string(),
            guaranteed: e.g_value <= n as u128,
        })
        .collect();
    let sure = Model::new(levels.len(), guaranteed_monomials(&levels, n)).map_err(|e| e.to_string())?;
    Ok(to_json(&PlannerView {
        rows,
        guaranteed: sure.to_string(),
    }))
}

/// Reduced Groebner basis of the vanishing ideal under `order`
/// (`lex`, `grlex`, `grevlex`), with an optional one-based ranking like
/// `2,3,4,1`.
pub fn groebner_json(design: &str, header: bool, order: &str, perm: &str) -> Result<String, String> {
    let d = load_design(design, header).map_err(|e| e.to_string())?;
    let kind: OrderKind = order.parse().map_err(|e: hisfan::Error| e.to_string())?;
    let order = if perm.trim().is_empty() {
        MonomialOrder::new(kind, d.r())
    } else {
        MonomialOrder::parse_permutation(kind, perm).map_err(|e| e.to_string())?
    };
    let (gb, quotient) = vanishing_ideal(&d, &order).map_err(|e| e.to_string())?;
    Ok(to_json(&GroebnerView {
        order: order.describe(),
        generators: gb.generators().iter().map(ToString::to_string).collect(),
        leading: gb.leading_monomials().iter().map(ToString::to_string).collect(),
        standard: quotient.to_string(),
    }))
}

#[wasm_bindgen]
pub fn fan(design: &str, header: bool, mode: &str, cap: usize) -> Result<String, JsValue> {
    fan_json(design, header, mode, cap).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn planner(levels: &str, n: usize) -> Result<String, JsValue> {
    planner_json(levels, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn groebner(design: &str, header: bool, order: &str, perm: &str) -> Result<String, JsValue> {
    groebner_json(design, header, order, perm).map_err(|e| JsValue::from_str(&e))
}
