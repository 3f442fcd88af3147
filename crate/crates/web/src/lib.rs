//! Browser bindings for the static demo page in `www/`. Every export returns
//! a JSON string; the `*_json` functions hold the logic and run natively.

use fbcodes::gen::{random_batch, rng};
use fbcodes::gf2::{Gf2Vec, HgMatrix};
use fbcodes::graph::{
    apply_reordering, build_xtype_graph, cycle_partition, good_path_between_pair,
};
use fbcodes::params::Alpha;
use fbcodes::solvers::{solve, Strategy};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// The small example matrix whose column `i` holds the integer `i`.
fn identity_matrix(s: u32) -> Result<HgMatrix, String> {
    if !(1..=6).contains(&s) {
        return Err("the demo draws s = 1..6".into());
    }
    HgMatrix::from_raw_columns(s, (0..1u32 << s).collect()).map_err(|e| e.to_string())
}

fn shift(text: &str, s: u32) -> Result<Gf2Vec, String> {
    let x: Gf2Vec = text
        .trim()
        .parse()
        .map_err(|e: fbcodes::Error| e.to_string())?;
    if x.dim() != s {
        return Err(format!("x must have {s} bits"));
    }
    Ok(x)
}

fn columns(g: &HgMatrix) -> Vec<String> {
    g.columns().iter().map(|c| c.to_string()).collect()
}

pub fn cycles_json(s: u32, x: &str) -> Result<String, String> {
    let g = identity_matrix(s)?;
    let graph = build_xtype_graph(&g, shift(x, s)?).map_err(|e| e.to_string())?;
    let part = cycle_partition(&graph);
    let cycles: Vec<&Vec<usize>> = part.cycles.iter().map(|c| &c.nodes).collect();
    Ok(json!({ "columns": columns(&g), "cycles": cycles }).to_string())
}

pub fn reorder_json(s: u32, x: &str, t: usize) -> Result<String, String> {
    let g = identity_matrix(s)?;
    let path = good_path_between_pair(&g, shift(x, s)?, t).map_err(|e| e.to_string())?;
    let after = apply_reordering(g.clone(), &path).map_err(|e| e.to_string())?;
    let sums = |g: &HgMatrix| -> Vec<String> {
        (0..g.pairs()).map(|p| g.pair_sum(p).to_string()).collect()
    };
    Ok(json!({
        "path": path.nodes,
        "before": columns(&g),
        "after": columns(&after),
        "sums_before": sums(&g),
        "sums_after": sums(&after),
    })
    .to_string())
}

pub fn solve_json(
    s: u32,
    k: usize,
    seed: u64,
    strategy: &str,
    alpha: &str,
) -> Result<String, String> {
    if !(2..=10).contains(&s) {
        return Err("the demo solves s = 2..10".into());
    }
    let strategy = match strategy {
        "auto" => None,
        name => Some(Strategy::parse(name).map_err(|e| e.to_string())?),
    };
    let alpha = match strategy {
        Some(Strategy::Alpha) => Some(Alpha::parse(alpha).map_err(|e| e.to_string())?),
        _ => None,
    };
    let m = random_batch(s, k, &mut rng(seed));
    let sol = solve(&m, strategy, alpha).map_err(|e| e.to_string())?;
    let requests: Vec<String> = m.vectors().iter().map(|v| v.to_string()).collect();
    let servers: Vec<String> = sol.servers.iter().map(|v| v.to_string()).collect();
    Ok(json!({
        "strategy": sol.strategy.name(),
        "requests": requests,
        "servers": servers,
        "recovery_sets": sol.recovery_sets,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn xtype_cycles(s: u32, x: &str) -> Result<String, JsValue> {
    cycles_json(s, x).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn reorder_demo(s: u32, x: &str, t: usize) -> Result<String, JsValue> {
    reorder_json(s, x, t).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn solve_random(
    s: u32,
    k: usize,
    seed: u64,
    strategy: &str,
    alpha: &str,
) -> Result<String, JsValue> {
    solve_json(s, k, seed, strategy, alpha).map_err(|e| JsValue::from_str(&e))
}
