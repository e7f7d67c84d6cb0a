//! Browser demo: three interactive computations exported through
//! wasm-bindgen. Each export returns a flat `Float64Array` of row-major
//! records so the page can plot without any JS-side parsing.
//!
//! The pure `*_rows` functions carry the logic and are tested natively.

use spinwitness::entanglement::PairConcurrence;
use spinwitness::spin_model::{AnisoDimerParams, ClusterSpec, SpinMagnitude};
use spinwitness::thermo::AnisoDimerModel;
use spinwitness::witness::{linear_grid, sweep_spin, AllToAllKind};
use wasm_bindgen::prelude::*;

/// Largest grid a single call will evaluate.
pub const MAX_POINTS: usize = 5000;

fn check_points(points: usize) -> Result<(), String> {
    if (2..=MAX_POINTS).contains(&points) {
        Ok(())
    } else {
        Err(format!("points must be in 2..={MAX_POINTS}, got {points}"))
    }
}

/// Records `[T, C12, C23]` for the open tetramer on a linear T grid.
pub fn concurrence_rows(
    alpha: f64,
    j: f64,
    t_min: f64,
    t_max: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    check_points(points)?;
    if !(t_min > 0.0 && t_max > t_min) {
        return Err("need 0 < t_min < t_max".into());
    }
    let cluster =
        ClusterSpec::linear_tetramer(SpinMagnitude::HALF, alpha, j).map_err(|e| e.to_string())?;
    let pc = PairConcurrence::new(&cluster).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(3 * points);
    for t in linear_grid(t_min, t_max, points) {
        let c12 = pc.at(t, 0, 1).map_err(|e| format!("T = {t}: {e}"))?;
        let c23 = pc.at(t, 1, 2).map_err(|e| format!("T = {t}: {e}"))?;
        out.extend([t, c12.c, c23.c]);
    }
    Ok(out)
}

/// Records `[B/J, P, Q, P+Q]` for the anisotropic spin-1 dimer, J = 1.
pub fn pq_rows(
    delta: f64,
    d: f64,
    beta_j: f64,
    b_max: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    check_points(points)?;
    if !(beta_j > 0.0 && b_max > 0.0) {
        return Err("need beta_j > 0 and b_max > 0".into());
    }
    let model = AnisoDimerModel::new().map_err(|e| e.to_string())?;
    let pts = model
        .scan(
            &AnisoDimerParams::new(1.0, delta, d, 0.0),
            beta_j,
            &linear_grid(0.0, b_max, points),
        )
        .map_err(|e| e.to_string())?;
    Ok(pts
        .iter()
        .flat_map(|p| [p.b_over_j, p.p, p.q, p.sum()])
        .collect())
}

/// Records `[S, T_E, t_E]` for S = 1/2 .. s_max (given as 2S), J = 1.
pub fn gap_rows(cluster: &str, twice_s_max: u32) -> Result<Vec<f64>, String> {
    if !(1..=12).contains(&twice_s_max) {
        return Err("2*s_max must be in 1..=12".into());
    }
    let kind: AllToAllKind = cluster
        .parse()
        .map_err(|e: spinwitness::Error| e.to_string())?;
    let rows = sweep_spin(kind, twice_s_max, 1.0).map_err(|e| e.to_string())?;
    Ok(rows
        .iter()
        .flat_map(|r| [r.spin.value(), r.t_e, r.t_e_scaled])
        .collect())
}

#[wasm_bindgen]
pub fn concurrence_curve(
    alpha: f64,
    j: f64,
    t_min: f64,
    t_max: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    concurrence_rows(alpha, j, t_min, t_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn pq_scan(
    delta: f64,
    d: f64,
    beta_j: f64,
    b_max: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    pq_rows(delta, d, beta_j, b_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn gap_temperature_vs_spin(cluster: &str, twice_s_max: u32) -> Result<Vec<f64>, JsError> {
    gap_rows(cluster, twice_s_max).map_err(|e| JsError::new(&e))
}
