//! Every default grid size, tolerance and threshold in one place.
//!
//! The table is versioned; the CLI prints it with `--show-defaults`.

use serde::Serialize;

pub const VERSION: u32 = 1;

pub const INVERSE_TOL: f64 = crate::functions::DEFAULT_INVERSE_TOL;
pub const LAMBDAS: [f64; 4] = [2.0, 4.0, 8.0, 16.0];
pub const S_PER_DECADE: usize = 64;
pub const POSITIVE_INCREASE_MARGIN: f64 = 0.05;
/// A trend slope `d ln(m−1) / d ln ln s_max` below this counts as drift
/// toward 1.
pub const DRIFT_SLOPE: f64 = -0.1;
pub const REGVAR_SPREAD: f64 = 0.10;
/// Floor applied to `|index|` when judging the relative spread of index
/// estimates, so slowly varying functions are not penalised for noise
/// around zero.
pub const REGVAR_SPREAD_FLOOR: f64 = 0.1;
pub const AUX_LAMBDA_POINTS: usize = 400;
pub const AUX_MIN_LOG_LAMBDA: f64 = 1e-6;
pub const QUASI_TOL: f64 = 1e-9;
pub const M_MAX_GRID: usize = 512;
pub const M_MAX_XTOL: f64 = 1e-12;
pub const M_MAX_TABLE_PER_DECADE: usize = 256;
pub const EPSILON: f64 = 0.1;
pub const DELTA: f64 = 0.9;
pub const PRODUCT_TREND_TOL: f64 = 0.1;
pub const CFL: f64 = 0.9;
pub const STEP_BUDGET: f64 = 4e9;
pub const ENERGY_GROWTH_TOL: f64 = 1e-6;

#[derive(Debug, Serialize)]
pub struct DefaultsTable {
    pub version: u32,
    pub inverse_tol: f64,
    pub lambdas: [f64; 4],
    pub s_points_per_decade: usize,
    pub positive_increase_margin: f64,
    pub drift_slope: f64,
    pub regvar_spread: f64,
    pub regvar_spread_floor: f64,
    pub aux_lambda_points: usize,
    pub aux_min_log_lambda: f64,
    pub quasi_tol: f64,
    pub m_max_grid: usize,
    pub m_max_xtol: f64,
    pub m_max_table_per_decade: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub product_trend_tol: f64,
    pub cfl: f64,
    pub step_budget: f64,
    pub energy_growth_tol: f64,
}

pub fn table() -> DefaultsTable {
    DefaultsTable {
        version: VERSION,
        inverse_tol: INVERSE_TOL,
        lambdas: LAMBDAS,
        s_points_per_decade: S_PER_DECADE,
        positive_increase_margin: POSITIVE_INCREASE_MARGIN,
        drift_slope: DRIFT_SLOPE,
        regvar_spread: REGVAR_SPREAD,
        regvar_spread_floor: REGVAR_SPREAD_FLOOR,
        aux_lambda_points: AUX_LAMBDA_POINTS,
        aux_min_log_lambda: AUX_MIN_LOG_LAMBDA,
        quasi_tol: QUASI_TOL,
        m_max_grid: M_MAX_GRID,
        m_max_xtol: M_MAX_XTOL,
        m_max_table_per_decade: M_MAX_TABLE_PER_DECADE,
        epsilon: EPSILON,
        delta: DELTA,
        product_trend_tol: PRODUCT_TREND_TOL,
        cfl: CFL,
        step_budget: STEP_BUDGET,
        energy_growth_tol: ENERGY_GROWTH_TOL,
    }
}
