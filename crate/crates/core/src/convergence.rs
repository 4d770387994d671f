//! Temporal convergence studies by successive step halving.

use serde::{Deserialize, Serialize};

use crate::config::{ScenarioConfig, SolverMode};
use crate::error::{Error, Result};
use crate::mesh::{MacroField, Regime, RegimeMask, SpatialGrid};
use crate::scalar::Real;
use crate::solver::Simulation;

/// One line of a convergence table. `err` compares the run with the next
/// finer one; `order` compares consecutive errors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub dt: f64,
    pub err: Option<f64>,
    pub order: Option<f64>,
    pub mode: SolverMode,
    pub epsilon: f64,
}

/// `sqrt(sum |U_a - U_b|^2 dx dy)` over non-obstacle cells.
pub fn l2_difference<T: Real>(a: &MacroField<T>, b: &MacroField<T>, grid: &SpatialGrid<T>, mask: &RegimeMask) -> f64 {
    let area = grid.cell_area().to_f64_lossy();
    let mut s = 0.0;
    for (c, (ua, ub)) in a.cells.iter().zip(&b.cells).enumerate() {
        if mask.get(c) == Regime::Obstacle {
            continue;
        }
        for q in 0..4 {
            let d = (ua[q] - ub[q]).to_f64_lossy();
            s += d * d;
        }
    }
    (s * area).sqrt()
}

/// `log2(e_m / e_{m+1})` for consecutive errors of halved steps.
pub fn richardson_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

/// Runs `cfg` to its final time with each fixed step in `dts`.
pub fn run_fixed_dt<T: Real>(cfg: &ScenarioConfig, dt: f64) -> Result<Simulation<T>> {
    let mut c = cfg.clone();
    c.time.dt = Some(dt);
    let t_end = c.time.t_end;
    let n = (t_end / dt).round();
    if !(n >= 1.0) || ((n * dt - t_end).abs() > 1e-9 * t_end) {
        return Err(Error::config("time.dt", format!("{dt} does not divide t_end = {t_end}")));
    }
    let mut sim = Simulation::<T>::new(c)?;
    for _ in 0..n as usize {
        sim.step(T::lit(dt))?;
    }
    Ok(sim)
}

/// Errors between successive runs and the observed orders. `dts` must be
/// decreasing.
pub fn run_convergence_study<T: Real>(cfg: &ScenarioConfig, dts: &[f64]) -> Result<Vec<ConvergenceRow>> {
    if dts.len() < 2 || dts.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::config("dts", "need at least two strictly decreasing time steps"));
    }
    let mut fields = Vec::with_capacity(dts.len());
    let mut geometry = None;
    for &dt in dts {
        let sim = run_fixed_dt::<T>(cfg, dt)?;
        log::info!("dt = {dt:e}: {} steps, kinetic fraction {:.3}", sim.steps, sim.mask.kinetic_fraction());
        if geometry.is_none() {
            geometry = Some((sim.grid.clone(), sim.mask.clone()));
        }
        fields.push(sim.u);
    }
    let (grid, mask) = geometry.expect("at least one run");
    let errors: Vec<f64> = fields.windows(2).map(|w| l2_difference(&w[0], &w[1], &grid, &mask)).collect();
    let orders = richardson_orders(&errors);
    Ok(dts
        .iter()
        .enumerate()
        .map(|(m, &dt)| ConvergenceRow {
            dt,
            err: errors.get(m).copied(),
            order: orders.get(m).copied(),
            mode: cfg.mode,
            epsilon: cfg.physics.epsilon,
        })
        .collect())
}

/// Base step halved `count - 1` times.
pub fn halving_sequence(base: f64, count: usize) -> Vec<f64> {
    (0..count).map(|m| base / 2f64.powi(m as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_of_power_laws() {
        let e: Vec<f64> = halving_sequence(0.1, 4).iter().map(|h| 3.0 * h * h * h).collect();
        for o in richardson_orders(&e) {
            assert!((o - 3.0).abs() < 1e-12);
        }
        assert_eq!(halving_sequence(1.0, 3), vec![1.0, 0.5, 0.25]);
    }

    #[test]
    fn rejects_bad_step_lists() {
        let cfg = ScenarioConfig::preset(crate::config::ScenarioId::Sod, crate::config::Preset::Desk);
        assert!(run_convergence_study::<f64>(&cfg, &[0.1]).is_err());
        assert!(run_convergence_study::<f64>(&cfg, &[0.1, 0.2]).is_err());
        assert!(run_fixed_dt::<f64>(&cfg, 0.04).is_err());
    }
}
