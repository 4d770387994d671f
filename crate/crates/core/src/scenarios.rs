//! Initial conditions of the built-in scenarios.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{ScenarioConfig, ScenarioId};
use crate::error::Result;
use crate::mesh::{primitive_to_conserved, MacroField, Primitives, Regime, RegimeMask, SpatialGrid};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct InitialState<T> {
    pub u: MacroField<T>,
    pub mask: RegimeMask,
}

/// Primitive state of a scenario at `(x, y)`.
pub fn initial_primitives(cfg: &ScenarioConfig, x: f64, y: f64) -> Primitives<f64> {
    let g = &cfg.grid;
    let (xc, yc) = (g.x0 + 0.5 * g.lx, g.y0 + 0.5 * g.ly);
    match cfg.scenario {
        ScenarioId::GaussianOrder => {
            let d2 = (x - xc).powi(2) + (y - yc).powi(2);
            let bump = 0.1 * (-3.0 * d2).exp();
            let rho = 1.0 + bump;
            let t = 0.3 * (1.0 + bump);
            Primitives::from_rho_u_p(rho, 0.0, 0.0, rho * t)
        }
        ScenarioId::Sod => {
            if y <= yc {
                Primitives::from_rho_u_p(1.0, 0.0, 0.0, 1.0)
            } else {
                Primitives::from_rho_u_p(0.125, 0.0, 0.0, 0.03125)
            }
        }
        ScenarioId::KelvinHelmholtz => {
            let (rho, ux) = if y <= yc { (2.0, -0.5) } else { (1.0, 0.5) };
            let uy = 0.01 * (4.0 * std::f64::consts::PI * x).sin();
            Primitives::from_rho_u_p(rho, ux, uy, 1.0)
        }
        ScenarioId::ShockBubble => {
            if x <= -1.0 {
                let rho = 16.0 / 7.0;
                Primitives::from_rho_u_p(rho, (5.0f64 / 3.0).sqrt() * 7.0 / 16.0, 0.0, 4.75)
            } else {
                let d2 = (x - 0.5).powi(2) + y * y;
                Primitives::from_rho_u_p(1.0 + 1.5 * (-16.0 * d2).exp(), 0.0, 0.0, 1.0)
            }
        }
        ScenarioId::Cylinder | ScenarioId::Rectangle => Primitives::from_rho_u_p(1.0, 2.0, 0.0, 1.0),
    }
}

/// Conserved fields and starting regime mask. With `time.random_mask = p`
/// each cell is kinetic with probability `p`, drawn from a seeded ChaCha
/// stream in cell order.
pub fn init_scenario<T: Real>(cfg: &ScenarioConfig, grid: &SpatialGrid<T>) -> Result<InitialState<T>> {
    let gamma = cfg.gamma();
    let mut cells = Vec::with_capacity(grid.n_cells());
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let p = initial_primitives(cfg, grid.x_center(i).to_f64_lossy(), grid.y_center(j).to_f64_lossy());
            let u = primitive_to_conserved(&p, gamma).map_err(|e| e.at_cell(i, j))?;
            cells.push(u.map(T::lit));
        }
    }
    let mut mask = RegimeMask::uniform(grid, Regime::Fluid);
    if let Some(p) = cfg.time.random_mask {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for l in mask.labels.iter_mut() {
            let kinetic = rng.gen_bool(p);
            if *l == Regime::Fluid && kinetic {
                *l = Regime::Kinetic;
            }
        }
    }
    Ok(InitialState { u: MacroField { cells }, mask })
}
