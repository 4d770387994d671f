//! Dynamic domain decomposition: regime switching, projection and lifting
//! between the kinetic and fluid descriptions, and buffer exchange.

use rayon::prelude::*;

use crate::config::{ScenarioConfig, TauModel};
use crate::error::Result;
use crate::indicators::{compute_gradients, fluid_breakdown, kinetic_relabel_ok, s1_matrix};
use crate::mesh::{
    conserved_to_primitive, Conserved, KineticField, MacroField, Primitives, Regime, RegimeMask, SpatialGrid,
    VelocityGrid,
};
use crate::moments::{compute_moments, conserved_moments, relaxation_time, Closure};
use crate::scalar::Real;

/// `U = (rho, rho u, E)` of a kinetic cell.
#[inline]
pub fn project_to_macro<T: Real>(f: &[T], vgrid: &VelocityGrid<T>) -> Conserved<T> {
    conserved_moments(f, vgrid)
}

/// Equilibrium distribution with the conserved moments `u`.
pub fn lift_to_kinetic<T: Real>(
    u: &Conserved<T>,
    gamma: T,
    closure: &Closure<T>,
    vgrid: &VelocityGrid<T>,
    out: &mut [T],
) -> Result<()> {
    let p = conserved_to_primitive(u, gamma)?;
    closure.maxwellian_into(p.rho, [p.ux, p.uy], p.temperature, vgrid, out)
}

/// What the exchange pass does for one cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellRole {
    Idle,
    /// Fluid cell whose kinetic image is read by kinetic stencils.
    Lift,
    /// Kinetic cell whose macroscopic state is read by fluid stencils.
    Project,
}

/// Per-cell exchange roles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BufferRoles {
    pub roles: Vec<CellRole>,
}

impl BufferRoles {
    pub fn count(&self, r: CellRole) -> usize {
        self.roles.iter().filter(|&&x| x == r).count()
    }
}

fn near<T: Real>(grid: &SpatialGrid<T>, mask: &RegimeMask, c: usize, other: Regime, width: usize) -> bool {
    let (i, j) = grid.coords(c);
    let w = width as isize;
    (-w..=w).filter(|&s| s != 0).any(|s| {
        let cx = grid.index(grid.wrap_x(i as isize + s), j);
        let cy = grid.index(i, grid.wrap_y(j as isize + s));
        mask.get(cx) == other || mask.get(cy) == other
    })
}

/// Roles for the per-stage buffer synchronization.
pub fn buffer_roles<T: Real>(grid: &SpatialGrid<T>, mask: &RegimeMask, width: usize) -> BufferRoles {
    let roles = (0..grid.n_cells())
        .map(|c| match mask.get(c) {
            Regime::Fluid if near(grid, mask, c, Regime::Kinetic, width) => CellRole::Lift,
            Regime::Kinetic if near(grid, mask, c, Regime::Fluid, width) => CellRole::Project,
            _ => CellRole::Idle,
        })
        .collect();
    BufferRoles { roles }
}

/// Roles for the full coupling pass: every kinetic cell is projected and
/// fluid buffers are lifted.
pub fn coupling_roles<T: Real>(grid: &SpatialGrid<T>, mask: &RegimeMask, width: usize) -> BufferRoles {
    let mut b = buffer_roles(grid, mask, width);
    for (r, l) in b.roles.iter_mut().zip(&mask.labels) {
        if *l == Regime::Kinetic {
            *r = CellRole::Project;
        }
    }
    b
}

/// Applies the exchange roles in place.
pub fn exchange<T: Real>(
    roles: &BufferRoles,
    grid: &SpatialGrid<T>,
    vgrid: &VelocityGrid<T>,
    closure: &Closure<T>,
    gamma: T,
    u: &mut MacroField<T>,
    f: &mut KineticField<T>,
) -> Result<()> {
    if f.is_empty() {
        return Ok(());
    }
    let nk = f.n_nodes;
    f.data
        .par_chunks_mut(nk)
        .zip(u.cells.par_iter_mut())
        .enumerate()
        .try_for_each(|(c, (fc, uc))| match roles.roles[c] {
            CellRole::Idle => Ok(()),
            CellRole::Project => {
                *uc = project_to_macro(fc, vgrid);
                Ok(())
            }
            CellRole::Lift => lift_to_kinetic(uc, gamma, closure, vgrid, fc).map_err(|e| {
                let (i, j) = grid.coords(c);
                e.at_cell(i, j)
            }),
        })
}

/// Cells that changed regime in one update.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SwitchCounts {
    pub to_kinetic: usize,
    pub to_fluid: usize,
}

/// Kinetic fraction and switches recorded after a step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecompositionStats {
    pub time: f64,
    pub fraction: f64,
    pub to_kinetic: usize,
    pub to_fluid: usize,
}

pub fn record_stats(time: f64, mask: &RegimeMask, switches: SwitchCounts) -> DecompositionStats {
    DecompositionStats {
        time,
        fraction: mask.kinetic_fraction(),
        to_kinetic: switches.to_kinetic,
        to_fluid: switches.to_fluid,
    }
}

/// Switching criteria and their parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decomposer<T> {
    pub closure: Closure<T>,
    pub gamma: T,
    pub epsilon: T,
    pub beta: T,
    pub tau_model: TauModel,
    pub indicator_dimension: usize,
    pub eta: T,
    pub delta: T,
    pub buffer_width: usize,
}

impl<T: Real> Decomposer<T> {
    pub fn from_config(cfg: &ScenarioConfig) -> Self {
        let p = &cfg.physics;
        Decomposer {
            closure: Closure::new(T::lit(p.beta), p.equilibrium, T::lit(p.vacuum_threshold)),
            gamma: T::lit(cfg.gamma()),
            epsilon: T::lit(p.epsilon),
            beta: T::lit(p.beta),
            tau_model: p.tau_model,
            indicator_dimension: p.indicator_dimension,
            eta: T::lit(cfg.thresholds.eta),
            delta: T::lit(cfg.thresholds.delta),
            buffer_width: cfg.thresholds.buffer_width,
        }
    }

    /// Evaluates both criteria on the current state. All cells are judged
    /// against the same old mask.
    pub fn update_regimes(
        &self,
        grid: &SpatialGrid<T>,
        vgrid: &VelocityGrid<T>,
        mask: &RegimeMask,
        u: &MacroField<T>,
        f: &KineticField<T>,
    ) -> Result<(RegimeMask, SwitchCounts)> {
        let n = grid.n_cells();
        let filler = Primitives::from_rho_u_p(T::one(), T::zero(), T::zero(), T::one());
        let prims: Vec<Primitives<T>> = (0..n)
            .into_par_iter()
            .map(|c| {
                if mask.get(c) == Regime::Obstacle {
                    return Ok(filler);
                }
                conserved_to_primitive(&u.cells[c], self.gamma).map_err(|e| {
                    let (i, j) = grid.coords(c);
                    e.at_cell(i, j)
                })
            })
            .collect::<Result<_>>()?;
        let grads = compute_gradients(&prims, grid);
        let labels: Vec<Regime> = (0..n)
            .into_par_iter()
            .map(|c| {
                let old = mask.get(c);
                if old == Regime::Obstacle {
                    return Ok(old);
                }
                let p = &prims[c];
                let tau = relaxation_time(self.tau_model, p.rho);
                let s1 = s1_matrix(p, &grads[c], self.epsilon, self.beta, tau, self.indicator_dimension)?;
                Ok(match old {
                    Regime::Fluid if fluid_breakdown(&s1, self.eta)? => Regime::Kinetic,
                    Regime::Kinetic => {
                        let fc = f.cell(c);
                        let m = compute_moments(fc, vgrid, self.closure.vacuum)?;
                        if kinetic_relabel_ok(fc, &m, &s1, self.eta, self.delta, vgrid, &self.closure)? {
                            Regime::Fluid
                        } else {
                            Regime::Kinetic
                        }
                    }
                    other => other,
                })
            })
            .collect::<Result<_>>()?;
        let mut sw = SwitchCounts::default();
        for (a, b) in mask.labels.iter().zip(&labels) {
            match (a, b) {
                (Regime::Fluid, Regime::Kinetic) => sw.to_kinetic += 1,
                (Regime::Kinetic, Regime::Fluid) => sw.to_fluid += 1,
                _ => {}
            }
        }
        Ok((RegimeMask { labels }, sw))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{BoundaryKind, EquilibriumKind, Preset, ScenarioId};

    fn setup() -> (SpatialGrid<f64>, VelocityGrid<f64>, Closure<f64>) {
        let g = SpatialGrid::new(12, 8, 1.0, 1.0, BoundaryKind::Periodic, BoundaryKind::ZeroGradient).unwrap();
        let v = VelocityGrid::new(16, 8.0).unwrap();
        (g, v, Closure::new(-0.5, EquilibriumKind::Conservative, 1e-12))
    }

    #[test]
    fn lift_then_project_is_identity() {
        let (_, v, c) = setup();
        let u = [0.125, 0.05, -0.02, 0.03125 + 0.5 * (0.0029) / 0.125];
        let mut f = vec![0.0; v.n_nodes()];
        lift_to_kinetic(&u, 2.0, &c, &v, &mut f).unwrap();
        let back = project_to_macro(&f, &v);
        for q in 0..4 {
            assert!((back[q] - u[q]).abs() <= 1e-12 * u[q].abs().max(1.0));
        }
    }

    #[test]
    fn buffers_cover_two_cells() {
        let (g, _, _) = setup();
        let mut mask = RegimeMask::uniform(&g, Regime::Fluid);
        mask.labels[g.index(5, 4)] = Regime::Kinetic;
        let r = buffer_roles(&g, &mask, 2);
        assert_eq!(r.roles[g.index(5, 4)], CellRole::Project);
        assert_eq!(r.count(CellRole::Lift), 8);
        assert_eq!(r.roles[g.index(7, 4)], CellRole::Lift);
        assert_eq!(r.roles[g.index(8, 4)], CellRole::Idle);
        assert_eq!(r.roles[g.index(6, 5)], CellRole::Idle);
        // periodic wrap in x
        mask.labels[g.index(5, 4)] = Regime::Fluid;
        mask.labels[g.index(0, 4)] = Regime::Kinetic;
        let r = buffer_roles(&g, &mask, 2);
        assert_eq!(r.roles[g.index(10, 4)], CellRole::Lift);
    }

    #[test]
    fn zero_epsilon_keeps_everything_fluid() {
        let mut cfg = ScenarioConfig::preset(ScenarioId::Sod, Preset::Desk);
        cfg.physics.epsilon = 0.0;
        cfg.thresholds.eta = 0.0;
        let (g, v, c) = setup();
        let d = Decomposer::<f64>::from_config(&cfg);
        let mask = RegimeMask::uniform(&g, Regime::Fluid);
        let u = MacroField {
            cells: (0..g.n_cells())
                .map(|k| {
                    let r = if k % 3 == 0 { 1.0 } else { 0.125 };
                    [r, 0.0, 0.0, r]
                })
                .collect(),
        };
        let (m, sw) = d.update_regimes(&g, &v, &mask, &u, &KineticField::empty()).unwrap();
        assert_eq!(m.count(Regime::Kinetic), 0);
        assert_eq!(sw, SwitchCounts::default());
        let _ = c;
    }

    #[test]
    fn steep_gradient_switches_to_kinetic_and_back() {
        let mut cfg = ScenarioConfig::preset(ScenarioId::Sod, Preset::Desk);
        cfg.physics.epsilon = 1e-2;
        cfg.thresholds.eta = 1e-4;
        let (g, v, c) = setup();
        let d = Decomposer::<f64>::from_config(&cfg);
        let u = MacroField {
            cells: (0..g.n_cells())
                .map(|k| {
                    let (_, j) = g.coords(k);
                    let r = if j < 4 { 1.0 } else { 0.125 };
                    let p = if j < 4 { 1.0 } else { 0.1 };
                    [r, 0.0, 0.0, p]
                })
                .collect(),
        };
        let mask = RegimeMask::uniform(&g, Regime::Fluid);
        let (m, sw) = d.update_regimes(&g, &v, &mask, &u, &KineticField::empty()).unwrap();
        assert!(sw.to_kinetic > 0 && sw.to_kinetic < g.n_cells());
        assert_eq!(m.get(g.index(0, 3)), Regime::Kinetic);
        assert_eq!(m.get(g.index(0, 0)), Regime::Fluid);

        // a uniform equilibrium state relabels every kinetic cell as fluid
        let uni = MacroField { cells: vec![[1.0, 0.1, 0.0, 1.005]; g.n_cells()] };
        let mut f = KineticField::zeros(g.n_cells(), v.n_nodes());
        let all = RegimeMask::uniform(&g, Regime::Kinetic);
        let roles = coupling_roles(&g, &RegimeMask::uniform(&g, Regime::Fluid), 2);
        assert_eq!(roles.count(CellRole::Idle), g.n_cells());
        for k in 0..g.n_cells() {
            lift_to_kinetic(&uni.cells[k], 2.0, &c, &v, f.cell_mut(k)).unwrap();
        }
        let (m, sw) = d.update_regimes(&g, &v, &all, &uni, &f).unwrap();
        assert_eq!(m.count(Regime::Fluid), g.n_cells());
        assert_eq!(sw.to_fluid, g.n_cells());
    }
}
