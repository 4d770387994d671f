//! Time stepping of the hybrid kinetic/fluid system.

use std::time::Instant;

use rayon::prelude::*;

use crate::config::{ScenarioConfig, SolverMode};
use crate::domain::{buffer_roles, coupling_roles, exchange, lift_to_kinetic, record_stats, BufferRoles, CellRole, Decomposer, DecompositionStats, SwitchCounts};
use crate::error::{Error, Result};
use crate::imex::{ars233, cfl_timestep, implicit_relaxation_solve, ButcherPair};
use crate::mesh::{
    build_grids, conserved_to_primitive, Conserved, KineticField, MacroField, Primitives, Regime, RegimeMask,
    SpatialGrid, VelocityGrid,
};
use crate::moments::{relaxation_time, Closure};
use crate::scalar::Real;
use crate::scenarios::init_scenario;
use crate::spatial::{Discretization, FaceFluxes, Weights};

/// Accumulated wall-clock seconds per phase.
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Timings {
    pub regime_update: f64,
    pub fluxes: f64,
    pub relaxation: f64,
    pub coupling: f64,
    pub total: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepReport {
    pub dt: f64,
    pub switches: SwitchCounts,
    pub kinetic_fraction: f64,
}

/// Which columns of the stage arrays are ever read.
#[derive(Clone, Debug)]
struct Usage {
    transport: Vec<bool>,
    explicit_collision: Vec<bool>,
    trivial_first: bool,
}

impl Usage {
    fn of(pair: &ButcherPair) -> Self {
        let s = pair.stages();
        let col = |a: &Vec<Vec<f64>>, b: &Vec<f64>, j: usize| b[j] != 0.0 || (j + 1..s).any(|i| a[i][j] != 0.0);
        let transport = (0..s)
            .map(|j| col(&pair.explicit.a, &pair.explicit.b, j) || col(&pair.fluid.a, &pair.fluid.b, j))
            .collect();
        let explicit_collision =
            (0..s).map(|j| pair.implicit.a[j][j] == 0.0 && col(&pair.implicit.a, &pair.implicit.b, j)).collect();
        let trivial_first = pair.implicit.a[0][0] == 0.0;
        Usage { transport, explicit_collision, trivial_first }
    }
}

pub struct Simulation<T: Real> {
    pub config: ScenarioConfig,
    pub grid: SpatialGrid<T>,
    pub vgrid: VelocityGrid<T>,
    /// Macroscopic state; valid on every non-obstacle cell between steps.
    pub u: MacroField<T>,
    /// Kinetic state on kinetic cells and fluid buffers; empty in Euler mode.
    pub f: KineticField<T>,
    pub mask: RegimeMask,
    pub time: T,
    pub steps: usize,
    pub stats: Vec<DecompositionStats>,
    pub timings: Timings,
    pair: ButcherPair,
    usage: Usage,
    decomposer: Decomposer<T>,
    weights: Weights,
    roles: BufferRoles,
    needs_coupling: bool,
    ws: FaceFluxes<T>,
    us: MacroField<T>,
    fs: KineticField<T>,
    transport: Vec<KineticField<T>>,
    collision: Vec<KineticField<T>>,
    fluid_rhs: Vec<MacroField<T>>,
}

impl<T: Real> Simulation<T> {
    pub fn new(config: ScenarioConfig) -> Result<Self> {
        Self::with_pair(config, ars233())
    }

    pub fn with_pair(config: ScenarioConfig, pair: ButcherPair) -> Result<Self> {
        config.validate()?;
        let (grid, vgrid) = build_grids::<T>(&config)?;
        let init = init_scenario::<T>(&config, &grid)?;
        let mask = match config.mode {
            SolverMode::FullEuler => RegimeMask::uniform(&grid, Regime::Fluid),
            SolverMode::FullKinetic => RegimeMask::uniform(&grid, Regime::Kinetic),
            SolverMode::Hybrid | SolverMode::HybridLoc => init.mask,
        };
        Self::from_state(config, pair, grid, vgrid, init.u, mask)
    }

    /// Starts from explicit macroscopic data and mask; kinetic cells are
    /// lifted to equilibrium.
    pub fn from_state(
        config: ScenarioConfig,
        pair: ButcherPair,
        grid: SpatialGrid<T>,
        vgrid: VelocityGrid<T>,
        u: MacroField<T>,
        mask: RegimeMask,
    ) -> Result<Self> {
        if u.cells.len() != grid.n_cells() || mask.labels.len() != grid.n_cells() {
            return Err(Error::Contract("state size does not match the grid".into()));
        }
        let s = pair.stages();
        let usage = Usage::of(&pair);
        let kinetic = config.mode != SolverMode::FullEuler;
        let n = grid.n_cells();
        let nk = vgrid.n_nodes();
        let kfield = |on: bool| if on && kinetic { KineticField::zeros(n, nk) } else { KineticField::empty() };
        let decomposer = Decomposer::from_config(&config);
        let mut sim = Simulation {
            f: kfield(true),
            fs: kfield(true),
            transport: (0..s).map(|j| kfield(usage.transport[j])).collect(),
            collision: (0..s)
                .map(|j| kfield(pair.implicit.a[j][j] != 0.0 || usage.explicit_collision[j]))
                .collect(),
            fluid_rhs: (0..s)
                .map(|j| if usage.transport[j] { MacroField::zeros(n) } else { MacroField { cells: Vec::new() } })
                .collect(),
            us: u.clone(),
            ws: FaceFluxes::new(&grid, nk, kinetic),
            roles: buffer_roles(&grid, &mask, config.thresholds.buffer_width),
            config,
            grid,
            vgrid,
            u,
            mask,
            time: T::zero(),
            steps: 0,
            stats: Vec::new(),
            timings: Timings::default(),
            pair,
            usage,
            decomposer,
            weights: Weights::Nonlinear,
            needs_coupling: true,
        };
        if sim.f.is_empty() && sim.mask.count(Regime::Kinetic) > 0 {
            return Err(Error::Contract("kinetic cells need a kinetic field".into()));
        }
        let closure = sim.closure();
        let gamma = sim.gamma();
        for c in 0..n {
            if sim.mask.get(c) == Regime::Kinetic {
                let (i, j) = sim.grid.coords(c);
                lift_to_kinetic(&sim.u.cells[c], gamma, &closure, &sim.vgrid, sim.f.cell_mut(c))
                    .map_err(|e| e.at_cell(i, j))?;
            }
        }
        sim.coupling_pass()?;
        sim.stats.push(record_stats(0.0, &sim.mask, SwitchCounts::default()));
        Ok(sim)
    }

    pub fn set_weights(&mut self, weights: Weights) {
        self.weights = weights;
    }

    pub fn closure(&self) -> Closure<T> {
        self.decomposer.closure
    }

    pub fn gamma(&self) -> T {
        self.decomposer.gamma
    }

    pub fn mode(&self) -> SolverMode {
        self.config.mode
    }

    fn coupled(&self) -> bool {
        self.config.mode != SolverMode::HybridLoc
    }

    fn adaptive(&self) -> bool {
        self.config.mode.is_hybrid() && !self.config.time.freeze_mask
    }

    fn coupling_pass(&mut self) -> Result<()> {
        let start = Instant::now();
        let roles = coupling_roles(&self.grid, &self.mask, self.config.thresholds.buffer_width);
        let closure = self.closure();
        exchange(&roles, &self.grid, &self.vgrid, &closure, self.gamma(), &mut self.u, &mut self.f)?;
        self.needs_coupling = false;
        self.timings.coupling += start.elapsed().as_secs_f64();
        Ok(())
    }

    /// Primitive variables on every non-obstacle cell.
    pub fn primitives(&self) -> Result<Vec<Option<Primitives<T>>>> {
        let gamma = self.gamma();
        (0..self.grid.n_cells())
            .map(|c| {
                if self.mask.get(c) == Regime::Obstacle {
                    return Ok(None);
                }
                let (i, j) = self.grid.coords(c);
                conserved_to_primitive(&self.u.cells[c], gamma).map(Some).map_err(|e| e.at_cell(i, j))
            })
            .collect()
    }

    /// Integrals of mass, momentum and energy over the non-obstacle cells.
    pub fn totals(&self) -> [f64; 4] {
        let area = self.grid.cell_area().to_f64_lossy();
        let mut s = [0.0; 4];
        for (c, u) in self.u.cells.iter().enumerate() {
            if self.mask.get(c) != Regime::Obstacle {
                for q in 0..4 {
                    s[q] += u[q].to_f64_lossy() * area;
                }
            }
        }
        s
    }

    /// Time step from the CFL condition.
    pub fn stable_dt(&self) -> Result<T> {
        let prims = self.primitives()?;
        let gamma = self.gamma();
        let fluid = prims
            .iter()
            .enumerate()
            .filter(|(c, _)| self.mask.get(*c) == Regime::Fluid)
            .filter_map(|(_, p)| p.as_ref());
        cfl_timestep(T::lit(self.config.time.cfl), &self.grid, Some(self.vgrid.vmax), fluid, gamma)
    }

    /// Step size for the next step: the configured one or the CFL one.
    pub fn next_dt(&self) -> Result<T> {
        match self.config.time.dt {
            Some(dt) => Ok(T::lit(dt)),
            None => self.stable_dt(),
        }
    }

    fn update_regimes(&mut self) -> Result<SwitchCounts> {
        let start = Instant::now();
        let (mask, sw) = self.decomposer.update_regimes(&self.grid, &self.vgrid, &self.mask, &self.u, &self.f)?;
        if mask != self.mask {
            let closure = self.closure();
            let gamma = self.gamma();
            let grid = &self.grid;
            let vgrid = &self.vgrid;
            let old = &self.mask;
            let nk = vgrid.n_nodes();
            self.f.data.par_chunks_mut(nk).zip(self.u.cells.par_iter_mut()).enumerate().try_for_each(
                |(c, (fc, uc))| -> Result<()> {
                    match (old.get(c), mask.get(c)) {
                        (Regime::Fluid, Regime::Kinetic) => lift_to_kinetic(uc, gamma, &closure, vgrid, fc)
                            .map_err(|e| {
                                let (i, j) = grid.coords(c);
                                e.at_cell(i, j)
                            }),
                        (Regime::Kinetic, Regime::Fluid) => {
                            *uc = crate::domain::project_to_macro(fc, vgrid);
                            Ok(())
                        }
                        _ => Ok(()),
                    }
                },
            )?;
            self.mask = mask;
            self.roles = buffer_roles(&self.grid, &self.mask, self.config.thresholds.buffer_width);
            self.needs_coupling = true;
        }
        self.timings.regime_update += start.elapsed().as_secs_f64();
        Ok(sw)
    }

    /// Assembles stage `i` into `us`/`fs`, including the implicit solve.
    fn assemble_stage(&mut self, i: usize, dt: T) -> Result<()> {
        let start = Instant::now();
        let pair = &self.pair;
        let ae: Vec<T> = pair.explicit.a[i][..i].iter().map(|&x| T::lit(x)).collect();
        let ai: Vec<T> = pair.implicit.a[i][..i].iter().map(|&x| T::lit(x)).collect();
        let af: Vec<T> = pair.fluid.a[i][..i].iter().map(|&x| T::lit(x)).collect();
        let aii = T::lit(pair.implicit.a[i][i]);
        let mask = &self.mask;
        let roles = &self.roles;
        let transport = &self.transport;
        let fluid_rhs = &self.fluid_rhs;

        let u0 = &self.u;
        self.us.cells.par_iter_mut().enumerate().for_each(|(c, out)| {
            let mut v = u0.cells[c];
            if mask.get(c) == Regime::Fluid {
                for j in 0..i {
                    if af[j] != T::zero() {
                        let r = &fluid_rhs[j].cells[c];
                        for q in 0..4 {
                            v[q] -= dt * af[j] * r[q];
                        }
                    }
                }
            }
            *out = v;
        });

        if !self.f.is_empty() {
            let nk = self.vgrid.n_nodes();
            let f0 = &self.f;
            let closure = self.decomposer.closure;
            let eps = self.decomposer.epsilon;
            let tau_model = self.decomposer.tau_model;
            let vgrid = &self.vgrid;
            let grid = &self.grid;
            let weight = vgrid.weight;
            let (collision, rest) = self.collision.split_at_mut(i);
            let collision = &*collision;
            let qi = &mut rest[0];
            let store_q = !qi.is_empty();
            let implicit = aii > T::zero();
            let mut fs = std::mem::take(&mut self.fs);
            let work = |c: usize, out: &mut [T], q_out: Option<&mut [T]>, star: &mut Vec<T>| -> Result<()> {
                match (mask.get(c), roles.roles[c]) {
                    (Regime::Kinetic, _) => {}
                    (_, CellRole::Lift) => {
                        out.copy_from_slice(f0.cell(c));
                        return Ok(());
                    }
                    _ => return Ok(()),
                }
                out.copy_from_slice(f0.cell(c));
                for j in 0..i {
                    if ae[j] != T::zero() {
                        let l = transport[j].cell(c);
                        let s = dt * ae[j];
                        out.iter_mut().zip(l).for_each(|(o, l)| *o -= s * *l);
                    }
                    if ai[j] != T::zero() {
                        let qj = collision[j].cell(c);
                        let s = dt * ai[j];
                        out.iter_mut().zip(qj).for_each(|(o, q)| *o += s * *q);
                    }
                }
                if implicit {
                    star.clear();
                    star.extend_from_slice(out);
                    let rho = star.iter().copied().sum::<T>() * weight;
                    let tau = relaxation_time(tau_model, rho);
                    let lambda = if eps > T::zero() { aii * dt * tau / eps } else { T::infinity() };
                    implicit_relaxation_solve(star, lambda, &closure, vgrid, out)?;
                    if let Some(q) = q_out {
                        let s = T::one() / (dt * aii);
                        for k in 0..nk {
                            q[k] = (out[k] - star[k]) * s;
                        }
                    }
                } else if let Some(q) = q_out {
                    let r = closure.collision(out, tau_model, eps, vgrid)?;
                    q.copy_from_slice(&r);
                }
                Ok(())
            };
            let res: Result<()> = if store_q {
                fs.data
                    .par_chunks_mut(nk)
                    .zip(qi.data.par_chunks_mut(nk))
                    .enumerate()
                    .try_for_each_init(Vec::new, |star, (c, (out, q))| {
                        work(c, out, Some(q), star).map_err(|e| {
                            let (x, y) = grid.coords(c);
                            e.at_stage(i, x, y)
                        })
                    })
            } else {
                fs.data.par_chunks_mut(nk).enumerate().try_for_each_init(Vec::new, |star, (c, out)| {
                    work(c, out, None, star).map_err(|e| {
                        let (x, y) = grid.coords(c);
                        e.at_stage(i, x, y)
                    })
                })
            };
            self.fs = fs;
            res?;
        }
        self.timings.relaxation += start.elapsed().as_secs_f64();

        if self.coupled() {
            let start = Instant::now();
            let closure = self.closure();
            let gamma = self.gamma();
            exchange(&self.roles, &self.grid, &self.vgrid, &closure, gamma, &mut self.us, &mut self.fs)?;
            self.timings.coupling += start.elapsed().as_secs_f64();
        }
        Ok(())
    }

    /// Advances by one step of size `dt`.
    pub fn step(&mut self, dt: T) -> Result<StepReport> {
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(Error::Contract(format!("time step must be positive, got {dt}")));
        }
        let total = Instant::now();
        let switches = if self.adaptive() { self.update_regimes()? } else { SwitchCounts::default() };
        if self.needs_coupling {
            self.coupling_pass()?;
        }
        let s = self.pair.stages();
        for i in 0..s {
            let trivial = i == 0 && self.usage.trivial_first;
            if !trivial {
                self.assemble_stage(i, dt)?;
            }
            if self.usage.transport[i] {
                let start = Instant::now();
                let disc = Discretization::new(&self.grid, &self.vgrid, self.gamma()).with_weights(self.weights);
                let (ust, fst) = if trivial { (&self.u, &self.f) } else { (&self.us, &self.fs) };
                disc.face_fluxes(&self.mask, fst, ust, &mut self.ws).map_err(|e| match e {
                    Error::NonPhysicalState { cell: Some((x, y)), .. } => e.at_stage(i, x, y),
                    other => other,
                })?;
                if !self.transport[i].is_empty() {
                    disc.kinetic_divergence(&self.mask, &self.ws, &mut self.transport[i]);
                }
                disc.euler_divergence(&self.mask, &self.ws, &mut self.fluid_rhs[i]);
                self.timings.fluxes += start.elapsed().as_secs_f64();
            }
            if trivial && self.usage.explicit_collision[0] && !self.f.is_empty() {
                let closure = self.closure();
                let (eps, tau) = (self.decomposer.epsilon, self.decomposer.tau_model);
                let nk = self.vgrid.n_nodes();
                let (mask, f, vgrid) = (&self.mask, &self.f, &self.vgrid);
                self.collision[0].data.par_chunks_mut(nk).enumerate().try_for_each(|(c, q)| -> Result<()> {
                    if mask.get(c) == Regime::Kinetic {
                        q.copy_from_slice(&closure.collision(f.cell(c), tau, eps, vgrid)?);
                    }
                    Ok(())
                })?;
            }
        }
        self.final_update(dt)?;
        self.coupling_pass()?;
        self.check_physical()?;
        self.time += dt;
        self.steps += 1;
        let fraction = self.mask.kinetic_fraction();
        self.stats.push(record_stats(self.time.to_f64_lossy(), &self.mask, switches));
        self.timings.total += total.elapsed().as_secs_f64();
        Ok(StepReport { dt: dt.to_f64_lossy(), switches, kinetic_fraction: fraction })
    }

    fn final_update(&mut self, dt: T) -> Result<()> {
        let s = self.pair.stages();
        let be: Vec<T> = self.pair.explicit.b.iter().map(|&x| T::lit(x)).collect();
        let bi: Vec<T> = self.pair.implicit.b.iter().map(|&x| T::lit(x)).collect();
        let bf: Vec<T> = self.pair.fluid.b.iter().map(|&x| T::lit(x)).collect();
        let mask = &self.mask;
        let fluid_rhs = &self.fluid_rhs;
        self.u.cells.par_iter_mut().enumerate().for_each(|(c, u)| {
            if mask.get(c) != Regime::Fluid {
                return;
            }
            for j in 0..s {
                if bf[j] != T::zero() {
                    let r = &fluid_rhs[j].cells[c];
                    for q in 0..4 {
                        u[q] -= dt * bf[j] * r[q];
                    }
                }
            }
        });
        if !self.f.is_empty() {
            let nk = self.vgrid.n_nodes();
            let (transport, collision) = (&self.transport, &self.collision);
            self.f.data.par_chunks_mut(nk).enumerate().for_each(|(c, fc)| {
                if mask.get(c) != Regime::Kinetic {
                    return;
                }
                for j in 0..s {
                    if be[j] != T::zero() {
                        let l = transport[j].cell(c);
                        let w = dt * be[j];
                        fc.iter_mut().zip(l).for_each(|(o, l)| *o -= w * *l);
                    }
                    if bi[j] != T::zero() {
                        let q = collision[j].cell(c);
                        let w = dt * bi[j];
                        fc.iter_mut().zip(q).for_each(|(o, q)| *o += w * *q);
                    }
                }
            });
        }
        Ok(())
    }

    fn check_physical(&self) -> Result<()> {
        let gamma = self.gamma();
        for (c, u) in self.u.cells.iter().enumerate() {
            if self.mask.get(c) == Regime::Obstacle {
                continue;
            }
            if let Err(e) = conserved_to_primitive(u, gamma) {
                let (i, j) = self.grid.coords(c);
                return Err(e.at_cell(i, j));
            }
        }
        Ok(())
    }

    /// Steps until `target`, shortening the last step to land on it.
    pub fn advance_to(&mut self, target: T) -> Result<usize> {
        let mut n = 0;
        let tiny = T::lit(1e-12) * target.abs().max(T::one());
        while self.time < target - tiny {
            let mut dt = self.next_dt()?;
            if self.time + dt > target - tiny {
                dt = target - self.time;
            }
            self.step(dt)?;
            n += 1;
        }
        Ok(n)
    }

    /// Conserved state of one cell.
    pub fn conserved(&self, i: usize, j: usize) -> Conserved<T> {
        self.u.cells[self.grid.index(i, j)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Preset, ScenarioId};

    fn small(id: ScenarioId, mode: SolverMode) -> ScenarioConfig {
        let mut c = ScenarioConfig::preset(id, Preset::Desk).with_mode(mode);
        c.grid.nx = 8;
        c.grid.ny = 8;
        c.velocity.nv = 32;
        c
    }

    #[test]
    fn uniform_kinetic_state_is_a_fixed_point() {
        let mut cfg = small(ScenarioId::Cylinder, SolverMode::FullKinetic);
        cfg.grid.obstacle = crate::config::ObstacleConfig::None;
        cfg.grid.boundary_x = crate::config::BoundaryKind::Periodic;
        cfg.grid.boundary_y = crate::config::BoundaryKind::Periodic;
        let mut sim = Simulation::<f64>::new(cfg).unwrap();
        let f0 = sim.f.clone();
        sim.step(1e-3).unwrap();
        let d = sim.f.data.iter().zip(&f0.data).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(d < 1e-14, "{d}");
    }

    #[test]
    fn euler_mode_has_no_kinetic_storage() {
        let sim = Simulation::<f64>::new(small(ScenarioId::Sod, SolverMode::FullEuler)).unwrap();
        assert!(sim.f.is_empty());
        assert_eq!(sim.mask.count(Regime::Kinetic), 0);
    }

    #[test]
    fn rejects_bad_time_steps() {
        let mut sim = Simulation::<f64>::new(small(ScenarioId::Sod, SolverMode::FullEuler)).unwrap();
        assert!(matches!(sim.step(0.0), Err(Error::Contract(_))));
        assert!(matches!(sim.step(f64::NAN), Err(Error::Contract(_))));
    }

    #[test]
    fn advance_lands_on_target() {
        let mut sim = Simulation::<f64>::new(small(ScenarioId::Sod, SolverMode::Hybrid)).unwrap();
        sim.advance_to(0.01).unwrap();
        assert!((sim.time - 0.01).abs() < 1e-15);
        assert_eq!(sim.stats.len(), sim.steps + 1);
    }
}
