//! Run configuration: the resolved [`ScenarioConfig`], built-in presets for
//! every scenario and the TOML front end.
//!
//! A config file has the sections `[scenario]`, `[grid]`, `[velocity]`,
//! `[physics]`, `[thresholds]`, `[time]` and `[output]`. Only
//! `scenario.id` is required; every other key falls back to the preset of
//! that scenario. Unknown keys are rejected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioId {
    GaussianOrder,
    Sod,
    KelvinHelmholtz,
    ShockBubble,
    Cylinder,
    Rectangle,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 6] = [
        ScenarioId::GaussianOrder,
        ScenarioId::Sod,
        ScenarioId::KelvinHelmholtz,
        ScenarioId::ShockBubble,
        ScenarioId::Cylinder,
        ScenarioId::Rectangle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioId::GaussianOrder => "gaussian_order",
            ScenarioId::Sod => "sod",
            ScenarioId::KelvinHelmholtz => "kelvin_helmholtz",
            ScenarioId::ShockBubble => "shock_bubble",
            ScenarioId::Cylinder => "cylinder",
            ScenarioId::Rectangle => "rectangle",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMode {
    /// Dynamic decomposition, buffers refreshed after every stage.
    Hybrid,
    /// Dynamic decomposition, buffers refreshed once per step.
    HybridLoc,
    FullKinetic,
    FullEuler,
}

impl SolverMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverMode::Hybrid => "hybrid",
            SolverMode::HybridLoc => "hybrid_loc",
            SolverMode::FullKinetic => "full_kinetic",
            SolverMode::FullEuler => "full_euler",
        }
    }

    /// Accepts both the config spelling and the CLI spelling.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "hybrid" => Ok(SolverMode::Hybrid),
            "hybrid_loc" | "hybrid-loc" | "loc" => Ok(SolverMode::HybridLoc),
            "full_kinetic" | "kinetic" => Ok(SolverMode::FullKinetic),
            "full_euler" | "euler" => Ok(SolverMode::FullEuler),
            other => Err(Error::config("mode", format!("unknown solver mode `{other}`"))),
        }
    }

    pub fn is_hybrid(self) -> bool {
        matches!(self, SolverMode::Hybrid | SolverMode::HybridLoc)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    Periodic,
    ZeroGradient,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauModel {
    /// tau = rho
    Density,
    /// tau = 1
    Unit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumKind {
    /// Discrete Gaussian whose quadrature moments match the targets exactly.
    Conservative,
    /// Plain pointwise evaluation of the continuous formula.
    Pointwise,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Paper,
    Desk,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum ObstacleConfig {
    None,
    Circle { center: [f64; 2], radius: f64 },
    /// Axis-aligned rectangle whose extent is given in cells.
    Rectangle { center: [f64; 2], size_cells: [usize; 2] },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub x0: f64,
    pub y0: f64,
    pub boundary_x: BoundaryKind,
    pub boundary_y: BoundaryKind,
    pub obstacle: ObstacleConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VelocityConfig {
    pub nv: usize,
    pub vmax: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicsConfig {
    pub epsilon: f64,
    pub beta: f64,
    pub tau_model: TauModel,
    pub equilibrium: EquilibriumKind,
    /// Velocity dimension whose constants enter the breakdown indicator (2 or 3).
    pub indicator_dimension: usize,
    pub vacuum_threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdConfig {
    pub eta: f64,
    pub delta: f64,
    pub buffer_width: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeConfig {
    pub cfl: f64,
    pub t_end: f64,
    /// Fixed step; when absent the CFL rule is used.
    pub dt: Option<f64>,
    pub freeze_mask: bool,
    /// Probability of a kinetic label for the random initial mask; `None`
    /// starts fully fluid.
    pub random_mask: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    pub dir: String,
    pub snapshot_times: Vec<f64>,
    pub probes: Vec<[usize; 2]>,
}

/// Complete description of one run; every field resolved.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: ScenarioId,
    pub preset: Preset,
    pub mode: SolverMode,
    pub seed: u64,
    pub grid: GridConfig,
    pub velocity: VelocityConfig,
    pub physics: PhysicsConfig,
    pub thresholds: ThresholdConfig,
    pub time: TimeConfig,
    pub output: OutputConfig,
}

/// Scenario-specific constants that are not plain grid parameters.
struct PresetTable {
    lx: f64,
    ly: f64,
    x0: f64,
    y0: f64,
    paper_cells: (usize, usize),
    desk_cells: (usize, usize),
    /// velocity nodes per axis at desk scale
    desk_nv: usize,
    vmax: f64,
    cfl: f64,
    t_end_paper: f64,
    t_end_desk: f64,
    eta_factor: f64,
    boundary: (BoundaryKind, BoundaryKind),
    snapshots: &'static [f64],
}

fn table(id: ScenarioId) -> PresetTable {
    use BoundaryKind::*;
    match id {
        ScenarioId::GaussianOrder => PresetTable {
            lx: 6.0,
            ly: 6.0,
            x0: 0.0,
            y0: 0.0,
            paper_cells: (90, 90),
            desk_cells: (45, 45),
            desk_nv: 16,
            vmax: 5.0,
            cfl: 0.5,
            t_end_paper: 0.86,
            t_end_desk: 0.86,
            eta_factor: 1.0,
            boundary: (Periodic, Periodic),
            snapshots: &[],
        },
        ScenarioId::Sod => PresetTable {
            lx: 0.1,
            ly: 1.0,
            x0: 0.0,
            y0: 0.0,
            paper_cells: (21, 150),
            desk_cells: (4, 150),
            desk_nv: 32,
            vmax: 8.0,
            cfl: 0.8,
            t_end_paper: 0.15,
            t_end_desk: 0.15,
            eta_factor: 1.0,
            boundary: (Periodic, ZeroGradient),
            snapshots: &[0.05, 0.10, 0.15],
        },
        ScenarioId::KelvinHelmholtz => PresetTable {
            lx: 1.0,
            ly: 0.5,
            x0: 0.0,
            y0: 0.0,
            paper_cells: (150, 75),
            desk_cells: (75, 38),
            desk_nv: 16,
            vmax: 8.0,
            cfl: 0.5,
            t_end_paper: 1.7,
            t_end_desk: 0.2,
            eta_factor: 4.0,
            boundary: (Periodic, ZeroGradient),
            snapshots: &[0.9, 1.7],
        },
        ScenarioId::ShockBubble => PresetTable {
            lx: 5.0,
            ly: 1.0,
            x0: -2.0,
            y0: -0.5,
            paper_cells: (150, 50),
            desk_cells: (75, 25),
            desk_nv: 16,
            vmax: 8.0,
            cfl: 0.5,
            t_end_paper: 1.5,
            t_end_desk: 0.6,
            eta_factor: 0.5,
            boundary: (ZeroGradient, ZeroGradient),
            snapshots: &[0.6, 0.8, 1.5],
        },
        ScenarioId::Cylinder | ScenarioId::Rectangle => PresetTable {
            lx: 1.0,
            ly: 1.0,
            x0: 0.0,
            y0: 0.0,
            paper_cells: (78, 78),
            desk_cells: (39, 39),
            desk_nv: 16,
            vmax: 8.0,
            cfl: 0.5,
            t_end_paper: 0.15,
            t_end_desk: 0.15,
            eta_factor: 10.0,
            boundary: (ZeroGradient, ZeroGradient),
            snapshots: &[0.05, 0.10, 0.15],
        },
    }
}

impl ScenarioConfig {
    /// Built-in parameters of a scenario at the requested scale.
    pub fn preset(id: ScenarioId, preset: Preset) -> Self {
        let t = table(id);
        let (nx, ny) = match preset {
            Preset::Paper => t.paper_cells,
            Preset::Desk => t.desk_cells,
        };
        let nv = match preset {
            Preset::Paper => 32,
            Preset::Desk => t.desk_nv,
        };
        let t_end = match preset {
            Preset::Paper => t.t_end_paper,
            Preset::Desk => t.t_end_desk,
        };
        let epsilon = 1e-6;
        let obstacle = match id {
            ScenarioId::Cylinder => ObstacleConfig::Circle {
                center: [t.x0 + 2.0 * t.lx / 5.0, t.y0 + t.ly / 2.0],
                radius: t.lx / 12.0,
            },
            ScenarioId::Rectangle => ObstacleConfig::Rectangle {
                center: [t.x0 + 2.0 * t.lx / 5.0, t.y0 + t.ly / 2.0],
                size_cells: [10, 4],
            },
            _ => ObstacleConfig::None,
        };
        let (dt, freeze_mask, random_mask) = match id {
            ScenarioId::GaussianOrder => (Some(t_end / 64.0), true, Some(0.5)),
            _ => (None, false, None),
        };
        let mut snapshot_times: Vec<f64> =
            t.snapshots.iter().copied().filter(|&s| s <= t_end + 1e-12).collect();
        if snapshot_times.last().map_or(true, |&s| (s - t_end).abs() > 1e-12) {
            snapshot_times.push(t_end);
        }
        ScenarioConfig {
            scenario: id,
            preset,
            mode: SolverMode::Hybrid,
            seed: 20250101,
            grid: GridConfig {
                nx,
                ny,
                lx: t.lx,
                ly: t.ly,
                x0: t.x0,
                y0: t.y0,
                boundary_x: t.boundary.0,
                boundary_y: t.boundary.1,
                obstacle,
            },
            velocity: VelocityConfig { nv, vmax: t.vmax },
            physics: PhysicsConfig {
                epsilon,
                beta: -0.5,
                tau_model: TauModel::Density,
                equilibrium: EquilibriumKind::Conservative,
                indicator_dimension: 2,
                vacuum_threshold: 1e-12,
            },
            thresholds: ThresholdConfig {
                eta: t.eta_factor * epsilon,
                delta: 1e-3,
                buffer_width: 2,
            },
            time: TimeConfig { cfl: t.cfl, t_end, dt, freeze_mask, random_mask },
            output: OutputConfig { dir: "out".to_string(), snapshot_times, probes: Vec::new() },
        }
    }

    /// Eta as a multiple of epsilon, as prescribed for each scenario.
    pub fn eta_factor(id: ScenarioId) -> f64 {
        table(id).eta_factor
    }

    /// Changes epsilon and rescales eta with the scenario's factor.
    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.physics.epsilon = epsilon;
        self.thresholds.eta = Self::eta_factor(self.scenario) * epsilon;
        self
    }

    pub fn with_mode(mut self, mode: SolverMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn d_v(&self) -> usize {
        2
    }

    pub fn gamma(&self) -> f64 {
        let dv = self.d_v() as f64;
        (dv + 2.0) / dv
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        for (key, n) in [("grid.nx", g.nx), ("grid.ny", g.ny), ("velocity.nv", self.velocity.nv)] {
            if n < 4 {
                return Err(Error::config(key, format!("must be >= 4, got {n}")));
            }
        }
        positive("grid.lx", g.lx)?;
        positive("grid.ly", g.ly)?;
        positive("velocity.vmax", self.velocity.vmax)?;
        let p = &self.physics;
        if !(p.epsilon >= 0.0) || !p.epsilon.is_finite() {
            return Err(Error::config("physics.epsilon", format!("must be >= 0, got {}", p.epsilon)));
        }
        if !(p.beta >= -0.5 && p.beta < 1.0) {
            return Err(Error::config("physics.beta", format!("must lie in [-1/2, 1), got {}", p.beta)));
        }
        if p.indicator_dimension != 2 && p.indicator_dimension != 3 {
            return Err(Error::config(
                "physics.indicator_dimension",
                format!("must be 2 or 3, got {}", p.indicator_dimension),
            ));
        }
        positive("physics.vacuum_threshold", p.vacuum_threshold)?;
        positive("thresholds.eta", self.thresholds.eta).or_else(|e| {
            // eta = 0 is the natural companion of epsilon = 0
            if self.thresholds.eta == 0.0 && p.epsilon == 0.0 {
                Ok(())
            } else {
                Err(e)
            }
        })?;
        positive("thresholds.delta", self.thresholds.delta)?;
        if self.thresholds.buffer_width < 2 {
            return Err(Error::config(
                "thresholds.buffer_width",
                format!("must be >= 2 (reconstruction halo), got {}", self.thresholds.buffer_width),
            ));
        }
        let t = &self.time;
        if !(t.cfl > 0.0 && t.cfl <= 1.0) {
            return Err(Error::config("time.cfl", format!("must lie in (0, 1], got {}", t.cfl)));
        }
        positive("time.t_end", t.t_end)?;
        if let Some(dt) = t.dt {
            positive("time.dt", dt)?;
        }
        if let Some(p) = t.random_mask {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::config("time.random_mask", format!("must lie in [0, 1], got {p}")));
            }
        }
        for &s in &self.output.snapshot_times {
            if !(s >= 0.0) {
                return Err(Error::config("output.snapshot_times", format!("negative time {s}")));
            }
        }
        for probe in &self.output.probes {
            if probe[0] >= g.nx || probe[1] >= g.ny {
                return Err(Error::config(
                    "output.probes",
                    format!("probe ({}, {}) outside the {}x{} grid", probe[0], probe[1], g.nx, g.ny),
                ));
            }
        }
        Ok(())
    }

    /// Parses a TOML config file, applying the preset of its scenario.
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
                .unwrap_or(0);
            Error::Parse { line, message: e.message().to_string() }
        })?;
        raw.resolve()
    }

    /// Serializes the resolved config in the same TOML layout `parse` reads.
    pub fn to_toml(&self) -> String {
        let raw = RawConfig::from_resolved(self);
        toml::to_string(&raw).expect("config serializes")
    }
}

fn positive(key: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(key, format!("must be > 0, got {v}")))
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: RawScenario,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grid: Option<RawGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    velocity: Option<RawVelocity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    physics: Option<RawPhysics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    thresholds: Option<RawThresholds>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    time: Option<RawTime>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    output: Option<RawOutput>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    preset: Option<Preset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    nx: Option<usize>,
    ny: Option<usize>,
    lx: Option<f64>,
    ly: Option<f64>,
    x0: Option<f64>,
    y0: Option<f64>,
    boundary_x: Option<BoundaryKind>,
    boundary_y: Option<BoundaryKind>,
    /// "none", "circle" or "rectangle"
    obstacle: Option<String>,
    obstacle_center: Option<[f64; 2]>,
    obstacle_radius: Option<f64>,
    obstacle_size_cells: Option<[usize; 2]>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVelocity {
    nv: Option<usize>,
    vmax: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhysics {
    epsilon: Option<f64>,
    beta: Option<f64>,
    tau_model: Option<TauModel>,
    equilibrium: Option<EquilibriumKind>,
    indicator_dimension: Option<usize>,
    vacuum_threshold: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawThresholds {
    eta: Option<f64>,
    delta: Option<f64>,
    buffer_width: Option<usize>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTime {
    cfl: Option<f64>,
    t_end: Option<f64>,
    dt: Option<f64>,
    freeze_mask: Option<bool>,
    random_mask: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<String>,
    snapshot_times: Option<Vec<f64>>,
    probes: Option<Vec<[usize; 2]>>,
}

impl RawConfig {
    fn resolve(self) -> Result<ScenarioConfig> {
        let id = ScenarioId::parse(&self.scenario.id)?;
        let preset = self.scenario.preset.unwrap_or(Preset::Paper);
        let mut cfg = ScenarioConfig::preset(id, preset);
        if let Some(mode) = &self.scenario.mode {
            cfg.mode = SolverMode::parse(mode)?;
        }
        if let Some(seed) = self.scenario.seed {
            cfg.seed = seed;
        }
        if let Some(g) = self.grid {
            let c = &mut cfg.grid;
            set(&mut c.nx, g.nx);
            set(&mut c.ny, g.ny);
            set(&mut c.lx, g.lx);
            set(&mut c.ly, g.ly);
            set(&mut c.x0, g.x0);
            set(&mut c.y0, g.y0);
            set(&mut c.boundary_x, g.boundary_x);
            set(&mut c.boundary_y, g.boundary_y);
            let default_center = [c.x0 + 0.4 * c.lx, c.y0 + 0.5 * c.ly];
            let shape = g.obstacle.as_deref().map(str::to_string).unwrap_or_else(|| {
                match c.obstacle {
                    ObstacleConfig::None => "none",
                    ObstacleConfig::Circle { .. } => "circle",
                    ObstacleConfig::Rectangle { .. } => "rectangle",
                }
                .to_string()
            });
            c.obstacle = match shape.as_str() {
                "none" => ObstacleConfig::None,
                "circle" => {
                    let (center, radius) = match c.obstacle {
                        ObstacleConfig::Circle { center, radius } => (center, radius),
                        _ => (default_center, c.lx / 12.0),
                    };
                    ObstacleConfig::Circle {
                        center: g.obstacle_center.unwrap_or(center),
                        radius: g.obstacle_radius.unwrap_or(radius),
                    }
                }
                "rectangle" => {
                    let (center, size_cells) = match c.obstacle {
                        ObstacleConfig::Rectangle { center, size_cells } => (center, size_cells),
                        _ => (default_center, [10, 4]),
                    };
                    ObstacleConfig::Rectangle {
                        center: g.obstacle_center.unwrap_or(center),
                        size_cells: g.obstacle_size_cells.unwrap_or(size_cells),
                    }
                }
                other => {
                    return Err(Error::config(
                        "grid.obstacle",
                        format!("expected none, circle or rectangle, got `{other}`"),
                    ))
                }
            };
        }
        if let Some(v) = self.velocity {
            set(&mut cfg.velocity.nv, v.nv);
            set(&mut cfg.velocity.vmax, v.vmax);
        }
        let mut eta_given = false;
        if let Some(p) = self.physics {
            if let Some(eps) = p.epsilon {
                cfg = cfg.with_epsilon(eps);
            }
            let c = &mut cfg.physics;
            set(&mut c.beta, p.beta);
            set(&mut c.tau_model, p.tau_model);
            set(&mut c.equilibrium, p.equilibrium);
            set(&mut c.indicator_dimension, p.indicator_dimension);
            set(&mut c.vacuum_threshold, p.vacuum_threshold);
        }
        if let Some(t) = self.thresholds {
            eta_given = t.eta.is_some();
            set(&mut cfg.thresholds.eta, t.eta);
            set(&mut cfg.thresholds.delta, t.delta);
            set(&mut cfg.thresholds.buffer_width, t.buffer_width);
        }
        let _ = eta_given;
        let mut t_end_given = false;
        if let Some(t) = self.time {
            let c = &mut cfg.time;
            set(&mut c.cfl, t.cfl);
            if let Some(te) = t.t_end {
                t_end_given = true;
                // a preset fixed step scales with the final time
                if let Some(dt) = c.dt {
                    c.dt = Some(dt * te / c.t_end);
                }
                c.t_end = te;
            }
            if t.dt.is_some() {
                c.dt = t.dt;
            }
            set(&mut c.freeze_mask, t.freeze_mask);
            if t.random_mask.is_some() {
                c.random_mask = t.random_mask;
            }
        }
        let mut snapshots_given = false;
        if let Some(o) = self.output {
            set(&mut cfg.output.dir, o.dir);
            if let Some(s) = o.snapshot_times {
                snapshots_given = true;
                cfg.output.snapshot_times = s;
            }
            set(&mut cfg.output.probes, o.probes);
        }
        if t_end_given && !snapshots_given {
            let t_end = cfg.time.t_end;
            cfg.output.snapshot_times.retain(|&s| s < t_end - 1e-12);
            cfg.output.snapshot_times.push(t_end);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn from_resolved(c: &ScenarioConfig) -> Self {
        let (obstacle, center, radius, size) = match c.grid.obstacle {
            ObstacleConfig::None => ("none", None, None, None),
            ObstacleConfig::Circle { center, radius } => ("circle", Some(center), Some(radius), None),
            ObstacleConfig::Rectangle { center, size_cells } => {
                ("rectangle", Some(center), None, Some(size_cells))
            }
        };
        RawConfig {
            scenario: RawScenario {
                id: c.scenario.as_str().to_string(),
                preset: Some(c.preset),
                mode: Some(c.mode.as_str().to_string()),
                seed: Some(c.seed),
            },
            grid: Some(RawGrid {
                nx: Some(c.grid.nx),
                ny: Some(c.grid.ny),
                lx: Some(c.grid.lx),
                ly: Some(c.grid.ly),
                x0: Some(c.grid.x0),
                y0: Some(c.grid.y0),
                boundary_x: Some(c.grid.boundary_x),
                boundary_y: Some(c.grid.boundary_y),
                obstacle: Some(obstacle.to_string()),
                obstacle_center: center,
                obstacle_radius: radius,
                obstacle_size_cells: size,
            }),
            velocity: Some(RawVelocity { nv: Some(c.velocity.nv), vmax: Some(c.velocity.vmax) }),
            physics: Some(RawPhysics {
                epsilon: Some(c.physics.epsilon),
                beta: Some(c.physics.beta),
                tau_model: Some(c.physics.tau_model),
                equilibrium: Some(c.physics.equilibrium),
                indicator_dimension: Some(c.physics.indicator_dimension),
                vacuum_threshold: Some(c.physics.vacuum_threshold),
            }),
            thresholds: Some(RawThresholds {
                eta: Some(c.thresholds.eta),
                delta: Some(c.thresholds.delta),
                buffer_width: Some(c.thresholds.buffer_width),
            }),
            time: Some(RawTime {
                cfl: Some(c.time.cfl),
                t_end: Some(c.time.t_end),
                dt: c.time.dt,
                freeze_mask: Some(c.time.freeze_mask),
                random_mask: c.time.random_mask,
            }),
            output: Some(RawOutput {
                dir: Some(c.output.dir.clone()),
                snapshot_times: Some(c.output.snapshot_times.clone()),
                probes: Some(c.output.probes.clone()),
            }),
        }
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}
