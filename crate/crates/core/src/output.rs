//! CSV snapshots, statistics and convergence tables, and the run manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::{ScenarioConfig, SolverMode};
use crate::convergence::ConvergenceRow;
use crate::domain::DecompositionStats;
use crate::error::{Error, Result};
use crate::mesh::Regime;
use crate::scalar::Real;
use crate::solver::{Simulation, Timings};

pub const SNAPSHOT_HEADER: &str = "i,j,x,y,rho,ux,uy,T,P,regime";
pub const FRACTION_HEADER: &str = "t,fraction,to_kinetic,to_fluid";
pub const CONVERGENCE_HEADER: &str = "dt,err,order,mode,epsilon";

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn snapshot_file_name(t: f64) -> String {
    format!("snapshot_t{t:.6}.csv")
}

#[derive(Clone, Debug, PartialEq)]
pub struct SnapshotRow {
    pub i: usize,
    pub j: usize,
    pub x: f64,
    pub y: f64,
    pub rho: f64,
    pub ux: f64,
    pub uy: f64,
    pub temperature: f64,
    pub pressure: f64,
    pub regime: u8,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SnapshotRecord {
    pub time: f64,
    pub rows: Vec<SnapshotRow>,
}

impl SnapshotRecord {
    /// Obstacle cells carry zero fields.
    pub fn from_simulation<T: Real>(sim: &Simulation<T>) -> Result<Self> {
        let prims = sim.primitives()?;
        let g = &sim.grid;
        let mut rows = Vec::with_capacity(g.n_cells());
        for j in 0..g.ny {
            for i in 0..g.nx {
                let c = g.index(i, j);
                let regime = sim.mask.get(c);
                let (rho, ux, uy, t, p) = match (&prims[c], regime) {
                    (Some(p), r) if r != Regime::Obstacle => (
                        p.rho.to_f64_lossy(),
                        p.ux.to_f64_lossy(),
                        p.uy.to_f64_lossy(),
                        p.temperature.to_f64_lossy(),
                        p.pressure.to_f64_lossy(),
                    ),
                    _ => (0.0, 0.0, 0.0, 0.0, 0.0),
                };
                rows.push(SnapshotRow {
                    i,
                    j,
                    x: g.x_center(i).to_f64_lossy(),
                    y: g.y_center(j).to_f64_lossy(),
                    rho,
                    ux,
                    uy,
                    temperature: t,
                    pressure: p,
                    regime: regime.code(),
                });
            }
        }
        Ok(SnapshotRecord { time: sim.time.to_f64_lossy(), rows })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(SNAPSHOT_HEADER.split(','))?;
        for r in &self.rows {
            w.write_record([
                r.i.to_string(),
                r.j.to_string(),
                fmt_f64(r.x),
                fmt_f64(r.y),
                fmt_f64(r.rho),
                fmt_f64(r.ux),
                fmt_f64(r.uy),
                fmt_f64(r.temperature),
                fmt_f64(r.pressure),
                r.regime.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a snapshot back; the time comes from the caller.
    pub fn read_csv(path: &Path, time: f64) -> Result<Self> {
        let mut rd = csv::Reader::from_path(path)?;
        check_header(rd.headers()?, SNAPSHOT_HEADER)?;
        let mut rows = Vec::new();
        for rec in rd.records() {
            let rec = rec?;
            let f = |k: usize| parse_f64(&rec[k]);
            rows.push(SnapshotRow {
                i: parse_usize(&rec[0])?,
                j: parse_usize(&rec[1])?,
                x: f(2)?,
                y: f(3)?,
                rho: f(4)?,
                ux: f(5)?,
                uy: f(6)?,
                temperature: f(7)?,
                pressure: f(8)?,
                regime: parse_usize(&rec[9])? as u8,
            });
        }
        Ok(SnapshotRecord { time, rows })
    }
}

fn check_header(h: &csv::StringRecord, expected: &str) -> Result<()> {
    let got: Vec<&str> = h.iter().collect();
    if got.join(",") != expected {
        return Err(Error::Parse { line: 1, message: format!("expected header `{expected}`, got `{}`", got.join(",")) });
    }
    Ok(())
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Parse { line: 0, message: format!("bad number `{s}`") })
}

fn parse_usize(s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::Parse { line: 0, message: format!("bad integer `{s}`") })
}

/// Writes the snapshot of the current state into `dir`.
pub fn write_snapshot<T: Real>(sim: &Simulation<T>, dir: &Path) -> Result<PathBuf> {
    let rec = SnapshotRecord::from_simulation(sim)?;
    let path = dir.join(snapshot_file_name(rec.time));
    rec.write_csv(&path)?;
    Ok(path)
}

pub fn write_kinetic_fraction(stats: &[DecompositionStats], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(FRACTION_HEADER.split(','))?;
    for s in stats {
        w.write_record([fmt_f64(s.time), fmt_f64(s.fraction), s.to_kinetic.to_string(), s.to_fluid.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_kinetic_fraction(path: &Path) -> Result<Vec<DecompositionStats>> {
    let mut rd = csv::Reader::from_path(path)?;
    check_header(rd.headers()?, FRACTION_HEADER)?;
    rd.records()
        .map(|rec| {
            let rec = rec?;
            Ok(DecompositionStats {
                time: parse_f64(&rec[0])?,
                fraction: parse_f64(&rec[1])?,
                to_kinetic: parse_usize(&rec[2])?,
                to_fluid: parse_usize(&rec[3])?,
            })
        })
        .collect()
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn write_convergence(rows: &[ConvergenceRow], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(CONVERGENCE_HEADER.split(','))?;
    for r in rows {
        w.write_record([fmt_f64(r.dt), opt(r.err), opt(r.order), r.mode.as_str().to_string(), fmt_f64(r.epsilon)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_convergence(path: &Path) -> Result<Vec<ConvergenceRow>> {
    let mut rd = csv::Reader::from_path(path)?;
    check_header(rd.headers()?, CONVERGENCE_HEADER)?;
    let optional = |s: &str| if s.trim().is_empty() { Ok(None) } else { parse_f64(s).map(Some) };
    rd.records()
        .map(|rec| {
            let rec = rec?;
            Ok(ConvergenceRow {
                dt: parse_f64(&rec[0])?,
                err: optional(&rec[1])?,
                order: optional(&rec[2])?,
                mode: SolverMode::parse(&rec[3])?,
                epsilon: parse_f64(&rec[4])?,
            })
        })
        .collect()
}

/// Full velocity slice of one cell.
pub fn write_probe<T: Real>(sim: &Simulation<T>, i: usize, j: usize, dir: &Path) -> Result<Option<PathBuf>> {
    if sim.f.is_empty() {
        return Ok(None);
    }
    let c = sim.grid.index(i, j);
    let path = dir.join(format!("probe_i{i}_j{j}_t{:.6}.csv", sim.time.to_f64_lossy()));
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(["k", "vx", "vy", "f", "regime"])?;
    let regime = sim.mask.get(c).code().to_string();
    for (k, (v, f)) in sim.vgrid.nodes().iter().zip(sim.f.cell(c)).enumerate() {
        w.write_record([
            k.to_string(),
            fmt_f64(v[0].to_f64_lossy()),
            fmt_f64(v[1].to_f64_lossy()),
            fmt_f64(f.to_f64_lossy()),
            regime.clone(),
        ])?;
    }
    w.flush()?;
    Ok(Some(path))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ScenarioConfig,
    pub config_toml: String,
    pub version: String,
    pub workers: usize,
    pub steps: usize,
    pub final_time: f64,
    pub timings: Timings,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(config: &ScenarioConfig, workers: usize) -> Self {
        RunManifest {
            config: config.clone(),
            config_toml: config.to_toml(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            workers,
            steps: 0,
            final_time: 0.0,
            timings: Timings::default(),
            outputs: Vec::new(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut file = fs::File::create(path)?;
        serde_json::to_writer_pretty(&mut file, self)?;
        file.write_all(b"\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

/// Runs a simulation to its final time, writing snapshots at the
/// configured times, the kinetic-fraction series, probes and the manifest.
pub fn run_and_write<T: Real>(sim: &mut Simulation<T>, dir: &Path, workers: usize) -> Result<RunManifest> {
    fs::create_dir_all(dir)?;
    let mut manifest = RunManifest::new(&sim.config, workers);
    let mut times = sim.config.output.snapshot_times.clone();
    times.sort_by(|a, b| a.partial_cmp(b).expect("finite snapshot times"));
    let probes = sim.config.output.probes.clone();
    let emit = |sim: &Simulation<T>, manifest: &mut RunManifest| -> Result<()> {
        let p = write_snapshot(sim, dir)?;
        manifest.outputs.push(file_name(&p));
        for [i, j] in &probes {
            if let Some(p) = write_probe(sim, *i, *j, dir)? {
                manifest.outputs.push(file_name(&p));
            }
        }
        Ok(())
    };
    for t in times {
        if t <= 0.0 {
            emit(sim, &mut manifest)?;
            continue;
        }
        let n = sim.advance_to(T::lit(t))?;
        log::info!("t = {t}: {n} steps, kinetic fraction {:.4}", sim.mask.kinetic_fraction());
        emit(sim, &mut manifest)?;
    }
    let frac = dir.join("kinetic_fraction.csv");
    write_kinetic_fraction(&sim.stats, &frac)?;
    manifest.outputs.push(file_name(&frac));
    manifest.steps = sim.steps;
    manifest.final_time = sim.time.to_f64_lossy();
    manifest.timings = sim.timings;
    manifest.write(&dir.join("manifest.json"))?;
    Ok(manifest)
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}
