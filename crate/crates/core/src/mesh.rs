//! Spatial and velocity grids, solution fields and the conversions between
//! conserved and primitive variables.

use crate::config::{BoundaryKind, ObstacleConfig, ScenarioConfig};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Cartesian cell-centered grid on `[x0, x0 + lx] x [y0, y0 + ly]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpatialGrid<T> {
    pub nx: usize,
    pub ny: usize,
    pub lx: T,
    pub ly: T,
    pub x0: T,
    pub y0: T,
    pub dx: T,
    pub dy: T,
    pub boundary_x: BoundaryKind,
    pub boundary_y: BoundaryKind,
    obstacle: Vec<bool>,
}

impl<T: Real> SpatialGrid<T> {
    pub fn new(
        nx: usize,
        ny: usize,
        lx: T,
        ly: T,
        boundary_x: BoundaryKind,
        boundary_y: BoundaryKind,
    ) -> Result<Self> {
        if nx < 4 || ny < 4 {
            return Err(Error::config("grid", format!("need at least 4x4 cells, got {nx}x{ny}")));
        }
        if !(lx > T::zero() && ly > T::zero()) {
            return Err(Error::config("grid", "domain lengths must be positive"));
        }
        Ok(SpatialGrid {
            nx,
            ny,
            lx,
            ly,
            x0: T::zero(),
            y0: T::zero(),
            dx: lx / T::from_usize_lossy(nx),
            dy: ly / T::from_usize_lossy(ny),
            boundary_x,
            boundary_y,
            obstacle: vec![false; nx * ny],
        })
    }

    pub fn with_origin(mut self, x0: T, y0: T) -> Self {
        self.x0 = x0;
        self.y0 = y0;
        self
    }

    #[inline]
    pub fn n_cells(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn coords(&self, c: usize) -> (usize, usize) {
        (c % self.nx, c / self.nx)
    }

    #[inline]
    pub fn x_center(&self, i: usize) -> T {
        self.x0 + (T::from_usize_lossy(i) + T::lit(0.5)) * self.dx
    }

    #[inline]
    pub fn y_center(&self, j: usize) -> T {
        self.y0 + (T::from_usize_lossy(j) + T::lit(0.5)) * self.dy
    }

    #[inline]
    pub fn cell_area(&self) -> T {
        self.dx * self.dy
    }

    #[inline]
    pub fn is_obstacle(&self, c: usize) -> bool {
        self.obstacle[c]
    }

    pub fn obstacle_mask(&self) -> &[bool] {
        &self.obstacle
    }

    pub fn obstacle_count(&self) -> usize {
        self.obstacle.iter().filter(|&&o| o).count()
    }

    /// Rasterizes an obstacle by cell-center membership.
    pub fn rasterize(&mut self, shape: &ObstacleConfig) -> Result<()> {
        self.obstacle.iter_mut().for_each(|o| *o = false);
        match *shape {
            ObstacleConfig::None => return Ok(()),
            ObstacleConfig::Circle { center, radius } => {
                if !(radius > 0.0) {
                    return Err(Error::config("grid.obstacle_radius", "must be > 0"));
                }
                let (xc, yc, r) = (T::lit(center[0]), T::lit(center[1]), T::lit(radius));
                for j in 0..self.ny {
                    for i in 0..self.nx {
                        let dx = self.x_center(i) - xc;
                        let dy = self.y_center(j) - yc;
                        if dx * dx + dy * dy <= r * r {
                            let c = self.index(i, j);
                            self.obstacle[c] = true;
                        }
                    }
                }
            }
            ObstacleConfig::Rectangle { center, size_cells } => {
                let [w, h] = size_cells;
                if w == 0 || h == 0 {
                    return Err(Error::config("grid.obstacle_size_cells", "must be positive"));
                }
                let ci = (T::lit(center[0]) - self.x0) / self.dx;
                let cj = (T::lit(center[1]) - self.y0) / self.dy;
                let i0 = (ci - T::lit(w as f64 / 2.0)).round().to_f64_lossy();
                let j0 = (cj - T::lit(h as f64 / 2.0)).round().to_f64_lossy();
                if i0 < 0.0 || j0 < 0.0 {
                    return Err(Error::config("grid.obstacle", "obstacle touches the domain boundary"));
                }
                let (i0, j0) = (i0 as usize, j0 as usize);
                for j in j0..(j0 + h).min(self.ny) {
                    for i in i0..(i0 + w).min(self.nx) {
                        let c = self.index(i, j);
                        self.obstacle[c] = true;
                    }
                }
            }
        }
        if self.obstacle_count() == 0 {
            return Err(Error::config("grid.obstacle", "obstacle covers no cell center"));
        }
        for j in 0..self.ny {
            for i in 0..self.nx {
                let edge = i == 0 || j == 0 || i + 1 == self.nx || j + 1 == self.ny;
                if edge && self.obstacle[self.index(i, j)] {
                    return Err(Error::config(
                        "grid.obstacle",
                        "obstacle touches the domain boundary",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Maps a possibly out-of-range index along x to a cell index according
    /// to the boundary condition.
    #[inline]
    pub fn wrap_x(&self, i: isize) -> usize {
        wrap(i, self.nx, self.boundary_x)
    }

    #[inline]
    pub fn wrap_y(&self, j: isize) -> usize {
        wrap(j, self.ny, self.boundary_y)
    }
}

#[inline]
fn wrap(i: isize, n: usize, bc: BoundaryKind) -> usize {
    let n = n as isize;
    match bc {
        BoundaryKind::Periodic => i.rem_euclid(n) as usize,
        BoundaryKind::ZeroGradient => i.clamp(0, n - 1) as usize,
    }
}

/// Uniform cell-centered velocity lattice on `[-vmax, vmax]^D` with
/// midpoint quadrature weight `dv^D`. Node `k` has per-axis digits
/// `k = k_0 + nv k_1 + nv^2 k_2 ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct VelocityLattice<T, const D: usize> {
    pub nv: usize,
    pub vmax: T,
    pub dv: T,
    pub weight: T,
    axis: Vec<T>,
    nodes: Vec<[T; D]>,
    mirrors: Vec<Vec<usize>>,
}

/// The two-dimensional lattice used by the solver.
pub type VelocityGrid<T> = VelocityLattice<T, 2>;

impl<T: Real, const D: usize> VelocityLattice<T, D> {
    pub fn new(nv: usize, vmax: T) -> Result<Self> {
        if nv < 2 {
            return Err(Error::config("velocity.nv", format!("must be >= 2, got {nv}")));
        }
        if !(vmax > T::zero()) {
            return Err(Error::config("velocity.vmax", "must be > 0"));
        }
        let dv = T::lit(2.0) * vmax / T::from_usize_lossy(nv);
        let axis: Vec<T> = (0..nv)
            .map(|k| -vmax + (T::from_usize_lossy(k) + T::lit(0.5)) * dv)
            .collect();
        let n = nv.pow(D as u32);
        let mut nodes = Vec::with_capacity(n);
        for k in 0..n {
            let mut node = [T::zero(); D];
            let mut rest = k;
            for v in node.iter_mut() {
                *v = axis[rest % nv];
                rest /= nv;
            }
            nodes.push(node);
        }
        let mirrors = (0..D)
            .map(|a| {
                let stride = nv.pow(a as u32);
                (0..n)
                    .map(|k| {
                        let digit = (k / stride) % nv;
                        k - digit * stride + (nv - 1 - digit) * stride
                    })
                    .collect()
            })
            .collect();
        Ok(VelocityLattice { nv, vmax, dv, weight: dv.powi(D as i32), axis, nodes, mirrors })
    }

    #[inline]
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// One-dimensional node coordinates, shared by every axis.
    #[inline]
    pub fn axis(&self) -> &[T] {
        &self.axis
    }

    #[inline]
    pub fn nodes(&self) -> &[[T; D]] {
        &self.nodes
    }

    #[inline]
    pub fn node(&self, k: usize) -> [T; D] {
        self.nodes[k]
    }

    /// Node index of the velocity reflected across the plane normal to `axis`.
    #[inline]
    pub fn mirror(&self, axis: usize) -> &[usize] {
        &self.mirrors[axis]
    }
}

/// Discrete distribution `f[cell][node]`, stored cell-major.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct KineticField<T> {
    pub n_nodes: usize,
    pub data: Vec<T>,
}

impl<T: Real> KineticField<T> {
    pub fn zeros(n_cells: usize, n_nodes: usize) -> Self {
        KineticField { n_nodes, data: vec![T::zero(); n_cells * n_nodes] }
    }

    pub fn empty() -> Self {
        KineticField { n_nodes: 0, data: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn cell(&self, c: usize) -> &[T] {
        &self.data[c * self.n_nodes..(c + 1) * self.n_nodes]
    }

    #[inline]
    pub fn cell_mut(&mut self, c: usize) -> &mut [T] {
        let n = self.n_nodes;
        &mut self.data[c * n..(c + 1) * n]
    }
}

/// Conserved variables `(rho, rho u_x, rho u_y, E)` of one cell.
pub type Conserved<T> = [T; 4];

#[derive(Clone, Debug, PartialEq)]
pub struct MacroField<T> {
    pub cells: Vec<Conserved<T>>,
}

impl<T: Real> MacroField<T> {
    pub fn zeros(n_cells: usize) -> Self {
        MacroField { cells: vec![[T::zero(); 4]; n_cells] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    Fluid,
    Kinetic,
    Obstacle,
}

impl Regime {
    /// Integer code used in snapshot files.
    pub fn code(self) -> u8 {
        match self {
            Regime::Fluid => 0,
            Regime::Kinetic => 1,
            Regime::Obstacle => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegimeMask {
    pub labels: Vec<Regime>,
}

impl RegimeMask {
    /// Every non-obstacle cell labeled `fill`.
    pub fn uniform<T: Real>(grid: &SpatialGrid<T>, fill: Regime) -> Self {
        let labels = (0..grid.n_cells())
            .map(|c| if grid.is_obstacle(c) { Regime::Obstacle } else { fill })
            .collect();
        RegimeMask { labels }
    }

    #[inline]
    pub fn get(&self, c: usize) -> Regime {
        self.labels[c]
    }

    pub fn count(&self, r: Regime) -> usize {
        self.labels.iter().filter(|&&l| l == r).count()
    }

    /// Kinetic cells divided by non-obstacle cells.
    pub fn kinetic_fraction(&self) -> f64 {
        let kin = self.count(Regime::Kinetic);
        let active = kin + self.count(Regime::Fluid);
        if active == 0 {
            0.0
        } else {
            kin as f64 / active as f64
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Primitives<T> {
    pub rho: T,
    pub ux: T,
    pub uy: T,
    pub temperature: T,
    pub pressure: T,
}

pub fn conserved_to_primitive<T: Real>(u: &Conserved<T>, gamma: T) -> Result<Primitives<T>> {
    let rho = u[0];
    let bad = |p: T| Error::NonPhysicalState {
        cell: None,
        rho: rho.to_f64_lossy(),
        pressure: p.to_f64_lossy(),
    };
    if !(rho > T::zero()) || !rho.is_finite() {
        return Err(bad(T::nan()));
    }
    let ux = u[1] / rho;
    let uy = u[2] / rho;
    let p = (gamma - T::one()) * (u[3] - T::lit(0.5) * rho * (ux * ux + uy * uy));
    if !(p > T::zero()) || !p.is_finite() {
        return Err(bad(p));
    }
    Ok(Primitives { rho, ux, uy, temperature: p / rho, pressure: p })
}

pub fn primitive_to_conserved<T: Real>(p: &Primitives<T>, gamma: T) -> Result<Conserved<T>> {
    if !(p.rho > T::zero() && p.pressure > T::zero()) {
        return Err(Error::NonPhysicalState {
            cell: None,
            rho: p.rho.to_f64_lossy(),
            pressure: p.pressure.to_f64_lossy(),
        });
    }
    let e = p.pressure / (gamma - T::one()) + T::lit(0.5) * p.rho * (p.ux * p.ux + p.uy * p.uy);
    Ok([p.rho, p.rho * p.ux, p.rho * p.uy, e])
}

impl<T: Real> Primitives<T> {
    /// Primitive state from density, velocity and pressure; `T = P / rho`.
    pub fn from_rho_u_p(rho: T, ux: T, uy: T, pressure: T) -> Self {
        Primitives { rho, ux, uy, temperature: pressure / rho, pressure }
    }
}

/// Builds both grids described by a configuration, including the obstacle.
pub fn build_grids<T: Real>(config: &ScenarioConfig) -> Result<(SpatialGrid<T>, VelocityGrid<T>)> {
    let g = &config.grid;
    let mut grid = SpatialGrid::new(
        g.nx,
        g.ny,
        T::lit(g.lx),
        T::lit(g.ly),
        g.boundary_x,
        g.boundary_y,
    )?
    .with_origin(T::lit(g.x0), T::lit(g.y0));
    grid.rasterize(&g.obstacle)?;
    if config.velocity.nv < 4 {
        return Err(Error::config("velocity.nv", format!("must be >= 4, got {}", config.velocity.nv)));
    }
    let vgrid = VelocityGrid::new(config.velocity.nv, T::lit(config.velocity.vmax))?;
    Ok((grid, vgrid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Preset, ScenarioId};

    #[test]
    fn order_test_grid_spacing() {
        let g = SpatialGrid::<f64>::new(90, 90, 6.0, 6.0, BoundaryKind::Periodic, BoundaryKind::Periodic)
            .unwrap();
        assert!((g.dx - 1.0 / 15.0).abs() < 1e-15);
        assert!((g.dy - 1.0 / 15.0).abs() < 1e-15);
        assert!(g.x_center(0) > 0.0 && g.x_center(89) < 6.0);
    }

    #[test]
    fn two_point_lattice_is_cell_centered() {
        let v = VelocityLattice::<f64, 1>::new(2, 5.0).unwrap();
        assert_eq!(v.axis(), &[-2.5, 2.5]);
        let v = VelocityGrid::<f64>::new(4, 2.0).unwrap();
        assert_eq!(v.n_nodes(), 16);
        assert_eq!(v.node(1), [-0.5, -1.5]);
        for k in 0..16 {
            let n = v.node(k);
            assert_eq!(v.node(v.mirror(0)[k]), [-n[0], n[1]]);
            assert_eq!(v.node(v.mirror(1)[k]), [n[0], -n[1]]);
        }
    }

    #[test]
    fn quadrature_of_constant_is_box_area() {
        let v = VelocityGrid::<f64>::new(32, 5.0).unwrap();
        let total: f64 = (0..v.n_nodes()).map(|_| v.weight).sum();
        assert!((total - 100.0).abs() < 1e-12);
    }

    #[test]
    fn wrap_modes() {
        let g = SpatialGrid::<f64>::new(4, 4, 1.0, 1.0, BoundaryKind::Periodic, BoundaryKind::ZeroGradient)
            .unwrap();
        assert_eq!(g.wrap_x(-1), 3);
        assert_eq!(g.wrap_x(-2), 2);
        assert_eq!(g.wrap_x(4), 0);
        assert_eq!(g.wrap_y(-2), 0);
        assert_eq!(g.wrap_y(5), 3);
    }

    #[test]
    fn conversions_on_known_states() {
        let p = conserved_to_primitive(&[1.0, 0.0, 0.0, 1.0], 2.0).unwrap();
        assert_eq!((p.ux, p.uy, p.pressure, p.temperature), (0.0, 0.0, 1.0, 1.0));
        let u = primitive_to_conserved(&Primitives::from_rho_u_p(1.0, 0.0, 0.0, 1.0), 2.0).unwrap();
        assert_eq!(u, [1.0, 0.0, 0.0, 1.0]);
        let u = primitive_to_conserved(&Primitives::from_rho_u_p(2.0, 0.0, 0.0, 1.0), 2.0).unwrap();
        assert_eq!(u, [2.0, 0.0, 0.0, 1.0]);
        let u = primitive_to_conserved(&Primitives::from_rho_u_p(0.125, 0.0, 0.0, 0.03125), 2.0)
            .unwrap();
        assert_eq!(u, [0.125, 0.0, 0.0, 0.03125]);
    }

    #[test]
    fn non_physical_states_are_rejected() {
        assert!(matches!(
            conserved_to_primitive(&[0.0, 0.0, 0.0, 1.0], 2.0),
            Err(Error::NonPhysicalState { .. })
        ));
        let err = conserved_to_primitive(&[1.0, 2.0, 0.0, 1.0], 2.0).unwrap_err().at_cell(3, 4);
        match err {
            Error::NonPhysicalState { cell, pressure, .. } => {
                assert_eq!(cell, Some((3, 4)));
                assert!(pressure < 0.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cylinder_and_rectangle_rasterization() {
        let cfg = ScenarioConfig::preset(ScenarioId::Cylinder, Preset::Paper);
        let (g, _) = build_grids::<f64>(&cfg).unwrap();
        let mut count = 0;
        let h = 1.0 / 78.0;
        for j in 0..78 {
            for i in 0..78 {
                let dx = (i as f64 + 0.5) * h - 0.4;
                let dy = (j as f64 + 0.5) * h - 0.5;
                if dx * dx + dy * dy <= 1.0 / 144.0 {
                    count += 1;
                }
            }
        }
        assert!(count > 0);
        assert_eq!(g.obstacle_count(), count);

        let cfg = ScenarioConfig::preset(ScenarioId::Rectangle, Preset::Paper);
        let (g, _) = build_grids::<f64>(&cfg).unwrap();
        assert_eq!(g.obstacle_count(), 40);
        assert!(g.is_obstacle(g.index(26, 37)) && g.is_obstacle(g.index(35, 40)));
        assert!(!g.is_obstacle(g.index(25, 37)) && !g.is_obstacle(g.index(36, 40)));

        let (g2, _) = build_grids::<f64>(&cfg).unwrap();
        assert_eq!(g.obstacle_mask(), g2.obstacle_mask());
    }

    #[test]
    fn obstacle_on_the_boundary_is_rejected() {
        let mut cfg = ScenarioConfig::preset(ScenarioId::Cylinder, Preset::Desk);
        cfg.grid.obstacle = ObstacleConfig::Circle { center: [0.02, 0.5], radius: 0.1 };
        assert!(build_grids::<f64>(&cfg).is_err());
    }
}
