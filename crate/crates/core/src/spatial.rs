//! CWENO3 reconstruction, numerical fluxes and the finite-volume operators
//! for the Euler system and for kinetic transport, including periodic,
//! zero-gradient and specular obstacle boundaries.

use rayon::prelude::*;

use crate::config::BoundaryKind;
use crate::error::{Error, Result};
use crate::mesh::{Conserved, KineticField, MacroField, Regime, RegimeMask, SpatialGrid, VelocityGrid};
use crate::scalar::Real;

/// Weighting used when blending the CWENO3 candidate polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Weights {
    #[default]
    Nonlinear,
    /// Optimal linear weights; the reconstruction is the central parabola.
    Linear,
}

const EPS_W: f64 = 1e-6;

#[inline(always)]
fn blend<T: Real>(um: T, u0: T, up: T, mode: Weights) -> (T, T, T) {
    let quarter = T::lit(0.25);
    let half = T::lit(0.5);
    if mode == Weights::Linear {
        return (quarter, quarter, half);
    }
    let dl = u0 - um;
    let dr = up - u0;
    let d2 = up - T::lit(2.0) * u0 + um;
    let d1 = up - um;
    let is_l = dl * dl;
    let is_r = dr * dr;
    let is_c = T::lit(13.0 / 3.0) * d2 * d2 + quarter * d1 * d1;
    let eps = T::lit(EPS_W);
    let al = quarter / ((eps + is_l) * (eps + is_l));
    let ar = quarter / ((eps + is_r) * (eps + is_r));
    let ac = half / ((eps + is_c) * (eps + is_c));
    let s = al + ar + ac;
    (al / s, ar / s, ac / s)
}

/// Value at the right face (`xi = +1/2`) of the middle cell.
#[inline(always)]
pub fn cweno3_right<T: Real>(um: T, u0: T, up: T, mode: Weights) -> T {
    let (wl, wr, wc) = blend(um, u0, up, mode);
    let half = T::lit(0.5);
    let pl = u0 + half * (u0 - um);
    let pr = half * (u0 + up);
    let popt = u0 + T::lit(0.25) * (up - um) + (up - T::lit(2.0) * u0 + um) / T::lit(12.0);
    let pc = T::lit(2.0) * popt - half * (pl + pr);
    wl * pl + wr * pr + wc * pc
}

/// Value at the left face (`xi = -1/2`) of the middle cell.
#[inline(always)]
pub fn cweno3_left<T: Real>(um: T, u0: T, up: T, mode: Weights) -> T {
    let (wl, wr, wc) = blend(um, u0, up, mode);
    let half = T::lit(0.5);
    let pl = half * (u0 + um);
    let pr = u0 - half * (up - u0);
    let popt = u0 - T::lit(0.25) * (up - um) + (up - T::lit(2.0) * u0 + um) / T::lit(12.0);
    let pc = T::lit(2.0) * popt - half * (pl + pr);
    wl * pl + wr * pr + wc * pc
}

/// Face values `(left face, right face)` of the middle of three cell averages.
pub fn cweno3_reconstruct<T: Real>(um: T, u0: T, up: T) -> (T, T) {
    cweno3_reconstruct_with(um, u0, up, Weights::Nonlinear)
}

pub fn cweno3_reconstruct_with<T: Real>(um: T, u0: T, up: T, mode: Weights) -> (T, T) {
    (cweno3_left(um, u0, up, mode), cweno3_right(um, u0, up, mode))
}

/// `(F_L + F_R)/2 - lambda/2 (q_R - q_L)`.
#[inline(always)]
pub fn lax_friedrichs_flux<T: Real>(fl: T, fr: T, ql: T, qr: T, lambda: T) -> T {
    T::lit(0.5) * (fl + fr) - T::lit(0.5) * lambda * (qr - ql)
}

/// Physical Euler flux along `axis` and the fastest wave speed.
#[inline]
pub fn euler_flux<T: Real>(u: &Conserved<T>, axis: usize, gamma: T) -> Option<(Conserved<T>, T)> {
    let rho = u[0];
    if !(rho > T::zero()) {
        return None;
    }
    let vx = u[1] / rho;
    let vy = u[2] / rho;
    let p = (gamma - T::one()) * (u[3] - T::lit(0.5) * rho * (vx * vx + vy * vy));
    if !(p > T::zero()) || !p.is_finite() {
        return None;
    }
    let vn = if axis == 0 { vx } else { vy };
    let mut f = [rho * vn, u[1] * vn, u[2] * vn, (u[3] + p) * vn];
    f[1 + axis] += p;
    Some((f, vn.abs() + (gamma * p / rho).sqrt()))
}

/// Euler state reflected across a wall normal to `axis`.
#[inline]
pub fn mirror_state<T: Real>(u: &Conserved<T>, axis: usize) -> Conserved<T> {
    let mut m = *u;
    m[1 + axis] = -m[1 + axis];
    m
}

/// Pads a 1D array with two ghost cells on each side.
pub fn apply_boundary_ghosts<T: Copy>(values: &[T], kind: BoundaryKind) -> Vec<T> {
    let n = values.len() as isize;
    (-2..n + 2)
        .map(|i| {
            let k = match kind {
                BoundaryKind::Periodic => i.rem_euclid(n),
                BoundaryKind::ZeroGradient => i.clamp(0, n - 1),
            };
            values[k as usize]
        })
        .collect()
}

/// Kinetic ghost of a specular wall normal to `axis`.
pub fn specular_kinetic_ghost<T: Real>(f: &[T], vgrid: &VelocityGrid<T>, axis: usize) -> Vec<T> {
    vgrid.mirror(axis).iter().map(|&m| f[m]).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Src {
    Cell(usize),
    Mirror(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FaceKind {
    Closed,
    Euler,
    /// Fluid cell on the low side when `true`.
    EulerWall(bool),
    Kinetic,
    KineticWall(bool),
}

#[inline]
fn classify(l: Regime, r: Regime) -> FaceKind {
    use Regime::*;
    match (l, r) {
        (Obstacle, Obstacle) => FaceKind::Closed,
        (Kinetic, Obstacle) => FaceKind::KineticWall(true),
        (Obstacle, Kinetic) => FaceKind::KineticWall(false),
        (Fluid, Obstacle) => FaceKind::EulerWall(true),
        (Obstacle, Fluid) => FaceKind::EulerWall(false),
        (Kinetic, _) | (_, Kinetic) => FaceKind::Kinetic,
        (Fluid, Fluid) => FaceKind::Euler,
    }
}

/// Cell indices along one grid line, resolved through the boundary condition.
struct Line<'a, T> {
    grid: &'a SpatialGrid<T>,
    axis: usize,
    fixed: usize,
}

impl<'a, T: Real> Line<'a, T> {
    #[inline]
    fn cell(&self, p: isize) -> usize {
        if self.axis == 0 {
            self.grid.index(self.grid.wrap_x(p), self.fixed)
        } else {
            self.grid.index(self.fixed, self.grid.wrap_y(p))
        }
    }

    /// Stencil entry at `p`, mirrored from `center` if `p` is an obstacle.
    #[inline]
    fn src(&self, p: isize, center: usize) -> Src {
        let c = self.cell(p);
        if self.grid.is_obstacle(c) {
            Src::Mirror(center)
        } else {
            Src::Cell(c)
        }
    }
}

/// Face-flux storage reused between operator evaluations.
#[derive(Clone, Debug, Default)]
pub struct FaceFluxes<T> {
    kin_x: Vec<T>,
    kin_y: Vec<T>,
    eul_x: Vec<Conserved<T>>,
    eul_y: Vec<Conserved<T>>,
}

impl<T: Real> FaceFluxes<T> {
    pub fn new(grid: &SpatialGrid<T>, n_nodes: usize, kinetic: bool) -> Self {
        let (nx, ny) = (grid.nx, grid.ny);
        let nk = if kinetic { n_nodes } else { 0 };
        FaceFluxes {
            kin_x: vec![T::zero(); ny * (nx + 1) * nk],
            kin_y: vec![T::zero(); (ny + 1) * nx * nk],
            eul_x: vec![[T::zero(); 4]; ny * (nx + 1)],
            eul_y: vec![[T::zero(); 4]; (ny + 1) * nx],
        }
    }
}

/// Everything the operators need besides the fields.
#[derive(Clone, Copy, Debug)]
pub struct Discretization<'a, T> {
    pub grid: &'a SpatialGrid<T>,
    pub vgrid: &'a VelocityGrid<T>,
    pub gamma: T,
    pub weights: Weights,
}

impl<'a, T: Real> Discretization<'a, T> {
    pub fn new(grid: &'a SpatialGrid<T>, vgrid: &'a VelocityGrid<T>, gamma: T) -> Self {
        Discretization { grid, vgrid, gamma, weights: Weights::Nonlinear }
    }

    pub fn with_weights(mut self, weights: Weights) -> Self {
        self.weights = weights;
        self
    }

    fn line(&self, axis: usize, fixed: usize) -> Line<'a, T> {
        Line { grid: self.grid, axis, fixed }
    }

    fn velocity_component(&self, axis: usize) -> Vec<T> {
        self.vgrid.nodes().iter().map(|v| v[axis]).collect()
    }

    /// Kinetic fluxes on the faces of the line `fixed` along `axis`.
    #[allow(clippy::too_many_arguments)]
    fn kinetic_line(
        &self,
        axis: usize,
        fixed: usize,
        mask: &RegimeMask,
        f: &KineticField<T>,
        vn: &[T],
        out: &mut [T],
        scratch: &mut [T],
    ) {
        let nk = f.n_nodes;
        let n = if axis == 0 { self.grid.nx } else { self.grid.ny };
        let line = self.line(axis, fixed);
        let mirror = self.vgrid.mirror(axis);
        let mode = self.weights;
        let (sa, rest) = scratch.split_at_mut(nk);
        let (sb, rest) = rest.split_at_mut(nk);
        let (sc, sd) = rest.split_at_mut(nk);
        let fetch = |src: Src, slot: &mut [T]| match src {
            Src::Cell(c) => slot.copy_from_slice(f.cell(c)),
            Src::Mirror(c) => {
                let fc = f.cell(c);
                for (s, &m) in slot.iter_mut().zip(mirror) {
                    *s = fc[m];
                }
            }
        };
        for p in 0..=n {
            let p = p as isize;
            let cl = line.cell(p - 1);
            let cr = line.cell(p);
            let face = &mut out[p as usize * nk..(p as usize + 1) * nk];
            match classify(mask.get(cl), mask.get(cr)) {
                FaceKind::Kinetic => {
                    fetch(line.src(p - 2, cl), sa);
                    fetch(line.src(p + 1, cr), sd);
                    let (fl, fr) = (f.cell(cl), f.cell(cr));
                    for k in 0..nk {
                        let v = vn[k];
                        face[k] = if v > T::zero() {
                            v * cweno3_right(sa[k], fl[k], fr[k], mode)
                        } else {
                            v * cweno3_left(fl[k], fr[k], sd[k], mode)
                        };
                    }
                }
                FaceKind::KineticWall(low) => {
                    let (c, outer) = if low { (cl, p - 2) } else { (cr, p + 1) };
                    fetch(line.src(outer, c), sa);
                    fetch(Src::Mirror(c), sb);
                    let fc = f.cell(c);
                    // sc holds the reconstructed face values of the fluid side
                    for k in 0..nk {
                        sc[k] = if low {
                            cweno3_right(sa[k], fc[k], sb[k], mode)
                        } else {
                            cweno3_left(sb[k], fc[k], sa[k], mode)
                        };
                    }
                    for k in 0..nk {
                        let v = vn[k];
                        let outgoing = (v > T::zero()) == low;
                        face[k] = if outgoing { v * sc[k] } else { v * sc[mirror[k]] };
                    }
                }
                FaceKind::Closed => face.iter_mut().for_each(|x| *x = T::zero()),
                FaceKind::Euler | FaceKind::EulerWall(_) => {}
            }
        }
    }

    /// Euler fluxes on the faces of one line; mixed faces take the velocity
    /// moments of the kinetic flux already stored in `kin`.
    #[allow(clippy::too_many_arguments)]
    fn euler_line(
        &self,
        axis: usize,
        fixed: usize,
        mask: &RegimeMask,
        u: &MacroField<T>,
        kin: &[T],
        nk: usize,
        out: &mut [Conserved<T>],
    ) -> Result<()> {
        let n = if axis == 0 { self.grid.nx } else { self.grid.ny };
        let line = self.line(axis, fixed);
        let gamma = self.gamma;
        let mode = self.weights;
        let get = |src: Src| match src {
            Src::Cell(c) => u.cells[c],
            Src::Mirror(c) => mirror_state(&u.cells[c], axis),
        };
        let recon = |a: &Conserved<T>, b: &Conserved<T>, c: &Conserved<T>, right: bool| {
            let mut r = [T::zero(); 4];
            for q in 0..4 {
                r[q] = if right {
                    cweno3_right(a[q], b[q], c[q], mode)
                } else {
                    cweno3_left(a[q], b[q], c[q], mode)
                };
            }
            r
        };
        let bad_cell = |c: usize| {
            let (i, j) = self.grid.coords(c);
            let s = u.cells[c];
            Error::NonPhysicalState {
                cell: Some((i, j)),
                rho: s[0].to_f64_lossy(),
                pressure: ((gamma - T::one())
                    * (s[3] - T::lit(0.5) * (s[1] * s[1] + s[2] * s[2]) / s[0]))
                    .to_f64_lossy(),
            }
        };
        // falls back to the cell average when the reconstruction is not admissible
        let admissible = |state: Conserved<T>, c: usize| -> Result<(Conserved<T>, Conserved<T>, T)> {
            if let Some((fl, l)) = euler_flux(&state, axis, gamma) {
                return Ok((state, fl, l));
            }
            let avg = u.cells[c];
            match euler_flux(&avg, axis, gamma) {
                Some((fl, l)) => Ok((avg, fl, l)),
                None => Err(bad_cell(c)),
            }
        };
        let lf = |ql: &Conserved<T>, fl: &Conserved<T>, qr: &Conserved<T>, fr: &Conserved<T>, lam: T| {
            let mut r = [T::zero(); 4];
            for q in 0..4 {
                r[q] = lax_friedrichs_flux(fl[q], fr[q], ql[q], qr[q], lam);
            }
            r
        };
        for p in 0..=n {
            let p = p as isize;
            let cl = line.cell(p - 1);
            let cr = line.cell(p);
            let slot = &mut out[p as usize];
            match classify(mask.get(cl), mask.get(cr)) {
                FaceKind::Euler => {
                    let a = get(line.src(p - 2, cl));
                    let d = get(line.src(p + 1, cr));
                    let (ul, ur) = (u.cells[cl], u.cells[cr]);
                    let (ql, fl, ll) = admissible(recon(&a, &ul, &ur, true), cl)?;
                    let (qr, fr, lr) = admissible(recon(&ul, &ur, &d, false), cr)?;
                    *slot = lf(&ql, &fl, &qr, &fr, ll.max(lr));
                }
                FaceKind::EulerWall(low) => {
                    let (c, outer) = if low { (cl, p - 2) } else { (cr, p + 1) };
                    let a = get(line.src(outer, c));
                    let uc = u.cells[c];
                    let m = mirror_state(&uc, axis);
                    let inner = if low { recon(&a, &uc, &m, true) } else { recon(&m, &uc, &a, false) };
                    let (q, fq, l) = admissible(inner, c)?;
                    let qm = mirror_state(&q, axis);
                    let (fm, _) = euler_flux(&qm, axis, gamma).ok_or_else(|| bad_cell(c))?;
                    *slot = if low { lf(&q, &fq, &qm, &fm, l) } else { lf(&qm, &fm, &q, &fq, l) };
                }
                FaceKind::Kinetic => {
                    let fluid_side = mask.get(cl) == Regime::Fluid || mask.get(cr) == Regime::Fluid;
                    if fluid_side {
                        let face = &kin[p as usize * nk..(p as usize + 1) * nk];
                        *slot = flux_moments(face, self.vgrid);
                    }
                }
                FaceKind::Closed => *slot = [T::zero(); 4],
                FaceKind::KineticWall(_) => {}
            }
        }
        Ok(())
    }

    /// Evaluates every face flux the regime mask requires.
    pub fn face_fluxes(
        &self,
        mask: &RegimeMask,
        f: &KineticField<T>,
        u: &MacroField<T>,
        ws: &mut FaceFluxes<T>,
    ) -> Result<()> {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let nk = f.n_nodes;
        let any_kinetic = mask.labels.iter().any(|&r| r == Regime::Kinetic);
        if any_kinetic {
            if f.is_empty() || ws.kin_x.is_empty() {
                return Err(Error::Contract("kinetic cells present but no kinetic storage".into()));
            }
            let vx = self.velocity_component(0);
            let vy = self.velocity_component(1);
            ws.kin_x.par_chunks_mut((nx + 1) * nk).enumerate().for_each_init(
                || vec![T::zero(); 4 * nk],
                |scratch, (j, row)| self.kinetic_line(0, j, mask, f, &vx, row, scratch),
            );
            // y faces are produced column by column then scattered into face rows
            let mut cols = vec![T::zero(); nx * (ny + 1) * nk];
            cols.par_chunks_mut((ny + 1) * nk).enumerate().for_each_init(
                || vec![T::zero(); 4 * nk],
                |scratch, (i, col)| self.kinetic_line(1, i, mask, f, &vy, col, scratch),
            );
            ws.kin_y.par_chunks_mut(nx * nk).enumerate().for_each(|(p, row)| {
                for i in 0..nx {
                    let src = &cols[(i * (ny + 1) + p) * nk..(i * (ny + 1) + p + 1) * nk];
                    row[i * nk..(i + 1) * nk].copy_from_slice(src);
                }
            });
        }
        let any_fluid = mask.labels.iter().any(|&r| r == Regime::Fluid);
        if any_fluid {
            let kin_x = &ws.kin_x;
            ws.eul_x
                .par_chunks_mut(nx + 1)
                .enumerate()
                .try_for_each(|(j, row)| {
                    let kin = if kin_x.is_empty() { &[][..] } else { &kin_x[j * (nx + 1) * nk..(j + 1) * (nx + 1) * nk] };
                    self.euler_line(0, j, mask, u, kin, nk, row)
                })?;
            let kin_y = &ws.kin_y;
            let mut cols = vec![[T::zero(); 4]; nx * (ny + 1)];
            cols.par_chunks_mut(ny + 1).enumerate().try_for_each(|(i, col)| {
                // gather the column's kinetic face fluxes when they are needed
                let column_kin: Vec<T> = if kin_y.is_empty() || nk == 0 {
                    Vec::new()
                } else {
                    let mut v = Vec::with_capacity((ny + 1) * nk);
                    for p in 0..=ny {
                        v.extend_from_slice(&kin_y[(p * nx + i) * nk..(p * nx + i + 1) * nk]);
                    }
                    v
                };
                self.euler_line(1, i, mask, u, &column_kin, nk, col)
            })?;
            ws.eul_y.par_chunks_mut(nx).enumerate().for_each(|(p, row)| {
                for i in 0..nx {
                    row[i] = cols[i * (ny + 1) + p];
                }
            });
        }
        Ok(())
    }

    /// Writes `L(f)` on kinetic cells; other cells are left untouched.
    pub fn kinetic_divergence(&self, mask: &RegimeMask, ws: &FaceFluxes<T>, out: &mut KineticField<T>) {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let nk = out.n_nodes;
        let (idx, idy) = (T::one() / self.grid.dx, T::one() / self.grid.dy);
        out.data.par_chunks_mut(nx * nk).enumerate().for_each(|(j, row)| {
            for i in 0..nx {
                if mask.get(j * nx + i) != Regime::Kinetic {
                    continue;
                }
                let xl = &ws.kin_x[(j * (nx + 1) + i) * nk..][..nk];
                let xr = &ws.kin_x[(j * (nx + 1) + i + 1) * nk..][..nk];
                let yl = &ws.kin_y[(j * nx + i) * nk..][..nk];
                let yr = &ws.kin_y[((j + 1) * nx + i) * nk..][..nk];
                let cell = &mut row[i * nk..(i + 1) * nk];
                for k in 0..nk {
                    cell[k] = (xr[k] - xl[k]) * idx + (yr[k] - yl[k]) * idy;
                }
            }
        });
        let _ = ny;
    }

    /// Writes `Phi(U)` on fluid cells; other cells are left untouched.
    pub fn euler_divergence(&self, mask: &RegimeMask, ws: &FaceFluxes<T>, out: &mut MacroField<T>) {
        let nx = self.grid.nx;
        let (idx, idy) = (T::one() / self.grid.dx, T::one() / self.grid.dy);
        out.cells.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
            for i in 0..nx {
                if mask.get(j * nx + i) != Regime::Fluid {
                    continue;
                }
                let xl = ws.eul_x[j * (nx + 1) + i];
                let xr = ws.eul_x[j * (nx + 1) + i + 1];
                let yl = ws.eul_y[j * nx + i];
                let yr = ws.eul_y[(j + 1) * nx + i];
                for q in 0..4 {
                    row[i][q] = (xr[q] - xl[q]) * idx + (yr[q] - yl[q]) * idy;
                }
            }
        });
    }
}

/// `sum (1, v, |v|^2/2) F_k dv^2` of a kinetic face flux.
#[inline]
pub fn flux_moments<T: Real>(face: &[T], vgrid: &VelocityGrid<T>) -> Conserved<T> {
    let mut m = [T::zero(); 4];
    for (fk, v) in face.iter().zip(vgrid.nodes()) {
        m[0] += *fk;
        m[1] += *fk * v[0];
        m[2] += *fk * v[1];
        m[3] += *fk * (v[0] * v[0] + v[1] * v[1]);
    }
    let w = vgrid.weight;
    [m[0] * w, m[1] * w, m[2] * w, T::lit(0.5) * m[3] * w]
}

/// `Phi(U)` on an all-fluid domain (obstacles act as specular walls).
pub fn euler_rhs<T: Real>(u: &MacroField<T>, grid: &SpatialGrid<T>, gamma: T) -> Result<MacroField<T>> {
    let vgrid = VelocityGrid::new(2, T::one())?;
    let disc = Discretization::new(grid, &vgrid, gamma);
    let mask = RegimeMask::uniform(grid, Regime::Fluid);
    let mut ws = FaceFluxes::new(grid, 0, false);
    disc.face_fluxes(&mask, &KineticField::empty(), u, &mut ws)?;
    let mut out = MacroField::zeros(grid.n_cells());
    disc.euler_divergence(&mask, &ws, &mut out);
    Ok(out)
}

/// `L(f)` on an all-kinetic domain.
pub fn kinetic_transport<T: Real>(
    f: &KineticField<T>,
    grid: &SpatialGrid<T>,
    vgrid: &VelocityGrid<T>,
) -> Result<KineticField<T>> {
    kinetic_transport_with(f, grid, vgrid, Weights::Nonlinear)
}

pub fn kinetic_transport_with<T: Real>(
    f: &KineticField<T>,
    grid: &SpatialGrid<T>,
    vgrid: &VelocityGrid<T>,
    weights: Weights,
) -> Result<KineticField<T>> {
    let disc = Discretization::new(grid, vgrid, T::lit(2.0)).with_weights(weights);
    let mask = RegimeMask::uniform(grid, Regime::Kinetic);
    let mut ws = FaceFluxes::new(grid, f.n_nodes, true);
    let empty = MacroField::zeros(grid.n_cells());
    disc.face_fluxes(&mask, f, &empty, &mut ws)?;
    let mut out = KineticField::zeros(grid.n_cells(), f.n_nodes);
    disc.kinetic_divergence(&mask, &ws, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstruction_of_constants_and_linears() {
        assert_eq!(cweno3_reconstruct(2.0, 2.0, 2.0), (2.0, 2.0));
        let (l, r) = cweno3_reconstruct(0.0f64, 1.0, 2.0);
        assert!((l - 0.5).abs() < 1e-15 && (r - 1.5).abs() < 1e-15);
    }

    #[test]
    fn parabola_averages_with_linear_weights() {
        let (l, r) = cweno3_reconstruct_with(13.0f64 / 12.0, 1.0 / 12.0, 13.0 / 12.0, Weights::Linear);
        assert!((l - 0.25).abs() < 1e-15 && (r - 0.25).abs() < 1e-15);
    }

    #[test]
    fn nonlinear_weights_limit_a_jump() {
        let (l, r) = cweno3_reconstruct(0.0f64, 0.0, 1.0);
        assert!(l.abs() < 1e-3 && r.abs() < 1e-3, "({l}, {r})");
        let (l, r) = cweno3_reconstruct(0.0f64, 1.0, 1.0);
        assert!((l - 1.0).abs() < 1e-3 && (r - 1.0).abs() < 1e-3);
    }

    #[test]
    fn lax_friedrichs_cases() {
        assert_eq!(lax_friedrichs_flux(3.0, 3.0, 1.5, 1.5, 7.0), 3.0);
        assert_eq!(lax_friedrichs_flux(0.0, 0.0, 0.0, 1.0, 2.0), -1.0);
        let (v, ql, qr) = (1.5f64, 0.7, 0.2);
        assert!((lax_friedrichs_flux(v * ql, v * qr, ql, qr, v) - v * ql).abs() < 1e-15);
    }

    #[test]
    fn ghost_padding_and_mirrors() {
        assert_eq!(apply_boundary_ghosts(&['a', 'b', 'c', 'd'], BoundaryKind::Periodic), ['c', 'd', 'a', 'b', 'c', 'd', 'a', 'b']);
        assert_eq!(
            apply_boundary_ghosts(&['a', 'b', 'c', 'd'], BoundaryKind::ZeroGradient),
            ['a', 'a', 'a', 'b', 'c', 'd', 'd', 'd']
        );
        // (rho, u_n, u_t, P) = (1, 0.5, 0.2, 1) with gamma 2
        let u = [1.0, 0.5, 0.2, 1.0 + 0.5 * (0.25 + 0.04)];
        let m = mirror_state(&u, 0);
        assert_eq!(m, [1.0, -0.5, 0.2, u[3]]);
    }

    #[test]
    fn specular_ghost_preserves_half_range_mass() {
        let v = VelocityGrid::<f64>::new(8, 3.0).unwrap();
        let f: Vec<f64> = (0..64).map(|k| 1.0 + (k as f64 * 0.3).sin().abs()).collect();
        let g = specular_kinetic_ghost(&f, &v, 0);
        let incident: f64 = (0..64).filter(|&k| v.node(k)[0] > 0.0).map(|k| f[k]).sum();
        let reflected: f64 = (0..64).filter(|&k| v.node(k)[0] < 0.0).map(|k| g[k]).sum();
        assert_eq!(incident, reflected);
    }
}
