//! Moment-realizability breakdown indicators and the two switching criteria.

use crate::error::{Error, Result};
use crate::linalg::{eig_symmetric, identity, Mat};
use crate::mesh::{Primitives, SpatialGrid, VelocityGrid, VelocityLattice};
use crate::moments::{l1_velocity_distance, Closure, MomentSet};
use crate::scalar::Real;

/// Reduced moments of the realizability matrix blocks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SonineMoments<T, const D: usize> {
    pub a_bar: Mat<T, D>,
    pub b_bar: [T; D],
    pub c_bar: T,
}

/// Velocity and temperature gradients of one cell; `grad_u[a][b] = d u_a / d x_b`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct CellGradient<T> {
    pub grad_u: [[T; 2]; 2],
    pub grad_t: [T; 2],
}

impl<T: Real> CellGradient<T> {
    /// Traceless strain `grad u + grad u^T - (2/d_v) div u I`.
    pub fn strain(&self, d_v: usize) -> Mat<T, 2> {
        let g = &self.grad_u;
        let div = g[0][0] + g[1][1];
        let iso = T::lit(2.0) / T::from_usize_lossy(d_v) * div;
        [
            [g[0][0] + g[0][0] - iso, g[0][1] + g[1][0]],
            [g[1][0] + g[0][1], g[1][1] + g[1][1] - iso],
        ]
    }
}

/// Derivative of `q` along one axis at position `p` of a line of `n` cells.
///
/// `at(p)` returns `None` for obstacle cells; `step(p, s)` maps `p + s` to a
/// cell position through the boundary condition.
fn line_derivative<T: Real>(
    p: usize,
    h: T,
    at: &impl Fn(usize) -> Option<T>,
    step: &impl Fn(usize, isize) -> usize,
) -> T {
    let q0 = match at(p) {
        Some(q) => q,
        None => return T::zero(),
    };
    let l1 = at(step(p, -1));
    let r1 = at(step(p, 1));
    let two = T::lit(2.0);
    match (l1, r1) {
        (Some(l), Some(r)) => (r - l) / (two * h),
        (None, Some(r)) => match at(step(p, 2)) {
            Some(r2) => (-T::lit(3.0) * q0 + T::lit(4.0) * r - r2) / (two * h),
            None => (r - q0) / h,
        },
        (Some(l), None) => match at(step(p, -2)) {
            Some(l2) => (T::lit(3.0) * q0 - T::lit(4.0) * l + l2) / (two * h),
            None => (q0 - l) / h,
        },
        (None, None) => T::zero(),
    }
}

/// Central differences with boundary-consistent neighbors and one-sided
/// second-order stencils next to obstacles. Obstacle entries are zero.
pub fn compute_gradients<T: Real>(prims: &[Primitives<T>], grid: &SpatialGrid<T>) -> Vec<CellGradient<T>> {
    let (nx, ny) = (grid.nx, grid.ny);
    let mut out = vec![CellGradient::default(); nx * ny];
    let fields: [fn(&Primitives<T>) -> T; 3] = [|p| p.ux, |p| p.uy, |p| p.temperature];
    for j in 0..ny {
        for i in 0..nx {
            let c = grid.index(i, j);
            if grid.is_obstacle(c) {
                continue;
            }
            let mut dx = [T::zero(); 3];
            let mut dy = [T::zero(); 3];
            for (q, field) in fields.iter().enumerate() {
                let at_x = |p: usize| {
                    let c = grid.index(p, j);
                    (!grid.is_obstacle(c)).then(|| field(&prims[c]))
                };
                let step_x = |p: usize, s: isize| grid.wrap_x(p as isize + s);
                dx[q] = line_derivative(i, grid.dx, &at_x, &step_x);
                let at_y = |p: usize| {
                    let c = grid.index(i, p);
                    (!grid.is_obstacle(c)).then(|| field(&prims[c]))
                };
                let step_y = |p: usize, s: isize| grid.wrap_y(p as isize + s);
                dy[q] = line_derivative(j, grid.dy, &at_y, &step_y);
            }
            out[c] = CellGradient { grad_u: [[dx[0], dy[0]], [dx[1], dy[1]]], grad_t: [dx[2], dy[2]] };
        }
    }
    out
}

/// `c0 = (d_v + 2) / 2`.
#[inline]
pub fn sonine_offset<T: Real>(d_v: usize) -> T {
    T::from_usize_lossy(d_v + 2) / T::lit(2.0)
}

pub fn sonine_moments<T: Real, const D: usize>(
    f: &[T],
    m: &MomentSet<T, D>,
    vgrid: &VelocityLattice<T, D>,
) -> Result<SonineMoments<T, D>> {
    let t = m.temperature;
    if !(t > T::zero()) {
        return Err(Error::DegenerateTemperature { temperature: t.to_f64_lossy() });
    }
    let c0 = sonine_offset::<T>(D);
    let inv_t = T::one() / t;
    let inv_sqrt_t = inv_t.sqrt();
    let dinv = T::one() / T::from_usize_lossy(D);
    let half = T::lit(0.5);
    let mut a_bar = [[T::zero(); D]; D];
    let mut b_bar = [T::zero(); D];
    let mut c_bar = T::zero();
    for (fk, v) in f.iter().zip(vgrid.nodes()) {
        let mut c = [T::zero(); D];
        let mut sq = T::zero();
        for a in 0..D {
            c[a] = v[a] - m.u[a];
            sq += c[a] * c[a];
        }
        let x = sq * inv_t * half - c0;
        for a in 0..D {
            for b in a..D {
                let mut val = c[a] * c[b] * inv_t;
                if a == b {
                    val -= sq * inv_t * dinv;
                }
                a_bar[a][b] += val * *fk;
            }
            b_bar[a] += x * c[a] * inv_sqrt_t * *fk;
        }
        c_bar += x * x * *fk;
    }
    let s = vgrid.weight / m.rho;
    for a in 0..D {
        for b in a..D {
            a_bar[a][b] *= s;
            a_bar[b][a] = a_bar[a][b];
        }
        b_bar[a] *= s;
    }
    Ok(SonineMoments { a_bar, b_bar, c_bar: c_bar * s })
}

/// Block matrix `[1, 0, -1; 0, I + A, B; -1, B^T, C]` of size `D + 2`.
pub fn realizability_matrix<T: Real, const D: usize>(sm: &SonineMoments<T, D>) -> Vec<Vec<T>> {
    let n = D + 2;
    let mut m = vec![vec![T::zero(); n]; n];
    m[0][0] = T::one();
    m[0][n - 1] = -T::one();
    m[n - 1][0] = -T::one();
    for a in 0..D {
        for b in 0..D {
            m[1 + a][1 + b] = sm.a_bar[a][b] + if a == b { T::one() } else { T::zero() };
        }
        m[1 + a][n - 1] = sm.b_bar[a];
        m[n - 1][1 + a] = sm.b_bar[a];
    }
    m[n - 1][n - 1] = sm.c_bar;
    m
}

/// `I + A - B B^T / (C - 1)`.
pub fn schur_reduce<T: Real, const D: usize>(sm: &SonineMoments<T, D>) -> Result<Mat<T, D>> {
    let denom = sm.c_bar - T::one();
    if !(denom > T::zero()) {
        return Err(Error::RealizabilityViolation { c_bar: sm.c_bar.to_f64_lossy() });
    }
    let mut s = identity::<T, D>();
    for a in 0..D {
        for b in 0..D {
            s[a][b] += sm.a_bar[a][b] - sm.b_bar[a] * sm.b_bar[b] / denom;
        }
    }
    Ok(s)
}

/// First-order Chapman-Enskog Schur matrix from macroscopic gradients.
///
/// `d_v` selects the constants (2 for the solver's lattice, 3 for the
/// classical three-dimensional values).
pub fn s1_matrix<T: Real>(
    prim: &Primitives<T>,
    grad: &CellGradient<T>,
    epsilon: T,
    beta: T,
    tau: T,
    d_v: usize,
) -> Result<Mat<T, 2>> {
    let t = prim.temperature;
    if !(t > T::zero()) {
        return Err(Error::DegenerateTemperature { temperature: t.to_f64_lossy() });
    }
    let rho = prim.rho;
    let c0 = sonine_offset::<T>(d_v);
    let mu = rho * t / ((T::one() - beta) * tau);
    let kappa = c0 * rho * t / tau;
    let strain = grad.strain(d_v);
    let visc = epsilon * mu / (rho * t);
    let heat = epsilon * kappa / (rho * t * t.sqrt());
    let heat = heat * heat / (c0 - T::one());
    let mut s = identity::<T, 2>();
    for a in 0..2 {
        for b in 0..2 {
            s[a][b] -= visc * strain[a][b] + heat * grad.grad_t[a] * grad.grad_t[b];
        }
    }
    Ok(s)
}

fn max_deviation<T: Real>(s: &Mat<T, 2>) -> Result<T> {
    Ok(eig_symmetric(s)?.into_iter().fold(T::zero(), |m, l| m.max((l - T::one()).abs())))
}

/// True when some eigenvalue of `s1` deviates from 1 by more than `eta`.
pub fn fluid_breakdown<T: Real>(s1: &Mat<T, 2>, eta: T) -> Result<bool> {
    Ok(max_deviation(s1)? > eta)
}

/// True when every eigenvalue of `s1` is within `eta` of 1 and `f` is within
/// `delta` of its Maxwellian in `L^1`.
pub fn kinetic_relabel_ok<T: Real>(
    f: &[T],
    moments: &MomentSet<T, 2>,
    s1: &Mat<T, 2>,
    eta: T,
    delta: T,
    vgrid: &VelocityGrid<T>,
    closure: &Closure<T>,
) -> Result<bool> {
    if max_deviation(s1)? > eta {
        return Ok(false);
    }
    let m = closure.maxwellian(moments.rho, moments.u, moments.temperature, vgrid)?;
    Ok(l1_velocity_distance(f, &m, vgrid) <= delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{BoundaryKind, EquilibriumKind};
    use crate::moments::{compute_moments, maxwellian};

    #[test]
    fn maxwellian_sonine_moments() {
        let v = VelocityGrid::<f64>::new(32, 6.0).unwrap();
        let f = maxwellian(1.2, [0.4, -0.3], 0.8, &v).unwrap();
        let m = compute_moments(&f, &v, 1e-12).unwrap();
        let sm = sonine_moments(&f, &m, &v).unwrap();
        assert!((sm.c_bar - 2.0).abs() < 1e-6);
        assert!(sm.b_bar.iter().all(|b| b.abs() < 1e-6));
        assert!((sm.a_bar[0][0] + sm.a_bar[1][1]).abs() < 1e-12);
        let s = schur_reduce(&sm).unwrap();
        assert!((s[0][0] - 1.0).abs() < 1e-6 && s[0][1].abs() < 1e-6);

        let mat = realizability_matrix(&sm);
        assert_eq!(mat.len(), 4);
        assert_eq!(mat[0], vec![1.0, 0.0, 0.0, -1.0]);
    }

    #[test]
    fn three_dimensional_maxwellian_gives_five_halves() {
        let v = VelocityLattice::<f64, 3>::new(32, 8.0).unwrap();
        let f = maxwellian(1.0, [0.0, 0.0, 0.0], 1.0, &v).unwrap();
        let m = compute_moments(&f, &v, 1e-12).unwrap();
        let sm = sonine_moments(&f, &m, &v).unwrap();
        assert!((sm.c_bar - 2.5).abs() < 1e-6, "{}", sm.c_bar);
    }

    #[test]
    fn schur_rank_one_update() {
        let sm = SonineMoments { a_bar: [[0.0; 2]; 2], b_bar: [0.3f64, 0.0], c_bar: 2.0 };
        let s = schur_reduce(&sm).unwrap();
        assert!((s[0][0] - (1.0 - 0.09)).abs() < 1e-15 && s[1][1] == 1.0 && s[0][1] == 0.0);
        let bad = SonineMoments { c_bar: 1.0, ..sm };
        assert!(matches!(schur_reduce(&bad), Err(Error::RealizabilityViolation { .. })));
    }

    #[test]
    fn s1_is_identity_without_epsilon_or_gradients() {
        let p = Primitives::from_rho_u_p(1.0f64, 0.2, 0.0, 0.5);
        let g = CellGradient { grad_u: [[0.3, 0.1], [-0.2, 0.5]], grad_t: [1.0, 2.0] };
        assert_eq!(s1_matrix(&p, &g, 0.0, -0.5, 1.0, 2).unwrap(), identity::<f64, 2>());
        let z = CellGradient::default();
        assert_eq!(s1_matrix(&p, &z, 0.1, -0.5, 1.0, 2).unwrap(), identity::<f64, 2>());
    }

    #[test]
    fn shear_eigenvalues() {
        let p = Primitives::from_rho_u_p(1.5f64, 0.0, 0.0, 1.2);
        let shear = 0.7;
        let g = CellGradient { grad_u: [[0.0, shear], [0.0, 0.0]], grad_t: [0.0, 0.0] };
        let (eps, beta, tau) = (1e-2, -0.5, 1.5);
        let s = s1_matrix(&p, &g, eps, beta, tau, 2).unwrap();
        let ev = eig_symmetric(&s).unwrap();
        let mu_over = 1.0 / ((1.0 - beta) * tau);
        assert!((ev[0] - (1.0 - eps * mu_over * shear)).abs() < 1e-14);
        assert!((ev[1] - (1.0 + eps * mu_over * shear)).abs() < 1e-14);
    }

    #[test]
    fn breakdown_thresholds() {
        let eta = 1e-3;
        assert!(!fluid_breakdown(&identity(), eta).unwrap());
        assert!(fluid_breakdown(&[[1.0 + 2.0 * eta, 0.0], [0.0, 1.0]], eta).unwrap());
        // exactly representable offsets to test the strict inequality
        let eta = 0.25;
        assert!(!fluid_breakdown(&[[1.0 + eta, 0.0], [0.0, 1.0 - eta]], eta).unwrap());
    }

    #[test]
    fn relabel_gates() {
        let v = VelocityGrid::<f64>::new(16, 5.0).unwrap();
        let c = Closure::new(-0.5, EquilibriumKind::Conservative, 1e-12);
        let f = c.maxwellian(1.0, [0.1, 0.2], 0.5, &v).unwrap();
        let m = compute_moments(&f, &v, 1e-12).unwrap();
        assert!(kinetic_relabel_ok(&f, &m, &identity(), 1e-8, 1e-8, &v, &c).unwrap());
        let bad = [[1.1, 0.0], [0.0, 1.0]];
        assert!(!kinetic_relabel_ok(&f, &m, &bad, 1e-3, 1.0, &v, &c).unwrap());
        let delta = 1e-3;
        let mut g = f.clone();
        // move mass 2 delta between two nodes symmetric about u: L1 distance 2 delta
        let dm = delta / v.weight;
        g[5 * 16 + 3] += dm;
        g[5 * 16 + 12] += dm;
        let mg = compute_moments(&g, &v, 1e-12).unwrap();
        assert!(!kinetic_relabel_ok(&g, &mg, &identity(), 1e-3, delta, &v, &c).unwrap());
    }

    #[test]
    fn gradients_of_linear_and_uniform_fields() {
        let g = SpatialGrid::<f64>::new(8, 6, 2.0, 1.5, BoundaryKind::ZeroGradient, BoundaryKind::ZeroGradient)
            .unwrap();
        let prims: Vec<_> = (0..g.n_cells())
            .map(|c| {
                let (i, _) = g.coords(c);
                Primitives::from_rho_u_p(1.0, g.x_center(i), 0.0, 1.0)
            })
            .collect();
        let grads = compute_gradients(&prims, &g);
        for j in 0..6 {
            for i in 1..7 {
                let d = grads[g.index(i, j)];
                assert!((d.grad_u[0][0] - 1.0).abs() < 1e-13);
                assert_eq!(d.grad_u[0][1], 0.0);
                assert_eq!(d.grad_t, [0.0, 0.0]);
            }
        }
        let strain = grads[g.index(3, 3)].strain(2);
        assert!((strain[0][0] + strain[1][1]).abs() < 1e-12);
    }
}
