//! Velocity moments, Maxwellian and anisotropic Gaussian equilibria and the
//! ES-BGK relaxation operator.

use crate::config::{EquilibriumKind, TauModel};
use crate::error::{Error, Result};
use crate::linalg::{det, identity, inverse, mat_add, mat_scale, solve_dense_in_place, trace, Mat};
use crate::mesh::{Conserved, VelocityGrid, VelocityLattice};
use crate::scalar::Real;

/// Density, bulk velocity, temperature, total energy and the centered
/// second moment `theta` (per unit density) of a distribution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentSet<T, const D: usize> {
    pub rho: T,
    pub u: [T; D],
    pub temperature: T,
    pub energy: T,
    pub theta: Mat<T, D>,
}

pub fn compute_moments<T: Real, const D: usize>(
    f: &[T],
    vgrid: &VelocityLattice<T, D>,
    vacuum: T,
) -> Result<MomentSet<T, D>> {
    debug_assert_eq!(f.len(), vgrid.n_nodes());
    let w = vgrid.weight;
    let mut rho = T::zero();
    let mut mom = [T::zero(); D];
    let mut energy = T::zero();
    for (fk, v) in f.iter().zip(vgrid.nodes()) {
        rho += *fk;
        let mut sq = T::zero();
        for a in 0..D {
            mom[a] += *fk * v[a];
            sq += v[a] * v[a];
        }
        energy += *fk * sq;
    }
    rho *= w;
    if !(rho > vacuum) {
        return Err(Error::Vacuum { density: rho.to_f64_lossy(), threshold: vacuum.to_f64_lossy() });
    }
    let mut u = [T::zero(); D];
    for a in 0..D {
        u[a] = mom[a] * w / rho;
    }
    let mut theta = [[T::zero(); D]; D];
    for (fk, v) in f.iter().zip(vgrid.nodes()) {
        let mut c = [T::zero(); D];
        for a in 0..D {
            c[a] = v[a] - u[a];
        }
        for a in 0..D {
            for b in a..D {
                theta[a][b] += *fk * c[a] * c[b];
            }
        }
    }
    for a in 0..D {
        for b in a..D {
            theta[a][b] = theta[a][b] * w / rho;
            theta[b][a] = theta[a][b];
        }
    }
    let temperature = trace(&theta) / T::from_usize_lossy(D);
    let floor = T::epsilon() * vgrid.vmax * vgrid.vmax;
    if !(temperature > floor) {
        return Err(Error::DegenerateTemperature { temperature: temperature.to_f64_lossy() });
    }
    Ok(MomentSet { rho, u, temperature, energy: T::lit(0.5) * energy * w, theta })
}

/// Conserved variables `(rho, rho u, E)` as raw velocity sums.
pub fn conserved_moments<T: Real>(f: &[T], vgrid: &VelocityGrid<T>) -> Conserved<T> {
    let (mut m0, mut mx, mut my, mut e) = (T::zero(), T::zero(), T::zero(), T::zero());
    for (fk, v) in f.iter().zip(vgrid.nodes()) {
        m0 += *fk;
        mx += *fk * v[0];
        my += *fk * v[1];
        e += *fk * (v[0] * v[0] + v[1] * v[1]);
    }
    let w = vgrid.weight;
    [m0 * w, mx * w, my * w, T::lit(0.5) * e * w]
}

/// Pointwise Maxwellian `rho / (2 pi T)^(D/2) exp(-|v-u|^2 / 2T)`.
pub fn maxwellian<T: Real, const D: usize>(
    rho: T,
    u: [T; D],
    temperature: T,
    vgrid: &VelocityLattice<T, D>,
) -> Result<Vec<T>> {
    if !(rho > T::zero()) {
        return Err(Error::Vacuum { density: rho.to_f64_lossy(), threshold: 0.0 });
    }
    if !(temperature > T::zero()) {
        return Err(Error::DegenerateTemperature { temperature: temperature.to_f64_lossy() });
    }
    let two_pi_t = T::lit(2.0) * T::PI() * temperature;
    let norm = rho / two_pi_t.powf(T::from_usize_lossy(D) / T::lit(2.0));
    let inv = T::lit(0.5) / temperature;
    Ok(vgrid
        .nodes()
        .iter()
        .map(|v| {
            let mut sq = T::zero();
            for a in 0..D {
                sq += (v[a] - u[a]) * (v[a] - u[a]);
            }
            norm * (-sq * inv).exp()
        })
        .collect())
}

/// `(1 - beta) T I + beta theta`.
pub fn temperature_tensor<T: Real, const D: usize>(
    temperature: T,
    theta: &Mat<T, D>,
    beta: T,
) -> Mat<T, D> {
    mat_add(&mat_scale(&identity(), (T::one() - beta) * temperature), &mat_scale(theta, beta))
}

fn check_positive_definite<T: Real, const D: usize>(t: &Mat<T, D>) -> Result<()> {
    let d = det(t);
    let tr = trace(t);
    // all leading minors positive
    let mut ok = d > T::zero() && tr > T::zero();
    for a in 0..D {
        ok &= t[a][a] > T::zero();
    }
    if D == 3 {
        ok &= t[0][0] * t[1][1] - t[0][1] * t[1][0] > T::zero();
    }
    if ok && d.is_finite() {
        Ok(())
    } else {
        Err(Error::ClosureFailure { det: d.to_f64_lossy(), trace: tr.to_f64_lossy() })
    }
}

/// Pointwise anisotropic Gaussian built from `T_tensor = (1-beta) T I + beta theta`.
pub fn anisotropic_gaussian<T: Real, const D: usize>(
    rho: T,
    u: [T; D],
    theta: &Mat<T, D>,
    temperature: T,
    beta: T,
    vgrid: &VelocityLattice<T, D>,
) -> Result<Vec<T>> {
    let tt = temperature_tensor(temperature, theta, beta);
    gaussian_pointwise(rho, u, &tt, vgrid)
}

/// Pointwise Gaussian with covariance `tensor`.
pub fn gaussian_pointwise<T: Real, const D: usize>(
    rho: T,
    u: [T; D],
    tensor: &Mat<T, D>,
    vgrid: &VelocityLattice<T, D>,
) -> Result<Vec<T>> {
    check_positive_definite(tensor)?;
    let inv = inverse(tensor).ok_or_else(|| Error::ClosureFailure {
        det: det(tensor).to_f64_lossy(),
        trace: trace(tensor).to_f64_lossy(),
    })?;
    let two_pi = T::lit(2.0) * T::PI();
    let norm = rho / (two_pi.powi(D as i32) * det(tensor)).sqrt();
    Ok(vgrid
        .nodes()
        .iter()
        .map(|v| {
            let mut q = T::zero();
            for a in 0..D {
                for b in 0..D {
                    q += (v[a] - u[a]) * inv[a][b] * (v[b] - u[b]);
                }
            }
            norm * (-T::lit(0.5) * q).exp()
        })
        .collect())
}

/// Fits `g = exp(theta . psi)` on the nodes so that `sum psi g w = target`.
///
/// The fit is the minimizer of the strictly convex `sum g w - theta . target`,
/// found by Newton's method with a frozen Jacobian while it contracts well.
fn fit_exponential<T: Real, const P: usize>(
    basis: &[[T; P]],
    w: T,
    target: &[T; P],
    theta0: [T; P],
    out: &mut [T],
) -> Result<()> {
    let n = basis.len();
    debug_assert_eq!(out.len(), n);
    let tol = T::lit(4.0) * T::epsilon();
    let floor = T::lit(512.0) * T::epsilon();
    let mut theta = theta0;
    let mut jac = [T::zero(); 36];
    let mut have_jac = false;
    let mut last = T::infinity();
    let mut refresh = true;

    let eval = |theta: &[T; P], need_jac: bool, out: &mut [T], jac: &mut [T; 36]| -> [T; P] {
        let mut r = [T::zero(); P];
        if need_jac {
            jac.iter_mut().for_each(|x| *x = T::zero());
        }
        for (k, psi) in basis.iter().enumerate() {
            let mut s = T::zero();
            for a in 0..P {
                s += theta[a] * psi[a];
            }
            let g = s.exp();
            out[k] = g;
            for a in 0..P {
                r[a] += psi[a] * g;
            }
            if need_jac {
                for a in 0..P {
                    let pa = psi[a] * g;
                    for b in a..P {
                        jac[a * P + b] += pa * psi[b];
                    }
                }
            }
        }
        for a in 0..P {
            r[a] = r[a] * w - target[a];
        }
        if need_jac {
            for a in 0..P {
                for b in a..P {
                    jac[a * P + b] *= w;
                    jac[b * P + a] = jac[a * P + b];
                }
            }
        }
        r
    };
    let norm = |r: &[T; P]| r.iter().fold(T::zero(), |m, x| m.max(x.abs()));

    for _ in 0..80 {
        let r = eval(&theta, refresh, out, &mut jac);
        have_jac |= refresh;
        let rn = norm(&r);
        if !rn.is_finite() {
            break;
        }
        if rn <= tol || (rn <= floor && rn > T::lit(0.5) * last) {
            return Ok(());
        }
        // refresh the Jacobian when the frozen one stops contracting
        if !refresh && rn > T::lit(0.1) * last {
            refresh = true;
            last = T::infinity();
            continue;
        }
        let mut a: Vec<T> = jac[..P * P].to_vec();
        let mut step: Vec<T> = r.iter().map(|x| -*x).collect();
        if solve_dense_in_place(&mut a, &mut step, P).is_none() {
            break;
        }
        // keep exponent changes bounded on badly scaled starts
        let big = step.iter().fold(T::zero(), |m, x| m.max(x.abs()));
        let scale = if big > T::lit(2.0) { T::lit(2.0) / big } else { T::one() };
        for a in 0..P {
            theta[a] += scale * step[a];
        }
        refresh = !have_jac || scale < T::one();
        last = rn;
    }
    let r = eval(&theta, false, out, &mut jac);
    Err(Error::EquilibriumNotConverged { residual: norm(&r).to_f64_lossy() })
}

/// 1D discrete Gaussian on `axis` (weight `dv`) with unit mass, mean `u`
/// and variance `var`.
fn discrete_gaussian_1d<T: Real>(u: T, var: T, axis: &[T], dv: T) -> Result<Vec<T>> {
    let s = var.sqrt();
    let basis: Vec<[T; 3]> = axis
        .iter()
        .map(|v| {
            let z = (*v - u) / s;
            [T::one(), z, z * z]
        })
        .collect();
    let theta0 = [-(s * (T::lit(2.0) * T::PI()).sqrt()).ln(), T::zero(), -T::lit(0.5)];
    let mut out = vec![T::zero(); axis.len()];
    fit_exponential(&basis, dv, &[T::one(), T::zero(), T::one()], theta0, &mut out)?;
    Ok(out)
}

/// Gaussian on the lattice whose discrete density, momentum and second
/// moment equal `rho`, `rho u` and `rho tensor` to rounding.
pub fn discrete_gaussian_into<T: Real>(
    rho: T,
    u: [T; 2],
    tensor: &Mat<T, 2>,
    vgrid: &VelocityGrid<T>,
    out: &mut [T],
) -> Result<()> {
    if !(rho > T::zero()) {
        return Err(Error::Vacuum { density: rho.to_f64_lossy(), threshold: 0.0 });
    }
    check_positive_definite(tensor)?;
    let nv = vgrid.nv;
    let axis = vgrid.axis();
    if tensor[0][1] == T::zero() && tensor[1][0] == T::zero() {
        let gx = discrete_gaussian_1d(u[0], tensor[0][0], axis, vgrid.dv)?;
        let gy = discrete_gaussian_1d(u[1], tensor[1][1], axis, vgrid.dv)?;
        for ky in 0..nv {
            let ry = rho * gy[ky];
            for kx in 0..nv {
                out[ky * nv + kx] = ry * gx[kx];
            }
        }
        return Ok(());
    }
    let s2 = T::lit(0.5) * trace(tensor);
    let s = s2.sqrt();
    let zx: Vec<T> = axis.iter().map(|v| (*v - u[0]) / s).collect();
    let zy: Vec<T> = axis.iter().map(|v| (*v - u[1]) / s).collect();
    let mut basis = Vec::with_capacity(nv * nv);
    for y in &zy {
        for x in &zx {
            basis.push([T::one(), *x, *y, *x * *x, *x * *y, *y * *y]);
        }
    }
    let white = mat_scale(tensor, T::one() / s2);
    let p = inverse(&white).ok_or(Error::ClosureFailure {
        det: det(tensor).to_f64_lossy(),
        trace: trace(tensor).to_f64_lossy(),
    })?;
    let half = T::lit(0.5);
    let norm = T::lit(2.0) * T::PI() * det(tensor).sqrt();
    let theta0 = [-norm.ln(), T::zero(), T::zero(), -half * p[0][0], -p[0][1], -half * p[1][1]];
    let sym = half * (white[0][1] + white[1][0]);
    let target = [T::one(), T::zero(), T::zero(), white[0][0], sym, white[1][1]];
    fit_exponential(&basis, vgrid.weight, &target, theta0, out)?;
    for g in out.iter_mut() {
        *g *= rho;
    }
    Ok(())
}

/// Relaxation time from the configured model.
#[inline]
pub fn relaxation_time<T: Real>(model: TauModel, rho: T) -> T {
    match model {
        TauModel::Density => rho,
        TauModel::Unit => T::one(),
    }
}

/// How equilibria are evaluated on the lattice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Closure<T> {
    pub beta: T,
    pub kind: EquilibriumKind,
    pub vacuum: T,
}

impl<T: Real> Closure<T> {
    pub fn new(beta: T, kind: EquilibriumKind, vacuum: T) -> Self {
        Closure { beta, kind, vacuum }
    }

    /// Gaussian with the given density, velocity and covariance.
    pub fn gaussian_into(
        &self,
        rho: T,
        u: [T; 2],
        tensor: &Mat<T, 2>,
        vgrid: &VelocityGrid<T>,
        out: &mut [T],
    ) -> Result<()> {
        match self.kind {
            EquilibriumKind::Conservative => discrete_gaussian_into(rho, u, tensor, vgrid, out),
            EquilibriumKind::Pointwise => {
                let g = gaussian_pointwise(rho, u, tensor, vgrid)?;
                out.copy_from_slice(&g);
                Ok(())
            }
        }
    }

    pub fn maxwellian_into(
        &self,
        rho: T,
        u: [T; 2],
        temperature: T,
        vgrid: &VelocityGrid<T>,
        out: &mut [T],
    ) -> Result<()> {
        if !(temperature > T::zero()) {
            return Err(Error::DegenerateTemperature { temperature: temperature.to_f64_lossy() });
        }
        let t = mat_scale(&identity(), temperature);
        self.gaussian_into(rho, u, &t, vgrid, out)
    }

    pub fn maxwellian(&self, rho: T, u: [T; 2], temperature: T, vgrid: &VelocityGrid<T>) -> Result<Vec<T>> {
        let mut out = vec![T::zero(); vgrid.n_nodes()];
        self.maxwellian_into(rho, u, temperature, vgrid, &mut out)?;
        Ok(out)
    }

    /// The ES-BGK target `G[f]` together with the moments of `f`.
    pub fn gaussian_of(&self, f: &[T], vgrid: &VelocityGrid<T>) -> Result<(MomentSet<T, 2>, Vec<T>)> {
        let m = compute_moments(f, vgrid, self.vacuum)?;
        let tt = temperature_tensor(m.temperature, &m.theta, self.beta);
        let mut g = vec![T::zero(); f.len()];
        self.gaussian_into(m.rho, m.u, &tt, vgrid, &mut g)?;
        Ok((m, g))
    }

    /// Equilibrium Maxwellian sharing the conserved moments of `f`.
    pub fn maxwellian_of(&self, f: &[T], vgrid: &VelocityGrid<T>) -> Result<Vec<T>> {
        let m = compute_moments(f, vgrid, self.vacuum)?;
        self.maxwellian(m.rho, m.u, m.temperature, vgrid)
    }

    /// `(tau / eps) (G[f] - f)`.
    pub fn collision(
        &self,
        f: &[T],
        tau: TauModel,
        epsilon: T,
        vgrid: &VelocityGrid<T>,
    ) -> Result<Vec<T>> {
        if !(epsilon > T::zero()) {
            return Err(Error::Contract("explicit collision operator needs epsilon > 0".into()));
        }
        let (m, g) = self.gaussian_of(f, vgrid)?;
        let rate = relaxation_time(tau, m.rho) / epsilon;
        Ok(g.iter().zip(f).map(|(gk, fk)| rate * (*gk - *fk)).collect())
    }
}

/// ES-BGK collision operator with the moment-matching equilibrium.
pub fn esbgk_collision<T: Real>(
    f: &[T],
    beta: T,
    tau: TauModel,
    epsilon: T,
    vgrid: &VelocityGrid<T>,
) -> Result<Vec<T>> {
    Closure::new(beta, EquilibriumKind::Conservative, T::lit(1e-12)).collision(f, tau, epsilon, vgrid)
}

/// `sum |f - g| dv^D`.
pub fn l1_velocity_distance<T: Real, const D: usize>(
    f: &[T],
    g: &[T],
    vgrid: &VelocityLattice<T, D>,
) -> T {
    debug_assert_eq!(f.len(), g.len());
    f.iter().zip(g).map(|(a, b)| (*a - *b).abs()).sum::<T>() * vgrid.weight
}

/// Prandtl number `gamma / (gamma - 1) mu / kappa` of the ES-BGK closure.
pub fn prandtl_number(beta: f64, d_v: usize) -> f64 {
    let gamma = (d_v as f64 + 2.0) / d_v as f64;
    let c0 = (d_v as f64 + 2.0) / 2.0;
    // rho T / tau cancels
    let mu = 1.0 / (1.0 - beta);
    let kappa = c0;
    gamma / (gamma - 1.0) * mu / kappa
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(nv: usize, vmax: f64) -> VelocityGrid<f64> {
        VelocityGrid::new(nv, vmax).unwrap()
    }

    #[test]
    fn maxwellian_peak_value() {
        let v = grid(2, 1e-9);
        let m = maxwellian(1.0, [0.0, 0.0], 1.0, &v).unwrap();
        for x in m {
            assert!((x - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-12);
        }
    }

    #[test]
    fn maxwellian_is_linear_in_density() {
        let v = grid(16, 5.0);
        let a = maxwellian(1.0, [0.3, -0.2], 0.7, &v).unwrap();
        let b = maxwellian(2.0, [0.3, -0.2], 0.7, &v).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(2.0 * x, *y);
        }
    }

    #[test]
    fn moments_of_sampled_maxwellian() {
        let v = grid(32, 5.0);
        let m = maxwellian(1.0, [0.0, 0.0], 0.3, &v).unwrap();
        let mm = compute_moments(&m, &v, 1e-12).unwrap();
        assert!((mm.rho - 1.0).abs() < 1e-6);
        assert!(mm.u[0].abs() < 1e-12 && mm.u[1].abs() < 1e-12);
        assert!((mm.temperature - 0.3).abs() < 1e-6 * 0.3);
        assert!((mm.energy - 0.3).abs() < 1e-6);
        assert!((trace(&mm.theta) - 2.0 * mm.temperature).abs() < 1e-15);
    }

    #[test]
    fn single_node_distribution_has_degenerate_temperature() {
        let v = grid(8, 4.0);
        let mut f = vec![0.0; v.n_nodes()];
        f[19] = 1.0;
        let err = compute_moments(&f, &v, 1e-12).unwrap_err();
        assert!(matches!(err, Error::DegenerateTemperature { .. }), "{err:?}");
        let err = compute_moments(&vec![0.0; v.n_nodes()], &v, 1e-12).unwrap_err();
        assert!(matches!(err, Error::Vacuum { .. }));
    }

    #[test]
    fn gaussian_reduces_to_maxwellian() {
        let v = grid(16, 5.0);
        let theta = [[0.5, 0.1], [0.1, 0.3]];
        let g = anisotropic_gaussian(1.3, [0.2, 0.1], &theta, 0.4, 0.0, &v).unwrap();
        let m = maxwellian(1.3, [0.2, 0.1], 0.4, &v).unwrap();
        for (a, b) in g.iter().zip(&m) {
            assert!((a - b).abs() < 1e-15);
        }
        let iso = [[0.4, 0.0], [0.0, 0.4]];
        let g = anisotropic_gaussian(1.3, [0.2, 0.1], &iso, 0.4, -0.5, &v).unwrap();
        for (a, b) in g.iter().zip(&m) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn indefinite_tensor_is_a_closure_failure() {
        let v = grid(8, 5.0);
        let theta = [[2.0, 0.0], [0.0, -1.8]];
        let err = anisotropic_gaussian(1.0, [0.0, 0.0], &theta, 0.1, 0.9, &v).unwrap_err();
        match err {
            Error::ClosureFailure { det, .. } => assert!(det < 0.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn discrete_gaussian_matches_moments_exactly() {
        let v = grid(16, 5.0);
        let tensor = [[0.45, 0.07], [0.07, 0.25]];
        let mut g = vec![0.0; v.n_nodes()];
        discrete_gaussian_into(1.7, [0.3, -0.4], &tensor, &v, &mut g).unwrap();
        let m = compute_moments(&g, &v, 1e-12).unwrap();
        assert!((m.rho - 1.7).abs() < 1e-14);
        assert!((m.u[0] - 0.3).abs() < 1e-14 && (m.u[1] + 0.4).abs() < 1e-14);
        for a in 0..2 {
            for b in 0..2 {
                assert!((m.theta[a][b] - tensor[a][b]).abs() < 1e-14, "{a}{b}");
            }
        }
        assert!(g.iter().all(|x| *x > 0.0));
    }

    #[test]
    fn separable_discrete_maxwellian_on_a_coarse_lattice() {
        let v = grid(16, 8.0);
        let c = Closure::new(-0.5, EquilibriumKind::Conservative, 1e-12);
        let m = c.maxwellian(0.125, [0.0, 0.7], 0.25, &v).unwrap();
        let u = conserved_moments(&m, &v);
        let expect = [0.125, 0.0, 0.125 * 0.7, 0.5 * 0.125 * 0.49 + 0.125 * 0.25];
        for (a, b) in u.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-15, "{u:?}");
        }
    }

    #[test]
    fn collision_annihilates_equilibria_and_conserves() {
        let v = grid(16, 5.0);
        let c = Closure::new(-0.5, EquilibriumKind::Conservative, 1e-12);
        let m = c.maxwellian(1.0, [0.1, 0.0], 0.5, &v).unwrap();
        let q = c.collision(&m, TauModel::Density, 1e-3, &v).unwrap();
        assert!(q.iter().all(|x| x.abs() < 1e-9));

        let mut f = m.clone();
        for (k, x) in f.iter_mut().enumerate() {
            *x *= 1.0 + 0.3 * ((k as f64) * 0.37).sin();
        }
        let q = c.collision(&f, TauModel::Density, 1e-3, &v).unwrap();
        let s = conserved_moments(&q, &v);
        let rho = compute_moments(&f, &v, 1e-12).unwrap().rho;
        for x in s {
            assert!(x.abs() < 1e-10 * 1e3 * rho, "{s:?}");
        }
    }

    #[test]
    fn bgk_limit_of_the_collision() {
        let v = grid(16, 5.0);
        let c = Closure::new(0.0, EquilibriumKind::Conservative, 1e-12);
        let mut f = c.maxwellian(1.0, [0.0, 0.0], 0.6, &v).unwrap();
        for (k, x) in f.iter_mut().enumerate() {
            *x *= 1.0 + 0.2 * ((k as f64) * 0.11).cos();
        }
        let q = c.collision(&f, TauModel::Unit, 0.5, &v).unwrap();
        let m = c.maxwellian_of(&f, &v).unwrap();
        for k in 0..f.len() {
            assert!((q[k] - 2.0 * (m[k] - f[k])).abs() < 1e-14);
        }
    }

    #[test]
    fn l1_distance_basics() {
        let v = grid(16, 5.0);
        let m = maxwellian(1.0, [0.0, 0.0], 1.0, &v).unwrap();
        assert_eq!(l1_velocity_distance(&m, &m, &v), 0.0);
        let mass: f64 = m.iter().sum::<f64>() * v.weight;
        let twice: Vec<f64> = m.iter().map(|x| 2.0 * x).collect();
        assert!((l1_velocity_distance(&m, &twice, &v) - mass).abs() < 1e-15);
    }

    #[test]
    fn prandtl_of_esbgk() {
        assert!((prandtl_number(-0.5, 2) - 2.0 / 3.0).abs() < 1e-15);
        assert!((prandtl_number(-0.5, 3) - 2.0 / 3.0).abs() < 1e-15);
        assert!((prandtl_number(0.0, 2) - 1.0).abs() < 1e-15);
    }
}
