#![allow(dead_code)]

use kinhy::indicators::CellGradient;
use kinhy::mesh::VelocityGrid;

/// Cyclic Jacobi rotations; eigenvalues in ascending order.
pub fn jacobi_eigenvalues<const N: usize>(mut a: [[f64; N]; N]) -> Vec<f64> {
    for _sweep in 0..100 {
        let mut off = 0.0;
        let mut norm = 0.0;
        for p in 0..N {
            for q in 0..N {
                norm += a[p][q] * a[p][q];
                if p != q {
                    off += a[p][q] * a[p][q];
                }
            }
        }
        if off <= 1e-32 * norm || off == 0.0 {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..N).map(|k| a[k][k]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// Star-region pressure of a 1D Riemann problem by bisection on the
/// pressure function.
pub fn star_pressure_bisection(l: (f64, f64, f64), r: (f64, f64, f64), gamma: f64) -> (f64, f64) {
    let f = |p: f64, (rho, _u, pk): (f64, f64, f64)| {
        let a = (gamma * pk / rho).sqrt();
        if p > pk {
            let ak = 2.0 / ((gamma + 1.0) * rho);
            let bk = (gamma - 1.0) / (gamma + 1.0) * pk;
            (p - pk) * (ak / (p + bk)).sqrt()
        } else {
            2.0 * a / (gamma - 1.0) * ((p / pk).powf((gamma - 1.0) / (2.0 * gamma)) - 1.0)
        }
    };
    let g = |p: f64| f(p, l) + f(p, r) + (r.1 - l.1);
    let (mut lo, mut hi) = (1e-12, 100.0 * l.2.max(r.2));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let p = 0.5 * (lo + hi);
    let u = 0.5 * (l.1 + r.1) + 0.5 * (f(p, r) - f(p, l));
    (p, u)
}

/// First-order Chapman-Enskog correction `h / M` of the ES-BGK model in two
/// velocity dimensions, without the factor epsilon.
pub fn chapman_enskog_phi(
    c: [f64; 2],
    temperature: f64,
    grad: &CellGradient<f64>,
    beta: f64,
    tau: f64,
) -> f64 {
    let d = grad.strain(2);
    let sq = c[0] * c[0] + c[1] * c[1];
    let mut shear = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            let delta = if a == b { 1.0 } else { 0.0 };
            shear += (c[a] * c[b] / temperature - delta * sq / (2.0 * temperature)) * d[a][b];
        }
    }
    let heat = (sq / (2.0 * temperature) - 2.0) * (c[0] * grad.grad_t[0] + c[1] * grad.grad_t[1]) / temperature;
    -(0.5 * shear / (1.0 - beta) + heat) / tau
}

/// `M (1 + eps phi)` or `M exp(eps phi)` on the nodes of `v`.
pub fn perturbed_maxwellian(
    m: &[f64],
    u: [f64; 2],
    temperature: f64,
    grad: &CellGradient<f64>,
    beta: f64,
    tau: f64,
    eps: f64,
    v: &VelocityGrid<f64>,
    exponential: bool,
) -> Vec<f64> {
    m.iter()
        .zip(v.nodes())
        .map(|(mk, node)| {
            let phi = chapman_enskog_phi([node[0] - u[0], node[1] - u[1]], temperature, grad, beta, tau);
            if exponential {
                mk * (eps * phi).exp()
            } else {
                mk * (1.0 + eps * phi)
            }
        })
        .collect()
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

pub fn max_abs_diff_2(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}

pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}
