//! Exact solution of the one-dimensional Riemann problem for the Euler
//! equations of an ideal gas.

use crate::error::{Error, Result};

/// Density, normal velocity and pressure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct State1d {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl State1d {
    pub fn new(rho: f64, u: f64, p: f64) -> Self {
        State1d { rho, u, p }
    }

    fn sound_speed(&self, gamma: f64) -> f64 {
        (gamma * self.p / self.rho).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactRiemann {
    pub left: State1d,
    pub right: State1d,
    pub gamma: f64,
    pub p_star: f64,
    pub u_star: f64,
}

/// Pressure function of one side and its derivative.
fn side_function(p: f64, s: &State1d, gamma: f64) -> (f64, f64) {
    let c = s.sound_speed(gamma);
    if p > s.p {
        let a = 2.0 / ((gamma + 1.0) * s.rho);
        let b = (gamma - 1.0) / (gamma + 1.0) * s.p;
        let q = (a / (p + b)).sqrt();
        ((p - s.p) * q, q * (1.0 - 0.5 * (p - s.p) / (p + b)))
    } else {
        let e = (gamma - 1.0) / (2.0 * gamma);
        let r = p / s.p;
        (2.0 * c / (gamma - 1.0) * (r.powf(e) - 1.0), r.powf(-(gamma + 1.0) / (2.0 * gamma)) / (s.rho * c))
    }
}

impl ExactRiemann {
    pub fn new(left: State1d, right: State1d, gamma: f64) -> Result<Self> {
        for s in [&left, &right] {
            if !(s.rho > 0.0 && s.p > 0.0) {
                return Err(Error::Riemann(format!("non-physical initial state {s:?}")));
            }
        }
        let (cl, cr) = (left.sound_speed(gamma), right.sound_speed(gamma));
        let du = right.u - left.u;
        if 2.0 * (cl + cr) / (gamma - 1.0) <= du {
            return Err(Error::Riemann("initial data generate vacuum".into()));
        }
        // two-rarefaction guess
        let e = (gamma - 1.0) / (2.0 * gamma);
        let num = cl + cr - 0.5 * (gamma - 1.0) * du;
        let den = cl / left.p.powf(e) + cr / right.p.powf(e);
        let mut p = (num / den).powf(1.0 / e).max(1e-12 * (left.p + right.p));
        for _ in 0..100 {
            let (fl, dl) = side_function(p, &left, gamma);
            let (fr, dr) = side_function(p, &right, gamma);
            let next = (p - (fl + fr + du) / (dl + dr)).max(1e-14 * p);
            let change = 2.0 * (next - p).abs() / (next + p);
            p = next;
            if change < 1e-15 {
                break;
            }
        }
        let (fl, _) = side_function(p, &left, gamma);
        let (fr, _) = side_function(p, &right, gamma);
        let u_star = 0.5 * (left.u + right.u) + 0.5 * (fr - fl);
        if !(p.is_finite() && u_star.is_finite()) {
            return Err(Error::Riemann("pressure iteration diverged".into()));
        }
        Ok(ExactRiemann { left, right, gamma, p_star: p, u_star })
    }

    /// State at similarity coordinate `xi = x / t`.
    pub fn sample(&self, xi: f64) -> State1d {
        let g = self.gamma;
        let (ps, us) = (self.p_star, self.u_star);
        let gm = (g - 1.0) / (g + 1.0);
        if xi <= us {
            let s = self.left;
            let c = s.sound_speed(g);
            if ps > s.p {
                let shock = s.u - c * ((g + 1.0) / (2.0 * g) * ps / s.p + (g - 1.0) / (2.0 * g)).sqrt();
                if xi <= shock {
                    s
                } else {
                    State1d::new(s.rho * (ps / s.p + gm) / (gm * ps / s.p + 1.0), us, ps)
                }
            } else {
                let cs = c * (ps / s.p).powf((g - 1.0) / (2.0 * g));
                if xi <= s.u - c {
                    s
                } else if xi >= us - cs {
                    State1d::new(s.rho * (ps / s.p).powf(1.0 / g), us, ps)
                } else {
                    let r = 2.0 / (g + 1.0) + gm / c * (s.u - xi);
                    let r = r.powf(2.0 / (g - 1.0));
                    let u = 2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * s.u + xi);
                    State1d::new(s.rho * r, u, s.p * r.powf(g))
                }
            }
        } else {
            let s = self.right;
            let c = s.sound_speed(g);
            if ps > s.p {
                let shock = s.u + c * ((g + 1.0) / (2.0 * g) * ps / s.p + (g - 1.0) / (2.0 * g)).sqrt();
                if xi >= shock {
                    s
                } else {
                    State1d::new(s.rho * (ps / s.p + gm) / (gm * ps / s.p + 1.0), us, ps)
                }
            } else {
                let cs = c * (ps / s.p).powf((g - 1.0) / (2.0 * g));
                if xi >= s.u + c {
                    s
                } else if xi <= us + cs {
                    State1d::new(s.rho * (ps / s.p).powf(1.0 / g), us, ps)
                } else {
                    let r = 2.0 / (g + 1.0) - gm / c * (s.u - xi);
                    let r = r.powf(2.0 / (g - 1.0));
                    let u = 2.0 / (g + 1.0) * (-c + 0.5 * (g - 1.0) * s.u + xi);
                    State1d::new(s.rho * r, u, s.p * r.powf(g))
                }
            }
        }
    }

    /// Cell averages of the density on `n` cells of `[a, b]` at time `t`,
    /// interface at `x0`, using `sub` midpoint samples per cell.
    pub fn density_averages(&self, a: f64, b: f64, x0: f64, t: f64, n: usize, sub: usize) -> Vec<f64> {
        let h = (b - a) / n as f64;
        (0..n)
            .map(|k| {
                (0..sub)
                    .map(|s| {
                        let x = a + h * (k as f64 + (s as f64 + 0.5) / sub as f64);
                        self.sample((x - x0) / t).rho
                    })
                    .sum::<f64>()
                    / sub as f64
            })
            .collect()
    }
}
