//! IMEX Runge-Kutta tableaux, coupled order conditions, the implicit
//! ES-BGK relaxation solve and the CFL time step.

use crate::error::{Error, Result};
use crate::linalg::{identity, mat_add, mat_scale, Mat};
use crate::mesh::{Primitives, SpatialGrid, VelocityGrid};
use crate::moments::{compute_moments, temperature_tensor, Closure};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct ButcherTableau {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl ButcherTableau {
    /// Tableau with `c` taken as the row sums of `a`.
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>) -> Self {
        let c = a.iter().map(|row| row.iter().sum()).collect();
        ButcherTableau { a, b, c }
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }

    pub fn is_explicit(&self) -> bool {
        self.a.iter().enumerate().all(|(i, row)| row[i..].iter().all(|&x| x == 0.0))
    }

    pub fn is_diagonally_implicit(&self) -> bool {
        self.a.iter().enumerate().all(|(i, row)| row[i + 1..].iter().all(|&x| x == 0.0))
    }
}

/// Explicit kinetic transport, implicit relaxation and the explicit Euler
/// layer used by the fluid region.
#[derive(Clone, Debug, PartialEq)]
pub struct ButcherPair {
    pub name: String,
    pub explicit: ButcherTableau,
    pub implicit: ButcherTableau,
    pub fluid: ButcherTableau,
}

impl ButcherPair {
    pub fn stages(&self) -> usize {
        self.explicit.stages()
    }

    fn validate(&self) -> Result<()> {
        let s = self.stages();
        for tab in [&self.explicit, &self.implicit, &self.fluid] {
            if tab.stages() != s || tab.a.len() != s || tab.a.iter().any(|r| r.len() != s) {
                return Err(Error::Contract(format!("tableau `{}` has inconsistent sizes", self.name)));
            }
        }
        if !self.explicit.is_explicit() || !self.fluid.is_explicit() {
            return Err(Error::Contract("explicit tableau has a nonzero upper part".into()));
        }
        if !self.implicit.is_diagonally_implicit() {
            return Err(Error::Contract("implicit tableau is not diagonally implicit".into()));
        }
        Ok(())
    }
}

/// The ARS(2,3,3) pair.
pub fn ars233() -> ButcherPair {
    let g = (3.0 + 3f64.sqrt()) / 6.0;
    let explicit = ButcherTableau::new(
        vec![vec![0.0, 0.0, 0.0], vec![g, 0.0, 0.0], vec![g - 1.0, 2.0 - 2.0 * g, 0.0]],
        vec![0.0, 0.5, 0.5],
    );
    let implicit = ButcherTableau::new(
        vec![vec![0.0, 0.0, 0.0], vec![0.0, g, 0.0], vec![0.0, 1.0 - 2.0 * g, g]],
        vec![0.0, 0.5, 0.5],
    );
    ButcherPair { name: "ARS(2,3,3)".into(), fluid: explicit.clone(), explicit, implicit }
}

/// Forward/backward Euler, first order only.
pub fn euler_pair() -> ButcherPair {
    let explicit = ButcherTableau::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]], vec![1.0, 0.0]);
    let implicit = ButcherTableau::new(vec![vec![0.0, 0.0], vec![0.0, 1.0]], vec![0.0, 1.0]);
    ButcherPair { name: "IMEX Euler".into(), fluid: explicit.clone(), explicit, implicit }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderCondition {
    pub description: String,
    pub order: usize,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderReport {
    pub order: usize,
    pub conditions: Vec<OrderCondition>,
    pub tolerance: f64,
}

impl OrderReport {
    pub fn max_residual(&self) -> f64 {
        self.conditions.iter().fold(0.0, |m, c| m.max(c.residual.abs()))
    }

    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.residual.abs() < self.tolerance)
    }

    pub fn failures(&self) -> impl Iterator<Item = &OrderCondition> {
        self.conditions.iter().filter(|c| c.residual.abs() >= self.tolerance)
    }
}

pub const ORDER_TOLERANCE: f64 = 1e-13;

/// Coupled order conditions up to `order` (at most 3) over every
/// combination of the three tableaux.
pub fn check_order_conditions(pair: &ButcherPair, order: usize) -> Result<OrderReport> {
    if !(1..=3).contains(&order) {
        return Err(Error::Contract(format!("order conditions are available for orders 1..=3, not {order}")));
    }
    pair.validate()?;
    let tabs = [("E", &pair.explicit), ("I", &pair.implicit), ("F", &pair.fluid)];
    let s = pair.stages();
    let mut conditions = Vec::new();
    for (n, t) in tabs {
        let r: f64 = t.b.iter().sum::<f64>() - 1.0;
        conditions.push(OrderCondition { description: format!("sum b{n} = 1"), order: 1, residual: r });
    }
    if order >= 2 {
        for (nb, tb) in tabs {
            for (nc, tc) in tabs {
                let r = (0..s).map(|i| tb.b[i] * tc.c[i]).sum::<f64>() - 0.5;
                conditions.push(OrderCondition { description: format!("b{nb}.c{nc} = 1/2"), order: 2, residual: r });
            }
        }
    }
    if order >= 3 {
        for (nb, tb) in tabs {
            for (n1, t1) in tabs {
                for (n2, t2) in tabs {
                    let r = (0..s).map(|i| tb.b[i] * t1.c[i] * t2.c[i]).sum::<f64>() - 1.0 / 3.0;
                    conditions.push(OrderCondition {
                        description: format!("b{nb}.(c{n1} c{n2}) = 1/3"),
                        order: 3,
                        residual: r,
                    });
                }
            }
        }
        for (nb, tb) in tabs {
            for (na, ta) in tabs {
                for (nc, tc) in tabs {
                    let r = (0..s)
                        .map(|i| tb.b[i] * (0..s).map(|j| ta.a[i][j] * tc.c[j]).sum::<f64>())
                        .sum::<f64>()
                        - 1.0 / 6.0;
                    conditions.push(OrderCondition {
                        description: format!("b{nb}.A{na}.c{nc} = 1/6"),
                        order: 3,
                        residual: r,
                    });
                }
            }
        }
    }
    Ok(OrderReport { order, conditions, tolerance: ORDER_TOLERANCE })
}

/// Backward-Euler relaxation `f = f* + lambda (G[f] - f)` solved in closed
/// form. `lambda` is `a_ii dt tau / eps`; an infinite value projects onto
/// the Maxwellian.
pub fn implicit_relaxation_solve<T: Real>(
    f_star: &[T],
    lambda: T,
    closure: &Closure<T>,
    vgrid: &VelocityGrid<T>,
    out: &mut [T],
) -> Result<()> {
    let m = compute_moments(f_star, vgrid, closure.vacuum)?;
    let t_iso = mat_scale(&identity::<T, 2>(), m.temperature);
    if !lambda.is_finite() {
        return closure.gaussian_into(m.rho, m.u, &t_iso, vgrid, out);
    }
    let rate = lambda * (T::one() - closure.beta);
    let theta: Mat<T, 2> = mat_scale(&mat_add(&m.theta, &mat_scale(&t_iso, rate)), T::one() / (T::one() + rate));
    let tensor = temperature_tensor(m.temperature, &theta, closure.beta);
    closure.gaussian_into(m.rho, m.u, &tensor, vgrid, out)?;
    let scale = T::one() / (T::one() + lambda);
    for (o, fs) in out.iter_mut().zip(f_star) {
        *o = (*fs + lambda * *o) * scale;
    }
    Ok(())
}

/// `cfl min(dx, dy) / max(vmax, max |u| + sqrt(gamma T))` over the given cells.
pub fn cfl_timestep<'a, T: Real>(
    cfl: T,
    grid: &SpatialGrid<T>,
    vmax: Option<T>,
    fluid: impl IntoIterator<Item = &'a Primitives<T>>,
    gamma: T,
) -> Result<T> {
    let mut speed = vmax.unwrap_or(T::zero());
    for p in fluid {
        let s = (p.ux * p.ux + p.uy * p.uy).sqrt() + (gamma * p.temperature).sqrt();
        speed = speed.max(s);
    }
    if !(speed > T::zero()) {
        return Err(Error::Contract("no signal speed for the CFL condition".into()));
    }
    Ok(cfl * grid.dx.min(grid.dy) / speed)
}
