use serde::Serialize;

use crate::error::Error;
use crate::operator::Operator1D;
use crate::Result;

/// Magnitude at which an integration is reported as blown up.
pub const BLOW_UP: f64 = 1e300;

#[derive(Debug, Clone, Serialize)]
pub struct IvpSolution {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    /// Last valid abscissa when `|u|` exceeded [`BLOW_UP`].
    pub blow_up_at: Option<f64>,
}

impl IvpSolution {
    pub fn last(&self) -> (f64, f64, f64) {
        let i = self.x.len() - 1;
        (self.x[i], self.u[i], self.du[i])
    }
}

/// Classical RK4 for `(ℒ + λ) u = 0` written as a first-order system in
/// `(u, u′)`, with fixed step close to `h` from `x0` to `x1` (either
/// direction).
pub fn solve_ivp(op: &Operator1D, lambda: f64, x0: f64, u0: f64, du0: f64, x1: f64, h: f64) -> Result<IvpSolution> {
    if !(h > 0.0) {
        return Err(Error::invalid(format!("step must be positive, got {h}")));
    }
    let steps = ((x1 - x0).abs() / h).ceil().max(1.0) as usize;
    let dx = (x1 - x0) / steps as f64;
    let accel = |x: f64, u: f64, du: f64| {
        let a = op.diffusion(x);
        -((op.diffusion_derivative(x) + op.drift(x)) * du + (op.potential(x) + lambda) * u) / a
    };

    let mut sol = IvpSolution {
        x: Vec::with_capacity(steps + 1),
        u: Vec::with_capacity(steps + 1),
        du: Vec::with_capacity(steps + 1),
        blow_up_at: None,
    };
    let (mut u, mut du) = (u0, du0);
    sol.x.push(x0);
    sol.u.push(u);
    sol.du.push(du);
    for i in 0..steps {
        let x = x0 + i as f64 * dx;
        let k1u = du;
        let k1v = accel(x, u, du);
        let k2u = du + 0.5 * dx * k1v;
        let k2v = accel(x + 0.5 * dx, u + 0.5 * dx * k1u, k2u);
        let k3u = du + 0.5 * dx * k2v;
        let k3v = accel(x + 0.5 * dx, u + 0.5 * dx * k2u, k3u);
        let k4u = du + dx * k3v;
        let k4v = accel(x + dx, u + dx * k3u, k4u);
        let nu = u + dx / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        let ndu = du + dx / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if !(nu.abs() <= BLOW_UP && ndu.is_finite()) {
            sol.blow_up_at = Some(x);
            break;
        }
        u = nu;
        du = ndu;
        sol.x.push(if i + 1 == steps { x1 } else { x0 + (i + 1) as f64 * dx });
        sol.u.push(u);
        sol.du.push(du);
    }
    Ok(sol)
}
