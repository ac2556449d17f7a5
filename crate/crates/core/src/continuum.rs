//! Continuum-limit numerics for rule 22.
//!
//! The leading-order continuum limit of rule 22 is the reaction-diffusion
//! equation `u_m = u_xx + 2u + u^3`. Its spatially homogeneous reduction
//! `u' = 2u + u^3` blows up in finite time, and dropping `u_m` instead gives
//! the undamped Duffing oscillator `u'' + 2u + u^3 = 0`.
//!
//! Asymmetric rules pick up a transport term `v(u) u_x`; for rule 30 the
//! coefficient is `v(u) = 3(u + 1)`. [`PdeGrid::with_advection`] adds that
//! term for qualitative comparison only.

use serde::Serialize;

use crate::error::{domain, EcaError, Result};

/// `|u|` above this value counts as blow-up.
pub const BLOW_UP_THRESHOLD: f64 = 1e8;

fn reaction(u: f64) -> f64 {
    2.0 * u + u * u * u
}

fn check_u0(u0: f64) -> Result<()> {
    if !(u0 > 0.0) || !u0.is_finite() {
        return domain(format!(
            "initial amplitude u0 = {u0} must be positive and finite"
        ));
    }
    Ok(())
}

/// Blow-up time `m* = ln(1 + 2/u0^2) / 4` of `u' = 2u + u^3`.
pub fn blow_up_time(u0: f64) -> Result<f64> {
    check_u0(u0)?;
    Ok(0.25 * (2.0 / (u0 * u0)).ln_1p())
}

/// Exact solution `u0 sqrt(2) e^{2m} / sqrt(2 + u0^2 (1 - e^{4m}))`.
pub fn ode_closed_form(u0: f64, m: f64) -> Result<f64> {
    check_u0(u0)?;
    if !(m >= 0.0) {
        return domain(format!("m = {m} must be >= 0"));
    }
    let m_star = blow_up_time(u0)?;
    let denom = 2.0 - u0 * u0 * (4.0 * m).exp_m1();
    if m >= m_star || denom <= 0.0 {
        return Err(EcaError::BlowUp {
            m,
            blow_up_time: m_star,
        });
    }
    Ok(u0 * std::f64::consts::SQRT_2 * (2.0 * m).exp() / denom.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OdeState {
    pub m: f64,
    pub u: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OdeTrajectory {
    pub states: Vec<OdeState>,
    /// Time of the first step whose `|u|` exceeded [`BLOW_UP_THRESHOLD`].
    pub blown_up_at: Option<f64>,
}

impl OdeTrajectory {
    pub fn last(&self) -> OdeState {
        *self
            .states
            .last()
            .expect("trajectory holds the initial state")
    }
}

fn rk4<const N: usize>(y: [f64; N], h: f64, f: impl Fn([f64; N]) -> [f64; N]) -> [f64; N] {
    let axpy =
        |y: [f64; N], k: [f64; N], s: f64| -> [f64; N] { std::array::from_fn(|i| y[i] + s * k[i]) };
    let k1 = f(y);
    let k2 = f(axpy(y, k1, h / 2.0));
    let k3 = f(axpy(y, k2, h / 2.0));
    let k4 = f(axpy(y, k3, h));
    std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Step sizes covering `[0, span]` with `dt`, the last one shortened to land on `span`.
fn schedule(span: f64, dt: f64) -> impl Iterator<Item = (f64, f64)> {
    let n = if span > 0.0 {
        (span / dt - 1e-9).ceil().max(1.0) as u64
    } else {
        0
    };
    (0..n).map(move |i| {
        let start = i as f64 * dt;
        let end = if i + 1 == n {
            span
        } else {
            (i + 1) as f64 * dt
        };
        (end - start, end)
    })
}

fn check_dt(dt: f64) -> Result<()> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(EcaError::Parameter(format!(
            "time step dt = {dt} must be positive"
        )));
    }
    Ok(())
}

/// Classical fourth-order Runge-Kutta for `u' = 2u + u^3` on `[0, m_end]`.
pub fn ode_integrate(u0: f64, m_end: f64, dt: f64) -> Result<OdeTrajectory> {
    check_dt(dt)?;
    let mut states = vec![OdeState { m: 0.0, u: u0 }];
    let mut u = u0;
    for (h, m) in schedule(m_end, dt) {
        u = rk4([u], h, |[x]| [reaction(x)])[0];
        states.push(OdeState { m, u });
        if !(u.abs() <= BLOW_UP_THRESHOLD) {
            return Ok(OdeTrajectory {
                states,
                blown_up_at: Some(m),
            });
        }
    }
    Ok(OdeTrajectory {
        states,
        blown_up_at: None,
    })
}

/// First integral of `u'' + 2u + u^3 = 0`.
pub fn duffing_energy(u: f64, v: f64) -> f64 {
    0.5 * v * v + u * u + 0.25 * u.powi(4)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DuffingState {
    pub m: f64,
    pub u: f64,
    pub v: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DuffingTrajectory {
    pub states: Vec<DuffingState>,
}

impl DuffingTrajectory {
    /// `|E(end) - E(0)| / E(0)`, or the absolute change when `E(0) = 0`.
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.states[0].energy;
        let e1 = self.states[self.states.len() - 1].energy;
        if e0 == 0.0 {
            (e1 - e0).abs()
        } else {
            ((e1 - e0) / e0).abs()
        }
    }

    /// Times at which `u` has a local maximum (`v` crosses from positive to
    /// non-positive), linearly interpolated.
    pub fn maxima_times(&self) -> Vec<f64> {
        self.states
            .windows(2)
            .filter(|w| w[0].v > 0.0 && w[1].v <= 0.0)
            .map(|w| w[0].m + (w[1].m - w[0].m) * w[0].v / (w[0].v - w[1].v))
            .collect()
    }

    /// Spacing of the first two maxima of `u`.
    pub fn period(&self) -> Option<f64> {
        let t = self.maxima_times();
        (t.len() >= 2).then(|| t[1] - t[0])
    }

    /// State with time closest to `m`.
    pub fn nearest(&self, m: f64) -> DuffingState {
        *self
            .states
            .iter()
            .min_by(|a, b| (a.m - m).abs().total_cmp(&(b.m - m).abs()))
            .expect("trajectory holds the initial state")
    }
}

/// Fourth-order Runge-Kutta for `u'' + 2u + u^3 = 0`, logging the energy at each step.
pub fn duffing_integrate(u0: f64, v0: f64, m_end: f64, dt: f64) -> Result<DuffingTrajectory> {
    check_dt(dt)?;
    let mut states = vec![DuffingState {
        m: 0.0,
        u: u0,
        v: v0,
        energy: duffing_energy(u0, v0),
    }];
    let mut y = [u0, v0];
    for (h, m) in schedule(m_end, dt) {
        y = rk4(y, h, |[u, v]| [v, -reaction(u)]);
        states.push(DuffingState {
            m,
            u: y[0],
            v: y[1],
            energy: duffing_energy(y[0], y[1]),
        });
    }
    Ok(DuffingTrajectory { states })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Periodic,
    /// Cells outside the grid are held at 0.
    Zero,
}

/// Uniform 1-D grid for the explicit method-of-lines solver.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PdeGrid {
    pub values: Vec<f64>,
    pub dx: f64,
    pub dt: f64,
    pub m: f64,
    pub blown_up_at: Option<f64>,
    pub boundary: Boundary,
    /// Adds the transport term `-3(u + 1) u_x` (upwinded).
    pub advection: bool,
    /// Skips the `dt <= dx^2 / 2` check.
    pub allow_unstable: bool,
}

impl PdeGrid {
    pub fn new(values: Vec<f64>, dx: f64, dt: f64) -> Self {
        PdeGrid {
            values,
            dx,
            dt,
            m: 0.0,
            blown_up_at: None,
            boundary: Boundary::Periodic,
            advection: false,
            allow_unstable: false,
        }
    }

    /// `n` points with the same value.
    pub fn constant(n: usize, u0: f64, dx: f64, dt: f64) -> Self {
        PdeGrid::new(vec![u0; n], dx, dt)
    }

    /// `n` points of `amplitude * exp(-(x / width)^2)` on a grid symmetric about `x = 0`.
    pub fn bump(n: usize, amplitude: f64, width: f64, dx: f64, dt: f64) -> Self {
        let centre = (n as f64 - 1.0) / 2.0;
        let values = (0..n)
            .map(|i| {
                let x = (i as f64 - centre) * dx;
                amplitude * (-(x / width).powi(2)).exp()
            })
            .collect();
        PdeGrid::new(values, dx, dt)
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_advection(mut self, on: bool) -> Self {
        self.advection = on;
        self
    }

    pub fn allowing_unstable(mut self, on: bool) -> Self {
        self.allow_unstable = on;
        self
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| {
            if v.abs() > acc || v.is_nan() {
                v.abs()
            } else {
                acc
            }
        })
    }

    fn neighbours(&self, i: usize) -> (f64, f64) {
        let n = self.values.len();
        let left = if i > 0 {
            self.values[i - 1]
        } else {
            match self.boundary {
                Boundary::Periodic => self.values[n - 1],
                Boundary::Zero => 0.0,
            }
        };
        let right = if i + 1 < n {
            self.values[i + 1]
        } else {
            match self.boundary {
                Boundary::Periodic => self.values[0],
                Boundary::Zero => 0.0,
            }
        };
        (left, right)
    }

    /// One explicit Euler step of size `h`.
    fn advance(&mut self, h: f64) {
        let inv_dx2 = 1.0 / (self.dx * self.dx);
        let next: Vec<f64> = (0..self.values.len())
            .map(|i| {
                let u = self.values[i];
                let (left, right) = self.neighbours(i);
                // (left + right) first keeps the stencil exactly mirror symmetric.
                let mut rate = ((left + right) - 2.0 * u) * inv_dx2 + reaction(u);
                if self.advection {
                    let speed = 3.0 * (u + 1.0);
                    let grad = if speed >= 0.0 {
                        (u - left) / self.dx
                    } else {
                        (right - u) / self.dx
                    };
                    rate -= speed * grad;
                }
                u + h * rate
            })
            .collect();
        self.values = next;
    }
}

/// Explicit method-of-lines integration of `u_m = u_xx + 2u + u^3` up to `m_end`.
///
/// Stops early, with `blown_up_at` set, once `max |u|` exceeds
/// [`BLOW_UP_THRESHOLD`].
pub fn pde_integrate(initial: PdeGrid, m_end: f64) -> Result<PdeGrid> {
    let mut grid = initial;
    check_dt(grid.dt)?;
    if !(grid.dx > 0.0) {
        return Err(EcaError::Parameter(format!(
            "grid spacing dx = {} must be positive",
            grid.dx
        )));
    }
    if grid.values.is_empty() {
        return Err(EcaError::Parameter("grid has no points".into()));
    }
    if !grid.allow_unstable && grid.dt > grid.dx * grid.dx / 2.0 {
        return Err(EcaError::Parameter(format!(
            "dt = {} exceeds the explicit diffusion limit dx^2/2 = {}",
            grid.dt,
            grid.dx * grid.dx / 2.0
        )));
    }
    if grid.blown_up_at.is_some() {
        return Ok(grid);
    }
    let start = grid.m;
    for (h, elapsed) in schedule(m_end - start, grid.dt) {
        grid.advance(h);
        grid.m = start + elapsed;
        if !(grid.max_abs() <= BLOW_UP_THRESHOLD) {
            grid.blown_up_at = Some(grid.m);
            break;
        }
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blow_up_time_examples() {
        assert!((blow_up_time(1.0).unwrap() - 0.25 * 3f64.ln()).abs() < 1e-15);
        assert!((blow_up_time(1.0).unwrap() - 0.274653).abs() < 1e-6);
        assert!((blow_up_time(2f64.sqrt()).unwrap() - 0.173287).abs() < 1e-6);
        let (a, b) = (blow_up_time(10.0).unwrap(), blow_up_time(100.0).unwrap());
        assert!(a > b && b > 0.0);
        assert!(blow_up_time(0.0).is_err());
        assert!(blow_up_time(-1.0).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(ode_closed_form(1.0, 0.0).unwrap(), 1.0);
        let near = ode_closed_form(1.0, 0.27).unwrap();
        assert!(near.is_finite() && near > 10.0);
        assert!(matches!(
            ode_closed_form(1.0, 0.3),
            Err(EcaError::BlowUp { .. })
        ));
        assert!(ode_closed_form(0.0, 0.1).is_err());
    }

    #[test]
    fn closed_form_solves_the_ode() {
        // Central differences on the closed form against the right-hand side.
        for &u0 in &[0.1, 0.5, 1.0, 2.0] {
            let m_star = blow_up_time(u0).unwrap();
            for frac in [0.1, 0.4, 0.8] {
                let m = frac * m_star;
                let h = 1e-6;
                let d = (ode_closed_form(u0, m + h).unwrap() - ode_closed_form(u0, m - h).unwrap())
                    / (2.0 * h);
                let u = ode_closed_form(u0, m).unwrap();
                assert!(
                    (d - reaction(u)).abs() / reaction(u) < 1e-6,
                    "u0 {u0} m {m}"
                );
            }
            let h = 1e-6;
            let d0 = (ode_closed_form(u0, h).unwrap() - u0) / h;
            assert!((d0 - reaction(u0)).abs() / reaction(u0) < 1e-4);
        }
    }

    #[test]
    fn rk4_matches_closed_form() {
        for &u0 in &[0.1, 1.0, 2.0] {
            let m_end = 0.9 * blow_up_time(u0).unwrap();
            let traj = ode_integrate(u0, m_end, 1e-5).unwrap();
            assert!(traj.blown_up_at.is_none());
            assert!((traj.last().m - m_end).abs() < 1e-15);
            let worst = traj
                .states
                .iter()
                .map(|s| ((s.u - ode_closed_form(u0, s.m).unwrap()) / s.u).abs())
                .fold(0.0, f64::max);
            assert!(worst < 1e-6, "u0 {u0}: {worst}");
        }
    }

    #[test]
    fn rk4_order_is_four() {
        // Far enough from m* for the asymptotic regime, coarse enough to stay above round-off.
        let m_end = 0.22;
        let exact = ode_closed_form(1.0, m_end).unwrap();
        let err = |dt: f64| (ode_integrate(1.0, m_end, dt).unwrap().last().u - exact).abs();
        let order = (err(1e-3) / err(5e-4)).log2();
        assert!((3.8..4.3).contains(&order), "observed order {order}");
    }

    #[test]
    fn zero_is_a_fixed_point() {
        let traj = ode_integrate(0.0, 5.0, 1e-3).unwrap();
        assert!(traj.states.iter().all(|s| s.u == 0.0));
    }

    #[test]
    fn blow_up_detected_near_m_star() {
        let m_star = blow_up_time(1.0).unwrap();
        let traj = ode_integrate(1.0, 1.0, 1e-5).unwrap();
        let at = traj.blown_up_at.expect("solution blows up");
        assert!(((at - m_star) / m_star).abs() < 0.01, "{at} vs {m_star}");
    }

    #[test]
    fn duffing_energy_conserved() {
        let traj = duffing_integrate(1.0, 0.0, 10.0, 1e-4).unwrap();
        assert_eq!(traj.states[0].energy, 1.25);
        assert!(traj.energy_drift() < 1e-8, "{}", traj.energy_drift());

        let rest = duffing_integrate(0.0, 0.0, 1.0, 1e-3).unwrap();
        assert!(rest.states.iter().all(|s| s.u == 0.0 && s.v == 0.0));
    }

    #[test]
    fn duffing_orbit_returns() {
        for (u0, v0) in [(1.0, 0.0), (0.3, 0.8)] {
            let traj = duffing_integrate(u0, v0, 20.0, 1e-4).unwrap();
            let period = traj.period().expect("periodic orbit");
            let first = traj.maxima_times()[0];
            let s = traj.nearest(first + period);
            let s0 = traj.nearest(first);
            assert!((s.u - s0.u).abs() < 1e-3 && (s.v - s0.v).abs() < 1e-3);
            if v0 == 0.0 {
                let back = traj.nearest(period);
                assert!((back.u - u0).abs() < 1e-3 && back.v.abs() < 1e-3);
            }
        }
    }

    #[test]
    fn pde_zero_stays_zero() {
        let g = pde_integrate(PdeGrid::constant(32, 0.0, 0.1, 1e-3), 1.0).unwrap();
        assert!(g.values.iter().all(|&v| v == 0.0));
        assert!(g.blown_up_at.is_none());
        assert!((g.m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pde_rejects_unstable_steps() {
        let g = PdeGrid::constant(8, 0.1, 0.1, 0.01);
        assert!(matches!(
            pde_integrate(g.clone(), 0.1),
            Err(EcaError::Parameter(_))
        ));
        assert!(pde_integrate(g.allowing_unstable(true), 0.05).is_ok());
    }

    #[test]
    fn pde_constant_matches_closed_form() {
        let u0 = 1.0;
        let m_end = 0.8 * blow_up_time(u0).unwrap();
        let g = pde_integrate(PdeGrid::constant(16, u0, 0.1, 1e-6), m_end).unwrap();
        let exact = ode_closed_form(u0, m_end).unwrap();
        for v in &g.values {
            assert!(((v - exact) / exact).abs() < 1e-4, "{v} vs {exact}");
        }
    }

    #[test]
    fn pde_even_data_stays_even() {
        for boundary in [Boundary::Periodic, Boundary::Zero] {
            let g = PdeGrid::bump(101, 0.5, 1.0, 0.1, 1e-3).with_boundary(boundary);
            let out = pde_integrate(g, 0.5).unwrap();
            let n = out.values.len();
            for i in 0..n {
                assert_eq!(out.values[i], out.values[n - 1 - i]);
            }
        }
    }

    #[test]
    fn pde_blow_up_is_flagged() {
        let u0 = 2.0;
        let g = pde_integrate(PdeGrid::constant(8, u0, 0.5, 1e-5), 1.0).unwrap();
        let at = g.blown_up_at.expect("blow-up");
        assert!(((at - blow_up_time(u0).unwrap()) / at).abs() < 0.01);
        assert!(g.max_abs() > BLOW_UP_THRESHOLD);
    }

    #[test]
    fn advection_breaks_parity() {
        let g = PdeGrid::bump(101, 0.5, 1.0, 0.1, 1e-3).with_advection(true);
        let out = pde_integrate(g, 0.2).unwrap();
        let n = out.values.len();
        let asym = (0..n)
            .map(|i| (out.values[i] - out.values[n - 1 - i]).abs())
            .fold(0.0, f64::max);
        assert!(asym > 1e-3);
    }
}
