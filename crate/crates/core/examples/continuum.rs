//! Continuum limits: the blow-up ODE, the Duffing oscillator and the reaction-diffusion PDE.
//!
//! cargo run -p eca-core --release --example continuum

use eca_core::continuum::{
    blow_up_time, duffing_integrate, ode_closed_form, ode_integrate, pde_integrate, Boundary,
    PdeGrid,
};
use eca_core::EcaError;

fn main() -> eca_core::Result<()> {
    let u0 = 1.0;
    let m_star = blow_up_time(u0)?;
    println!("u' = 2u + u^3, u(0) = {u0}: blow-up at m* = {m_star:.6}");
    let traj = ode_integrate(u0, 1.0, 1e-5)?;
    for frac in [0.25, 0.5, 0.75, 0.9, 0.99] {
        let m = frac * m_star;
        let s = traj
            .states
            .iter()
            .min_by(|a, b| (a.m - m).abs().total_cmp(&(b.m - m).abs()))
            .unwrap();
        println!(
            "  m = {:.5}  rk4 {:>14.6}  exact {:>14.6}",
            s.m,
            s.u,
            ode_closed_form(u0, s.m)?
        );
    }
    println!("  integrator stopped at m = {:?}", traj.blown_up_at);
    if let Err(e @ EcaError::BlowUp { .. }) = ode_closed_form(u0, 0.3) {
        println!("  closed form past m*: {e}");
    }

    let d = duffing_integrate(1.0, 0.0, 20.0, 1e-4)?;
    println!(
        "\nu'' + 2u + u^3 = 0: period {:.5}, relative energy drift {:.1e}",
        d.period().unwrap_or(f64::NAN),
        d.energy_drift()
    );

    println!("\nu_m = u_xx + 2u + u^3, Gaussian bump, dx = 0.1, dt = 0.004");
    let mut grid = PdeGrid::bump(81, 0.5, 0.5, 0.1, 0.004).with_boundary(Boundary::Zero);
    for k in 1..=5 {
        grid = pde_integrate(grid, 0.1 * k as f64)?;
        println!("  m = {:.1}  max |u| = {:.6}", grid.m, grid.max_abs());
    }
    let advected = pde_integrate(
        PdeGrid::bump(81, 0.5, 0.5, 0.1, 0.004).with_advection(true),
        0.5,
    )?;
    let peak = advected
        .values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap()
        .0;
    println!("  with transport -3(u+1)u_x the peak moves from index 40 to {peak}");

    match pde_integrate(PdeGrid::constant(11, 0.1, 0.1, 0.01), 0.1) {
        Err(e) => println!("  dt = 0.01 with dx = 0.1: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
