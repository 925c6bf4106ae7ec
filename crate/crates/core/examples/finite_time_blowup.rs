//! Integrate dY/dt = Y^c and watch it hit the blow-up cap.
use growthlab::growth::{finite_time_blowup, terminal_exponent};
use growthlab::integrate::{scalar, OdeProblem, SampleGrid};

fn main() -> growthlab::Result<()> {
    for c in [1.0, 1.5, 2.0] {
        let problem = OdeProblem::new(scalar(move |y: f64| y.powf(c))).with_grid(SampleGrid::Steps);
        let run = problem.integrate_to_blowup(&[1.0], 20.0)?;
        let exact = if c > 1.0 { format!("{:.4}", 1.0 / (c - 1.0)) } else { "none".into() };
        println!(
            "c = {c}: {:?} at {:?} (closed form {exact}), {} steps, terminal exponent {:.3}, finite-time: {}",
            run.terminated,
            run.blowup_time,
            run.accepted_steps,
            terminal_exponent(&run.trajectory)?.exponent,
            finite_time_blowup(&run)?,
        );
    }
    Ok(())
}
