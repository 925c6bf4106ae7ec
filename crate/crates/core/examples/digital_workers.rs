//! AI workers that substitute for labor and can be built from output.
use growthlab::digital_workers::*;
use growthlab::growth::{detect_explosive, EXPLOSIVE_THRESHOLD};

fn main() -> growthlab::Result<()> {
    let cal = UsCalibration::EMPLOYED;
    let a = calibrate_a(&cal)?;
    println!("A = {a:.1}, B_alpha = {:.5}", b_alpha(cal.alpha)?);

    let c_bar = worker_cost_from_hardware(2e18, 3e22)?;
    println!("cost of one digital worker: ${c_bar:.0}/year");
    println!(
        "cost threshold at s = 1: ${:.0}",
        explosive_cost_threshold(1.0, a, cal.alpha, EXPLOSIVE_GROWTH_RATE)?
    );
    println!(
        "minimum saving rate at ${c_bar:.0}: {:.4}",
        min_saving_rate(c_bar, a, cal.alpha, EXPLOSIVE_GROWTH_RATE)?
    );

    for years in [0.0, 10.0, 20.0] {
        let cost = project_hardware_cost(c_bar, HARDWARE_HALVING_YEARS, years)?;
        let params = DigitalEconomyParams::calibrated(&cal, 0.2, cost)?;
        println!("  +{years:>2} years: c_bar ${cost:>8.0}, long-run growth {:.3}", steady_state_growth(&params)?);
    }

    let params = DigitalEconomyParams::calibrated(&cal, 0.2, c_bar)?;
    let run = simulate(&params, 50.0)?;
    let end = run.trajectory.last_time().unwrap_or(0.0);
    println!(
        "50-year run: final-decade growth {:.4}, explosive {}",
        run.trajectory.log_growth_rate(end - 10.0, end)?,
        detect_explosive(&run.trajectory, EXPLOSIVE_THRESHOLD)?.explosive
    );
    Ok(())
}
