//! Returns to accumulable inputs: regimes, exponents and steady states.
use growthlab::growth::{finite_time_blowup, fit_power_law_exponent};
use growthlab::integrate::SampleGrid;
use growthlab::semi_endog::{
    hyperbolic_exponent, returns_condition, simulate_multifactor, simulate_tfp_capital_on,
    steady_state_rates, MultiFactorParams, SemiEndogParams,
};

fn main() -> growthlab::Result<()> {
    let phi = 1.0 / 0.32;
    println!("TFP and capital, phi = {phi}");
    for beta in [0.5, 0.7, 0.9] {
        let params = SemiEndogParams {
            beta,
            phi,
            lambda: 1.0,
            saving_share_ideas: 0.1,
            saving_share_factors: 0.2,
            a0: 1.0,
            k0: 1.0,
        };
        let run = simulate_tfp_capital_on(&params, 5000.0, SampleGrid::Steps)?;
        println!(
            "  beta {beta}: {:?}, finite-time blow-up {}",
            returns_condition(1.0, phi, beta)?,
            finite_time_blowup(&run)?
        );
    }

    println!("all factors accumulable, Cobb-Douglas of degree d");
    for (d, horizon) in [(1.0, 40.0), (1.5, 30.0), (2.0, 12.0)] {
        let run = simulate_multifactor(&MultiFactorParams::cobb_douglas(d, vec![1.0, 1.0], 0.2), horizon)?;
        let fit = fit_power_law_exponent(&run.trajectory)?;
        println!(
            "  d {d}: fitted c {:.4}, predicted {:.4}, blow-up at {:?}",
            fit.exponent,
            hyperbolic_exponent(d)?,
            run.blowup_time
        );
    }

    let rates = steady_state_rates(0.3, 0.2, 0.8, 0.01)?;
    println!("steady state at n = 1%: g_y {:.5}, g_a {:.5}, g_k {:.5}", rates.g_y, rates.g_a, rates.g_k);
    Ok(())
}
