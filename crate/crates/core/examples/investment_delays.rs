//! Growth when investment takes time to turn into capital.
use growthlab::delays::*;

fn main() -> growthlab::Result<()> {
    let (a, s) = (2.0 / 3.0, 0.3);
    println!("instant adjustment: {:.4}", a * s);
    for eta in [0.05, a * s, 1.0, f64::INFINITY] {
        println!(
            "  eta {eta:>6.3}: growth {:.4}, discount {:.4}, half-life {:.2} years",
            asymptotic_growth(a, s, eta)?,
            delay_discount(a, s, eta)?,
            halving_time(eta)?
        );
    }

    let eta = a * s;
    let run = simulate_delay(&DelayParams::settled(a, s, eta, 1.0), settling_horizon(a, s, eta)?)?;
    println!(
        "simulated growth {:.6} vs eigenvalue {:.6}",
        fitted_growth(&run)?,
        asymptotic_growth(a, s, eta)?
    );
    Ok(())
}
