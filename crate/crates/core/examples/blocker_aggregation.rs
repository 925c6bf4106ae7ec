//! Chance that at least one blocker holds, with and without shared causes.
use growthlab::beliefs::*;

fn main() -> growthlab::Result<()> {
    let marginals = [0.2, 0.15, 0.1, 0.1];
    println!("independent: {:.4}", disjunction_independent(&marginals)?);

    let sweep = correlation_sweep(&marginals, &[0.0, 0.25, 0.5, 0.75], 7, 200_000)?;
    for (c, e) in sweep.latent_corrs.iter().zip(&sweep.estimates) {
        println!("  latent corr {c:.2}: {:.4} +/- {:.4} ({})", e.p, e.std_err, e.likelihood().label());
    }

    println!("laplace (1.5 OOM seen, 1 ahead): {}", laplace_time_invariant(1.5, 1.0)?);
    let energy = resource_headroom(4e13, 4.4e16)?;
    println!("energy headroom: {:.2} OOM", energy.ooms);
    println!(
        "growth to use 2 OOM in 20 years: {:.3}/year",
        implied_growth_under_headroom(2.0, 20.0)?
    );
    Ok(())
}
