//! Bottlenecks from tasks that stay manual under CES production.
use growthlab::ces::*;

fn main() -> growthlab::Result<()> {
    let table = table3(&SCALE_UP_FRACTIONS, &SCALE_UP_RHOS)?;
    let mut csv = Vec::new();
    table.write_csv(&mut csv)?;
    print!("{}", String::from_utf8_lossy(&csv));

    let economy = TaskEconomy::new(-1.0, 0.1).with_tasks(100);
    let allocation = optimal_allocation(&economy)?;
    let gain = economy.output(&allocation)?.value / economy.baseline_output()?;
    println!("10% manual, rho = -1: output x{gain:.1}");
    for m in [10.0, 100.0, 1e4] {
        println!("  automated tasks only {m}x faster: x{:.2}", finite_boost_level_effect(0.1, -1.0, m)?);
    }

    for rho in [-5.0, -1.0, -0.5] {
        let schedule = automation_schedule(rho, 100.0, 80.0, 1.0 / 80.0)?;
        println!(
            "rho {rho}: share of growth in the last 8 years {:.2}",
            back_loaded_share(&schedule, 0.1)?
        );
    }
    Ok(())
}
