//! Flag explosive growth in an annual output series.
use growthlab::growth::{annual_growth_rates, detect_explosive, EXPLOSIVE_THRESHOLD};
use growthlab::Trajectory;

fn main() -> growthlab::Result<()> {
    // two percent a year, then a takeoff after year 30
    let traj = Trajectory::from_pairs((0..=50).map(|year| {
        let t = year as f64;
        let boost = if t > 30.0 { 1.4f64.powf(t - 30.0) } else { 1.0 };
        (t, 100.0 * 1.02f64.powf(t) * boost)
    }))?;

    let assessment = detect_explosive(&traj, EXPLOSIVE_THRESHOLD)?;
    println!("explosive: {}", assessment.explosive);
    println!("first explosive year: {:?}", assessment.first_explosive_year);
    println!("peak annual growth: {:.3}", assessment.peak_annual_growth);

    for (year, g) in annual_growth_rates(&traj)?.iter().skip(28).take(5) {
        println!("  year {year:>4}: {:>6.2}%", 100.0 * g);
    }
    Ok(())
}
