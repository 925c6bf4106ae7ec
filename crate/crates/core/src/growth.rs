//! Growth-rate utilities, the explosive-growth detector and power-law
//! exponent fitting.

use crate::error::{Error, Result};
use crate::integrate::{IntegrationResult, Termination};
use crate::stats::least_squares;
use crate::trajectory::Trajectory;

/// Default explosive-growth threshold: output must exceed 130% of its
/// running maximum.
pub const EXPLOSIVE_THRESHOLD: f64 = 0.3;

/// Year-over-year growth fractions on the calendar-year grid.
///
/// Each entry is `(year, Y(year) / Y(year - 1) - 1)`, labelled by the year
/// in which the growth is realized.
pub fn annual_growth_rates(traj: &Trajectory) -> Result<Vec<(f64, f64)>> {
    if traj.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 samples, got {}",
            traj.len()
        )));
    }
    let annual = traj.annualized()?;
    Ok(annual
        .times()
        .windows(2)
        .zip(annual.output().windows(2))
        .map(|(t, y)| (t[1], y[1] / y[0] - 1.0))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthAssessment {
    pub explosive: bool,
    pub first_explosive_year: Option<f64>,
    pub peak_annual_growth: f64,
    /// Running maximum of annual output, including the current year.
    pub running_max_series: Vec<f64>,
}

/// Flags a trajectory as explosive when some calendar year's output exceeds
/// `(1 + threshold)` times the maximum over all strictly earlier years.
///
/// Comparing against the running peak rather than the previous year means a
/// crash followed by a fast recovery does not count.
pub fn detect_explosive(traj: &Trajectory, threshold: f64) -> Result<GrowthAssessment> {
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(Error::param("threshold", "must be positive"));
    }
    let rates = annual_growth_rates(traj)?;
    let annual = traj.annualized()?;
    let (years, output) = (annual.times(), annual.output());

    let mut running_max_series = Vec::with_capacity(output.len());
    let mut peak = output[0];
    let mut first_explosive_year = None;
    running_max_series.push(peak);
    for (year, &y) in years.iter().zip(output).skip(1) {
        if first_explosive_year.is_none() && y > (1.0 + threshold) * peak {
            first_explosive_year = Some(*year);
        }
        peak = peak.max(y);
        running_max_series.push(peak);
    }

    let peak_annual_growth = rates
        .iter()
        .map(|&(_, g)| g)
        .fold(f64::NEG_INFINITY, f64::max);

    Ok(GrowthAssessment {
        explosive: first_explosive_year.is_some(),
        first_explosive_year,
        peak_annual_growth,
        running_max_series,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    /// Exponent `c` in `dY/dt ~ Y^c`.
    pub exponent: f64,
    pub r_squared: f64,
    pub samples_used: usize,
}

/// Minimum samples before fitting.
pub const MIN_FIT_SAMPLES: usize = 10;
/// Minimum usable derivative estimates after filtering.
pub const MIN_FIT_POINTS: usize = 5;

/// Estimates `c` in `dY/dt ~ Y^c` by regressing `ln(dY/dt)` on `ln Y`.
///
/// Derivatives come from centered differences of `ln Y`, so
/// `dY/dt = Y * d(ln Y)/dt`. The first sample has no centered stencil and
/// the last two are excluded because they sit closest to any blow-up.
/// Non-positive derivative estimates are dropped.
pub fn fit_power_law_exponent(traj: &Trajectory) -> Result<PowerLawFit> {
    let n = traj.len();
    if n < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "power-law fit needs at least {MIN_FIT_SAMPLES} samples, got {n}"
        )));
    }
    let (t, y) = (traj.times(), traj.output());
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for i in 1..n - 2 {
        let dlog = (y[i + 1].ln() - y[i - 1].ln()) / (t[i + 1] - t[i - 1]);
        let dy = y[i] * dlog;
        if dy > 0.0 && dy.is_finite() {
            xs.push(y[i].ln());
            ys.push(dy.ln());
        }
    }
    if xs.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData(format!(
            "only {} positive derivative estimates, need {MIN_FIT_POINTS}",
            xs.len()
        )));
    }
    let fit = least_squares(&xs, &ys);
    Ok(PowerLawFit {
        exponent: fit.slope,
        r_squared: fit.r_squared,
        samples_used: xs.len(),
    })
}

/// Power-law exponent over the upper half of the trajectory's log-output
/// range, where the asymptotic regime dominates transients.
pub fn terminal_exponent(traj: &Trajectory) -> Result<PowerLawFit> {
    let (lo, hi) = match (traj.output().first(), traj.output().iter().copied().reduce(f64::max)) {
        (Some(a), Some(b)) => (a.ln(), b.ln()),
        _ => return Err(Error::InsufficientData("empty trajectory".into())),
    };
    let mid = 0.5 * (lo + hi);
    let start = traj.output().iter().position(|y| y.ln() >= mid).unwrap_or(0);
    let upper = Trajectory::new(
        traj.times()[start..].to_vec(),
        traj.output()[start..].to_vec(),
    )?;
    fit_power_law_exponent(&upper)
}

/// True when a run reached its blow-up cap while still accelerating
/// (terminal exponent above one). Fast polynomial growth can also reach a
/// fixed cap, but its terminal exponent stays below one.
pub fn finite_time_blowup(run: &IntegrationResult) -> Result<bool> {
    if run.terminated != Termination::CapReached {
        return Ok(false);
    }
    Ok(terminal_exponent(&run.trajectory)?.exponent > 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn yearly(values: &[f64]) -> Trajectory {
        Trajectory::from_pairs(values.iter().enumerate().map(|(i, y)| (i as f64, *y))).unwrap()
    }

    /// Analytic solution of `dY/dt = Y^c`, `Y(0) = 1`.
    fn power_law_solution(c: f64, t: f64) -> f64 {
        if c == 1.0 {
            t.exp()
        } else {
            (1.0 - (c - 1.0) * t).powf(-1.0 / (c - 1.0))
        }
    }

    fn analytic_trajectory(c: f64, points: usize) -> Trajectory {
        let end = if c > 1.0 { 0.95 / (c - 1.0) } else { 5.0 };
        Trajectory::from_pairs((0..points).map(|i| {
            let t = end * i as f64 / (points - 1) as f64;
            (t, power_law_solution(c, t))
        }))
        .unwrap()
    }

    #[test]
    fn growth_rates_examples() {
        let close = |a: &[(f64, f64)], b: &[f64]| {
            a.len() == b.len() && a.iter().zip(b).all(|((_, x), y)| (x - y).abs() < 1e-12)
        };
        assert!(close(&annual_growth_rates(&yearly(&[1.0, 1.02, 1.0404])).unwrap(), &[0.02, 0.02]));
        assert!(close(&annual_growth_rates(&yearly(&[1.0, 2.0, 4.0])).unwrap(), &[1.0, 1.0]));
        assert!(close(&annual_growth_rates(&yearly(&[100.0, 50.0, 80.0])).unwrap(), &[-0.5, 0.6]));
    }

    #[test]
    fn growth_rates_need_two_samples() {
        let err = annual_growth_rates(&yearly(&[1.0])).unwrap_err();
        assert!(matches!(err, Error::InsufficientData(_)));
    }

    #[test]
    fn steady_two_percent_is_not_explosive() {
        let series: Vec<f64> = (0..=50).map(|i| 1.02f64.powi(i)).collect();
        let a = detect_explosive(&yearly(&series), EXPLOSIVE_THRESHOLD).unwrap();
        assert!(!a.explosive);
        assert_eq!(a.first_explosive_year, None);
        assert!((a.peak_annual_growth - 0.02).abs() < 1e-12);
    }

    #[test]
    fn doubling_is_explosive_from_year_one() {
        let series: Vec<f64> = (0..10).map(|i| 2f64.powi(i)).collect();
        let a = detect_explosive(&yearly(&series), EXPLOSIVE_THRESHOLD).unwrap();
        assert!(a.explosive);
        assert_eq!(a.first_explosive_year, Some(1.0));
    }

    #[test]
    fn crash_recovery_is_not_explosive() {
        let a = detect_explosive(&yearly(&[100.0, 50.0, 80.0]), EXPLOSIVE_THRESHOLD).unwrap();
        assert!(!a.explosive);
        assert!((a.peak_annual_growth - 0.6).abs() < 1e-12);
        assert_eq!(a.running_max_series, vec![100.0, 100.0, 100.0]);
    }

    #[test]
    fn exponential_fit_is_one() {
        let fit = fit_power_law_exponent(&analytic_trajectory(1.0, 200)).unwrap();
        assert!((fit.exponent - 1.0).abs() < 0.01, "{fit:?}");
    }

    #[test]
    fn quadratic_blowup_fit_is_two() {
        let fit = fit_power_law_exponent(&analytic_trajectory(2.0, 200)).unwrap();
        assert!((fit.exponent - 2.0).abs() < 0.02, "{fit:?}");
        assert!(fit.r_squared > 0.999);
    }

    #[test]
    fn fit_within_two_percent_for_analytic_families() {
        for c in [1.0, 1.25, 1.5, 2.0] {
            let fit = fit_power_law_exponent(&analytic_trajectory(c, 300)).unwrap();
            assert!((fit.exponent - c).abs() <= 0.02 * c, "c = {c}: {fit:?}");
        }
    }

    #[test]
    fn fit_rejects_short_or_declining_series() {
        assert!(fit_power_law_exponent(&yearly(&[1.0, 2.0, 3.0])).is_err());
        let declining: Vec<f64> = (0..20).map(|i| 100.0 - i as f64).collect();
        assert!(matches!(
            fit_power_law_exponent(&yearly(&declining)),
            Err(Error::InsufficientData(_))
        ));
    }
}
