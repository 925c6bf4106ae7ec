//! AK economy where realized investment lags savings.
//!
//! `dK/dt = I`, `dI/dt = eta (s A K - I)`, `Y = A K`.

use crate::error::{ensure_fraction, ensure_positive, Error, Result};
use crate::integrate::{Dynamics, IntegrationResult, OdeProblem, SampleGrid};

/// Fraction of the horizon used when fitting the late growth rate.
pub const FIT_TAIL: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayParams {
    /// Output per unit capital, per year.
    pub a: f64,
    pub s: f64,
    /// Adjustment frequency, per year. May be infinite.
    pub eta: f64,
    pub k0: f64,
    /// Initial realized investment, $/year.
    pub i0: f64,
}

impl DelayParams {
    /// Starts with investment already equal to savings.
    pub fn settled(a: f64, s: f64, eta: f64, k0: f64) -> Self {
        Self {
            a,
            s,
            eta,
            k0,
            i0: s * a * k0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("a", self.a)?;
        ensure_fraction("s", self.s)?;
        check_eta(self.eta)?;
        ensure_positive("k0", self.k0)?;
        ensure_positive("i0", self.i0)
    }
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 {
        Ok(())
    } else {
        Err(Error::param("eta", "must be positive"))
    }
}

/// Positive root of `t^2 + eta t - A s eta`, evaluated as
/// `2 A s / (1 + sqrt(1 + 4 A s / eta))` so that `eta = inf` gives `A s`.
pub fn asymptotic_growth(a: f64, s: f64, eta: f64) -> Result<f64> {
    ensure_positive("a", a)?;
    ensure_positive("s", s)?;
    check_eta(eta)?;
    let instant = a * s;
    Ok(2.0 * instant / (1.0 + (1.0 + 4.0 * instant / eta).sqrt()))
}

/// Delayed growth as a fraction of the instant-adjustment rate `A s`.
pub fn delay_discount(a: f64, s: f64, eta: f64) -> Result<f64> {
    Ok(asymptotic_growth(a, s, eta)? / (a * s))
}

/// Years for investment to close half its gap to savings: `ln 2 / eta`.
pub fn halving_time(eta: f64) -> Result<f64> {
    check_eta(eta)?;
    Ok(std::f64::consts::LN_2 / eta)
}

/// Horizon long enough for the decaying mode to fall by `e^-20`.
pub fn settling_horizon(a: f64, s: f64, eta: f64) -> Result<f64> {
    ensure_positive("a", a)?;
    ensure_positive("s", s)?;
    ensure_positive("eta", eta)?;
    Ok(20.0 / (eta * eta + 4.0 * a * s * eta).sqrt())
}

struct DelayedInvestment(DelayParams);

impl Dynamics for DelayedInvestment {
    fn dimension(&self) -> usize {
        2
    }

    fn derivative(&self, _t: f64, state: &[f64], out: &mut [f64]) {
        let p = &self.0;
        let (k, i) = (state[0], state[1]);
        out[0] = i;
        out[1] = p.eta * (p.s * p.a * k - i);
    }

    fn output(&self, state: &[f64]) -> f64 {
        self.0.a * state[0]
    }

    fn state_names(&self) -> Vec<String> {
        vec!["K".into(), "I".into()]
    }
}

/// Integrates the lagged-investment system. Requires finite `eta`.
pub fn simulate_delay(params: &DelayParams, horizon: f64) -> Result<IntegrationResult> {
    params.validate()?;
    if params.eta.is_infinite() {
        return Err(Error::param("eta", "simulation needs a finite adjustment rate"));
    }
    ensure_positive("horizon", horizon)?;
    OdeProblem::new(DelayedInvestment(*params))
        .with_grid(SampleGrid::default())
        .integrate_to_blowup(&[params.k0, params.i0], horizon)
}

/// Log-growth of output fitted over the final quarter of a run.
pub fn fitted_growth(run: &IntegrationResult) -> Result<f64> {
    run.trajectory.tail_log_growth(FIT_TAIL)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN: f64 = 0.618_033_988_749_894_9;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn eigenvalue_examples() {
        let instant = 0.2;
        let fast = asymptotic_growth(2.0 / 3.0, 0.3, 1e6 * instant).unwrap();
        assert!(rel(fast, instant) < 1e-4);
        assert!(rel(asymptotic_growth(2.0 / 3.0, 0.3, f64::INFINITY).unwrap(), instant) < 1e-15);
        assert!((asymptotic_growth(2.0 / 3.0, 0.3, 0.5).unwrap() - 0.1531).abs() < 1e-4);
    }

    #[test]
    fn eigenvalue_solves_characteristic_polynomial() {
        for (a, s, eta) in [(0.5, 0.2, 0.1), (2.0, 0.4, 7.0), (1.0, 0.05, 0.3)] {
            let l = asymptotic_growth(a, s, eta).unwrap();
            let poly = l * l + eta * l - a * s * eta;
            assert!(poly.abs() < 1e-12 * (a * s * eta), "{poly}");
        }
    }

    #[test]
    fn discount_examples() {
        assert!((delay_discount(2.0 / 3.0, 0.3, 0.2).unwrap() - GOLDEN).abs() < 1e-9);
        let quadruple = delay_discount(2.0 / 3.0, 0.3, 0.8).unwrap();
        assert!((quadruple - 2.0 * (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert_eq!(delay_discount(2.0 / 3.0, 0.3, f64::INFINITY).unwrap(), 1.0);
    }

    #[test]
    fn halving_time_examples() {
        assert!((halving_time(2.0 / 3.0).unwrap() * 12.0 - 12.477).abs() < 1e-3);
        assert!((halving_time(std::f64::consts::LN_2).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(halving_time(f64::INFINITY).unwrap(), 0.0);
        assert!(halving_time(0.0).is_err());
    }

    #[test]
    fn simulation_matches_golden_discount() {
        let p = DelayParams::settled(2.0 / 3.0, 0.3, 0.2, 1.0);
        let run = simulate_delay(&p, 30.0).unwrap();
        assert!(rel(fitted_growth(&run).unwrap(), GOLDEN * 0.2) < 0.01);
    }

    #[test]
    fn fast_adjustment_approaches_instant_growth() {
        let p = DelayParams::settled(2.0 / 3.0, 0.3, 200.0, 1.0);
        let run = simulate_delay(&p, 40.0).unwrap();
        assert!(rel(fitted_growth(&run).unwrap(), 0.2) < 0.01);
    }

    #[test]
    fn settled_start_converges_monotonically() {
        let p = DelayParams::settled(1.0, 0.3, 0.4, 1.0);
        let lambda = asymptotic_growth(p.a, p.s, p.eta).unwrap();
        let run = simulate_delay(&p, 30.0).unwrap();
        let k = run.trajectory.state_column("K").unwrap();
        let i = run.trajectory.state_column("I").unwrap();
        let gaps: Vec<f64> = k.iter().zip(&i).map(|(k, i)| i / k - lambda).collect();
        assert!(gaps.iter().all(|g| *g >= -1e-9));
        assert!(gaps.windows(2).all(|w| w[1] <= w[0] + 1e-9));
        assert!(*gaps.last().unwrap() < 1e-6);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(asymptotic_growth(0.0, 0.3, 1.0).is_err());
        assert!(simulate_delay(&DelayParams::settled(1.0, 0.3, f64::INFINITY, 1.0), 10.0).is_err());
        assert!(simulate_delay(&DelayParams::settled(1.0, 1.3, 1.0, 1.0), 10.0).is_err());
    }
}
