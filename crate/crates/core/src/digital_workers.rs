//! Exogenous-growth economy in which AI workers are bought with output.
//!
//! `Y = A L^alpha K^(1-alpha)`, with a fraction `f` of savings buying AI
//! workers at `c_bar` dollars each and the rest buying capital. Units are
//! years, dollars and workers; `A` carries the compound unit
//! `$^(1-alpha) worker^(-alpha) year^-1` but is stored as a plain number.

use crate::error::{ensure_fraction, ensure_positive, Error, Result};
use crate::integrate::{Dynamics, IntegrationResult, OdeProblem, SampleGrid};

/// Growth rate (per year) taken as the explosive threshold.
pub const EXPLOSIVE_GROWTH_RATE: f64 = 0.3;
/// Hardware price-performance halving time, years.
pub const HARDWARE_HALVING_YEARS: f64 = 2.5;

/// US aggregates used to pin down `A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UsCalibration {
    /// $/year
    pub gdp: f64,
    /// $
    pub capital: f64,
    /// workers
    pub labor: f64,
    pub alpha: f64,
}

impl UsCalibration {
    /// 2019 aggregates with ~180M employed workers.
    pub const EMPLOYED: UsCalibration = UsCalibration {
        gdp: 2e13,
        capital: 7e13,
        labor: 1.8e8,
        alpha: 0.7,
    };

    /// Same aggregates with the 165M labor-force count.
    pub const LABOR_FORCE: UsCalibration = UsCalibration {
        labor: 1.65e8,
        ..Self::EMPLOYED
    };

    pub fn validate(&self) -> Result<()> {
        ensure_positive("gdp", self.gdp)?;
        ensure_positive("capital", self.capital)?;
        ensure_positive("labor", self.labor)?;
        ensure_fraction("alpha", self.alpha)
    }
}

/// Solves `gdp = A labor^alpha capital^(1-alpha)` for `A`.
pub fn calibrate_a(cal: &UsCalibration) -> Result<f64> {
    cal.validate()?;
    Ok(cal.gdp / (cal.labor.powf(cal.alpha) * cal.capital.powf(1.0 - cal.alpha)))
}

/// Investment split into AI that maximizes long-run growth.
pub fn balanced_f(alpha: f64) -> Result<f64> {
    ensure_fraction("alpha", alpha)?;
    Ok(alpha)
}

/// `B_alpha = alpha^2 ((1-alpha)/alpha)^(1-alpha) + (1-alpha)^2 (alpha/(1-alpha))^alpha`.
pub fn b_alpha(alpha: f64) -> Result<f64> {
    ensure_fraction("alpha", alpha)?;
    let beta = 1.0 - alpha;
    Ok(alpha * alpha * (beta / alpha).powf(beta) + beta * beta * (alpha / beta).powf(alpha))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DigitalEconomyParams {
    pub a: f64,
    pub alpha: f64,
    /// Saving rate.
    pub s: f64,
    /// Fraction of investment spent on AI workers.
    pub f: f64,
    /// Dollars per AI worker.
    pub c_bar: f64,
    pub delta_l: f64,
    pub delta_k: f64,
    pub l0: f64,
    pub k0: f64,
}

impl DigitalEconomyParams {
    /// Calibrated US economy with the given saving rate and worker cost,
    /// balanced investment split and no depreciation.
    pub fn calibrated(cal: &UsCalibration, s: f64, c_bar: f64) -> Result<Self> {
        let params = Self {
            a: calibrate_a(cal)?,
            alpha: cal.alpha,
            s,
            f: balanced_f(cal.alpha)?,
            c_bar,
            delta_l: 0.0,
            delta_k: 0.0,
            l0: cal.labor,
            k0: cal.capital,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("a", self.a)?;
        ensure_fraction("alpha", self.alpha)?;
        if !(0.0..=1.0).contains(&self.s) {
            return Err(Error::param("s", "saving rate must lie in [0, 1]"));
        }
        ensure_fraction("f", self.f)?;
        ensure_positive("c_bar", self.c_bar)?;
        ensure_positive("l0", self.l0)?;
        ensure_positive("k0", self.k0)?;
        for (name, d) in [("delta_l", self.delta_l), ("delta_k", self.delta_k)] {
            if !(d >= 0.0 && d.is_finite()) {
                return Err(Error::param(name, "depreciation must be non-negative"));
            }
        }
        Ok(())
    }

    pub fn output(&self, l: f64, k: f64) -> f64 {
        self.a * l.powf(self.alpha) * k.powf(1.0 - self.alpha)
    }

    /// `L/K` on the balanced path: `f / ((1 - f) c_bar)`.
    pub fn balanced_labor_capital_ratio(&self) -> f64 {
        self.f / ((1.0 - self.f) * self.c_bar)
    }
}

/// Long-run growth `A s c_bar^-alpha B_alpha - alpha delta_L - (1-alpha) delta_K`.
///
/// Requires the growth-maximizing split `f = alpha`.
pub fn steady_state_growth(params: &DigitalEconomyParams) -> Result<f64> {
    params.validate()?;
    if (params.f - balanced_f(params.alpha)?).abs() > 1e-12 {
        return Err(Error::param(
            "f",
            format!("steady-state formula needs f = alpha = {}, got {}", params.alpha, params.f),
        ));
    }
    Ok(params.a * params.s * params.c_bar.powf(-params.alpha) * b_alpha(params.alpha)?
        - params.alpha * params.delta_l
        - (1.0 - params.alpha) * params.delta_k)
}

fn check_threshold_inputs(a: f64, alpha: f64, target_g: f64) -> Result<()> {
    ensure_positive("a", a)?;
    ensure_fraction("alpha", alpha)?;
    ensure_positive("target_g", target_g)
}

/// Highest worker cost compatible with growth `target_g` when depreciation
/// is negligible: `c_bar = (A s B_alpha / target_g)^(1/alpha)`.
pub fn explosive_cost_threshold(s: f64, a: f64, alpha: f64, target_g: f64) -> Result<f64> {
    cost_threshold_with_depreciation(s, a, alpha, target_g, 0.0, 0.0)
}

/// As [`explosive_cost_threshold`], with depreciation added back to the
/// growth target.
pub fn cost_threshold_with_depreciation(
    s: f64,
    a: f64,
    alpha: f64,
    target_g: f64,
    delta_l: f64,
    delta_k: f64,
) -> Result<f64> {
    ensure_positive("s", s)?;
    check_threshold_inputs(a, alpha, target_g)?;
    let gross = target_g + alpha * delta_l + (1.0 - alpha) * delta_k;
    Ok((a * s * b_alpha(alpha)? / gross).powf(alpha.recip()))
}

/// Lowest saving rate giving growth `target_g` at worker cost `c_bar`
/// (negligible depreciation).
pub fn min_saving_rate(c_bar: f64, a: f64, alpha: f64, target_g: f64) -> Result<f64> {
    ensure_positive("c_bar", c_bar)?;
    check_threshold_inputs(a, alpha, target_g)?;
    Ok(target_g * c_bar.powf(alpha) / (a * b_alpha(alpha)?))
}

/// Runtime cost of one human-equivalent AI: brain compute rate (FLOP/year)
/// divided by hardware price-performance (FLOP per dollar-year).
pub fn worker_cost_from_hardware(price_performance: f64, brain_rate: f64) -> Result<f64> {
    ensure_positive("price_performance", price_performance)?;
    ensure_positive("brain_rate", brain_rate)?;
    Ok(brain_rate / price_performance)
}

/// Worker cost after `horizon` years of price-performance halvings.
pub fn project_hardware_cost(c0: f64, halving_years: f64, horizon: f64) -> Result<f64> {
    ensure_positive("c0", c0)?;
    ensure_positive("halving_years", halving_years)?;
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(Error::param("horizon", "must be non-negative"));
    }
    Ok(c0 * (-horizon / halving_years).exp2())
}

/// Price-performance after `horizon` years of improvement.
pub fn project_price_performance(p0: f64, halving_years: f64, horizon: f64) -> Result<f64> {
    ensure_positive("p0", p0)?;
    ensure_positive("halving_years", halving_years)?;
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(Error::param("horizon", "must be non-negative"));
    }
    Ok(p0 * (horizon / halving_years).exp2())
}

struct DigitalEconomy(DigitalEconomyParams);

impl Dynamics for DigitalEconomy {
    fn dimension(&self) -> usize {
        2
    }

    fn derivative(&self, _t: f64, state: &[f64], out: &mut [f64]) {
        let p = &self.0;
        let (l, k) = (state[0], state[1]);
        let y = p.output(l, k);
        out[0] = p.s * p.f * y / p.c_bar - p.delta_l * l;
        out[1] = p.s * (1.0 - p.f) * y - p.delta_k * k;
    }

    fn output(&self, state: &[f64]) -> f64 {
        self.0.output(state[0], state[1])
    }

    fn state_names(&self) -> Vec<String> {
        vec!["L".into(), "K".into()]
    }
}

/// Integrates `dL/dt = s f Y / c_bar - delta_L L`,
/// `dK/dt = s (1-f) Y - delta_K K`.
pub fn simulate(params: &DigitalEconomyParams, horizon: f64) -> Result<IntegrationResult> {
    simulate_on(params, horizon, SampleGrid::default())
}

pub fn simulate_on(
    params: &DigitalEconomyParams,
    horizon: f64,
    grid: SampleGrid,
) -> Result<IntegrationResult> {
    params.validate()?;
    ensure_positive("horizon", horizon)?;
    OdeProblem::new(DigitalEconomy(*params))
        .with_grid(grid)
        .integrate_to_blowup(&[params.l0, params.k0], horizon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::{detect_explosive, EXPLOSIVE_THRESHOLD};

    const PUBLISHED_A: f64 = 2337.0;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn calibration_examples() {
        let a = calibrate_a(&UsCalibration::EMPLOYED).unwrap();
        assert!(rel(a, PUBLISHED_A) < 0.01, "A = {a}");
        let doubled = UsCalibration {
            gdp: 4e13,
            ..UsCalibration::EMPLOYED
        };
        assert!(rel(calibrate_a(&doubled).unwrap(), 2.0 * a) < 1e-12);
        let unit = UsCalibration {
            gdp: 123.0,
            capital: 1.0,
            labor: 1.0,
            alpha: 0.4,
        };
        assert_eq!(calibrate_a(&unit).unwrap(), 123.0);
    }

    #[test]
    fn balanced_f_is_alpha() {
        for alpha in [0.7, 0.5, 0.3] {
            assert_eq!(balanced_f(alpha).unwrap(), alpha);
        }
        assert!(balanced_f(1.0).is_err());
    }

    #[test]
    fn b_alpha_matches_closed_form() {
        // equivalent form alpha^alpha (1-alpha)^(1-alpha)
        for alpha in [0.2f64, 0.5, 0.7, 0.9] {
            let direct = alpha.powf(alpha) * (1.0 - alpha).powf(1.0 - alpha);
            assert!(rel(b_alpha(alpha).unwrap(), direct) < 1e-12);
        }
        assert!(rel(b_alpha(0.7).unwrap(), 0.54) < 0.01);
    }

    fn published(s: f64, c_bar: f64) -> DigitalEconomyParams {
        DigitalEconomyParams {
            a: PUBLISHED_A,
            alpha: 0.7,
            s,
            f: 0.7,
            c_bar,
            delta_l: 0.0,
            delta_k: 0.0,
            l0: 1.8e8,
            k0: 7e13,
        }
    }

    #[test]
    fn steady_state_growth_examples() {
        let g = steady_state_growth(&published(0.2, 1.5e4)).unwrap();
        assert!(rel(g, 0.30) < 0.02, "g = {g}");
        assert_eq!(steady_state_growth(&published(0.0, 1.5e4)).unwrap(), 0.0);
        let mut unbalanced = published(0.2, 1.5e4);
        unbalanced.f = 0.5;
        assert!(steady_state_growth(&unbalanced).is_err());
    }

    #[test]
    fn threshold_examples() {
        let at_full_saving = explosive_cost_threshold(1.0, PUBLISHED_A, 0.7, 0.3).unwrap();
        assert!(rel(at_full_saving, 1.5e5) < 0.02);
        let at_fifth = explosive_cost_threshold(0.2, PUBLISHED_A, 0.7, 0.3).unwrap();
        assert!(rel(at_fifth, 0.2f64.powf(10.0 / 7.0) * 1.5e5) < 0.02);
        let doubled_target = explosive_cost_threshold(1.0, PUBLISHED_A, 0.7, 0.6).unwrap();
        assert!(rel(at_full_saving / doubled_target, 2f64.powf(1.0 / 0.7)) < 1e-12);
    }

    #[test]
    fn min_saving_examples() {
        assert!(rel(min_saving_rate(1.5e4, PUBLISHED_A, 0.7, 0.3).unwrap(), 0.20) < 0.01);
        assert!(rel(min_saving_rate(1.5e5, PUBLISHED_A, 0.7, 0.3).unwrap(), 1.0) < 0.01);
        assert!(min_saving_rate(1e-9, PUBLISHED_A, 0.7, 0.3).unwrap() < 1e-6);
    }

    #[test]
    fn inversion_round_trip() {
        let s = min_saving_rate(4e4, PUBLISHED_A, 0.7, 0.3).unwrap();
        let g = steady_state_growth(&published(s, 4e4)).unwrap();
        assert!((g - 0.3).abs() < 1e-6);
    }

    #[test]
    fn depreciation_raises_the_bar() {
        let plain = explosive_cost_threshold(0.4, PUBLISHED_A, 0.7, 0.3).unwrap();
        let worn = cost_threshold_with_depreciation(0.4, PUBLISHED_A, 0.7, 0.3, 0.3, 0.3).unwrap();
        assert!(worn < plain);
        let mut p = published(0.4, worn);
        p.delta_l = 0.3;
        p.delta_k = 0.3;
        assert!((steady_state_growth(&p).unwrap() - 0.3).abs() < 1e-9);
    }

    #[test]
    fn hardware_examples() {
        assert_eq!(worker_cost_from_hardware(2e18, 3e22).unwrap(), 1.5e4);
        let high_end = worker_cost_from_hardware(2e18, 3.15e23).unwrap();
        assert!(rel(high_end, 1.575e5) < 1e-12);
        assert_eq!(
            worker_cost_from_hardware(4e18, 3e22).unwrap(),
            0.5 * worker_cost_from_hardware(2e18, 3e22).unwrap()
        );
        assert!(rel(project_hardware_cost(1.5e4, 2.5, 25.0).unwrap(), 14.6484375) < 1e-12);
        assert_eq!(project_hardware_cost(1.5e4, 2.5, 0.0).unwrap(), 1.5e4);
        assert_eq!(project_hardware_cost(1.5e4, 2.5, 2.5).unwrap(), 7.5e3);
    }

    #[test]
    fn growth_monotone_in_cost_and_saving() {
        let g = |s, c| steady_state_growth(&published(s, c)).unwrap();
        assert!(g(0.2, 1e4) > g(0.2, 2e4));
        assert!(g(0.3, 1e4) > g(0.2, 1e4));
    }

    #[test]
    fn projection_commutes_with_price_performance() {
        let via_cost = project_hardware_cost(worker_cost_from_hardware(2e18, 3e22).unwrap(), 2.5, 7.0);
        let via_pp = worker_cost_from_hardware(project_price_performance(2e18, 2.5, 7.0).unwrap(), 3e22);
        assert!(rel(via_cost.unwrap(), via_pp.unwrap()) < 1e-12);
    }

    fn last_decade_growth(run: &IntegrationResult) -> f64 {
        let end = run.trajectory.last_time().unwrap();
        run.trajectory.log_growth_rate(end - 10.0, end).unwrap()
    }

    #[test]
    fn simulation_converges_to_closed_form() {
        let p = published(0.2, 1.5e4);
        let run = simulate(&p, 50.0).unwrap();
        let g = steady_state_growth(&p).unwrap();
        assert!((last_decade_growth(&run) - g).abs() < 0.01);
        let l = run.trajectory.state_column("L").unwrap();
        let k = run.trajectory.state_column("K").unwrap();
        let ratio = l.last().unwrap() / k.last().unwrap();
        assert!(rel(ratio, p.balanced_labor_capital_ratio()) < 0.01, "{ratio}");
    }

    #[test]
    fn doubled_saving_offsets_heavy_depreciation() {
        let mut p = published(0.4, 1.5e4);
        p.delta_l = 0.3;
        p.delta_k = 0.3;
        let run = simulate(&p, 50.0).unwrap();
        assert!(detect_explosive(&run.trajectory, EXPLOSIVE_THRESHOLD).unwrap().explosive);
    }

    #[test]
    fn low_saving_expensive_workers_are_not_explosive() {
        let p = published(0.01, 1.5e5);
        assert!(steady_state_growth(&p).unwrap() < 0.01);
        let run = simulate(&p, 50.0).unwrap();
        assert!(!detect_explosive(&run.trajectory, EXPLOSIVE_THRESHOLD).unwrap().explosive);
    }
}
