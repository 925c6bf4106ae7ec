//! Increasing-returns growth: when every input can be accumulated by
//! reinvesting output, the returns-to-scale condition decides between
//! exponential, sub-exponential and hyperbolic (finite-time) growth.
//!
//! Proportionality constants in the laws of motion are set to one; the
//! exponents that matter are invariant to them.

use crate::error::{ensure_fraction, ensure_positive, Error, Result};
use crate::integrate::{Dynamics, IntegrationResult, OdeProblem, SampleGrid};

/// Tolerance used when classifying a returns sum as exactly one.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

/// Long-run growth regime implied by the returns to accumulable inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthRegime {
    /// Hyperbolic growth diverging in finite time.
    Explosive,
    /// Exponential balanced growth.
    Boundary,
    Subexponential,
}

impl GrowthRegime {
    fn classify(returns_sum: f64) -> Self {
        if (returns_sum - 1.0).abs() <= BOUNDARY_TOLERANCE {
            GrowthRegime::Boundary
        } else if returns_sum > 1.0 {
            GrowthRegime::Explosive
        } else {
            GrowthRegime::Subexponential
        }
    }
}

/// Classifies `lambda / phi + beta` against one.
pub fn returns_condition(lambda: f64, phi: f64, beta: f64) -> Result<GrowthRegime> {
    if !(phi > 0.0) {
        return Err(Error::param("phi", format!("must be positive, got {phi}")));
    }
    Ok(GrowthRegime::classify(lambda / phi + beta))
}

/// Exponent `c = 2 - 1/d` of `dY/dt ~ Y^c` when all factors are accumulable
/// and output is homogeneous of degree `d`.
pub fn hyperbolic_exponent(d: f64) -> Result<f64> {
    ensure_positive("d", d)?;
    Ok(2.0 - 1.0 / d)
}

/// Lower bound `2 - 1/(d * min r_i)` on the growth exponent when factors
/// face diminishing returns in their own accumulation. Tight for Leontief
/// production.
pub fn worst_case_exponent(returns: &[f64], d: f64) -> Result<f64> {
    ensure_positive("d", d)?;
    if returns.is_empty() {
        return Err(Error::param("returns", "need at least one factor"));
    }
    for r in returns {
        ensure_positive("returns", *r)?;
    }
    let r_min = returns.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(2.0 - 1.0 / (d * r_min))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdeaGrowth {
    /// Exponent `e` in `(1/Y) dY/dt >~ Y^e`.
    pub exponent: f64,
    pub regime: GrowthRegime,
}

/// Growth exponent `(r + d - 1) / (1/phi + d)` when TFP multiplies a
/// degree-`d` factor aggregate and ideas have returns `r = lambda / phi`.
///
/// The denominator is always positive, so the sign (and the regime) is set
/// by `r + d - 1`.
pub fn idea_growth_exponent(r: f64, d: f64, phi: f64) -> Result<IdeaGrowth> {
    ensure_positive("r", r)?;
    ensure_positive("d", d)?;
    ensure_positive("phi", phi)?;
    let sum = r + d;
    let regime = GrowthRegime::classify(sum);
    let exponent = if regime == GrowthRegime::Boundary {
        0.0
    } else {
        (sum - 1.0) / (phi.recip() + d)
    };
    Ok(IdeaGrowth { exponent, regime })
}

/// TFP-and-capital economy `Y = A K^beta` with a fixed share of output
/// invested in each stock.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemiEndogParams {
    pub beta: f64,
    pub phi: f64,
    pub lambda: f64,
    /// Share of output invested in ideas.
    pub saving_share_ideas: f64,
    /// Share of output invested in capital.
    pub saving_share_factors: f64,
    pub a0: f64,
    pub k0: f64,
}

impl SemiEndogParams {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("beta", self.beta)?;
        ensure_positive("phi", self.phi)?;
        ensure_positive("lambda", self.lambda)?;
        ensure_fraction("saving_share_ideas", self.saving_share_ideas)?;
        ensure_fraction("saving_share_factors", self.saving_share_factors)?;
        if self.saving_share_ideas + self.saving_share_factors > 1.0 {
            return Err(Error::param(
                "saving_share_factors",
                "investment shares must sum to at most one",
            ));
        }
        ensure_positive("a0", self.a0)?;
        ensure_positive("k0", self.k0)
    }

    pub fn regime(&self) -> Result<GrowthRegime> {
        returns_condition(self.lambda, self.phi, self.beta)
    }

    /// Initial TFP that puts the economy on its exponential path when
    /// `lambda = 1` and the returns condition sits at the boundary:
    /// `A0^phi = alpha_A K0 / ((1 - beta) alpha_f)`.
    pub fn balanced_initial_tfp(&self) -> Result<f64> {
        if !(self.beta < 1.0) {
            return Err(Error::param("beta", "balanced path needs beta < 1"));
        }
        let ratio = self.saving_share_ideas * self.k0
            / ((1.0 - self.beta) * self.saving_share_factors);
        Ok(ratio.powf(1.0 / self.phi))
    }
}

struct TfpCapital(SemiEndogParams);

impl Dynamics for TfpCapital {
    fn dimension(&self) -> usize {
        2
    }

    fn derivative(&self, _t: f64, state: &[f64], out: &mut [f64]) {
        let p = &self.0;
        let (a, k) = (state[0], state[1]);
        let y = a * k.powf(p.beta);
        out[0] = a.powf(1.0 - p.phi) * (p.saving_share_ideas * y).powf(p.lambda);
        out[1] = p.saving_share_factors * y;
    }

    fn output(&self, state: &[f64]) -> f64 {
        state[0] * state[1].powf(self.0.beta)
    }

    fn state_names(&self) -> Vec<String> {
        vec!["A".into(), "K".into()]
    }
}

/// Integrates `dK/dt = alpha_f Y`, `dA/dt = A^(1-phi) (alpha_A Y)^lambda`.
pub fn simulate_tfp_capital(params: &SemiEndogParams, horizon: f64) -> Result<IntegrationResult> {
    simulate_tfp_capital_on(params, horizon, SampleGrid::default())
}

pub fn simulate_tfp_capital_on(
    params: &SemiEndogParams,
    horizon: f64,
    grid: SampleGrid,
) -> Result<IntegrationResult> {
    params.validate()?;
    ensure_positive("horizon", horizon)?;
    OdeProblem::new(TfpCapital(*params))
        .with_grid(grid)
        .integrate_to_blowup(&[params.a0, params.k0], horizon)
}

/// Production technology over accumulable factors, homogeneous of the
/// degree given in [`MultiFactorParams::degree`].
#[derive(Debug, Clone, PartialEq)]
pub enum Technology {
    /// `Y = prod f_i^{a_i}` with `sum a_i = d`.
    CobbDouglas { exponents: Vec<f64> },
    /// `Y = (min_i f_i / h_i)^d` with `h` the initial endowments.
    Leontief,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiFactorParams {
    pub degree: f64,
    pub endowments: Vec<f64>,
    /// Per-factor returns `r_i = lambda_i / phi_i`, with `lambda_i = 1`.
    pub returns: Vec<f64>,
    /// Aggregate saving rate.
    pub alpha: f64,
    pub technology: Technology,
}

impl MultiFactorParams {
    /// Cobb-Douglas with equal exponents `d / n` and linear accumulation.
    pub fn cobb_douglas(degree: f64, endowments: Vec<f64>, alpha: f64) -> Self {
        let n = endowments.len();
        Self {
            degree,
            returns: vec![1.0; n],
            technology: Technology::CobbDouglas {
                exponents: vec![degree / n.max(1) as f64; n],
            },
            endowments,
            alpha,
        }
    }

    pub fn leontief(degree: f64, endowments: Vec<f64>, returns: Vec<f64>, alpha: f64) -> Self {
        Self {
            degree,
            endowments,
            returns,
            alpha,
            technology: Technology::Leontief,
        }
    }

    pub fn with_returns(mut self, returns: Vec<f64>) -> Self {
        self.returns = returns;
        self
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("d", self.degree)?;
        ensure_fraction("alpha", self.alpha)?;
        let n = self.endowments.len();
        if n == 0 {
            return Err(Error::param("endowments", "need at least one factor"));
        }
        for h in &self.endowments {
            ensure_positive("endowments", *h)?;
        }
        if self.returns.len() != n {
            return Err(Error::param("returns", "one return per factor required"));
        }
        for r in &self.returns {
            ensure_positive("returns", *r)?;
        }
        if let Technology::CobbDouglas { exponents } = &self.technology {
            if exponents.len() != n {
                return Err(Error::param("exponents", "one exponent per factor required"));
            }
            let sum: f64 = exponents.iter().sum();
            if (sum - self.degree).abs() > 1e-9 * self.degree.max(1.0) {
                return Err(Error::param(
                    "exponents",
                    format!("must sum to the degree {}, got {sum}", self.degree),
                ));
            }
        }
        Ok(())
    }

    fn production(&self, factors: &[f64]) -> f64 {
        match &self.technology {
            Technology::CobbDouglas { exponents } => factors
                .iter()
                .zip(exponents)
                .map(|(f, a)| f.powf(*a))
                .product(),
            Technology::Leontief => factors
                .iter()
                .zip(&self.endowments)
                .map(|(f, h)| f / h)
                .fold(f64::INFINITY, f64::min)
                .powf(self.degree),
        }
    }
}

struct MultiFactor(MultiFactorParams);

impl Dynamics for MultiFactor {
    fn dimension(&self) -> usize {
        self.0.endowments.len()
    }

    fn derivative(&self, _t: f64, state: &[f64], out: &mut [f64]) {
        let p = &self.0;
        let y = p.production(state);
        // Investment I_k ∝ f_k^{1/r_k} keeps factor ratios fixed.
        let weights: Vec<f64> = state
            .iter()
            .zip(&p.returns)
            .map(|(f, r)| f.powf(r.recip()))
            .collect();
        let total: f64 = weights.iter().sum();
        for k in 0..state.len() {
            let investment = p.alpha * y * weights[k] / total;
            out[k] = state[k].powf(1.0 - p.returns[k].recip()) * investment;
        }
    }

    fn output(&self, state: &[f64]) -> f64 {
        self.0.production(state)
    }

    fn state_names(&self) -> Vec<String> {
        (1..=self.dimension()).map(|i| format!("f{i}")).collect()
    }
}

/// Integrates the accumulable-factor economy under the ratio-preserving
/// saving rule. With unit returns this is `df_k/dt = alpha Y f_k / sum f_j`.
pub fn simulate_multifactor(params: &MultiFactorParams, horizon: f64) -> Result<IntegrationResult> {
    simulate_multifactor_on(params, horizon, SampleGrid::default())
}

pub fn simulate_multifactor_on(
    params: &MultiFactorParams,
    horizon: f64,
    grid: SampleGrid,
) -> Result<IntegrationResult> {
    params.validate()?;
    ensure_positive("horizon", horizon)?;
    let y0 = params.endowments.clone();
    OdeProblem::new(MultiFactor(params.clone()))
        .with_grid(grid)
        .integrate_to_blowup(&y0, horizon)
}

/// Steady-state growth rates under exogenous population growth `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyStateRates {
    pub g_a: f64,
    pub g_k: f64,
    /// Output growth as given by the published composite formula
    /// `alpha g_k + (1 - alpha) g_a`. On a path with constant `Y/K` output
    /// would instead grow at `g_k`.
    pub g_y: f64,
    pub n: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub phi: f64,
}

pub fn steady_state_rates(alpha: f64, gamma: f64, phi: f64, n: f64) -> Result<SteadyStateRates> {
    if !(phi < 1.0) {
        return Err(Error::DiminishingReturnsRequired(phi));
    }
    ensure_fraction("alpha", alpha)?;
    ensure_positive("gamma", gamma)?;
    if !(n >= 0.0 && n.is_finite()) {
        return Err(Error::param("n", "population growth must be non-negative"));
    }
    let one_minus_phi = 1.0 - phi;
    let one_minus_alpha = 1.0 - alpha;
    let idea_ratio = gamma / one_minus_phi;
    let capital_ratio =
        (gamma + one_minus_phi * one_minus_alpha) / (one_minus_phi * one_minus_alpha);
    Ok(SteadyStateRates {
        g_a: idea_ratio * n,
        g_k: capital_ratio * n,
        g_y: n * (alpha * capital_ratio + idea_ratio * one_minus_alpha),
        n,
        alpha,
        gamma,
        phi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::{finite_time_blowup, fit_power_law_exponent};

    #[test]
    fn returns_condition_examples() {
        // lambda / phi = 0.32 with lambda normalized to one
        let phi = 1.0 / 0.32;
        assert_eq!(returns_condition(1.0, phi, 0.69).unwrap(), GrowthRegime::Explosive);
        assert_eq!(returns_condition(1.0, phi, 0.68).unwrap(), GrowthRegime::Boundary);
        assert_eq!(returns_condition(1.0, phi, 0.5).unwrap(), GrowthRegime::Subexponential);
        assert!(returns_condition(1.0, 0.0, 0.5).is_err());
        assert!(returns_condition(1.0, -1.0, 0.5).is_err());
    }

    #[test]
    fn hyperbolic_exponent_examples() {
        assert_eq!(hyperbolic_exponent(1.0).unwrap(), 1.0);
        assert_eq!(hyperbolic_exponent(2.0).unwrap(), 1.5);
        assert_eq!(hyperbolic_exponent(0.5).unwrap(), 0.0);
        assert!(hyperbolic_exponent(0.0).is_err());
    }

    #[test]
    fn worst_case_exponent_examples() {
        assert_eq!(worst_case_exponent(&[1.0, 1.0, 1.0], 1.0).unwrap(), 1.0);
        assert!((worst_case_exponent(&[0.32, 1.0], 2.0).unwrap() - 0.4375).abs() < 1e-12);
        assert_eq!(worst_case_exponent(&[0.5], 2.0).unwrap(), 1.0);
        assert!(worst_case_exponent(&[], 2.0).is_err());
    }

    #[test]
    fn idea_growth_examples() {
        let phi = 1.0 / 0.32;
        let e = idea_growth_exponent(0.32, 1.0, phi).unwrap();
        assert_eq!(e.regime, GrowthRegime::Explosive);
        assert!((e.exponent - 0.32 / 1.32).abs() < 1e-12);

        let e = idea_growth_exponent(0.32, 0.68, phi).unwrap();
        assert_eq!(e.regime, GrowthRegime::Boundary);
        assert_eq!(e.exponent, 0.0);

        let e = idea_growth_exponent(0.32, 0.5, phi).unwrap();
        assert_eq!(e.regime, GrowthRegime::Subexponential);
        assert!(e.exponent < 0.0);

        assert!(idea_growth_exponent(0.0, 1.0, phi).is_err());
        assert!(idea_growth_exponent(0.32, -1.0, phi).is_err());
    }

    #[test]
    fn steady_state_examples() {
        let r = steady_state_rates(0.3, 0.2, 0.8, 0.01).unwrap();
        assert!((r.g_a - 0.01).abs() < 1e-15);
        // 0.3 * 0.34/0.14 + 0.7 = 1.428571...
        assert!((r.g_y / 0.01 - 1.428_571_428_571_428_5).abs() < 1e-12);
        assert_eq!(steady_state_rates(0.3, 0.2, 0.8, 0.0).unwrap().g_y, 0.0);
        assert!(matches!(
            steady_state_rates(0.3, 0.2, 1.0, 0.01),
            Err(Error::DiminishingReturnsRequired(_))
        ));
    }

    #[test]
    fn steady_state_linear_in_n() {
        for n in [0.001, 0.013, 0.02, 0.37] {
            let a = steady_state_rates(0.3, 0.2, 0.8, n).unwrap();
            let b = steady_state_rates(0.3, 0.2, 0.8, 2.0 * n).unwrap();
            assert_eq!(b.g_y, 2.0 * a.g_y);
        }
    }

    #[test]
    fn multifactor_exponent_tracks_degree() {
        for (d, horizon) in [(1.0, 40.0), (1.25, 60.0), (2.0, 12.0)] {
            let params = MultiFactorParams::cobb_douglas(d, vec![1.0, 1.0], 0.2);
            let run = simulate_multifactor(&params, horizon).unwrap();
            let fit = fit_power_law_exponent(&run.trajectory).unwrap();
            let expected = hyperbolic_exponent(d).unwrap();
            assert!((fit.exponent - expected).abs() < 0.05, "d = {d}: {fit:?}");
        }
    }

    #[test]
    fn multifactor_degree_two_blows_up_at_closed_form_time() {
        // Y = f1 f2 with equal endowments: dY/dt = alpha Y^1.5, t* = 2/alpha.
        let params = MultiFactorParams::cobb_douglas(2.0, vec![1.0, 1.0], 0.2);
        let run = simulate_multifactor(&params, 12.0).unwrap();
        assert!(run.blew_up());
        assert!((run.blowup_time.unwrap() - 10.0).abs() < 1e-3);
    }

    #[test]
    fn multifactor_validation() {
        let mut p = MultiFactorParams::cobb_douglas(2.0, vec![1.0, 1.0], 0.2);
        p.technology = Technology::CobbDouglas {
            exponents: vec![1.0, 0.5],
        };
        assert!(p.validate().is_err());
        assert!(MultiFactorParams::cobb_douglas(2.0, vec![], 0.2).validate().is_err());
        assert!(MultiFactorParams::cobb_douglas(2.0, vec![1.0], 1.5).validate().is_err());
    }

    #[test]
    fn simulated_regimes_match_returns_condition() {
        let phi = 1.0 / 0.32;
        for (beta, blows_up) in [(0.5, false), (0.66, false), (0.7, true), (0.8, true), (1.0, true)] {
            let p = SemiEndogParams {
                beta,
                phi,
                lambda: 1.0,
                saving_share_ideas: 0.1,
                saving_share_factors: 0.2,
                a0: 1.0,
                k0: 1.0,
            };
            let run = simulate_tfp_capital_on(&p, 5000.0, SampleGrid::Steps).unwrap();
            assert_eq!(finite_time_blowup(&run).unwrap(), blows_up, "beta = {beta}");
        }
    }
}
