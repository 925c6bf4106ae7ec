//! Published reference values checked by the reproduce targets and the
//! acceptance suite. Tolerances live next to the values they apply to.

/// A published number and how closely a computed value must match it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: Tolerance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    Relative(f64),
    Absolute(f64),
    /// Within `relative`, or equal once the computed value is rounded to
    /// the printed number of significant figures.
    Printed { figures: u32, relative: f64 },
}

impl Tolerance {
    pub fn accepts(self, computed: f64, published: f64) -> bool {
        match self {
            Tolerance::Relative(r) => ((computed - published) / published).abs() <= r,
            Tolerance::Absolute(a) => (computed - published).abs() <= a,
            Tolerance::Printed { figures, relative } => {
                let rounded = round_significant(computed, figures);
                ((computed - published) / published).abs() <= relative
                    || ((rounded - published) / published).abs() <= 1e-12
            }
        }
    }

    pub fn describe(self) -> String {
        match self {
            Tolerance::Relative(r) => format!("rel {r}"),
            Tolerance::Absolute(a) => format!("abs {a}"),
            Tolerance::Printed { figures, relative } => {
                format!("rel {relative} or {figures} sig figs")
            }
        }
    }
}

pub fn round_significant(x: f64, figures: u32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(figures as i32 - 1 - magnitude);
    (x * scale).round() / scale
}

const fn rel(name: &'static str, value: f64, r: f64) -> Reference {
    Reference {
        name,
        value,
        tolerance: Tolerance::Relative(r),
    }
}

const fn abs(name: &'static str, value: f64, a: f64) -> Reference {
    Reference {
        name,
        value,
        tolerance: Tolerance::Absolute(a),
    }
}

/// Scale-up grid: `(f, rho, printed multiplier)`, printed to two
/// significant figures except the exact small integers.
pub const SCALE_UP: [(f64, f64, f64); 9] = [
    (0.05, -0.2, 6.4e7),
    (0.10, -0.2, 1e6),
    (0.25, -0.2, 4.1e3),
    (0.05, -0.4, 3.6e4),
    (0.10, -0.4, 3.2e3),
    (0.25, -0.4, 128.0),
    (0.05, -2.0, 89.0),
    (0.10, -2.0, 32.0),
    (0.25, -2.0, 8.0),
];
pub const SCALE_UP_TOLERANCE: Tolerance = Tolerance::Printed {
    figures: 2,
    relative: 0.01,
};

/// Ten percent of tasks unautomated with `rho = -1`.
pub const HEADLINE_LEVEL_EFFECT: Reference = rel("level effect f=0.1 rho=-1", 100.0, 1e-12);

/// US aggregates, 2019: GDP $/year, capital $, employed workers.
pub const US_GDP: f64 = 2e13;
pub const US_CAPITAL: f64 = 7e13;
pub const US_EMPLOYED: f64 = 1.8e8;
/// Labor-force count listed alongside the other calibration inputs.
pub const US_LABOR_FORCE: f64 = 1.65e8;
pub const LABOR_ELASTICITY: f64 = 0.7;

pub const CALIBRATED_A: Reference = rel("A", 2337.0, 0.01);
pub const B_ALPHA: Reference = rel("B_alpha(0.7)", 0.54, 0.01);
pub const GROWTH_COEFFICIENT: Reference = rel("A * B_alpha", 1262.0, 0.01);
pub const COST_THRESHOLD_FULL_SAVING: Reference = rel("c_bar max at s=1", 1.5e5, 0.02);
pub const MIN_SAVING_RATE: Reference = rel("s min at c_bar=1.5e4", 0.20, 0.01);
pub const WORKER_COST: Reference = rel("c_bar from hardware", 1.5e4, 1e-12);
/// Hardware price-performance, FLOP per dollar-year.
pub const PRICE_PERFORMANCE: f64 = 2e18;
/// Brain-equivalent compute, FLOP per year.
pub const BRAIN_RATE: f64 = 3e22;
pub const THRESHOLD_COST: f64 = 1.5e4;
pub const THRESHOLD_SAVING: f64 = 0.2;
/// Final-decade growth at the threshold parameters, per year.
pub const THRESHOLD_GROWTH: Reference = abs("final-decade growth", 0.30, 0.01);

/// Steady-state output growth per unit population growth with
/// `alpha = 0.3`, `gamma = 0.2`, `phi = 0.8`; printed as roughly 1.5.
pub const STEADY_STATE_ALPHA: f64 = 0.3;
pub const STEADY_STATE_GAMMA: f64 = 0.2;
pub const STEADY_STATE_PHI: f64 = 0.8;
pub const STEADY_STATE_PRINTED_RATIO: f64 = 1.5;
pub const STEADY_STATE_RATIO: Reference = abs("g_y / n", 1.4286, 5e-5);
pub const IDEA_GROWTH_RATIO: Reference = abs("g_a / n", 1.0, 1e-12);

/// Delayed over instant growth when `eta = A s`.
pub const GOLDEN_DISCOUNT: Reference = abs("delay discount at eta = As", 0.618_033_988_749_894_9, 1e-9);
pub const DELAY_A: f64 = 2.0 / 3.0;
pub const DELAY_S: f64 = 0.3;
pub const DELAY_FIT: Tolerance = Tolerance::Relative(0.01);

pub const LAPLACE: Reference = abs("Laplace rule (1.5, 1)", 0.4, 1e-12);
/// Solar flux at Earth and current consumption, W.
pub const SOLAR_FLUX: f64 = 4.4e16;
pub const ENERGY_USE: f64 = 4e13;
pub const ENERGY_HEADROOM: Reference = abs("energy headroom OOM", 3.04, 0.01);
/// Built-up and habitable land, km^2.
pub const BUILT_LAND: f64 = 1.5e6;
pub const HABITABLE_LAND: f64 = 1e8;
/// FLOP/year per simulated worker and a planetary compute budget.
pub const WORKER_COMPUTE: f64 = 1e23;
pub const COMPUTE_BUDGET: f64 = 1e40;
pub const VIRTUAL_WORKERS: Reference = Reference {
    name: "virtual workers",
    value: 1e17,
    tolerance: Tolerance::Printed {
        figures: 1,
        relative: 0.0,
    },
};

/// Schedule exhibit: full-automation multiplier over an 80-year transition.
pub const SCHEDULE_MULTIPLIER: f64 = 100.0;
pub const SCHEDULE_YEARS: f64 = 80.0;
pub const SCHEDULE_RHOS: [f64; 4] = [-5.0, -2.0, -1.0, -0.5];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_rounding() {
        assert_eq!(round_significant(3162.28, 2), 3200.0);
        assert_eq!(round_significant(31.6228, 2), 32.0);
        assert_eq!(round_significant(0.012345, 3), 0.0123);
        assert!(SCALE_UP_TOLERANCE.accepts(35777.1, 3.6e4));
        assert!(SCALE_UP_TOLERANCE.accepts(3162.28, 3.2e3));
        assert!(SCALE_UP_TOLERANCE.accepts(128.0, 128.0));
        assert!(!SCALE_UP_TOLERANCE.accepts(35000.0, 3.6e4));
    }
}
