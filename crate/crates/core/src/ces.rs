//! CES aggregation over a discretized unit continuum of tasks.
//!
//! `Y = A (mean_i I_i^rho)^(1/rho)`. With `rho < 0` tasks are complements,
//! so the least-supplied tasks bound output.

use std::io::Write;

use crate::error::{ensure_positive, Error, Result};
use crate::trajectory::Trajectory;

/// Riemann cells used for the unit continuum unless overridden.
pub const DEFAULT_TASKS: usize = 1000;
/// Samples emitted by [`automation_schedule`].
pub const SCHEDULE_POINTS: usize = 801;

/// Unautomated fractions of the published scale-up grid.
pub const SCALE_UP_FRACTIONS: [f64; 3] = [0.05, 0.10, 0.25];
/// Substitution parameters of the published scale-up grid.
pub const SCALE_UP_RHOS: [f64; 3] = [-0.2, -0.4, -2.0];

/// `rho = (sigma - 1) / sigma`. `sigma = 1` gives the Cobb-Douglas limit
/// `rho = 0`, which the CES evaluators reject.
pub fn rho_from_sigma(sigma: f64) -> Result<f64> {
    ensure_positive("sigma", sigma)?;
    Ok((sigma - 1.0) / sigma)
}

pub fn sigma_from_rho(rho: f64) -> Result<f64> {
    if !(rho < 1.0) {
        return Err(Error::param("rho", "must be below 1"));
    }
    Ok(1.0 / (1.0 - rho))
}

fn check_rho(rho: f64) -> Result<()> {
    if rho == 0.0 || !(rho < 1.0) || !rho.is_finite() {
        return Err(Error::param("rho", format!("must lie in (-inf, 1) without 0, got {rho}")));
    }
    Ok(())
}

fn require_complements(rho: f64) -> Result<()> {
    if rho < 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::ComplementsRequired(rho))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CesOutput {
    pub value: f64,
    /// Some task received zero input while tasks are complements.
    pub bottlenecked: bool,
}

/// `A (mean_i I_i^rho)^(1/rho)`. Infinite inputs are allowed and drop out
/// of the aggregate when `rho < 0`.
pub fn ces_output(allocation: &[f64], rho: f64, a: f64) -> Result<CesOutput> {
    check_rho(rho)?;
    ensure_positive("a", a)?;
    if allocation.is_empty() {
        return Err(Error::InsufficientData("empty allocation".into()));
    }
    if allocation.iter().any(|x| x.is_nan() || *x < 0.0) {
        return Err(Error::param("allocation", "inputs must be non-negative"));
    }
    if rho < 0.0 && allocation.contains(&0.0) {
        return Ok(CesOutput {
            value: 0.0,
            bottlenecked: true,
        });
    }
    let mean = allocation.iter().map(|x| x.powf(rho)).sum::<f64>() / allocation.len() as f64;
    Ok(CesOutput {
        value: a * mean.powf(1.0 / rho),
        bottlenecked: false,
    })
}

/// Input multiple on automated tasks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boost {
    Finite(f64),
    Unbounded,
}

impl Boost {
    fn multiple(self) -> f64 {
        match self {
            Boost::Finite(m) => m,
            Boost::Unbounded => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskEconomy {
    pub rho: f64,
    pub n_tasks: usize,
    /// Total human-allocatable input.
    pub input_stock: f64,
    /// Fraction of tasks that stay unautomated.
    pub unautomated_fraction: f64,
    pub boost: Boost,
    pub productivity: f64,
}

impl TaskEconomy {
    pub fn new(rho: f64, unautomated_fraction: f64) -> Self {
        Self {
            rho,
            n_tasks: DEFAULT_TASKS,
            input_stock: 1.0,
            unautomated_fraction,
            boost: Boost::Unbounded,
            productivity: 1.0,
        }
    }

    pub fn with_tasks(mut self, n_tasks: usize) -> Self {
        self.n_tasks = n_tasks;
        self
    }

    pub fn with_boost(mut self, boost: Boost) -> Self {
        self.boost = boost;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_rho(self.rho)?;
        if self.n_tasks < 2 {
            return Err(Error::param("n_tasks", "need at least 2 tasks"));
        }
        let f = self.unautomated_fraction;
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::param("unautomated_fraction", "must lie in (0, 1]"));
        }
        if self.unautomated_tasks() == 0 {
            return Err(Error::param(
                "unautomated_fraction",
                "rounds to zero tasks; increase n_tasks",
            ));
        }
        ensure_positive("input_stock", self.input_stock)?;
        ensure_positive("productivity", self.productivity)?;
        if let Boost::Finite(m) = self.boost {
            if !(m >= 1.0 && m.is_finite()) {
                return Err(Error::param("boost", "finite boost must be at least 1"));
            }
        }
        Ok(())
    }

    /// Unautomated task count after rounding `f * n_tasks`.
    pub fn unautomated_tasks(&self) -> usize {
        (self.unautomated_fraction * self.n_tasks as f64).round() as usize
    }

    /// Output with every task at the baseline input.
    pub fn baseline_output(&self) -> Result<f64> {
        self.validate()?;
        Ok(self.productivity * self.input_stock)
    }

    pub fn output(&self, allocation: &[f64]) -> Result<CesOutput> {
        ces_output(allocation, self.rho, self.productivity)
    }
}

/// Optimal inputs: the human stock spreads evenly over unautomated tasks
/// (`I / f` each) and automated tasks get `m I`. Automated tasks come
/// last. With `f = 1` every task gets `I`.
pub fn optimal_allocation(economy: &TaskEconomy) -> Result<Vec<f64>> {
    economy.validate()?;
    require_complements(economy.rho)?;
    let n = economy.n_tasks;
    let human = economy.unautomated_tasks().min(n);
    let per_human = economy.input_stock * n as f64 / human as f64;
    let automated = economy.input_stock * economy.boost.multiple();
    Ok((0..n)
        .map(|i| if i < human { per_human } else { automated })
        .collect())
}

fn check_fraction_closed(name: &str, f: f64) -> Result<()> {
    if (0.0..=1.0).contains(&f) {
        Ok(())
    } else {
        Err(Error::param(name, "must lie in [0, 1]"))
    }
}

/// Output multiplier `f^((1-rho)/rho)` from automating the other `1 - f` of
/// tasks at unbounded input.
pub fn level_effect(f: f64, rho: f64) -> Result<f64> {
    require_complements(rho)?;
    if !(f > 0.0 && f <= 1.0) {
        return Err(Error::param("f", "must lie in (0, 1]"));
    }
    Ok(f.recip().powf((rho - 1.0) / rho))
}

/// Output multiplier `((1-f) m^rho + f^(1-rho))^(1/rho)` when automated
/// tasks receive `m` times baseline input, capped at `m`.
pub fn finite_boost_level_effect(f: f64, rho: f64, m: f64) -> Result<f64> {
    require_complements(rho)?;
    check_fraction_closed("f", f)?;
    if !(m >= 1.0) {
        return Err(Error::param("m", "boost must be at least 1"));
    }
    if f == 0.0 {
        return Ok(m);
    }
    if m.is_infinite() {
        return level_effect(f, rho);
    }
    let ratio = ((1.0 - f) * m.powf(rho) + f.powf(1.0 - rho)).powf(rho.recip());
    Ok(ratio.min(m))
}

/// Output ratio `Y(t) / Y(0)` while the automated fraction rises as
/// `rate * t`, reaching `m` at full automation.
pub fn automation_schedule(rho: f64, m: f64, horizon: f64, rate: f64) -> Result<Trajectory> {
    require_complements(rho)?;
    if !(m > 1.0 && m.is_finite()) {
        return Err(Error::param("m", "full-automation multiplier must exceed 1"));
    }
    ensure_positive("horizon", horizon)?;
    ensure_positive("rate", rate)?;
    if rate * horizon > 1.0 + 1e-12 {
        return Err(Error::param("rate", "rate * horizon must not exceed 1"));
    }
    let last = SCHEDULE_POINTS - 1;
    let mut samples = Vec::with_capacity(SCHEDULE_POINTS);
    for i in 0..=last {
        let t = horizon * i as f64 / last as f64;
        let automated = (rate * t).min(1.0);
        samples.push((t, finite_boost_level_effect(1.0 - automated, rho, m)?));
    }
    Trajectory::from_pairs(samples)
}

/// Share of total log-growth realized in the final `tail_fraction` of the
/// time span.
pub fn back_loaded_share(traj: &Trajectory, tail_fraction: f64) -> Result<f64> {
    if !(tail_fraction > 0.0 && tail_fraction < 1.0) {
        return Err(Error::param("tail_fraction", "must lie in (0, 1)"));
    }
    let (t0, t1) = match (traj.first_time(), traj.last_time()) {
        (Some(a), Some(b)) if b > a => (a, b),
        _ => return Err(Error::InsufficientData("need a non-degenerate time span".into())),
    };
    let total = traj.log_growth_rate(t0, t1)? * (t1 - t0);
    if total == 0.0 {
        return Err(Error::InvalidTrajectory("no net growth".into()));
    }
    let cut = t1 - tail_fraction * (t1 - t0);
    Ok(traj.log_growth_rate(cut, t1)? * (t1 - cut) / total)
}

/// Consumption of each task along a time grid, valued with CES utility.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityPath {
    pub rho: f64,
    pub times: Vec<f64>,
    /// `consumption[k][i]` is task `i` at `times[k]`.
    pub consumption: Vec<Vec<f64>>,
}

impl UtilityPath {
    pub fn new(rho: f64, times: Vec<f64>, consumption: Vec<Vec<f64>>) -> Result<Self> {
        check_rho(rho)?;
        if times.len() < 2 || times.len() != consumption.len() {
            return Err(Error::InvalidTrajectory(
                "need at least two times with one consumption row each".into(),
            ));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidTrajectory("times must increase".into()));
        }
        let width = consumption[0].len();
        if width == 0 || consumption.iter().any(|row| row.len() != width) {
            return Err(Error::InvalidTrajectory("ragged consumption rows".into()));
        }
        if consumption.iter().flatten().any(|c| !(*c > 0.0 && c.is_finite())) {
            return Err(Error::InvalidTrajectory("consumption must be positive".into()));
        }
        Ok(Self {
            rho,
            times,
            consumption,
        })
    }

    /// Samples `c(t)` on `steps + 1` evenly spaced times over `[0, horizon]`.
    pub fn sample(
        rho: f64,
        horizon: f64,
        steps: usize,
        consumption: impl Fn(f64) -> Vec<f64>,
    ) -> Result<Self> {
        ensure_positive("horizon", horizon)?;
        if steps == 0 {
            return Err(Error::param("steps", "need at least one step"));
        }
        let times: Vec<f64> = (0..=steps)
            .map(|k| horizon * k as f64 / steps as f64)
            .collect();
        let rows = times.iter().map(|&t| consumption(t)).collect();
        Self::new(rho, times, rows)
    }

    pub fn utility(&self, k: usize) -> f64 {
        let row = &self.consumption[k];
        let mean = row.iter().map(|c| c.powf(self.rho)).sum::<f64>() / row.len() as f64;
        mean.powf(self.rho.recip())
    }

    /// Marginal utilities `c_i^(rho-1) U^(1-rho)`, used as prices.
    pub fn prices(&self, k: usize) -> Vec<f64> {
        let u = self.utility(k).powf(1.0 - self.rho);
        self.consumption[k]
            .iter()
            .map(|c| c.powf(self.rho - 1.0) * u)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    /// Largest `|g_Y - g_U| / |g_U|` over steps.
    pub max_deviation: f64,
    /// Chained price-weighted quantity index, end over start.
    pub divisia_ratio: f64,
    pub utility_ratio: f64,
}

/// Compares price-weighted GDP growth `sum p_i dc_i / sum p_i c_i` with
/// utility growth `dU / U`, step by step, using start-of-step prices.
pub fn utility_gdp_identity_check(path: &UtilityPath) -> Result<IdentityReport> {
    let mut max_deviation = 0.0f64;
    let mut divisia = 1.0;
    for k in 0..path.times.len() - 1 {
        let prices = path.prices(k);
        let (now, next) = (&path.consumption[k], &path.consumption[k + 1]);
        let value: f64 = prices.iter().zip(now).map(|(p, c)| p * c).sum();
        let change: f64 = prices
            .iter()
            .zip(now.iter().zip(next))
            .map(|(p, (c0, c1))| p * (c1 - c0))
            .sum();
        let g_y = change / value;
        let g_u = path.utility(k + 1) / path.utility(k) - 1.0;
        divisia *= 1.0 + g_y;
        let deviation = if g_u == 0.0 {
            if g_y == 0.0 { 0.0 } else { f64::INFINITY }
        } else {
            ((g_y - g_u) / g_u).abs()
        };
        max_deviation = max_deviation.max(deviation);
    }
    Ok(IdentityReport {
        max_deviation,
        divisia_ratio: divisia,
        utility_ratio: path.utility(path.times.len() - 1) / path.utility(0),
    })
}

/// Level effects on an `f` by `rho` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleUpTable {
    pub fractions: Vec<f64>,
    pub rhos: Vec<f64>,
    /// `values[row][col]` for `fractions[row]`, `rhos[col]`.
    pub values: Vec<Vec<f64>>,
}

impl ScaleUpTable {
    pub fn get(&self, f: f64, rho: f64) -> Option<f64> {
        let row = self.fractions.iter().position(|x| *x == f)?;
        let col = self.rhos.iter().position(|x| *x == rho)?;
        Some(self.values[row][col])
    }

    /// One row per `f`, one column per `rho`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["f".to_string()];
        header.extend(self.rhos.iter().map(|r| format!("rho={r}")));
        w.write_record(&header)?;
        for (f, row) in self.fractions.iter().zip(&self.values) {
            let mut record = vec![f.to_string()];
            record.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn table3(fractions: &[f64], rhos: &[f64]) -> Result<ScaleUpTable> {
    let values = fractions
        .iter()
        .map(|&f| rhos.iter().map(|&rho| level_effect(f, rho)).collect())
        .collect::<Result<_>>()?;
    Ok(ScaleUpTable {
        fractions: fractions.to_vec(),
        rhos: rhos.to_vec(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn sigma_conversion() {
        assert!((rho_from_sigma(1.0 / 3.0).unwrap() + 2.0).abs() < 1e-12);
        assert_eq!(rho_from_sigma(1.0).unwrap(), 0.0);
        assert!((rho_from_sigma(0.45).unwrap() + 1.2222).abs() < 1e-4);
        assert!(rho_from_sigma(0.0).is_err());
        assert!((sigma_from_rho(-2.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn ces_output_examples() {
        let equal = ces_output(&[3.0; 5], -0.7, 2.0).unwrap();
        assert!(rel(equal.value, 6.0) < 1e-12);
        assert_eq!(ces_output(&[1.5, 0.5], -1.0, 1.0).unwrap().value, 0.75);
        let starved = ces_output(&[1.0, 0.0, 2.0], -0.5, 1.0).unwrap();
        assert_eq!(starved.value, 0.0);
        assert!(starved.bottlenecked);
        assert!(ces_output(&[1.0, 2.0], 0.0, 1.0).is_err());
    }

    #[test]
    fn optimal_allocation_examples() {
        let full = optimal_allocation(&TaskEconomy::new(-1.0, 1.0).with_tasks(10)).unwrap();
        assert!(full.iter().all(|x| (x - 1.0).abs() < 1e-12));
        let tenth = optimal_allocation(&TaskEconomy::new(-1.0, 0.1).with_tasks(100)).unwrap();
        assert!(tenth[..10].iter().all(|x| (x - 10.0).abs() < 1e-12));
        assert!(tenth[10..].iter().all(|x| x.is_infinite()));
        assert!(matches!(
            optimal_allocation(&TaskEconomy::new(0.5, 0.5)),
            Err(Error::ComplementsRequired(_))
        ));
    }

    #[test]
    fn optimal_allocation_reproduces_level_effect() {
        let economy = TaskEconomy::new(-1.0, 0.1);
        let y = economy.output(&optimal_allocation(&economy).unwrap()).unwrap().value;
        assert!(rel(y / economy.baseline_output().unwrap(), 100.0) < 1e-12);
    }

    #[test]
    fn equal_split_beats_random_allocations() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2usize, 4, 8] {
            for rho in [-1.0, -0.3, -3.0] {
                let best = ces_output(&vec![1.0; n], rho, 1.0).unwrap().value;
                for _ in 0..10_000 {
                    let weights: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().ln()).collect();
                    let total: f64 = weights.iter().sum();
                    let alloc: Vec<f64> = weights.iter().map(|w| w * n as f64 / total).collect();
                    let y = ces_output(&alloc, rho, 1.0).unwrap().value;
                    assert!(y <= best * (1.0 + 1e-9), "n={n} rho={rho} {alloc:?}");
                }
            }
        }
    }

    #[test]
    fn level_effect_examples() {
        assert_eq!(level_effect(0.1, -1.0).unwrap(), 100.0);
        assert!(rel(level_effect(0.05, -0.2).unwrap(), 6.4e7) < 0.01);
        assert!(rel(level_effect(0.25, -2.0).unwrap(), 8.0) < 1e-12);
        assert_eq!(level_effect(1.0, -0.7).unwrap(), 1.0);
        assert!(level_effect(0.0, -1.0).is_err());
        assert!(level_effect(0.5, 0.3).is_err());
    }

    #[test]
    fn finite_boost_examples() {
        assert_eq!(finite_boost_level_effect(0.0, -1.0, 10.0).unwrap(), 10.0);
        assert_eq!(finite_boost_level_effect(0.1, -1.0, f64::INFINITY).unwrap(), 100.0);
        assert!(rel(finite_boost_level_effect(0.1, -1.0, 100.0).unwrap(), 1.0 / 0.019) < 1e-12);
        let near = finite_boost_level_effect(0.1, -1.0, 1e8).unwrap();
        assert!(rel(near, 100.0) < 0.01);
    }

    #[test]
    fn schedule_examples() {
        let s = automation_schedule(-1.0, 100.0, 80.0, 1.0 / 80.0).unwrap();
        assert_eq!(s.output()[0], 1.0);
        assert!(rel(*s.output().last().unwrap(), 100.0) < 1e-9);
        assert!(s.output().windows(2).all(|w| w[1] >= w[0]));
        let steep = automation_schedule(-5.0, 100.0, 80.0, 1.0 / 80.0).unwrap();
        let mild = automation_schedule(-0.5, 100.0, 80.0, 1.0 / 80.0).unwrap();
        assert!(back_loaded_share(&steep, 0.1).unwrap() > back_loaded_share(&mild, 0.1).unwrap());
        assert!(automation_schedule(-1.0, 100.0, 80.0, 0.02).is_err());
    }

    #[test]
    fn proportional_path_tracks_utility() {
        let path = UtilityPath::sample(-0.5, 1.0, 1000, |t| {
            (1..=10).map(|i| i as f64 * (0.05 * t).exp()).collect()
        })
        .unwrap();
        let report = utility_gdp_identity_check(&path).unwrap();
        assert!(report.max_deviation < 1e-6);
        assert!(rel(report.divisia_ratio, report.utility_ratio) < 1e-9);
    }

    fn wavy(t: f64) -> Vec<f64> {
        (1..=10)
            .map(|i| {
                let i = i as f64;
                i * (0.3 * t + 0.05 * i.sqrt() * (3.0 * t + i).sin()).exp()
            })
            .collect()
    }

    #[test]
    fn smooth_path_deviation_is_first_order() {
        let coarse = UtilityPath::sample(-0.5, 1.0, 1000, wavy).unwrap();
        let fine = UtilityPath::sample(-0.5, 1.0, 2000, wavy).unwrap();
        let d_coarse = utility_gdp_identity_check(&coarse).unwrap().max_deviation;
        let d_fine = utility_gdp_identity_check(&fine).unwrap().max_deviation;
        assert!(d_coarse < 1e-3, "{d_coarse}");
        assert!(d_fine <= 0.55 * d_coarse, "{d_fine} vs {d_coarse}");
    }

    #[test]
    fn automating_quarter_of_tasks_gives_table_value() {
        // automated tasks scale up 1000x while humans move onto the rest
        let path = UtilityPath::sample(-2.0, 1.0, 4000, |t| {
            (0..8)
                .map(|i| if i < 2 { 4f64.powf(t) } else { 1000f64.powf(t) })
                .collect()
        })
        .unwrap();
        let report = utility_gdp_identity_check(&path).unwrap();
        assert!(rel(report.utility_ratio, 8.0) < 1e-3);
        assert!(rel(report.divisia_ratio, report.utility_ratio) < 0.01);
    }

    #[test]
    fn table3_layout_and_values() {
        let table = table3(&SCALE_UP_FRACTIONS, &SCALE_UP_RHOS).unwrap();
        assert!(rel(table.get(0.10, -0.4).unwrap(), 3.2e3) < 0.02);
        assert!(rel(table.get(0.25, -0.2).unwrap(), 4.1e3) < 0.01);
        assert!(rel(table.get(0.05, -2.0).unwrap(), 89.0) < 0.01);
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("f,rho=-0.2,rho=-0.4,rho=-2\n0.05,"));
        assert_eq!(text.lines().count(), 4);
    }
}
