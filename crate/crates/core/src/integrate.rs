//! Adaptive Runge-Kutta integration with finite-time blow-up detection.
//!
//! The stepper is the Dormand-Prince 5(4) pair with its fourth-order
//! continuous extension, used both to sample a caller-chosen output grid and
//! to locate the time at which the state norm crosses the blow-up cap.

use crate::error::{Error, Result};
use crate::trajectory::{StateSeries, Trajectory};

/// A deterministic, side-effect-free vector field.
pub trait Dynamics {
    fn dimension(&self) -> usize;

    fn derivative(&self, t: f64, state: &[f64], out: &mut [f64]);

    /// Output level recorded in the trajectory. Defaults to the first state
    /// component.
    fn output(&self, state: &[f64]) -> f64 {
        state[0]
    }

    fn state_names(&self) -> Vec<String> {
        (0..self.dimension()).map(|i| format!("x{i}")).collect()
    }
}

/// Adapts a closure `(t, y, dy)` into [`Dynamics`].
pub struct FnDynamics<F> {
    dimension: usize,
    field: F,
}

impl<F> FnDynamics<F>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    pub fn new(dimension: usize, field: F) -> Self {
        Self { dimension, field }
    }
}

impl<F> Dynamics for FnDynamics<F>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn derivative(&self, t: f64, state: &[f64], out: &mut [f64]) {
        (self.field)(t, state, out)
    }
}

/// One-dimensional autonomous field `dY/dt = g(Y)`.
pub fn scalar<G: Fn(f64) -> f64>(g: G) -> FnDynamics<impl Fn(f64, &[f64], &mut [f64])> {
    FnDynamics::new(1, move |_t, y: &[f64], dy: &mut [f64]| dy[0] = g(y[0]))
}

/// Where dense output is sampled.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleGrid {
    /// `n` evenly spaced points over `[t0, t1]`, endpoints included.
    Uniform(usize),
    /// Explicit increasing times inside `[t0, t1]`.
    Times(Vec<f64>),
    /// Every accepted step.
    Steps,
}

impl Default for SampleGrid {
    fn default() -> Self {
        SampleGrid::Uniform(DEFAULT_GRID_POINTS)
    }
}

pub const DEFAULT_GRID_POINTS: usize = 512;
/// Cap multiple applied to the initial state norm.
pub const DEFAULT_CAP_FACTOR: f64 = 1e12;
pub const DEFAULT_REL_TOL: f64 = 1e-9;
pub const DEFAULT_MIN_STEP: f64 = 1e-15;
pub const DEFAULT_MAX_STEPS: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    HorizonReached,
    CapReached,
    StepUnderflow,
}

#[derive(Debug, Clone)]
pub struct IntegrationResult {
    pub trajectory: Trajectory,
    /// Cap-crossing (or underflow) time; `None` when the horizon was reached.
    pub blowup_time: Option<f64>,
    pub terminated: Termination,
    pub final_state: Vec<f64>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl IntegrationResult {
    pub fn blew_up(&self) -> bool {
        self.terminated == Termination::CapReached
    }
}

pub struct OdeProblem<D> {
    pub dynamics: D,
    /// Absolute cap on the state's max-norm. `None` uses
    /// [`DEFAULT_CAP_FACTOR`] times the initial norm.
    pub blowup_cap: Option<f64>,
    pub min_step: f64,
    pub max_steps: usize,
    pub grid: SampleGrid,
    pub rel_tol: f64,
}

impl<D: Dynamics> OdeProblem<D> {
    pub fn new(dynamics: D) -> Self {
        Self {
            dynamics,
            blowup_cap: None,
            min_step: DEFAULT_MIN_STEP,
            max_steps: DEFAULT_MAX_STEPS,
            grid: SampleGrid::default(),
            rel_tol: DEFAULT_REL_TOL,
        }
    }

    pub fn with_cap(mut self, cap: f64) -> Self {
        self.blowup_cap = Some(cap);
        self
    }

    pub fn with_grid(mut self, grid: SampleGrid) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_min_step(mut self, min_step: f64) -> Self {
        self.min_step = min_step;
        self
    }

    /// Integrates from `t = 0` over `horizon` years with the problem's own
    /// tolerance, stopping early at the cap.
    pub fn integrate_to_blowup(&self, y0: &[f64], horizon: f64) -> Result<IntegrationResult> {
        self.integrate_adaptive(0.0, horizon, y0, self.rel_tol)
    }

    pub fn integrate_adaptive(
        &self,
        t0: f64,
        t1: f64,
        y0: &[f64],
        rel_tol: f64,
    ) -> Result<IntegrationResult> {
        let dim = self.dynamics.dimension();
        if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
            return Err(Error::param("t1", format!("need t1 > t0, got [{t0}, {t1}]")));
        }
        if y0.len() != dim {
            return Err(Error::param(
                "y0",
                format!("expected {dim} components, got {}", y0.len()),
            ));
        }
        if y0.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("y0", "initial state must be finite"));
        }
        if !(rel_tol > 1e-12 && rel_tol < 1e-2) {
            return Err(Error::param("rel_tol", format!("must lie in (1e-12, 1e-2), got {rel_tol}")));
        }
        if !(self.min_step > 0.0) {
            return Err(Error::param("min_step", "must be positive"));
        }
        let y0_norm = max_norm(y0);
        let cap = self.blowup_cap.unwrap_or(DEFAULT_CAP_FACTOR * y0_norm);
        if !(cap > y0_norm) {
            return Err(Error::param(
                "blowup_cap",
                format!("cap {cap} must exceed the initial norm {y0_norm}"),
            ));
        }
        let grid = self.grid_times(t0, t1)?;
        Stepper::new(self, dim, rel_tol, y0_norm, cap).run(t0, t1, y0, grid)
    }

    fn grid_times(&self, t0: f64, t1: f64) -> Result<Option<Vec<f64>>> {
        match &self.grid {
            SampleGrid::Uniform(n) => {
                if *n < 2 {
                    return Err(Error::param("grid", "uniform grid needs at least 2 points"));
                }
                let span = t1 - t0;
                let last = (*n - 1) as f64;
                Ok(Some(
                    (0..*n)
                        .map(|i| if i + 1 == *n { t1 } else { t0 + span * i as f64 / last })
                        .collect(),
                ))
            }
            SampleGrid::Times(times) => {
                if times.is_empty()
                    || times.windows(2).any(|w| !(w[1] > w[0]))
                    || times[0] < t0
                    || times[times.len() - 1] > t1
                {
                    return Err(Error::param(
                        "grid",
                        "explicit times must be increasing and inside [t0, t1]",
                    ));
                }
                Ok(Some(times.clone()))
            }
            SampleGrid::Steps => Ok(None),
        }
    }
}

fn max_norm(y: &[f64]) -> f64 {
    y.iter().fold(0.0, |m, v| m.max(v.abs()))
}

// Dormand-Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// Continuous extension.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Dense-output polynomial over one accepted step.
struct DenseStep {
    t: f64,
    h: f64,
    r: [Vec<f64>; 5],
}

impl DenseStep {
    fn eval(&self, theta: f64, out: &mut [f64]) {
        let theta1 = 1.0 - theta;
        let [r1, r2, r3, r4, r5] = &self.r;
        for i in 0..out.len() {
            out[i] = r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
        }
    }

    fn at_time(&self, t: f64, out: &mut [f64]) {
        self.eval(((t - self.t) / self.h).clamp(0.0, 1.0), out)
    }
}

struct Stepper<'a, D> {
    problem: &'a OdeProblem<D>,
    dim: usize,
    rel_tol: f64,
    abs_tol: f64,
    cap: f64,
    times: Vec<f64>,
    states: Vec<Vec<f64>>,
}

impl<'a, D: Dynamics> Stepper<'a, D> {
    fn new(problem: &'a OdeProblem<D>, dim: usize, rel_tol: f64, y0_norm: f64, cap: f64) -> Self {
        Self {
            problem,
            dim,
            rel_tol,
            abs_tol: rel_tol * 1e-12 * y0_norm.max(f64::MIN_POSITIVE),
            cap,
            times: Vec::new(),
            states: Vec::new(),
        }
    }

    fn f(&self, t: f64, y: &[f64], out: &mut [f64]) {
        self.problem.dynamics.derivative(t, y, out)
    }

    fn scaled_norm(&self, v: &[f64], y: &[f64], y_new: &[f64]) -> f64 {
        let sum: f64 = (0..self.dim)
            .map(|i| {
                let sc = self.abs_tol + self.rel_tol * y[i].abs().max(y_new[i].abs());
                (v[i] / sc).powi(2)
            })
            .sum();
        (sum / self.dim as f64).sqrt()
    }

    fn initial_step(&self, t0: f64, y0: &[f64], f0: &[f64], span: f64) -> f64 {
        let d0 = self.scaled_norm(y0, y0, y0);
        let d1 = self.scaled_norm(f0, y0, y0);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(span);
        let y1: Vec<f64> = y0.iter().zip(f0).map(|(y, f)| y + h0 * f).collect();
        let mut f1 = vec![0.0; self.dim];
        self.f(t0 + h0, &y1, &mut f1);
        let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
        let d2 = self.scaled_norm(&diff, y0, y0) / h0;
        let dmax = d1.max(d2);
        let h1 = if !dmax.is_finite() {
            h0 * 1e-3
        } else if dmax <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / dmax).powf(1.0 / 5.0)
        };
        (100.0 * h0).min(h1).min(span)
    }

    fn record(&mut self, t: f64, y: Vec<f64>) {
        self.times.push(t);
        self.states.push(y);
    }

    fn run(
        mut self,
        t0: f64,
        t1: f64,
        y0: &[f64],
        grid: Option<Vec<f64>>,
    ) -> Result<IntegrationResult> {
        let dim = self.dim;
        let mut grid_iter = grid.as_ref().map(|g| g.iter().copied().peekable());
        let record_steps = grid.is_none();

        if record_steps {
            self.record(t0, y0.to_vec());
        } else if let Some(it) = grid_iter.as_mut() {
            while let Some(&ts) = it.peek() {
                if ts > t0 {
                    break;
                }
                self.record(ts, y0.to_vec());
                it.next();
            }
        }

        let mut t = t0;
        let mut y = y0.to_vec();
        let mut k1 = vec![0.0; dim];
        self.f(t, &y, &mut k1);
        let mut h = self.initial_step(t0, y0, &k1, t1 - t0);

        let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) = (
            vec![0.0; dim],
            vec![0.0; dim],
            vec![0.0; dim],
            vec![0.0; dim],
            vec![0.0; dim],
            vec![0.0; dim],
        );
        let mut stage = vec![0.0; dim];
        let mut y_new = vec![0.0; dim];
        let mut err_vec = vec![0.0; dim];
        let (mut accepted, mut rejected) = (0usize, 0usize);

        let terminated;
        let mut blowup_time = None;
        loop {
            if t >= t1 {
                terminated = Termination::HorizonReached;
                break;
            }
            if accepted + rejected >= self.problem.max_steps
                || h < self.problem.min_step
                || t + h == t
            {
                terminated = Termination::StepUnderflow;
                blowup_time = Some(t);
                break;
            }
            let last = t + h >= t1;
            if last {
                h = t1 - t;
            }

            for i in 0..dim {
                stage[i] = y[i] + h * A21 * k1[i];
            }
            self.f(t + C2 * h, &stage, &mut k2);
            for i in 0..dim {
                stage[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
            }
            self.f(t + C3 * h, &stage, &mut k3);
            for i in 0..dim {
                stage[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
            }
            self.f(t + C4 * h, &stage, &mut k4);
            for i in 0..dim {
                stage[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
            }
            self.f(t + C5 * h, &stage, &mut k5);
            for i in 0..dim {
                stage[i] = y[i]
                    + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
            }
            let t_new = if last { t1 } else { t + h };
            self.f(t_new, &stage, &mut k6);
            for i in 0..dim {
                y_new[i] = y[i]
                    + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
            }
            self.f(t_new, &y_new, &mut k7);
            for i in 0..dim {
                err_vec[i] = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            }

            let finite = y_new.iter().chain(&k7).all(|v| v.is_finite());
            let err = if finite {
                self.scaled_norm(&err_vec, &y, &y_new)
            } else {
                f64::INFINITY
            };
            if !(err <= 1.0) {
                rejected += 1;
                let factor = if err.is_finite() {
                    (0.9 * err.powf(-0.2)).max(0.2)
                } else {
                    0.2
                };
                h *= factor;
                continue;
            }
            accepted += 1;

            let dense = DenseStep {
                t,
                h,
                r: dense_coefficients(&y, &y_new, &k1, &k3, &k4, &k5, &k6, &k7, h),
            };

            let crossing = if max_norm(&y_new) > self.cap {
                Some(self.locate_crossing(&dense))
            } else {
                None
            };
            let emit_until = crossing.as_ref().map_or(t_new, |(tc, _)| *tc);

            if let Some(it) = grid_iter.as_mut() {
                while let Some(&ts) = it.peek() {
                    if ts > emit_until {
                        break;
                    }
                    let mut sample = vec![0.0; dim];
                    dense.at_time(ts, &mut sample);
                    self.record(ts, sample);
                    it.next();
                }
            }

            if let Some((tc, yc)) = crossing {
                if self.times.last().is_none_or(|&last| tc > last) {
                    self.record(tc, yc.clone());
                }
                y = yc;
                terminated = Termination::CapReached;
                blowup_time = Some(tc);
                break;
            }

            if record_steps {
                self.record(t_new, y_new.clone());
            }
            t = t_new;
            std::mem::swap(&mut y, &mut y_new);
            std::mem::swap(&mut k1, &mut k7);
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= factor;
        }

        let names = self.problem.dynamics.state_names();
        let output: Vec<f64> = self
            .states
            .iter()
            .map(|s| self.problem.dynamics.output(s))
            .collect();
        let trajectory = Trajectory::new(self.times, output)?
            .with_state(StateSeries::new(names, self.states)?)?;
        Ok(IntegrationResult {
            trajectory,
            blowup_time,
            terminated,
            final_state: y,
            accepted_steps: accepted,
            rejected_steps: rejected,
        })
    }

    /// Bisects the dense output of the crossing step for `|y| = cap`.
    fn locate_crossing(&self, dense: &DenseStep) -> (f64, Vec<f64>) {
        let mut probe = vec![0.0; self.dim];
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            dense.eval(mid, &mut probe);
            if max_norm(&probe) > self.cap {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        dense.eval(hi, &mut probe);
        (dense.t + hi * dense.h, probe)
    }
}

#[allow(clippy::too_many_arguments)]
fn dense_coefficients(
    y: &[f64],
    y_new: &[f64],
    k1: &[f64],
    k3: &[f64],
    k4: &[f64],
    k5: &[f64],
    k6: &[f64],
    k7: &[f64],
    h: f64,
) -> [Vec<f64>; 5] {
    let n = y.len();
    let (mut r1, mut r2, mut r3, mut r4, mut r5) = (
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
        vec![0.0; n],
    );
    for i in 0..n {
        let ydiff = y_new[i] - y[i];
        let bspl = h * k1[i] - ydiff;
        r1[i] = y[i];
        r2[i] = ydiff;
        r3[i] = bspl;
        r4[i] = ydiff - h * k7[i] - bspl;
        r5[i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
    }
    [r1, r2, r3, r4, r5]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn last_output(r: &IntegrationResult) -> f64 {
        *r.trajectory.output().last().unwrap()
    }

    #[test]
    fn exponential_reaches_e() {
        let p = OdeProblem::new(scalar(|y| y));
        let r = p.integrate_adaptive(0.0, 1.0, &[1.0], 1e-8).unwrap();
        assert_eq!(r.terminated, Termination::HorizonReached);
        assert_eq!(r.blowup_time, None);
        assert_eq!(r.trajectory.len(), DEFAULT_GRID_POINTS);
        let e = std::f64::consts::E;
        assert!((last_output(&r) - e).abs() / e < 1e-8);
    }

    #[test]
    fn logistic_matches_closed_form() {
        let p = OdeProblem::new(scalar(|y| y * (1.0 - y)));
        let r = p.integrate_adaptive(0.0, 4.0, &[0.5], 1e-8).unwrap();
        let exact = 1.0 / (1.0 + (-4.0f64).exp());
        assert!((last_output(&r) - exact).abs() / exact < 1e-8);
        // dense samples track the analytic curve as well
        for (t, y) in r.trajectory.times().iter().zip(r.trajectory.output()) {
            let exact = 1.0 / (1.0 + (-t).exp());
            assert!((y - exact).abs() < 1e-7, "t = {t}");
        }
    }

    #[test]
    fn quadratic_hits_cap_near_one() {
        let p = OdeProblem::new(scalar(|y| y * y));
        let r = p.integrate_adaptive(0.0, 2.0, &[1.0], 1e-8).unwrap();
        assert_eq!(r.terminated, Termination::CapReached);
        let tb = r.blowup_time.unwrap();
        assert!((tb - 1.0).abs() < 1e-3, "blowup at {tb}");
        assert!(r.trajectory.last_time().unwrap() <= tb);
    }

    #[test]
    fn blowup_times_match_closed_form() {
        // t* = Y0^(1-c) / (c - 1)
        for (c, expected) in [(2.0, 1.0), (1.5, 2.0)] {
            let p = OdeProblem::new(scalar(move |y: f64| y.powf(c)));
            let r = p.integrate_to_blowup(&[1.0], 10.0).unwrap();
            assert!(r.blew_up());
            let tb = r.blowup_time.unwrap();
            assert!((tb - expected).abs() < 1e-3, "c = {c}: {tb}");
        }
    }

    #[test]
    fn exponential_does_not_blow_up() {
        let p = OdeProblem::new(scalar(|y| y));
        let r = p.integrate_to_blowup(&[1.0], 10.0).unwrap();
        assert_eq!(r.terminated, Termination::HorizonReached);
        assert_eq!(r.blowup_time, None);
    }

    #[test]
    fn step_grid_records_every_step() {
        let p = OdeProblem::new(scalar(|y| y)).with_grid(SampleGrid::Steps);
        let r = p.integrate_adaptive(0.0, 1.0, &[1.0], 1e-6).unwrap();
        assert_eq!(r.trajectory.len(), r.accepted_steps + 1);
    }

    #[test]
    fn explicit_grid_is_respected() {
        let times = vec![0.25, 0.5, 1.0];
        let p = OdeProblem::new(scalar(|y| y)).with_grid(SampleGrid::Times(times.clone()));
        let r = p.integrate_adaptive(0.0, 1.0, &[1.0], 1e-8).unwrap();
        assert_eq!(r.trajectory.times(), times.as_slice());
    }

    #[test]
    fn tiny_min_step_budget_reports_underflow() {
        let mut p = OdeProblem::new(scalar(|y| y * y)).with_cap(1e300);
        p.max_steps = 50;
        let r = p.integrate_adaptive(0.0, 2.0, &[1.0], 1e-8).unwrap();
        assert_eq!(r.terminated, Termination::StepUnderflow);
        assert!(r.blowup_time.is_some());
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = OdeProblem::new(scalar(|y| y));
        assert!(p.integrate_adaptive(1.0, 1.0, &[1.0], 1e-6).is_err());
        assert!(p.integrate_adaptive(0.0, 1.0, &[1.0, 2.0], 1e-6).is_err());
        assert!(p.integrate_adaptive(0.0, 1.0, &[f64::NAN], 1e-6).is_err());
        assert!(p.integrate_adaptive(0.0, 1.0, &[1.0], 0.1).is_err());
        assert!(p.integrate_adaptive(0.0, 1.0, &[1.0], 1e-13).is_err());
        let capped = OdeProblem::new(scalar(|y| y)).with_cap(0.5);
        assert!(capped.integrate_adaptive(0.0, 1.0, &[1.0], 1e-6).is_err());
    }
}
