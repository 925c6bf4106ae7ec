//! Time-indexed output series shared by every simulator.
//!
//! A [`Trajectory`] carries strictly increasing times (years), strictly
//! positive output levels and, optionally, named model state columns.
//! The CSV form is `t_years,Y[,state columns...]`.

use std::io::{Read, Write};

use crate::error::{Error, Result};

/// Named state variables recorded alongside output, one row per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSeries {
    names: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl StateSeries {
    pub fn new(names: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(bad) = rows.iter().position(|r| r.len() != names.len()) {
            return Err(Error::InvalidTrajectory(format!(
                "state row {bad} has {} values, expected {}",
                rows[bad].len(),
                names.len()
            )));
        }
        Ok(Self { names, rows })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    output: Vec<f64>,
    state: Option<StateSeries>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, output: Vec<f64>) -> Result<Self> {
        if times.len() != output.len() {
            return Err(Error::InvalidTrajectory(format!(
                "{} times but {} output values",
                times.len(),
                output.len()
            )));
        }
        if let Some(w) = times.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidTrajectory(format!(
                "times must be strictly increasing (index {})",
                w + 1
            )));
        }
        if let Some(i) = output.iter().position(|y| !(y.is_finite() && *y > 0.0)) {
            return Err(Error::InvalidTrajectory(format!(
                "output must be strictly positive and finite (index {i}: {})",
                output[i]
            )));
        }
        Ok(Self {
            times,
            output,
            state: None,
        })
    }

    /// Builds a trajectory from evenly spaced or arbitrary `(t, Y)` pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let (times, output) = pairs.into_iter().unzip();
        Self::new(times, output)
    }

    pub fn with_state(mut self, state: StateSeries) -> Result<Self> {
        if state.rows.len() != self.times.len() {
            return Err(Error::InvalidTrajectory(format!(
                "{} state rows for {} samples",
                state.rows.len(),
                self.times.len()
            )));
        }
        self.state = Some(state);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn output(&self) -> &[f64] {
        &self.output
    }

    pub fn state(&self) -> Option<&StateSeries> {
        self.state.as_ref()
    }

    /// Values of one named state column.
    pub fn state_column(&self, name: &str) -> Option<Vec<f64>> {
        let state = self.state.as_ref()?;
        let idx = state.names.iter().position(|n| n == name)?;
        Some(state.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn first_time(&self) -> Option<f64> {
        self.times.first().copied()
    }

    pub fn last_time(&self) -> Option<f64> {
        self.times.last().copied()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let mut out = Self::new(
            self.times.clone(),
            self.output.iter().map(|y| y * factor).collect(),
        )?;
        out.state = self.state.clone();
        Ok(out)
    }

    /// Output at time `t` by log-linear (geometric) interpolation.
    /// Returns `None` outside the sampled range.
    pub fn output_at(&self, t: f64) -> Option<f64> {
        let n = self.times.len();
        if n == 0 || t < self.times[0] || t > self.times[n - 1] {
            return None;
        }
        let hi = self.times.partition_point(|&x| x < t);
        if hi < n && self.times[hi] == t {
            return Some(self.output[hi]);
        }
        let lo = hi - 1;
        let (t0, t1) = (self.times[lo], self.times[hi]);
        let w = (t - t0) / (t1 - t0);
        let ln = (1.0 - w) * self.output[lo].ln() + w * self.output[hi].ln();
        Some(ln.exp())
    }

    /// Resamples onto the calendar-year grid `ceil(t_first)..=floor(t_last)`.
    /// State columns are dropped.
    pub fn annualized(&self) -> Result<Self> {
        let (Some(first), Some(last)) = (self.first_time(), self.last_time()) else {
            return Err(Error::InsufficientData("empty trajectory".into()));
        };
        let start = first.ceil() as i64;
        let end = last.floor() as i64;
        if end - start < 1 {
            return Err(Error::InsufficientData(format!(
                "need at least two calendar years, span is [{first}, {last}]"
            )));
        }
        let (times, output) = (start..=end)
            .map(|year| {
                let t = year as f64;
                (t, self.output_at(t).expect("year inside sampled range"))
            })
            .unzip();
        Self::new(times, output)
    }

    /// Mean continuous growth rate `ln(Y(to)/Y(from)) / (to - from)`.
    pub fn log_growth_rate(&self, from: f64, to: f64) -> Result<f64> {
        if !(to > from) {
            return Err(Error::param("to", "window end must follow its start"));
        }
        match (self.output_at(from), self.output_at(to)) {
            (Some(a), Some(b)) => Ok((b / a).ln() / (to - from)),
            _ => Err(Error::InsufficientData(format!(
                "window [{from}, {to}] outside sampled range"
            ))),
        }
    }

    /// Least-squares slope of `ln Y` against `t` over the final `tail`
    /// fraction of the time span.
    pub fn tail_log_growth(&self, tail: f64) -> Result<f64> {
        if !(tail > 0.0 && tail <= 1.0) {
            return Err(Error::param("tail", "must lie in (0, 1]"));
        }
        let (Some(first), Some(last)) = (self.first_time(), self.last_time()) else {
            return Err(Error::InsufficientData("empty trajectory".into()));
        };
        let cutoff = last - tail * (last - first);
        let (xs, ys): (Vec<f64>, Vec<f64>) = self
            .times
            .iter()
            .zip(&self.output)
            .filter(|(t, _)| **t >= cutoff)
            .map(|(t, y)| (*t, y.ln()))
            .unzip();
        if xs.len() < 2 {
            return Err(Error::InsufficientData(
                "fewer than two samples in the tail window".into(),
            ));
        }
        Ok(crate::stats::least_squares(&xs, &ys).slope)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["t_years".to_string(), "Y".to_string()];
        if let Some(state) = &self.state {
            header.extend(state.names.iter().cloned());
        }
        w.write_record(&header)?;
        for i in 0..self.len() {
            let mut record = vec![self.times[i].to_string(), self.output[i].to_string()];
            if let Some(state) = &self.state {
                record.extend(state.rows[i].iter().map(f64::to_string));
            }
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let headers = r.headers()?.clone();
        if headers.len() < 2 || &headers[0] != "t_years" || &headers[1] != "Y" {
            return Err(Error::InvalidTrajectory(
                "header must start with `t_years,Y`".into(),
            ));
        }
        let names: Vec<String> = headers.iter().skip(2).map(str::to_string).collect();
        let (mut times, mut output, mut rows) = (Vec::new(), Vec::new(), Vec::new());
        for (line, record) in r.records().enumerate() {
            let record = record?;
            let parse = |i: usize| -> Result<f64> {
                record[i].trim().parse::<f64>().map_err(|e| {
                    Error::InvalidTrajectory(format!("row {}, column {i}: {e}", line + 1))
                })
            };
            times.push(parse(0)?);
            output.push(parse(1)?);
            rows.push((2..record.len()).map(parse).collect::<Result<Vec<_>>>()?);
        }
        let traj = Self::new(times, output)?;
        if names.is_empty() {
            Ok(traj)
        } else {
            traj.with_state(StateSeries::new(names, rows)?)
        }
    }
}
