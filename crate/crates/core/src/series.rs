//! Field snapshots and saved time series, with the CSV directory format
//! (`snapshot_NNNNN.csv` with header `x1,xN,u`, plus `times.csv`).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::grid::StripGrid;

/// Values at every node (layout `j * mx + i`) at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldSnapshot {
    pub time: f64,
    pub values: Vec<f64>,
}

impl FieldSnapshot {
    pub fn new(time: f64, values: Vec<f64>) -> Self {
        FieldSnapshot { time, values }
    }

    pub fn zeros(grid: &StripGrid, time: f64) -> Self {
        FieldSnapshot::new(time, vec![0.0; grid.len()])
    }

    /// Normal row `j`.
    pub fn row<'a>(&'a self, grid: &StripGrid, j: usize) -> &'a [f64] {
        &self.values[j * grid.mx()..(j + 1) * grid.mx()]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Snapshots at strictly increasing save times.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FieldSeries {
    snapshots: Vec<FieldSnapshot>,
}

impl FieldSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, snap: FieldSnapshot) -> Result<()> {
        if let Some(last) = self.snapshots.last() {
            if !(snap.time > last.time) {
                return Err(Error::Contract(format!(
                    "snapshot times must increase ({} after {})",
                    snap.time, last.time
                )));
            }
            if snap.values.len() != last.values.len() {
                return Err(Error::Contract("snapshot sizes differ".into()));
            }
        }
        self.snapshots.push(snap);
        Ok(())
    }

    pub fn snapshots(&self) -> &[FieldSnapshot] {
        &self.snapshots
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn last(&self) -> Option<&FieldSnapshot> {
        self.snapshots.last()
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.time).collect()
    }

    pub fn values(&self) -> Vec<&[f64]> {
        self.snapshots.iter().map(|s| s.values.as_slice()).collect()
    }

    /// Whether save times are uniformly spaced to relative tolerance `tol`.
    pub fn uniform_spacing(&self, tol: f64) -> bool {
        let t = self.times();
        if t.len() < 3 {
            return true;
        }
        let d0 = t[1] - t[0];
        t.windows(2).all(|w| ((w[1] - w[0]) - d0).abs() <= tol * d0.abs())
    }

    pub fn max_abs(&self) -> f64 {
        self.snapshots.iter().fold(0.0f64, |m, s| m.max(s.max_abs()))
    }

    /// `u_t` at each save time: centred differences inside, one-sided at the ends.
    pub fn time_derivative(&self) -> Result<Vec<Vec<f64>>> {
        let n = self.snapshots.len();
        if n < 2 {
            return Err(Error::Contract("time derivative needs two snapshots".into()));
        }
        let s = &self.snapshots;
        let diff = |a: usize, b: usize| -> Vec<f64> {
            let dt = s[b].time - s[a].time;
            s[b].values
                .iter()
                .zip(&s[a].values)
                .map(|(x, y)| (x - y) / dt)
                .collect()
        };
        Ok((0..n)
            .map(|k| match k {
                0 => diff(0, 1),
                k if k == n - 1 => diff(n - 2, n - 1),
                k => diff(k - 1, k + 1),
            })
            .collect())
    }

    /// Writes `times.csv` and one `snapshot_NNNNN.csv` per save time.
    pub fn write_dir(&self, grid: &StripGrid, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let mut times = String::from("index,time\n");
        for (k, snap) in self.snapshots.iter().enumerate() {
            writeln!(times, "{k},{}", snap.time).expect("write to string");
            let mut body = String::with_capacity(snap.values.len() * 32);
            body.push_str("x1,xN,u\n");
            for j in 0..=grid.j() {
                for i in 0..grid.mx() {
                    writeln!(body, "{},{},{}", grid.x1(i), grid.xn(j), snap.values[grid.index(i, j)])
                        .expect("write to string");
                }
            }
            let path = dir.join(format!("snapshot_{k:05}.csv"));
            fs::write(&path, body)?;
            written.push(path);
        }
        let path = dir.join("times.csv");
        fs::write(&path, times)?;
        written.push(path);
        Ok(written)
    }

    /// Reads a directory written by [`write_dir`](Self::write_dir).
    pub fn read_dir(grid: &StripGrid, dir: &Path) -> Result<FieldSeries> {
        let times = fs::read_to_string(dir.join("times.csv"))?;
        let mut series = FieldSeries::new();
        for (ln, line) in times.lines().enumerate().skip(1) {
            let (idx, t) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("times.csv line {}: expected index,time", ln + 1)))?;
            let k: usize = idx
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad index {idx:?}")))?;
            let t: f64 = t.trim().parse().map_err(|_| Error::Parse(format!("bad time {t:?}")))?;
            let text = fs::read_to_string(dir.join(format!("snapshot_{k:05}.csv")))?;
            let mut values = Vec::with_capacity(grid.len());
            for (ln, row) in text.lines().enumerate().skip(1) {
                let u = row
                    .rsplit(',')
                    .next()
                    .and_then(|v| v.trim().parse::<f64>().ok())
                    .ok_or_else(|| Error::Parse(format!("snapshot {k} line {}: bad value", ln + 1)))?;
                values.push(u);
            }
            if values.len() != grid.len() {
                return Err(Error::Parse(format!(
                    "snapshot {k} has {} values, grid has {}",
                    values.len(),
                    grid.len()
                )));
            }
            series.push(FieldSnapshot::new(t, values))?;
        }
        Ok(series)
    }
}
