use std::fmt;
use std::str::FromStr;

use crate::calculus::{format_rational, parse_rational, rational, PowerLogTerm, Rational, SurdValue, TermSum};
use crate::error::{Error, Result};
use crate::evolution::{SchemeConfig, Tangential};
use crate::grid::{cylinder_mask, ParabolicCylinder, StripGrid};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    Remark11,
    Manufactured,
    LiouvilleT,
    Uniqueness,
    Estimates,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Scenario::Remark11,
        Scenario::Manufactured,
        Scenario::LiouvilleT,
        Scenario::Uniqueness,
        Scenario::Estimates,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Remark11 => "remark11",
            Scenario::Manufactured => "manufactured",
            Scenario::LiouvilleT => "liouville-t",
            Scenario::Uniqueness => "uniqueness",
            Scenario::Estimates => "estimates",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| format!("unknown scenario {s:?}"))
    }
}

/// Compact initial bump `amplitude * psi(|x - c| / r)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpSpec {
    pub x1: f64,
    pub xn: f64,
    pub r: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub beta: Rational,
    pub b: Rational,
    pub lx: f64,
    pub mx: usize,
    pub xmax: f64,
    pub j: usize,
    pub gamma: f64,
    pub theta: f64,
    pub dt: f64,
    pub t_end: f64,
    pub save_every: usize,
    pub c0: f64,
    pub c1: f64,
    pub tolerance: f64,
    pub growth_m: f64,
    pub growth_c: f64,
    pub centers: Vec<[f64; 3]>,
    pub radii: Vec<f64>,
    pub q: f64,
    pub epsilon: f64,
    pub ms_time: Vec<Rational>,
    pub ms_tangential: Tangential,
    pub ms_normal: TermSum,
    pub bump: BumpSpec,
    pub bump_amplitude: f64,
    pub refine: bool,
    pub seed: u64,
    pub output_dir: Option<String>,
}

const KEYS: &[&str] = &[
    "scenario",
    "beta",
    "b",
    "lx",
    "mx",
    "xmax",
    "j",
    "gamma",
    "theta",
    "dt",
    "t_end",
    "save_every",
    "c0",
    "c1",
    "tolerance",
    "growth_m",
    "growth_c",
    "centers",
    "radii",
    "q",
    "epsilon",
    "ms_time",
    "ms_tangential",
    "ms_normal",
    "bump",
    "bump_amplitude",
    "refine",
    "seed",
    "output_dir",
];

const MANDATORY: &[&str] = &["scenario", "beta"];

impl RunConfig {
    /// Defaults for every optional key.
    pub fn defaults(scenario: Scenario) -> Self {
        RunConfig {
            scenario,
            beta: Rational::from_integer(1.into()),
            b: Rational::from_integer(0.into()),
            lx: 2.0,
            mx: 16,
            xmax: 1.0,
            j: 32,
            gamma: 2.0,
            theta: 1.0,
            dt: 1e-3,
            t_end: 1.0,
            save_every: 10,
            c0: 0.0,
            c1: 1.0,
            tolerance: 1e-4,
            growth_m: 0.0,
            growth_c: 1.0,
            centers: Vec::new(),
            radii: Vec::new(),
            q: 2.0,
            epsilon: 0.2,
            ms_time: vec![Rational::from_integer(0.into()), Rational::from_integer(1.into())],
            ms_tangential: Tangential::One,
            ms_normal: TermSum::monomial(rational(1, 1), rational(2, 1), 0),
            bump: BumpSpec {
                x1: 1.0,
                xn: 0.5,
                r: 0.25,
            },
            bump_amplitude: 1.0,
            refine: true,
            seed: 7,
            output_dir: None,
        }
    }

    pub fn grid(&self) -> Result<StripGrid> {
        StripGrid::new(self.lx, self.mx, self.xmax, self.j, self.gamma)
    }

    pub fn scheme(&self) -> Result<SchemeConfig> {
        SchemeConfig::new(self.theta, self.dt, self.t_end, self.save_every)
    }

    pub fn beta_f64(&self) -> f64 {
        crate::calculus::rational_to_f64(&self.beta)
    }

    /// Times of the saved snapshots.
    pub fn save_times(&self) -> Result<Vec<f64>> {
        let s = self.scheme()?;
        Ok((0..=s.steps()).step_by(s.save_every).map(|n| s.time(n)).collect())
    }

    pub fn cylinders(&self) -> Vec<ParabolicCylinder> {
        self.centers
            .iter()
            .flat_map(|c| {
                self.radii
                    .iter()
                    .map(move |&r| ParabolicCylinder::new(c[0], c[1], c[2], r))
            })
            .collect()
    }

    /// Canonical `key = value` pairs in key order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let list = |v: &[f64]| v.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(", ");
        vec![
            ("scenario", self.scenario.to_string()),
            ("beta", format_rational(&self.beta)),
            ("b", format_rational(&self.b)),
            ("lx", fmt_f64(self.lx)),
            ("mx", self.mx.to_string()),
            ("xmax", fmt_f64(self.xmax)),
            ("j", self.j.to_string()),
            ("gamma", fmt_f64(self.gamma)),
            ("theta", fmt_f64(self.theta)),
            ("dt", fmt_f64(self.dt)),
            ("t_end", fmt_f64(self.t_end)),
            ("save_every", self.save_every.to_string()),
            ("c0", fmt_f64(self.c0)),
            ("c1", fmt_f64(self.c1)),
            ("tolerance", fmt_f64(self.tolerance)),
            ("growth_m", fmt_f64(self.growth_m)),
            ("growth_c", fmt_f64(self.growth_c)),
            (
                "centers",
                self.centers
                    .iter()
                    .map(|c| format!("{}:{}:{}", fmt_f64(c[0]), fmt_f64(c[1]), fmt_f64(c[2])))
                    .collect::<Vec<_>>()
                    .join("; "),
            ),
            ("radii", list(&self.radii)),
            ("q", fmt_f64(self.q)),
            ("epsilon", fmt_f64(self.epsilon)),
            (
                "ms_time",
                self.ms_time.iter().map(format_rational).collect::<Vec<_>>().join(", "),
            ),
            (
                "ms_tangential",
                match self.ms_tangential {
                    Tangential::One => "1".to_string(),
                    Tangential::Cos(k) => format!("cos:{k}"),
                    Tangential::Sin(k) => format!("sin:{k}"),
                },
            ),
            ("ms_normal", format_normal(&self.ms_normal)),
            (
                "bump",
                format!(
                    "{}:{}:{}",
                    fmt_f64(self.bump.x1),
                    fmt_f64(self.bump.xn),
                    fmt_f64(self.bump.r)
                ),
            ),
            ("bump_amplitude", fmt_f64(self.bump_amplitude)),
            ("refine", self.refine.to_string()),
            ("seed", self.seed.to_string()),
            ("output_dir", self.output_dir.clone().unwrap_or_default()),
        ]
    }

    /// Canonical text; `parse_config(to_text(c)) == c`.
    pub fn to_text(&self) -> String {
        self.entries()
            .into_iter()
            .filter(|(k, v)| !(v.is_empty() && *k == "output_dir"))
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if self.beta < Rational::from_integer(0.into()) {
            return Err("beta must be >= 0".into());
        }
        self.grid().map_err(|e| e.to_string())?;
        self.scheme().map_err(|e| e.to_string())?;
        if !(self.q > 1.0) {
            return Err(format!("q must exceed 1 (got {})", self.q));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(format!("epsilon must lie in (0, 1) (got {})", self.epsilon));
        }
        if !(self.tolerance > 0.0) {
            return Err("tolerance must be positive".into());
        }
        if self.radii.iter().any(|r| !(*r > 0.0)) {
            return Err("radii must be positive".into());
        }
        if !(self.bump.r > 0.0) {
            return Err("bump radius must be positive".into());
        }
        Ok(())
    }

    /// Every configured `Q_qR` inside the box and the run's time window.
    fn check_cylinders(&self) -> std::result::Result<(), String> {
        if self.centers.is_empty() {
            return Ok(());
        }
        let grid = self.grid().map_err(|e| e.to_string())?;
        let times = self.save_times().map_err(|e| e.to_string())?;
        for c in self.cylinders() {
            if cylinder_mask(&grid, &c.scaled(self.q), &times).clipped {
                return Err(format!(
                    "cylinder at ({}, {}, {}) with q R = {} is clipped by the box or the time window [0, {}]",
                    c.x1c,
                    c.xnc,
                    c.tc,
                    c.r * self.q,
                    self.t_end
                ));
            }
        }
        Ok(())
    }
}

/// Shortest text that parses back to the same `f64`.
fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn format_normal(n: &TermSum) -> String {
    n.terms()
        .iter()
        .map(|t| {
            let c = t.coeff.as_rational().map(format_rational).unwrap_or_default();
            let e = t.exponent.as_rational().map(format_rational).unwrap_or_default();
            format!("{c}:{e}:{}", t.logpow)
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn parse_f64(v: &str) -> std::result::Result<f64, String> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("expected a finite number, got {v:?}"))
}

fn parse_list(v: &str) -> std::result::Result<Vec<f64>, String> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|s| parse_f64(s.trim())).collect()
}

fn parse_triple(v: &str) -> std::result::Result<[f64; 3], String> {
    let parts: Vec<&str> = v.split(':').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected a:b:c, got {v:?}"));
    }
    Ok([parse_f64(parts[0])?, parse_f64(parts[1])?, parse_f64(parts[2])?])
}

fn parse_rat(v: &str) -> std::result::Result<Rational, String> {
    parse_rational(v).map_err(|e| e.to_string())
}

fn parse_tangential(v: &str) -> std::result::Result<Tangential, String> {
    if v == "1" {
        return Ok(Tangential::One);
    }
    let (kind, k) = v
        .split_once(':')
        .ok_or_else(|| format!("expected 1, cos:k or sin:k, got {v:?}"))?;
    let k: u32 = k.trim().parse().map_err(|_| format!("bad wavenumber {k:?}"))?;
    match kind.trim() {
        "cos" => Ok(Tangential::Cos(k)),
        "sin" => Ok(Tangential::Sin(k)),
        other => Err(format!("unknown tangential factor {other:?}")),
    }
}

fn parse_normal(v: &str) -> std::result::Result<TermSum, String> {
    let mut terms = Vec::new();
    for item in v.split(',') {
        let parts: Vec<&str> = item.split(':').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("expected coeff:exp:logpow, got {item:?}"));
        }
        let logpow: u32 = parts[2].parse().map_err(|_| format!("bad log power {:?}", parts[2]))?;
        terms.push(PowerLogTerm::new(
            SurdValue::from_rational(parse_rat(parts[0])?),
            SurdValue::from_rational(parse_rat(parts[1])?),
            logpow,
        ));
    }
    Ok(TermSum::from_terms(terms))
}

fn apply(cfg: &mut RunConfig, key: &str, v: &str) -> std::result::Result<(), String> {
    let usize_of = |v: &str| {
        v.parse::<usize>()
            .map_err(|_| format!("expected an integer, got {v:?}"))
    };
    match key {
        "scenario" => cfg.scenario = v.parse()?,
        "beta" => {
            let b = parse_rat(v)?;
            if b < Rational::from_integer(0.into()) {
                return Err("beta must be >= 0".into());
            }
            cfg.beta = b;
        }
        "b" => cfg.b = parse_rat(v)?,
        "lx" => cfg.lx = parse_f64(v)?,
        "mx" => cfg.mx = usize_of(v)?,
        "xmax" => cfg.xmax = parse_f64(v)?,
        "j" => cfg.j = usize_of(v)?,
        "gamma" => cfg.gamma = parse_f64(v)?,
        "theta" => cfg.theta = parse_f64(v)?,
        "dt" => cfg.dt = parse_f64(v)?,
        "t_end" => cfg.t_end = parse_f64(v)?,
        "save_every" => cfg.save_every = usize_of(v)?,
        "c0" => cfg.c0 = parse_f64(v)?,
        "c1" => cfg.c1 = parse_f64(v)?,
        "tolerance" => cfg.tolerance = parse_f64(v)?,
        "growth_m" => cfg.growth_m = parse_f64(v)?,
        "growth_c" => cfg.growth_c = parse_f64(v)?,
        "centers" => {
            cfg.centers = v
                .split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(parse_triple)
                .collect::<std::result::Result<_, _>>()?
        }
        "radii" => cfg.radii = parse_list(v)?,
        "q" => cfg.q = parse_f64(v)?,
        "epsilon" => cfg.epsilon = parse_f64(v)?,
        "ms_time" => {
            cfg.ms_time = v
                .split(',')
                .map(|s| parse_rat(s.trim()))
                .collect::<std::result::Result<_, _>>()?
        }
        "ms_tangential" => cfg.ms_tangential = parse_tangential(v)?,
        "ms_normal" => cfg.ms_normal = parse_normal(v)?,
        "bump" => {
            let [x1, xn, r] = parse_triple(v)?;
            cfg.bump = BumpSpec { x1, xn, r };
        }
        "bump_amplitude" => cfg.bump_amplitude = parse_f64(v)?,
        "refine" => cfg.refine = v.parse().map_err(|_| format!("expected true or false, got {v:?}"))?,
        "seed" => cfg.seed = v.parse().map_err(|_| format!("expected an integer, got {v:?}"))?,
        "output_dir" => cfg.output_dir = Some(v.to_string()).filter(|s| !s.is_empty()),
        _ => return Err(format!("unknown key {key:?}")),
    }
    Ok(())
}

/// Parses `key = value` lines (`#` starts a comment).
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let err = |line: usize, message: String| Error::Config { line, message };
    let mut pairs: Vec<(usize, String, String)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (k, v) = body
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected `key = value`, got {body:?}")))?;
        let (k, v) = (k.trim().to_string(), v.trim().to_string());
        if !KEYS.contains(&k.as_str()) {
            return Err(err(line, format!("unknown key {k:?}")));
        }
        if let Some((first, ..)) = pairs.iter().find(|p| p.1 == k) {
            return Err(err(line, format!("duplicate key {k:?} (first set on line {first})")));
        }
        pairs.push((line, k, v));
    }
    for key in MANDATORY {
        if !pairs.iter().any(|p| p.1 == *key) {
            return Err(err(0, format!("missing mandatory key {key:?}")));
        }
    }
    let (sline, _, sval) = pairs.iter().find(|p| p.1 == "scenario").expect("checked");
    let scenario: Scenario = sval.parse().map_err(|m| err(*sline, m))?;
    let mut cfg = RunConfig::defaults(scenario);
    for (line, k, v) in &pairs {
        apply(&mut cfg, k, v).map_err(|m| err(*line, format!("{k}: {m}")))?;
    }
    cfg.validate().map_err(|m| err(0, m))?;
    let cyl_line = pairs.iter().find(|p| p.1 == "centers").map_or(0, |p| p.0);
    cfg.check_cylinders().map_err(|m| err(cyl_line, m))?;
    Ok(cfg)
}
