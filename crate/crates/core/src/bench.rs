//! Accuracy sweeps against the exact map, log-log fits, and convergence radii.
//!
//! Every error is the Frobenius distance between a method's superoperator and
//! `exp(τ𝓛)`. Rows are computed independently (in parallel on the current
//! rayon pool) and sorted by `(τ, method, N)` before they are returned, so the
//! output does not depend on scheduling.

use std::cmp::Ordering;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kraus::{assemble, synthesize};
use crate::model::QuantumSystem;
use crate::superop::{exact_map, first_order_map, infinitesimal_map, SuperOperator};

pub const CSV_HEADER: &str = "tau_ns,method,n,error";

/// Default time grid bounds and size, in ns.
pub const DEFAULT_TAU_MIN: f64 = 0.01;
pub const DEFAULT_TAU_MAX: f64 = 4.0;
pub const DEFAULT_POINTS: usize = 60;

/// Approximation methods, declared in output order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Exact,
    /// `𝟙 + τ𝓛`
    Dphi,
    FirstOrder,
    /// Synthesized Kraus set with `N` midpoint nodes per channel.
    Kraus(usize),
}

impl Method {
    /// Label written to the `method` column.
    pub fn label(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Dphi => "dphi",
            Method::FirstOrder => "first_order",
            Method::Kraus(_) => "kraus",
        }
    }

    pub fn quadrature(&self) -> Option<usize> {
        match self {
            Method::Kraus(n) => Some(*n),
            _ => None,
        }
    }

    /// The method's superoperator for `system` at time `tau`.
    pub fn map(&self, system: &QuantumSystem, tau: f64) -> Result<SuperOperator> {
        match *self {
            Method::Exact => exact_map(system, tau),
            Method::Dphi => infinitesimal_map(system, tau),
            Method::FirstOrder => first_order_map(system, tau),
            Method::Kraus(n) => Ok(assemble(&synthesize(&system.with_quadrature(n), tau)?)),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Kraus(n) => write!(f, "kraus:{n}"),
            m => f.write_str(m.label()),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "exact" => Ok(Method::Exact),
            "dphi" => Ok(Method::Dphi),
            "first_order" => Ok(Method::FirstOrder),
            other => {
                let n = other
                    .strip_prefix("kraus:")
                    .ok_or_else(|| Error::domain(format!("unknown method '{other}'")))?;
                match n.parse::<usize>() {
                    Ok(n) if n > 0 => Ok(Method::Kraus(n)),
                    _ => Err(Error::domain(format!(
                        "'{other}': kraus needs a positive node count, as in kraus:10"
                    ))),
                }
            }
        }
    }
}

/// Parses a comma-separated list such as `dphi,first_order,kraus:1,kraus:10`.
///
/// Duplicates are rejected; the order given is not significant.
pub fn parse_methods(list: &str) -> Result<Vec<Method>> {
    if list.trim().is_empty() {
        return Err(Error::domain("empty method list"));
    }
    let mut out: Vec<Method> = Vec::new();
    for item in list.split(',') {
        let m: Method = item.parse()?;
        if out.contains(&m) {
            return Err(Error::domain(format!("method '{m}' listed twice")));
        }
        out.push(m);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub tau: f64,
    pub method: Method,
    pub error: f64,
}

impl SweepRow {
    pub fn n(&self) -> Option<usize> {
        self.method.quadrature()
    }

    fn order(&self, other: &Self) -> Ordering {
        self.tau
            .total_cmp(&other.tau)
            .then_with(|| self.method.cmp(&other.method))
    }
}

/// `points` log-spaced values from `min` to `max` inclusive.
pub fn logspace(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min > 0.0 && max.is_finite() && min < max) {
        return Err(Error::domain(format!(
            "need 0 < min < max, got [{min}, {max}]"
        )));
    }
    match points {
        0 => Err(Error::domain("grid needs at least one point")),
        1 => Ok(vec![min]),
        _ => {
            let (a, b) = (min.ln(), max.ln());
            let step = (b - a) / (points - 1) as f64;
            let mut grid: Vec<f64> = (0..points).map(|k| (a + step * k as f64).exp()).collect();
            grid[0] = min;
            grid[points - 1] = max;
            Ok(grid)
        }
    }
}

/// The 60-point grid on `[0.01, 4]` ns.
pub fn default_tau_grid() -> Vec<f64> {
    logspace(DEFAULT_TAU_MIN, DEFAULT_TAU_MAX, DEFAULT_POINTS).expect("valid default grid")
}

fn check_taus(taus: &[f64], ascending: bool) -> Result<()> {
    if taus.is_empty() {
        return Err(Error::domain("empty time grid"));
    }
    if let Some(t) = taus.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        return Err(Error::domain(format!(
            "time grid values must be positive, got {t}"
        )));
    }
    if ascending && taus.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("time grid must be strictly ascending"));
    }
    Ok(())
}

fn run(system: &QuantumSystem, taus: &[f64], methods: &[Method]) -> Result<Vec<SweepRow>> {
    let report = system.validate();
    if !report.is_ok() {
        return Err(Error::Validation(report.to_string()));
    }
    let per_tau: Vec<Vec<SweepRow>> = taus
        .par_iter()
        .map(|&tau| {
            let exact = exact_map(system, tau)?;
            methods
                .par_iter()
                .map(|m| {
                    let error = match m {
                        Method::Exact => 0.0,
                        _ => m.map(system, tau)?.distance(&exact)?,
                    };
                    Ok(SweepRow {
                        tau,
                        method: *m,
                        error,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<SweepRow> = per_tau.into_iter().flatten().collect();
    rows.sort_by(SweepRow::order);
    Ok(rows)
}

/// Error of every method against the exact map at every `τ` in `taus`.
pub fn sweep_time(
    system: &QuantumSystem,
    taus: &[f64],
    methods: &[Method],
) -> Result<Vec<SweepRow>> {
    check_taus(taus, true)?;
    if methods.is_empty() {
        return Err(Error::domain("no methods requested"));
    }
    run(system, taus, methods)
}

/// Error of `kraus(N)` against the exact map for every `τ` and `N`.
pub fn sweep_quadrature(
    system: &QuantumSystem,
    taus: &[f64],
    ns: &[usize],
) -> Result<Vec<SweepRow>> {
    check_taus(taus, false)?;
    let mut sorted = taus.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::domain("repeated time in list"));
    }
    if ns.is_empty() || ns[0] == 0 || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain(
            "node counts must be positive and strictly ascending",
        ));
    }
    let methods: Vec<Method> = ns.iter().map(|&n| Method::Kraus(n)).collect();
    run(system, taus, &methods)
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn fit_loglog_slope(xs: &[f64], ys: &[f64]) -> Result<LogLogFit> {
    if xs.len() != ys.len() {
        return Err(Error::dim(format!(
            "{} x values for {} y values",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 3 {
        return Err(Error::domain(format!(
            "need at least 3 points, got {}",
            xs.len()
        )));
    }
    if let Some(v) = xs.iter().chain(ys).find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::domain(format!(
            "log-log fit needs positive values, got {v}"
        )));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::domain("x values are all equal"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(LogLogFit {
        slope,
        intercept,
        r_squared,
    })
}

/// First time at which the error of a single-method time sweep reaches `eps0`.
///
/// Between the bracketing grid points the crossing is interpolated linearly in
/// `(ln τ, ln error)`, falling back to `(ln τ, error)` when the lower error is zero.
/// A sweep that starts above `eps0` crosses at its first point.
pub fn estimate_radius(rows: &[SweepRow], eps0: f64) -> Result<f64> {
    if !(eps0 > 0.0 && eps0.is_finite()) {
        return Err(Error::domain(format!(
            "tolerance must be positive, got {eps0}"
        )));
    }
    let first = rows.first().ok_or_else(|| Error::domain("empty sweep"))?;
    if rows.iter().any(|r| r.method != first.method) {
        return Err(Error::domain("sweep mixes several methods"));
    }
    if rows.windows(2).any(|w| w[0].tau >= w[1].tau) {
        return Err(Error::domain("sweep times must be strictly ascending"));
    }
    if first.error >= eps0 {
        return Ok(first.tau);
    }
    for w in rows.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        if hi.error < eps0 {
            continue;
        }
        let (x0, x1) = (lo.tau.ln(), hi.tau.ln());
        let frac = if lo.error > 0.0 {
            (eps0.ln() - lo.error.ln()) / (hi.error.ln() - lo.error.ln())
        } else {
            (eps0 - lo.error) / (hi.error - lo.error)
        };
        return Ok((x0 + frac * (x1 - x0)).exp());
    }
    Err(Error::OutOfRange(format!(
        "{} error stays below {eps0} up to tau = {} ns",
        first.method,
        rows[rows.len() - 1].tau
    )))
}

/// Rows of one method, in input order.
pub fn select(rows: &[SweepRow], method: Method) -> Vec<SweepRow> {
    rows.iter()
        .filter(|r| r.method == method)
        .copied()
        .collect()
}

fn fmt_float(x: f64) -> String {
    format!("{x:?}")
}

/// Writes the header and one line per row.
pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        let n = r.n().map(|n| n.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{}",
            fmt_float(r.tau),
            r.method.label(),
            n,
            fmt_float(r.error)
        )?;
    }
    Ok(())
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV is ASCII")
}
