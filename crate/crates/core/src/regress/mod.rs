//! Context ease vs. informativeness regressions.
//!
//! `fit_ols` is the classical least-squares baseline. `fit_random_intercept`
//! fits `y = b0 + b1 * x + u_g + e` with `u_g ~ N(0, s2_group)` and
//! `e ~ N(0, s2_resid)` by maximum likelihood. For a fixed variance ratio
//! `theta = s2_group / s2_resid` the fixed effects are a GLS solve and the
//! residual variance has a closed form, so the likelihood is profiled down to
//! one dimension and maximised over `log(1 + theta)` with golden-section
//! search. Only a single grouping factor with random intercepts is modelled.

mod golden;

pub use golden::{maximize, GoldenMax};

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Upper end of the variance-ratio search.
pub const THETA_MAX: f64 = 1e3;
/// Absolute tolerance on the fitted variance ratio.
pub const THETA_TOL: f64 = 1e-8;
const GRID: usize = 48;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionRow {
    pub i_w: f64,
    pub ease: f64,
    pub group: String,
}

impl RegressionRow {
    pub fn new(i_w: f64, ease: f64, group: impl Into<String>) -> Self {
        Self {
            i_w,
            ease,
            group: group.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    Ols,
    RandomIntercept,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub method: FitMethod,
    pub intercept: f64,
    pub slope: f64,
    pub se_intercept: f64,
    pub se_slope: f64,
    pub t_slope: f64,
    /// Two-sided normal approximation.
    pub p_slope: f64,
    pub sigma2_residual: f64,
    pub sigma2_group: f64,
    /// Fitted `sigma2_group / sigma2_residual`; 0 for OLS.
    pub theta: f64,
    pub n: usize,
    pub n_groups: usize,
    pub converged: bool,
    /// Every group had one row, so the grouping carried no information and
    /// the OLS fit was returned.
    pub degenerate_grouping: bool,
    pub loglik: f64,
    pub diagnostics: Vec<String>,
}

fn p_two_sided(t: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    erfc(t.abs() / std::f64::consts::SQRT_2)
}

fn check_rows(rows: &[RegressionRow]) -> Result<()> {
    if rows.len() < 3 {
        return Err(Error::TooFewRows {
            needed: 3,
            got: rows.len(),
        });
    }
    if let Some(r) = rows
        .iter()
        .find(|r| !(r.i_w.is_finite() && r.ease.is_finite()))
    {
        return Err(Error::InvalidArgument(format!("non-finite row {r:?}")));
    }
    Ok(())
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let mut n = 0usize;
    let mut s = 0.0;
    for x in xs {
        n += 1;
        s += x;
    }
    s / n as f64
}

/// Least squares with classical standard errors (`s^2 = RSS / (n - 2)`).
pub fn fit_ols(rows: &[RegressionRow]) -> Result<FitResult> {
    check_rows(rows)?;
    let n = rows.len();
    let nf = n as f64;
    let xbar = mean(rows.iter().map(|r| r.ease));
    let ybar = mean(rows.iter().map(|r| r.i_w));
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for r in rows {
        let dx = r.ease - xbar;
        sxx += dx * dx;
        sxy += dx * (r.i_w - ybar);
    }
    if sxx <= f64::EPSILON * nf * xbar.abs().max(1.0).powi(2) {
        return Err(Error::RankDeficient);
    }
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let rss: f64 = rows
        .iter()
        .map(|r| {
            let e = r.i_w - intercept - slope * r.ease;
            e * e
        })
        .sum();
    let s2 = rss / (nf - 2.0);
    let se_slope = (s2 / sxx).sqrt();
    let se_intercept = (s2 * (1.0 / nf + xbar * xbar / sxx)).sqrt();
    let t_slope = slope / se_slope;
    let n_groups = rows
        .iter()
        .map(|r| r.group.as_str())
        .collect::<std::collections::BTreeSet<_>>()
        .len();
    Ok(FitResult {
        method: FitMethod::Ols,
        intercept,
        slope,
        se_intercept,
        se_slope,
        t_slope,
        p_slope: p_two_sided(t_slope),
        sigma2_residual: s2,
        sigma2_group: 0.0,
        theta: 0.0,
        n,
        n_groups,
        converged: true,
        degenerate_grouping: false,
        loglik: -0.5 * nf * ((2.0 * PI * rss / nf).ln() + 1.0),
        diagnostics: Vec::new(),
    })
}

/// Data centred on the global means, stored group by group.
struct Grouped {
    xbar: f64,
    ybar: f64,
    /// (x, y) pairs per group, in order of first appearance of the group key.
    groups: Vec<Vec<(f64, f64)>>,
    n: usize,
}

impl Grouped {
    fn new(rows: &[RegressionRow]) -> Self {
        let xbar = mean(rows.iter().map(|r| r.ease));
        let ybar = mean(rows.iter().map(|r| r.i_w));
        let mut index: BTreeMap<&str, usize> = BTreeMap::new();
        let mut groups: Vec<Vec<(f64, f64)>> = Vec::new();
        for r in rows {
            let next = groups.len();
            let g = *index.entry(r.group.as_str()).or_insert(next);
            if g == groups.len() {
                groups.push(Vec::new());
            }
            groups[g].push((r.ease - xbar, r.i_w - ybar));
        }
        Self {
            xbar,
            ybar,
            groups,
            n: rows.len(),
        }
    }
}

/// GLS solution and profiled quantities at a fixed variance ratio.
struct Profile {
    /// Coefficients on the centred scale: (intercept, slope).
    beta: [f64; 2],
    /// Inverse of X' W X.
    inv: [[f64; 2]; 2],
    sigma2: f64,
    loglik: f64,
}

fn profile(data: &Grouped, theta: f64) -> Option<Profile> {
    let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut logdet = 0.0;
    for g in &data.groups {
        let ng = g.len() as f64;
        let c = theta / (1.0 + ng * theta);
        let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
        for &(x, y) in g {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        a11 += ng - c * ng * ng;
        a12 += sx * (1.0 - c * ng);
        a22 += sxx - c * sx * sx;
        b1 += sy * (1.0 - c * ng);
        b2 += sxy - c * sx * sy;
        logdet += (1.0 + ng * theta).ln();
    }
    let det = a11 * a22 - a12 * a12;
    if !(det.is_finite() && det > 0.0) {
        return None;
    }
    let inv = [[a22 / det, -a12 / det], [-a12 / det, a11 / det]];
    let beta = [
        inv[0][0] * b1 + inv[0][1] * b2,
        inv[1][0] * b1 + inv[1][1] * b2,
    ];
    let mut rss = 0.0;
    for g in &data.groups {
        let ng = g.len() as f64;
        let c = theta / (1.0 + ng * theta);
        let (mut ss, mut s) = (0.0, 0.0);
        for &(x, y) in g {
            let e = y - beta[0] - beta[1] * x;
            ss += e * e;
            s += e;
        }
        rss += ss - c * s * s;
    }
    let n = data.n as f64;
    let sigma2 = rss / n;
    let loglik = -0.5 * (n * (2.0 * PI * sigma2).ln() + n + logdet);
    Some(Profile {
        beta,
        inv,
        sigma2,
        loglik,
    })
}

/// Profiled log-likelihood of the random-intercept model at a given ratio.
pub fn profiled_loglik(rows: &[RegressionRow], theta: f64) -> Result<f64> {
    check_rows(rows)?;
    profile(&Grouped::new(rows), theta)
        .map(|p| p.loglik)
        .ok_or(Error::RankDeficient)
}

/// Maximum-likelihood random-intercept fit grouped by `RegressionRow::group`.
pub fn fit_random_intercept(rows: &[RegressionRow]) -> Result<FitResult> {
    let ols = fit_ols(rows)?;
    let data = Grouped::new(rows);
    let n_groups = data.groups.len();
    if n_groups < 2 {
        return Err(Error::InvalidArgument(format!(
            "random-intercept model needs at least 2 groups, got {n_groups}"
        )));
    }
    if data.groups.iter().all(|g| g.len() == 1) {
        return Ok(FitResult {
            method: FitMethod::RandomIntercept,
            degenerate_grouping: true,
            diagnostics: vec!["every group has a single row; returning the OLS fit".into()],
            ..ols
        });
    }

    let ll = |phi: f64| {
        profile(&data, phi.exp_m1())
            .map(|p| p.loglik)
            .unwrap_or(f64::NEG_INFINITY)
    };
    // coarse scan guards against a non-unimodal profile, golden section refines
    let phi_max = THETA_MAX.ln_1p();
    let grid: Vec<f64> = (0..=GRID)
        .map(|i| phi_max * i as f64 / GRID as f64)
        .collect();
    let values: Vec<f64> = grid.iter().map(|&p| ll(p)).collect();
    let best = (0..values.len())
        .max_by(|&i, &j| values[i].total_cmp(&values[j]).then(j.cmp(&i)))
        .unwrap();
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(GRID)];
    let tol = THETA_TOL / (1.0 + hi.exp_m1());
    let search = maximize(ll, lo, hi, tol, 400);

    let mut diagnostics = Vec::new();
    let (mut phi, mut converged) = (search.x, search.converged);
    if !converged {
        diagnostics.push(format!(
            "golden-section search stopped after {} iterations",
            search.iterations
        ));
    }
    if values[0] >= search.fx {
        phi = 0.0;
    }
    let theta = phi.exp_m1();
    if best == GRID || THETA_MAX - theta <= THETA_TOL * THETA_MAX {
        converged = false;
        diagnostics.push(format!(
            "variance ratio hit the search bound {THETA_MAX}; the group variance dominates"
        ));
    }
    let p = profile(&data, theta).ok_or(Error::RankDeficient)?;
    let [b0c, slope] = p.beta;
    let intercept = data.ybar + b0c - slope * data.xbar;
    let var_slope = p.sigma2 * p.inv[1][1];
    let x = data.xbar;
    let var_intercept = p.sigma2 * (p.inv[0][0] - 2.0 * x * p.inv[0][1] + x * x * p.inv[1][1]);
    let se_slope = var_slope.sqrt();
    let t_slope = slope / se_slope;
    Ok(FitResult {
        method: FitMethod::RandomIntercept,
        intercept,
        slope,
        se_intercept: var_intercept.sqrt(),
        se_slope,
        t_slope,
        p_slope: p_two_sided(t_slope),
        sigma2_residual: p.sigma2,
        sigma2_group: theta * p.sigma2,
        theta,
        n: rows.len(),
        n_groups,
        converged,
        degenerate_grouping: false,
        loglik: p.loglik,
        diagnostics,
    })
}

/// Sample Pearson correlation.
pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 3 {
        return Err(Error::TooFewRows {
            needed: 3,
            got: x.len(),
        });
    }
    let mx = mean(x.iter().copied());
    let my = mean(y.iter().copied());
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
        sxy += (a - mx) * (b - my);
    }
    if sxx == 0.0 {
        return Err(Error::ZeroVariance("x"));
    }
    if syy == 0.0 {
        return Err(Error::ZeroVariance("y"));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}
