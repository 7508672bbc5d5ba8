//! Closed-form error rates of the uncoded 4-level cell and of the 5-level
//! parity-coded word under exponential read tails.
//!
//! Everything is expressed through the dimensionless products `a*D0`
//! (level margin times tail exponent) and `a*W` (program width times tail
//! exponent), together with the tail fraction `T`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A channel operating point in dimensionless form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelPoint {
    pub a_delta0: f64,
    pub a_w: f64,
    pub tail: f64,
    pub n_cells: u32,
    pub bits_per_cell: u32,
}

impl ChannelPoint {
    pub fn new(a_delta0: f64, a_w: f64, tail: f64) -> Result<Self> {
        let point = Self { a_delta0, a_w, tail, n_cells: 4, bits_per_cell: 2 };
        point.validate()?;
        Ok(point)
    }

    /// Point given by `exp(-a*D0)` instead of `a*D0`.
    pub fn from_exp_margin(exp_margin: f64, a_w: f64, tail: f64) -> Result<Self> {
        if !(exp_margin > 0.0 && exp_margin < 1.0) {
            return Err(Error::Domain(format!("exp(-a*D0) must be in (0, 1), got {exp_margin}")));
        }
        Self::new(-exp_margin.ln(), a_w, tail)
    }

    /// Point from dimensional parameters: slope `a` (1/V), margin and width (V).
    pub fn from_dimensional(a: f64, delta0: f64, w: f64, tail: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::Domain(format!("tail slope a must be > 0, got {a}")));
        }
        Self::new(a * delta0, a * w, tail)
    }

    fn validate(&self) -> Result<()> {
        if !(self.a_delta0.is_finite() && self.a_delta0 > 0.0) {
            return Err(Error::Domain(format!("a*D0 must be > 0, got {}", self.a_delta0)));
        }
        if !(self.a_w.is_finite() && self.a_w >= 0.0) {
            return Err(Error::Domain(format!("a*W must be >= 0, got {}", self.a_w)));
        }
        if !(0.0..=1.0).contains(&self.tail) {
            return Err(Error::Domain(format!("tail fraction must be in [0, 1], got {}", self.tail)));
        }
        if self.a_delta() <= 0.0 {
            return Err(Error::Domain(format!("5-level margin is not positive: 3*{} <= {}", self.a_delta0, self.a_w)));
        }
        Ok(())
    }

    /// `a*D` for the 5-level grid occupying the 4-level window.
    pub fn a_delta(&self) -> f64 {
        (3.0 * self.a_delta0 - self.a_w) / 4.0
    }

    pub fn exp_margin(&self) -> f64 {
        (-self.a_delta0).exp()
    }

    fn bits_per_word(&self) -> f64 {
        (self.n_cells * self.bits_per_cell) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineRates {
    /// Per-cell read error probability of the 4-level cell.
    pub p0: f64,
    /// Per-bit error rate of an uncoded word, exact form.
    pub e0: f64,
    /// Small-`P0` form `T exp(-a*D0) / 2`.
    pub e0_approx: f64,
}

pub fn baseline_rates(point: &ChannelPoint) -> BaselineRates {
    let p0 = point.tail * point.exp_margin();
    // 1 - (1 - p0)^N without cancellation for tiny p0
    let word = -((point.n_cells as f64) * (-p0).ln_1p()).exp_m1();
    BaselineRates { p0, e0: word / point.bits_per_word(), e0_approx: 0.5 * point.tail * point.exp_margin() }
}

/// Error budget of the 5-level coded word, split by error mechanism.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub p0: f64,
    pub e0: f64,
    /// Two cells each off by one level: parity passes, error undetected.
    pub e2_i: f64,
    /// One cell drifts past the midpoint to the next-but-one level.
    pub e2_ii: f64,
    /// Correction moves one cell up and another down.
    pub e2_iii: f64,
    pub e2_total: f64,
    /// `e2_total / e0`.
    pub ratio: f64,
}

pub fn protected_rates(point: &ChannelPoint) -> ErrorBudget {
    let base = baseline_rates(point);
    let t = point.tail;
    let ad = point.a_delta();
    let pair = t * t * (-2.0 * ad).exp();
    let e2_i = 0.375 * pair;
    let e2_ii = 0.5 * t * (-2.0 * ad - point.a_w).exp();
    let e2_iii = 0.75 * ad * pair;
    let e2_total = e2_i + e2_ii + e2_iii;
    let ratio = if base.e0 > 0.0 { e2_total / base.e0 } else { 0.0 };
    ErrorBudget { p0: base.p0, e0: base.e0, e2_i, e2_ii, e2_iii, e2_total, ratio }
}

/// `E2/E0 ~ exp(-a*D0) + (3/4) a*D0 T`, the estimate for `W ~ D0`.
pub fn ratio_approximation(point: &ChannelPoint) -> f64 {
    point.exp_margin() + 0.75 * point.a_delta0 * point.tail
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `T << exp(-a*W)`: single-cell double steps dominate.
    TailDominated,
    /// `exp(-a*W) << T`: two-cell swaps dominate.
    SwapDominated,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeForms {
    pub tail_dominated: f64,
    pub swap_dominated: f64,
    pub regime: Regime,
}

/// Separation factor used to call one side of `T` vs `exp(-a*W)` dominant.
pub const REGIME_SEPARATION: f64 = 10.0;

pub fn regime_approximations(point: &ChannelPoint) -> RegimeForms {
    let t = point.tail;
    let ad0 = point.a_delta0;
    let aw = point.a_w;
    let e0 = 0.5 * t * point.exp_margin();
    let tail_dominated = 0.5 * t * (-1.5 * ad0 - 0.5 * aw).exp();
    let swap_dominated = 1.5 * ((3.0 * ad0 - aw) / 4.0) * t * (-(ad0 - aw) / 2.0).exp() * e0;
    let ew = (-aw).exp();
    let regime = if t * REGIME_SEPARATION <= ew {
        Regime::TailDominated
    } else if ew * REGIME_SEPARATION <= t {
        Regime::SwapDominated
    } else {
        Regime::Mixed
    };
    RegimeForms { tail_dominated, swap_dominated, regime }
}

/// `E0^(3/2)`, the asymptotic coded rate for pure exponential noise.
pub fn scaling_law(e0: f64) -> f64 {
    e0.powf(1.5)
}

/// Information capacity in bits per cell of a code with `codeword_count`
/// words over `n_cells` cells.
pub fn capacity(n_cells: u32, codeword_count: f64) -> Result<f64> {
    if n_cells == 0 {
        return Err(Error::Domain("need at least one cell".into()));
    }
    if codeword_count.is_nan() || codeword_count < 1.0 {
        return Err(Error::Domain(format!("codeword count must be >= 1, got {codeword_count}")));
    }
    Ok(codeword_count.log2() / n_cells as f64)
}

/// Number of integer points in the `dim`-dimensional L1 ball of `radius`.
pub fn cross_polytope_points(dim: u32, radius: u32) -> u64 {
    // sum_i 2^i C(dim, i) C(radius, i)
    let binom = |n: u64, k: u64| -> u64 {
        if k > n {
            return 0;
        }
        (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
    };
    (0..=dim.min(radius) as u64).map(|i| (1u64 << i) * binom(dim as u64, i) * binom(radius as u64, i)).sum()
}

/// Sphere-packing bound on the word count of a 4-cell code with minimum
/// Manhattan distance 3: `n^4` points over unit cross-polytopes.
pub fn md3_codeword_bound(n_levels: u32) -> f64 {
    (n_levels as f64).powi(4) / cross_polytope_points(4, 1) as f64
}

/// How the coded rate of the reference table is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableMethod {
    /// Full error budget at `a*W = a*D0`.
    Budget,
    /// `E0` times [`ratio_approximation`].
    Approximation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub exp_margin: f64,
    pub tail: f64,
    pub e0: f64,
    pub e2: f64,
    pub ratio: f64,
}

pub const TABLE1_EXP_MARGINS: [f64; 3] = [1e-2, 1e-3, 1e-4];
pub const TABLE1_TAILS: [f64; 4] = [1e-3, 1e-5, 1e-7, 1e-9];

pub fn table1() -> Vec<TableRow> {
    table1_with(TableMethod::Budget)
}

pub fn table1_with(method: TableMethod) -> Vec<TableRow> {
    let mut rows = Vec::with_capacity(12);
    for &em in &TABLE1_EXP_MARGINS {
        for &t in &TABLE1_TAILS {
            let ad0 = -em.ln();
            let point = ChannelPoint::new(ad0, ad0, t).expect("table grid is in domain");
            let e0 = baseline_rates(&point).e0;
            let (e2, ratio) = match method {
                TableMethod::Budget => {
                    let b = protected_rates(&point);
                    (b.e2_total, b.ratio)
                }
                TableMethod::Approximation => {
                    let r = ratio_approximation(&point);
                    (e0 * r, r)
                }
            };
            rows.push(TableRow { exp_margin: em, tail: t, e0, e2, ratio });
        }
    }
    rows
}

/// Least-squares slope of `ln y` against `ln x`. `None` with fewer than two
/// usable points or no spread in `x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= f64::EPSILON * n {
        return None;
    }
    Some(sxy / sxx)
}
