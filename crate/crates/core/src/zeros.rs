//! Critical-line zeros of `W(t, χ)`: sign-change scanning, gap statistics, the
//! counting formula, and the gap-chain and Wirtinger harnesses.

use std::f64::consts::PI;

use rayon::prelude::*;
use rug::Float;

use crate::error::{Error, Result};
use crate::lfunc::LFunction;

pub const DEFAULT_REFINE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroList {
    pub modulus: u64,
    pub index: usize,
    pub t_lo: f64,
    pub t_hi: f64,
    pub ordinates: Vec<f64>,
    pub tol: f64,
}

/// Mean-spacing-based default step at height `t`.
pub fn default_step(q: u64, t: f64) -> f64 {
    2.0 * PI / (8.0 * ((q as f64) * (t.abs() + 3.0)).ln())
}

fn sign_of(w: &Float) -> bool {
    !w.is_sign_negative() || w.is_zero()
}

fn bisect(lf: &LFunction, mut lo: f64, mut hi: f64, slo: bool, tol: f64) -> Result<f64> {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = sign_of(&lf.w(&Float::with_val(lf.config().prec, mid))?);
        if s == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Sign changes of `W` on `[t_lo, t_hi]`, each refined by bisection to `tol`.
///
/// Zeros of even multiplicity produce no sign change and are missed.
pub fn scan_zeros(
    lf: &LFunction,
    t_lo: f64,
    t_hi: f64,
    step: Option<f64>,
    tol: f64,
) -> Result<ZeroList> {
    if !(t_lo <= t_hi) {
        return Err(Error::InvalidInput(format!(
            "empty interval [{t_lo}, {t_hi}]"
        )));
    }
    if let Some(h) = step {
        if !(h > 0.0) {
            return Err(Error::InvalidInput("step must be positive".into()));
        }
    }
    let chi = lf.character();
    let mut list = ZeroList {
        modulus: chi.modulus(),
        index: chi.index(),
        t_lo,
        t_hi,
        ordinates: Vec::new(),
        tol,
    };
    if t_lo == t_hi {
        return Ok(list);
    }
    let q = chi.modulus();
    let mut grid = vec![t_lo];
    let mut t = t_lo;
    loop {
        t += step.unwrap_or_else(|| default_step(q, t));
        if t >= t_hi {
            break;
        }
        grid.push(t);
    }
    grid.push(t_hi);

    let prec = lf.config().prec;
    let signs: Vec<bool> = grid
        .par_iter()
        .map(|&t| lf.w(&Float::with_val(prec, t)).map(|w| sign_of(&w)))
        .collect::<Result<_>>()?;
    let brackets: Vec<(f64, f64, bool)> = (0..grid.len() - 1)
        .filter(|&i| signs[i] != signs[i + 1])
        .map(|i| (grid[i], grid[i + 1], signs[i]))
        .collect();
    let mut zeros: Vec<f64> = brackets
        .par_iter()
        .map(|&(a, b, s)| bisect(lf, a, b, s, tol))
        .collect::<Result<_>>()?;
    zeros.sort_by(|a, b| a.total_cmp(b));
    zeros.dedup_by(|b, a| (*b - *a).abs() <= tol);
    list.ordinates = zeros;
    Ok(list)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountCheck {
    pub empirical: usize,
    pub predicted: f64,
    pub residual: f64,
    /// `8 log(qT)`.
    pub envelope: f64,
}

/// Zeros with `|t| < T` against `2[(T/2π) log(Tq/2π) − T/2π]`.
pub fn count_vs_formula(lf: &LFunction, big_t: f64) -> Result<CountCheck> {
    if !(big_t >= 2.0) {
        return Err(Error::InvalidInput("T must be at least 2".into()));
    }
    let q = lf.character().modulus() as f64;
    let z = scan_zeros(lf, -big_t, big_t, None, DEFAULT_REFINE_TOL)?;
    let empirical = z.ordinates.iter().filter(|t| t.abs() < big_t).count();
    let a = big_t / (2.0 * PI);
    let predicted = 2.0 * (a * (big_t * q / (2.0 * PI)).ln() - a);
    Ok(CountCheck {
        empirical,
        predicted,
        residual: empirical as f64 - predicted,
        envelope: 8.0 * (q * big_t).ln(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapReport {
    pub gaps: Vec<f64>,
    pub normalized: Vec<f64>,
    pub factor: f64,
    pub max_normalized: f64,
    pub min_normalized: f64,
    pub count: usize,
}

/// Consecutive gaps, normalized by the mean spacing `2π / log q`.
pub fn gap_report(ordinates: &[f64], q: u64) -> Result<GapReport> {
    if ordinates.len() < 2 {
        return Err(Error::EmptyReport(format!(
            "{} ordinates, need at least 2",
            ordinates.len()
        )));
    }
    if q < 2 {
        return Err(Error::InvalidInput("normalization needs q > 1".into()));
    }
    let factor = (q as f64).ln() / (2.0 * PI);
    let gaps: Vec<f64> = ordinates.windows(2).map(|w| w[1] - w[0]).collect();
    let normalized: Vec<f64> = gaps.iter().map(|g| g * factor).collect();
    let max_normalized = normalized.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_normalized = normalized.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(GapReport {
        count: gaps.len(),
        gaps,
        normalized,
        factor,
        max_normalized,
        min_normalized,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapChain {
    pub ok: bool,
    pub vacuous: bool,
    pub f_zeros: Vec<f64>,
    /// First consecutive pair of `f`-zeros further apart than `κ/log Q`.
    pub witness: Option<(f64, f64)>,
    pub first_ok: bool,
    pub last_ok: bool,
}

/// Zeros of `f` from zeros of `W` and the chain conditions they must satisfy
/// when all `W`-gaps in `[T, 2T]` are at most `3κ/log Q`.
pub fn gap_chain_check(wzeros: &[f64], kappa: f64, big_q: f64, big_t: f64, tol: f64) -> GapChain {
    let h = kappa / big_q.ln();
    if wzeros.len() < 2 {
        return GapChain {
            ok: true,
            vacuous: true,
            f_zeros: Vec::new(),
            witness: None,
            first_ok: true,
            last_ok: true,
        };
    }
    let (lo, hi) = (big_t + h, 2.0 * big_t - h);
    let mut f: Vec<f64> = wzeros
        .iter()
        .flat_map(|&z| [z - h, z, z + h])
        .filter(|&t| t >= lo - tol && t <= hi + tol)
        .collect();
    f.sort_by(|a, b| a.total_cmp(b));
    let witness = f
        .windows(2)
        .find(|w| w[1] - w[0] > h + tol)
        .map(|w| (w[0], w[1]));
    let first_ok = f.first().is_some_and(|&t| t <= big_t + 2.0 * h + tol);
    let last_ok = f.last().is_some_and(|&t| t >= 2.0 * big_t - 2.0 * h - tol);
    GapChain {
        ok: witness.is_none() && first_ok && last_ok,
        vacuous: false,
        f_zeros: f,
        witness,
        first_ok,
        last_ok,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WirtingerReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// Composite Simpson's rule; a trailing 3/8 panel handles an odd panel count.
pub fn simpson(y: &[f64], h: f64) -> f64 {
    let n = y.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (y[0] + y[1]),
        3 => h / 3.0 * (y[0] + 4.0 * y[1] + y[2]),
        _ => {
            let panels = n - 1;
            let (simp_end, tail) = if panels % 2 == 0 {
                (n - 1, false)
            } else {
                (n - 4, true)
            };
            let mut s = y[0] + y[simp_end];
            for (i, v) in y.iter().enumerate().take(simp_end).skip(1) {
                s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
            }
            let mut total = s * h / 3.0;
            if tail {
                let k = simp_end;
                total += 3.0 * h / 8.0 * (y[k] + 3.0 * y[k + 1] + 3.0 * y[k + 2] + y[k + 3]);
            }
            total
        }
    }
}

/// Fourth-order finite differences, one-sided at the two ends.
pub fn derivative(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    assert!(n >= 5);
    let mut d = vec![0.0; n];
    d[0] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / (12.0 * h);
    d[1] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / (12.0 * h);
    for i in 2..n - 2 {
        d[i] = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * h);
    }
    let m = n - 1;
    d[m] = (25.0 * y[m] - 48.0 * y[m - 1] + 36.0 * y[m - 2] - 16.0 * y[m - 3] + 3.0 * y[m - 4])
        / (12.0 * h);
    d[m - 1] =
        (3.0 * y[m] + 10.0 * y[m - 1] - 18.0 * y[m - 2] + 6.0 * y[m - 3] - y[m - 4]) / (12.0 * h);
    d
}

/// `∫y² ≤ ((b−a)/π)² ∫y′²` for `y` sampled uniformly on `[a, b]` with `y(a) = y(b) = 0`.
pub fn wirtinger_check(samples: &[f64], a: f64, b: f64) -> Result<WirtingerReport> {
    if samples.len() < 64 {
        return Err(Error::InvalidInput("need at least 64 samples".into()));
    }
    if !(b > a) {
        return Err(Error::InvalidInput("need a < b".into()));
    }
    let scale = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let end_tol = 1e-6 * scale + 1e-300;
    let (y0, y1) = (samples[0], samples[samples.len() - 1]);
    if y0.abs() > end_tol || y1.abs() > end_tol {
        return Err(Error::EndpointViolation(format!(
            "endpoint values {y0:e}, {y1:e} exceed {end_tol:e}"
        )));
    }
    let h = (b - a) / (samples.len() - 1) as f64;
    let sq: Vec<f64> = samples.iter().map(|v| v * v).collect();
    let lhs = simpson(&sq, h);
    let d: Vec<f64> = derivative(samples, h).iter().map(|v| v * v).collect();
    let rhs = ((b - a) / PI).powi(2) * simpson(&d, h);
    Ok(WirtingerReport {
        lhs,
        rhs,
        ok: lhs <= rhs * (1.0 + 1e-3),
    })
}
