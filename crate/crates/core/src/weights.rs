//! Smooth weights approximating the indicators of `(5/4, 7/4]` and `[T, 2T]`,
//! their sandwich inequalities and the Gaussian tail bounds they rest on.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Float;

use crate::error::{Error, Result};
use crate::lfunc::{gamma, PrecisionConfig};
use crate::mp::{pi, Complex, Prec};

pub const DEFAULT_U: f64 = 0.01;
pub const DEFAULT_EPS_FRACTION: f64 = 0.05;

/// `exp(−u²/x)` for `x > 0`, else 0.
pub fn g(x: f64, u: f64) -> f64 {
    if x > 0.0 {
        (-u * u / x).exp()
    } else {
        0.0
    }
}

fn g_prime(x: f64, u: f64) -> f64 {
    if x > 0.0 {
        u * u / (x * x) * g(x, u)
    } else {
        0.0
    }
}

pub fn psi1(t: f64, u: f64) -> f64 {
    g(t - 1.25, u) * g(1.75 - t, u)
}

pub fn psi2(t: f64, u: f64) -> f64 {
    (2.0 * u).exp() * g(t - (1.25 - u), u) * g((1.75 + u) - t, u)
}

pub fn psi1_prime(t: f64, u: f64) -> f64 {
    g_prime(t - 1.25, u) * g(1.75 - t, u) - g(t - 1.25, u) * g_prime(1.75 - t, u)
}

pub fn psi2_prime(t: f64, u: f64) -> f64 {
    let (a, b) = (t - (1.25 - u), (1.75 + u) - t);
    (2.0 * u).exp() * (g_prime(a, u) * g(b, u) - g(a, u) * g_prime(b, u))
}

#[derive(Clone, Copy, Debug)]
pub struct WeightParams {
    pub u: f64,
    pub eps: f64,
    pub t: f64,
}

impl WeightParams {
    pub fn new(u: f64, eps: f64, t: f64) -> Result<Self> {
        if !(u > 0.0 && u < 1.0 / 16.0) {
            return Err(Error::InvalidConfiguration(format!(
                "u = {u} outside (0, 1/16)"
            )));
        }
        if !(t > 0.0 && eps > 0.0 && eps < t / 10.0) {
            return Err(Error::InvalidConfiguration(format!(
                "ε = {eps} outside (0, T/10) for T = {t}"
            )));
        }
        if t - 2.0 * eps - 2.0 * u.sqrt() <= 0.0 {
            return Err(Error::InvalidConfiguration(
                "Φ₁ integration window is empty".into(),
            ));
        }
        Ok(WeightParams { u, eps, t })
    }

    pub fn with_defaults(t: f64) -> Result<Self> {
        Self::new(DEFAULT_U, DEFAULT_EPS_FRACTION * t, t)
    }

    /// Enough bits to resolve margins of size `exp(−1/u)` next to 1.
    pub fn working_prec(&self) -> Prec {
        (128.0f64).max(1.4427 / self.u + 64.0).ceil() as Prec
    }

    /// `(3T)² − 1/u`, the log of the subtractive constant in `Φ₁`.
    pub fn subtractive_log(&self) -> f64 {
        9.0 * self.t * self.t - 1.0 / self.u
    }

    /// Whether `Φ₁` is close to the indicator rather than trivially negative.
    pub fn phi1_informative(&self) -> bool {
        self.subtractive_log() < 0.0
    }
}

/// Double-exponential quadrature on finite intervals with level doubling.
/// Abscissas and weights for `[−1, 1]` are computed once per instance.
#[derive(Clone, Debug)]
pub struct TanhSinh {
    prec: Prec,
    tol: Float,
    /// Per level: `(weight, 1 − x)` for the new nodes `kh`, `k` odd beyond level 0.
    levels: Vec<Vec<(Float, Float)>>,
}

const MAX_LEVEL: usize = 10;

impl TanhSinh {
    pub fn new(prec: Prec, tol: Float) -> Self {
        // ln w(t) ≈ ln(2π cosh t) − π sinh t; stop where the weights vanish at this precision.
        let target = -((prec + 20) as f64) * std::f64::consts::LN_2;
        let mut t_max = 1.0;
        while (2.0 * std::f64::consts::PI * f64::cosh(t_max)).ln()
            - std::f64::consts::PI * f64::sinh(t_max)
            > target
        {
            t_max += 0.125;
        }
        let p = prec;
        let half_pi = pi(p) / 2u32;
        let node = |t: f64| -> (Float, Float) {
            let tf = Float::with_val(p, t);
            let s = Float::with_val(p, &half_pi * Float::with_val(p, tf.sinh_ref()));
            let ch = Float::with_val(p, s.cosh_ref());
            let w = Float::with_val(p, &half_pi * Float::with_val(p, tf.cosh_ref())) / ch.square();
            // 1 − tanh s = 2/(e^{2s} + 1), kept separate to avoid cancellation at the ends.
            let e2 = Float::with_val(p, Float::with_val(p, &s * 2u32).exp()) + 1u32;
            (w, Float::with_val(p, 2u32) / e2)
        };
        let levels = (0..=MAX_LEVEL)
            .map(|level| {
                let h = 0.5f64.powi(level as i32);
                let (from, step) = if level == 0 { (0, 1) } else { (1, 2) };
                let mut out = Vec::new();
                let mut k = from;
                while k as f64 * h <= t_max {
                    out.push(node(k as f64 * h));
                    k += step;
                }
                out
            })
            .collect();
        TanhSinh { prec, tol, levels }
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    /// `∫_a^b f`, with the last level difference as error estimate.
    pub fn integrate<F>(&self, a: &Float, b: &Float, f: F) -> Result<(Float, Float)>
    where
        F: Fn(&Float) -> Float,
    {
        let p = self.prec;
        let mid = Float::with_val(p, a + b) / 2u32;
        let rad = Float::with_val(p, b - a) / 2u32;
        let sum_level = |level: usize| -> Float {
            let mut acc = Float::new(p);
            for (i, (w, gap)) in self.levels[level].iter().enumerate() {
                if level == 0 && i == 0 {
                    acc += Float::with_val(p, w * f(&mid));
                    continue;
                }
                let d = Float::with_val(p, &rad * gap);
                let right = Float::with_val(p, b - &d);
                let left = Float::with_val(p, a + &d);
                acc += Float::with_val(p, w * (f(&left) + f(&right)));
            }
            acc
        };
        let mut h = Float::with_val(p, 1);
        let mut total = sum_level(0);
        let mut prev = Float::with_val(p, &total * &rad);
        let mut prev_diff: Option<Float> = None;
        for level in 1..=MAX_LEVEL {
            h /= 2u32;
            total += sum_level(level);
            let cur = Float::with_val(p, &total * &rad) * &h;
            let diff = Float::with_val(p, &cur - &prev).abs();
            if level >= 3 && diff <= self.tol {
                return Ok((cur, diff));
            }
            // Each halving roughly squares the error; d_l²/d_{l−1} estimates the next one.
            if let Some(pd) = prev_diff.filter(|pd| *pd > 0 && diff < *pd) {
                let est = Float::with_val(p, diff.square_ref()) / pd;
                if level >= 4 && est <= self.tol {
                    return Ok((cur, est));
                }
            }
            prev = cur;
            prev_diff = Some(diff);
        }
        Err(Error::QuadratureFailure(format!(
            "no convergence after {MAX_LEVEL} levels"
        )))
    }
}

/// `∫_a^b exp(−w²) dw` for `0 ≤ a < b ≤ ∞`, as `exp(−a²) ∫_0 exp(−2as − s²) ds`.
fn gauss_from(a: &Float, b: Option<&Float>, q: &TanhSinh) -> Result<Float> {
    let p = q.prec();
    let k = Float::with_val(p, (p + 20) as f64 * std::f64::consts::LN_2);
    let a2 = Float::with_val(p, a.square_ref());
    let s_max = Float::with_val(p, &a2 + &k).sqrt() - a;
    let s_end = match b {
        Some(b) => {
            let w = Float::with_val(p, b - a);
            if w < s_max {
                w
            } else {
                s_max
            }
        }
        None => s_max,
    };
    if s_end <= 0 {
        return Ok(Float::new(p));
    }
    let two_a = Float::with_val(p, a * 2u32);
    let (i, _) = q.integrate(&Float::new(p), &s_end, |s| {
        let e = Float::with_val(p, &two_a * s) + Float::with_val(p, s.square_ref());
        (-e).exp()
    })?;
    Ok(i * (-a2).exp())
}

/// `∫_lo^hi exp(−w²) dw` for finite `lo < hi`.
///
/// Quadrature only ever sees the relative form `exp(a²) ∫_a exp(−w²)`, so the
/// tolerance of `q` is relative. Straddling windows are `√π` minus the two
/// tails, which keeps the absolute error at working precision.
pub fn gauss_integral(lo: &Float, hi: &Float, q: &TanhSinh) -> Result<Float> {
    let p = q.prec();
    if hi <= lo {
        return Ok(Float::new(p));
    }
    if *lo >= 0 {
        return gauss_from(lo, Some(hi), q);
    }
    if *hi <= 0 {
        let (a, b) = (Float::with_val(p, -hi), Float::with_val(p, -lo));
        return gauss_from(&a, Some(&b), q);
    }
    // A tail past x with x² > (p + 20) ln 2 is below 2^{−p−20}: drop it.
    let cut = (p + 20) as f64 * std::f64::consts::LN_2;
    let tail = |x: Float| -> Result<Float> {
        if x.to_f64().powi(2) > cut {
            Ok(Float::new(p))
        } else {
            gauss_from(&x, None, q)
        }
    };
    let left = tail(Float::with_val(p, -lo))?;
    let right = tail(hi.clone())?;
    Ok(pi(p).sqrt() - left - right)
}

/// Quadrature set up for the weights at `params`: relative tolerance `2^{−p/2}`.
pub fn weight_quadrature(params: &WeightParams) -> TanhSinh {
    let p = params.working_prec();
    TanhSinh::new(p, Float::with_val(p, Float::i_exp(1, -(p as i32) / 2)))
}

fn window_gauss(t: &Float, a: f64, b: f64, u: f64, q: &TanhSinh) -> Result<Float> {
    let p = q.prec();
    let uf = Float::with_val(p, u);
    let lo = (Float::with_val(p, a) - t) / &uf;
    let hi = (Float::with_val(p, b) - t) / &uf;
    let j = gauss_integral(&lo, &hi, q)?;
    Ok(j / pi(p).sqrt())
}

/// `(√π u)⁻¹ ∫_{T+ε+√u}^{2T−ε−√u} exp(−(v−t)²/u²) dv − exp((3T)² − 1/u − t²)`.
pub fn phi1(t: &Float, params: &WeightParams, q: &TanhSinh) -> Result<Float> {
    let su = params.u.sqrt();
    let a = params.t + params.eps + su;
    let b = 2.0 * params.t - params.eps - su;
    let gpart = window_gauss(t, a, b, params.u, q)?;
    Ok(gpart - phi1_subtractive(t, params, q.prec()))
}

/// `exp((3T)² − 1/u − t²)`, evaluated in the log domain.
pub fn phi1_subtractive(t: &Float, params: &WeightParams, p: Prec) -> Float {
    let expo = Float::with_val(p, params.subtractive_log()) - Float::with_val(p, t.square_ref());
    expo.exp()
}

/// `u⁻¹/(√π(1 − e^{−1/u})) ∫_{T−√u}^{2T+√u} exp(−(v−t)²/u²) dv`.
pub fn phi2(t: &Float, params: &WeightParams, q: &TanhSinh) -> Result<Float> {
    let su = params.u.sqrt();
    let gpart = window_gauss(t, params.t - su, 2.0 * params.t + su, params.u, q)?;
    let p = q.prec();
    let denom = 1u32 - Float::with_val(p, -1.0 / params.u).exp();
    Ok(gpart / denom)
}

#[derive(Clone, Debug)]
pub struct InequalityCheck {
    pub name: &'static str,
    pub samples: usize,
    /// Smallest `bigger − smaller` over the samples.
    pub worst_margin: Float,
    pub worst_at: f64,
    /// Evaluation error allowance at the worst sample; margins above `−resolution` count as holding.
    pub resolution: Float,
    /// Every margin is non-negative, not just within resolution.
    pub strict: bool,
    pub ok: bool,
}

fn check_le(name: &'static str, ts: &[f64], lhs: &[Float], rhs: &[Float]) -> InequalityCheck {
    let p = lhs.first().map_or(64, |x| x.prec());
    let unit = Float::with_val(p, Float::i_exp(1, 32 - p as i32));
    let mut ok = true;
    let mut strict = true;
    let mut worst: Option<(Float, f64, Float)> = None;
    for ((t, l), r) in ts.iter().zip(lhs).zip(rhs) {
        let m = Float::with_val(p, r - l);
        let scale = [
            Float::with_val(p, 1),
            Float::with_val(p, l.abs_ref()),
            Float::with_val(p, r.abs_ref()),
        ]
        .into_iter()
        .fold(Float::new(p), |a, b| if b > a { b } else { a });
        let res = Float::with_val(p, &unit * &scale);
        if m < 0 {
            strict = false;
            if Float::with_val(p, &m + &res) < 0 {
                ok = false;
            }
        }
        if worst.as_ref().map_or(true, |(w, _, _)| m < *w) {
            worst = Some((m, *t, res));
        }
    }
    let (worst_margin, worst_at, resolution) =
        worst.unwrap_or((Float::new(p), f64::NAN, Float::new(p)));
    InequalityCheck {
        name,
        samples: ts.len(),
        worst_margin,
        worst_at,
        resolution,
        strict,
        ok,
    }
}

fn indicator(p: Prec, inside: bool, height: &Float) -> Float {
    if inside {
        height.clone()
    } else {
        Float::new(p)
    }
}

pub const DEFAULT_GRID: usize = 2001;

fn sample_points(lo: f64, hi: f64, grid: usize, random: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut ts: Vec<f64> = (0..grid)
        .map(|i| lo + (hi - lo) * i as f64 / (grid.max(2) - 1) as f64)
        .collect();
    ts.extend((0..random).map(|_| rng.gen_range(lo..hi)));
    ts
}

#[derive(Clone, Debug)]
pub struct Reasonableness {
    pub n1_psi1: f64,
    pub n1_psi2: f64,
    pub n2_psi1: f64,
    pub n2_psi2: f64,
    /// `max_t Φ(t) e^{t²}` over the samples.
    pub n3_phi1: Float,
    pub n3_phi2: Float,
}

#[derive(Clone, Debug)]
pub struct WeightReport {
    pub params: WeightParams,
    pub prec: Prec,
    pub phi1_informative: bool,
    pub checks: Vec<InequalityCheck>,
    pub reasonableness: Reasonableness,
}

impl WeightReport {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

/// All sandwich inequalities on a uniform grid of `grid` points plus `random`
/// seeded random points, for `Ψ` on `[0.9, 2.1]` and `Φ` on `[−3T, 6T]`.
pub fn check_weights(
    params: &WeightParams,
    grid: usize,
    random: usize,
    seed: u64,
) -> Result<WeightReport> {
    if grid < 2 {
        return Err(Error::InvalidInput("need at least 2 grid points".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = params.u;
    let q = weight_quadrature(params);
    let p = q.prec();
    let fl = |x: f64| Float::with_val(p, x);

    let ts = sample_points(0.9, 2.1, grid, random, &mut rng);
    let p1: Vec<Float> = ts.iter().map(|&t| fl(psi1(t, u))).collect();
    let p2: Vec<Float> = ts.iter().map(|&t| fl(psi2(t, u))).collect();
    let one = fl(1.0);
    let in_open = |t: f64| t > 1.25 && t <= 1.75;
    let chi: Vec<Float> = ts.iter().map(|&t| indicator(p, in_open(t), &one)).collect();
    let low = fl((-2.0 * u).exp());
    let high = fl((2.0 * u).exp());
    let chi_low: Vec<Float> = ts
        .iter()
        .map(|&t| indicator(p, (1.25 + u..=1.75 - u).contains(&t), &low))
        .collect();
    let chi_high: Vec<Float> = ts
        .iter()
        .map(|&t| indicator(p, (1.25 - u..=1.75 + u).contains(&t), &high))
        .collect();
    let mut checks = vec![
        check_le("psi1 <= 1_(5/4,7/4]", &ts, &p1, &chi),
        check_le("psi1 >= exp(-2u) 1_[5/4+u,7/4-u]", &ts, &chi_low, &p1),
        check_le("psi2 >= 1_(5/4,7/4]", &ts, &chi, &p2),
        check_le("psi2 <= exp(2u) 1_[5/4-u,7/4+u]", &ts, &p2, &chi_high),
    ];
    let n1_psi1 = ts.iter().map(|&t| psi1(t, u)).fold(0.0, f64::max);
    let n1_psi2 = ts.iter().map(|&t| psi2(t, u)).fold(0.0, f64::max);
    let n2_psi1 = ts
        .iter()
        .map(|&t| psi1_prime(t, u).abs())
        .fold(0.0, f64::max);
    let n2_psi2 = ts
        .iter()
        .map(|&t| psi2_prime(t, u).abs())
        .fold(0.0, f64::max);

    let big_t = params.t;
    let ts = sample_points(-3.0 * big_t, 6.0 * big_t, grid, random, &mut rng);
    let f1: Vec<Float> = ts
        .par_iter()
        .map(|&t| phi1(&fl(t), params, &q))
        .collect::<Result<_>>()?;
    let f2: Vec<Float> = ts
        .par_iter()
        .map(|&t| phi2(&fl(t), params, &q))
        .collect::<Result<_>>()?;
    let sub = Float::with_val(p, params.subtractive_log()).exp();

    let chi1: Vec<Float> = ts
        .iter()
        .map(|&t| {
            indicator(
                p,
                (big_t + params.eps..=2.0 * big_t - params.eps).contains(&t),
                &one,
            )
        })
        .collect();
    checks.push(check_le("phi1 <= 1_[T+eps,2T-eps]", &ts, &f1, &chi1));

    let su2 = 2.0 * u.sqrt();
    let inner = big_t + params.eps + su2..=2.0 * big_t - params.eps - su2;
    let lower1: Vec<Float> = ts
        .iter()
        .map(|&t| {
            if inner.contains(&t) {
                1u32 - Float::with_val(p, &sub * 2u32)
            } else {
                -phi1_subtractive(&fl(t), params, p)
            }
        })
        .collect();
    checks.push(check_le(
        "phi1 >= (1-2E) 1_inner - E exp(-t^2) 1_outer",
        &ts,
        &lower1,
        &f1,
    ));

    let chi2: Vec<Float> = ts
        .iter()
        .map(|&t| indicator(p, (big_t..=2.0 * big_t).contains(&t), &one))
        .collect();
    checks.push(check_le("phi2 >= 1_[T,2T]", &ts, &chi2, &f2));

    let cap = 1u32 / (1u32 - Float::with_val(p, -1.0 / u).exp());
    let outer = big_t - su2..=2.0 * big_t + su2;
    let upper2: Vec<Float> = ts
        .iter()
        .map(|&t| {
            if outer.contains(&t) {
                cap.clone()
            } else {
                phi1_subtractive(&fl(t), params, p)
            }
        })
        .collect();
    let (in_ts, in_f2, in_up): (Vec<f64>, Vec<Float>, Vec<Float>) = {
        let mut a = (Vec::new(), Vec::new(), Vec::new());
        for ((t, f), up) in ts.iter().zip(&f2).zip(&upper2) {
            if outer.contains(t) {
                a.0.push(*t);
                a.1.push(f.clone());
                a.2.push(up.clone());
            }
        }
        a
    };
    checks.push(check_le(
        "phi2 <= 1/(1-exp(-1/u)) on [T-2sqrt(u),2T+2sqrt(u)]",
        &in_ts,
        &in_f2,
        &in_up,
    ));
    checks.push(check_le(
        "phi2 <= E exp(-t^2) off [T-2sqrt(u),2T+2sqrt(u)]",
        &ts,
        &f2,
        &upper2,
    ));

    let n3 = |f: &[Float]| {
        ts.iter()
            .zip(f)
            .map(|(&t, v)| Float::with_val(p, v * Float::with_val(p, t * t).exp()))
            .fold(Float::new(p), |m, x| if x > m { x } else { m })
    };
    let reasonableness = Reasonableness {
        n1_psi1,
        n1_psi2,
        n2_psi1,
        n2_psi2,
        n3_phi1: n3(&f1),
        n3_phi2: n3(&f2),
    };
    Ok(WeightReport {
        params: *params,
        prec: p,
        phi1_informative: params.phi1_informative(),
        checks,
        reasonableness,
    })
}

#[derive(Clone, Debug)]
pub struct ErfcCheck {
    pub x: f64,
    pub erfc: Float,
    pub bound: Float,
    pub ok: bool,
}

/// `erfc(x) = 2/√π ∫_x^∞ e^{−t²} dt` by quadrature against `exp(−x²)`.
pub fn erfc_bound_check(x: f64, prec: Prec) -> Result<ErfcCheck> {
    if !(x >= 0.0) {
        return Err(Error::InvalidInput("erfc bound needs x ≥ 0".into()));
    }
    let q = TanhSinh::new(
        prec,
        Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 16)),
    );
    let xf = Float::with_val(prec, x);
    let tail = gauss_from(&xf, None, &q)?;
    let erfc = tail * 2u32 / pi(prec).sqrt();
    let bound = Float::with_val(prec, -Float::with_val(prec, xf.square_ref())).exp();
    let slack = Float::with_val(prec, &bound * (1.0 + 1e-12));
    Ok(ErfcCheck {
        x,
        ok: erfc <= slack,
        erfc,
        bound,
    })
}

#[derive(Clone, Debug)]
pub struct TailCheck {
    pub q: f64,
    /// `∫_{log Q}^∞ e^{−t²} |Γ((1/2+it)/2)|⁶ dt`.
    pub integral: Float,
    /// `Γ(1/4)⁶ · (√π/2) · exp(−(log Q)²)` via the erfc bound.
    pub chernoff_bound: Float,
    pub target: Float,
    pub ok: bool,
}

/// Tail of the Γ-weighted integral for a weight with `Φ(t) ≤ exp(−t²)`.
pub fn gamma_tail_check(q_big: f64, prec: Prec) -> Result<TailCheck> {
    if !(q_big >= 20.0) {
        return Err(Error::InvalidInput("tail check needs Q ≥ 20".into()));
    }
    let cfg = PrecisionConfig::new(prec);
    let quad = TanhSinh::new(
        prec,
        Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2)),
    );
    let l = Float::with_val(prec, q_big).ln();
    let l2 = Float::with_val(prec, l.square_ref());
    let k = Float::with_val(prec, (prec + 20) as f64 * std::f64::consts::LN_2);
    let s_end = Float::with_val(prec, &l2 + &k).sqrt() - &l;
    let two_l = Float::with_val(prec, &l * 2u32);
    let quarter = Float::with_val(prec, 0.25);
    let err: std::cell::RefCell<Option<Error>> = std::cell::RefCell::new(None);
    let (i, _) = quad.integrate(&Float::new(prec), &s_end, |s| {
        let t = Float::with_val(prec, &l + s);
        let z = Complex::new(quarter.clone(), t / 2u32);
        let gz = match gamma(&z, &cfg) {
            Ok(v) => v.value,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                return Float::new(prec);
            }
        };
        let a2 = gz.norm_sqr();
        let e = Float::with_val(prec, &two_l * s) + Float::with_val(prec, s.square_ref());
        Float::with_val(prec, a2.square_ref()) * &a2 * (-e).exp()
    })?;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    let integral = i * Float::with_val(prec, -&l2).exp();
    let g14 = gamma(&Complex::from_real(quarter), &cfg)?.value.re;
    let chernoff_bound = Float::with_val(prec, g14.pow_ref_u(6)) * pi(prec).sqrt() / 2u32
        * Float::with_val(prec, -&l2).exp();
    let target = Float::with_val(prec, -l2 / 2u32).exp();
    Ok(TailCheck {
        q: q_big,
        ok: integral < target,
        integral,
        chernoff_bound,
        target,
    })
}

trait PowU {
    fn pow_ref_u(&self, n: u32) -> Float;
}

impl PowU for Float {
    fn pow_ref_u(&self, n: u32) -> Float {
        let mut r = Float::with_val(self.prec(), 1);
        for _ in 0..n {
            r *= self;
        }
        r
    }
}
