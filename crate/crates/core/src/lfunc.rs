//! Hurwitz zeta, Dirichlet L, Γ, the completed function ξ, the root number and
//! the real-valued rotation W on the critical line.

use std::sync::Mutex;

use rug::{Float, Integer, Rational};

use crate::characters::{gauss_sum, DirichletCharacter};
use crate::error::{Error, Result};
use crate::mp::{pi, Complex, Prec};

static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// Bernoulli numbers `B_0 ..= B_n` (with `B_1 = -1/2`).
pub fn bernoulli(n: usize) -> Vec<Rational> {
    let mut cache = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    if cache.is_empty() {
        cache.push(Rational::from(1));
    }
    while cache.len() <= n {
        let m = cache.len() as u32;
        let mut acc = Rational::new();
        let mut binom = Integer::from(1);
        for (j, b) in cache.iter().enumerate() {
            acc += Rational::from(b * &binom);
            binom *= m + 1 - j as u32;
            binom /= j as u32 + 1;
        }
        cache.push(-acc / (m + 1));
    }
    cache[..=n].to_vec()
}

/// `B_{2k} / (2k)!` for `k = 1 ..= kmax`, as floats.
fn bernoulli_over_factorial(kmax: usize, prec: Prec) -> Vec<Float> {
    let b = bernoulli(2 * kmax);
    let mut fact = Integer::from(1);
    let mut out = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        fact *= (2 * k - 1) as u32;
        fact *= (2 * k) as u32;
        out.push(Float::with_val(
            prec,
            &b[2 * k] / Rational::from(fact.clone()),
        ));
    }
    out
}

fn ln_abs_f64(x: &Float) -> f64 {
    if x.is_zero() {
        f64::NEG_INFINITY
    } else {
        Float::with_val(64, x.abs_ref()).ln().to_f64()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrecisionConfig {
    pub prec: Prec,
    /// Euler–Maclaurin shift `M`; `None` picks `max(20, ⌈1.3|t|⌉)`.
    pub shift: Option<u64>,
    pub bernoulli: usize,
    pub tol: f64,
}

impl PrecisionConfig {
    pub fn new(prec: Prec) -> Self {
        PrecisionConfig {
            prec,
            shift: None,
            bernoulli: 30,
            tol: 2f64.powi(-(prec as i32) + 16),
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol >= 2f64.powi(-(self.prec as i32) + 16)) {
            return Err(Error::InvalidInput(format!(
                "tolerance {tol:e} is below 2^(16-{})",
                self.prec
            )));
        }
        self.tol = tol;
        Ok(self)
    }

    fn shift_for(&self, t: f64) -> u64 {
        self.shift
            .unwrap_or_else(|| 20u64.max((1.3 * t.abs()).ceil() as u64))
    }

    fn guard(&self) -> Prec {
        self.prec + 16
    }
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig::new(128)
    }
}

/// A computed value with its achieved error estimate.
#[derive(Clone, Debug)]
pub struct CriticalValue {
    pub point: Complex,
    pub value: Complex,
    pub err: f64,
}

/// Smallest Euler–Maclaurin shift meeting the tolerance, and its remainder bound.
fn hurwitz_plan(s: &Complex, cfg: &PrecisionConfig) -> Result<(u64, f64)> {
    let b = cfg.bernoulli;
    let sigma = s.re.to_f64();
    let t = s.im.to_f64();
    let denom = sigma + 2.0 * b as f64 + 1.0;
    if denom <= 0.0 {
        return Err(Error::InsufficientPrecision(format!(
            "Re s = {sigma} too negative for {b} Bernoulli terms"
        )));
    }
    let coef = &bernoulli_over_factorial(b + 1, 64)[b];
    let mut log_poch = 0.0;
    for j in 0..=(2 * b) {
        log_poch += ((sigma + j as f64).powi(2) + t * t).sqrt().ln();
    }
    let next = ((sigma + 2.0 * b as f64 + 1.0).powi(2) + t * t).sqrt();
    let mut m = cfg.shift_for(t);
    loop {
        let x = m as f64;
        let log_bound = ln_abs_f64(coef) + log_poch - (sigma + 2.0 * b as f64 + 1.0) * x.ln()
            + next.ln()
            - denom.ln();
        let bound = log_bound.exp();
        if bound <= cfg.tol {
            return Ok((m, bound));
        }
        if m > 1 << 24 {
            return Err(Error::InsufficientPrecision(format!(
                "Euler-Maclaurin remainder {bound:e} exceeds {:e}",
                cfg.tol
            )));
        }
        m *= 2;
    }
}

/// Euler–Maclaurin sum for `ζ(s, a)` with shift `m`; `bt[k-1] = B_{2k}/(2k)!`.
fn hurwitz_core(s: &Complex, a: &Float, m: u64, bt: &[Float], wp: Prec) -> Complex {
    let mut acc = Complex::zero(wp);
    for n in 0..m {
        let x = Float::with_val(wp, a + n);
        acc += &Complex::real_pow_neg(&x, s);
    }
    let x = Float::with_val(wp, a + m);
    let xs = Complex::real_pow_neg(&x, s);
    let one = Complex::one(wp);
    let s_minus_1 = s - &one;
    acc += &(&xs.scale(&x) / &s_minus_1);
    acc += &xs.scale(&Float::with_val(wp, 0.5));
    let inv_x = Float::with_val(wp, x.recip_ref());
    let inv_x2 = Float::with_val(wp, inv_x.square_ref());
    let mut poch = s.clone();
    let mut xpow = xs.scale(&inv_x);
    for (k, c) in bt.iter().enumerate() {
        acc += &(&poch * &xpow).scale(c);
        let j = 2 * (k as i64 + 1);
        let f1 = s + &Complex::from_real(Float::with_val(wp, j - 1));
        let f2 = s + &Complex::from_real(Float::with_val(wp, j));
        poch = &(&poch * &f1) * &f2;
        xpow = xpow.scale(&inv_x2);
    }
    acc
}

fn is_one(s: &Complex) -> bool {
    s.im.is_zero() && s.re == 1
}

/// `ζ(s, a)` for `0 < a ≤ 1`.
pub fn hurwitz_zeta(s: &Complex, a: &Float, cfg: &PrecisionConfig) -> Result<CriticalValue> {
    if is_one(s) {
        return Err(Error::Pole("s = 1".into()));
    }
    if !(*a > 0 && *a <= 1) {
        return Err(Error::InvalidInput(format!(
            "a = {} outside (0, 1]",
            a.to_f64()
        )));
    }
    let (m, bound) = hurwitz_plan(s, cfg)?;
    let wp = cfg.guard();
    let bt = bernoulli_over_factorial(cfg.bernoulli, wp);
    let v = hurwitz_core(&s.with_prec(wp), a, m, &bt, wp);
    Ok(CriticalValue {
        point: s.clone(),
        value: v.with_prec(cfg.prec),
        err: bound,
    })
}

/// `-ψ(a)`, the constant term of `ζ(s, a)` at `s = 1`.
fn minus_digamma(a: &Float, cfg: &PrecisionConfig) -> (Float, f64) {
    let wp = cfg.guard();
    let b = cfg.bernoulli;
    let bern = bernoulli(2 * b + 2);
    let mut m = cfg.shift_for(0.0);
    let bound = loop {
        let x = m as f64;
        let next = Float::with_val(64, &bern[2 * b + 2]).to_f64().abs()
            / ((2 * b + 2) as f64 * x.powi(2 * b as i32 + 2));
        if 2.0 * next <= cfg.tol || m > 1 << 20 {
            break 2.0 * next;
        }
        m *= 2;
    };
    let mut psi = Float::new(wp);
    for n in 0..m {
        psi -= Float::with_val(wp, Float::with_val(wp, a + n).recip_ref());
    }
    let x = Float::with_val(wp, a + m);
    psi += Float::with_val(wp, x.ln_ref());
    psi -= Float::with_val(wp, x.recip_ref()) / 2u32;
    let x2 = Float::with_val(wp, x.square_ref());
    let mut xp = x2.clone();
    for k in 1..=b {
        psi -= Float::with_val(wp, &bern[2 * k]) / (Float::with_val(wp, 2 * k as u32) * &xp);
        xp *= &x2;
    }
    (-psi, bound)
}

/// `L(s, χ) = q^{-s} Σ_a χ(a) ζ(s, a/q)`.
pub fn dirichlet_l(
    s: &Complex,
    chi: &DirichletCharacter,
    cfg: &PrecisionConfig,
) -> Result<CriticalValue> {
    LFunction::new(chi, cfg)?.l(s)
}

/// `Γ(z)` by Stirling's series after shifting `z` to the right.
pub fn gamma(z: &Complex, cfg: &PrecisionConfig) -> Result<CriticalValue> {
    if z.im.is_zero() && z.re <= 0 && z.re.is_integer() {
        return Err(Error::Pole(format!("Γ at {}", z.re.to_f64())));
    }
    let wp = cfg.guard() + 8;
    let kmax = cfg.bernoulli.max(cfg.prec as usize / 8);
    let bern = bernoulli(2 * kmax + 2);
    let b_next = Float::with_val(64, &bern[2 * kmax + 2]).to_f64().abs();
    let (x0, y) = (z.re.to_f64(), z.im.to_f64());
    let remainder = |n: u64| -> f64 {
        let wr = x0 + n as f64;
        if wr < 1.0 {
            return f64::INFINITY;
        }
        let r = (wr * wr + y * y).sqrt();
        let half = 0.5 * y.atan2(wr);
        let k2 = (2 * kmax + 2) as f64;
        b_next.ln() - (k2 * (k2 - 1.0)).ln() - (k2 - 1.0) * r.ln() - k2 * half.cos().ln()
    };
    let mut n = 0u64;
    while remainder(n) > cfg.tol.ln() - 1.0 {
        n = (2 * n).max(n + 4);
        if n > 1 << 20 {
            return Err(Error::InsufficientPrecision("Stirling shift".into()));
        }
    }
    let zw = z.with_prec(wp);
    let w = &zw + &Complex::from_real(Float::with_val(wp, n));
    let lw = w.ln();
    let half = Complex::from_real(Float::with_val(wp, 0.5));
    let mut lg = &(&(&w - &half) * &lw) - &w;
    let ln2pi = Float::with_val(wp, pi(wp) * 2u32).ln() / 2u32;
    lg += &Complex::from_real(ln2pi);
    let winv = w.recip();
    let winv2 = &winv * &winv;
    let mut wp_pow = winv.clone();
    for k in 1..=kmax {
        let c = Float::with_val(wp, &bern[2 * k]) / ((2 * k * (2 * k - 1)) as u32);
        lg += &wp_pow.scale(&c);
        wp_pow = &wp_pow * &winv2;
    }
    let mut val = lg.exp();
    let mut prod = Complex::one(wp);
    for j in 0..n {
        prod = &prod * &(&zw + &Complex::from_real(Float::with_val(wp, j)));
    }
    val = &val / &prod;
    let rel = remainder(n).exp();
    let err = rel * val.abs().to_f64();
    Ok(CriticalValue {
        point: z.clone(),
        value: val.with_prec(cfg.prec),
        err,
    })
}

/// `Γ(s/2)`.
pub fn gamma_half(s: &Complex, cfg: &PrecisionConfig) -> Result<CriticalValue> {
    let z = s.scale(&Float::with_val(s.prec(), 0.5));
    let mut v = gamma(&z, cfg)?;
    v.point = s.clone();
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchNote {
    /// Principal square root, `-π < arg K < π`.
    Principal,
    /// `K = -1`; the sign follows the first non-real character value.
    Footnote,
}

#[derive(Clone, Debug)]
pub struct RootNumber {
    pub k: Complex,
    pub sqrt_k: Complex,
    pub branch: BranchNote,
}

/// `K(χ) = √q / G(1, χ)` and its square root, for even primitive `χ`.
pub fn root_number(chi: &DirichletCharacter, cfg: &PrecisionConfig) -> Result<RootNumber> {
    if !chi.is_even() || !chi.is_primitive() {
        return Err(Error::InvalidInput(
            "root number needs an even primitive character".into(),
        ));
    }
    let wp = cfg.guard();
    let g = gauss_sum(chi, wp).value;
    let sq = Float::with_val(wp, chi.modulus()).sqrt();
    let k = &Complex::from_real(sq) / &g;
    let dist = (&k + &Complex::one(wp)).abs().to_f64();
    let near_minus_one = dist < 2f64.powi(-(cfg.prec as i32) / 2);
    let (sqrt_k, branch) = if near_minus_one {
        let first = (1..chi.modulus())
            .filter_map(|n| chi.angle(n))
            .find(|&(_, b)| b > 2);
        match first {
            None => {
                return Err(Error::BranchUndecidable(format!(
                    "K = -1 for a real character mod {}",
                    chi.modulus()
                )))
            }
            Some((a, b)) => {
                // Im e(a/b) > 0 iff 0 < a/b < 1/2.
                let i = Complex::i(wp);
                let r = if 2 * a < b { i } else { -i };
                (r, BranchNote::Footnote)
            }
        }
    } else {
        (k.sqrt(), BranchNote::Principal)
    };
    Ok(RootNumber {
        k: k.with_prec(cfg.prec),
        sqrt_k: sqrt_k.with_prec(cfg.prec),
        branch,
    })
}

/// A character prepared for repeated evaluation of `L`, `ξ`, `U` and `W`.
pub struct LFunction {
    chi: DirichletCharacter,
    cfg: PrecisionConfig,
    values: Vec<(Float, Complex)>,
    ln_q_over_pi: Float,
    root: Option<RootNumber>,
}

impl LFunction {
    pub fn new(chi: &DirichletCharacter, cfg: &PrecisionConfig) -> Result<Self> {
        let wp = cfg.guard();
        let q = chi.modulus();
        let values = (1..=q)
            .filter_map(|a| {
                chi.numerator(a).map(|_| {
                    (
                        Float::with_val(wp, a) / Float::with_val(wp, q),
                        chi.value(a, wp),
                    )
                })
            })
            .collect();
        let ln_q_over_pi = Float::with_val(wp, Float::with_val(wp, q) / pi(wp)).ln();
        let root = if chi.is_even() && chi.is_primitive() {
            Some(root_number(chi, cfg)?)
        } else {
            None
        };
        Ok(LFunction {
            chi: chi.clone(),
            cfg: cfg.clone(),
            values,
            ln_q_over_pi,
            root,
        })
    }

    pub fn character(&self) -> &DirichletCharacter {
        &self.chi
    }

    pub fn config(&self) -> &PrecisionConfig {
        &self.cfg
    }

    pub fn root_number(&self) -> Option<&RootNumber> {
        self.root.as_ref()
    }

    pub fn l(&self, s: &Complex) -> Result<CriticalValue> {
        let wp = self.cfg.guard();
        let q = self.chi.modulus();
        let sw = s.with_prec(wp);
        let ln_q = Float::with_val(wp, q).ln();
        let q_pow = (-sw.scale(&ln_q)).exp();
        if is_one(s) {
            if !self.chi.is_principal() {
                let mut acc = Complex::zero(wp);
                let mut err = 0.0;
                for (a, v) in &self.values {
                    let (c, e) = minus_digamma(a, &self.cfg);
                    acc += &v.scale(&c);
                    err += e;
                }
                let value = (&acc * &q_pow).with_prec(self.cfg.prec);
                return Ok(CriticalValue {
                    point: s.clone(),
                    value,
                    err: err / q as f64,
                });
            }
            return Err(Error::Pole("L(s, χ) for principal χ at s = 1".into()));
        }
        let (m, bound) = hurwitz_plan(s, &self.cfg)?;
        let bt = bernoulli_over_factorial(self.cfg.bernoulli, wp);
        let mut acc = Complex::zero(wp);
        for (a, v) in &self.values {
            let z = hurwitz_core(&sw, a, m, &bt, wp);
            acc += &(v * &z);
        }
        let value = &acc * &q_pow;
        let err = bound * self.values.len() as f64 * q_pow.abs().to_f64();
        Ok(CriticalValue {
            point: s.clone(),
            value: value.with_prec(self.cfg.prec),
            err,
        })
    }

    fn parity_shift(&self) -> u32 {
        if self.chi.is_even() {
            0
        } else {
            1
        }
    }

    /// `ξ(s, χ) = (q/π)^{(s+a)/2} Γ((s+a)/2) L(s, χ)` with `a` the parity.
    pub fn xi(&self, s: &Complex) -> Result<CriticalValue> {
        if !self.chi.is_primitive() {
            return Err(Error::InvalidInput("ξ needs a primitive character".into()));
        }
        let wp = self.cfg.guard();
        let sa = &s.with_prec(wp) + &Complex::from_real(Float::with_val(wp, self.parity_shift()));
        let half = sa.scale(&Float::with_val(wp, 0.5));
        let pw = half.scale(&self.ln_q_over_pi).exp();
        let g = gamma(&half, &self.cfg)?;
        let l = self.l(s)?;
        let pre = &pw * &g.value;
        let value = &pre * &l.value;
        let err = pre.abs().to_f64() * l.err + g.err * pw.abs().to_f64() * l.value.abs().to_f64();
        Ok(CriticalValue {
            point: s.clone(),
            value: value.with_prec(self.cfg.prec),
            err,
        })
    }

    fn require_root(&self) -> Result<&RootNumber> {
        self.root
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("needs an even primitive character".into()))
    }

    /// `U(s, χ) = K(χ)^{1/2} ξ(s, χ)`.
    pub fn u(&self, s: &Complex) -> Result<CriticalValue> {
        let r = self.require_root()?;
        let x = self.xi(s)?;
        Ok(CriticalValue {
            point: s.clone(),
            value: &r.sqrt_k * &x.value,
            err: x.err,
        })
    }

    /// `W(t, χ) = (q/π)^{-1/4} U(1/2 + it, χ)` as a complex number.
    pub fn w_complex(&self, t: &Float) -> Result<CriticalValue> {
        let r = self.require_root()?;
        let wp = self.cfg.guard();
        let s = Complex::new(Float::with_val(wp, 0.5), Float::with_val(wp, t));
        let l = self.l(&s)?;
        let z = Complex::new(Float::with_val(wp, 0.25), Float::with_val(wp, t) / 2u32);
        let g = gamma(&z, &self.cfg)?;
        // (q/π)^{it/2}
        let phase = Complex::new(
            Float::new(wp),
            Float::with_val(wp, t * &self.ln_q_over_pi) / 2u32,
        )
        .exp();
        let pre = &(&r.sqrt_k.with_prec(wp) * &phase) * &g.value;
        let value = &pre * &l.value;
        let err = pre.abs().to_f64() * l.err + g.err * l.value.abs().to_f64();
        Ok(CriticalValue {
            point: s,
            value: value.with_prec(self.cfg.prec),
            err,
        })
    }

    /// Real value of `W(t, χ)`; the imaginary part must vanish to within the error model.
    pub fn w(&self, t: &Float) -> Result<Float> {
        let v = self.w_complex(t)?;
        let im = v.value.im.to_f64().abs();
        let bound = 10.0 * (self.cfg.tol * (1.0 + v.value.abs().to_f64()) + v.err);
        if im > bound {
            return Err(Error::RealityViolation { im, bound });
        }
        Ok(v.value.re)
    }

    pub fn w_f64(&self, t: f64) -> Result<f64> {
        Ok(self.w(&Float::with_val(self.cfg.prec, t))?.to_f64())
    }

    /// `W(t − κ/log Q) W(t) W(t + κ/log Q)`.
    pub fn f(&self, t: &Float, kappa: f64, big_q: f64) -> Result<Float> {
        if !(big_q > 1.0) {
            return Err(Error::InvalidInput("Q must exceed 1".into()));
        }
        let p = self.cfg.prec;
        let h = Float::with_val(p, kappa) / Float::with_val(p, big_q).ln();
        let a = self.w(&Float::with_val(p, t - &h))?;
        let b = self.w(t)?;
        let c = self.w(&Float::with_val(p, t + &h))?;
        Ok(a * b * c)
    }

    /// `|ξ(1−s, χ̄) − K ξ(s, χ)|` with `K = i^a √q / G(1, χ)`.
    pub fn fe_residual(&self, s: &Complex) -> Result<f64> {
        let wp = self.cfg.guard();
        let conj = LFunction::new(&self.chi.conj(), &self.cfg)?;
        let one = Complex::one(wp);
        let lhs = conj.xi(&(&one - &s.with_prec(wp)))?;
        let rhs = self.xi(s)?;
        let g = gauss_sum(&self.chi, wp).value;
        let sq = Float::with_val(wp, self.chi.modulus()).sqrt();
        let mut k = &Complex::from_real(sq) / &g;
        if !self.chi.is_even() {
            k = k.mul_i();
        }
        Ok((&lhs.value - &(&k * &rhs.value)).abs().to_f64())
    }
}

pub fn xi(s: &Complex, chi: &DirichletCharacter, cfg: &PrecisionConfig) -> Result<CriticalValue> {
    LFunction::new(chi, cfg)?.xi(s)
}

pub fn w_value(t: f64, chi: &DirichletCharacter, cfg: &PrecisionConfig) -> Result<Float> {
    LFunction::new(chi, cfg)?.w(&Float::with_val(cfg.prec, t))
}

pub fn f_value(
    t: f64,
    chi: &DirichletCharacter,
    kappa: f64,
    big_q: f64,
    cfg: &PrecisionConfig,
) -> Result<Float> {
    LFunction::new(chi, cfg)?.f(&Float::with_val(cfg.prec, t), kappa, big_q)
}
