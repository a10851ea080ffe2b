//! Euler-product constants, local factors at and near zero shifts, and the
//! arithmetic sums whose slopes recover `a₃(𝓛)/a₃`.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::mp::{Complex, Prec};
use crate::shiftframe::ShiftSet;

const CHUNK: usize = 2048;

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Smallest prime factor of every `n ≤ limit` (0 and 1 map to 0).
pub fn smallest_prime_factors(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=limit {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        for &p in &primes {
            let m = i * p as usize;
            if p > spf[i] || m > limit {
                break;
            }
            spf[m] = p;
        }
    }
    spf
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorModel {
    A3,
    A3L,
    Shifted,
}

impl FactorModel {
    pub fn name(self) -> &'static str {
        match self {
            FactorModel::A3 => "(1-1/p)^4 (1+4/p+1/p^2)",
            FactorModel::A3L => "(1-1/p)^5 (1+5/p-5/p^2+14/p^3-15/p^4+5/p^5+4/p^6-4/p^7+1/p^8)",
            FactorModel::Shifted => "B_p(A,B) Z_p(A,B)^-1",
        }
    }

    /// Integer coefficients of the local factor as a polynomial in `1/p`.
    pub fn polynomial(self) -> Option<Vec<i64>> {
        let (k, rest): (u32, &[i64]) = match self {
            FactorModel::A3 => (4, &[1, 4, 1]),
            FactorModel::A3L => (5, &[1, 5, -5, 14, -15, 5, 4, -4, 1]),
            FactorModel::Shifted => return None,
        };
        let mut poly = rest.to_vec();
        for _ in 0..k {
            poly = poly_mul(&poly, &[1, -1]);
        }
        Some(poly)
    }
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct EulerProductEstimate {
    pub value: Float,
    /// Zero for the real constants.
    pub imag: Float,
    pub prime_cutoff: u64,
    /// `|true − value| ≤ tail_bound`.
    pub tail_bound: f64,
    pub model: FactorModel,
}

impl EulerProductEstimate {
    pub fn complex(&self) -> Complex {
        Complex::new(self.value.clone(), self.imag.clone())
    }
}

/// Ordered product of per-prime factors, chunked so the result does not
/// depend on the thread count.
fn ordered_product<F>(primes: &[u64], prec: Prec, factor: F) -> Result<Complex>
where
    F: Fn(u64) -> Result<Complex> + Sync,
{
    let parts: Vec<Result<Complex>> = primes
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = Complex::one(prec);
            for &p in chunk {
                acc = acc * factor(p)?;
            }
            Ok(acc)
        })
        .collect();
    let mut acc = Complex::one(prec);
    for p in parts {
        acc = acc * p?;
    }
    Ok(acc)
}

/// `|value|·(exp(L) − 1)` rounded outward.
fn product_error(abs_value: f64, log_tail: f64) -> f64 {
    abs_value * log_tail.exp_m1() * (1.0 + 1e-12)
}

fn polynomial_product(model: FactorModel, cutoff: u64, prec: Prec) -> Result<EulerProductEstimate> {
    if cutoff < 100 {
        return Err(Error::InvalidInput(
            "prime cutoff must be at least 100".into(),
        ));
    }
    let poly = model.polynomial().expect("polynomial model");
    debug_assert_eq!(poly[1], 0);
    let wp = prec + 32;
    let primes = primes_up_to(cutoff);
    let prod = ordered_product(&primes, wp, |p| {
        let y = Float::with_val(wp, 1) / p;
        let mut v = Float::new(wp);
        for c in poly.iter().rev() {
            v *= &y;
            v += *c;
        }
        Ok(Complex::from_real(v))
    })?;
    // |f − 1| ≤ c·p⁻² for p > P, from the degree ≥ 2 coefficients.
    let y0 = 1.0 / (cutoff as f64 + 1.0);
    let c: f64 = poly
        .iter()
        .skip(2)
        .enumerate()
        .map(|(k, a)| a.unsigned_abs() as f64 * y0.powi(k as i32))
        .sum();
    let e0 = c * y0 * y0;
    let log_tail = c / ((1.0 - e0) * cutoff as f64);
    let value = Float::with_val(prec, &prod.re);
    let tail_bound = product_error(value.to_f64().abs(), log_tail);
    Ok(EulerProductEstimate {
        value,
        imag: Float::new(prec),
        prime_cutoff: cutoff,
        tail_bound,
        model,
    })
}

pub fn a3(cutoff: u64, prec: Prec) -> Result<EulerProductEstimate> {
    polynomial_product(FactorModel::A3, cutoff, prec)
}

pub fn a3_l(cutoff: u64, prec: Prec) -> Result<EulerProductEstimate> {
    polynomial_product(FactorModel::A3L, cutoff, prec)
}

fn max_re(sets: &[&ShiftSet]) -> f64 {
    sets.iter()
        .flat_map(|s| s.shifts.iter())
        .map(|z| z.re.to_f64().abs())
        .fold(0.0, f64::max)
}

fn check_shifts(a: &ShiftSet, b: &ShiftSet) -> Result<f64> {
    let d = max_re(&[a, b]);
    if !(d < 0.25) {
        return Err(Error::InvalidInput(format!(
            "|Re shift| = {d} ≥ 1/4: local factor series diverges"
        )));
    }
    Ok(d)
}

#[derive(Clone, Debug)]
pub struct LocalFactor {
    pub value: Complex,
    /// Highest `n` in `Σ h_n(x) h_n(y)`; total degree `2n` in `p^{-1/2}`.
    pub cutoff: usize,
    pub truncation_bound: f64,
}

fn binom2(n: usize) -> f64 {
    ((n + 1) * (n + 2) / 2) as f64
}

/// Bound on `Σ_{n>N} C(n+2,2)² ρⁿ`.
fn geometric_tail(n: usize, rho: f64) -> f64 {
    let r = ((n as f64 + 4.0) / (n as f64 + 2.0)).powi(2) * rho;
    if r >= 1.0 {
        return f64::INFINITY;
    }
    binom2(n + 1).powi(2) * rho.powi(n as i32 + 1) / (1.0 - r)
}

fn complete_homogeneous(vars: &[Complex], n: usize, prec: Prec) -> Vec<Complex> {
    let mut h = vec![Complex::zero(prec); n + 1];
    h[0] = Complex::one(prec);
    for x in vars {
        for k in 1..=n {
            let prev = &h[k - 1] * x;
            h[k] += &prev;
        }
    }
    h
}

fn local_vars(s: &ShiftSet, p: u64, prec: Prec) -> Vec<Complex> {
    let pf = Float::with_val(prec, p);
    let half = Complex::from_f64(prec, 0.5, 0.0);
    s.shifts
        .iter()
        .map(|a| Complex::real_pow_neg(&pf, &(&half + &a.with_prec(prec))))
        .collect()
}

/// The `e(0·θ)`-coefficient of the product of the six geometric series.
/// `cutoff = None` picks the smallest degree whose tail is below `2^-prec`.
pub fn b_p(
    a: &ShiftSet,
    b: &ShiftSet,
    p: u64,
    cutoff: Option<usize>,
    prec: Prec,
) -> Result<LocalFactor> {
    let delta = check_shifts(a, b)?;
    if p < 2 {
        return Err(Error::InvalidInput("p must be prime".into()));
    }
    if let Some(c) = cutoff {
        if c < 10 {
            return Err(Error::InvalidInput("cutoff must be at least 10".into()));
        }
    }
    let rho = (p as f64).powf(-1.0 + 2.0 * delta);
    let target = 2f64.powi(-(prec as i32));
    let n = match cutoff {
        Some(c) => c,
        None => {
            let mut n = 10;
            while geometric_tail(n, rho) > target {
                n += 1;
                if n > 100_000 {
                    return Err(Error::InsufficientPrecision(
                        "local factor series too slow".into(),
                    ));
                }
            }
            n
        }
    };
    let wp = prec + 16;
    let hx = complete_homogeneous(&local_vars(a, p, wp), n, wp);
    let hy = complete_homogeneous(&local_vars(b, p, wp), n, wp);
    let mut v = Complex::zero(wp);
    for k in (0..=n).rev() {
        v += &(&hx[k] * &hy[k]);
    }
    Ok(LocalFactor {
        value: v.with_prec(prec),
        cutoff: n,
        truncation_bound: geometric_tail(n, rho),
    })
}

/// `∫₀¹ Π z_{p,θ}(½+α) Π z_{p,−θ}(½+β) dθ` by the trapezoid rule.
pub fn b_p_quadrature(
    a: &ShiftSet,
    b: &ShiftSet,
    p: u64,
    nodes: u64,
    prec: Prec,
) -> Result<Complex> {
    check_shifts(a, b)?;
    let xs = local_vars(a, p, prec);
    let ys = local_vars(b, p, prec);
    let one = Complex::one(prec);
    let mut acc = Complex::zero(prec);
    for k in 0..nodes {
        let e = Complex::unit_root(prec, k, nodes);
        let ec = e.conj();
        let mut t = one.clone();
        for x in &xs {
            t = t * (&one - &(&e * x)).recip();
        }
        for y in &ys {
            t = t * (&one - &(&ec * y)).recip();
        }
        acc += &t;
    }
    Ok(acc.scale(&Float::with_val(prec, Rational::from((1, nodes)))))
}

/// Zero-shift `B_p` for `m` shifts in `A` and `n` in `B`, exactly, from the
/// residue at `z = p^{-1/2}` of the contour form of the θ-integral.
pub fn b_p_exact_zero_shifts(p: u64, m: u32, n: u32) -> Rational {
    let y = Rational::from((1, p));
    let u = Rational::from(1 - &y);
    let ratio = Rational::from(&y / &u);
    let mut sum = Rational::new();
    let mut pw = Rational::from(1);
    for k in 0..n {
        let c = Integer::from(Integer::binomial_u(n - 1, k))
            * Integer::from(Integer::binomial_u(k + m - 1, m - 1));
        sum += Rational::from(&pw * c);
        pw *= &ratio;
    }
    sum / u.pow(m as i32)
}

pub fn b_p_closed_zero_shifts(p: u64) -> Rational {
    let y = Rational::from((1, p));
    let num = Rational::from(1 + Rational::from(&y * 4u32) + Rational::from(y.square_ref()));
    num / Rational::from(1 - y).pow(5)
}

/// `Π_{α∈A, β∈B} (1 − p^{−1−α−β})`.
pub fn z_p_inv(a: &ShiftSet, b: &ShiftSet, p: u64, prec: Prec) -> Result<Complex> {
    let pf = Float::with_val(prec, p);
    let one = Complex::one(prec);
    let mut acc = one.clone();
    for x in &a.shifts {
        for y in &b.shifts {
            let s = &(&one + x) + y;
            if s.is_zero() {
                return Err(Error::InvalidInput("1 + α + β = 0".into()));
            }
            acc = acc * (&one - &Complex::real_pow_neg(&pf, &s.with_prec(prec)));
        }
    }
    Ok(acc)
}

/// Majorant for `|B_p Z_p⁻¹ − 1|` when every `|p^{-1/2-α}| ≤ √ρ`.
fn shifted_factor_envelope(rho: f64) -> f64 {
    let b_rest = (1.0 + 4.0 * rho + rho * rho) / (1.0 - rho).powi(5) - 1.0 - 9.0 * rho;
    let z = (1.0 + rho).powi(9);
    b_rest * z + (1.0 + 9.0 * rho) * z - 1.0 - 18.0 * rho
}

/// `Π_{p≤P} B_p Z_p⁻¹` with a tail bound from the coefficient majorant.
pub fn a_partial(
    a: &ShiftSet,
    b: &ShiftSet,
    cutoff: u64,
    prec: Prec,
) -> Result<EulerProductEstimate> {
    let delta = check_shifts(a, b)?;
    if cutoff < 100 {
        return Err(Error::InvalidInput(
            "prime cutoff must be at least 100".into(),
        ));
    }
    let wp = prec + 32;
    let primes = primes_up_to(cutoff);
    let prod = ordered_product(&primes, wp, |p| {
        let bp = b_p(a, b, p, None, wp)?;
        Ok(bp.value * z_p_inv(a, b, p, wp)?)
    })?;
    let expo = 1.0 - 2.0 * delta;
    let rho0 = (cutoff as f64 + 1.0).powf(-expo);
    let e0 = shifted_factor_envelope(rho0);
    if !(e0 < 0.5) {
        return Err(Error::InsufficientPrecision(
            "prime cutoff too small for tail bound".into(),
        ));
    }
    // E(ρ) ≤ K ρ² on [0, ρ₀]; Σ_{n>P} n^{-2(1-2δ)} ≤ P^{1-2e}/(2e-1).
    let k = e0 / (rho0 * rho0);
    let s = 2.0 * expo;
    let sum = (cutoff as f64).powf(1.0 - s) / (s - 1.0);
    let log_tail = k / (1.0 - e0) * sum;
    let abs = prod.abs().to_f64();
    Ok(EulerProductEstimate {
        value: Float::with_val(prec, &prod.re),
        imag: Float::with_val(prec, &prod.im),
        prime_cutoff: cutoff,
        tail_bound: product_error(abs, log_tail),
        model: FactorModel::Shifted,
    })
}

/// Multiplicative data per `q ≤ limit`: `φ*(q)`, `Σ_{χ prim} χ(−1)`, `Π_{p|q} w(p)`.
struct Arith {
    phi_star: Vec<u64>,
    parity_sum: Vec<i8>,
    weight: Vec<f64>,
}

fn local_weight(p: u64) -> f64 {
    let y = 1.0 / p as f64;
    (1.0 - y).powi(5) / (1.0 + 4.0 * y + y * y)
}

fn arith_tables(limit: usize) -> Arith {
    let spf = smallest_prime_factors(limit);
    let mut phi_star = vec![0u64; limit + 1];
    let mut parity_sum = vec![0i8; limit + 1];
    let mut weight = vec![0f64; limit + 1];
    if limit >= 1 {
        phi_star[1] = 1;
        parity_sum[1] = 1;
        weight[1] = 1.0;
    }
    for q in 2..=limit {
        let p = spf[q] as usize;
        let mut m = q;
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        let pk = (q / m) as u64;
        let pu = p as u64;
        let (ps, eps) = match k {
            1 => (pu - 2, if p == 2 { 0 } else { -1 }),
            _ => (
                pk / pu / pu * (pu - 1) * (pu - 1),
                if pk == 4 { -1 } else { 0 },
            ),
        };
        phi_star[q] = ps * phi_star[m];
        parity_sum[q] = eps * parity_sum[m];
        weight[q] = local_weight(pu) * weight[m];
    }
    Arith {
        phi_star,
        parity_sum,
        weight,
    }
}

/// Number of even primitive characters mod `q` for every `q ≤ limit`.
pub fn phi_flat_table(limit: usize) -> Vec<u64> {
    let t = arith_tables(limit);
    (0..=limit)
        .map(|q| {
            if q == 0 {
                0
            } else {
                ((t.phi_star[q] as i64 + t.parity_sum[q] as i64) / 2) as u64
            }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// `(x, S(x), S(x) − fit)` at the sample points.
    pub residuals: Vec<(f64, f64, f64)>,
    pub rms_residual: f64,
    pub h2_over_t: f64,
    pub x_max: u64,
}

pub const SLOPE_SAMPLES: usize = 40;

/// Least-squares fit of `S(x) = Σ_{q≤x} φ*(q)/q² Π_{p|q} w(p)` against `log x` over
/// log-spaced `x ∈ [x_max/100, x_max]`, plus `H₂(x_max)/x_max`.
pub fn slope_fit(x_max: u64) -> Result<SlopeFit> {
    if x_max < 10_000 {
        return Err(Error::InvalidInput("x_max must be at least 10^4".into()));
    }
    let n = x_max as usize;
    let t = arith_tables(n);
    let lo = (x_max as f64 / 100.0).ln();
    let hi = (x_max as f64).ln();
    let xs: Vec<u64> = (0..SLOPE_SAMPLES)
        .map(|i| {
            (lo + (hi - lo) * i as f64 / (SLOPE_SAMPLES - 1) as f64)
                .exp()
                .round() as u64
        })
        .map(|x| x.min(x_max))
        .collect();
    let mut samples = Vec::with_capacity(xs.len());
    let mut s = 0.0;
    let mut h2 = 0.0;
    let mut next = 0;
    for q in 1..=n {
        let qf = q as f64;
        let base = t.weight[q] / qf;
        s += t.phi_star[q] as f64 * base / qf;
        h2 += (t.phi_star[q] as i64 + t.parity_sum[q] as i64) as f64 / 2.0 * base;
        while next < xs.len() && xs[next] as usize == q {
            samples.push((qf, s));
            next += 1;
        }
    }
    let m = samples.len() as f64;
    let (sx, sy) = samples
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x.ln(), b + y));
    let (mx, my) = (sx / m, sy / m);
    let (sxx, sxy) = samples.iter().fold((0.0, 0.0), |(a, b), (x, y)| {
        (a + (x.ln() - mx).powi(2), b + (x.ln() - mx) * (y - my))
    });
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<(f64, f64, f64)> = samples
        .iter()
        .map(|&(x, y)| (x, y, y - (intercept + slope * x.ln())))
        .collect();
    let rms_residual = (residuals.iter().map(|r| r.2 * r.2).sum::<f64>() / m).sqrt();
    Ok(SlopeFit {
        slope,
        intercept,
        residuals,
        rms_residual,
        h2_over_t: h2 / x_max as f64,
        x_max,
    })
}

/// `a₃(𝓛)/a₃` at a common cutoff with a propagated error bound.
pub fn euler_ratio(cutoff: u64, prec: Prec) -> Result<(Float, f64)> {
    let a = a3(cutoff, prec)?;
    let l = a3_l(cutoff, prec)?;
    let r = Float::with_val(prec, &l.value / &a.value);
    let err = (l.tail_bound + r.to_f64().abs() * a.tail_bound) / a.value.to_f64().abs();
    Ok((r, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{phi_flat, phi_star};

    const P: Prec = 128;

    fn shifts(v: [(f64, f64); 3]) -> ShiftSet {
        ShiftSet::new(v.map(|(r, i)| Complex::from_f64(P, r, i))).unwrap()
    }

    #[test]
    fn factor_polynomials() {
        let a = FactorModel::A3.polynomial().unwrap();
        assert_eq!(a, vec![1, 0, -9, 16, -9, 0, 1]);
        let l = FactorModel::A3L.polynomial().unwrap();
        assert_eq!(l[1], 0);
        let at2: Rational = a
            .iter()
            .enumerate()
            .map(|(k, c)| Rational::from((*c, 1i64 << k)))
            .sum();
        assert_eq!(at2, Rational::from((13, 64)));
        let at2l: Rational = l
            .iter()
            .enumerate()
            .map(|(k, c)| Rational::from((*c, 1i64 << k)))
            .sum();
        let want = Rational::from((1, 32))
            * (Rational::from(1) + Rational::from((5, 2)) - Rational::from((5, 4))
                + Rational::from((14, 8))
                - Rational::from((15, 16))
                + Rational::from((5, 32))
                + Rational::from((4, 64))
                - Rational::from((4, 128))
                + Rational::from((1, 256)));
        assert_eq!(at2l, want);
    }

    #[test]
    fn nesting() {
        for f in [a3, a3_l] {
            let lo = f(10_000, P).unwrap();
            let hi = f(20_000, P).unwrap();
            let d = Float::with_val(P, &lo.value - &hi.value).abs().to_f64();
            assert!(d <= lo.tail_bound, "{d:e} vs {:e}", lo.tail_bound);
            assert!(d > 0.0);
        }
        let a = a3(100_000, P).unwrap();
        let b = a3(1_000_000, P).unwrap();
        assert!(Float::with_val(P, &a.value - &b.value).abs().to_f64() <= a.tail_bound);
        assert!((b.value.to_f64() - 0.049_321_703_664_478_2).abs() < 1e-12);
    }

    #[test]
    fn spf_and_counts() {
        let spf = smallest_prime_factors(100);
        assert_eq!(spf[91], 7);
        assert_eq!(spf[97], 97);
        let t = arith_tables(600);
        let flat = phi_flat_table(600);
        for q in 1..=600u64 {
            assert_eq!(t.phi_star[q as usize], phi_star(q), "q={q}");
        }
        for q in 1..=300u64 {
            assert_eq!(flat[q as usize], phi_flat(q), "q={q}");
        }
    }

    #[test]
    fn zero_shift_local_factors() {
        let z = ShiftSet::zeros(P);
        for p in primes_up_to(100) {
            let exact = b_p_exact_zero_shifts(p, 3, 3);
            assert_eq!(exact, b_p_closed_zero_shifts(p), "p={p}");
            let series = b_p(&z, &z, p, None, P).unwrap().value;
            let d = (series - Complex::from_rational(P, &exact)).abs();
            assert!(d < 1e-35, "p={p}");
            let zi = z_p_inv(&z, &z, p, P).unwrap();
            let want = Rational::from(1 - Rational::from((1, p))).pow(9);
            assert!((zi - Complex::from_rational(P, &want)).abs() < 1e-35);
        }
    }

    #[test]
    fn series_matches_quadrature() {
        let a = shifts([(0.0, 0.01), (0.0, -0.01), (0.0, 0.0)]);
        let b = shifts([(0.0, -0.01), (0.0, 0.01), (0.0, 0.0)]);
        for p in [3, 5, 11] {
            let s = b_p(&a, &b, p, None, P).unwrap().value;
            let q = b_p_quadrature(&a, &b, p, 1024, P).unwrap();
            assert!((s - q).abs() < 1e-10, "p={p}");
        }
        let a = shifts([(0.1, 0.3), (-0.05, 0.0), (0.2, -1.0)]);
        let s = b_p(&a, &a, 3, None, P).unwrap().value;
        let q = b_p_quadrature(&a, &a, 3, 1024, P).unwrap();
        assert!((s - q).abs() < 1e-10);
    }

    #[test]
    fn fixed_cutoff_is_too_short_for_small_primes() {
        let z = ShiftSet::zeros(P);
        let r = b_p(&z, &z, 2, Some(30), P).unwrap();
        assert!(r.truncation_bound > 1e-6);
        let exact = Complex::from_rational(P, &b_p_closed_zero_shifts(2));
        assert!((r.value - exact).abs().to_f64() <= r.truncation_bound);
    }

    #[test]
    fn rejects_wide_shifts() {
        let bad = ShiftSet::unchecked([
            Complex::from_f64(P, 0.3, 0.0),
            Complex::zero(P),
            Complex::zero(P),
        ]);
        let z = ShiftSet::zeros(P);
        assert!(b_p(&bad, &z, 3, None, P).is_err());
        assert!(b_p(&z, &z, 3, Some(5), P).is_err());
    }

    #[test]
    fn product_second_order() {
        let a = shifts([(0.0, 0.01), (0.0, -0.02), (0.0, 0.005)]);
        let b = shifts([(0.0, 0.003), (0.0, 0.01), (0.0, -0.01)]);
        let primes = primes_up_to(10_000);
        let mut cs = Vec::new();
        for &p in primes.iter().filter(|&&p| p >= 100).step_by(40) {
            let v = b_p(&a, &b, p, None, P).unwrap().value * z_p_inv(&a, &b, p, P).unwrap();
            let c = (v - Complex::one(P)).abs().to_f64() * (p * p) as f64;
            cs.push(c);
        }
        let (lo, hi) = cs
            .iter()
            .fold((f64::MAX, 0f64), |(l, h), &c| (l.min(c), h.max(c)));
        assert!(lo > 8.0 && hi < 10.0, "{lo} {hi}");
    }

    #[test]
    fn partial_product_zero_and_small_shifts() {
        let z = ShiftSet::zeros(P);
        let ap = a_partial(&z, &z, 100_000, P).unwrap();
        let a = a3(100_000, P).unwrap();
        assert!(Float::with_val(P, &ap.value - &a.value).abs() < 1e-15);
        assert!(ap.imag.clone().abs() < 1e-30);
        let mut prev = f64::MAX;
        for s in [0.04, 0.02, 0.01] {
            let x = shifts([(0.0, s), (0.0, -s), (0.0, 0.0)]);
            let v = a_partial(&x, &x, 2_000, P).unwrap().complex();
            let d = (v - Complex::from_real(a3(2_000, P).unwrap().value))
                .abs()
                .to_f64();
            assert!(d < prev);
            prev = d;
        }
        let big = a_partial(&z, &z, 200, P).unwrap();
        assert!(Float::with_val(P, &big.value - &ap.value).abs().to_f64() <= big.tail_bound);
    }

    #[test]
    fn slope_smoke() {
        let f = slope_fit(10_000).unwrap();
        assert_eq!(f.residuals.len(), SLOPE_SAMPLES);
        assert!(f.rms_residual.is_finite());
        assert!(slope_fit(100).is_err());
    }

    #[test]
    fn slope_recovers_euler_ratio() {
        let (r, _) = euler_ratio(1_000_000, P).unwrap();
        let r = r.to_f64();
        let small = slope_fit(100_000).unwrap();
        let f = slope_fit(1_000_000).unwrap();
        assert!(((f.slope - r) / r).abs() < 0.02);
        assert!(((f.h2_over_t - r / 2.0) / (r / 2.0)).abs() < 0.03);
        assert!(f.rms_residual < small.rms_residual);
    }
}
