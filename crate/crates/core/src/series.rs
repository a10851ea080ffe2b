//! Truncated Laurent series in one variable `ε` with multiprecision complex
//! coefficients, plus a hyper-dual wrapper for mixed second derivatives.

use rug::Float;

use crate::error::{Error, Result};
use crate::mp::{Complex, Prec};

/// `Σ_{k ≥ lo} c_k ε^k`, known exactly through degree `hi`.
///
/// `hi == None` marks a finite Laurent polynomial: every coefficient above the
/// stored ones is exactly zero.
#[derive(Clone, Debug)]
pub struct EpsSeries {
    lo: i32,
    c: Vec<Complex>,
    hi: Option<i32>,
    prec: Prec,
}

fn min_hi(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

impl EpsSeries {
    pub fn zero(prec: Prec) -> Self {
        EpsSeries {
            lo: 0,
            c: Vec::new(),
            hi: None,
            prec,
        }
    }

    pub fn constant(v: Complex) -> Self {
        let prec = v.prec();
        EpsSeries {
            lo: 0,
            c: vec![v],
            hi: None,
            prec,
        }
    }

    /// `v ε^k`, exact.
    pub fn monomial(v: Complex, k: i32) -> Self {
        let prec = v.prec();
        EpsSeries {
            lo: k,
            c: vec![v],
            hi: None,
            prec,
        }
    }

    /// Build from explicit coefficients starting at degree `lo`, exact through `hi`.
    pub fn from_coeffs(lo: i32, c: Vec<Complex>, hi: Option<i32>, prec: Prec) -> Self {
        let mut s = EpsSeries { lo, c, hi, prec };
        s.clip();
        s
    }

    fn clip(&mut self) {
        if let Some(h) = self.hi {
            let keep = (h - self.lo + 1).max(0) as usize;
            self.c.truncate(keep);
        }
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    /// Lowest stored degree (a lower bound for the valuation).
    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Highest degree known exactly, `None` for exact polynomials.
    pub fn hi(&self) -> Option<i32> {
        self.hi
    }

    pub fn is_known(&self, k: i32) -> bool {
        self.hi.map_or(true, |h| k <= h)
    }

    /// Coefficient of `ε^k`.
    ///
    /// # Panics
    /// When `k` lies beyond the truncation order.
    pub fn coeff(&self, k: i32) -> Complex {
        assert!(
            self.is_known(k),
            "coefficient {k} beyond truncation {:?}",
            self.hi
        );
        if k < self.lo {
            return Complex::zero(self.prec);
        }
        self.c
            .get((k - self.lo) as usize)
            .cloned()
            .unwrap_or_else(|| Complex::zero(self.prec))
    }

    /// Highest stored degree.
    pub fn top(&self) -> i32 {
        self.lo + self.c.len() as i32 - 1
    }

    pub fn truncate(&self, n: i32) -> Self {
        let mut s = self.clone();
        s.hi = Some(min_hi(self.hi, Some(n)).unwrap());
        s.clip();
        s
    }

    pub fn add(&self, o: &EpsSeries) -> EpsSeries {
        let prec = self.prec.max(o.prec);
        let hi = min_hi(self.hi, o.hi);
        let lo = self.lo.min(o.lo);
        let top = self.top().max(o.top());
        let top = hi.map_or(top, |h| top.min(h));
        let c = (lo..=top)
            .map(|k| {
                let mut v = Complex::zero(prec);
                if k >= self.lo && k <= self.top() {
                    v += &self.c[(k - self.lo) as usize];
                }
                if k >= o.lo && k <= o.top() {
                    v += &o.c[(k - o.lo) as usize];
                }
                v
            })
            .collect();
        EpsSeries { lo, c, hi, prec }
    }

    pub fn neg(&self) -> EpsSeries {
        EpsSeries {
            c: self.c.iter().map(|v| -v).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, o: &EpsSeries) -> EpsSeries {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Complex) -> EpsSeries {
        EpsSeries {
            c: self.c.iter().map(|v| v * k).collect(),
            ..self.clone()
        }
    }

    pub fn scale_i64(&self, k: i64) -> EpsSeries {
        EpsSeries {
            c: self.c.iter().map(|v| v.scale_i64(k)).collect(),
            ..self.clone()
        }
    }

    /// Product; exact through `min(hi_a + lo_b, hi_b + lo_a)`.
    pub fn mul(&self, o: &EpsSeries) -> EpsSeries {
        let prec = self.prec.max(o.prec);
        let lo = self.lo + o.lo;
        let hi = min_hi(self.hi.map(|h| h + o.lo), o.hi.map(|h| h + self.lo));
        if self.c.is_empty() || o.c.is_empty() {
            return EpsSeries {
                lo,
                c: Vec::new(),
                hi,
                prec,
            };
        }
        let top = self.top() + o.top();
        let top = hi.map_or(top, |h| top.min(h));
        let n = (top - lo + 1).max(0) as usize;
        let mut c = vec![Complex::zero(prec); n];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                let k = i + j;
                if k >= n {
                    break;
                }
                c[k] += &(a * b);
            }
        }
        EpsSeries { lo, c, hi, prec }
    }

    /// `1 / (c0 + c1 ε)` exact through degree `hi`; a pure pole when `c0 = 0`.
    pub fn inv_linear(c0: &Complex, c1: &Complex, hi: i32, prec: Prec) -> Result<EpsSeries> {
        if c0.is_zero() {
            if c1.is_zero() {
                return Err(Error::InvalidConfiguration(
                    "factor x + y vanishes identically".into(),
                ));
            }
            return Ok(EpsSeries::monomial(c1.with_prec(prec).recip(), -1));
        }
        let inv = c0.with_prec(prec).recip();
        let ratio = -(&c1.with_prec(prec) * &inv);
        let mut c = Vec::with_capacity(hi.max(0) as usize + 1);
        let mut term = inv;
        for _ in 0..=hi {
            c.push(term.clone());
            term = &term * &ratio;
        }
        Ok(EpsSeries {
            lo: 0,
            c,
            hi: Some(hi),
            prec,
        })
    }

    /// `exp(d0 + d1 ε)` exact through degree `hi`.
    pub fn exp_linear(d0: &Complex, d1: &Complex, hi: i32, prec: Prec) -> EpsSeries {
        let e0 = d0.with_prec(prec).exp();
        let d1 = d1.with_prec(prec);
        let mut c = Vec::with_capacity(hi.max(0) as usize + 1);
        let mut term = e0;
        for n in 0..=hi {
            c.push(term.clone());
            term = (&term * &d1).scale(&Float::with_val(prec, n + 1).recip());
        }
        EpsSeries {
            lo: 0,
            c,
            hi: Some(hi),
            prec,
        }
    }

    /// Largest `|c_k|` over stored `k < 0`.
    pub fn max_negative(&self) -> f64 {
        (self.lo..0)
            .filter(|&k| k <= self.top())
            .map(|k| self.coeff(k).abs().to_f64())
            .fold(0.0, f64::max)
    }

    /// `(k, c_k)` for all stored degrees.
    pub fn terms(&self) -> Vec<(i32, Complex)> {
        self.c
            .iter()
            .enumerate()
            .map(|(i, v)| (self.lo + i as i32, v.clone()))
            .collect()
    }
}

/// `v + d1 e1 + d2 e2 + d12 e1 e2` with `e1² = e2² = 0`, every slot an [`EpsSeries`].
#[derive(Clone, Debug)]
pub struct HyperDualSeries {
    pub v: EpsSeries,
    pub d1: EpsSeries,
    pub d2: EpsSeries,
    pub d12: EpsSeries,
}

impl HyperDualSeries {
    pub fn real(v: EpsSeries) -> Self {
        let z = EpsSeries::zero(v.prec());
        HyperDualSeries {
            d1: z.clone(),
            d2: z.clone(),
            d12: z,
            v,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        HyperDualSeries {
            v: self.v.add(&o.v),
            d1: self.d1.add(&o.d1),
            d2: self.d2.add(&o.d2),
            d12: self.d12.add(&o.d12),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        HyperDualSeries {
            v: self.v.mul(&o.v),
            d1: self.v.mul(&o.d1).add(&self.d1.mul(&o.v)),
            d2: self.v.mul(&o.d2).add(&self.d2.mul(&o.v)),
            d12: self
                .v
                .mul(&o.d12)
                .add(&self.d1.mul(&o.d2))
                .add(&self.d2.mul(&o.d1))
                .add(&self.d12.mul(&o.v)),
        }
    }

    /// `1 / (s + a1 e1 + a2 e2)` for an ε-linear `s = c0 + c1 ε`.
    pub fn inv_linear(
        c0: &Complex,
        c1: &Complex,
        a1: i64,
        a2: i64,
        hi: i32,
        prec: Prec,
    ) -> Result<Self> {
        let v = EpsSeries::inv_linear(c0, c1, hi, prec)?;
        let v2 = v.mul(&v);
        let v3 = v2.mul(&v);
        Ok(HyperDualSeries {
            d1: v2.scale_i64(-a1),
            d2: v2.scale_i64(-a2),
            d12: v3.scale_i64(2 * a1 * a2),
            v,
        })
    }

    /// `exp(d0 + d1 ε + b1 e1 + b2 e2)` with real dual coefficients `b1`, `b2`.
    pub fn exp_linear(
        d0: &Complex,
        d1: &Complex,
        b1: &Float,
        b2: &Float,
        hi: i32,
        prec: Prec,
    ) -> Self {
        let e = EpsSeries::exp_linear(d0, d1, hi, prec);
        let c = |x: &Float| Complex::from_real(Float::with_val(prec, x));
        let b12 = Float::with_val(prec, b1 * b2);
        HyperDualSeries {
            d1: e.scale(&c(b1)),
            d2: e.scale(&c(b2)),
            d12: e.scale(&c(&b12)),
            v: e,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: Prec = 128;

    fn c(re: f64, im: f64) -> Complex {
        Complex::from_f64(P, re, im)
    }

    fn close(a: &Complex, b: &Complex, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn geometric_inverse_times_linear_is_one() {
        let (c0, c1) = (c(2.0, 1.0), c(-0.5, 3.0));
        let inv = EpsSeries::inv_linear(&c0, &c1, 15, P).unwrap();
        let lin = EpsSeries::from_coeffs(0, vec![c0, c1], None, P);
        let p = inv.mul(&lin);
        assert_eq!(p.hi(), Some(15));
        assert!(close(&p.coeff(0), &c(1.0, 0.0), 1e-35));
        for k in 1..=15 {
            assert!(p.coeff(k).abs() < 1e-33, "k={k}");
        }
    }

    #[test]
    fn pole_inverse_is_exact() {
        let s = EpsSeries::inv_linear(&Complex::zero(P), &c(4.0, 0.0), 10, P).unwrap();
        assert_eq!(s.hi(), None);
        assert!(close(&s.coeff(-1), &c(0.25, 0.0), 1e-40));
        assert!(s.coeff(5).is_zero());
        let bad = EpsSeries::inv_linear(&Complex::zero(P), &Complex::zero(P), 10, P);
        assert!(matches!(bad, Err(Error::InvalidConfiguration(_))));
    }

    #[test]
    fn truncation_bookkeeping() {
        let pole = EpsSeries::inv_linear(&Complex::zero(P), &c(1.0, 0.0), 0, P).unwrap();
        let g = EpsSeries::inv_linear(&c(1.0, 0.0), &c(1.0, 0.0), 12, P).unwrap();
        let p = pole.mul(&pole).mul(&g);
        assert_eq!(p.lo(), -2);
        assert_eq!(p.hi(), Some(10));
        // ε^{-2}/(1+ε): coefficient of ε^k is (-1)^{k+2}
        assert!(close(&p.coeff(3), &c(-1.0, 0.0), 1e-35));
        let q = g.mul(&g);
        assert_eq!(q.hi(), Some(12));
    }

    #[test]
    fn exp_series() {
        let e = EpsSeries::exp_linear(&c(0.0, 1.0), &c(2.0, 0.0), 10, P);
        let e0 = c(0.0, 1.0).exp();
        // e^{i} · 2^5 / 5!
        let want = e0.scale(&(Float::with_val(P, 32) / 120u32));
        assert!(close(&e.coeff(5), &want, 1e-35));
    }

    #[test]
    fn hyper_dual_second_derivative() {
        // f(x) = 1/(x + 3 + ε), ∂²f/∂x² at x=0 equals 2/(3+ε)³.
        let h = HyperDualSeries::inv_linear(&c(3.0, 0.0), &c(1.0, 0.0), 1, 1, 10, P).unwrap();
        let direct = EpsSeries::inv_linear(&c(3.0, 0.0), &c(1.0, 0.0), 10, P).unwrap();
        let want = direct.mul(&direct).mul(&direct).scale_i64(2);
        for k in 0..=10 {
            assert!(close(&h.d12.coeff(k), &want.coeff(k), 1e-35));
        }
        // exp(b1 e1 + b2 e2) mixed slot is b1 b2 e^{d0}
        let e = HyperDualSeries::exp_linear(
            &c(0.5, 0.0),
            &Complex::zero(P),
            &Float::with_val(P, 0.5),
            &Float::with_val(P, -1.5),
            4,
            P,
        );
        let want = c(0.5, 0.0).exp().scale(&Float::with_val(P, -0.75));
        assert!(close(&e.d12.coeff(0), &want, 1e-35));
    }

    proptest! {
        #[test]
        fn ring_laws(a in proptest::collection::vec(-3.0f64..3.0, 1..8),
                     b in proptest::collection::vec(-3.0f64..3.0, 1..8),
                     d in proptest::collection::vec(-3.0f64..3.0, 1..8),
                     la in -3i32..2, lb in -3i32..2) {
            let mk = |v: &Vec<f64>, lo: i32, hi: i32| EpsSeries::from_coeffs(lo, v.iter().map(|x| c(*x, 0.5 * x)).collect(), Some(hi), P);
            let x = mk(&a, la, 6);
            let y = mk(&b, lb, 5);
            let z = mk(&d, 0, 7);
            let l = x.mul(&y).mul(&z);
            let r = x.mul(&y.mul(&z));
            prop_assert_eq!(l.hi(), r.hi());
            let hi = l.hi().unwrap();
            for k in l.lo()..=hi {
                prop_assert!(close(&l.coeff(k), &r.coeff(k), 1e-25));
            }
            let s1 = x.mul(&y.add(&z));
            let s2 = x.mul(&y).add(&x.mul(&z));
            let hi = s1.hi().unwrap().min(s2.hi().unwrap());
            for k in s1.lo().min(s2.lo())..=hi {
                prop_assert!(close(&s1.coeff(k), &s2.coeff(k), 1e-25));
            }
            let comm = y.mul(&x);
            for k in l.lo()..=x.mul(&y).hi().unwrap() {
                prop_assert!(close(&comm.coeff(k), &x.mul(&y).coeff(k), 1e-25));
            }
        }
    }
}
