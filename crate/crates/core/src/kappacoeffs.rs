//! Exact trigonometric Laurent expressions in `κ`, principal-part removal,
//! the five κ-coefficients and the inequality whose root fixes the gap size.

use std::collections::BTreeMap;
use std::fmt;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::mp::{pi, Prec};

pub const TAYLOR_ORDER: usize = 40;
pub const REGIME_THRESHOLD: f64 = 0.5;
pub const TAYLOR_TAIL_TOL: f64 = 1e-30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Trig {
    Cos,
    Sin,
}

/// `Σ c · trig(mκ) / κ^j` with exact rational `c`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrigLaurentExpr {
    terms: BTreeMap<(Trig, u32, i32), Rational>,
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

impl TrigLaurentExpr {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `c · trig(mκ)/κ^j`, merging with an existing term.
    pub fn term(mut self, trig: Trig, m: u32, j: i32, c: impl Into<Rational>) -> Self {
        self.add_term(trig, m, j, c.into());
        self
    }

    fn add_term(&mut self, trig: Trig, m: u32, j: i32, c: Rational) {
        if trig == Trig::Sin && m == 0 {
            return;
        }
        let e = self.terms.entry((trig, m, j)).or_default();
        *e += c;
        if *e == 0 {
            self.terms.remove(&(trig, m, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Trig, u32, i32), &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, trig: Trig, m: u32, j: i32) -> Rational {
        self.terms.get(&(trig, m, j)).cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (&(t, m, j), c) in &o.terms {
            r.add_term(t, m, j, c.clone());
        }
        r
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut r = Self::new();
        for (&(t, m, j), c) in &self.terms {
            r.add_term(t, m, j, Rational::from(c * k));
        }
        r
    }

    /// Exact Laurent coefficients of `κ^e` for `e ≤ max_e`.
    pub fn laurent_coeffs(&self, max_e: i32) -> BTreeMap<i32, Rational> {
        let mut out: BTreeMap<i32, Rational> = BTreeMap::new();
        for (&(t, m, j), c) in &self.terms {
            let offset = if t == Trig::Cos { 0 } else { 1 };
            let mut r = 0u32;
            loop {
                let p = 2 * r + offset;
                let e = p as i32 - j;
                if e > max_e {
                    break;
                }
                if m > 0 || p == 0 {
                    let mut v = Rational::from((Integer::from(m).pow(p), factorial(p)));
                    if r % 2 == 1 {
                        v = -v;
                    }
                    *out.entry(e).or_default() += v * c;
                }
                if m == 0 {
                    break;
                }
                r += 1;
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }

    /// Coefficients of `κ^{-j}`, `j ≥ 1`, keyed by `j`.
    pub fn principal_part(&self) -> BTreeMap<i32, Rational> {
        self.laurent_coeffs(-1)
            .into_iter()
            .map(|(e, v)| (-e, v))
            .collect()
    }

    pub fn eval(&self, kappa: &Float) -> Float {
        let p = kappa.prec();
        let mut acc = Float::new(p);
        for (&(t, m, j), c) in &self.terms {
            let arg = Float::with_val(p, kappa * m);
            let tv = match t {
                Trig::Cos => arg.cos(),
                Trig::Sin => arg.sin(),
            };
            let kp = Float::with_val(p, (&kappa).pow(j));
            acc += tv * Float::with_val(p, c) / kp;
        }
        acc
    }
}

impl fmt::Display for TrigLaurentExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&(t, m, j), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let name = match t {
                Trig::Cos => "cos",
                Trig::Sin => "sin",
            };
            write!(f, "({c}){name}({m}κ)/κ^{j}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Taylor,
    Direct,
}

/// `Macl(body) = body − Princ(body)` with its Taylor data.
#[derive(Clone, Debug, PartialEq)]
pub struct MaclExpr {
    pub body: TrigLaurentExpr,
    pub principal: BTreeMap<i32, Rational>,
    pub taylor: Vec<Rational>,
}

impl MaclExpr {
    pub fn new(body: TrigLaurentExpr) -> Self {
        Self::with_order(body, TAYLOR_ORDER)
    }

    pub fn with_order(body: TrigLaurentExpr, order: usize) -> Self {
        let principal = body.principal_part();
        let lc = body.laurent_coeffs(order as i32);
        let taylor = (0..=order as i32)
            .map(|e| lc.get(&e).cloned().unwrap_or_default())
            .collect();
        MaclExpr {
            body,
            principal,
            taylor,
        }
    }

    pub fn at_zero(&self) -> Rational {
        self.taylor[0].clone()
    }

    /// Bound on the Taylor remainder beyond the stored order at `|κ| ≤ kappa`.
    pub fn taylor_tail_bound(&self, kappa: f64) -> f64 {
        let n = self.taylor.len() as i32 - 1;
        let mut total = 0.0;
        for (&(_, m, j), c) in self.body.terms() {
            if m == 0 {
                continue;
            }
            let p = (n + 1 + j).max(0) as u32;
            let mf = m as f64;
            let lead = (p as f64) * mf.ln() + ((p as i32 - j) as f64) * kappa.ln()
                - Float::with_val(64, p + 1).ln_gamma().to_f64();
            let ratio = mf * kappa / (p as f64 + 1.0);
            total += Float::with_val(64, c).to_f64().abs() * lead.exp() / (1.0 - ratio);
        }
        total
    }
}

#[derive(Clone, Debug)]
pub struct MaclValue {
    pub value: Float,
    pub regime: Regime,
    pub tail_bound: f64,
}

/// Taylor series below the threshold, `body − principal` at raised precision above it.
pub fn macl_eval(e: &MaclExpr, kappa: &Float) -> Result<MaclValue> {
    if kappa.is_sign_negative() && !kappa.is_zero() {
        return Err(Error::InvalidInput("κ must be non-negative".into()));
    }
    let p = kappa.prec().max(128);
    if *kappa < REGIME_THRESHOLD {
        let bound = e.taylor_tail_bound(kappa.to_f64().max(f64::MIN_POSITIVE));
        if bound > TAYLOR_TAIL_TOL {
            return Err(Error::InsufficientPrecision(format!(
                "Taylor tail {bound:e}"
            )));
        }
        let k = Float::with_val(p, kappa);
        let mut acc = Float::new(p);
        for c in e.taylor.iter().rev() {
            acc *= &k;
            acc += Float::with_val(p, c);
        }
        return Ok(MaclValue {
            value: acc,
            regime: Regime::Taylor,
            tail_bound: bound,
        });
    }
    Ok(MaclValue {
        value: eval_direct(e, kappa, p),
        regime: Regime::Direct,
        tail_bound: 0.0,
    })
}

fn eval_direct(e: &MaclExpr, kappa: &Float, p: Prec) -> Float {
    let wp = p + 64;
    let k = Float::with_val(wp, kappa);
    let mut v = e.body.eval(&k);
    for (&j, c) in &e.principal {
        v -= Float::with_val(wp, c) / Float::with_val(wp, (&k).pow(j));
    }
    Float::with_val(p, v)
}

fn r(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// The bracketed bodies of `C₀, C₁, C₂, C₄, C₆`.
pub fn c_body(which: u32) -> Result<TrigLaurentExpr> {
    use Trig::{Cos, Sin};
    let e = TrigLaurentExpr::new();
    Ok(match which {
        0 => e
            .term(Cos, 1, 8, r(1, 1))
            .term(Sin, 1, 9, r(1, 1))
            .term(Cos, 2, 8, r(1, 8))
            .term(Sin, 2, 9, r(-1, 2)),
        1 => e
            .term(Cos, 1, 8, r(-1, 4))
            .term(Sin, 1, 9, r(3, 4))
            .term(Cos, 1, 10, r(1, 1))
            .term(Sin, 1, 11, r(-1, 1))
            .term(Cos, 2, 8, r(1, 96))
            .term(Sin, 2, 9, r(-1, 8))
            .term(Cos, 2, 10, r(-1, 2))
            .term(Sin, 2, 11, r(1, 2)),
        2 => e
            .term(Sin, 1, 9, r(-3, 4))
            .term(Cos, 1, 10, r(-11, 4))
            .term(Sin, 1, 11, r(-21, 4))
            .term(Cos, 2, 8, r(1, 32))
            .term(Sin, 2, 9, r(-3, 8))
            .term(Cos, 2, 10, r(-53, 32))
            .term(Sin, 2, 11, r(21, 8)),
        4 => e
            .term(Cos, 1, 8, r(-1, 12))
            .term(Sin, 1, 9, r(5, 4))
            .term(Cos, 1, 10, r(3, 1))
            .term(Sin, 1, 11, r(5, 1))
            .term(Cos, 2, 8, r(-1, 32))
            .term(Sin, 2, 9, r(3, 8))
            .term(Cos, 2, 10, r(13, 8))
            .term(Sin, 2, 11, r(-5, 2)),
        6 => e
            .term(Cos, 1, 8, r(1, 8))
            .term(Sin, 1, 9, r(-3, 8))
            .term(Cos, 1, 10, r(-5, 4))
            .term(Sin, 1, 11, r(-3, 4))
            .term(Cos, 2, 10, r(-1, 16))
            .term(Sin, 2, 11, r(3, 8)),
        _ => return Err(Error::InvalidInput(format!("no closed form C_{which}"))),
    })
}

pub fn c_closed(which: u32) -> Result<MaclExpr> {
    Ok(MaclExpr::new(c_body(which)?))
}

/// `C_i` for `i` in 1..=9, using `C₃ = C₂`, `C₅ = C₄`, `C₇ = C₈ = C₉ = C₆`.
pub fn c_alias(i: u32) -> Result<u32> {
    match i {
        0 | 1 => Ok(i),
        2 | 3 => Ok(2),
        4 | 5 => Ok(4),
        6..=9 => Ok(6),
        _ => Err(Error::InvalidInput(format!("no coefficient C_{i}"))),
    }
}

/// The four contributions of the worked `C₀` computation, in order.
pub fn c0_contributions() -> [(TrigLaurentExpr, i64); 4] {
    use Trig::{Cos, Sin};
    let e = TrigLaurentExpr::new;
    [
        (e().term(Cos, 2, 8, r(5, 32)).term(Sin, 2, 9, r(-5, 8)), 1),
        (e().term(Cos, 1, 8, r(2, 5)).term(Sin, 1, 9, r(-19, 20)), 2),
        (e().term(Cos, 1, 8, r(1, 10)).term(Sin, 1, 9, r(29, 20)), 2),
        (e().term(Cos, 2, 8, r(-1, 32)).term(Sin, 2, 9, r(1, 8)), 1),
    ]
}

/// Weighted sum of [`c0_contributions`].
pub fn c0_assembled() -> TrigLaurentExpr {
    c0_contributions()
        .iter()
        .fold(TrigLaurentExpr::new(), |acc, (e, w)| {
            acc.add(&e.scale(&Rational::from(*w)))
        })
}

/// The five closed forms, built once per call site.
pub struct Coefficients {
    c: [MaclExpr; 5],
}

impl Coefficients {
    pub fn new() -> Self {
        let mk = |w| c_closed(w).expect("known coefficient");
        Coefficients {
            c: [mk(0), mk(1), mk(2), mk(4), mk(6)],
        }
    }

    pub fn get(&self, which: u32) -> Result<&MaclExpr> {
        Ok(match which {
            0 => &self.c[0],
            1 => &self.c[1],
            2 => &self.c[2],
            4 => &self.c[3],
            6 => &self.c[4],
            _ => return Err(Error::InvalidInput(format!("no closed form C_{which}"))),
        })
    }

    pub fn eval(&self, which: u32, kappa: &Float) -> Result<Float> {
        Ok(macl_eval(self.get(which)?, kappa)?.value)
    }

    /// `(κ/π)² (C₁ + 2C₂ + 2C₄ + 4C₆)`.
    pub fn rhs_combo(&self, kappa: &Float) -> Result<Float> {
        let p = kappa.prec().max(128);
        let s = self.eval(1, kappa)?
            + self.eval(2, kappa)? * 2u32
            + self.eval(4, kappa)? * 2u32
            + self.eval(6, kappa)? * 4u32;
        let ratio = Float::with_val(p, kappa / pi(p));
        Ok(Float::with_val(p, ratio.square_ref()) * s)
    }

    /// `h(κ) = C₀(κ) − rhs_combo(κ)`.
    pub fn h(&self, kappa: &Float) -> Result<Float> {
        Ok(self.eval(0, kappa)? - self.rhs_combo(kappa)?)
    }
}

impl Default for Coefficients {
    fn default() -> Self {
        Self::new()
    }
}

pub fn rhs_combo(kappa: &Float) -> Result<Float> {
    Coefficients::new().rhs_combo(kappa)
}

#[derive(Clone, Debug)]
pub struct KappaSolution {
    pub kappa_star: Float,
    pub ratio_to_2pi: Float,
    pub gap_multiplier: Float,
    pub bracket: (f64, f64),
    /// `(κ, h(κ))` for every bisection midpoint.
    pub trace: Vec<(f64, f64)>,
}

/// Smallest positive root of `h` on `[0.1, 20]`: sign scan with step 0.1, then bisection.
pub fn solve_kappa(tol: f64, prec: Prec) -> Result<KappaSolution> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let coeffs = Coefficients::new();
    let h = |k: f64| coeffs.h(&Float::with_val(prec, k));
    let mut lo = 0.1;
    let mut h_lo = h(lo)?;
    let mut bracket = None;
    for i in 2..=200 {
        let k = 0.1 * i as f64;
        let hk = h(k)?;
        if h_lo.is_sign_negative() != hk.is_sign_negative() {
            bracket = Some((lo, k));
            break;
        }
        lo = k;
        h_lo = hk;
    }
    let (a0, b0) =
        bracket.ok_or_else(|| Error::SolverFailure("no sign change of h on [0.1, 20]".into()))?;
    let (mut a, mut b) = (Float::with_val(prec, a0), Float::with_val(prec, b0));
    let neg_a = h(a0)?.is_sign_negative();
    let mut trace = Vec::new();
    while Float::with_val(prec, &b - &a) > tol {
        let mid = Float::with_val(prec, &a + &b) / 2u32;
        let hm = coeffs.h(&mid)?;
        trace.push((mid.to_f64(), hm.to_f64()));
        if hm.is_sign_negative() == neg_a {
            a = mid;
        } else {
            b = mid;
        }
        if trace.len() > 400 {
            return Err(Error::SolverFailure("bisection did not converge".into()));
        }
    }
    let k = Float::with_val(prec, &a + &b) / 2u32;
    let two_pi = pi(prec) * 2u32;
    let ratio = Float::with_val(prec, &k / &two_pi);
    Ok(KappaSolution {
        gap_multiplier: Float::with_val(prec, &ratio * 3u32),
        ratio_to_2pi: ratio,
        kappa_star: k,
        bracket: (a0, b0),
        trace,
    })
}
