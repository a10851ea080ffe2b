//! Shift sets, the twenty subset pairs `(S, T)`, and the Laurent engine that
//! extracts `ε⁰` coefficients of the main-term sum `Σ 𝓡(X, Y)`.
//!
//! All series are in `ε = δ log Q`; shifts are measured in units of `1/log Q`,
//! so `Q` never appears and `𝓡` is implicitly divided by `(log Q)⁹`.

use rug::Float;

use crate::error::{Error, Result};
use crate::lfunc::{hurwitz_zeta, PrecisionConfig};
use crate::mp::{pi, Complex, Prec};
use crate::series::{EpsSeries, HyperDualSeries};

pub const DEFAULT_ORDER: i32 = 12;
pub const DEFAULT_PREC: Prec = 256;

/// Three complex shifts with `|Re| < 1/4`.
#[derive(Clone, Debug)]
pub struct ShiftSet {
    pub shifts: [Complex; 3],
}

impl ShiftSet {
    pub fn new(shifts: [Complex; 3]) -> Result<Self> {
        for s in &shifts {
            if !(s.re.clone().abs() < 0.25) {
                return Err(Error::InvalidInput(format!(
                    "shift real part {} outside (-1/4, 1/4)",
                    s.re.to_f64()
                )));
            }
        }
        Ok(ShiftSet { shifts })
    }

    /// Without the `|Re| < 1/4` check; for derived sets `X`, `Y`.
    pub fn unchecked(shifts: [Complex; 3]) -> Self {
        ShiftSet { shifts }
    }

    pub fn zeros(prec: Prec) -> Self {
        ShiftSet::unchecked([
            Complex::zero(prec),
            Complex::zero(prec),
            Complex::zero(prec),
        ])
    }
}

/// `δ_{X,Y} = ½(Σx + Σy)`.
pub fn delta_xy(x: &ShiftSet, y: &ShiftSet) -> Complex {
    let p = x.shifts[0].prec();
    let mut s = Complex::zero(p);
    for v in x.shifts.iter().chain(&y.shifts) {
        s += v;
    }
    s.scale(&Float::with_val(p, 0.5))
}

/// `S ⊆ A`, `T ⊆ B` with `|S| = |T|`, as bit masks over positions 0..3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SubsetPair {
    pub s_mask: u8,
    pub t_mask: u8,
}

impl SubsetPair {
    pub fn size(&self) -> u32 {
        self.s_mask.count_ones()
    }

    /// The pair built from the complements `(A∖S, B∖T)`.
    pub fn complement(&self) -> SubsetPair {
        SubsetPair {
            s_mask: !self.s_mask & 7,
            t_mask: !self.t_mask & 7,
        }
    }

    /// `X = (A∖S) ∪ (−T)`, `Y = (B∖T) ∪ (−S)`.
    pub fn sets(&self, a: &ShiftSet, b: &ShiftSet) -> (ShiftSet, ShiftSet) {
        let pick = |keep: &ShiftSet, keep_mask: u8, neg: &ShiftSet, neg_mask: u8| {
            let mut v: Vec<Complex> = (0..3)
                .filter(|i| keep_mask >> i & 1 == 0)
                .map(|i| keep.shifts[i].clone())
                .collect();
            v.extend(
                (0..3)
                    .filter(|i| neg_mask >> i & 1 == 1)
                    .map(|i| -&neg.shifts[i]),
            );
            let [x, y, z]: [Complex; 3] = v.try_into().expect("three elements");
            ShiftSet::unchecked([x, y, z])
        };
        (
            pick(a, self.s_mask, b, self.t_mask),
            pick(b, self.t_mask, a, self.s_mask),
        )
    }
}

/// All twenty pairs, ordered by `|S|`, then `S`-mask, then `T`-mask.
pub fn subset_pairs() -> Vec<SubsetPair> {
    let mut out = Vec::with_capacity(20);
    for size in 0..=3u32 {
        for s in 0u8..8 {
            if s.count_ones() != size {
                continue;
            }
            for t in 0u8..8 {
                if t.count_ones() == size {
                    out.push(SubsetPair {
                        s_mask: s,
                        t_mask: t,
                    });
                }
            }
        }
    }
    out
}

/// A normalized shift `i k κ + m ε` attached to coordinate `coord` (1..=6) with sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct LinShift {
    k: i64,
    m: i64,
    coord: usize,
    sign: i64,
}

impl LinShift {
    fn negate(self) -> Self {
        LinShift {
            k: -self.k,
            m: -self.m,
            sign: -self.sign,
            ..self
        }
    }
}

/// `A = {iκ + ε, 2ε, −iκ + 4ε}` (coordinates 1..3), `B` likewise (4..6).
fn kappa_sets() -> ([LinShift; 3], [LinShift; 3]) {
    let mk = |off: usize| {
        [
            LinShift {
                k: 1,
                m: 1,
                coord: off + 1,
                sign: 1,
            },
            LinShift {
                k: 0,
                m: 2,
                coord: off + 2,
                sign: 1,
            },
            LinShift {
                k: -1,
                m: 4,
                coord: off + 3,
                sign: 1,
            },
        ]
    };
    (mk(0), mk(3))
}

fn lin_sets(pair: SubsetPair) -> (Vec<LinShift>, Vec<LinShift>) {
    let (a, b) = kappa_sets();
    let build = |keep: &[LinShift; 3], km: u8, neg: &[LinShift; 3], nm: u8| {
        let mut v: Vec<LinShift> = (0..3)
            .filter(|i| km >> i & 1 == 0)
            .map(|i| keep[i])
            .collect();
        v.extend((0..3).filter(|i| nm >> i & 1 == 1).map(|i| neg[i].negate()));
        v
    };
    (
        build(&a, pair.s_mask, &b, pair.t_mask),
        build(&b, pair.t_mask, &a, pair.s_mask),
    )
}

/// The κ-dependent part of `δ_{X,Y}` for the normalized configuration, as a multiple of `iκ/2`.
pub fn delta_kappa_multiple(pair: SubsetPair) -> i64 {
    let (x, y) = lin_sets(pair);
    x.iter().chain(&y).map(|s| s.k).sum()
}

fn dual_coeff(s: &LinShift, dir: usize) -> i64 {
    if s.coord == dir {
        s.sign
    } else {
        0
    }
}

struct TermParts {
    d0: Complex,
    d1: Complex,
    factors: Vec<(Complex, Complex, i64, i64)>,
    b1: Float,
    b2: Float,
}

fn term_parts(pair: SubsetPair, kappa: &Float, dirs: (usize, usize), prec: Prec) -> TermParts {
    let (x, y) = lin_sets(pair);
    let ik = |k: i64| Complex::new(Float::new(prec), Float::with_val(prec, kappa * k));
    let ksum: i64 = x.iter().chain(&y).map(|s| s.k).sum();
    let msum: i64 = x.iter().chain(&y).map(|s| s.m).sum();
    let half = Float::with_val(prec, 0.5);
    let d0 = ik(ksum).scale(&half);
    let d1 = Complex::from_real(Float::with_val(prec, msum) / 2u32);
    let bsum = |dir: usize| -> Float {
        let s: i64 = x.iter().chain(&y).map(|v| dual_coeff(v, dir)).sum();
        Float::with_val(prec, s) / 2u32
    };
    let mut factors = Vec::with_capacity(9);
    for xs in &x {
        for ys in &y {
            let k = xs.k + ys.k;
            let c0 = if k == 0 { Complex::zero(prec) } else { ik(k) };
            let c1 = Complex::from_real(Float::with_val(prec, xs.m + ys.m));
            let a1 = dual_coeff(xs, dirs.0) + dual_coeff(ys, dirs.0);
            let a2 = dual_coeff(xs, dirs.1) + dual_coeff(ys, dirs.1);
            factors.push((c0, c1, a1, a2));
        }
    }
    TermParts {
        d0,
        d1,
        factors,
        b1: bsum(dirs.0),
        b2: bsum(dirs.1),
    }
}

/// Laurent series in `ε` of `exp(δ_{X,Y}) ∏ 1/(x + y)` for the normalized shifts.
pub fn r_term_series(pair: SubsetPair, kappa: &Float, order: i32, prec: Prec) -> Result<EpsSeries> {
    let start = order + 9;
    let parts = term_parts(pair, kappa, (0, 0), prec);
    let mut acc = EpsSeries::exp_linear(&parts.d0, &parts.d1, start, prec);
    for (c0, c1, _, _) in &parts.factors {
        acc = acc.mul(&EpsSeries::inv_linear(c0, c1, start, prec)?);
    }
    Ok(acc.truncate(order))
}

/// As [`r_term_series`] with hyper-dual perturbations along coordinates `dir_i`, `dir_j`.
pub fn r_term_series_dual(
    pair: SubsetPair,
    kappa: &Float,
    dir_i: usize,
    dir_j: usize,
    order: i32,
    prec: Prec,
) -> Result<HyperDualSeries> {
    let start = order + 9;
    let p = term_parts(pair, kappa, (dir_i, dir_j), prec);
    let mut acc = HyperDualSeries::exp_linear(&p.d0, &p.d1, &p.b1, &p.b2, start, prec);
    for (c0, c1, a1, a2) in &p.factors {
        acc = acc.mul(&HyperDualSeries::inv_linear(c0, c1, *a1, *a2, start, prec)?);
    }
    Ok(HyperDualSeries {
        v: acc.v.truncate(order),
        d1: acc.d1.truncate(order),
        d2: acc.d2.truncate(order),
        d12: acc.d12.truncate(order),
    })
}

/// An `ε⁰` extraction with its cancellation diagnostics.
#[derive(Clone, Debug)]
pub struct Eps0 {
    pub value: Float,
    /// Largest surviving negative-power coefficient.
    pub max_negative: f64,
    /// `|Im|` of the `ε⁰` coefficient.
    pub imag: f64,
    pub series: EpsSeries,
}

fn check_eps0(series: EpsSeries, prec: Prec) -> Result<Eps0> {
    let bound = 2f64.powi(-(prec as i32) / 2);
    for k in series.lo()..0 {
        let r = series.coeff(k).abs().to_f64();
        if r >= bound {
            return Err(Error::CancellationFailure {
                power: k,
                residual: r,
                bound,
            });
        }
    }
    let c0 = series.coeff(0);
    let imag = c0.im.to_f64().abs();
    if imag >= bound {
        return Err(Error::CancellationFailure {
            power: 0,
            residual: imag,
            bound,
        });
    }
    Ok(Eps0 {
        value: c0.re,
        max_negative: series.max_negative(),
        imag,
        series,
    })
}

fn require_kappa(kappa: &Float) -> Result<()> {
    if !(*kappa > 0) {
        return Err(Error::InvalidInput("κ must be positive".into()));
    }
    Ok(())
}

/// Sum of all twenty term series.
pub fn r_sum_series(kappa: &Float, order: i32, prec: Prec) -> Result<EpsSeries> {
    let mut acc = EpsSeries::zero(prec);
    for pair in subset_pairs() {
        acc = acc.add(&r_term_series(pair, kappa, order, prec)?);
    }
    Ok(acc)
}

/// `C₀(κ)` as the `ε⁰` coefficient of the twenty-term sum.
pub fn r_sum_eps0(kappa: &Float, order: i32, prec: Prec) -> Result<Eps0> {
    require_kappa(kappa)?;
    check_eps0(r_sum_series(kappa, order, prec)?, prec)
}

/// `ε⁰` coefficient of `∂²/∂α_i∂α_j` of the twenty-term sum (coordinates 1..=6,
/// `α₁..α₃` in `A`, `α₄..α₆` in `B`), normalized by two further powers of `log Q`.
pub fn r_sum_deriv_eps0(
    kappa: &Float,
    dir_i: usize,
    dir_j: usize,
    order: i32,
    prec: Prec,
) -> Result<Eps0> {
    require_kappa(kappa)?;
    if !(1..=6).contains(&dir_i) || !(1..=6).contains(&dir_j) {
        return Err(Error::InvalidInput(
            "derivative directions must lie in 1..=6".into(),
        ));
    }
    let mut acc = EpsSeries::zero(prec);
    for pair in subset_pairs() {
        acc = acc.add(&r_term_series_dual(pair, kappa, dir_i, dir_j, order, prec)?.d12);
    }
    check_eps0(acc, prec)
}

/// `𝒫(X,Y;Q) / 𝓡(X,Y;Q) = π^{−δ} ∏ ζ(1 + x + y)(x + y)`.
pub fn p_vs_r_ratio(
    pair: SubsetPair,
    a: &ShiftSet,
    b: &ShiftSet,
    cfg: &PrecisionConfig,
) -> Result<Complex> {
    let (x, y) = pair.sets(a, b);
    let prec = cfg.prec;
    let one = Complex::one(prec);
    let mut acc = Complex::one(prec);
    let a1 = Float::with_val(prec, 1);
    for xs in &x.shifts {
        for ys in &y.shifts {
            let lam = (xs + ys).with_prec(prec);
            if lam.is_zero() {
                return Err(Error::Pole("ζ(1 + x + y) with x + y = 0".into()));
            }
            let z = hurwitz_zeta(&(&one + &lam), &a1, cfg)?;
            acc = &acc * &(&z.value * &lam);
        }
    }
    let d = delta_xy(&x, &y).with_prec(prec);
    let ln_pi = Float::with_val(prec, pi(prec).ln_ref());
    Ok(&acc * &(-d.scale(&ln_pi)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: Prec = 256;

    fn kf(k: f64) -> Float {
        Float::with_val(P, k)
    }

    #[test]
    fn delta_examples() {
        let z = ShiftSet::zeros(64);
        assert!(delta_xy(&z, &z).is_zero());
        let k = 1.7;
        let sym = ShiftSet::new([
            Complex::from_f64(64, 0.0, k),
            Complex::zero(64),
            Complex::from_f64(64, 0.0, -k),
        ])
        .unwrap();
        assert!(delta_xy(&sym, &sym).abs() < 1e-18);
        assert!(ShiftSet::new([
            Complex::from_f64(64, 0.3, 0.0),
            Complex::zero(64),
            Complex::zero(64)
        ])
        .is_err());
    }

    #[test]
    fn pair_counts() {
        let pairs = subset_pairs();
        assert_eq!(pairs.len(), 20);
        let sizes: Vec<usize> = (0..=3)
            .map(|k| pairs.iter().filter(|p| p.size() == k).count())
            .collect();
        assert_eq!(sizes, vec![1, 9, 9, 1]);
        let p0 = pairs[0];
        let a = ShiftSet::unchecked([
            Complex::from_f64(64, 0.1, 0.0),
            Complex::from_f64(64, 0.0, 0.2),
            Complex::from_f64(64, -0.1, 0.0),
        ]);
        let b = ShiftSet::unchecked([
            Complex::from_f64(64, 0.0, -0.3),
            Complex::from_f64(64, 0.05, 0.0),
            Complex::from_f64(64, 0.0, 0.0),
        ]);
        let (x, y) = p0.sets(&a, &b);
        assert_eq!(x.shifts, a.shifts);
        assert_eq!(y.shifts, b.shifts);
        let mut seen: Vec<SubsetPair> = pairs.iter().map(|p| p.complement()).collect();
        seen.sort_by_key(|p| (p.s_mask, p.t_mask));
        let mut orig = pairs.clone();
        orig.sort_by_key(|p| (p.s_mask, p.t_mask));
        assert_eq!(seen, orig);
    }

    #[test]
    fn worked_pair_delta() {
        // S = {α₁}, T = {β₁}: X = {2ε, −iκ+4ε, −iκ−ε}, Y = {2ε, −iκ+4ε, −iκ−ε}
        let pair = SubsetPair {
            s_mask: 1,
            t_mask: 1,
        };
        assert_eq!(delta_kappa_multiple(pair), -4);
        assert_eq!(delta_kappa_multiple(pair.complement()), 4);
        // exp(δ) in normalized units: ±2iκ + (∓5)ε
        let kappa = kf(1.3);
        let parts = term_parts(pair.complement(), &kappa, (0, 0), P);
        assert!((parts.d0.im.to_f64() - 2.6).abs() < 1e-30);
        assert!((parts.d1.re.to_f64() + 5.0).abs() < 1e-30);
    }

    #[test]
    fn kappa_free_pairs() {
        // S=T=∅ and the three others listed with no κ in δ.
        let free = [
            SubsetPair {
                s_mask: 0,
                t_mask: 0,
            },
            SubsetPair {
                s_mask: 1,
                t_mask: 4,
            },
            SubsetPair {
                s_mask: 2,
                t_mask: 2,
            },
            SubsetPair {
                s_mask: 4,
                t_mask: 1,
            },
        ];
        for p in free {
            assert_eq!(delta_kappa_multiple(p), 0, "{p:?}");
        }
        assert_eq!(
            subset_pairs()
                .iter()
                .filter(|p| delta_kappa_multiple(**p) == 0)
                .count(),
            8
        );
    }

    #[test]
    fn worked_pair_contribution() {
        let pair = SubsetPair {
            s_mask: 1,
            t_mask: 1,
        };
        for k in [0.7, 2.0, 5.5] {
            let kappa = kf(k);
            let s = r_term_series(pair, &kappa, 4, P)
                .unwrap()
                .add(&r_term_series(pair.complement(), &kappa, 4, P).unwrap());
            let c0 = s.coeff(0);
            let want = 5.0 * (2.0 * k).cos() / (32.0 * k.powi(8))
                - 5.0 * (2.0 * k).sin() / (8.0 * k.powi(9));
            assert!(
                (c0.re.to_f64() - want).abs() < 1e-14 * want.abs().max(1e-6),
                "κ={k}"
            );
            assert!(c0.im.to_f64().abs() < 1e-40);
        }
    }

    #[test]
    fn c0_values_and_cancellation() {
        let frozen = [
            (0.5, 1.132_862_463_167_194_8e-4),
            (1.0, 1.062_226_948_025_779_8e-4),
            (2.0, 8.201_971_908_097_279_0e-5),
            (7.42, 1.420_259_269_978_886_6e-6),
        ];
        for (k, want) in frozen {
            let r = r_sum_eps0(&kf(k), DEFAULT_ORDER, P).unwrap();
            assert!((r.value.to_f64() - want).abs() < 1e-16, "κ={k}");
            assert!(r.max_negative < 1e-30);
        }
    }

    #[test]
    fn small_kappa_limit() {
        let r = r_sum_eps0(&kf(0.01), DEFAULT_ORDER, P).unwrap();
        assert!((r.value.to_f64() - 42.0 / 362_880.0).abs() < 1e-6);
        let d = r_sum_deriv_eps0(&kf(0.01), 3, 4, DEFAULT_ORDER, P).unwrap();
        assert!((d.value.to_f64() - 3.0 / 3_628_800.0).abs() < 1e-8);
    }

    #[test]
    fn derivative_oracle_frozen() {
        let k = kf(2.0);
        let cases = [
            ((3, 4), 1.332_734_076_73e-6),
            ((1, 6), 1.332_734_076_73e-6),
            ((2, 5), 5.378_447_801_14e-7),
            ((3, 6), -7.513_979_100_9e-9),
            ((1, 4), -7.513_979_100_9e-9),
            ((3, 5), 5.886_529_933_63e-7),
            ((2, 4), 5.886_529_933_63e-7),
        ];
        for ((i, j), want) in cases {
            let d = r_sum_deriv_eps0(&k, i, j, DEFAULT_ORDER, P).unwrap();
            assert!(
                (d.value.to_f64() - want).abs() < 1e-17,
                "({i},{j}) {}",
                d.value.to_f64()
            );
            let e = r_sum_deriv_eps0(&k, j, i, DEFAULT_ORDER, P).unwrap();
            assert!(Float::with_val(P, &d.value - &e.value).abs() < 1e-60);
        }
    }

    #[test]
    fn order_and_precision_stability() {
        let k = kf(1.0);
        let a = r_sum_eps0(&k, DEFAULT_ORDER, P).unwrap();
        let b = r_sum_eps0(&k, DEFAULT_ORDER + 5, P).unwrap();
        assert!(Float::with_val(P, &a.value - &b.value).abs() < 2f64.powi(-128));
        let c = r_sum_eps0(&Float::with_val(512, 1.0), DEFAULT_ORDER, 512).unwrap();
        assert!(Float::with_val(P, &a.value - &c.value).abs() < 2f64.powi(-200));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(r_sum_eps0(&kf(0.0), 12, P).is_err());
        assert!(r_sum_deriv_eps0(&kf(1.0), 0, 3, 12, P).is_err());
        // κ-free degenerate configuration: x + y ≡ 0 cannot occur for the (1,2,4) multipliers
        for p in subset_pairs() {
            assert!(r_term_series(p, &kf(1.0), 2, 128).is_ok());
        }
    }

    #[test]
    fn analyticity_random_kappa() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let k = rng.gen_range(0.1..=10.0);
            let r = r_sum_eps0(&kf(k), DEFAULT_ORDER, P).unwrap();
            assert!(r.max_negative < 2f64.powi(-128));
            assert!(r.imag < 2f64.powi(-128));
        }
    }

    #[test]
    fn p_over_r_scaling() {
        let cfg = PrecisionConfig::new(128);
        let pair = SubsetPair {
            s_mask: 1,
            t_mask: 2,
        };
        let base = [
            Complex::from_f64(128, 0.013, 0.2),
            Complex::from_f64(128, 0.021, -0.05),
            Complex::from_f64(128, 0.017, 0.11),
        ];
        let bb = [
            Complex::from_f64(128, 0.011, -0.1),
            Complex::from_f64(128, 0.019, 0.07),
            Complex::from_f64(128, 0.023, 0.3),
        ];
        let mut pts = Vec::new();
        for h in [1e-2f64, 1e-3, 1e-4] {
            let hf = Float::with_val(128, h);
            let a = ShiftSet::new(base.clone().map(|c| c.scale(&hf))).unwrap();
            let b = ShiftSet::new(bb.clone().map(|c| c.scale(&hf))).unwrap();
            let r = p_vs_r_ratio(pair, &a, &b, &cfg).unwrap();
            let (x, y) = pair.sets(&a, &b);
            let d = delta_xy(&x, &y);
            let lnpi = Float::with_val(128, pi(128).ln_ref());
            let pif = (-d.scale(&lnpi)).exp();
            pts.push((h.ln(), (&r - &pif).abs().to_f64().ln()));
        }
        let slope = (pts[2].1 - pts[0].1) / (pts[2].0 - pts[0].0);
        assert!((slope - 1.0).abs() < 0.05, "slope {slope}");
        let half = ShiftSet::new([
            Complex::from_f64(128, 0.5 / 4.0, 0.0),
            Complex::from_f64(128, 0.1, 0.0),
            Complex::from_f64(128, 0.2, 0.0),
        ])
        .unwrap();
        assert!(p_vs_r_ratio(pair, &half, &half, &cfg).unwrap().is_finite());
    }
}
