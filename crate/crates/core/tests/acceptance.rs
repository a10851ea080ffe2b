//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Integer, Rational};

use dirichlet_gaps::characters::{enumerate_characters, gauss_sum};
use dirichlet_gaps::kappacoeffs::{c0_assembled, c_body, solve_kappa, Coefficients, Trig};
use dirichlet_gaps::lfunc::{LFunction, PrecisionConfig};
use dirichlet_gaps::localconst::{
    a3, a3_l, a_partial, b_p_closed_zero_shifts, b_p_exact_zero_shifts, primes_up_to, slope_fit,
    z_p_inv,
};
use dirichlet_gaps::mp::Complex;
use dirichlet_gaps::shiftframe::{r_sum_deriv_eps0, r_sum_eps0, ShiftSet, DEFAULT_ORDER};
use dirichlet_gaps::weights::{check_weights, erfc_bound_check, WeightParams, DEFAULT_GRID};
use dirichlet_gaps::zeros::{count_vs_formula, wirtinger_check};

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn kappa_root() -> Outcome {
    let s = match solve_kappa(1e-12, 256) {
        Ok(s) => s,
        Err(e) => return outcome(false, format!("solver error: {e}")),
    };
    let (k, r, m) = (
        s.kappa_star.to_f64(),
        s.ratio_to_2pi.to_f64(),
        s.gap_multiplier.to_f64(),
    );
    let pass =
        (7.40..=7.44).contains(&k) && (1.17..=1.19).contains(&r) && (3.52..=3.56).contains(&m);
    outcome(
        pass,
        format!("kappa*={k:.10} kappa*/2pi={r:.8} 3kappa*/2pi={m:.8}"),
    )
}

fn anchors() -> Outcome {
    let c = Coefficients::new();
    let f9 = Integer::from(Integer::factorial(9));
    let f10 = Integer::from(Integer::factorial(10));
    let want0 = Rational::from((Integer::from(42), f9));
    let want = Rational::from((Integer::from(3), f10));
    let mut pass = c.get(0).map(|m| m.at_zero() == want0).unwrap_or(false);
    let mut got = vec![format!("C0(0)={}", c.get(0).unwrap().at_zero())];
    for w in [1, 2, 4, 6] {
        let v = c.get(w).unwrap().at_zero();
        pass &= v == want;
        got.push(format!("C{w}(0)={v}"));
    }
    outcome(pass, got.join(" "))
}

fn oracle_equivalence() -> Outcome {
    let c = Coefficients::new();
    let mut worst = 0f64;
    let mut worst_neg = 0f64;
    for k in [0.5, 1.0, 2.0, 4.0, 7.42] {
        let kk = Float::with_val(256, k);
        let e = match r_sum_eps0(&kk, DEFAULT_ORDER, 256) {
            Ok(e) => e,
            Err(err) => return outcome(false, format!("kappa={k}: {err}")),
        };
        worst_neg = worst_neg.max(e.max_negative);
        worst = worst.max(
            Float::with_val(256, &e.value - c.eval(0, &kk).unwrap())
                .abs()
                .to_f64(),
        );
    }
    for k in [1.0, 2.0] {
        let kk = Float::with_val(256, k);
        let e = match r_sum_deriv_eps0(&kk, 3, 4, DEFAULT_ORDER, 256) {
            Ok(e) => e,
            Err(err) => return outcome(false, format!("kappa={k} d34: {err}")),
        };
        worst_neg = worst_neg.max(e.max_negative);
        worst = worst.max(
            Float::with_val(256, &e.value - c.eval(4, &kk).unwrap())
                .abs()
                .to_f64(),
        );
    }
    outcome(
        worst < 1e-8 && worst_neg < 1e-30,
        format!("max|engine-closed|={worst:.3e} max negative-power residual={worst_neg:.3e}"),
    )
}

fn assembly() -> Outcome {
    let lhs = c0_assembled();
    let rhs = c_body(0).unwrap();
    let mut keys: Vec<(Trig, u32, i32)> = lhs
        .terms()
        .map(|(k, _)| *k)
        .chain(rhs.terms().map(|(k, _)| *k))
        .collect();
    keys.sort();
    keys.dedup();
    let mismatches = keys
        .iter()
        .filter(|&&(t, m, j)| lhs.coefficient(t, m, j) != rhs.coefficient(t, m, j))
        .count();
    outcome(
        mismatches == 0,
        format!(
            "{} coefficients compared, {mismatches} mismatches",
            keys.len()
        ),
    )
}

fn gauss_norms() -> Outcome {
    let mut worst = 0f64;
    let mut count = 0;
    for q in 1..=200u64 {
        for c in enumerate_characters(q)
            .into_iter()
            .filter(|c| c.is_primitive())
        {
            worst = worst.max(gauss_sum(&c, 128).norm_residual());
            count += 1;
        }
    }
    outcome(
        worst < 1e-10,
        format!("{count} primitive characters, max ||G|^2-q|={worst:.3e}"),
    )
}

fn reality_and_fe() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let chars: Vec<_> = (3..=50u64)
        .flat_map(enumerate_characters)
        .filter(|c| c.is_even() && c.is_primitive())
        .collect();
    let cfg = PrecisionConfig::new(128);
    let mut worst_im = 0f64;
    for _ in 0..100 {
        let c = &chars[rng.gen_range(0..chars.len())];
        let t = rng.gen_range(-40.0..40.0);
        let lf = LFunction::new(c, &cfg).unwrap();
        match lf.w_complex(&Float::with_val(128, t)) {
            Ok(v) => worst_im = worst_im.max(v.value.im.to_f64().abs()),
            Err(e) => return outcome(false, format!("W({t}) mod {}: {e}", c.modulus())),
        }
    }
    let mut worst_fe = 0f64;
    for _ in 0..20 {
        let c = &chars[rng.gen_range(0..chars.len())];
        let s = Complex::from_f64(128, rng.gen_range(-0.5..1.5), rng.gen_range(-40.0..40.0));
        let lf = LFunction::new(c, &cfg).unwrap();
        match lf.fe_residual(&s) {
            Ok(r) => worst_fe = worst_fe.max(r),
            Err(e) => return outcome(false, format!("FE mod {}: {e}", c.modulus())),
        }
    }
    outcome(
        worst_im < 1e-8 && worst_fe < 1e-10,
        format!(
            "max|Im W|={worst_im:.3e} (100 samples) max FE residual={worst_fe:.3e} (20 samples)"
        ),
    )
}

fn zero_counts() -> Outcome {
    let cfg = PrecisionConfig::new(128);
    let mut pass = true;
    let mut parts = Vec::new();
    for (q, big_t) in [(1u64, 30.0), (5, 50.0), (13, 40.0)] {
        let c = enumerate_characters(q)
            .into_iter()
            .find(|c| c.is_even() && c.is_primitive())
            .unwrap();
        let lf = LFunction::new(&c, &cfg).unwrap();
        match count_vs_formula(&lf, big_t) {
            Ok(k) => {
                pass &= k.residual.abs() <= k.envelope;
                parts.push(format!(
                    "(q={q},T={big_t}): N={} pred={:.2} |res|={:.2} <= {:.2}",
                    k.empirical,
                    k.predicted,
                    k.residual.abs(),
                    k.envelope
                ));
            }
            Err(e) => return outcome(false, format!("q={q}: {e}")),
        }
    }
    outcome(pass, parts.join("; "))
}

fn euler_cross_check() -> Outcome {
    let a = a3(1_000_000, 128).unwrap();
    let l = a3_l(1_000_000, 128).unwrap();
    let ratio = Float::with_val(128, &l.value / &a.value).to_f64();
    let f = slope_fit(1_000_000).unwrap();
    let ds = (f.slope - ratio).abs() / ratio;
    let dh = (f.h2_over_t - ratio / 2.0).abs() / (ratio / 2.0);
    outcome(
        ds < 0.02 && dh < 0.03,
        format!(
            "slope={:.9} ratio={ratio:.9} rel={ds:.2e}; H2/t={:.9} rel={dh:.2e}",
            f.slope, f.h2_over_t
        ),
    )
}

fn local_factors() -> Outcome {
    let prec = 256;
    let z = ShiftSet::zeros(prec);
    let primes = primes_up_to(100);
    let exact_ok = primes
        .iter()
        .all(|&p| b_p_exact_zero_shifts(p, 3, 3) == b_p_closed_zero_shifts(p));
    let mut worst_z = 0f64;
    for &p in &primes {
        let want = Rational::from(1 - Rational::from((1, p)));
        let mut w9 = Rational::from(1);
        for _ in 0..9 {
            w9 *= &want;
        }
        let got = z_p_inv(&z, &z, p, prec).unwrap();
        worst_z = worst_z.max((got - Complex::from_rational(prec, &w9)).abs().to_f64());
    }
    let zz = ShiftSet::zeros(128);
    let ap = a_partial(&zz, &zz, 100_000, 128).unwrap();
    let a = a3(100_000, 128).unwrap();
    let d = Float::with_val(128, &ap.value - &a.value).abs().to_f64();
    outcome(
        exact_ok && worst_z < 1e-60 && d < 1e-15,
        format!("B_p exact for {} primes: {exact_ok}; max|Z_p^-1-(1-1/p)^9|={worst_z:.2e}; |A(0;1e5)-a3(1e5)|={d:.2e}", primes.len()),
    )
}

fn weight_sandwiches() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (params, grid, random) in [
        (
            WeightParams::new(0.01, 0.05, 10.0).unwrap(),
            DEFAULT_GRID,
            10_000,
        ),
        (WeightParams::new(0.01, 0.1, 2.0).unwrap(), 501, 1_000),
    ] {
        match check_weights(&params, grid, random, SEED) {
            Ok(r) => {
                let failed: Vec<_> = r.checks.iter().filter(|c| !c.ok).map(|c| c.name).collect();
                pass &= failed.is_empty();
                parts.push(format!(
                    "T={} u={} eps={}: {}/{} inequalities hold{}",
                    params.t,
                    params.u,
                    params.eps,
                    r.checks.len() - failed.len(),
                    r.checks.len(),
                    if failed.is_empty() {
                        String::new()
                    } else {
                        format!(" (failed: {})", failed.join(", "))
                    }
                ));
            }
            Err(e) => return outcome(false, format!("{e}")),
        }
    }
    for x in [0.0, 1.0, 3.0] {
        let c = erfc_bound_check(x, 128).unwrap();
        pass &= c.ok;
    }
    parts.push("erfc(x) <= exp(-x^2) at x=0,1,3".into());
    outcome(pass, parts.join("; "))
}

fn wirtinger() -> Outcome {
    let n = 4001;
    let sample = |a: f64, b: f64, f: &dyn Fn(f64) -> f64| -> Vec<f64> {
        (0..n)
            .map(|i| f(a + (b - a) * i as f64 / (n - 1) as f64))
            .collect()
    };
    let eq = wirtinger_check(&sample(0.0, PI, &f64::sin), 0.0, PI).unwrap();
    let eq_err = (eq.lhs - eq.rhs).abs();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut ok = 0;
    for _ in 0..200 {
        let k = rng.gen_range(1..=6);
        let coefs: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let a = rng.gen_range(-5.0..5.0);
        let len = rng.gen_range(0.5..10.0);
        let y = sample(a, a + len, &|t: f64| {
            coefs
                .iter()
                .enumerate()
                .map(|(j, c)| c * ((j + 1) as f64 * PI * (t - a) / len).sin())
                .sum()
        });
        if wirtinger_check(&y, a, a + len)
            .map(|r| r.ok)
            .unwrap_or(false)
        {
            ok += 1;
        }
    }
    outcome(
        eq_err < 1e-6 && ok == 200,
        format!("sin t on [0,pi]: |lhs-rhs|={eq_err:.2e}; {ok}/200 random polynomials"),
    )
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 11] = [
        (
            "kappa root and gap multiplier",
            Duration::from_secs(10),
            kappa_root,
        ),
        (
            "kappa->0 anchors 42/9! and 3/10!",
            Duration::from_secs(1),
            anchors,
        ),
        (
            "shift-frame oracle equals closed forms",
            Duration::from_secs(120),
            oracle_equivalence,
        ),
        ("C0 assembly identity", Duration::from_secs(1), assembly),
        (
            "Gauss-sum norms q<=200",
            Duration::from_secs(60),
            gauss_norms,
        ),
        (
            "W reality and functional equation",
            Duration::from_secs(300),
            reality_and_fe,
        ),
        (
            "zero counting envelope",
            Duration::from_secs(600),
            zero_counts,
        ),
        (
            "Euler-product slope cross-check",
            Duration::from_secs(120),
            euler_cross_check,
        ),
        (
            "local factors at zero shifts",
            Duration::from_secs(60),
            local_factors,
        ),
        (
            "weight sandwiches and erfc bound",
            Duration::from_secs(60),
            weight_sandwiches,
        ),
        ("Wirtinger harness", Duration::from_secs(60), wirtinger),
    ];
    let mut failures = 0;
    for (i, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let pass = o.pass && in_time;
        if !pass {
            failures += 1;
        }
        println!(
            "{} [{:>2}] {name} ({:.2}s / {}s budget{}) {}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { ", over budget" },
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
