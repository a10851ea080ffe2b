//! Command-line front end: argument model, dispatch and report rendering.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Float;
use serde_json::{Map, Value};

use crate::characters::{character, enumerate_characters, gauss_sum, DirichletCharacter};
use crate::error::{Error, Result};
use crate::kappacoeffs::{c_alias, macl_eval, solve_kappa, Coefficients, Regime};
use crate::lfunc::{LFunction, PrecisionConfig};
use crate::localconst::{a3, a3_l, euler_ratio, slope_fit, EulerProductEstimate};
use crate::mp::{to_decimal, Complex, Prec};
use crate::shiftframe::{r_sum_deriv_eps0, r_sum_eps0, Eps0};
use crate::weights::{
    check_weights, erfc_bound_check, gamma_tail_check, WeightParams, DEFAULT_EPS_FRACTION,
    DEFAULT_GRID,
};
use crate::zeros::{count_vs_formula, gap_report, scan_zeros, DEFAULT_REFINE_TOL};

pub const SCHEMA: &str = "dgaps-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "dgaps",
    version,
    about = "Zero gaps of even primitive Dirichlet L-functions"
)]
pub struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 128)]
    pub prec_bits: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate characters with conductor, parity and Gauss-sum norm residual.
    Characters(CharactersArgs),
    /// Evaluate L(s, χ) or the real critical-line function W(t, χ).
    #[command(subcommand)]
    Lfunc(LfuncCommand),
    /// Locate critical-line zeros, gap statistics and zero-count checks.
    #[command(subcommand)]
    Zeros(ZerosCommand),
    /// Shift-frame residue sums at ε = 0.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Closed-form κ coefficients and the root κ*.
    #[command(subcommand)]
    Coeffs(CoeffsCommand),
    /// Euler-product constants and the φ♭ slope fit.
    #[command(subcommand)]
    Constants(ConstantsCommand),
    /// Smooth weight sandwiches and Gaussian tail bounds.
    #[command(subcommand)]
    Weights(WeightsCommand),
}

#[derive(Debug, Args)]
pub struct CharactersArgs {
    #[arg(long, conflicts_with_all = ["q_min", "q_max"])]
    pub q: Option<u64>,
    #[arg(long, requires = "q_max")]
    pub q_min: Option<u64>,
    #[arg(long, requires = "q_min")]
    pub q_max: Option<u64>,
    #[arg(long)]
    pub primitive: bool,
    #[arg(long, conflicts_with = "odd")]
    pub even: bool,
    #[arg(long)]
    pub odd: bool,
}

#[derive(Debug, Args)]
pub struct CharRef {
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = 0)]
    pub chi_index: usize,
}

#[derive(Debug, Subcommand)]
pub enum LfuncCommand {
    /// `L(s, χ)` with the functional-equation residual, or `W(t, χ)`.
    Eval {
        #[command(flatten)]
        chi: CharRef,
        /// Complex point as `re,im`.
        #[arg(
            long,
            conflicts_with = "t",
            required_unless_present = "t",
            allow_hyphen_values = true
        )]
        s: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ZerosCommand {
    /// Sign-change scan of `W` with bisection refinement.
    Scan {
        #[command(flatten)]
        chi: CharRef,
        #[arg(long, allow_hyphen_values = true)]
        t_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        t_max: f64,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_REFINE_TOL)]
        tol: f64,
    },
    /// Largest normalized gap over all even primitive characters in a modulus range.
    Gaps {
        #[arg(long)]
        q_min: u64,
        #[arg(long)]
        q_max: u64,
        #[arg(long, default_value_t = 0.0)]
        t_min: f64,
        #[arg(long, default_value_t = 30.0)]
        t_max: f64,
    },
    /// Zero count on `|t| < T` against the Riemann–von Mangoldt main term.
    CountCheck {
        #[command(flatten)]
        chi: CharRef,
        #[arg(long = "T")]
        big_t: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// `ε⁰` coefficient of the twenty-term shifted sum.
    C0 {
        #[arg(long)]
        kappa: f64,
        #[arg(long, default_value_t = crate::shiftframe::DEFAULT_ORDER)]
        order: i32,
    },
    /// `ε⁰` coefficient of `∂_i ∂_j` of the shifted sum.
    Ci {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        kappa: f64,
        #[arg(long, default_value_t = crate::shiftframe::DEFAULT_ORDER)]
        order: i32,
    },
}

#[derive(Debug, Subcommand)]
pub enum CoeffsCommand {
    /// Closed-form `C_i(κ)`, `i` in 0..=9.
    Eval {
        #[arg(long)]
        which: u32,
        #[arg(long)]
        kappa: f64,
    },
    /// Smallest positive root of `C₀(κ) = (κ/π)²(C₁ + 2C₂ + 2C₄ + 4C₆)`.
    Solve {
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConstantsCommand {
    /// `a₃ = Π_p (1−1/p)⁴(1 + 4/p + 1/p²)` over `p ≤ prime_limit`, with tail bound.
    A3 {
        #[arg(long, default_value_t = 1_000_000)]
        prime_limit: u64,
    },
    /// `a₃,L`, the Euler product weighted by the extra `(1−1/p)` factor, over `p ≤ prime_limit`.
    A3l {
        #[arg(long, default_value_t = 1_000_000)]
        prime_limit: u64,
    },
    /// Least-squares slope of the arithmetic sum against `log x`.
    Slope {
        #[arg(long, default_value_t = 1_000_000)]
        x_max: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum WeightsCommand {
    /// Sandwich inequalities, reasonableness constants and Gaussian tail bounds.
    Check {
        #[arg(long, default_value_t = crate::weights::DEFAULT_U)]
        u: f64,
        /// Defaults to `0.05·T`.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long = "T", default_value_t = 10.0)]
        big_t: f64,
        /// Seeded random samples per sampled range.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
}

/// A rendered result: scalar fields plus an optional table.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: String,
    pub fields: Map<String, Value>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Report {
    fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            ..Default::default()
        }
    }

    fn field(&mut self, k: &str, v: impl Into<Value>) -> &mut Self {
        self.fields.insert(k.into(), v.into());
        self
    }

    pub fn to_json(&self) -> String {
        let mut m = Map::new();
        m.insert("schema".into(), SCHEMA.into());
        m.insert("command".into(), self.command.clone().into());
        for (k, v) in &self.fields {
            m.insert(k.clone(), v.clone());
        }
        if !self.columns.is_empty() {
            let rows = self
                .rows
                .iter()
                .map(|r| {
                    Value::Object(
                        self.columns
                            .iter()
                            .map(|c| c.to_string())
                            .zip(r.iter().cloned())
                            .collect(),
                    )
                })
                .collect();
            m.insert("rows".into(), Value::Array(rows));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let cell = |v: &Value| match v {
            Value::String(s) => s.clone(),
            Value::Null => String::new(),
            other => other.to_string(),
        };
        if self.columns.is_empty() {
            w.write_record(["field", "value"]).expect("in-memory write");
            for (k, v) in &self.fields {
                w.write_record([k.clone(), cell(v)])
                    .expect("in-memory write");
            }
        } else {
            w.write_record(&self.columns).expect("in-memory write");
            for r in &self.rows {
                w.write_record(r.iter().map(cell)).expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

/// Shortest round-trip decimal, in exponent form outside `[1e-6, 1e16)`.
pub fn num(x: f64) -> Value {
    let a = x.abs();
    let s = if x == 0.0 || (1e-6..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    };
    Value::String(s)
}

pub fn dec(x: &Float) -> Value {
    Value::String(to_decimal(x))
}

fn complex_fields(r: &mut Report, prefix: &str, z: &Complex) {
    r.field(&format!("{prefix}_re"), dec(&z.re));
    r.field(&format!("{prefix}_im"), dec(&z.im));
}

fn lookup(c: &CharRef) -> Result<DirichletCharacter> {
    if c.q == 0 {
        return Err(Error::InvalidInput("q must be positive".into()));
    }
    character(c.q, c.chi_index).ok_or_else(|| {
        Error::InvalidInput(format!(
            "no character with index {} mod {}",
            c.chi_index, c.q
        ))
    })
}

fn parse_complex(s: &str, prec: Prec) -> Result<Complex> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Error::InvalidInput(format!("expected `re,im`, got `{s}`"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let re = Float::parse(parts[0]).map_err(|_| bad())?;
    let im = Float::parse(parts[1]).map_err(|_| bad())?;
    Ok(Complex::new(
        Float::with_val(prec, re),
        Float::with_val(prec, im),
    ))
}

fn characters_cmd(a: &CharactersArgs, prec: Prec) -> Result<Report> {
    let (lo, hi) = match (a.q, a.q_min, a.q_max) {
        (Some(q), None, None) => (q, q),
        (None, Some(lo), Some(hi)) => (lo, hi),
        _ => {
            return Err(Error::InvalidInput(
                "give --q or both --q-min and --q-max".into(),
            ))
        }
    };
    if lo == 0 || lo > hi {
        return Err(Error::InvalidInput(format!(
            "invalid modulus range [{lo}, {hi}]"
        )));
    }
    let mut r = Report::new("characters");
    r.columns = vec![
        "modulus",
        "index",
        "conductor",
        "parity",
        "primitive",
        "real",
        "gauss_norm_residual",
    ];
    for q in lo..=hi {
        for c in enumerate_characters(q) {
            if (a.primitive && !c.is_primitive())
                || (a.even && !c.is_even())
                || (a.odd && c.is_even())
            {
                continue;
            }
            let res = gauss_sum(&c, prec).norm_residual();
            r.rows.push(vec![
                q.into(),
                c.index().into(),
                c.conductor().into(),
                if c.is_even() { "even" } else { "odd" }.into(),
                c.is_primitive().into(),
                c.is_real().into(),
                num(res),
            ]);
        }
    }
    r.field("count", r.rows.len());
    Ok(r)
}

fn lfunc_cmd(cmd: &LfuncCommand, prec: Prec) -> Result<Report> {
    let LfuncCommand::Eval { chi, s, t } = cmd;
    let c = lookup(chi)?;
    let cfg = PrecisionConfig::new(prec);
    let lf = LFunction::new(&c, &cfg)?;
    let mut r = Report::new("lfunc eval");
    r.field("modulus", c.modulus()).field("index", c.index());
    match (s, t) {
        (Some(s), None) => {
            let z = parse_complex(s, prec)?;
            let l = lf.l(&z)?;
            complex_fields(&mut r, "s", &z);
            complex_fields(&mut r, "value", &l.value);
            r.field("error_estimate", num(l.err));
            r.field("fe_residual", num(lf.fe_residual(&z)?));
        }
        (None, Some(t)) => {
            let tf = Float::with_val(prec, *t);
            let w = lf.w_complex(&tf)?;
            let real = lf.w(&tf)?;
            let half = Complex::new(Float::with_val(prec, 0.5), tf.clone());
            r.field("t", num(*t));
            r.field("w", dec(&real));
            r.field("w_imag_residual", dec(&w.value.im));
            r.field("error_estimate", num(w.err));
            r.field("fe_residual", num(lf.fe_residual(&half)?));
        }
        _ => {
            return Err(Error::InvalidInput(
                "give exactly one of --s and --t".into(),
            ))
        }
    }
    Ok(r)
}

fn zeros_cmd(cmd: &ZerosCommand, prec: Prec) -> Result<Report> {
    let cfg = PrecisionConfig::new(prec);
    match cmd {
        ZerosCommand::Scan {
            chi,
            t_min,
            t_max,
            step,
            tol,
        } => {
            let c = lookup(chi)?;
            let lf = LFunction::new(&c, &cfg)?;
            let z = scan_zeros(&lf, *t_min, *t_max, *step, *tol)?;
            let mut r = Report::new("zeros scan");
            r.field("modulus", c.modulus())
                .field("index", c.index())
                .field("count", z.ordinates.len());
            let factor = (c.modulus() as f64).ln() / (2.0 * std::f64::consts::PI);
            r.columns = vec!["ordinate", "gap", "normalized_gap"];
            for (k, t) in z.ordinates.iter().enumerate() {
                let (g, n) = match k {
                    0 => (Value::Null, Value::Null),
                    _ => {
                        let g = t - z.ordinates[k - 1];
                        (
                            num(g),
                            if c.modulus() > 1 {
                                num(g * factor)
                            } else {
                                Value::Null
                            },
                        )
                    }
                };
                r.rows.push(vec![num(*t), g, n]);
            }
            Ok(r)
        }
        ZerosCommand::Gaps {
            q_min,
            q_max,
            t_min,
            t_max,
        } => {
            if *q_min < 3 || q_min > q_max {
                return Err(Error::InvalidInput("need 3 ≤ q-min ≤ q-max".into()));
            }
            let mut r = Report::new("zeros gaps");
            r.columns = vec!["modulus", "index", "zeros", "max_normalized_gap"];
            let mut best: Option<(f64, u64, usize)> = None;
            for q in *q_min..=*q_max {
                for c in enumerate_characters(q)
                    .into_iter()
                    .filter(|c| c.is_even() && c.is_primitive())
                {
                    let lf = LFunction::new(&c, &cfg)?;
                    let z = scan_zeros(&lf, *t_min, *t_max, None, DEFAULT_REFINE_TOL)?;
                    let max = match gap_report(&z.ordinates, q) {
                        Ok(g) => Some(g.max_normalized),
                        Err(Error::EmptyReport(_)) => None,
                        Err(e) => return Err(e),
                    };
                    if let Some(m) = max {
                        if best.map_or(true, |b| m > b.0) {
                            best = Some((m, q, c.index()));
                        }
                    }
                    r.rows.push(vec![
                        q.into(),
                        c.index().into(),
                        z.ordinates.len().into(),
                        max.map_or(Value::Null, num),
                    ]);
                }
            }
            let (m, q, i) = best
                .ok_or_else(|| Error::EmptyReport("no character had two zeros in range".into()))?;
            r.field("max_normalized_gap", num(m))
                .field("at_modulus", q)
                .field("at_index", i);
            Ok(r)
        }
        ZerosCommand::CountCheck { chi, big_t } => {
            let c = lookup(chi)?;
            let lf = LFunction::new(&c, &cfg)?;
            let k = count_vs_formula(&lf, *big_t)?;
            let mut r = Report::new("zeros count-check");
            r.field("modulus", c.modulus())
                .field("index", c.index())
                .field("T", num(*big_t))
                .field("empirical", k.empirical)
                .field("predicted", num(k.predicted))
                .field("residual", num(k.residual))
                .field("envelope", num(k.envelope))
                .field("ok", k.residual.abs() <= k.envelope);
            Ok(r)
        }
    }
}

fn eps0_report(name: &str, e: &Eps0, kappa: f64, order: i32) -> Report {
    let mut r = Report::new(name);
    r.field("kappa", num(kappa))
        .field("order", order)
        .field("value", dec(&e.value))
        .field("max_negative_residual", num(e.max_negative))
        .field("imag_residual", num(e.imag));
    r.columns = vec!["power", "re", "im"];
    for (k, c) in e.series.terms() {
        r.rows.push(vec![k.into(), dec(&c.re), dec(&c.im)]);
    }
    r
}

fn oracle_cmd(cmd: &OracleCommand, prec: Prec) -> Result<Report> {
    match cmd {
        OracleCommand::C0 { kappa, order } => {
            let e = r_sum_eps0(&Float::with_val(prec, *kappa), *order, prec)?;
            Ok(eps0_report("oracle c0", &e, *kappa, *order))
        }
        OracleCommand::Ci { i, j, kappa, order } => {
            let e = r_sum_deriv_eps0(&Float::with_val(prec, *kappa), *i, *j, *order, prec)?;
            let mut r = eps0_report("oracle ci", &e, *kappa, *order);
            r.field("i", *i).field("j", *j);
            Ok(r)
        }
    }
}

fn coeffs_cmd(cmd: &CoeffsCommand, prec: Prec) -> Result<Report> {
    match cmd {
        CoeffsCommand::Eval { which, kappa } => {
            let base = c_alias(*which)?;
            let c = Coefficients::new();
            let v = macl_eval(c.get(base)?, &Float::with_val(prec, *kappa))?;
            let mut r = Report::new("coeffs eval");
            r.field("which", *which)
                .field("closed_form", base)
                .field("kappa", num(*kappa))
                .field("value", dec(&v.value))
                .field(
                    "regime",
                    if v.regime == Regime::Taylor {
                        "taylor"
                    } else {
                        "direct"
                    },
                )
                .field("taylor_tail_bound", num(v.tail_bound));
            Ok(r)
        }
        CoeffsCommand::Solve { tol } => {
            let s = solve_kappa(*tol, prec.max(128))?;
            let mut r = Report::new("coeffs solve");
            r.field("kappa_star", dec(&s.kappa_star))
                .field("ratio_to_2pi", dec(&s.ratio_to_2pi))
                .field("gap_multiplier", dec(&s.gap_multiplier))
                .field("bracket_lo", num(s.bracket.0))
                .field("bracket_hi", num(s.bracket.1))
                .field("tol", num(*tol));
            r.columns = vec!["kappa", "h"];
            for (k, h) in &s.trace {
                r.rows.push(vec![num(*k), num(*h)]);
            }
            Ok(r)
        }
    }
}

fn product_report(name: &str, e: &EulerProductEstimate) -> Report {
    let mut r = Report::new(name);
    r.field("value", dec(&e.value))
        .field("tail_bound", num(e.tail_bound))
        .field("prime_cutoff", e.prime_cutoff)
        .field("factor_model", e.model.name());
    r
}

fn constants_cmd(cmd: &ConstantsCommand, prec: Prec) -> Result<Report> {
    match cmd {
        ConstantsCommand::A3 { prime_limit } => {
            Ok(product_report("constants a3", &a3(*prime_limit, prec)?))
        }
        ConstantsCommand::A3l { prime_limit } => {
            Ok(product_report("constants a3l", &a3_l(*prime_limit, prec)?))
        }
        ConstantsCommand::Slope { x_max } => {
            let f = slope_fit(*x_max)?;
            let (ratio, err) = euler_ratio((*x_max).max(100), prec)?;
            let rf = ratio.to_f64();
            let mut r = Report::new("constants slope");
            r.field("x_max", *x_max)
                .field("slope", num(f.slope))
                .field("intercept", num(f.intercept))
                .field("rms_residual", num(f.rms_residual))
                .field("euler_ratio", dec(&ratio))
                .field("euler_ratio_error", num(err))
                .field("slope_rel_diff", num((f.slope - rf) / rf))
                .field("h2_over_t", num(f.h2_over_t))
                .field("h2_rel_diff", num((f.h2_over_t - rf / 2.0) / (rf / 2.0)));
            r.columns = vec!["x", "sum", "residual"];
            for (x, s, e) in &f.residuals {
                r.rows.push(vec![num(*x), num(*s), num(*e)]);
            }
            Ok(r)
        }
    }
}

fn weights_cmd(cmd: &WeightsCommand, seed: u64) -> Result<Report> {
    let WeightsCommand::Check {
        u,
        eps,
        big_t,
        samples,
        grid,
    } = cmd;
    let params = WeightParams::new(*u, eps.unwrap_or(DEFAULT_EPS_FRACTION * big_t), *big_t)?;
    let w = check_weights(&params, *grid, *samples, seed)?;
    let mut r = Report::new("weights check");
    r.field("u", num(params.u))
        .field("eps", num(params.eps))
        .field("T", num(params.t))
        .field("seed", seed)
        .field("prec_bits", w.prec)
        .field("phi1_informative", w.phi1_informative)
        .field("all_ok", w.all_ok())
        .field("N1_psi1", num(w.reasonableness.n1_psi1))
        .field("N1_psi2", num(w.reasonableness.n1_psi2))
        .field("N2_psi1", num(w.reasonableness.n2_psi1))
        .field("N2_psi2", num(w.reasonableness.n2_psi2))
        .field("N3_phi1", dec(&w.reasonableness.n3_phi1))
        .field("N3_phi2", dec(&w.reasonableness.n3_phi2));
    for x in [0.0, 1.0, 3.0] {
        let e = erfc_bound_check(x, 128)?;
        r.field(&format!("erfc_{x}"), dec(&e.erfc))
            .field(&format!("erfc_{x}_ok"), e.ok);
    }
    let tail = gamma_tail_check(20.0, 96)?;
    r.field("gamma_tail_q20", dec(&tail.integral))
        .field("gamma_tail_q20_target", dec(&tail.target))
        .field("gamma_tail_q20_ok", tail.ok);
    r.columns = vec![
        "inequality",
        "samples",
        "worst_margin",
        "worst_at",
        "resolution",
        "strict",
        "ok",
    ];
    for c in &w.checks {
        r.rows.push(vec![
            c.name.into(),
            c.samples.into(),
            dec(&c.worst_margin),
            num(c.worst_at),
            dec(&c.resolution),
            c.strict.into(),
            c.ok.into(),
        ]);
    }
    Ok(r)
}

/// Executes the parsed command; nothing is printed here.
pub fn run(cli: &Cli) -> Result<Report> {
    let prec = cli.prec_bits;
    if !(32..=65_536).contains(&prec) {
        return Err(Error::InvalidInput(format!(
            "--prec-bits {prec} outside [32, 65536]"
        )));
    }
    match &cli.command {
        Command::Characters(a) => characters_cmd(a, prec),
        Command::Lfunc(c) => lfunc_cmd(c, prec),
        Command::Zeros(c) => zeros_cmd(c, prec),
        Command::Oracle(c) => oracle_cmd(c, prec),
        Command::Coeffs(c) => coeffs_cmd(c, prec),
        Command::Constants(c) => constants_cmd(c, prec),
        Command::Weights(c) => weights_cmd(c, cli.seed),
    }
}

/// Parses `args`, runs, and returns `(exit code, stdout, stderr)`.
pub fn main_with_args<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                (0, text, String::new())
            } else {
                (2, String::new(), text)
            };
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            return (2, String::new(), "--threads must be positive\n".into());
        }
        // A second initialization in the same process is harmless; keep the first pool.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match run(&cli) {
        Ok(r) => (0, r.render(cli.format), String::new()),
        Err(e) => (e.exit_code(), String::new(), format!("error: {e}\n")),
    }
}
