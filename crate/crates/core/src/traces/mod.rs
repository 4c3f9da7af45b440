//! The trace sequence `t_j(s) = (4j+1)/|(s+2j)(2j+1−s)|²`, the Cauchy–Gauss
//! traces `tr^n(s) = Σ_j (−πn²)^j/j! · t_j(s)` and the Poisson terms.
//!
//! `tr^n` is summed twice. The series is evaluated in extended precision,
//! since its terms grow to about `e^{πn²}` before they cancel. The second
//! route never forms the series: termwise,
//! `v(1/|2j+s|² − 1/|2j+1−s|²) = −ζ_t(s)·t_j(s)`, and
//! `1/|2j+z|² = (1/y)∫₀^∞ e^{−(2j+x)t} sin(yt) dt`, so
//! `ζ_t(s)·tr^n(s) = −v(σ_n(s) − σ_n(1−s))` with
//! `σ_n(z) = (1/y)∫₀^∞ e^{−xt} sin(yt) e^{−πn² e^{−2t}} dt`.

mod bigreal;
mod poisson;

use std::f64::consts::{LN_10, LOG10_E, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{AuditError, Result};
use crate::fields;
use crate::quad::{integrate_finite_with_breaks, QuadResult, QuadSpec};
use crate::report::{complex_json, ClaimReport, Value};
use crate::specfun::trivial_zeta;

pub use bigreal::{BigReal, MAX_DIGITS, MIN_DIGITS};
pub use poisson::{
    poisson_coarse_bound, poisson_coarse_bound_check, poisson_decay_audit, poisson_limit, poisson_part,
    poisson_reduction_check, poisson_term, poisson_term_2d, poisson_vanishing_audit,
};

/// Inputs shared by the trace computations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceParams {
    pub s: Complex64,
    pub j_max: usize,
    pub n_max: usize,
    pub l_max: u32,
    pub digits: u32,
}

impl TraceParams {
    /// Parameters with a `j_max` generous enough for the requested digits.
    pub fn new(s: Complex64, n_max: usize, l_max: u32, digits: u32) -> Result<Self> {
        let c = PI * (n_max.max(1) * n_max.max(1)) as f64;
        let j_max = Self::min_j_max(n_max).max((4.0 * c) as usize + 3 * digits as usize + 60);
        let p = TraceParams { s, j_max, n_max, l_max, digits };
        p.validate()?;
        Ok(p)
    }

    pub fn with_j_max(mut self, j_max: usize) -> Self {
        self.j_max = j_max;
        self
    }

    /// Smallest `j_max` that reaches past the peak term of every `n ≤ n_max`.
    pub fn min_j_max(n_max: usize) -> usize {
        (PI * (n_max * n_max) as f64).ceil() as usize + 20
    }

    /// Digits needed to absorb the cancellation in `tr^n`.
    pub fn required_digits(n: usize) -> u32 {
        15 + (PI * (n * n) as f64 * LOG10_E).ceil() as u32
    }

    pub fn validate(&self) -> Result<()> {
        let (u, v) = (self.s.re, self.s.im);
        if !(0.0..=1.0).contains(&u) || v == 0.0 || !v.is_finite() {
            return Err(AuditError::Precondition(format!("need re(s) in [0, 1] and im(s) ≠ 0, got {}", self.s)));
        }
        if self.j_max < Self::min_j_max(self.n_max) {
            return Err(AuditError::Precondition(format!(
                "j_max {} is below the peak bound {}",
                self.j_max,
                Self::min_j_max(self.n_max)
            )));
        }
        bigreal::check_digits(self.digits)
    }
}

fn denominators(j: usize, s: Complex64) -> (f64, f64) {
    let two_j = 2.0 * j as f64;
    ((s + two_j).norm_sqr(), (two_j + 1.0 - s).norm_sqr())
}

/// `t_j(s)` in double precision.
pub fn trace_t(j: usize, s: Complex64) -> Result<f64> {
    let (a, b) = denominators(j, s);
    if a == 0.0 || b == 0.0 {
        return Err(AuditError::Pole(format!("t_{j} has a pole at s = {s}")));
    }
    Ok((4 * j + 1) as f64 / (a * b))
}

fn trace_t_big(j: usize, s: Complex64, digits: u32) -> Result<BigReal> {
    let big = |x: f64| BigReal::from_f64(x, digits);
    let two_j = 2.0 * j as f64;
    let (u, v) = (big(s.re)?, big(s.im)?);
    let v2 = &v * &v;
    let a = &u + &big(two_j)?;
    let b = &big(two_j + 1.0)? - &u;
    let den = &(&(&a * &a) + &v2) * &(&(&b * &b) + &v2);
    if den.is_zero() {
        return Err(AuditError::Pole(format!("t_{j} has a pole at s = {s}")));
    }
    Ok(&big((4 * j + 1) as f64)? / &den)
}

/// `t_j(s) = |(0.5−s)/(4j+1) + 0.5|⁻² · (4j+1)⁻¹ · |s+2j|⁻²`.
pub fn trace_decomposition_check(j: usize, s: Complex64) -> Result<ClaimReport> {
    let lhs = trace_t(j, s)?;
    let k = (4 * j + 1) as f64;
    let first = ((0.5 - s) / k + 0.5).norm_sqr();
    let third = (s + 2.0 * j as f64).norm_sqr();
    if first == 0.0 || third == 0.0 {
        return Err(AuditError::Pole(format!("t_{j} has a pole at s = {s}")));
    }
    let rhs = 1.0 / first / k / third;
    Ok(ClaimReport::compare(
        "traces.decomposition",
        fields! { "j" => j, "s" => complex_json(s) },
        Value::Real(lhs),
        Value::Real(rhs),
        4.0 * f64::EPSILON * lhs.abs(),
        1e-12 * lhs.abs().max(1.0),
    ))
}

/// `v(1/|2j+s|² − 1/|2j+1−s|²)` against `(4j+1)(1−2u)v / (|2j+s|²·|2j+1−s|²)`.
pub fn bridge_check(j: usize, s: Complex64) -> Result<ClaimReport> {
    let (a, b) = denominators(j, s);
    if a == 0.0 || b == 0.0 {
        return Err(AuditError::Pole(format!("t_{j} has a pole at s = {s}")));
    }
    let (u, v) = (s.re, s.im);
    let lhs = v * (1.0 / a - 1.0 / b);
    let rhs = (4 * j + 1) as f64 * (1.0 - 2.0 * u) * v / (a * b);
    Ok(ClaimReport::compare(
        "traces.bridge",
        fields! { "j" => j, "s" => complex_json(s) },
        Value::Real(lhs),
        Value::Real(rhs),
        8.0 * f64::EPSILON * (v / a).abs().max((v / b).abs()),
        1e-12,
    )
    .with_detail("minusZetaTTimesT", -trivial_zeta(s) * trace_t(j, s)?))
}

/// The claim `Im(1/(s(s−1))) = ζ_t(s)·t₀(s)`.
pub fn polar_term_check(s: Complex64) -> Result<ClaimReport> {
    let w = s * (s - 1.0);
    if w.norm_sqr() == 0.0 {
        return Err(AuditError::Pole(format!("s(s−1) vanishes at {s}")));
    }
    let lhs = w.inv().im;
    let rhs = trivial_zeta(s) * trace_t(0, s)?;
    Ok(ClaimReport::compare(
        "traces.polar_term",
        fields! { "s" => complex_json(s) },
        Value::Real(lhs),
        Value::Real(rhs),
        4.0 * f64::EPSILON * lhs.abs(),
        1e-12,
    )
    .with_detail("negatedRhs", -rhs))
}

/// Extended-precision sum of `tr^n(s)` with its certified tail.
#[derive(Debug, Clone)]
pub struct TraceSeries {
    pub sum: BigReal,
    /// Number of terms summed.
    pub terms: usize,
    /// Bound on the omitted terms.
    pub tail_bound: f64,
    /// Largest `|term|`, the scale of the cancellation.
    pub peak_term: f64,
}

impl TraceSeries {
    pub fn value(&self) -> f64 {
        self.sum.to_f64()
    }
}

/// `ln` of the bound `(4J+1)/(16J⁴) · c^J/J! / (1 − c/(J+1))` on
/// `Σ_{j≥J} c^j/j! · t_j(s)`, valid for `J ≥ 1`, `J + 1 > c` and `re(s) ∈ [0, 1]`.
fn ln_tail_bound(c: f64, big_j: usize) -> f64 {
    let jf = big_j as f64;
    let ratio = c / (jf + 1.0);
    ((4.0 * jf + 1.0) / (16.0 * jf.powi(4))).ln() + jf * c.ln() - ln_factorial(big_j) - (1.0 - ratio).ln()
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `tr^n(s) = Σ_j (−πn²)^j/j! · t_j(s)` in `p.digits` digits.
///
/// Summation stops once the tail bound drops under `10^{2−digits}` times the
/// peak term; reaching `p.j_max` first is a [`AuditError::Truncation`].
pub fn tr_cg_n_series(n: usize, p: &TraceParams) -> Result<TraceSeries> {
    if n == 0 {
        return Err(AuditError::Precondition("n must be at least 1".into()));
    }
    let needed = TraceParams::required_digits(n);
    if p.digits < needed {
        return Err(AuditError::InsufficientPrecision { needed, have: p.digits });
    }
    bigreal::check_digits(p.digits)?;
    if !(0.0..=1.0).contains(&p.s.re) || p.s.im == 0.0 {
        return Err(AuditError::Precondition(format!("need re(s) in [0, 1] and im(s) ≠ 0, got {}", p.s)));
    }
    let d = p.digits;
    let c = PI * (n * n) as f64;
    let c_big = &BigReal::from_f64(PI, d)? * &BigReal::from_f64((n * n) as f64, d)?;
    let mut coeff = BigReal::from_f64(1.0, d)?;
    let mut sum = BigReal::zero(d)?;
    let mut peak = 0.0f64;
    let ln_cut = (2.0 - d as f64) * LN_10;
    for j in 0..=p.j_max {
        if j > 0 {
            coeff = -(&(&coeff * &c_big) / &BigReal::from_f64(j as f64, d)?);
        }
        let term = &coeff * &trace_t_big(j, p.s, d)?;
        peak = peak.max(term.abs().to_f64());
        sum = &sum + &term;
        let big_j = j + 1;
        if (big_j as f64) + 1.0 > c {
            let ln_tail = ln_tail_bound(c, big_j);
            if ln_tail < ln_cut + peak.ln() {
                return Ok(TraceSeries { sum, terms: j + 1, tail_bound: ln_tail.exp(), peak_term: peak });
            }
        }
    }
    Err(AuditError::Truncation(p.j_max))
}

/// `Σ_{j<terms} (−πn²)^j/j! · t_j(s)` without any truncation certificate.
pub fn tr_cg_n_partial(n: usize, s: Complex64, terms: usize, digits: u32) -> Result<BigReal> {
    let c_big = &BigReal::from_f64(PI, digits)? * &BigReal::from_f64((n * n) as f64, digits)?;
    let mut coeff = BigReal::from_f64(1.0, digits)?;
    let mut sum = BigReal::zero(digits)?;
    for j in 0..terms {
        if j > 0 {
            coeff = -(&(&coeff * &c_big) / &BigReal::from_f64(j as f64, digits)?);
        }
        sum = &sum + &(&coeff * &trace_t_big(j, s, digits)?);
    }
    Ok(sum)
}

/// Sign convention of the coefficients `(±πn²)^j/j!` in `σ_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SigmaSign {
    /// `(−πn²)^j`, kernel `e^{−πn² e^{−2t}}`
    Alternating,
    /// `(+πn²)^j`, kernel `e^{+πn² e^{−2t}}`
    Positive,
}

/// `∫_lo^∞ e^{−xt} sin(yt) e^{κ e^{−2t}} dt`.
///
/// Quadrature up to `T` with `|κ| e^{−2T} ≤ 10⁻³`; beyond `T` the kernel is
/// expanded, `Σ_k κ^k/k! ∫_T^∞ e^{−(x+2k)t} sin(yt) dt`, and each integral
/// taken in closed form.
pub(crate) fn kernel_integral(kappa: f64, x: f64, y: f64, lo: f64, spec: &QuadSpec) -> Result<QuadResult<f64>> {
    let t_split = (0.5 * (kappa.abs() / 1e-3).ln()).max(lo).max(0.0);
    let f = |t: f64| (-x * t).exp() * (y * t).sin() * (kappa * (-2.0 * t).exp()).exp();
    let inner = spec.tightened(10.0);
    let mut head = if t_split > lo {
        let mut pts = vec![lo];
        let mut t = lo.ceil();
        while t < t_split {
            if t > lo {
                pts.push(t);
            }
            t += 1.0;
        }
        pts.push(t_split);
        integrate_finite_with_breaks(f, &pts, &inner)?
    } else {
        QuadResult { value: 0.0, error_estimate: 0.0, evaluations: 0, converged: true }
    };
    let mut tail = 0.0;
    let mut coeff = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..200 {
        if k > 0 {
            coeff *= kappa / k as f64;
        }
        let w = x + 2.0 * k as f64;
        let term = coeff * laplace_sine_tail(w, y, t_split);
        tail += term;
        last = term.abs();
        if last <= 1e-18 * tail.abs().max(1e-300) {
            break;
        }
    }
    head.value += tail;
    head.error_estimate += last;
    head.converged = head.converged && head.error_estimate <= spec.target(head.value);
    Ok(head)
}

/// `∫_T^∞ e^{−wt} sin(yt) dt = e^{−wT}(w sin yT + y cos yT)/(w² + y²)`.
fn laplace_sine_tail(w: f64, y: f64, t: f64) -> f64 {
    (-w * t).exp() * (w * (y * t).sin() + y * (y * t).cos()) / (w * w + y * y)
}

/// `σ_n(z) = Σ_j (±πn²)^j/j! · |2j+z|⁻²` as
/// `(1/y)∫₀^∞ e^{−xt} sin(yt) e^{±πn² e^{−2t}} dt`.
pub fn tr_cg_sigma(n: usize, z: Complex64, sign: SigmaSign, spec: &QuadSpec) -> Result<QuadResult<f64>> {
    let (x, y) = (z.re, z.im);
    if y == 0.0 || !y.is_finite() {
        return Err(AuditError::Precondition(format!("σ needs im(z) ≠ 0, got {z}")));
    }
    if !(x >= 0.0) {
        return Err(AuditError::Precondition(format!("σ needs re(z) ≥ 0, got {z}")));
    }
    let c = PI * (n * n) as f64;
    let kappa = match sign {
        SigmaSign::Alternating => -c,
        SigmaSign::Positive => c,
    };
    let r = kernel_integral(kappa, x, y, 0.0, spec)?;
    Ok(QuadResult { value: r.value / y, error_estimate: r.error_estimate / y.abs(), ..r })
}

/// `−v(σ_n(s) − σ_n(1−s))`, which equals `ζ_t(s)·tr^n(s)`.
pub fn zeta_t_trace_by_sigma(n: usize, s: Complex64, sign: SigmaSign, spec: &QuadSpec) -> Result<QuadResult<f64>> {
    let a = tr_cg_sigma(n, s, sign, spec)?;
    let b = tr_cg_sigma(n, 1.0 - s, sign, spec)?;
    let v = s.im;
    Ok(QuadResult {
        value: -v * (a.value - b.value),
        error_estimate: v.abs() * (a.error_estimate + b.error_estimate),
        evaluations: a.evaluations + b.evaluations,
        converged: a.converged && b.converged,
    })
}

/// Extended-precision series against the σ route for `ζ_t(s)·tr^n(s)`.
///
/// The positive-sign σ is reported alongside for comparison.
pub fn cross_path_check(n: usize, p: &TraceParams, spec: &QuadSpec) -> Result<ClaimReport> {
    let series = tr_cg_n_series(n, p)?;
    let zt = trivial_zeta(p.s);
    let by_sigma = zeta_t_trace_by_sigma(n, p.s, SigmaSign::Alternating, spec)?;
    let positive = zeta_t_trace_by_sigma(n, p.s, SigmaSign::Positive, spec)?;
    let lhs = zt * series.value();
    let err = by_sigma.error_estimate + zt.abs() * series.tail_bound;
    let mut report = ClaimReport::compare(
        "traces.cross_path",
        fields! { "n" => n, "s" => complex_json(p.s), "digits" => p.digits },
        Value::Real(lhs),
        Value::Real(by_sigma.value),
        err,
        1e-8,
    )
    .with_detail("series", series.value())
    .with_detail("seriesTerms", series.terms)
    .with_detail("peakTerm", series.peak_term)
    .with_detail("positiveSignResidual", (lhs - positive.value).abs());
    if zt != 0.0 {
        report = report.with_detail("sigmaTrace", by_sigma.value / zt);
    }
    Ok(report)
}

/// Finite differences `(−1)^k Δ^k t_j(s)` for `j + k ≤ j_max + k_max`.
///
/// A Hausdorff moment sequence has all of them nonnegative. `lhs` is the most
/// negative difference; the sign pattern lists one row of `+`/`-` per `k`.
pub fn hausdorff_moment_audit(
    s: Complex64,
    j_max: usize,
    k_max: usize,
    digits: u32,
    allow_outside_region: bool,
) -> Result<ClaimReport> {
    let in_region = s.re > 0.5 && s.re < 1.0 && s.im < 0.0;
    if !in_region && !allow_outside_region {
        return Err(AuditError::Precondition(format!("moment audit needs re(s) in (1/2, 1) and im(s) < 0, got {s}")));
    }
    let top = j_max + k_max;
    let mut row: Vec<BigReal> = (0..=top).map(|j| trace_t_big(j, s, digits)).collect::<Result<_>>()?;
    let scale = row.iter().map(|t| t.to_f64().abs()).fold(0.0, f64::max);
    let band = 2f64.powi(k_max as i32) * 10f64.powi(2 - digits as i32) * scale;
    let mut pattern = Vec::with_capacity(k_max + 1);
    let mut worst = (f64::INFINITY, 0usize, 0usize);
    let mut first_violation: Option<(usize, usize, f64)> = None;
    let mut negatives = 0usize;
    for k in 0..=k_max {
        let mut signs = String::with_capacity(row.len());
        for (j, d) in row.iter().enumerate() {
            let v = d.to_f64();
            let negative = v < -band;
            signs.push(if negative { '-' } else { '+' });
            if negative {
                negatives += 1;
                if first_violation.is_none() {
                    first_violation = Some((k, j, v));
                }
            }
            if v < worst.0 {
                worst = (v, k, j);
            }
        }
        pattern.push(signs);
        if k < k_max {
            row = row.windows(2).map(|w| &w[0] - &w[1]).collect();
        }
    }
    let inputs = fields! { "s" => complex_json(s), "jMax" => j_max, "kMax" => k_max, "digits" => digits };
    let mut report = ClaimReport::nonnegative("traces.hausdorff_moments", inputs, worst.0, band)
        .with_detail("worstAt", serde_json::json!({ "k": worst.1, "j": worst.2 }))
        .with_detail("negatives", negatives)
        .with_detail("signPattern", pattern);
    if let Some((k, j, v)) = first_violation {
        report = report.with_detail("firstViolation", serde_json::json!({ "k": k, "j": j, "value": v }));
    }
    if !in_region {
        report = report.with_detail("warn", "s outside re(s) in (1/2, 1), im(s) < 0");
    }
    Ok(report)
}

/// `Tr_CG(s) = 1/|s(s−1)|² + Σ_{n ≤ n_max} tr^n(s)` with its pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceTotal {
    pub value: f64,
    pub polar: f64,
    /// `tr^n(s)` for `n = 1..=n_max`.
    pub terms: Vec<f64>,
    /// Envelope of the omitted `n > n_max` terms.
    pub tail_bound: f64,
    /// Order `d` used in the envelope.
    pub envelope_order: u32,
    /// Largest series truncation bound over `n`.
    pub series_error: f64,
}

/// Target for the `n`-tail envelope.
pub const TAIL_TARGET: f64 = 1e-8;

/// `Σ_{n≥N} n^{−m} ≤ N^{−m} + N^{1−m}/(m−1)`.
pub fn zeta_tail(m: f64, n_start: usize) -> f64 {
    let n = n_start.max(1) as f64;
    n.powf(-m) + n.powf(1.0 - m) / (m - 1.0)
}

/// Envelope `|v| · d!/π^d · Σ_{n≥N} n^{−2d} · (|s−2d|⁻² + |1−s−2d|⁻²)` for
/// `Σ_{n≥N} tr^n(s)`, from `e^{−x} ≤ d!/x^d` applied to each kernel.
pub fn tail_envelope(s: Complex64, n_start: usize, d: u32) -> f64 {
    let df = d as f64;
    let ln_fact = ln_factorial(d as usize);
    let prefactor = (ln_fact - df * PI.ln()).exp();
    let geometry = 1.0 / (s - 2.0 * df).norm_sqr() + 1.0 / (1.0 - s - 2.0 * df).norm_sqr();
    s.im.abs() * prefactor * zeta_tail(2.0 * df, n_start) * geometry
}

/// Per-`n` envelope `|v| · d!/(πn²)^d · (|s−2d|⁻² + |1−s−2d|⁻²)`.
pub fn term_envelope(s: Complex64, n: usize, d: u32) -> f64 {
    let df = d as f64;
    let c = PI * (n * n) as f64;
    let prefactor = (ln_factorial(d as usize) - df * c.ln()).exp();
    let geometry = 1.0 / (s - 2.0 * df).norm_sqr() + 1.0 / (1.0 - s - 2.0 * df).norm_sqr();
    s.im.abs() * prefactor * geometry
}

fn choose_order(s: Complex64, n_start: usize) -> (u32, f64) {
    let mut best = (1, tail_envelope(s, n_start, 1));
    for d in 1..=80 {
        let b = tail_envelope(s, n_start, d);
        if b < best.1 {
            best = (d, b);
        }
        if b < TAIL_TARGET {
            return (d, b);
        }
    }
    best
}

pub fn tr_cg_sum(p: &TraceParams) -> Result<TraceTotal> {
    p.validate()?;
    let polar = trace_t(0, p.s)?;
    let series: Vec<TraceSeries> = (1..=p.n_max).into_par_iter().map(|n| tr_cg_n_series(n, p)).collect::<Result<_>>()?;
    let terms: Vec<f64> = series.iter().map(TraceSeries::value).collect();
    let series_error = series.iter().map(|t| t.tail_bound).fold(0.0, f64::max);
    let (envelope_order, tail_bound) = choose_order(p.s, p.n_max + 1);
    Ok(TraceTotal { value: polar + terms.iter().sum::<f64>(), polar, terms, tail_bound, envelope_order, series_error })
}

/// Positivity of `Tr_CG(s)`, with the `n`-tail envelope as error and a
/// check of that envelope against the last computed term.
pub fn tr_cg_total(p: &TraceParams) -> Result<ClaimReport> {
    let total = tr_cg_sum(p)?;
    let negative: Vec<usize> =
        total.terms.iter().enumerate().filter(|(_, t)| **t < 0.0).map(|(i, _)| i + 1).collect();
    let inputs = fields! { "s" => complex_json(p.s), "nMax" => p.n_max, "digits" => p.digits };
    let mut report = ClaimReport::positive("traces.tr_cg_positivity", inputs, total.value, total.tail_bound + total.series_error)
        .with_detail("polar", total.polar)
        .with_detail("terms", total.terms.clone())
        .with_detail("negativeTerms", negative)
        .with_detail("tailEnvelope", total.tail_bound)
        .with_detail("envelopeOrder", total.envelope_order);
    if let Some(&last) = total.terms.last() {
        let env = term_envelope(p.s, p.n_max, total.envelope_order);
        let next = (p.n_max + 1) as f64;
        let u = p.s.re;
        // large-n size of tr^n from σ_n(z) → −Im[Γ(z/2)(πn²)^{−z/2}]/(2 im z)
        let asymptotic = if (2.0 * u - 1.0).abs() > 0.0 {
            let a = poisson_limit(p.n_max + 1, 1.0 - p.s)?;
            let b = poisson_limit(p.n_max + 1, p.s)?;
            Some((a - b) / (2.0 * u - 1.0))
        } else {
            None
        };
        report = report
            .with_detail("lastTermEnvelope", env)
            .with_detail("envelopeHoldsForLastTerm", last.abs() <= env)
            .with_detail("decayExponent", u.min(1.0 - u))
            .with_detail("nextTermAsymptotic", serde_json::json!(asymptotic))
            .with_detail("nextIndex", next);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::ClaimStatus;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trace_values() {
        assert!((trace_t(0, c(0.5, 1.0)).unwrap() - 0.64).abs() < 1e-15);
        assert!((trace_t(0, c(0.5, 0.0)).unwrap() - 16.0).abs() < 1e-13);
        assert!(trace_t(0, c(0.0, 0.0)).is_err());
        assert!(trace_t(1, c(3.0, 0.0)).is_err());
    }

    #[test]
    fn decomposition_and_bridge() {
        for (j, s) in [(0, c(0.5, 1.0)), (5, c(0.3, 2.0)), (50, c(0.9, -7.0)), (3, c(0.75, -1.0))] {
            let r = trace_decomposition_check(j, s).unwrap();
            assert!(r.abs_residual <= 1e-11, "{j} {s}: {}", r.abs_residual);
            assert_eq!(r.status, ClaimStatus::Confirmed);
            let b = bridge_check(j, s).unwrap();
            assert!(b.abs_residual <= 1e-12);
            let m = b.details["minusZetaTTimesT"].as_f64().unwrap();
            assert!((m - b.lhs.re()).abs() < 1e-12);
        }
    }

    #[test]
    fn polar_term_sign() {
        let s = c(0.75, -2.0);
        let r = polar_term_check(s).unwrap();
        assert!((r.lhs.re() + r.rhs.re()).abs() < 1e-15);
        assert_eq!(r.status, ClaimStatus::Violated);
    }

    #[test]
    fn series_matches_high_precision_oracle() {
        // 120-digit direct summation
        for (n, s, want) in [
            (1, c(0.75, -1.0), 0.372_214_371_445_328_588_5),
            (3, c(0.75, -1.0), -0.194_283_307_902_401_664_9),
            (2, c(0.6, -2.0), -0.108_317_112_613_714_620_8),
        ] {
            let p = TraceParams::new(s, 3, 1, 60).unwrap();
            let r = tr_cg_n_series(n, &p).unwrap();
            assert!((r.value() - want).abs() < 1e-15, "{n} {s}: {}", r.value());
        }
    }

    #[test]
    fn series_guards() {
        let s = c(0.75, -1.0);
        let p = TraceParams::new(s, 3, 1, 20).unwrap();
        assert!(matches!(tr_cg_n_series(3, &p), Err(AuditError::InsufficientPrecision { needed: 28, have: 20 })));
        let short = TraceParams { j_max: 3, ..TraceParams::new(s, 1, 1, 30).unwrap() };
        assert!(matches!(tr_cg_n_series(1, &short), Err(AuditError::Truncation(3))));
        let one = tr_cg_n_partial(1, s, 1, 30).unwrap();
        assert_eq!(one.to_f64(), trace_t(0, s).unwrap());
    }

    #[test]
    fn sigma_single_term_sanity() {
        // no kernel: ∫ e^{−t} sin(2t) dt / 2 = 1/|z|²
        let r = kernel_integral(0.0, 1.0, 2.0, 0.0, &QuadSpec::default()).unwrap();
        assert!((r.value - 0.4).abs() < 1e-13);
    }

    #[test]
    fn sigma_route_matches_series() {
        let spec = QuadSpec::default();
        for s in [c(0.75, -1.0), c(0.6, -2.0), c(0.9, -4.0)] {
            let p = TraceParams::new(s, 3, 1, 80).unwrap();
            for n in 1..=3 {
                let r = cross_path_check(n, &p, &spec).unwrap();
                assert!(r.abs_residual < 1e-10, "{n} {s}: {}", r.abs_residual);
            }
        }
    }

    #[test]
    fn critical_line_hausdorff_and_totals() {
        let s = c(0.75, -0.5);
        let r = hausdorff_moment_audit(s, 20, 20, 60, false).unwrap();
        let rows: Vec<String> = serde_json::from_value(r.details["signPattern"].clone()).unwrap();
        assert!(rows[0].chars().all(|ch| ch == '+'));
        assert!(hausdorff_moment_audit(c(0.25, 1.0), 3, 3, 30, false).is_err());
        assert!(hausdorff_moment_audit(c(0.25, 1.0), 3, 3, 30, true).unwrap().details.contains_key("warn"));

        let p = TraceParams::new(c(0.75, -1.0), 0, 1, 30).unwrap();
        let t = tr_cg_sum(&p).unwrap();
        assert_eq!(t.value, trace_t(0, c(0.75, -1.0)).unwrap());
    }

    #[test]
    fn total_reports_envelope() {
        let p = TraceParams::new(c(0.75, -1.0), 3, 1, 80).unwrap();
        let r = tr_cg_total(&p).unwrap();
        assert!(r.error_estimate < 1e-6);
        assert_eq!(r.details["negativeTerms"], serde_json::json!([3]));
    }
}
