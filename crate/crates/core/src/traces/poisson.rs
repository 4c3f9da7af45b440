//! Poisson terms `P⁰_n(L, z) = e^{aL}∬ e^{−πn² e^{bL−2(l₁+l₂)}} e^{−x(l₁+l₂)} cos(y(l₁−l₂)) dl`
//! with `a = 2πx/|y|`, `b = 4π/|y|`.
//!
//! With `w = l₁+l₂` the inner integral over `l₁−l₂ ∈ (−w, w)` is `2 sin(yw)/y`,
//! and shifting `t = w − bL/2` removes the growing prefactor for integer `L`:
//! `P⁰ = (1/y)∫_{−bL/2}^∞ e^{−πn² e^{−2t}} e^{−xt} sin(yt) dt`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{kernel_integral, trace_t};
use crate::error::{AuditError, Result};
use crate::fields;
use crate::quad::{integrate_quadrant, QuadResult, QuadSpec, Transform};
use crate::report::{complex_json, ClaimReport, ClaimStatus, Value};
use crate::specfun::gamma;

/// Below this `t` the kernel `e^{−c e^{−2t}}` is under `e^{−745}`.
fn underflow_cut(c: f64) -> f64 {
    -0.5 * (745.0 / c).ln()
}

fn check(n: usize, z: Complex64) -> Result<f64> {
    if n == 0 {
        return Err(AuditError::Precondition("n must be at least 1".into()));
    }
    if z.im == 0.0 || !z.im.is_finite() || !z.re.is_finite() {
        return Err(AuditError::Precondition(format!("Poisson term needs im(z) ≠ 0, got {z}")));
    }
    Ok(PI * (n * n) as f64)
}

/// `P⁰_n(L, z)` through the one-dimensional shifted form.
pub fn poisson_term(n: usize, l: u32, z: Complex64, spec: &QuadSpec) -> Result<QuadResult<f64>> {
    let c = check(n, z)?;
    let (x, y) = (z.re, z.im);
    let b = 4.0 * PI / y.abs();
    let lo = (-0.5 * b * l as f64).max(underflow_cut(c));
    let r = kernel_integral(-c, x, y, lo, spec)?;
    Ok(QuadResult { value: r.value / y, error_estimate: r.error_estimate / y.abs(), ..r })
}

/// `P⁰_n(L, z)` by iterated quadrature of the quadrant integral.
pub fn poisson_term_2d(n: usize, l: u32, z: Complex64, spec: &QuadSpec) -> Result<QuadResult<f64>> {
    let c = check(n, z)?;
    let (x, y) = (z.re, z.im);
    let a = 2.0 * PI * x / y.abs();
    let bl = 4.0 * PI / y.abs() * l as f64;
    let scale = (a * l as f64).exp();
    let f = |l1: f64, l2: f64| {
        let w = l1 + l2;
        (-c * (bl - 2.0 * w).exp() - x * w).exp() * (y * (l1 - l2)).cos()
    };
    let r = integrate_quadrant(f, &spec.tightened(scale.max(1.0)).transform(Transform::None))?;
    let mut q = r.result.map(|v| v * scale);
    q.error_estimate *= scale;
    q.converged = q.converged && r.outer_converged && r.inner_failures == 0;
    Ok(q)
}

/// `lim_{L→∞} P⁰_n(L, z) = −Im[Γ(z/2)(πn²)^{−z/2}] / (2 im z)`.
pub fn poisson_limit(n: usize, z: Complex64) -> Result<f64> {
    let c = check(n, z)?;
    let g = gamma(z / 2.0)? * (-(z / 2.0) * c.ln()).exp();
    Ok(-g.im / (2.0 * z.im))
}

/// `p_L = r!/(π^r n^{2r}) · e^{(2π/|v|)(x−2r)L} / (x−2r)²`.
pub fn poisson_coarse_bound(n: usize, l: u32, z: Complex64, r: u32) -> Result<f64> {
    check(n, z)?;
    let rf = r as f64;
    let gap = z.re - 2.0 * rf;
    if gap == 0.0 {
        return Err(AuditError::DegenerateDenominator(format!("re(z) = 2r = {}", 2 * r)));
    }
    let ln_fact: f64 = (2..=r).map(|k| (k as f64).ln()).sum();
    let ln = ln_fact - rf * (PI * (n * n) as f64).ln() + 2.0 * PI / z.im.abs() * gap * l as f64;
    Ok(ln.exp() / (gap * gap))
}

/// `|P⁰_n(L, z)| ≤ p_L` for the coarse bound of order `r`.
pub fn poisson_coarse_bound_check(n: usize, l: u32, z: Complex64, r: u32, spec: &QuadSpec) -> Result<ClaimReport> {
    let p = poisson_term(n, l, z, spec)?;
    let bound = poisson_coarse_bound(n, l, z, r)?;
    let inputs = fields! { "n" => n, "L" => l, "z" => complex_json(z), "r" => r };
    Ok(ClaimReport::nonnegative("traces.poisson_coarse_bound", inputs, bound - p.value.abs(), p.error_estimate)
        .with_detail("poisson", p.value)
        .with_detail("bound", bound))
}

/// The one-dimensional form against direct quadrature of the quadrant integral.
pub fn poisson_reduction_check(n: usize, l: u32, z: Complex64, spec: &QuadSpec) -> Result<ClaimReport> {
    let fast = poisson_term(n, l, z, spec)?;
    let direct = poisson_term_2d(n, l, z, spec)?;
    Ok(ClaimReport::compare(
        "traces.poisson_reduction",
        fields! { "n" => n, "L" => l, "z" => complex_json(z) },
        Value::Real(fast.value),
        Value::Real(direct.value),
        fast.error_estimate + direct.error_estimate,
        1e-6,
    )
    .with_detail("directConverged", direct.converged))
}

/// `v(P⁰_n(L, 1−s) − P⁰_n(L, s))`, the Poisson part of `∫₀^{2πL/|v|}` in the
/// split of `Im J_n(s)` against `ζ_t(s)·tr^n(s)`.
pub fn poisson_part(n: usize, l: u32, s: Complex64, spec: &QuadSpec) -> Result<QuadResult<f64>> {
    let a = poisson_term(n, l, 1.0 - s, spec)?;
    let b = poisson_term(n, l, s, spec)?;
    let v = s.im;
    Ok(QuadResult {
        value: v * (a.value - b.value),
        error_estimate: v.abs() * (a.error_estimate + b.error_estimate),
        evaluations: a.evaluations + b.evaluations,
        converged: a.converged && b.converged,
    })
}

/// Claim that the Poisson part vanishes as `L → ∞`.
///
/// `lhs` is the part at `L = l_max`; the sequence over `L`, its strict
/// monotonicity and the closed-form limit are attached.
pub fn poisson_vanishing_audit(n: usize, s: Complex64, l_max: u32, spec: &QuadSpec) -> Result<ClaimReport> {
    trace_t(0, s)?;
    let seq: Vec<QuadResult<f64>> = (0..=l_max).map(|l| poisson_part(n, l, s, spec)).collect::<Result<_>>()?;
    let values: Vec<f64> = seq.iter().map(|r| r.value).collect();
    let last = seq.last().expect("l_max + 1 entries");
    let limit = s.im * (poisson_limit(n, 1.0 - s)? - poisson_limit(n, s)?);
    Ok(ClaimReport::compare(
        "traces.poisson_vanishing",
        fields! { "n" => n, "s" => complex_json(s), "lMax" => l_max },
        Value::Real(last.value),
        Value::Real(0.0),
        last.error_estimate,
        1e-8,
    )
    .with_detail("sequence", values.clone())
    .with_detail("strictlyDecreasing", strictly_decreasing(&values))
    .with_detail("limit", limit))
}

/// Whether `|P⁰_n(L, z)|` strictly decreases over `ls`.
pub fn poisson_decay_audit(n: usize, z: Complex64, ls: &[u32], spec: &QuadSpec) -> Result<ClaimReport> {
    let rs: Vec<QuadResult<f64>> = ls.iter().map(|&l| poisson_term(n, l, z, spec)).collect::<Result<_>>()?;
    let values: Vec<f64> = rs.iter().map(|r| r.value).collect();
    let err = rs.iter().map(|r| r.error_estimate).fold(0.0, f64::max);
    let decreasing = strictly_decreasing(&values);
    let first = values.first().copied().unwrap_or(0.0);
    let last = values.last().copied().unwrap_or(0.0);
    let status = if decreasing { ClaimStatus::Confirmed } else { ClaimStatus::Violated };
    Ok(ClaimReport::compare(
        "traces.poisson_decay",
        fields! { "n" => n, "z" => complex_json(z), "L" => ls },
        Value::Real(last.abs()),
        Value::Real(first.abs()),
        err,
        0.0,
    )
    .with_status(status)
    .with_detail("values", values)
    .with_detail("strictlyDecreasing", decreasing)
    .with_detail("limit", poisson_limit(n, z)?))
}

fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1].abs() < w[0].abs())
}
