//! The functional-equation pipeline: `ζ*(s) = 1/(s(s−1)) + J(s)`, the split
//! of `Im J` into Gaussian pieces `Im J_n`, the decomposition of each piece
//! into a Poisson part and a trace part, and the final residual
//! `im ζ*(s)` against `ζ_t(s)·Tr_CG(s)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{AuditError, Result};
use crate::fields;
use crate::quad::{integrate_finite_with_breaks, integrate_semi_infinite, QuadResult, QuadSpec};
use crate::report::{complex_json, ClaimReport, Value};
use crate::specfun::{theta, trivial_zeta, zeta_star, EvalPrecision};
use crate::traces::{poisson_part, tr_cg_n_series, tr_cg_sum, TraceParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RaceResult {
    pub zeta_star_direct: Complex64,
    /// `1/(s(s−1))`
    pub polar_term: Complex64,
    /// `J(s) = ∫₁^∞ (x^{s/2−1} + x^{−(s+1)/2}) θ(x) dx`
    pub j_integral: Complex64,
    pub residual: f64,
    /// Quadrature error of `J(s)`.
    pub error_estimate: f64,
}

fn theta_or_nan(x: f64) -> f64 {
    theta(x).unwrap_or(f64::NAN)
}

fn polar(s: Complex64) -> Result<Complex64> {
    let w = s * (s - 1.0);
    if w.norm_sqr() == 0.0 {
        return Err(AuditError::Pole(format!("1/(s(s−1)) has a pole at s = {s}")));
    }
    Ok(w.inv())
}

pub fn race_check(s: Complex64, spec: &QuadSpec) -> Result<RaceResult> {
    let polar_term = polar(s)?;
    let a = s / 2.0 - 1.0;
    let b = -(s + 1.0) / 2.0;
    let f = |x: f64| {
        let lx = x.ln();
        ((a * lx).exp() + (b * lx).exp()) * theta_or_nan(x)
    };
    let j = integrate_semi_infinite(f, 1.0, spec)?.require_converged()?;
    let zeta_star_direct = zeta_star(s, EvalPrecision::default())?;
    let residual = (zeta_star_direct - (polar_term + j.value)).norm();
    Ok(RaceResult { zeta_star_direct, polar_term, j_integral: j.value, residual, error_estimate: j.error_estimate })
}

/// Race identity as a report; `tol` is the acceptance band.
pub fn race_report(s: Complex64, spec: &QuadSpec, tol: f64) -> Result<ClaimReport> {
    let r = race_check(s, spec)?;
    Ok(ClaimReport::compare(
        "rhfe.race",
        fields! { "s" => complex_json(s) },
        Value::from(r.zeta_star_direct),
        Value::from(r.polar_term + r.j_integral),
        r.error_estimate,
        tol,
    ))
}

fn check_strip(s: Complex64) -> Result<(f64, f64)> {
    let (u, v) = (s.re, s.im);
    if !(u > 0.0 && u < 1.0) || v == 0.0 || !v.is_finite() {
        return Err(AuditError::Precondition(format!("need re(s) in (0, 1) and im(s) ≠ 0, got {s}")));
    }
    Ok((u, v))
}

/// `Im J(s) = 2∫₁^∞ (x^{u−1} − x^{−u}) sin(v ln x) θ(x²) dx`.
pub fn im_j_direct(s: Complex64, spec: &QuadSpec) -> Result<QuadResult<f64>> {
    let (u, v) = check_strip(s)?;
    let f = |x: f64| {
        let lx = x.ln();
        2.0 * (((u - 1.0) * lx).exp() - (-u * lx).exp()) * (v * lx).sin() * theta_or_nan(x * x)
    };
    integrate_semi_infinite(f, 1.0, spec)
}

/// `Im J_n(s) = ∫₀^∞ (e^{ru} − e^{r(1−u)}) sin(vr) e^{−πn² e^{2r}} dr`.
pub fn im_j_n(n: usize, s: Complex64, spec: &QuadSpec) -> Result<QuadResult<f64>> {
    im_j_n_upto(n, s, f64::INFINITY, spec)
}

/// `Im J_n(s)` with the `r`-integral cut at `upper`.
pub fn im_j_n_upto(n: usize, s: Complex64, upper: f64, spec: &QuadSpec) -> Result<QuadResult<f64>> {
    let (u, v) = check_strip(s)?;
    if n == 0 {
        return Err(AuditError::Precondition("n must be at least 1".into()));
    }
    let c = PI * (n * n) as f64;
    // e^{−c e^{2r}} < e^{−745} beyond this point
    let cut = (0.5 * (745.0 / c).ln()).max(0.5);
    let hi = upper.min(cut);
    if !(hi >= 0.0) {
        return Err(AuditError::Precondition(format!("upper limit must be ≥ 0, got {upper}")));
    }
    let f = |r: f64| ((r * u).exp() - (r * (1.0 - u)).exp()) * (v * r).sin() * (-c * (2.0 * r).exp()).exp();
    let mut pts = vec![0.0];
    let step = (PI / v.abs()).min(0.5);
    let mut r = step;
    while r < hi {
        pts.push(r);
        r += step;
    }
    pts.push(hi);
    integrate_finite_with_breaks(f, &pts, spec)
}

/// `∫₀^N e^{wr} sin(vr) dr = e^{Nw}(w sin vN − v cos vN)/(w²+v²) + v/(w²+v²)`.
pub fn newton_leibnitz(w: f64, v: f64, n: f64) -> Result<f64> {
    if v == 0.0 || !v.is_finite() {
        return Err(AuditError::Precondition(format!("v must be nonzero, got {v}")));
    }
    if !(n >= 0.0) || !n.is_finite() || !w.is_finite() {
        return Err(AuditError::Precondition(format!("need N ≥ 0 and finite w, got N = {n}, w = {w}")));
    }
    let d = w * w + v * v;
    Ok((n * w).exp() * (w * (v * n).sin() - v * (v * n).cos()) / d + v / d)
}

/// `(v/(v²+w²))(1 − e^{2πLw/v})`, the value at `N = 2πL/v`.
pub fn newton_leibnitz_period(w: f64, v: f64, l: u32) -> Result<f64> {
    if v == 0.0 || !v.is_finite() {
        return Err(AuditError::Precondition(format!("v must be nonzero, got {v}")));
    }
    Ok(v / (v * v + w * w) * (1.0 - (2.0 * PI * l as f64 * w / v).exp()))
}

/// `Im J_n(s)` against the Poisson part plus `ζ_t(s)·tr^n(s)`.
///
/// The opposite trace sign, `poisson − ζ_t·tr^n`, is attached as
/// `correctedRhs` with its residual.
pub fn decomposition_audit(n: usize, s: Complex64, l: u32, p: &TraceParams, spec: &QuadSpec) -> Result<ClaimReport> {
    let (_, v) = check_strip(s)?;
    let lhs = im_j_n(n, s, spec)?;
    let truncated = im_j_n_upto(n, s, 2.0 * PI * l as f64 / v.abs(), spec)?;
    let poisson = poisson_part(n, l, s, spec)?;
    let p = TraceParams { s, ..*p };
    let series = tr_cg_n_series(n, &p)?;
    let zt = trivial_zeta(s);
    let trace = zt * series.value();
    let err = lhs.error_estimate + poisson.error_estimate + zt.abs() * series.tail_bound;
    let corrected = poisson.value - trace;
    let inputs = fields! { "n" => n, "s" => complex_json(s), "L" => l, "digits" => p.digits };
    Ok(ClaimReport::compare("rhfe.decomposition", inputs, Value::Real(lhs.value), Value::Real(poisson.value + trace), err, 1e-8)
        .with_detail("poissonPart", poisson.value)
        .with_detail("traceTerm", trace)
        .with_detail("truncatedIntegral", truncated.value)
        .with_detail("correctedRhs", corrected)
        .with_detail("correctedResidual", (truncated.value - corrected).abs()))
}

/// Region in which the functional-equation claim is stated.
pub fn in_claim_region(s: Complex64) -> bool {
    (0.5..=1.0).contains(&s.re) && s.im < 0.0
}

/// `im ζ*(s)` against `ζ_t(s)·Tr_CG(s)`; never fails on disagreement.
pub fn rhfe_residual(s: Complex64, p: &TraceParams, allow_outside_region: bool) -> Result<ClaimReport> {
    let inside = in_claim_region(s);
    if !inside && !allow_outside_region {
        return Err(AuditError::Precondition(format!("need re(s) in [1/2, 1] and im(s) < 0, got {s}")));
    }
    let lhs = zeta_star(s, EvalPrecision::default())?.im;
    let p = TraceParams { s, ..*p };
    let total = tr_cg_sum(&p)?;
    let zt = trivial_zeta(s);
    let rhs = zt * total.value;
    let err = zt.abs() * (total.tail_bound + total.series_error) + 1e-12 * lhs.abs().max(1.0);
    let mut report = ClaimReport::compare(
        "rhfe.functional_equation",
        fields! { "s" => complex_json(s), "nMax" => p.n_max, "digits" => p.digits },
        Value::Real(lhs),
        Value::Real(rhs),
        err,
        1e-9,
    )
    .with_detail("trCg", total.value)
    .with_detail("trCgPositive", total.value > total.tail_bound + total.series_error)
    .with_detail("trCgTailBound", total.tail_bound);
    if !inside {
        report = report.with_detail("warn", "s outside re(s) in [1/2, 1], im(s) < 0");
    }
    Ok(report)
}

/// Bound on `Σ_{n≥N} ∫₁^∞ |x^{u−1} − x^{−u}| G(nx) dx` from
/// `sup_x G(x)x^m = (m/(2πe))^{m/2}` and `Σ_{n≥N} n^{−m} ≤ N^{−m} + N^{1−m}/(m−1)`.
pub fn j_tail_bound(u: f64, m: u32, n_start: usize) -> Result<f64> {
    if m <= 1 {
        return Err(AuditError::Precondition(format!("m must exceed 1, got {m}")));
    }
    let mf = m as f64;
    if !(u <= 1.0) || mf + u - 1.0 <= 0.0 {
        return Err(AuditError::Precondition(format!("need 2 − m < u ≤ 1, got u = {u}")));
    }
    if n_start == 0 {
        return Err(AuditError::Precondition("n_start must be at least 1".into()));
    }
    let sup = (mf / (2.0 * PI * std::f64::consts::E)).powf(mf / 2.0);
    let integral = (1.0 / (mf - u) - 1.0 / (mf + u - 1.0)).abs();
    let nf = n_start as f64;
    let zeta_tail = nf.powf(-mf) + nf.powf(1.0 - mf) / (mf - 1.0);
    Ok(sup * integral * zeta_tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_finite;
    use crate::report::ClaimStatus;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn race_identity() {
        let spec = QuadSpec::default();
        for s in [c(0.5, 2.0), c(0.2, 14.0), c(0.8, -7.0), c(2.0, 0.0)] {
            let r = race_check(s, &spec).unwrap();
            assert!(r.residual < 1e-8, "{s}: {}", r.residual);
        }
        let r = race_check(c(2.0, 0.0), &spec).unwrap();
        assert!((r.zeta_star_direct.re - PI / 6.0).abs() < 1e-12);
        let a = race_check(c(0.3, 4.0), &spec).unwrap();
        let b = race_check(c(0.7, -4.0), &spec).unwrap();
        assert!((a.j_integral - b.j_integral).norm() < 1e-12);
        assert!(race_check(c(1.0, 0.0), &spec).is_err());
    }

    #[test]
    fn im_j_paths_agree() {
        let spec = QuadSpec::default();
        let s = c(0.75, -2.0);
        let direct = im_j_direct(s, &spec).unwrap().value;
        let race = race_check(s, &spec).unwrap();
        assert!((direct - race.j_integral.im).abs() < 1e-7);
        assert!((race.zeta_star_direct.im - (race.polar_term.im + direct)).abs() < 1e-7);
        let series: f64 = (1..=3).map(|n| 2.0 * im_j_n(n, s, &spec).unwrap().value).sum();
        assert!((direct - series).abs() <= j_tail_bound(0.75, 8, 4).unwrap() + 1e-11);
        assert_eq!(im_j_direct(c(0.5, 3.0), &spec).unwrap().value, 0.0);
        let flipped = im_j_direct(s.conj(), &spec).unwrap().value;
        assert!((flipped + direct).abs() < 1e-14);
        assert!(im_j_n(6, s, &spec).unwrap().value.abs() < 1e-20);
    }

    #[test]
    fn newton_leibnitz_forms() {
        assert!((newton_leibnitz(0.0, 1.0, PI).unwrap() - 2.0).abs() < 1e-14);
        let q = integrate_finite(|r: f64| r.exp() * r.sin(), 0.0, 1.0, &QuadSpec::default()).unwrap();
        assert!((newton_leibnitz(1.0, 1.0, 1.0).unwrap() - q.value).abs() < 1e-10);
        let n = 2.0 * PI * 3.0 / 2.0;
        let a = newton_leibnitz(-1.0, 2.0, n).unwrap();
        assert!((a - newton_leibnitz_period(-1.0, 2.0, 3).unwrap()).abs() < 1e-14);
        assert!(newton_leibnitz(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn decomposition_corrected_sign_holds() {
        let spec = QuadSpec::default();
        let s = c(0.75, -2.0);
        let p = TraceParams::new(s, 1, 5, 50).unwrap();
        let r = decomposition_audit(1, s, 5, &p, &spec).unwrap();
        assert!(r.details["correctedResidual"].as_f64().unwrap() < 1e-9);
        let crit = decomposition_audit(1, c(0.5, -3.0), 2, &p, &spec).unwrap();
        assert!(crit.lhs.abs() < 1e-15 && crit.rhs.abs() < 1e-12);
    }

    #[test]
    fn rhfe_on_critical_line() {
        let s = c(0.5, -5.0);
        let p = TraceParams::new(s, 2, 1, 40).unwrap();
        let r = rhfe_residual(s, &p, false).unwrap();
        assert!(r.lhs.abs() <= 1e-9 && r.rhs.abs() <= 1e-9);
        assert_eq!(r.status, ClaimStatus::Confirmed);
        assert!(rhfe_residual(c(0.3, -5.0), &p, false).is_err());
    }

    #[test]
    fn j_tail_bound_shape() {
        let a = j_tail_bound(0.75, 4, 2).unwrap();
        let b = j_tail_bound(0.75, 4, 3).unwrap();
        assert!(a.is_finite() && b < a);
        assert!(j_tail_bound(0.75, 20, 5).unwrap() < 1e-12);
        assert!(j_tail_bound(0.75, 1, 5).is_err());
        let spec = QuadSpec::default();
        let s = c(0.75, -2.0);
        let tail: f64 = (2..=6).map(|n| im_j_n(n, s, &spec).unwrap().value).sum();
        assert!(tail.abs() <= a);
    }
}
