//! Fresnel integrals `F_s(A, ν) = ∫₀^∞ A(x) sin(νx) dx` and
//! `F_c(A, ν) = ∫₀^∞ A(x) cos(νx) dx` for a closed set of amplitude families.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{AuditError, Result};
use crate::fields;
use crate::quad::{integrate_oscillatory, integrate_oscillatory_raw, Amplitude, OscKind, QuadResult, QuadSpec, TailModel};
use crate::report::{ClaimReport, Value};

/// Highest frequency accepted by the audits.
pub const MAX_AUDIT_FREQUENCY: f64 = 1e3;

/// Amplitude `A(x)` on `(0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AmplitudeSpec {
    /// `e^{-a x}`
    Exp { a: f64 },
    /// `e^{-a x²}`
    Gauss { a: f64 },
    /// `(1 + x)^{-p}`, `p > 1`
    Rational { p: f64 },
    /// `1/x`; not integrable, only its sine integral exists
    Reciprocal,
    /// `x^{-1/2}`; unbounded at the origin
    InvSqrt,
}

impl AmplitudeSpec {
    pub fn exp(a: f64) -> Result<Self> {
        positive_param("a", a)?;
        Ok(AmplitudeSpec::Exp { a })
    }

    pub fn gauss(a: f64) -> Result<Self> {
        positive_param("a", a)?;
        Ok(AmplitudeSpec::Gauss { a })
    }

    pub fn rational(p: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(AuditError::Precondition(format!("rational amplitude needs p > 1, got {p}")));
        }
        Ok(AmplitudeSpec::Rational { p })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            AmplitudeSpec::Exp { a } => (-a * x).exp(),
            AmplitudeSpec::Gauss { a } => (-a * x * x).exp(),
            AmplitudeSpec::Rational { p } => (1.0 + x).powf(-p),
            AmplitudeSpec::Reciprocal => 1.0 / x,
            AmplitudeSpec::InvSqrt => 1.0 / x.sqrt(),
        }
    }

    /// Exact `A'(x)`.
    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            AmplitudeSpec::Exp { a } => -a * (-a * x).exp(),
            AmplitudeSpec::Gauss { a } => -2.0 * a * x * (-a * x * x).exp(),
            AmplitudeSpec::Rational { p } => -p * (1.0 + x).powf(-p - 1.0),
            AmplitudeSpec::Reciprocal => -1.0 / (x * x),
            AmplitudeSpec::InvSqrt => -0.5 * x.powf(-1.5),
        }
    }

    /// Positive, continuous, integrable and strictly decreasing on `[0, ∞)`.
    pub fn is_pcid(&self) -> bool {
        !matches!(self, AmplitudeSpec::Reciprocal | AmplitudeSpec::InvSqrt)
    }

    /// `∫₀^∞ A(x) dx` where finite.
    pub fn integral(&self) -> Option<f64> {
        match *self {
            AmplitudeSpec::Exp { a } => Some(1.0 / a),
            AmplitudeSpec::Gauss { a } => Some(0.5 * (PI / a).sqrt()),
            AmplitudeSpec::Rational { p } => Some(1.0 / (p - 1.0)),
            AmplitudeSpec::Reciprocal | AmplitudeSpec::InvSqrt => None,
        }
    }

    fn derivative_tail(&self) -> TailModel {
        match *self {
            AmplitudeSpec::Exp { .. } | AmplitudeSpec::Gauss { .. } => TailModel::Fast,
            AmplitudeSpec::Rational { p } => TailModel::PowerLaw { coeff: -p, shift: 1.0, power: p + 1.0 },
            AmplitudeSpec::Reciprocal => TailModel::PowerLaw { coeff: -1.0, shift: 0.0, power: 2.0 },
            AmplitudeSpec::InvSqrt => TailModel::PowerLaw { coeff: -0.5, shift: 0.0, power: 1.5 },
        }
    }

    /// Checks the PCID properties on a grid over `(0, 100]` and the derivative
    /// evaluator against central differences.
    pub fn check_pcid(&self) -> Result<()> {
        if !self.is_pcid() {
            return Err(AuditError::Precondition(format!("{self:?} is not a PCID amplitude")));
        }
        let grid: Vec<f64> = (1..=1000).map(|i| i as f64 * 0.1).collect();
        let mut prev = self.eval(0.0);
        for &x in &grid {
            let v = self.eval(x);
            if !(v >= 0.0) || (prev > 1e-300 && !(v < prev)) {
                return Err(AuditError::AmplitudeNotDecreasing(x));
            }
            prev = v;
            let d = self.derivative(x);
            if d.abs() < 1e-250 {
                continue;
            }
            let h = 1e-5 * x.max(1.0) / (d / v).abs().max(1.0);
            let fd = (self.eval(x + h) - self.eval(x - h)) / (2.0 * h);
            if ((fd - d) / d).abs() > 1e-6 {
                return Err(AuditError::Precondition(format!(
                    "derivative of {self:?} disagrees with differences at x = {x}: {d} vs {fd}"
                )));
            }
        }
        Ok(())
    }
}

fn positive_param(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(AuditError::Precondition(format!("amplitude parameter {name} must be positive, got {v}")))
    }
}

impl Amplitude for AmplitudeSpec {
    fn value(&self, x: f64) -> f64 {
        self.eval(x)
    }

    fn tail(&self) -> TailModel {
        match *self {
            AmplitudeSpec::Exp { .. } | AmplitudeSpec::Gauss { .. } => TailModel::Fast,
            AmplitudeSpec::Rational { p } => TailModel::PowerLaw { coeff: 1.0, shift: 1.0, power: p },
            AmplitudeSpec::Reciprocal => TailModel::PowerLaw { coeff: 1.0, shift: 0.0, power: 1.0 },
            AmplitudeSpec::InvSqrt => TailModel::PowerLaw { coeff: 1.0, shift: 0.0, power: 0.5 },
        }
    }

    fn origin_singularity(&self) -> Option<f64> {
        match self {
            AmplitudeSpec::Reciprocal => Some(1.0),
            AmplitudeSpec::InvSqrt => Some(0.5),
            _ => None,
        }
    }
}

pub fn fresnel_sin(amp: &AmplitudeSpec, nu: f64, spec: &QuadSpec) -> Result<QuadResult<f64>> {
    integrate_oscillatory(amp, nu, OscKind::Sin, spec)
}

pub fn fresnel_cos(amp: &AmplitudeSpec, nu: f64, spec: &QuadSpec) -> Result<QuadResult<f64>> {
    if matches!(amp, AmplitudeSpec::Reciprocal) {
        return Err(AuditError::Divergence(f64::INFINITY));
    }
    integrate_oscillatory(amp, nu, OscKind::Cos, spec)
}

/// `F_s(A', ν)` through the raw oscillatory path (`A'` is negative).
pub fn fresnel_sin_derivative(amp: &AmplitudeSpec, nu: f64, spec: &QuadSpec) -> Result<QuadResult<f64>> {
    if !amp.is_pcid() {
        return Err(AuditError::Precondition(format!("{amp:?} has no integrable derivative at 0")));
    }
    let a = *amp;
    integrate_oscillatory_raw(move |x| a.derivative(x), nu, OscKind::Sin, amp.derivative_tail(), spec)
}

/// `∫₀^∞ sin(νx²) dx`, evaluated as `½ ∫₀^∞ t^{-1/2} sin(νt) dt`.
pub fn fresnel_classic(nu: f64, spec: &QuadSpec) -> Result<QuadResult<f64>> {
    let r = integrate_oscillatory(&AmplitudeSpec::InvSqrt, nu, OscKind::Sin, spec)?;
    Ok(QuadResult { value: 0.5 * r.value, error_estimate: 0.5 * r.error_estimate, ..r })
}

/// Closed form `½ √(π / (2ν))`.
pub fn fresnel_classic_exact(nu: f64) -> f64 {
    0.5 * (PI / (2.0 * nu)).sqrt()
}

/// Closed forms of `(F_s, F_c)` for the exponential family.
pub fn exp_closed_form(a: f64, nu: f64) -> (f64, f64) {
    let d = a * a + nu * nu;
    (nu / d, a / d)
}

/// `F_c(A, ν) = −F_s(A', ν)/ν`, both sides by quadrature.
pub fn derivative_identity(amp: &AmplitudeSpec, nu: f64, spec: &QuadSpec) -> Result<ClaimReport> {
    let lhs = fresnel_cos(amp, nu, spec)?;
    let ds = fresnel_sin_derivative(amp, nu, spec)?;
    let rhs = -ds.value / nu;
    let err = lhs.error_estimate + ds.error_estimate / nu;
    Ok(ClaimReport::compare(
        "fresnel.derivative_identity",
        fields! { "amplitude" => amp, "nu" => nu },
        Value::Real(lhs.value),
        Value::Real(rhs),
        err,
        1e-7,
    ))
}

/// Amplitude families drawn by [`lemma_positivity_audit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Family {
    Exp,
    Gauss,
    Rational,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Exp, Family::Gauss, Family::Rational];

    fn draw(self, rng: &mut ChaCha8Rng) -> AmplitudeSpec {
        match self {
            Family::Exp => AmplitudeSpec::Exp { a: rng.random_range(0.05..5.0) },
            Family::Gauss => AmplitudeSpec::Gauss { a: rng.random_range(0.05..5.0) },
            Family::Rational => AmplitudeSpec::Rational { p: rng.random_range(1.2..4.0) },
        }
    }
}

/// Draws `samples` random (amplitude, ν ∈ (0, 50]) pairs from `families` and
/// checks `F_s(A, ν) > 0` beyond the quadrature error.
///
/// `lhs` is the smallest margin `F_s − error` seen; the witness is the
/// sample attaining it.
pub fn lemma_positivity_audit(
    samples: usize,
    families: &[Family],
    seed: u64,
    spec: &QuadSpec,
) -> Result<ClaimReport> {
    if samples == 0 || families.is_empty() {
        return Err(AuditError::Precondition("positivity audit needs samples and families".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: Option<(f64, f64, AmplitudeSpec, f64)> = None;
    let mut failures = 0usize;
    let mut unconverged = 0usize;
    for _ in 0..samples {
        let family = families[rng.random_range(0..families.len())];
        let amp = family.draw(&mut rng);
        let nu = 50.0 * (1.0 - rng.random::<f64>());
        let r = fresnel_sin(&amp, nu, spec)?;
        if !r.converged {
            unconverged += 1;
        }
        let margin = r.value - r.error_estimate;
        if margin <= 0.0 {
            failures += 1;
        }
        if worst.is_none_or(|w| margin < w.0 - w.1) {
            worst = Some((r.value, r.error_estimate, amp, nu));
        }
    }
    let (value, err, amp, nu) = worst.expect("at least one sample");
    let inputs = fields! { "samples" => samples, "families" => families, "seed" => seed };
    Ok(ClaimReport::positive("fresnel.lemma_positivity", inputs, value, err)
        .with_detail("witnessAmplitude", serde_json::json!(amp))
        .with_detail("witnessNu", nu)
        .with_detail("nonPositive", failures)
        .with_detail("unconverged", unconverged))
}
