//! Integrals `∫₀^∞ A(x)·sin(νx) dx` and `∫₀^∞ A(x)·cos(νx) dx`.
//!
//! In period-partition mode `[0, ∞)` is cut at the zeros of the oscillator
//! and the lobe integrals are summed as an alternating series. For a
//! positive decreasing amplitude the first omitted lobe bounds the tail.
//! Power-law amplitudes, whose lobes shrink too slowly to sum out, get their
//! tail from the integration-by-parts expansion of `∫_X^∞ y^{-p} e^{iνy} dy`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{integrate_finite, integrate_finite_with_breaks, OscMode, QuadResult, QuadSpec};
use crate::error::{AuditError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscKind {
    Sin,
    Cos,
}

impl OscKind {
    fn apply(self, phase: f64) -> f64 {
        match self {
            OscKind::Sin => phase.sin(),
            OscKind::Cos => phase.cos(),
        }
    }

    /// Right end of lobe `k` for frequency `nu`.
    fn lobe_end(self, k: usize, nu: f64) -> f64 {
        match self {
            OscKind::Sin => (k as f64 + 1.0) * PI / nu,
            OscKind::Cos => (k as f64 + 0.5) * PI / nu,
        }
    }
}

/// Large-x behaviour of an amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailModel {
    /// Decays fast enough that lobes drop under tolerance.
    Fast,
    /// `A(x) = coeff·(x + shift)^(-power)` exactly.
    PowerLaw { coeff: f64, shift: f64, power: f64 },
}

pub trait Amplitude {
    fn value(&self, x: f64) -> f64;
    fn tail(&self) -> TailModel;
    /// Exponent `p` of an `x^{-p}` singularity at the origin.
    fn origin_singularity(&self) -> Option<f64> {
        None
    }
}

const MAX_LOBES: usize = 200_000;
/// `ν·Y` at which the asymptotic tail takes over.
const ASYMPTOTIC_START: f64 = 60.0;

/// Oscillatory integral of a positive, strictly decreasing amplitude.
///
/// The amplitude is sampled on `(0, 100]` first; any increase there is an
/// [`AuditError::AmplitudeNotDecreasing`].
pub fn integrate_oscillatory<A: Amplitude + ?Sized>(
    amp: &A,
    nu: f64,
    kind: OscKind,
    spec: &QuadSpec,
) -> Result<QuadResult<f64>> {
    check_frequency(nu)?;
    check_decreasing(amp)?;
    oscillatory_core(&|x| amp.value(x), nu, kind, amp.tail(), amp.origin_singularity(), true, spec)
}

/// Oscillatory integral of an arbitrary amplitude (no monotonicity check and
/// no alternating-series certificate; the lobe march stops on two
/// consecutive negligible lobes).
pub fn integrate_oscillatory_raw<F: Fn(f64) -> f64>(
    f: F,
    nu: f64,
    kind: OscKind,
    tail: TailModel,
    spec: &QuadSpec,
) -> Result<QuadResult<f64>> {
    check_frequency(nu)?;
    oscillatory_core(&f, nu, kind, tail, None, false, spec)
}

fn check_frequency(nu: f64) -> Result<()> {
    if nu > 0.0 && nu.is_finite() {
        Ok(())
    } else {
        Err(AuditError::Precondition(format!("frequency must be positive, got {nu}")))
    }
}

fn sample_grid() -> impl Iterator<Item = f64> {
    let near_zero = (0..50).map(|i| 1e-6 * 10f64.powf(i as f64 / 10.0));
    let linear = (1..=1000).map(|i| i as f64 * 0.1);
    near_zero.chain(linear)
}

fn check_decreasing<A: Amplitude + ?Sized>(amp: &A) -> Result<()> {
    let mut prev: Option<(f64, f64)> = None;
    for x in sample_grid() {
        let v = amp.value(x);
        if !(v >= 0.0) || !v.is_finite() {
            return Err(AuditError::AmplitudeNotDecreasing(x));
        }
        if let Some((_, pv)) = prev {
            // both underflowed: nothing left to compare
            let underflow = pv < 1e-300 && v < 1e-300;
            if !underflow && !(v < pv) {
                return Err(AuditError::AmplitudeNotDecreasing(x));
            }
        }
        prev = Some((x, v));
    }
    Ok(())
}

fn oscillatory_core(
    f: &dyn Fn(f64) -> f64,
    nu: f64,
    kind: OscKind,
    tail: TailModel,
    singular: Option<f64>,
    alternating: bool,
    spec: &QuadSpec,
) -> Result<QuadResult<f64>> {
    spec.validate()?;
    match spec.osc_mode {
        OscMode::PeriodPartition => period_partition(f, nu, kind, tail, singular, alternating, spec),
        OscMode::Adaptive => adaptive_truncated(f, nu, kind, tail, singular, spec),
    }
}

/// `∫_lo^hi f(x)·osc(νx) dx`, with `x = t²` when the amplitude is singular at 0.
fn piece(
    f: &dyn Fn(f64) -> f64,
    nu: f64,
    kind: OscKind,
    lo: f64,
    hi: f64,
    substitute: bool,
    spec: &QuadSpec,
) -> Result<QuadResult<f64>> {
    if substitute && lo == 0.0 {
        integrate_finite(|t: f64| f(t * t) * kind.apply(nu * t * t) * 2.0 * t, 0.0, hi.sqrt(), spec)
    } else if hi - lo > 2.0 {
        // long lobes (small ν): geometric breakpoints so a narrow amplitude is not missed
        let mut pts = vec![lo];
        let mut w = 0.5;
        while lo + w < hi {
            pts.push(lo + w);
            w *= 2.0;
        }
        pts.push(hi);
        integrate_finite_with_breaks(|x: f64| f(x) * kind.apply(nu * x), &pts, spec)
    } else {
        integrate_finite(|x: f64| f(x) * kind.apply(nu * x), lo, hi, spec)
    }
}

fn period_partition(
    f: &dyn Fn(f64) -> f64,
    nu: f64,
    kind: OscKind,
    tail: TailModel,
    singular: Option<f64>,
    alternating: bool,
    spec: &QuadSpec,
) -> Result<QuadResult<f64>> {
    let lobe_spec = QuadSpec { abs_tol: spec.abs_tol / 100.0, ..*spec };
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut evals = 0;
    let mut quiet = 0;
    let mut lo = 0.0;
    let mut finished = false;
    for k in 0..MAX_LOBES {
        let hi = kind.lobe_end(k, nu);
        let lobe = piece(f, nu, kind, lo, hi, singular.is_some(), &lobe_spec)?;
        sum += lobe.value;
        err += lobe.error_estimate;
        evals += lobe.evaluations;
        lo = hi;
        match tail {
            TailModel::Fast => {
                if lobe.value.abs() < spec.abs_tol / 10.0 && k >= 1 {
                    quiet += 1;
                    if alternating || quiet >= 2 {
                        // next lobe is no larger than this one
                        err += lobe.value.abs();
                        finished = true;
                        break;
                    }
                } else {
                    quiet = 0;
                }
            }
            TailModel::PowerLaw { coeff, shift, power } => {
                if k >= 3 && nu * (hi + shift) >= ASYMPTOTIC_START {
                    let (t, te) = power_law_tail(coeff, shift, power, nu, hi, kind);
                    sum += t;
                    err += te;
                    finished = true;
                    break;
                }
            }
        }
    }
    let converged = finished && err <= spec.target(sum);
    Ok(QuadResult { value: sum, error_estimate: err, evaluations: evals, converged })
}

fn adaptive_truncated(
    f: &dyn Fn(f64) -> f64,
    nu: f64,
    kind: OscKind,
    tail: TailModel,
    singular: Option<f64>,
    spec: &QuadSpec,
) -> Result<QuadResult<f64>> {
    match tail {
        TailModel::Fast => {
            let mut x = (PI / nu).max(1.0);
            let cutoff = spec.abs_tol * 1e-3 * nu.min(1.0);
            while f(x).abs() > cutoff || f(2.0 * x).abs() > cutoff {
                x *= 2.0;
                if x > 1e8 {
                    return Err(AuditError::NonConvergence { value: f64::NAN, error: f64::INFINITY });
                }
            }
            let mut r = piece(f, nu, kind, 0.0, x, singular.is_some(), spec)?;
            r.error_estimate += f(x).abs() * 2.0 / nu;
            r.converged = r.converged && r.error_estimate <= spec.target(r.value);
            Ok(r)
        }
        TailModel::PowerLaw { coeff, shift, power } => {
            let x = (ASYMPTOTIC_START / nu - shift).max(PI / nu);
            let mut r = piece(f, nu, kind, 0.0, x, singular.is_some(), spec)?;
            let (t, te) = power_law_tail(coeff, shift, power, nu, x, kind);
            r.value += t;
            r.error_estimate += te;
            r.converged = r.converged && r.error_estimate <= spec.target(r.value);
            Ok(r)
        }
    }
}

/// `∫_X^∞ coeff·(x + shift)^{-p} osc(νx) dx` from
/// `∫_Y^∞ y^{-p} e^{iνy} dy = −e^{iνY} Σ_k (p)_k (iν)^{-(k+1)} Y^{-p-k}`.
///
/// Returns the value and the first omitted term as error.
pub(crate) fn power_law_tail(
    coeff: f64,
    shift: f64,
    power: f64,
    nu: f64,
    x: f64,
    kind: OscKind,
) -> (f64, f64) {
    let y = x + shift;
    let i_nu = Complex64::new(0.0, nu);
    let mut term = y.powf(-power) / i_nu;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    let mut err = 0.0;
    for k in 0..200 {
        let mag = term.norm();
        if mag > last {
            // asymptotic series has started to diverge
            err = last;
            break;
        }
        sum += term;
        last = mag;
        if mag < 1e-18 * sum.norm() {
            err = mag;
            break;
        }
        term = term * (power + k as f64) / (i_nu * y);
    }
    let total = -Complex64::from_polar(coeff, nu * x) * sum;
    let value = match kind {
        OscKind::Sin => total.im,
        OscKind::Cos => total.re,
    };
    (value, err * coeff.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Exp(f64);
    impl Amplitude for Exp {
        fn value(&self, x: f64) -> f64 {
            (-self.0 * x).exp()
        }
        fn tail(&self) -> TailModel {
            TailModel::Fast
        }
    }

    struct Recip;
    impl Amplitude for Recip {
        fn value(&self, x: f64) -> f64 {
            1.0 / x
        }
        fn tail(&self) -> TailModel {
            TailModel::PowerLaw { coeff: 1.0, shift: 0.0, power: 1.0 }
        }
        fn origin_singularity(&self) -> Option<f64> {
            Some(1.0)
        }
    }

    struct Bump;
    impl Amplitude for Bump {
        fn value(&self, x: f64) -> f64 {
            x * (-x).exp()
        }
        fn tail(&self) -> TailModel {
            TailModel::Fast
        }
    }

    #[test]
    fn laplace_of_sine_and_cosine() {
        let spec = QuadSpec::default();
        let s = integrate_oscillatory(&Exp(1.0), 2.0, OscKind::Sin, &spec).unwrap();
        assert!((s.value - 0.4).abs() < 1e-12, "{}", s.value);
        assert!(s.converged);
        let c = integrate_oscillatory(&Exp(1.0), 2.0, OscKind::Cos, &spec).unwrap();
        assert!((c.value - 0.2).abs() < 1e-12, "{}", c.value);
    }

    #[test]
    fn dirichlet_integral_is_half_pi() {
        let spec = QuadSpec::default();
        for nu in [0.5, 1.0, 3.0] {
            let r = integrate_oscillatory(&Recip, nu, OscKind::Sin, &spec).unwrap();
            assert!((r.value - PI / 2.0).abs() < 1e-10, "nu {nu}: {}", r.value);
        }
    }

    #[test]
    fn non_decreasing_amplitude_rejected() {
        let r = integrate_oscillatory(&Bump, 1.0, OscKind::Sin, &QuadSpec::default());
        assert!(matches!(r, Err(AuditError::AmplitudeNotDecreasing(_))));
    }

    #[test]
    fn raw_path_accepts_any_amplitude() {
        // ∫ x e^{-x} sin(x) dx = Im 1/(1-i)^2 = 1/2
        let r = integrate_oscillatory_raw(|x| x * (-x).exp(), 1.0, OscKind::Sin, TailModel::Fast, &QuadSpec::default())
            .unwrap();
        assert!((r.value - 0.5).abs() < 1e-11, "{}", r.value);
    }

    #[test]
    fn adaptive_mode_agrees() {
        let spec = QuadSpec::default().osc_mode(OscMode::Adaptive);
        let s = integrate_oscillatory(&Exp(1.0), 2.0, OscKind::Sin, &spec).unwrap();
        assert!((s.value - 0.4).abs() < 1e-11, "{}", s.value);
        let r = integrate_oscillatory(&Recip, 2.0, OscKind::Sin, &spec).unwrap();
        assert!((r.value - PI / 2.0).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn bad_frequency() {
        assert!(integrate_oscillatory(&Exp(1.0), 0.0, OscKind::Sin, &QuadSpec::default()).is_err());
        assert!(integrate_oscillatory(&Exp(1.0), -1.0, OscKind::Sin, &QuadSpec::default()).is_err());
    }
}
