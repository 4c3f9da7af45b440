//! Deterministic quadrature: adaptive finite integration, semi-infinite
//! integration through a domain map, oscillatory integration by period
//! partition, and iterated integration over the positive quadrant.
//!
//! Every engine is built on the same global-adaptive Gauss–Kronrod loop: the
//! segment with the largest error estimate is bisected until the summed
//! estimate falls under `max(abs_tol, rel_tol·|value|)`, a segment reaches
//! `max_depth`, or the segment budget runs out. An unconverged run is not an
//! error; it comes back with `converged == false` and the best estimate.

mod gk;
pub mod oscillatory;

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Sub};

use num_complex::Complex64;

use crate::error::{AuditError, Result};
use gk::{qk21, RuleOutput};

pub use oscillatory::{integrate_oscillatory, integrate_oscillatory_raw, Amplitude, OscKind, TailModel};

/// Values a quadrature engine can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Send + Sync {
    fn zero() -> Self;
    fn scale(self, k: f64) -> Self;
    /// Magnitude used for error estimation.
    fn norm(&self) -> f64;
    fn is_finite(&self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn scale(self, k: f64) -> Self {
        Complex64::scale(&self, k)
    }
    fn norm(&self) -> f64 {
        Complex64::norm(*self)
    }
    fn is_finite(&self) -> bool {
        Complex64::is_finite(*self)
    }
}

/// A value carried together with the error of the inner integral that
/// produced it, so iterated integration can integrate the inner error along
/// the outer axis. Only `value` drives error estimation.
#[derive(Debug, Clone, Copy)]
pub struct Tracked<T> {
    pub value: T,
    pub err: f64,
}

impl<T: QuadValue> Add for Tracked<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Tracked { value: self.value + o.value, err: self.err + o.err }
    }
}

impl<T: QuadValue> Sub for Tracked<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Tracked { value: self.value - o.value, err: self.err - o.err }
    }
}

impl<T: QuadValue> QuadValue for Tracked<T> {
    fn zero() -> Self {
        Tracked { value: T::zero(), err: 0.0 }
    }
    fn scale(self, k: f64) -> Self {
        Tracked { value: self.value.scale(k), err: self.err * k }
    }
    fn norm(&self) -> f64 {
        self.value.norm()
    }
    fn is_finite(&self) -> bool {
        self.value.is_finite() && self.err.is_finite()
    }
}

/// Map used to bring `[a, ∞)` onto something finite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    /// March over unit-growing panels of `[a, ∞)` without a change of variable.
    None,
    /// `l = a − ln t`; `(0, 1]` is cut into dyadic panels `[2^{-k-1}, 2^{-k}]`.
    ExpTail,
    /// `l = a + t/(1 − t)` on `[0, 1)`, for algebraically decaying integrands.
    LogSub,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscMode {
    Adaptive,
    PeriodPartition,
}

/// Quadrature policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    pub transform: Transform,
    pub osc_mode: OscMode,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_depth: 50,
            transform: Transform::ExpTail,
            osc_mode: OscMode::PeriodPartition,
        }
    }
}

impl QuadSpec {
    pub fn new(
        abs_tol: f64,
        rel_tol: f64,
        max_depth: u32,
        transform: Transform,
        osc_mode: OscMode,
    ) -> Result<Self> {
        let spec = QuadSpec { abs_tol, rel_tol, max_depth, transform, osc_mode };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        QuadSpec { abs_tol, rel_tol, ..Default::default() }.validate_into()
    }

    fn validate_into(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let in_unit = |x: f64| x > 0.0 && x < 1.0;
        if !in_unit(self.abs_tol) || !in_unit(self.rel_tol) {
            return Err(AuditError::Precondition(format!(
                "tolerances must lie in (0, 1): abs {} rel {}",
                self.abs_tol, self.rel_tol
            )));
        }
        if !(1..=60).contains(&self.max_depth) {
            return Err(AuditError::Precondition(format!(
                "max_depth must lie in [1, 60], got {}",
                self.max_depth
            )));
        }
        Ok(())
    }

    pub fn transform(mut self, t: Transform) -> Self {
        self.transform = t;
        self
    }

    pub fn osc_mode(mut self, m: OscMode) -> Self {
        self.osc_mode = m;
        self
    }

    /// Same policy with both tolerances divided by `k`.
    pub fn tightened(mut self, k: f64) -> Self {
        self.abs_tol /= k;
        self.rel_tol /= k;
        self
    }

    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl<T: QuadValue> QuadResult<T> {
    /// Converged result, or [`AuditError::NonConvergence`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(AuditError::NonConvergence { value: self.value.norm(), error: self.error_estimate })
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> QuadResult<U> {
        QuadResult {
            value: f(self.value),
            error_estimate: self.error_estimate,
            evaluations: self.evaluations,
            converged: self.converged,
        }
    }
}

/// Upper limit on live segments in one adaptive run.
const MAX_SEGMENTS: usize = 6000;

struct Segment<T> {
    a: f64,
    b: f64,
    depth: u32,
    out: RuleOutput<T>,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.out.error.total_cmp(&other.out.error) == Ordering::Equal
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.out.error.total_cmp(&other.out.error)
    }
}

fn rule<T, F>(f: &F, a: f64, b: f64, evals: &mut usize) -> Result<RuleOutput<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T + ?Sized,
{
    let out = qk21(f, a, b);
    *evals += 21;
    if !out.value.is_finite() || !out.error.is_finite() {
        return Err(AuditError::Domain(format!("integrand not finite on [{a}, {b}]")));
    }
    Ok(out)
}

/// Global adaptive loop over pre-evaluated segments.
fn refine<T, F>(
    f: &F,
    seeds: Vec<(f64, f64, RuleOutput<T>)>,
    spec: &QuadSpec,
    evals: &mut usize,
) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T + ?Sized,
{
    let mut active = BinaryHeap::new();
    let mut frozen: Vec<Segment<T>> = Vec::new();
    let mut total = T::zero();
    let mut total_err = 0.0;
    for (a, b, out) in seeds {
        total = total + out.value;
        total_err += out.error;
        active.push(Segment { a, b, depth: 0, out });
    }

    let mut converged = false;
    let mut checkpoints: Vec<f64> = Vec::new();
    let mut steps = 0usize;
    loop {
        if total_err <= spec.target(total.norm()) {
            converged = true;
            break;
        }
        let Some(seg) = active.pop() else { break };
        let mid = 0.5 * (seg.a + seg.b);
        let resolvable = mid > seg.a && mid < seg.b;
        let at_noise = seg.out.error <= 50.0 * f64::EPSILON * seg.out.resabs;
        if seg.depth >= spec.max_depth || !resolvable || at_noise {
            frozen.push(seg);
            continue;
        }
        if active.len() + frozen.len() + 1 >= MAX_SEGMENTS {
            active.push(seg);
            break;
        }
        let left = rule(f, seg.a, mid, evals)?;
        let right = rule(f, mid, seg.b, evals)?;
        total = total - seg.out.value + left.value + right.value;
        total_err += left.error + right.error - seg.out.error;
        active.push(Segment { a: seg.a, b: mid, depth: seg.depth + 1, out: left });
        active.push(Segment { a: mid, b: seg.b, depth: seg.depth + 1, out: right });

        steps += 1;
        if steps % 16 == 0 {
            checkpoints.push(total.norm());
            if grows_tenfold_thrice(&checkpoints) {
                return Err(AuditError::Divergence(total.norm()));
            }
        }
    }

    // recompute in a fixed order so the result does not depend on heap layout
    let mut all: Vec<Segment<T>> = active.into_vec();
    all.extend(frozen);
    all.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = T::zero();
    let mut error = 0.0;
    for s in &all {
        value = value + s.out.value;
        error += s.out.error;
    }
    let converged = converged && error <= spec.target(value.norm());
    Ok(QuadResult { value, error_estimate: error, evaluations: *evals, converged })
}

/// True when the last three checkpoints each grew by more than 10x.
fn grows_tenfold_thrice(history: &[f64]) -> bool {
    if history.len() < 4 {
        return false;
    }
    let tail = &history[history.len() - 4..];
    tail.windows(2).all(|w| w[0] > 0.0 && w[1] > 10.0 * w[0])
}

/// Adaptive integration of `f` over `[a, b]`.
pub fn integrate_finite<T, F>(f: F, a: f64, b: f64, spec: &QuadSpec) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    spec.validate()?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(AuditError::Precondition(format!("integration bounds need a < b, got [{a}, {b}]")));
    }
    let mut evals = 0;
    let first = rule(&f, a, b, &mut evals)?;
    refine(&f, vec![(a, b, first)], spec, &mut evals)
}

/// Adaptive integration over `[a, b]` with caller-chosen interior breakpoints.
pub fn integrate_finite_with_breaks<T, F>(
    f: F,
    points: &[f64],
    spec: &QuadSpec,
) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    spec.validate()?;
    if points.len() < 2 || points.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(AuditError::Precondition("breakpoints must be strictly increasing".into()));
    }
    let mut evals = 0;
    let mut seeds = Vec::with_capacity(points.len() - 1);
    for w in points.windows(2) {
        seeds.push((w[0], w[1], rule(&f, w[0], w[1], &mut evals)?));
    }
    refine(&f, seeds, spec, &mut evals)
}

/// Panels marched before giving up on the tail.
const MAX_PANELS: usize = 1000;
/// Consecutive negligible panels that end the march.
const QUIET_PANELS: usize = 3;

/// Integrates `f` over `[a, ∞)`.
///
/// `ExpTail` and `None` march panels outward until three consecutive panels
/// carry negligible absolute mass, then refine all panels together; the mass
/// of the last panel is added to the error estimate as the tail allowance.
/// `LogSub` maps onto `[0, 1)` and refines a single segment.
pub fn integrate_semi_infinite<T, F>(f: F, a: f64, spec: &QuadSpec) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    spec.validate()?;
    if !a.is_finite() {
        return Err(AuditError::Precondition(format!("lower limit must be finite, got {a}")));
    }
    match spec.transform {
        Transform::LogSub => {
            let g = |t: f64| {
                let one_minus = 1.0 - t;
                f(a + t / one_minus).scale(1.0 / (one_minus * one_minus))
            };
            let mut evals = 0;
            let first = rule(&g, 0.0, 1.0, &mut evals)?;
            refine(&g, vec![(0.0, 1.0, first)], spec, &mut evals)
        }
        Transform::ExpTail => {
            // l = a - ln t, dl = -dt/t
            let g = |t: f64| f(a - t.ln()).scale(1.0 / t);
            march(&g, spec, |k| {
                let hi = 0.5f64.powi(k as i32);
                (hi * 0.5, hi)
            })
        }
        Transform::None => march(&f, spec, |k| {
            // widths 1, 1, 2, 2, 4, 4, ... capped at 8
            let mut lo = a;
            for i in 0..k {
                lo += panel_width(i);
            }
            (lo, lo + panel_width(k))
        }),
    }
}

fn panel_width(k: usize) -> f64 {
    2f64.powi((k / 2).min(3) as i32)
}

fn march<T, F, P>(f: &F, spec: &QuadSpec, panel: P) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T + ?Sized,
    P: Fn(usize) -> (f64, f64),
{
    let mut evals = 0;
    let mut seeds = Vec::new();
    let mut running = T::zero();
    let mut quiet = 0;
    let mut last_mass = f64::INFINITY;
    let mut masses = Vec::new();
    for k in 0..MAX_PANELS {
        let (lo, hi) = panel(k);
        if !(lo < hi) {
            break;
        }
        let out = rule(f, lo, hi, &mut evals)?;
        running = running + out.value;
        last_mass = out.resabs;
        masses.push(out.resabs);
        seeds.push((lo, hi, out));
        if k % 8 == 7 && grows_tenfold_thrice(&checkpoint_masses(&masses)) {
            return Err(AuditError::Divergence(running.norm()));
        }
        if out.resabs <= 1e-3 * spec.target(running.norm()) {
            quiet += 1;
            if quiet >= QUIET_PANELS {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    let mut result = refine(f, seeds, spec, &mut evals)?;
    result.error_estimate += last_mass;
    if quiet < QUIET_PANELS {
        result.converged = false;
    }
    result.converged = result.converged && result.error_estimate <= spec.target(result.value.norm());
    Ok(result)
}

/// Running panel mass sampled every eight panels.
fn checkpoint_masses(masses: &[f64]) -> Vec<f64> {
    masses.chunks(8).filter(|c| c.len() == 8).map(|c| c.iter().sum()).collect()
}

/// Result of an iterated quadrant integration, with per-axis convergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadrantResult<T> {
    pub result: QuadResult<T>,
    pub outer_converged: bool,
    /// Number of inner integrals that failed to converge.
    pub inner_failures: usize,
}

/// Iterated integration of `f2(l1, l2)` over the positive quadrant.
///
/// The inner axis runs at one tenth of the outer tolerance; the inner error
/// estimates are integrated along the outer axis and added to the total.
pub fn integrate_quadrant<T, F>(f2: F, spec: &QuadSpec) -> Result<QuadrantResult<T>>
where
    T: QuadValue,
    F: Fn(f64, f64) -> T,
{
    spec.validate()?;
    let inner_spec = spec.tightened(10.0);
    let evals = Cell::new(0usize);
    let failures = Cell::new(0usize);
    let first_err: Cell<Option<AuditError>> = Cell::new(None);
    let outer = |l1: f64| -> Tracked<T> {
        match integrate_semi_infinite(|l2| f2(l1, l2), 0.0, &inner_spec) {
            Ok(r) => {
                evals.set(evals.get() + r.evaluations);
                if !r.converged {
                    failures.set(failures.get() + 1);
                }
                Tracked { value: r.value, err: r.error_estimate }
            }
            Err(e) => {
                let prev = first_err.take();
                first_err.set(Some(prev.unwrap_or(e)));
                Tracked { value: T::zero(), err: f64::NAN }
            }
        }
    };
    let r = integrate_semi_infinite(outer, 0.0, spec);
    if let Some(e) = first_err.take() {
        return Err(e);
    }
    let r = r?;
    let inner_err = r.value.err.abs();
    let error = r.error_estimate + inner_err;
    let value = r.value.value;
    let inner_failures = failures.get();
    let converged = r.converged && inner_failures == 0 && error <= spec.target(value.norm());
    Ok(QuadrantResult {
        result: QuadResult { value, error_estimate: error, evaluations: evals.get(), converged },
        outer_converged: r.converged,
        inner_failures,
    })
}

/// `∫₀^∞ w·g(w) dw`, the reduction of `∬ h(l1 + l2) d²l` to one dimension.
pub fn integrate_diag_reduced<T, F>(g: F, spec: &QuadSpec) -> Result<QuadResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    integrate_semi_infinite(|w| g(w).scale(w), 0.0, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec() -> QuadSpec {
        QuadSpec::default()
    }

    #[test]
    fn finite_basics() {
        let r = integrate_finite(|x: f64| x * x, 0.0, 1.0, &spec()).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0 / 3.0).abs() < 1e-14);
        let r = integrate_finite(f64::sin, 0.0, PI, &spec()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-14);
    }

    #[test]
    fn finite_rejects_bad_bounds() {
        assert!(integrate_finite(|x: f64| x, 1.0, 1.0, &spec()).is_err());
        assert!(integrate_finite(|x: f64| x, 2.0, 1.0, &spec()).is_err());
    }

    #[test]
    fn finite_non_convergence_is_reported_not_thrown() {
        let tight = QuadSpec { max_depth: 2, ..spec() };
        let r = integrate_finite(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &tight).unwrap();
        assert!(!r.converged);
        assert!(r.value.is_finite());
    }

    #[test]
    fn converged_respects_tolerance() {
        let r = integrate_finite(|x: f64| x.sqrt(), 0.0, 1.0, &spec()).unwrap();
        assert!(r.converged);
        assert!(r.error_estimate <= spec().target(r.value));
        assert!((r.value - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn spec_validation() {
        assert!(QuadSpec::with_tol(0.0, 1e-3).is_err());
        assert!(QuadSpec::with_tol(1e-3, 1.0).is_err());
        assert!(QuadSpec::new(1e-8, 1e-8, 61, Transform::None, OscMode::Adaptive).is_err());
        assert!(QuadSpec::new(1e-8, 1e-8, 0, Transform::None, OscMode::Adaptive).is_err());
    }

    #[test]
    fn semi_infinite_all_transforms() {
        for t in [Transform::ExpTail, Transform::None, Transform::LogSub] {
            let s = spec().transform(t);
            let r = integrate_semi_infinite(|l: f64| (-l).exp(), 0.0, &s).unwrap();
            assert!((r.value - 1.0).abs() < 1e-11, "{t:?}: {}", r.value);
            let r = integrate_semi_infinite(|l: f64| (-2.0 * l).exp(), 0.0, &s).unwrap();
            assert!((r.value - 0.5).abs() < 1e-11, "{t:?}: {}", r.value);
        }
        let r = integrate_semi_infinite(|u: f64| u * u * (-2.0 * u).exp() / 2.0, 0.0, &spec()).unwrap();
        assert!((r.value - 0.125).abs() < 1e-12);
    }

    #[test]
    fn semi_infinite_algebraic_decay_with_log_sub() {
        let s = spec().transform(Transform::LogSub);
        let r = integrate_semi_infinite(|l: f64| 1.0 / (1.0 + l * l), 0.0, &s).unwrap();
        assert!((r.value - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn semi_infinite_detects_growth() {
        let r = integrate_semi_infinite(|l: f64| (l).exp(), 0.0, &spec());
        assert!(matches!(r, Err(AuditError::Divergence(_))), "{r:?}");
    }

    #[test]
    fn semi_infinite_slow_oscillation() {
        // ∫ e^{-l/4} cos(20 l) dl = (1/4) / (1/16 + 400)
        let r = integrate_semi_infinite(|l: f64| (-0.25 * l).exp() * (20.0 * l).cos(), 0.0, &spec())
            .unwrap();
        let exact = 0.25 / (0.0625 + 400.0);
        assert!((r.value - exact).abs() < 1e-10, "{} vs {exact}", r.value);
        assert!(r.converged);
    }

    #[test]
    fn quadrant_products() {
        let s = QuadSpec::with_tol(1e-10, 1e-10).unwrap();
        let r = integrate_quadrant(|a: f64, b: f64| (-(a + b)).exp(), &s).unwrap();
        assert!((r.result.value - 1.0).abs() < 1e-9);
        let r = integrate_quadrant(|a: f64, b: f64| (-(a + 2.0 * b)).exp(), &s).unwrap();
        assert!((r.result.value - 0.5).abs() < 1e-9);
        let z = Complex64::new(3.0, 4.0);
        let r = integrate_quadrant(|a: f64, b: f64| (-(z * a + z.conj() * b)).exp(), &s).unwrap();
        assert!((r.result.value - Complex64::new(0.04, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn diag_reduction_matches_quadrant() {
        let s = QuadSpec::with_tol(1e-11, 1e-11).unwrap();
        let d = integrate_diag_reduced(|w: f64| (-w).exp(), &s).unwrap();
        assert!((d.value - 1.0).abs() < 1e-11);
        let d = integrate_diag_reduced(|w: f64| (-2.0 * w).exp(), &s).unwrap();
        assert!((d.value - 0.25).abs() < 1e-11);
        let d = integrate_diag_reduced(|w: f64| (-3.0 * w).exp(), &s).unwrap();
        let q = integrate_quadrant(|a: f64, b: f64| (-3.0 * (a + b)).exp(), &s).unwrap();
        assert!((d.value - q.result.value).abs() < 1e-10);
    }
}
