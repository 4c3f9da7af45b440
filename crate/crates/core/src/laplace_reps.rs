//! Laplace representations of `1/z` and `|z|⁻²`, and necessary-condition
//! audits for a real two-dimensional Laplace representation of `|z|⁻²`:
//! positive semidefinite Gram matrices and complete monotonicity.

use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{AuditError, Result};
use crate::fields;
use crate::fresnel::{fresnel_cos, AmplitudeSpec};
use crate::quad::{integrate_finite, integrate_quadrant, integrate_semi_infinite, QuadResult, QuadSpec};
use crate::report::{complex_json, ClaimReport, ClaimStatus, Value};

/// Complex form `⟨z, l⟩ = z·l₁ + conj(z)·l₂`.
pub fn complex_form(z: Complex64, l1: f64, l2: f64) -> Complex64 {
    z * l1 + z.conj() * l2
}

/// Euclidean form `z·l = re(z)·l₁ + im(z)·l₂`.
pub fn real_form(z: Complex64, l1: f64, l2: f64) -> f64 {
    z.re * l1 + z.im * l2
}

fn require_right_half(z: Complex64) -> Result<()> {
    if z.re > 0.0 && z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(AuditError::Precondition(format!("need re(z) > 0, got {z}")))
    }
}

/// `∫₀^∞ e^{−zl} dl` against `1/z`.
pub fn rep_inverse_z(z: Complex64, spec: &QuadSpec) -> Result<ClaimReport> {
    require_right_half(z)?;
    let r = integrate_semi_infinite(|l: f64| (-z * l).exp(), 0.0, spec)?;
    Ok(ClaimReport::compare(
        "laplace.inverse_z",
        fields! { "z" => complex_json(z) },
        Value::from(r.value),
        Value::from(z.inv()),
        r.error_estimate,
        1e-8,
    )
    .with_detail("converged", r.converged))
}

/// `∬ e^{−⟨z,l⟩} d²l` over the quadrant against `1/|z|²`.
pub fn rep_green_complex(z: Complex64, spec: &QuadSpec) -> Result<ClaimReport> {
    require_right_half(z)?;
    let q = integrate_quadrant(|l1: f64, l2: f64| (-complex_form(z, l1, l2)).exp(), spec)?;
    Ok(ClaimReport::compare(
        "laplace.green_complex",
        fields! { "z" => complex_json(z) },
        Value::from(q.result.value),
        Value::Real(1.0 / z.norm_sqr()),
        q.result.error_estimate,
        1e-6,
    )
    .with_detail("converged", q.result.converged)
    .with_detail("innerFailures", q.inner_failures))
}

/// The double Fresnel integral `F₂₂(z) = ∬ e^{−x(l₁+l₂)} cos(y(l₂−l₁)) d²l`
/// two ways, each against `1/|z|²`.
///
/// The first report integrates over the quadrant. The second evaluates the
/// product `∫₀^∞ e^{−2xu} du · ∫₀^∞ e^{−xv} cos(yv) dv` obtained from the
/// substitution `u = l₁, v = l₂ − l₁`, which equals `1/(2|z|²)`.
pub fn rep_green_fresnel(z: Complex64, spec: &QuadSpec) -> Result<[ClaimReport; 2]> {
    require_right_half(z)?;
    let (x, y) = (z.re, z.im);
    let exact = 1.0 / z.norm_sqr();
    let inputs = fields! { "z" => complex_json(z) };

    let q = integrate_quadrant(|l1: f64, l2: f64| (-x * (l1 + l2)).exp() * (y * (l2 - l1)).cos(), spec)?;
    let direct = ClaimReport::compare(
        "laplace.f22_direct",
        inputs.clone(),
        Value::Real(q.result.value),
        Value::Real(exact),
        q.result.error_estimate,
        1e-6,
    );

    let first = integrate_semi_infinite(|u: f64| (-2.0 * x * u).exp(), 0.0, spec)?;
    let second = if y == 0.0 {
        integrate_semi_infinite(|v: f64| (-x * v).exp(), 0.0, spec)?
    } else {
        fresnel_cos(&AmplitudeSpec::Exp { a: x }, y.abs(), spec)?
    };
    let product = first.value * second.value;
    let err = first.error_estimate * second.value.abs() + second.error_estimate * first.value.abs();
    let factored = ClaimReport::compare("laplace.f22_factored", inputs, Value::Real(product), Value::Real(exact), err, 1e-6)
        .with_detail("ratio", product / exact);
    Ok([direct, factored])
}

/// Points and weights for the Gram matrix `M_ij = |z_i + z_j|⁻²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramSample {
    pub points: Vec<(f64, f64)>,
    pub weights: Vec<f64>,
}

/// Smallest coordinate allowed in a [`GramSample`].
pub const MIN_OFFSET: f64 = 1e-3;
pub const MAX_GRAM_POINTS: usize = 64;

impl GramSample {
    pub fn new(points: Vec<(f64, f64)>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(AuditError::Precondition("one weight per point".into()));
        }
        if points.is_empty() {
            return Err(AuditError::Precondition("empty Gram sample".into()));
        }
        if points.len() > MAX_GRAM_POINTS {
            return Err(AuditError::DimensionOverflow(points.len()));
        }
        for &(a, b) in &points {
            if !(a >= MIN_OFFSET && b >= MIN_OFFSET && a.is_finite() && b.is_finite()) {
                return Err(AuditError::Precondition(format!("point ({a}, {b}) outside [{MIN_OFFSET}, ∞)²")));
            }
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(AuditError::Precondition("weights must be finite".into()));
        }
        Ok(GramSample { points, weights })
    }

    /// `n` log-uniform points in `[0.01, 10]²` and weights uniform in `[-1, 1)`.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..n).map(|_| (log_uniform(&mut rng), log_uniform(&mut rng))).collect();
        let weights = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        GramSample::new(points, weights)
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        gram_matrix(&self.points)
    }
}

fn log_uniform(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range((0.01f64).ln()..(10.0f64).ln()).exp()
}

fn gram_matrix(points: &[(f64, f64)]) -> DMatrix<f64> {
    let n = points.len();
    DMatrix::from_fn(n, n, |i, j| {
        let (a, b) = (points[i].0 + points[j].0, points[i].1 + points[j].1);
        1.0 / (a * a + b * b)
    })
}

fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.min()
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Sylvester test of `M_ij = |z_i + z_j|⁻²` through its smallest eigenvalue.
pub fn gram_psd_check(sample: &GramSample) -> Result<ClaimReport> {
    let n = sample.points.len();
    if n == 0 || n > MAX_GRAM_POINTS {
        return Err(AuditError::DimensionOverflow(n));
    }
    let m = sample.matrix();
    let lambda = min_eigenvalue(&m);
    let band = n as f64 * 1e-10 * max_abs(&m);
    let r = nalgebra::DVector::from_column_slice(&sample.weights);
    let form = (r.transpose() * &m * &r)[(0, 0)];
    Ok(ClaimReport::nonnegative("laplace.gram_psd", fields! { "sample" => sample }, lambda, band)
        .with_detail("quadraticForm", form)
        .with_detail("maxEntry", max_abs(&m)))
}

/// `λ_min(M)/max|M|` over coordinates `MIN_OFFSET + e^θ`.
struct LambdaObjective {
    n: usize,
}

impl LambdaObjective {
    fn points(&self, theta: &[f64]) -> Vec<(f64, f64)> {
        (0..self.n)
            .map(|i| (MIN_OFFSET + theta[2 * i].clamp(-12.0, 6.0).exp(), MIN_OFFSET + theta[2 * i + 1].clamp(-12.0, 6.0).exp()))
            .collect()
    }

    fn eval(&self, theta: &[f64]) -> f64 {
        let m = gram_matrix(&self.points(theta));
        min_eigenvalue(&m) / max_abs(&m)
    }
}

impl CostFunction for LambdaObjective {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, theta: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        Ok(self.eval(theta))
    }
}

const RESTARTS: usize = 8;

/// Random restarts plus Nelder–Mead descent on the normalised smallest
/// eigenvalue of the Gram matrix. `budget` is the total number of descent
/// iterations shared by the restarts; zero keeps the best random start.
pub fn lhpd_falsify(budget: usize, n_points: usize, seed: u64) -> Result<ClaimReport> {
    if n_points == 0 || n_points > MAX_GRAM_POINTS {
        return Err(AuditError::DimensionOverflow(n_points));
    }
    let dim = 2 * n_points;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<Vec<f64>> =
        (0..RESTARTS).map(|_| (0..dim).map(|_| rng.random_range(-4.0..2.0)).collect()).collect();
    let per_run = budget / RESTARTS + usize::from(budget % RESTARTS != 0);

    let runs: Vec<(f64, Vec<f64>)> = starts
        .into_par_iter()
        .map(|start| {
            let obj = LambdaObjective { n: n_points };
            let initial = obj.eval(&start);
            if per_run == 0 {
                return (initial, start);
            }
            let mut simplex = vec![start.clone()];
            for k in 0..dim {
                let mut v = start.clone();
                v[k] += 0.5;
                simplex.push(v);
            }
            let solver = NelderMead::new(simplex);
            match Executor::new(LambdaObjective { n: n_points }, solver)
                .configure(|s| s.max_iters(per_run as u64))
                .run()
            {
                Ok(res) => match res.state.best_param {
                    Some(p) if res.state.best_cost < initial => (res.state.best_cost, p),
                    _ => (initial, start),
                },
                Err(_) => (initial, start),
            }
        })
        .collect();

    let (best, theta) = runs
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one restart");
    let obj = LambdaObjective { n: n_points };
    let points = obj.points(&theta);
    let m = gram_matrix(&points);
    let band = n_points as f64 * 1e-10;
    Ok(ClaimReport::nonnegative(
        "laplace.lhpd_falsify",
        fields! { "budget" => budget, "nPoints" => n_points, "seed" => seed },
        best,
        band,
    )
    .with_detail("witness", serde_json::json!(points))
    .with_detail("rawLambdaMin", min_eigenvalue(&m))
    .with_detail("restarts", RESTARTS))
}

/// Rectangle of sample points for [`cm_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CmGrid {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl CmGrid {
    pub fn point(x: f64, y: f64) -> Self {
        CmGrid { x: (x, x), y: (y, y), nx: 1, ny: 1 }
    }

    fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        if n <= 1 {
            vec![lo]
        } else {
            (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
        }
    }

    fn spacing(&self) -> f64 {
        let sx = if self.nx > 1 { (self.x.1 - self.x.0) / (self.nx - 1) as f64 } else { f64::INFINITY };
        let sy = if self.ny > 1 { (self.y.1 - self.y.0) / (self.ny - 1) as f64 } else { f64::INFINITY };
        sx.min(sy)
    }
}

/// `|z|⁻²` on the real quadrant.
pub fn green(x: f64, y: f64) -> f64 {
    1.0 / (x * x + y * y)
}

/// Forward difference `Δ_x^i Δ_y^j f(x, y) / h^{i+j}`.
pub fn mixed_difference(f: impl Fn(f64, f64) -> f64, x: f64, y: f64, i: usize, j: usize, h: f64) -> f64 {
    let mut sum = 0.0;
    for a in 0..=i {
        for b in 0..=j {
            let sign = if (i - a + j - b) % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * binomial(i, a) * binomial(j, b) * f(x + a as f64 * h, y + b as f64 * h);
        }
    }
    sum / h.powi((i + j) as i32)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, m| acc * (n - m) as f64 / (m + 1) as f64)
}

/// Signs of `(−1)^{|α|} Δ^α f` for `f = |z|⁻²` and `1 ≤ |α| ≤ order` over the
/// grid. Complete monotonicity requires every one to be nonnegative.
pub fn cm_scan(grid: &CmGrid, order: usize, h: f64) -> Result<ClaimReport> {
    if !(1..=4).contains(&order) {
        return Err(AuditError::Precondition(format!("order must lie in 1..=4, got {order}")));
    }
    if !(grid.x.0 > 0.0 && grid.y.0 > 0.0 && grid.x.0 <= grid.x.1 && grid.y.0 <= grid.y.1) {
        return Err(AuditError::Precondition("grid must lie inside the open quadrant".into()));
    }
    if !(h > 0.0) || h * order as f64 >= grid.spacing().min(grid.x.0).min(grid.y.0) {
        return Err(AuditError::StepTooLarge(format!("h = {h} against grid spacing {}", grid.spacing())));
    }
    let mut worst: Option<(f64, f64, f64, usize, usize)> = None;
    let mut negatives = 0usize;
    let mut checked = 0usize;
    let mut noise_max = 0.0f64;
    for x in CmGrid::axis(grid.x.0, grid.x.1, grid.nx) {
        for y in CmGrid::axis(grid.y.0, grid.y.1, grid.ny) {
            let f0 = green(x, y);
            for total in 1..=order {
                // rounding in a difference of order k: about 2^k ε |f| / h^k
                let noise = 2f64.powi(total as i32) * f64::EPSILON * f0 / h.powi(total as i32);
                if noise > 1e-8 {
                    return Err(AuditError::StepTooLarge(format!(
                        "differencing noise {noise:e} at order {total} dominates the 1e-8 band; h = {h} is too small"
                    )));
                }
                noise_max = noise_max.max(noise);
                for i in 0..=total {
                    let j = total - i;
                    let sign = if total % 2 == 0 { 1.0 } else { -1.0 };
                    let v = sign * mixed_difference(green, x, y, i, j, h);
                    checked += 1;
                    if v < -1e-8 {
                        negatives += 1;
                    }
                    if worst.is_none_or(|w| v < w.0) {
                        worst = Some((v, x, y, i, j));
                    }
                }
            }
        }
    }
    let (v, x, y, i, j) = worst.expect("nonempty grid");
    Ok(ClaimReport::nonnegative("laplace.cm_scan", fields! { "grid" => grid, "order" => order, "h" => h }, v, 1e-8)
        .with_detail("witness", serde_json::json!({ "x": x, "y": y, "alpha": [i, j] }))
        .with_detail("negatives", negatives)
        .with_detail("checked", checked)
        .with_detail("roundingNoise", noise_max))
}

/// `∫₀^∞ e^{−ru} u^{l−1}/(l−1)! du` against `r^{−l}`.
///
/// For `l = 0` the integrand is `e^{−ru}/u`, which is not integrable at the
/// origin; the report then lists truncated integrals `∫_ε^∞` growing like
/// `ln(1/ε)` and is marked VIOLATED.
pub fn bernstein_rep(r: f64, l: i64, spec: &QuadSpec) -> Result<ClaimReport> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(AuditError::Precondition(format!("need r > 0, got {r}")));
    }
    if l < 0 {
        return Err(AuditError::Precondition(format!("need l ≥ 0, got {l}")));
    }
    let inputs = fields! { "r" => r, "l" => l };
    if l == 0 {
        let mut truncated = Vec::new();
        let mut err = 0.0;
        for k in 1..=8 {
            let eps = 10f64.powi(-k);
            let q = integrate_semi_infinite(|u: f64| (-r * u).exp() / u, eps, spec)?;
            truncated.push(q.value);
            err = q.error_estimate;
        }
        let last = *truncated.last().expect("eight cutoffs");
        return Ok(ClaimReport::compare("laplace.bernstein", inputs, Value::Real(last), Value::Real(1.0), err, 1e-10)
            .with_status(ClaimStatus::Violated)
            .with_detail("divergent", true)
            .with_detail("truncatedAt", (1..=8).map(|k| 10f64.powi(-k)).collect::<Vec<_>>())
            .with_detail("truncatedValues", truncated));
    }
    let l = l as i32;
    let fact: f64 = (1..l).map(f64::from).product();
    let q = integrate_semi_infinite(|u: f64| (-r * u).exp() * u.powi(l - 1) / fact, 0.0, spec)?;
    Ok(ClaimReport::compare("laplace.bernstein", inputs, Value::Real(q.value), Value::Real(r.powi(-l)), q.error_estimate, 1e-10))
}

/// `∫₀¹ y^{4j} dy`, the `j`-th moment of the image of the uniform law under `y ↦ y⁴`.
pub fn moment_b2(j: u32, spec: &QuadSpec) -> Result<QuadResult<f64>> {
    integrate_finite(|y: f64| y.powi(4 * j as i32), 0.0, 1.0, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bilinear_forms() {
        let z = c(0.7, -1.3);
        let w = complex_form(z, 2.0, 0.5);
        assert!((w.re - 0.7 * 2.5).abs() < 1e-15);
        assert!((w.im - (-1.3) * 1.5).abs() < 1e-15);
        assert_eq!(real_form(z, 2.0, 0.5), 0.7 * 2.0 - 1.3 * 0.5);
    }

    #[test]
    fn inverse_z() {
        let spec = QuadSpec::default();
        for z in [c(2.0, 0.0), c(1.0, 1.0), c(0.25, 10.0)] {
            let r = rep_inverse_z(z, &spec).unwrap();
            assert!(r.abs_residual < 1e-8, "{z}: {}", r.abs_residual);
            assert_eq!(r.status, ClaimStatus::Confirmed);
        }
        assert!(rep_inverse_z(c(0.0, 1.0), &spec).is_err());
    }

    #[test]
    fn green_complex() {
        let spec = QuadSpec::with_tol(1e-9, 1e-9).unwrap();
        for z in [c(1.0, 0.0), c(3.0, 4.0), c(0.5, 2.0)] {
            let r = rep_green_complex(z, &spec).unwrap();
            assert!(r.abs_residual < 1e-6, "{z}: {}", r.abs_residual);
        }
    }

    #[test]
    fn fresnel_double_integral_and_factored_form() {
        let spec = QuadSpec::with_tol(1e-9, 1e-9).unwrap();
        let [direct, factored] = rep_green_fresnel(c(1.0, 0.0), &spec).unwrap();
        assert!((direct.lhs.re() - 1.0).abs() < 1e-6);
        assert_eq!(direct.status, ClaimStatus::Confirmed);
        assert!((factored.lhs.re() - 0.5).abs() < 1e-9);
        assert_eq!(factored.status, ClaimStatus::Violated);
        let [direct, _] = rep_green_fresnel(c(2.0, 1.0), &spec).unwrap();
        assert!((direct.lhs.re() - 0.2).abs() < 1e-6);
    }

    #[test]
    fn gram_examples() {
        let one = GramSample::new(vec![(1.0, 1.0)], vec![1.0]).unwrap();
        let r = gram_psd_check(&one).unwrap();
        assert!((r.lhs.re() - 0.125).abs() < 1e-15);
        assert_eq!(r.status, ClaimStatus::Confirmed);

        let two = GramSample::new(vec![(1.0, 0.1), (0.1, 1.0)], vec![1.0, -1.0]).unwrap();
        let r = gram_psd_check(&two).unwrap();
        let (a, b) = (1.0 / 4.04, 1.0 / 2.42);
        assert!((r.lhs.re() - (a - b)).abs() < 1e-14);
        let form = r.details["quadraticForm"].as_f64().unwrap();
        assert!((form - 2.0 * (a - b)).abs() < 1e-14);
        assert_eq!(r.status, ClaimStatus::Violated);
    }

    #[test]
    fn gram_rejects_bad_samples() {
        assert!(matches!(GramSample::random(65, 0), Err(AuditError::DimensionOverflow(65))));
        assert!(GramSample::new(vec![(0.0, 1.0)], vec![1.0]).is_err());
        assert!(GramSample::new(vec![(1.0, 1.0)], vec![]).is_err());
    }

    #[test]
    fn diagonal_points_are_psd() {
        let pts: Vec<(f64, f64)> = (1..=12).map(|k| (0.2 * k as f64, 0.2 * k as f64)).collect();
        let sample = GramSample::new(pts, vec![1.0; 12]).unwrap();
        let r = gram_psd_check(&sample).unwrap();
        assert_eq!(r.status, ClaimStatus::Confirmed);
    }

    #[test]
    fn falsifier_is_deterministic_and_finds_negative_directions() {
        let a = lhpd_falsify(400, 3, 11).unwrap();
        let b = lhpd_falsify(400, 3, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.lhs.re() < 0.0);
        let single = lhpd_falsify(100, 1, 3).unwrap();
        assert!(single.lhs.re() > 0.0);
        let zero = lhpd_falsify(0, 4, 3).unwrap();
        assert!(zero.lhs.re().is_finite());
    }

    #[test]
    fn cm_scan_signs() {
        let h = 1e-2;
        assert!(-mixed_difference(green, 1.0, 1.0, 1, 0, h) > 0.0);
        let fxx = mixed_difference(green, 1.0, 2.0, 2, 0, h);
        assert!(fxx < 0.0 && (fxx + 2.0 / 125.0).abs() < 2e-3);
        let fxy = mixed_difference(green, 1.0, 2.0, 1, 1, h);
        assert!(fxy > 0.0 && (fxy - 16.0 / 125.0).abs() < 1e-2);

        let r = cm_scan(&CmGrid::point(1.0, 2.0), 2, h).unwrap();
        assert_eq!(r.status, ClaimStatus::Violated);
        assert_eq!(r.details["witness"]["alpha"], serde_json::json!([2, 0]));

        let first = cm_scan(&CmGrid { x: (0.5, 3.0), y: (0.5, 3.0), nx: 6, ny: 6 }, 1, 1e-3).unwrap();
        assert_eq!(first.status, ClaimStatus::Confirmed);
        assert!(cm_scan(&CmGrid::point(1.0, 2.0), 2, 2.0).is_err());
        assert!(matches!(cm_scan(&CmGrid::point(1.0, 2.0), 4, 1e-6), Err(AuditError::StepTooLarge(_))));
    }

    #[test]
    fn bernstein() {
        let spec = QuadSpec::default();
        for (r, l, want) in [(2.0, 3, 0.125), (1.0, 1, 1.0), (5.0, 1, 0.2)] {
            let rep = bernstein_rep(r, l, &spec).unwrap();
            assert!((rep.lhs.re() - want).abs() < 1e-10);
        }
        let div = bernstein_rep(1.0, 0, &spec).unwrap();
        assert_eq!(div.status, ClaimStatus::Violated);
        let vals: Vec<f64> = serde_json::from_value(div.details["truncatedValues"].clone()).unwrap();
        assert!(vals.windows(2).all(|w| w[1] > w[0] + 2.0));
        assert!(bernstein_rep(1.0, -1, &spec).is_err());
    }

    #[test]
    fn b2_moments() {
        let spec = QuadSpec::default();
        for j in [0, 1, 10, 50] {
            let m = moment_b2(j, &spec).unwrap().value;
            assert!((m * (4 * j + 1) as f64 - 1.0).abs() < 1e-10, "{j}: {m}");
        }
    }
}
