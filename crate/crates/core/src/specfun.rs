//! Complex special functions: Gamma, zeta, the Jacobi theta series, the
//! completed zeta and a few auxiliary sums.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{AuditError, Result};

/// Target accuracy and truncation cap for series evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalPrecision {
    digits: u32,
    max_terms: usize,
}

/// Correct decimal digits the double-precision backend can deliver.
pub const BACKEND_DIGITS: u32 = 15;

impl EvalPrecision {
    pub fn new(digits: u32, max_terms: usize) -> Result<Self> {
        if !(15..=BACKEND_DIGITS).contains(&digits) {
            return Err(AuditError::Precondition(format!(
                "digits must lie in [15, {BACKEND_DIGITS}], got {digits}"
            )));
        }
        if max_terms == 0 {
            return Err(AuditError::Precondition("max_terms must be at least 1".into()));
        }
        Ok(EvalPrecision { digits, max_terms })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl Default for EvalPrecision {
    fn default() -> Self {
        EvalPrecision { digits: 15, max_terms: 400 }
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn check_finite(z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(AuditError::Domain(format!("non-finite argument {z}")))
    }
}

/// Γ(z) by the g = 7 Lanczos approximation, reflected for re(z) < 1/2.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    check_finite(z)?;
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(AuditError::Pole(format!("Gamma at {}", z.re)));
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1-z) = π / sin(πz)
        let s = (z * PI).sin();
        return Complex64::new(PI, 0.0) / (s * gamma_unchecked(Complex64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let log = (z + 0.5) * t.ln() - t + x.ln() + 0.5 * (2.0 * PI).ln();
    log.exp()
}

/// Distance guard around s = 1 and the zeros of 1 - 2^(1-s).
const POLE_GUARD: f64 = 1e-6;
const ZETA_MAX_IM: f64 = 50.0;
const ZETA_MAX_RE: f64 = 4.0;

/// Riemann zeta through the alternating (eta) series with Borwein's
/// binomial-weighted acceleration.
///
/// Certified for re(s) in (0, 4] and |im(s)| <= 50.
pub fn zeta(s: Complex64, prec: EvalPrecision) -> Result<Complex64> {
    check_finite(s)?;
    if (s - 1.0).norm() < POLE_GUARD {
        return Err(AuditError::Pole(format!("zeta at {s}")));
    }
    if !(s.re > 0.0 && s.re <= ZETA_MAX_RE && s.im.abs() <= ZETA_MAX_IM) {
        return Err(AuditError::Domain(format!(
            "zeta certified for re(s) in (0,4], |im(s)| <= 50; got {s}"
        )));
    }
    // zeros of 1 - 2^(1-s) sit at 1 + 2πik/ln 2
    let step = 2.0 * PI / LN_2;
    let k = (s.im / step).round();
    if k != 0.0 && (s - Complex64::new(1.0, k * step)).norm() < POLE_GUARD {
        return Err(AuditError::DegenerateDenominator(format!("{s}")));
    }

    let t = s.im.abs();
    let needed = (prec.digits() as f64 * 10f64.ln()
        + PI * t / 2.0
        + (3.0 * (1.0 + 2.0 * t)).ln()
        + 10.0)
        / (3.0 + 8f64.sqrt()).ln();
    let n = needed.ceil() as usize;
    if n > prec.max_terms() {
        return Err(AuditError::Truncation(prec.max_terms()));
    }

    // d_k = n Σ_{i≤k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0;
    let mut acc = 0.0;
    for i in 0..=n {
        acc += term;
        d.push(acc);
        let fi = i as f64;
        let nf = n as f64;
        term *= 4.0 * (nf + fi) * (nf - fi) / ((2.0 * fi + 1.0) * (2.0 * fi + 2.0));
    }
    let dn = d[n];
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, dk) in d.iter().take(n).enumerate() {
        let weight = (dn - dk) / dn;
        let power = (-s * ((k + 1) as f64).ln()).exp();
        if k % 2 == 0 {
            sum += power * weight;
        } else {
            sum -= power * weight;
        }
    }
    let denom = Complex64::new(1.0, 0.0) - (Complex64::new(1.0, 0.0) - s).scale(LN_2).exp();
    Ok(sum / denom)
}

/// Canonical Gaussian e^{-π x²}.
pub fn gauss_g(x: f64) -> f64 {
    (-PI * x * x).exp()
}

/// Jacobi theta Σ_{n≥1} e^{-π n² x}.
pub fn theta(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(AuditError::Domain(format!("theta requires x > 0, got {x}")));
    }
    let mut sum = 0.0f64;
    let mut n = 1u64;
    loop {
        let nf = n as f64;
        let term = (-PI * nf * nf * x).exp();
        if n > 1 && term < (1e-16 * sum).max(1e-300) {
            break;
        }
        sum += term;
        if term < 1e-300 {
            break;
        }
        n += 1;
    }
    Ok(sum)
}

/// Completed zeta π^{-s/2} Γ(s/2) ζ(s).
pub fn zeta_star(s: Complex64, prec: EvalPrecision) -> Result<Complex64> {
    let z = zeta(s, prec)?;
    let g = gamma(s * 0.5)?;
    let pi_pow = (-s * 0.5 * PI.ln()).exp();
    Ok(pi_pow * g * z)
}

/// im(s)·(2 re(s) − 1); vanishes exactly on the critical line.
pub fn trivial_zeta(s: Complex64) -> f64 {
    s.im * (2.0 * s.re - 1.0)
}

/// S(a) = Σ_{m≥1} a^m / (m! (m-1)!).
pub fn series_s(a: f64) -> Result<f64> {
    if !(a >= 0.0) || !a.is_finite() {
        return Err(AuditError::Precondition(format!("series S needs a >= 0, got {a}")));
    }
    if a == 0.0 {
        return Ok(0.0);
    }
    let mut term = a;
    let mut sum = 0.0;
    let mut m = 1.0;
    loop {
        sum += term;
        if !sum.is_finite() {
            return Err(AuditError::Overflow);
        }
        let ratio = a / ((m + 1.0) * m);
        term *= ratio;
        if ratio < 1.0 && term < 1e-17 * sum {
            break;
        }
        m += 1.0;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma_known_values() {
        assert_relative_eq!(gamma(c(1.0, 0.0)).unwrap().re, 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(c(0.5, 0.0)).unwrap().re, PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(c(4.0, 0.0)).unwrap().re, 6.0, max_relative = 1e-14);
        // Γ(-1/2) = -2√π
        assert_relative_eq!(gamma(c(-0.5, 0.0)).unwrap().re, -2.0 * PI.sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn gamma_poles() {
        for p in [0.0, -1.0, -2.0, -7.0] {
            assert!(matches!(gamma(c(p, 0.0)), Err(AuditError::Pole(_))));
        }
    }

    #[test]
    fn gamma_large_argument() {
        // Γ(30) = 29!
        let f29: f64 = (1..=29).map(|k| k as f64).product();
        assert_relative_eq!(gamma(c(30.0, 0.0)).unwrap().re, f29, max_relative = 1e-12);
    }

    #[test]
    fn zeta_errors() {
        let p = EvalPrecision::default();
        assert!(matches!(zeta(c(1.0, 0.0), p), Err(AuditError::Pole(_))));
        assert!(matches!(zeta(c(-0.5, 3.0), p), Err(AuditError::Domain(_))));
        assert!(matches!(zeta(c(0.5, 60.0), p), Err(AuditError::Domain(_))));
        let zero = c(1.0, 2.0 * PI / LN_2);
        assert!(matches!(zeta(zero, p), Err(AuditError::DegenerateDenominator(_))));
        let tight = EvalPrecision::new(15, 10).unwrap();
        assert!(matches!(zeta(c(0.5, 10.0), tight), Err(AuditError::Truncation(_))));
    }

    #[test]
    fn zeta_conjugate_symmetry() {
        let p = EvalPrecision::default();
        let s = c(0.3, 2.0);
        let a = zeta(s, p).unwrap();
        let b = zeta(s.conj(), p).unwrap();
        assert_relative_eq!(a.re, b.re, max_relative = 1e-14);
        assert_relative_eq!(a.im, -b.im, max_relative = 1e-14);
    }

    #[test]
    fn zeta_half_is_known() {
        // ζ(1/2) = -1.4603545088095868
        let z = zeta(c(0.5, 0.0), EvalPrecision::default()).unwrap();
        assert_relative_eq!(z.re, -1.460_354_508_809_586_8, max_relative = 1e-14);
    }

    #[test]
    fn precision_bounds() {
        assert!(EvalPrecision::new(14, 10).is_err());
        assert!(EvalPrecision::new(16, 10).is_err());
        assert!(EvalPrecision::new(15, 0).is_err());
    }

    #[test]
    fn theta_values() {
        assert!(matches!(theta(0.0), Err(AuditError::Domain(_))));
        assert!(matches!(theta(-1.0), Err(AuditError::Domain(_))));
        assert!(theta(100.0).unwrap() < 1e-130);
        let direct: f64 = (1..=10).map(|n| gauss_g(n as f64)).sum();
        assert!((theta(1.0).unwrap() - direct).abs() <= 1e-15);
        // e^{-π} + e^{-4π} + ...
        assert_relative_eq!(theta(1.0).unwrap(), 0.043_217_405_606_654_007, max_relative = 1e-14);
    }

    #[test]
    fn gauss_g_values() {
        assert_eq!(gauss_g(0.0), 1.0);
        assert_relative_eq!(gauss_g(1.0), (-PI).exp(), max_relative = 1e-15);
    }

    #[test]
    fn trivial_zeta_values() {
        assert_eq!(trivial_zeta(c(0.5, 7.0)), 0.0);
        assert_relative_eq!(trivial_zeta(c(0.75, -2.0)), -1.0);
        // symmetric under s -> 1-s, antisymmetric under s -> 1-conj(s)
        let s = c(0.3, 1.7);
        assert_relative_eq!(trivial_zeta(c(1.0, 0.0) - s), trivial_zeta(s), max_relative = 1e-14);
        assert_relative_eq!(trivial_zeta(c(1.0, 0.0) - s.conj()), -trivial_zeta(s), max_relative = 1e-14);
    }

    #[test]
    fn series_s_edges() {
        assert_eq!(series_s(0.0).unwrap(), 0.0);
        assert!(series_s(-1.0).is_err());
        assert!(matches!(series_s(1e6), Err(AuditError::Overflow)));
    }
}
