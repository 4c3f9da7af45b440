//! Claim records shared by every audit.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClaimStatus {
    Confirmed,
    Violated,
    Inconclusive,
}

impl fmt::Display for ClaimStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClaimStatus::Confirmed => "CONFIRMED",
            ClaimStatus::Violated => "VIOLATED",
            ClaimStatus::Inconclusive => "INCONCLUSIVE",
        };
        f.write_str(s)
    }
}

/// A side of an audited identity: real or complex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Real(f64),
    Complex { re: f64, im: f64 },
}

impl Value {
    pub fn abs(&self) -> f64 {
        match *self {
            Value::Real(x) => x.abs(),
            Value::Complex { re, im } => re.hypot(im),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match *self {
            Value::Real(x) => Complex64::new(x, 0.0),
            Value::Complex { re, im } => Complex64::new(re, im),
        }
    }

    pub fn is_finite(&self) -> bool {
        match *self {
            Value::Real(x) => x.is_finite(),
            Value::Complex { re, im } => re.is_finite() && im.is_finite(),
        }
    }

    /// Real part (the value itself for real sides).
    pub fn re(&self) -> f64 {
        self.to_complex().re
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Real(x)
    }
}

impl From<Complex64> for Value {
    fn from(z: Complex64) -> Self {
        Value::Complex { re: z.re, im: z.im }
    }
}

/// Structured inputs and derived diagnostics; `BTreeMap` keeps key order stable.
pub type Fields = BTreeMap<String, serde_json::Value>;

/// Audit record comparing two evaluations of one claimed identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClaimReport {
    pub claim_id: String,
    pub inputs: Fields,
    pub lhs: Value,
    pub rhs: Value,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub error_estimate: f64,
    pub status: ClaimStatus,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: Fields,
}

impl ClaimReport {
    /// Builds a report from both sides, classifying with [`classify`].
    ///
    /// `tol` is the claim-specific acceptance band; the numerical error
    /// estimate widens it when larger.
    pub fn compare(
        claim_id: &str,
        inputs: Fields,
        lhs: Value,
        rhs: Value,
        error_estimate: f64,
        tol: f64,
    ) -> Self {
        let abs_residual = (lhs.to_complex() - rhs.to_complex()).norm();
        let scale = lhs.abs().max(rhs.abs());
        let rel_residual = if scale > 0.0 { abs_residual / scale } else { 0.0 };
        let error_estimate = error_estimate.abs();
        ClaimReport {
            claim_id: claim_id.to_string(),
            inputs,
            lhs,
            rhs,
            abs_residual,
            rel_residual,
            error_estimate,
            status: classify(abs_residual, error_estimate, tol),
            details: Fields::new(),
        }
    }

    /// Report for the claim `value > 0`.
    ///
    /// The residual is the shortfall `max(0, −value)`; CONFIRMED needs the
    /// value to clear its error estimate, VIOLATED a shortfall beyond ten
    /// times it.
    pub fn positive(claim_id: &str, inputs: Fields, value: f64, error_estimate: f64) -> Self {
        let error_estimate = error_estimate.abs();
        let shortfall = (-value).max(0.0);
        let status = if !value.is_finite() {
            ClaimStatus::Inconclusive
        } else if value > error_estimate {
            ClaimStatus::Confirmed
        } else if shortfall > 10.0 * error_estimate.max(f64::MIN_POSITIVE) {
            ClaimStatus::Violated
        } else {
            ClaimStatus::Inconclusive
        };
        ClaimReport {
            claim_id: claim_id.to_string(),
            inputs,
            lhs: Value::Real(value),
            rhs: Value::Real(0.0),
            abs_residual: shortfall,
            rel_residual: if value != 0.0 { shortfall / value.abs() } else { 0.0 },
            error_estimate,
            status,
            details: Fields::new(),
        }
        .with_detail("relation", "lhs > rhs")
    }

    /// Report for the claim `value ≥ 0` up to a rounding band.
    pub fn nonnegative(claim_id: &str, inputs: Fields, value: f64, band: f64) -> Self {
        let band = band.abs();
        let shortfall = (-value).max(0.0);
        let status = if !value.is_finite() {
            ClaimStatus::Inconclusive
        } else if shortfall <= band {
            ClaimStatus::Confirmed
        } else if shortfall > 10.0 * band {
            ClaimStatus::Violated
        } else {
            ClaimStatus::Inconclusive
        };
        ClaimReport {
            claim_id: claim_id.to_string(),
            inputs,
            lhs: Value::Real(value),
            rhs: Value::Real(0.0),
            abs_residual: shortfall,
            rel_residual: if value != 0.0 { shortfall / value.abs() } else { 0.0 },
            error_estimate: band,
            status,
            details: Fields::new(),
        }
        .with_detail("relation", "lhs >= rhs")
    }

    pub fn with_detail(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    pub fn with_status(mut self, status: ClaimStatus) -> Self {
        self.status = status;
        self
    }

    /// Residual and error estimate are both finite numbers.
    pub fn is_finite(&self) -> bool {
        self.abs_residual.is_finite() && self.error_estimate.is_finite()
    }
}

/// CONFIRMED inside the band `max(error, tol)`, VIOLATED beyond ten times
/// that band, INCONCLUSIVE in between.
pub fn classify(abs_residual: f64, error_estimate: f64, tol: f64) -> ClaimStatus {
    let band = error_estimate.abs().max(tol.abs());
    if !abs_residual.is_finite() {
        ClaimStatus::Inconclusive
    } else if abs_residual <= band {
        ClaimStatus::Confirmed
    } else if abs_residual > 10.0 * band {
        ClaimStatus::Violated
    } else {
        ClaimStatus::Inconclusive
    }
}

/// Convenience for building [`Fields`] maps.
#[macro_export]
macro_rules! fields {
    ($($key:expr => $val:expr),* $(,)?) => {{
        #[allow(unused_mut)]
        let mut m = $crate::report::Fields::new();
        $( m.insert($key.to_string(), ::serde_json::json!($val)); )*
        m
    }};
}

pub fn complex_json(z: Complex64) -> serde_json::Value {
    serde_json::json!({ "re": z.re, "im": z.im })
}
