//! Fixed-precision decimal-targeted reals over `astro-float`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, RoundingMode, Sign};

use crate::error::{AuditError, Result};

pub const MIN_DIGITS: u32 = 15;
pub const MAX_DIGITS: u32 = 200;

const RM: RoundingMode = RoundingMode::ToEven;

/// Real number carried with at least `digits` significant decimal digits.
#[derive(Clone, Debug)]
pub struct BigReal {
    value: BigFloat,
    digits: u32,
}

/// Mantissa bits for `digits` decimal digits plus a guard word.
fn bits(digits: u32) -> usize {
    let raw = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 64;
    raw.div_ceil(64) * 64
}

pub fn check_digits(digits: u32) -> Result<()> {
    if (MIN_DIGITS..=MAX_DIGITS).contains(&digits) {
        Ok(())
    } else {
        Err(AuditError::Precondition(format!("digits must lie in [{MIN_DIGITS}, {MAX_DIGITS}], got {digits}")))
    }
}

impl BigReal {
    pub fn from_f64(x: f64, digits: u32) -> Result<Self> {
        check_digits(digits)?;
        if !x.is_finite() {
            return Err(AuditError::Domain(format!("cannot represent {x}")));
        }
        Ok(BigReal { value: BigFloat::from_f64(x, bits(digits)), digits })
    }

    pub fn zero(digits: u32) -> Result<Self> {
        Self::from_f64(0.0, digits)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    fn wrap(&self, value: BigFloat, other: &BigReal) -> BigReal {
        BigReal { value, digits: self.digits.max(other.digits) }
    }

    fn prec(&self, other: &BigReal) -> usize {
        bits(self.digits.max(other.digits))
    }

    pub fn abs(&self) -> BigReal {
        BigReal { value: self.value.abs(), digits: self.digits }
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Nearest double (round-to-nearest on the leading 64 mantissa bits).
    pub fn to_f64(&self) -> f64 {
        let Some((words, _, sign, exp, _)) = self.value.as_raw_parts() else {
            return f64::NAN;
        };
        let Some(&top) = words.last() else {
            return 0.0;
        };
        if top == 0 {
            return 0.0;
        }
        // value = top / 2^64 · 2^exp
        let mut x = top as f64;
        let mut shift = exp as i64 - 64;
        while shift > 0 {
            let k = shift.min(1000);
            x *= 2f64.powi(k as i32);
            shift -= k;
        }
        while shift < 0 {
            let k = (-shift).min(1000);
            x /= 2f64.powi(k as i32);
            shift += k;
        }
        if sign == Sign::Neg {
            -x
        } else {
            x
        }
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.value.cmp(&other.value) == Some(0)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &BigReal) -> BigReal {
                self.wrap(self.value.$method(&rhs.value, self.prec(rhs), RM), rhs)
            }
        }

        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal { value: self.value.neg(), digits: self.digits }
    }
}
