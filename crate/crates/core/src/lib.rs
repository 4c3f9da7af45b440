//! Numerical identity audit for the Laplace, Fresnel, theta and zeta-trace
//! formulas of an elementary approach to the Riemann hypothesis.
//!
//! Classical identities are evaluated two ways and asserted; the novel claims
//! are evaluated along independent routes and recorded as
//! [`report::ClaimReport`]s without ever failing a run.

pub mod error;
pub mod fresnel;
pub mod laplace_reps;
pub mod quad;
pub mod report;
pub mod rhfe;
pub mod specfun;
pub mod traces;

pub use error::{AuditError, Result};
pub use num_complex::Complex64 as Complex;
