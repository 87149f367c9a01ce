//! Exact verification of mosaic supercongruences for Ramanujan-type series.
//!
//! A series `scale * sum A_n poly(n) z^n = 1/pi` (or `1/pi^2`) whose data
//! live in a multi-quadratic ring is truncated at `n = p - 1`. The partial
//! sum is split over the square-root basis as `sum_i alpha_i(p) sqrt(d_i)`,
//! and each rational `alpha_i(p)` is checked against `a_i (m_i/p) p`
//! modulo `p^3` (or `a_i (m_i/p) p^2` modulo `p^5`).
//!
//! ```
//! use mosaic_core::catalog::builtin;
//! use mosaic_core::congruence::{verify_series, VerifyOptions, VerifyPath};
//!
//! let spec = builtin("EX1").unwrap();
//! let report = verify_series(&spec, &VerifyOptions::new(2, 30, VerifyPath::Both)).unwrap();
//! assert!(report.all_passed());
//! ```

pub mod analytic;
pub mod catalog;
pub mod congruence;
pub mod modular;
pub mod numeric;
pub mod quad_ring;
pub mod rational;
pub mod sequences;

pub use catalog::SeriesSpec;
pub use quad_ring::{MultiQuadElement, Radicand};
pub use rational::{padic_valuation, Rational, Valuation};
