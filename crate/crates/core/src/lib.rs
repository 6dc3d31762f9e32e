//! Poly-Bernoulli numbers `B(n,k)` (the number of `n x k` lonesum
//! matrices) and their relatives, computed exactly, checked against
//! brute-force enumeration, and compared with their asymptotic estimates.
//!
//! * [`exact`]: Stirling tables and the exact sequences.
//! * [`oracle`]: exhaustive enumerators for the combinatorial interpretations.
//! * [`saddle`]: saddle points and closed-form asymptotics, all in log space.
//! * [`quad`]: trapezoid-rule evaluations of the integral representations.
//! * [`lclt`]: Gaussian limit laws and sup-norm discrepancies.
//! * [`acceptance`]: the end-to-end check list behind `polybern verify`.

// Positivity checks are written `!(x > 0.0)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod count;
pub mod error;
pub mod exact;
pub mod lclt;
mod numeric;
pub mod oracle;
pub mod quad;
pub mod saddle;

pub use count::{log_of_count, Count, LogEstimate};
pub use error::{Error, Result};
pub use exact::StirlingTable;
pub use numeric::ln_factorial;
pub use saddle::{Order, SaddlePoint};
