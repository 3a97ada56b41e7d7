//! Exact construction of a 4-dimensional Brownian quasi-helix.
//!
//! The curve is driven by a ±1 sequence `(a_n)` defined on base-4 digits:
//! `a_n = (-1)^{A_n}`, where `A_n` counts adjacent digit pairs of `n` that
//! belong to `{11, 13, 22, 23, 31, 32}`. Its partial sums
//! `S(n) = a_0 u_0 + a_1 u_1 + ... + a_{n-1} u_{n-1}` (with `u_{j+4} = u_j`)
//! extend to every dyadic parameter through `S(2t) = T S(t)`, which is
//! evaluated here without rounding.
//!
//! Modules:
//!
//! * [`sequence`]: four independent generators of `(a_n)` and their cross-check.
//! * [`algebra`]: Walsh matrices, `M`, `T`, dyadic rationals, the planes `P` and `Q`.
//! * [`curve`]: exact `S(n)` and `S(t)`, the Hölder-controlled real evaluator,
//!   arc isometries.
//! * [`extremal`]: exhaustive searches over pairs `(m, n)` for the
//!   quasi-helix constants.
//! * [`genfun`]: polynomial quadruples and the column generating functions.
//! * [`spherical`]: radial and central projections, double points, exports.
//! * [`cli`]: the `qh` command-line front end.
//!
//! ```
//! use quasihelix::{curve, sequence};
//!
//! let word: String = sequence::prefix(16).iter().map(|s| s.to_string()).collect();
//! assert_eq!(word, "+++++-+-++--+--+");
//! assert_eq!(curve::partial_sum(85).coords(), [8, 3, 3, 3]);
//! ```

pub mod algebra;
pub mod cli;
pub mod curve;
pub mod error;
pub mod extremal;
pub mod genfun;
pub mod report;
pub mod sequence;
pub mod spherical;

pub use error::{Error, Result};
