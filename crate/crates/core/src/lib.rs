//! Real parts of the zeros of exponential sums `f(s) = Σ a_j e^{λ_j s}`.
//!
//! For a sum on a vertical strip `α < Re s < β`, `R_f` is the closure of
//! the set of real parts of its zeros. With at least three exponents that
//! are linearly independent over the rationals, σ belongs to `R_f` exactly
//! when the numbers `|a_j| e^{λ_j σ}` can be the side lengths of a closed
//! polygon. This crate computes `R_f` from that criterion with certified
//! sign decisions and checks the answer against zeros located directly.
//!
//! | module | contents |
//! |---|---|
//! | [`model`] | validated sums, strips, tail bounds, tolerances |
//! | [`basis`] | exact rational coordinates, independence certificates, natural basis |
//! | [`rset`] | the set `R_f`, its boundary structure, non-emptiness tests |
//! | [`probe`] | evaluation, vertical min-modulus scans, the phase torus |
//! | [`zerofind`] | argument-principle zero location and cross-checks |
//! | [`cli`] | JSON spec files and the `apzeros` command |
//!
//! ## Examples
//!
//! ```text
//! cargo run -p apzeros --example real_parts       # R_f for 1 + 2^-s + 3^-s
//! cargo run -p apzeros --example natural_basis    # exact coordinates and certificates
//! cargo run -p apzeros --example phase_torus      # scans and the auxiliary function
//! cargo run -p apzeros --example locate_zeros     # zeros vs. the computed set
//! cargo run -p apzeros --example dominant_term    # certified empty set for a truncated series
//! cargo run -p apzeros --example polygon_profile  # infimum of |f| across σ as CSV
//! cargo run -p apzeros --example dependent_exponents  # 1 + … + 4^-s
//! ```
//!
//! ```
//! use apzeros::{compute_rset, ExponentialSum, Tolerances, VerticalStrip};
//!
//! let f = ExponentialSum::zeta_partial_sum(3).unwrap();
//! let r = compute_rset(&f, VerticalStrip::new(-3.0, 3.0).unwrap(), &Tolerances::default()).unwrap();
//! assert_eq!(r.intervals.len(), 1);
//! assert!((r.intervals[0].lo + 1.0).abs() < 1e-12);
//! ```

pub mod basis;
pub mod cli;
pub mod error;
pub mod model;
pub mod probe;
pub mod rset;
pub mod zerofind;

pub use basis::{check_rational_independence, is_integral, natural_basis, BasisRepresentation, RationalVector};
pub use error::{Error, Result};
pub use model::{
    ComplexValue, ExponentialSum, IndependenceStatus, RawSum, RawTerm, TailBound, Tolerances, VerticalStrip,
};
pub use probe::{eval_aux, eval_f, min_modulus_scan, torus_membership, PhaseAssignment};
pub use rset::{
    b_roots, b_value, check_edge_conditions, check_nonempty_entire, classify_boundary, compute_rset, inf_modulus,
    term_moduli, RSetResult,
};
pub use zerofind::{crosscheck_rset, locate_zeros, winding_number, Rectangle, ZeroRecord};
