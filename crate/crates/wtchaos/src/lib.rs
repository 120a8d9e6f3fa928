//! Desk-scale numerics for distributional chaos of weighted translation
//! operators on discrete groups.
//!
//! The toolkit computes orbit norms of `T_{a,w} = M_w T_a` on `l^p` of `Z`
//! or `Z x Z_m` through the weight cocycle `phi_n`, estimates upper/lower
//! densities and distributional functions of orbit-distance series, checks
//! both halves of the distributional-chaos criterion for weighted
//! translations, synthesizes candidate irregular vectors from interval
//! searches, and probes the structural properties (modulus invariance,
//! translate comparability, cones, equivalence classes, splittings, and
//! the two-component mirror construction) at finite horizons.
//!
//! Every limit statement of the underlying theory is replaced here by an
//! explicitly finite-horizon surrogate, and reports say so: the verdicts
//! are evidence, never proofs.
//!
//! A narrative guide with runnable examples lives in the `book/` directory
//! of the repository; the same snippets are compiled as doc-tests.

pub mod density;
pub mod dccw;
pub mod div;
pub mod error;
pub mod group;
pub mod logval;
pub mod operator;
pub mod vector;
pub mod weight;

pub mod config;
pub mod report;
pub mod runner;

pub use error::{Error, Result};
pub use group::{measure, GroupElement, GroupSpec};
pub use logval::{log_add_exp, log_sum_exp, CompensatedSum, LogValue};
pub use operator::{multiply, WeightedTranslation, DEFAULT_RATIONAL_BIT_CAP};
pub use vector::{Coefficient, RationalVector, SparseVector, Vector};
pub use weight::{parse_rational, rational_ln, rational_to_f64, WeightRule, WeightSpec, Window};
