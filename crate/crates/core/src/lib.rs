//! Streaming recognition of well-parenthesized words.
//!
//! Two randomized checkers decide membership in the two-type Dyck language
//! with one-sided error: members are always accepted, and a non-member is
//! accepted only if a random evaluation point happens to be a root of a
//! nonzero low-degree polynomial.
//!
//! * [`onepass`]: one forward pass, `O(√n log n)` bits.
//! * [`twopass`]: a forward pass then a reverse pass, `O(log² n)` bits.
//!
//! Words over more parenthesis types are handled through the letterwise
//! encoding in [`reduction`]. [`word`] holds the exact oracle used as ground
//! truth, and [`instances`] generates labelled workloads.

pub mod error;
pub mod fingerprint;
pub mod format;
pub mod instances;
pub mod metrics;
pub mod onepass;
pub mod reduction;
pub mod twopass;
pub mod word;

pub use error::{CheckError, FormatError, InstanceError, ParamError, ReductionError, WordError};
pub use fingerprint::{HashParams, Modulus, Residue};
pub use metrics::{Algo, Metrics};
pub use onepass::{check_one_pass, OnePassChecker};
pub use twopass::{check_two_pass, check_two_pass_slice, TwoPassChecker};
pub use word::{Letter, RejectReason, Verdict, Word};
