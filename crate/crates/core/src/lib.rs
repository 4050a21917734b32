//! Divisibility, correlation and primality statistics of the Bernoulli
//! (binomial), Rademacher and Cramer integer random walks.
//!
//! Every quantity is available through an exact route (probability mass
//! tables, with big-integer counts for the dyadic walks), a spectral route
//! (finite character sums) and, where one exists, a Theta-function
//! asymptotic. The `audit_*` functions compare these routes on grids.

pub mod arith;
pub mod correlations;
pub mod densities;
pub mod divprob;
mod error;
pub mod numeric;
pub mod primestats;
pub mod report;
pub mod walkdist;

pub use arith::{ArithCache, Constants};
pub use divprob::{DivisibilityReport, ThetaParams, ThetaVariant};
pub use error::{Error, Result};
pub use report::{AuditRow, Goldens};
pub use walkdist::{ExactPMF, ModelKind, ModelSpec, MomentSummary};
