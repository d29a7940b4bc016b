//! Exact homology and structure of planar linkages with one telescopic leg.
//!
//! Lengths are exact rationals. [`betti::betti_telescopic`] gives the ranks
//! of `H_k(M_A)` from counts of long and short subsets,
//! [`structure::structure_report`] the connectivity and product
//! decompositions, and [`oracle`] an independent grid check for `n <= 5`.

pub mod analysis;
pub mod betti;
pub mod combinat;
pub mod error;
pub mod metric;
pub mod oracle;
pub mod scalar;
pub mod structure;
pub mod subset;

pub use betti::BettiProfile;
pub use error::{Endpoint, Error, Result};
pub use metric::{LengthVector, TelescopicData};
pub use scalar::Scalar;
pub use structure::StructureReport;
pub use subset::SubsetMask;
