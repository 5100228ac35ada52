//! Numerical toolkit for idempotents in Banach rings: certified inverses,
//! lifting of almost-idempotents, conjugation of nearby idempotents,
//! `K_0` presentations, colimit transfer and path trivialization.
//!
//! ```
//! use idemkit::calculus::{lift_idempotent, SeriesVariant};
//! use idemkit::instances::{random_almost_idempotent, MatrixAlgebra};
//!
//! let m = MatrixAlgebra::complex(4)?;
//! let a = random_almost_idempotent(&m, 0.15, 42)?;
//! let lift = lift_idempotent(&m, &a, SeriesVariant::Corrected, 1e-10)?;
//! assert!(lift.valid());
//! # Ok::<(), idemkit::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod axioms;
pub mod calculus;
pub mod certificate;
pub mod colimit;
pub mod deloop;
pub mod error;
pub mod experiment;
pub mod homotopy;
pub mod instances;
pub mod integers;
pub mod k0;
pub mod norm;
pub mod par;
pub mod ring;

pub use certificate::{CertEntry, Certificate};
pub use error::{Error, Result};
pub use norm::{Arithmetic, NormScalar, NormValue, DEFAULT_SLACK};
pub use ring::{BanachRing, NormedGroup, RealAlgebra, Sample};
