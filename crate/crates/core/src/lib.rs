//! Construction and certification of Ulrich bundles on Veronese surfaces by
//! exact linear algebra over prime fields.
//!
//! A candidate bundle is the cokernel of a `b x a` matrix of linear forms
//! ([`UlrichPresentation`]). Its cohomology in every twist is a rank
//! computation ([`cohomology`]), which drives the vanishing certificate
//! ([`ulrich::certify`]) and the randomized search ([`search`]).

pub mod cohomology;
pub mod config;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod presentation;
pub mod search;
pub mod seed;
pub mod ulrich;

pub use cohomology::{Cohomology, CohomologyProfile, Hodge, OmegaTable};
pub use config::{Config, OutputFormat};
pub use field::{FieldElement, PrimeField, DEFAULT_PRIME};
pub use linalg::{DenseMatrix, MatrixFp, SparseMatrix};
pub use poly::LinearForm;
pub use presentation::{shape, Shape, UlrichPresentation};
pub use search::{search, sweep, SearchReport, SweepReport};
pub use ulrich::{certify, CertifyLevel, CertifyOptions, UlrichCertificate, UlrichInvariants};
