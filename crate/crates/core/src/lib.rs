//! Random search for polynomials realizing sign patterns together with
//! root-count pairs, orders of moduli, or critical-gap classes, with exact
//! certification of every hit.

pub mod catalog;
pub mod certify;
pub mod concat;
pub mod exact;
pub mod gaps;
pub mod moduli;
pub mod poly;
pub mod report;
pub mod rng;
pub mod rootfile;
pub mod sampler;
pub mod signs;
pub mod sweep;

pub use catalog::{catalog_lookup, CatalogEntry};
pub use certify::{Certificate, Claim, Mismatch};
pub use exact::{ExactPolynomial, ExactRootSpec, Rational};
pub use gaps::{GapClass, GapReport};
pub use moduli::{Forcing, Letter, ModuliCouple, ModuliOrder};
pub use poly::{ComplexPair, Polynomial, RealPolynomial, RootSpec};
pub use sampler::{SearchConfig, SearchOutcome, SearchStatus, Strategy, Witness};
pub use signs::{DescartesPair, Orbit, PairCouple, RootCountPair, Sign, SignPattern};
pub use sweep::{SweepReport, SweepRow};
