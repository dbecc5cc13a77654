//! Finite poset models of stratified spaces: chain-complex valued diagrams,
//! homotopy Kan extensions, the two recollements attached to a closed set
//! of strata, and the stratum-wise splitting of Grothendieck classes.
//!
//! All linear algebra is exact, over the rationals or a prime field.

pub mod adjunction;
pub mod chain;
pub mod diagram;
pub mod error;
pub mod field;
pub mod ingest;
pub mod k0;
pub mod kan;
pub mod matrix;
pub mod poset;
pub mod random;
pub mod recollement;
pub mod rhom;

pub use adjunction::{check_adjunction, AdjointPair, AdjunctionReport};
pub use chain::{cone, fib, ChainComplex, ChainMap, ComplexJson};
pub use diagram::{DiagramJson, DiagramMap, StratDiagram, ValidationReport, Violation};
pub use error::{Error, Result};
pub use field::{Entry, FieldChoice, Fp, Scalar, Q, SUPPORTED_PRIMES};
pub use ingest::{ingest, stratum_fiber, IngestReport, SimplicialJson, StratSimplicialComplex};
pub use k0::{k0_class, split_decompose, verify_splitting, Decomposition, K0Vector, SplitOrder, SplittingReport};
pub use kan::{ho_lan, ho_ran, KanExtension, Totalization};
pub use matrix::Matrix;
pub use poset::{FinPoset, MonotoneMap, PosetJson, Subposet};
pub use random::{random_diagram, rng_from_seed, sample_seed, GenConfig};
pub use recollement::{RecollementCtx, RecollementReport};
pub use rhom::{rhom, HomComplex};
