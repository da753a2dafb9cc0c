//! Numerics for qudit entanglement near the maximally mixed state.
//!
//! * [`su_basis`]: generalized Gell-Mann generators, structure constants and
//!   Bloch vectors.
//! * [`states`]: maximally entangled, cat and ε-mixed states, the `z`-vector
//!   product ensemble, and local qubit projections.
//! * [`superop`]: superoperator calculus and the Haar-averaged projector
//!   superoperator `G` with its dual operators.
//! * [`quasi`]: quasi-probability distributions over product pure states.
//! * [`bounds`]: separability boundaries, verdicts and certificates.
//! * [`haar`]: Haar sampling and deterministic parallel Monte Carlo.

pub mod bounds;
pub mod error;
pub mod haar;
pub mod linalg;
pub mod operator;
pub mod quasi;
pub mod states;
pub mod su_basis;
pub mod superop;

pub use bounds::{
    classify_epsilon_cat, classify_epsilon_mixture, necessity_check, neighborhood_bounds,
    ppt_test, two_qudit_boundary, Certificate, PptReport, SeparabilityVerdict, Verdict,
};
pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector};
pub use operator::{DenseOperator, PureState};
pub use states::{ProductEnsemble, ProductTerm, TwoQuditCoeffs, ZVector};
pub use su_basis::{build_basis, BlochVector, GeneratorBasis, GeneratorLabel, StructureConstants};
pub use superop::{HaarMoments, Superoperator};
