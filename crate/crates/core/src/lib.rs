//! Comparing and discriminating quantum states.
//!
//! Given an ensemble of states `{η_k, ρ_k}` and two independent draws, a
//! *comparison* measurement on `ρ_i ⊗ ρ_j` answers whether `i = j`. This crate
//! computes the optimal comparison measurement, the strategy that discriminates
//! each system separately, and the trivial strategy that never measures, and it
//! solves the error-margin version for two pure states.
//!
//! * [`linalg`]: complex matrices, Hermitian operators, eigendecomposition.
//! * [`states`]: pure and mixed states, Bloch vectors, phase states, ensembles.
//! * [`discriminate`]: minimum-error and error-margin discrimination.
//! * [`compare`]: the comparison operator `Λ` and the three strategies.
//! * [`margin`]: comparison with an error margin and the symmetry decomposition.
//! * [`sufficiency`]: when answering "different" without measuring is optimal.
//! * [`oracle`]: numerical optimizers and a Monte Carlo simulator used as
//!   independent checks.
//! * [`cli`]: the `qcompare` command-line front end.
//!
//! ```
//! use qcompare::{compare::strategy_table, margin::optimal_margin_comparison};
//!
//! let row = strategy_table(3).unwrap();
//! assert_eq!(row.ordering, "no = disc < opt");
//! let r = optimal_margin_comparison(0.8, 0.0).unwrap();
//! assert!((r.p_success - 0.2).abs() < 1e-12);
//! ```

pub mod cli;
pub mod compare;
pub mod discriminate;
pub mod error;
pub mod linalg;
pub mod margin;
pub mod numfmt;
pub mod oracle;
pub mod states;
pub mod sufficiency;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianOperator};
pub use states::{BlochVector, Ensemble, MixedState, PureState};
