//! sl_q(2) representations, spectral-parameter twisted tensor products and
//! universal R-operators, for generic `q` and at odd roots of unity, with
//! numerical verification of the identities they satisfy.

pub mod cyclic;
mod dd;
pub mod document;
pub mod error;
pub mod linalg;
pub mod qcore;
pub mod rep;
pub mod rop;
pub mod tensorrep;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{CMat, CVec};
pub use qcore::{qnum, qpow, DeformationParameter, QMode, Sampler, ToleranceConfig};
pub use rep::{build_spin_rep, Basis, OperatorTriple, RepSpec, SpinLabel};
pub use rop::{assemble_r, closed_form_r, eigenvalue_sequence, RMatrix, RMode};
pub use tensorrep::{CoproductKind, EigenSector, TwistedCoproduct};
pub use verify::{ResidualReport, Suite};
