//! Entanglement of surface polaritons through a cross-Kerr interaction at a
//! dielectric / negative-index-metamaterial interface.
//!
//! - [`media`]: Drude response, TM surface-mode dispersion, loss, confinement
//!   and group velocity.
//! - [`kerr`]: Kerr coefficient of the doped layer and the mutual phase shift.
//! - [`qsim`]: truncated Fock-space evolution, entanglement measures and the
//!   homodyne-conditioned qubit protocol.
//! - [`numerics`]: root finding, differentiation and grids shared by the above.
//!
//! Sweeps and shot loops fan out over rayon when the `parallel` feature is on
//! (the default); see [`exec::Execution`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod error;
pub mod exec;
pub mod kerr;
pub mod media;
pub mod numerics;
pub mod qsim;

pub use error::{Error, Result};
pub use exec::Execution;
