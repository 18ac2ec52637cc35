//! Resonance fluorescence of a four-level J = 1/2 → J = 1/2 atom driven by a
//! π-polarized and a σ⁻-polarized field, with vacuum-induced coherence
//! between the two π decay channels.

pub mod acceptance;
pub mod cli;
pub mod dressed;
pub mod error;
pub mod figures;
pub mod liouvillian;
pub mod model;
pub mod spectrum;
pub mod steadystate;

pub use error::{Error, Result};
pub use liouvillian::Liouvillian;
pub use model::{OperatorIndex, SystemParams, C64, DIM};
pub use steadystate::{analytic_steady, propagate, solve_steady, StateVector};
pub use spectrum::{Channel, DrivenAtom, FrequencyGrid, SpectrumTrace};
