//! Function spaces of generalized smoothness on the discrete torus.
//!
//! Classical smoothness scales grade functions by a power weight `t^s` on
//! frequency. Here the weight is any O-regularly varying function, which
//! admits logarithmic corrections, tabulated weights, and everything in
//! between. The crate provides, at desk scale:
//!
//! * a calculus of regularity functions and their growth indices ([`ro`]),
//! * dyadic frequency decompositions on periodic grids,
//! * the graded norms built from them, with sampled equivalence checks,
//! * the real interpolation method with explicit parameter functions,
//! * constant-coefficient elliptic problems solved through the graded
//!   machinery.
//!
//! Everything is deterministic: randomized checks take explicit seeds.

pub mod elliptic;
pub mod error;
pub mod grid;
pub mod interp;
pub mod norms;
pub mod ro;
pub mod window;

pub use elliptic::MultiplierSymbol;
pub use error::{Error, Result};
pub use grid::{GridFunction, TorusGrid};
pub use interp::WeightedCouple;
pub use norms::{NormFamily, SpaceSpec};
pub use ro::{BFunction, IndexPair, RoFunction};
pub use window::{SpecialSequence, WindowProfile};
