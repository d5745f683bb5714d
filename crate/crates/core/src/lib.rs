//! Generalized concurrence for pure and mixed states of distinguishable
//! particles, bosons and fermions.
//!
//! States live in `⊗^L C^N`, row-major with site 0 slowest. The concurrence
//! of a pure state is `√(1 − ⟨ψψ|P|ψψ⟩)` for a two-copy projector `P` fixed by
//! the particle kind; it vanishes exactly on product states, condensates and
//! Slater determinants. Mixed states get convex-roof upper estimates and
//! two-copy witness lower bounds.
//!
//! ```
//! use genconc::{concurrence::concurrence_pure, state::named};
//!
//! let c = concurrence_pure(&named::bell()).unwrap();
//! assert!((c.value - 0.5).abs() < 1e-12);
//! ```

pub mod bounds;
pub mod cli;
pub mod concurrence;
pub mod error;
pub mod io;
pub mod projector;
pub mod report;
pub mod rng;
pub mod roof;
pub mod state;
pub mod tensor;

pub use error::{Error, Result};
