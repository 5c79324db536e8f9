//! Weng zeta functions `ẑ_p(s)` for irreducible root systems.
//!
//! The crate builds the zeta function attached to a pair `(Φ, p)` -- an
//! irreducible reduced root system and a choice of simple root `α_p` -- from
//! first principles: root system closure from the Cartan matrix, Weyl group
//! enumeration, the `λ_p`-grading of `Φ`, the exact symbolic sum over the
//! distinguished subset `𝔚_p` of the Weyl group, and high-precision complex
//! evaluation for locating zeros on the critical line `Re(s) = -c_p/2`.
//!
//! The pipeline is split into five modules:
//!
//! * [`rootsys`] -- roots, coroots, heights, fundamental-weight pairings;
//! * [`weyl`] -- Weyl group elements as signed permutations of the root
//!   table, parabolic data and the subset `𝔚_p`;
//! * [`grading`] -- counting tables `N_p`, `M_p`, the constants `c_p`, `k_p`,
//!   and symmetric chain decompositions of the graded pieces `Σ_p(k)`;
//! * [`symbolic`] -- exact factored-rational / formal-zeta algebra used to
//!   assemble `ω_p`, `ẑ_p`, `X_p`, `E_p`, `ξ_p` and to verify functional
//!   equations symbolically;
//! * [`numerics`] -- complex `ζ`, `Γ`, `ẑ`, `ξ` evaluators, critical-line
//!   zero scanning and argument-principle rectangle counts.

pub mod cli;
pub mod error;
pub mod grading;
pub mod numerics;
pub mod rootsys;
pub mod symbolic;
pub mod weyl;

pub use error::Error;
pub use grading::{ChainDecomposition, GradingTables};
pub use rootsys::{RootSystem, RootSystemSpec, Series};
pub use symbolic::{ZetaExpression, ZetaSystem};
pub use weyl::{ParabolicData, WeylGroup};
