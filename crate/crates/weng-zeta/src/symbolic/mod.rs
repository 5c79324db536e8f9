//! Exact symbolic algebra for zeta expressions.

pub mod expr;
pub mod factor;
pub mod monomial;
pub mod weng;

pub use expr::{TermBuilder, TermKey, ZetaExpression};
pub use factor::{FactorMultiset, FactoredPoly, LinearFactor};
pub use monomial::{ConstMonomial, ConstantCombo, ZhatArg, ZhatMonomial};
pub use weng::{
    build_zeta_system, check_functional_equation, lemma_10_3_constant,
    lemma_10_3_via_parabolic_residue, m_zero_table, omega_p, single_shift_coefficients, zhat_p,
    FeReport, WTerm, ZetaSystem,
};
