//! Binary sequences from the quadratic character of F_{p^r}, and their
//! linear complexity and k-error linear complexity over GF(2).
//!
//! The crate is organized around five modules:
//!
//! - [`number_theory`] — primality, multiplicative orders, Wieferich check,
//!   Legendre symbol.
//! - [`gf`] — fully materialized fields F_{p^r}: modulus selection, element
//!   ordering, exp/log tables, the quadratic character.
//! - [`poly2`] — bit-packed GF(2)\[X\] arithmetic: the substrate for the
//!   gcd-based linear complexity formula and factor-structure checks.
//! - [`sequences`] — the character, indexed, modified, and Sidelnikov-style
//!   generators plus structural statistics (weights, least period).
//! - [`complexity`] — LC via gcd with a Berlekamp-Massey cross-check, exact
//!   k-error search engines, and the piecewise profile predictions they are
//!   verified against.

pub mod complexity;
pub mod error;
pub mod gf;
pub mod number_theory;
pub mod poly2;
pub mod sequences;

pub use complexity::{
    k_error_lc_enum, k_error_profile_enum, k_error_profile_full, linear_complexity_bm,
    linear_complexity_gcd, lower_bound_klc, lower_bound_lc, predict_profile, thm1_prediction,
    thm2_prediction, ComplexityProfile, Hypotheses, KErrorResult, LinearComplexity, Method,
    PieceKind, PredictionPiece, SearchOptions, TheoremPrediction, TheoremSource,
    DEFAULT_PATTERN_BUDGET, FULL_ENUM_PERIOD_CAP,
};
pub use error::{Error, Result};
pub use gf::{
    build_field, build_with_gamma_sign, find_irreducible, ChiSign, FieldConfig, FieldDescriptor,
    FieldElement,
};
pub use number_theory::OddPrime;
pub use poly2::{distinct_degree_profile, phi_r, x_pow_t_minus_1, BinaryPolynomial};
pub use sequences::{
    gen_character_sequence, gen_indexed_sequence, gen_modified_sequence, gen_sidelnikov,
    generating_polynomial, least_period, weight_vectors, BinarySequence, DarySequence, GammaChoice,
    GeneratedSequence, SequenceJson, SequenceKind, SequenceSpec, SymbolsRepr,
};
