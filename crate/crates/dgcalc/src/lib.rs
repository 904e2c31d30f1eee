//! Exact-arithmetic toolkit for finite DG categories presented as DG quivers.
//!
//! The crate computes hom-complex cohomology, twisted-complex constructions
//! (shift / cone / convolution), exceptional-collection mutations, A-infinity
//! minimal models via homotopy transfer (including triple Massey products),
//! the bar/cobar universal DG category, and the universal-extension tilting
//! pipeline for collections with Ext groups concentrated in degrees 0 and 1.
//!
//! All linear algebra runs over exact rationals; the generic scalar layer in
//! [`scalar`] and [`exactla`] also admits floating-point scalars, but every
//! higher layer is pinned to [`Rat`] so that results are reproducible
//! byte-for-byte.

pub mod scalar;
pub mod exactla;
pub mod cochain;
pub mod dgcore;
pub mod pretr;
pub mod mutation;
pub mod ainfty;
pub mod transfer;
pub mod barcobar;
pub mod uext;
pub mod surfaces;
pub mod dgq;
pub mod presets;

/// Exact rational scalar used by all DG-level computations.
pub type Rat = num::BigRational;
/// Dense rational matrix.
pub type QMatrix = exactla::Matrix<Rat>;
/// Rational cochain complex.
pub type QComplex = cochain::CochainComplex<Rat>;

/// Shorthand for building a `Rat` from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Shorthand for building a `Rat` fraction.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}
