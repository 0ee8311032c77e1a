//! Exact algebra for verifying finite-order automorphisms of elliptic K3
//! surfaces.
//!
//! The crate is layered bottom-up:
//!
//! * [`cyclotomic`]: the scalar fields `Q(ζₙ)`;
//! * [`polyring`]: polynomials, rational functions, places and the
//!   expression parser, generic over any [`Field`];
//! * [`surface`]: short Weierstrass models over the `t`-line and their
//!   Kodaira fibers;
//! * [`funfield`]: the function field of a model, maps between models,
//!   two-form factors and the group law;
//! * [`rigidity`]: weighted finite-order actions on graphs of rational
//!   curves and their fixed loci;
//! * [`lattice`]: Gram matrices, signatures and discriminant forms.

pub mod cyclotomic;
pub mod funfield;
pub mod lattice;
pub mod polyring;
pub mod rigidity;
pub mod scalar;
pub mod surface;

pub use cyclotomic::{CycloNum, CyclotomicField};
pub use polyring::{MultiPoly, RatFun, RationalFunction, UniPoly};
pub use scalar::{Field, Rational};

/// Polynomials in `t` over `Q(ζₙ)`.
pub type TPoly = UniPoly<CycloNum>;
/// Rational functions in `t` over `Q(ζₙ)`.
pub type TFun = RatFun<CycloNum>;
/// Rational functions in `x` and `t` over `Q(ζₙ)`.
pub type XtFun = RatFun<TFun>;
/// Polynomials in `x, y, t` over `Q(ζₙ)`.
pub type Poly3 = MultiPoly<CycloNum>;
