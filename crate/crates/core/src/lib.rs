//! Exact symbolic computation for two-dimensional scattering diagrams,
//! slab normalization and toric degenerations of tropical surfaces.
//!
//! All algebra is generic over a [`Scalar`] field; the aliases at the crate
//! root fix it to exact rationals.

pub mod catalog;
pub mod degen;
pub mod diagram;
pub mod element;
pub mod error;
pub mod expr;
pub mod family;
pub mod grading;
pub mod io;
pub mod laurent;
pub mod lattice;
pub mod normalize;
pub mod scalar;
pub mod scatter;
pub mod torus;
pub mod tropical;

pub use element::{ScatterExponent, TruncatedElement};
pub use error::{DiagramError, FormatError, GeometryError, ParseError, RingError, ScatterError};
pub use grading::{GradingCone, LatticeMonomial, PLGrading};
pub use laurent::LaurentPoly;
pub use scalar::Scalar;
pub use torus::{RingContext, TorusCoefficient};

pub type Rational = num_rational::BigRational;
pub type Element = TruncatedElement<Rational>;
pub type Coefficient = TorusCoefficient<Rational>;
pub type Poly = LaurentPoly<Rational>;
pub type Context = RingContext<Rational>;
