//! Exact characteristic-p commutative algebra for quotients S = R/I of
//! polynomial rings R = F_p[x_1..x_n]:
//!
//! - [`ring`]: prime-field scalars, monomial orders, sparse polynomials,
//!   free-module vectors and matrices, with a text grammar for fixtures.
//! - [`groebner`]: the Buchberger engine over R^alpha and the derived module
//!   operations (membership, intersection, colon, annihilators, dimension,
//!   radical membership).
//! - [`frobenius`]: bracket powers, the Frobenius root I_e and star-closures.
//! - [`homology`]: free resolutions, Ext^i(R/I, R) presented as cokernels,
//!   and the Frobenius matrices those cokernels carry.
//! - [`fsing`]: Jacobian test elements, global parameter test ideals, the
//!   colon-killer sandwich, and HSL chains, numbers and loci.
//! - [`oracle`]: independent naive verifiers backing the test suite.

pub mod error;
pub mod fsing;
pub mod frobenius;
pub mod groebner;
pub mod homology;
pub mod oracle;
pub mod ring;

pub use error::{Error, Result};
pub use fsing::{HslReport, PtiResult, SandwichResult, TestElementCertificate};
pub use groebner::{Caps, GroebnerBasis, SubmodulePresentation};
pub use homology::{ExtFrobeniusData, ResolutionData};
pub use ring::{
    FieldElement, ModuleOrder, ModuleVector, Monomial, MonomialOrder, OrderSpec, PolyMatrix,
    Polynomial, RingCtx,
};
