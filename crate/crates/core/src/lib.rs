//! Exact computations with commutative differential graded algebras over ℚ.
//!
//! The crate is layered: [`exactla`] provides rational linear algebra,
//! [`gca`] free graded-commutative algebras, [`dga`] differentials, and the
//! remaining modules compute cohomology, Massey products, minimal models and
//! formality for the models built in [`constructions`].

pub mod cohomology;
pub mod constructions;
pub mod dga;
pub mod exactla;
pub mod gca;
pub mod massey;
pub mod sullivan;

pub use dga::{Cochain, CochainAlgebra, Dga, DgaError, Model, TabularBuilder, TabularDga};
pub use exactla::{q, qf, Rational, RationalMatrix, Subspace};
pub use gca::{Algebra, Element, GcaError, Monomial};
