//! Iwahori-Whittaker functions, Demazure atoms and Casselman transition
//! coefficients over finite Weyl groups, in exact arithmetic.

pub mod error;
pub mod group;
pub mod group_algebra;
pub mod hecke;
pub mod matrix;
pub mod root_system;
pub mod shellability;
pub mod weyl;
pub mod whittaker;

pub use error::{Error, Result};
pub use group::{ElemId, WeylGroup};
pub use group_algebra::{GroupAlgebraElement, VPolynomial};
pub use hecke::{Fp, HeckeElement, SpectralPoint};
pub use root_system::{Root, RootSystem, TypeLetter, WeightVector};
pub use weyl::{ReducedWord, WeylElement};
pub use whittaker::CoefficientTable;
