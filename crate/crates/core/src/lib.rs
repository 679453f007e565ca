//! Exact computation of noncommutative deformation hulls, matric Massey products,
//! algebras of observables and the versal morphism for finite families of modules.

pub mod algebra;
pub mod error;
pub mod extensions;
pub mod hochschild;
pub mod hull;
pub mod linalg;
pub mod massey;
pub mod observables;
pub mod report;
pub mod scenario;

pub use algebra::{Algebra, ModuleRep};
pub use error::{Error, ErrorKind, Result};
pub use hull::{run_hull, HullOptions, ProCouple};
pub use linalg::{FieldSpec, Matrix, Scalar, Subspace};
pub use report::{run, Command, Conventions, Report};
pub use scenario::Scenario;
