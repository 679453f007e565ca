//! Algebras, modules and the quiver presentation backend.

mod analysis;
mod module;
mod presentation;
pub mod quiver;
mod structure;

pub use analysis::{
    end_algebra, endomorphisms, family_image_dim, family_kernel, nilpotency_index, radical, simplicity_certificate, spin,
    SimplicityCertificate, Verdict,
};
pub use module::ModuleRep;
pub use presentation::{default_lead, MatricPresentation, PathAlgebra, Rule};
pub use quiver::{parse_poly, render_poly, Arrow, Poly, Quiver, Word};
pub use structure::{Algebra, Terms};
