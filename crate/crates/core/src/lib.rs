pub mod error;
pub mod forms;
pub mod gf;
pub mod groups;
pub mod homology;
pub mod linalg;
pub mod poset;
pub mod steinberg;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use forms::{FormParameters, FormValue, FormedSpace, IsometryMap, Preset};
pub use gf::{solve_minus_one, Elem, Field, FieldElement, FieldSpec, PropertyWitness};
pub use groups::{Ambient, Constraint, MatrixGroup, SearchOptions};
pub use homology::{HomologyGroup, IntChainComplex, IntMatrix};
pub use linalg::{enumerate_subspaces, quotient_coordinates, Matrix, QuotientMap, Subspace, Vector};
