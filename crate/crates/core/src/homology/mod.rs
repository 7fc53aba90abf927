//! Integral homology of finite posets.

mod chain;
mod cm;
mod filtration;
mod snf;

pub use chain::{degree, reduced_homology, HomologyGroup, IntChainComplex, KernelBasis, OrderComplex};
pub use cm::{check_cohen_macaulay, is_spherical, CmFailure, CmReport};
pub use filtration::{rank_filtration_complex, wedge_rank_check, WedgeRow};
pub use snf::{int_rank, invariant_factors, smith_normal_form, BigMatrix, IntMatrix, Mat, Snf};
