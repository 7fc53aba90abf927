//! Fixed inputs for the kernel benchmarks, shared with the tests that pin their answers.

use formlab_core::poset::{gl_building, FinitePoset};
use formlab_core::{Ambient, Field, FormParameters, FormedSpace, IntMatrix, Preset, Subspace};

pub const CAP: u128 = 10_000_000;

/// Dense 40 x 40 integer matrix with entries in -5..=5.
pub fn dense_matrix() -> IntMatrix {
    IntMatrix::from_fn(40, 40, |i, j| ((i * 7 + j * 13 + i * j) % 11) as i64 - 5)
}

pub fn f3() -> Field {
    Field::prime(3).expect("3 is prime")
}

/// H + H with the orthogonal preset over F_3.
pub fn orthogonal_h2() -> Ambient {
    let p = FormParameters::preset(&f3(), Preset::Orthogonal).expect("preset");
    Ambient::Formed(FormedSpace::hyperbolic(&p, 2))
}

/// The building of F_2^4.
pub fn building_f2_4() -> FinitePoset<Subspace> {
    gl_building(&Field::prime(2).expect("2 is prime"), 4, CAP).expect("within cap").poset
}
