use formlab_bench::{building_f2_4, dense_matrix, f3, orthogonal_h2, CAP};
use formlab_core::groups::isometry_group;
use formlab_core::homology::{int_rank, reduced_homology};
use formlab_core::{enumerate_subspaces, Constraint, SearchOptions};

#[test]
fn planes_of_f3_4() {
    // Gaussian binomial [4 choose 2]_3
    assert_eq!(enumerate_subspaces(&f3(), 4, 2, CAP).unwrap().len(), 130);
}

#[test]
fn orthogonal_group_order() {
    // |O+(4, 3)| = 2 q^2 (q^2 - 1)^2
    let g = isometry_group(&orthogonal_h2(), &Constraint::Isometry, &SearchOptions::default()).unwrap();
    assert_eq!(g.order(), Some(1152));
}

#[test]
fn building_is_a_wedge_of_spheres() {
    let h = reduced_homology(&building_f2_4(), CAP).unwrap();
    let top: Vec<String> = h.iter().filter(|g| !g.is_zero()).map(|g| format!("{} {g}", g.degree)).collect();
    assert_eq!(top, ["2 Z^64"]);
}

#[test]
fn dense_matrix_rank() {
    let m = dense_matrix();
    let r = int_rank(&m);
    assert!(r > 0 && r <= 40);
    assert_eq!(r, int_rank(&m.transpose()));
}
