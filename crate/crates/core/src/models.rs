//! Bundled models: the 2-sphere as the boundary of the 3-simplex, the
//! minimal 6-vertex projective plane, the torus as a tensor square of the
//! circle model, the circle itself, and a point.

use alloc::vec;
use alloc::vec::Vec;

use crate::cochain::{
    circle_algebra, cochain_algebra, point_algebra, tensor_algebra, CupAlgebra, SimplicialComplex,
};

pub fn sphere2_complex() -> SimplicialComplex {
    SimplicialComplex::new(4, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]])
        .expect("valid complex")
}

/// Antipodal quotient of the icosahedron: 6 vertices, 10 triangles.
pub fn rp2_complex() -> SimplicialComplex {
    SimplicialComplex::new(
        6,
        vec![
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 1, 5],
            vec![0, 3, 4],
            vec![0, 4, 5],
            vec![1, 2, 4],
            vec![1, 3, 4],
            vec![1, 3, 5],
            vec![2, 3, 5],
            vec![2, 4, 5],
        ],
    )
    .expect("valid complex")
}

pub fn sphere2() -> CupAlgebra {
    cochain_algebra(&sphere2_complex(), 4)
}

pub fn rp2() -> CupAlgebra {
    cochain_algebra(&rp2_complex(), 4)
}

pub fn circle() -> CupAlgebra {
    circle_algebra()
}

pub fn point() -> CupAlgebra {
    point_algebra()
}

pub fn torus() -> CupAlgebra {
    tensor_algebra(&circle_algebra(), &circle_algebra()).expect("factors carry enough structure")
}

/// Every bundled model with its CLI-facing name.
pub fn bundled() -> Vec<(&'static str, CupAlgebra)> {
    vec![
        ("s1", circle()),
        ("s2", sphere2()),
        ("rp2", rp2()),
        ("torus", torus()),
        ("point", point()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::{cohomology, eval_tree, sq, verify_relations, Cochain};
    use crate::tree::{diagonal_coeff, u, Tree2Sum};

    #[test]
    fn cohomology_dimensions() {
        assert_eq!(cohomology(&sphere2()).unwrap().dims(), vec![1, 0, 1]);
        assert_eq!(cohomology(&rp2()).unwrap().dims(), vec![1, 1, 1]);
        assert_eq!(cohomology(&torus()).unwrap().dims(), vec![1, 2, 1]);
        assert_eq!(cohomology(&circle()).unwrap().dims(), vec![1, 1]);
        assert_eq!(cohomology(&point()).unwrap().dims(), vec![1]);
    }

    #[test]
    fn rp2_top_square_of_the_generator() {
        let a = rp2();
        let h = cohomology(&a).unwrap();
        let w = h.basis_class(1, 0);
        // Sq^1 w = w^2 generates H^2.
        let sq1 = sq(&a, &h, &w, 1).unwrap();
        assert!(!sq1.is_zero());
        assert_eq!(sq1, crate::cochain::class_product(&a, &h, &w, &w).unwrap());
        // Sq^0 fixes the generator.
        assert_eq!(sq(&a, &h, &w, 0).unwrap(), w);
    }

    #[test]
    fn sphere_squares_vanish_in_the_middle() {
        let a = sphere2();
        let h = cohomology(&a).unwrap();
        let top = h.basis_class(2, 0);
        assert!(sq(&a, &h, &top, 1).unwrap().is_zero());
        assert_eq!(sq(&a, &h, &top, 0).unwrap(), top);
    }

    #[test]
    fn torus_sq_one_of_the_product_class() {
        let a = torus();
        let h = cohomology(&a).unwrap();
        let ab = h.basis_class(2, 0);
        assert!(sq(&a, &h, &ab, 1).unwrap().is_zero());
        assert_eq!(sq(&a, &h, &ab, 0).unwrap(), ab);
    }

    #[test]
    fn relations_hold_on_every_bundled_model() {
        for (name, a) in bundled() {
            let h = cohomology(&a).unwrap();
            let report = verify_relations(&a, &h);
            for entry in &report.entries {
                assert_eq!(
                    entry.failures, 0,
                    "{}: {} failed ({:?})",
                    name, entry.check, entry.first_failure
                );
            }
        }
    }

    #[test]
    fn boundaries_evaluate_to_zero_without_differential() {
        // On a model with d = 0 every e_i is symmetric, so the six
        // summands of the tree differential cancel in pairs.
        let a = torus();
        let mut sums = Vec::new();
        sums.push(Tree2Sum::generator(0, 1, 1));
        sums.push(Tree2Sum::generator(1, 0, 2));
        sums.push(u(1, 2, 0));
        sums.push(u(2, 4, 1));
        let mut elements = Vec::new();
        for p in 0..=2i64 {
            for j in 0..a.dim(p) {
                elements.push(a.basis(p, j));
            }
        }
        for s in &sums {
            let ds = crate::tree::d_tree(s);
            for w1 in &elements {
                for w2 in &elements {
                    for w3 in &elements {
                        for w4 in &elements {
                            let args =
                                [w1.clone(), w2.clone(), w3.clone(), w4.clone()];
                            let v = eval_tree(&ds, &a, &args).unwrap();
                            assert!(v.is_zero(), "nonzero boundary value");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn diagonal_reduction_matches_direct_evaluation() {
        // On zero-differential models the unordered-pair cancellation in
        // diagonal_coeff is exact, so the reduced symbols evaluate to the
        // same cochain as the full tree sum.
        let a = torus();
        let h = cohomology(&a).unwrap();
        let mut cocycles = vec![h.representative(&h.basis_class(0, 0))];
        for j in 0..h.dim(1) {
            cocycles.push(h.representative(&h.basis_class(1, j)));
        }
        cocycles.push(h.representative(&h.basis_class(2, 0)));
        for m in 1..=3i64 {
            for n in 0..=6i64 {
                for x in 0..=2i64 {
                    let tree = u(m, n, x);
                    let symbols = diagonal_coeff(&tree);
                    for c in &cocycles {
                        let args = [c.clone(), c.clone(), c.clone(), c.clone()];
                        let direct = eval_tree(&tree, &a, &args).unwrap();
                        let mut reduced = Cochain::zero(0);
                        for sym in symbols.terms() {
                            let lo = a.e(sym.lo as i64, c, c).unwrap();
                            let hi = a.e(sym.hi as i64, c, c).unwrap();
                            reduced.add(&a.e(sym.x as i64, &lo, &hi).unwrap());
                        }
                        assert_eq!(direct, reduced, "u({},{},{}) on |c|={}", m, n, x, c.degree);
                    }
                }
            }
        }
    }

    #[test]
    fn degree_four_targets_vanish_on_the_torus() {
        let a = torus();
        let h = cohomology(&a).unwrap();
        let alpha_c = h.representative(&h.basis_class(1, 0));
        let beta_c = h.representative(&h.basis_class(1, 1));
        let s = Tree2Sum::generator(0, 0, 0);
        let args = [alpha_c.clone(), beta_c.clone(), alpha_c, beta_c];
        assert!(eval_tree(&s, &a, &args).unwrap().is_zero());
    }
}
