use graded_poisson::cohomology::*;
use graded_poisson::linalg;
use graded_poisson::schouten::{modified_bracket, MultiDerivation};
use graded_poisson::univariate::UniPoly;
use graded_poisson::*;

const T: Var = Var::Odd(0);

fn s11() -> AlgebraSignature {
    AlgebraSignature::new(1, 1).unwrap()
}

fn xpoly(c: &[i64]) -> GradedPolynomial {
    GradedPolynomial::from_univariate(&s11(), 0, &UniPoly::from_ints(c)).unwrap()
}

fn md(c: GradedPolynomial, f: &[Var]) -> MultiDerivation {
    MultiDerivation::from_factors(c, f).unwrap()
}

#[test]
fn zero_one_table_both_conventions() {
    let s = AlgebraSignature::new(0, 1).unwrap();
    for k in 1..=5 {
        let psi = md(GradedPolynomial::one(&s), &vec![T; k]);
        for conv in [false, true] {
            let opts = CohomologyOptions { deformation_convention: conv, ..Default::default() };
            let t = cohomology_table(&psi, 7, 0, None, &opts).unwrap();
            for n in 0..=7 {
                let want = usize::from(n + 1 < k || (conv && n + 1 == k));
                assert_eq!(t.total_dim(n, Parity::Odd), want, "k={k} n={n} conv={conv}");
                assert_eq!(t.total_dim(n, Parity::Even), 0);
            }
        }
    }
}

#[test]
fn slice_example_sizes() {
    let s = AlgebraSignature::new(0, 1).unwrap();
    for k in 1..=4 {
        let b = slice_basis(&SliceSpec::new(&s, k, Parity::Odd, 0));
        assert_eq!(b.len(), 1);
    }
}

#[test]
fn d_matrix_composes_to_zero() {
    let psi = md(xpoly(&[0, 0, 1]), &[T, T]);
    let s = s11();
    for n in 0..4 {
        for p in [Parity::Even, Parity::Odd] {
            for e in -1..4 {
                let first = d_matrix(&psi, &SliceSpec::new(&s, n, p, e)).unwrap();
                let second = d_matrix(&psi, &SliceSpec::new(&s, n + 1, p.flip(), e + 2)).unwrap();
                if first.rows() > 0 && first.cols() > 0 && second.rows() > 0 {
                    assert!(second.mul(&first).is_zero(), "n={n} {p} e={e}");
                }
            }
        }
    }
}

#[test]
fn d_matrix_rejects_inhomogeneous() {
    let psi = &md(xpoly(&[0, 0, 1]), &[T]) + &md(GradedPolynomial::one(&s11()), &[T, T]);
    let spec = SliceSpec::new(&s11(), 1, Parity::Odd, 0);
    assert!(d_matrix(&psi, &spec).is_err());
}

#[test]
fn representatives_are_cocycles_not_coboundaries() {
    let psi = md(xpoly(&[0, 0, 0, 1]), &[T]);
    let t = cohomology_table(&psi, 3, 4, None, &CohomologyOptions::default()).unwrap();
    for ((n, p, e), slice) in &t.entries {
        assert_eq!(slice.representatives.len(), slice.dim_h);
        assert_eq!(slice.dim_h + slice.dim_b, slice.dim_z, "n={n} {p} e={e}");
        for rep in &slice.representatives {
            assert!(modified_bracket(&psi, rep).unwrap().is_zero());
        }
    }
    assert!(t.all_converged());
}

#[test]
fn coboundary_slices_match_direct_rank() {
    // single arity: dim B = rank of D from the source slice
    let psi = md(xpoly(&[0, 0, 1]), &[T]);
    let s = s11();
    let t = cohomology_table(&psi, 3, 4, None, &CohomologyOptions::default()).unwrap();
    for ((n, p, e), slice) in &t.entries {
        let src = SliceSpec::new(&s, *n, p.flip(), e - 2);
        let m = d_matrix(&psi, &src).unwrap();
        let rank = if m.rows() == 0 || m.cols() == 0 { 0 } else { linalg::rank(&m) };
        assert_eq!(slice.dim_b, rank, "n={n} {p} e={e}");
    }
}

#[test]
fn worked_example_square_plus_theta_square() {
    let psi = &md(xpoly(&[0, 0, 1]), &[T]) + &md(GradedPolynomial::one(&s11()), &[T, T]);
    let t = cohomology_table(&psi, 4, 10, Some(Parity::Odd), &CohomologyOptions::default()).unwrap();
    assert!(t.all_converged());
    for k in 2..=4 {
        assert_eq!(t.total_dim(k, Parity::Odd), 0);
    }
}

#[test]
fn worked_example_cube_plus_x_theta_square() {
    let psi = &md(xpoly(&[0, 0, 0, 1]), &[T]) + &md(xpoly(&[0, 1]), &[T, T]);
    let t = cohomology_table(&psi, 3, 10, None, &CohomologyOptions::default()).unwrap();
    assert!(t.all_converged());
    assert_eq!(t.total_dim(2, Parity::Odd), 1);
    assert_eq!(t.total_dim(3, Parity::Odd), 0);
    assert_eq!(t.total_dim(3, Parity::Even), 0);
}

#[test]
fn inhomogeneous_single_arity_uses_filtration() {
    let psi = md(xpoly(&[0, 0, -1, 1]), &[T]);
    let eng = Engine::new(&psi, CohomologyOptions::default()).unwrap();
    assert!(matches!(eng.mode(), EngineMode::Filtered { arity: 1, low: 2, high: 3 }));
    let t = eng.table(2, 6, Some(Parity::Odd)).unwrap();
    assert_eq!(t.total_dim(0, Parity::Odd), 3);
    assert_eq!(t.total_dim(1, Parity::Odd), 1);
}

#[test]
fn grading_search_prefers_default() {
    let psi = md(xpoly(&[0, 0, 1]), &[T]);
    assert_eq!(Grading::homogenizing(&psi), Some(Grading::default()));
    let psi = &psi + &md(GradedPolynomial::one(&s11()), &[T, T]);
    assert_eq!(Grading::homogenizing(&psi), Some(Grading::new(1, 2).unwrap()));
}
