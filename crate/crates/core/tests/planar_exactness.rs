mod common;

use common::*;
use graded_poisson::linalg::{self, Matrix};
use graded_poisson::planar::*;
use graded_poisson::*;
use proptest::prelude::*;
use rand::Rng;

fn poly(terms: &[(i64, u32, u32)]) -> GradedPolynomial {
    GradedPolynomial::from_terms(&plane(), terms.iter().map(|&(c, a, b)| (GradedMonomial::new(vec![a, b], 0), rat(c))))
}

fn forms() -> Vec<GradedPolynomial> {
    vec![
        poly(&[(1, 1, 1)]),
        poly(&[(1, 2, 0), (1, 0, 2)]),
        poly(&[(1, 3, 0), (1, 0, 3)]),
        poly(&[(1, 3, 0), (-1, 1, 2)]),
        poly(&[(1, 4, 0), (1, 0, 4)]),
        poly(&[(2, 1, 0), (-1, 0, 1)]),
    ]
}

/// Independent membership test: is `f` (homogeneous of degree t) in the span of
/// `y^i x^j b_x`, `y^i x^j b_y`?
fn in_jacobian_ideal(f: &GradedPolynomial, b: &GradedPolynomial) -> bool {
    let t = match f.even_degree() {
        Some(t) => t,
        None => return true,
    };
    let d = b.even_degree().unwrap();
    if t + 1 < d {
        return f.is_zero();
    }
    let s = t + 1 - d;
    let (bx, by) = (b.partial(Var::Even(0)).unwrap(), b.partial(Var::Even(1)).unwrap());
    let monos: Vec<GradedMonomial> = (0..=t).map(|j| GradedMonomial::new(vec![j, t - j], 0)).collect();
    let mut cols = Vec::new();
    for i in 0..=s {
        let m = GradedPolynomial::monomial(&plane(), GradedMonomial::new(vec![s - i, i], 0), rat(1));
        for g in [&bx, &by] {
            let p = &m * g;
            cols.push(monos.iter().map(|mm| p.coefficient(mm)).collect::<Vec<_>>());
        }
    }
    let base = linalg::rank(&Matrix::from_columns(&cols, monos.len()));
    cols.push(monos.iter().map(|mm| f.coefficient(mm)).collect());
    base == linalg::rank(&Matrix::from_columns(&cols, monos.len()))
}

fn random_plane(r: &mut impl Rng, max_deg: u32) -> GradedPolynomial {
    random_poly(r, &plane(), max_deg, 6, None)
}

#[test]
fn milnor_numbers() {
    for b in forms() {
        let d = b.even_degree().unwrap() as usize;
        let data = milnor_basis(&b).unwrap();
        assert_eq!(data.mu(), (d - 1) * (d - 1), "{b}");
        if d > 1 {
            assert!(data.basis()[0].is_constant());
        }
        // quotient dimension per degree from the membership oracle
        let mut total = 0;
        for t in 0..=(2 * d as u32) {
            let monos: Vec<GradedPolynomial> =
                (0..=t).map(|j| GradedPolynomial::monomial(&plane(), GradedMonomial::new(vec![j, t - j], 0), rat(1))).collect();
            let mut quotient = Vec::new();
            for m in &monos {
                let mut probe = quotient.clone();
                probe.push(m.clone());
                // m is independent modulo the ideal iff no combination with the chosen ones lies in it
                if !dependent_mod_ideal(&probe, &b) {
                    quotient.push(m.clone());
                }
            }
            let basis_here = (0..data.mu()).filter(|&i| data.basis_degree(i) == t).count();
            assert_eq!(basis_here, quotient.len(), "{b} t={t}");
            total += quotient.len();
        }
        assert_eq!(total, data.mu());
    }
}

/// Whether some nontrivial combination of `polys` (all of one degree) lies in the Jacobian ideal.
fn dependent_mod_ideal(polys: &[GradedPolynomial], b: &GradedPolynomial) -> bool {
    let t = polys[0].even_degree().unwrap();
    let monos: Vec<GradedMonomial> = (0..=t).map(|j| GradedMonomial::new(vec![j, t - j], 0)).collect();
    let d = b.even_degree().unwrap();
    let (bx, by) = (b.partial(Var::Even(0)).unwrap(), b.partial(Var::Even(1)).unwrap());
    let mut cols: Vec<Vec<Rational>> = Vec::new();
    if t + 1 >= d {
        let s = t + 1 - d;
        for i in 0..=s {
            let m = GradedPolynomial::monomial(&plane(), GradedMonomial::new(vec![s - i, i], 0), rat(1));
            for g in [&bx, &by] {
                let p = &m * g;
                cols.push(monos.iter().map(|mm| p.coefficient(mm)).collect());
            }
        }
    }
    let base = if cols.is_empty() { 0 } else { linalg::rank(&Matrix::from_columns(&cols, monos.len())) };
    for p in polys {
        cols.push(monos.iter().map(|mm| p.coefficient(mm)).collect());
    }
    linalg::rank(&Matrix::from_columns(&cols, monos.len())) < base + polys.len()
}

#[test]
fn euler_and_divergence_identities() {
    let mut r = rng(41);
    for b in forms() {
        let d = b.even_degree().unwrap() as i64;
        assert_eq!(cross(&PlanarField::euler(), &grad(&b)), b.scale(&rat(d)));
        let x = GradedPolynomial::var(&plane(), Var::Even(0)).unwrap();
        let y = GradedPolynomial::var(&plane(), Var::Even(1)).unwrap();
        assert_eq!(&(&x * &b.partial(Var::Even(0)).unwrap()) + &(&y * &b.partial(Var::Even(1)).unwrap()), b.scale(&rat(d)));
    }
    for _ in 0..20 {
        let k = random_plane(&mut r, 5);
        for (deg, part) in k.homogeneous_components() {
            let lhs = div(&PlanarField::euler().mul_poly(&part));
            assert_eq!(lhs, part.scale(&rat(-(deg as i64 + 2))));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn gradient_potential_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = random_plane(&mut r, 8);
        let h0 = &h - &GradedPolynomial::constant(&plane(), h.constant_term());
        prop_assert_eq!(gradient_potential(&grad(&h)).unwrap(), h0);
    }

    #[test]
    fn koszul_round_trip(seed in any::<u64>(), which in 0usize..6) {
        let mut r = rng(seed);
        let b = &forms()[which];
        let a = random_plane(&mut r, 6);
        prop_assert_eq!(koszul_divide(&grad(b).mul_poly(&a), b).unwrap(), a);
    }

    #[test]
    fn reduction_reconstructs(seed in any::<u64>(), which in 0usize..6) {
        let mut r = rng(seed);
        let b = &forms()[which];
        let data = milnor_basis(b).unwrap();
        let f = random_plane(&mut r, 10);
        let red = reduce_mod_jacobian(&f, &data).unwrap();
        prop_assert_eq!(red.reconstruct(&data), f.clone());
        for (t, part) in f.homogeneous_components() {
            let lam_here = (0..data.mu()).filter(|&i| data.basis_degree(i) == t).all(|i| red.lambdas[i] == rat(0));
            prop_assert_eq!(lam_here, in_jacobian_ideal(&part, b));
        }
    }

    #[test]
    fn sqfree2_reconstructs(seed in any::<u64>(), which in 0usize..6) {
        let mut r = rng(seed);
        let b = &forms()[which];
        let data = milnor_basis(b).unwrap();
        let f = random_plane(&mut r, 10);
        let dec = sqfree2_decompose(&f, &data).unwrap();
        prop_assert_eq!(dec.reconstruct(&data), f);
    }

    #[test]
    fn sqfree2_is_direct(seed in any::<u64>(), which in 0usize..5) {
        let mut r = rng(seed);
        let b = &forms()[which];
        let data = milnor_basis(b).unwrap();
        let coeffs: Vec<Vec<Rational>> = (0..data.mu()).map(|_| (0..3).map(|_| rat(r.gen_range(-2..=2))).collect()).collect();
        let mut f = GradedPolynomial::zero(&plane());
        for (i, c) in coeffs.iter().enumerate() {
            for (j, v) in c.iter().enumerate() {
                f = &f + &(&b.pow(j as u32) * &data.basis()[i]).scale(v);
            }
        }
        let h = random_plane(&mut r, 4);
        let g = &f + &cross(&grad(&h), &grad(b));
        let dec = sqfree2_decompose(&g, &data).unwrap();
        for (i, c) in coeffs.iter().enumerate() {
            let mut c = c.clone();
            while c.last().is_some_and(|v| v == &rat(0)) {
                c.pop();
            }
            prop_assert_eq!(&dec.coefficients[i], &c);
        }
        prop_assert!(cross(&grad(&(&dec.potential - &h)), &grad(b)).is_zero());
    }
}

#[test]
fn koszul_rejects_non_parallel() {
    let b = poly(&[(1, 1, 1)]);
    assert!(koszul_divide(&PlanarField(poly(&[(1, 1, 0)]), poly(&[(1, 1, 0)])), &b).is_err());
}

#[test]
fn sqfree2_base_case_is_linear_potential() {
    let b = poly(&[(1, 3, 0), (1, 0, 3)]);
    let data = milnor_basis(&b).unwrap();
    // degree 2 = deg b - 1: all of it lies in the ideal part except the basis monomial xy
    let f = poly(&[(3, 2, 0), (-5, 0, 2)]);
    let dec = sqfree2_decompose(&f, &data).unwrap();
    assert!(dec.coefficients.iter().all(|c| c.is_empty()));
    assert_eq!(dec.potential.even_degree(), Some(1));
    assert_eq!(dec.reconstruct(&data), f);
}
