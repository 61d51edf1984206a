mod common;

use common::*;
use graded_poisson::schouten::*;
use graded_poisson::*;
use proptest::prelude::*;
use rand::Rng;

fn random_sig(r: &mut impl Rng) -> AlgebraSignature {
    loop {
        let (m, n) = (r.gen_range(0..=2), r.gen_range(0..=2));
        if m + n > 0 {
            return sig(m, n);
        }
    }
}

fn probe(r: &mut impl Rng, s: &AlgebraSignature, count: usize) -> Vec<GradedPolynomial> {
    (0..count)
        .map(|_| {
            let p = if r.gen_bool(0.5) { Parity::Even } else { Parity::Odd };
            random_poly(r, s, 3, 3, Some(p))
        })
        .collect()
}

fn sign(odd: bool) -> Rational {
    if odd {
        rat(-1)
    } else {
        rat(1)
    }
}

fn bideg(a: &MultiDerivation) -> (bool, bool) {
    let b = a.bidegree().unwrap();
    (b.exterior_degree.rem_euclid(2) == 1, b.internal_parity.is_odd())
}

fn cochain(r: &mut impl Rng, s: &AlgebraSignature) -> MultiDerivation {
    let k = r.gen_range(0..=3);
    let total = if r.gen_bool(0.5) { Parity::Even } else { Parity::Odd };
    random_cochain(r, s, k, 3, 2, total)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_matches_coderivation_commutator(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_sig(&mut r);
        let ka = r.gen_range(0..=3);
        let kb = r.gen_range(0..=3);
        let a = random_decomposable(&mut r, &s, ka, 3);
        let b = random_decomposable(&mut r, &s, kb, 3);
        prop_assume!(!a.is_zero() && !b.is_zero() && ka + kb > 0);
        let pr = probe(&mut r, &s, ka + kb - 1);
        let br = schouten_bracket(&a, &b).unwrap();
        let lhs = if br.is_zero() { GradedPolynomial::zero(&s) } else { evaluate(&br, &pr).unwrap() };
        prop_assert_eq!(lhs, commutator_oracle(&a, &b, &pr).unwrap());
    }

    #[test]
    fn bracket_is_graded_antisymmetric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_sig(&mut r);
        let ka = r.gen_range(0..=3);
        let kb = r.gen_range(0..=3);
        let a = random_decomposable(&mut r, &s, ka, 3);
        let b = random_decomposable(&mut r, &s, kb, 3);
        prop_assume!(!a.is_zero() && !b.is_zero());
        let ((da, pa), (db, pb)) = (bideg(&a), bideg(&b));
        let ab = schouten_bracket(&a, &b).unwrap();
        let ba = schouten_bracket(&b, &a).unwrap();
        prop_assert_eq!(ab, ba.scale(&-sign((da && db) ^ (pa && pb))));
    }

    #[test]
    fn bracket_satisfies_graded_jacobi(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_sig(&mut r);
        let (ka, kb, kc) = (r.gen_range(0..=2), r.gen_range(0..=2), r.gen_range(0..=2));
        let a = random_decomposable(&mut r, &s, ka, 2);
        let b = random_decomposable(&mut r, &s, kb, 2);
        let c = random_decomposable(&mut r, &s, kc, 2);
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let ((da, pa), (db, pb)) = (bideg(&a), bideg(&b));
        let lhs = schouten_bracket(&a, &schouten_bracket(&b, &c).unwrap()).unwrap();
        let r1 = schouten_bracket(&schouten_bracket(&a, &b).unwrap(), &c).unwrap();
        let r2 = schouten_bracket(&b, &schouten_bracket(&a, &c).unwrap()).unwrap();
        prop_assert_eq!(lhs, &r1 + &r2.scale(&sign((da && db) ^ (pa && pb))));
    }

    #[test]
    fn modified_bracket_is_a_lie_superbracket(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_sig(&mut r);
        let a = cochain(&mut r, &s);
        let b = cochain(&mut r, &s);
        let c = cochain(&mut r, &s);
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let ta = a.total_parity().unwrap().is_odd();
        let tb = b.total_parity().unwrap().is_odd();
        let ab = modified_bracket(&a, &b).unwrap();
        prop_assert_eq!(&ab, &modified_bracket(&b, &a).unwrap().scale(&-sign(ta && tb)));
        let lhs = modified_bracket(&a, &modified_bracket(&b, &c).unwrap()).unwrap();
        let r1 = modified_bracket(&ab, &c).unwrap();
        let r2 = modified_bracket(&b, &modified_bracket(&a, &c).unwrap()).unwrap();
        prop_assert_eq!(lhs, &r1 + &r2.scale(&sign(ta && tb)));
    }

    #[test]
    fn odd_square_acts_as_half_self_bracket(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_sig(&mut r);
        let k = r.gen_range(1..=2);
        let psi = random_cochain(&mut r, &s, k, 2, 2, Parity::Odd);
        let phi = cochain(&mut r, &s);
        let twice = coboundary(&psi, &coboundary(&psi, &phi).unwrap()).unwrap();
        let half = modified_bracket(&modified_bracket(&psi, &psi).unwrap(), &phi).unwrap().scale(&ratio(1, 2));
        prop_assert_eq!(twice, half);
    }

    #[test]
    fn linear_automorphisms_compose(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = sig(1, 1);
        let nz = |r: &mut rand_chacha::ChaCha8Rng| loop {
            let v = r.gen_range(-3i64..=3);
            if v != 0 {
                return rat(v);
            }
        };
        let s1 = LinearSubstitution::scalar(&s, nz(&mut r), rat(r.gen_range(-2..=2)), nz(&mut r)).unwrap();
        let s2 = LinearSubstitution::scalar(&s, nz(&mut r), rat(r.gen_range(-2..=2)), nz(&mut r)).unwrap();
        let psi = cochain(&mut r, &s);
        let lhs = apply_linear_automorphism(&apply_linear_automorphism(&psi, &s2).unwrap(), &s1).unwrap();
        prop_assert_eq!(lhs, apply_linear_automorphism(&psi, &s1.then(&s2)).unwrap());
    }

    #[test]
    fn linear_automorphisms_preserve_codifferentials(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = sig(1, 1);
        let k = r.gen_range(1..=3);
        let g = random_poly(&mut r, &s, 3, 3, Some(Parity::Even));
        prop_assume!(!g.is_zero());
        let psi = MultiDerivation::from_factors(g, &vec![Var::Odd(0); k]).unwrap();
        let sub = LinearSubstitution::scalar(&s, rat(2), rat(r.gen_range(-2..=2)), rat(-1)).unwrap();
        let moved = apply_linear_automorphism(&psi, &sub).unwrap();
        prop_assert!(is_codifferential(&moved, 8).unwrap().is_codifferential);
    }
}

/// `D^2 = 0` for codifferentials drawn from the known families.
#[test]
fn coboundary_squares_to_zero_on_families() {
    use graded_poisson::closedform::*;
    let mut r = rng(17);
    let plane = graded_poisson::planar::plane();
    for i in 0..120 {
        let a = random_poly(&mut r, &plane, 3, 3, None);
        let psi = match i % 4 {
            0 => even_casimir_family(&a),
            1 => odd_casimir_family(&a),
            2 => theta_square_family(&a),
            _ => mixed_family(&a),
        };
        let s = psi.signature().clone();
        let phi = cochain(&mut r, &s);
        let d2 = coboundary(&psi, &coboundary(&psi, &phi).unwrap()).unwrap();
        assert!(d2.is_zero(), "{psi} on {phi}");
    }
}
