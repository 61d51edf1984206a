#![allow(dead_code)]

use graded_poisson::schouten::{ExteriorMonomial, MultiDerivation};
use graded_poisson::{rat, AlgebraSignature, GradedMonomial, GradedPolynomial, Parity};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sig(m: usize, n: usize) -> AlgebraSignature {
    AlgebraSignature::new(m, n).unwrap()
}

/// Random monomial with even degree at most `max_deg` and the requested parity.
pub fn random_monomial(r: &mut impl Rng, s: &AlgebraSignature, max_deg: u32, parity: Option<Parity>) -> Option<GradedMonomial> {
    for _ in 0..50 {
        let total = r.gen_range(0..=max_deg);
        let mut ex = vec![0u32; s.even()];
        if s.even() > 0 {
            for _ in 0..total {
                ex[r.gen_range(0..s.even())] += 1;
            }
        }
        let mask: u64 = if s.odd() == 0 { 0 } else { r.gen_range(0..(1u64 << s.odd())) };
        let m = GradedMonomial::new(ex, mask);
        if parity.is_none_or(|p| m.parity() == p) {
            return Some(m);
        }
    }
    None
}

/// Random polynomial with up to `terms` terms and small integer coefficients.
pub fn random_poly(r: &mut impl Rng, s: &AlgebraSignature, max_deg: u32, terms: usize, parity: Option<Parity>) -> GradedPolynomial {
    let mut p = GradedPolynomial::zero(s);
    for _ in 0..r.gen_range(1..=terms.max(1)) {
        if let Some(m) = random_monomial(r, s, max_deg, parity) {
            let c = r.gen_range(-4i64..=4);
            p = &p + &GradedPolynomial::monomial(s, m, rat(c));
        }
    }
    p
}

/// Random exterior monomial with exactly `k` factors.
pub fn random_exterior(r: &mut impl Rng, s: &AlgebraSignature, k: usize) -> Option<ExteriorMonomial> {
    for _ in 0..50 {
        let mut mask = 0u64;
        let mut odd = vec![0u32; s.odd()];
        let mut ok = true;
        for _ in 0..k {
            let total = s.even() + s.odd();
            if total == 0 {
                ok = false;
                break;
            }
            let v = r.gen_range(0..total);
            if v < s.even() {
                if mask >> v & 1 == 1 {
                    ok = false;
                    break;
                }
                mask |= 1 << v;
            } else {
                odd[v - s.even()] += 1;
            }
        }
        if ok {
            return Some(ExteriorMonomial::new(mask, odd));
        }
    }
    None
}

/// Random decomposable `f * D_{u_1}..D_{u_k}` with homogeneous `f`.
pub fn random_decomposable(r: &mut impl Rng, s: &AlgebraSignature, k: usize, max_deg: u32) -> MultiDerivation {
    let parity = if r.gen_bool(0.5) { Parity::Even } else { Parity::Odd };
    let f = random_poly(r, s, max_deg, 3, Some(parity));
    match random_exterior(r, s, k) {
        Some(e) => MultiDerivation::term(f, e),
        None => MultiDerivation::zero(s),
    }
}

/// Random multiderivation of fixed arity whose terms all have total parity `total`.
pub fn random_cochain(r: &mut impl Rng, s: &AlgebraSignature, k: usize, max_deg: u32, terms: usize, total: Parity) -> MultiDerivation {
    let mut out = MultiDerivation::zero(s);
    for _ in 0..terms {
        let Some(e) = random_exterior(r, s, k) else { continue };
        // total = k - 1 + |f| + #odd factors
        let need = Parity::of(k + 1 + e.odd_count()) + total;
        let f = random_poly(r, s, max_deg, 2, Some(need));
        out = &out + &MultiDerivation::term(f, e);
    }
    out
}
