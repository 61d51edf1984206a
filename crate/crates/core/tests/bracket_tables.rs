mod common;

use common::*;
use graded_poisson::schouten::*;
use graded_poisson::*;

const X: Var = Var::Even(0);
const Y: Var = Var::Even(1);
const T: Var = Var::Odd(0);

fn md(c: GradedPolynomial, f: &[Var]) -> MultiDerivation {
    MultiDerivation::from_factors(c, f).unwrap()
}

fn dx(c: &GradedPolynomial) -> GradedPolynomial {
    c.partial(X).unwrap()
}

fn dy(c: &GradedPolynomial) -> GradedPolynomial {
    c.partial(Y).unwrap()
}

fn sign(odd: bool) -> Rational {
    if odd {
        rat(-1)
    } else {
        rat(1)
    }
}

#[test]
fn zero_one_tables() {
    let s = sig(0, 1);
    let th = GradedPolynomial::var(&s, T).unwrap();
    let psi = |m: usize| md(GradedPolynomial::one(&s), &vec![T; m]);
    let phi = |m: usize| md(th.clone(), &vec![T; m]);
    for m in 1..=6 {
        for n in 1..=6 {
            let r = m + n - 1;
            assert!(schouten_bracket(&psi(m), &psi(n)).unwrap().is_zero());
            assert_eq!(schouten_bracket(&psi(m), &phi(n)).unwrap(), psi(r).scale(&rat(m as i64)));
            assert_eq!(schouten_bracket(&phi(m), &phi(n)).unwrap(), phi(r).scale(&rat(m as i64 - n as i64)));
            let sg = sign((m - 1) * (n + 1) % 2 == 1);
            assert!(modified_bracket(&psi(m), &psi(n)).unwrap().is_zero());
            assert_eq!(modified_bracket(&psi(m), &phi(n)).unwrap(), psi(r).scale(&(sg.clone() * rat(m as i64))));
            assert_eq!(modified_bracket(&phi(m), &phi(n)).unwrap(), phi(r).scale(&(sg * rat(m as i64 - n as i64))));
        }
    }
}

#[test]
fn one_one_tables() {
    let s = sig(1, 1);
    let th = GradedPolynomial::var(&s, T).unwrap();
    let mut r = rng(3);
    let tpow = |n: usize| vec![T; n];
    let with_x = |n: usize| {
        let mut v = vec![X];
        v.extend(vec![T; n]);
        v
    };
    // odd f th Dx Dth^(k-1) + g Dth^k and even a Dx Dth^(k-1) + b th Dth^k
    let psi = |f: &GradedPolynomial, g: &GradedPolynomial, k: usize| &md(&th * f, &with_x(k - 1)) + &md(g.clone(), &tpow(k));
    let phi = |a: &GradedPolynomial, b: &GradedPolynomial, k: usize| &md(a.clone(), &with_x(k - 1)) + &md(&th * b, &tpow(k));
    for k in 1..=4usize {
        for l in 1..=4usize {
            let mut rp = || random_poly(&mut r, &s, 3, 3, Some(Parity::Even));
            let (fk, gk, fl, gl, ak, bk, al, bl) = (rp(), rp(), rp(), rp(), rp(), rp(), rp(), rp());
            let kk = rat(k as i64);
            let ll = rat(l as i64);

            let got = schouten_bracket(&psi(&fk, &gk, k), &psi(&fl, &gl, l)).unwrap();
            let want = (&md(&(&fl * &gk).scale(&kk) + &(&fk * &gl).scale(&ll), &with_x(k + l - 2))
                + &md(&th * &(&(&fk * &dx(&gl)) + &(&fl * &dx(&gk))), &tpow(k + l - 1)))
                .scale(&sign((k - 1) % 2 == 1));
            assert_eq!(got, want, "odd-odd k={k} l={l}");

            let got = schouten_bracket(&psi(&fk, &gk, k), &phi(&al, &bl, l)).unwrap();
            let c1 = &(&(&fk * &dx(&al)) - &(&al * &dx(&fk))) + &(&fk * &bl).scale(&rat(k as i64 - l as i64 - 1));
            let c2 = &(&gk * &bl).scale(&kk) - &(&al * &dx(&gk));
            let want = &md(&th * &c1, &with_x(k + l - 2)) + &md(c2, &tpow(k + l - 1));
            assert_eq!(got, want, "odd-even k={k} l={l}");

            let got = schouten_bracket(&phi(&ak, &bk, k), &phi(&al, &bl, l)).unwrap();
            let c1 = &(&(&(&ak * &dx(&al)) - &(&al * &dx(&ak))) + &(&ak * &bl).scale(&rat(k as i64 - 1)))
                - &(&al * &bk).scale(&rat(l as i64 - 1));
            let c2 = &(&(&ak * &dx(&bl)) - &(&al * &dx(&bk))) + &(&bk * &bl).scale(&rat(k as i64 - l as i64));
            let want = &md(c1, &with_x(k + l - 2)) + &md(&th * &c2, &tpow(k + l - 1));
            assert_eq!(got, want, "even-even k={k} l={l}");
        }
    }
}

fn biderivation(s: &AlgebraSignature, f: &GradedPolynomial, g: &GradedPolynomial, h: &GradedPolynomial, k: &GradedPolynomial) -> MultiDerivation {
    let th = GradedPolynomial::var(s, T).unwrap();
    &(&(&md(f.clone(), &[X, Y]) + &md(&th * g, &[X, T])) + &md(&th * h, &[Y, T])) + &md(k.clone(), &[T, T])
}

#[test]
fn two_one_self_bracket() {
    let s = sig(2, 1);
    let th = GradedPolynomial::var(&s, T).unwrap();
    let mut r = rng(5);
    for _ in 0..10 {
        let mut rp = || random_poly(&mut r, &s, 2, 3, Some(Parity::Even));
        let (f, g, h, k) = (rp(), rp(), rp(), rp());
        let psi = biderivation(&s, &f, &g, &h, &k);
        let half = schouten_bracket(&psi, &psi).unwrap().scale(&ratio(1, 2));
        let c1 = -&(&(&(&-&(&f * &dx(&g)) + &(&dx(&f) * &g)) - &(&f * &dy(&h))) + &(&dy(&f) * &h));
        let want = &(&(&md(&th * &c1, &[X, Y, T]) + &md(&(&f * &dy(&k)) - &(&k * &g).scale(&rat(2)), &[X, T, T]))
            + &md(-&(&(&f * &dx(&k)) + &(&h * &k).scale(&rat(2))), &[Y, T, T]))
            + &md(&th * &-&(&(&g * &dx(&k)) + &(&h * &dy(&k))), &[T, T, T]);
        assert_eq!(half, want);
        assert_eq!(modified_bracket(&psi, &psi).unwrap(), schouten_bracket(&psi, &psi).unwrap());
    }
}

/// The Casimir residuals come out with the overall sign reversed; only their vanishing matters.
#[test]
fn two_one_casimir_residuals() {
    let s = sig(2, 1);
    let th = GradedPolynomial::var(&s, T).unwrap();
    let mut r = rng(9);
    for _ in 0..10 {
        let mut rp = || random_poly(&mut r, &s, 2, 3, Some(Parity::Even));
        let (f, g, h, k, a, b) = (rp(), rp(), rp(), rp(), rp(), rp());
        let psi = biderivation(&s, &f, &g, &h, &k);
        let got = schouten_bracket(&psi, &MultiDerivation::function(&th * &a)).unwrap();
        let displayed = &(&md(&th * &(&-&(&f * &dy(&a)) - &(&g * &a)), &[X]) + &md(&th * &(&(&f * &dx(&a)) - &(&a * &h)), &[Y]))
            + &md((&k * &a).scale(&rat(-2)), &[T]);
        assert_eq!(got, -&displayed);
        let got = schouten_bracket(&psi, &MultiDerivation::function(b.clone())).unwrap();
        let displayed = -&(&(&md(&f * &dy(&b), &[X]) - &md(&f * &dx(&b), &[Y])) - &md(&th * &(&(&g * &dx(&b)) + &(&h * &dy(&b))), &[T]));
        assert_eq!(got, -&displayed);
    }
}
