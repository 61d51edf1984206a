//! Closed-form cohomology and classification results for `0|1`, `1|1` and the
//! `2|1` structures `psi_b`, as generator lists with per-weight dimensions.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{GpError, Result};
use crate::planar::{self, MilnorData, PlanarField};
use crate::schouten::{apply_higher_automorphism, schouten_bracket, ExteriorMonomial, MultiDerivation};
use crate::superalgebra::{rat, AlgebraSignature, GradedMonomial, GradedPolynomial, Parity, Rational, Var};
use crate::univariate::UniPoly;

const X: Var = Var::Even(0);
const Y: Var = Var::Even(1);
const TH: Var = Var::Odd(0);

/// Coefficient ring acting on a generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoefficientModule {
    /// `K`.
    Field,
    /// `K[x]`.
    Polynomial,
    /// `K[x]/(p)`.
    Quotient(UniPoly),
    /// `K[b]` for a binary form `b` (a `2|0` polynomial).
    Casimir(GradedPolynomial),
}

impl CoefficientModule {
    pub fn label(&self) -> String {
        match self {
            CoefficientModule::Field => "K".into(),
            CoefficientModule::Polynomial => "K[x]".into(),
            CoefficientModule::Quotient(p) => format!("K[x]/({})", p.to_string().replace('t', "x")),
            CoefficientModule::Casimir(b) => format!("K[b], b = {b}"),
        }
    }
}

/// How the basis elements of a generator's span are produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    /// Multiples `x^j G` (or `b^j G`) of a fixed cocycle.
    Multiple(MultiDerivation),
    /// `a d_x d_th^(n-1) + b th d_th^n` with `a = m p`, `b = (m q - (m p)') / (k - n - 1)`, `m = x^j`.
    Twisted { p: UniPoly, q: UniPoly, arity: usize, order: usize },
}

/// A summand of a closed-form cohomology space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub module: CoefficientModule,
    /// Weight of the leading basis element.
    pub weight: i64,
    pub shape: Shape,
}

impl Generator {
    fn multiple(module: CoefficientModule, weight: i64, g: MultiDerivation) -> Self {
        Generator { module, weight, shape: Shape::Multiple(g) }
    }

    /// Number of basis elements of weight `e`.
    pub fn dim_at(&self, e: i64) -> usize {
        let off = e - self.weight;
        let hit = match &self.module {
            CoefficientModule::Field => off == 0,
            CoefficientModule::Polynomial => off >= 0,
            CoefficientModule::Quotient(p) => off >= 0 && off < p.degree().unwrap_or(0) as i64,
            CoefficientModule::Casimir(b) => {
                let d = b.even_degree().unwrap_or(1) as i64;
                off >= 0 && off % d == 0
            }
        };
        usize::from(hit)
    }

    /// Number of basis elements (`None` when infinite).
    pub fn total_dim(&self) -> Option<usize> {
        match &self.module {
            CoefficientModule::Field => Some(1),
            CoefficientModule::Quotient(p) => Some(p.degree().unwrap_or(0)),
            _ => None,
        }
    }

    /// The `j`-th basis element.
    pub fn element(&self, j: usize) -> MultiDerivation {
        match &self.shape {
            Shape::Multiple(g) => {
                if j == 0 {
                    return g.clone();
                }
                let sig = g.signature();
                let mult = match &self.module {
                    CoefficientModule::Casimir(b) => lift(sig, b).pow(j as u32),
                    _ => GradedPolynomial::var(sig, X).expect("x").pow(j as u32),
                };
                times(&mult, g)
            }
            Shape::Twisted { p, q, arity, order } => {
                let sig = AlgebraSignature::new(1, 1).expect("1|1");
                let m = UniPoly::monomial(Rational::one(), j);
                let a = m.mul(p);
                let denom = Rational::from_integer(BigInt::from(*order as i64 - *arity as i64 - 1));
                let b = m.mul(q).sub(&a.derivative()).scale(&(Rational::one() / denom));
                let mut dd = vec![X];
                dd.extend(std::iter::repeat_n(TH, arity - 1));
                let mut dt = vec![TH];
                dt.extend(std::iter::repeat_n(TH, *arity));
                let left = MultiDerivation::from_factors(uni(&sig, &a), &dd).expect("valid");
                let th = GradedPolynomial::var(&sig, TH).expect("th");
                let right = MultiDerivation::from_factors(&th * &uni(&sig, &b), &dt[1..]).expect("valid");
                &left + &right
            }
        }
    }
}

/// Closed-form description of one `(n, parity)` cohomology space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SliceForm {
    Generators(Vec<Generator>),
    /// The space has no closed form; compare by brute force only.
    NoClosedForm,
}

impl SliceForm {
    pub fn zero() -> Self {
        SliceForm::Generators(Vec::new())
    }

    /// `dim` at weight `e`, or `None` without a closed form.
    pub fn dim_at(&self, e: i64) -> Option<usize> {
        match self {
            SliceForm::Generators(g) => Some(g.iter().map(|g| g.dim_at(e)).sum()),
            SliceForm::NoClosedForm => None,
        }
    }

    pub fn generators(&self) -> &[Generator] {
        match self {
            SliceForm::Generators(g) => g,
            SliceForm::NoClosedForm => &[],
        }
    }
}

fn uni(sig: &AlgebraSignature, p: &UniPoly) -> GradedPolynomial {
    GradedPolynomial::from_univariate(sig, 0, p).expect("has an even variable")
}

fn times(c: &GradedPolynomial, g: &MultiDerivation) -> MultiDerivation {
    let mut out = MultiDerivation::zero(g.signature());
    for (e, coef) in g.terms() {
        out = &out + &MultiDerivation::term(c * coef, e.clone());
    }
    out
}

fn md(coef: GradedPolynomial, factors: &[Var]) -> MultiDerivation {
    MultiDerivation::from_factors(coef, factors).expect("valid factors")
}

fn repeat(v: Var, n: usize) -> Vec<Var> {
    vec![v; n]
}

fn with(mut head: Vec<Var>, tail: &[Var]) -> Vec<Var> {
    head.extend_from_slice(tail);
    head
}

/// Embeds a `2|0` polynomial into `K[x,y,th]`.
pub fn lift(sig: &AlgebraSignature, f: &GradedPolynomial) -> GradedPolynomial {
    GradedPolynomial::from_terms(sig, f.terms().map(|(m, c)| (GradedMonomial::new(m.even_exponents().to_vec(), 0), c.clone())))
}

fn sig01() -> AlgebraSignature {
    AlgebraSignature::new(0, 1).expect("0|1")
}

fn sig11() -> AlgebraSignature {
    AlgebraSignature::new(1, 1).expect("1|1")
}

fn sig21() -> AlgebraSignature {
    AlgebraSignature::new(2, 1).expect("2|1")
}

// ---------- 0|1 ----------

/// Order of the leading term of a `0|1` codifferential; `psi` is equivalent to `Dth^k`.
pub fn classify_0_1(psi: &MultiDerivation) -> Result<usize> {
    let sig = psi.signature();
    if sig.even() != 0 || sig.odd() != 1 {
        return Err(GpError::InvalidSignature(format!("expected 0|1, got {sig}")));
    }
    if psi.is_zero() {
        return Err(GpError::ZeroInput);
    }
    if psi.total_parity() != Some(Parity::Odd) {
        return Err(GpError::NotOdd);
    }
    let k = psi.min_arity().expect("nonzero");
    if k == 0 {
        return Err(GpError::ZeroCochainTerm);
    }
    Ok(k)
}

/// Generator `c th Dth^(l-k+1)` of the automorphism removing the `Dth^l` term of
/// `a_k Dth^k + a_l Dth^l + ...`.
pub fn elimination_generator_0_1(k: usize, a_k: &Rational, l: usize, a_l: &Rational) -> Result<MultiDerivation> {
    if l <= k || k == 0 {
        return Err(GpError::Precondition("need 0 < k < l".into()));
    }
    if a_k.is_zero() {
        return Err(GpError::Precondition("leading coefficient vanishes".into()));
    }
    let sign = if ((k - 1) * (l - k)).is_multiple_of(2) { rat(1) } else { rat(-1) };
    let c = -(sign * a_l) / (Rational::from_integer(BigInt::from(k)) * a_k);
    let sig = sig01();
    let th = GradedPolynomial::var(&sig, TH).expect("th");
    Ok(md(th.scale(&c), &repeat(TH, l - k + 1)))
}

/// Normal form `a_k Dth^k` reached by repeatedly eliminating higher terms, up to arity `max_arity`.
pub fn normalize_0_1(psi: &MultiDerivation, max_arity: usize) -> Result<MultiDerivation> {
    let k = classify_0_1(psi)?;
    let sig = sig01();
    let coeff = |p: &MultiDerivation, n: usize| -> Rational {
        let (_, e) = ExteriorMonomial::from_factors(&sig, &repeat(TH, n)).expect("valid");
        p.coefficient(&e).constant_term()
    };
    let mut cur = psi.truncate(max_arity);
    let a_k = coeff(&cur, k);
    for l in k + 1..=max_arity {
        let a_l = coeff(&cur, l);
        if a_l.is_zero() {
            continue;
        }
        let phi = elimination_generator_0_1(k, &a_k, l, &a_l)?;
        cur = apply_higher_automorphism(&cur, &phi, max_arity)?;
    }
    Ok(cur)
}

/// Cohomology of `Dth^k` on `K[th]`.
pub fn cohomology_0_1(k: usize, convention: bool, n: usize, parity: Parity) -> Result<SliceForm> {
    if k == 0 {
        return Err(GpError::Precondition("order must be positive".into()));
    }
    if parity == Parity::Even || n + 1 > k || (n + 1 == k && !convention) {
        return Ok(SliceForm::zero());
    }
    let g = md(GradedPolynomial::one(&sig01()), &repeat(TH, n));
    Ok(SliceForm::Generators(vec![Generator::multiple(CoefficientModule::Field, 0, g)]))
}

// ---------- 1|1 ----------

/// Kind of a `1|1` odd cochain `sum f_k th Dx Dth^(k-1) + g_k Dth^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind11 {
    FirstKind,
    SecondKind,
    NotCodifferential,
}

/// Splits an odd `1|1` cochain into `(f_k, g_k)` per arity.
pub fn split_1_1(psi: &MultiDerivation) -> Result<Vec<(usize, UniPoly, UniPoly)>> {
    let sig = psi.signature();
    if sig.even() != 1 || sig.odd() != 1 {
        return Err(GpError::InvalidSignature(format!("expected 1|1, got {sig}")));
    }
    if psi.total_parity() != Some(Parity::Odd) && !psi.is_zero() {
        return Err(GpError::NotOdd);
    }
    if psi.min_arity() == Some(0) {
        return Err(GpError::ZeroCochainTerm);
    }
    let mut out = Vec::new();
    for k in psi.arities() {
        let (_, ef) = ExteriorMonomial::from_factors(sig, &with(vec![X], &repeat(TH, k - 1))).expect("valid");
        let (_, eg) = ExteriorMonomial::from_factors(sig, &repeat(TH, k)).expect("valid");
        let strip_th = |p: GradedPolynomial| -> UniPoly {
            let terms = p.terms().map(|(m, c)| (GradedMonomial::new(m.even_exponents().to_vec(), 0), c.clone()));
            GradedPolynomial::from_terms(sig, terms).to_univariate().expect("univariate").1
        };
        out.push((k, strip_th(psi.coefficient(&ef)), strip_th(psi.coefficient(&eg))));
    }
    Ok(out)
}

/// First kind iff every `f_k` vanishes, second kind iff every `g_k` vanishes.
pub fn classify_1_1(psi: &MultiDerivation) -> Result<Kind11> {
    if psi.is_zero() {
        return Err(GpError::ZeroInput);
    }
    let parts = split_1_1(psi)?;
    let no_f = parts.iter().all(|(_, f, _)| f.is_zero());
    let no_g = parts.iter().all(|(_, _, g)| g.is_zero());
    Ok(match (no_f, no_g) {
        (true, _) => Kind11::FirstKind,
        (_, true) => Kind11::SecondKind,
        _ => Kind11::NotCodifferential,
    })
}

/// `(h, p, q)` with `h = gcd(g, g')`, `g = p h`, `g' = q h`.
pub fn singularity(g: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
    let dg = g.derivative();
    let h = g.gcd(&dg);
    let p = g.div_rem(&h).0;
    let q = dg.div_rem(&h).0;
    (h, p, q)
}

fn deg(p: &UniPoly) -> i64 {
    p.degree().map_or(0, |d| d as i64)
}

/// Cohomology of `g Dth^k` in slice `(n, parity)`.
pub fn first_kind_cohomology_1_1(g: &UniPoly, k: usize, convention: bool, n: usize, parity: Parity) -> Result<SliceForm> {
    if g.is_zero() {
        return Err(GpError::ZeroInput);
    }
    if k == 0 {
        return Err(GpError::Precondition("order must be positive".into()));
    }
    let sig = sig11();
    let (h, p, q) = singularity(g);
    let gens = match parity {
        Parity::Odd => {
            let base = md(GradedPolynomial::one(&sig), &repeat(TH, n));
            let module = if n + 1 < k || (n + 1 == k && convention) {
                CoefficientModule::Polynomial
            } else if n + 1 == k {
                CoefficientModule::Quotient(g.monic())
            } else {
                CoefficientModule::Quotient(h.clone())
            };
            vec![Generator::multiple(module, 0, base)]
        }
        Parity::Even if n == 0 => Vec::new(),
        Parity::Even => {
            let kk = rat(k as i64);
            let th = GradedPolynomial::var(&sig, TH).expect("th");
            let a = md(uni(&sig, &p.scale(&kk)), &with(vec![X], &repeat(TH, n - 1)));
            let b = md(&th * &uni(&sig, &q), &repeat(TH, n));
            let module = if n < k { CoefficientModule::Polynomial } else { CoefficientModule::Quotient(h.clone()) };
            vec![Generator::multiple(module, deg(&p) - 1, &a + &b)]
        }
    };
    Ok(SliceForm::Generators(gens.into_iter().filter(|g| g.total_dim() != Some(0)).collect()))
}

/// Cohomology of `f th Dx Dth^(k-1)` in slice `(n, parity)`.
pub fn second_kind_cohomology_1_1(f: &UniPoly, k: usize, convention: bool, n: usize, parity: Parity) -> Result<SliceForm> {
    if f.is_zero() {
        return Err(GpError::ZeroInput);
    }
    if k == 0 {
        return Err(GpError::Precondition("order must be positive".into()));
    }
    let sig = sig11();
    let (h, p, q) = singularity(f);
    let th = GradedPolynomial::var(&sig, TH).expect("th");
    let gens = match parity {
        Parity::Odd if n == 0 => vec![Generator::multiple(CoefficientModule::Field, 0, MultiDerivation::function(GradedPolynomial::one(&sig)))],
        Parity::Odd => {
            if n >= k && n == 2 * (k - 1) {
                return Ok(SliceForm::NoClosedForm);
            }
            let base = md(th.clone(), &with(vec![X], &repeat(TH, n - 1)));
            let module = if n + 1 < k || (n + 1 == k && convention) {
                CoefficientModule::Polynomial
            } else if n + 1 == k {
                CoefficientModule::Quotient(f.monic())
            } else {
                CoefficientModule::Quotient(h.clone())
            };
            vec![Generator::multiple(module, -1, base)]
        }
        Parity::Even if n + 1 == k => {
            let mut gens = Vec::new();
            if n > 0 {
                let a = md(uni(&sig, f), &with(vec![X], &repeat(TH, n - 1)));
                gens.push(Generator::multiple(CoefficientModule::Field, deg(f) - 1, a));
            }
            let b = md(th.clone(), &repeat(TH, n));
            gens.push(Generator::multiple(CoefficientModule::Quotient(f.monic()), 0, b));
            gens
        }
        Parity::Even if n == 0 => Vec::new(),
        Parity::Even => {
            let module = if n + 1 < k { CoefficientModule::Polynomial } else { CoefficientModule::Quotient(h.clone()) };
            let shape = Shape::Twisted { p: p.clone(), q: q.clone(), arity: n, order: k };
            vec![Generator { module, weight: deg(&p) - 1, shape }]
        }
    };
    Ok(SliceForm::Generators(gens.into_iter().filter(|g| g.total_dim() != Some(0)).collect()))
}

/// Outcome of the rational equivalence search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    /// `g2(x) = C g1(A x + B)`.
    Witness { a: Rational, b: Rational, c: Rational },
    None,
    /// No rational witness, and no obstruction found either.
    Unknown,
}

fn rational_root(r: &Rational, e: u32) -> Option<Rational> {
    if r.is_negative() && e.is_multiple_of(2) {
        return None;
    }
    let root = |n: &BigInt| -> Option<BigInt> {
        let m = n.abs().nth_root(e);
        (num_traits::pow(m.clone(), e as usize) == n.abs()).then(|| if n.is_negative() { -m } else { m })
    };
    Some(Rational::new(root(r.numer())?, root(r.denom())?))
}

/// Monic polynomial shifted so its subleading coefficient vanishes, with the shift.
fn centred(g: &UniPoly) -> (UniPoly, Rational) {
    let n = g.degree().expect("nonzero");
    let monic = g.monic();
    let shift = -monic.coeff(n - 1) / rat(n as i64);
    (monic.compose_affine(&rat(1), &shift), shift)
}

/// Rational `(A, B, C)` with `g2(x) = C g1(A x + B)`, or why none was found.
pub fn equivalent_1_1_first_kind(g1: &UniPoly, g2: &UniPoly, k: usize) -> Result<Equivalence> {
    if g1.is_zero() || g2.is_zero() {
        return Err(GpError::ZeroInput);
    }
    if k == 0 {
        return Err(GpError::Precondition("order must be positive".into()));
    }
    let n = g1.degree().expect("nonzero");
    if g2.degree() != Some(n) {
        return Ok(Equivalence::None);
    }
    if n == 0 {
        return Ok(Equivalence::Witness { a: rat(1), b: rat(0), c: g2.leading() / g1.leading() });
    }
    let (c1, m1) = centred(g1);
    let (c2, m2) = centred(g2);
    // c2(t) = c1(A t) / A^n, so c2_j = c1_j A^(j - n)
    let mut constraints = Vec::new();
    for j in 0..n {
        match (c1.coeff(j).is_zero(), c2.coeff(j).is_zero()) {
            (true, true) => {}
            (false, false) => constraints.push(((n - j) as u32, c1.coeff(j) / c2.coeff(j))),
            _ => return Ok(Equivalence::None),
        }
    }
    for w in constraints.windows(2) {
        let ((e1, r1), (e2, r2)) = (&w[0], &w[1]);
        if num_traits::pow(r1.clone(), *e2 as usize) != num_traits::pow(r2.clone(), *e1 as usize) {
            return Ok(Equivalence::None);
        }
    }
    let candidates: Vec<Rational> = match constraints.first() {
        None => vec![rat(1)],
        Some((e, r)) => match rational_root(r, *e) {
            Some(a) => vec![a.clone(), -a],
            None => Vec::new(),
        },
    };
    for a in candidates {
        if a.is_zero() || !constraints.iter().all(|(e, r)| num_traits::pow(a.clone(), *e as usize) == *r) {
            continue;
        }
        // g_i(t + m_i) are the centred forms, so A m2 + B = m1
        let b = m1.clone() - a.clone() * m2.clone();
        let c = g2.leading() / (g1.leading() * num_traits::pow(a.clone(), n));
        if g1.compose_affine(&a, &b).scale(&c) == *g2 {
            return Ok(Equivalence::Witness { a, b, c });
        }
    }
    Ok(Equivalence::Unknown)
}

// ---------- 2|1 ----------

/// `psi_b = b_y th Dx Dth - b_x th Dy Dth` for a `2|0` polynomial `b`.
pub fn build_psi_b(b: &GradedPolynomial) -> Result<MultiDerivation> {
    let field = planar::grad(b);
    let sig = sig21();
    let th = GradedPolynomial::var(&sig, TH)?;
    let g = &th * &lift(&sig, &field.1);
    let h = &th * &lift(&sig, &field.0);
    Ok(&md(g, &[X, TH]) - &md(h, &[Y, TH]))
}

/// Recovers `b` (constant-free) from `psi_b`, if `psi` has that shape.
pub fn psi_b_potential(psi: &MultiDerivation) -> Option<GradedPolynomial> {
    let sig = psi.signature();
    if sig.even() != 2 || sig.odd() != 1 {
        return None;
    }
    let plane = planar::plane();
    let (_, ex) = ExteriorMonomial::from_factors(sig, &[X, TH])?;
    let (_, ey) = ExteriorMonomial::from_factors(sig, &[Y, TH])?;
    let drop_th = |p: GradedPolynomial| -> Option<GradedPolynomial> {
        let mut terms = Vec::new();
        for (m, c) in p.terms() {
            if m.odd_mask() != 1 {
                return None;
            }
            terms.push((GradedMonomial::new(m.even_exponents().to_vec(), 0), c.clone()));
        }
        Some(GradedPolynomial::from_terms(&plane, terms))
    };
    if psi.terms().any(|(e, _)| *e != ex && *e != ey) {
        return None;
    }
    let by = drop_th(psi.coefficient(&ex))?;
    let bx = -&drop_th(psi.coefficient(&ey))?;
    planar::gradient_potential(&PlanarField(bx, by)).ok()
}

/// `[psi, alpha]`; zero iff `alpha` is a Casimir.
pub fn casimir_residual(psi: &MultiDerivation, alpha: &GradedPolynomial) -> Result<MultiDerivation> {
    if alpha.parity().is_none() {
        return Err(GpError::NotHomogeneous("Casimir candidate must have a parity".into()));
    }
    schouten_bracket(psi, &MultiDerivation::function(alpha.clone()))
}

fn biderivation(f: &GradedPolynomial, g: &GradedPolynomial, h: &GradedPolynomial, k: &GradedPolynomial) -> MultiDerivation {
    let sig = sig21();
    let th = GradedPolynomial::var(&sig, TH).expect("th");
    let parts = [
        md(lift(&sig, f), &[X, Y]),
        md(&th * &lift(&sig, g), &[X, TH]),
        md(&th * &lift(&sig, h), &[Y, TH]),
        md(lift(&sig, k), &[TH, TH]),
    ];
    parts.iter().fold(MultiDerivation::zero(&sig), |acc, p| &acc + p)
}

/// `a Dx Dy - a_y th Dx Dth + a_x th Dy Dth`, with even Casimir `a th`.
pub fn even_casimir_family(a: &GradedPolynomial) -> MultiDerivation {
    let z = GradedPolynomial::zero(a.signature());
    let ga = planar::grad(a);
    biderivation(a, &-&ga.1, &ga.0, &z)
}

/// `psi_b`, with odd Casimir `b`.
pub fn odd_casimir_family(b: &GradedPolynomial) -> MultiDerivation {
    let z = GradedPolynomial::zero(b.signature());
    let gb = planar::grad(b);
    biderivation(&z, &gb.1, &-&gb.0, &z)
}

/// `k Dth^2`; every function of `x, y` is an odd Casimir.
pub fn theta_square_family(k: &GradedPolynomial) -> MultiDerivation {
    let z = GradedPolynomial::zero(k.signature());
    biderivation(&z, &z, &z, k)
}

/// `-2k Dx Dy - k_y th Dx Dth + k_x th Dy Dth + k Dth^2`.
pub fn mixed_family(k: &GradedPolynomial) -> MultiDerivation {
    let gk = planar::grad(k);
    biderivation(&k.scale(&rat(-2)), &-&gk.1, &gk.0, k)
}

fn curl_like(sig: &AlgebraSignature, u: &GradedPolynomial, tail: usize) -> MultiDerivation {
    // u_y th Dx Dth^tail - u_x th Dy Dth^tail
    let th = GradedPolynomial::var(sig, TH).expect("th");
    let gu = planar::grad(u);
    &md(&th * &lift(sig, &gu.1), &with(vec![X], &repeat(TH, tail))) - &md(&th * &lift(sig, &gu.0), &with(vec![Y], &repeat(TH, tail)))
}

/// Odd cohomology of `psi_b` in arity `n`.
pub fn psi_b_odd_cohomology(data: &MilnorData, n: usize) -> SliceForm {
    let sig = sig21();
    let d = data.degree() as i64;
    let b = data.b().clone();
    let kb = || CoefficientModule::Casimir(b.clone());
    let th = GradedPolynomial::var(&sig, TH).expect("th");
    let one = GradedPolynomial::one(&sig);
    let us: Vec<(usize, i64, GradedPolynomial)> =
        data.basis().iter().enumerate().map(|(i, u)| (i, data.basis_degree(i) as i64, u.clone())).collect();
    let gens = match n {
        0 => vec![Generator::multiple(kb(), 0, MultiDerivation::function(one))],
        1 => Vec::new(),
        2 => {
            let psi = build_psi_b(&b).expect("valid");
            let euler_like = &md(&th * &GradedPolynomial::var(&sig, X).expect("x"), &[X, TH])
                + &md(&th * &GradedPolynomial::var(&sig, Y).expect("y"), &[Y, TH]);
            let mut gens = vec![Generator::multiple(kb(), -2, md(one.clone(), &[X, Y]))];
            for (_, du, u) in us.iter().filter(|(_, du, _)| *du == d - 2) {
                gens.push(Generator::multiple(kb(), du + d - 2, times(&lift(&sig, u), &psi)));
            }
            for (_, du, u) in &us {
                gens.push(Generator::multiple(kb(), *du, times(&lift(&sig, u), &euler_like)));
            }
            for (i, du, u) in &us {
                if *i == 0 {
                    continue;
                }
                let module = if *du == d - 2 { CoefficientModule::Field } else { kb() };
                gens.push(Generator::multiple(module, du - 2, curl_like(&sig, u, 1)));
            }
            gens
        }
        _ => us
            .iter()
            .map(|(_, du, u)| {
                let lead = md(lift(&sig, u).scale(&rat(n as i64 - 2)), &with(vec![X, Y], &repeat(TH, n - 2)));
                Generator::multiple(CoefficientModule::Field, du - 2, &lead + &curl_like(&sig, u, n - 1))
            })
            .collect(),
    };
    SliceForm::Generators(gens)
}

/// Even cohomology of `psi_b` in arity `n`.
pub fn psi_b_even_cohomology(data: &MilnorData, n: usize) -> SliceForm {
    let sig = sig21();
    let d = data.degree() as i64;
    let b = data.b().clone();
    let kb = || CoefficientModule::Casimir(b.clone());
    let th = GradedPolynomial::var(&sig, TH).expect("th");
    let one = GradedPolynomial::one(&sig);
    let us: Vec<(i64, GradedPolynomial)> =
        data.basis().iter().enumerate().map(|(i, u)| (data.basis_degree(i) as i64, lift(&sig, u))).collect();
    let gens = match n {
        0 => Vec::new(),
        1 if d == 1 => vec![
            Generator::multiple(kb(), -1, md(one.clone(), &[X])),
            Generator::multiple(kb(), -1, md(one.clone(), &[Y])),
        ],
        1 => {
            let mut gens: Vec<Generator> =
                us.iter().map(|(du, u)| Generator::multiple(kb(), *du, md(&th * u, &[TH]))).collect();
            let gb = planar::grad(&b);
            let hamiltonian = &md(-&lift(&sig, &gb.1), &[X]) + &md(lift(&sig, &gb.0), &[Y]);
            gens.push(Generator::multiple(kb(), d - 2, hamiltonian));
            if d == 2 {
                let euler = &md(GradedPolynomial::var(&sig, X).expect("x"), &[X])
                    + &md(GradedPolynomial::var(&sig, Y).expect("y"), &[Y]);
                gens.push(Generator::multiple(kb(), 0, euler));
            }
            gens
        }
        _ => us
            .iter()
            .map(|(du, u)| {
                let module = if n == 3 { kb() } else { CoefficientModule::Field };
                Generator::multiple(module, du - 2, md(&th * u, &with(vec![X, Y], &repeat(TH, n - 2))))
            })
            .collect(),
    };
    SliceForm::Generators(gens)
}

/// Closed form for a supported codifferential: `0|1`, single-term `1|1`, or `psi_b`.
pub fn closed_form(psi: &MultiDerivation, convention: bool, n: usize, parity: Parity) -> Result<SliceForm> {
    let sig = psi.signature();
    match (sig.even(), sig.odd()) {
        (0, 1) => cohomology_0_1(classify_0_1(psi)?, convention, n, parity),
        (1, 1) => {
            let parts = split_1_1(psi)?;
            let live: Vec<_> = parts.iter().filter(|(_, f, g)| !f.is_zero() || !g.is_zero()).collect();
            match live.as_slice() {
                [(k, f, g)] if f.is_zero() => first_kind_cohomology_1_1(g, *k, convention, n, parity),
                [(k, f, g)] if g.is_zero() => second_kind_cohomology_1_1(f, *k, convention, n, parity),
                _ => Err(GpError::Precondition("no closed form for this 1|1 codifferential".into())),
            }
        }
        (2, 1) => {
            let b = psi_b_potential(psi)
                .ok_or_else(|| GpError::Precondition("2|1 closed forms need psi_b".into()))?;
            let data = planar::milnor_basis(&b)?;
            Ok(match parity {
                Parity::Odd => psi_b_odd_cohomology(&data, n),
                Parity::Even => psi_b_even_cohomology(&data, n),
            })
        }
        _ => Err(GpError::Precondition(format!("no closed forms for signature {sig}"))),
    }
}
