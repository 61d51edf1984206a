//! Multiderivations A (x) Lambda(V*) with the graded Schouten bracket.
//!
//! A term is `f * D_{u_1} ... D_{u_k}` with the factors kept in canonical
//! order: even derivations `Dx_i` ascending (each at most once), then odd
//! derivations `Dth_j` ascending with multiplicities. Swapping two adjacent
//! factors costs a sign unless both are odd.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{GpError, Result};
use crate::superalgebra::{
    rat, write_term, AlgebraSignature, GradedMonomial, GradedPolynomial, LinearSubstitution, Parity, Rational, Var,
};

/// Maximum number of even variables (even derivations live in a `u64` mask).
pub const MAX_EVEN: usize = 64;

fn signed(neg: bool, c: Rational) -> Rational {
    if neg {
        -c
    } else {
        c
    }
}

/// Canonically ordered product of derivation factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExteriorMonomial {
    even_derivs: u64,
    odd_derivs: Vec<u32>,
}

impl ExteriorMonomial {
    /// The empty product (arity 0).
    pub fn unit(sig: &AlgebraSignature) -> Self {
        ExteriorMonomial { even_derivs: 0, odd_derivs: vec![0; sig.odd()] }
    }

    pub fn new(even_derivs: u64, odd_derivs: Vec<u32>) -> Self {
        ExteriorMonomial { even_derivs, odd_derivs }
    }

    /// Canonicalises a factor list. Returns the sign (`true` = negative) or `None`
    /// if some even derivation repeats.
    pub fn from_factors(sig: &AlgebraSignature, factors: &[Var]) -> Option<(bool, Self)> {
        let mut neg = false;
        for (a, fa) in factors.iter().enumerate() {
            for fb in &factors[a + 1..] {
                if fa == fb && !fa.parity().is_odd() {
                    return None;
                }
                if fa > fb && !(fa.parity().is_odd() && fb.parity().is_odd()) {
                    neg = !neg;
                }
            }
        }
        let mut m = Self::unit(sig);
        for f in factors {
            match *f {
                Var::Even(i) => m.even_derivs |= 1 << i,
                Var::Odd(j) => m.odd_derivs[j] += 1,
            }
        }
        Some((neg, m))
    }

    pub fn even_derivs(&self) -> u64 {
        self.even_derivs
    }

    pub fn odd_derivs(&self) -> &[u32] {
        &self.odd_derivs
    }

    pub fn even_count(&self) -> usize {
        self.even_derivs.count_ones() as usize
    }

    pub fn odd_count(&self) -> usize {
        self.odd_derivs.iter().map(|&e| e as usize).sum()
    }

    /// Number of derivation factors `k` (the term lives in `C^k`).
    pub fn arity(&self) -> usize {
        self.even_count() + self.odd_count()
    }

    /// Parity contributed by the factors.
    pub fn parity(&self) -> Parity {
        Parity::of(self.odd_count())
    }

    /// Factors in canonical order.
    pub fn factors(&self) -> Vec<Var> {
        let mut v: Vec<Var> = (0..64).filter(|i| self.even_derivs >> i & 1 == 1).map(Var::Even).collect();
        for (j, &e) in self.odd_derivs.iter().enumerate() {
            v.extend(std::iter::repeat_n(Var::Odd(j), e as usize));
        }
        v
    }

    fn write(&self, sig: &AlgebraSignature, out: &mut dyn fmt::Write, mut first: bool) -> fmt::Result {
        for i in (0..64).filter(|i| self.even_derivs >> i & 1 == 1) {
            if !first {
                out.write_char('*')?;
            }
            first = false;
            write!(out, "D{}", sig.name(Var::Even(i)))?;
        }
        for (j, &e) in self.odd_derivs.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                out.write_char('*')?;
            }
            first = false;
            write!(out, "D{}", sig.name(Var::Odd(j)))?;
            if e > 1 {
                write!(out, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Exterior degree `k - 1` together with the parity of the map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bidegree {
    pub exterior_degree: i64,
    pub internal_parity: Parity,
}

impl Bidegree {
    /// Degree in the Z2 grading used by the modified bracket.
    pub fn total(&self) -> Parity {
        Parity::of(self.exterior_degree.rem_euclid(2) as usize) + self.internal_parity
    }
}

/// Left derivative of a single monomial: scalar factor and result.
pub(crate) fn mono_partial(m: &GradedMonomial, v: Var) -> Option<(Rational, GradedMonomial)> {
    match v {
        Var::Even(i) => {
            let e = m.even_exponents()[i];
            if e == 0 {
                return None;
            }
            let mut ex = m.even_exponents().to_vec();
            ex[i] -= 1;
            Some((rat(e as i64), GradedMonomial::new(ex, m.odd_mask())))
        }
        Var::Odd(j) => {
            let mask = m.odd_mask();
            if mask >> j & 1 == 0 {
                return None;
            }
            let neg = (mask & ((1u64 << j) - 1)).count_ones() % 2 == 1;
            Some((signed(neg, Rational::one()), GradedMonomial::new(m.even_exponents().to_vec(), mask & !(1 << j))))
        }
    }
}

/// A finite sum of terms `coefficient * exterior monomial`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiDerivation {
    sig: AlgebraSignature,
    terms: BTreeMap<ExteriorMonomial, GradedPolynomial>,
}

impl MultiDerivation {
    pub fn zero(sig: &AlgebraSignature) -> Self {
        MultiDerivation { sig: sig.clone(), terms: BTreeMap::new() }
    }

    pub fn term(coefficient: GradedPolynomial, ext: ExteriorMonomial) -> Self {
        let mut d = Self::zero(coefficient.signature());
        d.add_poly(ext, &coefficient);
        d
    }

    /// `coefficient * D_{f_1} ... D_{f_k}` for factors in any order.
    pub fn from_factors(coefficient: GradedPolynomial, factors: &[Var]) -> Result<Self> {
        let sig = coefficient.signature().clone();
        for &f in factors {
            sig.check_var(f)?;
        }
        Ok(match ExteriorMonomial::from_factors(&sig, factors) {
            None => Self::zero(&sig),
            Some((neg, ext)) => Self::term(signed_poly(neg, coefficient), ext),
        })
    }

    /// A function viewed as a 0-cochain.
    pub fn function(f: GradedPolynomial) -> Self {
        let ext = ExteriorMonomial::unit(f.signature());
        Self::term(f, ext)
    }

    pub fn signature(&self) -> &AlgebraSignature {
        &self.sig
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExteriorMonomial, &GradedPolynomial)> {
        self.terms.iter()
    }

    /// Every (coefficient, monomial, exterior monomial) triple.
    pub fn monomial_terms(&self) -> impl Iterator<Item = (&Rational, &GradedMonomial, &ExteriorMonomial)> {
        self.terms.iter().flat_map(|(e, p)| p.terms().map(move |(m, c)| (c, m, e)))
    }

    pub fn coefficient(&self, ext: &ExteriorMonomial) -> GradedPolynomial {
        self.terms.get(ext).cloned().unwrap_or_else(|| GradedPolynomial::zero(&self.sig))
    }

    pub(crate) fn add_monomial(&mut self, ext: ExteriorMonomial, m: GradedMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let sig = self.sig.clone();
        let entry = self.terms.entry(ext.clone()).or_insert_with(|| GradedPolynomial::zero(&sig));
        entry.add_term(m, c);
        if entry.is_zero() {
            self.terms.remove(&ext);
        }
    }

    fn add_poly(&mut self, ext: ExteriorMonomial, p: &GradedPolynomial) {
        for (m, c) in p.terms() {
            self.add_monomial(ext.clone(), m.clone(), c.clone());
        }
    }

    pub(crate) fn add_scaled(&mut self, other: &Self, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (ext, p) in &other.terms {
            for (m, v) in p.terms() {
                self.add_monomial(ext.clone(), m.clone(), v * c);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.sig);
        out.add_scaled(self, c);
        out
    }

    /// Arities present, ascending.
    pub fn arities(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().map(ExteriorMonomial::arity).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn min_arity(&self) -> Option<usize> {
        self.terms.keys().map(ExteriorMonomial::arity).min()
    }

    pub fn max_arity(&self) -> Option<usize> {
        self.terms.keys().map(ExteriorMonomial::arity).max()
    }

    /// The part lying in `C^k`.
    pub fn component(&self, arity: usize) -> Self {
        self.filter(|e| e.arity() == arity)
    }

    /// Drops everything with more than `max_arity` factors.
    pub fn truncate(&self, max_arity: usize) -> Self {
        self.filter(|e| e.arity() <= max_arity)
    }

    fn filter(&self, keep: impl Fn(&ExteriorMonomial) -> bool) -> Self {
        MultiDerivation {
            sig: self.sig.clone(),
            terms: self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, p)| (e.clone(), p.clone())).collect(),
        }
    }

    /// Total Z2 degree `(k - 1) + |coefficient| + #odd factors` of a monomial term.
    pub fn term_total_parity(m: &GradedMonomial, ext: &ExteriorMonomial) -> Parity {
        Parity::of(ext.arity() + 1 + m.odd_count() + ext.odd_count())
    }

    /// Total Z2 degree if every term agrees; zero counts as even.
    pub fn total_parity(&self) -> Option<Parity> {
        let mut it = self.monomial_terms().map(|(_, m, e)| Self::term_total_parity(m, e));
        let first = it.next().unwrap_or(Parity::Even);
        it.all(|p| p == first).then_some(first)
    }

    /// Bidegree if homogeneous in both exterior degree and parity.
    pub fn bidegree(&self) -> Option<Bidegree> {
        let arities = self.arities();
        if arities.len() > 1 {
            return None;
        }
        let k = arities.first().copied().unwrap_or(0);
        let mut it = self.monomial_terms().map(|(_, m, e)| Parity::of(m.odd_count() + e.odd_count()));
        let first = it.next().unwrap_or(Parity::Even);
        if !it.all(|p| p == first) {
            return None;
        }
        Some(Bidegree { exterior_degree: k as i64 - 1, internal_parity: first })
    }

    /// Writes a monomial term in expression syntax.
    fn write_monomial(&self, out: &mut dyn fmt::Write, c: &Rational, m: &GradedMonomial, e: &ExteriorMonomial, lead: bool) -> fmt::Result {
        let sig = &self.sig;
        let has = !m.is_one() || e.arity() > 0;
        let w = |o: &mut dyn fmt::Write| {
            let mut s = String::new();
            m.write(sig, &mut s)?;
            e.write(sig, &mut s, m.is_one())?;
            o.write_str(&s)
        };
        write_term(out, c, &w, has, lead)
    }
}

fn signed_poly(neg: bool, p: GradedPolynomial) -> GradedPolynomial {
    if neg {
        -p
    } else {
        p
    }
}

impl fmt::Display for MultiDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut exts: Vec<&ExteriorMonomial> = self.terms.keys().collect();
        exts.sort_by_cached_key(|e| (e.arity(), e.factors()));
        let mut lead = true;
        for e in exts {
            for (m, c) in self.terms[e].display_terms() {
                self.write_monomial(f, c, m, e, lead)?;
                lead = false;
            }
        }
        Ok(())
    }
}

impl Add<&MultiDerivation> for &MultiDerivation {
    type Output = MultiDerivation;
    fn add(self, rhs: &MultiDerivation) -> MultiDerivation {
        assert!(self.sig == rhs.sig, "signature mismatch");
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub<&MultiDerivation> for &MultiDerivation {
    type Output = MultiDerivation;
    fn sub(self, rhs: &MultiDerivation) -> MultiDerivation {
        assert!(self.sig == rhs.sig, "signature mismatch");
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &MultiDerivation {
    type Output = MultiDerivation;
    fn neg(self) -> MultiDerivation {
        self.scale(&-Rational::one())
    }
}

fn parity_bit(v: Var) -> usize {
    v.parity().bit()
}

/// Bracket of two monomial terms, accumulated into `out` with factor `scale`.
fn bracket_terms(
    out: &mut MultiDerivation,
    (fc, fm, fe): (&Rational, &GradedMonomial, &ExteriorMonomial),
    (gc, gm, ge): (&Rational, &GradedMonomial, &ExteriorMonomial),
    scale: &Rational,
) {
    let sig = out.sig.clone();
    let us = fe.factors();
    let vs = ge.factors();
    let pf = fm.odd_count() % 2;
    let pg = gm.odd_count() % 2;
    let sum_u: usize = us.iter().map(|&u| parity_bit(u)).sum();
    let base = fc * gc * scale;
    let m = us.len();
    let mut prefix = 0usize;
    for (i, &u) in us.iter().enumerate() {
        let pu = parity_bit(u);
        let star = pu * prefix + pg * (sum_u - pu);
        prefix += pu;
        let Some((dc, dm)) = mono_partial(gm, u) else { continue };
        let Some((neg_mul, prod)) = fm.mul(&dm) else { continue };
        let factors: Vec<Var> = us[..i].iter().chain(&us[i + 1..]).chain(&vs).copied().collect();
        let Some((neg_ord, ext)) = ExteriorMonomial::from_factors(&sig, &factors) else { continue };
        let neg = ((m - (i + 1) + star) % 2 == 1) ^ neg_mul ^ neg_ord;
        out.add_monomial(ext, prod, signed(neg, &base * dc));
    }
    let mut prefix = 0usize;
    for (j, &v) in vs.iter().enumerate() {
        let pv = parity_bit(v);
        let star2 = (pf + sum_u) * (pv + pg) + pv * prefix;
        prefix += pv;
        let Some((dc, dm)) = mono_partial(fm, v) else { continue };
        let Some((neg_mul, prod)) = gm.mul(&dm) else { continue };
        let factors: Vec<Var> = us.iter().chain(&vs[..j]).chain(&vs[j + 1..]).copied().collect();
        let Some((neg_ord, ext)) = ExteriorMonomial::from_factors(&sig, &factors) else { continue };
        let neg = ((j + 1 + star2) % 2 == 1) ^ neg_mul ^ neg_ord;
        out.add_monomial(ext, prod, signed(neg, &base * dc));
    }
}

fn bracket_impl(alpha: &MultiDerivation, beta: &MultiDerivation, modified: bool, max_arity: Option<usize>) -> Result<MultiDerivation> {
    alpha.sig.ensure_same(&beta.sig)?;
    let mut out = MultiDerivation::zero(&alpha.sig);
    let one = Rational::one();
    let minus = -Rational::one();
    for a in alpha.monomial_terms() {
        for b in beta.monomial_terms() {
            let (ka, kb) = (a.2.arity(), b.2.arity());
            if ka + kb == 0 {
                continue;
            }
            if max_arity.is_some_and(|mx| ka + kb - 1 > mx) {
                continue;
            }
            let scale = if modified {
                // (-1)^{deg(alpha) |beta|} with deg = k - 1
                let beta_parity = b.1.odd_count() + b.2.odd_count();
                if (ka + 1) * beta_parity % 2 == 1 {
                    &minus
                } else {
                    &one
                }
            } else {
                &one
            };
            bracket_terms(&mut out, a, b, scale);
        }
    }
    Ok(out)
}

/// The graded Schouten bracket `[alpha, beta]`.
pub fn schouten_bracket(alpha: &MultiDerivation, beta: &MultiDerivation) -> Result<MultiDerivation> {
    bracket_impl(alpha, beta, false, None)
}

/// The modified bracket `{alpha, beta} = (-1)^{deg(alpha)|beta|} [alpha, beta]`, termwise.
pub fn modified_bracket(alpha: &MultiDerivation, beta: &MultiDerivation) -> Result<MultiDerivation> {
    bracket_impl(alpha, beta, true, None)
}

/// Modified bracket keeping only results with at most `max_arity` factors.
pub fn modified_bracket_truncated(alpha: &MultiDerivation, beta: &MultiDerivation, max_arity: usize) -> Result<MultiDerivation> {
    bracket_impl(alpha, beta, true, Some(max_arity))
}

/// Koszul sign (`true` = negative) of listing `parities` in the order `perm`.
fn koszul_sign(perm: &[usize], parities: &[usize]) -> bool {
    let mut neg = false;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] {
                // permutation sign and odd/odd exchange
                neg ^= true;
                if parities[perm[a]] == 1 && parities[perm[b]] == 1 {
                    neg ^= true;
                }
            }
        }
    }
    neg
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

fn argument_parities(args: &[GradedPolynomial]) -> Result<Vec<usize>> {
    args.iter().map(|g| g.parity().map(Parity::bit).ok_or(GpError::InhomogeneousArgument)).collect()
}

/// Evaluates a pure-arity multiderivation on homogeneous arguments.
pub fn evaluate(alpha: &MultiDerivation, args: &[GradedPolynomial]) -> Result<GradedPolynomial> {
    let sig = &alpha.sig;
    for a in args {
        sig.ensure_same(a.signature())?;
    }
    let arities = alpha.arities();
    if arities.len() > 1 {
        return Err(GpError::MixedExteriorDegree);
    }
    let k = args.len();
    if let Some(&ka) = arities.first() {
        if ka != k {
            return Err(GpError::ArityMismatch { expected: ka, got: k });
        }
    }
    let parities = argument_parities(args)?;
    let mut out = GradedPolynomial::zero(sig);
    let perms = permutations(k);
    for (ext, f) in &alpha.terms {
        let us = ext.factors();
        let mut inner = GradedPolynomial::zero(sig);
        for perm in &perms {
            let mut neg = koszul_sign(perm, &parities);
            let mut seen = 0usize;
            let mut prod = GradedPolynomial::one(sig);
            for (i, (&u, &s)) in us.iter().zip(perm).enumerate() {
                if i > 0 && u.parity().is_odd() && seen % 2 == 1 {
                    neg = !neg;
                }
                seen += parities[s];
                prod = &prod * &args[s].partial(u)?;
                if prod.is_zero() {
                    break;
                }
            }
            inner.add_scaled(&prod, &signed(neg, Rational::one()));
        }
        out = &out + &(f * &inner);
    }
    Ok(out)
}

/// Unshuffles of type (k, n-k) as index lists.
fn unshuffles(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            let mut perm = cur.clone();
            perm.extend((0..n).filter(|i| !cur.contains(i)));
            out.push(perm);
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// `outer o inner` on `probe`, projected to the algebra.
fn composite(outer: &MultiDerivation, inner: &MultiDerivation, probe: &[GradedPolynomial], parities: &[usize]) -> Result<GradedPolynomial> {
    let sig = &outer.sig;
    let n = probe.len();
    let mut acc = GradedPolynomial::zero(sig);
    let Some(ki) = inner.arities().first().copied() else { return Ok(acc) };
    let Some(ko) = outer.arities().first().copied() else { return Ok(acc) };
    if ki > n || n - ki + 1 != ko {
        return Ok(acc);
    }
    for perm in unshuffles(n, ki) {
        let neg = koszul_sign(&perm, parities);
        let head: Vec<GradedPolynomial> = perm[..ki].iter().map(|&i| probe[i].clone()).collect();
        let h = evaluate(inner, &head)?;
        if h.is_zero() {
            continue;
        }
        let mut word = vec![h];
        word.extend(perm[ki..].iter().map(|&i| probe[i].clone()));
        let v = evaluate(outer, &word)?;
        acc.add_scaled(&v, &signed(neg, Rational::one()));
    }
    Ok(acc)
}

/// Commutator of `alpha` and `beta` as coderivations of the exterior coalgebra,
/// projected to the algebra and applied to `probe`.
///
/// With `d = deg`, `p = |.|` this is
/// `(-1)^{d(alpha)d(beta)} (alpha o beta - (-1)^{d(alpha)d(beta) + p(alpha)p(beta)} beta o alpha)`,
/// which agrees with [`schouten_bracket`] for every pair of homogeneous terms.
pub fn commutator_oracle(alpha: &MultiDerivation, beta: &MultiDerivation, probe: &[GradedPolynomial]) -> Result<GradedPolynomial> {
    alpha.sig.ensure_same(&beta.sig)?;
    let (Some(ba), Some(bb)) = (alpha.bidegree(), beta.bidegree()) else { return Err(GpError::MixedExteriorDegree) };
    let ka = (ba.exterior_degree + 1) as usize;
    let kb = (bb.exterior_degree + 1) as usize;
    let expected = (ka + kb).saturating_sub(1);
    if probe.len() != expected {
        return Err(GpError::ArityMismatch { expected, got: probe.len() });
    }
    let parities = argument_parities(probe)?;
    let ab = composite(alpha, beta, probe, &parities)?;
    let ba_ = composite(beta, alpha, probe, &parities)?;
    let dd = ba.exterior_degree.rem_euclid(2) == 1 && bb.exterior_degree.rem_euclid(2) == 1;
    let pp = ba.internal_parity.is_odd() && bb.internal_parity.is_odd();
    let ab = if dd { -ab } else { ab };
    Ok(&ab - &ba_.scale(&signed(pp, Rational::one())))
}

fn check_odd_codifferential(psi: &MultiDerivation) -> Result<()> {
    if psi.min_arity() == Some(0) {
        return Err(GpError::ZeroCochainTerm);
    }
    if psi.total_parity() != Some(Parity::Odd) && !psi.is_zero() {
        return Err(GpError::NotOdd);
    }
    Ok(())
}

/// Outcome of a codifferential check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodifferentialCheck {
    pub is_codifferential: bool,
    /// `{psi, psi}` truncated at the requested arity.
    pub residual: MultiDerivation,
}

impl CodifferentialCheck {
    /// Lowest-arity nonzero component of the residual.
    pub fn first_residual(&self) -> MultiDerivation {
        match self.residual.min_arity() {
            Some(k) => self.residual.component(k),
            None => self.residual.clone(),
        }
    }
}

/// Tests `{psi, psi} = 0` up to `max_arity` factors.
pub fn is_codifferential(psi: &MultiDerivation, max_arity: usize) -> Result<CodifferentialCheck> {
    check_odd_codifferential(psi)?;
    let residual = modified_bracket_truncated(psi, psi, max_arity)?;
    Ok(CodifferentialCheck { is_codifferential: residual.is_zero(), residual })
}

/// `D(phi) = {psi, phi}`.
pub fn coboundary(psi: &MultiDerivation, phi: &MultiDerivation) -> Result<MultiDerivation> {
    modified_bracket(psi, phi)
}

/// `D(alpha) + 1/2 {alpha, alpha}` truncated at `max_arity`.
pub fn maurer_cartan_residual(psi: &MultiDerivation, alpha: &MultiDerivation, max_arity: usize) -> Result<MultiDerivation> {
    if !alpha.is_zero() && alpha.total_parity() != Some(Parity::Odd) {
        return Err(GpError::NotOdd);
    }
    let d = modified_bracket_truncated(psi, alpha, max_arity)?;
    let sq = modified_bracket_truncated(alpha, alpha, max_arity)?;
    let mut out = d;
    out.add_scaled(&sq, &BigRational::new(1.into(), 2.into()));
    Ok(out.truncate(max_arity))
}

/// Conjugates by the algebra automorphism `f -> f.substitute_linear(sub)`.
pub fn apply_linear_automorphism(psi: &MultiDerivation, sub: &LinearSubstitution) -> Result<MultiDerivation> {
    let sig = psi.sig.clone();
    sig.ensure_same(sub.signature())?;
    let inv = sub.inverse();
    let image = |u: Var| -> Vec<(Rational, Var)> {
        match u {
            Var::Even(i) => (0..sig.even())
                .map(|j| (sub.even_linear().get(j, i).clone(), Var::Even(j)))
                .filter(|(c, _)| !c.is_zero())
                .collect(),
            Var::Odd(i) => (0..sig.odd())
                .map(|j| (sub.odd_linear().get(j, i).clone(), Var::Odd(j)))
                .filter(|(c, _)| !c.is_zero())
                .collect(),
        }
    };
    let mut out = MultiDerivation::zero(&sig);
    for (ext, f) in &psi.terms {
        let coeff = f.substitute_linear(&inv)?;
        let mut partial: Vec<(Rational, Vec<Var>)> = vec![(Rational::one(), Vec::new())];
        for u in ext.factors() {
            let img = image(u);
            let mut next = Vec::with_capacity(partial.len() * img.len());
            for (c, fs) in &partial {
                for (d, v) in &img {
                    let mut g = fs.clone();
                    g.push(*v);
                    next.push((c * d, g));
                }
            }
            partial = next;
        }
        for (c, fs) in partial {
            let Some((neg, e)) = ExteriorMonomial::from_factors(&sig, &fs) else { continue };
            let k = signed(neg, c);
            for (m, v) in coeff.terms() {
                out.add_monomial(e.clone(), m.clone(), v * &k);
            }
        }
    }
    Ok(out)
}

/// `exp(phi)^*(psi) = psi + {psi,phi} + 1/2 {{psi,phi},phi} + ...` up to `max_arity`.
pub fn apply_higher_automorphism(psi: &MultiDerivation, phi: &MultiDerivation, max_arity: usize) -> Result<MultiDerivation> {
    psi.sig.ensure_same(&phi.sig)?;
    if phi.min_arity().is_some_and(|k| k < 2) {
        return Err(GpError::LowOrderGenerator);
    }
    if !phi.is_zero() && phi.total_parity() != Some(Parity::Even) {
        return Err(GpError::NotEven);
    }
    let mut out = psi.truncate(max_arity);
    let mut term = out.clone();
    let mut j = 1i64;
    while !term.is_zero() {
        term = modified_bracket_truncated(&term, phi, max_arity)?.scale(&BigRational::new(1.into(), j.into()));
        out = &out + &term;
        j += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig01() -> AlgebraSignature {
        AlgebraSignature::new(0, 1).unwrap()
    }

    fn dth_pow(sig: &AlgebraSignature, k: usize, with_theta: bool) -> MultiDerivation {
        let coef = if with_theta { GradedPolynomial::var(sig, Var::Odd(0)).unwrap() } else { GradedPolynomial::one(sig) };
        MultiDerivation::from_factors(coef, &vec![Var::Odd(0); k]).unwrap()
    }

    #[test]
    fn zero_one_tables() {
        let s = sig01();
        for m in 1..=4 {
            for n in 1..=4 {
                let (pm, pn) = (dth_pow(&s, m, false), dth_pow(&s, n, false));
                let (fm, fn_) = (dth_pow(&s, m, true), dth_pow(&s, n, true));
                assert!(schouten_bracket(&pm, &pn).unwrap().is_zero());
                assert_eq!(schouten_bracket(&pm, &fn_).unwrap(), dth_pow(&s, m + n - 1, false).scale(&rat(m as i64)));
                assert_eq!(
                    schouten_bracket(&fm, &fn_).unwrap(),
                    dth_pow(&s, m + n - 1, true).scale(&rat(m as i64 - n as i64))
                );
            }
        }
    }

    #[test]
    fn canonical_order_signs() {
        let s = AlgebraSignature::new(2, 1).unwrap();
        let (a, e1) = ExteriorMonomial::from_factors(&s, &[Var::Even(1), Var::Even(0)]).unwrap();
        let (b, e2) = ExteriorMonomial::from_factors(&s, &[Var::Even(0), Var::Even(1)]).unwrap();
        assert!(a && !b && e1 == e2);
        let (c, _) = ExteriorMonomial::from_factors(&s, &[Var::Odd(0), Var::Even(0)]).unwrap();
        assert!(c);
        assert!(ExteriorMonomial::from_factors(&s, &[Var::Even(0), Var::Even(0)]).is_none());
        let (d, e) = ExteriorMonomial::from_factors(&s, &[Var::Odd(0), Var::Odd(0)]).unwrap();
        assert!(!d && e.arity() == 2);
    }

    #[test]
    fn evaluate_simple() {
        let s = sig01();
        let th = GradedPolynomial::var(&s, Var::Odd(0)).unwrap();
        assert_eq!(evaluate(&dth_pow(&s, 1, false), &[th]).unwrap(), GradedPolynomial::one(&s));
    }

    #[test]
    fn evaluate_two_even_derivations() {
        let s = AlgebraSignature::new(2, 0).unwrap();
        let x = GradedPolynomial::var(&s, Var::Even(0)).unwrap();
        let y = GradedPolynomial::var(&s, Var::Even(1)).unwrap();
        let alpha = MultiDerivation::from_factors(&x * &x, &[Var::Even(0), Var::Even(1)]).unwrap();
        let g = &x * &y;
        let h = &y * &y;
        let want = &(&x * &x) * &(&(&g.partial(Var::Even(0)).unwrap() * &h.partial(Var::Even(1)).unwrap())
            - &(&g.partial(Var::Even(1)).unwrap() * &h.partial(Var::Even(0)).unwrap()));
        assert_eq!(evaluate(&alpha, &[g, h]).unwrap(), want);
    }

    #[test]
    fn display_round_shape() {
        let s = AlgebraSignature::new(1, 1).unwrap();
        let x = GradedPolynomial::var(&s, Var::Even(0)).unwrap();
        let psi = MultiDerivation::from_factors(&x * &x, &[Var::Odd(0)]).unwrap();
        assert_eq!(psi.to_string(), "x^2*Dth");
        let c = MultiDerivation::from_factors(GradedPolynomial::constant(&s, rat(-3)), &[Var::Odd(0), Var::Even(0)]).unwrap();
        assert_eq!(c.to_string(), "3*Dx*Dth");
    }
}
