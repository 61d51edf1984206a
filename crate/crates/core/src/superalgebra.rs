//! The Z2-graded commutative polynomial algebra K[x_1..x_m, th_1..th_n] over Q.
//!
//! Odd generators are stored as a bit mask in ascending index order; any sign
//! produced by reordering is folded into the coefficient.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{GpError, Result};
use crate::linalg::{self, Matrix};
use crate::univariate::UniPoly;

pub type Rational = BigRational;

/// Maximum number of odd generators (odd monomials live in a `u64` mask).
pub const MAX_ODD: usize = 64;

pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(count: usize) -> Parity {
        if count.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn bit(self) -> usize {
        self as usize
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::of(self.bit() + rhs.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A generator of the algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Even(usize),
    Odd(usize),
}

impl Var {
    pub fn parity(self) -> Parity {
        match self {
            Var::Even(_) => Parity::Even,
            Var::Odd(_) => Parity::Odd,
        }
    }
}

/// Dimension m|n of the generating space together with display names.
#[derive(Debug, Clone)]
pub struct AlgebraSignature {
    even: usize,
    odd: usize,
    names: Arc<[String]>,
}

impl PartialEq for AlgebraSignature {
    fn eq(&self, other: &Self) -> bool {
        self.even == other.even
            && self.odd == other.odd
            && (Arc::ptr_eq(&self.names, &other.names) || self.names == other.names)
    }
}

impl Eq for AlgebraSignature {}

fn default_names(even: usize, odd: usize) -> Vec<String> {
    let mut names: Vec<String> = if even <= 3 {
        ["x", "y", "z"][..even].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=even).map(|i| format!("x{i}")).collect()
    };
    if odd == 1 {
        names.push("th".into());
    } else {
        names.extend((1..=odd).map(|j| format!("th{j}")));
    }
    names
}

impl AlgebraSignature {
    /// Signature with the default names (x, y, z or x1.. ; th or th1..).
    pub fn new(even: usize, odd: usize) -> Result<Self> {
        Self::with_names(even, odd, default_names(even, odd))
    }

    pub fn with_names(even: usize, odd: usize, names: Vec<String>) -> Result<Self> {
        if odd > MAX_ODD {
            return Err(GpError::InvalidSignature(format!("at most {MAX_ODD} odd variables supported")));
        }
        if names.len() != even + odd {
            return Err(GpError::InvalidSignature(format!("expected {} names, got {}", even + odd, names.len())));
        }
        for (i, a) in names.iter().enumerate() {
            if a.is_empty() {
                return Err(GpError::InvalidSignature("empty variable name".into()));
            }
            if names[..i].contains(a) {
                return Err(GpError::InvalidSignature(format!("duplicate variable name {a}")));
            }
        }
        Ok(AlgebraSignature { even, odd, names: names.into() })
    }

    pub fn even(&self) -> usize {
        self.even
    }

    pub fn odd(&self) -> usize {
        self.odd
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: Var) -> &str {
        match v {
            Var::Even(i) => &self.names[i],
            Var::Odd(j) => &self.names[self.even + j],
        }
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        let k = self.names.iter().position(|n| n == name)?;
        Some(if k < self.even { Var::Even(k) } else { Var::Odd(k - self.even) })
    }

    pub fn check_var(&self, v: Var) -> Result<()> {
        match v {
            Var::Even(i) if i < self.even => Ok(()),
            Var::Odd(j) if j < self.odd => Ok(()),
            Var::Even(i) => Err(GpError::UnknownVariable(i)),
            Var::Odd(j) => Err(GpError::UnknownVariable(self.even + j)),
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (0..self.even).map(Var::Even).chain((0..self.odd).map(Var::Odd))
    }

    pub(crate) fn ensure_same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(GpError::SignatureMismatch { left: self.to_string(), right: other.to_string() })
        }
    }
}

impl fmt::Display for AlgebraSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.even, self.odd)
    }
}

/// Number of set bits of `mask` strictly above bit `j`.
pub(crate) fn bits_above(mask: u64, j: usize) -> u32 {
    if j >= 63 {
        0
    } else {
        (mask >> (j + 1)).count_ones()
    }
}

pub(crate) fn bits_below(mask: u64, j: usize) -> u32 {
    (mask & ((1u64 << j) - 1)).count_ones()
}

/// `x^e * th_mask` with odd factors in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedMonomial {
    even_exponents: Vec<u32>,
    odd_mask: u64,
}

impl GradedMonomial {
    pub fn one(sig: &AlgebraSignature) -> Self {
        GradedMonomial { even_exponents: vec![0; sig.even()], odd_mask: 0 }
    }

    pub fn new(even_exponents: Vec<u32>, odd_mask: u64) -> Self {
        GradedMonomial { even_exponents, odd_mask }
    }

    pub fn even_exponents(&self) -> &[u32] {
        &self.even_exponents
    }

    pub fn odd_mask(&self) -> u64 {
        self.odd_mask
    }

    pub fn odd_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..64).filter(move |j| self.odd_mask >> j & 1 == 1)
    }

    pub fn odd_count(&self) -> usize {
        self.odd_mask.count_ones() as usize
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.odd_count())
    }

    /// Total degree in the even variables.
    pub fn even_degree(&self) -> u32 {
        self.even_exponents.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.odd_mask == 0 && self.even_exponents.iter().all(|&e| e == 0)
    }

    /// Product with its reordering sign (`true` = negative), or `None` if an odd factor repeats.
    pub fn mul(&self, other: &Self) -> Option<(bool, GradedMonomial)> {
        if self.odd_mask & other.odd_mask != 0 {
            return None;
        }
        let mut swaps = 0u32;
        let mut rest = other.odd_mask;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            swaps += bits_above(self.odd_mask, j);
            rest &= rest - 1;
        }
        let even_exponents = self.even_exponents.iter().zip(&other.even_exponents).map(|(a, b)| a + b).collect();
        Some((swaps % 2 == 1, GradedMonomial { even_exponents, odd_mask: self.odd_mask | other.odd_mask }))
    }

    /// Whether `other` divides `self` (odd part as a subset).
    pub fn divides(&self, other: &Self) -> bool {
        self.odd_mask & !other.odd_mask == 0
            && self.even_exponents.iter().zip(&other.even_exponents).all(|(a, b)| a <= b)
    }

    /// Graded lexicographic comparison on the even part, then the odd mask.
    pub fn grlex_cmp(&self, other: &Self) -> Ordering {
        self.even_degree()
            .cmp(&other.even_degree())
            .then_with(|| self.even_exponents.cmp(&other.even_exponents))
            .then_with(|| self.odd_count().cmp(&other.odd_count()))
            .then_with(|| other.odd_mask.cmp(&self.odd_mask))
    }

    pub(crate) fn write(&self, sig: &AlgebraSignature, f: &mut impl fmt::Write) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut dyn fmt::Write| -> fmt::Result {
            if !first {
                f.write_char('*')?;
            }
            first = false;
            Ok(())
        };
        for (i, &e) in self.even_exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            sep(f)?;
            f.write_str(sig.name(Var::Even(i)))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        for j in self.odd_indices() {
            sep(f)?;
            f.write_str(sig.name(Var::Odd(j)))?;
        }
        Ok(())
    }
}

/// An element of K[x | th] with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPolynomial {
    sig: AlgebraSignature,
    terms: BTreeMap<GradedMonomial, Rational>,
}

impl GradedPolynomial {
    pub fn zero(sig: &AlgebraSignature) -> Self {
        GradedPolynomial { sig: sig.clone(), terms: BTreeMap::new() }
    }

    pub fn one(sig: &AlgebraSignature) -> Self {
        Self::constant(sig, Rational::one())
    }

    pub fn constant(sig: &AlgebraSignature, c: Rational) -> Self {
        Self::monomial(sig, GradedMonomial::one(sig), c)
    }

    pub fn monomial(sig: &AlgebraSignature, m: GradedMonomial, c: Rational) -> Self {
        let mut p = Self::zero(sig);
        p.add_term(m, c);
        p
    }

    pub fn var(sig: &AlgebraSignature, v: Var) -> Result<Self> {
        sig.check_var(v)?;
        let mut m = GradedMonomial::one(sig);
        match v {
            Var::Even(i) => m.even_exponents[i] = 1,
            Var::Odd(j) => m.odd_mask = 1 << j,
        }
        Ok(Self::monomial(sig, m, Rational::one()))
    }

    /// Collects terms, merging repeated monomials.
    pub fn from_terms(sig: &AlgebraSignature, terms: impl IntoIterator<Item = (GradedMonomial, Rational)>) -> Self {
        let mut p = Self::zero(sig);
        for (m, c) in terms {
            assert_eq!(m.even_exponents.len(), sig.even(), "monomial does not fit the signature");
            p.add_term(m, c);
        }
        p
    }

    pub fn signature(&self) -> &AlgebraSignature {
        &self.sig
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GradedMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &GradedMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub(crate) fn add_term(&mut self, m: GradedMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub(crate) fn add_scaled(&mut self, other: &Self, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.sig);
        }
        GradedPolynomial { sig: self.sig.clone(), terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// Parity if all terms agree, `None` if inhomogeneous. Zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(GradedMonomial::parity);
        let first = it.next().unwrap_or(Parity::Even);
        it.all(|p| p == first).then_some(first)
    }

    /// Splits into (even part, odd part).
    pub fn split_parity(&self) -> (Self, Self) {
        let (mut even, mut odd) = (Self::zero(&self.sig), Self::zero(&self.sig));
        for (m, c) in &self.terms {
            let target = if m.parity().is_odd() { &mut odd } else { &mut even };
            target.terms.insert(m.clone(), c.clone());
        }
        (even, odd)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(GradedMonomial::is_one)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&GradedMonomial::one(&self.sig))
    }

    /// Whether no odd generator occurs.
    pub fn is_even_only(&self) -> bool {
        self.terms.keys().all(|m| m.odd_mask == 0)
    }

    /// Largest even degree among the terms, `None` for zero.
    pub fn even_degree(&self) -> Option<u32> {
        self.terms.keys().map(GradedMonomial::even_degree).max()
    }

    pub fn min_even_degree(&self) -> Option<u32> {
        self.terms.keys().map(GradedMonomial::even_degree).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.even_degree() == self.min_even_degree()
    }

    /// Components keyed by even degree.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, Self> {
        let mut out: BTreeMap<u32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.even_degree()).or_insert_with(|| Self::zero(&self.sig)).terms.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.sig.ensure_same(&other.sig)?;
        let mut out = Self::zero(&self.sig);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((neg, m)) = ma.mul(mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(&self.sig), |acc, _| &acc * self)
    }

    /// Left derivative along a generator (`d/dth` passes odd factors with a sign).
    pub fn partial(&self, v: Var) -> Result<Self> {
        self.sig.check_var(v)?;
        let mut out = Self::zero(&self.sig);
        for (m, c) in &self.terms {
            match v {
                Var::Even(i) => {
                    let e = m.even_exponents[i];
                    if e == 0 {
                        continue;
                    }
                    let mut n = m.clone();
                    n.even_exponents[i] -= 1;
                    out.add_term(n, c * rat(e as i64));
                }
                Var::Odd(j) => {
                    if m.odd_mask >> j & 1 == 0 {
                        continue;
                    }
                    let mut n = m.clone();
                    n.odd_mask &= !(1 << j);
                    let neg = bits_below(m.odd_mask, j) % 2 == 1;
                    out.add_term(n, if neg { -c.clone() } else { c.clone() });
                }
            }
        }
        Ok(out)
    }

    /// Image under the algebra homomorphism defined by a linear substitution.
    pub fn substitute_linear(&self, sub: &LinearSubstitution) -> Result<Self> {
        self.sig.ensure_same(&sub.sig)?;
        let sig = &self.sig;
        let even_images: Vec<Self> = (0..sig.even()).map(|i| sub.even_image(i)).collect();
        let odd_images: Vec<Self> = (0..sig.odd()).map(|j| sub.odd_image(j)).collect();
        let mut powers: Vec<Vec<Self>> = even_images.iter().map(|p| vec![Self::one(sig), p.clone()]).collect();
        let mut out = Self::zero(sig);
        for (m, c) in &self.terms {
            let mut acc = Self::constant(sig, c.clone());
            for (i, &e) in m.even_exponents.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &even_images[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    acc = &acc * &powers[i][e as usize];
                }
            }
            for j in m.odd_indices() {
                acc = &acc * &odd_images[j];
            }
            out.add_scaled(&acc, &Rational::one());
        }
        Ok(out)
    }

    /// Univariate view: the even variable used (if any) and the dense coefficients.
    pub fn to_univariate(&self) -> Result<(Option<usize>, UniPoly)> {
        let mut var = None;
        for m in self.terms.keys() {
            if m.odd_mask != 0 {
                return Err(GpError::Multivariate);
            }
            for (i, &e) in m.even_exponents.iter().enumerate() {
                if e > 0 {
                    match var {
                        None => var = Some(i),
                        Some(v) if v == i => {}
                        Some(_) => return Err(GpError::Multivariate),
                    }
                }
            }
        }
        let mut coeffs = Vec::new();
        for (m, c) in &self.terms {
            let k = var.map_or(0, |i| m.even_exponents[i] as usize);
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rational::zero());
            }
            coeffs[k] = c.clone();
        }
        Ok((var, UniPoly::new(coeffs)))
    }

    pub fn from_univariate(sig: &AlgebraSignature, var: usize, p: &UniPoly) -> Result<Self> {
        sig.check_var(Var::Even(var))?;
        let mut out = Self::zero(sig);
        for (k, c) in p.coeffs().iter().enumerate() {
            let mut m = GradedMonomial::one(sig);
            m.even_exponents[var] = k as u32;
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    /// Leading term under [`GradedMonomial::grlex_cmp`].
    pub fn leading_term(&self) -> Option<(&GradedMonomial, &Rational)> {
        self.terms.iter().max_by(|a, b| a.0.grlex_cmp(b.0))
    }

    /// Exact quotient by an odd-free divisor, or `None` if it does not divide.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (dm, dc) = divisor.leading_term()?;
        if !divisor.is_even_only() {
            return None;
        }
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.sig);
        while let Some((lm, lc)) = rem.leading_term() {
            if !dm.divides(lm) {
                return None;
            }
            let qm = GradedMonomial {
                even_exponents: lm.even_exponents.iter().zip(&dm.even_exponents).map(|(a, b)| a - b).collect(),
                odd_mask: lm.odd_mask,
            };
            let qc = lc / &dc;
            let step = Self::monomial(&self.sig, qm, qc);
            rem = &rem - &(&step * divisor);
            quot = &quot + &step;
        }
        Some(quot)
    }

    /// Terms sorted for display: highest grlex first.
    pub(crate) fn display_terms(&self) -> Vec<(&GradedMonomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.grlex_cmp(a.0));
        v
    }
}

/// Writes `c*mono` in expression syntax; `lead` controls the sign separator.
pub(crate) fn write_term(
    f: &mut dyn fmt::Write,
    c: &Rational,
    mono: &dyn Fn(&mut dyn fmt::Write) -> fmt::Result,
    has_factors: bool,
    lead: bool,
) -> fmt::Result {
    let neg = c.is_negative();
    match (lead, neg) {
        (true, true) => f.write_str("-")?,
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
        (true, false) => {}
    }
    let a = c.abs();
    if !has_factors {
        return write!(f, "{a}");
    }
    if !a.is_one() {
        write!(f, "{a}*")?;
    }
    mono(f)
}

impl fmt::Display for GradedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.display_terms().into_iter().enumerate() {
            let w = |out: &mut dyn fmt::Write| {
                let mut s = String::new();
                m.write(&self.sig, &mut s)?;
                out.write_str(&s)
            };
            write_term(f, c, &w, !m.is_one(), k == 0)?;
        }
        Ok(())
    }
}

/// Graded product; errors on signature mismatch.
pub fn poly_mul(a: &GradedPolynomial, b: &GradedPolynomial) -> Result<GradedPolynomial> {
    a.try_mul(b)
}

/// Monic gcd of two polynomials in the same single even variable.
pub fn gcd_univariate(a: &GradedPolynomial, b: &GradedPolynomial) -> Result<GradedPolynomial> {
    a.sig.ensure_same(&b.sig)?;
    let (va, pa) = a.to_univariate()?;
    let (vb, pb) = b.to_univariate()?;
    let var = match (va, vb) {
        (Some(i), Some(j)) if i != j => return Err(GpError::Multivariate),
        (Some(i), _) | (None, Some(i)) => i,
        (None, None) => {
            if a.sig.even() == 0 {
                let g = pa.gcd(&pb);
                return Ok(GradedPolynomial::constant(&a.sig, g.coeff(0)));
            }
            0
        }
    };
    GradedPolynomial::from_univariate(&a.sig, var, &pa.gcd(&pb))
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&GradedPolynomial> for &GradedPolynomial {
            type Output = GradedPolynomial;
            fn $method(self, rhs: &GradedPolynomial) -> GradedPolynomial {
                assert!(self.sig == rhs.sig, "signature mismatch: {} vs {}", self.sig, rhs.sig);
                let f: fn(&GradedPolynomial, &GradedPolynomial) -> GradedPolynomial = $body;
                f(self, rhs)
            }
        }
        impl $tr<GradedPolynomial> for GradedPolynomial {
            type Output = GradedPolynomial;
            fn $method(self, rhs: GradedPolynomial) -> GradedPolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| {
    let mut out = a.clone();
    out.add_scaled(b, &Rational::one());
    out
});
forward_binop!(Sub, sub, |a, b| {
    let mut out = a.clone();
    out.add_scaled(b, &-Rational::one());
    out
});
forward_binop!(Mul, mul, |a, b| a.try_mul(b).expect("signatures checked"));

impl Neg for &GradedPolynomial {
    type Output = GradedPolynomial;
    fn neg(self) -> GradedPolynomial {
        self.scale(&-Rational::one())
    }
}

impl Neg for GradedPolynomial {
    type Output = GradedPolynomial;
    fn neg(self) -> GradedPolynomial {
        -&self
    }
}

/// Invertible affine change of generators:
/// `x_i -> sum_j A[i][j] x_j + B[i]`, `th_i -> sum_j C[i][j] th_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSubstitution {
    sig: AlgebraSignature,
    even_linear: Matrix,
    even_shift: Vec<Rational>,
    odd_linear: Matrix,
}

impl LinearSubstitution {
    pub fn new(sig: &AlgebraSignature, even_linear: Matrix, even_shift: Vec<Rational>, odd_linear: Matrix) -> Result<Self> {
        let (m, n) = (sig.even(), sig.odd());
        if even_linear.rows() != m || even_linear.cols() != m || even_shift.len() != m {
            return Err(GpError::InvalidSignature(format!("even map must be {m}x{m} with a shift of length {m}")));
        }
        if odd_linear.rows() != n || odd_linear.cols() != n {
            return Err(GpError::InvalidSignature(format!("odd map must be {n}x{n}")));
        }
        if linalg::determinant(&even_linear).is_zero() || linalg::determinant(&odd_linear).is_zero() {
            return Err(GpError::NonInvertible);
        }
        Ok(LinearSubstitution { sig: sig.clone(), even_linear, even_shift, odd_linear })
    }

    pub fn identity(sig: &AlgebraSignature) -> Self {
        LinearSubstitution {
            sig: sig.clone(),
            even_linear: Matrix::identity(sig.even()),
            even_shift: vec![Rational::zero(); sig.even()],
            odd_linear: Matrix::identity(sig.odd()),
        }
    }

    /// One even and one odd variable: `x -> a x + b`, `th -> c th`.
    pub fn scalar(sig: &AlgebraSignature, a: Rational, b: Rational, c: Rational) -> Result<Self> {
        let even = Matrix::from_rows(vec![vec![a]], 1);
        let odd = Matrix::from_rows(vec![vec![c]], 1);
        Self::new(sig, even, vec![b], odd)
    }

    pub fn signature(&self) -> &AlgebraSignature {
        &self.sig
    }

    pub fn even_linear(&self) -> &Matrix {
        &self.even_linear
    }

    pub fn even_shift(&self) -> &[Rational] {
        &self.even_shift
    }

    pub fn odd_linear(&self) -> &Matrix {
        &self.odd_linear
    }

    pub fn even_image(&self, i: usize) -> GradedPolynomial {
        let sig = &self.sig;
        let mut p = GradedPolynomial::constant(sig, self.even_shift[i].clone());
        for j in 0..sig.even() {
            let mut m = GradedMonomial::one(sig);
            m.even_exponents[j] = 1;
            p.add_term(m, self.even_linear.get(i, j).clone());
        }
        p
    }

    pub fn odd_image(&self, i: usize) -> GradedPolynomial {
        let sig = &self.sig;
        let mut p = GradedPolynomial::zero(sig);
        for j in 0..sig.odd() {
            let mut m = GradedMonomial::one(sig);
            m.odd_mask = 1 << j;
            p.add_term(m, self.odd_linear.get(i, j).clone());
        }
        p
    }

    /// The substitution that applies `self` first and then `next`:
    /// `f.substitute(self.then(next)) == f.substitute(self).substitute(next)`.
    pub fn then(&self, next: &Self) -> Self {
        let even_linear = self.even_linear.mul(&next.even_linear);
        let even_shift = self
            .even_linear
            .mul_vec(&next.even_shift)
            .into_iter()
            .zip(&self.even_shift)
            .map(|(a, b)| a + b)
            .collect();
        LinearSubstitution {
            sig: self.sig.clone(),
            even_linear,
            even_shift,
            odd_linear: self.odd_linear.mul(&next.odd_linear),
        }
    }

    pub fn inverse(&self) -> Self {
        let a = linalg::inverse(&self.even_linear).expect("validated invertible");
        let c = linalg::inverse(&self.odd_linear).expect("validated invertible");
        let shift = a.mul_vec(&self.even_shift).into_iter().map(|v| -v).collect();
        LinearSubstitution { sig: self.sig.clone(), even_linear: a, even_shift: shift, odd_linear: c }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(m: usize, n: usize) -> AlgebraSignature {
        AlgebraSignature::new(m, n).unwrap()
    }

    fn v(s: &AlgebraSignature, name: &str) -> GradedPolynomial {
        GradedPolynomial::var(s, s.lookup(name).unwrap()).unwrap()
    }

    #[test]
    fn odd_square_vanishes() {
        let s = sig(1, 1);
        let th = v(&s, "th");
        assert!((&th * &th).is_zero());
    }

    #[test]
    fn odd_generators_anticommute() {
        let s = sig(0, 2);
        let (a, b) = (v(&s, "th1"), v(&s, "th2"));
        assert_eq!(&a * &b, -(&b * &a));
    }

    #[test]
    fn sum_times_difference() {
        let s = sig(1, 1);
        let (x, th) = (v(&s, "x"), v(&s, "th"));
        assert_eq!(&(&x + &th) * &(&x - &th), &x * &x);
    }

    #[test]
    fn parity_classification() {
        let s = sig(2, 1);
        let (x, y, th) = (v(&s, "x"), v(&s, "y"), v(&s, "th"));
        assert_eq!((&(&x * &x) * &y).parity(), Some(Parity::Even));
        assert_eq!((&x * &th).parity(), Some(Parity::Odd));
        assert_eq!((&x + &th).parity(), None);
    }

    #[test]
    fn left_derivatives() {
        let s = sig(1, 2);
        let (x, t1, t2) = (v(&s, "x"), v(&s, "th1"), v(&s, "th2"));
        assert_eq!((&x * &x).partial(Var::Even(0)).unwrap(), x.scale(&rat(2)));
        assert_eq!((&x * &t1).partial(Var::Odd(0)).unwrap(), x);
        assert_eq!((&t1 * &t2).partial(Var::Odd(1)).unwrap(), -t1.clone());
        assert!(x.partial(Var::Odd(5)).is_err());
    }

    #[test]
    fn shift_substitution() {
        let s = sig(1, 1);
        let x = v(&s, "x");
        let sub = LinearSubstitution::scalar(&s, rat(1), rat(1), rat(1)).unwrap();
        let got = (&x * &x).substitute_linear(&sub).unwrap();
        assert_eq!(got, &(&(&x * &x) + &x.scale(&rat(2))) + &GradedPolynomial::one(&s));
        let id = LinearSubstitution::identity(&s);
        assert_eq!(x.substitute_linear(&id).unwrap(), x);
        assert_eq!(LinearSubstitution::scalar(&s, rat(0), rat(1), rat(1)), Err(GpError::NonInvertible));
    }

    #[test]
    fn univariate_gcds() {
        let s = sig(1, 0);
        let x = v(&s, "x");
        let x2 = &x * &x;
        let x3 = &x2 * &x;
        assert_eq!(gcd_univariate(&x2, &x.scale(&rat(2))).unwrap(), x);
        assert_eq!(gcd_univariate(&x3, &x2.scale(&rat(3))).unwrap(), x2);
        let f = x2.scale(&rat(3));
        assert_eq!(gcd_univariate(&f, &GradedPolynomial::zero(&s)).unwrap(), x2);
        let s2 = sig(2, 0);
        assert_eq!(gcd_univariate(&v(&s2, "x"), &v(&s2, "y")), Err(GpError::Multivariate));
    }

    #[test]
    fn exact_division() {
        let s = sig(2, 0);
        let (x, y) = (v(&s, "x"), v(&s, "y"));
        let a = &(&x * &x) + &(&y * &x).scale(&rat(3));
        let b = &x - &y;
        assert_eq!((&a * &b).div_exact(&b).unwrap(), a);
        assert!(a.div_exact(&b).is_none());
    }

    #[test]
    fn display_uses_expression_syntax() {
        let s = sig(1, 1);
        let (x, th) = (v(&s, "x"), v(&s, "th"));
        let p = &(&(&x * &x).scale(&ratio(3, 2)) - &(&x * &th)) + &GradedPolynomial::constant(&s, rat(-1));
        assert_eq!(p.to_string(), "3/2*x^2 - x*th - 1");
    }
}
