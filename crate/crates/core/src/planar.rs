//! Calculus on the polynomial plane `K[x,y]`: gradients, divergence, the cross
//! product, exactness of the de Rham and Koszul complexes, and the Milnor
//! algebra of a square-free binary form.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{GpError, Result};
use crate::linalg::{self, Matrix};
use crate::superalgebra::{AlgebraSignature, GradedMonomial, GradedPolynomial, Rational, Var};

const X: Var = Var::Even(0);
const Y: Var = Var::Even(1);

/// The signature `2|0` of `K[x,y]`.
pub fn plane() -> AlgebraSignature {
    AlgebraSignature::new(2, 0).expect("valid signature")
}

fn check_plane(f: &GradedPolynomial) -> Result<()> {
    let sig = f.signature();
    if sig.even() != 2 || sig.odd() != 0 {
        return Err(GpError::InvalidSignature(format!("expected a 2|0 polynomial, got {sig}")));
    }
    Ok(())
}

fn dx(f: &GradedPolynomial) -> GradedPolynomial {
    f.partial(X).expect("plane variable")
}

fn dy(f: &GradedPolynomial) -> GradedPolynomial {
    f.partial(Y).expect("plane variable")
}

fn xvar(sig: &AlgebraSignature) -> GradedPolynomial {
    GradedPolynomial::var(sig, X).expect("plane variable")
}

fn yvar(sig: &AlgebraSignature) -> GradedPolynomial {
    GradedPolynomial::var(sig, Y).expect("plane variable")
}

/// Monomials `x^(t-i) y^i`, `i = 0..=t`, in grlex order with `x > y`.
fn monomials_of_degree(t: u32) -> Vec<GradedMonomial> {
    (0..=t).map(|i| GradedMonomial::new(vec![t - i, i], 0)).collect()
}

fn coords(f: &GradedPolynomial, t: u32) -> Vec<Rational> {
    monomials_of_degree(t).iter().map(|m| f.coefficient(m)).collect()
}

/// A vector field `(f, g)` on the plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarField(pub GradedPolynomial, pub GradedPolynomial);

impl PlanarField {
    pub fn new(f: GradedPolynomial, g: GradedPolynomial) -> Result<Self> {
        check_plane(&f)?;
        check_plane(&g)?;
        Ok(PlanarField(f, g))
    }

    pub fn zero() -> Self {
        let s = plane();
        PlanarField(GradedPolynomial::zero(&s), GradedPolynomial::zero(&s))
    }

    /// The field `(y, -x)`.
    pub fn euler() -> Self {
        let s = plane();
        PlanarField(yvar(&s), -&xvar(&s))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero() && self.1.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PlanarField(self.0.scale(c), self.1.scale(c))
    }

    pub fn mul_poly(&self, a: &GradedPolynomial) -> Self {
        PlanarField(a * &self.0, a * &self.1)
    }

    pub fn add(&self, other: &Self) -> Self {
        PlanarField(&self.0 + &other.0, &self.1 + &other.1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        PlanarField(&self.0 - &other.0, &self.1 - &other.1)
    }

    pub fn is_homogeneous(&self) -> bool {
        match (self.0.is_zero(), self.1.is_zero()) {
            (true, true) => true,
            (false, true) => self.0.is_homogeneous(),
            (true, false) => self.1.is_homogeneous(),
            (false, false) => {
                self.0.is_homogeneous() && self.1.is_homogeneous() && self.0.even_degree() == self.1.even_degree()
            }
        }
    }
}

impl fmt::Display for PlanarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

pub fn grad(f: &GradedPolynomial) -> PlanarField {
    PlanarField(dx(f), dy(f))
}

/// `Div(f, g) = g_x - f_y`.
pub fn div(field: &PlanarField) -> GradedPolynomial {
    &dx(&field.1) - &dy(&field.0)
}

/// `(f, g) x (h, k) = f k - g h`.
pub fn cross(a: &PlanarField, b: &PlanarField) -> GradedPolynomial {
    &(&a.0 * &b.1) - &(&a.1 * &b.0)
}

/// The constant-free `h` with `grad h = field`.
pub fn gradient_potential(field: &PlanarField) -> Result<GradedPolynomial> {
    check_plane(&field.0)?;
    check_plane(&field.1)?;
    if !div(field).is_zero() {
        return Err(GpError::Precondition("field has nonzero divergence".into()));
    }
    let s = plane();
    let (x, y) = (xvar(&s), yvar(&s));
    let euler = &(&x * &field.0) + &(&y * &field.1);
    let mut h = GradedPolynomial::zero(&s);
    for (deg, part) in euler.homogeneous_components() {
        // x f_n + y g_n has degree n + 1
        h = &h + &part.scale(&Rational::new(1.into(), (deg as i64).into()));
    }
    Ok(h)
}

/// `a` with `field = a grad b`, for square-free homogeneous `b` and `field x grad b = 0`.
pub fn koszul_divide(field: &PlanarField, b: &GradedPolynomial) -> Result<GradedPolynomial> {
    validate_form(b)?;
    let gb = grad(b);
    if !cross(field, &gb).is_zero() {
        return Err(GpError::Precondition("field is not parallel to grad b".into()));
    }
    let a = if !gb.0.is_zero() { field.0.div_exact(&gb.0) } else { field.1.div_exact(&gb.1) };
    let a = a.ok_or_else(|| GpError::Precondition("exact division failed".into()))?;
    if gb.mul_poly(&a) != *field {
        return Err(GpError::Precondition("exact division failed".into()));
    }
    Ok(a)
}

/// Resultant of two binary forms given by coefficients of `x^(n-i) y^i`.
pub fn binary_resultant(f: &[Rational], g: &[Rational]) -> Rational {
    let (n, m) = (f.len() - 1, g.len() - 1);
    let size = n + m;
    if size == 0 {
        return Rational::one();
    }
    let mut s = Matrix::zeros(size, size);
    for r in 0..m {
        for (i, c) in f.iter().enumerate() {
            s.set(r, r + i, c.clone());
        }
    }
    for r in 0..n {
        for (i, c) in g.iter().enumerate() {
            s.set(m + r, r + i, c.clone());
        }
    }
    linalg::determinant(&s)
}

fn validate_form(b: &GradedPolynomial) -> Result<u32> {
    check_plane(b)?;
    if b.is_zero() || b.is_constant() {
        return Err(GpError::Precondition("b must be non-constant".into()));
    }
    if !b.is_homogeneous() {
        return Err(GpError::NotHomogeneous("b must be homogeneous".into()));
    }
    let d = b.even_degree().expect("nonzero");
    if d >= 2 {
        let res = binary_resultant(&coords(&dx(b), d - 1), &coords(&dy(b), d - 1));
        if res.is_zero() {
            return Err(GpError::Precondition("b is not square-free".into()));
        }
    }
    Ok(d)
}

/// Milnor algebra `K[x,y]/<b_x, b_y>` of a square-free binary form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilnorData {
    b: GradedPolynomial,
    degree: u32,
    basis: Vec<GradedPolynomial>,
}

impl MilnorData {
    pub fn b(&self) -> &GradedPolynomial {
        &self.b
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn mu(&self) -> usize {
        self.basis.len()
    }

    /// `u_0 = 1, u_1, ...` by ascending degree.
    pub fn basis(&self) -> &[GradedPolynomial] {
        &self.basis
    }

    pub fn basis_degree(&self, i: usize) -> u32 {
        self.basis[i].even_degree().expect("nonzero basis element")
    }

    pub fn grad_b(&self) -> PlanarField {
        grad(&self.b)
    }

    /// Generators `m b_x`, `m b_y` of the degree-`t` part of the Jacobian ideal.
    fn ideal_part(&self, t: u32) -> Vec<GradedPolynomial> {
        let Some(s) = t.checked_sub(self.degree - 1) else {
            return Vec::new();
        };
        let sig = plane();
        let gb = self.grad_b();
        let mut out = Vec::new();
        for m in monomials_of_degree(s) {
            let mp = GradedPolynomial::monomial(&sig, m, Rational::one());
            out.push(&mp * &gb.0);
        }
        for m in monomials_of_degree(s) {
            let mp = GradedPolynomial::monomial(&sig, m, Rational::one());
            out.push(&mp * &gb.1);
        }
        out
    }

    /// Reduction of a homogeneous `f` of degree `t`: `(lambdas, alpha, beta)` with
    /// `f = sum lambda_i u_i + alpha b_x + beta b_y`.
    fn reduce_homogeneous(&self, f: &GradedPolynomial, t: u32) -> (Vec<Rational>, GradedPolynomial, GradedPolynomial) {
        let sig = plane();
        let gens = self.ideal_part(t);
        let us: Vec<usize> = (0..self.mu()).filter(|&i| self.basis_degree(i) == t).collect();
        let mut cols: Vec<Vec<Rational>> = gens.iter().map(|g| coords(g, t)).collect();
        cols.extend(us.iter().map(|&i| coords(&self.basis[i], t)));
        let mat = Matrix::from_columns(&cols, t as usize + 1);
        let sol = linalg::solve(&mat, &coords(f, t)).expect("Milnor basis spans the quotient");
        let half = gens.len() / 2;
        let mut lambdas = vec![Rational::zero(); self.mu()];
        for (j, &i) in us.iter().enumerate() {
            lambdas[i] = sol[gens.len() + j].clone();
        }
        let (mut alpha, mut beta) = (GradedPolynomial::zero(&sig), GradedPolynomial::zero(&sig));
        if half > 0 {
            let s = t - (self.degree - 1);
            for (j, m) in monomials_of_degree(s).into_iter().enumerate() {
                alpha = &alpha + &GradedPolynomial::monomial(&sig, m.clone(), sol[j].clone());
                beta = &beta + &GradedPolynomial::monomial(&sig, m, sol[half + j].clone());
            }
        }
        (lambdas, alpha, beta)
    }
}

/// Milnor basis of a square-free homogeneous `b` (non-pivot monomials, grlex `x > y`).
pub fn milnor_basis(b: &GradedPolynomial) -> Result<MilnorData> {
    let d = validate_form(b)?;
    let mut data = MilnorData { b: b.clone(), degree: d, basis: Vec::new() };
    if d == 1 {
        return Ok(data);
    }
    let sig = plane();
    for t in 0..=(2 * (d - 2) + 1) {
        let gens = data.ideal_part(t);
        let rows: Vec<Vec<Rational>> = gens.iter().map(|g| coords(g, t)).collect();
        let (_, pivots) = linalg::rref(&Matrix::from_rows(rows, t as usize + 1));
        for (j, m) in monomials_of_degree(t).into_iter().enumerate() {
            if !pivots.contains(&j) {
                data.basis.push(GradedPolynomial::monomial(&sig, m, Rational::one()));
            }
        }
    }
    Ok(data)
}

/// `f = sum lambda_i u_i + grad b x field`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobianReduction {
    pub lambdas: Vec<Rational>,
    pub field: PlanarField,
}

pub fn reduce_mod_jacobian(f: &GradedPolynomial, data: &MilnorData) -> Result<JacobianReduction> {
    check_plane(f)?;
    let mut lambdas = vec![Rational::zero(); data.mu()];
    let mut field = PlanarField::zero();
    for (t, part) in f.homogeneous_components() {
        let (l, alpha, beta) = data.reduce_homogeneous(&part, t);
        for (acc, v) in lambdas.iter_mut().zip(l) {
            *acc += v;
        }
        // grad b x (-beta, alpha) = alpha b_x + beta b_y
        field = field.add(&PlanarField(-&beta, alpha));
    }
    Ok(JacobianReduction { lambdas, field })
}

impl JacobianReduction {
    pub fn reconstruct(&self, data: &MilnorData) -> GradedPolynomial {
        let mut f = cross(&data.grad_b(), &self.field);
        for (l, u) in self.lambdas.iter().zip(data.basis()) {
            f = &f + &u.scale(l);
        }
        f
    }
}

/// `f = sum c_i(b) u_i + grad h x grad b`; `coefficients[i][j]` is the coefficient of `b^j` in `c_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sqfree2Decomposition {
    pub coefficients: Vec<Vec<Rational>>,
    pub potential: GradedPolynomial,
}

impl Sqfree2Decomposition {
    /// `c_i(b)` as a polynomial in `x, y`.
    pub fn coefficient_poly(&self, i: usize, b: &GradedPolynomial) -> GradedPolynomial {
        let mut acc = GradedPolynomial::zero(b.signature());
        for (j, c) in self.coefficients[i].iter().enumerate() {
            acc = &acc + &b.pow(j as u32).scale(c);
        }
        acc
    }

    pub fn reconstruct(&self, data: &MilnorData) -> GradedPolynomial {
        let mut f = cross(&grad(&self.potential), &data.grad_b());
        for (i, u) in data.basis().iter().enumerate() {
            f = &f + &(&self.coefficient_poly(i, data.b()) * u);
        }
        f
    }

    fn add_scaled_shifted(&mut self, other: &Self, c: &Rational, shift: usize, b: &GradedPolynomial) {
        for (acc, add) in self.coefficients.iter_mut().zip(&other.coefficients) {
            if acc.len() < add.len() + shift {
                acc.resize(add.len() + shift, Rational::zero());
            }
            for (j, v) in add.iter().enumerate() {
                acc[j + shift] += v * c;
            }
        }
        let pot = if shift == 0 { other.potential.clone() } else { b * &other.potential };
        self.potential = &self.potential + &pot.scale(c);
    }
}

fn trim(v: &mut Vec<Rational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn sqfree2_homogeneous(f: &GradedPolynomial, t: u32, data: &MilnorData) -> Sqfree2Decomposition {
    let sig = plane();
    let (lambdas, alpha, beta) = data.reduce_homogeneous(f, t);
    let mut out = Sqfree2Decomposition {
        coefficients: lambdas.into_iter().map(|l| vec![l]).collect(),
        potential: GradedPolynomial::zero(&sig),
    };
    // remainder alpha b_x + beta b_y = F x grad b with F = (beta, -alpha)
    let field = PlanarField(beta, -&alpha);
    if field.is_zero() {
        return out;
    }
    let s = t + 1 - data.degree;
    // F = grad l + k E with k = -Div F / (s + 1); then F x grad b = grad l x grad b + d k b
    let k = div(&field).scale(&Rational::new((-1).into(), (s as i64 + 1).into()));
    let rest = field.sub(&PlanarField::euler().mul_poly(&k));
    let l = gradient_potential(&rest).expect("divergence-free by construction");
    out.potential = l;
    if !k.is_zero() {
        let inner = sqfree2_homogeneous(&k, s - 1, data);
        let d = Rational::from_integer((data.degree as i64).into());
        out.add_scaled_shifted(&inner, &d, 1, data.b());
    }
    out
}

pub fn sqfree2_decompose(f: &GradedPolynomial, data: &MilnorData) -> Result<Sqfree2Decomposition> {
    check_plane(f)?;
    let mut out = Sqfree2Decomposition {
        coefficients: vec![Vec::new(); data.mu()],
        potential: GradedPolynomial::zero(&plane()),
    };
    for (t, part) in f.homogeneous_components() {
        let piece = sqfree2_homogeneous(&part, t, data);
        out.add_scaled_shifted(&piece, &Rational::one(), 0, data.b());
    }
    out.coefficients.iter_mut().for_each(trim);
    Ok(out)
}
