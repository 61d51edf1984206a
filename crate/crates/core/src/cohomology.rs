//! Brute-force cohomology of `D = {psi, .}` on finite-dimensional slices.
//!
//! Cochains are graded by arity `n`, total Z2 degree and a weight
//! `ew * (deg_x(coef) - #Dx) + ow * (#Dth - #th)`, which is additive under the
//! bracket. When `psi` is weight-homogeneous every slice is mapped into a slice
//! and ranks are computed directly (with a lookahead over higher arities when
//! `psi` has several arities). A single-arity `psi` that is not homogeneous for
//! any small weight is handled through the increasing weight filtration.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{GpError, Result};
use crate::linalg::{self, EchelonBasis, Matrix, Vector};
use crate::schouten::{modified_bracket, ExteriorMonomial, MultiDerivation};
use crate::superalgebra::{AlgebraSignature, GradedMonomial, GradedPolynomial, Parity, Rational};

/// Weights of the even and odd directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grading {
    pub even_weight: i64,
    pub odd_weight: i64,
}

impl Default for Grading {
    fn default() -> Self {
        Grading { even_weight: 1, odd_weight: 0 }
    }
}

impl Grading {
    pub fn new(even_weight: i64, odd_weight: i64) -> Result<Self> {
        if even_weight <= 0 {
            return Err(GpError::Precondition("even weight must be positive".into()));
        }
        Ok(Grading { even_weight, odd_weight })
    }

    pub fn weight(&self, m: &GradedMonomial, e: &ExteriorMonomial) -> i64 {
        self.even_weight * (m.even_degree() as i64 - e.even_count() as i64)
            + self.odd_weight * (e.odd_count() as i64 - m.odd_count() as i64)
    }

    /// Smallest and largest term weight of `psi`.
    pub fn weight_range(&self, psi: &MultiDerivation) -> Option<(i64, i64)> {
        let ws: Vec<i64> = psi.monomial_terms().map(|(_, m, e)| self.weight(m, e)).collect();
        Some((*ws.iter().min()?, *ws.iter().max()?))
    }

    pub fn is_homogeneous(&self, psi: &MultiDerivation) -> bool {
        self.weight_range(psi).is_some_and(|(a, b)| a == b)
    }

    /// Small grading making `psi` homogeneous, preferring the default one.
    pub fn homogenizing(psi: &MultiDerivation) -> Option<Grading> {
        let mut candidates = vec![Grading::default()];
        for ew in 1..=6 {
            for ow in (-8..=8).filter(|&o| o != 0 || ew > 1) {
                candidates.push(Grading { even_weight: ew, odd_weight: ow });
            }
        }
        candidates.into_iter().find(|g| g.is_homogeneous(psi))
    }

    /// Least weight of an arity-`n` cochain.
    pub fn min_weight(&self, sig: &AlgebraSignature, n: usize) -> Option<i64> {
        exterior_monomials(sig, n)
            .iter()
            .flat_map(|e| {
                (0..=sig.odd()).map(move |t| {
                    self.even_weight * -(e.even_count() as i64) + self.odd_weight * (e.odd_count() as i64 - t as i64)
                })
            })
            .min()
    }
}

/// Exterior monomials with exactly `n` factors, in a fixed order.
pub fn exterior_monomials(sig: &AlgebraSignature, n: usize) -> Vec<ExteriorMonomial> {
    let m = sig.even();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << m) {
        let s = mask.count_ones() as usize;
        if s > n {
            continue;
        }
        for odd in compositions(n - s, sig.odd()) {
            out.push(ExteriorMonomial::new(mask, odd));
        }
    }
    out.sort();
    out
}

/// All vectors of `parts` non-negative integers summing to `total`.
fn compositions(total: usize, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

/// One slice of the cochain space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceSpec {
    pub exterior_degree: usize,
    pub parity: Parity,
    pub internal_degree: i64,
    pub signature: AlgebraSignature,
    pub grading: Grading,
}

impl SliceSpec {
    pub fn new(sig: &AlgebraSignature, exterior_degree: usize, parity: Parity, internal_degree: i64) -> Self {
        SliceSpec { exterior_degree, parity, internal_degree, signature: sig.clone(), grading: Grading::default() }
    }

    pub fn with_grading(mut self, grading: Grading) -> Self {
        self.grading = grading;
        self
    }
}

/// Ordered monomial basis of a slice: `(coefficient monomial, exterior monomial)` pairs.
pub fn slice_basis(spec: &SliceSpec) -> Vec<(GradedMonomial, ExteriorMonomial)> {
    let sig = &spec.signature;
    let g = spec.grading;
    let n = spec.exterior_degree;
    let mut out = Vec::new();
    for e in exterior_monomials(sig, n) {
        for mask in 0u64..(1u64 << sig.odd()) {
            let t = mask.count_ones() as i64;
            let total = Parity::of(n + 1 + t as usize + e.odd_count());
            if total != spec.parity {
                continue;
            }
            let rest = spec.internal_degree - g.odd_weight * (e.odd_count() as i64 - t);
            if rest % g.even_weight != 0 {
                continue;
            }
            let deg = rest / g.even_weight + e.even_count() as i64;
            if deg < 0 || (sig.even() == 0 && deg != 0) {
                continue;
            }
            for ex in compositions(deg as usize, sig.even()) {
                out.push((GradedMonomial::new(ex, mask), e.clone()));
            }
        }
    }
    out
}

type SliceKey = (usize, Parity, i64);

#[derive(Debug)]
struct Slice {
    basis: Vec<(GradedMonomial, ExteriorMonomial)>,
    index: HashMap<(GradedMonomial, ExteriorMonomial), usize>,
}

/// Options shared by the slice and table computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyOptions {
    /// Drop 0-cochain sources of coboundaries with odd targets.
    pub deformation_convention: bool,
    /// Grading to use; `None` picks a homogenising one or falls back to filtering.
    pub grading: Option<Grading>,
    /// Largest lookahead (extra arities) when `psi` has several arities.
    pub max_lookahead: usize,
    /// Largest number of slack rounds in filtered mode.
    pub max_slack_rounds: usize,
}

impl Default for CohomologyOptions {
    fn default() -> Self {
        CohomologyOptions { deformation_convention: false, grading: None, max_lookahead: 6, max_slack_rounds: 6 }
    }
}

/// How `D` interacts with the grading.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineMode {
    /// `psi` is weight-homogeneous of the given weight with arities `min..=max`.
    Homogeneous { weight: i64, min_arity: usize, max_arity: usize },
    /// Single arity, weights spread over `low..=high`; slices come from the weight filtration.
    Filtered { arity: usize, low: i64, high: i64 },
}

/// Result for one slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceCohomology {
    pub dim_z: usize,
    pub dim_b: usize,
    pub dim_h: usize,
    pub representatives: Vec<MultiDerivation>,
    /// False when the lookahead or slack did not stabilise.
    pub converged: bool,
}

/// Brute-force engine for one codifferential.
pub struct Engine {
    psi: MultiDerivation,
    sig: AlgebraSignature,
    grading: Grading,
    mode: EngineMode,
    options: CohomologyOptions,
    slices: Mutex<HashMap<SliceKey, Arc<Slice>>>,
    images: Mutex<HashMap<SliceKey, Arc<Vec<MultiDerivation>>>>,
}

impl Engine {
    pub fn new(psi: &MultiDerivation, options: CohomologyOptions) -> Result<Self> {
        if psi.is_zero() {
            return Err(GpError::ZeroInput);
        }
        if psi.min_arity() == Some(0) {
            return Err(GpError::ZeroCochainTerm);
        }
        if psi.total_parity() != Some(Parity::Odd) {
            return Err(GpError::NotOdd);
        }
        let arities = psi.arities();
        let (k0, k1) = (arities[0], arities[arities.len() - 1]);
        let grading = match options.grading {
            Some(g) => g,
            None => Grading::homogenizing(psi).unwrap_or_default(),
        };
        let (low, high) = grading.weight_range(psi).expect("nonzero");
        let mode = if low == high {
            EngineMode::Homogeneous { weight: low, min_arity: k0, max_arity: k1 }
        } else if k0 == k1 {
            EngineMode::Filtered { arity: k0, low, high }
        } else {
            return Err(GpError::NotHomogeneous(
                "several arities and no grading makes the codifferential homogeneous".into(),
            ));
        };
        Ok(Engine {
            psi: psi.clone(),
            sig: psi.signature().clone(),
            grading,
            mode,
            options,
            slices: Mutex::new(HashMap::new()),
            images: Mutex::new(HashMap::new()),
        })
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn mode(&self) -> EngineMode {
        self.mode
    }

    pub fn min_weight(&self, n: usize) -> i64 {
        self.grading.min_weight(&self.sig, n).unwrap_or(0)
    }

    fn spec(&self, key: SliceKey) -> SliceSpec {
        SliceSpec::new(&self.sig, key.0, key.1, key.2).with_grading(self.grading)
    }

    fn slice_data(&self, key: SliceKey) -> Arc<Slice> {
        if let Some(s) = self.slices.lock().expect("poisoned").get(&key) {
            return s.clone();
        }
        let basis = slice_basis(&self.spec(key));
        let index = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        let s = Arc::new(Slice { basis, index });
        self.slices.lock().expect("poisoned").insert(key, s.clone());
        s
    }

    fn images(&self, key: SliceKey) -> Result<Arc<Vec<MultiDerivation>>> {
        if let Some(s) = self.images.lock().expect("poisoned").get(&key) {
            return Ok(s.clone());
        }
        let slice = self.slice_data(key);
        let imgs = slice
            .basis
            .iter()
            .map(|(m, e)| {
                let c = MultiDerivation::term(GradedPolynomial::monomial(&self.sig, m.clone(), Rational::from_integer(1.into())), e.clone());
                modified_bracket(&self.psi, &c)
            })
            .collect::<Result<Vec<_>>>()?;
        let imgs = Arc::new(imgs);
        self.images.lock().expect("poisoned").insert(key, imgs.clone());
        Ok(imgs)
    }

    fn to_cochain(&self, blocks: &[SliceKey], v: &[Rational]) -> MultiDerivation {
        let mut out = MultiDerivation::zero(&self.sig);
        let mut off = 0;
        for &k in blocks {
            let s = self.slice_data(k);
            for (i, (m, e)) in s.basis.iter().enumerate() {
                let c = &v[off + i];
                if !c.is_zero() {
                    out.add_monomial(e.clone(), m.clone(), c.clone());
                }
            }
            off += s.basis.len();
        }
        out
    }

    /// Matrix whose columns are the coordinates (over `rows`) of the images of `cols`.
    fn image_matrix(&self, cols: &[SliceKey], rows: &[SliceKey]) -> Result<Matrix> {
        let mut row_off = HashMap::new();
        let mut total = 0;
        for &k in rows {
            row_off.insert(k, total);
            total += self.slice_data(k).basis.len();
        }
        let ncols: usize = cols.iter().map(|&k| self.slice_data(k).basis.len()).sum();
        let mut mat = Matrix::zeros(total, ncols);
        let mut col = 0;
        for &k in cols {
            for img in self.images(k)?.iter() {
                for (c, m, e) in img.monomial_terms() {
                    let key = (e.arity(), MultiDerivation::term_total_parity(m, e), self.grading.weight(m, e));
                    if let Some(&off) = row_off.get(&key) {
                        let s = self.slice_data(key);
                        let idx = s.index[&(m.clone(), e.clone())];
                        mat.set(off + idx, col, c.clone());
                    }
                }
                col += 1;
            }
        }
        Ok(mat)
    }

    fn block_len(&self, blocks: &[SliceKey]) -> usize {
        blocks.iter().map(|&k| self.slice_data(k).basis.len()).sum()
    }

    /// Echelon basis of `{ proj(v) : v in ker(constraints) }` with the projection
    /// onto the first `keep` coordinates.
    fn projected_kernel(constraints: &Matrix, keep: usize) -> Vec<Vector> {
        let ker = linalg::nullspace(constraints);
        let proj: Vec<Vector> = ker.into_iter().map(|v| v[..keep].to_vec()).collect();
        linalg::span_basis(&proj, keep)
    }

    /// `{ top(v) : v in ker(low) }` where both matrices share columns.
    fn constrained_image(low: &Matrix, top: &Matrix) -> Vec<Vector> {
        let ker = if low.rows() == 0 {
            (0..top.cols())
                .map(|j| {
                    let mut v = vec![Rational::zero(); top.cols()];
                    v[j] = Rational::from_integer(1.into());
                    v
                })
                .collect()
        } else {
            linalg::nullspace(low)
        };
        let imgs: Vec<Vector> = ker.iter().map(|v| top.mul_vec(v)).collect();
        linalg::span_basis(&imgs, top.rows())
    }

    fn finish(&self, blocks: &[SliceKey], z: Vec<Vector>, b: Vec<Vector>, floor: &[Vector], converged: bool) -> SliceCohomology {
        let dim = self.block_len(blocks);
        let mut base = b.clone();
        base.extend_from_slice(floor);
        let reps = linalg::extend_basis(&base, &z, dim);
        SliceCohomology {
            dim_z: z.len(),
            dim_b: b.len(),
            dim_h: reps.len(),
            representatives: reps.iter().map(|v| self.to_cochain(blocks, v)).collect(),
            converged,
        }
    }

    fn homogeneous_slice(&self, n: usize, parity: Parity, e: i64, weight: i64, k0: usize, k1: usize) -> Result<SliceCohomology> {
        let q = parity.flip();
        let target = (n, parity, e);
        let dim = self.slice_data(target).basis.len();
        // coboundaries: sources of arity 0..=n+1-k0 whose image vanishes below arity n
        let mut sources = Vec::new();
        if n + 1 >= k0 {
            for j in 0..=(n + 1 - k0) {
                if j == 0 && parity == Parity::Odd && self.options.deformation_convention {
                    continue;
                }
                sources.push((j, q, e - weight));
            }
        }
        if k0 == k1 {
            sources.retain(|s| s.0 + k0 == n + 1);
        }
        let b = if sources.is_empty() || dim == 0 {
            Vec::new()
        } else {
            let low_rows: Vec<SliceKey> = (0..n).map(|a| (a, parity, e)).collect();
            let low = self.image_matrix(&sources, &low_rows)?;
            let top = self.image_matrix(&sources, &[target])?;
            Self::constrained_image(&low, &top)
        };
        // cocycles: leading parts of solutions of D(c + tail) = 0 in arities n+k0-1 ..= n+L+k0-1
        let cocycles = |look: usize| -> Result<Vec<Vector>> {
            if dim == 0 {
                return Ok(Vec::new());
            }
            let cols: Vec<SliceKey> = (0..=look).map(|i| (n + i, parity, e)).collect();
            let rows: Vec<SliceKey> = (0..=look).map(|i| (n + i + k0 - 1, q, e + weight)).collect();
            let mat = self.image_matrix(&cols, &rows)?;
            Ok(Self::projected_kernel(&mat, dim))
        };
        let (z, converged) = if k0 == k1 {
            (cocycles(0)?, true)
        } else {
            let mut look = 1;
            let mut z = cocycles(look)?;
            let mut conv = false;
            while look < self.options.max_lookahead {
                let next = cocycles(look + 1)?;
                let same = next.len() == z.len();
                z = next;
                look += 1;
                if same {
                    conv = true;
                    break;
                }
            }
            (z, conv)
        };
        Ok(self.finish(&[target], z, b, &[], converged))
    }

    fn filtered_upto(&self, n: usize, parity: Parity, e: i64, k: usize, low: i64, high: i64) -> Result<(Vec<SliceKey>, Vec<Vector>, Vec<Vector>, bool)> {
        let q = parity.flip();
        let lo_n = self.min_weight(n);
        let blocks: Vec<SliceKey> = (lo_n..=e).map(|w| (n, parity, w)).collect();
        let dim = self.block_len(&blocks);
        if dim == 0 {
            return Ok((blocks, Vec::new(), Vec::new(), true));
        }
        let t = n + k - 1;
        let rows: Vec<SliceKey> = (self.min_weight(t)..=e + high).map(|w| (t, q, w)).collect();
        let z = Self::projected_kernel(&self.image_matrix(&blocks, &rows)?, dim);
        let convention_blocks = n + 1 == k && parity == Parity::Odd && self.options.deformation_convention;
        if n + 1 < k || convention_blocks {
            return Ok((blocks, z, Vec::new(), true));
        }
        let j = n + 1 - k;
        let lo_j = self.min_weight(j);
        let coboundaries = |slack: i64| -> Result<Vec<Vector>> {
            let top = e - low + slack;
            let src: Vec<SliceKey> = (lo_j..=top).map(|w| (j, q, w)).collect();
            let high_rows: Vec<SliceKey> = (e + 1..=top + high).map(|w| (n, parity, w)).collect();
            let hi = self.image_matrix(&src, &high_rows)?;
            let lo = self.image_matrix(&src, &blocks)?;
            Ok(Self::constrained_image(&hi, &lo))
        };
        let step = high - low + 1;
        let mut slack = high - low;
        let mut b = coboundaries(slack)?;
        let mut converged = false;
        for _ in 0..self.options.max_slack_rounds {
            let next = coboundaries(slack + step)?;
            let same = next.len() == b.len();
            b = next;
            slack += step;
            if same {
                converged = true;
                break;
            }
        }
        Ok((blocks, z, b, converged))
    }

    fn filtered_slice(&self, n: usize, parity: Parity, e: i64, k: usize, low: i64, high: i64) -> Result<SliceCohomology> {
        let (blocks, z, b, conv) = self.filtered_upto(n, parity, e, k, low, high)?;
        let lo_n = self.min_weight(n);
        let (zp, bp, conv_p) = if e > lo_n {
            let (_, zp, bp, c) = self.filtered_upto(n, parity, e - 1, k, low, high)?;
            (zp, bp, c)
        } else {
            (Vec::new(), Vec::new(), true)
        };
        let dim = self.block_len(&blocks);
        let pad = |v: &Vector| {
            let mut w = v.clone();
            w.resize(dim, Rational::zero());
            w
        };
        let zp: Vec<Vector> = zp.iter().map(pad).collect();
        let bp_dim = bp.len();
        // span(B(<=e) + Z(<=e-1)) inside Z(<=e)
        let mut floor_basis = EchelonBasis::new(dim);
        for v in b.iter().chain(&zp) {
            floor_basis.insert(v);
        }
        let reps = linalg::extend_basis(&[b.clone(), zp.clone()].concat(), &z, dim);
        let h_upto = z.len() - b.len();
        let h_prev = zp.len() - bp_dim;
        let dim_h = h_upto - h_prev;
        debug_assert_eq!(dim_h, reps.len());
        Ok(SliceCohomology {
            dim_z: z.len() - zp.len(),
            dim_b: b.len() - bp_dim,
            dim_h,
            representatives: reps.iter().map(|v| self.to_cochain(&blocks, v)).collect(),
            converged: conv && conv_p,
        })
    }

    /// Cohomology of the slice (`n`, `parity`, weight `e`).
    pub fn slice(&self, n: usize, parity: Parity, e: i64) -> Result<SliceCohomology> {
        match self.mode {
            EngineMode::Homogeneous { weight, min_arity, max_arity } => {
                self.homogeneous_slice(n, parity, e, weight, min_arity, max_arity)
            }
            EngineMode::Filtered { arity, low, high } => self.filtered_slice(n, parity, e, arity, low, high),
        }
    }

    /// Matrix of `D` from the slice `source` to its target slice.
    pub fn d_matrix(&self, source: &SliceSpec) -> Result<Matrix> {
        let EngineMode::Homogeneous { weight, min_arity, max_arity } = self.mode else {
            return Err(GpError::NotHomogeneous("weight-inhomogeneous codifferential".into()));
        };
        if min_arity != max_arity {
            return Err(GpError::NotHomogeneous("codifferential has several arities".into()));
        }
        if source.grading != self.grading || source.signature != self.sig {
            return Err(GpError::Precondition("slice does not match the engine grading".into()));
        }
        let src = (source.exterior_degree, source.parity, source.internal_degree);
        let tgt = (source.exterior_degree + min_arity - 1, source.parity.flip(), source.internal_degree + weight);
        self.image_matrix(&[src], &[tgt])
    }

    pub fn table(&self, n_max: usize, e_max: i64, parity: Option<Parity>) -> Result<CohomologyTable> {
        let mut keys = Vec::new();
        for n in 0..=n_max {
            for p in [Parity::Even, Parity::Odd] {
                if parity.is_some_and(|q| q != p) {
                    continue;
                }
                for e in self.min_weight(n)..=e_max {
                    keys.push((n, p, e));
                }
            }
        }
        let results: Vec<(SliceKey, SliceCohomology)> = keys
            .par_iter()
            .map(|&(n, p, e)| self.slice(n, p, e).map(|r| ((n, p, e), r)))
            .collect::<Result<_>>()?;
        Ok(CohomologyTable { grading: self.grading, mode: self.mode, entries: results.into_iter().collect() })
    }
}

/// Per-slice results over a rectangle of (n, parity, weight).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyTable {
    pub grading: Grading,
    pub mode: EngineMode,
    pub entries: BTreeMap<(usize, Parity, i64), SliceCohomology>,
}

impl CohomologyTable {
    pub fn get(&self, n: usize, parity: Parity, e: i64) -> Option<&SliceCohomology> {
        self.entries.get(&(n, parity, e))
    }

    /// `dim H` at (n, parity, e); zero for slices outside the table.
    pub fn dim_h(&self, n: usize, parity: Parity, e: i64) -> usize {
        self.get(n, parity, e).map_or(0, |s| s.dim_h)
    }

    /// Sum of `dim H` over all weights at (n, parity).
    pub fn total_dim(&self, n: usize, parity: Parity) -> usize {
        self.entries.iter().filter(|((k, p, _), _)| *k == n && *p == parity).map(|(_, s)| s.dim_h).sum()
    }

    pub fn all_converged(&self) -> bool {
        self.entries.values().all(|s| s.converged)
    }
}

/// Matrix of `D` on one slice for a single-arity homogeneous `psi`.
pub fn d_matrix(psi: &MultiDerivation, source: &SliceSpec) -> Result<Matrix> {
    let opts = CohomologyOptions { grading: Some(source.grading), ..Default::default() };
    Engine::new(psi, opts)?.d_matrix(source)
}

pub fn slice_cohomology(psi: &MultiDerivation, spec: &SliceSpec, options: &CohomologyOptions) -> Result<SliceCohomology> {
    let opts = CohomologyOptions { grading: Some(spec.grading), ..options.clone() };
    Engine::new(psi, opts)?.slice(spec.exterior_degree, spec.parity, spec.internal_degree)
}

pub fn cohomology_table(
    psi: &MultiDerivation,
    n_max: usize,
    e_max: i64,
    parity: Option<Parity>,
    options: &CohomologyOptions,
) -> Result<CohomologyTable> {
    Engine::new(psi, options.clone())?.table(n_max, e_max, parity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalgebra::Var;

    #[test]
    fn slice_sizes() {
        let s11 = AlgebraSignature::new(1, 1).unwrap();
        assert_eq!(slice_basis(&SliceSpec::new(&s11, 2, Parity::Odd, 0)).len(), 2);
        let s01 = AlgebraSignature::new(0, 1).unwrap();
        let b = slice_basis(&SliceSpec::new(&s01, 3, Parity::Odd, 0));
        assert_eq!(b.len(), 1);
        let s21 = AlgebraSignature::new(2, 1).unwrap();
        for e in 0..4 {
            let spec = SliceSpec::new(&s21, 2, Parity::Odd, e);
            assert_eq!(slice_basis(&spec).len(), 4 * e as usize + 8);
        }
    }

    #[test]
    fn zero_one_cohomology() {
        let s = AlgebraSignature::new(0, 1).unwrap();
        for k in 1..=4 {
            let psi = MultiDerivation::from_factors(GradedPolynomial::one(&s), &vec![Var::Odd(0); k]).unwrap();
            let t = cohomology_table(&psi, 6, 0, None, &CohomologyOptions::default()).unwrap();
            for n in 0..=6 {
                assert_eq!(t.total_dim(n, Parity::Odd), usize::from(n + 1 < k), "k={k} n={n}");
                assert_eq!(t.total_dim(n, Parity::Even), 0);
            }
        }
    }

    #[test]
    fn engine_rejects_even_input() {
        let s = AlgebraSignature::new(1, 1).unwrap();
        let x = GradedPolynomial::var(&s, Var::Even(0)).unwrap();
        let phi = MultiDerivation::from_factors(x, &[Var::Even(0)]).unwrap();
        assert!(matches!(Engine::new(&phi, CohomologyOptions::default()), Err(GpError::NotOdd)));
    }
}
