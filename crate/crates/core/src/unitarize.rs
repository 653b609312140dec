//! Block unitarization of complex matrix semigroups whose elements have
//! spectra on circles `r·𝕋`.
//!
//! The exact engine owns nilpotent directions; here every generator must be
//! invertible and the closure of the determinant-normalized generators must be
//! a finite group within the cap. Averaging `S*S` over that group gives an
//! invariant inner product; in the resulting frame every invariant subspace
//! has an invariant orthogonal complement, so the block structure is block
//! diagonal and each block is `r` times a unitary.

use std::collections::HashMap;

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type NumericMatrix = DMatrix<Complex64>;

pub const DEFAULT_TOL: f64 = 1e-8;
/// Relative singular-value threshold for numeric rank decisions.
pub const RANK_THRESHOLD: f64 = 1e-9;
const DEDUP_TOL: f64 = 1e-6;
const DECOMPOSE_SEED: u64 = 0x5eed_b10c;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleSpectrumReport {
    pub on_circle: bool,
    pub r: f64,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Scalar1x1,
    ScaledUnitary,
}

impl BlockKind {
    pub fn name(&self) -> &'static str {
        match self {
            BlockKind::Scalar1x1 => "scalar_1x1",
            BlockKind::ScaledUnitary => "scaled_unitary",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockUnitarizeResult {
    /// `X` with `X^-1 S X` block diagonal, blocks scaled unitary.
    pub similarity: NumericMatrix,
    pub block_dims: Vec<usize>,
    pub kinds: Vec<BlockKind>,
    /// Per block, the largest `‖B*B - r²I‖_F` over generators and group elements.
    pub residuals: Vec<f64>,
    /// Largest entry of `X^-1 S X` outside the diagonal blocks.
    pub off_block: f64,
    pub group_order: usize,
}

/// Eigenvalues from a complex Schur decomposition.
pub fn eigenvalues(a: &NumericMatrix) -> Vec<Complex64> {
    if a.nrows() == 0 {
        return Vec::new();
    }
    let (_, t) = nalgebra::Schur::new(a.clone()).unpack();
    t.diagonal().iter().copied().collect()
}

pub fn spectrum_on_circle(a: &NumericMatrix, tol: f64) -> CircleSpectrumReport {
    let moduli: Vec<f64> = eigenvalues(a).iter().map(|z| z.norm()).collect();
    if moduli.is_empty() {
        return CircleSpectrumReport { on_circle: true, r: 0.0, max_deviation: 0.0 };
    }
    let r = moduli.iter().sum::<f64>() / moduli.len() as f64;
    let max_deviation = moduli.iter().map(|m| (m - r).abs()).fold(0.0, f64::max);
    CircleSpectrumReport { on_circle: max_deviation <= tol, r, max_deviation }
}

fn is_numerically_singular(a: &NumericMatrix, det: Complex64) -> bool {
    let n = a.nrows() as i32;
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    !det.norm().is_finite() || det.norm().powf(1.0 / n as f64) <= 1e-12 * scale.max(f64::MIN_POSITIVE)
}

/// `r = |det A|^(1/n)` and `A / r`.
pub fn normalize_scale(a: &NumericMatrix) -> Result<(f64, NumericMatrix)> {
    let det = a.determinant();
    if is_numerically_singular(a, det) {
        return Err(Error::SingularInput);
    }
    let r = det.norm().powf(1.0 / a.nrows() as f64);
    Ok((r, a.unscale(r)))
}

/// `A / det(A)^(1/n)` with the principal root, so the result has determinant 1.
pub fn normalize_determinant(a: &NumericMatrix) -> Result<NumericMatrix> {
    let det = a.determinant();
    if is_numerically_singular(a, det) {
        return Err(Error::SingularInput);
    }
    let root = det.powf(1.0 / a.nrows() as f64);
    Ok(a.map(|z| z / root))
}

fn max_abs_diff(a: &NumericMatrix, b: &NumericMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Tolerance-based membership via buckets on a fixed linear probe.
struct Dedup {
    weights: Vec<f64>,
    buckets: HashMap<i64, Vec<usize>>,
}

impl Dedup {
    const GRID: f64 = 1e-3;

    fn new(len: usize) -> Self {
        let weights = (0..len).map(|k| 1.0 + ((k as f64 + 1.0) * 0.618_033_988_75).fract()).collect();
        Dedup { weights, buckets: HashMap::new() }
    }

    fn key(&self, m: &NumericMatrix) -> i64 {
        let probe: f64 = m.iter().zip(&self.weights).map(|(z, w)| w * (z.re + 0.5 * z.im)).sum();
        (probe / Self::GRID).floor() as i64
    }

    fn find(&self, m: &NumericMatrix, elements: &[NumericMatrix]) -> Option<usize> {
        let key = self.key(m);
        let tol = DEDUP_TOL * (1.0 + m.norm());
        (key - 1..=key + 1)
            .filter_map(|k| self.buckets.get(&k))
            .flatten()
            .copied()
            .find(|&i| max_abs_diff(&elements[i], m) <= tol)
    }

    fn insert(&mut self, m: &NumericMatrix, index: usize) {
        self.buckets.entry(self.key(m)).or_default().push(index);
    }
}

/// Closure of the determinant-normalized generators.
pub fn normalized_closure(gens: &[NumericMatrix], cap: usize) -> Result<Vec<NumericMatrix>> {
    let first = gens.first().ok_or(Error::NoGenerators)?;
    let n = first.nrows();
    let normalized: Vec<NumericMatrix> = gens.iter().map(normalize_determinant).collect::<Result<_>>()?;
    let mut dedup = Dedup::new(n * n);
    let mut elements: Vec<NumericMatrix> = Vec::new();
    let mut admit = |m: NumericMatrix, elements: &mut Vec<NumericMatrix>| -> Result<()> {
        if dedup.find(&m, elements).is_some() {
            return Ok(());
        }
        if elements.len() == cap {
            return Err(Error::ClosureNotFinite { cap });
        }
        dedup.insert(&m, elements.len());
        elements.push(m);
        Ok(())
    };
    for g in &normalized {
        admit(g.clone(), &mut elements)?;
    }
    let mut next = 0;
    while next < elements.len() {
        let x = elements[next].clone();
        for g in &normalized {
            admit(&x * g, &mut elements)?;
        }
        next += 1;
    }
    Ok(elements)
}

fn unitarity_residual(u: &NumericMatrix, r: f64) -> f64 {
    let n = u.nrows();
    let target = NumericMatrix::identity(n, n).scale(r * r);
    (u.adjoint() * u - target).norm()
}

/// `R` with `R S R^-1` unitary for every `S` of a finite group `C`, from the
/// Cholesky factor `P = R*R` of `P = (1/|C|) Σ S*S`.
pub fn unitarize_bounded_group(group: &[NumericMatrix], tol: f64) -> Result<NumericMatrix> {
    let first = group.first().ok_or(Error::NoGenerators)?;
    let n = first.nrows();
    let mut p = NumericMatrix::zeros(n, n);
    for s in group {
        p += s.adjoint() * s;
    }
    p.unscale_mut(group.len() as f64);
    let p = (&p + p.adjoint()).unscale(2.0);
    let chol = Cholesky::new(p).ok_or(Error::NotPositiveDefinite)?;
    let r = chol.l().adjoint();
    let r_inv = r.clone().try_inverse().ok_or(Error::NotPositiveDefinite)?;
    let worst = group.iter().map(|s| unitarity_residual(&(&r * s * &r_inv), 1.0)).fold(0.0, f64::max);
    if worst > tol {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(r)
}

/// Orthonormal basis of the column span, numeric rank by relative threshold.
///
/// Pivoted Gram-Schmidt with reorthogonalization. The complex SVD is not used:
/// its left factor is inaccurate on small blocks.
fn column_basis(m: &NumericMatrix) -> NumericMatrix {
    let rows = m.nrows();
    let mut residual: Vec<DVector<Complex64>> = m.column_iter().map(|c| c.clone_owned()).collect();
    let scale = residual.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut basis: Vec<DVector<Complex64>> = Vec::new();
    if scale == 0.0 {
        return NumericMatrix::zeros(rows, 0);
    }
    while basis.len() < rows {
        let Some((k, norm)) = residual.iter().map(|c| c.norm()).enumerate().max_by(|a, b| a.1.total_cmp(&b.1)) else {
            break;
        };
        if norm <= RANK_THRESHOLD * scale {
            break;
        }
        let mut q = residual.swap_remove(k) / Complex64::from(norm);
        for b in &basis {
            let overlap = b.dotc(&q);
            q -= b * overlap;
        }
        let renorm = q.norm();
        if renorm == 0.0 {
            break;
        }
        q /= Complex64::from(renorm);
        for c in residual.iter_mut() {
            let overlap = q.dotc(c);
            *c -= &q * overlap;
        }
        basis.push(q);
    }
    NumericMatrix::from_columns(&basis)
}

/// Orthonormal basis of the orthogonal complement of orthonormal columns `w`.
fn orthogonal_complement(w: &NumericMatrix) -> NumericMatrix {
    let d = w.nrows();
    let projector = NumericMatrix::identity(d, d) - w * w.adjoint();
    let eigen = SymmetricEigen::new(projector);
    let keep: Vec<usize> = (0..d).filter(|&i| eigen.eigenvalues[i] > 0.5).collect();
    NumericMatrix::from_fn(d, keep.len(), |i, j| eigen.eigenvectors[(i, keep[j])])
}

fn algebra_rank(blocks: &[NumericMatrix]) -> usize {
    let d = blocks[0].nrows();
    let stacked = NumericMatrix::from_fn(d * d, blocks.len(), |k, j| blocks[j][(k / d, k % d)]);
    column_basis(&stacked).ncols()
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Splits the span of `v` (orthonormal columns) into minimal invariant pieces
/// of the unitary group `group`.
fn decompose(group: &[NumericMatrix], v: NumericMatrix, rng: &mut ChaCha8Rng, out: &mut Vec<NumericMatrix>) {
    let d = v.ncols();
    if d == 1 {
        out.push(v);
        return;
    }
    let restricted: Vec<NumericMatrix> = group.iter().map(|u| v.adjoint() * u * &v).collect();
    if algebra_rank(&restricted) == d * d {
        out.push(v);
        return;
    }
    // An eigenvector of a generic Hermitian algebra element lies in a single
    // isotypic component, so its orbit spans a proper invariant subspace.
    for _ in 0..8 {
        let mut x = NumericMatrix::zeros(d, d);
        for b in &restricted {
            x += b * random_complex(rng);
        }
        let h = &x + x.adjoint();
        let eigen = SymmetricEigen::new(h);
        let e = eigen.eigenvectors.column(0).clone_owned();
        let orbit = NumericMatrix::from_fn(d, restricted.len(), |i, j| (&restricted[j] * &e)[i]);
        let w = column_basis(&orbit);
        if w.ncols() > 0 && w.ncols() < d {
            let complement = orthogonal_complement(&w);
            decompose(group, &v * w, rng, out);
            decompose(group, &v * complement, rng, out);
            return;
        }
    }
    out.push(v);
}

pub fn block_unitarize(gens: &[NumericMatrix], cap: usize, tol: f64) -> Result<BlockUnitarizeResult> {
    let first = gens.first().ok_or(Error::NoGenerators)?;
    let n = first.nrows();
    let mut scales = Vec::with_capacity(gens.len());
    for (index, g) in gens.iter().enumerate() {
        let report = spectrum_on_circle(g, tol * (1.0 + first.norm()));
        if !report.on_circle {
            return Err(Error::NotOnCircle { index, deviation: report.max_deviation });
        }
        scales.push(normalize_scale(g)?.0);
    }
    let group = normalized_closure(gens, cap)?;
    let r = unitarize_bounded_group(&group, tol)?;
    let r_inv = r.clone().try_inverse().ok_or(Error::NotPositiveDefinite)?;
    let unitary: Vec<NumericMatrix> = group.iter().map(|s| &r * s * &r_inv).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(DECOMPOSE_SEED);
    let mut pieces = Vec::new();
    decompose(&unitary, NumericMatrix::identity(n, n), &mut rng, &mut pieces);

    // Re-unitarize each block on its own restricted group, then assemble.
    let mut columns = Vec::with_capacity(n);
    let mut block_dims = Vec::with_capacity(pieces.len());
    for piece in &pieces {
        let restricted: Vec<NumericMatrix> = unitary.iter().map(|u| piece.adjoint() * u * piece).collect();
        let rb = unitarize_bounded_group(&restricted, tol)?;
        let rb_inv = rb.try_inverse().ok_or(Error::NotPositiveDefinite)?;
        let frame = piece * rb_inv;
        columns.extend(frame.column_iter().map(|c| c.clone_owned()));
        block_dims.push(piece.ncols());
    }
    let similarity = &r_inv * NumericMatrix::from_columns(&columns);
    let x_inv = similarity.clone().try_inverse().ok_or(Error::SingularInput)?;

    let kinds: Vec<BlockKind> =
        block_dims.iter().map(|&d| if d == 1 { BlockKind::Scalar1x1 } else { BlockKind::ScaledUnitary }).collect();
    let mut residuals = vec![0.0f64; block_dims.len()];
    let mut off_block = 0.0f64;
    let samples = gens.iter().zip(&scales).map(|(g, &s)| (g, s)).chain(group.iter().map(|s| (s, 1.0)));
    for (m, scale) in samples {
        let t = &x_inv * m * &similarity;
        let mut offset = 0;
        for (b, &d) in block_dims.iter().enumerate() {
            let block = t.view((offset, offset), (d, d)).clone_owned();
            residuals[b] = residuals[b].max(unitarity_residual(&block, scale));
            for i in 0..n {
                for j in offset..offset + d {
                    if i < offset || i >= offset + d {
                        off_block = off_block.max(t[(i, j)].norm());
                    }
                }
            }
            offset += d;
        }
    }
    Ok(BlockUnitarizeResult { similarity, block_dims, kinds, residuals, off_block, group_order: group.len() })
}
