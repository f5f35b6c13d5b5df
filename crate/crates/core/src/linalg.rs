//! Dense complex linear algebra at desk scale.
//!
//! Vectors and matrices are plain row-major buffers of [`C64`]. Multipartite
//! registers use the big-endian convention: for subsystem dimensions
//! `[d0, d1, ..]` the basis state `|i0⟩|i1⟩..` sits at offset
//! `((i0·d1 + i1)·d2 + i2)..`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::spectrum::SchmidtSpectrum;

pub type C64 = Complex<f64>;

/// Squared singular values at or below this are treated as zero.
pub const RANK_THRESHOLD: f64 = 1e-10;

/// Tolerance used by [`ComplexVec::is_normalized`] for state vectors.
pub const NORM_TOLERANCE: f64 = 1e-12;

const JACOBI_EPS: f64 = 1e-15;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVec {
    entries: Vec<C64>,
}

impl ComplexVec {
    pub fn new(entries: Vec<C64>) -> Self {
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: vec![C64::new(0.0, 0.0); dim],
        }
    }

    /// The computational basis state `|index⟩` of a `dim`-level system.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[index] = C64::new(1.0, 0.0);
        v
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self {
            entries: values.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<C64> {
        self.entries
    }

    pub fn iter(&self) -> core::slice::Iter<'_, C64> {
        self.entries.iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        Float::sqrt(self.norm_sqr())
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// Returns the unit vector along `self`, failing on a zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let norm_sqr = self.norm_sqr();
        if norm_sqr.is_nan() || norm_sqr <= 0.0 {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(self.scale(C64::new(1.0 / Float::sqrt(norm_sqr), 0.0)))
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self {
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.entries.iter().zip(&other.entries).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn conj(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Pads with zeros up to `dim` entries.
    pub fn embed(&self, dim: usize) -> Self {
        debug_assert!(dim >= self.dim());
        let mut entries = self.entries.clone();
        entries.resize(dim, C64::new(0.0, 0.0));
        Self { entries }
    }
}

impl Index<usize> for ComplexVec {
    type Output = C64;

    fn index(&self, i: usize) -> &C64 {
        &self.entries[i]
    }
}

impl IndexMut<usize> for ComplexVec {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.entries[i]
    }
}

impl FromIterator<C64> for ComplexVec {
    fn from_iter<I: IntoIterator<Item = C64>>(iter: I) -> Self {
        Self {
            entries: iter.into_iter().collect(),
        }
    }
}

/// Tensor product `a ⊗ b`; entry `i·b.dim + j` is `a_i·b_j`.
pub fn tensor(a: &ComplexVec, b: &ComplexVec) -> ComplexVec {
    let mut out = Vec::with_capacity(a.dim() * b.dim());
    for x in a.iter() {
        for y in b.iter() {
            out.push(x * y);
        }
    }
    ComplexVec::new(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMat {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl ComplexMat {
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "matrix entries",
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(
            dim,
            dim,
            |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) },
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[ComplexVec]) -> Result<Self> {
        let rows = columns.first().map_or(0, ComplexVec::dim);
        if let Some(bad) = columns.iter().find(|c| c.dim() != rows) {
            return Err(Error::DimensionMismatch {
                what: "matrix column",
                expected: rows,
                found: bad.dim(),
            });
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i]))
    }

    /// The roots-of-unity table `e_{k,k'} = exp(2πi·k·k'/n)` with `k, k'`
    /// running over `1..=n`. Dividing by `√n` gives a unitary.
    pub fn roots_of_unity(n: usize) -> Self {
        Self::from_fn(n, n, |k, kp| root_of_unity(((k + 1) * (kp + 1)) as f64, n as f64))
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &ComplexVec) -> Self {
        Self::from_fn(v.dim(), v.dim(), |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn column(&self, j: usize) -> ComplexVec {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                what: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] += a * other.get(l, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &ComplexVec) -> Result<ComplexVec> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                what: "matrix-vector product",
                expected: self.cols,
                found: v.dim(),
            });
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `|M†M − I|`.
    pub fn unitarity_residual(&self) -> f64 {
        let gram = self.adjoint().matmul(self).expect("adjoint shapes always agree");
        gram.max_abs_diff(&Self::identity(self.cols))
    }
}

pub(crate) fn root_of_unity(numer: f64, denom: f64) -> C64 {
    C64::from_polar(1.0, 2.0 * core::f64::consts::PI * numer / denom)
}

/// Interpretation of a vector as a state on `A ⊗ B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteShape {
    pub dim_a: usize,
    pub dim_b: usize,
}

impl BipartiteShape {
    pub fn new(dim_a: usize, dim_b: usize) -> Self {
        Self { dim_a, dim_b }
    }

    pub fn total(&self) -> usize {
        self.dim_a * self.dim_b
    }

    fn check(&self, dim: usize) -> Result<()> {
        if dim != self.total() || self.total() == 0 {
            return Err(Error::ShapeMismatch {
                dim_a: self.dim_a,
                dim_b: self.dim_b,
                found: dim,
            });
        }
        Ok(())
    }

    /// Reshapes `state` into the `dim_a × dim_b` coefficient matrix.
    pub fn reshape(&self, state: &ComplexVec) -> Result<ComplexMat> {
        self.check(state.dim())?;
        ComplexMat::new(self.dim_a, self.dim_b, state.entries().to_vec())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Partial trace of a density matrix on `A ⊗ B`, keeping `keep`.
pub fn partial_trace(rho: &ComplexMat, shape: BipartiteShape, keep: Subsystem) -> Result<ComplexMat> {
    shape.check(rho.rows())?;
    shape.check(rho.cols())?;
    let BipartiteShape { dim_a, dim_b } = shape;
    Ok(match keep {
        Subsystem::A => ComplexMat::from_fn(dim_a, dim_a, |i, ip| {
            (0..dim_b).map(|j| rho.get(i * dim_b + j, ip * dim_b + j)).sum()
        }),
        Subsystem::B => ComplexMat::from_fn(dim_b, dim_b, |j, jp| {
            (0..dim_a).map(|i| rho.get(i * dim_b + j, i * dim_b + jp)).sum()
        }),
    })
}

/// Applies `op` to subsystem `target` of a register with subsystem
/// dimensions `dims`, acting as the identity elsewhere.
pub fn apply_on(op: &ComplexMat, state: &ComplexVec, dims: &[usize], target: usize) -> Result<ComplexVec> {
    let total: usize = dims.iter().product();
    if state.dim() != total {
        return Err(Error::DimensionMismatch {
            what: "register",
            expected: total,
            found: state.dim(),
        });
    }
    let dt = dims[target];
    if op.rows() != dt || op.cols() != dt {
        return Err(Error::DimensionMismatch {
            what: "subsystem operator",
            expected: dt,
            found: op.rows(),
        });
    }
    let outer: usize = dims[..target].iter().product();
    let inner: usize = dims[target + 1..].iter().product();
    let mut out = ComplexVec::zeros(total);
    for hi in 0..outer {
        for lo in 0..inner {
            for r in 0..dt {
                let mut acc = C64::new(0.0, 0.0);
                for c in 0..dt {
                    acc += op.get(r, c) * state[(hi * dt + c) * inner + lo];
                }
                out[(hi * dt + r) * inner + lo] = acc;
            }
        }
    }
    Ok(out)
}

/// Reorders the subsystems of a register: output subsystem `i` is input
/// subsystem `perm[i]`.
pub fn permute_subsystems(state: &ComplexVec, dims: &[usize], perm: &[usize]) -> Result<ComplexVec> {
    let total: usize = dims.iter().product();
    if state.dim() != total {
        return Err(Error::DimensionMismatch {
            what: "register",
            expected: total,
            found: state.dim(),
        });
    }
    if perm.len() != dims.len() {
        return Err(Error::DimensionMismatch {
            what: "permutation",
            expected: dims.len(),
            found: perm.len(),
        });
    }
    let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut out = ComplexVec::zeros(total);
    let mut digits = vec![0usize; dims.len()];
    for (flat, amp) in state.iter().enumerate() {
        let mut rest = flat;
        for (i, &d) in dims.iter().enumerate().rev() {
            digits[i] = rest % d;
            rest /= d;
        }
        let mut idx = 0;
        for (i, &p) in perm.iter().enumerate() {
            idx = idx * out_dims[i] + digits[p];
        }
        out[idx] = *amp;
    }
    Ok(out)
}

/// Thin singular value decomposition `A = Σ_k σ_k u_k v_k†`, sorted by
/// descending `σ_k`. Columns with `σ_k = 0` carry a zero `u_k`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub left: Vec<ComplexVec>,
    pub right: Vec<ComplexVec>,
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd(a: &ComplexMat) -> Svd {
    let (m, n) = (a.rows(), a.cols());
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..m).map(|i| a.get(i, j)).collect()).collect();
    let mut v: Vec<Vec<C64>> = (0..n).map(|j| ComplexVec::basis(n, j).into_entries()).collect();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= JACOBI_EPS * Float::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let unphase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + Float::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / Float::sqrt(1.0 + t * t);
                let s = c * t;
                rotate_pair(&mut cols, p, q, unphase, c, s);
                rotate_pair(&mut v, p, q, unphase, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut triples: Vec<(f64, ComplexVec, ComplexVec)> = cols
        .into_iter()
        .zip(v)
        .map(|(col, vcol)| {
            let col = ComplexVec::new(col);
            let sigma = col.norm();
            let u = if sigma > 0.0 {
                col.scale(C64::new(1.0 / sigma, 0.0))
            } else {
                ComplexVec::zeros(m)
            };
            (sigma, u, ComplexVec::new(vcol))
        })
        .collect();
    triples.sort_by(|x, y| y.0.total_cmp(&x.0));

    let mut out = Svd {
        singular_values: Vec::new(),
        left: Vec::new(),
        right: Vec::new(),
    };
    for (sigma, u, vcol) in triples {
        out.singular_values.push(sigma);
        out.left.push(u);
        out.right.push(vcol);
    }
    out
}

fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, unphase: C64, c: f64, s: f64) {
    let (head, tail) = cols.split_at_mut(q);
    let (cp, cq) = (&mut head[p], &mut tail[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let ap = *x;
        let aq = *y * unphase;
        *x = ap * c - aq * s;
        *y = ap * s + aq * c;
    }
}

/// Schmidt form `Σ_k √p_k |a_k⟩⊗|b_k⟩` of a bipartite pure state.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub spectrum: SchmidtSpectrum,
    pub basis_a: Vec<ComplexVec>,
    pub basis_b: Vec<ComplexVec>,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.spectrum.len()
    }

    pub fn reconstruct(&self) -> ComplexVec {
        let dim = self.basis_a[0].dim() * self.basis_b[0].dim();
        let mut acc = ComplexVec::zeros(dim);
        for ((p, a), b) in self.spectrum.probs().iter().zip(&self.basis_a).zip(&self.basis_b) {
            acc = acc.add(&tensor(a, b).scale(C64::new(Float::sqrt(*p), 0.0)));
        }
        acc
    }
}

/// Schmidt decomposition of a normalized state on `shape`.
///
/// The coefficients `√p_k` come out real and nonnegative; any phase sits in
/// `basis_b`. Components with `p_k ≤ RANK_THRESHOLD` are dropped.
pub fn schmidt_decompose(state: &ComplexVec, shape: BipartiteShape) -> Result<SchmidtDecomposition> {
    let coeffs = shape.reshape(state)?;
    let norm_sqr = state.norm_sqr();
    if (norm_sqr - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm_sqr });
    }
    // M = U Σ V†, so M_ij = Σ_k σ_k U_ik conj(V_jk) and |b_k⟩ = conj(v_k).
    let Svd {
        singular_values,
        left,
        right,
    } = svd(&coeffs);
    let mut probs = Vec::new();
    let mut basis_a = Vec::new();
    let mut basis_b = Vec::new();
    for ((sigma, u), v) in singular_values.into_iter().zip(left).zip(right) {
        let p = sigma * sigma;
        if p > RANK_THRESHOLD {
            probs.push(p);
            basis_a.push(u);
            basis_b.push(v.conj());
        }
    }
    Ok(SchmidtDecomposition {
        spectrum: SchmidtSpectrum::from_decomposition(probs),
        basis_a,
        basis_b,
    })
}

/// Number of Schmidt coefficients above [`RANK_THRESHOLD`].
pub fn schmidt_number(state: &ComplexVec, shape: BipartiteShape) -> Result<usize> {
    Ok(schmidt_decompose(state, shape)?.rank())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn bell() -> ComplexVec {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        ComplexVec::from_real(&[h, 0.0, 0.0, h])
    }

    #[test]
    fn tensor_of_basis_states() {
        let up = ComplexVec::from_real(&[1.0, 0.0]);
        let down = ComplexVec::from_real(&[0.0, 1.0]);
        assert_eq!(tensor(&up, &down), ComplexVec::from_real(&[0.0, 1.0, 0.0, 0.0]));
        assert_eq!(tensor(&up, &up), ComplexVec::from_real(&[1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn tensor_matches_double_loop() {
        let a = ComplexVec::new(vec![c(0.3, -0.1), c(-0.7, 0.2)]);
        let b = ComplexVec::new(vec![c(1.0, 0.5), c(0.0, -2.0), c(0.25, 0.25)]);
        let t = tensor(&a, &b);
        assert_eq!(t.dim(), 6);
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(t[i * 3 + j], a[i] * b[j]);
            }
        }
    }

    #[test]
    fn bell_state_spectrum() {
        let dec = schmidt_decompose(&bell(), BipartiteShape::new(2, 2)).unwrap();
        assert_eq!(dec.rank(), 2);
        for p in dec.spectrum.probs() {
            assert!((p - 0.5).abs() < 1e-12);
        }
        assert!(dec.reconstruct().max_abs_diff(&bell()) < 1e-12);
    }

    #[test]
    fn product_state_has_rank_one() {
        let s = tensor(&ComplexVec::from_real(&[1.0, 0.0]), &ComplexVec::from_real(&[0.0, 1.0]));
        assert_eq!(schmidt_number(&s, BipartiteShape::new(2, 2)).unwrap(), 1);
        let dec = schmidt_decompose(&s, BipartiteShape::new(2, 2)).unwrap();
        assert!((dec.spectrum.probs()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn worked_example_spectrum() {
        let mut s = ComplexVec::zeros(9);
        s[0] = c((0.5f64).sqrt(), 0.0);
        s[4] = c((1.0f64 / 3.0).sqrt(), 0.0);
        s[8] = c((1.0f64 / 6.0).sqrt(), 0.0);
        let dec = schmidt_decompose(&s, BipartiteShape::new(3, 3)).unwrap();
        let expected = [0.5, 1.0 / 3.0, 1.0 / 6.0];
        assert_eq!(dec.rank(), 3);
        for (p, e) in dec.spectrum.probs().iter().zip(expected) {
            assert!((p - e).abs() < 1e-12, "{p} vs {e}");
        }
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let err = schmidt_decompose(&bell(), BipartiteShape::new(2, 3)).unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch { found: 4, .. }));
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        let s = ComplexVec::from_real(&[1.0, 0.0, 0.0, 1.0]);
        assert!(matches!(
            schmidt_decompose(&s, BipartiteShape::new(2, 2)),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn schmidt_of_rectangular_complex_state() {
        // 2x3 state with complex amplitudes and full rank 2
        let s = ComplexVec::new(vec![
            c(0.1, 0.2),
            c(-0.3, 0.1),
            c(0.4, 0.0),
            c(0.0, -0.5),
            c(0.2, 0.2),
            c(-0.1, 0.3),
        ])
        .normalized()
        .unwrap();
        for shape in [BipartiteShape::new(2, 3), BipartiteShape::new(3, 2)] {
            let dec = schmidt_decompose(&s, shape).unwrap();
            assert_eq!(dec.rank(), 2);
            assert!((dec.spectrum.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(dec.reconstruct().max_abs_diff(&s) < 1e-12);
        }
    }

    #[test]
    fn roots_of_unity_table_is_unitary_after_scaling() {
        for n in 1..6 {
            let e = ComplexMat::roots_of_unity(n);
            let scaled = ComplexMat::from_fn(n, n, |i, j| e.get(i, j) / (n as f64).sqrt());
            assert!(scaled.unitarity_residual() < 1e-12);
            // e_{n,n} = 1
            assert!((e.get(n - 1, n - 1) - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_of_bell_is_maximally_mixed() {
        let rho = ComplexMat::outer(&bell());
        for keep in [Subsystem::A, Subsystem::B] {
            let r = partial_trace(&rho, BipartiteShape::new(2, 2), keep).unwrap();
            let half = ComplexMat::from_fn(2, 2, |i, j| if i == j { c(0.5, 0.0) } else { c(0.0, 0.0) });
            assert!(r.max_abs_diff(&half) < 1e-15);
        }
    }

    #[test]
    fn apply_on_matches_explicit_kron() {
        let x = ComplexMat::new(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let a = ComplexVec::new(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        let b = ComplexVec::new(vec![c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let s = tensor(&a, &b);
        let left = apply_on(&x, &s, &[2, 3], 0).unwrap();
        assert_eq!(left, tensor(&x.mul_vec(&a).unwrap(), &b));
        let y = ComplexMat::from_fn(3, 3, |i, j| if (i + 1) % 3 == j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let right = apply_on(&y, &s, &[2, 3], 1).unwrap();
        assert_eq!(right, tensor(&a, &y.mul_vec(&b).unwrap()));
    }

    #[test]
    fn permute_swaps_factors() {
        let a = ComplexVec::new(vec![c(1.0, 0.0), c(2.0, 0.0)]);
        let b = ComplexVec::new(vec![c(3.0, 0.0), c(4.0, 0.0), c(5.0, 0.0)]);
        let swapped = permute_subsystems(&tensor(&a, &b), &[2, 3], &[1, 0]).unwrap();
        assert_eq!(swapped, tensor(&b, &a));
    }

    #[test]
    fn svd_of_zero_matrix() {
        let out = svd(&ComplexMat::zeros(2, 3));
        assert!(out.singular_values.iter().all(|&s| s == 0.0));
    }
}
