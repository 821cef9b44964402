//! Dense complex vectors and matrices, plus the few numerically delicate
//! primitives the learners lean on: span residuals, orthonormal frames and
//! unitary completion of a partial isometry.
//!
//! Vectors are column vectors. A matrix entry `(i, j)` carries amplitude from
//! basis state `j` to basis state `i`, so `M * v` advances a state by `M`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

/// Complex amplitude.
pub type Complex = Complex64;

/// Default threshold above which a residual counts as a new direction.
pub const TOL_RANK: f64 = 1e-9;
/// Default tolerance for isometry (Gram matrix) agreement.
pub const TOL_ISO: f64 = 1e-8;
/// Orthonormality tolerance maintained by [`OrthoFrame`].
pub const TOL_ORTHO: f64 = 1e-10;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension must be at least 1")]
    EmptyDimension,
    #[error("non-finite entry at position {0}")]
    NonFinite(usize),
    #[error("images are not an isometric copy of the domain: Gram entry ({row}, {col}) differs by {deviation:e}")]
    IsometryViolation { row: usize, col: usize, deviation: f64 },
    #[error("could not complete an orthonormal basis of dimension {dim} (found {found})")]
    CompletionFailed { dim: usize, found: usize },
}

pub type Result<T> = core::result::Result<T, LinalgError>;

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch { expected, found })
    }
}

fn is_finite(c: &Complex) -> bool {
    c.re.is_finite() && c.im.is_finite()
}

/// A dense column vector of amplitudes. Not necessarily normalized.
#[derive(Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex>,
}

impl ComplexVector {
    /// Builds a vector, rejecting empty input and non-finite entries.
    pub fn new(entries: Vec<Complex>) -> Result<Self> {
        if entries.is_empty() {
            return Err(LinalgError::EmptyDimension);
        }
        if let Some(pos) = entries.iter().position(|c| !is_finite(c)) {
            return Err(LinalgError::NonFinite(pos));
        }
        Ok(ComplexVector { entries })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&re| Complex::new(re, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "vector dimension must be at least 1");
        ComplexVector { entries: vec![ZERO; dim] }
    }

    /// The standard basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dimension {dim}");
        let mut v = Self::zeros(dim);
        v.entries[index] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.entries
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Complex> {
        self.entries.iter()
    }

    pub fn into_vec(self) -> Vec<Complex> {
        self.entries
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(Complex::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    /// `⟨self, other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &ComplexVector) -> Complex {
        debug_assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, factor: Complex) -> ComplexVector {
        ComplexVector {
            entries: self.entries.iter().map(|c| c * factor).collect(),
        }
    }

    /// `self += factor * other`.
    pub fn axpy(&mut self, factor: Complex, other: &ComplexVector) {
        debug_assert_eq!(self.dim(), other.dim());
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += factor * b;
        }
    }

    pub fn sub(&self, other: &ComplexVector) -> ComplexVector {
        debug_assert_eq!(self.dim(), other.dim());
        ComplexVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &ComplexVector) -> f64 {
        libm::sqrt(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum(),
        )
    }

    /// Keeps only the coordinates listed in `indices`, zeroing the rest.
    pub fn project(&self, indices: &[usize]) -> ComplexVector {
        let mut out = Self::zeros(self.dim());
        for &i in indices {
            out.entries[i] = self.entries[i];
        }
        out
    }

    /// `Σ_{i ∈ indices} |v_i|²`.
    pub fn weight_on(&self, indices: &[usize]) -> f64 {
        indices.iter().map(|&i| self.entries[i].norm_sqr()).sum()
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex;
    fn index(&self, i: usize) -> &Complex {
        &self.entries[i]
    }
}

impl IndexMut<usize> for ComplexVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex {
        &mut self.entries[i]
    }
}

impl fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.iter()).finish()
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be at least 1");
        ComplexMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major data.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::EmptyDimension);
        }
        check_dim(rows * cols, data.len())?;
        if let Some(pos) = data.iter().position(|c| !is_finite(c)) {
            return Err(LinalgError::NonFinite(pos));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            check_dim(cols, row.len())?;
            data.extend_from_slice(row);
        }
        Self::from_row_major(rows.len(), cols, data)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex>> = rows
            .iter()
            .map(|r| r.iter().map(|&re| Complex::new(re, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Square matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[ComplexVector]) -> Result<Self> {
        let n = columns.first().map_or(0, ComplexVector::dim);
        if n == 0 {
            return Err(LinalgError::EmptyDimension);
        }
        let mut m = Self::zeros(n, columns.len());
        for (j, col) in columns.iter().enumerate() {
            check_dim(n, col.dim())?;
            for i in 0..n {
                m[(i, j)] = col[i];
            }
        }
        Ok(m)
    }

    /// Permutation matrix sending `e_j` to `e_{perm[j]}`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        for (j, &i) in perm.iter().enumerate() {
            m[(i, j)] = ONE;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_row_major(&self) -> &[Complex] {
        &self.data
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector {
            entries: (0..self.rows).map(|i| self[(i, j)]).collect(),
        }
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.cols, v.dim(), "matrix-vector dimension mismatch");
        ComplexVector {
            entries: (0..self.rows)
                .map(|i| self.row(i).iter().zip(v.iter()).map(|(a, b)| a * b).sum())
                .collect(),
        }
    }

    pub fn mul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert!(self.rows == other.rows && self.cols == other.cols);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(Complex::norm_sqr).sum())
    }

    /// Swaps columns `a` and `b` in place.
    pub fn swap_columns(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `‖M†M − I‖_F`; zero exactly when `M` is unitary.
    pub fn unitarity_defect(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut sum = 0.0;
        for a in 0..n {
            for b in 0..n {
                let mut g = ZERO;
                for i in 0..n {
                    g += self[(i, a)].conj() * self[(i, b)];
                }
                if a == b {
                    g -= ONE;
                }
                sum += g.norm_sqr();
            }
        }
        Ok(libm::sqrt(sum))
    }
}

/// Free-function form of [`ComplexMatrix::unitarity_defect`].
pub fn unitarity_defect(m: &ComplexMatrix) -> Result<f64> {
    m.unitarity_defect()
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[Complex]> = (0..self.rows).map(|i| self.row(i)).collect();
        f.debug_list().entries(rows).finish()
    }
}

/// Projection of a vector onto the orthogonal complement of a frame.
#[derive(Debug, Clone)]
pub struct Residual {
    pub vector: ComplexVector,
    pub norm: f64,
    /// `⟨f_j, v⟩` for every frame vector `f_j`, in frame order.
    pub coefficients: Vec<Complex>,
}

/// An orthonormal list of vectors in a fixed ambient dimension.
#[derive(Debug, Clone)]
pub struct OrthoFrame {
    dim: usize,
    frame: Vec<ComplexVector>,
}

impl OrthoFrame {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "frame dimension must be at least 1");
        OrthoFrame { dim, frame: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.frame.len() == self.dim
    }

    pub fn vectors(&self) -> &[ComplexVector] {
        &self.frame
    }

    /// Modified Gram-Schmidt projection with one re-orthogonalization pass.
    pub fn residual(&self, v: &ComplexVector) -> Result<Residual> {
        check_dim(self.dim, v.dim())?;
        let mut r = v.clone();
        let mut coefficients = vec![ZERO; self.frame.len()];
        for _pass in 0..2 {
            for (c, f) in coefficients.iter_mut().zip(&self.frame) {
                let proj = f.inner(&r);
                r.axpy(-proj, f);
                *c += proj;
            }
        }
        let norm = r.norm();
        Ok(Residual { vector: r, norm, coefficients })
    }

    /// Appends the normalized residual of `v` when it exceeds `tol_rank`.
    ///
    /// Returns whether the frame grew.
    pub fn extend(&mut self, v: &ComplexVector, tol_rank: f64) -> Result<bool> {
        Ok(self.extend_with_residual(v, tol_rank)?.0)
    }

    /// Like [`extend`](Self::extend) but also hands back the residual that
    /// decided the outcome.
    pub fn extend_with_residual(
        &mut self,
        v: &ComplexVector,
        tol_rank: f64,
    ) -> Result<(bool, Residual)> {
        let res = self.residual(v)?;
        if self.is_full() || !(res.norm > tol_rank) {
            return Ok((false, res));
        }
        self.frame.push(res.vector.scale(Complex::new(1.0 / res.norm, 0.0)));
        Ok((true, res))
    }

    /// Largest deviation of the frame's Gram matrix from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.frame.iter().enumerate() {
            for (j, b) in self.frame.iter().enumerate() {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((a.inner(b) - target).norm_sqr());
            }
        }
        libm::sqrt(worst)
    }

    /// Fills the frame up to a full orthonormal basis, trying standard basis
    /// vectors in index order.
    fn complete(&mut self, tol_rank: f64) -> Result<()> {
        // Skipped candidates all have residual below the threshold, and the
        // squared residuals of e_0..e_{n-1} sum to the missing dimension, so a
        // threshold under 1/sqrt(n) always finds enough candidates.
        let threshold = tol_rank.max(0.5 / libm::sqrt(self.dim as f64));
        for i in 0..self.dim {
            if self.is_full() {
                break;
            }
            self.extend(&ComplexVector::basis(self.dim, i), threshold)?;
        }
        if self.is_full() {
            Ok(())
        } else {
            Err(LinalgError::CompletionFailed { dim: self.dim, found: self.frame.len() })
        }
    }
}

/// Free-function form of [`OrthoFrame::residual`].
pub fn residual(v: &ComplexVector, frame: &OrthoFrame) -> Result<Residual> {
    frame.residual(v)
}

/// Free-function form of [`OrthoFrame::extend`].
pub fn extend_frame(frame: &mut OrthoFrame, v: &ComplexVector, tol_rank: f64) -> Result<bool> {
    frame.extend(v, tol_rank)
}

/// Orthonormalizes `vectors` in order, dropping near-dependent ones.
pub fn orthonormalize(dim: usize, vectors: &[ComplexVector], tol_rank: f64) -> Result<OrthoFrame> {
    let mut frame = OrthoFrame::new(dim);
    for v in vectors {
        frame.extend(v, tol_rank)?;
    }
    Ok(frame)
}

/// Finds a unitary `V` with `V · domain[j] = images[j]` for every frame vector.
///
/// The images must reproduce the domain's Gram matrix (the identity) within
/// `tol_iso`; otherwise no unitary exists and `IsometryViolation` is returned.
/// The images are re-orthonormalized, both sides are completed to full bases
/// from the standard basis, and `V` pairs the two bases. Its action on the
/// complement of the domain is therefore arbitrary but deterministic.
pub fn complete_isometry(
    domain: &OrthoFrame,
    images: &[ComplexVector],
    tol_iso: f64,
) -> Result<ComplexMatrix> {
    let n = domain.dim();
    check_dim(domain.len(), images.len())?;
    for img in images {
        check_dim(n, img.dim())?;
    }
    let d = domain.vectors();
    for i in 0..images.len() {
        for j in 0..images.len() {
            let deviation = (d[i].inner(&d[j]) - images[i].inner(&images[j])).norm();
            if !(deviation <= tol_iso) {
                return Err(LinalgError::IsometryViolation { row: i, col: j, deviation });
            }
        }
    }

    let mut image_frame = OrthoFrame::new(n);
    for img in images {
        // Norms are within tol_iso of 1 here, so every image is kept.
        if !image_frame.extend(img, 0.5)? {
            return Err(LinalgError::IsometryViolation { row: 0, col: 0, deviation: 1.0 });
        }
    }
    let mut domain_full = domain.clone();
    domain_full.complete(TOL_RANK)?;
    image_frame.complete(TOL_RANK)?;

    // V = Σ_j h_j d_j†
    let mut v = ComplexMatrix::zeros(n, n);
    for (h, dv) in image_frame.vectors().iter().zip(domain_full.vectors()) {
        for i in 0..n {
            let hi = h[i];
            for j in 0..n {
                v[(i, j)] += hi * dv[j].conj();
            }
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn frame_of(dim: usize, vs: &[ComplexVector]) -> OrthoFrame {
        orthonormalize(dim, vs, TOL_RANK).unwrap()
    }

    #[test]
    fn defect_of_identity_is_zero() {
        assert_eq!(ComplexMatrix::identity(3).unitarity_defect().unwrap(), 0.0);
    }

    #[test]
    fn defect_of_diagonal_scaling() {
        // M†M = diag(1, 4), minus I leaves diag(0, 3).
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]]).unwrap();
        assert_eq!(m.unitarity_defect().unwrap(), 3.0);
    }

    #[test]
    fn defect_rejects_rectangular() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(m.unitarity_defect(), Err(LinalgError::NotSquare { rows: 2, cols: 3 })));
    }

    #[test]
    fn residual_against_empty_frame() {
        let v = ComplexVector::from_real(&[1.0, 0.0]).unwrap();
        let r = OrthoFrame::new(2).residual(&v).unwrap();
        assert_eq!(r.norm, 1.0);
        assert!(r.coefficients.is_empty());
    }

    #[test]
    fn residual_of_frame_member() {
        let e1 = ComplexVector::basis(2, 1);
        let r = residual(&e1, &frame_of(2, std::slice::from_ref(&e1))).unwrap();
        assert_eq!(r.norm, 0.0);
        assert_eq!(r.coefficients, vec![ONE]);
    }

    #[test]
    fn residual_hand_projection() {
        let v = ComplexVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        let r = residual(&v, &frame_of(2, &[ComplexVector::basis(2, 0)])).unwrap();
        assert!((r.norm - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((r.coefficients[0] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((r.vector[1] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn residual_dimension_mismatch() {
        let v = ComplexVector::zeros(3);
        assert!(matches!(
            OrthoFrame::new(2).residual(&v),
            Err(LinalgError::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn extend_empty_frame() {
        let mut f = OrthoFrame::new(2);
        assert!(extend_frame(&mut f, &ComplexVector::basis(2, 1), 1e-9).unwrap());
        assert_eq!(f.vectors(), &[ComplexVector::basis(2, 1)]);
    }

    #[test]
    fn extend_ignores_global_phase() {
        let mut f = frame_of(2, &[ComplexVector::basis(2, 0)]);
        for k in 0..8 {
            let theta = k as f64 * 0.7;
            let v = ComplexVector::basis(2, 0).scale(c(libm::cos(theta), libm::sin(theta)));
            assert!(!f.extend(&v, 1e-9).unwrap());
        }
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn extend_normalizes_residual() {
        let mut f = frame_of(2, &[ComplexVector::basis(2, 0)]);
        let v = ComplexVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        assert!(f.extend(&v, 1e-9).unwrap());
        assert!(f.vectors()[1].distance(&ComplexVector::basis(2, 1)) < 1e-15);
    }

    #[test]
    fn zero_vector_never_extends() {
        let mut f = OrthoFrame::new(3);
        assert!(!f.extend(&ComplexVector::zeros(3), 1e-9).unwrap());
        assert!(f.is_empty());
    }

    #[test]
    fn full_frame_does_not_grow() {
        let mut f = frame_of(2, &[ComplexVector::basis(2, 0), ComplexVector::basis(2, 1)]);
        let v = ComplexVector::from_real(&[0.3, 0.4]).unwrap();
        assert!(!f.extend(&v, 1e-9).unwrap());
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn completion_identity() {
        let f = frame_of(2, &[ComplexVector::basis(2, 0), ComplexVector::basis(2, 1)]);
        let v = complete_isometry(&f, f.vectors(), TOL_ISO).unwrap();
        assert_eq!(v, ComplexMatrix::identity(2));
    }

    #[test]
    fn completion_swap() {
        let f = frame_of(2, &[ComplexVector::basis(2, 0), ComplexVector::basis(2, 1)]);
        let images = [ComplexVector::basis(2, 1), ComplexVector::basis(2, 0)];
        let v = complete_isometry(&f, &images, TOL_ISO).unwrap();
        assert_eq!(v, ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap());
    }

    #[test]
    fn completion_rejects_norm_change() {
        let f = frame_of(2, &[ComplexVector::basis(2, 0)]);
        let images = [ComplexVector::from_real(&[0.5, 0.0]).unwrap()];
        assert!(matches!(
            complete_isometry(&f, &images, TOL_ISO),
            Err(LinalgError::IsometryViolation { .. })
        ));
    }

    #[test]
    fn completion_rejects_lost_orthogonality() {
        let f = frame_of(2, &[ComplexVector::basis(2, 0), ComplexVector::basis(2, 1)]);
        let images = [ComplexVector::basis(2, 0), ComplexVector::basis(2, 0)];
        assert!(complete_isometry(&f, &images, TOL_ISO).is_err());
    }

    #[test]
    fn completion_of_empty_frame_is_unitary() {
        let f = OrthoFrame::new(4);
        let v = complete_isometry(&f, &[], TOL_ISO).unwrap();
        assert!(v.unitarity_defect().unwrap() < 1e-14);
    }

    #[test]
    fn completion_with_skewed_domain() {
        // Domain spans a direction with no standard-basis alignment; the
        // complement search has to skip a dependent candidate.
        let d = ComplexVector::from_real(&[0.6, 0.8, 0.0]).unwrap();
        let img = ComplexVector::new(vec![ZERO, ZERO, c(0.0, 1.0)]).unwrap();
        let f = frame_of(3, std::slice::from_ref(&d));
        let v = complete_isometry(&f, std::slice::from_ref(&img), TOL_ISO).unwrap();
        assert!(v.unitarity_defect().unwrap() < 1e-12);
        assert!(v.mul_vec(&d).distance(&img) < 1e-12);
    }

    #[test]
    fn permutation_matrix_is_unitary() {
        let p = ComplexMatrix::permutation(&[2, 0, 1]);
        assert_eq!(p.unitarity_defect().unwrap(), 0.0);
        assert_eq!(p.mul_vec(&ComplexVector::basis(3, 0)), ComplexVector::basis(3, 2));
    }

    #[test]
    fn vector_rejects_nan() {
        assert!(matches!(
            ComplexVector::new(vec![ONE, c(f64::NAN, 0.0)]),
            Err(LinalgError::NonFinite(1))
        ));
        assert!(matches!(ComplexVector::new(vec![]), Err(LinalgError::EmptyDimension)));
    }
}
