//! Dense complex linear algebra with explicit tolerances.
//!
//! Everything downstream works on [`ComplexMatrix`], an alias for the
//! dynamically sized `nalgebra` matrix over `Complex64`. Decompositions
//! (eigenvalues, SVD, Hermitian eigenproblems) are delegated to `faer`;
//! `nalgebra` only carries the data and the block arithmetic. Outputs are
//! sorted so identical inputs give identical results.

use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Eigenvalues closer than this (relative to `1 + |λ|`) are treated as one
/// cluster when counting distinct eigenvalues.
pub const CLUSTER_RADIUS: f64 = 1e-6;

/// An eigenvalue is on the imaginary axis when `|Re λ| <= AXIS_TOL * (1 + |λ|)`.
pub const AXIS_TOL: f64 = 1e-8;

/// Absolute and relative tolerance pair. A quantity of natural scale `s` is
/// treated as zero when it does not exceed `abs + rel * s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-9,
            rel: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Result<Self> {
        if !(abs > 0.0 && abs.is_finite()) || !(rel > 0.0 && rel.is_finite()) {
            return Err(Error::Domain(format!(
                "tolerances must be positive and finite (abs={abs}, rel={rel})"
            )));
        }
        Ok(Tolerance { abs, rel })
    }

    #[inline]
    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs + self.rel * scale
    }
}

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a complex matrix from real row-major data. Panics on a length
/// mismatch; meant for literals.
pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> ComplexMatrix {
    assert_eq!(data.len(), rows * cols, "real_matrix: wrong data length");
    ComplexMatrix::from_row_iterator(rows, cols, data.iter().map(|&x| c(x, 0.0)))
}

/// Checked constructor from row-major complex data.
pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<ComplexMatrix> {
    if data.len() != rows * cols {
        return Err(Error::dim(
            "from_row_major",
            format!("{} entries for a {rows}x{cols} matrix", data.len()),
        ));
    }
    let m = ComplexMatrix::from_row_iterator(rows, cols, data);
    ensure_finite(&m)?;
    Ok(m)
}

pub fn ensure_finite(m: &ComplexMatrix) -> Result<()> {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(rows, cols)
}

pub fn scalar(z: Complex64) -> ComplexMatrix {
    ComplexMatrix::from_element(1, 1, z)
}

pub fn diag_real(values: &[f64]) -> ComplexMatrix {
    let n = values.len();
    let mut m = zeros(n, n);
    for (i, &v) in values.iter().enumerate() {
        m[(i, i)] = c(v, 0.0);
    }
    m
}

/// `[[a, b], [c, d]]` block assembly. Block shapes must be conformal.
pub fn block2x2(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    cc: &ComplexMatrix,
    d: &ComplexMatrix,
) -> ComplexMatrix {
    debug_assert_eq!(a.nrows(), b.nrows());
    debug_assert_eq!(cc.nrows(), d.nrows());
    debug_assert_eq!(a.ncols(), cc.ncols());
    debug_assert_eq!(b.ncols(), d.ncols());
    let (r1, c1) = a.shape();
    let (r2, c2) = d.shape();
    let mut m = zeros(r1 + r2, c1 + c2);
    m.view_mut((0, 0), (r1, c1)).copy_from(a);
    m.view_mut((0, c1), (r1, c2)).copy_from(b);
    m.view_mut((r1, 0), (r2, c1)).copy_from(cc);
    m.view_mut((r1, c1), (r2, c2)).copy_from(d);
    m
}

pub fn hstack(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    debug_assert_eq!(a.nrows(), b.nrows());
    let mut m = zeros(a.nrows(), a.ncols() + b.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    m
}

pub fn vstack(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    debug_assert_eq!(a.ncols(), b.ncols());
    let mut m = zeros(a.nrows() + b.nrows(), a.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    m
}

pub fn block_diag(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    block2x2(
        a,
        &zeros(a.nrows(), b.ncols()),
        &zeros(b.nrows(), a.ncols()),
        b,
    )
}

/// Spectral norm (largest singular value).
pub fn norm2(m: &ComplexMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    to_faer(m)
        .singular_values()
        .map(|s| s.first().copied().unwrap_or(0.0))
        .unwrap_or(f64::NAN)
}

/// Frobenius norm.
pub fn fro(m: &ComplexMatrix) -> f64 {
    m.norm()
}

pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn is_hermitian(m: &ComplexMatrix, tol: &Tolerance) -> bool {
    m.is_square() && fro(&(m - m.adjoint())) <= tol.threshold(fro(m))
}

pub fn is_skew_hermitian(m: &ComplexMatrix, tol: &Tolerance) -> bool {
    m.is_square() && fro(&(m + m.adjoint())) <= tol.threshold(fro(m))
}

fn to_faer(m: &ComplexMatrix) -> Mat<Complex64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, Complex64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn require_square(m: &ComplexMatrix, op: &'static str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::dim(
            op,
            format!("expected a square matrix, got {}x{}", m.nrows(), m.ncols()),
        ));
    }
    Ok(())
}

/// Lexicographic order on (re, im), total over finite values.
pub fn cmp_complex(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Eigenvalues of a square matrix from its complex Schur form, sorted by
/// (real part, imaginary part).
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    require_square(m, "eigenvalues")?;
    ensure_finite(m)?;
    let n = m.nrows();
    let mut values = match n {
        0 => Vec::new(),
        1 => vec![m[(0, 0)]],
        _ => to_faer(m)
            .eigenvalues()
            .map_err(|e| Error::Numerical(format!("eigenvalue iteration failed: {e:?}")))?,
    };
    values.sort_by(cmp_complex);
    Ok(values)
}

/// One eigenvalue with unit-norm right and left eigenvectors:
/// `M v = λ v` and `w* M = λ w*`.
#[derive(Debug, Clone)]
pub struct EigenTriple {
    pub value: Complex64,
    pub right: ComplexVector,
    pub left: ComplexVector,
}

/// Eigenvalues of `m` with right and left eigenvectors.
///
/// Eigenvectors are the singular vectors of `M - λI` belonging to its
/// smallest singular value, so repeated eigenvalues share a vector.
pub fn spectrum(m: &ComplexMatrix) -> Result<Vec<EigenTriple>> {
    require_square(m, "spectrum")?;
    if m.nrows() == 0 {
        return Err(Error::dim("spectrum", "empty matrix"));
    }
    let n = m.nrows();
    eigenvalues(m)?
        .into_iter()
        .map(|value| {
            let shifted = m - identity(n) * value;
            let svd = Svd::new(&shifted)?;
            let right = svd.w.row(n - 1).adjoint();
            let left = svd.u.column(n - 1).into_owned();
            Ok(EigenTriple {
                value,
                right: right.normalize(),
                left: left.normalize(),
            })
        })
        .collect()
}

/// Full singular value decomposition `M = U Σ W` with `U` (rows x rows) and
/// `W` (cols x cols) unitary and singular values descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub w: ComplexMatrix,
}

impl Svd {
    pub fn new(m: &ComplexMatrix) -> Result<Self> {
        ensure_finite(m)?;
        let (rows, cols) = m.shape();
        if rows == 0 || cols == 0 {
            return Ok(Svd {
                u: identity(rows),
                singular_values: Vec::new(),
                w: identity(cols),
            });
        }
        let svd = to_faer(m)
            .svd()
            .map_err(|e| Error::Numerical(format!("SVD did not converge: {e:?}")))?;
        let singular_values = svd.S().column_vector().iter().map(|s| s.re).collect();
        Ok(Svd {
            u: from_faer(svd.U()),
            singular_values,
            w: from_faer(svd.V()).adjoint(),
        })
    }

    /// The rectangular diagonal factor.
    pub fn sigma(&self) -> ComplexMatrix {
        let mut s = zeros(self.u.nrows(), self.w.nrows());
        for (i, &v) in self.singular_values.iter().enumerate() {
            s[(i, i)] = c(v, 0.0);
        }
        s
    }

    pub fn max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn rank(&self, tol: &Tolerance) -> usize {
        let cutoff = tol.threshold(self.max());
        self.singular_values.iter().filter(|&&s| s > cutoff).count()
    }
}

pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    Svd::new(m)
}

/// Orthonormal basis (as columns) of the complement of `range(q)`, where
/// `q` has orthonormal columns.
pub fn orthonormal_complement(q: &ComplexMatrix) -> ComplexMatrix {
    let (rows, k) = q.shape();
    if k >= rows {
        return zeros(rows, 0);
    }
    if k == 0 {
        return identity(rows);
    }
    match Svd::new(q) {
        Ok(s) => s.u.columns(k, rows - k).into_owned(),
        Err(_) => zeros(rows, 0),
    }
}

/// Count of singular values above `tol.abs + tol.rel * σ_max`.
pub fn rank_tol(m: &ComplexMatrix, tol: &Tolerance) -> Result<usize> {
    Ok(Svd::new(m)?.rank(tol))
}

/// Orthonormal basis of `range(m)`.
pub fn range_basis(m: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let s = Svd::new(m)?;
    let r = s.rank(tol);
    Ok(s.u.columns(0, r).into_owned())
}

/// Orthonormal basis of the right null space of `m`.
pub fn null_space(m: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let s = Svd::new(m)?;
    let r = s.rank(tol);
    let cols = m.ncols();
    Ok(s.w.rows(r, cols - r).adjoint())
}

/// Hermitian eigendecomposition of the Hermitian part of `m`: eigenvalues
/// ascending, eigenvectors as matching columns.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    require_square(m, "hermitian_eigen")?;
    ensure_finite(m)?;
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), zeros(0, 0)));
    }
    let eig = to_faer(&hermitian_part(m))
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("Hermitian eigensolver failed: {e:?}")))?;
    let raw: Vec<f64> = eig.S().column_vector().iter().map(|s| s.re).collect();
    let vecs = from_faer(eig.U());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw[i].total_cmp(&raw[j]));
    let values = order.iter().map(|&i| raw[i]).collect();
    let mut vectors = zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &vecs.column(src));
    }
    Ok((values, vectors))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdReport {
    pub is_hermitian: bool,
    pub is_psd: bool,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
}

/// Hermitian and positive semidefinite test.
pub fn psd_check(m: &ComplexMatrix, tol: &Tolerance) -> Result<PsdReport> {
    require_square(m, "psd_check")?;
    let is_herm = is_hermitian(m, tol);
    let (values, _) = hermitian_eigen(m)?;
    let min_eigenvalue = values.first().copied().unwrap_or(0.0);
    let is_psd = is_herm && min_eigenvalue >= -tol.threshold(norm2(m));
    Ok(PsdReport {
        is_hermitian: is_herm,
        is_psd,
        min_eigenvalue,
    })
}

/// Counts of negative, zero and positive eigenvalues of a Hermitian matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Inertia {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

pub fn inertia(m: &ComplexMatrix, tol: &Tolerance) -> Result<Inertia> {
    require_square(m, "inertia")?;
    if !is_hermitian(m, tol) {
        return Err(Error::Domain("inertia requires a Hermitian matrix".into()));
    }
    let (values, _) = hermitian_eigen(m)?;
    let cutoff = tol.threshold(norm2(m));
    let mut out = Inertia {
        negative: 0,
        zero: 0,
        positive: 0,
    };
    for v in values {
        if v < -cutoff {
            out.negative += 1;
        } else if v > cutoff {
            out.positive += 1;
        } else {
            out.zero += 1;
        }
    }
    Ok(out)
}

/// Solves `m x = rhs` by LU. Returns a numerical error when the LU factor
/// is exactly singular.
pub fn lu_solve(m: &ComplexMatrix, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_square(m, "lu_solve")?;
    if m.nrows() == 0 {
        return Ok(zeros(0, rhs.ncols()));
    }
    m.clone()
        .lu()
        .solve(rhs)
        .ok_or_else(|| Error::Numerical("singular linear system".into()))
}

/// Inverse of a matrix whose smallest singular value clears the tolerance.
pub fn checked_inverse(m: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    require_square(m, "checked_inverse")?;
    let s = Svd::new(m)?;
    if s.rank(tol) < m.nrows() {
        return Err(Error::Domain("matrix is singular to tolerance".into()));
    }
    lu_solve(m, &identity(m.nrows()))
}

/// Group of eigenvalues within [`CLUSTER_RADIUS`] of each other.
#[derive(Debug, Clone)]
pub struct EigenCluster {
    pub center: Complex64,
    pub multiplicity: usize,
}

/// Union-find clustering of (sorted) eigenvalues on pairwise distance.
pub fn cluster_eigenvalues(values: &[Complex64], radius: f64) -> Vec<EigenCluster> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = 1.0 + values[i].norm().max(values[j].norm());
            if (values[i] - values[j]).norm() <= radius * scale {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut clusters: Vec<(usize, Complex64, usize)> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        let root = find(&mut parent, i);
        match clusters.iter_mut().find(|(r, _, _)| *r == root) {
            Some(entry) => {
                entry.1 += v;
                entry.2 += 1;
            }
            None => clusters.push((root, v, 1)),
        }
    }
    let mut out: Vec<EigenCluster> = clusters
        .into_iter()
        .map(|(_, sum, k)| EigenCluster {
            center: sum / k as f64,
            multiplicity: k,
        })
        .collect();
    out.sort_by(|a, b| cmp_complex(&a.center, &b.center));
    out
}

/// Distinct eigenvalues of `m` after clustering.
pub fn distinct_eigenvalues(m: &ComplexMatrix) -> Result<Vec<EigenCluster>> {
    Ok(cluster_eigenvalues(&eigenvalues(m)?, CLUSTER_RADIUS))
}

#[inline]
pub fn on_axis(z: Complex64) -> bool {
    z.re.abs() <= AXIS_TOL * (1.0 + z.norm())
}
