//! State-space realizations `F(s) = C (sI - A)^{-1} B + D` and their algebra.
//!
//! A [`Realization`] is an immutable value. Every operation returns a new
//! realization and none of them minimizes the result, so state dimensions add
//! up under [`Realization::series`] and [`Realization::sum`].
//!
//! Note on the two-state GPE fixture `L₁ = [[-1, 1, 1], [0, 1, -1], [1, 1, 1]]`:
//! it realizes `G G^#` with `G(s) = (s + 2)/(s + 1)`, which evaluates to
//! `3/(1 - s²) + 1`. Tests trust the realization and the evaluation, not the
//! `1/(1 - s²) + 1` formula that is sometimes quoted for it.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{
    block2x2, block_diag, checked_inverse, eigenvalues, ensure_finite, hstack, identity, lu_solve,
    vstack, zeros, ComplexMatrix, Tolerance,
};

#[derive(Debug, Clone)]
pub struct Realization {
    a: ComplexMatrix,
    b: ComplexMatrix,
    c: ComplexMatrix,
    d: ComplexMatrix,
    poles: OnceLock<Vec<Complex64>>,
}

impl PartialEq for Realization {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && self.c == other.c && self.d == other.d
    }
}

/// `F(s)` at one Laplace point.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferSample {
    pub point: Complex64,
    pub value: ComplexMatrix,
}

impl Realization {
    /// Checks `A` n×n, `B` n×m, `C` p×n, `D` p×m and finiteness.
    pub fn new(
        a: ComplexMatrix,
        b: ComplexMatrix,
        c: ComplexMatrix,
        d: ComplexMatrix,
    ) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::dim("realization", format!("A is {}x{}", n, a.ncols())));
        }
        let (p, m) = d.shape();
        if b.shape() != (n, m) {
            return Err(Error::dim(
                "realization",
                format!("B is {:?}, expected ({n}, {m})", b.shape()),
            ));
        }
        if c.shape() != (p, n) {
            return Err(Error::dim(
                "realization",
                format!("C is {:?}, expected ({p}, {n})", c.shape()),
            ));
        }
        for blk in [&a, &b, &c, &d] {
            ensure_finite(blk)?;
        }
        Ok(Realization {
            a,
            b,
            c,
            d,
            poles: OnceLock::new(),
        })
    }

    /// Memoryless system `F(s) = D`.
    pub fn static_gain(d: ComplexMatrix) -> Self {
        let (p, m) = d.shape();
        Realization::new(zeros(0, 0), zeros(0, m), zeros(p, 0), d)
            .expect("static gain dimensions are consistent")
    }

    pub fn zero(p: usize, m: usize) -> Self {
        Self::static_gain(zeros(p, m))
    }

    /// Splits a `(n+p)×(n+m)` system matrix into its blocks.
    pub fn from_system_matrix(l: &ComplexMatrix, n: usize) -> Result<Self> {
        if l.nrows() < n || l.ncols() < n {
            return Err(Error::dim(
                "from_system_matrix",
                format!("{}x{} matrix cannot hold {n} states", l.nrows(), l.ncols()),
            ));
        }
        let (rows, cols) = l.shape();
        Realization::new(
            l.view((0, 0), (n, n)).into_owned(),
            l.view((0, n), (n, cols - n)).into_owned(),
            l.view((n, 0), (rows - n, n)).into_owned(),
            l.view((n, n), (rows - n, cols - n)).into_owned(),
        )
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }
    pub fn b(&self) -> &ComplexMatrix {
        &self.b
    }
    pub fn c(&self) -> &ComplexMatrix {
        &self.c
    }
    pub fn d(&self) -> &ComplexMatrix {
        &self.d
    }

    /// State dimension.
    pub fn n(&self) -> usize {
        self.a.nrows()
    }
    /// Input dimension.
    pub fn m(&self) -> usize {
        self.d.ncols()
    }
    /// Output dimension.
    pub fn p(&self) -> usize {
        self.d.nrows()
    }

    /// `L = [[A, B], [C, D]]`.
    pub fn system_matrix(&self) -> ComplexMatrix {
        block2x2(&self.a, &self.b, &self.c, &self.d)
    }

    /// Eigenvalues of `A`, computed once per value.
    pub fn poles(&self) -> Result<&[Complex64]> {
        if let Some(p) = self.poles.get() {
            return Ok(p);
        }
        let p = eigenvalues(&self.a)?;
        Ok(self.poles.get_or_init(|| p))
    }

    /// Evaluates with the default tolerance.
    pub fn evaluate(&self, s: Complex64) -> Result<TransferSample> {
        self.evaluate_tol(s, &Tolerance::default())
    }

    /// `C (sI - A)^{-1} B + D` by an LU solve. Fails with [`Error::Pole`] when
    /// `s` is within `tol` of an eigenvalue of `A`.
    pub fn evaluate_tol(&self, s: Complex64, tol: &Tolerance) -> Result<TransferSample> {
        for &lambda in self.poles()? {
            if (s - lambda).norm() <= tol.threshold(lambda.norm()) {
                return Err(Error::Pole { eigenvalue: lambda });
            }
        }
        Ok(TransferSample {
            point: s,
            value: self.evaluate_unchecked(s)?,
        })
    }

    /// Evaluation without the pole-proximity check. Only an exactly
    /// singular LU factor is reported.
    pub fn evaluate_unchecked(&self, s: Complex64) -> Result<ComplexMatrix> {
        let n = self.n();
        if n == 0 {
            return Ok(self.d.clone());
        }
        let resolvent = identity(n) * s - &self.a;
        let x = lu_solve(&resolvent, &self.b).map_err(|_| Error::Pole { eigenvalue: s })?;
        Ok(&self.c * x + &self.d)
    }

    /// Realization of `F^#(s) = F(-s̄)*`: `(-A*, -C*, B*, D*)`.
    pub fn adjoint(&self) -> Realization {
        Realization::new(
            -self.a.adjoint(),
            -self.c.adjoint(),
            self.b.adjoint(),
            self.d.adjoint(),
        )
        .expect("adjoint preserves consistency")
    }

    /// Cascade `F_α(s) F_β(s)` with `self = α`, `rhs = β`.
    pub fn series(&self, rhs: &Realization) -> Result<Realization> {
        if self.m() != rhs.p() {
            return Err(Error::dim(
                "series",
                format!("inner dimensions {} and {} differ", self.m(), rhs.p()),
            ));
        }
        let (na, nb) = (self.n(), rhs.n());
        let a = block2x2(
            &self.a,
            &(&self.b * &rhs.c),
            &zeros(nb, na),
            &rhs.a,
        );
        let b = vstack(&(&self.b * &rhs.d), &rhs.b);
        let c = hstack(&self.c, &(&self.d * &rhs.c));
        let d = &self.d * &rhs.d;
        Realization::new(a, b, c, d)
    }

    /// Parallel connection `F_α(s) + F_β(s)`.
    pub fn sum(&self, rhs: &Realization) -> Result<Realization> {
        if self.d.shape() != rhs.d.shape() {
            return Err(Error::dim(
                "sum",
                format!("{:?} vs {:?}", self.d.shape(), rhs.d.shape()),
            ));
        }
        Realization::new(
            block_diag(&self.a, &rhs.a),
            vstack(&self.b, &rhs.b),
            hstack(&self.c, &rhs.c),
            &self.d + &rhs.d,
        )
    }

    /// `z F(s)`.
    pub fn scale(&self, z: Complex64) -> Realization {
        Realization::new(
            self.a.clone(),
            self.b.clone(),
            &self.c * z,
            &self.d * z,
        )
        .expect("scaling preserves consistency")
    }

    pub fn negate(&self) -> Realization {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    /// `½ (F + F^#)`.
    pub fn even_part(&self) -> Realization {
        self.sum(&self.adjoint())
            .expect("F and F^# have transposed shapes")
            .scale(Complex64::new(0.5, 0.0))
    }

    /// `½ (F - F^#)`.
    pub fn odd_part(&self) -> Realization {
        self.sum(&self.adjoint().negate())
            .expect("F and F^# have transposed shapes")
            .scale(Complex64::new(0.5, 0.0))
    }

    /// State transformation `x ↦ S x`: `(S A S⁻¹, S B, C S⁻¹, D)`.
    pub fn similarity(&self, s: &ComplexMatrix, tol: &Tolerance) -> Result<Realization> {
        if s.shape() != (self.n(), self.n()) {
            return Err(Error::dim(
                "similarity",
                format!("S is {:?} for {} states", s.shape(), self.n()),
            ));
        }
        let s_inv = checked_inverse(s, tol)?;
        Realization::new(
            s * &self.a * &s_inv,
            s * &self.b,
            &self.c * &s_inv,
            self.d.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{c, real_matrix, scalar};
    use approx::assert_abs_diff_eq;

    fn l2() -> Realization {
        Realization::from_system_matrix(
            &real_matrix(3, 3, &[-1.0, 3.0, 1.0, 1.0, 1.0, -1.0, 1.0, 1.0, 4.0]),
            2,
        )
        .unwrap()
    }

    fn minus_inv_s2() -> Realization {
        Realization::new(
            real_matrix(2, 2, &[0.0, 1.0, 0.0, 0.0]),
            real_matrix(2, 1, &[0.0, -1.0]),
            real_matrix(1, 2, &[1.0, 0.0]),
            zeros(1, 1),
        )
        .unwrap()
    }

    fn inv_s() -> Realization {
        Realization::new(
            scalar(c(0.0, 0.0)),
            scalar(c(1.0, 0.0)),
            scalar(c(1.0, 0.0)),
            scalar(c(0.0, 0.0)),
        )
        .unwrap()
    }

    fn g_example() -> Realization {
        // G(s) = (s+2)/(s+1)
        Realization::new(
            scalar(c(-1.0, 0.0)),
            scalar(c(1.0, 0.0)),
            scalar(c(1.0, 0.0)),
            scalar(c(1.0, 0.0)),
        )
        .unwrap()
    }

    #[test]
    fn rejects_inconsistent_blocks() {
        let r = Realization::new(zeros(2, 2), zeros(3, 1), zeros(1, 2), zeros(1, 1));
        assert!(matches!(r, Err(Error::Dimension { .. })));
    }

    #[test]
    fn system_matrices() {
        assert_eq!(
            inv_s().system_matrix(),
            real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0])
        );
        assert_eq!(
            minus_inv_s2().system_matrix(),
            real_matrix(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, -1.0, 1.0, 0.0, 0.0])
        );
    }

    #[test]
    fn evaluations() {
        let v = l2().evaluate(c(0.0, 0.0)).unwrap().value[(0, 0)];
        assert_abs_diff_eq!(v.re, 5.0, epsilon = 1e-12);
        let v = minus_inv_s2().evaluate(c(2.0, 0.0)).unwrap().value[(0, 0)];
        assert_abs_diff_eq!(v.re, -0.25, epsilon = 1e-14);
        let v = inv_s().evaluate(c(1.0, 0.0)).unwrap().value[(0, 0)];
        assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn evaluate_at_pole_reports_eigenvalue() {
        match inv_s().evaluate(c(1e-12, 0.0)) {
            Err(Error::Pole { eigenvalue }) => assert!(eigenvalue.norm() < 1e-14),
            other => panic!("expected pole error, got {other:?}"),
        }
    }

    #[test]
    fn adjoint_of_examples() {
        let adj = inv_s().adjoint();
        assert_eq!(adj.system_matrix(), real_matrix(2, 2, &[0.0, -1.0, 1.0, 0.0]));
        let g = g_example().adjoint();
        assert_eq!(
            g.system_matrix(),
            real_matrix(2, 2, &[1.0, -1.0, 1.0, 1.0])
        );
        let s = c(0.0, 2.0);
        // (2 - s)/(1 - s)
        let expected = (c(2.0, 0.0) - s) / (c(1.0, 0.0) - s);
        let got = g.evaluate(s).unwrap().value[(0, 0)];
        assert!((got - expected).norm() < 1e-14);
    }

    #[test]
    fn series_matches_canonical_pattern() {
        let g = g_example();
        let psi = g.series(&g.adjoint()).unwrap();
        let expected = real_matrix(3, 3, &[-1.0, 1.0, 1.0, 0.0, 1.0, -1.0, 1.0, 1.0, 1.0]);
        assert_eq!(psi.system_matrix(), expected);
        let s = c(0.3, 0.7);
        // G G^# = 3/(1 - s^2) + 1
        let want = c(3.0, 0.0) / (c(1.0, 0.0) - s * s) + c(1.0, 0.0);
        assert!((psi.evaluate(s).unwrap().value[(0, 0)] - want).norm() < 1e-13);
    }

    #[test]
    fn series_rejects_mismatch() {
        let wide = Realization::static_gain(zeros(1, 2));
        assert!(wide.series(&inv_s()).is_err());
    }

    #[test]
    fn sum_with_constant() {
        let r = inv_s().sum(&Realization::static_gain(scalar(c(1.0, 0.0)))).unwrap();
        let s = c(0.5, -2.0);
        let want = c(1.0, 0.0) / s + c(1.0, 0.0);
        assert!((r.evaluate(s).unwrap().value[(0, 0)] - want).norm() < 1e-14);
    }

    #[test]
    fn even_odd_of_inverse_s() {
        let r = inv_s();
        let s = c(0.4, 1.3);
        assert!(r.even_part().evaluate(s).unwrap().value.norm() < 1e-14);
        let odd = r.odd_part().evaluate(s).unwrap().value[(0, 0)];
        assert!((odd - c(1.0, 0.0) / s).norm() < 1e-14);
    }

    #[test]
    fn similarity_with_diagonal_scaling() {
        let s = real_matrix(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        let r = minus_inv_s2().similarity(&s, &Tolerance::default()).unwrap();
        assert_eq!(r.a(), &real_matrix(2, 2, &[0.0, 2.0, 0.0, 0.0]));
        assert_eq!(r.b(), &real_matrix(2, 1, &[0.0, -1.0]));
        assert_eq!(r.c(), &real_matrix(1, 2, &[0.5, 0.0]));
        let same = minus_inv_s2().similarity(&identity(2), &Tolerance::default()).unwrap();
        assert_eq!(same, minus_inv_s2());
    }

    #[test]
    fn similarity_rejects_singular() {
        let s = real_matrix(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(
            minus_inv_s2().similarity(&s, &Tolerance::default()),
            Err(Error::Domain(_))
        ));
    }
}
