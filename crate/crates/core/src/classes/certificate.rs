//! Lyapunov-type certificates on the system matrix `L`.
//!
//! With `H = diag(Ĥ, I_p)`:
//! * generalized positivity: `H L + L* H ⪰ 0`;
//! * Hermitian on the axis: `M L + (M L)* = 0` for `M = diag(Ĥ, i I_p)`;
//! * odd: `H L + L* H = 0`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{
    block_diag, c, fro, hermitian_eigen, identity, inertia, is_hermitian, psd_check, zeros,
    ComplexMatrix, Inertia, Svd, Tolerance,
};
use crate::realization::Realization;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CertificateKind {
    GpLyapunov,
    HermitianAxis,
    OddZero,
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub hhat: ComplexMatrix,
    pub kind: CertificateKind,
    /// The residual matrix (`HL + L*H` or `ML + (ML)*`).
    pub residual_matrix: ComplexMatrix,
    /// Frobenius norm of `residual_matrix`.
    pub residual: f64,
    /// Smallest eigenvalue of the Hermitian part of `residual_matrix`.
    pub min_eig_of_residual: f64,
    pub valid: bool,
    /// `-Ĥ ≻ 0`; together with a valid GP certificate this places the
    /// function in the positive class.
    pub hhat_negative_definite: bool,
}

fn check_inputs(
    l: &ComplexMatrix,
    hhat: &ComplexMatrix,
    n: usize,
    p: usize,
    tol: &Tolerance,
    op: &'static str,
) -> Result<()> {
    if l.shape() != (n + p, n + p) {
        return Err(Error::dim(
            op,
            format!("L is {:?}, expected {}x{}", l.shape(), n + p, n + p),
        ));
    }
    if hhat.shape() != (n, n) {
        return Err(Error::dim(
            op,
            format!("Ĥ is {:?}, expected {n}x{n}", hhat.shape()),
        ));
    }
    if !is_hermitian(hhat, tol) {
        return Err(Error::Domain("Ĥ is not Hermitian".into()));
    }
    if n > 0 && Svd::new(hhat)?.rank(tol) < n {
        return Err(Error::Domain("Ĥ is singular".into()));
    }
    Ok(())
}

fn negative_definite(hhat: &ComplexMatrix, tol: &Tolerance) -> Result<bool> {
    let i = inertia(hhat, tol)?;
    Ok(i.negative == hhat.nrows())
}

fn finish(
    hhat: &ComplexMatrix,
    kind: CertificateKind,
    residual_matrix: ComplexMatrix,
    valid: bool,
    tol: &Tolerance,
) -> Result<Certificate> {
    let (values, _) = hermitian_eigen(&residual_matrix)?;
    Ok(Certificate {
        hhat: hhat.clone(),
        kind,
        residual: fro(&residual_matrix),
        min_eig_of_residual: values.first().copied().unwrap_or(0.0),
        valid,
        hhat_negative_definite: negative_definite(hhat, tol)?,
        residual_matrix,
    })
}

pub fn verify_gp_certificate(
    l: &ComplexMatrix,
    hhat: &ComplexMatrix,
    n: usize,
    p: usize,
    tol: &Tolerance,
) -> Result<Certificate> {
    check_inputs(l, hhat, n, p, tol, "verify_gp_certificate")?;
    let h = block_diag(hhat, &identity(p));
    let hl = &h * l;
    let res = &hl + hl.adjoint();
    let valid = psd_check(&res, tol)?.is_psd;
    finish(hhat, CertificateKind::GpLyapunov, res, valid, tol)
}

pub fn verify_hermitian_axis_certificate(
    l: &ComplexMatrix,
    hhat: &ComplexMatrix,
    n: usize,
    p: usize,
    tol: &Tolerance,
) -> Result<Certificate> {
    check_inputs(l, hhat, n, p, tol, "verify_hermitian_axis_certificate")?;
    let m = block_diag(hhat, &(identity(p) * c(0.0, 1.0)));
    let ml = &m * l;
    let res = &ml + ml.adjoint();
    let valid = fro(&res) <= tol.threshold(fro(&ml));
    finish(hhat, CertificateKind::HermitianAxis, res, valid, tol)
}

pub fn verify_odd_certificate(
    l: &ComplexMatrix,
    hhat: &ComplexMatrix,
    n: usize,
    p: usize,
    tol: &Tolerance,
) -> Result<Certificate> {
    check_inputs(l, hhat, n, p, tol, "verify_odd_certificate")?;
    let h = block_diag(hhat, &identity(p));
    let hl = &h * l;
    let res = &hl + hl.adjoint();
    let valid = fro(&res) <= tol.threshold(fro(&hl));
    finish(hhat, CertificateKind::OddZero, res, valid, tol)
}

/// `H₁ = [[0, I], [I, 0]]`, `H₂ = i [[0, -I], [I, 0]]`, each `2n × 2n`.
pub fn canonical_gpe_certificate(n: usize) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if n == 0 {
        return Err(Error::Domain("canonical certificate needs n >= 1".into()));
    }
    let mut h1 = zeros(2 * n, 2 * n);
    let mut h2 = zeros(2 * n, 2 * n);
    for k in 0..n {
        h1[(k, n + k)] = c(1.0, 0.0);
        h1[(n + k, k)] = c(1.0, 0.0);
        h2[(k, n + k)] = c(0.0, -1.0);
        h2[(n + k, k)] = c(0.0, 1.0);
    }
    Ok((h1, h2))
}

/// How far a certificate pair `(Ĥ₁, Ĥ₂)` refines. Each level implies the
/// previous ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChainLevel {
    /// At least one certificate fails.
    None,
    CertificatesOnly,
    SameInertia,
    UnitarilySimilar,
    Involutions,
    Canonical,
}

#[derive(Debug, Clone)]
pub struct GpeCertificates {
    pub gp: Certificate,
    pub axis: Certificate,
    pub chain: ChainLevel,
}

impl GpeCertificates {
    pub fn valid(&self) -> bool {
        self.gp.valid && self.axis.valid
    }
}

/// Checks both GPE certificates on a `(2n+p)`-square `L`. `Ĥ₁` and `Ĥ₂` are
/// `2n × 2n`.
pub fn verify_gpe_certificates(
    l: &ComplexMatrix,
    h1: &ComplexMatrix,
    h2: &ComplexMatrix,
    n: usize,
    p: usize,
    tol: &Tolerance,
) -> Result<GpeCertificates> {
    let gp = verify_gp_certificate(l, h1, 2 * n, p, tol)?;
    let axis = verify_hermitian_axis_certificate(l, h2, 2 * n, p, tol)?;
    let chain = if !(gp.valid && axis.valid) {
        ChainLevel::None
    } else {
        chain_level(h1, h2, n, tol)?
    };
    Ok(GpeCertificates { gp, axis, chain })
}

fn chain_level(
    h1: &ComplexMatrix,
    h2: &ComplexMatrix,
    n: usize,
    tol: &Tolerance,
) -> Result<ChainLevel> {
    let in1: Inertia = inertia(h1, tol)?;
    if in1 != inertia(h2, tol)? {
        return Ok(ChainLevel::CertificatesOnly);
    }
    // Hermitian matrices are unitarily similar iff their spectra agree.
    let (e1, _) = hermitian_eigen(h1)?;
    let (e2, _) = hermitian_eigen(h2)?;
    let scale = e1.iter().chain(&e2).fold(0.0f64, |a, v| a.max(v.abs()));
    if e1.iter().zip(&e2).any(|(a, b)| (a - b).abs() > tol.threshold(scale)) {
        return Ok(ChainLevel::SameInertia);
    }
    let id = identity(2 * n);
    let inv_scale = fro(&id);
    if fro(&(h1 * h1 - &id)) > tol.threshold(inv_scale)
        || fro(&(h2 * h2 - &id)) > tol.threshold(inv_scale)
    {
        return Ok(ChainLevel::UnitarilySimilar);
    }
    let (c1, c2) = canonical_gpe_certificate(n)?;
    if fro(&(h1 - c1)) > tol.threshold(inv_scale) || fro(&(h2 - c2)) > tol.threshold(inv_scale) {
        return Ok(ChainLevel::Involutions);
    }
    Ok(ChainLevel::Canonical)
}

/// `Δ = [[0, P₂, 0], [P₁, 0, 0], [0, 0, P₃]]`. Adding `Δ` to a system matrix
/// certified by the canonical pair keeps both certificates valid, because
/// `H₁Δ = diag(P₁, P₂, P₃)` and `MΔ = diag(-iP₁, iP₂, iP₃)`.
pub fn certificate_perturbation(
    p1: &ComplexMatrix,
    p2: &ComplexMatrix,
    p3: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<ComplexMatrix> {
    let n = p1.nrows();
    if p2.shape() != (n, n) || !p1.is_square() || !p3.is_square() {
        return Err(Error::dim(
            "certificate_perturbation",
            format!("P1 {:?}, P2 {:?}, P3 {:?}", p1.shape(), p2.shape(), p3.shape()),
        ));
    }
    for (name, m) in [("P1", p1), ("P2", p2), ("P3", p3)] {
        if !psd_check(m, tol)?.is_psd {
            return Err(Error::Domain(format!("{name} is not positive semidefinite")));
        }
    }
    let q = p3.nrows();
    let mut delta = zeros(2 * n + q, 2 * n + q);
    delta.view_mut((0, n), (n, n)).copy_from(p2);
    delta.view_mut((n, 0), (n, n)).copy_from(p1);
    delta.view_mut((2 * n, 2 * n), (q, q)).copy_from(p3);
    Ok(delta)
}

/// Result of bringing an odd realization to the block form of
/// [`super::build_odd_canonical`].
#[derive(Debug, Clone)]
pub struct OddCanonical {
    /// State transformation applied as `x ↦ S x`.
    pub s: ComplexMatrix,
    pub realization: Realization,
    /// Number of negative eigenvalues of `Ĥ`.
    pub nu: usize,
}

/// Transforms an odd realization so that its certificate becomes
/// `diag(-I_ν, I_{n-ν})`. With `Ĥ = V Λ V*` (negative eigenvalues first),
/// `S = |Λ|^{1/2} V*`; the certificate transforms as `S^{-*} Ĥ S^{-1}`.
pub fn odd_canonicalize(
    r: &Realization,
    hhat: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<OddCanonical> {
    let l = r.system_matrix();
    let cert = verify_odd_certificate(&l, hhat, r.n(), r.p(), tol)?;
    if !cert.valid {
        return Err(Error::Domain(format!(
            "Ĥ does not certify oddness (residual {:.3e})",
            cert.residual
        )));
    }
    if r.p() != r.m() {
        return Err(Error::Domain("odd realizations are square".into()));
    }
    let (values, vectors) = hermitian_eigen(hhat)?;
    let n = r.n();
    let nu = values.iter().filter(|&&v| v < 0.0).count();
    let mut s = vectors.adjoint();
    for (i, v) in values.iter().enumerate() {
        let w = Complex64::new(v.abs().sqrt(), 0.0);
        for j in 0..n {
            s[(i, j)] *= w;
        }
    }
    let realization = r.similarity(&s, tol)?;
    Ok(OddCanonical {
        s,
        realization,
        nu,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{build_gpe_canonical, build_odd_canonical, gpe_symmetry_check, FactorData};
    use crate::matrix::{diag_real, real_matrix, scalar};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn s(v: f64) -> ComplexMatrix {
        scalar(c(v, 0.0))
    }

    fn l1() -> ComplexMatrix {
        real_matrix(3, 3, &[-1.0, 1.0, 1.0, 0.0, 1.0, -1.0, 1.0, 1.0, 1.0])
    }

    fn inv_s() -> ComplexMatrix {
        real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    #[test]
    fn canonical_pair_n1() {
        let (h1, h2) = canonical_gpe_certificate(1).unwrap();
        assert_eq!(h1, real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]));
        assert_eq!(h2[(0, 1)], c(0.0, -1.0));
        assert_eq!(h2[(1, 0)], c(0.0, 1.0));
        assert_eq!(&h1 * &h1, identity(2));
        assert_eq!(&h2 * &h2, identity(2));
        let i = inertia(&h1, &tol()).unwrap();
        assert_eq!((i.negative, i.zero, i.positive), (1, 0, 1));
        assert!(canonical_gpe_certificate(0).is_err());
    }

    #[test]
    fn gp_certificate_on_l1() {
        let (h1, _) = canonical_gpe_certificate(1).unwrap();
        let cert = verify_gp_certificate(&l1(), &h1, 2, 1, &tol()).unwrap();
        assert!(cert.valid);
        let expect = real_matrix(3, 3, &[0.0, 0.0, 0.0, 0.0, 2.0, 2.0, 0.0, 2.0, 2.0]);
        assert_eq!(cert.residual_matrix, expect);
        let (ev, _) = hermitian_eigen(&cert.residual_matrix).unwrap();
        for (got, want) in ev.iter().zip([0.0, 0.0, 4.0]) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn gp_certificate_on_inverse_s() {
        let cert = verify_gp_certificate(&inv_s(), &s(-1.0), 1, 1, &tol()).unwrap();
        assert!(cert.valid);
        assert_eq!(cert.residual, 0.0);
        assert!(cert.hhat_negative_definite);
        let bad = verify_gp_certificate(&inv_s(), &s(1.0), 1, 1, &tol()).unwrap();
        assert!(!bad.valid);
        assert_eq!(bad.residual_matrix, real_matrix(2, 2, &[0.0, 2.0, 2.0, 0.0]));
    }

    #[test]
    fn certificate_input_errors() {
        assert!(matches!(
            verify_gp_certificate(&inv_s(), &s(0.0), 1, 1, &tol()),
            Err(Error::Domain(_))
        ));
        let nonherm = real_matrix(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(matches!(
            verify_odd_certificate(&l1(), &nonherm, 2, 1, &tol()),
            Err(Error::Domain(_))
        ));
        assert!(verify_gp_certificate(&l1(), &s(1.0), 1, 1, &tol()).is_err());
    }

    #[test]
    fn axis_certificate_on_l1_and_l2() {
        let (_, h2) = canonical_gpe_certificate(1).unwrap();
        let cert = verify_hermitian_axis_certificate(&l1(), &h2, 2, 1, &tol()).unwrap();
        assert!(cert.valid);
        assert_eq!(cert.residual, 0.0);
        let delta = certificate_perturbation(&s(1.0), &s(2.0), &s(3.0), &tol()).unwrap();
        let l2 = l1() + delta;
        assert_eq!(
            l2,
            real_matrix(3, 3, &[-1.0, 3.0, 1.0, 1.0, 1.0, -1.0, 1.0, 1.0, 4.0])
        );
        assert!(verify_hermitian_axis_certificate(&l2, &h2, 2, 1, &tol()).unwrap().valid);
    }

    #[test]
    fn gpe_pair_chain_levels() {
        let (h1, h2) = canonical_gpe_certificate(1).unwrap();
        let both = verify_gpe_certificates(&l1(), &h1, &h2, 1, 1, &tol()).unwrap();
        assert!(both.valid());
        assert_eq!(both.chain, ChainLevel::Canonical);

        let delta = certificate_perturbation(&s(1.0), &s(2.0), &s(3.0), &tol()).unwrap();
        let l2 = l1() + delta;
        let pert = verify_gpe_certificates(&l2, &h1, &h2, 1, 1, &tol()).unwrap();
        assert!(pert.valid());
        assert!(!gpe_symmetry_check(&l2, 1, 1, &tol()).unwrap());
    }

    #[test]
    fn lyapunov_fixture_without_inputs() {
        // A = [[0, 5], [1, 0]] with H = diag(1, -5): HA + A*H = 0
        let a = real_matrix(2, 2, &[0.0, 5.0, 1.0, 0.0]);
        let cert = verify_gp_certificate(&a, &diag_real(&[1.0, -5.0]), 2, 0, &tol()).unwrap();
        assert!(cert.valid);
        assert_eq!(cert.residual, 0.0);
    }

    #[test]
    fn perturbation_examples() {
        let d = certificate_perturbation(&s(1.0), &s(2.0), &s(3.0), &tol()).unwrap();
        assert_eq!(d, real_matrix(3, 3, &[0.0, 2.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 3.0]));
        let z = certificate_perturbation(&s(0.0), &s(0.0), &s(0.0), &tol()).unwrap();
        assert_eq!(z, zeros(3, 3));
        assert!(matches!(
            certificate_perturbation(&s(-1.0), &s(0.0), &s(0.0), &tol()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn odd_certificates() {
        let cert = verify_odd_certificate(&inv_s(), &s(-1.0), 1, 1, &tol()).unwrap();
        assert!(cert.valid);
        assert_eq!(cert.residual, 0.0);
        assert!(!verify_odd_certificate(&inv_s(), &s(1.0), 1, 1, &tol()).unwrap().valid);

        let r = build_odd_canonical(&s(0.0), &s(0.0), &s(0.0), &s(1.0), &s(1.0), Some(&s(2.0)), &tol())
            .unwrap();
        let h = diag_real(&[-1.0, 1.0]);
        assert!(verify_odd_certificate(&r.system_matrix(), &h, 2, 1, &tol()).unwrap().valid);
    }

    #[test]
    fn canonicalize_inverse_s() {
        let r = Realization::from_system_matrix(&inv_s(), 1).unwrap();
        let out = odd_canonicalize(&r, &s(-1.0), &tol()).unwrap();
        assert_eq!(out.nu, 1);
        assert!((out.realization.system_matrix() - inv_s()).norm() < 1e-15);
    }

    #[test]
    fn canonicalize_scaled_certificate() {
        // 1/s realized as (0, 1/2, 2, 0) is certified by Ĥ = -4
        let r = Realization::new(s(0.0), s(0.5), s(2.0), s(0.0)).unwrap();
        let out = odd_canonicalize(&r, &s(-4.0), &tol()).unwrap();
        assert_eq!(out.nu, 1);
        assert!((out.s[(0, 0)].norm() - 2.0).abs() < 1e-15);
        let l = out.realization.system_matrix();
        assert!((l - inv_s()).norm() < 1e-15);
    }

    #[test]
    fn canonicalize_positive_branch() {
        // -1/s with Ĥ = +1: C = -B*
        let r = Realization::new(s(0.0), s(1.0), s(-1.0), s(0.0)).unwrap();
        let out = odd_canonicalize(&r, &s(1.0), &tol()).unwrap();
        assert_eq!(out.nu, 0);
        let rr = &out.realization;
        assert!((rr.c() + rr.b().adjoint()).norm() < 1e-15);
        assert!(odd_canonicalize(&r, &s(-1.0), &tol()).is_err());
    }

    #[test]
    fn canonical_builds_carry_the_pair() {
        let f = FactorData::new(
            real_matrix(2, 2, &[1.0, 2.0, -0.5, 0.3]),
            real_matrix(2, 1, &[1.0, -1.0]),
            real_matrix(1, 2, &[0.2, 0.7]),
            s(0.4),
        )
        .unwrap();
        let l = build_gpe_canonical(&f).system_matrix();
        let (h1, h2) = canonical_gpe_certificate(2).unwrap();
        let out = verify_gpe_certificates(&l, &h1, &h2, 2, 1, &tol()).unwrap();
        assert_eq!(out.chain, ChainLevel::Canonical);
        assert!(gpe_symmetry_check(&l, 2, 1, &tol()).unwrap());
    }
}
