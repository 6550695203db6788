//! Static output feedback `u = K y + v` on strictly proper systems.
//!
//! The pole-moving construction picks a contraction `K̂` from the singular
//! vectors of `B` and `C` (or from eigenvector images when the ranks
//! differ), scales it by `δ = η / (2‖B‖₂‖C‖₂)` where `η` is the smallest
//! positive singular value of `B K̂ C`, and halves `δ` until no eigenvalue of
//! `A` survives in `A + δ B K̂ C`.

use num_complex::Complex64;

use crate::classes::FactorData;
use crate::error::{Error, Result};
use crate::matrix::{
    block2x2, cluster_eigenvalues, eigenvalues, fro, hermitian_part, hstack, identity,
    is_hermitian, is_skew_hermitian, norm2, on_axis, psd_check, range_basis, rank_tol, vstack,
    zeros, ComplexMatrix, Svd, Tolerance, AXIS_TOL, CLUSTER_RADIUS,
};
use crate::minimality::{
    jordan_block_count, mcmillan_degree, min_spectral_distance, spectral_overlap,
    DEFAULT_PAIRING_RADIUS,
};
use crate::random::Sampler;
use crate::realization::Realization;

/// Number of times `δ` may be halved after a spectral collision.
pub const MAX_HALVINGS: u32 = 40;

/// `(A + BKC, B, C, 0)`. Only strictly proper systems are accepted; for a
/// non-zero `D` split off the constant term first.
pub fn close_loop(r: &Realization, k: &ComplexMatrix, tol: &Tolerance) -> Result<Realization> {
    if k.shape() != (r.m(), r.p()) {
        return Err(Error::dim(
            "close_loop",
            format!("K is {:?}, expected ({}, {})", k.shape(), r.m(), r.p()),
        ));
    }
    if fro(r.d()) > tol.abs {
        return Err(Error::Unsupported(
            "closed loop assembly needs D = 0".into(),
        ));
    }
    Realization::new(
        r.a() + r.b() * k * r.c(),
        r.b().clone(),
        r.c().clone(),
        r.d().clone(),
    )
}

/// Gain sets that keep a class closed under feedback.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GainClass {
    /// `-(K + K*) ⪰ 0`.
    GP,
    /// `K = K*`, `-K ⪰ 0`.
    GPE,
    /// `K + K* = 0`.
    Odd,
}

pub fn class_preserving_gain_check(k: &ComplexMatrix, cls: GainClass, tol: &Tolerance) -> bool {
    if !k.is_square() {
        return false;
    }
    let neg_psd = |m: &ComplexMatrix| {
        psd_check(&(-m), tol)
            .map(|rep| rep.is_psd)
            .unwrap_or(false)
    };
    match cls {
        GainClass::GP => neg_psd(&(k + k.adjoint())),
        GainClass::GPE => is_hermitian(k, tol) && neg_psd(k),
        GainClass::Odd => is_skew_hermitian(k, tol),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignStrategy {
    EqualRank,
    JordanBounded,
    ScalarState,
}

impl DesignStrategy {
    pub fn name(self) -> &'static str {
        match self {
            DesignStrategy::EqualRank => "equal_rank",
            DesignStrategy::JordanBounded => "jordan_bounded",
            DesignStrategy::ScalarState => "scalar_state",
        }
    }
}

#[derive(Debug, Clone)]
pub struct FeedbackDesign {
    /// `δ K̂`.
    pub k: ComplexMatrix,
    pub khat: ComplexMatrix,
    pub delta: f64,
    pub eta: f64,
    pub beta: usize,
    pub gamma: usize,
    /// Number of Jordan blocks of `A`.
    pub r: usize,
    pub strategy: DesignStrategy,
    /// Times `δ` was halved before the spectra separated.
    pub halvings: u32,
    /// Smallest distance between `spect(A)` and `spect(A + BKC)`.
    pub min_distance: f64,
}

/// Greedy Gram-Schmidt over the columns of `first` then `fill`, keeping at
/// most `cols` orthonormal columns.
fn isometry(
    first: &ComplexMatrix,
    fill: &ComplexMatrix,
    cols: usize,
    tol: &Tolerance,
) -> ComplexMatrix {
    let rows = first.nrows();
    let cutoff = tol.threshold(norm2(first).max(norm2(fill)));
    let mut out = zeros(rows, 0);
    for src in [first, fill] {
        for j in 0..src.ncols() {
            if out.ncols() == cols {
                return out;
            }
            let mut v = src.column(j).into_owned();
            for _ in 0..2 {
                let proj = &out * (out.adjoint() * &v);
                v -= proj;
            }
            let nv = v.norm();
            if nv > cutoff {
                v.unscale_mut(nv);
                out = hstack(&out, &ComplexMatrix::from_column_slice(rows, 1, v.as_slice()));
            }
        }
    }
    out
}

/// Left and right eigenvectors for every eigenvalue cluster, as many per
/// cluster as its geometric multiplicity.
fn eigenvector_bases(
    a: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = a.nrows();
    let mut left = zeros(n, 0);
    let mut right = zeros(n, 0);
    for cl in cluster_eigenvalues(&eigenvalues(a)?, CLUSTER_RADIUS) {
        let shifted = a - identity(n) * cl.center;
        let s = Svd::new(&shifted)?;
        let geometric = (n - s.rank(tol)).clamp(1, cl.multiplicity);
        for j in n - geometric..n {
            left = hstack(&left, &s.u.columns(j, 1).into_owned());
            right = hstack(&right, &s.w.rows(j, 1).adjoint());
        }
    }
    Ok((left, right))
}

fn smallest_positive_singular_value(m: &ComplexMatrix, tol: &Tolerance) -> Result<f64> {
    let s = Svd::new(m)?;
    let cutoff = tol.threshold(s.max());
    s.singular_values
        .iter()
        .copied()
        .filter(|&v| v > cutoff)
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.min(v))))
        .ok_or_else(|| Error::Numerical("B K̂ C vanishes; no direction to move poles".into()))
}

/// Finds `K` with `spect(A) ∩ spect(A + BKC) = ∅`.
///
/// Requires a minimal realization (a non-minimal one keeps its hidden modes
/// under every `K`) and `rank B = rank C` or at least as many rank as `A`
/// has Jordan blocks. Other cases are refused.
pub fn design_pole_moving_gain(r: &Realization, tol: &Tolerance) -> Result<FeedbackDesign> {
    let report = mcmillan_degree(r, tol)?;
    if !report.is_minimal {
        return Err(Error::NotMinimal {
            witnesses: report.witnesses,
        });
    }
    let (a, b, c) = (r.a(), r.b(), r.c());
    let n = r.n();
    if n == 0 {
        return Err(Error::Domain("a memoryless system has no poles to move".into()));
    }
    let beta = rank_tol(b, tol)?;
    let gamma = rank_tol(c, tol)?;
    let jordan = jordan_block_count(a, tol)?;

    let centre = a.trace() / Complex64::new(n as f64, 0.0);
    let scalar_state = fro(&(a - identity(n) * centre)) <= tol.threshold(fro(a));
    let strategy = if scalar_state {
        DesignStrategy::ScalarState
    } else if beta == gamma {
        DesignStrategy::EqualRank
    } else if beta.min(gamma) >= jordan {
        DesignStrategy::JordanBounded
    } else {
        return Err(Error::Unsupported(format!(
            "rank(B)={beta} differs from rank(C)={gamma} and min(rank B, rank C) < {jordan} Jordan blocks"
        )));
    };

    let khat = match strategy {
        DesignStrategy::ScalarState | DesignStrategy::EqualRank => {
            let sb = Svd::new(b)?;
            let sc = Svd::new(c)?;
            let mut e = zeros(r.m(), r.p());
            for i in 0..beta.min(gamma) {
                e[(i, i)] = Complex64::new(1.0, 0.0);
            }
            sb.w.adjoint() * e * sc.u.adjoint()
        }
        DesignStrategy::JordanBounded => {
            let (vl, vr) = eigenvector_bases(a, tol)?;
            let kl = isometry(&(b.adjoint() * vl), &range_basis(&b.adjoint(), tol)?, jordan, tol);
            let kr = isometry(&(c * vr), &range_basis(c, tol)?, jordan, tol);
            kl * kr.adjoint()
        }
    };

    let bkc = b * &khat * c;
    let eta = smallest_positive_singular_value(&bkc, tol)?;
    let spec_a = eigenvalues(a)?;
    let mut delta = eta / (2.0 * norm2(b) * norm2(c));
    for halvings in 0..=MAX_HALVINGS {
        let a_cl = a + &bkc * Complex64::new(delta, 0.0);
        let spec_cl = eigenvalues(&a_cl)?;
        if spectral_overlap(&spec_a, &spec_cl, DEFAULT_PAIRING_RADIUS).is_empty() {
            return Ok(FeedbackDesign {
                k: &khat * Complex64::new(delta, 0.0),
                khat,
                delta,
                eta,
                beta,
                gamma,
                r: jordan,
                strategy,
                halvings,
                min_distance: min_spectral_distance(&spec_a, &spec_cl),
            });
        }
        delta *= 0.5;
    }
    Err(Error::Numerical(format!(
        "spectra still collide after halving δ {MAX_HALVINGS} times"
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankTest {
    ControlRank,
    ObserveRank,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankFailure {
    pub r: f64,
    pub which: RankTest,
    pub rank_found: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub checked_points: Vec<f64>,
    pub failures: Vec<RankFailure>,
}

/// Rank test for spectral factorizability of `G G^#` with `D̂ = 0`: at every
/// imaginary-axis eigenvalue `ir` of `Â`, both `[Â - irI, B̂]` and
/// `[Â - irI; Ĉ]` must have full rank. Away from the axis the two matrices
/// are nonsingular anyway, so only those points are checked.
pub fn spectral_factorization_feasible(f: &FactorData, tol: &Tolerance) -> Result<FeasibilityReport> {
    if fro(&f.dhat) > tol.abs {
        return Err(Error::Domain(
            "the rank test applies to factors with D̂ = 0".into(),
        ));
    }
    let n = f.n();
    let mut checked = Vec::new();
    let mut failures = Vec::new();
    for cl in cluster_eigenvalues(&eigenvalues(&f.ahat)?, CLUSTER_RADIUS) {
        if !on_axis(cl.center) {
            continue;
        }
        let r = cl.center.im;
        checked.push(r);
        let shifted = &f.ahat - identity(n) * Complex64::new(0.0, r);
        let ctrl = rank_tol(&hstack(&shifted, &f.bhat), tol)?;
        if ctrl < n {
            failures.push(RankFailure {
                r,
                which: RankTest::ControlRank,
                rank_found: ctrl,
            });
        }
        let obs = rank_tol(&vstack(&shifted, &f.chat), tol)?;
        if obs < n {
            failures.push(RankFailure {
                r,
                which: RankTest::ObserveRank,
                rank_found: obs,
            });
        }
    }
    Ok(FeasibilityReport {
        feasible: failures.is_empty(),
        checked_points: checked,
        failures,
    })
}

#[derive(Debug, Clone)]
pub struct HamiltonianLoop {
    pub a_cl: ComplexMatrix,
    pub eigenvalues: Vec<Complex64>,
    pub imag_axis_free: bool,
    /// `min |Re λ|` over the spectrum.
    pub min_axis_distance: f64,
    /// Whether the spectrum is closed under `λ ↦ -λ̄`.
    pub spectrum_symmetric: bool,
    /// `-K ⪰ 0`; the computation proceeds either way.
    pub gain_is_dissipative: bool,
}

/// `A_cl = [[Â, B̂B̂*], [-Ĉ*KĈ, -Â*]]`, the state matrix of the closed loop
/// around the canonical realization of `G G^#`.
pub fn hamiltonian_closed_loop(
    f: &FactorData,
    k: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<HamiltonianLoop> {
    let p = f.p();
    if k.shape() != (p, p) {
        return Err(Error::dim(
            "hamiltonian_closed_loop",
            format!("K is {:?}, expected ({p}, {p})", k.shape()),
        ));
    }
    let a_cl = block2x2(
        &f.ahat,
        &(&f.bhat * f.bhat.adjoint()),
        &(-(f.chat.adjoint() * k * &f.chat)),
        &(-f.ahat.adjoint()),
    );
    let eigs = eigenvalues(&a_cl)?;
    let min_axis_distance = eigs.iter().map(|z| z.re.abs()).fold(f64::INFINITY, f64::min);
    let imag_axis_free = eigs
        .iter()
        .all(|z| z.re.abs() > AXIS_TOL * (1.0 + z.norm()));
    let mirrored: Vec<Complex64> = eigs.iter().map(|z| -z.conj()).collect();
    let spectrum_symmetric =
        spectral_overlap(&eigs, &mirrored, DEFAULT_PAIRING_RADIUS).len() == eigs.len();
    let gain_is_dissipative = is_hermitian(k, tol)
        && psd_check(&(-hermitian_part(k)), tol).map(|r| r.is_psd).unwrap_or(false);
    Ok(HamiltonianLoop {
        a_cl,
        eigenvalues: eigs,
        imag_axis_free,
        min_axis_distance: if min_axis_distance.is_finite() { min_axis_distance } else { 0.0 },
        spectrum_symmetric,
        gain_is_dissipative,
    })
}

#[derive(Debug, Clone)]
pub struct RegularizingGain {
    pub k: ComplexMatrix,
    pub alpha: f64,
    pub closed_loop: HamiltonianLoop,
}

/// `K = -αI` with the largest `α ∈ {1, ½, ¼, …, 2⁻⁴⁰}` that clears the
/// imaginary axis.
pub fn find_regularizing_gain(f: &FactorData, tol: &Tolerance) -> Result<RegularizingGain> {
    let feas = spectral_factorization_feasible(f, tol)?;
    if !feas.feasible {
        return Err(Error::Domain(format!(
            "factor fails the rank test at {} point(s)",
            feas.failures.len()
        )));
    }
    let p = f.p();
    let mut alpha = 1.0;
    let mut best_distance = 0.0f64;
    for _ in 0..=MAX_HALVINGS {
        let k = identity(p) * Complex64::new(-alpha, 0.0);
        let closed_loop = hamiltonian_closed_loop(f, &k, tol)?;
        if closed_loop.imag_axis_free {
            return Ok(RegularizingGain {
                k,
                alpha,
                closed_loop,
            });
        }
        best_distance = best_distance.max(closed_loop.min_axis_distance);
        alpha *= 0.5;
    }
    Err(Error::Numerical(format!(
        "no α down to 2^-{MAX_HALVINGS} cleared the axis (best min |Re λ| = {best_distance:.3e})"
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeVerdict {
    /// The outcome agrees with the minimality test.
    Consistent,
    /// Minimal, but no sampled dissipative gain separated the spectra.
    Inconclusive,
    /// Non-minimal, yet a gain separated the spectra.
    Counterexample,
}

#[derive(Debug, Clone)]
pub struct DissipativeProbe {
    pub minimal: bool,
    pub gain: Option<ComplexMatrix>,
    pub trials: usize,
    pub verdict: ProbeVerdict,
}

/// Samples dissipative gains (`-(K + K*) ⪰ 0`) looking for one that moves
/// every eigenvalue of `A`. For a GP system this should succeed exactly when
/// the realization is minimal; failure on a minimal system is reported as
/// inconclusive since only finitely many gains are tried.
pub fn dissipative_gain_probe(
    r: &Realization,
    trials: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<DissipativeProbe> {
    if r.m() != r.p() {
        return Err(Error::Domain("dissipative gains need as many inputs as outputs".into()));
    }
    let minimal = mcmillan_degree(r, tol)?.is_minimal;
    let spec_a = eigenvalues(r.a())?;
    let mut sampler = Sampler::new(seed);
    let p = r.p();
    let mut gain = None;
    for _ in 0..trials {
        let x = sampler.matrix(p, p);
        let scale = sampler.uniform(0.1, 2.0);
        let k = (-(&x * x.adjoint()) + sampler.skew_hermitian(p)) * Complex64::new(scale, 0.0);
        let a_cl = r.a() + r.b() * &k * r.c();
        if spectral_overlap(&spec_a, &eigenvalues(&a_cl)?, DEFAULT_PAIRING_RADIUS).is_empty() {
            gain = Some(k);
            break;
        }
    }
    let verdict = match (minimal, gain.is_some()) {
        (true, true) | (false, false) => ProbeVerdict::Consistent,
        (true, false) => ProbeVerdict::Inconclusive,
        (false, true) => ProbeVerdict::Counterexample,
    };
    Ok(DissipativeProbe {
        minimal,
        gain,
        trials,
        verdict,
    })
}
