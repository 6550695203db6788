//! Controllability, observability and minimality of realizations.
//!
//! PBH rank tests run at every distinct eigenvalue of `A`. The McMillan
//! degree comes from an orthogonal staircase reduction: the controllable
//! subspace is grown by block Krylov steps with SVD rank decisions, then the
//! same is done for the observable part of what remains. Only unitary state
//! transformations are used.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{
    cluster_eigenvalues, cmp_complex, distinct_eigenvalues, eigenvalues, hstack, identity,
    norm2, on_axis, rank_tol, vstack, zeros, ComplexMatrix, ComplexVector, Svd, Tolerance,
    AXIS_TOL, CLUSTER_RADIUS,
};
use crate::realization::Realization;

/// Default relative radius for matching eigenvalues of two matrices.
pub const DEFAULT_PAIRING_RADIUS: f64 = 1e-6;

/// Where the PBH rank condition is required to hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    AllPlane,
    ClosedRightHalf,
    ImaginaryAxis,
}

impl Region {
    pub fn contains(self, z: Complex64) -> bool {
        match self {
            Region::AllPlane => true,
            Region::ClosedRightHalf => z.re >= -AXIS_TOL * (1.0 + z.norm()),
            Region::ImaginaryAxis => on_axis(z),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    Uncontrollable,
    Unobservable,
}

/// A mode that fails a PBH test. For `Uncontrollable`, `direction` is a
/// left vector with `v*(A - λI) ≈ 0`, `v*B ≈ 0`; for `Unobservable` it is a
/// right vector with `(A - λI)v ≈ 0`, `Cv ≈ 0`.
#[derive(Debug, Clone)]
pub struct PbhWitness {
    pub eigenvalue: Complex64,
    pub direction: ComplexVector,
    pub kind: WitnessKind,
}

#[derive(Debug, Clone)]
pub struct PbhOutcome {
    pub holds: bool,
    pub witnesses: Vec<PbhWitness>,
}

fn check_pair(
    a: &ComplexMatrix,
    other: &ComplexMatrix,
    stacked_rows: bool,
    op: &'static str,
) -> Result<()> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::dim(op, "A must be square"));
    }
    let ok = if stacked_rows {
        other.ncols() == n
    } else {
        other.nrows() == n
    };
    if !ok {
        return Err(Error::dim(
            op,
            format!("{:?} is not conformal with {n} states", other.shape()),
        ));
    }
    Ok(())
}

/// `rank [A - λI, B] = n` for every eigenvalue `λ` of `A` inside `region`.
pub fn pbh_controllable(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    region: Region,
    tol: &Tolerance,
) -> Result<PbhOutcome> {
    check_pair(a, b, false, "pbh_controllable")?;
    let n = a.nrows();
    let mut witnesses = Vec::new();
    for cluster in distinct_eigenvalues(a)? {
        let lambda = cluster.center;
        if !region.contains(lambda) {
            continue;
        }
        let pencil = hstack(&(a - identity(n) * lambda), b);
        let s = Svd::new(&pencil)?;
        if s.rank(tol) < n {
            witnesses.push(PbhWitness {
                eigenvalue: lambda,
                direction: s.u.column(n - 1).into_owned(),
                kind: WitnessKind::Uncontrollable,
            });
        }
    }
    Ok(PbhOutcome {
        holds: witnesses.is_empty(),
        witnesses,
    })
}

/// `rank [A - λI; C] = n` for every eigenvalue `λ` of `A` inside `region`.
pub fn pbh_observable(
    a: &ComplexMatrix,
    c: &ComplexMatrix,
    region: Region,
    tol: &Tolerance,
) -> Result<PbhOutcome> {
    check_pair(a, c, true, "pbh_observable")?;
    let n = a.nrows();
    let mut witnesses = Vec::new();
    for cluster in distinct_eigenvalues(a)? {
        let lambda = cluster.center;
        if !region.contains(lambda) {
            continue;
        }
        let pencil = vstack(&(a - identity(n) * lambda), c);
        let s = Svd::new(&pencil)?;
        if s.rank(tol) < n {
            witnesses.push(PbhWitness {
                eigenvalue: lambda,
                direction: s.w.row(n - 1).adjoint(),
                kind: WitnessKind::Unobservable,
            });
        }
    }
    Ok(PbhOutcome {
        holds: witnesses.is_empty(),
        witnesses,
    })
}

#[derive(Debug, Clone)]
pub struct MinimalityReport {
    pub mcmillan_degree: usize,
    pub state_dim: usize,
    pub is_minimal: bool,
    pub witnesses: Vec<PbhWitness>,
    /// Eigenvalues shared by `A` and `L`; empty when `L` is not square.
    pub common_spectrum: Vec<Complex64>,
}

/// Orthonormal basis of the controllable subspace of `(A, B)`.
fn controllable_subspace(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<ComplexMatrix> {
    let n = a.nrows();
    let cutoff = tol.threshold(norm2(a).max(norm2(b)));
    let mut basis = zeros(n, 0);
    let mut frontier = b.clone();
    while basis.ncols() < n {
        for _ in 0..2 {
            let proj = &basis * (basis.adjoint() * &frontier);
            frontier -= proj;
        }
        let s = Svd::new(&frontier)?;
        let r = s.singular_values.iter().filter(|&&v| v > cutoff).count();
        if r == 0 {
            break;
        }
        let fresh = s.u.columns(0, r).into_owned();
        frontier = a * &fresh;
        basis = hstack(&basis, &fresh);
    }
    Ok(basis)
}

/// Restriction to the controllable and observable part (orthogonal
/// staircase). The result evaluates like `r` and has state dimension `q`.
pub fn minimal_reduction(r: &Realization, tol: &Tolerance) -> Result<Realization> {
    let q = controllable_subspace(r.a(), r.b(), tol)?;
    let ac = q.adjoint() * r.a() * &q;
    let bc = q.adjoint() * r.b();
    let cc = r.c() * &q;
    let p = controllable_subspace(&ac.adjoint(), &cc.adjoint(), tol)?;
    Realization::new(
        p.adjoint() * &ac * &p,
        p.adjoint() * bc,
        cc * &p,
        r.d().clone(),
    )
}

pub fn mcmillan_degree(r: &Realization, tol: &Tolerance) -> Result<MinimalityReport> {
    let reduced = minimal_reduction(r, tol)?;
    let q = reduced.n();
    let n = r.n();
    let mut witnesses = pbh_controllable(r.a(), r.b(), Region::AllPlane, tol)?.witnesses;
    witnesses.extend(pbh_observable(r.a(), r.c(), Region::AllPlane, tol)?.witnesses);
    let common = if r.p() == r.m() {
        common_spectrum(r, DEFAULT_PAIRING_RADIUS)?
    } else {
        Vec::new()
    };
    Ok(MinimalityReport {
        mcmillan_degree: q,
        state_dim: n,
        is_minimal: q == n,
        witnesses,
        common_spectrum: common,
    })
}

/// Greedy nearest-pair matching between two eigenvalue lists. A pair
/// matches when `|x - y| <= radius * (1 + max(|x|, |y|))`; each entry is
/// used at most once. Returns the matched members of `x`, sorted.
pub fn spectral_overlap(x: &[Complex64], y: &[Complex64], radius: f64) -> Vec<Complex64> {
    let mut pairs = Vec::new();
    for (i, a) in x.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            let d = (a - b).norm();
            if d <= radius * (1.0 + a.norm().max(b.norm())) {
                pairs.push((d, i, j));
            }
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)).then(p.2.cmp(&q.2)));
    let mut used_x = vec![false; x.len()];
    let mut used_y = vec![false; y.len()];
    let mut out = Vec::new();
    for (_, i, j) in pairs {
        if !used_x[i] && !used_y[j] {
            used_x[i] = true;
            used_y[j] = true;
            out.push(x[i]);
        }
    }
    out.sort_by(cmp_complex);
    out
}

/// Smallest distance between any member of `x` and any member of `y`.
pub fn min_spectral_distance(x: &[Complex64], y: &[Complex64]) -> f64 {
    x.iter()
        .flat_map(|a| y.iter().map(move |b| (a - b).norm()))
        .fold(f64::INFINITY, f64::min)
}

/// Eigenvalues of `A` that are also eigenvalues of the system matrix `L`.
pub fn common_spectrum(r: &Realization, radius: f64) -> Result<Vec<Complex64>> {
    if r.p() != r.m() {
        return Err(Error::Domain(format!(
            "system matrix is {}x{}; a common spectrum needs it square",
            r.n() + r.p(),
            r.n() + r.m()
        )));
    }
    let spec_a = eigenvalues(r.a())?;
    let spec_l = eigenvalues(&r.system_matrix())?;
    Ok(spectral_overlap(&spec_a, &spec_l, radius))
}

/// Number of Jordan blocks of `A`: the sum of geometric multiplicities over
/// clustered eigenvalues. Jordan structure is ill-conditioned, so the count
/// is only reliable when distinct eigenvalues are separated by more than
/// [`CLUSTER_RADIUS`] and defective clusters are resolved to that radius.
pub fn jordan_block_count(a: &ComplexMatrix, tol: &Tolerance) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::dim("jordan_block_count", "A must be square"));
    }
    let n = a.nrows();
    let clusters = cluster_eigenvalues(&eigenvalues(a)?, CLUSTER_RADIUS);
    let mut total = 0;
    for cl in clusters {
        let geometric = n - rank_tol(&(a - identity(n) * cl.center), tol)?;
        total += geometric.clamp(1, cl.multiplicity);
    }
    Ok(total)
}

/// Finds a feedthrough `D` for which `spect(A) ∩ spect(L) = ∅`.
///
/// Requires a minimal realization with `rank B == rank C` or with at most
/// `min(rank B, rank C)` Jordan blocks in `A`; other cases are refused.
/// Candidates are scalar shifts `dI` outside the spectrum of `A`, then
/// seeded random matrices; the first one whose spectra separate by more
/// than [`DEFAULT_PAIRING_RADIUS`] is returned.
pub fn certify_minimal_via_d(r: &Realization, tol: &Tolerance) -> Result<ComplexMatrix> {
    if r.p() != r.m() {
        return Err(Error::Domain(
            "a feedthrough certificate needs as many inputs as outputs".into(),
        ));
    }
    let report = mcmillan_degree(r, tol)?;
    if !report.is_minimal {
        return Err(Error::NotMinimal {
            witnesses: report.witnesses,
        });
    }
    let beta = rank_tol(r.b(), tol)?;
    let gamma = rank_tol(r.c(), tol)?;
    let blocks = jordan_block_count(r.a(), tol)?;
    if beta != gamma && blocks > beta.min(gamma) {
        return Err(Error::Unsupported(format!(
            "rank(B)={beta} differs from rank(C)={gamma} and A has {blocks} Jordan blocks > min(rank B, rank C)={}",
            beta.min(gamma)
        )));
    }

    let p = r.p();
    let spec_a = eigenvalues(r.a())?;
    let rho = 1.0 + spec_a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut candidates: Vec<ComplexMatrix> = [
        Complex64::new(rho, 0.0),
        Complex64::new(-rho, 0.0),
        Complex64::new(0.0, rho),
        Complex64::new(2.0 * rho + 1.0, 0.5 * rho),
    ]
    .into_iter()
    .map(|z| identity(p) * z)
    .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d0d0);
    for _ in 0..60 {
        candidates.push(ComplexMatrix::from_fn(p, p, |_, _| {
            Complex64::new(
                rng.random_range(-rho..rho),
                rng.random_range(-rho..rho),
            )
        }));
    }

    for d in candidates {
        let spec_d = eigenvalues(&d)?;
        if !spectral_overlap(&spec_a, &spec_d, DEFAULT_PAIRING_RADIUS).is_empty() {
            continue;
        }
        let trial = Realization::new(r.a().clone(), r.b().clone(), r.c().clone(), d.clone())?;
        if common_spectrum(&trial, DEFAULT_PAIRING_RADIUS)?.is_empty() {
            return Ok(d);
        }
    }
    Err(Error::Numerical(
        "no feedthrough candidate separated spect(A) from spect(L)".into(),
    ))
}
