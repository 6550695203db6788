//! Structured realizations for the positive, generalized-positive, even and
//! odd function classes, their algebraic certificates, and a sampling-based
//! classifier on the imaginary axis.
//!
//! Notation: a GPE function is `Ψ = G G^#` for a square factor `G` with
//! realization `(Â, B̂, Ĉ, D̂)`; its canonical realization has `2n` states.

mod axis;
mod certificate;

pub use axis::{classify_axis, ClassReport, FunctionClass, GridConfig, GridPoint};
pub use certificate::{
    canonical_gpe_certificate, certificate_perturbation, odd_canonicalize,
    verify_gp_certificate, verify_gpe_certificates, verify_hermitian_axis_certificate,
    verify_odd_certificate, Certificate, CertificateKind, ChainLevel, GpeCertificates,
    OddCanonical,
};

use crate::error::{Error, Result};
use crate::matrix::{
    block2x2, fro, hermitian_eigen, hstack, is_skew_hermitian, norm2, vstack, zeros,
    ComplexMatrix, Tolerance,
};
use crate::realization::Realization;

/// Realization `(Â, B̂, Ĉ, D̂)` of a square factor `G`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorData {
    pub ahat: ComplexMatrix,
    pub bhat: ComplexMatrix,
    pub chat: ComplexMatrix,
    pub dhat: ComplexMatrix,
}

impl FactorData {
    /// Checks `Â` n×n, `B̂` n×p, `Ĉ` p×n, `D̂` p×p.
    pub fn new(
        ahat: ComplexMatrix,
        bhat: ComplexMatrix,
        chat: ComplexMatrix,
        dhat: ComplexMatrix,
    ) -> Result<Self> {
        let n = ahat.nrows();
        let p = dhat.nrows();
        let ok = ahat.ncols() == n
            && dhat.ncols() == p
            && bhat.shape() == (n, p)
            && chat.shape() == (p, n);
        if !ok {
            return Err(Error::dim(
                "factor",
                format!(
                    "A {:?}, B {:?}, C {:?}, D {:?} do not form a square factor",
                    ahat.shape(),
                    bhat.shape(),
                    chat.shape(),
                    dhat.shape()
                ),
            ));
        }
        // finiteness is checked by the realization constructor
        Realization::new(ahat.clone(), bhat.clone(), chat.clone(), dhat.clone())?;
        Ok(FactorData {
            ahat,
            bhat,
            chat,
            dhat,
        })
    }

    pub fn n(&self) -> usize {
        self.ahat.nrows()
    }

    pub fn p(&self) -> usize {
        self.dhat.nrows()
    }

    pub fn realization(&self) -> Realization {
        Realization::new(
            self.ahat.clone(),
            self.bhat.clone(),
            self.chat.clone(),
            self.dhat.clone(),
        )
        .expect("factor blocks are consistent")
    }
}

/// Realization of `G G^#` with 2n states:
/// `A = [[Â, B̂B̂*], [0, -Â*]]`, `B = [B̂D̂*; -Ĉ*]`, `C = [Ĉ, D̂B̂*]`, `D = D̂D̂*`.
pub fn build_gpe_canonical(f: &FactorData) -> Realization {
    let n = f.n();
    let a = block2x2(
        &f.ahat,
        &(&f.bhat * f.bhat.adjoint()),
        &zeros(n, n),
        &(-f.ahat.adjoint()),
    );
    let b = vstack(&(&f.bhat * f.dhat.adjoint()), &(-f.chat.adjoint()));
    let c = hstack(&f.chat, &(&f.dhat * f.bhat.adjoint()));
    let d = &f.dhat * f.dhat.adjoint();
    Realization::new(a, b, c, d).expect("canonical blocks are consistent")
}

fn require_square_l(l: &ComplexMatrix, states: usize, p: usize, op: &'static str) -> Result<()> {
    if l.shape() != (states + p, states + p) {
        return Err(Error::dim(
            op,
            format!("L is {:?}, expected {}x{}", l.shape(), states + p, states + p),
        ));
    }
    Ok(())
}

/// Whether `L` has the canonical GPE structure.
///
/// With `J = [[0, -I_n, 0], [I_n, 0, 0], [0, 0, I_p]]` the product `J L` must
/// be Hermitian. That alone also admits perturbed realizations whose lower
/// left state block is non-zero, so the check further requires that block to
/// vanish and `[[A₁₂, B₁], [C₂, D]]` to be PSD of rank at most `p`, which is
/// exactly the set of matrices `build_gpe_canonical` can produce.
pub fn gpe_symmetry_check(l: &ComplexMatrix, n: usize, p: usize, tol: &Tolerance) -> Result<bool> {
    require_square_l(l, 2 * n, p, "gpe_symmetry_check")?;
    let size = 2 * n + p;
    let mut j = zeros(size, size);
    for i in 0..n {
        j[(i, n + i)] = -crate::matrix::c(1.0, 0.0);
        j[(n + i, i)] = crate::matrix::c(1.0, 0.0);
    }
    for i in 2 * n..size {
        j[(i, i)] = crate::matrix::c(1.0, 0.0);
    }
    let jl = &j * l;
    let cutoff = tol.threshold(fro(l));
    if fro(&(&jl - jl.adjoint())) > cutoff {
        return Ok(false);
    }
    if fro(&l.view((n, 0), (n, n)).into_owned()) > cutoff {
        return Ok(false);
    }
    let gram = gram_block(l, n, p);
    let (values, _) = hermitian_eigen(&gram)?;
    let eig_cut = tol.threshold(norm2(&gram));
    let negative = values.iter().any(|&v| v < -eig_cut);
    let rank = values.iter().filter(|&&v| v > eig_cut).count();
    Ok(!negative && rank <= p)
}

/// `[[A₁₂, B₁], [C₂, D]]` of a 2n+p system matrix; equals `[B̂; D̂][B̂; D̂]*`
/// for canonical builds.
pub(crate) fn gram_block(l: &ComplexMatrix, n: usize, p: usize) -> ComplexMatrix {
    let a12 = l.view((0, n), (n, n)).into_owned();
    let b1 = l.view((0, 2 * n), (n, p)).into_owned();
    let c2 = l.view((2 * n, n), (p, n)).into_owned();
    let d = l.view((2 * n, 2 * n), (p, p)).into_owned();
    block2x2(&a12, &b1, &c2, &d)
}

fn require_skew(m: &ComplexMatrix, name: &str, tol: &Tolerance) -> Result<()> {
    if !is_skew_hermitian(m, tol) {
        return Err(Error::Domain(format!("{name} is not skew-Hermitian")));
    }
    Ok(())
}

/// Odd realization with `ν` "negative" states:
/// `A = [[T₁, Ã], [Ã*, T₂]]`, `B = [B₁; B₂]`, `C = [B₁*, -B₂*]`, `D = T₃`.
/// `coupling` is `Ã` (ν × (n-ν)); `None` means zero.
pub fn build_odd_canonical(
    t1: &ComplexMatrix,
    t2: &ComplexMatrix,
    t3: &ComplexMatrix,
    b1: &ComplexMatrix,
    b2: &ComplexMatrix,
    coupling: Option<&ComplexMatrix>,
    tol: &Tolerance,
) -> Result<Realization> {
    let nu = t1.nrows();
    let rest = t2.nrows();
    let p = t3.nrows();
    let shapes_ok = b1.shape() == (nu, p) && b2.shape() == (rest, p);
    if !shapes_ok {
        return Err(Error::dim(
            "build_odd_canonical",
            format!("B1 {:?}, B2 {:?} for ν={nu}, n-ν={rest}, p={p}", b1.shape(), b2.shape()),
        ));
    }
    require_skew(t1, "T1", tol)?;
    require_skew(t2, "T2", tol)?;
    require_skew(t3, "T3", tol)?;
    let coupling = match coupling {
        Some(m) if m.shape() != (nu, rest) => {
            return Err(Error::dim(
                "build_odd_canonical",
                format!("coupling is {:?}, expected ({nu}, {rest})", m.shape()),
            ))
        }
        Some(m) => m.clone(),
        None => zeros(nu, rest),
    };
    Realization::new(
        block2x2(t1, &coupling, &coupling.adjoint(), t2),
        vstack(b1, b2),
        hstack(&b1.adjoint(), &(-b2.adjoint())),
        t3.clone(),
    )
}

/// `L = [[Tₙ, B], [B*, Tₚ]]` with skew-Hermitian diagonal blocks.
pub fn build_po(
    tn: &ComplexMatrix,
    tp: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<Realization> {
    if b.shape() != (tn.nrows(), tp.nrows()) {
        return Err(Error::dim(
            "build_po",
            format!("B is {:?} for Tn {:?}, Tp {:?}", b.shape(), tn.shape(), tp.shape()),
        ));
    }
    require_skew(tn, "Tn", tol)?;
    require_skew(tp, "Tp", tol)?;
    Realization::new(tn.clone(), b.clone(), b.adjoint(), tp.clone())
}

pub fn verify_po(l: &ComplexMatrix, n: usize, p: usize, tol: &Tolerance) -> Result<bool> {
    require_square_l(l, n, p, "verify_po")?;
    let r = Realization::from_system_matrix(l, n)?;
    let scale = fro(l);
    Ok(is_skew_hermitian(r.a(), tol)
        && is_skew_hermitian(r.d(), tol)
        && fro(&(r.c() - r.b().adjoint())) <= tol.threshold(scale))
}
