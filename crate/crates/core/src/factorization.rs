//! Spectral factors `Ψ = G G^#`.
//!
//! Matrix factors are read off canonical realizations; scalar factors come
//! from splitting the roots of an even rational function between the two
//! half-planes. `G` keeps the right half-plane member of every root pair.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classes::{gpe_symmetry_check, gram_block, FactorData};
use crate::error::{Error, Result};
use crate::matrix::{
    cmp_complex, eigenvalues, fro, hermitian_eigen, identity, lu_solve, psd_check, scalar,
    zeros, ComplexMatrix, Svd, Tolerance, AXIS_TOL,
};
use crate::minimality::{mcmillan_degree, spectral_overlap};
use crate::realization::Realization;

/// Relative radius for pairing `λ` with `-λ̄` and for cancelling roots.
pub const ROOT_PAIRING_TOL: f64 = 1e-7;

/// `Ψ(s) = gain · Π(s - zᵢ) / Π(s - pⱼ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarRational {
    numerator_roots: Vec<Complex64>,
    denominator_roots: Vec<Complex64>,
    gain: Complex64,
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

impl ScalarRational {
    /// Cancels numerator and denominator roots that agree to
    /// [`ROOT_PAIRING_TOL`]; root lists are stored sorted.
    pub fn new(
        numerator_roots: Vec<Complex64>,
        denominator_roots: Vec<Complex64>,
        gain: Complex64,
    ) -> Result<Self> {
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        if !numerator_roots.iter().chain(&denominator_roots).all(finite) || !finite(&gain) {
            return Err(Error::Domain("rational function has a non-finite entry".into()));
        }
        let mut num = numerator_roots;
        let mut den = Vec::with_capacity(denominator_roots.len());
        for p in denominator_roots {
            match num.iter().position(|&z| close(z, p, ROOT_PAIRING_TOL)) {
                Some(i) => {
                    num.swap_remove(i);
                }
                None => den.push(p),
            }
        }
        if gain == Complex64::new(0.0, 0.0) {
            num.clear();
            den.clear();
        }
        num.sort_by(cmp_complex);
        den.sort_by(cmp_complex);
        Ok(ScalarRational {
            numerator_roots: num,
            denominator_roots: den,
            gain,
        })
    }

    pub fn constant(value: Complex64) -> Self {
        ScalarRational::new(Vec::new(), Vec::new(), value).expect("finite constant")
    }

    pub fn numerator_roots(&self) -> &[Complex64] {
        &self.numerator_roots
    }

    pub fn denominator_roots(&self) -> &[Complex64] {
        &self.denominator_roots
    }

    pub fn gain(&self) -> Complex64 {
        self.gain
    }

    /// Numerator degree minus denominator degree.
    pub fn relative_degree(&self) -> isize {
        self.numerator_roots.len() as isize - self.denominator_roots.len() as isize
    }

    pub fn evaluate(&self, s: Complex64) -> Result<Complex64> {
        let mut v = self.gain;
        for &p in &self.denominator_roots {
            if close(s, p, 1e-12) {
                return Err(Error::Pole { eigenvalue: p });
            }
            v /= s - p;
        }
        for &z in &self.numerator_roots {
            v *= s - z;
        }
        Ok(v)
    }

    /// `Ψ^#(s) = conj(Ψ(-s̄))`.
    pub fn adjoint(&self) -> ScalarRational {
        let flip = |z: &Complex64| -z.conj();
        let sign = if self.relative_degree() % 2 == 0 { 1.0 } else { -1.0 };
        ScalarRational::new(
            self.numerator_roots.iter().map(flip).collect(),
            self.denominator_roots.iter().map(flip).collect(),
            self.gain.conj() * sign,
        )
        .expect("finite roots stay finite")
    }

    pub fn product(&self, rhs: &ScalarRational) -> ScalarRational {
        let mut num = self.numerator_roots.clone();
        num.extend_from_slice(&rhs.numerator_roots);
        let mut den = self.denominator_roots.clone();
        den.extend_from_slice(&rhs.denominator_roots);
        ScalarRational::new(num, den, self.gain * rhs.gain).expect("finite roots stay finite")
    }

    /// Realization as a cascade of first-order sections; one state per
    /// denominator root. Improper functions have none.
    pub fn to_realization(&self) -> Result<Realization> {
        if self.relative_degree() > 0 {
            return Err(Error::Domain(
                "an improper rational function has no state-space realization".into(),
            ));
        }
        let one = Complex64::new(1.0, 0.0);
        let mut out = Realization::static_gain(scalar(self.gain));
        for (i, &p) in self.denominator_roots.iter().enumerate() {
            // (s - z)/(s - p) = 1 + (p - z)/(s - p), or 1/(s - p)
            let section = match self.numerator_roots.get(i) {
                Some(&z) => Realization::new(scalar(p), scalar(one), scalar(p - z), scalar(one))?,
                None => Realization::new(scalar(p), scalar(one), scalar(one), zeros(1, 1))?,
            };
            out = out.series(&section)?;
        }
        Ok(out)
    }
}

/// Sampling setup for [`verify_product`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductCheck {
    pub samples: usize,
    pub rel_tol: f64,
    pub seed: u64,
}

impl Default for ProductCheck {
    fn default() -> Self {
        ProductCheck {
            samples: 10,
            rel_tol: 1e-8,
            seed: 0x0dd_c0de,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductOutcome {
    pub passed: bool,
    /// Largest `‖Ψ - G G^#‖ / (1 + ‖Ψ‖)` over the samples.
    pub max_rel_error: f64,
}

/// Random points in a box scaled to the given poles, kept away from them.
fn sample_points(poles: &[Complex64], count: usize, seed: u64) -> Vec<Complex64> {
    let rho = poles.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let half = 2.0 * (1.0 + rho);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let s = Complex64::new(rng.random_range(-half..half), rng.random_range(-half..half));
        if poles.iter().all(|p| (s - p).norm() > 1e-3 * (1.0 + p.norm())) {
            out.push(s);
        }
    }
    out
}

/// Compares `Ψ(s)` with `G(s) G^#(s)` at random points away from the poles
/// of all three.
pub fn verify_product(psi: &Realization, g: &Realization, check: &ProductCheck) -> Result<ProductOutcome> {
    if psi.p() != psi.m() || g.p() != psi.p() {
        return Err(Error::dim(
            "verify_product",
            format!("Ψ is {}x{}, G is {}x{}", psi.p(), psi.m(), g.p(), g.m()),
        ));
    }
    let g_adj = g.adjoint();
    let mut poles = psi.poles()?.to_vec();
    poles.extend_from_slice(g.poles()?);
    poles.extend_from_slice(g_adj.poles()?);
    let mut worst = 0.0f64;
    for s in sample_points(&poles, check.samples, check.seed) {
        let lhs = psi.evaluate_unchecked(s)?;
        let rhs = g.evaluate_unchecked(s)? * g_adj.evaluate_unchecked(s)?;
        worst = worst.max(fro(&(&lhs - rhs)) / (1.0 + fro(&lhs)));
    }
    Ok(ProductOutcome {
        passed: worst <= check.rel_tol,
        max_rel_error: worst,
    })
}

/// [`verify_product`] for scalar rational functions, evaluated from roots.
pub fn verify_scalar_product(
    psi: &ScalarRational,
    g: &ScalarRational,
    check: &ProductCheck,
) -> Result<ProductOutcome> {
    let g_adj = g.adjoint();
    let poles: Vec<Complex64> = psi
        .denominator_roots()
        .iter()
        .chain(g.denominator_roots())
        .chain(g_adj.denominator_roots())
        .copied()
        .collect();
    let mut worst = 0.0f64;
    for s in sample_points(&poles, check.samples, check.seed) {
        let lhs = psi.evaluate(s)?;
        let rhs = g.evaluate(s)? * g_adj.evaluate(s)?;
        worst = worst.max((lhs - rhs).norm() / (1.0 + lhs.norm()));
    }
    Ok(ProductOutcome {
        passed: worst <= check.rel_tol,
        max_rel_error: worst,
    })
}

fn is_symmetric_multiset(roots: &[Complex64]) -> bool {
    let mirror: Vec<Complex64> = roots.iter().map(|z| -z.conj()).collect();
    spectral_overlap(roots, &mirror, ROOT_PAIRING_TOL).len() == roots.len()
}

fn axis_root(roots: &[Complex64]) -> Option<Complex64> {
    roots
        .iter()
        .copied()
        .find(|z| z.re.abs() <= AXIS_TOL * (1.0 + z.norm()))
}

/// Spectral factor of a scalar even function that is positive on the
/// imaginary axis and has no roots or poles there.
///
/// `G` keeps the right half-plane member of every `(λ, -λ̄)` pair among the
/// roots and poles, and its gain makes `G(0)` real positive with
/// `|G(0)|² = Ψ(0)`.
pub fn scalar_spectral_factorize(psi: &ScalarRational) -> Result<ScalarRational> {
    let num = psi.numerator_roots();
    let den = psi.denominator_roots();
    if !is_symmetric_multiset(num) || !is_symmetric_multiset(den) {
        return Err(Error::Domain(
            "roots are not symmetric under λ ↦ -λ̄; the function is not even".into(),
        ));
    }
    let g = psi.gain();
    let mirrored_gain = psi.adjoint().gain();
    if !close(g, mirrored_gain, ROOT_PAIRING_TOL) {
        return Err(Error::Domain(format!(
            "gain {g} does not match its reflection {mirrored_gain}; the function is not even"
        )));
    }
    if let Some(z) = axis_root(num) {
        return Err(Error::PseudoSpectral(format!(
            "zero at {z} on the imaginary axis; regularize with feedback first"
        )));
    }
    if let Some(p) = axis_root(den) {
        return Err(Error::PseudoSpectral(format!(
            "pole at {p} on the imaginary axis; regularize with feedback first"
        )));
    }
    let at_zero = psi.evaluate(Complex64::new(0.0, 0.0))?;
    if at_zero.re <= 0.0 || at_zero.im.abs() > ROOT_PAIRING_TOL * (1.0 + at_zero.norm()) {
        return Err(Error::Domain(format!(
            "Ψ(0) = {at_zero} is not positive; the function is not nonnegative on the axis"
        )));
    }
    let right = |roots: &[Complex64]| -> Vec<Complex64> {
        roots.iter().copied().filter(|z| z.re > 0.0).collect()
    };
    let unit = ScalarRational::new(right(num), right(den), Complex64::new(1.0, 0.0))?;
    let u = unit.evaluate(Complex64::new(0.0, 0.0))?;
    let gain = Complex64::new(at_zero.re.sqrt(), 0.0) / u;
    ScalarRational::new(
        unit.numerator_roots().to_vec(),
        unit.denominator_roots().to_vec(),
        gain,
    )
}

/// Reads `(Â, B̂, Ĉ, D̂)` off a canonical GPE realization with `2n` states.
///
/// `[B̂; D̂]` is recovered jointly from the PSD block
/// `[[B̂B̂*, B̂D̂*], [D̂B̂*, D̂D̂*]]` using its `p` leading eigenpairs, so it is
/// determined up to a right unitary factor. The gauge is fixed by making
/// the largest entry of each column real and positive.
pub fn extract_factor(r: &Realization, n: usize, p: usize, tol: &Tolerance) -> Result<FactorData> {
    if r.n() != 2 * n || r.p() != p || r.m() != p {
        return Err(Error::dim(
            "extract_factor",
            format!(
                "realization has {} states and is {}x{}, expected {} states and {p}x{p}",
                r.n(),
                r.p(),
                r.m(),
                2 * n
            ),
        ));
    }
    if !psd_check(r.d(), tol)?.is_psd {
        return Err(Error::Domain("D is not positive semidefinite".into()));
    }
    let l = r.system_matrix();
    if !gpe_symmetry_check(&l, n, p, tol)? {
        return Err(Error::Domain("realization is not in canonical GPE form".into()));
    }
    let gram = gram_block(&l, n, p);
    let (values, vectors) = hermitian_eigen(&gram)?;
    let size = n + p;
    let mut x = zeros(size, p);
    for k in 0..p {
        let idx = size - 1 - k;
        let w = values[idx].max(0.0).sqrt();
        let mut col = vectors.column(idx) * Complex64::new(w, 0.0);
        if let Some(pivot) = col
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .filter(|z| z.norm() > 0.0)
        {
            col *= pivot.conj() / pivot.norm();
        }
        x.set_column(k, &col);
    }
    FactorData::new(
        r.a().view((0, 0), (n, n)).into_owned(),
        x.rows(0, n).into_owned(),
        r.c().columns(0, n).into_owned(),
        x.rows(n, p).into_owned(),
    )
}

/// Feedthrough `D̂ = Ĉ(Â + λ̄I)⁻¹B̂` that makes the canonical realization of
/// `G G^#` non-minimal, with the eigenvalue `λ` used.
///
/// `λ` is the eigenvalue of `Â` with the largest positive real part whose
/// mirror `-λ̄` is not also an eigenvalue; when there is none in the right
/// half-plane a left half-plane one is used, which works the same way. With
/// the whole spectrum on the imaginary axis no such choice exists.
pub fn nonminimal_dhat(f: &FactorData, tol: &Tolerance) -> Result<(ComplexMatrix, Complex64)> {
    let strict = Realization::new(
        f.ahat.clone(),
        f.bhat.clone(),
        f.chat.clone(),
        zeros(f.p(), f.p()),
    )?;
    let report = mcmillan_degree(&strict, tol)?;
    if !report.is_minimal {
        return Err(Error::NotMinimal {
            witnesses: report.witnesses,
        });
    }
    let spec = eigenvalues(&f.ahat)?;
    let off_axis: Vec<Complex64> = spec
        .iter()
        .copied()
        .filter(|z| z.re.abs() > AXIS_TOL * (1.0 + z.norm()))
        .collect();
    if off_axis.is_empty() {
        return Err(Error::Domain(
            "every eigenvalue of Â is on the imaginary axis".into(),
        ));
    }
    let usable = |z: &Complex64| {
        let mirror = -z.conj();
        spec.iter().all(|w| !close(*w, mirror, 1e-6))
    };
    let mut candidates: Vec<Complex64> = off_axis.into_iter().filter(usable).collect();
    // right half-plane first, largest real part first; then the left half-plane
    candidates.sort_by(|a, b| {
        (b.re > 0.0)
            .cmp(&(a.re > 0.0))
            .then(b.re.abs().total_cmp(&a.re.abs()))
            .then(cmp_complex(a, b))
    });
    let lambda = *candidates.first().ok_or_else(|| {
        Error::Domain("every off-axis eigenvalue of Â is mirrored by another one".into())
    })?;
    let n = f.n();
    let shifted = &f.ahat + identity(n) * lambda.conj();
    if Svd::new(&shifted)?.rank(tol) < n {
        return Err(Error::Numerical("Â + λ̄I is numerically singular".into()));
    }
    let dhat = &f.chat * lu_solve(&shifted, &f.bhat)?;
    Ok((dhat, lambda))
}
