//! Sampling `Ψ(iω)` on a frequency grid to test class membership.
//!
//! The verdicts are falsifiable but not proofs: a violation between grid
//! points goes unseen. Exact certification belongs to the certificate
//! verifiers.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{eigenvalues, fro, hermitian_eigen, ComplexMatrix, Tolerance};
use crate::minimality::minimal_reduction;
use crate::realization::Realization;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FunctionClass {
    P,
    GP,
    GPE,
    Odd,
    PO,
    Even,
}

impl FunctionClass {
    pub fn name(self) -> &'static str {
        match self {
            FunctionClass::P => "P",
            FunctionClass::GP => "GP",
            FunctionClass::GPE => "GPE",
            FunctionClass::Odd => "Odd",
            FunctionClass::PO => "PO",
            FunctionClass::Even => "Even",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    /// Log-spaced points over the whole grid, split evenly between `ω > 0`
    /// and `ω < 0`.
    pub points: usize,
    /// `|ω|` range, relative to `1 + max |eig(A)|`.
    pub omega_min: f64,
    pub omega_max: f64,
    /// Linear points placed around each imaginary-axis eigenvalue.
    pub refine_points: usize,
    /// Half-width of the refinement window, relative to `1 + |λ|`.
    pub refine_width: f64,
    /// Pole exclusion radius, relative to `1 + |λ|`.
    pub exclusion: f64,
    /// Relative threshold for the sign and symmetry tests, scaled by
    /// `1 + ‖Ψ(iω)‖_F`.
    pub defect_tol: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            points: 512,
            omega_min: 1e-3,
            omega_max: 1e3,
            refine_points: 64,
            refine_width: 1e-2,
            exclusion: 1e-6,
            defect_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub omega: f64,
    /// Smallest eigenvalue of `Ψ + Ψ*`.
    pub min_eig: f64,
    /// `‖Ψ - Ψ*‖ / (1 + ‖Ψ‖)`.
    pub herm_defect: f64,
    /// `‖Ψ + Ψ*‖ / (1 + ‖Ψ‖)`.
    pub skew_defect: f64,
    /// `‖Ψ(iω)‖_F`.
    pub norm: f64,
}

impl GridPoint {
    fn nonnegative(&self, defect_tol: f64) -> bool {
        self.min_eig >= -defect_tol * (1.0 + self.norm)
    }
}

#[derive(Debug, Clone)]
pub struct ClassReport {
    pub classes: BTreeSet<FunctionClass>,
    pub grid: Vec<GridPoint>,
    pub excluded_intervals: Vec<(f64, f64)>,
}

impl ClassReport {
    pub fn has(&self, class: FunctionClass) -> bool {
        self.classes.contains(&class)
    }
}

/// Eigenvalues treated as imaginary-axis poles for exclusion and probing.
fn axis_poles(a: &ComplexMatrix, exclusion: f64) -> Result<Vec<Complex64>> {
    Ok(eigenvalues(a)?
        .into_iter()
        .filter(|z| z.re.abs() <= exclusion.max(1e-6) * (1.0 + z.norm()))
        .collect())
}

fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..count)
                .map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp())
                .collect()
        }
    }
}

fn sample(psi: &ComplexMatrix, omega: f64) -> Result<GridPoint> {
    let herm = psi + psi.adjoint();
    let (values, _) = hermitian_eigen(&herm)?;
    let norm = fro(psi);
    Ok(GridPoint {
        omega,
        min_eig: values.first().copied().unwrap_or(0.0),
        herm_defect: fro(&(psi - psi.adjoint())) / (1.0 + norm),
        skew_defect: fro(&herm) / (1.0 + norm),
        norm,
    })
}

/// Samples `Ψ(iω)` and reports the classes it appears to belong to.
///
/// Beyond the grid, `P` needs the poles of a minimal realization in the
/// closed left half-plane and `Ψ + Ψ* ⪰ 0` at eight points on a small
/// half-circle to the right of every imaginary-axis pole. The probes
/// reject functions such as `-1/s` or `-1/s²` that are nonnegative on the
/// axis but not positive in the right half-plane.
pub fn classify_axis(r: &Realization, cfg: &GridConfig, tol: &Tolerance) -> Result<ClassReport> {
    if r.p() != r.m() {
        return Err(Error::Domain(format!(
            "classification needs a square function, got {}x{}",
            r.p(),
            r.m()
        )));
    }
    let poles = axis_poles(r.a(), cfg.exclusion)?;
    let rho = r
        .poles()?
        .iter()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max);
    let scale = 1.0 + rho;

    let half = cfg.points / 2;
    let mut omegas = vec![0.0];
    for w in log_grid(cfg.omega_min * scale, cfg.omega_max * scale, half) {
        omegas.push(w);
        omegas.push(-w);
    }
    let mut excluded = Vec::new();
    for z in &poles {
        let centre = z.im;
        let width = cfg.refine_width * (1.0 + z.norm());
        let k = cfg.refine_points.max(2);
        for j in 0..k {
            omegas.push(centre - width + 2.0 * width * j as f64 / (k - 1) as f64);
        }
        let radius = cfg.exclusion * (1.0 + z.norm());
        excluded.push((centre - radius, centre + radius));
    }
    omegas.sort_by(f64::total_cmp);
    omegas.dedup();
    excluded.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut grid = Vec::with_capacity(omegas.len());
    for w in omegas {
        if excluded.iter().any(|&(lo, hi)| w >= lo && w <= hi) {
            continue;
        }
        let Ok(psi) = r.evaluate_tol(Complex64::new(0.0, w), tol) else {
            continue;
        };
        grid.push(sample(&psi.value, w)?);
    }

    let t = cfg.defect_tol;
    let gp = grid.iter().all(|g| g.nonnegative(t));
    let even = grid.iter().all(|g| g.herm_defect <= t);
    let odd = grid.iter().all(|g| g.skew_defect <= t);

    let mut classes = BTreeSet::new();
    if gp {
        classes.insert(FunctionClass::GP);
    }
    if even {
        classes.insert(FunctionClass::Even);
    }
    if gp && even {
        classes.insert(FunctionClass::GPE);
    }
    if odd {
        classes.insert(FunctionClass::Odd);
    }
    if gp && positive_in_right_half(r, cfg, tol)? {
        classes.insert(FunctionClass::P);
        if odd {
            classes.insert(FunctionClass::PO);
        }
    }
    Ok(ClassReport {
        classes,
        grid,
        excluded_intervals: excluded,
    })
}

fn positive_in_right_half(r: &Realization, cfg: &GridConfig, tol: &Tolerance) -> Result<bool> {
    let minimal = minimal_reduction(r, tol)?;
    let spec = eigenvalues(minimal.a())?;
    let probe_tol = 1e-6;
    if spec.iter().any(|z| z.re > probe_tol * (1.0 + z.norm())) {
        return Ok(false);
    }
    for z in axis_poles(minimal.a(), probe_tol)? {
        let eps = 1e-4 * (1.0 + z.norm());
        for k in 0..8 {
            let theta = -FRAC_PI_2 + std::f64::consts::PI * (k as f64 + 0.5) / 8.0;
            let s = Complex64::new(0.0, z.im) + Complex64::from_polar(eps, theta);
            let Ok(psi) = minimal.evaluate_tol(s, tol) else {
                continue;
            };
            if !sample(&psi.value, s.im)?.nonnegative(cfg.defect_tol) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
