//! Independent reference computations for the integration tests. Nothing
//! here calls into the decomposition code of the library except the SVD
//! used for rank decisions on Krylov matrices.

#![allow(dead_code)]

use ratreal_core::matrix::{c, hstack, identity, Svd};
use ratreal_core::{Complex64, ComplexMatrix, Realization};

/// Gauss-Jordan inverse with partial pivoting. `None` when a pivot vanishes.
pub fn gj_inverse(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = m.nrows();
    let mut a = m.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[(i, col)].norm().total_cmp(&a[(j, col)].norm()))?;
        if a[(piv, col)].norm() < 1e-300 {
            return None;
        }
        a.swap_rows(col, piv);
        inv.swap_rows(col, piv);
        let p = a[(col, col)];
        for j in 0..n {
            a[(col, j)] /= p;
            inv[(col, j)] /= p;
        }
        for i in 0..n {
            if i != col {
                let f = a[(i, col)];
                if f != c(0.0, 0.0) {
                    for j in 0..n {
                        let (aj, ij) = (a[(col, j)], inv[(col, j)]);
                        a[(i, j)] -= f * aj;
                        inv[(i, j)] -= f * ij;
                    }
                }
            }
        }
    }
    Some(inv)
}

/// `C (sI - A)^{-1} B + D` through the explicit inverse.
pub fn transfer(r: &Realization, s: Complex64) -> ComplexMatrix {
    let n = r.n();
    if n == 0 {
        return r.d().clone();
    }
    let res = identity(n) * s - r.a();
    let inv = gj_inverse(&res).expect("evaluation point is not a pole");
    r.c() * inv * r.b() + r.d()
}

/// `(I - F K)^{-1} F` from samples of the open loop.
pub fn closed_loop_transfer(r: &Realization, k: &ComplexMatrix, s: Complex64) -> ComplexMatrix {
    let f = transfer(r, s);
    let p = f.nrows();
    let m = identity(p) - &f * k;
    gj_inverse(&m).expect("I - FK is invertible") * f
}

/// Rank of `[B, AB, …, A^{n-1}B]`, relative cutoff on its largest singular
/// value.
pub fn krylov_rank(a: &ComplexMatrix, b: &ComplexMatrix, rel: f64) -> usize {
    let n = a.nrows();
    if n == 0 {
        return 0;
    }
    let mut blocks = b.clone();
    let mut cur = b.clone();
    for _ in 1..n {
        cur = a * cur;
        blocks = hstack(&blocks, &cur);
    }
    // column scaling keeps powers of A from swamping the rank decision
    for j in 0..blocks.ncols() {
        let nrm = blocks.column(j).norm();
        if nrm > 0.0 {
            let mut col = blocks.column_mut(j);
            col /= c(nrm, 0.0);
        }
    }
    let s = Svd::new(&blocks).unwrap();
    let top = s.max();
    s.singular_values.iter().filter(|&&v| v > rel * top).count()
}

pub fn controllability_rank(a: &ComplexMatrix, b: &ComplexMatrix) -> usize {
    krylov_rank(a, b, 1e-9)
}

pub fn observability_rank(a: &ComplexMatrix, cm: &ComplexMatrix) -> usize {
    krylov_rank(&a.adjoint(), &cm.adjoint(), 1e-9)
}

/// `4/(4 - s²) + 4`, the scalar function realized by the perturbed fixture.
pub fn psi2(s: Complex64) -> Complex64 {
    c(4.0, 0.0) / (c(4.0, 0.0) - s * s) + c(4.0, 0.0)
}

pub fn l1() -> ComplexMatrix {
    ratreal_core::matrix::real_matrix(3, 3, &[-1.0, 1.0, 1.0, 0.0, 1.0, -1.0, 1.0, 1.0, 1.0])
}

pub fn l2() -> ComplexMatrix {
    ratreal_core::matrix::real_matrix(3, 3, &[-1.0, 3.0, 1.0, 1.0, 1.0, -1.0, 1.0, 1.0, 4.0])
}

pub fn l2_prime() -> ComplexMatrix {
    let r5 = 5f64.sqrt();
    ratreal_core::matrix::real_matrix(
        3,
        3,
        &[-2.0, 4.0, 4.0, 0.0, 2.0, 2.0 - r5, r5 - 2.0, 4.0, 4.0],
    )
}

/// Random point in a box, away from the listed poles.
pub fn point_away_from(
    rng: &mut ratreal_core::random::Sampler,
    poles: &[Complex64],
    half: f64,
) -> Complex64 {
    loop {
        let s = c(rng.uniform(-half, half), rng.uniform(-half, half));
        if poles.iter().all(|p| (s - p).norm() > 1e-2) {
            return s;
        }
    }
}
