//! Seeded generators for test matrices and systems.
//!
//! Entries are uniform on `[-1, 1] + i[-1, 1]`. Everything is driven by a
//! ChaCha stream so a seed reproduces the same sequence on every platform.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classes::FactorData;
use crate::matrix::{block2x2, hstack, vstack, zeros, ComplexMatrix, ComplexVector, Svd};
use crate::realization::Realization;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn index(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.rng.random_range(lo..=hi_inclusive)
    }

    pub fn complex(&mut self) -> Complex64 {
        Complex64::new(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0))
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.complex())
    }

    pub fn real_matrix(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| Complex64::new(self.uniform(-1.0, 1.0), 0.0))
    }

    /// Product of the singular-vector factors of a random matrix.
    pub fn unitary(&mut self, n: usize) -> ComplexMatrix {
        let m = self.matrix(n, n);
        let s = Svd::new(&m).expect("finite random matrix");
        s.u * s.w
    }

    pub fn hermitian(&mut self, n: usize) -> ComplexMatrix {
        let m = self.matrix(n, n);
        (&m + m.adjoint()).scale(0.5)
    }

    pub fn skew_hermitian(&mut self, n: usize) -> ComplexMatrix {
        let m = self.matrix(n, n);
        (&m - m.adjoint()).scale(0.5)
    }

    /// `X X*` with `X` n×rank.
    pub fn psd(&mut self, n: usize, rank: usize) -> ComplexMatrix {
        let x = self.matrix(n, rank);
        &x * x.adjoint()
    }

    /// Random square factor `(Â, B̂, Ĉ, D̂)`.
    pub fn factor(&mut self, n: usize, p: usize) -> FactorData {
        FactorData::new(
            self.matrix(n, n),
            self.matrix(n, p),
            self.matrix(p, n),
            self.matrix(p, p),
        )
        .expect("consistent shapes")
    }

    /// Random factor with `D̂ = 0`.
    pub fn strictly_proper_factor(&mut self, n: usize, p: usize) -> FactorData {
        let mut f = self.factor(n, p);
        f.dhat = zeros(p, p);
        f
    }

    /// Random `n`-state system with `m` inputs and `p` outputs. Generic, so
    /// minimal with probability one.
    pub fn system(&mut self, n: usize, m: usize, p: usize) -> Realization {
        Realization::new(
            self.matrix(n, n),
            self.matrix(n, m),
            self.matrix(p, n),
            self.matrix(p, m),
        )
        .expect("consistent shapes")
    }

    /// Random system whose `B` and `C` both have rank `k`.
    pub fn system_with_ranks(&mut self, n: usize, m: usize, p: usize, k: usize) -> Realization {
        let b = self.matrix(n, k) * self.matrix(k, m);
        let c = self.matrix(p, k) * self.matrix(k, n);
        Realization::new(self.matrix(n, n), b, c, zeros(p, m)).expect("consistent shapes")
    }

    /// A generic `n`-state system padded with `extra` modes that are
    /// uncontrollable (or unobservable when `unobservable` is set), then
    /// hidden by a random unitary change of state coordinates. Returns the
    /// realization and the eigenvalues of the hidden modes.
    pub fn nonminimal(
        &mut self,
        n: usize,
        m: usize,
        p: usize,
        extra: usize,
        unobservable: bool,
    ) -> (Realization, Vec<Complex64>) {
        let core = self.system(n, m, p);
        let hidden: Vec<Complex64> = (0..extra).map(|_| self.complex()).collect();
        let a_hidden = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(hidden.clone()));
        let coupling = self.matrix(n, extra);
        let (a, b, c) = if unobservable {
            // hidden states are driven by the input but never reach the output
            (
                block2x2(core.a(), &zeros(n, extra), &coupling.adjoint(), &a_hidden),
                vstack(core.b(), &self.matrix(extra, m)),
                hstack(core.c(), &zeros(p, extra)),
            )
        } else {
            // hidden states feed the output but cannot be reached
            (
                block2x2(core.a(), &coupling, &zeros(extra, n), &a_hidden),
                vstack(core.b(), &zeros(extra, m)),
                hstack(core.c(), &self.matrix(p, extra)),
            )
        };
        let q = self.unitary(n + extra);
        let r = Realization::new(
            &q * a * q.adjoint(),
            &q * b,
            c * q.adjoint(),
            core.d().clone(),
        )
        .expect("consistent shapes");
        (r, hidden)
    }
}
