//! Rational matrix functions in state-space form: realizations, minimality,
//! positivity and parity classes with their Lyapunov certificates, static
//! output feedback and spectral factorization.
//!
//! All matrices are complex (`Complex64`) and dynamically sized. Numerical
//! decisions (ranks, definiteness, symmetry) go through a [`Tolerance`].

pub mod classes;
pub mod error;
pub mod factorization;
pub mod feedback;
pub mod matrix;
pub mod minimality;
pub mod random;
pub mod realization;

pub use classes::{
    build_gpe_canonical, build_odd_canonical, build_po, canonical_gpe_certificate,
    certificate_perturbation, classify_axis, gpe_symmetry_check, odd_canonicalize,
    verify_gp_certificate, verify_gpe_certificates, verify_hermitian_axis_certificate,
    verify_odd_certificate, verify_po, Certificate, CertificateKind, ChainLevel, ClassReport,
    FactorData, FunctionClass, GpeCertificates, GridConfig, GridPoint, OddCanonical,
};
pub use error::{Error, Result};
pub use factorization::{
    extract_factor, nonminimal_dhat, scalar_spectral_factorize, verify_product,
    verify_scalar_product, ProductCheck, ProductOutcome, ScalarRational,
};
pub use feedback::{
    class_preserving_gain_check, close_loop, design_pole_moving_gain, dissipative_gain_probe,
    find_regularizing_gain, hamiltonian_closed_loop, spectral_factorization_feasible,
    DesignStrategy, DissipativeProbe, FeasibilityReport, FeedbackDesign, GainClass,
    HamiltonianLoop, ProbeVerdict, RankFailure, RankTest, RegularizingGain,
};
pub use matrix::{ComplexMatrix, ComplexVector, Inertia, Tolerance};
pub use minimality::{
    certify_minimal_via_d, common_spectrum, jordan_block_count, mcmillan_degree,
    minimal_reduction, pbh_controllable, pbh_observable, MinimalityReport, PbhOutcome,
    PbhWitness, Region, WitnessKind,
};
pub use realization::{Realization, TransferSample};

pub use num_complex::Complex64;
