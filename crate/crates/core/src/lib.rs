//! weylab: a desk-scale numerical laboratory for eigenvalue asymptotics on
//! weak Lorentz ideals.
//!
//! The library computes and cross-checks:
//!
//! - the calculus of regularly varying weight functions (evaluation,
//!   Karamata primitives, asymptotic inverses) in [`rv`];
//! - singular-value/eigenvalue prefixes, their quasi-norms, and the
//!   two-sided Fan/Weyl inequalities in [`spectra`];
//! - counting functions and the equivalence between counting and eigenvalue
//!   asymptotics in [`counting`];
//! - windowed limit estimation, the partial-sum functional, Weyl-ratio
//!   detection, perturbation bounds, and commutator diagnostics in
//!   [`asymptotics`];
//! - explicit spectra for the worked examples (zero-counting model, quantum
//!   sphere times torus, nonclassical Weyl-law constants) in [`models`];
//! - a dense symmetric-matrix harness with an in-repo Jacobi eigensolver in
//!   [`matrix`].
//!
//! Everything is deterministic given explicit seeds, and every published
//! statistic is a finite-prefix proxy with windowed convergence diagnostics
//! rather than a bare number.

pub mod asymptotics;
pub mod checks;
pub mod counting;
pub mod error;
pub mod gamma;
pub mod lattice;
pub mod matrix;
pub mod models;
pub mod quad;
pub mod rv;
pub mod spectra;

pub use asymptotics::{
    analyze_sequence, estimate_limit, nc_integral_from_weyl_law, DyadicGrid, LimitEstimate,
    MeasurabilityReport, RateHint, Verdict, WindowPlan,
};
pub use counting::{sequence_from_counting, CountingFunction, CountingModel, LambdaGrid};
pub use error::{Error, Result};
pub use matrix::{jacobi_eigen, plant_profile, SymmetricMatrix};
pub use models::{
    cusp_constants, planted_sequence, podles_torus_sequence, simon_constant, zeta_file_sequence,
    zeta_rvm_sequence, ModelSpec, Perturbation, PodlesSpectrum,
};
pub use rv::{karamata_integral, karamata_ratio, KaramataPrimitive, RegVarFunction};
pub use spectra::{SpectralKind, SpectralPart, SpectralSequence};
