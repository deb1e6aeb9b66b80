//! Jacobi theta functions, the elliptic functions `2K cs`, `2K ds`, `2K ns`,
//! their Laurent coefficients, and numerical verification of the elliptic
//! generalizations of the classical cotangent / cosecant reciprocity
//! identities.

pub mod config;
pub mod elliptic;
pub mod error;
pub mod identity;
pub mod lattice;
pub mod laurent;
pub mod suite;
pub mod theta;

pub use config::{parse_complex, OutputFormat, SuiteConfig, Tolerances};
pub use elliptic::{
    context_from_tau, f_ij, f_ij_derivative, jacobi_basic, trig_degeneration, weierstrass_p,
    EllipticContext, EvalMethod, JacobiTriple, ParityIndex, WeierstrassMode,
};
pub use error::{Error, Result};
pub use identity::{CoprimePair, IdentityCase, VerificationReport};
pub use laurent::{f_nth_derivative, laurent_c, CoefficientMode, ContourConfig};
pub use suite::{run_suite, write_report, SuiteResult, SuiteSummary};
pub use theta::{
    exponential_e, theta, theta_product, SeriesTruncation, SeriesValue, TauParameter, ThetaIndex,
};
