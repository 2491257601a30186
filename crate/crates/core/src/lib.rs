//! Certification of Ramanujan primes (tempered local components) for
//! unramified GL(3) data.
//!
//! - [`satake`]: Satake classes, Hecke data, Newton power traces, the cubic
//!   root oracle and the tempered/non-tempered classification.
//! - [`adjoint`]: adjoint classes and coefficients, local Euler factors and
//!   per-prime certificates.
//! - [`series`]: truncated log-Dirichlet series of incomplete adjoint
//!   products, positivity scans, evaluation with tail bounds.
//! - [`archimedean`]: `Γ_R`, adjoint gamma factors and pole orders at 0.
//! - [`ingest`]: corpus files, the Δ q-expansion and the symmetric-square
//!   lift used to manufacture GL(3) data.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adjoint;
pub mod archimedean;
pub mod error;
pub mod gaussian;
pub mod ingest;
pub mod multiset;
pub mod primes;
pub mod sample;
pub mod satake;
pub mod series;

pub use adjoint::{
    adjoint_class, adjoint_coefficient, certify_prime, local_factor_adjoint, local_factor_rankin,
    local_zeta, AdjointClass8, CertifyParams, RamanujanCertificate, Reason, Verdict, Witness,
};
pub use archimedean::{adjoint_gamma_factor, arch_adjoint_set, gamma_r, pole_order_at_zero, ArchAdjointSet, ArchParams};
pub use error::{Error, Result};
pub use gaussian::GaussianRational;
pub use ingest::{parse_corpus, read_corpus, GL3Corpus, NewformRecord, Provenance, RejectedRow};
pub use satake::{
    classify, elementary_symmetrics, power_traces, roots_oracle, trace_bound_certificate,
    trace_squared_formula, Classification, ElementarySymmetrics, HeckeLocalDatum, NonTemperedShape,
    PowerTraceSeq, UnitaryClass3, DEFAULT_TOL,
};
pub use series::{
    build_adjoint_log_series, evaluate_incomplete, positive_type_scan, witness_report, EvalResult,
    LogDirichletSeries, PositivityReport, Window, WitnessSummary,
};
