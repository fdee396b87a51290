//! Maximal-singularity engine: resolution graphs, Noether–Fano and quadratic
//! bounds, the multiplicity ledger and exact exclusion certificates.

mod bounds;
mod certificates;
mod falsify;
mod fuzz;
mod graph;
mod ledger;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::Rational;
use crate::families::ConditionProfile;

pub use bounds::{
    a10_lhs, condition_threshold, corollary11_lhs, fiber_excess_check, supermaximal_test, ConditionKind,
    Cor11Variant,
};
pub use certificates::{
    a10_polynomial, corollary11_polynomial, exclusion_certificate, shared_context, verified_certificate,
    AuxIdentity, Certificate, CertificateCase, CertificateCheck, Specialization, VARIABLES,
};
pub use falsify::{
    falsification_search, falsify_case, falsify_certificate, perturbed, Counterexample, FalsificationGrid,
    FalsificationReport,
};
pub use fuzz::{ledger_fuzz, path_recurrence_holds, FuzzReport, DEFAULT_SEED};
pub use graph::{IndexClass, NoetherFano, PartitionSums, ResolutionGraph, Vertex};
pub use ledger::{
    is_compatible, ledger_b8_check, ledger_validate, prop21_check, random_graph, random_graph_with_small,
    random_ledger, random_monotone_ledger, B8Check, CrossTerm, LedgerCheck, MultiplicityLedger, Prop21Check,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MmsError {
    #[error("graph error: {0}")]
    Graph(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("certificate {case} does not verify: {}", diagnostics.join("; "))]
    Certificate { case: String, diagnostics: Vec<String> },
}

/// Geometric conditions declared by the caller. They are inputs, not computed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometricFlags {
    /// (v) at every point of the fiber.
    pub v: bool,
    /// (vs) at singular points.
    pub vs: bool,
    /// (f) or (fs), per point class.
    pub f_or_fs: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuperrigidityReport {
    #[serde(with = "crate::exactmath::serde_text::rational")]
    pub depth: Rational,
    pub depth_ok: bool,
    pub flags: GeometricFlags,
    pub certificate_ok: bool,
    pub verified: bool,
    pub verdict: String,
}

/// Numeric layer of the depth-2 superrigidity criterion: depth ≤ 2, the
/// declared flags, and the `Theorem2` certificate.
pub fn superrigidity_pipeline(profile: &ConditionProfile, flags: GeometricFlags) -> SuperrigidityReport {
    let depth_ok = profile.depth <= Rational::from_integer(2.into());
    let certificate_ok = exclusion_certificate(CertificateCase::Theorem2).verify().holds;
    let flags_ok = flags.v && flags.vs && flags.f_or_fs;
    let verified = depth_ok && certificate_ok && flags_ok;
    let verdict = if verified {
        "superrigidity: numeric layer verified".to_string()
    } else {
        let mut missing = Vec::new();
        if !depth_ok {
            missing.push(format!("depth {} > 2", profile.depth));
        }
        if !certificate_ok {
            missing.push("certificate Theorem2 fails".to_string());
        }
        for (on, name) in [(flags.v, "v"), (flags.vs, "vs"), (flags.f_or_fs, "f/fs")] {
            if !on {
                missing.push(format!("flag {name} not declared"));
            }
        }
        format!("superrigidity: not established ({})", missing.join(", "))
    };
    SuperrigidityReport {
        depth: profile.depth.clone(),
        depth_ok,
        flags,
        certificate_ok,
        verified,
        verdict,
    }
}
