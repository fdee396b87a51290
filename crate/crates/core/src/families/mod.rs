//! Classification of fibration families: the K²-condition and its depth,
//! enumeration under caps, the K-condition witness catalog and the
//! classification report.

mod catalog;
mod enumerate;
mod table;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chow::{self, ChowError, FamilyParams};
use crate::exactmath::Rational;

pub use catalog::{
    builtin_witnesses, catalog, catalog_entry, k_condition_certify, tau_matrix, tau_pushforward, tau_system,
    theorem1_report, CatalogEntry, KVerdict, KWitness, Rigidity, Theorem1Report,
};
pub use enumerate::{enumerate_k2_failing, Caps, EnumeratedFamily, Enumeration, Uniformity};
pub use table::{classification_table, ClassificationRow, ClassificationTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("family {0} is not in the witness catalog")]
    NotInCatalog(String),
    #[error("witness {witness} is not admissible: {reason}")]
    Witness { witness: String, reason: String },
    #[error(transparent)]
    Chow(#[from] ChowError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum KCondition {
    CertifiedHolds { witness: String },
    CertifiedFails { reason: String },
    Unknown,
}

impl KCondition {
    pub fn label(&self) -> String {
        match self {
            KCondition::CertifiedHolds { witness } => format!("holds [{witness}]"),
            KCondition::CertifiedFails { .. } => "fails".to_string(),
            KCondition::Unknown => "unknown".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionProfile {
    pub k2_value: i64,
    pub k2_holds: bool,
    #[serde(with = "crate::exactmath::serde_text::rational")]
    pub depth: Rational,
    pub k_condition: KCondition,
    pub depth2_ok: bool,
}

/// `max(0, k2 / deg V)`: the least `ε ≥ 0` with `((K² − ε·H_F)·L^{M−1}) ≤ 0`.
pub fn generalized_k2_depth(fp: &FamilyParams) -> Rational {
    let d = chow::k2_over_degree(fp);
    if d.is_negative() {
        Rational::zero()
    } else {
        d
    }
}

/// Full profile at fixed `m`. The K-condition comes from the catalog; families
/// outside it are reported as unknown.
pub fn condition_profile(fp: &FamilyParams) -> Result<ConditionProfile, FamilyError> {
    let k2_value = chow::k2_number(fp)
        .to_i64()
        .ok_or_else(|| ChowError::Family(format!("K² pairing of {fp} overflows i64")))?;
    let depth = generalized_k2_depth(fp);
    let k_condition = match catalog_entry(fp) {
        Some(_) => catalog::catalog_k_condition(fp)?,
        None => KCondition::Unknown,
    };
    Ok(ConditionProfile {
        k2_holds: k2_value <= 0,
        depth2_ok: depth <= Rational::from_integer(2.into()),
        k2_value,
        depth,
        k_condition,
    })
}
