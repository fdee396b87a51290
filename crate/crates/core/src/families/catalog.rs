use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{condition_profile, generalized_k2_depth, FamilyError, KCondition};
use crate::chow::{self, FamilyKind, FamilyParams, FiberwiseClass};
use crate::exactmath::Rational;

/// K-condition witnesses. Classes are in the `{L_V, F}` basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "test", rename_all = "kebab-case")]
pub enum KWitness {
    /// An effective divisor `E = l·L + f·F`; certifies when `(−K·E·L^{M−1}) ≤ 0`.
    DivisorTest { l: i64, f: i64 },
    /// A family of horizontal curves `C` sweeping out a divisor, given by
    /// its pairings with `L` and `F`.
    CurveFamilyTest { l_dot_c: i64, f_dot_c: i64 },
    /// Cutting class `G²` with `G = l·L + f·F`; certifies when `(−K·G²·L^{M−2}) = 0`.
    PseudoEffectiveTest { l: i64, f: i64 },
}

fn divisor_text(l: i64, f: i64) -> String {
    let lt = match l {
        0 => String::new(),
        1 => "L".into(),
        -1 => "-L".into(),
        _ => format!("{l}L"),
    };
    let ft = match f {
        0 => String::new(),
        1 => "F".into(),
        -1 => "-F".into(),
        _ => format!("{f}F"),
    };
    match (lt.is_empty(), ft.is_empty()) {
        (true, true) => "0".into(),
        (false, true) => lt,
        (true, false) => ft,
        (false, false) if f < 0 => format!("{lt}{ft}"),
        (false, false) => format!("{lt}+{ft}"),
    }
}

impl KWitness {
    pub fn id(&self) -> String {
        match *self {
            KWitness::DivisorTest { l, f } => format!("divisor:{}", divisor_text(l, f)),
            KWitness::CurveFamilyTest { l_dot_c, f_dot_c } => format!("curves:L.C={l_dot_c},F.C={f_dot_c}"),
            KWitness::PseudoEffectiveTest { l, f } => format!("cut:({})^2", divisor_text(l, f)),
        }
    }
}

/// Outcome of a single witness test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KVerdict {
    pub witness: String,
    /// The pairing with `−K_V` that must be `≤ 0` (or `= 0` for the cutting test).
    pub anticanonical_pairing: BigInt,
    /// The fiber pairing that must be positive.
    pub fiber_pairing: BigInt,
    pub certified: bool,
}

fn anticanonical(fp: &FamilyParams) -> FiberwiseClass {
    FiberwiseClass::divisor(1, -fp.canonical_twist())
}

fn l_power(k: u32) -> Vec<FiberwiseClass> {
    vec![FiberwiseClass::L; k as usize]
}

/// Evaluate a witness. Nonpositive fiber pairing is a witness error; a
/// test whose sign condition fails yields `certified = false` (unknown).
pub fn k_condition_certify(fp: &FamilyParams, w: &KWitness) -> Result<KVerdict, FamilyError> {
    let dim = fp.dim_v();
    let minus_k = anticanonical(fp);
    let (anti, fiber, certified) = match *w {
        KWitness::DivisorTest { l, f } => {
            let e = FiberwiseClass::divisor(l, f);
            let mut with_k = vec![minus_k, e];
            with_k.extend(l_power(dim - 2));
            let mut with_f = vec![FiberwiseClass::F, e];
            with_f.extend(l_power(dim - 2));
            let anti = chow::top_intersection_v(&with_k, fp)?;
            let fiber = chow::top_intersection_v(&with_f, fp)?;
            let ok = !anti.is_positive();
            (anti, fiber, ok)
        }
        KWitness::CurveFamilyTest { l_dot_c, f_dot_c } => {
            let anti = BigInt::from(l_dot_c - fp.canonical_twist() * f_dot_c);
            let ok = !anti.is_positive();
            (anti, BigInt::from(f_dot_c), ok)
        }
        KWitness::PseudoEffectiveTest { l, f } => {
            let g = FiberwiseClass::divisor(l, f);
            let mut with_k = vec![minus_k, g, g];
            with_k.extend(l_power(dim - 3));
            let mut with_f = vec![FiberwiseClass::F, g, g];
            with_f.extend(l_power(dim - 3));
            let anti = chow::top_intersection_v(&with_k, fp)?;
            let fiber = chow::top_intersection_v(&with_f, fp)?;
            let ok = anti.is_zero();
            (anti, fiber, ok)
        }
    };
    if !fiber.is_positive() {
        return Err(FamilyError::Witness {
            witness: w.id(),
            reason: format!("fiber pairing {fiber} is not positive"),
        });
    }
    Ok(KVerdict {
        witness: w.id(),
        anticanonical_pairing: anti,
        fiber_pairing: fiber,
        certified,
    })
}

/// One of the thirteen studied families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    /// `"1"`..`"8"` for double hypersurfaces, `"1*"`..`"5*"` for double spaces.
    pub label: &'static str,
    pub signature: &'static str,
    pub kind: FamilyKind,
    pub witnesses: &'static [KWitness],
}

const SWEEPING_LINES: KWitness = KWitness::CurveFamilyTest { l_dot_c: 0, f_dot_c: 1 };
const L_MINUS_2F: KWitness = KWitness::DivisorTest { l: 1, f: -2 };
const CUT_L_MINUS_F: KWitness = KWitness::PseudoEffectiveTest { l: 1, f: -1 };

const CATALOG: [CatalogEntry; 13] = {
    use FamilyKind::{DoubleHypersurface as Dh, DoubleSpace as Ds};
    [
        CatalogEntry { label: "1", signature: "((0),(2,0))", kind: Dh, witnesses: &[] },
        CatalogEntry { label: "2", signature: "((0),(1,1))", kind: Dh, witnesses: &[SWEEPING_LINES] },
        CatalogEntry { label: "3", signature: "((1),(0,1))", kind: Dh, witnesses: &[SWEEPING_LINES] },
        CatalogEntry { label: "4", signature: "((2),(1,0))", kind: Dh, witnesses: &[L_MINUS_2F] },
        CatalogEntry { label: "5", signature: "((2),(0,0))", kind: Dh, witnesses: &[SWEEPING_LINES] },
        CatalogEntry { label: "6", signature: "((3),(0,0))", kind: Dh, witnesses: &[SWEEPING_LINES] },
        CatalogEntry { label: "7", signature: "((1,2),(0,0))", kind: Dh, witnesses: &[L_MINUS_2F] },
        CatalogEntry { label: "8", signature: "((1,1,1),(0,0))", kind: Dh, witnesses: &[CUT_L_MINUS_F] },
        CatalogEntry { label: "1*", signature: "((1),1)", kind: Ds, witnesses: &[SWEEPING_LINES] },
        CatalogEntry { label: "2*", signature: "((2),0)", kind: Ds, witnesses: &[SWEEPING_LINES] },
        CatalogEntry { label: "3*", signature: "((3),0)", kind: Ds, witnesses: &[SWEEPING_LINES] },
        CatalogEntry { label: "4*", signature: "((1,2),0)", kind: Ds, witnesses: &[L_MINUS_2F] },
        CatalogEntry { label: "5*", signature: "((1,1,1),0)", kind: Ds, witnesses: &[CUT_L_MINUS_F] },
    ]
};

pub fn catalog() -> &'static [CatalogEntry] {
    &CATALOG
}

pub fn catalog_entry(fp: &FamilyParams) -> Option<&'static CatalogEntry> {
    let sig = fp.signature();
    CATALOG.iter().find(|e| e.kind == fp.kind && e.signature == sig)
}

fn require_entry(fp: &FamilyParams) -> Result<&'static CatalogEntry, FamilyError> {
    catalog_entry(fp).ok_or_else(|| FamilyError::NotInCatalog(fp.signature()))
}

pub fn builtin_witnesses(fp: &FamilyParams) -> Result<Vec<KWitness>, FamilyError> {
    Ok(require_entry(fp)?.witnesses.to_vec())
}

fn is_involution_type(fp: &FamilyParams) -> bool {
    fp.kind == FamilyKind::DoubleHypersurface && fp.signature() == "((0),(2,0))"
}

pub(super) fn catalog_k_condition(fp: &FamilyParams) -> Result<KCondition, FamilyError> {
    let entry = require_entry(fp)?;
    if is_involution_type(fp) {
        let m = fp.m.unwrap_or(0);
        // τ maps the pencil |mL − F| = |−mK − F| onto |F|
        debug_assert_eq!(tau_system(m, -1, m), (0, 1));
        return Ok(KCondition::CertifiedFails {
            reason: format!("pencils |F| and |{m}L-F| = tau_*|F| are mobile and -K = L = (F + ({m}L-F))/{m}"),
        });
    }
    for w in entry.witnesses {
        let v = k_condition_certify(fp, w)?;
        if v.certified {
            return Ok(KCondition::CertifiedHolds { witness: v.witness });
        }
    }
    Ok(KCondition::Unknown)
}

/// Matrix of `τ_*` on `Pic V = Z·L ⊕ Z·F` (columns are images of `L`, `F`).
pub fn tau_matrix(m: i64) -> [[i64; 2]; 2] {
    [[1, m], [0, -1]]
}

/// `L ↦ L`, `F ↦ m·L − F`.
pub fn tau_pushforward(c: &FiberwiseClass, m: i64) -> Result<FiberwiseClass, FamilyError> {
    match *c {
        FiberwiseClass::Divisor { l, f } => Ok(FiberwiseClass::Divisor { l: l + m * f, f: -f }),
        FiberwiseClass::Codim2 { .. } => Err(FamilyError::Chow(chow::ChowError::Expr(
            "tau acts here on divisor classes only".into(),
        ))),
    }
}

/// Image of the system `|−nK + lF| = |nL + lF|` (on the type with `K = −L`).
pub fn tau_system(n: i64, l: i64, m: i64) -> (i64, i64) {
    (n + l * m, -l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rigidity {
    Superrigid,
    Rigid,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub family: String,
    pub catalog_type: String,
    pub rigidity: Rigidity,
    pub k_condition: KCondition,
    pub birational_group: String,
    pub group_order: u32,
    pub structures: Vec<String>,
    #[serde(with = "crate::exactmath::serde_text::rational")]
    pub depth: Rational,
    pub depth2_ok: bool,
    pub witness_ids: Vec<String>,
}

impl Theorem1Report {
    pub fn class_label(&self) -> &'static str {
        match self.rigidity {
            Rigidity::Superrigid => "superrigid",
            Rigidity::Rigid => "rigid",
        }
    }
}

pub fn theorem1_report(fp: &FamilyParams) -> Result<Theorem1Report, FamilyError> {
    let entry = require_entry(fp)?;
    let profile = condition_profile(fp)?;
    let witness_ids = entry.witnesses.iter().map(KWitness::id).collect();
    let (rigidity, group, order, structures) = if is_involution_type(fp) {
        let m = fp.m.unwrap_or(0);
        let image = tau_pushforward(&FiberwiseClass::F, m)?;
        let FiberwiseClass::Divisor { l, f } = image else {
            unreachable!("divisor in, divisor out")
        };
        (
            Rigidity::Rigid,
            "(Z/2)^2",
            4,
            vec!["|F|".to_string(), format!("|tau_*F| = |{}|", divisor_text(l, f))],
        )
    } else {
        (Rigidity::Superrigid, "Aut = Z/2", 2, vec!["|F|".to_string()])
    };
    Ok(Theorem1Report {
        family: fp.signature(),
        catalog_type: entry.label.to_string(),
        rigidity,
        k_condition: profile.k_condition,
        birational_group: group.to_string(),
        group_order: order,
        structures,
        depth: generalized_k2_depth(fp),
        depth2_ok: profile.depth2_ok,
        witness_ids,
    })
}
