use serde::{Deserialize, Serialize};

use super::catalog::{catalog, catalog_entry, catalog_k_condition, theorem1_report};
use super::enumerate::{enumerate_k2_failing, Caps, EnumeratedFamily, Enumeration, Uniformity};
use super::{generalized_k2_depth, FamilyError, KCondition};
use crate::chow::FamilyKind;
use crate::exactmath::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRow {
    pub block: String,
    #[serde(rename = "type")]
    pub catalog_type: String,
    pub family: String,
    pub kind: String,
    pub m_range: String,
    /// K² pairing as a function of `m`.
    pub k2_value: String,
    /// Depth as a function of `m`.
    pub depth: String,
    /// Largest depth over the `m` range.
    pub depth_max: String,
    pub depth2_ok: bool,
    pub k_condition: String,
    pub theorem1_class: String,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationTable {
    pub caps: Caps,
    pub rows: Vec<ClassificationRow>,
    /// Catalog families that the enumeration did not produce under these caps.
    pub missing: Vec<String>,
}

impl ClassificationTable {
    pub fn studied(&self, kind: FamilyKind) -> Vec<&ClassificationRow> {
        self.rows
            .iter()
            .filter(|r| r.block == BLOCK_STUDIED && r.kind == kind.short_name())
            .collect()
    }

    /// Every studied row is certified (type 1 flagged as failing) and the
    /// depth bound holds.
    pub fn studied_certified(&self) -> bool {
        self.rows.iter().filter(|r| r.block == BLOCK_STUDIED).all(|r| {
            let k_ok = if r.catalog_type == "1" {
                r.k_condition == "fails"
            } else {
                r.k_condition.starts_with("holds")
            };
            k_ok && r.depth2_ok
        })
    }
}

pub const BLOCK_STUDIED: &str = "studied";
pub const BLOCK_UNCERTIFIED: &str = "k2-failing-uncertified";
pub const BLOCK_M_DEPENDENT: &str = "m-dependent";

/// `c1·m + c0` in compact text.
fn affine_in_m(c1: i64, c0: i64) -> String {
    match (c1, c0) {
        (0, c) => c.to_string(),
        (a, 0) => format!("{a}m"),
        (a, c) if c < 0 => format!("{a}m-{}", -c),
        (a, c) => format!("{a}m+{c}"),
    }
}

/// `s + a/m` in compact text.
fn depth_in_m(s: i64, a: i64) -> String {
    match (s, a) {
        (s, 0) => s.max(0).to_string(),
        (0, a) => format!("{a}/m"),
        (s, a) => format!("{s}+{a}/m"),
    }
}

fn row_for(fam: &EnumeratedFamily, block: &str) -> Result<ClassificationRow, FamilyError> {
    let first = &fam.instances[0];
    let entry = catalog_entry(first);
    let mut depth_max = Rational::from_integer(0.into());
    let mut k_labels = Vec::new();
    for fp in &fam.instances {
        depth_max = depth_max.max(generalized_k2_depth(fp));
        let k = match entry {
            Some(_) => catalog_k_condition(fp)?,
            None => KCondition::Unknown,
        };
        k_labels.push(k.label());
    }
    k_labels.dedup();
    let k_condition = if k_labels.len() == 1 {
        k_labels.remove(0)
    } else {
        "m-dependent".to_string()
    };
    let a_x = fam.a_x();
    let (m_range, k2_value, depth, provenance_formula) = match fam.kind {
        FamilyKind::DoubleHypersurface => {
            let a_q = fam.a_q.unwrap_or(0);
            let s = 4 - a_x - 2 * a_q - 2 * fam.a_w;
            let ms = &fam.failing_m;
            (
                format!("{}..{}", ms[0], ms[ms.len() - 1]),
                affine_in_m(2 * s, 2 * a_q),
                depth_in_m(s, a_q),
                "K2=2m(4-aX-2aQ-2aW)+2aQ",
            )
        }
        FamilyKind::DoubleSpace => {
            let k2 = 8 - 2 * a_x - 4 * fam.a_w;
            (
                "-".to_string(),
                k2.to_string(),
                Rational::new(k2.into(), 2.into()).to_string(),
                "K2=8-2aX-4aW",
            )
        }
    };
    let (catalog_type, theorem1_class, provenance) = match entry {
        Some(e) => {
            let report = theorem1_report(first)?;
            let list = match e.kind {
                FamilyKind::DoubleHypersurface => "double-hypersurface list",
                FamilyKind::DoubleSpace => "double-space list",
            };
            (
                e.label.to_string(),
                report.class_label().to_string(),
                format!("{provenance_formula}; {list} #{}; witness {}", e.label, witness_anchor(e.witnesses)),
            )
        }
        None => ("-".to_string(), "-".to_string(), provenance_formula.to_string()),
    };
    Ok(ClassificationRow {
        block: block.to_string(),
        catalog_type,
        family: fam.signature.clone(),
        kind: fam.kind.short_name().to_string(),
        m_range,
        k2_value,
        depth,
        depth2_ok: depth_max <= Rational::from_integer(2.into()),
        depth_max: depth_max.to_string(),
        k_condition,
        theorem1_class,
        provenance,
    })
}

fn witness_anchor(ws: &[super::KWitness]) -> String {
    if ws.is_empty() {
        "tau-image".to_string()
    } else {
        ws.iter().map(|w| w.id()).collect::<Vec<_>>().join("+")
    }
}

fn catalog_position(sig: &str, kind: FamilyKind) -> usize {
    catalog()
        .iter()
        .position(|e| e.kind == kind && e.signature == sig)
        .unwrap_or(usize::MAX)
}

/// Classification over both kinds: studied families in catalog order, then
/// the remaining K²-failing families, then any `m`-dependent ones.
pub fn classification_table(caps: &Caps) -> Result<ClassificationTable, FamilyError> {
    let enums: Vec<Enumeration> = [FamilyKind::DoubleHypersurface, FamilyKind::DoubleSpace]
        .iter()
        .map(|&k| enumerate_k2_failing(k, caps))
        .collect();
    let mut studied = Vec::new();
    let mut uncertified = Vec::new();
    let mut m_dependent = Vec::new();
    for e in &enums {
        for f in e.all() {
            let in_catalog = catalog_entry(&f.instances[0]).is_some();
            match (f.uniformity, in_catalog) {
                (Uniformity::MDependent, _) => m_dependent.push(row_for(f, BLOCK_M_DEPENDENT)?),
                (Uniformity::AllM, true) => studied.push((catalog_position(&f.signature, f.kind), row_for(f, BLOCK_STUDIED)?)),
                (Uniformity::AllM, false) => uncertified.push(row_for(f, BLOCK_UNCERTIFIED)?),
            }
        }
    }
    studied.sort_by_key(|(pos, _)| *pos);
    let found: Vec<(String, String)> = studied
        .iter()
        .map(|(_, r)| (r.kind.clone(), r.family.clone()))
        .collect();
    let missing = catalog()
        .iter()
        .filter(|e| !found.contains(&(e.kind.short_name().to_string(), e.signature.to_string())))
        .map(|e| e.signature.to_string())
        .collect();
    let mut rows: Vec<ClassificationRow> = studied.into_iter().map(|(_, r)| r).collect();
    rows.extend(uncertified);
    rows.extend(m_dependent);
    Ok(ClassificationTable {
        caps: *caps,
        rows,
        missing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_table_reproduces_the_studied_lists() {
        let t = classification_table(&Caps::default()).unwrap();
        assert!(t.missing.is_empty());
        let dh: Vec<&str> = t
            .studied(FamilyKind::DoubleHypersurface)
            .iter()
            .map(|r| r.family.as_str())
            .collect();
        assert_eq!(
            dh,
            [
                "((0),(2,0))",
                "((0),(1,1))",
                "((1),(0,1))",
                "((2),(1,0))",
                "((2),(0,0))",
                "((3),(0,0))",
                "((1,2),(0,0))",
                "((1,1,1),(0,0))"
            ]
        );
        let ds: Vec<&str> = t.studied(FamilyKind::DoubleSpace).iter().map(|r| r.family.as_str()).collect();
        assert_eq!(ds, ["((1),1)", "((2),0)", "((3),0)", "((1,2),0)", "((1,1,1),0)"]);
        assert!(t.studied_certified());
        let unc = t.rows.iter().filter(|r| r.block == BLOCK_UNCERTIFIED).count();
        assert_eq!(unc, 7 + 4);
    }

    #[test]
    fn row_formulas() {
        let t = classification_table(&Caps::default()).unwrap();
        let row = |f: &str| t.rows.iter().find(|r| r.family == f).unwrap().clone();
        let r = row("((0),(2,0))");
        assert_eq!((r.k2_value.as_str(), r.depth.as_str(), r.depth_max.as_str()), ("4", "2/m", "1"));
        assert_eq!(r.k_condition, "fails");
        assert_eq!(r.theorem1_class, "rigid");
        let r = row("((2),(0,0))");
        assert_eq!((r.k2_value.as_str(), r.depth.as_str()), ("4m", "2"));
        let r = row("((0),(1,1))");
        assert_eq!((r.k2_value.as_str(), r.depth.as_str()), ("2", "1/m"));
        let r = row("((2),0)");
        assert_eq!((r.k2_value.as_str(), r.depth.as_str(), r.m_range.as_str()), ("4", "2", "-"));
    }

    #[test]
    fn affine_text() {
        assert_eq!(affine_in_m(0, 4), "4");
        assert_eq!(affine_in_m(4, 0), "4m");
        assert_eq!(affine_in_m(2, 2), "2m+2");
        assert_eq!(affine_in_m(-2, 6), "-2m+6");
        assert_eq!(depth_in_m(1, 1), "1+1/m");
    }
}
