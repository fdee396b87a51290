use serde::{Deserialize, Serialize};

use super::{hypertangent_bound, is_exceptional, lambda_ml, mobile_ratio, refined_target, BoundVariant, LinesError};

pub const LINES_CSV_HEADER: [&str; 10] = [
    "m",
    "l",
    "lambda",
    "bound_variant",
    "refined_bound",
    "target",
    "exceptional",
    "mobile_ratio",
    "ratio_verdict",
    "provenance",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinesRow {
    pub m: u64,
    pub l: u64,
    pub lambda: String,
    pub bound_variant: BoundVariant,
    pub refined_bound: String,
    pub target: String,
    pub exceptional: bool,
    /// Empty when `m < 4`.
    pub mobile_ratio: String,
    pub ratio_verdict: String,
    pub provenance: String,
}

impl LinesRow {
    pub fn fields(&self) -> [String; 10] {
        [
            self.m.to_string(),
            self.l.to_string(),
            self.lambda.clone(),
            match self.bound_variant {
                BoundVariant::C4 => "c4",
                BoundVariant::C5 => "c5",
                BoundVariant::RefinedC4 => "refined_c4",
                BoundVariant::RefinedC5 => "refined_c5",
            }
            .to_string(),
            self.refined_bound.clone(),
            self.target.clone(),
            self.exceptional.to_string(),
            self.mobile_ratio.clone(),
            self.ratio_verdict.clone(),
            self.provenance.clone(),
        ]
    }
}

/// One row per `(m, l)`, `m` outer.
pub fn lines_table(
    m_range: std::ops::RangeInclusive<u64>,
    l_range: std::ops::RangeInclusive<u64>,
) -> Result<Vec<LinesRow>, LinesError> {
    let mut rows = Vec::new();
    for m in m_range {
        for l in l_range.clone() {
            let variant = BoundVariant::for_case(m, l, true);
            let (mobile, verdict) = if m >= 4 && l >= 3 {
                let r = mobile_ratio(m, l)?;
                let v = if r.exceeds_two_thirds { "> 2/3" } else { "<= 2/3" };
                (r.ratio.to_string(), v.to_string())
            } else {
                (String::new(), "n/a".to_string())
            };
            let bound_formula = match variant {
                BoundVariant::RefinedC4 => "8l/(3m(2l-1))",
                _ => "4/(3(m-1))",
            };
            rows.push(LinesRow {
                m,
                l,
                lambda: lambda_ml(m, l)?.to_string(),
                bound_variant: variant,
                refined_bound: hypertangent_bound(m, l, variant)?.to_string(),
                target: refined_target(m).to_string(),
                exceptional: is_exceptional(m, l)?,
                mobile_ratio: mobile,
                ratio_verdict: verdict,
                provenance: format!("lambda=m!/6*(2l-1)!/(l-1)!-1; bound={bound_formula} vs 3/(2m); mobile-curve ratio"),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_shape() {
        let rows = lines_table(3..=12, 3..=8).unwrap();
        assert_eq!(rows.len(), 60);
        assert_eq!(rows.iter().filter(|r| r.exceptional).count(), 12);
        let r = rows.iter().find(|r| (r.m, r.l) == (4, 3)).unwrap();
        assert_eq!(r.lambda, "239");
        assert_eq!(r.mobile_ratio, "481/721");
        assert_eq!(r.fields()[3], "refined_c4");
        let r = rows.iter().find(|r| r.m == 3).unwrap();
        assert_eq!(r.ratio_verdict, "n/a");
        assert!(rows.iter().filter(|r| r.m >= 4).all(|r| r.ratio_verdict == "> 2/3"));
    }

    #[test]
    fn table_rejects_small_m() {
        assert!(lines_table(2..=4, 3..=3).is_err());
    }
}
