//! Exhaustive grid evaluation of certified expressions.

use std::cmp::Ordering;
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::certificates::{exclusion_certificate, Certificate, CertificateCase};
use super::MmsError;
use crate::exactmath::{GridEvaluator, Polynomial, Rational};

/// Grid bounds. Integer symbols run over `0..=int_max` (`n` from 1), `e`
/// over `step, 2·step, …, e_max`, and `k_h, k_v, eps, delta` over
/// multiples of `step` in `[0,4]`, `[0,2]`, `[0,2]`, `[0,4]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FalsificationGrid {
    pub int_max: i64,
    #[serde(with = "crate::exactmath::serde_text::rational")]
    pub step: Rational,
    #[serde(with = "crate::exactmath::serde_text::rational")]
    pub e_max: Rational,
}

impl Default for FalsificationGrid {
    fn default() -> Self {
        Self {
            int_max: 6,
            step: Rational::new(1.into(), 4.into()),
            e_max: Rational::from_integer(6.into()),
        }
    }
}

impl FalsificationGrid {
    pub fn validate(&self) -> Result<(), MmsError> {
        if self.int_max < 1 {
            return Err(MmsError::Data("grid int_max must be at least 1".into()));
        }
        if !self.step.is_positive() || self.step > Rational::from_integer(1.into()) {
            return Err(MmsError::Data("grid step must lie in (0, 1]".into()));
        }
        if !self.e_max.is_positive() {
            return Err(MmsError::Data("grid e_max must be positive".into()));
        }
        Ok(())
    }

    /// Parse `int_max=6,step=1/4,e_max=6` (any subset, any order).
    pub fn parse(s: &str) -> Result<Self, MmsError> {
        let mut g = Self::default();
        for kv in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| MmsError::Data(format!("grid entry `{kv}` is not key=value")))?;
            let bad = || MmsError::Data(format!("grid value `{v}` for `{k}` is invalid"));
            match k.trim() {
                "int_max" => g.int_max = v.trim().parse().map_err(|_| bad())?,
                "step" => g.step = Rational::from_str(v.trim()).map_err(|_| bad())?,
                "e_max" => g.e_max = Rational::from_str(v.trim()).map_err(|_| bad())?,
                other => return Err(MmsError::Data(format!("unknown grid key `{other}`"))),
            }
        }
        g.validate()?;
        Ok(g)
    }

    /// Scaled integer values (numerators over `step.denom()`) for a symbol.
    fn axis(&self, name: &str) -> Vec<i64> {
        let d = self.step.denom().to_i64().expect("small denominator");
        let s = self.step.numer().to_i64().expect("small numerator");
        let multiples = |hi: &Rational, from: i64| -> Vec<i64> {
            let top = (hi / &self.step).floor().to_integer().to_i64().unwrap_or(0);
            (from..=top).map(|k| k * s).collect()
        };
        match name {
            "n" => (1..=self.int_max).map(|k| k * d).collect(),
            "e" => multiples(&self.e_max, 1),
            "k_h" | "delta" => multiples(&Rational::from_integer(4.into()), 0),
            "k_v" | "eps" => multiples(&Rational::from_integer(2.into()), 0),
            _ => (0..=self.int_max).map(|k| k * d).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub assignment: Vec<(String, String)>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FalsificationReport {
    pub case: Option<CertificateCase>,
    pub grid_points: u64,
    pub counterexample: Option<Counterexample>,
}

/// First grid point (lexicographic in variable order, last symbol fastest)
/// where every `domain` polynomial is `≥ 0` and `target < 0`.
pub fn falsification_search(
    target: &Polynomial,
    domain: &[Polynomial],
    grid: &FalsificationGrid,
) -> Result<FalsificationReport, MmsError> {
    grid.validate()?;
    let ctx = target.context();
    let vars: Vec<usize> = target.variables().into_iter().collect();
    let denom = grid.step.denom().to_i64().expect("small denominator");
    let map_err = |e| MmsError::Data(format!("grid evaluation: {e}"));
    let eval = GridEvaluator::new(target, &vars, denom).map_err(map_err)?;
    let domain_evals = domain
        .iter()
        .map(|d| GridEvaluator::new(d, &vars, denom).map_err(map_err))
        .collect::<Result<Vec<_>, _>>()?;
    let axes: Vec<Vec<i64>> = vars.iter().map(|&v| grid.axis(ctx.name(v))).collect();
    let total: u64 = axes.iter().map(|a| a.len() as u64).product();
    let decode = |mut idx: u64, buf: &mut Vec<i64>| {
        buf.clear();
        buf.resize(axes.len(), 0);
        for k in (0..axes.len()).rev() {
            let len = axes[k].len() as u64;
            buf[k] = axes[k][(idx % len) as usize];
            idx /= len;
        }
    };
    let hit = (0..total).into_par_iter().find_first(|&idx| {
        let mut pt = Vec::with_capacity(axes.len());
        decode(idx, &mut pt);
        domain_evals.iter().all(|d| d.sign(&pt) != Ordering::Less) && eval.sign(&pt) == Ordering::Less
    });
    let counterexample = hit.map(|idx| {
        let mut pt = Vec::new();
        decode(idx, &mut pt);
        let assignment = vars
            .iter()
            .zip(&pt)
            .map(|(&v, &x)| {
                (
                    ctx.name(v).to_string(),
                    Rational::new(x.into(), denom.into()).to_string(),
                )
            })
            .collect();
        Counterexample {
            assignment,
            value: eval.value(&pt).to_string(),
        }
    });
    Ok(FalsificationReport {
        case: None,
        grid_points: total,
        counterexample,
    })
}

pub fn falsify_certificate(cert: &Certificate, grid: &FalsificationGrid) -> Result<FalsificationReport, MmsError> {
    let mut r = falsification_search(cert.target(), &cert.domain, grid)?;
    r.case = Some(cert.case);
    Ok(r)
}

pub fn falsify_case(case: CertificateCase, grid: &FalsificationGrid) -> Result<FalsificationReport, MmsError> {
    falsify_certificate(&exclusion_certificate(case), grid)
}

/// `poly − 1`, a target that must fail somewhere on any grid touching the origin.
pub fn perturbed(poly: &Polynomial) -> Polynomial {
    poly - 1
}
