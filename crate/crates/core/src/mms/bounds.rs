use serde::{Deserialize, Serialize};

use super::MmsError;
use crate::exactmath::{rat, Rational};

fn zero() -> Rational {
    rat(0)
}

/// `Σ_t max_k e_{t,k} / ν_{t,k}(F) > l`, one inner list per fiber.
pub fn fiber_excess_check(fibers: &[Vec<(Rational, Rational)>], l: &Rational) -> Result<bool, MmsError> {
    let mut total = zero();
    for (t, entries) in fibers.iter().enumerate() {
        let mut best: Option<Rational> = None;
        for (e, nu_f) in entries {
            if nu_f <= &zero() {
                return Err(MmsError::Data(format!("fiber {t}: nu_E(F) = {nu_f} must be positive")));
            }
            let r = e / nu_f;
            best = Some(match best {
                Some(b) if b >= r => b,
                _ => r,
            });
        }
        if let Some(b) = best {
            total += b;
        }
    }
    Ok(&total > l)
}

/// `e > (ν_E(F)/2)·(deg Z_v / (n·deg V) − ε·n)`.
pub fn supermaximal_test(
    e: &Rational,
    nu_f: &Rational,
    deg_zv: &Rational,
    n: &Rational,
    deg_v: &Rational,
    epsilon: &Rational,
) -> Result<bool, MmsError> {
    if n < &rat(1) || deg_v <= &zero() {
        return Err(MmsError::Data("need n >= 1 and deg V > 0".into()));
    }
    let bound = nu_f / rat(2) * (deg_zv / (n * deg_v) - epsilon * n);
    Ok(e > &bound)
}

/// How the `Σ_u` square term of the corollary bound is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cor11Variant {
    /// `Σ_u² n²`, consistent with the expansion of `(nΣ_u + e)²`.
    #[default]
    Homogeneous,
    /// `Σ_u² n`, the typeset form.
    Typeset,
}

/// `(4−k_h)Σ_l(Σ_l+Σ_u)n² + Σ_u²n² + e² + 2(2−k_v)Σ_l n e + 2(1−k_v)Σ_u n e`.
#[allow(clippy::too_many_arguments)]
pub fn corollary11_lhs(
    sigma_l: &Rational,
    sigma_u: &Rational,
    n: &Rational,
    e: &Rational,
    k_h: &Rational,
    k_v: &Rational,
    variant: Cor11Variant,
) -> Rational {
    let n2 = n * n;
    let su_term = match variant {
        Cor11Variant::Homogeneous => sigma_u * sigma_u * &n2,
        Cor11Variant::Typeset => sigma_u * sigma_u * n,
    };
    (rat(4) - k_h) * sigma_l * (sigma_l + sigma_u) * &n2
        + su_term
        + e * e
        + rat(2) * (rat(2) - k_v) * sigma_l * n * e
        + rat(2) * (rat(1) - k_v) * sigma_u * n * e
}

/// `(4−k_h−2ε)Σ_l(Σ_l+Σ_u)n² + (nΣ_u − e)²`.
pub fn a10_lhs(
    sigma_l: &Rational,
    sigma_u: &Rational,
    n: &Rational,
    e: &Rational,
    k_h: &Rational,
    epsilon: &Rational,
) -> Rational {
    let sq = n * sigma_u - e;
    (rat(4) - k_h - rat(2) * epsilon) * sigma_l * (sigma_l + sigma_u) * n * n + &sq * &sq
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "delta")]
pub enum ConditionKind {
    V,
    VsPoint,
    VsInfnear,
    H,
    F,
    FsPoint,
    FsInfnear,
    #[serde(with = "crate::exactmath::serde_text::rational")]
    GenH(Rational),
}

impl ConditionKind {
    pub fn parse(s: &str) -> Result<Self, MmsError> {
        let k = match s {
            "v" => Self::V,
            "vs_point" | "vs-point" => Self::VsPoint,
            "vs_infnear" | "vs-infnear" => Self::VsInfnear,
            "h" => Self::H,
            "f" => Self::F,
            "fs_point" | "fs-point" => Self::FsPoint,
            "fs_infnear" | "fs-infnear" => Self::FsInfnear,
            _ => {
                let inner = s
                    .strip_prefix("gen_h(")
                    .or_else(|| s.strip_prefix("gen-h("))
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| MmsError::Data(format!("unknown condition `{s}`")))?;
                let d: Rational = inner
                    .trim()
                    .parse()
                    .map_err(|_| MmsError::Data(format!("bad depth `{inner}`")))?;
                Self::GenH(d)
            }
        };
        Ok(k)
    }
}

/// Upper bound on `mult/deg` that each condition imposes.
pub fn condition_threshold(kind: &ConditionKind, deg_v: &Rational) -> Result<Rational, MmsError> {
    if deg_v <= &zero() {
        return Err(MmsError::Data("deg V must be positive".into()));
    }
    let num = match kind {
        ConditionKind::V | ConditionKind::VsInfnear => rat(2),
        ConditionKind::VsPoint | ConditionKind::H | ConditionKind::F => rat(4),
        ConditionKind::FsPoint => rat(6),
        ConditionKind::FsInfnear => rat(3),
        ConditionKind::GenH(d) => {
            if d > &rat(4) || d < &zero() {
                return Err(MmsError::Range(format!("depth {d} outside [0, 4]")));
            }
            rat(4) - d
        }
    };
    Ok(num / deg_v)
}
