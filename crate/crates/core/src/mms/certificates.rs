//! Exclusion inequalities as exact certificates: each target polynomial is
//! written as a nonnegative combination, with optional specializations and
//! auxiliary identities checked alongside.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::MmsError;
use crate::exactmath::{
    check_nonneg_combination, CombinationCheck, Generator, NonnegCombination, Part, Polynomial, Rational, VarContext,
};

/// Names in the shared context. `S_m+`/`S_m-` split `Σ_m`; `S_l = Σ_s + Σ_m`
/// is kept as its own symbol for the corollary-type bounds.
pub const VARIABLES: [&str; 12] = [
    "n", "e", "S_s", "S_m+", "S_m-", "S_u", "S_l", "p_1", "k_h", "k_v", "eps", "delta",
];

/// The one variable context every certificate lives in.
pub fn shared_context() -> &'static Arc<VarContext> {
    static CTX: OnceLock<Arc<VarContext>> = OnceLock::new();
    CTX.get_or_init(|| VarContext::new(VARIABLES).expect("names are distinct"))
}

fn var(name: &str) -> Polynomial {
    shared_context().var(name).expect("declared variable")
}

fn index(name: &str) -> usize {
    shared_context().index(name).expect("declared variable")
}

fn constant(c: i64) -> Polynomial {
    Polynomial::constant(shared_context(), Rational::from_integer(c.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CertificateCase {
    Cor11,
    A10,
    SmoothB1,
    SingularB,
    Theorem2,
}

impl CertificateCase {
    pub const ALL: [CertificateCase; 5] = [
        CertificateCase::Cor11,
        CertificateCase::A10,
        CertificateCase::SmoothB1,
        CertificateCase::SingularB,
        CertificateCase::Theorem2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CertificateCase::Cor11 => "Cor11",
            CertificateCase::A10 => "A10",
            CertificateCase::SmoothB1 => "SmoothB1",
            CertificateCase::SingularB => "SingularB",
            CertificateCase::Theorem2 => "Theorem2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for CertificateCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Substitute in order, then compare with `expected`.
#[derive(Debug, Clone)]
pub struct Specialization {
    pub description: String,
    pub substitutions: Vec<(String, Polynomial)>,
    pub expected: Polynomial,
}

#[derive(Debug, Clone)]
pub struct AuxIdentity {
    pub description: String,
    pub lhs: Polynomial,
    pub rhs: Polynomial,
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub case: CertificateCase,
    /// Sign constraints and standing hypotheses, as text.
    pub assumptions: Vec<String>,
    pub identity: NonnegCombination,
    pub nonneg_vars: BTreeSet<usize>,
    pub specializations: Vec<Specialization>,
    pub auxiliary: Vec<AuxIdentity>,
    /// Extra constraints `g ≥ 0` restricting where the target is claimed nonnegative.
    pub domain: Vec<Polynomial>,
    pub conclusion: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub case: CertificateCase,
    pub holds: bool,
    pub diagnostics: Vec<String>,
}

impl Certificate {
    pub fn target(&self) -> &Polynomial {
        &self.identity.target
    }

    pub fn verify(&self) -> CertificateCheck {
        let CombinationCheck { holds, mut diagnostics } = check_nonneg_combination(&self.identity, &self.nonneg_vars);
        let mut ok = holds;
        for s in &self.specializations {
            let mut p = self.identity.target.clone();
            for (name, value) in &s.substitutions {
                p = p.substitute(index(name), value);
            }
            if p != s.expected {
                ok = false;
                diagnostics.push(format!("specialization `{}` gives {p}", s.description));
            }
        }
        for a in &self.auxiliary {
            if a.lhs != a.rhs {
                ok = false;
                diagnostics.push(format!("auxiliary identity `{}` fails by {}", a.description, &a.lhs - &a.rhs));
            }
        }
        CertificateCheck {
            case: self.case,
            holds: ok,
            diagnostics,
        }
    }

    /// Human-readable dump using the canonical polynomial text.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("certificate {}\n", self.case));
        for a in &self.assumptions {
            out.push_str(&format!("  assume {a}\n"));
        }
        out.push_str(&format!("  target {}\n", self.identity.target));
        for (k, part) in self.identity.parts.iter().enumerate() {
            let gens: Vec<String> = part
                .generators
                .iter()
                .map(|g| match g {
                    Generator::Square(q) => format!("({q})^2"),
                    Generator::Var(i) => shared_context().name(*i).to_string(),
                    Generator::Assumed { label, .. } => format!("[{label}]"),
                })
                .collect();
            let gens = if gens.is_empty() { "1".to_string() } else { gens.join(" * ") };
            out.push_str(&format!("  part {k}: {gens} * ({})\n", part.multiplier));
        }
        for s in &self.specializations {
            out.push_str(&format!("  specialize {} -> {}\n", s.description, s.expected));
        }
        for a in &self.auxiliary {
            out.push_str(&format!("  auxiliary {}\n", a.description));
        }
        for d in &self.domain {
            out.push_str(&format!("  domain {d} >= 0\n"));
        }
        out.push_str(&format!("  conclusion {}\n", self.conclusion));
        out
    }
}

fn nonneg(names: &[&str]) -> BTreeSet<usize> {
    names.iter().map(|n| index(n)).collect()
}

/// The corrected corollary expression as a polynomial.
pub fn corollary11_polynomial() -> Polynomial {
    let [sl, su, n, e, kh, kv] = ["S_l", "S_u", "n", "e", "k_h", "k_v"].map(var);
    let n2 = &n * &n;
    &(&(&(&(&(&constant(4) - &kh) * &sl) * &(&sl + &su)) * &n2) + &(&(&su * &su) * &n2))
        + &(&(&e * &e)
            + &(&(&(&(&(&constant(2) - &kv) * 2) * &sl) * &n) * &e
                + &(&(&(&(&(&constant(1) - &kv) * 2) * &su) * &n) * &e)))
}

/// `(4 − k_h − 2ε)Σ_l(Σ_l+Σ_u)n² + (nΣ_u − e)²`.
pub fn a10_polynomial() -> Polynomial {
    let [sl, su, n, e, kh, eps] = ["S_l", "S_u", "n", "e", "k_h", "eps"].map(var);
    let coef = &(&constant(4) - &kh) - &(&eps * 2);
    &(&(&(&coef * &sl) * &(&sl + &su)) * &(&n * &n)) + &(&(&n * &su) - &e).pow(2)
}

fn sigma_m() -> Polynomial {
    &var("S_m+") + &var("S_m-")
}

fn total_t() -> Polynomial {
    &(&var("S_s") + &sigma_m()) + &var("S_u")
}

/// `(n(Σ_s − Σ_u) + e)`
fn smooth_square_root() -> Polynomial {
    &(&var("n") * &(&var("S_s") - &var("S_u"))) + &var("e")
}

/// `((3Σ_s + 2Σ_m + Σ_u)n + e)² − (4n²(Σ_s+Σ_m⁻) + 4ne + 2εn²(Σ_s+Σ_m⁺))·(Σ_s+Σ_m+Σ_u)`.
fn theorem2_polynomial(eps: &Polynomial) -> Polynomial {
    let [n, e, s, mp, mm, u] = ["n", "e", "S_s", "S_m+", "S_m-", "S_u"].map(var);
    let n2 = &n * &n;
    let lead = &(&(&(&(&s * 3) + &(&sigma_m() * 2)) + &u) * &n) + &e;
    let h = &(&(&(&n2 * 4) * &(&s + &mm)) + &(&(&n * &e) * 4)) + &(&(&(&n2 * eps) * 2) * &(&s + &mp));
    &lead.pow(2) - &(&h * &total_t())
}

fn cor11() -> Certificate {
    let [sl, su, n, e, kh, kv] = ["S_l", "S_u", "n", "e", "k_h", "k_v"].map(var);
    let target = corollary11_polynomial();
    let parts = vec![
        Part::new(
            vec![Generator::assumed("4 - k_h", &constant(4) - &kh)],
            &(&(&sl * &(&sl + &su)) * &n) * &n,
        ),
        Part::new(
            vec![Generator::assumed("2 - k_v", &constant(2) - &kv)],
            &(&(&(&sl + &su) * &n) * &e) * 2,
        ),
        Part::square(&(&su * &n) - &e),
    ];
    Certificate {
        case: CertificateCase::Cor11,
        assumptions: vec![
            "S_l, S_u, n, e >= 0".into(),
            "k_h <= 4".into(),
            "k_v <= 2".into(),
        ],
        identity: NonnegCombination::new(target, parts),
        nonneg_vars: nonneg(&["S_l", "S_u", "n", "e"]),
        specializations: vec![Specialization {
            description: "k_h = 4, k_v = 2".into(),
            substitutions: vec![("k_h".into(), constant(4)), ("k_v".into(), constant(2))],
            expected: (&(&su * &n) - &e).pow(2),
        }],
        auxiliary: Vec::new(),
        domain: Vec::new(),
        conclusion: "the corollary expression is >= 0, so it cannot be < 0 under a supermaximal singularity".into(),
    }
}

fn a10() -> Certificate {
    let [sl, su, n, e, kh, eps, delta] = ["S_l", "S_u", "n", "e", "k_h", "eps", "delta"].map(var);
    let target = a10_polynomial();
    let mult = &(&(&sl * &(&sl + &su)) * &n) * &n;
    let parts = vec![
        Part::new(
            vec![Generator::assumed("4 - delta - k_h", &(&constant(4) - &delta) - &kh)],
            mult.clone(),
        ),
        Part::new(
            vec![Generator::assumed("delta - 2 eps", &delta - &(&eps * 2))],
            mult,
        ),
        Part::square(&(&n * &su) - &e),
    ];
    Certificate {
        case: CertificateCase::A10,
        assumptions: vec![
            "S_l, S_u, n, e >= 0".into(),
            "k_h <= 4 - delta (generalized condition (h) of depth delta)".into(),
            "delta >= 2 eps".into(),
        ],
        identity: NonnegCombination::new(target, parts),
        nonneg_vars: nonneg(&["S_l", "S_u", "n", "e"]),
        specializations: vec![Specialization {
            description: "k_h = 4 - delta, then delta = 2 eps".into(),
            substitutions: vec![
                ("k_h".into(), &constant(4) - &delta),
                ("delta".into(), &eps * 2),
            ],
            expected: (&(&n * &su) - &e).pow(2),
        }],
        auxiliary: Vec::new(),
        domain: vec![&(&constant(4) - &kh) - &(&eps * 2)],
        conclusion: "the depth-eps bound is >= 0 whenever delta >= 2 eps".into(),
    }
}

fn smooth_b1() -> Certificate {
    let target = theorem2_polynomial(&constant(2));
    Certificate {
        case: CertificateCase::SmoothB1,
        assumptions: vec!["n, e, S_s, S_m+, S_m-, S_u >= 0".into(), "eps = 2".into()],
        identity: NonnegCombination::new(target, vec![Part::square(smooth_square_root())]),
        nonneg_vars: nonneg(&["n", "e", "S_s", "S_m+", "S_m-", "S_u"]),
        specializations: Vec::new(),
        auxiliary: Vec::new(),
        domain: Vec::new(),
        conclusion: "(n(S_s - S_u) + e)^2 < 0 is impossible".into(),
    }
}

fn singular_b() -> Certificate {
    let [n, e, s, mp, mm, u, p] = ["n", "e", "S_s", "S_m+", "S_m-", "S_u", "p_1"].map(var);
    let m = sigma_m();
    let t = total_t();
    let n2 = &n * &n;
    let sq = smooth_square_root().pow(2);
    // square + (S_s − 3p_1)·T·n² + n·p_1·(n·p_1 + 2(3S_s + 2S_m + S_u)n + 2e)
    let inner = &(&(&n * &p) + &(&(&(&(&(&s * 3) + &(&m * 2)) + &u) * &n) * 2)) + &(&e * 2);
    let target = &(&sq + &(&(&(&s - &(&p * 3)) * &t) * &n2)) + &(&(&n * &p) * &inner);
    let parts = vec![
        Part::square(smooth_square_root()),
        Part::new(vec![Generator::assumed("S_s - p_1", &s - &p)], &t * &n2),
        Part::new(
            vec![],
            &(&p * &n) * &(&(&n * &(&(&p + &(&s * 4)) + &(&m * 2))) + &(&e * 2)),
        ),
    ];
    // numerator with the adjusted first discrepancy, and the actual H-term
    let numerator = &(&(&(&(&p + &(&s * 3)) + &(&m * 2)) + &u) * &n) + &e;
    let h_actual = &(&n2 * &(&(&(&(&p + &s) + &mm) * 3) + &(&(&s + &mp) * 4))) + &(&(&n * &e) * 4);
    let aux = AuxIdentity {
        description: "numerator^2 - H*T = target + S_m- n^2 T".into(),
        lhs: &numerator.pow(2) - &(&h_actual * &t),
        rhs: &target + &(&(&mm * &n2) * &t),
    };
    Certificate {
        case: CertificateCase::SingularB,
        assumptions: vec![
            "n, e, S_s, S_m+, S_m-, S_u, p_1 >= 0".into(),
            "S_s >= p_1".into(),
        ],
        identity: NonnegCombination::new(target, parts),
        nonneg_vars: nonneg(&["n", "e", "S_s", "S_m+", "S_m-", "S_u", "p_1"]),
        specializations: Vec::new(),
        auxiliary: vec![aux],
        domain: vec![&s - &p],
        conclusion: "the singular-point quadratic form is >= 0, contradicting the strict < 0".into(),
    }
}

fn theorem2() -> Certificate {
    let [n, s, mp, eps] = ["n", "S_s", "S_m+", "eps"].map(var);
    let target = theorem2_polynomial(&eps);
    let parts = vec![
        Part::square(smooth_square_root()),
        Part::new(
            vec![Generator::assumed("2 - eps", &constant(2) - &eps)],
            &(&(&(&n * &n) * 2) * &(&s + &mp)) * &total_t(),
        ),
    ];
    Certificate {
        case: CertificateCase::Theorem2,
        assumptions: vec![
            "n, e, S_s, S_m+, S_m-, S_u >= 0".into(),
            "eps <= 2 (generalized K2-condition of depth eps)".into(),
        ],
        identity: NonnegCombination::new(target, parts),
        nonneg_vars: nonneg(&["n", "e", "S_s", "S_m+", "S_m-", "S_u"]),
        specializations: vec![Specialization {
            description: "eps = 2".into(),
            substitutions: vec![("eps".into(), constant(2))],
            expected: smooth_square_root().pow(2),
        }],
        auxiliary: Vec::new(),
        domain: vec![&constant(2) - &eps],
        conclusion: "no supermaximal singularity for depth eps <= 2".into(),
    }
}

pub fn exclusion_certificate(case: CertificateCase) -> Certificate {
    match case {
        CertificateCase::Cor11 => cor11(),
        CertificateCase::A10 => a10(),
        CertificateCase::SmoothB1 => smooth_b1(),
        CertificateCase::SingularB => singular_b(),
        CertificateCase::Theorem2 => theorem2(),
    }
}

/// Build and verify; an identity that fails to check is an error.
pub fn verified_certificate(case: CertificateCase) -> Result<Certificate, MmsError> {
    let c = exclusion_certificate(case);
    let check = c.verify();
    if check.holds {
        Ok(c)
    } else {
        Err(MmsError::Certificate {
            case: case.name().into(),
            diagnostics: check.diagnostics,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;
    use crate::mms::bounds::{a10_lhs, corollary11_lhs, Cor11Variant};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn all_certificates_verify() {
        for case in CertificateCase::ALL {
            let c = exclusion_certificate(case);
            let r = c.verify();
            assert!(r.holds, "{case}: {:?}", r.diagnostics);
        }
    }

    #[test]
    fn broken_certificate_is_rejected() {
        let mut c = exclusion_certificate(CertificateCase::SmoothB1);
        c.identity.target = &c.identity.target - 1;
        assert!(!c.verify().holds);
        assert!(verified_certificate(CertificateCase::SmoothB1).is_ok());
        let mut c = exclusion_certificate(CertificateCase::SingularB);
        c.auxiliary[0].rhs = &c.auxiliary[0].rhs + 1;
        assert!(!c.verify().holds);
    }

    #[test]
    fn corollary_polynomial_collapses_symbolically() {
        let c = exclusion_certificate(CertificateCase::Cor11);
        let p = c
            .target()
            .substitute(index("k_h"), &constant(4))
            .substitute(index("k_v"), &constant(2));
        let [su, n, e] = ["S_u", "n", "e"].map(var);
        assert_eq!(p, (&(&su * &n) - &e).pow(2));
    }

    fn point(rng: &mut ChaCha8Rng) -> Vec<Rational> {
        (0..VARIABLES.len())
            .map(|_| Rational::new(rng.gen_range(-20..=20).into(), rng.gen_range(1..=6).into()))
            .collect()
    }

    #[test]
    fn polynomials_agree_with_direct_formulas() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cor = corollary11_polynomial();
        let a10p = a10_polynomial();
        for _ in 0..500 {
            let x = point(&mut rng);
            let g = |name: &str| x[index(name)].clone();
            let direct = corollary11_lhs(&g("S_l"), &g("S_u"), &g("n"), &g("e"), &g("k_h"), &g("k_v"), Cor11Variant::Homogeneous);
            assert_eq!(cor.eval(&x).unwrap(), direct);
            let direct = a10_lhs(&g("S_l"), &g("S_u"), &g("n"), &g("e"), &g("k_h"), &g("eps"));
            assert_eq!(a10p.eval(&x).unwrap(), direct);
        }
    }

    #[test]
    fn singular_target_matches_pointwise_oracle() {
        // independent evaluation of the displayed form with plain integers
        let c = exclusion_certificate(CertificateCase::SingularB);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let [n, e, s, mp, mm, u, p]: [i64; 7] = std::array::from_fn(|_| rng.gen_range(0..9));
            let m = mp + mm;
            let t = s + m + u;
            let sq = n * (s - u) + e;
            let want = sq * sq + (s - 3 * p) * t * n * n + n * p * (n * p + 2 * (3 * s + 2 * m + u) * n + 2 * e);
            let mut x = vec![rat(0); VARIABLES.len()];
            for (name, v) in [("n", n), ("e", e), ("S_s", s), ("S_m+", mp), ("S_m-", mm), ("S_u", u), ("p_1", p)] {
                x[index(name)] = rat(v);
            }
            assert_eq!(c.target().eval(&x).unwrap(), rat(want));
        }
    }

    #[test]
    fn dump_is_canonical() {
        let a = exclusion_certificate(CertificateCase::Theorem2).dump();
        let b = exclusion_certificate(CertificateCase::Theorem2).dump();
        assert_eq!(a, b);
        assert!(a.contains("[2 - eps]"));
    }
}
