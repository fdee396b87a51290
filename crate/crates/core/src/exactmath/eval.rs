use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ExactError, Polynomial, Rational};

/// Fast exact sign evaluation on a grid with a common denominator.
///
/// Points are passed as integers `X_v` meaning `x_v = X_v / denom`. The
/// polynomial is cleared of denominators once, so each evaluation is an
/// integer sum in `i128`; on overflow it falls back to exact rationals.
#[derive(Debug, Clone)]
pub struct GridEvaluator {
    poly: Polynomial,
    vars: Vec<usize>,
    denom: i64,
    max_deg: u32,
    scaled_terms: Option<Vec<(Vec<u32>, i128)>>,
    denom_powers: Vec<i128>,
}

impl GridEvaluator {
    pub fn new(poly: &Polynomial, vars: &[usize], denom: i64) -> Result<Self, ExactError> {
        assert!(denom > 0, "grid denominator must be positive");
        for v in poly.variables() {
            if !vars.contains(&v) {
                return Err(ExactError::UnknownVariable(poly.context().name(v).to_string()));
            }
        }
        let max_deg = poly.degree();
        let lcm = poly
            .terms()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let scaled_terms = poly
            .terms()
            .map(|(m, c)| {
                let a = (c.numer() * (&lcm / c.denom())).to_i128()?;
                let exps = vars.iter().map(|&v| m.exponents()[v]).collect();
                Some((exps, a))
            })
            .collect::<Option<Vec<_>>>();
        let denom_powers: Option<Vec<i128>> = (0..=max_deg)
            .map(|k| (denom as i128).checked_pow(k))
            .collect();
        let (scaled_terms, denom_powers) = match denom_powers {
            Some(p) => (scaled_terms, p),
            None => (None, Vec::new()),
        };
        Ok(Self {
            poly: poly.clone(),
            vars: vars.to_vec(),
            denom,
            max_deg,
            scaled_terms,
            denom_powers,
        })
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    fn fast_sum(&self, scaled: &[i64]) -> Option<i128> {
        let terms = self.scaled_terms.as_ref()?;
        let mut total: i128 = 0;
        for (exps, a) in terms {
            let deg: u32 = exps.iter().sum();
            let mut t = a.checked_mul(self.denom_powers[(self.max_deg - deg) as usize])?;
            for (x, &e) in scaled.iter().zip(exps) {
                if e > 0 {
                    t = t.checked_mul((*x as i128).checked_pow(e)?)?;
                }
            }
            total = total.checked_add(t)?;
        }
        Some(total)
    }

    /// Sign of the polynomial at `x_v = scaled[v] / denom`.
    pub fn sign(&self, scaled: &[i64]) -> Ordering {
        debug_assert_eq!(scaled.len(), self.vars.len());
        match self.fast_sum(scaled) {
            Some(s) => s.cmp(&0),
            None => {
                let v = self.value(scaled);
                if v.is_zero() {
                    Ordering::Equal
                } else if v.is_positive() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }

    /// Exact value at `x_v = scaled[v] / denom`; variables outside the
    /// evaluation set are taken as zero (they do not occur by construction).
    pub fn value(&self, scaled: &[i64]) -> Rational {
        let mut full = vec![Rational::zero(); self.poly.context().len()];
        for (slot, &v) in self.vars.iter().enumerate() {
            full[v] = Rational::new(scaled[slot].into(), self.denom.into());
        }
        self.poly.eval(&full).expect("arity matches context")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{ratio, VarContext};

    #[test]
    fn fast_sign_matches_exact_value() {
        let ctx = VarContext::new(["a", "b", "c"]).unwrap();
        let [a, b, c] = ["a", "b", "c"].map(|v| ctx.var(v).unwrap());
        let p = &(&(&a * &b) - &c.pow(2).scale(&ratio(3, 2))) + &(&a - 1).pow(3);
        let ev = GridEvaluator::new(&p, &[0, 1, 2], 4).unwrap();
        for x in -6..=6 {
            for y in -3..=3 {
                for z in 0..=5 {
                    let pt = [x, y, z];
                    let exact = ev.value(&pt);
                    let expected = if exact.is_zero() {
                        Ordering::Equal
                    } else if exact.is_positive() {
                        Ordering::Greater
                    } else {
                        Ordering::Less
                    };
                    assert_eq!(ev.sign(&pt), expected, "{pt:?}");
                }
            }
        }
    }

    #[test]
    fn overflow_falls_back_to_exact() {
        let ctx = VarContext::new(["x"]).unwrap();
        let x = ctx.var("x").unwrap();
        let p = &x.pow(40) - 1;
        let ev = GridEvaluator::new(&p, &[0], 1).unwrap();
        assert_eq!(ev.sign(&[1_000_000]), Ordering::Greater);
        assert_eq!(ev.sign(&[1]), Ordering::Equal);
    }

    #[test]
    fn missing_variable_is_an_error() {
        let ctx = VarContext::new(["x", "y"]).unwrap();
        let p = ctx.var("y").unwrap();
        assert!(GridEvaluator::new(&p, &[0], 1).is_err());
    }
}
