use std::collections::BTreeSet;
use std::sync::Arc;

use fano_mms::exactmath::{
    check_nonneg_combination, Generator, GridEvaluator, NonnegCombination, Part, Polynomial, Rational, VarContext,
};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn small_rational() -> impl Strategy<Value = (i64, i64)> {
    (-1000i64..=1000, 1i64..=60)
}

fn ctx3() -> Arc<VarContext> {
    VarContext::new(["x", "y", "z"]).unwrap()
}

/// Terms with exponents ≤ 3 in three variables.
fn poly_terms() -> impl Strategy<Value = Vec<([u32; 3], i64)>> {
    prop::collection::vec(([0u32..=3, 0u32..=3, 0u32..=3], -20i64..=20), 0..8)
}

fn build(ctx: &Arc<VarContext>, terms: &[([u32; 3], i64)]) -> Polynomial {
    Polynomial::from_terms(ctx, terms.iter().map(|(e, c)| (e.to_vec(), q(*c, 1))))
}

/// Oracle: evaluate the raw term list without going through `Polynomial`.
fn naive_eval(terms: &[([u32; 3], i64)], pt: &[Rational; 3]) -> Rational {
    let mut acc = Rational::zero();
    for (e, c) in terms {
        let mut t = q(*c, 1);
        for (k, &ek) in e.iter().enumerate() {
            for _ in 0..ek {
                t *= &pt[k];
            }
        }
        acc += t;
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn rational_field_laws(a in small_rational(), b in small_rational(), c in small_rational()) {
        let (x, y, z) = (q(a.0, a.1), q(b.0, b.1), q(c.0, c.1));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!((&x + &y) + &z, &x + (&y + &z));
        prop_assert_eq!((&x * &y) * &z, &x * (&y * &z));
        prop_assert_eq!(&x * (&y + &z), &x * &y + &x * &z);
        prop_assert_eq!(&x - &x, Rational::zero());
        if !x.is_zero() {
            prop_assert_eq!(&x * x.recip(), Rational::one());
        }
        // canonical form: lowest terms with positive denominator
        let g = num_integer::gcd(a.0, a.1);
        prop_assert_eq!(x.numer().clone(), (a.0 / g).into());
        prop_assert_eq!(x.denom().clone(), (a.1 / g).into());
        // ordering agrees with cross multiplication
        prop_assert_eq!(x < y, (a.0 as i128) * (b.1 as i128) < (b.0 as i128) * (a.1 as i128));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn evaluation_paths_agree(
        pt in prop::array::uniform3(-12i64..=12),
        terms in poly_terms(),
        other in poly_terms(),
        denom in 1i64..=4,
    ) {
        let ctx = ctx3();
        let p = build(&ctx, &terms);
        let r = build(&ctx, &other);
        let point = [q(pt[0], denom), q(pt[1], denom), q(pt[2], denom)];
        let v = p.eval(&point).unwrap();
        prop_assert_eq!(&v, &naive_eval(&terms, &point));
        let grid = GridEvaluator::new(&p, &[0, 1, 2], denom).unwrap();
        prop_assert_eq!(grid.value(&pt), v.clone());
        prop_assert_eq!(grid.sign(&pt), v.cmp(&Rational::zero()));
        // ring homomorphism
        let w = r.eval(&point).unwrap();
        prop_assert_eq!((&p * &r).eval(&point).unwrap(), &v * &w);
        prop_assert_eq!((&p + &r).eval(&point).unwrap(), &v + &w);
        // substitution of a constant commutes with evaluation
        let c = Polynomial::constant(&ctx, point[1].clone());
        prop_assert_eq!(p.substitute(1, &c).eval(&point).unwrap(), v);
    }

    #[test]
    fn certified_combinations_are_nonnegative(
        squares in prop::collection::vec(poly_terms(), 0..3),
        var_parts in prop::collection::vec((0usize..2, prop::collection::vec(([0u32..=2, 0u32..=2, 0u32..=2], 0i64..=9), 1..4)), 0..3),
        pts in prop::collection::vec(prop::array::uniform3(0i64..=10), 8),
        zpt in -10i64..=10,
    ) {
        let ctx = ctx3();
        let nonneg: BTreeSet<usize> = [0, 1].into_iter().collect();
        let mut parts = Vec::new();
        for t in &squares {
            parts.push(Part::square(build(&ctx, t)));
        }
        for (v, mult) in &var_parts {
            // multipliers use z only with even exponent
            let mult: Vec<_> = mult.iter().map(|(e, c)| ([e[0], e[1], 2 * e[2]], *c)).collect();
            parts.push(Part::new(vec![Generator::Var(*v)], build(&ctx, &mult)));
        }
        let target = parts.iter().fold(Polynomial::zero(&ctx), |acc, p| &acc + &p.expand());
        let comb = NonnegCombination::new(target.clone(), parts);
        let check = check_nonneg_combination(&comb, &nonneg);
        prop_assert!(check.holds, "{:?}", check.diagnostics);
        for p in &pts {
            let point = [q(p[0], 2), q(p[1], 3), q(zpt, 1)];
            prop_assert!(target.eval(&point).unwrap() >= Rational::zero());
        }
        // shifting the target down by one breaks the identity
        let broken = NonnegCombination::new(&target - 1, comb.parts.clone());
        prop_assert!(!check_nonneg_combination(&broken, &nonneg).holds);
    }
}

#[test]
fn undeclared_variable_generator_is_rejected() {
    let ctx = ctx3();
    let z = ctx.var("z").unwrap();
    let comb = NonnegCombination::new(z.clone(), vec![Part::new(vec![Generator::Var(2)], Polynomial::constant(&ctx, q(1, 1)))]);
    let nonneg: BTreeSet<usize> = [0, 1].into_iter().collect();
    assert!(!check_nonneg_combination(&comb, &nonneg).holds);
}
