use std::collections::BTreeSet;

use fano_mms::exactmath::Rational;
use fano_mms::lines::{
    delta_bound, denominator_gap, exceptional_set, lambda_ml, mobile_ratio, ordering_function,
    symbolic_denominator_identity, DeltaParams,
};
use num_bigint::BigInt;

fn fact(n: u128) -> u128 {
    (1..=n).product()
}

#[test]
fn ordering_function_matches_explicit_sets() {
    for m in 4..=14u64 {
        for l in 3..=9u64 {
            let big_m: BTreeSet<u64> = (2..m).collect();
            let big_l: BTreeSet<u64> = (l..2 * l).collect();
            let o = ordering_function(m, l).unwrap();
            for (e, &ce) in o.c.iter().enumerate() {
                let e = e as u64;
                let a = big_m.iter().filter(|&&x| (4..=e).contains(&x)).count() as u64;
                let b = big_l.iter().filter(|&&x| (3..=e).contains(&x)).count() as u64;
                assert_eq!(ce, a + b, "({m},{l}) e={e}");
            }
            // χ(i) = e exactly on (c_{e−1}, c_e]
            for (idx, &chi) in o.chi.iter().enumerate() {
                let i = idx as u64 + 1;
                let e = chi as usize;
                assert!(o.c[e - 1] < i && i <= o.c[e]);
            }
        }
    }
}

#[test]
fn mobile_ratio_matches_integer_oracle() {
    for m in 4..=12u128 {
        for l in 3..=8u128 {
            let lam = fact(m) / 6 * fact(2 * l - 1) / fact(l - 1) - 1;
            let num = fact(m) / 4 * (fact(2 * l) / fact(l)) - lam;
            let den = 2 * fact(m) / 3 * (fact(2 * l - 1) / fact(l - 1)) - lam;
            let r = mobile_ratio(m as u64, l as u64).unwrap();
            assert_eq!(r.ratio, Rational::new(BigInt::from(num), BigInt::from(den)));
            // 3·num − 2·den = 1 > 0
            assert_eq!(3 * num - 2 * den, 1);
            assert!(r.exceeds_two_thirds);
            assert_eq!(lambda_ml(m as u64, l as u64).unwrap(), BigInt::from(lam));
            assert_eq!(denominator_gap(m as u64, l as u64).unwrap(), BigInt::from(4));
        }
    }
    assert!(symbolic_denominator_identity());
}

#[test]
fn exceptional_set_matches_cross_multiplied_oracle() {
    let mut expected = BTreeSet::new();
    for m in 3..=12u64 {
        for l in 3..=8u64 {
            // refined bound > 3/(2m), cleared of denominators
            let exceptional = if m <= 2 * l { 16 * l > 9 * (2 * l - 1) } else { 8 * m > 9 * (m - 1) };
            if exceptional {
                expected.insert((m, l));
            }
        }
    }
    assert_eq!(exceptional_set(3..=12, 3..=8).unwrap(), expected);
    assert_eq!(expected.len(), 12);
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn delta_bound_matches_direct_sum() {
    for n_amb in 1..=8u64 {
        for a in 1..=3u64 {
            for e in 0..=6u64 {
                for c1 in 1..=3u64 {
                    for c2 in 1..=3u64 {
                        let dp = DeltaParams {
                            n_ambient: n_amb,
                            e,
                            a,
                            c: vec![c1, c2],
                        };
                        let ok = c1 + 1 <= e && a <= n_amb;
                        match delta_bound(&dp) {
                            Ok(b) => {
                                assert!(ok);
                                let a2 = a.min(n_amb - a);
                                let c2s = c2.min(e - c1 - 1);
                                assert_eq!(b.value, BigInt::from(binom(a + c1, c1) + binom(a2 + c2s, c2s)));
                            }
                            Err(_) => assert!(!ok),
                        }
                    }
                }
            }
        }
    }
}
