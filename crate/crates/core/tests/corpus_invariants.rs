//! Corpus-wide invariants: the two torsion routes agree, isogenous curves
//! share a_l at good primes, local data stays inside its bounds, the fast
//! and slow point counts match, and the conductor-pq screen never
//! contradicts an actually-occurring torsion prime.

use eiscong::arith::{factor_u64, primes_up_to};
use eiscong::corpus::builtin_corpus;
use eiscong::curves::ReductionKind;
use eiscong::verify::{cuspidal_screen, ClaimStatus};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use std::collections::BTreeMap;

#[test]
fn torsion_order_divides_gcd_bound_everywhere() {
    for entry in builtin_corpus() {
        let torsion = entry.curve().torsion_order().unwrap();
        assert_eq!(
            torsion.gcd_bound % torsion.order,
            0,
            "{}: order {} vs bound {}",
            entry.label,
            torsion.order,
            torsion.gcd_bound
        );
        assert_eq!(Some(torsion.order), entry.torsion);
    }
}

#[test]
fn isogenous_curves_share_a_l() {
    let corpus = builtin_corpus();
    let mut classes: BTreeMap<&str, Vec<_>> = BTreeMap::new();
    for entry in &corpus {
        if let Some(class) = entry.isogeny_class.as_deref() {
            classes.entry(class).or_default().push(entry);
        }
    }
    let mut multi = 0;
    for (class, members) in classes {
        if members.len() < 2 {
            continue;
        }
        multi += 1;
        let reference = members[0].curve();
        for other in &members[1..] {
            let other_curve = other.curve();
            for ell in primes_up_to(100) {
                if members[0].conductor % ell == 0 {
                    continue;
                }
                assert_eq!(
                    reference.reduction_data(ell).a_p,
                    other_curve.reduction_data(ell).a_p,
                    "class {}: a_{} differs between {} and {}",
                    class,
                    ell,
                    members[0].label,
                    other.label
                );
            }
        }
    }
    assert!(
        multi >= 3,
        "expected several multi-member classes, got {}",
        multi
    );
}

#[test]
fn local_data_bounds_hold_corpus_wide() {
    for entry in builtin_corpus() {
        let curve = entry.curve();
        for p in primes_up_to(100) {
            let data = curve.reduction_data(p);
            match data.kind {
                ReductionKind::Good => {
                    assert!(data.a_p * data.a_p <= 4 * p as i64);
                    assert!(data.w_p.is_none());
                }
                ReductionKind::MultiplicativeSplit => {
                    assert_eq!((data.a_p, data.w_p), (1, Some(-1)))
                }
                ReductionKind::MultiplicativeNonSplit => {
                    assert_eq!((data.a_p, data.w_p), (-1, Some(1)))
                }
                ReductionKind::Additive => panic!("{}: additive at {}", entry.label, p),
            }
        }
    }
}

/// Independent O(p^2) enumeration oracle for the character-sum counter.
fn enumerate_smooth(curve: &eiscong::curves::WeierstrassCurve, p: u64) -> u64 {
    let m = |v: &BigInt| v.mod_floor(&BigInt::from(p)).to_u64().unwrap() as u128;
    let [a1, a2, a3, a4, a6] = curve.coefficients().map(m);
    let pm = p as u128;
    let mut smooth = 1u64;
    for x in 0..pm {
        for y in 0..pm {
            let lhs = (y * y + a1 * x % pm * y + a3 * y) % pm;
            let rhs = (x * x % pm * x + a2 * x % pm * x + a4 * x + a6) % pm;
            if lhs == rhs {
                let dy = (2 * y + a1 * x + a3) % pm;
                let dx = (a1 * y + pm * pm - (3 * (x * x % pm) + 2 * a2 * x + a4) % pm) % pm;
                if dy != 0 || dx != 0 {
                    smooth += 1;
                }
            }
        }
    }
    smooth
}

#[test]
fn counting_methods_agree_up_to_50() {
    for entry in builtin_corpus() {
        let curve = entry.curve();
        for p in primes_up_to(50) {
            if p <= 3 || entry.conductor % p == 0 {
                continue;
            }
            assert_eq!(
                curve.count_points(p).smooth,
                enumerate_smooth(&curve, p),
                "{} at p = {}",
                entry.label,
                p
            );
        }
    }
}

#[test]
fn main_congruence_implies_eichler_at_every_checked_prime() {
    // when f = E mod r holds, the good-prime congruence is forced (E has
    // a_l = l + 1 there); run both checkers over every admissible (curve, r)
    let mut exercised = 0;
    for entry in builtin_corpus() {
        let curve = entry.curve();
        let torsion = entry.torsion.unwrap();
        for (r, _) in factor_u64(torsion) {
            if r == 2 || r == 3 || entry.conductor % r == 0 {
                continue;
            }
            let precision = eiscong::verify::sturm_precision(entry.conductor);
            let main = eiscong::verify::check_main_congruence(&curve, r, 10).unwrap();
            let eichler =
                eiscong::verify::check_eichler_congruence(&curve, r, precision as u64).unwrap();
            assert_eq!(main.status, ClaimStatus::Pass, "{} r={}", entry.label, r);
            assert_eq!(eichler.status, ClaimStatus::Pass, "{} r={}", entry.label, r);
            exercised += 1;
        }
    }
    assert!(
        exercised >= 3,
        "only {} admissible (curve, r) pairs",
        exercised
    );
}

#[test]
fn screen_never_contradicts_reality() {
    // any corpus curve of conductor pq with a torsion prime r coprime to
    // 6pq must come out not-excluded
    let mut exercised = 0;
    for entry in builtin_corpus() {
        let factors = factor_u64(entry.conductor);
        if factors.len() != 2 {
            continue;
        }
        let (p, q) = (factors[0].0, factors[1].0);
        let torsion = entry.torsion.unwrap();
        for (r, _) in factor_u64(torsion) {
            if r == 2 || r == 3 || entry.conductor % r == 0 {
                continue;
            }
            let claim = cuspidal_screen(p, q, r).unwrap();
            assert_eq!(
                claim.status,
                ClaimStatus::NotApplicable,
                "{}: r = {} actually divides the torsion order, screen must not exclude it",
                entry.label,
                r
            );
            exercised += 1;
        }
    }
    assert!(
        exercised >= 2,
        "screen consistency exercised {} times",
        exercised
    );
}
