//! The q-expansion of the weight-2 newform attached to a semistable
//! elliptic curve, generated from local data.
//!
//! Prime coefficients come from point counts (a_l = l + 1 - #E(F_l) at good
//! primes, a_p = +-1 at multiplicative ones); the rest of the table follows
//! from the eigenform recursions
//!
//! ```text
//! a_(l^(k+1)) = a_l a_(l^k) - l a_(l^(k-1))     l good
//! a_(p^k)     = a_p^k                           p | N
//! a_(mn)      = a_m a_n                         gcd(m, n) = 1
//! ```
//!
//! The recursions are standard newform theory; the operator identities they
//! encode (`T_l f = a_l f`, `U_p f = a_p f`) are re-verified in tests.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{primes_up_to, valuation};
use crate::curves::{CurveError, ReductionKind, WeierstrassCurve};
use crate::series::QExpansion;

/// Truncated newform expansion: a_0 = 0, a_1 = 1, integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewformExpansion {
    label: Option<String>,
    level: u64,
    series: QExpansion,
}

impl NewformExpansion {
    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn series(&self) -> &QExpansion {
        &self.series
    }

    pub fn precision(&self) -> usize {
        self.series.precision()
    }

    /// a_n as an integer; the expansion is integer-valued by construction.
    pub fn coeff_int(&self, n: usize) -> BigInt {
        let c = self.series.coeff(n);
        debug_assert!(c.is_integer());
        c.to_integer()
    }
}

/// Build the expansion to the default precision: one past the Sturm-type
/// truncation index of the congruence checker, which is what dictates
/// demand for coefficients.
pub fn af_coeffs_default(curve: &WeierstrassCurve) -> Result<NewformExpansion, CurveError> {
    let level = curve.conductor_semistable()?;
    af_coeffs(curve, crate::verify::sturm_precision(level) + 1)
}

/// Build the expansion to the requested precision from reduction data.
pub fn af_coeffs(
    curve: &WeierstrassCurve,
    precision: usize,
) -> Result<NewformExpansion, CurveError> {
    let level = curve.conductor_semistable()?;
    let mut a: Vec<BigInt> = alloc::vec![BigInt::zero(); precision + 1];
    if precision >= 1 {
        a[1] = BigInt::from(1);
    }
    for p in primes_up_to(precision as u64) {
        let data = curve.reduction_data(p);
        let ap = BigInt::from(data.a_p);
        let p_us = p as usize;
        a[p_us] = ap.clone();
        // prime powers
        let mut k_prev: BigInt = BigInt::from(1); // a_(p^(k-1))
        let mut k_cur = ap.clone(); // a_(p^k)
        let mut power = p_us;
        while power <= precision / p_us {
            power *= p_us;
            let next = if data.kind == ReductionKind::Good {
                &ap * &k_cur - BigInt::from(p) * &k_prev
            } else {
                &k_cur * &ap
            };
            a[power] = next.clone();
            k_prev = k_cur;
            k_cur = next;
        }
    }
    // multiplicativity across coprime parts, smallest prime factor first
    for n in 2..=precision {
        let n64 = n as u64;
        let p = crate::arith::factor_u64(n64)[0].0;
        let e = valuation(n64, p);
        let pe = p.pow(e) as usize;
        let m = n / pe;
        if m > 1 {
            a[n] = &a[pe] * &a[m];
        }
    }
    let series = QExpansion::from_rationals(a.into_iter().map(BigRational::from_integer).collect());
    Ok(NewformExpansion {
        label: curve.label().map(String::from),
        level,
        series,
    })
}

/// Ordinarity of f at a good prime r, plus the stronger residue condition
/// a_r = 1 mod r that the torsion situation expects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrdinarityReport {
    pub r: u64,
    pub a_r_mod_r: u64,
    pub is_ordinary: bool,
    pub residue_is_one: bool,
}

/// Check a_r mod r at a good prime r; a query at a bad prime is an error.
pub fn ordinarity_check(curve: &WeierstrassCurve, r: u64) -> Result<OrdinarityReport, CurveError> {
    let level = curve.conductor_semistable()?;
    if level % r == 0 {
        return Err(CurveError::BadPrimeQuery { r, level });
    }
    let data = curve.reduction_data(r);
    debug_assert_eq!(data.kind, ReductionKind::Good);
    let a_r_mod_r = BigInt::from(data.a_p)
        .mod_floor(&BigInt::from(r))
        .to_u64()
        .expect("residue fits u64");
    Ok(OrdinarityReport {
        r,
        a_r_mod_r,
        is_ordinary: a_r_mod_r != 0,
        residue_is_one: a_r_mod_r == 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{scale_int, t_op, u_op};

    fn curve_11a1() -> WeierstrassCurve {
        WeierstrassCurve::from_coeffs([0, -1, 1, -10, -20]).unwrap()
    }

    fn curve_14a1() -> WeierstrassCurve {
        WeierstrassCurve::from_coeffs([1, 0, 1, 4, -6]).unwrap()
    }

    fn curve_26b1() -> WeierstrassCurve {
        WeierstrassCurve::from_coeffs([1, -1, 1, -3, 3]).unwrap()
    }

    #[test]
    fn expansion_11a1() {
        let f = af_coeffs(&curve_11a1(), 7).unwrap();
        let got: Vec<i64> = (0..=7).map(|n| f.coeff_int(n).to_i64().unwrap()).collect();
        assert_eq!(got, [0, 1, -2, -1, 2, 1, 2, -2]);

        // default precision covers the congruence window with one to spare
        let f = af_coeffs_default(&curve_11a1()).unwrap();
        assert_eq!(f.precision(), crate::verify::sturm_precision(11) + 1);
    }

    #[test]
    fn good_prime_square_recursion() {
        // a_4 = a_2^2 - 2 whenever 2 is good
        for curve in [curve_11a1(), curve_26b1()] {
            if curve.conductor_semistable().unwrap() % 2 == 0 {
                continue;
            }
            let f = af_coeffs(&curve, 4).unwrap();
            let a2 = f.coeff_int(2);
            assert_eq!(f.coeff_int(4), &a2 * &a2 - 2);
        }
    }

    #[test]
    fn bad_prime_power_rule_14a1() {
        let f = af_coeffs(&curve_14a1(), 8).unwrap();
        assert_eq!(f.coeff_int(2), BigInt::from(-1));
        assert_eq!(f.coeff_int(4), BigInt::from(1));
        assert_eq!(f.coeff_int(8), BigInt::from(-1));
    }

    #[test]
    fn coefficients_are_integers_and_multiplicative() {
        let f = af_coeffs(&curve_26b1(), 60).unwrap();
        for n in 0..=60 {
            assert!(f.series().coeff(n).is_integer());
        }
        for m in 2..=60usize {
            for n in 2..=60usize {
                if m * n > 60 || m.gcd(&n) != 1 {
                    continue;
                }
                assert_eq!(f.coeff_int(m * n), f.coeff_int(m) * f.coeff_int(n));
            }
        }
    }

    #[test]
    fn eigenform_operator_identities() {
        for curve in [curve_11a1(), curve_14a1(), curve_26b1()] {
            let level = curve.conductor_semistable().unwrap();
            let f = af_coeffs(&curve, 120).unwrap();
            for ell in primes_up_to(20) {
                if level % ell == 0 {
                    continue;
                }
                let image = t_op(ell, f.series(), level).unwrap();
                let a_ell = f.coeff_int(ell as usize).to_i64().unwrap();
                let expected =
                    scale_int(a_ell, &f.series().truncate(image.precision()).unwrap()).unwrap();
                assert_eq!(image, expected, "T_{} on {:?}", ell, curve.label());
            }
            for (p, _) in crate::arith::factor_u64(level) {
                let image = u_op(p, f.series()).unwrap();
                let a_p = f.coeff_int(p as usize).to_i64().unwrap();
                let expected =
                    scale_int(a_p, &f.series().truncate(image.precision()).unwrap()).unwrap();
                assert_eq!(image, expected, "U_{} at level {}", p, level);
            }
        }
    }

    #[test]
    fn ordinarity_examples() {
        let rep = ordinarity_check(&curve_11a1(), 5).unwrap();
        assert!(rep.is_ordinary && rep.residue_is_one);
        assert_eq!(rep.a_r_mod_r, 1);

        let rep = ordinarity_check(&curve_26b1(), 7).unwrap();
        assert!(rep.is_ordinary && rep.residue_is_one);

        // a_5(14a1) = 0: not ordinary at 5
        let rep = ordinarity_check(&curve_14a1(), 5).unwrap();
        assert_eq!(rep.a_r_mod_r, 0);
        assert!(!rep.is_ordinary && !rep.residue_is_one);

        assert!(matches!(
            ordinarity_check(&curve_11a1(), 11),
            Err(CurveError::BadPrimeQuery { r: 11, level: 11 })
        ));
    }
}
