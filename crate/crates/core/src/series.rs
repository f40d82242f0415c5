//! Truncated q-expansion arithmetic.
//!
//! A [`QExpansion`] is a dense coefficient vector `a_0..a_P` together with a
//! [`CoefficientDomain`]: exact rationals, or the integers modulo a prime r.
//! Precision is explicit and every operator states how it transforms it;
//! nothing is ever read past the declared precision. The three index-mixing
//! operators act by
//!
//! ```text
//! B_r: sum a_n q^n  ->  sum a_n q^(nr)
//! U_r: sum a_n q^n  ->  sum a_(nr) q^n
//! T_l: sum a_n q^n  ->  sum a_(nl) q^n + sum l a_n q^(nl)      (l not dividing the level)
//! ```
//!
//! so `T_r = U_r + r B_r` and `U_r(B_r(g)) = g` hold on the nose, truncation
//! aside. Coefficients in the mod-r domain are stored as their canonical
//! representative in `[0, r)`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{is_prime, mod_inv};

/// Where coefficients live: Q, or Z/rZ for a prime r.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientDomain {
    ExactRational,
    ModPrime(u64),
}

impl CoefficientDomain {
    /// The mod-r domain; rejects composite moduli.
    pub fn mod_prime(r: u64) -> Result<Self, SeriesError> {
        if is_prime(r) {
            Ok(CoefficientDomain::ModPrime(r))
        } else {
            Err(SeriesError::NotPrime(r))
        }
    }
}

impl fmt::Display for CoefficientDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientDomain::ExactRational => write!(f, "Q"),
            CoefficientDomain::ModPrime(r) => write!(f, "Z/{}Z", r),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesError {
    NotPrime(u64),
    DomainMismatch {
        left: CoefficientDomain,
        right: CoefficientDomain,
    },
    /// A denominator is not invertible modulo r.
    DenominatorClash {
        index: usize,
        denominator: BigInt,
        modulus: u64,
    },
    InsufficientPrecision {
        required: usize,
        actual: usize,
    },
    /// T_l is only defined for l coprime to the level.
    DividesLevel {
        prime: u64,
        level: u64,
    },
    IndexOutOfRange {
        index: usize,
        precision: usize,
    },
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::NotPrime(r) => write!(f, "{} is not prime", r),
            SeriesError::DomainMismatch { left, right } => {
                write!(f, "coefficient domains differ: {} vs {}", left, right)
            }
            SeriesError::DenominatorClash {
                index,
                denominator,
                modulus,
            } => write!(
                f,
                "denominator {} of coefficient a_{} is divisible by {}",
                denominator, index, modulus
            ),
            SeriesError::InsufficientPrecision { required, actual } => write!(
                f,
                "operation needs precision >= {}, series has {}",
                required, actual
            ),
            SeriesError::DividesLevel { prime, level } => {
                write!(
                    f,
                    "T_{} is undefined at level {} ({0} divides the level)",
                    prime, level
                )
            }
            SeriesError::IndexOutOfRange { index, precision } => {
                write!(
                    f,
                    "coefficient index {} exceeds precision {}",
                    index, precision
                )
            }
        }
    }
}

impl core::error::Error for SeriesError {}

/// Truncated formal power series with exact coefficients.
///
/// Stores exactly the coefficients `a_0..a_P` where `P` is the precision;
/// the representation cannot hold data past its precision, and accessors
/// refuse indices beyond it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    domain: CoefficientDomain,
    coeffs: Vec<BigRational>,
}

/// Canonical form of a coefficient in the given domain.
///
/// Rationals are kept reduced by `BigRational` itself; mod-r values are
/// mapped to their representative in `[0, r)`, inverting the denominator.
fn canon(
    domain: CoefficientDomain,
    index: usize,
    value: BigRational,
) -> Result<BigRational, SeriesError> {
    match domain {
        CoefficientDomain::ExactRational => Ok(value),
        CoefficientDomain::ModPrime(r) => {
            let m = BigInt::from(r);
            let den = value.denom().mod_floor(&m);
            if den.is_zero() {
                return Err(SeriesError::DenominatorClash {
                    index,
                    denominator: value.denom().clone(),
                    modulus: r,
                });
            }
            let num = value
                .numer()
                .mod_floor(&m)
                .to_u64()
                .expect("residue fits u64");
            let den = den.to_u64().expect("residue fits u64");
            let residue = (num as u128 * mod_inv(den, r) as u128 % r as u128) as u64;
            Ok(BigRational::from_integer(BigInt::from(residue)))
        }
    }
}

impl QExpansion {
    /// Zero series of the given precision.
    pub fn zero(domain: CoefficientDomain, precision: usize) -> Self {
        QExpansion {
            domain,
            coeffs: alloc::vec![BigRational::zero(); precision + 1],
        }
    }

    /// Series over Q from a dense coefficient list `a_0..a_P`.
    ///
    /// Panics on an empty list (precision 0 still has `a_0`).
    pub fn from_rationals(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least a_0");
        QExpansion {
            domain: CoefficientDomain::ExactRational,
            coeffs,
        }
    }

    /// Series over Q with integer coefficients, convenient in tests.
    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::from_rationals(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    /// Series in an arbitrary domain; coefficients are canonicalized.
    pub fn new(domain: CoefficientDomain, coeffs: Vec<BigRational>) -> Result<Self, SeriesError> {
        assert!(!coeffs.is_empty(), "a series carries at least a_0");
        let coeffs = coeffs
            .into_iter()
            .enumerate()
            .map(|(n, c)| canon(domain, n, c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QExpansion { domain, coeffs })
    }

    pub fn domain(&self) -> CoefficientDomain {
        self.domain
    }

    /// Declared precision P: coefficients a_0..a_P are meaningful.
    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient a_n. Panics past the precision; use [`Self::try_coeff`]
    /// when the index is not known to be in range.
    pub fn coeff(&self, n: usize) -> &BigRational {
        assert!(
            n <= self.precision(),
            "coefficient a_{} requested from a series of precision {}",
            n,
            self.precision()
        );
        &self.coeffs[n]
    }

    pub fn try_coeff(&self, n: usize) -> Option<&BigRational> {
        self.coeffs.get(n)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Residue of a_n as a machine integer, for mod-r series.
    pub fn residue(&self, n: usize) -> Option<u64> {
        match self.domain {
            CoefficientDomain::ModPrime(_) => self.coeffs.get(n).and_then(|c| c.numer().to_u64()),
            CoefficientDomain::ExactRational => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Copy truncated to a smaller precision.
    pub fn truncate(&self, precision: usize) -> Result<Self, SeriesError> {
        if precision > self.precision() {
            return Err(SeriesError::InsufficientPrecision {
                required: precision,
                actual: self.precision(),
            });
        }
        Ok(QExpansion {
            domain: self.domain,
            coeffs: self.coeffs[..=precision].to_vec(),
        })
    }

    /// Copy with a_n replaced (canonicalized); used to probe checkers.
    pub fn with_coeff(&self, n: usize, value: BigRational) -> Result<Self, SeriesError> {
        if n > self.precision() {
            return Err(SeriesError::IndexOutOfRange {
                index: n,
                precision: self.precision(),
            });
        }
        let mut coeffs = self.coeffs.clone();
        coeffs[n] = canon(self.domain, n, value)?;
        Ok(QExpansion {
            domain: self.domain,
            coeffs,
        })
    }

    /// Comma-separated coefficient list, as the CLI prints it.
    pub fn render_coeffs(&self) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        for (n, c) in self.coeffs.iter().enumerate() {
            if n > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "{}", c);
        }
        out
    }
}

/// Sum of the positive divisors of `n`.
///
/// Panics on `n = 0`.
pub fn sigma(n: u64) -> u64 {
    assert!(n >= 1, "sigma(n) requires n >= 1");
    let mut total = 0u64;
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            total += d;
            let q = n / d;
            if q != d {
                total += q;
            }
        }
        d += 1;
    }
    total
}

/// B_r: send a_n to index nr. Output precision is `rP + (r-1)`, the largest
/// window determined by the inputs.
pub fn b_op(r: u64, g: &QExpansion) -> QExpansion {
    assert!(is_prime(r), "B_r requires prime r, got {}", r);
    let p = g.precision();
    let r_us = r as usize;
    let out_precision = r_us * p + (r_us - 1);
    let mut coeffs = alloc::vec![BigRational::zero(); out_precision + 1];
    for n in 0..=p {
        coeffs[n * r_us] = g.coeffs[n].clone();
    }
    QExpansion {
        domain: g.domain,
        coeffs,
    }
}

/// U_r: coefficient at n becomes a_(nr). Output precision `floor(P/r)`;
/// rejects series too short to produce even a_1.
pub fn u_op(r: u64, g: &QExpansion) -> Result<QExpansion, SeriesError> {
    if !is_prime(r) {
        return Err(SeriesError::NotPrime(r));
    }
    let p = g.precision();
    let r_us = r as usize;
    if p < r_us {
        return Err(SeriesError::InsufficientPrecision {
            required: r_us,
            actual: p,
        });
    }
    let out_precision = p / r_us;
    let coeffs = (0..=out_precision)
        .map(|n| g.coeffs[n * r_us].clone())
        .collect();
    Ok(QExpansion {
        domain: g.domain,
        coeffs,
    })
}

/// T_l at a level coprime to l: a_n(out) = a_(nl) + l * a_(n/l), the second
/// term present only when l | n. Output precision `floor(P/l)`.
pub fn t_op(ell: u64, g: &QExpansion, level: u64) -> Result<QExpansion, SeriesError> {
    if !is_prime(ell) {
        return Err(SeriesError::NotPrime(ell));
    }
    if level % ell == 0 {
        return Err(SeriesError::DividesLevel { prime: ell, level });
    }
    let p = g.precision();
    let l = ell as usize;
    if p < l {
        return Err(SeriesError::InsufficientPrecision {
            required: l,
            actual: p,
        });
    }
    let out_precision = p / l;
    let ell_rat = BigRational::from_integer(BigInt::from(ell));
    let mut coeffs = Vec::with_capacity(out_precision + 1);
    for n in 0..=out_precision {
        let mut c = g.coeffs[n * l].clone();
        if n % l == 0 {
            c += &ell_rat * &g.coeffs[n / l];
        }
        coeffs.push(canon(g.domain, n, c)?);
    }
    Ok(QExpansion {
        domain: g.domain,
        coeffs,
    })
}

/// Coefficientwise image of a rational series in Z/rZ, same precision.
///
/// Fails with [`SeriesError::DenominatorClash`] if some denominator is
/// divisible by r; in this crate all denominators divide a power of 24, so
/// a clash signals r | 6.
pub fn reduce_mod(g: &QExpansion, r: u64) -> Result<QExpansion, SeriesError> {
    if g.domain != CoefficientDomain::ExactRational {
        return Err(SeriesError::DomainMismatch {
            left: g.domain,
            right: CoefficientDomain::ExactRational,
        });
    }
    let domain = CoefficientDomain::mod_prime(r)?;
    QExpansion::new(domain, g.coeffs.clone())
}

/// Coefficientwise sum; precision is the minimum of the inputs.
pub fn add(g: &QExpansion, h: &QExpansion) -> Result<QExpansion, SeriesError> {
    binary(g, h, |a, b| a + b)
}

/// Coefficientwise difference g - h.
pub fn sub(g: &QExpansion, h: &QExpansion) -> Result<QExpansion, SeriesError> {
    binary(g, h, |a, b| a - b)
}

fn binary(
    g: &QExpansion,
    h: &QExpansion,
    f: impl Fn(&BigRational, &BigRational) -> BigRational,
) -> Result<QExpansion, SeriesError> {
    if g.domain != h.domain {
        return Err(SeriesError::DomainMismatch {
            left: g.domain,
            right: h.domain,
        });
    }
    let precision = g.precision().min(h.precision());
    let coeffs = (0..=precision)
        .map(|n| canon(g.domain, n, f(&g.coeffs[n], &h.coeffs[n])))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QExpansion {
        domain: g.domain,
        coeffs,
    })
}

/// Scalar multiple c * g. In the mod-r domain the scalar's denominator must
/// be invertible mod r.
pub fn scale(c: &BigRational, g: &QExpansion) -> Result<QExpansion, SeriesError> {
    let coeffs = g
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, a)| canon(g.domain, n, c * a))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QExpansion {
        domain: g.domain,
        coeffs,
    })
}

/// Integer-scalar convenience for [`scale`].
pub fn scale_int(c: i64, g: &QExpansion) -> Result<QExpansion, SeriesError> {
    scale(&BigRational::from_integer(BigInt::from(c)), g)
}
