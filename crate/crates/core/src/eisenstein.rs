//! The weight-2 Eisenstein eigenseries of square-free level, built by
//! iterated level raising.
//!
//! Starting point is the level-1 series `e` stored here with the a_1 = 1
//! normalization: `a_0 = -1/24, a_n = sigma(n)`. Raising at a prime r maps a
//! normalized eigenseries `g` with `a_r(g) = 1 + r` to one of
//!
//! ```text
//! g - r * B_r(g)    with U_r-eigenvalue 1
//! g -     B_r(g)    with U_r-eigenvalue r
//! ```
//!
//! leaving `a_l` untouched for every prime l != r. Iterating over the prime
//! divisors of the target level N produces the series E with `a_l = l + 1`
//! off N and `a_p = delta_p` on N, where each `delta_p` is 1 or p and at
//! least one prime must take the modular choice `delta_p = 1`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{factor_u64, primes_up_to, valuation};
use crate::series::{b_op, scale, scale_int, sigma, sub, t_op, u_op, QExpansion, SeriesError};

/// A square-free level N with a choice of delta_p in {1, p} per prime p | N,
/// at least one of them 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EisensteinSpec {
    level: u64,
    deltas: BTreeMap<u64, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EisensteinError {
    LevelNotSquareFree(u64),
    LevelTooSmall(u64),
    DeltaSetMismatch {
        level: u64,
    },
    InvalidDelta {
        prime: u64,
        delta: u64,
    },
    /// No prime with delta_p = 1; the first raise must be the modular one.
    NoUnitDelta,
    /// raise_level requires a_1 = 1.
    UnnormalizedInput,
    /// The claimed a_r of the input disagrees with its stored coefficient.
    EigenvalueMismatch {
        prime: u64,
    },
    InsufficientPrecision {
        required: usize,
        actual: usize,
    },
    /// U_r did not preserve the span of (g, B_r g) within precision.
    SpanViolated {
        index: usize,
    },
    Series(SeriesError),
}

impl fmt::Display for EisensteinError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EisensteinError::LevelNotSquareFree(n) => write!(f, "level {} is not square-free", n),
            EisensteinError::LevelTooSmall(n) => write!(f, "level {} has no prime divisor", n),
            EisensteinError::DeltaSetMismatch { level } => {
                write!(
                    f,
                    "delta map does not cover exactly the primes dividing {}",
                    level
                )
            }
            EisensteinError::InvalidDelta { prime, delta } => {
                write!(f, "delta_{} = {} is neither 1 nor {0}", prime, delta)
            }
            EisensteinError::NoUnitDelta => {
                write!(f, "at least one prime must have delta_p = 1")
            }
            EisensteinError::UnnormalizedInput => write!(f, "series is not normalized (a_1 != 1)"),
            EisensteinError::EigenvalueMismatch { prime } => {
                write!(
                    f,
                    "stored a_{} disagrees with the claimed eigenvalue",
                    prime
                )
            }
            EisensteinError::InsufficientPrecision { required, actual } => {
                write!(f, "need precision >= {}, have {}", required, actual)
            }
            EisensteinError::SpanViolated { index } => {
                write!(
                    f,
                    "U_r image leaves the (g, B_r g) plane at index {}",
                    index
                )
            }
            EisensteinError::Series(e) => write!(f, "{}", e),
        }
    }
}

impl core::error::Error for EisensteinError {}

impl From<SeriesError> for EisensteinError {
    fn from(e: SeriesError) -> Self {
        EisensteinError::Series(e)
    }
}

impl EisensteinSpec {
    pub fn new(level: u64, deltas: BTreeMap<u64, u64>) -> Result<Self, EisensteinError> {
        if level < 2 {
            return Err(EisensteinError::LevelTooSmall(level));
        }
        let factors = factor_u64(level);
        if factors.iter().any(|&(_, e)| e > 1) {
            return Err(EisensteinError::LevelNotSquareFree(level));
        }
        let primes: Vec<u64> = factors.iter().map(|&(p, _)| p).collect();
        if deltas.len() != primes.len() || !primes.iter().all(|p| deltas.contains_key(p)) {
            return Err(EisensteinError::DeltaSetMismatch { level });
        }
        for (&p, &d) in &deltas {
            if d != 1 && d != p {
                return Err(EisensteinError::InvalidDelta { prime: p, delta: d });
            }
        }
        if !deltas.values().any(|&d| d == 1) {
            return Err(EisensteinError::NoUnitDelta);
        }
        Ok(EisensteinSpec { level, deltas })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn deltas(&self) -> &BTreeMap<u64, u64> {
        &self.deltas
    }

    pub fn delta(&self, p: u64) -> Option<u64> {
        self.deltas.get(&p).copied()
    }

    /// The raise order used by [`build_e_spec`]: the smallest delta = 1
    /// prime first, then the rest ascending.
    pub fn raise_order(&self) -> Vec<u64> {
        let first = *self
            .deltas
            .iter()
            .find(|&(_, &d)| d == 1)
            .expect("validated spec has a unit delta")
            .0;
        let mut order = Vec::with_capacity(self.deltas.len());
        order.push(first);
        order.extend(self.deltas.keys().copied().filter(|&p| p != first));
        order
    }
}

/// Which eigenvector of U_r the raise selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenRaiseVariant {
    /// g - r B_r(g), eigenvalue 1; the modular choice.
    EigenvalueOne,
    /// g - B_r(g), eigenvalue r.
    EigenvalueR,
}

/// The normalized level-1 series: a_0 = -1/24, a_n = sigma(n).
pub fn e_series(precision: usize) -> QExpansion {
    let mut coeffs = Vec::with_capacity(precision + 1);
    coeffs.push(BigRational::new(BigInt::from(-1), BigInt::from(24)));
    for n in 1..=precision {
        coeffs.push(BigRational::from_integer(BigInt::from(sigma(n as u64))));
    }
    QExpansion::from_rationals(coeffs)
}

/// One level-raising step at the prime r.
///
/// `a_r_of_g` is the caller's claim for a_r(g); when the series is long
/// enough to hold a_r the claim is checked against it. The eigenvalue
/// statements require a_r(g) = 1 + r, which holds throughout the builds in
/// this crate. Output precision equals input precision.
pub fn raise_level(
    g: &QExpansion,
    r: u64,
    a_r_of_g: &BigRational,
    variant: EigenRaiseVariant,
) -> Result<QExpansion, EisensteinError> {
    if g.precision() < 1 {
        return Err(EisensteinError::InsufficientPrecision {
            required: 1,
            actual: 0,
        });
    }
    if !g.coeff(1).is_one() {
        return Err(EisensteinError::UnnormalizedInput);
    }
    if g.precision() >= r as usize && g.coeff(r as usize) != a_r_of_g {
        return Err(EisensteinError::EigenvalueMismatch { prime: r });
    }
    let b = b_op(r, g);
    let shifted = match variant {
        EigenRaiseVariant::EigenvalueOne => scale_int(r as i64, &b)?,
        EigenRaiseVariant::EigenvalueR => b,
    };
    Ok(sub(g, &shifted)?)
}

/// The Eisenstein eigenseries for the given spec: a_l = l + 1 off the level,
/// a_p = delta_p on it.
pub fn build_e_spec(
    spec: &EisensteinSpec,
    precision: usize,
) -> Result<QExpansion, EisensteinError> {
    raise_in_order(spec, &spec.raise_order(), precision)
}

/// Raise in an explicit order; raise order must visit each prime of the
/// level exactly once. Split out so order-independence is testable.
pub(crate) fn raise_in_order(
    spec: &EisensteinSpec,
    order: &[u64],
    precision: usize,
) -> Result<QExpansion, EisensteinError> {
    let mut g = e_series(precision);
    for &p in order {
        let delta = spec.delta(p).expect("order lists primes of the level");
        let variant = if delta == 1 {
            EigenRaiseVariant::EigenvalueOne
        } else {
            EigenRaiseVariant::EigenvalueR
        };
        // Raising at other primes never touches a_p, so a_p is still
        // sigma(p) = 1 + p when its turn comes.
        let claimed = BigRational::from_integer(BigInt::from(p + 1));
        g = raise_level(&g, p, &claimed, variant)?;
    }
    Ok(g)
}

/// Closed-form coefficient of the same series, from eigenform
/// multiplicativity: write n = m * prod p^(e_p) over p | N with gcd(m, N)=1,
/// then a_n = sigma(m) * prod delta_p^(e_p). Cross-validates the builder.
pub fn closed_form_coeff(spec: &EisensteinSpec, n: usize) -> BigRational {
    if n == 0 {
        return if spec.deltas.values().all(|&d| d == 1) {
            let mut c = BigRational::new(BigInt::from(-1), BigInt::from(24));
            for &p in spec.deltas.keys() {
                c *= BigRational::from_integer(BigInt::from(1i64 - p as i64));
            }
            c
        } else {
            BigRational::zero()
        };
    }
    let mut m = n as u64;
    let mut acc = BigInt::one();
    for (&p, &d) in &spec.deltas {
        for _ in 0..valuation(m, p) {
            m /= p;
            acc *= BigInt::from(d);
        }
    }
    BigRational::from_integer(acc * BigInt::from(sigma(m)))
}

/// Which operator an eigencheck exercised.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckedOperator {
    /// T_l for a prime l coprime to the level.
    Hecke(u64),
    /// U_p for a prime p dividing the level.
    AtkinU(u64),
}

impl fmt::Display for CheckedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckedOperator::Hecke(l) => write!(f, "T_{}", l),
            CheckedOperator::AtkinU(p) => write!(f, "U_{}", p),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EigenCheck {
    pub operator: CheckedOperator,
    pub eigenvalue: u64,
    /// Coefficients 0..=compared_precision were compared.
    pub compared_precision: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Default)]
pub struct EigenReport {
    pub checks: Vec<EigenCheck>,
}

impl EigenReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Verify the eigenform identities on a truncated expansion: T_l E =
/// (l+1) E for primes l coprime to the level up to `t_bound`, and U_p E =
/// delta_p E for each p dividing the level. Errors if the precision admits
/// no check at all.
pub fn verify_eigen(
    e: &QExpansion,
    spec: &EisensteinSpec,
    t_bound: u64,
) -> Result<EigenReport, EisensteinError> {
    let precision = e.precision();
    let mut checks = Vec::new();
    for ell in primes_up_to(t_bound.min(precision as u64)) {
        if spec.level % ell == 0 {
            continue;
        }
        let image = t_op(ell, e, spec.level)?;
        let expected = scale_int(ell as i64 + 1, &e.truncate(image.precision())?)?;
        checks.push(EigenCheck {
            operator: CheckedOperator::Hecke(ell),
            eigenvalue: ell + 1,
            compared_precision: image.precision(),
            pass: image == expected,
        });
    }
    for (&p, &delta) in &spec.deltas {
        if (p as usize) > precision {
            continue;
        }
        let image = u_op(p, e)?;
        let expected = scale_int(delta as i64, &e.truncate(image.precision())?)?;
        checks.push(EigenCheck {
            operator: CheckedOperator::AtkinU(p),
            eigenvalue: delta,
            compared_precision: image.precision(),
            pass: image == expected,
        });
    }
    if checks.is_empty() {
        return Err(EisensteinError::InsufficientPrecision {
            required: 2,
            actual: precision,
        });
    }
    Ok(EigenReport { checks })
}

/// Matrix of U_r on the plane spanned by (g, B_r g), assembled from the
/// operator action: columns are the coordinates of U_r(g) and U_r(B_r g).
///
/// Requires g normalized and precision >= r^2 so both coordinates can be
/// read off (the basis is triangular at indices 1 and r). The images are
/// checked to actually lie in the plane; anything else errors.
pub fn u_matrix_on_span(g: &QExpansion, r: u64) -> Result<[[BigRational; 2]; 2], EisensteinError> {
    let r_us = r as usize;
    if g.precision() < r_us * r_us {
        return Err(EisensteinError::InsufficientPrecision {
            required: r_us * r_us,
            actual: g.precision(),
        });
    }
    if !g.coeff(1).is_one() {
        return Err(EisensteinError::UnnormalizedInput);
    }
    let b = b_op(r, g);
    let images = [u_op(r, g)?, u_op(r, &b)?];
    let mut matrix = [
        [BigRational::zero(), BigRational::zero()],
        [BigRational::zero(), BigRational::zero()],
    ];
    for (col, image) in images.iter().enumerate() {
        let window = image.precision().min(g.precision());
        // alpha * g + beta * B_r(g): index 1 sees only g, index r adds beta.
        let alpha = image.coeff(1).clone();
        let beta = image.coeff(r_us) - &alpha * g.coeff(r_us);
        let reconstructed = crate::series::add(
            &scale(&alpha, &g.truncate(window)?)?,
            &scale(&beta, &b.truncate(window)?)?,
        )?;
        let truncated = image.truncate(window)?;
        if reconstructed != truncated {
            let bad = (0..=window)
                .find(|&n| reconstructed.coeff(n) != truncated.coeff(n))
                .unwrap_or(0);
            return Err(EisensteinError::SpanViolated { index: bad });
        }
        matrix[0][col] = alpha;
        matrix[1][col] = beta;
    }
    Ok(matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn spec(level: u64, deltas: &[(u64, u64)]) -> EisensteinSpec {
        EisensteinSpec::new(level, deltas.iter().copied().collect()).unwrap()
    }

    #[test]
    fn e_series_expansion() {
        let e = e_series(3);
        assert_eq!(e.coeff(0), &rat(-1, 24));
        assert_eq!(e.coeff(1), &rat(1, 1));
        assert_eq!(e.coeff(2), &rat(3, 1));
        assert_eq!(e.coeff(3), &rat(4, 1));
    }

    #[test]
    fn e_is_hecke_eigenfunction() {
        // T_5 e = 6 e, compared down to the reduced window
        let e = e_series(25);
        let t = t_op(5, &e, 1).unwrap();
        assert_eq!(t, scale_int(6, &e_series(5)).unwrap());
    }

    #[test]
    fn spec_validation() {
        assert!(EisensteinSpec::new(12, [(2, 1), (3, 1)].into_iter().collect()).is_err());
        assert!(EisensteinSpec::new(1, BTreeMap::new()).is_err());
        assert!(matches!(
            EisensteinSpec::new(14, [(2, 2), (7, 7)].into_iter().collect()),
            Err(EisensteinError::NoUnitDelta)
        ));
        assert!(matches!(
            EisensteinSpec::new(14, [(2, 3), (7, 1)].into_iter().collect()),
            Err(EisensteinError::InvalidDelta { prime: 2, delta: 3 })
        ));
        assert!(matches!(
            EisensteinSpec::new(14, [(2, 1)].into_iter().collect()),
            Err(EisensteinError::DeltaSetMismatch { level: 14 })
        ));
    }

    #[test]
    fn raise_level_coefficients_at_r() {
        let e = e_series(30);
        let claim = rat(12, 1);
        let one = raise_level(&e, 11, &claim, EigenRaiseVariant::EigenvalueOne).unwrap();
        assert_eq!(one.coeff(11), &rat(1, 1));
        let r = raise_level(&e, 11, &claim, EigenRaiseVariant::EigenvalueR).unwrap();
        assert_eq!(r.coeff(11), &rat(11, 1));
        // other prime coefficients untouched
        for ell in [2usize, 3, 5, 7, 13] {
            assert_eq!(one.coeff(ell), e.coeff(ell));
            assert_eq!(r.coeff(ell), e.coeff(ell));
        }
        assert!(matches!(
            raise_level(&e, 11, &rat(5, 1), EigenRaiseVariant::EigenvalueOne),
            Err(EisensteinError::EigenvalueMismatch { prime: 11 })
        ));
        let unnormalized = QExpansion::from_integers(&[0, 2, 3]);
        assert!(matches!(
            raise_level(
                &unnormalized,
                2,
                &rat(3, 1),
                EigenRaiseVariant::EigenvalueOne
            ),
            Err(EisensteinError::UnnormalizedInput)
        ));
    }

    #[test]
    fn raised_series_are_u_eigenvectors() {
        let e = e_series(60);
        for r in [2u64, 3, 5] {
            let claim = rat(r as i64 + 1, 1);
            for (variant, eigenvalue) in [
                (EigenRaiseVariant::EigenvalueOne, 1i64),
                (EigenRaiseVariant::EigenvalueR, r as i64),
            ] {
                let raised = raise_level(&e, r, &claim, variant).unwrap();
                let image = u_op(r, &raised).unwrap();
                let expected =
                    scale_int(eigenvalue, &raised.truncate(image.precision()).unwrap()).unwrap();
                assert_eq!(image, expected, "U_{} eigencheck failed", r);
            }
        }
    }

    #[test]
    fn build_level_11() {
        let s = spec(11, &[(11, 1)]);
        let e = build_e_spec(&s, 12).unwrap();
        assert_eq!(e.coeff(0), &rat(5, 12));
        assert_eq!(e.coeff(1), &rat(1, 1));
        assert_eq!(e.coeff(2), &rat(3, 1));
        assert_eq!(e.coeff(3), &rat(4, 1));
        assert_eq!(e.coeff(11), &rat(1, 1));
    }

    #[test]
    fn build_level_14() {
        let s = spec(14, &[(2, 1), (7, 7)]);
        let e = build_e_spec(&s, 20).unwrap();
        assert_eq!(e.coeff(0), &rat(0, 1));
        assert_eq!(e.coeff(2), &rat(1, 1));
        assert_eq!(e.coeff(7), &rat(7, 1));
        assert_eq!(e.coeff(3), &rat(4, 1));
    }

    #[test]
    fn build_level_26() {
        let s = spec(26, &[(2, 1), (13, 13)]);
        let e = build_e_spec(&s, 30).unwrap();
        for ell in [3usize, 5, 7, 11] {
            assert_eq!(e.coeff(ell), &rat(ell as i64 + 1, 1), "a_{}", ell);
        }
        assert_eq!(e.coeff(2), &rat(1, 1));
        assert_eq!(e.coeff(13), &rat(13, 1));
    }

    #[test]
    fn closed_form_matches_examples() {
        let s11 = spec(11, &[(11, 1)]);
        assert_eq!(closed_form_coeff(&s11, 22), rat(3, 1));
        assert_eq!(closed_form_coeff(&s11, 1), rat(1, 1));
        let s14 = spec(14, &[(2, 1), (7, 7)]);
        assert_eq!(closed_form_coeff(&s14, 28), rat(7, 1));
        assert_eq!(closed_form_coeff(&s14, 1), rat(1, 1));
        assert_eq!(closed_form_coeff(&s14, 0), rat(0, 1));
        assert_eq!(closed_form_coeff(&s11, 0), rat(5, 12));
    }

    #[test]
    fn construction_agrees_with_closed_form() {
        for (level, deltas) in [
            (11u64, alloc::vec![(11u64, 1u64)]),
            (14, alloc::vec![(2, 1), (7, 7)]),
            (15, alloc::vec![(3, 3), (5, 1)]),
            (26, alloc::vec![(2, 1), (13, 13)]),
            (30, alloc::vec![(2, 1), (3, 3), (5, 1)]),
        ] {
            let s = spec(level, &deltas);
            let e = build_e_spec(&s, 120).unwrap();
            for n in 0..=120 {
                assert_eq!(e.coeff(n), &closed_form_coeff(&s, n), "N={} n={}", level, n);
            }
        }
    }

    #[test]
    fn raise_order_is_irrelevant() {
        let s = spec(30, &[(2, 1), (3, 3), (5, 1)]);
        let reference = build_e_spec(&s, 40).unwrap();
        let orders: [&[u64]; 5] = [&[2, 5, 3], &[5, 2, 3], &[5, 3, 2], &[3, 2, 5], &[3, 5, 2]];
        for order in orders {
            assert_eq!(raise_in_order(&s, order, 40).unwrap(), reference);
        }
    }

    #[test]
    fn eigen_report_level_11_and_14() {
        let s11 = spec(11, &[(11, 1)]);
        let e11 = build_e_spec(&s11, 110).unwrap();
        let report = verify_eigen(&e11, &s11, 7).unwrap();
        assert!(report.all_pass());
        let hecke: Vec<u64> = report
            .checks
            .iter()
            .filter_map(|c| match c.operator {
                CheckedOperator::Hecke(l) => Some(l),
                _ => None,
            })
            .collect();
        assert_eq!(hecke, [2, 3, 5, 7]);

        let s14 = spec(14, &[(2, 1), (7, 7)]);
        let e14 = build_e_spec(&s14, 100).unwrap();
        let report = verify_eigen(&e14, &s14, 5).unwrap();
        assert!(report.all_pass());
        for check in &report.checks {
            match check.operator {
                CheckedOperator::AtkinU(2) => assert_eq!(check.eigenvalue, 1),
                CheckedOperator::AtkinU(7) => assert_eq!(check.eigenvalue, 7),
                _ => {}
            }
        }

        let tiny = build_e_spec(&s11, 1).unwrap();
        assert!(matches!(
            verify_eigen(&tiny, &s11, 20),
            Err(EisensteinError::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn u_r_characteristic_polynomial() {
        // On span(e, B_r e): trace 1 + r, determinant r, i.e. the
        // polynomial U^2 - (1+r)U + r.
        let e = e_series(200);
        for r in [2u64, 3, 5, 7] {
            let m = u_matrix_on_span(&e, r).unwrap();
            let trace = &m[0][0] + &m[1][1];
            let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
            assert_eq!(trace.to_integer().to_i64(), Some(1 + r as i64));
            assert_eq!(det.to_integer().to_i64(), Some(r as i64));
        }
    }
}
