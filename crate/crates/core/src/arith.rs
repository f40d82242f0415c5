//! Integer plumbing shared by the rest of the crate: primality testing,
//! trial-division factoring, sieves, and modular arithmetic helpers.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Modular exponentiation `base^exp mod m` for `m >= 1`.
pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    base %= m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo a prime `p`, via Fermat.
///
/// Panics if `a ≡ 0 mod p`.
pub fn mod_inv(a: u64, p: u64) -> u64 {
    let a = a % p;
    assert!(a != 0, "attempted to invert 0 mod {}", p);
    mod_pow(a, p - 2, p)
}

/// Deterministic Miller-Rabin for `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // n > 37, odd, not divisible by the witnesses below.
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    // This witness set is deterministic for all u64.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin on a positive `BigInt` with the first twelve prime
/// witnesses. Deterministic below 3.3 * 10^24, which covers every
/// discriminant this crate is asked to factor at desk scale.
pub fn is_prime_bigint(n: &BigInt) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime(small);
    }
    if n.is_negative() || n.is_even() {
        return false;
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let mut d = n_minus_1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let a = BigInt::from(a);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigInt::from(2u32), n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes in `[2, bound]` by sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = alloc::vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut q = p * p;
            while q <= n {
                composite[q] = true;
                q += p;
            }
        }
    }
    primes
}

/// Factorization of `n >= 1` as (prime, exponent) pairs, ascending.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factor_u64 requires n >= 1");
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0u32;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_square_free(n: u64) -> bool {
    n >= 1 && factor_u64(n).iter().all(|&(_, e)| e == 1)
}

/// p-adic valuation of `n >= 1`.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    assert!(n >= 1 && p >= 2);
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

/// Factor `|n|` by trial division up to 10^6 and a primality test on the
/// cofactor. Returns `Err(cofactor)` if a composite cofactor survives.
pub fn factor_bigint(n: &BigInt) -> Result<Vec<(BigInt, u32)>, BigInt> {
    let mut m = n.abs();
    assert!(!m.is_zero(), "factor_bigint requires nonzero input");
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let mut d = 2u64;
    while d <= 1_000_000 {
        let db = BigInt::from(d);
        if (&db * &db) > m {
            break;
        }
        if m.mod_floor(&db).is_zero() {
            let mut e = 0u32;
            while m.mod_floor(&db).is_zero() {
                m /= &db;
                e += 1;
            }
            out.push((db, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        if is_prime_bigint(&m) {
            out.push((m, 1));
        } else {
            return Err(m);
        }
    }
    Ok(out)
}

/// All positive divisors of the number with the given factorization.
pub fn divisors(factors: &[(BigInt, u32)]) -> Vec<BigInt> {
    let mut out = alloc::vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        for d in &out {
            let mut acc = d.clone();
            next.push(acc.clone());
            for _ in 0..*e {
                acc *= p;
                next.push(acc.clone());
            }
        }
        out = next;
    }
    out
}

/// Legendre symbol (a/p) for an odd prime p, as -1, 0, or 1.
pub fn legendre(a: u64, p: u64) -> i32 {
    debug_assert!(p > 2 && is_prime(p));
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let e = mod_pow(a, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        -1
    }
}
