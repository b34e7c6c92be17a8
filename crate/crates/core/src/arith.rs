//! Shared exact-arithmetic helpers: integer square roots, Kronecker symbols,
//! prime sieves, and `u64` factorisation by trial division.
//!
//! Everything here is deterministic and allocation-light; the heavier
//! number-theoretic routines (primality proofs, Pell machinery) live in
//! [`crate::search`] and [`crate::pell`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Floor of the non-negative square root. Panics if `n < 0`.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative value");
    n.sqrt()
}

/// Bitmask of the quadratic residues modulo 64; a square's low six bits must
/// land on a set bit, which rejects ~81% of non-squares without a big sqrt.
const SQUARE_MASK_64: u64 = {
    let mut mask = 0u64;
    let mut i = 0u64;
    while i < 64 {
        mask |= 1 << ((i * i) % 64);
        i += 1;
    }
    mask
};

/// Returns `Some(s)` with `s ≥ 0` and `s² = n` when `n` is a perfect square.
pub fn perfect_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let low = n.iter_u64_digits().next().unwrap_or(0);
    if SQUARE_MASK_64 & (1 << (low % 64)) == 0 {
        return None;
    }
    let s = n.sqrt();
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

/// Kronecker symbol `(a | n)` for `n > 0`.
///
/// Extends the Jacobi symbol to even `n` via `(a | 2) = 0` for even `a` and
/// `±1` according to `a mod 8` otherwise. Panics if `n ≤ 0` (the toolkit only
/// evaluates the symbol at positive moduli).
pub fn kronecker(a: &BigInt, n: &BigInt) -> i32 {
    assert!(n.is_positive(), "kronecker modulus must be positive");
    let mut a = a.clone();
    let mut n = n.clone();
    let mut result = 1i32;

    if n.is_even() {
        if a.is_even() {
            return 0;
        }
        let mut exp = 0u64;
        let two = BigInt::from(2);
        while n.is_even() {
            n /= &two;
            exp += 1;
        }
        if exp % 2 == 1 {
            let a_mod8 = a.mod_floor(&BigInt::from(8));
            if a_mod8 == BigInt::from(3) || a_mod8 == BigInt::from(5) {
                result = -result;
            }
        }
    }

    // n is now odd and positive: the classic Jacobi reduction.
    if a.is_negative() {
        a = -a;
        if n.mod_floor(&BigInt::from(4)) == BigInt::from(3) {
            result = -result;
        }
    }
    a = a.mod_floor(&n);
    while !a.is_zero() {
        while a.is_even() {
            a /= 2;
            let n_mod8 = n.mod_floor(&BigInt::from(8));
            if n_mod8 == BigInt::from(3) || n_mod8 == BigInt::from(5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&BigInt::from(4)) == BigInt::from(3)
            && n.mod_floor(&BigInt::from(4)) == BigInt::from(3)
        {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// All primes `≤ limit`, ascending (empty for `limit < 2`).
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut multiple = p * p;
            while multiple <= n {
                composite[multiple] = true;
                multiple += p;
            }
        }
    }
    primes
}

/// Square-free flags for `0..=limit`: `flags[n]` is true iff `n` is
/// square-free (with the convention `flags[0] = false`, `flags[1] = true`).
pub fn squarefree_flags(limit: u64) -> Vec<bool> {
    let n = limit as usize;
    let mut flags = vec![true; n + 1];
    flags[0] = false;
    let mut p = 2usize;
    while p.saturating_mul(p) <= n {
        let sq = p * p;
        let mut multiple = sq;
        while multiple <= n {
            flags[multiple] = false;
            multiple += sq;
        }
        p += 1;
    }
    flags
}

/// Prime factorisation of `n ≥ 1` by trial division, as ascending
/// `(prime, exponent)` pairs. Suitable for the desk-scale inputs of this
/// toolkit (content divisors, moduli of local computations).
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factor_u64 requires n >= 1");
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        factors.push((n, 1));
    }
    factors
}

/// Euler's totient of `n ≥ 1` via trial-division factorisation.
pub fn euler_phi(n: u64) -> u64 {
    factor_u64(n)
        .into_iter()
        .map(|(p, e)| (p - 1) * p.pow(e - 1))
        .product::<u64>()
        .max(1)
}

/// `a·b mod m` without overflow for `u64` operands.
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Reduce a `BigInt` into `[0, m)` as `u64` (requires `m ≤ u64::MAX`).
pub fn big_mod_u64(value: &BigInt, m: u64) -> u64 {
    use num_traits::ToPrimitive;
    value
        .mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue fits u64")
}
