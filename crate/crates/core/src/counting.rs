//! Counting potential families per content divisor.
//!
//! For a fixed embedding degree `k`, the primitive classes with content
//! divisor `d` correspond to residues `b mod d` with `d | Φ_k(b − 1)`. Their
//! number `N_d` admits a closed form. Write `p = 3` for `k ∈ {3, 6}` and
//! `p = 2` for `k = 4` (the unique prime dividing `k` that can divide `d`),
//! and factor `d = p^{u₀} · q₁^{u₁} ⋯ q_s^{u_s}` with the `q_i` distinct
//! primes different from `p`. Then
//!
//! * `N_d = 1` when `d ∈ {1, p}`;
//! * `N_d = 2^s` when every `q_i ≡ 1 (mod k)` and `u₀ ≤ 1`;
//! * `N_d = 0` otherwise.
//!
//! [`n_d_oracle`] counts the residues directly and is used to validate the
//! formula; [`candidate_total`] sums `N_d` over the Hasse-admissible range
//! `d ≤ 4h`, counting candidate `(t, r)` classes before the irreducibility
//! and fixed-divisor filters.

use crate::arith::factor_u64;
use crate::families::EmbeddingDegree;

/// The special prime attached to `k`: the only prime dividing `k` that can
/// divide a content divisor (`3` for `k ∈ {3, 6}`, `2` for `k = 4`).
pub fn special_prime(k: EmbeddingDegree) -> u64 {
    match k {
        EmbeddingDegree::K3 | EmbeddingDegree::K6 => 3,
        EmbeddingDegree::K4 => 2,
    }
}

/// Closed-form number of primitive classes with content divisor `d ≥ 1`.
pub fn n_d_formula(k: EmbeddingDegree, d: u64) -> u64 {
    assert!(d >= 1, "content divisor must be positive");
    let p = special_prime(k);
    if d == 1 || d == p {
        return 1;
    }
    let k_val = k.value();
    let mut s = 0u32;
    for (prime, exponent) in factor_u64(d) {
        if prime == p {
            if exponent > 1 {
                return 0;
            }
        } else if prime % k_val == 1 {
            s += 1;
        } else {
            return 0;
        }
    }
    1u64 << s
}

/// Brute-force oracle: counts residues `b ∈ [0, d)` with
/// `Φ_k(b − 1) ≡ 0 (mod d)`.
pub fn n_d_oracle(k: EmbeddingDegree, d: u64) -> u64 {
    assert!(d >= 1, "content divisor must be positive");
    let eps = k.epsilon() as u128;
    let d_wide = d as u128;
    let mut count = 0;
    for b in 0..d_wide {
        // Φ_k(b − 1) = b² − ε·b + ε, evaluated mod d without signed overflow:
        // add ε·d before subtracting so every term stays non-negative.
        let value = (b * b + eps * d_wide - eps * (b % d_wide) + eps) % d_wide;
        if value == 0 {
            count += 1;
        }
    }
    count
}

/// Sum of `N_d` over the Hasse-admissible divisors `1 ≤ d ≤ 4h`: the number
/// of candidate `(t, r)` classes available to cofactors up to `h` before the
/// field-polynomial filters.
pub fn candidate_total(k: EmbeddingDegree, h: u64) -> u64 {
    assert!(h >= 1, "cofactor must be positive");
    (1..=4 * h).map(|d| n_d_formula(k, d)).sum()
}
