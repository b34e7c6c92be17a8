//! Density statistics for a family: local solution counts modulo prime
//! squares, the multiplicative ρ function, admissible residue classes for the
//! discriminant character, truncated Euler products, and an empirical census
//! of curve instances.
//!
//! Everything is driven by the completed-square form of the CM equation,
//! `Δ(x) = (w0·x + w1)² + w2 = u·(4q(x) − t(x)²)`. A prime `p` interacts with
//! a family through three local quantities:
//!
//! * `C_p`: the number of `n ∈ [0, p²)` with `(q(n)·r(n))²·Δ(n) ≡ 0 (mod p²)`
//!   — the local obstruction density for the joint primality/CM condition;
//! * `ρ(m)`: the number of `β ∈ [0, m²)` with `m² | Δ(β)` and
//!   `q(β)·r(β)` a unit modulo every prime of `m`;
//! * the admissible classes: residues `c` modulo `8·w2′` for which `−w2` is a
//!   square modulo primes `p ≡ c`, which is where `ρ(p) = 2` lives.
//!
//! The truncated products `S1 = Π (1 − C_p/p²)(1 − 1/p)⁻²` and
//! `S2 = Π (1 − 1/p)(1 + f(p)/p)` with `f(p) = ρ(p)(1 − 1/p)²(1 − C_p/p²)⁻¹`
//! combine into the density constant `S0 = (√u / (4|w0|))·S1·S2`. All
//! accumulation is exact big-integer arithmetic; decimals are rendered only
//! at output, truncated at a stated precision.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{big_mod_u64, euler_phi, factor_u64, isqrt, kronecker, sieve_primes};
use crate::families::Family;
use crate::intpoly::{LinPoly, QuadPoly};
use crate::pell::{self, PellError, PellInstance};
use crate::search::{self, SearchError};

/// Errors from the stats layer.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    /// `w2 = 0`: the discriminant degenerates to a perfect square times `u`
    /// and the character machinery does not apply.
    #[error("degenerate discriminant")]
    DegenerateDiscriminant,
    #[error(transparent)]
    Pell(#[from] PellError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// The discriminant polynomial `Δ(x) = (w0·x + w1)² + w2`, identically equal
/// to `u·(4q(x) − t(x)²)`.
pub fn delta_poly(family: &Family) -> Result<QuadPoly, StatsError> {
    Ok(pell::reduce(family)?.delta_poly())
}

/// Reduced coefficients of a quadratic modulo `n`.
fn reduce_quad(poly: &QuadPoly, n: u64) -> (u64, u64, u64) {
    (
        big_mod_u64(&poly.c2, n),
        big_mod_u64(&poly.c1, n),
        big_mod_u64(&poly.c0, n),
    )
}

/// Horner evaluation of reduced quadratic coefficients at `x` modulo `n`.
fn eval_quad(c: (u64, u64, u64), x: u64, n: u64) -> u64 {
    let n = n as u128;
    let mut acc = c.0 as u128;
    acc = (acc * x as u128 + c.1 as u128) % n;
    acc = (acc * x as u128 + c.2 as u128) % n;
    acc as u64
}

/// Evaluation of a reduced linear polynomial at `x` modulo `n`.
fn eval_lin(c: (u64, u64), x: u64, n: u64) -> u64 {
    ((c.0 as u128 * x as u128 + c.1 as u128) % n as u128) as u64
}

/// Modular inverse for prime modulus, by extended Euclid.
fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let quotient = r / new_r;
        t -= quotient * new_t;
        std::mem::swap(&mut t, &mut new_t);
        r -= quotient * new_r;
        std::mem::swap(&mut r, &mut new_r);
    }
    debug_assert_eq!(r, 1, "inverse of a unit");
    t.rem_euclid(p as i128) as u64
}

/// Shared local-count machinery: the family's polynomials plus `Δ` and `Δ′`.
struct LocalCounter {
    q: QuadPoly,
    r: QuadPoly,
    delta: QuadPoly,
    delta_prime: LinPoly,
}

impl LocalCounter {
    fn new(family: &Family) -> Result<LocalCounter, StatsError> {
        let instance = pell::reduce(family)?;
        Ok(LocalCounter::from_instance(family, &instance))
    }

    fn from_instance(family: &Family, instance: &PellInstance) -> LocalCounter {
        let delta = instance.delta_poly();
        LocalCounter {
            q: family.q().clone(),
            r: family.r().clone(),
            delta_prime: delta.derivative(),
            delta,
        }
    }

    /// `(C_p, ρ(p))` in one `O(p)` pass.
    ///
    /// Classification per base residue `β ∈ [0, p)`:
    /// * `p | q(β)` or `p | r(β)`: every lift `n ≡ β (mod p)` satisfies
    ///   `p² | (q·r)²`, so all `p` lifts count toward `C_p`;
    /// * otherwise `p² | Δ(n)` is required. If `p ∤ Δ(β)` no lift works; if
    ///   `Δ′(β) ≢ 0 (mod p)` exactly one lift works (Hensel); if
    ///   `Δ′(β) ≡ 0 (mod p)` then `Δ(β + jp) ≡ Δ(β) (mod p²)` for every `j`,
    ///   so all `p` lifts work precisely when `p² | Δ(β)`.
    ///
    /// This is the defining count itself, merely organized per base residue,
    /// so it is exact for every prime including 2 and the exceptional ones.
    fn counts(&self, p: u64) -> (u64, u64) {
        let p2 = p.checked_mul(p).expect("p² fits in u64");
        let q = reduce_quad(&self.q, p);
        let r = reduce_quad(&self.r, p);
        let delta = reduce_quad(&self.delta, p2);
        let delta_prime = (
            big_mod_u64(&self.delta_prime.a, p),
            big_mod_u64(&self.delta_prime.b, p),
        );
        let mut c = 0u64;
        let mut rho = 0u64;
        for beta in 0..p {
            if eval_quad(q, beta, p) == 0 || eval_quad(r, beta, p) == 0 {
                c += p;
                continue;
            }
            let dv = eval_quad(delta, beta, p2);
            if dv % p != 0 {
                continue;
            }
            if eval_lin(delta_prime, beta, p) != 0 {
                c += 1;
                rho += 1;
            } else if dv == 0 {
                c += p;
                rho += p;
            }
        }
        (c, rho)
    }

    /// Number of `β ∈ [0, p^{2e})` with `p^{2e} | Δ(β)` and `p ∤ q(β)·r(β)`,
    /// by level-at-a-time root lifting from modulus `p` upward.
    fn rho_prime_power(&self, p: u64, e: u32) -> u64 {
        let levels = 2 * e;
        let modulus = p
            .checked_pow(levels)
            .expect("prime-power modulus fits in u64");
        let q = reduce_quad(&self.q, p);
        let r = reduce_quad(&self.r, p);
        let delta = reduce_quad(&self.delta, modulus);
        let delta_prime = (
            big_mod_u64(&self.delta_prime.a, p),
            big_mod_u64(&self.delta_prime.b, p),
        );
        let mut roots: Vec<u64> = (0..p)
            .filter(|&beta| {
                eval_quad(delta, beta, modulus) % p == 0
                    && eval_quad(q, beta, p) != 0
                    && eval_quad(r, beta, p) != 0
            })
            .collect();
        let mut level_modulus = p;
        for _ in 1..levels {
            let next = level_modulus * p;
            let mut lifted = Vec::new();
            for &beta in &roots {
                let dv = eval_quad(delta, beta, modulus) % next;
                debug_assert_eq!(dv % level_modulus, 0, "lifting invariant");
                let slope = eval_lin(delta_prime, beta % p, p);
                if slope != 0 {
                    // Unique continuation: β + c·p^j with
                    // c ≡ −(Δ(β)/p^j)·Δ′(β)⁻¹ (mod p).
                    let residue = (dv / level_modulus) % p;
                    let c = (residue * inv_mod(slope, p)) % p;
                    let c = (p - c) % p;
                    lifted.push(beta + c * level_modulus);
                } else if dv == 0 {
                    for c in 0..p {
                        lifted.push(beta + c * level_modulus);
                    }
                }
            }
            roots = lifted;
            level_modulus = next;
        }
        roots.len() as u64
    }
}

/// `C_p`: the number of `n ∈ [0, p²)` with `(q(n)·r(n))²·Δ(n) ≡ 0 (mod p²)`.
pub fn c_p(family: &Family, p: u64) -> u64 {
    assert!(
        search::is_prime(&BigInt::from(p)).passed(),
        "C_p requires a prime modulus"
    );
    LocalCounter::new(family)
        .expect("family lies off the Hasse boundary")
        .counts(p)
        .0
}

/// `ρ(m)`: the number of `β ∈ [0, m²)` with `m² | Δ(β)` and `q(β)·r(β)`
/// coprime to `m`. Multiplicative in `m`; computed prime power by prime
/// power via root lifting.
pub fn rho_fn(family: &Family, m: u64) -> u64 {
    assert!(m >= 1, "rho is defined for positive moduli");
    if m == 1 {
        return 1;
    }
    let counter = LocalCounter::new(family).expect("family lies off the Hasse boundary");
    factor_u64(m)
        .into_iter()
        .map(|(p, e)| counter.rho_prime_power(p, e))
        .product()
}

/// The residue classes modulo `8·w2′` singling out the primes with
/// `ρ(p) = 2`, where `w2′` is the product of the odd primes dividing the
/// non-square part of `w2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleClasses {
    /// `8·w2′`.
    pub modulus: u64,
    /// Residues `c` coprime to the modulus with `kronecker(s, c) = +1`.
    pub classes: Vec<u64>,
    /// `w2′`: the odd conductor part.
    pub odd_conductor: u64,
    /// `s`: the signed square-free part of `−w2` (the character's core).
    /// `s = 1` makes the character trivial and every coprime residue
    /// admissible.
    pub character: i64,
}

impl AdmissibleClasses {
    /// `ℓ`, the number of admissible classes.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Whether a prime (not dividing the modulus) falls in an admissible
    /// class.
    pub fn admits(&self, p: u64) -> bool {
        self.classes.contains(&(p % self.modulus))
    }
}

/// Computes the admissible classes for a family.
///
/// For odd primes `p` not dividing `2·u·w2`, `Δ(β) ≡ 0 (mod p)` is solvable
/// exactly when `−w2` is a square modulo `p`, and then it has two simple
/// roots; so `ρ(p) = 1 + kronecker(−w2, p)`, and the condition
/// `kronecker(−w2, p) = +1` depends only on `p` modulo `8·w2′`. The class
/// count is `ℓ = 2·φ(w2′)` whenever the square-free part `s` of `−w2` is not
/// 1; for `s = 1` (i.e. `−w2` a perfect square — which does occur) the
/// character is trivial and all `4·φ(w2′)` coprime residues are admissible.
pub fn admissible_classes(family: &Family) -> Result<AdmissibleClasses, StatsError> {
    let instance = pell::reduce(family)?;
    if instance.w2().is_zero() {
        return Err(StatsError::DegenerateDiscriminant);
    }
    let minus_w2 = -instance.w2();
    let (square_free, _) = search::squarefree_part(&minus_w2.abs())?;
    let signed_core = if minus_w2.is_negative() {
        -square_free
    } else {
        square_free
    };
    let odd_conductor = {
        let abs = signed_core.abs();
        let odd = if abs.is_even() { abs / 2 } else { abs };
        odd.to_u64().expect("odd conductor fits in u64")
    };
    let modulus = odd_conductor
        .checked_mul(8)
        .expect("class modulus fits in u64");
    let classes: Vec<u64> = (1..modulus)
        .filter(|&c| {
            num_integer::gcd(c, modulus) == 1
                && kronecker(&signed_core, &BigInt::from(c)) == 1
        })
        .collect();
    let expected = if signed_core.is_one() {
        4 * euler_phi(odd_conductor)
    } else {
        2 * euler_phi(odd_conductor)
    };
    debug_assert_eq!(classes.len() as u64, expected, "class-count identity");
    Ok(AdmissibleClasses {
        modulus,
        classes,
        odd_conductor,
        character: signed_core.to_i64().expect("character core fits in i64"),
    })
}

/// Truncated Euler products for a family, with exact rational accumulation
/// rendered to [`DECIMAL_DIGITS`] decimal places (truncated, not rounded).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EulerConstants {
    /// Prime bound `P` of the truncation.
    pub truncation: u64,
    /// `S1 = Π_{p ≤ P} (1 − C_p/p²)(1 − 1/p)⁻²`.
    pub s1: String,
    /// `S2 = Π_{p ≤ P} (1 − 1/p)(1 + f(p)/p)`.
    pub s2: String,
    /// `S0 = (√u / (4|w0|))·S1·S2`.
    pub s0: String,
    /// `S0` truncated at `P/2`, for convergence reporting.
    pub s0_at_half: String,
    /// `|S0(P) − S0(P/2)|`.
    pub delta: f64,
    /// The first prime with `C_p = p²`, when one exists: the local condition
    /// is unsatisfiable, no curve instances can exist, and all products are
    /// reported as zero.
    pub obstructed_at: Option<u64>,
}

/// Output precision of the decimal renderings.
pub const DECIMAL_DIGITS: usize = 50;

/// Truncating decimal rendering of the non-negative rational `num/den`.
fn decimal_string(num: &BigInt, den: &BigInt, digits: usize) -> String {
    debug_assert!(!num.is_negative() && den.is_positive());
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = num * &scale / den;
    let whole = &scaled / &scale;
    let frac = &scaled % &scale;
    format!("{whole}.{frac:0>width$}", width = digits)
}

/// Truncating decimal rendering of `√inner · num/den` (all non-negative).
fn sqrt_decimal_string(inner: &BigInt, num: &BigInt, den: &BigInt, digits: usize) -> String {
    debug_assert!(inner.is_positive() && !num.is_negative() && den.is_positive());
    let scale = BigInt::from(10u32).pow(digits as u32);
    // floor(√inner · num·10^d / den) = floor(isqrt(inner·(num·10^d)²) / den).
    let scaled_num = num * &scale;
    let scaled = isqrt(&(inner * &scaled_num * &scaled_num)) / den;
    let whole = &scaled / &scale;
    let frac = &scaled % &scale;
    format!("{whole}.{frac:0>width$}", width = digits)
}

/// Computes the truncated Euler products `S1`, `S2`, and the combined
/// constant `S0` for primes up to `truncation` (which must be at least 3).
///
/// Factors per prime, kept as exact integer ratios:
///
/// ```text
///   S1 factor:  (p² − C_p) / (p − 1)²
///   S2 factor:  (p − 1)·(p·(p² − C_p) + ρ(p)·(p − 1)²) / (p²·(p² − C_p))
/// ```
///
/// A prime with `C_p = p²` makes the local condition unsatisfiable; the
/// family is reported as obstructed with zero products.
pub fn euler_constants(family: &Family, truncation: u64) -> Result<EulerConstants, StatsError> {
    assert!(truncation >= 3, "truncation bound must be at least 3");
    let counter = LocalCounter::new(family)?;
    let instance = pell::reduce(family)?;
    let sqrt_inner = instance.u().clone();
    let scale_den = BigInt::from(4) * instance.w0().abs();

    let primes = sieve_primes(truncation);
    let half = truncation / 2;
    let mut s1_num = BigInt::one();
    let mut s1_den = BigInt::one();
    let mut s2_num = BigInt::one();
    let mut s2_den = BigInt::one();
    let mut half_snapshot: Option<(BigInt, BigInt, BigInt, BigInt)> = None;
    let mut obstructed_at = None;
    for &p in &primes {
        if p > half && half_snapshot.is_none() {
            half_snapshot = Some((
                s1_num.clone(),
                s1_den.clone(),
                s2_num.clone(),
                s2_den.clone(),
            ));
        }
        let (c, rho) = counter.counts(p);
        let p = p as u128;
        let p2 = p * p;
        let c = c as u128;
        let rho = rho as u128;
        debug_assert!(c <= p2);
        if c == p2 {
            obstructed_at = Some(p as u64);
            break;
        }
        let pm1 = p - 1;
        s1_num *= BigInt::from(p2 - c);
        s1_den *= BigInt::from(pm1 * pm1);
        s2_num *= BigInt::from(pm1) * BigInt::from(p * (p2 - c) + rho * pm1 * pm1);
        s2_den *= BigInt::from(p2) * BigInt::from(p2 - c);
    }

    if let Some(p) = obstructed_at {
        let zero = decimal_string(&BigInt::zero(), &BigInt::one(), DECIMAL_DIGITS);
        return Ok(EulerConstants {
            truncation,
            s1: zero.clone(),
            s2: zero.clone(),
            s0: zero.clone(),
            s0_at_half: zero,
            delta: 0.0,
            obstructed_at: Some(p),
        });
    }

    let (h1n, h1d, h2n, h2d) =
        half_snapshot.unwrap_or_else(|| (s1_num.clone(), s1_den.clone(), s2_num.clone(), s2_den.clone()));
    let render_s0 = |an: &BigInt, ad: &BigInt, bn: &BigInt, bd: &BigInt| -> String {
        let mut num = an * bn;
        let mut den = ad * bd * &scale_den;
        let g = num.gcd(&den);
        num /= &g;
        den /= &g;
        sqrt_decimal_string(&sqrt_inner, &num, &den, DECIMAL_DIGITS)
    };
    let s0 = render_s0(&s1_num, &s1_den, &s2_num, &s2_den);
    let s0_at_half = render_s0(&h1n, &h1d, &h2n, &h2d);
    let delta = (s0.parse::<f64>().expect("decimal parses")
        - s0_at_half.parse::<f64>().expect("decimal parses"))
    .abs();
    Ok(EulerConstants {
        truncation,
        s1: decimal_string(&s1_num, &s1_den, DECIMAL_DIGITS),
        s2: decimal_string(&s2_num, &s2_den, DECIMAL_DIGITS),
        s0,
        s0_at_half,
        delta,
        obstructed_at: None,
    })
}

/// Result of the empirical census `E(z)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    /// Discriminant bound.
    pub z: u64,
    /// Seed range half-width: seeds `x ∈ [−x_max, x_max]` are examined.
    pub x_max: i64,
    /// Number of distinct curve instances (deduplicated by `(q, r, t)`).
    pub count: u64,
    /// Seeds whose CM value could not be classified (always zero under the
    /// bounded classifier; reported for visibility).
    pub indeterminate: u64,
}

/// Counts the curve instances of a family with seeds in `[−x_max, x_max]`
/// and CM discriminant value at most `z`, deduplicated by `(q, r, t)`.
pub fn census(family: &Family, z: u64, x_max: i64) -> CensusReport {
    census_with_jobs(family, z, x_max, 1)
}

/// [`census`] with a worker count for the underlying sweep.
pub fn census_with_jobs(family: &Family, z: u64, x_max: i64, jobs: usize) -> CensusReport {
    assert!(x_max >= 0, "census seed range must be non-negative");
    let report = search::sweep_with_jobs(family, -x_max, x_max, z, jobs);
    let distinct: BTreeSet<(BigInt, BigInt, BigInt)> = report
        .instances
        .into_iter()
        .map(|i| (i.q, i.r, i.t))
        .collect();
    CensusReport {
        z,
        x_max,
        count: distinct.len() as u64,
        indeterminate: report.indeterminate_seeds.len() as u64,
    }
}

/// Bundled density data for one family, as emitted by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    pub family: Family,
    /// `u`, `w0`, `w1`, `w2` as decimal strings.
    pub u: String,
    pub w0: String,
    pub w1: String,
    pub w2: String,
    /// `Δ` coefficients, ascending: `[c0, c1, c2]`.
    pub delta: Vec<String>,
    /// `(p, C_p)` for the sampled primes.
    pub c: Vec<(u64, u64)>,
    /// `(m, ρ(m))` for the sampled moduli.
    pub rho: Vec<(u64, u64)>,
    pub admissible: AdmissibleClasses,
    pub euler: EulerConstants,
}

/// Assembles a [`DensityProfile`]: `C_p` for primes up to `c_bound`, `ρ(m)`
/// for `m` up to `rho_bound`, and Euler products truncated at `euler_bound`.
pub fn density_profile(
    family: &Family,
    c_bound: u64,
    rho_bound: u64,
    euler_bound: u64,
) -> Result<DensityProfile, StatsError> {
    let instance = pell::reduce(family)?;
    let counter = LocalCounter::from_instance(family, &instance);
    let delta = instance.delta_poly();
    let c = sieve_primes(c_bound)
        .into_iter()
        .map(|p| (p, counter.counts(p).0))
        .collect();
    let rho = (1..=rho_bound)
        .map(|m| (m, rho_fn(family, m)))
        .collect();
    Ok(DensityProfile {
        family: family.clone(),
        u: instance.u().to_string(),
        w0: instance.w0().to_string(),
        w1: instance.w1().to_string(),
        w2: instance.w2().to_string(),
        delta: vec![
            delta.c0.to_string(),
            delta.c1.to_string(),
            delta.c2.to_string(),
        ],
        c,
        rho,
        admissible: admissible_classes(family)?,
        euler: euler_constants(family, euler_bound)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{generate, EmbeddingDegree};

    fn family(k: EmbeddingDegree, h: u64, a: i64, b: i64) -> Family {
        Family::from_trace(k, h, LinPoly::new(a, b)).expect("valid trace")
    }

    fn k6h1() -> Family {
        family(EmbeddingDegree::K6, 1, -1, 1)
    }

    /// Brute-force `C_p` straight from the definition, for small `p`.
    fn c_p_brute(f: &Family, p: u64) -> u64 {
        let delta = delta_poly(f).unwrap();
        let p2 = p * p;
        let q = reduce_quad(f.q(), p2);
        let r = reduce_quad(f.r(), p2);
        let d = reduce_quad(&delta, p2);
        (0..p2)
            .filter(|&n| {
                let qr = (eval_quad(q, n, p2) as u128 * eval_quad(r, n, p2) as u128) % p2 as u128;
                let sq = (qr * qr) % p2 as u128;
                (sq * eval_quad(d, n, p2) as u128) % p2 as u128 == 0
            })
            .count() as u64
    }

    /// Brute-force `ρ(m)` straight from the definition, for small `m`.
    fn rho_brute(f: &Family, m: u64) -> u64 {
        let delta = delta_poly(f).unwrap();
        let m2 = m * m;
        let d = reduce_quad(&delta, m2);
        let prime_divisors: Vec<u64> = factor_u64(m).into_iter().map(|(p, _)| p).collect();
        (0..m2)
            .filter(|&beta| {
                if eval_quad(d, beta, m2) != 0 {
                    return false;
                }
                prime_divisors.iter().all(|&p| {
                    eval_quad(reduce_quad(f.q(), p), beta % p, p) != 0
                        && eval_quad(reduce_quad(f.r(), p), beta % p, p) != 0
                })
            })
            .count() as u64
    }

    /// Resultant of two quadratics.
    fn resultant(f: &QuadPoly, g: &QuadPoly) -> BigInt {
        let (a, b, c) = (&f.c2, &f.c1, &f.c0);
        let (d, e, k) = (&g.c2, &g.c1, &g.c0);
        let ak_cd = a * k - c * d;
        let ae_bd = a * e - b * d;
        let bk_ce = b * k - c * e;
        &ak_cd * &ak_cd - ae_bd * bk_ce
    }

    #[test]
    fn delta_poly_matches_worked_examples() {
        let inst = pell::reduce(&k6h1()).unwrap();
        assert_eq!(delta_poly(&k6h1()).unwrap(), QuadPoly::new(9, 6, 9));
        assert_eq!(
            (inst.w0(), inst.w1(), inst.w2(), inst.u()),
            (
                &BigInt::from(-3),
                &BigInt::from(-1),
                &BigInt::from(8),
                &BigInt::from(3)
            )
        );
        // Evaluation consistency with the D = 19 instance at x = 2.
        assert_eq!(
            delta_poly(&k6h1()).unwrap().eval(&BigInt::from(2)),
            BigInt::from(57)
        );
        assert_eq!(57, 3 * 19);

        // The classical h = 4 reduction: (15x + 7)² + 176.
        let d1 = family(EmbeddingDegree::K6, 4, -1, 1);
        assert_eq!(delta_poly(&d1).unwrap(), QuadPoly::new(225, 210, 225));
    }

    #[test]
    fn c_p_matches_examples_and_brute_force() {
        assert_eq!(c_p(&k6h1(), 5), 10);
        assert_eq!(c_p(&k6h1(), 7), 14);
        assert_eq!(c_p(&k6h1(), 2), 2);
        for p in [2u64, 3, 5, 7, 11, 13] {
            assert_eq!(c_p(&k6h1(), p), c_p_brute(&k6h1(), p), "p = {p}");
        }
        let d7 = family(EmbeddingDegree::K6, 4, -7, -1);
        for p in [2u64, 3, 5, 7, 11, 13] {
            assert_eq!(c_p(&d7, p), c_p_brute(&d7, p), "p = {p}");
        }
    }

    #[test]
    fn c_p_is_bounded_by_six_p() {
        for k in EmbeddingDegree::ALL {
            for fam in generate(k, 4).unwrap() {
                for p in sieve_primes(101) {
                    assert!(c_p(&fam, p) <= 6 * p, "{fam:?}, p = {p}");
                }
            }
        }
    }

    #[test]
    fn c_p_agrees_with_independent_root_counting() {
        // Independent implementation: count roots of q and r modulo p (each
        // base residue contributes p lifts), then lift the unit-Δ roots from
        // modulus p to p², Hensel-style. Valid once q and r share no root,
        // which the resultant filter guarantees.
        for k in EmbeddingDegree::ALL {
            for fam in generate(k, 4).unwrap() {
                let inst = pell::reduce(&fam).unwrap();
                let delta = inst.delta_poly();
                let exceptional = BigInt::from(2)
                    * inst.u()
                    * resultant(fam.q(), fam.r())
                    * resultant(fam.q(), &delta)
                    * resultant(fam.r(), &delta);
                assert!(!exceptional.is_zero());
                for p in sieve_primes(101) {
                    if big_mod_u64(&exceptional, p) == 0 {
                        continue;
                    }
                    let p2 = p * p;
                    let q = reduce_quad(fam.q(), p);
                    let r = reduce_quad(fam.r(), p);
                    let dl = reduce_quad(&delta, p2);
                    let dp = (
                        big_mod_u64(&delta.derivative().a, p),
                        big_mod_u64(&delta.derivative().b, p),
                    );
                    let n_q = (0..p).filter(|&b| eval_quad(q, b, p) == 0).count() as u64;
                    let n_r = (0..p).filter(|&b| eval_quad(r, b, p) == 0).count() as u64;
                    let mut lifted = 0u64;
                    for b in 0..p {
                        if eval_quad(q, b, p) == 0 || eval_quad(r, b, p) == 0 {
                            continue;
                        }
                        if eval_quad(dl, b, p2) % p != 0 {
                            continue;
                        }
                        if eval_lin(dp, b, p) != 0 {
                            lifted += 1;
                        } else if eval_quad(dl, b, p2) == 0 {
                            lifted += p;
                        }
                    }
                    assert_eq!(c_p(&fam, p), p * (n_q + n_r) + lifted, "{fam:?} p = {p}");
                }
            }
        }
    }

    #[test]
    fn rho_matches_examples_and_brute_force() {
        assert_eq!(rho_fn(&k6h1(), 1), 1);
        assert_eq!(rho_fn(&k6h1(), 11), 2);
        assert_eq!(rho_fn(&k6h1(), 2), 0);
        for m in 1u64..=30 {
            assert_eq!(rho_fn(&k6h1(), m), rho_brute(&k6h1(), m), "m = {m}");
        }
        let d7 = family(EmbeddingDegree::K6, 4, -7, -1);
        for m in 1u64..=30 {
            assert_eq!(rho_fn(&d7, m), rho_brute(&d7, m), "m = {m}");
        }
    }

    #[test]
    fn rho_is_multiplicative_and_stable_on_prime_powers() {
        let fam = k6h1();
        for m1 in 1u64..=30 {
            for m2 in 1u64..=30 {
                if m1 * m2 <= 30 && num_integer::gcd(m1, m2) == 1 {
                    assert_eq!(
                        rho_fn(&fam, m1 * m2),
                        rho_fn(&fam, m1) * rho_fn(&fam, m2),
                        "m1 = {m1}, m2 = {m2}"
                    );
                }
            }
        }
        // ρ(p^e) = ρ(p) for primes away from 2·u·w2.
        let inst = pell::reduce(&fam).unwrap();
        let bad = BigInt::from(2) * inst.u() * inst.w2();
        for p in sieve_primes(20) {
            if big_mod_u64(&bad, p) == 0 {
                continue;
            }
            for e in 2u32..=3 {
                assert_eq!(
                    rho_fn(&fam, p.pow(e)),
                    rho_fn(&fam, p),
                    "p = {p}, e = {e}"
                );
            }
        }
    }

    #[test]
    fn admissible_classes_match_the_worked_example() {
        let classes = admissible_classes(&k6h1()).unwrap();
        assert_eq!(classes.modulus, 8);
        assert_eq!(classes.classes, vec![1, 3]);
        assert_eq!(classes.odd_conductor, 1);
        assert_eq!(classes.character, -2);
        assert_eq!(classes.len(), 2);
        assert!(classes.admits(3) && classes.admits(11) && classes.admits(17));
        assert!(!classes.admits(5) && !classes.admits(7));
    }

    #[test]
    fn admissible_classes_census_holds_with_the_degenerate_carveout() {
        for k in EmbeddingDegree::ALL {
            for fam in generate(k, 4).unwrap() {
                let classes = admissible_classes(&fam).unwrap();
                let expected = if classes.character == 1 {
                    4 * euler_phi(classes.odd_conductor)
                } else {
                    2 * euler_phi(classes.odd_conductor)
                };
                assert_eq!(classes.len() as u64, expected, "{fam:?}");
            }
        }
        // A concrete trivial-character family: −w2 = 16 is a perfect square,
        // so every coprime class is admissible and ρ(p) = 2 at good primes.
        let d13 = family(EmbeddingDegree::K6, 4, -13, -2);
        let inst = pell::reduce(&d13).unwrap();
        assert_eq!(*inst.w2(), BigInt::from(-16));
        let classes = admissible_classes(&d13).unwrap();
        assert_eq!(classes.character, 1);
        assert_eq!(classes.len() as u64, 4 * euler_phi(classes.odd_conductor));
        // Good primes only: 2, 3, 13 divide 2·u·w2 = 2·39·(−16) and behave
        // differently (e.g. ρ(3) = 3 because 3 | w0 makes Δ ≡ 6x (mod 9),
        // which plateaus at β = 0).
        for p in [5u64, 7, 11, 23, 29] {
            assert_eq!(rho_fn(&d13, p), 2, "p = {p}");
        }
        assert_eq!(rho_fn(&d13, 3), 3);
    }

    #[test]
    fn admissible_classes_predict_rho_at_sampled_primes() {
        let fam = k6h1();
        let classes = admissible_classes(&fam).unwrap();
        let inst = pell::reduce(&fam).unwrap();
        let exceptional = BigInt::from(2) * inst.u() * inst.w2();
        for p in sieve_primes(500) {
            if big_mod_u64(&exceptional, p) == 0 {
                continue;
            }
            let rho = rho_fn(&fam, p);
            assert!(rho == 0 || rho == 2, "p = {p}");
            assert_eq!(rho == 2, classes.admits(p), "p = {p}");
        }
    }

    #[test]
    fn decimal_rendering_truncates() {
        assert_eq!(
            decimal_string(&BigInt::from(1), &BigInt::from(3), 10),
            "0.3333333333"
        );
        assert_eq!(
            decimal_string(&BigInt::from(22), &BigInt::from(7), 5),
            "3.14285"
        );
        assert_eq!(
            sqrt_decimal_string(&BigInt::from(2), &BigInt::one(), &BigInt::one(), 10),
            "1.4142135623"
        );
        assert_eq!(
            sqrt_decimal_string(&BigInt::from(4), &BigInt::from(3), &BigInt::from(2), 6),
            "3.000000"
        );
    }

    #[test]
    fn euler_constants_converge_on_the_reference_family() {
        let constants = euler_constants(&k6h1(), 2000).unwrap();
        assert!(constants.obstructed_at.is_none());
        let s0: f64 = constants.s0.parse().unwrap();
        assert!(s0 > 0.0 && s0 < 1.0, "S0 = {s0}");
        assert!(constants.delta < 1e-3, "delta = {}", constants.delta);
        // Tighter truncation changes the value only slightly.
        let coarse = euler_constants(&k6h1(), 1000).unwrap();
        let s0_coarse: f64 = coarse.s0.parse().unwrap();
        assert!((s0 - s0_coarse).abs() < 1e-3);
    }

    #[test]
    fn locally_obstructed_families_are_flagged() {
        // Some k = 4 families force 2 | q(x)·r(x) for every x, so C_2 = 4
        // and no curve instance can exist.
        let obstructed: Vec<Family> = generate(EmbeddingDegree::K4, 2)
            .unwrap()
            .into_iter()
            .filter(|f| f.pair_value_gcd() != BigInt::one())
            .collect();
        assert!(!obstructed.is_empty());
        for fam in obstructed {
            assert_eq!(c_p(&fam, 2), 4, "{fam:?}");
            let constants = euler_constants(&fam, 100).unwrap();
            assert_eq!(constants.obstructed_at, Some(2));
            let s0: f64 = constants.s0.parse().unwrap();
            assert_eq!(s0, 0.0);
            // And the sweep indeed finds nothing.
            assert!(search::sweep(&fam, -200, 200, 1000).instances.is_empty());
        }
    }

    #[test]
    fn census_matches_examples_and_is_monotone() {
        let fam = k6h1();
        // Two instances in this window: x = 2 gives (q, r, t, D) =
        // (5, 7, −1, 19) and x = −6 gives (37, 31, 7, 11).
        let base = census(&fam, 19, 10);
        assert_eq!(base.count, 2);
        assert_eq!(base.indeterminate, 0);
        assert_eq!(census(&fam, 19, 5).count, 1);
        assert_eq!(census(&fam, 0, 10).count, 0);
        // Monotone in the discriminant bound and in the seed range.
        let mut last = 0;
        for z in [10u64, 50, 100, 500, 1000] {
            let report = census(&fam, z, 50);
            assert!(report.count >= last);
            last = report.count;
        }
        let mut last = 0;
        for x_max in [10i64, 20, 40, 80] {
            let report = census(&fam, 500, x_max);
            assert!(report.count >= last);
            last = report.count;
        }
        // Worker partitioning does not change the count.
        assert_eq!(
            census_with_jobs(&fam, 500, 80, 4),
            census(&fam, 500, 80)
        );
    }

    #[test]
    fn density_profile_serializes() {
        let profile = density_profile(&k6h1(), 20, 8, 200).unwrap();
        assert_eq!(profile.u, "3");
        assert_eq!(profile.w2, "8");
        assert_eq!(profile.c.first(), Some(&(2, 2)));
        assert_eq!(profile.rho.first(), Some(&(1, 1)));
        let json = serde_json::to_string(&profile).unwrap();
        let back: DensityProfile = serde_json::from_str(&json).unwrap();
        assert_eq!(back, profile);
    }
}
