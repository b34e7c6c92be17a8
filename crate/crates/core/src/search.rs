//! Concrete curve search: primality testing, square-free decomposition,
//! embedding-degree verification, and two search modes over a family's seed
//! space — a direct sweep over `x`, and a Pell-equation-driven search over
//! discriminant values. The two modes are exact oracles for each other on
//! any region both cover.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{big_mod_u64, factor_u64, perfect_sqrt, sieve_primes, squarefree_flags};
use crate::families::{EmbeddingDegree, Family};
use crate::pell::{self, PellError};

/// Errors from the search layer.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    /// Square-free decomposition is defined for positive integers only.
    #[error("square-free decomposition requires a positive integer, got {0}")]
    NonPositiveInput(BigInt),
    /// Trial division exhausted its bound and the remainder is neither 1, a
    /// perfect square, nor a prime; the square-free part cannot be certified.
    #[error("indeterminate square-free part: {n} has unfactored composite remainder {remainder}")]
    IndeterminateSquarefreePart { n: BigInt, remainder: BigInt },
    /// The embedding-degree test requires `r ∤ k·q`; otherwise `q` has no
    /// well-defined multiplicative order modulo `r`.
    #[error("embedding-degree precondition violated: {r} divides {k}·{q}")]
    EmbeddingPrecondition { q: BigInt, r: BigInt, k: u64 },
    /// Failure propagated from the Pell layer during `pell_search`.
    #[error(transparent)]
    Pell(#[from] PellError),
}

/// Outcome of a primality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primality {
    Composite,
    /// Certified prime (deterministic witness set for the input's size).
    Prime,
    /// Strong probable prime: passed 40 strong-probable-prime rounds above
    /// the deterministic threshold.
    ProbablePrime,
}

impl Primality {
    /// `true` for `Prime` and `ProbablePrime`.
    pub fn passed(self) -> bool {
        !matches!(self, Primality::Composite)
    }

    /// `true` only for `ProbablePrime`.
    pub fn is_probable(self) -> bool {
        matches!(self, Primality::ProbablePrime)
    }
}

/// Primes below 256, used for trial division before Miller–Rabin.
const TRIAL_PRIMES: [u64; 54] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191,
    193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251,
];

/// Witness set that decides primality for every `n` below
/// [`deterministic_bound`].
const DETERMINISTIC_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Fixed bases (the first 40 primes) for the probable-prime regime; the
/// choice is deterministic so reruns are byte-identical.
const EXTENDED_BASES: [u64; 40] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173,
];

/// Largest bound below which the 12-witness set is a proof of primality.
fn deterministic_bound() -> &'static BigInt {
    static BOUND: OnceLock<BigInt> = OnceLock::new();
    BOUND.get_or_init(|| {
        "3317044064679887385961981"
            .parse()
            .expect("literal parses")
    })
}

/// One strong-probable-prime round for odd `n > 2` with `n − 1 = 2^s · d`.
fn strong_probable_prime(n: &BigInt, n_minus_1: &BigInt, d: &BigInt, s: u64, base: u64) -> bool {
    let a = BigInt::from(base).mod_floor(n);
    if a.is_zero() {
        return true;
    }
    let mut x = a.modpow(d, n);
    if x.is_one() || x == *n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x).mod_floor(n);
        if x == *n_minus_1 {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

/// Primality test: trial division, then Miller–Rabin. Deterministic (with the
/// 12-witness set) below 3 317 044 064 679 887 385 961 981; above that bound
/// a pass is reported as [`Primality::ProbablePrime`] after 40 rounds.
pub fn is_prime(n: &BigInt) -> Primality {
    if *n < BigInt::from(2) {
        return Primality::Composite;
    }
    for &p in &TRIAL_PRIMES {
        if big_mod_u64(n, p) == 0 {
            return if *n == BigInt::from(p) {
                Primality::Prime
            } else {
                Primality::Composite
            };
        }
    }
    // No factor below 256, so anything under 251² + … = 63 001 is prime.
    if *n < BigInt::from(63_001u64) {
        return Primality::Prime;
    }
    let n_minus_1 = n - BigInt::one();
    let s = n_minus_1.trailing_zeros().expect("n − 1 > 0");
    let d = &n_minus_1 >> s;
    let deterministic = n < deterministic_bound();
    let bases: &[u64] = if deterministic {
        &DETERMINISTIC_BASES
    } else {
        &EXTENDED_BASES
    };
    for &base in bases {
        if !strong_probable_prime(n, &n_minus_1, &d, s, base) {
            return Primality::Composite;
        }
    }
    if deterministic {
        Primality::Prime
    } else {
        Primality::ProbablePrime
    }
}

/// Default trial-division bound for [`squarefree_part`].
pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

/// Writes `n = D · m²` with `D` square-free, certifying the decomposition by
/// trial division up to [`DEFAULT_TRIAL_BOUND`].
pub fn squarefree_part(n: &BigInt) -> Result<(BigInt, BigInt), SearchError> {
    squarefree_part_with_bound(n, DEFAULT_TRIAL_BOUND)
}

/// [`squarefree_part`] with an explicit trial-division bound. After stripping
/// all primes up to the bound, the remainder must be 1, a perfect square, or
/// a prime; anything else is reported as indeterminate rather than guessed.
pub fn squarefree_part_with_bound(
    n: &BigInt,
    bound: u64,
) -> Result<(BigInt, BigInt), SearchError> {
    if !n.is_positive() {
        return Err(SearchError::NonPositiveInput(n.clone()));
    }
    let mut d = BigInt::one();
    let mut m = BigInt::one();
    let mut rem = n.clone();
    for p in sieve_primes(bound.max(2)) {
        if rem.is_one() {
            break;
        }
        if BigInt::from(p) * p > rem {
            // All smaller primes are stripped, so the remainder is prime.
            d *= std::mem::replace(&mut rem, BigInt::one());
            break;
        }
        let mut exponent = 0u32;
        while big_mod_u64(&rem, p) == 0 {
            rem /= p;
            exponent += 1;
        }
        if exponent >= 2 {
            m *= BigInt::from(p).pow(exponent / 2);
        }
        if exponent % 2 == 1 {
            d *= p;
        }
    }
    if !rem.is_one() {
        if let Some(root) = perfect_sqrt(&rem) {
            m *= root;
        } else if is_prime(&rem).passed() {
            d *= rem;
        } else {
            return Err(SearchError::IndeterminateSquarefreePart {
                n: n.clone(),
                remainder: rem,
            });
        }
    }
    debug_assert_eq!(&d * &m * &m, *n);
    Ok((d, m))
}

/// Decision of `squarefree_part(n).0 ≤ d_max` that never needs full
/// factorization: after stripping primes up to `d_max`, a non-square
/// remainder certainly contributes a square-free factor larger than `d_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum DiscriminantClass {
    /// `n = d · m²` with `d` square-free and `d ≤ d_max`.
    Value { d: u64, m: BigInt },
    /// The square-free part of `n` certainly exceeds `d_max`.
    TooLarge,
}

/// Classifies `n ≥ 1` against the discriminant bound `d_max`. `primes` must
/// be the primes up to at least `max(d_max, 2)` (shared across calls by the
/// sweep loops).
pub(crate) fn discriminant_class(n: &BigInt, d_max: u64, primes: &[u64]) -> DiscriminantClass {
    debug_assert!(n.is_positive());
    debug_assert!(primes.first() == Some(&2));
    debug_assert!(primes.last().copied().unwrap_or(0) >= d_max.min(2));
    let mut d: u64 = 1;
    let mut m = BigInt::one();
    let mut rem = n.clone();
    for &p in primes {
        if rem.is_one() {
            break;
        }
        if BigInt::from(p) * p > rem {
            // The remainder is prime; it counts with exponent one.
            return match rem.to_u64() {
                Some(value) if value <= d_max => {
                    let d = d.saturating_mul(value);
                    if d > d_max {
                        DiscriminantClass::TooLarge
                    } else {
                        DiscriminantClass::Value { d, m }
                    }
                }
                _ => DiscriminantClass::TooLarge,
            };
        }
        let mut exponent = 0u32;
        while big_mod_u64(&rem, p) == 0 {
            rem /= p;
            exponent += 1;
        }
        if exponent >= 2 {
            m *= BigInt::from(p).pow(exponent / 2);
        }
        if exponent % 2 == 1 {
            d = d.saturating_mul(p);
            if d > d_max {
                return DiscriminantClass::TooLarge;
            }
        }
    }
    if !rem.is_one() {
        // Every prime factor of the remainder exceeds the sieved range, hence
        // exceeds d_max; only an all-even factorization (a perfect square)
        // can avoid pushing the square-free part past the bound.
        match perfect_sqrt(&rem) {
            Some(root) => m *= root,
            None => return DiscriminantClass::TooLarge,
        }
    }
    DiscriminantClass::Value { d, m }
}

/// Whether `r` is the order of a subgroup with embedding degree exactly `k`:
/// `Φ_k(q) ≡ 0 (mod r)`. Requires `r ∤ k·q` (so `q` is invertible mod `r` and
/// the order-`k` condition is captured by the cyclotomic value).
pub fn check_embedding_degree(
    q: &BigInt,
    r: &BigInt,
    k: EmbeddingDegree,
) -> Result<bool, SearchError> {
    let kq = BigInt::from(k.value()) * q;
    if kq.is_multiple_of(r) {
        return Err(SearchError::EmbeddingPrecondition {
            q: q.clone(),
            r: r.clone(),
            k: k.value(),
        });
    }
    Ok(k.cyclotomic_eval(q).is_multiple_of(r))
}

/// Serialize arbitrary-precision integers as decimal strings (JSON-safe and
/// identical to the CSV rendering).
mod big_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigInt, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigInt, D::Error> {
        let text = String::deserialize(de)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

mod big_string_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[BigInt], ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(values.iter().map(|v| v.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(de)?
            .into_iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// One concrete curve parameter set found by a search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveInstance {
    /// Seed: the polynomial argument producing this instance.
    #[serde(with = "big_string")]
    pub x: BigInt,
    /// Field characteristic (prime).
    #[serde(with = "big_string")]
    pub q: BigInt,
    /// Subgroup order (prime, > 3).
    #[serde(with = "big_string")]
    pub r: BigInt,
    /// Frobenius trace (nonzero; ordinary curve).
    #[serde(with = "big_string")]
    pub t: BigInt,
    /// Cofactor: `q + 1 − t = h·r`.
    pub h: u64,
    /// Embedding degree.
    pub k: u64,
    /// Square-free CM discriminant value with `D·m² = 4q − t²`.
    #[serde(rename = "D")]
    pub d: u64,
    /// Square part of the CM decomposition.
    #[serde(with = "big_string")]
    pub m: BigInt,
    /// `log(q)/log(r)` as a decimal.
    pub rho: f64,
    /// `true` when the primality of `q` or `r` is probabilistic.
    pub probable: bool,
}

impl CurveInstance {
    /// Column order for tabular output.
    pub const CSV_HEADER: [&'static str; 9] = ["x", "q", "r", "t", "h", "k", "D", "m", "rho"];

    /// The instance rendered in [`Self::CSV_HEADER`] order. The `probable`
    /// flag is not part of the tabular form; JSON carries it.
    pub fn csv_record(&self) -> [String; 9] {
        [
            self.x.to_string(),
            self.q.to_string(),
            self.r.to_string(),
            self.t.to_string(),
            self.h.to_string(),
            self.k.to_string(),
            self.d.to_string(),
            self.m.to_string(),
            format!("{:.6}", self.rho),
        ]
    }

    /// Re-validates every structural invariant, panicking with the violated
    /// invariant's name. Called on every instance at emission time.
    pub fn assert_valid(&self) {
        assert!(
            &self.q + BigInt::one() - &self.t == BigInt::from(self.h) * &self.r,
            "cofactor identity violated"
        );
        assert!(
            &self.t * &self.t <= BigInt::from(4) * &self.q,
            "Hasse interval violated"
        );
        assert!(!self.t.is_zero(), "ordinary-trace invariant violated");
        assert!(self.r > BigInt::from(3), "subgroup-order invariant violated");
        let k = EmbeddingDegree::try_from_value(self.k).expect("embedding-degree value invalid");
        assert!(
            !(BigInt::from(self.k) * &self.q).is_multiple_of(&self.r),
            "embedding-degree precondition violated"
        );
        assert!(
            k.cyclotomic_eval(&self.q).is_multiple_of(&self.r),
            "embedding-degree divisibility violated"
        );
        let cm = BigInt::from(4) * &self.q - &self.t * &self.t;
        assert!(
            BigInt::from(self.d) * &self.m * &self.m == cm,
            "CM decomposition violated"
        );
        assert!(
            factor_u64(self.d).iter().all(|&(_, e)| e == 1),
            "square-free discriminant violated"
        );
        assert!(self.m.is_positive(), "positive square part violated");
        if self.r.bits() > 60 {
            assert!(
                self.rho > 0.95 && self.rho < 1.05,
                "near-prime-order rho window violated"
            );
        }
    }
}

/// Result of a search run: the instances found plus the per-seed skips that
/// could not be classified (kept explicit so nothing is silently dropped).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub instances: Vec<CurveInstance>,
    /// Seeds skipped because the CM value's square-free part could not be
    /// certified. The bounded-discriminant classifier decides every case, so
    /// this is empty unless a future filter reintroduces uncertainty.
    #[serde(with = "big_string_vec")]
    pub indeterminate_seeds: Vec<BigInt>,
    /// Number of candidate seeds examined.
    pub examined: u64,
}

/// Natural logarithm of a positive big integer, stable beyond `f64` range.
fn ln_big(n: &BigInt) -> f64 {
    debug_assert!(n.is_positive());
    let direct = n.to_f64().unwrap_or(f64::INFINITY);
    if direct.is_finite() {
        return direct.ln();
    }
    let shift = n.bits() - 53;
    let top = (n >> shift).to_f64().expect("53-bit mantissa fits in f64");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Applies every validity filter to the seed `x` and builds the instance.
/// Returns `None` when any filter rejects. This single path serves both
/// search modes, which is what makes them exact oracles for each other.
fn build_instance(
    family: &Family,
    x: &BigInt,
    d_max: u64,
    primes: &[u64],
) -> Option<CurveInstance> {
    let t = family.t().eval(x);
    if t.is_zero() {
        return None; // supersingular trace
    }
    let q = family.q().eval(x);
    let cm = BigInt::from(4) * &q - &t * &t;
    if cm < BigInt::one() {
        return None; // outside the Hasse interval
    }
    let r = family.r().eval(x);
    if r <= BigInt::from(3) {
        return None; // vacuous subgroup
    }
    let r_primality = is_prime(&r);
    if !r_primality.passed() {
        return None;
    }
    let q_primality = is_prime(&q);
    if !q_primality.passed() {
        return None;
    }
    let k = family.k();
    let embedding = match check_embedding_degree(&q, &r, k) {
        Ok(flag) => flag,
        Err(_) => return None, // r | k·q
    };
    // q ≡ t − 1 (mod r), so the trace-side evaluation must agree.
    let embedding_trace = k
        .cyclotomic_eval(&(&t - BigInt::one()))
        .is_multiple_of(&r);
    assert_eq!(embedding, embedding_trace, "embedding-degree cross-check violated");
    if !embedding {
        return None;
    }
    let (d, m) = match discriminant_class(&cm, d_max, primes) {
        DiscriminantClass::Value { d, m } => (d, m),
        DiscriminantClass::TooLarge => return None,
    };
    let instance = CurveInstance {
        x: x.clone(),
        rho: ln_big(&q) / ln_big(&r),
        probable: q_primality.is_probable() || r_primality.is_probable(),
        q,
        r,
        t,
        h: family.h(),
        k: k.value(),
        d,
        m,
    };
    instance.assert_valid();
    Some(instance)
}

/// Scans a contiguous seed range, in order.
fn scan_range(
    family: &Family,
    lo: i64,
    hi: i64,
    d_max: u64,
    primes: &[u64],
) -> Vec<CurveInstance> {
    let mut found = Vec::new();
    let mut x = lo;
    loop {
        if let Some(instance) = build_instance(family, &BigInt::from(x), d_max, primes) {
            found.push(instance);
        }
        if x == hi {
            break;
        }
        x += 1;
    }
    found
}

/// Direct search: tests every seed `x ∈ [x_min, x_max]` against the validity
/// filters and keeps instances whose CM discriminant value is at most
/// `d_max`. Results are ordered by `x`.
pub fn sweep(family: &Family, x_min: i64, x_max: i64, d_max: u64) -> SearchReport {
    sweep_with_jobs(family, x_min, x_max, d_max, 1)
}

/// [`sweep`] with the seed range partitioned across `jobs` worker threads.
/// Chunks are contiguous and merged in order, so the result is identical to
/// the single-threaded run.
pub fn sweep_with_jobs(
    family: &Family,
    x_min: i64,
    x_max: i64,
    d_max: u64,
    jobs: usize,
) -> SearchReport {
    if x_min > x_max {
        return SearchReport::default();
    }
    let primes = sieve_primes(d_max.max(2));
    let total = x_max as i128 - x_min as i128 + 1;
    let workers = (jobs.max(1) as i128).min(total) as usize;
    let instances = if workers == 1 {
        scan_range(family, x_min, x_max, d_max, &primes)
    } else {
        let bounds: Vec<(i64, i64)> = (0..workers)
            .map(|j| {
                let lo = x_min as i128 + total * j as i128 / workers as i128;
                let hi = x_min as i128 + total * (j as i128 + 1) / workers as i128 - 1;
                (lo as i64, hi as i64)
            })
            .collect();
        let primes_ref = &primes;
        std::thread::scope(|scope| {
            let handles: Vec<_> = bounds
                .iter()
                .map(|&(lo, hi)| {
                    scope.spawn(move || scan_range(family, lo, hi, d_max, primes_ref))
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("sweep worker panicked"))
                .collect()
        })
    };
    SearchReport {
        instances,
        indeterminate_seeds: Vec::new(),
        examined: total as u64,
    }
}

/// Pell-driven search: for each square-free `D ∈ [d_min, d_max]`, solves the
/// family's reduced Pell equation with modulus `g = u·D`, maps roots back to
/// seeds, and applies the same validity filters as [`sweep`]. The region
/// covered is `|w0·x + w1| ≤ y_limit`; on it the result set equals the
/// sweep's. Results are ordered by `x`.
pub fn pell_search(
    family: &Family,
    d_min: u64,
    d_max: u64,
    y_limit: &BigInt,
) -> Result<SearchReport, SearchError> {
    let instance = pell::reduce(family)?;
    let mut report = SearchReport::default();
    if d_min > d_max {
        return Ok(report);
    }
    let primes = sieve_primes(d_max.max(2));
    let square_free = squarefree_flags(d_max);
    let mut by_seed: BTreeMap<BigInt, CurveInstance> = BTreeMap::new();
    for d in d_min.max(1)..=d_max {
        if !square_free[d as usize] {
            continue;
        }
        for (x, m) in pell::solutions_in_congruence(&instance, d, y_limit)? {
            report.examined += 1;
            if let Some(curve) = build_instance(family, &x, d_max, &primes) {
                // The decomposition D·m² of the CM value is unique with D
                // square-free, so the classifier must reproduce the Pell
                // modulus exactly.
                assert_eq!(curve.d, d, "canonical discriminant mismatch");
                assert_eq!(curve.m, m, "canonical square-part mismatch");
                by_seed.insert(x, curve);
            }
        }
    }
    // The solver excludes y = 0; when the root of the substitution is an
    // integer seed it must still be considered (its CM value is w2/u).
    if let Some(x0) = instance.seed_for_root(&BigInt::zero()) {
        report.examined += 1;
        if let Some(curve) = build_instance(family, &x0, d_max, &primes) {
            if curve.d >= d_min.max(1) {
                by_seed.insert(x0, curve);
            }
        }
    }
    report.instances = by_seed.into_values().collect();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intpoly::{LinPoly, QuadPoly};

    fn family(k: EmbeddingDegree, h: u64, a: i64, b: i64) -> Family {
        Family::from_trace(k, h, LinPoly::new(a, b)).expect("valid trace")
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn primality_matches_trial_division_oracle() {
        let mut primes = vec![false; 3000];
        for (n, flag) in primes.iter_mut().enumerate().skip(2) {
            *flag = (2..n).all(|f| n % f != 0);
        }
        for (n, &expected) in primes.iter().enumerate() {
            let got = is_prime(&BigInt::from(n));
            assert_eq!(got.passed(), expected, "n = {n}");
            assert!(!got.is_probable(), "n = {n} is below the threshold");
        }
    }

    #[test]
    fn primality_examples_and_regimes() {
        assert_eq!(is_prime(&big(7)), Primality::Prime);
        assert_eq!(is_prime(&big(21)), Primality::Composite);
        assert_eq!(is_prime(&big(0)), Primality::Composite);
        assert_eq!(is_prime(&big(1)), Primality::Composite);
        assert_eq!(is_prime(&big(-7)), Primality::Composite);
        // q(1) for the polynomial 3x² + 3x + 1.
        let q = QuadPoly::new(3, 3, 1);
        assert_eq!(is_prime(&q.eval(&big(1))), Primality::Prime);
        // 2¹²⁷ − 1 is prime but sits above the deterministic threshold.
        let m127 = (BigInt::one() << 127) - BigInt::one();
        assert_eq!(is_prime(&m127), Primality::ProbablePrime);
        // Its square is composite and must be caught despite its size.
        assert_eq!(is_prime(&(&m127 * &m127)), Primality::Composite);
        // Boundary sanity: the largest 64-bit prime is certified.
        let p64: BigInt = "18446744073709551557".parse().unwrap();
        assert_eq!(is_prime(&p64), Primality::Prime);
    }

    #[test]
    fn squarefree_part_examples() {
        assert_eq!(squarefree_part(&big(44)).unwrap(), (big(11), big(2)));
        assert_eq!(squarefree_part(&big(19)).unwrap(), (big(19), big(1)));
        assert_eq!(squarefree_part(&big(4)).unwrap(), (big(1), big(2)));
        assert_eq!(squarefree_part(&big(1)).unwrap(), (big(1), big(1)));
        assert_eq!(
            squarefree_part(&big(0)),
            Err(SearchError::NonPositiveInput(big(0)))
        );
        assert_eq!(
            squarefree_part(&big(-44)),
            Err(SearchError::NonPositiveInput(big(-44)))
        );
    }

    #[test]
    fn squarefree_part_handles_large_remainders() {
        let p = big(1_000_003);
        let q = big(1_000_033);
        // Prime remainder: certified via the primality test.
        let n = big(4) * &p;
        assert_eq!(squarefree_part(&n).unwrap(), (p.clone(), big(2)));
        // Perfect-square remainder: contributes to m without factorization.
        let n = &p * &p;
        assert_eq!(squarefree_part(&n).unwrap(), (big(1), p.clone()));
        // Composite non-square remainder: indeterminate, never guessed.
        let n = &p * &q;
        assert_eq!(
            squarefree_part(&n),
            Err(SearchError::IndeterminateSquarefreePart {
                n: n.clone(),
                remainder: n.clone(),
            })
        );
    }

    #[test]
    fn squarefree_part_agrees_with_full_factorization() {
        for n in 1u64..=2000 {
            let mut d = 1u64;
            let mut m = 1u64;
            for (p, e) in factor_u64(n) {
                m *= p.pow(e / 2);
                if e % 2 == 1 {
                    d *= p;
                }
            }
            assert_eq!(
                squarefree_part(&BigInt::from(n)).unwrap(),
                (BigInt::from(d), BigInt::from(m)),
                "n = {n}"
            );
        }
    }

    #[test]
    fn discriminant_class_matches_oracle_and_decides_large_remainders() {
        let primes = sieve_primes(100);
        for n in 1u64..=5000 {
            let mut d = 1u64;
            let mut m = 1u64;
            for (p, e) in factor_u64(n) {
                m *= p.pow(e / 2);
                if e % 2 == 1 {
                    d *= p;
                }
            }
            let expected = if d <= 100 {
                DiscriminantClass::Value {
                    d,
                    m: BigInt::from(m),
                }
            } else {
                DiscriminantClass::TooLarge
            };
            assert_eq!(
                discriminant_class(&BigInt::from(n), 100, &primes),
                expected,
                "n = {n}"
            );
        }
        // Certainty without factorization: 4·p is too large, 9·p² is 1·(3p)².
        let p = big(1_000_003);
        assert_eq!(
            discriminant_class(&(big(4) * &p), 100, &primes),
            DiscriminantClass::TooLarge
        );
        assert_eq!(
            discriminant_class(&(big(9) * &p * &p), 100, &primes),
            DiscriminantClass::Value {
                d: 1,
                m: big(3) * &p
            }
        );
    }

    #[test]
    fn embedding_degree_examples() {
        let k6 = EmbeddingDegree::K6;
        let k4 = EmbeddingDegree::K4;
        assert_eq!(check_embedding_degree(&big(5), &big(7), k6), Ok(true));
        assert_eq!(check_embedding_degree(&big(3), &big(5), k4), Ok(true));
        assert_eq!(check_embedding_degree(&big(7), &big(5), k6), Ok(false));
        assert_eq!(
            check_embedding_degree(&big(7), &big(7), k6),
            Err(SearchError::EmbeddingPrecondition {
                q: big(7),
                r: big(7),
                k: 6
            })
        );
        // r = 3 divides k = 6 itself.
        assert_eq!(
            check_embedding_degree(&big(5), &big(3), k6),
            Err(SearchError::EmbeddingPrecondition {
                q: big(5),
                r: big(3),
                k: 6
            })
        );
    }

    #[test]
    fn sweep_matches_worked_examples() {
        // k = 6, h = 1 with t = −x + 1: q = x² + 1, r = x² + x + 1.
        let fam = family(EmbeddingDegree::K6, 1, -1, 1);
        assert_eq!(fam.q(), &QuadPoly::new(1, 0, 1));
        assert_eq!(fam.r(), &QuadPoly::new(1, 1, 1));

        let report = sweep(&fam, 0, 10, 100);
        assert_eq!(report.examined, 11);
        assert!(report.indeterminate_seeds.is_empty());
        assert_eq!(report.instances.len(), 1, "{:?}", report.instances);
        let hit = &report.instances[0];
        assert_eq!(
            (hit.x.clone(), hit.q.clone(), hit.r.clone(), hit.t.clone()),
            (big(2), big(5), big(7), big(-1))
        );
        assert_eq!((hit.h, hit.k, hit.d, hit.m.clone()), (1, 6, 19, big(1)));
        assert!(!hit.probable);
        assert!((hit.rho - 5f64.ln() / 7f64.ln()).abs() < 1e-12);

        // x = 4 is excluded because r(4) = 21 is composite.
        assert!(sweep(&fam, 4, 4, 100).instances.is_empty());
        // Raising the discriminant bound admits x = 6 (D = 123 = 3·41).
        let wider = sweep(&fam, 0, 10, 200);
        let xs: Vec<BigInt> = wider.instances.iter().map(|i| i.x.clone()).collect();
        assert_eq!(xs, vec![big(2), big(6)]);
        assert_eq!(wider.instances[1].d, 123);

        // k = 6, h = 4, d = 1: x = 1 gives prime q = 11 but t(1) = 0.
        let fam41 = family(EmbeddingDegree::K6, 4, -1, 1);
        assert_eq!(fam41.q().eval(&big(1)), big(11));
        assert!(sweep(&fam41, 1, 1, 100).instances.is_empty());
    }

    #[test]
    fn sweep_partitioning_is_deterministic() {
        let fam = family(EmbeddingDegree::K6, 1, -1, 1);
        let single = sweep(&fam, -300, 300, 1000);
        for jobs in [2, 3, 8, 64] {
            assert_eq!(sweep_with_jobs(&fam, -300, 300, 1000, jobs), single);
        }
        assert!(sweep(&fam, 5, 4, 100).instances.is_empty());
    }

    #[test]
    fn pell_search_matches_examples() {
        let fam = family(EmbeddingDegree::K6, 1, -1, 1);
        let report = pell_search(&fam, 19, 19, &big(1_000_000)).unwrap();
        assert!(
            report
                .instances
                .iter()
                .any(|i| i.x == big(2) && i.q == big(5) && i.r == big(7)),
            "{:?}",
            report.instances
        );
        // Empty discriminant range.
        let empty = pell_search(&fam, 7, 6, &big(1_000_000)).unwrap();
        assert!(empty.instances.is_empty());
    }

    #[test]
    fn pell_search_equals_sweep_on_the_covered_region() {
        // For t = −x + 1, h = 4: w0 = −15, w1 = −7, so |y| ≤ 10⁴ covers
        // exactly the seeds x ∈ [−667, 666].
        let fam = family(EmbeddingDegree::K6, 4, -1, 1);
        let swept = sweep(&fam, -667, 666, 100);
        let pell = pell_search(&fam, 1, 100, &big(10_000)).unwrap();
        assert_eq!(pell.instances, swept.instances);
        assert!(!pell.instances.is_empty());

        // Restricted discriminant window: same filter applied to the sweep.
        let pell11 = pell_search(&fam, 11, 11, &big(10_000)).unwrap();
        let sweep11: Vec<CurveInstance> = sweep(&fam, -667, 666, 11)
            .instances
            .into_iter()
            .filter(|i| i.d == 11)
            .collect();
        assert_eq!(pell11.instances, sweep11);
        // The x = 1 Pell solution at D = 11 exists but fails the trace
        // filter in both modes (t(1) = 0).
        assert!(pell11.instances.iter().all(|i| i.x != big(1)));
    }

    #[test]
    fn instances_serialize_round_trip() {
        let fam = family(EmbeddingDegree::K6, 1, -1, 1);
        let report = sweep(&fam, 0, 10, 100);
        let json = serde_json::to_string(&report).unwrap();
        let back: SearchReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        // Tabular rendering: exact column order, probable kept out.
        let record = report.instances[0].csv_record();
        assert_eq!(record[0], "2");
        assert_eq!(record[1], "5");
        assert_eq!(record[2], "7");
        assert_eq!(record[3], "-1");
        assert_eq!(record[4], "1");
        assert_eq!(record[5], "6");
        assert_eq!(record[6], "19");
        assert_eq!(record[7], "1");
        assert_eq!(record[8], format!("{:.6}", 5f64.ln() / 7f64.ln()));
        assert!(json.contains("\"probable\":false"));
    }
}
