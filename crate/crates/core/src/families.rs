//! Enumeration of near prime-order MNT curve families.
//!
//! For embedding degree `k ∈ {3, 4, 6}` write `ε = 1, 2, 3` respectively;
//! then `Φ_k(t − 1) = t² − ε·t + ε` for every trace polynomial `t`. A family
//! with cofactor `h` is a triple `(q, r, t)` of integer polynomials where
//!
//! * `t(x) = a·x + b` is linear with `a ≠ 0`,
//! * `d = content(Φ_k(t − 1))` and `r = Φ_k(t − 1) / d` is the primitive
//!   subgroup-order polynomial,
//! * `q = h·r + t − 1` is irreducible and the product `q·r` has no fixed
//!   prime divisor (otherwise at most finitely many `x` can make both prime),
//! * the Hasse condition `4h ≥ d` holds.
//!
//! Two parameter pairs `(t, r)` are *deduced* one from the other when an
//! integer substitution `x ↦ u·x + v` (`u ≠ 0`) maps one onto the other, and
//! *equivalent* when `u = ±1` (the substitution is invertible over ℤ).
//! [`generate`] enumerates one canonical representative per primitive class —
//! trace `d·x + b` with `0 ≤ b < d` — exactly as the breadth-first sweep over
//! `|a|` ascending (positive sign first) discovers them.

use crate::intpoly::{product_value_gcd, IntPolyError, LinPoly, QuadPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use thiserror::Error;

/// Supported embedding degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EmbeddingDegree {
    /// `k = 3`
    K3,
    /// `k = 4`
    K4,
    /// `k = 6`
    K6,
}

impl EmbeddingDegree {
    /// All supported degrees, ascending.
    pub const ALL: [EmbeddingDegree; 3] =
        [EmbeddingDegree::K3, EmbeddingDegree::K4, EmbeddingDegree::K6];

    /// The numeric embedding degree.
    pub fn value(self) -> u64 {
        match self {
            EmbeddingDegree::K3 => 3,
            EmbeddingDegree::K4 => 4,
            EmbeddingDegree::K6 => 6,
        }
    }

    /// The constant `ε` with `Φ_k(t − 1) = t² − ε·t + ε`: 1, 2, 3 for
    /// `k = 3, 4, 6`.
    pub fn epsilon(self) -> u64 {
        match self {
            EmbeddingDegree::K3 => 1,
            EmbeddingDegree::K4 => 2,
            EmbeddingDegree::K6 => 3,
        }
    }

    /// Parses a numeric embedding degree.
    pub fn try_from_value(k: u64) -> Result<Self, FamilyError> {
        match k {
            3 => Ok(EmbeddingDegree::K3),
            4 => Ok(EmbeddingDegree::K4),
            6 => Ok(EmbeddingDegree::K6),
            other => Err(FamilyError::UnsupportedEmbeddingDegree(other)),
        }
    }

    /// Evaluates the cyclotomic polynomial `Φ_k` at an integer:
    /// `Φ₃(n) = n² + n + 1`, `Φ₄(n) = n² + 1`, `Φ₆(n) = n² − n + 1`.
    pub fn cyclotomic_eval(self, n: &BigInt) -> BigInt {
        let n2 = n * n;
        match self {
            EmbeddingDegree::K3 => n2 + n + 1,
            EmbeddingDegree::K4 => n2 + 1,
            EmbeddingDegree::K6 => n2 - n + 1,
        }
    }
}

impl fmt::Display for EmbeddingDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Errors raised while constructing or validating families.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    /// Only `k ∈ {3, 4, 6}` admit linear-trace families of this shape.
    #[error("unsupported embedding degree {0}; expected 3, 4, or 6")]
    UnsupportedEmbeddingDegree(u64),
    /// The trace polynomial must be genuinely linear.
    #[error("constant trace: leading coefficient is zero")]
    ConstantTrace,
    /// Cofactor bounds must satisfy `h ≥ 1` (and stay desk-scale).
    #[error("invalid cofactor bound {0}; expected 1 ≤ h ≤ 2^31")]
    InvalidCofactorBound(u64),
    /// A content value did not fit the supported integer range.
    #[error("content {0} exceeds the supported range")]
    ContentOverflow(String),
    /// The declared `r` is not the primitive part of `Φ_k(t − 1)`.
    #[error("subgroup order mismatch: Φ_k(t − 1) splits as {expected}, found {found}")]
    SplitMismatch { expected: String, found: String },
    /// The declared `r` has content greater than one.
    #[error("subgroup order polynomial has content {0} > 1")]
    ImprimitiveSubgroupOrder(String),
    /// The subgroup order polynomial must be irreducible.
    #[error("subgroup order polynomial {0} is reducible")]
    ReducibleSubgroupOrder(String),
    /// The declared `q` does not satisfy `q = h·r + t − 1`.
    #[error("cardinality mismatch: q + 1 - t does not equal h·r")]
    CardinalityMismatch,
    /// The Hasse condition `4h ≥ d` fails.
    #[error("cofactor h = {h} violates the Hasse condition 4h >= d = {d}")]
    HasseViolation { h: u64, d: u64 },
    /// The field polynomial was rejected by the family filter.
    #[error("field polynomial {q} rejected: {rejection}")]
    RejectedQ {
        q: String,
        rejection: MakeQRejection,
    },
    /// `q + 1 − t` does not factor as a cofactor times the primitive
    /// subgroup order attached to the trace.
    #[error("not a near-prime family: {0}")]
    NotNearPrime(String),
    /// Underlying polynomial-arithmetic error.
    #[error(transparent)]
    Poly(#[from] IntPolyError),
}

/// Reasons `make_q` rejects a candidate field polynomial.
#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum MakeQRejection {
    /// `q` factors over the rationals, so it represents no primes beyond
    /// finitely many `x`.
    #[error("q is reducible over the rationals")]
    Reducible,
    /// Every value `q(n)` is divisible by the given integer `> 1`, so `q`
    /// represents no primes beyond finitely many `x`.
    #[error("q has fixed divisor {0}")]
    FixedDivisor(BigInt),
}

/// `Φ_k(t − 1) = t² − ε·t + ε` as an explicit quadratic in `x`.
pub fn phi_shifted(k: EmbeddingDegree, t: &LinPoly) -> QuadPoly {
    let eps = BigInt::from(k.epsilon());
    let mut p = t.square();
    p.c1 -= &eps * &t.a;
    p.c0 += &eps - &eps * &t.b;
    p
}

/// Splits `Φ_k(t − 1)` into its content `d` and primitive part `r`.
///
/// Errors with [`FamilyError::ConstantTrace`] when `t` is constant.
pub fn split_d_r(k: EmbeddingDegree, t: &LinPoly) -> Result<(u64, QuadPoly), FamilyError> {
    if t.a.is_zero() {
        return Err(FamilyError::ConstantTrace);
    }
    let phi = phi_shifted(k, t);
    let content = phi.content()?;
    let d = content
        .to_u64()
        .ok_or_else(|| FamilyError::ContentOverflow(content.to_string()))?;
    let r = phi.div_exact(&content);
    Ok((d, r))
}

/// Builds the field polynomial `q = h·r + t − 1` and applies the family
/// filter: `q` must be irreducible and the values of `q` must have no common
/// divisor greater than 1. Returns the typed rejection otherwise.
pub fn make_q(h: u64, r: &QuadPoly, t: &LinPoly) -> Result<QuadPoly, MakeQRejection> {
    let mut q = r.scale(&BigInt::from(h));
    q.c1 += &t.a;
    q.c0 += &t.b - 1;
    if !q
        .is_irreducible_quadratic()
        .expect("q has degree 2 for h >= 1 and quadratic r")
    {
        return Err(MakeQRejection::Reducible);
    }
    let fixed = q.value_gcd().expect("q is nonzero");
    if !fixed.is_one() {
        return Err(MakeQRejection::FixedDivisor(fixed));
    }
    Ok(q)
}

/// A complete near prime-order family `(q, r, t)` with embedding degree `k`,
/// cofactor `h`, and content divisor `d`.
///
/// Construct through [`Family::from_parts`] (full validation) or
/// [`Family::from_trace`] (derives `r` and `q`); the fields are read-only to
/// keep the invariants intact.
#[derive(Clone, PartialEq, Eq)]
pub struct Family {
    pub(crate) k: EmbeddingDegree,
    pub(crate) h: u64,
    pub(crate) d: u64,
    pub(crate) t: LinPoly,
    pub(crate) r: QuadPoly,
    pub(crate) q: QuadPoly,
}

impl Family {
    /// Validates and assembles a family from all five components.
    pub fn from_parts(
        k: EmbeddingDegree,
        h: u64,
        t: LinPoly,
        r: QuadPoly,
        q: QuadPoly,
    ) -> Result<Family, FamilyError> {
        if h == 0 || h > (1 << 31) {
            return Err(FamilyError::InvalidCofactorBound(h));
        }
        let (d, split_r) = split_d_r(k, &t)?;
        if r != split_r {
            return Err(FamilyError::SplitMismatch {
                expected: split_r.to_string(),
                found: r.to_string(),
            });
        }
        let r_content = r.content()?;
        if !r_content.is_one() {
            return Err(FamilyError::ImprimitiveSubgroupOrder(r_content.to_string()));
        }
        if !r.is_irreducible_quadratic()? {
            return Err(FamilyError::ReducibleSubgroupOrder(r.to_string()));
        }
        if 4 * h < d {
            return Err(FamilyError::HasseViolation { h, d });
        }
        let built_q = make_q(h, &r, &t).map_err(|rejection| FamilyError::RejectedQ {
            q: format!("{}", q),
            rejection,
        })?;
        if q != built_q {
            return Err(FamilyError::CardinalityMismatch);
        }
        Ok(Family { k, h, d, t, r, q })
    }

    /// Derives a family from `(k, h, t)` alone, computing the split and the
    /// field polynomial.
    pub fn from_trace(k: EmbeddingDegree, h: u64, t: LinPoly) -> Result<Family, FamilyError> {
        if h == 0 || h > (1 << 31) {
            return Err(FamilyError::InvalidCofactorBound(h));
        }
        let (d, r) = split_d_r(k, &t)?;
        if 4 * h < d {
            return Err(FamilyError::HasseViolation { h, d });
        }
        let q = make_q(h, &r, &t).map_err(|rejection| {
            let mut candidate = r.scale(&BigInt::from(h));
            candidate.c1 += &t.a;
            candidate.c0 += &t.b - 1;
            FamilyError::RejectedQ {
                q: candidate.to_string(),
                rejection,
            }
        })?;
        Ok(Family { k, h, d, t, r, q })
    }

    /// Embedding degree `k`.
    pub fn k(&self) -> EmbeddingDegree {
        self.k
    }

    /// Cofactor `h`.
    pub fn h(&self) -> u64 {
        self.h
    }

    /// Content divisor `d = content(Φ_k(t − 1))`.
    pub fn d(&self) -> u64 {
        self.d
    }

    /// Trace polynomial `t(x)`.
    pub fn t(&self) -> &LinPoly {
        &self.t
    }

    /// Primitive subgroup-order polynomial `r(x)`.
    pub fn r(&self) -> &QuadPoly {
        &self.r
    }

    /// Field-size polynomial `q(x) = h·r(x) + t(x) − 1`.
    pub fn q(&self) -> &QuadPoly {
        &self.q
    }

    /// Fixed divisor of the product `q(x)·r(x)` over the integers.
    ///
    /// A family is valid with any value here, but when the result is
    /// greater than 1 no specialization can make `q(x)` and `r(x)`
    /// simultaneously prime (beyond trivially small values), so instance
    /// searches come up empty and the local density of the family is zero.
    /// Several published family tables are inconsistent about pruning such
    /// entries; exposing the divisor lets callers audit that directly.
    pub fn pair_value_gcd(&self) -> BigInt {
        product_value_gcd(&self.q, &self.r).expect("q and r are nonzero")
    }

    /// The companion family: `t′ = ε − t`, `q′ = q − 2t + ε`, sharing the
    /// same `r`, `d`, and `h`. Applying it twice returns the original family.
    pub fn companion(&self) -> Family {
        let eps = BigInt::from(self.k.epsilon());
        let t = LinPoly {
            a: -&self.t.a,
            b: &eps - &self.t.b,
        };
        let mut q = self.q.clone();
        q.c1 -= BigInt::from(2) * &self.t.a;
        q.c0 += &eps - BigInt::from(2) * &self.t.b;
        debug_assert_eq!(phi_shifted(self.k, &t), phi_shifted(self.k, &self.t));
        Family {
            k: self.k,
            h: self.h,
            d: self.d,
            t,
            r: self.r.clone(),
            q,
        }
    }

    /// True when the companion is equivalent (as a `(t, r)` pair under
    /// `x ↦ ±x + v`) to the family itself.
    pub fn companion_is_equivalent(&self) -> bool {
        let comp = self.companion();
        equivalent((&comp.t, &comp.r), (&self.t, &self.r))
    }

    /// True when `other` is the same family up to an invertible integer
    /// substitution `x ↦ ±x + v` (same `k` and `h` required).
    pub fn equivalent_to(&self, other: &Family) -> bool {
        self.k == other.k && self.h == other.h && equivalent((&self.t, &self.r), (&other.t, &other.r))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={} h={} d={}: t = {}, r = {}, q = {}",
            self.k, self.h, self.d, self.t, self.r, self.q
        )
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family({self})")
    }
}

// --- JSON wire format -------------------------------------------------------
//
// Families serialize as {"k", "h", "d", "t": [b, a], "r": [c0, c1, c2],
// "q": [c0, c1, c2]} with coefficients in ascending order. Coefficients are
// plain integers when they fit `i64` and decimal strings otherwise, and both
// forms are accepted on input. Deserialization re-validates every invariant.

#[derive(Serialize, Deserialize)]
struct FamilyWire {
    k: u64,
    h: u64,
    d: u64,
    t: Vec<CoefWire>,
    r: Vec<CoefWire>,
    q: Vec<CoefWire>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoefWire {
    Small(i64),
    Big(String),
}

impl CoefWire {
    fn encode(value: &BigInt) -> CoefWire {
        match value.to_i64() {
            Some(small) => CoefWire::Small(small),
            None => CoefWire::Big(value.to_string()),
        }
    }

    fn decode(&self) -> Result<BigInt, String> {
        match self {
            CoefWire::Small(v) => Ok(BigInt::from(*v)),
            CoefWire::Big(s) => s
                .parse::<BigInt>()
                .map_err(|e| format!("invalid integer literal {s:?}: {e}")),
        }
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let wire = FamilyWire {
            k: self.k.value(),
            h: self.h,
            d: self.d,
            t: vec![CoefWire::encode(&self.t.b), CoefWire::encode(&self.t.a)],
            r: vec![
                CoefWire::encode(&self.r.c0),
                CoefWire::encode(&self.r.c1),
                CoefWire::encode(&self.r.c2),
            ],
            q: vec![
                CoefWire::encode(&self.q.c0),
                CoefWire::encode(&self.q.c1),
                CoefWire::encode(&self.q.c2),
            ],
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = FamilyWire::deserialize(deserializer)?;
        let decode = |coeffs: &[CoefWire], len: usize, name: &str| {
            if coeffs.len() != len {
                return Err(D::Error::custom(format!(
                    "field {name} must have {len} coefficients, found {}",
                    coeffs.len()
                )));
            }
            coeffs
                .iter()
                .map(|c| c.decode().map_err(D::Error::custom))
                .collect::<Result<Vec<BigInt>, _>>()
        };
        let t = decode(&wire.t, 2, "t")?;
        let r = decode(&wire.r, 3, "r")?;
        let q = decode(&wire.q, 3, "q")?;
        let k = EmbeddingDegree::try_from_value(wire.k).map_err(D::Error::custom)?;
        let family = Family::from_parts(
            k,
            wire.h,
            LinPoly {
                a: t[1].clone(),
                b: t[0].clone(),
            },
            QuadPoly {
                c2: r[2].clone(),
                c1: r[1].clone(),
                c0: r[0].clone(),
            },
            QuadPoly {
                c2: q[2].clone(),
                c1: q[1].clone(),
                c0: q[0].clone(),
            },
        )
        .map_err(D::Error::custom)?;
        if family.d != wire.d {
            return Err(D::Error::custom(format!(
                "declared d = {} does not match computed d = {}",
                wire.d, family.d
            )));
        }
        Ok(family)
    }
}

// --- Canonical forms, deduction, equivalence --------------------------------

/// Canonicalizes a trace to `|a|·x + (b mod |a|)` and returns the
/// substitution `(u, v)` with `t(u·x + v)` equal to the canonical form
/// (`u = ±1`). Errors on a constant trace.
pub fn canonicalize_trace(t: &LinPoly) -> Result<(LinPoly, (BigInt, BigInt)), FamilyError> {
    if t.a.is_zero() {
        return Err(FamilyError::ConstantTrace);
    }
    let u = if t.a.is_negative() {
        BigInt::from(-1)
    } else {
        BigInt::one()
    };
    let abs_a = t.a.abs();
    let b_canonical = t.b.mod_floor(&abs_a);
    let v = (&b_canonical - &t.b) / &t.a;
    let canonical = LinPoly {
        a: abs_a,
        b: b_canonical,
    };
    debug_assert_eq!(t.substitute_linear(&u, &v).unwrap(), canonical);
    Ok((canonical, (u, v)))
}

/// Decides whether `(t, r)` can be deduced from `(t₀, r₀)` by an integer
/// substitution `x ↦ u·x + v` with `u ≠ 0`; returns the substitution if so.
pub fn is_deduced(
    candidate: (&LinPoly, &QuadPoly),
    base: (&LinPoly, &QuadPoly),
) -> Option<(BigInt, BigInt)> {
    let (t_c, r_c) = candidate;
    let (t_b, r_b) = base;
    if t_b.a.is_zero() {
        return None;
    }
    let (u, rem) = t_c.a.div_rem(&t_b.a);
    if !rem.is_zero() || u.is_zero() {
        return None;
    }
    let (v, rem) = (&t_c.b - &t_b.b).div_rem(&t_b.a);
    if !rem.is_zero() {
        return None;
    }
    let image = r_b.substitute_linear(&u, &v).expect("u is nonzero");
    if image == *r_c {
        Some((u, v))
    } else {
        None
    }
}

/// True when the two `(t, r)` pairs are equivalent, i.e. deduced from each
/// other by an invertible substitution `x ↦ ±x + v`.
pub fn equivalent(a: (&LinPoly, &QuadPoly), b: (&LinPoly, &QuadPoly)) -> bool {
    matches!(is_deduced(a, b), Some((u, _)) if u.abs().is_one())
}

/// A primitive `(d, t, r)` class representative discovered during
/// generation: `t = d·x + b` with `0 ≤ b < d` determines the class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveClass {
    /// Content divisor (equals the canonical trace's leading coefficient).
    pub d: u64,
    /// Canonical trace representative.
    pub t: LinPoly,
    /// Primitive subgroup-order polynomial.
    pub r: QuadPoly,
}

/// Output of [`generate_with_classes`].
#[derive(Debug, Clone)]
pub struct Generation {
    /// All families with cofactor `≤ h_max`, one canonical representative
    /// per equivalence class, sorted by `(h, d, t)`.
    pub families: Vec<Family>,
    /// All primitive `(t, r)` classes with `d ≤ 4·h_max`, in discovery order.
    pub classes: Vec<PrimitiveClass>,
}

/// Enumerates every family with cofactor `h ≤ h_max` up to equivalence.
pub fn generate(k: EmbeddingDegree, h_max: u64) -> Result<Vec<Family>, FamilyError> {
    Ok(generate_with_classes(k, h_max)?.families)
}

/// Enumerates families together with the primitive classes that seeded them.
///
/// The sweep follows the breadth-first discovery order: `|a|` ascending from
/// 1 to `4·h_max`, positive `a` before negative, `b` ascending over
/// `[0, |a|)`. A candidate `(t, r)` deducible from an earlier class is
/// skipped; each surviving class then yields one family per cofactor
/// `h ∈ [⌈d/4⌉, h_max]` whose field polynomial passes [`make_q`].
pub fn generate_with_classes(
    k: EmbeddingDegree,
    h_max: u64,
) -> Result<Generation, FamilyError> {
    if h_max == 0 || h_max > (1 << 31) {
        return Err(FamilyError::InvalidCofactorBound(h_max));
    }
    let a_max = 4 * h_max;
    let mut classes: Vec<PrimitiveClass> = Vec::new();
    let mut families: Vec<Family> = Vec::new();

    for abs_a in 1..=a_max {
        for sign in [1i64, -1] {
            let a = BigInt::from(sign * abs_a as i64);
            for b in 0..abs_a {
                let t = LinPoly {
                    a: a.clone(),
                    b: BigInt::from(b),
                };
                let (d, r) = split_d_r(k, &t)?;
                if classes
                    .iter()
                    .any(|class| is_deduced((&t, &r), (&class.t, &class.r)).is_some())
                {
                    continue;
                }
                let class = PrimitiveClass {
                    d,
                    t: t.clone(),
                    r: r.clone(),
                };
                classes.push(class);
                let h_min = d.div_ceil(4).max(1);
                for h in h_min..=h_max {
                    match make_q(h, &r, &t) {
                        Ok(q) => families.push(Family {
                            k,
                            h,
                            d,
                            t: t.clone(),
                            r: r.clone(),
                            q,
                        }),
                        Err(_) => continue,
                    }
                }
            }
        }
    }

    families.sort_by(|x, y| {
        (x.h, x.d, &x.t.a, &x.t.b)
            .cmp(&(y.h, y.d, &y.t.a, &y.t.b))
    });
    Ok(Generation { families, classes })
}

/// The families with cofactor exactly `h`, in the deterministic generation
/// order (used for `--index` style lookups).
pub fn families_at(k: EmbeddingDegree, h: u64) -> Result<Vec<Family>, FamilyError> {
    Ok(generate(k, h)?
        .into_iter()
        .filter(|family| family.h == h)
        .collect())
}

/// Recovers the true cofactor and primitive subgroup order from a `(q, t)`
/// pair: writes `q + 1 − t = h·r` with `r` primitive and checks that `r`
/// matches the content split of `Φ_k(t − 1)`. Errors with
/// [`FamilyError::NotNearPrime`] when no such decomposition exists.
pub fn real_cofactor(
    q: &QuadPoly,
    t: &LinPoly,
    k: EmbeddingDegree,
) -> Result<(u64, QuadPoly), FamilyError> {
    let mut n = q.clone();
    n.c1 -= &t.a;
    n.c0 += BigInt::one() - &t.b;
    if n.is_zero() || n.c2.is_negative() || n.c2.is_zero() {
        return Err(FamilyError::NotNearPrime(format!(
            "q + 1 - t = {n} is not a positive quadratic"
        )));
    }
    let content = n.content()?;
    let h = content
        .to_u64()
        .ok_or_else(|| FamilyError::ContentOverflow(content.to_string()))?;
    let r = n.div_exact(&content);
    let (_, split_r) = split_d_r(k, t)?;
    if r != split_r {
        return Err(FamilyError::NotNearPrime(format!(
            "primitive part {r} does not match the subgroup order {split_r} of the trace"
        )));
    }
    Ok((h, r))
}

// --- Structural verification -------------------------------------------------

/// One named invariant check inside a [`FamilyReport`].
#[derive(Debug, Clone, Serialize)]
pub struct FamilyCheck {
    /// Stable identifier of the invariant.
    pub name: &'static str,
    /// Whether the invariant holds.
    pub passed: bool,
    /// Human-readable evidence.
    pub detail: String,
}

/// The outcome of [`verify_family`]: one entry per structural invariant.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyReport {
    /// Individual invariant results.
    pub checks: Vec<FamilyCheck>,
}

impl FamilyReport {
    /// True when every check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Names of the failing checks.
    pub fn failures(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }
}

/// Runs every structural invariant against an arbitrary `(k, h, t, r, q)`
/// claim and reports each outcome (rather than stopping at the first
/// failure, as [`Family::from_parts`] does).
pub fn verify_family(
    k: EmbeddingDegree,
    h: u64,
    t: &LinPoly,
    r: &QuadPoly,
    q: &QuadPoly,
) -> FamilyReport {
    let mut checks = Vec::new();
    let mut push = |name: &'static str, passed: bool, detail: String| {
        checks.push(FamilyCheck {
            name,
            passed,
            detail,
        });
    };

    let trace_ok = !t.a.is_zero();
    push(
        "trace-nonconstant",
        trace_ok,
        format!("t = {t}"),
    );
    if !trace_ok {
        return FamilyReport { checks };
    }

    let (d, split_r) = split_d_r(k, t).expect("trace is nonconstant");
    push(
        "content-split",
        *r == split_r,
        format!("Φ_{k}(t − 1) = {d}·({split_r}); declared r = {r}"),
    );

    let content_ok = r.content().map(|c| c.is_one()).unwrap_or(false);
    push(
        "subgroup-primitive",
        content_ok,
        format!("content(r) where r = {r}"),
    );

    let r_irreducible = r.is_irreducible_quadratic().unwrap_or(false);
    push(
        "subgroup-irreducible",
        r_irreducible,
        format!("disc(r) = {}", r.discriminant()),
    );

    // q + 1 − t == h·r, checked coefficient-wise.
    let mut lhs = q.clone();
    lhs.c1 -= &t.a;
    lhs.c0 += BigInt::one() - &t.b;
    let rhs = r.scale(&BigInt::from(h));
    push(
        "cardinality-identity",
        lhs == rhs,
        format!("q + 1 - t = {lhs}, h·r = {rhs}"),
    );

    push(
        "hasse-cofactor",
        4 * h >= d,
        format!("4h = {} vs d = {d}", 4 * h),
    );

    let q_irreducible = q.is_irreducible_quadratic().unwrap_or(false);
    push(
        "q-irreducible",
        q_irreducible,
        format!("disc(q) = {}", q.discriminant()),
    );

    let value_gcd_ok = q.value_gcd().map(|g| g.is_one()).unwrap_or(false);
    push(
        "q-value-gcd",
        value_gcd_ok,
        format!(
            "gcd of q(0), q(1), q(2) = {}",
            q.value_gcd().map(|g| g.to_string()).unwrap_or_default()
        ),
    );

    // Every prime factor of d divides k or is ≡ 1 (mod k).
    let k_val = k.value();
    let factor_ok = crate::arith::factor_u64(d.max(1))
        .into_iter()
        .all(|(p, _)| k_val % p == 0 || p % k_val == 1);
    push(
        "content-prime-factors",
        factor_ok,
        format!("d = {d}, k = {k_val}"),
    );

    FamilyReport { checks }
}
