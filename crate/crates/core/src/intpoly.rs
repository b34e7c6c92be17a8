//! Exact integer polynomials of degree at most two.
//!
//! Every object the toolkit manipulates — traces `t(x) = a·x + b`, subgroup
//! orders `r(x)`, field sizes `q(x)`, reduced discriminants `Δ(x)` — is an
//! integer polynomial of degree ≤ 2, so two concrete types suffice:
//! [`LinPoly`] and [`QuadPoly`]. Coefficients are arbitrary-precision
//! integers; all operations are exact.
//!
//! Conventions used throughout:
//! * `content` is the gcd of the coefficients (of a nonzero polynomial);
//! * `value_gcd` is the gcd of all integer values `p(n)`, `n ∈ ℤ` — for a
//!   degree ≤ 2 polynomial this equals `gcd(p(0), p(1), p(2))`;
//! * `substitute_linear(p, u, v)` is the composition `p(u·x + v)`, defined
//!   for `u ≠ 0` so composition is degree-preserving and invertible over ℚ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

/// Errors for polynomial operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntPolyError {
    /// `content` (or `value_gcd`) of the zero polynomial is undefined.
    #[error("zero polynomial has no content")]
    ZeroPolynomial,
    /// Linear substitution `x ↦ u·x + v` requires `u ≠ 0`.
    #[error("substitution scale u must be nonzero")]
    ZeroScale,
    /// Irreducibility test is defined only for genuine quadratics.
    #[error("not quadratic: leading coefficient is zero")]
    NotQuadratic,
}

/// Linear integer polynomial `a·x + b`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinPoly {
    /// Coefficient of `x`.
    pub a: BigInt,
    /// Constant term.
    pub b: BigInt,
}

/// Quadratic (or lower-degree) integer polynomial `c2·x² + c1·x + c0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadPoly {
    /// Coefficient of `x²`.
    pub c2: BigInt,
    /// Coefficient of `x`.
    pub c1: BigInt,
    /// Constant term.
    pub c0: BigInt,
}

impl LinPoly {
    /// Builds `a·x + b`.
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        LinPoly {
            a: a.into(),
            b: b.into(),
        }
    }

    /// Evaluates at `x`.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        &self.a * x + &self.b
    }

    /// Composition `self(u·x + v)`, which is again linear: `(a·u)·x + (a·v + b)`.
    pub fn substitute_linear(&self, u: &BigInt, v: &BigInt) -> Result<LinPoly, IntPolyError> {
        if u.is_zero() {
            return Err(IntPolyError::ZeroScale);
        }
        Ok(LinPoly {
            a: &self.a * u,
            b: &self.a * v + &self.b,
        })
    }

    /// `self²` as a quadratic.
    pub fn square(&self) -> QuadPoly {
        QuadPoly {
            c2: &self.a * &self.a,
            c1: BigInt::from(2) * &self.a * &self.b,
            c0: &self.b * &self.b,
        }
    }

    /// True iff the polynomial is identically zero.
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Negation `-a·x - b`.
    pub fn neg(&self) -> LinPoly {
        LinPoly {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

impl QuadPoly {
    /// Builds `c2·x² + c1·x + c0`.
    pub fn new(c2: impl Into<BigInt>, c1: impl Into<BigInt>, c0: impl Into<BigInt>) -> Self {
        QuadPoly {
            c2: c2.into(),
            c1: c1.into(),
            c0: c0.into(),
        }
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        QuadPoly::new(0, 0, 0)
    }

    /// Views a linear polynomial as a quadratic with leading coefficient 0.
    pub fn from_lin(p: &LinPoly) -> Self {
        QuadPoly {
            c2: BigInt::zero(),
            c1: p.a.clone(),
            c0: p.b.clone(),
        }
    }

    /// Evaluates at `x`.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        (&self.c2 * x + &self.c1) * x + &self.c0
    }

    /// True iff the polynomial is identically zero.
    pub fn is_zero(&self) -> bool {
        self.c2.is_zero() && self.c1.is_zero() && self.c0.is_zero()
    }

    /// Coefficient sum/difference helpers used by the family constructions.
    pub fn add(&self, other: &QuadPoly) -> QuadPoly {
        QuadPoly {
            c2: &self.c2 + &other.c2,
            c1: &self.c1 + &other.c1,
            c0: &self.c0 + &other.c0,
        }
    }

    /// `self - other`.
    pub fn sub(&self, other: &QuadPoly) -> QuadPoly {
        QuadPoly {
            c2: &self.c2 - &other.c2,
            c1: &self.c1 - &other.c1,
            c0: &self.c0 - &other.c0,
        }
    }

    /// `s · self` for an integer scalar `s`.
    pub fn scale(&self, s: &BigInt) -> QuadPoly {
        QuadPoly {
            c2: &self.c2 * s,
            c1: &self.c1 * s,
            c0: &self.c0 * s,
        }
    }

    /// Exact division of every coefficient by `s` (panics on inexact division;
    /// callers divide by a computed content, which always divides exactly).
    pub fn div_exact(&self, s: &BigInt) -> QuadPoly {
        let div = |c: &BigInt| {
            let (quot, rem) = c.div_rem(s);
            debug_assert!(rem.is_zero(), "inexact coefficient division");
            quot
        };
        QuadPoly {
            c2: div(&self.c2),
            c1: div(&self.c1),
            c0: div(&self.c0),
        }
    }

    /// Formal derivative `2·c2·x + c1`.
    pub fn derivative(&self) -> LinPoly {
        LinPoly {
            a: BigInt::from(2) * &self.c2,
            b: self.c1.clone(),
        }
    }

    /// Discriminant `c1² − 4·c2·c0`.
    pub fn discriminant(&self) -> BigInt {
        &self.c1 * &self.c1 - BigInt::from(4) * &self.c2 * &self.c0
    }

    /// Content: gcd of the coefficients, positive. Errors on the zero
    /// polynomial.
    pub fn content(&self) -> Result<BigInt, IntPolyError> {
        if self.is_zero() {
            return Err(IntPolyError::ZeroPolynomial);
        }
        Ok(self.c2.gcd(&self.c1).gcd(&self.c0))
    }

    /// Gcd of all integer values `p(n)`. For degree ≤ 2 this is
    /// `gcd(p(0), p(1), p(2))` (finite differences of order 3 vanish).
    /// Errors on the zero polynomial.
    pub fn value_gcd(&self) -> Result<BigInt, IntPolyError> {
        if self.is_zero() {
            return Err(IntPolyError::ZeroPolynomial);
        }
        let v0 = self.eval(&BigInt::zero());
        let v1 = self.eval(&BigInt::one());
        let v2 = self.eval(&BigInt::from(2));
        Ok(v0.gcd(&v1).gcd(&v2))
    }

    /// Composition `self(u·x + v)` for `u ≠ 0`.
    pub fn substitute_linear(&self, u: &BigInt, v: &BigInt) -> Result<QuadPoly, IntPolyError> {
        if u.is_zero() {
            return Err(IntPolyError::ZeroScale);
        }
        // c2(ux+v)² + c1(ux+v) + c0, expanded exactly.
        let u2 = u * u;
        let c2 = &self.c2 * &u2;
        let c1 = BigInt::from(2) * &self.c2 * u * v + &self.c1 * u;
        let c0 = &self.c2 * v * v + &self.c1 * v + &self.c0;
        Ok(QuadPoly { c2, c1, c0 })
    }

    /// Irreducibility over ℚ of a genuine quadratic: true iff the
    /// discriminant is not a perfect square. Errors when `c2 = 0`.
    pub fn is_irreducible_quadratic(&self) -> Result<bool, IntPolyError> {
        if self.c2.is_zero() {
            return Err(IntPolyError::NotQuadratic);
        }
        let disc = self.discriminant();
        Ok(crate::arith::perfect_sqrt(&disc).is_none())
    }
}

/// Gcd of the products `p(n)·q(n)` over all integers `n` — the fixed divisor
/// of the degree ≤ 4 product polynomial, computed from the five consecutive
/// values at `n = 0, …, 4` (finite differences of order 5 vanish for degree
/// ≤ 4). Errors if either factor is the zero polynomial.
pub fn product_value_gcd(p: &QuadPoly, q: &QuadPoly) -> Result<BigInt, IntPolyError> {
    if p.is_zero() || q.is_zero() {
        return Err(IntPolyError::ZeroPolynomial);
    }
    let mut g = BigInt::zero();
    for n in 0..=4 {
        let x = BigInt::from(n);
        g = g.gcd(&(p.eval(&x) * q.eval(&x)));
    }
    Ok(g)
}

fn fmt_term(
    f: &mut fmt::Formatter<'_>,
    coeff: &BigInt,
    power: u32,
    leading: &mut bool,
) -> fmt::Result {
    if coeff.is_zero() {
        return Ok(());
    }
    let abs = coeff.abs();
    if *leading {
        if coeff.is_negative() {
            write!(f, "-")?;
        }
        *leading = false;
    } else if coeff.is_negative() {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    match power {
        0 => write!(f, "{abs}"),
        _ => {
            if !abs.is_one() {
                write!(f, "{abs}")?;
            }
            if power == 1 {
                write!(f, "x")
            } else {
                write!(f, "x^{power}")
            }
        }
    }
}

impl fmt::Display for LinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut leading = true;
        fmt_term(f, &self.a, 1, &mut leading)?;
        fmt_term(f, &self.b, 0, &mut leading)
    }
}

impl fmt::Display for QuadPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut leading = true;
        fmt_term(f, &self.c2, 2, &mut leading)?;
        fmt_term(f, &self.c1, 1, &mut leading)?;
        fmt_term(f, &self.c0, 0, &mut leading)
    }
}

impl fmt::Debug for LinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinPoly({self})")
    }
}

impl fmt::Debug for QuadPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadPoly({self})")
    }
}
