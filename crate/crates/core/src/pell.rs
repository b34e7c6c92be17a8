//! Reduction of a family's CM equation to a generalized Pell equation, and an
//! exact solver for `y² − g·m² = f`.
//!
//! For a family with trace `t = a·x + b`, cofactor `h`, and content divisor
//! `d`, multiplying the CM form `4·q(x) − t(x)²` by `u = d(4h − d)` completes
//! a square:
//!
//! ```text
//!     (w0·x + w1)² + w2 = u · (4·q(x) − t(x)²)
//! ```
//!
//! with `w0 = a(4h − d)`, `w1 = b(4h − d) − 2(εh − d)`, and
//! `w2 = 4h(4 − ε)(εh − d)`, where `ε` is the constant with
//! `Φ_k(t − 1) = t² − εt + ε` (so `ε = 1, 2, 3` for `k = 3, 4, 6`). Requiring
//! `4·q(x) − t(x)² = D·m²` for a fixed square-free discriminant value `D`
//! turns the CM condition into the generalized Pell equation
//!
//! ```text
//!     y² − g·m² = f,     y = w0·x + w1,   g = u·D,   f = −w2,
//! ```
//!
//! whose integer seed is recovered as `x = (y − w1)/w0` whenever the signed
//! root `y` lies in the residue class of `w1` modulo `w0`.
//!
//! The solver is classical: solutions of `y² − g·m² = f` split into finitely
//! many classes under multiplication by the fundamental unit `T + U·√g`
//! (`T² − g·U² = 1`); each class has a fundamental representative of minimal
//! `|m|`, and the full solution set is the union of the two-sided unit orbits
//! of the representatives. Representatives are located by the binary
//! quadratic form cycle method (see [`class_representatives`]), whose cost
//! does not depend on the size of the fundamental unit.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{big_mod_u64, factor_u64, isqrt, mulmod, perfect_sqrt};
use crate::families::Family;
use crate::intpoly::{LinPoly, QuadPoly};

/// Errors from the Pell layer.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PellError {
    /// The family sits on the Hasse boundary `4h = d` (or beyond it), where
    /// `w0 = a(4h − d)` vanishes and no substitution exists. No family with
    /// `4 ∤ d` can reach this (the content of `t² − εt + ε` is never divisible
    /// by 4), so the branch is defensive.
    #[error("degenerate Hasse boundary: need 4h > d, got h = {h}, d = {d}")]
    DegenerateHasseBoundary { h: u64, d: u64 },
    /// `fundamental_unit` of a perfect square: `T² − g·U² = 1` has no solution
    /// with `U > 0` because consecutive squares differ by more than 1.
    #[error("not a Pell modulus: {0} is a perfect square")]
    NotPellModulus(BigInt),
    /// The Pell modulus `g` must be positive.
    #[error("not a Pell modulus: {0} is not positive")]
    NonPositiveModulus(BigInt),
    /// `class_representatives` of `f = 0`: the class machinery divides by `f`.
    #[error("right-hand side must be nonzero")]
    ZeroRightHandSide,
    /// The factorization fallback for square `g` needs the divisors of `f`,
    /// and `|f|` exceeded the desk-scale trial-division range.
    #[error("right-hand side {0} is too large to factor for the square-modulus fallback")]
    UnfactoredRightHandSide(BigInt),
}

/// A family's CM equation in reduced Pell form.
///
/// All fields are exact integers; `f = −w2` and `u = d(4h − d) > 0`. The
/// instance keeps the originating [`Family`] so solutions can be mapped back
/// to curve seeds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellInstance {
    family: Family,
    w0: BigInt,
    w1: BigInt,
    w2: BigInt,
    u: BigInt,
    f: BigInt,
}

impl PellInstance {
    /// The family this instance was reduced from.
    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Substitution scale `w0 = a(4h − d)` (never zero).
    pub fn w0(&self) -> &BigInt {
        &self.w0
    }

    /// Substitution offset `w1 = b(4h − d) − 2(εh − d)`.
    pub fn w1(&self) -> &BigInt {
        &self.w1
    }

    /// Completed-square constant `w2 = 4h(4 − ε)(εh − d)`.
    pub fn w2(&self) -> &BigInt {
        &self.w2
    }

    /// Multiplier `u = d(4h − d) > 0`.
    pub fn u(&self) -> &BigInt {
        &self.u
    }

    /// Right-hand side `f = −w2` of the Pell equation.
    pub fn f(&self) -> &BigInt {
        &self.f
    }

    /// Pell modulus `g = u·D` for a concrete discriminant value `D`.
    pub fn g(&self, d_value: u64) -> BigInt {
        &self.u * BigInt::from(d_value)
    }

    /// Recovers the seed `x = (y − w1)/w0` from a signed root `y`, when the
    /// congruence `y ≡ w1 (mod w0)` holds.
    pub fn seed_for_root(&self, y: &BigInt) -> Option<BigInt> {
        let num = y - &self.w1;
        num.is_multiple_of(&self.w0).then(|| num / &self.w0)
    }

    /// The completed square `(w0·x + w1)² + w2` as a polynomial; identically
    /// equal to `u · (4·q(x) − t(x)²)`.
    pub fn delta_poly(&self) -> QuadPoly {
        let lin = LinPoly::new(self.w0.clone(), self.w1.clone());
        lin.square().add(&QuadPoly::new(0, 0, self.w2.clone()))
    }

    /// Checks the defining identity `(w0·x + w1)² + w2 = u·(4q − t²)` as an
    /// exact polynomial equation.
    pub fn identity_holds(&self) -> bool {
        let four_q = self.family.q().scale(&BigInt::from(4));
        let cm = four_q.sub(&self.family.t().square());
        self.delta_poly() == cm.scale(&self.u)
    }
}

/// Reduces a family's CM equation to Pell form.
///
/// Errors with [`PellError::DegenerateHasseBoundary`] when `4h > d` fails
/// (the substitution scale `w0` would vanish).
pub fn reduce(family: &Family) -> Result<PellInstance, PellError> {
    let h = family.h();
    let d = family.d();
    if 4 * h <= d {
        return Err(PellError::DegenerateHasseBoundary { h, d });
    }
    let eps = family.k().epsilon();
    let s = BigInt::from(4 * h - d);
    let a = &family.t().a;
    let b = &family.t().b;
    // εh − d as a signed quantity (εh < d happens, e.g. k = 3, h = 1, d = 3).
    let ehd = BigInt::from(eps) * BigInt::from(h) - BigInt::from(d);
    let w0 = a * &s;
    let w1 = b * &s - BigInt::from(2) * &ehd;
    let w2 = BigInt::from(4 * h) * BigInt::from(4 - eps) * &ehd;
    let u = BigInt::from(d) * &s;
    let f = -&w2;

    // Equivalent published form of the offset: w1 = 2h(2b − ε) − (b − 2)d.
    debug_assert_eq!(
        w1,
        BigInt::from(2 * h) * (BigInt::from(2) * b - BigInt::from(eps))
            - (b - BigInt::from(2)) * BigInt::from(d),
        "the two closed forms of w1 disagree"
    );
    // Long-form right-hand side: f = w1² − ((4h−d)b)² + 4(4h−d)(b−1)(εh−d).
    debug_assert_eq!(
        f,
        &w1 * &w1 - (&s * b) * (&s * b)
            + BigInt::from(4) * &s * (b - BigInt::one()) * &ehd,
        "long-form right-hand side disagrees with −w2"
    );

    let instance = PellInstance {
        family: family.clone(),
        w0,
        w1,
        w2,
        u,
        f,
    };
    debug_assert!(instance.identity_holds(), "completed-square identity failed");
    Ok(instance)
}

/// One equivalence class of solutions of `y² − g·m² = f`, stored through its
/// fundamental representative: the member of minimal `|m|`, with ties broken
/// toward `y > 0`, then `m ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellSolutionClass {
    y: BigInt,
    m: BigInt,
    g: BigInt,
    f: BigInt,
}

impl PellSolutionClass {
    /// Representative `y` (non-negative by normalization).
    pub fn y(&self) -> &BigInt {
        &self.y
    }

    /// Representative `m` (minimal in absolute value over the class).
    pub fn m(&self) -> &BigInt {
        &self.m
    }

    /// The Pell modulus.
    pub fn g(&self) -> &BigInt {
        &self.g
    }

    /// The right-hand side.
    pub fn f(&self) -> &BigInt {
        &self.f
    }

    /// `true` when `gcd(y, m) = 1`.
    ///
    /// Primitivity is a class invariant: the unit action and its inverse are
    /// integer-linear in `(y, m)`, so every member of a class shares the gcd.
    /// Imprimitive classes are scaled copies of classes for a smaller
    /// right-hand side; e.g. for `g = 165, f = −176` the class of
    /// `(308, 24) = 4·(77, 6)` is `4` times a class of `y² − 165m² = −11`.
    pub fn is_primitive(&self) -> bool {
        self.y.gcd(&self.m).is_one()
    }
}

/// Minimal `(T, U)` with `T² − g·U² = 1` and `T, U > 0`, computed from the
/// periodic continued fraction of `√g`.
///
/// Successive convergents `p/q` of `√g` are tested for `p² − g·q² = 1`; the
/// first hit is the fundamental solution (it occurs at the end of the first
/// or second period, depending on the period's parity).
pub fn fundamental_unit(g: &BigInt) -> Result<(BigInt, BigInt), PellError> {
    if !g.is_positive() {
        return Err(PellError::NonPositiveModulus(g.clone()));
    }
    let a0 = isqrt(g);
    if &a0 * &a0 == *g {
        return Err(PellError::NotPellModulus(g.clone()));
    }
    // Continued-fraction state for √g: term a_i = floor((a0 + P)/Q) with
    // P_{i+1} = a_i·Q_i − P_i and Q_{i+1} = (g − P_{i+1}²)/Q_i.
    let mut p_state = BigInt::zero();
    let mut q_state = BigInt::one();
    // Convergent recurrence seeds: p_{-1}/q_{-1} = 1/0, p_0/q_0 = a0/1.
    let mut p_prev = BigInt::one();
    let mut q_prev = BigInt::zero();
    let mut p_cur = a0.clone();
    let mut q_cur = BigInt::one();
    loop {
        if &p_cur * &p_cur - g * &q_cur * &q_cur == BigInt::one() {
            return Ok((p_cur, q_cur));
        }
        p_state = /* a_i·Q − P */ {
            let a_i = (&a0 + &p_state).div_floor(&q_state);
            a_i * &q_state - p_state
        };
        q_state = (g - &p_state * &p_state).div_exact_by(&q_state);
        let a_next = (&a0 + &p_state).div_floor(&q_state);
        let p_next = &a_next * &p_cur + &p_prev;
        let q_next = &a_next * &q_cur + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_next);
        q_prev = std::mem::replace(&mut q_cur, q_next);
    }
}

trait DivExactBy {
    fn div_exact_by(self, d: &BigInt) -> BigInt;
}

impl DivExactBy for BigInt {
    fn div_exact_by(self, d: &BigInt) -> BigInt {
        debug_assert!(self.is_multiple_of(d));
        self / d
    }
}

/// Whether two solutions of `y² − g·m² = f` lie in the same class.
///
/// With `α = y₁ + m₁√g` and `β = y₂ + m₂√g`, the classes coincide exactly
/// when `α·β̄/f` lies in `ℤ[√g]`, i.e. when both
/// `(y₁y₂ − g·m₁m₂)/f` and `(y₁m₂ − y₂m₁)/f` are integers. The test also
/// identifies `α` with `−α`, matching the unit-orbit equivalence.
pub fn same_class(g: &BigInt, f: &BigInt, a: (&BigInt, &BigInt), b: (&BigInt, &BigInt)) -> bool {
    debug_assert!(!f.is_zero());
    let cross0 = a.0 * b.0 - g * a.1 * b.1;
    let cross1 = a.0 * b.1 - b.0 * a.1;
    cross0.is_multiple_of(f) && cross1.is_multiple_of(f)
}

/// `true` when the class contains its own conjugate `(y, −m)`, decided by the
/// integrality of `(y² + g·m²)/f` and `(2·y·m)/f`.
///
/// Note the scope of the classical parity obstruction: for square-free `g`
/// and `4 | f`, an ambiguous class is necessarily imprimitive (both `y` and
/// `m` must be even), so no *primitive* ambiguous class exists. Imprimitive
/// ambiguous classes do occur — `g = 165, f = −176` has the ambiguous class
/// of `(308, 24)` — and for non-square-free `g` even primitive ones appear
/// (`g = 12, f = 4`, class of `(4, 1)`).
pub fn is_ambiguous(c: &PellSolutionClass) -> bool {
    let sym = &c.y * &c.y + &c.g * &c.m * &c.m;
    let skew = BigInt::from(2) * &c.y * &c.m;
    sym.is_multiple_of(&c.f) && skew.is_multiple_of(&c.f)
}

/// Exactly one fundamental representative per solution class of
/// `y² − g·m² = f`, in deterministic order (by `|m|`, sign of `m`, then `y`).
///
/// Representatives are found by the classical cycle method for indefinite
/// binary quadratic forms, so the cost is independent of the size of the
/// fundamental unit (a bounded scan would need `~√(|f|·T/g)` steps, which is
/// astronomical for moduli like `g = 181` with `T ≈ 2.5·10¹⁸`). Writing `σ²`
/// for the square divisors of `f` and `N = f/σ²`, every solution is `σ`
/// times a primitive solution of `y² − g·m² = N`. Across a primitive class,
/// `z = y·m⁻¹ (mod |N|)` is constant and satisfies `z² ≡ g (mod |N|)`;
/// conversely, substituting `y = z·m + N·s` identifies the class with
/// residue `z` with the proper representations of 1 by the form
/// `F_z = (N, 2z, (z² − g)/N)` of discriminant `4g`, which form a single
/// orbit. `F_z` represents 1 exactly when its reduction cycle contains a
/// form with leading coefficient 1; walking the cycle with the accumulated
/// determinant-one transformation produces the representation. Each found
/// solution is then walked along the unit orbit to the class's fundamental
/// representative (minimal `|m|`; ties toward `y > 0`, then `m ≥ 0`).
///
/// Returns an empty list when the equation has no solutions. Errors:
/// [`PellError::ZeroRightHandSide`] for `f = 0`, the [`fundamental_unit`]
/// errors for `g` non-positive or square, and
/// [`PellError::UnfactoredRightHandSide`] when `|f|` exceeds the residue
/// enumeration range.
pub fn class_representatives(
    g: &BigInt,
    f: &BigInt,
) -> Result<Vec<PellSolutionClass>, PellError> {
    let unit = fundamental_unit(g)?;
    class_representatives_with_unit(g, f, &unit)
}

/// [`class_representatives`] with a precomputed fundamental unit for `g`.
fn class_representatives_with_unit(
    g: &BigInt,
    f: &BigInt,
    unit: &(BigInt, BigInt),
) -> Result<Vec<PellSolutionClass>, PellError> {
    if f.is_zero() {
        return Err(PellError::ZeroRightHandSide);
    }
    let f_abs: u64 = (&f.abs())
        .try_into()
        .map_err(|_| PellError::UnfactoredRightHandSide(f.clone()))?;
    let mut reps = Vec::new();
    for sigma in square_divisor_scales(f_abs) {
        let scale = BigInt::from(sigma);
        let n = f / (&scale * &scale);
        for z in residue_square_roots(g, &n) {
            if let Some((y, m)) = primitive_solution(g, &n, z) {
                debug_assert_eq!(&y * &y - g * &m * &m, n, "solution check");
                debug_assert!(y.gcd(&m).is_one(), "primitivity check");
                let (y, m) = minimal_representative(g, unit, y * &scale, m * &scale);
                reps.push(PellSolutionClass {
                    y,
                    m,
                    g: g.clone(),
                    f: f.clone(),
                });
            }
        }
    }
    reps.sort_by_key(|c| (c.m.abs(), c.m.is_negative(), c.y.clone()));
    debug_assert!(
        (0..reps.len()).all(|i| {
            (0..i).all(|j| {
                !same_class(g, f, (&reps[i].y, &reps[i].m), (&reps[j].y, &reps[j].m))
            })
        }),
        "class representatives must be pairwise inequivalent"
    );
    Ok(reps)
}

/// All `σ ≥ 1` with `σ² | n`, ascending.
fn square_divisor_scales(n: u64) -> Vec<u64> {
    let mut scales = vec![1u64];
    for (p, e) in factor_u64(n) {
        let half = e / 2;
        if half == 0 {
            continue;
        }
        let existing = scales.clone();
        let mut power = 1u64;
        for _ in 0..half {
            power *= p;
            scales.extend(existing.iter().map(|s| s * power));
        }
    }
    scales.sort_unstable();
    scales
}

/// All `z ∈ [0, |n|)` with `z² ≡ g (mod |n|)`, by direct enumeration.
fn residue_square_roots(g: &BigInt, n: &BigInt) -> Vec<u64> {
    let n_abs: u64 = (&n.abs())
        .try_into()
        .expect("|N| fits in u64 because |f| does");
    let target = big_mod_u64(g, n_abs);
    (0..n_abs)
        .filter(|&z| mulmod(z, z, n_abs) == target)
        .collect()
}

/// Whether an indefinite form `(a, b, c)` of discriminant `4g` is reduced:
/// `0 < b < √(4g)` and `√(4g) − 2|a| < b < √(4g) + 2|a|`. `root = ⌊√(4g)⌋`;
/// the comparisons are exact because `√(4g)` is irrational.
fn form_is_reduced(form: &(BigInt, BigInt, BigInt), root: &BigInt) -> bool {
    let (a, b, _) = form;
    let two_a = BigInt::from(2) * a.abs();
    b.is_positive() && b <= root && root + BigInt::one() <= b + &two_a && two_a - b <= *root
}

/// One normalization step `ρ` on a form of discriminant `4g`: replaces
/// `(a, b, c)` by its right neighbor `(c, b′, c′)` with `b′ ≡ −b (mod 2|c|)`
/// in the standard window (upper edge `⌊√(4g)⌋` when `|c| ≤ ⌊√(4g)⌋`, else
/// `|c|`), and multiplies the accumulated transformation by the
/// determinant-one column move `[[0, −1], [1, s]]` with `s = (b′ + b)/(2c)`.
/// Iterating `ρ` reduces any form and then walks its cycle of reduced forms.
fn rho_step(
    form: &mut (BigInt, BigInt, BigInt),
    trans: &mut [BigInt; 4],
    four_g: &BigInt,
    root: &BigInt,
) {
    let (_, b, c) = form.clone();
    debug_assert!(!c.is_zero(), "forms of non-square discriminant");
    let c_abs = c.abs();
    let two_c_abs = BigInt::from(2) * &c_abs;
    let upper = if c_abs > *root { c_abs } else { root.clone() };
    let b_next = &upper - (&upper + &b).mod_floor(&two_c_abs);
    let s = (&b_next + &b).div_exact_by(&(BigInt::from(2) * &c));
    let c_next = (&b_next * &b_next - four_g).div_exact_by(&(BigInt::from(4) * &c));
    *form = (c, b_next, c_next);
    // trans = [m00 m01; m10 m11] ← trans · [[0, −1], [1, s]].
    let [m00, m01, m10, m11] = trans.clone();
    trans[0] = m01.clone();
    trans[1] = &s * &m01 - m00;
    trans[2] = m11.clone();
    trans[3] = &s * &m11 - m10;
    debug_assert_eq!(
        &form.1 * &form.1 - BigInt::from(4) * &form.0 * &form.2,
        *four_g,
        "discriminant is preserved"
    );
}

/// A primitive solution of `y² − g·m² = N` in the class with residue `z`
/// (where `z² ≡ g (mod |N|)`), or `None` when that class is empty.
///
/// Reduces the form `F_z = (N, 2z, (z² − g)/N)` and walks its cycle; if a
/// form with leading coefficient 1 appears, the first column `(s, m)` of the
/// accumulated transformation satisfies `F_z(s, m) = 1`, and `y = N·s + z·m`
/// gives the solution. If the cycle closes without one, `F_z` does not
/// represent 1 and the class is empty.
fn primitive_solution(g: &BigInt, n: &BigInt, z: u64) -> Option<(BigInt, BigInt)> {
    let z = BigInt::from(z);
    let c0 = (&z * &z - g).div_exact_by(n);
    let mut form = (n.clone(), BigInt::from(2) * &z, c0);
    let mut trans = [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()];
    let four_g = BigInt::from(4) * g;
    let root = isqrt(&four_g);

    let mut guard = 0u64;
    while !form_is_reduced(&form, &root) {
        rho_step(&mut form, &mut trans, &four_g, &root);
        guard += 1;
        assert!(guard < 1 << 20, "form reduction failed to terminate");
    }
    let start = form.clone();
    loop {
        if form.0.is_one() {
            let s = &trans[0];
            let m = &trans[2];
            let y = n * s + &z * m;
            debug_assert_eq!(&y * &y - g * m * m, *n, "representation check");
            return Some((y, m.clone()));
        }
        rho_step(&mut form, &mut trans, &four_g, &root);
        debug_assert!(form_is_reduced(&form, &root), "cycle stays reduced");
        guard += 1;
        assert!(guard < 1 << 40, "form cycle failed to close");
        if form == start {
            return None;
        }
    }
}

/// Walks a solution along the unit orbit to its class's fundamental
/// representative: minimal `|m|`, ties toward `y > 0`, then `m ≥ 0`.
/// `|m|` is unimodal along the orbit (writing `y + m√g = A·ε^n + B·ε^{−n}`
/// makes `m_n` a two-term exponential), so a strict descent followed by a
/// one-step neighborhood comparison — including the negated copies, which
/// lie in the same class — finds the exact minimum.
fn minimal_representative(
    g: &BigInt,
    unit: &(BigInt, BigInt),
    y: BigInt,
    m: BigInt,
) -> (BigInt, BigInt) {
    let rep_key =
        |(y, m): &(BigInt, BigInt)| (m.abs(), y.is_negative(), !y.is_positive(), m.is_negative());
    let mut cur = (y, m);
    let mut guard = 0u32;
    loop {
        let fwd = orbit_step(g, unit, &cur.0, &cur.1);
        let back = orbit_step_back(g, unit, &cur.0, &cur.1);
        let here = cur.1.abs();
        if fwd.1.abs() < here {
            cur = fwd;
        } else if back.1.abs() < here {
            cur = back;
        } else {
            let mut candidates = vec![cur, fwd, back];
            let negated: Vec<(BigInt, BigInt)> =
                candidates.iter().map(|(y, m)| (-y, -m)).collect();
            candidates.extend(negated);
            return candidates
                .into_iter()
                .min_by_key(|c| rep_key(c))
                .expect("candidate set is nonempty");
        }
        guard += 1;
        assert!(guard < 1 << 16, "orbit descent failed to terminate");
    }
}

/// Classical fundamental-representative bound `ceil(sqrt(|f|(T+1)/(2g))) + 1`
/// (computed with a floor-isqrt plus slack, so it never undershoots). Kept as
/// a test oracle for the cycle method; too slow for production-size units.
#[cfg(test)]
fn nagell_bound(g: &BigInt, f: &BigInt, t_unit: &BigInt) -> BigInt {
    let num = f.abs() * (t_unit + BigInt::one());
    let den = BigInt::from(2) * g;
    isqrt(&num.div_floor(&den)) + BigInt::from(2)
}

/// All solutions `(y, m)` with `y ≥ 0` and `0 ≤ m ≤ m_max` (emitting both
/// `±m` for `m > 0`), found by scanning `m` and testing `f + g·m²` for
/// squareness incrementally. Test oracle for the cycle method.
#[cfg(test)]
fn scan_solutions(g: &BigInt, f: &BigInt, m_max: &BigInt) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    // rhs = f + g·m²; step = g·(2m + 1) keeps the update multiplication-free.
    let mut rhs = f.clone();
    let mut step = g.clone();
    let two_g = BigInt::from(2) * g;
    let mut m = BigInt::zero();
    while &m <= m_max {
        if let Some(y) = perfect_sqrt(&rhs) {
            if y.is_zero() || m.is_zero() {
                out.push((y, m.clone()));
            } else {
                out.push((y.clone(), m.clone()));
                out.push((y, -&m));
            }
        }
        rhs += &step;
        step += &two_g;
        m += BigInt::one();
    }
    out
}

/// Groups scanned solutions into classes and selects each class's fundamental
/// representative (minimal `|m|`; ties toward `y > 0`, then `m ≥ 0`).
/// Test oracle counterpart of [`class_representatives`].
#[cfg(test)]
fn group_into_classes(
    g: &BigInt,
    f: &BigInt,
    solutions: Vec<(BigInt, BigInt)>,
) -> Vec<PellSolutionClass> {
    let mut classes: Vec<Vec<(BigInt, BigInt)>> = Vec::new();
    for sol in solutions {
        match classes
            .iter_mut()
            .find(|c| same_class(g, f, (&c[0].0, &c[0].1), (&sol.0, &sol.1)))
        {
            Some(class) => class.push(sol),
            None => classes.push(vec![sol]),
        }
    }
    let mut reps: Vec<PellSolutionClass> = classes
        .into_iter()
        .map(|members| {
            let (y, m) = members
                .into_iter()
                .min_by_key(|(y, m)| (m.abs(), y.is_negative(), !y.is_positive(), m.is_negative()))
                .expect("class is nonempty");
            PellSolutionClass {
                y,
                m,
                g: g.clone(),
                f: f.clone(),
            }
        })
        .collect();
    reps.sort_by_key(|c| (c.m.abs(), c.m.is_negative(), c.y.clone()));
    reps
}

/// One forward step of the unit action:
/// `(y, m) ↦ (y·T + g·m·U, y·U + m·T)`.
pub fn orbit_step(g: &BigInt, unit: &(BigInt, BigInt), y: &BigInt, m: &BigInt) -> (BigInt, BigInt) {
    let (t, u) = unit;
    (y * t + g * m * u, y * u + m * t)
}

/// One backward step (multiplication by the unit's inverse `T − U√g`):
/// `(y, m) ↦ (y·T − g·m·U, m·T − y·U)`.
pub fn orbit_step_back(
    g: &BigInt,
    unit: &(BigInt, BigInt),
    y: &BigInt,
    m: &BigInt,
) -> (BigInt, BigInt) {
    let (t, u) = unit;
    (y * t - g * m * u, m * t - y * u)
}

/// All solutions `(y, m)` of `y² − g·m² = f` with `0 ≤ y ≤ y_cap`, reachable
/// from the given representatives by walking the unit orbit in both
/// directions. Solutions are sign-normalized to `y ≥ 0` (negating both
/// components stays inside the class) and returned sorted by `(y, m)`.
///
/// Along each direction `|m|` is non-decreasing from the fundamental
/// representative (it can plateau once, at an ambiguous class's conjugate),
/// so `y² = f + g·m²` eventually exceeds any cap and the walk terminates.
pub fn orbit_solutions(
    g: &BigInt,
    unit: &(BigInt, BigInt),
    reps: &[PellSolutionClass],
    y_cap: &BigInt,
) -> Vec<(BigInt, BigInt)> {
    let mut out: BTreeSet<(BigInt, BigInt)> = BTreeSet::new();
    for rep in reps {
        for forward in [true, false] {
            let mut y = rep.y.clone();
            let mut m = rep.m.clone();
            let mut guard = 0u32;
            loop {
                if y.abs() > *y_cap {
                    break;
                }
                let (ny, nm) = if y.is_negative() { (-&y, -&m) } else { (y.clone(), m.clone()) };
                out.insert((ny, nm));
                let (y2, m2) = if forward {
                    orbit_step(g, unit, &y, &m)
                } else {
                    orbit_step_back(g, unit, &y, &m)
                };
                y = y2;
                m = m2;
                guard += 1;
                assert!(guard < 4096, "unit orbit failed to escape the cap");
            }
        }
    }
    out.into_iter().collect()
}

/// All congruence-compatible seed pairs `(x, m)` of a reduced instance for a
/// concrete square-free discriminant value `D`.
///
/// Solves `y² − g·m² = f` with `g = u·D`, keeps solutions with
/// `0 < y ≤ y_limit`, and maps each signed root `ỹ ∈ {y, −y}` with
/// `ỹ ≡ w1 (mod w0)` to the seed `x = (ỹ − w1)/w0` (both signs can match, and
/// each match is emitted). `m` is reported non-negatively. Results are
/// deduplicated and sorted by `(x, m)`.
///
/// When `g` happens to be a perfect square `s²` the unit machinery does not
/// apply; the equation factors as `(y − s·m)(y + s·m) = f` and the finite
/// divisor-pair set is enumerated instead.
pub fn solutions_in_congruence(
    inst: &PellInstance,
    d_value: u64,
    y_limit: &BigInt,
) -> Result<Vec<(BigInt, BigInt)>, PellError> {
    let g = inst.g(d_value);
    assert!(
        g.is_positive(),
        "discriminant value D must be positive (got {d_value})"
    );
    if !y_limit.is_positive() {
        return Ok(Vec::new());
    }
    let f = &inst.f;

    let mut out: BTreeSet<(BigInt, BigInt)> = BTreeSet::new();
    let mut emit = |y: &BigInt, m: &BigInt| {
        for signed in [y.clone(), -y] {
            if let Some(x) = inst.seed_for_root(&signed) {
                out.insert((x, m.abs()));
            }
        }
    };

    if let Some(s) = perfect_sqrt(&g) {
        // Factorization fallback: (y − s·m)(y + s·m) = f over divisor pairs.
        if f.is_zero() {
            // y = s·|m| exactly; enumerate until y exceeds the limit.
            let mut m = BigInt::one();
            loop {
                let y = &s * &m;
                if y > *y_limit {
                    break;
                }
                emit(&y, &m);
                m += BigInt::one();
            }
        } else {
            let f_abs = f.abs();
            let f_small: u64 = (&f_abs)
                .try_into()
                .map_err(|_| PellError::UnfactoredRightHandSide(f.clone()))?;
            let two = BigInt::from(2);
            let two_s = &two * &s;
            for divisor in divisors(f_small) {
                for e1 in [BigInt::from(divisor), -BigInt::from(divisor)] {
                    let e2 = f / &e1;
                    let sum = &e1 + &e2;
                    if !sum.is_multiple_of(&two) {
                        continue;
                    }
                    let y = sum / &two;
                    if !y.is_positive() || y > *y_limit {
                        continue;
                    }
                    let diff = &e2 - &e1;
                    if !diff.is_multiple_of(&two_s) {
                        continue;
                    }
                    let m = diff / &two_s;
                    emit(&y, &m);
                }
            }
        }
        return Ok(out.into_iter().collect());
    }

    if f.is_zero() {
        // y² = g·m² with g non-square forces y = m = 0, excluded by y > 0.
        return Ok(Vec::new());
    }

    let unit = fundamental_unit(&g)?;
    let reps = class_representatives_with_unit(&g, f, &unit)?;
    for (y, m) in orbit_solutions(&g, &unit, &reps, y_limit) {
        if y.is_positive() {
            emit(&y, &m);
        }
    }
    Ok(out.into_iter().collect())
}

/// All positive divisors of `n > 0`.
fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factor_u64(n) {
        let existing = divs.clone();
        let mut power = 1u64;
        for _ in 0..e {
            power *= p;
            divs.extend(existing.iter().map(|d| d * power));
        }
    }
    divs.sort_unstable();
    divs
}
