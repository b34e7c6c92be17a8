//! Property-based tests: randomized structural laws that complement the
//! deterministic oracle suites in the unit tests and the acceptance gate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use mntkit_core::arith::{factor_u64, isqrt, kronecker, perfect_sqrt, sieve_primes, squarefree_flags};
use mntkit_core::counting::{n_d_formula, n_d_oracle};
use mntkit_core::families::{self, EmbeddingDegree};
use mntkit_core::pell::orbit_step;
use mntkit_core::table::{parse_linear, parse_quadratic};
use mntkit_core::{
    fundamental_unit, same_class, squarefree_part_with_bound, sweep, LinPoly, QuadPoly,
};

fn embedding_degree(index: u8) -> EmbeddingDegree {
    EmbeddingDegree::ALL[(index % 3) as usize]
}

proptest! {
    // ---- polynomial text parsing -------------------------------------------

    /// The parser classifies arbitrary text as Ok or Err; it never panics.
    #[test]
    fn parser_total_on_arbitrary_text(s in ".{0,40}") {
        let _ = parse_linear(&s);
        let _ = parse_quadratic(&s);
    }

    /// Near-grammar text is equally safe, and parse → print → parse is a
    /// fixpoint whenever the first parse succeeds.
    #[test]
    fn parser_stable_on_near_grammar_text(
        s in "-?[0-9]{0,3}x\\^2( [+-] [0-9]{0,3}x)?( [+-] [0-9]{0,3})?",
    ) {
        if let Ok(p) = parse_quadratic(&s) {
            prop_assert_eq!(parse_quadratic(&p.to_string()).expect("reprint parses"), p);
        }
    }

    /// Printed linear polynomials parse back to the same value.
    #[test]
    fn parser_round_trips_displayed_linear(a in any::<i64>(), b in any::<i64>()) {
        prop_assume!(a != 0);
        let p = LinPoly::new(a, b);
        prop_assert_eq!(parse_linear(&p.to_string()).expect("display parses"), p);
    }

    /// Printed quadratics parse back to the same value.
    #[test]
    fn parser_round_trips_displayed_quadratic(
        c2 in any::<i64>(),
        c1 in any::<i64>(),
        c0 in any::<i64>(),
    ) {
        prop_assume!(c2 != 0);
        let p = QuadPoly::new(c2, c1, c0);
        prop_assert_eq!(parse_quadratic(&p.to_string()).expect("display parses"), p);
    }

    // ---- Kronecker symbol ---------------------------------------------------

    /// Complete multiplicativity in the numerator.
    #[test]
    fn kronecker_multiplicative_in_numerator(
        a in -1_000_000i64..1_000_000,
        b in -1_000_000i64..1_000_000,
        n in 1u32..50_000,
    ) {
        let n = BigInt::from(n);
        let product = kronecker(&(BigInt::from(a) * b), &n);
        prop_assert_eq!(product, kronecker(&BigInt::from(a), &n) * kronecker(&BigInt::from(b), &n));
    }

    /// The symbol vanishes exactly on shared factors.
    #[test]
    fn kronecker_vanishes_exactly_on_common_factors(
        a in any::<i64>(),
        n in 1u32..100_000,
    ) {
        let a = BigInt::from(a);
        let n = BigInt::from(n);
        prop_assert_eq!(kronecker(&a, &n) == 0, !a.gcd(&n).is_one());
    }

    /// At an odd prime the symbol obeys Euler's criterion.
    #[test]
    fn kronecker_matches_eulers_criterion(a in any::<i64>(), index in 1usize..168) {
        let p = BigInt::from(sieve_primes(1000)[index]);
        let exponent = (&p - 1) / 2;
        let power = BigInt::from(a).mod_floor(&p).modpow(&exponent, &p);
        let expected = if power.is_zero() {
            0
        } else if power.is_one() {
            1
        } else {
            prop_assert_eq!(&power, &(&p - 1), "Euler power must be 0, 1, or p-1");
            -1
        };
        prop_assert_eq!(kronecker(&BigInt::from(a), &p), expected);
    }

    // ---- integer square roots and square-free decomposition ----------------

    /// `isqrt` brackets its argument.
    #[test]
    fn isqrt_brackets_the_argument(n in any::<u128>()) {
        let n = BigInt::from(n);
        let r = isqrt(&n);
        prop_assert!(&r * &r <= n);
        prop_assert!((&r + 1) * (&r + 1) > n);
    }

    /// `perfect_sqrt` accepts exactly the squares.
    #[test]
    fn perfect_sqrt_detects_squares(n in 0u64..u64::MAX) {
        let square = BigInt::from(n) * n;
        prop_assert_eq!(perfect_sqrt(&square), Some(BigInt::from(n)));
        if n >= 2 {
            prop_assert_eq!(perfect_sqrt(&(square - 1)), None);
        }
    }

    /// The square-free decomposition reconstructs its input with a
    /// square-free first factor.
    #[test]
    fn squarefree_part_reconstructs(n in 1u64..=u64::from(u32::MAX)) {
        let n = BigInt::from(n);
        let (d, m) = squarefree_part_with_bound(&n, 1 << 16).expect("decomposable");
        prop_assert_eq!(&d * &m * &m, n);
        let d_small: u64 = (&d).try_into().expect("square-free part fits");
        prop_assert!(factor_u64(d_small).into_iter().all(|(_, e)| e == 1));
    }

    /// Decomposition inverts construction: `d` square-free times a square
    /// comes back apart exactly.
    #[test]
    fn squarefree_part_inverts_construction(
        d in (1u64..1000).prop_filter("square-free", |&d| squarefree_flags(d)[d as usize]),
        m in 1u64..10_000,
    ) {
        let n = BigInt::from(d) * m * m;
        let (d_out, m_out) = squarefree_part_with_bound(&n, 1 << 16).expect("decomposable");
        prop_assert_eq!(d_out, BigInt::from(d));
        prop_assert_eq!(m_out, BigInt::from(m));
    }

    // ---- Pell units, orbits, and classes ------------------------------------

    /// The fundamental unit solves the unit equation with positive entries.
    #[test]
    fn fundamental_unit_solves_unit_equation(g in 2u64..500) {
        prop_assume!(perfect_sqrt(&BigInt::from(g)).is_none());
        let g = BigInt::from(g);
        let (t, u) = fundamental_unit(&g).expect("non-square modulus");
        prop_assert!(t.is_positive() && u.is_positive());
        prop_assert_eq!(&t * &t - &g * &u * &u, BigInt::one());
    }

    /// The unit action maps solutions to solutions of the same class, and
    /// class membership is reflexive and symmetric.
    #[test]
    fn orbit_step_preserves_solution_and_class(
        g in 2u64..200,
        y in -1_000_000i64..1_000_000,
        m in -1_000_000i64..1_000_000,
    ) {
        prop_assume!(perfect_sqrt(&BigInt::from(g)).is_none());
        let g = BigInt::from(g);
        let (y, m) = (BigInt::from(y), BigInt::from(m));
        let f = &y * &y - &g * &m * &m;
        prop_assume!(!f.is_zero());
        let unit = fundamental_unit(&g).expect("non-square modulus");
        let (y2, m2) = orbit_step(&g, &unit, &y, &m);
        prop_assert_eq!(&y2 * &y2 - &g * &m2 * &m2, f.clone());
        prop_assert!(same_class(&g, &f, (&y, &m), (&y, &m)), "reflexivity");
        prop_assert!(same_class(&g, &f, (&y, &m), (&y2, &m2)), "unit action stays in class");
        prop_assert!(same_class(&g, &f, (&y2, &m2), (&y, &m)), "symmetry");
    }

    // ---- counting and family serialization ----------------------------------

    /// The closed-form candidate count agrees with the brute-force oracle on
    /// random inputs beyond the acceptance sweep.
    #[test]
    fn candidate_count_formula_matches_oracle(k in any::<u8>(), d in 1u64..=3000) {
        let k = embedding_degree(k);
        prop_assert_eq!(n_d_formula(k, d), n_d_oracle(k, d));
    }

    /// Families survive a JSON round trip unchanged (the deserializer
    /// re-validates all invariants on the way in).
    #[test]
    fn family_json_round_trip(k in any::<u8>(), h in 1u64..=6, pick in any::<usize>()) {
        let k = embedding_degree(k);
        let all = families::generate(k, h).expect("generation succeeds");
        prop_assume!(!all.is_empty());
        let family = &all[pick % all.len()];
        let text = serde_json::to_string(family).expect("serializes");
        let back: families::Family = serde_json::from_str(&text).expect("parses");
        prop_assert_eq!(&back, family);
    }

    /// Curve instances survive a JSON round trip (coefficients ride as
    /// decimal strings).
    #[test]
    fn curve_instance_json_round_trip(k in any::<u8>(), h in 1u64..=6, x0 in -300i64..260) {
        let k = embedding_degree(k);
        let all = families::generate(k, h).expect("generation succeeds");
        prop_assume!(!all.is_empty());
        let report = sweep(&all[0], x0, x0 + 40, 50);
        for instance in &report.instances {
            let text = serde_json::to_string(instance).expect("serializes");
            let back: mntkit_core::CurveInstance = serde_json::from_str(&text).expect("parses");
            prop_assert_eq!(&back, instance);
        }
    }
}
