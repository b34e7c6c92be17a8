//! Computational toolkit for near prime-order MNT elliptic-curve families.
//!
//! An MNT curve over a prime field `F_q` has embedding degree `k ∈ {3, 4, 6}`,
//! trace `t`, and a subgroup of prime order `r` with `r | Φ_k(q)`, where the
//! cardinality factors as `#E(F_q) = h·r` for a small cofactor `h`. Families of
//! such curves are parametrised by polynomials `(q(x), r(x), t(x))` with a
//! linear trace; this crate provides the complete desk-scale pipeline:
//!
//! * [`intpoly`] — exact integer polynomial arithmetic (degree ≤ 2) used by
//!   every other module;
//! * [`families`] — enumeration of all families up to equivalence for a given
//!   embedding degree and cofactor bound, together with the structural
//!   invariants (content splitting, companion traces, deduction relations);
//! * [`table`] — a bundled reference table of families for `h ≤ 6` plus an
//!   audit that reconciles the library output against it, flagging known
//!   misprints in the source data;
//! * [`counting`] — the closed-form count of candidate residue classes per
//!   content divisor `d`, with a brute-force oracle;
//! * [`pell`] — reduction of a family's CM equation to a generalized Pell
//!   equation `y² − g·m² = f` and its exact solution (fundamental units,
//!   solution classes, orbit enumeration under congruence constraints);
//! * [`search`] — concrete curve-instance search by direct sweep or via the
//!   Pell route, with deterministic primality and square-free decisions;
//! * [`stats`] — local densities `C_p`, the multiplicative function `ρ(m)`,
//!   admissible residue classes, truncated Euler products, and an instance
//!   census `E(z)`.
//!
//! All algebra is exact (`num-bigint`); floating point appears only in
//! reported summary figures, never in decisions.
//!
//! # Example
//!
//! Enumerate the embedding-degree-6 families of prime-order curves, reduce
//! the first one's CM equation to Pell form, and find its smallest instance:
//!
//! ```
//! use mntkit_core::families::{generate, EmbeddingDegree};
//! use mntkit_core::{reduce, sweep};
//!
//! let families = generate(EmbeddingDegree::K6, 1)?;
//! let pell = reduce(&families[0])?;
//! assert_eq!(pell.f().to_string(), "-8"); // y² − 3·D·m² = −8
//!
//! let report = sweep(&families[0], -10, 10, 100);
//! let first = &report.instances[0];
//! assert_eq!(first.q.to_string(), "5");
//! assert_eq!(first.r.to_string(), "7");
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod arith;
pub mod counting;
pub mod families;
pub mod intpoly;
pub mod pell;
pub mod search;
pub mod stats;
pub mod table;

pub use families::{EmbeddingDegree, Family, FamilyError, MakeQRejection};
pub use intpoly::{IntPolyError, LinPoly, QuadPoly};
pub use pell::{
    class_representatives, fundamental_unit, is_ambiguous, orbit_solutions, reduce, same_class,
    solutions_in_congruence, PellError, PellInstance, PellSolutionClass,
};
pub use search::{
    check_embedding_degree, is_prime, pell_search, squarefree_part, squarefree_part_with_bound,
    sweep, sweep_with_jobs, CurveInstance, Primality, SearchError, SearchReport,
    DEFAULT_TRIAL_BOUND,
};
pub use stats::{
    admissible_classes, c_p, census, census_with_jobs, delta_poly, density_profile,
    euler_constants, rho_fn, AdmissibleClasses, CensusReport, DensityProfile, EulerConstants,
    StatsError, DECIMAL_DIGITS,
};
pub use table::{
    ReconciliationReport, ReferenceRow, RowAudit, RowFinding, TableAuditReport, TableError,
    REFERENCE_ROWS,
};
