//! Exact evaluation of intersection numbers on Quot schemes and on the moduli
//! space of stable bundles over a curve.
//!
//! The engine computes the same geometric quantities along independent routes
//! and cross-validates them:
//!
//! * [`quotvi`] — virtual intersection numbers on the Quot scheme of a trivial
//!   bundle, as exact sums of a rational function over tuples of distinct
//!   N-th roots of unity, carried out in cyclotomic fields.
//! * [`residueengine`] — the same numbers as iterated residues of meromorphic
//!   forms, plus top pairings on the moduli space of bundles and Verlinde-type
//!   Euler characteristics.
//! * [`wittenreps`] — infinite sums over irreducible representations of SU(r)
//!   evaluated as high-precision truncated series, an independent
//!   transcendental check of the residue values.
//! * [`versuite`] — the verification pipeline: cross-method equivalence grids,
//!   leading-coefficient extraction from N-asymptotics, vanishing checks, the
//!   command-line interface and the result cache.
//!
//! Everything rests on [`exactnum`] (rationals, cyclotomic fields, fixed-point
//! big floats) and [`polyseries`] (multivariate polynomials and iterated
//! truncated Laurent series).

pub mod exactnum;
pub mod polyseries;
pub mod quotvi;
pub mod residueengine;
pub mod versuite;
pub mod wittenreps;

pub use exactnum::{BigComplex, BigFloat, CycloNum, Rational};
pub use polyseries::{AClassPoly, IterLaurent, MPoly, SeriesContext, SPoly};
pub use quotvi::{EvalResult, QuotProblem};
