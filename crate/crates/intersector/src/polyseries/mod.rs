//! Exact multivariate polynomial algebra and the truncated iterated Laurent
//! series kernel behind every residue computation.

mod aclass;
mod laurent;
mod mpoly;
mod segre;
mod series;

pub use aclass::{AClassPoly, PolyDegree, PolyFile, SPoly};
pub use laurent::{cone_reciprocal, IterLaurent, SeriesContext};
pub use mpoly::{elementary_symmetric, elementary_symmetric_of, MPoly};
pub use segre::{segre_leading_coefficient, NSeriesPoly};
pub use series::{ahat_factor_series, binomial_series, exp_series, invert_unit, pole_factor_series, reciprocal_expm1_series, Series1};

use thiserror::Error;

/// Errors from polynomial and series operations.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("index {k} out of range for {n} variables")]
    OutOfRange { k: i64, n: usize },
    #[error("cone expansion of the zero form")]
    ZeroForm,
    #[error("residue variable {var:?} is not the innermost variable of the context")]
    WrongVariableOrder { var: String },
    #[error("no dominant monomial: series is not expandable in this cone")]
    NoDominantMonomial,
}
