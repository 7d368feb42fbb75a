use thiserror::Error;

use crate::expr::{ExprError, FormatError};
use crate::jet::JetError;

/// Failures of the geometric computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("curvature {kappa:e} at t = {t} is below the floor; normal and binormal are undefined")]
    DegenerateCurvature { t: f64, kappa: f64 },
    #[error("curve is stationary at t = {t}")]
    ZeroSpeed { t: f64 },
    #[error("t = {t} lies outside the domain [{t_min}, {t_max}]")]
    OutsideDomain { t: f64, t_min: f64, t_max: f64 },
    #[error("derivative flag degenerates at vector {index}")]
    RankDeficient { index: usize },
    #[error("component {index}: {source}")]
    Component {
        index: usize,
        #[source]
        source: ExprError,
    },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Config(String),
}
