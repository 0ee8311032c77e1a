//! Polynomials and rational functions over an exact field, the place
//! bookkeeping used for fiber classification, and the expression parser.

mod multi;
mod parse;
mod places;
mod ratfun;
mod uni;

use thiserror::Error;

pub use multi::{to_tower, Exps, MultiPoly, RationalFunction, TowerT, TowerTX, TowerTXY, Var};
pub use parse::{parse_expression, Expr, ParseError};
pub use places::{gcd_free_basis, vanishing_order, Place, Valuation};
pub use ratfun::RatFun;
pub use uni::{uni_gcd, UniPoly};

pub(crate) use uni::write_dense;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("gcd-free basis of a list containing the zero polynomial")]
    ZeroInput,
}
