//! Cartan–Eilenberg resolutions, their cototalizations and truncation towers
//! over `F_p[x]/(x^m)`.

pub mod ce;
pub mod cplx;
pub mod decon;
pub mod error;
pub mod exactla;
pub mod gen;
pub mod modcat;
pub mod report;
pub mod towers;

pub use ce::{build_ce, cototalize, CEData, DoubleComplex};
pub use cplx::{ChainMap, Complex, Homotopy};
pub use error::{Error, Result};
pub use exactla::{Mat, PrimeField};
pub use modcat::{CatParams, Hom, InjResolution, Module};
pub use report::{Check, Report};
pub use towers::Tower;
