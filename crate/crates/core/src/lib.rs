//! Hecke algebra modules attached to orbit data, their Kazhdan-Lusztig-Vogan
//! polynomials, and the equivariant Ext and intersection cohomology series
//! read off from them.

pub mod check;
pub mod cli;
pub mod coxeter;
pub mod datum;
pub mod extcalc;
pub mod hecke;
pub mod klv;
pub mod laurent;
pub mod mq;
pub mod report;

/// Any error raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Laurent(#[from] laurent::LaurentError),
    #[error(transparent)]
    Coxeter(#[from] coxeter::CoxeterError),
    #[error(transparent)]
    Hecke(#[from] hecke::HeckeError),
    #[error(transparent)]
    Datum(#[from] datum::DatumError),
    #[error(transparent)]
    Validation(#[from] datum::ValidationFailure),
    #[error(transparent)]
    Mq(#[from] mq::MqError),
    #[error(transparent)]
    Klv(#[from] klv::KlvError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
