//! Finite-dimensional modules over pro-p Iwahori–Hecke algebras of small split
//! groups in characteristic `p`.
//!
//! The crate is organised bottom-up:
//!
//! * [`ffield`] and [`matrix`]: exact arithmetic over `F_{p^k}`.
//! * [`rootdata`] and [`affweyl`]: root data, Levi subsets, extended affine Weyl groups.
//! * [`heckealg`]: the Hecke algebra as a rewriting system, its bases, involutions
//!   and central elements.
//! * [`heckemod`]: modules given by generator matrices and their analysis.
//! * [`parind`]: parabolic induction, its variants, adjoints, Steinberg modules and triples.
//! * [`classify`]: characters, exhaustive search of simple modules, and the
//!   classification and lattice checks.

pub mod affweyl;
pub mod classify;
pub mod ffield;
pub mod heckealg;
pub mod heckemod;
pub mod matrix;
pub mod parind;
pub mod poly;
pub mod rootdata;
pub mod verify;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("field error: {0}")]
    Field(String),
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("preset error: {0}")]
    Preset(String),
    #[error("size limit: {0}")]
    SizeLimit(String),
    #[error("element not in Levi: {0}")]
    NotInLevi(String),
    #[error("context mismatch: {0}")]
    Context(String),
    #[error("no central element found: {0}")]
    NoCentral(String),
    #[error("relation failure: {0}")]
    Relations(String),
    #[error("reduction failure: {0}")]
    Reduction(String),
    #[error("extension too small: {0}")]
    ExtensionTooSmall(String),
    #[error("module is not multiplicity free: {0}")]
    NotMultiplicityFree(String),
    #[error("invalid triple: {0}")]
    InvalidTriple(String),
    #[error("cross-check failure: {0}")]
    CrossCheck(String),
    #[error("verification failure: {0}")]
    Verification(String),
    #[error("missing central element for Levi {0}")]
    MissingLevi(String),
    #[error("unverified central element for Levi {0}")]
    Unverified(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
