//! Exact linear algebra over ℤ and 𝔽_p.
//!
//! Dense normal forms ([`smith_normal_form`], [`hermite_normal_form`], [`rref`])
//! back a sparse layer of finitely presented modules: a module is a cokernel
//! `R^n / ⟨relations⟩`, and every isomorphism verdict is computed from an
//! explicit [`ModuleMap`].

mod int;
mod matrix;
mod module;
mod ring;
mod sparse;

pub use int::Int;
pub use matrix::{hermite_normal_form, rank, rref, smith_normal_form, Matrix, SmithForm};
pub use module::{submodule_equal, IsoVerdict, ModuleMap, PresentedModule, Reduction};
pub use ring::RingSpec;
pub use sparse::SparseVec;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("{0} is not a supported prime")]
    NotPrime(u64),
    #[error("unrecognized ring `{0}` (expected Z or F<p>)")]
    BadRing(String),
    #[error("rows have different lengths")]
    Ragged,
    #[error("cannot parse matrix: {0}")]
    Parse(String),
    #[error("labels must match the dimensions and be unique")]
    BadLabels,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ring mismatch")]
    RingMismatch,
    #[error("operation requires the integers")]
    NeedsIntegers,
    #[error("operation requires a prime field")]
    NeedsField,
    #[error("matrix is not square")]
    NotSquare,
    #[error("basis index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("map is not well defined: domain relation {relation} does not map into the codomain relations")]
    IllDefined { relation: usize },
}

pub fn invariant_factors(module: &PresentedModule) -> Vec<Int> {
    module.invariant_factors()
}

pub fn kernel_generators(f: &ModuleMap) -> Result<Vec<SparseVec>, LinalgError> {
    f.kernel_generators()
}

pub fn cokernel(f: &ModuleMap) -> Result<PresentedModule, LinalgError> {
    f.cokernel()
}

pub fn is_isomorphism(f: &ModuleMap) -> Result<IsoVerdict, LinalgError> {
    f.is_isomorphism()
}
