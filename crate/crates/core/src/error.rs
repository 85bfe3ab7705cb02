use censtab_linalg::LinalgError;
use thiserror::Error;

use crate::category::Degree;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown category family `{0}`")]
    UnknownFamily(String),
    #[error("invalid category parameters: {0}")]
    InvalidParams(String),
    #[error("hom({m},{n}) exceeds the hom-set cap of {cap} morphisms; lower the degree bound or raise --hom-cap")]
    ResourceLimit { m: Degree, n: Degree, cap: usize },
    #[error("cannot compose: target {inner_target} of the first morphism differs from source {outer_source} of the second")]
    EndpointMismatch { inner_target: Degree, outer_source: Degree },
    #[error("degree {n} is beyond objects_max = {objects_max} of the presented category")]
    BeyondObjects { n: Degree, objects_max: Degree },
    #[error("morphism does not belong to this category: {0}")]
    ForeignMorphism(String),
    #[error("word is not composable: {0}")]
    NotComposable(String),
    #[error("invalid module presentation: {0}")]
    InvalidPresentation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cannot read input: {0}")]
    Input(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

impl Error {
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
