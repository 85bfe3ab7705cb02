//! Graded modules over combinatorial categories and their central stability.

pub mod category;
pub mod error;
pub mod plactic;
pub mod presented;

pub use category::{builtin_category, BuiltinParams, Category, CategorySpec, Degree, HomSet, Morphism, Payload};
pub use error::{Error, Result};
pub mod kan;
pub mod presentation;
pub mod stability;
pub mod relations;
