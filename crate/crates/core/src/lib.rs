//! Picky elements of finite groups.

pub mod arith;
pub mod chartab;
pub mod cyclo;
pub mod error;
pub mod gf;
pub mod group;
pub mod input;
pub mod lie;
pub mod matrix;
pub mod modular;
pub mod perm;
pub mod picky;
pub mod report;

pub use chartab::{CharacterTable, ClassFunction};
pub use cyclo::{Cyclo, EllData, FieldDescriptor};
pub use error::{Error, Result};
pub use input::GroupSpec;
pub use lie::{Family, FamilySpec};
pub use group::{Budget, ClassData, Config, ConjugacyClass, ElementKey, GroupHandle, StabChain};
pub use perm::Perm;
pub use picky::{Certificate, Mode, PickyClass, SylowContext, Verdict};
