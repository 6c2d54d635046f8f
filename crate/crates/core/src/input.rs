//! Group specification files.
//!
//! ```json
//! {"kind": "perm", "generators": [[1, 0, 2], [1, 2, 0]]}
//! {"kind": "matrix", "fieldSize": 3, "dimension": 2, "generators": [...]}
//! {"kind": "classical", "family": "SU", "n": 3, "q": 3}
//! ```

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Config, GroupHandle};
use crate::lie::{Family, FamilySpec};
use crate::matrix::{classical_group, matrix_to_perm, Classical, MatrixGroupSpec};
use crate::perm::Perm;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    Perm {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        /// Needed only when there are no generators.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        degree: Option<usize>,
        generators: Vec<Perm>,
    },
    Matrix(MatrixGroupSpec),
    Classical { family: Classical, n: usize, q: u32 },
}

impl GroupSpec {
    pub fn classical(family: Classical, n: usize, q: u32) -> Self {
        GroupSpec::Classical { family, n, q }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn build(&self, config: Config) -> Result<GroupHandle> {
        match self {
            GroupSpec::Perm { degree, generators, .. } => {
                let d = match (degree, generators.first()) {
                    (Some(d), _) => *d,
                    (None, Some(g)) => g.degree(),
                    (None, None) => {
                        return Err(Error::Malformed("a permutation group without generators needs a degree".into()))
                    }
                };
                GroupHandle::build_with(d, generators.clone(), config)
            }
            GroupSpec::Matrix(m) => matrix_to_perm(m, config),
            GroupSpec::Classical { family, n, q } => classical_group(*family, *n, *q, config),
        }
    }

    /// The family description used by the classification, when known.
    pub fn family_spec(&self, ell: u64) -> Option<FamilySpec> {
        match self {
            GroupSpec::Classical { family, n, q } => {
                let f = match family {
                    Classical::SL => Family::SL,
                    Classical::SU => Family::SU,
                    Classical::Sp => Family::Sp,
                };
                Some(FamilySpec::new(f, *n as u32, u64::from(*q), ell))
            }
            _ => None,
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Perm { name: Some(name), .. } => f.write_str(name),
            GroupSpec::Perm { generators, .. } => write!(f, "permutation group on {} generators", generators.len()),
            GroupSpec::Matrix(m) => write!(f, "matrix group of dimension {} over GF({})", m.dimension, m.field_size),
            GroupSpec::Classical { family, n, q } => write!(f, "{family}{n}({q})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_kind() {
        let p = GroupSpec::from_json(r#"{"kind": "perm", "name": "S3", "generators": [[1, 0, 2], [1, 2, 0]]}"#).unwrap();
        assert_eq!(p.to_string(), "S3");
        assert_eq!(p.build(Config::default()).unwrap().order_u64(), Some(6));

        let m = GroupSpec::from_json(
            r#"{"kind": "matrix", "fieldSize": 3, "dimension": 2,
                "generators": [[[1, 1], [0, 1]], [[0, 1], [2, 0]]]}"#,
        )
        .unwrap();
        assert_eq!(m.build(Config::default()).unwrap().order_u64(), Some(24));

        let c = GroupSpec::from_json(r#"{"kind": "classical", "family": "SL", "n": 2, "q": 5}"#).unwrap();
        assert_eq!(c.to_string(), "SL2(5)");
        assert_eq!(c.build(Config::default()).unwrap().order_u64(), Some(120));
        assert_eq!(c.family_spec(2).unwrap().to_string(), "SL2(5)");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(GroupSpec::from_json(r#"{"kind": "perm", "generators": [[0, 0]]}"#).is_err());
        assert!(GroupSpec::from_json(r#"{"kind": "lattice"}"#).is_err());
        let empty = GroupSpec::from_json(r#"{"kind": "perm", "generators": []}"#).unwrap();
        assert!(empty.build(Config::default()).is_err());
        let trivial = GroupSpec::from_json(r#"{"kind": "perm", "degree": 3, "generators": []}"#).unwrap();
        assert_eq!(trivial.build(Config::default()).unwrap().order_u64(), Some(1));
    }
}
