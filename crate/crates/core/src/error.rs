use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("invalid permutation: {0}")]
    InvalidPerm(String),

    #[error("element does not lie in the group")]
    NotMember,

    #[error("argument is not a subgroup of the ambient group")]
    NotSubgroup,

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("{k} is not coprime to the conductor {conductor}")]
    NotCoprime { k: i64, conductor: u32 },

    #[error("operation is undefined for the zero value")]
    ZeroValue,

    #[error("element is not an {ell}-element")]
    NotEllElement { ell: u64 },

    #[error("element is not picky: it lies in {count} Sylow {ell}-subgroups")]
    NotPicky { ell: u64, count: u64 },

    #[error("Sylow {ell}-subgroup is not abelian")]
    NonAbelianSylow { ell: u64 },

    #[error("Sylow {ell}-subgroup is not cyclic")]
    NonCyclicSylow { ell: u64 },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("the prime {ell} equals the defining characteristic {p}")]
    CharacteristicClash { p: u64, ell: u64 },

    #[error("{0} is not a supported field size")]
    InvalidField(u64),

    #[error("generator {0} is singular")]
    SingularMatrix(usize),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("character table computation failed: {0}")]
    CharacterTable(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded(_))
    }
}
