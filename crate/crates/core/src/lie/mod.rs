//! Classification predicates for picky 2- and 3-elements in finite groups
//! of Lie type, the embedded reference tables, and analytic character
//! models of the local subgroups used as independent oracles.

mod fixtures;
mod models;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, mult_order, prime_power};
use crate::error::{Error, Result};

pub use fixtures::{fixtures, Fixtures, Realization, RowScale, Su8Row, TableRow};
pub use models::{
    sl2_5_fixture, sl2_value_model, sl3_local_model, sp4_local_model, LocalKind, LocalModel, ModelCharacter,
    ModelElement, ModelRow, RowKind, Sl2Model,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    SL,
    SU,
    Sp,
    Spin,
    Omega,
    G2,
    F4,
    E6,
    #[serde(rename = "2E6")]
    E6Twisted,
    E7,
    E8,
    #[serde(rename = "3D4")]
    D4Twisted,
    #[serde(rename = "2B2")]
    Suzuki,
    #[serde(rename = "2G2")]
    Ree,
    #[serde(rename = "2F4")]
    F4Twisted,
}

impl Family {
    const NAMES: [(Family, &'static str); 15] = [
        (Family::SL, "SL"),
        (Family::SU, "SU"),
        (Family::Sp, "Sp"),
        (Family::Spin, "Spin"),
        (Family::Omega, "Omega"),
        (Family::G2, "G2"),
        (Family::F4, "F4"),
        (Family::E6, "E6"),
        (Family::E6Twisted, "2E6"),
        (Family::E7, "E7"),
        (Family::E8, "E8"),
        (Family::D4Twisted, "3D4"),
        (Family::Suzuki, "2B2"),
        (Family::Ree, "2G2"),
        (Family::F4Twisted, "2F4"),
    ];

    fn name(self) -> &'static str {
        Self::NAMES.iter().find(|(f, _)| *f == self).map(|(_, s)| *s).unwrap_or("?")
    }

    fn is_suzuki_ree(self) -> bool {
        matches!(self, Family::Suzuki | Family::Ree | Family::F4Twisted)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Self::NAMES
            .iter()
            .find(|(_, name)| name.eq_ignore_ascii_case(s))
            .map(|(f, _)| *f)
            .ok_or_else(|| Error::Unsupported(format!("family {s:?}")))
    }
}

/// A finite group of Lie type together with the prime ℓ under study.
///
/// `n` is the dimension of the natural module for classical families
/// (so `Sp4` has `n = 4`) and the untwisted rank otherwise. `epsilon` is
/// `+1` for SL and `-1` for SU; for even-dimensional orthogonal groups it
/// selects the type `±`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilySpec {
    pub family: Family,
    pub n: u32,
    pub q: u64,
    pub epsilon: i8,
    pub ell: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover_label: Option<String>,
}

impl FamilySpec {
    pub fn new(family: Family, n: u32, q: u64, ell: u64) -> Self {
        let epsilon = if family == Family::SU { -1 } else { 1 };
        FamilySpec { family, n, q, epsilon, ell, cover_label: None }
    }

    pub fn with_epsilon(mut self, epsilon: i8) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_cover(mut self, label: &str) -> Self {
        self.cover_label = Some(label.to_string());
        self
    }

    /// Defining characteristic.
    pub fn characteristic(&self) -> Result<u64> {
        prime_power(self.q).map(|(p, _)| p).ok_or(Error::InvalidField(self.q))
    }

    /// Folds low-rank isomorphisms of simply connected groups and the
    /// Spin/Omega naming into a canonical family.
    fn canonical(&self) -> (Family, u32, i8) {
        use Family::*;
        match (self.family, self.n, self.epsilon) {
            (SU | Sp, 2, _) => (SL, 2, 1),
            (Spin | Omega, 3, _) => (SL, 2, 1),
            (Spin | Omega, 5, _) => (Sp, 4, 1),
            (Spin | Omega, 6, e) if e > 0 => (SL, 4, 1),
            (Spin | Omega, 6, _) => (SU, 4, -1),
            (Omega, n, e) => (Spin, n, if n % 2 == 1 { 1 } else { e }),
            (Spin, n, e) => (Spin, n, if n % 2 == 1 { 1 } else { e }),
            (SL, n, _) => (SL, n, 1),
            (SU, n, _) => (SU, n, -1),
            (f, n, _) => (f, n, 1),
        }
    }

    fn validate(&self) -> Result<u64> {
        if self.family.is_suzuki_ree() {
            return Err(Error::Unsupported(format!("{} families", self.family)));
        }
        if !matches!(self.ell, 2 | 3) {
            return Err(Error::Unsupported(format!("ℓ = {} (only 2 and 3)", self.ell)));
        }
        let p = self.characteristic()?;
        if p == self.ell {
            return Err(Error::CharacteristicClash { p, ell: self.ell });
        }
        Ok(p)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = &self.cover_label {
            f.write_str(c)?;
        }
        let sign = match (self.family, self.epsilon) {
            (Family::Spin | Family::Omega, e) if self.n.is_multiple_of(2) => if e > 0 { "+" } else { "-" },
            _ => "",
        };
        write!(f, "{}{}{}({})", self.family, self.n, sign, self.q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FermatMersenne {
    Fermat,
    Mersenne,
    Nine,
    Neither,
}

impl fmt::Display for FermatMersenne {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FermatMersenne::Fermat => "Fermat prime",
            FermatMersenne::Mersenne => "Mersenne prime",
            FermatMersenne::Nine => "q = 9",
            FermatMersenne::Neither => "neither Fermat nor Mersenne",
        })
    }
}

pub fn is_fermat_prime(q: u64) -> bool {
    is_prime(q) && (q - 1).is_power_of_two() && (q - 1).trailing_zeros().is_power_of_two()
}

pub fn is_mersenne_prime(q: u64) -> bool {
    is_prime(q) && (q + 1).is_power_of_two()
}

/// Classifies `q`; `3 = 2^1 + 1` counts as a Fermat prime, even though it
/// is also `2^2 − 1`.
pub fn fermat_mersenne(q: u64) -> FermatMersenne {
    if q == 9 {
        FermatMersenne::Nine
    } else if is_fermat_prime(q) {
        FermatMersenne::Fermat
    } else if is_mersenne_prime(q) {
        FermatMersenne::Mersenne
    } else {
        FermatMersenne::Neither
    }
}

fn fermat_or_mersenne(q: u64) -> bool {
    is_fermat_prime(q) || is_mersenne_prime(q)
}

/// The exceptional `q = 3` list for ℓ = 2.
fn q3_exception(family: Family, n: u32, epsilon: i8) -> bool {
    use Family::*;
    matches!(
        (family, n, epsilon),
        (SL, 4, _) | (SU, 3, _) | (SU, 4, _) | (Spin, 7, _) | (Sp, 6, _) | (Spin, 8, _) | (G2, _, _)
    )
}

/// Which item of the ℓ = 2 classification applies, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Item {
    Sl2,
    Sl3,
    Su3,
    Sp4,
    Exceptional,
}

fn item_for_two(spec: &FamilySpec) -> Option<Item> {
    let (family, n, eps) = spec.canonical();
    let q = spec.q;
    match (family, n) {
        (Family::SL, 2) if fermat_or_mersenne(q) || q == 9 => Some(Item::Sl2),
        (Family::SL, 3) if q % 4 == 3 && is_mersenne_prime(q) => Some(Item::Sl3),
        (Family::SU, 3) if q % 4 == 1 && (is_fermat_prime(q) || q == 9) => Some(Item::Su3),
        (Family::Sp, 4) if q != 5 && q != 7 && fermat_or_mersenne(q) => Some(Item::Sp4),
        _ if q == 3 && q3_exception(family, n, eps) => Some(Item::Exceptional),
        _ => None,
    }
}

/// Whether the group has a picky ℓ-element, for ℓ ∈ {2, 3}.
pub fn has_picky(spec: &FamilySpec) -> Result<bool> {
    spec.validate()?;
    Ok(match spec.ell {
        2 => item_for_two(spec).is_some(),
        _ => !table_rows_for(spec).is_empty(),
    })
}

/// Rows of the embedded tables describing `spec`; covers are ignored since
/// central extensions do not change which elements are picky.
pub fn table_rows_for(spec: &FamilySpec) -> Vec<&'static TableRow> {
    let (family, n, eps) = spec.canonical();
    fixtures()
        .rows()
        .filter(|r| r.ell == spec.ell && r.q == spec.q)
        .filter(|r| {
            let probe = FamilySpec::new(r.family, r.n, r.q, r.ell).with_epsilon(r.epsilon);
            probe.canonical() == (family, n, eps)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum OrderCondition {
    /// Every ℓ-element of at least this order is picky.
    AtLeast { order: u64 },
    /// A necessary condition only: regular ℓ-elements of at least this
    /// order; the engine decides which ones are picky.
    RegularAtLeast { order: u64, candidate: &'static str },
    /// Exactly the classes recorded in the reference table rows.
    TableRows,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PickyProfile {
    pub order_condition: OrderCondition,
    pub partial: bool,
    pub table_rows: Vec<&'static TableRow>,
}

pub const SP4_CANDIDATE: &str =
    "x regular semisimple in a maximal torus, with eigenvalues of order at least 16 not closed under negation";

impl fmt::Display for PickyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.order_condition {
            OrderCondition::AtLeast { order: 1 } => f.write_str("every ℓ-element is picky"),
            OrderCondition::AtLeast { order } => write!(f, "ℓ-elements of order ≥ {order}"),
            OrderCondition::RegularAtLeast { order, .. } => {
                write!(f, "certain regular ℓ-elements of order ≥ {order} (partial, verify by engine)")
            }
            OrderCondition::TableRows => {
                let rows: Vec<String> = self.table_rows.iter().map(|r| r.summary()).collect();
                write!(f, "table rows: {}", rows.join("; "))
            }
        }
    }
}

/// What is known about the picky classes of `spec`.
pub fn predicted_picky_profile(spec: &FamilySpec) -> Result<PickyProfile> {
    if !has_picky(spec)? {
        return Err(Error::Unsupported(format!("{spec} has no picky {}-elements", spec.ell)));
    }
    let rows = table_rows_for(spec);
    let profile = |order_condition, partial| PickyProfile { order_condition, partial, table_rows: rows.clone() };
    if spec.ell == 3 {
        return Ok(profile(OrderCondition::TableRows, false));
    }
    Ok(match item_for_two(spec) {
        // A normal Sylow 2-subgroup makes every 2-element picky.
        Some(Item::Sl2) if spec.q == 3 => profile(OrderCondition::AtLeast { order: 1 }, false),
        Some(Item::Sl2 | Item::Sl3 | Item::Su3) => profile(OrderCondition::AtLeast { order: 4 }, false),
        Some(Item::Sp4) => profile(OrderCondition::RegularAtLeast { order: 8, candidate: SP4_CANDIDATE }, true),
        _ => profile(OrderCondition::TableRows, false),
    })
}

/// `d_ℓ(q)`, the multiplicative order of `q` modulo ℓ.
pub fn d_ell(q: u64, ell: u64) -> Result<u64> {
    if !is_prime(ell) {
        return Err(Error::NotPrime(ell));
    }
    if q.is_multiple_of(ell) {
        return Err(Error::CharacteristicClash { p: ell, ell });
    }
    mult_order(q % ell, ell).ok_or_else(|| Error::Internal("order of a unit".into()))
}
