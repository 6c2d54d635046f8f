//! Certificates for the picky correspondence conditions.
//!
//! A bijection preserving per-character data exists exactly when the
//! multisets of canonical keys agree on both sides, so verification is a
//! multiset comparison and the pairing matches rows key by key.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{irr_x, IrrX, PickyClass, SylowContext};
use crate::cyclo::{Cyclo, FieldDescriptor};
use crate::error::{Error, Result};
use crate::group::GroupHandle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Equal ℓ-parts of degrees and equal fields of values.
    Picky,
    /// Additionally equal ℓ-parts of the values.
    Plus,
    /// Equal ℓ-parts of degrees and values equal up to sign.
    Strong,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Picky, Mode::Plus, Mode::Strong];
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Picky => "picky",
            Mode::Plus => "plus",
            Mode::Strong => "strong",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "picky" => Ok(Mode::Picky),
            "plus" | "picky_plus" | "picky-plus" => Ok(Mode::Plus),
            "strong" => Ok(Mode::Strong),
            _ => Err(Error::Unsupported(format!("mode {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

/// Per-character data compared across the correspondence. Components not
/// used by the mode are absent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationKey {
    pub degree_ell_part: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_descriptor: Option<FieldDescriptor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_class: Option<Cyclo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_valuation: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rational_ell_part: Option<u64>,
}

impl VerificationKey {
    pub fn new(degree: u64, value: &Cyclo, ell: u64, mode: Mode) -> Result<Self> {
        let mut key = VerificationKey {
            degree_ell_part: crate::arith::ell_part_u64(degree, ell),
            field_descriptor: None,
            sign_class: None,
            norm_valuation: None,
            rational_ell_part: None,
        };
        match mode {
            Mode::Picky => key.field_descriptor = Some(value.field_of_values()),
            Mode::Plus => {
                key.field_descriptor = Some(value.field_of_values());
                let data = value.ell_data(ell)?;
                key.norm_valuation = Some(data.norm_valuation);
                key.rational_ell_part = data.rational_ell_part;
            }
            Mode::Strong => key.sign_class = Some(value.sign_class()),
        }
        Ok(key)
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassSummary {
    pub order: u64,
    pub centralizer: u64,
    #[serde(rename = "n_x")]
    pub n_x: u64,
    pub representative: crate::perm::Perm,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Pair {
    pub global_row: usize,
    pub local_row: usize,
    pub global_degree: u64,
    pub local_degree: u64,
    pub global_value: Cyclo,
    pub local_value: Cyclo,
    pub key: VerificationKey,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Mismatch {
    pub key: VerificationKey,
    pub global_count: usize,
    pub local_count: usize,
}

/// Condition (3) reading recorded in every `plus` certificate.
pub const CONDITION_THREE: &str =
    "rational integers: equal l-parts; irrational values: equal l-adic valuations of the norm";

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub group: String,
    pub ell: u64,
    pub class: ClassSummary,
    pub mode: Mode,
    pub pairs: Vec<Pair>,
    pub verdict: Verdict,
    pub group_order: String,
    pub normalizer_order: String,
    pub global_count: usize,
    pub local_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition_three: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interpretations_agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch: Option<Mismatch>,
}

type Buckets = BTreeMap<VerificationKey, Vec<IrrX>>;

fn buckets(rows: Vec<IrrX>, ell: u64, mode: Mode) -> Result<Buckets> {
    let mut out: Buckets = BTreeMap::new();
    for r in rows {
        out.entry(VerificationKey::new(r.degree, &r.value, ell, mode)?)
            .or_default()
            .push(r);
    }
    Ok(out)
}

impl SylowContext {
    fn require_picky(&self, pc: &PickyClass) -> Result<()> {
        if pc.ell != self.ell() {
            return Err(Error::Malformed(format!(
                "class was computed for ℓ = {}, context has ℓ = {}",
                pc.ell,
                self.ell()
            )));
        }
        if !self.sylow().is_member(&pc.representative)? {
            return Err(Error::NotMember);
        }
        let count = self.sylow_count(&pc.representative)?;
        if count != 1 {
            return Err(Error::NotPicky { ell: self.ell(), count });
        }
        Ok(())
    }

    /// Compares `Irr^x(G)` with `Irr^x(N_G(P))` under `mode`. Refuses
    /// elements that are not picky.
    pub fn verify(&self, pc: &PickyClass, mode: Mode) -> Result<Certificate> {
        self.require_picky(pc)?;
        let x = &pc.representative;
        let global = irr_x(self.group_table()?, x)?;
        let local = irr_x(self.local_table()?, x)?;
        let (global_count, local_count) = (global.len(), local.len());
        let gb = buckets(global, self.ell(), mode)?;
        let lb = buckets(local, self.ell(), mode)?;

        let count = |b: &Buckets, k: &VerificationKey| b.get(k).map_or(0, Vec::len);
        let mismatch = gb
            .keys()
            .chain(lb.keys())
            .filter(|k| count(&gb, k) != count(&lb, k))
            .min()
            .map(|k| Mismatch {
                key: k.clone(),
                global_count: count(&gb, k),
                local_count: count(&lb, k),
            });

        let mut pairs = Vec::new();
        if mismatch.is_none() {
            for (key, rows) in &gb {
                for (g, l) in rows.iter().zip(&lb[key]) {
                    pairs.push(Pair {
                        global_row: g.row,
                        local_row: l.row,
                        global_degree: g.degree,
                        local_degree: l.degree,
                        global_value: g.value.clone(),
                        local_value: l.value.clone(),
                        key: key.clone(),
                    });
                }
            }
        }

        let interpretations_agree = (mode == Mode::Plus).then(|| {
            pairs.iter().all(|p| {
                match (p.global_value.to_integer(), p.local_value.to_integer()) {
                    (Some(_), Some(_)) => {
                        let a = p.global_value.ell_data(self.ell()).ok();
                        let b = p.local_value.ell_data(self.ell()).ok();
                        let by_part = a.as_ref().map(|d| d.rational_ell_part) == b.as_ref().map(|d| d.rational_ell_part);
                        let by_norm = a.map(|d| d.norm_valuation) == b.map(|d| d.norm_valuation);
                        by_part == by_norm
                    }
                    _ => true,
                }
            })
        });
        let verdict = match (&mismatch, interpretations_agree) {
            (Some(_), _) => Verdict::Fails,
            (None, Some(false)) => Verdict::Inconclusive,
            (None, _) => Verdict::Holds,
        };
        Ok(Certificate {
            group: format!("group of order {}", self.group().order()),
            ell: self.ell(),
            class: ClassSummary {
                order: pc.order,
                centralizer: pc.centralizer_order,
                n_x: 1,
                representative: x.clone(),
            },
            mode,
            pairs,
            verdict,
            group_order: self.group().order().to_string(),
            normalizer_order: self.normalizer().order().to_string(),
            global_count,
            local_count,
            condition_three: (mode == Mode::Plus).then_some(CONDITION_THREE),
            interpretations_agree,
            mismatch,
        })
    }

    /// With an abelian Sylow subgroup, whether `Irr^x(G)` is exactly the set
    /// of characters of degree prime to ℓ.
    pub fn abelian_sylow_check(&self, pc: &PickyClass) -> Result<bool> {
        if !self.is_sylow_abelian() {
            return Err(Error::NonAbelianSylow { ell: self.ell() });
        }
        self.require_picky(pc)?;
        let t = self.group_table()?;
        let nonvanishing = t.nonvanishing_rows(&pc.representative)?;
        let coprime: Vec<usize> = (0..t.len()).filter(|&i| t.degrees()[i] % self.ell() != 0).collect();
        Ok(nonvanishing == coprime)
    }

    /// Strong certificates for every picky class when the Sylow subgroup is
    /// cyclic.
    pub fn cyclic_sylow_check(&self) -> Result<Vec<Certificate>> {
        if !self.is_sylow_cyclic() {
            return Err(Error::NonCyclicSylow { ell: self.ell() });
        }
        if self.sylow().is_trivial() {
            return Ok(Vec::new());
        }
        self.picky_classes()?
            .iter()
            .map(|pc| self.verify(pc, Mode::Strong))
            .collect()
    }
}

/// One-shot verification of a picky class of `g`.
pub fn verify(g: &GroupHandle, ell: u64, pc: &PickyClass, mode: Mode) -> Result<Certificate> {
    SylowContext::new(g, ell)?.verify(pc, mode)
}
