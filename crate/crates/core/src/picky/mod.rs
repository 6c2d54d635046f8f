//! Picky ℓ-elements: elements lying in exactly one Sylow ℓ-subgroup.
//!
//! The number of Sylow ℓ-subgroups containing `x` is obtained from the
//! double count of pairs `(Q, y)` with `Q` Sylow and `y ∈ x^G ∩ Q`:
//! `n_x · |N_G(P)| = |x^G ∩ P| · |C_G(x)|`.

mod verify;

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::is_prime;
use crate::chartab::CharacterTable;
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::group::GroupHandle;
use crate::perm::Perm;

pub use verify::{verify, Certificate, ClassSummary, Mismatch, Mode, Pair, Verdict, VerificationKey, CONDITION_THREE};

/// An ℓ-element class together with its Sylow count.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PickyClass {
    pub representative: Perm,
    pub order: u64,
    pub centralizer_order: u64,
    pub sylow_count: u64,
    pub ell: u64,
    /// Index of the class in the group's class list.
    pub class_index: usize,
}

impl PickyClass {
    pub fn is_picky(&self) -> bool {
        self.sylow_count == 1
    }
}

/// A nonvanishing character at a fixed element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrrX {
    pub row: usize,
    pub degree: u64,
    pub value: Cyclo,
}

fn is_ell_power(n: u64, ell: u64) -> bool {
    let mut n = n;
    while n.is_multiple_of(ell) {
        n /= ell;
    }
    n == 1
}

/// `G` with a fixed Sylow ℓ-subgroup `P`, its normalizer, and lazily
/// computed character tables of `G` and `N_G(P)`.
pub struct SylowContext {
    group: GroupHandle,
    ell: u64,
    sylow: GroupHandle,
    normalizer: GroupHandle,
    group_table: OnceLock<CharacterTable>,
    local_table: OnceLock<CharacterTable>,
}

impl SylowContext {
    pub fn new(group: &GroupHandle, ell: u64) -> Result<Self> {
        if !is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        let sylow = group.sylow(ell)?;
        let normalizer = group.normalizer(&sylow)?;
        Ok(SylowContext {
            group: group.clone(),
            ell,
            sylow,
            normalizer,
            group_table: OnceLock::new(),
            local_table: OnceLock::new(),
        })
    }

    pub fn group(&self) -> &GroupHandle {
        &self.group
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn sylow(&self) -> &GroupHandle {
        &self.sylow
    }

    pub fn normalizer(&self) -> &GroupHandle {
        &self.normalizer
    }

    pub fn group_table(&self) -> Result<&CharacterTable> {
        table_once(&self.group_table, &self.group)
    }

    pub fn local_table(&self) -> Result<&CharacterTable> {
        table_once(&self.local_table, &self.normalizer)
    }

    /// `n_x`, the number of Sylow ℓ-subgroups containing `x`.
    pub fn sylow_count(&self, x: &Perm) -> Result<u64> {
        self.group.require_member(x)?;
        if !is_ell_power(x.order(), self.ell) {
            return Err(Error::NotEllElement { ell: self.ell });
        }
        let classes = self.group.conjugacy_classes()?;
        let c = classes.class_of(&self.group, x)?;
        let mut in_p = 0u64;
        let mut failure = None;
        self.sylow.for_each_element(|y| {
            if failure.is_none() && y.order() == x.order() {
                match classes.class_of(&self.group, y) {
                    Ok(d) if d == c => in_p += 1,
                    Ok(_) => {}
                    Err(e) => failure = Some(e),
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        self.count_from(in_p, classes.classes()[c].centralizer_order)
    }

    fn count_from(&self, in_p: u64, centralizer: u64) -> Result<u64> {
        let num = BigUint::from(in_p) * BigUint::from(centralizer);
        let den = self.normalizer.order();
        if (&num % den) != BigUint::ZERO {
            return Err(Error::Internal(format!(
                "|x^G ∩ P|·|C_G(x)| = {num} is not divisible by |N_G(P)| = {den}"
            )));
        }
        (num / den)
            .to_u64()
            .ok_or_else(|| Error::Internal("Sylow count overflow".into()))
    }

    /// Every class of ℓ-elements meeting `P`, with its Sylow count; the
    /// representative is the first element of the class met in `P`.
    pub fn ell_classes(&self) -> Result<Vec<PickyClass>> {
        let classes = self.group.conjugacy_classes()?;
        let mut counts = vec![0u64; classes.len()];
        let mut reps: Vec<Option<Perm>> = vec![None; classes.len()];
        let mut failure = None;
        self.sylow.for_each_element(|y| {
            if failure.is_some() {
                return;
            }
            match classes.class_of(&self.group, y) {
                Ok(c) => {
                    counts[c] += 1;
                    if reps[c].is_none() {
                        reps[c] = Some(y.clone());
                    }
                }
                Err(e) => failure = Some(e),
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        let mut out = Vec::new();
        for (c, rep) in reps.into_iter().enumerate() {
            let Some(rep) = rep else { continue };
            let class = &classes.classes()[c];
            out.push(PickyClass {
                order: class.order,
                centralizer_order: class.centralizer_order,
                sylow_count: self.count_from(counts[c], class.centralizer_order)?,
                ell: self.ell,
                class_index: c,
                representative: rep,
            });
        }
        Ok(out)
    }

    /// The class of an arbitrary ℓ-element `x` of `P`, with `x` itself as
    /// representative.
    pub fn class_of_element(&self, x: &Perm) -> Result<PickyClass> {
        if !self.sylow.is_member(x)? {
            return Err(Error::NotMember);
        }
        let sylow_count = self.sylow_count(x)?;
        let classes = self.group.conjugacy_classes()?;
        let c = classes.class_of(&self.group, x)?;
        let class = &classes.classes()[c];
        Ok(PickyClass {
            representative: x.clone(),
            order: class.order,
            centralizer_order: class.centralizer_order,
            sylow_count,
            ell: self.ell,
            class_index: c,
        })
    }

    /// Classes of picky ℓ-elements.
    pub fn picky_classes(&self) -> Result<Vec<PickyClass>> {
        Ok(self.ell_classes()?.into_iter().filter(PickyClass::is_picky).collect())
    }

    pub fn is_sylow_abelian(&self) -> bool {
        self.sylow.is_abelian()
    }

    pub fn is_sylow_cyclic(&self) -> bool {
        let order = self.sylow.order_u64();
        if order == Some(1) {
            return true;
        }
        if !self.sylow.is_abelian() {
            return false;
        }
        let mut cyclic = false;
        self.sylow.for_each_element(|y| cyclic |= Some(y.order()) == order);
        cyclic
    }
}

fn table_once<'a>(cell: &'a OnceLock<CharacterTable>, group: &GroupHandle) -> Result<&'a CharacterTable> {
    if let Some(t) = cell.get() {
        return Ok(t);
    }
    let t = CharacterTable::compute(group)?;
    Ok(cell.get_or_init(|| t))
}

/// `n_x` for an ℓ-element `x` of `G`, with `P` a Sylow ℓ-subgroup.
pub fn sylow_count_containing(g: &GroupHandle, x: &Perm, ell: u64, p: &GroupHandle) -> Result<u64> {
    if !p.is_subgroup_of(g) {
        return Err(Error::NotSubgroup);
    }
    let normalizer = g.normalizer(p)?;
    let ctx = SylowContext {
        group: g.clone(),
        ell,
        sylow: p.clone(),
        normalizer,
        group_table: OnceLock::new(),
        local_table: OnceLock::new(),
    };
    ctx.sylow_count(x)
}

pub fn picky_classes(g: &GroupHandle, ell: u64) -> Result<Vec<PickyClass>> {
    SylowContext::new(g, ell)?.picky_classes()
}

/// Nonvanishing characters at `x`, checked against the column norm
/// `Σ |χ(x)|² = |C_G(x)|`.
pub fn irr_x(table: &CharacterTable, x: &Perm) -> Result<Vec<IrrX>> {
    let c = table.class_of(x)?;
    let rows: Vec<IrrX> = (0..table.len())
        .filter(|&i| !table.value(i, c).is_zero())
        .map(|i| IrrX {
            row: i,
            degree: table.degrees()[i],
            value: table.value(i, c).clone(),
        })
        .collect();
    let norm: Cyclo = rows.iter().map(|r| r.value.abs2()).sum();
    let expect = table.classes()[c].centralizer_order as i64;
    if norm != expect {
        return Err(Error::Internal(format!(
            "column norm {norm} differs from the centralizer order {expect}"
        )));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(c: &[&[u32]], n: usize) -> Perm {
        Perm::from_cycles(n, c).unwrap()
    }

    #[test]
    fn identity_in_s3() {
        let s3 = GroupHandle::build(vec![perm(&[&[0, 1]], 3), perm(&[&[0, 1, 2]], 3)]).unwrap();
        let p = s3.sylow(2).unwrap();
        assert_eq!(sylow_count_containing(&s3, &Perm::identity(3), 2, &p).unwrap(), 3);
        assert_eq!(sylow_count_containing(&s3, &perm(&[&[0, 1]], 3), 2, &p).unwrap(), 1);
        assert!(matches!(
            sylow_count_containing(&s3, &perm(&[&[0, 1, 2]], 3), 2, &p),
            Err(Error::NotEllElement { ell: 2 })
        ));
        // Transpositions are picky; the 3-Sylow is normal so the identity is
        // a picky 3-element.
        let pc = picky_classes(&s3, 2).unwrap();
        assert_eq!(pc.len(), 1);
        assert_eq!(pc[0].order, 2);
        let pc3 = picky_classes(&s3, 3).unwrap();
        assert_eq!(pc3.iter().map(|c| c.order).collect::<Vec<_>>(), vec![1, 3]);
    }

    #[test]
    fn cyclic_and_abelian_sylows() {
        let s4 = GroupHandle::build(vec![perm(&[&[0, 1]], 4), perm(&[&[0, 1, 2, 3]], 4)]).unwrap();
        let c2 = SylowContext::new(&s4, 2).unwrap();
        assert!(!c2.is_sylow_abelian() && !c2.is_sylow_cyclic());
        let c3 = SylowContext::new(&s4, 3).unwrap();
        assert!(c3.is_sylow_cyclic());
        let c5 = SylowContext::new(&s4, 5).unwrap();
        assert!(c5.is_sylow_cyclic());
        assert_eq!(c5.picky_classes().unwrap().len(), 1);
    }
}
