//! Sylow subgroups by normalizer climbing.

use num_bigint::BigUint;
use num_traits::One;

use super::GroupHandle;
use crate::arith::{ell_part_u64, is_prime};
use crate::error::{Error, Result};
use crate::perm::Perm;

const SEED_CAP: usize = 64;

/// The ℓ-part of `g`: the power of `g` whose order is the ℓ-part of `o(g)`.
pub fn ell_component(g: &Perm, ell: u64) -> Perm {
    let o = g.order();
    g.pow((o / ell_part_u64(o, ell)) as i64)
}

fn ell_part_big(n: &BigUint, ell: u64) -> BigUint {
    let mut n = n.clone();
    let mut part = BigUint::one();
    let l = BigUint::from(ell);
    while (&n % &l) == BigUint::ZERO {
        n /= &l;
        part *= &l;
    }
    part
}

impl GroupHandle {
    /// A Sylow ℓ-subgroup; the trivial group when ℓ does not divide `|G|`.
    pub fn sylow(&self, ell: u64) -> Result<GroupHandle> {
        if !is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        let target = ell_part_big(self.order(), ell);
        let mut gens: Vec<Perm> = Vec::new();
        let mut q = self.subgroup_unchecked(Vec::new())?;
        if target.is_one() {
            return Ok(q);
        }
        let mut rng = self.config().rng(0x5F10_0000 ^ ell);
        for _ in 0..SEED_CAP {
            let z = ell_component(&self.random_element(&mut rng), ell);
            if !z.is_identity() {
                gens.push(z);
                q = self.subgroup_unchecked(gens.clone())?;
                break;
            }
        }
        while q.order() != &target {
            let n = self.normalizer(&q)?;
            let mut found = None;
            for _ in 0..SEED_CAP {
                let z = ell_component(&n.random_element(&mut rng), ell);
                if !q.chain().contains(&z) {
                    found = Some(z);
                    break;
                }
            }
            if found.is_none() {
                if self.order() > &BigUint::from(self.budget().exhaustive_threshold) {
                    return Err(Error::BudgetExceeded(format!(
                        "no {ell}-element found in the normalizer after {SEED_CAP} draws"
                    )));
                }
                let mut candidates = Vec::new();
                n.for_each_element(|g| {
                    if candidates.is_empty() {
                        let z = ell_component(g, ell);
                        if !q.chain().contains(&z) {
                            candidates.push(z);
                        }
                    }
                });
                found = candidates.pop();
            }
            let z = found.ok_or_else(|| {
                Error::Internal(format!("Sylow {ell}-climb stalled at order {}", q.order()))
            })?;
            gens.push(z);
            q = self.subgroup_unchecked(gens.clone())?;
        }
        Ok(q)
    }
}
