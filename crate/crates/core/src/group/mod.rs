//! Permutation groups backed by a stabilizer chain.

mod chain;
mod classes;
mod search;
mod sylow;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Perm;

pub use chain::{ElementKey, StabChain};
pub use classes::{ClassData, ConjugacyClass};

/// Size limits shared by every expensive computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Budget {
    pub max_order: u64,
    pub max_classes: usize,
    pub max_degree: usize,
    /// Groups up to this order get an exhaustive element index.
    pub exhaustive_threshold: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_order: 10_000_000,
            max_classes: 256,
            max_degree: 1024,
            exhaustive_threshold: 100_000,
        }
    }
}

impl Budget {
    /// Limits for stretch computations such as `SL4(3)`. The element index
    /// takes roughly 100 bytes per element but turns every class lookup in
    /// the class matrices into a hash probe.
    pub fn extended() -> Self {
        Budget {
            max_order: 50_000_000,
            max_classes: 512,
            exhaustive_threshold: 20_000_000,
            ..Budget::default()
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    pub budget: Budget,
    pub seed: u64,
}

impl Config {
    pub fn with_seed(seed: u64) -> Self {
        Config {
            seed,
            ..Config::default()
        }
    }

    /// A generator for one randomized routine; `salt` separates routines so
    /// that they do not share a stream.
    pub fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

struct Inner {
    degree: usize,
    generators: Vec<Perm>,
    chain: StabChain,
    order: BigUint,
    config: Config,
    parent: Option<GroupHandle>,
    classes: OnceLock<Arc<ClassData>>,
}

/// An immutable, cheaply clonable handle on a permutation group.
#[derive(Clone)]
pub struct GroupHandle(Arc<Inner>);

impl fmt::Debug for GroupHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupHandle")
            .field("degree", &self.degree())
            .field("order", &self.order().to_string())
            .field("generators", &self.0.generators.len())
            .finish()
    }
}

impl GroupHandle {
    /// Builds the group generated by `generators` with the default config.
    /// An empty list gives the trivial group of degree 0.
    pub fn build(generators: Vec<Perm>) -> Result<Self> {
        let degree = generators.first().map_or(0, Perm::degree);
        Self::build_with(degree, generators, Config::default())
    }

    pub fn build_with(degree: usize, generators: Vec<Perm>, config: Config) -> Result<Self> {
        Self::assemble(degree, generators, config, None, &[])
    }

    fn assemble(
        degree: usize,
        generators: Vec<Perm>,
        config: Config,
        parent: Option<GroupHandle>,
        prefix: &[u32],
    ) -> Result<Self> {
        if degree > config.budget.max_degree {
            return Err(Error::BudgetExceeded(format!(
                "degree {degree} exceeds the limit {}",
                config.budget.max_degree
            )));
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let chain = StabChain::new(degree, &generators, prefix);
        let order = chain.order();
        debug_assert!(generators.iter().all(|g| chain.contains(g)));
        Ok(GroupHandle(Arc::new(Inner {
            degree,
            generators,
            chain,
            order,
            config,
            parent,
            classes: OnceLock::new(),
        })))
    }

    /// The subgroup generated by `generators`, which must lie in `self`.
    pub fn subgroup(&self, generators: Vec<Perm>) -> Result<Self> {
        for g in &generators {
            if !self.is_member(g)? {
                return Err(Error::NotSubgroup);
            }
        }
        self.subgroup_unchecked(generators)
    }

    /// Subgroup whose chain is built on this group's base, so that the two
    /// chains align level by level.
    pub(crate) fn subgroup_unchecked(&self, generators: Vec<Perm>) -> Result<Self> {
        let base = self.chain().base();
        Self::assemble(
            self.degree(),
            generators,
            self.0.config,
            Some(self.clone()),
            &base,
        )
    }

    /// Same group and parent, with a chain whose base starts with `prefix`.
    pub(crate) fn rebased(&self, prefix: &[u32]) -> Result<Self> {
        Self::assemble(
            self.degree(),
            self.generators().to_vec(),
            self.0.config,
            self.0.parent.clone(),
            prefix,
        )
    }

    /// Same group with a different configuration (budgets, seed).
    pub fn reconfigured(&self, config: Config) -> Result<Self> {
        Self::assemble(
            self.degree(),
            self.0.generators.clone(),
            config,
            self.0.parent.clone(),
            &self.chain().base(),
        )
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.0.generators
    }

    pub fn chain(&self) -> &StabChain {
        &self.0.chain
    }

    pub fn order(&self) -> &BigUint {
        &self.0.order
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.0.order.to_u64()
    }

    pub fn config(&self) -> &Config {
        &self.0.config
    }

    pub fn budget(&self) -> &Budget {
        &self.0.config.budget
    }

    pub fn parent(&self) -> Option<&GroupHandle> {
        self.0.parent.as_ref()
    }

    pub fn same_as(&self, other: &GroupHandle) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree())
    }

    pub fn is_trivial(&self) -> bool {
        self.chain().is_empty() || self.order() == &BigUint::from(1u32)
    }

    pub fn is_member(&self, p: &Perm) -> Result<bool> {
        self.check_degree(p)?;
        Ok(self.chain().contains(p))
    }

    pub(crate) fn check_degree(&self, p: &Perm) -> Result<()> {
        if p.degree() != self.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: p.degree(),
            });
        }
        Ok(())
    }

    pub(crate) fn require_member(&self, p: &Perm) -> Result<()> {
        if self.is_member(p)? {
            Ok(())
        } else {
            Err(Error::NotMember)
        }
    }

    /// True when every generator of `self` lies in `other`.
    pub fn is_subgroup_of(&self, other: &GroupHandle) -> bool {
        self.degree() == other.degree() && self.generators().iter().all(|g| other.chain().contains(g))
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .enumerate()
            .all(|(i, a)| gens[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        self.chain().random_element(rng)
    }

    pub fn elements(&self) -> Vec<Perm> {
        self.chain().elements()
    }

    pub fn for_each_element(&self, f: impl FnMut(&Perm)) {
        self.chain().for_each_element(f)
    }

    pub fn key(&self, g: &Perm) -> ElementKey {
        self.chain().key(g)
    }

    /// Checks the order against the budget before an expensive computation.
    pub(crate) fn check_order_budget(&self, what: &str) -> Result<u64> {
        match self.order_u64() {
            Some(n) if n <= self.budget().max_order => Ok(n),
            _ => Err(Error::BudgetExceeded(format!(
                "{what}: group order {} exceeds the limit {}",
                self.order(),
                self.budget().max_order
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(c: &[&[u32]], n: usize) -> Perm {
        Perm::from_cycles(n, c).unwrap()
    }

    #[test]
    fn trivial_cases() {
        let s3 = GroupHandle::build(vec![perm(&[&[0, 1]], 3), perm(&[&[0, 1, 2]], 3)]).unwrap();
        assert_eq!(s3.order_u64(), Some(6));
        let one = GroupHandle::build(vec![Perm::identity(4)]).unwrap();
        assert_eq!(one.order_u64(), Some(1));
        let empty = GroupHandle::build(vec![]).unwrap();
        assert_eq!(empty.order_u64(), Some(1));
        let a3 = GroupHandle::build(vec![perm(&[&[0, 1, 2]], 3)]).unwrap();
        assert!(!a3.is_member(&perm(&[&[0, 1]], 3)).unwrap());
        assert!(s3.is_member(&perm(&[&[0, 1]], 3)).unwrap());
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let err = GroupHandle::build(vec![Perm::identity(3), Perm::identity(4)]).unwrap_err();
        assert!(matches!(err, Error::DegreeMismatch { .. }));
        let s3 = GroupHandle::build(vec![perm(&[&[0, 1, 2]], 3)]).unwrap();
        assert!(s3.is_member(&Perm::identity(5)).is_err());
    }

    #[test]
    fn subgroup_rejects_outsiders() {
        let a3 = GroupHandle::build(vec![perm(&[&[0, 1, 2]], 3)]).unwrap();
        assert!(matches!(
            a3.subgroup(vec![perm(&[&[0, 1]], 3)]),
            Err(Error::NotSubgroup)
        ));
        let sub = a3.subgroup(vec![perm(&[&[0, 2, 1]], 3)]).unwrap();
        assert!(sub.parent().unwrap().same_as(&a3));
        assert_eq!(sub.order_u64(), Some(3));
    }

    #[test]
    fn degree_budget_applies() {
        let mut config = Config::default();
        config.budget.max_degree = 4;
        let err = GroupHandle::build_with(5, vec![Perm::identity(5)], config).unwrap_err();
        assert!(err.is_budget());
    }
}
