//! Conjugacy classes.
//!
//! Up to the exhaustive threshold every element is indexed by its key and
//! classes are swept in key order, so each representative is the least
//! element of its class. Above the threshold classes are discovered from
//! random elements and their powers, with backtrack centralizer orders
//! certifying the class sizes.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::search::conjugate_in;
use super::{ElementKey, GroupHandle};
use crate::error::{Error, Result};
use crate::perm::Perm;

/// Random draws allowed before the randomized sweep gives up.
const RANDOM_DRAW_CAP: usize = 50_000;

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConjugacyClass {
    pub representative: Perm,
    pub size: u64,
    pub order: u64,
    pub centralizer_order: u64,
    #[serde(skip)]
    pub cycle_type: Vec<u32>,
}

#[derive(Debug)]
pub struct ClassData {
    classes: Vec<ConjugacyClass>,
    index: Option<HashMap<ElementKey, u32>>,
    by_cycle_type: HashMap<Vec<u32>, Vec<usize>>,
    /// Per class, the group rebased along the representative's cycles.
    adapted: Vec<OnceLock<GroupHandle>>,
}

impl ClassData {
    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Whether every element is indexed.
    pub fn exhaustive(&self) -> bool {
        self.index.is_some()
    }

    /// Element keys with their class numbers (exhaustive mode only).
    pub fn index(&self) -> Option<&HashMap<ElementKey, u32>> {
        self.index.as_ref()
    }

    pub fn class_of_key(&self, key: &ElementKey) -> Option<usize> {
        self.index.as_ref()?.get(key).map(|&c| c as usize)
    }

    /// Class of a member of `group` (the group these classes belong to).
    pub fn class_of(&self, group: &GroupHandle, x: &Perm) -> Result<usize> {
        group.require_member(x)?;
        self.class_of_member(group, x)
    }

    pub(crate) fn class_of_member(&self, group: &GroupHandle, x: &Perm) -> Result<usize> {
        if let Some(index) = &self.index {
            return index
                .get(&group.key(x))
                .map(|&c| c as usize)
                .ok_or_else(|| Error::Internal("element missing from the index".into()));
        }
        let ct = x.cycle_type();
        let candidates = self
            .by_cycle_type
            .get(&ct)
            .ok_or_else(|| Error::Internal("no class with this cycle type".into()))?;
        if candidates.len() == 1 {
            return Ok(candidates[0]);
        }
        for &c in candidates {
            if self.conjugate_to_rep(group, c, x)? {
                return Ok(c);
            }
        }
        Err(Error::Internal("element matches no class".into()))
    }

    fn conjugate_to_rep(&self, group: &GroupHandle, c: usize, x: &Perm) -> Result<bool> {
        let rep = &self.classes[c].representative;
        let adapted = match self.adapted[c].get() {
            Some(a) => a,
            None => {
                let a = group.adapted_to(rep)?;
                self.adapted[c].get_or_init(|| a)
            }
        };
        Ok(conjugate_in(adapted, rep, x).is_some())
    }

    /// Class of `rep^t` for the representative of class `c`.
    pub fn power_class(&self, group: &GroupHandle, c: usize, t: i64) -> Result<usize> {
        let y = self.classes[c].representative.pow(t);
        self.class_of_member(group, &y)
    }

    pub fn inverse_classes(&self, group: &GroupHandle) -> Result<Vec<usize>> {
        (0..self.len()).map(|c| self.power_class(group, c, -1)).collect()
    }

    /// Lowest common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        self.classes
            .iter()
            .fold(1u64, |acc, c| num_integer::lcm(acc, c.order))
    }

    fn from_classes(classes: Vec<ConjugacyClass>, index: Option<HashMap<ElementKey, u32>>) -> Self {
        let mut by_cycle_type: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
        for (i, c) in classes.iter().enumerate() {
            by_cycle_type.entry(c.cycle_type.clone()).or_default().push(i);
        }
        let adapted = classes.iter().map(|_| OnceLock::new()).collect();
        ClassData {
            classes,
            index,
            by_cycle_type,
            adapted,
        }
    }
}

fn make_class(rep: Perm, size: u64, group_order: u64) -> ConjugacyClass {
    ConjugacyClass {
        order: rep.order(),
        cycle_type: rep.cycle_type(),
        centralizer_order: group_order / size,
        size,
        representative: rep,
    }
}

fn exhaustive_classes(group: &GroupHandle, order: u64) -> ClassData {
    let chain = group.chain();
    let mut keys = Vec::with_capacity(order as usize);
    group.for_each_element(|g| keys.push(chain.key(g)));
    keys.sort_unstable();
    let mut index: HashMap<ElementKey, u32> = keys.iter().map(|k| (k.clone(), u32::MAX)).collect();
    let mut classes = Vec::new();

    let sweep = |rep: Perm, index: &mut HashMap<ElementKey, u32>, classes: &mut Vec<ConjugacyClass>| {
        let id = classes.len() as u32;
        *index.get_mut(&chain.key(&rep)).unwrap() = id;
        let mut queue = vec![rep.clone()];
        let mut size = 1u64;
        while let Some(e) = queue.pop() {
            for s in group.generators() {
                let f = e.conjugate_by(s);
                let slot = index.get_mut(&chain.key(&f)).unwrap();
                if *slot == u32::MAX {
                    *slot = id;
                    size += 1;
                    queue.push(f);
                }
            }
        }
        classes.push(make_class(rep, size, order));
    };

    sweep(group.identity(), &mut index, &mut classes);
    for k in &keys {
        if index[k] == u32::MAX {
            let rep = chain.from_key(k).unwrap();
            sweep(rep, &mut index, &mut classes);
        }
    }
    ClassData::from_classes(classes, Some(index))
}

fn random_classes(group: &GroupHandle, order: u64) -> Result<ClassData> {
    let mut rng = group.config().rng(0x0C1A_55E5);
    let mut classes = vec![make_class(group.identity(), 1, order)];
    let mut by_ct: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
    by_ct.insert(classes[0].cycle_type.clone(), vec![0]);
    let mut adapted: Vec<OnceLock<GroupHandle>> = vec![OnceLock::new()];
    let mut total = 1u64;
    let mut draws = 0;
    while total < order {
        draws += 1;
        if draws > RANDOM_DRAW_CAP {
            return Err(Error::BudgetExceeded(format!(
                "randomized class search found {total} of {order} elements"
            )));
        }
        let g = group.random_element(&mut rng);
        let o = g.order();
        for d in (1..=o).filter(|d| o.is_multiple_of(*d)) {
            let y = g.pow(d as i64);
            let ct = y.cycle_type();
            let mut known = false;
            if let Some(cands) = by_ct.get(&ct) {
                for &c in cands {
                    let rep = &classes[c].representative;
                    if adapted[c].get().is_none() {
                        let a = group.adapted_to(rep)?;
                        let _ = adapted[c].set(a);
                    }
                    if conjugate_in(adapted[c].get().unwrap(), rep, &y).is_some() {
                        known = true;
                        break;
                    }
                }
            }
            if known {
                continue;
            }
            let cent = group.centralizer(&y)?;
            let size = (group.order() / cent.order())
                .to_u64()
                .ok_or_else(|| Error::Internal("class size overflow".into()))?;
            by_ct.entry(ct).or_default().push(classes.len());
            classes.push(make_class(y, size, order));
            adapted.push(OnceLock::new());
            total += size;
        }
    }
    if total != order {
        return Err(Error::Internal(format!("class sizes sum to {total}, not {order}")));
    }
    let mut data = ClassData::from_classes(classes, None);
    data.adapted = adapted;
    Ok(data)
}

impl GroupHandle {
    pub fn conjugacy_classes(&self) -> Result<Arc<ClassData>> {
        if let Some(cd) = self.0.classes.get() {
            return Ok(cd.clone());
        }
        let order = self.check_order_budget("conjugacy classes")?;
        let cd = if order <= self.budget().exhaustive_threshold {
            exhaustive_classes(self, order)
        } else {
            random_classes(self, order)?
        };
        let _ = self.0.classes.set(Arc::new(cd));
        Ok(self.0.classes.get().unwrap().clone())
    }

    pub(crate) fn cached_classes(&self) -> Option<&Arc<ClassData>> {
        self.0.classes.get()
    }

    pub fn class_of(&self, x: &Perm) -> Result<usize> {
        self.conjugacy_classes()?.class_of(self, x)
    }

    pub fn class_size(&self, c: usize) -> Result<BigUint> {
        Ok(BigUint::from(self.conjugacy_classes()?.classes()[c].size))
    }

    /// Exponent of the group (lcm of element orders).
    pub fn exponent(&self) -> Result<u64> {
        Ok(self.conjugacy_classes()?.exponent())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Config;

    fn perm(c: &[&[u32]], n: usize) -> Perm {
        Perm::from_cycles(n, c).unwrap()
    }

    fn q8() -> GroupHandle {
        // Regular representation of the quaternion group on 8 points.
        let i = perm(&[&[0, 2, 1, 3], &[4, 6, 5, 7]], 8);
        let j = perm(&[&[0, 4, 1, 5], &[2, 7, 3, 6]], 8);
        GroupHandle::build(vec![i, j]).unwrap()
    }

    fn sizes(g: &GroupHandle) -> Vec<u64> {
        let mut s: Vec<u64> = g.conjugacy_classes().unwrap().classes().iter().map(|c| c.size).collect();
        s.sort();
        s
    }

    #[test]
    fn small_class_lists() {
        let s3 = GroupHandle::build(vec![perm(&[&[0, 1]], 3), perm(&[&[0, 1, 2]], 3)]).unwrap();
        assert_eq!(sizes(&s3), vec![1, 2, 3]);
        let q = q8();
        assert_eq!(q.order_u64(), Some(8));
        assert_eq!(sizes(&q), vec![1, 1, 2, 2, 2]);
    }

    #[test]
    fn representatives_are_least_in_their_class() {
        let s4 = GroupHandle::build(vec![perm(&[&[0, 1]], 4), perm(&[&[0, 1, 2, 3]], 4)]).unwrap();
        let cd = s4.conjugacy_classes().unwrap();
        assert!(cd.classes()[0].representative.is_identity());
        for g in s4.elements() {
            let c = cd.class_of(&s4, &g).unwrap();
            let rep = &cd.classes()[c].representative;
            if c > 0 {
                assert!(s4.key(rep) <= s4.key(&g));
            }
            assert!(s4.are_conjugate(rep, &g).unwrap());
        }
    }

    #[test]
    fn randomized_sweep_agrees_with_exhaustive() {
        let gens = vec![perm(&[&[0, 1]], 6), perm(&[&[0, 1, 2, 3, 4, 5]], 6)];
        let exhaustive = GroupHandle::build(gens.clone()).unwrap();
        let mut config = Config::with_seed(7);
        config.budget.exhaustive_threshold = 10;
        let random = GroupHandle::build_with(6, gens, config).unwrap();
        assert_eq!(sizes(&exhaustive), sizes(&random));
        assert!(!random.conjugacy_classes().unwrap().exhaustive());
        let cd = random.conjugacy_classes().unwrap();
        for g in random.elements().iter().step_by(37) {
            let c = cd.class_of(&random, g).unwrap();
            assert_eq!(cd.classes()[c].cycle_type, g.cycle_type());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let mut config = Config::default();
        config.budget.max_order = 5;
        let s3 = GroupHandle::build_with(3, vec![perm(&[&[0, 1]], 3), perm(&[&[0, 1, 2]], 3)], config)
            .unwrap();
        assert!(s3.conjugacy_classes().unwrap_err().is_budget());
    }
}
