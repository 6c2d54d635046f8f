//! Backtrack searches over the stabilizer chain with orbit-based pruning:
//! centralizers, normalizers and conjugating elements.

use num_bigint::BigUint;

use super::GroupHandle;
use crate::error::{Error, Result};
use crate::perm::Perm;

/// A property of group elements that can be refuted from partial base
/// images.
trait Property {
    /// `images[l]` is the proposed image of base point `base[l]`; all
    /// earlier images have already been accepted.
    fn admissible(&self, base: &[u32], images: &[u32], l: usize) -> bool;
    fn holds(&self, g: &Perm) -> bool;
}

/// Cycle structure of a permutation: cycle id, position and length per point.
struct Cycles {
    id: Vec<u32>,
    pos: Vec<u32>,
    len: Vec<u32>,
}

impl Cycles {
    fn of(x: &Perm) -> Self {
        let n = x.degree();
        let mut c = Cycles {
            id: vec![u32::MAX; n],
            pos: vec![0; n],
            len: vec![0; n],
        };
        let mut next = 0;
        for start in 0..n {
            if c.id[start] != u32::MAX {
                continue;
            }
            let mut members = Vec::new();
            let mut p = start;
            while c.id[p] == u32::MAX {
                c.id[p] = next;
                c.pos[p] = members.len() as u32;
                members.push(p);
                p = x.image(p as u32) as usize;
            }
            for &m in &members {
                c.len[m] = members.len() as u32;
            }
            next += 1;
        }
        c
    }
}

/// Elements `g` with `x^g = y`, i.e. `xg = gy`.
struct Conjugates {
    x: Cycles,
    y: Cycles,
    xp: Perm,
    yp: Perm,
}

impl Property for Conjugates {
    fn admissible(&self, base: &[u32], images: &[u32], l: usize) -> bool {
        let (b, g) = (base[l] as usize, images[l] as usize);
        if self.x.len[b] != self.y.len[g] {
            return false;
        }
        let len = self.x.len[b];
        for a in 0..l {
            let (ba, ga) = (base[a] as usize, images[a] as usize);
            let same_x = self.x.id[ba] == self.x.id[b];
            let same_y = self.y.id[ga] == self.y.id[g];
            if same_x != same_y {
                return false;
            }
            if same_x {
                let dx = (self.x.pos[b] + len - self.x.pos[ba]) % len;
                let dy = (self.y.pos[g] + len - self.y.pos[ga]) % len;
                if dx != dy {
                    return false;
                }
            }
        }
        true
    }

    fn holds(&self, g: &Perm) -> bool {
        self.xp.compose(g) == g.compose(&self.yp)
    }
}

/// Elements normalizing `H`.
struct Normalizes<'a> {
    h: &'a GroupHandle,
    orbit: Vec<u32>,
    size: Vec<u32>,
}

impl<'a> Normalizes<'a> {
    fn new(h: &'a GroupHandle) -> Self {
        let n = h.degree();
        let mut orbit = vec![u32::MAX; n];
        let mut size = vec![0; n];
        let mut next = 0;
        for start in 0..n {
            if orbit[start] != u32::MAX {
                continue;
            }
            let mut members = vec![start as u32];
            orbit[start] = next;
            let mut head = 0;
            while head < members.len() {
                let q = members[head];
                head += 1;
                for s in h.generators() {
                    let r = s.image(q);
                    if orbit[r as usize] == u32::MAX {
                        orbit[r as usize] = next;
                        members.push(r);
                    }
                }
            }
            for &m in &members {
                size[m as usize] = members.len() as u32;
            }
            next += 1;
        }
        Normalizes { h, orbit, size }
    }
}

impl Property for Normalizes<'_> {
    fn admissible(&self, base: &[u32], images: &[u32], l: usize) -> bool {
        let (b, g) = (base[l] as usize, images[l] as usize);
        if self.size[b] != self.size[g] {
            return false;
        }
        (0..l).all(|a| {
            let (ba, ga) = (base[a] as usize, images[a] as usize);
            (self.orbit[ba] == self.orbit[b]) == (self.orbit[ga] == self.orbit[g])
        })
    }

    fn holds(&self, g: &Perm) -> bool {
        let gi = g.inverse();
        self.h
            .generators()
            .iter()
            .all(|s| self.h.chain().contains(&gi.compose(s).compose(g)))
    }
}

/// Depth-first search below level `start` for an element with the given
/// forced images at levels `..=start`.
fn dfs(
    group: &GroupHandle,
    prop: &dyn Property,
    base: &[u32],
    images: &mut Vec<u32>,
    l: usize,
    suffix: &Perm,
) -> Option<Perm> {
    let chain = group.chain();
    if l == chain.len() {
        return prop.holds(suffix).then(|| suffix.clone());
    }
    let level = chain.level(l);
    for &p in &level.orbit {
        let gamma = suffix.image(p);
        images.truncate(l);
        images.push(gamma);
        if !prop.admissible(base, images, l) {
            continue;
        }
        let next = level.transversal(p).unwrap().compose(suffix);
        if let Some(g) = dfs(group, prop, base, images, l + 1, &next) {
            return Some(g);
        }
    }
    images.truncate(l);
    None
}

/// Finds an element of `G^{(i)}` mapping `b_i` to `gamma` with the property.
fn search_at(group: &GroupHandle, prop: &dyn Property, base: &[u32], i: usize, gamma: u32) -> Option<Perm> {
    let mut images: Vec<u32> = base[..i].to_vec();
    images.push(gamma);
    if !(0..=i).all(|l| prop.admissible(base, &images, l)) {
        return None;
    }
    let u = group.chain().level(i).transversal(gamma)?.clone();
    dfs(group, prop, base, &mut images, i + 1, &u)
}

/// Computes the subgroup of elements with the property, which must be
/// closed under products and contain `known`.
fn subgroup_search(
    group: &GroupHandle,
    prop: &dyn Property,
    known: Vec<Perm>,
    target: Option<&BigUint>,
) -> Result<GroupHandle> {
    let base = group.chain().base();
    let mut gens = known;
    let mut k = group.subgroup_unchecked(gens.clone())?;
    for i in (0..base.len()).rev() {
        if target.is_some_and(|t| k.order() == t) {
            break;
        }
        let orbit = group.chain().level(i).orbit.clone();
        let mut failed = vec![false; group.degree()];
        for gamma in orbit {
            if k.chain().level(i).contains(gamma) || failed[gamma as usize] {
                continue;
            }
            match search_at(group, prop, &base, i, gamma) {
                Some(g) => {
                    gens.push(g);
                    k = group.subgroup_unchecked(gens.clone())?;
                    if target.is_some_and(|t| k.order() == t) {
                        break;
                    }
                }
                None => {
                    // Failure propagates along the orbit of the current
                    // point stabilizer in K.
                    let lvl = k.chain().level(i);
                    let mut stack = vec![gamma];
                    failed[gamma as usize] = true;
                    while let Some(q) = stack.pop() {
                        for s in &lvl.gens {
                            let r = s.image(q);
                            if !failed[r as usize] {
                                failed[r as usize] = true;
                                stack.push(r);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(k)
}

impl GroupHandle {
    /// The same group with a base running along the cycles of `x`, so that
    /// searches for elements commuting with or conjugating `x` are forced
    /// once the image of a cycle's first point is chosen.
    pub(crate) fn adapted_to(&self, x: &Perm) -> Result<GroupHandle> {
        let per_cycle = self.chain().len().max(1);
        let cap = 2 * per_cycle + 2;
        let mut cycles = x.cycles();
        cycles.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        let prefix: Vec<u32> = cycles
            .iter()
            .filter(|c| c.len() > 1)
            .flat_map(|c| c.iter().take(per_cycle).copied())
            .take(cap)
            .collect();
        self.rebased(&prefix)
    }

    /// `C_G(x)`.
    pub fn centralizer(&self, x: &Perm) -> Result<GroupHandle> {
        self.require_member(x)?;
        let prop = Conjugates {
            x: Cycles::of(x),
            y: Cycles::of(x),
            xp: x.clone(),
            yp: x.clone(),
        };
        // With an element index the centralizer order is known in advance.
        let target = self
            .cached_classes()
            .and_then(|cd| cd.exhaustive().then(|| cd.class_of(self, x).ok()).flatten().map(|c| {
                self.order() / BigUint::from(cd.classes()[c].size)
            }));
        let adapted = self.adapted_to(x)?;
        let c = subgroup_search(&adapted, &prop, vec![x.clone()], target.as_ref())?;
        self.subgroup_unchecked(c.generators().to_vec())
    }

    /// `N_G(H)`.
    pub fn normalizer(&self, h: &GroupHandle) -> Result<GroupHandle> {
        if !h.is_subgroup_of(self) {
            return Err(Error::NotSubgroup);
        }
        if h.is_trivial() {
            return self.subgroup_unchecked(self.generators().to_vec());
        }
        let prop = Normalizes::new(h);
        let known: Vec<Perm> = h.generators().to_vec();
        subgroup_search(self, &prop, known, None)
    }

    /// Some `g` with `x^g = y`, or `None` when `x` and `y` are not conjugate.
    pub fn conjugating_element(&self, x: &Perm, y: &Perm) -> Result<Option<Perm>> {
        self.require_member(x)?;
        self.require_member(y)?;
        if x == y {
            return Ok(Some(self.identity()));
        }
        if x.cycle_type() != y.cycle_type() {
            return Ok(None);
        }
        Ok(conjugate_in(&self.adapted_to(x)?, x, y))
    }

    pub fn are_conjugate(&self, x: &Perm, y: &Perm) -> Result<bool> {
        Ok(self.conjugating_element(x, y)?.is_some())
    }
}

/// Conjugacy test over a chain from [`GroupHandle::adapted_to`]`(x)`;
/// both elements must lie in the group.
pub(crate) fn conjugate_in(adapted: &GroupHandle, x: &Perm, y: &Perm) -> Option<Perm> {
    if x == y {
        return Some(adapted.identity());
    }
    if x.cycle_type() != y.cycle_type() {
        return None;
    }
    let prop = Conjugates {
        x: Cycles::of(x),
        y: Cycles::of(y),
        xp: x.clone(),
        yp: y.clone(),
    };
    let base = adapted.chain().base();
    let mut images = Vec::with_capacity(base.len());
    dfs(adapted, &prop, &base, &mut images, 0, &adapted.identity())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(c: &[&[u32]], n: usize) -> Perm {
        Perm::from_cycles(n, c).unwrap()
    }

    fn sym(n: usize) -> GroupHandle {
        let cyc: Vec<u32> = (0..n as u32).collect();
        GroupHandle::build(vec![perm(&[&[0, 1]], n), perm(&[&cyc], n)]).unwrap()
    }

    /// Brute-force oracle: elements commuting with `x`.
    fn brute_centralizer(g: &GroupHandle, x: &Perm) -> usize {
        g.elements().iter().filter(|h| h.commutes_with(x)).count()
    }

    #[test]
    fn centralizers_match_brute_force() {
        let s5 = sym(5);
        for x in [
            perm(&[&[0, 1, 2]], 5),
            perm(&[&[0, 1], &[2, 3]], 5),
            perm(&[&[0, 1, 2, 3, 4]], 5),
            Perm::identity(5),
            perm(&[&[0, 1, 2], &[3, 4]], 5),
        ] {
            let c = s5.centralizer(&x).unwrap();
            assert_eq!(c.order_u64().unwrap() as usize, brute_centralizer(&s5, &x), "x = {x}");
            assert!(c.generators().iter().all(|g| g.commutes_with(&x)));
        }
        let s3 = sym(3);
        assert_eq!(s3.centralizer(&perm(&[&[0, 1, 2]], 3)).unwrap().order_u64(), Some(3));
    }

    #[test]
    fn sylow_two_of_s4_is_self_normalizing() {
        let s4 = sym(4);
        let d8 = s4
            .subgroup(vec![perm(&[&[0, 1, 2, 3]], 4), perm(&[&[0, 2]], 4)])
            .unwrap();
        assert_eq!(d8.order_u64(), Some(8));
        assert_eq!(s4.normalizer(&d8).unwrap().order_u64(), Some(8));
        let v4 = s4
            .subgroup(vec![perm(&[&[0, 1], &[2, 3]], 4), perm(&[&[0, 2], &[1, 3]], 4)])
            .unwrap();
        assert_eq!(s4.normalizer(&v4).unwrap().order_u64(), Some(24));
    }

    #[test]
    fn normalizer_matches_brute_force() {
        let s5 = sym(5);
        let h = s5.subgroup(vec![perm(&[&[0, 1, 2]], 5)]).unwrap();
        let brute = s5
            .elements()
            .iter()
            .filter(|g| {
                h.generators()
                    .iter()
                    .all(|s| h.is_member(&s.conjugate_by(g)).unwrap())
            })
            .count();
        assert_eq!(s5.normalizer(&h).unwrap().order_u64().unwrap() as usize, brute);
    }

    #[test]
    fn conjugacy_search_agrees_with_cycle_types_in_symmetric_groups() {
        let s5 = sym(5);
        let xs = [
            perm(&[&[0, 1, 2]], 5),
            perm(&[&[2, 4, 3]], 5),
            perm(&[&[0, 1], &[2, 3]], 5),
            perm(&[&[1, 4], &[0, 3]], 5),
        ];
        for x in &xs {
            for y in &xs {
                let g = s5.conjugating_element(x, y).unwrap();
                assert_eq!(g.is_some(), x.cycle_type() == y.cycle_type());
                if let Some(g) = g {
                    assert_eq!(&x.conjugate_by(&g), y);
                }
            }
        }
        let a5 = GroupHandle::build(vec![perm(&[&[0, 1, 2]], 5), perm(&[&[0, 1, 2, 3, 4]], 5)]).unwrap();
        let c = perm(&[&[0, 1, 2, 3, 4]], 5);
        // The two 5-cycle classes of A5 do not fuse.
        assert!(!a5.are_conjugate(&c, &c.pow(2)).unwrap());
        assert!(a5.are_conjugate(&c, &c.pow(4)).unwrap());
    }

    #[test]
    fn inputs_outside_the_group_are_rejected() {
        let a3 = GroupHandle::build(vec![perm(&[&[0, 1, 2]], 3)]).unwrap();
        let t = perm(&[&[0, 1]], 3);
        assert!(matches!(a3.centralizer(&t), Err(Error::NotMember)));
        assert!(a3.conjugating_element(&t, &t).is_err());
        let s3 = sym(3);
        let h = GroupHandle::build(vec![perm(&[&[0, 1, 2, 3]], 4)]).unwrap();
        assert!(s3.normalizer(&h).is_err());
    }
}
