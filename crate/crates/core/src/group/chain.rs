//! Stabilizer chains built by the deterministic Schreier–Sims algorithm.
//!
//! Level `i` stores the base point `b_i`, the strong generators `S_i`
//! fixing `b_0, …, b_{i−1}`, the fundamental orbit `Δ_i = b_i^⟨S_i⟩` and an
//! explicit transversal: `u_p` maps `b_i` to `p`.
//!
//! Every group element factors uniquely as `g = v_{k−1} ⋯ v_1 v_0` with
//! `v_i ∈ U_i`; since products act left to right, the image of `b_l` under
//! `g` is `p^(v_{l−1} ⋯ v_0)` where `v_l = u_p`.

use std::cmp::Ordering;

use num_bigint::BigUint;
use rand::Rng;

use crate::perm::Perm;

#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub base_point: u32,
    pub gens: Vec<Perm>,
    pub orbit: Vec<u32>,
    trans: Vec<Option<Perm>>,
    trans_inv: Vec<Option<Perm>>,
}

impl Level {
    fn new(degree: usize, base_point: u32, gens: Vec<Perm>) -> Self {
        let mut level = Level {
            base_point,
            gens,
            orbit: Vec::new(),
            trans: vec![None; degree],
            trans_inv: vec![None; degree],
        };
        level.rebuild_orbit(degree);
        level
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        self.trans.iter_mut().for_each(|t| *t = None);
        self.trans_inv.iter_mut().for_each(|t| *t = None);
        self.orbit.clear();
        let b = self.base_point as usize;
        self.trans[b] = Some(Perm::identity(degree));
        self.orbit.push(self.base_point);
        let mut head = 0;
        while head < self.orbit.len() {
            let q = self.orbit[head];
            head += 1;
            for s in &self.gens {
                let r = s.image(q) as usize;
                if self.trans[r].is_none() {
                    let u = self.trans[q as usize].as_ref().unwrap().compose(s);
                    self.trans[r] = Some(u);
                    self.orbit.push(r as u32);
                }
            }
        }
        for &p in &self.orbit {
            self.trans_inv[p as usize] = Some(self.trans[p as usize].as_ref().unwrap().inverse());
        }
    }

    #[inline]
    pub fn contains(&self, p: u32) -> bool {
        self.trans[p as usize].is_some()
    }

    /// The transversal element mapping the base point to `p`.
    #[inline]
    pub fn transversal(&self, p: u32) -> Option<&Perm> {
        self.trans[p as usize].as_ref()
    }

    #[inline]
    pub fn transversal_inv(&self, p: u32) -> Option<&Perm> {
        self.trans_inv[p as usize].as_ref()
    }
}

/// A base and strong generating set with transversals.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    pub(crate) levels: Vec<Level>,
}

/// Base images of a group element; they determine the element uniquely.
///
/// Small bases are packed into a single integer whose ordering agrees with
/// the lexicographic ordering of the image tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ElementKey {
    Packed(u128),
    Wide(Box<[u32]>),
}

impl Ord for ElementKey {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ElementKey::Packed(a), ElementKey::Packed(b)) => a.cmp(b),
            (ElementKey::Wide(a), ElementKey::Wide(b)) => a.cmp(b),
            (ElementKey::Packed(_), ElementKey::Wide(_)) => Ordering::Less,
            (ElementKey::Wide(_), ElementKey::Packed(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for ElementKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl StabChain {
    /// Runs Schreier–Sims on `gens`, starting the base with `prefix`.
    ///
    /// Prefix points are kept even when their orbit is trivial, so that a
    /// subgroup chain built on the base of its overgroup lines up level by
    /// level.
    pub fn new(degree: usize, gens: &[Perm], prefix: &[u32]) -> Self {
        let gens: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut base: Vec<u32> = prefix.to_vec();
        for g in &gens {
            if base.iter().all(|&b| g.image(b) == b) {
                base.push(g.first_moved().unwrap());
            }
        }
        let mut chain = StabChain {
            degree,
            levels: Vec::with_capacity(base.len()),
        };
        for (i, &b) in base.iter().enumerate() {
            let s: Vec<Perm> = gens
                .iter()
                .filter(|g| base[..i].iter().all(|&c| g.image(c) == c))
                .cloned()
                .collect();
            chain.levels.push(Level::new(degree, b, s));
        }
        chain.complete();
        chain
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let li = i as usize;
            let mut jump = None;
            'scan: for oi in 0..self.levels[li].orbit.len() {
                let p = self.levels[li].orbit[oi];
                for si in 0..self.levels[li].gens.len() {
                    let level = &self.levels[li];
                    let s = &level.gens[si];
                    let ps = s.image(p);
                    let h = level
                        .transversal(p)
                        .unwrap()
                        .compose(s)
                        .compose(level.transversal_inv(ps).unwrap());
                    if h.is_identity() {
                        continue;
                    }
                    let (res, j) = self.strip_from(h, li + 1);
                    if j < self.levels.len() || !res.is_identity() {
                        if j == self.levels.len() {
                            let b = res.first_moved().unwrap();
                            self.levels.push(Level::new(self.degree, b, Vec::new()));
                        }
                        for l in li + 1..=j {
                            self.levels[l].gens.push(res.clone());
                            self.levels[l].rebuild_orbit(self.degree);
                        }
                        jump = Some(j);
                        break 'scan;
                    }
                }
            }
            match jump {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
    }

    /// Sifts `g` starting at level `start`; returns the residue and the
    /// level at which sifting stopped (`len()` when it passed every level).
    pub(crate) fn strip_from(&self, mut g: Perm, start: usize) -> (Perm, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let p = g.image(level.base_point);
            match level.transversal_inv(p) {
                Some(ui) => g = g.compose(ui),
                None => return (g, i),
            }
        }
        let k = self.levels.len();
        (g, k)
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (res, j) = self.strip_from(g.clone(), 0);
        j == self.levels.len() && res.is_identity()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// All strong generators, without duplicates.
    pub fn strong_generators(&self) -> Vec<Perm> {
        let mut out: Vec<Perm> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub(crate) fn level(&self, i: usize) -> &Level {
        &self.levels[i]
    }

    /// Key of an element already known to lie in the group.
    pub fn key(&self, g: &Perm) -> ElementKey {
        let images: Vec<u32> = self.levels.iter().map(|l| g.image(l.base_point)).collect();
        self.pack(&images)
    }

    pub(crate) fn pack(&self, images: &[u32]) -> ElementKey {
        let bits = self.key_bits();
        if bits * images.len() <= 128 {
            let mut v: u128 = 0;
            for &x in images {
                v = (v << bits) | x as u128;
            }
            ElementKey::Packed(v)
        } else {
            ElementKey::Wide(images.into())
        }
    }

    pub(crate) fn unpack(&self, key: &ElementKey) -> Vec<u32> {
        match key {
            ElementKey::Wide(v) => v.to_vec(),
            ElementKey::Packed(v) => {
                let bits = self.key_bits();
                let mask = (1u128 << bits) - 1;
                let k = self.levels.len();
                (0..k)
                    .map(|i| ((v >> (bits * (k - 1 - i))) & mask) as u32)
                    .collect()
            }
        }
    }

    fn key_bits(&self) -> usize {
        let d = self.degree.max(2);
        (usize::BITS - (d - 1).leading_zeros()) as usize
    }

    /// Rebuilds the element with the given base images, if it exists.
    pub fn from_base_images(&self, images: &[u32]) -> Option<Perm> {
        let mut targets = images.to_vec();
        let mut acc = Perm::identity(self.degree);
        for (i, level) in self.levels.iter().enumerate() {
            let p = targets[i];
            let u = level.transversal(p)?;
            let ui = level.transversal_inv(p).unwrap();
            for t in targets.iter_mut().skip(i + 1) {
                *t = ui.image(*t);
            }
            acc = u.compose(&acc);
        }
        Some(acc)
    }

    pub fn from_key(&self, key: &ElementKey) -> Option<Perm> {
        self.from_base_images(&self.unpack(key))
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        let mut acc = Perm::identity(self.degree);
        for level in &self.levels {
            let p = level.orbit[rng.random_range(0..level.orbit.len())];
            acc = level.transversal(p).unwrap().compose(&acc);
        }
        acc
    }

    /// Calls `f` on every element, in a fixed depth-first order.
    pub fn for_each_element(&self, mut f: impl FnMut(&Perm)) {
        fn rec(chain: &StabChain, l: usize, suffix: &Perm, f: &mut dyn FnMut(&Perm)) {
            if l == chain.levels.len() {
                f(suffix);
                return;
            }
            let level = &chain.levels[l];
            for &p in &level.orbit {
                let next = level.transversal(p).unwrap().compose(suffix);
                rec(chain, l + 1, &next, f);
            }
        }
        rec(self, 0, &Perm::identity(self.degree), &mut f);
    }

    pub fn elements(&self) -> Vec<Perm> {
        let mut out = Vec::new();
        self.for_each_element(|g| out.push(g.clone()));
        out
    }
}
