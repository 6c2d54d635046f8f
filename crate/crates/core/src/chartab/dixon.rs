//! Dixon–Schneider: common eigenvectors of the class matrices over `F_r`,
//! lifted to cyclotomic values through power maps.

use std::collections::{HashMap, HashSet};

use num_integer::Roots;
use rayon::prelude::*;

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::group::{ClassData, ElementKey, GroupHandle};
use crate::modular::{charpoly, nullspace, prime_one_mod, roots, rref, Fp};
use crate::perm::Perm;

pub(super) struct Computed {
    pub degrees: Vec<u64>,
    pub values: Vec<Vec<Cyclo>>,
    pub prime: u64,
    pub root: u64,
    pub modular: Vec<Vec<u64>>,
}

/// Elements of one class, as permutations.
fn class_members(group: &GroupHandle, classes: &ClassData, j: usize) -> Vec<Perm> {
    let chain = group.chain();
    if let Some(index) = classes.index() {
        let mut keys: Vec<&ElementKey> = index.iter().filter(|(_, &c)| c as usize == j).map(|(k, _)| k).collect();
        keys.sort_unstable();
        return keys.into_iter().map(|k| chain.from_key(k).unwrap()).collect();
    }
    let rep = classes.classes()[j].representative.clone();
    let mut seen: HashSet<ElementKey> = HashSet::from([chain.key(&rep)]);
    let mut out = vec![rep];
    let mut head = 0;
    while head < out.len() {
        let e = out[head].clone();
        head += 1;
        for s in group.generators() {
            let f = e.conjugate_by(s);
            if seen.insert(chain.key(&f)) {
                out.push(f);
            }
        }
    }
    out
}

/// `M_j[i][l] = #{y ∈ C_j : z_i y ∈ C_l}`, reduced modulo `r`. The vector
/// `(χ(z_l)/χ(1))_l` is an eigenvector with eigenvalue `|C_j| χ(z_j)/χ(1)`.
fn class_matrix(group: &GroupHandle, classes: &ClassData, j: usize, k: Fp) -> Result<Vec<Vec<u64>>> {
    let n = classes.len();
    let members = class_members(group, classes, j);
    let reps: Vec<&Perm> = classes.classes().iter().map(|c| &c.representative).collect();
    let chain = group.chain();
    let base = chain.base();
    let counts = members
        .par_chunks(256)
        .map(|chunk| -> Result<Vec<u64>> {
            let mut local = vec![0u64; n * n];
            let mut images = vec![0u32; base.len()];
            for y in chunk {
                for (i, z) in reps.iter().enumerate() {
                    let l = if let Some(index) = classes.index() {
                        for (slot, &b) in images.iter_mut().zip(&base) {
                            *slot = y.image(z.image(b));
                        }
                        index[&chain.pack(&images)] as usize
                    } else {
                        classes.class_of_member(group, &z.compose(y))?
                    };
                    local[i * n + l] += 1;
                }
            }
            Ok(local)
        })
        .try_reduce(
            || vec![0u64; n * n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    Ok((0..n)
        .map(|i| (0..n).map(|l| counts[i * n + l] % k.r).collect())
        .collect())
}

/// Splits `space` (RREF rows spanning an invariant subspace of column
/// vectors) into common eigenspaces of `m`.
fn split_space(k: Fp, m: &[Vec<u64>], space: Vec<Vec<u64>>) -> Result<Vec<Vec<Vec<u64>>>> {
    let d = space.len();
    let n = m.len();
    let pivots: Vec<usize> = space
        .iter()
        .map(|row| row.iter().position(|&x| x != 0).unwrap())
        .collect();
    // Row t of `a`: coordinates of M·b_t in the basis.
    let a: Vec<Vec<u64>> = space
        .iter()
        .map(|b| {
            let v: Vec<u64> = (0..n)
                .map(|i| (0..n).fold(0, |acc, l| k.add(acc, k.mul(m[i][l], b[l]))))
                .collect();
            pivots.iter().map(|&p| v[p]).collect()
        })
        .collect();
    let eigen = roots(k, &charpoly(k, &a));
    if eigen.len() <= 1 {
        return Ok(vec![space]);
    }
    let mut parts = Vec::with_capacity(eigen.len());
    let mut total = 0;
    for lambda in eigen {
        // Row vectors c with c·a = λc.
        let shifted: Vec<Vec<u64>> = (0..d)
            .map(|s| {
                (0..d)
                    .map(|t| {
                        let x = a[t][s];
                        if s == t { k.sub(x, lambda) } else { x }
                    })
                    .collect()
            })
            .collect();
        let coords = nullspace(k, &shifted);
        let mut rows: Vec<Vec<u64>> = coords
            .iter()
            .map(|c| {
                (0..n)
                    .map(|col| (0..d).fold(0, |acc, t| k.add(acc, k.mul(c[t], space[t][col]))))
                    .collect()
            })
            .collect();
        rref(k, &mut rows);
        total += rows.len();
        parts.push(rows);
    }
    if total != d {
        return Err(Error::CharacterTable(format!(
            "class matrix is not diagonalizable on a {d}-dimensional eigenspace"
        )));
    }
    Ok(parts)
}

pub(super) fn compute(group: &GroupHandle, classes: &ClassData) -> Result<Computed> {
    let order = group.check_order_budget("character table")?;
    let n = classes.len();
    if n > group.budget().max_classes {
        return Err(Error::BudgetExceeded(format!(
            "{n} classes exceed the limit {}",
            group.budget().max_classes
        )));
    }
    let e = classes.exponent();
    let lower = 2 * (order.sqrt() + 1) * n as u64;
    let r = prime_one_mod(e, lower)
        .ok_or_else(|| Error::CharacterTable(format!("no prime ≡ 1 mod {e} below 2^32")))?;
    let k = Fp::new(r);
    let root = k.root_of_unity(e);

    let mut order_of_use: Vec<usize> = (1..n).collect();
    order_of_use.sort_by_key(|&j| (classes.classes()[j].size, j));
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect()];
    for j in order_of_use {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let m = class_matrix(group, classes, j, k)?;
        let mut next = Vec::with_capacity(spaces.len());
        for space in spaces {
            if space.len() == 1 {
                next.push(space);
            } else {
                next.extend(split_space(k, &m, space)?);
            }
        }
        spaces = next;
    }
    if spaces.len() != n || spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::CharacterTable("class matrices did not separate the characters".into()));
    }

    let inverse = classes.inverse_classes(group)?;
    let sizes: Vec<u64> = classes.classes().iter().map(|c| c.size).collect();
    let g_mod = order % r;
    let mut modular = Vec::with_capacity(n);
    let mut degrees = Vec::with_capacity(n);
    for space in &spaces {
        let w = &space[0];
        if w[0] != 1 {
            return Err(Error::CharacterTable("eigenvector vanishes at the identity".into()));
        }
        let s = (0..n).fold(0, |acc, l| {
            k.add(acc, k.mul(k.mul(w[l], w[inverse[l]]), sizes[l] % r))
        });
        let target = k.mul(g_mod, k.inv(s));
        let d = (1..=order.sqrt())
            .find(|&d| order % d == 0 && d * d % r == target)
            .ok_or_else(|| Error::CharacterTable("no admissible character degree".into()))?;
        let row: Vec<u64> = (0..n)
            .map(|l| k.mul(w[l], d % r))
            .collect();
        degrees.push(d);
        modular.push(row);
    }

    // Power maps: class of z_l^t for 0 ≤ t < o(z_l).
    let power_maps: Vec<Vec<usize>> = classes
        .classes()
        .par_iter()
        .enumerate()
        .map(|(l, c)| (0..c.order as i64).map(|t| classes.power_class(group, l, t)).collect())
        .collect::<Result<_>>()?;

    let mut root_cache: HashMap<u64, (u64, u64)> = HashMap::new();
    let mut values = Vec::with_capacity(n);
    for (row, &d) in modular.iter().zip(&degrees) {
        let mut vals = Vec::with_capacity(n);
        for (l, c) in classes.classes().iter().enumerate() {
            let o = c.order;
            let &mut (zo_inv, o_inv) = root_cache
                .entry(o)
                .or_insert_with(|| (k.inv(k.pow(root, e / o)), k.inv(o % r)));
            let mut mult = Vec::with_capacity(o as usize);
            let mut total = 0i64;
            for i in 0..o {
                let step = k.pow(zo_inv, i);
                let mut acc = 0u64;
                let mut w = 1u64;
                for t in 0..o as usize {
                    acc = k.add(acc, k.mul(row[power_maps[l][t]], w));
                    w = k.mul(w, step);
                }
                let m = k.lift(k.mul(acc, o_inv));
                if m < 0 || m as u64 > d {
                    return Err(Error::CharacterTable(format!(
                        "eigenvalue multiplicity {m} out of range for degree {d}"
                    )));
                }
                total += m;
                mult.push(m);
            }
            if total as u64 != d {
                return Err(Error::CharacterTable(format!(
                    "eigenvalue multiplicities sum to {total}, not the degree {d}"
                )));
            }
            vals.push(Cyclo::from_multiplicities(o as u32, &mult));
        }
        values.push(vals);
    }

    let mut rows: Vec<usize> = (0..n).collect();
    rows.sort_by(|&a, &b| (degrees[a], &values[a]).cmp(&(degrees[b], &values[b])));
    Ok(Computed {
        degrees: rows.iter().map(|&i| degrees[i]).collect(),
        values: rows.iter().map(|&i| values[i].clone()).collect(),
        prime: r,
        root,
        modular: rows.iter().map(|&i| modular[i].clone()).collect(),
    })
}
