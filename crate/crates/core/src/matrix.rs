//! Matrix groups over GF(q) and their permutation actions.
//!
//! Matrices act on row vectors, `v ↦ vM`. The nonzero vector with
//! coordinates `v_0, …, v_{n−1}` is point `Σ v_i q^i − 1`; projective
//! points are the nonzero vectors whose first nonzero coordinate is 1,
//! numbered in the same order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::prime_power;
use crate::error::{Error, Result};
use crate::gf::Gf;
use crate::group::{Config, GroupHandle};
use crate::perm::Perm;

pub type Matrix = Vec<Vec<u32>>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Action {
    #[default]
    NonzeroVectors,
    ProjectivePoints,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MatrixGroupSpec {
    pub field_size: u32,
    pub dimension: usize,
    pub generators: Vec<Matrix>,
    #[serde(default)]
    pub action: Action,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classical {
    SL,
    SU,
    Sp,
}

impl fmt::Display for Classical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classical::SL => "SL",
            Classical::SU => "SU",
            Classical::Sp => "Sp",
        })
    }
}

impl FromStr for Classical {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SL" => Ok(Classical::SL),
            "SU" => Ok(Classical::SU),
            "SP" => Ok(Classical::Sp),
            _ => Err(Error::Unsupported(format!("classical family {s:?}"))),
        }
    }
}

/// Matrix arithmetic over a fixed field.
pub struct MatrixRing {
    pub field: Gf,
    pub n: usize,
}

impl MatrixRing {
    pub fn new(q: u32, n: usize) -> Result<Self> {
        Ok(MatrixRing {
            field: Gf::new(q)?,
            n,
        })
    }

    pub fn identity(&self) -> Matrix {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| u32::from(i == j)).collect())
            .collect()
    }

    pub fn mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        let k = &self.field;
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| (0..self.n).fold(0, |acc, t| k.add(acc, k.mul(a[i][t], b[t][j]))))
                    .collect()
            })
            .collect()
    }

    pub fn transpose(&self, a: &Matrix) -> Matrix {
        (0..self.n).map(|i| (0..self.n).map(|j| a[j][i]).collect()).collect()
    }

    /// Entrywise `x ↦ x^e`.
    pub fn frobenius(&self, a: &Matrix, e: u64) -> Matrix {
        a.iter()
            .map(|row| row.iter().map(|&x| self.field.pow(x, e)).collect())
            .collect()
    }

    pub fn det(&self, a: &Matrix) -> u32 {
        let k = &self.field;
        let mut m = a.clone();
        let mut det = 1;
        for col in 0..self.n {
            let Some(piv) = (col..self.n).find(|&r| m[r][col] != 0) else {
                return 0;
            };
            if piv != col {
                m.swap(piv, col);
                det = k.neg(det);
            }
            det = k.mul(det, m[col][col]);
            let inv = k.inv(m[col][col]).unwrap();
            for r in col + 1..self.n {
                let factor = k.mul(m[r][col], inv);
                if factor == 0 {
                    continue;
                }
                for c in col..self.n {
                    m[r][c] = k.sub(m[r][c], k.mul(factor, m[col][c]));
                }
            }
        }
        det
    }

    pub fn vec_mul(&self, v: &[u32], a: &Matrix) -> Vec<u32> {
        let k = &self.field;
        (0..self.n)
            .map(|j| (0..self.n).fold(0, |acc, i| k.add(acc, k.mul(v[i], a[i][j]))))
            .collect()
    }

    fn vector(&self, index: usize) -> Vec<u32> {
        let q = self.field.order() as usize;
        let mut x = index + 1;
        (0..self.n)
            .map(|_| {
                let d = x % q;
                x /= q;
                d as u32
            })
            .collect()
    }

    fn index(&self, v: &[u32]) -> usize {
        let q = self.field.order() as usize;
        v.iter().rev().fold(0usize, |acc, &c| acc * q + c as usize) - 1
    }

    fn normalize(&self, v: &[u32]) -> Vec<u32> {
        let lead = *v.iter().find(|&&c| c != 0).unwrap();
        let inv = self.field.inv(lead).unwrap();
        v.iter().map(|&c| self.field.mul(c, inv)).collect()
    }
}

fn point_count(q: u32, n: usize, action: Action) -> Option<usize> {
    let total = (q as u64).checked_pow(n as u32)?.checked_sub(1)?;
    let count = match action {
        Action::NonzeroVectors => total,
        Action::ProjectivePoints => total / (q as u64 - 1),
    };
    usize::try_from(count).ok()
}

/// Permutation image of `spec` under its chosen action.
pub fn matrix_to_perm(spec: &MatrixGroupSpec, config: Config) -> Result<GroupHandle> {
    let ring = MatrixRing::new(spec.field_size, spec.dimension)?;
    let q = spec.field_size;
    let n = spec.dimension;
    for (i, g) in spec.generators.iter().enumerate() {
        if g.len() != n || g.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= q)) {
            return Err(Error::Malformed(format!("generator {i} is not a {n}×{n} matrix over GF({q})")));
        }
        if ring.det(g) == 0 {
            return Err(Error::SingularMatrix(i));
        }
    }
    let points = point_count(q, n, spec.action)
        .filter(|&c| c <= config.budget.max_degree)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!(
                "action of a {n}-dimensional group over GF({q}) needs more than {} points",
                config.budget.max_degree
            ))
        })?;
    let perms = match spec.action {
        Action::NonzeroVectors => spec
            .generators
            .iter()
            .map(|g| {
                let images = (0..points)
                    .map(|i| ring.index(&ring.vec_mul(&ring.vector(i), g)) as u32)
                    .collect();
                Perm::from_images(images)
            })
            .collect::<Result<Vec<_>>>()?,
        Action::ProjectivePoints => {
            let all = point_count(q, n, Action::NonzeroVectors).unwrap();
            let mut proj_index = vec![u32::MAX; all];
            let mut reps = Vec::with_capacity(points);
            for i in 0..all {
                let v = ring.vector(i);
                if ring.normalize(&v) == v {
                    proj_index[i] = reps.len() as u32;
                    reps.push(v);
                }
            }
            spec.generators
                .iter()
                .map(|g| {
                    let images = reps
                        .iter()
                        .map(|v| {
                            let w = ring.normalize(&ring.vec_mul(v, g));
                            proj_index[ring.index(&w)]
                        })
                        .collect();
                    Perm::from_images(images)
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    GroupHandle::build_with(points, perms, config)
}

/// `|SL_n(q)|`, `|SU_n(q)|` or `|Sp_n(q)|`.
pub fn classical_order(family: Classical, n: u32, q: u64) -> BigUint {
    let qb = BigUint::from(q);
    match family {
        Classical::SL => {
            let mut o = qb.pow(n * (n - 1) / 2);
            for i in 2..=n {
                o *= qb.pow(i) - 1u32;
            }
            o
        }
        Classical::SU => {
            let mut o = qb.pow(n * (n - 1) / 2);
            for i in 2..=n {
                if i % 2 == 0 {
                    o *= qb.pow(i) - 1u32;
                } else {
                    o *= qb.pow(i) + 1u32;
                }
            }
            o
        }
        Classical::Sp => {
            let m = n / 2;
            let mut o = qb.pow(m * m);
            for i in 1..=m {
                o *= qb.pow(2 * i) - 1u32;
            }
            o
        }
    }
}

/// Elementary matrix `I + β E_{ij}`.
fn transvection(ring: &MatrixRing, i: usize, j: usize, beta: u32) -> Matrix {
    let mut m = ring.identity();
    m[i][j] = beta;
    m
}

fn antidiagonal(ring: &MatrixRing, signs: &[bool]) -> Matrix {
    let n = ring.n;
    let mut j = vec![vec![0; n]; n];
    for i in 0..n {
        j[i][n - 1 - i] = if signs[i] { 1 } else { ring.field.neg(1) };
    }
    j
}

/// All unitriangular matrices (upper or lower) over the field.
fn unitriangular(ring: &MatrixRing, upper: bool) -> Vec<Matrix> {
    let n = ring.n;
    let slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| if upper { i < j } else { i > j })
        .collect();
    let q = ring.field.order() as u64;
    let total = q.pow(slots.len() as u32);
    (1..total)
        .map(|mut t| {
            let mut m = ring.identity();
            for &(i, j) in &slots {
                m[i][j] = (t % q) as u32;
                t /= q;
            }
            m
        })
        .collect()
}

/// Standard generators for `SL_n(q)`, `SU_n(q)` (matrices over GF(q²)) or
/// `Sp_n(q)`, acting on nonzero vectors.
///
/// SL uses adjacent elementary transvections with entries in a prime-field
/// basis. SU and Sp preserve the antidiagonal Hermitian form and the form
/// `antidiag(1, …, 1, −1, …, −1)` respectively; their generators are the
/// unitriangular isometries taken greedily, alternating upper and lower,
/// until the generated order reaches the order formula.
pub fn standard_group(family: Classical, n: usize, q: u32) -> Result<MatrixGroupSpec> {
    standard_group_with(family, n, q, Config::default())
}

pub fn standard_group_with(family: Classical, n: usize, q: u32, config: Config) -> Result<MatrixGroupSpec> {
    prime_power(q as u64).ok_or(Error::InvalidField(q as u64))?;
    let unsupported = || Error::Unsupported(format!("{family}({n}, {q})"));
    let field_size = match family {
        Classical::SL if (2..=4).contains(&n) => q,
        Classical::SU if n == 2 => return standard_group_with(Classical::SL, 2, q, config),
        Classical::Sp if n == 2 => return standard_group_with(Classical::SL, 2, q, config),
        Classical::SU if (3..=4).contains(&n) => q.checked_mul(q).ok_or_else(unsupported)?,
        Classical::Sp if n == 4 => q,
        _ => return Err(unsupported()),
    };
    if field_size > crate::gf::MAX_FIELD {
        return Err(Error::InvalidField(field_size as u64));
    }
    let points = point_count(field_size, n, Action::NonzeroVectors);
    if points.is_none_or(|c| c > config.budget.max_degree) {
        return Err(Error::BudgetExceeded(format!(
            "{family}({n}, {q}) acts on more than {} nonzero vectors",
            config.budget.max_degree
        )));
    }
    let ring = MatrixRing::new(field_size, n)?;
    let target = classical_order(family, n as u32, q as u64);

    let generators = match family {
        Classical::SL => {
            let mut gens = Vec::new();
            for i in 0..n - 1 {
                for &beta in &ring.field.prime_basis() {
                    gens.push(transvection(&ring, i, i + 1, beta));
                    gens.push(transvection(&ring, i + 1, i, beta));
                }
            }
            gens
        }
        Classical::SU | Classical::Sp => {
            let form = match family {
                Classical::SU => antidiagonal(&ring, &vec![true; n]),
                _ => antidiagonal(&ring, &(0..n).map(|i| i < n / 2).collect::<Vec<_>>()),
            };
            let preserves = |m: &Matrix| {
                let other = match family {
                    Classical::SU => ring.transpose(&ring.frobenius(m, q as u64)),
                    _ => ring.transpose(m),
                };
                ring.mul(&ring.mul(m, &form), &other) == form
            };
            let upper: Vec<Matrix> = unitriangular(&ring, true).into_iter().filter(|m| preserves(m)).collect();
            let lower: Vec<Matrix> = unitriangular(&ring, false).into_iter().filter(|m| preserves(m)).collect();
            let mut gens: Vec<Matrix> = Vec::new();
            let mut current = None::<GroupHandle>;
            let candidates = upper
                .iter()
                .zip(lower.iter())
                .flat_map(|(a, b)| [a, b]);
            for cand in candidates {
                let spec = MatrixGroupSpec {
                    field_size,
                    dimension: n,
                    generators: vec![cand.clone()],
                    action: Action::NonzeroVectors,
                };
                let perm = matrix_to_perm(&spec, config)?.generators()[0].clone();
                if current.as_ref().is_some_and(|g| g.chain().contains(&perm)) {
                    continue;
                }
                gens.push(cand.clone());
                let spec = MatrixGroupSpec {
                    generators: gens.clone(),
                    ..spec
                };
                let g = matrix_to_perm(&spec, config)?;
                let done = g.order() == &target;
                current = Some(g);
                if done {
                    break;
                }
            }
            gens
        }
    };
    for g in &generators {
        if ring.det(g) != 1 {
            return Err(Error::Internal(format!("{family} generator has determinant ≠ 1")));
        }
    }
    let spec = MatrixGroupSpec {
        field_size,
        dimension: n,
        generators,
        action: Action::NonzeroVectors,
    };
    Ok(spec)
}

/// Builds the permutation group of a standard classical group and checks
/// its order against the order formula.
pub fn classical_group(family: Classical, n: usize, q: u32, config: Config) -> Result<GroupHandle> {
    let spec = standard_group_with(family, n, q, config)?;
    let g = matrix_to_perm(&spec, config)?;
    let (fam, n_eff) = match (family, n) {
        (Classical::SU | Classical::Sp, 2) => (Classical::SL, 2),
        _ => (family, n),
    };
    let expect = classical_order(fam, n_eff as u32, q as u64);
    if g.order() != &expect {
        return Err(Error::Internal(format!(
            "{family}({n}, {q}) generated order {} instead of {expect}",
            g.order()
        )));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn closure_size(gens: &[Perm]) -> usize {
        let n = gens[0].degree();
        let mut seen = HashSet::new();
        let id = Perm::identity(n);
        seen.insert(id.clone());
        let mut stack = vec![id];
        while let Some(g) = stack.pop() {
            for s in gens {
                let h = g.compose(s);
                if seen.insert(h.clone()) {
                    stack.push(h);
                }
            }
        }
        seen.len()
    }

    #[test]
    fn sl2_5_on_nonzero_vectors() {
        let spec = standard_group(Classical::SL, 2, 5).unwrap();
        assert_eq!(spec.generators.len(), 2);
        let g = matrix_to_perm(&spec, Config::default()).unwrap();
        assert_eq!(g.degree(), 24);
        assert_eq!(g.order_u64(), Some(120));
        assert_eq!(closure_size(g.generators()), 120);
    }

    #[test]
    fn projective_action_has_scalar_kernel() {
        let mut spec = standard_group(Classical::SL, 2, 5).unwrap();
        spec.action = Action::ProjectivePoints;
        let g = matrix_to_perm(&spec, Config::default()).unwrap();
        assert_eq!(g.degree(), 6);
        assert_eq!(g.order_u64(), Some(60));
    }

    #[test]
    fn identity_spec_gives_trivial_group() {
        let spec = MatrixGroupSpec {
            field_size: 3,
            dimension: 2,
            generators: vec![vec![vec![1, 0], vec![0, 1]]],
            action: Action::NonzeroVectors,
        };
        assert_eq!(matrix_to_perm(&spec, Config::default()).unwrap().order_u64(), Some(1));
    }

    #[test]
    fn singular_generators_are_rejected() {
        let spec = MatrixGroupSpec {
            field_size: 3,
            dimension: 2,
            generators: vec![vec![vec![1, 0], vec![0, 1]], vec![vec![1, 1], vec![1, 1]]],
            action: Action::NonzeroVectors,
        };
        assert!(matches!(
            matrix_to_perm(&spec, Config::default()),
            Err(Error::SingularMatrix(1))
        ));
    }

    #[test]
    fn order_formulas() {
        assert_eq!(classical_order(Classical::SL, 3, 3), BigUint::from(5616u32));
        assert_eq!(classical_order(Classical::SU, 3, 3), BigUint::from(6048u32));
        assert_eq!(classical_order(Classical::Sp, 4, 3), BigUint::from(51840u32));
        assert_eq!(classical_order(Classical::SL, 4, 3), BigUint::from(12_130_560u32));
        assert_eq!(classical_order(Classical::SU, 4, 2), BigUint::from(25920u32));
    }

    #[test]
    fn small_classical_groups_reach_their_orders() {
        let c = Config::default();
        assert_eq!(classical_group(Classical::SL, 3, 3, c).unwrap().order_u64(), Some(5616));
        assert_eq!(classical_group(Classical::SL, 2, 9, c).unwrap().order_u64(), Some(720));
        assert_eq!(classical_group(Classical::Sp, 4, 3, c).unwrap().order_u64(), Some(51840));
        let su = classical_group(Classical::SU, 3, 3, c).unwrap();
        assert_eq!((su.degree(), su.order_u64()), (728, Some(6048)));
    }

    #[test]
    fn unsupported_parameters() {
        assert!(standard_group(Classical::SL, 5, 2).is_err());
        assert!(standard_group(Classical::Sp, 6, 2).is_err());
        assert!(standard_group(Classical::SL, 2, 6).is_err());
        assert!(standard_group(Classical::SU, 3, 7).is_err());
    }
}
