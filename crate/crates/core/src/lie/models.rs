//! Analytic character models: the values of `SL2(q)` and its Sylow
//! 2-normalizer at 2-elements, and Clifford-theoretic character tables of
//! the metacyclic and wreath local subgroups.

use serde::Serialize;

use crate::arith::{inv_mod, prime_power};
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::group::GroupHandle;
use crate::perm::Perm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowKind {
    /// Odd degree in `G`, or linear in the local subgroup; value `±1`.
    Sign,
    /// Member `k` of the family with value `±(ζ^k + ζ^{-k})`.
    Family,
}

/// A predicted character at `x`; `value` is fixed up to sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelRow {
    pub degree: u64,
    pub kind: RowKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    pub value: Cyclo,
    pub vanishing: bool,
}

impl ModelRow {
    fn sign(degree: u64) -> Self {
        ModelRow { degree, kind: RowKind::Sign, k: None, value: Cyclo::one(), vanishing: false }
    }

    fn family(degree: u64, k: u64, zeta_order: u32) -> Self {
        let value = Cyclo::zeta(zeta_order, k as i64) + Cyclo::zeta(zeta_order, -(k as i64));
        ModelRow { degree, kind: RowKind::Family, k: Some(k), vanishing: value.is_zero(), value }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Sl2Model {
    pub q: u64,
    pub epsilon: i8,
    pub x_order: u64,
    /// Order of the Sylow 2-normalizer; its isomorphism type is not modelled.
    pub local_order: u64,
    pub global: Vec<ModelRow>,
    pub local: Vec<ModelRow>,
}

impl Sl2Model {
    pub fn nonvanishing_global(&self) -> impl Iterator<Item = &ModelRow> {
        self.global.iter().filter(|r| !r.vanishing)
    }

    pub fn nonvanishing_local(&self) -> impl Iterator<Item = &ModelRow> {
        self.local.iter().filter(|r| !r.vanishing)
    }
}

/// Characters of `SL2(q)` and of its Sylow 2-normalizer at a 2-element of
/// order `x_order ≥ 4`, for `q = 2^n + ε` with `n ≥ 3`.
pub fn sl2_value_model(q: u64, x_order: u64) -> Result<Sl2Model> {
    let shape = || Error::Unsupported(format!("q = {q} is not of the form 2^n ± 1 with n ≥ 3"));
    match prime_power(q) {
        Some((p, _)) if p != 2 => {}
        _ => return Err(shape()),
    }
    let epsilon: i8 = if (q - 1).is_power_of_two() {
        1
    } else if (q + 1).is_power_of_two() {
        -1
    } else {
        return Err(shape());
    };
    let torus = if epsilon > 0 { q - 1 } else { q + 1 };
    if torus < 8 {
        return Err(shape());
    }
    if !x_order.is_power_of_two() || x_order < 4 || torus % x_order != 0 {
        return Err(Error::Malformed(format!(
            "x must be a 2-element of order between 4 and {torus}, got {x_order}"
        )));
    }
    let half = if epsilon > 0 { q.div_ceil(2) } else { (q - 1) / 2 };
    let family_degree = if epsilon > 0 { q + 1 } else { q - 1 };
    let members = torus / 2 - 1;
    let mut global: Vec<ModelRow> = [1, q, half, half].into_iter().map(ModelRow::sign).collect();
    let mut local: Vec<ModelRow> = (0..4).map(|_| ModelRow::sign(1)).collect();
    for k in 1..=members {
        global.push(ModelRow::family(family_degree, k, x_order as u32));
        local.push(ModelRow::family(2, k, x_order as u32));
    }
    Ok(Sl2Model { q, epsilon, x_order, local_order: 2 * torus, global, local })
}

/// The `q = 5` case: at an element of order 4 the nonvanishing characters
/// have degrees 1, 3, 3, 5 in `SL2(5)` and 1, 1, 1, 3 in `SL2(3)`, the
/// Sylow 2-normalizer, all with values `±1`.
pub fn sl2_5_fixture() -> Sl2Model {
    Sl2Model {
        q: 5,
        epsilon: 1,
        x_order: 4,
        local_order: 24,
        global: [1, 3, 3, 5].into_iter().map(ModelRow::sign).collect(),
        local: [1, 1, 1, 3].into_iter().map(ModelRow::sign).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum LocalKind {
    /// `C_m ⋊ C_2` with the involution acting by `a ↦ a^s`.
    Metacyclic,
    /// `D ≀ C_2` with `D = C_m ⋊ C_2` dihedral.
    Wreath,
}

/// Element of a local model in normal form. Dihedral factors are pairs
/// `(j, e)` standing for `a^j b^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelElement {
    Metacyclic { j: u64, e: bool },
    /// `(d1, d2)` in the base group.
    WreathBase { first: (u64, bool), second: (u64, bool) },
    /// `(d1, d2)τ`, recorded through `d1 d2`, the restriction of its square
    /// to the first factor.
    WreathSwap { square: (u64, bool) },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum DihedralChar {
    Linear { a: bool, b: bool },
    Two { k: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CharData {
    Extension { k: u64, negative: bool },
    Induced { k: u64 },
    WreathInduced { i: usize, j: usize },
    WreathExtension { i: usize, negative: bool },
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelCharacter {
    pub degree: u64,
    pub label: String,
    #[serde(skip)]
    data: CharData,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LocalModel {
    pub kind: LocalKind,
    pub m: u64,
    pub s: u64,
    pub order: u64,
    pub characters: Vec<ModelCharacter>,
    #[serde(skip)]
    base: Vec<DihedralChar>,
}

fn zeta_pow(m: u64, e: u64) -> Cyclo {
    Cyclo::zeta(m as u32, (e % m) as i64)
}

fn sign(negative: bool) -> i64 {
    if negative { -1 } else { 1 }
}

impl LocalModel {
    /// `C_m ⋊ C_2` with `b⁻¹ a b = a^s`, `s² ≡ 1 (mod m)`.
    pub fn metacyclic(m: u64, s: u64) -> Result<Self> {
        let s = s % m.max(1);
        if m < 2 || s * s % m != 1 % m {
            return Err(Error::Malformed(format!("a ↦ a^{s} is not an involutory automorphism of C_{m}")));
        }
        let mut characters = Vec::new();
        let mut seen = vec![false; m as usize];
        for k in 0..m {
            if seen[k as usize] {
                continue;
            }
            let sk = s * k % m;
            seen[k as usize] = true;
            seen[sk as usize] = true;
            if sk == k {
                for negative in [false, true] {
                    let label = format!("ext({k},{})", if negative { "-" } else { "+" });
                    characters.push(ModelCharacter { degree: 1, label, data: CharData::Extension { k, negative } });
                }
            } else {
                let label = format!("ind({k},{sk})");
                characters.push(ModelCharacter { degree: 2, label, data: CharData::Induced { k } });
            }
        }
        LocalModel { kind: LocalKind::Metacyclic, m, s, order: 2 * m, characters, base: Vec::new() }.checked()
    }

    /// `(C_m ⋊ C_2) ≀ C_2` with inversion action, for even `m ≥ 4`.
    pub fn wreath(m: u64) -> Result<Self> {
        if m < 4 || !m.is_multiple_of(2) {
            return Err(Error::Malformed(format!("wreath model needs even m ≥ 4, got {m}")));
        }
        let mut base = Vec::new();
        for a in [false, true] {
            for b in [false, true] {
                base.push(DihedralChar::Linear { a, b });
            }
        }
        base.extend((1..m / 2).map(|k| DihedralChar::Two { k }));
        let deg = |c: &DihedralChar| match c {
            DihedralChar::Linear { .. } => 1,
            DihedralChar::Two { .. } => 2,
        };
        let mut characters = Vec::new();
        for i in 0..base.len() {
            for negative in [false, true] {
                characters.push(ModelCharacter {
                    degree: deg(&base[i]) * deg(&base[i]),
                    label: format!("ext({i},{})", if negative { "-" } else { "+" }),
                    data: CharData::WreathExtension { i, negative },
                });
            }
            for j in i + 1..base.len() {
                characters.push(ModelCharacter {
                    degree: 2 * deg(&base[i]) * deg(&base[j]),
                    label: format!("ind({i},{j})"),
                    data: CharData::WreathInduced { i, j },
                });
            }
        }
        let order = 8 * m * m;
        LocalModel { kind: LocalKind::Wreath, m, s: m - 1, order, characters, base }.checked()
    }

    fn checked(self) -> Result<Self> {
        let total: u64 = self.characters.iter().map(|c| c.degree * c.degree).sum();
        if total != self.order {
            return Err(Error::Internal(format!(
                "Σ χ(1)² = {total} differs from the group order {}",
                self.order
            )));
        }
        Ok(self)
    }

    pub fn degrees(&self) -> Vec<u64> {
        let mut d: Vec<u64> = self.characters.iter().map(|c| c.degree).collect();
        d.sort_unstable();
        d
    }

    fn dihedral_value(&self, c: DihedralChar, (j, e): (u64, bool)) -> Cyclo {
        match c {
            DihedralChar::Linear { a, b } => {
                Cyclo::from_int(sign(a && j % 2 == 1) * sign(b && e))
            }
            DihedralChar::Two { k } if !e => zeta_pow(self.m, k * j) + zeta_pow(self.m, self.m - k * j % self.m),
            DihedralChar::Two { .. } => Cyclo::zero(),
        }
    }

    /// Value of character `c` at `g`.
    pub fn value(&self, c: usize, g: ModelElement) -> Result<Cyclo> {
        let m = self.m;
        let bad = || Error::Malformed("element does not belong to this model".into());
        let data = self.characters.get(c).ok_or_else(bad)?.data;
        Ok(match (data, g) {
            (CharData::Extension { k, negative }, ModelElement::Metacyclic { j, e }) => {
                zeta_pow(m, k * j).scale_int(sign(negative && e))
            }
            (CharData::Induced { k }, ModelElement::Metacyclic { j, e }) => {
                if e {
                    Cyclo::zero()
                } else {
                    zeta_pow(m, k * j) + zeta_pow(m, self.s * k % m * j)
                }
            }
            (CharData::WreathExtension { i, .. }, ModelElement::WreathBase { first, second }) => {
                self.dihedral_value(self.base[i], first) * self.dihedral_value(self.base[i], second)
            }
            (CharData::WreathInduced { i, j }, ModelElement::WreathBase { first, second }) => {
                let (p, r) = (self.base[i], self.base[j]);
                self.dihedral_value(p, first) * self.dihedral_value(r, second)
                    + self.dihedral_value(r, first) * self.dihedral_value(p, second)
            }
            (CharData::WreathExtension { i, negative }, ModelElement::WreathSwap { square }) => {
                self.dihedral_value(self.base[i], square).scale_int(sign(negative))
            }
            (CharData::WreathInduced { .. }, ModelElement::WreathSwap { .. }) => Cyclo::zero(),
            _ => return Err(bad()),
        })
    }

    fn degree(&self) -> usize {
        match self.kind {
            LocalKind::Metacyclic => self.m as usize + 2,
            LocalKind::Wreath => 2 * self.m as usize,
        }
    }

    /// A faithful permutation representation whose elements
    /// [`decode`](Self::decode) recognizes.
    pub fn realization(&self) -> Result<GroupHandle> {
        let m = self.m as u32;
        let n = self.degree();
        let gens = match self.kind {
            LocalKind::Metacyclic => {
                let s = self.s as u32;
                let mut a: Vec<u32> = (0..m).map(|i| (i + 1) % m).collect();
                a.extend([m, m + 1]);
                let mut b: Vec<u32> = (0..m).map(|i| ((i as u64 * s as u64) % m as u64) as u32).collect();
                b.extend([m + 1, m]);
                vec![Perm::from_images(a)?, Perm::from_images(b)?]
            }
            LocalKind::Wreath => {
                let on_first = |f: &dyn Fn(u32) -> u32| -> Result<Perm> {
                    Perm::from_images((0..m).map(f).chain(m..2 * m).collect())
                };
                let a = on_first(&|i| (i + 1) % m)?;
                let b = on_first(&|i| (m - i) % m)?;
                let swap = Perm::from_images((m..2 * m).chain(0..m).collect())?;
                vec![a, b, swap]
            }
        };
        debug_assert!(gens.iter().all(|g| g.degree() == n));
        GroupHandle::build(gens)
    }

    fn decode_dihedral(&self, f: impl Fn(u32) -> u32) -> Result<(u64, bool)> {
        let m = self.m;
        let (u, v) = (f(0) as u64, f(1) as u64);
        if (u + 1) % m == v {
            Ok((u, false))
        } else if (v + 1) % m == u {
            Ok(((m - u) % m, true))
        } else {
            Err(Error::NotMember)
        }
    }

    /// Normal form of an element of [`realization`](Self::realization).
    pub fn decode(&self, g: &Perm) -> Result<ModelElement> {
        if g.degree() != self.degree() {
            return Err(Error::DegreeMismatch { expected: self.degree(), found: g.degree() });
        }
        let m = self.m as u32;
        match self.kind {
            LocalKind::Metacyclic => {
                let e = g.image(m) == m + 1;
                let img = g.image(0) as u64;
                let j = if e { img * self.s % self.m } else { img };
                Ok(ModelElement::Metacyclic { j, e })
            }
            LocalKind::Wreath => {
                if g.image(0) < m {
                    Ok(ModelElement::WreathBase {
                        first: self.decode_dihedral(|i| g.image(i))?,
                        second: self.decode_dihedral(|i| g.image(i + m) - m)?,
                    })
                } else {
                    let sq = g.compose(g);
                    Ok(ModelElement::WreathSwap { square: self.decode_dihedral(|i| sq.image(i))? })
                }
            }
        }
    }

    /// Rows `(degree, values at reps)` sorted by degree, then values.
    pub fn table_at(&self, reps: &[Perm]) -> Result<Vec<(u64, Vec<Cyclo>)>> {
        let elements: Vec<ModelElement> = reps.iter().map(|g| self.decode(g)).collect::<Result<_>>()?;
        let mut rows = (0..self.characters.len())
            .map(|c| {
                let vals = elements.iter().map(|&g| self.value(c, g)).collect::<Result<Vec<_>>>()?;
                Ok((self.characters[c].degree, vals))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.sort();
        Ok(rows)
    }
}

fn odd_prime_power(q: u64) -> Result<()> {
    match prime_power(q) {
        Some((p, _)) if p != 2 => Ok(()),
        _ => Err(Error::Malformed(format!("q = {q} must be an odd prime power"))),
    }
}

/// Sylow 2-normalizer shape in `SL3(q)`, `q ≡ −ε (mod 4)`: `C_{q²−1}.2`
/// with `a ↦ a^{εq}`.
pub fn sl3_local_model(q: u64, epsilon: i8) -> Result<LocalModel> {
    odd_prime_power(q)?;
    let want = if epsilon > 0 { 3 } else { 1 };
    if q % 4 != want {
        return Err(Error::Malformed(format!("SL3 local model needs q ≡ −ε (mod 4), got q = {q}, ε = {epsilon}")));
    }
    let m = q * q - 1;
    let s = if epsilon > 0 { q } else { m - q };
    debug_assert_eq!(inv_mod(s as i64, m as i64), Some(s as i64));
    LocalModel::metacyclic(m, s)
}

/// Sylow 2-subgroup of `Sp4(q)`, self-normalizing, for `q − ε` a power of
/// two at least 16: `(C_{q−ε}.2) ≀ C_2`.
pub fn sp4_local_model(q: u64, epsilon: i8) -> Result<LocalModel> {
    odd_prime_power(q)?;
    let m = if epsilon > 0 { q - 1 } else { q + 1 };
    if !m.is_power_of_two() || m < 16 {
        return Err(Error::Malformed(format!("Sp4 local model needs q − ε a power of two ≥ 16, got {m}")));
    }
    LocalModel::wreath(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::CharacterTable;

    fn engine_rows(g: &GroupHandle) -> (CharacterTable, Vec<(u64, Vec<Cyclo>)>) {
        let t = CharacterTable::compute(g).unwrap();
        let rows = (0..t.len()).map(|i| (t.degrees()[i], t.row(i).to_vec())).collect();
        (t, rows)
    }

    fn agrees_with_engine(model: &LocalModel) {
        let g = model.realization().unwrap();
        assert_eq!(g.order_u64(), Some(model.order));
        let (t, mut engine) = engine_rows(&g);
        engine.sort();
        let reps: Vec<Perm> = t.classes().iter().map(|c| c.representative.clone()).collect();
        assert_eq!(model.table_at(&reps).unwrap(), engine);
    }

    #[test]
    fn sl2_shapes() {
        let m = sl2_value_model(7, 8).unwrap();
        assert_eq!(m.epsilon, -1);
        let fam: Vec<&ModelRow> = m.global.iter().filter(|r| r.kind == RowKind::Family).collect();
        assert_eq!(fam.len(), 3);
        assert!(fam.iter().all(|r| r.degree == 6));
        assert_eq!(fam.iter().filter(|r| r.vanishing).map(|r| r.k).collect::<Vec<_>>(), vec![Some(2)]);

        let m = sl2_value_model(9, 8).unwrap();
        let fam: Vec<&ModelRow> = m.global.iter().filter(|r| r.kind == RowKind::Family).collect();
        assert_eq!(fam.len(), 3);
        assert!(fam.iter().all(|r| r.degree == 10));

        let m = sl2_value_model(17, 16).unwrap();
        assert_eq!(m.global.iter().filter(|r| r.kind == RowKind::Sign).count(), 4);
        assert!(m.global.iter().filter(|r| r.kind == RowKind::Sign).all(|r| r.degree % 2 == 1));
        assert_eq!(m.local_order, 32);

        assert!(sl2_value_model(5, 4).is_err());
        assert!(sl2_value_model(11, 4).is_err());
        assert!(sl2_value_model(17, 32).is_err());
        assert!(sl2_value_model(17, 2).is_err());
    }

    #[test]
    fn sl2_column_norm() {
        // Σ |χ(x)|² over the model equals |C(x)| = q − ε on both sides.
        for (q, o) in [(7, 8), (7, 4), (9, 8), (17, 16), (17, 4), (31, 32)] {
            let m = sl2_value_model(q, o).unwrap();
            let norm = |rows: &[ModelRow]| -> Cyclo { rows.iter().map(|r| r.value.abs2()).sum() };
            let torus = if m.epsilon > 0 { q - 1 } else { q + 1 };
            assert_eq!(norm(&m.global), torus as i64, "q = {q}");
            assert_eq!(norm(&m.local), torus as i64, "q = {q}");
        }
    }

    #[test]
    fn metacyclic_degrees() {
        let m = sl3_local_model(3, 1).unwrap();
        assert_eq!(m.order, 16);
        assert_eq!(m.degrees().iter().map(|d| d * d).sum::<u64>(), 16);
        let direct = LocalModel::metacyclic(6, 1).unwrap();
        assert!(direct.degrees().iter().all(|&d| d == 1));
        assert_eq!(direct.characters.len(), 12);
        assert!(LocalModel::metacyclic(8, 2).is_err());
        assert!(sl3_local_model(5, 1).is_err());
        assert!(sl3_local_model(5, -1).is_ok());
    }

    #[test]
    fn wreath_order() {
        let m = sp4_local_model(17, 1).unwrap();
        assert_eq!(m.order, 2048);
        assert!(sp4_local_model(7, -1).is_err());
        assert!(sp4_local_model(5, 1).is_err());
    }

    #[test]
    fn metacyclic_matches_engine() {
        for (q, e) in [(3, 1), (5, -1), (7, 1), (9, -1)] {
            agrees_with_engine(&sl3_local_model(q, e).unwrap());
        }
        agrees_with_engine(&LocalModel::metacyclic(5, 1).unwrap());
    }

    #[test]
    fn wreath_matches_engine() {
        agrees_with_engine(&LocalModel::wreath(4).unwrap());
        agrees_with_engine(&LocalModel::wreath(8).unwrap());
    }
}
