//! Ordinary character tables and class functions.
//!
//! Rows are sorted by degree and then by the value tuple, so a table is a
//! deterministic function of the group's class list.

mod dixon;

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::arith::ell_part_u64;
use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::group::{ClassData, ConjugacyClass, GroupHandle};
use crate::perm::Perm;

struct TableData {
    group: GroupHandle,
    classes: Arc<ClassData>,
    exponent: u64,
    degrees: Vec<u64>,
    values: Vec<Vec<Cyclo>>,
    prime: u64,
    root: u64,
    modular: Vec<Vec<u64>>,
}

/// The character table of a permutation group; cheap to clone.
#[derive(Clone)]
pub struct CharacterTable(Arc<TableData>);

impl std::fmt::Debug for CharacterTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CharacterTable")
            .field("order", self.0.group.order())
            .field("degrees", &self.0.degrees)
            .finish()
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TableJson<'a> {
    order: String,
    exponent: u64,
    classes: &'a [ConjugacyClass],
    degrees: &'a [u64],
    values: &'a [Vec<Cyclo>],
}

impl CharacterTable {
    /// Computes the table by the Dixon–Schneider method.
    pub fn compute(group: &GroupHandle) -> Result<Self> {
        let classes = group.conjugacy_classes()?;
        let c = dixon::compute(group, &classes)?;
        let table = CharacterTable(Arc::new(TableData {
            group: group.clone(),
            exponent: classes.exponent(),
            classes,
            degrees: c.degrees,
            values: c.values,
            prime: c.prime,
            root: c.root,
            modular: c.modular,
        }));
        if !table.check_row_orthogonality() || !table.second_orthogonality_check() {
            return Err(Error::CharacterTable("orthogonality relations fail".into()));
        }
        Ok(table)
    }

    pub fn group(&self) -> &GroupHandle {
        &self.0.group
    }

    pub fn class_data(&self) -> &ClassData {
        &self.0.classes
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        self.0.classes.classes()
    }

    pub fn len(&self) -> usize {
        self.0.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.degrees.is_empty()
    }

    pub fn exponent(&self) -> u64 {
        self.0.exponent
    }

    pub fn degrees(&self) -> &[u64] {
        &self.0.degrees
    }

    pub fn values(&self) -> &[Vec<Cyclo>] {
        &self.0.values
    }

    pub fn row(&self, i: usize) -> &[Cyclo] {
        &self.0.values[i]
    }

    pub fn value(&self, row: usize, class: usize) -> &Cyclo {
        &self.0.values[row][class]
    }

    /// Class index of a group element.
    pub fn class_of(&self, x: &Perm) -> Result<usize> {
        self.0.classes.class_of(&self.0.group, x)
    }

    pub fn evaluate(&self, row: usize, x: &Perm) -> Result<Cyclo> {
        Ok(self.value(row, self.class_of(x)?).clone())
    }

    /// Rows not vanishing at `x`.
    pub fn nonvanishing_rows(&self, x: &Perm) -> Result<Vec<usize>> {
        let c = self.class_of(x)?;
        Ok((0..self.len()).filter(|&i| !self.value(i, c).is_zero()).collect())
    }

    pub fn degree_ell_part(&self, row: usize, ell: u64) -> u64 {
        ell_part_u64(self.0.degrees[row], ell)
    }

    /// `Σ_C |C| χ(C) conj ψ(C) = |G| δ(χ, ψ)` for all pairs of rows.
    pub fn check_row_orthogonality(&self) -> bool {
        let order = BigInt::from(self.0.group.order().clone());
        let sizes: Vec<BigRational> = self
            .classes()
            .iter()
            .map(|c| BigRational::from_integer(c.size.into()))
            .collect();
        let conj: Vec<Vec<Cyclo>> = self.values().iter().map(|r| r.iter().map(Cyclo::conj).collect()).collect();
        (0..self.len()).all(|a| {
            (a..self.len()).all(|b| {
                let s = Cyclo::sum_of_products(
                    sizes.iter().zip(&self.0.values[a]).zip(&conj[b]).map(|((w, x), y)| (w.clone(), x, y)),
                );
                let expect = if a == b { order.clone() } else { BigInt::from(0) };
                s.to_integer() == Some(expect)
            })
        })
    }

    /// `Σ_χ χ(C) conj χ(C′) = |C_G(x_C)| δ(C, C′)` for all pairs of classes.
    pub fn second_orthogonality_check(&self) -> bool {
        let n = self.len();
        let one = BigRational::from_integer(1.into());
        (0..n).all(|c| {
            let col: Vec<&Cyclo> = self.values().iter().map(|r| &r[c]).collect();
            (c..n).all(|d| {
                let conj: Vec<Cyclo> = self.values().iter().map(|r| r[d].conj()).collect();
                let s = Cyclo::sum_of_products(col.iter().zip(&conj).map(|(x, y)| (one.clone(), *x, y)));
                let expect = if c == d { self.classes()[c].centralizer_order as i64 } else { 0 };
                s == expect
            })
        })
    }

    /// The prime `r` and the primitive `e`-th root of unity in `F_r` used
    /// for the modular eigenvector computation.
    pub fn modular_data(&self) -> (u64, u64) {
        (self.0.prime, self.0.root)
    }

    /// The table over `F_r` before lifting, rows in the same order.
    pub fn modular_values(&self) -> &[Vec<u64>] {
        &self.0.modular
    }

    /// Every lifted value reduces to the modular value under
    /// `ζ_e ↦ root`.
    pub fn lifting_consistent(&self) -> bool {
        let (r, root) = self.modular_data();
        let e = self.0.exponent;
        self.values().iter().zip(self.modular_values()).all(|(row, mrow)| {
            row.iter().zip(mrow).all(|(v, &m)| {
                let n = v.conductor() as u64;
                e.is_multiple_of(n) && v.reduce_mod(r, crate::arith::pow_mod(root, e / n, r)) == Some(m)
            })
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(TableJson {
            order: self.0.group.order().to_string(),
            exponent: self.0.exponent,
            classes: self.classes(),
            degrees: &self.0.degrees,
            values: &self.0.values,
        })
        .expect("table serializes")
    }

    /// CSV with one line per character: index, degree, and the values on
    /// the selected classes (all classes when `columns` is `None`).
    pub fn to_csv(&self, columns: Option<&[usize]>) -> String {
        let all: Vec<usize> = (0..self.classes().len()).collect();
        let cols = columns.unwrap_or(&all);
        let mut out = String::from("row,degree");
        for &c in cols {
            let cl = &self.classes()[c];
            let _ = write!(out, ",c{c}_o{}_s{}", cl.order, cl.size);
        }
        out.push('\n');
        for (i, row) in self.values().iter().enumerate() {
            let _ = write!(out, "{i},{}", self.0.degrees[i]);
            for &c in cols {
                let _ = write!(out, ",{}", row[c]);
            }
            out.push('\n');
        }
        out
    }
}

/// A class function on the group of `table`.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    table: CharacterTable,
    values: Vec<Cyclo>,
}

impl ClassFunction {
    pub fn new(table: &CharacterTable, values: Vec<Cyclo>) -> Result<Self> {
        if values.len() != table.classes().len() {
            return Err(Error::Malformed(format!(
                "class function has {} values for {} classes",
                values.len(),
                table.classes().len()
            )));
        }
        Ok(ClassFunction {
            table: table.clone(),
            values,
        })
    }

    pub fn character(table: &CharacterTable, row: usize) -> Self {
        ClassFunction {
            table: table.clone(),
            values: table.row(row).to_vec(),
        }
    }

    pub fn table(&self) -> &CharacterTable {
        &self.table
    }

    pub fn values(&self) -> &[Cyclo] {
        &self.values
    }

    pub fn at(&self, x: &Perm) -> Result<Cyclo> {
        Ok(self.values[self.table.class_of(x)?].clone())
    }

    /// `⟨f, g⟩ = |G|⁻¹ Σ_C |C| f(C) conj g(C)`.
    pub fn inner_product(&self, other: &ClassFunction) -> Result<Cyclo> {
        if !self.table.group().same_as(other.table.group()) {
            return Err(Error::Malformed("class functions live on different groups".into()));
        }
        let order = BigInt::from(self.table.group().order().clone());
        let conj: Vec<Cyclo> = other.values.iter().map(Cyclo::conj).collect();
        Ok(Cyclo::sum_of_products(
            self.table
                .classes()
                .iter()
                .zip(&self.values)
                .zip(&conj)
                .map(|((c, x), y)| (BigRational::new(c.size.into(), order.clone()), x, y)),
        ))
    }

    /// Restriction to the group of `sub`, which must be a subgroup.
    pub fn restrict(&self, sub: &CharacterTable) -> Result<ClassFunction> {
        if !sub.group().is_subgroup_of(self.table.group()) {
            return Err(Error::NotSubgroup);
        }
        let values = sub
            .classes()
            .iter()
            .map(|c| self.at(&c.representative))
            .collect::<Result<_>>()?;
        ClassFunction::new(sub, values)
    }

    /// Induction to the group of `over`, which must contain this group.
    pub fn induce(&self, over: &CharacterTable) -> Result<ClassFunction> {
        let l = self.table.group();
        let n = over.group();
        if !l.is_subgroup_of(n) {
            return Err(Error::NotSubgroup);
        }
        let reps = left_coset_reps(n, l)?;
        let values = over
            .classes()
            .iter()
            .map(|c| induce_with(self, &reps, &c.representative))
            .collect::<Result<_>>()?;
        ClassFunction::new(over, values)
    }
}

/// Representatives `t` of the left cosets `tL` of `L` in `N`.
pub fn left_coset_reps(n: &GroupHandle, l: &GroupHandle) -> Result<Vec<Perm>> {
    if !l.is_subgroup_of(n) {
        return Err(Error::NotSubgroup);
    }
    let index = n.order() / l.order();
    let index: usize = index
        .try_into()
        .map_err(|_| Error::BudgetExceeded("subgroup index too large".into()))?;
    let mut reps: Vec<Perm> = vec![n.identity()];
    let consider = |g: &Perm, reps: &mut Vec<Perm>| {
        if reps.len() < index && !reps.iter().any(|t| l.chain().contains(&t.inverse().compose(g))) {
            reps.push(g.clone());
        }
    };
    if n.order_u64().is_some_and(|o| o <= n.budget().exhaustive_threshold) {
        n.for_each_element(|g| consider(g, &mut reps));
    } else {
        let mut rng = n.config().rng(0xC05E7);
        for _ in 0..index.saturating_mul(64).max(4096) {
            if reps.len() == index {
                break;
            }
            let g = n.random_element(&mut rng);
            consider(&g, &mut reps);
        }
    }
    if reps.len() != index {
        return Err(Error::BudgetExceeded(format!(
            "found {} of {index} coset representatives",
            reps.len()
        )));
    }
    Ok(reps)
}

fn induce_with(theta: &ClassFunction, reps: &[Perm], x: &Perm) -> Result<Cyclo> {
    let l = theta.table.group();
    let mut acc = Cyclo::zero();
    for t in reps {
        let y = x.conjugate_by(t);
        if l.chain().contains(&y) {
            acc = acc + theta.at(&y)?;
        }
    }
    Ok(acc)
}

/// `Ind_L^N(θ)(x) = |L|⁻¹ Σ_{g ∈ N, x^g ∈ L} θ(x^g)`, summed over left coset
/// representatives of `L` in `N`.
pub fn induce_value(l: &GroupHandle, theta: &ClassFunction, n: &GroupHandle, x: &Perm) -> Result<Cyclo> {
    if !theta.table.group().same_as(l) {
        return Err(Error::Malformed("class function is not defined on L".into()));
    }
    n.require_member(x)?;
    let reps = left_coset_reps(n, l)?;
    induce_with(theta, &reps, x)
}
