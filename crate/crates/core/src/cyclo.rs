//! Exact elements of cyclotomic fields.
//!
//! A value is stored at its minimal conductor `n` as a sparse rational
//! combination of powers of `ζ_n = exp(2πi/n)`, reduced to the
//! Zumbroich basis: writing `n = ∏ q_i` with `q_i = p_i^{k_i}`, the block
//! digit of an exponent `e` for `q_i` is `(e · (n/q_i)^{-1} mod q_i) div p_i^{k_i−1}`;
//! odd primes exclude digit 0 and the prime 2 excludes digit 1. The reduced
//! form is unique, so structural equality is value equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{factorize, inv_mod, valuation};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cyclo {
    n: u32,
    terms: Vec<(u32, BigRational)>,
}

/// Sorts by exponent, sums duplicates, drops zeros.
fn merge(mut terms: Vec<(u32, BigRational)>) -> Vec<(u32, BigRational)> {
    terms.sort_by_key(|t| t.0);
    let mut out: Vec<(u32, BigRational)> = Vec::with_capacity(terms.len());
    for (e, c) in terms {
        match out.last_mut() {
            Some((le, lc)) if *le == e => *lc += c,
            _ => {
                if out.last().is_some_and(|t| t.1.is_zero()) {
                    out.pop();
                }
                out.push((e, c));
            }
        }
    }
    if out.last().is_some_and(|t| t.1.is_zero()) {
        out.pop();
    }
    out
}

fn reduce_to_basis(n: u32, mut terms: Vec<(u32, BigRational)>) -> Vec<(u32, BigRational)> {
    let n64 = n as u64;
    for (p, k) in factorize(n64) {
        let q = p.pow(k);
        let m = n64 / q;
        let minv = inv_mod((m % q) as i64, q as i64).unwrap_or(0) as u64;
        let top = q / p;
        let np = n64 / p;
        let mut out = Vec::with_capacity(terms.len() * 2);
        for (e, c) in terms {
            let digit = ((e as u64 * minv) % q) / top;
            if p == 2 {
                if digit == 1 {
                    out.push((((e as u64 + np) % n64) as u32, -c));
                } else {
                    out.push((e, c));
                }
            } else if digit == 0 {
                for j in 1..p {
                    out.push((((e as u64 + j * np) % n64) as u32, -c.clone()));
                }
            } else {
                out.push((e, c));
            }
        }
        terms = merge(out);
    }
    terms
}

/// Shrinks the conductor while the value lies in a smaller cyclotomic field.
fn minimize(mut n: u32, mut terms: Vec<(u32, BigRational)>) -> (u32, Vec<(u32, BigRational)>) {
    'outer: loop {
        if terms.is_empty() {
            return (1, terms);
        }
        if n == 1 {
            return (n, terms);
        }
        for (p, k) in factorize(n as u64) {
            let p = p as u32;
            if k >= 2 || p == 2 {
                if terms.iter().all(|(e, _)| e % p == 0) {
                    n /= p;
                    for t in &mut terms {
                        t.0 /= p;
                    }
                    continue 'outer;
                }
            } else {
                let np = n / p;
                let mut blocks: BTreeMap<u32, Vec<&BigRational>> = BTreeMap::new();
                for (e, c) in &terms {
                    blocks.entry(e % np).or_default().push(c);
                }
                let uniform = blocks
                    .values()
                    .all(|cs| cs.len() == (p - 1) as usize && cs.iter().all(|c| *c == cs[0]));
                if uniform {
                    let mut out = Vec::with_capacity(blocks.len());
                    for (r, cs) in blocks {
                        let e0 = (0..p).map(|j| r + j * np).find(|e| e % p == 0).unwrap();
                        out.push((e0 / p, -cs[0].clone()));
                    }
                    out.sort_by_key(|t| t.0);
                    n = np;
                    terms = out;
                    continue 'outer;
                }
            }
        }
        return (n, terms);
    }
}

impl Cyclo {
    /// Canonical value of `Σ c · ζ_n^e` for arbitrary integer exponents.
    pub fn from_terms<I>(n: u32, terms: I) -> Cyclo
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        assert!(n > 0, "conductor must be positive");
        let raw: Vec<(u32, BigRational)> = terms
            .into_iter()
            .map(|(e, c)| (e.rem_euclid(n as i64) as u32, c))
            .collect();
        Self::canonical(n, raw)
    }

    fn canonical(n: u32, raw: Vec<(u32, BigRational)>) -> Cyclo {
        let terms = reduce_to_basis(n, merge(raw));
        let (n, terms) = minimize(n, terms);
        Cyclo { n, terms }
    }

    pub fn zero() -> Cyclo {
        Cyclo {
            n: 1,
            terms: Vec::new(),
        }
    }

    pub fn one() -> Cyclo {
        Cyclo::from_int(1)
    }

    pub fn from_int(v: i64) -> Cyclo {
        Cyclo::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(v: BigRational) -> Cyclo {
        if v.is_zero() {
            Cyclo::zero()
        } else {
            Cyclo {
                n: 1,
                terms: vec![(0, v)],
            }
        }
    }

    /// `ζ_n^k`.
    pub fn zeta(n: u32, k: i64) -> Cyclo {
        Cyclo::from_terms(n, [(k, BigRational::one())])
    }

    /// `Σ_i m_i ζ_o^i`.
    pub fn from_multiplicities(o: u32, m: &[i64]) -> Cyclo {
        Cyclo::from_terms(
            o,
            m.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (i as i64, BigRational::from_integer(c.into()))),
        )
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// Canonical terms `(exponent, coefficient)` sorted by exponent.
    pub fn terms(&self) -> &[(u32, BigRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.n == 1 && self.terms.len() == 1 && self.terms[0].1.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.n == 1
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        match (self.n, self.terms.as_slice()) {
            (1, []) => Some(BigRational::zero()),
            (1, [(_, c)]) => Some(c.clone()),
            _ => None,
        }
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    /// True when every coefficient is an integer (an algebraic integer,
    /// since the basis is integral).
    pub fn has_integral_coefficients(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    fn lifted(&self, big: u32) -> impl Iterator<Item = (u64, &BigRational)> + '_ {
        let f = (big / self.n) as u64;
        self.terms.iter().map(move |(e, c)| (*e as u64 * f, c))
    }

    pub fn scale(&self, r: &BigRational) -> Cyclo {
        if r.is_zero() {
            return Cyclo::zero();
        }
        Cyclo {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (*e, c * r)).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Cyclo {
        self.scale(&BigRational::from_integer(k.into()))
    }

    /// `ζ ↦ ζ^k` applied to the value.
    pub fn galois_apply(&self, k: i64) -> Result<Cyclo> {
        if num_integer::gcd(k, self.n as i64) != 1 {
            return Err(Error::NotCoprime {
                k,
                conductor: self.n,
            });
        }
        Ok(self.galois_unchecked(k))
    }

    fn galois_unchecked(&self, k: i64) -> Cyclo {
        if self.n == 1 {
            return self.clone();
        }
        let n = self.n as i64;
        let k = k.rem_euclid(n);
        Cyclo::canonical(
            self.n,
            self.terms
                .iter()
                .map(|(e, c)| (((*e as i64 * k) % n) as u32, c.clone()))
                .collect(),
        )
    }

    pub fn conj(&self) -> Cyclo {
        self.galois_unchecked(-1)
    }

    /// `a · conj(a)`.
    pub fn abs2(&self) -> Cyclo {
        self * &self.conj()
    }

    pub fn field_of_values(&self) -> FieldDescriptor {
        let n = self.n;
        if n == 1 {
            return FieldDescriptor {
                conductor: 1,
                fixing: vec![1],
            };
        }
        let fixing = units(n)
            .into_iter()
            .filter(|&k| &self.galois_unchecked(k as i64) == self)
            .collect();
        FieldDescriptor { conductor: n, fixing }
    }

    /// Distinct Galois conjugates of the value.
    pub fn conjugates(&self) -> Vec<Cyclo> {
        if self.n == 1 {
            return vec![self.clone()];
        }
        let field = self.field_of_values();
        let n = self.n as u64;
        let mut covered = vec![false; self.n as usize];
        let mut out = Vec::new();
        for k in units(self.n) {
            if covered[k as usize] {
                continue;
            }
            for &h in &field.fixing {
                covered[((k as u64 * h as u64) % n) as usize] = true;
            }
            out.push(self.galois_unchecked(k as i64));
        }
        out
    }

    /// Norm from `Q(a)` down to `Q`.
    pub fn norm(&self) -> BigRational {
        let prod = self
            .conjugates()
            .iter()
            .fold(Cyclo::one(), |acc, c| &acc * c);
        prod.to_rational()
            .expect("a norm is rational")
    }

    /// ℓ-adic valuation of the norm and, for rational integers, the ℓ-part.
    pub fn ell_data(&self, ell: u64) -> Result<EllData> {
        if self.is_zero() {
            return Err(Error::ZeroValue);
        }
        let norm = self.norm();
        let v = |x: &BigInt| big_valuation(&x.abs().to_biguint().unwrap(), ell) as i64;
        let norm_valuation = v(norm.numer()) - v(norm.denom());
        let rational_ell_part = self.to_integer().map(|a| {
            let k = big_valuation(&a.abs().to_biguint().unwrap(), ell);
            ell.pow(k)
        });
        Ok(EllData {
            norm_valuation,
            rational_ell_part,
        })
    }

    /// Canonical representative of `{a, −a}`: the one whose first term has
    /// a positive coefficient.
    pub fn sign_class(&self) -> Cyclo {
        match self.terms.first() {
            Some((_, c)) if c.is_negative() => -self,
            _ => self.clone(),
        }
    }

    pub fn up_to_sign_equal(&self, other: &Cyclo) -> bool {
        self == other || *self == -other
    }

    /// Image under the ring map sending `ζ_n` to `root` in `F_r`; `root`
    /// must be a primitive `n`-th root of unity modulo the prime `r`.
    pub fn reduce_mod(&self, r: u64, root: u64) -> Option<u64> {
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let num = c.numer().mod_floor(&BigInt::from(r)).to_u64()?;
            let den = c.denom().mod_floor(&BigInt::from(r)).to_u64()?;
            let dinv = inv_mod(den as i64, r as i64)? as u64;
            let term = crate::arith::mul_mod(
                crate::arith::mul_mod(num, dinv, r),
                crate::arith::pow_mod(root, *e as u64, r),
                r,
            );
            acc = (acc + term) % r;
        }
        Some(acc)
    }

    /// `Σ_j w_j · a_j · b_j` with a single canonicalization at the end.
    pub fn sum_of_products<'a, I>(items: I) -> Cyclo
    where
        I: IntoIterator<Item = (BigRational, &'a Cyclo, &'a Cyclo)>,
    {
        let items: Vec<_> = items.into_iter().filter(|(w, a, b)| !w.is_zero() && !a.is_zero() && !b.is_zero()).collect();
        if items.is_empty() {
            return Cyclo::zero();
        }
        let n = items
            .iter()
            .fold(1u32, |acc, (_, a, b)| acc.lcm(&a.n).lcm(&b.n));
        let n64 = n as u64;
        let mut acc: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (w, a, b) in &items {
            for (ea, ca) in a.lifted(n) {
                let wc = w * ca;
                for (eb, cb) in b.lifted(n) {
                    let e = ((ea + eb) % n64) as u32;
                    *acc.entry(e).or_insert_with(BigRational::zero) += &wc * cb;
                }
            }
        }
        Cyclo::canonical(n, acc.into_iter().collect())
    }

    pub fn pow(&self, k: u32) -> Cyclo {
        (0..k).fold(Cyclo::one(), |acc, _| &acc * self)
    }
}

fn big_valuation(x: &BigUint, ell: u64) -> u32 {
    if x.is_zero() {
        return 0;
    }
    if let Some(small) = x.to_u64() {
        return valuation(small, ell);
    }
    let l = BigUint::from(ell);
    let mut x = x.clone();
    let mut v = 0;
    while (&x % &l).is_zero() {
        x /= &l;
        v += 1;
    }
    v
}

/// Units of `Z/nZ` in increasing order.
pub fn units(n: u32) -> Vec<u32> {
    if n == 1 {
        return vec![1];
    }
    (1..n).filter(|k| k.gcd(&n) == 1).collect()
}

/// A subfield of a cyclotomic field: the conductor `m` and the subgroup of
/// `(Z/mZ)^×` fixing it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub conductor: u32,
    pub fixing: Vec<u32>,
}

impl FieldDescriptor {
    pub fn rationals() -> Self {
        FieldDescriptor {
            conductor: 1,
            fixing: vec![1],
        }
    }

    /// Degree of the field over Q.
    pub fn degree(&self) -> usize {
        units(self.conductor).len() / self.fixing.len()
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conductor == 1 {
            return write!(f, "Q");
        }
        write!(f, "Q(z{})^<", self.conductor)?;
        for (i, h) in self.fixing.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{h}")?;
        }
        write!(f, ">")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EllData {
    pub norm_valuation: i64,
    pub rational_ell_part: Option<u64>,
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -&self
    }
}

impl Add for &Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &Cyclo) -> Cyclo {
        if self.n == 1 && rhs.n == 1 {
            let v = self.to_rational().unwrap() + rhs.to_rational().unwrap();
            return Cyclo::from_rational(v);
        }
        let n = self.n.lcm(&rhs.n);
        let raw = self
            .lifted(n)
            .chain(rhs.lifted(n))
            .map(|(e, c)| (e as u32, c.clone()))
            .collect();
        Cyclo::canonical(n, raw)
    }
}

impl Sub for &Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: &Cyclo) -> Cyclo {
        self + &(-rhs)
    }
}

impl Mul for &Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &Cyclo) -> Cyclo {
        if self.is_zero() || rhs.is_zero() {
            return Cyclo::zero();
        }
        if self.n == 1 {
            return rhs.scale(&self.terms[0].1);
        }
        if rhs.n == 1 {
            return self.scale(&rhs.terms[0].1);
        }
        Cyclo::sum_of_products([(BigRational::one(), self, rhs)])
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: Cyclo) -> Cyclo { (&self).$m(&rhs) }
        }
        impl $tr<&Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $m(self, rhs: &Cyclo) -> Cyclo { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl std::iter::Sum for Cyclo {
    fn sum<I: Iterator<Item = Cyclo>>(iter: I) -> Cyclo {
        iter.fold(Cyclo::zero(), |acc, x| &acc + &x)
    }
}

impl From<i64> for Cyclo {
    fn from(v: i64) -> Self {
        Cyclo::from_int(v)
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if self.n == 1 || *e == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "z{}^{}", self.n, e)?;
            } else {
                write!(f, "{a}*z{}^{}", self.n, e)?;
            }
        }
        Ok(())
    }
}

impl PartialOrd<i64> for Cyclo {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.to_rational()
            .map(|r| r.cmp(&BigRational::from_integer((*other).into())))
    }
}

impl PartialEq<i64> for Cyclo {
    fn eq(&self, other: &i64) -> bool {
        *self == Cyclo::from_int(*other)
    }
}

/// Integer that serializes as a JSON number when it fits in `i64` and as a
/// decimal string otherwise.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Num {
    Small(i64),
    Big(String),
}

impl Num {
    fn of(x: &BigInt) -> Num {
        match x.to_i64() {
            Some(v) => Num::Small(v),
            None => Num::Big(x.to_string()),
        }
    }

    fn value(&self) -> std::result::Result<BigInt, String> {
        match self {
            Num::Small(v) => Ok(BigInt::from(*v)),
            Num::Big(s) => s.parse().map_err(|_| format!("bad integer {s:?}")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    n: u32,
    c: Vec<(u32, Num, Num)>,
}

impl Serialize for Cyclo {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            n: self.n,
            c: self
                .terms
                .iter()
                .map(|(e, c)| (*e, Num::of(c.numer()), Num::of(c.denom())))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclo {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        if w.n == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        let mut terms = Vec::with_capacity(w.c.len());
        for (e, num, den) in w.c {
            let den = den.value().map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            let num = num.value().map_err(D::Error::custom)?;
            terms.push((e as i64, BigRational::new(num, den)));
        }
        Ok(Cyclo::from_terms(w.n, terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Floating-point evaluation, used only as an independent oracle.
    fn approx(a: &Cyclo) -> (f64, f64) {
        a.terms().iter().fold((0.0, 0.0), |(re, im), (e, c)| {
            let t = 2.0 * std::f64::consts::PI * *e as f64 / a.conductor() as f64;
            let c = c.to_f64().unwrap();
            (re + c * t.cos(), im + c * t.sin())
        })
    }

    fn raw_approx(n: u32, terms: &[(i64, i64)]) -> (f64, f64) {
        terms.iter().fold((0.0, 0.0), |(re, im), &(e, c)| {
            let t = 2.0 * std::f64::consts::PI * e as f64 / n as f64;
            (re + c as f64 * t.cos(), im + c as f64 * t.sin())
        })
    }

    fn close(a: (f64, f64), b: (f64, f64)) -> bool {
        (a.0 - b.0).abs() < 1e-6 && (a.1 - b.1).abs() < 1e-6
    }

    fn build(n: u32, terms: &[(i64, i64)]) -> Cyclo {
        Cyclo::from_terms(n, terms.iter().map(|&(e, c)| (e, BigRational::from_integer(c.into()))))
    }

    fn r2() -> Cyclo {
        &Cyclo::zeta(8, 1) + &Cyclo::zeta(8, -1)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&Cyclo::zeta(3, 1) + &Cyclo::zeta(3, 2), Cyclo::from_int(-1));
        assert_eq!(&r2() * &r2(), Cyclo::from_int(2));
        assert_eq!(build(5, &[(1, 1), (2, 1), (3, 1), (4, 1)]), Cyclo::from_int(-1));
        let a = build(12, &[(1, 3), (5, -2), (7, 1)]);
        let z = &a - &a;
        assert!(z.is_zero());
        assert_eq!(z.conductor(), 1);
        assert_eq!(Cyclo::zeta(4, 1).pow(2), Cyclo::from_int(-1));
        assert_eq!(Cyclo::zeta(6, 1).conductor(), 3);
        assert_eq!(Cyclo::zeta(2, 1), Cyclo::from_int(-1));
    }

    #[test]
    fn galois_examples() {
        assert_eq!(Cyclo::from_int(7).galois_apply(4).unwrap(), Cyclo::from_int(7));
        assert_eq!(r2().galois_apply(3).unwrap(), -r2());
        assert_eq!(Cyclo::zeta(5, 1).galois_apply(2).unwrap(), Cyclo::zeta(5, 2));
        assert!(matches!(Cyclo::zeta(5, 1).galois_apply(5), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn fields_norms_and_ell_data() {
        let q = Cyclo::from_rational(BigRational::new(7.into(), 2.into())).field_of_values();
        assert_eq!(q, FieldDescriptor::rationals());
        assert_eq!(r2().field_of_values().fixing, vec![1, 7]);
        assert_eq!(r2().field_of_values().conductor, 8);
        assert_eq!(Cyclo::zeta(3, 1).field_of_values().fixing, vec![1]);
        assert_eq!(Cyclo::from_int(5).norm(), BigRational::from_integer(5.into()));
        assert_eq!(r2().norm(), BigRational::from_integer((-2).into()));
        let w = &Cyclo::one() + &Cyclo::zeta(3, 1);
        assert_eq!(w.norm(), BigRational::one());
        let d = Cyclo::from_int(12).ell_data(2).unwrap();
        assert_eq!((d.norm_valuation, d.rational_ell_part), (2, Some(4)));
        let d = r2().ell_data(2).unwrap();
        assert_eq!((d.norm_valuation, d.rational_ell_part), (1, None));
        let d = Cyclo::from_int(3).ell_data(2).unwrap();
        assert_eq!((d.norm_valuation, d.rational_ell_part), (0, Some(1)));
        assert!(matches!(Cyclo::zero().ell_data(2), Err(Error::ZeroValue)));
    }

    #[test]
    fn sign_classes() {
        assert!(r2().up_to_sign_equal(&-r2()));
        assert!(!Cyclo::one().up_to_sign_equal(&Cyclo::zeta(3, 1)));
        assert!(Cyclo::zero().up_to_sign_equal(&Cyclo::zero()));
        assert_eq!(r2().sign_class(), (-r2()).sign_class());
        assert_eq!(Cyclo::from_int(-1).sign_class(), Cyclo::one());
    }

    #[test]
    fn serialization_shape() {
        let v = r2();
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"n":8,"c":[[1,1,1],[3,-1,1]]}"#);
        let big = Cyclo::from_rational(BigRational::new(
            "618970019642690137449562111".parse().unwrap(),
            7.into(),
        ));
        let s = serde_json::to_string(&big).unwrap();
        assert!(s.contains("\"618970019642690137449562111\""));
        assert_eq!(serde_json::from_str::<Cyclo>(&s).unwrap(), big);
    }

    #[test]
    fn reduction_mod_prime() {
        // r = 17, 3 has order 16; 3^2 = 9 has order 8.
        let root8 = 9u64;
        let v = r2();
        let red = v.reduce_mod(17, root8).unwrap();
        assert_eq!((red * red) % 17, 2);
    }

    fn arb_cyclo() -> impl Strategy<Value = Cyclo> {
        (
            prop::sample::select(vec![1u32, 3, 4, 5, 8, 9, 12, 15, 16, 20, 24]),
            prop::collection::vec((0i64..48, -3i64..4), 0..5),
        )
            .prop_map(|(n, t)| build(n, &t))
    }

    proptest! {
        #[test]
        fn canonical_form_matches_numeric_value(
            n in prop::sample::select(vec![2u32, 3, 4, 6, 8, 9, 10, 12, 15, 18, 20, 24, 30, 36]),
            t in prop::collection::vec((0i64..72, -4i64..5), 0..6),
        ) {
            let c = build(n, &t);
            prop_assert!(close(approx(&c), raw_approx(n, &t)));
            prop_assert_eq!(c.conductor() % 4 == 2, false);
            prop_assert!(c.terms().len() <= units(c.conductor()).len());
        }

        #[test]
        fn ring_operations_match_numeric_values(a in arb_cyclo(), b in arb_cyclo()) {
            let (ar, ai) = approx(&a);
            let (br, bi) = approx(&b);
            prop_assert!(close(approx(&(&a + &b)), (ar + br, ai + bi)));
            prop_assert!(close(approx(&(&a * &b)), (ar * br - ai * bi, ar * bi + ai * br)));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn serialization_round_trip(a in arb_cyclo(), b in arb_cyclo()) {
            let v = &a * &b;
            let back: Cyclo = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
            prop_assert_eq!(back, v);
        }

        #[test]
        fn galois_action_composes(
            a in arb_cyclo(),
            j in prop::sample::select(units(720)),
            k in prop::sample::select(units(720)),
        ) {
            let (j, k, n) = (j as i64, k as i64, 720i64);
            let lhs = a.galois_apply(j).unwrap().galois_apply(k).unwrap();
            prop_assert_eq!(&lhs, &a.galois_apply(j * k % n).unwrap());
            prop_assert_eq!(a.galois_apply(k).unwrap().field_of_values(), a.field_of_values());
        }

        #[test]
        fn norms_multiply_across_disjoint_fields(
            a in prop::collection::vec((0i64..8, -2i64..3), 1..4),
            b in prop::collection::vec((0i64..9, -2i64..3), 1..4),
        ) {
            let x = build(8, &a);
            let y = build(9, &b);
            prop_assume!(!x.is_zero() && !y.is_zero());
            // Q(ζ_8) and Q(ζ_9) are linearly disjoint, so the norm from the
            // compositum Q(x)Q(y) is multiplicative with complementary
            // exponents; Q(xy) may be a proper subfield of that compositum.
            let dx = x.field_of_values().degree() as i32;
            let dy = y.field_of_values().degree() as i32;
            let xy = &x * &y;
            let idx = dx * dy / xy.field_of_values().degree() as i32;
            prop_assert_eq!(xy.norm().pow(idx), x.norm().pow(dy) * y.norm().pow(dx));
            let e = xy.ell_data(2).unwrap().norm_valuation * idx as i64;
            prop_assert_eq!(e,x.ell_data(2).unwrap().norm_valuation * dy as i64 + y.ell_data(2).unwrap().norm_valuation * dx as i64);
        }
    }
}
