//! Arithmetic in GF(q) for q ≤ 1024.
//!
//! GF(p^f) is realized as F_p[x]/(m) with `m` the lexicographically least
//! primitive monic polynomial of degree `f` (coefficients read as the base-p
//! digits of an integer, leading non-monic coefficient most significant).
//! An element `Σ c_i x^i` is encoded as the integer `Σ c_i p^i`.

use crate::arith::prime_power;
use crate::error::{Error, Result};

pub const MAX_FIELD: u32 = 1024;

#[derive(Clone, Debug)]
pub struct Gf {
    q: u32,
    p: u32,
    f: u32,
    /// `exp[i] = x^i` for `i < q − 1`.
    exp: Vec<u32>,
    /// `log[a]` for `a ≠ 0`.
    log: Vec<u32>,
    /// Coefficients `c_0, …, c_{f−1}` of the defining polynomial (monic).
    modulus: Vec<u32>,
}

impl Gf {
    pub fn new(q: u32) -> Result<Self> {
        let (p, f) = prime_power(q as u64)
            .filter(|_| q <= MAX_FIELD)
            .ok_or(Error::InvalidField(q as u64))?;
        let (p, f) = (p as u32, f);
        for t in 0..q {
            let modulus: Vec<u32> = (0..f).map(|i| (t / p.pow(i)) % p).collect();
            if let Some(exp) = primitive_powers(p, f, &modulus) {
                let mut log = vec![0u32; q as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                return Ok(Gf {
                    q,
                    p,
                    f,
                    exp,
                    log,
                    modulus,
                });
            }
        }
        Err(Error::Internal(format!("no primitive polynomial for GF({q})")))
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.f
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.combine(a, b, |x, y| (x + y) % self.p)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.combine(a, b, |x, y| (x + self.p - y) % self.p)
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.sub(0, a)
    }

    fn combine(&self, mut a: u32, mut b: u32, op: impl Fn(u32, u32) -> u32) -> u32 {
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.f {
            out += op(a % self.p, b % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        self.exp[((self.log[a as usize] + self.log[b as usize]) % n) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * e) % n) as usize]
    }

    /// The primitive element `x`.
    pub fn generator(&self) -> u32 {
        self.exp[1 % self.exp.len()]
    }

    /// Elements `x^0, …, x^{f−1}`: a basis over the prime field.
    pub fn prime_basis(&self) -> Vec<u32> {
        (0..self.f).map(|i| self.p.pow(i)).collect()
    }
}

/// Powers of `x` modulo the monic polynomial with the given lower
/// coefficients, when `x` has order exactly `p^f − 1`.
fn primitive_powers(p: u32, f: u32, low: &[u32]) -> Option<Vec<u32>> {
    if low[0] == 0 {
        return None;
    }
    let q = p.pow(f);
    let n = q - 1;
    // Current power as a coefficient vector.
    let mut cur = vec![0u32; f as usize];
    cur[0] = 1;
    let encode = |v: &[u32]| v.iter().rev().fold(0, |acc, &c| acc * p + c);
    let mut exp = Vec::with_capacity(n as usize);
    for i in 0..n {
        let e = encode(&cur);
        if i > 0 && e == 1 {
            return None;
        }
        exp.push(e);
        // Multiply by x and reduce by x^f = −Σ low_i x^i.
        let top = cur[(f - 1) as usize];
        for j in (1..f as usize).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        for j in 0..f as usize {
            cur[j] = (cur[j] + (p - low[j]) % p * top) % p;
        }
    }
    (encode(&cur) == 1).then_some(exp)
}
