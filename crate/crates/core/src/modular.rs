//! Linear algebra and polynomials over a prime field `F_r` with `r < 2^32`.

use crate::arith::{factorize, is_prime, pow_mod};

/// Arithmetic modulo a prime `r < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    pub r: u64,
}

impl Fp {
    pub fn new(r: u64) -> Self {
        debug_assert!(r < (1 << 32) && is_prime(r));
        Fp { r }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.r { s - self.r } else { s }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b { a - b } else { a + self.r - b }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 { 0 } else { self.r - a }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.r
    }

    pub fn pow(self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.r)
    }

    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.r));
        self.pow(a, self.r - 2)
    }

    /// Reduces a signed integer.
    pub fn from_i64(self, a: i64) -> u64 {
        a.rem_euclid(self.r as i64) as u64
    }

    /// Symmetric lift to `(−r/2, r/2]`.
    pub fn lift(self, a: u64) -> i64 {
        if a > self.r / 2 {
            a as i64 - self.r as i64
        } else {
            a as i64
        }
    }

    /// Least primitive root modulo `r`.
    pub fn primitive_root(self) -> u64 {
        let n = self.r - 1;
        let primes: Vec<u64> = factorize(n).into_iter().map(|(p, _)| p).collect();
        (2..self.r)
            .find(|&g| primes.iter().all(|&p| self.pow(g, n / p) != 1))
            .unwrap_or(1)
    }

    /// `g^{(r−1)/e}` for the least primitive root `g`: a primitive `e`-th
    /// root of unity. Requires `e | r − 1`.
    pub fn root_of_unity(self, e: u64) -> u64 {
        debug_assert_eq!((self.r - 1) % e, 0);
        self.pow(self.primitive_root(), (self.r - 1) / e)
    }
}

/// Least prime `r ≡ 1 (mod e)` with `r > lower`.
pub fn prime_one_mod(e: u64, lower: u64) -> Option<u64> {
    let mut r = (lower / e + 1) * e + 1;
    while r < (1 << 32) {
        if is_prime(r) {
            return Some(r);
        }
        r += e;
    }
    None
}

/// Reduced row echelon form in place; zero rows are dropped. Returns the
/// pivot columns.
pub fn rref(k: Fp, rows: &mut Vec<Vec<u64>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = k.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = k.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = k.sub(*x, k.mul(f, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : m x = 0}` for a matrix given by rows.
pub fn nullspace(k: Fp, m: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut rows = m.to_vec();
    let pivots = rref(k, &mut rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0; ncols];
            v[f] = 1;
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = k.neg(row[f]);
            }
            v
        })
        .collect()
}

/// Characteristic polynomial `det(xI − A)`, coefficients from the constant
/// term up, via reduction to upper Hessenberg form.
pub fn charpoly(k: Fp, a: &[Vec<u64>]) -> Vec<u64> {
    let n = a.len();
    let mut h: Vec<Vec<u64>> = a.to_vec();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| h[i][m - 1] != 0) else {
            continue;
        };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        let inv = k.inv(h[m][m - 1]);
        for i in m + 1..n {
            let u = k.mul(h[i][m - 1], inv);
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let t = k.mul(u, h[m][j]);
                h[i][j] = k.sub(h[i][j], t);
            }
            for row in h.iter_mut() {
                let t = k.mul(u, row[i]);
                row[m] = k.add(row[m], t);
            }
        }
    }
    // p_m = characteristic polynomial of the leading m×m block.
    let mut p: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        let mut next = vec![0u64; m + 1];
        // (x − h[m−1][m−1]) p_{m−1}
        for (d, &c) in p[m - 1].iter().enumerate() {
            next[d + 1] = k.add(next[d + 1], c);
            next[d] = k.sub(next[d], k.mul(h[m - 1][m - 1], c));
        }
        let mut t = 1u64;
        for i in 1..m {
            t = k.mul(t, h[m - i][m - i - 1]);
            let coef = k.mul(t, h[m - i - 1][m - 1]);
            for (d, &c) in p[m - i - 1].iter().enumerate() {
                next[d] = k.sub(next[d], k.mul(coef, c));
            }
        }
        p.push(next);
    }
    p.pop().unwrap()
}

fn trim(p: &mut Vec<u64>) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

fn is_zero(p: &[u64]) -> bool {
    p.iter().all(|&c| c == 0)
}

fn poly_rem(k: Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = a.to_vec();
    trim(&mut a);
    let db = b.len() - 1;
    let lead_inv = k.inv(b[db]);
    while a.len() > db && !is_zero(&a) {
        let da = a.len() - 1;
        let f = k.mul(a[da], lead_inv);
        for (i, &c) in b.iter().enumerate() {
            a[da - db + i] = k.sub(a[da - db + i], k.mul(f, c));
        }
        a.pop();
        trim(&mut a);
    }
    a
}

fn poly_mulmod(k: Fp, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = k.add(out[i + j], k.mul(x, y));
        }
    }
    poly_rem(k, &out, m)
}

fn poly_powmod(k: Fp, base: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = poly_rem(k, base, m);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(k, &result, &b, m);
        }
        b = poly_mulmod(k, &b, &b, m);
        e >>= 1;
    }
    result
}

fn monic(k: Fp, mut p: Vec<u64>) -> Vec<u64> {
    trim(&mut p);
    let inv = k.inv(*p.last().unwrap());
    p.iter().map(|&c| k.mul(c, inv)).collect()
}

fn poly_gcd(k: Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !is_zero(&b) {
        let r = poly_rem(k, &a, &b);
        a = b;
        b = r;
    }
    monic(k, a)
}

fn poly_sub(k: Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| k.sub(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0)))
        .collect();
    trim(&mut out);
    out
}

fn poly_div_exact(k: Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = a.to_vec();
    let db = b.len() - 1;
    let inv = k.inv(b[db]);
    let mut q = vec![0u64; a.len() - db];
    for i in (0..q.len()).rev() {
        let f = k.mul(a[i + db], inv);
        q[i] = f;
        for (j, &c) in b.iter().enumerate() {
            a[i + j] = k.sub(a[i + j], k.mul(f, c));
        }
    }
    q
}

/// Distinct roots in `F_r` of a nonzero polynomial, in increasing order.
/// Splitting is Cantor–Zassenhaus with shifts `a = 0, 1, 2, …`.
pub fn roots(k: Fp, f: &[u64]) -> Vec<u64> {
    let f = monic(k, f.to_vec());
    if f.len() == 1 {
        return Vec::new();
    }
    let xr = poly_powmod(k, &[0, 1], k.r, &f);
    let g = poly_gcd(k, &f, &poly_sub(k, &xr, &[0, 1]));
    let mut out = Vec::new();
    split(k, g, &mut out);
    out.sort_unstable();
    out
}

fn split(k: Fp, g: Vec<u64>, out: &mut Vec<u64>) {
    match g.len() {
        0 | 1 => {}
        2 => out.push(k.neg(g[0])),
        _ if k.r == 2 => {
            // x(x + 1): both elements are roots.
            out.extend([0, 1]);
        }
        _ => {
            for a in 0..k.r {
                let h = poly_powmod(k, &[a, 1], (k.r - 1) / 2, &g);
                let d = poly_gcd(k, &g, &poly_sub(k, &h, &[1]));
                if d.len() > 1 && d.len() < g.len() {
                    let rest = poly_div_exact(k, &g, &d);
                    split(k, d, out);
                    split(k, monic(k, rest), out);
                    return;
                }
            }
        }
    }
}
