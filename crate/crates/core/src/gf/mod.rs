//! Exact arithmetic over GF(p^m).
//!
//! Elements are encoded as integers in `[0, q)`: the coefficient vector
//! `(c_0, .., c_{m-1})` of the polynomial-basis representation is read as
//! base-`p` digits with `c_0` least significant. So in GF(4) built on
//! `x^2 + x + 1`, the element `α` is `2` and `α + 1` is `3`.

mod matrix;

pub use matrix::Matrix;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// A finite field GF(p^m) with a fixed monic irreducible modulus.
///
/// Cheap to clone; the log/antilog tables are shared.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    /// Low-to-high coefficients, length m+1, leading coefficient 1.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Field {
    /// Builds GF(p^m) on the lexicographically smallest monic irreducible
    /// polynomial of degree `m` (coefficient lists compared low degree first).
    pub fn new(p: u32, m: u32) -> Result<Field> {
        if m == 0 {
            return Err(Error::DegreeZero);
        }
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= MAX_ORDER);
        let Some(q) = q else {
            return Err(Error::FieldTooLarge { p, m });
        };
        let q = q as u32;
        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, m)
        };
        let mut inner = Inner {
            p,
            m,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        inner.build_tables();
        Ok(Field(Arc::new(inner)))
    }

    /// Parses `"p^m"` (or a bare prime `"p"`).
    pub fn parse(s: &str) -> Result<Field> {
        let bad = || Error::BadFieldString(s.to_string());
        let (p, m) = match s.trim().split_once('^') {
            Some((p, m)) => (p.trim().parse().map_err(|_| bad())?, m.trim().parse().map_err(|_| bad())?),
            None => (s.trim().parse().map_err(|_| bad())?, 1),
        };
        Field::new(p, m)
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.m == 1
    }

    /// Same (p, m, modulus); fields built through [`Field::new`] are canonical.
    pub fn same_as(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.m == other.0.m && self.0.modulus == other.0.modulus)
    }

    pub fn contains(&self, a: u32) -> bool {
        a < self.0.q
    }

    pub fn zero(&self) -> u32 {
        0
    }

    pub fn one(&self) -> u32 {
        1
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let f = &*self.0;
        if f.p == 2 {
            a ^ b
        } else if f.m == 1 {
            (a + b) % f.p
        } else {
            digitwise(f.p, f.m, a, b, |x, y| (x + y) % f.p)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let f = &*self.0;
        if f.p == 2 {
            a
        } else if f.m == 1 {
            (f.p - a) % f.p
        } else {
            digitwise(f.p, f.m, a, 0, |x, _| (f.p - x) % f.p)
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let f = &*self.0;
        let e = (f.log[a as usize] + f.log[b as usize]) % (f.q - 1);
        f.exp[e as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivideByZero);
        }
        let f = &*self.0;
        let e = (f.q - 1 - f.log[a as usize]) % (f.q - 1);
        Ok(f.exp[e as usize])
    }

    /// Base-p digits of `a`, lowest degree first.
    pub fn coeffs(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.0.m as usize);
        let mut v = a;
        for _ in 0..self.0.m {
            out.push(v % self.0.p);
            v /= self.0.p;
        }
        out
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> u32 {
        coeffs.iter().rev().fold(0, |acc, &c| acc * self.0.p + c % self.0.p)
    }

    /// Wraps an encoded integer as a checked element.
    pub fn element(&self, value: u32) -> Result<Fe> {
        if !self.contains(value) {
            return Err(Error::MalformedInput(format!(
                "element {value} out of range for GF({})",
                self.0.q
            )));
        }
        Ok(Fe { field: self.clone(), value })
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.0.q
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.m)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.0.p, self.0.m)
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        Field::parse(s)
    }
}

impl Inner {
    fn build_tables(&mut self) {
        let q = self.q as usize;
        let order = self.q - 1;
        let factors = prime_factors(order);
        let generator = (1..self.q)
            .find(|&g| {
                order == 1 || factors.iter().all(|&l| self.pow_slow(g, (order / l) as u64) != 1)
            })
            .expect("multiplicative group of a finite field is cyclic");
        self.exp = vec![0; q];
        self.log = vec![0; q];
        let mut cur = 1u32;
        for k in 0..order {
            self.exp[k as usize] = cur;
            self.log[cur as usize] = k;
            cur = self.mul_slow(cur, generator);
        }
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.m == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let m = self.m as usize;
        let da = digits(self.p, self.m, a);
        let db = digits(self.p, self.m, b);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // reduce by the monic modulus from the top down
        for k in (m..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for (i, &mc) in self.modulus[..m].iter().enumerate() {
                let idx = k - m + i;
                prod[idx] = (prod[idx] + (p - c) * mc as u64 % p) % p;
            }
            prod[k] = 0;
        }
        prod[..m].iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32
    }

    fn pow_slow(&self, mut base: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }
}

fn digits(p: u32, m: u32, mut v: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn digitwise(p: u32, m: u32, a: u32, b: u32, op: impl Fn(u32, u32) -> u32) -> u32 {
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..m {
        out += op(a % p, b % p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Remainder of `f` modulo the monic `g` over GF(p); both low-to-high.
fn poly_rem(p: u32, f: &[u32], g: &[u32]) -> Vec<u32> {
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    let p64 = p as u64;
    while r.len() > dg {
        let lead = r.pop().unwrap() % p64;
        if lead == 0 {
            continue;
        }
        let shift = r.len() - dg;
        for (i, &gc) in g[..dg].iter().enumerate() {
            r[shift + i] = (r[shift + i] + (p64 - lead) * gc as u64) % p64;
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let m = f.len() - 1;
    for d in 1..=m / 2 {
        for t in 0..(p as u64).pow(d as u32) {
            let mut g: Vec<u32> = digits(p, d as u32, t as u32);
            g.push(1);
            if poly_rem(p, f, &g).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `m`,
/// comparing `[a_0, a_1, .., a_{m-1}]` with `a_0` most significant.
fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let total = (p as u64).pow(m);
    for t in 0..total {
        // a_0 is the most significant digit of t
        let mut coeffs: Vec<u32> = digits(p, m, t as u32);
        coeffs.reverse();
        coeffs.push(1);
        if coeffs[0] != 0 && is_irreducible(p, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// A field element carrying its field, for checked arithmetic.
#[derive(Clone, PartialEq, Eq)]
pub struct Fe {
    field: Field,
    value: u32,
}

impl Fe {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &Fe) -> Result<()> {
        if self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Fe) -> Result<Fe> {
        self.check(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn mul(&self, other: &Fe) -> Result<Fe> {
        self.check(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> Fe {
        self.with(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<Fe> {
        Ok(self.with(self.field.inv(self.value)?))
    }

    fn with(&self, value: u32) -> Fe {
        Fe { field: self.field.clone(), value }
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{:?}", self.value, self.field)
    }
}
