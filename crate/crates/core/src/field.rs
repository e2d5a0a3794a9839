//! Table-driven arithmetic in GF(p^m).
//!
//! An element is stored as the integer `Σ c_i p^i` where `c_0 + c_1 x + ...`
//! is its polynomial representative modulo the field's modulus. The modulus
//! of [`make_field`] is the smallest monic irreducible polynomial (reading
//! the low-degree coefficients as base-p digits) and `alpha` is the
//! smallest-encoded primitive element, so the same `(p, m)` always yields
//! the same field.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default ceiling on `q` for the log/exp tables.
pub const DEFAULT_FIELD_LIMIT: u64 = 1 << 16;

/// Fields up to this size also get full `q × q` addition and multiplication tables.
const DENSE_TABLE_LIMIT: u32 = 256;

/// A field element in base-p digit encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fq(pub u16);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0 as u32
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shared handle to an immutable field description.
pub type Field = Arc<FieldSpec>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    /// `a^b` with `b` read as a plain integer exponent.
    Pow,
}

/// Serialized form of a field: `{ p, m, modulus: [c_0..c_m], alpha }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
    pub alpha: u32,
}

pub struct FieldSpec {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    alpha: u32,
    exp: Vec<u16>,
    log: Vec<u32>,
    neg: Vec<u16>,
    add_table: Option<Vec<u16>>,
    mul_table: Option<Vec<u16>>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .field("alpha", &self.alpha)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus && self.alpha == other.alpha
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
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

/// Splits `q = p^m`, failing when `q` is not a prime power.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return Err(Error::NotPrimePower(q));
    }
    let p = factors[0];
    let mut m = 0;
    let mut rest = q;
    while rest > 1 {
        rest /= p;
        m += 1;
    }
    Ok((p as u32, m))
}

pub fn make_field(p: u32, m: u32) -> Result<Field> {
    make_field_with_limit(p, m, DEFAULT_FIELD_LIMIT)
}

/// The canonical field of size `q`.
pub fn field_for_q(q: u64) -> Result<Field> {
    let (p, m) = prime_power(q)?;
    make_field(p, m)
}

pub fn make_field_with_limit(p: u32, m: u32, limit: u64) -> Result<Field> {
    let q = check_params(p, m, limit)?;
    let modulus = smallest_irreducible(p, m);
    let poly = PolyCtx { p, m, modulus: &modulus };
    let alpha =
        (1..q).find(|&g| poly.is_primitive(g, q)).expect("the multiplicative group of a finite field is cyclic");
    Ok(Arc::new(FieldSpec::build(p, m, modulus, alpha)))
}

/// Rebuilds a field from an explicit modulus and primitive element, validating both.
pub fn field_from_descriptor(desc: &FieldDescriptor) -> Result<Field> {
    let FieldDescriptor { p, m, ref modulus, alpha } = *desc;
    let q = check_params(p, m, DEFAULT_FIELD_LIMIT)?;
    if modulus.len() != m as usize + 1 || modulus[m as usize] != 1 || modulus.iter().any(|&c| c >= p) {
        return Err(Error::Format(format!("modulus {modulus:?} is not a monic degree-{m} polynomial over F_{p}")));
    }
    if !is_irreducible(p, modulus) {
        return Err(Error::Format(format!("modulus {modulus:?} is reducible over F_{p}")));
    }
    let poly = PolyCtx { p, m, modulus };
    if alpha == 0 || alpha >= q || !poly.is_primitive(alpha, q) {
        return Err(Error::Format(format!("alpha = {alpha} is not a primitive element")));
    }
    Ok(Arc::new(FieldSpec::build(p, m, modulus.clone(), alpha)))
}

fn check_params(p: u32, m: u32, limit: u64) -> Result<u32> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p));
    }
    if m < 1 {
        return Err(Error::ZeroDegree);
    }
    let q = (p as u64).checked_pow(m).filter(|&q| q <= limit.min(DEFAULT_FIELD_LIMIT));
    match q {
        Some(q) => Ok(q as u32),
        None => Err(Error::FieldTooLarge { p, m, limit }),
    }
}

/// Smallest monic irreducible polynomial of degree `m` over F_p, returned low-degree first.
pub fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let tail = (p as u64).pow(m);
    (0..tail)
        .map(|code| {
            let mut poly = digits(code, p, m as usize);
            poly.push(1);
            poly
        })
        .find(|poly| is_irreducible(p, poly))
        .expect("irreducible polynomials exist in every degree")
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible(p: u32, poly: &[u32]) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        for code in 0..(p as u64).pow(d as u32) {
            let mut divisor = digits(code, p, d);
            divisor.push(1);
            if poly_rem(p, poly, &divisor).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn digits(mut code: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len + 1);
    for _ in 0..len {
        out.push((code % p as u64) as u32);
        code /= p as u64;
    }
    out
}

fn encode(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `a` modulo the monic polynomial `b`.
fn poly_rem(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    while rem.len() > db {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - db;
        if lead != 0 {
            for (i, &c) in b.iter().enumerate() {
                let idx = shift + i;
                rem[idx] = (rem[idx] + p - (lead * c) % p) % p;
            }
        }
        rem.pop();
    }
    rem
}

/// Schoolbook polynomial arithmetic used only while building tables.
struct PolyCtx<'a> {
    p: u32,
    m: u32,
    modulus: &'a [u32],
}

impl PolyCtx<'_> {
    fn mul(&self, a: u32, b: u32) -> u32 {
        let m = self.m as usize;
        let da = digits(a as u64, self.p, m);
        let db = digits(b as u64, self.p, m);
        let mut prod = vec![0u32; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let rem = poly_rem(self.p, &prod, self.modulus);
        encode(&rem, self.p)
    }

    fn pow(&self, base: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    fn is_primitive(&self, g: u32, q: u32) -> bool {
        let order = (q - 1) as u64;
        if g == 0 || self.pow(g, order) != 1 {
            return false;
        }
        prime_factors(order).into_iter().all(|l| self.pow(g, order / l) != 1)
    }
}

impl FieldSpec {
    fn build(p: u32, m: u32, modulus: Vec<u32>, alpha: u32) -> FieldSpec {
        let q = p.pow(m);
        let poly = PolyCtx { p, m, modulus: &modulus };
        let order = (q - 1) as usize;
        let mut exp = Vec::with_capacity(order);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = 1u32;
        for e in 0..order {
            exp.push(cur as u16);
            log[cur as usize] = e as u32;
            cur = poly.mul(cur, alpha);
        }
        let neg = (0..q)
            .map(|a| {
                let d: Vec<u32> = digits(a as u64, p, m as usize).iter().map(|&c| (p - c) % p).collect();
                encode(&d, p) as u16
            })
            .collect();
        let mut spec = FieldSpec { p, m, q, modulus, alpha, exp, log, neg, add_table: None, mul_table: None };
        if q <= DENSE_TABLE_LIMIT {
            let qs = q as usize;
            let mut add = vec![0u16; qs * qs];
            let mut mul = vec![0u16; qs * qs];
            for a in 0..q {
                for b in 0..q {
                    add[a as usize * qs + b as usize] = spec.add_digits(a, b) as u16;
                    mul[a as usize * qs + b as usize] = spec.mul_log(Fq(a as u16), Fq(b as u16)).0;
                }
            }
            spec.add_table = Some(add);
            spec.mul_table = Some(mul);
        }
        spec
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients `c_0..c_m`, low degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn alpha(&self) -> Fq {
        Fq(self.alpha as u16)
    }

    /// `exp_table[e] = alpha^e` for `0 <= e < q - 1`.
    pub fn exp_table(&self) -> &[u16] {
        &self.exp
    }

    pub fn log_table(&self) -> &[u32] {
        &self.log
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { p: self.p, m: self.m, modulus: self.modulus.clone(), alpha: self.alpha }
    }

    /// Builds an element from an integer encoding, failing when out of range.
    pub fn elem(&self, v: u32) -> Result<Fq> {
        if v < self.q {
            Ok(Fq(v as u16))
        } else {
            Err(Error::Format(format!("{v} is not an element of F_{}", self.q)))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(|v| Fq(v as u16))
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn mul_log(&self, a: Fq, b: Fq) -> Fq {
        if a.is_zero() || b.is_zero() {
            return Fq::ZERO;
        }
        let e = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % (self.q as u64 - 1);
        Fq(self.exp[e as usize])
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.p == 2 {
            return Fq(a.0 ^ b.0);
        }
        match &self.add_table {
            Some(t) => Fq(t[a.0 as usize * self.q as usize + b.0 as usize]),
            None => Fq(self.add_digits(a.0 as u32, b.0 as u32) as u16),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        Fq(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        match &self.mul_table {
            Some(t) => Fq(t[a.0 as usize * self.q as usize + b.0 as usize]),
            None => self.mul_log(a, b),
        }
    }

    pub fn inv(&self, a: Fq) -> Result<Fq> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let order = self.q - 1;
        let e = (order - self.log[a.0 as usize]) % order;
        Ok(Fq(self.exp[e as usize]))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`; `0^0 = 1`.
    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq::ONE;
        }
        if a.is_zero() {
            return Fq::ZERO;
        }
        let order = self.q as u64 - 1;
        let le = (self.log[a.0 as usize] as u64 * (e % order)) % order;
        Fq(self.exp[le as usize])
    }

    pub fn arith(&self, a: Fq, b: Fq, op: ArithOp) -> Result<Fq> {
        match op {
            ArithOp::Add => Ok(self.add(a, b)),
            ArithOp::Sub => Ok(self.sub(a, b)),
            ArithOp::Mul => Ok(self.mul(a, b)),
            ArithOp::Div => self.div(a, b),
            ArithOp::Inv => self.inv(a),
            ArithOp::Pow => Ok(self.pow(a, b.0 as u64)),
        }
    }

    /// `alpha^e`.
    pub fn exp_alpha(&self, e: u64) -> Fq {
        Fq(self.exp[(e % (self.q as u64 - 1)) as usize])
    }

    pub fn dlog(&self, a: Fq) -> Result<u32> {
        if a.is_zero() {
            return Err(Error::LogOfZero);
        }
        Ok(self.log[a.0 as usize])
    }

    /// `p^i mod (q - 1)`, the exponent that realizes the i-th Frobenius map on logs.
    fn frobenius_log_factor(&self, i: u32) -> u64 {
        let order = self.q as u64 - 1;
        let mut f = 1 % order.max(1);
        for _ in 0..(i % self.m) {
            f = f * self.p as u64 % order.max(1);
        }
        f
    }

    /// `a^(p^i)`.
    pub fn frobenius(&self, a: Fq, i: u32) -> Fq {
        if a.is_zero() || i.is_multiple_of(self.m) {
            return a;
        }
        let order = self.q as u64 - 1;
        let e = self.log[a.0 as usize] as u64 * self.frobenius_log_factor(i) % order;
        Fq(self.exp[e as usize])
    }

    /// Lookup table for `x -> x^(p^i)` over every element.
    pub fn frobenius_table(&self, i: u32) -> Vec<Fq> {
        self.elements().map(|a| self.frobenius(a, i)).collect()
    }

    /// Whether `a` lies in the subfield `F_{p^d}` (fixed points of `x -> x^(p^d)`).
    pub fn in_subfield(&self, a: Fq, d: u32) -> bool {
        self.frobenius(a, d) == a
    }

    /// `dst += c * src`, the elimination kernel.
    #[inline]
    pub fn axpy(&self, dst: &mut [Fq], c: Fq, src: &[Fq]) {
        debug_assert_eq!(dst.len(), src.len());
        if c.is_zero() {
            return;
        }
        let qs = self.q as usize;
        match (&self.mul_table, &self.add_table) {
            (Some(mul), _) if self.p == 2 => {
                let row = &mul[c.0 as usize * qs..(c.0 as usize + 1) * qs];
                for (d, s) in dst.iter_mut().zip(src) {
                    d.0 ^= row[s.0 as usize];
                }
            }
            (Some(mul), Some(add)) => {
                let row = &mul[c.0 as usize * qs..(c.0 as usize + 1) * qs];
                for (d, s) in dst.iter_mut().zip(src) {
                    d.0 = add[d.0 as usize * qs + row[s.0 as usize] as usize];
                }
            }
            _ => {
                for (d, s) in dst.iter_mut().zip(src) {
                    *d = self.add(*d, self.mul(c, *s));
                }
            }
        }
    }

    /// `row *= c` in place.
    #[inline]
    pub fn scale(&self, row: &mut [Fq], c: Fq) {
        match &self.mul_table {
            Some(mul) => {
                let qs = self.q as usize;
                let t = &mul[c.0 as usize * qs..(c.0 as usize + 1) * qs];
                for x in row.iter_mut() {
                    x.0 = t[x.0 as usize];
                }
            }
            None => {
                for x in row.iter_mut() {
                    *x = self.mul(*x, c);
                }
            }
        }
    }

    pub fn dot(&self, a: &[Fq], b: &[Fq]) -> Fq {
        a.iter().zip(b).fold(Fq::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_modulus_and_alpha() {
        let f = make_field(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(f.alpha(), Fq(2));
        assert_eq!(f.mul(Fq(2), Fq(2)), Fq(3));
    }

    #[test]
    fn f5_prime_field() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.alpha(), Fq(2));
        assert_eq!(f.inv(Fq(2)).unwrap(), Fq(3));
        assert_eq!(f.dlog(Fq(4)).unwrap(), 2);
        assert_eq!(f.dlog(Fq(1)).unwrap(), 0);
        assert_eq!(f.dlog(Fq(3)).unwrap(), 3);
    }

    #[test]
    fn f9_alpha_has_full_order() {
        let f = make_field(3, 2).unwrap();
        let a = f.alpha();
        assert_eq!(f.pow(a, 8), Fq::ONE);
        for e in 1..8 {
            assert_ne!(f.pow(a, e), Fq::ONE);
        }
    }

    #[test]
    fn f8_frobenius_squares() {
        let f = make_field(2, 3).unwrap();
        let x = Fq(2);
        assert_eq!(f.frobenius(x, 1), f.mul(x, x));
        let x1 = f.add(x, Fq::ONE);
        assert_eq!(f.frobenius(x1, 1), f.add(f.mul(x, x), Fq::ONE));
    }

    #[test]
    fn errors() {
        assert_eq!(make_field(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(make_field(3, 0).unwrap_err(), Error::ZeroDegree);
        assert!(matches!(make_field(2, 17), Err(Error::FieldTooLarge { .. })));
        assert!(matches!(make_field_with_limit(3, 3, 20), Err(Error::FieldTooLarge { .. })));
        let f = make_field(7, 1).unwrap();
        assert_eq!(f.inv(Fq::ZERO).unwrap_err(), Error::DivisionByZero);
        assert_eq!(f.dlog(Fq::ZERO).unwrap_err(), Error::LogOfZero);
        assert_eq!(prime_power(12).unwrap_err(), Error::NotPrimePower(12));
        assert_eq!(prime_power(27).unwrap(), (3, 3));
    }

    #[test]
    fn large_field_without_dense_tables() {
        let f = make_field(2, 10).unwrap();
        let a = Fq(777);
        assert_eq!(f.mul(a, f.inv(a).unwrap()), Fq::ONE);
        assert_eq!(f.pow(a, 1023), Fq::ONE);
        let f = make_field(17, 2).unwrap();
        for v in [3u16, 100, 288] {
            let a = Fq(v);
            assert_eq!(f.sub(f.add(a, Fq(5)), Fq(5)), a);
            assert_eq!(f.frobenius(f.frobenius(a, 1), 1), a);
        }
    }

    #[test]
    fn descriptor_round_trip_and_validation() {
        let f = make_field(3, 3).unwrap();
        let g = field_from_descriptor(&f.descriptor()).unwrap();
        assert_eq!(*f, *g);
        let mut bad = f.descriptor();
        bad.modulus = vec![0, 0, 0, 1];
        assert!(field_from_descriptor(&bad).is_err());
        let mut bad = f.descriptor();
        bad.alpha = 1;
        assert!(field_from_descriptor(&bad).is_err());
    }
}
