//! Exact arithmetic in finite fields GF(p^k) with discrete logarithms.
//!
//! Fields are deterministic: the modulus is the lexicographically smallest
//! monic irreducible polynomial of its degree (coefficients compared from the
//! constant term up) and the generator is the lexicographically smallest
//! primitive element. Elements are encoded as integers `sum coeffs[i] * p^i`,
//! which is the encoding used by the orthogonal-array and file-format layers.
//!
//! Discrete logarithms are table-driven, so field orders are capped at 2^20.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported field order. Keeps the full exp/log tables small.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("NotPrime: {0} is not prime")]
    NotPrime(u64),
    #[error("DegreeZero: extension degree must be at least 1")]
    DegreeZero,
    #[error("FieldTooLarge: order {0} exceeds 2^20")]
    FieldTooLarge(u64),
    #[error("NotPrimePower: {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("FieldMismatch: elements belong to different fields")]
    FieldMismatch,
    #[error("DivisionByZero: inverse of the zero element")]
    DivisionByZero,
    #[error("DlogOfZero: discrete log of the zero element")]
    DlogOfZero,
}

#[derive(Debug)]
struct FieldInner {
    p: u64,
    k: usize,
    q: u64,
    /// Monic irreducible modulus, constant term first, length k+1.
    modulus: Vec<u64>,
    /// Encoding of the fixed primitive element.
    generator: u64,
    /// exp[e] = encoding of generator^e, length q-1.
    exp: Vec<u64>,
    /// log[enc] = e with generator^e = enc; u32::MAX marks the zero element.
    log: Vec<u32>,
}

const LOG_NONE: u32 = u32::MAX;

/// The field GF(p^k); cheap to clone.
#[derive(Clone)]
pub struct FiniteField {
    inner: Arc<FieldInner>,
}

/// An element of a [`FiniteField`], stored by its integer encoding.
#[derive(Clone)]
pub struct FieldElem {
    field: FiniteField,
    enc: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

/// Polynomial helpers over Z_p; coefficient vectors are constant-term first.
mod poly {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut r: Vec<u64> = a.to_vec();
        trim(&mut r);
        let mut bb: Vec<u64> = b.to_vec();
        trim(&mut bb);
        assert!(!bb.is_empty());
        let lead_inv = mod_inv(*bb.last().unwrap(), p);
        while r.len() >= bb.len() {
            let f = (*r.last().unwrap() * lead_inv) % p;
            let off = r.len() - bb.len();
            for (i, &bc) in bb.iter().enumerate() {
                let sub = (f * bc) % p;
                r[off + i] = (r[off + i] + p - sub) % p;
            }
            trim(&mut r);
            if r.is_empty() {
                break;
            }
        }
        r
    }

    pub fn mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
        let k = modulus.len() - 1;
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        // reduce by the monic modulus
        for d in (k..prod.len()).rev() {
            let c = prod[d];
            if c != 0 {
                prod[d] = 0;
                for i in 0..k {
                    let sub = (c * modulus[i]) % p;
                    prod[d - k + i] = (prod[d - k + i] + p - sub) % p;
                }
            }
        }
        prod.truncate(k);
        prod.resize(k, 0);
        prod
    }

    fn mod_inv(a: u64, p: u64) -> u64 {
        // p prime, a nonzero
        mod_pow(a, p - 2, p)
    }

    fn mod_pow(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1u64;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * a % p;
            }
            a = a * a % p;
            e >>= 1;
        }
        r
    }
}

impl FieldInner {
    fn coeffs(&self, mut enc: u64) -> Vec<u64> {
        let mut c = Vec::with_capacity(self.k);
        for _ in 0..self.k {
            c.push(enc % self.p);
            enc /= self.p;
        }
        c
    }

    fn encode(&self, c: &[u64]) -> u64 {
        let mut e = 0;
        for &x in c.iter().rev() {
            e = e * self.p + x;
        }
        e
    }

    fn mul_enc(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let la = self.log[a as usize] as u64;
        let lb = self.log[b as usize] as u64;
        self.exp[((la + lb) % (self.q - 1)) as usize]
    }

    fn add_enc(&self, a: u64, b: u64) -> u64 {
        let (ca, cb) = (self.coeffs(a), self.coeffs(b));
        let sum: Vec<u64> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    fn neg_enc(&self, a: u64) -> u64 {
        let c: Vec<u64> = self.coeffs(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.encode(&c)
    }
}

/// Construct GF(p^k). Deterministic: repeated calls yield identical fields.
pub fn field_new(p: u64, k: usize) -> Result<FiniteField, GfError> {
    if k < 1 {
        return Err(GfError::DegreeZero);
    }
    if !is_prime(p) {
        return Err(GfError::NotPrime(p));
    }
    let mut q: u64 = 1;
    for _ in 0..k {
        q = q.saturating_mul(p);
        if q > MAX_FIELD_ORDER {
            return Err(GfError::FieldTooLarge(q));
        }
    }

    let modulus = find_modulus(p, k);
    let generator = find_generator(p, k, q, &modulus);

    let mut exp = vec![0u64; (q - 1) as usize];
    let mut log = vec![LOG_NONE; q as usize];
    let tmp = FieldInner {
        p,
        k,
        q,
        modulus: modulus.clone(),
        generator,
        exp: Vec::new(),
        log: Vec::new(),
    };
    let gen_coeffs = tmp.coeffs(generator);
    let mut cur = vec![0u64; k];
    cur[0] = 1;
    for e in 0..(q - 1) as usize {
        let enc = tmp.encode(&cur);
        exp[e] = enc;
        debug_assert_eq!(log[enc as usize], LOG_NONE, "generator order too small");
        log[enc as usize] = e as u32;
        cur = poly::mul_mod(&cur, &gen_coeffs, &modulus, p);
    }
    Ok(FiniteField {
        inner: Arc::new(FieldInner {
            p,
            k,
            q,
            modulus,
            generator,
            exp,
            log,
        }),
    })
}

/// Construct the field of a given prime-power order.
pub fn field_of_order(q: u64) -> Result<FiniteField, GfError> {
    if q < 2 {
        return Err(GfError::NotPrimePower(q));
    }
    let fac = prime_factors(q);
    if fac.len() != 1 {
        return Err(GfError::NotPrimePower(q));
    }
    let p = fac[0];
    let mut k = 0;
    let mut t = q;
    while t > 1 {
        t /= p;
        k += 1;
    }
    if p.pow(k as u32) != q {
        return Err(GfError::NotPrimePower(q));
    }
    field_new(p, k)
}

/// True when q is a prime power (the weights the constructions accept).
pub fn is_prime_power(q: u64) -> bool {
    q >= 2 && prime_factors(q).len() == 1
}

fn find_modulus(p: u64, k: usize) -> Vec<u64> {
    if k == 1 {
        return vec![0, 1]; // the polynomial x
    }
    // Enumerate monic degree-k polynomials in lexicographic order of the
    // coefficient vector (c_0 compared first).
    let total = p.pow(k as u32);
    for idx in 0..total {
        let mut c = vec![0u64; k + 1];
        let mut t = idx;
        for i in (0..k).rev() {
            c[i] = t % p;
            t /= p;
        }
        c[k] = 1;
        if is_irreducible(&c, p, k) {
            return c;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

fn is_irreducible(m: &[u64], p: u64, k: usize) -> bool {
    // Trial division by every monic polynomial of degree 1..=k/2.
    for d in 1..=k / 2 {
        let total = p.pow(d as u32);
        for idx in 0..total {
            let mut div = vec![0u64; d + 1];
            let mut t = idx;
            for c in div.iter_mut().take(d) {
                *c = t % p;
                t /= p;
            }
            div[d] = 1;
            if poly::rem(m, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn find_generator(p: u64, k: usize, q: u64, modulus: &[u64]) -> u64 {
    let tmp = FieldInner {
        p,
        k,
        q,
        modulus: modulus.to_vec(),
        generator: 0,
        exp: Vec::new(),
        log: Vec::new(),
    };
    let factors = prime_factors(q - 1);
    // Candidates in lexicographic order of coefficient vectors (c_0 first).
    let mut candidates: Vec<u64> = (0..q).collect();
    candidates.sort_by_key(|&e| tmp.coeffs(e));
    for &cand in &candidates {
        if cand == 0 {
            continue;
        }
        let c = tmp.coeffs(cand);
        if factors
            .iter()
            .all(|&r| !is_one(&poly_pow(&c, (q - 1) / r, modulus, p)))
        {
            return cand;
        }
    }
    unreachable!("the multiplicative group of a finite field is cyclic")
}

fn poly_pow(a: &[u64], mut e: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let k = modulus.len() - 1;
    let mut base = a.to_vec();
    let mut r = vec![0u64; k];
    r[0] = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = poly::mul_mod(&r, &base, modulus, p);
        }
        base = poly::mul_mod(&base, &base, modulus, p);
        e >>= 1;
    }
    r
}

fn is_one(c: &[u64]) -> bool {
    c.first() == Some(&1) && c[1..].iter().all(|&x| x == 0)
}

impl FiniteField {
    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn k(&self) -> usize {
        self.inner.k
    }

    pub fn order(&self) -> u64 {
        self.inner.q
    }

    /// Modulus coefficients, constant term first (length k+1, monic).
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn zero(&self) -> FieldElem {
        self.element(0)
    }

    pub fn one(&self) -> FieldElem {
        self.element(1)
    }

    pub fn generator(&self) -> FieldElem {
        self.element(self.inner.generator)
    }

    /// The element with the given integer encoding (must be < order).
    pub fn element(&self, enc: u64) -> FieldElem {
        assert!(enc < self.inner.q, "encoding {enc} out of range");
        FieldElem {
            field: self.clone(),
            enc,
        }
    }

    /// All field elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.inner.q).map(move |e| self.element(e))
    }

    fn same_field(&self, other: &FiniteField) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.k == other.inner.k
                && self.inner.modulus == other.inner.modulus)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other)
    }
}
impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.inner.p, self.inner.k)
    }
}

impl FieldElem {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    /// Integer encoding sum coeffs[i] * p^i.
    pub fn encoding(&self) -> u64 {
        self.enc
    }

    /// Coefficient vector, constant term first, length k.
    pub fn coeffs(&self) -> Vec<u64> {
        self.field.inner.coeffs(self.enc)
    }

    pub fn is_zero(&self) -> bool {
        self.enc == 0
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.check(other)?;
        Ok(self.field.element(self.field.inner.add_enc(self.enc, other.enc)))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.check(other)?;
        let n = self.field.inner.neg_enc(other.enc);
        Ok(self.field.element(self.field.inner.add_enc(self.enc, n)))
    }

    pub fn neg(&self) -> FieldElem {
        self.field.element(self.field.inner.neg_enc(self.enc))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.check(other)?;
        Ok(self.field.element(self.field.inner.mul_enc(self.enc, other.enc)))
    }

    pub fn inv(&self) -> Result<FieldElem, GfError> {
        if self.enc == 0 {
            return Err(GfError::DivisionByZero);
        }
        let inner = &self.field.inner;
        let l = inner.log[self.enc as usize] as u64;
        let e = (inner.q - 1 - l) % (inner.q - 1);
        Ok(self.field.element(inner.exp[e as usize]))
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        if self.enc == 0 {
            return if e == 0 { self.field.one() } else { self.field.zero() };
        }
        let inner = &self.field.inner;
        let l = inner.log[self.enc as usize] as u64;
        // exponent arithmetic mod q-1; e itself may exceed it
        let le = (l % (inner.q - 1)) as u128 * (e % (inner.q - 1)) as u128;
        self.field
            .element(inner.exp[(le % (inner.q - 1) as u128) as usize])
    }

    /// Exponent e with generator^e = self, in [0, q-1).
    pub fn dlog(&self) -> Result<u64, GfError> {
        if self.enc == 0 {
            return Err(GfError::DlogOfZero);
        }
        Ok(self.field.inner.log[self.enc as usize] as u64)
    }

    fn check(&self, other: &FieldElem) -> Result<(), GfError> {
        if self.field.same_field(&other.field) {
            Ok(())
        } else {
            Err(GfError::FieldMismatch)
        }
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.enc == other.enc && self.field.same_field(&other.field)
    }
}
impl Eq for FieldElem {}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {:?}", self.enc, self.field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf5_generator_is_two() {
        let f = field_new(5, 1).unwrap();
        assert_eq!(f.generator().encoding(), 2);
        assert_eq!(f.modulus(), &[0, 1]);
    }

    #[test]
    fn gf4_modulus_and_generator() {
        let f = field_new(2, 2).unwrap();
        // x^2 + x + 1, generator x
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(f.generator().coeffs(), vec![0, 1]);
        // x has order 3
        let x = f.generator();
        assert_eq!(x.pow(3), f.one());
        assert_ne!(x.pow(1), f.one());
    }

    #[test]
    fn non_prime_rejected() {
        assert_eq!(field_new(4, 1).unwrap_err(), GfError::NotPrime(4));
        assert_eq!(field_new(5, 0).unwrap_err(), GfError::DegreeZero);
    }

    #[test]
    fn gf5_products_and_inverse() {
        let f = field_new(5, 1).unwrap();
        let (a, b) = (f.element(2), f.element(3));
        assert_eq!(a.mul(&b).unwrap(), f.one());
        assert_eq!(f.element(3).inv().unwrap(), f.element(2));
    }

    #[test]
    fn gf4_square_of_x() {
        let f = field_new(2, 2).unwrap();
        let x = f.element(2);
        // x^2 = x + 1 under x^2+x+1
        assert_eq!(x.mul(&x).unwrap(), f.element(3));
    }

    #[test]
    fn dlog_examples() {
        let f = field_new(5, 1).unwrap();
        assert_eq!(f.one().dlog().unwrap(), 0);
        assert_eq!(f.element(4).dlog().unwrap(), 2);
        assert_eq!(f.zero().dlog().unwrap_err(), GfError::DlogOfZero);

        let f4 = field_new(2, 2).unwrap();
        assert_eq!(f4.element(3).dlog().unwrap(), 2); // x+1 = x^2
    }

    #[test]
    fn field_mismatch_detected() {
        let f5 = field_new(5, 1).unwrap();
        let f7 = field_new(7, 1).unwrap();
        let err = f5.element(1).add(&f7.element(1)).unwrap_err();
        assert_eq!(err, GfError::FieldMismatch);
    }

    #[test]
    fn of_order_accepts_prime_powers_only() {
        assert_eq!(field_of_order(9).unwrap().p(), 3);
        assert_eq!(field_of_order(8).unwrap().k(), 3);
        assert_eq!(field_of_order(6).unwrap_err(), GfError::NotPrimePower(6));
        assert_eq!(field_of_order(1).unwrap_err(), GfError::NotPrimePower(1));
    }

    fn prime_powers_up_to(limit: u64) -> Vec<u64> {
        (2..=limit).filter(|&q| is_prime_power(q)).collect()
    }

    #[test]
    fn dlog_roundtrip_exhaustive_small_orders() {
        for q in prime_powers_up_to(512) {
            let f = field_of_order(q).unwrap();
            let g = f.generator();
            for a in f.elements().skip(1) {
                let e = a.dlog().unwrap();
                assert_eq!(g.pow(e), a, "q={q} enc={}", a.encoding());
            }
        }
    }

    #[test]
    fn dlog_is_a_homomorphism() {
        for q in prime_powers_up_to(64) {
            let f = field_of_order(q).unwrap();
            for a in f.elements().skip(1) {
                for b in f.elements().skip(1) {
                    let lhs = a.mul(&b).unwrap().dlog().unwrap();
                    let rhs = (a.dlog().unwrap() + b.dlog().unwrap()) % (q - 1);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        for q in prime_powers_up_to(64) {
            let f = field_of_order(q).unwrap();
            let p = f.p();
            for a in f.elements() {
                for b in f.elements() {
                    let lhs = a.add(&b).unwrap().pow(p);
                    let rhs = a.pow(p).add(&b.pow(p)).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn construction_is_deterministic() {
        for q in [4u64, 8, 9, 25, 27, 49] {
            let a = field_of_order(q).unwrap();
            let b = field_of_order(q).unwrap();
            assert_eq!(a.modulus(), b.modulus());
            assert_eq!(a.generator().encoding(), b.generator().encoding());
        }
    }

    #[test]
    fn generator_order_is_full() {
        for q in prime_powers_up_to(128) {
            let f = field_of_order(q).unwrap();
            let g = f.generator();
            for r in prime_factors(q - 1) {
                assert_ne!(g.pow((q - 1) / r), f.one(), "q={q}");
            }
            assert_eq!(g.pow(q - 1), f.one());
        }
    }

    #[test]
    fn order_cap_enforced() {
        assert!(matches!(field_new(2, 21), Err(GfError::FieldTooLarge(_))));
    }
}
