//! Finite fields GF(p^k) in a power basis.
//!
//! An element is stored as the integer `c_0 + c_1 p + ... + c_{k-1} p^{k-1}` where
//! `c_i` are its coordinates with respect to `1, t, ..., t^{k-1}` and `t` is the class of
//! `x` modulo the defining polynomial. All arithmetic goes through a [`Field`] handle.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Largest field order for which log/antilog tables are built.
const TABLE_LIMIT: u64 = 1 << 20;
/// Largest field order for which a full addition table is built.
const ADD_TABLE_LIMIT: u64 = 1 << 10;
/// Largest field order accepted at all.
const ORDER_LIMIT: u64 = 1 << 62;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub(crate) u64);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// Integer encoding of the coordinate vector (base `p`, low degree first).
    pub fn index(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
}

struct FieldData {
    p: u64,
    k: usize,
    q: u64,
    modulus: Vec<u64>,
    tables: Option<Tables>,
}

/// A finite field GF(p^k) given by a monic irreducible modulus over GF(p).
///
/// Cheap to clone. Two handles compare equal iff `(p, k, modulus)` agree.
#[derive(Clone)]
pub struct Field(Arc<FieldData>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.header())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
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

fn checked_order(p: u64, k: usize) -> Result<u64> {
    let mut q: u64 = 1;
    for _ in 0..k {
        q = q
            .checked_mul(p)
            .filter(|&q| q <= ORDER_LIMIT)
            .ok_or(Error::FieldTooLarge { p, k })?;
    }
    Ok(q)
}

impl Field {
    /// The prime field GF(p), presented as GF(p)[x]/(x).
    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1, vec![0, 1])
    }

    /// Builds GF(p^k) from a monic modulus given low degree first (length `k + 1`).
    pub fn new(p: u64, k: usize, modulus: Vec<u64>) -> Result<Field> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::BadModulus("extension degree must be at least 1".into()));
        }
        let q = checked_order(p, k)?;
        if modulus.len() != k + 1 || modulus[k] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadModulus(format!(
                "expected {} coefficients in [0,{p}) with leading 1",
                k + 1
            )));
        }
        if k > 1 {
            let base = Field::prime(p)?;
            let f = Poly::new(modulus.iter().map(|&c| Elem(c)).collect());
            if !f.is_irreducible(&base) {
                return Err(Error::BadModulus("modulus is reducible".into()));
            }
        }
        let mut data = FieldData { p, k, q, modulus, tables: None };
        if k > 1 && q <= TABLE_LIMIT {
            data.tables = Some(build_tables(&data));
        }
        Ok(Field(Arc::new(data)))
    }

    /// GF(p^k) with the default modulus: the monic irreducible polynomial of degree `k`
    /// whose coefficient vector, read from the highest non-leading coefficient down, is
    /// lexicographically smallest.
    pub fn default_for(p: u64, k: usize) -> Result<Field> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::NotPrime(p));
        }
        if k == 1 {
            return Field::prime(p);
        }
        let q = checked_order(p, k)?;
        let base = Field::prime(p)?;
        for idx in 0..q {
            let mut coeffs = Vec::with_capacity(k + 1);
            let mut r = idx;
            for _ in 0..k {
                coeffs.push(r % p);
                r /= p;
            }
            if coeffs[0] == 0 {
                continue;
            }
            coeffs.push(1);
            let f = Poly::new(coeffs.iter().map(|&c| Elem(c)).collect());
            if f.is_irreducible(&base) {
                return Field::new(p, k, coeffs);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn k(&self) -> usize {
        self.0.k
    }

    /// Field order `p^k`.
    pub fn order(&self) -> u64 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn header(&self) -> String {
        crate::format::field_header(self)
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// The class of `x` modulo the defining polynomial.
    pub fn generator(&self) -> Elem {
        if self.0.k == 1 {
            self.from_int(-(self.0.modulus[0] as i64))
        } else {
            Elem(self.0.p)
        }
    }

    /// Image of an integer under `Z -> GF(p)`.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.0.p as i64) as u64)
    }

    pub fn from_coords(&self, coords: &[u64]) -> Result<Elem> {
        if coords.len() > self.0.k || coords.iter().any(|&c| c >= self.0.p) {
            return Err(Error::Parse(format!(
                "element needs at most {} coordinates in [0,{})",
                self.0.k, self.0.p
            )));
        }
        let mut v = 0u64;
        for &c in coords.iter().rev() {
            v = v * self.0.p + c;
        }
        Ok(Elem(v))
    }

    pub fn coords(&self, a: Elem) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.0.k);
        let mut r = a.0;
        for _ in 0..self.0.k {
            out.push(r % self.0.p);
            r /= self.0.p;
        }
        out
    }

    /// Whether `a` lies in the prime subfield.
    pub fn in_prime_field(&self, a: Elem) -> bool {
        a.0 < self.0.p
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(Elem)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.gen_range(0..self.0.q))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.gen_range(1..self.0.q))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let d = &*self.0;
        if d.k == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= d.p { s - d.p } else { s });
        }
        if let Some(Tables { add: Some(add), .. }) = &d.tables {
            return Elem(add[(a.0 * d.q + b.0) as usize] as u64);
        }
        self.add_digits(a, b)
    }

    fn add_digits(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 || y > 0 {
            let s = (x % p + y % p) % p;
            out += s * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if self.0.k == 1 {
            return Elem(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut x = a.0;
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 {
            let c = x % p;
            out += ((p - c) % p) * place;
            x /= p;
            place = place.wrapping_mul(p);
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        if self.0.k == 1 {
            let p = self.0.p;
            return Elem(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + p - b.0 });
        }
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let d = &*self.0;
        if d.k == 1 {
            return Elem(((a.0 as u128 * b.0 as u128) % d.p as u128) as u64);
        }
        if let Some(t) = &d.tables {
            let s = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
            return Elem(t.exp[s] as u64);
        }
        mul_slow(d, a, b)
    }

    /// `a * b + c`
    #[inline]
    pub fn mul_add(&self, a: Elem, b: Elem, c: Elem) -> Elem {
        self.add(self.mul(a, b), c)
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let d = &*self.0;
        if let Some(t) = &d.tables {
            let l = t.log[a.0 as usize] as u128 * (e % (d.q - 1)) as u128 % (d.q - 1) as u128;
            return Elem(t.exp[l as usize] as u64);
        }
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::Singular);
        }
        let d = &*self.0;
        if let Some(t) = &d.tables {
            let l = (d.q - 1 - t.log[a.0 as usize] as u64) % (d.q - 1);
            return Ok(Elem(t.exp[l as usize] as u64));
        }
        Ok(self.pow(a, d.q - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// The absolute Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.0.p)
    }

    /// `a -> a^(p^e)`.
    pub fn frobenius_iter(&self, a: Elem, e: u32) -> Elem {
        let e = e as usize % self.0.k;
        (0..e).fold(a, |x, _| self.frobenius(x))
    }
}

fn mul_slow(d: &FieldData, a: Elem, b: Elem) -> Elem {
    let p = d.p as u128;
    let k = d.k;
    let digits = |mut x: u64| {
        let mut v = vec![0u128; k];
        for c in v.iter_mut() {
            *c = (x % d.p) as u128;
            x /= d.p;
        }
        v
    };
    let (x, y) = (digits(a.0), digits(b.0));
    let mut prod = vec![0u128; 2 * k - 1];
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        for (j, &yj) in y.iter().enumerate() {
            prod[i + j] = (prod[i + j] + xi * yj) % p;
        }
    }
    for top in (k..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (i, &m) in d.modulus[..k].iter().enumerate() {
            let idx = top - k + i;
            prod[idx] = (prod[idx] + (p - c) * m as u128) % p;
        }
    }
    let mut v = 0u64;
    for &c in prod[..k].iter().rev() {
        v = v * d.p + c as u64;
    }
    Elem(v)
}

fn build_tables(d: &FieldData) -> Tables {
    let q = d.q;
    let n = q - 1;
    let factors = prime_factors(n);
    let pow_slow = |a: Elem, mut e: u64| {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_slow(d, acc, base);
            }
            base = mul_slow(d, base, base);
            e >>= 1;
        }
        acc
    };
    let generator = (2..q)
        .map(Elem)
        .find(|&g| factors.iter().all(|&r| pow_slow(g, n / r) != Elem::ONE))
        .unwrap_or(Elem::ONE);
    let mut exp = vec![0u32; 2 * n as usize];
    let mut log = vec![0u32; q as usize];
    let mut x = Elem::ONE;
    for i in 0..n as usize {
        exp[i] = x.0 as u32;
        exp[i + n as usize] = x.0 as u32;
        log[x.0 as usize] = i as u32;
        x = mul_slow(d, x, generator);
    }
    let add = (q <= ADD_TABLE_LIMIT).then(|| {
        let probe = FieldData { p: d.p, k: d.k, q, modulus: d.modulus.clone(), tables: None };
        let f = Field(Arc::new(probe));
        let mut t = vec![0u32; (q * q) as usize];
        for a in 0..q {
            for b in 0..q {
                t[(a * q + b) as usize] = f.add_digits(Elem(a), Elem(b)).0 as u32;
            }
        }
        t
    });
    Tables { exp, log, add }
}

/// A ring embedding `K -> L` of finite fields, determined by the image of the generator.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    basis_images: Vec<Elem>,
}

impl Embedding {
    pub fn identity(field: &Field) -> Embedding {
        let t = field.generator();
        let mut basis_images = Vec::with_capacity(field.k());
        let mut x = Elem::ONE;
        for _ in 0..field.k() {
            basis_images.push(x);
            x = field.mul(x, t);
        }
        Embedding { source: field.clone(), target: field.clone(), basis_images }
    }

    /// The embedding sending the generator of `source` to `image` (which must be a root of
    /// the source modulus in `target`).
    pub fn from_generator_image(source: &Field, target: &Field, image: Elem) -> Embedding {
        let mut basis_images = Vec::with_capacity(source.k());
        let mut x = Elem::ONE;
        for _ in 0..source.k() {
            basis_images.push(x);
            x = target.mul(x, image);
        }
        Embedding { source: source.clone(), target: target.clone(), basis_images }
    }

    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn apply(&self, a: Elem) -> Elem {
        if self.source.k() == 1 {
            return self.target.from_int(a.0 as i64);
        }
        let tgt = &self.target;
        self.source
            .coords(a)
            .iter()
            .zip(&self.basis_images)
            .fold(Elem::ZERO, |acc, (&c, &b)| tgt.add(acc, tgt.mul(tgt.from_int(c as i64), b)))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Embedding) -> Embedding {
        let basis_images = self.basis_images.iter().map(|&b| next.apply(b)).collect();
        Embedding { source: self.source.clone(), target: next.target.clone(), basis_images }
    }
}

/// Adjoins a root of the irreducible `g` (coefficients in `field`).
///
/// Returns the extension field (with its default modulus over GF(p)), the embedding of
/// `field` into it, and the smallest root of `g` in the extension.
pub fn extend_field(field: &Field, g: &Poly, seed: u64) -> Result<(Field, Embedding, Elem)> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !g.is_irreducible(field) {
        return Err(Error::Reducible);
    }
    let r = g.degree().unwrap_or(0);
    if r == 1 {
        let root = field.neg(field.div(g.coeff(0), g.coeff(1))?);
        return Ok((field.clone(), Embedding::identity(field), root));
    }
    let big = Field::default_for(field.p(), field.k() * r)?;
    let embedding = if field.k() == 1 {
        Embedding::from_generator_image(field, &big, big.from_int(-(field.modulus()[0] as i64)))
    } else {
        let m = Poly::new(field.modulus().iter().map(|&c| big.from_int(c as i64)).collect());
        let root = *m.roots(&big, seed)?.first().ok_or(Error::Reducible)?;
        Embedding::from_generator_image(field, &big, root)
    };
    let g_big = g.map(|c| embedding.apply(c));
    let root = *g_big.roots(&big, seed)?.first().ok_or(Error::Reducible)?;
    Ok((big, embedding, root))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pow_by_repeated_mul(f: &Field, a: Elem, e: u64) -> Elem {
        (0..e).fold(Elem::ONE, |acc, _| f.mul(acc, a))
    }

    #[test]
    fn gf9_frobenius_of_generator() {
        let f = Field::default_for(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        let t = f.generator();
        let expected = pow_by_repeated_mul(&f, t, 3);
        assert_eq!(f.frobenius(t), expected);
        // t^2 = -1, so t^3 = -t
        assert_eq!(expected, f.neg(t));
    }

    #[test]
    fn default_modulus_gf27() {
        let f = Field::default_for(3, 3).unwrap();
        assert_eq!(f.modulus(), &[1, 2, 0, 1]);
    }

    #[test]
    fn prime_field_frobenius_is_identity() {
        let f = Field::prime(2).unwrap();
        for a in f.elements() {
            assert_eq!(f.frobenius(a), a);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(Field::prime(4).unwrap_err(), Error::NotPrime(4));
        assert!(Field::new(3, 2, vec![2, 0, 1]).is_err()); // x^2 - 1
        assert!(Field::new(3, 2, vec![1, 0, 2]).is_err()); // not monic
    }

    #[test]
    fn exhaustive_axioms_small_fields() {
        for (p, k) in [(2, 1), (2, 3), (3, 2), (5, 1), (3, 4), (2, 4)] {
            let f = Field::default_for(p, k).unwrap();
            let elems: Vec<_> = f.elements().collect();
            for &a in &elems {
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                }
                assert_eq!(f.frobenius_iter(a, k as u32), a);
                for &b in elems.iter().step_by(3) {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in elems.iter().step_by(7) {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn slow_path_matches_tables() {
        // GF(2^21) is above the table limit; compare against the same field's
        // own slow multiplication through pow/inverse identities.
        let f = Field::default_for(2, 21).unwrap();
        let t = f.generator();
        let x = f.add(f.pow(t, 1000), t);
        assert_eq!(f.mul(x, f.inv(x).unwrap()), Elem::ONE);
        assert_eq!(f.frobenius_iter(x, 21), x);
    }

    #[test]
    fn extension_embeds_and_adjoins_root() {
        let f2 = Field::prime(2).unwrap();
        let g = Poly::new(vec![Elem(1), Elem(1), Elem(1)]);
        let (f4, emb, root) = extend_field(&f2, &g, 0).unwrap();
        assert_eq!(f4.order(), 4);
        assert_eq!(g.map(|c| emb.apply(c)).eval(&f4, root), Elem::ZERO);

        let f9 = Field::default_for(3, 2).unwrap();
        // x^3 - x - 1 is irreducible over GF(3), hence over GF(9)
        let g = Poly::new(vec![f9.from_int(-1), f9.from_int(-1), Elem::ZERO, Elem::ONE]);
        let (f729, emb, root) = extend_field(&f9, &g, 1).unwrap();
        assert_eq!(f729.k(), 6);
        assert_eq!(g.map(|c| emb.apply(c)).eval(&f729, root), Elem::ZERO);
        for a in f9.elements() {
            assert_eq!(emb.apply(f9.frobenius(a)), f729.frobenius(emb.apply(a)));
            for b in f9.elements() {
                assert_eq!(emb.apply(f9.mul(a, b)), f729.mul(emb.apply(a), emb.apply(b)));
                assert_eq!(emb.apply(f9.add(a, b)), f729.add(emb.apply(a), emb.apply(b)));
            }
        }
        let images: std::collections::HashSet<_> = f9.elements().map(|a| emb.apply(a)).collect();
        assert_eq!(images.len(), 9);
    }

    #[test]
    fn linear_extension_is_identity() {
        let f = Field::default_for(5, 2).unwrap();
        let c = f.from_coords(&[2, 3]).unwrap();
        let g = Poly::new(vec![f.neg(c), Elem::ONE]);
        let (same, emb, root) = extend_field(&f, &g, 0).unwrap();
        assert_eq!(same, f);
        assert_eq!(root, c);
        assert_eq!(emb.apply(c), c);
    }

    #[test]
    fn reducible_extension_rejected() {
        let f = Field::prime(3).unwrap();
        let g = Poly::new(vec![f.from_int(-1), Elem::ZERO, Elem::ONE]);
        assert_eq!(extend_field(&f, &g, 0).unwrap_err(), Error::Reducible);
    }
}
