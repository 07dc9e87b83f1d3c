//! Univariate polynomials over a finite field, with factorization into irreducibles.
//!
//! Factorization runs squarefree decomposition, then distinct-degree splitting, then
//! Cantor-Zassenhaus equal-degree splitting driven by a seeded ChaCha generator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// Coefficients low degree first; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { coeffs: vec![Elem::ONE] }
    }

    pub fn constant(c: Elem) -> Poly {
        Poly::new(vec![c])
    }

    /// `x`
    pub fn x() -> Poly {
        Poly { coeffs: vec![Elem::ZERO, Elem::ONE] }
    }

    /// `x - c`
    pub fn linear(f: &Field, c: Elem) -> Poly {
        Poly { coeffs: vec![f.neg(c), Elem::ONE] }
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [Elem::ONE]
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn map(&self, mut g: impl FnMut(Elem) -> Elem) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| g(c)).collect())
    }

    pub fn eval(&self, f: &Field, x: Elem) -> Elem {
        self.coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, c: Elem, f: &Field) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, f: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, mut e: u64, f: &Field) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            base = base.mul(&base, f);
            e >>= 1;
        }
        acc
    }

    pub fn monic(&self, f: &Field) -> Poly {
        match f.inv(self.leading()) {
            Ok(inv) => self.scale(inv, f),
            Err(_) => Poly::zero(),
        }
    }

    pub fn div_rem(&self, divisor: &Poly, f: &Field) -> Result<(Poly, Poly)> {
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let inv_lead = f.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Elem::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], inv_lead);
            if c.is_zero() {
                continue;
            }
            quot[i - dd] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = f.sub(rem[idx], f.mul(c, b));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn rem(&self, divisor: &Poly, f: &Field) -> Result<Poly> {
        Ok(self.div_rem(divisor, f)?.1)
    }

    /// Exact quotient; errors when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly, f: &Field) -> Result<Poly> {
        let (q, r) = self.div_rem(divisor, f)?;
        if !r.is_zero() {
            return Err(Error::Dimension("inexact polynomial division".into()));
        }
        Ok(q)
    }

    /// Monic gcd (zero when both inputs are zero).
    pub fn gcd(&self, other: &Poly, f: &Field) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Poly, f: &Field) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1, f).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1, f), f);
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1, f), f);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.leading()).expect("nonzero leading coefficient");
        (r0.scale(inv, f), s0.scale(inv, f), t0.scale(inv, f))
    }

    pub fn derivative(&self, f: &Field) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
                .collect(),
        )
    }

    pub fn mul_mod(&self, other: &Poly, modulus: &Poly, f: &Field) -> Poly {
        self.mul(other, f).rem(modulus, f).expect("nonzero modulus")
    }

    pub fn pow_mod(&self, mut e: u64, modulus: &Poly, f: &Field) -> Poly {
        let mut base = self.rem(modulus, f).expect("nonzero modulus");
        let mut acc = Poly::one().rem(modulus, f).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, modulus, f);
            }
            base = base.mul_mod(&base, modulus, f);
            e >>= 1;
        }
        acc
    }

    /// `self^q mod modulus` where `q` is the field order.
    fn frobenius_mod(&self, modulus: &Poly, f: &Field) -> Poly {
        self.pow_mod(f.order(), modulus, f)
    }

    /// Rabin's test.
    pub fn is_irreducible(&self, f: &Field) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let m = self.monic(f);
        let x = Poly::x();
        let mut powers = Vec::with_capacity(n + 1);
        let mut h = x.rem(&m, f).expect("nonzero");
        powers.push(h.clone());
        for _ in 0..n {
            h = h.frobenius_mod(&m, f);
            powers.push(h.clone());
        }
        // powers[i] = x^(q^i) mod m
        if powers[n] != x.rem(&m, f).expect("nonzero") {
            return false;
        }
        let mut r = 2;
        let mut rest = n;
        while rest > 1 {
            if rest % r == 0 {
                let g = powers[n / r].sub(&x, f).gcd(&m, f);
                if !g.is_one() {
                    return false;
                }
                while rest % r == 0 {
                    rest /= r;
                }
            }
            r += 1;
        }
        true
    }

    /// Complete factorization into monic irreducibles with multiplicities, sorted by
    /// (degree, coefficients). The leading coefficient is dropped.
    pub fn factor(&self, f: &Field, seed: u64) -> Result<Vec<(Poly, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for (sqf, mult) in squarefree_decomposition(&self.monic(f), f) {
            for (part, d) in distinct_degree(&sqf, f) {
                let mut pieces = Vec::new();
                equal_degree(&part, d, f, &mut rng, &mut pieces);
                out.extend(pieces.into_iter().map(|g| (g, mult)));
            }
        }
        out.sort_by(|a, b| {
            (a.0.degree(), &a.0.coeffs, a.1).cmp(&(b.0.degree(), &b.0.coeffs, b.1))
        });
        // merge equal factors coming from different squarefree layers
        let mut merged: Vec<(Poly, usize)> = Vec::new();
        for (g, m) in out {
            match merged.last_mut() {
                Some((h, n)) if *h == g => *n += m,
                _ => merged.push((g, m)),
            }
        }
        Ok(merged)
    }

    /// Distinct roots in `f`, ascending by element index.
    pub fn roots(&self, f: &Field, seed: u64) -> Result<Vec<Elem>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let m = self.monic(f);
        let x = Poly::x();
        let linear_part = x.frobenius_mod(&m, f).sub(&x, f).gcd(&m, f);
        if linear_part.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pieces = Vec::new();
        equal_degree(&linear_part, 1, f, &mut rng, &mut pieces);
        let mut roots: Vec<Elem> = pieces.iter().map(|g| f.neg(g.coeff(0))).collect();
        roots.sort();
        Ok(roots)
    }
}

fn pth_root(a: &Poly, f: &Field) -> Poly {
    let p = f.p() as usize;
    // a^(1/p) coefficientwise: c^(p^(k-1)) since Frobenius has order k
    let k = f.k() as u32;
    Poly::new(
        a.coeffs
            .iter()
            .step_by(p)
            .map(|&c| f.frobenius_iter(c, k - 1))
            .collect(),
    )
}

fn squarefree_decomposition(a: &Poly, f: &Field) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if a.degree().unwrap_or(0) == 0 {
        return out;
    }
    let d = a.derivative(f);
    if d.is_zero() {
        let root = pth_root(a, f);
        let p = f.p() as usize;
        return squarefree_decomposition(&root, f)
            .into_iter()
            .map(|(g, m)| (g, m * p))
            .collect();
    }
    let mut c = a.gcd(&d, f);
    let mut w = a.div_exact(&c, f).expect("gcd divides");
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(&c, f);
        let z = w.div_exact(&y, f).expect("gcd divides");
        if z.degree().unwrap_or(0) > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w, f).expect("gcd divides");
    }
    if c.degree().unwrap_or(0) > 0 {
        let root = pth_root(&c, f);
        let p = f.p() as usize;
        out.extend(squarefree_decomposition(&root, f).into_iter().map(|(g, m)| (g, m * p)));
    }
    out
}

fn distinct_degree(a: &Poly, f: &Field) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest = a.clone();
    let x = Poly::x();
    let mut h = x.clone();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.frobenius_mod(&rest, f);
        let g = h.sub(&x, f).gcd(&rest, f);
        if !g.is_one() {
            rest = rest.div_exact(&g, f).expect("gcd divides");
            h = h.rem(&rest, f).expect("nonzero");
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(deg) = rest.degree().filter(|&d| d > 0) {
        out.push((rest, deg));
    }
    out
}

fn equal_degree(a: &Poly, d: usize, f: &Field, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    let n = a.degree().unwrap_or(0);
    if n == 0 {
        return;
    }
    if n == d {
        out.push(a.monic(f));
        return;
    }
    loop {
        let r = Poly::new((0..n).map(|_| f.random(rng)).collect());
        if r.degree().unwrap_or(0) == 0 {
            continue;
        }
        let s = if f.p() == 2 {
            // absolute trace of the field GF(2^(k d)) represented by r
            let mut t = r.clone();
            let mut acc = r.clone();
            for _ in 1..f.k() * d {
                t = t.mul_mod(&t, a, f);
                acc = acc.add(&t, f);
            }
            acc
        } else {
            // r^((q^d - 1)/2) = (r^(1 + q + ... + q^(d-1)))^((q - 1)/2)
            let mut t = r.clone();
            let mut norm = r.clone();
            for _ in 1..d {
                t = t.frobenius_mod(a, f);
                norm = norm.mul_mod(&t, a, f);
            }
            norm.pow_mod((f.order() - 1) / 2, a, f).sub(&Poly::one(), f)
        };
        let g = s.gcd(a, f);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let h = a.div_exact(&g, f).expect("gcd divides");
            equal_degree(&g, d, f, rng, out);
            equal_degree(&h, d, f, rng, out);
            return;
        }
    }
}
