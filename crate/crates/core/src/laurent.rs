//! Laurent polynomials in `z` and square matrices of them, used as transition data of
//! vector bundles on the projective line.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly::Poly;

/// Finite sum `sum c_e z^e` with nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Laurent {
    terms: BTreeMap<i64, Elem>,
}

impl Laurent {
    pub fn zero() -> Laurent {
        Laurent::default()
    }

    pub fn one() -> Laurent {
        Laurent::monomial(Elem::ONE, 0)
    }

    pub fn monomial(c: Elem, e: i64) -> Laurent {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Laurent { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Elem)>, f: &Field) -> Laurent {
        let mut out = Laurent::zero();
        for (e, c) in terms {
            out.add_term(e, c, f);
        }
        out
    }

    fn add_term(&mut self, e: i64, c: Elem, f: &Field) {
        if c.is_zero() {
            return;
        }
        let v = f.add(self.terms.get(&e).copied().unwrap_or(Elem::ZERO), c);
        if v.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Elem)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i64) -> Elem {
        self.terms.get(&e).copied().unwrap_or(Elem::ZERO)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `Some((c, e))` when `self = c z^e` with `c != 0`.
    pub fn as_monomial(&self) -> Option<(Elem, i64)> {
        (self.terms.len() == 1).then(|| {
            let (&e, &c) = self.terms.iter().next().expect("one term");
            (c, e)
        })
    }

    pub fn add(&self, other: &Laurent, f: &Field) -> Laurent {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c, f);
        }
        out
    }

    pub fn sub(&self, other: &Laurent, f: &Field) -> Laurent {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, f.neg(c), f);
        }
        out
    }

    pub fn mul(&self, other: &Laurent, f: &Field) -> Laurent {
        let mut out = Laurent::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(e1 + e2, f.mul(c1, c2), f);
            }
        }
        out
    }

    pub fn scale(&self, c: Elem, f: &Field) -> Laurent {
        Laurent::from_terms(self.terms().map(|(e, a)| (e, f.mul(a, c))), f)
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(&e, &c)| (e + k, c)).collect() }
    }

    /// `z -> z^p` combined with `c -> c^p`.
    pub fn frobenius_substitute(&self, f: &Field) -> Laurent {
        let p = f.p() as i64;
        Laurent { terms: self.terms.iter().map(|(&e, &c)| (e * p, f.frobenius(c))).collect() }
    }

    /// `(shift, poly)` with `self = z^shift * poly(z)` and `poly(0) != 0`.
    fn to_poly(&self) -> (i64, Poly) {
        let lo = self.min_exp().unwrap_or(0);
        let hi = self.max_exp().unwrap_or(0);
        let mut coeffs = vec![Elem::ZERO; (hi - lo + 1) as usize];
        for (e, c) in self.terms() {
            coeffs[(e - lo) as usize] = c;
        }
        (lo, Poly::new(coeffs))
    }

    fn from_poly(shift: i64, p: &Poly) -> Laurent {
        let terms = p
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (i as i64 + shift, c))
            .collect();
        Laurent { terms }
    }

    /// Exact division in `k[z, 1/z]`.
    pub fn div_exact(&self, other: &Laurent, f: &Field) -> Result<Laurent> {
        if other.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_zero() {
            return Ok(Laurent::zero());
        }
        let (s1, p1) = self.to_poly();
        let (s2, p2) = other.to_poly();
        let q = p1.div_exact(&p2, f)?;
        Ok(Laurent::from_poly(s1 - s2, &q))
    }
}

/// Square matrix with Laurent polynomial entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentMatrix {
    n: usize,
    entries: Vec<Laurent>,
}

impl LaurentMatrix {
    pub fn new(n: usize, entries: Vec<Laurent>) -> Result<LaurentMatrix> {
        if entries.len() != n * n {
            return Err(Error::Dimension(format!("expected {} entries", n * n)));
        }
        Ok(LaurentMatrix { n, entries })
    }

    pub fn identity(n: usize) -> LaurentMatrix {
        let mut m = LaurentMatrix { n, entries: vec![Laurent::zero(); n * n] };
        for i in 0..n {
            m.entries[i * n + i] = Laurent::one();
        }
        m
    }

    /// `diag(z^{e_0}, ..., z^{e_{n-1}})`
    pub fn diag_monomials(exps: &[i64]) -> LaurentMatrix {
        let n = exps.len();
        let mut m = LaurentMatrix { n, entries: vec![Laurent::zero(); n * n] };
        for (i, &e) in exps.iter().enumerate() {
            m.entries[i * n + i] = Laurent::monomial(Elem::ONE, e);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Laurent {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Laurent) {
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Laurent] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn mul(&self, other: &LaurentMatrix, f: &Field) -> LaurentMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = LaurentMatrix { n, entries: vec![Laurent::zero(); n * n] };
        for i in 0..n {
            for j in 0..n {
                let mut acc = Laurent::zero();
                for l in 0..n {
                    let a = self.get(i, l);
                    let b = other.get(l, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b, f), f);
                    }
                }
                out.entries[i * n + j] = acc;
            }
        }
        out
    }

    pub fn frobenius_substitute(&self, f: &Field) -> LaurentMatrix {
        LaurentMatrix { n: self.n, entries: self.entries.iter().map(|e| e.frobenius_substitute(f)).collect() }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self, f: &Field) -> Laurent {
        let n = self.n;
        if n == 0 {
            return Laurent::one();
        }
        let mut m = self.entries.clone();
        let mut sign_negative = false;
        let mut prev = Laurent::one();
        for k in 0..n - 1 {
            if m[k * n + k].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !m[r * n + k].is_zero()) else {
                    return Laurent::zero();
                };
                for j in 0..n {
                    m.swap(k * n + j, r * n + j);
                }
                sign_negative = !sign_negative;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let a = m[i * n + j].mul(&m[k * n + k], f);
                    let b = m[i * n + k].mul(&m[k * n + j], f);
                    m[i * n + j] = a.sub(&b, f).div_exact(&prev, f).expect("Bareiss division is exact");
                }
            }
            prev = m[k * n + k].clone();
        }
        let d = m[n * n - 1].clone();
        if sign_negative {
            d.scale(f.neg(Elem::ONE), f)
        } else {
            d
        }
    }
}

/// Element of `Hom(O(a), O(b))`: a binary form of degree `b - a` in `z_0, z_1`, stored as
/// `coeffs[i]` = coefficient of `z_0^i z_1^{b-a-i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SectionRep {
    pub a: i64,
    pub b: i64,
    pub coeffs: Vec<Elem>,
}

impl SectionRep {
    pub fn zero(a: i64, b: i64) -> SectionRep {
        SectionRep { a, b, coeffs: vec![Elem::ZERO; hom_dim(a, b)] }
    }

    /// Values `(at 0, at infinity)` in the standard trivializations of `O(a)` and `O(b)`.
    ///
    /// The trivialization of `O(l)` at `0 = (1:0)` divides by `z_0^l` and the one at
    /// `inf = (0:1)` divides by `z_1^l`. A map `s: O(a) -> O(b)` is therefore read at `0`
    /// as `s / z_0^{b-a}` evaluated at `z_1 = 0`, which keeps only the coefficient of
    /// `z_0^{b-a}`, and at `inf` as `s / z_1^{b-a}` at `z_0 = 0`, which keeps only the
    /// coefficient of `z_1^{b-a}`. So the pair is `(c_{b-a}, c_0)`.
    pub fn eval_pair(&self) -> Option<(Elem, Elem)> {
        let last = *self.coeffs.last()?;
        Some((last, self.coeffs[0]))
    }
}

pub fn hom_dim(a: i64, b: i64) -> usize {
    if b < a {
        0
    } else {
        (b - a + 1) as usize
    }
}

/// Monomial basis `z_0^i z_1^{b-a-i}` of `Hom(O(a), O(b))`, ordered by `i`.
pub fn hom_sections(a: i64, b: i64) -> Vec<SectionRep> {
    let d = hom_dim(a, b);
    (0..d)
        .map(|i| {
            let mut coeffs = vec![Elem::ZERO; d];
            coeffs[i] = Elem::ONE;
            SectionRep { a, b, coeffs }
        })
        .collect()
}

/// Transition function of `O(n)` from the chart around `0` to the chart around infinity:
/// the 1x1 matrix `[z^{-n}]`.
pub fn transition_of_line_bundle(n: i64) -> LaurentMatrix {
    LaurentMatrix::diag_monomials(&[-n])
}
