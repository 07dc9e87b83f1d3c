//! Splitting types of bundles on the projective line and the Birkhoff factorization
//! `T(z) = U(z) * diag(z^{-l_i}) * V(1/z)` of Laurent transition matrices.
//!
//! The reduction works on the rows of `T`. Left multiplication by a unimodular `U(z)`
//! only changes the `k[z]`-basis of the row lattice, and a basis whose leading
//! coefficient vectors (at the top `z`-exponent of each row) are linearly independent
//! exposes the splitting: the top exponents are the `-l_i`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::laurent::{Laurent, LaurentMatrix};
use crate::matrix::Mat;

/// Multiset of line bundle degrees `O(l)^{m_l}` with degrees strictly increasing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SplittingType {
    parts: Vec<(i64, usize)>,
}

impl SplittingType {
    /// Builds from arbitrary `(degree, multiplicity)` pairs; equal degrees are merged and
    /// zero multiplicities dropped.
    pub fn new(parts: impl IntoIterator<Item = (i64, usize)>) -> SplittingType {
        let mut v: Vec<(i64, usize)> = parts.into_iter().filter(|p| p.1 > 0).collect();
        v.sort();
        let mut merged: Vec<(i64, usize)> = Vec::with_capacity(v.len());
        for (d, m) in v {
            match merged.last_mut() {
                Some(last) if last.0 == d => last.1 += m,
                _ => merged.push((d, m)),
            }
        }
        SplittingType { parts: merged }
    }

    pub fn from_degrees(degrees: &[i64]) -> SplittingType {
        SplittingType::new(degrees.iter().map(|&d| (d, 1)))
    }

    pub fn parts(&self) -> &[(i64, usize)] {
        &self.parts
    }

    pub fn rank(&self) -> usize {
        self.parts.iter().map(|p| p.1).sum()
    }

    pub fn total_degree(&self) -> i64 {
        self.parts.iter().map(|&(d, m)| d * m as i64).sum()
    }

    /// Degrees of the ordered basis, ascending, each repeated by its multiplicity.
    pub fn row_degrees(&self) -> Vec<i64> {
        self.parts.iter().flat_map(|&(d, m)| std::iter::repeat(d).take(m)).collect()
    }

    pub fn scale(&self, factor: i64) -> SplittingType {
        SplittingType::new(self.parts.iter().map(|&(d, m)| (d * factor, m)))
    }

    pub fn merge(&self, other: &SplittingType) -> SplittingType {
        SplittingType::new(self.parts.iter().chain(&other.parts).copied())
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "-");
        }
        let s: Vec<String> = self.parts.iter().map(|(d, m)| format!("{d}:{m}")).collect();
        write!(f, "{}", s.join(","))
    }
}

/// `T = left * diag(z^{-l_i}) * right` with `left` unimodular over `k[z]` and `right`
/// unimodular over `k[1/z]`.
#[derive(Clone, Debug)]
pub struct BirkhoffFactorization {
    pub left: LaurentMatrix,
    pub degrees: Vec<i64>,
    pub right: LaurentMatrix,
}

impl BirkhoffFactorization {
    pub fn splitting(&self) -> SplittingType {
        SplittingType::from_degrees(&self.degrees)
    }

    pub fn middle(&self) -> LaurentMatrix {
        LaurentMatrix::diag_monomials(&self.degrees.iter().map(|&l| -l).collect::<Vec<_>>())
    }
}

/// `Some((c, e))` when `det T = c z^e`.
pub fn unit_determinant(t: &LaurentMatrix, f: &Field) -> Option<(Elem, i64)> {
    t.det(f).as_monomial()
}

pub fn birkhoff_split(t: &LaurentMatrix, f: &Field) -> Result<SplittingType> {
    Ok(birkhoff_factor(t, f)?.splitting())
}

pub fn birkhoff_factor(t: &LaurentMatrix, f: &Field) -> Result<BirkhoffFactorization> {
    let n = t.size();
    let (_, det_exp) = unit_determinant(t, f).ok_or(Error::NotUnimodular)?;
    let mut rows: Vec<Vec<Laurent>> = (0..n).map(|i| t.row(i).to_vec()).collect();
    let mut left = LaurentMatrix::identity(n);
    let top = |row: &[Laurent]| row.iter().filter_map(Laurent::max_exp).max().expect("nonzero row");
    loop {
        let degs: Vec<i64> = rows.iter().map(|r| top(r)).collect();
        // the measure sum(degs) - det_exp is nonnegative and strictly decreases
        debug_assert!(degs.iter().sum::<i64>() >= det_exp);
        let lead = Mat::from_fn(n, n, |i, j| rows[i][j].coeff(degs[i]));
        // left kernel of the leading coefficient matrix
        let Some(alpha) = lead.transpose().nullspace(f).into_iter().next() else {
            break;
        };
        let pivot = (0..n)
            .filter(|&i| !alpha[i].is_zero())
            .max_by_key(|&i| (degs[i], std::cmp::Reverse(i)))
            .expect("nonzero kernel vector");
        let inv = f.inv(alpha[pivot])?;
        let beta: Vec<Elem> = alpha.iter().map(|&a| f.mul(a, inv)).collect();
        let mut new_row = rows[pivot].clone();
        for i in (0..n).filter(|&i| i != pivot && !beta[i].is_zero()) {
            let shift = degs[pivot] - degs[i];
            for j in 0..n {
                let add = rows[i][j].shift(shift).scale(beta[i], f);
                new_row[j] = new_row[j].add(&add, f);
            }
            // left <- left * E^{-1}: column i of left -= beta_i z^shift * column pivot
            for r in 0..n {
                let sub = left.get(r, pivot).shift(shift).scale(beta[i], f);
                let v = left.get(r, i).sub(&sub, f);
                left.set(r, i, v);
            }
        }
        rows[pivot] = new_row;
    }
    let degs: Vec<i64> = rows.iter().map(|r| top(r)).collect();
    debug_assert_eq!(degs.iter().sum::<i64>(), det_exp);
    // right = diag(z^{-deg}) * reduced rows has entries in k[1/z]
    let mut right = LaurentMatrix::identity(n);
    for (i, row) in rows.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            right.set(i, j, e.shift(-degs[i]));
        }
    }
    let degrees = degs.iter().map(|&d| -d).collect();
    Ok(BirkhoffFactorization { left, degrees, right })
}
