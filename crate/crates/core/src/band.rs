//! Band data `(d, m, lambda)` and the canonical band triples built from them.

use std::fmt;

use crate::birkhoff::SplittingType;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Mat;
use crate::triple::{permute_rows, CycleGeometry, NodeGluing, Triple};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BandData {
    pub d: Vec<i64>,
    pub m: usize,
    pub lambda: Elem,
}

impl BandData {
    pub fn new(d: Vec<i64>, m: usize, lambda: Elem) -> BandData {
        BandData { d, m, lambda }
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// Rank of the bundle on a cycle with `components` components.
    pub fn rank(&self, components: usize) -> usize {
        self.d.len() / components * self.m
    }

    pub fn total_degree(&self) -> i64 {
        self.d.iter().sum::<i64>() * self.m as i64
    }

    pub fn validate(&self, geometry: CycleGeometry) -> Result<()> {
        let n = geometry.components();
        if self.m == 0 {
            return Err(Error::InvalidBand("multiplicity must be positive".into()));
        }
        if self.lambda.is_zero() {
            return Err(Error::InvalidBand("lambda must be nonzero".into()));
        }
        if self.d.is_empty() || self.d.len() % n != 0 {
            return Err(Error::InvalidBand(format!(
                "degree sequence length must be a positive multiple of {n}"
            )));
        }
        if is_periodic(&self.d, n) {
            return Err(Error::PeriodicDegrees);
        }
        Ok(())
    }

    pub fn display<'a>(&'a self, field: &'a Field) -> BandDisplay<'a> {
        BandDisplay { band: self, field }
    }
}

pub struct BandDisplay<'a> {
    band: &'a BandData,
    field: &'a Field,
}

impl fmt::Display for BandDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::format::band_line(self.field, self.band))
    }
}

fn rotate(d: &[i64], r: usize) -> Vec<i64> {
    d[r..].iter().chain(&d[..r]).copied().collect()
}

/// Whether some rotation by a proper multiple of `step` fixes `d`.
pub fn is_periodic(d: &[i64], step: usize) -> bool {
    let l = d.len();
    (1..l)
        .filter(|r| r % step == 0 && l % r == 0)
        .any(|r| rotate(d, r) == d)
}

/// Canonical representative: the lexicographically smallest rotation of `d` by a multiple
/// of the cycle length. Rotating keeps `lambda`; this rule was fixed by isomorphism
/// experiments (see the `band_rotation` integration tests).
pub fn canonical_band(b: &BandData, geometry: CycleGeometry) -> BandData {
    let n = geometry.components();
    let l = b.d.len();
    let d = (0..l).step_by(n.max(1)).map(|r| rotate(&b.d, r)).min().unwrap_or_default();
    BandData { d, m: b.m, lambda: b.lambda }
}

/// `J_m(lambda)`: `lambda` on the diagonal, `1` on the superdiagonal.
pub fn jordan_block(lambda: Elem, m: usize) -> Result<Mat> {
    if m == 0 {
        return Err(Error::InvalidBand("Jordan block of size 0".into()));
    }
    Ok(Mat::from_fn(m, m, |i, j| {
        if i == j {
            lambda
        } else if j == i + 1 {
            Elem::ONE
        } else {
            Elem::ZERO
        }
    }))
}

/// Canonical triple of the band, with the positions `(row, col)` in `M^inf` of the last
/// node that carry the diagonal of the Jordan block.
pub(crate) fn band_triple_with_corner(
    geometry: CycleGeometry,
    field: &Field,
    b: &BandData,
) -> Result<(Triple, Vec<(usize, usize)>)> {
    b.validate(geometry)?;
    let n_comp = geometry.components();
    let m = b.m;
    let s = b.d.len() / n_comp;
    let rank = s * m;
    let jordan = jordan_block(b.lambda, m)?;

    // unsorted basis of component c: local blocks u = 0..s, block u has degree d[c + u N]
    let unsorted_degrees: Vec<Vec<i64>> = (0..n_comp)
        .map(|c| (0..rank).map(|r| b.d[c + (r / m) * n_comp]).collect())
        .collect();
    let perms: Vec<Vec<usize>> = unsorted_degrees
        .iter()
        .map(|degs| {
            let mut idx: Vec<usize> = (0..rank).collect();
            idx.sort_by_key(|&i| (degs[i], i));
            idx
        })
        .collect();
    let splittings: Vec<SplittingType> =
        unsorted_degrees.iter().map(|degs| SplittingType::from_degrees(degs)).collect();

    let mut nodes = Vec::with_capacity(n_comp);
    for j in 0..n_comp {
        let mut inf = Mat::zeros(rank, rank);
        for u in 0..s {
            let last = j == n_comp - 1;
            let row_block = if last { (u + s - 1) % s } else { u };
            for a in 0..m {
                for c in 0..m {
                    let v = if last && u == 0 {
                        jordan[(a, c)]
                    } else if a == c {
                        Elem::ONE
                    } else {
                        Elem::ZERO
                    };
                    inf[(row_block * m + a, u * m + c)] = v;
                }
            }
        }
        // conjugate: rows by the sort of component j, columns by the sort of j + 1
        let col_perm = &perms[geometry.zero_side(j)];
        let inf = permute_rows(&inf, &perms[j]);
        let inf = Mat::from_fn(rank, rank, |r, c| inf[(r, col_perm[c])]);
        nodes.push(NodeGluing { at_infinity: inf, at_zero: Mat::identity(rank) });
    }

    let inv = |perm: &[usize]| {
        let mut out = vec![0; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            out[p] = i;
        }
        out
    };
    let row_inv = inv(&perms[n_comp - 1]);
    let col_inv = inv(&perms[0]);
    let corner = (0..m).map(|t| (row_inv[(s - 1) * m + t], col_inv[t])).collect();
    let triple = Triple::new(geometry, field.clone(), splittings, nodes)?;
    Ok((triple, corner))
}

/// The triple of `B(d, m, lambda)`: for the nodal curve `M(0)` is the identity and
/// `M(inf)` the block cyclic shift with identity blocks above the diagonal and
/// `J_m(lambda)` in the lower left corner, rows then sorted by degree.
pub fn make_band_triple(geometry: CycleGeometry, field: &Field, b: &BandData) -> Result<Triple> {
    Ok(band_triple_with_corner(geometry, field, b)?.0)
}
