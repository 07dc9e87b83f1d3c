//! Gluing triples for vector bundles on a cycle of `N` projective lines.
//!
//! Component `j` is a copy of P^1 with marked points `0` and `inf`. Node `j` glues `inf`
//! on component `j` to `0` on component `j + 1 (mod N)`. For `N = 1` this is the
//! irreducible nodal rational curve. A triple records, per component, the splitting type
//! of the pulled-back bundle (rows ordered by ascending degree) and, per node, the two
//! gluing matrices from the fibre at the node into the fibres at its two preimages.

use crate::birkhoff::SplittingType;
use crate::error::{Error, Result};
use crate::field::{Elem, Embedding, Field};
use crate::matrix::Mat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CycleGeometry {
    components: usize,
}

impl CycleGeometry {
    pub fn new(components: usize) -> Result<CycleGeometry> {
        if components == 0 {
            return Err(Error::InvalidTriple("a cycle needs at least one component".into()));
        }
        Ok(CycleGeometry { components })
    }

    /// The irreducible nodal curve.
    pub fn nodal() -> CycleGeometry {
        CycleGeometry { components: 1 }
    }

    pub fn components(&self) -> usize {
        self.components
    }

    /// Component carrying the `0` preimage of node `j`.
    pub fn zero_side(&self, node: usize) -> usize {
        (node + 1) % self.components
    }
}

/// Gluing data at one node. `at_infinity` has its rows in the basis of component `j`,
/// `at_zero` in the basis of component `j + 1`; columns are the node fibre.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodeGluing {
    pub at_infinity: Mat,
    pub at_zero: Mat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    geometry: CycleGeometry,
    field: Field,
    splittings: Vec<SplittingType>,
    rank: usize,
    nodes: Vec<NodeGluing>,
}

impl Triple {
    pub fn new(
        geometry: CycleGeometry,
        field: Field,
        splittings: Vec<SplittingType>,
        nodes: Vec<NodeGluing>,
    ) -> Result<Triple> {
        let n_comp = geometry.components();
        if splittings.len() != n_comp || nodes.len() != n_comp {
            return Err(Error::InvalidTriple(format!(
                "expected {n_comp} splitting types and {n_comp} nodes"
            )));
        }
        let rank = splittings[0].rank();
        if splittings.iter().any(|s| s.rank() != rank) {
            return Err(Error::InvalidTriple("rank differs between components".into()));
        }
        for (j, node) in nodes.iter().enumerate() {
            for m in [&node.at_infinity, &node.at_zero] {
                if m.rows() != rank || m.cols() != rank {
                    return Err(Error::InvalidTriple(format!(
                        "gluing matrix at node {j} is not {rank}x{rank}"
                    )));
                }
                if m.det(&field).is_zero() {
                    return Err(Error::InvalidTriple(format!(
                        "gluing matrix at node {j} is singular"
                    )));
                }
            }
        }
        Ok(Triple { geometry, field, splittings, rank, nodes })
    }

    /// The rank-zero triple.
    pub fn zero(geometry: CycleGeometry, field: Field) -> Triple {
        let n = geometry.components();
        let nodes = vec![NodeGluing { at_infinity: Mat::zeros(0, 0), at_zero: Mat::zeros(0, 0) }; n];
        Triple { geometry, field, splittings: vec![SplittingType::default(); n], rank: 0, nodes }
    }

    pub fn geometry(&self) -> CycleGeometry {
        self.geometry
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn splittings(&self) -> &[SplittingType] {
        &self.splittings
    }

    pub fn splitting(&self, component: usize) -> &SplittingType {
        &self.splittings[component]
    }

    pub fn row_degrees(&self, component: usize) -> Vec<i64> {
        self.splittings[component].row_degrees()
    }

    pub fn nodes(&self) -> &[NodeGluing] {
        &self.nodes
    }

    pub fn node(&self, j: usize) -> &NodeGluing {
        &self.nodes[j]
    }

    /// Sum over components of `sum l * m_l`.
    pub fn total_degree(&self) -> i64 {
        self.splittings.iter().map(SplittingType::total_degree).sum()
    }

    /// `prod_j det(M_j^inf) / det(M_j^0)`. Automorphisms of the normalization have equal
    /// determinants at `0` and `inf` on each component and node changes cancel, so this
    /// is an isomorphism invariant.
    pub fn determinant_invariant(&self) -> Elem {
        let f = &self.field;
        self.nodes.iter().fold(Elem::ONE, |acc, node| {
            let num = node.at_infinity.det(f);
            let den = node.at_zero.det(f);
            f.mul(acc, f.div(num, den).expect("invertible gluing"))
        })
    }

    pub fn check_compatible(&self, other: &Triple) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.geometry != other.geometry {
            return Err(Error::GeometryMismatch);
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Triple) -> Result<Triple> {
        self.check_compatible(other)?;
        let n_comp = self.geometry.components();
        let mut perms = Vec::with_capacity(n_comp);
        let mut splittings = Vec::with_capacity(n_comp);
        for c in 0..n_comp {
            let mut rows: Vec<(i64, usize)> = self.row_degrees(c).into_iter().enumerate().map(|(i, d)| (d, i)).collect();
            rows.extend(other.row_degrees(c).into_iter().enumerate().map(|(i, d)| (d, self.rank + i)));
            rows.sort();
            perms.push(rows.iter().map(|r| r.1).collect::<Vec<_>>());
            splittings.push(self.splittings[c].merge(&other.splittings[c]));
        }
        let nodes = (0..n_comp)
            .map(|j| {
                let inf = self.nodes[j].at_infinity.block_diag(&other.nodes[j].at_infinity);
                let zero = self.nodes[j].at_zero.block_diag(&other.nodes[j].at_zero);
                NodeGluing {
                    at_infinity: permute_rows(&inf, &perms[j]),
                    at_zero: permute_rows(&zero, &perms[self.geometry.zero_side(j)]),
                }
            })
            .collect();
        Ok(Triple {
            geometry: self.geometry,
            field: self.field.clone(),
            splittings,
            rank: self.rank + other.rank,
            nodes,
        })
    }

    /// Same data read in a larger field.
    pub fn base_change(&self, embedding: &Embedding) -> Triple {
        debug_assert_eq!(embedding.source(), &self.field);
        let map = |m: &Mat| m.map(|&e| embedding.apply(e));
        Triple {
            geometry: self.geometry,
            field: embedding.target().clone(),
            splittings: self.splittings.clone(),
            rank: self.rank,
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeGluing { at_infinity: map(&n.at_infinity), at_zero: map(&n.at_zero) })
                .collect(),
        }
    }

    /// Applies `g` to every splitting type and `h` to every gluing matrix entry.
    pub(crate) fn map_data(&self, g: impl Fn(&SplittingType) -> SplittingType, h: impl Fn(Elem) -> Elem) -> Triple {
        Triple {
            geometry: self.geometry,
            field: self.field.clone(),
            splittings: self.splittings.iter().map(g).collect(),
            rank: self.rank,
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeGluing {
                    at_infinity: n.at_infinity.map(|&e| h(e)),
                    at_zero: n.at_zero.map(|&e| h(e)),
                })
                .collect(),
        }
    }

    /// Overwrites one gluing entry without validation of the result.
    pub(crate) fn with_entry(&self, node: usize, at_infinity: bool, row: usize, col: usize, value: Elem) -> Triple {
        let mut out = self.clone();
        let m = if at_infinity { &mut out.nodes[node].at_infinity } else { &mut out.nodes[node].at_zero };
        m[(row, col)] = value;
        out
    }

    /// Re-runs the constructor checks.
    pub fn validate(&self) -> Result<()> {
        Triple::new(self.geometry, self.field.clone(), self.splittings.clone(), self.nodes.clone()).map(|_| ())
    }
}

/// Row `r` of the result is row `perm[r]` of `m`.
pub(crate) fn permute_rows(m: &Mat, perm: &[usize]) -> Mat {
    Mat::from_fn(m.rows(), m.cols(), |i, j| m[(perm[i], j)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_singular_and_ragged() {
        let f = Field::prime(3).unwrap();
        let g = CycleGeometry::nodal();
        let s = vec![SplittingType::new([(0, 1)])];
        let bad = NodeGluing { at_infinity: Mat::zeros(1, 1), at_zero: Mat::identity(1) };
        assert!(Triple::new(g, f.clone(), s.clone(), vec![bad]).is_err());
        let wrong = NodeGluing { at_infinity: Mat::identity(2), at_zero: Mat::identity(2) };
        assert!(Triple::new(g, f, s, vec![wrong]).is_err());
        assert!(CycleGeometry::new(0).is_err());
    }

    #[test]
    fn direct_sum_with_zero() {
        let f = Field::prime(5).unwrap();
        let g = CycleGeometry::nodal();
        let t = Triple::new(
            g,
            f.clone(),
            vec![SplittingType::new([(0, 1), (2, 1)])],
            vec![NodeGluing {
                at_infinity: Mat::from_rows(vec![vec![Elem::ZERO, Elem::ONE], vec![f.from_int(2), Elem::ZERO]]).unwrap(),
                at_zero: Mat::identity(2),
            }],
        )
        .unwrap();
        let z = Triple::zero(g, f.clone());
        assert_eq!(t.direct_sum(&z).unwrap(), t);
        assert_eq!(z.direct_sum(&t).unwrap(), t);
        let tt = t.direct_sum(&t).unwrap();
        assert_eq!(tt.rank(), 4);
        assert_eq!(tt.splitting(0).parts(), &[(0, 2), (2, 2)]);
        assert_eq!(tt.determinant_invariant(), f.mul(t.determinant_invariant(), t.determinant_invariant()));
        tt.validate().unwrap();
    }
}
