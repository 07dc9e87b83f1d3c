//! Morphism spaces between triples.
//!
//! A morphism is a bundle map `F` on each component together with a linear map `f_j` at
//! each node, subject to `A_t M_src(t) = M_tgt(t) f_node(t)` at every node preimage `t`,
//! where `A_t` is `F` read in the trivializations at `t`. Since the gluing matrices are
//! invertible, the node maps determine every `A_t`; the remaining conditions say that
//! each `A_t` is block lower triangular for the degree grading and that `A_0` and `A_inf`
//! share their diagonal blocks on each component. Coefficients of `F` not seen by
//! either evaluation are free and are added back to get the full space.

use crate::error::Result;
use crate::field::{Elem, Field};
use crate::laurent::{hom_dim, SectionRep};
use crate::matrix::{Mat, SparseSystem};
use crate::triple::Triple;

/// Node maps `f_j` (target rank x source rank) of a morphism; the evaluations of the
/// bundle map are derived from them.
pub type NodeMaps = Vec<Mat>;

/// `(A_c(0), A_c(inf))` for every component.
pub fn component_evaluations(src: &Triple, tgt: &Triple, nodes: &[Mat]) -> Result<Vec<(Mat, Mat)>> {
    let f = src.field();
    let n_comp = src.geometry().components();
    (0..n_comp)
        .map(|c| {
            let jz = (c + n_comp - 1) % n_comp;
            let a0 = tgt.node(jz).at_zero.mul(&nodes[jz], f).mul(&src.node(jz).at_zero.inverse(f)?, f);
            let ainf = tgt.node(c).at_infinity.mul(&nodes[c], f).mul(&src.node(c).at_infinity.inverse(f)?, f);
            Ok((a0, ainf))
        })
        .collect()
}

fn nonzero_rows(m: &Mat) -> Vec<Vec<(usize, Elem)>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).filter(|&j| !m[(i, j)].is_zero()).map(|j| (j, m[(i, j)])).collect())
        .collect()
}

/// Basis of the node-map parts of `Hom(src, tgt)`, i.e. of the morphism space modulo
/// maps vanishing at every node preimage.
pub fn eval_hom_basis(src: &Triple, tgt: &Triple) -> Result<Vec<NodeMaps>> {
    src.check_compatible(tgt)?;
    let f = src.field();
    let n_comp = src.geometry().components();
    let (n1, n2) = (src.rank(), tgt.rank());
    let block = n1 * n2;
    if block == 0 {
        return Ok(Vec::new());
    }
    let var = |node: usize, a: usize, b: usize| node * block + a * n1 + b;
    let mut sys = SparseSystem::new(f, n_comp * block);
    // per node: (tgt rows nonzeros, src inverse columns nonzeros) for zero and inf sides
    let mut zero_side = Vec::with_capacity(n_comp);
    let mut inf_side = Vec::with_capacity(n_comp);
    for j in 0..n_comp {
        zero_side.push((
            nonzero_rows(&tgt.node(j).at_zero),
            nonzero_rows(&src.node(j).at_zero.inverse(f)?.transpose()),
        ));
        inf_side.push((
            nonzero_rows(&tgt.node(j).at_infinity),
            nonzero_rows(&src.node(j).at_infinity.inverse(f)?.transpose()),
        ));
    }
    let mut terms: Vec<(usize, Elem)> = Vec::new();
    let push_entry = |terms: &mut Vec<(usize, Elem)>, node: usize, side: &(Vec<Vec<(usize, Elem)>>, Vec<Vec<(usize, Elem)>>), i: usize, jj: usize, negate: bool| {
        for &(a, pa) in &side.0[i] {
            for &(b, qb) in &side.1[jj] {
                let v = f.mul(pa, qb);
                terms.push((var(node, a, b), if negate { f.neg(v) } else { v }));
            }
        }
    };
    for c in 0..n_comp {
        let jz = (c + n_comp - 1) % n_comp;
        let deg_src = src.row_degrees(c);
        let deg_tgt = tgt.row_degrees(c);
        for (i, &b_deg) in deg_tgt.iter().enumerate() {
            for (jj, &a_deg) in deg_src.iter().enumerate() {
                if b_deg < a_deg {
                    terms.clear();
                    push_entry(&mut terms, jz, &zero_side[jz], i, jj, false);
                    sys.push(&terms);
                    terms.clear();
                    push_entry(&mut terms, c, &inf_side[c], i, jj, false);
                    sys.push(&terms);
                } else if b_deg == a_deg {
                    terms.clear();
                    push_entry(&mut terms, jz, &zero_side[jz], i, jj, false);
                    push_entry(&mut terms, c, &inf_side[c], i, jj, true);
                    sys.push(&terms);
                }
            }
        }
    }
    Ok(sys
        .nullspace()
        .into_iter()
        .map(|v| {
            (0..n_comp)
                .map(|j| Mat::from_fn(n2, n1, |a, b| v[var(j, a, b)]))
                .collect()
        })
        .collect())
}

/// Composition `second o first` of node maps.
pub fn compose(first: &[Mat], second: &[Mat], f: &Field) -> NodeMaps {
    first.iter().zip(second).map(|(a, b)| b.mul(a, f)).collect()
}

/// A full morphism: sections `F_c[i][j] in Hom(O(a_j), O(b_i))` per component (row-major,
/// target rank x source rank) and node maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleMorphism {
    pub components: Vec<Vec<SectionRep>>,
    pub nodes: NodeMaps,
}

impl TripleMorphism {
    fn evaluate(&self, c: usize, n2: usize, n1: usize, at_zero: bool) -> Mat {
        Mat::from_fn(n2, n1, |i, j| match self.components[c][i * n1 + j].eval_pair() {
            Some((z, inf)) => if at_zero { z } else { inf },
            None => Elem::ZERO,
        })
    }

    pub fn eval_at_zero(&self, component: usize, src: &Triple, tgt: &Triple) -> Mat {
        self.evaluate(component, tgt.rank(), src.rank(), true)
    }

    pub fn eval_at_infinity(&self, component: usize, src: &Triple, tgt: &Triple) -> Mat {
        self.evaluate(component, tgt.rank(), src.rank(), false)
    }

    /// Checks the commuting squares at every node preimage by substitution.
    pub fn satisfies_commuting_squares(&self, src: &Triple, tgt: &Triple) -> bool {
        let f = src.field();
        let g = src.geometry();
        (0..g.components()).all(|j| {
            let z = g.zero_side(j);
            let a_inf = self.eval_at_infinity(j, src, tgt);
            let a_zero = self.eval_at_zero(z, src, tgt);
            a_inf.mul(&src.node(j).at_infinity, f) == tgt.node(j).at_infinity.mul(&self.nodes[j], f)
                && a_zero.mul(&src.node(j).at_zero, f) == tgt.node(j).at_zero.mul(&self.nodes[j], f)
        })
    }
}

#[derive(Clone, Debug)]
pub struct HomBasis {
    pub source: Triple,
    pub target: Triple,
    pub basis: Vec<TripleMorphism>,
}

impl HomBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Full basis of `Hom(src, tgt)` in the category of triples.
pub fn hom_triples(src: &Triple, tgt: &Triple) -> Result<HomBasis> {
    let eval = eval_hom_basis(src, tgt)?;
    let n_comp = src.geometry().components();
    let (n1, n2) = (src.rank(), tgt.rank());
    let degrees: Vec<(Vec<i64>, Vec<i64>)> =
        (0..n_comp).map(|c| (src.row_degrees(c), tgt.row_degrees(c))).collect();
    let zero_sections = |c: usize| -> Vec<SectionRep> {
        let (ds, dt) = &degrees[c];
        (0..n2 * n1).map(|idx| SectionRep::zero(ds[idx % n1], dt[idx / n1])).collect()
    };
    let mut basis = Vec::new();
    for nodes in eval {
        let evals = component_evaluations(src, tgt, &nodes)?;
        let components = (0..n_comp)
            .map(|c| {
                let mut secs = zero_sections(c);
                for (idx, s) in secs.iter_mut().enumerate() {
                    if let Some(last) = s.coeffs.len().checked_sub(1) {
                        let (i, j) = (idx / n1, idx % n1);
                        s.coeffs[last] = evals[c].0[(i, j)];
                        s.coeffs[0] = evals[c].1[(i, j)];
                    }
                }
                secs
            })
            .collect();
        basis.push(TripleMorphism { components, nodes });
    }
    for c in 0..n_comp {
        let (ds, dt) = &degrees[c];
        for idx in 0..n2 * n1 {
            let dim = hom_dim(ds[idx % n1], dt[idx / n1]);
            for interior in 1..dim.saturating_sub(1) {
                let mut components: Vec<Vec<SectionRep>> = (0..n_comp).map(zero_sections).collect();
                components[c][idx].coeffs[interior] = Elem::ONE;
                basis.push(TripleMorphism { components, nodes: vec![Mat::zeros(n2, n1); n_comp] });
            }
        }
    }
    Ok(HomBasis { source: src.clone(), target: tgt.clone(), basis })
}
