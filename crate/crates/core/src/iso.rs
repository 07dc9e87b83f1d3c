//! Isomorphism tests for triples.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decompose::decompose;
use crate::error::Result;
use crate::field::{extend_field, Elem, Field};
use crate::hom::{eval_hom_basis, NodeMaps};
use crate::matrix::Mat;
use crate::poly::Poly;
use crate::triple::Triple;

/// Random combinations of a Hom basis tried before falling back to decomposition.
pub const ISO_TRIALS: usize = 64;

fn cheap_invariants_agree(a: &Triple, b: &Triple) -> bool {
    a.rank() == b.rank()
        && a.splittings() == b.splittings()
        && a.determinant_invariant() == b.determinant_invariant()
}

/// Exact test against a target known to be indecomposable: some composite
/// `piece -> target -> piece` of basis morphisms is not nilpotent iff `target` is a
/// direct summand of `piece`.
pub(crate) fn isomorphic_to_indecomposable(piece: &Triple, target: &Triple) -> Result<bool> {
    piece.check_compatible(target)?;
    if !cheap_invariants_agree(piece, target) {
        return Ok(false);
    }
    if piece.rank() == 0 {
        return Ok(true);
    }
    let f = piece.field();
    let there = eval_hom_basis(piece, target)?;
    if there.is_empty() {
        return Ok(false);
    }
    let back = eval_hom_basis(target, piece)?;
    for g in &there {
        for h in &back {
            if !h[0].mul(&g[0], f).is_nilpotent(f) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Looks for a combination of `basis` whose node maps are all invertible.
fn find_invertible(basis: &[NodeMaps], f: &Field, n: usize, rng: &mut ChaCha8Rng) -> bool {
    let n_nodes = basis[0].len();
    for _ in 0..ISO_TRIALS {
        let coeffs: Vec<Elem> = basis.iter().map(|_| f.random(rng)).collect();
        let invertible = (0..n_nodes).all(|j| {
            let m = basis
                .iter()
                .zip(&coeffs)
                .fold(Mat::zeros(n, n), |acc, (b, &c)| acc.add(&b[j].scale(c, f), f));
            !m.det(f).is_zero()
        });
        if invertible {
            return true;
        }
        if basis.len() == 1 && !coeffs[0].is_zero() {
            // nonzero multiples of a single generator all behave alike
            return false;
        }
    }
    false
}

/// Whether `t1` and `t2` are isomorphic. A random search for a morphism with invertible
/// node maps settles most positive cases, first over the given field and then over a
/// quadratic extension; otherwise both sides are decomposed over a common field and the
/// band multisets compared.
pub fn is_isomorphic(t1: &Triple, t2: &Triple, seed: u64) -> Result<bool> {
    t1.check_compatible(t2)?;
    if !cheap_invariants_agree(t1, t2) {
        return Ok(false);
    }
    if t1.rank() == 0 {
        return Ok(true);
    }
    let f = t1.field();
    let basis = eval_hom_basis(t1, t2)?;
    if basis.is_empty() {
        return Ok(false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if find_invertible(&basis, f, t1.rank(), &mut rng) {
        return Ok(true);
    }
    // a quadratic extension gives more room when the ground field is tiny
    let quadratic = (0..f.order() * f.order())
        .map(|i| Poly::new(vec![Elem(i % f.order()), Elem(i / f.order()), Elem::ONE]))
        .find(|g| g.is_irreducible(f))
        .expect("irreducible quadratics exist");
    if let Ok((big, emb, _)) = extend_field(f, &quadratic, seed) {
        let lifted: Vec<NodeMaps> =
            basis.iter().map(|b| b.iter().map(|m| m.map(|&e| emb.apply(e))).collect()).collect();
        if find_invertible(&lifted, &big, t1.rank(), &mut rng) {
            return Ok(true);
        }
    }
    let d1 = decompose(t1, seed)?;
    let d2 = decompose(&t2.base_change(&d1.embedding), seed)?;
    let mut mapped: Vec<_> = d1
        .bands
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.lambda = d2.embedding.apply(b.lambda);
            b
        })
        .collect();
    mapped.sort();
    Ok(mapped == d2.bands)
}
