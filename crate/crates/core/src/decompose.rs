//! Krull-Schmidt decomposition of triples into bands.
//!
//! Each pending piece is first matched against the bands compatible with its invariants:
//! the number of node-fibre directions of each (degree at `inf`, degree at `0`) type
//! around every node, and the determinant invariant. A match is certified by an exact
//! isomorphism test, so a matched piece is known to be indecomposable. Pieces that match
//! nothing are split with a Fitting/primary decomposition along a random endomorphism;
//! when the endomorphism algebra of a piece is a proper field extension of the ground
//! field, the field is extended and the piece is split again.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::band::{canonical_band, make_band_triple, BandData};
use crate::birkhoff::SplittingType;
use crate::error::{Error, Result};
use crate::field::{extend_field, Embedding, Field};
use crate::hom::{component_evaluations, eval_hom_basis, NodeMaps};
use crate::iso::isomorphic_to_indecomposable;
use crate::matrix::Mat;
use crate::poly::Poly;
use crate::triple::{CycleGeometry, NodeGluing, Triple};

/// Random endomorphisms tried per piece before it is treated as local.
pub const SPLIT_TRIALS: usize = 64;
/// Upper bound on degree sequences tried when matching a piece against bands.
const MAX_CANDIDATES: usize = 256;

#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Field of the input triple.
    pub base: Field,
    /// Field containing every emitted `lambda`.
    pub field: Field,
    pub embedding: Embedding,
    /// Canonical bands, sorted.
    pub bands: Vec<BandData>,
}

impl Decomposition {
    /// Degree of `field` over `base`.
    pub fn extension_degree(&self) -> usize {
        self.field.k() / self.base.k()
    }

    /// Direct sum of the canonical band triples, over `field`.
    pub fn reassemble(&self, geometry: CycleGeometry) -> Result<Triple> {
        self.bands.iter().try_fold(Triple::zero(geometry, self.field.clone()), |acc, b| {
            acc.direct_sum(&make_band_triple(geometry, &self.field, b)?)
        })
    }
}

enum Analysis {
    Split(Vec<Triple>),
    Extend(Poly),
    Local,
}

pub fn decompose(t: &Triple, seed: u64) -> Result<Decomposition> {
    t.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let geometry = t.geometry();
    let base = t.field().clone();
    let mut field = base.clone();
    let mut embedding = Embedding::identity(&base);
    let mut pending = vec![t.clone()];
    let mut bands: Vec<BandData> = Vec::new();

    while let Some(piece) = pending.pop() {
        if piece.rank() == 0 {
            continue;
        }
        if let Some(b) = identify_band(&piece, &mut rng)? {
            bands.push(b);
            continue;
        }
        let mut outcome = Analysis::Local;
        for attempt in 0..3 {
            outcome = analyse(&piece, SPLIT_TRIALS << (2 * attempt), &mut rng)?;
            if !matches!(outcome, Analysis::Local) {
                break;
            }
        }
        match outcome {
            Analysis::Split(parts) => pending.extend(parts),
            Analysis::Extend(g) => {
                let (bigger, step, _) = extend_field(&field, &g, rng.gen())?;
                for b in bands.iter_mut() {
                    b.lambda = step.apply(b.lambda);
                }
                pending = pending.iter().map(|p| p.base_change(&step)).collect();
                pending.push(piece.base_change(&step));
                embedding = embedding.then(&step);
                field = bigger;
            }
            Analysis::Local => {
                return Err(Error::Decomposition(format!(
                    "piece of rank {} is local but matches no band",
                    piece.rank()
                )))
            }
        }
    }
    let mut bands: Vec<BandData> = bands.iter().map(|b| canonical_band(b, geometry)).collect();
    bands.sort();
    Ok(Decomposition { base, field, embedding, bands })
}

/// Looks for an endomorphism with at least two distinct primary components.
fn analyse(piece: &Triple, trials: usize, rng: &mut ChaCha8Rng) -> Result<Analysis> {
    let f = piece.field();
    let basis = eval_hom_basis(piece, piece)?;
    if basis.len() <= 1 {
        return Ok(Analysis::Local);
    }
    let mut extension: Option<Poly> = None;
    let random_elems = (0..trials).map(|_| {
        let coeffs: Vec<_> = basis.iter().map(|_| f.random(rng)).collect();
        combine(&basis, &coeffs, f)
    });
    let candidates: Vec<NodeMaps> = basis.iter().cloned().chain(random_elems.collect::<Vec<_>>()).collect();
    for x in candidates {
        let chi = x[0].char_poly(f);
        let factors = chi.factor(f, rng.gen())?;
        if factors.len() >= 2 {
            return Ok(Analysis::Split(split_by(piece, &x, &chi, &factors)?));
        }
        let g = &factors[0].0;
        if g.degree() > Some(1) && extension.as_ref().is_none_or(|e| e.degree() < g.degree()) {
            extension = Some(g.clone());
        }
    }
    Ok(extension.map_or(Analysis::Local, Analysis::Extend))
}

fn combine(basis: &[NodeMaps], coeffs: &[crate::field::Elem], f: &Field) -> NodeMaps {
    let n_nodes = basis[0].len();
    (0..n_nodes)
        .map(|j| {
            basis
                .iter()
                .zip(coeffs)
                .fold(Mat::zeros(basis[0][j].rows(), basis[0][j].cols()), |acc, (b, &c)| acc.add(&b[j].scale(c, f), f))
        })
        .collect()
}

/// Primary decomposition of `piece` along the endomorphism `x` with characteristic
/// polynomial `chi` (common to all node maps).
fn split_by(piece: &Triple, x: &NodeMaps, chi: &Poly, factors: &[(Poly, usize)]) -> Result<Vec<Triple>> {
    let f = piece.field();
    let mut parts = Vec::with_capacity(factors.len());
    for (g, e) in factors {
        let primary = g.pow(*e as u64, f);
        let cofactor = chi.monic(f).div_exact(&primary, f)?;
        let (_, _, t) = primary.ext_gcd(&cofactor, f);
        let idempotent = t.mul(&cofactor, f).rem(&chi.monic(f), f)?;
        let e_nodes: NodeMaps = x.iter().map(|m| m.eval_poly(&idempotent, f)).collect();
        parts.push(summand(piece, &e_nodes)?);
    }
    Ok(parts)
}

/// The direct summand cut out by an idempotent endomorphism given by its node maps.
pub(crate) fn summand(piece: &Triple, e_nodes: &[Mat]) -> Result<Triple> {
    let f = piece.field();
    let geometry = piece.geometry();
    let n_comp = geometry.components();
    let evals = component_evaluations(piece, piece, e_nodes)?;
    let mut frames = Vec::with_capacity(n_comp);
    let mut splittings = Vec::with_capacity(n_comp);
    for (c, (e0, einf)) in evals.iter().enumerate() {
        let degrees = piece.row_degrees(c);
        let mut chosen = Vec::new();
        let mut parts = Vec::new();
        let mut lo = 0;
        while lo < degrees.len() {
            let hi = lo + degrees[lo..].iter().take_while(|&&d| d == degrees[lo]).count();
            let idx: Vec<usize> = (lo..hi).collect();
            let diag = e0.select(&idx, &idx);
            let cols: Vec<usize> = diag.independent_columns(f).into_iter().map(|k| lo + k).collect();
            parts.push((degrees[lo], cols.len()));
            chosen.extend(cols);
            lo = hi;
        }
        frames.push((e0.select_cols(&chosen), einf.select_cols(&chosen)));
        splittings.push(SplittingType::new(parts));
    }
    let mut nodes = Vec::with_capacity(n_comp);
    for (j, e) in e_nodes.iter().enumerate() {
        let fibre = e.select_cols(&e.independent_columns(f));
        let node = piece.node(j);
        let at_infinity = frames[j].1.solve_left(&node.at_infinity.mul(&fibre, f), f)?;
        let at_zero = frames[geometry.zero_side(j)].0.solve_left(&node.at_zero.mul(&fibre, f), f)?;
        nodes.push(NodeGluing { at_infinity, at_zero });
    }
    Triple::new(geometry, f.clone(), splittings, nodes)
}

/// For node `j`: multiplicities of `(degree at inf on component j, degree at 0 on
/// component j + 1)` among directions of the node fibre, read off from the dimensions of
/// intersections of the two degree filtrations.
pub fn pair_counts(t: &Triple) -> Result<Vec<Vec<(i64, i64, usize)>>> {
    let f = t.field();
    let g = t.geometry();
    let n = t.rank();
    (0..g.components())
        .map(|j| {
            let inf_deg = t.row_degrees(j);
            let zero_deg = t.row_degrees(g.zero_side(j));
            let inf_inv = t.node(j).at_infinity.inverse(f)?;
            let zero_inv = t.node(j).at_zero.inverse(f)?;
            let distinct = |v: &[i64]| {
                let mut d = v.to_vec();
                d.dedup();
                d
            };
            let (bs, as_) = (distinct(&inf_deg), distinct(&zero_deg));
            // preimage of the span of rows with degree >= threshold
            let upper = |degs: &[i64], thr: i64| -> Vec<usize> { (0..n).filter(|&r| degs[r] >= thr).collect() };
            let mut dims = vec![vec![0usize; as_.len() + 1]; bs.len() + 1];
            for (bi, &b) in bs.iter().enumerate() {
                for (ai, &a) in as_.iter().enumerate() {
                    let q = inf_inv.select_cols(&upper(&inf_deg, b));
                    let p = zero_inv.select_cols(&upper(&zero_deg, a));
                    let sum = q.hstack(&p).rank(f);
                    dims[bi][ai] = q.cols() + p.cols() - sum;
                }
            }
            let mut out = Vec::new();
            for (bi, &b) in bs.iter().enumerate() {
                for (ai, &a) in as_.iter().enumerate() {
                    let c = dims[bi][ai] + dims[bi + 1][ai + 1] - dims[bi + 1][ai] - dims[bi][ai + 1];
                    if c > 0 {
                        out.push((b, a, c));
                    }
                }
            }
            Ok(out)
        })
        .collect()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Closed walks `d_0 -> d_1 -> ... -> d_l = d_0` using edge `(d_i, d_{i+1})` at node
/// `i mod N` with the given multiplicities, canonicalized and without periodic ones.
fn degree_sequences(edges: &[Vec<(i64, i64, usize)>], geometry: CycleGeometry, limit: usize) -> Vec<Vec<i64>> {
    let n_comp = geometry.components();
    let l: usize = edges.iter().map(|e| e.iter().map(|x| x.2).sum::<usize>()).sum();
    let Some(start) = edges[0].iter().map(|e| e.0).min() else {
        return Vec::new();
    };
    let mut remaining: Vec<Vec<(i64, i64, usize)>> = edges.to_vec();
    let mut out: Vec<Vec<i64>> = Vec::new();
    let mut path = vec![start];
    fn walk(
        remaining: &mut Vec<Vec<(i64, i64, usize)>>,
        path: &mut Vec<i64>,
        l: usize,
        n_comp: usize,
        limit: usize,
        out: &mut Vec<Vec<i64>>,
    ) {
        if out.len() >= limit {
            return;
        }
        let i = path.len() - 1;
        let cur = path[i];
        if i == l {
            if cur == path[0] {
                path.pop();
                out.push(path.clone());
                path.push(cur);
            }
            return;
        }
        let node = i % n_comp;
        for e in 0..remaining[node].len() {
            let (b, a, c) = remaining[node][e];
            if b != cur || c == 0 {
                continue;
            }
            remaining[node][e].2 -= 1;
            path.push(a);
            walk(remaining, path, l, n_comp, limit, out);
            path.pop();
            remaining[node][e].2 += 1;
        }
    }
    walk(&mut remaining, &mut path, l, n_comp, limit * 4, &mut out);
    let mut seqs: Vec<Vec<i64>> = out
        .into_iter()
        .filter(|d| !crate::band::is_periodic(d, n_comp))
        .map(|d| canonical_band(&BandData::new(d, 1, crate::field::Elem::ONE), geometry).d)
        .collect();
    seqs.sort();
    seqs.dedup();
    seqs.truncate(limit);
    seqs
}

/// Returns the band isomorphic to `piece`, if there is one.
pub(crate) fn identify_band(piece: &Triple, rng: &mut ChaCha8Rng) -> Result<Option<BandData>> {
    let f = piece.field();
    let geometry = piece.geometry();
    let counts = pair_counts(piece)?;
    let g = counts.iter().flatten().fold(0, |acc, x| gcd(acc, x.2));
    if g == 0 {
        return Ok(None);
    }
    let delta = piece.determinant_invariant();
    for m in (1..=g).filter(|m| g % m == 0) {
        let edges: Vec<Vec<(i64, i64, usize)>> =
            counts.iter().map(|node| node.iter().map(|&(b, a, c)| (b, a, c / m)).collect()).collect();
        for d in degree_sequences(&edges, geometry, MAX_CANDIDATES) {
            let unit = make_band_triple(geometry, f, &BandData::new(d.clone(), m, crate::field::Elem::ONE))?;
            let target = f.div(delta, unit.determinant_invariant())?;
            let mut power = vec![crate::field::Elem::ZERO; m + 1];
            power[0] = f.neg(target);
            power[m] = crate::field::Elem::ONE;
            for lambda in Poly::new(power).roots(f, rng.gen())? {
                let band = BandData::new(d.clone(), m, lambda);
                let candidate = make_band_triple(geometry, f, &band)?;
                if isomorphic_to_indecomposable(piece, &candidate)? {
                    return Ok(Some(band));
                }
            }
        }
    }
    Ok(None)
}
