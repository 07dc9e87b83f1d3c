//! Helpers shared by the integration tests: random unimodular disguises, an independent
//! splitting oracle, and brute-force orbit enumeration for small triples.
#![allow(dead_code)]

use std::collections::HashMap;

use bandfrob::{Elem, Field, Laurent, LaurentMatrix, Mat, Poly, SplittingType};
use rand::Rng;

/// Product of a few elementary matrices `I + c z^e E_ij` with `e >= 0` (for `k[z]`) or
/// `e <= 0` (for `k[1/z]`), and an invertible constant diagonal.
pub fn random_unimodular<R: Rng>(n: usize, f: &Field, rng: &mut R, in_z: bool, steps: usize) -> LaurentMatrix {
    let mut m = LaurentMatrix::identity(n);
    for i in 0..n {
        m.set(i, i, Laurent::monomial(f.random_nonzero(rng), 0));
    }
    if n < 2 {
        return m;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let e: i64 = rng.gen_range(0..=2);
        let mut el = LaurentMatrix::identity(n);
        el.set(i, j, Laurent::monomial(f.random_nonzero(rng), if in_z { e } else { -e }));
        m = el.mul(&m, f);
    }
    m
}

/// `U(z) diag(z^{-l}) V(1/z)` for a planted splitting `l`.
pub fn disguise<R: Rng>(planted: &[i64], f: &Field, rng: &mut R) -> LaurentMatrix {
    let n = planted.len();
    let u = random_unimodular(n, f, rng, true, 3);
    let v = random_unimodular(n, f, rng, false, 3);
    let exps: Vec<i64> = planted.iter().map(|&l| -l).collect();
    u.mul(&LaurentMatrix::diag_monomials(&exps), f).mul(&v, f)
}

fn exp_range(t: &LaurentMatrix) -> (i64, i64) {
    let n = t.size();
    let mut lo = 0;
    let mut hi = 0;
    for i in 0..n {
        for j in 0..n {
            if let (Some(a), Some(b)) = (t.get(i, j).min_exp(), t.get(i, j).max_exp()) {
                lo = lo.min(a);
                hi = hi.max(b);
            }
        }
    }
    (lo, hi)
}

/// `dim { c in k[z]^n : c T has no exponent above t }`, by linear algebra on coefficient
/// vectors of bounded degree.
pub fn sections_below(t: &LaurentMatrix, f: &Field, top: i64) -> usize {
    let n = t.size();
    let (lo, hi) = exp_range(t);
    let span = hi.max(-lo);
    let deg = (top + (2 * n as i64) * span + 1).max(0) as usize;
    let unknowns = n * (deg + 1);
    let mut rows = Vec::new();
    for j in 0..n {
        for e in (top + 1)..=(deg as i64 + hi) {
            let row: Vec<Elem> = (0..unknowns)
                .map(|u| {
                    let (i, s) = (u / (deg + 1), (u % (deg + 1)) as i64);
                    t.get(i, j).coeff(e - s)
                })
                .collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return unknowns;
    }
    unknowns - Mat::from_rows(rows).unwrap().rank(f)
}

/// Splitting type read off from the counts of sections with bounded pole order:
/// `h(t) = sum_i max(0, t + l_i + 1)`, so the second difference at `t` counts `l_i = -t`.
pub fn splitting_oracle(t: &LaurentMatrix, f: &Field) -> SplittingType {
    let (lo, hi) = exp_range(t);
    let bound = (t.size() as i64) * (hi - lo + 1) + 1;
    let h: HashMap<i64, usize> = (-bound - 2..=bound).map(|x| (x, sections_below(t, f, x))).collect();
    let mut parts = Vec::new();
    for x in -bound..=bound {
        let count = h[&x] as i64 - 2 * h[&(x - 1)] as i64 + h[&(x - 2)] as i64;
        if count > 0 {
            parts.push((-x, count as usize));
        }
    }
    SplittingType::new(parts)
}

/// All invertible `n x n` matrices over `f`.
pub fn general_linear(n: usize, f: &Field) -> Vec<Mat> {
    let q = f.order();
    let elems: Vec<Elem> = f.elements().collect();
    let total = q.pow((n * n) as u32);
    (0..total)
        .map(|mut code| {
            Mat::from_fn(n, n, |_, _| {
                let v = elems[(code % q) as usize];
                code /= q;
                v
            })
        })
        .filter(|m| !m.det(f).is_zero())
        .collect()
}

/// Pairs `(A_0, A_inf)` of invertible matrices, zero where the row degree is below the
/// column degree, with equal blocks where the degrees agree.
pub fn automorphism_pairs(degrees: &[i64], f: &Field) -> Vec<(Mat, Mat)> {
    let n = degrees.len();
    let q = f.order();
    let same: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| degrees[i] == degrees[j]).collect();
    let below: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| degrees[i] > degrees[j]).collect();
    let free = same.len() + 2 * below.len();
    let elems: Vec<Elem> = f.elements().collect();
    let mut out = Vec::new();
    for mut code in 0..q.pow(free as u32) {
        let mut digit = || {
            let v = elems[(code % q) as usize];
            code /= q;
            v
        };
        let mut a0 = Mat::zeros(n, n);
        let mut ainf = Mat::zeros(n, n);
        for &(i, j) in &same {
            let v = digit();
            a0[(i, j)] = v;
            ainf[(i, j)] = v;
        }
        for &(i, j) in &below {
            a0[(i, j)] = digit();
            ainf[(i, j)] = digit();
        }
        if !a0.det(f).is_zero() {
            out.push((a0, ainf));
        }
    }
    out
}

pub fn key(m: &Mat) -> Vec<u64> {
    (0..m.rows()).flat_map(|i| m.row(i).iter().map(|e| e.index()).collect::<Vec<_>>()).collect()
}

/// Orbit labels of all `M` in `GL_n` under `M -> A_inf M A_0^{-1}`.
pub fn orbits(degrees: &[i64], f: &Field) -> (Vec<Mat>, HashMap<Vec<u64>, usize>) {
    let n = degrees.len();
    let all = general_linear(n, f);
    let group: Vec<(Mat, Mat)> = automorphism_pairs(degrees, f)
        .into_iter()
        .map(|(a0, ainf)| (a0.inverse(f).unwrap(), ainf))
        .collect();
    let mut label: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut next = 0;
    for m in &all {
        if label.contains_key(&key(m)) {
            continue;
        }
        for (a0_inv, ainf) in &group {
            label.insert(key(&ainf.mul(m, f).mul(a0_inv, f)), next);
        }
        next += 1;
    }
    (all, label)
}

/// Companion matrix of a monic polynomial.
pub fn companion(g: &Poly, f: &Field) -> Mat {
    let r = g.degree().unwrap();
    Mat::from_fn(r, r, |i, j| {
        if j == r - 1 {
            f.neg(g.coeff(i))
        } else if i == j + 1 {
            Elem::ONE
        } else {
            Elem::ZERO
        }
    })
}

/// Monic irreducible polynomials of degree `r <= 3` over `f` with nonzero constant term:
/// those without a root.
pub fn irreducibles(r: usize, f: &Field) -> Vec<Poly> {
    assert!(r <= 3);
    let q = f.order();
    let elems: Vec<Elem> = f.elements().collect();
    let mut out = Vec::new();
    for code in 0..q.pow(r as u32) {
        let mut c = code;
        let mut coeffs: Vec<Elem> = (0..r)
            .map(|_| {
                let v = elems[(c % q) as usize];
                c /= q;
                v
            })
            .collect();
        coeffs.push(Elem::ONE);
        let g = Poly::new(coeffs);
        if g.coeff(0).is_zero() {
            continue;
        }
        if r == 1 || !f.elements().any(|x| g.eval(f, x).is_zero()) {
            out.push(g);
        }
    }
    out
}

/// A rational band: degree sequence `d` with monodromy `companion(g^e)`; over a
/// splitting field of `g` it becomes `e`-Jordan bands at the roots of `g`.
#[derive(Clone, Debug)]
pub struct RationalBand {
    pub d: Vec<i64>,
    pub g: Poly,
    pub e: usize,
}

impl RationalBand {
    pub fn size(&self) -> usize {
        self.d.len() * self.g.degree().unwrap() * self.e
    }

    /// Unsorted basis: block `i` of size `r e` has degree `d_i`; `M(0) = I` and `M(inf)`
    /// maps column block `u` to row block `u - 1`, with the monodromy in block `(l-1, 0)`.
    pub fn unsorted(&self, f: &Field) -> (Vec<i64>, Mat) {
        let c = companion(&self.g.pow(self.e as u64, f), f);
        let s = c.rows();
        let l = self.d.len();
        let mut m = Mat::zeros(l * s, l * s);
        for u in 0..l {
            let row_block = (u + l - 1) % l;
            for a in 0..s {
                for b in 0..s {
                    m[(row_block * s + a, u * s + b)] = if u == 0 {
                        c[(a, b)]
                    } else if a == b {
                        Elem::ONE
                    } else {
                        Elem::ZERO
                    };
                }
            }
        }
        let degrees = (0..l * s).map(|r| self.d[r / s]).collect();
        (degrees, m)
    }
}

/// Block sum of rational bands with rows and columns sorted stably by degree.
pub fn rational_sum(parts: &[RationalBand], f: &Field) -> (Vec<i64>, Mat) {
    let mut degrees = Vec::new();
    let mut blocks: Vec<Mat> = Vec::new();
    for p in parts {
        let (d, m) = p.unsorted(f);
        degrees.extend(d);
        blocks.push(m);
    }
    let n = degrees.len();
    let mut big = Mat::zeros(n, n);
    let mut off = 0;
    for b in &blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                big[(off + i, off + j)] = b[(i, j)];
            }
        }
        off += b.rows();
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by_key(|&i| (degrees[i], i));
    let sorted = Mat::from_fn(n, n, |i, j| big[(perm[i], perm[j])]);
    (perm.iter().map(|&i| degrees[i]).collect(), sorted)
}

fn canonical_sequences(l: usize, values: &[i64]) -> Vec<Vec<i64>> {
    let width = values.len();
    let mut out = Vec::new();
    for mut code in 0..width.pow(l as u32) {
        let d: Vec<i64> = (0..l)
            .map(|_| {
                let v = values[code % width];
                code /= width;
                v
            })
            .collect();
        let rotations: Vec<Vec<i64>> = (0..l).map(|r| d[r..].iter().chain(&d[..r]).copied().collect()).collect();
        let periodic = (1..l).any(|r| rotations[r] == d);
        if !periodic && rotations.iter().all(|x| &d <= x) {
            out.push(d);
        }
    }
    out
}

/// Rational bands over `f` with degrees in `{0, 1, 2}` and size at most `n`.
pub fn rational_bands(n: usize, f: &Field) -> Vec<RationalBand> {
    let mut out = Vec::new();
    for l in 1..=n {
        for d in canonical_sequences(l, &[0, 1, 2]) {
            for r in 1..=n / l {
                for g in irreducibles(r, f) {
                    for e in 1..=n / (l * r) {
                        out.push(RationalBand { d: d.clone(), g: g.clone(), e });
                    }
                }
            }
        }
    }
    out
}

fn multisets(bands: &[RationalBand], n: usize, start: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let used: usize = acc.iter().map(|&i| bands[i].size()).sum();
    if used == n {
        out.push(acc.clone());
        return;
    }
    for i in start..bands.len() {
        if used + bands[i].size() <= n {
            acc.push(i);
            multisets(bands, n, i, acc, out);
            acc.pop();
        }
    }
}

#[derive(Debug, Default)]
pub struct OracleReport {
    pub triples: usize,
    pub orbits: usize,
    pub mismatches: Vec<String>,
}

/// Compares `decompose` with the orbit classification on every rank `n` triple over `f`
/// on the nodal curve with degrees in `{0, 1, 2}`, normalized to `M(0) = I`.
pub fn decompose_oracle(f: &Field, n: usize) -> OracleReport {
    use bandfrob::{decompose, BandData, CycleGeometry, NodeGluing, Triple};
    let bands = rational_bands(n, f);
    let mut sums = Vec::new();
    multisets(&bands, n, 0, &mut Vec::new(), &mut sums);
    let mut by_pattern: HashMap<Vec<i64>, Vec<(Vec<usize>, Mat)>> = HashMap::new();
    for s in sums {
        let parts: Vec<RationalBand> = s.iter().map(|&i| bands[i].clone()).collect();
        let (degrees, m) = rational_sum(&parts, f);
        by_pattern.entry(degrees).or_default().push((s, m));
    }
    let mut report = OracleReport::default();
    let mut patterns: Vec<_> = by_pattern.into_iter().collect();
    patterns.sort_by(|a, b| a.0.cmp(&b.0));
    for (degrees, candidates) in patterns {
        let (all, label) = orbits(&degrees, f);
        let n_orbits = label.values().max().map_or(0, |m| m + 1);
        report.orbits += n_orbits;
        let mut owner: HashMap<usize, Vec<usize>> = HashMap::new();
        for (s, m) in &candidates {
            let id = label[&key(m)];
            if owner.insert(id, s.clone()).is_some() {
                report.mismatches.push(format!("degrees {degrees:?}: two band sums share orbit {id}"));
            }
        }
        if owner.len() != n_orbits {
            report.mismatches.push(format!(
                "degrees {degrees:?}: {} orbits but {} band sums",
                n_orbits,
                owner.len()
            ));
        }
        let splitting = SplittingType::from_degrees(&degrees);
        for m in &all {
            report.triples += 1;
            let t = Triple::new(
                CycleGeometry::nodal(),
                f.clone(),
                vec![splitting.clone()],
                vec![NodeGluing { at_infinity: m.clone(), at_zero: Mat::identity(n) }],
            )
            .unwrap();
            let Some(parts) = owner.get(&label[&key(m)]) else { continue };
            let dec = match decompose(&t, 0) {
                Ok(d) => d,
                Err(e) => {
                    report.mismatches.push(format!("{m:?}: {e}"));
                    continue;
                }
            };
            let big = &dec.field;
            let mut expected = Vec::new();
            for &i in parts {
                let rb = &bands[i];
                let g = rb.g.map(|c| dec.embedding.apply(c));
                for lambda in big.elements().filter(|&x| g.eval(big, x).is_zero()) {
                    expected.push(BandData::new(rb.d.clone(), rb.e, lambda));
                }
            }
            expected.sort();
            if expected != dec.bands {
                report.mismatches.push(format!("degrees {degrees:?} M={m:?}: expected {expected:?}, got {:?}", dec.bands));
            }
        }
    }
    report
}

fn random_invertible<R: Rng>(n: usize, f: &Field, rng: &mut R) -> Mat {
    loop {
        let m = Mat::from_fn(n, n, |_, _| f.random(rng));
        if !m.det(f).is_zero() {
            return m;
        }
    }
}

/// Random `(A_0, A_inf)` of the kind induced by an automorphism of the pulled-back bundle.
pub fn random_bundle_automorphism<R: Rng>(degrees: &[i64], f: &Field, rng: &mut R) -> (Mat, Mat) {
    let n = degrees.len();
    loop {
        let mut a0 = Mat::zeros(n, n);
        let mut ainf = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if degrees[i] == degrees[j] {
                    let v = f.random(rng);
                    a0[(i, j)] = v;
                    ainf[(i, j)] = v;
                } else if degrees[i] > degrees[j] {
                    a0[(i, j)] = f.random(rng);
                    ainf[(i, j)] = f.random(rng);
                }
            }
        }
        if !a0.det(f).is_zero() {
            return (a0, ainf);
        }
    }
}

/// An isomorphic copy of `t` under random bundle automorphisms and node changes.
pub fn disguise_triple<R: Rng>(t: &bandfrob::Triple, rng: &mut R) -> bandfrob::Triple {
    use bandfrob::{NodeGluing, Triple};
    let f = t.field();
    let g = t.geometry();
    let n = t.rank();
    let autos: Vec<(Mat, Mat)> =
        (0..g.components()).map(|c| random_bundle_automorphism(&t.row_degrees(c), f, rng)).collect();
    let nodes = (0..g.components())
        .map(|j| {
            let h = random_invertible(n, f, rng).inverse(f).unwrap();
            let node = t.node(j);
            NodeGluing {
                at_infinity: autos[j].1.mul(&node.at_infinity, f).mul(&h, f),
                at_zero: autos[g.zero_side(j)].0.mul(&node.at_zero, f).mul(&h, f),
            }
        })
        .collect();
    Triple::new(g, f.clone(), t.splittings().to_vec(), nodes).unwrap()
}

/// A random valid band with `l <= l_max`, `|d_i| <= bound`, `m <= m_max`.
pub fn random_band<R: Rng>(
    f: &Field,
    geometry: bandfrob::CycleGeometry,
    l_max: usize,
    bound: i64,
    m_max: usize,
    rng: &mut R,
) -> bandfrob::BandData {
    let n = geometry.components();
    loop {
        let l = n * rng.gen_range(1..=(l_max / n).max(1));
        let d: Vec<i64> = (0..l).map(|_| rng.gen_range(-bound..=bound)).collect();
        let b = bandfrob::BandData::new(d, rng.gen_range(1..=m_max), f.random_nonzero(rng));
        if b.validate(geometry).is_ok() {
            return b;
        }
    }
}
