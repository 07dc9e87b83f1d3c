//! Frobenius pullback of triples and the band verification harness.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::band::{band_triple_with_corner, canonical_band, is_periodic, make_band_triple, BandData};
use crate::decompose::{decompose, Decomposition};
use crate::error::Result;
use crate::field::{Elem, Field};
use crate::iso::is_isomorphic;
use crate::triple::{CycleGeometry, Triple};

/// Degrees times `p`, gluing entries raised to the `p`-th power.
pub fn pullback_triple(t: &Triple) -> Triple {
    let f = t.field();
    let p = f.p() as i64;
    t.map_data(|s| s.scale(p), |x| f.frobenius(x))
}

/// `e`-fold pullback; `e = 0` gives `t` back.
pub fn iterate_pullback(t: &Triple, e: u32) -> Triple {
    let f = t.field();
    let scale = (f.p() as i64).pow(e);
    t.map_data(|s| s.scale(scale), |x| f.frobenius_iter(x, e))
}

/// The band expected for the pullback of `b`.
pub fn expected_pullback_band(field: &Field, b: &BandData) -> BandData {
    let p = field.p() as i64;
    BandData::new(b.d.iter().map(|&x| x * p).collect(), b.m, field.frobenius(b.lambda))
}

#[derive(Clone, Debug)]
pub struct PullbackReport {
    pub field: Field,
    pub geometry: CycleGeometry,
    pub input: BandData,
    pub pullback: Triple,
    pub expected: BandData,
    pub isomorphic: bool,
    /// `None` when the pullback is not a valid triple (only possible under fault
    /// injection) or decomposition failed.
    pub decomposition: Option<Decomposition>,
    pub elapsed: Duration,
}

impl PullbackReport {
    /// Isomorphic to the expected band and decomposes to exactly that band.
    pub fn verdict(&self) -> bool {
        self.isomorphic
            && self
                .decomposition
                .as_ref()
                .is_some_and(|d| d.bands == [canonical_band(&self.expected, self.geometry)] && d.extension_degree() == 1)
    }

    pub fn is_indecomposable(&self) -> bool {
        self.decomposition.as_ref().is_some_and(|d| d.bands.len() == 1)
    }

    pub fn line(&self, timing: bool) -> String {
        let mut s = format!("p={} k={} ", self.field.p(), self.field.k());
        if self.geometry.components() > 1 {
            s += &format!("N={} ", self.geometry.components());
        }
        s += &crate::format::band_line(&self.field, &self.input);
        s += if self.verdict() { " verdict=OK" } else { " verdict=FAIL" };
        if timing {
            s += &format!(" time_ms={:.3}", self.elapsed.as_secs_f64() * 1e3);
        }
        s
    }
}

fn check_pullback(
    geometry: CycleGeometry,
    field: &Field,
    b: &BandData,
    pullback: Triple,
    seed: u64,
    start: Instant,
) -> Result<PullbackReport> {
    let expected = expected_pullback_band(field, b);
    let target = make_band_triple(geometry, field, &expected)?;
    let (isomorphic, decomposition) = if pullback.validate().is_err() {
        (false, None)
    } else {
        let iso = pullback == target || is_isomorphic(&pullback, &target, seed)?;
        (iso, decompose(&pullback, seed).ok())
    };
    Ok(PullbackReport {
        field: field.clone(),
        geometry,
        input: b.clone(),
        pullback,
        expected,
        isomorphic,
        decomposition,
        elapsed: start.elapsed(),
    })
}

/// Builds `B(d, m, lambda)`, pulls it back and compares with `B(pd, m, lambda^p)`.
pub fn verify_theorem(geometry: CycleGeometry, field: &Field, b: &BandData, seed: u64) -> Result<PullbackReport> {
    let start = Instant::now();
    let t = make_band_triple(geometry, field, b)?;
    check_pullback(geometry, field, b, pullback_triple(&t), seed, start)
}

/// Same as [`verify_theorem`] with one Jordan diagonal entry of the pullback perturbed by
/// a nonzero amount chosen from `fault_seed`.
pub fn verify_with_fault(
    geometry: CycleGeometry,
    field: &Field,
    b: &BandData,
    seed: u64,
    fault_seed: u64,
) -> Result<PullbackReport> {
    let start = Instant::now();
    let (t, corner) = band_triple_with_corner(geometry, field, b)?;
    let pulled = pullback_triple(&t);
    let mut rng = ChaCha8Rng::seed_from_u64(fault_seed);
    let &(r, c) = corner.choose(&mut rng).expect("nonempty Jordan block");
    let node = geometry.components() - 1;
    let old = pulled.node(node).at_infinity[(r, c)];
    let faulty = pulled.with_entry(node, true, r, c, field.add(old, field.random_nonzero(&mut rng)));
    check_pullback(geometry, field, b, faulty, seed, start)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridConfig {
    pub p_list: Vec<u64>,
    pub k_max: usize,
    pub l_max: usize,
    pub m_max: usize,
    pub deg_bound: i64,
    pub lambdas: usize,
    pub components: usize,
    pub seed: u64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { p_list: vec![2, 3, 5], k_max: 4, l_max: 4, m_max: 3, deg_bound: 3, lambdas: 5, components: 1, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct GridInstance {
    pub field: Field,
    pub band: BandData,
    pub seed: u64,
}

/// Canonical non-periodic degree sequences of length `l` (a multiple of `components`)
/// with entries in `[-bound, bound]`.
pub fn degree_sequences(l: usize, bound: i64, geometry: CycleGeometry) -> Vec<Vec<i64>> {
    let width = (2 * bound + 1) as usize;
    let total = width.pow(l as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let d: Vec<i64> = (0..l)
            .map(|_| {
                let v = (c % width) as i64 - bound;
                c /= width;
                v
            })
            .rev()
            .collect();
        if is_periodic(&d, geometry.components()) {
            continue;
        }
        let b = BandData::new(d.clone(), 1, Elem::ONE);
        if canonical_band(&b, geometry).d == d {
            out.push(d);
        }
    }
    out
}

/// Distinct nonzero elements, sorted, drawn with a seeded generator.
pub fn sample_lambdas(field: &Field, count: usize, seed: u64) -> Vec<Elem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (field.p() << 32) ^ field.k() as u64);
    let mut all: Vec<Elem> = field.elements().filter(|e| !e.is_zero()).collect();
    all.shuffle(&mut rng);
    all.truncate(count);
    all.sort();
    all
}

/// Grid instances in report order: by `p`, `k`, `l`, `d`, `m`, `lambda`.
pub fn grid_instances(cfg: &GridConfig) -> Result<Vec<GridInstance>> {
    let geometry = CycleGeometry::new(cfg.components)?;
    let n = cfg.components;
    let mut out = Vec::new();
    for &p in &cfg.p_list {
        for k in 1..=cfg.k_max {
            let field = Field::default_for(p, k)?;
            let lambdas = sample_lambdas(&field, cfg.lambdas, cfg.seed);
            for l in (n..=cfg.l_max).step_by(n) {
                for d in degree_sequences(l, cfg.deg_bound, geometry) {
                    for m in 1..=cfg.m_max {
                        for &lambda in &lambdas {
                            let seed = cfg.seed.wrapping_add((out.len() as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                            out.push(GridInstance { field: field.clone(), band: BandData::new(d.clone(), m, lambda), seed });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Runs the grid on `jobs` threads and hands reports to `sink` in grid order. With
/// `fault = Some(s)`, one instance chosen from `s` gets a perturbed pullback.
pub fn run_grid(
    cfg: &GridConfig,
    jobs: usize,
    fault: Option<u64>,
    mut sink: impl FnMut(&PullbackReport),
) -> Result<Vec<PullbackReport>> {
    let geometry = CycleGeometry::new(cfg.components)?;
    let instances = grid_instances(cfg)?;
    let faulty = fault.map(|s| (ChaCha8Rng::seed_from_u64(s).gen_range(0..instances.len().max(1)), s));
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, Result<PullbackReport>)>();
    let mut slots: Vec<Option<PullbackReport>> = vec![None; instances.len()];
    let mut first_error = None;
    std::thread::scope(|scope| {
        for _ in 0..jobs.max(1) {
            let tx = tx.clone();
            let (instances, next) = (&instances, &next);
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(inst) = instances.get(i) else { break };
                let report = match faulty {
                    Some((idx, s)) if idx == i => verify_with_fault(geometry, &inst.field, &inst.band, inst.seed, s),
                    _ => verify_theorem(geometry, &inst.field, &inst.band, inst.seed),
                };
                if tx.send((i, report)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut emitted = 0;
        for (i, report) in rx {
            match report {
                Ok(r) => slots[i] = Some(r),
                Err(e) => {
                    first_error.get_or_insert(e);
                }
            }
            while let Some(Some(r)) = slots.get(emitted) {
                sink(r);
                emitted += 1;
            }
        }
    });
    if let Some(e) = first_error {
        return Err(e);
    }
    Ok(slots.into_iter().flatten().collect())
}
