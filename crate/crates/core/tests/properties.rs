mod common;

use bandfrob::format::{parse_triple, write_triple};
use bandfrob::laurent::hom_sections;
use bandfrob::{
    birkhoff_split, canonical_band, decompose, extend_field, hom_triples, is_isomorphic, make_band_triple,
    pullback_triple, CycleGeometry, Elem, Field, Poly, SectionRep,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{disguise, disguise_triple, random_band};

fn small_field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![(2u64, 1usize), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1)])
        .prop_map(|(p, k)| Field::default_for(p, k).unwrap())
}

fn elem(f: &Field, rng: &mut ChaCha8Rng) -> Elem {
    f.random(rng)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms(f in small_field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (elem(&f, &mut rng), elem(&f, &mut rng), elem(&f, &mut rng));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
        }
        prop_assert_eq!(f.frobenius_iter(a, f.k() as u32), a);
    }

    #[test]
    fn factorization_multiplies_back(f in small_field(), seed in any::<u64>(), deg in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coeffs: Vec<Elem> = (0..deg).map(|_| f.random(&mut rng)).collect();
        coeffs.push(f.random_nonzero(&mut rng));
        let g = Poly::new(coeffs);
        let factors = g.factor(&f, seed).unwrap();
        let product = factors.iter().fold(Poly::constant(g.leading()), |acc, (h, e)| acc.mul(&h.pow(*e as u64, &f), &f));
        prop_assert_eq!(product, g);
        for (h, _) in &factors {
            prop_assert!(h.is_irreducible(&f));
        }
    }

    #[test]
    fn extension_is_a_frobenius_compatible_embedding(f in small_field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = loop {
            let r = rng.gen_range(2..=3);
            let mut coeffs: Vec<Elem> = (0..r).map(|_| f.random(&mut rng)).collect();
            coeffs.push(Elem::ONE);
            let g = Poly::new(coeffs);
            if g.is_irreducible(&f) {
                break g;
            }
        };
        let Ok((big, emb, root)) = extend_field(&f, &g, seed) else { return Ok(()) };
        prop_assert!(g.map(|c| emb.apply(c)).eval(&big, root).is_zero());
        let images: std::collections::HashSet<Elem> = f.elements().map(|a| emb.apply(a)).collect();
        prop_assert_eq!(images.len() as u64, f.order());
        for a in f.elements().take(30) {
            prop_assert_eq!(emb.apply(f.frobenius(a)), big.frobenius(emb.apply(a)));
        }
    }

    #[test]
    fn birkhoff_invariants(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = Field::prime([2, 3, 5][rng.gen_range(0..3)]).unwrap();
        let planted: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let t = disguise(&planted, &f, &mut rng);
        let s = birkhoff_split(&t, &f).unwrap();
        // invariant under a further disguise
        let u = common::random_unimodular(n, &f, &mut rng, true, 2);
        let v = common::random_unimodular(n, &f, &mut rng, false, 2);
        prop_assert_eq!(birkhoff_split(&u.mul(&t, &f).mul(&v, &f), &f).unwrap(), s.clone());
        let (_, e) = bandfrob::birkhoff::unit_determinant(&t, &f).unwrap();
        prop_assert_eq!(s.total_degree(), -e);
        let pulled = birkhoff_split(&t.frobenius_substitute(&f), &f).unwrap();
        prop_assert_eq!(pulled, s.scale(f.p() as i64));
    }

    #[test]
    fn eval_pair_shape(a in -3i64..=3, gap in 0i64..=3, seed in any::<u64>()) {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = a + gap;
        let basis = hom_sections(a, b);
        let coeffs: Vec<Elem> = basis.iter().map(|_| f.random(&mut rng)).collect();
        let s = SectionRep { a, b, coeffs: coeffs.clone() };
        let (z, inf) = s.eval_pair().unwrap();
        // linearity: the pair of a combination is the combination of pairs
        let (mut z2, mut inf2) = (Elem::ZERO, Elem::ZERO);
        for (e, c) in basis.iter().zip(&coeffs) {
            let (bz, binf) = e.eval_pair().unwrap();
            z2 = f.add(z2, f.mul(*c, bz));
            inf2 = f.add(inf2, f.mul(*c, binf));
        }
        prop_assert_eq!((z, inf), (z2, inf2));
        let images: std::collections::HashSet<(Elem, Elem)> = basis.iter().map(|e| e.eval_pair().unwrap()).collect();
        if gap == 0 {
            prop_assert!(images.iter().all(|(x, y)| x == y));
        } else {
            prop_assert!(images.contains(&(Elem::ONE, Elem::ZERO)) && images.contains(&(Elem::ZERO, Elem::ONE)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn band_round_trip(f in small_field(), seed in any::<u64>(), components in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = CycleGeometry::new(components).unwrap();
        let b = random_band(&f, g, 4, 3, 3, &mut rng);
        let t = make_band_triple(g, &f, &b).unwrap();
        let dec = decompose(&t, seed).unwrap();
        prop_assert_eq!(dec.bands, vec![canonical_band(&b, g)]);
        prop_assert_eq!(parse_triple(&write_triple(&t)).unwrap(), t);
    }

    #[test]
    fn disguised_sums_decompose_to_their_parts(f in small_field(), seed in any::<u64>(), components in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = CycleGeometry::new(components).unwrap();
        let b1 = random_band(&f, g, 2 * components, 2, 2, &mut rng);
        let b2 = random_band(&f, g, 2 * components, 2, 2, &mut rng);
        let t = make_band_triple(g, &f, &b1).unwrap().direct_sum(&make_band_triple(g, &f, &b2).unwrap()).unwrap();
        let hidden = disguise_triple(&t, &mut rng);
        let dec = decompose(&hidden, seed).unwrap();
        let mut expected = vec![canonical_band(&b1, g), canonical_band(&b2, g)];
        expected.sort();
        prop_assert_eq!(&dec.bands, &expected);
        let degree: i64 = dec.bands.iter().map(|b| b.total_degree()).sum();
        prop_assert_eq!(degree, t.total_degree());
        let rank: usize = dec.bands.iter().map(|b| b.rank(components)).sum();
        prop_assert_eq!(rank, t.rank());
        prop_assert!(is_isomorphic(&t, &hidden, seed).unwrap());
        prop_assert!(is_isomorphic(&hidden, &t, seed ^ 1).unwrap());
        prop_assert!(is_isomorphic(&dec.reassemble(g).unwrap(), &hidden.base_change(&dec.embedding), seed).unwrap());
    }

    #[test]
    fn hom_basis_commutes(f in small_field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = CycleGeometry::nodal();
        let a = disguise_triple(&make_band_triple(g, &f, &random_band(&f, g, 3, 2, 2, &mut rng)).unwrap(), &mut rng);
        let b = disguise_triple(&make_band_triple(g, &f, &random_band(&f, g, 3, 2, 2, &mut rng)).unwrap(), &mut rng);
        for (x, y) in [(&a, &b), (&b, &a), (&a, &a)] {
            for m in hom_triples(x, y).unwrap().basis {
                prop_assert!(m.satisfies_commuting_squares(x, y));
            }
        }
    }

    #[test]
    fn pullback_is_additive(f in small_field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = CycleGeometry::nodal();
        let t1 = disguise_triple(&make_band_triple(g, &f, &random_band(&f, g, 3, 3, 2, &mut rng)).unwrap(), &mut rng);
        let t2 = disguise_triple(&make_band_triple(g, &f, &random_band(&f, g, 3, 3, 2, &mut rng)).unwrap(), &mut rng);
        let sum = t1.direct_sum(&t2).unwrap();
        let pulled = pullback_triple(&sum);
        prop_assert_eq!(&pulled, &pullback_triple(&t1).direct_sum(&pullback_triple(&t2)).unwrap());
        prop_assert_eq!(pulled.rank(), sum.rank());
        prop_assert_eq!(pulled.total_degree(), sum.total_degree() * f.p() as i64);
    }

    #[test]
    fn non_isomorphic_bands_are_told_apart(f in small_field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = CycleGeometry::nodal();
        let b1 = random_band(&f, g, 3, 2, 2, &mut rng);
        let b2 = random_band(&f, g, 3, 2, 2, &mut rng);
        let t1 = make_band_triple(g, &f, &b1).unwrap();
        let t2 = disguise_triple(&make_band_triple(g, &f, &b2).unwrap(), &mut rng);
        let same = canonical_band(&b1, g) == canonical_band(&b2, g);
        prop_assert_eq!(is_isomorphic(&t1, &t2, seed).unwrap(), same);
    }
}
