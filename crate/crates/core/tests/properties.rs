mod common;

use num_traits::Zero;
use omt_core::affinemetric::{eval_metric, is_affine, synthesize_metric, two_to_one_euclidean, Affineness};
use omt_core::classify::{is_definably_compact, is_t3};
use omt_core::cli::format::{parse_space_file, serialize};
use omt_core::cli::fuzz::{family, Family};
use omt_core::construct::certify_embedding;
use omt_core::curves::{curves_equivalent, germ_curve, random_curve, tau_limit};
use omt_core::defset::DefSubset;
use omt_core::exactline::{AffineMap, ExtRat, Rat};
use omt_core::space::{Point, Space};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_set, Sampler};

fn small_rat() -> impl Strategy<Value = Rat> {
    (-40i64..40, 1i64..9).prop_map(|(n, d)| Rat::new(n.into(), d.into()))
}

fn defset() -> impl Strategy<Value = DefSubset> {
    prop::collection::vec((small_rat(), small_rat(), any::<bool>(), any::<bool>()), 0..4).prop_map(|parts| {
        DefSubset::union_all(parts.into_iter().map(|(a, b, lc, hc)| {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            DefSubset::interval(ExtRat::Fin(lo), ExtRat::Fin(hi), lc, hc)
        }))
    })
}

fn fuzzed(fam: Family) -> impl Strategy<Value = Space> {
    any::<u32>().prop_map(move |seed| family(seed as u64, fam, 1).remove(0))
}

fn injective_map() -> impl Strategy<Value = AffineMap> {
    (small_rat(), small_rat()).prop_filter_map("constant", |(a, b)| (!a.is_zero()).then(|| AffineMap::new(a, b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn set_algebra(a in defset(), b in defset()) {
        prop_assert_eq!(a.union(&b).complement(), a.complement().intersect(&b.complement()));
        prop_assert_eq!(a.difference(&b).union(&a.intersect(&b)), a.clone());
        prop_assert!(a.interior_e().is_subset(&a) && a.is_subset(&a.closure_e()));
        prop_assert_eq!(a.to_string().parse::<DefSubset>().unwrap(), a);
    }

    #[test]
    fn affine_images(a in defset(), f in injective_map()) {
        prop_assert_eq!(a.image(&f).preimage(&f), a.clone());
        prop_assert_eq!(a.image(&f).image(&f.inverse().unwrap()), a);
    }

    #[test]
    fn closure_and_interior(s in fuzzed(Family::General), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let y = random_set(&s, &mut rng);
        let cl = s.closure(&y).unwrap();
        prop_assert!(y.is_subset(&cl));
        prop_assert_eq!(s.closure(&cl).unwrap(), cl.clone());
        prop_assert!(s.is_closed(&cl).unwrap());
        let int = s.interior(&y).unwrap();
        prop_assert_eq!(int.clone(), s.whole().difference(&s.closure(&s.whole().difference(&y)).unwrap()));
        prop_assert!(s.is_open(&int).unwrap());
    }

    #[test]
    fn files_round_trip(s in fuzzed(Family::General)) {
        let text = serialize(&s);
        let back = parse_space_file(&text).unwrap();
        prop_assert_eq!(serialize(&back), text);
        prop_assert_eq!(back, s);
    }

    #[test]
    fn limits_are_unique_and_class_invariant(s in fuzzed(Family::Regular), seed in any::<u64>()) {
        prop_assume!(s.is_hausdorff());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10 {
            let g = random_curve(&s, &mut rng).unwrap();
            let lim = tau_limit(&s, &g);
            prop_assert!(lim.points().is_some_and(|p| p.len() <= 1));
            let h = random_curve(&s, &mut rng).unwrap();
            prop_assert!(curves_equivalent(&g, &g));
            prop_assert_eq!(curves_equivalent(&g, &h), curves_equivalent(&h, &g));
            if curves_equivalent(&g, &h) {
                prop_assert_eq!(tau_limit(&s, &h), lim);
            }
        }
    }

    #[test]
    fn anchors_have_witness_curves(s in fuzzed(Family::General)) {
        for (t, c) in s.sample_cells(None) {
            let x = Point::new(t, c.sample());
            for a in s.anchors(&x).unwrap() {
                let g = germ_curve(&s, &a);
                prop_assert!(tau_limit(&s, &g).contains(&x), "{} {}", x, a);
            }
        }
    }

    #[test]
    fn metrics_are_symmetric(s in fuzzed(Family::Compact), seed in any::<u64>()) {
        let m = synthesize_metric(&s);
        prop_assume!(m.is_ok());
        let m = m.unwrap();
        let pts = Sampler::new(&s);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..50 {
            let (x, y) = (pts.point(&mut rng), pts.point(&mut rng));
            let d = eval_metric(&m, &x, &y).unwrap();
            prop_assert_eq!(d.clone(), eval_metric(&m, &y, &x).unwrap());
            prop_assert_eq!(d.is_zero(), x == y);
            prop_assert!(eval_metric(&m, &x, &x).unwrap().is_zero());
        }
    }

    #[test]
    fn two_to_one_fibers(s in fuzzed(Family::Compact)) {
        prop_assume!(is_t3(&s) && s.is_definably_separable());
        let r = two_to_one_euclidean(&s).unwrap();
        prop_assert!(r.max_fiber <= 2);
        let affine = matches!(is_affine(&r.target), Ok(Affineness::Affine(_)));
        prop_assert!(affine);
        let pts = Sampler::new(&s);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let x = pts.point(&mut rng);
            let y = r.from_source.apply(&x).unwrap();
            let fiber = preimages(&r.from_source, &y);
            prop_assert!(fiber <= 2, "{} -> {} has {} preimages", x, y, fiber);
        }
    }

    #[test]
    fn compact_bijections_have_continuous_inverses(s in fuzzed(Family::Compact), f in injective_map()) {
        prop_assume!(s.is_hausdorff() && is_definably_compact(&s));
        let maps = vec![f; s.num_tracks()];
        let perm: Vec<usize> = (0..s.num_tracks()).rev().collect();
        let t = s.push_forward(&maps, &perm).unwrap();
        let h = omt_core::curves::PiecewiseMap::new(
            s.sample_cells(None)
                .into_iter()
                .map(|(tr, c)| omt_core::curves::AssignPiece { src: tr, cell: c, map: maps[tr].clone(), dst: perm[tr] })
                .collect(),
        );
        prop_assert!(certify_embedding(&s, &s.whole(), &t, &h).unwrap());
    }
}

fn preimages(h: &omt_core::curves::PiecewiseMap, y: &Point) -> usize {
    h.pieces
        .iter()
        .filter(|a| a.dst == y.track)
        .filter(|a| match a.map.inverse() {
            Some(inv) => a.cell.contains(&inv.apply(&y.pos)),
            None => a.map.apply(&a.cell.sample()) == y.pos,
        })
        .count()
}
