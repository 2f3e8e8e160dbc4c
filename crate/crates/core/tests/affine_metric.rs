mod common;

use num_traits::{One, Zero};
use common::Sampler;
use omt_core::affinemetric::*;
use omt_core::classify::PieceLabel;
use omt_core::cli::zoo;
use omt_core::construct::compactify;
use omt_core::curves::{germ_curve, random_curve, Curve, End};
use omt_core::exactline::{int, rat, AffineMap, ExtRat, Rat, Side};
use omt_core::space::{Anchor, Point, Space};
use omt_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn metric_spaces() -> Vec<Space> {
    vec![
        zoo::euclidean(),
        zoo::discrete(),
        zoo::a8_onepoint(),
        zoo::alex(1),
        compactify(&zoo::euclidean()).unwrap().space,
    ]
}

#[test]
fn glued_circle_distances() {
    let s = compactify(&zoo::euclidean()).unwrap().space;
    let m = synthesize_metric(&s).unwrap();
    let d = eval_metric(&m, &Point::new(0, rat(1, 10)), &Point::new(0, rat(9, 10))).unwrap();
    assert_eq!(d, rat(1, 5));
}

#[test]
fn clopen_pieces_are_at_distance_one() {
    let m = synthesize_metric(&zoo::discrete()).unwrap();
    let d = eval_metric(&m, &Point::new(0, rat(1, 3)), &Point::new(0, rat(2, 3))).unwrap();
    assert_eq!(d, Rat::one());
    assert!(matches!(
        eval_metric(&m, &Point::new(0, int(3)), &Point::new(0, rat(1, 2))),
        Err(Error::PointOutsideDomain(_))
    ));
}

#[test]
fn refusals() {
    let c = compactify(&zoo::discrete()).unwrap().space;
    assert!(matches!(synthesize_metric(&c), Err(Error::HalfOpenPiece(_))));
    assert!(matches!(synthesize_metric(&zoo::split()), Err(Error::HalfOpenPiece(_))));
    assert!(matches!(synthesize_metric(&zoo::a8()), Err(Error::NotHausdorff(_))));
    assert!(matches!(synthesize_metric(&zoo::a7_const_inf()), Err(Error::NotHausdorff(_)) | Err(Error::Unbounded(_))));
    assert!(matches!(is_affine(&zoo::a8()), Err(Error::NotHausdorff(_))));
}

#[test]
fn metric_axioms_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for s in metric_spaces() {
        let m = synthesize_metric(&s).unwrap();
        let pts = Sampler::new(&s);
        for _ in 0..300 {
            let (x, y, z) = (pts.point(&mut rng), pts.point(&mut rng), pts.point(&mut rng));
            let dxy = eval_metric(&m, &x, &y).unwrap();
            assert_eq!(dxy, eval_metric(&m, &y, &x).unwrap());
            assert_eq!(dxy.is_zero(), x == y, "{}: {x} {y}", s.name());
            let via = eval_metric(&m, &x, &z).unwrap() + eval_metric(&m, &z, &y).unwrap();
            assert!(dxy <= via, "{}: {x} {y} {z}", s.name());
        }
    }
}

#[test]
fn metric_convergence_matches_topology() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for s in metric_spaces() {
        let m = synthesize_metric(&s).unwrap();
        for _ in 0..50 {
            let g = random_curve(&s, &mut rng).unwrap();
            assert!(agrees_along(&m, &s, &g).unwrap(), "{}", s.name());
        }
    }
}

#[test]
fn hub_germ_limits() {
    let s = zoo::a8_onepoint();
    let m = synthesize_metric(&s).unwrap();
    let zero = Point::new(0, int(0));
    let into_zero = germ_curve(&s, &Anchor::new(0, ExtRat::int(0), Side::Right));
    assert!(agrees_along(&m, &s, &into_zero).unwrap());
    assert!(m.germ_distance(&Anchor::new(0, ExtRat::int(0), Side::Right), &zero).unwrap().is_zero());
    let g = Curve::affine(0, ExtRat::int(0), ExtRat::int(1), End::Lo, AffineMap::new(int(-1), rat(1, 2))).unwrap();
    assert!(agrees_along(&m, &s, &g).unwrap());
    assert_eq!(m.germ_distance(&Anchor::new(0, ExtRat::Fin(rat(1, 2)), Side::Left), &Point::new(0, rat(1, 2))).unwrap(), Rat::one());
}

#[test]
fn split_collapses_two_to_one() {
    let s = zoo::split();
    let r = two_to_one_euclidean(&s).unwrap();
    assert_eq!(r.max_fiber, 2);
    let images = [Point::new(0, rat(1, 2)), Point::new(1, rat(1, 2))].map(|p| r.from_source.apply(&p).unwrap());
    assert_eq!(images[0], images[1]);
    assert!(r.target.contains(&images[0]));
    assert!(matches!(is_affine(&r.target).unwrap(), Affineness::Affine(_)));
}

#[test]
fn euclidean_collapse_is_injective() {
    let s = zoo::euclidean();
    let r = two_to_one_euclidean(&s).unwrap();
    assert_eq!(r.max_fiber, 1);
    assert!(r.from_source.is_injective(&s));
    assert_eq!(two_to_one_euclidean(&zoo::alex(2)).unwrap_err(), Error::NotSeparable);
    assert!(matches!(two_to_one_euclidean(&zoo::a9_nonregular()), Err(Error::NotT3(_))));
}

#[test]
fn graph_text_is_stable() {
    let m = synthesize_metric(&zoo::a8_onepoint()).unwrap();
    assert_eq!(m.to_string(), m.clone().to_string());
    match is_affine(&zoo::discrete()).unwrap() {
        Affineness::NotAffine(p) => assert_eq!(p.label, PieceLabel::Discrete),
        other => panic!("{other:?}"),
    }
}
