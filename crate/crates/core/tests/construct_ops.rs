use omt_core::classify::{is_definably_compact, is_regular};
use omt_core::cli::zoo;
use omt_core::construct::*;
use omt_core::defset::DefSubset;
use omt_core::exactline::{rat, ExtRat, Side};
use omt_core::space::{Anchor, Point, Space, TrackSet};
use omt_core::Error;

fn t3_zoo() -> Vec<Space> {
    vec![
        zoo::euclidean(),
        zoo::discrete(),
        zoo::sorgenfrey(),
        zoo::upperlimit(),
        zoo::split(),
        zoo::nsplit(3),
        zoo::nsplit(4),
        zoo::alex(1),
        zoo::alex(2),
        zoo::alex(3),
        zoo::a8_onepoint(),
    ]
}

#[test]
fn pieces_are_open_and_cover() {
    for s in t3_zoo() {
        let part = open_partition(&s).unwrap();
        let n = s.num_tracks();
        for p in &part.pieces {
            assert!(s.is_open(&p.set(n)).unwrap(), "{}: piece {p} not open", s.name());
        }
        let mut all = part.union(n);
        for x in &part.singletons {
            all = all.union(&TrackSet::point(n, x));
        }
        assert_eq!(all, s.whole(), "{}", s.name());
    }
}

#[test]
fn every_piece_embedding_is_certified() {
    for s in t3_zoo() {
        let part = open_partition(&s).unwrap();
        for p in &part.pieces {
            let e = embed_piece(p).unwrap();
            let onto = certify_embedding(&s, &p.set(s.num_tracks()), &e.target, &e.h).unwrap();
            let bijective_case = matches!(p.case, CaseTag::Case3 | CaseTag::Case4 | CaseTag::Case5);
            assert_eq!(onto, bijective_case, "{}: {p}", s.name());
        }
    }
}

#[test]
fn split_decomposes_into_two_lex_levels() {
    let s = zoo::split();
    let r = decompose_t3(&s).unwrap();
    assert_eq!(r.n_y, 1);
    assert!(r.z.is_empty());
    assert!(r.leftover(&s).is_finite());
    assert!(certify_embedding(&s, &r.y, &r.y_target, &r.h_y).unwrap());
}

#[test]
fn alexandrov_line_goes_to_z() {
    let s = zoo::alex(2);
    let r = decompose_t3(&s).unwrap();
    assert_eq!(r.n_z, 1);
    assert!(r.y.is_empty());
    assert_eq!(r.z, s.whole());
    certify_embedding(&s, &r.z, &r.z_target, &r.h_z).unwrap();
}

#[test]
fn sorgenfrey_uses_the_upper_level() {
    let s = zoo::sorgenfrey();
    let r = decompose_t3(&s).unwrap();
    assert_eq!(r.n_y, 1);
    assert_eq!(r.y, s.whole());
    let img = r.h_y.apply(&Point::new(0, rat(1, 2))).unwrap();
    assert_eq!(img, Point::new(1, rat(1, 2)));
    assert!(!certify_embedding(&s, &r.y, &r.y_target, &r.h_y).unwrap());
}

#[test]
fn discrete_embeds_in_the_middle_level() {
    let s = zoo::discrete();
    let r = decompose_t3(&s).unwrap();
    assert_eq!(r.n_y, 2);
    assert_eq!(r.h_y.apply(&Point::new(0, rat(1, 3))).unwrap(), Point::new(1, rat(1, 3)));
}

#[test]
fn separable_embedding() {
    let e = embed_separable_lex(&zoo::split()).unwrap();
    assert!(e.target.num_tracks() == 2);
    let s = zoo::sorgenfrey();
    let e = embed_separable_lex(&s).unwrap();
    assert_eq!(e.h.apply(&Point::new(0, rat(1, 4))).unwrap(), Point::new(1, rat(1, 4)));
    certify_embedding(&s, &e.y, &e.target, &e.h).unwrap();
    assert_eq!(embed_separable_lex(&zoo::alex(2)).unwrap_err(), Error::NotSeparable);
}

#[test]
fn euclidean_one_point_compactification() {
    let s = zoo::euclidean();
    let op = one_point_compactify(&s).unwrap();
    let c = op.added.clone().unwrap();
    let a = op.space.anchors(&c).unwrap();
    let want: std::collections::BTreeSet<Anchor> = [
        Anchor::new(0, ExtRat::int(0), Side::Right),
        Anchor::new(0, ExtRat::int(1), Side::Left),
    ]
    .into_iter()
    .collect();
    assert_eq!(a, want);
    assert!(is_definably_compact(&op.space));
    assert!(op.space.is_hausdorff());
}

#[test]
fn compact_input_is_unchanged() {
    let s = zoo::split();
    let op = one_point_compactify(&s).unwrap();
    assert!(op.added.is_none());
    assert_eq!(op.space, s);
    assert_eq!(one_point_compactify(&zoo::sorgenfrey()).unwrap_err(), Error::NotNearCompact);
}

#[test]
fn compactify_zoo() {
    for s in t3_zoo() {
        let c = compactify(&s).unwrap();
        assert!(is_definably_compact(&c.space), "{}", s.name());
        assert!(c.space.is_hausdorff(), "{}", s.name());
        assert!(is_regular(&c.space).unwrap(), "{}", s.name());
        certify_embedding(&s, &s.whole(), &c.space, &c.h).unwrap();
        assert!(c.added_points(&s).len() <= c.near.partition.singletons.len() + 1, "{}", s.name());
    }
    assert!(matches!(compactify(&zoo::a9_nonregular()), Err(Error::NotT3(_))));
}

#[test]
fn euclidean_compactification_adds_one_point() {
    let s = zoo::euclidean();
    let c = compactify(&s).unwrap();
    assert_eq!(c.added_points(&s).len(), 1);
}

fn set(n: usize, t: usize, d: &str) -> TrackSet {
    TrackSet::single(n, t, d.parse::<DefSubset>().unwrap())
}

#[test]
fn separation_examples() {
    let s = zoo::euclidean();
    let b = s.closure(&set(1, 0, "(0,1/4)")).unwrap();
    let c = s.closure(&set(1, 0, "(1/2,3/4)")).unwrap();
    let (u, v) = separate_closed_sets(&s, &b, &c).unwrap();
    assert!(s.is_open(&u).unwrap() && s.is_open(&v).unwrap());
    assert!(u.intersect(&v).is_empty());

    let s = zoo::split();
    let b = TrackSet::point(2, &Point::new(0, rat(1, 2)));
    let c = TrackSet::point(2, &Point::new(1, rat(1, 2)));
    let (u, v) = separate_closed_sets(&s, &b, &c).unwrap();
    assert!(b.is_subset(&u) && c.is_subset(&v));

    let s = zoo::euclidean();
    let h = set(1, 0, "{1/2}");
    assert_eq!(separate_closed_sets(&s, &h, &h).unwrap_err(), Error::NotDisjoint);
}
