use omt_core::cli::zoo;
use omt_core::defset::DefSubset;
use omt_core::exactline::{int, rat, AffineMap, ExtRat, Side};
use omt_core::space::{Anchor, Point, TrackSet};

fn ts(v: &[&str]) -> TrackSet {
    TrackSet(v.iter().map(|s| s.parse::<DefSubset>().unwrap()).collect())
}

fn anchor(t: usize, v: omt_core::exactline::Rat, s: Side) -> Anchor {
    Anchor::new(t, ExtRat::Fin(v), s)
}

#[test]
fn anchors_of_fixtures() {
    let x = Point::new(0, rat(1, 2));
    let e1: Vec<_> = zoo::euclidean().anchors(&x).unwrap().into_iter().collect();
    assert_eq!(e1, vec![anchor(0, rat(1, 2), Side::Right), anchor(0, rat(1, 2), Side::Left)]);
    let sp: Vec<_> = zoo::split().anchors(&x).unwrap().into_iter().collect();
    assert_eq!(sp, vec![anchor(0, rat(1, 2), Side::Left), anchor(1, rat(1, 2), Side::Left)]);
    assert!(zoo::discrete().anchors(&x).unwrap().is_empty());
    assert!(zoo::discrete().anchors(&Point::new(0, int(2))).is_err());
}

#[test]
fn basic_neighbourhoods() {
    let x = Point::new(0, rat(1, 2));
    assert_eq!(zoo::sorgenfrey().basic_nbhd(&x, &rat(1, 4)).unwrap(), ts(&["[1/2,3/4)"]));
    assert_eq!(
        zoo::alex(2).basic_nbhd(&x, &rat(1, 8)).unwrap(),
        ts(&["(3/8,5/8)", "(3/8,1/2) | (1/2,5/8)"])
    );
    assert_eq!(zoo::discrete().basic_nbhd(&x, &rat(1, 3)).unwrap(), ts(&["{1/2}"]));
    let a7 = zoo::a7_const_inf();
    let u = a7.basic_nbhd(&Point::new(0, int(0)), &rat(1, 2)).unwrap();
    assert_eq!(u, ts(&["(-inf,-2) | (-1/2,1/2)"]));
}

#[test]
fn validation() {
    assert!(zoo::split().validate_topology().is_ok());
    assert!(zoo::alex(2).validate_topology().is_ok());
    let a = zoo::alex(2);
    let branches: Vec<_> = a.branches().iter().filter(|b| b.side == Side::Right).cloned().collect();
    let broken = omt_core::space::Space::new("broken", a.tracks().to_vec(), a.flags().to_vec(), branches).unwrap();
    let v = broken.validate_topology().unwrap_err();
    assert!(v.iter().all(|v| v.anchor.side == Side::Left && v.anchor.track == 0));
    assert!(v.iter().all(|v| v.required.track == 1 && v.required.side == Side::Left));
}

#[test]
fn closures() {
    assert_eq!(zoo::euclidean().closure(&ts(&["(0,1/2)"])).unwrap(), ts(&["(0,1/2]"]));
    assert_eq!(zoo::sorgenfrey().closure(&ts(&["(0,1/2)"])).unwrap(), ts(&["(0,1/2)"]));
    let sp = zoo::split();
    let bottom = ts(&["[0,1]", "empty"]);
    assert_eq!(sp.closure(&bottom).unwrap(), ts(&["[0,1]", "[0,1)"]));
    assert_eq!(sp.frontier(&bottom).unwrap(), ts(&["empty", "[0,1)"]));
    assert!(!sp.is_open(&bottom).unwrap());
    assert!(zoo::sorgenfrey().closure(&ts(&["(0,2)"])).is_err());
}

#[test]
fn openness() {
    assert!(zoo::sorgenfrey().is_open(&ts(&["[1/2,3/4)"])).unwrap());
    let e1 = zoo::euclidean();
    assert!(!e1.is_open(&ts(&["[1/2,3/4)"])).unwrap());
    assert_eq!(e1.interior(&ts(&["[1/2,3/4)"])).unwrap(), ts(&["(1/2,3/4)"]));
}

#[test]
fn hausdorff() {
    assert!(zoo::split().is_hausdorff());
    assert!(zoo::euclidean().is_hausdorff());
    assert!(zoo::alex(3).is_hausdorff());
    assert!(zoo::a9_nonregular().is_hausdorff());
    let w = zoo::a7_const_inf().hausdorff_witness().unwrap();
    assert_ne!(w.p, w.q);
    assert_eq!(w.shared, Anchor::new(0, ExtRat::NegInf, Side::Right));
    let w = zoo::a8().hausdorff_witness().unwrap();
    assert_eq!(w.shared, anchor(0, int(0), Side::Right));
}

#[test]
fn isolated_and_separable() {
    assert_eq!(zoo::discrete().isolated_points(), ts(&["(0,1)"]));
    assert!(!zoo::discrete().is_definably_separable());
    assert!(zoo::sorgenfrey().isolated_points().is_empty());
    assert!(zoo::sorgenfrey().is_definably_separable());
    assert_eq!(zoo::alex(2).isolated_points(), ts(&["empty", "(0,1)"]));
    assert!(!zoo::alex(2).is_definably_separable());
    assert_eq!(zoo::split().isolated_points(), ts(&["{0}", "{1}"]));
}

#[test]
fn n_counts() {
    let x = Point::new(0, rat(1, 2));
    assert_eq!(zoo::euclidean().n_of_point(&x).unwrap(), 3);
    assert_eq!(zoo::split().n_of_point(&x).unwrap(), 3);
    assert_eq!(zoo::discrete().n_of_point(&x).unwrap(), 1);
}

#[test]
fn push_forward() {
    let sorg = zoo::sorgenfrey();
    let rev = sorg.push_forward(&[AffineMap::new(int(-1), int(0))], &[0]).unwrap();
    assert_eq!(rev.tracks()[0], "(-1,0)".parse().unwrap());
    assert_eq!(rev.flags()[0].side, Side::Left);
    let e2 = zoo::euclidean().push_forward(&[AffineMap::new(int(2), int(0))], &[0]).unwrap();
    assert_eq!(e2.tracks()[0], "(0,2)".parse().unwrap());
    assert!(e2.validate_topology().is_ok());
    let sp = zoo::split();
    let swapped = sp.push_forward(&[AffineMap::identity(), AffineMap::identity()], &[1, 0]).unwrap();
    assert!(swapped.validate_topology().is_ok());
    assert!(swapped.is_hausdorff());
    assert!(sp.push_forward(&[AffineMap::constant(int(0)), AffineMap::identity()], &[0, 1]).is_err());
}

#[test]
fn subspace_keeps_germs_inside() {
    let e1 = zoo::euclidean();
    let sub = e1.subspace(&ts(&["(0,1/2] | {3/4}"])).unwrap();
    assert!(sub.validate_topology().is_ok());
    assert_eq!(sub.isolated_points(), ts(&["{3/4}"]));
    let a = sub.anchors(&Point::new(0, rat(1, 2))).unwrap();
    assert_eq!(a.into_iter().collect::<Vec<_>>(), vec![anchor(0, rat(1, 2), Side::Left)]);
}

#[test]
fn anchor_owners() {
    let sp = zoo::split();
    let owners = sp.anchor_owners(&anchor(1, rat(1, 3), Side::Left));
    assert_eq!(owners, ts(&["{1/3}", "empty"]));
    let a7 = zoo::a7_const_inf();
    assert_eq!(a7.anchor_owners(&Anchor::new(0, ExtRat::NegInf, Side::Right)), ts(&["(-inf,+inf)"]));
}
