#![allow(dead_code)]

use omt_core::exactline::{Cell, ExtRat, Rat};
use omt_core::space::{Point, Space, TrackSet};
use rand::Rng;

/// `k`-th of `n` evenly spread positions inside a cell.
pub fn spread(c: &Cell, k: i64, n: i64) -> Rat {
    let r = |a: i64, b: i64| Rat::new(a.into(), b.into());
    match (c.lo(), c.hi()) {
        (ExtRat::Fin(a), ExtRat::Fin(b)) if a != b => &a + (&b - &a) * r(k, n),
        (ExtRat::Fin(a), ExtRat::PosInf) => a + r(k, 3),
        (ExtRat::NegInf, ExtRat::Fin(b)) => b - r(n - k, 3),
        (ExtRat::NegInf, ExtRat::PosInf) => r(k - n / 2, 3),
        _ => c.sample(),
    }
}

/// Random points of a space, spread over its sample cells.
pub struct Sampler(Vec<(usize, Cell)>);

impl Sampler {
    pub fn new(s: &Space) -> Sampler {
        Sampler(s.sample_cells(None))
    }

    pub fn point(&self, rng: &mut impl Rng) -> Point {
        let (t, c) = &self.0[rng.gen_range(0..self.0.len())];
        Point::new(*t, spread(c, rng.gen_range(1..16), 16))
    }
}

/// A union of a few points and subintervals of sample cells.
pub fn random_set(s: &Space, rng: &mut impl Rng) -> TrackSet {
    let cells = s.sample_cells(None);
    let mut out = s.empty_set();
    for _ in 0..rng.gen_range(1..=3) {
        let (t, c) = &cells[rng.gen_range(0..cells.len())];
        if c.is_point() || rng.gen_ratio(1, 3) {
            out = out.union(&TrackSet::point(s.num_tracks(), &Point::new(*t, spread(c, rng.gen_range(1..8), 8))));
        } else if rng.gen_ratio(1, 2) {
            out.add_cell(*t, c);
        } else {
            let (i, j) = (rng.gen_range(1..4), rng.gen_range(4..8));
            let sub = Cell::Open(ExtRat::Fin(spread(c, i, 8)), ExtRat::Fin(spread(c, j, 8)));
            out.add_cell(*t, &sub);
        }
    }
    out
}
