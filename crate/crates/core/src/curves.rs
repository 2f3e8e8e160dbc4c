//! Definable curves, their limits, and curve-based continuity certificates.

use std::fmt;

use rand::Rng;

use crate::arrange::{dedup_funs, with_composites, Arrangement, Fun};
use crate::defset::DefSubset;
use crate::error::{Error, Result};
use crate::exactline::{int, AffineMap, Approach, Cell, ExtRat, PLMap, Rat, Side};
use crate::space::{Anchor, Point, Space, TrackId, TrackSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum End {
    Lo,
    Hi,
}

/// A curve (lo, hi) -> track, converging (or not) at one end.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Curve {
    pub lo: ExtRat,
    pub hi: ExtRat,
    pub end: End,
    pub track: TrackId,
    pub map: PLMap,
}

impl Curve {
    pub fn new(track: TrackId, lo: ExtRat, hi: ExtRat, end: End, map: PLMap) -> Result<Curve> {
        let dom = DefSubset::open(lo.clone(), hi.clone());
        if lo >= hi || !dom.is_subset(&map.domain()) {
            return Err(Error::Malformed(format!("curve map does not cover ({lo},{hi})")));
        }
        Ok(Curve { lo, hi, end, track, map })
    }

    pub fn affine(track: TrackId, lo: ExtRat, hi: ExtRat, end: End, map: AffineMap) -> Result<Curve> {
        let cell = Cell::open(lo.clone(), hi.clone())?;
        Curve::new(track, lo, hi, end, PLMap::single(cell, map))
    }

    /// The curve approaching `v` on `track` from `side`, within `room`
    /// (a positive distance, or a finite bound for an infinite `v`).
    pub fn toward(track: TrackId, v: &ExtRat, side: Side, room: &Rat) -> Curve {
        let zero = ExtRat::int(0);
        let c = match (v, side) {
            (ExtRat::Fin(v), Side::Right) => {
                Curve::affine(track, zero, ExtRat::Fin(room.clone()), End::Lo, AffineMap::shift(v.clone()))
            }
            (ExtRat::Fin(v), Side::Left) => Curve::affine(
                track,
                zero,
                ExtRat::Fin(room.clone()),
                End::Lo,
                AffineMap::new(-int(1), v.clone()),
            ),
            (ExtRat::NegInf, _) => {
                Curve::affine(track, ExtRat::NegInf, ExtRat::Fin(room.clone()), End::Lo, AffineMap::identity())
            }
            (ExtRat::PosInf, _) => {
                Curve::affine(track, ExtRat::Fin(room.clone()), ExtRat::PosInf, End::Hi, AffineMap::identity())
            }
        };
        c.expect("non-empty curve domain")
    }

    /// Value at a parameter, if defined.
    pub fn at(&self, t: &Rat) -> Option<Rat> {
        self.map.eval(t)
    }

    /// Parameters approaching the convergence end: the k-th of a sequence.
    pub fn param(&self, k: u32) -> Rat {
        let step = Rat::new(1.into(), num_bigint::BigInt::from(2u8).pow(k + 1));
        match (self.end, &self.lo, &self.hi) {
            (End::Lo, ExtRat::Fin(a), ExtRat::Fin(b)) => a + (b - a) * step,
            (End::Lo, ExtRat::Fin(a), _) => a + step,
            (End::Lo, ExtRat::NegInf, ExtRat::Fin(b)) => b - step.recip(),
            (End::Hi, ExtRat::Fin(a), ExtRat::Fin(b)) => b - (b - a) * step,
            (End::Hi, _, ExtRat::Fin(b)) => b - step,
            (End::Hi, ExtRat::Fin(a), ExtRat::PosInf) => a + step.recip(),
            _ => step.recip() * if self.end == End::Lo { -int(1) } else { int(1) },
        }
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let maps: Vec<String> = match self.map.pieces() {
            [(_, m)] => vec![m.to_string()],
            ps => ps.iter().map(|(c, m)| format!("{m} on {c}")).collect(),
        };
        let end = match self.end {
            End::Lo => "a",
            End::Hi => "b",
        };
        write!(
            f,
            "track={}; map={}; domain=({},{}); end={end}",
            self.track,
            maps.join(", ").replace('x', "t"),
            self.lo,
            self.hi
        )
    }
}

impl std::str::FromStr for Curve {
    type Err = Error;

    /// `track=1; map=alpha*t+beta; domain=(a,b); end=a`
    fn from_str(s: &str) -> Result<Curve> {
        let bad = |m: &str| Error::Parse { line: 0, msg: format!("{m} in curve {s:?}") };
        let (mut track, mut map, mut dom, mut end) = (None, None, None, None);
        for part in s.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (k, v) = part.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            match k.trim() {
                "track" => track = Some(v.trim().parse::<usize>().map_err(|_| bad("bad track"))?),
                "map" => map = Some(v.parse::<AffineMap>()?),
                "domain" => dom = Some(v.trim().to_string()),
                "end" => {
                    end = Some(match v.trim() {
                        "a" | "lo" => End::Lo,
                        "b" | "hi" => End::Hi,
                        _ => return Err(bad("end must be a or b")),
                    })
                }
                other => return Err(bad(&format!("unknown key {other:?}"))),
            }
        }
        let dom = dom.ok_or_else(|| bad("missing domain"))?;
        let inner = dom
            .strip_prefix('(')
            .and_then(|d| d.strip_suffix(')'))
            .ok_or_else(|| bad("domain must be an open interval"))?;
        let (a, b) = inner.split_once(',').ok_or_else(|| bad("domain must be (a,b)"))?;
        Curve::affine(
            track.ok_or_else(|| bad("missing track"))?,
            a.parse()?,
            b.parse()?,
            end.ok_or_else(|| bad("missing end"))?,
            map.ok_or_else(|| bad("missing map"))?,
        )
    }
}

/// Euclidean limit at the convergence end, with the side of approach
/// (`None` when the curve is eventually constant).
pub fn e_limit_side(g: &Curve) -> (ExtRat, Option<Side>) {
    let (v, side) = match g.end {
        End::Lo => (&g.lo, Side::Right),
        End::Hi => (&g.hi, Side::Left),
    };
    let (l, mode) = g.map.limit(v, side).expect("curve domain accumulates at its end");
    (l, mode.side())
}

/// Points the curve converges to.
pub fn tau_limit(s: &Space, g: &Curve) -> TrackSet {
    match e_limit_side(g) {
        (ExtRat::Fin(v), None) => {
            let p = Point::new(g.track, v);
            if s.contains(&p) {
                TrackSet::point(s.num_tracks(), &p)
            } else {
                s.empty_set()
            }
        }
        (_, None) => s.empty_set(),
        (v, Some(side)) => s.anchor_owners(&Anchor::new(g.track, v, side)),
    }
}

pub fn curves_equivalent(a: &Curve, b: &Curve) -> bool {
    let (va, sa) = e_limit_side(a);
    let (vb, sb) = e_limit_side(b);
    a.track == b.track && va == vb && sa == sb
}

/// One piece of a piecewise assignment between spaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AssignPiece {
    pub src: TrackId,
    pub cell: Cell,
    pub map: AffineMap,
    pub dst: TrackId,
}

impl fmt::Display for AssignPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{} -> {} via {}", self.src, self.cell, self.dst, self.map)
    }
}

/// A map between multi-track spaces given by affine pieces on cells.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PiecewiseMap {
    pub pieces: Vec<AssignPiece>,
}

impl PiecewiseMap {
    pub fn new(pieces: Vec<AssignPiece>) -> PiecewiseMap {
        PiecewiseMap { pieces }
    }

    pub fn piece_at(&self, p: &Point) -> Option<&AssignPiece> {
        self.pieces.iter().find(|a| a.src == p.track && a.cell.contains(&p.pos))
    }

    pub fn apply(&self, p: &Point) -> Option<Point> {
        self.piece_at(p).map(|a| Point::new(a.dst, a.map.apply(&p.pos)))
    }

    /// The piece whose cell approaches `v` from `side` on track `t`.
    fn germ_piece(&self, t: TrackId, v: &ExtRat, side: Side) -> Option<&AssignPiece> {
        self.pieces.iter().find(|a| a.src == t && a.cell.accumulates(v, side))
    }

    /// Image of a subset.
    pub fn image(&self, y: &TrackSet, n_dst: usize) -> TrackSet {
        let mut out = TrackSet::empty(n_dst);
        for a in &self.pieces {
            let part = y.track(a.src).intersect(&a.cell.to_set()).image(&a.map);
            out.0[a.dst] = out.0[a.dst].union(&part);
        }
        out
    }

    /// Inverse of an injective assignment with non-constant pieces.
    pub fn inverse(&self) -> Option<PiecewiseMap> {
        let mut out = Vec::new();
        for a in &self.pieces {
            let inv = a.map.inverse();
            match (&a.cell, inv) {
                (Cell::Point(p), _) => out.push(AssignPiece {
                    src: a.dst,
                    cell: Cell::Point(a.map.apply(p)),
                    map: AffineMap::constant(p.clone()),
                    dst: a.src,
                }),
                (c, Some(inv)) => out.push(AssignPiece { src: a.dst, cell: c.image(&a.map), map: inv, dst: a.src }),
                (_, None) => return None,
            }
        }
        Some(PiecewiseMap { pieces: out })
    }

    /// Whether the map is defined exactly once at every point of `s`,
    /// with values in `dst`.
    pub fn check_total(&self, s: &Space, dst: &Space) -> Result<()> {
        for a in &self.pieces {
            if a.src >= s.num_tracks() || a.dst >= dst.num_tracks() {
                return Err(Error::NotTotal(format!("piece {a} names an unknown track")));
            }
            let img = a.cell.to_set().intersect(s.domain(a.src)).image(&a.map);
            if !img.is_subset(dst.domain(a.dst)) {
                return Err(Error::NotTotal(format!("piece {a} leaves the target")));
            }
        }
        for (t, d) in s.tracks().iter().enumerate() {
            let mut covered = DefSubset::empty();
            for a in self.pieces.iter().filter(|a| a.src == t) {
                let c = a.cell.to_set().intersect(d);
                if !covered.intersect(&c).is_empty() {
                    return Err(Error::NotTotal(format!("pieces overlap on track {t} at {a}")));
                }
                covered = covered.union(&c);
            }
            if !d.is_subset(&covered) {
                return Err(Error::NotTotal(format!("track {t} points {} are not mapped", d.difference(&covered))));
            }
        }
        Ok(())
    }

    /// Whether distinct points have distinct images.
    pub fn is_injective(&self, s: &Space) -> bool {
        let n = self.pieces.iter().map(|a| a.dst + 1).max().unwrap_or(0);
        let mut seen = TrackSet::empty(n);
        for a in &self.pieces {
            let c = a.cell.to_set().intersect(s.domain(a.src));
            if c.is_empty() {
                continue;
            }
            if a.map.is_constant() && !c.is_finite() {
                return false;
            }
            let img = c.image(&a.map);
            if !seen.0[a.dst].intersect(&img).is_empty() {
                return false;
            }
            seen.0[a.dst] = seen.0[a.dst].union(&img);
        }
        true
    }
}

impl fmt::Display for PiecewiseMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.pieces {
            writeln!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Cells of `src` on which the local behaviour of `h` is uniform.
fn continuity_cells(src: &Space, dst: &Space, h: &PiecewiseMap) -> Vec<(TrackId, Cell)> {
    let n = src.num_tracks();
    let total = n + dst.num_tracks();
    let mut level1 = src.level1_funs(0);
    level1.extend(dst.level1_funs(n));
    for a in &h.pieces {
        let dom = a.cell.to_set().intersect(src.domain(a.src));
        level1.push(Fun { src: a.src, dom: dom.clone(), map: a.map.clone(), cod: a.dst + n });
        if let Some(inv) = a.map.inverse() {
            level1.push(Fun { src: a.dst + n, dom: dom.image(&a.map), map: inv, cod: a.src });
        }
    }
    let funs = with_composites(dedup_funs(level1));
    let mut breaks = src.breaks(0, total);
    for (t, b) in dst.breaks(n, total).into_iter().enumerate() {
        breaks[t].extend(b);
    }
    for a in &h.pieces {
        breaks[a.src].extend(a.cell.to_set().endpoints());
    }
    for b in &mut breaks {
        b.sort();
        b.dedup();
    }
    let mut domains = src.tracks().to_vec();
    domains.extend(dst.tracks().iter().cloned());
    Arrangement::new(domains, funs, breaks).cells().into_iter().filter(|(t, _)| *t < n).collect()
}

fn room(d: &DefSubset, v: &ExtRat, side: Side) -> Rat {
    let one = int(1);
    let ends = d.endpoints();
    match v {
        ExtRat::Fin(v) => {
            let gap = match side {
                Side::Right => ends.iter().filter(|e| *e > v).min().map(|e| e - v),
                Side::Left => ends.iter().filter(|e| *e < v).max().map(|e| v - e),
            };
            match gap {
                Some(g) if g < one => g / int(2),
                _ => one,
            }
        }
        ExtRat::NegInf => ends.first().map(|e| e - &one).unwrap_or_else(|| -one.clone()),
        ExtRat::PosInf => ends.last().map(|e| e + &one).unwrap_or(one),
    }
}

/// A curve in the source approaching the germ of anchor `a`.
pub fn germ_curve(s: &Space, a: &Anchor) -> Curve {
    Curve::toward(a.track, &a.value, a.side, &room(s.domain(a.track), &a.value, a.side))
}

/// Checks at one point; returns the failing anchor's curve.
fn check_at(src: &Space, dst: &Space, h: &PiecewiseMap, x: &Point) -> Result<Option<Curve>> {
    let hx = h.apply(x).ok_or_else(|| Error::NotTotal(format!("{x} is not mapped")))?;
    let dst_anchors = dst.anchors(&hx)?;
    for a in src.anchors(x)? {
        let piece = h
            .germ_piece(a.track, &a.value, a.side)
            .ok_or_else(|| Error::NotTotal(format!("no piece near anchor {a}")))?;
        let (l, mode) = piece.map.limit(&a.value, a.side);
        let ok = match (mode, &l) {
            (Approach::Stationary, ExtRat::Fin(v)) => Point::new(piece.dst, v.clone()) == hx,
            (Approach::Stationary, _) => false,
            (m, _) => dst_anchors.contains(&Anchor::new(piece.dst, l, m.side().unwrap())),
        };
        if !ok {
            return Ok(Some(germ_curve(src, &a)));
        }
    }
    Ok(None)
}

/// Decides continuity of `h` from `src` to `dst` (at one point, or
/// everywhere); a failure comes with a curve whose image misbehaves.
pub fn continuity_check(src: &Space, dst: &Space, h: &PiecewiseMap, at: Option<&Point>) -> Result<Option<Curve>> {
    h.check_total(src, dst)?;
    if let Some(x) = at {
        src.check_point(x)?;
        return check_at(src, dst, h, x);
    }
    for (t, c) in continuity_cells(src, dst, h) {
        if let Some(w) = check_at(src, dst, h, &Point::new(t, c.sample()))? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// A random affine curve converging at its `Lo` end, inside one track.
pub fn random_curve(s: &Space, rng: &mut impl Rng) -> Option<Curve> {
    let cells: Vec<(TrackId, Cell)> = s
        .tracks()
        .iter()
        .enumerate()
        .flat_map(|(t, d)| d.cells().into_iter().filter(|c| !c.is_point()).map(move |c| (t, c)))
        .collect();
    if cells.is_empty() {
        return None;
    }
    let (t, c) = &cells[rng.gen_range(0..cells.len())];
    let (lo, hi) = (c.lo(), c.hi());
    let target = match (&lo, &hi) {
        (ExtRat::Fin(a), ExtRat::Fin(b)) => {
            let k = rng.gen_range(0..=8);
            ExtRat::Fin(a + (b - a) * Rat::new(k.into(), 8.into()))
        }
        (ExtRat::Fin(a), _) => ExtRat::Fin(a + int(rng.gen_range(0..4))),
        (_, ExtRat::Fin(b)) => ExtRat::Fin(b - int(rng.gen_range(0..4))),
        _ => ExtRat::int(rng.gen_range(-3..4)),
    };
    let target = if rng.gen_ratio(1, 6) {
        if rng.gen_bool(0.5) && lo == ExtRat::NegInf {
            ExtRat::NegInf
        } else if hi == ExtRat::PosInf {
            ExtRat::PosInf
        } else {
            target
        }
    } else {
        target
    };
    let mut sides = vec![];
    if c.accumulates(&target, Side::Right) {
        sides.push(Side::Right);
    }
    if c.accumulates(&target, Side::Left) {
        sides.push(Side::Left);
    }
    let side = sides[rng.gen_range(0..sides.len())];
    let g = Curve::toward(*t, &target, side, &room(&c.to_set(), &target, side));
    let speed = Rat::new(rng.gen_range(1..5).into(), rng.gen_range(1..5).into());
    let map = g.map.pieces()[0].1.compose(&AffineMap::new(speed.clone(), Rat::from_integer(0.into())));
    let (lo, hi) = match (&g.lo, &g.hi) {
        (ExtRat::Fin(a), ExtRat::Fin(b)) => (ExtRat::Fin(a / &speed), ExtRat::Fin(b / &speed)),
        (ExtRat::NegInf, ExtRat::Fin(b)) => (ExtRat::NegInf, ExtRat::Fin(b / &speed)),
        (ExtRat::Fin(a), ExtRat::PosInf) => (ExtRat::Fin(a / &speed), ExtRat::PosInf),
        _ => unreachable!(),
    };
    Curve::affine(*t, lo, hi, g.end, map).ok()
}

/// Sampling cross-check of compactness: false iff a sampled curve diverges.
pub fn compactness_by_curves(s: &Space, n: usize, rng: &mut impl Rng) -> bool {
    for _ in 0..n {
        if let Some(g) = random_curve(s, rng) {
            if tau_limit(s, &g).is_empty() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactline::rat;

    fn unit_curve(map: AffineMap) -> Curve {
        Curve::affine(0, ExtRat::int(0), ExtRat::int(1), End::Lo, map).unwrap()
    }

    #[test]
    fn e_limits() {
        assert_eq!(e_limit_side(&unit_curve(AffineMap::identity())), (ExtRat::int(0), Some(Side::Right)));
        assert_eq!(e_limit_side(&unit_curve(AffineMap::new(int(-1), int(1)))), (ExtRat::int(1), Some(Side::Left)));
        assert_eq!(e_limit_side(&unit_curve(AffineMap::constant(rat(1, 2)))), (ExtRat::fin(1, 2), None));
    }

    #[test]
    fn equivalence() {
        let a = unit_curve(AffineMap::identity());
        let b = unit_curve(AffineMap::new(rat(1, 2), int(0)));
        let c = unit_curve(AffineMap::new(int(-1), int(0)));
        assert!(curves_equivalent(&a, &b));
        assert!(!curves_equivalent(&a, &c));
        let k = unit_curve(AffineMap::constant(rat(1, 3)));
        assert!(curves_equivalent(&k, &k.clone()));
    }

    #[test]
    fn parse_curve() {
        let g: Curve = "track=1; map=2*t+1/2; domain=(0,1); end=a".parse().unwrap();
        assert_eq!(g.track, 1);
        assert_eq!(e_limit_side(&g), (ExtRat::fin(1, 2), Some(Side::Right)));
        let back: Curve = g.to_string().parse().unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn params_approach_end() {
        let g = Curve::affine(0, ExtRat::NegInf, ExtRat::int(0), End::Lo, AffineMap::identity()).unwrap();
        assert!(g.param(3) < g.param(2));
        let g = unit_curve(AffineMap::identity());
        assert_eq!(g.param(0), rat(1, 2));
        assert_eq!(g.param(1), rat(1, 4));
    }
}
