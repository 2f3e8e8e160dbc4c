//! Decision procedures and decompositions: point labels, interval
//! decomposition, regularity, compactness, near-compactness, finite
//! frontiers, weight class and connected components.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed};

use crate::arrange::split_cells;
use crate::curves::{germ_curve, Curve};
use crate::defset::DefSubset;
use crate::error::{Error, Result};
use crate::exactline::{half, int, Cell, ExtRat, Rat, Side};
use crate::space::{Anchor, Branch, BranchMap, Point, Space, TrackId, TrackSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PieceLabel {
    Euclidean,
    RightHalfOpen,
    LeftHalfOpen,
    Discrete,
}

impl PieceLabel {
    pub fn from_flags(right: bool, left: bool) -> PieceLabel {
        match (right, left) {
            (true, true) => PieceLabel::Euclidean,
            (true, false) => PieceLabel::RightHalfOpen,
            (false, true) => PieceLabel::LeftHalfOpen,
            (false, false) => PieceLabel::Discrete,
        }
    }

    /// Self-accumulation sides of the label.
    pub fn sides(self) -> (bool, bool) {
        match self {
            PieceLabel::Euclidean => (true, true),
            PieceLabel::RightHalfOpen => (true, false),
            PieceLabel::LeftHalfOpen => (false, true),
            PieceLabel::Discrete => (false, false),
        }
    }

    /// The label after an order-reversing reparametrization.
    pub fn mirrored(self) -> PieceLabel {
        match self {
            PieceLabel::RightHalfOpen => PieceLabel::LeftHalfOpen,
            PieceLabel::LeftHalfOpen => PieceLabel::RightHalfOpen,
            l => l,
        }
    }
}

impl fmt::Display for PieceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PieceLabel::Euclidean => "euclidean",
            PieceLabel::RightHalfOpen => "right-half-open",
            PieceLabel::LeftHalfOpen => "left-half-open",
            PieceLabel::Discrete => "discrete",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub track: TrackId,
    pub cell: Cell,
    pub label: PieceLabel,
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{} {}", self.track, self.cell, self.label)
    }
}

/// Interval pieces with a tame subspace topology, plus finitely many points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub pieces: Vec<Piece>,
    pub leftover: Vec<Point>,
}

impl Decomposition {
    pub fn labelled(&self, label: PieceLabel) -> impl Iterator<Item = &Piece> {
        self.pieces.iter().filter(move |p| p.label == label)
    }

    pub fn union_of(&self, n: usize, label: PieceLabel) -> TrackSet {
        let mut out = TrackSet::empty(n);
        for p in self.labelled(label) {
            out.add_cell(p.track, &p.cell);
        }
        out
    }
}

pub(crate) fn flags_at(s: &Space, t: TrackId, x: &Rat) -> (bool, bool) {
    let has = |side| s.flags().iter().any(|f| f.track == t && f.side == side && f.region.contains(x));
    (has(Side::Right), has(Side::Left))
}

pub(crate) fn label_at(s: &Space, t: TrackId, x: &Rat) -> PieceLabel {
    let (r, l) = flags_at(s, t, x);
    PieceLabel::from_flags(r, l)
}

fn same_track(s: &Space, t: TrackId) -> impl Iterator<Item = &Branch> {
    s.branches().iter().filter(move |b| b.from == t && b.to == t)
}

/// Whether no point of `cell` has an anchor value in the closure of
/// `cell` other than itself.
pub(crate) fn is_local(s: &Space, t: TrackId, cell: &Cell) -> bool {
    let c = cell.to_set();
    let cl = c.closure_e();
    same_track(s, t).all(|b| {
        let dom = b.domain.to_set().intersect(&c);
        if dom.is_empty() {
            return true;
        }
        match &b.map {
            BranchMap::Affine(m) => dom.image(m).intersect(&cl).is_empty(),
            BranchMap::NegInf => cell.lo() != ExtRat::NegInf,
            BranchMap::PosInf => cell.hi() != ExtRat::PosInf,
        }
    })
}

fn locality_splits(s: &Space, t: TrackId, cell: &Cell) -> Vec<Rat> {
    let mut pts = BTreeSet::new();
    let ends: Vec<Rat> = [cell.lo(), cell.hi()].into_iter().filter_map(|e| e.finite().cloned()).collect();
    for b in same_track(s, t) {
        let Some(m) = b.map.injective() else { continue };
        if b.domain.to_set().intersect(&cell.to_set()).is_empty() {
            continue;
        }
        let inv = m.inverse().unwrap();
        for e in &ends {
            pts.insert(inv.apply(e));
            pts.insert(m.apply(e));
        }
    }
    pts.into_iter().filter(|p| cell.contains(p)).collect()
}

/// Cells on which flags, anchor counts, anchor order and the position of
/// each anchor relative to the cell are constant. The space itself is
/// already canonical; only the partition is returned.
pub fn refine_canonical(s: &Space) -> Vec<(TrackId, Cell)> {
    let funs = s.level1_funs(0);
    let mut out = Vec::new();
    for (t, d) in s.tracks().iter().enumerate() {
        let mut pts: BTreeSet<Rat> = d.endpoints().into_iter().collect();
        for f in s.flags().iter().filter(|f| f.track == t) {
            pts.extend(f.region.endpoints());
        }
        for b in s.branches().iter().filter(|b| b.from == t) {
            pts.extend(b.domain.to_set().endpoints());
        }
        let here: Vec<_> = funs.iter().filter(|f| f.src == t).collect();
        for (i, f) in here.iter().enumerate() {
            let hull = f.dom.closure_e();
            if let Some(inv) = f.map.inverse() {
                for e in s.domain(f.cod).endpoints() {
                    let x = inv.apply(&e);
                    if hull.contains(&x) {
                        pts.insert(x);
                    }
                }
            }
            for g in &here[i + 1..] {
                if g.cod != f.cod {
                    continue;
                }
                for x in f.map.meet(&g.map).unwrap_or_default() {
                    if hull.contains(&x) && g.dom.closure_e().contains(&x) {
                        pts.insert(x);
                    }
                }
            }
        }
        let pts: Vec<Rat> = pts.into_iter().collect();
        out.extend(split_cells(d, &pts).into_iter().map(|c| (t, c)));
    }
    out
}

pub fn classify_points(s: &Space) -> BTreeMap<PieceLabel, TrackSet> {
    let mut out = BTreeMap::new();
    for (t, c) in s.sample_cells(None) {
        let l = label_at(s, t, &c.sample());
        out.entry(l).or_insert_with(|| s.empty_set()).add_cell(t, &c);
    }
    out
}

fn not_hausdorff(s: &Space) -> Result<()> {
    match s.hausdorff_witness() {
        Some(w) => Err(Error::NotHausdorff(w.to_string())),
        None => Ok(()),
    }
}

const MAX_SPLIT_ROUNDS: usize = 64;

/// Splits the space into finitely many points and intervals, each interval
/// carrying one of the four tame topologies.
pub fn decompose_t2(s: &Space) -> Result<Decomposition> {
    not_hausdorff(s)?;
    let mut per_track: Vec<Vec<Cell>> = vec![Vec::new(); s.num_tracks()];
    for (t, c) in s.sample_cells(None) {
        per_track[t].push(c);
    }
    let mut pieces = Vec::new();
    let mut leftover = Vec::new();
    for (t, cells) in per_track.into_iter().enumerate() {
        let mut cells = cells;
        let mut rounds = 0;
        loop {
            let mut next = Vec::new();
            let mut changed = false;
            for c in cells {
                if c.is_point() || is_local(s, t, &c) {
                    next.push(c);
                    continue;
                }
                let pts = locality_splits(s, t, &c);
                if pts.is_empty() {
                    return Err(Error::Internal(format!("cell {t}:{c} cannot be made local")));
                }
                changed = true;
                next.extend(split_cells(&c.to_set(), &pts));
            }
            cells = next;
            if !changed {
                break;
            }
            rounds += 1;
            if rounds > MAX_SPLIT_ROUNDS {
                return Err(Error::Internal(format!("track {t} needs more than {MAX_SPLIT_ROUNDS} splitting rounds")));
            }
        }
        // Merge interval, point, interval runs that keep one label.
        let mut merged: Vec<Cell> = Vec::new();
        let mut i = 0;
        while i < cells.len() {
            if let (Some(Cell::Open(lo, _)), Cell::Point(p), Some(next @ Cell::Open(_, hi))) =
                (merged.last(), &cells[i], cells.get(i + 1))
            {
                let l = label_at(s, t, &merged.last().unwrap().sample());
                let joined = Cell::Open(lo.clone(), hi.clone());
                if label_at(s, t, p) == l && label_at(s, t, &next.sample()) == l && is_local(s, t, &joined) {
                    merged.pop();
                    merged.push(joined);
                    i += 2;
                    continue;
                }
            }
            merged.push(cells[i].clone());
            i += 1;
        }
        for c in merged {
            match c {
                Cell::Point(p) => leftover.push(Point::new(t, p)),
                c => {
                    let label = label_at(s, t, &c.sample());
                    pieces.push(Piece { track: t, cell: c, label });
                }
            }
        }
    }
    Ok(Decomposition { pieces, leftover })
}

/// One interval with a tame subspace topology, without assuming Hausdorff.
pub fn tame_interval_t1(s: &Space) -> Result<Piece> {
    let (t, cell) = s.sample_cells(None).into_iter().find(|(_, c)| !c.is_point()).ok_or(Error::FiniteSpace)?;
    let x0 = cell.sample();
    let label = label_at(s, t, &x0);
    if is_local(s, t, &cell) {
        return Ok(Piece { track: t, cell, label });
    }
    let mut r = Rat::one();
    for e in [cell.lo(), cell.hi()] {
        if let ExtRat::Fin(e) = e {
            r = r.min((&e - &x0).abs());
        }
    }
    for b in same_track(s, t).filter(|b| b.domain.contains(&x0)) {
        if let BranchMap::Affine(m) = &b.map {
            let gap = (m.apply(&x0) - &x0).abs();
            let bound = if m.is_constant() { gap / int(2) } else { gap / (int(2) * (Rat::one() + m.slope.abs())) };
            r = r.min(bound);
        }
    }
    let j = Cell::Open(ExtRat::Fin(&x0 - &r), ExtRat::Fin(&x0 + &r));
    if !is_local(s, t, &j) {
        return Err(Error::Internal(format!("shrunken interval {t}:{j} is not local")));
    }
    Ok(Piece { track: t, cell: j, label })
}

/// An anchor whose neighbourhood closures escape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityWitness {
    pub point: Point,
    pub anchor: Anchor,
    pub branch: Branch,
    pub required: Anchor,
}

impl fmt::Display for RegularityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "point {} has anchor {} where branch {} accumulates, but lacks {}",
            self.point, self.anchor, self.branch, self.required
        )
    }
}

/// Decides regularity of a Hausdorff space; `Ok(None)` means regular.
pub fn regularity_witness(s: &Space) -> Result<Option<RegularityWitness>> {
    not_hausdorff(s)?;
    for (t, c) in s.sample_cells(None) {
        let x = c.sample();
        let anchors = s.anchors_at(t, &x);
        for a in &anchors {
            for b in s.branches().iter().filter(|b| b.to == a.track) {
                let Some(m) = b.map.injective() else { continue };
                if !b.image().accumulates(&a.value, a.side) {
                    continue;
                }
                let w = m.inverse().unwrap().apply_ext(&a.value);
                let required = Anchor::new(b.from, w, m.carry_side(a.side));
                if !anchors.contains(&required) {
                    return Ok(Some(RegularityWitness {
                        point: Point::new(t, x),
                        anchor: a.clone(),
                        branch: b.clone(),
                        required,
                    }));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_regular(s: &Space) -> Result<bool> {
    Ok(regularity_witness(s)?.is_none())
}

/// Hausdorff and regular.
pub fn is_t3(s: &Space) -> bool {
    matches!(regularity_witness(s), Ok(None))
}

pub(crate) fn require_t3(s: &Space) -> Result<()> {
    match regularity_witness(s) {
        Ok(None) => Ok(()),
        Ok(Some(w)) => Err(Error::NotT3(w.to_string())),
        Err(Error::NotHausdorff(w)) => Err(Error::NotT3(format!("not Hausdorff: {w}"))),
        Err(e) => Err(e),
    }
}

/// A divergent curve, or `None` when every curve converges.
pub fn compactness_witness(s: &Space) -> Option<Curve> {
    for t in 0..s.num_tracks() {
        for side in Side::BOTH {
            let (unc, inf_open) = s.uncovered(t, side);
            if let Some(v) = unc.sample() {
                return Some(germ_curve(s, &Anchor::new(t, ExtRat::Fin(v), side)));
            }
            if inf_open {
                let v = if side == Side::Right { ExtRat::NegInf } else { ExtRat::PosInf };
                return Some(germ_curve(s, &Anchor::new(t, v, side)));
            }
        }
    }
    None
}

pub fn is_definably_compact(s: &Space) -> bool {
    compactness_witness(s).is_none()
}

/// Values on track `t` that are anchored from `side` by some point.
pub fn anchored_values(s: &Space, t: TrackId, side: Side) -> DefSubset {
    let mut v = DefSubset::empty();
    for f in s.flags().iter().filter(|f| f.track == t && f.side == side) {
        v = v.union(&f.region);
    }
    for b in s.branches().iter().filter(|b| b.to == t && b.side == side) {
        v = v.union(&b.image());
    }
    v
}

pub fn is_near_compact(s: &Space) -> bool {
    (0..s.num_tracks()).all(|t| {
        let both = anchored_values(s, t, Side::Right).intersect(&anchored_values(s, t, Side::Left));
        s.domain(t).closure_e().difference(&both).is_finite()
    })
}

fn bounded_room(d: &DefSubset, v: &Rat, side: Side) -> Rat {
    let next = match side {
        Side::Right => d.endpoints().into_iter().filter(|e| e > v).min().map(|e| e - v),
        Side::Left => d.endpoints().into_iter().filter(|e| e < v).max().map(|e| v - e),
    };
    next.map(|g| g.min(Rat::one())).unwrap_or_else(Rat::one)
}

fn germ_set(v: &Rat, side: Side, r: &Rat) -> DefSubset {
    match side {
        Side::Right => DefSubset::open(ExtRat::Fin(v.clone()), ExtRat::Fin(v + r)),
        Side::Left => DefSubset::open(ExtRat::Fin(v - r), ExtRat::Fin(v.clone())),
    }
}

/// A set with infinite frontier, or `None` when every definable set has
/// finite frontier.
pub fn fdi_witness(s: &Space) -> Option<TrackSet> {
    let n = s.num_tracks();
    let b = s.branches().iter().find(|b| !b.domain.is_point())?;
    let dom = b.domain.to_set();
    let target = s.domain(b.to);
    let y = match &b.map {
        BranchMap::Affine(m) if !m.is_constant() => {
            if b.from != b.to {
                dom.image(m)
            } else {
                let x0 = b.domain.sample();
                let r = (m.apply(&x0) - &x0).abs() / (int(2) * (Rat::one() + m.slope.abs()));
                let j = DefSubset::open(ExtRat::Fin(&x0 - &r), ExtRat::Fin(&x0 + &r)).intersect(&dom);
                j.image(m)
            }
        }
        BranchMap::Affine(m) => {
            let c = m.offset.clone();
            let mut r = bounded_room(target, &c, b.side);
            while b.from == b.to && dom.difference(&germ_set(&c, b.side, &r).closure_e()).is_finite() {
                r /= int(2);
            }
            germ_set(&c, b.side, &r)
        }
        BranchMap::NegInf | BranchMap::PosInf => {
            let neg = b.map == BranchMap::NegInf;
            let ends = target.endpoints();
            let mut m = if neg {
                ends.first().map(|e| e - int(1)).unwrap_or_else(|| -int(1))
            } else {
                ends.last().map(|e| e + int(1)).unwrap_or_else(|| int(1))
            };
            if b.from == b.to {
                let x0 = b.domain.sample();
                m = if neg { m.min(x0 - int(1)) } else { m.max(x0 + int(1)) };
            }
            if neg {
                DefSubset::open(ExtRat::NegInf, ExtRat::Fin(m))
            } else {
                DefSubset::open(ExtRat::Fin(m), ExtRat::PosInf)
            }
        }
    };
    Some(TrackSet::single(n, b.to, y.intersect(target)))
}

pub fn fdi_check(s: &Space) -> bool {
    fdi_witness(s).is_none()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightClass {
    Finite,
    DensityWeight,
    CardinalityWeight,
}

impl fmt::Display for WeightClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightClass::Finite => "finite",
            WeightClass::DensityWeight => "density",
            WeightClass::CardinalityWeight => "cardinality",
        })
    }
}

pub fn weight_class(s: &Space) -> Result<WeightClass> {
    let d = decompose_t2(s)?;
    if s.is_finite() {
        return Ok(WeightClass::Finite);
    }
    if d.pieces.iter().any(|p| p.label != PieceLabel::Euclidean) {
        Ok(WeightClass::CardinalityWeight)
    } else {
        Ok(WeightClass::DensityWeight)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    /// Components with more than one point.
    pub glued: Vec<TrackSet>,
    /// Every remaining point is a component by itself.
    pub singletons: TrackSet,
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut j = i;
    while parent[j] != r {
        let next = parent[j];
        parent[j] = r;
        j = next;
    }
    r
}

/// Maximal connected sets of a regular Hausdorff space.
pub fn connected_components(s: &Space) -> Result<Components> {
    require_t3(s)?;
    let n = s.num_tracks();
    let dec = decompose_t2(s)?;
    let eu: Vec<&Piece> = dec.labelled(PieceLabel::Euclidean).collect();
    let mut extra: Vec<Point> = Vec::new();
    let mut parent: Vec<usize> = (0..eu.len()).collect();
    let mut links = Vec::new();
    for (i, p) in eu.iter().enumerate() {
        for g in [Anchor::new(p.track, p.cell.lo(), Side::Right), Anchor::new(p.track, p.cell.hi(), Side::Left)] {
            let owners = s.anchor_owners(&g);
            let pts = owners.points().ok_or_else(|| Error::Internal(format!("germ {g} has infinitely many owners")))?;
            for o in pts {
                let node = match eu.iter().position(|q| q.track == o.track && q.cell.contains(&o.pos)) {
                    Some(j) => j,
                    None => match extra.iter().position(|e| *e == o) {
                        Some(k) => eu.len() + k,
                        None => {
                            extra.push(o);
                            parent.push(parent.len());
                            parent.len() - 1
                        }
                    },
                };
                links.push((i, node));
            }
        }
    }
    for (a, b) in links {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: BTreeMap<usize, TrackSet> = BTreeMap::new();
    for i in 0..parent.len() {
        let r = find(&mut parent, i);
        let set = groups.entry(r).or_insert_with(|| TrackSet::empty(n));
        if i < eu.len() {
            set.add_cell(eu[i].track, &eu[i].cell);
        } else {
            set.add_cell(extra[i - eu.len()].track, &Cell::Point(extra[i - eu.len()].pos.clone()));
        }
    }
    let glued: Vec<TrackSet> = groups.into_values().collect();
    let mut covered = s.empty_set();
    for g in &glued {
        covered = covered.union(g);
    }
    Ok(Components { glued, singletons: s.whole().difference(&covered) })
}

/// Midpoint of a bounded open cell, or a point inside an unbounded one.
pub fn cell_mid(c: &Cell) -> Rat {
    match (c.lo(), c.hi()) {
        (ExtRat::Fin(a), ExtRat::Fin(b)) => half(&a, &b),
        _ => c.sample(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::zoo;
    use crate::exactline::AffineMap;
    #[test]
    fn labels_of_fixtures() {
        let c = classify_points(&zoo::sorgenfrey());
        assert_eq!(c.keys().copied().collect::<Vec<_>>(), vec![PieceLabel::RightHalfOpen]);
        let c = classify_points(&zoo::split());
        assert_eq!(c[&PieceLabel::LeftHalfOpen].track(0), &"(0,1]".parse().unwrap());
        assert_eq!(c[&PieceLabel::RightHalfOpen].track(1), &"[0,1)".parse().unwrap());
        let c = classify_points(&zoo::alex(2));
        assert_eq!(c[&PieceLabel::Euclidean].track(0), &"(0,1)".parse().unwrap());
        assert_eq!(c[&PieceLabel::Discrete].track(1), &"(0,1)".parse().unwrap());
    }

    #[test]
    fn refine_example() {
        let d: DefSubset = "(-1,3)".parse().unwrap();
        let b = Branch::affine(0, "(0,2)".parse::<DefSubset>().unwrap().cells()[0].clone(), AffineMap::new(int(2), int(-1)), 0, Side::Right);
        let s = Space::with_split_fixed_points("r", vec![d], vec![], vec![b]).unwrap();
        let cells: Vec<Cell> = refine_canonical(&s).into_iter().map(|(_, c)| c).collect();
        let inside: Vec<String> = cells
            .iter()
            .filter(|c| c.lo() >= ExtRat::int(0) && c.hi() <= ExtRat::int(2) && !(c.is_point() && (c.lo() == ExtRat::int(0) || c.lo() == ExtRat::int(2))))
            .map(|c| c.to_string())
            .collect();
        assert_eq!(inside, vec!["(0,1)", "{1}", "(1,2)"]);
        assert_eq!(refine_canonical(&zoo::euclidean()), vec![(0, Cell::unit())]);
        assert_eq!(refine_canonical(&zoo::split()).len(), 6);
    }

    #[test]
    fn decompositions() {
        let d = decompose_t2(&zoo::split()).unwrap();
        assert_eq!(d.pieces.len(), 2);
        assert_eq!(d.pieces[0].label, PieceLabel::LeftHalfOpen);
        assert_eq!(d.pieces[1].label, PieceLabel::RightHalfOpen);
        assert_eq!(d.leftover.len(), 4);
        let d = decompose_t2(&zoo::euclidean()).unwrap();
        assert_eq!(d.pieces, vec![Piece { track: 0, cell: Cell::unit(), label: PieceLabel::Euclidean }]);
        assert!(matches!(decompose_t2(&zoo::a7_const_inf()), Err(Error::NotHausdorff(_))));
    }

    #[test]
    fn tame_intervals() {
        let p = tame_interval_t1(&zoo::a7_const_inf()).unwrap();
        assert_eq!(p.cell, Cell::Open(ExtRat::int(-1), ExtRat::int(1)));
        assert_eq!(p.label, PieceLabel::Euclidean);
        assert_eq!(tame_interval_t1(&zoo::sorgenfrey()).unwrap().label, PieceLabel::RightHalfOpen);
        assert_eq!(tame_interval_t1(&zoo::discrete()).unwrap().cell, Cell::unit());
        let finite = Space::new("f", vec![DefSubset::point(int(0))], vec![], vec![]).unwrap();
        assert_eq!(tame_interval_t1(&finite), Err(Error::FiniteSpace));
    }

    #[test]
    fn regularity() {
        assert!(is_regular(&zoo::split()).unwrap());
        assert!(is_regular(&zoo::euclidean()).unwrap());
        let w = regularity_witness(&zoo::a9_nonregular()).unwrap().unwrap();
        assert_eq!(w.required.track, 0);
        assert!(matches!(is_regular(&zoo::a7_const_inf()), Err(Error::NotHausdorff(_))));
    }

    #[test]
    fn compactness() {
        assert!(is_definably_compact(&zoo::split()));
        let w = compactness_witness(&zoo::euclidean()).unwrap();
        assert_eq!(crate::curves::e_limit_side(&w), (ExtRat::int(0), Some(Side::Right)));
        assert!(!is_definably_compact(&zoo::sorgenfrey()));
        assert!(is_near_compact(&zoo::euclidean()));
        assert!(!is_near_compact(&zoo::sorgenfrey()));
        assert!(is_near_compact(&zoo::split()));
    }

    #[test]
    fn frontier_dimension() {
        assert!(fdi_check(&zoo::sorgenfrey()));
        assert!(fdi_check(&zoo::euclidean()));
        let sp = zoo::split();
        let y = fdi_witness(&sp).unwrap();
        assert!(!sp.frontier(&y).unwrap().is_finite());
    }

    #[test]
    fn weights() {
        assert_eq!(weight_class(&zoo::sorgenfrey()).unwrap(), WeightClass::CardinalityWeight);
        assert_eq!(weight_class(&zoo::euclidean()).unwrap(), WeightClass::DensityWeight);
        assert_eq!(weight_class(&zoo::discrete()).unwrap(), WeightClass::CardinalityWeight);
    }

    #[test]
    fn components() {
        let c = connected_components(&zoo::euclidean()).unwrap();
        assert_eq!(c.glued.len(), 1);
        assert!(c.singletons.is_empty());
        let c = connected_components(&zoo::split()).unwrap();
        assert!(c.glued.is_empty());
        let c = connected_components(&zoo::alex(2)).unwrap();
        assert_eq!(c.glued, vec![TrackSet(vec!["(0,1)".parse().unwrap(), DefSubset::empty()])]);
        assert_eq!(c.singletons.track(1), &"(0,1)".parse().unwrap());
        assert!(matches!(connected_components(&zoo::a9_nonregular()), Err(Error::NotT3(_))));
    }
}
