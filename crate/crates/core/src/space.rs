//! Multi-track semilinear spaces whose topology is given by accumulation
//! data: self-flags (a point accumulates at itself from one side) and
//! branches (a point accumulates at an affine image of itself).

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed, Zero};

use crate::arrange::{dedup_funs, with_composites, Arrangement, Fun};
use crate::defset::DefSubset;
use crate::error::{Error, Result};
use crate::exactline::{fmt_rat, AffineMap, Approach, Cell, ExtRat, Rat, Side};

pub type TrackId = usize;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub track: TrackId,
    pub pos: Rat,
}

impl Point {
    pub fn new(track: TrackId, pos: Rat) -> Point {
        Point { track, pos }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.track, fmt_rat(&self.pos))
    }
}

impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Point> {
        let bad = || Error::Parse { line: 0, msg: format!("bad point {s:?}, expected TRACK:POS") };
        let (t, p) = s.split_once(':').ok_or_else(bad)?;
        let track = t.trim().parse().map_err(|_| bad())?;
        let pos = crate::exactline::parse_rat(p).ok_or_else(bad)?;
        Ok(Point { track, pos })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Anchor {
    pub track: TrackId,
    pub value: ExtRat,
    pub side: Side,
}

impl Anchor {
    pub fn new(track: TrackId, value: ExtRat, side: Side) -> Anchor {
        Anchor { track, value, side }
    }
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.track, self.value, self.side)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SelfFlag {
    pub track: TrackId,
    pub region: DefSubset,
    pub side: Side,
}

/// Value map of a branch: affine, or the constant −∞ / +∞.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BranchMap {
    Affine(AffineMap),
    NegInf,
    PosInf,
}

impl BranchMap {
    pub fn affine(&self) -> Option<&AffineMap> {
        match self {
            BranchMap::Affine(m) => Some(m),
            _ => None,
        }
    }

    /// The affine map if it is not constant.
    pub fn injective(&self) -> Option<&AffineMap> {
        self.affine().filter(|m| !m.is_constant())
    }

    pub fn is_constant(&self) -> bool {
        self.injective().is_none()
    }

    pub fn apply(&self, x: &Rat) -> ExtRat {
        match self {
            BranchMap::Affine(m) => ExtRat::Fin(m.apply(x)),
            BranchMap::NegInf => ExtRat::NegInf,
            BranchMap::PosInf => ExtRat::PosInf,
        }
    }

    pub fn limit(&self, v: &ExtRat, side: Side) -> (ExtRat, Approach) {
        match self {
            BranchMap::Affine(m) => m.limit(v, side),
            BranchMap::NegInf => (ExtRat::NegInf, Approach::Stationary),
            BranchMap::PosInf => (ExtRat::PosInf, Approach::Stationary),
        }
    }
}

impl fmt::Display for BranchMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchMap::Affine(m) => write!(f, "{m}"),
            BranchMap::NegInf => f.write_str("-inf"),
            BranchMap::PosInf => f.write_str("+inf"),
        }
    }
}

impl FromStr for BranchMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<BranchMap> {
        match s.trim() {
            "-inf" => Ok(BranchMap::NegInf),
            "+inf" | "inf" => Ok(BranchMap::PosInf),
            t => Ok(BranchMap::Affine(t.parse()?)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Branch {
    pub from: TrackId,
    pub domain: Cell,
    pub map: BranchMap,
    pub to: TrackId,
    pub side: Side,
}

impl Branch {
    pub fn new(from: TrackId, domain: Cell, map: BranchMap, to: TrackId, side: Side) -> Branch {
        Branch { from, domain, map, to, side }
    }

    pub fn affine(from: TrackId, domain: Cell, map: AffineMap, to: TrackId, side: Side) -> Branch {
        Branch::new(from, domain, BranchMap::Affine(map), to, side)
    }

    /// Image of the domain as a set of finite values (empty for ±∞ maps).
    pub fn image(&self) -> DefSubset {
        match &self.map {
            BranchMap::Affine(m) => self.domain.to_set().image(m),
            _ => DefSubset::empty(),
        }
    }

    pub fn anchor_at(&self, x: &Rat) -> Anchor {
        Anchor::new(self.to, self.map.apply(x), self.side)
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{} -> {} via {} ({})", self.from, self.domain, self.to, self.map, self.side)
    }
}

/// One subset per track.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TrackSet(pub Vec<DefSubset>);

impl TrackSet {
    pub fn empty(n: usize) -> TrackSet {
        TrackSet(vec![DefSubset::empty(); n])
    }

    pub fn single(n: usize, t: TrackId, s: DefSubset) -> TrackSet {
        let mut v = TrackSet::empty(n);
        v.0[t] = s;
        v
    }

    pub fn point(n: usize, p: &Point) -> TrackSet {
        TrackSet::single(n, p.track, DefSubset::point(p.pos.clone()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn track(&self, t: TrackId) -> &DefSubset {
        &self.0[t]
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(DefSubset::is_empty)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(DefSubset::is_finite)
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.track < self.0.len() && self.0[p.track].contains(&p.pos)
    }

    pub fn points(&self) -> Option<Vec<Point>> {
        let mut out = Vec::new();
        for (t, s) in self.0.iter().enumerate() {
            for p in s.finite_points()? {
                out.push(Point::new(t, p));
            }
        }
        Some(out)
    }

    fn zip(&self, other: &TrackSet, f: impl Fn(&DefSubset, &DefSubset) -> DefSubset) -> TrackSet {
        TrackSet(self.0.iter().zip(&other.0).map(|(a, b)| f(a, b)).collect())
    }

    pub fn union(&self, other: &TrackSet) -> TrackSet {
        self.zip(other, DefSubset::union)
    }

    pub fn intersect(&self, other: &TrackSet) -> TrackSet {
        self.zip(other, DefSubset::intersect)
    }

    pub fn difference(&self, other: &TrackSet) -> TrackSet {
        self.zip(other, DefSubset::difference)
    }

    pub fn is_subset(&self, other: &TrackSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn add_cell(&mut self, t: TrackId, c: &Cell) {
        self.0[t] = self.0[t].union(&c.to_set());
    }

    /// Finite endpoints per track.
    pub fn breaks(&self) -> Vec<Vec<Rat>> {
        self.0.iter().map(DefSubset::endpoints).collect()
    }

    /// One point of the set, if non-empty.
    pub fn sample(&self) -> Option<Point> {
        self.0.iter().enumerate().find_map(|(t, s)| s.sample().map(|p| Point::new(t, p)))
    }
}

impl fmt::Display for TrackSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (t, s) in self.0.iter().enumerate() {
            if s.is_empty() {
                continue;
            }
            if !first {
                f.write_str("; ")?;
            }
            first = false;
            write!(f, "{t}: {s}")?;
        }
        if first {
            f.write_str("empty")?;
        }
        Ok(())
    }
}

/// A failure of the germ-openness rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Violation {
    pub track: TrackId,
    pub cell: Cell,
    pub anchor: Anchor,
    pub branch: Branch,
    pub required: Anchor,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "points of {}:{} with anchor {} need {} because of branch {}",
            self.track, self.cell, self.anchor, self.required, self.branch
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HausdorffWitness {
    pub p: Point,
    pub q: Point,
    pub shared: Anchor,
}

impl fmt::Display for HausdorffWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} and {} share anchor {}", self.p, self.q, self.shared)
    }
}

/// One accumulation datum in uniform form: flags carry the identity map.
#[derive(Clone, Debug)]
pub(crate) struct Datum {
    pub src: TrackId,
    pub dom: DefSubset,
    pub map: BranchMap,
    pub cod: TrackId,
    pub side: Side,
}

pub struct Space {
    name: String,
    tracks: Vec<DefSubset>,
    flags: Vec<SelfFlag>,
    branches: Vec<Branch>,
    arrangement: OnceLock<Arc<Arrangement>>,
}

impl Clone for Space {
    fn clone(&self) -> Space {
        Space {
            name: self.name.clone(),
            tracks: self.tracks.clone(),
            flags: self.flags.clone(),
            branches: self.branches.clone(),
            arrangement: self.arrangement.clone(),
        }
    }
}

impl PartialEq for Space {
    fn eq(&self, other: &Space) -> bool {
        self.name == other.name
            && self.tracks == other.tracks
            && self.flags == other.flags
            && self.branches == other.branches
    }
}

impl Eq for Space {}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Space")
            .field("name", &self.name)
            .field("tracks", &self.tracks)
            .field("flags", &self.flags)
            .field("branches", &self.branches)
            .finish()
    }
}

fn canonical_flags(flags: Vec<SelfFlag>) -> Vec<SelfFlag> {
    let mut out: Vec<SelfFlag> = Vec::new();
    for f in flags {
        if let Some(g) = out.iter_mut().find(|g| g.track == f.track && g.side == f.side) {
            g.region = g.region.union(&f.region);
        } else {
            out.push(f);
        }
    }
    out.retain(|f| !f.region.is_empty());
    out.sort();
    out
}

fn canonical_branches(branches: Vec<Branch>) -> Vec<Branch> {
    let mut groups: Vec<(TrackId, BranchMap, TrackId, Side, DefSubset)> = Vec::new();
    for b in branches {
        let d = b.domain.to_set();
        if let Some(g) = groups.iter_mut().find(|g| g.0 == b.from && g.1 == b.map && g.2 == b.to && g.3 == b.side) {
            g.4 = g.4.union(&d);
        } else {
            groups.push((b.from, b.map, b.to, b.side, d));
        }
    }
    let mut out = Vec::new();
    for (from, map, to, side, dom) in groups {
        for c in dom.cells() {
            out.push(Branch::new(from, c, map.clone(), to, side));
        }
    }
    out.sort_by(|a, b| {
        (a.from, a.domain.lo(), a.domain.is_point(), a.to, a.side, &a.map).cmp(&(
            b.from,
            b.domain.lo(),
            b.domain.is_point(),
            b.to,
            b.side,
            &b.map,
        ))
    });
    out
}

impl Space {
    /// Builds a space in canonical form, rejecting ill-formed data
    /// (including same-track branches with a fixed point).
    pub fn new(name: &str, tracks: Vec<DefSubset>, flags: Vec<SelfFlag>, branches: Vec<Branch>) -> Result<Space> {
        let s = Space {
            name: name.to_string(),
            tracks,
            flags: canonical_flags(flags),
            branches: canonical_branches(branches),
            arrangement: OnceLock::new(),
        };
        s.check_wellformed()?;
        Ok(s)
    }

    /// Like [`Space::new`], but a same-track branch is split at its fixed
    /// point, which becomes a self-flag; an identity branch becomes a flag.
    pub fn with_split_fixed_points(
        name: &str,
        tracks: Vec<DefSubset>,
        mut flags: Vec<SelfFlag>,
        branches: Vec<Branch>,
    ) -> Result<Space> {
        let mut kept = Vec::new();
        for b in canonical_branches(branches) {
            let m = match (&b.map, b.from == b.to) {
                (BranchMap::Affine(m), true) => m.clone(),
                _ => {
                    kept.push(b);
                    continue;
                }
            };
            if m.is_identity() {
                flags.push(SelfFlag { track: b.from, region: b.domain.to_set(), side: b.side });
                continue;
            }
            let fixed = m.meet(&AffineMap::identity()).unwrap_or_default();
            match fixed.into_iter().find(|p| b.domain.contains(p)) {
                Some(p) => {
                    let rest = b.domain.to_set().difference(&DefSubset::point(p.clone()));
                    flags.push(SelfFlag { track: b.from, region: DefSubset::point(p), side: b.side });
                    for c in rest.cells() {
                        kept.push(Branch::new(b.from, c, b.map.clone(), b.to, b.side));
                    }
                }
                None => kept.push(b),
            }
        }
        Space::new(name, tracks, flags, kept)
    }

    /// Builds and validates.
    pub fn validated(name: &str, tracks: Vec<DefSubset>, flags: Vec<SelfFlag>, branches: Vec<Branch>) -> Result<Space> {
        let s = Space::with_split_fixed_points(name, tracks, flags, branches)?;
        s.validate_topology().map_err(Error::Validation)?;
        Ok(s)
    }

    pub fn with_name(mut self, name: &str) -> Space {
        self.name = name.to_string();
        self
    }

    fn check_wellformed(&self) -> Result<()> {
        let n = self.tracks.len();
        let bad = |m: String| Err(Error::Malformed(m));
        for f in &self.flags {
            if f.track >= n {
                return bad(format!("flag on unknown track {}", f.track));
            }
            let d = &self.tracks[f.track];
            if !f.region.is_subset(d) {
                return bad(format!("flag region {} leaves track {} domain {}", f.region, f.track, d));
            }
            if !f.region.is_subset(&d.side_approach(f.side)) {
                return bad(format!(
                    "flag region {} on track {} is not {}-approachable within {}",
                    f.region, f.track, f.side, d
                ));
            }
        }
        for b in &self.branches {
            if b.from >= n || b.to >= n {
                return bad(format!("branch between unknown tracks: {b}"));
            }
            if !self.tracks[b.from].contains_cell(&b.domain) {
                return bad(format!("branch domain {} leaves track {}", b.domain, b.from));
            }
            let cod = &self.tracks[b.to];
            match &b.map {
                BranchMap::Affine(m) => {
                    if !b.image().is_subset(&cod.side_approach(b.side)) {
                        return bad(format!("branch image {} is not {}-approachable in track {}", b.image(), b.side, b.to));
                    }
                    if b.from == b.to {
                        if m.is_identity() {
                            return bad(format!("identity branch {b} must be a self-flag"));
                        }
                        if let Some(p) = m.meet(&AffineMap::identity()).unwrap_or_default().first() {
                            if b.domain.contains(p) {
                                return bad(format!("branch {b} has fixed point {} in cell {}", fmt_rat(p), b.domain));
                            }
                        }
                    }
                }
                inf => {
                    let (v, s) = if *inf == BranchMap::NegInf {
                        (ExtRat::NegInf, Side::Right)
                    } else {
                        (ExtRat::PosInf, Side::Left)
                    };
                    if b.side != s || !cod.accumulates(&v, s) {
                        return bad(format!("branch {b} points at an infinity its target track cannot approach"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_tracks(&self) -> usize {
        self.tracks.len()
    }

    pub fn tracks(&self) -> &[DefSubset] {
        &self.tracks
    }

    pub fn domain(&self, t: TrackId) -> &DefSubset {
        &self.tracks[t]
    }

    pub fn flags(&self) -> &[SelfFlag] {
        &self.flags
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn whole(&self) -> TrackSet {
        TrackSet(self.tracks.clone())
    }

    pub fn empty_set(&self) -> TrackSet {
        TrackSet::empty(self.tracks.len())
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.track < self.tracks.len() && self.tracks[p.track].contains(&p.pos)
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::PointOutsideDomain(p.to_string()))
        }
    }

    pub fn check_subset(&self, y: &TrackSet) -> Result<()> {
        if y.len() != self.tracks.len() {
            return Err(Error::SubsetOutsideDomain(y.len().min(self.tracks.len())));
        }
        for (t, s) in y.0.iter().enumerate() {
            if !s.is_subset(&self.tracks[t]) {
                return Err(Error::SubsetOutsideDomain(t));
            }
        }
        Ok(())
    }

    /// Whether the space has finitely many points.
    pub fn is_finite(&self) -> bool {
        self.tracks.iter().all(DefSubset::is_finite)
    }

    /// Anchors of the point (track `t`, position `x`), without a domain check.
    pub(crate) fn anchors_at(&self, t: TrackId, x: &Rat) -> BTreeSet<Anchor> {
        let mut out = BTreeSet::new();
        for f in &self.flags {
            if f.track == t && f.region.contains(x) {
                out.insert(Anchor::new(t, ExtRat::Fin(x.clone()), f.side));
            }
        }
        for b in &self.branches {
            if b.from == t && b.domain.contains(x) {
                out.insert(b.anchor_at(x));
            }
        }
        out
    }

    pub fn anchors(&self, x: &Point) -> Result<BTreeSet<Anchor>> {
        self.check_point(x)?;
        Ok(self.anchors_at(x.track, &x.pos))
    }

    /// E_x: anchor values with sides collapsed.
    pub fn e_set(&self, x: &Point) -> Result<BTreeSet<(TrackId, ExtRat)>> {
        Ok(self.anchors(x)?.into_iter().map(|a| (a.track, a.value)).collect())
    }

    pub fn basic_nbhd(&self, x: &Point, eps: &Rat) -> Result<TrackSet> {
        self.check_point(x)?;
        if !eps.is_positive() {
            return Err(Error::Malformed("neighbourhood radius must be positive".into()));
        }
        let mut out = TrackSet::point(self.tracks.len(), x);
        for a in self.anchors_at(x.track, &x.pos) {
            let germ = germ_interval(&a, eps);
            out.0[a.track] = out.0[a.track].union(&germ.intersect(&self.tracks[a.track]));
        }
        Ok(out)
    }

    pub(crate) fn data(&self) -> Vec<Datum> {
        let mut out: Vec<Datum> = self
            .flags
            .iter()
            .map(|f| Datum {
                src: f.track,
                dom: f.region.clone(),
                map: BranchMap::Affine(AffineMap::identity()),
                cod: f.track,
                side: f.side,
            })
            .collect();
        for b in &self.branches {
            let d = b.domain.to_set();
            if let Some(g) =
                out.iter_mut().find(|g| g.src == b.from && g.map == b.map && g.cod == b.to && g.side == b.side)
            {
                g.dom = g.dom.union(&d);
            } else {
                out.push(Datum { src: b.from, dom: d, map: b.map.clone(), cod: b.to, side: b.side });
            }
        }
        out
    }

    /// Identity, branch maps and inverses of injective branches.
    pub(crate) fn level1_funs(&self, offset: usize) -> Vec<Fun> {
        let mut v = Vec::new();
        for (t, d) in self.tracks.iter().enumerate() {
            v.push(Fun { src: t + offset, dom: d.clone(), map: AffineMap::identity(), cod: t + offset });
        }
        for b in &self.branches {
            if let BranchMap::Affine(m) = &b.map {
                v.push(Fun { src: b.from + offset, dom: b.domain.to_set(), map: m.clone(), cod: b.to + offset });
                if let Some(inv) = m.inverse() {
                    v.push(Fun { src: b.to + offset, dom: b.image(), map: inv, cod: b.from + offset });
                }
            }
        }
        dedup_funs(v)
    }

    pub(crate) fn breaks(&self, offset: usize, total: usize) -> Vec<Vec<Rat>> {
        let mut v: Vec<BTreeSet<Rat>> = vec![BTreeSet::new(); total];
        for (t, d) in self.tracks.iter().enumerate() {
            v[t + offset].extend(d.endpoints());
        }
        for f in &self.flags {
            v[f.track + offset].extend(f.region.endpoints());
        }
        for b in &self.branches {
            v[b.from + offset].extend(b.domain.to_set().endpoints());
            v[b.to + offset].extend(b.image().endpoints());
        }
        v.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    pub(crate) fn arrangement(&self) -> Arc<Arrangement> {
        self.arrangement
            .get_or_init(|| {
                let funs = with_composites(self.level1_funs(0));
                let breaks = self.breaks(0, self.tracks.len());
                Arc::new(Arrangement::new(self.tracks.clone(), funs, breaks))
            })
            .clone()
    }

    /// Cells on which anchor patterns (and patterns relative to `extra`) are constant.
    pub fn sample_cells(&self, extra: Option<&TrackSet>) -> Vec<(TrackId, Cell)> {
        let arr = self.arrangement();
        match extra {
            Some(y) => arr.cells_with(&y.breaks()),
            None => arr.cells(),
        }
    }

    /// Assembles the set of cells on which `pred` holds at the sample point.
    pub(crate) fn collect(&self, extra: Option<&TrackSet>, mut pred: impl FnMut(TrackId, &Rat) -> bool) -> TrackSet {
        let mut out = self.empty_set();
        for (t, c) in self.sample_cells(extra) {
            if pred(t, &c.sample()) {
                out.add_cell(t, &c);
            }
        }
        out
    }

    pub fn validate_topology(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        for (t, cell) in self.sample_cells(None) {
            let x = cell.sample();
            let anchors = self.anchors_at(t, &x);
            for a in &anchors {
                for b in self.branches.iter().filter(|b| b.from == a.track) {
                    if !b.domain.accumulates(&a.value, a.side) {
                        continue;
                    }
                    let (l, mode) = b.map.limit(&a.value, a.side);
                    let required = Anchor::new(b.to, l, mode.side().unwrap_or(b.side));
                    if !anchors.contains(&required) {
                        let v = Violation { track: t, cell: cell.clone(), anchor: a.clone(), branch: b.clone(), required };
                        if !out.contains(&v) {
                            out.push(v);
                        }
                    }
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    pub fn closure(&self, y: &TrackSet) -> Result<TrackSet> {
        self.check_subset(y)?;
        Ok(self.collect(Some(y), |t, x| {
            y.0[t].contains(x) || self.anchors_at(t, x).iter().any(|a| y.0[a.track].accumulates(&a.value, a.side))
        }))
    }

    pub fn interior(&self, y: &TrackSet) -> Result<TrackSet> {
        self.check_subset(y)?;
        let rest = self.whole().difference(y);
        Ok(self.whole().difference(&self.closure(&rest)?))
    }

    pub fn frontier(&self, y: &TrackSet) -> Result<TrackSet> {
        Ok(self.closure(y)?.difference(y))
    }

    pub fn is_open(&self, y: &TrackSet) -> Result<bool> {
        Ok(&self.interior(y)? == y)
    }

    pub fn is_closed(&self, y: &TrackSet) -> Result<bool> {
        Ok(&self.closure(y)? == y)
    }

    /// Points owning the given anchor.
    pub fn anchor_owners(&self, a: &Anchor) -> TrackSet {
        let mut out = self.empty_set();
        for d in self.data() {
            if d.cod != a.track || d.side != a.side {
                continue;
            }
            let hit = match (&d.map, &a.value) {
                (BranchMap::NegInf, ExtRat::NegInf) | (BranchMap::PosInf, ExtRat::PosInf) => d.dom.clone(),
                (BranchMap::Affine(m), ExtRat::Fin(v)) => match m.inverse() {
                    Some(inv) => d.dom.intersect(&DefSubset::point(inv.apply(v))),
                    None if &m.offset == v => d.dom.clone(),
                    None => DefSubset::empty(),
                },
                _ => DefSubset::empty(),
            };
            out.0[d.src] = out.0[d.src].union(&hit);
        }
        out
    }

    /// Decides the Hausdorff property by solving for shared anchors.
    pub fn hausdorff_witness(&self) -> Option<HausdorffWitness> {
        let data = self.data();
        for (i, di) in data.iter().enumerate() {
            if di.dom.is_empty() {
                continue;
            }
            if di.map.is_constant() && !di.dom.is_finite() {
                let pts = two_points(&di.dom);
                let a = Anchor::new(di.cod, di.map.apply(&pts.0), di.side);
                return Some(HausdorffWitness { p: Point::new(di.src, pts.0), q: Point::new(di.src, pts.1), shared: a });
            }
            for dj in &data[i + 1..] {
                if dj.cod != di.cod || dj.side != di.side {
                    continue;
                }
                if let Some(w) = shared_anchor(di, dj) {
                    return Some(w);
                }
            }
        }
        None
    }

    pub fn is_hausdorff(&self) -> bool {
        self.hausdorff_witness().is_none()
    }

    pub fn isolated_points(&self) -> TrackSet {
        self.collect(None, |t, x| self.anchors_at(t, x).is_empty())
    }

    pub fn is_definably_separable(&self) -> bool {
        self.isolated_points().is_finite()
    }

    pub fn n_of_point(&self, x: &Point) -> Result<usize> {
        Ok(1 + self.anchors(x)?.len())
    }

    /// Transports the space along injective affine maps per track, with
    /// track `i` renamed to `perm[i]`.
    pub fn push_forward(&self, maps: &[AffineMap], perm: &[TrackId]) -> Result<Space> {
        let n = self.tracks.len();
        if maps.len() != n || perm.len() != n {
            return Err(Error::Malformed("push-forward needs one map and one target per track".into()));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::Malformed("track relabelling is not a permutation".into()));
            }
            seen[p] = true;
        }
        if let Some(t) = maps.iter().position(AffineMap::is_constant) {
            return Err(Error::NonInjectiveMap(t));
        }
        let mut tracks = vec![DefSubset::empty(); n];
        for (t, d) in self.tracks.iter().enumerate() {
            tracks[perm[t]] = d.image(&maps[t]);
        }
        let flags = self
            .flags
            .iter()
            .map(|f| SelfFlag {
                track: perm[f.track],
                region: f.region.image(&maps[f.track]),
                side: maps[f.track].carry_side(f.side),
            })
            .collect();
        let branches = self
            .branches
            .iter()
            .map(|b| {
                let (mf, mt) = (&maps[b.from], &maps[b.to]);
                let map = match &b.map {
                    BranchMap::Affine(g) => BranchMap::Affine(mt.compose(&g.compose(&mf.inverse().unwrap()))),
                    BranchMap::NegInf if mt.is_increasing() => BranchMap::NegInf,
                    BranchMap::NegInf => BranchMap::PosInf,
                    BranchMap::PosInf if mt.is_increasing() => BranchMap::PosInf,
                    BranchMap::PosInf => BranchMap::NegInf,
                };
                Branch::new(perm[b.from], b.domain.image(mf), map, perm[b.to], mt.carry_side(b.side))
            })
            .collect();
        Space::new(&self.name, tracks, flags, branches)
    }

    /// The subspace on `y`, with anchors kept only where `y` accumulates.
    pub fn subspace(&self, y: &TrackSet) -> Result<Space> {
        self.check_subset(y)?;
        let flags = self
            .flags
            .iter()
            .map(|f| SelfFlag {
                track: f.track,
                region: f.region.intersect(&y.0[f.track]).intersect(&y.0[f.track].side_approach(f.side)),
                side: f.side,
            })
            .collect();
        let mut branches = Vec::new();
        for b in &self.branches {
            let dom = b.domain.to_set().intersect(&y.0[b.from]);
            let target = &y.0[b.to];
            let dom = match &b.map {
                BranchMap::Affine(m) => dom.intersect(&target.side_approach(b.side).preimage(m)),
                BranchMap::NegInf if target.accumulates(&ExtRat::NegInf, Side::Right) => dom,
                BranchMap::PosInf if target.accumulates(&ExtRat::PosInf, Side::Left) => dom,
                _ => DefSubset::empty(),
            };
            for c in dom.cells() {
                branches.push(Branch::new(b.from, c, b.map.clone(), b.to, b.side));
            }
        }
        Space::new(&self.name, y.0.clone(), flags, branches)
    }

    /// Uncovered germs: values approachable from `side` in track `t` that no
    /// point anchors to, including an infinite end.
    pub fn uncovered(&self, t: TrackId, side: Side) -> (DefSubset, bool) {
        let d = &self.tracks[t];
        let mut covered = DefSubset::empty();
        let mut inf_covered = false;
        for f in self.flags.iter().filter(|f| f.track == t && f.side == side) {
            covered = covered.union(&f.region);
        }
        for b in self.branches.iter().filter(|b| b.to == t && b.side == side) {
            match b.map {
                BranchMap::Affine(_) => covered = covered.union(&b.image()),
                _ => inf_covered = true,
            }
        }
        let inf = match side {
            Side::Right => ExtRat::NegInf,
            Side::Left => ExtRat::PosInf,
        };
        let inf_open = d.accumulates(&inf, side) && !inf_covered;
        (d.side_approach(side).difference(&covered), inf_open)
    }
}

fn germ_interval(a: &Anchor, eps: &Rat) -> DefSubset {
    match (&a.value, a.side) {
        (ExtRat::Fin(v), Side::Right) => DefSubset::open(ExtRat::Fin(v.clone()), ExtRat::Fin(v + eps)),
        (ExtRat::Fin(v), Side::Left) => DefSubset::open(ExtRat::Fin(v - eps), ExtRat::Fin(v.clone())),
        (ExtRat::NegInf, _) => DefSubset::open(ExtRat::NegInf, ExtRat::Fin(-eps.recip())),
        (ExtRat::PosInf, _) => DefSubset::open(ExtRat::Fin(eps.recip()), ExtRat::PosInf),
    }
}

/// Two distinct points of an infinite set.
fn two_points(s: &DefSubset) -> (Rat, Rat) {
    let c = s.cells().into_iter().find(|c| !c.is_point()).expect("infinite set has an interval");
    let a = c.sample();
    let b = match &c {
        Cell::Open(lo, _) => match lo {
            ExtRat::Fin(l) => crate::exactline::half(l, &a),
            _ => &a - Rat::one(),
        },
        Cell::Point(_) => unreachable!(),
    };
    (a, b)
}

fn shared_anchor(di: &Datum, dj: &Datum) -> Option<HausdorffWitness> {
    let mk = |p: Rat, q: Rat, v: ExtRat| HausdorffWitness {
        p: Point::new(di.src, p),
        q: Point::new(dj.src, q),
        shared: Anchor::new(di.cod, v, di.side),
    };
    match (&di.map, &dj.map) {
        (BranchMap::NegInf, BranchMap::NegInf) | (BranchMap::PosInf, BranchMap::PosInf) => {
            let p = di.dom.sample()?;
            let q = dj.dom.sample()?;
            if di.src == dj.src && p == q {
                let other = dj.dom.difference(&DefSubset::point(p.clone())).sample();
                return other.map(|q| mk(p, q, di.map.apply(&Rat::zero())));
            }
            Some(mk(p, q, di.map.apply(&Rat::zero())))
        }
        (BranchMap::Affine(gi), BranchMap::Affine(gj)) => {
            let common = di.dom.image(gi).intersect(&dj.dom.image(gj));
            if common.is_empty() {
                return None;
            }
            match (gi.inverse(), gj.inverse()) {
                (_, Some(inv_j)) => {
                    let mut ps = di.dom.intersect(&common.preimage(gi));
                    let h = inv_j.compose(gi);
                    if di.src == dj.src {
                        let fixed = h.meet(&AffineMap::identity())?;
                        ps = ps.difference(&DefSubset::points(fixed));
                    }
                    let p = ps.sample()?;
                    let q = h.apply(&p);
                    Some(mk(p.clone(), q, ExtRat::Fin(gi.apply(&p))))
                }
                (Some(inv_i), None) => {
                    let v = gj.offset.clone();
                    let p = inv_i.apply(&v);
                    let q = if di.src == dj.src {
                        dj.dom.difference(&DefSubset::point(p.clone())).sample()?
                    } else {
                        dj.dom.sample()?
                    };
                    Some(mk(p, q, ExtRat::Fin(v)))
                }
                (None, None) => {
                    let v = gi.offset.clone();
                    let p = di.dom.sample()?;
                    let q = if di.src == dj.src {
                        dj.dom.difference(&DefSubset::point(p.clone())).sample()?
                    } else {
                        dj.dom.sample()?
                    };
                    Some(mk(p, q, ExtRat::Fin(v)))
                }
            }
        }
        _ => None,
    }
}

pub fn anchors(s: &Space, x: &Point) -> Result<BTreeSet<Anchor>> {
    s.anchors(x)
}

pub fn basic_nbhd(s: &Space, x: &Point, eps: &Rat) -> Result<TrackSet> {
    s.basic_nbhd(x, eps)
}

pub fn validate_topology(s: &Space) -> std::result::Result<(), Vec<Violation>> {
    s.validate_topology()
}

pub fn closure(s: &Space, y: &TrackSet) -> Result<TrackSet> {
    s.closure(y)
}

pub fn is_zero(r: &Rat) -> bool {
    r.is_zero()
}
