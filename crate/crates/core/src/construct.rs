//! Constructions on regular Hausdorff spaces: the accumulation
//! equivalence, the open partition with its lexicographic and Alexandrov
//! embeddings, compactifications and separation of closed sets.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::classify::{flags_at, is_definably_compact, is_near_compact, require_t3, PieceLabel};
use crate::curves::{continuity_check, AssignPiece, PiecewiseMap};
use crate::defset::DefSubset;
use crate::error::{Error, Result};
use crate::exactline::{int, AffineMap, Cell, ExtRat, Rat, Side};
use crate::space::{Anchor, Branch, BranchMap, Point, SelfFlag, Space, TrackId, TrackSet};

/// Points accumulating at `p` from either side.
pub fn pre_set(s: &Space, p: &Point) -> TrackSet {
    let v = ExtRat::Fin(p.pos.clone());
    let r = s.anchor_owners(&Anchor::new(p.track, v.clone(), Side::Right));
    r.union(&s.anchor_owners(&Anchor::new(p.track, v, Side::Left)))
}

/// An equivalence class, each member realized as an affine image of the
/// representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimClass {
    pub representative: Point,
    pub members: Vec<Point>,
    pub member_maps: Vec<(TrackId, AffineMap)>,
}

impl fmt::Display for SimClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.members.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}] = {{{}}}", self.representative, m.join(", "))
    }
}

/// Affine map of a flag or branch carrying `x` to `y`.
fn realizing_map(s: &Space, x: &Point, y: &Point) -> Option<AffineMap> {
    if x == y {
        return Some(AffineMap::identity());
    }
    s.data().into_iter().find_map(|d| match &d.map {
        BranchMap::Affine(m)
            if d.src == x.track && d.cod == y.track && d.dom.contains(&x.pos) && m.apply(&x.pos) == y.pos =>
        {
            Some(m.clone())
        }
        _ => None,
    })
}

fn class_members(s: &Space, p: &Point) -> Vec<Point> {
    let pre = pre_set(s, p);
    let owner = match pre.points().and_then(|v| v.into_iter().next()) {
        Some(z) => z,
        None => return vec![p.clone()],
    };
    let mut out: BTreeSet<Point> = BTreeSet::new();
    out.insert(p.clone());
    for a in s.anchors_at(owner.track, &owner.pos) {
        if let ExtRat::Fin(v) = &a.value {
            let y = Point::new(a.track, v.clone());
            if s.contains(&y) && pre_set(s, &y) == pre {
                out.insert(y);
            }
        }
    }
    out.into_iter().collect()
}

/// The class of `p`: itself when nothing accumulates at it, otherwise the
/// points accumulated at by exactly the same points.
pub fn sim_class(s: &Space, p: &Point) -> Result<SimClass> {
    s.check_point(p)?;
    let members = class_members(s, p);
    let member_maps = members
        .iter()
        .map(|y| (y.track, realizing_map(s, p, y).unwrap_or_else(|| AffineMap::constant(y.pos.clone()))))
        .collect();
    Ok(SimClass { representative: p.clone(), members, member_maps })
}

/// Whether `x` and `y` are equivalent.
pub fn equivalent(s: &Space, x: &Point, y: &Point) -> bool {
    if x == y {
        return true;
    }
    let px = pre_set(s, x);
    !px.is_empty() && px == pre_set(s, y)
}

/// Points paired by an anchor with a non-equivalent point (or with a
/// value outside the space), closed under the equivalence.
pub fn exceptional_set(s: &Space) -> Result<TrackSet> {
    require_t3(s)?;
    let mut heads: BTreeSet<Point> = BTreeSet::new();
    for (t, c) in s.sample_cells(None) {
        let x = Point::new(t, c.sample());
        for a in s.anchors_at(t, &x.pos) {
            let y = match &a.value {
                ExtRat::Fin(v) => Point::new(a.track, v.clone()),
                _ => {
                    heads.insert(x.clone());
                    continue;
                }
            };
            let bad = !s.contains(&y) || !equivalent(s, &x, &y);
            if !bad {
                continue;
            }
            if !c.is_point() {
                return Err(Error::Internal(format!("exceptional anchors along the cell {t}:{c}")));
            }
            heads.insert(x.clone());
            if s.contains(&y) {
                heads.insert(y);
            }
        }
    }
    let mut out = s.empty_set();
    for h in heads {
        for m in class_members(s, &h) {
            out.0[m.track] = out.0[m.track].union(&DefSubset::point(m.pos));
        }
    }
    Ok(out)
}

/// Classes of the cell samples and the cofinite core outside the
/// exceptional classes.
#[derive(Clone, Debug)]
pub struct ClassStructure {
    pub exceptional: TrackSet,
    pub core: TrackSet,
    pub classes: Vec<SimClass>,
}

pub fn sim_classes(s: &Space) -> Result<ClassStructure> {
    let exceptional = exceptional_set(s)?;
    let core = s.whole().difference(&exceptional);
    let mut seen: BTreeSet<Vec<Point>> = BTreeSet::new();
    let mut classes = Vec::new();
    for (t, c) in s.sample_cells(Some(&exceptional)) {
        let p = Point::new(t, c.sample());
        let k = sim_class(s, &p)?;
        if seen.insert(k.members.clone()) {
            classes.push(k);
        }
    }
    Ok(ClassStructure { exceptional, core, classes })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseTag {
    Case0,
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = *self as usize;
        write!(f, "case{k}")
    }
}

/// Which class members have accumulation data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EPattern {
    /// No member: the piece is isolated points.
    Empty,
    /// Only the representative.
    Single,
    /// The representative and the last member.
    Pair,
}

impl fmt::Display for EPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EPattern::Empty => "none",
            EPattern::Single => "x",
            EPattern::Pair => "x,last",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TargetTopology {
    Lex,
    Alexandrov,
}

impl fmt::Display for TargetTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TargetTopology::Lex => "lex",
            TargetTopology::Alexandrov => "alexandrov",
        })
    }
}

/// An open piece `f_0(I) ∪ … ∪ f_{n-1}(I)` with `f_0` the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenPiece {
    pub track: TrackId,
    pub cell: Cell,
    pub maps: Vec<(TrackId, AffineMap)>,
    pub case: CaseTag,
    pub pattern: EPattern,
    pub flags: PieceLabel,
}

impl OpenPiece {
    pub fn n(&self) -> usize {
        self.maps.len()
    }

    pub fn image(&self, i: usize) -> (TrackId, Cell) {
        let (t, m) = &self.maps[i];
        (*t, self.cell.image(m))
    }

    pub fn set(&self, n_tracks: usize) -> TrackSet {
        let mut out = TrackSet::empty(n_tracks);
        for i in 0..self.n() {
            let (t, c) = self.image(i);
            out.add_cell(t, &c);
        }
        out
    }

    pub fn topology(&self) -> TargetTopology {
        match self.case {
            CaseTag::Case5 => TargetTopology::Alexandrov,
            _ => TargetTopology::Lex,
        }
    }

    /// Number of levels of the target block.
    pub fn levels(&self) -> usize {
        let n = self.n();
        match self.case {
            CaseTag::Case0 => 3,
            CaseTag::Case1 | CaseTag::Case2 => n + 1,
            CaseTag::Case3 | CaseTag::Case4 | CaseTag::Case5 => n,
        }
    }

    /// Target level of the `i`-th member.
    pub fn level(&self, i: usize) -> usize {
        let n = self.n();
        match self.case {
            CaseTag::Case0 => 1,
            CaseTag::Case1 | CaseTag::Case3 | CaseTag::Case5 => i,
            CaseTag::Case2 => n - i,
            CaseTag::Case4 => n - 1 - i,
        }
    }
}

impl fmt::Display for OpenPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{} n={} {} E={} flags={}", self.track, self.cell, self.n(), self.case, self.pattern, self.flags)?;
        for (t, m) in &self.maps[1..] {
            write!(f, " | {t} via {m}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct OpenPartition {
    pub singletons: Vec<Point>,
    pub pieces: Vec<OpenPiece>,
}

impl OpenPartition {
    pub fn union(&self, n_tracks: usize) -> TrackSet {
        self.pieces.iter().fold(TrackSet::empty(n_tracks), |acc, p| acc.union(&p.set(n_tracks)))
    }
}

fn case_of(pattern: EPattern, flags: PieceLabel) -> Result<CaseTag> {
    Ok(match (pattern, flags) {
        (EPattern::Empty, PieceLabel::Discrete) => CaseTag::Case0,
        (EPattern::Single, PieceLabel::LeftHalfOpen) => CaseTag::Case1,
        (EPattern::Single, PieceLabel::RightHalfOpen) => CaseTag::Case2,
        (EPattern::Pair, PieceLabel::LeftHalfOpen) => CaseTag::Case3,
        (EPattern::Pair, PieceLabel::RightHalfOpen) => CaseTag::Case4,
        (EPattern::Single, PieceLabel::Euclidean) => CaseTag::Case5,
        (p, l) => return Err(Error::UnknownCase(format!("pattern {p} with flags {l}"))),
    })
}

/// Piece data at a sample point of a cell of the core, or `None` when the
/// point is not the representative of its class.
fn piece_at(s: &Space, t: TrackId, cell: &Cell) -> Result<Option<OpenPiece>> {
    let x = Point::new(t, cell.sample());
    let (r, l) = flags_at(s, t, &x.pos);
    let flags = PieceLabel::from_flags(r, l);
    if pre_set(s, &x).is_empty() {
        let case = case_of(EPattern::Empty, flags)?;
        return Ok(Some(OpenPiece {
            track: t,
            cell: cell.clone(),
            maps: vec![(t, AffineMap::identity())],
            case,
            pattern: EPattern::Empty,
            flags,
        }));
    }
    if s.anchors_at(t, &x.pos).is_empty() {
        return Ok(None);
    }
    let members = class_members(s, &x);
    let with_e: Vec<&Point> = members.iter().filter(|y| !s.anchors_at(y.track, &y.pos).is_empty()).collect();
    if with_e.first() != Some(&&x) {
        return Ok(None);
    }
    let (pattern, order): (EPattern, Vec<&Point>) = match with_e.len() {
        1 => (EPattern::Single, members.iter().filter(|y| **y != x).collect()),
        2 => {
            let mut v: Vec<&Point> = members.iter().filter(|y| !with_e.contains(y)).collect();
            v.push(with_e[1]);
            (EPattern::Pair, v)
        }
        k => return Err(Error::Internal(format!("{k} members of the class of {x} carry accumulation data"))),
    };
    let mut maps = vec![(t, AffineMap::identity())];
    for y in order {
        let m = realizing_map(s, &x, y)
            .filter(|m| !m.is_constant())
            .ok_or_else(|| Error::Internal(format!("no affine branch carries {x} to {y}")))?;
        maps.push((y.track, m));
    }
    let case = case_of(pattern, flags)?;
    Ok(Some(OpenPiece { track: t, cell: cell.clone(), maps, case, pattern, flags }))
}

/// Partition into finitely many singletons and open pieces, each piece
/// tagged with the shape of its embedding.
pub fn open_partition(s: &Space) -> Result<OpenPartition> {
    let exc = exceptional_set(s)?;
    let mut pieces = Vec::new();
    for (t, c) in s.sample_cells(Some(&exc)) {
        if c.is_point() {
            continue;
        }
        if let Some(p) = piece_at(s, t, &c)? {
            pieces.push(p);
        }
    }
    let n = s.num_tracks();
    let covered = pieces.iter().fold(TrackSet::empty(n), |acc, p| acc.union(&p.set(n)));
    let rest = s.whole().difference(&covered);
    let singletons = rest.points().ok_or_else(|| Error::Internal(format!("pieces leave {rest} uncovered")))?;
    Ok(OpenPartition { singletons, pieces })
}

/// Appends a block `cell × {0..levels-1}` with the given topology and
/// returns its first track.
fn push_block(
    tracks: &mut Vec<DefSubset>,
    flags: &mut Vec<SelfFlag>,
    branches: &mut Vec<Branch>,
    cell: &Cell,
    levels: usize,
    topo: TargetTopology,
) -> TrackId {
    let first = tracks.len();
    let d = cell.to_set();
    tracks.extend(std::iter::repeat_n(d.clone(), levels));
    let flag = |track, side| SelfFlag { track, region: d.clone(), side };
    let ident = |from, to, side| Branch::affine(from, cell.clone(), AffineMap::identity(), to, side);
    let top = first + levels - 1;
    if levels == 1 {
        flags.push(flag(first, Side::Right));
        flags.push(flag(first, Side::Left));
        return first;
    }
    match topo {
        TargetTopology::Lex => {
            flags.push(flag(first, Side::Left));
            flags.push(flag(top, Side::Right));
            for l in first + 1..=top {
                branches.push(ident(first, l, Side::Left));
            }
            for l in first..top {
                branches.push(ident(top, l, Side::Right));
            }
        }
        TargetTopology::Alexandrov => {
            flags.push(flag(first, Side::Right));
            flags.push(flag(first, Side::Left));
            for l in first + 1..=top {
                branches.push(ident(first, l, Side::Right));
                branches.push(ident(first, l, Side::Left));
            }
        }
    }
    first
}

/// `cell × {0..levels-1}` with the lexicographic order topology.
pub fn lex_block(cell: &Cell, levels: usize) -> Result<Space> {
    block_space(cell, levels, TargetTopology::Lex)
}

/// `cell × {0..levels-1}` with the Alexandrov topology.
pub fn alex_block(cell: &Cell, levels: usize) -> Result<Space> {
    block_space(cell, levels, TargetTopology::Alexandrov)
}

fn block_space(cell: &Cell, levels: usize, topo: TargetTopology) -> Result<Space> {
    if levels == 0 {
        return Err(Error::Malformed("a block needs at least one level".into()));
    }
    let (mut t, mut f, mut b) = (Vec::new(), Vec::new(), Vec::new());
    push_block(&mut t, &mut f, &mut b, cell, levels, topo);
    Space::new(&format!("{topo}{levels}"), t, f, b)
}

/// Assignment sending member `i` of `piece` to level `level(i)` of a block
/// starting at `first`, with the representative coordinate.
fn piece_assignment(piece: &OpenPiece, first: TrackId, level: impl Fn(usize) -> usize) -> Vec<AssignPiece> {
    (0..piece.n())
        .map(|i| {
            let (t, c) = piece.image(i);
            AssignPiece { src: t, cell: c, map: piece.maps[i].1.inverse().unwrap(), dst: first + level(i) }
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct PieceEmbedding {
    pub target: Space,
    pub topology: TargetTopology,
    pub levels: usize,
    pub h: PiecewiseMap,
}

pub fn embed_piece(piece: &OpenPiece) -> Result<PieceEmbedding> {
    if piece.n() == 0 || piece.cell.is_point() {
        return Err(Error::UnknownCase(piece.to_string()));
    }
    let topology = piece.topology();
    let levels = piece.levels();
    let target = block_space(&piece.cell, levels, topology)?;
    let h = PiecewiseMap::new(piece_assignment(piece, 0, |i| piece.level(i)));
    Ok(PieceEmbedding { target, topology, levels, h })
}

/// Checks that `h` is a homeomorphism from `src_set` (a subset of `s`)
/// onto its image in `dst`; returns whether the image is all of `dst`.
pub fn certify_embedding(s: &Space, src_set: &TrackSet, dst: &Space, h: &PiecewiseMap) -> Result<bool> {
    let src = s.subspace(src_set)?;
    if !h.is_injective(&src) {
        return Err(Error::Internal("embedding is not injective".into()));
    }
    if let Some(w) = continuity_check(&src, dst, h, None)? {
        return Err(Error::Internal(format!("embedding is discontinuous along {w}")));
    }
    let img = h.image(src_set, dst.num_tracks());
    let inv = h.inverse().ok_or_else(|| Error::Internal("embedding has a constant piece".into()))?;
    let back = dst.subspace(&img)?;
    if let Some(w) = continuity_check(&back, &src, &inv, None)? {
        return Err(Error::Internal(format!("inverse is discontinuous along {w}")));
    }
    Ok(img == dst.whole())
}

#[derive(Clone, Debug)]
pub struct EmbeddingReport {
    pub partition: OpenPartition,
    pub embeddings: Vec<PieceEmbedding>,
    pub y: TrackSet,
    pub z: TrackSet,
    /// Top level of the lexicographic target (0 when `y` is empty).
    pub n_y: usize,
    /// Top level of the Alexandrov target (0 when `z` is empty).
    pub n_z: usize,
    pub y_target: Space,
    pub z_target: Space,
    pub h_y: PiecewiseMap,
    pub h_z: PiecewiseMap,
}

impl EmbeddingReport {
    pub fn leftover(&self, s: &Space) -> TrackSet {
        s.whole().difference(&self.y.union(&self.z))
    }
}

/// Splits a regular Hausdorff space into a finite set and open parts
/// embedded into a padded lexicographic space and an Alexandrov space.
pub fn decompose_t3(s: &Space) -> Result<EmbeddingReport> {
    let partition = open_partition(s)?;
    let n = s.num_tracks();
    let embeddings = partition.pieces.iter().map(embed_piece).collect::<Result<Vec<_>>>()?;
    let top = |topo| {
        partition.pieces.iter().filter(|p| p.topology() == topo).map(|p| p.levels() - 1).max().unwrap_or(0)
    };
    let (n_y, n_z) = (top(TargetTopology::Lex), top(TargetTopology::Alexandrov));
    let mut parts = Vec::new();
    for topo in [TargetTopology::Lex, TargetTopology::Alexandrov] {
        let pad = if topo == TargetTopology::Lex { n_y } else { n_z };
        let (mut t, mut f, mut b) = (Vec::new(), Vec::new(), Vec::new());
        let mut h = Vec::new();
        let mut set = TrackSet::empty(n);
        for p in partition.pieces.iter().filter(|p| p.topology() == topo) {
            let first = push_block(&mut t, &mut f, &mut b, &p.cell, pad + 1, topo);
            let m = p.levels() - 1;
            h.extend(piece_assignment(p, first, |i| {
                let l = p.level(i);
                if topo == TargetTopology::Lex && l == m {
                    pad
                } else {
                    l
                }
            }));
            set = set.union(&p.set(n));
        }
        let name = format!("{}-{topo}", s.name());
        parts.push((set, Space::new(&name, t, f, b)?, PiecewiseMap::new(h)));
    }
    let (z, z_target, h_z) = parts.pop().unwrap();
    let (y, y_target, h_y) = parts.pop().unwrap();
    Ok(EmbeddingReport { partition, embeddings, y, z, n_y, n_z, y_target, z_target, h_y, h_z })
}

#[derive(Clone, Debug)]
pub struct SeparableEmbedding {
    pub y: TrackSet,
    pub target: Space,
    pub h: PiecewiseMap,
}

/// A cofinite subspace of a separable regular Hausdorff space embedded
/// into blocks of at most two lexicographic levels.
pub fn embed_separable_lex(s: &Space) -> Result<SeparableEmbedding> {
    require_t3(s)?;
    if !s.is_definably_separable() {
        return Err(Error::NotSeparable);
    }
    let partition = open_partition(s)?;
    let n = s.num_tracks();
    let (mut t, mut f, mut b) = (Vec::new(), Vec::new(), Vec::new());
    let mut h = Vec::new();
    let mut y = TrackSet::empty(n);
    for p in &partition.pieces {
        if p.levels() > 2 || p.case == CaseTag::Case0 {
            return Err(Error::Internal(format!("separable space produced the piece {p}")));
        }
        let first = push_block(&mut t, &mut f, &mut b, &p.cell, p.levels(), TargetTopology::Lex);
        h.extend(piece_assignment(p, first, |i| p.level(i)));
        y = y.union(&p.set(n));
    }
    let target = Space::new(&format!("{}-lex2", s.name()), t, f, b)?;
    Ok(SeparableEmbedding { y, target, h: PiecewiseMap::new(h) })
}

/// One block of a near-compactification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub piece: usize,
    pub first: TrackId,
    pub levels: usize,
    pub cell: Cell,
    pub topology: TargetTopology,
}

#[derive(Clone, Debug)]
pub struct NearCompactification {
    pub partition: OpenPartition,
    pub space: Space,
    pub h: PiecewiseMap,
    pub blocks: Vec<Block>,
    /// Track holding the images of the singletons, at positions 0, 1, ….
    pub singleton_track: Option<TrackId>,
}

/// Embeds a regular Hausdorff space into the union of its piece blocks and
/// its singletons; each singleton accumulates at the block ends it
/// accumulates at in the original space.
pub fn near_compactify(s: &Space) -> Result<NearCompactification> {
    let partition = open_partition(s)?;
    let (mut t, mut f, mut b) = (Vec::new(), Vec::new(), Vec::new());
    let mut h = Vec::new();
    let mut blocks = Vec::new();
    for (k, p) in partition.pieces.iter().enumerate() {
        let topology = p.topology();
        let first = push_block(&mut t, &mut f, &mut b, &p.cell, p.levels(), topology);
        h.extend(piece_assignment(p, first, |i| p.level(i)));
        blocks.push(Block { piece: k, first, levels: p.levels(), cell: p.cell.clone(), topology });
    }
    let singleton_track = if partition.singletons.is_empty() {
        None
    } else {
        let st = t.len();
        t.push(DefSubset::points((0..partition.singletons.len() as i64).map(int)));
        for (i, x) in partition.singletons.iter().enumerate() {
            let at = Cell::Point(int(i as i64));
            h.push(AssignPiece { src: x.track, cell: Cell::Point(x.pos.clone()), map: AffineMap::constant(int(i as i64)), dst: st });
            let anchors = s.anchors_at(x.track, &x.pos);
            for blk in &blocks {
                let base = partition.pieces[blk.piece].track;
                for (end, side) in [(blk.cell.lo(), Side::Right), (blk.cell.hi(), Side::Left)] {
                    if !anchors.contains(&Anchor::new(base, end.clone(), side)) {
                        continue;
                    }
                    let map = match &end {
                        ExtRat::Fin(v) => BranchMap::Affine(AffineMap::constant(v.clone())),
                        ExtRat::NegInf => BranchMap::NegInf,
                        ExtRat::PosInf => BranchMap::PosInf,
                    };
                    for l in blk.first..blk.first + blk.levels {
                        b.push(Branch::new(st, at.clone(), map.clone(), l, side));
                    }
                }
            }
        }
        Some(st)
    };
    let space = Space::new(&format!("{}-near", s.name()), t, f, b)?;
    if let Err(v) = space.validate_topology() {
        return Err(Error::Internal(format!("near-compactification is not a topology: {}", v[0])));
    }
    Ok(NearCompactification { partition, space, h: PiecewiseMap::new(h), blocks, singleton_track })
}

#[derive(Clone, Debug)]
pub struct OnePoint {
    pub space: Space,
    /// The added point, or `None` when the input was already compact.
    pub added: Option<Point>,
}

/// Adds one point accumulating at every uncovered germ.
pub fn one_point_compactify(s: &Space) -> Result<OnePoint> {
    require_t3(s)?;
    if !is_near_compact(s) {
        return Err(Error::NotNearCompact);
    }
    if is_definably_compact(s) {
        return Ok(OnePoint { space: s.clone(), added: None });
    }
    let c = s.num_tracks();
    let mut tracks = s.tracks().to_vec();
    tracks.push(DefSubset::point(Rat::zero()));
    let mut branches = s.branches().to_vec();
    let at = Cell::Point(Rat::zero());
    for t in 0..c {
        for side in Side::BOTH {
            let (vals, inf) = s.uncovered(t, side);
            let pts = vals.finite_points().ok_or(Error::NotNearCompact)?;
            for v in pts {
                branches.push(Branch::affine(c, at.clone(), AffineMap::constant(v), t, side));
            }
            if inf {
                let map = if side == Side::Right { BranchMap::NegInf } else { BranchMap::PosInf };
                branches.push(Branch::new(c, at.clone(), map, t, side));
            }
        }
    }
    let space = Space::new(&format!("{}-c", s.name()), tracks, s.flags().to_vec(), branches)?;
    if let Err(v) = space.validate_topology() {
        return Err(Error::Internal(format!("one-point compactification is not a topology: {}", v[0])));
    }
    Ok(OnePoint { space, added: Some(Point::new(c, Rat::zero())) })
}

#[derive(Clone, Debug)]
pub struct Compactification {
    pub near: NearCompactification,
    pub space: Space,
    pub h: PiecewiseMap,
    pub added: Option<Point>,
}

impl Compactification {
    /// Points outside the image other than unused block levels.
    pub fn added_points(&self, s: &Space) -> Vec<Point> {
        let img = self.h.image(&s.whole(), self.space.num_tracks());
        let rest = self.space.whole().difference(&img);
        let in_block = |t: TrackId| self.near.blocks.iter().any(|b| t >= b.first && t < b.first + b.levels);
        let mut out = Vec::new();
        for (t, d) in rest.0.iter().enumerate() {
            if in_block(t) {
                continue;
            }
            for p in d.finite_points().unwrap_or_default() {
                out.push(Point::new(t, p));
            }
        }
        out
    }
}

/// A definably compact Hausdorff space containing `s`.
pub fn compactify(s: &Space) -> Result<Compactification> {
    require_t3(s)?;
    let near = near_compactify(s)?;
    let op = one_point_compactify(&near.space)?;
    let h = near.h.clone();
    Ok(Compactification { space: op.space.with_name(&format!("{}-compact", s.name())), h, added: op.added, near })
}

/// Values accumulated at by points of `b`.
fn accumulation_values(s: &Space, b: &TrackSet) -> TrackSet {
    let mut out = s.empty_set();
    for d in s.data() {
        let dom = d.dom.intersect(b.track(d.src));
        if dom.is_empty() {
            continue;
        }
        if let BranchMap::Affine(m) = &d.map {
            out.0[d.cod] = out.0[d.cod].union(&dom.image(m));
        }
    }
    out
}

/// Shrinks a basic neighbourhood of `x` until its closure misses `c`.
fn separating_nbhd(s: &Space, x: &Point, c: &TrackSet) -> Result<TrackSet> {
    let mut eps = Rat::one();
    for _ in 0..200 {
        let u = s.basic_nbhd(x, &eps)?;
        if s.closure(&u)?.intersect(c).is_empty() {
            return Ok(u);
        }
        eps /= int(2);
    }
    Err(Error::NotT3(format!("no neighbourhood of {x} has closure avoiding the closed set")))
}

/// Disjoint open sets around two disjoint closed sets.
pub fn separate_closed_sets(s: &Space, b: &TrackSet, c: &TrackSet) -> Result<(TrackSet, TrackSet)> {
    require_t3(s)?;
    s.check_subset(b)?;
    s.check_subset(c)?;
    for (name, y) in [("B", b), ("C", c)] {
        if !s.is_closed(y)? {
            return Err(Error::NotClosed(format!("{name} = {y}")));
        }
    }
    if !b.intersect(c).is_empty() {
        return Err(Error::NotDisjoint);
    }
    let e_b = accumulation_values(s, b);
    let int_e = TrackSet(e_b.0.iter().map(DefSubset::interior_e).collect());
    let inside = |t: TrackId, x: &Rat| {
        s.anchors_at(t, x).iter().all(|a| match &a.value {
            ExtRat::Fin(v) => int_e.track(a.track).contains(v),
            _ => false,
        })
    };
    let b_prime = s.collect(Some(b), |t, x| b.track(t).contains(x) && inside(t, x)).intersect(b);
    let b_rest = b.difference(&b_prime);
    let rest_pts = b_rest.points().ok_or_else(|| Error::Internal(format!("B'' = {b_rest} is infinite")))?;
    let spread = TrackSet(int_e.0.iter().zip(s.tracks()).map(|(e, d)| e.intersect(d)).collect());
    let mut u = b_prime.union(&spread.difference(c));
    for x in &rest_pts {
        u = u.union(&separating_nbhd(s, x, c)?);
    }
    let u = s.interior(&u)?;
    let v = s.whole().difference(&s.closure(&u)?);
    if !b.is_subset(&u) || !c.is_subset(&v) || !u.intersect(&v).is_empty() {
        return Err(Error::Internal("separating sets failed verification".into()));
    }
    Ok((u, v))
}
