//! Euclidean models: gluing graphs of affine spaces, explicit definable
//! metrics, and the at most two-to-one map of a separable regular space
//! onto a euclidean one.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::classify::{cell_mid, decompose_t2, require_t3, Piece, PieceLabel};
use crate::construct::{near_compactify, NearCompactification};
use crate::curves::{continuity_check, e_limit_side, tau_limit, AssignPiece, Curve, PiecewiseMap};
use crate::error::{Error, Result};
use crate::exactline::{fmt_rat, AffineMap, Cell, ExtRat, Rat, Side};
use crate::space::{Anchor, Branch, Point, SelfFlag, Space, TrackId, TrackSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Vertex {
    /// A point of the space.
    Point(Point),
    /// An end germ that no point accumulates at.
    Free(Anchor),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Point(p) => write!(f, "{p}"),
            Vertex::Free(a) => write!(f, "end{a}"),
        }
    }
}

/// An open interval of the space, glued at its ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub track: TrackId,
    pub cell: Cell,
    /// `None` for an unbounded interval.
    pub length: Option<Rat>,
    pub ends: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GluingGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl GluingGraph {
    fn vertex_of(&self, p: &Point) -> Option<usize> {
        self.vertices.iter().position(|v| matches!(v, Vertex::Point(q) if q == p))
    }

    /// Groups of vertices joined by edges (each group sorted).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(p: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while p[r] != r {
                r = p[r];
            }
            p[i] = r;
            r
        }
        for e in &self.edges {
            let (a, b) = (root(&mut parent, e.ends[0]), root(&mut parent, e.ends[1]));
            parent[a.max(b)] = a.min(b);
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            let r = root(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        groups.into_values().collect()
    }
}

impl fmt::Display for GluingGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            writeln!(f, "vertex v{i} {v}")?;
        }
        for (i, e) in self.edges.iter().enumerate() {
            let len = e.length.as_ref().map(fmt_rat).unwrap_or_else(|| "inf".into());
            writeln!(f, "edge e{i} {}:{} v{} v{} length {len}", e.track, e.cell, e.ends[0], e.ends[1])?;
        }
        Ok(())
    }
}

/// A discrete interval whose points converge, as they approach the end
/// `a`, to the vertex `hub`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hub {
    pub track: TrackId,
    pub cell: Cell,
    pub vertex: usize,
    pub a: Rat,
}

/// Euclidean edges, discrete intervals hanging off vertices and clopen
/// discrete intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Model {
    graph: GluingGraph,
    hubs: Vec<Hub>,
    clopen: Vec<(TrackId, Cell)>,
}

fn owner(s: &Space, g: &Anchor) -> Result<Option<Point>> {
    let pts = s.anchor_owners(g).points().ok_or_else(|| Error::NotHausdorff(format!("germ {g} is shared")))?;
    match pts.len() {
        0 => Ok(None),
        1 => Ok(pts.into_iter().next()),
        _ => Err(Error::NotHausdorff(format!("germ {g} is shared"))),
    }
}

/// Points with an anchor other than a self-flag.
fn exceptional(s: &Space) -> TrackSet {
    s.collect(None, |t, x| {
        s.anchors_at(t, x).iter().any(|a| a.track != t || !a.value.eq_rat(x))
    })
}

fn build_model(s: &Space, pieces: &[Piece], leftover: &[Point]) -> Result<Model> {
    let exc = exceptional(s);
    let exc_pts = exc.points().ok_or_else(|| Error::ExceptionalSetInfinite(exc.to_string()))?;
    let mut cuts: Vec<Vec<Rat>> = vec![Vec::new(); s.num_tracks()];
    for x in &exc_pts {
        cuts[x.track].push(x.pos.clone());
        for a in s.anchors_at(x.track, &x.pos) {
            if let ExtRat::Fin(v) = a.value {
                cuts[a.track].push(v);
            }
        }
    }
    for c in &mut cuts {
        c.sort();
        c.dedup();
    }
    let mut vertices: Vec<Vertex> = leftover.iter().cloned().map(Vertex::Point).collect();
    let mut eu_cells = Vec::new();
    let mut discrete_cells = Vec::new();
    for p in pieces {
        let parts = crate::arrange::split_cells(&p.cell.to_set(), &cuts[p.track]);
        for c in parts {
            match (&c, p.label) {
                (Cell::Point(x), _) => vertices.push(Vertex::Point(Point::new(p.track, x.clone()))),
                (_, PieceLabel::Euclidean) => eu_cells.push((p.track, c)),
                (_, PieceLabel::Discrete) => discrete_cells.push((p.track, c)),
                _ => return Err(Error::HalfOpenPiece(p.to_string())),
            }
        }
    }
    let mut graph = GluingGraph { vertices, edges: Vec::new() };
    let end_vertex = |graph: &mut GluingGraph, g: Anchor| -> Result<usize> {
        match owner(s, &g)? {
            Some(o) => graph.vertex_of(&o).ok_or_else(|| Error::Internal(format!("owner {o} of {g} is not a vertex"))),
            None => {
                graph.vertices.push(Vertex::Free(g));
                Ok(graph.vertices.len() - 1)
            }
        }
    };
    for (t, c) in eu_cells {
        let a = end_vertex(&mut graph, Anchor::new(t, c.lo(), Side::Right))?;
        let b = end_vertex(&mut graph, Anchor::new(t, c.hi(), Side::Left))?;
        let length = match (c.lo(), c.hi()) {
            (ExtRat::Fin(l), ExtRat::Fin(h)) => Some(h - l),
            _ => None,
        };
        graph.edges.push(Edge { track: t, cell: c, length, ends: [a, b] });
    }
    let mut hubs = Vec::new();
    let mut clopen = Vec::new();
    let mut todo = discrete_cells;
    while let Some((t, c)) = todo.pop() {
        let lo = owner(s, &Anchor::new(t, c.lo(), Side::Right))?;
        let hi = owner(s, &Anchor::new(t, c.hi(), Side::Left))?;
        match (lo, hi) {
            (Some(_), Some(_)) => {
                let m = cell_mid(&c);
                graph.vertices.push(Vertex::Point(Point::new(t, m.clone())));
                let me = ExtRat::Fin(m);
                todo.push((t, Cell::Open(c.lo(), me.clone())));
                todo.push((t, Cell::Open(me, c.hi())));
            }
            (Some(o), None) | (None, Some(o)) => {
                let end = if owner(s, &Anchor::new(t, c.lo(), Side::Right))?.is_some() { c.lo() } else { c.hi() };
                let a = end.finite().cloned().ok_or_else(|| Error::Unbounded(format!("{t}:{c}")))?;
                let vertex = graph.vertex_of(&o).ok_or_else(|| Error::Internal(format!("hub {o} is not a vertex")))?;
                hubs.push(Hub { track: t, cell: c, vertex, a });
            }
            (None, None) => clopen.push((t, c)),
        }
    }
    hubs.sort_by_key(|h| (h.track, h.cell.lo()));
    clopen.sort_by_key(|c| (c.0, c.1.lo()));
    let model = Model { graph, hubs, clopen };
    model.check_vertex_germs(s)?;
    Ok(model)
}

impl Model {
    /// Every germ of a vertex must be an edge end or a hub end.
    fn check_vertex_germs(&self, s: &Space) -> Result<()> {
        for (i, v) in self.graph.vertices.iter().enumerate() {
            let p = match v {
                Vertex::Point(p) => p,
                Vertex::Free(_) => continue,
            };
            for a in s.anchors_at(p.track, &p.pos) {
                let at_edge = self.graph.edges.iter().any(|e| {
                    let k = if a.side == Side::Right { 0 } else { 1 };
                    e.track == a.track && e.ends[k] == i && e.cell.accumulates(&a.value, a.side)
                });
                let at_hub = self.hubs.iter().any(|h| {
                    h.vertex == i && h.track == a.track && a.value.eq_rat(&h.a) && h.cell.accumulates(&a.value, a.side)
                });
                if !at_edge && !at_hub {
                    if !a.value.is_finite() {
                        return Err(Error::Unbounded(format!("{p} accumulates at {a}")));
                    }
                    return Err(Error::Internal(format!("germ {a} of {p} is not modelled")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Affineness {
    Affine(GluingGraph),
    NotAffine(Piece),
}

/// Decides whether the space is homeomorphic to a space with the euclidean
/// topology.
pub fn is_affine(s: &Space) -> Result<Affineness> {
    let dec = decompose_t2(s)?;
    if let Some(p) = dec.pieces.iter().find(|p| p.label != PieceLabel::Euclidean) {
        return Ok(Affineness::NotAffine(p.clone()));
    }
    Ok(Affineness::Affine(build_model(s, &dec.pieces, &dec.leftover)?.graph))
}

/// A definable metric: path length in the gluing graph, with discrete
/// intervals attached by their distance to the end they converge to, all
/// capped at 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricExpr {
    pub graph: GluingGraph,
    pub hubs: Vec<Hub>,
    pub clopen: Vec<(TrackId, Cell)>,
    dist: Vec<Vec<Option<Rat>>>,
}

impl fmt::Display for MetricExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "d(x,y) = 0 if x = y, else min(1, t(x) + path(x,y) + t(y))")?;
        write!(f, "{}", self.graph)?;
        for h in &self.hubs {
            writeln!(f, "hub {}:{} at v{} t(x) = |x - {}|", h.track, h.cell, h.vertex, fmt_rat(&h.a))?;
        }
        for (t, c) in &self.clopen {
            writeln!(f, "clopen {t}:{c} d = 1")?;
        }
        Ok(())
    }
}

fn floyd_warshall(g: &GluingGraph) -> Vec<Vec<Option<Rat>>> {
    let n = g.vertices.len();
    let mut d: Vec<Vec<Option<Rat>>> = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(Rat::zero());
    }
    let better = |cur: &Option<Rat>, new: &Rat| cur.as_ref().is_none_or(|c| new < c);
    for e in &g.edges {
        let len = e.length.clone().unwrap_or_else(Rat::one);
        let [a, b] = e.ends;
        if better(&d[a][b], &len) {
            d[a][b] = Some(len.clone());
            d[b][a] = Some(len);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(x), Some(y)) = (&d[i][k], &d[k][j]) {
                    let via = x + y;
                    if better(&d[i][j], &via) {
                        d[i][j] = Some(via);
                    }
                }
            }
        }
    }
    d
}

/// Builds a metric inducing the topology of a bounded Hausdorff space
/// without half-open intervals and with finitely many points accumulating
/// elsewhere than at themselves.
pub fn synthesize_metric(s: &Space) -> Result<MetricExpr> {
    if let Some(w) = s.hausdorff_witness() {
        return Err(Error::NotHausdorff(w.to_string()));
    }
    if let Some(t) = s.tracks().iter().position(|d| !d.is_bounded()) {
        return Err(Error::Unbounded(format!("track {t} = {}", s.domain(t))));
    }
    let dec = decompose_t2(s)?;
    if let Some(p) = dec.pieces.iter().find(|p| matches!(p.label, PieceLabel::RightHalfOpen | PieceLabel::LeftHalfOpen)) {
        return Err(Error::HalfOpenPiece(p.to_string()));
    }
    let model = build_model(s, &dec.pieces, &dec.leftover)?;
    let dist = floyd_warshall(&model.graph);
    Ok(MetricExpr { graph: model.graph, hubs: model.hubs, clopen: model.clopen, dist })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Loc {
    Vertex(usize),
    Edge(usize, Rat),
    Hub(usize, Rat),
    Clopen(usize),
}

impl MetricExpr {
    fn locate(&self, p: &Point) -> Option<Loc> {
        if let Some(i) = self.graph.vertex_of(p) {
            return Some(Loc::Vertex(i));
        }
        let inside = |t: TrackId, c: &Cell| t == p.track && c.contains(&p.pos);
        if let Some(i) = self.graph.edges.iter().position(|e| inside(e.track, &e.cell)) {
            return Some(Loc::Edge(i, p.pos.clone()));
        }
        if let Some(i) = self.hubs.iter().position(|h| inside(h.track, &h.cell)) {
            return Some(Loc::Hub(i, p.pos.clone()));
        }
        self.clopen.iter().position(|(t, c)| inside(*t, c)).map(Loc::Clopen)
    }

    fn exits(&self, l: &Loc) -> Vec<(usize, Rat)> {
        match l {
            Loc::Vertex(i) => vec![(*i, Rat::zero())],
            Loc::Edge(i, x) => {
                let e = &self.graph.edges[*i];
                let mut v = Vec::new();
                if let ExtRat::Fin(lo) = e.cell.lo() {
                    v.push((e.ends[0], x - lo));
                }
                if let ExtRat::Fin(hi) = e.cell.hi() {
                    v.push((e.ends[1], hi - x));
                }
                v
            }
            Loc::Hub(i, x) => {
                let h = &self.hubs[*i];
                vec![(h.vertex, (x - &h.a).abs())]
            }
            Loc::Clopen(_) => vec![],
        }
    }

    /// Distance between two distinct locations.
    fn apart(&self, p: &Loc, q: &Loc) -> Rat {
        let mut best: Option<Rat> = None;
        if let (Loc::Edge(i, x), Loc::Edge(j, y)) = (p, q) {
            if i == j {
                best = Some((x - y).abs());
            }
        }
        for (u, a) in self.exits(p) {
            for (w, b) in self.exits(q) {
                if let Some(d) = &self.dist[u][w] {
                    let c = &a + d + &b;
                    if best.as_ref().is_none_or(|x| &c < x) {
                        best = Some(c);
                    }
                }
            }
        }
        match best {
            Some(b) if b < Rat::one() => b,
            _ => Rat::one(),
        }
    }

    /// Limit of `d(y, q)` as `y` runs into the germ `g`.
    pub fn germ_distance(&self, g: &Anchor, q: &Point) -> Result<Rat> {
        let v = g.value.finite().ok_or_else(|| Error::Unbounded(g.to_string()))?;
        let near = |t: TrackId, c: &Cell| t == g.track && c.accumulates(&g.value, g.side);
        let lp = if let Some(i) = self.graph.edges.iter().position(|e| near(e.track, &e.cell)) {
            Loc::Edge(i, v.clone())
        } else if let Some(i) = self.hubs.iter().position(|h| near(h.track, &h.cell)) {
            Loc::Hub(i, v.clone())
        } else if let Some(i) = self.clopen.iter().position(|(t, c)| near(*t, c)) {
            Loc::Clopen(i)
        } else {
            return Err(Error::PointOutsideDomain(g.to_string()));
        };
        let lq = self.locate(q).ok_or_else(|| Error::PointOutsideDomain(q.to_string()))?;
        if let (Loc::Hub(i, _), Loc::Hub(j, y)) = (&lp, &lq) {
            if i == j {
                let a = &self.hubs[*i].a;
                return Ok(((v - a).abs() + (y - a).abs()).min(Rat::one()));
            }
        }
        Ok(self.apart(&lp, &lq))
    }
}

pub fn eval_metric(m: &MetricExpr, p: &Point, q: &Point) -> Result<Rat> {
    let lp = m.locate(p).ok_or_else(|| Error::PointOutsideDomain(p.to_string()))?;
    let lq = m.locate(q).ok_or_else(|| Error::PointOutsideDomain(q.to_string()))?;
    if p == q {
        return Ok(Rat::zero());
    }
    Ok(m.apart(&lp, &lq))
}

/// Whether a curve converges in the metric exactly to its topological
/// limits, checked against every vertex and the curve's euclidean limit.
pub fn agrees_along(m: &MetricExpr, s: &Space, g: &Curve) -> Result<bool> {
    let (v, side) = e_limit_side(g);
    let side = match side {
        Some(side) => side,
        None => return Ok(true),
    };
    let tau = tau_limit(s, g);
    let mut cands: Vec<Point> = tau.points().unwrap_or_default();
    cands.extend(m.graph.vertices.iter().filter_map(|x| match x {
        Vertex::Point(p) => Some(p.clone()),
        Vertex::Free(_) => None,
    }));
    if let ExtRat::Fin(x) = &v {
        let p = Point::new(g.track, x.clone());
        if s.contains(&p) {
            cands.push(p);
        }
    }
    let germ = Anchor::new(g.track, v, side);
    for q in cands {
        if m.germ_distance(&germ, &q)?.is_zero() != tau.contains(&q) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct TwoToOne {
    pub near: NearCompactification,
    pub target: Space,
    /// From the near-compactification onto the target.
    pub map: PiecewiseMap,
    /// From the original space onto the target.
    pub from_source: PiecewiseMap,
    pub graph: GluingGraph,
    pub max_fiber: usize,
}

/// Collapses the levels of the two-level near-compactification of a
/// separable regular Hausdorff space onto a euclidean space.
pub fn two_to_one_euclidean(s: &Space) -> Result<TwoToOne> {
    require_t3(s)?;
    if !s.is_definably_separable() {
        return Err(Error::NotSeparable);
    }
    let near = near_compactify(s)?;
    let x = &near.space;
    let mut tracks = Vec::new();
    let mut flags = Vec::new();
    let mut level_to: Vec<Option<TrackId>> = vec![None; x.num_tracks()];
    let mut pieces = Vec::new();
    let mut max_fiber = 1;
    for b in &near.blocks {
        if b.levels > 2 {
            return Err(Error::Internal(format!("block {} has {} levels", b.cell, b.levels)));
        }
        max_fiber = max_fiber.max(b.levels);
        let t = tracks.len();
        tracks.push(b.cell.to_set());
        for side in Side::BOTH {
            flags.push(SelfFlag { track: t, region: b.cell.to_set(), side });
        }
        for (l, slot) in level_to.iter_mut().enumerate().skip(b.first).take(b.levels) {
            *slot = Some(t);
            pieces.push(AssignPiece { src: l, cell: b.cell.clone(), map: AffineMap::identity(), dst: t });
        }
    }
    let mut branches = Vec::new();
    if let Some(st) = near.singleton_track {
        let yt = tracks.len();
        tracks.push(x.domain(st).clone());
        level_to[st] = Some(yt);
        for c in x.domain(st).cells() {
            pieces.push(AssignPiece { src: st, cell: c, map: AffineMap::identity(), dst: yt });
        }
        for br in x.branches().iter().filter(|b| b.from == st) {
            let to = level_to[br.to].ok_or_else(|| Error::Internal(format!("branch {br} leaves the blocks")))?;
            let nb = Branch::new(yt, br.domain.clone(), br.map.clone(), to, br.side);
            if !branches.contains(&nb) {
                branches.push(nb);
            }
        }
    }
    let target = Space::new(&format!("{}-collapsed", s.name()), tracks, flags, branches)?;
    let map = PiecewiseMap::new(pieces);
    if let Some(w) = continuity_check(x, &target, &map, None)? {
        return Err(Error::Internal(format!("collapse is discontinuous along {w}")));
    }
    let from_source = PiecewiseMap::new(
        near.h
            .pieces
            .iter()
            .map(|a| AssignPiece { dst: level_to[a.dst].unwrap(), ..a.clone() })
            .collect(),
    );
    let graph = match is_affine(&target)? {
        Affineness::Affine(g) => g,
        Affineness::NotAffine(p) => return Err(Error::Internal(format!("collapsed space has the piece {p}"))),
    };
    Ok(TwoToOne { near, target, map, from_source, graph, max_fiber })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::zoo;
    use crate::exactline::{int, rat};

    #[test]
    fn euclidean_graph_is_one_edge() {
        match is_affine(&zoo::euclidean()).unwrap() {
            Affineness::Affine(g) => assert_eq!(g.edges.len(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn witnesses() {
        match is_affine(&zoo::split()).unwrap() {
            Affineness::NotAffine(p) => assert_eq!((p.track, p.label), (0, PieceLabel::LeftHalfOpen)),
            other => panic!("{other:?}"),
        }
        match is_affine(&zoo::alex(2)).unwrap() {
            Affineness::NotAffine(p) => assert_eq!((p.track, p.label), (1, PieceLabel::Discrete)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hub_metric_values() {
        let m = synthesize_metric(&zoo::a8_onepoint()).unwrap();
        let p = |x| Point::new(0, x);
        assert_eq!(eval_metric(&m, &p(rat(1, 2)), &p(rat(1, 3))).unwrap(), rat(5, 6));
        assert_eq!(eval_metric(&m, &p(rat(1, 2)), &p(int(0))).unwrap(), rat(1, 2));
    }

    #[test]
    fn euclidean_metric_is_distance() {
        let m = synthesize_metric(&zoo::euclidean()).unwrap();
        let d = eval_metric(&m, &Point::new(0, rat(1, 4)), &Point::new(0, rat(3, 4))).unwrap();
        assert_eq!(d, rat(1, 2));
    }

    #[test]
    fn sorgenfrey_has_no_metric() {
        assert!(matches!(synthesize_metric(&zoo::sorgenfrey()), Err(Error::HalfOpenPiece(_))));
    }
}
