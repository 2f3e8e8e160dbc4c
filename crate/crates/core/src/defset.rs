//! Finite unions of points and intervals of the line, kept in canonical form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exactline::{fmt_rat, half, int, Cell, ExtRat, Rat, Side};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Component {
    pub lo: ExtRat,
    pub hi: ExtRat,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Component {
    pub fn new(lo: ExtRat, hi: ExtRat, lo_closed: bool, hi_closed: bool) -> Component {
        Component { lo, hi, lo_closed, hi_closed }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let above = match self.lo.cmp_rat(x) {
            Ordering::Less => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Greater => false,
        };
        let below = match self.hi.cmp_rat(x) {
            Ordering::Greater => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Less => false,
        };
        above && below
    }
}

/// Canonical: sorted, pairwise disjoint, no two components mergeable,
/// infinite endpoints open.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DefSubset {
    comps: Vec<Component>,
}

impl DefSubset {
    pub fn empty() -> DefSubset {
        DefSubset { comps: vec![] }
    }

    pub fn all() -> DefSubset {
        DefSubset { comps: vec![Component::new(ExtRat::NegInf, ExtRat::PosInf, false, false)] }
    }

    pub fn point(p: Rat) -> DefSubset {
        let e = ExtRat::Fin(p);
        DefSubset { comps: vec![Component::new(e.clone(), e, true, true)] }
    }

    pub fn points(ps: impl IntoIterator<Item = Rat>) -> DefSubset {
        DefSubset::union_all(ps.into_iter().map(DefSubset::point))
    }

    /// Panics on `lo > hi`; use [`normalize`] for fallible construction.
    pub fn interval(lo: ExtRat, hi: ExtRat, lo_closed: bool, hi_closed: bool) -> DefSubset {
        normalize(vec![Component::new(lo, hi, lo_closed, hi_closed)]).expect("interval bounds out of order")
    }

    pub fn open(lo: ExtRat, hi: ExtRat) -> DefSubset {
        DefSubset::interval(lo, hi, false, false)
    }

    pub fn closed(lo: Rat, hi: Rat) -> DefSubset {
        DefSubset::interval(ExtRat::Fin(lo), ExtRat::Fin(hi), true, true)
    }

    pub fn from_cell(c: &Cell) -> DefSubset {
        match c {
            Cell::Point(p) => DefSubset::point(p.clone()),
            Cell::Open(lo, hi) => DefSubset::open(lo.clone(), hi.clone()),
        }
    }

    pub fn components(&self) -> &[Component] {
        &self.comps
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(Component::is_point)
    }

    /// The elements when the set is finite.
    pub fn finite_points(&self) -> Option<Vec<Rat>> {
        if !self.is_finite() {
            return None;
        }
        Some(self.comps.iter().map(|c| c.lo.finite().unwrap().clone()).collect())
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.comps.iter().any(|c| c.contains(x))
    }

    pub fn contains_cell(&self, c: &Cell) -> bool {
        DefSubset::from_cell(c).is_subset(self)
    }

    pub fn endpoints(&self) -> Vec<Rat> {
        let mut v: Vec<Rat> = Vec::new();
        for c in &self.comps {
            for e in [&c.lo, &c.hi] {
                if let ExtRat::Fin(r) = e {
                    if v.last() != Some(r) {
                        v.push(r.clone());
                    }
                }
            }
        }
        v
    }

    pub fn inf(&self) -> Option<ExtRat> {
        self.comps.first().map(|c| c.lo.clone())
    }

    pub fn sup(&self) -> Option<ExtRat> {
        self.comps.last().map(|c| c.hi.clone())
    }

    pub fn is_bounded(&self) -> bool {
        self.inf().is_none_or(|e| e.is_finite()) && self.sup().is_none_or(|e| e.is_finite())
    }

    pub fn union(&self, other: &DefSubset) -> DefSubset {
        let mut v = self.comps.clone();
        v.extend(other.comps.iter().cloned());
        normalize(v).expect("canonical components")
    }

    pub fn union_all(sets: impl IntoIterator<Item = DefSubset>) -> DefSubset {
        let v: Vec<Component> = sets.into_iter().flat_map(|s| s.comps).collect();
        normalize(v).expect("canonical components")
    }

    pub fn intersect(&self, other: &DefSubset) -> DefSubset {
        if self.is_empty() || other.is_empty() {
            return DefSubset::empty();
        }
        let breaks = merge_breaks(&self.endpoints(), &other.endpoints());
        from_predicate(&breaks, |x| self.contains(x) && other.contains(x))
    }

    pub fn difference(&self, other: &DefSubset) -> DefSubset {
        if self.is_empty() || other.is_empty() {
            return self.clone();
        }
        let breaks = merge_breaks(&self.endpoints(), &other.endpoints());
        from_predicate(&breaks, |x| self.contains(x) && !other.contains(x))
    }

    pub fn complement(&self) -> DefSubset {
        DefSubset::all().difference(self)
    }

    pub fn is_subset(&self, other: &DefSubset) -> bool {
        self.difference(other).is_empty()
    }

    /// Points v with (v, v+δ) ⊆ S (Right) or (v−δ, v) ⊆ S (Left), finite v only.
    pub fn side_approach(&self, side: Side) -> DefSubset {
        let v = self
            .comps
            .iter()
            .filter(|c| !c.is_point())
            .map(|c| match side {
                Side::Right => Component::new(c.lo.clone(), c.hi.clone(), c.lo.is_finite(), false),
                Side::Left => Component::new(c.lo.clone(), c.hi.clone(), false, c.hi.is_finite()),
            })
            .collect();
        normalize(v).expect("canonical components")
    }

    /// Whether S accumulates at `v` from `side`; handles ±∞.
    pub fn accumulates(&self, v: &ExtRat, side: Side) -> bool {
        self.comps.iter().filter(|c| !c.is_point()).any(|c| match side {
            Side::Right => &c.lo <= v && v < &c.hi,
            Side::Left => &c.lo < v && v <= &c.hi,
        })
    }

    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for c in &self.comps {
            if c.is_point() {
                out.push(Cell::Point(c.lo.finite().unwrap().clone()));
                continue;
            }
            if c.lo_closed {
                out.push(Cell::Point(c.lo.finite().unwrap().clone()));
            }
            out.push(Cell::Open(c.lo.clone(), c.hi.clone()));
            if c.hi_closed {
                out.push(Cell::Point(c.hi.finite().unwrap().clone()));
            }
        }
        out
    }

    /// Euclidean closure in the line (infinite ends stay open).
    pub fn closure_e(&self) -> DefSubset {
        let v = self
            .comps
            .iter()
            .map(|c| Component::new(c.lo.clone(), c.hi.clone(), c.lo.is_finite(), c.hi.is_finite()))
            .collect();
        normalize(v).expect("canonical components")
    }

    pub fn interior_e(&self) -> DefSubset {
        let v = self
            .comps
            .iter()
            .filter(|c| !c.is_point())
            .map(|c| Component::new(c.lo.clone(), c.hi.clone(), false, false))
            .collect();
        normalize(v).expect("canonical components")
    }

    /// Image under an affine map.
    pub fn image(&self, f: &crate::exactline::AffineMap) -> DefSubset {
        if self.is_empty() {
            return DefSubset::empty();
        }
        if f.is_constant() {
            return DefSubset::point(f.offset.clone());
        }
        let dec = f.is_decreasing();
        let v = self
            .comps
            .iter()
            .map(|c| {
                let (a, b) = (f.apply_ext(&c.lo), f.apply_ext(&c.hi));
                if dec {
                    Component::new(b, a, c.hi_closed, c.lo_closed)
                } else {
                    Component::new(a, b, c.lo_closed, c.hi_closed)
                }
            })
            .collect();
        normalize(v).expect("canonical components")
    }

    /// {x : f(x) ∈ S}.
    pub fn preimage(&self, f: &crate::exactline::AffineMap) -> DefSubset {
        match f.inverse() {
            Some(g) => self.image(&g),
            None if self.contains(&f.offset) => DefSubset::all(),
            None => DefSubset::empty(),
        }
    }

    /// A point of the set, preferring interval interiors.
    pub fn sample(&self) -> Option<Rat> {
        let cells = self.cells();
        cells.iter().find(|c| !c.is_point()).or(cells.first()).map(Cell::sample)
    }
}

fn merge_breaks(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut v: Vec<Rat> = a.iter().chain(b.iter()).cloned().collect();
    v.sort();
    v.dedup();
    v
}

/// Representatives of the open gaps determined by sorted distinct breakpoints.
pub fn gap_samples(breaks: &[Rat]) -> Vec<Rat> {
    if breaks.is_empty() {
        return vec![Rat::from_integer(0.into())];
    }
    let mut v = Vec::with_capacity(breaks.len() + 1);
    v.push(&breaks[0] - int(1));
    for w in breaks.windows(2) {
        v.push(half(&w[0], &w[1]));
    }
    v.push(breaks.last().unwrap() + int(1));
    v
}

/// Assembles the set of points satisfying `pred`, which must be constant
/// on every open gap between consecutive `breaks` (sorted, distinct).
pub fn from_predicate(breaks: &[Rat], pred: impl Fn(&Rat) -> bool) -> DefSubset {
    let gaps = gap_samples(breaks);
    let mut raw = Vec::new();
    let ext = |i: isize| -> ExtRat {
        if i < 0 {
            ExtRat::NegInf
        } else if i as usize >= breaks.len() {
            ExtRat::PosInf
        } else {
            ExtRat::Fin(breaks[i as usize].clone())
        }
    };
    for (i, g) in gaps.iter().enumerate() {
        if pred(g) {
            raw.push(Component::new(ext(i as isize - 1), ext(i as isize), false, false));
        }
    }
    for b in breaks {
        if pred(b) {
            let e = ExtRat::Fin(b.clone());
            raw.push(Component::new(e.clone(), e, true, true));
        }
    }
    normalize(raw).expect("canonical components")
}

/// Sorts, merges and deduplicates raw components.
pub fn normalize(raw: Vec<Component>) -> Result<DefSubset> {
    let mut v = Vec::with_capacity(raw.len());
    for mut c in raw {
        if c.lo > c.hi {
            return Err(Error::MalformedComponent(format!("lower end {} above upper end {}", c.lo, c.hi)));
        }
        if !c.lo.is_finite() {
            c.lo_closed = false;
        }
        if !c.hi.is_finite() {
            c.hi_closed = false;
        }
        if c.lo == c.hi && !(c.lo_closed && c.hi_closed) {
            continue;
        }
        v.push(c);
    }
    v.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
    let mut out: Vec<Component> = Vec::with_capacity(v.len());
    for c in v {
        if let Some(last) = out.last_mut() {
            let touches = c.lo < last.hi || (c.lo == last.hi && (last.hi_closed || c.lo_closed));
            if touches {
                match c.hi.cmp(&last.hi) {
                    Ordering::Greater => {
                        last.hi = c.hi;
                        last.hi_closed = c.hi_closed;
                    }
                    Ordering::Equal => last.hi_closed |= c.hi_closed,
                    Ordering::Less => {}
                }
                continue;
            }
        }
        out.push(c);
    }
    Ok(DefSubset { comps: out })
}

pub fn combine(kind: Combine, a: &DefSubset, b: &DefSubset) -> DefSubset {
    match kind {
        Combine::Union => a.union(b),
        Combine::Intersect => a.intersect(b),
        Combine::Difference => a.difference(b),
        Combine::ComplementIn => b.difference(a),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combine {
    Union,
    Intersect,
    Difference,
    /// `complement_in(A, B)` = B ∖ A.
    ComplementIn,
}

pub fn side_approach(side: Side, s: &DefSubset) -> DefSubset {
    s.side_approach(side)
}

pub fn cells(s: &DefSubset) -> Vec<Cell> {
    s.cells()
}

impl fmt::Display for DefSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return f.write_str("empty");
        }
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            if c.is_point() {
                write!(f, "{{{}}}", fmt_rat(c.lo.finite().unwrap()))?;
            } else {
                let l = if c.lo_closed { '[' } else { '(' };
                let r = if c.hi_closed { ']' } else { ')' };
                write!(f, "{l}{},{}{r}", c.lo, c.hi)?;
            }
        }
        Ok(())
    }
}

impl FromStr for DefSubset {
    type Err = Error;

    fn from_str(s: &str) -> Result<DefSubset> {
        let bad = |m: &str| Error::Parse { line: 0, msg: format!("{m} in set {s:?}") };
        let s = s.trim();
        if s == "empty" || s == "{}" {
            return Ok(DefSubset::empty());
        }
        let mut raw = Vec::new();
        for part in s.split('|') {
            let p = part.trim();
            if let Some(inner) = p.strip_prefix('{').and_then(|q| q.strip_suffix('}')) {
                for x in inner.split(',') {
                    let e: ExtRat = x.parse()?;
                    if !e.is_finite() {
                        return Err(bad("infinite point"));
                    }
                    raw.push(Component::new(e.clone(), e, true, true));
                }
                continue;
            }
            let lc = match p.chars().next() {
                Some('(') => false,
                Some('[') => true,
                _ => return Err(bad("expected ( or [")),
            };
            let hc = match p.chars().last() {
                Some(')') => false,
                Some(']') => true,
                _ => return Err(bad("expected ) or ]")),
            };
            let body = &p[1..p.len() - 1];
            let (a, b) = body.split_once(',').ok_or_else(|| bad("expected a comma"))?;
            let (lo, hi): (ExtRat, ExtRat) = (a.parse()?, b.parse()?);
            if (lc && !lo.is_finite()) || (hc && !hi.is_finite()) {
                return Err(bad("closed infinite end"));
            }
            if lo >= hi && !(lo == hi && lc && hc) {
                return Err(bad("empty or reversed interval"));
            }
            raw.push(Component::new(lo, hi, lc, hc));
        }
        normalize(raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactline::rat;

    fn s(t: &str) -> DefSubset {
        t.parse().unwrap()
    }

    #[test]
    fn normalize_examples() {
        let merged = normalize(vec![
            Component::new(ExtRat::int(0), ExtRat::int(1), false, false),
            Component::new(ExtRat::int(1), ExtRat::int(1), true, true),
        ])
        .unwrap();
        assert_eq!(merged, s("(0,1]"));
        assert_eq!(s("(0,1) | (1,2)").components().len(), 2);
        assert_eq!(s("(0,2) | (1,3)"), s("(0,3)"));
        assert!(normalize(vec![Component::new(ExtRat::int(2), ExtRat::int(1), false, false)]).is_err());
    }

    #[test]
    fn combine_examples() {
        assert_eq!(combine(Combine::Intersect, &s("(0,1)"), &s("(1/2,2)")), s("(1/2,1)"));
        assert_eq!(combine(Combine::Difference, &s("(0,1)"), &s("{1/2}")), s("(0,1/2) | (1/2,1)"));
        assert_eq!(combine(Combine::ComplementIn, &s("(0,1)"), &s("[0,1]")), s("{0} | {1}"));
    }

    #[test]
    fn side_approach_examples() {
        assert_eq!(s("(0,1)").side_approach(Side::Right), s("[0,1)"));
        assert_eq!(s("(0,1)").side_approach(Side::Left), s("(0,1]"));
        assert!(s("{1/2}").side_approach(Side::Right).is_empty());
        assert!(s("(-inf,0)").accumulates(&ExtRat::NegInf, Side::Right));
        assert!(!s("(-inf,0)").accumulates(&ExtRat::PosInf, Side::Left));
    }

    #[test]
    fn cells_examples() {
        assert_eq!(s("[0,1)").cells(), vec![Cell::Point(rat(0, 1)), Cell::unit()]);
        assert_eq!(s("(0,1) | {2}").cells(), vec![Cell::unit(), Cell::Point(int(2))]);
        assert_eq!(s("(0,1] | [1,2)").cells(), vec![Cell::Open(ExtRat::int(0), ExtRat::int(2))]);
    }

    #[test]
    fn text_round_trip() {
        for t in ["empty", "(0,1)", "[0,1/2) | {3} | (4,+inf)", "(-inf,-1] | [1,+inf)"] {
            assert_eq!(s(t).to_string(), t);
        }
    }

    #[test]
    fn image_and_preimage() {
        let f = crate::exactline::AffineMap::new(int(-2), int(1));
        assert_eq!(s("[0,1)").image(&f), s("(-1,1]"));
        assert_eq!(s("(-1,1]").preimage(&f), s("[0,1)"));
        let c = crate::exactline::AffineMap::constant(int(5));
        assert_eq!(s("(0,1)").image(&c), s("{5}"));
        assert_eq!(s("(4,6)").preimage(&c), DefSubset::all());
    }
}
