//! Extended rationals, affine maps, line cells and piecewise-affine maps.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::defset::DefSubset;
use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn half(a: &Rat, b: &Rat) -> Rat {
    (a + b) / int(2)
}

/// Formats `p` or `p/q`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.strip_prefix('+').unwrap_or(n).parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() || d.is_negative() {
        return None;
    }
    Some(Rat::new(n, d))
}

/// A rational or one of the two infinities. The derived order puts
/// `NegInf` below every rational and `PosInf` above.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtRat {
    NegInf,
    Fin(Rat),
    PosInf,
}

impl ExtRat {
    pub fn fin(n: i64, d: i64) -> ExtRat {
        ExtRat::Fin(rat(n, d))
    }

    pub fn int(n: i64) -> ExtRat {
        ExtRat::Fin(int(n))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRat::Fin(_))
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtRat::Fin(r) => Some(r),
            _ => None,
        }
    }

    pub fn try_add(&self, other: &ExtRat) -> Result<ExtRat> {
        match (self, other) {
            (ExtRat::Fin(a), ExtRat::Fin(b)) => Ok(ExtRat::Fin(a + b)),
            _ => Err(Error::InfiniteArithmetic),
        }
    }

    pub fn try_sub(&self, other: &ExtRat) -> Result<ExtRat> {
        match (self, other) {
            (ExtRat::Fin(a), ExtRat::Fin(b)) => Ok(ExtRat::Fin(a - b)),
            _ => Err(Error::InfiniteArithmetic),
        }
    }

    pub fn negate(&self) -> ExtRat {
        match self {
            ExtRat::NegInf => ExtRat::PosInf,
            ExtRat::PosInf => ExtRat::NegInf,
            ExtRat::Fin(r) => ExtRat::Fin(-r),
        }
    }

    pub fn eq_rat(&self, r: &Rat) -> bool {
        matches!(self, ExtRat::Fin(x) if x == r)
    }

    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        match self {
            ExtRat::NegInf => Ordering::Less,
            ExtRat::PosInf => Ordering::Greater,
            ExtRat::Fin(x) => x.cmp(r),
        }
    }
}

impl From<Rat> for ExtRat {
    fn from(r: Rat) -> Self {
        ExtRat::Fin(r)
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::NegInf => f.write_str("-inf"),
            ExtRat::PosInf => f.write_str("+inf"),
            ExtRat::Fin(r) => f.write_str(&fmt_rat(r)),
        }
    }
}

impl FromStr for ExtRat {
    type Err = Error;

    fn from_str(s: &str) -> Result<ExtRat> {
        match s.trim() {
            "-inf" => Ok(ExtRat::NegInf),
            "+inf" | "inf" => Ok(ExtRat::PosInf),
            t => parse_rat(t)
                .map(ExtRat::Fin)
                .ok_or_else(|| Error::Parse { line: 0, msg: format!("bad rational {t:?}") }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Right,
    Left,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Right => Side::Left,
            Side::Left => Side::Right,
        }
    }

    pub const BOTH: [Side; 2] = [Side::Right, Side::Left];
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Right => "right",
            Side::Left => "left",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Side> {
        match s.trim() {
            "right" | "Right" | "R" => Ok(Side::Right),
            "left" | "Left" | "L" => Ok(Side::Left),
            t => Err(Error::Parse { line: 0, msg: format!("bad side {t:?}") }),
        }
    }
}

/// How the values of a map approach a one-sided limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Approach {
    FromAbove,
    FromBelow,
    Stationary,
}

impl Approach {
    /// The anchor side matching this approach, if the values move.
    pub fn side(self) -> Option<Side> {
        match self {
            Approach::FromAbove => Some(Side::Right),
            Approach::FromBelow => Some(Side::Left),
            Approach::Stationary => None,
        }
    }
}

/// x ↦ slope·x + offset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineMap {
    pub slope: Rat,
    pub offset: Rat,
}

impl AffineMap {
    pub fn new(slope: Rat, offset: Rat) -> AffineMap {
        AffineMap { slope, offset }
    }

    pub fn identity() -> AffineMap {
        AffineMap::new(Rat::one(), Rat::zero())
    }

    pub fn constant(c: Rat) -> AffineMap {
        AffineMap::new(Rat::zero(), c)
    }

    pub fn shift(c: Rat) -> AffineMap {
        AffineMap::new(Rat::one(), c)
    }

    pub fn is_constant(&self) -> bool {
        self.slope.is_zero()
    }

    pub fn is_increasing(&self) -> bool {
        self.slope.is_positive()
    }

    pub fn is_decreasing(&self) -> bool {
        self.slope.is_negative()
    }

    pub fn is_identity(&self) -> bool {
        self.slope.is_one() && self.offset.is_zero()
    }

    pub fn apply(&self, x: &Rat) -> Rat {
        &self.slope * x + &self.offset
    }

    /// Extension to ±∞ by monotone limits.
    pub fn apply_ext(&self, x: &ExtRat) -> ExtRat {
        match x {
            ExtRat::Fin(r) => ExtRat::Fin(self.apply(r)),
            _ if self.is_constant() => ExtRat::Fin(self.offset.clone()),
            inf if self.is_increasing() => inf.clone(),
            inf => inf.negate(),
        }
    }

    pub fn inverse(&self) -> Option<AffineMap> {
        if self.is_constant() {
            return None;
        }
        let s = self.slope.recip();
        let o = -(&self.offset * &s);
        Some(AffineMap::new(s, o))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap::new(&self.slope * &inner.slope, &self.slope * &inner.offset + &self.offset)
    }

    /// Side on which images approach when the argument approaches from `side`.
    pub fn carry_side(&self, side: Side) -> Side {
        if self.is_decreasing() {
            side.flip()
        } else {
            side
        }
    }

    /// One-sided limit at `v` approached from `side`, with the approach mode.
    pub fn limit(&self, v: &ExtRat, side: Side) -> (ExtRat, Approach) {
        let value = self.apply_ext(v);
        let mode = if self.is_constant() {
            Approach::Stationary
        } else if self.carry_side(side) == Side::Right {
            Approach::FromAbove
        } else {
            Approach::FromBelow
        };
        (value, mode)
    }

    /// Points where `self` and `other` agree; `None` means everywhere.
    pub fn meet(&self, other: &AffineMap) -> Option<Vec<Rat>> {
        if self == other {
            return None;
        }
        if self.slope == other.slope {
            return Some(vec![]);
        }
        Some(vec![(&other.offset - &self.offset) / (&self.slope - &other.slope)])
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = &self.offset;
        if o.is_negative() {
            write!(f, "{}*x-{}", fmt_rat(&self.slope), fmt_rat(&-o))
        } else {
            write!(f, "{}*x+{}", fmt_rat(&self.slope), fmt_rat(o))
        }
    }
}

impl FromStr for AffineMap {
    type Err = Error;

    /// Accepts `a*x+b`, `a*x-b`, `a*x`, `x`, `-x+b` and a bare constant.
    fn from_str(s: &str) -> Result<AffineMap> {
        let bad = || Error::Parse { line: 0, msg: format!("bad affine map {s:?}") };
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t.replace('t', "x");
        let Some(xpos) = t.find('x') else {
            return parse_rat(&t).map(AffineMap::constant).ok_or_else(bad);
        };
        let head = &t[..xpos];
        let tail = &t[xpos + 1..];
        let slope = match head.strip_suffix('*').unwrap_or(head) {
            "" | "+" => Rat::one(),
            "-" => -Rat::one(),
            h => parse_rat(h).ok_or_else(bad)?,
        };
        let offset = if tail.is_empty() {
            Rat::zero()
        } else if let Some(rest) = tail.strip_prefix('+') {
            parse_rat(rest).ok_or_else(bad)?
        } else if let Some(rest) = tail.strip_prefix('-') {
            -parse_rat(rest.strip_prefix('+').unwrap_or(rest)).ok_or_else(bad)?
        } else {
            return Err(bad());
        };
        Ok(AffineMap::new(slope, offset))
    }
}

/// A point or an open interval of the line.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    Point(Rat),
    Open(ExtRat, ExtRat),
}

impl Cell {
    pub fn open(lo: ExtRat, hi: ExtRat) -> Result<Cell> {
        if lo >= hi {
            return Err(Error::MalformedComponent(format!("({lo},{hi})")));
        }
        Ok(Cell::Open(lo, hi))
    }

    pub fn unit() -> Cell {
        Cell::Open(ExtRat::int(0), ExtRat::int(1))
    }

    pub fn is_point(&self) -> bool {
        matches!(self, Cell::Point(_))
    }

    pub fn lo(&self) -> ExtRat {
        match self {
            Cell::Point(p) => ExtRat::Fin(p.clone()),
            Cell::Open(lo, _) => lo.clone(),
        }
    }

    pub fn hi(&self) -> ExtRat {
        match self {
            Cell::Point(p) => ExtRat::Fin(p.clone()),
            Cell::Open(_, hi) => hi.clone(),
        }
    }

    pub fn contains(&self, x: &Rat) -> bool {
        match self {
            Cell::Point(p) => p == x,
            Cell::Open(lo, hi) => lo.cmp_rat(x) == Ordering::Less && hi.cmp_rat(x) == Ordering::Greater,
        }
    }

    /// Whether points of the cell approach `v` from `side`.
    pub fn accumulates(&self, v: &ExtRat, side: Side) -> bool {
        match self {
            Cell::Point(_) => false,
            Cell::Open(lo, hi) => match side {
                Side::Right => lo <= v && v < hi,
                Side::Left => lo < v && v <= hi,
            },
        }
    }

    /// A canonical interior point.
    pub fn sample(&self) -> Rat {
        match self {
            Cell::Point(p) => p.clone(),
            Cell::Open(ExtRat::Fin(a), ExtRat::Fin(b)) => half(a, b),
            Cell::Open(ExtRat::Fin(a), _) => a + int(1),
            Cell::Open(_, ExtRat::Fin(b)) => b - int(1),
            Cell::Open(_, _) => Rat::zero(),
        }
    }

    pub fn to_set(&self) -> DefSubset {
        DefSubset::from_cell(self)
    }

    pub fn image(&self, f: &AffineMap) -> Cell {
        match self {
            Cell::Point(p) => Cell::Point(f.apply(p)),
            Cell::Open(..) if f.is_constant() => Cell::Point(f.offset.clone()),
            Cell::Open(lo, hi) => {
                let (a, b) = (f.apply_ext(lo), f.apply_ext(hi));
                if a < b {
                    Cell::Open(a, b)
                } else {
                    Cell::Open(b, a)
                }
            }
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Point(p) => write!(f, "{{{}}}", fmt_rat(p)),
            Cell::Open(lo, hi) => write!(f, "({lo},{hi})"),
        }
    }
}

/// Piecewise-affine partial map on disjoint cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PLMap {
    pieces: Vec<(Cell, AffineMap)>,
}

impl PLMap {
    pub fn new(mut pieces: Vec<(Cell, AffineMap)>) -> Result<PLMap> {
        pieces.sort_by(|a, b| a.0.lo().cmp(&b.0.lo()).then(a.0.is_point().cmp(&b.0.is_point()).reverse()));
        for w in pieces.windows(2) {
            if !w[0].0.to_set().intersect(&w[1].0.to_set()).is_empty() {
                return Err(Error::MalformedComponent(format!("overlapping cells {} and {}", w[0].0, w[1].0)));
            }
        }
        Ok(PLMap { pieces })
    }

    pub fn single(cell: Cell, map: AffineMap) -> PLMap {
        PLMap { pieces: vec![(cell, map)] }
    }

    pub fn pieces(&self) -> &[(Cell, AffineMap)] {
        &self.pieces
    }

    pub fn domain(&self) -> DefSubset {
        DefSubset::union_all(self.pieces.iter().map(|(c, _)| c.to_set()))
    }

    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        self.pieces.iter().find(|(c, _)| c.contains(x)).map(|(_, m)| m.apply(x))
    }

    /// One-sided limit at `v` through the domain; `None` if the domain does
    /// not accumulate there.
    pub fn limit(&self, v: &ExtRat, side: Side) -> Option<(ExtRat, Approach)> {
        self.pieces.iter().find(|(c, _)| c.accumulates(v, side)).map(|(_, m)| m.limit(v, side))
    }

    /// Solution set of f(x) = g(x) on the common domain.
    pub fn solve(&self, other: &PLMap) -> DefSubset {
        let mut out = DefSubset::empty();
        for (cf, mf) in &self.pieces {
            for (cg, mg) in &other.pieces {
                let common = cf.to_set().intersect(&cg.to_set());
                if common.is_empty() {
                    continue;
                }
                match mf.meet(mg) {
                    None => out = out.union(&common),
                    Some(xs) => {
                        for x in xs {
                            if common.contains(&x) {
                                out = out.union(&DefSubset::point(x));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

pub fn eval_pl(f: &PLMap, x: &Rat) -> Option<Rat> {
    f.eval(x)
}

pub fn limit_pl(f: &PLMap, v: &ExtRat, side: Side) -> Option<(ExtRat, Approach)> {
    f.limit(v, side)
}

pub fn solve_pl(f: &PLMap, g: &PLMap) -> DefSubset {
    f.solve(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id01() -> PLMap {
        PLMap::single(Cell::unit(), AffineMap::identity())
    }

    #[test]
    fn eval_examples() {
        assert_eq!(id01().eval(&rat(1, 2)), Some(rat(1, 2)));
        let c = PLMap::single(Cell::unit(), AffineMap::constant(int(3)));
        assert_eq!(c.eval(&rat(1, 4)), Some(int(3)));
        let f = PLMap::single(Cell::unit(), AffineMap::new(int(2), int(-1)));
        assert_eq!(f.eval(&rat(3, 4)), Some(rat(1, 2)));
        assert_eq!(f.eval(&int(2)), None);
    }

    #[test]
    fn limit_examples() {
        assert_eq!(id01().limit(&ExtRat::int(0), Side::Right), Some((ExtRat::int(0), Approach::FromAbove)));
        let g = PLMap::single(Cell::unit(), AffineMap::new(int(-1), int(1)));
        assert_eq!(g.limit(&ExtRat::int(0), Side::Right), Some((ExtRat::int(1), Approach::FromBelow)));
        let c = PLMap::single(Cell::unit(), AffineMap::constant(int(3)));
        assert_eq!(c.limit(&ExtRat::int(1), Side::Left), Some((ExtRat::int(3), Approach::Stationary)));
        assert_eq!(id01().limit(&ExtRat::int(1), Side::Right), None);
    }

    #[test]
    fn limit_at_infinity() {
        let f = PLMap::single(Cell::Open(ExtRat::NegInf, ExtRat::PosInf), AffineMap::new(int(-2), int(5)));
        assert_eq!(f.limit(&ExtRat::NegInf, Side::Right), Some((ExtRat::PosInf, Approach::FromBelow)));
    }

    #[test]
    fn solve_examples() {
        let half_c = PLMap::single(Cell::unit(), AffineMap::constant(rat(1, 2)));
        assert_eq!(id01().solve(&half_c), DefSubset::point(rat(1, 2)));
        assert_eq!(id01().solve(&id01()), Cell::unit().to_set());
        let f = PLMap::single(Cell::unit(), AffineMap::new(int(2), int(-1)));
        assert!(f.solve(&id01()).is_empty());
    }

    #[test]
    fn affine_text_round_trip() {
        for s in ["2*x-1", "-1*x+1", "0*x+3", "1/2*x+-3/4"] {
            let m: AffineMap = s.parse().unwrap();
            let back: AffineMap = m.to_string().parse().unwrap();
            assert_eq!(m, back);
        }
        assert_eq!("x".parse::<AffineMap>().unwrap(), AffineMap::identity());
        assert_eq!("-x+1".parse::<AffineMap>().unwrap(), AffineMap::new(int(-1), int(1)));
    }

    #[test]
    fn inverse_and_compose() {
        let f = AffineMap::new(rat(3, 2), rat(-1, 5));
        let g = f.inverse().unwrap();
        assert!(f.compose(&g).is_identity());
        assert!(AffineMap::constant(int(1)).inverse().is_none());
    }

    #[test]
    fn infinite_arithmetic_is_an_error() {
        assert_eq!(ExtRat::NegInf.try_add(&ExtRat::int(1)), Err(Error::InfiniteArithmetic));
        assert_eq!(ExtRat::int(2).try_sub(&ExtRat::int(1)), Ok(ExtRat::int(1)));
        assert!(ExtRat::NegInf < ExtRat::int(-1000) && ExtRat::int(1000) < ExtRat::PosInf);
    }
}
