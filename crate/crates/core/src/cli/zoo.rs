//! Named example spaces.

use crate::defset::DefSubset;
use crate::error::{Error, Result};
use crate::exactline::{int, AffineMap, Cell, ExtRat, Side};
use crate::space::{Branch, BranchMap, SelfFlag, Space};

pub const NAMES: &[&str] = &[
    "euclidean",
    "discrete",
    "sorgenfrey",
    "upperlimit",
    "split",
    "nsplit(n)",
    "alex(n)",
    "a7-const-inf",
    "a8",
    "a8-onepoint",
    "a9-nonregular",
];

fn unit() -> DefSubset {
    DefSubset::open(ExtRat::int(0), ExtRat::int(1))
}

fn flag(track: usize, region: DefSubset, side: Side) -> SelfFlag {
    SelfFlag { track, region, side }
}

fn ident(from: usize, domain: DefSubset, to: usize, side: Side) -> Vec<Branch> {
    domain
        .cells()
        .into_iter()
        .map(|c| Branch::affine(from, c, AffineMap::identity(), to, side))
        .collect()
}

fn build(name: &str, tracks: Vec<DefSubset>, flags: Vec<SelfFlag>, branches: Vec<Branch>) -> Space {
    Space::new(name, tracks, flags, branches).expect("example spaces are well formed")
}

pub fn euclidean() -> Space {
    build("euclidean", vec![unit()], vec![flag(0, unit(), Side::Right), flag(0, unit(), Side::Left)], vec![])
}

pub fn discrete() -> Space {
    build("discrete", vec![unit()], vec![], vec![])
}

pub fn sorgenfrey() -> Space {
    build("sorgenfrey", vec![unit()], vec![flag(0, unit(), Side::Right)], vec![])
}

pub fn upperlimit() -> Space {
    build("upperlimit", vec![unit()], vec![flag(0, unit(), Side::Left)], vec![])
}

/// Lexicographic order on [0,1] x {0..n-1}.
pub fn nsplit(n: usize) -> Space {
    let name = if n == 2 { "split".to_string() } else { format!("nsplit({n})") };
    let d = DefSubset::closed(int(0), int(1));
    let lower = d.side_approach(Side::Left);
    let upper = d.side_approach(Side::Right);
    if n <= 1 {
        return build(&name, vec![d], vec![flag(0, upper, Side::Right), flag(0, lower, Side::Left)], vec![]);
    }
    let top = n - 1;
    let mut branches = Vec::new();
    for t in 1..n {
        branches.extend(ident(0, lower.clone(), t, Side::Left));
    }
    for t in 0..top {
        branches.extend(ident(top, upper.clone(), t, Side::Right));
    }
    let flags = vec![flag(0, lower, Side::Left), flag(top, upper, Side::Right)];
    build(&name, vec![d; n], flags, branches)
}

pub fn split() -> Space {
    nsplit(2)
}

/// Alexandrov n-line: one euclidean level, every other level isolated
/// points that converge to the euclidean one.
pub fn alex(n: usize) -> Space {
    let mut branches = Vec::new();
    for t in 1..n.max(1) {
        for s in Side::BOTH {
            branches.extend(ident(0, unit(), t, s));
        }
    }
    let flags = vec![flag(0, unit(), Side::Right), flag(0, unit(), Side::Left)];
    build(&format!("alex({n})"), vec![unit(); n.max(1)], flags, branches)
}

/// The rationals with the euclidean germs plus a shared germ at -inf.
pub fn a7_const_inf() -> Space {
    let q = DefSubset::all();
    let flags = vec![flag(0, q.clone(), Side::Right), flag(0, q.clone(), Side::Left)];
    let b = Branch::new(0, Cell::Open(ExtRat::NegInf, ExtRat::PosInf), BranchMap::NegInf, 0, Side::Right);
    build("a7-const-inf", vec![q], flags, vec![b])
}

/// [0,1) with the euclidean topology away from 0, plus an extra point 2
/// converging to 0 from the right alongside 0 itself.
pub fn a8() -> Space {
    let d: DefSubset = "[0,1)".parse().unwrap();
    let flags = vec![flag(0, d.clone(), Side::Right), flag(0, unit(), Side::Left)];
    let b = Branch::affine(1, Cell::Point(int(2)), AffineMap::constant(int(0)), 0, Side::Right);
    build("a8", vec![d, DefSubset::point(int(2))], flags, vec![b])
}

/// {0} together with a discrete (0,1) converging to 0.
pub fn a8_onepoint() -> Space {
    let d: DefSubset = "[0,1)".parse().unwrap();
    build("a8-onepoint", vec![d], vec![flag(0, DefSubset::point(int(0)), Side::Right)], vec![])
}

/// Hausdorff, separable and not regular.
pub fn a9_nonregular() -> Space {
    let flags = vec![flag(1, unit(), Side::Left)];
    build("a9-nonregular", vec![unit(), unit()], flags, ident(0, unit(), 1, Side::Right))
}

fn parse_arg(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.strip_suffix(')')?.trim().parse().ok()
}

pub fn example(name: &str) -> Result<Space> {
    let n = name.trim();
    let s = match n {
        "euclidean" | "e1" => euclidean(),
        "discrete" | "disc" => discrete(),
        "sorgenfrey" | "sorg" => sorgenfrey(),
        "upperlimit" | "upper-limit" => upperlimit(),
        "split" => split(),
        "a7-const-inf" | "a7" => a7_const_inf(),
        "a8" => a8(),
        "a8-onepoint" => a8_onepoint(),
        "a9-nonregular" | "a9" => a9_nonregular(),
        _ => {
            if let Some(k) = parse_arg(n, "nsplit(").filter(|k| *k >= 1) {
                nsplit(k)
            } else if let Some(k) = parse_arg(n, "alex(").filter(|k| *k >= 1) {
                alex(k)
            } else {
                return Err(Error::UnknownExample(name.to_string()));
            }
        }
    };
    Ok(s)
}
