//! Seeded random spaces, valid by construction: disjoint unions of
//! transported example spaces, plus points attached to free germs with
//! their anchor sets closed under the branches.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cli::zoo;
use crate::defset::DefSubset;
use crate::exactline::{int, AffineMap, Cell, ExtRat, Rat, Side};
use crate::space::{Anchor, Branch, BranchMap, SelfFlag, Space};

/// Which family to draw from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Anything, including unbounded, non-Hausdorff and non-regular spaces.
    General,
    /// Built from regular pieces (attachments may still break regularity).
    Regular,
    /// Every germ is owned, so the result is definably compact.
    Compact,
    /// Contains a Hausdorff non-regular piece.
    NonRegular,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fuzzed {
    pub space: Space,
    /// False for mutants that lost a required anchor.
    pub valid: bool,
}

fn dom(s: &str) -> DefSubset {
    s.parse().expect("literal domain")
}

fn euclidean_on(d: DefSubset) -> Space {
    let flags = Side::BOTH
        .into_iter()
        .map(|side| SelfFlag { track: 0, region: d.side_approach(side).intersect(&d), side })
        .collect();
    Space::new("e", vec![d], flags, vec![]).expect("euclidean piece")
}

fn pick_gadget(rng: &mut ChaCha8Rng, family: Family) -> Space {
    let bounded = ["(0,1)", "[0,1]", "[0,1)", "(0,1]"];
    let e = |rng: &mut ChaCha8Rng| euclidean_on(dom(bounded.choose(rng).unwrap()));
    match family {
        Family::Compact => match rng.gen_range(0..4) {
            0 => euclidean_on(dom("[0,1]")),
            1 => e(rng),
            2 => zoo::nsplit(rng.gen_range(1..=4)),
            _ => zoo::alex(rng.gen_range(1..=3)),
        },
        Family::Regular => match rng.gen_range(0..6) {
            0 => e(rng),
            1 => zoo::discrete(),
            2 => zoo::sorgenfrey(),
            3 => zoo::upperlimit(),
            4 => zoo::nsplit(rng.gen_range(1..=4)),
            _ => zoo::alex(rng.gen_range(1..=3)),
        },
        Family::NonRegular => zoo::a9_nonregular(),
        Family::General => match rng.gen_range(0..10) {
            0 => euclidean_on(dom(["(0,+inf)", "(-inf,+inf)", "(-inf,0]"].choose(rng).unwrap())),
            1 => zoo::a9_nonregular(),
            2 => zoo::a8(),
            3 if rng.gen_ratio(1, 3) => zoo::a7_const_inf(),
            _ => pick_gadget(rng, Family::Regular),
        },
    }
}

fn random_map(rng: &mut ChaCha8Rng) -> AffineMap {
    let slopes = [int(1), int(1), int(2), Rat::new(1.into(), 2.into()), int(3)];
    let mut a = slopes.choose(rng).unwrap().clone();
    if rng.gen_ratio(1, 3) {
        a = -a;
    }
    AffineMap::new(a, Rat::new(rng.gen_range(-4..5).into(), rng.gen_range(1..3).into()))
}

/// Transports every track of `s` by its own random map.
fn scramble(rng: &mut ChaCha8Rng, s: &Space) -> Space {
    let maps: Vec<AffineMap> = (0..s.num_tracks()).map(|_| random_map(rng)).collect();
    let perm: Vec<usize> = (0..s.num_tracks()).collect();
    s.push_forward(&maps, &perm).expect("affine transport of a valid space")
}

fn disjoint_union(a: &Space, b: &Space) -> Space {
    let k = a.num_tracks();
    let mut tracks = a.tracks().to_vec();
    tracks.extend(b.tracks().iter().cloned());
    let mut flags = a.flags().to_vec();
    flags.extend(b.flags().iter().map(|f| SelfFlag { track: f.track + k, ..f.clone() }));
    let mut branches = a.branches().to_vec();
    branches.extend(b.branches().iter().map(|br| Branch { from: br.from + k, to: br.to + k, ..br.clone() }));
    Space::new(a.name(), tracks, flags, branches).expect("disjoint union")
}

/// Anchors forced on any point that has the anchors in `start`.
pub fn close_anchors(s: &Space, start: &[Anchor]) -> BTreeSet<Anchor> {
    let mut out: BTreeSet<Anchor> = start.iter().cloned().collect();
    let mut todo: Vec<Anchor> = start.to_vec();
    while let Some(a) = todo.pop() {
        for b in s.branches().iter().filter(|b| b.from == a.track) {
            if !b.domain.accumulates(&a.value, a.side) {
                continue;
            }
            let (l, mode) = b.map.limit(&a.value, a.side);
            let r = Anchor::new(b.to, l, mode.side().unwrap_or(b.side));
            if out.insert(r.clone()) {
                todo.push(r);
            }
        }
    }
    out
}

fn branch_to(from: usize, at: &Rat, a: &Anchor) -> Branch {
    let map = match &a.value {
        ExtRat::Fin(v) => BranchMap::Affine(AffineMap::constant(v.clone())),
        ExtRat::NegInf => BranchMap::NegInf,
        ExtRat::PosInf => BranchMap::PosInf,
    };
    Branch::new(from, Cell::Point(at.clone()), map, a.track, a.side)
}

/// Free germs of `s`, with a few sampled values where a whole interval of
/// germs is free. The flag reports whether every free germ was listed.
fn free_germs(rng: &mut ChaCha8Rng, s: &Space) -> (Vec<Anchor>, bool) {
    let mut out = Vec::new();
    let mut complete = true;
    for t in 0..s.num_tracks() {
        for side in Side::BOTH {
            let (vals, inf) = s.uncovered(t, side);
            if inf {
                out.push(Anchor::new(t, if side == Side::Right { ExtRat::NegInf } else { ExtRat::PosInf }, side));
            }
            match vals.finite_points() {
                Some(ps) => out.extend(ps.into_iter().map(|p| Anchor::new(t, ExtRat::Fin(p), side))),
                None => {
                    complete = false;
                    for c in vals.cells() {
                        if c.is_point() || rng.gen_ratio(1, 2) {
                            out.push(Anchor::new(t, ExtRat::Fin(c.sample()), side));
                        }
                    }
                }
            }
        }
    }
    (out, complete)
}

/// A point of `s` away from any anchor of the germs in `avoid`.
fn existing_point(rng: &mut ChaCha8Rng, s: &Space, avoid: &BTreeSet<Anchor>) -> Option<(usize, Rat)> {
    let cells = s.sample_cells(None);
    let (t, c) = cells.choose(rng)?;
    let x = c.sample();
    let clash = avoid.iter().any(|a| a.track == *t && a.value.eq_rat(&x));
    (!clash).then_some((*t, x))
}

/// Attaches each group of germs to a fresh point (or an existing one).
fn attach(rng: &mut ChaCha8Rng, s: &Space, groups: Vec<Vec<Anchor>>) -> Space {
    let mut tracks = s.tracks().to_vec();
    let mut branches = s.branches().to_vec();
    for g in groups {
        let anchors = close_anchors(s, &g);
        let (from, at) = match rng.gen_ratio(1, 4).then(|| existing_point(rng, s, &anchors)).flatten() {
            Some(p) => p,
            None => {
                tracks.push(DefSubset::point(int(0)));
                (tracks.len() - 1, int(0))
            }
        };
        branches.extend(anchors.iter().map(|a| branch_to(from, &at, a)));
    }
    Space::new(s.name(), tracks, s.flags().to_vec(), branches).expect("attached points")
}

fn partition<T>(rng: &mut ChaCha8Rng, mut items: Vec<T>) -> Vec<Vec<T>> {
    items.shuffle(rng);
    let mut groups: Vec<Vec<T>> = Vec::new();
    for it in items {
        if groups.is_empty() || rng.gen_ratio(1, 2) {
            groups.push(vec![it]);
        } else {
            let i = rng.gen_range(0..groups.len());
            groups[i].push(it);
        }
    }
    groups
}

/// One random valid space of the given family.
pub fn random_space(rng: &mut ChaCha8Rng, family: Family, name: &str) -> Space {
    loop {
        let n = rng.gen_range(1..=3);
        let g = pick_gadget(rng, family);
        let mut s = scramble(rng, &g);
        for i in 1..n {
            let sub = if i == 1 && family == Family::NonRegular { Family::Regular } else { family };
            let g = pick_gadget(rng, sub);
            s = disjoint_union(&s, &scramble(rng, &g));
        }
        let (germs, complete) = free_germs(rng, &s);
        let s = if family == Family::Compact {
            if !complete {
                continue;
            }
            let groups = partition(rng, germs);
            attach(rng, &s, groups)
        } else {
            let k = rng.gen_range(0..=2).min(germs.len());
            let chosen: Vec<Anchor> = germs.choose_multiple(rng, k).cloned().collect();
            let groups = partition(rng, chosen);
            attach(rng, &s, groups)
        };
        return s.with_name(name);
    }
}

/// Drops one flag or branch whose anchor some other point needs.
pub fn mutate(rng: &mut ChaCha8Rng, s: &Space) -> Option<Space> {
    let nf = s.flags().len();
    let mut order: Vec<usize> = (0..nf + s.branches().len()).collect();
    order.shuffle(rng);
    for i in order {
        let mut flags = s.flags().to_vec();
        let mut branches = s.branches().to_vec();
        if i < nf {
            flags.remove(i);
        } else {
            branches.remove(i - nf);
        }
        let m = Space::new(&format!("{}-mutant", s.name()), s.tracks().to_vec(), flags, branches).ok()?;
        if m.validate_topology().is_err() {
            return Some(m);
        }
    }
    None
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` valid general spaces, each followed by a mutant when one exists.
pub fn fuzz_generate(seed: u64, count: usize) -> Vec<Fuzzed> {
    let mut rng = rng_for(seed);
    let mut out = Vec::new();
    for i in 0..count {
        let s = random_space(&mut rng, Family::General, &format!("fuzz-{seed}-{i}"));
        let m = mutate(&mut rng, &s);
        out.push(Fuzzed { space: s, valid: true });
        if let Some(m) = m {
            out.push(Fuzzed { space: m, valid: false });
        }
    }
    out
}

/// `count` valid spaces of one family.
pub fn family(seed: u64, family: Family, count: usize) -> Vec<Space> {
    let mut rng = rng_for(seed);
    (0..count).map(|i| random_space(&mut rng, family, &format!("{family:?}-{seed}-{i}").to_lowercase())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_spaces_validate() {
        for f in fuzz_generate(1, 30) {
            assert_eq!(f.space.validate_topology().is_ok(), f.valid, "{}", f.space.name());
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(fuzz_generate(1, 5), fuzz_generate(1, 5));
    }

    #[test]
    fn compact_family_is_compact() {
        for s in family(3, Family::Compact, 20) {
            assert!(s.validate_topology().is_ok());
            assert!(crate::classify::is_definably_compact(&s), "{}", s.name());
        }
    }
}
