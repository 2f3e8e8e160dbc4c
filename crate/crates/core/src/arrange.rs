//! Sample-cell decomposition of the tracks: a finite set of critical points
//! per track such that every predicate built from the given affine functions
//! and breakpoints is constant on each resulting cell.

use std::collections::BTreeSet;

use crate::defset::DefSubset;
use crate::exactline::{AffineMap, Cell, Rat};

/// Partial affine function from one track to another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Fun {
    pub src: usize,
    pub dom: DefSubset,
    pub map: AffineMap,
    pub cod: usize,
}

impl Fun {
    /// `outer ∘ self`, or `None` if the composite has empty domain.
    pub fn then(&self, outer: &Fun) -> Option<Fun> {
        if self.cod != outer.src {
            return None;
        }
        let dom = self.dom.intersect(&outer.dom.preimage(&self.map));
        if dom.is_empty() {
            return None;
        }
        Some(Fun { src: self.src, dom, map: outer.map.compose(&self.map), cod: outer.cod })
    }
}

/// Merges functions with the same source, map and codomain.
pub(crate) fn dedup_funs(funs: Vec<Fun>) -> Vec<Fun> {
    let mut out: Vec<Fun> = Vec::new();
    for f in funs {
        if let Some(g) = out.iter_mut().find(|g| g.src == f.src && g.cod == f.cod && g.map == f.map) {
            g.dom = g.dom.union(&f.dom);
        } else {
            out.push(f);
        }
    }
    out
}

/// All composites `h ∘ g` of pairs from `level1`, excluding identities.
pub(crate) fn with_composites(level1: Vec<Fun>) -> Vec<Fun> {
    let mut all = level1.clone();
    for g in &level1 {
        if g.map.is_identity() && g.src == g.cod {
            continue;
        }
        for h in &level1 {
            if h.map.is_identity() && h.src == h.cod {
                continue;
            }
            if let Some(c) = g.then(h) {
                all.push(c);
            }
        }
    }
    dedup_funs(all)
}

#[derive(Clone, Debug)]
pub(crate) struct Arrangement {
    domains: Vec<DefSubset>,
    funs: Vec<Fun>,
    crit: Vec<Vec<Rat>>,
}

impl Arrangement {
    pub fn new(domains: Vec<DefSubset>, funs: Vec<Fun>, breaks: Vec<Vec<Rat>>) -> Arrangement {
        let n = domains.len();
        let mut crit: Vec<BTreeSet<Rat>> = vec![BTreeSet::new(); n];
        for (t, b) in breaks.iter().enumerate() {
            crit[t].extend(b.iter().cloned());
        }
        for (t, d) in domains.iter().enumerate() {
            crit[t].extend(d.endpoints());
        }
        for f in &funs {
            crit[f.src].extend(f.dom.endpoints());
        }
        let base: Vec<Vec<Rat>> = crit.iter().map(|s| s.iter().cloned().collect()).collect();
        for f in &funs {
            if f.map.is_constant() {
                continue;
            }
            let hull = f.dom.closure_e();
            let inv = f.map.inverse().unwrap();
            for b in &base[f.cod] {
                let x = inv.apply(b);
                if hull.contains(&x) {
                    crit[f.src].insert(x);
                }
            }
        }
        for (t, crit_t) in crit.iter_mut().enumerate() {
            let here: Vec<&Fun> = funs.iter().filter(|f| f.src == t).collect();
            for (i, f) in here.iter().enumerate() {
                for g in &here[i + 1..] {
                    if f.cod != g.cod {
                        continue;
                    }
                    if let Some(xs) = f.map.meet(&g.map) {
                        for x in xs {
                            if f.dom.closure_e().contains(&x) && g.dom.closure_e().contains(&x) {
                                crit_t.insert(x);
                            }
                        }
                    }
                }
            }
        }
        let crit = crit.into_iter().map(|s| s.into_iter().collect()).collect();
        Arrangement { domains, funs, crit }
    }

    #[cfg(test)]
    pub fn critical(&self, t: usize) -> &[Rat] {
        &self.crit[t]
    }

    pub fn cells(&self) -> Vec<(usize, Cell)> {
        let mut out = Vec::new();
        for (t, d) in self.domains.iter().enumerate() {
            for c in split_cells(d, &self.crit[t]) {
                out.push((t, c));
            }
        }
        out
    }

    /// Cells after adding `extra` breakpoints (per track) and their
    /// preimages under every function.
    pub fn cells_with(&self, extra: &[Vec<Rat>]) -> Vec<(usize, Cell)> {
        if extra.iter().all(Vec::is_empty) {
            return self.cells();
        }
        let mut pts: Vec<BTreeSet<Rat>> = self.crit.iter().map(|v| v.iter().cloned().collect()).collect();
        for (t, e) in extra.iter().enumerate() {
            if t < pts.len() {
                pts[t].extend(e.iter().cloned());
            }
        }
        for f in &self.funs {
            if f.map.is_constant() || f.cod >= extra.len() {
                continue;
            }
            let hull = f.dom.closure_e();
            let inv = f.map.inverse().unwrap();
            for b in &extra[f.cod] {
                let x = inv.apply(b);
                if hull.contains(&x) {
                    pts[f.src].insert(x);
                }
            }
        }
        let mut out = Vec::new();
        for (t, d) in self.domains.iter().enumerate() {
            let v: Vec<Rat> = pts[t].iter().cloned().collect();
            for c in split_cells(d, &v) {
                out.push((t, c));
            }
        }
        out
    }
}

/// Splits the cells of `d` at the given sorted points.
pub(crate) fn split_cells(d: &DefSubset, pts: &[Rat]) -> Vec<Cell> {
    let mut out = Vec::new();
    for c in d.cells() {
        match &c {
            Cell::Point(_) => out.push(c),
            Cell::Open(lo, hi) => {
                let mut cur = lo.clone();
                for p in pts.iter().filter(|p| c.contains(p)) {
                    let e = crate::exactline::ExtRat::Fin(p.clone());
                    out.push(Cell::Open(cur, e.clone()));
                    out.push(Cell::Point(p.clone()));
                    cur = e;
                }
                out.push(Cell::Open(cur, hi.clone()));
            }
        }
    }
    out
}
