//! The line-oriented `.space` text format.

use std::fmt::Write;

use crate::defset::DefSubset;
use crate::error::{Error, Result};
use crate::exactline::Side;
use crate::space::{Branch, BranchMap, SelfFlag, Space, TrackId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    Space,
    Track,
    Flag,
    Branch,
}

#[derive(Default)]
struct Block {
    line: usize,
    keys: Vec<(String, String, usize)>,
}

impl Block {
    fn take(&mut self, key: &str) -> Result<(String, usize)> {
        let pos = self.keys.iter().position(|(k, _, _)| k == key).ok_or_else(|| Error::Parse {
            line: self.line,
            msg: format!("missing key {key:?}"),
        })?;
        let (_, v, l) = self.keys.remove(pos);
        Ok((v, l))
    }

    fn finish(&self) -> Result<()> {
        match self.keys.first() {
            Some((k, _, l)) => Err(Error::Parse { line: *l, msg: format!("unexpected key {k:?}") }),
            None => Ok(()),
        }
    }
}

fn at<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { msg, .. } => Error::Parse { line, msg },
        other => Error::Parse { line, msg: other.to_string() },
    })
}

fn parse_track_id(v: &str, line: usize) -> Result<TrackId> {
    v.trim().parse().map_err(|_| Error::Parse { line, msg: format!("bad track id {v:?}") })
}

/// Parses a space without checking the germ rule.
pub fn parse_unvalidated(text: &str) -> Result<Space> {
    let mut blocks: Vec<(Section, Block)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        if let Some(h) = l.strip_prefix('[').and_then(|h| h.strip_suffix(']')) {
            let sec = match h.trim() {
                "space" => Section::Space,
                "track" => Section::Track,
                "flag" => Section::Flag,
                "branch" => Section::Branch,
                other => return Err(Error::Parse { line, msg: format!("unknown section [{other}]") }),
            };
            blocks.push((sec, Block { line, keys: Vec::new() }));
            continue;
        }
        let (k, v) = l.split_once('=').ok_or_else(|| Error::Parse { line, msg: "expected key = value".into() })?;
        let block = match blocks.last_mut() {
            Some((_, b)) => b,
            None => return Err(Error::Parse { line, msg: "key outside any section".into() }),
        };
        let k = k.trim().to_string();
        if block.keys.iter().any(|(kk, _, _)| *kk == k) {
            return Err(Error::Parse { line, msg: format!("duplicate key {k:?}") });
        }
        block.keys.push((k, v.trim().to_string(), line));
    }

    let mut name = String::new();
    let mut tracks: Vec<Option<DefSubset>> = Vec::new();
    let mut flags = Vec::new();
    let mut branches = Vec::new();
    let mut seen_space = false;
    for (sec, mut b) in blocks {
        match sec {
            Section::Space => {
                if seen_space {
                    return Err(Error::Parse { line: b.line, msg: "second [space] section".into() });
                }
                seen_space = true;
                name = b.take("name")?.0;
            }
            Section::Track => {
                let (id, l) = b.take("id")?;
                let id = parse_track_id(&id, l)?;
                let (dom, l) = b.take("domain")?;
                let dom: DefSubset = at(l, dom.parse())?;
                if tracks.len() <= id {
                    tracks.resize(id + 1, None);
                }
                if tracks[id].is_some() {
                    return Err(Error::Parse { line: b.line, msg: format!("track {id} declared twice") });
                }
                tracks[id] = Some(dom);
            }
            Section::Flag => {
                let (t, l) = b.take("track")?;
                let track = parse_track_id(&t, l)?;
                let (r, l) = b.take("region")?;
                let region: DefSubset = at(l, r.parse())?;
                let (s, l) = b.take("side")?;
                let side: Side = at(l, s.parse())?;
                flags.push(SelfFlag { track, region, side });
            }
            Section::Branch => {
                let (f, l) = b.take("from")?;
                let from = parse_track_id(&f, l)?;
                let (c, l) = b.take("cells")?;
                let cells: DefSubset = at(l, c.parse())?;
                let (m, l) = b.take("map")?;
                let map: BranchMap = at(l, m.parse())?;
                let (t, l) = b.take("to")?;
                let to = parse_track_id(&t, l)?;
                let (s, l) = b.take("side")?;
                let side: Side = at(l, s.parse())?;
                for cell in cells.cells() {
                    branches.push(Branch::new(from, cell, map.clone(), to, side));
                }
            }
        }
        b.finish()?;
    }
    if !seen_space {
        return Err(Error::Parse { line: 1, msg: "missing [space] section".into() });
    }
    let tracks = tracks
        .into_iter()
        .enumerate()
        .map(|(i, t)| t.ok_or_else(|| Error::Parse { line: 0, msg: format!("track {i} is not declared") }))
        .collect::<Result<Vec<_>>>()?;
    Space::new(&name, tracks, flags, branches)
}

/// Parses and validates a space file.
pub fn parse_space_file(text: &str) -> Result<Space> {
    let s = parse_unvalidated(text)?;
    s.validate_topology().map_err(Error::Validation)?;
    Ok(s)
}

/// Canonical text form; branches sharing source, map, target and side are
/// written as one section.
pub fn serialize(s: &Space) -> String {
    let mut out = String::new();
    writeln!(out, "[space]\nname = {}", s.name()).unwrap();
    for (i, d) in s.tracks().iter().enumerate() {
        writeln!(out, "\n[track]\nid = {i}\ndomain = {d}").unwrap();
    }
    for f in s.flags() {
        writeln!(out, "\n[flag]\ntrack = {}\nregion = {}\nside = {}", f.track, f.region, f.side).unwrap();
    }
    let mut groups: Vec<(TrackId, BranchMap, TrackId, Side, DefSubset)> = Vec::new();
    for b in s.branches() {
        let c = b.domain.to_set();
        match groups.iter_mut().find(|g| g.0 == b.from && g.1 == b.map && g.2 == b.to && g.3 == b.side) {
            Some(g) => g.4 = g.4.union(&c),
            None => groups.push((b.from, b.map.clone(), b.to, b.side, c)),
        }
    }
    groups.sort_by(|a, b| (a.0, a.2, a.3, &a.1, &a.4).cmp(&(b.0, b.2, b.3, &b.1, &b.4)));
    for (from, map, to, side, cells) in groups {
        writeln!(out, "\n[branch]\nfrom = {from}\ncells = {cells}\nmap = {map}\nto = {to}\nside = {side}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::zoo;

    #[test]
    fn zoo_round_trips() {
        for s in [zoo::euclidean(), zoo::split(), zoo::alex(3), zoo::a7_const_inf(), zoo::a8(), zoo::a9_nonregular()] {
            let text = serialize(&s);
            let back = parse_space_file(&text).unwrap();
            assert_eq!(back, s);
            assert_eq!(serialize(&back), text);
        }
    }

    #[test]
    fn sorgenfrey_text() {
        let text = "[space]\nname = sorgenfrey\n\n[track]\nid = 0\ndomain = (0,1)\n\n[flag]\ntrack = 0\nregion = (0,1)\nside = right\n";
        assert_eq!(parse_space_file(text).unwrap(), zoo::sorgenfrey());
        assert_eq!(serialize(&zoo::sorgenfrey()), text);
    }

    #[test]
    fn fixed_point_is_rejected_with_cell() {
        let text = "[space]\nname = f\n[track]\nid = 0\ndomain = (-1,3)\n[branch]\nfrom = 0\ncells = (0,2)\nmap = 2*x-1\nto = 0\nside = right\n";
        let e = parse_space_file(text).unwrap_err();
        assert!(e.to_string().contains("(0,2)"), "{e}");
    }

    #[test]
    fn flag_outside_side_approach() {
        let text = "[space]\nname = f\n[track]\nid = 0\ndomain = [0,1]\n[flag]\ntrack = 0\nregion = {1}\nside = right\n";
        assert!(matches!(parse_space_file(text), Err(Error::Malformed(_))));
    }

    #[test]
    fn parse_errors_carry_lines() {
        let text = "[space]\nname = f\n[track]\nid = 0\ndomain = (1,0)\n";
        match parse_space_file(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("{other:?}"),
        }
    }
}
