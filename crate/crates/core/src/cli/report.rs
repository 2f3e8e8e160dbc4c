//! Deterministic text reports.

use std::fmt::Write;
use std::io::IsTerminal;

use crate::affinemetric::{is_affine, synthesize_metric, two_to_one_euclidean, Affineness, MetricExpr, TwoToOne};
use crate::classify::{
    compactness_witness, connected_components, decompose_t2, fdi_witness, is_near_compact, regularity_witness,
    weight_class, Components, Decomposition,
};
use crate::construct::{decompose_t3, Compactification, EmbeddingReport};
use crate::curves::{e_limit_side, tau_limit, Curve};
use crate::error::Result;
use crate::space::{Space, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Color {
    Always,
    Never,
}

impl Color {
    /// Reads `OMT_COLOR` (`auto`, `always` or `never`; default `auto`).
    pub fn from_env() -> Color {
        match std::env::var("OMT_COLOR").as_deref() {
            Ok("always") => Color::Always,
            Ok("never") => Color::Never,
            _ if std::io::stdout().is_terminal() => Color::Always,
            _ => Color::Never,
        }
    }

    pub fn verdict(self, b: bool) -> String {
        match (self, b) {
            (Color::Never, _) => b.to_string(),
            (Color::Always, true) => "\x1b[32mtrue\x1b[0m".into(),
            (Color::Always, false) => "\x1b[31mfalse\x1b[0m".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Predicate {
    Hausdorff,
    Regular,
    Compact,
    NearCompact,
    Separable,
    Fdi,
    Affine,
}

impl Predicate {
    pub const ALL: [Predicate; 7] = [
        Predicate::Hausdorff,
        Predicate::Regular,
        Predicate::Compact,
        Predicate::NearCompact,
        Predicate::Separable,
        Predicate::Fdi,
        Predicate::Affine,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Predicate::Hausdorff => "hausdorff",
            Predicate::Regular => "regular",
            Predicate::Compact => "compact",
            Predicate::NearCompact => "near-compact",
            Predicate::Separable => "separable",
            Predicate::Fdi => "fdi",
            Predicate::Affine => "affine",
        }
    }

    /// The verdict, with a witness line when it is false.
    pub fn eval(self, s: &Space) -> (bool, Option<String>) {
        let not_t2 = || s.hausdorff_witness().map(|w| format!("not hausdorff: {w}"));
        match self {
            Predicate::Hausdorff => match s.hausdorff_witness() {
                Some(w) => (false, Some(w.to_string())),
                None => (true, None),
            },
            Predicate::Regular => match regularity_witness(s) {
                Ok(None) => (true, None),
                Ok(Some(w)) => (false, Some(w.to_string())),
                Err(e) => (false, Some(e.to_string())),
            },
            Predicate::Compact => match compactness_witness(s) {
                None => (true, None),
                Some(g) => (false, Some(format!("divergent curve {g}"))),
            },
            Predicate::NearCompact => {
                let b = is_near_compact(s);
                (b, (!b).then(|| "infinitely many germs are free".to_string()))
            }
            Predicate::Separable => {
                let b = s.is_definably_separable();
                (b, (!b).then(|| format!("isolated points {}", s.isolated_points())))
            }
            Predicate::Fdi => match fdi_witness(s) {
                None => (true, None),
                Some(y) => (false, Some(format!("{y} has infinite frontier"))),
            },
            Predicate::Affine => match is_affine(s) {
                Ok(Affineness::Affine(_)) => (true, None),
                Ok(Affineness::NotAffine(p)) => (false, Some(format!("piece {p}"))),
                Err(_) => (false, not_t2()),
            },
        }
    }
}

pub fn check(s: &Space, preds: &[Predicate], weight: bool, color: Color) -> (String, Vec<bool>) {
    let mut out = String::new();
    let mut verdicts = Vec::new();
    for &p in preds {
        let (b, w) = p.eval(s);
        writeln!(out, "{}: {}", p.key(), color.verdict(b)).unwrap();
        if let Some(w) = w {
            writeln!(out, "  witness: {w}").unwrap();
        }
        verdicts.push(b);
    }
    if weight {
        match weight_class(s) {
            Ok(w) => writeln!(out, "weight: {w}").unwrap(),
            Err(e) => writeln!(out, "weight: unavailable ({e})").unwrap(),
        }
    }
    (out, verdicts)
}

pub fn violations(vs: &[Violation]) -> String {
    let mut out = format!("valid: false\nviolations: {}\n", vs.len());
    for v in vs {
        writeln!(out, "  {v}").unwrap();
    }
    out
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            w[i] = w[i].max(c.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let s: Vec<String> = cells.iter().enumerate().map(|(i, c)| format!("{c:<width$}", width = w[i])).collect();
        format!("{}\n", s.join("  ").trim_end())
    };
    let mut out = line(header.to_vec());
    for r in rows {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}

pub fn decomposition(s: &Space, d: &Decomposition) -> String {
    let rows: Vec<Vec<String>> =
        d.pieces.iter().map(|p| vec![p.track.to_string(), p.cell.to_string(), p.label.to_string()]).collect();
    let mut out = format!("space: {}\n", s.name());
    out += &table(&["track", "cell", "label"], &rows);
    let left: Vec<String> = d.leftover.iter().map(|p| p.to_string()).collect();
    writeln!(out, "points: {}", if left.is_empty() { "none".into() } else { left.join(" ") }).unwrap();
    out
}

pub fn decompose(s: &Space) -> Result<String> {
    Ok(decomposition(s, &decompose_t2(s)?))
}

pub fn embedding_report(s: &Space, r: &EmbeddingReport) -> String {
    let rows: Vec<Vec<String>> = r
        .partition
        .pieces
        .iter()
        .map(|p| {
            vec![
                p.track.to_string(),
                p.cell.to_string(),
                p.flags.to_string(),
                p.pattern.to_string(),
                p.case.to_string(),
                p.n().to_string(),
                p.topology().to_string(),
                p.levels().to_string(),
            ]
        })
        .collect();
    let mut out = format!("space: {}\n", s.name());
    out += &table(&["track", "cell", "label", "pattern", "case", "n", "target", "levels"], &rows);
    let sg: Vec<String> = r.partition.singletons.iter().map(|p| p.to_string()).collect();
    writeln!(out, "singletons: {}", if sg.is_empty() { "none".into() } else { sg.join(" ") }).unwrap();
    writeln!(out, "Y: {}", r.y).unwrap();
    writeln!(out, "Z: {}", r.z).unwrap();
    writeln!(out, "rest: {}", r.leftover(s)).unwrap();
    writeln!(out, "lex levels: {}", r.n_y).unwrap();
    writeln!(out, "alexandrov levels: {}", r.n_z).unwrap();
    out += "h_Y:\n";
    for a in &r.h_y.pieces {
        writeln!(out, "  {a}").unwrap();
    }
    out += "h_Z:\n";
    for a in &r.h_z.pieces {
        writeln!(out, "  {a}").unwrap();
    }
    out
}

pub fn decompose_t3_report(s: &Space) -> Result<String> {
    Ok(embedding_report(s, &decompose_t3(s)?))
}

pub fn compactification(s: &Space, c: &Compactification) -> String {
    let added: Vec<String> = c.added_points(s).iter().map(|p| p.to_string()).collect();
    let mut out = format!("space: {}\ntracks: {}\n", s.name(), c.space.num_tracks());
    writeln!(out, "added points: {}", if added.is_empty() { "none".into() } else { added.join(" ") }).unwrap();
    out += "embedding:\n";
    for a in &c.h.pieces {
        writeln!(out, "  {a}").unwrap();
    }
    out
}

pub fn metric(s: &Space) -> Result<(String, MetricExpr)> {
    let m = synthesize_metric(s)?;
    Ok((format!("space: {}\n{m}", s.name()), m))
}

pub fn limit(s: &Space, g: &Curve) -> String {
    let (v, side) = e_limit_side(g);
    let side = side.map_or("stationary".to_string(), |x| x.to_string());
    let tau = tau_limit(s, g);
    let lim = if tau.is_empty() { "none (divergent)".to_string() } else { tau.to_string() };
    format!("curve: {g}\ne-limit: {v} {side}\nlimit: {lim}\n")
}

pub fn components(s: &Space) -> Result<String> {
    let Components { glued, singletons } = connected_components(s)?;
    let mut out = format!("space: {}\ncomponents: {}\n", s.name(), glued.len());
    for c in &glued {
        writeln!(out, "  {c}").unwrap();
    }
    writeln!(out, "singleton components: {}", if singletons.is_empty() { "none".into() } else { singletons.to_string() })
        .unwrap();
    Ok(out)
}

pub fn two_to_one(s: &Space) -> Result<String> {
    let TwoToOne { target, from_source, graph, max_fiber, .. } = two_to_one_euclidean(s)?;
    let mut out = format!("space: {}\ntarget tracks: {}\nmax fiber: {max_fiber}\nmap:\n", s.name(), target.num_tracks());
    for a in &from_source.pieces {
        writeln!(out, "  {a}").unwrap();
    }
    out += "graph:\n";
    out += &graph.to_string();
    Ok(out)
}
