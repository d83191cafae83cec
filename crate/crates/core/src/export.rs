//! Text, JSON and DOT renderings of block tables and complex skeletons.

use std::fmt::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{ComplexSkeleton, EdgeKind, KostantOracle, SkeletonKind};
use crate::error::Result;
use crate::klv::KLTable;
use crate::mobius::support_strata_idx;
use crate::parabolic::SingularBlock;
use crate::weyl::WeylGroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Dot,
}

/// One longest representative and its Kostant flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KostantEntry {
    pub w: Vec<usize>,
    pub kostant: bool,
}

/// Kostant flags of the longest representatives of one block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockReport {
    pub cartan: String,
    pub rank: usize,
    pub singular: Vec<usize>,
    pub results: Vec<KostantEntry>,
}

impl BlockReport {
    /// Decides every longest representative of the block, in parallel on the
    /// ambient rayon pool.
    pub fn compute(table: &KLTable, block: &SingularBlock) -> Result<Self> {
        let g = block.group();
        let oracle = KostantOracle::new(table, block)?;
        let results = block
            .max_rep_indices()
            .par_iter()
            .map(|&w| KostantEntry {
                w: g.word_of(w),
                kostant: oracle.is_kostant_idx(w),
            })
            .collect();
        Ok(BlockReport {
            cartan: g.cartan().family().letter().to_string(),
            rank: g.rank(),
            singular: block.singular().to_vec(),
            results,
        })
    }

    pub fn non_kostant(&self) -> impl Iterator<Item = &[usize]> {
        self.results.iter().filter(|e| !e.kostant).map(|e| e.w.as_slice())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub word: Vec<usize>,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub from: Vec<usize>,
    pub to: Vec<usize>,
    pub kind: EdgeKind,
    pub sign: Option<i8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonJson {
    pub cartan: String,
    pub rank: usize,
    pub singular: Vec<usize>,
    pub base: Vec<usize>,
    pub kind: SkeletonKind,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
}

impl SkeletonJson {
    pub fn from_skeleton(sk: &ComplexSkeleton) -> Self {
        let g = sk.group();
        let cartan = g.cartan();
        SkeletonJson {
            cartan: cartan.family().letter().to_string(),
            rank: cartan.rank(),
            singular: sk.block().singular().to_vec(),
            base: g.word_of(sk.base_idx()),
            kind: sk.kind(),
            vertices: sk
                .vertices()
                .iter()
                .map(|&(v, degree)| VertexJson {
                    word: g.word_of(v),
                    degree,
                })
                .collect(),
            edges: sk
                .edges()
                .iter()
                .map(|e| EdgeJson {
                    from: g.word_of(e.from),
                    to: g.word_of(e.to),
                    kind: e.kind,
                    sign: e.sign,
                })
                .collect(),
        }
    }
}

/// Concatenated digits for rank below 10, comma-separated otherwise; `e` for
/// the identity.
pub fn format_word(g: &WeylGroup, word: &[usize]) -> String {
    if word.is_empty() {
        return "e".to_string();
    }
    let sep = if g.rank() >= 10 { "," } else { "" };
    word.iter().map(usize::to_string).collect::<Vec<_>>().join(sep)
}

pub fn format_singular(singular: &[usize]) -> String {
    if singular.is_empty() {
        "∅".to_string()
    } else {
        let inner: Vec<String> = singular.iter().map(usize::to_string).collect();
        format!("{{{}}}", inner.join(","))
    }
}

/// Table rows `S | (w), (w), …` listing the non-Kostant representatives, or
/// a JSON array of the reports.
pub fn emit_table(g: &WeylGroup, reports: &[BlockReport], format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(to_json(&reports)),
        _ => {
            let mut out = String::new();
            for r in reports {
                let words: Vec<String> = r.non_kostant().map(|w| format!("({})", format_word(g, w))).collect();
                let sep = if words.is_empty() { "" } else { " " };
                writeln!(out, "{} |{sep}{}", format_singular(&r.singular), words.join(", ")).unwrap();
            }
            Ok(out)
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialise");
    s.push('\n');
    s
}

/// DOT digraph of a skeleton. Arrows point from the longer to the shorter
/// element; equalities are undirected double lines. Outside regular
/// skeletons, longest representatives are bold and members of the support
/// `X_w` get a double ring.
pub fn emit_dot(sk: &ComplexSkeleton) -> String {
    let g = sk.group();
    let b = sk.block();
    let marked = sk.kind() != SkeletonKind::Regular;
    let support: Vec<usize> = if marked && b.is_max_rep_idx(sk.base_idx()) {
        support_strata_idx(b, sk.base_idx()).into_iter().flatten().collect()
    } else {
        Vec::new()
    };
    let mut out = String::from("digraph bgg {\n  node [shape=plaintext];\n");
    for &(v, _) in sk.vertices() {
        let mut attrs = vec![format!("label=\"{}\"", format_word(g, &g.word_of(v)))];
        if marked && b.is_max_rep_idx(v) {
            attrs.push("style=bold".into());
        }
        if support.contains(&v) {
            attrs.push("shape=ellipse".into());
            attrs.push("peripheries=2".into());
        }
        writeln!(out, "  n{v} [{}];", attrs.join(", ")).unwrap();
    }
    for e in sk.edges() {
        let mut attrs = Vec::new();
        if e.kind == EdgeKind::Equality {
            attrs.push("dir=none".to_string());
            attrs.push("color=\"black:black\"".to_string());
        }
        if let Some(s) = e.sign {
            attrs.push(format!("label=\"{}\"", if s > 0 { "+" } else { "-" }));
        }
        let attrs = if attrs.is_empty() {
            String::new()
        } else {
            format!(" [{}]", attrs.join(", "))
        };
        writeln!(out, "  n{} -> n{}{attrs};", e.from, e.to).unwrap();
    }
    out.push_str("}\n");
    out
}
