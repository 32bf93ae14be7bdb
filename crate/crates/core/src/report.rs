//! The realism audit: measured statistics against reference ranges observed on
//! public web crawls, and a verdict.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::components;
use crate::compress::{compare_orderings, CompressionParams};
use crate::graph::CsrGraph;
use crate::stats::compute_stats;
use crate::{Error, Result};

/// Reference ranges from crawls of 10⁶ to 10⁸ nodes. Endpoints are inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealismReference {
    pub avg_outdegree_range: (f64, f64),
    pub dangling_pct_range: (f64, f64),
    pub bucket_pct_range: (f64, f64),
    /// Below this many nodes, compressibility says little about realism.
    pub compressibility_min_nodes: u64,
}

pub const REFERENCE: RealismReference = RealismReference {
    avg_outdegree_range: (22.0, 32.0),
    dangling_pct_range: (8.0, 17.0),
    bucket_pct_range: (3.0, 12.0),
    compressibility_min_nodes: 10_000_000,
};

pub const FOOTER: &str = "Reference ranges come from a handful of public crawls of the .eu, \
Indochina and .uk domains. Falling outside them makes a graph atypical as a web \
sample, not invalid; crawl policy and era shift these figures (average outdegree \
has grown with content-management systems). Bits per link are measured with this \
tool's gamma-code model and are not comparable with production codec figures.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    InRange,
    OutlierLow,
    OutlierHigh,
    Informative,
}

impl Status {
    pub fn is_outlier(self) -> bool {
        matches!(self, Status::OutlierLow | Status::OutlierHigh)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Plausible,
    Outlier,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Plausible => "plausible",
            Verdict::Outlier => "outlier",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub name: String,
    pub measured: Option<f64>,
    /// Inclusive reference range; absent for informative-only measures.
    pub reference: Option<(f64, f64)>,
    pub status: Status,
    pub note: String,
}

/// In range when `low ≤ measured ≤ high`.
pub fn classify(measured: f64, (low, high): (f64, f64)) -> Status {
    if measured < low {
        Status::OutlierLow
    } else if measured > high {
        Status::OutlierHigh
    } else {
        Status::InRange
    }
}

/// The three hard criteria. Fractions are given as fractions and compared as
/// percentages.
pub fn hard_criteria(avg_outdegree: f64, dangling_fraction: f64, bucket_fraction: f64) -> Vec<Criterion> {
    let hard = |name: &str, measured: f64, range: (f64, f64), note: &str| Criterion {
        name: name.to_string(),
        measured: Some(measured),
        reference: Some(range),
        status: classify(measured, range),
        note: note.to_string(),
    };
    vec![
        hard(
            "avg_outdegree",
            avg_outdegree,
            REFERENCE.avg_outdegree_range,
            "arcs per node after collapsing duplicate arcs",
        ),
        hard(
            "dangling_percent",
            100.0 * dangling_fraction,
            REFERENCE.dangling_pct_range,
            "percent of nodes without outlinks",
        ),
        hard(
            "bucket_percent",
            100.0 * bucket_fraction,
            REFERENCE.bucket_pct_range,
            "percent of nodes in terminal components containing an arc",
        ),
    ]
}

/// Outlier if any non-informative criterion is out of range, plausible if
/// there is at least one and all are in range, inconclusive otherwise.
pub fn verdict(criteria: &[Criterion]) -> Verdict {
    let mut hard = criteria.iter().filter(|c| c.status != Status::Informative).peekable();
    if hard.peek().is_none() {
        return Verdict::Inconclusive;
    }
    if criteria.iter().any(|c| c.status.is_outlier()) {
        Verdict::Outlier
    } else {
        Verdict::Plausible
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub nodes: u64,
    pub arcs: u64,
    pub avg_outdegree: f64,
    pub dangling_count: u64,
    pub dangling_fraction: f64,
    pub bucket_nodes: u64,
    pub bucket_fraction: f64,
    pub scc_count: u64,
    pub terminal_count: u64,
    pub bucket_count: u64,
    pub core_size: u64,
    pub core_is_terminal: bool,
    pub window: usize,
    pub bits_per_link_natural: Option<f64>,
    pub bits_per_link_gray: Option<f64>,
    pub criteria: Vec<Criterion>,
    pub verdict: Verdict,
}

pub fn audit(g: &CsrGraph, params: CompressionParams) -> Result<AuditReport> {
    if g.num_nodes() == 0 {
        return Err(Error::contract("cannot audit a graph without nodes"));
    }
    let stats = compute_stats(g);
    let comps = components::analyze(g).summary();

    let mut criteria = hard_criteria(stats.avg_outdegree, stats.dangling_fraction, comps.bucket_fraction);
    if stats.num_arcs == 0 {
        // degenerate: no ratio says anything about realism
        for c in &mut criteria {
            c.status = Status::Informative;
            c.note.push_str(" (graph has no arcs)");
        }
    }

    let orderings = match compare_orderings(g, params) {
        Ok(pair) => Some(pair),
        Err(Error::UndefinedMeasure(_)) => None,
        Err(e) => return Err(e),
    };
    let size_note = if stats.num_nodes < REFERENCE.compressibility_min_nodes {
        format!(
            "below {} nodes compressibility is not expected to show",
            REFERENCE.compressibility_min_nodes
        )
    } else {
        "large enough for compressibility to be meaningful".to_string()
    };
    criteria.push(Criterion {
        name: "gray_bits_per_link".to_string(),
        measured: orderings.map(|(_, gray)| gray),
        reference: None,
        status: Status::Informative,
        note: match orderings {
            Some((natural, _)) => format!("model bits/link after Gray reordering (natural order {natural:.3}); {size_note}"),
            None => "undefined: graph has no arcs".to_string(),
        },
    });

    let verdict = verdict(&criteria);
    Ok(AuditReport {
        nodes: stats.num_nodes,
        arcs: stats.num_arcs,
        avg_outdegree: stats.avg_outdegree,
        dangling_count: stats.dangling_count,
        dangling_fraction: stats.dangling_fraction,
        bucket_nodes: comps.bucket_nodes,
        bucket_fraction: comps.bucket_fraction,
        scc_count: comps.scc_count,
        terminal_count: comps.terminal_count,
        bucket_count: comps.bucket_count,
        core_size: comps.core_size,
        core_is_terminal: comps.core_is_terminal,
        window: params.window,
        bits_per_link_natural: orderings.map(|o| o.0),
        bits_per_link_gray: orderings.map(|o| o.1),
        criteria,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Markdown,
}

pub fn render_report(r: &AuditReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => render_json(r),
        ReportFormat::Markdown => render_markdown(r),
    }
}

pub fn render_json(r: &AuditReport) -> String {
    serde_json::to_string_pretty(r).expect("report serializes")
}

pub fn parse_json(text: &str) -> Result<AuditReport> {
    Ok(serde_json::from_str(text)?)
}

fn fmt_opt(x: Option<f64>, digits: usize) -> String {
    x.map_or_else(|| "n/a".to_string(), |v| format!("{v:.digits$}"))
}

pub fn render_markdown(r: &AuditReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Web-graph realism audit\n");
    let _ = writeln!(s, "**Verdict: {}**\n", r.verdict.as_str());
    let _ = writeln!(s, "| measure | value |");
    let _ = writeln!(s, "|---|---|");
    let _ = writeln!(s, "| nodes | {} |", r.nodes);
    let _ = writeln!(s, "| arcs | {} |", r.arcs);
    let _ = writeln!(s, "| average outdegree | {:.3} |", r.avg_outdegree);
    let _ = writeln!(s, "| dangling nodes | {} ({:.4}%) |", r.dangling_count, 100.0 * r.dangling_fraction);
    let _ = writeln!(s, "| bucket nodes | {} ({:.4}%) |", r.bucket_nodes, 100.0 * r.bucket_fraction);
    let _ = writeln!(s, "| strongly connected components | {} |", r.scc_count);
    let _ = writeln!(s, "| bucket components | {} |", r.bucket_count);
    let _ = writeln!(s, "| core component size | {} |", r.core_size);
    let _ = writeln!(s, "| model bits/link, natural order (window {}) | {} |", r.window, fmt_opt(r.bits_per_link_natural, 3));
    let _ = writeln!(s, "| model bits/link, Gray order (window {}) | {} |", r.window, fmt_opt(r.bits_per_link_gray, 3));
    let _ = writeln!(s);
    let _ = writeln!(s, "| criterion | measured | reference | status | note |");
    let _ = writeln!(s, "|---|---|---|---|---|");
    for c in &r.criteria {
        let reference = c
            .reference
            .map_or_else(|| "-".to_string(), |(lo, hi)| format!("{lo}-{hi}"));
        let status = serde_json::to_value(c.status).expect("status serializes");
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} |",
            c.name,
            fmt_opt(c.measured, 4),
            reference,
            status.as_str().unwrap_or_default(),
            c.note
        );
    }
    let _ = writeln!(s, "\n---\n\n{FOOTER}");
    s
}
