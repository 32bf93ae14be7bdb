//! Edge-list and MatrixMarket interchange.
//!
//! MatrixMarket rows are sources and columns are targets, so the stored
//! pattern is the adjacency matrix in the row-stochastic orientation used by
//! PageRank (`x ← xP`). Files distributed in the column (transposed)
//! orientation must be flipped, e.g. with `webaudit convert --transpose`.

use std::io::{BufRead, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use crate::graph::{CsrGraph, EdgeList, NodeId, MAX_NODES};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    MatrixMarket,
}

impl GraphFormat {
    /// `.mtx` is MatrixMarket; everything else is read as an edge list.
    pub fn from_path(path: &Path) -> GraphFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("mtx") => GraphFormat::MatrixMarket,
            _ => GraphFormat::EdgeList,
        }
    }

    pub fn parse<R: BufRead>(self, reader: R) -> Result<EdgeList> {
        match self {
            GraphFormat::EdgeList => parse_edge_list(reader),
            GraphFormat::MatrixMarket => parse_matrix_market(reader),
        }
    }

    pub fn export<W: Write>(self, g: &CsrGraph, writer: W) -> Result<()> {
        match self {
            GraphFormat::EdgeList => export_edge_list(g, writer),
            GraphFormat::MatrixMarket => export_matrix_market(g, writer),
        }
    }
}

impl FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "edges" | "edge_list" | "edgelist" => Ok(GraphFormat::EdgeList),
            "mtx" | "matrix_market" | "mm" => Ok(GraphFormat::MatrixMarket),
            other => Err(format!("unknown graph format '{other}' (expected edges or mtx)")),
        }
    }
}

/// Line-by-line reader that keeps the 1-based line number.
struct Lines<R> {
    reader: R,
    buf: String,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    fn new(reader: R) -> Self {
        Lines {
            reader,
            buf: String::new(),
            line: 0,
        }
    }

    fn next_line(&mut self) -> Result<Option<(usize, &str)>> {
        self.buf.clear();
        let read = self.reader.read_line(&mut self.buf).map_err(|e| {
            if e.kind() == std::io::ErrorKind::InvalidData {
                Error::parse(self.line + 1, "input is not valid UTF-8")
            } else {
                Error::Io(e)
            }
        })?;
        if read == 0 {
            return Ok(None);
        }
        self.line += 1;
        Ok(Some((self.line, self.buf.trim_end_matches(['\n', '\r']))))
    }
}

fn parse_u64(token: &str, line: usize) -> Result<u64> {
    token.parse::<u64>().map_err(|e| match e.kind() {
        std::num::IntErrorKind::PosOverflow => {
            Error::parse(line, format!("integer overflow in '{token}'"))
        }
        _ => Error::parse(line, format!("'{token}' is not a non-negative integer")),
    })
}

fn parse_node(token: &str, line: usize) -> Result<NodeId> {
    let value = parse_u64(token, line)?;
    NodeId::try_from(value)
        .map_err(|_| Error::parse(line, format!("integer overflow: node id {value} exceeds 32 bits")))
}

/// Parses whitespace-separated `source target` lines. `#` starts a comment
/// line; a `# nodes: N` comment declares the node count.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<EdgeList> {
    let mut lines = Lines::new(reader);
    let mut list = EdgeList::default();
    while let Some((line, text)) = lines.next_line()? {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(count) = comment.trim_start().strip_prefix("nodes:") {
                let n = parse_u64(count.trim(), line)? as usize;
                if n > MAX_NODES {
                    return Err(Error::parse(line, format!("node count {n} exceeds 32-bit ids")));
                }
                list.declared_nodes = Some(n);
            }
            continue;
        }
        let mut tokens = trimmed.split_ascii_whitespace();
        let (Some(s), Some(t), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::parse(line, "expected exactly two integers: source target"));
        };
        list.edges.push((parse_node(s, line)?, parse_node(t, line)?));
    }
    Ok(list)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MtxField {
    Pattern,
    Real,
    Integer,
}

/// Parses a `coordinate general` MatrixMarket file into arcs `(i-1, j-1)`.
/// Entry values are checked for well-formedness and then discarded.
pub fn parse_matrix_market<R: BufRead>(reader: R) -> Result<EdgeList> {
    let mut lines = Lines::new(reader);
    let header = lines
        .next_line()?
        .ok_or_else(|| Error::parse(1, "empty file: missing %%MatrixMarket header"))?
        .1
        .to_ascii_lowercase();
    let tokens: Vec<&str> = header.split_ascii_whitespace().collect();
    if tokens.first() != Some(&"%%matrixmarket") {
        return Err(Error::parse(1, "missing %%MatrixMarket banner"));
    }
    if tokens.len() != 5 {
        return Err(Error::parse(1, "header must read: %%MatrixMarket matrix coordinate <field> <symmetry>"));
    }
    if tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(Error::parse(1, format!("unsupported object/format '{} {}'", tokens[1], tokens[2])));
    }
    let field = match tokens[3] {
        "pattern" => MtxField::Pattern,
        "real" => MtxField::Real,
        "integer" => MtxField::Integer,
        other => return Err(Error::parse(1, format!("unsupported field '{other}'"))),
    };
    if tokens[4] != "general" {
        return Err(Error::parse(1, format!("unsupported symmetry qualifier '{}'", tokens[4])));
    }

    let (rows, nnz) = loop {
        let last = lines.line;
        let Some((line, text)) = lines.next_line()? else {
            return Err(Error::parse(last, "missing dimension line"));
        };
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let dims: Vec<&str> = trimmed.split_ascii_whitespace().collect();
        if dims.len() != 3 {
            return Err(Error::parse(line, "dimension line must be: rows cols nnz"));
        }
        let rows = parse_u64(dims[0], line)?;
        let cols = parse_u64(dims[1], line)?;
        let nnz = parse_u64(dims[2], line)?;
        if rows != cols {
            return Err(Error::parse(line, format!("matrix is not square ({rows} x {cols})")));
        }
        if rows as u128 > MAX_NODES as u128 {
            return Err(Error::parse(line, format!("dimension {rows} exceeds 32-bit ids")));
        }
        break (rows, nnz);
    };

    let arity = if field == MtxField::Pattern { 2 } else { 3 };
    let mut edges = Vec::with_capacity(nnz.min(1 << 28) as usize);
    while let Some((line, text)) = lines.next_line()? {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let entry: Vec<&str> = trimmed.split_ascii_whitespace().collect();
        if entry.len() != arity {
            return Err(Error::parse(line, format!("expected {arity} tokens per entry, found {}", entry.len())));
        }
        let i = parse_u64(entry[0], line)?;
        let j = parse_u64(entry[1], line)?;
        if i == 0 || i > rows || j == 0 || j > rows {
            return Err(Error::parse(line, format!("index ({i}, {j}) outside [1, {rows}]")));
        }
        match field {
            MtxField::Pattern => {}
            MtxField::Real => {
                entry[2]
                    .parse::<f64>()
                    .map_err(|_| Error::parse(line, format!("'{}' is not a real value", entry[2])))?;
            }
            MtxField::Integer => {
                entry[2]
                    .parse::<i64>()
                    .map_err(|_| Error::parse(line, format!("'{}' is not an integer value", entry[2])))?;
            }
        }
        if edges.len() as u64 == nnz {
            return Err(Error::parse(line, format!("more entries than the declared nnz {nnz}")));
        }
        edges.push(((i - 1) as NodeId, (j - 1) as NodeId));
    }
    if (edges.len() as u64) != nnz {
        return Err(Error::parse(
            lines.line,
            format!("nnz mismatch: header declares {nnz}, file has {}", edges.len()),
        ));
    }
    Ok(EdgeList::new(edges, Some(rows as usize)))
}

/// Writes `%%MatrixMarket matrix coordinate pattern general`, the `n n m`
/// dimension line and one 1-based `i j` line per arc in row-major order.
pub fn export_matrix_market<W: Write>(g: &CsrGraph, writer: W) -> Result<()> {
    let mut out = BufWriter::new(writer);
    let n = g.num_nodes();
    writeln!(out, "%%MatrixMarket matrix coordinate pattern general")?;
    writeln!(out, "{n} {n} {}", g.num_arcs())?;
    for u in 0..n {
        for &v in g.successors(u) {
            writeln!(out, "{} {}", u + 1, v as u64 + 1)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Writes a `# nodes: N` header followed by one `source target` line per arc.
pub fn export_edge_list<W: Write>(g: &CsrGraph, writer: W) -> Result<()> {
    let mut out = BufWriter::new(writer);
    writeln!(out, "# nodes: {}", g.num_nodes())?;
    for (u, v) in g.arcs() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(text: &str) -> Result<EdgeList> {
        parse_edge_list(text.as_bytes())
    }

    fn mm(text: &str) -> Result<EdgeList> {
        parse_matrix_market(text.as_bytes())
    }

    fn line_of(err: Error) -> usize {
        match err {
            Error::Parse { line, .. } => line,
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn edge_list_basic() {
        assert_eq!(el("0 1\n1 0\n").unwrap(), EdgeList::new(vec![(0, 1), (1, 0)], None));
        assert_eq!(
            el("# nodes: 5\n# comment\n\n3 4\n").unwrap(),
            EdgeList::new(vec![(3, 4)], Some(5))
        );
        assert_eq!(el("0\t1\r\n").unwrap().edges, vec![(0, 1)]);
    }

    #[test]
    fn edge_list_errors_carry_line() {
        assert_eq!(line_of(el("0 1 2\n").unwrap_err()), 1);
        assert_eq!(line_of(el("0 1\n7\n").unwrap_err()), 2);
        assert_eq!(line_of(el("0 1\n\nx 1\n").unwrap_err()), 3);
        assert_eq!(line_of(el("0 -1\n").unwrap_err()), 1);
        let err = el("0 99999999999999999999999\n").unwrap_err();
        assert!(err.to_string().contains("overflow"), "{err}");
        let err = el("0 4294967296\n").unwrap_err();
        assert!(err.to_string().contains("overflow"), "{err}");
    }

    #[test]
    fn matrix_market_pattern_and_real() {
        let p = "%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 2\n";
        assert_eq!(mm(p).unwrap(), EdgeList::new(vec![(0, 1)], Some(2)));
        let r = "%%MatrixMarket matrix coordinate real general\n% c\n2 2 1\n2 1 0.5\n";
        assert_eq!(mm(r).unwrap(), EdgeList::new(vec![(1, 0)], Some(2)));
        let i = "%%MatrixMarket matrix coordinate integer general\n3 3 2\n1 1 4\n3 2 -1\n";
        assert_eq!(mm(i).unwrap(), EdgeList::new(vec![(0, 0), (2, 1)], Some(3)));
    }

    #[test]
    fn matrix_market_errors() {
        let head = "%%MatrixMarket matrix coordinate pattern general\n";
        let err = mm(&format!("{head}2 3 1\n1 2\n")).unwrap_err();
        assert!(err.to_string().contains("not square"), "{err}");
        let err = mm("%%MatrixMarket matrix coordinate pattern symmetric\n2 2 1\n1 2\n").unwrap_err();
        assert!(err.to_string().contains("symmetry"), "{err}");
        assert_eq!(line_of(mm(&format!("{head}2 2 1\n3 1\n")).unwrap_err()), 3);
        assert_eq!(line_of(mm(&format!("{head}2 2 1\n0 1\n")).unwrap_err()), 3);
        let err = mm(&format!("{head}2 2 2\n1 2\n")).unwrap_err();
        assert!(err.to_string().contains("nnz"), "{err}");
        let err = mm(&format!("{head}2 2 1\n1 2\n2 1\n")).unwrap_err();
        assert_eq!(line_of(err), 4);
        let real = "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2\n";
        assert_eq!(line_of(mm(real).unwrap_err()), 3);
        let bad_value = "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 abc\n";
        assert_eq!(line_of(mm(bad_value).unwrap_err()), 3);
        assert!(mm("%%MatrixMarket matrix coordinate complex general\n1 1 0\n").is_err());
        assert!(mm("%%MatrixMarket matrix array real general\n1 1\n").is_err());
        assert!(mm("2 2 0\n").is_err());
    }

    #[test]
    fn matrix_market_export_format() {
        let g = CsrGraph::from_edges(&EdgeList::new(vec![(0, 1)], Some(2))).unwrap();
        let mut out = Vec::new();
        export_matrix_market(&g, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 2\n"
        );
        let mut out = Vec::new();
        export_matrix_market(&CsrGraph::empty(1), &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "%%MatrixMarket matrix coordinate pattern general\n1 1 0\n"
        );
    }

    #[test]
    fn edge_list_export_format() {
        let g = CsrGraph::from_edges(&EdgeList::new(vec![(1, 0), (0, 2)], Some(4))).unwrap();
        let mut out = Vec::new();
        export_edge_list(&g, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "# nodes: 4\n0 2\n1 0\n");
    }

    #[test]
    fn format_detection() {
        assert_eq!(GraphFormat::from_path(Path::new("a/b.MTX")), GraphFormat::MatrixMarket);
        assert_eq!(GraphFormat::from_path(Path::new("a/b.edges")), GraphFormat::EdgeList);
        assert_eq!("mtx".parse::<GraphFormat>().unwrap(), GraphFormat::MatrixMarket);
        assert!("gz".parse::<GraphFormat>().is_err());
    }
}
