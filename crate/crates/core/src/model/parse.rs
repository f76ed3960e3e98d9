//! Text formats: DIMACS CNF and the edge-list graph format.
//!
//! Graph format:
//!
//! ```text
//! <n> <m> directed|undirected [weighted [<bound>]]
//! <u> <v> [<w>]          (exactly m lines)
//! s <id>                 (optional attribute lines)
//! t <id>
//! active <id>...
//! S <id>...
//! T <id>...
//! ```
//!
//! Blank lines and lines starting with `#` are ignored everywhere.

use super::cnf::{CnfFormula, Literal};
use super::graph::Graph;
use crate::error::{Error, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} '{tok}'")))
}

pub fn parse_cnf(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        last_line = line_no;
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::parse(line_no, "duplicate problem line"));
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 4 || toks[0] != "p" || toks[1] != "cnf" {
                return Err(Error::parse(line_no, "expected 'p cnf <vars> <clauses>'"));
            }
            let vars = parse_num(line_no, toks[2], "variable count")?;
            let count = parse_num(line_no, toks[3], "clause count")?;
            header = Some((vars, count));
            continue;
        }
        let (vars, _) =
            header.ok_or_else(|| Error::parse(line_no, "clause before problem line"))?;
        for tok in line.split_whitespace() {
            let lit: Literal = parse_num(line_no, tok, "literal")?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if lit.unsigned_abs() as usize > vars {
                return Err(Error::Domain(format!(
                    "line {line_no}: variable {} exceeds declared count {vars}",
                    lit.unsigned_abs()
                )));
            }
            current.push(lit);
        }
    }
    let (vars, count) = header.ok_or_else(|| Error::parse(1, "missing problem line"))?;
    if !current.is_empty() {
        return Err(Error::parse(
            last_line,
            "last clause is not terminated by 0",
        ));
    }
    if clauses.len() != count {
        return Err(Error::parse(
            last_line,
            format!("header declares {count} clauses, found {}", clauses.len()),
        ));
    }
    CnfFormula::new(vars, clauses)
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty graph input"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() < 3 || toks.len() > 5 {
        return Err(Error::parse(
            hline,
            "expected '<n> <m> directed|undirected [weighted [<bound>]]'",
        ));
    }
    let n: usize = parse_num(hline, toks[0], "node count")?;
    let m: usize = parse_num(hline, toks[1], "edge count")?;
    let directed = match toks[2] {
        "directed" => true,
        "undirected" => false,
        other => {
            return Err(Error::parse(
                hline,
                format!("unknown orientation '{other}'"),
            ))
        }
    };
    let weighted = match toks.get(3) {
        None => false,
        Some(&"weighted") => true,
        Some(other) => return Err(Error::parse(hline, format!("unknown flag '{other}'"))),
    };
    let declared_bound: Option<u64> = match toks.get(4) {
        Some(tok) if weighted => Some(parse_num(hline, tok, "weight bound")?),
        Some(_) => unreachable!("a fifth token implies the weighted flag"),
        None => None,
    };

    let mut edges = Vec::with_capacity(m);
    let mut attr_lines = Vec::new();
    for (line_no, line) in lines {
        let first = line.split_whitespace().next().unwrap_or_default();
        if first.chars().all(|c| c.is_ascii_digit()) {
            if !attr_lines.is_empty() {
                return Err(Error::parse(line_no, "edge line after attribute lines"));
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let expected = if weighted { 3 } else { 2 };
            if toks.len() != expected {
                return Err(Error::parse(line_no, format!("expected {expected} fields")));
            }
            let u: usize = parse_num(line_no, toks[0], "node id")?;
            let v: usize = parse_num(line_no, toks[1], "node id")?;
            let w: i64 = if weighted {
                parse_num(line_no, toks[2], "weight")?
            } else {
                1
            };
            if w <= 0 {
                return Err(Error::parse(line_no, format!("non-positive weight {w}")));
            }
            edges.push((line_no, u, v, w as u64));
        } else {
            attr_lines.push((line_no, line));
        }
    }
    if edges.len() != m {
        return Err(Error::parse(
            hline,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }

    let bound = if weighted {
        let max_w = edges.iter().map(|e| e.3).max().unwrap_or(1);
        match declared_bound {
            Some(b) if b < max_w => {
                return Err(Error::parse(
                    hline,
                    format!("weight {max_w} exceeds bound {b}"),
                ))
            }
            Some(b) => b,
            None => max_w,
        }
    } else {
        1
    };
    let mut g = if weighted {
        Graph::weighted(n, directed, bound).map_err(|e| Error::parse(hline, e.to_string()))?
    } else {
        Graph::new(n, directed)
    };
    for (line_no, u, v, w) in edges {
        g.add_weighted_edge(u, v, w)
            .map_err(|e| Error::parse(line_no, e.to_string()))?;
    }

    let (mut s_set, mut t_set) = (None, None);
    for (line_no, line) in attr_lines {
        let mut toks = line.split_whitespace();
        let key = toks.next().unwrap_or_default();
        let ids: Vec<usize> = toks
            .map(|t| parse_num(line_no, t, "node id"))
            .collect::<Result<_>>()?;
        let wrap = |e: Error| Error::parse(line_no, e.to_string());
        match (key, ids.as_slice()) {
            ("s", [id]) => g.set_s(*id).map_err(wrap)?,
            ("t", [id]) => g.set_t(*id).map_err(wrap)?,
            ("active", _) => g.set_active(ids.iter().copied()).map_err(wrap)?,
            ("S", _) => s_set = Some(ids),
            ("T", _) => t_set = Some(ids),
            _ => return Err(Error::parse(line_no, format!("unrecognized line '{line}'"))),
        }
    }
    match (s_set, t_set) {
        (Some(s), Some(t)) => g
            .set_source_sets(s, t)
            .map_err(|e| Error::parse(hline, e.to_string()))?,
        (None, None) => {}
        _ => return Err(Error::parse(hline, "S and T must be given together")),
    }
    Ok(g)
}

/// Inverse of [`parse_graph`].
pub fn graph_to_text(g: &Graph) -> String {
    let orientation = if g.is_directed() {
        "directed"
    } else {
        "undirected"
    };
    let mut out = format!("{} {} {orientation}", g.node_count(), g.edge_count());
    if g.is_weighted() {
        out.push_str(&format!(" weighted {}", g.weight_bound()));
    }
    out.push('\n');
    for (u, v, w) in g.edges() {
        if g.is_weighted() {
            out.push_str(&format!("{u} {v} {w}\n"));
        } else {
            out.push_str(&format!("{u} {v}\n"));
        }
    }
    let join =
        |it: &mut dyn Iterator<Item = &usize>| -> String { it.map(|v| format!(" {v}")).collect() };
    if let Some(s) = g.s() {
        out.push_str(&format!("s {s}\n"));
    }
    if let Some(t) = g.t() {
        out.push_str(&format!("t {t}\n"));
    }
    if let Some(active) = g.active_set() {
        out.push_str(&format!("active{}\n", join(&mut active.iter())));
    }
    if let (Some(s), Some(t)) = (g.s_set(), g.t_set()) {
        out.push_str(&format!("S{}\n", join(&mut s.iter())));
        out.push_str(&format!("T{}\n", join(&mut t.iter())));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cnf_two_clauses() {
        let f = parse_cnf("p cnf 2 2\n1 2 0\n-1 2 0\n").unwrap();
        assert_eq!(f.var_count(), 2);
        assert_eq!(f.clauses(), &[vec![1, 2], vec![-1, 2]]);
    }

    #[test]
    fn cnf_smallest() {
        let f = parse_cnf("p cnf 1 1\n1 0\n").unwrap();
        assert_eq!(f.var_count(), 1);
        assert_eq!(f.clauses(), &[vec![1]]);
    }

    #[test]
    fn cnf_variable_out_of_range() {
        let err = parse_cnf("p cnf 2 1\n3 0\n").unwrap_err();
        assert!(matches!(err, Error::Domain(_)), "{err:?}");
    }

    #[test]
    fn cnf_malformed_line_reports_line_number() {
        let err = parse_cnf("c comment\np cnf 2 1\n1 x 0\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                message: "invalid literal 'x'".into()
            }
        );
    }

    #[test]
    fn cnf_clause_count_mismatch() {
        assert!(matches!(
            parse_cnf("p cnf 2 2\n1 0\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_cnf("p cnf 2 1\n1 2\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn cnf_clauses_may_span_lines() {
        let f = parse_cnf("p cnf 3 2\n1 2\n3 0 -1\n0\n").unwrap();
        assert_eq!(f.clauses(), &[vec![1, 2, 3], vec![-1]]);
    }

    #[test]
    fn graph_triangle() {
        let g = parse_graph("3 3 undirected\n0 1\n1 2\n0 2\n").unwrap();
        assert_eq!(g.node_count(), 3);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && g.has_edge(2, 0));
    }

    #[test]
    fn graph_weighted_arc() {
        let g = parse_graph("2 1 directed weighted\n0 1 5\n").unwrap();
        assert!(g.is_directed());
        assert_eq!(g.weight(0, 1), Some(5));
        assert_eq!(g.weight_bound(), 5);
    }

    #[test]
    fn graph_out_of_range() {
        let err = parse_graph("2 1 undirected\n0 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn graph_duplicate_and_nonpositive() {
        assert!(parse_graph("2 2 undirected\n0 1\n1 0\n").is_err());
        assert!(parse_graph("2 1 undirected weighted\n0 1 0\n").is_err());
        assert!(parse_graph("2 1 undirected weighted\n0 1 -3\n").is_err());
    }

    #[test]
    fn graph_attributes_round_trip() {
        let text = "4 2 directed\n0 1\n2 3\ns 0\nt 3\nactive 1 2\nS 0 1\nT 3\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.s(), Some(0));
        assert_eq!(g.t(), Some(3));
        assert_eq!(graph_to_text(&g), text);
        assert_eq!(parse_graph(&graph_to_text(&g)).unwrap(), g);
    }

    #[test]
    fn empty_active_set_survives_round_trip() {
        let mut g = Graph::undirected(2);
        g.set_active([]).unwrap();
        assert_eq!(parse_graph(&graph_to_text(&g)).unwrap(), g);
    }
}
