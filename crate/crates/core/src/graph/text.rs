//! Line-oriented graph format:
//!
//! ```text
//! graph <id> <n>
//! arc <u> <v>
//! ...
//! <blank line>
//! ```
//!
//! Several graphs may share one stream, separated by blank lines. Lines
//! starting with `#` are ignored.

use std::fmt::Write;

use super::{Graph, GraphError};

pub fn parse_graphs(text: &str) -> Result<Vec<Graph>, GraphError> {
    let mut out = Vec::new();
    let mut current: Option<(usize, String, usize, Vec<(usize, usize)>)> = None;
    let err = |line: usize, msg: String| GraphError::Parse { line, msg };
    let finish = |cur: Option<(usize, String, usize, Vec<(usize, usize)>)>,
                  out: &mut Vec<Graph>|
     -> Result<(), GraphError> {
        if let Some((line, id, n, arcs)) = cur {
            let g = Graph::new(id, n, arcs).map_err(|e| err(line, e.to_string()))?;
            out.push(g);
        }
        Ok(())
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.starts_with('#') {
            continue;
        }
        if trimmed.is_empty() {
            finish(current.take(), &mut out)?;
            continue;
        }
        let words: Vec<&str> = trimmed.split_whitespace().collect();
        match words.as_slice() {
            ["graph", id, n] => {
                if current.is_some() {
                    return Err(err(line, "missing blank line before `graph`".into()));
                }
                let n = n.parse().map_err(|_| err(line, format!("bad vertex count `{n}`")))?;
                current = Some((line, id.to_string(), n, Vec::new()));
            }
            ["arc", u, v] => {
                let Some((_, _, n, arcs)) = current.as_mut() else {
                    return Err(err(line, "`arc` outside of a graph block".into()));
                };
                let parse = |s: &str| -> Result<usize, GraphError> {
                    s.parse().map_err(|_| err(line, format!("bad vertex `{s}`")))
                };
                let (u, v) = (parse(u)?, parse(v)?);
                if u >= *n || v >= *n {
                    return Err(err(line, format!("arc ({u}, {v}) out of range for {n} vertices")));
                }
                arcs.push((u, v));
            }
            _ => return Err(err(line, format!("unrecognized line `{trimmed}`"))),
        }
    }
    finish(current.take(), &mut out)?;
    Ok(out)
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = format!("graph {} {}\n", g.id(), g.n());
    for &(u, v) in g.arcs() {
        writeln!(s, "arc {u} {v}").unwrap();
    }
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_graphs() {
        let text = "graph a 2\narc 0 1\n\n# comment\ngraph b 1\narc 0 0\n";
        let gs = parse_graphs(text).unwrap();
        assert_eq!(gs.len(), 2);
        assert_eq!(gs[0].arcs(), &[(0, 1)]);
        assert!(gs[1].has_loop(0));
        let again = parse_graphs(&(write_graph(&gs[0]) + &write_graph(&gs[1]))).unwrap();
        assert_eq!(again, gs);
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse_graphs("graph a 2\narc 0 5\n").unwrap_err();
        assert!(matches!(e, GraphError::Parse { line: 2, .. }));
        let e = parse_graphs("arc 0 1\n").unwrap_err();
        assert!(matches!(e, GraphError::Parse { line: 1, .. }));
        let e = parse_graphs("graph a x\n").unwrap_err();
        assert!(matches!(e, GraphError::Parse { line: 1, .. }));
        let e = parse_graphs("graph a 2\narc 0 1\narc 0 1\n").unwrap_err();
        assert!(matches!(e, GraphError::Parse { line: 1, .. }));
    }
}
