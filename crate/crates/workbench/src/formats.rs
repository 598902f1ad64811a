//! Text formats for chains and forests.
//!
//! Chain files:
//!
//! ```text
//! fanchain n=2
//! level d=1 dim=1 minus=1
//! level d=2 dim=2 minus=10
//! tau d=1 rows=2 1;0
//! ```
//!
//! Forest files hold one `node id=<i> depth=<d> parent=<p|none>` line per
//! node. Blank lines and lines starting with `#` are ignored in both.

use std::collections::BTreeMap;
use std::fmt::Write;

use fanforge_core::{Error, FanChain, Forest, Gf2Matrix, Gf2Vec, Level, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn perr(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

/// Splits `key=value` tokens after the keyword, requiring exactly `keys`.
fn fields<'a>(line: usize, tokens: &[&'a str], keys: &[&str]) -> Result<Vec<&'a str>> {
    if tokens.len() != keys.len() {
        return Err(perr(line, format!("expected fields {}", keys.join(", "))));
    }
    tokens
        .iter()
        .zip(keys)
        .map(|(tok, key)| match tok.split_once('=') {
            Some((k, v)) if k == *key => Ok(v),
            _ => Err(perr(line, format!("expected {key}=..., found {tok:?}"))),
        })
        .collect()
}

fn number(line: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| perr(line, format!("not a number: {s:?}")))
}

fn bits(line: usize, s: &str) -> Result<Gf2Vec> {
    s.parse().map_err(|e: Error| perr(line, e))
}

/// Parses a chain file; the result has passed shape checks but not
/// necessarily the chain invariants.
pub fn parse_chain(text: &str) -> Result<FanChain> {
    let mut lines = content_lines(text);
    let (no, header) = lines.next().ok_or_else(|| Error::Parse("empty chain file".into()))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.first() != Some(&"fanchain") {
        return Err(perr(no, "expected header `fanchain n=<n>`"));
    }
    let n = number(no, fields(no, &tokens[1..], &["n"])?[0])?;
    if n == 0 {
        return Err(perr(no, "a chain needs at least one level"));
    }
    let mut levels: BTreeMap<usize, Level> = BTreeMap::new();
    let mut taus: BTreeMap<usize, (usize, Vec<Gf2Vec>)> = BTreeMap::new();
    for (no, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "level" => {
                let f = fields(no, &tokens[1..], &["d", "dim", "minus"])?;
                let (d, dim, minus) = (number(no, f[0])?, number(no, f[1])?, bits(no, f[2])?);
                if levels.insert(d, Level { dim, minus }).is_some() {
                    return Err(perr(no, format!("level {d} given twice")));
                }
            }
            "tau" => {
                if tokens.len() != 4 {
                    return Err(perr(no, "expected `tau d=<d> rows=<r> <row;row;...>`"));
                }
                let f = fields(no, &tokens[1..3], &["d", "rows"])?;
                let (d, r) = (number(no, f[0])?, number(no, f[1])?);
                let rows: Vec<Gf2Vec> = tokens[3].split(';').map(|s| bits(no, s)).collect::<Result<_>>()?;
                if rows.len() != r {
                    return Err(perr(no, format!("rows={r} but {} rows given", rows.len())));
                }
                if taus.insert(d, (r, rows)).is_some() {
                    return Err(perr(no, format!("tau {d} given twice")));
                }
            }
            other => return Err(perr(no, format!("unknown record {other:?}"))),
        }
    }
    if levels.keys().copied().ne(1..=n) {
        return Err(Error::Parse(format!("levels must be exactly d=1..{n}")));
    }
    if taus.keys().copied().ne(1..n) {
        return Err(Error::Parse(format!("transitions must be exactly d=1..{}", n - 1)));
    }
    let levels: Vec<Level> = levels.into_values().collect();
    let transitions = taus
        .into_iter()
        .map(|(d, (_, rows))| Gf2Matrix::from_rows(levels[d - 1].dim, rows))
        .collect::<Result<_>>()?;
    FanChain::new(levels, transitions)
}

/// Parses a chain file and insists on the chain invariants.
pub fn parse_valid_chain(text: &str) -> Result<FanChain> {
    let chain = parse_chain(text)?;
    if let Some(v) = chain.validate().violations().first() {
        return Err(Error::Structural(format!("invalid chain: {v}")));
    }
    Ok(chain)
}

pub fn serialize_chain(c: &FanChain) -> String {
    let mut out = format!("fanchain n={}\n", c.len());
    for (i, l) in c.levels().iter().enumerate() {
        writeln!(out, "level d={} dim={} minus={}", i + 1, l.dim, l.minus).unwrap();
    }
    for (i, t) in c.transitions().iter().enumerate() {
        let rows: Vec<String> = t.rows().iter().map(|r| r.to_string()).collect();
        writeln!(out, "tau d={} rows={} {}", i + 1, t.nrows(), rows.join(";")).unwrap();
    }
    out
}

pub fn parse_forest(text: &str) -> Result<Forest> {
    let mut nodes: BTreeMap<usize, (usize, Option<usize>)> = BTreeMap::new();
    for (no, line) in content_lines(text) {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0] != "node" {
            return Err(perr(no, format!("unknown record {:?}", tokens[0])));
        }
        let f = fields(no, &tokens[1..], &["id", "depth", "parent"])?;
        let id = number(no, f[0])?;
        let depth = number(no, f[1])?;
        let parent = match f[2] {
            "none" => None,
            p => Some(number(no, p)?),
        };
        if nodes.insert(id, (depth, parent)).is_some() {
            return Err(perr(no, format!("node {id} given twice")));
        }
    }
    if nodes.keys().copied().ne(0..nodes.len()) {
        return Err(Error::Parse("node ids must be dense from 0".into()));
    }
    let (depth, parent) = nodes.into_values().unzip();
    Forest::new(depth, parent)
}

pub fn serialize_forest(f: &Forest) -> String {
    let mut out = String::new();
    for i in 0..f.len() {
        let parent = f.parent(i).map_or_else(|| "none".to_string(), |p| p.to_string());
        writeln!(out, "node id={i} depth={} parent={parent}", f.depth(i)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const E1: &str = "fanchain n=2\nlevel d=1 dim=1 minus=1\nlevel d=2 dim=2 minus=10\ntau d=1 rows=2 1;0\n";

    #[test]
    fn chain_round_trip() {
        let c = parse_valid_chain(E1).unwrap();
        assert_eq!(serialize_chain(&c), E1);
    }

    #[test]
    fn chain_errors() {
        assert!(matches!(parse_chain(""), Err(Error::Parse(_))));
        assert!(matches!(parse_chain("fanchain n=1\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_chain("fanchain n=1\nlevel d=1 dim=1 minus=2\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_chain("fanchain n=1\nlevel d=1 dim=2 minus=1\n"), Err(Error::Structural(_))));
        let moved = E1.replace("minus=10", "minus=01");
        assert!(parse_chain(&moved).is_ok());
        assert!(matches!(parse_valid_chain(&moved), Err(Error::Structural(_))));
    }

    #[test]
    fn forest_round_trip() {
        let text = "node id=0 depth=1 parent=none\nnode id=1 depth=2 parent=0\nnode id=2 depth=1 parent=none\n";
        let f = parse_forest(text).unwrap();
        assert_eq!(serialize_forest(&f), text);
        assert!(parse_forest("node id=1 depth=1 parent=none\n").is_err());
        assert!(parse_forest("node id=0 depth=2 parent=none\n").is_err());
    }
}
