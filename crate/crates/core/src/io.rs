//! Text formats shared by the library tests and the command-line front end.
//!
//! All formats are line oriented; blank lines and lines starting with `#`
//! are ignored. Vertices are 1-based in files and shifted to the crate's
//! 0-based ids on parse.
//!
//! - graph: `p <n> <m>` followed by `m` lines `e <u> <v>`, optionally a
//!   `b <c1> <c2> ...` line naming the concept centers;
//! - teaching map: one line `t <center>: <v1> <v2> ...` per concept (an
//!   empty example list is legal);
//! - treedepth decomposition: one line `d <vertex> <parent>` per vertex,
//!   parent `0` marking a root;
//! - CNF: DIMACS (`p cnf <vars> <clauses>`, 0-terminated clause lines);
//! - square arrangement: one line `s <x> <y>` per unit square, with
//!   rational (`p/q`) or decimal coordinates;
//! - vertex list (covers, explicit center lists): whitespace-separated
//!   1-based ids;
//! - concept list: one concept per line, space-separated 1-based elements.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::Error;
use crate::gadgets::CnfFormula;
use crate::graph::Graph;
use crate::squares::SquareArrangement;
use crate::teaching::{ConceptClass, TeachingMap};
use crate::treedepth::RootedForest;
use crate::VertexSet;

/// A graph file together with the optional `b` line of concept centers.
#[derive(Clone, Debug)]
pub struct GraphFile {
    pub graph: Graph,
    pub centers: Option<Vec<usize>>,
}

fn meaningful_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_id(token: &str, line: usize, n: usize) -> Result<usize, Error> {
    let raw: usize = token
        .parse()
        .map_err(|_| Error::parse(line, format!("expected a vertex id, found `{token}`")))?;
    if raw == 0 || raw > n {
        return Err(Error::parse(line, format!("vertex {raw} out of range 1..={n}")));
    }
    Ok(raw - 1)
}

pub fn parse_graph(text: &str) -> Result<GraphFile, Error> {
    let mut graph: Option<Graph> = None;
    let mut declared_edges = 0usize;
    let mut seen_edges = 0usize;
    let mut centers: Option<Vec<usize>> = None;
    for (lineno, line) in meaningful_lines(text) {
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("p") => {
                if graph.is_some() {
                    return Err(Error::parse(lineno, "duplicate `p` line"));
                }
                let n: usize = tok
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::parse(lineno, "`p` needs a vertex count"))?;
                declared_edges = tok
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::parse(lineno, "`p` needs an edge count"))?;
                graph = Some(Graph::new(n));
            }
            Some("e") => {
                let g = graph
                    .as_mut()
                    .ok_or_else(|| Error::parse(lineno, "`e` before the `p` line"))?;
                let n = g.vertex_count();
                let u = parse_id(
                    tok.next().ok_or_else(|| Error::parse(lineno, "`e` needs two endpoints"))?,
                    lineno,
                    n,
                )?;
                let v = parse_id(
                    tok.next().ok_or_else(|| Error::parse(lineno, "`e` needs two endpoints"))?,
                    lineno,
                    n,
                )?;
                g.add_edge(u, v).map_err(|e| Error::parse(lineno, e.to_string()))?;
                seen_edges += 1;
            }
            Some("b") => {
                let g = graph
                    .as_ref()
                    .ok_or_else(|| Error::parse(lineno, "`b` before the `p` line"))?;
                let list = centers.get_or_insert_with(Vec::new);
                for t in tok {
                    list.push(parse_id(t, lineno, g.vertex_count())?);
                }
            }
            Some(other) => {
                return Err(Error::parse(lineno, format!("unknown record `{other}`")));
            }
            None => unreachable!("blank lines are filtered"),
        }
    }
    let graph = graph.ok_or_else(|| Error::parse(0, "missing `p` line"))?;
    if seen_edges != declared_edges {
        return Err(Error::parse(
            0,
            format!("`p` declares {declared_edges} edges but {seen_edges} were listed"),
        ));
    }
    Ok(GraphFile { graph, centers })
}

pub fn emit_graph(g: &Graph, centers: Option<&[usize]>) -> String {
    let mut out = format!("p {} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    if let Some(cs) = centers {
        out.push('b');
        for &c in cs {
            out.push_str(&format!(" {}", c + 1));
        }
        out.push('\n');
    }
    out
}

/// Parses `t <center>: <v1> ...` lines into a map over `class`. Every
/// concept must appear exactly once.
pub fn parse_teaching_map(text: &str, class: &ConceptClass) -> Result<TeachingMap, Error> {
    let n = class.universe();
    let mut map = TeachingMap::empty_for(class);
    let mut seen: Vec<usize> = Vec::new();
    for (lineno, line) in meaningful_lines(text) {
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("t") => {
                let head = tok
                    .next()
                    .ok_or_else(|| Error::parse(lineno, "`t` needs a concept center"))?;
                let head = head
                    .strip_suffix(':')
                    .ok_or_else(|| Error::parse(lineno, "expected `t <center>:`"))?;
                let center = parse_id(head, lineno, n)?;
                if class.index_of_canonical(center).is_none() {
                    return Err(Error::MapUnknownConcept { center });
                }
                if seen.contains(&center) {
                    return Err(Error::parse(lineno, format!("duplicate concept {}", center + 1)));
                }
                seen.push(center);
                let mut examples = VertexSet::empty(n);
                for t in tok {
                    examples.insert(parse_id(t, lineno, n)?);
                }
                map.assign(center, examples)?;
            }
            Some(other) => return Err(Error::parse(lineno, format!("unknown record `{other}`"))),
            None => unreachable!(),
        }
    }
    for c in class.canonical_centers() {
        if !seen.contains(&c) {
            return Err(Error::MapMissingConcept { center: c });
        }
    }
    Ok(map)
}

pub fn emit_teaching_map(map: &TeachingMap) -> String {
    let mut out = String::new();
    for (center, set) in map.iter() {
        out.push_str(&format!("t {}:", center + 1));
        for v in set.iter() {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    out
}

/// Parses `d <vertex> <parent>` lines; every vertex of `0..n` must appear
/// exactly once, with parent 0 marking a root.
pub fn parse_decomposition(text: &str, n: usize) -> Result<RootedForest, Error> {
    let mut parent: Vec<Option<Option<usize>>> = vec![None; n];
    for (lineno, line) in meaningful_lines(text) {
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("d") => {
                let v = parse_id(
                    tok.next().ok_or_else(|| Error::parse(lineno, "`d` needs a vertex"))?,
                    lineno,
                    n,
                )?;
                let p_raw: usize = tok
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::parse(lineno, "`d` needs a parent (0 = root)"))?;
                if p_raw > n {
                    return Err(Error::parse(lineno, format!("parent {p_raw} out of range")));
                }
                if parent[v].is_some() {
                    return Err(Error::parse(lineno, format!("duplicate vertex {}", v + 1)));
                }
                parent[v] = Some(if p_raw == 0 { None } else { Some(p_raw - 1) });
            }
            Some(other) => return Err(Error::parse(lineno, format!("unknown record `{other}`"))),
            None => unreachable!(),
        }
    }
    let mut resolved = Vec::with_capacity(n);
    for (v, p) in parent.into_iter().enumerate() {
        resolved.push(p.ok_or_else(|| {
            Error::parse(0, format!("vertex {} missing from the decomposition", v + 1))
        })?);
    }
    Ok(RootedForest::from_parents(resolved))
}

pub fn emit_decomposition(forest: &RootedForest) -> String {
    let mut out = String::new();
    for v in 0..forest.vertex_count() {
        let p = forest.parent(v).map_or(0, |p| p + 1);
        out.push_str(&format!("d {} {}\n", v + 1, p));
    }
    out
}

/// Parses DIMACS CNF. Clauses are 0-terminated and may span lines.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, Error> {
    let mut num_vars: Option<usize> = None;
    let mut declared_clauses = 0usize;
    let mut literals: Vec<i64> = Vec::new();
    for (lineno, line) in meaningful_lines(text) {
        if line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let mut tok = rest.split_whitespace();
            if tok.next() != Some("cnf") {
                return Err(Error::parse(lineno, "expected `p cnf <vars> <clauses>`"));
            }
            num_vars = Some(
                tok.next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::parse(lineno, "missing variable count"))?,
            );
            declared_clauses = tok
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::parse(lineno, "missing clause count"))?;
            continue;
        }
        for t in line.split_whitespace() {
            let lit: i64 = t
                .parse()
                .map_err(|_| Error::parse(lineno, format!("expected a literal, found `{t}`")))?;
            literals.push(lit);
        }
    }
    let num_vars = num_vars.ok_or_else(|| Error::parse(0, "missing `p cnf` line"))?;
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut current = Vec::new();
    for lit in literals {
        if lit == 0 {
            clauses.push(std::mem::take(&mut current));
        } else {
            current.push(lit);
        }
    }
    if !current.is_empty() {
        return Err(Error::parse(0, "last clause is not 0-terminated"));
    }
    if clauses.len() != declared_clauses {
        return Err(Error::parse(
            0,
            format!("`p cnf` declares {declared_clauses} clauses, found {}", clauses.len()),
        ));
    }
    CnfFormula::new(num_vars, clauses)
}

pub fn emit_dimacs(phi: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", phi.num_vars(), phi.clauses().len());
    for clause in phi.clauses() {
        for lit in clause {
            out.push_str(&format!("{lit} "));
        }
        out.push_str("0\n");
    }
    out
}

/// Parses a rational literal: `p/q`, a decimal such as `-1.25`, or an
/// integer.
pub fn parse_rational(token: &str) -> Option<BigRational> {
    if let Some((num, den)) = token.split_once('/') {
        let num: BigInt = num.parse().ok()?;
        let den: BigInt = den.parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    if let Some((int, frac)) = token.split_once('.') {
        let negative = int.starts_with('-');
        let int_digits = int.strip_prefix(['-', '+']).unwrap_or(int);
        let int_digits = if int_digits.is_empty() { "0" } else { int_digits };
        if frac.is_empty()
            || !frac.bytes().all(|b| b.is_ascii_digit())
            || !int_digits.bytes().all(|b| b.is_ascii_digit())
        {
            return None;
        }
        let int_val: BigInt = int_digits.parse().ok()?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_val: BigInt = frac.parse().ok()?;
        let magnitude = int_val * &scale + frac_val;
        let num = if negative { -magnitude } else { magnitude };
        return Some(BigRational::new(num, scale));
    }
    let int: BigInt = token.parse().ok()?;
    Some(BigRational::from_integer(int))
}

pub fn parse_arrangement(text: &str) -> Result<SquareArrangement, Error> {
    let mut centers = Vec::new();
    for (lineno, line) in meaningful_lines(text) {
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("s") => {
                let x = tok
                    .next()
                    .and_then(parse_rational)
                    .ok_or_else(|| Error::parse(lineno, "`s` needs rational x and y"))?;
                let y = tok
                    .next()
                    .and_then(parse_rational)
                    .ok_or_else(|| Error::parse(lineno, "`s` needs rational x and y"))?;
                centers.push((x, y));
            }
            Some(other) => return Err(Error::parse(lineno, format!("unknown record `{other}`"))),
            None => unreachable!(),
        }
    }
    Ok(SquareArrangement::new(centers))
}

pub fn emit_arrangement(arr: &SquareArrangement) -> String {
    let mut out = String::new();
    for (x, y) in arr.centers() {
        out.push_str(&format!("s {x} {y}\n"));
    }
    out
}

/// Whitespace-separated 1-based vertex ids (covers, explicit center lists).
pub fn parse_vertex_list(text: &str, n: usize) -> Result<Vec<usize>, Error> {
    let mut out = Vec::new();
    for (lineno, line) in meaningful_lines(text) {
        for t in line.split_whitespace() {
            out.push(parse_id(t, lineno, n)?);
        }
    }
    Ok(out)
}

/// One concept per line: space-separated 1-based elements of the universe.
/// A line consisting of just `-` denotes the empty concept.
pub fn parse_concept_list(text: &str, universe: usize) -> Result<Vec<Vec<usize>>, Error> {
    let mut out = Vec::new();
    for (lineno, line) in meaningful_lines(text) {
        if line == "-" {
            out.push(Vec::new());
            continue;
        }
        let mut concept = Vec::new();
        for t in line.split_whitespace() {
            concept.push(parse_id(t, lineno, universe)?);
        }
        out.push(concept);
    }
    Ok(out)
}
