//! Plain-text input format for the workbench: point configurations, fans
//! and quiver fixtures. The grammar is documented in `docs/format.md`; this
//! module parses and canonically re-emits it (`emit(parse(x))` is the
//! identity on canonical inputs).

use secfan::quiver::{Arrow, GradedQuiver};
use secfan::Int;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// First-error diagnostics with a one-based line number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A lattice point with optional display name and origin marker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputPoint {
    pub coords: Vec<Int>,
    pub name: Option<String>,
    pub origin: bool,
}

/// A configuration-kind input: points (exactly one marked as origin),
/// optional named characters and an optional basis for the character
/// lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigInput {
    /// `true` when written as `kind fan` (rays only, origin implicit).
    pub fan_kind: bool,
    pub rank: usize,
    pub points: Vec<InputPoint>,
    pub characters: BTreeMap<String, Vec<Int>>,
    pub basis: Vec<Vec<Int>>,
}

impl ConfigInput {
    /// Index of the origin point.
    pub fn origin(&self) -> usize {
        self.points.iter().position(|p| p.origin).expect("validated at parse time")
    }

    /// Display names of the non-origin points, in configuration order
    /// (matching the engine's ray order). Unnamed rays fall back to `x<k>`.
    pub fn ray_names(&self) -> Vec<String> {
        self.points
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.origin)
            .enumerate()
            .map(|(k, (_, p))| p.name.clone().unwrap_or_else(|| format!("x{k}")))
            .collect()
    }

    pub fn coordinates(&self) -> Vec<Vec<Int>> {
        self.points.iter().map(|p| p.coords.clone()).collect()
    }
}

/// One term of a linear combination of paths: coefficient and arrow labels
/// in composition order (first label applied last).
pub type TermList = Vec<(i64, Vec<String>)>;

/// A quiver-fixture input: the ambient (possibly dg) quiver with relations
/// and differential, plus an optional cohomology section with splitting
/// data for homotopy transfer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverInput {
    pub vertices: usize,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<TermList>,
    /// Arrow label -> value of the differential.
    pub differential: Vec<(String, TermList)>,
    pub cohomology: Option<CohSection>,
}

/// Splitting data: a second quiver presenting the cohomology, an embedding
/// of its arrows into the ambient quiver, and the homotopy on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohSection {
    pub vertices: usize,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<TermList>,
    /// Cohomology arrow label -> ambient arrow label (identity if absent).
    pub embed: BTreeMap<String, String>,
    /// Ambient path (labels in composition order) -> homotopy value.
    pub homotopy: Vec<(Vec<String>, TermList)>,
}

impl QuiverInput {
    pub fn quiver(&self) -> Result<GradedQuiver, secfan::quiver::QuiverError> {
        build_quiver(self.vertices, &self.arrows, &self.relations)
    }

    pub fn cohomology_quiver(
        &self,
    ) -> Result<Option<GradedQuiver>, secfan::quiver::QuiverError> {
        match &self.cohomology {
            None => Ok(None),
            Some(c) => build_quiver(c.vertices, &c.arrows, &c.relations).map(Some),
        }
    }
}

fn build_quiver(
    vertices: usize,
    arrows: &[Arrow],
    relations: &[TermList],
) -> Result<GradedQuiver, secfan::quiver::QuiverError> {
    let mut q = GradedQuiver::new(vertices, arrows.to_vec())?;
    for r in relations {
        let terms: Vec<(i64, Vec<&str>)> = r
            .iter()
            .map(|(c, ls)| (*c, ls.iter().map(String::as_str).collect()))
            .collect();
        let borrowed: Vec<(i64, &[&str])> =
            terms.iter().map(|(c, ls)| (*c, ls.as_slice())).collect();
        q.relate(&borrowed)?;
    }
    Ok(q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WorkbenchInput {
    Configuration(ConfigInput),
    Quiver(QuiverInput),
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

fn parse_int(line: usize, tok: &str) -> Result<Int, ParseError> {
    tok.parse::<Int>().map_err(|_| err(line, format!("expected an integer, got `{tok}`")))
}

fn parse_i64(line: usize, tok: &str) -> Result<i64, ParseError> {
    tok.parse::<i64>().map_err(|_| err(line, format!("expected an integer, got `{tok}`")))
}

fn parse_usize(line: usize, tok: &str) -> Result<usize, ParseError> {
    tok.parse::<usize>()
        .map_err(|_| err(line, format!("expected a nonnegative integer, got `{tok}`")))
}

/// Split `terms` written as `coef label... [, coef label...]*`.
fn parse_terms(line: usize, toks: &[&str]) -> Result<TermList, ParseError> {
    let mut out = TermList::new();
    for group in toks.split(|t| *t == ",") {
        if group.is_empty() {
            return Err(err(line, "empty term in linear combination"));
        }
        let coef = parse_i64(line, group[0])?;
        if group.len() < 2 {
            return Err(err(line, "term needs at least one arrow label"));
        }
        let labels = group[1..].iter().map(|s| (*s).to_string()).collect();
        out.push((coef, labels));
    }
    Ok(out)
}

fn gcd_all(v: &[Int]) -> Int {
    use num_integer::Integer as _;
    let mut g = Int::from(0);
    for x in v {
        g = g.gcd(x);
    }
    g
}

/// Parse the documented plain-text format; the first error wins.
pub fn parse_input(text: &str) -> Result<WorkbenchInput, ParseError> {
    // tokenized non-empty lines with their one-based numbers
    let mut lines: Vec<(usize, Vec<&str>)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        if !toks.is_empty() {
            lines.push((k + 1, toks));
        }
    }
    let Some((first_line, first)) = lines.first() else {
        return Err(err(1, "empty input: expected a `kind` line"));
    };
    if first[0] != "kind" || first.len() != 2 {
        return Err(err(*first_line, "first line must be `kind <configuration|fan|quiver-fixture>`"));
    }
    match first[1] {
        "configuration" => parse_config(&lines[1..], false),
        "fan" => parse_config(&lines[1..], true),
        "quiver-fixture" => parse_quiver(&lines[1..]),
        other => Err(err(*first_line, format!("unknown kind `{other}`"))),
    }
}

fn parse_config(lines: &[(usize, Vec<&str>)], fan_kind: bool) -> Result<WorkbenchInput, ParseError> {
    let mut rank: Option<usize> = None;
    let mut points: Vec<InputPoint> = Vec::new();
    let mut characters: BTreeMap<String, Vec<Int>> = BTreeMap::new();
    let mut basis: Vec<Vec<Int>> = Vec::new();
    let point_kw = if fan_kind { "ray" } else { "point" };
    for (ln, toks) in lines {
        let ln = *ln;
        match toks[0] {
            "rank" => {
                if toks.len() != 2 {
                    return Err(err(ln, "usage: rank <dimension>"));
                }
                rank = Some(parse_usize(ln, toks[1])?);
            }
            kw if kw == point_kw => {
                let r = rank.ok_or_else(|| err(ln, "`rank` must come before points"))?;
                if toks.len() < r + 1 {
                    return Err(err(ln, format!("{point_kw} needs {r} coordinates")));
                }
                let coords: Vec<Int> = toks[1..=r]
                    .iter()
                    .map(|t| parse_int(ln, t))
                    .collect::<Result<_, _>>()?;
                let mut name = None;
                let mut origin = false;
                let mut rest = &toks[r + 1..];
                while !rest.is_empty() {
                    match rest[0] {
                        "origin" if !fan_kind => {
                            origin = true;
                            rest = &rest[1..];
                        }
                        "name" if rest.len() >= 2 => {
                            name = Some(rest[1].to_string());
                            rest = &rest[2..];
                        }
                        other => {
                            return Err(err(ln, format!("unexpected token `{other}`")));
                        }
                    }
                }
                points.push(InputPoint { coords, name, origin });
            }
            "character" => {
                let r = rank_of_characters(&points, rank, ln)?;
                if toks.len() != r + 2 {
                    return Err(err(ln, format!("character needs a name and {r} entries")));
                }
                let vals: Vec<Int> = toks[2..]
                    .iter()
                    .map(|t| parse_int(ln, t))
                    .collect::<Result<_, _>>()?;
                if characters.insert(toks[1].to_string(), vals).is_some() {
                    return Err(err(ln, format!("duplicate character `{}`", toks[1])));
                }
            }
            "basis" => {
                let r = rank_of_characters(&points, rank, ln)?;
                if toks.len() != r + 1 {
                    return Err(err(ln, format!("basis row needs {r} entries")));
                }
                let row: Vec<Int> = toks[1..]
                    .iter()
                    .map(|t| parse_int(ln, t))
                    .collect::<Result<_, _>>()?;
                basis.push(row);
            }
            other => return Err(err(ln, format!("unknown directive `{other}`"))),
        }
    }
    let Some(rank) = rank else {
        return Err(err(1, "missing `rank` line"));
    };
    if fan_kind {
        // implicit origin at the lattice origin, in front
        points.insert(
            0,
            InputPoint { coords: vec![Int::from(0); rank], name: None, origin: true },
        );
    }
    let origins = points.iter().filter(|p| p.origin).count();
    if origins != 1 {
        return Err(err(1, format!("expected exactly one origin point, found {origins}")));
    }
    let origin = points.iter().position(|p| p.origin).expect("counted above");
    for (k, p) in points.iter().enumerate() {
        if k == origin {
            continue;
        }
        let shifted: Vec<Int> =
            p.coords.iter().zip(&points[origin].coords).map(|(a, b)| a - b).collect();
        let g = gcd_all(&shifted);
        if g != Int::from(1) {
            let label = p.name.clone().unwrap_or_else(|| format!("#{k}"));
            return Err(err(1, format!("ray {label} is not primitive")));
        }
    }
    Ok(WorkbenchInput::Configuration(ConfigInput { fan_kind, rank, points, characters, basis }))
}

fn rank_of_characters(
    points: &[InputPoint],
    rank: Option<usize>,
    ln: usize,
) -> Result<usize, ParseError> {
    // characters live in R^A before projection; but for usability they are
    // given in character coordinates, whose rank is |points| - 1 - dim for a
    // full configuration. Instead of guessing we require points first and
    // use the divisor-sequence rank computed later; here we only need a
    // token count, so characters are given with (#points - 1 - rank) ... to
    // keep parsing local we require them in character coordinates of length
    // (#non-origin points - rank).
    let r = rank.ok_or_else(|| err(ln, "`rank` must come before this line"))?;
    let nonorigin = points.iter().filter(|p| !p.origin).count();
    if nonorigin <= r {
        return Err(err(ln, "points must come before characters"));
    }
    Ok(nonorigin - r)
}

fn parse_quiver(lines: &[(usize, Vec<&str>)]) -> Result<WorkbenchInput, ParseError> {
    let mut vertices: Option<usize> = None;
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut relations: Vec<TermList> = Vec::new();
    let mut differential: Vec<(String, TermList)> = Vec::new();
    let mut coh: Option<CohSection> = None;
    let mut in_coh = false;
    for (ln, toks) in lines {
        let ln = *ln;
        match toks[0] {
            "cohomology" => {
                if in_coh {
                    return Err(err(ln, "duplicate `cohomology` section"));
                }
                in_coh = true;
                coh = Some(CohSection {
                    vertices: 0,
                    arrows: Vec::new(),
                    relations: Vec::new(),
                    embed: BTreeMap::new(),
                    homotopy: Vec::new(),
                });
            }
            "vertices" => {
                if toks.len() != 2 {
                    return Err(err(ln, "usage: vertices <count>"));
                }
                let v = parse_usize(ln, toks[1])?;
                if in_coh {
                    coh.as_mut().expect("section open").vertices = v;
                } else {
                    vertices = Some(v);
                }
            }
            "arrow" => {
                if toks.len() != 5 {
                    return Err(err(ln, "usage: arrow <label> <source> <target> <degree>"));
                }
                let a = Arrow {
                    label: toks[1].to_string(),
                    source: parse_usize(ln, toks[2])?,
                    target: parse_usize(ln, toks[3])?,
                    degree: parse_i64(ln, toks[4])?,
                };
                let pool = if in_coh {
                    &mut coh.as_mut().expect("section open").arrows
                } else {
                    &mut arrows
                };
                if pool.iter().any(|b| b.label == a.label) {
                    return Err(err(ln, format!("duplicate arrow label `{}`", a.label)));
                }
                pool.push(a);
            }
            "relation" => {
                let terms = parse_terms(ln, &toks[1..])?;
                if in_coh {
                    coh.as_mut().expect("section open").relations.push(terms);
                } else {
                    relations.push(terms);
                }
            }
            "differential" => {
                if in_coh {
                    return Err(err(ln, "cohomology carries no differential"));
                }
                let eq = toks.iter().position(|t| *t == "=").ok_or_else(|| {
                    err(ln, "usage: differential <label> = <coef> <labels...>")
                })?;
                if eq != 2 {
                    return Err(err(ln, "differential takes a single arrow label"));
                }
                differential.push((toks[1].to_string(), parse_terms(ln, &toks[eq + 1..])?));
            }
            "embed" => {
                if !in_coh || toks.len() != 3 {
                    return Err(err(ln, "usage (in cohomology section): embed <coh-label> <ambient-label>"));
                }
                coh.as_mut()
                    .expect("section open")
                    .embed
                    .insert(toks[1].to_string(), toks[2].to_string());
            }
            "homotopy" => {
                if !in_coh {
                    return Err(err(ln, "`homotopy` belongs to the cohomology section"));
                }
                let eq = toks.iter().position(|t| *t == "=").ok_or_else(|| {
                    err(ln, "usage: homotopy <labels...> = <coef> <labels...>")
                })?;
                let key: Vec<String> = toks[1..eq].iter().map(|s| (*s).to_string()).collect();
                if key.is_empty() {
                    return Err(err(ln, "homotopy needs a nonempty key path"));
                }
                let val = parse_terms(ln, &toks[eq + 1..])?;
                coh.as_mut().expect("section open").homotopy.push((key, val));
            }
            other => return Err(err(ln, format!("unknown directive `{other}`"))),
        }
    }
    let Some(vertices) = vertices else {
        return Err(err(1, "missing `vertices` line"));
    };
    Ok(WorkbenchInput::Quiver(QuiverInput {
        vertices,
        arrows,
        relations,
        differential,
        cohomology: coh,
    }))
}

fn emit_terms(out: &mut String, terms: &TermList) {
    let mut first = true;
    for (c, labels) in terms {
        if !first {
            out.push_str(" ,");
        }
        first = false;
        let _ = write!(out, " {c}");
        for l in labels {
            let _ = write!(out, " {l}");
        }
    }
}

/// Canonical serialization; `parse_input(emit(x)) == Ok(x)` up to the
/// implicit-origin normalization of fan-kind inputs.
pub fn emit(input: &WorkbenchInput) -> String {
    let mut out = String::new();
    match input {
        WorkbenchInput::Configuration(c) => {
            out.push_str(if c.fan_kind { "kind fan\n" } else { "kind configuration\n" });
            let _ = writeln!(out, "rank {}", c.rank);
            for (k, p) in c.points.iter().enumerate() {
                if c.fan_kind && k == 0 {
                    continue; // implicit origin
                }
                out.push_str(if c.fan_kind { "ray" } else { "point" });
                for x in &p.coords {
                    let _ = write!(out, " {x}");
                }
                if p.origin && !c.fan_kind {
                    out.push_str(" origin");
                }
                if let Some(n) = &p.name {
                    let _ = write!(out, " name {n}");
                }
                out.push('\n');
            }
            for (name, vals) in &c.characters {
                let _ = write!(out, "character {name}");
                for v in vals {
                    let _ = write!(out, " {v}");
                }
                out.push('\n');
            }
            for row in &c.basis {
                out.push_str("basis");
                for v in row {
                    let _ = write!(out, " {v}");
                }
                out.push('\n');
            }
        }
        WorkbenchInput::Quiver(q) => {
            out.push_str("kind quiver-fixture\n");
            let _ = writeln!(out, "vertices {}", q.vertices);
            for a in &q.arrows {
                let _ = writeln!(out, "arrow {} {} {} {}", a.label, a.source, a.target, a.degree);
            }
            for r in &q.relations {
                out.push_str("relation");
                emit_terms(&mut out, r);
                out.push('\n');
            }
            for (label, terms) in &q.differential {
                let _ = write!(out, "differential {label} =");
                emit_terms(&mut out, terms);
                out.push('\n');
            }
            if let Some(c) = &q.cohomology {
                out.push_str("cohomology\n");
                let _ = writeln!(out, "vertices {}", c.vertices);
                for a in &c.arrows {
                    let _ = writeln!(
                        out,
                        "arrow {} {} {} {}",
                        a.label, a.source, a.target, a.degree
                    );
                }
                for r in &c.relations {
                    out.push_str("relation");
                    emit_terms(&mut out, r);
                    out.push('\n');
                }
                for (from, to) in &c.embed {
                    let _ = writeln!(out, "embed {from} {to}");
                }
                for (key, val) in &c.homotopy {
                    out.push_str("homotopy");
                    for l in key {
                        let _ = write!(out, " {l}");
                    }
                    out.push_str(" =");
                    emit_terms(&mut out, val);
                    out.push('\n');
                }
            }
        }
    }
    out
}
