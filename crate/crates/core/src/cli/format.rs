//! Line-oriented instance files.
//!
//! ```text
//! # comment
//! instance K
//! elements -- -1 -2 1- 2- 12 21
//! row -- : -- -- -- -- -- -- --
//! ...
//! points 1 2
//! map 12 : 1->1 2->2
//! class -- -1 ...
//! arrows (1,1) (1,2) (2,1) (2,2)
//! arrow (1,2) : (2,2) -> (1,1)
//! compose (1,2) (2,1) = (1,1)
//! anchor 1 : (1,1)
//! act (2,1) 1 = 2
//! ```
//!
//! Elements missing a `map` line act by the empty map. Labels may not
//! contain whitespace, `:`, `=` or `->`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::dynamics::{FiniteSpace, PartialAction};
use crate::gact::GroupoidAction;
use crate::germ::FiniteGroupoid;
use crate::isg::{Congruence, InverseSemigroup, PartialBijection};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// One named instance; any combination of parts may be present.
#[derive(Debug, Clone, Default)]
pub struct Instance {
    pub name: String,
    pub semigroup: Option<InverseSemigroup>,
    pub space: Option<FiniteSpace>,
    pub action: Option<PartialAction>,
    pub congruence: Option<Congruence>,
    pub groupoid: Option<FiniteGroupoid>,
    pub gaction: Option<GroupoidAction>,
}

impl Instance {
    pub fn named(name: &str) -> Self {
        Instance { name: name.to_string(), ..Default::default() }
    }

    pub fn with_semigroup(mut self, s: InverseSemigroup) -> Self {
        self.semigroup = Some(s);
        self
    }

    pub fn with_action(mut self, a: PartialAction) -> Self {
        self.semigroup = Some(a.semigroup().clone());
        self.space = Some(a.space().clone());
        self.action = Some(a);
        self
    }

    pub fn with_congruence(mut self, c: Congruence) -> Self {
        self.congruence = Some(c);
        self
    }

    pub fn with_groupoid(mut self, g: FiniteGroupoid) -> Self {
        self.groupoid = Some(g);
        self
    }

    pub fn with_gaction(mut self, ga: GroupoidAction) -> Self {
        self.groupoid = Some(ga.groupoid().clone());
        self.space = Some(ga.space().clone());
        self.gaction = Some(ga);
        self
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn err(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError { line: self.number, column, message: message.into() }
    }

    fn at(&self, i: usize, message: impl Into<String>) -> ParseError {
        let column =
            self.tokens.get(i).map_or_else(|| self.tokens.last().map_or(1, |t| t.column + t.text.len()), |t| t.column);
        self.err(column, message)
    }

    /// Splits `head ... : rest` at the separator token.
    fn split(&self, sep: &str) -> Result<(&[Token<'a>], &[Token<'a>]), ParseError> {
        let i = self
            .tokens
            .iter()
            .position(|t| t.text == sep)
            .ok_or_else(|| self.at(self.tokens.len(), format!("expected `{sep}`")))?;
        Ok((&self.tokens[1..i], &self.tokens[i + 1..]))
    }
}

fn tokenize(number: usize, raw: &str) -> Line<'_> {
    let content = raw.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                tokens.push(Token { text: &content[s..i], column: content[..s].chars().count() + 1 });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    Line { number, tokens }
}

fn lookup(labels: &[String], tok: &Token, what: &str, line: &Line) -> Result<usize, ParseError> {
    labels
        .iter()
        .position(|l| l == tok.text)
        .ok_or_else(|| line.err(tok.column, format!("unknown {what} `{}`", tok.text)))
}

#[derive(Default)]
struct Draft<'a> {
    name: String,
    start: usize,
    elements: Option<(usize, Vec<String>)>,
    rows: Vec<Line<'a>>,
    points: Option<(usize, Vec<String>)>,
    maps: Vec<Line<'a>>,
    classes: Vec<Line<'a>>,
    arrows: Option<(usize, Vec<String>)>,
    arrow_lines: Vec<Line<'a>>,
    compose: Vec<Line<'a>>,
    anchors: Vec<Line<'a>>,
    acts: Vec<Line<'a>>,
}

fn labels_once(slot: &mut Option<(usize, Vec<String>)>, line: &Line) -> Result<(), ParseError> {
    if slot.is_some() {
        return Err(line.at(0, format!("second `{}` line", line.tokens[0].text)));
    }
    *slot = Some((line.number, line.tokens[1..].iter().map(|t| t.text.to_string()).collect()));
    Ok(())
}

fn invalid(line: usize, message: impl std::fmt::Display) -> ParseError {
    ParseError { line, column: 1, message: message.to_string() }
}

impl<'a> Draft<'a> {
    fn build(self) -> Result<Instance, ParseError> {
        let mut inst = Instance::named(&self.name);
        if let Some((ln, labels)) = &self.elements {
            let mut table = vec![None; labels.len()];
            for row in &self.rows {
                let (head, rest) = row.split(":")?;
                if head.len() != 1 {
                    return Err(row.at(1, "row needs exactly one element before `:`"));
                }
                let a = lookup(labels, &head[0], "element", row)?;
                if table[a].is_some() {
                    return Err(row.at(1, format!("second row for `{}`", head[0].text)));
                }
                if rest.len() != labels.len() {
                    return Err(
                        row.at(row.tokens.len(), format!("row has {} entries, expected {}", rest.len(), labels.len()))
                    );
                }
                table[a] = Some(rest.iter().map(|t| lookup(labels, t, "element", row)).collect::<Result<Vec<_>, _>>()?);
            }
            if let Some(missing) = table.iter().position(Option::is_none) {
                return Err(invalid(*ln, format!("missing row for `{}`", labels[missing])));
            }
            let table = table.into_iter().map(Option::unwrap).collect();
            let s = InverseSemigroup::from_table(table, Some(labels.clone())).map_err(|e| invalid(*ln, e))?;
            inst.semigroup = Some(s);
        } else if let Some(row) = self.rows.first() {
            return Err(row.at(0, "`row` before `elements`"));
        }
        if let Some((ln, labels)) = &self.points {
            inst.space = Some(FiniteSpace::new(labels.clone()).map_err(|e| invalid(*ln, e))?);
        }
        if !self.maps.is_empty() {
            let s = inst.semigroup.clone().ok_or_else(|| self.maps[0].at(0, "`map` needs `elements`"))?;
            let sp = inst.space.clone().ok_or_else(|| self.maps[0].at(0, "`map` needs `points`"))?;
            let mut theta: Vec<Option<PartialBijection>> = vec![None; s.len()];
            for line in &self.maps {
                let (head, rest) = line.split(":")?;
                if head.len() != 1 {
                    return Err(line.at(1, "map needs exactly one element before `:`"));
                }
                let a = lookup(s.labels(), &head[0], "element", line)?;
                if theta[a].is_some() {
                    return Err(line.at(1, format!("second map for `{}`", head[0].text)));
                }
                let mut pairs = Vec::new();
                for t in rest {
                    let (x, y) = t.text.split_once("->").ok_or_else(|| line.err(t.column, "expected `a->b`"))?;
                    let find =
                        |p: &str| sp.index_of(p).ok_or_else(|| line.err(t.column, format!("unknown point `{p}`")));
                    pairs.push((find(x)?, find(y)?));
                }
                theta[a] = Some(
                    PartialBijection::from_pairs(sp.len(), &pairs)
                        .ok_or_else(|| line.at(2, "map is not a partial bijection"))?,
                );
            }
            let theta = theta.into_iter().map(|m| m.unwrap_or_else(|| PartialBijection::empty(sp.len()))).collect();
            let a = PartialAction::validate(s, sp, theta).map_err(|e| invalid(self.maps[0].number, e))?;
            inst.action = Some(a);
        }
        if !self.classes.is_empty() {
            let s = inst.semigroup.clone().ok_or_else(|| self.classes[0].at(0, "`class` needs `elements`"))?;
            let mut classes = Vec::new();
            for line in &self.classes {
                classes.push(
                    line.tokens[1..]
                        .iter()
                        .map(|t| lookup(s.labels(), t, "element", line))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
            let c = Congruence::from_classes(&s, classes).map_err(|e| invalid(self.classes[0].number, e))?;
            inst.congruence = Some(c);
        }
        if let Some((ln, labels)) = &self.arrows {
            let n = labels.len();
            let (mut d, mut r) = (vec![None; n], vec![None; n]);
            for line in &self.arrow_lines {
                let (head, rest) = line.split(":")?;
                if head.len() != 1 || rest.len() != 3 || rest[1].text != "->" {
                    return Err(line.at(1, "expected `arrow <x> : <d> -> <r>`"));
                }
                let x = lookup(labels, &head[0], "arrow", line)?;
                if d[x].is_some() {
                    return Err(line.at(1, format!("second arrow line for `{}`", head[0].text)));
                }
                d[x] = Some(lookup(labels, &rest[0], "arrow", line)?);
                r[x] = Some(lookup(labels, &rest[2], "arrow", line)?);
            }
            if let Some(x) = d.iter().position(Option::is_none) {
                return Err(invalid(*ln, format!("missing arrow line for `{}`", labels[x])));
            }
            let mut products = Vec::new();
            for line in &self.compose {
                let (head, rest) = line.split("=")?;
                if head.len() != 2 || rest.len() != 1 {
                    return Err(line.at(1, "expected `compose <x> <y> = <z>`"));
                }
                products.push((
                    lookup(labels, &head[0], "arrow", line)?,
                    lookup(labels, &head[1], "arrow", line)?,
                    lookup(labels, &rest[0], "arrow", line)?,
                ));
            }
            let g = FiniteGroupoid::validate(
                labels.clone(),
                d.into_iter().map(Option::unwrap).collect(),
                r.into_iter().map(Option::unwrap).collect(),
                &products,
            )
            .map_err(|e| invalid(*ln, e))?;
            inst.groupoid = Some(g);
        } else if let Some(line) = self.arrow_lines.first().or(self.compose.first()) {
            return Err(line.at(0, "groupoid lines before `arrows`"));
        }
        if !self.anchors.is_empty() {
            let g = inst.groupoid.clone().ok_or_else(|| self.anchors[0].at(0, "`anchor` needs `arrows`"))?;
            let sp = inst.space.clone().ok_or_else(|| self.anchors[0].at(0, "`anchor` needs `points`"))?;
            let mut anchor = vec![None; sp.len()];
            for line in &self.anchors {
                let (head, rest) = line.split(":")?;
                if head.len() != 1 || rest.len() != 1 {
                    return Err(line.at(1, "expected `anchor <point> : <unit>`"));
                }
                let p = lookup(sp.labels(), &head[0], "point", line)?;
                anchor[p] = Some(lookup(g.labels(), &rest[0], "arrow", line)?);
            }
            if let Some(p) = anchor.iter().position(Option::is_none) {
                return Err(invalid(self.anchors[0].number, format!("missing anchor for `{}`", sp.label(p))));
            }
            let mut act = Vec::new();
            for line in &self.acts {
                let (head, rest) = line.split("=")?;
                if head.len() != 2 || rest.len() != 1 {
                    return Err(line.at(1, "expected `act <arrow> <point> = <point>`"));
                }
                act.push((
                    lookup(g.labels(), &head[0], "arrow", line)?,
                    lookup(sp.labels(), &head[1], "point", line)?,
                    lookup(sp.labels(), &rest[0], "point", line)?,
                ));
            }
            let ga = GroupoidAction::validate(g, sp, anchor.into_iter().map(Option::unwrap).collect(), &act)
                .map_err(|e| invalid(self.anchors[0].number, e))?;
            inst.gaction = Some(ga);
        } else if let Some(line) = self.acts.first() {
            return Err(line.at(0, "`act` without `anchor`"));
        }
        if inst.semigroup.is_none() && inst.groupoid.is_none() {
            return Err(invalid(self.start, format!("instance `{}` has no semigroup and no groupoid", self.name)));
        }
        Ok(inst)
    }
}

/// Parses every instance in `text`. Lines before the first `instance`
/// line belong to an instance named `main`.
pub fn parse(text: &str) -> Result<Vec<Instance>, ParseError> {
    let mut out = Vec::new();
    let mut draft: Option<Draft> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = tokenize(i + 1, raw);
        let Some(first) = line.tokens.first() else { continue };
        if first.text == "instance" {
            if line.tokens.len() != 2 {
                return Err(line.at(1, "expected `instance <name>`"));
            }
            if let Some(d) = draft.take() {
                out.push(d.build()?);
            }
            draft = Some(Draft { name: line.tokens[1].text.to_string(), start: line.number, ..Default::default() });
            continue;
        }
        let d = draft.get_or_insert_with(|| Draft { name: "main".into(), start: line.number, ..Default::default() });
        match first.text {
            "elements" => labels_once(&mut d.elements, &line)?,
            "points" => labels_once(&mut d.points, &line)?,
            "arrows" => labels_once(&mut d.arrows, &line)?,
            "row" => d.rows.push(line),
            "map" => d.maps.push(line),
            "class" => d.classes.push(line),
            "arrow" => d.arrow_lines.push(line),
            "compose" => d.compose.push(line),
            "anchor" => d.anchors.push(line),
            "act" => d.acts.push(line),
            other => return Err(line.at(0, format!("unknown keyword `{other}`"))),
        }
    }
    if let Some(d) = draft {
        out.push(d.build()?);
    }
    Ok(out)
}

/// Canonical text of one instance.
pub fn print(inst: &Instance) -> String {
    let mut out = format!("instance {}\n", inst.name);
    if let Some(s) = &inst.semigroup {
        let _ = writeln!(out, "elements {}", s.labels().join(" "));
        for a in s.elements() {
            let row: Vec<&str> = s.elements().map(|b| s.label(s.mul(a, b))).collect();
            let _ = writeln!(out, "row {} : {}", s.label(a), row.join(" "));
        }
    }
    if let Some(sp) = &inst.space {
        let _ = writeln!(out, "points {}", sp.labels().join(" "));
    }
    if let Some(a) = &inst.action {
        let s = a.semigroup();
        for x in s.elements().filter(|&x| !a.map(x).is_empty()) {
            let pairs: Vec<String> =
                a.map(x).pairs().map(|(p, q)| format!("{}->{}", a.space().label(p), a.space().label(q))).collect();
            let _ = writeln!(out, "map {} : {}", s.label(x), pairs.join(" "));
        }
    }
    if let (Some(c), Some(s)) = (&inst.congruence, &inst.semigroup) {
        for class in c.classes() {
            let names: Vec<&str> = class.iter().map(|&x| s.label(x)).collect();
            let _ = writeln!(out, "class {}", names.join(" "));
        }
    }
    if let Some(g) = &inst.groupoid {
        let _ = writeln!(out, "arrows {}", g.labels().join(" "));
        for x in g.arrows() {
            let _ = writeln!(out, "arrow {} : {} -> {}", g.label(x), g.label(g.d(x)), g.label(g.r(x)));
        }
        for (x, y, z) in g.products() {
            let _ = writeln!(out, "compose {} {} = {}", g.label(x), g.label(y), g.label(z));
        }
    }
    if let Some(ga) = &inst.gaction {
        let (g, sp) = (ga.groupoid(), ga.space());
        for p in sp.points() {
            let _ = writeln!(out, "anchor {} : {}", sp.label(p), g.label(ga.anchor(p)));
        }
        for x in g.arrows() {
            for p in sp.points() {
                if let Some(q) = ga.apply(x, p) {
                    let _ = writeln!(out, "act {} {} = {}", g.label(x), sp.label(p), sp.label(q));
                }
            }
        }
    }
    out
}

pub fn print_all(instances: &[Instance]) -> String {
    instances.iter().map(print).collect::<Vec<_>>().join("\n")
}
