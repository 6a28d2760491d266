//! Bordered front diagrams as slice words.
//!
//! Positions are 0-based internally. The text and JSON formats are 1-based
//! counted from the top strand.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Event {
    LeftCusp(usize),
    RightCusp(usize),
    Crossing { pos: usize, marked: bool },
    Vertex { pos: usize, left: usize, right: usize, name: Option<String> },
}

impl Event {
    pub fn pos(&self) -> usize {
        match self {
            Event::LeftCusp(p) | Event::RightCusp(p) => *p,
            Event::Crossing { pos, .. } | Event::Vertex { pos, .. } => *pos,
        }
    }

    /// (strands consumed, strands emitted)
    pub fn arity(&self) -> (usize, usize) {
        match self {
            Event::LeftCusp(_) => (0, 2),
            Event::RightCusp(_) => (2, 0),
            Event::Crossing { .. } => (2, 2),
            Event::Vertex { left, right, .. } => (*left, *right),
        }
    }

    pub fn with_pos(&self, p: usize) -> Event {
        match self {
            Event::LeftCusp(_) => Event::LeftCusp(p),
            Event::RightCusp(_) => Event::RightCusp(p),
            Event::Crossing { marked, .. } => Event::Crossing { pos: p, marked: *marked },
            Event::Vertex { left, right, name, .. } => Event::Vertex {
                pos: p,
                left: *left,
                right: *right,
                name: name.clone(),
            },
        }
    }

    pub fn x(pos: usize) -> Event {
        Event::Crossing { pos, marked: false }
    }

    pub fn xm(pos: usize) -> Event {
        Event::Crossing { pos, marked: true }
    }

    pub fn v(pos: usize, left: usize, right: usize) -> Event {
        Event::Vertex { pos, left, right, name: None }
    }

    fn mirrored(&self) -> Event {
        match self {
            Event::LeftCusp(p) => Event::RightCusp(*p),
            Event::RightCusp(p) => Event::LeftCusp(*p),
            Event::Crossing { .. } => self.clone(),
            Event::Vertex { pos, left, right, name } => Event::Vertex {
                pos: *pos,
                left: *right,
                right: *left,
                name: name.clone(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FrontDiagram {
    pub left: usize,
    pub right: usize,
    pub slices: Vec<Event>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub slice: Option<usize>,
    pub rule: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.slice {
            Some(k) => write!(f, "slice {}: {}", k + 1, self.rule),
            None => write!(f, "{}", self.rule),
        }
    }
}

/// Vertex as seen from the diagram: slice index and valences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexRef {
    pub slice: usize,
    pub pos: usize,
    pub left: usize,
    pub right: usize,
}

impl FrontDiagram {
    pub fn new(left: usize, right: usize, slices: Vec<Event>) -> Self {
        Self { left, right, slices }
    }

    /// The trivial tangle I_n.
    pub fn identity(n: usize) -> Self {
        Self::new(n, n, vec![])
    }

    /// A single vertex of type (0, n), the tangle 0_n.
    pub fn zero(n: usize) -> Self {
        Self::new(0, n, vec![Event::v(0, 0, n)])
    }

    /// A single vertex of type (n, 0), the tangle ∞_n.
    pub fn infinity(n: usize) -> Self {
        Self::new(n, 0, vec![Event::v(0, n, 0)])
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.left == 0 && self.right == 0
    }

    pub fn vertices(&self) -> Vec<VertexRef> {
        self.slices
            .iter()
            .enumerate()
            .filter_map(|(k, e)| match e {
                Event::Vertex { pos, left, right, .. } => Some(VertexRef {
                    slice: k,
                    pos: *pos,
                    left: *left,
                    right: *right,
                }),
                _ => None,
            })
            .collect()
    }

    pub fn has_vertices(&self) -> bool {
        self.slices.iter().any(|e| matches!(e, Event::Vertex { .. }))
    }

    /// Strand count in each of the `len + 1` intervals between slices.
    /// Assumes a valid diagram.
    pub fn strand_counts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.slices.len() + 1);
        let mut n = self.left;
        out.push(n);
        for e in &self.slices {
            let (i, o) = e.arity();
            n = n + o - i;
            out.push(n);
        }
        out
    }

    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut errs = Vec::new();
        let mut n = self.left as i64;
        for (k, e) in self.slices.iter().enumerate() {
            let (i, o) = e.arity();
            let p = e.pos() as i64;
            let ok = p + i as i64 <= n;
            if !ok {
                errs.push(Violation {
                    slice: Some(k),
                    rule: "position out of range".into(),
                });
            }
            if let Event::Vertex { left, right, .. } = e {
                if (left + right) % 2 != 0 || left + right < 2 {
                    errs.push(Violation {
                        slice: Some(k),
                        rule: "vertex valence must be even and at least 2".into(),
                    });
                }
            }
            if ok {
                n += o as i64 - i as i64;
            } else {
                // keep going with a clamped count so later errors stay meaningful
                n = (n - i as i64).max(0) + o as i64;
            }
        }
        if n != self.right as i64 {
            errs.push(Violation {
                slice: None,
                rule: format!("strand count ends at {} but right border has {}", n, self.right),
            });
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }

    pub fn check(&self) -> Result<()> {
        self.validate().map_err(Error::Invalid)
    }

    pub fn concatenate(&self, other: &FrontDiagram) -> Result<FrontDiagram> {
        if self.right != other.left {
            return Err(Error::BorderMismatch(self.right, other.left));
        }
        let mut slices = self.slices.clone();
        slices.extend(other.slices.iter().cloned());
        Ok(FrontDiagram::new(self.left, other.right, slices))
    }

    /// Glue 0_ℓ on the left and ∞_r on the right.
    pub fn close(&self) -> FrontDiagram {
        let mut slices = Vec::with_capacity(self.slices.len() + 2);
        if self.left > 0 {
            slices.push(Event::v(0, 0, self.left));
        }
        slices.extend(self.slices.iter().cloned());
        if self.right > 0 {
            slices.push(Event::v(0, self.right, 0));
        }
        FrontDiagram::new(0, 0, slices)
    }

    /// Mirror in a vertical line.
    pub fn reflect(&self) -> FrontDiagram {
        FrontDiagram::new(
            self.right,
            self.left,
            self.slices.iter().rev().map(Event::mirrored).collect(),
        )
    }

    /// Pad with `above` straight strands on top and `below` at the bottom.
    pub fn pad(&self, above: usize, below: usize) -> FrontDiagram {
        FrontDiagram::new(
            self.left + above + below,
            self.right + above + below,
            self.slices.iter().map(|e| e.with_pos(e.pos() + above)).collect(),
        )
    }

    /// Split into the first `k` slices and the rest.
    pub fn cut(&self, k: usize) -> (FrontDiagram, FrontDiagram) {
        let counts = self.strand_counts();
        (
            FrontDiagram::new(self.left, counts[k], self.slices[..k].to_vec()),
            FrontDiagram::new(counts[k], self.right, self.slices[k..].to_vec()),
        )
    }

    /// Replace slice `k` by a word of events.
    pub fn splice(&self, k: usize, len: usize, word: Vec<Event>) -> FrontDiagram {
        let mut slices = self.slices[..k].to_vec();
        slices.extend(word);
        slices.extend(self.slices[k + len..].iter().cloned());
        FrontDiagram::new(self.left, self.right, slices)
    }

    pub fn crossings(&self) -> Vec<usize> {
        self.slices
            .iter()
            .enumerate()
            .filter(|(_, e)| matches!(e, Event::Crossing { .. }))
            .map(|(k, _)| k)
            .collect()
    }

    /// Commutation normal form: repeatedly move a commuting event left while
    /// that lowers the (position, kind) order of adjacent pairs.
    pub fn normal_form(&self) -> FrontDiagram {
        let mut d = self.clone();
        loop {
            let mut changed = false;
            for k in 0..d.slices.len().saturating_sub(1) {
                if let Some((a, b)) = commute_pair(&d.slices[k], &d.slices[k + 1]) {
                    if event_key(&a) < event_key(&d.slices[k]) {
                        d.slices[k] = a;
                        d.slices[k + 1] = b;
                        changed = true;
                    }
                }
            }
            if !changed {
                return d;
            }
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("type {} {}\n", self.left, self.right);
        for e in &self.slices {
            match e {
                Event::LeftCusp(p) => s.push_str(&format!("LC {}\n", p + 1)),
                Event::RightCusp(p) => s.push_str(&format!("RC {}\n", p + 1)),
                Event::Crossing { pos, marked } => {
                    s.push_str(&format!("X {}{}\n", pos + 1, if *marked { " marked" } else { "" }))
                }
                Event::Vertex { pos, left, right, name } => {
                    s.push_str(&format!("V {} {} {}", pos + 1, left, right));
                    if let Some(n) = name {
                        s.push_str(&format!(" id={}", n));
                    }
                    s.push('\n');
                }
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<FrontDiagram> {
        let mut border = None;
        let mut slices = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::Parse(format!("line {}: {}", ln + 1, msg));
            let toks: Vec<&str> = line.split_whitespace().collect();
            let num = |i: usize| -> Result<usize> {
                toks.get(i)
                    .ok_or_else(|| bad("missing number"))?
                    .parse::<usize>()
                    .map_err(|_| bad("expected a nonnegative integer"))
            };
            let pos = |i: usize| -> Result<usize> {
                let p = num(i)?;
                if p == 0 {
                    return Err(bad("positions are 1-based"));
                }
                Ok(p - 1)
            };
            match toks[0] {
                "type" => {
                    if border.is_some() || !slices.is_empty() {
                        return Err(bad("type must come first and only once"));
                    }
                    if toks.len() != 3 {
                        return Err(bad("usage: type <l> <r>"));
                    }
                    border = Some((num(1)?, num(2)?));
                }
                "LC" | "RC" => {
                    if toks.len() != 2 {
                        return Err(bad("usage: LC|RC <p>"));
                    }
                    let p = pos(1)?;
                    slices.push(if toks[0] == "LC" { Event::LeftCusp(p) } else { Event::RightCusp(p) });
                }
                "X" => {
                    let marked = match toks.len() {
                        2 => false,
                        3 if toks[2] == "marked" => true,
                        _ => return Err(bad("usage: X <p> [marked]")),
                    };
                    slices.push(Event::Crossing { pos: pos(1)?, marked });
                }
                "V" => {
                    if toks.len() != 4 && toks.len() != 5 {
                        return Err(bad("usage: V <p> <lv> <rv> [id=<name>]"));
                    }
                    let name = match toks.get(4) {
                        Some(t) => Some(
                            t.strip_prefix("id=")
                                .filter(|n| !n.is_empty())
                                .ok_or_else(|| bad("expected id=<name>"))?
                                .to_string(),
                        ),
                        None => None,
                    };
                    slices.push(Event::Vertex {
                        pos: pos(1)?,
                        left: num(2)?,
                        right: num(3)?,
                        name,
                    });
                }
                other => return Err(bad(&format!("unknown directive {:?}", other))),
            }
        }
        let (l, r) = border.ok_or_else(|| Error::Parse("missing type line".into()))?;
        Ok(FrontDiagram::new(l, r, slices))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = JsonFront {
            r#type: [self.left, self.right],
            slices: self
                .slices
                .iter()
                .map(|e| match e {
                    Event::LeftCusp(p) => JsonEvent { kind: "LC".into(), pos: p + 1, ..Default::default() },
                    Event::RightCusp(p) => JsonEvent { kind: "RC".into(), pos: p + 1, ..Default::default() },
                    Event::Crossing { pos, marked } => JsonEvent {
                        kind: "X".into(),
                        pos: pos + 1,
                        marked: Some(*marked),
                        ..Default::default()
                    },
                    Event::Vertex { pos, left, right, name } => JsonEvent {
                        kind: "V".into(),
                        pos: pos + 1,
                        left: Some(*left),
                        right: Some(*right),
                        id: name.clone(),
                        ..Default::default()
                    },
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<FrontDiagram> {
        let doc: JsonFront = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut slices = Vec::new();
        for (k, s) in doc.slices.into_iter().enumerate() {
            if s.pos == 0 {
                return Err(Error::Parse(format!("slice {}: positions are 1-based", k + 1)));
            }
            let p = s.pos - 1;
            let missing = || Error::Parse(format!("slice {}: vertex needs left and right", k + 1));
            slices.push(match s.kind.as_str() {
                "LC" => Event::LeftCusp(p),
                "RC" => Event::RightCusp(p),
                "X" => Event::Crossing { pos: p, marked: s.marked.unwrap_or(false) },
                "V" => Event::Vertex {
                    pos: p,
                    left: s.left.ok_or_else(missing)?,
                    right: s.right.ok_or_else(missing)?,
                    name: s.id,
                },
                other => return Err(Error::Parse(format!("slice {}: unknown kind {:?}", k + 1, other))),
            });
        }
        Ok(FrontDiagram::new(doc.r#type[0], doc.r#type[1], slices))
    }

    /// Parse either format, sniffing a leading `{`.
    pub fn parse(text: &str) -> Result<FrontDiagram> {
        if text.trim_start().starts_with('{') {
            let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
            Self::from_json(&v)
        } else {
            Self::from_text(text)
        }
    }
}

impl fmt::Display for FrontDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Serialize, Deserialize)]
struct JsonFront {
    r#type: [usize; 2],
    slices: Vec<JsonEvent>,
}

#[derive(Serialize, Deserialize, Default)]
struct JsonEvent {
    kind: String,
    pos: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    marked: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    left: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    right: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    id: Option<String>,
}

fn event_key(e: &Event) -> (usize, u8) {
    let kind = match e {
        Event::LeftCusp(_) => 0,
        Event::Crossing { .. } => 1,
        Event::Vertex { .. } => 2,
        Event::RightCusp(_) => 3,
    };
    (e.pos(), kind)
}

/// If `e1` then `e2` have disjoint supports, return the swapped pair.
pub fn commute_pair(e1: &Event, e2: &Event) -> Option<(Event, Event)> {
    let (i1, o1) = e1.arity();
    let (i2, o2) = e2.arity();
    let (p1, p2) = (e1.pos(), e2.pos());
    if p2 + i2 <= p1 {
        // e2 sits above the output of e1
        let q1 = (p1 + o2).checked_sub(i2)?;
        Some((e2.clone(), e1.with_pos(q1)))
    } else if p2 >= p1 + o1 {
        let q2 = p2 + i1 - o1;
        Some((e2.with_pos(q2), e1.clone()))
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move {
    /// Swap two adjacent events with disjoint supports.
    Commute,
    /// A strand passes a cusp tip: cusp ↔ cusp plus two crossings.
    /// `marked` selects marked crossings on the expanded side.
    CuspPass { marked: bool },
    /// Triple point move on three crossings, markings carried along.
    Triple,
    /// A marked crossing slides across a cusp tip from one branch to the other.
    MarkedSlide,
}

impl Move {
    pub const ALL: [Move; 5] = [
        Move::Commute,
        Move::CuspPass { marked: false },
        Move::CuspPass { marked: true },
        Move::Triple,
        Move::MarkedSlide,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Move::Commute => "commute",
            Move::CuspPass { marked: false } => "cusp-pass",
            Move::CuspPass { marked: true } => "cusp-pass-marked",
            Move::Triple => "triple",
            Move::MarkedSlide => "marked-slide",
        }
    }
}

fn is_x(e: &Event, p: usize) -> Option<bool> {
    match e {
        Event::Crossing { pos, marked } if *pos == p => Some(*marked),
        _ => None,
    }
}

fn rewrite_cusp_pass(w: &[Event], marked: bool) -> Option<Vec<Event>> {
    if w.len() < 3 {
        return None;
    }
    let (a, b, c) = (&w[0], &w[1], &w[2]);
    let same = |e: &Event, p: usize| is_x(e, p) == Some(marked);
    match a {
        Event::LeftCusp(q) => {
            let q = *q;
            if same(b, q + 1) && same(c, q) {
                return Some(vec![Event::LeftCusp(q + 1)]);
            }
            if q >= 1 && same(b, q - 1) && same(c, q) {
                return Some(vec![Event::LeftCusp(q - 1)]);
            }
        }
        Event::Crossing { pos: q, .. } => {
            let q = *q;
            if same(a, q) && same(b, q + 1) && c == &Event::RightCusp(q) {
                return Some(vec![Event::RightCusp(q + 1)]);
            }
            if q >= 1 && same(a, q) && same(b, q - 1) && c == &Event::RightCusp(q) {
                return Some(vec![Event::RightCusp(q - 1)]);
            }
        }
        _ => {}
    }
    None
}

/// All sites where `mv` applies, as slice indices.
pub fn move_sites(d: &FrontDiagram, mv: Move) -> Vec<usize> {
    (0..d.slices.len()).filter(|&k| apply_move(d, mv, k).is_ok()).collect()
}

/// Every (move, site, variant) that applies. Variants distinguish the
/// expansion directions of a cusp pass.
pub fn applicable_moves(d: &FrontDiagram) -> Vec<(Move, usize, usize)> {
    let mut out = Vec::new();
    for mv in Move::ALL {
        for k in 0..d.slices.len() {
            for var in 0..3 {
                if apply_move_variant(d, mv, k, var).is_ok() {
                    out.push((mv, k, var));
                }
            }
        }
    }
    out
}

pub fn apply_move(d: &FrontDiagram, mv: Move, site: usize) -> Result<FrontDiagram> {
    (0..3)
        .find_map(|v| apply_move_variant(d, mv, site, v).ok())
        .ok_or_else(|| Error::PatternMismatch(format!("{} does not apply at slice {}", mv.name(), site + 1)))
}

/// Apply a move at slice `site`. For a cusp pass, variant 0 contracts and
/// variants 1 and 2 expand using the strand just above or just below.
pub fn apply_move_variant(d: &FrontDiagram, mv: Move, site: usize, variant: usize) -> Result<FrontDiagram> {
    let mismatch = || Error::PatternMismatch(format!("{} does not apply at slice {}", mv.name(), site + 1));
    let w = &d.slices[site.min(d.slices.len())..];
    let counts = d.strand_counts();
    match mv {
        Move::Commute => {
            if variant != 0 || w.len() < 2 {
                return Err(mismatch());
            }
            // a marked crossing may not pass an unmarked one: the switch at
            // the unmarked crossing can change from nested to interlaced
            let marked = |e: &Event| matches!(e, Event::Crossing { marked: true, .. });
            let unmarked = |e: &Event| matches!(e, Event::Crossing { marked: false, .. });
            if (marked(&w[0]) && unmarked(&w[1])) || (unmarked(&w[0]) && marked(&w[1])) {
                return Err(mismatch());
            }
            let (a, b) = commute_pair(&w[0], &w[1]).ok_or_else(mismatch)?;
            Ok(d.splice(site, 2, vec![a, b]))
        }
        Move::CuspPass { marked } => {
            let e = w.first().ok_or_else(mismatch)?;
            let x = |p| Event::Crossing { pos: p, marked };
            let n = counts[site];
            let rep = match (variant, e) {
                (0, _) => {
                    let rep = rewrite_cusp_pass(w, marked).ok_or_else(mismatch)?;
                    return Ok(d.splice(site, 3, rep));
                }
                (1, Event::LeftCusp(q)) if *q >= 1 => vec![Event::LeftCusp(q - 1), x(*q), x(q - 1)],
                (2, Event::LeftCusp(q)) if *q < n => vec![Event::LeftCusp(q + 1), x(*q), x(q + 1)],
                (1, Event::RightCusp(q)) if *q >= 1 => vec![x(q - 1), x(*q), Event::RightCusp(q - 1)],
                (2, Event::RightCusp(q)) if *q + 2 < n => vec![x(q + 1), x(*q), Event::RightCusp(q + 1)],
                _ => return Err(mismatch()),
            };
            Ok(d.splice(site, 1, rep))
        }
        Move::Triple => {
            if variant != 0 || w.len() < 3 {
                return Err(mismatch());
            }
            let p = w[0].pos();
            let (m1, m2, m3) = match (is_x(&w[0], p), is_x(&w[1], p + 1), is_x(&w[2], p)) {
                (Some(a), Some(b), Some(c)) => (a, b, c),
                _ => match (is_x(&w[0], p), p.checked_sub(1).and_then(|q| is_x(&w[1], q)), is_x(&w[2], p)) {
                    (Some(a), Some(b), Some(c)) => {
                        let q = p - 1;
                        let rep = vec![
                            Event::Crossing { pos: q, marked: c },
                            Event::Crossing { pos: p, marked: b },
                            Event::Crossing { pos: q, marked: a },
                        ];
                        return Ok(d.splice(site, 3, rep));
                    }
                    _ => return Err(mismatch()),
                },
            };
            let rep = vec![
                Event::Crossing { pos: p + 1, marked: m3 },
                Event::Crossing { pos: p, marked: m2 },
                Event::Crossing { pos: p + 1, marked: m1 },
            ];
            Ok(d.splice(site, 3, rep))
        }
        Move::MarkedSlide => {
            if variant != 0 || w.len() < 2 {
                return Err(mismatch());
            }
            let rep = match (&w[0], &w[1]) {
                (Event::Crossing { pos: q, marked: true }, Event::RightCusp(r)) if *r == q + 1 => {
                    vec![Event::xm(q + 1), Event::RightCusp(*q)]
                }
                (Event::Crossing { pos: q, marked: true }, Event::RightCusp(r)) if *q >= 1 && *r == q - 1 => {
                    vec![Event::xm(q - 1), Event::RightCusp(*q)]
                }
                (Event::LeftCusp(q), Event::Crossing { pos: r, marked: true }) if *r == q + 1 => {
                    vec![Event::LeftCusp(q + 1), Event::xm(*q)]
                }
                (Event::LeftCusp(q), Event::Crossing { pos: r, marked: true }) if *q >= 1 && *r + 1 == *q => {
                    vec![Event::LeftCusp(q - 1), Event::xm(*q)]
                }
                _ => return Err(mismatch()),
            };
            Ok(d.splice(site, 2, rep))
        }
    }
}

/// An isotopic front whose right cusps all come last and close the top two
/// strands in turn, so they sit in a single column. Only for vertex-free
/// diagrams; vertices are left in place.
pub fn right_cusps_last(d: &FrontDiagram) -> FrontDiagram {
    let mut w = d.slices.clone();
    loop {
        let mut j = w.len();
        while j > 0 && w[j - 1] == Event::RightCusp(0) {
            j -= 1;
        }
        let Some(i) = w[..j].iter().rposition(|e| matches!(e, Event::RightCusp(_))) else { break };
        let q = w[i].pos();
        if i + 1 == j {
            // q > 0 here, else it would belong to the column
            w.splice(i..=i, [Event::x(q - 1), Event::x(q), Event::RightCusp(q - 1)]);
        } else if let Some((a, b)) = commute_pair(&w[i], &w[i + 1]) {
            w[i] = a;
            w[i + 1] = b;
        } else {
            w.splice(i..=i, [Event::x(q - 1), Event::x(q), Event::RightCusp(q - 1)]);
        }
    }
    FrontDiagram::new(d.left, d.right, w)
}

/// Apply `steps` random applicable moves. Each step picks uniformly among
/// all applicable (move, site, variant) triples; growth moves are only
/// picked while the diagram has at most `max_len` slices.
pub fn shuffle_moves<R: rand::Rng>(d: &FrontDiagram, steps: usize, max_len: usize, rng: &mut R) -> FrontDiagram {
    let mut cur = d.clone();
    for _ in 0..steps {
        let mut opts = applicable_moves(&cur);
        if cur.len() + 2 > max_len {
            opts.retain(|(mv, _, var)| !matches!(mv, Move::CuspPass { .. }) || *var == 0);
        }
        if opts.is_empty() {
            continue;
        }
        let (mv, k, var) = opts[rng.gen_range(0..opts.len())];
        cur = apply_move_variant(&cur, mv, k, var).expect("listed as applicable");
    }
    cur
}

/// Cells are (interval, position); interval k lies left of slice k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcMap {
    offsets: Vec<usize>,
    cell_arc: Vec<usize>,
    pub arc_count: usize,
}

impl ArcMap {
    pub fn new(d: &FrontDiagram) -> ArcMap {
        let counts = d.strand_counts();
        let mut offsets = Vec::with_capacity(counts.len() + 1);
        let mut total = 0;
        for c in &counts {
            offsets.push(total);
            total += c;
        }
        offsets.push(total);
        let cell = |k: usize, p: usize| offsets[k] + p;
        let mut uf = UnionFind::new(total);
        for (k, e) in d.slices.iter().enumerate() {
            let n = counts[k];
            let (i, o) = e.arity();
            let p = e.pos();
            for q in 0..p {
                uf.union(cell(k, q), cell(k + 1, q));
            }
            for q in p + i..n {
                uf.union(cell(k, q), cell(k + 1, q + o - i));
            }
            if let Event::Crossing { .. } = e {
                uf.union(cell(k, p), cell(k + 1, p + 1));
                uf.union(cell(k, p + 1), cell(k + 1, p));
            }
        }
        let mut ids = vec![usize::MAX; total];
        let mut cell_arc = vec![0; total];
        let mut next = 0;
        for c in 0..total {
            let r = uf.find(c);
            if ids[r] == usize::MAX {
                ids[r] = next;
                next += 1;
            }
            cell_arc[c] = ids[r];
        }
        ArcMap { offsets, cell_arc, arc_count: next }
    }

    pub fn arc(&self, interval: usize, pos: usize) -> usize {
        let c = self.offsets[interval] + pos;
        debug_assert!(c < self.offsets[interval + 1]);
        self.cell_arc[c]
    }

    pub fn strands(&self, interval: usize) -> usize {
        self.offsets[interval + 1] - self.offsets[interval]
    }

    pub fn intervals(&self) -> usize {
        self.offsets.len() - 1
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn push(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    /// False when already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
        ra != rb
    }
}
