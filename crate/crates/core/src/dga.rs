//! Chekanov-Eliashberg DGA of a closed vertex-free front, computed from
//! admissible disks of the front, and the augmentation search.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::front::{right_cusps_last, ArcMap, Event, FrontDiagram, UnionFind};
use crate::maslov::{crossing_grading, solve_maslov, MaslovPotential, Ring};
use crate::ruling::closed_polynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DgaRing {
    Gf2,
    Z,
}

impl std::str::FromStr for DgaRing {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gf2" => Ok(DgaRing::Gf2),
            "z" => Ok(DgaRing::Z),
            _ => Err(Error::Parse(format!("ring must be gf2 or z, got {:?}", s))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub name: String,
    /// 0-based slice of the crossing or right cusp.
    pub slice: usize,
    pub grading: i64,
}

/// Words in generator indices with coefficients; the empty word is 1.
pub type Chain = BTreeMap<Vec<usize>, i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dga {
    /// The isotopic front the algebra was read from: the input with its right
    /// cusps moved into one final column.
    pub front: FrontDiagram,
    pub ring: DgaRing,
    pub grading_ring: Ring,
    pub generators: Vec<Generator>,
    pub differentials: Vec<Chain>,
}

fn add_term(c: &mut Chain, w: Vec<usize>, k: i64, ring: DgaRing) {
    let e = c.entry(w.clone()).or_insert(0);
    *e += k;
    if ring == DgaRing::Gf2 {
        *e = e.rem_euclid(2);
    }
    if *e == 0 {
        c.remove(&w);
    }
}

/// A strip being swept to the right.
#[derive(Clone)]
struct Strip {
    upper: usize,
    lower: usize,
    /// corners on the upper path, left to right
    top: Vec<usize>,
    bottom: Vec<usize>,
    sign: i64,
}

pub fn ce_dga(d: &FrontDiagram, mu: &MaslovPotential, ring: DgaRing) -> Result<Dga> {
    d.check()?;
    if !d.is_closed() || d.has_vertices() {
        return Err(Error::Unsupported("the DGA needs a closed vertex-free diagram".into()));
    }
    if ring == DgaRing::Z && matches!(mu.ring, Ring::Mod(m) if m % 2 == 1) {
        return Err(Error::Unsupported(format!("signs need gradings mod 2; potential lives in {}", mu.ring)));
    }
    // strips see every disk only once the right cusps share a column
    let simple = right_cusps_last(d);
    let mu = &solve_maslov(&simple, mu.ring, &[])?;
    let d = &simple;
    let mut generators = Vec::new();
    let mut index = vec![usize::MAX; d.len()];
    for (k, e) in d.slices.iter().enumerate() {
        let (name, grading) = match e {
            Event::Crossing { .. } => (format!("a{}", k + 1), crossing_grading(d, mu, k)),
            Event::RightCusp(_) => (format!("q{}", k + 1), mu.ring.reduce(1)),
            _ => continue,
        };
        index[k] = generators.len();
        generators.push(Generator { name, slice: k, grading });
    }
    let eps = |g: usize| -> i64 {
        if (generators[g].grading - 1).rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    };
    let based = base_cusps(d);
    let mut differentials = vec![Chain::new(); generators.len()];
    for (k, e) in d.slices.iter().enumerate() {
        if let Event::RightCusp(_) = e {
            let s = if ring == DgaRing::Z && based.contains(&k) { -1 } else { 1 };
            add_term(&mut differentials[index[k]], vec![], s, ring);
        }
    }
    let found: Vec<(usize, Vec<usize>, i64)> = crate::pool().install(|| {
        d.slices
            .par_iter()
            .enumerate()
            .filter_map(|(k, e)| match e {
                Event::LeftCusp(p) => Some((k, *p)),
                _ => None,
            })
            .flat_map_iter(|(k0, p)| {
                let mut out = Vec::new();
                let start = Strip { upper: p, lower: p + 1, top: vec![], bottom: vec![], sign: 1 };
                sweep(d, k0 + 1, start, &index, &eps, &mut out);
                out
            })
            .collect()
    });
    for (g, w, s) in found {
        add_term(&mut differentials[g], w, if ring == DgaRing::Z { s } else { 1 }, ring);
    }
    Ok(Dga { front: d.clone(), ring, grading_ring: mu.ring, generators, differentials })
}

/// First right cusp of every component carries the base point.
fn base_cusps(d: &FrontDiagram) -> Vec<usize> {
    let arcs = ArcMap::new(d);
    let mut uf = UnionFind::new(arcs.arc_count);
    for (k, e) in d.slices.iter().enumerate() {
        match e {
            Event::LeftCusp(p) => {
                uf.union(arcs.arc(k + 1, *p), arcs.arc(k + 1, p + 1));
            }
            Event::RightCusp(p) => {
                uf.union(arcs.arc(k, *p), arcs.arc(k, p + 1));
            }
            _ => {}
        }
    }
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for (k, e) in d.slices.iter().enumerate() {
        if let Event::RightCusp(p) = e {
            if seen.insert(uf.find(arcs.arc(k, *p))) {
                out.push(k);
            }
        }
    }
    out
}

fn finish(s: &Strip, g: usize, out: &mut Vec<(usize, Vec<usize>, i64)>) {
    // counterclockwise from the right end: upper path leftwards, then lower
    let mut w: Vec<usize> = s.top.iter().rev().cloned().collect();
    w.extend(s.bottom.iter().cloned());
    out.push((g, w, s.sign));
}

fn sweep(
    d: &FrontDiagram,
    k: usize,
    mut s: Strip,
    index: &[usize],
    eps: &dyn Fn(usize) -> i64,
    out: &mut Vec<(usize, Vec<usize>, i64)>,
) {
    let Some(e) = d.slices.get(k) else { return };
    match e {
        Event::LeftCusp(q) => {
            let q = *q;
            if s.upper >= q {
                s.upper += 2;
            }
            if s.lower >= q {
                s.lower += 2;
            }
            sweep(d, k + 1, s, index, eps, out);
        }
        Event::RightCusp(q) => {
            let q = *q;
            let hits = [s.upper, s.lower].iter().filter(|&&x| x == q || x == q + 1).count();
            match hits {
                2 => finish(&s, index[k], out),
                1 => {}
                _ => {
                    if s.upper > q + 1 {
                        s.upper -= 2;
                    }
                    if s.lower > q + 1 {
                        s.lower -= 2;
                    }
                    sweep(d, k + 1, s, index, eps, out);
                }
            }
        }
        Event::Crossing { pos, .. } => {
            let q = *pos;
            let g = index[k];
            if s.upper == q && s.lower == q + 1 {
                finish(&s, g, out);
            } else if s.upper == q + 1 {
                // turn into the bottom quadrant, or follow the strand upwards
                let mut c = s.clone();
                c.top.push(g);
                c.sign *= eps(g);
                sweep(d, k + 1, c, index, eps, out);
                s.upper = q;
                sweep(d, k + 1, s, index, eps, out);
            } else if s.lower == q {
                let mut c = s.clone();
                c.bottom.push(g);
                sweep(d, k + 1, c, index, eps, out);
                s.lower = q + 1;
                sweep(d, k + 1, s, index, eps, out);
            } else {
                if s.upper == q {
                    s.upper = q + 1;
                }
                if s.lower == q + 1 {
                    s.lower = q;
                }
                sweep(d, k + 1, s, index, eps, out);
            }
        }
        Event::Vertex { .. } => {}
    }
}

impl Dga {
    fn degree_sign(&self, w: &[usize]) -> i64 {
        let odd = w.iter().map(|&g| self.generators[g].grading).sum::<i64>().rem_euclid(2);
        if odd == 1 {
            -1
        } else {
            1
        }
    }

    /// ∂ applied to a chain, extended as a graded derivation.
    pub fn apply(&self, c: &Chain) -> Chain {
        let mut out = Chain::new();
        for (w, &k) in c {
            for i in 0..w.len() {
                let sign = if self.ring == DgaRing::Z { self.degree_sign(&w[..i]) } else { 1 };
                for (v, &m) in &self.differentials[w[i]] {
                    let mut word = w[..i].to_vec();
                    word.extend(v);
                    word.extend(&w[i + 1..]);
                    add_term(&mut out, word, sign * k * m, self.ring);
                }
            }
        }
        out
    }

    /// Generators whose ∂∂ does not vanish.
    pub fn d_squared_failures(&self) -> Vec<usize> {
        (0..self.generators.len())
            .filter(|&g| !self.apply(&self.differentials[g]).is_empty())
            .collect()
    }

    /// Generators where some word of ∂ has the wrong grading.
    pub fn grading_failures(&self) -> Vec<usize> {
        let r = self.grading_ring;
        (0..self.generators.len())
            .filter(|&g| {
                self.differentials[g].keys().any(|w| {
                    let deg: i64 = w.iter().map(|&h| self.generators[h].grading).sum();
                    !r.is_zero(self.generators[g].grading - 1 - deg)
                })
            })
            .collect()
    }

    pub fn render_chain(&self, c: &Chain) -> String {
        if c.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (w, &k) in c {
            let word = if w.is_empty() {
                "1".to_string()
            } else {
                w.iter().map(|&g| self.generators[g].name.as_str()).collect::<Vec<_>>().join(" ")
            };
            parts.push(match k {
                1 => word,
                -1 => format!("-{}", word),
                k => format!("{}*{}", k, word),
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "front": self.front.to_json(),
            "ring": match self.ring { DgaRing::Gf2 => "gf2", DgaRing::Z => "z" },
            "grading_ring": self.grading_ring.to_string(),
            "generators": self.generators.iter().enumerate().map(|(i, g)| serde_json::json!({
                "name": g.name,
                "slice": g.slice + 1,
                "grading": g.grading,
                "differential": self.render_chain(&self.differentials[i]),
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Dga {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.front.to_text().lines() {
            writeln!(f, "# {}", line)?;
        }
        for g in &self.generators {
            writeln!(f, "|{}| = {}", g.name, g.grading)?;
        }
        for (i, g) in self.generators.iter().enumerate() {
            writeln!(f, "d {} = {}", g.name, self.render_chain(&self.differentials[i]))?;
        }
        Ok(())
    }
}

/// Generator name to value in Z/2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Augmentation {
    pub values: BTreeMap<String, u8>,
}

impl fmt::Display for Augmentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|(k, v)| format!("{}={}", k, v)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub const DEFAULT_SEARCH_CAP: usize = 24;

/// First Z/2 augmentation in lexicographic order supported on generators of
/// grading ≡ 0 mod ρ.
pub fn find_augmentation(p: &Dga, rho: u64, cap: usize) -> Result<Option<Augmentation>> {
    let g = p.grading_ring.graded(rho);
    let free: Vec<usize> = (0..p.generators.len()).filter(|&i| g.is_zero(p.generators[i].grading)).collect();
    if free.len() > cap {
        return Err(Error::SearchCap(free.len(), cap));
    }
    let n = free.len();
    let bit = |gen: usize| free.iter().position(|&f| f == gen).map(|i| 1u64 << (n - 1 - i));
    // each equation: masks of its words, each taken mod 2
    let mut equations: Vec<Vec<u64>> = Vec::new();
    for c in &p.differentials {
        let mut words = Vec::new();
        for (w, &k) in c {
            if k.rem_euclid(2) == 0 {
                continue;
            }
            let mask: Option<u64> = w.iter().map(|&h| bit(h)).try_fold(0u64, |acc, b| b.map(|b| acc | b));
            if let Some(m) = mask {
                words.push(m);
            }
        }
        if !words.is_empty() {
            equations.push(words);
        }
    }
    let ok = |a: u64| equations.iter().all(|ws| ws.iter().filter(|&&m| m & a == m).count() % 2 == 0);
    let hit = crate::pool().install(|| (0..1u64 << n).into_par_iter().find_first(|&a| ok(a)));
    Ok(hit.map(|a| Augmentation {
        values: free
            .iter()
            .enumerate()
            .map(|(i, &gen)| (p.generators[gen].name.clone(), ((a >> (n - 1 - i)) & 1) as u8))
            .collect(),
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub rho: u64,
    pub ruling_exists: bool,
    pub augmentation_exists: bool,
    pub agree: bool,
}

pub fn check_equivalence(d: &FrontDiagram, ring: Ring, rho: u64) -> Result<EquivalenceReport> {
    let mu = solve_maslov(d, ring, &[])?;
    let ruling_exists = !closed_polynomial(d, ring, rho)?.is_zero();
    let dga = ce_dga(d, &mu, DgaRing::Gf2)?;
    let augmentation_exists = find_augmentation(&dga, rho, DEFAULT_SEARCH_CAP)?.is_some();
    Ok(EquivalenceReport { rho, ruling_exists, augmentation_exists, agree: ruling_exists == augmentation_exists })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn front(s: &str) -> FrontDiagram {
        FrontDiagram::from_text(s).unwrap()
    }

    fn dga(s: &str, ring: DgaRing) -> Dga {
        let d = front(s);
        let mu = solve_maslov(&d, Ring::Z, &[]).unwrap();
        ce_dga(&d, &mu, ring).unwrap()
    }

    const UNKNOT: &str = "type 0 0\nLC 1\nRC 1\n";
    const TREFOIL: &str = "type 0 0\nLC 1\nLC 3\nX 2\nX 2\nX 2\nRC 1\nRC 1\n";

    #[test]
    fn unknot_differential_cancels() {
        for ring in [DgaRing::Gf2, DgaRing::Z] {
            let p = dga(UNKNOT, ring);
            assert_eq!(p.generators.len(), 1);
            assert_eq!(p.generators[0].grading, 1);
            assert!(p.differentials[0].is_empty());
        }
    }

    #[test]
    fn trefoil_shape() {
        let p = dga(TREFOIL, DgaRing::Gf2);
        let grades: Vec<i64> = p.generators.iter().map(|g| g.grading).collect();
        assert_eq!(grades, vec![0, 0, 0, 1, 1]);
        for (g, c) in p.generators.iter().zip(&p.differentials) {
            if g.grading == 1 {
                assert!(c.contains_key(&vec![]));
            }
        }
        assert!(p.d_squared_failures().is_empty());
        assert!(p.grading_failures().is_empty());
        assert!(find_augmentation(&p, 1, 24).unwrap().is_some());
    }

    #[test]
    fn constant_differential_blocks_augmentations() {
        let mut p = dga(UNKNOT, DgaRing::Gf2);
        p.differentials[0].insert(vec![], 1);
        p.generators[0].grading = 0;
        assert!(find_augmentation(&p, 1, 24).unwrap().is_none());
    }
}
