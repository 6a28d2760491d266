//! Maslov potentials over Z or Z/m, crossing gradings and graded matchings.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::front::{ArcMap, Event, FrontDiagram};
use crate::resolve::Matching;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Z,
    Mod(u64),
}

impl Ring {
    pub fn reduce(&self, x: i64) -> i64 {
        match self {
            Ring::Z => x,
            Ring::Mod(m) => x.rem_euclid(*m as i64),
        }
    }

    pub fn is_zero(&self, x: i64) -> bool {
        self.reduce(x) == 0
    }

    /// The ring in which gradings are compared for ρ-graded objects.
    pub fn graded(&self, rho: u64) -> Ring {
        match (self, rho) {
            (Ring::Z, 0) => Ring::Z,
            (Ring::Z, r) => Ring::Mod(r),
            (Ring::Mod(m), r) => Ring::Mod(gcd(*m, r)),
        }
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Z => write!(f, "Z"),
            Ring::Mod(m) => write!(f, "Z{}", m),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;
    fn from_str(s: &str) -> Result<Ring> {
        if s == "Z" {
            return Ok(Ring::Z);
        }
        let m = s
            .strip_prefix('Z')
            .and_then(|t| t.parse::<u64>().ok())
            .filter(|m| *m >= 1)
            .ok_or_else(|| Error::Parse(format!("ring must be Z or Z<m> with m >= 1, got {:?}", s)))?;
        Ok(Ring::Mod(m))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaslovPotential {
    pub ring: Ring,
    pub arcs: ArcMap,
    pub values: Vec<i64>,
}

impl MaslovPotential {
    pub fn at(&self, interval: usize, pos: usize) -> i64 {
        self.values[self.arcs.arc(interval, pos)]
    }

    /// Potentials of the strands in one interval, top to bottom.
    pub fn column(&self, interval: usize) -> Vec<i64> {
        (0..self.arcs.strands(interval)).map(|p| self.at(interval, p)).collect()
    }

    pub fn render(&self) -> String {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| format!("arc{}={}", i, v))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Re-check every cusp constraint.
    pub fn verify(&self, d: &FrontDiagram) -> bool {
        cusp_constraints(d, &self.arcs)
            .into_iter()
            .all(|(lower, upper)| self.ring.is_zero(self.values[upper] - self.values[lower] - 1))
    }
}

/// (lower arc, upper arc) for every cusp.
fn cusp_constraints(d: &FrontDiagram, arcs: &ArcMap) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (k, e) in d.slices.iter().enumerate() {
        match e {
            Event::LeftCusp(p) => out.push((arcs.arc(k + 1, p + 1), arcs.arc(k + 1, *p))),
            Event::RightCusp(p) => out.push((arcs.arc(k, p + 1), arcs.arc(k, *p))),
            _ => {}
        }
    }
    out
}

/// A prescribed value at a cell (interval, position).
pub type Fixed = (usize, usize, i64);

/// Solve for a potential. Components touching a fixed cell take their values
/// from it; over Z every other component is shifted so its minimum is 0.
pub fn solve_maslov(d: &FrontDiagram, ring: Ring, fixed: &[Fixed]) -> Result<MaslovPotential> {
    d.check()?;
    let arcs = ArcMap::new(d);
    let n = arcs.arc_count;
    let ground = n;
    // adjacency: (to, weight) meaning value[to] = value[from] + weight
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n + 1];
    let mut edges = Vec::new();
    for (lower, upper) in cusp_constraints(d, &arcs) {
        edges.push((lower, upper, 1));
    }
    for &(k, p, v) in fixed {
        edges.push((ground, arcs.arc(k, p), v));
    }
    for &(a, b, w) in &edges {
        adj[a].push((b, w));
        adj[b].push((a, -w));
    }
    let mut value: Vec<Option<i64>> = vec![None; n + 1];
    let mut parent: Vec<Option<usize>> = vec![None; n + 1];
    let mut comp = vec![usize::MAX; n + 1];
    let order: Vec<usize> = std::iter::once(ground).chain(0..n).collect();
    let mut ncomp = 0;
    for &s in &order {
        if value[s].is_some() {
            continue;
        }
        value[s] = Some(0);
        comp[s] = ncomp;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &(v, w) in &adj[u] {
                if value[v].is_none() {
                    value[v] = Some(value[u].unwrap() + w);
                    parent[v] = Some(u);
                    comp[v] = ncomp;
                    queue.push_back(v);
                }
            }
        }
        ncomp += 1;
    }
    let val = |x: usize| value[x].unwrap();
    for &(a, b, w) in &edges {
        let disc = val(a) + w - val(b);
        if !ring.is_zero(disc) {
            return Err(Error::Infeasible(describe_cycle(&parent, a, b, disc, ground)));
        }
    }
    let mut values: Vec<i64> = (0..n).map(val).collect();
    let ground_comp = comp[ground];
    for c in 0..ncomp {
        if c == ground_comp {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&x| comp[x] == c).collect();
        if let Some(min) = members.iter().map(|&x| values[x]).min() {
            for x in members {
                values[x] -= min;
            }
        }
    }
    for v in values.iter_mut() {
        *v = ring.reduce(*v);
    }
    Ok(MaslovPotential { ring, arcs, values })
}

fn describe_cycle(parent: &[Option<usize>], a: usize, b: usize, disc: i64, ground: usize) -> String {
    let path = |mut x: usize| {
        let mut out = vec![x];
        while let Some(p) = parent[x] {
            out.push(p);
            x = p;
        }
        out.reverse();
        out
    };
    let (pa, pb) = (path(a), path(b));
    let common = pa.iter().zip(&pb).take_while(|(x, y)| x == y).count();
    let mut cycle: Vec<usize> = pa[common - 1..].to_vec();
    cycle.extend(pb[common..].iter().rev());
    cycle.push(cycle[0]);
    let names: Vec<String> = cycle
        .iter()
        .map(|&x| if x == ground { "fixed".to_string() } else { format!("arc{}", x) })
        .collect();
    format!("cycle {} has sum {}", names.join(" -> "), disc)
}

/// Grading of the crossing at slice `k`: upper-left minus lower-left.
pub fn crossing_grading(d: &FrontDiagram, mu: &MaslovPotential, k: usize) -> i64 {
    let p = d.slices[k].pos();
    mu.ring.reduce(mu.at(k, p) - mu.at(k, p + 1))
}

/// Potentials on the half-edges at a vertex, or on a border.
/// Labels 0..right are the right side top-down, then the left side top-down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedContext {
    pub right: Vec<i64>,
    pub left: Vec<i64>,
}

impl GradedContext {
    pub fn vertex(mu: &MaslovPotential, slice: usize, pos: usize, left: usize, right: usize) -> Self {
        Self {
            right: (0..right).map(|i| mu.at(slice + 1, pos + i)).collect(),
            left: (0..left).map(|i| mu.at(slice, pos + i)).collect(),
        }
    }

    /// A border column: all labels on one side.
    pub fn border(potentials: Vec<i64>) -> Self {
        Self { right: potentials, left: vec![] }
    }

    fn label(&self, i: usize) -> (bool, i64) {
        if i < self.right.len() {
            (true, self.right[i])
        } else {
            (false, self.left[i - self.right.len()])
        }
    }

    pub fn size(&self) -> usize {
        self.right.len() + self.left.len()
    }
}

/// Same-side pairs need upper minus lower ≡ 1 and through pairs need equal
/// potentials, both modulo ρ (and modulo m when the ring is Z/m).
pub fn is_rho_graded_matching(ctx: &GradedContext, phi: &Matching, ring: Ring, rho: u64) -> bool {
    let g = ring.graded(rho);
    phi.pairs().into_iter().all(|(i, j)| {
        let (si, mi) = ctx.label(i);
        let (sj, mj) = ctx.label(j);
        if si == sj {
            // i < j so i is the upper label
            g.is_zero(mi - mj - 1)
        } else {
            g.is_zero(mi - mj)
        }
    })
}
