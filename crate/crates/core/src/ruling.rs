//! ρ-graded normal rulings by a left-to-right sweep, ruling polynomials,
//! transfer matrices, gluing, pairs and doubling.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::front::{Event, FrontDiagram};
use crate::maslov::{crossing_grading, is_rho_graded_matching, solve_maslov, GradedContext, MaslovPotential, Ring};
use crate::poly::HalfLaurent;
use crate::resolve::{full_resolutions, Matching, Resolution};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Census {
    pub eyes: usize,
    pub lhe: usize,
    pub rhe: usize,
    pub par: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalRuling {
    /// Slice indices of switches in the (resolved) diagram.
    pub switches: Vec<usize>,
    #[serde(serialize_with = "ser_matching")]
    pub left: Matching,
    #[serde(serialize_with = "ser_matching")]
    pub right: Matching,
    pub components: Census,
    /// Weight exponent in half-steps.
    pub exponent: i64,
    /// Vertex matchings when the input had vertices.
    #[serde(serialize_with = "ser_choice")]
    pub resolution: Option<Vec<Matching>>,
}

fn ser_matching<S: serde::Serializer>(m: &Matching, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&m.to_string())
}

fn ser_choice<S: serde::Serializer>(m: &Option<Vec<Matching>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match m {
        None => s.serialize_none(),
        Some(v) => s.collect_seq(v.iter().map(|x| x.to_string())),
    }
}

impl fmt::Display for NormalRuling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sw: Vec<String> = self.switches.iter().map(|k| (k + 1).to_string()).collect();
        write!(
            f,
            "{{switches:[{}], exponent:{}, components:{{eyes:{},lhe:{},rhe:{},par:{}}}}}",
            sw.join(","),
            self.exponent,
            self.components.eyes,
            self.components.lhe,
            self.components.rhe,
            self.components.par
        )
    }
}

/// Sweep state: partner of each strand and whether its component was born
/// at a left cusp.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct State {
    pair: Vec<u16>,
    born: Vec<bool>,
}

impl State {
    fn start(phi: &Matching) -> Self {
        Self {
            pair: phi.as_slice().iter().map(|&x| x as u16).collect(),
            born: vec![false; phi.len()],
        }
    }

    fn insert(&mut self, p: usize) {
        for x in self.pair.iter_mut() {
            if *x as usize >= p {
                *x += 2;
            }
        }
        self.pair.splice(p..p, [p as u16 + 1, p as u16]);
        self.born.splice(p..p, [true, true]);
    }

    fn remove(&mut self, p: usize) {
        self.pair.drain(p..p + 2);
        self.born.drain(p..p + 2);
        for x in self.pair.iter_mut() {
            if *x as usize > p {
                *x -= 2;
            }
        }
    }

    fn swap(&mut self, p: usize) {
        let (a, b) = (self.pair[p] as usize, self.pair[p + 1] as usize);
        self.pair.swap(p, p + 1);
        self.born.swap(p, p + 1);
        self.pair[a] = p as u16 + 1;
        self.pair[b] = p as u16;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    Pass,
    Switch,
    Eye,
    RightHalfEye,
    Plain,
}

impl Step {
    fn weight(&self) -> i64 {
        match self {
            Step::Switch => 2,
            Step::Eye => -2,
            Step::RightHalfEye => -1,
            _ => 0,
        }
    }
}

fn normal_switch(st: &State, p: usize) -> bool {
    let a = st.pair[p] as usize;
    let b = st.pair[p + 1] as usize;
    let i1 = (p.min(a), p.max(a));
    let i2 = ((p + 1).min(b), (p + 1).max(b));
    let inside = |x: (usize, usize), y: (usize, usize)| y.0 <= x.0 && x.1 <= y.1;
    inside(i1, i2) || inside(i2, i1) || i1.1 < i2.0 || i2.1 < i1.0
}

/// Successor states of one event. `may_switch` says the crossing is
/// unmarked with grading ≡ 0 mod ρ.
fn successors(st: &State, e: &Event, may_switch: bool) -> Vec<(State, Step)> {
    match e {
        Event::LeftCusp(p) => {
            let mut s = st.clone();
            s.insert(*p);
            vec![(s, Step::Plain)]
        }
        Event::RightCusp(p) => {
            if st.pair[*p] as usize != p + 1 {
                return vec![];
            }
            let kind = if st.born[*p] { Step::Eye } else { Step::RightHalfEye };
            let mut s = st.clone();
            s.remove(*p);
            vec![(s, kind)]
        }
        Event::Crossing { pos, .. } => {
            let p = *pos;
            if st.pair[p] as usize == p + 1 {
                return vec![];
            }
            let mut out = Vec::with_capacity(2);
            let mut s = st.clone();
            s.swap(p);
            out.push((s, Step::Pass));
            if may_switch && normal_switch(st, p) {
                out.push((st.clone(), Step::Switch));
            }
            out
        }
        Event::Vertex { .. } => unreachable!("vertices are resolved before sweeping"),
    }
}

fn final_census(st: &State) -> (usize, usize) {
    let comps = st.pair.len() / 2;
    let lhe = (0..st.pair.len()).filter(|&i| i < st.pair[i] as usize && st.born[i]).count();
    (lhe, comps - lhe)
}

/// Which slices may be switches.
fn switchable(d: &FrontDiagram, mu: &MaslovPotential, rho: u64) -> Vec<bool> {
    let g = mu.ring.graded(rho);
    d.slices
        .iter()
        .enumerate()
        .map(|(k, e)| match e {
            Event::Crossing { marked: false, .. } => g.is_zero(crossing_grading(d, mu, k)),
            _ => false,
        })
        .collect()
}

fn check_vertex_free(d: &FrontDiagram) -> Result<()> {
    if d.has_vertices() {
        return Err(Error::Unsupported("resolve vertices before enumerating rulings".into()));
    }
    Ok(())
}

fn check_border(d: &FrontDiagram, phi: &Matching, psi: &Matching) -> Result<()> {
    if phi.len() != d.left || psi.len() != d.right {
        return Err(Error::Matching(format!(
            "border matchings have {} and {} labels, diagram has type ({}, {})",
            phi.len(),
            psi.len(),
            d.left,
            d.right
        )));
    }
    Ok(())
}

/// Border matchings must be ρ-graded for the border potentials.
pub fn border_graded(d: &FrontDiagram, mu: &MaslovPotential, rho: u64, phi: &Matching, psi: &Matching) -> bool {
    let l = GradedContext::border(mu.column(0));
    let r = GradedContext::border(mu.column(d.len()));
    is_rho_graded_matching(&l, phi, mu.ring, rho) && is_rho_graded_matching(&r, psi, mu.ring, rho)
}

/// Depth-first list of rulings of a vertex-free diagram, pass before switch.
pub fn enumerate_rulings(
    d: &FrontDiagram,
    mu: &MaslovPotential,
    rho: u64,
    phi: &Matching,
    psi: &Matching,
) -> Result<Vec<NormalRuling>> {
    check_vertex_free(d)?;
    check_border(d, phi, psi)?;
    if !border_graded(d, mu, rho, phi, psi) {
        return Ok(vec![]);
    }
    let sw = switchable(d, mu, rho);
    let mut out = Vec::new();
    let mut path = Vec::new();
    let mut census = Census::default();
    dfs(d, &sw, 0, State::start(phi), psi, &mut path, &mut census, 0, phi, &mut out);
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    d: &FrontDiagram,
    sw: &[bool],
    k: usize,
    st: State,
    psi: &Matching,
    path: &mut Vec<usize>,
    census: &mut Census,
    weight: i64,
    phi: &Matching,
    out: &mut Vec<NormalRuling>,
) {
    if k == d.slices.len() {
        if st.pair.iter().map(|&x| x as usize).eq(psi.as_slice().iter().copied()) {
            let (lhe, par) = final_census(&st);
            let mut c = *census;
            c.lhe = lhe;
            c.par = par;
            out.push(NormalRuling {
                switches: path.clone(),
                left: phi.clone(),
                right: psi.clone(),
                components: c,
                exponent: weight - lhe as i64,
                resolution: None,
            });
        }
        return;
    }
    for (next, step) in successors(&st, &d.slices[k], sw[k]) {
        match step {
            Step::Switch => path.push(k),
            Step::Eye => census.eyes += 1,
            Step::RightHalfEye => census.rhe += 1,
            _ => {}
        }
        dfs(d, sw, k + 1, next, psi, path, census, weight + step.weight(), phi, out);
        match step {
            Step::Switch => {
                path.pop();
            }
            Step::Eye => census.eyes -= 1,
            Step::RightHalfEye => census.rhe -= 1,
            _ => {}
        }
    }
}

/// Sweep all states at once; returns final pairing → polynomial.
fn sweep(d: &FrontDiagram, sw: &[bool], phi: &Matching) -> HashMap<Vec<u16>, HalfLaurent> {
    let mut layer: HashMap<State, HalfLaurent> = HashMap::new();
    layer.insert(State::start(phi), HalfLaurent::one());
    for (k, e) in d.slices.iter().enumerate() {
        let mut next: HashMap<State, HalfLaurent> = HashMap::with_capacity(layer.len() * 2);
        for (st, poly) in &layer {
            for (s, step) in successors(st, e, sw[k]) {
                let w = step.weight();
                next.entry(s).or_default().add_assign_ref(&poly.shift(w));
            }
        }
        next.retain(|_, p| !p.is_zero());
        layer = next;
    }
    let mut out: HashMap<Vec<u16>, HalfLaurent> = HashMap::new();
    for (st, poly) in layer {
        let (lhe, _) = final_census(&st);
        out.entry(st.pair).or_default().add_assign_ref(&poly.shift(-(lhe as i64)));
    }
    out
}

/// Ruling polynomial of a vertex-free diagram.
pub fn ruling_polynomial_plain(
    d: &FrontDiagram,
    mu: &MaslovPotential,
    rho: u64,
    phi: &Matching,
    psi: &Matching,
) -> Result<HalfLaurent> {
    check_vertex_free(d)?;
    check_border(d, phi, psi)?;
    if !border_graded(d, mu, rho, phi, psi) {
        return Ok(HalfLaurent::zero());
    }
    let sw = switchable(d, mu, rho);
    let key: Vec<u16> = psi.as_slice().iter().map(|&x| x as u16).collect();
    Ok(sweep(d, &sw, phi).remove(&key).unwrap_or_default())
}

/// Sum over full resolutions of the ruling polynomial.
pub fn ruling_polynomial(
    d: &FrontDiagram,
    mu: &MaslovPotential,
    rho: u64,
    phi: &Matching,
    psi: &Matching,
) -> Result<HalfLaurent> {
    Ok(per_resolution(d, mu, rho, phi, psi)?
        .into_iter()
        .fold(HalfLaurent::zero(), |acc, (_, p)| acc + p))
}

/// Ruling polynomial of each resolution, in resolution order.
pub fn per_resolution(
    d: &FrontDiagram,
    mu: &MaslovPotential,
    rho: u64,
    phi: &Matching,
    psi: &Matching,
) -> Result<Vec<(Vec<Matching>, HalfLaurent)>> {
    check_border(d, phi, psi)?;
    let res = full_resolutions(d, mu, rho)?;
    crate::pool().install(|| {
        res.par_iter()
            .map(|r| {
                // border potentials come from the original diagram
                let p = if border_graded(d, mu, rho, phi, psi) {
                    let sw = switchable(&r.diagram, &r.potential, rho);
                    let key: Vec<u16> = psi.as_slice().iter().map(|&x| x as u16).collect();
                    sweep(&r.diagram, &sw, phi).remove(&key).unwrap_or_default()
                } else {
                    HalfLaurent::zero()
                };
                Ok((r.choice.clone(), p))
            })
            .collect()
    })
}

/// All rulings of a graph: rulings of every full resolution.
pub fn enumerate_graph_rulings(
    d: &FrontDiagram,
    mu: &MaslovPotential,
    rho: u64,
    phi: &Matching,
    psi: &Matching,
) -> Result<Vec<NormalRuling>> {
    check_border(d, phi, psi)?;
    if !border_graded(d, mu, rho, phi, psi) {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    for r in full_resolutions(d, mu, rho)? {
        let Resolution { choice, diagram, potential } = r;
        let sw = switchable(&diagram, &potential, rho);
        let mut list = Vec::new();
        let mut path = Vec::new();
        let mut census = Census::default();
        dfs(&diagram, &sw, 0, State::start(phi), psi, &mut path, &mut census, 0, phi, &mut list);
        for mut nr in list {
            if !choice.is_empty() {
                nr.resolution = Some(choice.clone());
            }
            out.push(nr);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferMatrix {
    pub rows: Vec<Matching>,
    pub cols: Vec<Matching>,
    pub entries: Vec<Vec<HalfLaurent>>,
}

impl TransferMatrix {
    pub fn get(&self, phi: &Matching, psi: &Matching) -> Option<&HalfLaurent> {
        let i = self.rows.iter().position(|m| m == phi)?;
        let j = self.cols.iter().position(|m| m == psi)?;
        Some(&self.entries[i][j])
    }

    pub fn mul(&self, other: &TransferMatrix) -> Result<TransferMatrix> {
        if self.cols != other.rows {
            return Err(Error::BorderMismatch(self.cols.len(), other.rows.len()));
        }
        let mut entries = vec![vec![HalfLaurent::zero(); other.cols.len()]; self.rows.len()];
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                for k in 0..self.cols.len() {
                    if !self.entries[i][k].is_zero() && !other.entries[k][j].is_zero() {
                        cell.add_assign_ref(&(&self.entries[i][k] * &other.entries[k][j]));
                    }
                }
            }
        }
        Ok(TransferMatrix { rows: self.rows.clone(), cols: other.cols.clone(), entries })
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (i, phi) in self.rows.iter().enumerate() {
            for (j, psi) in self.cols.iter().enumerate() {
                s.push_str(&format!("{} | {} : {}\n", phi, psi, self.entries[i][j]));
            }
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rows": self.rows.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            "cols": self.cols.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            "entries": self.entries.iter().map(|r| r.iter().map(|p| p.to_json()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

fn border_options(mu: &MaslovPotential, interval: usize, rho: u64) -> Vec<Matching> {
    let ctx = GradedContext::border(mu.column(interval));
    Matching::enumerate(ctx.size())
        .unwrap_or_default()
        .into_iter()
        .filter(|m| is_rho_graded_matching(&ctx, m, mu.ring, rho))
        .collect()
}

pub fn transfer_matrix(d: &FrontDiagram, mu: &MaslovPotential, rho: u64) -> Result<TransferMatrix> {
    let rows = border_options(mu, 0, rho);
    let cols = border_options(mu, d.len(), rho);
    let res = full_resolutions(d, mu, rho)?;
    let entries = crate::pool().install(|| {
        rows.par_iter()
            .map(|phi| {
                let mut row = vec![HalfLaurent::zero(); cols.len()];
                for r in &res {
                    let sw = switchable(&r.diagram, &r.potential, rho);
                    let fin = sweep(&r.diagram, &sw, phi);
                    for (j, psi) in cols.iter().enumerate() {
                        let key: Vec<u16> = psi.as_slice().iter().map(|&x| x as u16).collect();
                        if let Some(p) = fin.get(&key) {
                            row[j].add_assign_ref(p);
                        }
                    }
                }
                row
            })
            .collect()
    });
    Ok(TransferMatrix { rows, cols, entries })
}

/// Potential of slices `a..b` taken from a potential of the whole.
pub fn restrict_potential(d: &FrontDiagram, mu: &MaslovPotential, a: usize, b: usize) -> Result<(FrontDiagram, MaslovPotential)> {
    let counts = d.strand_counts();
    let part = FrontDiagram::new(counts[a], counts[b], d.slices[a..b].to_vec());
    let mut fixed = Vec::new();
    for k in a..=b {
        for (p, v) in mu.column(k).into_iter().enumerate() {
            fixed.push((k - a, p, v));
        }
    }
    let m = solve_maslov(&part, mu.ring, &fixed)?;
    Ok((part, m))
}

/// Transfer matrix of the whole equals the product of the parts cut at `k`.
pub fn glue_check(d: &FrontDiagram, mu: &MaslovPotential, k: usize, rho: u64) -> Result<bool> {
    let (d1, m1) = restrict_potential(d, mu, 0, k)?;
    let (d2, m2) = restrict_potential(d, mu, k, d.len())?;
    let whole = transfer_matrix(d, mu, rho)?;
    let prod = transfer_matrix(&d1, &m1, rho)?.mul(&transfer_matrix(&d2, &m2, rho)?)?;
    Ok(whole == prod)
}

/// Sum of diagonal entries over block-respecting ρ-graded matchings.
pub fn pair_ruling_polynomial(d: &FrontDiagram, mu: &MaslovPotential, rho: u64, blocks: &[usize]) -> Result<HalfLaurent> {
    if d.left != d.right || blocks.iter().sum::<usize>() != d.left {
        return Err(Error::Matching(format!(
            "blocks {:?} do not fill a type ({}, {}) diagram",
            blocks, d.left, d.right
        )));
    }
    if blocks.iter().any(|b| b % 2 != 0) {
        return Err(Error::Matching("blocks must be even".into()));
    }
    let mut total = HalfLaurent::zero();
    for phi in Matching::enumerate_blocks(blocks)? {
        total.add_assign_ref(&ruling_polynomial(d, mu, rho, &phi, &phi)?);
    }
    Ok(total)
}

/// Rotate every left half-edge of a vertex at `p` to the bottom of its
/// right side, one cusp each; returns the position of the resulting (0, n)
/// vertex and the word that follows it. Half-edge labels are unchanged.
fn rotate_left_edges(p: usize, left: usize, right: usize) -> (usize, Vec<Event>) {
    if left == 0 {
        return (p, vec![]);
    }
    let (q, mut word) = rotate_left_edges(p + 1, left - 1, right + 1);
    word.extend((p..p + right).map(Event::x));
    word.push(Event::RightCusp(p + right));
    (q, word)
}

/// Word replacing a vertex when its half-edges arrive as a bundle directly
/// below the `active` strands.
fn bundle_word(p: usize, left: usize, right: usize, active: usize) -> Vec<Event> {
    let n = left + right;
    let (q, fold) = rotate_left_edges(p, left, right);
    let mut out = Vec::new();
    // the bundle climbs from the bottom to position q
    for s in (q..active).rev() {
        out.extend((s..s + n).map(Event::x));
    }
    out.extend(fold);
    out
}

/// Bundle the half-edges of every vertex of a closed diagram onto the left
/// border, first vertex on top. Returns the (n, 0) tangle and block sizes.
pub fn pull_vertices_left(d: &FrontDiagram) -> Result<(FrontDiagram, Vec<usize>)> {
    if !d.is_closed() {
        return Err(Error::Unsupported("doubling needs a closed diagram".into()));
    }
    d.check()?;
    let blocks: Vec<usize> = d.vertices().iter().map(|v| v.left + v.right).collect();
    let n: usize = blocks.iter().sum();
    let counts = d.strand_counts();
    let mut out = Vec::new();
    for (k, e) in d.slices.iter().enumerate() {
        match e {
            Event::Vertex { pos, left, right, .. } => out.extend(bundle_word(*pos, *left, *right, counts[k])),
            _ => out.push(e.clone()),
        }
    }
    Ok((FrontDiagram::new(n, 0, out), blocks))
}

/// The pair L̃ = L̃₁·L̃₂ of type (n, n) with its blocks.
pub fn double(d: &FrontDiagram) -> Result<(FrontDiagram, Vec<usize>)> {
    let (l1, blocks) = pull_vertices_left(d)?;
    let l2 = l1.reflect();
    Ok((l1.concatenate(&l2)?, blocks))
}

/// Potential on the pair of a doubled diagram compatible with μ on `d`.
pub fn double_potential(d: &FrontDiagram, mu: &MaslovPotential, pair: &FrontDiagram) -> Result<MaslovPotential> {
    let counts = d.strand_counts();
    let mut fixed = Vec::new();
    let mut k1 = 0;
    for (k, e) in d.slices.iter().enumerate() {
        // active strands sit on top of the not yet used bundles
        for p in 0..counts[k] {
            fixed.push((k1, p, mu.at(k, p)));
        }
        k1 += match e {
            Event::Vertex { pos, left, right, .. } => bundle_word(*pos, *left, *right, counts[k]).len(),
            _ => 1,
        };
    }
    debug_assert_eq!(2 * k1, pair.len());
    let mirrored: Vec<_> = fixed.iter().map(|&(k, p, v)| (pair.len() - k, p, v)).collect();
    fixed.extend(mirrored);
    solve_maslov(pair, mu.ring, &fixed)
}

/// Close a tangle of type (n, 0) with one (0, nᵢ) vertex per block.
pub fn close_left_blocks(t: &FrontDiagram, blocks: &[usize]) -> FrontDiagram {
    let mut slices = Vec::new();
    let mut pos = 0;
    for &b in blocks {
        slices.push(Event::v(pos, 0, b));
        pos += b;
    }
    slices.extend(t.slices.iter().cloned());
    FrontDiagram::new(0, t.right, slices)
}

/// R₁ skein children of a (2,2) vertex at slice k: crossing, cap-cup, parallel.
pub fn front_children(d: &FrontDiagram, k: usize) -> Result<(FrontDiagram, FrontDiagram, FrontDiagram)> {
    match &d.slices[k] {
        Event::Vertex { pos, left: 2, right: 2, .. } => {
            let p = *pos;
            Ok((
                d.splice(k, 1, vec![Event::x(p)]),
                d.splice(k, 1, vec![Event::RightCusp(p), Event::LeftCusp(p)]),
                d.splice(k, 1, vec![]),
            ))
        }
        _ => Err(Error::Unsupported(format!("slice {} is not a (2,2) vertex", k + 1))),
    }
}

/// Closed-diagram ruling polynomial with empty border matchings.
pub fn closed_polynomial(d: &FrontDiagram, ring: Ring, rho: u64) -> Result<HalfLaurent> {
    let mu = solve_maslov(d, ring, &[])?;
    let e = Matching::empty();
    let (phi, psi) = (
        if d.left == 0 { e.clone() } else { return Err(Error::Unsupported("diagram is not closed".into())) },
        if d.right == 0 { e } else { return Err(Error::Unsupported("diagram is not closed".into())) },
    );
    ruling_polynomial(d, &mu, rho, &phi, &psi)
}
