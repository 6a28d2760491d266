//! Unnormalized and normalized Kauffman polynomials of resolved fronts,
//! extended to 4-valent nodes by the Kauffman-Vogel relation, and the
//! comparison with the ungraded ruling polynomial.

use std::collections::{HashMap, VecDeque};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::front::FrontDiagram;
use crate::pd::{crossing_sign, ng_resolution, total_tb, PdDiagram};
use crate::poly::{HalfLaurent, MultiLaurent};
use crate::ruling::closed_polynomial;
use crate::Ring;

/// Factor contributed by each extra split component.
pub fn delta() -> MultiLaurent {
    let mut d = MultiLaurent::one();
    d.add_assign_ref(&MultiLaurent::monomial([1, -1, 0, 0], 1));
    d.add_assign_ref(&MultiLaurent::monomial([-1, -1, 0, 0], -1));
    d
}

/// How a node is replaced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeChild {
    /// Crossing shaped like a resolved front crossing.
    Cross,
    /// The opposite crossing.
    CrossBar,
    /// Legs 4-1 and 3-2 joined.
    Horizontal,
    /// Legs 4-3 and 1-2 joined.
    Vertical,
}

/// Join edge ends pairwise; returns the number of closed loops created.
fn join_all(slots: &mut [&mut [usize; 4]], pairs: &[(usize, usize)]) -> usize {
    let mut pairs = pairs.to_vec();
    let mut loops = 0;
    for k in 0..pairs.len() {
        let (a, b) = pairs[k];
        if a == b {
            loops += 1;
            continue;
        }
        for s in slots.iter_mut() {
            for e in s.iter_mut() {
                if *e == b {
                    *e = a;
                }
            }
        }
        for p in pairs[k + 1..].iter_mut() {
            if p.0 == b {
                p.0 = a;
            }
            if p.1 == b {
                p.1 = a;
            }
        }
    }
    loops
}

fn compact(slots: &mut [&mut [usize; 4]]) {
    let mut relabel = HashMap::new();
    for s in slots.iter_mut() {
        for e in s.iter_mut() {
            let n = relabel.len();
            *e = *relabel.entry(*e).or_insert(n);
        }
    }
}

/// Replace node `i` (legs clockwise x1..x4 from the top right).
pub fn expand_node(pd: &PdDiagram, i: usize, child: NodeChild) -> PdDiagram {
    let [x1, x2, x3, x4] = pd.nodes[i];
    let mut out = pd.clone();
    out.nodes.remove(i);
    let pairs = match child {
        NodeChild::Cross => {
            out.crossings.push([x3, x2, x1, x4]);
            vec![]
        }
        NodeChild::CrossBar => {
            out.crossings.push([x2, x1, x4, x3]);
            vec![]
        }
        NodeChild::Horizontal => vec![(x4, x1), (x3, x2)],
        NodeChild::Vertical => vec![(x4, x3), (x1, x2)],
    };
    let mut slots: Vec<&mut [usize; 4]> = out.crossings.iter_mut().chain(out.nodes.iter_mut()).collect();
    let loops = join_all(&mut slots, &pairs);
    compact(&mut slots);
    out.free_loops += loops;
    out
}

/// A node-free diagram.
#[derive(Clone, Debug)]
struct Link {
    xs: Vec<[usize; 4]>,
    loops: usize,
}

impl Link {
    fn from_pd(pd: &PdDiagram) -> Link {
        Link { xs: pd.crossings.clone(), loops: pd.free_loops }
    }

    /// Smooth crossing `i` joining slots (0,1),(2,3) or (0,3),(1,2).
    fn smooth(&self, i: usize, horizontal: bool) -> Link {
        let c = self.xs[i];
        let pairs = if horizontal { [(c[0], c[1]), (c[3], c[2])] } else { [(c[0], c[3]), (c[1], c[2])] };
        let mut xs = self.xs.clone();
        xs.remove(i);
        let mut slots: Vec<&mut [usize; 4]> = xs.iter_mut().collect();
        let loops = join_all(&mut slots, &pairs);
        Link { xs, loops: self.loops + loops }
    }

    fn switch(&mut self, i: usize) {
        self.xs[i].rotate_left(1);
    }

    /// Remove one-crossing kinks; returns the power of a collected.
    fn remove_kinks(&mut self) -> i64 {
        let mut a = 0;
        'outer: loop {
            for i in 0..self.xs.len() {
                let c = self.xs[i];
                for k in 0..4 {
                    if c[k] == c[(k + 1) % 4] {
                        // loop on slots k, k+1; the other two ends are joined
                        a += if k % 2 == 0 { 1 } else { -1 };
                        let (x, y) = (c[(k + 2) % 4], c[(k + 3) % 4]);
                        self.xs.remove(i);
                        let mut slots: Vec<&mut [usize; 4]> = self.xs.iter_mut().collect();
                        self.loops += join_all(&mut slots, &[(x, y)]);
                        continue 'outer;
                    }
                }
            }
            return a;
        }
    }

    /// Split into connected pieces with crossings; free loops stay in
    /// `self.loops`.
    fn pieces(&self) -> Vec<Vec<[usize; 4]>> {
        let mut by_edge: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, c) in self.xs.iter().enumerate() {
            for &e in c {
                by_edge.entry(e).or_default().push(i);
            }
        }
        let mut seen = vec![false; self.xs.len()];
        let mut out = Vec::new();
        for s in 0..self.xs.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            let mut piece = Vec::new();
            while let Some(i) = queue.pop_front() {
                piece.push(self.xs[i]);
                for e in self.xs[i] {
                    for &j in &by_edge[&e] {
                        if !seen[j] {
                            seen[j] = true;
                            queue.push_back(j);
                        }
                    }
                }
            }
            out.push(piece);
        }
        out
    }
}

/// Canonical encoding of a connected crossing list, minimal over all
/// starting crossings and rotations; the last entry of each crossing block
/// is 0 when the under strand sits in the first slot.
fn canonical(xs: &[[usize; 4]]) -> Vec<u32> {
    let mut ends: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for (i, c) in xs.iter().enumerate() {
        for (s, &e) in c.iter().enumerate() {
            ends.entry(e).or_default().push((i, s));
        }
    }
    let mut best: Option<Vec<u32>> = None;
    for c0 in 0..xs.len() {
        for r0 in 0..4 {
            let mut rot = vec![usize::MAX; xs.len()];
            let mut order = Vec::with_capacity(xs.len());
            let mut edge_no: HashMap<usize, u32> = HashMap::new();
            let mut enc = Vec::with_capacity(5 * xs.len());
            rot[c0] = r0;
            order.push(c0);
            let mut head = 0;
            while head < order.len() {
                let c = order[head];
                head += 1;
                let r = rot[c];
                for k in 0..4 {
                    let s = (r + k) % 4;
                    let e = xs[c][s];
                    let n = edge_no.len() as u32;
                    enc.push(*edge_no.entry(e).or_insert(n));
                    for &(c2, s2) in &ends[&e] {
                        if (c2, s2) != (c, s) && rot[c2] == usize::MAX {
                            rot[c2] = s2;
                            order.push(c2);
                        }
                    }
                }
                enc.push((r % 2) as u32);
                if let Some(b) = &best {
                    if enc.as_slice() > &b[..enc.len()] {
                        break;
                    }
                }
            }
            if enc.len() == 5 * xs.len() && best.as_ref().map_or(true, |b| enc < *b) {
                best = Some(enc);
            }
        }
    }
    best.unwrap_or_default()
}

/// Per-crossing (component, entry slot, step) of the under and over
/// strands, following components in order from the lowest free slot.
fn trace(xs: &[[usize; 4]]) -> (Vec<[(usize, usize, usize); 2]>, usize) {
    let mut ends: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for (i, c) in xs.iter().enumerate() {
        for (s, &e) in c.iter().enumerate() {
            ends.entry(e).or_default().push((i, s));
        }
    }
    let mut seen = vec![[false; 4]; xs.len()];
    let mut info = vec![[(usize::MAX, 0, 0); 2]; xs.len()];
    let mut comp = 0;
    let mut step = 0;
    for i0 in 0..xs.len() {
        for s0 in 0..4 {
            if seen[i0][s0] {
                continue;
            }
            let mut cur = (i0, s0);
            loop {
                let (i, s) = cur;
                let t = (s + 2) % 4;
                seen[i][s] = true;
                seen[i][t] = true;
                info[i][s % 2] = (comp, s, step);
                step += 1;
                let e = xs[i][t];
                let next = *ends[&e].iter().find(|&&x| x != (i, t)).unwrap();
                if next == (i0, s0) {
                    break;
                }
                cur = next;
            }
            comp += 1;
        }
    }
    (info, comp)
}

type Memo = Mutex<HashMap<Vec<u32>, MultiLaurent>>;

fn eval_link(mut link: Link, memo: &Memo) -> MultiLaurent {
    let a = link.remove_kinks();
    let pieces = link.pieces();
    let count = pieces.len() + link.loops;
    let mut out = MultiLaurent::a_pow(a);
    if count > 1 {
        out = &out * &delta().pow((count - 1) as u32);
    }
    for p in pieces {
        out = &out * &eval_piece(p, memo);
    }
    out
}

/// Connected, kink-free, at least one crossing.
fn eval_piece(xs: Vec<[usize; 4]>, memo: &Memo) -> MultiLaurent {
    let key = canonical(&xs);
    if let Some(v) = memo.lock().unwrap().get(&key) {
        return v.clone();
    }
    let (info, comps) = trace(&xs);
    // the earlier visit of each crossing must be on the over strand
    let defective: Vec<usize> = (0..xs.len())
        .filter(|&i| info[i][0].2 < info[i][1].2)
        .collect();
    let mut cur = Link { xs, loops: 0 };
    let mut total = MultiLaurent::zero();
    let z = MultiLaurent::z_pow(1);
    for &i in &defective {
        let h = eval_link(cur.smooth(i, true), memo);
        let v = eval_link(cur.smooth(i, false), memo);
        total.add_assign_ref(&(&z * &(&h - &v)));
        cur.switch(i);
    }
    let (info, _) = trace(&cur.xs);
    let w: i64 = info
        .iter()
        .filter(|st| st[0].0 == st[1].0)
        .map(|st| crossing_sign(st[0].1, st[1].1))
        .sum();
    let mut unlink = MultiLaurent::a_pow(w);
    if comps > 1 {
        unlink = &unlink * &delta().pow((comps - 1) as u32);
    }
    total.add_assign_ref(&unlink);
    memo.lock().unwrap().insert(key, total.clone());
    total
}

/// Unnormalized polynomial of a diagram; nodes expand as
/// [node] = [crossbar] - B [horizontal] - A [vertical].
pub fn kauffman_pd(pd: &PdDiagram) -> MultiLaurent {
    let memo = Memo::default();
    expand_with(pd, &memo, &node_terms(true))
}

/// Same value through [node] = [cross] - A [horizontal] - B [vertical];
/// the two agree once z = A - B.
pub fn kauffman_pd_cross(pd: &PdDiagram) -> MultiLaurent {
    let memo = Memo::default();
    expand_with(pd, &memo, &node_terms(false))
}

fn node_terms(bar: bool) -> [(NodeChild, MultiLaurent); 3] {
    let (a, b) = (-&MultiLaurent::var_a_big(), -&MultiLaurent::var_b_big());
    if bar {
        [(NodeChild::CrossBar, MultiLaurent::one()), (NodeChild::Horizontal, b), (NodeChild::Vertical, a)]
    } else {
        [(NodeChild::Cross, MultiLaurent::one()), (NodeChild::Horizontal, a), (NodeChild::Vertical, b)]
    }
}

fn expand_with(pd: &PdDiagram, memo: &Memo, terms: &[(NodeChild, MultiLaurent); 3]) -> MultiLaurent {
    if pd.nodes.is_empty() {
        return eval_link(Link::from_pd(pd), memo);
    }
    let parts: Vec<MultiLaurent> = terms
        .par_iter()
        .map(|(child, c)| c * &expand_with(&expand_node(pd, 0, *child), memo, terms))
        .collect();
    parts.iter().fold(MultiLaurent::zero(), |acc, p| &acc + p)
}

pub fn kauffman_unnormalized(d: &FrontDiagram) -> Result<MultiLaurent> {
    let pd = ng_resolution(d)?;
    Ok(crate::pool().install(|| kauffman_pd(&pd)))
}

/// a^(-tb) times the unnormalized polynomial.
pub fn kauffman_normalized(d: &FrontDiagram) -> Result<MultiLaurent> {
    let tb = total_tb(d)?;
    Ok(&MultiLaurent::a_pow(-tb) * &kauffman_unnormalized(d)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KvReport {
    pub tb: i64,
    #[serde(serialize_with = "ser_display")]
    pub lhs: HalfLaurent,
    #[serde(serialize_with = "ser_display")]
    pub rhs: HalfLaurent,
    /// z^-1 F with A = z - 1 and B = -1.
    #[serde(serialize_with = "ser_display")]
    pub shifted: MultiLaurent,
    pub equal: bool,
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Compare the ungraded ruling polynomial with the coefficient of
/// a^(-tb-1) in the substituted z^-1 F.
pub fn check_ruling_coefficient(d: &FrontDiagram) -> Result<KvReport> {
    if d.vertices().iter().any(|v| v.left + v.right != 2 && v.left + v.right != 4) {
        return Err(Error::Unsupported("only 2- and 4-valent vertices are supported".into()));
    }
    let tb = total_tb(d)?;
    let f = kauffman_normalized(d)?;
    let shifted = (&MultiLaurent::z_pow(-1) * &f).substitute_ab();
    let rhs = shifted.coefficient_of_a(-tb - 1);
    let lhs = closed_polynomial(d, Ring::Mod(1), 1)?;
    Ok(KvReport { tb, equal: lhs == rhs, lhs, rhs, shifted })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn front(s: &str) -> FrontDiagram {
        FrontDiagram::from_text(s).unwrap()
    }

    fn circles(n: usize) -> PdDiagram {
        PdDiagram { free_loops: n, ..Default::default() }
    }

    #[test]
    fn circle_values() {
        assert_eq!(kauffman_pd(&circles(1)), MultiLaurent::one());
        assert_eq!(kauffman_pd(&circles(2)), delta());
    }

    #[test]
    fn kinks() {
        // a loop through one crossing, the loop on the bottom slots
        let pos = PdDiagram { crossings: vec![[0, 0, 1, 1]], ..Default::default() };
        assert_eq!(kauffman_pd(&pos), MultiLaurent::a_pow(1));
        let neg = PdDiagram { crossings: vec![[1, 0, 0, 1]], ..Default::default() };
        assert_eq!(kauffman_pd(&neg), MultiLaurent::a_pow(-1));
    }

    #[test]
    fn unknot_front() {
        let d = front("type 0 0\nLC 1\nRC 1\n");
        assert_eq!(kauffman_unnormalized(&d).unwrap(), MultiLaurent::a_pow(-1));
        assert_eq!(kauffman_normalized(&d).unwrap(), MultiLaurent::one());
    }

    #[test]
    fn trefoil_coefficient() {
        let d = front("type 0 0\nLC 1\nLC 3\nX 2\nX 2\nX 2\nRC 1\nRC 1\n");
        let r = check_ruling_coefficient(&d).unwrap();
        assert!(r.equal, "{:?}", r);
    }
}
