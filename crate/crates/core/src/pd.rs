//! Planar diagrams in the xy-plane and the resolution of a front into one.
//!
//! A crossing lists its four edge ends counterclockwise starting at an end of
//! the under strand, so slots 0 and 2 are under and 1 and 3 are over. A node
//! lists its legs clockwise.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::front::{Event, FrontDiagram, UnionFind};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct PdDiagram {
    pub crossings: Vec<[usize; 4]>,
    pub nodes: Vec<[usize; 4]>,
    pub free_loops: usize,
}

impl PdDiagram {
    /// Every edge label must occur in exactly two slots.
    pub fn check(&self) -> Result<()> {
        let mut count = std::collections::HashMap::new();
        for s in self.crossings.iter().chain(&self.nodes) {
            for e in s {
                *count.entry(*e).or_insert(0) += 1;
            }
        }
        match count.iter().find(|(_, &c)| c != 2) {
            Some((e, c)) => Err(Error::Unsupported(format!("edge {} has {} ends", e, c))),
            None => Ok(()),
        }
    }

    pub fn edge_count(&self) -> usize {
        2 * (self.crossings.len() + self.nodes.len())
    }

    /// Slots of each edge as (is_node, index, slot).
    fn ends(&self) -> Vec<Vec<(bool, usize, usize)>> {
        let mut out = vec![Vec::new(); self.edge_count()];
        for (i, c) in self.crossings.iter().enumerate() {
            for (s, &e) in c.iter().enumerate() {
                out[e].push((false, i, s));
            }
        }
        for (i, c) in self.nodes.iter().enumerate() {
            for (s, &e) in c.iter().enumerate() {
                out[e].push((true, i, s));
            }
        }
        out
    }

    /// Trace components of the virtual resolution (nodes pass straight
    /// through to the opposite leg). Returns, per crossing, the component and
    /// entry slot of each of its two strands, and the number of components
    /// including free loops.
    fn trace(&self) -> (Vec<[(usize, usize); 2]>, usize) {
        let ends = self.ends();
        let mut seen_x = vec![[false; 4]; self.crossings.len()];
        let mut seen_n = vec![[false; 4]; self.nodes.len()];
        let mut info = vec![[(usize::MAX, 0); 2]; self.crossings.len()];
        let mut comp = 0;
        let starts: Vec<(bool, usize, usize)> = (0..self.crossings.len())
            .flat_map(|i| (0..4).map(move |s| (false, i, s)))
            .chain((0..self.nodes.len()).flat_map(|i| (0..4).map(move |s| (true, i, s))))
            .collect();
        for start in starts {
            let seen = |node: bool, i: usize, s: usize, sx: &Vec<[bool; 4]>, sn: &Vec<[bool; 4]>| {
                if node { sn[i][s] } else { sx[i][s] }
            };
            if seen(start.0, start.1, start.2, &seen_x, &seen_n) {
                continue;
            }
            let mut cur = start;
            loop {
                let (node, i, s) = cur;
                let t = (s + 2) % 4;
                if node {
                    seen_n[i][s] = true;
                    seen_n[i][t] = true;
                } else {
                    seen_x[i][s] = true;
                    seen_x[i][t] = true;
                    info[i][s % 2] = (comp, s);
                }
                let e = if node { self.nodes[i][t] } else { self.crossings[i][t] };
                let next = *ends[e].iter().find(|&&x| x != (node, i, t)).unwrap_or(&(node, i, t));
                if next == start {
                    break;
                }
                cur = next;
            }
            comp += 1;
        }
        (info, comp + self.free_loops)
    }

    /// Sum over components of the virtual resolution of signed self-crossings.
    pub fn total_writhe(&self) -> i64 {
        let (info, _) = self.trace();
        info.iter()
            .filter(|st| st[0].0 == st[1].0)
            .map(|st| crossing_sign(st[0].1, st[1].1))
            .sum()
    }

    /// Signed self-crossings of each traced component (free loops omitted).
    pub fn component_writhes(&self) -> Vec<i64> {
        let (info, comps) = self.trace();
        let mut w = vec![0; comps - self.free_loops];
        for st in &info {
            if st[0].0 == st[1].0 {
                w[st[0].0] += crossing_sign(st[0].1, st[1].1);
            }
        }
        w
    }

    pub fn component_count(&self) -> usize {
        self.trace().1
    }
}

/// Sign of a crossing given the slots where its under and over strands enter.
pub(crate) fn crossing_sign(under_in: usize, over_in: usize) -> i64 {
    let u = if under_in == 0 { 1 } else { -1 };
    let o = if over_in == 3 { 1 } else { -1 };
    u * o
}

struct Builder {
    uf: UnionFind,
    pd: PdDiagram,
}

impl Builder {
    fn edge(&mut self) -> usize {
        self.uf.push()
    }

    fn cross(&mut self, strands: &mut [usize], p: usize) {
        let (u, l) = (strands[p], strands[p + 1]);
        let (ne, se) = (self.edge(), self.edge());
        self.pd.crossings.push([l, se, ne, u]);
        strands[p] = ne;
        strands[p + 1] = se;
    }

    fn join(&mut self, a: usize, b: usize) {
        if !self.uf.union(a, b) {
            self.pd.free_loops += 1;
        }
    }
}

/// Resolve a closed front into an xy diagram: left cusps become smooth
/// caps, right cusps become kinks, crossings keep the strand falling to the
/// right on top, and the left legs of a vertex pass through a half twist
/// before meeting it. Vertices of valence 2 become plain arcs.
pub fn ng_resolution(d: &FrontDiagram) -> Result<PdDiagram> {
    d.check()?;
    if !d.is_closed() {
        return Err(Error::Unsupported("resolution needs a closed diagram".into()));
    }
    let mut b = Builder { uf: UnionFind::new(0), pd: PdDiagram::default() };
    let mut strands: Vec<usize> = Vec::new();
    for e in &d.slices {
        match e {
            Event::LeftCusp(p) => {
                let x = b.edge();
                strands.splice(*p..*p, [x, x]);
            }
            Event::RightCusp(p) => {
                let (u, l) = (strands[*p], strands[*p + 1]);
                let k = b.edge();
                b.pd.crossings.push([l, k, k, u]);
                strands.drain(*p..*p + 2);
            }
            Event::Crossing { pos, .. } => b.cross(&mut strands, *pos),
            Event::Vertex { pos, left, right, .. } => {
                let p = *pos;
                for i in 1..*left {
                    for j in 0..*left - i {
                        b.cross(&mut strands, p + j);
                    }
                }
                let rights: Vec<usize> = (0..*right).map(|_| b.edge()).collect();
                let mut legs = rights.clone();
                legs.extend(strands[p..p + left].iter().rev());
                match legs.len() {
                    2 => b.join(legs[0], legs[1]),
                    4 => b.pd.nodes.push([legs[0], legs[1], legs[2], legs[3]]),
                    n => {
                        return Err(Error::Unsupported(format!(
                            "vertex of valence {} (only 2 and 4 are resolved)",
                            n
                        )))
                    }
                }
                strands.splice(p..p + left, rights);
            }
        }
    }
    let mut pd = b.pd;
    let mut uf = b.uf;
    let mut relabel = std::collections::HashMap::new();
    for slot in pd.crossings.iter_mut().chain(pd.nodes.iter_mut()) {
        for e in slot.iter_mut() {
            let r = uf.find(*e);
            let n = relabel.len();
            *e = *relabel.entry(r).or_insert(n);
        }
    }
    Ok(pd)
}

/// Total Thurston-Bennequin number: writhe of the resolution with nodes
/// treated as virtual crossings.
pub fn total_tb(d: &FrontDiagram) -> Result<i64> {
    Ok(ng_resolution(d)?.total_writhe())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn front(s: &str) -> FrontDiagram {
        FrontDiagram::from_text(s).unwrap()
    }

    #[test]
    fn unknot_is_one_negative_kink() {
        let pd = ng_resolution(&front("type 0 0\nLC 1\nRC 1\n")).unwrap();
        assert_eq!(pd.crossings.len(), 1);
        pd.check().unwrap();
        assert_eq!(pd.total_writhe(), -1);
    }

    #[test]
    fn trefoil_tb_is_one() {
        let d = front("type 0 0\nLC 1\nLC 3\nX 2\nX 2\nX 2\nRC 1\nRC 1\n");
        assert_eq!(total_tb(&d).unwrap(), 1);
    }

    #[test]
    fn two_valent_vertices_vanish() {
        let d = front("type 0 0\nV 1 0 2\nV 1 2 0\n");
        let pd = ng_resolution(&d).unwrap();
        assert_eq!(pd.crossings.len(), 1);
        assert_eq!(pd.component_count(), 1);
    }

    #[test]
    fn stacked_unknots_have_two_components() {
        let d = front("type 0 0\nLC 1\nLC 3\nRC 3\nRC 1\n");
        let pd = ng_resolution(&d).unwrap();
        assert_eq!(pd.component_count(), 2);
        assert_eq!(pd.total_writhe(), -2);
    }
}
