//! Perfect matchings, permutation braids and marked vertex resolutions.

use std::fmt;

use crate::error::{Error, Result};
use crate::front::{Event, FrontDiagram};
use crate::maslov::{is_rho_graded_matching, solve_maslov, GradedContext, MaslovPotential, Ring};

/// Fixed-point-free involution on labels 0..n (1-based in text).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    partner: Vec<usize>,
}

impl Matching {
    pub fn from_partner(partner: Vec<usize>) -> Result<Self> {
        let n = partner.len();
        for (i, &j) in partner.iter().enumerate() {
            if j >= n || j == i || partner[j] != i {
                return Err(Error::Matching(format!("label {} is not perfectly matched", i + 1)));
            }
        }
        Ok(Self { partner })
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut partner = vec![usize::MAX; n];
        for &(a, b) in pairs {
            if a >= n || b >= n || partner[a] != usize::MAX || partner[b] != usize::MAX {
                return Err(Error::Matching(format!("bad pair {}-{}", a + 1, b + 1)));
            }
            partner[a] = b;
            partner[b] = a;
        }
        Self::from_partner(partner)
    }

    pub fn empty() -> Self {
        Self { partner: vec![] }
    }

    /// Parse "1-6,2-4,3-8,5-7". The label count is the largest label.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return Ok(Self::empty());
        }
        let mut pairs = Vec::new();
        for item in s.split(',') {
            let (a, b) = item
                .split_once('-')
                .ok_or_else(|| Error::Matching(format!("expected a-b, got {:?}", item)))?;
            let num = |t: &str| -> Result<usize> {
                let v: usize = t.trim().parse().map_err(|_| Error::Matching(format!("bad label {:?}", t)))?;
                v.checked_sub(1).ok_or_else(|| Error::Matching("labels are 1-based".into()))
            };
            pairs.push((num(a)?, num(b)?));
        }
        let n = pairs.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
        Self::from_pairs(n, &pairs)
    }

    pub fn len(&self) -> usize {
        self.partner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    pub fn partner(&self, i: usize) -> usize {
        self.partner[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.partner
    }

    /// Pairs (i, j) with i < j, sorted by i.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.partner.len())
            .filter(|&i| i < self.partner[i])
            .map(|i| (i, self.partner[i]))
            .collect()
    }

    /// Matchings on 0..n in lexicographic order of partner vectors.
    pub fn enumerate(n: usize) -> Result<Vec<Matching>> {
        if n % 2 != 0 {
            return Err(Error::Matching(format!("odd label count {}", n)));
        }
        let mut out = Vec::new();
        let mut partner = vec![usize::MAX; n];
        fn rec(partner: &mut Vec<usize>, out: &mut Vec<Matching>) {
            let Some(i) = partner.iter().position(|&x| x == usize::MAX) else {
                out.push(Matching { partner: partner.clone() });
                return;
            };
            for j in i + 1..partner.len() {
                if partner[j] == usize::MAX {
                    partner[i] = j;
                    partner[j] = i;
                    rec(partner, out);
                    partner[i] = usize::MAX;
                    partner[j] = usize::MAX;
                }
            }
        }
        rec(&mut partner, &mut out);
        out.sort();
        Ok(out)
    }

    /// Block-respecting matchings: each consecutive block is matched within itself.
    pub fn enumerate_blocks(blocks: &[usize]) -> Result<Vec<Matching>> {
        let mut acc = vec![Matching::empty()];
        for &b in blocks {
            let local = Matching::enumerate(b)?;
            let mut next = Vec::new();
            for m in &acc {
                for l in &local {
                    let off = m.len();
                    let mut p = m.partner.clone();
                    p.extend(l.partner.iter().map(|x| x + off));
                    next.push(Matching { partner: p });
                }
            }
            acc = next;
        }
        Ok(acc)
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.partner.is_empty() {
            return write!(f, "-");
        }
        let s: Vec<String> = self.pairs().iter().map(|(a, b)| format!("{}-{}", a + 1, b + 1)).collect();
        write!(f, "{}", s.join(","))
    }
}

/// Matchings at a vertex or border that are ρ-graded for the given potentials.
pub fn enumerate_rho_graded(ctx: &GradedContext, ring: Ring, rho: u64) -> Vec<Matching> {
    Matching::enumerate(ctx.size())
        .unwrap_or_default()
        .into_iter()
        .filter(|m| is_rho_graded_matching(ctx, m, ring, rho))
        .collect()
}

/// Positive braid word; generator i crosses positions i and i+1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    pub strands: usize,
    pub gens: Vec<(usize, bool)>,
}

impl BraidWord {
    pub fn new(strands: usize, gens: Vec<usize>) -> Self {
        Self { strands, gens: gens.into_iter().map(|g| (g, false)).collect() }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn marked(&self, m: bool) -> Self {
        Self {
            strands: self.strands,
            gens: self.gens.iter().map(|&(g, _)| (g, m)).collect(),
        }
    }

    /// Strand starting at position i ends at position `perm[i]`.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect();
        for &(g, _) in &self.gens {
            at.swap(g, g + 1);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &s) in at.iter().enumerate() {
            perm[s] = pos;
        }
        perm
    }

    /// True when no pair of strands crosses twice.
    pub fn is_permutation_braid(&self) -> bool {
        self.gens.len() == inversions(&self.permutation())
    }

    pub fn concat(&self, other: &BraidWord) -> BraidWord {
        assert_eq!(self.strands, other.strands);
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().copied());
        BraidWord { strands: self.strands, gens }
    }

    pub fn events(&self, offset: usize) -> Vec<Event> {
        self.gens
            .iter()
            .map(|&(g, marked)| Event::Crossing { pos: g + offset, marked })
            .collect()
    }

    pub fn to_front(&self) -> FrontDiagram {
        FrontDiagram::new(self.strands, self.strands, self.events(0))
    }

    pub fn render(&self) -> String {
        self.gens
            .iter()
            .map(|&(g, m)| format!("s{}{}", g + 1, if m { "*" } else { "" }))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn inversions(perm: &[usize]) -> usize {
    let mut c = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                c += 1;
            }
        }
    }
    c
}

fn check_perm(perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; perm.len()];
    for &x in perm {
        if x >= perm.len() || seen[x] {
            return Err(Error::Matching("not a permutation".into()));
        }
        seen[x] = true;
    }
    Ok(())
}

/// Insertion-sort word: realize the top strands recursively, then bubble
/// the bottom strand up to its target.
pub fn permutation_braid(perm: &[usize]) -> BraidWord {
    check_perm(perm).expect("permutation_braid needs a bijection");
    let b = perm.len();
    if b <= 1 {
        return BraidWord::new(b, vec![]);
    }
    let last = perm[b - 1];
    let rest: Vec<usize> = perm[..b - 1].iter().map(|&x| if x > last { x - 1 } else { x }).collect();
    let mut gens = permutation_braid(&rest).gens;
    gens.extend((last..b - 1).rev().map(|g| (g, false)));
    BraidWord { strands: b, gens }
}

pub fn half_twist(b: usize) -> BraidWord {
    let rev: Vec<usize> = (0..b).rev().collect();
    permutation_braid(&rev)
}

fn need_perm_braid(beta: &BraidWord) -> Result<Vec<usize>> {
    if !beta.is_permutation_braid() {
        return Err(Error::Unsupported("not a permutation braid".into()));
    }
    Ok(beta.permutation())
}

/// β^c with β·β^c = Δ.
pub fn complement(beta: &BraidWord) -> Result<BraidWord> {
    let perm = need_perm_braid(beta)?;
    let b = perm.len();
    let mut inv = vec![0; b];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    let c: Vec<usize> = (0..b).map(|j| b - 1 - inv[j]).collect();
    Ok(permutation_braid(&c))
}

pub fn mirror(beta: &BraidWord) -> BraidWord {
    BraidWord {
        strands: beta.strands,
        gens: beta.gens.iter().rev().copied().collect(),
    }
}

/// Conjugation by the half-twist.
pub fn tau(beta: &BraidWord) -> Result<BraidWord> {
    let perm = need_perm_braid(beta)?;
    let b = perm.len();
    let t: Vec<usize> = (0..b).map(|i| b - 1 - perm[b - 1 - i]).collect();
    Ok(permutation_braid(&t))
}

/// L/B/R split of a vertex matching: labels 0..r are right, r..r+l left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    pub left_pairs: Vec<(usize, usize)>,
    pub right_pairs: Vec<(usize, usize)>,
    pub through: Vec<(usize, usize)>,
}

pub fn split(left: usize, right: usize, phi: &Matching) -> Splitting {
    let r = right;
    let mut s = Splitting { left_pairs: vec![], right_pairs: vec![], through: vec![] };
    debug_assert_eq!(phi.len(), left + right);
    for (i, j) in phi.pairs() {
        match (i < r, j < r) {
            (true, true) => s.right_pairs.push((i, j)),
            (false, false) => s.left_pairs.push((i, j)),
            // (right label, left label)
            _ => s.through.push((i, j)),
        }
    }
    s
}

/// Marked right-cusp gadgets closing off pairs among `labels` (top-down).
/// Returns the events and the labels left over, in order.
fn cap_pairs(labels: &[usize], pairs: &[(usize, usize)]) -> (Vec<Event>, Vec<usize>) {
    let mut cur = labels.to_vec();
    let mut ev = Vec::new();
    let mut sorted = pairs.to_vec();
    sorted.sort();
    for (a, b) in sorted {
        let ia = cur.iter().position(|&x| x == a).unwrap();
        let ib = cur.iter().position(|&x| x == b).unwrap();
        let (top, mut low) = (ia.min(ib), ia.max(ib));
        while low > top + 1 {
            ev.push(Event::xm(low - 1));
            cur.swap(low - 1, low);
            low -= 1;
        }
        ev.push(Event::RightCusp(top));
        cur.drain(top..top + 2);
    }
    (ev, cur)
}

/// Local word replacing a vertex of type (left, right) for matching φ,
/// acting on strands starting at position 0.
pub fn vertex_word(left: usize, right: usize, phi: &Matching) -> Vec<Event> {
    let s = split(left, right, phi);
    let left_labels: Vec<usize> = (right..right + left).collect();
    let right_labels: Vec<usize> = (0..right).collect();
    let (mut word, bl) = cap_pairs(&left_labels, &s.left_pairs);
    let (rev_cups, br) = cap_pairs(&right_labels, &s.right_pairs);
    let b = bl.len();
    debug_assert_eq!(b, br.len());
    let perm: Vec<usize> = bl
        .iter()
        .map(|&l| br.iter().position(|&x| x == phi.partner(l)).unwrap())
        .collect();
    let beta = permutation_braid(&perm);
    let comp = complement(&beta).expect("permutation braid");
    word.extend(beta.marked(false).events(0));
    word.extend(comp.marked(true).events(0));
    word.extend(mirror(&comp).marked(true).events(0));
    word.extend(rev_cups.into_iter().rev().map(|e| match e {
        Event::RightCusp(p) => Event::LeftCusp(p),
        other => other,
    }));
    word
}

/// Replace the vertex at slice `k`. Also returns, for each interval of the
/// new diagram, the original interval it copies (if any).
pub fn resolve_vertex_raw(d: &FrontDiagram, k: usize, phi: &Matching) -> Result<(FrontDiagram, Vec<Option<usize>>)> {
    let Event::Vertex { pos, left, right, .. } = &d.slices[k] else {
        return Err(Error::Unsupported(format!("slice {} is not a vertex", k + 1)));
    };
    if phi.len() != left + right {
        return Err(Error::Matching(format!(
            "vertex has {} half-edges but matching has {} labels",
            left + right,
            phi.len()
        )));
    }
    let word: Vec<Event> = vertex_word(*left, *right, phi)
        .into_iter()
        .map(|e| e.with_pos(e.pos() + pos))
        .collect();
    let wl = word.len();
    let out = d.splice(k, 1, word);
    let mut map: Vec<Option<usize>> = (0..=k).map(Some).collect();
    map.extend(std::iter::repeat(None).take(wl.saturating_sub(1)));
    if wl == 0 {
        // interval k and k+1 coincide; keep the left one
        map.extend((k + 2..=d.len()).map(Some));
    } else {
        map.extend((k + 1..=d.len()).map(Some));
    }
    debug_assert_eq!(map.len(), out.len() + 1);
    Ok((out, map))
}

/// Extend a potential from the original diagram to a resolved one, working
/// in the ring where ρ-graded data lives.
pub fn induced_potential(
    resolved: &FrontDiagram,
    map: &[Option<usize>],
    mu: &MaslovPotential,
    rho: u64,
) -> Result<MaslovPotential> {
    let ring = mu.ring.graded(rho);
    let mut fixed = Vec::new();
    for (k, orig) in map.iter().enumerate() {
        if let Some(o) = orig {
            for (p, v) in mu.column(*o).into_iter().enumerate() {
                fixed.push((k, p, ring.reduce(v)));
            }
        }
    }
    solve_maslov(resolved, ring, &fixed)
}

pub fn resolve_vertex(
    d: &FrontDiagram,
    mu: &MaslovPotential,
    k: usize,
    phi: &Matching,
    rho: u64,
) -> Result<(FrontDiagram, MaslovPotential)> {
    let (out, map) = resolve_vertex_raw(d, k, phi)?;
    let m = induced_potential(&out, &map, mu, rho)?;
    Ok((out, m))
}

#[derive(Clone, Debug)]
pub struct Resolution {
    /// One matching per vertex, in slice order.
    pub choice: Vec<Matching>,
    pub diagram: FrontDiagram,
    pub potential: MaslovPotential,
}

/// ρ-graded matchings for each vertex of `d`, in slice order.
pub fn vertex_options(d: &FrontDiagram, mu: &MaslovPotential, rho: u64) -> Vec<Vec<Matching>> {
    d.vertices()
        .iter()
        .map(|v| {
            let ctx = GradedContext::vertex(mu, v.slice, v.pos, v.left, v.right);
            enumerate_rho_graded(&ctx, mu.ring, rho)
        })
        .collect()
}

/// Resolve every vertex according to `choice`.
pub fn resolve_all(
    d: &FrontDiagram,
    mu: &MaslovPotential,
    choice: &[Matching],
    rho: u64,
) -> Result<Resolution> {
    let mut cur = d.clone();
    let mut map: Vec<Option<usize>> = (0..=d.len()).map(Some).collect();
    // resolve from the right so earlier slice indices stay valid
    let verts = d.vertices();
    for (v, phi) in verts.iter().zip(choice).rev() {
        let (next, m) = resolve_vertex_raw(&cur, v.slice, phi)?;
        map = m.iter().map(|x| x.and_then(|i| map[i])).collect();
        cur = next;
    }
    let potential = induced_potential(&cur, &map, mu, rho)?;
    Ok(Resolution { choice: choice.to_vec(), diagram: cur, potential })
}

/// Cartesian product of per-vertex options in lexicographic order.
pub fn choices(options: &[Vec<Matching>]) -> Vec<Vec<Matching>> {
    let mut acc: Vec<Vec<Matching>> = vec![vec![]];
    for opts in options {
        let mut next = Vec::with_capacity(acc.len() * opts.len());
        for a in &acc {
            for o in opts {
                let mut v = a.clone();
                v.push(o.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

pub fn full_resolutions(d: &FrontDiagram, mu: &MaslovPotential, rho: u64) -> Result<Vec<Resolution>> {
    use rayon::prelude::*;
    let all = choices(&vertex_options(d, mu, rho));
    crate::pool().install(|| all.par_iter().map(|c| resolve_all(d, mu, c, rho)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_counts() {
        assert_eq!(Matching::enumerate(2).unwrap().len(), 1);
        assert_eq!(Matching::enumerate(4).unwrap().len(), 3);
        assert_eq!(Matching::enumerate(6).unwrap().len(), 15);
        assert!(Matching::enumerate(3).is_err());
    }

    #[test]
    fn matching_text() {
        let m = Matching::parse("1-6,2-4,3-8,5-7").unwrap();
        assert_eq!(m.to_string(), "1-6,2-4,3-8,5-7");
        assert!(Matching::parse("1-2,2-3").is_err());
        assert!(Matching::parse("1-3").is_err());
    }

    #[test]
    fn small_braids() {
        assert!(permutation_braid(&[0, 1, 2]).is_empty());
        assert_eq!(permutation_braid(&[1, 0]).gens, vec![(0, false)]);
        assert_eq!(half_twist(2).gens, vec![(0, false)]);
        assert_eq!(half_twist(3).len(), 3);
        assert_eq!(half_twist(3).permutation(), vec![2, 1, 0]);
        assert!(half_twist(1).is_empty());
        assert!(half_twist(0).is_empty());
    }

    #[test]
    fn complements() {
        for b in 0..5 {
            let id = permutation_braid(&(0..b).collect::<Vec<_>>());
            assert_eq!(complement(&id).unwrap(), half_twist(b));
            assert!(complement(&half_twist(b)).unwrap().is_empty());
        }
        let w = BraidWord::new(3, vec![0, 1]);
        assert_eq!(mirror(&w).gens, vec![(1, false), (0, false)]);
        assert!(complement(&BraidWord::new(2, vec![0, 0])).is_err());
    }

    #[test]
    fn the_five_three_example() {
        // right labels 1..3, left labels 4..8; through pairs 1-6, 2-4, 3-8
        let phi = Matching::parse("1-6,2-4,3-8,5-7").unwrap();
        let s = split(5, 3, &phi);
        assert_eq!(s.left_pairs, vec![(4, 6)]);
        assert_eq!(s.through.len(), 3);
        assert!(s.right_pairs.is_empty());
        let word = vertex_word(5, 3, &phi);
        let d = FrontDiagram::new(5, 3, word);
        assert!(d.validate().is_ok());
    }

    #[test]
    fn two_two_children() {
        let through = vertex_word(2, 2, &Matching::parse("1-3,2-4").unwrap());
        assert_eq!(through, vec![Event::xm(0), Event::xm(0)]);
        let crossed = vertex_word(2, 2, &Matching::parse("1-4,2-3").unwrap());
        assert_eq!(crossed, vec![Event::x(0)]);
        let capped = vertex_word(2, 2, &Matching::parse("1-2,3-4").unwrap());
        assert_eq!(capped, vec![Event::RightCusp(0), Event::LeftCusp(0)]);
    }

    #[test]
    fn outward_vertices_are_all_marked() {
        for phi in Matching::enumerate(4).unwrap() {
            let w = vertex_word(0, 4, &phi);
            for e in &w {
                if let Event::Crossing { marked, .. } = e {
                    assert!(*marked);
                }
            }
            assert!(FrontDiagram::new(0, 4, w).validate().is_ok());
        }
    }
}
