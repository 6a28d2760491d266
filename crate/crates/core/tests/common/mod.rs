//! Oracles written independently of the library's sweep and resolution code.
#![allow(dead_code)]

use std::path::PathBuf;

use num_bigint::BigInt;
use ruling_lab::maslov::{crossing_grading, solve_maslov};
use ruling_lab::pd::PdDiagram;
use ruling_lab::*;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus(name: &str) -> FrontDiagram {
    let text = std::fs::read_to_string(corpus_dir().join(format!("{}.front", name))).unwrap();
    FrontDiagram::from_text(&text).unwrap()
}

/// Every valid corpus front, by file stem.
pub fn corpus_all() -> Vec<(String, FrontDiagram)> {
    let mut out = Vec::new();
    let mut paths: Vec<_> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "front"))
        .collect();
    paths.sort();
    for p in paths {
        if let Ok(d) = FrontDiagram::from_text(&std::fs::read_to_string(&p).unwrap()) {
            if d.check().is_ok() {
                out.push((p.file_stem().unwrap().to_string_lossy().into_owned(), d));
            }
        }
    }
    out
}

/// First ring in Z, Z/2, Z/1 that admits a Maslov potential.
pub fn some_ring(d: &FrontDiagram) -> Ring {
    [Ring::Z, Ring::Mod(2), Ring::Mod(1)]
        .into_iter()
        .find(|r| solve_maslov(d, *r, &[]).is_ok())
        .unwrap()
}

/// Closed ruling polynomial of a vertex-free front by trying every switch
/// set and tracking which position each strand's companion occupies.
pub fn brute_rulings(d: &FrontDiagram, ring: Ring, rho: u64) -> HalfLaurent {
    let mu = solve_maslov(d, ring, &[]).unwrap();
    let g = ring.graded(rho);
    let cand: Vec<usize> = d
        .slices
        .iter()
        .enumerate()
        .filter(|(k, e)| matches!(e, Event::Crossing { marked: false, .. }) && g.is_zero(crossing_grading(d, &mu, *k)))
        .map(|(k, _)| k)
        .collect();
    let eyes = d.slices.iter().filter(|e| matches!(e, Event::LeftCusp(_))).count() as i64;
    let mut out = HalfLaurent::zero();
    for mask in 0u64..1 << cand.len() {
        let switched = |k: usize| cand.iter().position(|&c| c == k).is_some_and(|i| mask >> i & 1 == 1);
        if let Some(s) = run(d, &switched) {
            out = out + HalfLaurent::z_pow(s as i64 - eyes);
        }
    }
    out
}

fn run(d: &FrontDiagram, switched: &dyn Fn(usize) -> bool) -> Option<usize> {
    // pp[i] = position of the companion of the strand at position i
    let mut pp: Vec<usize> = Vec::new();
    let mut count = 0;
    for (k, e) in d.slices.iter().enumerate() {
        match *e {
            Event::LeftCusp(q) => {
                for x in pp.iter_mut() {
                    if *x >= q {
                        *x += 2;
                    }
                }
                pp.splice(q..q, [q + 1, q]);
            }
            Event::RightCusp(q) => {
                if pp[q] != q + 1 {
                    return None;
                }
                pp.drain(q..q + 2);
                for x in pp.iter_mut() {
                    if *x > q + 1 {
                        *x -= 2;
                    }
                }
            }
            Event::Crossing { pos: q, .. } => {
                if pp[q] == q + 1 {
                    return None;
                }
                let (a, b) = (pp[q], pp[q + 1]);
                if switched(k) {
                    let normal = (a < q && b > q + 1) || (b < a && a < q) || (b > q + 1 && a > b);
                    if !normal {
                        return None;
                    }
                    count += 1;
                } else {
                    pp[a] = q + 1;
                    pp[b] = q;
                    pp.swap(q, q + 1);
                }
            }
            Event::Vertex { .. } => panic!("oracle is for vertex-free fronts"),
        }
    }
    Some(count)
}

/// tb of a vertex-free closed front: orient each component, count crossings
/// whose strands point the same way as positive, subtract right cusps.
pub fn oriented_tb(d: &FrontDiagram) -> i64 {
    // parent, parity to parent (1 = opposite direction)
    let mut par: Vec<(usize, u8)> = Vec::new();
    fn find(par: &mut Vec<(usize, u8)>, x: usize) -> (usize, u8) {
        let (p, s) = par[x];
        if p == x {
            return (x, 0);
        }
        let (r, t) = find(par, p);
        par[x] = (r, s ^ t);
        (r, s ^ t)
    }
    fn union(par: &mut Vec<(usize, u8)>, a: usize, b: usize) {
        let (ra, sa) = find(par, a);
        let (rb, sb) = find(par, b);
        if ra != rb {
            par[ra] = (rb, sa ^ sb ^ 1);
        }
    }
    let mut strands: Vec<usize> = Vec::new();
    let mut pairs = Vec::new();
    let mut cusps = 0;
    for e in &d.slices {
        match *e {
            Event::LeftCusp(q) => {
                let (u, l) = (par.len(), par.len() + 1);
                par.push((u, 0));
                par.push((l, 0));
                union(&mut par, u, l);
                strands.splice(q..q, [u, l]);
            }
            Event::RightCusp(q) => {
                union(&mut par, strands[q], strands[q + 1]);
                strands.drain(q..q + 2);
                cusps += 1;
            }
            Event::Crossing { pos, .. } => {
                pairs.push((strands[pos], strands[pos + 1]));
                strands.swap(pos, pos + 1);
            }
            Event::Vertex { .. } => panic!("oracle is for vertex-free fronts"),
        }
    }
    let mut w = 0;
    for (a, b) in pairs {
        let (ra, sa) = find(&mut par, a);
        let (rb, sb) = find(&mut par, b);
        if ra == rb {
            w += if sa == sb { 1 } else { -1 };
        }
    }
    w - cusps
}

/// |det| of the Fox coloring matrix of a knot PD with one row and column
/// removed.
pub fn determinant(pd: &PdDiagram) -> i128 {
    let n = pd.edge_count();
    let mut arc: Vec<usize> = (0..n).collect();
    fn root(arc: &mut Vec<usize>, x: usize) -> usize {
        let mut x = x;
        while arc[x] != x {
            arc[x] = arc[arc[x]];
            x = arc[x];
        }
        x
    }
    for c in &pd.crossings {
        let (a, b) = (root(&mut arc, c[1]), root(&mut arc, c[3]));
        arc[a] = b;
    }
    let mut ids = std::collections::BTreeMap::new();
    for e in 0..n {
        let r = root(&mut arc, e);
        let k = ids.len();
        ids.entry(r).or_insert(k);
    }
    let m = ids.len();
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for c in &pd.crossings {
        let mut row = vec![0i128; m];
        let id = |e: usize, arc: &mut Vec<usize>| ids[&root(arc, e)];
        row[id(c[1], &mut arc)] += 2;
        row[id(c[0], &mut arc)] -= 1;
        row[id(c[2], &mut arc)] -= 1;
        rows.push(row);
    }
    let mut a: Vec<Vec<i128>> = rows[1..].iter().map(|r| r[1..].to_vec()).collect();
    bareiss(&mut a).abs()
}

fn bareiss(a: &mut [Vec<i128>]) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// The tabulated 5_2 diagram (0-based edge labels).
pub fn five_two_pd() -> PdDiagram {
    PdDiagram {
        crossings: vec![[0, 4, 1, 3], [2, 8, 3, 7], [4, 0, 5, 9], [6, 2, 7, 1], [8, 6, 9, 5]],
        nodes: vec![],
        free_loops: 0,
    }
}

pub fn double_factorial(n: usize) -> usize {
    (1..=n).rev().step_by(2).product()
}

/// Replace A by B + z.
pub fn a_to_b_plus_z(p: &MultiLaurent) -> MultiLaurent {
    let b_plus_z = &MultiLaurent::var_b_big() + &MultiLaurent::z_pow(1);
    let mut out = MultiLaurent::zero();
    for (e, c) in p.terms() {
        assert!(e[2] >= 0);
        let mono = MultiLaurent::monomial([e[0], e[1], 0, e[3]], c.clone());
        out.add_assign_ref(&(&mono * &b_plus_z.pow(e[2] as u32)));
    }
    out
}

/// The polynomial sum of z^{k/2} c over pairs (k, c).
pub fn hl(pairs: &[(i64, i64)]) -> HalfLaurent {
    HalfLaurent::from_pairs(pairs.iter().map(|&(k, c)| (k, BigInt::from(c))))
}
