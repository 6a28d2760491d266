mod common;

use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ruling_lab::dga::{ce_dga, check_equivalence, DgaRing};
use ruling_lab::front::shuffle_moves;
use ruling_lab::kauffman::*;
use ruling_lab::maslov::solve_maslov;
use ruling_lab::pd::{ng_resolution, total_tb, PdDiagram};
use ruling_lab::random::RandomFront;
use ruling_lab::resolve::*;
use ruling_lab::ruling::*;
use ruling_lab::*;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn plain(r: &mut ChaCha8Rng, crossings: std::ops::RangeInclusive<usize>, marked: f64) -> FrontDiagram {
    let crossings = r.gen_range(crossings);
    RandomFront { crossings, marked, ..Default::default() }.sample(r)
}

fn with_vertex(r: &mut ChaCha8Rng, crossings: std::ops::RangeInclusive<usize>) -> FrontDiagram {
    let shapes = [(2, 2), (1, 3), (3, 1), (0, 4), (4, 0)];
    let v = *shapes.choose(r).unwrap();
    let crossings = r.gen_range(crossings);
    RandomFront { crossings, vertices: vec![v], marked: 0.2, ..Default::default() }.sample(r)
}

fn random_perm(r: &mut ChaCha8Rng, b: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..b).collect();
    p.shuffle(r);
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sweep_matches_brute_force(seed in any::<u64>(), rho in 0u64..3) {
        let mut r = rng(seed);
        let d = plain(&mut r, 0..=8, 0.3);
        let ring = Ring::Z.graded(rho);
        prop_assume!(solve_maslov(&d, ring, &[]).is_ok());
        prop_assert_eq!(closed_polynomial(&d, ring, rho).unwrap(), brute_rulings(&d, ring, rho));
    }

    #[test]
    fn tb_matches_orientation_count(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = plain(&mut r, 0..=10, 0.0);
        prop_assert_eq!(total_tb(&d).unwrap(), oriented_tb(&d));
    }

    #[test]
    fn skein(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = RandomFront { crossings: r.gen_range(0..=7), vertices: vec![(2, 2)], ..Default::default() }.sample(&mut r);
        let k = d.slices.iter().position(|e| matches!(e, Event::Vertex { .. })).unwrap();
        let (x, h, v) = front_children(&d, k).unwrap();
        let r1 = |d: &FrontDiagram| closed_polynomial(d, Ring::Mod(1), 1).unwrap();
        let z_minus_1 = hl(&[(2, 1), (0, -1)]);
        let rhs = &(&r1(&x) - &(&z_minus_1 * &r1(&h))) + &r1(&v);
        prop_assert_eq!(r1(&d), rhs);
    }

    #[test]
    fn gluing(seed in any::<u64>(), rho in 0u64..3) {
        let mut r = rng(seed);
        let d = if r.gen_bool(0.5) { with_vertex(&mut r, 1..=5) } else { plain(&mut r, 2..=7, 0.2) };
        let mu = solve_maslov(&d, some_ring(&d), &[]).unwrap();
        let k = r.gen_range(1..d.len());
        prop_assert!(glue_check(&d, &mu, k, rho).unwrap());
    }

    #[test]
    fn moves_keep_bordered_transfer_matrix(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = if r.gen_bool(0.3) { with_vertex(&mut r, 1..=5) } else { plain(&mut r, 2..=6, 0.3) };
        let k = r.gen_range(1..d.len());
        let (part, _) = d.cut(k);
        let moved = shuffle_moves(&part, 20, part.len() + 6, &mut r);
        let t = |d: &FrontDiagram| transfer_matrix(d, &solve_maslov(d, Ring::Mod(1), &[]).unwrap(), 1).unwrap();
        prop_assert_eq!(t(&part), t(&moved));
    }

    #[test]
    fn moves_keep_closed_polynomials(seed in any::<u64>(), rho in 0u64..3) {
        let mut r = rng(seed);
        let d = if r.gen_bool(0.3) { with_vertex(&mut r, 1..=5) } else { plain(&mut r, 2..=6, 0.3) };
        let ring = Ring::Z.graded(rho);
        prop_assume!(solve_maslov(&d, ring, &[]).is_ok());
        let moved = shuffle_moves(&d, 20, d.len() + 6, &mut r);
        prop_assert_eq!(closed_polynomial(&d, ring, rho).unwrap(), closed_polynomial(&moved, ring, rho).unwrap());
    }

    #[test]
    fn degree_bound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = if r.gen_bool(0.5) { with_vertex(&mut r, 0..=2) } else { plain(&mut r, 1..=5, 0.0) };
        let f = kauffman_unnormalized(&d).unwrap();
        prop_assert!(f.degree_a().unwrap() <= -1, "{}", f);
    }

    #[test]
    fn node_forms_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = RandomFront {
            crossings: r.gen_range(0..=3),
            vertices: vec![(2, 2); r.gen_range(1..=2)],
            ..Default::default()
        }.sample(&mut r);
        let pd = ng_resolution(&d).unwrap();
        prop_assert_eq!(a_to_b_plus_z(&kauffman_pd(&pd)), a_to_b_plus_z(&kauffman_pd_cross(&pd)));
    }

    #[test]
    fn evaluation_order_is_irrelevant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = if r.gen_bool(0.5) { with_vertex(&mut r, 0..=2) } else { plain(&mut r, 1..=5, 0.0) };
        let pd = ng_resolution(&d).unwrap();
        let mut labels: Vec<usize> = (0..pd.edge_count()).collect();
        labels.shuffle(&mut r);
        let mut crossings: Vec<[usize; 4]> = pd.crossings.iter().map(|c| {
            // turning a crossing by a half turn keeps the under strand in slots 0 and 2
            let c = if r.gen_bool(0.5) { [c[2], c[3], c[0], c[1]] } else { *c };
            c.map(|e| labels[e])
        }).collect();
        crossings.shuffle(&mut r);
        let mut nodes: Vec<[usize; 4]> = pd.nodes.iter().map(|n| n.map(|e| labels[e])).collect();
        nodes.shuffle(&mut r);
        let other = PdDiagram { crossings, nodes, free_loops: pd.free_loops };
        prop_assert_eq!(kauffman_pd(&pd), kauffman_pd(&other));
    }

    #[test]
    fn dga_squares_to_zero(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = plain(&mut r, 0..=7, 0.0);
        let ring = some_ring(&d);
        let mu = solve_maslov(&d, ring, &[]).unwrap();
        for coeffs in [DgaRing::Gf2, DgaRing::Z] {
            let a = ce_dga(&d, &mu, coeffs).unwrap();
            prop_assert!(a.d_squared_failures().is_empty());
            prop_assert!(a.grading_failures().is_empty());
        }
    }

    #[test]
    fn rulings_iff_augmentations(seed in any::<u64>(), rho in 1u64..3) {
        let mut r = rng(seed);
        let d = plain(&mut r, 0..=6, 0.0);
        let ring = Ring::Z.graded(rho);
        prop_assume!(solve_maslov(&d, ring, &[]).is_ok());
        let rep = check_equivalence(&d, ring, rho);
        prop_assume!(!matches!(rep, Err(Error::SearchCap(..))));
        prop_assert!(rep.unwrap().agree);
    }

    #[test]
    fn half_twist_conjugation(seed in any::<u64>(), rho in 0u64..2) {
        let mut r = rng(seed);
        let b = r.gen_range(2..=4);
        let beta = permutation_braid(&random_perm(&mut r, b));
        let c = complement(&beta).unwrap();
        let lhs = beta.concat(&c.marked(true)).concat(&mirror(&c).marked(true));
        let rhs = tau(&mirror(&c)).unwrap().marked(true).concat(&tau(&c).unwrap().marked(true)).concat(&beta);
        let ring = Ring::Z.graded(rho);
        let t = |w: &BraidWord| {
            let d = w.to_front();
            transfer_matrix(&d, &solve_maslov(&d, ring, &[]).unwrap(), rho).unwrap()
        };
        prop_assert_eq!(t(&lhs), t(&rhs));
    }
}

#[test]
fn half_twist_vanishing() {
    for b in 2..=4usize {
        for n in b.div_ceil(2)..=b {
            for marked in [false, true] {
                let d = half_twist(b).marked(marked).to_front().pad(0, 2 * n - b);
                let t = transfer_matrix(&d, &solve_maslov(&d, Ring::Z, &[]).unwrap(), 1).unwrap();
                let top = |m: &Matching| (0..b).any(|i| m.partner(i) < b);
                for (i, phi) in t.rows.iter().enumerate() {
                    for (j, psi) in t.cols.iter().enumerate() {
                        if top(phi) || top(psi) {
                            assert!(t.entries[i][j].is_zero(), "b {} n {} {} {}", b, n, phi, psi);
                        }
                    }
                }
            }
        }
    }
}
