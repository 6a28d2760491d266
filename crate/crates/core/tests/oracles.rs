mod common;

use common::*;
use ruling_lab::kauffman::*;
use ruling_lab::maslov::solve_maslov;
use ruling_lab::pd::{ng_resolution, total_tb, PdDiagram};
use ruling_lab::resolve::{enumerate_rho_graded, vertex_options};
use ruling_lab::maslov::GradedContext;
use ruling_lab::ruling::closed_polynomial;
use ruling_lab::*;

#[test]
fn two_free_loops_give_delta() {
    let pd = PdDiagram { free_loops: 2, ..Default::default() };
    let want = &(&MultiLaurent::one() + &MultiLaurent::monomial([1, -1, 0, 0], 1))
        - &MultiLaurent::monomial([-1, -1, 0, 0], 1);
    assert_eq!(kauffman_pd(&pd), want);
}

#[test]
fn matching_counts_are_double_factorials() {
    for n in 1..=5 {
        assert_eq!(Matching::enumerate(2 * n).unwrap().len(), double_factorial(2 * n - 1));
    }
    assert!(Matching::enumerate(3).is_err());
    // with every border potential equal and rho = 1 nothing is excluded
    let ctx = GradedContext::border(vec![0; 6]);
    assert_eq!(enumerate_rho_graded(&ctx, Ring::Z, 1).len(), 15);
}

#[test]
fn vertex_resolution_counts() {
    let d = corpus("pinched_trefoil");
    let mu = solve_maslov(&d, Ring::Z, &[]).unwrap();
    assert_eq!(vertex_options(&d, &mu, 1)[0].len(), 3);
    let d = FrontDiagram::from_text("type 0 0\nLC 1\nLC 3\nV 1 3 3\nRC 1\nRC 1\n").unwrap();
    let mu = solve_maslov(&d, Ring::Mod(1), &[]).unwrap();
    assert_eq!(vertex_options(&d, &mu, 1)[0].len(), 15);
}

#[test]
fn corpus_rulings_match_brute_force() {
    for (name, d) in corpus_all() {
        if d.has_vertices() {
            continue;
        }
        for rho in [0, 1, 2] {
            let ring = Ring::Z.graded(rho);
            if solve_maslov(&d, ring, &[]).is_err() {
                continue;
            }
            assert_eq!(closed_polynomial(&d, ring, rho).unwrap(), brute_rulings(&d, ring, rho), "{} rho {}", name, rho);
        }
    }
}

#[test]
fn corpus_tb_matches_orientation_count() {
    for (name, d) in corpus_all() {
        if !d.has_vertices() {
            assert_eq!(total_tb(&d).unwrap(), oriented_tb(&d), "{}", name);
        }
    }
}

#[test]
fn known_ruling_polynomials() {
    let r = |n: &str| closed_polynomial(&corpus(n), Ring::Z, 0).unwrap();
    assert_eq!(r("unknot"), hl(&[(-2, 1)]));
    assert_eq!(r("trefoil"), hl(&[(-2, 2), (2, 1)]));
    assert_eq!(r("chekanov_5_2"), hl(&[(-2, 1), (2, 1)]));
    let stab = corpus("stabilized_unknot");
    assert!(closed_polynomial(&stab, Ring::Mod(1), 1).unwrap().is_zero());
}

#[test]
fn chekanov_front_is_five_two() {
    let d = corpus("chekanov_5_2");
    let pd = ng_resolution(&d).unwrap();
    assert_eq!(pd.component_count(), 1);
    assert_eq!(determinant(&pd), 7);
    let table = five_two_pd();
    table.check().unwrap();
    assert_eq!(determinant(&table), 7);
    let f_table = &MultiLaurent::a_pow(-table.total_writhe()) * &kauffman_pd(&table);
    assert_eq!(kauffman_normalized(&d).unwrap(), f_table);
    // and it is not the other knot with determinant 7
    let t27 = FrontDiagram::from_text(&format!("type 0 0\nLC 1\nLC 3\n{}RC 1\nRC 1\n", "X 2\n".repeat(7))).unwrap();
    assert_eq!(determinant(&ng_resolution(&t27).unwrap()), 7);
    assert_ne!(kauffman_normalized(&t27).unwrap(), f_table);
}

#[test]
fn trefoil_determinant() {
    assert_eq!(determinant(&ng_resolution(&corpus("trefoil")).unwrap()), 3);
    assert_eq!(determinant(&ng_resolution(&corpus("unknot")).unwrap()), 1);
}

#[test]
fn kv_check_on_corpus() {
    for (name, d) in corpus_all() {
        if d.vertices().iter().all(|v| v.left + v.right == 2 || v.left + v.right == 4) {
            assert!(check_ruling_coefficient(&d).unwrap().equal, "{}", name);
        }
    }
}
