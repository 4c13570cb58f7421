mod common;

use ergosum::cf::{Theta, ThetaSpec};
use ergosum::lab::{birkhoff_sum, PeriodicFunction, T2G};
use ergosum::t2::{g_sum, refined_mean, Kind, SegmentTree, Side, DEFAULT_EXTRA_LEVELS, TREE_BUDGET};
use ergosum::Rational;
use num_traits::Zero;

use common::t2sim::{library_tree, naive_tree};

#[test]
fn tichy_fast_trees_match_naive_simulator() {
    for nu in 2..=4 {
        let naive = naive_tree("TICHY-FAST", nu);
        let lib = library_tree("TICHY-FAST", nu);
        assert_eq!(lib.len(), naive.len(), "nu = {nu}");
        for (i, (a, b)) in lib.iter().zip(&naive).enumerate() {
            assert_eq!(a, b, "nu = {nu}, segment {}", i + 1);
        }
    }
}

#[test]
fn golden_and_slow_trees_match_naive_simulator() {
    for (label, nu) in [("GOLDEN", 9), ("TICHY-SLOW", 5)] {
        assert_eq!(library_tree(label, nu), naive_tree(label, nu), "{label} nu = {nu}");
    }
}

#[test]
fn level_two_has_two_jump_segments() {
    let t = library_tree("TICHY-FAST", 2);
    assert_eq!(t.len(), 2);
    assert!(t.iter().all(|s| s.kind == Kind::Jump));
    assert_eq!(t[0].side, Some(Side::Left));
    assert_eq!(t[1].side, Some(Side::Right));
}

#[test]
fn level_three_newcomers_are_dyadic_or_triadic() {
    // Q_3 = 5: points 2, 3, 4 are new; each lands in one of the two level-2
    // jump segments and gets 1/3 f(0) + 2/3 f(theta) = 1/3 (left) or 1/2 (right).
    let theta = Theta::new(ThetaSpec::tichy_fast());
    let tree = SegmentTree::build(&theta, 3, TREE_BUDGET).unwrap();
    let half = Rational::new(1.into(), 2.into());
    let third = Rational::new(1.into(), 3.into());
    for k in 2..5 {
        let v = tree.value_of_k(k);
        assert!(*v == half || *v == third, "k = {k}: {v}");
    }
    // sum 1 + 0 + three newcomers, frozen from the naive simulator
    let naive: Rational = naive_tree("TICHY-FAST", 3).iter().map(|s| s.f_left.clone()).sum();
    assert_eq!(tree.f_sum(), naive);
}

#[test]
fn t2g_orbit_sum_agrees_with_tree_g_sum() {
    let theta = Theta::new(ThetaSpec::tichy_fast());
    for nu in [3, 4] {
        let g = T2G::build(&theta, nu, TREE_BUDGET).unwrap();
        let q = theta.q_u64(nu as i64).unwrap().unwrap();
        let s = birkhoff_sum(&g, &theta, &Rational::zero(), q, 1_000_000).unwrap().sum;
        let mean = refined_mean(&theta, nu + DEFAULT_EXTRA_LEVELS, 1 << 22).unwrap();
        let direct = g_sum(g.tree(), &mean);
        assert!(s.encloses(&direct), "nu = {nu}: {s} vs {direct}");
        assert_eq!(g.name(), format!("t2:g:{nu}"));
    }
}
