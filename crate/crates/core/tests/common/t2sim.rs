//! Independent re-derivation of the level-`nu` segment tree: float
//! positions re-sorted at every level, linear segment search and the
//! newcomer rule applied literally.

use ergosum::cf::{Theta, ThetaSpec};
use ergosum::t2::{Kind, SegmentTree, Side, TREE_BUDGET};
use ergosum::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rug::Float;

use super::{denominators, theta as oracle_theta, PREC};

/// One naive segment: `(k, floor(k theta))` of the ends (`(0, -1)` for the
/// point 1),
/// values, kind and side.
#[derive(Debug, PartialEq)]
pub struct NaiveSegment {
    pub left: (u64, i64),
    pub right: (u64, i64),
    pub f_left: Rational,
    pub f_right: Rational,
    pub kind: Kind,
    pub side: Option<Side>,
}

/// Re-derives the tree for level `nu` by sorting float positions at each
/// level and assigning newcomers segment by segment.
pub fn naive_tree(label: &str, nu: usize) -> Vec<NaiveSegment> {
    let th = oracle_theta(label);
    let q = denominators(label, nu);
    let q: Vec<u64> = q.iter().map(|v| v.to_u64().unwrap()).collect();
    let pos = |k: u64| -> Float {
        let x = Float::with_val(PREC, &th * k);
        let fl = x.clone().floor();
        Float::with_val(PREC, x - fl)
    };
    let floor_of = |k: u64| -> i64 { Float::with_val(PREC, &th * k).floor().to_f64() as i64 };
    // value[k] for orbit index k
    let mut value: Vec<Rational> = vec![Rational::one(), Rational::zero()];
    assert_eq!(q[2], 2);
    let theta_pos = pos(1);
    for lam in 2..nu {
        // level-lam points sorted naively, then the point 1 (index None)
        let mut pts: Vec<u64> = (0..q[lam]).collect();
        pts.sort_by(|&a, &b| pos(a).partial_cmp(&pos(b)).unwrap());
        let val = |i: usize, value: &Vec<Rational>| -> Rational {
            if i == pts.len() {
                Rational::one()
            } else {
                value[pts[i] as usize].clone()
            }
        };
        let mut fresh = Vec::new();
        for k in q[lam]..q[lam + 1] {
            let x = pos(k);
            // segment i = [pts[i-1], pts[i]] containing x
            let i = (1..=pts.len()).find(|&i| i == pts.len() || pos(pts[i]) > x).unwrap();
            let (fa, fb) = (val(i - 1, &value), val(i, &value));
            let v = if fa == fb {
                fa
            } else {
                let right_end = if i == pts.len() { Float::with_val(PREC, 1) } else { pos(pts[i]) };
                if right_end <= theta_pos {
                    &fa / BigInt::from(3) + &fb * Rational::new(2.into(), 3.into())
                } else {
                    (&fa + &fb) / BigInt::from(2)
                }
            };
            fresh.push(v);
        }
        value.extend(fresh);
    }
    let mut pts: Vec<u64> = (0..q[nu]).collect();
    pts.sort_by(|&a, &b| pos(a).partial_cmp(&pos(b)).unwrap());
    let mut out = Vec::new();
    for i in 1..=pts.len() {
        let a = pts[i - 1];
        let (right, f_right, right_pos) = if i == pts.len() {
            ((0, -1), Rational::one(), Float::with_val(PREC, 1))
        } else {
            let b = pts[i];
            ((b, floor_of(b)), value[b as usize].clone(), pos(b))
        };
        let f_left = value[a as usize].clone();
        let kind = if f_left == f_right { Kind::Constant } else { Kind::Jump };
        let side = match kind {
            Kind::Constant => None,
            Kind::Jump if right_pos <= theta_pos => Some(Side::Left),
            Kind::Jump => Some(Side::Right),
        };
        out.push(NaiveSegment { left: (a, floor_of(a)), right, f_left, f_right, kind, side });
    }
    out
}

pub fn library_tree(label: &str, nu: usize) -> Vec<NaiveSegment> {
    let theta = Theta::new(ThetaSpec::builtin(label).unwrap());
    let tree = SegmentTree::build(&theta, nu, TREE_BUDGET).unwrap();
    tree.check_invariants().unwrap();
    tree.segments()
        .map(|s| NaiveSegment {
            left: (s.left_point.k, s.left_point.m),
            right: (s.right_point.k, s.right_point.m),
            f_left: s.f_left,
            f_right: s.f_right,
            kind: s.kind,
            side: s.side,
        })
        .collect()
}
