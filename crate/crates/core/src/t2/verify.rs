use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::implicit::{segment_integral, JumpSegment};
use super::tree::{newcomer_value, Kind, SegmentTree, Side};
use crate::arith::{int, rat, Enclosure, LinForm, LinInterval, Rational};
use crate::cf::Theta;
use crate::error::Result;
use crate::report::{rat_str, Check, Verdict};

/// Enclosure of `int_0^1 f_theta` and the level it was computed from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeanEnclosure {
    pub level: usize,
    pub enclosure: Enclosure,
}

/// Theta enclosure fine enough for forms with coefficients up to `Q_level`.
fn theta_for(theta: &Theta, level: usize) -> Result<Enclosure> {
    let bits = theta.q(level as i64)?.bits() as u32;
    theta.enclosure_bits(2 * bits + 160)
}

/// `int f` from the tree alone: constant segments exactly, jump segments
/// by their endpoint brackets.
pub fn mean_enclosure(theta: &Theta, tree: &SegmentTree) -> Result<MeanEnclosure> {
    let mut acc = LinInterval::zero();
    for s in tree.segments() {
        acc.add_assign(&LinInterval::bracket(&s.f_left, &s.f_right, &s.len()));
    }
    Ok(MeanEnclosure { level: tree.level, enclosure: acc.eval(&theta_for(theta, tree.level)?) })
}

/// `int f` with every jump segment followed down to `to_level`.
pub fn refined_mean(theta: &Theta, to_level: usize, cap: u64) -> Result<MeanEnclosure> {
    let mut acc = LinInterval::zero();
    for r in JumpSegment::roots() {
        acc.add_assign(&segment_integral(theta, &r, to_level, cap)?);
    }
    Ok(MeanEnclosure { level: to_level, enclosure: acc.eval(&theta_for(theta, to_level)?) })
}

/// `sum_{k<Q_nu} g_theta(x_{nu,k}) = sum f - Q_nu * mean`.
pub fn g_sum(tree: &SegmentTree, mean: &MeanEnclosure) -> Enclosure {
    let q = int(tree.len() as u64);
    (-&mean.enclosure.scale(&q)).add_rat(&tree.f_sum())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct T2Report {
    pub nu: usize,
    pub q_nu: u64,
    pub q_prev: u64,
    /// Level the jump-segment integrals were followed down to.
    pub refined_to: usize,
    pub jump_segments: usize,
    pub constant_segments: usize,
    #[serde(with = "rat_str")]
    pub f_sum: Rational,
    pub mean: MeanEnclosure,
    pub g_sum: Enclosure,
    pub g_tilde_sum: Enclosure,
    /// `||Q_nu theta|| / ||Q_{nu-1} theta|| = 1/alpha_{nu+1}`.
    pub ratio: Enclosure,
    /// `sum_{J_left} (g_k - g_{k+1})`.
    #[serde(with = "rat_str")]
    pub telescoping_left: Rational,
    /// `-sum_{J_right} (g_k - g_{k+1})`.
    #[serde(with = "rat_str")]
    pub telescoping_right: Rational,
    pub telescoping: Verdict,
    /// `sum_k |g_k - g_{k+1}|`.
    #[serde(with = "rat_str")]
    pub variation: Rational,
    pub variation_le_2: Verdict,
    /// `g~_k = g_k` on every constant segment.
    pub constant_segments_exact: Verdict,
    /// Worst `|g~_k - G_{k+1}| / (c ratio |g_k - g_{k+1}|)` over jump
    /// segments, `c = 4/3` left of theta and `1` right of it; must be `< 1`.
    pub jump_tilde_worst: Enclosure,
    pub jump_tilde: Verdict,
    /// `|sum g~_k| <= Q_{nu-1} ratio`.
    pub tilde_sum: Check,
    /// `|sum g_k - sum g~_k - 1/6| < (8/3) ratio`.
    pub tilde_gap: Check,
    /// `|sum g_k - 1/6| < 4 Q_{nu-1} / alpha_{nu+1}`.
    pub final_bound: Check,
}

impl T2Report {
    pub fn verdict(&self) -> Verdict {
        Verdict::all([
            self.telescoping,
            self.variation_le_2,
            self.constant_segments_exact,
            self.jump_tilde,
            self.tilde_sum.verdict,
            self.tilde_gap.verdict,
            self.final_bound.verdict,
        ])
    }

    /// `|sum g_k - 1/6|` enclosed.
    pub fn deviation(&self) -> Enclosure {
        self.g_sum.add_rat(&-rat(1, 6)).abs()
    }
}

/// Per length class: the length form, the sum of all `int_{I} f` and the
/// sum over jump segments only.
struct LenClass {
    key: (i64, i64),
    len: LinForm,
    all: LinInterval,
    jumps: LinInterval,
}

/// Builds the level-`nu` tree and certifies the chain of inequalities
/// ending in `|sum_{k<Q_nu} g_k - 1/6| < 4 Q_{nu-1} / alpha_{nu+1}`.
///
/// `g~_k` integrals follow each jump segment `extra_levels` below `nu`.
pub fn sum_bound_verify(theta: &Theta, nu: usize, extra_levels: usize, budget: u64) -> Result<T2Report> {
    let tree = SegmentTree::build(theta, nu, budget)?;
    let to_level = nu + extra_levels;
    let th = theta_for(theta, to_level)?;
    let q_nu = tree.len() as u64;
    let q_prev: u64 = theta.q(nu as i64 - 1)?.try_into().expect("below Q_nu");
    let ratio = theta.quality_tight(nu)?.checked_div(&theta.quality_tight(nu - 1)?).expect("positive");

    let mut classes: Vec<LenClass> = Vec::with_capacity(2);
    let mut jump_f_left = Rational::zero();
    let (mut tel_left, mut tel_right, mut variation) = (Rational::zero(), Rational::zero(), Rational::zero());
    let (mut n_jump, mut n_const) = (0usize, 0usize);
    // f is monotone on each side of theta, so equal endpoint values make it
    // constant on the segment and g~_k = g_k there.
    let constant_exact = tree.check_invariants().is_ok();
    let mut worst = Enclosure::zero();
    for s in tree.segments() {
        let len = s.len();
        let key = (s.right_point.k as i64 - s.left_point.k as i64, s.right_point.m - s.left_point.m);
        let d = &s.f_left - &s.f_right;
        variation += d.abs();
        let f_int = match JumpSegment::from_segment(&s) {
            None => {
                n_const += 1;
                LinInterval::exact(len.scale(&s.f_left))
            }
            Some(js) => {
                n_jump += 1;
                jump_f_left += &s.f_left;
                match js.side {
                    Side::Left => tel_left += &d,
                    Side::Right => tel_right -= &d,
                }
                let f = segment_integral(theta, &js, to_level, 1 << 22)?;
                // g~_k - G_{k+1} = (int f)/mu - G_f: the mean cancels.
                let g_tilde_f = f.eval(&th).checked_div(&len.eval(&th)).expect("positive length");
                let big_g = newcomer_value(&s.f_left, &s.f_right, js.side);
                let c = if js.side == Side::Left { rat(4, 3) } else { Rational::one() };
                let scale = ratio.scale(&(c * d.abs()));
                let rel = g_tilde_f.add_rat(&-big_g).abs().checked_div(&scale).expect("positive");
                worst = worst.max_with(&rel);
                f
            }
        };
        let idx = match classes.iter().position(|c| c.key == key) {
            Some(i) => i,
            None => {
                classes.push(LenClass { key, len, all: LinInterval::zero(), jumps: LinInterval::zero() });
                classes.len() - 1
            }
        };
        let c = &mut classes[idx];
        c.all.add_assign(&f_int);
        if s.kind == Kind::Jump {
            c.jumps.add_assign(&f_int);
        }
    }

    let mut mean_form = LinInterval::zero();
    for c in &classes {
        mean_form.add_assign(&c.all);
    }
    let mean = MeanEnclosure { level: to_level, enclosure: mean_form.eval(&th) };
    let g = g_sum(&tree, &mean);
    let q = int(q_nu);
    // sum g~ = sum_c (int_c f) (1/mu_c - Q).
    let mut g_tilde = Enclosure::zero();
    // sum g - sum g~ = sum_{jumps} (f_k - (int f)/mu).
    let mut gap = Enclosure::point(jump_f_left.clone());
    for c in &classes {
        let inv = c.len.eval(&th).recip().expect("positive length");
        g_tilde = g_tilde + c.all.eval(&th) * inv.add_rat(&-&q);
        gap = gap - c.jumps.eval(&th) * inv;
    }

    let one = Rational::one();
    let sixth = rat(1, 6);
    let tilde_sum = Check::abs_le(g_tilde.clone(), ratio.scale(&int(q_prev)));
    let tilde_gap = Check::abs_lt(gap.add_rat(&-&sixth), ratio.scale(&rat(8, 3)));
    let final_bound = Check::abs_lt(g.add_rat(&-&sixth), ratio.scale(&int(4 * q_prev)));
    Ok(T2Report {
        nu,
        q_nu,
        q_prev,
        refined_to: to_level,
        jump_segments: n_jump,
        constant_segments: n_const,
        f_sum: tree.f_sum(),
        mean,
        g_sum: g,
        g_tilde_sum: g_tilde,
        ratio,
        telescoping: Verdict::from_bool(tel_left == one && tel_right == one),
        telescoping_left: tel_left,
        telescoping_right: tel_right,
        variation_le_2: Verdict::from_bool(variation <= int(2)),
        variation,
        constant_segments_exact: Verdict::from_bool(constant_exact),
        jump_tilde: Verdict::lt(&worst, &Enclosure::point(one.clone())),
        jump_tilde_worst: worst,
        tilde_sum,
        tilde_gap,
        final_bound,
    })
}

/// `|sum g_k - 1/6|` at two levels: `Holds` if the deeper one is certainly
/// smaller.
pub fn trend(shallow: &T2Report, deep: &T2Report) -> Verdict {
    Verdict::lt(&deep.deviation(), &shallow.deviation())
}
