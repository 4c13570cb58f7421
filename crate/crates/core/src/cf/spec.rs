//! `ThetaSpec`: a finite description of an infinite partial-quotient stream.
//!
//! Text format, one `key=value` per line (`#` starts a comment):
//!
//! ```text
//! label=TICHY-FAST
//! a0=0
//! head=1,1
//! tail=formula:nuQprev2
//! ```
//!
//! `head` lists `a_1..a_H` (may be empty). `tail` is one of
//! `none`, `constant:c`, `periodic:c1,c2,...` or `formula:NAME[,c=K]`.
//! Formulas generate `a_{nu+1}` for `nu >= H` from already computed
//! denominators:
//!
//! * `nuQprev`:  `a_{nu+1} = max(1, c * nu * Q_{nu-1})`
//! * `nuQprev2`: `a_{nu+1} = max(1, c * nu * Q_{nu-1}^2)`
//!
//! [`ThetaSpec::to_text`] writes the canonical form and parsing it back
//! yields an equal spec.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormulaKind {
    NuQprev,
    NuQprev2,
}

impl FormulaKind {
    fn name(self) -> &'static str {
        match self {
            FormulaKind::NuQprev => "nuQprev",
            FormulaKind::NuQprev2 => "nuQprev2",
        }
    }

    fn power(self) -> u32 {
        match self {
            FormulaKind::NuQprev => 1,
            FormulaKind::NuQprev2 => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TailRule {
    /// Finite expansion: generation stops after the head.
    None,
    Constant(BigUint),
    Periodic(Vec<BigUint>),
    Formula { kind: FormulaKind, c: BigUint },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaSpec {
    pub label: String,
    pub a0: BigInt,
    pub head: Vec<BigUint>,
    pub tail: TailRule,
}

impl ThetaSpec {
    pub fn new(label: &str, a0: i64, head: &[u64], tail: TailRule) -> Self {
        ThetaSpec {
            label: label.to_string(),
            a0: BigInt::from(a0),
            head: head.iter().map(|&a| BigUint::from(a)).collect(),
            tail,
        }
    }

    /// `[0; 1, 1, 1, ...]`, the golden-ratio conjugate `(sqrt 5 - 1)/2`.
    pub fn golden() -> Self {
        ThetaSpec::new("GOLDEN", 0, &[], TailRule::Constant(BigUint::one()))
    }

    /// `[0; 2, 2, 2, ...] = sqrt 2 - 1`.
    pub fn sqrt2() -> Self {
        ThetaSpec::new("SQRT2", 0, &[], TailRule::Constant(BigUint::from(2u32)))
    }

    /// `a_1 = a_2 = 1`, `a_{nu+1} = max(1, nu * Q_{nu-1})`.
    pub fn tichy_slow() -> Self {
        ThetaSpec::new(
            "TICHY-SLOW",
            0,
            &[1, 1],
            TailRule::Formula { kind: FormulaKind::NuQprev, c: BigUint::one() },
        )
    }

    /// `a_1 = a_2 = 1`, `a_{nu+1} = max(1, nu * Q_{nu-1}^2)`.
    pub fn tichy_fast() -> Self {
        ThetaSpec::new(
            "TICHY-FAST",
            0,
            &[1, 1],
            TailRule::Formula { kind: FormulaKind::NuQprev2, c: BigUint::one() },
        )
    }

    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "GOLDEN" => Some(Self::golden()),
            "SQRT2" => Some(Self::sqrt2()),
            "TICHY-SLOW" => Some(Self::tichy_slow()),
            "TICHY-FAST" => Some(Self::tichy_fast()),
            _ => None,
        }
    }

    pub fn builtin_names() -> [&'static str; 4] {
        ["GOLDEN", "SQRT2", "TICHY-SLOW", "TICHY-FAST"]
    }

    /// Partial quotient `a_i` for `i >= 1`, given the denominators computed
    /// so far (`q[j] = Q_j` for `j < i`, with `Q_{-1} = 0` implicit).
    pub(crate) fn quotient(&self, i: usize, q: &[BigInt]) -> Result<BigInt> {
        debug_assert!(i >= 1);
        if i <= self.head.len() {
            return Ok(BigInt::from(self.head[i - 1].clone()));
        }
        let j = i - self.head.len() - 1;
        let a = match &self.tail {
            TailRule::None => return Err(Error::InsufficientQuotients { index: i }),
            TailRule::Constant(c) => BigInt::from(c.clone()),
            TailRule::Periodic(p) => BigInt::from(p[j % p.len()].clone()),
            TailRule::Formula { kind, c } => {
                // a_{nu+1} with nu = i - 1 reads Q_{nu-1} = Q_{i-2}.
                let nu = i - 1;
                let qprev = if i >= 2 { q[i - 2].clone() } else { BigInt::zero() };
                let v = BigInt::from(c.clone()) * BigInt::from(nu) * num_traits::pow(qprev, kind.power() as usize);
                v.max(BigInt::one())
            }
        };
        Ok(a)
    }

    /// Checks `a_1 = a_2 = 1`, which the `t2` segment tree starts from.
    pub fn require_t2_shape(&self) -> Result<()> {
        let probe = crate::cf::Theta::new(self.clone());
        let a1 = probe.a(1)?;
        let a2 = probe.a(2)?;
        if a1 != BigInt::one() || a2 != BigInt::one() {
            return Err(Error::Precondition(format!(
                "spec {} has a_1 = {a1}, a_2 = {a2}; the construction needs a_1 = a_2 = 1",
                self.label
            )));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let head: Vec<String> = self.head.iter().map(|a| a.to_string()).collect();
        let tail = match &self.tail {
            TailRule::None => "none".to_string(),
            TailRule::Constant(c) => format!("constant:{c}"),
            TailRule::Periodic(p) => {
                let v: Vec<String> = p.iter().map(|a| a.to_string()).collect();
                format!("periodic:{}", v.join(","))
            }
            TailRule::Formula { kind, c } => {
                if c.is_one() {
                    format!("formula:{}", kind.name())
                } else {
                    format!("formula:{},c={c}", kind.name())
                }
            }
        };
        format!(
            "label={}\na0={}\nhead={}\ntail={}\n",
            self.label,
            self.a0,
            head.join(","),
            tail
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut label = None;
        let mut a0 = None;
        let mut head = None;
        let mut tail = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| perr(lineno, "expected key=value"))?;
            let v = v.trim();
            let slot = match k.trim() {
                "label" => {
                    label = Some(v.to_string());
                    continue;
                }
                "a0" => {
                    a0 = Some(v.parse::<BigInt>().map_err(|_| perr(lineno, "a0 must be an integer"))?);
                    continue;
                }
                "head" => &mut head,
                "tail" => {
                    tail = Some(parse_tail(v).map_err(|m| perr(lineno, &m))?);
                    continue;
                }
                other => return Err(perr(lineno, &format!("unknown key `{other}`"))),
            };
            *slot = Some(parse_quotients(v).map_err(|m| perr(lineno, &m))?);
        }
        Ok(ThetaSpec {
            label: label.unwrap_or_default(),
            a0: a0.unwrap_or_default(),
            head: head.unwrap_or_default(),
            tail: tail.unwrap_or(TailRule::None),
        })
    }
}

impl fmt::Display for ThetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn perr(lineno: usize, msg: &str) -> Error {
    Error::Parse(format!("theta spec line {}: {msg}", lineno + 1))
}

fn parse_quotients(v: &str) -> std::result::Result<Vec<BigUint>, String> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    v.split(',')
        .map(|s| {
            let a: BigUint = s.trim().parse().map_err(|_| format!("bad quotient `{s}`"))?;
            if a.is_zero() {
                Err("partial quotients must be >= 1".to_string())
            } else {
                Ok(a)
            }
        })
        .collect()
}

fn parse_tail(v: &str) -> std::result::Result<TailRule, String> {
    if v == "none" {
        return Ok(TailRule::None);
    }
    let (kind, rest) = v.split_once(':').ok_or("tail must be none|constant:|periodic:|formula:")?;
    match kind {
        "constant" => {
            let q = parse_quotients(rest)?;
            if q.len() != 1 {
                return Err("constant tail takes one quotient".into());
            }
            Ok(TailRule::Constant(q.into_iter().next().unwrap()))
        }
        "periodic" => {
            let q = parse_quotients(rest)?;
            if q.is_empty() {
                return Err("periodic tail needs at least one quotient".into());
            }
            Ok(TailRule::Periodic(q))
        }
        "formula" => {
            let mut parts = rest.split(',');
            let name = parts.next().unwrap_or("").trim();
            let kind = match name {
                "nuQprev" => FormulaKind::NuQprev,
                "nuQprev2" => FormulaKind::NuQprev2,
                _ => return Err(format!("unknown formula `{name}`")),
            };
            let mut c = BigUint::one();
            for p in parts {
                let (k, val) = p.split_once('=').ok_or("formula params are key=value")?;
                if k.trim() != "c" {
                    return Err(format!("unknown formula parameter `{k}`"));
                }
                c = val.trim().parse().map_err(|_| "c must be a positive integer".to_string())?;
                if c.is_zero() {
                    return Err("c must be positive".into());
                }
            }
            Ok(TailRule::Formula { kind, c })
        }
        _ => Err(format!("unknown tail kind `{kind}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_round_trip() {
        for name in ThetaSpec::builtin_names() {
            let s = ThetaSpec::builtin(name).unwrap();
            let t = s.to_text();
            let back = ThetaSpec::parse(&t).unwrap();
            assert_eq!(back, s);
            assert_eq!(back.to_text(), t);
        }
    }

    #[test]
    fn parse_with_comments_and_params() {
        let s = ThetaSpec::parse("# demo\nlabel=X\na0=-2\nhead=3, 1\ntail=formula:nuQprev,c=5\n").unwrap();
        assert_eq!(s.a0, BigInt::from(-2));
        assert_eq!(s.head.len(), 2);
        assert_eq!(s.tail, TailRule::Formula { kind: FormulaKind::NuQprev, c: BigUint::from(5u32) });
        assert_eq!(ThetaSpec::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn rejects_zero_quotient_and_unknown_keys() {
        assert!(ThetaSpec::parse("head=1,0").is_err());
        assert!(ThetaSpec::parse("colour=blue").is_err());
        assert!(ThetaSpec::parse("tail=formula:mystery").is_err());
    }
}
