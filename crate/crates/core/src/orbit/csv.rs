use std::fmt::Write;

use super::{GapProfile, OrbitPoint};
use crate::arith::{rat_to_string, REPORT_BITS};

pub fn gaps_csv(profiles: &[GapProfile]) -> String {
    let mut s = String::from("level,count_short,count_long,short_lo,short_hi,long_lo,long_hi\n");
    for p in profiles {
        let (short, long) = (p.short_len.outward(REPORT_BITS), p.long_len.outward(REPORT_BITS));
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            p.level,
            p.count_short,
            p.count_long,
            rat_to_string(short.lo()),
            rat_to_string(short.hi()),
            rat_to_string(long.lo()),
            rat_to_string(long.hi()),
        );
    }
    s
}

pub fn orbit_csv(points: &[OrbitPoint]) -> String {
    let mut s = String::from("k,m,value_lo,value_hi\n");
    for p in points {
        let _ = writeln!(s, "{},{},{},{}", p.k, p.m, rat_to_string(p.value.lo()), rat_to_string(p.value.hi()));
    }
    s
}
