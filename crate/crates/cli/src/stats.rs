// SPDX-License-Identifier: Apache-2.0

//! Size and depth series of the prefix circuits, one CSV row per
//! `(B, variant)`.

use std::fmt::Write;
use std::ops::RangeInclusive;
use std::str::FromStr;

use anyhow::{anyhow, bail, Result};
use mcsort::ir::metrics;
use mcsort::ppc::predict::{predict, PredictArgs};
use mcsort::ppc::{build_general, ceil_log2, Fanout, PpcConfig, Quantity, Split, Q};

pub const HEADER: &str = "B,variant,k,f,size_opc,size_buf,depth,max_fanout,predicted_bound";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Unbalanced,
    Balanced,
    /// Unbalanced split, buffered, fan-out bounded by `f`.
    Fanout(usize),
    /// Closed-form reference only.
    KoggeStone,
}

impl FromStr for Variant {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "unbalanced" => Variant::Unbalanced,
            "balanced" => Variant::Balanced,
            "kogge-stone" => Variant::KoggeStone,
            _ => match s.strip_prefix('f').map(str::parse::<usize>) {
                Some(Ok(f)) if f >= 3 => Variant::Fanout(f),
                Some(Ok(f)) => bail!("variant {s:?}: fan-out bound {f} is below 3"),
                _ => bail!("unknown variant {s:?} (expected unbalanced, balanced, kogge-stone or f<N>)"),
            },
        })
    }
}

impl Variant {
    fn name(self) -> String {
        match self {
            Variant::Unbalanced => "unbalanced".into(),
            Variant::Balanced => "balanced".into(),
            Variant::Fanout(f) => format!("f{f}"),
            Variant::KoggeStone => "kogge-stone".into(),
        }
    }
}

/// `a..b` and `a..=b` are both inclusive; a single number is one width.
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>> {
    let bad = || anyhow!("malformed width range {s:?} (expected e.g. 1..70)");
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.strip_prefix('=').unwrap_or(hi)),
        None => (s, s),
    };
    let (lo, hi): (usize, usize) = (lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?);
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

fn q(v: Q) -> String {
    if v.is_integer() {
        v.to_integer().to_string()
    } else {
        v.to_string()
    }
}

fn row(width: usize, v: Variant, k: usize) -> Result<Option<String>> {
    if k > ceil_log2(width) {
        return Ok(None);
    }
    let args = PredictArgs {
        b: width.is_power_of_two().then(|| width.trailing_zeros() as usize),
        width: Some(width),
        k,
        f: None,
    };
    if v == Variant::KoggeStone {
        let size = q(predict(Quantity::KoggeStoneSize, args)?);
        return Ok(Some(format!(
            "{width},{},{k},,{size},0,{},,{size}",
            v.name(),
            ceil_log2(width)
        )));
    }
    let (split, fanout) = match v {
        Variant::Balanced => (Split::Balanced, Fanout::Unbounded),
        Variant::Fanout(f) => (Split::Unbalanced, Fanout::Bounded(f)),
        _ => (Split::Unbalanced, Fanout::Unbounded),
    };
    let g = build_general(&PpcConfig {
        width,
        k,
        fanout,
        split,
    })?
    .graph;
    let m = metrics(&g);
    let bound = match v {
        Variant::Unbalanced if k == 0 => Some(predict(Quantity::Cor2Bound, args)?),
        Variant::Unbalanced => Some(predict(Quantity::Thm5Bound, args)?),
        Variant::Fanout(f) if k == 0 && args.b.is_some() => Some(predict(
            Quantity::FanoutSizeBound,
            PredictArgs { f: Some(f), ..args },
        )?),
        _ => None,
    };
    let f = match v {
        Variant::Fanout(f) => f.to_string(),
        _ => String::new(),
    };
    Ok(Some(format!(
        "{width},{},{k},{f},{},{},{},{},{}",
        v.name(),
        m.size_logic,
        m.size_buf,
        m.depth,
        m.max_fanout,
        bound.map(q).unwrap_or_default()
    )))
}

pub fn csv(widths: RangeInclusive<usize>, variants: &[Variant], ks: &[usize]) -> Result<String> {
    let mut out = String::from(HEADER);
    out.push('\n');
    for w in widths {
        for &v in variants {
            for &k in ks {
                if let Some(r) = row(w, v, k)? {
                    writeln!(out, "{r}")?;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..70").unwrap(), 1..=70);
        assert_eq!(parse_range("3..=5").unwrap(), 3..=5);
        assert_eq!(parse_range("8").unwrap(), 8..=8);
        for bad in ["0..4", "5..2", "x", "1..", ""] {
            assert!(parse_range(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn variants_parse() {
        assert_eq!("f3".parse::<Variant>().unwrap(), Variant::Fanout(3));
        assert!("f2".parse::<Variant>().is_err());
        assert!("tree".parse::<Variant>().is_err());
    }

    #[test]
    fn small_table() {
        let text = csv(4..=4, &[Variant::Unbalanced, Variant::KoggeStone], &[0, 1]).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], HEADER);
        // T_2: 4 operators, depth 2, pi_2 drives its output, pi_3 and pi_4;
        // 5*4 - 4 - F_5 = 11
        assert_eq!(lines[1], "4,unbalanced,0,,4,0,2,3,11");
        assert_eq!(lines[3], "4,kogge-stone,0,,5,0,2,,5");
    }
}
