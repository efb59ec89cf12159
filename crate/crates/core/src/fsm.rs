// SPDX-License-Identifier: Apache-2.0

//! Four-state comparison machine for Gray code strings and its closure.
//!
//! States: `00` equal prefix with even parity, `11` equal prefix with odd
//! parity, `01` means `g < h`, `10` means `g > h`. The transition `⋄` is
//! associative on stable pairs; its closure `⋄_M` stays associative, which
//! is what lets a prefix circuit evaluate the machine in logarithmic depth.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::kleene::{closure_apply_fn, Pair, Trit, TritVec};

/// Column order used when printing operator tables.
pub const GRAY_ORDER: [&str; 9] = ["00", "0M", "01", "M1", "11", "1M", "10", "M0", "MM"];

/// Stable transition `s ⋄ b`.
pub fn diamond(s: Pair, b: Pair) -> Pair {
    debug_assert!(s.is_stable() && b.is_stable());
    match s {
        Pair(Trit::Zero, Trit::Zero) => b,
        Pair(Trit::One, Trit::One) => Pair(b.0.not(), b.1.not()),
        _ => s,
    }
}

/// Stable output `out(s, b)`: the bits of `max` and `min` at this position.
pub fn out(s: Pair, b: Pair) -> Pair {
    debug_assert!(s.is_stable() && b.is_stable());
    let (hi, lo) = (b.0.or(b.1), b.0.and(b.1));
    match s {
        Pair(Trit::Zero, Trit::Zero) => Pair(hi, lo),
        Pair(Trit::One, Trit::One) => Pair(lo, hi),
        Pair(Trit::One, Trit::Zero) => b,
        _ => Pair(b.1, b.0),
    }
}

/// Binary operator on pairs, tabulated over all nine-by-nine arguments.
#[derive(Clone, PartialEq, Eq)]
pub struct OpTable {
    cells: [[Pair; 9]; 9],
}

impl OpTable {
    /// Closure of a stable operator, computed over `res` of both arguments.
    pub fn closure_of<F>(f: F) -> OpTable
    where
        F: Fn(Pair, Pair) -> Pair,
    {
        let stable = |v: &TritVec| {
            let r = f(Pair(v.get(1), v.get(2)), Pair(v.get(3), v.get(4)));
            r.to_vec()
        };
        let mut cells = [[Pair::ZERO; 9]; 9];
        for a in Pair::all() {
            for b in Pair::all() {
                let x = a.to_vec().concat(&b.to_vec()).expect("width 4");
                let y = closure_apply_fn(stable, &x).expect("non-empty res");
                cells[a.index()][b.index()] = Pair::from_vec(&y).expect("width 2");
            }
        }
        OpTable { cells }
    }

    /// Parse a labelled grid: a header line of column pairs, then one line
    /// per row pair. Lines starting with `#` are ignored.
    pub fn parse_grid(text: &str) -> Result<OpTable> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header: Vec<Pair> = lines
            .next()
            .ok_or_else(|| Error::Param("empty grid".into()))?
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_>>()?;
        if header.len() != 9 {
            return Err(Error::Param("grid header needs nine pairs".into()));
        }
        let mut cells = [[None; 9]; 9];
        for line in lines {
            let items: Vec<Pair> = line.split_whitespace().map(str::parse).collect::<Result<_>>()?;
            if items.len() != 10 {
                return Err(Error::Param(format!(
                    "grid row {line:?} needs a label and nine pairs"
                )));
            }
            for (c, &v) in header.iter().zip(&items[1..]) {
                cells[items[0].index()][c.index()] = Some(v);
            }
        }
        let mut out = [[Pair::ZERO; 9]; 9];
        for (r, row) in cells.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                out[r][c] = v.ok_or_else(|| {
                    Error::Param(format!(
                        "grid misses cell ({}, {})",
                        Pair::from_index(r),
                        Pair::from_index(c)
                    ))
                })?;
            }
        }
        Ok(OpTable { cells: out })
    }

    #[inline]
    pub fn apply(&self, a: Pair, b: Pair) -> Pair {
        self.cells[a.index()][b.index()]
    }

    /// Cells where `self` and `other` differ, as `(a, b, self, other)`.
    pub fn diff(&self, other: &OpTable) -> Vec<(Pair, Pair, Pair, Pair)> {
        let mut out = Vec::new();
        for a in Pair::all() {
            for b in Pair::all() {
                let (x, y) = (self.apply(a, b), other.apply(a, b));
                if x != y {
                    out.push((a, b, x, y));
                }
            }
        }
        out
    }
}

impl fmt::Display for OpTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order: Vec<Pair> = GRAY_ORDER.iter().map(|s| s.parse().unwrap()).collect();
        write!(f, "  ")?;
        for c in &order {
            write!(f, " {c}")?;
        }
        writeln!(f)?;
        for r in &order {
            write!(f, "{r}")?;
            for c in &order {
                write!(f, " {}", self.apply(*r, *c))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for OpTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `⋄_M` as a table.
pub fn diamond_m_table() -> &'static OpTable {
    static T: OnceLock<OpTable> = OnceLock::new();
    T.get_or_init(|| OpTable::closure_of(diamond))
}

/// `out_M` as a table.
pub fn out_m_table() -> &'static OpTable {
    static T: OnceLock<OpTable> = OnceLock::new();
    T.get_or_init(|| OpTable::closure_of(out))
}

pub fn diamond_m(s: Pair, b: Pair) -> Pair {
    diamond_m_table().apply(s, b)
}

pub fn out_m(s: Pair, b: Pair) -> Pair {
    out_m_table().apply(s, b)
}

/// Addition of two-bit numbers modulo four, used as a non-example.
pub fn add_mod4(a: Pair, b: Pair) -> Pair {
    let v = |p: Pair| 2 * (p.0 == Trit::One) as u8 + (p.1 == Trit::One) as u8;
    let s = (v(a) + v(b)) % 4;
    Pair(Trit::from_bool(s & 2 != 0), Trit::from_bool(s & 1 != 0))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssocReport {
    pub checked: usize,
    pub failures: usize,
    /// First failing triple `(a, b, c, (a∘b)∘c, a∘(b∘c))`.
    pub first: Option<(Pair, Pair, Pair, Pair, Pair)>,
}

impl AssocReport {
    pub fn holds(&self) -> bool {
        self.failures == 0
    }
}

/// Check associativity over all 729 triples.
pub fn check_associativity(op: &OpTable) -> AssocReport {
    let mut rep = AssocReport {
        checked: 0,
        failures: 0,
        first: None,
    };
    for a in Pair::all() {
        for b in Pair::all() {
            for c in Pair::all() {
                rep.checked += 1;
                let l = op.apply(op.apply(a, b), c);
                let r = op.apply(a, op.apply(b, c));
                if l != r {
                    rep.failures += 1;
                    rep.first.get_or_insert((a, b, c, l, r));
                }
            }
        }
    }
    rep
}

/// Run of the closure machine on `(g, h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    /// `g_i h_i` for `i = 1..=B`.
    pub inputs: Vec<Pair>,
    /// `s^(0) .. s^(B)`, with `s^(0) = 00`.
    pub states: Vec<Pair>,
    /// `out_M(s^(i-1), g_i h_i)` for `i = 1..=B`.
    pub outputs: Vec<Pair>,
}

impl Trace {
    pub fn max(&self) -> TritVec {
        TritVec::from_trits(&self.outputs.iter().map(|p| p.0).collect::<Vec<_>>()).expect("width")
    }

    pub fn min(&self) -> TritVec {
        TritVec::from_trits(&self.outputs.iter().map(|p| p.1).collect::<Vec<_>>()).expect("width")
    }
}

fn check_pair_widths(g: &TritVec, h: &TritVec) -> Result<()> {
    if g.width() != h.width() {
        return Err(Error::WidthMismatch {
            expected: g.width(),
            got: h.width(),
        });
    }
    if g.width() == 0 {
        return Err(Error::Param("empty input".into()));
    }
    Ok(())
}

/// Sequential evaluation of the closure machine.
pub fn fsm_trace(g: &TritVec, h: &TritVec) -> Result<Trace> {
    check_pair_widths(g, h)?;
    let inputs: Vec<Pair> = (1..=g.width()).map(|i| Pair(g.get(i), h.get(i))).collect();
    let mut states = vec![Pair::ZERO];
    let mut outputs = Vec::with_capacity(inputs.len());
    for &b in &inputs {
        let s = *states.last().unwrap();
        outputs.push(out_m(s, b));
        states.push(diamond_m(s, b));
    }
    Ok(Trace {
        inputs,
        states,
        outputs,
    })
}

/// `(max_M, min_M)` of two valid strings via the closure machine.
pub fn two_sort_reference(g: &TritVec, h: &TritVec) -> Result<(TritVec, TritVec)> {
    let t = fsm_trace(g, h)?;
    Ok((t.max(), t.min()))
}

/// How [`format_trace_as`] lays out the output rows.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TraceLayout {
    /// One row per output bit, every state including `s(B)`.
    #[default]
    Split,
    /// One row of output pairs; `s(B)` is left blank since no output
    /// depends on it.
    Joint,
}

/// Row layout: index, input pair, state, and the two output bits.
pub fn format_trace(t: &Trace) -> String {
    format_trace_as(t, TraceLayout::Split)
}

pub fn format_trace_as(t: &Trace, layout: TraceLayout) -> String {
    let n = t.inputs.len();
    let blank_first = |cells: Vec<String>| {
        let mut v = vec![String::new()];
        v.extend(cells);
        v
    };
    let mut states: Vec<String> = t.states.iter().map(|s| s.to_string()).collect();
    let mut rows: Vec<(&str, Vec<String>)> = vec![
        ("i", (0..=n).map(|i| i.to_string()).collect()),
        (
            "g_i h_i",
            blank_first(t.inputs.iter().map(|p| p.to_string()).collect()),
        ),
    ];
    match layout {
        TraceLayout::Split => {
            rows.push(("s(i)", states));
            rows.push((
                "g'_i",
                blank_first(t.outputs.iter().map(|p| p.0.to_string()).collect()),
            ));
            rows.push((
                "h'_i",
                blank_first(t.outputs.iter().map(|p| p.1.to_string()).collect()),
            ));
        }
        TraceLayout::Joint => {
            states[n].clear();
            rows.push(("s(i)", states));
            rows.push((
                "g'_i h'_i",
                blank_first(t.outputs.iter().map(|p| p.to_string()).collect()),
            ));
        }
    }
    let pad = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
    let mut s = String::new();
    for (label, cells) in rows {
        let mut line = format!("{label:<pad$}");
        for c in cells {
            line.push_str(&format!(" | {c:<2}"));
        }
        s.push_str(line.trim_end());
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Pair {
        s.parse().unwrap()
    }

    fn tv(s: &str) -> TritVec {
        s.parse().unwrap()
    }

    #[test]
    fn stable_tables() {
        // rows: state; columns: input 00, 01, 11, 10
        let cols = ["00", "01", "11", "10"];
        let dia = [
            ("00", ["00", "01", "11", "10"]),
            ("01", ["01", "01", "01", "01"]),
            ("11", ["11", "10", "00", "01"]),
            ("10", ["10", "10", "10", "10"]),
        ];
        let outs = [
            ("00", ["00", "10", "11", "10"]),
            ("01", ["00", "10", "11", "01"]),
            ("11", ["00", "01", "11", "01"]),
            ("10", ["00", "01", "11", "10"]),
        ];
        for (s, row) in dia {
            for (c, e) in cols.iter().zip(row) {
                assert_eq!(diamond(p(s), p(c)), p(e), "{s} ⋄ {c}");
            }
        }
        for (s, row) in outs {
            for (c, e) in cols.iter().zip(row) {
                assert_eq!(out(p(s), p(c)), p(e), "out({s}, {c})");
            }
        }
    }

    #[test]
    fn closure_tables_against_published() {
        let d = OpTable::parse_grid(include_str!("../tests/data/diamond_m.txt")).unwrap();
        let o = OpTable::parse_grid(include_str!("../tests/data/out_m.txt")).unwrap();
        assert_eq!(diamond_m_table().diff(&d), vec![]);
        // one published cell disagrees with the definition: out over
        // {00,10} x {00,10} yields {00,10,00,10}, whose superposition is M0
        assert_eq!(out_m_table().diff(&o), vec![(p("M0"), p("M0"), p("M0"), p("0M"))]);
    }

    #[test]
    fn closure_restricts_to_stable_operator() {
        for a in Pair::stable() {
            for b in Pair::stable() {
                assert_eq!(diamond_m(a, b), diamond(a, b));
                assert_eq!(out_m(a, b), out(a, b));
            }
        }
    }

    #[test]
    fn stable_diamond_is_associative() {
        for a in Pair::stable() {
            for b in Pair::stable() {
                for c in Pair::stable() {
                    assert_eq!(diamond(diamond(a, b), c), diamond(a, diamond(b, c)));
                }
            }
        }
    }

    #[test]
    fn closure_of_mod4_addition_is_not_associative() {
        let t = OpTable::closure_of(add_mod4);
        let (a, b) = (p("0M"), p("01"));
        assert_eq!(t.apply(t.apply(a, b), b), p("MM"));
        assert_eq!(t.apply(a, t.apply(b, b)), p("1M"));
        let rep = check_associativity(&t);
        assert!(!rep.holds());
        assert_eq!(rep.checked, 729);
    }

    #[test]
    fn trace_of_stable_inputs() {
        let t = fsm_trace(&tv("1001"), &tv("1000")).unwrap();
        let states: Vec<String> = t.states.iter().map(|s| s.to_string()).collect();
        assert_eq!(states, ["00", "11", "11", "11", "01"]);
        assert_eq!(t.max(), tv("1000"));
        assert_eq!(t.min(), tv("1001"));
    }

    #[test]
    fn trace_format_layout() {
        let t = fsm_trace(&tv("10"), &tv("11")).unwrap();
        let s = format_trace(&t);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "i       | 0  | 1  | 2");
        assert_eq!(lines[1], "g_i h_i |    | 11 | 01");
    }

    #[test]
    fn width_mismatch_is_rejected() {
        assert!(fsm_trace(&tv("10"), &tv("1")).is_err());
    }
}
