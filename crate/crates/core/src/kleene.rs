// SPDX-License-Identifier: Apache-2.0

//! Three-valued (Kleene) logic over `{0, 1, M}`.
//!
//! `M` stands for a metastable or otherwise unknown signal. Gates propagate
//! `M` only when the stable inputs do not already force the output.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Widest vector a [`TritVec`] can hold.
pub const MAX_WIDTH: usize = 64;

/// Widest vector [`res_vec`] will materialize.
pub const MAX_MATERIALIZE: usize = 16;

/// Widest input accepted by a [`TruthTable`].
pub const MAX_TABLE_INPUTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Trit {
    Zero,
    One,
    Meta,
}

impl Trit {
    pub const ALL: [Trit; 3] = [Trit::Zero, Trit::One, Trit::Meta];

    pub fn from_bool(b: bool) -> Self {
        if b {
            Trit::One
        } else {
            Trit::Zero
        }
    }

    pub fn is_stable(self) -> bool {
        self != Trit::Meta
    }

    /// Dense index: 0, 1, M map to 0, 1, 2.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            '0' => Ok(Trit::Zero),
            '1' => Ok(Trit::One),
            'M' | 'm' => Ok(Trit::Meta),
            _ => Err(Error::InvalidTrit(c)),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Trit::Zero => '0',
            Trit::One => '1',
            Trit::Meta => 'M',
        }
    }

    pub fn and(self, other: Trit) -> Trit {
        match (self, other) {
            (Trit::Zero, _) | (_, Trit::Zero) => Trit::Zero,
            (Trit::One, Trit::One) => Trit::One,
            _ => Trit::Meta,
        }
    }

    pub fn or(self, other: Trit) -> Trit {
        match (self, other) {
            (Trit::One, _) | (_, Trit::One) => Trit::One,
            (Trit::Zero, Trit::Zero) => Trit::Zero,
            _ => Trit::Meta,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Trit {
        match self {
            Trit::Zero => Trit::One,
            Trit::One => Trit::Zero,
            Trit::Meta => Trit::Meta,
        }
    }

    /// Superposition of two trits: agreement is kept, disagreement is `M`.
    pub fn star(self, other: Trit) -> Trit {
        if self == other {
            self
        } else {
            Trit::Meta
        }
    }
}

impl fmt::Display for Trit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Primitive gates of the netlist layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    And,
    Or,
    Not,
    Buf,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::And | GateKind::Or => 2,
            GateKind::Not | GateKind::Buf => 1,
        }
    }
}

/// Evaluate one gate. Errors on a wrong number of inputs.
pub fn gate_eval(kind: GateKind, inputs: &[Trit]) -> Result<Trit> {
    if inputs.len() != kind.arity() {
        return Err(Error::Arity {
            expected: kind.arity(),
            got: inputs.len(),
        });
    }
    Ok(match kind {
        GateKind::And => inputs[0].and(inputs[1]),
        GateKind::Or => inputs[0].or(inputs[1]),
        GateKind::Not => inputs[0].not(),
        GateKind::Buf => inputs[0],
    })
}

/// Fixed-width trit vector, 1-indexed, packed two bits per position.
///
/// Invariant: `val & meta == 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct TritVec {
    width: u8,
    val: u64,
    meta: u64,
}

impl TritVec {
    pub fn new(width: usize) -> Result<Self> {
        if width > MAX_WIDTH {
            return Err(Error::WidthTooLarge {
                width,
                max: MAX_WIDTH,
            });
        }
        Ok(TritVec {
            width: width as u8,
            val: 0,
            meta: 0,
        })
    }

    pub fn from_trits(trits: &[Trit]) -> Result<Self> {
        let mut v = TritVec::new(trits.len())?;
        for (i, &t) in trits.iter().enumerate() {
            v.set(i + 1, t);
        }
        Ok(v)
    }

    /// Stable vector whose position 1 is the most significant bit of `x`.
    pub fn from_uint(width: usize, x: u64) -> Result<Self> {
        let mut v = TritVec::new(width)?;
        for i in 1..=width {
            let bit = (x >> (width - i)) & 1 == 1;
            v.set(i, Trit::from_bool(bit));
        }
        Ok(v)
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    fn mask(&self) -> u64 {
        if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        }
    }

    /// Position `i` in `1..=width`. Panics when out of range.
    pub fn get(&self, i: usize) -> Trit {
        assert!(i >= 1 && i <= self.width(), "trit index {i} out of range");
        let b = i - 1;
        if (self.meta >> b) & 1 == 1 {
            Trit::Meta
        } else if (self.val >> b) & 1 == 1 {
            Trit::One
        } else {
            Trit::Zero
        }
    }

    pub fn set(&mut self, i: usize, t: Trit) {
        assert!(i >= 1 && i <= self.width(), "trit index {i} out of range");
        let b = 1u64 << (i - 1);
        self.val &= !b;
        self.meta &= !b;
        match t {
            Trit::Zero => {}
            Trit::One => self.val |= b,
            Trit::Meta => self.meta |= b,
        }
    }

    pub fn trits(&self) -> impl Iterator<Item = Trit> + '_ {
        (1..=self.width()).map(move |i| self.get(i))
    }

    pub fn meta_count(&self) -> usize {
        self.meta.count_ones() as usize
    }

    pub fn is_stable(&self) -> bool {
        self.meta == 0
    }

    /// Positions holding `M`, ascending.
    pub fn meta_positions(&self) -> Vec<usize> {
        (1..=self.width())
            .filter(|&i| (self.meta >> (i - 1)) & 1 == 1)
            .collect()
    }

    /// Unsigned value with position 1 as MSB. `None` unless stable.
    pub fn to_uint(&self) -> Option<u64> {
        if !self.is_stable() {
            return None;
        }
        let mut x = 0u64;
        for i in 1..=self.width() {
            x = (x << 1) | ((self.val >> (i - 1)) & 1);
        }
        Some(x)
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &TritVec) -> Result<TritVec> {
        let w = self.width() + other.width();
        if w > MAX_WIDTH {
            return Err(Error::WidthTooLarge {
                width: w,
                max: MAX_WIDTH,
            });
        }
        let s = self.width as u32;
        Ok(TritVec {
            width: w as u8,
            val: self.val | other.val.checked_shl(s).unwrap_or(0),
            meta: self.meta | other.meta.checked_shl(s).unwrap_or(0),
        })
    }

    /// Positions `lo..=hi` as a new vector.
    pub fn slice(&self, lo: usize, hi: usize) -> TritVec {
        assert!(lo >= 1 && hi <= self.width() && lo <= hi + 1);
        let w = hi + 1 - lo;
        let m = if w == 64 { u64::MAX } else { (1u64 << w) - 1 };
        TritVec {
            width: w as u8,
            val: (self.val >> (lo - 1)) & m,
            meta: (self.meta >> (lo - 1)) & m,
        }
    }

    pub fn star(&self, other: &TritVec) -> Result<TritVec> {
        star(self, other)
    }

    pub(crate) fn from_raw(width: usize, val: u64, meta: u64) -> TritVec {
        debug_assert!(width <= MAX_WIDTH);
        let mut v = TritVec {
            width: width as u8,
            val: 0,
            meta: 0,
        };
        let m = v.mask();
        v.meta = meta & m;
        v.val = val & m & !v.meta;
        v
    }
}

impl fmt::Display for TritVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in self.trits() {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TritVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TritVec({self})")
    }
}

impl FromStr for TritVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trits = s
            .trim()
            .chars()
            .map(Trit::from_char)
            .collect::<Result<Vec<_>>>()?;
        TritVec::from_trits(&trits)
    }
}

/// Two-trit value: a state or input symbol of the comparison machine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair(pub Trit, pub Trit);

impl Pair {
    pub const ZERO: Pair = Pair(Trit::Zero, Trit::Zero);

    /// All nine pairs in `0 < 1 < M` lexicographic order.
    pub fn all() -> impl Iterator<Item = Pair> {
        Trit::ALL
            .into_iter()
            .flat_map(|a| Trit::ALL.into_iter().map(move |b| Pair(a, b)))
    }

    /// The four stable pairs.
    pub fn stable() -> impl Iterator<Item = Pair> {
        Pair::all().filter(|p| p.is_stable())
    }

    pub fn index(self) -> usize {
        3 * self.0.index() + self.1.index()
    }

    pub fn from_index(i: usize) -> Pair {
        Pair(Trit::ALL[i / 3], Trit::ALL[i % 3])
    }

    pub fn is_stable(self) -> bool {
        self.0.is_stable() && self.1.is_stable()
    }

    pub fn to_vec(self) -> TritVec {
        TritVec::from_trits(&[self.0, self.1]).expect("width 2")
    }

    pub fn from_vec(v: &TritVec) -> Result<Pair> {
        if v.width() != 2 {
            return Err(Error::WidthMismatch {
                expected: 2,
                got: v.width(),
            });
        }
        Ok(Pair(v.get(1), v.get(2)))
    }

    pub fn star(self, other: Pair) -> Pair {
        Pair(self.0.star(other.0), self.1.star(other.1))
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.0, self.1)
    }
}

impl FromStr for Pair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pair::from_vec(&s.parse::<TritVec>()?)
    }
}

/// Position-wise superposition. Widths must match.
pub fn star(x: &TritVec, y: &TritVec) -> Result<TritVec> {
    if x.width() != y.width() {
        return Err(Error::WidthMismatch {
            expected: x.width(),
            got: y.width(),
        });
    }
    let meta = x.meta | y.meta | (x.val ^ y.val);
    Ok(TritVec::from_raw(x.width(), x.val & !meta, meta))
}

/// Superposition of a non-empty set of vectors.
pub fn star_all<I: IntoIterator<Item = TritVec>>(items: I) -> Result<TritVec> {
    let mut it = items.into_iter();
    let first = it.next().ok_or(Error::EmptySuperposition)?;
    it.try_fold(first, |acc, v| star(&acc, &v))
}

/// Lazy enumeration of every stable resolution of a vector.
///
/// Resolutions are produced in ascending order of the bits assigned to the
/// `M` positions, lowest position first.
pub struct Resolutions {
    base: TritVec,
    positions: Vec<usize>,
    next: u64,
    end: u64,
}

impl Iterator for Resolutions {
    type Item = TritVec;

    fn next(&mut self) -> Option<TritVec> {
        if self.next >= self.end {
            return None;
        }
        let code = self.next;
        self.next += 1;
        let mut v = self.base;
        for (j, &p) in self.positions.iter().enumerate() {
            v.set(p, Trit::from_bool((code >> j) & 1 == 1));
        }
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

/// Iterator over `res(x)`; the count is `2^{#M}`.
pub fn res(x: &TritVec) -> Resolutions {
    let positions = x.meta_positions();
    let end = if positions.len() >= 64 {
        u64::MAX
    } else {
        1u64 << positions.len()
    };
    Resolutions {
        base: *x,
        positions,
        next: 0,
        end,
    }
}

/// Materialized `res(x)`, only for widths up to [`MAX_MATERIALIZE`].
pub fn res_vec(x: &TritVec) -> Result<Vec<TritVec>> {
    if x.width() > MAX_MATERIALIZE {
        return Err(Error::WidthTooLarge {
            width: x.width(),
            max: MAX_MATERIALIZE,
        });
    }
    Ok(res(x).collect())
}

/// Stable Boolean function given by its full truth table.
///
/// Row `r` holds `f(x)` for the stable input whose value (position 1 as MSB)
/// is `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    n_in: usize,
    n_out: usize,
    rows: Vec<TritVec>,
}

impl TruthTable {
    pub fn from_fn<F>(n_in: usize, n_out: usize, f: F) -> Result<Self>
    where
        F: Fn(&TritVec) -> TritVec,
    {
        if n_in > MAX_TABLE_INPUTS {
            return Err(Error::WidthTooLarge {
                width: n_in,
                max: MAX_TABLE_INPUTS,
            });
        }
        let mut rows = Vec::with_capacity(1 << n_in);
        for r in 0..(1u64 << n_in) {
            let y = f(&TritVec::from_uint(n_in, r)?);
            if y.width() != n_out {
                return Err(Error::WidthMismatch {
                    expected: n_out,
                    got: y.width(),
                });
            }
            if !y.is_stable() {
                return Err(Error::UnstableTable);
            }
            rows.push(y);
        }
        Ok(TruthTable { n_in, n_out, rows })
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn lookup(&self, x: &TritVec) -> Result<TritVec> {
        let r = x.to_uint().ok_or(Error::UnstableInput)?;
        Ok(self.rows[r as usize])
    }
}

/// Metastable closure `f_M(x) = *f[res(x)]` of a tabulated function.
pub fn closure_apply(table: &TruthTable, x: &TritVec) -> Result<TritVec> {
    if x.width() != table.n_in {
        return Err(Error::WidthMismatch {
            expected: table.n_in,
            got: x.width(),
        });
    }
    star_all(res(x).map(|r| table.rows[r.to_uint().expect("stable") as usize]))
}

/// Metastable closure of a callable stable function.
pub fn closure_apply_fn<F>(f: F, x: &TritVec) -> Result<TritVec>
where
    F: Fn(&TritVec) -> TritVec,
{
    star_all(res(x).map(|r| f(&r)))
}

/// Bit-sliced trits: 64 independent lanes.
///
/// `can0` marks lanes that may resolve to 0, `can1` lanes that may resolve
/// to 1. `M` sets both; a lane with neither is never produced by the gates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Lanes {
    pub can0: u64,
    pub can1: u64,
}

impl Lanes {
    pub const ZERO: Lanes = Lanes {
        can0: u64::MAX,
        can1: 0,
    };
    pub const ONE: Lanes = Lanes {
        can0: 0,
        can1: u64::MAX,
    };

    #[inline]
    pub fn and(self, o: Lanes) -> Lanes {
        Lanes {
            can0: self.can0 | o.can0,
            can1: self.can1 & o.can1,
        }
    }

    #[inline]
    pub fn or(self, o: Lanes) -> Lanes {
        Lanes {
            can0: self.can0 & o.can0,
            can1: self.can1 | o.can1,
        }
    }

    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Lanes {
        Lanes {
            can0: self.can1,
            can1: self.can0,
        }
    }

    pub fn set(&mut self, lane: usize, t: Trit) {
        let b = 1u64 << lane;
        self.can0 &= !b;
        self.can1 &= !b;
        match t {
            Trit::Zero => self.can0 |= b,
            Trit::One => self.can1 |= b,
            Trit::Meta => {
                self.can0 |= b;
                self.can1 |= b
            }
        }
    }

    pub fn get(&self, lane: usize) -> Trit {
        match ((self.can0 >> lane) & 1, (self.can1 >> lane) & 1) {
            (1, 0) => Trit::Zero,
            (0, 1) => Trit::One,
            _ => Trit::Meta,
        }
    }
}
