// SPDX-License-Identifier: Apache-2.0

//! Binary reflected Gray code and its valid metastable strings.
//!
//! A valid string of width `B` is either a codeword `rg(x)` or the
//! superposition `rg(x) * rg(x+1)`, which carries exactly one `M`. Valid
//! strings are totally ordered by
//! `rg(x) < rg(x)*rg(x+1) < rg(x+1)`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::kleene::{res, star, star_all, Trit, TritVec, MAX_WIDTH};

/// Largest width [`enumerate_valid`] will materialize.
pub const MAX_ENUMERATE: usize = 24;

fn check_width(width: usize) -> Result<()> {
    if width == 0 || width > MAX_WIDTH {
        return Err(Error::Param(format!(
            "width must be in 1..={MAX_WIDTH}, got {width}"
        )));
    }
    Ok(())
}

fn max_value(width: usize) -> u64 {
    if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// `rg_B(x)`.
pub fn rg_encode(width: usize, x: u64) -> Result<TritVec> {
    check_width(width)?;
    if x > max_value(width) {
        return Err(Error::OutOfRange { value: x, width });
    }
    TritVec::from_uint(width, x ^ (x >> 1))
}

/// Inverse of [`rg_encode`]. The input must be stable.
pub fn rg_decode(g: &TritVec) -> Result<u64> {
    let mut b = g.to_uint().ok_or(Error::UnstableInput)?;
    let mut shift = 1;
    while shift < 64 {
        b ^= b >> shift;
        shift <<= 1;
    }
    Ok(b)
}

/// A parsed valid string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ValidString {
    /// `rg(x)`.
    Stable(u64),
    /// `rg(x) * rg(x+1)`.
    Between(u64),
}

impl ValidString {
    /// Position in the total order; codewords sit at even ranks.
    pub fn rank(self) -> u128 {
        match self {
            ValidString::Stable(x) => 2 * x as u128,
            ValidString::Between(x) => 2 * x as u128 + 1,
        }
    }

    pub fn from_rank(rank: u128) -> ValidString {
        let x = (rank / 2) as u64;
        if rank.is_multiple_of(2) {
            ValidString::Stable(x)
        } else {
            ValidString::Between(x)
        }
    }

    pub fn to_vec(self, width: usize) -> Result<TritVec> {
        match self {
            ValidString::Stable(x) => rg_encode(width, x),
            ValidString::Between(x) => {
                if x >= max_value(width) {
                    return Err(Error::OutOfRange { value: x, width });
                }
                star(&rg_encode(width, x)?, &rg_encode(width, x + 1)?)
            }
        }
    }

    /// Recognize a valid string. Errors on anything else.
    pub fn parse(g: &TritVec) -> Result<ValidString> {
        check_width(g.width())?;
        match g.meta_count() {
            0 => Ok(ValidString::Stable(rg_decode(g)?)),
            1 => {
                let m = g.meta_positions()[0];
                let mut lo = *g;
                let mut hi = *g;
                lo.set(m, Trit::Zero);
                hi.set(m, Trit::One);
                let (a, b) = (rg_decode(&lo)?, rg_decode(&hi)?);
                let (a, b) = (a.min(b), a.max(b));
                if b - a == 1 {
                    Ok(ValidString::Between(a))
                } else {
                    Err(Error::NotValid(g.to_string()))
                }
            }
            _ => Err(Error::NotValid(g.to_string())),
        }
    }
}

pub fn is_valid(g: &TritVec) -> bool {
    ValidString::parse(g).is_ok()
}

/// Number of valid strings of width `B`: `2^{B+1} - 1`.
pub fn valid_count(width: usize) -> u128 {
    (1u128 << (width + 1)) - 1
}

/// Every valid string of width `B`, in ascending order.
pub fn enumerate_valid(width: usize) -> Result<Vec<TritVec>> {
    check_width(width)?;
    if width > MAX_ENUMERATE {
        return Err(Error::WidthTooLarge {
            width,
            max: MAX_ENUMERATE,
        });
    }
    (0..valid_count(width))
        .map(|r| ValidString::from_rank(r).to_vec(width))
        .collect()
}

/// Compare two valid strings of equal width.
pub fn order_cmp(g: &TritVec, h: &TritVec) -> Result<Ordering> {
    if g.width() != h.width() {
        return Err(Error::WidthMismatch {
            expected: g.width(),
            got: h.width(),
        });
    }
    Ok(ValidString::parse(g)?.rank().cmp(&ValidString::parse(h)?.rank()))
}

/// Brute-force `max_M` and `min_M`: closure of the stable max/min over
/// all resolutions of both arguments.
pub fn maxmin_closure_oracle(g: &TritVec, h: &TritVec) -> Result<(TritVec, TritVec)> {
    if g.width() != h.width() {
        return Err(Error::WidthMismatch {
            expected: g.width(),
            got: h.width(),
        });
    }
    let mut maxes = Vec::new();
    let mut mins = Vec::new();
    for a in res(g) {
        for b in res(h) {
            let (x, y) = (rg_decode(&a)?, rg_decode(&b)?);
            let (hi, lo) = if x >= y { (a, b) } else { (b, a) };
            maxes.push(hi);
            mins.push(lo);
        }
    }
    Ok((star_all(maxes)?, star_all(mins)?))
}
