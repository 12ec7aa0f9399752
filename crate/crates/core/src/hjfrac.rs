//! Hirzebruch–Jung continued fractions and cyclic quotient singularity types.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// The type `1/r(1,a)` of a cyclic quotient singularity.
///
/// The smooth type is `(1, 0)`; otherwise `0 < a < r` and `gcd(a, r) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SingularityType {
    r: i64,
    a: i64,
}

impl SingularityType {
    pub fn new(r: i64, a: i64) -> Result<Self> {
        let ok = if r == 1 {
            a == 0
        } else {
            r > 1 && a > 0 && a < r && a.gcd(&r) == 1
        };
        if ok {
            Ok(SingularityType { r, a })
        } else {
            Err(Error::InvalidType { r, a })
        }
    }

    pub const fn smooth() -> Self {
        SingularityType { r: 1, a: 0 }
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn is_smooth(&self) -> bool {
        self.r == 1
    }

    /// Type A, i.e. all chain curves are (−2)-curves.
    pub fn is_gorenstein(&self) -> bool {
        self.r == 1 || self.a == self.r - 1
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}(1,{})", self.r, self.a)
    }
}

/// Digits `[d_1, ..., d_m]` with every `d_i ≥ 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct HJExpansion {
    digits: Vec<i64>,
}

impl HJExpansion {
    pub fn new(digits: Vec<i64>) -> Result<Self> {
        if digits.iter().all(|&d| d >= 2) {
            Ok(HJExpansion { digits })
        } else {
            Err(Error::InvalidDigits)
        }
    }

    pub fn digits(&self) -> &[i64] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn reversed(&self) -> Self {
        HJExpansion {
            digits: self.digits.iter().rev().copied().collect(),
        }
    }

    pub fn tail(&self) -> &[i64] {
        self.digits.get(1..).unwrap_or(&[])
    }
}

impl fmt::Display for HJExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.digits.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

pub fn hj_expand(t: SingularityType) -> HJExpansion {
    let (mut r, mut a) = (t.r, t.a);
    let mut digits = Vec::new();
    while a > 0 {
        let d = Integer::div_ceil(&r, &a);
        digits.push(d);
        (r, a) = (a, d * a - r);
    }
    HJExpansion { digits }
}

/// The continuant of `ds`, i.e. the determinant of the negated intersection matrix of the chain.
pub fn tridet(ds: &[i64]) -> i128 {
    let (mut next, mut cur) = (0i128, 1i128);
    for &d in ds.iter().rev() {
        (next, cur) = (cur, i128::from(d) * cur - next);
    }
    cur
}

pub fn checked_tridet(ds: &[i64]) -> Option<i64> {
    let (mut next, mut cur) = (0i64, 1i64);
    for &d in ds.iter().rev() {
        let v = d.checked_mul(cur)?.checked_sub(next)?;
        (next, cur) = (cur, v);
    }
    Some(cur)
}

pub fn hj_eval(ds: &HJExpansion) -> Result<SingularityType> {
    if ds.is_empty() {
        return Ok(SingularityType::smooth());
    }
    let r = checked_tridet(ds.digits()).ok_or(Error::Overflow)?;
    let a = checked_tridet(ds.tail()).ok_or(Error::Overflow)?;
    SingularityType::new(r, a)
}

/// Expansion of `r/(r−a)`, whose digits parametrize the Kalck–Karmazyn algebra.
pub fn dual_fraction(t: SingularityType) -> Result<HJExpansion> {
    if t.is_smooth() {
        return Err(Error::SmoothPoint);
    }
    Ok(hj_expand(SingularityType {
        r: t.r,
        a: t.r - t.a,
    }))
}

/// `(r, a')` with `a·a' ≡ 1 mod r`: the type seen from the other end of the chain.
pub fn inverse_type(t: SingularityType) -> Result<SingularityType> {
    if t.is_smooth() {
        return Err(Error::SmoothPoint);
    }
    Ok(SingularityType {
        r: t.r,
        a: mod_inverse(t.a, t.r).expect("type is coprime"),
    })
}

/// Inverse of `a` modulo `m > 1`, in `[0, m)`.
pub fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let e = i128::from(a).extended_gcd(&i128::from(m));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.mod_floor(&i128::from(m)) as i64)
}
