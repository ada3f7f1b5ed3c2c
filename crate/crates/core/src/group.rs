//! Finite abelian groups presented as products of cyclic groups.
//!
//! Elements are coordinate vectors, and every element also has a fixed
//! mixed-radix index (lexicographic in the coordinates, last coordinate
//! fastest). All set-valued types store bitsets over that index.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order that may be materialised.
pub const DEFAULT_ENUMERATION_CAP: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    orders: Vec<u64>,
    strides: Vec<usize>,
    size: usize,
    exponent: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub(crate) fn from_coords_unchecked(coords: Vec<u64>) -> Self {
        GroupElement { coords }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl GroupSpec {
    /// Builds a group from cyclic orders. Factors of order 1 are dropped
    /// (a lone trivial factor is kept for the trivial group).
    pub fn new(orders: impl Into<Vec<u64>>) -> Result<Self> {
        let raw: Vec<u64> = orders.into();
        if raw.is_empty() {
            return Err(Error::InvalidGroup("no cyclic factors".into()));
        }
        if raw.contains(&0) {
            return Err(Error::InvalidGroup("cyclic order 0".into()));
        }
        let mut orders: Vec<u64> = raw.into_iter().filter(|&n| n > 1).collect();
        if orders.is_empty() {
            orders.push(1);
        }
        let mut size: u128 = 1;
        for &n in &orders {
            size = size.saturating_mul(n as u128);
        }
        if size > DEFAULT_ENUMERATION_CAP as u128 {
            return Err(Error::CapExceeded {
                size,
                cap: DEFAULT_ENUMERATION_CAP,
            });
        }
        let size = size as usize;
        let mut strides = vec![1usize; orders.len()];
        for i in (0..orders.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * orders[i + 1] as usize;
        }
        let exponent = orders.iter().fold(1u64, |acc, &n| acc.lcm(&n));
        Ok(GroupSpec {
            orders,
            strides,
            size,
            exponent,
        })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Least common multiple of the cyclic orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    /// All elements in index order.
    pub fn enumerate_elements(&self) -> Result<Vec<GroupElement>> {
        self.enumerate_elements_capped(DEFAULT_ENUMERATION_CAP)
    }

    pub fn enumerate_elements_capped(&self, cap: usize) -> Result<Vec<GroupElement>> {
        if self.size > cap {
            return Err(Error::CapExceeded {
                size: self.size as u128,
                cap,
            });
        }
        Ok((0..self.size).map(|i| self.element_at(i)).collect())
    }

    /// Element with the given coordinates, reduced modulo each order.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates for {}, got {}",
                self.rank(),
                self,
                coords.len()
            )));
        }
        Ok(GroupElement {
            coords: coords
                .iter()
                .zip(&self.orders)
                .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
                .collect(),
        })
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.rank()],
        }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.coords.len() == self.rank() && x.coords.iter().zip(&self.orders).all(|(c, n)| c < n)
    }

    pub(crate) fn check(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::mismatch(self, x))
        }
    }

    pub fn index_of(&self, x: &GroupElement) -> Result<usize> {
        self.check(x)?;
        Ok(self.index_of_unchecked(x))
    }

    pub(crate) fn index_of_unchecked(&self, x: &GroupElement) -> usize {
        x.coords
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum()
    }

    pub fn element_at(&self, index: usize) -> GroupElement {
        debug_assert!(index < self.size);
        GroupElement {
            coords: (0..self.rank()).map(|i| self.digit(index, i)).collect(),
        }
    }

    #[inline]
    pub(crate) fn digit(&self, index: usize, axis: usize) -> u64 {
        ((index / self.strides[axis]) % self.orders[axis] as usize) as u64
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.element_at(self.add_idx(self.index_of_unchecked(x), self.index_of_unchecked(y))))
    }

    pub fn neg(&self, x: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        Ok(self.element_at(self.neg_idx(self.index_of_unchecked(x))))
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.element_at(self.sub_idx(self.index_of_unchecked(x), self.index_of_unchecked(y))))
    }

    /// `n·x` for any integer `n`.
    pub fn scale(&self, x: &GroupElement, n: i64) -> Result<GroupElement> {
        self.check(x)?;
        Ok(self.element_at(self.scale_idx(self.index_of_unchecked(x), n)))
    }

    #[inline]
    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        if self.orders.len() == 1 {
            let s = a + b;
            return if s >= self.size { s - self.size } else { s };
        }
        let mut out = 0;
        for axis in 0..self.rank() {
            let n = self.orders[axis];
            let s = self.digit(a, axis) + self.digit(b, axis);
            out += (if s >= n { s - n } else { s }) as usize * self.strides[axis];
        }
        out
    }

    #[inline]
    pub fn neg_idx(&self, a: usize) -> usize {
        if self.orders.len() == 1 {
            return if a == 0 { 0 } else { self.size - a };
        }
        let mut out = 0;
        for axis in 0..self.rank() {
            let n = self.orders[axis];
            let d = self.digit(a, axis);
            out += (if d == 0 { 0 } else { n - d }) as usize * self.strides[axis];
        }
        out
    }

    #[inline]
    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg_idx(b))
    }

    pub fn scale_idx(&self, a: usize, n: i64) -> usize {
        let mut out = 0;
        for axis in 0..self.rank() {
            let m = self.orders[axis] as i128;
            let d = self.digit(a, axis) as i128;
            out += ((d * n as i128).rem_euclid(m)) as usize * self.strides[axis];
        }
        out
    }

    /// Order of the element at `a`.
    pub fn order_idx(&self, a: usize) -> u64 {
        (0..self.rank()).fold(1u64, |acc, axis| {
            let n = self.orders[axis];
            let d = self.digit(a, axis);
            acc.lcm(&(n / d.gcd(&n)))
        })
    }

    /// Numerator `p` of the phase `p / exponent` of the character with dual
    /// index `t` evaluated at the element with index `x`, in `[0, exponent)`.
    #[inline]
    pub fn pairing_idx(&self, t: usize, x: usize) -> u64 {
        let e = self.exponent as u128;
        let mut acc: u128 = 0;
        for axis in 0..self.rank() {
            let n = self.orders[axis] as u128;
            let w = e / n;
            acc += self.digit(t, axis) as u128 * self.digit(x, axis) as u128 % n * w;
        }
        (acc % e) as u64
    }

    /// Pairing numerator mapped to the symmetric range `(-e/2, e/2]`.
    #[inline]
    pub fn centered_pairing_idx(&self, t: usize, x: usize) -> i64 {
        let e = self.exponent as i64;
        let p = self.pairing_idx(t, x) as i64;
        if 2 * p > e {
            p - e
        } else {
            p
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.orders.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "Z{n}")?;
        }
        Ok(())
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Parses presentations such as `Z8`, `Z2^3` or `Z2xZ3xZ5`.
    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let lower = text.to_ascii_lowercase().replace('\u{d7}', "x");
        if lower.is_empty() {
            return Err(Error::Parse("empty group presentation".into()));
        }
        let mut orders = Vec::new();
        for factor in lower.split('x') {
            let body = factor
                .strip_prefix('z')
                .ok_or_else(|| Error::Parse(format!("factor `{factor}` must start with Z")))?;
            let (base, reps) = match body.split_once('^') {
                Some((b, r)) => (b, r),
                None => (body, "1"),
            };
            let n: u64 = base
                .parse()
                .map_err(|_| Error::Parse(format!("bad cyclic order `{base}` in `{s}`")))?;
            let reps: usize = reps
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent `{reps}` in `{s}`")))?;
            if reps == 0 {
                return Err(Error::Parse(format!("zero exponent in `{s}`")));
            }
            orders.extend(std::iter::repeat_n(n, reps));
        }
        GroupSpec::new(orders)
    }
}
