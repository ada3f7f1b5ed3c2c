//! Finite subsets of a group, stored as bitsets over the element index.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSet {
    group: GroupSpec,
    bits: FixedBitSet,
    size: usize,
}

impl GSet {
    pub fn empty(g: &GroupSpec) -> Self {
        GSet {
            group: g.clone(),
            bits: FixedBitSet::with_capacity(g.size()),
            size: 0,
        }
    }

    pub fn full(g: &GroupSpec) -> Self {
        let mut bits = FixedBitSet::with_capacity(g.size());
        bits.insert_range(..);
        GSet {
            group: g.clone(),
            bits,
            size: g.size(),
        }
    }

    pub fn singleton_zero(g: &GroupSpec) -> Self {
        Self::from_indices(g, [0])
    }

    /// Panics if an index is out of range; indices come from `GroupSpec`.
    pub fn from_indices(g: &GroupSpec, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut bits = FixedBitSet::with_capacity(g.size());
        for i in indices {
            assert!(i < g.size(), "index {i} out of range for {g}");
            bits.insert(i);
        }
        Self::from_bits(g, bits)
    }

    pub(crate) fn from_bits(g: &GroupSpec, bits: FixedBitSet) -> Self {
        debug_assert_eq!(bits.len(), g.size());
        let size = bits.count_ones(..);
        GSet {
            group: g.clone(),
            bits,
            size,
        }
    }

    pub fn from_elements<'a>(
        g: &GroupSpec,
        elements: impl IntoIterator<Item = &'a GroupElement>,
    ) -> Result<Self> {
        let mut idx = Vec::new();
        for e in elements {
            idx.push(g.index_of(e)?);
        }
        Ok(Self::from_indices(g, idx))
    }

    /// Builds a set from integer coordinate tuples, reducing each coordinate.
    pub fn from_coords(g: &GroupSpec, tuples: &[Vec<i64>]) -> Result<Self> {
        let mut idx = Vec::with_capacity(tuples.len());
        for t in tuples {
            idx.push(g.index_of(&g.element(t)?)?);
        }
        Ok(Self::from_indices(g, idx))
    }

    /// Parses `{(0,1),(1,2)}`, or `{0,2,4}` in single-factor groups.
    pub fn parse(g: &GroupSpec, literal: &str) -> Result<Self> {
        let text: String = literal.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = text
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("set literal `{literal}` must be braced")))?;
        let mut tuples = Vec::new();
        let mut rest = inner;
        while !rest.is_empty() {
            let (item, tail) = if let Some(r) = rest.strip_prefix('(') {
                let close = r
                    .find(')')
                    .ok_or_else(|| Error::Parse(format!("unclosed tuple in `{literal}`")))?;
                (&r[..close], &r[close + 1..])
            } else {
                if g.rank() != 1 {
                    return Err(Error::Parse(format!(
                        "bare scalars need a single-factor group; {g} has rank {}",
                        g.rank()
                    )));
                }
                match rest.find(',') {
                    Some(c) => (&rest[..c], &rest[c..]),
                    None => (rest, ""),
                }
            };
            let coords = item
                .split(',')
                .map(|c| {
                    c.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad coordinate `{c}` in `{literal}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            tuples.push(coords);
            rest = match tail.strip_prefix(',') {
                Some(t) => t,
                None if tail.is_empty() => tail,
                None => return Err(Error::Parse(format!("expected `,` in `{literal}`"))),
            };
        }
        Self::from_coords(g, &tuples)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn contains_idx(&self, i: usize) -> bool {
        self.bits.contains(i)
    }

    pub fn contains(&self, x: &GroupElement) -> Result<bool> {
        Ok(self.bits.contains(self.group.index_of(x)?))
    }

    /// Element indices in increasing order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        self.indices().map(|i| self.group.element_at(i)).collect()
    }

    pub fn first_index(&self) -> Option<usize> {
        self.bits.minimum()
    }

    pub(crate) fn same_group(&self, other: &GSet) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::mismatch(&self.group, &other.group))
        }
    }

    pub fn union(&self, other: &GSet) -> Result<GSet> {
        self.same_group(other)?;
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Ok(Self::from_bits(&self.group, bits))
    }

    pub fn intersection(&self, other: &GSet) -> Result<GSet> {
        self.same_group(other)?;
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Ok(Self::from_bits(&self.group, bits))
    }

    pub fn difference(&self, other: &GSet) -> Result<GSet> {
        self.same_group(other)?;
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        Ok(Self::from_bits(&self.group, bits))
    }

    pub fn complement(&self) -> GSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        Self::from_bits(&self.group, bits)
    }

    pub fn intersection_len(&self, other: &GSet) -> Result<usize> {
        self.same_group(other)?;
        Ok(self.bits.intersection_count(&other.bits))
    }

    pub fn symmetric_difference_len(&self, other: &GSet) -> Result<usize> {
        self.same_group(other)?;
        Ok(self.bits.symmetric_difference_count(&other.bits))
    }

    pub fn is_subset(&self, other: &GSet) -> Result<bool> {
        self.same_group(other)?;
        Ok(self.bits.is_subset(&other.bits))
    }

    /// First index (in index order) of `self` missing from `other`.
    pub fn first_outside(&self, other: &GSet) -> Result<Option<usize>> {
        self.same_group(other)?;
        Ok(self.indices().find(|&i| !other.contains_idx(i)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.indices()
            .all(|i| self.contains_idx(self.group.neg_idx(i)))
    }
}

impl fmt::Display for GSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.indices().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", self.group.element_at(i))?;
        }
        f.write_str("}")
    }
}

#[derive(Serialize, Deserialize)]
struct GSetRepr {
    group: String,
    set: String,
}

impl Serialize for GSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GSetRepr {
            group: self.group.to_string(),
            set: self.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = GSetRepr::deserialize(d)?;
        let g: GroupSpec = repr.group.parse().map_err(serde::de::Error::custom)?;
        GSet::parse(&g, &repr.set).map_err(serde::de::Error::custom)
    }
}
