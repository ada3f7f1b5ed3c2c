//! Symmetric slab bodies and their images in the group.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, DEFAULT_ENUMERATION_CAP};
use crate::gset::GSet;
use crate::setops::translate_idx;
use crate::subgroup::is_coset;
use crate::Rational;

/// `|⟨normal, v⟩| ≤ bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Slab {
    #[serde(with = "crate::serde_util::ratio_vec")]
    pub normal: Vec<Rational>,
    #[serde(with = "crate::serde_util::ratio")]
    pub bound: Rational,
}

/// Intersection of symmetric slabs, `Q = {v ∈ ℝ^d : |⟨a_i, v⟩| ≤ c_i}`, with the
/// radius of the integer box searched during enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexBody {
    dim: usize,
    slabs: Vec<Slab>,
    radius: i64,
}

impl ConvexBody {
    pub fn new(dim: usize, slabs: Vec<Slab>, radius: i64) -> Result<Self> {
        if radius < 0 {
            return Err(Error::InvalidArgument(format!("negative radius {radius}")));
        }
        for s in &slabs {
            if s.normal.len() != dim {
                return Err(Error::InvalidArgument(format!(
                    "slab normal of length {} in dimension {dim}",
                    s.normal.len()
                )));
            }
            if s.bound < Rational::zero() {
                return Err(Error::InvalidArgument(format!(
                    "negative slab bound {}",
                    s.bound
                )));
            }
        }
        let rank = normal_rank(&slabs, dim);
        if rank < dim {
            return Err(Error::UnboundedBody { rank, dim });
        }
        Ok(ConvexBody { dim, slabs, radius })
    }

    /// The box `[−c, c]^d`.
    pub fn cube(dim: usize, half_width: i64, radius: i64) -> Result<Self> {
        let slabs = (0..dim)
            .map(|i| Slab {
                normal: (0..dim)
                    .map(|j| Rational::from_integer((i == j) as i64))
                    .collect(),
                bound: Rational::from_integer(half_width),
            })
            .collect();
        Self::new(dim, slabs, radius)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn slabs(&self) -> &[Slab] {
        &self.slabs
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.slabs.iter().all(|s| {
            let dot = s
                .normal
                .iter()
                .zip(v)
                .fold(Rational::zero(), |acc, (a, &x)| acc + a * x);
            dot.abs() <= s.bound
        })
    }

    /// Slabs rescaled to integer normals and bounds.
    fn integer_slabs(&self) -> Result<Vec<(Vec<i128>, i128)>> {
        self.slabs
            .iter()
            .map(|s| {
                let l = s
                    .normal
                    .iter()
                    .fold(*s.bound.denom(), |acc, r| acc.lcm(r.denom()));
                let scale = |r: &Rational| -> Result<i128> {
                    (*r.numer() as i128)
                        .checked_mul((l / r.denom()) as i128)
                        .ok_or(Error::Overflow("slab scaling"))
                };
                Ok((
                    s.normal.iter().map(scale).collect::<Result<Vec<_>>>()?,
                    scale(&s.bound)?,
                ))
            })
            .collect()
    }
}

fn normal_rank(slabs: &[Slab], dim: usize) -> usize {
    let mut rows: Vec<Vec<BigRational>> = slabs
        .iter()
        .map(|s| {
            s.normal
                .iter()
                .map(|r| BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())))
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..dim {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] / &pivot[col];
            for (entry, p) in row.iter_mut().zip(&pivot).skip(col) {
                *entry -= &f * p;
            }
        }
        rank += 1;
    }
    rank
}

/// `φ(Q ∩ ℤ^d)` where `φ` sends the `i`-th basis vector to `phi_images[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexProgression {
    #[serde(skip)]
    group: GroupSpec,
    body: ConvexBody,
    phi_images: Vec<GroupElement>,
}

impl ConvexProgression {
    pub fn new(g: &GroupSpec, body: ConvexBody, phi_images: Vec<GroupElement>) -> Result<Self> {
        if phi_images.len() != body.dim {
            return Err(Error::InvalidArgument(format!(
                "{} generator images for a {}-dimensional body",
                phi_images.len(),
                body.dim
            )));
        }
        for x in &phi_images {
            g.check(x)?;
        }
        Ok(ConvexProgression {
            group: g.clone(),
            body,
            phi_images,
        })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn body(&self) -> &ConvexBody {
        &self.body
    }

    pub fn phi_images(&self) -> &[GroupElement] {
        &self.phi_images
    }

    pub fn dim(&self) -> usize {
        self.body.dim
    }

    /// `φ(v)`.
    pub fn image_of(&self, v: &[i64]) -> GroupElement {
        let g = &self.group;
        g.element_at(self.image_idx(v))
    }

    fn image_idx(&self, v: &[i64]) -> usize {
        let g = &self.group;
        self.phi_images.iter().zip(v).fold(0, |acc, (x, &c)| {
            g.add_idx(acc, g.scale_idx(g.index_of_unchecked(x), c))
        })
    }
}

/// Integer points of `[−R, R]^d` inside the body, mapped through `φ`.
///
/// Errors with `TruncationSuspected` if a kept point has `‖v‖_∞ = R`.
pub fn enumerate_progression(p: &ConvexProgression) -> Result<GSet> {
    let g = &p.group;
    let d = p.body.dim;
    let r = p.body.radius;
    if d == 0 {
        return Ok(GSet::singleton_zero(g));
    }
    let side = 2 * r as u128 + 1;
    if side
        .checked_pow(d as u32)
        .is_none_or(|t| t > DEFAULT_ENUMERATION_CAP as u128)
    {
        return Err(Error::CapExceeded {
            size: side.saturating_pow(d as u32),
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }
    let slabs = p.body.integer_slabs()?;
    let images: Vec<usize> = p
        .phi_images
        .iter()
        .map(|x| g.index_of_unchecked(x))
        .collect();

    let slices: Vec<(FixedBitSet, Option<Vec<i64>>)> = (-r..=r)
        .into_par_iter()
        .map(|first| {
            let mut bits = FixedBitSet::with_capacity(g.size());
            let mut shell_hit = None;
            let mut v = vec![-r; d];
            v[0] = first;
            loop {
                let inside = slabs.iter().all(|(a, c)| {
                    let dot: i128 = a.iter().zip(&v).map(|(x, &y)| x * y as i128).sum();
                    dot.abs() <= *c
                });
                if inside {
                    if shell_hit.is_none() && v.iter().any(|c| c.abs() == r) {
                        shell_hit = Some(v.clone());
                    }
                    let idx = images
                        .iter()
                        .zip(&v)
                        .fold(0, |acc, (&x, &c)| g.add_idx(acc, g.scale_idx(x, c)));
                    bits.insert(idx);
                }
                // Odometer over coordinates 1..d.
                let mut axis = d;
                loop {
                    if axis == 1 {
                        return (bits, shell_hit);
                    }
                    axis -= 1;
                    if v[axis] < r {
                        v[axis] += 1;
                        break;
                    }
                    v[axis] = -r;
                }
            }
        })
        .collect();

    let mut out = FixedBitSet::with_capacity(g.size());
    for (bits, hit) in slices {
        if let Some(point) = hit {
            return Err(Error::TruncationSuspected { point, radius: r });
        }
        out.union_with(&bits);
    }
    Ok(GSet::from_bits(g, out))
}

/// `t + H + P` for a subgroup `H` and convex progression `P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexCosetProgression {
    coset_subgroup: GSet,
    coset_translate: GroupElement,
    progression: ConvexProgression,
}

impl ConvexCosetProgression {
    pub fn new(
        coset_subgroup: GSet,
        coset_translate: GroupElement,
        progression: ConvexProgression,
    ) -> Result<Self> {
        let g = progression.group();
        coset_subgroup.same_group(&GSet::empty(g))?;
        g.check(&coset_translate)?;
        let is_subgroup = coset_subgroup.contains_idx(0)
            && is_coset(&coset_subgroup).is_some_and(|w| w.subgroup == coset_subgroup);
        if !is_subgroup {
            return Err(Error::InvalidArgument(format!(
                "{coset_subgroup} is not a subgroup"
            )));
        }
        Ok(ConvexCosetProgression {
            coset_subgroup,
            coset_translate,
            progression,
        })
    }

    /// `H` alone, with a zero-dimensional body.
    pub fn subgroup_only(h: GSet) -> Result<Self> {
        let g = h.group().clone();
        let body = ConvexBody::new(0, Vec::new(), 0)?;
        Self::new(h, g.zero(), ConvexProgression::new(&g, body, Vec::new())?)
    }

    pub fn coset_subgroup(&self) -> &GSet {
        &self.coset_subgroup
    }

    pub fn coset_translate(&self) -> &GroupElement {
        &self.coset_translate
    }

    pub fn progression(&self) -> &ConvexProgression {
        &self.progression
    }

    pub fn dim(&self) -> usize {
        self.progression.dim()
    }

    pub fn group(&self) -> &GroupSpec {
        self.progression.group()
    }

    /// The set `t + H + P`.
    pub fn materialize(&self) -> Result<GSet> {
        let p = enumerate_progression(&self.progression)?;
        let hp = crate::setops::sumset(&self.coset_subgroup, &p)?;
        let g = self.group();
        Ok(translate_idx(
            &hp,
            g.index_of_unchecked(&self.coset_translate),
        ))
    }

    pub fn to_literal(&self) -> ProgressionLiteral {
        let body = &self.progression.body;
        ProgressionLiteral {
            dim: body.dim,
            slabs: body
                .slabs
                .iter()
                .map(|s| SlabLiteral {
                    a: s.normal.iter().map(Number::from).collect(),
                    c: Number::Text(s.bound.to_string()),
                })
                .collect(),
            radius: body.radius,
            phi: self
                .progression
                .phi_images
                .iter()
                .map(|x| x.coords().iter().map(|&c| c as i64).collect())
                .collect(),
            subgroup: self.coset_subgroup.to_string(),
            translate: self
                .coset_translate
                .coords()
                .iter()
                .map(|&c| c as i64)
                .collect(),
        }
    }

    pub fn from_literal(g: &GroupSpec, lit: &ProgressionLiteral) -> Result<Self> {
        let slabs = lit
            .slabs
            .iter()
            .map(|s| {
                Ok(Slab {
                    normal: s.a.iter().map(Number::to_rational).collect::<Result<_>>()?,
                    bound: s.c.to_rational()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let body = ConvexBody::new(lit.dim, slabs, lit.radius)?;
        let phi = lit
            .phi
            .iter()
            .map(|c| g.element(c))
            .collect::<Result<Vec<_>>>()?;
        let h = GSet::parse(g, &lit.subgroup)?;
        let t = if lit.translate.is_empty() {
            g.zero()
        } else {
            g.element(&lit.translate)?
        };
        Self::new(h, t, ConvexProgression::new(g, body, phi)?)
    }
}

/// A rational written either as a JSON integer or as a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            Number::Int(n) => Ok(Rational::from_integer(*n)),
            Number::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad rational `{s}`"))),
        }
    }
}

impl From<&Rational> for Number {
    fn from(r: &Rational) -> Self {
        if r.is_integer() {
            Number::Int(*r.numer())
        } else {
            Number::Text(r.to_string())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlabLiteral {
    pub a: Vec<Number>,
    pub c: Number,
}

/// Serialized form:
/// `{"dim":1,"slabs":[{"a":[1],"c":"2"}],"radius":8,"phi":[[3]],"H":"{0}","translate":[0]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProgressionLiteral {
    pub dim: usize,
    pub slabs: Vec<SlabLiteral>,
    pub radius: i64,
    pub phi: Vec<Vec<i64>>,
    #[serde(rename = "H", default = "zero_subgroup")]
    pub subgroup: String,
    #[serde(default)]
    pub translate: Vec<i64>,
}

fn zero_subgroup() -> String {
    "{}".into()
}
