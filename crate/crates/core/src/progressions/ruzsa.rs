//! The embedding `x ↦ ((1/2π) arg γ(x))_{γ ∈ Γ}` into `(−1/2, 1/2]^Γ`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::group::{GroupElement, GroupSpec};
use crate::gset::GSet;
use crate::spectral::CharSet;
use crate::Rational;

/// Exact coordinates, one per character of `gamma_set` in dual-index order.
pub fn ruzsa_embed_exact(gamma_set: &CharSet, x: &GroupElement) -> Result<Vec<Rational>> {
    let g = gamma_set.group();
    let xi = g.index_of(x)?;
    Ok(embed_idx(g, gamma_set, xi)
        .into_iter()
        .map(|p| Rational::new(p, g.exponent() as i64))
        .collect())
}

pub fn ruzsa_embed(gamma_set: &CharSet, x: &GroupElement) -> Result<Vec<f64>> {
    let g = gamma_set.group();
    let e = g.exponent() as f64;
    let xi = g.index_of(x)?;
    Ok(embed_idx(g, gamma_set, xi)
        .into_iter()
        .map(|p| p as f64 / e)
        .collect())
}

/// Centered numerators over the group exponent.
pub(crate) fn embed_idx(g: &GroupSpec, gamma_set: &CharSet, x: usize) -> Vec<i64> {
    gamma_set
        .indices()
        .map(|t| g.centered_pairing_idx(t, x))
        .collect()
}

/// The embedding restricted to a set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RuzsaImage {
    pub gamma_set: CharSet,
    #[serde(serialize_with = "serialize_vectors")]
    pub vectors: BTreeMap<usize, Vec<Rational>>,
}

fn serialize_vectors<S: serde::Serializer>(
    v: &BTreeMap<usize, Vec<Rational>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(
        v.iter()
            .map(|(k, row)| (k, row.iter().map(|r| r.to_string()).collect::<Vec<_>>())),
    )
}

impl RuzsaImage {
    pub fn new(gamma_set: &CharSet, set: &GSet) -> Result<Self> {
        set.same_group(&GSet::empty(gamma_set.group()))?;
        let g = gamma_set.group();
        let e = g.exponent() as i64;
        let vectors = set
            .indices()
            .map(|x| {
                let row = embed_idx(g, gamma_set, x)
                    .into_iter()
                    .map(|p| Rational::new(p, e))
                    .collect();
                (x, row)
            })
            .collect();
        Ok(RuzsaImage {
            gamma_set: gamma_set.clone(),
            vectors,
        })
    }

    pub fn get(&self, x: &GroupElement) -> Result<Option<&Vec<Rational>>> {
        Ok(self.vectors.get(&self.gamma_set.group().index_of(x)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phases_in_half_open_interval() {
        let g = GroupSpec::cyclic(8).unwrap();
        let gamma = CharSet::parse(&g, "{1}").unwrap();
        let at = |x: i64| ruzsa_embed_exact(&gamma, &g.element(&[x]).unwrap()).unwrap();
        assert_eq!(at(0), vec![Rational::from_integer(0)]);
        assert_eq!(at(1), vec![Rational::new(1, 8)]);
        assert_eq!(at(5), vec![Rational::new(-3, 8)]);
        assert_eq!(at(4), vec![Rational::new(1, 2)]);
        let f = ruzsa_embed(&gamma, &g.element(&[5]).unwrap()).unwrap();
        assert_eq!(f, vec![-0.375]);
    }

    #[test]
    fn image_covers_set() {
        let g = GroupSpec::new(vec![2, 6]).unwrap();
        let gamma = CharSet::parse(&g, "{(1,0),(0,1)}").unwrap();
        let a = GSet::parse(&g, "{(1,1),(0,3)}").unwrap();
        let img = RuzsaImage::new(&gamma, &a).unwrap();
        let v = img.get(&g.element(&[1, 1]).unwrap()).unwrap().unwrap();
        // Dual-index order puts the (0,1)-character first: 1/6, then 3/6.
        assert_eq!(v, &vec![Rational::new(1, 6), Rational::new(1, 2)]);
        for row in img.vectors.values() {
            assert!(row
                .iter()
                .all(|r| *r > Rational::new(-1, 2) && *r <= Rational::new(1, 2)));
        }
    }
}
