//! Relative polynomial growth and progression doubling.

use serde::Serialize;

use super::body::ConvexCosetProgression;
use crate::error::{Error, Result};
use crate::gset::GSet;
use crate::setops::{growth_profile, sumset, GrowthProfile};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthOrder {
    /// Smallest `d ≥ 0` with `|nX| ≤ n^d |X|` for every `2 ≤ n ≤ n_max`.
    pub order: f64,
    /// The `n` attaining the maximum.
    pub worst_n: usize,
    pub profile: GrowthProfile,
}

pub fn growth_order(x: &GSet, n_max: usize) -> Result<GrowthOrder> {
    if x.is_empty() {
        return Err(Error::EmptySet);
    }
    if n_max < 2 {
        return Err(Error::InvalidArgument(
            "growth order needs n_max ≥ 2".into(),
        ));
    }
    let profile = growth_profile(x, n_max)?;
    let base = x.len() as f64;
    let (mut order, mut worst_n) = (0.0f64, 2);
    for n in 2..=n_max {
        let d = (profile.size(n) as f64 / base).ln() / (n as f64).ln();
        if d > order {
            order = d;
            worst_n = n;
        }
    }
    Ok(GrowthOrder {
        order,
        worst_n,
        profile,
    })
}

/// `|M + M| / |M|` for the materialized coset progression.
pub fn doubling_of_progression(m: &ConvexCosetProgression) -> Result<Rational> {
    let set = m.materialize()?;
    let doubled = sumset(&set, &set)?;
    Ok(Rational::new(doubled.len() as i64, set.len() as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;
    use crate::progressions::{ConvexBody, ConvexProgression};

    #[test]
    fn subgroup_has_order_zero() {
        let g = GroupSpec::cyclic(24).unwrap();
        let h = GSet::parse(&g, "{0,6,12,18}").unwrap();
        let r = growth_order(&h, 6).unwrap();
        assert_eq!(r.order, 0.0);
        assert!(growth_order(&GSet::empty(&g), 4).is_err());
        assert!(growth_order(&h, 1).is_err());
    }

    #[test]
    fn interval_and_grid() {
        let g = GroupSpec::cyclic(10_000).unwrap();
        let x = GSet::parse(&g, "{-3,-2,-1,0,1,2,3}").unwrap();
        let r = growth_order(&x, 8).unwrap();
        assert!(r.order <= 1.0 && r.order > 0.5, "{r:?}");

        let g = GroupSpec::new(vec![200, 200]).unwrap();
        let grid = GSet::from_coords(
            &g,
            &(-1..=1)
                .flat_map(|a| (-1..=1).map(move |b| vec![a, b]))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let r = growth_order(&grid, 8).unwrap();
        assert!(r.order > 1.0 && r.order <= 2.0, "{r:?}");
    }

    #[test]
    fn interval_doubling() {
        let g = GroupSpec::cyclic(1000).unwrap();
        for n in 1..6 {
            let body = ConvexBody::cube(1, n, n + 1).unwrap();
            let p = ConvexProgression::new(&g, body, vec![g.element(&[1]).unwrap()]).unwrap();
            let m = ConvexCosetProgression::new(GSet::singleton_zero(&g), g.zero(), p).unwrap();
            assert_eq!(
                doubling_of_progression(&m).unwrap(),
                Rational::new(4 * n + 1, 2 * n + 1)
            );
        }
        let h = GSet::parse(&g, "{0,500}").unwrap();
        let m = ConvexCosetProgression::subgroup_only(h).unwrap();
        assert_eq!(
            doubling_of_progression(&m).unwrap(),
            Rational::from_integer(1)
        );
    }
}
