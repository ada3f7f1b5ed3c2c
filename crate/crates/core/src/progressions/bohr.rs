//! Bohr sets rewritten as convex coset progressions.
//!
//! Each Bohr element `x` has a lift `u(x) ∈ ℤ^Γ`, the vector of centered phase
//! numerators over the group exponent `N`. Elements of one kernel coset share
//! a lift. The lifts generate a lattice `Λ` whose echelon basis `w_1..w_r`
//! carries group elements `g_i` with `u(g_i) ≡ w_i (mod N)`. With `m` the
//! numerator bound of the Bohr radius and `2m < N`, a lattice point in
//! `[−m, m]^Γ` is exactly the lift of a Bohr element, so
//!
//! `Bohr(Γ, δ) = H + φ({v ∈ ℤ^r : |Σ_i v_i w_i[γ]| ≤ m for all γ})`
//!
//! with `φ(e_i) = g_i` and `H` the common kernel.

use std::collections::BTreeSet;

use serde::Serialize;

use super::body::{ConvexBody, ConvexCosetProgression, ConvexProgression, Slab};
use super::ruzsa::embed_idx;
use crate::character::max_numerator_within;
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::gset::GSet;
use crate::spectral::{annihilator, bohr_set, BohrSpec, CharSet, BOHR_TOLERANCE};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisCheck {
    pub d_claim: usize,
    pub delta: f64,
    /// `1 / (4(3d + 1))`; `delta` must lie strictly below it.
    pub delta_limit: f64,
    pub small_bohr_size: usize,
    /// `|Bohr(Γ, (3d + 1)δ)|`.
    pub large_bohr_size: usize,
    pub holds: bool,
}

/// Checks `δ < 1/(4(3d+1))` and `|Bohr(Γ, (3d+1)δ)| < 2^d |Bohr(Γ, δ)|` exactly.
pub fn check_bohr_hypothesis(gamma_set: &CharSet, delta: f64, d: usize) -> Result<HypothesisCheck> {
    let small = bohr_set(&BohrSpec::new(gamma_set.clone(), delta)?);
    let factor = (3 * d + 1) as f64;
    let delta_limit = 1.0 / (4.0 * factor);
    let large_delta = (factor * delta).min(2.0);
    let large = bohr_set(&BohrSpec::new(gamma_set.clone(), large_delta)?);
    let size_ok = d < 64 && (large.len() as u128) < (small.len() as u128) << d;
    Ok(HypothesisCheck {
        d_claim: d,
        delta,
        delta_limit,
        small_bohr_size: small.len(),
        large_bohr_size: large.len(),
        holds: delta < delta_limit && size_ok,
    })
}

/// Smallest `d ≤ d_max` for which the hypothesis holds.
pub fn smallest_hypothesis_dimension(
    gamma_set: &CharSet,
    delta: f64,
    d_max: usize,
) -> Result<Option<HypothesisCheck>> {
    for d in 1..=d_max {
        let h = check_bohr_hypothesis(gamma_set, delta, d)?;
        if h.holds {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EqualityCertificate {
    pub bohr_size: usize,
    pub progression_size: usize,
    pub symmetric_difference: usize,
    pub kernel_size: usize,
    pub dimension: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BohrProgression {
    pub progression: ConvexCosetProgression,
    pub certificate: EqualityCertificate,
    pub hypothesis: Option<HypothesisCheck>,
}

/// Verifies the hypothesis for `d_claim`, then converts.
pub fn bohr_to_progression(
    gamma_set: &CharSet,
    delta: f64,
    d_claim: usize,
) -> Result<BohrProgression> {
    let hyp = check_bohr_hypothesis(gamma_set, delta, d_claim)?;
    if !hyp.holds {
        return Err(Error::HypothesisFails(format!(
            "d = {d_claim}: delta {delta} vs limit {}, |Bohr(({})delta)| = {} vs 2^d |Bohr(delta)| = {}·{}",
            hyp.delta_limit,
            3 * d_claim + 1,
            hyp.large_bohr_size,
            1u128.checked_shl(d_claim as u32).unwrap_or(0),
            hyp.small_bohr_size
        )));
    }
    let mut out = bohr_as_progression(gamma_set, delta)?;
    out.hypothesis = Some(hyp);
    Ok(out)
}

/// Converts without checking any hypothesis; the equality certificate is
/// still enforced.
pub fn bohr_as_progression(gamma_set: &CharSet, delta: f64) -> Result<BohrProgression> {
    let spec = BohrSpec::new(gamma_set.clone(), delta)?;
    let g = gamma_set.group();
    let bohr = bohr_set(&spec);
    let n = g.exponent();
    let m = max_numerator_within(n, delta, BOHR_TOLERANCE);

    let progression = if 2 * m >= n {
        // Every phase is within reach: the Bohr set is all of G.
        ConvexCosetProgression::subgroup_only(GSet::full(g))?
    } else {
        let kernel = annihilator(gamma_set);
        let lattice = LiftLattice::from_set(g, gamma_set, &bohr)?;
        lattice.into_progression(g, kernel, m as i64)?
    };

    let produced = progression.materialize()?;
    let diff = produced.symmetric_difference_len(&bohr)?;
    let certificate = EqualityCertificate {
        bohr_size: bohr.len(),
        progression_size: produced.len(),
        symmetric_difference: diff,
        kernel_size: progression.coset_subgroup().len(),
        dimension: progression.dim(),
        equal: diff == 0,
    };
    if !certificate.equal {
        return Err(Error::EqualityCertificateFails(format!(
            "progression has {} elements, Bohr set {}, {} differ",
            certificate.progression_size, certificate.bohr_size, diff
        )));
    }
    Ok(BohrProgression {
        progression,
        certificate,
        hypothesis: None,
    })
}

/// Echelon basis of the lattice generated by lifts, each row paired with a
/// group element whose lift is congruent to it.
struct LiftLattice {
    width: usize,
    rows: Vec<(Vec<i128>, usize)>,
    lifts: Vec<Vec<i64>>,
}

fn ck(v: Option<i128>) -> Result<i128> {
    v.ok_or(Error::Overflow("lattice basis"))
}

impl LiftLattice {
    fn from_set(g: &GroupSpec, gamma_set: &CharSet, set: &GSet) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut lifts: Vec<(Vec<i64>, usize)> = Vec::new();
        for x in set.indices() {
            let u = embed_idx(g, gamma_set, x);
            if seen.insert(u.clone()) {
                lifts.push((u, x));
            }
        }
        lifts.sort_by_key(|(u, _)| u.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0));
        let mut lattice = LiftLattice {
            width: gamma_set.len(),
            rows: Vec::new(),
            lifts: Vec::new(),
        };
        for (u, x) in lifts {
            lattice.insert(g, u.iter().map(|&c| c as i128).collect(), x)?;
            lattice.lifts.push(u);
        }
        lattice.reduce(g)?;
        Ok(lattice)
    }

    fn pivot(row: &[i128]) -> Option<usize> {
        row.iter().position(|&c| c != 0)
    }

    fn combine(g: &GroupSpec, a: i128, x: usize, b: i128, y: usize) -> usize {
        let n = g.exponent() as i128;
        g.add_idx(
            g.scale_idx(x, a.rem_euclid(n) as i64),
            g.scale_idx(y, b.rem_euclid(n) as i64),
        )
    }

    fn insert(&mut self, g: &GroupSpec, mut v: Vec<i128>, mut x: usize) -> Result<()> {
        let mut i = 0;
        loop {
            let Some(p) = Self::pivot(&v) else {
                return Ok(());
            };
            while i < self.rows.len() && Self::pivot(&self.rows[i].0).unwrap() < p {
                i += 1;
            }
            if i == self.rows.len() || Self::pivot(&self.rows[i].0).unwrap() > p {
                if v[p] < 0 {
                    for c in v.iter_mut() {
                        *c = -*c;
                    }
                    x = g.neg_idx(x);
                }
                self.rows.insert(i, (v, x));
                return Ok(());
            }
            // Same pivot: unimodular row operation leaving gcd in the basis row.
            let (row, y) = self.rows[i].clone();
            let (r, s) = (row[p], v[p]);
            let e = num_integer::Integer::extended_gcd(&r, &s);
            let (d, a, b) = (e.gcd, e.x, e.y);
            let (rd, sd) = (r / d, s / d);
            let mut new_row = vec![0i128; self.width];
            let mut new_v = vec![0i128; self.width];
            for c in 0..self.width {
                new_row[c] = ck(ck(a.checked_mul(row[c]))?.checked_add(ck(b.checked_mul(v[c]))?))?;
                new_v[c] = ck(ck(rd.checked_mul(v[c]))?.checked_sub(ck(sd.checked_mul(row[c]))?))?;
            }
            let new_y = Self::combine(g, a, y, b, x);
            x = Self::combine(g, rd, x, -sd, y);
            if new_row[p] < 0 {
                for c in new_row.iter_mut() {
                    *c = -*c;
                }
                self.rows[i] = (new_row, g.neg_idx(new_y));
            } else {
                self.rows[i] = (new_row, new_y);
            }
            v = new_v;
        }
    }

    /// Reduces entries above each pivot into `[0, pivot)`.
    fn reduce(&mut self, g: &GroupSpec) -> Result<()> {
        for i in 0..self.rows.len() {
            let p = Self::pivot(&self.rows[i].0).unwrap();
            let (piv_row, piv_x) = self.rows[i].clone();
            for j in 0..i {
                let q = self.rows[j].0[p].div_euclid(piv_row[p]);
                if q == 0 {
                    continue;
                }
                for (entry, &p) in self.rows[j].0.iter_mut().zip(&piv_row) {
                    *entry = ck(entry.checked_sub(ck(q.checked_mul(p))?))?;
                }
                self.rows[j].1 = Self::combine(g, 1, self.rows[j].1, -q, piv_x);
            }
        }
        Ok(())
    }

    /// Coordinates of a lattice vector in the basis.
    fn coordinates(&self, u: &[i64]) -> Result<Vec<i128>> {
        let mut residual: Vec<i128> = u.iter().map(|&c| c as i128).collect();
        let mut coords = Vec::with_capacity(self.rows.len());
        for (row, _) in &self.rows {
            let p = Self::pivot(row).unwrap();
            let q = residual[p] / row[p];
            debug_assert_eq!(residual[p] % row[p], 0);
            for c in 0..self.width {
                residual[c] = ck(residual[c].checked_sub(ck(q.checked_mul(row[c]))?))?;
            }
            coords.push(q);
        }
        debug_assert!(residual.iter().all(|&c| c == 0));
        Ok(coords)
    }

    fn into_progression(
        self,
        g: &GroupSpec,
        kernel: GSet,
        bound: i64,
    ) -> Result<ConvexCosetProgression> {
        let r = self.rows.len();
        let mut radius = 0i128;
        for u in &self.lifts {
            for c in self.coordinates(u)? {
                radius = radius.max(c.abs());
            }
        }
        let radius =
            i64::try_from(radius + 1).map_err(|_| Error::Overflow("enumeration radius"))?;
        let mut slabs = Vec::new();
        for col in 0..self.width {
            let normal = self
                .rows
                .iter()
                .map(|(row, _)| {
                    i64::try_from(row[col])
                        .map(Rational::from_integer)
                        .map_err(|_| Error::Overflow("slab normal"))
                })
                .collect::<Result<Vec<_>>>()?;
            if normal.iter().all(|c| *c == Rational::from_integer(0)) {
                continue;
            }
            slabs.push(Slab {
                normal,
                bound: Rational::from_integer(bound),
            });
        }
        let body = ConvexBody::new(r, slabs, radius)?;
        let phi = self.rows.iter().map(|(_, x)| g.element_at(*x)).collect();
        ConvexCosetProgression::new(kernel, g.zero(), ConvexProgression::new(g, body, phi)?)
    }
}
