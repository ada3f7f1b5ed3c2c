//! Fourier analysis: transforms, large spectra and Bohr sets.

use std::io::{self, Write};

use num_complex::Complex;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::character::{max_numerator_within, Character};
use crate::density::DensityMap;
use crate::error::{Error, Result};
use crate::fft::dft_in_place;
use crate::group::{GroupElement, GroupSpec};
use crate::gset::GSet;
use crate::progressions::{growth_order, GrowthOrder};
use crate::scalar::FftScalar;
use crate::setops::{difference_set, iterated_sumset};
use crate::Rational;

/// Groups up to this order may use the direct character-sum transform.
pub const NAIVE_TRANSFORM_CAP: usize = 4096;

/// Tolerance for large-spectrum membership, resolved toward inclusion.
pub const LSPEC_TOLERANCE: f64 = 1e-9;
/// Tolerance for Bohr-set membership, resolved toward inclusion.
pub const BOHR_TOLERANCE: f64 = 1e-12;

/// `f̂(γ) = Σ_x f(x) conj(γ(x))`, indexed by dual coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<T> {
    group: GroupSpec,
    coeffs: Vec<Complex<T>>,
}

impl<T: FftScalar> Spectrum<T> {
    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn at(&self, gamma: &Character) -> Result<Complex<T>> {
        Ok(self.coeffs[gamma.dual_index(&self.group)?])
    }

    /// `Σ_γ |f̂(γ)|²`.
    pub fn total_power(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }

    /// One row per character: dual coordinates, real part, imaginary part, `|·|²`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let rank = self.group.rank();
        let header: Vec<String> = (0..rank)
            .map(|i| format!("t{i}"))
            .chain(["re", "im", "abs2"].map(String::from))
            .collect();
        writeln!(w, "{}", header.join(","))?;
        for (t, c) in self.coeffs.iter().enumerate() {
            let e = self.group.element_at(t);
            let coords: Vec<String> = e.coords().iter().map(u64::to_string).collect();
            writeln!(
                w,
                "{},{},{},{}",
                coords.join(","),
                c.re.to_f64().unwrap(),
                c.im.to_f64().unwrap(),
                c.norm_sqr().to_f64().unwrap()
            )?;
        }
        Ok(())
    }
}

/// Fourier transform by multidimensional FFT.
pub fn fourier<T: FftScalar>(f: &DensityMap<T>) -> Spectrum<T> {
    let g = f.group();
    let mut data: Vec<Complex<T>> = f
        .values()
        .iter()
        .map(|&v| Complex::new(v, T::zero()))
        .collect();
    dft_in_place(g, &mut data, false);
    Spectrum {
        group: g.clone(),
        coeffs: data,
    }
}

/// Fourier transform by direct character sums with exact phases.
pub fn fourier_naive<T: FftScalar>(f: &DensityMap<T>) -> Result<Spectrum<T>> {
    let g = f.group();
    if g.size() > NAIVE_TRANSFORM_CAP {
        return Err(Error::CapExceeded {
            size: g.size() as u128,
            cap: NAIVE_TRANSFORM_CAP,
        });
    }
    let e = g.exponent();
    let coeffs = (0..g.size())
        .map(|t| {
            f.values().iter().enumerate().fold(
                Complex::new(T::zero(), T::zero()),
                |acc, (x, &v)| {
                    let phase = crate::character::Phase::new(g.pairing_idx(t, x), e);
                    acc + phase.to_complex::<T>().conj() * v
                },
            )
        })
        .collect();
    Ok(Spectrum {
        group: g.clone(),
        coeffs,
    })
}

/// `f(x) = |G|⁻¹ Σ_γ f̂(γ) γ(x)`; returns the real part.
pub fn inverse_fourier<T: FftScalar>(s: &Spectrum<T>) -> DensityMap<T> {
    let g = &s.group;
    let mut data = s.coeffs.clone();
    dft_in_place(g, &mut data, true);
    let n = T::from_count(g.size());
    DensityMap::from_values(g, data.into_iter().map(|c| c.re / n).collect())
        .expect("length matches group")
}

/// A set of characters, stored by dual index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CharSet {
    members: GSet,
}

impl CharSet {
    pub fn empty(g: &GroupSpec) -> Self {
        CharSet {
            members: GSet::empty(g),
        }
    }

    /// The full dual group.
    pub fn full(g: &GroupSpec) -> Self {
        CharSet {
            members: GSet::full(g),
        }
    }

    pub fn from_characters(g: &GroupSpec, chars: &[Character]) -> Result<Self> {
        let idx = chars
            .iter()
            .map(|c| c.dual_index(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(CharSet {
            members: GSet::from_indices(g, idx),
        })
    }

    /// Same literal syntax as sets, read as dual coordinates.
    pub fn parse(g: &GroupSpec, literal: &str) -> Result<Self> {
        Ok(CharSet {
            members: GSet::parse(g, literal)?,
        })
    }

    pub fn from_dual_set(members: GSet) -> Self {
        CharSet { members }
    }

    pub fn as_dual_set(&self) -> &GSet {
        &self.members
    }

    pub fn group(&self) -> &GroupSpec {
        self.members.group()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.indices()
    }

    /// Characters in dual-index order.
    pub fn characters(&self) -> Vec<Character> {
        self.members
            .indices()
            .map(|t| Character::from_dual_index(self.group(), t))
            .collect()
    }

    pub fn contains(&self, gamma: &Character) -> Result<bool> {
        Ok(self.members.contains_idx(gamma.dual_index(self.group())?))
    }

    /// Closed under `γ ↦ conj(γ)`.
    pub fn is_conjugation_closed(&self) -> bool {
        self.members.is_symmetric()
    }

    pub fn is_subset(&self, other: &CharSet) -> Result<bool> {
        self.members.is_subset(&other.members)
    }
}

impl std::fmt::Display for CharSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Display::fmt(&self.members, f)
    }
}

/// Kernel of `Γ` in `G`: `{x : γ(x) = 1 for all γ ∈ Γ}`.
pub fn annihilator(gamma: &CharSet) -> GSet {
    let g = gamma.group();
    let chars: Vec<usize> = gamma.indices().collect();
    GSet::from_indices(
        g,
        (0..g.size()).filter(|&x| chars.iter().all(|&t| g.pairing_idx(t, x) == 0)),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BohrSpec {
    pub gamma_set: CharSet,
    pub delta: f64,
}

impl BohrSpec {
    pub fn new(gamma_set: CharSet, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 2.0) {
            return Err(Error::BadDelta(delta));
        }
        Ok(BohrSpec { gamma_set, delta })
    }
}

/// `Bohr(Γ, δ) = {x : |γ(x) − 1| ≤ δ for all γ ∈ Γ}`.
pub fn bohr_set(spec: &BohrSpec) -> GSet {
    let g = spec.gamma_set.group();
    let bound = max_numerator_within(g.exponent(), spec.delta, BOHR_TOLERANCE) as i64;
    let chars: Vec<usize> = spec.gamma_set.indices().collect();
    GSet::from_indices(
        g,
        (0..g.size()).filter(|&x| {
            chars
                .iter()
                .all(|&t| g.centered_pairing_idx(t, x).abs() <= bound)
        }),
    )
}

/// `‖1 − γ‖²` in `L²(μ_A ∗ μ_{−A})` for every character, via the closed form
/// `2(1 − |1̂_A(γ)|² / |A|²)`. Entries for `γ` and `conj(γ)` are identical.
pub fn lspec_distances_sq(a: &GSet) -> Result<Vec<f64>> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let g = a.group();
    let spec = fourier(&DensityMap::<f64>::indicator(a));
    let n2 = (a.len() as f64).powi(2);
    Ok((0..g.size())
        .map(|t| {
            let canon = t.min(g.neg_idx(t));
            let v = spec.coeffs[canon].norm_sqr() / n2;
            (2.0 * (1.0 - v)).max(0.0)
        })
        .collect())
}

/// `LSpec(A, ε) = {γ : ‖1 − γ‖_{L²(μ_A ∗ μ_{−A})} ≤ ε}`.
pub fn large_spectrum(a: &GSet, eps: f64) -> Result<CharSet> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::BadEps(eps));
    }
    let dist = lspec_distances_sq(a)?;
    let target = eps * eps + LSPEC_TOLERANCE;
    Ok(CharSet {
        members: GSet::from_indices(
            a.group(),
            dist.iter()
                .enumerate()
                .filter(|(_, &d)| d <= target)
                .map(|(t, _)| t),
        ),
    })
}

/// Outcome of the containment `X − X ⊆ Bohr(LSpec(lX, ε), 2ε√(2K))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertifiedCheck {
    pub passed: bool,
    pub l: usize,
    pub eps: f64,
    #[serde(with = "crate::serde_util::ratio")]
    pub k: Rational,
    pub radius: f64,
    pub lspec_size: usize,
    pub bohr_size: usize,
    pub difference_set_size: usize,
    pub violation: Option<GroupElement>,
}

/// Computes `K = |lX| / |(l−1)X|` and checks `X − X ⊆ Bohr(LSpec(lX, ε), 2ε√(2K))`
/// element by element.
pub fn check_bohr_containment(x: &GSet, l: usize, eps: f64) -> Result<CertifiedCheck> {
    if x.is_empty() {
        return Err(Error::EmptySet);
    }
    if l == 0 {
        return Err(Error::InvalidArgument("l must be positive".into()));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::BadEps(eps));
    }
    let lx = iterated_sumset(x, l)?;
    let prev = if l == 1 {
        1
    } else {
        iterated_sumset(x, l - 1)?.len()
    };
    let k = Rational::new(lx.len() as i64, prev as i64);
    let radius = 2.0 * eps * (2.0 * k.to_f64().unwrap()).sqrt();
    let gamma = large_spectrum(&lx, eps)?;
    let bohr = bohr_set(&BohrSpec::new(gamma.clone(), radius.min(2.0))?);
    let diff = difference_set(x, x)?;
    let violation = diff.first_outside(&bohr)?.map(|i| x.group().element_at(i));
    Ok(CertifiedCheck {
        passed: violation.is_none(),
        l,
        eps,
        k,
        radius,
        lspec_size: gamma.len(),
        bohr_size: bohr.len(),
        difference_set_size: diff.len(),
        violation,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BohrSizeMeasurement {
    pub eps: f64,
    pub x_size: usize,
    pub lspec_size: usize,
    pub bohr_size: usize,
    /// `|Bohr(LSpec(X, ε), 1/2π)| / |X|`.
    pub ratio: f64,
    pub growth: GrowthOrder,
}

/// Measures `|Bohr(LSpec(X, ε), 1/2π)| / |X|` next to the growth order of `X`.
pub fn measure_bohr_size(x: &GSet, eps: f64, n_max: usize) -> Result<BohrSizeMeasurement> {
    let gamma = large_spectrum(x, eps)?;
    let bohr = bohr_set(&BohrSpec::new(gamma.clone(), 1.0 / std::f64::consts::TAU)?);
    let growth = growth_order(x, n_max)?;
    Ok(BohrSizeMeasurement {
        eps,
        x_size: x.len(),
        lspec_size: gamma.len(),
        bohr_size: bohr.len(),
        ratio: bohr.len() as f64 / x.len() as f64,
        growth,
    })
}

/// Largest `|f̂(γ)|` over `γ` outside `exclude`, useful for Fourier-uniformity reports.
pub fn max_coefficient_outside<T: FftScalar>(s: &Spectrum<T>, exclude: &CharSet) -> T {
    s.coeffs
        .iter()
        .enumerate()
        .filter(|(t, _)| !exclude.as_dual_set().contains_idx(*t))
        .fold(T::zero(), |acc, (_, c)| acc.max(c.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subgroup::subgroup_generated;

    fn z(n: u64) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    #[test]
    fn transform_of_point_mass_and_constant() {
        let g = GroupSpec::new(vec![3, 4]).unwrap();
        let d: DensityMap<f64> = DensityMap::delta(&g, &g.zero()).unwrap();
        for c in fourier(&d).coeffs() {
            assert!((c - Complex::new(1.0, 0.0)).norm() < 1e-12);
        }
        let one: DensityMap<f64> = DensityMap::indicator(&GSet::full(&g));
        let s = fourier(&one);
        assert!((s.coeffs()[0].re - 12.0).abs() < 1e-12);
        for c in &s.coeffs()[1..] {
            assert!(c.norm() < 1e-12);
        }
    }

    #[test]
    fn transform_of_order_two_subgroup() {
        // 1_{0,2} in Z4: f̂(t) = 1 + (−1)^t.
        let g = z(4);
        let f: DensityMap<f64> = DensityMap::indicator(&GSet::parse(&g, "{0,2}").unwrap());
        let s = fourier(&f);
        let expect = [2.0, 0.0, 2.0, 0.0];
        for (c, e) in s.coeffs().iter().zip(expect) {
            assert!((c - Complex::new(e, 0.0)).norm() < 1e-12);
        }
        let back = inverse_fourier(&s);
        for (a, b) in back.values().iter().zip(f.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn naive_and_fast_agree_in_single_precision() {
        let g = GroupSpec::new(vec![2, 9]).unwrap();
        let vals: Vec<f32> = (0..g.size()).map(|i| (i % 5) as f32).collect();
        let f = DensityMap::from_values(&g, vals).unwrap();
        let a = fourier(&f);
        let b = fourier_naive(&f).unwrap();
        for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
            assert!((x - y).norm() < 1e-3);
        }
        let big: DensityMap<f64> = DensityMap::zeros(&z(5000));
        assert!(matches!(
            fourier_naive(&big),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn bohr_examples() {
        let g = z(12);
        let empty = BohrSpec::new(CharSet::empty(&g), 0.3).unwrap();
        assert_eq!(bohr_set(&empty).len(), 12);
        // Smallest non-zero |γ(x) − 1| in Z12 is 2 sin(π/12) ≈ 0.5176.
        let full = BohrSpec::new(CharSet::full(&g), 0.5).unwrap();
        assert_eq!(bohr_set(&full).to_string(), "{0}");
        let one = BohrSpec::new(CharSet::parse(&g, "{1}").unwrap(), 0.52).unwrap();
        assert_eq!(bohr_set(&one).to_string(), "{0,1,11}");
        assert!(BohrSpec::new(CharSet::empty(&g), 0.0).is_err());
        assert!(BohrSpec::new(CharSet::empty(&g), 2.5).is_err());
        assert!(BohrSpec::new(CharSet::empty(&g), 2.0).is_ok());
    }

    #[test]
    fn annihilator_of_subgroup_characters() {
        let g = z(12);
        let gamma = CharSet::parse(&g, "{4}").unwrap();
        assert_eq!(annihilator(&gamma).to_string(), "{0,3,6,9}");
        assert_eq!(annihilator(&CharSet::empty(&g)).len(), 12);
    }

    #[test]
    fn large_spectrum_examples() {
        let g = z(4);
        // 1̂_A(1) = 1 − i, so 2(1 − 2/4) = 1 ≤ 1.
        let a = GSet::parse(&g, "{0,1}").unwrap();
        let ls = large_spectrum(&a, 1.0).unwrap();
        assert!(ls.as_dual_set().contains_idx(1));
        assert!(ls.as_dual_set().contains_idx(0));
        assert!(ls.is_conjugation_closed());
        assert!(!large_spectrum(&a, 0.5)
            .unwrap()
            .as_dual_set()
            .contains_idx(1));

        let g = z(12);
        let h = subgroup_generated(&GSet::parse(&g, "{4}").unwrap());
        for eps in [0.01, 0.3, 1.0] {
            let ls = large_spectrum(&h, eps).unwrap();
            for t in 0..12 {
                if (0..12)
                    .filter(|x| h.contains_idx(*x))
                    .all(|x| g.pairing_idx(t, x) == 0)
                {
                    assert!(ls.as_dual_set().contains_idx(t));
                }
            }
        }
        assert_eq!(large_spectrum(&GSet::empty(&g), 0.5), Err(Error::EmptySet));
        assert!(matches!(large_spectrum(&h, 0.0), Err(Error::BadEps(_))));
    }

    #[test]
    fn containment_examples() {
        let g = z(8);
        let h = GSet::parse(&g, "{0,4}").unwrap();
        for l in 1..4 {
            assert!(check_bohr_containment(&h, l, 0.3).unwrap().passed);
        }
        let g = z(101);
        let x = GSet::parse(&g, "{0,1,2}").unwrap();
        let c = check_bohr_containment(&x, 2, 0.5).unwrap();
        assert!(c.passed, "{c:?}");
        assert_eq!(c.k, Rational::new(5, 3));
    }

    #[test]
    fn bohr_size_measurements() {
        let g = z(24);
        let h = subgroup_generated(&GSet::parse(&g, "{6}").unwrap());
        let m = measure_bohr_size(&h, 0.5, 4).unwrap();
        assert!(m.ratio >= 1.0);
        let m = measure_bohr_size(&GSet::singleton_zero(&g), 0.5, 4).unwrap();
        assert_eq!(m.x_size, 1);
        assert_eq!(m.ratio, m.bohr_size as f64);
    }

    #[test]
    fn spectrum_csv_rows() {
        let g = GroupSpec::new(vec![2, 2]).unwrap();
        let f: DensityMap<f64> = DensityMap::indicator(&GSet::parse(&g, "{(0,0)}").unwrap());
        let mut buf = Vec::new();
        fourier(&f).write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t0,t1,re,im,abs2");
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[4], "1,1,1,0,1");
    }
}
