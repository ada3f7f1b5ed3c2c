//! Functions on a group: indicators, normalised measures and convolutions.

use num_complex::Complex;
use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fft::dft_in_place;
use crate::group::{GroupElement, GroupSpec};
use crate::gset::GSet;
use crate::scalar::{Scalar, ScalarKind};

/// A function `G → T`, indexed like the group elements.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityMap<T> {
    #[serde(skip)]
    group: GroupSpec,
    values: Vec<T>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ConvolutionMethod {
    /// Direct summation over supports or FFT, whichever is cheaper.
    #[default]
    Auto,
    /// Sum over pairs in the supports.
    Direct,
    /// FFT in `f64`; integer results are rounded and verified, with a
    /// fallback to direct summation when verification fails.
    Fft,
}

impl<T: Scalar> DensityMap<T> {
    pub fn zeros(g: &GroupSpec) -> Self {
        DensityMap {
            group: g.clone(),
            values: vec![T::zero(); g.size()],
        }
    }

    pub fn from_values(g: &GroupSpec, values: Vec<T>) -> Result<Self> {
        if values.len() != g.size() {
            return Err(Error::InvalidArgument(format!(
                "{} values for a group of order {}",
                values.len(),
                g.size()
            )));
        }
        Ok(DensityMap {
            group: g.clone(),
            values,
        })
    }

    /// `1_A`.
    pub fn indicator(a: &GSet) -> Self {
        let mut m = Self::zeros(a.group());
        for i in a.indices() {
            m.values[i] = T::one();
        }
        m
    }

    /// Point mass at `x`.
    pub fn delta(g: &GroupSpec, x: &GroupElement) -> Result<Self> {
        let mut m = Self::zeros(g);
        m.values[g.index_of(x)?] = T::one();
        Ok(m)
    }

    /// `μ_A = 1_A / |A|`. Needs a field-like scalar.
    pub fn uniform(a: &GSet) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::EmptySet);
        }
        if T::KIND == ScalarKind::Integer {
            return Err(Error::InvalidArgument(
                "normalised measures need a rational or floating scalar".into(),
            ));
        }
        let w = T::one() / T::from_count(a.len());
        let mut m = Self::zeros(a.group());
        for i in a.indices() {
            m.values[i] = w;
        }
        Ok(m)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn at(&self, x: &GroupElement) -> Result<T> {
        Ok(self.values[self.group.index_of(x)?])
    }

    pub fn sum(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, &v| acc + v)
    }

    pub fn support(&self) -> GSet {
        GSet::from_indices(
            &self.group,
            self.values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, _)| i),
        )
    }

    /// `x ↦ f(−x)`.
    pub fn reflect(&self) -> Self {
        let g = &self.group;
        let mut out = Self::zeros(g);
        for (i, &v) in self.values.iter().enumerate() {
            out.values[g.neg_idx(i)] = v;
        }
        out
    }

    /// `τ_x f (y) = f(y + x)`.
    pub fn translate(&self, x: &GroupElement) -> Result<Self> {
        Ok(self.translate_idx(self.group.index_of(x)?))
    }

    pub fn translate_idx(&self, x: usize) -> Self {
        let g = &self.group;
        let mut out = Self::zeros(g);
        for (y, v) in out.values.iter_mut().enumerate() {
            *v = self.values[g.add_idx(y, x)];
        }
        out
    }

    pub fn scaled(&self, c: T) -> Self {
        self.map(|v| v * c)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> DensityMap<U> {
        DensityMap {
            group: self.group.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Converts between scalar types; integers convert exactly.
    pub fn cast<U: Scalar>(&self) -> DensityMap<U> {
        self.map(|v| match T::KIND {
            ScalarKind::Integer => U::from_i128(v.to_i128().unwrap()).unwrap(),
            _ => U::from_f64(v.to_f64().unwrap()).unwrap(),
        })
    }

    pub fn inner(&self, other: &Self) -> Result<T> {
        self.same_group(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |acc, (&a, &b)| acc + a * b))
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(Error::mismatch(&self.group, &other.group))
        }
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        Ok(DensityMap {
            group: self.group.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a - b)
                .collect(),
        })
    }
}

impl<T: Scalar + Float> DensityMap<T> {
    /// `(Σ |f(x)|^p)^{1/p}`.
    pub fn lp_norm(&self, p: T) -> T {
        lp_norm(&self.values, p)
    }
}

pub(crate) fn lp_norm<T: Float>(values: &[T], p: T) -> T {
    let two = T::one() + T::one();
    if p == two {
        values.iter().fold(T::zero(), |acc, &v| acc + v * v).sqrt()
    } else {
        values
            .iter()
            .fold(T::zero(), |acc, &v| acc + v.abs().powf(p))
            .powf(p.recip())
    }
}

/// `f ∗ g (x) = Σ_{y+z=x} f(y) g(z)`.
pub fn convolve<T: Scalar>(f: &DensityMap<T>, g: &DensityMap<T>) -> Result<DensityMap<T>> {
    convolve_with(f, g, ConvolutionMethod::Auto)
}

pub fn convolve_with<T: Scalar>(
    f: &DensityMap<T>,
    g: &DensityMap<T>,
    method: ConvolutionMethod,
) -> Result<DensityMap<T>> {
    f.same_group(g)?;
    let fs: Vec<(usize, T)> = nonzero(f);
    let gs: Vec<(usize, T)> = nonzero(g);
    let use_fft = match (method, T::KIND) {
        (_, ScalarKind::Rational) => false,
        (ConvolutionMethod::Direct, _) => false,
        (ConvolutionMethod::Fft, _) => true,
        (ConvolutionMethod::Auto, _) => {
            let n = f.group.size() as f64;
            let direct = fs.len() as f64 * gs.len() as f64;
            direct > 6.0 * n * (n.log2() + 1.0) && f.group.size() > 64
        }
    };
    if use_fft {
        if let Some(out) = convolve_fft(f, g) {
            return Ok(out);
        }
    }
    Ok(convolve_direct(&f.group, &fs, &gs))
}

fn nonzero<T: Scalar>(f: &DensityMap<T>) -> Vec<(usize, T)> {
    f.values
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, &v)| (i, v))
        .collect()
}

fn convolve_direct<T: Scalar>(
    grp: &GroupSpec,
    fs: &[(usize, T)],
    gs: &[(usize, T)],
) -> DensityMap<T> {
    let mut out = DensityMap::zeros(grp);
    for &(y, a) in fs {
        for &(z, b) in gs {
            let x = grp.add_idx(y, z);
            out.values[x] = out.values[x] + a * b;
        }
    }
    out
}

/// FFT convolution. `None` when an integer result fails rounding verification.
fn convolve_fft<T: Scalar>(f: &DensityMap<T>, g: &DensityMap<T>) -> Option<DensityMap<T>> {
    let grp = &f.group;
    let lift = |m: &DensityMap<T>| -> Vec<Complex<f64>> {
        m.values
            .iter()
            .map(|v| Complex::new(v.to_f64().unwrap(), 0.0))
            .collect()
    };
    let mut a = lift(f);
    let mut b = lift(g);
    dft_in_place(grp, &mut a, false);
    dft_in_place(grp, &mut b, false);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    dft_in_place(grp, &mut a, true);
    let n = grp.size() as f64;
    let mut out = DensityMap::zeros(grp);
    match T::KIND {
        ScalarKind::Integer => {
            for (o, v) in out.values.iter_mut().zip(&a) {
                let re = v.re / n;
                let r = re.round();
                if (re - r).abs() >= 0.25 || !r.is_finite() {
                    return None;
                }
                *o = T::from_f64(r)?;
            }
            // Exact mass check: Σ(f∗g) = Σf · Σg.
            if out.sum() != f.sum() * g.sum() {
                return None;
            }
        }
        _ => {
            for (o, v) in out.values.iter_mut().zip(&a) {
                *o = T::from_f64(v.re / n)?;
            }
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;
    use num_traits::ToPrimitive;

    fn z(n: u64) -> GroupSpec {
        GroupSpec::cyclic(n).unwrap()
    }

    #[test]
    fn delta_is_identity() {
        let g = z(7);
        let d: DensityMap<i64> = DensityMap::delta(&g, &g.zero()).unwrap();
        assert_eq!(convolve(&d, &d).unwrap(), d);
    }

    #[test]
    fn small_counting_convolution() {
        let g = z(5);
        let a = GSet::parse(&g, "{0,1}").unwrap();
        let f: DensityMap<i64> = DensityMap::indicator(&a);
        for method in [ConvolutionMethod::Direct, ConvolutionMethod::Fft] {
            let c = convolve_with(&f, &f, method).unwrap();
            assert_eq!(c.values(), &[1, 2, 1, 0, 0]);
        }
    }

    #[test]
    fn subgroup_idempotence() {
        let g: GroupSpec = "Z4xZ6".parse().unwrap();
        let h = crate::subgroup::subgroup_generated(&GSet::parse(&g, "{(2,0),(0,3)}").unwrap());
        let f: DensityMap<i64> = DensityMap::indicator(&h);
        let c = convolve_with(&f, &f, ConvolutionMethod::Fft).unwrap();
        assert_eq!(c, f.scaled(h.len() as i64));
    }

    #[test]
    fn float_and_rational_paths_agree() {
        let g = GroupSpec::new(vec![6, 7]).unwrap();
        let vals: Vec<f64> = (0..g.size())
            .map(|i| ((i * 13) % 5) as f64 * 0.25)
            .collect();
        let f = DensityMap::from_values(&g, vals.clone()).unwrap();
        let h = f.reflect();
        let fast = convolve_with(&f, &h, ConvolutionMethod::Fft).unwrap();
        let slow = convolve_with(&f, &h, ConvolutionMethod::Direct).unwrap();
        for (a, b) in fast.values().iter().zip(slow.values()) {
            assert!((a - b).abs() < 1e-9);
        }
        let fr: DensityMap<Ratio<i64>> = f.cast();
        let exact = convolve(&fr, &fr.reflect()).unwrap();
        for (a, b) in exact.values().iter().zip(slow.values()) {
            assert!((a.to_f64().unwrap() - b).abs() < 1e-12);
        }
        assert!((fast.sum() - f.sum() * h.sum()).abs() < 1e-9);
    }

    #[test]
    fn uniform_measure() {
        let g = z(9);
        let a = GSet::parse(&g, "{0,3,4}").unwrap();
        let mu: DensityMap<Ratio<i64>> = DensityMap::uniform(&a).unwrap();
        assert_eq!(mu.sum(), Ratio::from_integer(1));
        let mu: DensityMap<f64> = DensityMap::uniform(&a).unwrap();
        assert!((mu.sum() - 1.0).abs() < 1e-12);
        assert!(DensityMap::<i64>::uniform(&a).is_err());
        assert!(DensityMap::<f64>::uniform(&GSet::empty(&g)).is_err());
    }

    #[test]
    fn translation_and_reflection() {
        let g = z(6);
        let f: DensityMap<i64> = DensityMap::from_values(&g, vec![1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(
            f.translate(&g.element(&[2]).unwrap()).unwrap().values(),
            &[3, 4, 5, 6, 1, 2]
        );
        assert_eq!(f.reflect().values(), &[1, 6, 5, 4, 3, 2]);
        let lp = f.cast::<f64>().lp_norm(2.0);
        assert!((lp - 91f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn mismatched_groups() {
        let f: DensityMap<i64> = DensityMap::zeros(&z(4));
        let g: DensityMap<i64> = DensityMap::zeros(&z(5));
        assert!(matches!(convolve(&f, &g), Err(Error::GroupMismatch { .. })));
    }
}
