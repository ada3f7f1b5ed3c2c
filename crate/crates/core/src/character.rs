//! Characters of a finite abelian group and their exact phases.
//!
//! The character with dual coordinates `t` sends `x` to
//! `exp(2πi Σ t_i x_i / n_i)`. Phases are kept as exact fractions of a turn
//! with denominator the group exponent; complex values are produced only
//! on request.

use num_complex::Complex;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Float, FloatConst};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    dual_coords: Vec<u64>,
}

impl Character {
    pub fn new(g: &GroupSpec, dual_coords: &[i64]) -> Result<Self> {
        let e = g.element(dual_coords)?;
        Ok(Character {
            dual_coords: e.coords().to_vec(),
        })
    }

    pub fn trivial(g: &GroupSpec) -> Self {
        Character {
            dual_coords: vec![0; g.rank()],
        }
    }

    /// The character whose dual coordinates equal the coordinates of `x`.
    pub fn from_dual_element(x: &GroupElement) -> Self {
        Character {
            dual_coords: x.coords().to_vec(),
        }
    }

    pub(crate) fn from_dual_index(g: &GroupSpec, t: usize) -> Self {
        Self::from_dual_element(&g.element_at(t))
    }

    pub fn dual_coords(&self) -> &[u64] {
        &self.dual_coords
    }

    pub fn dual_index(&self, g: &GroupSpec) -> Result<usize> {
        g.index_of(&self.as_dual_element())
    }

    fn as_dual_element(&self) -> GroupElement {
        GroupElement::from_coords_unchecked(self.dual_coords.clone())
    }

    /// Exact phase of `self(x)` as a fraction of a full turn in `[0, 1)`.
    pub fn phase(&self, g: &GroupSpec, x: &GroupElement) -> Result<Phase> {
        let t = self.dual_index(g)?;
        let xi = g.index_of(x)?;
        Ok(Phase::new(g.pairing_idx(t, xi), g.exponent()))
    }
}

/// A fraction of a turn, reduced, in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase {
    num: u64,
    den: u64,
}

impl Phase {
    pub fn new(num: u64, den: u64) -> Self {
        let num = num % den;
        let g = num.gcd(&den);
        Phase {
            num: num / g,
            den: den / g,
        }
    }

    pub fn turns(&self) -> Ratio<i64> {
        Ratio::new(self.num as i64, self.den as i64)
    }

    /// The same phase represented in `(-1/2, 1/2]`.
    pub fn centered(&self) -> Ratio<i64> {
        let (n, d) = (self.num as i64, self.den as i64);
        if 2 * n > d {
            Ratio::new(n - d, d)
        } else {
            Ratio::new(n, d)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// `exp(2πi·phase)`, evaluated once from the centered exact phase.
    pub fn to_complex<T: Float + FloatConst>(&self) -> Complex<T> {
        let c = self.centered();
        let angle = T::TAU() * T::from(*c.numer()).unwrap() / T::from(*c.denom()).unwrap();
        Complex::from_polar(T::one(), angle)
    }

    /// `|exp(2πi·phase) − 1| = 2|sin(π·phase)|`.
    pub fn distance_from_one<T: Float + FloatConst>(&self) -> T {
        let c = self.centered();
        let x = T::PI() * T::from(*c.numer()).unwrap() / T::from(*c.denom()).unwrap();
        (T::one() + T::one()) * x.sin().abs()
    }
}

/// `γ(x)` as a complex unit.
pub fn char_value<T: Float + FloatConst>(
    g: &GroupSpec,
    gamma: &Character,
    x: &GroupElement,
) -> Result<Complex<T>> {
    if gamma.dual_coords.len() != g.rank() {
        return Err(Error::mismatch(g, format!("{:?}", gamma.dual_coords)));
    }
    Ok(gamma.phase(g, x)?.to_complex())
}

/// Largest `m ≥ 0` such that `2 sin(π m / den) ≤ delta + tol`, capped at `den / 2`.
/// Phases with centered numerator `|p| ≤ m` are exactly the ones within
/// distance `delta` of 1.
pub(crate) fn max_numerator_within(den: u64, delta: f64, tol: f64) -> u64 {
    let ok = |m: u64| 2.0 * (std::f64::consts::PI * m as f64 / den as f64).sin() <= delta + tol;
    let half = den / 2;
    if delta + tol >= 2.0 {
        return half;
    }
    let guess = (den as f64 * (delta / 2.0).clamp(0.0, 1.0).asin() / std::f64::consts::PI)
        .floor()
        .clamp(0.0, half as f64) as u64;
    let mut m = guess;
    while m < half && ok(m + 1) {
        m += 1;
    }
    while m > 0 && !ok(m) {
        m -= 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex<f64>, b: Complex<f64>) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn trivial_character_is_one() {
        let g = GroupSpec::new(vec![3, 4]).unwrap();
        let t = Character::trivial(&g);
        for x in g.enumerate_elements().unwrap() {
            assert!(close(
                char_value(&g, &t, &x).unwrap(),
                Complex::new(1.0, 0.0)
            ));
        }
    }

    #[test]
    fn half_turn_and_eighth_turn() {
        let z4 = GroupSpec::cyclic(4).unwrap();
        let v: Complex<f64> = char_value(
            &z4,
            &Character::new(&z4, &[1]).unwrap(),
            &z4.element(&[2]).unwrap(),
        )
        .unwrap();
        assert!(close(v, Complex::new(-1.0, 0.0)));

        let z8 = GroupSpec::cyclic(8).unwrap();
        let v: Complex<f64> = char_value(
            &z8,
            &Character::new(&z8, &[1]).unwrap(),
            &z8.element(&[1]).unwrap(),
        )
        .unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(v, Complex::new(s, s)));
    }

    #[test]
    fn mismatched_character_errors() {
        let g = GroupSpec::new(vec![2, 3]).unwrap();
        let z5 = GroupSpec::cyclic(5).unwrap();
        let gamma = Character::trivial(&g);
        assert!(char_value::<f64>(&z5, &gamma, &z5.zero()).is_err());
    }

    #[test]
    fn phases_are_exact() {
        let g = GroupSpec::new(vec![4, 6]).unwrap();
        let gamma = Character::new(&g, &[1, 1]).unwrap();
        let p = gamma.phase(&g, &g.element(&[1, 2]).unwrap()).unwrap();
        // 1/4 + 2/6 = 7/12
        assert_eq!(p.turns(), Ratio::new(7, 12));
        assert_eq!(p.centered(), Ratio::new(-5, 12));
    }

    #[test]
    fn numerator_threshold_matches_sine() {
        for den in [5u64, 12, 101, 1000] {
            for delta in [0.01, 0.1, 0.5176, 0.52, 1.0, 1.9, 2.0] {
                let m = max_numerator_within(den, delta, 1e-12);
                for p in 0..=den / 2 {
                    let d = 2.0 * (std::f64::consts::PI * p as f64 / den as f64).sin();
                    assert_eq!(p <= m, d <= delta + 1e-12, "den={den} delta={delta} p={p}");
                }
            }
        }
    }
}
