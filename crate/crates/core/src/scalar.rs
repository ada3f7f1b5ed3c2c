//! Scalar abstractions shared by density maps, spectra and norms.
//!
//! Density maps are generic over [`Scalar`]: exact integers for counting
//! convolutions, rationals for exact normalised measures, and `f32`/`f64`
//! for analytic work. FFT-backed operations additionally need [`FftScalar`].

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// How values of a scalar type behave under the FFT convolution path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarKind {
    /// Exact integers; FFT results are rounded and verified.
    Integer,
    /// Exact rationals; never routed through floating point.
    Rational,
    /// Floating point.
    Float,
}

pub trait Scalar:
    Num + Copy + PartialOrd + Debug + ToPrimitive + FromPrimitive + Send + Sync + 'static
{
    const KIND: ScalarKind;

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar")
    }
}

impl Scalar for i64 {
    const KIND: ScalarKind = ScalarKind::Integer;
}

impl Scalar for i128 {
    const KIND: ScalarKind = ScalarKind::Integer;
}

impl Scalar for f32 {
    const KIND: ScalarKind = ScalarKind::Float;
}

impl Scalar for f64 {
    const KIND: ScalarKind = ScalarKind::Float;
}

impl Scalar for Ratio<i64> {
    const KIND: ScalarKind = ScalarKind::Rational;
}

/// Floating scalars usable with the multidimensional FFT.
pub trait FftScalar: Scalar + Float + FloatConst + rustfft::FftNum {
    /// Slack added to floating certificates computed in this precision.
    fn certificate_slack() -> Self {
        let eps = <Self as Float>::epsilon() * Self::from_count(64);
        let floor = Self::from_f64(1e-9).unwrap();
        if eps > floor {
            eps
        } else {
            floor
        }
    }
}

impl FftScalar for f32 {}
impl FftScalar for f64 {}
