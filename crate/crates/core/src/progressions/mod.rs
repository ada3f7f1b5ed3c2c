//! Convex progressions, convex coset progressions and polynomial growth.

mod body;
mod bohr;
mod growth;
mod ruzsa;

pub use body::{
    enumerate_progression, ConvexBody, ConvexCosetProgression, ConvexProgression, Number,
    ProgressionLiteral, Slab, SlabLiteral,
};
pub use bohr::{
    bohr_as_progression, bohr_to_progression, check_bohr_hypothesis, smallest_hypothesis_dimension,
    BohrProgression, EqualityCertificate, HypothesisCheck,
};
pub use growth::{doubling_of_progression, growth_order, GrowthOrder};
pub use ruzsa::{ruzsa_embed, ruzsa_embed_exact, RuzsaImage};
