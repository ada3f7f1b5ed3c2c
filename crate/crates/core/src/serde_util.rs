//! Serde adapters.

/// Serializes a `Ratio<i64>` as the string `"p/q"` (or `"p"` when integral).
pub mod ratio {
    use num_rational::Ratio;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }
}

/// A list of `Ratio<i64>` as strings.
pub mod ratio_vec {
    use num_rational::Ratio;
    use serde::{ser::SerializeSeq, Serializer};

    pub fn serialize<S: Serializer>(v: &[Ratio<i64>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&r.to_string())?;
        }
        seq.end()
    }
}

/// Any `Display` value as a string.
pub mod display {
    use serde::Serializer;

    pub fn serialize<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }
}
