//! Serde adapters writing exact numbers as decimal strings (`"3/10"`, `"19683"`).

use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(q: &BigRational, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&q.to_string())
}

pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigRational, D::Error> {
    let s = String::deserialize(de)?;
    BigRational::from_str(&s).map_err(D::Error::custom)
}

pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Option<BigRational>, ser: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => ser.serialize_some(&q.to_string()),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<BigRational>, D::Error> {
        Option::<String>::deserialize(de)?
            .map(|s| BigRational::from_str(&s).map_err(D::Error::custom))
            .transpose()
    }
}

pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[BigRational], ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&q.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<String>::deserialize(de)?
            .iter()
            .map(|s| BigRational::from_str(s).map_err(D::Error::custom))
            .collect()
    }
}

pub mod biguint {
    use super::*;

    pub fn serialize<S: Serializer>(n: &BigUint, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(de)?;
        BigUint::from_str(&s).map_err(D::Error::custom)
    }
}
