//! Serde for big integers: a JSON number when it fits in `i64`, a decimal
//! string otherwise.

use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Int;

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Small(i64),
    Big(String),
}

fn to_repr(n: &Int) -> Repr {
    n.to_i64().map_or_else(|| Repr::Big(n.to_string()), Repr::Small)
}

fn from_repr<E: serde::de::Error>(r: Repr) -> Result<Int, E> {
    match r {
        Repr::Small(n) => Ok(Int::from(n)),
        Repr::Big(s) => s.parse().map_err(|_| E::custom(format!("invalid integer {s:?}"))),
    }
}

pub fn serialize<S: Serializer>(n: &Int, s: S) -> Result<S::Ok, S::Error> {
    to_repr(n).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
    from_repr(Repr::deserialize(d)?)
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Int], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(to_repr).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Int>, D::Error> {
        Vec::<Repr>::deserialize(d)?.into_iter().map(from_repr).collect()
    }
}
