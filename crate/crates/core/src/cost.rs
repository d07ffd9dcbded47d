//! Extended nonnegative costs: a finite real or an explicit infinity.
//!
//! Unreachable pairs carry `Infinite`, never a sentinel float, so that the
//! finite/infinite distinction survives every computation and file round trip
//! exactly. On disk `Infinite` is the string `"inf"`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A value in `[0, +inf]` (audited tables may also hold out-of-contract
/// finite values such as negatives, which the audit then reports).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedCost {
    Finite(f64),
    Infinite,
}

pub use ExtendedCost::{Finite, Infinite};

impl ExtendedCost {
    pub const ZERO: ExtendedCost = Finite(0.0);

    /// Maps `+inf` to `Infinite`; `None` for NaN and `-inf`.
    pub fn from_f64(v: f64) -> Option<Self> {
        if v.is_nan() || v == f64::NEG_INFINITY {
            None
        } else if v == f64::INFINITY {
            Some(Infinite)
        } else {
            Some(Finite(v))
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Infinite)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Finite(v) => Some(v),
            Infinite => None,
        }
    }

    /// `Infinite` becomes `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    /// Replace `Infinite` by `cap`; finite values pass through.
    pub fn capped(self, cap: f64) -> f64 {
        self.finite().unwrap_or(cap)
    }

    pub fn min(self, other: Self) -> Self {
        ext_min(self, other)
    }
}

/// Tropical multiplication: accumulate cost, `Infinite` absorbs.
pub fn ext_add(a: ExtendedCost, b: ExtendedCost) -> ExtendedCost {
    match (a, b) {
        (Finite(x), Finite(y)) => Finite(x + y),
        _ => Infinite,
    }
}

/// Tropical addition: keep the cheaper alternative, `Infinite` is the top.
pub fn ext_min(a: ExtendedCost, b: ExtendedCost) -> ExtendedCost {
    match (a, b) {
        (Finite(x), Finite(y)) => Finite(if y < x { y } else { x }),
        (Finite(x), Infinite) | (Infinite, Finite(x)) => Finite(x),
        (Infinite, Infinite) => Infinite,
    }
}

impl Add for ExtendedCost {
    type Output = ExtendedCost;

    fn add(self, rhs: Self) -> Self {
        ext_add(self, rhs)
    }
}

impl Add<f64> for ExtendedCost {
    type Output = ExtendedCost;

    fn add(self, rhs: f64) -> Self {
        ext_add(self, Finite(rhs))
    }
}

impl PartialOrd for ExtendedCost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Finite(a), Finite(b)) => a.partial_cmp(b),
            (Finite(_), Infinite) => Some(Ordering::Less),
            (Infinite, Finite(_)) => Some(Ordering::Greater),
            (Infinite, Infinite) => Some(Ordering::Equal),
        }
    }
}

impl From<f64> for ExtendedCost {
    fn from(v: f64) -> Self {
        Finite(v)
    }
}

impl fmt::Display for ExtendedCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finite(v) => write!(f, "{v}"),
            Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtendedCost {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Finite(v) => serializer.serialize_f64(*v),
            Infinite => serializer.serialize_str("inf"),
        }
    }
}

struct CostVisitor;

impl Visitor<'_> for CostVisitor {
    type Value = ExtendedCost;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a number or the string \"inf\"")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
        Ok(Finite(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
        Ok(Finite(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
        Ok(Finite(v as f64))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
        if v == "inf" {
            Ok(Infinite)
        } else {
            Err(E::invalid_value(de::Unexpected::Str(v), &self))
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedCost {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(CostVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn add_examples() {
        assert_eq!(Finite(1.0) + Finite(2.0), Finite(3.0));
        assert_eq!(Finite(5.0) + Infinite, Infinite);
        assert_eq!(Finite(0.0) + Finite(0.0), Finite(0.0));
    }

    #[test]
    fn min_examples() {
        assert_eq!(ext_min(Finite(3.0), Finite(4.0)), Finite(3.0));
        assert_eq!(ext_min(Infinite, Finite(7.0)), Finite(7.0));
        assert_eq!(ext_min(Infinite, Infinite), Infinite);
    }

    #[test]
    fn ordering_puts_infinite_on_top() {
        assert!(Finite(1e300) < Infinite);
        assert!(Finite(0.0) < Finite(0.5));
        assert_eq!(Infinite.partial_cmp(&Infinite), Some(Ordering::Equal));
    }

    #[test]
    fn json_form() {
        let v = vec![Finite(1.5), Infinite, Finite(0.0)];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"[1.5,"inf",0.0]"#);
        let back: Vec<ExtendedCost> = serde_json::from_str("[1.5, \"inf\", 0]").unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<ExtendedCost>("\"infinity\"").is_err());
    }

    #[test]
    fn from_f64_rejects_nan() {
        assert_eq!(ExtendedCost::from_f64(f64::NAN), None);
        assert_eq!(ExtendedCost::from_f64(f64::INFINITY), Some(Infinite));
        assert_eq!(ExtendedCost::from_f64(2.0), Some(Finite(2.0)));
    }

    // Dyadic values keep every sum exact, so the laws can be asserted bitwise.
    fn arb_cost() -> impl Strategy<Value = ExtendedCost> {
        prop_oneof![
            9 => (0u32..4096).prop_map(|k| Finite(k as f64 / 16.0)),
            1 => Just(Infinite),
        ]
    }

    proptest! {
        #[test]
        fn add_is_commutative_and_associative(a in arb_cost(), b in arb_cost(), c in arb_cost()) {
            prop_assert_eq!(a + b, b + a);
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!(a + ExtendedCost::ZERO, a);
        }

        #[test]
        fn add_distributes_over_min(a in arb_cost(), b in arb_cost(), c in arb_cost()) {
            prop_assert_eq!(ext_min(a + c, b + c), ext_min(a, b) + c);
        }

        #[test]
        fn min_is_a_lattice_meet(a in arb_cost(), b in arb_cost()) {
            let m = ext_min(a, b);
            prop_assert!(m <= a && m <= b);
            prop_assert!(m == a || m == b);
            prop_assert_eq!(ext_min(a, Infinite), a);
        }
    }
}
