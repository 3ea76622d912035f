//! Extended nonnegative reals `[0, ∞]`.
//!
//! All measure values and function values live here. Arithmetic follows the
//! conventions of idempotent analysis: `0 × ∞ = 0` and `∞ − ∞ = 0`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default comparison tolerance for values produced by `×`, `/` or powers.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9

/// Current process-wide comparison tolerance.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(AtomicOrdering::Relaxed))
}

/// Overrides the comparison tolerance (the CLI `--tolerance` flag).
pub fn set_tolerance(tol: f64) {
    assert!(tol >= 0.0 && tol.is_finite(), "tolerance must be finite and >= 0");
    TOLERANCE_BITS.store(tol.to_bits(), AtomicOrdering::Relaxed);
}

/// A value of `[0, ∞]`. Never NaN, never negative.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct ExtReal(f64);

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).expect("ExtReal is never NaN")
    }
}

impl std::hash::Hash for ExtReal {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal(0.0);
    pub const ONE: ExtReal = ExtReal(1.0);
    pub const INFINITY: ExtReal = ExtReal(f64::INFINITY);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 0.0 || value == f64::NEG_INFINITY {
            return Err(Error::InvalidValue(value));
        }
        // normalise -0.0
        Ok(ExtReal(if value == 0.0 { 0.0 } else { value }))
    }

    /// Literal constructor; panics on invalid input.
    pub fn of(value: f64) -> Self {
        Self::new(value).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Clamps negative numbers (rounding noise) to zero. NaN maps to zero.
    pub fn clamped(value: f64) -> Self {
        if value.is_nan() || value <= 0.0 {
            ExtReal::ZERO
        } else {
            ExtReal(value)
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0.0
    }

    #[inline]
    pub fn is_infinite(self) -> bool {
        self.0 == f64::INFINITY
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// Ordinary sum; `s + ∞ = ∞`.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Self) -> Self {
        ExtReal(self.0 + other.0)
    }

    /// Product with `0 × ∞ = 0`.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            ExtReal::ZERO
        } else {
            ExtReal(self.0 * other.0)
        }
    }

    /// Truncated difference `0 ⊕ (self − other)` with `∞ − ∞ = 0`.
    pub fn monus(self, other: Self) -> Self {
        if self.is_infinite() && other.is_infinite() {
            ExtReal::ZERO
        } else {
            ExtReal::clamped(self.0 - other.0)
        }
    }

    pub fn powf(self, p: f64) -> Self {
        if self.is_zero() {
            return if p > 0.0 { ExtReal::ZERO } else { ExtReal::ONE };
        }
        ExtReal::clamped(self.0.powf(p))
    }

    /// Distance `|self − other|`, infinite as soon as exactly one side is.
    pub fn abs_diff(self, other: Self) -> Self {
        if self == other {
            ExtReal::ZERO
        } else {
            ExtReal((self.0 - other.0).abs())
        }
    }

    /// Tolerance comparison: exact on equal bits and on `∞`, otherwise
    /// `|a − b| ≤ tol · max(1, |a|, |b|)`.
    pub fn approx_eq_tol(self, other: Self, tol: f64) -> bool {
        if self == other {
            return true;
        }
        if self.is_infinite() || other.is_infinite() {
            return false;
        }
        (self.0 - other.0).abs() <= tol * 1f64.max(self.0).max(other.0)
    }

    pub fn approx_eq(self, other: Self) -> bool {
        self.approx_eq_tol(other, tolerance())
    }

    /// `self ≤ other` up to the current tolerance.
    pub fn approx_le(self, other: Self) -> bool {
        self <= other || self.approx_eq(other)
    }
}

impl From<u32> for ExtReal {
    fn from(v: u32) -> Self {
        ExtReal(v as f64)
    }
}

impl TryFrom<f64> for ExtReal {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        ExtReal::new(v)
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExtVisitor;

        impl Visitor<'_> for ExtVisitor {
            type Value = ExtReal;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a nonnegative number or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<ExtReal, E> {
                ExtReal::new(v).map_err(E::custom)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtReal, E> {
                Ok(ExtReal(v as f64))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtReal, E> {
                ExtReal::new(v as f64).map_err(E::custom)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtReal, E> {
                if v == "inf" {
                    Ok(ExtReal::INFINITY)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        deserializer.deserialize_any(ExtVisitor)
    }
}

/// Signed extended-real difference used by the Choquet Δ operators, with the
/// convention `∞ − ∞ = −∞ + ∞ = 0`.
pub(crate) fn signed_sub(a: f64, b: f64) -> f64 {
    if a.is_infinite() && b.is_infinite() && a.signum() == b.signum() {
        0.0
    } else {
        a - b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conventions() {
        assert_eq!(ExtReal::ZERO.mul(ExtReal::INFINITY), ExtReal::ZERO);
        assert_eq!(ExtReal::INFINITY.monus(ExtReal::INFINITY), ExtReal::ZERO);
        assert_eq!(ExtReal::of(3.0).monus(ExtReal::of(5.0)), ExtReal::ZERO);
        assert_eq!(ExtReal::of(3.0).add(ExtReal::INFINITY), ExtReal::INFINITY);
        assert_eq!(signed_sub(f64::INFINITY, f64::INFINITY), 0.0);
    }

    #[test]
    fn rejects_invalid() {
        assert!(ExtReal::new(-1.0).is_err());
        assert!(ExtReal::new(f64::NAN).is_err());
        assert_eq!(ExtReal::new(-0.0).unwrap().get().to_bits(), 0f64.to_bits());
    }

    #[test]
    fn serde_infinity_is_string() {
        let v = vec![ExtReal::of(1.5), ExtReal::INFINITY, ExtReal::ZERO];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"[1.5,"inf",0.0]"#);
        let back: Vec<ExtReal> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<ExtReal>("-2").is_err());
        assert!(serde_json::from_str::<ExtReal>("\"Infinity\"").is_err());
    }

    #[test]
    fn order_is_total() {
        let mut v = vec![ExtReal::INFINITY, ExtReal::of(2.0), ExtReal::ZERO];
        v.sort();
        assert_eq!(v, vec![ExtReal::ZERO, ExtReal::of(2.0), ExtReal::INFINITY]);
    }

    proptest::proptest! {
        #[test]
        fn serde_roundtrip(x in 0.0f64..1e300, inf in proptest::bool::ANY) {
            let v = if inf { ExtReal::INFINITY } else { ExtReal::of(x) };
            let back: ExtReal = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
            proptest::prop_assert_eq!(back.get().to_bits(), v.get().to_bits());
        }
    }
}
