//! Extended real numbers `[-inf, +inf]` with the Moreau lower and upper additions.
//!
//! Infinities are explicit variants, never IEEE infinities, so the two
//! additions are exact on every infinity pattern. The lower addition resolves
//! `(+inf) + (-inf)` to `-inf` and is the one used inside suprema; the upper
//! addition resolves it to `+inf` and is used inside infima.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Tolerance used for finite-vs-finite comparisons unless the caller overrides it.
pub const DEFAULT_TOL: f64 = 1e-9;

/// An element of `[-inf, +inf]`.
///
/// The finite payload is never NaN, never an IEEE infinity and never `-0.0`,
/// which makes the derived-by-hand `Eq`/`Ord` a genuine total order.
#[derive(Clone, Copy, Debug)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    /// Builds an extended real from a double. IEEE infinities map to the
    /// matching tag; NaN is rejected.
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() {
            Err(Error::NotANumber)
        } else {
            Ok(Self::from_f64_unchecked(value))
        }
    }

    /// Like [`ExtReal::new`] but panics on NaN. Intended for literals.
    pub fn finite(value: f64) -> Self {
        Self::new(value).expect("ExtReal::finite called with NaN")
    }

    fn from_f64_unchecked(value: f64) -> Self {
        if value == f64::INFINITY {
            ExtReal::PosInf
        } else if value == f64::NEG_INFINITY {
            ExtReal::NegInf
        } else if value == 0.0 {
            // folds -0.0 into +0.0
            ExtReal::Finite(0.0)
        } else {
            ExtReal::Finite(value)
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    /// The finite payload, if any.
    pub fn as_finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Converts to an IEEE double (infinities become `f64` infinities).
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::Finite(v) => v,
            ExtReal::PosInf => f64::INFINITY,
        }
    }

    /// Moreau lower addition: opposite infinities sum to `-inf`.
    pub fn low_add(self, other: ExtReal) -> ExtReal {
        use ExtReal::*;
        match (self, other) {
            (NegInf, _) | (_, NegInf) => NegInf,
            (PosInf, _) | (_, PosInf) => PosInf,
            (Finite(a), Finite(b)) => Self::from_f64_unchecked(a + b),
        }
    }

    /// Moreau upper addition: opposite infinities sum to `+inf`.
    pub fn upp_add(self, other: ExtReal) -> ExtReal {
        use ExtReal::*;
        match (self, other) {
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
            (Finite(a), Finite(b)) => Self::from_f64_unchecked(a + b),
        }
    }

    /// Infinities match only themselves; two finite values match when they
    /// differ by at most `tol`.
    pub fn approx_eq(self, other: ExtReal, tol: f64) -> bool {
        use ExtReal::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => true,
            (Finite(a), Finite(b)) => (a - b).abs() <= tol,
            _ => false,
        }
    }

    /// `self >= other`, with `tol` slack between finite values only.
    pub fn approx_ge(self, other: ExtReal, tol: f64) -> bool {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a >= b - tol,
            _ => self >= other,
        }
    }

    /// `self <= other`, with `tol` slack between finite values only.
    pub fn approx_le(self, other: ExtReal, tol: f64) -> bool {
        other.approx_ge(self, tol)
    }
}

/// Moreau lower addition (free-function form).
pub fn low_add(a: ExtReal, b: ExtReal) -> ExtReal {
    a.low_add(b)
}

/// Moreau upper addition (free-function form).
pub fn upp_add(a: ExtReal, b: ExtReal) -> ExtReal {
    a.upp_add(b)
}

pub fn neg(a: ExtReal) -> ExtReal {
    -a
}

pub fn approx_eq(a: ExtReal, b: ExtReal, tol: f64) -> bool {
    a.approx_eq(b, tol)
}

/// Maximum of a nonempty sequence.
pub fn sup_over<I: IntoIterator<Item = ExtReal>>(values: I) -> Result<ExtReal> {
    values.into_iter().max().ok_or(Error::EmptySequence)
}

/// Minimum of a nonempty sequence.
pub fn inf_over<I: IntoIterator<Item = ExtReal>>(values: I) -> Result<ExtReal> {
    values.into_iter().min().ok_or(Error::EmptySequence)
}

impl Neg for ExtReal {
    type Output = ExtReal;

    fn neg(self) -> ExtReal {
        match self {
            ExtReal::NegInf => ExtReal::PosInf,
            ExtReal::Finite(v) => ExtReal::from_f64_unchecked(-v),
            ExtReal::PosInf => ExtReal::NegInf,
        }
    }
}

impl From<i32> for ExtReal {
    fn from(v: i32) -> Self {
        ExtReal::Finite(f64::from(v))
    }
}

impl PartialEq for ExtReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtReal::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.total_cmp(b),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => f.pad("-inf"),
            ExtReal::PosInf => f.pad("inf"),
            ExtReal::Finite(v) => fmt::Display::fmt(v, f),
        }
    }
}

/// Accepts exactly `inf`, `-inf` or a decimal literal (`[+-]digits[.digits][e[+-]digits]`).
/// Spellings such as `Inf`, `infinity` or `NaN` are rejected.
impl FromStr for ExtReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" => return Ok(ExtReal::PosInf),
            "-inf" => return Ok(ExtReal::NegInf),
            _ => {}
        }
        if !is_decimal_literal(s) {
            return Err(Error::InvalidToken(s.to_string()));
        }
        let v: f64 = s.parse().map_err(|_| Error::InvalidToken(s.to_string()))?;
        ExtReal::new(v)
    }
}

fn is_decimal_literal(s: &str) -> bool {
    let b = s.as_bytes();
    let mut i = 0;
    if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
        i += 1;
    }
    let int_start = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    let mut digits = i - int_start;
    if i < b.len() && b[i] == b'.' {
        i += 1;
        let frac_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        digits += i - frac_start;
    }
    if digits == 0 {
        return false;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        i += 1;
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            i += 1;
        }
        let exp_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == exp_start {
            return false;
        }
    }
    i == b.len()
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::NegInf => serializer.serialize_str("-inf"),
            ExtReal::PosInf => serializer.serialize_str("inf"),
            ExtReal::Finite(v) => serializer.serialize_f64(*v),
        }
    }
}

struct ExtRealVisitor;

impl<'de> Visitor<'de> for ExtRealVisitor {
    type Value = ExtReal;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a number or one of the strings \"inf\", \"-inf\"")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<ExtReal, E> {
        if v.is_finite() {
            Ok(ExtReal::from_f64_unchecked(v))
        } else {
            Err(E::custom("non-finite number literal"))
        }
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtReal, E> {
        Ok(ExtReal::from_f64_unchecked(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtReal, E> {
        Ok(ExtReal::from_f64_unchecked(v as f64))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtReal, E> {
        match v {
            "inf" => Ok(ExtReal::PosInf),
            "-inf" => Ok(ExtReal::NegInf),
            other => Err(E::custom(format!(
                "invalid extended real {other:?}: expected a number, \"inf\" or \"-inf\""
            ))),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        deserializer.deserialize_any(ExtRealVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::ExtReal::{NegInf, PosInf};
    use super::*;
    use proptest::prelude::*;

    fn fin(v: f64) -> ExtReal {
        ExtReal::finite(v)
    }

    #[test]
    fn low_add_examples() {
        assert_eq!(low_add(PosInf, NegInf), NegInf);
        assert_eq!(low_add(NegInf, PosInf), NegInf);
        assert_eq!(low_add(fin(2.0), fin(3.0)), fin(5.0));
        assert_eq!(low_add(PosInf, fin(7.0)), PosInf);
    }

    #[test]
    fn upp_add_examples() {
        assert_eq!(upp_add(PosInf, NegInf), PosInf);
        assert_eq!(upp_add(NegInf, PosInf), PosInf);
        assert_eq!(upp_add(fin(-2.0), fin(-3.0)), fin(-5.0));
        assert_eq!(upp_add(NegInf, NegInf), NegInf);
    }

    #[test]
    fn neg_examples() {
        assert_eq!(-PosInf, NegInf);
        assert_eq!(-NegInf, PosInf);
        assert_eq!(-fin(0.0), fin(0.0));
        assert_eq!(-fin(-4.5), fin(4.5));
        assert!(matches!(-ExtReal::ZERO, ExtReal::Finite(z) if z.is_sign_positive()));
    }

    #[test]
    fn sup_inf_examples() {
        assert_eq!(sup_over([NegInf, fin(3.0), fin(1.0)]).unwrap(), fin(3.0));
        assert_eq!(sup_over([NegInf, NegInf]).unwrap(), NegInf);
        assert_eq!(sup_over([fin(2.0), PosInf]).unwrap(), PosInf);
        assert_eq!(inf_over([NegInf, fin(3.0), fin(1.0)]).unwrap(), NegInf);
        assert_eq!(inf_over([fin(5.0)]).unwrap(), fin(5.0));
        assert_eq!(inf_over([PosInf, PosInf]).unwrap(), PosInf);
        assert!(matches!(sup_over(Vec::new()), Err(Error::EmptySequence)));
        assert!(matches!(inf_over(Vec::new()), Err(Error::EmptySequence)));
    }

    #[test]
    fn approx_eq_examples() {
        assert!(approx_eq(PosInf, PosInf, 1e-9));
        assert!(approx_eq(fin(1.0), fin(1.0 + 1e-12), 1e-9));
        assert!(!approx_eq(PosInf, fin(1e300), 1e-9));
        assert!(!approx_eq(NegInf, PosInf, f64::MAX));
    }

    #[test]
    fn nan_rejected_and_ieee_infinities_tagged() {
        assert!(matches!(ExtReal::new(f64::NAN), Err(Error::NotANumber)));
        assert_eq!(ExtReal::new(f64::INFINITY).unwrap(), PosInf);
        assert_eq!(ExtReal::new(f64::NEG_INFINITY).unwrap(), NegInf);
        // overflow of a finite sum lands on the infinity tag
        assert_eq!(fin(1e308).low_add(fin(1e308)), PosInf);
    }

    #[test]
    fn text_forms() {
        assert_eq!("inf".parse::<ExtReal>().unwrap(), PosInf);
        assert_eq!("-inf".parse::<ExtReal>().unwrap(), NegInf);
        assert_eq!("-2.5e1".parse::<ExtReal>().unwrap(), fin(-25.0));
        assert_eq!("3".parse::<ExtReal>().unwrap(), fin(3.0));
        assert_eq!(".5".parse::<ExtReal>().unwrap(), fin(0.5));
        for bad in [
            "Inf", "+inf", "infinity", "NaN", "nan", "", "1e", "--1", "1.2.3", " 1", ".",
        ] {
            assert!(bad.parse::<ExtReal>().is_err(), "{bad:?} accepted");
        }
        assert_eq!(PosInf.to_string(), "inf");
        assert_eq!(NegInf.to_string(), "-inf");
        assert_eq!(fin(-0.5).to_string(), "-0.5");
        assert_eq!(fin(2.0).to_string(), "2");
    }

    #[test]
    fn json_forms() {
        let v: Vec<ExtReal> = serde_json::from_str(r#"[1, -2.5, "inf", "-inf"]"#).unwrap();
        assert_eq!(v, vec![fin(1.0), fin(-2.5), PosInf, NegInf]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[1.0,-2.5,"inf","-inf"]"#);
        let err = serde_json::from_str::<Vec<ExtReal>>("[1,\n \"Inf\"]").unwrap_err();
        assert_eq!(err.line(), 2);
        assert!(err.to_string().contains("Inf"));
    }

    fn infinity_patterns() -> Vec<ExtReal> {
        vec![NegInf, fin(-1.5), fin(0.0), fin(2.0), PosInf]
    }

    #[test]
    fn nine_infinity_cases_exhaustive() {
        let cases = [NegInf, fin(1.0), PosInf];
        for a in cases {
            for b in cases {
                let expected_low = match (a, b) {
                    (NegInf, _) | (_, NegInf) => NegInf,
                    (PosInf, _) | (_, PosInf) => PosInf,
                    _ => fin(2.0),
                };
                let expected_upp = match (a, b) {
                    (PosInf, _) | (_, PosInf) => PosInf,
                    (NegInf, _) | (_, NegInf) => NegInf,
                    _ => fin(2.0),
                };
                assert_eq!(low_add(a, b), expected_low, "{a} + {b}");
                assert_eq!(upp_add(a, b), expected_upp, "{a} + {b}");
            }
        }
    }

    #[test]
    fn moreau_slack_inequality_exhaustive() {
        for a in infinity_patterns() {
            for b in infinity_patterns() {
                assert!(upp_add(a, low_add(b, -a)) >= b, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn associativity_exhaustive_on_patterns() {
        let p = infinity_patterns();
        for &a in &p {
            for &b in &p {
                for &c in &p {
                    assert_eq!(low_add(low_add(a, b), c), low_add(a, low_add(b, c)));
                    assert_eq!(upp_add(upp_add(a, b), c), upp_add(a, upp_add(b, c)));
                }
            }
        }
    }

    fn arb_ext() -> impl Strategy<Value = ExtReal> {
        prop_oneof![
            1 => Just(NegInf),
            1 => Just(PosInf),
            6 => (-20i32..=20).prop_map(ExtReal::from),
        ]
    }

    proptest! {
        #[test]
        fn additions_commute(a in arb_ext(), b in arb_ext()) {
            prop_assert_eq!(low_add(a, b), low_add(b, a));
            prop_assert_eq!(upp_add(a, b), upp_add(b, a));
        }

        #[test]
        fn additions_associate(a in arb_ext(), b in arb_ext(), c in arb_ext()) {
            prop_assert_eq!(low_add(low_add(a, b), c), low_add(a, low_add(b, c)));
            prop_assert_eq!(upp_add(upp_add(a, b), c), upp_add(a, upp_add(b, c)));
        }

        #[test]
        fn de_morgan(a in arb_ext(), b in arb_ext()) {
            prop_assert_eq!(-low_add(a, b), upp_add(-a, -b));
            prop_assert_eq!(-upp_add(a, b), low_add(-a, -b));
        }

        #[test]
        fn monotone(a in arb_ext(), b in arb_ext(), a2 in arb_ext(), b2 in arb_ext()) {
            let (lo_a, hi_a) = if a <= a2 { (a, a2) } else { (a2, a) };
            let (lo_b, hi_b) = if b <= b2 { (b, b2) } else { (b2, b) };
            prop_assert!(low_add(lo_a, lo_b) <= low_add(hi_a, hi_b));
            prop_assert!(upp_add(lo_a, lo_b) <= upp_add(hi_a, hi_b));
        }

        #[test]
        fn low_below_upp(a in arb_ext(), b in arb_ext()) {
            prop_assert!(low_add(a, b) <= upp_add(a, b));
            let opposite = matches!((a, b), (NegInf, PosInf) | (PosInf, NegInf));
            prop_assert_eq!(low_add(a, b) != upp_add(a, b), opposite);
        }

        #[test]
        fn slack(a in arb_ext(), b in arb_ext()) {
            prop_assert!(upp_add(a, low_add(b, -a)) >= b);
        }

        #[test]
        fn neg_involutive(a in arb_ext()) {
            prop_assert_eq!(-(-a), a);
        }

        #[test]
        fn finite_commutes_with_random_reals(x in -1e6f64..1e6, y in -1e6f64..1e6) {
            prop_assert_eq!(low_add(fin(x), fin(y)), low_add(fin(y), fin(x)));
            prop_assert_eq!(low_add(fin(x), fin(y)), upp_add(fin(x), fin(y)));
        }

        #[test]
        fn display_parse_roundtrip(x in proptest::num::f64::NORMAL | proptest::num::f64::ZERO) {
            let v = fin(x);
            prop_assert_eq!(v.to_string().parse::<ExtReal>().unwrap(), v);
        }
    }
}
