//! The ordered vector group: finitely supported rational sequences under the
//! lexicographic order, together with the extended point `inf`.
//!
//! Elements are written `(r0, r1, r2, ...)` and stored sparsely; a vector is
//! positive exactly when its first nonzero coordinate is positive. The text
//! literal format is `[r0, r1, ..., rk]` with trailing zeros omitted and
//! rationals as `p/q` or plain integers; `inf` denotes the extended point.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact scalar type. Always in lowest terms with a positive denominator,
/// so value equality is representation equality.
pub type Rational = num_rational::BigRational;

/// Rational from an integer pair. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A finitely supported sequence of rationals indexed by naturals.
///
/// Canonical form: no stored coordinate is zero. Two vectors are equal iff
/// their canonical forms are identical, and `Ord` is the lexicographic group
/// order (sign of the first nonzero coordinate of the difference).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LogVector {
    coords: BTreeMap<u32, Rational>,
}

impl LogVector {
    pub fn zero() -> Self {
        LogVector::default()
    }

    /// The basis vector with a single 1 at `index`.
    pub fn unit(index: u32) -> Self {
        let mut coords = BTreeMap::new();
        coords.insert(index, Rational::one());
        LogVector { coords }
    }

    /// The vector `(1, ..., 1, 0, ...)` with ones at indices `0..=level`.
    pub fn ones_through(level: u32) -> Self {
        let coords = (0..=level).map(|i| (i, Rational::one())).collect();
        LogVector { coords }
    }

    /// Builds a vector from `(index, coefficient)` pairs, summing duplicates
    /// and dropping zeros.
    pub fn from_coords<I: IntoIterator<Item = (u32, Rational)>>(entries: I) -> Self {
        let mut coords: BTreeMap<u32, Rational> = BTreeMap::new();
        for (i, c) in entries {
            let slot = coords.entry(i).or_insert_with(Rational::zero);
            *slot += c;
            if slot.is_zero() {
                coords.remove(&i);
            }
        }
        LogVector { coords }
    }

    /// Builds a vector from dense coordinates starting at index 0.
    pub fn from_dense<I: IntoIterator<Item = Rational>>(entries: I) -> Self {
        LogVector::from_coords(entries.into_iter().enumerate().map(|(i, c)| (i as u32, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    /// Coordinate at `index` (zero when absent).
    pub fn coord(&self, index: u32) -> Rational {
        self.coords
            .get(&index)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Least support index with its coefficient, or `None` for the zero vector.
    pub fn leading(&self) -> Option<(u32, &Rational)> {
        self.coords.iter().next().map(|(i, c)| (*i, c))
    }

    pub fn lead_index(&self) -> Option<u32> {
        self.leading().map(|(i, _)| i)
    }

    pub fn max_support(&self) -> Option<u32> {
        self.coords.keys().next_back().copied()
    }

    pub fn support(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coords.iter().map(|(i, c)| (*i, c))
    }

    pub fn add(&self, other: &LogVector) -> LogVector {
        let mut coords = self.coords.clone();
        for (i, c) in &other.coords {
            let slot = coords.entry(*i).or_insert_with(Rational::zero);
            *slot += c;
            if slot.is_zero() {
                coords.remove(i);
            }
        }
        LogVector { coords }
    }

    pub fn sub(&self, other: &LogVector) -> LogVector {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LogVector {
        LogVector {
            coords: self.coords.iter().map(|(i, c)| (*i, -c)).collect(),
        }
    }

    /// Coordinatewise multiplication by `q`. `scale` by `1/n` realizes the
    /// division symbol `d_n`.
    pub fn scale(&self, q: &Rational) -> LogVector {
        if q.is_zero() {
            return LogVector::zero();
        }
        LogVector {
            coords: self.coords.iter().map(|(i, c)| (*i, c * q)).collect(),
        }
    }

    pub fn is_positive(&self) -> bool {
        matches!(self.leading(), Some((_, c)) if c.is_positive())
    }

    pub fn is_negative(&self) -> bool {
        matches!(self.leading(), Some((_, c)) if c.is_negative())
    }

    /// Archimedean class: the zero class for 0, otherwise determined by the
    /// leading index (smaller leading index means larger class).
    pub fn arch_class(&self) -> ArchClass {
        match self.lead_index() {
            None => ArchClass::ClassOfZero,
            Some(i) => ArchClass::LeadIndex(i),
        }
    }

    /// Coefficients of this vector over the basis `(1,...,1,0,...)`: returns
    /// `c` with `self = sum c_n * ones_through(n)`, i.e. `c_n = r_n - r_{n+1}`.
    /// Finitely supported; the round trip through [`LogVector::from_psi_basis`]
    /// is exact.
    pub fn to_psi_basis(&self) -> BTreeMap<u32, Rational> {
        let mut out = BTreeMap::new();
        let max = match self.max_support() {
            None => return out,
            Some(m) => m,
        };
        for n in 0..=max {
            let c = self.coord(n) - self.coord(n + 1);
            if !c.is_zero() {
                out.insert(n, c);
            }
        }
        out
    }

    /// Reconstructs a vector from basis coefficients `c_n` over
    /// `ones_through(n)`.
    pub fn from_psi_basis(coeffs: &BTreeMap<u32, Rational>) -> LogVector {
        let mut acc = LogVector::zero();
        for (n, c) in coeffs {
            acc = acc.add(&LogVector::ones_through(*n).scale(c));
        }
        acc
    }

    /// Parses the literal format `[r0, r1, ..., rk]`.
    pub fn parse_literal(text: &str) -> Result<LogVector, VectorParseError> {
        let s = text.trim();
        let inner = s
            .strip_prefix('[')
            .and_then(|rest| rest.strip_suffix(']'))
            .ok_or_else(|| VectorParseError(format!("expected [r0, r1, ...], got `{s}`")))?;
        let inner = inner.trim();
        if inner.is_empty() {
            return Ok(LogVector::zero());
        }
        let mut entries = Vec::new();
        for part in inner.split(',') {
            let part = part.trim();
            let q = Rational::from_str(part)
                .map_err(|e| VectorParseError(format!("bad rational `{part}`: {e}")))?;
            entries.push(q);
        }
        Ok(LogVector::from_dense(entries))
    }
}

impl Ord for LogVector {
    fn cmp(&self, other: &Self) -> Ordering {
        // Lexicographic: walk both supports in increasing index order and
        // compare the first coordinate where the vectors differ.
        let mut a = self.coords.iter().peekable();
        let mut b = other.coords.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some((_, ca)), None) => {
                    return if ca.is_positive() {
                        Ordering::Greater
                    } else {
                        Ordering::Less
                    };
                }
                (None, Some((_, cb))) => {
                    return if cb.is_positive() {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    };
                }
                (Some((ia, ca)), Some((ib, cb))) => match ia.cmp(ib) {
                    Ordering::Less => {
                        return if ca.is_positive() {
                            Ordering::Greater
                        } else {
                            Ordering::Less
                        };
                    }
                    Ordering::Greater => {
                        return if cb.is_positive() {
                            Ordering::Less
                        } else {
                            Ordering::Greater
                        };
                    }
                    Ordering::Equal => match ca.cmp(cb) {
                        Ordering::Equal => {
                            a.next();
                            b.next();
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for LogVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LogVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        if let Some(max) = self.max_support() {
            for i in 0..=max {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.coord(i))?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Debug for LogVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for LogVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let dense: Vec<String> = match self.max_support() {
            None => Vec::new(),
            Some(max) => (0..=max).map(|i| self.coord(i).to_string()).collect(),
        };
        dense.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LogVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let dense: Vec<String> = Vec::deserialize(deserializer)?;
        let mut entries = Vec::with_capacity(dense.len());
        for s in &dense {
            let q = Rational::from_str(s)
                .map_err(|e| D::Error::custom(format!("bad rational `{s}`: {e}")))?;
            entries.push(q);
        }
        Ok(LogVector::from_dense(entries))
    }
}

/// A group element or the distinguished point `inf`, which compares strictly
/// greater than every finite value and absorbs every operation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ExtValue {
    Finite(LogVector),
    Infinity,
}

impl ExtValue {
    pub fn zero() -> Self {
        ExtValue::Finite(LogVector::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtValue::Infinity)
    }

    pub fn as_finite(&self) -> Option<&LogVector> {
        match self {
            ExtValue::Finite(v) => Some(v),
            ExtValue::Infinity => None,
        }
    }

    pub fn add(&self, other: &ExtValue) -> ExtValue {
        match (self, other) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => ExtValue::Finite(a.add(b)),
            _ => ExtValue::Infinity,
        }
    }

    /// Coordinatewise negation; `-inf = inf`.
    pub fn neg(&self) -> ExtValue {
        match self {
            ExtValue::Finite(a) => ExtValue::Finite(a.neg()),
            ExtValue::Infinity => ExtValue::Infinity,
        }
    }

    pub fn scale(&self, q: &Rational) -> ExtValue {
        match self {
            ExtValue::Finite(a) => ExtValue::Finite(a.scale(q)),
            ExtValue::Infinity => ExtValue::Infinity,
        }
    }

    /// Parses `inf` or a vector literal.
    pub fn parse_literal(text: &str) -> Result<ExtValue, VectorParseError> {
        let s = text.trim();
        if s == "inf" {
            return Ok(ExtValue::Infinity);
        }
        LogVector::parse_literal(s).map(ExtValue::Finite)
    }
}

impl From<LogVector> for ExtValue {
    fn from(v: LogVector) -> Self {
        ExtValue::Finite(v)
    }
}

impl Ord for ExtValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtValue::Infinity, ExtValue::Infinity) => Ordering::Equal,
            (ExtValue::Infinity, ExtValue::Finite(_)) => Ordering::Greater,
            (ExtValue::Finite(_), ExtValue::Infinity) => Ordering::Less,
            (ExtValue::Finite(a), ExtValue::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for ExtValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::Finite(v) => write!(f, "{v}"),
            ExtValue::Infinity => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ExtValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtValue::Infinity => "inf".serialize(serializer),
            ExtValue::Finite(v) => v.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for ExtValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Inf(String),
            Vec(LogVector),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Inf(s) if s == "inf" => Ok(ExtValue::Infinity),
            Repr::Inf(s) => Err(D::Error::custom(format!(
                "expected `inf` or a vector, got `{s}`"
            ))),
            Repr::Vec(v) => Ok(ExtValue::Finite(v)),
        }
    }
}

/// Archimedean class of a vector. `ClassOfZero` is the minimum; among nonzero
/// classes, a *smaller* leading index means a *larger* class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArchClass {
    ClassOfZero,
    LeadIndex(u32),
}

impl Ord for ArchClass {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ArchClass::ClassOfZero, ArchClass::ClassOfZero) => Ordering::Equal,
            (ArchClass::ClassOfZero, _) => Ordering::Less,
            (_, ArchClass::ClassOfZero) => Ordering::Greater,
            (ArchClass::LeadIndex(m), ArchClass::LeadIndex(n)) => n.cmp(m),
        }
    }
}

impl PartialOrd for ArchClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Error for malformed vector literals.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid vector literal: {0}")]
pub struct VectorParseError(pub String);

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[(u32, i64)]) -> LogVector {
        LogVector::from_coords(coords.iter().map(|&(i, c)| (i, rat_int(c))))
    }

    #[test]
    fn add_examples() {
        // (1,-5) + (0,5) = (1)
        let a = v(&[(0, 1), (1, -5)]);
        let b = v(&[(1, 5)]);
        assert_eq!(a.add(&b), v(&[(0, 1)]));
        // inf absorbs
        let fin = ExtValue::Finite(v(&[(0, 3), (1, 7)]));
        assert_eq!(fin.add(&ExtValue::Infinity), ExtValue::Infinity);
        // identity
        assert_eq!(a.add(&LogVector::zero()), a);
    }

    #[test]
    fn negate_examples() {
        assert_eq!(v(&[(0, 1), (1, -5)]).neg(), v(&[(0, -1), (1, 5)]));
        assert_eq!(ExtValue::Infinity.neg(), ExtValue::Infinity);
        assert_eq!(LogVector::zero().neg(), LogVector::zero());
    }

    #[test]
    fn scale_examples() {
        let a = v(&[(0, 1), (1, 3)]);
        let half = a.scale(&rat(1, 2));
        assert_eq!(half.coord(0), rat(1, 2));
        assert_eq!(half.coord(1), rat(3, 2));
        assert_eq!(a.scale(&Rational::zero()), LogVector::zero());
        // d_3 applied to (1,1,1)
        let psi2 = LogVector::ones_through(2);
        let third = psi2.scale(&rat(1, 3));
        assert_eq!(
            third,
            LogVector::from_dense(vec![rat(1, 3), rat(1, 3), rat(1, 3)])
        );
    }

    #[test]
    fn compare_examples() {
        assert!(v(&[(0, 1), (1, -5)]) > LogVector::zero());
        // (0,1,-3) < (0,1,2): difference (0,0,-5)
        assert!(v(&[(1, 1), (2, -3)]) < v(&[(1, 1), (2, 2)]));
        assert!(ExtValue::Finite(v(&[(0, 100)])) < ExtValue::Infinity);
        assert_eq!(ExtValue::Infinity.cmp(&ExtValue::Infinity), Ordering::Equal);
    }

    #[test]
    fn arch_class_examples() {
        assert_eq!(LogVector::zero().arch_class(), ArchClass::ClassOfZero);
        assert_eq!(v(&[(2, 7)]).arch_class(), ArchClass::LeadIndex(2));
        // [(0,5)] < [(1)] as classes: n*(0,5) < (1) for all n
        let small = v(&[(1, 5)]);
        let big = v(&[(0, 1)]);
        assert!(small.arch_class() < big.arch_class());
        for n in 1..=1000 {
            assert!(small.scale(&rat_int(n)) < big);
        }
        assert!(ArchClass::ClassOfZero < ArchClass::LeadIndex(9));
    }

    #[test]
    fn psi_basis_examples() {
        let e0 = LogVector::unit(0);
        let b = e0.to_psi_basis();
        assert_eq!(b.len(), 1);
        assert_eq!(b.get(&0), Some(&rat_int(1)));

        // (0,1) = -psi_0 + psi_1
        let e1 = LogVector::unit(1);
        let b = e1.to_psi_basis();
        assert_eq!(b.get(&0), Some(&rat_int(-1)));
        assert_eq!(b.get(&1), Some(&rat_int(1)));
        assert_eq!(LogVector::from_psi_basis(&b), e1);

        assert!(LogVector::zero().to_psi_basis().is_empty());
    }

    #[test]
    fn psi_basis_coefficient_sum_is_first_coordinate() {
        let a = LogVector::from_dense(vec![rat(3, 2), rat_int(-4), rat(1, 7)]);
        let sum: Rational = a.to_psi_basis().values().sum();
        assert_eq!(sum, rat(3, 2));
    }

    #[test]
    fn literal_round_trip() {
        for text in ["[]", "[1, -5]", "[0, 1/2, -3/4]", "[2]"] {
            let v = LogVector::parse_literal(text).unwrap();
            assert_eq!(v.to_string(), text.replace("  ", " "));
        }
        assert_eq!(
            LogVector::parse_literal("[0, 0]").unwrap(),
            LogVector::zero()
        );
        assert_eq!(ExtValue::parse_literal("inf").unwrap(), ExtValue::Infinity);
        assert!(LogVector::parse_literal("[1, oops]").is_err());
        assert!(LogVector::parse_literal("nope").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_rational() -> impl Strategy<Value = Rational> {
            (-100i64..=100, 1i64..=20).prop_map(|(p, q)| rat(p, q))
        }

        fn arb_vector() -> impl Strategy<Value = LogVector> {
            proptest::collection::vec((0u32..8, arb_rational()), 0..6)
                .prop_map(LogVector::from_coords)
        }

        proptest! {
            #[test]
            fn add_commutes(a in arb_vector(), b in arb_vector()) {
                prop_assert_eq!(a.add(&b), b.add(&a));
            }

            #[test]
            fn add_associates(a in arb_vector(), b in arb_vector(), c in arb_vector()) {
                prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            }

            #[test]
            fn order_translation_invariant(a in arb_vector(), b in arb_vector(), c in arb_vector()) {
                if a < b {
                    prop_assert!(a.add(&c) < b.add(&c));
                }
            }

            #[test]
            fn canonical_idempotent(a in arb_vector()) {
                let rebuilt = LogVector::from_coords(a.support().map(|(i, c)| (i, c.clone())));
                prop_assert_eq!(rebuilt, a);
            }

            #[test]
            fn psi_basis_round_trip(a in arb_vector()) {
                prop_assert_eq!(LogVector::from_psi_basis(&a.to_psi_basis()), a);
            }

            #[test]
            fn neg_is_inverse(a in arb_vector()) {
                prop_assert!(a.add(&a.neg()).is_zero());
            }
        }
    }
}
