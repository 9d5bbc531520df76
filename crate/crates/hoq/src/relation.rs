//! Concrete higher-order relations and the spaces they live in.
//!
//! A value of type `i` is a universe element; a value of a tuple type is a
//! finite set of tuples of values. Sets are kept canonically sorted and
//! duplicate free, so structural equality is set equality and the derived
//! ordering agrees with comparing canonical codes as binary numbers.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{EvalError, ValueError};
use crate::limits::Limits;
use crate::types::TypeExpr;

pub type Tuple = Vec<RelationValue>;

/// A relation value: an element index for type `i`, or a set of tuples.
///
/// The set variant carries its tuple type so values are self-describing;
/// the tuples are sorted ascending in canonical order with no duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RelationValue {
    Element(u64),
    Set { ty: TypeExpr, tuples: Vec<Tuple> },
}

impl RelationValue {
    /// Builds a set value of the given tuple type, canonicalizing the tuple
    /// list (sort + dedup). Component types and ranges are not checked here;
    /// use [`RelationValue::validate`] for that.
    pub fn set(ty: TypeExpr, mut tuples: Vec<Tuple>) -> RelationValue {
        assert!(!ty.is_iota(), "set values need a tuple type");
        tuples.sort();
        tuples.dedup();
        RelationValue::Set { ty, tuples }
    }

    pub fn empty(ty: TypeExpr) -> RelationValue {
        RelationValue::set(ty, Vec::new())
    }

    pub fn ty(&self) -> TypeExpr {
        match self {
            RelationValue::Element(_) => TypeExpr::Iota,
            RelationValue::Set { ty, .. } => ty.clone(),
        }
    }

    pub fn tuples(&self) -> &[Tuple] {
        match self {
            RelationValue::Element(_) => &[],
            RelationValue::Set { tuples, .. } => tuples,
        }
    }

    pub fn contains(&self, tuple: &[RelationValue]) -> bool {
        match self {
            RelationValue::Element(_) => false,
            RelationValue::Set { tuples, .. } => {
                tuples.binary_search_by(|t| t.as_slice().cmp(tuple)).is_ok()
            }
        }
    }

    /// Checks the full value invariant against a type and universe size.
    pub fn validate(&self, ty: &TypeExpr, universe: u64) -> Result<(), ValueError> {
        match (self, ty) {
            (RelationValue::Element(e), TypeExpr::Iota) => {
                if *e < universe {
                    Ok(())
                } else {
                    Err(ValueError::ElementOutOfRange {
                        index: *e,
                        universe,
                    })
                }
            }
            (RelationValue::Element(_), t @ TypeExpr::Tuple(_)) => {
                Err(ValueError::ElementAtTuple { ty: t.clone() })
            }
            (RelationValue::Set { .. }, TypeExpr::Iota) => Err(ValueError::SetAtIota),
            (RelationValue::Set { ty: own, tuples }, TypeExpr::Tuple(children)) => {
                if own != ty {
                    return Err(ValueError::ComponentType {
                        expected: ty.clone(),
                    });
                }
                for tuple in tuples {
                    if tuple.len() != children.len() {
                        return Err(ValueError::TupleArity {
                            ty: ty.clone(),
                            expected: children.len(),
                            found: tuple.len(),
                        });
                    }
                    for (component, cty) in tuple.iter().zip(children) {
                        component.validate(cty, universe)?;
                    }
                }
                Ok(())
            }
        }
    }
}

// Canonical order: elements by index; sets by their codes read as binary
// numbers, i.e. the set containing the larger maximal tuple wins, comparing
// tuple lists from the back. Tuples compare lexicographically with the
// first component most significant.
impl Ord for RelationValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (RelationValue::Element(a), RelationValue::Element(b)) => a.cmp(b),
            (RelationValue::Element(_), RelationValue::Set { .. }) => Ordering::Less,
            (RelationValue::Set { .. }, RelationValue::Element(_)) => Ordering::Greater,
            (RelationValue::Set { tuples: r, .. }, RelationValue::Set { tuples: s, .. }) => {
                for (a, b) in r.iter().rev().zip(s.iter().rev()) {
                    match a.cmp(b) {
                        Ordering::Equal => continue,
                        unequal => return unequal,
                    }
                }
                r.len().cmp(&s.len())
            }
        }
    }
}

impl PartialOrd for RelationValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Number of values of the given type over a universe of `n` elements.
/// `i` has `n` values; a tuple type has `2^(product of child counts)`.
pub fn value_count(ty: &TypeExpr, n: u64, limits: &Limits) -> Result<BigUint, EvalError> {
    match ty {
        TypeExpr::Iota => Ok(BigUint::from(n)),
        TypeExpr::Tuple(children) => {
            let positions = tuple_count(children, n, limits)?;
            let exp = positions
                .to_u64()
                .filter(|&e| e <= limits.max_code_bits)
                .ok_or(EvalError::CountOverflow {
                    limit: limits.max_code_bits,
                })?;
            Ok(BigUint::one() << exp)
        }
    }
}

/// Number of tuples over the given component types.
pub fn tuple_count(children: &[TypeExpr], n: u64, limits: &Limits) -> Result<BigUint, EvalError> {
    let mut total = BigUint::one();
    for c in children {
        total *= value_count(c, n, limits)?;
        if total.bits() > limits.max_code_bits {
            return Err(EvalError::CountOverflow {
                limit: limits.max_code_bits,
            });
        }
    }
    Ok(total)
}

fn guard_enum(what: &str, size: &BigUint, limits: &Limits) -> Result<u64, EvalError> {
    size.to_u64()
        .filter(|&s| s <= limits.max_enum)
        .ok_or_else(|| EvalError::SearchSpaceTooLarge {
            what: what.to_string(),
            size: size.to_string(),
            limit: limits.max_enum,
        })
}

/// The number of values of a type, after checking it against the
/// enumeration guard. The guard is applied to the tuple space `count^arity`
/// of the type, which is the quantity that drives quantifier expansion.
pub fn guarded_value_count(ty: &TypeExpr, n: u64, limits: &Limits) -> Result<u64, EvalError> {
    let count = value_count(ty, n, limits)?;
    let mut space = BigUint::one();
    for _ in 0..ty.arity() {
        space *= &count;
        if space.bits() > 64 {
            break;
        }
    }
    guard_enum(&format!("type {ty}"), &space, limits)?;
    count
        .to_u64()
        .ok_or_else(|| EvalError::SearchSpaceTooLarge {
            what: format!("type {ty}"),
            size: count.to_string(),
            limit: limits.max_enum,
        })
}

/// The index of a value within the canonical enumeration of its type.
/// For sets this is the code read as a binary number.
pub fn value_index(value: &RelationValue, n: u64, limits: &Limits) -> Result<BigUint, EvalError> {
    match value {
        RelationValue::Element(e) => Ok(BigUint::from(*e)),
        RelationValue::Set { ty, tuples } => {
            let children = ty.children();
            let mut acc = BigUint::zero();
            for tuple in tuples {
                let pos = tuple_position(tuple, children, n, limits)?;
                let pos = pos.to_u64().filter(|&p| p <= limits.max_code_bits).ok_or(
                    EvalError::CountOverflow {
                        limit: limits.max_code_bits,
                    },
                )?;
                acc |= BigUint::one() << pos;
            }
            Ok(acc)
        }
    }
}

/// Mixed-radix position of a tuple: the first component is most
/// significant, each component contributing its own value index in radix
/// `value_count(component type)`.
pub fn tuple_position(
    tuple: &[RelationValue],
    children: &[TypeExpr],
    n: u64,
    limits: &Limits,
) -> Result<BigUint, EvalError> {
    let mut acc = BigUint::zero();
    for (component, cty) in tuple.iter().zip(children) {
        acc *= value_count(cty, n, limits)?;
        acc += value_index(component, n, limits)?;
    }
    Ok(acc)
}

/// Inverse of [`value_index`]: the value of `ty` at a canonical index.
pub fn value_at_index(
    ty: &TypeExpr,
    n: u64,
    index: &BigUint,
    limits: &Limits,
) -> Result<RelationValue, EvalError> {
    match ty {
        TypeExpr::Iota => {
            let e = index.to_u64().unwrap_or(u64::MAX);
            Ok(RelationValue::Element(e))
        }
        TypeExpr::Tuple(children) => {
            let mut tuples = Vec::new();
            for (pos, bit) in index.to_radix_le(2).iter().enumerate() {
                if *bit == 1 {
                    tuples.push(tuple_at_position(children, n, &BigUint::from(pos), limits)?);
                }
            }
            Ok(RelationValue::set(ty.clone(), tuples))
        }
    }
}

/// Inverse of [`tuple_position`].
pub fn tuple_at_position(
    children: &[TypeExpr],
    n: u64,
    position: &BigUint,
    limits: &Limits,
) -> Result<Tuple, EvalError> {
    let mut rest = position.clone();
    let mut reversed = Vec::with_capacity(children.len());
    for cty in children.iter().rev() {
        let radix = value_count(cty, n, limits)?;
        let digit = &rest % &radix;
        rest /= radix;
        reversed.push(value_at_index(cty, n, &digit, limits)?);
    }
    reversed.reverse();
    Ok(reversed)
}

/// All values of a type in canonical ascending order. Refuses spaces over
/// the enumeration guard.
pub fn enumerate_values(
    ty: &TypeExpr,
    n: u64,
    limits: &Limits,
) -> Result<Vec<RelationValue>, EvalError> {
    let count = guarded_value_count(ty, n, limits)?;
    let mut out = Vec::with_capacity(count as usize);
    for v in 0..count {
        out.push(value_at_index(ty, n, &BigUint::from(v), limits)?);
    }
    Ok(out)
}

/// All tuples over the component types in canonical ascending position
/// order.
pub fn enumerate_tuples(
    children: &[TypeExpr],
    n: u64,
    limits: &Limits,
) -> Result<Vec<Tuple>, EvalError> {
    let total = tuple_count(children, n, limits)?;
    let total = guard_enum("tuple space", &total, limits)?;
    let mut out = Vec::with_capacity(total as usize);
    for p in 0..total {
        out.push(tuple_at_position(children, n, &BigUint::from(p), limits)?);
    }
    Ok(out)
}

/// The full relation of a tuple type: every tuple of the space.
pub fn full_relation(ty: &TypeExpr, n: u64, limits: &Limits) -> Result<RelationValue, EvalError> {
    match ty {
        TypeExpr::Iota => Ok(RelationValue::Element(n.saturating_sub(1))),
        TypeExpr::Tuple(children) => {
            let tuples = enumerate_tuples(children, n, limits)?;
            Ok(RelationValue::set(ty.clone(), tuples))
        }
    }
}

/// The empty relation of a tuple type; for `i` the least element 0.
pub fn empty_relation(ty: &TypeExpr) -> RelationValue {
    match ty {
        TypeExpr::Iota => RelationValue::Element(0),
        t => RelationValue::empty(t.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono() -> TypeExpr {
        TypeExpr::tuple(vec![TypeExpr::Iota])
    }

    fn set_of(ty: TypeExpr, elems: &[u64]) -> RelationValue {
        RelationValue::set(
            ty,
            elems
                .iter()
                .map(|&e| vec![RelationValue::Element(e)])
                .collect(),
        )
    }

    #[test]
    fn set_construction_canonicalizes() {
        let a = RelationValue::set(
            mono(),
            vec![
                vec![RelationValue::Element(1)],
                vec![RelationValue::Element(0)],
                vec![RelationValue::Element(1)],
            ],
        );
        let b = set_of(mono(), &[0, 1]);
        assert_eq!(a, b);
    }

    #[test]
    fn canonical_order_is_numeric_on_codes() {
        let limits = Limits::default();
        // All 8 subsets of a 3-element universe: order must agree with the
        // code value.
        let values = enumerate_values(&mono(), 3, &limits).unwrap();
        assert_eq!(values.len(), 8);
        for (i, v) in values.iter().enumerate() {
            assert_eq!(value_index(v, 3, &limits).unwrap(), BigUint::from(i));
        }
        for pair in values.windows(2) {
            assert!(pair[0] < pair[1]);
        }
    }

    #[test]
    fn empty_below_full() {
        let limits = Limits::default();
        let empty = empty_relation(&mono());
        let full = full_relation(&mono(), 2, &limits).unwrap();
        assert!(empty < full);
        assert_eq!(full.tuples().len(), 2);
    }

    #[test]
    fn order_three_enumeration_has_sixteen_values() {
        let limits = Limits::default();
        let ty = TypeExpr::monadic(3);
        let values = enumerate_values(&ty, 2, &limits).unwrap();
        assert_eq!(values.len(), 16);
        // Total order: antisymmetric, transitive, no repeats.
        for i in 0..values.len() {
            for j in 0..values.len() {
                let c = values[i].cmp(&values[j]);
                assert_eq!(c, i.cmp(&j));
            }
        }
    }

    #[test]
    fn mixed_type_tuple_positions_round_trip() {
        let limits = Limits::default();
        // Components of different types: (i, (i)) over n = 3.
        let children = vec![TypeExpr::Iota, mono()];
        let tuples = enumerate_tuples(&children, 3, &limits).unwrap();
        assert_eq!(tuples.len(), 3 * 8);
        for (p, t) in tuples.iter().enumerate() {
            let back = tuple_position(t, &children, 3, &limits).unwrap();
            assert_eq!(back, BigUint::from(p));
        }
    }

    #[test]
    fn validate_catches_range_and_shape() {
        let v = set_of(mono(), &[0, 5]);
        assert!(v.validate(&mono(), 3).is_err());
        assert!(v.validate(&mono(), 6).is_ok());
        assert!(RelationValue::Element(0).validate(&mono(), 3).is_err());
    }

    #[test]
    fn guard_refuses_large_spaces() {
        let limits = Limits {
            max_enum: 100,
            ..Limits::default()
        };
        let ty = TypeExpr::tuple(vec![TypeExpr::Iota, TypeExpr::Iota]);
        // 2^(4*4) relations is over the tiny guard.
        assert!(matches!(
            enumerate_values(&ty, 4, &limits),
            Err(EvalError::SearchSpaceTooLarge { .. })
        ));
    }
}
