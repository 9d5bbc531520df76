//! Canonical bit-string codes for relations and the counting functions
//! that size them.
//!
//! For the uniform type of arity `a` and order `r` over an `n`-element
//! universe:
//!
//! * `C(r,a)` — largest cardinality of a relation — equals the number of
//!   `a`-tuples one order down,
//! * `N(r,a)` — number of relations — equals `2^C(r,a)` for `r >= 2`,
//! * `T(r,a)` — number of `a`-tuples — equals `N(r,a)^a`,
//! * `B(r,a)` — code length in bits — equals `C(r,a)`; the order-1 special
//!   case uses `ceil(log2 n)` bits.
//!
//! A code has one bit per position; position `p` corresponds to the tuple
//! whose components are read off `p` in mixed radix (one digit per
//! component, first component most significant, each digit an index into
//! the canonical enumeration of the component type). Bit `p` is set iff
//! that tuple is a member. Reading the whole code as a binary number (bit
//! `p` has weight `2^p`) gives the value that the canonical order
//! compares.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{CodecError, EvalError};
use crate::limits::Limits;
use crate::relation::{
    self, tuple_at_position, tuple_count, tuple_position, value_at_index, value_index,
    RelationValue,
};
use crate::types::TypeExpr;

/// Exact cardinalities for the uniform type of arity `a` and order `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub r: u32,
    pub a: usize,
    pub n: u64,
    /// Largest relation cardinality; `None` at order 1 where relations are
    /// bare elements.
    pub max_cardinality: Option<BigUint>,
    /// Number of relations of the type. At order 1 this is `n`, flagged by
    /// `first_order`.
    pub relations: BigUint,
    /// Number of `a`-tuples of such relations.
    pub tuples: BigUint,
    /// Code length in bits.
    pub code_bits: BigUint,
    pub first_order: bool,
}

impl fmt::Display for CountReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.max_cardinality {
            Some(c) => write!(f, "C={c} "),
            None => write!(f, "C=- "),
        }?;
        write!(
            f,
            "N={} T={} B={}",
            self.relations, self.tuples, self.code_bits
        )
    }
}

fn guard_bits(v: &BigUint, limits: &Limits) -> Result<(), EvalError> {
    if v.bits() > limits.max_code_bits {
        Err(EvalError::CountOverflow {
            limit: limits.max_code_bits,
        })
    } else {
        Ok(())
    }
}

/// `texp` tower: `k` squashed exponentiations of 2, each multiplying the
/// exponent by `a`. `texp(0, x) = x`, `texp(k, x) = 2^(a * texp(k-1, x))`.
fn texp2(k: u32, x: BigUint, a: usize, limits: &Limits) -> Result<BigUint, EvalError> {
    let mut v = x;
    for _ in 0..k {
        let exponent = &v * BigUint::from(a);
        let exponent = exponent
            .to_u64()
            .filter(|&e| e <= limits.max_code_bits)
            .ok_or(EvalError::CountOverflow {
                limit: limits.max_code_bits,
            })?;
        v = BigUint::one() << exponent;
    }
    guard_bits(&v, limits)?;
    Ok(v)
}

pub fn ceil_log2(n: u64) -> u64 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros() as u64
    }
}

/// Computes the exact counting report, refusing results that would exceed
/// the bit-length limit.
pub fn counts(r: u32, a: usize, n: u64, limits: &Limits) -> Result<CountReport, EvalError> {
    assert!(r >= 1 && a >= 1 && n >= 1);
    if r == 1 {
        let tuples = BigUint::from(n).pow(a as u32);
        guard_bits(&tuples, limits)?;
        return Ok(CountReport {
            r,
            a,
            n,
            max_cardinality: None,
            relations: BigUint::from(n),
            tuples,
            code_bits: BigUint::from(ceil_log2(n)),
            first_order: true,
        });
    }
    let base = BigUint::from(n).pow(a as u32);
    let c = texp2(r - 2, base, a, limits)?;
    let c_exp =
        c.to_u64()
            .filter(|&e| e <= limits.max_code_bits)
            .ok_or(EvalError::CountOverflow {
                limit: limits.max_code_bits,
            })?;
    let relations = BigUint::one() << c_exp;
    let t_exp = c_exp
        .checked_mul(a as u64)
        .filter(|&e| e <= limits.max_code_bits)
        .ok_or(EvalError::CountOverflow {
            limit: limits.max_code_bits,
        })?;
    let tuples = BigUint::one() << t_exp;
    Ok(CountReport {
        r,
        a,
        n,
        max_cardinality: Some(c.clone()),
        relations,
        tuples,
        code_bits: c,
        first_order: false,
    })
}

/// A canonical code: `bits[p]` is position `p`, serialized as an ASCII
/// 0/1 string with index 0 first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitCode {
    pub bits: Vec<bool>,
    pub ty: TypeExpr,
    pub universe: u64,
}

impl fmt::Display for BitCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl BitCode {
    pub fn from_str_bits(text: &str, ty: TypeExpr, universe: u64) -> Result<BitCode, CodecError> {
        let mut bits = Vec::with_capacity(text.len());
        for ch in text.chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(CodecError::CodeLength {
                        ty: ty.clone(),
                        expected: 0,
                        found: text.len(),
                    })
                }
            }
        }
        Ok(BitCode { bits, ty, universe })
    }
}

fn require_codeable(ty: &TypeExpr) -> Result<(), CodecError> {
    if ty.is_uniform() {
        Ok(())
    } else {
        Err(CodecError::NotUniform(ty.clone()))
    }
}

/// Code length in bits for a codeable type.
pub fn code_len(ty: &TypeExpr, n: u64, limits: &Limits) -> Result<u64, CodecError> {
    match ty {
        TypeExpr::Iota => Ok(ceil_log2(n)),
        TypeExpr::Tuple(children) => {
            let len = tuple_count(children, n, limits)?;
            len.to_u64()
                .filter(|&l| l <= limits.max_code_bits)
                .ok_or(CodecError::Eval(EvalError::CountOverflow {
                    limit: limits.max_code_bits,
                }))
        }
    }
}

/// Encodes a relation of a uniform type (or a bare element) as its
/// canonical code.
pub fn encode(value: &RelationValue, n: u64, limits: &Limits) -> Result<BitCode, CodecError> {
    let ty = value.ty();
    require_codeable(&ty)?;
    match value {
        RelationValue::Element(e) => {
            let width = ceil_log2(n);
            // Big-endian: bits[0] is the most significant.
            let bits = (0..width)
                .map(|i| (e >> (width - 1 - i)) & 1 == 1)
                .collect();
            Ok(BitCode {
                bits,
                ty,
                universe: n,
            })
        }
        RelationValue::Set { ty: set_ty, tuples } => {
            let len = code_len(set_ty, n, limits)?;
            let mut bits = vec![false; len as usize];
            for tuple in tuples {
                let pos = tuple_position(tuple, set_ty.children(), n, limits)?;
                let pos = pos.to_u64().expect("position under code length");
                bits[pos as usize] = true;
            }
            Ok(BitCode {
                bits,
                ty,
                universe: n,
            })
        }
    }
}

/// Decodes a canonical code back into the relation it names.
pub fn decode(code: &BitCode) -> Result<RelationValue, CodecError> {
    decode_with(code, &Limits::default())
}

pub fn decode_with(code: &BitCode, limits: &Limits) -> Result<RelationValue, CodecError> {
    require_codeable(&code.ty)?;
    match &code.ty {
        TypeExpr::Iota => {
            let width = ceil_log2(code.universe);
            if code.bits.len() as u64 != width {
                return Err(CodecError::CodeLength {
                    ty: code.ty.clone(),
                    expected: width,
                    found: code.bits.len(),
                });
            }
            let mut value = 0u64;
            for &b in &code.bits {
                value = (value << 1) | b as u64;
            }
            if value >= code.universe {
                return Err(CodecError::DecodeOutOfRange {
                    value,
                    universe: code.universe,
                });
            }
            Ok(RelationValue::Element(value))
        }
        ty @ TypeExpr::Tuple(children) => {
            let expected = code_len(ty, code.universe, limits)?;
            if code.bits.len() as u64 != expected {
                return Err(CodecError::CodeLength {
                    ty: ty.clone(),
                    expected,
                    found: code.bits.len(),
                });
            }
            let mut tuples = Vec::new();
            for (pos, &bit) in code.bits.iter().enumerate() {
                if bit {
                    tuples.push(tuple_at_position(
                        children,
                        code.universe,
                        &BigUint::from(pos),
                        limits,
                    )?);
                }
            }
            Ok(RelationValue::set(ty.clone(), tuples))
        }
    }
}

/// Compares two same-typed relations by their codes read as binary
/// numbers.
pub fn canonical_compare(a: &RelationValue, b: &RelationValue) -> Result<Ordering, CodecError> {
    let (ta, tb) = (a.ty(), b.ty());
    if ta != tb {
        return Err(CodecError::NotUniform(tb));
    }
    Ok(a.cmp(b))
}

/// The code of a relation read as a binary number; the basis of the order
/// and arithmetic predicates.
pub fn value(value: &RelationValue, n: u64, limits: &Limits) -> Result<BigUint, EvalError> {
    value_index(value, n, limits)
}

/// Iterator over every relation of a type in canonical ascending order.
/// Restartable: build a fresh one to re-traverse.
pub struct RelationIter {
    ty: TypeExpr,
    n: u64,
    limits: Limits,
    next: u64,
    count: u64,
}

impl Iterator for RelationIter {
    type Item = RelationValue;

    fn next(&mut self) -> Option<RelationValue> {
        if self.next >= self.count {
            return None;
        }
        let v = value_at_index(&self.ty, self.n, &BigUint::from(self.next), &self.limits)
            .expect("index under the guarded count");
        self.next += 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = (self.count - self.next) as usize;
        (rest, Some(rest))
    }
}

impl ExactSizeIterator for RelationIter {}

/// Streams every relation of type `ty` exactly once in canonical order.
/// Refuses types whose tuple space exceeds the enumeration limit.
pub fn enumerate_relations(
    ty: &TypeExpr,
    n: u64,
    limits: &Limits,
) -> Result<RelationIter, EvalError> {
    let count = relation::guarded_value_count(ty, n, limits)?;
    Ok(RelationIter {
        ty: ty.clone(),
        n,
        limits: *limits,
        next: 0,
        count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(order: u32) -> TypeExpr {
        TypeExpr::monadic(order)
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn tuple_count_at_order_one() {
        // T(1,2) over n=3 is 9.
        let report = counts(1, 2, 3, &lim()).unwrap();
        assert_eq!(report.tuples, BigUint::from(9u32));
        assert!(report.first_order);
        assert_eq!(report.relations, BigUint::from(3u32));
    }

    #[test]
    fn subsets_of_two_elements() {
        // N(2,1) over n=2: all subsets of {0,1}.
        let report = counts(2, 1, 2, &lim()).unwrap();
        assert_eq!(report.relations, BigUint::from(4u32));
        assert_eq!(report.code_bits, BigUint::from(2u32));
    }

    #[test]
    fn double_power_set() {
        // N(3,1) over n=2: the double power set has 16 members.
        let report = counts(3, 1, 2, &lim()).unwrap();
        assert_eq!(report.relations, BigUint::from(16u32));
        assert_eq!(report.max_cardinality, Some(BigUint::from(4u32)));
        assert_eq!(report.code_bits, BigUint::from(4u32));
        assert_eq!(report.tuples, BigUint::from(16u32));
    }

    #[test]
    fn report_identities() {
        for r in 2..=3u32 {
            for a in 1..=2usize {
                for n in 1..=2u64 {
                    let rep = counts(r, a, n, &lim()).unwrap();
                    let c = rep.max_cardinality.clone().unwrap();
                    assert_eq!(
                        rep.relations,
                        BigUint::one() << c.to_u64().unwrap() as usize
                    );
                    assert_eq!(rep.tuples, rep.relations.pow(a as u32));
                    assert_eq!(rep.code_bits, c);
                }
            }
        }
    }

    #[test]
    fn overflow_guard_refuses_tall_towers() {
        let report = counts(4, 2, 3, &lim());
        assert!(matches!(report, Err(EvalError::CountOverflow { .. })));
        // But a taller tower over a tiny universe is fine.
        assert!(counts(4, 1, 2, &lim()).is_ok());
    }

    #[test]
    fn empty_and_full_monadic_codes() {
        let empty = RelationValue::empty(mono(2));
        let code = encode(&empty, 2, &lim()).unwrap();
        assert_eq!(code.to_string(), "00");
        let full = relation::full_relation(&mono(2), 2, &lim()).unwrap();
        assert_eq!(encode(&full, 2, &lim()).unwrap().to_string(), "11");
    }

    #[test]
    fn singleton_of_singleton_code() {
        // {({0})} at type ((i)), n=2: one bit set, at the position that is
        // the code of {0} read as a number.
        let zero_set = RelationValue::set(mono(2), vec![vec![RelationValue::Element(0)]]);
        let inner_code = encode(&zero_set, 2, &lim()).unwrap();
        assert_eq!(inner_code.to_string(), "10"); // bit 0 set -> value 1
        let outer = RelationValue::set(mono(3), vec![vec![zero_set]]);
        let outer_code = encode(&outer, 2, &lim()).unwrap();
        assert_eq!(outer_code.to_string(), "0100");
        let outer_value = value(&outer, 2, &lim()).unwrap();
        assert_eq!(outer_value, BigUint::from(2u32)); // 2^position, position 1
    }

    #[test]
    fn iota_codes_are_big_endian() {
        let code = encode(&RelationValue::Element(2), 5, &lim()).unwrap();
        assert_eq!(code.to_string(), "010");
        assert_eq!(decode(&code).unwrap(), RelationValue::Element(2));
        // Codes naming elements at or past n are invalid.
        let bad = BitCode::from_str_bits("101", TypeExpr::Iota, 5).unwrap();
        assert!(matches!(
            decode(&bad),
            Err(CodecError::DecodeOutOfRange { .. })
        ));
    }

    #[test]
    fn round_trip_all_sixteen_order_three_relations() {
        let ty = mono(3);
        for rel in enumerate_relations(&ty, 2, &lim()).unwrap() {
            let code = encode(&rel, 2, &lim()).unwrap();
            assert_eq!(code.bits.len(), 4);
            assert_eq!(decode(&code).unwrap(), rel);
        }
    }

    #[test]
    fn canonical_compare_is_code_order() {
        let empty = RelationValue::empty(mono(2));
        let full = relation::full_relation(&mono(2), 2, &lim()).unwrap();
        assert_eq!(canonical_compare(&empty, &full).unwrap(), Ordering::Less);
        assert_eq!(canonical_compare(&empty, &empty).unwrap(), Ordering::Equal);
        let pair = RelationValue::set(
            mono(2),
            vec![
                vec![RelationValue::Element(0)],
                vec![RelationValue::Element(1)],
            ],
        );
        assert!(matches!(
            canonical_compare(&pair, &RelationValue::Element(0)),
            Err(CodecError::NotUniform(_))
        ));
    }

    #[test]
    fn enumeration_matches_counts_and_is_sorted() {
        for (ty, r, a) in [
            (mono(2), 2u32, 1usize),
            (mono(3), 3, 1),
            (TypeExpr::uniform(2, 2), 2, 2),
        ] {
            for n in 1..=2u64 {
                let rels: Vec<_> = enumerate_relations(&ty, n, &lim()).unwrap().collect();
                let report = counts(r, a, n, &lim()).unwrap();
                assert_eq!(BigUint::from(rels.len()), report.relations);
                for pair in rels.windows(2) {
                    assert_eq!(
                        canonical_compare(&pair[0], &pair[1]).unwrap(),
                        Ordering::Less
                    );
                }
                for rel in &rels {
                    let code = encode(rel, n, &lim()).unwrap();
                    assert_eq!(BigUint::from(code.bits.len()), report.code_bits);
                }
            }
        }
    }

    #[test]
    fn iota_enumeration() {
        let rels: Vec<_> = enumerate_relations(&TypeExpr::Iota, 3, &lim())
            .unwrap()
            .collect();
        assert_eq!(
            rels,
            vec![
                RelationValue::Element(0),
                RelationValue::Element(1),
                RelationValue::Element(2)
            ]
        );
    }

    #[test]
    fn non_uniform_types_are_rejected_by_encode() {
        let ty = TypeExpr::tuple(vec![TypeExpr::Iota, mono(2)]);
        let v = RelationValue::empty(ty);
        assert!(matches!(
            encode(&v, 2, &lim()),
            Err(CodecError::NotUniform(_))
        ));
    }

    #[test]
    fn base_n_positions_cover_non_power_universes() {
        // (i,i) over n=3: 9 positions, one per ordered pair, bijectively.
        let ty = TypeExpr::uniform(2, 2);
        let report = counts(2, 2, 3, &lim()).unwrap();
        assert_eq!(report.code_bits, BigUint::from(9u32));
        let mut seen = std::collections::BTreeSet::new();
        for rel in enumerate_relations(&ty, 3, &lim()).unwrap().take(512) {
            let code = encode(&rel, 3, &lim()).unwrap();
            assert_eq!(code.bits.len(), 9);
            assert!(seen.insert(code.to_string()));
            assert_eq!(decode(&code).unwrap(), rel);
        }
        assert_eq!(seen.len(), 512);
    }
}
