//! Type expressions: the element type `i` and finite tuples of types.
//!
//! The order of a type is its nesting depth: `i` has order 1, a tuple has
//! order one more than the largest order among its children.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A type expression. `Iota` is the type of universe elements; `Tuple`
/// holds a non-empty list of component types.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeExpr {
    Iota,
    Tuple(Vec<TypeExpr>),
}

impl TypeExpr {
    /// Builds a tuple type. Panics on an empty component list, which is not
    /// a type.
    pub fn tuple(children: Vec<TypeExpr>) -> TypeExpr {
        assert!(
            !children.is_empty(),
            "tuple types have at least one component"
        );
        TypeExpr::Tuple(children)
    }

    /// The uniform type of a given arity and order: order 1 is `i`, order
    /// `r > 1` is an `arity`-tuple of the uniform type one order down.
    pub fn uniform(arity: usize, order: u32) -> TypeExpr {
        assert!(arity >= 1 && order >= 1);
        if order == 1 {
            TypeExpr::Iota
        } else {
            TypeExpr::Tuple(vec![TypeExpr::uniform(arity, order - 1); arity])
        }
    }

    /// The monadic chain: `i` wrapped in `depth` single-component tuples.
    pub fn monadic(order: u32) -> TypeExpr {
        TypeExpr::uniform(1, order)
    }

    pub fn order(&self) -> u32 {
        match self {
            TypeExpr::Iota => 1,
            TypeExpr::Tuple(children) => {
                1 + children
                    .iter()
                    .map(TypeExpr::order)
                    .max()
                    .expect("non-empty")
            }
        }
    }

    /// Number of components; 1 for `i`.
    pub fn arity(&self) -> usize {
        match self {
            TypeExpr::Iota => 1,
            TypeExpr::Tuple(children) => children.len(),
        }
    }

    pub fn children(&self) -> &[TypeExpr] {
        match self {
            TypeExpr::Iota => &[],
            TypeExpr::Tuple(children) => children,
        }
    }

    pub fn is_iota(&self) -> bool {
        matches!(self, TypeExpr::Iota)
    }

    /// True when the type is `i`, `(i)`, `((i))`, ...: every tuple on the
    /// chain has exactly one component.
    pub fn is_monadic_chain(&self) -> bool {
        match self {
            TypeExpr::Iota => true,
            TypeExpr::Tuple(children) => children.len() == 1 && children[0].is_monadic_chain(),
        }
    }

    /// True when the type equals `uniform(a, r)` for some `a`, `r`: all
    /// children are identical and themselves uniform.
    pub fn is_uniform(&self) -> bool {
        match self {
            TypeExpr::Iota => true,
            TypeExpr::Tuple(children) => {
                children.iter().all(|c| c == &children[0]) && children[0].is_uniform()
            }
        }
    }

    /// True when every tuple along the type has children exactly one order
    /// below it (the "single step" shape).
    pub fn is_step_form(&self) -> bool {
        match self {
            TypeExpr::Iota => true,
            TypeExpr::Tuple(children) => {
                let q = self.order();
                children
                    .iter()
                    .all(|c| c.order() == q - 1 && c.is_step_form())
            }
        }
    }

    /// The largest tuple width appearing anywhere in the type; 1 for `i`.
    pub fn max_tuple_size(&self) -> usize {
        match self {
            TypeExpr::Iota => 1,
            TypeExpr::Tuple(children) => children
                .iter()
                .map(TypeExpr::max_tuple_size)
                .max()
                .expect("non-empty")
                .max(children.len()),
        }
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeExpr::Iota => write!(f, "i"),
            TypeExpr::Tuple(children) => {
                write!(f, "(")?;
                for (k, c) in children.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}
