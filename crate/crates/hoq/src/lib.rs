//! A workbench for higher-order logic over finite structures.
//!
//! The crate provides:
//!
//! * a typed formula language with seven transitive-closure and fixed-point
//!   operators ([`formula`], [`parse`], [`mod@print`]),
//! * structures over finite universes and their file format ([`structure`]),
//! * canonical bit-string codes for higher-order relations together with the
//!   cardinality functions that size them ([`encode`]),
//! * a truth evaluator with explicit quantifier expansion ([`eval`]),
//! * semantics-preserving rewrites into prefix / step / arity / decreasing
//!   normal forms ([`normalize`]),
//! * generators for reusable arithmetic predicates over relation codes
//!   ([`gen`]),
//! * an order-lowering translation of formulas and structures ([`reduce`]),
//! * and a brute-force reference oracle used for cross-checking ([`oracle`]).
//!
//! Everything is exact and guarded: the counting functions grow as towers of
//! exponentials, so all search spaces are bounded by configurable [`limits`].
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod classify;
pub mod encode;
pub mod error;
pub mod eval;
pub mod formula;
pub mod gen;
pub mod limits;
pub mod normalize;
pub mod oracle;
pub mod parse;
pub mod print;
pub mod reduce;
pub mod relation;
pub mod structure;
pub mod typecheck;
pub mod types;

pub use error::{EvalError, ParseError, StructureError, TypeError, ValueError};
pub use formula::{Formula, QuantKind, Term};
pub use limits::Limits;
pub use relation::RelationValue;
pub use structure::{Structure, Vocabulary};
pub use types::TypeExpr;
