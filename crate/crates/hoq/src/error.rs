//! Error types shared across the crate.

use thiserror::Error;

use crate::types::TypeExpr;

/// Byte and line/column extent of a token or parse error inside the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
}

/// Violations of the value invariants (component types, element ranges).
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ValueError {
    #[error("element {index} is outside the universe of size {universe}")]
    ElementOutOfRange { index: u64, universe: u64 },
    #[error("tuple has {found} components where type {ty} expects {expected}")]
    TupleArity {
        ty: TypeExpr,
        expected: usize,
        found: usize,
    },
    #[error("component does not match type {expected}")]
    ComponentType { expected: TypeExpr },
    #[error("a set value cannot have type i")]
    SetAtIota,
    #[error("an element value cannot have tuple type {ty}")]
    ElementAtTuple { ty: TypeExpr },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("universe size must be at least 1")]
    EmptyUniverse,
    #[error("duplicate vocabulary symbol {0}")]
    DuplicateSymbol(String),
    #[error("symbol {0} is interpreted but not declared")]
    UndeclaredSymbol(String),
    #[error("symbol {0} has no interpretation")]
    MissingInterpretation(String),
    #[error("symbol {symbol}: {source}")]
    BadValue { symbol: String, source: ValueError },
    #[error("symbol {symbol}: malformed value for type {ty}: {detail}")]
    MalformedValue {
        symbol: String,
        ty: TypeExpr,
        detail: String,
    },
    #[error("cannot parse type string {0:?}")]
    BadTypeString(String),
    #[error("malformed structure document: {0}")]
    BadDocument(String),
}

/// Scope and typing violations detected by the checker.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TypeError {
    #[error("unbound variable {name} at {location}")]
    UnboundVariable { name: String, location: String },
    #[error("type mismatch at {location}: expected {expected}, found {found}")]
    TypeMismatch {
        location: String,
        expected: TypeExpr,
        found: TypeExpr,
    },
    #[error("arity mismatch at {location}: head takes {expected} arguments, found {found}")]
    ArityMismatch {
        location: String,
        expected: usize,
        found: usize,
    },
    #[error("{name} has type i and cannot be applied, at {location}")]
    AppliedElement { name: String, location: String },
    #[error("nondeterministic fixed point under negation at {location}")]
    NegatedNondeterministicFixpoint { location: String },
    #[error("operator tuples at {location} have mismatched shapes")]
    OperatorShape { location: String },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("search space of {what} is {size} which exceeds the limit {limit}")]
    SearchSpaceTooLarge {
        what: String,
        size: String,
        limit: u64,
    },
    #[error("unbound symbol {0}")]
    UnboundSymbol(String),
    #[error("value bound to {name} does not have the expected type {expected}")]
    BindingType { name: String, expected: TypeExpr },
    #[error("count would exceed the {limit}-bit limit")]
    CountOverflow { limit: u64 },
}

/// Errors from the canonical bit-string codec.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("type {0} is not in arity normal form; normalize before encoding")]
    NotUniform(TypeExpr),
    #[error("code has {found} bits where type {ty} needs {expected}")]
    CodeLength {
        ty: TypeExpr,
        expected: u64,
        found: usize,
    },
    #[error("code denotes {value} but the universe has only {universe} elements")]
    DecodeOutOfRange { value: u64, universe: u64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NormalizeError {
    #[error("formula is not in prefix normal form")]
    NotPrenex,
    #[error("cannot rewrite occurrence of {name}: it appears as an argument of {head}")]
    BlockedOccurrence { name: String, head: String },
    #[error("normalization did not stabilize within {0} rounds")]
    NoFixpoint(usize),
    #[error("vocabulary symbol {name} has non-uniform type {ty}; cannot build a padded copy")]
    NonUniformSymbol { name: String, ty: TypeExpr },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ReduceError {
    #[error("vocabulary has no first-order total order symbol {0:?}")]
    MissingOrder(String),
    #[error("target universe would have {size} elements, over the limit {limit}")]
    TargetTooLarge { size: String, limit: u64 },
    #[error("operator {0} has no translation rule")]
    UnsupportedNode(String),
    #[error("symbol {0} would need order {1} in the target, which is not expressible")]
    BadSymbolOrder(String, u32),
    #[error("the order symbol must be interpreted as a strict total order")]
    NotTotalOrder,
    #[error(transparent)]
    Eval(#[from] EvalError),
}
