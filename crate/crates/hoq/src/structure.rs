//! Vocabularies, finite structures, and the structure file format.
//!
//! Structure files are JSON documents:
//!
//! ```json
//! {
//!   "universe": 3,
//!   "vocabulary": { "E": "(i,i)" },
//!   "interpretation": { "E": [[0, 1], [1, 2]] }
//! }
//! ```
//!
//! An `i`-typed symbol (a constant) is interpreted by a bare natural; a
//! tuple-typed symbol by an array of tuples, each tuple an array of
//! component values nested by the same rule. Duplicate tuples collapse to
//! one set member.

use std::collections::BTreeMap;

use serde_json::Value as Json;

use crate::error::StructureError;
use crate::parse::parse_type;
use crate::relation::RelationValue;
use crate::types::TypeExpr;

/// An ordered list of named, typed relation symbols.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vocabulary {
    symbols: Vec<(String, TypeExpr)>,
}

impl Vocabulary {
    pub fn new(symbols: Vec<(String, TypeExpr)>) -> Result<Vocabulary, StructureError> {
        let mut seen = std::collections::BTreeSet::new();
        for (name, _) in &symbols {
            if !seen.insert(name.clone()) {
                return Err(StructureError::DuplicateSymbol(name.clone()));
            }
        }
        Ok(Vocabulary { symbols })
    }

    pub fn empty() -> Vocabulary {
        Vocabulary::default()
    }

    pub fn get(&self, name: &str) -> Option<&TypeExpr> {
        self.symbols.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &TypeExpr)> {
        self.symbols.iter().map(|(n, t)| (n.as_str(), t))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn with_symbol(
        &self,
        name: impl Into<String>,
        ty: TypeExpr,
    ) -> Result<Vocabulary, StructureError> {
        let mut symbols = self.symbols.clone();
        symbols.push((name.into(), ty));
        Vocabulary::new(symbols)
    }
}

/// A finite structure: a universe `[0, n)` plus one relation value per
/// vocabulary symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    pub universe: u64,
    interpretations: BTreeMap<String, RelationValue>,
}

impl Structure {
    pub fn new(universe: u64) -> Result<Structure, StructureError> {
        if universe == 0 {
            return Err(StructureError::EmptyUniverse);
        }
        Ok(Structure {
            universe,
            interpretations: BTreeMap::new(),
        })
    }

    pub fn with(mut self, name: impl Into<String>, value: RelationValue) -> Structure {
        self.interpretations.insert(name.into(), value);
        self
    }

    pub fn get(&self, name: &str) -> Option<&RelationValue> {
        self.interpretations.get(name)
    }

    pub fn interpretations(&self) -> impl Iterator<Item = (&str, &RelationValue)> {
        self.interpretations.iter().map(|(n, v)| (n.as_str(), v))
    }

    /// Checks that every vocabulary symbol is interpreted at its declared
    /// type with all elements inside the universe.
    pub fn validate(&self, vocab: &Vocabulary) -> Result<(), StructureError> {
        for (name, ty) in vocab.iter() {
            let value = self
                .get(name)
                .ok_or_else(|| StructureError::MissingInterpretation(name.to_string()))?;
            value
                .validate(ty, self.universe)
                .map_err(|source| StructureError::BadValue {
                    symbol: name.to_string(),
                    source,
                })?;
        }
        Ok(())
    }
}

fn json_to_value(
    symbol: &str,
    ty: &TypeExpr,
    json: &Json,
) -> Result<RelationValue, StructureError> {
    let malformed = |detail: &str| StructureError::MalformedValue {
        symbol: symbol.to_string(),
        ty: ty.clone(),
        detail: detail.to_string(),
    };
    match ty {
        TypeExpr::Iota => json
            .as_u64()
            .map(RelationValue::Element)
            .ok_or_else(|| malformed("expected a natural number")),
        TypeExpr::Tuple(children) => {
            let rows = json
                .as_array()
                .ok_or_else(|| malformed("expected an array of tuples"))?;
            let mut tuples = Vec::with_capacity(rows.len());
            for row in rows {
                let parts = row
                    .as_array()
                    .ok_or_else(|| malformed("expected a tuple array"))?;
                if parts.len() != children.len() {
                    return Err(malformed(&format!(
                        "tuple has {} components, type wants {}",
                        parts.len(),
                        children.len()
                    )));
                }
                let tuple = parts
                    .iter()
                    .zip(children)
                    .map(|(part, cty)| json_to_value(symbol, cty, part))
                    .collect::<Result<Vec<_>, _>>()?;
                tuples.push(tuple);
            }
            Ok(RelationValue::set(ty.clone(), tuples))
        }
    }
}

fn value_to_json(value: &RelationValue) -> Json {
    match value {
        RelationValue::Element(e) => Json::from(*e),
        RelationValue::Set { tuples, .. } => Json::Array(
            tuples
                .iter()
                .map(|t| Json::Array(t.iter().map(value_to_json).collect()))
                .collect(),
        ),
    }
}

/// Parses a structure document, validating it against its own vocabulary.
pub fn structure_from_str(text: &str) -> Result<(Vocabulary, Structure), StructureError> {
    let doc: Json =
        serde_json::from_str(text).map_err(|e| StructureError::BadDocument(e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| StructureError::BadDocument("top level must be an object".into()))?;
    let universe = obj
        .get("universe")
        .and_then(Json::as_u64)
        .ok_or_else(|| StructureError::BadDocument("missing natural \"universe\"".into()))?;
    let mut structure = Structure::new(universe)?;

    let vocab_obj = obj
        .get("vocabulary")
        .and_then(Json::as_object)
        .ok_or_else(|| StructureError::BadDocument("missing object \"vocabulary\"".into()))?;
    let mut symbols = Vec::new();
    for (name, tystr) in vocab_obj {
        let text = tystr
            .as_str()
            .ok_or_else(|| StructureError::BadTypeString(tystr.to_string()))?;
        let ty = parse_type(text).map_err(|_| StructureError::BadTypeString(text.to_string()))?;
        symbols.push((name.clone(), ty));
    }
    let vocab = Vocabulary::new(symbols)?;

    let interp_obj = obj
        .get("interpretation")
        .and_then(Json::as_object)
        .ok_or_else(|| StructureError::BadDocument("missing object \"interpretation\"".into()))?;
    for (name, raw) in interp_obj {
        let ty = vocab
            .get(name)
            .ok_or_else(|| StructureError::UndeclaredSymbol(name.clone()))?;
        let value = json_to_value(name, ty, raw)?;
        structure = structure.with(name.clone(), value);
    }
    structure.validate(&vocab)?;
    Ok((vocab, structure))
}

/// Serializes a structure with its vocabulary back into document form.
/// Output is deterministic: symbols appear in sorted order.
pub fn structure_to_string(vocab: &Vocabulary, structure: &Structure) -> String {
    let mut vocab_map = serde_json::Map::new();
    let mut interp_map = serde_json::Map::new();
    let mut names: Vec<_> = vocab.iter().collect();
    names.sort_by(|a, b| a.0.cmp(b.0));
    for (name, ty) in names {
        vocab_map.insert(name.to_string(), Json::from(ty.to_string()));
        if let Some(value) = structure.get(name) {
            interp_map.insert(name.to_string(), value_to_json(value));
        }
    }
    let doc = serde_json::json!({
        "universe": structure.universe,
        "vocabulary": vocab_map,
        "interpretation": interp_map,
    });
    serde_json::to_string_pretty(&doc).expect("structure documents serialize")
}

/// Reads a structure file from disk.
pub fn load_structure(path: &std::path::Path) -> Result<(Vocabulary, Structure), StructureError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| StructureError::BadDocument(format!("{}: {e}", path.display())))?;
    structure_from_str(&text)
}
