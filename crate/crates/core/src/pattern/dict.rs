//! Word dictionaries referenced by `dict:` pattern elements.
//!
//! A dictionary groups lemmas with similar usage so a single pattern
//! position can stand for any of them. Dictionaries are plain data files
//! (`<name>.txt`, one lemma per line) so maintainers can extend them
//! without rebuilding.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::PatternError;

/// A named set of lowercase lemmas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dictionary {
    name: String,
    lemmas: BTreeSet<String>,
}

impl Dictionary {
    /// Lemmas are lowercased and deduplicated; an empty set is rejected.
    pub fn new<I, S>(name: impl Into<String>, lemmas: I) -> Result<Dictionary, PatternError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let name = name.into();
        let lemmas: BTreeSet<String> = lemmas
            .into_iter()
            .map(|l| l.as_ref().trim().to_lowercase())
            .filter(|l| !l.is_empty())
            .collect();
        if lemmas.is_empty() {
            return Err(PatternError::EmptyDictionary { path: name });
        }
        Ok(Dictionary { name, lemmas })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.lemmas.contains(lemma)
    }

    pub fn len(&self) -> usize {
        self.lemmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lemmas.is_empty()
    }

    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.lemmas.iter().map(|s| s.as_str())
    }
}

/// All loaded dictionaries, keyed by name.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DictionaryRegistry {
    dicts: BTreeMap<String, Dictionary>,
}

impl DictionaryRegistry {
    pub fn new() -> DictionaryRegistry {
        DictionaryRegistry::default()
    }

    pub fn insert(&mut self, dict: Dictionary) -> Result<(), PatternError> {
        if self.dicts.contains_key(dict.name()) {
            return Err(PatternError::DuplicateDictionary {
                name: dict.name().to_string(),
            });
        }
        self.dicts.insert(dict.name().to_string(), dict);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Dictionary> {
        self.dicts.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.dicts.keys().map(|s| s.as_str())
    }

    pub fn len(&self) -> usize {
        self.dicts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dicts.is_empty()
    }

    /// Parses dictionary text (one lemma per line) under the given name and
    /// adds it to the registry.
    pub fn insert_text(&mut self, name: &str, text: &str) -> Result<(), PatternError> {
        self.insert(Dictionary::new(name, text.lines())?)
    }
}

/// Loads every `<name>.txt` file in a directory into a registry, keyed by
/// file stem. Files are read in name order.
pub fn load_dictionaries(dir: impl AsRef<Path>) -> Result<DictionaryRegistry, PatternError> {
    let dir = dir.as_ref();
    let io_err = |e: std::io::Error| PatternError::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    };
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(io_err)?
        .collect::<Result<Vec<_>, _>>()
        .map_err(io_err)?
        .into_iter()
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|ext| ext == "txt"))
        .collect();
    paths.sort();

    let mut registry = DictionaryRegistry::new();
    for path in paths {
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or_default()
            .to_string();
        let text = fs::read_to_string(&path).map_err(|e| PatternError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let dict = Dictionary::new(&name, text.lines()).map_err(|e| match e {
            PatternError::EmptyDictionary { .. } => PatternError::EmptyDictionary {
                path: path.display().to_string(),
            },
            other => other,
        })?;
        registry.insert(dict)?;
    }
    Ok(registry)
}
