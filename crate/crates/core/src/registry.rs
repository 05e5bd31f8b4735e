//! Name-keyed registries of interchangeable strategies.
//!
//! Several families of algorithms are selected at runtime by a string
//! (weight functions, algebroid kinds, field variants, stem sources,
//! renderers, check suites). Each family is a trait; implementations are
//! registered under a name and looked up through a [`Registry`].

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{CoreError, Result};

pub struct Registry<T: ?Sized> {
    entries: BTreeMap<String, Arc<T>>,
}

impl<T: ?Sized> Default for Registry<T> {
    fn default() -> Self {
        Registry { entries: BTreeMap::new() }
    }
}

impl<T: ?Sized> Registry<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, name: &str, item: Arc<T>) {
        self.entries.insert(name.to_string(), item);
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>> {
        self.entries
            .get(name)
            .cloned()
            .ok_or_else(|| CoreError::UnknownName(name.to_string()))
    }

    /// Registered names in sorted order.
    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(|s| s.as_str()).collect()
    }
}
