//! Name-keyed registries of strategy objects selected at run time.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: BTreeMap<&'static str, Box<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry { kind, entries: BTreeMap::new() }
    }

    /// Adds `entry` under `name`, replacing any previous entry.
    pub fn register(&mut self, name: &'static str, entry: Box<T>) -> &mut Self {
        self.entries.insert(name, entry);
        self
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::Unknown { kind: self.kind, name: name.to_string() })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &T)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, v.as_ref()))
    }
}
