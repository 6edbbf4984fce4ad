use std::collections::BTreeSet;

use indexmap::IndexMap;

/// Hard clustering: each document id mapped to one topic, in corpus order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    topics: IndexMap<String, usize>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts or replaces the topic of `id`.
    pub fn insert(&mut self, id: impl Into<String>, topic: usize) {
        self.topics.insert(id.into(), topic);
    }

    pub fn get(&self, id: &str) -> Option<usize> {
        self.topics.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.topics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.topics.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.topics.iter().map(|(id, &t)| (id.as_str(), t))
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.topics.keys().map(String::as_str)
    }

    /// Topics that hold at least one document, ascending.
    pub fn used_topics(&self) -> BTreeSet<usize> {
        self.topics.values().copied().collect()
    }

    /// Ids assigned to `topic`, in corpus order.
    pub fn members(&self, topic: usize) -> impl Iterator<Item = &str> {
        self.iter()
            .filter(move |&(_, t)| t == topic)
            .map(|(id, _)| id)
    }
}

impl<S: Into<String>> FromIterator<(S, usize)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (S, usize)>>(iter: I) -> Self {
        Assignment {
            topics: iter.into_iter().map(|(id, t)| (id.into(), t)).collect(),
        }
    }
}
