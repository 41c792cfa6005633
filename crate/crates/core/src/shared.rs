//! Snapshot isolation for graphs shared between threads.
//!
//! Readers take an immutable [`Arc<Graph>`] snapshot; a writer works on a
//! private copy and publishes it with a single pointer swap, so no reader
//! ever sees half of a write.

use std::sync::{Arc, Mutex, PoisonError, RwLock};

use crate::store::Graph;

#[derive(Debug, Default)]
pub struct SharedGraph {
    current: RwLock<Arc<Graph>>,
    writer: Mutex<()>,
}

impl SharedGraph {
    pub fn new(graph: Graph) -> Self {
        SharedGraph {
            current: RwLock::new(Arc::new(graph)),
            writer: Mutex::new(()),
        }
    }

    /// The last published version.
    pub fn snapshot(&self) -> Arc<Graph> {
        self.current
            .read()
            .unwrap_or_else(PoisonError::into_inner)
            .clone()
    }

    /// Applies `f` to a copy of the current graph and publishes the result.
    /// Writers are serialized; if `f` panics nothing is published.
    pub fn write<T>(&self, f: impl FnOnce(&mut Graph) -> T) -> T {
        let _guard = self.writer.lock().unwrap_or_else(PoisonError::into_inner);
        let mut next = Graph::clone(&self.snapshot());
        let out = f(&mut next);
        *self.current.write().unwrap_or_else(PoisonError::into_inner) = Arc::new(next);
        out
    }
}
