//! Memoized, possibly fallible, infinite sequences.
//!
//! A cache fill is idempotent: the same index always yields the same value, and
//! failed computations are not cached, so a retry recomputes them.

use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::Result;

type IndexedFn<T> = dyn Fn(usize) -> Result<T> + Send + Sync;
type StepFn<T> = dyn Fn(usize, &[T]) -> Result<T> + Send + Sync;

enum Source<T> {
    /// Each term is computed independently; the cache is sparse.
    Indexed(Box<IndexedFn<T>>),
    /// Term `n` is computed from all earlier terms; the cache is dense.
    Sequential(Box<StepFn<T>>),
}

struct Inner<T> {
    source: Source<T>,
    cache: Mutex<Vec<Option<T>>>,
}

pub struct LazySeq<T> {
    inner: Arc<Inner<T>>,
}

impl<T> Clone for LazySeq<T> {
    fn clone(&self) -> Self {
        LazySeq { inner: Arc::clone(&self.inner) }
    }
}

impl<T> fmt::Debug for LazySeq<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.inner.cache.lock().map(|c| c.len()).unwrap_or(0);
        write!(f, "LazySeq(<{n} cached>)")
    }
}

impl<T: Clone + Send + 'static> LazySeq<T> {
    pub fn indexed(f: impl Fn(usize) -> Result<T> + Send + Sync + 'static) -> Self {
        Self::with_source(Source::Indexed(Box::new(f)))
    }

    pub fn sequential(f: impl Fn(usize, &[T]) -> Result<T> + Send + Sync + 'static) -> Self {
        Self::with_source(Source::Sequential(Box::new(f)))
    }

    fn with_source(source: Source<T>) -> Self {
        LazySeq { inner: Arc::new(Inner { source, cache: Mutex::new(Vec::new()) }) }
    }

    pub fn get(&self, n: usize) -> Result<T> {
        let mut cache = self.inner.cache.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(Some(v)) = cache.get(n) {
            return Ok(v.clone());
        }
        match &self.inner.source {
            Source::Indexed(f) => {
                let v = f(n)?;
                if cache.len() <= n {
                    cache.resize(n + 1, None);
                }
                cache[n] = Some(v.clone());
                Ok(v)
            }
            Source::Sequential(f) => {
                let mut done: Vec<T> = cache.iter().map_while(|x| x.clone()).collect();
                while done.len() <= n {
                    let i = done.len();
                    let v = f(i, &done)?;
                    if cache.len() <= i {
                        cache.push(Some(v.clone()));
                    }
                    done.push(v);
                }
                Ok(done[n].clone())
            }
        }
    }

    /// The first `n` terms.
    pub fn prefix(&self, n: usize) -> Result<Vec<T>> {
        if n == 0 {
            return Ok(Vec::new());
        }
        if let Source::Sequential(_) = self.inner.source {
            self.get(n - 1)?;
        }
        (0..n).map(|i| self.get(i)).collect()
    }
}
