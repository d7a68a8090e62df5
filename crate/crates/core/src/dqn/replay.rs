use std::collections::VecDeque;

use crate::numerics::RngStream;

/// One transition `⟨s, a, r, s′⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Experience<T> {
    pub state: Vec<T>,
    pub action: usize,
    pub reward: T,
    pub next_state: Vec<T>,
}

/// Bounded FIFO of experiences.
#[derive(Debug, Clone)]
pub struct ExperiencePool<T> {
    capacity: usize,
    items: VecDeque<Experience<T>>,
}

impl<T> ExperiencePool<T> {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity,
            items: VecDeque::with_capacity(capacity),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn push(&mut self, exp: Experience<T>) {
        if self.capacity == 0 {
            return;
        }
        if self.items.len() == self.capacity {
            self.items.pop_front();
        }
        self.items.push_back(exp);
    }

    /// Oldest first.
    pub fn iter(&self) -> impl Iterator<Item = &Experience<T>> {
        self.items.iter()
    }

    /// Uniform sample without replacement; empty while the pool holds fewer than `batch`.
    pub fn sample(&self, batch: usize, stream: &mut RngStream) -> Vec<&Experience<T>> {
        if batch == 0 || self.items.len() < batch {
            return Vec::new();
        }
        stream
            .sample_indices(self.items.len(), batch)
            .into_iter()
            .map(|i| &self.items[i])
            .collect()
    }
}
