use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use jacobi_mimo_core::{QuadratureRule, Result, RuleSource, DEFAULT_NODES};

/// Thread-safe memo of Gauss–Jacobi rules keyed on `(a, b)` at a fixed node
/// count. Rules are immutable once built, so readers never block each other.
#[derive(Debug)]
pub struct RuleCache {
    nodes: usize,
    rules: RwLock<HashMap<(u32, u32), Arc<QuadratureRule>>>,
}

impl RuleCache {
    pub fn new(nodes: usize) -> Self {
        Self {
            nodes,
            rules: RwLock::new(HashMap::new()),
        }
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn len(&self) -> usize {
        self.rules.read().expect("rule cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Default for RuleCache {
    fn default() -> Self {
        Self::new(DEFAULT_NODES)
    }
}

impl RuleSource for RuleCache {
    fn rule(&self, a: u32, b: u32) -> Result<Arc<QuadratureRule>> {
        if let Some(rule) = self.rules.read().expect("rule cache poisoned").get(&(a, b)) {
            return Ok(Arc::clone(rule));
        }
        // built outside the lock; a racing builder produces the same rule
        let rule = Arc::new(QuadratureRule::gauss_jacobi(a, b, self.nodes)?);
        let mut rules = self.rules.write().expect("rule cache poisoned");
        Ok(Arc::clone(rules.entry((a, b)).or_insert(rule)))
    }
}
