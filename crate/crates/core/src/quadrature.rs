//! Gauss–Jacobi quadrature for the weight `(1-x)^a (1+x)^b` on `[-1, 1]`.
//!
//! Rules are built with the Golub–Welsch method: the Jacobi matrix of the
//! monic recurrence is diagonalized, its eigenvalues are the nodes and the
//! squared first eigenvector components times the weight mass are the
//! weights.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use core::cell::RefCell;

use crate::error::{Error, Result};
use crate::jacobi::weight_mass;
use crate::tridiag::symmetric_tridiagonal_ql;

/// Node count used for every capacity integral unless overridden.
pub const DEFAULT_NODES: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    a: u32,
    b: u32,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// `n`-point Gauss–Jacobi rule, exact for polynomials of degree `2n - 1`.
    pub fn gauss_jacobi(a: u32, b: u32, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("quadrature rule needs at least one node"));
        }
        let (af, bf) = (f64::from(a), f64::from(b));
        let ab = af + bf;

        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n.saturating_sub(1)];
        diag[0] = (bf - af) / (ab + 2.0);
        for k in 1..n {
            let kf = k as f64;
            let s = 2.0 * kf + ab;
            diag[k] = (bf * bf - af * af) / (s * (s + 2.0));
            let num = 4.0 * kf * (kf + af) * (kf + bf) * (kf + ab);
            let den = s * s * (s + 1.0) * (s - 1.0);
            off[k - 1] = libm::sqrt(num / den);
        }

        let mut first = vec![0.0; n];
        first[0] = 1.0;
        symmetric_tridiagonal_ql(&mut diag, &mut off, Some(&mut first))?;

        let mass = weight_mass(a, b);
        let weights = first.iter().map(|z| mass * z * z).collect();
        Ok(Self {
            a,
            b,
            nodes: diag,
            weights,
        })
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `sum_i w_i f(x_i)`; fails on the first node where `f` is not finite.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> Result<f64> {
        let mut acc = 0.0;
        for (index, (x, w)) in self.points().enumerate() {
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::NonFiniteIntegrand { index, x });
            }
            acc += w * v;
        }
        Ok(acc)
    }

    /// Fails unless this rule carries the weight `(1-x)^a (1+x)^b`.
    pub fn check_weight(&self, a: u32, b: u32) -> Result<()> {
        if self.a == a && self.b == b {
            Ok(())
        } else {
            Err(Error::RuleMismatch {
                rule_a: self.a,
                rule_b: self.b,
                a,
                b,
            })
        }
    }
}

/// `build_rule(a, b, n)` as a free function.
pub fn build_rule(a: u32, b: u32, n_nodes: usize) -> Result<QuadratureRule> {
    QuadratureRule::gauss_jacobi(a, b, n_nodes)
}

/// Supplies quadrature rules by weight exponents. Implementations decide the
/// node count and whether to cache.
pub trait RuleSource {
    fn rule(&self, a: u32, b: u32) -> Result<Arc<QuadratureRule>>;
}

impl<T: RuleSource + ?Sized> RuleSource for &T {
    fn rule(&self, a: u32, b: u32) -> Result<Arc<QuadratureRule>> {
        (**self).rule(a, b)
    }
}

/// Builds a new rule on every request.
#[derive(Debug, Clone, Copy)]
pub struct FreshRules {
    pub nodes: usize,
}

impl Default for FreshRules {
    fn default() -> Self {
        Self {
            nodes: DEFAULT_NODES,
        }
    }
}

impl RuleSource for FreshRules {
    fn rule(&self, a: u32, b: u32) -> Result<Arc<QuadratureRule>> {
        QuadratureRule::gauss_jacobi(a, b, self.nodes).map(Arc::new)
    }
}

/// Single-threaded memo of rules keyed on `(a, b)` at a fixed node count.
#[derive(Debug)]
pub struct LocalRuleCache {
    nodes: usize,
    rules: RefCell<BTreeMap<(u32, u32), Arc<QuadratureRule>>>,
}

impl LocalRuleCache {
    pub fn new(nodes: usize) -> Self {
        Self {
            nodes,
            rules: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }
}

impl Default for LocalRuleCache {
    fn default() -> Self {
        Self::new(DEFAULT_NODES)
    }
}

impl RuleSource for LocalRuleCache {
    fn rule(&self, a: u32, b: u32) -> Result<Arc<QuadratureRule>> {
        if let Some(rule) = self.rules.borrow().get(&(a, b)) {
            return Ok(Arc::clone(rule));
        }
        let rule = Arc::new(QuadratureRule::gauss_jacobi(a, b, self.nodes)?);
        self.rules.borrow_mut().insert((a, b), Arc::clone(&rule));
        Ok(rule)
    }
}
