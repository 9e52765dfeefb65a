//! Finite posets of classical contexts, closed under intersection.
//!
//! The poset of a seed family is its closure under pairwise intersection
//! together with the bottom context `C·1`, ordered by subalgebra
//! inclusion. Contexts are stored in one canonical linear order (atom
//! count ascending, ties broken lexicographically), which is automatically
//! a linear extension of the inclusion order — a strictly smaller
//! subalgebra has strictly fewer atoms. The bottom always sits at index 0.
//!
//! For every comparable pair the poset keeps the refinement map sending
//! each atom of the coarser context to the set of finer atoms composing
//! it; these maps compose functorially along chains.

use crate::context::{intersect, refinement_map, Context};
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Largest atom count a context may have for frame bitmask operations.
pub const MAX_ATOMS: usize = 64;

#[derive(Clone, PartialEq, Eq)]
pub struct ContextPoset {
    n: usize,
    contexts: Vec<Context>,
    leq: Vec<Vec<bool>>,
    /// refinement maps for every comparable pair `(i, j)` with `i <= j`,
    /// including the identity maps on the diagonal
    refinement: BTreeMap<(usize, usize), Vec<Vec<usize>>>,
}

impl ContextPoset {
    /// Closes the seed family under pairwise intersection, adds the bottom
    /// context, orders everything canonically, and computes the inclusion
    /// relation and refinement maps.
    pub fn build(seeds: &[Context]) -> Result<Arc<Self>> {
        let Some(first) = seeds.first() else {
            return Err(Error::InvalidArgument("no seed contexts given".into()));
        };
        let n = first.ambient_dim();
        for c in seeds {
            if c.ambient_dim() != n {
                return Err(Error::Dimension("seed contexts have mixed ambient dimensions".into()));
            }
        }
        let mut contexts: Vec<Context> = vec![Context::bottom(n)];
        for c in seeds {
            if !contexts.contains(c) {
                contexts.push(c.clone());
            }
        }
        // worklist closure under pairwise intersection
        let mut i = 0;
        while i < contexts.len() {
            let mut fresh = Vec::new();
            for j in 0..contexts.len() {
                let meet = intersect(&contexts[i], &contexts[j])?;
                if !contexts.contains(&meet) && !fresh.contains(&meet) {
                    fresh.push(meet);
                }
            }
            contexts.extend(fresh);
            i += 1;
        }
        contexts.sort_by(|a, b| a.canonical_cmp(b));
        Self::from_closed_contexts(n, contexts)
    }

    /// Validates an already closed, canonically sorted context list and
    /// derives the order data. This is the single constructor every load
    /// path funnels through.
    pub fn from_closed_contexts(n: usize, contexts: Vec<Context>) -> Result<Arc<Self>> {
        if contexts.is_empty() {
            return Err(Error::InvalidPoset("no contexts".into()));
        }
        for c in &contexts {
            if c.ambient_dim() != n {
                return Err(Error::InvalidPoset("mixed ambient dimensions".into()));
            }
            if c.atom_count() > MAX_ATOMS {
                return Err(Error::InvalidPoset(format!(
                    "a context with more than {MAX_ATOMS} atoms is not supported"
                )));
            }
        }
        if !contexts[0].is_bottom() {
            return Err(Error::InvalidPoset("bottom context C·1 missing or not at index 0".into()));
        }
        for w in contexts.windows(2) {
            match w[0].canonical_cmp(&w[1]) {
                std::cmp::Ordering::Less => {}
                std::cmp::Ordering::Equal => {
                    return Err(Error::InvalidPoset("duplicate context".into()))
                }
                std::cmp::Ordering::Greater => {
                    return Err(Error::InvalidPoset("contexts not in canonical order".into()))
                }
            }
        }
        let m = contexts.len();
        let mut leq = vec![vec![false; m]; m];
        let mut refinement = BTreeMap::new();
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    leq[i][j] = true;
                    refinement.insert((i, j), (0..contexts[i].atom_count()).map(|a| vec![a]).collect());
                } else if let Some(map) = refinement_map(&contexts[i], &contexts[j])? {
                    leq[i][j] = true;
                    refinement.insert((i, j), map);
                }
            }
        }
        // intersection-closedness of the supplied family
        for i in 0..m {
            for j in (i + 1)..m {
                let meet = intersect(&contexts[i], &contexts[j])?;
                if !contexts.contains(&meet) {
                    return Err(Error::InvalidPoset(format!(
                        "not closed under intersection: contexts {i} and {j}"
                    )));
                }
            }
        }
        Ok(Arc::new(ContextPoset { n, contexts, leq, refinement }))
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.contexts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contexts.is_empty()
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    pub fn context(&self, i: usize) -> &Context {
        &self.contexts[i]
    }

    /// Index 0 by construction.
    pub fn bottom_index(&self) -> usize {
        0
    }

    pub fn index_of(&self, c: &Context) -> Option<usize> {
        self.contexts
            .binary_search_by(|probe| probe.canonical_cmp(c))
            .ok()
    }

    /// Inclusion of subalgebras: is context `i` coarser than context `j`?
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn leq_matrix(&self) -> &[Vec<bool>] {
        &self.leq
    }

    /// Refinement map for `i <= j`: atom `a` of context `i` is the sum of
    /// the atoms of context `j` listed in `map[a]`.
    pub fn refinement(&self, i: usize, j: usize) -> Option<&Vec<Vec<usize>>> {
        self.refinement.get(&(i, j))
    }

    /// Indices of the up-set of `i` (contexts refining `i`), ascending;
    /// includes `i` itself.
    pub fn up_set(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.leq[i][j]).collect()
    }

    /// Pushes an atom bitmask of context `i` forward along the refinement
    /// map into context `j`; `None` when `i` is not below `j`.
    pub fn refine_mask(&self, i: usize, j: usize, mask: u64) -> Option<u64> {
        let map = self.refinement.get(&(i, j))?;
        let mut out = 0u64;
        for (atom, parts) in map.iter().enumerate() {
            if mask >> atom & 1 == 1 {
                for &p in parts {
                    out |= 1 << p;
                }
            }
        }
        Some(out)
    }

    /// Number of atoms of context `i`.
    pub fn atom_count(&self, i: usize) -> usize {
        self.contexts[i].atom_count()
    }
}

impl std::fmt::Debug for ContextPoset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ContextPoset(n={}, contexts={}, types=[{}])",
            self.n,
            self.contexts.len(),
            self.contexts
                .iter()
                .map(|c| c.partition_type().to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

/// Structural equality of the underlying posets, used to let two
/// independently loaded copies of the same poset interoperate.
pub fn same_poset(a: &Arc<ContextPoset>, b: &Arc<ContextPoset>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}
