//! The frame O(Σ) over a finite context poset and its Heyting algebra.
//!
//! An element of the frame assigns to each context a projection inside
//! that context — stored as a bitmask over the context's atoms — such
//! that the assignment grows along refinement: pushing the selection of a
//! coarser context into any finer one lands inside the finer selection.
//!
//! Meets and joins are pointwise on masks. Implication and negation
//! quantify over all finer contexts of the poset through the refinement
//! maps; on posets with incomparable maximal contexts this produces
//! genuinely intuitionistic behaviour (`¬¬S ≠ S`, `S ∨ ¬S ≠ ⊤`).

use crate::error::{Error, Result};
use crate::matrix::{matrix_membership, CMatrix};
use crate::poset::{same_poset, ContextPoset};
use std::collections::BTreeSet;
use std::sync::Arc;

/// All-ones bitmask for a context with `k` atoms (`k ≤ 64`).
pub(crate) fn full_mask(k: usize) -> u64 {
    debug_assert!(k <= 64);
    if k == 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// One element of the frame O(Σ): a monotone choice of a projection
/// `S(C) ∈ P(C)` for every context `C` of a fixed poset.
#[derive(Clone, PartialEq, Eq)]
pub struct SigmaOpen {
    poset: Arc<ContextPoset>,
    masks: Vec<u64>,
}

impl SigmaOpen {
    /// Validating constructor: one mask per context, within the context's
    /// atom range, monotone along every refinement of the poset.
    pub fn new(poset: Arc<ContextPoset>, masks: Vec<u64>) -> Result<Self> {
        let s = SigmaOpen { poset, masks };
        s.validate()?;
        Ok(s)
    }

    fn unchecked(poset: Arc<ContextPoset>, masks: Vec<u64>) -> Self {
        let s = SigmaOpen { poset, masks };
        debug_assert!(s.validate().is_ok());
        s
    }

    /// Re-checks both structural invariants; every constructor enforces
    /// them, so this is primarily a test oracle.
    pub fn validate(&self) -> Result<()> {
        if self.masks.len() != self.poset.len() {
            return Err(Error::NotMonotone(format!(
                "assignment covers {} contexts, poset has {}",
                self.masks.len(),
                self.poset.len()
            )));
        }
        for (i, &m) in self.masks.iter().enumerate() {
            if m & !full_mask(self.poset.atom_count(i)) != 0 {
                return Err(Error::NotMonotone(format!(
                    "mask at context {i} selects atoms beyond the context's {} atoms",
                    self.poset.atom_count(i)
                )));
            }
        }
        for i in 0..self.poset.len() {
            for j in 0..self.poset.len() {
                if i == j || !self.poset.leq(i, j) {
                    continue;
                }
                let image = self.poset.refine_mask(i, j, self.masks[i]).expect("comparable");
                if image & !self.masks[j] != 0 {
                    return Err(Error::NotMonotone(format!(
                        "selection at context {i} does not refine into context {j}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The top element: every atom of every context selected.
    pub fn top(poset: Arc<ContextPoset>) -> Self {
        let masks = (0..poset.len()).map(|i| full_mask(poset.atom_count(i))).collect();
        SigmaOpen::unchecked(poset, masks)
    }

    /// The bottom element: nothing selected anywhere.
    pub fn bot(poset: Arc<ContextPoset>) -> Self {
        let masks = vec![0; poset.len()];
        SigmaOpen::unchecked(poset, masks)
    }

    pub fn poset(&self) -> &Arc<ContextPoset> {
        &self.poset
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    /// Bitmask of selected atoms at context `i`.
    pub fn mask(&self, i: usize) -> u64 {
        self.masks[i]
    }

    /// Sorted atom indices selected at context `i`.
    pub fn atoms_at(&self, i: usize) -> Vec<usize> {
        (0..self.poset.atom_count(i)).filter(|&a| self.masks[i] >> a & 1 == 1).collect()
    }

    /// The projection `S(C_i)` as a matrix: the sum of the selected atoms.
    pub fn projection_at(&self, i: usize) -> CMatrix {
        let ctx = self.poset.context(i);
        let mut acc = CMatrix::zero(ctx.ambient_dim(), ctx.ambient_dim());
        for a in self.atoms_at(i) {
            acc = acc.add(&ctx.atoms()[a]).expect("same shape");
        }
        acc
    }

    pub fn is_top(&self) -> bool {
        (0..self.poset.len()).all(|i| self.masks[i] == full_mask(self.poset.atom_count(i)))
    }

    pub fn is_bot(&self) -> bool {
        self.masks.iter().all(|&m| m == 0)
    }

    fn check_same_poset(&self, other: &SigmaOpen) -> Result<()> {
        if same_poset(&self.poset, &other.poset) {
            Ok(())
        } else {
            Err(Error::PosetMismatch)
        }
    }

    /// Pointwise order: `self(C) ≤ other(C)` in every context.
    pub fn leq(&self, other: &SigmaOpen) -> Result<bool> {
        self.check_same_poset(other)?;
        Ok(self.masks.iter().zip(&other.masks).all(|(a, b)| a & !b == 0))
    }

    /// Pointwise meet `(S ∧ T)(C) = S(C) ∧ T(C)`.
    pub fn meet(&self, other: &SigmaOpen) -> Result<SigmaOpen> {
        self.check_same_poset(other)?;
        let masks = self.masks.iter().zip(&other.masks).map(|(a, b)| a & b).collect();
        Ok(SigmaOpen::unchecked(self.poset.clone(), masks))
    }

    /// Pointwise join `(S ∨ T)(C) = S(C) ∨ T(C)`.
    pub fn join(&self, other: &SigmaOpen) -> Result<SigmaOpen> {
        self.check_same_poset(other)?;
        let masks = self.masks.iter().zip(&other.masks).map(|(a, b)| a | b).collect();
        Ok(SigmaOpen::unchecked(self.poset.clone(), masks))
    }

    /// Heyting implication. At context `C` an atom is kept exactly when,
    /// in every finer context `D` of the poset, all of its refining atoms
    /// avoid `S(D) \ T(D)` — the largest element of `P(C)` whose image
    /// lies under `S(D)^⊥ ∨ T(D)` everywhere above `C`.
    pub fn heyting_implies(&self, other: &SigmaOpen) -> Result<SigmaOpen> {
        self.check_same_poset(other)?;
        let poset = &self.poset;
        let m = poset.len();
        let mut masks = vec![0u64; m];
        for (c, mask) in masks.iter_mut().enumerate() {
            for atom in 0..poset.atom_count(c) {
                let keep = (0..m).filter(|&d| poset.leq(c, d)).all(|d| {
                    let image = poset.refine_mask(c, d, 1 << atom).expect("comparable");
                    image & self.masks[d] & !other.masks[d] == 0
                });
                if keep {
                    *mask |= 1 << atom;
                }
            }
        }
        Ok(SigmaOpen::unchecked(poset.clone(), masks))
    }

    /// Heyting negation `¬S = (S → ⊥)`.
    pub fn heyting_neg(&self) -> SigmaOpen {
        let bot = SigmaOpen::bot(self.poset.clone());
        self.heyting_implies(&bot).expect("same poset")
    }

    /// Double negation, computed as `¬(¬S)`.
    pub fn double_neg(&self) -> SigmaOpen {
        self.heyting_neg().heyting_neg()
    }

    /// Double negation computed directly from its meet-of-joins form:
    /// first, for each context `D`, the least projection of `P(D)` lying
    /// above `S(E)` for every finer `E` (atom kept iff some refining atom
    /// is selected somewhere above `D`); then, for each `C`, the greatest
    /// projection of `P(C)` below all of those (atom kept iff its image
    /// lands inside the inner selection everywhere above `C`).
    pub fn double_neg_direct(&self) -> SigmaOpen {
        let poset = &self.poset;
        let m = poset.len();
        let mut inner = vec![0u64; m];
        for (d, sel) in inner.iter_mut().enumerate() {
            for atom in 0..poset.atom_count(d) {
                let hit = (0..m).filter(|&e| poset.leq(d, e)).any(|e| {
                    let image = poset.refine_mask(d, e, 1 << atom).expect("comparable");
                    image & self.masks[e] != 0
                });
                if hit {
                    *sel |= 1 << atom;
                }
            }
        }
        let mut masks = vec![0u64; m];
        for (c, mask) in masks.iter_mut().enumerate() {
            for atom in 0..poset.atom_count(c) {
                let keep = (0..m).filter(|&d| poset.leq(c, d)).all(|d| {
                    let image = poset.refine_mask(c, d, 1 << atom).expect("comparable");
                    image & !inner[d] == 0
                });
                if keep {
                    *mask |= 1 << atom;
                }
            }
        }
        SigmaOpen::unchecked(poset.clone(), masks)
    }
}

impl std::fmt::Debug for SigmaOpen {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = (0..self.poset.len())
            .map(|i| {
                let k = self.poset.atom_count(i);
                let bits: String =
                    (0..k).map(|a| if self.masks[i] >> a & 1 == 1 { '1' } else { '0' }).collect();
                format!("{i}:{bits}")
            })
            .collect();
        write!(f, "SigmaOpen({})", parts.join(" "))
    }
}

/// The basic open `χ_{↑D}`: full selection at every context refining `d`,
/// empty selection elsewhere.
pub fn chi_up(poset: &Arc<ContextPoset>, d: usize) -> Result<SigmaOpen> {
    if d >= poset.len() {
        return Err(Error::NotInPoset(format!(
            "context index {d} out of range for a poset of {} contexts",
            poset.len()
        )));
    }
    let masks = (0..poset.len())
        .map(|j| if poset.leq(d, j) { full_mask(poset.atom_count(j)) } else { 0 })
        .collect();
    Ok(SigmaOpen::unchecked(poset.clone(), masks))
}

/// The naive proposition of a single projection: `S_p(C) = p` when `p`
/// lies in `C`, and `0` otherwise. Monotone because membership persists
/// into finer contexts, but notoriously not a lattice map — see the
/// non-preservation tests.
pub fn s_p(poset: &Arc<ContextPoset>, p: &CMatrix) -> Result<SigmaOpen> {
    if !p.is_projection() {
        return Err(Error::NotProjection);
    }
    if p.rows() != poset.ambient_dim() {
        return Err(Error::Dimension(format!(
            "projection is {}×{}, poset ambient dimension is {}",
            p.rows(),
            p.cols(),
            poset.ambient_dim()
        )));
    }
    let mut masks = vec![0u64; poset.len()];
    for (i, ctx) in poset.contexts().iter().enumerate() {
        if let Some(coeffs) = matrix_membership(p, ctx.atoms())? {
            let mut mask = 0u64;
            for (a, coeff) in coeffs.iter().enumerate() {
                if coeff.is_one() {
                    mask |= 1 << a;
                } else {
                    debug_assert!(coeff.is_zero(), "projection coefficients are 0/1");
                }
            }
            masks[i] = mask;
        }
    }
    Ok(SigmaOpen::unchecked(poset.clone(), masks))
}

/// Ascending enumeration of the submasks of `free`, starting at 0.
fn next_submask(cur: u64, free: u64) -> Option<u64> {
    let next = (cur | !free).wrapping_add(1) & free;
    if next == 0 {
        None
    } else {
        Some(next)
    }
}

/// Every element of the finite frame, in ascending lexicographic order of
/// the mask vectors. Because the canonical context order is a linear
/// extension of inclusion, each context is constrained only by earlier
/// ones, so the search never dead-ends: at context `j` any superset of
/// the union of the refined earlier selections is a valid choice.
///
/// Errors with the element count cap when the frame is larger.
pub fn enumerate_frame(poset: &Arc<ContextPoset>, cap: usize) -> Result<Vec<SigmaOpen>> {
    let m = poset.len();
    let mut out: Vec<SigmaOpen> = Vec::new();
    let mut masks = vec![0u64; m];

    fn rec(
        poset: &Arc<ContextPoset>,
        masks: &mut Vec<u64>,
        level: usize,
        cap: usize,
        out: &mut Vec<SigmaOpen>,
    ) -> Result<()> {
        let m = poset.len();
        if level == m {
            if out.len() >= cap {
                return Err(Error::CapExceeded(cap));
            }
            out.push(SigmaOpen::unchecked(poset.clone(), masks.clone()));
            return Ok(());
        }
        let mut required = 0u64;
        for (i, &mask) in masks.iter().enumerate().take(level) {
            if poset.leq(i, level) {
                required |= poset.refine_mask(i, level, mask).expect("comparable");
            }
        }
        let free = full_mask(poset.atom_count(level)) & !required;
        let mut extra = 0u64;
        loop {
            masks[level] = required | extra;
            rec(poset, masks, level + 1, cap, out)?;
            match next_submask(extra, free) {
                Some(next) => extra = next,
                None => break,
            }
        }
        masks[level] = 0;
        Ok(())
    }

    rec(poset, &mut masks, 0, cap, &mut out)?;
    Ok(out)
}

/// Default cap on frame enumeration, overridable through the `BOHR_CAP`
/// environment variable and the CLI `--cap` flag.
pub const DEFAULT_CAP: usize = 1_000_000;

/// An upward-closed set of context indices — the value of the
/// state-proposition pairing and the shape of the topos's truth values
/// at the bottom context.
#[derive(Clone, PartialEq, Eq)]
pub struct UpperSet {
    poset: Arc<ContextPoset>,
    members: BTreeSet<usize>,
}

impl UpperSet {
    /// Validates upward closure: a member's refinements are all members.
    pub fn new(poset: Arc<ContextPoset>, members: BTreeSet<usize>) -> Result<Self> {
        for &i in &members {
            if i >= poset.len() {
                return Err(Error::NotInPoset(format!(
                    "context index {i} out of range for a poset of {} contexts",
                    poset.len()
                )));
            }
            for j in 0..poset.len() {
                if poset.leq(i, j) && !members.contains(&j) {
                    return Err(Error::InvalidArgument(format!(
                        "not an upper set: contains context {i} but not its refinement {j}"
                    )));
                }
            }
        }
        Ok(UpperSet { poset, members })
    }

    pub fn poset(&self) -> &Arc<ContextPoset> {
        &self.poset
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl std::fmt::Debug for UpperSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "UpperSet{:?}", self.members)
    }
}
