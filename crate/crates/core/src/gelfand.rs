//! Gelfand transform of rational-spectrum observables: spectral
//! projections against opens of the line, per context and across a whole
//! poset of contexts.
//!
//! Once an observable's context is known, no root-finding is needed: the
//! observable is an exact linear combination of the context's atoms, and
//! its eigenvalue on each atom is the corresponding coefficient. The
//! transform `U ↦ [a ∈ U]` then reads off which atoms carry an eigenvalue
//! inside `U`. Pushed through a context poset this yields a monotone
//! projection-valued map, because refining an atom never changes the
//! eigenvalue carried by its parts.

use crate::context::Context;
use crate::error::{Error, Result};
use crate::frame::SigmaOpen;
use crate::matrix::{matrix_membership, CMatrix};
use crate::open::RationalOpen;
use crate::poset::ContextPoset;
use crate::scalar::Rational;
use crate::support::SupportVector;
use num_traits::Zero;
use std::sync::Arc;

/// Support of `diag(χ_U(a_1),…,χ_U(a_k))`: bit `i` set iff `a_i ∈ u`.
pub fn gelfand_support(diag_values: &[Rational], u: &RationalOpen) -> SupportVector {
    SupportVector::new(diag_values.iter().map(|v| u.contains(v)).collect())
}

/// The eigenvalue of `a` on each atom of `c`, in atom order.
///
/// Verifies that `a` is Hermitian and lies in the span of `c`'s atoms;
/// the membership coefficients are exactly the eigenvalues, necessarily
/// real for a Hermitian member of a commutative *-algebra.
pub fn eigenvalues_in_context(a: &CMatrix, c: &Context) -> Result<Vec<Rational>> {
    if !a.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let coeffs = matrix_membership(a, c.atoms())?.ok_or_else(|| {
        Error::NotInContext(format!(
            "observable does not lie in the span of the context's {} atoms",
            c.atom_count()
        ))
    })?;
    let mut values = Vec::with_capacity(coeffs.len());
    for coeff in coeffs {
        if !coeff.im.is_zero() {
            return Err(Error::NotHermitian);
        }
        values.push(coeff.re);
    }
    Ok(values)
}

/// The spectral projection `[a ∈ u]` inside context `c`: the sum of the
/// atoms whose eigenvalue lies in `u`.
pub fn spectral_projection(a: &CMatrix, c: &Context, u: &RationalOpen) -> Result<CMatrix> {
    let values = eigenvalues_in_context(a, c)?;
    let n = c.ambient_dim();
    let mut acc = CMatrix::zero(n, n);
    for (atom, value) in c.atoms().iter().zip(&values) {
        if u.contains(value) {
            acc = acc.add(atom)?;
        }
    }
    Ok(acc)
}

/// The transform of `a` over a whole poset, started at context `d`:
/// assigns `[a ∈ u]` (computed inside `E`) to every context `E ⊇ d` and
/// the zero projection elsewhere. The observable must live in `c`, a
/// context at or below `d`; the result is supported inside `↑c` and is
/// monotone because eigenvalues are constant along atom refinement.
pub fn bohrified_transform(
    a: &CMatrix,
    c: usize,
    d: usize,
    u: &RationalOpen,
    poset: &Arc<ContextPoset>,
) -> Result<SigmaOpen> {
    if c >= poset.len() || d >= poset.len() {
        return Err(Error::NotInPoset(format!(
            "context indices {c}, {d} must lie below {}",
            poset.len()
        )));
    }
    if !poset.leq(c, d) {
        return Err(Error::InvalidArgument(format!(
            "starting context {d} does not refine the observable's context {c}"
        )));
    }
    // membership in the coarser context is the real precondition
    eigenvalues_in_context(a, poset.context(c))?;
    let mut masks = vec![0u64; poset.len()];
    for (e, mask) in masks.iter_mut().enumerate() {
        if !poset.leq(d, e) {
            continue;
        }
        let values = eigenvalues_in_context(a, poset.context(e))
            .expect("membership persists into finer contexts");
        for (atom, value) in values.iter().enumerate() {
            if u.contains(value) {
                *mask |= 1 << atom;
            }
        }
    }
    SigmaOpen::new(poset.clone(), masks)
}
