//! States as exact density matrices and the non-probabilistic pairing
//! between a state and a frame element.
//!
//! A state is a Hermitian, trace-one, positive-semidefinite matrix; all
//! three conditions are verified exactly at construction (semidefiniteness
//! through a rational Schur-complement elimination, no eigenvalues
//! needed). The pairing with a frame element keeps only the contexts
//! where the state assigns probability exactly 1 — the result is always
//! an upper set of the poset, because probabilities grow along
//! refinement.

use crate::error::{Error, Result};
use crate::frame::{SigmaOpen, UpperSet};
use crate::matrix::CMatrix;
use crate::scalar::{GaussianRational, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// A density matrix: the exact carrier of a quantum state.
#[derive(Clone, PartialEq, Eq)]
pub struct State {
    rho: CMatrix,
}

impl State {
    /// Validates all three state axioms exactly.
    pub fn new(rho: CMatrix) -> Result<Self> {
        if !rho.is_square() {
            return Err(Error::InvalidState("density matrix must be square".into()));
        }
        if !rho.is_hermitian() {
            return Err(Error::InvalidState("density matrix must be hermitian".into()));
        }
        let tr = rho.trace()?;
        if !tr.is_one() {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        if !is_positive_semidefinite(&rho) {
            return Err(Error::InvalidState("density matrix is not positive semidefinite".into()));
        }
        Ok(State { rho })
    }

    /// The pure state `|Ψ⟩⟨Ψ| / ⟨Ψ|Ψ⟩` of a nonzero vector.
    pub fn pure(psi: &[GaussianRational]) -> Result<Self> {
        let n = psi.len();
        if n == 0 {
            return Err(Error::InvalidState("empty state vector".into()));
        }
        let norm: Rational = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm.is_zero() {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let mut rho = CMatrix::zero(n, n);
        for r in 0..n {
            for c in 0..n {
                let val = &psi[r] * &psi[c].conj();
                rho.set(r, c, GaussianRational::new(&val.re / &norm, &val.im / &norm));
            }
        }
        State::new(rho)
    }

    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.rows()
    }
}

impl std::fmt::Debug for State {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "State(dim={})", self.dim())
    }
}

/// Exact positive-semidefiniteness of a Hermitian matrix by recursive
/// Schur-complement elimination: a zero pivot forces a zero row, a
/// negative pivot refutes, a positive pivot reduces to the complement.
fn is_positive_semidefinite(m: &CMatrix) -> bool {
    let n = m.rows();
    let mut a: Vec<Vec<GaussianRational>> =
        (0..n).map(|r| (0..n).map(|c| m.entry(r, c).clone()).collect()).collect();
    let mut size = n;
    while size > 0 {
        let pivot = a[0][0].clone();
        debug_assert!(pivot.is_real(), "hermitian diagonal is real");
        if pivot.re.is_negative() {
            return false;
        }
        if pivot.re.is_zero() {
            // v*Mv with v = e_0 + t e_j goes negative for small t unless
            // the whole first row vanishes
            if a[0].iter().any(|x| !x.is_zero()) {
                return false;
            }
        }
        let mut next: Vec<Vec<GaussianRational>> = Vec::with_capacity(size - 1);
        for r in 1..size {
            let mut row = Vec::with_capacity(size - 1);
            for c in 1..size {
                let mut val = a[r][c].clone();
                if !pivot.re.is_zero() {
                    let correction = &(&a[r][0] * &a[0][c]) / &pivot;
                    val = &val - &correction;
                }
                row.push(val);
            }
            next.push(row);
        }
        a = next;
        size -= 1;
        if size == 0 {
            break;
        }
    }
    true
}

/// `ψ(p) = tr(ρ p)`: the probability the state assigns to a projection.
pub fn state_eval(psi: &State, p: &CMatrix) -> Result<Rational> {
    if !p.is_projection() {
        return Err(Error::NotProjection);
    }
    let t = psi.rho.mul(p)?.trace()?;
    debug_assert!(t.is_real(), "trace of a product of hermitian matrices is real");
    Ok(t.re)
}

/// The measure component of a state against a frame element, anchored at
/// context `c`: the map `D ↦ ψ(S(D))` on the up-set of `c`. Values are
/// exact rationals in `[0,1]`, monotone along inclusion.
#[derive(Clone, PartialEq, Eq)]
pub struct MonotoneMeasure {
    base: usize,
    values: BTreeMap<usize, Rational>,
}

impl MonotoneMeasure {
    /// Context index the measure is anchored at.
    pub fn base(&self) -> usize {
        self.base
    }

    /// Exact value at context `d`, when `d` refines the base.
    pub fn value(&self, d: usize) -> Option<&Rational> {
        self.values.get(&d)
    }

    pub fn values(&self) -> &BTreeMap<usize, Rational> {
        &self.values
    }
}

impl std::fmt::Debug for MonotoneMeasure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> =
            self.values.iter().map(|(d, v)| format!("{d}↦{v}")).collect();
        write!(f, "MonotoneMeasure@{}({})", self.base, parts.join(", "))
    }
}

pub fn measure_component(psi: &State, s: &SigmaOpen, c: usize) -> Result<MonotoneMeasure> {
    let poset = s.poset();
    if c >= poset.len() {
        return Err(Error::NotInPoset(format!(
            "context index {c} out of range for a poset of {} contexts",
            poset.len()
        )));
    }
    if psi.dim() != poset.ambient_dim() {
        return Err(Error::Dimension(format!(
            "state dimension {} vs poset ambient dimension {}",
            psi.dim(),
            poset.ambient_dim()
        )));
    }
    let mut values = BTreeMap::new();
    for d in poset.up_set(c) {
        let v = state_eval(psi, &s.projection_at(d))?;
        debug_assert!(!v.is_negative() && v <= Rational::one());
        values.insert(d, v);
    }
    let measure = MonotoneMeasure { base: c, values };
    // positivity of the state makes this automatic; keep it checked
    for (&d, vd) in &measure.values {
        for (&e, ve) in &measure.values {
            if poset.leq(d, e) {
                debug_assert!(vd <= ve, "monotonicity of the measure");
            }
        }
    }
    Ok(measure)
}

/// The non-probabilistic pairing: the contexts where the state assigns
/// probability exactly 1 to the frame element's projection.
pub fn pairing(psi: &State, s: &SigmaOpen) -> Result<UpperSet> {
    let poset = s.poset();
    if psi.dim() != poset.ambient_dim() {
        return Err(Error::Dimension(format!(
            "state dimension {} vs poset ambient dimension {}",
            psi.dim(),
            poset.ambient_dim()
        )));
    }
    let mut members = BTreeSet::new();
    for c in 0..poset.len() {
        if state_eval(psi, &s.projection_at(c))?.is_one() {
            members.insert(c);
        }
    }
    UpperSet::new(poset.clone(), members)
}
