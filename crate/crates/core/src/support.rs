//! Support vectors: the pointed partially ordered set of a finite
//! commutative context.
//!
//! For a context with `k` atoms, the positive elements modulo the
//! "mutually bounded" equivalence are classified by their support — the
//! 0/1 vector recording which atom coefficients are strictly positive.
//! The order is pointwise, and an element is covered by a family exactly
//! when it sits below the family's join. The resulting spectrum is the
//! collection of principal down-sets, a Boolean lattice isomorphic to the
//! power set of the atoms.

use crate::error::{Error, Result};
use crate::scalar::Rational;
use num_traits::Signed;
use std::fmt;

/// 0/1 support pattern over the atoms of a context.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SupportVector {
    bits: Vec<bool>,
}

impl SupportVector {
    pub fn new(bits: Vec<bool>) -> Self {
        SupportVector { bits }
    }

    /// The all-zero support (class of 0).
    pub fn bottom(k: usize) -> Self {
        SupportVector { bits: vec![false; k] }
    }

    /// The full support (class of any strictly positive element).
    pub fn top(k: usize) -> Self {
        SupportVector { bits: vec![true; k] }
    }

    /// Support vector with the given bitmask, bit `i` of `mask` at atom `i`.
    pub fn from_mask(k: usize, mask: u64) -> Self {
        SupportVector { bits: (0..k).map(|i| mask >> i & 1 == 1).collect() }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn is_bottom(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    fn check_len(&self, other: &SupportVector) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::Dimension(format!(
                "support vectors of lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }

    /// Pointwise order.
    pub fn leq(&self, other: &SupportVector) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(a, b)| !a || *b))
    }

    pub fn join(&self, other: &SupportVector) -> Result<SupportVector> {
        self.check_len(other)?;
        Ok(SupportVector {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| *a || *b).collect(),
        })
    }

    pub fn meet(&self, other: &SupportVector) -> Result<SupportVector> {
        self.check_len(other)?;
        Ok(SupportVector {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| *a && *b).collect(),
        })
    }
}

impl fmt::Debug for SupportVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        write!(f, "[{s}]")
    }
}

/// Class of a nonnegative coefficient vector: its support. Errors on a
/// negative entry — nonnegativity is the caller's claim being checked.
pub fn l_class(values: &[Rational]) -> Result<SupportVector> {
    if values.iter().any(|v| v.is_negative()) {
        return Err(Error::NegativeEntry);
    }
    Ok(SupportVector { bits: values.iter().map(|v| v.is_positive()).collect() })
}

/// Class of the positive part of an arbitrary self-adjoint coefficient
/// vector: negative entries clip to zero, so the support keeps only the
/// strictly positive coordinates.
pub fn l_class_sa(values: &[Rational]) -> SupportVector {
    SupportVector { bits: values.iter().map(|v| v.is_positive()).collect() }
}

/// Covering relation: in finite dimension `x` is covered by the family `u`
/// exactly when `x` lies below the join of `u`. The empty family covers
/// only the bottom class.
pub fn covers(x: &SupportVector, u: &[SupportVector]) -> Result<bool> {
    let mut join = SupportVector::bottom(x.len());
    for v in u {
        join = join.join(v)?;
    }
    x.leq(&join)
}

/// A principal down-set `↓top` inside the Boolean lattice of supports.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrincipalDownSet {
    top: SupportVector,
}

impl PrincipalDownSet {
    pub fn new(top: SupportVector) -> Self {
        PrincipalDownSet { top }
    }

    pub fn top(&self) -> &SupportVector {
        &self.top
    }

    pub fn contains(&self, x: &SupportVector) -> Result<bool> {
        x.leq(&self.top)
    }

    /// All members, in mask order.
    pub fn members(&self) -> Vec<SupportVector> {
        let k = self.top.len();
        (0u64..1 << k)
            .map(|m| SupportVector::from_mask(k, m))
            .filter(|x| x.leq(&self.top).expect("equal lengths"))
            .collect()
    }

    pub fn meet(&self, other: &PrincipalDownSet) -> Result<PrincipalDownSet> {
        Ok(PrincipalDownSet { top: self.top.meet(&other.top)? })
    }

    pub fn join(&self, other: &PrincipalDownSet) -> Result<PrincipalDownSet> {
        Ok(PrincipalDownSet { top: self.top.join(&other.top)? })
    }

    /// The subset of atom indices this down-set corresponds to under the
    /// isomorphism with the power set of the atoms.
    pub fn atom_subset(&self) -> std::collections::BTreeSet<usize> {
        self.top
            .bits()
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Debug for PrincipalDownSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "↓{:?}", self.top)
    }
}

/// The spectrum of a `k`-atom context: all principal down-sets of support
/// vectors, in mask order. A Boolean lattice with `2^k` elements.
pub fn finite_spectrum(k: usize) -> Vec<PrincipalDownSet> {
    (0u64..1 << k)
        .map(|m| PrincipalDownSet::new(SupportVector::from_mask(k, m)))
        .collect()
}
