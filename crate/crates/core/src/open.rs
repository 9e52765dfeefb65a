//! Opens of the rational line, in canonical form.
//!
//! A [`RationalOpen`] is a finite union of open intervals with rational or
//! infinite endpoints, stored sorted and merged so that equal opens have
//! equal representations. Because the intervals are open, touching
//! intervals like `(0,1)` and `(1,2)` do *not* merge — the shared endpoint
//! is missing from both.

use crate::error::{Error, Result};
use crate::scalar::Rational;
use num_traits::{Signed, Zero};
use std::fmt;

/// Interval endpoint; the derived order is `NegInf < Fin(q) < PosInf`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Endpoint {
    NegInf,
    Fin(Rational),
    PosInf,
}

impl fmt::Debug for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::NegInf => write!(f, "-inf"),
            Endpoint::Fin(q) => write!(f, "{q}"),
            Endpoint::PosInf => write!(f, "inf"),
        }
    }
}

/// An open subset of the rational line: disjoint open intervals sorted by
/// left endpoint.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalOpen {
    intervals: Vec<(Endpoint, Endpoint)>,
}

impl RationalOpen {
    pub fn empty() -> Self {
        RationalOpen { intervals: Vec::new() }
    }

    pub fn whole_line() -> Self {
        RationalOpen { intervals: vec![(Endpoint::NegInf, Endpoint::PosInf)] }
    }

    /// Single open interval `(l, r)`; errors unless `l < r`.
    pub fn interval(l: Endpoint, r: Endpoint) -> Result<Self> {
        Self::from_intervals(vec![(l, r)])
    }

    /// Bounded open interval with rational endpoints.
    pub fn bounded(l: Rational, r: Rational) -> Result<Self> {
        Self::interval(Endpoint::Fin(l), Endpoint::Fin(r))
    }

    /// Canonicalizes an arbitrary interval list: validates each interval,
    /// sorts, and merges overlapping (not merely touching) intervals.
    pub fn from_intervals(mut intervals: Vec<(Endpoint, Endpoint)>) -> Result<Self> {
        for (l, r) in &intervals {
            if *l == Endpoint::PosInf || *r == Endpoint::NegInf || l >= r {
                return Err(Error::InvalidOpen(format!(
                    "interval ({l:?}, {r:?}) is not a nonempty open interval"
                )));
            }
        }
        intervals.sort();
        let mut merged: Vec<(Endpoint, Endpoint)> = Vec::with_capacity(intervals.len());
        for (l, r) in intervals {
            match merged.last_mut() {
                // strict overlap required: (a,b) and (b,c) stay separate
                Some((_, prev_r)) if l < *prev_r => {
                    if r > *prev_r {
                        *prev_r = r;
                    }
                }
                _ => merged.push((l, r)),
            }
        }
        Ok(RationalOpen { intervals: merged })
    }

    pub fn intervals(&self) -> &[(Endpoint, Endpoint)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, q: &Rational) -> bool {
        self.intervals.iter().any(|(l, r)| {
            let above = match l {
                Endpoint::NegInf => true,
                Endpoint::Fin(a) => a < q,
                Endpoint::PosInf => false,
            };
            let below = match r {
                Endpoint::PosInf => true,
                Endpoint::Fin(b) => q < b,
                Endpoint::NegInf => false,
            };
            above && below
        })
    }

    pub fn union(&self, other: &RationalOpen) -> RationalOpen {
        let mut all = self.intervals.clone();
        all.extend(other.intervals.iter().cloned());
        RationalOpen::from_intervals(all).expect("canonical inputs stay valid")
    }

    pub fn intersect(&self, other: &RationalOpen) -> RationalOpen {
        let mut pieces = Vec::new();
        for (al, ar) in &self.intervals {
            for (bl, br) in &other.intervals {
                let l = al.max(bl).clone();
                let r = ar.min(br).clone();
                if l < r {
                    pieces.push((l, r));
                }
            }
        }
        RationalOpen::from_intervals(pieces).expect("intersections of opens are valid")
    }
}

impl fmt::Debug for RationalOpen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .intervals
            .iter()
            .map(|(l, r)| format!("({l:?},{r:?})"))
            .collect();
        write!(f, "{{{}}}", parts.join(" ∪ "))
    }
}

/// Invertible rational affine reparametrization `t -> alpha t + beta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub alpha: Rational,
    pub beta: Rational,
}

impl AffineMap {
    pub fn new(alpha: Rational, beta: Rational) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::InvalidArgument("affine map must have nonzero slope".into()));
        }
        Ok(AffineMap { alpha, beta })
    }

    pub fn apply(&self, t: &Rational) -> Rational {
        &self.alpha * t + &self.beta
    }

    /// `alpha a + beta 1` on a square matrix.
    pub fn apply_matrix(&self, a: &crate::matrix::CMatrix) -> Result<crate::matrix::CMatrix> {
        if !a.is_square() {
            return Err(Error::Dimension("affine image of a non-square matrix".into()));
        }
        let alpha = crate::scalar::GaussianRational::from_rational(self.alpha.clone());
        let beta = crate::scalar::GaussianRational::from_rational(self.beta.clone());
        a.scale(&alpha).add(&crate::matrix::CMatrix::identity(a.rows()).scale(&beta))
    }

    fn preimage_endpoint(&self, e: &Endpoint) -> Endpoint {
        match e {
            Endpoint::Fin(q) => Endpoint::Fin((q - &self.beta) / &self.alpha),
            inf => {
                if self.alpha.is_positive() {
                    match inf {
                        Endpoint::NegInf => Endpoint::NegInf,
                        _ => Endpoint::PosInf,
                    }
                } else {
                    match inf {
                        Endpoint::NegInf => Endpoint::PosInf,
                        _ => Endpoint::NegInf,
                    }
                }
            }
        }
    }

    /// Exact preimage: `f^{-1}(U)` with orientation flipped when the slope
    /// is negative; satisfies `f(t) in U  iff  t in f^{-1}(U)`.
    pub fn preimage(&self, u: &RationalOpen) -> RationalOpen {
        let mut pieces = Vec::new();
        for (l, r) in u.intervals() {
            let a = self.preimage_endpoint(l);
            let b = self.preimage_endpoint(r);
            if self.alpha.is_positive() {
                pieces.push((a, b));
            } else {
                pieces.push((b, a));
            }
        }
        RationalOpen::from_intervals(pieces).expect("preimages of opens are valid")
    }
}
