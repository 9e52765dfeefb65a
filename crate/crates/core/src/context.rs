//! Classical contexts of an `n`-level system.
//!
//! A context is a commutative unital *-subalgebra of the `n x n` matrices,
//! represented concretely by its partition of unity: the finite family of
//! mutually orthogonal minimal projections summing to the identity. Two
//! contexts are the same subalgebra exactly when their canonical atom lists
//! are equal, so structural equality decides subalgebra equality.
//!
//! Up to conjugation a context is classified by the ranks of its atoms — a
//! partition of `n` — and the contexts with `k` atoms correspond to the
//! partitions of `n` into exactly `k` parts ([`enumerate_young`]). For the
//! 2-level system every nontrivial context is a pair of antipodal points of
//! the rational unit sphere ([`p_sphere`]).

use crate::error::{Error, Result};
use crate::matrix::{matrix_membership, nullspace, rational_eigen_decomposition, CMatrix};
use crate::scalar::{GaussianRational, Rational};
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// A partition of unity: mutually orthogonal nonzero projections summing
/// to the identity, kept in canonical order (rank ascending, then
/// lexicographic on row-major entries).
#[derive(Clone, PartialEq, Eq)]
pub struct Context {
    n: usize,
    atoms: Vec<CMatrix>,
}

impl Context {
    /// Validates and canonicalizes a partition of unity.
    pub fn new(n: usize, mut atoms: Vec<CMatrix>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidContext("ambient dimension must be positive".into()));
        }
        if atoms.is_empty() {
            return Err(Error::InvalidContext("a context needs at least one atom".into()));
        }
        for a in &atoms {
            if a.rows() != n || a.cols() != n {
                return Err(Error::InvalidContext(format!(
                    "atom is {}x{}, ambient dimension is {n}",
                    a.rows(),
                    a.cols()
                )));
            }
            if !a.is_projection() {
                return Err(Error::InvalidContext("atom is not a projection".into()));
            }
            if a.is_zero() {
                return Err(Error::InvalidContext("zero atom".into()));
            }
        }
        for i in 0..atoms.len() {
            for j in (i + 1)..atoms.len() {
                if !atoms[i].mul(&atoms[j])?.is_zero() {
                    return Err(Error::InvalidContext(format!(
                        "atoms {i} and {j} are not orthogonal"
                    )));
                }
            }
        }
        let sum = atoms
            .iter()
            .try_fold(CMatrix::zero(n, n), |acc, a| acc.add(a))?;
        if sum != CMatrix::identity(n) {
            return Err(Error::InvalidContext("atoms do not sum to the identity".into()));
        }
        atoms.sort_by(atom_cmp);
        Ok(Context { n, atoms })
    }

    /// The least context `C·1`: the scalars, whose only atom is the identity.
    pub fn bottom(n: usize) -> Self {
        Context { n, atoms: vec![CMatrix::identity(n)] }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn atoms(&self) -> &[CMatrix] {
        &self.atoms
    }

    /// Number of atoms = linear dimension of the subalgebra.
    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_bottom(&self) -> bool {
        self.atoms.len() == 1
    }

    /// Maximal contexts have `n` atoms of rank 1.
    pub fn is_maximal(&self) -> bool {
        self.atoms.len() == self.n
    }

    /// Ranks of the atoms as a partition of `n` (non-increasing).
    pub fn partition_type(&self) -> PartitionType {
        let mut ranks: Vec<usize> = self
            .atoms
            .iter()
            .map(|a| a.proj_rank().expect("atoms are projections"))
            .collect();
        ranks.sort_unstable_by(|a, b| b.cmp(a));
        PartitionType(ranks)
    }

    /// Canonical total order: ambient dimension, then atom count, then
    /// lexicographic on the canonical atom entry lists. Used to give
    /// posets one deterministic context ordering.
    pub fn canonical_cmp(&self, other: &Context) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.atoms.len().cmp(&other.atoms.len()))
            .then_with(|| {
                for (a, b) in self.atoms.iter().zip(&other.atoms) {
                    let c = atom_cmp(a, b);
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            })
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Context(n={}, type={})", self.n, self.partition_type())
    }
}

fn atom_cmp(a: &CMatrix, b: &CMatrix) -> Ordering {
    let ra = a.trace().expect("atoms are square");
    let rb = b.trace().expect("atoms are square");
    ra.re
        .cmp(&rb.re)
        .then_with(|| a.flatten().cmp(&b.flatten()))
}

/// Is every atom of `c` a sum of atoms of `d` — i.e. is `c` a subalgebra
/// of `d`? Exact span membership; no tolerance.
pub fn context_leq(c: &Context, d: &Context) -> Result<bool> {
    if c.ambient_dim() != d.ambient_dim() {
        return Err(Error::Dimension("contexts live in different ambient algebras".into()));
    }
    Ok(refinement_map(c, d)?.is_some())
}

/// For `c <= d`, maps each atom index of `c` to the sorted atom indices of
/// `d` summing to it; `None` when `c` is not below `d`.
pub fn refinement_map(c: &Context, d: &Context) -> Result<Option<Vec<Vec<usize>>>> {
    if c.ambient_dim() != d.ambient_dim() {
        return Err(Error::Dimension("contexts live in different ambient algebras".into()));
    }
    let mut map = Vec::with_capacity(c.atom_count());
    for atom in c.atoms() {
        let Some(coeffs) = matrix_membership(atom, d.atoms())? else {
            return Ok(None);
        };
        // a projection in the span of a partition of unity has 0/1 coefficients
        debug_assert!(coeffs.iter().all(|x| x.is_zero() || x.is_one()));
        let parts: Vec<usize> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, x)| x.is_one())
            .map(|(j, _)| j)
            .collect();
        map.push(parts);
    }
    Ok(Some(map))
}

/// Largest common subalgebra of two contexts.
///
/// The coefficient vectors `x` with `sum x_i e_i` lying in the span of
/// `d`'s atoms form a subspace; two atoms of `c` end up in the same atom of
/// the intersection exactly when every such `x` gives them equal
/// coefficients. The intersection's atoms are the corresponding block sums.
pub fn intersect(c: &Context, d: &Context) -> Result<Context> {
    let n = c.ambient_dim();
    if n != d.ambient_dim() {
        return Err(Error::Dimension("contexts live in different ambient algebras".into()));
    }
    let k = c.atom_count();
    let m = d.atom_count();
    let ec: Vec<Vec<GaussianRational>> = c.atoms().iter().map(|a| a.flatten()).collect();
    let fd: Vec<Vec<GaussianRational>> = d.atoms().iter().map(|a| a.flatten()).collect();
    // nullspace of [ e_1 ... e_k | -f_1 ... -f_m ] as n^2 x (k+m)
    let rows: Vec<Vec<GaussianRational>> = (0..n * n)
        .map(|r| {
            let mut row: Vec<GaussianRational> = Vec::with_capacity(k + m);
            for e in &ec {
                row.push(e[r].clone());
            }
            for f in &fd {
                row.push(-&f[r]);
            }
            row
        })
        .collect();
    let ns = nullspace(rows);
    // signature of atom i: its coefficient in every basis solution
    let mut groups: BTreeMap<Vec<GaussianRational>, Vec<usize>> = BTreeMap::new();
    for i in 0..k {
        let sig: Vec<GaussianRational> = ns.iter().map(|b| b[i].clone()).collect();
        groups.entry(sig).or_default().push(i);
    }
    let atoms: Vec<CMatrix> = groups
        .values()
        .map(|idxs| {
            idxs.iter()
                .try_fold(CMatrix::zero(n, n), |acc, &i| acc.add(&c.atoms()[i]))
        })
        .collect::<Result<_>>()?;
    Context::new(n, atoms)
}

/// Joint spectral context of a commuting family of hermitian matrices with
/// rational spectra: the common refinement of their eigenprojections.
pub fn context_from_commuting(generators: &[CMatrix]) -> Result<Context> {
    let Some(first) = generators.first() else {
        return Err(Error::InvalidArgument("no generators given".into()));
    };
    let n = first.rows();
    for g in generators {
        if g.rows() != n || g.cols() != n {
            return Err(Error::Dimension("generators have mixed shapes".into()));
        }
        if !g.is_hermitian() {
            return Err(Error::NotHermitian);
        }
    }
    for i in 0..generators.len() {
        for j in (i + 1)..generators.len() {
            if !generators[i].commutes_with(&generators[j])? {
                return Err(Error::NonCommuting);
            }
        }
    }
    let mut partition = vec![CMatrix::identity(n)];
    for g in generators {
        let dec = rational_eigen_decomposition(g)?;
        let mut refined = Vec::new();
        for e in &partition {
            for (_, p) in &dec {
                let ep = e.mul(p)?;
                if !ep.is_zero() {
                    refined.push(ep);
                }
            }
        }
        partition = refined;
    }
    Context::new(n, partition)
}

/// Rank-1 projection of the 2-level system attached to a rational point of
/// the unit sphere:
///
/// ```text
/// p(x,y,z) = 1/2 [[1+x, y+iz], [y-iz, 1-x]]
/// ```
///
/// Antipodal points give complementary projections, so `(x,y,z)` and
/// `(-x,-y,-z)` generate the same context.
pub fn p_sphere(x: &Rational, y: &Rational, z: &Rational) -> Result<CMatrix> {
    let norm = x * x + y * y + z * z;
    if !norm.is_one() {
        return Err(Error::InvalidArgument(format!(
            "({x}, {y}, {z}) is not on the rational unit sphere"
        )));
    }
    let half = Rational::new(1.into(), 2.into());
    let one = Rational::one();
    let entries = vec![
        GaussianRational::new(&half * (&one + x), Rational::zero()),
        GaussianRational::new(&half * y, &half * z),
        GaussianRational::new(&half * y, -(&half * z)),
        GaussianRational::new(&half * (&one - x), Rational::zero()),
    ];
    CMatrix::new(2, 2, entries)
}

/// The maximal context of the 2-level system spanned by `p(x,y,z)` and its
/// complement.
pub fn sphere_context(x: &Rational, y: &Rational, z: &Rational) -> Result<Context> {
    let p = p_sphere(x, y, z)?;
    Context::new(2, vec![p.proj_complement()?, p])
}

/// A partition of `n` into non-increasing positive parts; the conjugation
/// invariant classifying contexts by their atom ranks.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartitionType(pub Vec<usize>);

impl PartitionType {
    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for PartitionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for PartitionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All partitions of `n` into exactly `k` parts, in descending
/// lexicographic order; the classification of `k`-atom context types of an
/// `n`-level system.
pub fn enumerate_young(k: usize, n: usize) -> Vec<PartitionType> {
    let mut out = Vec::new();
    let mut parts = Vec::with_capacity(k);
    fn go(remaining: usize, slots: usize, max_part: usize, parts: &mut Vec<usize>, out: &mut Vec<PartitionType>) {
        if slots == 0 {
            if remaining == 0 {
                out.push(PartitionType(parts.clone()));
            }
            return;
        }
        // each of the `slots` parts is >= 1 and <= max_part
        let hi = max_part.min(remaining.saturating_sub(slots - 1));
        let lo = remaining.div_ceil(slots);
        if lo > hi {
            return;
        }
        for p in (lo..=hi).rev() {
            parts.push(p);
            go(remaining - p, slots - 1, p, parts, out);
            parts.pop();
        }
    }
    if k >= 1 && k <= n {
        go(n, k, n, &mut parts, &mut out);
    }
    out
}
