//! Noncontextual valuation search on finite ray sets, and the points of
//! a finite frame.
//!
//! A ray set is a family of rays (rank-1 directions) together with bases:
//! index tuples of mutually orthogonal rays spanning the space. A
//! valuation assigns 0 or 1 to every ray so that each basis carries
//! exactly one 1 — one true outcome per maximal measurement, with the
//! answer independent of which basis the ray is read in. Rich enough ray
//! sets in dimension ≥ 3 admit no such valuation; the searcher decides
//! each instance exactly by backtracking with unit propagation.
//!
//! The same module hosts the frame-side counterpart: the prime elements
//! of an enumerated finite frame and the two-valued frame maps they
//! induce.

use crate::error::{Error, Result};
use crate::frame::{enumerate_frame, SigmaOpen};
use crate::matrix::CMatrix;
use crate::open::AffineMap;
use crate::poset::ContextPoset;
use crate::scalar::{GaussianRational, Rational};
use std::sync::Arc;

/// Rays and orthogonal bases over the Gaussian rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RaySet {
    dim: usize,
    rays: Vec<Vec<GaussianRational>>,
    bases: Vec<Vec<usize>>,
}

fn inner_product(u: &[GaussianRational], v: &[GaussianRational]) -> GaussianRational {
    u.iter()
        .zip(v)
        .map(|(a, b)| &a.conj() * b)
        .fold(GaussianRational::zero(), |acc, x| &acc + &x)
}

/// Projective proportionality over the complex rationals: all 2×2 minors
/// of the pair vanish.
fn proportional(u: &[GaussianRational], v: &[GaussianRational]) -> bool {
    let n = u.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if &u[i] * &v[j] != &u[j] * &v[i] {
                return false;
            }
        }
    }
    true
}

impl RaySet {
    pub fn new(
        dim: usize,
        rays: Vec<Vec<GaussianRational>>,
        bases: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidRaySet("dimension must be positive".into()));
        }
        if rays.is_empty() {
            return Err(Error::InvalidRaySet("no rays given".into()));
        }
        for (i, ray) in rays.iter().enumerate() {
            if ray.len() != dim {
                return Err(Error::InvalidRaySet(format!(
                    "ray {i} has {} coordinates, expected {dim}",
                    ray.len()
                )));
            }
            if ray.iter().all(|z| z.is_zero()) {
                return Err(Error::InvalidRaySet(format!("ray {i} is zero")));
            }
        }
        for i in 0..rays.len() {
            for j in (i + 1)..rays.len() {
                if proportional(&rays[i], &rays[j]) {
                    return Err(Error::InvalidRaySet(format!(
                        "rays {i} and {j} are proportional"
                    )));
                }
            }
        }
        for (b, basis) in bases.iter().enumerate() {
            if basis.len() != dim {
                return Err(Error::InvalidRaySet(format!(
                    "basis {b} has {} rays, expected {dim}",
                    basis.len()
                )));
            }
            for (pos, &r) in basis.iter().enumerate() {
                if r >= rays.len() {
                    return Err(Error::InvalidRaySet(format!(
                        "basis {b} references unknown ray {r}"
                    )));
                }
                if basis[..pos].contains(&r) {
                    return Err(Error::InvalidRaySet(format!(
                        "basis {b} repeats ray {r}"
                    )));
                }
            }
            for x in 0..dim {
                for y in (x + 1)..dim {
                    if !inner_product(&rays[basis[x]], &rays[basis[y]]).is_zero() {
                        return Err(Error::InvalidRaySet(format!(
                            "rays {} and {} of basis {b} are not orthogonal",
                            basis[x], basis[y]
                        )));
                    }
                }
            }
        }
        Ok(RaySet { dim, rays, bases })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<GaussianRational>] {
        &self.rays
    }

    pub fn bases(&self) -> &[Vec<usize>] {
        &self.bases
    }

    /// The rank-1 projection onto ray `i`: `u u* / ⟨u,u⟩`.
    pub fn ray_projection(&self, i: usize) -> CMatrix {
        let u = &self.rays[i];
        let norm = inner_product(u, u);
        let mut m = CMatrix::zero(self.dim, self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                let val = &(&u[r] * &u[c].conj()) / &norm;
                m.set(r, c, val);
            }
        }
        debug_assert!(m.is_projection());
        m
    }

    /// The classical context spanned by a basis: its atoms are the rank-1
    /// projections onto the basis rays.
    pub fn basis_context(&self, b: usize) -> Result<crate::context::Context> {
        let basis = self.bases.get(b).ok_or_else(|| {
            Error::InvalidArgument(format!("basis index {b} out of range"))
        })?;
        let atoms: Vec<CMatrix> = basis.iter().map(|&r| self.ray_projection(r)).collect();
        crate::context::Context::new(self.dim, atoms)
    }
}

impl std::fmt::Debug for RaySet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RaySet(dim={}, rays={}, bases={})", self.dim, self.rays.len(), self.bases.len())
    }
}

/// A 0/1 assignment to the rays of a ray set.
#[derive(Clone, PartialEq, Eq)]
pub struct Valuation {
    assignment: Vec<bool>,
}

impl Valuation {
    pub fn new(assignment: Vec<bool>) -> Self {
        Valuation { assignment }
    }

    pub fn value(&self, ray: usize) -> bool {
        self.assignment[ray]
    }

    pub fn assignment(&self) -> &[bool] {
        &self.assignment
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }
}

impl std::fmt::Debug for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: String = self.assignment.iter().map(|&b| if b { '1' } else { '0' }).collect();
        write!(f, "Valuation[{s}]")
    }
}

/// Outcome of [`valuation_search`]: the first valuation in lexicographic
/// order (trying 0 before 1 ray by ray) when one exists, plus the number
/// of branch decisions the search took.
pub struct SearchResult {
    pub valuation: Option<Valuation>,
    pub explored: usize,
}

struct Search<'a> {
    rs: &'a RaySet,
    values: Vec<Option<bool>>,
    ones: Vec<usize>,
    unassigned: Vec<usize>,
    ray_bases: Vec<Vec<usize>>,
    explored: usize,
}

impl<'a> Search<'a> {
    fn new(rs: &'a RaySet) -> Self {
        let mut ray_bases = vec![Vec::new(); rs.rays.len()];
        for (b, basis) in rs.bases.iter().enumerate() {
            for &r in basis {
                ray_bases[r].push(b);
            }
        }
        Search {
            rs,
            values: vec![None; rs.rays.len()],
            ones: vec![0; rs.bases.len()],
            unassigned: rs.bases.iter().map(|b| b.len()).collect(),
            ray_bases,
            explored: 0,
        }
    }

    /// Assigns `ray := value` and unit-propagates. Every assignment made
    /// is appended to `trail` so the caller can undo on failure. Returns
    /// false the moment some basis becomes unsatisfiable.
    fn assign(&mut self, ray: usize, value: bool, trail: &mut Vec<usize>) -> bool {
        let mut queue = vec![(ray, value)];
        while let Some((r, v)) = queue.pop() {
            if let Some(existing) = self.values[r] {
                if existing != v {
                    return false;
                }
                continue;
            }
            self.values[r] = Some(v);
            trail.push(r);
            // update every basis of r before reporting a conflict, so the
            // counters stay exactly undoable from the trail
            let mut conflict = false;
            for bi in 0..self.ray_bases[r].len() {
                let b = self.ray_bases[r][bi];
                self.unassigned[b] -= 1;
                if v {
                    self.ones[b] += 1;
                }
                if self.ones[b] > 1 || (self.ones[b] == 0 && self.unassigned[b] == 0) {
                    conflict = true;
                    continue;
                }
                if !conflict && (self.ones[b] == 1 || self.unassigned[b] == 1) {
                    // either the basis already has its 1 (rest must be 0)
                    // or only one candidate remains (it must be 1)
                    let force = self.ones[b] == 0;
                    for ri in 0..self.rs.bases[b].len() {
                        let r2 = self.rs.bases[b][ri];
                        if self.values[r2].is_none() {
                            queue.push((r2, force));
                        }
                    }
                }
            }
            if conflict {
                return false;
            }
        }
        true
    }

    fn undo(&mut self, trail: &[usize]) {
        for &r in trail.iter().rev() {
            let v = self.values[r].take().expect("trail entries are assigned");
            for bi in 0..self.ray_bases[r].len() {
                let b = self.ray_bases[r][bi];
                self.unassigned[b] += 1;
                if v {
                    self.ones[b] -= 1;
                }
            }
        }
    }

    fn dfs(&mut self, from: usize) -> Option<Vec<bool>> {
        let Some(ray) = (from..self.values.len()).find(|&r| self.values[r].is_none()) else {
            return Some(self.values.iter().map(|v| v.expect("complete")).collect());
        };
        for value in [false, true] {
            self.explored += 1;
            let mut trail = Vec::new();
            if self.assign(ray, value, &mut trail) {
                if let Some(solution) = self.dfs(ray + 1) {
                    return Some(solution);
                }
            }
            self.undo(&trail);
        }
        None
    }
}

/// Backtracking search for a one-per-basis valuation. Deterministic: rays
/// are decided in index order with 0 tried before 1, so a satisfiable
/// instance yields its lexicographically least valuation.
pub fn valuation_search(rs: &RaySet) -> SearchResult {
    let mut search = Search::new(rs);
    let solution = search.dfs(0);
    SearchResult {
        valuation: solution.map(Valuation::new),
        explored: search.explored,
    }
}

/// Checks the one-per-basis invariant. `Ok(None)` when every basis holds
/// exactly one ray valued 1; otherwise `Ok(Some(b))` names the first
/// violated basis. (Per-ray values are shared across bases by
/// construction, so basis-independence itself is structural.)
pub fn noncontextuality_check(v: &Valuation, rs: &RaySet) -> Result<Option<usize>> {
    if v.len() != rs.rays.len() {
        return Err(Error::InvalidArgument(format!(
            "valuation covers {} rays, ray set has {}",
            v.len(),
            rs.rays.len()
        )));
    }
    for (b, basis) in rs.bases.iter().enumerate() {
        let ones = basis.iter().filter(|&&r| v.value(r)).count();
        if ones != 1 {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

/// Functional-composition check for a diagonal observable read in one
/// basis. The observable is its list of eigenvalues, one per basis slot;
/// its value under the valuation is the eigenvalue on the slot valued 1.
/// Both sides are computed independently: the left from the transformed
/// eigenvalue list, the right by applying `f` to the untransformed value.
pub fn func_check(
    v: &Valuation,
    rs: &RaySet,
    basis: usize,
    eigenvalues: &[Rational],
    f: &AffineMap,
) -> Result<bool> {
    let slots = rs
        .bases
        .get(basis)
        .ok_or_else(|| Error::InvalidArgument(format!("basis index {basis} out of range")))?;
    if eigenvalues.len() != rs.dim {
        return Err(Error::Dimension(format!(
            "{} eigenvalues for a dimension-{} basis",
            eigenvalues.len(),
            rs.dim
        )));
    }
    if v.len() != rs.rays.len() {
        return Err(Error::InvalidArgument(format!(
            "valuation covers {} rays, ray set has {}",
            v.len(),
            rs.rays.len()
        )));
    }
    let chosen: Vec<usize> =
        (0..slots.len()).filter(|&pos| v.value(slots[pos])).collect();
    let &pos = match chosen.as_slice() {
        [] => return Err(Error::NoAtomValuedOne),
        [pos] => pos,
        _ => {
            return Err(Error::InvalidArgument(
                "valuation marks several atoms of the basis".into(),
            ))
        }
    };
    let transformed: Vec<Rational> = eigenvalues.iter().map(|t| f.apply(t)).collect();
    let observed_after = transformed[pos].clone();
    let value_before = eigenvalues[pos].clone();
    Ok(observed_after == f.apply(&value_before))
}

/// A point of the finite frame: an element `P ≠ ⊤` that is prime —
/// `U ∧ V ≤ P` forces `U ≤ P` or `V ≤ P` across the whole frame.
#[derive(Clone, PartialEq, Eq)]
pub struct FramePoint {
    element: SigmaOpen,
}

impl FramePoint {
    /// Validates both point conditions against an enumerated frame.
    pub fn new(element: SigmaOpen, frame: &[SigmaOpen]) -> Result<Self> {
        if element.is_top() {
            return Err(Error::InvalidArgument("the top element is not a point".into()));
        }
        for u in frame {
            for v in frame {
                let meet = u.meet(v)?;
                if meet.leq(&element)? && !u.leq(&element)? && !v.leq(&element)? {
                    return Err(Error::InvalidArgument(
                        "element is not prime: a meet drops below it while neither factor does"
                            .into(),
                    ));
                }
            }
        }
        Ok(FramePoint { element })
    }

    pub fn element(&self) -> &SigmaOpen {
        &self.element
    }

    /// The induced two-valued frame map: `false` (the empty open) when
    /// `s ≤ P`, `true` (the whole space) otherwise. Preserves finite
    /// meets and arbitrary joins of the finite frame.
    pub fn eval(&self, s: &SigmaOpen) -> Result<bool> {
        Ok(!s.leq(&self.element)?)
    }

    /// Joins every frame element mapped to `false`; a genuine point
    /// recovers itself this way.
    pub fn recover_from(&self, frame: &[SigmaOpen]) -> Result<SigmaOpen> {
        let mut acc = SigmaOpen::bot(self.element.poset().clone());
        for s in frame {
            if !self.eval(s)? {
                acc = acc.join(s)?;
            }
        }
        Ok(acc)
    }
}

impl std::fmt::Debug for FramePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FramePoint({:?})", self.element)
    }
}

/// All points of the frame of a poset, by brute force over the
/// enumerated frame (the enumeration cap applies). Returned in the
/// enumeration order of their underlying elements.
pub fn find_points(poset: &Arc<ContextPoset>, cap: usize) -> Result<Vec<FramePoint>> {
    let frame = enumerate_frame(poset, cap)?;
    let mut points = Vec::new();
    for candidate in &frame {
        if candidate.is_top() {
            continue;
        }
        let mut prime = true;
        'pairs: for u in &frame {
            for v in &frame {
                let meet = u.meet(v)?;
                if meet.leq(candidate)? && !u.leq(candidate)? && !v.leq(candidate)? {
                    prime = false;
                    break 'pairs;
                }
            }
        }
        if prime {
            points.push(FramePoint { element: candidate.clone() });
        }
    }
    Ok(points)
}
