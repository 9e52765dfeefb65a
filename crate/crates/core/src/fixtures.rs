//! Built-in example data: the posets, frame elements, and ray sets used
//! by the test suite and shipped as JSON under `fixtures/`.
//!
//! Everything here is constructed programmatically so the shipped JSON
//! can be regenerated (`cargo run --example generate_fixtures`) and
//! cross-checked byte for byte.

use crate::context::{context_from_commuting, sphere_context, Context};
use crate::error::Result;
use crate::frame::SigmaOpen;
use crate::ks::RaySet;
use crate::matrix::CMatrix;
use crate::poset::ContextPoset;
use crate::scalar::{rat, GaussianRational, Rational};
use std::sync::Arc;

fn diag(values: &[i64]) -> CMatrix {
    CMatrix::diag_rational(&values.iter().map(|&v| rat(v, 1)).collect::<Vec<_>>())
}

fn diag_context(values: &[i64]) -> Context {
    context_from_commuting(&[diag(values)]).unwrap()
}

fn conjugate_context(c: &Context, u: &CMatrix) -> Context {
    let atoms: Vec<CMatrix> = c
        .atoms()
        .iter()
        .map(|a| u.mul(a).unwrap().mul(&u.conj_transpose()).unwrap())
        .collect();
    Context::new(c.ambient_dim(), atoms).unwrap()
}

/// Real rotation by the 3-4-5 angle inside the (i,j) coordinate plane of
/// a 3×3 matrix — an exact rational unitary.
fn rational_rotation(i: usize, j: usize) -> CMatrix {
    let mut u = CMatrix::identity(3);
    u.set(i, i, GaussianRational::from_ratio(3, 5));
    u.set(i, j, GaussianRational::from_ratio(4, 5));
    u.set(j, i, GaussianRational::from_ratio(-4, 5));
    u.set(j, j, GaussianRational::from_ratio(3, 5));
    u
}

/// The poset for the excluded-middle counterexample in the 3×3 matrices:
/// the diagonal chain D₂ ⊂ D₃ together with two exact-rational-unitary
/// conjugates of it, closed under intersection. The conjugating rotations
/// are chosen so the three chains meet only at the bottom; every
/// (2,1)-type context in the closure then has a (1,1,1)-type refinement
/// present, which is what makes the double negation reach the top at the
/// bottom context.
pub fn m3_poset() -> Arc<ContextPoset> {
    ContextPoset::build(&m3_seed_contexts()).unwrap()
}

/// The seed contexts whose intersection closure is [`m3_poset`]; also
/// shipped as a JSON seeds file for the poset-building walkthrough.
pub fn m3_seed_contexts() -> Vec<Context> {
    let d2 = diag_context(&[5, 5, 7]);
    let d3 = diag_context(&[1, 2, 3]);
    // composite rotations move every coordinate axis off the axes, so the
    // conjugated chains share no projection with the diagonal chain
    let u1 = rational_rotation(1, 2).mul(&rational_rotation(0, 1)).unwrap();
    let u2 = rational_rotation(0, 1).mul(&rational_rotation(1, 2)).unwrap();
    let mut seeds = vec![d2.clone(), d3.clone()];
    for u in [u1, u2] {
        seeds.push(conjugate_context(&d2, &u));
        seeds.push(conjugate_context(&d3, &u));
    }
    seeds
}

/// The frame element of the excluded-middle counterexample: empty at the
/// bottom, the rank-2 atom at every (2,1)-type context, everything at
/// every (1,1,1)-type context. Satisfies `(¬¬S)(C·1) = 1 ≠ 0 = S(C·1)`.
pub fn excluded_middle_sigma(poset: &Arc<ContextPoset>) -> Result<SigmaOpen> {
    let masks: Vec<u64> = poset
        .contexts()
        .iter()
        .map(|c| {
            let parts = c.partition_type().0;
            if parts == [2, 1] {
                // atoms sort by rank: the rank-2 atom is the second one
                0b10
            } else if parts == [1, 1, 1] {
                0b111
            } else {
                0
            }
        })
        .collect();
    SigmaOpen::new(poset.clone(), masks)
}

/// Bottom plus three incomparable maximal contexts of the 2×2 matrices
/// (the x, y and z spin directions); its frame has 65 elements.
pub fn m2_star_poset() -> Arc<ContextPoset> {
    ContextPoset::build(&[
        sphere_context(&rat(1, 1), &rat(0, 1), &rat(0, 1)).unwrap(),
        sphere_context(&rat(0, 1), &rat(1, 1), &rat(0, 1)).unwrap(),
        sphere_context(&rat(0, 1), &rat(0, 1), &rat(1, 1)).unwrap(),
    ])
    .unwrap()
}

/// Two-element chain: the bottom below the diagonal maximal context of
/// the 2×2 matrices; its frame has 5 elements.
pub fn m2_chain_poset() -> Arc<ContextPoset> {
    ContextPoset::build(&[sphere_context(&rat(1, 1), &rat(0, 1), &rat(0, 1)).unwrap()]).unwrap()
}

/// Three-element chain ⊥ ⊂ D₂ ⊂ D₃ in the 3×3 matrices; its frame has
/// 16 elements.
pub fn m3_chain_poset() -> Arc<ContextPoset> {
    ContextPoset::build(&[diag_context(&[1, 2, 3]), diag_context(&[5, 5, 7])]).unwrap()
}

fn real_ray(coords: &[i64]) -> Vec<GaussianRational> {
    coords.iter().map(|&c| GaussianRational::from_int(c)).collect()
}

/// The 18-ray, 9-basis set in dimension 4 with entries in {0, ±1}; every
/// ray lies in exactly two bases, so a one-per-basis valuation would
/// count 9 ones with even multiplicity — no valuation exists.
pub fn ks18_rays() -> RaySet {
    let rays: Vec<Vec<GaussianRational>> = [
        [0, 0, 0, 1],
        [0, 0, 1, 0],
        [1, 1, 0, 0],
        [1, -1, 0, 0],
        [0, 1, 0, 0],
        [1, 0, 1, 0],
        [1, 0, -1, 0],
        [1, -1, 1, -1],
        [1, -1, -1, 1],
        [0, 0, 1, 1],
        [1, 1, 1, 1],
        [0, 1, 0, -1],
        [1, 0, 0, 1],
        [1, 0, 0, -1],
        [0, 1, -1, 0],
        [1, 1, -1, 1],
        [1, 1, 1, -1],
        [-1, 1, 1, 1],
    ]
    .iter()
    .map(|c| real_ray(c))
    .collect();
    let bases = vec![
        vec![0, 1, 2, 3],
        vec![0, 4, 5, 6],
        vec![2, 7, 8, 9],
        vec![6, 7, 10, 11],
        vec![1, 4, 12, 13],
        vec![8, 10, 13, 14],
        vec![3, 9, 15, 16],
        vec![5, 11, 15, 17],
        vec![12, 14, 16, 17],
    ];
    RaySet::new(4, rays, bases).unwrap()
}

/// Exact cross product of two integer vectors in dimension 3.
fn cross(a: &[i64; 3], b: &[i64; 3]) -> [i64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn sign_normalize(mut v: [i64; 3]) -> [i64; 3] {
    let lead = v.iter().find(|&&x| x != 0).copied().unwrap_or(0);
    if lead < 0 {
        for x in &mut v {
            *x = -*x;
        }
    }
    v
}

/// A rational cube-symmetric family in dimension 3: the 3 axes, 6 face
/// diagonals, 4 body diagonals, and the 12 completions of an orthogonal
/// body-diagonal/face-diagonal pair — 25 rays in 16 bases. Rational
/// orthogonality in dimension 3 always admits a valuation, so this family
/// is satisfiable; it exercises the searcher's propagation rather than
/// refuting it.
pub fn cube_rays_dim3() -> RaySet {
    let axes: [[i64; 3]; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let faces: [[i64; 3]; 6] =
        [[1, 1, 0], [1, -1, 0], [1, 0, 1], [1, 0, -1], [0, 1, 1], [0, 1, -1]];
    let bodies: [[i64; 3]; 4] = [[1, 1, 1], [1, -1, 1], [1, 1, -1], [1, -1, -1]];

    let mut coords: Vec<[i64; 3]> = Vec::new();
    coords.extend(axes);
    coords.extend(faces);
    coords.extend(bodies);

    let dot = |a: &[i64; 3], b: &[i64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let mut bases: Vec<Vec<usize>> = vec![
        vec![0, 1, 2],  // the three axes
        vec![0, 7, 8],  // (1,0,0) with the two (0,1,±1) diagonals
        vec![1, 5, 6],  // (0,1,0) with the two (1,0,±1) diagonals
        vec![2, 3, 4],  // (0,0,1) with the two (1,±1,0) diagonals
    ];
    // every orthogonal body/face pair completes to a basis through the
    // cross product; the completion is a new {±2,±1,±1}-type ray
    for (bi, body) in bodies.iter().enumerate() {
        for (fi, face) in faces.iter().enumerate() {
            if dot(body, face) != 0 {
                continue;
            }
            let completion = sign_normalize(cross(body, face));
            let ci = coords.len();
            coords.push(completion);
            bases.push(vec![3 + fi, 9 + bi, ci]);
        }
    }
    let rays = coords.iter().map(|c| real_ray(c)).collect();
    RaySet::new(3, rays, bases).unwrap()
}

/// Three bases of dimension 2 sharing no rays; independently satisfiable
/// per basis, hence satisfiable overall.
pub fn dim2_rays() -> RaySet {
    let rays = vec![
        real_ray(&[1, 0]),
        real_ray(&[0, 1]),
        real_ray(&[3, 4]),
        real_ray(&[4, -3]),
        real_ray(&[1, 1]),
        real_ray(&[1, -1]),
    ];
    RaySet::new(2, rays, vec![vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap()
}

/// The diagonal observable `diag(1,2,2)` used by the CLI walkthrough.
pub fn observable_diag122() -> CMatrix {
    diag(&[1, 2, 2])
}

/// The open interval (1/2, 3/2), which selects only the eigenvalue 1 of
/// [`observable_diag122`].
pub fn unit_open() -> crate::open::RationalOpen {
    crate::open::RationalOpen::bounded(rat(1, 2), rat(3, 2)).unwrap()
}

/// The pure state concentrated on the third coordinate axis of C³.
pub fn state_e3() -> crate::state::State {
    crate::state::State::new(CMatrix::diag_rational(&[
        Rational::from_integer(0.into()),
        Rational::from_integer(0.into()),
        Rational::from_integer(1.into()),
    ]))
    .unwrap()
}

/// Every shipped fixture as `(file name, canonical JSON text)`. The
/// `generate_fixtures` example writes these under `fixtures/`; a test
/// compares the files on disk byte for byte against this list.
pub fn shipped_fixture_texts() -> Vec<(&'static str, String)> {
    use crate::json::{
        context_to_dto, matrix_to_dto, open_to_dto, poset_to_dto, rayset_to_dto, sigma_to_dto,
        state_to_dto, to_pretty_string, PosetRefDto, SeedsDto,
    };
    let m3 = m3_poset();
    let sigma = excluded_middle_sigma(&m3).expect("fixture frame element");
    vec![
        ("m3_poset.json", to_pretty_string(&poset_to_dto(&m3))),
        (
            "m3_excluded_middle_sigma.json",
            to_pretty_string(&sigma_to_dto(
                &sigma,
                PosetRefDto::Label("m3_poset.json".into()),
            )),
        ),
        (
            "m3_seeds.json",
            to_pretty_string(&SeedsDto::Wrapped {
                seeds: m3_seed_contexts().iter().map(context_to_dto).collect(),
            }),
        ),
        ("m2_star_poset.json", to_pretty_string(&poset_to_dto(&m2_star_poset()))),
        ("m2_chain_poset.json", to_pretty_string(&poset_to_dto(&m2_chain_poset()))),
        ("m3_chain_poset.json", to_pretty_string(&poset_to_dto(&m3_chain_poset()))),
        (
            "cabello18.json",
            to_pretty_string(&rayset_to_dto(
                &ks18_rays(),
                Some(
                    "18 rays in dimension 4 arranged in 9 orthogonal bases; \
                     every ray lies in exactly two bases, so no one-per-basis \
                     valuation exists"
                        .into(),
                ),
            )),
        ),
        (
            "cube25_dim3.json",
            to_pretty_string(&rayset_to_dto(
                &cube_rays_dim3(),
                Some(
                    "cube-symmetric rational family in dimension 3: axes, face \
                     and body diagonals, and cross-product completions (25 rays, \
                     16 bases); rational orthogonality in dimension 3 is always \
                     satisfiable"
                        .into(),
                ),
            )),
        ),
        (
            "dim2_rays.json",
            to_pretty_string(&rayset_to_dto(
                &dim2_rays(),
                Some("three disjoint orthogonal bases of the rational plane; satisfiable".into()),
            )),
        ),
        (
            "observable_diag122.json",
            to_pretty_string(&matrix_to_dto(&observable_diag122())),
        ),
        ("open_unit.json", to_pretty_string(&open_to_dto(&unit_open()))),
        ("state_e3.json", to_pretty_string(&state_to_dto(&state_e3()))),
    ]
}
