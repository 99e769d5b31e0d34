//! The skeleton of a Looijenga pair as a decorated combinatorial object.
//!
//! The underlying space is ℝ² with the toric vertex at the origin and the
//! singular vertex vⱼᶦ at (j+1)·vᵢ (slots are 0-based). The cotangent local
//! system is trivialized on the complement of the branch cuts, where the cut
//! of vⱼᶦ runs from vⱼᶦ to infinity along vᵢ. Crossing the cut of a vertex on
//! ray i counterclockwise applies Cᵢ: ξ ↦ ξ + ⟨ξ, vᵢ⟩·ěᵢ with
//! ěᵢ = det(vᵢ, ·).
//!
//! Around a single singular vertex the four chart stars C1..C4 are ordered
//! counterclockwise with C1 pointing at the origin. Their transitions on
//! cotangent coordinates are the matrices (b 1; −1 0) with b = −1 for
//! C1 → C2 and b = 0 for the other three.

use std::fmt;

use thiserror::Error;

use crate::field::{LaurentScalar, Valuation};
use crate::lattice::{self, IntMatrix};
use crate::pair::LooijengaPair;
use crate::toric::{pair2, Fan2D, Vec2};

/// Row-major 2×2 integer matrix.
pub type Mat2 = [[i64; 2]; 2];

pub const IDENTITY: Mat2 = [[1, 0], [0, 1]];

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

pub fn mat_vec(a: &Mat2, x: Vec2) -> Vec2 {
    [a[0][0] * x[0] + a[0][1] * x[1], a[1][0] * x[0] + a[1][1] * x[1]]
}

pub fn mat_det(a: &Mat2) -> i64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub fn mat_transpose(a: &Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

/// Inverse of a unimodular matrix.
pub fn mat_inv(a: &Mat2) -> Mat2 {
    let d = mat_det(a);
    assert!(d == 1 || d == -1, "matrix is not unimodular");
    [[d * a[1][1], -d * a[0][1]], [-d * a[1][0], d * a[0][0]]]
}

pub fn mat_pow(a: &Mat2, k: i64) -> Mat2 {
    let base = if k < 0 { mat_inv(a) } else { *a };
    (0..k.unsigned_abs()).fold(IDENTITY, |acc, _| mat_mul(&acc, &base))
}

/// Matrix with the given columns.
pub fn from_columns(c0: Vec2, c1: Vec2) -> Mat2 {
    [[c0[0], c1[0]], [c0[1], c1[1]]]
}

/// Invariant cotangent direction ěᵢ = det(vᵢ, ·) of a vertex on ray v.
pub fn invariant_cotangent(v: Vec2) -> Vec2 {
    [-v[1], v[0]]
}

/// The adapted basis (ě, d̂): d̂ pairs to 1 with v and is the completion
/// minimizing (|d̂₁|, |d̂₂|) lexicographically.
pub fn adapted_basis(v: Vec2) -> (Vec2, Vec2) {
    let e = invariant_cotangent(v);
    let bound = v[0].abs().max(v[1].abs()) + 1;
    let mut best: Option<Vec2> = None;
    for a in -bound..=bound {
        for b in -bound..=bound {
            if pair2([a, b], v) == 1 {
                let key = |d: Vec2| (d[0].abs(), d[1].abs(), d[0], d[1]);
                if best.is_none_or(|d| key([a, b]) < key(d)) {
                    best = Some([a, b]);
                }
            }
        }
    }
    (e, best.expect("primitive vectors have a dual completion"))
}

/// Cᵢ acting on cotangent coordinates: I + ěᵢ vᵢᵀ.
pub fn cut_matrix(v: Vec2) -> Mat2 {
    let e = invariant_cotangent(v);
    [[1 + e[0] * v[0], e[0] * v[1]], [e[1] * v[0], 1 + e[1] * v[1]]]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Star {
    C1,
    C2,
    C3,
    C4,
}

impl Star {
    pub const ALL: [Star; 4] = [Star::C1, Star::C2, Star::C3, Star::C4];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Star {
        Star::ALL[i % 4]
    }

    pub fn next(self) -> Star {
        Star::from_index(self.index() + 1)
    }

    pub fn prev(self) -> Star {
        Star::from_index(self.index() + 3)
    }
}

impl fmt::Display for Star {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.index() + 1)
    }
}

/// Self-intersections of the boundary curves of the quadrilateral component
/// met when passing C1 → C2, C2 → C3, C3 → C4, C4 → C1.
pub const QUAD_B: [i64; 4] = [-1, 0, 0, 0];

pub fn transition_of(b: i64) -> Mat2 {
    [[b, 1], [-1, 0]]
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkeletonError {
    #[error("charts {0} and {1} are not adjacent")]
    NotAdjacent(Star, Star),
    #[error("no singular vertex at ray {ray}, slot {slot}")]
    NoVertex { ray: usize, slot: usize },
    #[error("empty vertex range")]
    EmptyRange,
    #[error("local fan needs r >= 1 and {expected} multiplicities, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("local fan needs b_i > 0, got b_{index} = {value}")]
    NonPositive { index: usize, value: i64 },
    #[error("multiplicities violate N_0 + N_inf = sum b_i N_i ({lhs} != {rhs})")]
    Principal { lhs: i64, rhs: i64 },
    #[error("maximal cone {0} is not unimodular (|det| = {1})")]
    NotUnimodular(&'static str, i64),
}

/// Transition of cotangent coordinates between adjacent stars around one
/// vertex; the clockwise direction is the inverse.
pub fn transition_matrix(from: Star, to: Star) -> Result<Mat2, SkeletonError> {
    if to == from.next() {
        Ok(transition_of(QUAD_B[from.index()]))
    } else if to == from.prev() {
        Ok(mat_inv(&transition_of(QUAD_B[to.index()])))
    } else {
        Err(SkeletonError::NotAdjacent(from, to))
    }
}

/// Monodromy of a counterclockwise loop around one vertex, starting and
/// ending in `start`, as the composite of the four transitions.
pub fn quadrilateral_monodromy(start: Star) -> Mat2 {
    let mut m = IDENTITY;
    let mut s = start;
    for _ in 0..4 {
        let t = transition_matrix(s, s.next()).expect("adjacent");
        m = mat_mul(&t, &m);
        s = s.next();
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularVertex {
    pub ray: usize,
    pub slot: usize,
    pub position: Vec2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    fan: Fan2D,
    mus: Vec<Vec<LaurentScalar>>,
}

/// A ray crossing of a loop: `cuts` singular vertices of ray `ray` lie
/// strictly between the origin and the crossing point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub ray: usize,
    pub cuts: usize,
    pub counterclockwise: bool,
}

pub fn build_skeleton(pair: &LooijengaPair) -> Skeleton {
    Skeleton { fan: pair.fan().clone(), mus: pair.blowups().to_vec() }
}

impl Skeleton {
    pub fn fan(&self) -> &Fan2D {
        &self.fan
    }

    pub fn k(&self, i: usize) -> usize {
        self.mus[i].len()
    }

    pub fn vertices(&self) -> Vec<SingularVertex> {
        let mut out = Vec::new();
        for i in 0..self.fan.n() {
            let v = self.fan.ray(i);
            for j in 0..self.k(i) {
                let s = j as i64 + 1;
                out.push(SingularVertex { ray: i, slot: j, position: [s * v[0], s * v[1]] });
            }
        }
        out
    }

    fn check_vertex(&self, ray: usize, slot: usize) -> Result<(), SkeletonError> {
        if ray < self.fan.n() && slot < self.k(ray) {
            Ok(())
        } else {
            Err(SkeletonError::NoVertex { ray: ray + 1, slot: slot + 1 })
        }
    }

    /// Transport of cotangent coordinates along a sequence of ray crossings.
    pub fn loop_monodromy(&self, crossings: &[Crossing]) -> Mat2 {
        crossings.iter().fold(IDENTITY, |acc, c| {
            let cuts = c.cuts.min(self.k(c.ray)) as i64;
            let step = mat_pow(&cut_matrix(self.fan.ray(c.ray)), if c.counterclockwise { cuts } else { -cuts });
            mat_mul(&step, &acc)
        })
    }

    /// Monodromy of a counterclockwise loop enclosing exactly the vertices of
    /// ray `ray` in slots `first..=last`, in the adapted basis (ě, d̂).
    pub fn int_monodromy(&self, ray: usize, first: usize, last: usize) -> Result<Mat2, SkeletonError> {
        if first > last {
            return Err(SkeletonError::EmptyRange);
        }
        self.check_vertex(ray, first)?;
        self.check_vertex(ray, last)?;
        // The loop crosses the ray once beyond the last enclosed vertex going
        // counterclockwise and once before the first going clockwise.
        let m = self.loop_monodromy(&[
            Crossing { ray, cuts: last + 1, counterclockwise: true },
            Crossing { ray, cuts: first, counterclockwise: false },
        ]);
        let (e, d) = adapted_basis(self.fan.ray(ray));
        let b = from_columns(e, d);
        Ok(mat_mul(&mat_inv(&b), &mat_mul(&m, &b)))
    }

    /// K-affine monodromy around vⱼᶦ on chart coordinates (a, b):
    /// (a, b) ↦ (a/μ, a·b).
    pub fn kaffine_monodromy(&self, ray: usize, slot: usize) -> Result<AffineTransformK, SkeletonError> {
        self.check_vertex(ray, slot)?;
        let mu = &self.mus[ray][slot];
        Ok(AffineTransformK {
            matrix: [[1, 0], [1, 1]],
            translation: [mu.inv().expect("blowup parameters are units"), LaurentScalar::one()],
        })
    }

    /// Composite for a loop enclosing slots `first..=last`: the innermost
    /// vertex is traversed first.
    pub fn kaffine_monodromy_range(&self, ray: usize, first: usize, last: usize) -> Result<AffineTransformK, SkeletonError> {
        if first > last {
            return Err(SkeletonError::EmptyRange);
        }
        let mut acc = AffineTransformK::identity();
        for j in first..=last {
            acc = self.kaffine_monodromy(ray, j)?.compose(&acc);
        }
        Ok(acc)
    }

    /// Cotangent coordinates of the local S₁ frame at a vertex of `ray`,
    /// expressed in the global lattice: (1,0) ↦ d̂ and ěₕ = (0,1) ↦ ě.
    pub fn local_frame(&self, ray: usize) -> Mat2 {
        let (e, d) = adapted_basis(self.fan.ray(ray));
        from_columns(d, e)
    }

    pub fn cech_cocycle(&self) -> CechCocycle {
        let mut entries = Vec::new();
        for v in self.vertices() {
            let mu = self.mus[v.ray][v.slot].clone();
            entries.push(CechEntry { ray: v.ray, slot: v.slot, from: Star::C4, to: Star::C1, lambda: E_H, value: mu.clone() });
            entries.push(CechEntry {
                ray: v.ray,
                slot: v.slot,
                from: Star::C1,
                to: Star::C2,
                lambda: E_H,
                value: mu.inv().expect("units"),
            });
        }
        CechCocycle { entries }
    }
}

/// eₕ in S₁ coordinates.
pub const E_H: Vec2 = [0, 1];
/// ěₕ, the invariant cotangent direction, in S₁ coordinates.
pub const CHECK_E_H: Vec2 = [0, 1];
/// ě₀ in S₁ coordinates.
pub const CHECK_E_0: Vec2 = [-1, 0];

/// An element of GL₂(ℤ) ⋉ (K×)² acting on chart coordinates by
/// x ↦ c · x^M, i.e. xᵣ ↦ cᵣ · Πₛ xₛ^{Mᵣₛ}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineTransformK {
    pub matrix: Mat2,
    pub translation: [LaurentScalar; 2],
}

impl AffineTransformK {
    pub fn identity() -> Self {
        AffineTransformK { matrix: IDENTITY, translation: [LaurentScalar::one(), LaurentScalar::one()] }
    }

    pub fn apply(&self, x: &[LaurentScalar; 2]) -> [LaurentScalar; 2] {
        let row = |r: usize| {
            let p = &x[0].pow(self.matrix[r][0]).expect("nonzero coordinates")
                * &x[1].pow(self.matrix[r][1]).expect("nonzero coordinates");
            &self.translation[r] * &p
        };
        [row(0), row(1)]
    }

    /// self ∘ other: apply `other` first.
    pub fn compose(&self, other: &AffineTransformK) -> AffineTransformK {
        let pushed = AffineTransformK { matrix: self.matrix, translation: [LaurentScalar::one(), LaurentScalar::one()] }
            .apply(&other.translation);
        AffineTransformK {
            matrix: mat_mul(&self.matrix, &other.matrix),
            translation: [&self.translation[0] * &pushed[0], &self.translation[1] * &pushed[1]],
        }
    }

    /// Linear part on tangent vectors (the transpose of the exponent
    /// matrix) and the valuations of the translation.
    pub fn exponent_projection(&self) -> (Mat2, [Valuation; 2]) {
        (mat_transpose(&self.matrix), [self.translation[0].val(), self.translation[1].val()])
    }
}

impl fmt::Display for AffineTransformK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |r: usize| {
            let mut parts = vec![format!("({})", self.translation[r])];
            for (s, name) in ["a", "b"].iter().enumerate() {
                match self.matrix[r][s] {
                    0 => {}
                    1 => parts.push(name.to_string()),
                    k => parts.push(format!("{name}^{k}")),
                }
            }
            parts.join("*")
        };
        write!(f, "(a, b) -> ({}, {})", term(0), term(1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechEntry {
    pub ray: usize,
    pub slot: usize,
    pub from: Star,
    pub to: Star,
    pub lambda: Vec2,
    pub value: LaurentScalar,
}

/// Nontrivial values λ ⊗ c of the cocycle on overlaps of adjacent stars.
/// λ is in the S₁ frame of its vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechCocycle {
    pub entries: Vec<CechEntry>,
}

/// An overlap of stars crossed by a path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Overlap {
    /// Adjacent stars around the same vertex.
    Local { ray: usize, slot: usize, from: Star, to: Star },
    /// The same star (C2 or C4) of consecutive vertices on a ray.
    Along { ray: usize, from_slot: usize, to_slot: usize, star: Star },
    /// From a star of the innermost vertex of a ray into the star of the origin.
    ToOrigin { ray: usize, star: Star },
}

impl CechCocycle {
    /// (λ, c) on an overlap; reversed traversal gives c⁻¹ and unlisted
    /// overlaps carry the identity (λ = 0, c = 1).
    pub fn value(&self, overlap: &Overlap) -> (Vec2, LaurentScalar) {
        if let Overlap::Local { ray, slot, from, to } = *overlap {
            for e in &self.entries {
                if (e.ray, e.slot) != (ray, slot) {
                    continue;
                }
                if (e.from, e.to) == (from, to) {
                    return (e.lambda, e.value.clone());
                }
                if (e.from, e.to) == (to, from) {
                    return (e.lambda, e.value.inv().expect("units"));
                }
            }
        }
        ([0, 0], LaurentScalar::one())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFan {
    /// u₀, u₁, …, u_{r−1}, u_∞ in ℤ^{r+1}.
    pub rays: Vec<Vec<i64>>,
    /// N₀, N₁, …, N_r, N_∞.
    pub multiplicities: Vec<i64>,
    pub b: Vec<i64>,
}

impl LocalFan {
    pub fn r(&self) -> usize {
        self.b.len()
    }

    /// u_r = (0, …, 0, N_r), which completes both maximal cones.
    pub fn u_r(&self) -> Vec<i64> {
        let mut u = vec![0; self.r() + 1];
        u[self.r()] = self.multiplicities[self.r()];
        u
    }

    /// The two maximal cones {u₀, u₁..u_r} and {u_∞, u₁..u_r}.
    pub fn cones(&self) -> [IntMatrix; 2] {
        let r = self.r();
        let mids: Vec<Vec<i64>> = self.rays[1..r].iter().cloned().chain([self.u_r()]).collect();
        let mk = |first: &Vec<i64>| {
            let rows: Vec<Vec<i64>> = std::iter::once(first.clone()).chain(mids.iter().cloned()).collect();
            IntMatrix::from_rows(&rows, r + 1)
        };
        [mk(&self.rays[0]), mk(&self.rays[r])]
    }

    /// Points of the rays at height 1 (drops the last coordinate), for
    /// rays with multiplicity 1.
    pub fn height_one_slice(&self) -> Vec<Vec<i64>> {
        let r = self.r();
        let mut all: Vec<Vec<i64>> = self.rays[..r].to_vec();
        all.insert(r, self.u_r());
        all.push(self.rays[r].clone());
        all.iter().map(|u| u[..r].to_vec()).collect()
    }
}

/// The fan of the strictly semistable toric model along a boundary curve
/// meeting r components with intersection numbers b₁..b_r.
pub fn local_fan(b: &[i64], n: &[i64]) -> Result<LocalFan, SkeletonError> {
    let r = b.len();
    if r == 0 || n.len() != r + 2 {
        return Err(SkeletonError::Shape { expected: r + 2, got: n.len() });
    }
    if let Some((i, &v)) = b.iter().enumerate().find(|(_, &v)| v <= 0) {
        return Err(SkeletonError::NonPositive { index: i + 1, value: v });
    }
    let (n0, ninf) = (n[0], n[r + 1]);
    let rhs: i64 = b.iter().zip(&n[1..=r]).map(|(x, y)| x * y).sum();
    if n0 + ninf != rhs {
        return Err(SkeletonError::Principal { lhs: n0 + ninf, rhs });
    }
    let mut rays = Vec::with_capacity(r + 1);
    let mut u0 = vec![0; r + 1];
    u0[0] = 1;
    u0[r] = n0;
    rays.push(u0);
    for i in 1..r {
        let mut u = vec![0; r + 1];
        u[i] = 1;
        u[r] = n[i];
        rays.push(u);
    }
    let mut uinf = vec![0; r + 1];
    uinf[0] = -1;
    uinf[1..r].copy_from_slice(&b[..r - 1]);
    uinf[r] = ninf;
    rays.push(uinf);
    let fan = LocalFan { rays, multiplicities: n.to_vec(), b: b.to_vec() };
    for (name, cone) in ["sigma_0", "sigma_inf"].into_iter().zip(fan.cones()) {
        let d = lattice::det(&cone).abs();
        if d != 1 {
            return Err(SkeletonError::NotUnimodular(name, d));
        }
    }
    Ok(fan)
}

/// Checks the relation u₀ + u_∞ = Σ bᵢ uᵢ among the rays (with u_r adjoined).
pub fn local_fan_relation_holds(f: &LocalFan) -> bool {
    let r = f.r();
    let mut rhs = vec![0; r + 1];
    let mids: Vec<Vec<i64>> = f.rays[1..r].iter().cloned().chain([f.u_r()]).collect();
    for (bi, u) in f.b.iter().zip(&mids) {
        for (x, y) in rhs.iter_mut().zip(u) {
            *x += bi * y;
        }
    }
    let lhs: Vec<i64> = f.rays[0].iter().zip(&f.rays[r]).map(|(x, y)| x + y).collect();
    lhs == rhs
}
