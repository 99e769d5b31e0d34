//! Smooth complete two-dimensional fans and their boundary divisors.
//!
//! Rays are stored counterclockwise. Indices in the Rust API are 0-based;
//! text renderings use 1-based indices.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::lattice::{self, IntMatrix};

pub type Vec2 = [i64; 2];

pub fn det2(a: Vec2, b: Vec2) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

pub fn pair2(u: Vec2, v: Vec2) -> i64 {
    u[0] * v[0] + u[1] * v[1]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanDefect {
    TooFewRays(usize),
    ZeroRay(usize),
    NonPrimitive(usize),
    /// det(vᵢ, vᵢ₊₁) for a consecutive pair that is not 1.
    AdjacentDeterminant { index: usize, next: usize, det: i64 },
    /// The rays turn around the origin `winding` times instead of once.
    Winding(i64),
}

impl fmt::Display for FanDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FanDefect::TooFewRays(n) => write!(f, "incomplete fan: {n} rays, need at least 3"),
            FanDefect::ZeroRay(i) => write!(f, "ray {} is zero", i + 1),
            FanDefect::NonPrimitive(i) => write!(f, "ray {} is not primitive", i + 1),
            FanDefect::AdjacentDeterminant { index, next, det } => {
                let what = if *det < 0 { "wrong orientation" } else { "not smooth" };
                write!(f, "det(v{}, v{}) = {det} ({what})", index + 1, next + 1)
            }
            FanDefect::Winding(w) => write!(f, "rays wind {w} times around the origin"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct FanError(pub Vec<FanDefect>);

impl fmt::Display for FanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "invalid fan: {}", parts.join("; "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan2D {
    rays: Vec<Vec2>,
    selfint: Vec<i64>,
}

/// Coefficient vector (a₁..aₙ) of Σ aᵢ D̄ᵢ.
pub type ToricDivisor = Vec<i64>;

impl Fan2D {
    pub fn new(rays: Vec<Vec2>) -> Result<Self, FanError> {
        validate_fan(rays)
    }

    pub fn n(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[Vec2] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> Vec2 {
        self.rays[i]
    }

    pub fn prev(&self, i: usize) -> usize {
        (i + self.n() - 1) % self.n()
    }

    pub fn next(&self, i: usize) -> usize {
        (i + 1) % self.n()
    }

    /// b̄ᵢ with vᵢ₋₁ + vᵢ₊₁ = −b̄ᵢ vᵢ.
    pub fn self_intersections(&self) -> &[i64] {
        &self.selfint
    }

    /// D̄ᵢ·D̄ⱼ.
    pub fn boundary_pairing(&self, i: usize, j: usize) -> i64 {
        if i == j {
            self.selfint[i]
        } else if j == self.next(i) || j == self.prev(i) {
            // n = 3 cannot double count: next ≠ prev.
            1
        } else {
            0
        }
    }

    /// (a·D̄ᵢ)ᵢ
    pub fn degrees(&self, a: &[i64]) -> Vec<i64> {
        assert_eq!(a.len(), self.n(), "divisor length");
        (0..self.n())
            .map(|i| a[self.prev(i)] + a[i] * self.selfint[i] + a[self.next(i)])
            .collect()
    }

    pub fn toric_intersection(&self, a: &[i64], b: &[i64]) -> i64 {
        self.degrees(a).iter().zip(b).map(|(d, x)| d * x).sum()
    }

    /// Rows (⟨e₁, vᵢ⟩)ᵢ and (⟨e₂, vᵢ⟩)ᵢ: the divisors of the characters.
    pub fn character_relations(&self) -> IntMatrix {
        let rows = vec![
            self.rays.iter().map(|v| v[0]).collect(),
            self.rays.iter().map(|v| v[1]).collect(),
        ];
        IntMatrix::from_rows(&rows, self.n())
    }

    /// div(χᵘ) = Σ ⟨u, vᵢ⟩ D̄ᵢ
    pub fn principal(&self, u: Vec2) -> ToricDivisor {
        self.rays.iter().map(|&v| pair2(u, v)).collect()
    }

    /// The representative of [a] with a₁ = a₂ = 0.
    pub fn canonical(&self, a: &[i64]) -> ToricDivisor {
        let (v1, v2) = (self.rays[0], self.rays[1]);
        let (g1, g2) = (a[0], a[1]);
        // [[v1x, v1y], [v2x, v2y]] u = (g1, g2), determinant 1.
        let u = [g1 * v2[1] - g2 * v1[1], -g1 * v2[0] + g2 * v1[0]];
        let p = self.principal(u);
        let out: ToricDivisor = a.iter().zip(&p).map(|(x, y)| x - y).collect();
        debug_assert!(out[0] == 0 && out[1] == 0);
        out
    }

    pub fn is_nef(&self, a: &[i64]) -> bool {
        self.degrees(a).iter().all(|&d| d >= 0)
    }

    /// Some h with h·D̄ᵢ ≥ 1 for all i, found by searching canonical
    /// representatives in boxes of growing radius. The search stops once a
    /// box would exceed `SEARCH_BUDGET` points, and the explicit solution is
    /// returned instead.
    pub fn ample_witness(&self) -> ToricDivisor {
        const SEARCH_BUDGET: u64 = 1 << 16;
        let free = self.n() - 2;
        let explicit = self.explicit_ample();
        let bound = explicit[2..].iter().map(|x| x.abs()).max().unwrap_or(0);
        for radius in 0..=bound {
            if (2 * radius as u64 + 1).saturating_pow(free as u32) > SEARCH_BUDGET {
                break;
            }
            let mut coords = vec![-radius; free];
            loop {
                if coords.iter().any(|c| c.abs() == radius) {
                    let mut a = vec![0, 0];
                    a.extend_from_slice(&coords);
                    if self.degrees(&a).iter().all(|&d| d >= 1) {
                        return a;
                    }
                }
                let mut k = 0;
                while k < free && coords[k] == radius {
                    coords[k] = -radius;
                    k += 1;
                }
                if k == free {
                    break;
                }
                coords[k] += 1;
            }
        }
        assert!(self.degrees(&explicit).iter().all(|&d| d >= 1), "no ample divisor with coefficients up to {bound}");
        explicit
    }

    /// A canonical divisor with prescribed positive degrees: for each i,
    /// −vᵢ lies in some cone (vⱼ, vⱼ₊₁), which gives a nonnegative balanced
    /// vector supported on {i, j, j+1}; their sum is positive and balanced,
    /// hence the degree vector of a unique canonical divisor.
    fn explicit_ample(&self) -> ToricDivisor {
        let n = self.n();
        let mut d = vec![0i64; n];
        for i in 0..n {
            let w = [-self.rays[i][0], -self.rays[i][1]];
            let j = (0..n)
                .find(|&j| det2(self.rays[j], w) >= 0 && det2(w, self.rays[self.next(j)]) >= 0)
                .expect("complete fan");
            d[i] += 1;
            d[j] += det2(w, self.rays[self.next(j)]);
            d[self.next(j)] += det2(self.rays[j], w);
        }
        let rows: Vec<Vec<i64>> = (0..n).map(|i| (2..n).map(|k| self.boundary_pairing(k, i)).collect()).collect();
        let x = lattice::solve(&IntMatrix::from_rows(&rows, n - 2), &d).expect("balanced degrees are attained");
        let mut a = vec![0, 0];
        a.extend(x);
        a
    }

    /// Vertex of the polytope of `a` dual to the cone (vᵢ, vᵢ₊₁).
    fn polytope_vertex(&self, a: &[i64], i: usize) -> Vec2 {
        let j = self.next(i);
        let (v, w) = (self.rays[i], self.rays[j]);
        let (p, q) = (-a[i], -a[j]);
        // ⟨u, v⟩ = p, ⟨u, w⟩ = q with det(v, w) = 1.
        [p * w[1] - q * v[1], -p * w[0] + q * v[0]]
    }

    /// Lattice points of each face of P = {u : ⟨u, vᵢ⟩ ≥ −aᵢ}, from the
    /// endpoint shared with face i−1 to the endpoint shared with face i+1.
    pub fn polytope_edges(&self, a: &[i64]) -> PolytopeEdgeData {
        assert!(self.is_nef(a), "polytope_edges needs a nef divisor");
        let d = self.degrees(a);
        let faces = (0..self.n())
            .map(|i| {
                let start = self.polytope_vertex(a, self.prev(i));
                let v = self.rays[i];
                let step = [v[1], -v[0]];
                let pts: Vec<Vec2> = (0..=d[i]).map(|k| [start[0] + k * step[0], start[1] + k * step[1]]).collect();
                debug_assert_eq!(*pts.last().unwrap(), self.polytope_vertex(a, i));
                pts
            })
            .collect();
        PolytopeEdgeData { faces, lengths: d }
    }

    /// All lattice points of P, sorted lexicographically.
    pub fn polytope_points(&self, a: &[i64]) -> Vec<Vec2> {
        assert!(self.is_nef(a), "polytope_points needs a nef divisor");
        let verts: Vec<Vec2> = (0..self.n()).map(|i| self.polytope_vertex(a, i)).collect();
        let lo = [verts.iter().map(|v| v[0]).min().unwrap(), verts.iter().map(|v| v[1]).min().unwrap()];
        let hi = [verts.iter().map(|v| v[0]).max().unwrap(), verts.iter().map(|v| v[1]).max().unwrap()];
        let mut out = Vec::new();
        for x in lo[0]..=hi[0] {
            for y in lo[1]..=hi[1] {
                if self.rays.iter().zip(a).all(|(&v, &ai)| pair2([x, y], v) >= -ai) {
                    out.push([x, y]);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeEdgeData {
    pub faces: Vec<Vec<Vec2>>,
    pub lengths: Vec<i64>,
}

/// Validates a counterclockwise smooth complete fan.
pub fn validate_fan(rays: Vec<Vec2>) -> Result<Fan2D, FanError> {
    let n = rays.len();
    let mut defects = Vec::new();
    for (i, v) in rays.iter().enumerate() {
        if *v == [0, 0] {
            defects.push(FanDefect::ZeroRay(i));
        } else if v[0].gcd(&v[1]) != 1 {
            defects.push(FanDefect::NonPrimitive(i));
        }
    }
    if n < 3 {
        defects.push(FanDefect::TooFewRays(n));
        return Err(FanError(defects));
    }
    for i in 0..n {
        let d = det2(rays[i], rays[(i + 1) % n]);
        if d != 1 {
            defects.push(FanDefect::AdjacentDeterminant { index: i, next: (i + 1) % n, det: d });
        }
    }
    if !defects.is_empty() {
        return Err(FanError(defects));
    }
    // Every step turns counterclockwise by less than π; count the steps whose
    // half-open cone [vᵢ, vᵢ₊₁) contains the direction (1, 0).
    let e = [1, 0];
    let winding = (0..n)
        .filter(|&i| {
            let (v, w) = (rays[i], rays[(i + 1) % n]);
            let on_v = det2(v, e) == 0 && pair2(v, e) > 0;
            (on_v || det2(v, e) > 0) && det2(e, w) > 0
        })
        .count() as i64;
    if winding != 1 {
        return Err(FanError(vec![FanDefect::Winding(winding)]));
    }
    let selfint = (0..n)
        .map(|i| {
            let v = rays[i];
            let s = [rays[(i + n - 1) % n][0] + rays[(i + 1) % n][0], rays[(i + n - 1) % n][1] + rays[(i + 1) % n][1]];
            let b = if v[0] != 0 { -s[0] / v[0] } else { -s[1] / v[1] };
            assert_eq!([-b * v[0], -b * v[1]], s, "neighbours of a smooth cone sum to a multiple");
            b
        })
        .collect();
    Ok(Fan2D { rays, selfint })
}

/// Named fans used by the CLI and tests.
pub fn catalogue() -> Vec<(&'static str, Fan2D)> {
    let f = |r: &[Vec2]| validate_fan(r.to_vec()).expect("catalogue fan is valid");
    vec![
        ("P2", f(&[[1, 0], [0, 1], [-1, -1]])),
        ("F0", f(&[[1, 0], [0, 1], [-1, 0], [0, -1]])),
        ("F1", f(&[[1, 0], [1, 1], [0, 1], [-1, -1]])),
        ("F2", f(&[[1, 0], [0, 1], [-1, 2], [0, -1]])),
        ("dP7", f(&[[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1]])),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p2() -> Fan2D {
        Fan2D::new(vec![[1, 0], [0, 1], [-1, -1]]).unwrap()
    }

    fn f2() -> Fan2D {
        Fan2D::new(vec![[1, 0], [0, 1], [-1, 2], [0, -1]]).unwrap()
    }

    fn f0() -> Fan2D {
        Fan2D::new(vec![[1, 0], [0, 1], [-1, 0], [0, -1]]).unwrap()
    }

    fn unit(n: usize, i: usize) -> Vec<i64> {
        let mut a = vec![0; n];
        a[i] = 1;
        a
    }

    #[test]
    fn validation() {
        assert!(Fan2D::new(vec![[1, 0], [0, 1], [-1, -1]]).is_ok());
        assert!(Fan2D::new(vec![[1, 0], [0, 1], [-1, 2], [0, -1]]).is_ok());
        let err = Fan2D::new(vec![[1, 0], [0, 2]]).unwrap_err();
        assert!(err.0.contains(&FanDefect::NonPrimitive(1)));
        assert!(err.0.contains(&FanDefect::TooFewRays(2)));
        let cw = Fan2D::new(vec![[1, 0], [-1, -1], [0, 1]]).unwrap_err();
        assert!(cw.0.iter().all(|d| matches!(d, FanDefect::AdjacentDeterminant { det: -1, .. })));
        let singular = Fan2D::new(vec![[1, 0], [1, 2], [-1, -1]]).unwrap_err();
        assert!(singular.0.contains(&FanDefect::AdjacentDeterminant { index: 0, next: 1, det: 2 }));
        // ℙ² traversed twice.
        let twice = Fan2D::new(vec![[1, 0], [0, 1], [-1, -1], [1, 0], [0, 1], [-1, -1]]).unwrap_err();
        assert_eq!(twice.0, vec![FanDefect::Winding(2)]);
    }

    #[test]
    fn self_intersection_examples() {
        assert_eq!(p2().self_intersections(), &[1, 1, 1]);
        assert_eq!(f2().self_intersections(), &[0, -2, 0, 2]);
        assert_eq!(f0().self_intersections(), &[0, 0, 0, 0]);
    }

    #[test]
    fn intersection_examples() {
        let f = p2();
        assert_eq!(f.toric_intersection(&unit(3, 0), &unit(3, 1)), 1);
        assert_eq!(f.toric_intersection(&unit(3, 0), &unit(3, 0)), 1);
        assert_eq!(f.toric_intersection(&[1, -1, 0], &unit(3, 2)), 0);
    }

    #[test]
    fn relation_rows() {
        assert_eq!(p2().character_relations().to_rows(), vec![vec![1, 0, -1], vec![0, 1, -1]]);
        assert_eq!(f2().character_relations().to_rows(), vec![vec![1, 0, -1, 0], vec![0, 1, 2, -1]]);
    }

    #[test]
    fn nef_and_ample() {
        assert!(p2().is_nef(&unit(3, 0)));
        assert!(!f2().is_nef(&unit(4, 1)));
        for (_, fan) in catalogue() {
            let h = fan.ample_witness();
            assert!(fan.degrees(&h).iter().all(|&d| d >= 1));
        }
    }

    #[test]
    fn polytope_examples() {
        let f = p2();
        let mut pts = f.polytope_points(&unit(3, 0));
        pts.sort();
        assert_eq!(pts, vec![[-1, 0], [-1, 1], [0, 0]]);
        let e = f.polytope_edges(&unit(3, 0));
        assert_eq!(e.faces[0], vec![[-1, 1], [-1, 0]]);
        assert_eq!(e.lengths, vec![1, 1, 1]);

        let z = f.polytope_edges(&[0, 0, 0]);
        assert!(z.faces.iter().all(|pts| pts == &vec![[0, 0]]));
        assert!(z.lengths.iter().all(|&d| d == 0));

        let q = f0();
        let e = q.polytope_edges(&[1, 1, 1, 1]);
        assert!(e.faces.iter().all(|pts| pts.len() == 3));
        assert_eq!(e.lengths, vec![2, 2, 2, 2]);
        assert_eq!(q.polytope_points(&[1, 1, 1, 1]).len(), 9);
    }

    /// A random smooth complete fan, grown from ℙ² or 𝔽₀ by toric blowups.
    pub(crate) fn arb_fan() -> impl Strategy<Value = Fan2D> {
        (any::<bool>(), proptest::collection::vec(0usize..64, 0..4)).prop_map(|(start, ops)| {
            let mut rays: Vec<Vec2> =
                if start { vec![[1, 0], [0, 1], [-1, -1]] } else { vec![[1, 0], [0, 1], [-1, 0], [0, -1]] };
            for op in ops {
                let i = op % rays.len();
                let j = (i + 1) % rays.len();
                rays.insert(i + 1, [rays[i][0] + rays[j][0], rays[i][1] + rays[j][1]]);
            }
            Fan2D::new(rays).unwrap()
        })
    }

    proptest! {
        #[test]
        fn noether_identity(fan in arb_fan()) {
            let n = fan.n() as i64;
            prop_assert_eq!(fan.self_intersections().iter().sum::<i64>() + 3 * n, 12);
        }

        #[test]
        fn balancing_of_degrees(fan in arb_fan(), a in proptest::collection::vec(-3i64..=3, 8)) {
            let a = &a[..fan.n()];
            let d = fan.degrees(a);
            let s = fan.rays().iter().zip(&d).fold([0, 0], |acc, (v, di)| [acc[0] + di * v[0], acc[1] + di * v[1]]);
            prop_assert_eq!(s, [0, 0]);
        }

        #[test]
        fn relations_are_numerically_trivial(fan in arb_fan()) {
            let r = fan.character_relations();
            for row in r.to_rows() {
                for i in 0..fan.n() {
                    prop_assert_eq!(fan.toric_intersection(&row, &unit(fan.n(), i)), 0);
                }
            }
        }

        #[test]
        fn canonical_representative_is_equivalent(fan in arb_fan(), a in proptest::collection::vec(-3i64..=3, 8)) {
            let a = &a[..fan.n()];
            let c = fan.canonical(a);
            prop_assert_eq!(fan.degrees(a), fan.degrees(&c));
            prop_assert_eq!(fan.canonical(&c), c);
        }

        #[test]
        fn nef_polytope_faces(fan in arb_fan(), a in proptest::collection::vec(-2i64..=2, 8), scale in 0i64..3) {
            let h = fan.ample_witness();
            let a: Vec<i64> = a[..fan.n()].iter().zip(&h).map(|(x, y)| x + (scale + 3) * y).collect();
            prop_assume!(fan.is_nef(&a));
            let e = fan.polytope_edges(&a);
            let pts = fan.polytope_points(&a);
            for (i, &ai) in a.iter().enumerate() {
                prop_assert_eq!(e.faces[i].len() as i64, e.lengths[i] + 1);
                prop_assert_eq!(e.faces[i].last(), e.faces[fan.next(i)].first());
                for p in &e.faces[i] {
                    prop_assert!(pts.contains(p));
                    prop_assert_eq!(pair2(*p, fan.ray(i)), -ai);
                }
            }
            // Face points are exactly the polytope points minimizing ⟨·, vᵢ⟩.
            for (i, &ai) in a.iter().enumerate() {
                let on_face = pts.iter().filter(|p| pair2(**p, fan.ray(i)) == -ai).count();
                prop_assert_eq!(on_face, e.faces[i].len());
            }
        }
    }
}
