//! Twisted simplicial homology of the skeleton with coefficients in ι*Λ̌.
//!
//! The complex triangulates the fan truncated one step beyond the last
//! singular vertex of each ray: points O and p·vᵢ for p = 1..kᵢ+1, with a
//! ladder triangulation of every cone. A cell carries H₀ of its open star
//! with coefficients in ι*Λ̌: ℤ² for every cell except a singular vertex,
//! whose open star is a disk around one focus-focus point and carries the
//! coinvariants Λ̌/ℤěᵢ ≅ ℤ, read off by pairing with vᵢ. Open stars are
//! acyclic, so this cosheaf computes the homology. (Closed-cell sections,
//! which would put ℤěᵢ on every cell touching a singular vertex, lose the
//! wing cycles: an edge joining two singular vertices blocks the loop that
//! separates them.)
//!
//! Chains are taken relative to the outer boundary of the disk, which
//! computes closed-support homology of the skeleton ≅ ℝ². With compact
//! supports the cokernel Λ̌_O/⟨ěᵢ⟩ would sit in H₀ instead of H₁.
//!
//! Cells inside an open cone use the trivialization of the complement of the
//! branch cuts. Cells on ray i use the limit from the clockwise side, so a
//! face on ray i of a cell in the cone (vᵢ, vᵢ₊₁) sees the coefficients of
//! that cell through Cᵢ^{−m}, m being the number of cuts crossed there.

use std::collections::HashMap;

use crate::lattice::{self, IntMatrix};
use crate::pair::LooijengaPair;
use crate::skeleton::{cut_matrix, mat_pow, mat_vec, Mat2, IDENTITY};
use crate::toric::{pair2, Vec2};
use crate::tropical::H1Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Point {
    /// `None` for the origin.
    ray: Option<usize>,
    /// Lattice distance from the origin along the ray.
    p: usize,
}

/// Where a cell lives, for choosing its trivialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Home {
    Origin,
    /// On ray i; `m` cuts lie strictly closer to the origin than the cell's interior.
    Ray { ray: usize, m: usize },
    /// Interior of the cone (vᵢ, vᵢ₊₁).
    Cone(usize),
}

#[derive(Clone, Debug)]
enum Group {
    Full,
    /// Λ̌/ℤě for the vertex on ray v, identified with ℤ by ⟨v, ·⟩.
    Coinvariants(Vec2),
}

impl Group {
    fn rank(&self) -> usize {
        match self {
            Group::Full => 2,
            Group::Coinvariants(_) => 1,
        }
    }

    fn generators(&self) -> Vec<Vec2> {
        match self {
            Group::Full => vec![[1, 0], [0, 1]],
            Group::Coinvariants(_) => panic!("singular vertices have no faces"),
        }
    }

    fn coords(&self, x: Vec2) -> Vec<i64> {
        match self {
            Group::Full => x.to_vec(),
            Group::Coinvariants(v) => vec![pair2(*v, x)],
        }
    }
}

struct Complex<'a> {
    pair: &'a LooijengaPair,
    points: Vec<Point>,
    index: HashMap<Point, usize>,
}

impl<'a> Complex<'a> {
    fn new(pair: &'a LooijengaPair) -> Self {
        let mut points = vec![Point { ray: None, p: 0 }];
        for i in 0..pair.n() {
            for p in 1..=pair.k()[i] + 1 {
                points.push(Point { ray: Some(i), p });
            }
        }
        let index = points.iter().enumerate().map(|(a, &pt)| (pt, a)).collect();
        Complex { pair, points, index }
    }

    fn id(&self, ray: usize, p: usize) -> usize {
        if p == 0 {
            0
        } else {
            self.index[&Point { ray: Some(ray), p }]
        }
    }

    fn is_singular(&self, a: usize) -> Option<usize> {
        let pt = self.points[a];
        pt.ray.filter(|&i| pt.p >= 1 && pt.p <= self.pair.k()[i])
    }

    /// Counterclockwise triangles.
    fn triangles(&self) -> Vec<([usize; 3], usize)> {
        let n = self.pair.n();
        let mut out = Vec::new();
        for i in 0..n {
            let j = (i + 1) % n;
            let (la, lb) = (self.pair.k()[i] + 1, self.pair.k()[j] + 1);
            out.push(([0, self.id(i, 1), self.id(j, 1)], i));
            let (mut a, mut b) = (1, 1);
            while a < la || b < lb {
                if a < la && (b == lb || a <= b) {
                    out.push(([self.id(i, a), self.id(i, a + 1), self.id(j, b)], i));
                    a += 1;
                } else {
                    out.push(([self.id(i, a), self.id(j, b + 1), self.id(j, b)], i));
                    b += 1;
                }
            }
        }
        out
    }

    fn home(&self, verts: &[usize], cone: usize) -> Home {
        let pts: Vec<Point> = verts.iter().map(|&a| self.points[a]).collect();
        let rays: Vec<usize> = pts.iter().filter_map(|p| p.ray).collect();
        if rays.is_empty() {
            return Home::Origin;
        }
        if verts.len() < 3 && rays.iter().all(|&r| r == rays[0]) {
            let i = rays[0];
            let lo = pts.iter().map(|p| p.p).min().unwrap();
            let k = self.pair.k()[i];
            // A vertex at p sees p−1 cuts inside; an edge (p, p+1) sees p.
            let m = if verts.len() == 1 { (lo - 1).min(k) } else { lo.min(k) };
            return Home::Ray { ray: i, m };
        }
        Home::Cone(cone)
    }

    fn is_outer(&self, verts: &[usize]) -> bool {
        verts.len() < 3
            && verts.iter().all(|&a| {
                let pt = self.points[a];
                pt.ray.is_some_and(|i| pt.p == self.pair.k()[i] + 1)
            })
    }

    fn group(&self, verts: &[usize]) -> Group {
        match verts {
            [a] => self.is_singular(*a).map_or(Group::Full, |i| Group::Coinvariants(self.pair.fan().ray(i))),
            _ => Group::Full,
        }
    }

    /// Change of trivialization from a cell to its face.
    fn transport(&self, from: Home, to: Home) -> Mat2 {
        match (from, to) {
            (Home::Cone(c), Home::Ray { ray, m }) if c == ray => {
                mat_pow(&cut_matrix(self.pair.fan().ray(ray)), -(m as i64))
            }
            _ => IDENTITY,
        }
    }
}

struct Cell {
    verts: Vec<usize>,
    /// On the outer boundary circle; dropped from relative chains.
    outer: bool,
    home: Home,
    group: Group,
    offset: usize,
}

fn boundary(cx: &Complex, cells: &[Cell], faces: &[Cell], face_index: &HashMap<Vec<usize>, usize>, rows: usize, cols: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, cols);
    for cell in cells.iter().filter(|c| !c.outer) {
        let k = cell.verts.len();
        for drop in 0..k {
            let mut f: Vec<usize> = cell.verts.iter().enumerate().filter(|&(x, _)| x != drop).map(|(_, &v)| v).collect();
            let mut sign: i64 = if drop % 2 == 0 { 1 } else { -1 };
            let mut sorted = f.clone();
            sorted.sort_unstable();
            if f.len() == 2 && sorted != f {
                sign = -sign;
            }
            f = sorted;
            let face = &faces[face_index[&f]];
            if face.outer {
                continue;
            }
            let t = cx.transport(cell.home, face.home);
            for (g, gen) in cell.group.generators().into_iter().enumerate() {
                let image = face.group.coords(mat_vec(&t, gen));
                for (h, coef) in image.into_iter().enumerate() {
                    m[(face.offset + h, cell.offset + g)] += sign * coef;
                }
            }
        }
    }
    m
}

fn layout(cells: &mut [Cell]) -> usize {
    let mut off = 0;
    for c in cells.iter_mut().filter(|c| !c.outer) {
        c.offset = off;
        off += c.group.rank();
    }
    off
}

/// The boundary matrices ∂₁ and ∂₂ of the twisted complex relative to the
/// outer boundary.
pub fn boundary_matrices(pair: &LooijengaPair) -> (IntMatrix, IntMatrix) {
    chain_complex(pair, true)
}

/// ∂₁ and ∂₂, relative to the outer boundary or absolute.
pub(crate) fn chain_complex(pair: &LooijengaPair, relative: bool) -> (IntMatrix, IntMatrix) {
    let cx = Complex::new(pair);
    let tris = cx.triangles();
    let mut edge_keys: Vec<(Vec<usize>, usize)> = Vec::new();
    let mut seen = HashMap::new();
    for (t, cone) in &tris {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
            let key = vec![a.min(b), a.max(b)];
            if !seen.contains_key(&key) {
                seen.insert(key.clone(), edge_keys.len());
                edge_keys.push((key, *cone));
            }
        }
    }
    let mut vertices: Vec<Cell> = (0..cx.points.len())
        .map(|a| Cell { verts: vec![a], outer: relative && cx.is_outer(&[a]), home: cx.home(&[a], 0), group: cx.group(&[a]), offset: 0 })
        .collect();
    let mut edges: Vec<Cell> = edge_keys
        .iter()
        .map(|(k, cone)| Cell { verts: k.clone(), outer: relative && cx.is_outer(k), home: cx.home(k, *cone), group: cx.group(k), offset: 0 })
        .collect();
    let mut faces: Vec<Cell> = tris
        .iter()
        .map(|(t, cone)| Cell { verts: t.to_vec(), outer: false, home: Home::Cone(*cone), group: cx.group(t), offset: 0 })
        .collect();
    let c0 = layout(&mut vertices);
    let c1 = layout(&mut edges);
    let c2 = layout(&mut faces);
    let vertex_index: HashMap<Vec<usize>, usize> = (0..vertices.len()).map(|a| (vec![a], a)).collect();
    let d1 = boundary(&cx, &edges, &vertices, &vertex_index, c0, c1);
    let d2 = boundary(&cx, &faces, &edges, &seen, c1, c2);
    (d1, d2)
}

pub fn twisted_h1(pair: &LooijengaPair) -> H1Report {
    let (d1, d2) = boundary_matrices(pair);
    let r1 = lattice::rank(&d1);
    let factors = lattice::invariant_factors(&d2);
    let free_rank = d1.cols() - r1 - factors.len();
    H1Report { free_rank, torsion: factors.into_iter().filter(|&d| d > 1).collect() }
}
