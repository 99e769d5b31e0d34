//! Tropical 1-cycles in winding coordinates and the tropical correspondence.
//!
//! A cycle is recorded by its windings cᵢⱼ around the singular vertices; the
//! edge decorations cᵢⱼ·ěᵢ running to the origin are implied. Balancing at
//! the origin is Σ cᵢⱼ vᵢ = 0.

use std::fmt;

use thiserror::Error;

use crate::cellular;
use crate::lattice::{self, IntMatrix};
use crate::pair::{LooijengaPair, PicClass};
use crate::toric::Vec2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TropError {
    #[error("windings do not match the blowup counts of the pair")]
    Shape,
    #[error("cycle is not balanced: sum of c_ij v_i = ({}, {})", .0[0], .0[1])]
    Unbalanced(Vec2),
    #[error("class is not orthogonal to the boundary")]
    NotInDperp,
}

/// Windings c[i][j] around the vertex in slot j of ray i.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropCycle {
    pub c: Vec<Vec<i64>>,
}

impl TropCycle {
    pub fn zero(pair: &LooijengaPair) -> Self {
        TropCycle { c: pair.zero().e }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().flatten().all(|&x| x == 0)
    }

    pub fn add(&self, other: &TropCycle) -> TropCycle {
        TropCycle { c: self.c.iter().zip(&other.c).map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect()).collect() }
    }

    pub fn scale(&self, k: i64) -> TropCycle {
        TropCycle { c: self.c.iter().map(|r| r.iter().map(|x| k * x).collect()).collect() }
    }

    /// Σ cᵢⱼ vᵢ
    pub fn defect(&self, pair: &LooijengaPair) -> Vec2 {
        let mut s = [0, 0];
        for (i, row) in self.c.iter().enumerate() {
            let v = pair.fan().ray(i);
            let w: i64 = row.iter().sum();
            s[0] += w * v[0];
            s[1] += w * v[1];
        }
        s
    }
}

impl fmt::Display for TropCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().filter(|(_, &c)| c != 0).map(move |(j, c)| format!("c[{},{}]={c}", i + 1, j + 1)))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

fn check_shape(pair: &LooijengaPair, c: &[Vec<i64>]) -> Result<(), TropError> {
    if c.len() == pair.n() && c.iter().zip(pair.blowups()).all(|(r, m)| r.len() == m.len()) {
        Ok(())
    } else {
        Err(TropError::Shape)
    }
}

pub fn make_cycle(pair: &LooijengaPair, c: Vec<Vec<i64>>) -> Result<TropCycle, TropError> {
    check_shape(pair, &c)?;
    let cyc = TropCycle { c };
    let d = cyc.defect(pair);
    if d != [0, 0] {
        return Err(TropError::Unbalanced(d));
    }
    Ok(cyc)
}

/// The 2×N matrix whose column (i, j) is vᵢ.
fn balancing_matrix(pair: &LooijengaPair) -> IntMatrix {
    let slots = pair.slots();
    let rows: Vec<Vec<i64>> = (0..2).map(|r| slots.iter().map(|&(i, _)| pair.fan().ray(i)[r]).collect()).collect();
    IntMatrix::from_rows(&rows, slots.len())
}

fn from_flat(pair: &LooijengaPair, x: &[i64]) -> TropCycle {
    let mut c = pair.zero().e;
    for (&(i, j), &v) in pair.slots().iter().zip(x) {
        c[i][j] = v;
    }
    TropCycle { c }
}

/// Rank of the lattice of balanced windings.
pub fn balanced_rank(pair: &LooijengaPair) -> usize {
    let m = balancing_matrix(pair);
    m.cols() - lattice::rank(&m)
}

/// Hermite basis of the balanced windings.
pub fn balanced_basis(pair: &LooijengaPair) -> Vec<TropCycle> {
    lattice::kernel(&balancing_matrix(pair)).to_rows().iter().map(|r| from_flat(pair, r)).collect()
}

/// Simple spokes (balanced windings on first slots, Hermite basis) followed
/// by the simple wings (+1 at slot j+1, −1 at slot j).
pub fn wings_and_spokes(pair: &LooijengaPair) -> Vec<TropCycle> {
    let occupied: Vec<usize> = (0..pair.n()).filter(|&i| pair.k()[i] > 0).collect();
    let rows: Vec<Vec<i64>> = (0..2).map(|r| occupied.iter().map(|&i| pair.fan().ray(i)[r]).collect()).collect();
    let k = lattice::kernel(&IntMatrix::from_rows(&rows, occupied.len()));
    let mut out: Vec<TropCycle> = k
        .to_rows()
        .iter()
        .map(|x| {
            let mut c = pair.zero().e;
            for (&i, &v) in occupied.iter().zip(x) {
                c[i][0] = v;
            }
            TropCycle { c }
        })
        .collect();
    for (i, &ki) in pair.k().iter().enumerate() {
        for j in 1..ki {
            let mut c = pair.zero().e;
            c[i][j] = 1;
            c[i][j - 1] = -1;
            out.push(TropCycle { c });
        }
    }
    out
}

/// cᵢⱼ = γⱼᶦ for α ∈ D⊥.
pub fn tropicalize(pair: &LooijengaPair, alpha: &PicClass) -> Result<TropCycle, TropError> {
    if !pair.in_dperp(alpha) {
        return Err(TropError::NotInDperp);
    }
    let (_, gamma) = pair.decompose(alpha);
    make_cycle(pair, gamma)
}

/// The unique α ∈ D⊥ with γ = c, obtained by solving ᾱ_t·D̄ᵢ = −Σⱼ cᵢⱼ.
pub fn detropicalize(pair: &LooijengaPair, cycle: &TropCycle) -> Result<PicClass, TropError> {
    check_shape(pair, &cycle.c)?;
    let n = pair.n();
    let fan = pair.fan();
    let rows: Vec<Vec<i64>> = (0..n).map(|i| (2..n).map(|k| fan.boundary_pairing(k, i)).collect()).collect();
    let rhs: Vec<i64> = cycle.c.iter().map(|r| -r.iter().sum::<i64>()).collect();
    let x = lattice::solve(&IntMatrix::from_rows(&rows, n - 2), &rhs).ok_or(TropError::Unbalanced(cycle.defect(pair)))?;
    let mut g = vec![0, 0];
    g.extend(x);
    let alpha = pair.class(&g, &cycle.c);
    debug_assert!(pair.in_dperp(&alpha));
    Ok(alpha)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Report {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

impl fmt::Display for H1Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.torsion.iter().map(ToString::to_string).collect();
        write!(f, "free_rank={} torsion=[{}]", self.free_rank, t.join(","))
    }
}

/// H₁ of the skeleton with coefficients in ι*Λ̌. The free rank comes from the
/// balanced windings; torsion, when requested, from the twisted cellular
/// complex.
pub fn h1_compute(pair: &LooijengaPair, with_torsion: bool) -> H1Report {
    let free_rank = balanced_rank(pair);
    if !with_torsion {
        return H1Report { free_rank, torsion: Vec::new() };
    }
    let c = cellular::twisted_h1(pair);
    assert_eq!(c.free_rank, free_rank, "cellular and winding ranks disagree");
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pair::tests::{arb_pair, f2_fibres, p2, p2_plus3, p2_wing};
    use proptest::prelude::*;

    #[test]
    fn make_cycle_examples() {
        let p = p2_plus3();
        assert!(make_cycle(&p, vec![vec![1], vec![1], vec![1]]).is_ok());
        assert!(make_cycle(&p2_wing(), vec![vec![1, -1], vec![], vec![]]).is_ok());
        assert_eq!(make_cycle(&p, vec![vec![1], vec![0], vec![0]]), Err(TropError::Unbalanced([1, 0])));
        assert_eq!(make_cycle(&p, vec![vec![1]]), Err(TropError::Shape));
    }

    #[test]
    fn basis_examples() {
        let p = p2_plus3();
        assert_eq!(wings_and_spokes(&p), vec![TropCycle { c: vec![vec![1], vec![1], vec![1]] }]);
        assert_eq!(wings_and_spokes(&p2_wing()), vec![TropCycle { c: vec![vec![-1, 1], vec![], vec![]] }]);
        assert!(wings_and_spokes(&f2_fibres()).is_empty());
    }

    #[test]
    fn correspondence_examples() {
        let p = p2_plus3();
        let a = p.parse_class("E[1,1] + E[2,1] + E[3,1] - Dbar[1]").unwrap();
        let c = tropicalize(&p, &a).unwrap();
        assert_eq!(c.c, vec![vec![1], vec![1], vec![1]]);
        assert_eq!(detropicalize(&p, &c).unwrap(), a);
        let w = p2_wing();
        let c = tropicalize(&w, &w.parse_class("E[1,2] - E[1,1]").unwrap()).unwrap();
        assert_eq!(c.c, vec![vec![-1, 1], vec![], vec![]]);
        assert!(tropicalize(&p, &p.zero()).unwrap().is_zero());
        assert!(detropicalize(&p, &TropCycle::zero(&p)).unwrap().is_zero());
        assert_eq!(tropicalize(&p, &p.exceptional(0, 0)), Err(TropError::NotInDperp));
    }

    #[test]
    fn h1_examples() {
        assert_eq!(h1_compute(&p2_plus3(), true), H1Report { free_rank: 1, torsion: vec![] });
        assert_eq!(h1_compute(&f2_fibres(), true), H1Report { free_rank: 0, torsion: vec![2] });
        assert_eq!(h1_compute(&LooijengaPair::toric(p2()), true), H1Report { free_rank: 0, torsion: vec![] });
    }

    fn combination(pair: &LooijengaPair, coeffs: &[i64]) -> PicClass {
        pair.dperp_basis().iter().zip(coeffs.iter().cycle()).fold(pair.zero(), |acc, (g, &k)| acc.add(&g.scale(k)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn round_trip(p in arb_pair(), coeffs in proptest::collection::vec(-3i64..=3, 1..12)) {
            let a = combination(&p, &coeffs);
            let c = tropicalize(&p, &a).unwrap();
            prop_assert_eq!(c.defect(&p), [0, 0]);
            prop_assert_eq!(detropicalize(&p, &c).unwrap(), a);
        }

        #[test]
        fn additivity(p in arb_pair(), x in proptest::collection::vec(-3i64..=3, 1..6), y in proptest::collection::vec(-3i64..=3, 1..6)) {
            let (a, b) = (combination(&p, &x), combination(&p, &y));
            let sum = tropicalize(&p, &a.add(&b)).unwrap();
            prop_assert_eq!(sum, tropicalize(&p, &a).unwrap().add(&tropicalize(&p, &b).unwrap()));
        }

        #[test]
        fn rank_identities(p in arb_pair()) {
            let r = balanced_rank(&p);
            prop_assert_eq!(r, p.dperp_kernel().len());
            prop_assert_eq!(r as i64, p.charge() - 2 + p.s_rank() as i64);
            if p.occupied_rays() >= 3 {
                prop_assert_eq!(r, p.total_blowups() - 2);
            }
            prop_assert_eq!(balanced_basis(&p).len(), r);
        }

        #[test]
        fn spokes_and_wings_are_the_image_of_the_basis(p in arb_pair()) {
            let image: Vec<TropCycle> = p.dperp_basis().iter().map(|g| tropicalize(&p, g).unwrap()).collect();
            prop_assert_eq!(image, wings_and_spokes(&p));
        }

        #[test]
        fn charge_is_nonnegative(p in arb_pair()) {
            prop_assert!(p.charge() >= 0);
            prop_assert_eq!(p.charge() == 0, p.total_blowups() == 0);
        }
    }
}
