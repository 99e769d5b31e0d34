//! The algebraic period: restriction of a class in D⊥ to the boundary cycle,
//! evaluated in Pic⁰(D) ≅ 𝔾ₘ through the gluing constants of a rational
//! section.
//!
//! Component Dᵢ carries the coordinate zᵢ with zᵢ = 0 at the node shared
//! with Dᵢ₋₁ and zᵢ = ∞ at the node shared with Dᵢ₊₁; blowup centres sit at
//! zᵢ = −μⱼᶦ. A section restricts to a rational function gᵢ of degree zero
//! on every component and ψ = Πᵢ gᵢ₊₁(0) / gᵢ(∞). With this orientation
//! ψ(O(p − q)) = λ⁻¹ for z(p) = 1, z(q) = λ.
//!
//! Nothing here reads winding products; the only inputs are the class, the
//! fan polytopes and sections with random coefficients.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::LaurentScalar;
use crate::pair::{LooijengaPair, PicClass};
use crate::toric::{ToricDivisor, Vec2};

/// Coefficient draws per attempt come from [1, COEFF_MAX].
pub const COEFF_MAX: i64 = 1_000_000;
pub const MAX_ATTEMPTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("class is not orthogonal to the boundary")]
    NotInDperp,
    #[error("component {component}: numerator degree {num} != denominator degree {den}")]
    Degree { component: usize, num: usize, den: usize },
    #[error("zero value at a node of component {0}")]
    ZeroNode(usize),
    #[error("toric part has degree {got} on component {component}, expected {expected}")]
    Restriction { component: usize, got: i64, expected: i64 },
    #[error("every section draw hit a zero node value after {0} attempts")]
    RetriesExhausted(usize),
}

/// Dense polynomial in z over K, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZPoly(Vec<LaurentScalar>);

impl ZPoly {
    pub fn new(mut coeffs: Vec<LaurentScalar>) -> Self {
        while coeffs.last().is_some_and(LaurentScalar::is_zero) {
            coeffs.pop();
        }
        ZPoly(coeffs)
    }

    pub fn one() -> Self {
        ZPoly(vec![LaurentScalar::one()])
    }

    /// z − root
    pub fn linear(root: &LaurentScalar) -> Self {
        ZPoly::new(vec![-root, LaurentScalar::one()])
    }

    pub fn coeffs(&self) -> &[LaurentScalar] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn at_zero(&self) -> LaurentScalar {
        self.0.first().cloned().unwrap_or_else(LaurentScalar::zero)
    }

    pub fn lead(&self) -> LaurentScalar {
        self.0.last().cloned().unwrap_or_else(LaurentScalar::zero)
    }

    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        if self.0.is_empty() || other.0.is_empty() {
            return ZPoly(Vec::new());
        }
        let mut out = vec![LaurentScalar::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        ZPoly::new(out)
    }

    pub fn pow(&self, k: u32) -> ZPoly {
        (0..k).fold(ZPoly::one(), |acc, _| acc.mul(self))
    }
}

/// Π over nodes of gᵢ₊₁(0) / gᵢ(∞) for gᵢ = numᵢ / denᵢ.
pub fn node_product(components: &[(ZPoly, ZPoly)]) -> Result<LaurentScalar, OracleError> {
    let n = components.len();
    for (i, (num, den)) in components.iter().enumerate() {
        let (dn, dd) = (num.degree(), den.degree());
        if dn.is_none() || dd.is_none() {
            return Err(OracleError::ZeroNode(i));
        }
        if dn != dd {
            return Err(OracleError::Degree { component: i, num: dn.unwrap(), den: dd.unwrap() });
        }
    }
    let mut acc = LaurentScalar::one();
    for i in 0..n {
        let (num, den) = &components[i];
        let (num_next, den_next) = &components[(i + 1) % n];
        let parts = [num_next.at_zero(), den.lead(), den_next.at_zero(), num.lead()];
        if parts.iter().any(LaurentScalar::is_zero) {
            let which = if parts[0].is_zero() || parts[2].is_zero() { (i + 1) % n } else { i };
            return Err(OracleError::ZeroNode(which));
        }
        acc = &acc * &(&parts[0] * &parts[1]);
        acc = acc.checked_div(&(&parts[2] * &parts[3])).expect("nonzero node values");
    }
    Ok(acc)
}

/// ψ(O_D(Σ m·p)) for points given as (component, z(p), m) on a cycle of
/// `components` curves; each component must have degree zero.
pub fn psi_divisor(components: usize, points: &[(usize, LaurentScalar, i64)]) -> Result<LaurentScalar, OracleError> {
    let mut parts = vec![(ZPoly::one(), ZPoly::one()); components];
    for (c, z, m) in points {
        let f = ZPoly::linear(z).pow(m.unsigned_abs() as u32);
        let slot = &mut parts[*c];
        if *m > 0 {
            slot.0 = slot.0.mul(&f);
        } else {
            slot.1 = slot.1.mul(&f);
        }
    }
    node_product(&parts)
}

/// A nef split ᾱ = A − B with B a multiple of an ample divisor.
fn nef_split(pair: &LooijengaPair, abar: &ToricDivisor) -> (ToricDivisor, ToricDivisor) {
    let fan = pair.fan();
    let h = fan.ample_witness();
    let dh = fan.degrees(&h);
    let d = fan.degrees(abar);
    let n = d.iter().zip(&dh).map(|(&x, &y)| if x >= 0 { 0 } else { (-x + y - 1) / y }).max().unwrap_or(0);
    let b: ToricDivisor = h.iter().map(|x| n * x).collect();
    let a: ToricDivisor = abar.iter().zip(&b).map(|(x, y)| x + y).collect();
    debug_assert!(fan.is_nef(&a));
    (a, b)
}

/// Restrictions qᵢ of a section with the given coefficients, constant term at
/// the endpoint shared with face i−1.
fn restrict(pair: &LooijengaPair, div: &ToricDivisor, coeff: &HashMap<Vec2, i64>) -> Vec<ZPoly> {
    pair.fan()
        .polytope_edges(div)
        .faces
        .iter()
        .map(|pts| ZPoly::new(pts.iter().map(|u| LaurentScalar::from_int(coeff[u])).collect()))
        .collect()
}

fn draw(rng: &mut ChaCha8Rng, pts: &[Vec2]) -> HashMap<Vec2, i64> {
    pts.iter().map(|&u| (u, rng.gen_range(1..=COEFF_MAX))).collect()
}

/// ψ(α|_D) by the gluing cocycle of a random rational section.
pub fn algebraic_period(pair: &LooijengaPair, alpha: &PicClass, seed: u64) -> Result<LaurentScalar, OracleError> {
    if !pair.in_dperp(alpha) {
        return Err(OracleError::NotInDperp);
    }
    let fan = pair.fan();
    let (abar, gamma) = pair.decompose(alpha);
    let d = fan.degrees(&abar);
    for (i, row) in gamma.iter().enumerate() {
        let m: i64 = row.iter().sum();
        if d[i] != -m {
            return Err(OracleError::Restriction { component: i, got: d[i], expected: -m });
        }
    }
    let (a, b) = nef_split(pair, &abar);
    let (pts_a, pts_b) = (fan.polytope_points(&a), fan.polytope_points(&b));
    // (z + μ)^γ does not depend on the draw.
    let centres: Vec<(ZPoly, ZPoly)> = gamma
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter().enumerate().fold((ZPoly::one(), ZPoly::one()), |(num, den), (j, &g)| {
                let f = ZPoly::linear(&-pair.mu(i, j)).pow(g.unsigned_abs() as u32);
                if g > 0 {
                    (num.mul(&f), den)
                } else {
                    (num, den.mul(&f))
                }
            })
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let (ca, cb) = (draw(&mut rng, &pts_a), draw(&mut rng, &pts_b));
        let (qa, qb) = (restrict(pair, &a, &ca), restrict(pair, &b, &cb));
        let parts: Vec<(ZPoly, ZPoly)> = centres
            .iter()
            .zip(qa.iter().zip(&qb))
            .map(|((num, den), (qa, qb))| (num.mul(qa), den.mul(qb)))
            .collect();
        match node_product(&parts) {
            Err(OracleError::ZeroNode(_)) => continue,
            other => return other,
        }
    }
    Err(OracleError::RetriesExhausted(MAX_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse_scalar;
    use crate::pair::tests::{p2_plus3, p2_wing};

    fn s(x: &str) -> LaurentScalar {
        parse_scalar(x).unwrap()
    }

    #[test]
    fn calibration_point_pair() {
        for lam in ["2", "5+t", "-3/7", "(1+t)/(1-t)"] {
            let l = s(lam);
            let psi = psi_divisor(3, &[(1, s("1"), 1), (1, l.clone(), -1)]).unwrap();
            assert_eq!(psi, l.inv().unwrap());
        }
    }

    #[test]
    fn principal_divisors_have_trivial_psi() {
        // Σ m = 0 and Π z(p)^m = 1
        let pts = [(0, s("2"), 1), (0, s("3"), 1), (0, s("6"), -1), (0, s("1"), -1)];
        assert!(psi_divisor(4, &pts).unwrap().is_one());
        let pts = [(2, s("1+t"), 2), (2, s("(1+t)^2"), -1), (2, s("7"), 2), (2, s("49"), -1), (2, s("1"), -2)];
        assert!(psi_divisor(3, &pts).unwrap().is_one());
        // Σ m = 0 but Π z(p)^m = 1/7: not principal.
        let pts = [(0, s("7"), 1), (0, s("49"), -1)];
        assert_eq!(psi_divisor(3, &pts).unwrap(), s("1/7"));
    }

    #[test]
    fn degree_is_checked() {
        assert!(matches!(psi_divisor(3, &[(0, s("2"), 1)]), Err(OracleError::Degree { component: 0, .. })));
    }

    #[test]
    fn spoke_and_wing_values() {
        let p = p2_plus3();
        let spoke = p.parse_class("E[1,1] + E[2,1] + E[3,1] - Dbar[1]").unwrap();
        assert_eq!(algebraic_period(&p, &spoke, 7).unwrap(), s("30+6*t"));
        let w = p2_wing();
        let wing = w.parse_class("E[1,2] - E[1,1]").unwrap();
        assert_eq!(algebraic_period(&w, &wing, 7).unwrap(), s("3/2"));
        assert!(algebraic_period(&p, &p.zero(), 1).unwrap().is_one());
        assert_eq!(algebraic_period(&p, &p.exceptional(0, 0), 1), Err(OracleError::NotInDperp));
    }

    #[test]
    fn nef_split_is_minimal() {
        let p = p2_plus3();
        let (a, b) = nef_split(&p, &vec![0, 0, -1]);
        assert!(p.fan().is_nef(&a) && p.fan().is_nef(&b));
        assert_eq!(b, p.fan().ample_witness());
        let (a, b) = nef_split(&p, &vec![0, 0, 2]);
        assert_eq!((a, b), (vec![0, 0, 2], vec![0, 0, 0]));
    }
}
