//! Looijenga pairs given by a toric model and blowup parameters, and their
//! Picard lattices.
//!
//! Pic(Y) is generated by the pullbacks ḡₖ of the toric boundary divisors and
//! the exceptional classes Eⱼᶦ, modulo the character relations. Classes are
//! kept in the canonical representative with g₁ = g₂ = 0, so the remaining
//! coordinates (g₃..gₙ, e) are a ℤ-basis of Pic(Y).

use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::field::LaurentScalar;
use crate::lattice::{self, IntMatrix};
use crate::toric::{Fan2D, ToricDivisor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("blowups given for {given} rays but the fan has {rays}")]
    RayCount { given: usize, rays: usize },
    #[error("blowup parameter must be a unit (valuation 0): ray {ray}, slot {slot}")]
    NonUnit { ray: usize, slot: usize },
    #[error("repeated blowup parameter on ray {ray} (infinitely near blowups are not supported)")]
    Repeated { ray: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LooijengaPair {
    fan: Fan2D,
    blowups: Vec<Vec<LaurentScalar>>,
    generic: bool,
}

/// A class in Pic(Y), always in canonical form (g₁ = g₂ = 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PicClass {
    pub g: Vec<i64>,
    pub e: Vec<Vec<i64>>,
}

impl PicClass {
    pub fn is_zero(&self) -> bool {
        self.g.iter().all(|&x| x == 0) && self.e.iter().flatten().all(|&x| x == 0)
    }

    pub fn add(&self, other: &PicClass) -> PicClass {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &PicClass) -> PicClass {
        self.combine(other, -1)
    }

    pub fn scale(&self, k: i64) -> PicClass {
        PicClass {
            g: self.g.iter().map(|x| x * k).collect(),
            e: self.e.iter().map(|r| r.iter().map(|x| x * k).collect()).collect(),
        }
    }

    fn combine(&self, other: &PicClass, k: i64) -> PicClass {
        // Canonical forms are closed under linear combination.
        PicClass {
            g: self.g.iter().zip(&other.g).map(|(a, b)| a + k * b).collect(),
            e: self.e.iter().zip(&other.e).map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + k * b).collect()).collect(),
        }
    }
}

impl fmt::Display for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(i64, String)> = Vec::new();
        for (k, &c) in self.g.iter().enumerate() {
            terms.push((c, format!("Dbar[{}]", k + 1)));
        }
        for (i, row) in self.e.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                terms.push((c, format!("E[{},{}]", i + 1, j + 1)));
            }
        }
        let mut first = true;
        for (c, name) in terms.into_iter().filter(|(c, _)| *c != 0) {
            let sign = match (first, c < 0) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            first = false;
            if c.abs() == 1 {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{}*{name}", c.abs())?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl LooijengaPair {
    /// Validates units and distinctness and records genericity.
    pub fn new(fan: Fan2D, blowups: Vec<Vec<LaurentScalar>>) -> Result<Self, PairError> {
        if blowups.len() != fan.n() {
            return Err(PairError::RayCount { given: blowups.len(), rays: fan.n() });
        }
        let mut generic = true;
        for (i, mus) in blowups.iter().enumerate() {
            for (j, mu) in mus.iter().enumerate() {
                if !mu.is_unit() {
                    return Err(PairError::NonUnit { ray: i + 1, slot: j + 1 });
                }
                if mus[..j].contains(mu) {
                    return Err(PairError::Repeated { ray: i + 1 });
                }
            }
            let reds: Vec<BigRational> = mus.iter().map(|m| m.reduce_at_zero().expect("units reduce")).collect();
            if (0..reds.len()).any(|a| reds[..a].contains(&reds[a])) {
                generic = false;
            }
        }
        let pair = LooijengaPair { fan, blowups, generic };
        let r = pair.fan.character_relations();
        for row in r.to_rows() {
            let z = pair.class_raw(row, pair.zero().e);
            assert!(
                (0..pair.n()).all(|i| pair.intersection_raw(&z, &pair.strict_transform_raw(i)) == 0),
                "intersection form must annihilate the character relations"
            );
        }
        Ok(pair)
    }

    /// The toric pair of `fan`.
    pub fn toric(fan: Fan2D) -> Self {
        let n = fan.n();
        LooijengaPair::new(fan, vec![Vec::new(); n]).expect("no blowups is valid")
    }

    pub fn fan(&self) -> &Fan2D {
        &self.fan
    }

    pub fn n(&self) -> usize {
        self.fan.n()
    }

    pub fn blowups(&self) -> &[Vec<LaurentScalar>] {
        &self.blowups
    }

    pub fn mu(&self, i: usize, j: usize) -> &LaurentScalar {
        &self.blowups[i][j]
    }

    /// Blowup counts kᵢ.
    pub fn k(&self) -> Vec<usize> {
        self.blowups.iter().map(Vec::len).collect()
    }

    pub fn total_blowups(&self) -> usize {
        self.blowups.iter().map(Vec::len).sum()
    }

    /// Number of rays carrying at least one blowup.
    pub fn occupied_rays(&self) -> usize {
        self.blowups.iter().filter(|m| !m.is_empty()).count()
    }

    /// True iff the reductions at t = 0 are distinct within every ray.
    pub fn is_generic(&self) -> bool {
        self.generic
    }

    /// (ray, slot) for every exceptional curve, in storage order.
    pub fn slots(&self) -> Vec<(usize, usize)> {
        self.blowups.iter().enumerate().flat_map(|(i, m)| (0..m.len()).map(move |j| (i, j))).collect()
    }

    pub fn zero(&self) -> PicClass {
        PicClass { g: vec![0; self.n()], e: self.blowups.iter().map(|m| vec![0; m.len()]).collect() }
    }

    fn class_raw(&self, g: Vec<i64>, e: Vec<Vec<i64>>) -> PicClass {
        PicClass { g, e }
    }

    /// The canonical class with pullback coefficients `g` and exceptional
    /// coefficients `e`.
    pub fn class(&self, g: &[i64], e: &[Vec<i64>]) -> PicClass {
        assert_eq!(g.len(), self.n(), "g has the wrong length");
        assert!(
            e.len() == self.n() && e.iter().zip(&self.blowups).all(|(r, m)| r.len() == m.len()),
            "e has the wrong shape"
        );
        PicClass { g: self.fan.canonical(g), e: e.to_vec() }
    }

    /// ḡₖ
    pub fn pullback(&self, k: usize) -> PicClass {
        let mut g = vec![0; self.n()];
        g[k] = 1;
        self.class(&g, &self.zero().e)
    }

    /// Eⱼᶦ
    pub fn exceptional(&self, i: usize, j: usize) -> PicClass {
        let mut z = self.zero();
        z.e[i][j] = 1;
        z
    }

    pub fn from_toric(&self, a: &[i64]) -> PicClass {
        self.class(a, &self.zero().e)
    }

    fn intersection_raw(&self, a: &PicClass, b: &PicClass) -> i64 {
        let toric = self.fan.toric_intersection(&a.g, &b.g);
        let exc: i64 = a.e.iter().flatten().zip(b.e.iter().flatten()).map(|(x, y)| x * y).sum();
        toric - exc
    }

    pub fn intersection(&self, a: &PicClass, b: &PicClass) -> i64 {
        self.intersection_raw(a, b)
    }

    fn strict_transform_raw(&self, i: usize) -> PicClass {
        let mut z = self.zero();
        z.g[i] = 1;
        z.e[i].iter_mut().for_each(|x| *x = -1);
        z
    }

    /// Dᵢ = ḡᵢ − Σⱼ Eⱼᶦ
    pub fn strict_transform(&self, i: usize) -> PicClass {
        let z = self.strict_transform_raw(i);
        self.class(&z.g, &z.e)
    }

    /// D² = Σ(b̄ᵢ − kᵢ) + 2n
    pub fn boundary_square(&self) -> i64 {
        let b: i64 = self.fan.self_intersections().iter().sum();
        b - self.total_blowups() as i64 + 2 * self.n() as i64
    }

    /// Q = 12 − D² − n
    pub fn charge(&self) -> i64 {
        12 - self.boundary_square() - self.n() as i64
    }

    /// Number of free coordinates (g₃..gₙ, e).
    pub fn rank_pic(&self) -> usize {
        self.n() - 2 + self.total_blowups()
    }

    pub fn coords(&self, a: &PicClass) -> Vec<i64> {
        debug_assert!(a.g[0] == 0 && a.g[1] == 0, "class is not canonical");
        a.g[2..].iter().copied().chain(a.e.iter().flatten().copied()).collect()
    }

    pub fn from_coords(&self, x: &[i64]) -> PicClass {
        assert_eq!(x.len(), self.rank_pic());
        let n = self.n();
        let mut g = vec![0, 0];
        g.extend_from_slice(&x[..n - 2]);
        let mut rest = x[n - 2..].iter().copied();
        let e = self.blowups.iter().map(|m| (0..m.len()).map(|_| rest.next().unwrap()).collect()).collect();
        PicClass { g, e }
    }

    /// Row i is the functional α ↦ α·Dᵢ on free coordinates.
    fn pairing_matrix(&self) -> IntMatrix {
        let basis: Vec<PicClass> = (0..self.rank_pic())
            .map(|c| {
                let mut x = vec![0; self.rank_pic()];
                x[c] = 1;
                self.from_coords(&x)
            })
            .collect();
        let rows: Vec<Vec<i64>> = (0..self.n())
            .map(|i| {
                let d = self.strict_transform(i);
                basis.iter().map(|b| self.intersection(b, &d)).collect()
            })
            .collect();
        IntMatrix::from_rows(&rows, self.rank_pic())
    }

    pub fn in_dperp(&self, a: &PicClass) -> bool {
        (0..self.n()).all(|i| self.intersection(a, &self.strict_transform(i)) == 0)
    }

    /// Basis of D⊥ as the Hermite-reduced integer kernel of the pairing with
    /// the strict transforms.
    pub fn dperp_kernel(&self) -> Vec<PicClass> {
        let k = lattice::kernel(&self.pairing_matrix());
        k.to_rows().iter().map(|r| self.from_coords(r)).collect()
    }

    /// Basis of D⊥: the spokes followed by the wings.
    pub fn dperp_basis(&self) -> Vec<PicClass> {
        let (wings, spokes) = self.wing_spoke_decomposition();
        spokes.into_iter().chain(wings).collect()
    }

    /// Rank of the kernel of ⊕ℤ[Dᵢ] → Pic(Y).
    pub fn s_rank(&self) -> usize {
        let cols: Vec<Vec<i64>> = (0..self.n()).map(|i| self.coords(&self.strict_transform(i))).collect();
        let m = IntMatrix::from_rows(&cols, self.rank_pic());
        self.n() - lattice::rank(&m)
    }

    /// (α_t, γ): the pullback part as a canonical toric divisor and the
    /// exceptional coefficients.
    pub fn decompose(&self, a: &PicClass) -> (ToricDivisor, Vec<Vec<i64>>) {
        (self.fan.canonical(&a.g), a.e.clone())
    }

    /// Wings Eⱼ₊₁ᶦ − Eⱼᶦ, and a basis of the classes in D⊥ whose exceptional
    /// part is supported on first slots.
    pub fn wing_spoke_decomposition(&self) -> (Vec<PicClass>, Vec<PicClass>) {
        let mut wings = Vec::new();
        for (i, m) in self.blowups.iter().enumerate() {
            for j in 1..m.len() {
                wings.push(self.exceptional(i, j).sub(&self.exceptional(i, j - 1)));
            }
        }
        // Coordinates: (e_{i,1} for occupied rays, g₃..gₙ) so that Hermite
        // pivots land on exceptional coefficients.
        let occupied: Vec<usize> = (0..self.n()).filter(|&i| !self.blowups[i].is_empty()).collect();
        let width = occupied.len() + self.n() - 2;
        let embed = |x: &[i64]| -> PicClass {
            let mut z = self.zero();
            for (p, &i) in occupied.iter().enumerate() {
                z.e[i][0] = x[p];
            }
            z.g[2..].copy_from_slice(&x[occupied.len()..]);
            z
        };
        let rows: Vec<Vec<i64>> = (0..self.n())
            .map(|i| {
                let d = self.strict_transform(i);
                (0..width)
                    .map(|c| {
                        let mut x = vec![0; width];
                        x[c] = 1;
                        self.intersection(&embed(&x), &d)
                    })
                    .collect()
            })
            .collect();
        let k = lattice::kernel(&IntMatrix::from_rows(&rows, width));
        let spokes = k.to_rows().iter().map(|r| embed(r)).collect();
        (wings, spokes)
    }

    /// Parses `E[1,1] + E[2,1] - 2*Dbar[1]`; indices are 1-based.
    pub fn parse_class(&self, text: &str) -> Result<PicClass, ClassParseError> {
        let mut g = vec![0i64; self.n()];
        let mut e = self.zero().e;
        if text.trim() == "0" {
            return Ok(self.zero());
        }
        let s: Vec<char> = text.chars().collect();
        let mut i = 0;
        let skip_ws = |i: &mut usize| {
            while *i < s.len() && s[*i].is_whitespace() {
                *i += 1;
            }
        };
        let err = |pos: usize, msg: &str| ClassParseError { pos, msg: msg.to_string() };
        let number = |i: &mut usize| -> Option<i64> {
            let start = *i;
            while *i < s.len() && s[*i].is_ascii_digit() {
                *i += 1;
            }
            s[start..*i].iter().collect::<String>().parse().ok()
        };
        let mut first = true;
        loop {
            skip_ws(&mut i);
            if i == s.len() {
                if first {
                    return Err(err(i, "empty class expression"));
                }
                break;
            }
            let mut sign = 1;
            if s[i] == '+' || s[i] == '-' {
                sign = if s[i] == '-' { -1 } else { 1 };
                i += 1;
                skip_ws(&mut i);
            } else if !first {
                return Err(err(i, "expected '+' or '-'"));
            }
            first = false;
            let mut coef = 1;
            if i < s.len() && s[i].is_ascii_digit() {
                let pos = i;
                coef = number(&mut i).ok_or_else(|| err(pos, "coefficient out of range"))?;
                skip_ws(&mut i);
                if i < s.len() && s[i] == '*' {
                    i += 1;
                    skip_ws(&mut i);
                }
            }
            let pos = i;
            let rest: String = s[i..].iter().collect();
            let (name, arity) = if rest.starts_with("Dbar[") {
                ("Dbar", 1)
            } else if rest.starts_with("E[") {
                ("E", 2)
            } else {
                return Err(err(pos, "expected Dbar[i] or E[i,j]"));
            };
            i += name.len() + 1;
            let mut idx = Vec::new();
            for a in 0..arity {
                skip_ws(&mut i);
                let p = i;
                let v = number(&mut i).ok_or_else(|| err(p, "expected an index"))?;
                idx.push(v);
                skip_ws(&mut i);
                let want = if a + 1 == arity { ']' } else { ',' };
                if s.get(i) != Some(&want) {
                    return Err(err(i, &format!("expected '{want}'")));
                }
                i += 1;
            }
            let c = sign * coef;
            if name == "Dbar" {
                let k = idx[0];
                if k < 1 || k as usize > self.n() {
                    return Err(err(pos, &format!("no boundary divisor {k}")));
                }
                g[k as usize - 1] += c;
            } else {
                let (r, j) = (idx[0], idx[1]);
                if r < 1 || r as usize > self.n() || j < 1 || j as usize > self.blowups[r as usize - 1].len() {
                    return Err(err(pos, &format!("no exceptional curve E[{r},{j}]")));
                }
                e[r as usize - 1][j as usize - 1] += c;
            }
        }
        Ok(self.class(&g, &e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("class syntax error at position {pos}: {msg}")]
pub struct ClassParseError {
    pub pos: usize,
    pub msg: String,
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::field::parse_scalar;

    pub(crate) fn s(x: &str) -> LaurentScalar {
        parse_scalar(x).unwrap()
    }

    pub(crate) fn p2() -> Fan2D {
        Fan2D::new(vec![[1, 0], [0, 1], [-1, -1]]).unwrap()
    }

    pub(crate) fn p2_plus3() -> LooijengaPair {
        LooijengaPair::new(p2(), vec![vec![s("2")], vec![s("3")], vec![s("5+t")]]).unwrap()
    }

    pub(crate) fn p2_wing() -> LooijengaPair {
        LooijengaPair::new(p2(), vec![vec![s("2"), s("3")], vec![], vec![]]).unwrap()
    }

    /// A catalogue fan with up to two blowups per ray and μ = ±(a + b·t).
    /// With `shared` set, the μ's on a ray share their constant term.
    pub(crate) fn arb_pair() -> impl proptest::strategy::Strategy<Value = LooijengaPair> {
        use proptest::prelude::*;
        (
            0usize..5,
            proptest::collection::vec(0usize..=2, 5),
            proptest::collection::vec((1i64..=9, -3i64..=3, any::<bool>()), 5),
            any::<bool>(),
        )
            .prop_map(|(f, ks, params, shared)| {
                let fan = crate::toric::catalogue().swap_remove(f).1;
                let blowups = (0..fan.n())
                    .map(|i| {
                        let (a, b, neg) = params[i];
                        (0..ks[i] as i64)
                            .map(|j| {
                                let (c, d) = if shared { (a, b + j + 1) } else { (a + 10 * j, b) };
                                let sign = if neg { -1 } else { 1 };
                                s(&format!("{}+({})*t", sign * c, sign * d))
                            })
                            .collect()
                    })
                    .collect();
                LooijengaPair::new(fan, blowups).unwrap()
            })
    }

    pub(crate) fn f2_fibres() -> LooijengaPair {
        let fan = Fan2D::new(vec![[1, 0], [0, 1], [-1, 2], [0, -1]]).unwrap();
        LooijengaPair::new(fan, vec![vec![s("2")], vec![], vec![s("3")], vec![]]).unwrap()
    }

    #[test]
    fn construction() {
        assert!(p2_plus3().is_generic());
        let ng = LooijengaPair::new(p2(), vec![vec![s("2"), s("2+t")], vec![], vec![]]).unwrap();
        assert!(!ng.is_generic());
        assert_eq!(
            LooijengaPair::new(p2(), vec![vec![s("t")], vec![], vec![]]),
            Err(PairError::NonUnit { ray: 1, slot: 1 })
        );
        assert_eq!(
            LooijengaPair::new(p2(), vec![vec![s("2"), s("4/2")], vec![], vec![]]),
            Err(PairError::Repeated { ray: 1 })
        );
    }

    #[test]
    fn intersections() {
        let p = p2_plus3();
        let e = p.exceptional(0, 0);
        assert_eq!(p.intersection(&e, &e), -1);
        assert_eq!(p.intersection(&p.pullback(0), &e), 0);
        let a = p.parse_class("E[1,1] + E[2,1] + E[3,1] - Dbar[1]").unwrap();
        assert_eq!(p.intersection(&a, &p.strict_transform(0)), 0);
    }

    #[test]
    fn strict_transforms() {
        let t = LooijengaPair::toric(p2());
        for i in 0..3 {
            assert_eq!(t.strict_transform(i), t.pullback(i));
        }
        let p = p2_plus3();
        assert_eq!(p.strict_transform(0), p.pullback(0).sub(&p.exceptional(0, 0)));
        for p in [p2_plus3(), p2_wing(), f2_fibres()] {
            for i in 0..p.n() {
                let d = p.strict_transform(i);
                let expected = p.fan().self_intersections()[i] - p.k()[i] as i64;
                assert_eq!(p.intersection(&d, &d), expected);
            }
        }
    }

    #[test]
    fn charges() {
        assert_eq!(LooijengaPair::toric(p2()).charge(), 0);
        assert_eq!(p2_plus3().charge(), 3);
        assert_eq!(p2_wing().charge(), 2);
    }

    #[test]
    fn dperp_examples() {
        assert!(LooijengaPair::toric(p2()).dperp_basis().is_empty());
        let p = p2_plus3();
        assert_eq!(p.dperp_basis(), vec![p.parse_class("E[1,1] + E[2,1] + E[3,1] - Dbar[1]").unwrap()]);
        let w = p2_wing();
        assert_eq!(w.dperp_basis(), vec![w.parse_class("E[1,2] - E[1,1]").unwrap()]);
    }

    #[test]
    fn s_rank_examples() {
        assert_eq!(LooijengaPair::toric(p2()).s_rank(), 2);
        assert_eq!(p2_plus3().s_rank(), 0);
        assert_eq!(p2_wing().s_rank(), 1);
    }

    #[test]
    fn decompositions() {
        let w = p2_wing();
        let (at, gamma) = w.decompose(&w.parse_class("E[1,1] - E[1,2]").unwrap());
        assert_eq!(at, vec![0, 0, 0]);
        assert_eq!(gamma, vec![vec![1, -1], vec![], vec![]]);

        let p = p2_plus3();
        let (at, gamma) = p.decompose(&p.dperp_basis()[0]);
        assert_eq!(at, p.fan().canonical(&[-1, 0, 0]));
        assert_eq!(gamma, vec![vec![1], vec![1], vec![1]]);

        let t = LooijengaPair::toric(p2());
        let (at, gamma) = t.decompose(&t.pullback(0).sub(&t.pullback(1)));
        assert_eq!(at, vec![0, 0, 0]);
        assert!(gamma.iter().all(Vec::is_empty));
    }

    #[test]
    fn wing_spoke_examples() {
        let p = p2_plus3();
        let (w, sp) = p.wing_spoke_decomposition();
        assert!(w.is_empty());
        assert_eq!(sp.len(), 1);
        let q = p2_wing();
        let (w, sp) = q.wing_spoke_decomposition();
        assert_eq!(w, vec![q.parse_class("E[1,2] - E[1,1]").unwrap()]);
        assert!(sp.is_empty());
        let (w, sp) = f2_fibres().wing_spoke_decomposition();
        assert!(w.is_empty() && sp.is_empty());
    }

    #[test]
    fn class_grammar() {
        let p = p2_plus3();
        assert!(p.parse_class("0").unwrap().is_zero());
        assert_eq!(p.parse_class("2*E[1,1] - 2 E[1,1]").unwrap(), p.zero());
        assert_eq!(p.parse_class("-Dbar[1] + Dbar[3]").unwrap(), p.zero());
        assert_eq!(p.parse_class("E[1,2]").unwrap_err().pos, 0);
        assert_eq!(p.parse_class("E[1,1] Dbar[2]").unwrap_err().pos, 7);
        assert!(p.parse_class("Dbar[4]").is_err());
        assert!(p.parse_class("").is_err());
        let a = p.dperp_basis()[0].clone();
        assert_eq!(p.parse_class(&a.to_string()).unwrap(), a);
    }
}
