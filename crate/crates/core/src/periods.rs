//! The non-archimedean period map on tropical 1-cycles, by closed form and by
//! walking local loops through the chart stars, and the comparison with the
//! algebraic period.

use std::fmt;

use thiserror::Error;

use crate::field::{LaurentScalar, Valuation};
use crate::oracle::{self, OracleError};
use crate::pair::{LooijengaPair, PicClass};
use crate::skeleton::{
    build_skeleton, mat_inv, mat_vec, transition_matrix, CechCocycle, Overlap, Skeleton, SkeletonError, Star, CHECK_E_0,
    CHECK_E_H,
};
use crate::toric::{pair2, Vec2};
use crate::tropical::{self, make_cycle, TropCycle, TropError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeriodError {
    #[error(transparent)]
    Trop(#[from] TropError),
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("walk step {step} expected chart {expected}, loop is in {found}")]
    WalkBroken { step: usize, expected: Star, found: Star },
    #[error("loop around ray {ray}, slot {slot} does not close up")]
    WalkNotClosed { ray: usize, slot: usize },
    #[error("trailing edges do not balance at the origin: ({}, {})", .0[0], .0[1])]
    TrailingUnbalanced(Vec2),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodValue {
    pub value: LaurentScalar,
}

impl PeriodValue {
    pub fn val(&self) -> Valuation {
        self.value.val()
    }
}

impl fmt::Display for PeriodValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

/// Π μ^e
pub fn winding_product(factors: &[(LaurentScalar, i64)]) -> LaurentScalar {
    factors
        .iter()
        .fold(LaurentScalar::one(), |acc, (mu, e)| &acc * &mu.pow(*e).expect("blowup parameters are units"))
}

/// Πᵢⱼ (μⱼᶦ)^{cᵢⱼ}
pub fn na_period(pair: &LooijengaPair, cycle: &TropCycle) -> Result<PeriodValue, PeriodError> {
    let cycle = make_cycle(pair, cycle.c.clone())?;
    let factors: Vec<(LaurentScalar, i64)> = pair
        .slots()
        .into_iter()
        .map(|(i, j)| (pair.mu(i, j).clone(), cycle.c[i][j]))
        .collect();
    Ok(PeriodValue { value: winding_product(&factors) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopStep {
    /// Inside C1 the trailing edge to the origin splits off the loop.
    Junction,
    Cross(Star, Star),
}

/// The positively oriented loop: start in C1, split off the trailing edge,
/// then cross C1 → C2 → C3 → C4 → C1.
pub const CANONICAL_LOOP: [LoopStep; 5] = [
    LoopStep::Junction,
    LoopStep::Cross(Star::C1, Star::C2),
    LoopStep::Cross(Star::C2, Star::C3),
    LoopStep::Cross(Star::C3, Star::C4),
    LoopStep::Cross(Star::C4, Star::C1),
];

/// Deformations of the canonical loop within the smooth locus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopShape {
    /// Steps of the canonical loop moved behind the base point.
    pub rotation: usize,
    /// Extra invariant decoration b·ěₕ carried by the whole loop.
    pub invariant: i64,
    /// Positions at which the loop dips into the next chart and comes back.
    pub detours: Vec<usize>,
    /// Side of the ray (C2 or C4) along which the trailing edge runs inwards.
    pub trailing: Star,
}

impl Default for LoopShape {
    fn default() -> Self {
        LoopShape { rotation: 0, invariant: 0, detours: Vec::new(), trailing: Star::C2 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopResult {
    pub value: LaurentScalar,
    /// Decoration of the trailing edge in global cotangent coordinates.
    pub trailing: Vec2,
}

struct Walker<'a> {
    cocycle: &'a CechCocycle,
    ray: usize,
    slot: usize,
    winding: i64,
    star: Star,
    xi: Vec2,
    value: LaurentScalar,
    /// Trailing decoration in C1 coordinates.
    zeta: Vec2,
}

impl Walker<'_> {
    fn step(&mut self, index: usize, s: LoopStep, pay: bool) -> Result<(), PeriodError> {
        match s {
            LoopStep::Junction => {
                if self.star != Star::C1 {
                    return Err(PeriodError::WalkBroken { step: index, expected: Star::C1, found: self.star });
                }
                let cut = [self.winding * CHECK_E_H[0], self.winding * CHECK_E_H[1]];
                self.xi = [self.xi[0] - cut[0], self.xi[1] - cut[1]];
                self.zeta = [self.zeta[0] + cut[0], self.zeta[1] + cut[1]];
            }
            LoopStep::Cross(from, to) => {
                if self.star != from {
                    return Err(PeriodError::WalkBroken { step: index, expected: from, found: self.star });
                }
                let (lambda, c) =
                    self.cocycle.value(&Overlap::Local { ray: self.ray, slot: self.slot, from, to });
                // ⟨λ, ξ⟩ is read on the C1 side of the overlap.
                if pay && from == Star::C1 {
                    self.value = &self.value * &c.pow(pair2(lambda, self.xi)).expect("unit");
                }
                self.xi = mat_vec(&transition_matrix(from, to)?, self.xi);
                self.star = to;
                if pay && to == Star::C1 {
                    self.value = &self.value * &c.pow(pair2(lambda, self.xi)).expect("unit");
                }
                debug_assert!(from == Star::C1 || to == Star::C1 || lambda == [0, 0]);
            }
        }
        Ok(())
    }
}

/// Walks one local loop with winding `winding` around the vertex in `slot`
/// of `ray`, collecting c^{⟨λ, ξ⟩} at every flagged overlap.
pub fn walk_local_loop(
    skel: &Skeleton,
    cocycle: &CechCocycle,
    ray: usize,
    slot: usize,
    winding: i64,
    shape: &LoopShape,
) -> Result<LoopResult, PeriodError> {
    let xi0 = [
        winding * CHECK_E_0[0] + shape.invariant * CHECK_E_H[0],
        winding * CHECK_E_0[1] + shape.invariant * CHECK_E_H[1],
    ];
    let mut w = Walker {
        cocycle,
        ray,
        slot,
        winding,
        star: Star::C1,
        xi: xi0,
        value: LaurentScalar::one(),
        zeta: [0, 0],
    };
    let r = shape.rotation % CANONICAL_LOOP.len();
    // Move the base point forward without paying, then walk a full turn.
    for (k, s) in CANONICAL_LOOP[..r].iter().enumerate() {
        w.step(k, *s, false)?;
    }
    w.zeta = [0, 0];
    let (start_star, start_xi) = (w.star, w.xi);
    let seq: Vec<LoopStep> = CANONICAL_LOOP[r..].iter().chain(&CANONICAL_LOOP[..r]).copied().collect();
    for k in 0..=seq.len() {
        for _ in shape.detours.iter().filter(|&&d| d == k) {
            let here = w.star;
            w.step(k, LoopStep::Cross(here, here.next()), true)?;
            w.step(k, LoopStep::Cross(here.next(), here), true)?;
        }
        if let Some(s) = seq.get(k) {
            w.step(k, *s, true)?;
        }
    }
    if w.star != start_star || w.xi != start_xi {
        return Err(PeriodError::WalkNotClosed { ray: ray + 1, slot: slot + 1 });
    }
    // The trailing edge runs through the same chart of every inner vertex
    // of the ray and then into the star of the origin.
    let side = transition_matrix(Star::C1, shape.trailing)?;
    let zeta_side = mat_vec(&side, w.zeta);
    let mut value = w.value;
    for k in (0..slot).rev() {
        let (lambda, c) = cocycle.value(&Overlap::Along { ray, from_slot: k + 1, to_slot: k, star: shape.trailing });
        value = &value * &c.pow(pair2(lambda, zeta_side)).expect("unit");
    }
    let (lambda, c) = cocycle.value(&Overlap::ToOrigin { ray, star: shape.trailing });
    value = &value * &c.pow(pair2(lambda, zeta_side)).expect("unit");
    let zeta_c1 = mat_vec(&mat_inv(&side), zeta_side);
    Ok(LoopResult { value, trailing: mat_vec(&skel.local_frame(ray), zeta_c1) })
}

/// The period by walking canonical loops.
pub fn na_period_cech(pair: &LooijengaPair, cycle: &TropCycle) -> Result<PeriodValue, PeriodError> {
    na_period_cech_with(pair, cycle, |_, _| LoopShape::default())
}

/// The period by walking loops of the given shapes.
pub fn na_period_cech_with(
    pair: &LooijengaPair,
    cycle: &TropCycle,
    shape: impl Fn(usize, usize) -> LoopShape,
) -> Result<PeriodValue, PeriodError> {
    let cycle = make_cycle(pair, cycle.c.clone())?;
    let skel = build_skeleton(pair);
    let cocycle = skel.cech_cocycle();
    let mut value = LaurentScalar::one();
    let mut at_origin = [0, 0];
    for (i, j) in pair.slots() {
        let c = cycle.c[i][j];
        if c == 0 {
            continue;
        }
        let r = walk_local_loop(&skel, &cocycle, i, j, c, &shape(i, j))?;
        value = &value * &r.value;
        at_origin = [at_origin[0] + r.trailing[0], at_origin[1] + r.trailing[1]];
    }
    if at_origin != [0, 0] {
        return Err(PeriodError::TrailingUnbalanced(at_origin));
    }
    Ok(PeriodValue { value })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompareRow {
    pub generator: PicClass,
    pub cycle: TropCycle,
    pub algebraic: LaurentScalar,
    pub closed_form: LaurentScalar,
    pub cech: LaurentScalar,
}

impl CompareRow {
    pub fn pass(&self) -> bool {
        self.algebraic == self.closed_form && self.closed_form == self.cech
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
}

impl CompareReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(CompareRow::pass)
    }
}

impl fmt::Display for CompareReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, r) in self.rows.iter().enumerate() {
            writeln!(
                f,
                "generator {}: {} | algebraic={} closed_form={} cech={} {}",
                k + 1,
                r.generator,
                r.algebraic,
                r.closed_form,
                r.cech,
                if r.pass() { "PASS" } else { "FAIL" }
            )?;
        }
        write!(f, "{} ({} generators)", if self.pass() { "PASS" } else { "FAIL" }, self.rows.len())
    }
}

/// Evaluates all three period routes on every generator of D⊥.
pub fn compare(pair: &LooijengaPair, seed: u64) -> Result<CompareReport, PeriodError> {
    let mut rows = Vec::new();
    for g in pair.dperp_basis() {
        let cycle = tropical::tropicalize(pair, &g)?;
        rows.push(CompareRow {
            algebraic: oracle::algebraic_period(pair, &g, seed)?,
            closed_form: na_period(pair, &cycle)?.value,
            cech: na_period_cech(pair, &cycle)?.value,
            generator: g,
            cycle,
        });
    }
    Ok(CompareReport { rows })
}
