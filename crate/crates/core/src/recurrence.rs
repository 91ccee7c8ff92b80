//! Non-autonomous linear recurrences a_(n+ℓ) = Σ h_i(gⁿ(α))·a_(n+i), their
//! companion skew systems, exact zero sets, decomposition into arithmetic
//! progressions, and symbolic certification of all-zero progressions.
//!
//! Exactness discipline for long windows: direct evaluation while base
//! heights stay representable; once a window of ℓ consecutive terms is zero
//! and the base orbit provably escapes every coefficient pole (height
//! certificate), the remaining terms are exactly zero with no further base
//! arithmetic. Anything else fails loudly rather than approximating.

use crate::algebra::{FuncMat, Poly, Rat, RatFunc};
use crate::error::{Error, Result};
use crate::projective::{default_height_cap, BaseMap, ProjPoint};
use crate::skew::{LinearFamily, SkewPoint, SkewSystem, DEFAULT_DEGREE_CAP};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashSet;

/// The data (ℓ, h₀..h_(ℓ−1), g, α, a₀..a_(ℓ−1)).
#[derive(Clone, Debug)]
pub struct Recurrence {
    coeffs: Vec<RatFunc>,
    base: BaseMap,
    alpha: ProjPoint,
    init: Vec<Rat>,
}

/// Caps for exact evaluation along possibly fast-growing base orbits.
#[derive(Clone, Debug)]
pub struct EvalLimits {
    pub height_cap: BigInt,
}

impl Default for EvalLimits {
    fn default() -> Self {
        EvalLimits {
            height_cap: default_height_cap(),
        }
    }
}

impl Recurrence {
    pub fn new(
        coeffs: Vec<RatFunc>,
        base: BaseMap,
        alpha: ProjPoint,
        init: Vec<Rat>,
    ) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("recurrence order must be >= 1".into()));
        }
        if coeffs.len() != init.len() {
            return Err(Error::DimensionMismatch(
                "number of coefficients != number of initial terms".into(),
            ));
        }
        Ok(Recurrence {
            coeffs,
            base,
            alpha,
            init,
        })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn base(&self) -> &BaseMap {
        &self.base
    }

    pub fn alpha(&self) -> &ProjPoint {
        &self.alpha
    }

    pub fn init(&self) -> &[Rat] {
        &self.init
    }

    /// The ℓ×ℓ companion system: 1's on the superdiagonal, the coefficient
    /// row at the bottom, started at (α, (a₀,…,a_(ℓ−1))). The fiber of the
    /// n-th iterate is (aₙ,…,a_(n+ℓ−1)).
    pub fn companion_system(&self) -> (SkewSystem, SkewPoint) {
        let l = self.order();
        let mut rows = Vec::with_capacity(l);
        for i in 0..l.saturating_sub(1) {
            let mut row = vec![RatFunc::zero(); l];
            row[i + 1] = RatFunc::one();
            rows.push(row);
        }
        rows.push(self.coeffs.clone());
        let sys = SkewSystem::new(self.base.clone(), FuncMat::from_rows(rows).unwrap()).unwrap();
        let start = SkewPoint::new(self.alpha.clone(), self.init.clone());
        (sys, start)
    }

    fn coeff_value(h: &RatFunc, pt: &ProjPoint) -> Option<Rat> {
        match pt.as_rat() {
            Some(x) => h.eval_affine(&x),
            None => h.value_at_infinity(),
        }
    }

    /// Exact terms a₀..a_(n_max).
    ///
    /// A coefficient pole on the orbit is a hard error. If base heights pass
    /// the cap while coefficient values are still needed, the evaluation
    /// fails loudly with `HeightLimitExceeded`; the certified all-zero tail
    /// and constant coefficients avoid base arithmetic entirely.
    pub fn sequence_terms(&self, n_max: usize, limits: &EvalLimits) -> Result<Vec<Rat>> {
        let l = self.order();
        if n_max < l {
            return Ok(self.init[..=n_max].to_vec());
        }
        let mut terms = self.init.clone();
        terms.reserve(n_max + 1 - l);
        let const_vals: Option<Vec<Rat>> = self.coeffs.iter().map(|h| h.as_constant()).collect();

        if let Some(cs) = const_vals {
            // Constant coefficients never touch the base orbit.
            for n in 0..=(n_max - l) {
                let mut next = Rat::zero();
                for (i, c) in cs.iter().enumerate() {
                    if !c.is_zero() && !terms[n + i].is_zero() {
                        next += c * &terms[n + i];
                    }
                }
                terms.push(next);
            }
            return Ok(terms);
        }

        // Height bound covering every affine coefficient pole.
        let mut pole_locus = Poly::one();
        for h in &self.coeffs {
            pole_locus = pole_locus.lcm(h.den());
        }
        let pole_bound = pole_locus.rational_root_height_bound();

        let mut pt = self.alpha.clone();
        for n in 0..=(n_max - l) {
            if terms[n..n + l].iter().all(|v| v.is_zero())
                && self.base.orbit_escapes(&pt, &pole_bound)
            {
                // A zero window propagates by linearity, and escape
                // certifies no coefficient pole (finite or at infinity) is
                // ever hit again.
                terms.resize(n_max + 1, Rat::zero());
                return Ok(terms);
            }
            if pt.weil_height() > limits.height_cap {
                return Err(Error::HeightLimitExceeded { step: n });
            }
            let mut next = Rat::zero();
            for (i, h) in self.coeffs.iter().enumerate() {
                let v = Self::coeff_value(h, &pt)
                    .ok_or(Error::CoefficientPole { step: n, index: i })?;
                if !v.is_zero() && !terms[n + i].is_zero() {
                    next += v * &terms[n + i];
                }
            }
            terms.push(next);
            pt = self.base.apply(&pt);
        }
        Ok(terms)
    }

    /// Indices of exact zeros in [0, n_max].
    pub fn zero_set(&self, n_max: usize, limits: &EvalLimits) -> Result<Vec<usize>> {
        Ok(self
            .sequence_terms(n_max, limits)?
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_zero())
            .map(|(n, _)| n)
            .collect())
    }
}

/// An arithmetic progression {offset + step·n : n ≥ 0}; step 0 is a
/// singleton.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Progression {
    pub offset: usize,
    pub step: usize,
}

impl Progression {
    pub fn contains(&self, n: usize) -> bool {
        if self.step == 0 {
            n == self.offset
        } else {
            n >= self.offset && (n - self.offset) % self.step == 0
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionVerdict {
    Consistent { preperiod: usize, period: usize },
    Inconclusive,
}

/// Finite union of arithmetic progressions describing a zero set on a
/// window [0, window_end].
#[derive(Clone, Debug)]
pub struct ProgressionSet {
    pub progressions: Vec<Progression>,
    pub window_end: usize,
    pub verdict: DecompositionVerdict,
}

impl ProgressionSet {
    /// The union of the progressions intersected with [0, window_end].
    pub fn reconstruct(&self) -> Vec<usize> {
        (0..=self.window_end)
            .filter(|&n| self.progressions.iter().any(|p| p.contains(n)))
            .collect()
    }
}

pub const DEFAULT_MARGIN: usize = 3;

pub fn default_period_cap(n_max: usize) -> usize {
    (n_max / 10).max(1)
}

/// Finds the minimal (period, then preperiod) pair under the margin rule
/// (the periodic window must cover at least `margin` full periods), then
/// emits sporadic zeros below the preperiod as singletons and one
/// progression per all-zero residue class. With no admissible pair the
/// verdict is Inconclusive and every zero is a singleton.
pub fn decompose_progressions(
    zeros: &[usize],
    n_max: usize,
    period_cap: usize,
    margin: usize,
) -> ProgressionSet {
    assert!(margin >= 1, "margin must be >= 1");
    debug_assert!(zeros.iter().all(|&z| z <= n_max));
    let mut indicator = vec![false; n_max + 1];
    for &z in zeros {
        indicator[z] = true;
    }
    for period in 1..=period_cap {
        if period > n_max {
            break;
        }
        // last index where the indicator fails to be period-periodic
        let violation = (0..=n_max - period)
            .rev()
            .find(|&i| indicator[i] != indicator[i + period]);
        let preperiod = violation.map_or(0, |i| i + 1);
        if n_max - preperiod < margin * period {
            continue;
        }
        let mut progressions: Vec<Progression> = zeros
            .iter()
            .filter(|&&z| z < preperiod)
            .map(|&z| Progression { offset: z, step: 0 })
            .collect();
        for offset in preperiod..preperiod + period {
            let all_zero = (offset..=n_max).step_by(period).all(|n| indicator[n]);
            if all_zero {
                progressions.push(Progression {
                    offset,
                    step: period,
                });
            } else {
                debug_assert!(
                    (offset..=n_max).step_by(period).all(|n| !indicator[n]),
                    "residue class not constant on the periodic window"
                );
            }
        }
        let set = ProgressionSet {
            progressions,
            window_end: n_max,
            verdict: DecompositionVerdict::Consistent { preperiod, period },
        };
        debug_assert_eq!(set.reconstruct(), zeros);
        return set;
    }
    ProgressionSet {
        progressions: zeros
            .iter()
            .map(|&z| Progression { offset: z, step: 0 })
            .collect(),
        window_end: n_max,
        verdict: DecompositionVerdict::Inconclusive,
    }
}

/// Parameters for progression certification.
#[derive(Clone, Debug)]
pub struct CertifyParams {
    /// Polynomial degree bound D for relation coefficients.
    pub degree_bound: usize,
    /// Cap on symbolic composition degrees.
    pub degree_cap: usize,
    /// Base-height cap for collecting the exact sub-orbit sample; larger
    /// than the evaluation default because only a handful of points is
    /// needed.
    pub sample_height_cap: BigInt,
    /// Cap on the exceptional-locus verification walk.
    pub walk_cap: usize,
}

impl Default for CertifyParams {
    fn default() -> Self {
        CertifyParams {
            degree_bound: 2,
            degree_cap: DEFAULT_DEGREE_CAP,
            sample_height_cap: BigInt::from(10u32).pow(6000),
            walk_cap: 10_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertStatus {
    Certified,
    Unknown { reason: String },
}

/// A symbolic certificate that a_(offset + step·n) = 0 for all n ≥ 0.
///
/// Certified means: in homogenized fiber coordinates (an appended y₀ ≡ 1)
/// the discovered relation family implies the coordinate form y₁, its
/// kernel family is invariant under the step-fold composed system with a
/// witness T, the start point lies in the family, and the sub-orbit
/// provably avoids the witness denominators and the composed pole locus at
/// every step.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub progression: Progression,
    pub relation_basis: Option<LinearFamily>,
    pub invariance_witness: Option<FuncMat>,
    pub status: CertStatus,
}

impl Certificate {
    fn unknown(progression: Progression, reason: impl Into<String>) -> Self {
        Certificate {
            progression,
            relation_basis: None,
            invariance_witness: None,
            status: CertStatus::Unknown {
                reason: reason.into(),
            },
        }
    }

    pub fn is_certified(&self) -> bool {
        self.status == CertStatus::Certified
    }
}

impl Recurrence {
    /// Attempts to certify that the progression (c, d), d ≥ 1, is all-zero
    /// for the full infinite sequence.
    ///
    /// Coefficient degree bounds are tried from 0 up to the configured
    /// bound, so the simplest certificate wins; each bound D needs at least
    /// (D+1)(ℓ+1)+5 exact sample points, and only as many as the height cap
    /// allows are collected. `sample_len` can request more than the floor.
    pub fn certify_progression(
        &self,
        progression: Progression,
        sample_len: usize,
        params: &CertifyParams,
    ) -> Result<Certificate> {
        let (c, d) = (progression.offset, progression.step);
        if d == 0 {
            return Err(Error::InvalidInput(
                "singletons are finite evidence; only step >= 1 is certified".into(),
            ));
        }
        let l = self.order();
        let floor = |deg: usize| (deg + 1) * (l + 1) + 5;
        let want = sample_len.max(floor(params.degree_bound));

        // Exact sub-orbit bases, as many as the height cap allows.
        let mut bases = Vec::with_capacity(want);
        let mut pt = self.base.iterate(&self.alpha, c);
        let start_base = pt.clone();
        while bases.len() < want {
            if pt.is_infinity() || pt.weil_height() > params.sample_height_cap {
                break;
            }
            bases.push(pt.clone());
            pt = self.base.iterate(&pt, d);
        }
        if bases.len() < floor(0) {
            return Ok(Certificate::unknown(
                progression,
                format!(
                    "exact sample infeasible: {} points within the height cap, {} required",
                    bases.len(),
                    floor(0)
                ),
            ));
        }

        let top_index = c + d * (bases.len() - 1) + l.saturating_sub(1);
        let terms = match self.sequence_terms(
            top_index,
            &EvalLimits {
                height_cap: params.sample_height_cap.clone(),
            },
        ) {
            Ok(t) => t,
            Err(Error::HeightLimitExceeded { step }) => {
                return Ok(Certificate::unknown(
                    progression,
                    format!("exact sample infeasible: base height cap at step {step}"),
                ))
            }
            Err(e) => return Err(e),
        };
        let samples: Vec<SkewPoint> = bases
            .iter()
            .enumerate()
            .map(|(j, b)| {
                let idx = c + d * j;
                SkewPoint::new(b.clone(), terms[idx..idx + l].to_vec())
            })
            .collect();
        let fiber_start = &terms[c..c + l];

        let mut last_reason = String::from("no relations found");
        for degree in 0..=params.degree_bound {
            if samples.len() < floor(degree) {
                break;
            }
            match self.certify_attempt(
                progression,
                &samples,
                &start_base,
                fiber_start,
                degree,
                params,
            )? {
                Ok(cert) => return Ok(cert),
                Err(reason) => last_reason = reason,
            }
        }
        Ok(Certificate::unknown(progression, last_reason))
    }

    /// One certification attempt at a fixed coefficient degree bound.
    /// Outer Err: real errors; inner Err: the reason this attempt failed.
    #[allow(clippy::type_complexity)]
    fn certify_attempt(
        &self,
        progression: Progression,
        samples: &[SkewPoint],
        start_base: &ProjPoint,
        fiber_start: &[Rat],
        degree_bound: usize,
        params: &CertifyParams,
    ) -> Result<std::result::Result<Certificate, String>> {
        let d = progression.step;
        let l = self.order();
        let relations = crate::skew::discover_linear_relations(samples, l, degree_bound)?;
        if relations.is_empty() {
            return Ok(Err("no relations found".into()));
        }

        // Relation matrix C over the homogenized fiber (y0, y1, .., yl).
        let c_mat = FuncMat::from_rows(
            relations
                .iter()
                .map(|r| {
                    r.coeffs
                        .iter()
                        .map(|p| RatFunc::from_poly(p.clone()))
                        .collect()
                })
                .collect(),
        )?;
        // (a) the coordinate form y1 lies in the Q(x)-row span.
        let mut y1 = vec![RatFunc::zero(); l + 1];
        y1[1] = RatFunc::one();
        if c_mat.transpose().solve(&y1).is_none() {
            return Ok(Err(
                "coordinate form not implied by discovered relations".into()
            ));
        }

        // Composed system (g^d, diag(1, P_d)).
        let g_d = match self.base.compose_self(d, params.degree_cap) {
            Ok(f) => BaseMap::new(f)?,
            Err(e) => return Ok(Err(format!("composed base map overflow: {e}"))),
        };
        let (sys, _) = self.companion_system();
        let a_d = match sys.symbolic_cocycle(d, params.degree_cap) {
            Ok(m) => m,
            Err(e) => return Ok(Err(format!("composed cocycle overflow: {e}"))),
        };
        let mut ext = FuncMat::zeros(l + 1, l + 1);
        ext.set(0, 0, RatFunc::one());
        for i in 0..l {
            for j in 0..l {
                ext.set(i + 1, j + 1, a_d.at(i, j).clone());
            }
        }
        let sys_ext = SkewSystem::new(g_d.clone(), ext.clone())?;

        // Family: kernel of C, columns cleared to polynomial entries.
        let kernel = c_mat.kernel_basis();
        if kernel.is_empty() {
            return Ok(Err("relation family has trivial kernel".into()));
        }
        let mut basis = FuncMat::zeros(l + 1, kernel.len());
        for (j, v) in kernel.iter().enumerate() {
            let mut den = Poly::one();
            for e in v {
                den = den.lcm(e.den());
            }
            let den = RatFunc::from_poly(den);
            for (i, e) in v.iter().enumerate() {
                basis.set(i, j, e * &den);
            }
        }
        let family = LinearFamily::new(basis.clone())?;
        // Load-bearing identity: y1 annihilates the family over Q(x), so
        // membership in the family fiber forces the coordinate to vanish.
        let y1_of_basis = FuncMat::from_rows(vec![y1])?.mul(&basis);
        if y1_of_basis.entries().any(|e| !e.is_zero()) {
            return Ok(Err("coordinate form does not vanish on the family".into()));
        }

        // (b) invariance of the family under the composed system.
        let witness = match sys_ext.invariance_certificate(&family, params.degree_cap) {
            Ok(Some(t)) => t,
            Ok(None) => return Ok(Err("family not invariant under the composed system".into())),
            Err(e) => return Ok(Err(format!("invariance solve overflow: {e}"))),
        };

        // (c) the start point lies in the family fiber.
        let x0 = match start_base.as_rat() {
            Some(x) => x,
            None => return Ok(Err("start base point at infinity".into())),
        };
        let mut fiber_ext = Vec::with_capacity(l + 1);
        fiber_ext.push(Rat::one());
        fiber_ext.extend_from_slice(fiber_start);
        let b0 = match basis.eval_affine(&x0) {
            Some(m) => m,
            None => return Ok(Err("family basis degenerates at the start point".into())),
        };
        if b0.solve(&fiber_ext).is_none() {
            return Ok(Err("start point does not satisfy the relation family".into()));
        }
        for r in &relations {
            debug_assert!(r.eval(&x0, fiber_start).is_zero());
        }

        // (d) exceptional locus: the sub-orbit must avoid the witness
        // denominators, the composed pole locus, poles of the composed
        // family, and infinity, at every step.
        let mut bad = Poly::one();
        for e in witness.entries().chain(ext.entries()) {
            bad = bad.lcm(e.den());
        }
        match basis.compose(g_d.func(), params.degree_cap) {
            Ok(m) => {
                for e in m.entries() {
                    bad = bad.lcm(e.den());
                }
            }
            Err(e) => return Ok(Err(format!("composed family overflow: {e}"))),
        }
        let everything_constant = witness
            .entries()
            .chain(ext.entries())
            .chain(basis.entries())
            .all(|e| e.as_constant().is_some());
        if !everything_constant {
            match verify_avoidance(&g_d, start_base, &bad, params.walk_cap) {
                Avoidance::CertifiedAllSteps => {}
                Avoidance::Fails(j) => {
                    return Ok(Err(format!(
                        "sub-orbit meets the exceptional locus at sub-step {j}"
                    )))
                }
                Avoidance::Unverified(j) => {
                    return Ok(Err(format!(
                        "exceptional-locus avoidance unverified beyond sub-step {j}"
                    )))
                }
            }
        }

        Ok(Ok(Certificate {
            progression,
            relation_basis: Some(family),
            invariance_witness: Some(witness),
            status: CertStatus::Certified,
        }))
    }
}

enum Avoidance {
    CertifiedAllSteps,
    Fails(usize),
    Unverified(usize),
}

/// Walks the g_d-orbit from `start` certifying that `bad` never vanishes
/// and infinity is never hit, for all steps: either the orbit closes
/// (revisit, everything checked) or the height-escape certificate fires.
fn verify_avoidance(g_d: &BaseMap, start: &ProjPoint, bad: &Poly, walk_cap: usize) -> Avoidance {
    let bad_bound = if bad.is_constant() {
        BigInt::one()
    } else {
        bad.rational_root_height_bound()
    };
    let bad_is_nonzero_const = bad.is_constant() && !bad.is_zero();
    let mut seen: HashSet<ProjPoint> = HashSet::new();
    let mut pt = start.clone();
    for j in 0..walk_cap {
        if !seen.insert(pt.clone()) {
            return Avoidance::CertifiedAllSteps; // orbit closed, all checked
        }
        match pt.as_rat() {
            None => return Avoidance::Fails(j),
            Some(x) => {
                if !bad_is_nonzero_const && bad.eval(&x).is_zero() {
                    return Avoidance::Fails(j);
                }
            }
        }
        if g_d.orbit_escapes(&pt, &bad_bound) {
            // heights strictly increase: never infinity, never a bad root
            return Avoidance::CertifiedAllSteps;
        }
        pt = g_d.apply(&pt);
    }
    Avoidance::Unverified(walk_cap)
}
