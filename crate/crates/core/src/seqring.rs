//! The ring of sequences at finite truncation: the embedding of ℚ(x) along
//! a base orbit, the left-shift σ, fundamental solution matrices,
//! recurrence discovery, the unit / zero-divisor dichotomy, and the
//! idempotent cycle check.
//!
//! Two sequences are the same element when they agree for all n ≫ 0; the
//! truncated model compares them on the shared window from the later start
//! index on.

use crate::algebra::{Poly, Rat, RatFunc, RatMat};
use crate::error::{Error, Result};
use crate::projective::{BaseMap, ProjPoint};
use crate::recurrence::{
    decompose_progressions, default_period_cap, CertifyParams, Certificate, EvalLimits,
    Progression, Recurrence, DEFAULT_MARGIN,
};
use crate::skew::SkewSystem;
use num_traits::{One, Zero};
use std::fmt;

pub const DEFAULT_TRUNCATION: usize = 2000;

/// How a sequence was produced; recorded for reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Embedded(String),
    FundamentalEntry { row: usize, col: usize },
    InverseDet,
    Combination(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Embedded(h) => write!(f, "embed({h})"),
            Provenance::FundamentalEntry { row, col } => write!(f, "Y[{row},{col}]"),
            Provenance::InverseDet => write!(f, "1/det(Y)"),
            Provenance::Combination(s) => write!(f, "{s}"),
        }
    }
}

/// A sequence known exactly on the window [defined_from, window_end].
#[derive(Clone, Debug)]
pub struct Seq {
    defined_from: usize,
    values: Vec<Rat>,
    pub provenance: Provenance,
}

impl Seq {
    pub fn new(defined_from: usize, values: Vec<Rat>, provenance: Provenance) -> Self {
        Seq {
            defined_from,
            values,
            provenance,
        }
    }

    pub fn defined_from(&self) -> usize {
        self.defined_from
    }

    pub fn window_end(&self) -> usize {
        self.defined_from + self.values.len() - 1
    }

    pub fn at(&self, n: usize) -> Option<&Rat> {
        n.checked_sub(self.defined_from)
            .and_then(|i| self.values.get(i))
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    /// Eventual equality: agreement for every index of the shared window
    /// from max(defined_from) on. Errors when the windows do not overlap.
    pub fn eq_eventually(&self, other: &Seq) -> Result<bool> {
        let from = self.defined_from.max(other.defined_from);
        let to = self.window_end().min(other.window_end());
        if from > to {
            return Err(Error::InvalidInput("sequence windows do not overlap".into()));
        }
        Ok((from..=to).all(|n| self.at(n) == other.at(n)))
    }

    fn zip_with(&self, other: &Seq, tag: &str, f: impl Fn(&Rat, &Rat) -> Rat) -> Result<Seq> {
        let from = self.defined_from.max(other.defined_from);
        let to = self.window_end().min(other.window_end());
        if from > to {
            return Err(Error::InvalidInput("sequence windows do not overlap".into()));
        }
        let values = (from..=to)
            .map(|n| f(self.at(n).unwrap(), other.at(n).unwrap()))
            .collect();
        Ok(Seq {
            defined_from: from,
            values,
            provenance: Provenance::Combination(format!(
                "({}) {tag} ({})",
                self.provenance, other.provenance
            )),
        })
    }

    pub fn add(&self, other: &Seq) -> Result<Seq> {
        self.zip_with(other, "+", |a, b| a + b)
    }

    pub fn mul(&self, other: &Seq) -> Result<Seq> {
        self.zip_with(other, "*", |a, b| a * b)
    }

    pub fn sub(&self, other: &Seq) -> Result<Seq> {
        self.zip_with(other, "-", |a, b| a - b)
    }

    /// Zero indices within the window.
    pub fn zero_indices(&self) -> Vec<usize> {
        (self.defined_from..=self.window_end())
            .filter(|&n| self.at(n).unwrap().is_zero())
            .collect()
    }
}

/// Left shift: (σs)(n) = s(n+1); the truncation shrinks by one.
pub fn shift_sigma(s: &Seq) -> Seq {
    Seq {
        defined_from: s.defined_from,
        values: s.values[1..].to_vec(),
        provenance: Provenance::Combination(format!("sigma({})", s.provenance)),
    }
}

/// The embedding h ↦ (h(gⁿ(α)))ₙ of ℚ(x) into the sequence ring along the
/// orbit of α. The start index is the first point past every pole hit;
/// `OrbitFinite` reports a witnessed base repetition (the orbit must be
/// infinite for the embedding to be well defined).
pub fn embed_ratfunc(
    h: &RatFunc,
    g: &BaseMap,
    alpha: &ProjPoint,
    truncation: usize,
    limits: &EvalLimits,
) -> Result<Seq> {
    let mut points = Vec::with_capacity(truncation + 1);
    let mut seen = std::collections::HashMap::new();
    let mut pt = alpha.clone();
    for n in 0..=truncation {
        if let Some(&first) = seen.get(&pt) {
            return Err(Error::OrbitFinite {
                preperiod: first,
                period: n - first,
            });
        }
        seen.insert(pt.clone(), n);
        if pt.weil_height() > limits.height_cap {
            break; // window truncates at the representability limit
        }
        points.push(pt.clone());
        pt = g.apply(&pt);
    }
    if points.is_empty() {
        return Err(Error::HeightLimitExceeded { step: 0 });
    }
    let value_at = |p: &ProjPoint| -> Option<Rat> {
        match p.as_rat() {
            Some(x) => h.eval_affine(&x),
            None => h.value_at_infinity(),
        }
    };
    let last_pole = points
        .iter()
        .enumerate()
        .filter(|(_, p)| value_at(p).is_none())
        .map(|(n, _)| n)
        .next_back();
    let defined_from = last_pole.map_or(0, |n| n + 1);
    if defined_from >= points.len() {
        return Err(Error::InvalidInput(
            "no pole-free tail inside the window".into(),
        ));
    }
    let values = points[defined_from..]
        .iter()
        .map(|p| value_at(p).unwrap())
        .collect();
    Ok(Seq {
        defined_from,
        values,
        provenance: Provenance::Embedded(h.to_string()),
    })
}

/// The fundamental solution matrix Y with Y(n₀) = I and
/// Y(n+1) = A(gⁿ(α))·Y(n), with det Y(n) ≠ 0 verified on the whole range.
#[derive(Clone, Debug)]
pub struct FundMatrix {
    pub start_index: usize,
    /// values[k] = Y(start_index + k)
    pub values: Vec<RatMat>,
}

impl FundMatrix {
    pub fn entry_seq(&self, row: usize, col: usize) -> Seq {
        Seq {
            defined_from: self.start_index,
            values: self.values.iter().map(|m| m.at(row, col).clone()).collect(),
            provenance: Provenance::FundamentalEntry { row, col },
        }
    }

    pub fn inverse_det_seq(&self) -> Seq {
        Seq {
            defined_from: self.start_index,
            values: self
                .values
                .iter()
                .map(|m| m.det_field().unwrap().recip())
                .collect(),
            provenance: Provenance::InverseDet,
        }
    }
}

/// Chooses the smallest start index n₀ such that the orbit stays off the
/// singular locus from n₀ through the window (and, when the escape
/// certificate fires, forever), then runs the exact recursion.
pub fn fundamental_matrix(
    sys: &SkewSystem,
    alpha: &ProjPoint,
    truncation: usize,
    limits: &EvalLimits,
) -> Result<FundMatrix> {
    let det = sys.matrix().det()?;
    if det.is_zero() {
        return Err(Error::InvalidInput(
            "det A must be nonzero in Q(x) for a fundamental matrix".into(),
        ));
    }
    // constant matrices never touch the base orbit: Y(n) = A^n
    if sys.matrix().entries().all(|e| e.as_constant().is_some()) {
        let a = sys
            .matrix()
            .eval_affine(&Rat::zero())
            .expect("constant matrix evaluates anywhere");
        if a.det_field()?.is_zero() {
            return Err(Error::SingularTail(truncation));
        }
        let mut values = Vec::with_capacity(truncation + 1);
        let mut y = RatMat::identity(sys.dim());
        values.push(y.clone());
        for _ in 0..truncation {
            y = a.mul(&y);
            values.push(y.clone());
        }
        return Ok(FundMatrix {
            start_index: 0,
            values,
        });
    }
    let locus = sys.singular_locus();
    // orbit points for the whole window
    let mut points = Vec::with_capacity(truncation + 1);
    let mut pt = alpha.clone();
    let mut escape_from = None;
    for n in 0..=truncation {
        if escape_from.is_none() && sys.base().orbit_escapes(&pt, &locus.height_bound()) {
            escape_from = Some(n);
        }
        if pt.weil_height() > limits.height_cap {
            return Err(Error::HeightLimitExceeded { step: n });
        }
        points.push(pt.clone());
        pt = sys.base().apply(&pt);
    }
    // smallest n0 with no singular hit at n0..truncation
    let last_hit = points
        .iter()
        .enumerate()
        .filter(|(_, p)| locus.meets(p))
        .map(|(n, _)| n)
        .next_back();
    let start_index = last_hit.map_or(0, |n| n + 1);
    if start_index > truncation {
        return Err(Error::SingularTail(truncation));
    }
    if let Some(e) = escape_from {
        debug_assert!(start_index <= e.max(start_index));
    }
    let mut values = Vec::with_capacity(truncation + 1 - start_index);
    let mut y = RatMat::identity(sys.dim());
    values.push(y.clone());
    for (k, p) in points[start_index..truncation].iter().enumerate() {
        let a = sys.matrix_at(p, start_index + k)?;
        y = a.mul(&y);
        values.push(y.clone());
    }
    // det Y(n) ≠ 0 on the full range
    for (k, m) in values.iter().enumerate() {
        if m.det_field()?.is_zero() {
            return Err(Error::InvalidInput(format!(
                "fundamental matrix is singular at index {}",
                start_index + k
            )));
        }
    }
    Ok(FundMatrix {
        start_index,
        values,
    })
}

/// Searches for the smallest order r ≤ max_order admitting polynomial
/// coefficient tuples (n₀,…,n_r) of degree ≤ degree_bound with
/// Σ nᵢ(gⁿ(α))·s(n+i) = n_r(gⁿ(α))·s(n+r) on the training rows, verified
/// on the remaining window. The returned recurrence has hᵢ = nᵢ/n_r.
pub fn find_linear_recurrence(
    s: &Seq,
    g: &BaseMap,
    alpha: &ProjPoint,
    max_order: usize,
    degree_bound: usize,
    limits: &EvalLimits,
) -> Result<Option<Recurrence>> {
    let window_len = s.values.len();
    let fits = |order: usize, deg: usize| window_len >= (order + 1) * (deg + 1) + order + 5;
    if !fits(1, 0) {
        return Err(Error::InvalidInput(
            "window too short: need at least 8 values".into(),
        ));
    }
    // Base points over the window, materialized on the first attempt with
    // a positive coefficient degree (a degree-0 ansatz never touches the
    // base orbit).
    let mut xs: Option<Vec<Option<Rat>>> = None;
    let mut height_blocked: Option<Error> = None;
    let mut materialize = |xs: &mut Option<Vec<Option<Rat>>>| -> bool {
        if xs.is_some() {
            return true;
        }
        let mut out = Vec::with_capacity(window_len);
        let mut pt = g.iterate(alpha, s.defined_from);
        for _ in 0..window_len {
            if pt.weil_height() > limits.height_cap {
                height_blocked = Some(Error::HeightLimitExceeded {
                    step: s.defined_from + out.len(),
                });
                return false;
            }
            out.push(pt.as_rat());
            pt = g.apply(&pt);
        }
        *xs = Some(out);
        true
    };

    for order in 1..=max_order {
        for deg in 0..=degree_bound {
            if !fits(order, deg) {
                break;
            }
            let row_points: Vec<Option<Rat>> = if deg == 0 {
                vec![Some(Rat::zero()); window_len]
            } else {
                if !materialize(&mut xs) {
                    break; // base heights block every positive degree
                }
                xs.clone().unwrap()
            };
            if let Some(rec) = attempt_recurrence(s, g, alpha, order, deg, &row_points)? {
                return Ok(Some(rec));
            }
        }
    }
    match height_blocked {
        Some(e) => Err(e),
        None => Ok(None),
    }
}

fn attempt_recurrence(
    s: &Seq,
    g: &BaseMap,
    alpha: &ProjPoint,
    order: usize,
    deg: usize,
    xs: &[Option<Rat>],
) -> Result<Option<Recurrence>> {
    let window_len = s.values.len();
    let unknowns = (order + 1) * (deg + 1);
    let train = (unknowns + 5).min(window_len - order);
    let mut rows = Vec::with_capacity(train);
    for n in 0..window_len - order {
        if rows.len() == train {
            break;
        }
        let Some(x) = &xs[n] else { continue };
        let mut x_pows = Vec::with_capacity(deg + 1);
        let mut p = Rat::one();
        for _ in 0..=deg {
            x_pows.push(p.clone());
            p *= x;
        }
        let mut row = Vec::with_capacity(unknowns);
        for i in 0..=order {
            let sv = &s.values[n + i];
            let sign = if i == order { -Rat::one() } else { Rat::one() };
            for xp in &x_pows {
                row.push(&sign * sv * xp);
            }
        }
        rows.push(row);
    }
    if rows.len() < train {
        return Ok(None);
    }
    let mat = RatMat::from_rows(rows)?;
    for v in &mat.kernel_basis() {
        // the leading block divides; it must be a nonzero polynomial
        if v[order * (deg + 1)..].iter().all(|c| c.is_zero()) {
            continue;
        }
        let polys: Vec<Poly> = (0..=order)
            .map(|i| Poly::from_coeffs(v[i * (deg + 1)..(i + 1) * (deg + 1)].to_vec()))
            .collect();
        // verify the polynomial identity on every remaining window row
        let verified = (0..window_len - order).all(|n| {
            let Some(x) = &xs[n] else { return true };
            let mut acc = Rat::zero();
            for i in 0..order {
                acc += polys[i].eval(x) * &s.values[n + i];
            }
            acc -= polys[order].eval(x) * &s.values[n + order];
            acc.is_zero()
        });
        if !verified {
            continue;
        }
        let nr = RatFunc::from_poly(polys[order].clone());
        let coeffs: Vec<RatFunc> = (0..order)
            .map(|i| &RatFunc::from_poly(polys[i].clone()) / &nr)
            .collect();
        let rec = Recurrence::new(
            coeffs,
            g.clone(),
            g.iterate(alpha, s.defined_from),
            s.values[..order].to_vec(),
        )?;
        return Ok(Some(rec));
    }
    Ok(None)
}

/// Verdict of the unit / zero-divisor dichotomy. Unit classification stays
/// a candidate (a window cannot prove cofinitely many nonzeros); the
/// zero-divisor branch is fully certified through the progression
/// machinery and the re-verified product identity a·σ(a)···σᵈ(a) = 0.
#[derive(Clone, Debug)]
pub enum RingElementVerdict {
    UnitCandidate,
    ZeroDivisor {
        witness_step: usize,
        certificate: Certificate,
    },
}

/// Classifies a sequence-ring element: certified all-zero progressions make
/// it a zero divisor; finitely many observed zeros leave a unit candidate;
/// an uncertified infinite-looking zero set is reported as inconclusive.
pub fn classify_element(
    s: &Seq,
    g: &BaseMap,
    alpha: &ProjPoint,
    recurrence: Option<Recurrence>,
    params: &CertifyParams,
    limits: &EvalLimits,
) -> Result<RingElementVerdict> {
    let rec = match recurrence {
        Some(r) => r,
        None => find_linear_recurrence(s, g, alpha, 3, params.degree_bound, limits)?.ok_or_else(
            || Error::Inconclusive("no linear recurrence found for the element".into()),
        )?,
    };
    let zeros = s.zero_indices();
    let window_end = s.window_end();
    // decomposition runs on window-relative indices
    let rel_zeros: Vec<usize> = zeros.iter().map(|&z| z - s.defined_from).collect();
    let rel_end = window_end - s.defined_from;
    let set = decompose_progressions(
        &rel_zeros,
        rel_end,
        default_period_cap(rel_end),
        DEFAULT_MARGIN,
    );
    let candidates: Vec<Progression> = set
        .progressions
        .iter()
        .filter(|p| p.step >= 1)
        .copied()
        .collect();
    for prog in &candidates {
        // progression for the recurrence (whose index 0 is defined_from)
        let cert = rec.certify_progression(*prog, 0, params)?;
        if cert.is_certified() {
            let d = prog.step;
            // product identity a·σ(a)···σᵈ(a) on the whole window
            for n in s.defined_from + prog.offset..=window_end.saturating_sub(d) {
                let mut prod = Rat::one();
                for j in 0..=d {
                    prod *= s.at(n + j).unwrap();
                }
                if !prod.is_zero() {
                    return Err(Error::Inconclusive(format!(
                        "certified progression contradicted by the window product at {n}"
                    )));
                }
            }
            return Ok(RingElementVerdict::ZeroDivisor {
                witness_step: d,
                certificate: cert,
            });
        }
    }
    if !candidates.is_empty() {
        return Err(Error::Inconclusive(
            "zero set looks infinite but no progression could be certified".into(),
        ));
    }
    Ok(RingElementVerdict::UnitCandidate)
}

/// Checks the idempotent cycle structure: each indicator is 0/1-valued,
/// pairwise products vanish, the sum is 1, and σ permutes the indicators in
/// a single r-cycle (a proper sub-cycle would sum to a constant idempotent
/// other than 0 or 1).
pub fn idempotent_cycle_check(indicators: &[Seq]) -> Result<bool> {
    if indicators.is_empty() {
        return Err(Error::NotIdempotentSystem("no indicators given".into()));
    }
    let from = indicators
        .iter()
        .map(|s| s.defined_from)
        .max()
        .unwrap();
    let to = indicators
        .iter()
        .map(|s| s.window_end())
        .min()
        .unwrap()
        .saturating_sub(1); // room for one shift
    if from > to {
        return Err(Error::NotIdempotentSystem(
            "indicator windows do not overlap".into(),
        ));
    }
    for (i, s) in indicators.iter().enumerate() {
        for n in from..=to {
            let v = s.at(n).unwrap();
            if !v.is_zero() && !v.is_one() {
                return Err(Error::NotIdempotentSystem(format!(
                    "indicator {i} is not 0/1-valued at {n}"
                )));
            }
        }
    }
    for n in from..=to {
        let mut sum = Rat::zero();
        for s in indicators {
            sum += s.at(n).unwrap();
        }
        if !sum.is_one() {
            return Err(Error::NotIdempotentSystem(format!(
                "indicator sum is not 1 at {n}"
            )));
        }
        for i in 0..indicators.len() {
            for j in i + 1..indicators.len() {
                if !(indicators[i].at(n).unwrap() * indicators[j].at(n).unwrap()).is_zero() {
                    return Err(Error::NotIdempotentSystem(format!(
                        "indicators {i} and {j} overlap at {n}"
                    )));
                }
            }
        }
    }
    // σ must permute the indicators; the permutation must be one r-cycle
    let r = indicators.len();
    let mut next = vec![None; r];
    for (i, s) in indicators.iter().enumerate() {
        let shifted = shift_sigma(s);
        for (j, t) in indicators.iter().enumerate() {
            if shifted.eq_eventually(t)? {
                next[i] = Some(j);
                break;
            }
        }
    }
    let Some(next): Option<Vec<usize>> = next.into_iter().collect() else {
        return Ok(false);
    };
    // follow the cycle from 0
    let mut seen = vec![false; r];
    let mut cur = 0usize;
    for _ in 0..r {
        if seen[cur] {
            return Ok(false);
        }
        seen[cur] = true;
        cur = next[cur];
    }
    Ok(cur == 0 && seen.iter().all(|&b| b))
}
