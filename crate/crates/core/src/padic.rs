//! Desk-scale p-adic verification engine: good-reduction prime selection,
//! residue dynamics, attuned iterates congruent to the identity mod p²,
//! Mahler finite-difference profiles of orbit coordinates, and Strassmann
//! zero bounds giving the finite-or-everything dichotomy.
//!
//! p-adic integers are exact integers mod p^K. Under the good-reduction
//! conditions enforced by prime selection, iteration mod p^K commutes with
//! exact iteration and loses no precision: the homogeneous base pair never
//! vanishes jointly mod p (nonzero resultant) and no entry denominator
//! vanishes mod p along the orbit.

use crate::algebra::{Poly, Rat, RatFunc};
use crate::error::{Error, Result};
use crate::projective::ProjPoint;
use crate::skew::{SkewPoint, SkewSystem};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::HashMap;

pub const DEFAULT_PRECISION: u32 = 40;
pub const DEFAULT_KMAX: usize = 20;

/// Prime p and working precision K; all congruences are mod p^K.
#[derive(Clone, Debug)]
pub struct PadicContext {
    p: u64,
    precision: u32,
    modulus: BigUint,
}

impl PadicContext {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if precision < 4 {
            return Err(Error::InvalidInput("precision must be >= 4".into()));
        }
        Ok(PadicContext {
            p,
            precision,
            modulus: BigUint::from(p).pow(precision),
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    fn reduce_int(&self, n: &BigInt) -> BigUint {
        let m = BigInt::from(self.modulus.clone());
        let r = ((n % &m) + &m) % &m;
        r.to_biguint().unwrap()
    }

    /// Reduction of a rational with p-unit denominator.
    pub fn reduce_rat(&self, r: &Rat) -> Result<BigUint> {
        let den = self.reduce_int(r.denom());
        let inv = self
            .inverse(&den)
            .ok_or(Error::PrimeDividesInput { p: self.p })?;
        Ok(self.reduce_int(r.numer()) * inv % &self.modulus)
    }

    pub fn inverse(&self, a: &BigUint) -> Option<BigUint> {
        if (a % self.p).is_zero() {
            return None;
        }
        let a = BigInt::from(a.clone());
        let m = BigInt::from(self.modulus.clone());
        let e = a.extended_gcd(&m);
        debug_assert!(e.gcd.is_one());
        let x = ((e.x % &m) + &m) % &m;
        Some(x.to_biguint().unwrap())
    }

    /// v_p of a residue; a zero residue only witnesses v ≥ K.
    pub fn valuation(&self, a: &BigUint) -> Valuation {
        if a.is_zero() {
            return Valuation::AtLeastPrecision;
        }
        let p = BigUint::from(self.p);
        let mut v = 0u32;
        let mut a = a.clone();
        while (&a % &p).is_zero() {
            a /= &p;
            v += 1;
        }
        Valuation::Exact(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Exact(u32),
    /// The residue vanished at working precision (v ≥ K).
    AtLeastPrecision,
}

impl Valuation {
    pub fn at_least(&self, k: u32) -> bool {
        match self {
            Valuation::Exact(v) => *v >= k,
            Valuation::AtLeastPrecision => true,
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// Default candidate primes: odd primes in [3, 200] ascending (2 is never
/// auto-selected; the mod-p² normalization wants odd p).
pub fn default_prime_candidates() -> Vec<u64> {
    primes_in(3, 200)
}

/// A point of ℙ¹ over ℤ/p^K in one of the two standard charts; the
/// infinity-chart coordinate is always ≡ 0 mod p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PadPoint {
    Affine(BigUint),
    InfChart(BigUint),
}

/// Full residue state (base chart point, fiber) mod p^K.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadState {
    pub base: PadPoint,
    pub fiber: Vec<BigUint>,
}

/// The system with all data reduced mod p^K, ready for exact modular
/// iteration.
pub struct ReducedSystem<'a> {
    ctx: &'a PadicContext,
    g_num: Vec<BigUint>,
    g_den: Vec<BigUint>,
    g_deg: usize,
    /// Per entry: numerator coefficients, denominator coefficients, and the
    /// homogenization degree max(deg num, deg den).
    entries: Vec<(Vec<BigUint>, Vec<BigUint>, usize)>,
    dim: usize,
}

impl<'a> ReducedSystem<'a> {
    pub fn new(sys: &SkewSystem, ctx: &'a PadicContext) -> Result<Self> {
        let reduce_poly = |p: &Poly| -> Result<Vec<BigUint>> {
            p.coeffs()
                .iter()
                .map(|c| ctx.reduce_rat(c))
                .collect::<Result<Vec<_>>>()
        };
        let (num_int, den_int) = sys.base().int_pair();
        let g_num = num_int.iter().map(|c| ctx.reduce_int(c)).collect();
        let g_den = den_int.iter().map(|c| ctx.reduce_int(c)).collect();
        let mut entries = Vec::with_capacity(sys.dim() * sys.dim());
        for e in sys.matrix().entries() {
            let d = e.num().degree_or_zero().max(e.den().degree_or_zero());
            entries.push((reduce_poly(e.num())?, reduce_poly(e.den())?, d));
        }
        Ok(ReducedSystem {
            ctx,
            g_num,
            g_den,
            g_deg: sys.base().degree(),
            entries,
            dim: sys.dim(),
        })
    }

    pub fn reduce_base_point(&self, pt: &ProjPoint) -> PadPoint {
        let (a, b) = pt.coords();
        self.normalize(self.ctx.reduce_int(a), self.ctx.reduce_int(b))
            .expect("coprime coordinates cannot both vanish mod p")
    }

    pub fn reduce_point(&self, pt: &SkewPoint) -> Result<PadState> {
        let fiber = pt
            .fiber
            .iter()
            .map(|v| self.ctx.reduce_rat(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(PadState {
            base: self.reduce_base_point(&pt.base),
            fiber,
        })
    }

    fn normalize(&self, a: BigUint, b: BigUint) -> Option<PadPoint> {
        if let Some(inv) = self.ctx.inverse(&b) {
            return Some(PadPoint::Affine(a * inv % self.ctx.modulus()));
        }
        let inv = self.ctx.inverse(&a)?;
        Some(PadPoint::InfChart(b * inv % self.ctx.modulus()))
    }

    fn homog_coords(pt: &PadPoint) -> (BigUint, BigUint) {
        match pt {
            PadPoint::Affine(t) => (t.clone(), BigUint::one()),
            PadPoint::InfChart(w) => (BigUint::one(), w.clone()),
        }
    }

    fn eval_form(&self, coeffs: &[BigUint], a: &BigUint, b: &BigUint, d: usize) -> BigUint {
        let m = self.ctx.modulus();
        let mut b_pows = Vec::with_capacity(d + 1);
        let mut bp = BigUint::one();
        for _ in 0..=d {
            b_pows.push(bp.clone());
            bp = bp * b % m;
        }
        let mut acc = BigUint::zero();
        let mut a_pow = BigUint::one();
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = (acc + c * &a_pow % m * &b_pows[d - i]) % m;
            }
            if i < d {
                a_pow = a_pow * a % m;
            }
        }
        acc
    }

    /// One reduced base step; good reduction guarantees the image pair is
    /// normalizable without losing precision.
    pub fn base_step(&self, pt: &PadPoint) -> Result<PadPoint> {
        let (a, b) = Self::homog_coords(pt);
        let u = self.eval_form(&self.g_num, &a, &b, self.g_deg);
        let v = self.eval_form(&self.g_den, &a, &b, self.g_deg);
        self.normalize(u, v).ok_or(Error::InvalidInput(
            "base pair vanished jointly mod p; good reduction violated".into(),
        ))
    }

    /// A(base) mod p^K; an entry-denominator non-unit means the residue
    /// orbit has met the reduced singular locus.
    pub fn matrix_at(&self, pt: &PadPoint) -> Result<Vec<BigUint>> {
        let (a, b) = Self::homog_coords(pt);
        let m = self.ctx.modulus();
        let mut out = Vec::with_capacity(self.entries.len());
        for (num, den, d) in &self.entries {
            let u = self.eval_form(num, &a, &b, *d);
            let w = self.eval_form(den, &a, &b, *d);
            let inv = self.ctx.inverse(&w).ok_or(Error::InvalidInput(
                "entry denominator vanishes mod p on the residue orbit".into(),
            ))?;
            out.push(u * inv % m);
        }
        Ok(out)
    }

    pub fn step(&self, state: &PadState) -> Result<PadState> {
        let mat = self.matrix_at(&state.base)?;
        let m = self.ctx.modulus();
        let n = self.dim;
        let mut fiber = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = BigUint::zero();
            for j in 0..n {
                acc = (acc + &mat[i * n + j] * &state.fiber[j]) % m;
            }
            fiber.push(acc);
        }
        Ok(PadState {
            base: self.base_step(&state.base)?,
            fiber,
        })
    }

    pub fn iterate(&self, state: &PadState, n: usize) -> Result<PadState> {
        let mut cur = state.clone();
        for _ in 0..n {
            cur = self.step(&cur)?;
        }
        Ok(cur)
    }
}

/// Outcome of prime selection: the first good candidate, or per-prime
/// rejection reasons.
#[derive(Clone, Debug)]
pub enum PrimeSelection {
    Selected(u64),
    NoneFound(Vec<(u64, String)>),
}

pub const REASON_LOCUS: &str = "residue orbit meets singular locus";

/// Good-reduction prime selection: p divides no denominator of g, A, or the
/// start point; det A and the homogeneous resultant of g stay nonzero mod
/// p; and the residue base orbit never meets the reduced singular locus.
/// The residue orbit closes within p+1 steps, so a closure inside the
/// horizon certifies the locus condition for every n ≥ 0.
pub fn select_prime(
    sys: &SkewSystem,
    start: &SkewPoint,
    candidates: &[u64],
    horizon: usize,
) -> PrimeSelection {
    let mut reasons = Vec::new();
    for &p in candidates {
        match check_prime(sys, start, p, horizon) {
            Ok(()) => return PrimeSelection::Selected(p),
            Err(reason) => reasons.push((p, reason)),
        }
    }
    PrimeSelection::NoneFound(reasons)
}

fn check_prime(
    sys: &SkewSystem,
    start: &SkewPoint,
    p: u64,
    horizon: usize,
) -> std::result::Result<(), String> {
    if !is_prime(p) {
        return Err("not prime".into());
    }
    let pb = BigInt::from(p);
    let divides = |n: &BigInt| (n % &pb).is_zero();

    // (i) p divides no denominator in g, A, start
    let g = sys.base().func();
    let mut dens: Vec<&BigInt> = Vec::new();
    for c in g.num().coeffs().iter().chain(g.den().coeffs()) {
        dens.push(c.denom());
    }
    for e in sys.matrix().entries() {
        for c in e.num().coeffs().iter().chain(e.den().coeffs()) {
            dens.push(c.denom());
        }
    }
    for v in &start.fiber {
        dens.push(v.denom());
    }
    if dens.into_iter().any(divides) {
        return Err("prime divides a denominator of the input data".into());
    }

    // (ii) good reduction of the base map: resultant nonzero mod p
    if divides(&sys.base().resultant_int()) {
        return Err("resultant of the base map vanishes mod p".into());
    }

    // (iii) det A not identically zero mod p
    let det = sys.matrix().det().expect("square");
    if det.is_zero() {
        return Err("det A is identically zero".into());
    }
    if det
        .num()
        .coeffs()
        .iter()
        .chain(det.den().coeffs())
        .any(|c| divides(c.denom()))
    {
        return Err("prime divides a denominator of det A".into());
    }
    let det_num_int = det.num().to_int_primitive();
    if det_num_int.iter().all(divides) {
        return Err("det A vanishes identically mod p".into());
    }

    // (iv)+(v) residue base orbit avoids the reduced singular locus
    let locus = sys.singular_locus();
    let det_red = reduce_poly_mod_p(&det_num_int, p);
    let mut pole_poly = Poly::one();
    for e in sys.matrix().entries() {
        pole_poly = pole_poly.lcm(e.den());
    }
    if pole_poly.coeffs().iter().any(|c| divides(c.denom())) {
        return Err("prime divides a denominator of the pole locus".into());
    }
    let pole_red = reduce_poly_mod_p(&pole_poly.to_int_primitive(), p);

    let infinity_ok = infinity_safe_mod_p(sys, &locus, p);
    let mut t = {
        let (a, b) = start.base.coords();
        let ar = ((a % &pb + &pb) % &pb).to_u64().unwrap();
        let br = ((b % &pb + &pb) % &pb).to_u64().unwrap();
        if br != 0 {
            Some(ar * mod_inv_u64(br, p).unwrap() % p)
        } else {
            None // infinity
        }
    };
    let mut seen = vec![false; p as usize + 1];
    for _ in 0..=horizon {
        let idx = t.map_or(p as usize, |v| v as usize);
        if seen[idx] {
            return Ok(()); // orbit closed: every n >= 0 checked
        }
        seen[idx] = true;
        match t {
            Some(v) => {
                if eval_mod_p(&det_red, v, p) == 0 || eval_mod_p(&pole_red, v, p) == 0 {
                    return Err(REASON_LOCUS.into());
                }
            }
            None => {
                if !infinity_ok {
                    return Err(REASON_LOCUS.into());
                }
            }
        }
        t = base_step_mod_p(sys, t, p);
    }
    Ok(()) // horizon exhausted without a hit
}

/// Safe to pass through the residue point at infinity: the locus does not
/// contain infinity over ℚ, and reduction does not degenerate any entry or
/// the determinant there.
fn infinity_safe_mod_p(sys: &SkewSystem, locus: &crate::skew::SingularLocus, p: u64) -> bool {
    if locus.includes_infinity {
        return false;
    }
    let pb = BigInt::from(p);
    for e in sys.matrix().entries() {
        let (dn, dd) = (e.num().degree_or_zero(), e.den().degree_or_zero());
        if dn == dd && !e.num().is_zero() {
            let lc_ints = e.num().to_int_primitive();
            if (lc_ints.last().unwrap() % &pb).is_zero() {
                return false;
            }
        }
    }
    let det = sys.matrix().det().expect("square");
    match det.value_at_infinity() {
        Some(v) => {
            !v.is_zero() && !(v.numer() % &pb).is_zero() && !(v.denom() % &pb).is_zero()
        }
        None => false,
    }
}

fn reduce_poly_mod_p(ints: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    ints.iter()
        .map(|c| ((c % &pb + &pb) % &pb).to_u64().unwrap())
        .collect()
}

fn eval_mod_p(coeffs: &[u64], x: u64, p: u64) -> u64 {
    let mut acc: u64 = 0;
    for &c in coeffs.iter().rev() {
        acc = (acc * x + c) % p;
    }
    acc
}

fn mod_inv_u64(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    Some(result)
}

/// One step of the reduced base map on ℙ¹(F_p); None encodes infinity.
fn base_step_mod_p(sys: &SkewSystem, t: Option<u64>, p: u64) -> Option<u64> {
    let (num, den) = sys.base().int_pair();
    let d = sys.base().degree();
    let (a, b) = match t {
        Some(v) => (v, 1u64),
        None => (1u64, 0u64),
    };
    let nr = reduce_poly_mod_p(num, p);
    let dr = reduce_poly_mod_p(den, p);
    let eval_h = |coeffs: &[u64]| -> u64 {
        let mut acc = 0u64;
        let mut a_pow = 1u64;
        let mut b_pows = vec![1u64; d + 1];
        for i in 1..=d {
            b_pows[i] = b_pows[i - 1] * b % p;
        }
        for (i, &c) in coeffs.iter().enumerate() {
            acc = (acc + c * a_pow % p * b_pows[d - i]) % p;
            if i < d {
                a_pow = a_pow * a % p;
            }
        }
        acc
    };
    let u = eval_h(&nr);
    let v = eval_h(&dr);
    if v != 0 {
        Some(u * mod_inv_u64(v, p).unwrap() % p)
    } else {
        debug_assert!(u != 0, "good reduction excludes joint vanishing");
        None
    }
}

/// Exact preperiod/period of the full residue state (base and fiber) under
/// the mod-p reduced map.
#[derive(Clone, Debug)]
pub struct ResidueOrbit {
    pub preperiod: usize,
    pub period: usize,
    pub cycle: Vec<PadState>,
    /// preperiod + period of the base projection alone (≤ p + 1).
    pub base_preperiod_plus_period: usize,
}

pub const RESIDUE_STEP_CAP: usize = 1_000_000;

pub fn residue_orbit(
    sys: &SkewSystem,
    ctx: &PadicContext,
    start: &SkewPoint,
) -> Result<ResidueOrbit> {
    let field_ctx = PadicContext::new(ctx.prime(), 4)?;
    let reduced = ReducedSystem::new(sys, &field_ctx)?;
    // states live in the residue field: re-reduce mod p after each step
    let p = BigUint::from(ctx.prime());
    let to_field = |s: &PadState| -> PadState {
        let base = match &s.base {
            PadPoint::Affine(t) => PadPoint::Affine(t % &p),
            PadPoint::InfChart(w) => PadPoint::InfChart(w % &p),
        };
        PadState {
            base,
            fiber: s.fiber.iter().map(|v| v % &p).collect(),
        }
    };
    let mut seen: HashMap<PadState, usize> = HashMap::new();
    let mut trace: Vec<PadState> = Vec::new();
    let mut cur = to_field(&reduced.reduce_point(start)?);
    for step in 0..RESIDUE_STEP_CAP {
        if let Some(&first) = seen.get(&cur) {
            let period = step - first;
            let cycle = trace[first..].to_vec();
            let base_pp = base_projection_rho(&trace, first, period);
            return Ok(ResidueOrbit {
                preperiod: first,
                period,
                cycle,
                base_preperiod_plus_period: base_pp,
            });
        }
        seen.insert(cur.clone(), step);
        trace.push(cur.clone());
        cur = to_field(&reduced.step(&cur)?);
    }
    Err(Error::ResidueStepCap(RESIDUE_STEP_CAP))
}

/// preperiod + period of the base coordinate sequence alone.
fn base_projection_rho(trace: &[PadState], preperiod: usize, period: usize) -> usize {
    let bases: Vec<&PadPoint> = trace.iter().map(|s| &s.base).collect();
    // smallest base period dividing the full period
    let mut bp = period;
    for cand in 1..=period {
        if period % cand == 0
            && (0..period).all(|i| bases[preperiod + i] == bases[preperiod + (i + cand) % period])
        {
            bp = cand;
            break;
        }
    }
    // extend periodicity backwards into the preperiod
    let mut m = preperiod;
    while m > 0 && bases[m - 1] == bases[m - 1 + bp] {
        m -= 1;
    }
    m + bp
}

/// The attuned iterate: `preperiod` lands on the residue cycle, `step` is
/// the smallest multiple of the residue period whose iterate fixes the
/// residue polydisc and is ≡ identity mod p² on a 3^dim sample grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Attuned {
    pub preperiod: usize,
    pub step: usize,
}

#[derive(Clone, Debug)]
pub enum AttunedOutcome {
    Found(Attuned),
    NotFound { tried: usize, reason: String },
}

pub const DEFAULT_ATTUNED_CAP: usize = 4096;

pub fn attuned_iterate(
    sys: &SkewSystem,
    ctx: &PadicContext,
    start: &SkewPoint,
    candidate_cap: usize,
) -> Result<AttunedOutcome> {
    let orbit = residue_orbit(sys, ctx, start)?;
    let m = orbit.preperiod;
    let reduced = ReducedSystem::new(sys, ctx)?;
    let center = reduced.iterate(&reduced.reduce_point(start)?, m)?;
    let grid = polydisc_grid(&center, ctx);
    let mut tried = 0;
    for j in 1..=candidate_cap {
        let l = j * orbit.period;
        tried = j;
        let mut ok = true;
        for w in &grid {
            let image = reduced.iterate(w, l)?;
            if !congruent_mod_p2(w, &image, ctx) {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(AttunedOutcome::Found(Attuned {
                preperiod: m,
                step: l,
            }));
        }
    }
    Ok(AttunedOutcome::NotFound {
        tried,
        reason: format!(
            "no multiple of the residue period up to {} is identity mod p^2 on the polydisc grid",
            tried * orbit.period
        ),
    })
}

/// Independent re-verification of an attuned iterate at full precision K:
/// v_p(f^ℓ(w) − w) ≥ 2 for every grid sample of the polydisc at the
/// preperiod.
pub fn verify_attuned(
    sys: &SkewSystem,
    ctx: &PadicContext,
    start: &SkewPoint,
    attuned: Attuned,
) -> Result<bool> {
    let reduced = ReducedSystem::new(sys, ctx)?;
    let center = reduced.iterate(&reduced.reduce_point(start)?, attuned.preperiod)?;
    for w in polydisc_grid(&center, ctx) {
        let image = reduced.iterate(&w, attuned.step)?;
        if !congruent_mod_p2(&w, &image, ctx) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// 3^(1+N) sample grid of the residue polydisc around a center state:
/// center + p·δ in every coordinate, δ ∈ {0, 1, 2}.
fn polydisc_grid(center: &PadState, ctx: &PadicContext) -> Vec<PadState> {
    let dim = 1 + center.fiber.len();
    let p = BigUint::from(ctx.prime());
    let m = ctx.modulus();
    let mut grid = Vec::with_capacity(3usize.pow(dim as u32));
    let mut deltas = vec![0u8; dim];
    loop {
        let shift = |v: &BigUint, d: u8| (v + &p * BigUint::from(d)) % m;
        let base = match &center.base {
            PadPoint::Affine(t) => PadPoint::Affine(shift(t, deltas[0])),
            PadPoint::InfChart(w) => PadPoint::InfChart(shift(w, deltas[0])),
        };
        let fiber = center
            .fiber
            .iter()
            .zip(&deltas[1..])
            .map(|(v, &d)| shift(v, d))
            .collect();
        grid.push(PadState { base, fiber });
        let mut i = 0;
        loop {
            if i == dim {
                return grid;
            }
            deltas[i] += 1;
            if deltas[i] < 3 {
                break;
            }
            deltas[i] = 0;
            i += 1;
        }
    }
}

fn congruent_mod_p2(a: &PadState, b: &PadState, ctx: &PadicContext) -> bool {
    let p2 = BigUint::from(ctx.prime()).pow(2);
    let same = |x: &BigUint, y: &BigUint| (x % &p2) == (y % &p2);
    let base_ok = match (&a.base, &b.base) {
        (PadPoint::Affine(x), PadPoint::Affine(y)) => same(x, y),
        (PadPoint::InfChart(x), PadPoint::InfChart(y)) => same(x, y),
        _ => false,
    };
    base_ok && a.fiber.iter().zip(&b.fiber).all(|(x, y)| same(x, y))
}

/// Valuations of finite differences of the fiber coordinate sequences
/// s(j) = coordinate of f^(c+jℓ)(start), reduced mod p^K.
#[derive(Clone, Debug)]
pub struct MahlerReport {
    pub class_offset: usize,
    pub class_step: usize,
    pub k_max: usize,
    /// Per fiber coordinate, per k: v_p(Δᵏ s(0)).
    pub valuations: Vec<Vec<Valuation>>,
    /// Δᵏ s(0) residues per coordinate (k = 0..k_max), for composition.
    pub differences: Vec<Vec<BigUint>>,
    /// Some claimed valuation touched working precision.
    pub precision_exhausted: bool,
}

pub fn mahler_profile(
    sys: &SkewSystem,
    ctx: &PadicContext,
    start: &SkewPoint,
    class_offset: usize,
    class_step: usize,
    k_max: usize,
) -> Result<MahlerReport> {
    if class_step == 0 {
        return Err(Error::InvalidInput("class step must be >= 1".into()));
    }
    let reduced = ReducedSystem::new(sys, ctx)?;
    let mut state = reduced.iterate(&reduced.reduce_point(start)?, class_offset)?;
    let n = sys.dim();
    let mut samples: Vec<Vec<BigUint>> = Vec::with_capacity(k_max + 1);
    samples.push(state.fiber.clone());
    for _ in 0..k_max {
        state = reduced.iterate(&state, class_step)?;
        samples.push(state.fiber.clone());
    }
    let m = ctx.modulus();
    let mut valuations = Vec::with_capacity(n);
    let mut differences = Vec::with_capacity(n);
    let mut precision_exhausted = false;
    for i in 0..n {
        let mut row: Vec<BigUint> = samples.iter().map(|s| s[i].clone()).collect();
        let mut diffs = Vec::with_capacity(k_max + 1);
        diffs.push(row[0].clone());
        for _ in 1..=k_max {
            for t in 0..row.len() - 1 {
                row[t] = (m + &row[t + 1] - &row[t]) % m;
            }
            row.pop();
            diffs.push(row[0].clone());
        }
        let vals: Vec<Valuation> = diffs.iter().map(|d| ctx.valuation(d)).collect();
        if vals
            .iter()
            .any(|v| matches!(v, Valuation::AtLeastPrecision))
        {
            precision_exhausted = true;
        }
        valuations.push(vals);
        differences.push(diffs);
    }
    Ok(MahlerReport {
        class_offset,
        class_step,
        k_max,
        valuations,
        differences,
        precision_exhausted,
    })
}

/// An affine-linear form c₀ + Σ cᵢ·yᵢ on the fiber, over ℚ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub constant: Rat,
    pub coeffs: Vec<Rat>,
}

impl LinearForm {
    /// The coordinate form y_j (1-based).
    pub fn coordinate(j: usize, dim: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); dim];
        coeffs[j - 1] = Rat::one();
        LinearForm {
            constant: Rat::zero(),
            coeffs,
        }
    }

    pub fn eval(&self, fiber: &[Rat]) -> Rat {
        let mut acc = self.constant.clone();
        for (c, v) in self.coeffs.iter().zip(fiber) {
            if !c.is_zero() {
                acc += c * v;
            }
        }
        acc
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrassmannVerdict {
    /// Every monomial coefficient vanishes mod p^(K − k_max).
    IdenticallyZeroAtPrecision,
    /// At most this many zeros in ℤ_p (largest index attaining the minimal
    /// coefficient valuation).
    MaxZeros(usize),
}

/// Converts the Mahler (binomial-basis) truncation of the composed scalar
/// series into the monomial basis via Stirling numbers of the first kind,
/// then applies the Strassmann bound at the reduced precision K − k_max.
pub fn strassmann_zero_bound(
    report: &MahlerReport,
    form: &LinearForm,
    ctx: &PadicContext,
) -> Result<StrassmannVerdict> {
    let k_max = report.k_max;
    if ctx.precision() as usize <= k_max {
        return Err(Error::InvalidInput(
            "precision must exceed k_max for the Stirling conversion".into(),
        ));
    }
    if form.coeffs.len() != report.differences.len() {
        return Err(Error::DimensionMismatch(
            "form arity != fiber dimension".into(),
        ));
    }
    let m = ctx.modulus();
    // compose: Δᵏ u(0) = c₀·[k=0] + Σ cᵢ Δᵏ sᵢ(0)
    let mut du: Vec<BigUint> = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut acc = if k == 0 {
            ctx.reduce_rat(&form.constant)?
        } else {
            BigUint::zero()
        };
        for (i, c) in form.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = (acc + ctx.reduce_rat(c)? * &report.differences[i][k]) % m;
            }
        }
        du.push(acc);
    }
    // analyticity precondition: v_p(Δᵏ u) ≥ k
    for (k, d) in du.iter().enumerate() {
        if !ctx.valuation(d).at_least(k as u32) {
            return Err(Error::AnalyticityFailed { k });
        }
    }

    // Stirling numbers of the first kind (signed): (z)_k = Σ s(k, m) z^m
    let mut stirling = vec![vec![BigInt::zero(); k_max + 1]; k_max + 1];
    stirling[0][0] = BigInt::one();
    for k in 0..k_max {
        for j in 0..=k {
            let term = stirling[k][j].clone();
            if !term.is_zero() {
                stirling[k + 1][j + 1] += &term;
                stirling[k + 1][j] -= BigInt::from(k) * &term;
            }
        }
    }

    // t_k = Δᵏu(0)/k! at the debited precision K − k_max
    let debit = k_max as u32;
    let reduced_precision = ctx.precision() - debit;
    let reduced_modulus = BigUint::from(ctx.prime()).pow(reduced_precision);
    let p_big = BigUint::from(ctx.prime());
    let mut t = Vec::with_capacity(k_max + 1);
    let mut factorial = BigUint::one();
    for (k, d) in du.iter().enumerate() {
        if k > 0 {
            factorial *= BigUint::from(k);
        }
        let mut e = 0u32;
        let mut unit = factorial.clone();
        while (&unit % &p_big).is_zero() {
            unit /= &p_big;
            e += 1;
        }
        // v_p(Δᵏu) ≥ k > e, so dividing the lift by p^e is exact
        debug_assert!((d % p_big.pow(e)).is_zero());
        let lifted = d / p_big.pow(e);
        let unit_inv = ctx.inverse(&(unit % m)).expect("unit part is invertible");
        t.push(lifted * unit_inv % &reduced_modulus);
    }

    // a_m = Σ_k t_k·s(k, m) mod p^(K − k_max)
    let rm_int = BigInt::from(reduced_modulus.clone());
    let mut coeffs = Vec::with_capacity(k_max + 1);
    for mm in 0..=k_max {
        let mut acc = BigInt::zero();
        for k in mm..=k_max {
            acc += BigInt::from(t[k].clone()) * &stirling[k][mm];
        }
        let r = ((acc % &rm_int) + &rm_int) % &rm_int;
        coeffs.push(r.to_biguint().unwrap());
    }

    if coeffs.iter().all(|c| c.is_zero()) {
        return Ok(StrassmannVerdict::IdenticallyZeroAtPrecision);
    }
    // Strassmann: largest index attaining the minimal valuation
    let vals: Vec<u32> = coeffs
        .iter()
        .map(|c| {
            if c.is_zero() {
                reduced_precision
            } else {
                let mut v = 0u32;
                let mut a = c.clone();
                while (&a % &p_big).is_zero() {
                    a /= &p_big;
                    v += 1;
                }
                v.min(reduced_precision)
            }
        })
        .collect();
    let min_v = *vals.iter().min().unwrap();
    let t_idx = vals.iter().rposition(|&v| v == min_v).unwrap();
    Ok(StrassmannVerdict::MaxZeros(t_idx))
}

/// Verdict for one attuned residue class.
#[derive(Clone, Debug)]
pub enum ClassVerdict {
    /// The composed series vanishes at working precision and every class
    /// index in the window is an exact zero.
    AllZerosAtPrecision { observed: Vec<usize> },
    FinitelyMany { bound: usize, observed: Vec<usize> },
    Unclassified { reason: String },
}

#[derive(Clone, Debug)]
pub struct ClassReport {
    pub offset: usize,
    pub verdict: ClassVerdict,
}

/// Full pipeline report: start shift and chosen prime (or rejections),
/// attuned data, exact zeros in the prefix before the first classified
/// index, and one verdict per residue class (absolute offsets).
#[derive(Clone, Debug)]
pub struct DmlReport {
    pub prime: Option<u64>,
    /// Rejection reasons for the unshifted start point.
    pub rejections: Vec<(u64, String)>,
    /// How many initial steps were skipped before good reduction holds
    /// (the orbit may cross the singular locus in a finite prefix).
    pub shift: usize,
    pub attuned: Option<Attuned>,
    pub prefix_zeros: Vec<usize>,
    pub classes: Vec<ClassReport>,
}

/// Options for the classifier pipeline.
#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub candidates: Vec<u64>,
    pub horizon: usize,
    pub precision: u32,
    pub k_max: usize,
    pub attuned_cap: usize,
    pub n_max: usize,
    pub height_cap: num_bigint::BigInt,
    /// Maximum number of initial steps to skip while searching for good
    /// reduction.
    pub shift_cap: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            candidates: default_prime_candidates(),
            horizon: 500,
            precision: DEFAULT_PRECISION,
            k_max: DEFAULT_KMAX,
            attuned_cap: DEFAULT_ATTUNED_CAP,
            n_max: 5000,
            height_cap: crate::projective::default_height_cap(),
            shift_cap: 8,
        }
    }
}

/// Exact zero indices of n ↦ form(fiber of fⁿ(start)) on [0, n_max].
///
/// Fails loudly (`HeightLimitExceeded`) when base heights grow past the cap
/// while values are still needed; constant matrices skip the base entirely,
/// and an all-zero fiber with a certified escape settles the tail.
pub fn exact_form_zero_indices(
    sys: &SkewSystem,
    start: &SkewPoint,
    form: &LinearForm,
    n_max: usize,
    height_cap: &num_bigint::BigInt,
) -> Result<Vec<usize>> {
    if form.is_constant() {
        return Ok(if form.constant.is_zero() {
            (0..=n_max).collect()
        } else {
            vec![]
        });
    }
    let mut zeros = Vec::new();
    let constant_matrix = sys.matrix().entries().all(|e| e.as_constant().is_some());
    if constant_matrix {
        let mat = sys
            .matrix()
            .eval_affine(&Rat::zero())
            .expect("constant matrix evaluates anywhere");
        let mut fiber = start.fiber.clone();
        for n in 0..=n_max {
            if form.eval(&fiber).is_zero() {
                zeros.push(n);
            }
            if n < n_max {
                fiber = mat.mul_vec(&fiber);
            }
        }
        return Ok(zeros);
    }
    let locus = sys.singular_locus();
    let mut cur = start.clone();
    for n in 0..=n_max {
        if form.eval(&cur.fiber).is_zero() {
            zeros.push(n);
        }
        if n == n_max {
            break;
        }
        if cur.fiber.iter().all(|v| v.is_zero())
            && sys.base().orbit_escapes(&cur.base, &locus.height_bound())
        {
            // zero fiber persists; the form value is the constant term
            if form.constant.is_zero() {
                zeros.extend(n + 1..=n_max);
            }
            return Ok(zeros);
        }
        if cur.base.weil_height() > *height_cap {
            return Err(Error::HeightLimitExceeded { step: n });
        }
        cur = sys.iterate(&cur, 1)?;
    }
    Ok(zeros)
}

/// The finite-or-everything classifier: per attuned residue class, either
/// the composed series is identically zero at working precision (checked
/// exactly on the window) or a Strassmann bound caps the number of zeros.
pub fn dml_classify(
    sys: &SkewSystem,
    start: &SkewPoint,
    form: &LinearForm,
    opts: &ClassifyOptions,
) -> Result<DmlReport> {
    // The orbit may cross the singular locus in a finite prefix; search
    // small start shifts jointly with candidate primes.
    let mut rejections_unshifted = Vec::new();
    let mut chosen: Option<(usize, u64, SkewPoint)> = None;
    let mut shifted = start.clone();
    for r in 0..=opts.shift_cap {
        if r > 0 {
            match sys.iterate(&shifted, 1) {
                Ok(next) => shifted = next,
                Err(_) => break, // indeterminacy: no further shifts exist
            }
        }
        match select_prime(sys, &shifted, &opts.candidates, opts.horizon) {
            PrimeSelection::Selected(p) => {
                chosen = Some((r, p, shifted.clone()));
                break;
            }
            PrimeSelection::NoneFound(rej) => {
                if r == 0 {
                    rejections_unshifted = rej;
                }
            }
        }
    }
    let Some((shift, p, start_shifted)) = chosen else {
        return Ok(DmlReport {
            prime: None,
            rejections: rejections_unshifted,
            shift: 0,
            attuned: None,
            prefix_zeros: vec![],
            classes: vec![],
        });
    };
    let ctx = PadicContext::new(p, opts.precision)?;
    let attuned = match attuned_iterate(sys, &ctx, &start_shifted, opts.attuned_cap)? {
        AttunedOutcome::Found(a) => a,
        AttunedOutcome::NotFound { reason, .. } => {
            return Ok(DmlReport {
                prime: Some(p),
                rejections: vec![],
                shift,
                attuned: None,
                prefix_zeros: vec![],
                classes: vec![ClassReport {
                    offset: 0,
                    verdict: ClassVerdict::Unclassified {
                        reason: format!("attuned iterate not found: {reason}"),
                    },
                }],
            })
        }
    };
    let (m, l) = (attuned.preperiod, attuned.step);
    // first classified absolute index
    let m_abs = shift + m;

    let exact = exact_form_zero_indices(sys, start, form, opts.n_max, &opts.height_cap);
    let (prefix_zeros, observed_by_class): (Vec<usize>, Option<Vec<Vec<usize>>>) = match &exact {
        Ok(zeros) => {
            let prefix = zeros.iter().copied().filter(|&z| z < m_abs).collect();
            let mut by_class = vec![Vec::new(); l];
            for &z in zeros.iter().filter(|&&z| z >= m_abs) {
                by_class[(z - m_abs) % l].push(z);
            }
            (prefix, Some(by_class))
        }
        Err(_) => (vec![], None),
    };

    let mut classes = Vec::with_capacity(l);
    for r in 0..l {
        let offset = m_abs + r;
        let verdict = (|| -> Result<ClassVerdict> {
            let report = mahler_profile(sys, &ctx, &start_shifted, m + r, l, opts.k_max)?;
            let strat = strassmann_zero_bound(&report, form, &ctx)?;
            let observed = match &observed_by_class {
                Some(by_class) => by_class[r].clone(),
                None => {
                    return Ok(ClassVerdict::Unclassified {
                        reason: format!(
                            "exact window evaluation infeasible: {}",
                            exact.as_ref().err().map(|e| e.to_string()).unwrap_or_default()
                        ),
                    })
                }
            };
            match strat {
                StrassmannVerdict::IdenticallyZeroAtPrecision => {
                    // cross-check: every class index must be an exact zero
                    let class_size = if opts.n_max >= offset {
                        (opts.n_max - offset) / l + 1
                    } else {
                        0
                    };
                    if observed.len() == class_size {
                        Ok(ClassVerdict::AllZerosAtPrecision { observed })
                    } else {
                        Ok(ClassVerdict::Unclassified {
                            reason: "precision-level vanishing contradicted by an exact nonzero"
                                .into(),
                        })
                    }
                }
                StrassmannVerdict::MaxZeros(bound) => {
                    if observed.len() > bound {
                        return Ok(ClassVerdict::Unclassified {
                            reason: format!(
                                "observed {} exact zeros exceed the Strassmann bound {}",
                                observed.len(),
                                bound
                            ),
                        });
                    }
                    Ok(ClassVerdict::FinitelyMany { bound, observed })
                }
            }
        })();
        let verdict = verdict.unwrap_or_else(|e| ClassVerdict::Unclassified {
            reason: e.to_string(),
        });
        classes.push(ClassReport { offset, verdict });
    }
    Ok(DmlReport {
        prime: Some(p),
        rejections: vec![],
        shift,
        attuned: Some(attuned),
        prefix_zeros,
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_i, Mat};
    use crate::projective::BaseMap;

    fn rf(num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_i64(num), Poly::from_i64(den)).unwrap()
    }

    fn c(n: i64) -> RatFunc {
        RatFunc::constant(rat_i(n))
    }

    fn sys(g: RatFunc, rows: Vec<Vec<RatFunc>>) -> SkewSystem {
        SkewSystem::new(BaseMap::new(g).unwrap(), Mat::from_rows(rows).unwrap()).unwrap()
    }

    fn x_squared() -> RatFunc {
        rf(&[0, 0, 1], &[1])
    }

    #[test]
    fn context_basics() {
        assert!(PadicContext::new(6, 10).is_err());
        assert!(PadicContext::new(3, 2).is_err());
        let ctx = PadicContext::new(3, 5).unwrap();
        assert_eq!(*ctx.modulus(), BigUint::from(243u32));
        assert_eq!(
            ctx.reduce_rat(&rat(1, 2)).unwrap(),
            BigUint::from(122u32)
        );
        assert!(ctx.reduce_rat(&rat(1, 3)).is_err());
        assert_eq!(ctx.valuation(&BigUint::from(18u32)), Valuation::Exact(2));
        assert_eq!(ctx.valuation(&BigUint::zero()), Valuation::AtLeastPrecision);
    }

    #[test]
    fn select_prime_examples() {
        // A = [[x, 1], [0, 1]], g = x^2, start (2, (1,1)): 3 works, 2 fails
        let s = sys(x_squared(), vec![vec![RatFunc::x(), c(1)], vec![c(0), c(1)]]);
        let start = SkewPoint::new(ProjPoint::from_int(2), vec![rat_i(1), rat_i(1)]);
        match select_prime(&s, &start, &[3], 500) {
            PrimeSelection::Selected(3) => {}
            other => panic!("expected 3, got {other:?}"),
        }
        match select_prime(&s, &start, &[2], 500) {
            PrimeSelection::NoneFound(reasons) => {
                assert_eq!(reasons.len(), 1);
                assert_eq!(reasons[0].1, REASON_LOCUS);
            }
            other => panic!("expected rejection, got {other:?}"),
        }
        // constant invertible matrix: an odd prime away from the data works
        let s = sys(x_squared(), vec![vec![c(1), c(1)], vec![c(0), c(1)]]);
        let start = SkewPoint::new(ProjPoint::from_int(2), vec![rat_i(1), rat_i(1)]);
        match select_prime(&s, &start, &[5], 500) {
            PrimeSelection::Selected(5) => {}
            other => panic!("expected 5, got {other:?}"),
        }
    }

    #[test]
    fn remark_negative_fixture() {
        // f = (x+1, x·y), start (0, 0): every prime is rejected because the
        // residue orbit sweeps all residues including the det root 0
        let s = sys(rf(&[1, 1], &[1]), vec![vec![RatFunc::x()]]);
        let start = SkewPoint::new(ProjPoint::from_int(0), vec![rat_i(0)]);
        match select_prime(&s, &start, &primes_in(2, 100), 500) {
            PrimeSelection::NoneFound(reasons) => {
                assert!(!reasons.is_empty());
                for (_, reason) in reasons {
                    assert_eq!(reason, REASON_LOCUS);
                }
            }
            other => panic!("expected NoneFound, got {other:?}"),
        }
    }

    #[test]
    fn residue_orbit_examples() {
        let ctx = PadicContext::new(3, 6).unwrap();
        // g = x^2 from 2 mod 3: base 2 -> 1 -> 1
        let s = sys(x_squared(), vec![vec![RatFunc::x()]]);
        let start = SkewPoint::new(ProjPoint::from_int(2), vec![rat_i(1)]);
        let ro = residue_orbit(&s, &ctx, &start).unwrap();
        // states: (2,1) -> (1,2) -> (1,2): preperiod 1, period 1
        assert_eq!((ro.preperiod, ro.period), (1, 1));
        assert!(ro.base_preperiod_plus_period <= 3 + 1);
        // fixed residue point
        let s2 = sys(x_squared(), vec![vec![c(1)]]);
        let start2 = SkewPoint::new(ProjPoint::from_int(1), vec![rat_i(1)]);
        let ro2 = residue_orbit(&s2, &ctx, &start2).unwrap();
        assert_eq!((ro2.preperiod, ro2.period), (0, 1));
    }

    #[test]
    fn reduction_commutes_with_exact_iteration() {
        let ctx = PadicContext::new(5, 8).unwrap();
        let s = sys(
            x_squared(),
            vec![vec![RatFunc::x(), c(1)], vec![c(0), c(1)]],
        );
        let start = SkewPoint::new(ProjPoint::from_int(2), vec![rat_i(1), rat_i(1)]);
        let reduced = ReducedSystem::new(&s, &ctx).unwrap();
        let mut modular = reduced.reduce_point(&start).unwrap();
        for n in 1..=8 {
            modular = reduced.step(&modular).unwrap();
            let exact = s.iterate(&start, n).unwrap();
            assert_eq!(modular, reduced.reduce_point(&exact).unwrap(), "step {n}");
        }
    }

    #[test]
    fn attuned_translation_example() {
        // y -> y + 3 realized as [[1, 3], [0, 1]] on (y, 1), base fixed:
        // the three-fold composite is y + 9 ≡ y mod 9
        let ctx = PadicContext::new(3, 8).unwrap();
        let s = sys(
            rf(&[0, 1], &[1]),
            vec![vec![c(1), c(3)], vec![c(0), c(1)]],
        );
        let start = SkewPoint::new(ProjPoint::from_int(0), vec![rat_i(0), rat_i(1)]);
        match attuned_iterate(&s, &ctx, &start, 64).unwrap() {
            AttunedOutcome::Found(a) => {
                assert_eq!(a.preperiod, 0);
                assert_eq!(a.step, 3);
                assert!(verify_attuned(&s, &ctx, &start, a).unwrap());
            }
            other => panic!("expected attuned iterate, got {other:?}"),
        }
    }

    #[test]
    fn attuned_identity_example() {
        let ctx = PadicContext::new(3, 6).unwrap();
        let s = sys(rf(&[0, 1], &[1]), vec![vec![c(1)]]);
        let start = SkewPoint::new(ProjPoint::from_int(0), vec![rat_i(1)]);
        match attuned_iterate(&s, &ctx, &start, 8).unwrap() {
            AttunedOutcome::Found(a) => assert_eq!((a.preperiod, a.step), (0, 1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn attuned_squaring_fixture() {
        // f = (x^2, x·y), p = 3, start (2, 1): verified mod 9 independently
        let ctx = PadicContext::new(3, DEFAULT_PRECISION).unwrap();
        let s = sys(x_squared(), vec![vec![RatFunc::x()]]);
        let start = SkewPoint::new(ProjPoint::from_int(2), vec![rat_i(1)]);
        match attuned_iterate(&s, &ctx, &start, 256).unwrap() {
            AttunedOutcome::Found(a) => {
                assert!(a.step >= 1);
                assert!(verify_attuned(&s, &ctx, &start, a).unwrap());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mahler_geometric_example() {
        // s(j) = (1+p)^j: v_p(Δᵏ s(0)) = k exactly
        let ctx = PadicContext::new(3, 12).unwrap();
        let s = sys(rf(&[0, 1], &[1]), vec![vec![c(4)]]);
        let start = SkewPoint::new(ProjPoint::from_int(0), vec![rat_i(1)]);
        let report = mahler_profile(&s, &ctx, &start, 0, 1, 8).unwrap();
        for (k, v) in report.valuations[0].iter().enumerate() {
            assert_eq!(*v, Valuation::Exact(k as u32), "k = {k}");
        }
        // constant sequence: Δᵏ = 0 for k ≥ 1
        let s2 = sys(rf(&[0, 1], &[1]), vec![vec![c(1)]]);
        let report2 = mahler_profile(&s2, &ctx, &start, 0, 1, 5).unwrap();
        for v in &report2.valuations[0][1..] {
            assert_eq!(*v, Valuation::AtLeastPrecision);
        }
        assert!(report2.precision_exhausted);
    }

    #[test]
    fn strassmann_examples() {
        let ctx = PadicContext::new(3, 12).unwrap();
        let mk_report = |diffs: Vec<u64>| MahlerReport {
            class_offset: 0,
            class_step: 1,
            k_max: diffs.len() - 1,
            valuations: vec![diffs
                .iter()
                .map(|&d| ctx.valuation(&BigUint::from(d)))
                .collect()],
            differences: vec![diffs.into_iter().map(BigUint::from).collect()],
            precision_exhausted: false,
        };
        let y1 = LinearForm::coordinate(1, 1);
        // u = 3 + 9·C(z,1): monomial (3, 9): min valuation at index 0
        let report = mk_report(vec![3, 9, 0, 0]);
        assert_eq!(
            strassmann_zero_bound(&report, &y1, &ctx).unwrap(),
            StrassmannVerdict::MaxZeros(0)
        );
        // identically zero at precision
        let report = mk_report(vec![0, 0, 0]);
        assert_eq!(
            strassmann_zero_bound(&report, &y1, &ctx).unwrap(),
            StrassmannVerdict::IdenticallyZeroAtPrecision
        );
        // analyticity violation: v(Δ¹) = 0 < 1
        let report = mk_report(vec![3, 1, 0]);
        assert!(matches!(
            strassmann_zero_bound(&report, &y1, &ctx),
            Err(Error::AnalyticityFailed { k: 1 })
        ));
        // u = 3 + 3·C(z,1) = 3 + 3z: min valuation 1 attained last at 1
        let report = mk_report(vec![3, 3]);
        assert_eq!(
            strassmann_zero_bound(&report, &y1, &ctx).unwrap(),
            StrassmannVerdict::MaxZeros(1)
        );
    }

    #[test]
    fn classify_pole_fixture() {
        // companion of a_{n+1} = ((x-4)/x)(g^n(2))·a_n: the class covering
        // n ≥ 2 must come out AllZerosAtPrecision, cross-checked exactly
        let s = sys(x_squared(), vec![vec![rf(&[-4, 1], &[0, 1])]]);
        let start = SkewPoint::new(ProjPoint::from_int(2), vec![rat_i(1)]);
        let y1 = LinearForm::coordinate(1, 1);
        let opts = ClassifyOptions {
            n_max: 500,
            ..Default::default()
        };
        let report = dml_classify(&s, &start, &y1, &opts).unwrap();
        // the exact orbit crosses the locus at step 1 (h0(4) = 0), so the
        // classifier must shift the start before good reduction holds
        assert!(report.prime.is_some());
        assert_eq!(report.shift, 2);
        assert!(report.attuned.is_some());
        assert!(!report.classes.is_empty());
        // a0 = 1, a1 = -1: no zeros in the prefix
        assert!(report.prefix_zeros.is_empty());
        let mut found_all_zero = false;
        for class in &report.classes {
            match &class.verdict {
                ClassVerdict::AllZerosAtPrecision { observed } => {
                    found_all_zero = true;
                    assert!(observed.iter().all(|&n| n >= 2));
                }
                ClassVerdict::FinitelyMany { bound, observed } => {
                    assert!(observed.len() <= *bound);
                }
                ClassVerdict::Unclassified { reason } => {
                    panic!("unexpected unclassified class at {}: {reason}", class.offset)
                }
            }
        }
        assert!(found_all_zero);
    }

    #[test]
    fn classify_fibonacci_fixture() {
        // constant coefficients, no zeros: every class FinitelyMany with an
        // empty observed list
        let s = sys(x_squared(), vec![vec![c(0), c(1)], vec![c(1), c(1)]]);
        let start = SkewPoint::new(ProjPoint::from_int(2), vec![rat_i(1), rat_i(1)]);
        let y1 = LinearForm::coordinate(1, 2);
        let opts = ClassifyOptions {
            n_max: 2000,
            ..Default::default()
        };
        let report = dml_classify(&s, &start, &y1, &opts).unwrap();
        assert!(report.prime.is_some());
        assert!(report.prefix_zeros.is_empty());
        for class in &report.classes {
            match &class.verdict {
                ClassVerdict::FinitelyMany { bound, observed } => {
                    assert!(observed.is_empty());
                    assert!(observed.len() <= *bound);
                }
                other => panic!("expected FinitelyMany, got {other:?}"),
            }
        }
    }

    #[test]
    fn classify_constant_one_form() {
        // form ≡ 1 never vanishes: every class FinitelyMany with no zeros
        let s = sys(x_squared(), vec![vec![c(0), c(1)], vec![c(1), c(1)]]);
        let start = SkewPoint::new(ProjPoint::from_int(2), vec![rat_i(1), rat_i(1)]);
        let one = LinearForm {
            constant: rat_i(1),
            coeffs: vec![Rat::zero(), Rat::zero()],
        };
        let report = dml_classify(&s, &start, &one, &ClassifyOptions::default()).unwrap();
        for class in &report.classes {
            match &class.verdict {
                ClassVerdict::FinitelyMany { observed, .. } => assert!(observed.is_empty()),
                other => panic!("expected FinitelyMany, got {other:?}"),
            }
        }
    }
}
