//! Points of ℙ¹(ℚ), rational self-maps of the line, exact iteration,
//! multiplicative heights, fixed points, and a semi-decision of
//! preperiodicity.
//!
//! Coordinates are always kept normalized (coprime, second coordinate
//! nonnegative, infinity is [1 : 0]), so point equality is structural.

use crate::algebra::{Poly, Rat, RatFunc, RatMat};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;

/// A point [a : b] of ℙ¹(ℚ) in lowest terms, b ≥ 0, infinity = [1 : 0].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    a: BigInt,
    b: BigInt,
}

impl ProjPoint {
    pub fn new(a: BigInt, b: BigInt) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::InvalidInput("[0 : 0] is not a point of P^1".into()));
        }
        let g = a.gcd(&b);
        let (mut a, mut b) = (a / &g, b / &g);
        if b.is_negative() || (b.is_zero() && a.is_negative()) {
            a = -a;
            b = -b;
        }
        Ok(ProjPoint { a, b })
    }

    pub fn infinity() -> Self {
        ProjPoint {
            a: BigInt::one(),
            b: BigInt::zero(),
        }
    }

    pub fn from_rat(r: &Rat) -> Self {
        ProjPoint::new(r.numer().clone(), r.denom().clone()).unwrap()
    }

    pub fn from_int(n: i64) -> Self {
        ProjPoint {
            a: BigInt::from(n),
            b: BigInt::one(),
        }
    }

    pub fn is_infinity(&self) -> bool {
        self.b.is_zero()
    }

    /// Affine value a/b, None at infinity.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.is_infinity() {
            None
        } else {
            Some(Rat::new(self.a.clone(), self.b.clone()))
        }
    }

    pub fn coords(&self) -> (&BigInt, &BigInt) {
        (&self.a, &self.b)
    }

    /// Multiplicative Weil height max(|a|, |b|) on normalized coordinates.
    pub fn weil_height(&self) -> BigInt {
        let (n, d) = (self.a.abs(), self.b.abs());
        if n > d {
            n
        } else {
            d
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else if self.b.is_one() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}/{}", self.a, self.b)
        }
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProjPoint({self})")
    }
}

/// Homogeneous evaluation of a rational function on ℙ¹: poles go to
/// infinity, the value at infinity is decided by the degree comparison of
/// numerator and denominator.
pub fn ratfunc_eval(h: &RatFunc, pt: &ProjPoint) -> Result<ProjPoint> {
    let d = h.map_degree();
    let (a, b) = pt.coords();
    let num = h.num().eval_homog(a, b, d);
    let den = h.den().eval_homog(a, b, d);
    if num.is_zero() && den.is_zero() {
        // Unreachable for normalized inputs (coprime pair homogenized to a
        // common degree), kept for the evaluation contract.
        return Err(Error::IndeterminateValue);
    }
    let scale = Rat::from_integer(num.denom().lcm(den.denom()));
    ProjPoint::new((&num * &scale).to_integer(), (&den * &scale).to_integer())
}

/// Affine fixed points of a degree-1 map, or the identity flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedPoints {
    Identity,
    Points(Vec<ProjPoint>),
}

/// Outcome of the preperiodicity semi-decision. `Preperiodic` carries an
/// exactly witnessed repetition g^(m+n)(α) = g^m(α); `NotDetected` reports
/// how far the search went and must be treated as "assumed not preperiodic".
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PreperiodicityVerdict {
    Preperiodic { preperiod: usize, period: usize },
    NotDetected { max_height: BigInt, steps: usize },
}

pub const DEFAULT_STEP_CAP: usize = 2000;

pub fn default_height_cap() -> BigInt {
    BigInt::from(10u32).pow(100)
}

/// The self-map g of ℙ¹, with an integer model of its homogenization used
/// for exact projective evaluation and reduction mod p.
#[derive(Clone)]
pub struct BaseMap {
    h: RatFunc,
    degree: usize,
    /// Joint integer clearing of (num, den): same map, integer coefficients,
    /// joint content 1.
    num_int: Vec<BigInt>,
    den_int: Vec<BigInt>,
}

impl PartialEq for BaseMap {
    fn eq(&self, other: &Self) -> bool {
        self.h == other.h
    }
}
impl Eq for BaseMap {}

impl BaseMap {
    pub fn new(h: RatFunc) -> Result<Self> {
        let degree = h.map_degree();
        if degree == 0 {
            return Err(Error::InvalidInput("base map must be non-constant".into()));
        }
        let mut den_lcm = BigInt::one();
        for c in h.num().coeffs().iter().chain(h.den().coeffs()) {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let clear = |p: &Poly| -> Vec<BigInt> {
            p.coeffs()
                .iter()
                .map(|c| c.numer() * (&den_lcm / c.denom()))
                .collect()
        };
        let mut num_int = clear(h.num());
        let mut den_int = clear(h.den());
        let mut content = BigInt::zero();
        for v in num_int.iter().chain(den_int.iter()) {
            content = content.gcd(v);
        }
        if !content.is_one() && !content.is_zero() {
            for v in num_int.iter_mut().chain(den_int.iter_mut()) {
                *v /= &content;
            }
        }
        Ok(BaseMap {
            h,
            degree,
            num_int,
            den_int,
        })
    }

    pub fn from_polys(num: Poly, den: Poly) -> Result<Self> {
        BaseMap::new(RatFunc::new(num, den)?)
    }

    pub fn func(&self) -> &RatFunc {
        &self.h
    }

    /// The algebraic degree of g as a self-map of ℙ¹.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Integer coefficients of the cleared numerator/denominator pair
    /// (ascending; homogenize both to `degree()`).
    pub fn int_pair(&self) -> (&[BigInt], &[BigInt]) {
        (&self.num_int, &self.den_int)
    }

    fn eval_homog_int(coeffs: &[BigInt], a: &BigInt, b: &BigInt, d: usize) -> BigInt {
        let mut b_pows = Vec::with_capacity(d + 1);
        let mut bp = BigInt::one();
        for _ in 0..=d {
            b_pows.push(bp.clone());
            bp *= b;
        }
        let mut acc = BigInt::zero();
        let mut a_pow = BigInt::one();
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * &a_pow * &b_pows[d - i];
            }
            if i < d {
                a_pow *= a;
            }
        }
        acc
    }

    /// One exact step on ℙ¹. Total: the cleared pair has no common root,
    /// projectively or at infinity.
    pub fn apply(&self, pt: &ProjPoint) -> ProjPoint {
        let (a, b) = pt.coords();
        let p = Self::eval_homog_int(&self.num_int, a, b, self.degree);
        let q = Self::eval_homog_int(&self.den_int, a, b, self.degree);
        ProjPoint::new(p, q).expect("coprime pair cannot vanish jointly")
    }

    /// Exact n-th iterate; n = 0 returns the point unchanged.
    pub fn iterate(&self, pt: &ProjPoint, n: usize) -> ProjPoint {
        let mut cur = pt.clone();
        for _ in 0..n {
            cur = self.apply(&cur);
        }
        cur
    }

    /// Symbolic n-fold composition of g with itself.
    pub fn compose_self(&self, n: usize, degree_cap: usize) -> Result<RatFunc> {
        let mut acc = RatFunc::x();
        for _ in 0..n {
            acc = acc.compose(&self.h, degree_cap)?;
        }
        Ok(acc)
    }

    /// Homogeneous resultant of the cleared integer pair; nonzero exactly
    /// when g is a morphism of the stated degree.
    pub fn resultant_int(&self) -> BigInt {
        let d = self.degree;
        let pad = |v: &[BigInt]| -> Vec<Rat> {
            let mut out: Vec<Rat> = v.iter().map(|c| Rat::from_integer(c.clone())).collect();
            out.resize(d + 1, Rat::zero());
            out
        };
        let p = pad(&self.num_int);
        let q = pad(&self.den_int);
        // Sylvester matrix of the two degree-d forms, size 2d.
        let n = 2 * d;
        let mut rows = Vec::with_capacity(n);
        for i in 0..d {
            let mut row = vec![Rat::zero(); n];
            for (j, c) in p.iter().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        for i in 0..d {
            let mut row = vec![Rat::zero(); n];
            for (j, c) in q.iter().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
        let det = RatMat::from_rows(rows).unwrap().det_field().unwrap();
        debug_assert!(det.is_integer());
        det.to_integer()
    }

    /// The set I of affine fixed points when deg g = 1; the identity map is
    /// flagged. Only ℚ-rational fixed points exist in this model.
    pub fn fixed_points_linear(&self) -> Result<FixedPoints> {
        if self.degree > 1 {
            return Err(Error::DegreeTooHigh(self.degree));
        }
        // num(x) - x*den(x) = 0
        let fp = self.h.num() - &(&Poly::x() * self.h.den());
        if fp.is_zero() {
            return Ok(FixedPoints::Identity);
        }
        let roots = rational_roots_deg_le2(&fp);
        Ok(FixedPoints::Points(
            roots.iter().map(ProjPoint::from_rat).collect(),
        ))
    }

    /// Semi-decision of preperiodicity by exact cycle detection under
    /// height and step caps.
    pub fn detect_preperiodic(
        &self,
        start: &ProjPoint,
        height_cap: &BigInt,
        step_cap: usize,
    ) -> PreperiodicityVerdict {
        let mut seen: HashMap<ProjPoint, usize> = HashMap::new();
        let mut cur = start.clone();
        let mut max_height = cur.weil_height();
        for step in 0..=step_cap {
            if let Some(&first) = seen.get(&cur) {
                let verdict = PreperiodicityVerdict::Preperiodic {
                    preperiod: first,
                    period: step - first,
                };
                // The repetition is a certificate; re-verify it exactly.
                debug_assert_eq!(self.iterate(start, step), self.iterate(start, first));
                return verdict;
            }
            seen.insert(cur.clone(), step);
            cur = self.apply(&cur);
            let h = cur.weil_height();
            if h > max_height {
                max_height = h.clone();
            }
            if &h > height_cap {
                return PreperiodicityVerdict::NotDetected {
                    max_height,
                    steps: step + 1,
                };
            }
        }
        PreperiodicityVerdict::NotDetected {
            max_height,
            steps: step_cap,
        }
    }

    /// Order of g as a Möbius transformation when finite (degree 1 only);
    /// over ℚ the only possible finite orders are 1, 2, 3, 4, 6.
    pub fn mobius_order(&self) -> Option<usize> {
        if self.degree != 1 {
            return None;
        }
        let x = RatFunc::x();
        let mut acc = self.h.clone();
        for k in 1..=6 {
            if acc == x {
                return Some(k);
            }
            acc = acc.compose(&self.h, 64).ok()?;
        }
        None
    }

    /// Height threshold certifying orbit escape, for deg g ≥ 2: whenever a
    /// point has height ≥ the threshold, the heights of all forward iterates
    /// strictly increase (at least double) forever.
    ///
    /// Built from integer Bezout cofactors of the cleared pair in both
    /// affine charts: they give an explicit C with H(g(P)) ≥ H(P)^d / C.
    pub fn escape_threshold(&self) -> Option<BigInt> {
        let d = self.degree;
        if d < 2 {
            return None;
        }
        let rat_poly = |v: &[BigInt]| {
            Poly::from_coeffs(v.iter().map(|c| Rat::from_integer(c.clone())).collect())
        };
        let reversed = |v: &[BigInt]| {
            let mut w = v.to_vec();
            w.resize(d + 1, BigInt::zero());
            w.reverse();
            w
        };
        let cofactor_bound = |p: &Poly, q: &Poly| -> Option<(BigInt, BigInt)> {
            let (g, u, v) = p.extended_gcd(q);
            if !g.is_one() {
                return None;
            }
            let mut den_lcm = BigInt::one();
            for c in u.coeffs().iter().chain(v.coeffs()) {
                den_lcm = den_lcm.lcm(c.denom());
            }
            let mut l1 = BigInt::zero();
            for c in u.coeffs().iter().chain(v.coeffs()) {
                l1 += (c.numer() * (&den_lcm / c.denom())).abs();
            }
            // U*p + V*q = r with ||U||_1 + ||V||_1 = l1
            Some((den_lcm, l1))
        };
        let (r1, l1) = cofactor_bound(&rat_poly(&self.num_int), &rat_poly(&self.den_int))?;
        let (r2, l2) = cofactor_bound(
            &rat_poly(&reversed(&self.num_int)),
            &rat_poly(&reversed(&self.den_int)),
        )?;
        // max(|P*|,|Q*|) >= M^d / C0 with C0 = max(L1/r1, L2/r2); the
        // coordinate gcd divides r1*r2, so H(g(P)) >= M^d / C1 with
        // C1 = C0*r1*r2.
        let c0 = {
            let a = Rat::new(l1.clone(), r1.clone());
            let b = Rat::new(l2.clone(), r2.clone());
            if a > b {
                a
            } else {
                b
            }
        };
        let c1 = c0 * Rat::from_integer(&r1 * &r2);
        // smallest B >= 2 with B^(d-1) >= 2*C1
        let target = (Rat::from_integer(BigInt::from(2)) * c1).ceil().to_integer();
        let e = (d - 1) as u32;
        let mut b = target.nth_root(e);
        if b < BigInt::from(2) {
            b = BigInt::from(2);
        }
        while b.pow(e) < target {
            b += 1;
        }
        Some(b)
    }

    /// Certified escape: from `pt` on, every forward iterate has height
    /// strictly greater than `avoid_height` (and heights increase
    /// monotonically). Conservative: false means "not certified".
    pub fn orbit_escapes(&self, pt: &ProjPoint, avoid_height: &BigInt) -> bool {
        match self.escape_threshold() {
            None => false,
            Some(threshold) => {
                let h = pt.weil_height();
                h >= threshold && &h > avoid_height
            }
        }
    }
}

impl fmt::Debug for BaseMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BaseMap({})", self.h)
    }
}

/// ℚ-rational roots of a polynomial of degree ≤ 2 (all we ever solve
/// exactly; everything else is decided by evaluation).
fn rational_roots_deg_le2(p: &Poly) -> Vec<Rat> {
    match p.degree() {
        None | Some(0) => vec![],
        Some(1) => vec![-(p.coeff(0) / p.coeff(1))],
        Some(2) => {
            let ints = p.to_int_primitive();
            let (a, b, c) = (ints[2].clone(), ints[1].clone(), ints[0].clone());
            let disc = &b * &b - BigInt::from(4) * &a * &c;
            if disc.is_negative() {
                return vec![];
            }
            let s = disc.sqrt();
            if &s * &s != disc {
                return vec![];
            }
            let two_a = BigInt::from(2) * &a;
            let mut roots = vec![Rat::new(-&b + &s, two_a.clone())];
            if !s.is_zero() {
                roots.push(Rat::new(-&b - &s, two_a));
            }
            roots.sort();
            roots
        }
        Some(_) => unreachable!("only degree <= 2 is solved for roots"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn bm(num: &[i64], den: &[i64]) -> BaseMap {
        BaseMap::from_polys(Poly::from_i64(num), Poly::from_i64(den)).unwrap()
    }

    #[test]
    fn point_normalization() {
        let p = ProjPoint::new(BigInt::from(4), BigInt::from(-6)).unwrap();
        assert_eq!(p.coords(), (&BigInt::from(-2), &BigInt::from(3)));
        let inf = ProjPoint::new(BigInt::from(-3), BigInt::zero()).unwrap();
        assert_eq!(inf, ProjPoint::infinity());
        assert!(ProjPoint::new(BigInt::zero(), BigInt::zero()).is_err());
        assert_eq!(ProjPoint::from_int(2).weil_height(), BigInt::from(2));
        assert_eq!(
            ProjPoint::from_rat(&rat(3, 5)).weil_height(),
            BigInt::from(5)
        );
        assert_eq!(ProjPoint::infinity().weil_height(), BigInt::one());
    }

    #[test]
    fn projective_evaluation() {
        // (x^2+1)/x at 0 -> infinity
        let h = RatFunc::new(Poly::from_i64(&[1, 0, 1]), Poly::x()).unwrap();
        assert_eq!(
            ratfunc_eval(&h, &ProjPoint::from_int(0)).unwrap(),
            ProjPoint::infinity()
        );
        // x^2 at 3 -> 9
        let sq = RatFunc::from_poly(Poly::from_i64(&[0, 0, 1]));
        assert_eq!(
            ratfunc_eval(&sq, &ProjPoint::from_int(3)).unwrap(),
            ProjPoint::from_int(9)
        );
        // (x-4)/x at 4 -> 0
        let h2 = RatFunc::new(Poly::from_i64(&[-4, 1]), Poly::x()).unwrap();
        assert_eq!(
            ratfunc_eval(&h2, &ProjPoint::from_int(4)).unwrap(),
            ProjPoint::from_int(0)
        );
        // x^2 at infinity -> infinity; 1/x at infinity -> 0
        assert_eq!(
            ratfunc_eval(&sq, &ProjPoint::infinity()).unwrap(),
            ProjPoint::infinity()
        );
        let inv = RatFunc::new(Poly::one(), Poly::x()).unwrap();
        assert_eq!(
            ratfunc_eval(&inv, &ProjPoint::infinity()).unwrap(),
            ProjPoint::from_int(0)
        );
    }

    #[test]
    fn degrees() {
        assert_eq!(bm(&[0, 0, 1], &[1]).degree(), 2); // x^2
        assert_eq!(bm(&[1, 0, 1], &[0, 1]).degree(), 2); // (x^2+1)/x
        assert_eq!(bm(&[1, 1], &[1]).degree(), 1); // x+1
        assert!(!bm(&[1, 0, 1], &[0, 1]).resultant_int().is_zero());
    }

    #[test]
    fn iteration() {
        let g = bm(&[0, 0, 1], &[1]); // x^2
        assert_eq!(
            g.iterate(&ProjPoint::from_int(2), 3),
            ProjPoint::from_int(256)
        );
        assert_eq!(
            g.iterate(&ProjPoint::from_int(5), 0),
            ProjPoint::from_int(5)
        );
        let shift = bm(&[1, 1], &[1]);
        assert_eq!(
            shift.iterate(&ProjPoint::from_int(0), 5),
            ProjPoint::from_int(5)
        );
        // semigroup law on a fractional point
        let pt = ProjPoint::from_rat(&rat(2, 3));
        let m = g.iterate(&pt, 2);
        assert_eq!(g.iterate(&m, 3), g.iterate(&pt, 5));
    }

    #[test]
    fn symbolic_composition_matches_iteration() {
        for g in [
            bm(&[0, 0, 1], &[1]),
            bm(&[1, 0, 1], &[0, 1]),
            bm(&[1, 1], &[1]),
        ] {
            let pt = ProjPoint::from_int(2);
            for n in 0..=3 {
                let gn = g.compose_self(n, 4096).unwrap();
                assert_eq!(ratfunc_eval(&gn, &pt).unwrap(), g.iterate(&pt, n));
            }
        }
    }

    #[test]
    fn fixed_points() {
        assert_eq!(
            bm(&[1, 1], &[1]).fixed_points_linear().unwrap(),
            FixedPoints::Points(vec![])
        );
        assert_eq!(
            bm(&[0, 2], &[1]).fixed_points_linear().unwrap(),
            FixedPoints::Points(vec![ProjPoint::from_int(0)])
        );
        assert_eq!(
            bm(&[0, 1], &[1]).fixed_points_linear().unwrap(),
            FixedPoints::Identity
        );
        assert!(matches!(
            bm(&[0, 0, 1], &[1]).fixed_points_linear(),
            Err(Error::DegreeTooHigh(2))
        ));
        // two rational fixed points: g = (3x-2)/x fixes {1, 2}
        let g = bm(&[-2, 3], &[0, 1]);
        assert_eq!(
            g.fixed_points_linear().unwrap(),
            FixedPoints::Points(vec![ProjPoint::from_int(1), ProjPoint::from_int(2)])
        );
    }

    #[test]
    fn preperiodicity() {
        let g = bm(&[0, 0, 1], &[1]);
        assert_eq!(
            g.detect_preperiodic(&ProjPoint::from_int(1), &default_height_cap(), 50),
            PreperiodicityVerdict::Preperiodic {
                preperiod: 0,
                period: 1
            }
        );
        assert_eq!(
            g.detect_preperiodic(&ProjPoint::from_int(-1), &default_height_cap(), 50),
            PreperiodicityVerdict::Preperiodic {
                preperiod: 1,
                period: 1
            }
        );
        let v = g.detect_preperiodic(&ProjPoint::from_int(2), &BigInt::from(1_000_000), 50);
        match v {
            PreperiodicityVerdict::NotDetected { max_height, .. } => {
                assert!(max_height > BigInt::from(1_000_000));
            }
            other => panic!("expected NotDetected, got {other:?}"),
        }
    }

    #[test]
    fn distinct_orbit_points_for_degree_one() {
        for g in [bm(&[1, 1], &[1]), bm(&[0, 2], &[1])] {
            let mut seen = std::collections::HashSet::new();
            let mut cur = ProjPoint::from_int(3);
            for _ in 0..50 {
                assert!(seen.insert(cur.clone()));
                cur = g.apply(&cur);
            }
        }
    }

    #[test]
    fn mobius_orders() {
        assert_eq!(bm(&[0, 1], &[1]).mobius_order(), Some(1)); // x
        assert_eq!(bm(&[0, -1], &[1]).mobius_order(), Some(2)); // -x
        assert_eq!(bm(&[1], &[0, 1]).mobius_order(), Some(2)); // 1/x
        assert_eq!(bm(&[-1, 1], &[1, 1]).mobius_order(), Some(4)); // (x-1)/(x+1)
        assert_eq!(bm(&[1, 1], &[1]).mobius_order(), None); // x+1
        assert_eq!(bm(&[0, 2], &[1]).mobius_order(), None); // 2x
    }

    #[test]
    fn escape_certificate_soundness() {
        for g in [
            bm(&[0, 0, 1], &[1]),
            bm(&[1, 0, 1], &[0, 1]),
            bm(&[1, -1, 0, 1], &[1]),
        ] {
            let t = g.escape_threshold().unwrap();
            let start = ProjPoint::new(t.clone(), BigInt::one()).unwrap();
            let mut h = start.weil_height();
            let mut cur = start;
            for _ in 0..6 {
                cur = g.apply(&cur);
                let nh = cur.weil_height();
                assert!(nh > h, "height must strictly increase above threshold");
                h = nh;
            }
            // also from a fractional point of large height
            let start = ProjPoint::new(BigInt::one(), t.clone() * 2).unwrap();
            let mut h = start.weil_height();
            let mut cur = start;
            for _ in 0..6 {
                cur = g.apply(&cur);
                let nh = cur.weil_height();
                assert!(nh > h);
                h = nh;
            }
        }
        assert_eq!(bm(&[1, 1], &[1]).escape_threshold(), None);
    }
}
