//! Skew-linear systems f(x, y) = (g(x), A(x)·y): exact orbits, singular
//! loci, cocycles, orbit–variety intersections, the image filtration, and
//! symbolic invariance certificates for families of linear subspaces.
//!
//! The singular locus is represented by polynomials, never by roots;
//! membership of a base point is decided by evaluation.

use crate::algebra::{FuncMat, Poly, Rat, RatFunc, RatMat};
use crate::error::{Error, Result};
use crate::projective::{BaseMap, ProjPoint};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Default cap on symbolic composition degrees; operations fail loudly
/// beyond it instead of degrading.
pub const DEFAULT_DEGREE_CAP: usize = 512;

#[derive(Clone, Debug)]
pub struct SkewSystem {
    base: BaseMap,
    matrix: FuncMat,
}

/// A point of ℙ¹ × 𝔸ᴺ with exact fiber coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewPoint {
    pub base: ProjPoint,
    pub fiber: Vec<Rat>,
}

impl SkewPoint {
    pub fn new(base: ProjPoint, fiber: Vec<Rat>) -> Self {
        SkewPoint { base, fiber }
    }
}

/// The locus S where f fails to be locally étale along the fiber: roots of
/// det A, poles of entries, and possibly the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularLocus {
    /// Squarefree monic part of the numerator of det A; zero iff det A ≡ 0.
    pub det_numerator: Poly,
    /// Squarefree monic lcm of all entry denominators.
    pub pole_locus: Poly,
    pub includes_infinity: bool,
}

impl SingularLocus {
    /// Membership by evaluation, never by root enumeration.
    pub fn meets(&self, pt: &ProjPoint) -> bool {
        match pt.as_rat() {
            None => self.includes_infinity,
            Some(x) => {
                (!self.det_numerator.is_zero() && self.det_numerator.eval(&x).is_zero())
                    || self.det_numerator.is_zero()
                    || self.pole_locus.eval(&x).is_zero()
            }
        }
    }

    /// Height bound for every ℚ-rational point of the locus (excluding
    /// infinity): rational roots of either polynomial have height below it.
    pub fn height_bound(&self) -> BigInt {
        let a = self.det_numerator.rational_root_height_bound();
        let b = self.pole_locus.rational_root_height_bound();
        if a > b {
            a
        } else {
            b
        }
    }
}

/// Columns spanning a family of linear subspaces V(x) ⊆ 𝔸ᴺ of generic
/// rank r = number of columns.
#[derive(Clone, Debug)]
pub struct LinearFamily {
    basis: FuncMat,
}

impl LinearFamily {
    pub fn new(basis: FuncMat) -> Result<Self> {
        if basis.rank() != basis.cols() {
            return Err(Error::InvalidInput(
                "family basis must have full column rank over Q(x)".into(),
            ));
        }
        Ok(LinearFamily { basis })
    }

    pub fn full_space(dim: usize) -> Self {
        LinearFamily {
            basis: FuncMat::identity(dim),
        }
    }

    pub fn basis(&self) -> &FuncMat {
        &self.basis
    }

    pub fn generic_rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    /// Exact membership of a fiber vector in the family's fiber at an
    /// affine base point; None when the basis degenerates there.
    pub fn contains_at(&self, x: &Rat, v: &[Rat]) -> Option<bool> {
        let b = self.basis.eval_affine(x)?;
        Some(b.solve(v).is_some())
    }
}

/// A polynomial in x, y₁..y_N over ℚ, stored as an evaluation-only sparse
/// term list (coefficient, [e_x, e_y1, .., e_yN]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietyPoly {
    terms: Vec<(Rat, Vec<u32>)>,
    dim: usize,
}

impl VarietyPoly {
    pub fn new(terms: Vec<(Rat, Vec<u32>)>, dim: usize) -> Result<Self> {
        for (_, exps) in &terms {
            if exps.len() != dim + 1 {
                return Err(Error::DimensionMismatch(format!(
                    "variety term has {} exponents, expected {}",
                    exps.len(),
                    dim + 1
                )));
            }
        }
        Ok(VarietyPoly {
            terms: terms.into_iter().filter(|(c, _)| !c.is_zero()).collect(),
            dim,
        })
    }

    pub fn constant(c: Rat, dim: usize) -> Self {
        VarietyPoly::new(vec![(c, vec![0; dim + 1])], dim).unwrap()
    }

    /// The coordinate form y_j (1-based).
    pub fn coordinate(j: usize, dim: usize) -> Self {
        let mut exps = vec![0; dim + 1];
        exps[j] = 1;
        VarietyPoly::new(vec![(Rat::one(), exps)], dim).unwrap()
    }

    pub fn terms(&self) -> &[(Rat, Vec<u32>)] {
        &self.terms
    }

    pub fn involves_x(&self) -> bool {
        self.terms.iter().any(|(_, e)| e[0] > 0)
    }

    pub fn eval(&self, x: &Rat, y: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (c, exps) in &self.terms {
            let mut t = c.clone();
            t *= pow(x, exps[0]);
            for (j, &e) in exps[1..].iter().enumerate() {
                if e > 0 {
                    t *= pow(&y[j], e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Evaluates the x-free part on a fiber (used at base points at
    /// infinity; terms involving x are treated as non-vanishing there).
    pub fn eval_y_only(&self, y: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (c, exps) in &self.terms {
            if exps[0] > 0 {
                continue;
            }
            let mut t = c.clone();
            for (j, &e) in exps[1..].iter().enumerate() {
                if e > 0 {
                    t *= pow(&y[j], e);
                }
            }
            acc += t;
        }
        acc
    }

    /// The univariate polynomial p(x, 0, .., 0).
    pub fn restrict_fiber_zero(&self) -> Poly {
        let mut coeffs: Vec<Rat> = vec![];
        for (c, exps) in &self.terms {
            if exps[1..].iter().any(|&e| e > 0) {
                continue;
            }
            let d = exps[0] as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, Rat::zero());
            }
            coeffs[d] += c.clone();
        }
        Poly::from_coeffs(coeffs)
    }
}

fn pow(x: &Rat, e: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// A relation c₀(x) + Σⱼ cⱼ(x)·yⱼ with exact polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRelation {
    /// coeffs[0] = c₀, coeffs[j] multiplies yⱼ.
    pub coeffs: Vec<Poly>,
}

impl PolyRelation {
    pub fn eval(&self, x: &Rat, y: &[Rat]) -> Rat {
        let mut acc = self.coeffs[0].eval(x);
        for (j, c) in self.coeffs[1..].iter().enumerate() {
            if !c.is_zero() {
                acc += c.eval(x) * &y[j];
            }
        }
        acc
    }
}

/// Result of orbit–variety intersection; `truncated` reports early stops
/// (indeterminacy hit or height cap) with the step reached.
#[derive(Clone, Debug)]
pub struct Intersection {
    pub hits: Vec<usize>,
    pub truncated: Option<(usize, String)>,
}

/// Result of the image filtration Z = ∩ fⁿ(ℙ¹ × 𝔸ᴺ) on the generic fiber.
#[derive(Clone, Debug)]
pub struct Filtration {
    /// First n with rank(Pₙ) = rank(Pₙ₊₁).
    pub stabilization_step: usize,
    pub generic_rank: usize,
    pub basis: LinearFamily,
    /// Witness T with A·B = (B∘g)·T when the basis family is invariant.
    pub invariance_witness: Option<FuncMat>,
    /// For deg g ≥ 2 only the rank is certified: preimage branches can
    /// enlarge the set-theoretic image closure beyond one column space.
    pub rank_only_certified: bool,
}

impl Filtration {
    pub fn invariant(&self) -> bool {
        self.invariance_witness.is_some()
    }
}

impl SkewSystem {
    pub fn new(base: BaseMap, matrix: FuncMat) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NonSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        if matrix.rows() == 0 {
            return Err(Error::InvalidInput("fiber dimension must be >= 1".into()));
        }
        Ok(SkewSystem { base, matrix })
    }

    pub fn base(&self) -> &BaseMap {
        &self.base
    }

    pub fn matrix(&self) -> &FuncMat {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn singular_locus(&self) -> SingularLocus {
        let det = self.matrix.det().expect("matrix is square");
        let det_numerator = if det.is_zero() {
            Poly::zero()
        } else {
            det.num().squarefree_part()
        };
        let mut pole_locus = Poly::one();
        for e in self.matrix.entries() {
            pole_locus = pole_locus.lcm(e.den());
        }
        let pole_locus = pole_locus.squarefree_part();
        let entry_pole_at_inf = self.matrix.entries().any(|e| e.has_pole_at_infinity());
        let det_degenerates_at_inf = det.is_zero()
            || det.has_pole_at_infinity()
            || det.value_at_infinity().is_some_and(|v| v.is_zero());
        SingularLocus {
            det_numerator,
            pole_locus,
            includes_infinity: entry_pole_at_inf || det_degenerates_at_inf,
        }
    }

    fn eval_entry(e: &RatFunc, pt: &ProjPoint) -> Option<Rat> {
        match pt.as_rat() {
            Some(x) => e.eval_affine(&x),
            None => e.value_at_infinity(),
        }
    }

    /// A evaluated at a base point; Err carries the offending entry.
    pub fn matrix_at(&self, pt: &ProjPoint, step: usize) -> Result<RatMat> {
        self.matrix
            .try_map(|e| Self::eval_entry(e, pt).ok_or(Error::HitIndeterminacy { step }))
    }

    /// One fiber transport step. When an entry has a pole at the base point
    /// the row is first combined symbolically with the fiber values, so a
    /// cancellable pole (weighted by zero coordinates) is not an error; a
    /// genuine one is the indeterminacy locus.
    fn step_fiber(&self, base: &ProjPoint, fiber: &[Rat], step: usize) -> Result<Vec<Rat>> {
        if let Ok(m) = self.matrix_at(base, step) {
            return Ok(m.mul_vec(fiber));
        }
        let n = self.dim();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut s = RatFunc::zero();
            for j in 0..n {
                if fiber[j].is_zero() {
                    continue;
                }
                s = &s + &(self.matrix.at(i, j) * &RatFunc::constant(fiber[j].clone()));
            }
            match Self::eval_entry(&s, base) {
                Some(v) => out.push(v),
                None => return Err(Error::HitIndeterminacy { step }),
            }
        }
        Ok(out)
    }

    /// Exact n-th iterate of the skew map.
    pub fn iterate(&self, pt: &SkewPoint, n: usize) -> Result<SkewPoint> {
        if pt.fiber.len() != self.dim() {
            return Err(Error::DimensionMismatch("fiber length != N".into()));
        }
        let mut cur = pt.clone();
        for k in 0..n {
            let fiber = self.step_fiber(&cur.base, &cur.fiber, k)?;
            cur = SkewPoint::new(self.base.apply(&cur.base), fiber);
        }
        Ok(cur)
    }

    /// The exact n-fold matrix product A(g^(n−1)·α)···A(α); n = 0 is the
    /// identity.
    pub fn cocycle(&self, alpha: &ProjPoint, n: usize) -> Result<RatMat> {
        let mut acc = RatMat::identity(self.dim());
        let mut pt = alpha.clone();
        for k in 0..n {
            let m = self.matrix_at(&pt, k)?;
            acc = m.mul(&acc);
            pt = self.base.apply(&pt);
        }
        Ok(acc)
    }

    /// The function-field cocycle Pₙ(x) = A(g^(n−1)(x))···A(x); satisfies
    /// P_(m+n)(x) = P_m(gⁿ(x))·P_n(x).
    pub fn symbolic_cocycle(&self, n: usize, degree_cap: usize) -> Result<FuncMat> {
        let mut acc = FuncMat::identity(self.dim());
        for _ in 0..n {
            acc = acc.compose(self.base.func(), degree_cap)?.mul(&self.matrix);
        }
        Ok(acc)
    }

    /// All n ≤ n_max where every variety polynomial vanishes at fⁿ(start).
    /// Indeterminacy hits and base-height overflows truncate with a warning
    /// instead of failing. At a base point at infinity, polynomials
    /// involving x are treated as non-vanishing.
    pub fn orbit_intersection(
        &self,
        start: &SkewPoint,
        variety: &[VarietyPoly],
        n_max: usize,
        height_cap: &BigInt,
    ) -> Intersection {
        let mut hits = Vec::new();
        let mut truncated = None;
        let locus = self.singular_locus();
        let mut cur = start.clone();
        let mut n = 0usize;
        loop {
            let in_variety = match cur.base.as_rat() {
                Some(x) => variety.iter().all(|p| p.eval(&x, &cur.fiber).is_zero()),
                None => variety
                    .iter()
                    .all(|p| !p.involves_x() && p.eval_y_only(&cur.fiber).is_zero()),
            };
            if in_variety {
                hits.push(n);
            }
            if n == n_max {
                break;
            }
            // Certified tail: a zero fiber stays zero, and once the base
            // orbit escapes both the singular locus and every restricted
            // variety root, the remaining hit pattern is constant.
            if cur.fiber.iter().all(|v| v.is_zero()) {
                let restrictions: Vec<Poly> =
                    variety.iter().map(|p| p.restrict_fiber_zero()).collect();
                let mut avoid = locus.height_bound();
                for r in &restrictions {
                    if !r.is_zero() {
                        let b = r.rational_root_height_bound();
                        if b > avoid {
                            avoid = b;
                        }
                    }
                }
                if self.base.orbit_escapes(&cur.base, &avoid) {
                    if restrictions.iter().all(|r| r.is_zero()) {
                        hits.extend(n + 1..=n_max);
                    }
                    break;
                }
            }
            if cur.base.weil_height() > *height_cap {
                truncated = Some((n, "base height cap reached".to_string()));
                break;
            }
            match self.step_fiber(&cur.base, &cur.fiber, n) {
                Ok(fiber) => {
                    cur = SkewPoint::new(self.base.apply(&cur.base), fiber);
                }
                Err(_) => {
                    truncated = Some((n, "orbit enters the indeterminacy locus".to_string()));
                    break;
                }
            }
            n += 1;
        }
        Intersection { hits, truncated }
    }

    /// True (with witness T) iff A(x)·B(x) = B(g(x))·T(x) is solvable over
    /// ℚ(x), i.e. A(x)·V(x) ⊆ V(g(x)) identically.
    pub fn invariance_certificate(
        &self,
        family: &LinearFamily,
        degree_cap: usize,
    ) -> Result<Option<FuncMat>> {
        if family.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch(
                "family ambient dimension != N".into(),
            ));
        }
        let ab = self.matrix.mul(family.basis());
        let bg = family.basis().compose(self.base.func(), degree_cap)?;
        Ok(bg.solve_columns(&ab))
    }

    /// Ranks of the symbolic cocycles stabilize within N steps; returns the
    /// stabilization step, the generic rank, a column-space basis of the
    /// stabilized cocycle, and its invariance certificate.
    pub fn image_filtration(&self, degree_cap: usize) -> Result<Filtration> {
        let n = self.dim();
        let mut prev = FuncMat::identity(n);
        let mut prev_rank = n;
        let mut step = 0usize;
        loop {
            let next = prev.compose(self.base.func(), degree_cap)?.mul(&self.matrix);
            let next_rank = next.rank();
            debug_assert!(next_rank <= prev_rank, "cocycle ranks must not increase");
            if next_rank == prev_rank {
                break;
            }
            prev = next;
            prev_rank = next_rank;
            step += 1;
            assert!(step <= n, "rank must stabilize within N steps");
        }
        let pivots = prev.column_space_pivots();
        let basis = LinearFamily::new(prev.select_columns(&pivots))?;
        let invariance_witness = self.invariance_certificate(&basis, degree_cap)?;
        Ok(Filtration {
            stabilization_step: step,
            generic_rank: prev_rank,
            basis,
            invariance_witness,
            rank_only_certified: self.base.degree() >= 2,
        })
    }
}

/// Basis (reduced echelon over ℚ) of the space of relations
/// c₀(x) + Σⱼ cⱼ(x)·yⱼ with deg cⱼ ≤ degree_bound vanishing at every
/// sample point. Sample base points must be affine.
pub fn discover_linear_relations(
    samples: &[SkewPoint],
    fiber_dim: usize,
    degree_bound: usize,
) -> Result<Vec<PolyRelation>> {
    let blocks = fiber_dim + 1;
    let width = blocks * (degree_bound + 1);
    let mut rows = Vec::with_capacity(samples.len());
    for pt in samples {
        let x = pt.base.as_rat().ok_or_else(|| {
            Error::InvalidInput("relation discovery needs affine base coordinates".into())
        })?;
        if pt.fiber.len() != fiber_dim {
            return Err(Error::DimensionMismatch("fiber length != N".into()));
        }
        let mut x_pows = Vec::with_capacity(degree_bound + 1);
        let mut p = Rat::one();
        for _ in 0..=degree_bound {
            x_pows.push(p.clone());
            p *= &x;
        }
        let mut row = Vec::with_capacity(width);
        for b in 0..blocks {
            for e in 0..=degree_bound {
                let v = if b == 0 {
                    x_pows[e].clone()
                } else {
                    &pt.fiber[b - 1] * &x_pows[e]
                };
                row.push(v);
            }
        }
        rows.push(row);
    }
    let mat = RatMat::from_rows(rows)?;
    let kernel = mat.kernel_basis();
    let relations: Vec<PolyRelation> = kernel
        .into_iter()
        .map(|v| PolyRelation {
            coeffs: (0..blocks)
                .map(|b| {
                    Poly::from_coeffs(
                        v[b * (degree_bound + 1)..(b + 1) * (degree_bound + 1)].to_vec(),
                    )
                })
                .collect(),
        })
        .collect();
    // Spec invariant: every returned relation re-verifies on every sample.
    for rel in &relations {
        for pt in samples {
            let x = pt.base.as_rat().unwrap();
            assert!(
                rel.eval(&x, &pt.fiber).is_zero(),
                "discovered relation fails to vanish on a sample"
            );
        }
    }
    Ok(relations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat_i, Mat};
    use crate::projective::default_height_cap;

    fn rf(num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_i64(num), Poly::from_i64(den)).unwrap()
    }

    fn c(n: i64) -> RatFunc {
        RatFunc::constant(rat_i(n))
    }

    fn x() -> RatFunc {
        RatFunc::x()
    }

    fn sys(g: RatFunc, rows: Vec<Vec<RatFunc>>) -> SkewSystem {
        SkewSystem::new(BaseMap::new(g).unwrap(), Mat::from_rows(rows).unwrap()).unwrap()
    }

    fn x_squared() -> RatFunc {
        rf(&[0, 0, 1], &[1])
    }

    #[test]
    fn singular_locus_examples() {
        let s = sys(x_squared(), vec![vec![x(), c(1)], vec![c(0), c(1)]]);
        let l = s.singular_locus();
        assert_eq!(l.det_numerator, Poly::x());
        assert_eq!(l.pole_locus, Poly::one());

        let s = sys(x_squared(), vec![vec![c(1), c(0)], vec![c(0), c(1)]]);
        let l = s.singular_locus();
        assert_eq!(l.det_numerator, Poly::one());
        assert_eq!(l.pole_locus, Poly::one());
        assert!(!l.includes_infinity);
        assert!(!l.meets(&ProjPoint::from_int(7)));

        let s = sys(x_squared(), vec![vec![rf(&[-4, 1], &[0, 1])]]);
        let l = s.singular_locus();
        assert_eq!(l.det_numerator, Poly::from_i64(&[-4, 1]));
        assert_eq!(l.pole_locus, Poly::x());
        assert!(l.meets(&ProjPoint::from_int(4)));
        assert!(l.meets(&ProjPoint::from_int(0)));
        assert!(!l.meets(&ProjPoint::from_int(3)));
    }

    #[test]
    fn iterate_examples() {
        // f = (x^2, x*y), start (2, 1), n = 3 -> (256, 128)
        let s = sys(x_squared(), vec![vec![x()]]);
        let p = SkewPoint::new(ProjPoint::from_int(2), vec![rat_i(1)]);
        let out = s.iterate(&p, 3).unwrap();
        assert_eq!(out.base, ProjPoint::from_int(256));
        assert_eq!(out.fiber, vec![rat_i(128)]);
        assert_eq!(s.iterate(&p, 0).unwrap(), p);

        // f = (x+1, x*y), start (0, 1), n = 2 -> (2, 0)
        let s = sys(rf(&[1, 1], &[1]), vec![vec![x()]]);
        let p = SkewPoint::new(ProjPoint::from_int(0), vec![rat_i(1)]);
        let out = s.iterate(&p, 2).unwrap();
        assert_eq!(out.base, ProjPoint::from_int(2));
        assert_eq!(out.fiber, vec![rat_i(0)]);
    }

    #[test]
    fn cancellable_pole_is_not_indeterminacy() {
        // A = [[1/x, 1], [0, 1]]: at x=0 with fiber (0, v) the pole cancels
        let s = sys(
            rf(&[1, 1], &[1]),
            vec![vec![rf(&[1], &[0, 1]), c(1)], vec![c(0), c(1)]],
        );
        let p = SkewPoint::new(ProjPoint::from_int(0), vec![rat_i(0), rat_i(5)]);
        let out = s.iterate(&p, 1).unwrap();
        assert_eq!(out.fiber, vec![rat_i(5), rat_i(5)]);
        // with a nonzero first coordinate it is a genuine indeterminacy
        let q = SkewPoint::new(ProjPoint::from_int(0), vec![rat_i(1), rat_i(5)]);
        assert!(matches!(
            s.iterate(&q, 1),
            Err(Error::HitIndeterminacy { step: 0 })
        ));
    }

    #[test]
    fn cocycle_examples() {
        let s = sys(x_squared(), vec![vec![x()]]);
        assert_eq!(
            s.cocycle(&ProjPoint::from_int(2), 0).unwrap(),
            RatMat::identity(1)
        );
        let m = s.cocycle(&ProjPoint::from_int(2), 2).unwrap();
        assert_eq!(*m.at(0, 0), rat_i(8)); // 4 * 2

        // constant A: cocycle is A^n
        let a = vec![vec![c(1), c(1)], vec![c(1), c(0)]];
        let s = sys(x_squared(), a);
        let m3 = s.cocycle(&ProjPoint::from_int(2), 3).unwrap();
        assert_eq!(*m3.at(0, 0), rat_i(3));
        assert_eq!(*m3.at(0, 1), rat_i(2));
    }

    #[test]
    fn cocycle_composition_law() {
        let s = sys(
            x_squared(),
            vec![vec![x(), c(2)], vec![c(1), rf(&[1, 1], &[1])]],
        );
        let alpha = ProjPoint::from_int(2);
        for (m, n) in [(1, 2), (2, 1), (2, 2)] {
            let total = s.cocycle(&alpha, m + n).unwrap();
            let first = s.cocycle(&alpha, n).unwrap();
            let shifted = s.cocycle(&s.base.iterate(&alpha, n), m).unwrap();
            assert_eq!(shifted.mul(&first), total);
        }
    }

    #[test]
    fn symbolic_cocycle_examples() {
        let s = sys(x_squared(), vec![vec![x()]]);
        assert_eq!(s.symbolic_cocycle(1, 512).unwrap(), s.matrix().clone());
        let p2 = s.symbolic_cocycle(2, 512).unwrap();
        assert_eq!(*p2.at(0, 0), rf(&[0, 0, 0, 1], &[1])); // x^3

        // spec 2x2 example: A(x^2) * A(x)
        let s = sys(
            x_squared(),
            vec![vec![x(), rf(&[0, 0, 1], &[1])], vec![c(1), x()]],
        );
        let p2 = s.symbolic_cocycle(2, 512).unwrap();
        assert_eq!(*p2.at(0, 0), rf(&[0, 0, 0, 1, 1], &[1]));
        assert_eq!(*p2.at(0, 1), rf(&[0, 0, 0, 0, 1, 1], &[1]));
        assert_eq!(*p2.at(1, 0), rf(&[0, 1, 1], &[1]));
        assert_eq!(*p2.at(1, 1), rf(&[0, 0, 1, 1], &[1]));
    }

    #[test]
    fn symbolic_cocycle_matches_numeric() {
        let s = sys(
            x_squared(),
            vec![vec![x(), c(2)], vec![c(1), rf(&[1, 1], &[1])]],
        );
        let alpha = ProjPoint::from_int(3);
        for n in 0..=4 {
            let sym = s.symbolic_cocycle(n, 4096).unwrap();
            let evaled = sym.eval_affine(&rat_i(3)).unwrap();
            assert_eq!(evaled, s.cocycle(&alpha, n).unwrap());
        }
    }

    #[test]
    fn skew_iterate_matches_cocycle() {
        let s = sys(
            x_squared(),
            vec![vec![x(), c(2)], vec![c(1), rf(&[1, 1], &[1])]],
        );
        let start = SkewPoint::new(ProjPoint::from_int(3), vec![rat_i(1), rat_i(-2)]);
        for n in 0..=5 {
            let via_iter = s.iterate(&start, n).unwrap();
            let via_cocycle = s.cocycle(&start.base, n).unwrap().mul_vec(&start.fiber);
            assert_eq!(via_iter.fiber, via_cocycle);
        }
    }

    #[test]
    fn orbit_intersection_examples() {
        let s = sys(x_squared(), vec![vec![rf(&[-4, 1], &[0, 1])]]);
        let start = SkewPoint::new(ProjPoint::from_int(2), vec![rat_i(1)]);
        // variety {1}: empty set
        let one = VarietyPoly::constant(rat_i(1), 1);
        assert!(s
            .orbit_intersection(&start, &[one], 10, &default_height_cap())
            .hits
            .is_empty());
        // variety {0}: whole space
        let zero = VarietyPoly::constant(rat_i(0), 1);
        assert_eq!(
            s.orbit_intersection(&start, &[zero], 10, &default_height_cap())
                .hits,
            (0..=10).collect::<Vec<_>>()
        );
        // variety {y1}: hits from 2 on
        let y1 = VarietyPoly::coordinate(1, 1);
        let r = s.orbit_intersection(&start, &[y1], 10, &default_height_cap());
        assert_eq!(r.hits, (2..=10).collect::<Vec<_>>());
        assert!(r.truncated.is_none());
    }

    #[test]
    fn orbit_intersection_certified_tail() {
        // same fixture, window far beyond representable orbit heights
        let s = sys(x_squared(), vec![vec![rf(&[-4, 1], &[0, 1])]]);
        let start = SkewPoint::new(ProjPoint::from_int(2), vec![rat_i(1)]);
        let y1 = VarietyPoly::coordinate(1, 1);
        let r = s.orbit_intersection(&start, &[y1], 5000, &default_height_cap());
        assert_eq!(r.hits, (2..=5000).collect::<Vec<_>>());
        assert!(r.truncated.is_none());
    }

    #[test]
    fn invariance_examples() {
        // full space is invariant
        let s = sys(
            x_squared(),
            vec![vec![x(), c(2)], vec![c(1), rf(&[1, 1], &[1])]],
        );
        let t = s
            .invariance_certificate(&LinearFamily::full_space(2), 512)
            .unwrap();
        assert!(t.is_some());

        // A = [[x, 0], [1, x]], span(e2): A·e2 = x·e2
        let s = sys(x_squared(), vec![vec![x(), c(0)], vec![c(1), x()]]);
        let fam = LinearFamily::new(Mat::from_rows(vec![vec![c(0)], vec![c(1)]]).unwrap()).unwrap();
        let t = s.invariance_certificate(&fam, 512).unwrap().unwrap();
        assert_eq!(*t.at(0, 0), x());

        // A = [[x, x^2], [1, x]], span((x,1)^T) under g = x^2: inconsistent
        let s = sys(
            x_squared(),
            vec![vec![x(), rf(&[0, 0, 1], &[1])], vec![c(1), x()]],
        );
        let fam = LinearFamily::new(Mat::from_rows(vec![vec![x()], vec![c(1)]]).unwrap()).unwrap();
        assert!(s.invariance_certificate(&fam, 512).unwrap().is_none());
    }

    #[test]
    fn invariance_soundness_500_steps() {
        // invariant family: 500 numeric steps stay inside the evaluated fiber
        let s = sys(rf(&[1, 1], &[1]), vec![vec![x(), c(0)], vec![c(1), x()]]);
        let fam = LinearFamily::new(Mat::from_rows(vec![vec![c(0)], vec![c(1)]]).unwrap()).unwrap();
        assert!(s.invariance_certificate(&fam, 512).unwrap().is_some());
        let mut pt = SkewPoint::new(ProjPoint::from_int(1), vec![rat_i(0), rat_i(3)]);
        for k in 0..500 {
            let xv = pt.base.as_rat().unwrap();
            assert_eq!(fam.contains_at(&xv, &pt.fiber), Some(true), "step {k}");
            pt = s.iterate(&pt, 1).unwrap();
        }
    }

    #[test]
    fn filtration_examples() {
        // invertible A over Q(x)
        let s = sys(
            x_squared(),
            vec![vec![x(), c(2)], vec![c(1), rf(&[1, 1], &[1])]],
        );
        let f = s.image_filtration(512).unwrap();
        assert_eq!(f.stabilization_step, 0);
        assert_eq!(f.generic_rank, 2);
        assert!(f.invariant());

        // constant projector
        let s = sys(x_squared(), vec![vec![c(1), c(0)], vec![c(0), c(0)]]);
        let f = s.image_filtration(512).unwrap();
        assert_eq!(f.stabilization_step, 1);
        assert_eq!(f.generic_rank, 1);
        assert!(f.invariant());
        assert_eq!(*f.basis.basis().at(0, 0), c(1));
        assert_eq!(*f.basis.basis().at(1, 0), c(0));

        // spec example: rank 1, basis proportional to (x,1)^T, not invariant
        let s = sys(
            x_squared(),
            vec![vec![x(), rf(&[0, 0, 1], &[1])], vec![c(1), x()]],
        );
        let f = s.image_filtration(512).unwrap();
        assert_eq!(f.generic_rank, 1);
        assert!(f.rank_only_certified);
        // basis column spans the same line as (x, 1)^T
        let b = f.basis.basis();
        let ratio = b.at(0, 0) / b.at(1, 0);
        assert_eq!(ratio, x());
        assert!(!f.invariant());
    }

    #[test]
    fn relation_discovery() {
        // orbit of (x^2, x*y) from (2, 0): fiber identically zero
        let s = sys(x_squared(), vec![vec![x()]]);
        let mut samples = Vec::new();
        let mut pt = SkewPoint::new(ProjPoint::from_int(2), vec![rat_i(0)]);
        for _ in 0..9 {
            samples.push(pt.clone());
            pt = s.iterate(&pt, 1).unwrap();
        }
        let rels = discover_linear_relations(&samples[..4], 1, 0).unwrap();
        assert_eq!(rels.len(), 1);
        assert!(rels[0].coeffs[0].is_zero());
        assert!(rels[0].coeffs[1].is_one());

        // from (2, 1) the orbit lies on the invariant curve y = x/2
        // (y_n = 2^(2^n - 1)), so the relation space is exactly that line
        let mut samples = Vec::new();
        let mut pt = SkewPoint::new(ProjPoint::from_int(2), vec![rat_i(1)]);
        for _ in 0..9 {
            samples.push(pt.clone());
            pt = s.iterate(&pt, 1).unwrap();
        }
        let rels = discover_linear_relations(&samples, 1, 1).unwrap();
        assert_eq!(rels.len(), 1);
        let r = &rels[0];
        // c0 + c1*y with c0 = -x/2 * c1-scale; normalize on the y block
        let scale = r.coeffs[1].coeff(0).recip();
        assert_eq!(r.coeffs[1].scale(&scale), Poly::one());
        assert_eq!(
            r.coeffs[0].scale(&scale),
            Poly::from_coeffs(vec![Rat::zero(), crate::algebra::rat(-1, 2)])
        );

        // f = (x^2, 2x*y) from (2, 1): y_n = 2^(n-1) x_n, the ratio moves
        // with n, so no bounded-degree relation survives enough samples
        let s2 = sys(x_squared(), vec![vec![&c(2) * &x()]]);
        let mut samples = Vec::new();
        let mut pt = SkewPoint::new(ProjPoint::from_int(2), vec![rat_i(1)]);
        for _ in 0..9 {
            samples.push(pt.clone());
            pt = s2.iterate(&pt, 1).unwrap();
        }
        let rels = discover_linear_relations(&samples, 1, 1).unwrap();
        assert!(rels.is_empty());

        // single sample, degree 0: relation space of dimension N
        let single = [SkewPoint::new(
            ProjPoint::from_int(3),
            vec![rat_i(2), rat_i(5)],
        )];
        let rels = discover_linear_relations(&single, 2, 0).unwrap();
        assert_eq!(rels.len(), 2);
    }
}
