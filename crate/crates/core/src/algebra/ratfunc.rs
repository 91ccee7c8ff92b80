//! Rational functions over ℚ, kept in canonical form: coprime numerator and
//! denominator, monic denominator, zero stored as 0/1. Equality is
//! structural.

use crate::algebra::poly::Poly;
use crate::algebra::rat::Rat;
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFunc {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let lc = den.leading_coeff().unwrap().clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn x() -> Self {
        RatFunc::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Some(c) iff this is the constant function c.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.num.is_constant() && self.den.is_one() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// max(deg num, deg den) — the degree as a self-map of ℙ¹.
    pub fn map_degree(&self) -> usize {
        self.num.degree_or_zero().max(self.den.degree_or_zero())
    }

    pub fn recip(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    /// Affine evaluation; None at a pole. Coprimality rules out 0/0.
    pub fn eval_affine(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    /// Value at the point at infinity; None when there is a pole there
    /// (deg num > deg den).
    pub fn value_at_infinity(&self) -> Option<Rat> {
        let (n, d) = (self.num.degree_or_zero(), self.den.degree_or_zero());
        if self.num.is_zero() {
            return Some(Rat::zero());
        }
        match n.cmp(&d) {
            std::cmp::Ordering::Less => Some(Rat::zero()),
            std::cmp::Ordering::Equal => Some(
                self.num.leading_coeff().unwrap() / self.den.leading_coeff().unwrap(),
            ),
            std::cmp::Ordering::Greater => None,
        }
    }

    pub fn has_pole_at_infinity(&self) -> bool {
        self.value_at_infinity().is_none()
    }

    /// Composition self ∘ g, with a cap on the resulting map degree.
    pub fn compose(&self, g: &RatFunc, degree_cap: usize) -> Result<RatFunc> {
        let d = self.map_degree();
        let estimate = d.saturating_mul(g.map_degree());
        if estimate > degree_cap {
            return Err(Error::DegreeOverflow {
                degree: estimate,
                cap: degree_cap,
            });
        }
        let num = homog_apply(&self.num, g.num(), g.den(), d);
        let den = homog_apply(&self.den, g.num(), g.den(), d);
        if den.is_zero() {
            // den ∘ g collapses only if den is constant zero, excluded.
            return Err(Error::IndeterminateValue);
        }
        Ok(Self::normalized(num, den))
    }
}

/// Σ pᵢ aⁱ b^(d−i) for polynomials a, b; the homogenized substitution used
/// by composition.
fn homog_apply(p: &Poly, a: &Poly, b: &Poly, d: usize) -> Poly {
    let mut acc = Poly::zero();
    let mut a_pow = Poly::one();
    let mut b_pows = Vec::with_capacity(d + 1);
    let mut bp = Poly::one();
    for _ in 0..=d {
        b_pows.push(bp.clone());
        bp = &bp * b;
    }
    for i in 0..=d.min(p.coeffs().len().saturating_sub(1)) {
        let c = p.coeff(i);
        if !c.is_zero() {
            acc = &acc + &(&a_pow * &b_pows[d - i]).scale(&c);
        }
        if i < d {
            a_pow = &a_pow * a;
        }
    }
    acc
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::normalized(
            &(self.num() * rhs.den()) + &(rhs.num() * self.den()),
            self.den() * rhs.den(),
        )
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::normalized(
            &(self.num() * rhs.den()) - &(rhs.num() * self.den()),
            self.den() * rhs.den(),
        )
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::normalized(self.num() * rhs.num(), self.den() * rhs.den())
    }
}

/// Panics on zero divisor; generic elimination code checks first.
impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        assert!(!rhs.is_zero(), "division by the zero rational function");
        RatFunc::normalized(self.num() * rhs.den(), self.den() * rhs.num())
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned_ops {
    ($($trait:ident, $m:ident);*) => {$(
        impl $trait for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc { (&self).$m(&rhs) }
        }
        impl $trait<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc { (&self).$m(rhs) }
        }
    )*};
}
forward_owned_ops!(Add, add; Sub, sub; Mul, mul; Div, div);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::from_poly(Poly::zero())
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}
