//! Dense univariate polynomials over ℚ, ascending-degree coefficients.
//!
//! The zero polynomial is the empty coefficient list; otherwise the leading
//! coefficient is nonzero. Division, gcd, resultants and Bezout cofactors are
//! all exact.

use crate::algebra::rat::{format_rat, Rat};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn x() -> Self {
        Poly::from_i64(&[0, 1])
    }

    pub fn constant(c: Rat) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn monomial(c: Rat, degree: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); degree];
        coeffs.push(c);
        Poly::from_coeffs(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with deg 0 = 0 convention for the zero polynomial.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading_coeff() {
            None => Poly::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Homogeneous evaluation Σ cᵢ aⁱ b^(d−i), homogenizing to degree `d`.
    /// Requires d ≥ deg.
    pub fn eval_homog(&self, a: &BigInt, b: &BigInt, d: usize) -> Rat {
        assert!(self.degree().map_or(true, |deg| deg <= d));
        let mut acc = Rat::zero();
        let mut a_pow = BigInt::one();
        let mut b_pows = Vec::with_capacity(d + 1);
        let mut bp = BigInt::one();
        for _ in 0..=d {
            b_pows.push(bp.clone());
            bp *= b;
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * Rat::from_integer(&a_pow * &b_pows[d - i]);
            }
            if i < d {
                a_pow *= a;
            }
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Quotient and remainder; errors on zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let d_deg = divisor.degree().ok_or(Error::DivisionByZero)?;
        let d_lc = divisor.leading_coeff().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() < d_deg + 1 {
            return Ok((Poly::zero(), self.clone()));
        }
        let q_len = rem.len() - d_deg;
        let mut quot = vec![Rat::zero(); q_len];
        for k in (0..q_len).rev() {
            let c = &rem[k + d_deg] / &d_lc;
            if !c.is_zero() {
                for (i, dc) in divisor.coeffs.iter().enumerate() {
                    let t = dc * &c;
                    rem[k + i] -= t;
                }
            }
            quot[k] = c;
        }
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::DimensionMismatch(
                "inexact polynomial division".into(),
            ));
        }
        Ok(q)
    }

    /// Monic gcd; gcd(0,0) = 0.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: returns (g, u, v) with u·self + v·other = g, g the
    /// monic gcd.
    pub fn extended_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let (mut u0, mut u1) = (Poly::one(), Poly::zero());
        let (mut v0, mut v1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let nu = &u0 - &(&q * &u1);
            u0 = std::mem::replace(&mut u1, nu);
            let nv = &v0 - &(&q * &v1);
            v0 = std::mem::replace(&mut v1, nv);
        }
        match r0.leading_coeff() {
            None => (Poly::zero(), Poly::zero(), Poly::zero()),
            Some(lc) => {
                let inv = lc.recip();
                (r0.scale(&inv), u0.scale(&inv), v0.scale(&inv))
            }
        }
    }

    /// Monic lcm; lcm with 0 is 0.
    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(other);
        (self * other).div_exact(&g).unwrap().monic()
    }

    /// Monic squarefree part p / gcd(p, p′); zero stays zero.
    pub fn squarefree_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(&self.derivative());
        if g.is_constant() {
            return self.monic();
        }
        self.div_exact(&g).unwrap().monic()
    }

    /// Resultant of self and other, via the Euclidean remainder sequence.
    pub fn resultant(&self, other: &Poly) -> Rat {
        fn res(f: &Poly, g: &Poly) -> Rat {
            let m = match f.degree() {
                None => return Rat::zero(),
                Some(m) => m,
            };
            let n = match g.degree() {
                None => return Rat::zero(),
                Some(n) => n,
            };
            if n == 0 {
                return pow_rat(&g.coeffs[0], m as u32);
            }
            let (_, r) = f.div_rem(g).unwrap();
            let sign = if (m * n) % 2 == 1 {
                -Rat::one()
            } else {
                Rat::one()
            };
            match r.degree() {
                None => {
                    if n > 0 {
                        Rat::zero()
                    } else {
                        sign
                    }
                }
                Some(rd) => {
                    let lc = g.leading_coeff().unwrap();
                    sign * pow_rat(lc, (m - rd) as u32) * res(g, &r)
                }
            }
        }
        if self.is_zero() || other.is_zero() {
            // Conventions differ for constants; zero is right whenever one
            // argument has positive degree, which is the only case we use.
            return Rat::zero();
        }
        res(self, other)
    }

    /// Clears denominators and the integer content; returns primitive
    /// integer coefficients (ascending) with the original sign pattern.
    pub fn to_int_primitive(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den_lcm / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for v in &ints {
            content = content.gcd(v);
        }
        if content.is_zero() || content.is_one() {
            return ints;
        }
        ints.iter().map(|v| v / &content).collect()
    }

    /// Height bound for rational roots: any x = s/t in lowest terms with
    /// p(x) = 0 has max(|s|,|t|) bounded by this (1 covers the root 0).
    pub fn rational_root_height_bound(&self) -> BigInt {
        let ints = self.to_int_primitive();
        let first_nonzero = ints.iter().find(|c| !c.is_zero());
        let (lo, hi) = match (first_nonzero, ints.last()) {
            (Some(lo), Some(hi)) => (lo.abs(), hi.abs()),
            _ => return BigInt::one(),
        };
        let m = if lo > hi { lo } else { hi };
        if m > BigInt::one() {
            m
        } else {
            BigInt::one()
        }
    }
}

fn pow_rat(base: &Rat, e: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e {
        acc *= base;
    }
    acc
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        Poly::from_coeffs(out)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        Poly::from_coeffs(out)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned_ops {
    ($($trait:ident, $m:ident);*) => {$(
        impl $trait for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { (&self).$m(&rhs) }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly { (&self).$m(rhs) }
        }
    )*};
}
forward_owned_ops!(Add, add; Sub, sub; Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl num_traits::Zero for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
}

impl num_traits::One for Poly {
    fn one() -> Self {
        Poly::one()
    }
    fn is_one(&self) -> bool {
        Poly::is_one(self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = format_rat(c);
            let (sign, mag) = match cs.strip_prefix('-') {
                Some(m) => ("-", m.to_string()),
                None => ("+", cs),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                1 if mag == "1" => write!(f, "x")?,
                1 => write!(f, "{mag}*x")?,
                _ if mag == "1" => write!(f, "x^{i}")?,
                _ => write!(f, "{mag}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat_i;

    #[test]
    fn gcd_examples() {
        // (x^2 - 1, x - 1) -> x - 1
        let a = Poly::from_i64(&[-1, 0, 1]);
        let b = Poly::from_i64(&[-1, 1]);
        assert_eq!(a.gcd(&b), b);
        // gcd with zero is the monic normalization
        let p = Poly::from_i64(&[2, 4]);
        assert_eq!(p.gcd(&Poly::zero()), Poly::from_coeffs(vec![rat_i(1), rat_i(2)]).monic());
        assert_eq!(Poly::zero().gcd(&Poly::zero()), Poly::zero());
        // (x, x + 1) -> 1, resultant -1
        let x = Poly::x();
        let x1 = Poly::from_i64(&[1, 1]);
        assert_eq!(x.gcd(&x1), Poly::one());
        assert_eq!(x.resultant(&x1), rat_i(1));
        assert_eq!(x1.resultant(&x), rat_i(-1));
    }

    #[test]
    fn division_and_bezout() {
        let a = Poly::from_i64(&[2, 0, 1, 3]);
        let b = Poly::from_i64(&[1, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
        let (g, u, v) = a.extended_gcd(&b);
        assert_eq!(&(&u * &a) + &(&v * &b), g);
    }

    #[test]
    fn squarefree_and_lcm() {
        // (x-1)^2 (x+2) -> (x-1)(x+2)
        let p = &(&Poly::from_i64(&[-1, 1]) * &Poly::from_i64(&[-1, 1])) * &Poly::from_i64(&[2, 1]);
        let sf = p.squarefree_part();
        assert_eq!(sf, &Poly::from_i64(&[-1, 1]) * &Poly::from_i64(&[2, 1]));
        let l = Poly::from_i64(&[-1, 1]).lcm(&Poly::from_i64(&[1, 1]));
        assert_eq!(l, Poly::from_i64(&[-1, 0, 1]));
    }

    #[test]
    fn primitive_clearing() {
        let p = Poly::from_coeffs(vec![rat_i(2) / rat_i(3), rat_i(4)]);
        assert_eq!(
            p.to_int_primitive(),
            vec![BigInt::from(1), BigInt::from(6)]
        );
        assert_eq!(p.rational_root_height_bound(), BigInt::from(6));
    }

    #[test]
    fn homogeneous_evaluation() {
        // x^2 + 1 at [a:b], degree 2: a^2 + b^2
        let p = Poly::from_i64(&[1, 0, 1]);
        let v = p.eval_homog(&BigInt::from(3), &BigInt::from(2), 2);
        assert_eq!(v, rat_i(13));
        // homogenized above its degree inserts b factors
        let q = Poly::from_i64(&[1, 1]);
        assert_eq!(q.eval_homog(&BigInt::from(3), &BigInt::from(2), 2), rat_i(10));
    }
}
