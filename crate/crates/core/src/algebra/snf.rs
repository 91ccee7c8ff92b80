//! Smith normal form over the principal ideal domain ℚ[x].
//!
//! The constructive counterpart of triviality of vector bundles on the
//! affine line: U·M·V = D with U, V unimodular over ℚ[x] (constant nonzero
//! determinant) and D diagonal with each entry dividing the next, monic or
//! zero.

use crate::algebra::matrix::PolyMat;
use crate::algebra::poly::Poly;
use num_traits::One;

#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: PolyMat,
    pub d: PolyMat,
    pub v: PolyMat,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<Poly> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.at(i, i).clone())
            .collect()
    }
}

/// Pivot rule: nonzero entry of minimal degree in the working submatrix,
/// ties broken by row-major order, so the output is deterministic.
pub fn smith_normal_form(m: &PolyMat) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = m.clone();
    let mut u = PolyMat::identity(rows);
    let mut v = PolyMat::identity(cols);

    let mut k = 0;
    while k < rows.min(cols) {
        let Some((pi, pj)) = find_pivot(&w, k) else {
            break; // remaining submatrix is zero
        };
        swap_rows(&mut w, &mut u, k, pi);
        swap_cols(&mut w, &mut v, k, pj);

        'reduce: loop {
            // Clear column k with division by the pivot; a nonzero remainder
            // becomes the new, smaller-degree pivot.
            for i in k + 1..rows {
                if w.at(i, k).is_zero() {
                    continue;
                }
                let (q, r) = w.at(i, k).div_rem(w.at(k, k)).unwrap();
                row_sub(&mut w, &mut u, i, k, &q);
                if !r.is_zero() {
                    swap_rows(&mut w, &mut u, k, i);
                    continue 'reduce;
                }
            }
            // Same for row k using column operations.
            for j in k + 1..cols {
                if w.at(k, j).is_zero() {
                    continue;
                }
                let (q, r) = w.at(k, j).div_rem(w.at(k, k)).unwrap();
                col_sub(&mut w, &mut v, j, k, &q);
                if !r.is_zero() {
                    swap_cols(&mut w, &mut v, k, j);
                    continue 'reduce;
                }
            }
            // Divisibility: the pivot must divide the rest of the submatrix.
            let offender = (k + 1..rows)
                .flat_map(|i| (k + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| {
                    !w.at(i, j).is_zero()
                        && !w.at(i, j).div_rem(w.at(k, k)).unwrap().1.is_zero()
                });
            match offender {
                Some((i, _)) => {
                    row_add(&mut w, &mut u, k, i);
                    continue 'reduce;
                }
                None => break 'reduce,
            }
        }
        k += 1;
    }

    // Monic normalization of the diagonal via row scalings.
    for i in 0..rows.min(cols) {
        if let Some(lc) = w.at(i, i).leading_coeff() {
            if !lc.is_one() {
                let inv = lc.clone().recip();
                for j in 0..cols {
                    let s = w.at(i, j).scale(&inv);
                    w.set(i, j, s);
                }
                for j in 0..rows {
                    let s = u.at(i, j).scale(&inv);
                    u.set(i, j, s);
                }
            }
        }
    }

    SnfResult { u, d: w, v }
}

fn find_pivot(w: &PolyMat, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for i in k..w.rows() {
        for j in k..w.cols() {
            if let Some(deg) = w.at(i, j).degree() {
                if best.map_or(true, |(bd, _, _)| deg < bd) {
                    best = Some((deg, i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn swap_rows(w: &mut PolyMat, u: &mut PolyMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..w.cols() {
        let x = w.at(a, j).clone();
        let y = w.at(b, j).clone();
        w.set(a, j, y);
        w.set(b, j, x);
    }
    for j in 0..u.cols() {
        let x = u.at(a, j).clone();
        let y = u.at(b, j).clone();
        u.set(a, j, y);
        u.set(b, j, x);
    }
}

fn swap_cols(w: &mut PolyMat, v: &mut PolyMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..w.rows() {
        let x = w.at(i, a).clone();
        let y = w.at(i, b).clone();
        w.set(i, a, y);
        w.set(i, b, x);
    }
    for i in 0..v.rows() {
        let x = v.at(i, a).clone();
        let y = v.at(i, b).clone();
        v.set(i, a, y);
        v.set(i, b, x);
    }
}

/// row_i -= q·row_k on w, mirrored on u.
fn row_sub(w: &mut PolyMat, u: &mut PolyMat, i: usize, k: usize, q: &Poly) {
    if q.is_zero() {
        return;
    }
    for j in 0..w.cols() {
        let val = w.at(i, j) - &(q * w.at(k, j));
        w.set(i, j, val);
    }
    for j in 0..u.cols() {
        let val = u.at(i, j) - &(q * u.at(k, j));
        u.set(i, j, val);
    }
}

/// row_k += row_i on w, mirrored on u.
fn row_add(w: &mut PolyMat, u: &mut PolyMat, k: usize, i: usize) {
    for j in 0..w.cols() {
        let val = w.at(k, j) + w.at(i, j);
        w.set(k, j, val);
    }
    for j in 0..u.cols() {
        let val = u.at(k, j) + u.at(i, j);
        u.set(k, j, val);
    }
}

/// col_j -= q·col_k on w, mirrored on v.
fn col_sub(w: &mut PolyMat, v: &mut PolyMat, j: usize, k: usize, q: &Poly) {
    if q.is_zero() {
        return;
    }
    for i in 0..w.rows() {
        let val = w.at(i, j) - &(q * w.at(i, k));
        w.set(i, j, val);
    }
    for i in 0..v.rows() {
        let val = v.at(i, j) - &(q * v.at(i, k));
        v.set(i, j, val);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::Mat;

    fn pm(rows: Vec<Vec<Poly>>) -> PolyMat {
        Mat::from_rows(rows).unwrap()
    }

    /// U·M·V = D, diagonal chain, unimodular transforms.
    pub(crate) fn verify(m: &PolyMat, r: &SnfResult) {
        let umv = r.u.mul(m).mul(&r.v);
        assert_eq!(umv, r.d, "U*M*V != D");
        for (side, t) in [("U", &r.u), ("V", &r.v)] {
            let det = t.bareiss_det().unwrap();
            assert!(
                det.is_constant() && !det.is_zero(),
                "{side} determinant not a nonzero constant: {det}"
            );
        }
        let diag = r.diagonal();
        for i in 0..diag.len() {
            for j in 0..r.d.rows() {
                for k in 0..r.d.cols() {
                    if j != k && (j == i || k == i) {
                        assert!(r.d.at(j, k).is_zero(), "D not diagonal");
                    }
                }
            }
            assert!(
                diag[i].is_zero() || diag[i].leading_coeff().unwrap().is_one(),
                "diagonal entry not monic or zero"
            );
            if i + 1 < diag.len() && !diag[i].is_zero() {
                if diag[i + 1].is_zero() {
                    continue;
                }
                let (_, rem) = diag[i + 1].div_rem(&diag[i]).unwrap();
                assert!(rem.is_zero(), "divisibility chain broken at {i}");
            }
            if diag[i].is_zero() && i + 1 < diag.len() {
                assert!(diag[i + 1].is_zero(), "zero before nonzero on diagonal");
            }
        }
    }

    #[test]
    fn identity_is_fixed() {
        let m = PolyMat::identity(3);
        let r = smith_normal_form(&m);
        verify(&m, &r);
        assert_eq!(r.d, PolyMat::identity(3));
        assert_eq!(r.u, PolyMat::identity(3));
        assert_eq!(r.v, PolyMat::identity(3));
    }

    #[test]
    fn rank_one_example() {
        // [[x, x^2], [1, x]]: unit entry, zero determinant -> diag(1, 0)
        let m = pm(vec![
            vec![Poly::x(), Poly::monomial(crate::algebra::rat::rat_i(1), 2)],
            vec![Poly::one(), Poly::x()],
        ]);
        let r = smith_normal_form(&m);
        verify(&m, &r);
        assert_eq!(r.diagonal(), vec![Poly::one(), Poly::zero()]);
    }

    #[test]
    fn diagonal_chain_kept() {
        let m = pm(vec![
            vec![Poly::x(), Poly::zero()],
            vec![Poly::zero(), Poly::monomial(crate::algebra::rat::rat_i(1), 2)],
        ]);
        let r = smith_normal_form(&m);
        verify(&m, &r);
        assert_eq!(
            r.diagonal(),
            vec![Poly::x(), Poly::monomial(crate::algebra::rat::rat_i(1), 2)]
        );
    }

    #[test]
    fn needs_divisibility_fix() {
        // diag(x, x+1): gcd 1, lcm x(x+1) -> diag(1, x^2+x)
        let m = pm(vec![
            vec![Poly::x(), Poly::zero()],
            vec![Poly::zero(), Poly::from_i64(&[1, 1])],
        ]);
        let r = smith_normal_form(&m);
        verify(&m, &r);
        assert_eq!(
            r.diagonal(),
            vec![Poly::one(), Poly::from_i64(&[0, 1, 1])]
        );
    }

    #[test]
    fn rectangular_shapes() {
        let m = pm(vec![vec![Poly::x(), Poly::one(), Poly::x()]]);
        let r = smith_normal_form(&m);
        verify(&m, &r);
        assert_eq!(r.diagonal(), vec![Poly::one()]);
        let m2 = m.transpose();
        let r2 = smith_normal_form(&m2);
        verify(&m2, &r2);
    }
}
