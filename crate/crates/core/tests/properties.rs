//! Property tests for the exact-algebra invariants: gcd divisibility, the
//! field axioms of ℚ(x), determinant multiplicativity, Smith normal form
//! invariants, and cocycle composition.

use proptest::prelude::*;
use skewlin::algebra::{rat, FuncMat, Mat, Poly, PolyMat, Rat, RatFunc};
use skewlin::projective::{BaseMap, ProjPoint};
use skewlin::skew::SkewSystem;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(small_rat(), 0..=max_deg + 1).prop_map(Poly::from_coeffs)
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc(max_deg: usize) -> impl Strategy<Value = RatFunc> {
    (poly(max_deg), nonzero_poly(max_deg))
        .prop_map(|(num, den)| RatFunc::new(num, den).unwrap())
}

fn func_mat(n: usize, max_deg: usize) -> impl Strategy<Value = FuncMat> {
    prop::collection::vec(ratfunc(max_deg), n * n).prop_map(move |data| Mat::new(n, n, data))
}

fn poly_mat(rows: usize, cols: usize, max_deg: usize) -> impl Strategy<Value = PolyMat> {
    prop::collection::vec(poly(max_deg), rows * cols)
        .prop_map(move |data| Mat::new(rows, cols, data))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gcd_divides_both_and_any_common_divisor_divides_it(
        a in poly(4),
        b in poly(4),
        c in nonzero_poly(2),
    ) {
        let g = a.gcd(&b);
        if !g.is_zero() {
            prop_assert!(a.div_rem(&g).unwrap().1.is_zero());
            prop_assert!(b.div_rem(&g).unwrap().1.is_zero());
        }
        // c divides a*c and b*c, so it must divide gcd(a*c, b*c)
        let g2 = (&a * &c).gcd(&(&b * &c));
        if !g2.is_zero() {
            prop_assert!(g2.div_rem(&c).unwrap().1.is_zero());
        }
    }

    #[test]
    fn ratfunc_field_axioms(a in ratfunc(3), b in ratfunc(3), c in ratfunc(3)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.recip().unwrap(), RatFunc::from_poly(Poly::one()));
        }
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn det_is_multiplicative(a in func_mat(3, 1), b in func_mat(3, 1)) {
        let lhs = a.mul(&b).det().unwrap();
        let rhs = &a.det().unwrap() * &b.det().unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn det_fraction_free_matches_field_elimination(m in func_mat(3, 2)) {
        prop_assert_eq!(m.det().unwrap(), m.det_field().unwrap());
    }

    #[test]
    fn snf_invariants(m in poly_mat(3, 3, 2)) {
        let r = skewlin::algebra::smith_normal_form(&m);
        // U*M*V = D exactly
        prop_assert_eq!(r.u.mul(&m).mul(&r.v), r.d.clone());
        // unimodular transforms
        for t in [&r.u, &r.v] {
            let det = t.bareiss_det().unwrap();
            prop_assert!(det.is_constant() && !det.is_zero());
        }
        // diagonal, monic-or-zero, divisibility chain
        let diag = r.diagonal();
        for i in 0..r.d.rows() {
            for j in 0..r.d.cols() {
                if i != j {
                    prop_assert!(r.d.at(i, j).is_zero());
                }
            }
        }
        for i in 0..diag.len() {
            if let Some(lc) = diag[i].leading_coeff() {
                prop_assert_eq!(lc, &Rat::from_integer(1.into()));
            }
            if i + 1 < diag.len() && !diag[i].is_zero() && !diag[i + 1].is_zero() {
                prop_assert!(diag[i + 1].div_rem(&diag[i]).unwrap().1.is_zero());
            }
            if diag[i].is_zero() && i + 1 < diag.len() {
                prop_assert!(diag[i + 1].is_zero());
            }
        }
    }

    #[test]
    fn base_iteration_semigroup(m in 0usize..4, n in 0usize..4, a in -4i64..=4) {
        // degree-1 maps keep heights small for any m, n
        let g = BaseMap::from_polys(Poly::from_i64(&[1, 2]), Poly::one()).unwrap();
        let pt = ProjPoint::from_int(a);
        let lhs = g.iterate(&pt, m + n);
        let rhs = g.iterate(&g.iterate(&pt, m), n);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn symbolic_cocycle_evaluates_to_numeric(
        mdata in prop::collection::vec(-3i64..=3, 4),
        x0 in 2i64..=5,
        n in 0usize..=3,
    ) {
        let entries: Vec<RatFunc> = mdata
            .iter()
            .map(|&c| {
                // alternate constants and multiples of x for variety
                if c % 2 == 0 {
                    RatFunc::from_poly(Poly::from_i64(&[c]))
                } else {
                    RatFunc::from_poly(Poly::from_i64(&[0, c]))
                }
            })
            .collect();
        let sys = SkewSystem::new(
            BaseMap::from_polys(Poly::from_i64(&[0, 0, 1]), Poly::one()).unwrap(),
            Mat::new(2, 2, entries),
        )
        .unwrap();
        let alpha = ProjPoint::from_int(x0);
        let sym = sys.symbolic_cocycle(n, 4096).unwrap();
        let direct = sys.cocycle(&alpha, n).unwrap();
        let evaled = sym.eval_affine(&Rat::from_integer(x0.into())).unwrap();
        prop_assert_eq!(evaled, direct);
    }
}
