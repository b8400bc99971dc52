//! Exact matrix algebra over rationals embedded in `Q_p`.

mod matrix;
pub mod newton;

pub use matrix::PadicMatrix;
pub use newton::{eigenvalue_valuations, newton_polygon, NewtonPolygon, Segment, Slope, SlopeData};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{rat_valuation, Prime};
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn arb_matrix(p: u64, n: usize) -> impl Strategy<Value = PadicMatrix> {
        let pr = Prime::new(p).unwrap();
        proptest::collection::vec((-40i64..40, 1i64..12, -2i64..=2), n * n).prop_filter_map(
            "singular",
            move |raw| {
                let entries = raw
                    .into_iter()
                    .map(|(a, b, e)| BigRational::new(a.into(), b.into()) * crate::padic::p_power(pr, e))
                    .collect();
                let m = PadicMatrix::new(pr, n, entries).ok()?;
                if m.det() == BigRational::from_integer(0.into()) {
                    None
                } else {
                    Some(m)
                }
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn valuation_sum_is_det_valuation(t in arb_matrix(3, 3)) {
            let s = eigenvalue_valuations(&t).unwrap();
            prop_assert_eq!(s.total_multiplicity(), 3);
            let vdet = rat_valuation(&t.det(), t.prime()).unwrap();
            prop_assert_eq!(s.weighted_sum(), Slope::from_integer(vdet));
        }

        #[test]
        fn inverse_negates(t in arb_matrix(2, 3)) {
            let s = eigenvalue_valuations(&t).unwrap();
            let si = eigenvalue_valuations(&t.inverse().unwrap()).unwrap();
            prop_assert_eq!(si, s.negated());
        }

        #[test]
        fn powers_scale(t in arb_matrix(5, 2), k in 1i64..5) {
            let s = eigenvalue_valuations(&t).unwrap();
            let sk = eigenvalue_valuations(&t.pow(k).unwrap()).unwrap();
            prop_assert_eq!(sk, s.scaled(k));
        }

        #[test]
        fn scalar_multiple_shifts(t in arb_matrix(3, 2), a in 1i64..20, e in -3i64..3) {
            let c = BigRational::from_integer(a.into()) * crate::padic::p_power(t.prime(), e);
            let vc = rat_valuation(&c, t.prime()).unwrap();
            let s = eigenvalue_valuations(&t).unwrap();
            let sc = eigenvalue_valuations(&t.scale(&c)).unwrap();
            prop_assert_eq!(sc, s.shifted(Slope::from_integer(vc)));
        }

        #[test]
        fn op_norm_is_sup_over_sphere(t in arb_matrix(3, 3), xs in proptest::collection::vec((-30i64..30, 1i64..10), 3)) {
            let pr = t.prime();
            let x = crate::padic::PadicVector::new(pr, xs.into_iter().map(|(a, b)| BigRational::new(a.into(), b.into())).collect()).unwrap();
            prop_assume!(!x.is_zero());
            let x = x.normalize_to_sphere().unwrap();
            prop_assert!(t.apply(&x).norm() <= t.op_norm());
            let attained = (0..3).map(|i| t.apply(&crate::padic::PadicVector::basis(pr, 3, i, BigRational::from_integer(1.into()))).norm()).max().unwrap();
            prop_assert_eq!(attained, t.op_norm());
        }

        #[test]
        fn op_norm_submultiplicative(a in arb_matrix(3, 2), b in arb_matrix(3, 2)) {
            let ab = a.mul(&b).op_norm().exponent().unwrap();
            prop_assert!(ab <= a.op_norm().exponent().unwrap() + b.op_norm().exponent().unwrap());
        }
    }
}
