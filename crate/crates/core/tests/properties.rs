use piv_core::asymptotics::{f_inverse, f_map};
use piv_core::exact_poly::{expected_degree, PolyFamily, PolyTable};
use piv_core::rootfind::{count_real_roots, find_roots};
use proptest::prelude::*;
use rug::Float;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn f_inverse_undoes_f(x in -0.999f64..0.999) {
        let x = Float::with_val(192, x);
        let back = f_inverse(&f_map(&x).unwrap()).unwrap();
        prop_assert!(Float::with_val(192, &back - &x).abs().to_f64() < 1e-40);
    }

    #[test]
    fn hermite_roots_are_simple_and_closed(m in 1i64..9, n in 1i64..7) {
        let h = PolyTable::global().hermite(m, n).unwrap();
        let roots = find_roots(&h, 128).unwrap();
        prop_assert_eq!(roots.len() as i64, expected_degree(PolyFamily::Hermite, m, n));
        prop_assert!(roots.is_conjugate_closed());
        prop_assert_eq!(roots.possibly_real(), count_real_roots(&h));
    }

    #[test]
    fn okamoto_roots_are_simple_and_closed(m in -4i64..5, n in -4i64..5) {
        let q = PolyTable::global().okamoto(m, n).unwrap();
        let roots = find_roots(&q, 128).unwrap();
        prop_assert_eq!(roots.len() as i64, expected_degree(PolyFamily::Okamoto, m, n));
        prop_assert!(roots.is_conjugate_closed());
    }
}
