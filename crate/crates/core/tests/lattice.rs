use piv_core::asymptotics::{alpha_jk, g_map, lattice, rescale_roots, BulkParams, Regime};
use piv_core::exact_poly::{expected_degree, PolyFamily, PolyTable};
use piv_core::numeric::abs_f64;
use piv_core::rootfind::{count_real_roots, find_roots, find_roots_seeded};
use rug::{Complex, Float};

#[test]
fn g_matches_reference_values() {
    // mpmath at 40 digits
    let cases = [
        (2, 85, 5, "0.3", 0.059_093_664_480_578_24),
        (-4, 85, 5, "-0.5", -0.125_058_389_639_986_72),
        (1, 28, 2, "0.9", 0.091_250_192_582_764_7),
    ];
    for (j, e, n, x, want) in cases {
        let x = Float::with_val(256, Float::parse(x).unwrap());
        let got = g_map(j, e, n, &x).unwrap().to_f64();
        assert!((got - want).abs() < 1e-15, "g_{{{j},{e}}}({x}) = {got}, want {want}");
    }
}

#[test]
fn bulk_lattice_shape() {
    let params = BulkParams::new(40, 5).unwrap();
    assert_eq!(params.e(), 85);
    let lat = lattice(&params, Regime::Bulk { sigma: 0.2 }, 256).unwrap();
    assert_eq!(lat.len(), 5 * 34);
    for p in &lat.entries {
        let mirror = lat.get(-p.j, p.k).expect("mirror point");
        let diff = Complex::with_val(256, mirror - Complex::with_val(256, p.alpha.conj_ref()));
        assert!(abs_f64(&diff) < 1e-60);
    }
}

#[test]
fn roots_agree_across_precisions() {
    let h = PolyTable::global().hermite(7, 4).unwrap();
    let lo = find_roots(&h, 128).unwrap();
    let hi = find_roots(&h, 256).unwrap();
    assert_eq!(lo.len() as i64, expected_degree(PolyFamily::Hermite, 7, 4));
    assert!(lo.is_conjugate_closed() && hi.is_conjugate_closed());
    for z in &lo.roots {
        let nearest = hi.roots.iter().map(|w| abs_f64(&Complex::with_val(256, w - z))).fold(f64::INFINITY, f64::min);
        assert!(nearest < 1e-30, "root {z} moved by {nearest}");
    }
}

#[test]
fn seed_does_not_change_the_roots() {
    let h = PolyTable::global().okamoto(2, -1).unwrap();
    let a = find_roots_seeded(&h, 192, 1).unwrap();
    let b = find_roots_seeded(&h, 192, 99).unwrap();
    for z in &a.roots {
        let nearest = b.roots.iter().map(|w| abs_f64(&Complex::with_val(192, w - z))).fold(f64::INFINITY, f64::min);
        assert!(nearest < 1e-40);
    }
}

#[test]
fn real_roots_agree_with_sturm() {
    for (m, n) in [(5, 3), (6, 2), (4, 5)] {
        let h = PolyTable::global().hermite(m, n).unwrap();
        let roots = find_roots(&h, 256).unwrap();
        assert_eq!(roots.possibly_real(), count_real_roots(&h), "H_{{{m},{n}}}");
    }
}

#[test]
fn trivial_origin_point() {
    // H_{m,n} has a root at 0 iff mn is odd, and α_{0,0} = 0 is then predicted
    let params = BulkParams::new(9, 3).unwrap();
    let a = alpha_jk(0, 0.0, &params, 256).unwrap();
    assert!(a.is_zero());
    let roots = rescale_roots(&find_roots(&PolyTable::global().hermite(9, 3).unwrap(), 256).unwrap(), params.e());
    let nearest = roots.roots.iter().map(abs_f64).fold(f64::INFINITY, f64::min);
    assert!(nearest < 1e-60);
}
