use num_complex::Complex64;
use proptest::prelude::*;

use fekete_core::arith::gq_ratio;
use fekete_core::calibration::{band_shares, harmonic_measures, robin_constant};
use fekete_core::integerize::{integer_lift, protected_failure};
use fekete_core::jacobi::{jacobi_capacity, naiman_polynomial, spectrum_bands, PeriodicJacobi};
use fekete_core::poly::RationalPoly;
use fekete_core::sets::BandSet;

fn band_set() -> impl Strategy<Value = BandSet> {
    (2usize..=3, -2.0f64..0.0, prop::collection::vec(0.1f64..1.5, 6)).prop_map(|(r, x0, steps)| {
        let mut x = x0;
        let mut e = Vec::new();
        for s in steps.into_iter().take(2 * r) {
            e.push(x);
            x += s;
        }
        BandSet::new(e).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn capacity_scales_linearly(e in band_set(), scale in 0.3f64..3.0, shift in -2.0f64..2.0) {
        let c = robin_constant(&e).unwrap();
        let moved = e.affine(scale, shift).unwrap();
        let c2 = robin_constant(&moved).unwrap();
        prop_assert!((c2 - (c - scale.ln())).abs() < 1e-8, "{c} {c2}");
    }

    #[test]
    fn band_shares_partition_m(e in band_set(), m in 3usize..12) {
        let w = harmonic_measures(&e).unwrap().omega;
        if let Ok(k) = band_shares(&w, m) {
            prop_assert_eq!(k.iter().sum::<usize>(), m);
            prop_assert!(k.iter().all(|&x| x >= 1));
        }
    }

    #[test]
    fn robin_matches_jacobi_formula(a in prop::collection::vec(-2i64..=2, 2), b in prop::collection::vec(1i64..=3, 2)) {
        let j = PeriodicJacobi::from_i64(&a, &b).unwrap();
        let sp = spectrum_bands(&j).unwrap();
        prop_assume!(!sp.bands.has_closed_gaps() && sp.bands.r() == 2);
        let cap = jacobi_capacity(&j).unwrap();
        let robin = robin_constant(&sp.bands).unwrap();
        prop_assert!((robin + cap.ln()).abs() < 1e-7, "{robin} {cap}");
    }

    #[test]
    fn discriminant_is_two_cosh_on_spectrum(a in prop::collection::vec(-2i64..=2, 3), b in prop::collection::vec(1i64..=3, 3)) {
        let j = PeriodicJacobi::from_i64(&a, &b).unwrap();
        let np = naiman_polynomial(&j).unwrap();
        let sp = spectrum_bands(&j).unwrap();
        for &x in sp.bands.endpoints() {
            let v = np.p_tilde.eval(Complex64::new(x, 0.0)).re;
            prop_assert!((v.abs() - 2.0).abs() < 1e-8, "{v} at {x}");
        }
    }

    #[test]
    fn lifts_keep_leading_block(n0 in -4i64..=4, n1 in -4i64..=4, d in 1i64..=4, c in 2usize..=12) {
        let p = RationalPoly::new(vec![gq_ratio(n0, d), gq_ratio(n1, d), gq_ratio(1, 1)]);
        prop_assume!(protected_failure(&p, 1, c).unwrap().is_none());
        let cert = integer_lift(&p, 1, c, 4096).unwrap();
        let pc = p.pow(c as u32).unwrap();
        let diff = &cert.gamma.to_rational() - &pc;
        prop_assert!(diff.is_zero() || diff.degree() < 2 * (c - 1));
        prop_assert_eq!(cert.gamma.degree(), 2 * c);
    }
}
