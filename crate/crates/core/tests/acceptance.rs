//! Acceptance suite: one PASS/FAIL line per criterion.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fekete_core::arith::{gq, gq_int, gq_ratio, rat, GaussianRational};
use fekete_core::calibration::{cosh_polynomial, harmonic_measures, robin_constant, solve_r, Green};
use fekete_core::chebyshev::{chebyshev_compose, equioscillation_check, remez_union, sup_norm};
use fekete_core::diophantine::{
    bernstein_fn, fn_volume_mc, kronecker_factorization, totally_in_enumerate, TotallyInSet, DEFAULT_BUDGET,
};
use fekete_core::integerize::{
    integer_lift, pipeline, protected_failure, rouche_certify, zero_localization, PipelineOptions, PipelineSource,
};
use fekete_core::jacobi::{
    jacobi_capacity, naiman_polynomial, spectrum_bands, transfer_trace_polynomial, PeriodicJacobi,
};
use fekete_core::poly::{GaussianIntPoly, RationalPoly, RealPoly};
use fekete_core::potential::{capacity_estimate, CapacityScheme, FeketeOptions};
use fekete_core::sets::BandSet;
use fekete_core::Error;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn bands(e: &[f64]) -> BandSet {
    BandSet::new(e.to_vec()).unwrap()
}

fn interval_capacity() -> Outcome {
    let start = Instant::now();
    let k = BandSet::interval(-1.0, 1.0).unwrap().into();
    let est = capacity_estimate(&k, CapacityScheme::FeketeExtrapolation, 64, &FeketeOptions::default()).map_err(err)?;
    let secs = start.elapsed().as_secs_f64();
    let rel = (est.value - 0.5).abs() / 0.5;
    check(rel <= 0.02, format!("estimate {} off by {:.3}%", est.value, 100.0 * rel))?;
    check(secs < 30.0, format!("took {secs:.1} s"))?;
    Ok(format!("C ≈ {:.5} ({:.2}% off)", est.value, 100.0 * rel))
}

fn jacobi_bands() -> Outcome {
    let j = PeriodicJacobi::from_i64(&[0, 0], &[1, 2]).map_err(err)?;
    let sp = spectrum_bands(&j).map_err(err)?;
    let expect = [-3.0, -1.0, 1.0, 3.0];
    let edge = sp
        .bands
        .endpoints()
        .iter()
        .zip(expect)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    check(sp.bands.r() == 2, "expected two bands")?;
    check(edge <= 1e-10, format!("edge error {edge:e}"))?;
    let cap = jacobi_capacity(&j).map_err(err)?;
    check(cap == 2f64.sqrt(), format!("capacity {cap}"))?;
    Ok(format!("edge error {edge:e}, capacity {cap}"))
}

fn random_rational(rng: &mut ChaCha8Rng, nonzero: bool) -> GaussianRational {
    loop {
        let n = rng.gen_range(-9i64..=9);
        let d = rng.gen_range(1i64..=7);
        if !nonzero || n != 0 {
            return gq_ratio(n, d);
        }
    }
}

fn naiman_trace() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..20 {
        let r = 2 + case % 5;
        let a: Vec<_> = (0..r).map(|_| random_rational(&mut rng, false)).collect();
        let b: Vec<_> = (0..r).map(|_| random_rational(&mut rng, true)).collect();
        let j = PeriodicJacobi::from_exact(a, b).map_err(err)?;
        let np = naiman_polynomial(&j).map_err(err)?;
        let trace = transfer_trace_polynomial(&j).map_err(err)?;
        check(np.p_tilde == trace, format!("instance {case} (r = {r}) differs"))?;
        check(np.p == trace.scale(&np.modulus), format!("instance {case}: P != B trace"))?;
    }
    Ok("20 instances, r = 2..6, exact equality".into())
}

fn chebyshev_composition() -> Outcome {
    let j = PeriodicJacobi::from_i64(&[0, 0], &[1, 2]).map_err(err)?;
    let e = bands(&[-3.0, -1.0, 1.0, 3.0]);
    let mut worst_norm: f64 = 0.0;
    let mut worst_remez: f64 = 0.0;
    for n in 1..=8usize {
        let q = chebyshev_compose(&j, n).map_err(err)?.to_real_poly();
        let target = 2.0 * 2f64.powi(n as i32);
        let (norm, _) = sup_norm(&|x| q.eval(x), &e, 400);
        let rel = (norm - target).abs() / target;
        worst_norm = worst_norm.max(rel);
        check(rel <= 1e-8, format!("n = {n}: norm {norm} vs {target}"))?;
        let rep = equioscillation_check(&q, &e, 40 * n).map_err(err)?;
        check(
            rep.alternation_count > 2 * n,
            format!("n = {n}: {} alternation points", rep.alternation_count),
        )?;
        let remez = remez_union(&e, 2 * n, 200).map_err(err)?;
        let diff = q.max_coeff_diff(&remez);
        worst_remez = worst_remez.max(diff);
        check(diff <= 1e-6, format!("n = {n}: remez differs by {diff:e}"))?;
    }
    Ok(format!("norm rel err ≤ {worst_norm:.1e}, remez diff ≤ {worst_remez:.1e}"))
}

fn random_band_set(rng: &mut ChaCha8Rng) -> BandSet {
    let r = rng.gen_range(2..=3);
    let mut x = rng.gen_range(-3.0..0.0);
    let mut ends = Vec::new();
    for _ in 0..2 * r {
        ends.push(x);
        x += rng.gen_range(0.05..2.0);
    }
    bands(&ends)
}

fn calibration() -> Outcome {
    let sym = bands(&[-3.0, -1.0, 1.0, 3.0]);
    let d = solve_r(&sym).map_err(err)?;
    check(d.lambda[0].abs() <= 1e-9, format!("lambda {}", d.lambda[0]))?;
    let h = harmonic_measures(&sym).map_err(err)?;
    check(
        h.omega.iter().all(|w| (w - 0.5).abs() <= 1e-9),
        format!("omega {:?}", h.omega),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let e = random_band_set(&mut rng);
        let h = harmonic_measures(&e).map_err(err)?;
        worst = worst.max((h.omega.iter().sum::<f64>() - 1.0).abs());
    }
    check(worst <= 1e-10, format!("sum of omega off by {worst:e}"))?;
    let c1 = cosh_polynomial(&bands(&[-2.0, 2.0]), 1).map_err(err)?;
    let d1 = c1.f.max_coeff_diff(&RealPoly::new(vec![0.0, 0.5]));
    let c2 = cosh_polynomial(&sym, 2).map_err(err)?;
    let d2 = c2.f.max_coeff_diff(&RealPoly::new(vec![-1.25, 0.0, 0.25]));
    check(d1 <= 1e-8 && d2 <= 1e-8, format!("cosh fits off by {d1:e}, {d2:e}"))?;
    Ok(format!("Σω error ≤ {worst:.1e} on 200 sets, cosh fits {d1:.1e}, {d2:.1e}"))
}

fn green_robin() -> Outcome {
    let sym = bands(&[-3.0, -1.0, 1.0, 3.0]);
    let robin = robin_constant(&sym).map_err(err)?;
    let expect = -0.5 * 2f64.ln();
    check((robin - expect).abs() <= 1e-6, format!("robin {robin}"))?;
    let mut worst_edge: f64 = 0.0;
    let mut worst_cosh: f64 = 0.0;
    for (a, b) in [
        (vec![0], vec![1]),
        (vec![0, 0], vec![1, 2]),
        (vec![1, -1], vec![2, 1]),
        (vec![0, 1, -1], vec![1, 1, 2]),
        (vec![2, 0, 0], vec![1, 3, 1]),
    ] {
        let j = PeriodicJacobi::from_i64(&a, &b).map_err(err)?;
        let sp = spectrum_bands(&j).map_err(err)?;
        let np = naiman_polynomial(&j).map_err(err)?;
        let g = Green::new(&sp.bands).map_err(err)?;
        for &x in sp.bands.endpoints() {
            worst_edge = worst_edge.max(g.g(Complex64::new(x, 0.0)).map_err(err)?.abs());
        }
        let (lo, hi) = sp.bands.hull();
        let (mid, rad) = (0.5 * (lo + hi), 0.5 * (hi - lo) + 0.75);
        for k in 0..50 {
            let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.3) / 50.0;
            let z = Complex64::new(mid + rad * th.cos(), rad * th.sin());
            let lhs = 2.0 * (j.r() as f64 * g.big_g(z).map_err(err)?).cosh();
            let rhs = np.p_tilde.eval(z);
            worst_cosh = worst_cosh.max((lhs - rhs).norm() / rhs.norm().max(1.0));
        }
    }
    check(worst_edge <= 1e-8, format!("g at an endpoint is {worst_edge:e}"))?;
    check(worst_cosh <= 1e-8, format!("2cosh(rG) vs discriminant off by {worst_cosh:e}"))?;
    Ok(format!(
        "robin {robin:.9}, edge g ≤ {worst_edge:.1e}, 2cosh(rG) rel err ≤ {worst_cosh:.1e}"
    ))
}

fn random_monic(rng: &mut ChaCha8Rng) -> (RationalPoly, i64) {
    let k = rng.gen_range(1..=3);
    let m = rng.gen_range(1i64..=6);
    let mut c: Vec<GaussianRational> = (0..k)
        .map(|_| gq(rat(rng.gen_range(-2 * m..=2 * m), m), rat(rng.gen_range(-m..=m), m)))
        .collect();
    c.push(gq_int(1));
    (RationalPoly::new(c), m)
}

/// `P^c + Σ λ_j^{(i)} z^{K-j} P^{c-a-i}` rebuilt independently.
fn rebuild(p: &RationalPoly, a: usize, c: usize, lambdas: &[Vec<GaussianRational>]) -> RationalPoly {
    let k = p.degree();
    let mut g = p.pow(c as u32).unwrap();
    for (i, row) in lambdas.iter().enumerate() {
        let power = p.pow((c - a - i - 1) as u32).unwrap();
        for (j, l) in row.iter().enumerate() {
            let term = &RationalPoly::monomial(l.clone(), k - j - 1) * &power;
            g = &g + &term;
        }
    }
    g
}

fn lift_correctness() -> Outcome {
    let p = RationalPoly::from_ratios(&[(-1, 2), (1, 1)]);
    let cert = integer_lift(&p, 1, 2, 4096).map_err(err)?;
    check(cert.gamma == GaussianIntPoly::from_i64(&[0, -1, 1]), "z - 1/2 lift is not z^2 - z")?;
    check(cert.lambdas == vec![vec![gq_ratio(-1, 4)]], "λ is not -1/4")?;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut lifted, mut refused) = (0, 0);
    let mut produced = 0;
    while produced < 50 {
        let (p, m) = random_monic(&mut rng);
        let k = p.degree();
        let c = if rng.gen_bool(0.5) {
            (m as usize * rng.gen_range(1..=4)).clamp(2, 24)
        } else {
            rng.gen_range(2..=24)
        };
        let a = rng.gen_range(1..c.min(4));
        produced += 1;
        let protected_ok = protected_failure(&p, a, c).map_err(err)?.is_none();
        match integer_lift(&p, a, c, 4096) {
            Ok(cert) => {
                check(protected_ok, "lift succeeded despite a failing precondition")?;
                let g = cert.gamma.to_rational();
                check(g.has_gaussian_integer_coeffs(), "non-integral Γ")?;
                let diff = &g - &p.pow(c as u32).unwrap();
                check(
                    diff.is_zero() || diff.degree() < k * (c - a),
                    format!("deg(Γ - P^c) = {} not below {}", diff.degree(), k * (c - a)),
                )?;
                check(rebuild(&p, a, c, &cert.lambdas) == g, "Γ does not match its λ table")?;
                check(
                    cert.lambdas.iter().flatten().all(|l| {
                        let z = fekete_core::arith::GaussianRationalExt::to_c64(l);
                        z.norm() <= 0.5f64.sqrt() + 1e-15
                    }),
                    "some |λ| exceeds √2/2",
                )?;
                lifted += 1;
            }
            Err(Error::ProtectedCoefficient { .. }) => {
                check(!protected_ok, "precondition held but the lift refused")?;
                refused += 1;
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    check(lifted >= 5, format!("only {lifted} random instances satisfied the precondition"))?;
    Ok(format!("{lifted} exact lifts, {refused} refused by the precondition"))
}

fn rouche() -> Outcome {
    let p = RationalPoly::from_ratios(&[(-1, 2), (1, 1)]);
    let cert = integer_lift(&p, 1, 2, 4096).map_err(err)?;
    let c = rouche_certify(&p, &cert, 2.0, 512).map_err(err)?;
    let margin = c.rouche_margin.unwrap();
    check((margin - 1.0 / 16.0).abs() <= 1e-12, format!("margin {margin}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut certified = 0;
    let mut tried = 0;
    while tried < 40 {
        let (p, m) = random_monic(&mut rng);
        let c = (m as usize * rng.gen_range(1..=3)).max(2);
        if protected_failure(&p, 1, c).map_err(err)?.is_some() {
            continue;
        }
        tried += 1;
        let lift = integer_lift(&p, 1, c, 4096).map_err(err)?;
        for r2 in [1.5, 2.0, 3.0] {
            let cert = rouche_certify(&p, &lift, r2, 512).map_err(err)?;
            if cert.certified {
                let loc = zero_localization(&cert, &p, r2, None).map_err(err)?;
                check(loc.roots_inside == Some(p.degree() * c), "roots missing from the lemniscate")?;
                certified += 1;
            }
        }
    }
    // the perturbed symmetric pair at degree 2 needs c = 49
    let j = PeriodicJacobi::from_exact(vec![gq_int(0), gq_int(0)], vec![gq_int(1), gq_ratio(15, 7)]).map_err(err)?;
    let p = naiman_polynomial(&j).map_err(err)?.p;
    let lift = integer_lift(&p, 1, 49, 4096).map_err(err)?;
    let cert = rouche_certify(&p, &lift, 1.25, 512).map_err(err)?;
    check(cert.certified, "degree-2 perturbed lift is not certified")?;
    let loc = zero_localization(&cert, &p, 1.25, None).map_err(err)?;
    check(loc.roots_inside == Some(98), "perturbed lift roots escape")?;
    certified += 1;
    Ok(format!("margin {margin:.3e}, {certified} certified lifts localized"))
}

fn equidistribution() -> Outcome {
    let rep = pipeline(&PipelineSource::Bands(bands(&[-2.0, 2.0])), &PipelineOptions::default()).map_err(err)?;
    let arcsine = [0.0, 2.0, 0.0, 6.0];
    let ref_err = rep
        .reference_moments
        .iter()
        .zip(arcsine)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    check(
        rep.reference_moments.len() == 4 && ref_err <= 1e-12,
        format!("reference moments {:?}", rep.reference_moments),
    )?;
    let last = rep.steps.iter().find(|s| s.degree == 64).ok_or("no degree-64 step")?;
    check(last.certificate.gamma.to_rational() == last.p_n, "degree-64 lift is not the identity")?;
    check(last.moment_distance <= 0.05, format!("degree 64 distance {}", last.moment_distance))?;
    let d64 = last.moment_distance;
    let rep = pipeline(
        &PipelineSource::Bands(bands(&[-3.0, -1.0, 1.0, 3.0])),
        &PipelineOptions::default(),
    )
    .map_err(err)?;
    for s in &rep.steps {
        let deg = s.certificate.gamma.degree();
        check(
            s.band_counts == vec![deg / 2, deg / 2],
            format!("degree {deg}: band counts {:?}", s.band_counts),
        )?;
    }
    let seq: Vec<f64> = rep
        .steps
        .iter()
        .filter(|s| (8..=64).contains(&s.degree))
        .map(|s| s.moment_distance)
        .collect();
    check(
        seq.windows(2).all(|w| w[1] <= w[0] + 1e-12),
        format!("moment distances increase: {seq:?}"),
    )?;
    Ok(format!(
        "[-2,2] degree-64 distance {d64:.1e}; ±[1,3] halves hold for {} degrees",
        rep.steps.len()
    ))
}

fn diophantine() -> Outcome {
    let mut boundary = 0;
    for n in 1..=4 {
        for p in totally_in_enumerate(&TotallyInSet::Disk(1.0), n, DEFAULT_BUDGET).map_err(err)? {
            let gp = GaussianIntPoly::from_i64(&p);
            let zs = fekete_core::roots::roots_gint(&gp, 1e-12).map_err(err)?;
            let nonzero: Vec<_> = zs.iter().filter(|z| z.norm() > 1e-6).collect();
            if nonzero.iter().all(|z| z.norm() >= 1.0 - 1e-9 && z.norm() <= 1.0 + 1e-9) {
                check(kronecker_factorization(&p).is_some(), format!("{p:?} is not cyclotomic"))?;
                boundary += 1;
            }
        }
    }
    let half = BandSet::interval(-0.5, 0.5).unwrap();
    for n in 1..=4 {
        let out = totally_in_enumerate(&TotallyInSet::Bands(half.clone()), n, DEFAULT_BUDGET).map_err(err)?;
        let mut zn = vec![0i64; n + 1];
        zn[n] = 1;
        check(out == vec![zn], format!("degree {n}: {out:?}"))?;
    }
    let v = fn_volume_mc(&half.clone().into(), 1, 400_000, 0).map_err(err)?;
    let rel = (v.volume - 4.0).abs() / 4.0;
    check(rel <= 0.05, format!("volume {}", v.volume))?;
    for n in 1..=16i64 {
        let p = bernstein_fn(|x| x * x, n as usize).map_err(err)?;
        let expect = RationalPoly::from_ratios(&[(0, 1), (1, n), (n - 1, n)]);
        check(p == expect, format!("Bernstein of x^2 wrong at n = {n}"))?;
    }
    Ok(format!(
        "{boundary} unit-circle polynomials all cyclotomic, volume {:.3} ({:.2}% off)",
        v.volume,
        100.0 * rel
    ))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("interval capacity", interval_capacity),
        ("jacobi bands", jacobi_bands),
        ("discriminant vs transfer trace", naiman_trace),
        ("chebyshev composition", chebyshev_composition),
        ("calibration", calibration),
        ("green function and robin constant", green_robin),
        ("lift correctness", lift_correctness),
        ("rouche certification", rouche),
        ("equidistribution pipeline", equidistribution),
        ("diophantine searches", diophantine),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail} [{secs:.1} s]", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL {name}: {why} [{secs:.1} s]", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
