use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Value};

use fekete_core::arith::{format_gaussian_rational, parse_gaussian_rational, rat};
use fekete_core::calibration::{calibrate, Green};
use fekete_core::chebyshev::{chebyshev_compose, equioscillation_check, monic_chebyshev_interval, remez_union};
use fekete_core::diophantine::{
    bernstein, fn_volume_mc, kronecker_factorization, nearest_conjugate_set, small_norm_search, totally_in_enumerate,
    CoeffBox, TotallyInSet,
};
use fekete_core::integerize::{
    best_lift, integer_lift, minimal_c, pipeline, rouche_certify, zero_localization, LiftSearch, PipelineOptions,
    PipelineSource,
};
use fekete_core::jacobi::{jacobi_capacity, naiman_polynomial, spectrum_bands, PeriodicJacobi};
use fekete_core::poly::{RationalPoly, RealPoly};
use fekete_core::potential::{capacity_estimate, fekete_points, CapacityEstimate, CapacityScheme, FeketeOptions};
use fekete_core::sets::{BandSet, CompactSet, PointCloud};

use crate::args::{Cli, Command, Format, JacobiArg, Scheme, SetArgs};
use crate::Failure;

pub struct Output {
    /// `(file name, contents)` written under the output directory.
    pub files: Vec<(String, String)>,
    /// Extra fields of the one-line summary.
    pub summary: Value,
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_json(&text)
}

fn parse_json(text: &str) -> Result<Value, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::invalid(format!("malformed JSON: {e}")))
}

fn points_from_json(v: &Value) -> Result<Vec<Complex64>, Failure> {
    let arr = v.as_array().ok_or_else(|| Failure::invalid("expected an array of points"))?;
    arr.iter()
        .map(|p| match p {
            Value::Number(x) => x.as_f64().map(|x| Complex64::new(x, 0.0)),
            Value::Array(xy) if xy.len() == 2 => match (xy[0].as_f64(), xy[1].as_f64()) {
                (Some(re), Some(im)) => Some(Complex64::new(re, im)),
                _ => None,
            },
            _ => None,
        })
        .map(|z| z.ok_or_else(|| Failure::invalid(format!("bad point in {v}"))))
        .collect()
}

impl SetArgs {
    fn given(&self) -> bool {
        self.interval.is_some() || self.bands.is_some() || self.input.is_some()
    }

    fn compact(&self) -> Result<CompactSet, Failure> {
        let count = [self.interval.is_some(), self.bands.is_some(), self.input.is_some()]
            .iter()
            .filter(|&&x| x)
            .count();
        if count != 1 {
            return Err(Failure::invalid("give exactly one of --interval, --bands, --input"));
        }
        if let Some(iv) = &self.interval {
            return Ok(BandSet::interval(iv[0], iv[1])?.into());
        }
        if let Some(e) = &self.bands {
            return Ok(BandSet::new(e.clone())?.into());
        }
        let v = read_json(self.input.as_ref().unwrap())?;
        let is_points = v.as_array().is_some_and(|a| a.iter().any(Value::is_array));
        if is_points {
            Ok(PointCloud::new(points_from_json(&v)?)?.into())
        } else {
            Ok(BandSet::from_json(&v)?.into())
        }
    }

    fn band_set(&self) -> Result<BandSet, Failure> {
        match self.compact()? {
            CompactSet::Bands(b) => Ok(b),
            CompactSet::Cloud(_) => Err(Failure::invalid("this command needs a band set, not points")),
        }
    }
}

impl JacobiArg {
    fn load(&self) -> Result<Option<PeriodicJacobi>, Failure> {
        let Some(s) = &self.jacobi else { return Ok(None) };
        let v = if s.trim_start().starts_with('{') {
            parse_json(s)?
        } else {
            read_json(Path::new(s))?
        };
        Ok(Some(PeriodicJacobi::from_json(&v)?))
    }
}

fn set_json(k: &CompactSet) -> Value {
    match k {
        CompactSet::Bands(b) => json!({ "bands": b.bands() }),
        CompactSet::Cloud(c) => json!({ "points": c.points().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>() }),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// The primary result file in the requested format.
fn primary(cli: &Cli, doc: &Value, csv: impl FnOnce() -> String) -> (String, String) {
    let name = cli.command.name();
    match cli.format {
        Format::Json => (format!("{name}.json"), pretty(doc)),
        Format::Csv => (format!("{name}.csv"), csv()),
    }
}

fn coefficient_csv(header: &str, coeffs: &[String]) -> String {
    let mut s = format!("power,{header}\n");
    for (i, c) in coeffs.iter().enumerate() {
        let _ = writeln!(s, "{i},{c}");
    }
    s
}

fn float_strings(p: &RealPoly) -> Vec<String> {
    p.coeffs.iter().map(|x| format!("{x:e}")).collect()
}

pub fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Capacity { set, jacobi, n, scheme } => capacity(cli, set, jacobi, *n, *scheme),
        Command::Fekete { set, n, restarts } => fekete(cli, set, *n, *restarts),
        Command::Chebyshev {
            set,
            jacobi,
            remez,
            degree,
            max_iters,
        } => chebyshev(cli, set, jacobi, *remez, *degree, *max_iters),
        Command::Jacobi { json, input } => jacobi_cmd(cli, json.as_deref(), input.as_deref()),
        Command::Calibrate { set, m } => calibrate_cmd(cli, set, *m),
        Command::Lift {
            poly,
            input,
            a,
            c,
            r2,
            max_a,
            max_degree,
            samples,
        } => {
            let v = match (poly, input) {
                (Some(s), None) => parse_json(s)?,
                (None, Some(p)) => read_json(p)?,
                _ => return Err(Failure::invalid("give exactly one of --poly, --input")),
            };
            let p = RationalPoly::from_json(&v)?;
            let search = LiftSearch {
                max_a: *max_a,
                max_degree: *max_degree,
                n_samples: *samples,
            };
            lift(cli, &p, *a, *c, *r2, &search)
        }
        Command::Pipeline {
            set,
            jacobi,
            degree_budget,
            denom_bound,
            r2,
            m,
            moments,
            max_a,
            max_degree,
            samples,
        } => {
            let source = match (jacobi.load()?, set.given()) {
                (Some(j), false) => PipelineSource::Jacobi(j),
                (None, true) => PipelineSource::Bands(set.band_set()?),
                _ => return Err(Failure::invalid("give either a band set or --jacobi")),
            };
            let opts = PipelineOptions {
                degree_budget: *degree_budget,
                denom_bound: *denom_bound,
                r2: *r2,
                calibration_m: *m,
                lift: LiftSearch {
                    max_a: *max_a,
                    max_degree: *max_degree,
                    n_samples: *samples,
                },
                moments: *moments,
            };
            pipeline_cmd(cli, &source, &opts)
        }
        Command::Search {
            set,
            degree,
            bound,
            rho,
            targets,
            budget,
        } => search(cli, set, *degree, *bound, *rho, targets.as_deref(), *budget),
        Command::Enumerate {
            set,
            disk,
            degree,
            budget,
        } => enumerate(cli, set, *disk, *degree, *budget),
        Command::Volume {
            set,
            degree,
            max_degree,
            samples,
        } => volume(cli, set, *degree, *max_degree, *samples),
        Command::Bernstein { degree, power, values } => bernstein_cmd(cli, *degree, *power, values.as_deref()),
    }
}

fn capacity(cli: &Cli, set: &SetArgs, jacobi: &JacobiArg, n: usize, scheme: Scheme) -> Result<Output, Failure> {
    let (est, k) = match scheme {
        Scheme::Jacobi => {
            let j = jacobi.load()?.ok_or_else(|| Failure::invalid("--scheme jacobi needs --jacobi"))?;
            let k: CompactSet = spectrum_bands(&j)?.bands.into();
            (CapacityEstimate::from_jacobi(&j)?, k)
        }
        _ => {
            let k = set.compact()?;
            let s = if scheme == Scheme::Robin {
                CapacityScheme::RobinConstant
            } else {
                CapacityScheme::FeketeExtrapolation
            };
            let opts = FeketeOptions {
                seed: cli.seed,
                ..FeketeOptions::default()
            };
            (capacity_estimate(&k, s, n, &opts)?, k)
        }
    };
    let doc = json!({
        "set": set_json(&k),
        "value": est.value,
        "scheme": est.scheme,
        "n_used": est.n_used,
        "error_bound": est.error_bound,
        "diameters": est.diameters,
    });
    let file = primary(cli, &doc, || {
        let mut s = String::from("n,d_n\n");
        for (n, d) in &est.diameters {
            let _ = writeln!(s, "{n},{d}");
        }
        s
    });
    Ok(Output {
        files: vec![file],
        summary: json!({ "value": est.value, "scheme": est.scheme }),
    })
}

fn fekete(cli: &Cli, set: &SetArgs, n: usize, restarts: usize) -> Result<Output, Failure> {
    let k = set.compact()?;
    let opts = FeketeOptions {
        restarts,
        seed: cli.seed,
        grid_per_band: None,
    };
    let res = fekete_points(&k, n, &opts)?;
    let doc = json!({
        "set": set_json(&k),
        "n": n,
        "points": res.points.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
        "d_n": res.d_n,
        "log_pairwise_product": res.log_pairwise_product,
    });
    let file = primary(cli, &doc, || {
        let mut s = String::from("re,im\n");
        for z in &res.points {
            let _ = writeln!(s, "{},{}", z.re, z.im);
        }
        s
    });
    Ok(Output {
        files: vec![file],
        summary: json!({ "n": n, "d_n": res.d_n }),
    })
}

fn chebyshev(
    cli: &Cli,
    set: &SetArgs,
    jacobi: &JacobiArg,
    remez: bool,
    degree: usize,
    max_iters: usize,
) -> Result<Output, Failure> {
    if degree == 0 {
        return Err(Failure::invalid("degree must be at least 1"));
    }
    let (source, e, exact, approx) = match (jacobi.load()?, remez) {
        (Some(_), true) => return Err(Failure::invalid("--remez works on a band set, not --jacobi")),
        (Some(j), false) => {
            if set.given() {
                return Err(Failure::invalid("give either a band set or --jacobi"));
            }
            if degree % j.r() != 0 {
                return Err(Failure::invalid(format!(
                    "degree must be a multiple of the period {}",
                    j.r()
                )));
            }
            let e = spectrum_bands(&j)?.bands;
            let p = chebyshev_compose(&j, degree / j.r())?;
            ("jacobi", e, Some(p.clone()), p.to_real_poly())
        }
        (None, true) => {
            let e = set.band_set()?;
            let p = remez_union(&e, degree, max_iters)?;
            ("remez", e, None, p)
        }
        (None, false) => {
            let e = set.band_set()?;
            if e.r() != 1 {
                return Err(Failure::invalid("exact construction needs one interval; use --remez or --jacobi"));
            }
            let (a, b) = e.band(0);
            let p = monic_chebyshev_interval(a, b, degree)?;
            ("interval", e, Some(p.clone()), p.to_real_poly())
        }
    };
    let rep = equioscillation_check(&approx, &e, (40 * degree).max(200))?;
    let coefficients = match &exact {
        Some(p) => p.to_strings(),
        None => float_strings(&approx),
    };
    let doc = json!({
        "source": source,
        "bands": e.bands(),
        "degree": degree,
        "exact": exact.is_some(),
        "coefficients": coefficients,
        "norm": rep.norm,
        "alternation_points": rep.alternation_points,
        "alternation_count": rep.alternation_count,
    });
    let file = primary(cli, &doc, || coefficient_csv("coefficient", &coefficients));
    Ok(Output {
        files: vec![file],
        summary: json!({
            "degree": degree,
            "norm": rep.norm,
            "alternation_count": rep.alternation_count,
        }),
    })
}

fn jacobi_cmd(cli: &Cli, json_arg: Option<&str>, input: Option<&Path>) -> Result<Output, Failure> {
    let v = match (json_arg, input) {
        (Some(s), None) => parse_json(s)?,
        (None, Some(p)) => read_json(p)?,
        _ => return Err(Failure::invalid("give exactly one of --json, --input")),
    };
    let j = PeriodicJacobi::from_json(&v)?;
    let np = naiman_polynomial(&j)?;
    let sp = spectrum_bands(&j)?;
    let cap = jacobi_capacity(&j)?;
    let doc = json!({
        "jacobi": j.to_json(),
        "p": np.p.to_strings(),
        "b": format_gaussian_rational(&np.modulus),
        "p_tilde": np.p_tilde.to_strings(),
        "bands": sp.bands.bands(),
        "band_edges": sp.band_edges,
        "band_zeros": sp.band_zeros,
        "closed_gaps": sp.closed_gaps,
        "capacity": cap,
    });
    let bands = sp.bands.bands();
    let file = primary(cli, &doc, || {
        let mut s = String::from("band,left,right\n");
        for (i, (l, r)) in bands.iter().enumerate() {
            let _ = writeln!(s, "{i},{l},{r}");
        }
        s
    });
    Ok(Output {
        files: vec![file],
        summary: json!({ "capacity": cap, "bands": bands }),
    })
}

fn calibrate_cmd(cli: &Cli, set: &SetArgs, m: usize) -> Result<Output, Failure> {
    let e = set.band_set()?;
    let cal = calibrate(&e, m)?;
    let g = Green::new(&cal.bands)?;
    let doc = json!({
        "input": e.bands(),
        "endpoints": cal.bands.endpoints(),
        "m": cal.m,
        "k": cal.k,
        "omega": cal.omega,
        "lambda": cal.lambda,
        "robin": g.robin(),
        "capacity": g.capacity(),
        "max_inflation": cal.max_inflation,
        "iterations": cal.iterations,
        "gap_only": cal.gap_only,
    });
    let file = primary(cli, &doc, || {
        let mut s = String::from("band,left,right,k,omega\n");
        for (i, (l, r)) in cal.bands.bands().iter().enumerate() {
            let _ = writeln!(s, "{i},{l},{r},{},{}", cal.k[i], cal.omega[i]);
        }
        s
    });
    Ok(Output {
        files: vec![file],
        summary: json!({ "k": cal.k, "capacity": g.capacity(), "max_inflation": cal.max_inflation }),
    })
}

fn lift(
    cli: &Cli,
    p: &RationalPoly,
    a: Option<usize>,
    c: Option<usize>,
    r2: Option<f64>,
    search: &LiftSearch,
) -> Result<Output, Failure> {
    if p.is_zero() || p.degree() == 0 {
        return Err(Failure::invalid("expected a monic polynomial of degree at least 1"));
    }
    let k = p.degree();
    let r2 = r2.unwrap_or(1.0 + 1.0 / k as f64);
    let cert = match (a, c) {
        (None, None) => best_lift(p, r2, search)?,
        (None, Some(_)) => return Err(Failure::invalid("--c needs --a")),
        (Some(a), c) => {
            let c = match c {
                Some(c) => c,
                None => minimal_c(p, a, search.max_degree / k)?.ok_or_else(|| Failure {
                    code: 4,
                    message: format!("no c <= {} admits a lift with a = {a}", search.max_degree / k),
                })?,
            };
            rouche_certify(p, &integer_lift(p, a, c, search.max_degree)?, r2, search.n_samples)?
        }
    };
    let cert = if cert.certified { zero_localization(&cert, p, r2, None)? } else { cert };
    if cli.require_certified && !cert.certified {
        return Err(Failure::refused(format!(
            "lift of degree {} is not certified at R2 = {r2} (margin {:?})",
            cert.gamma.degree(),
            cert.rouche_margin
        )));
    }
    let mut doc = cert.to_json();
    doc["p"] = p.to_json();
    let gamma = cert.gamma.to_strings();
    let file = primary(cli, &doc, || coefficient_csv("gamma", &gamma));
    Ok(Output {
        files: vec![file],
        summary: json!({
            "degree": cert.gamma.degree(),
            "certified": cert.certified,
            "rouche_margin": cert.rouche_margin,
        }),
    })
}

fn pipeline_cmd(cli: &Cli, source: &PipelineSource, opts: &PipelineOptions) -> Result<Output, Failure> {
    let rep = pipeline(source, opts)?;
    if cli.require_certified {
        if let Some(s) = rep.steps.iter().find(|s| !s.certificate.certified) {
            return Err(Failure::refused(format!("the degree-{} step is not certified", s.degree)));
        }
    }
    let csv = rep.diagnostics_csv();
    let mut files = vec![primary(cli, &rep.to_json(), || csv.clone())];
    if cli.format == Format::Json {
        files.push(("pipeline_diagnostics.csv".into(), csv));
    }
    let last = rep.steps.last();
    Ok(Output {
        files,
        summary: json!({
            "steps": rep.steps.len(),
            "certified": rep.steps.iter().filter(|s| s.certificate.certified).count(),
            "final_degree": last.map(|s| s.certificate.gamma.degree()),
            "final_moment_distance": last.map(|s| s.moment_distance),
            "non_increasing": rep.non_increasing,
        }),
    })
}

fn search(
    cli: &Cli,
    set: &SetArgs,
    degree: usize,
    bound: Option<u64>,
    rho: Option<f64>,
    targets: Option<&str>,
    budget: u64,
) -> Result<Output, Failure> {
    let cbox = match (bound, rho) {
        (Some(b), None) => CoeffBox::uniform(degree, b),
        (None, Some(r)) => CoeffBox::binomial(degree, r),
        _ => return Err(Failure::invalid("give exactly one of --bound, --rho")),
    };
    if let Some(t) = targets {
        if set.given() {
            return Err(Failure::invalid("--targets replaces the set"));
        }
        let pts = points_from_json(&parse_json(t)?)?;
        let best = nearest_conjugate_set(&pts, &cbox, budget)?;
        let doc = json!({
            "mode": "nearest_conjugates",
            "box": cbox.bounds,
            "targets": pts.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            "coeffs": best.coeffs,
            "distance": best.distance,
            "roots": best.roots,
            "note": best.note,
        });
        let file = primary(cli, &doc, || {
            let mut s = String::from("re,im\n");
            for (re, im) in &best.roots {
                let _ = writeln!(s, "{re},{im}");
            }
            s
        });
        return Ok(Output {
            files: vec![file],
            summary: json!({ "coeffs": best.coeffs, "distance": best.distance }),
        });
    }
    let k = set.compact()?;
    let found = small_norm_search(&k, &cbox, budget)?;
    let doc = json!({
        "mode": "small_norm",
        "set": set_json(&k),
        "degree": degree,
        "box": cbox.bounds,
        "results": found,
    });
    let file = primary(cli, &doc, || {
        let mut s = String::from("sup,coeffs\n");
        for r in &found {
            let c: Vec<String> = r.coeffs.iter().map(i64::to_string).collect();
            let _ = writeln!(s, "{},{}", r.sup, c.join(";"));
        }
        s
    });
    Ok(Output {
        files: vec![file],
        summary: json!({ "count": found.len() }),
    })
}

fn enumerate(cli: &Cli, set: &SetArgs, disk: Option<f64>, degree: usize, budget: u64) -> Result<Output, Failure> {
    let (target, desc) = match (disk, set.given()) {
        (Some(r), false) => (TotallyInSet::Disk(r), json!({ "disk": r })),
        (None, true) => {
            let e = set.band_set()?;
            let d = json!({ "bands": e.bands() });
            (TotallyInSet::Bands(e), d)
        }
        _ => return Err(Failure::invalid("give either --disk or a band set")),
    };
    let found = totally_in_enumerate(&target, degree, budget)?;
    let rows: Vec<Value> = found
        .iter()
        .map(|c| json!({ "coeffs": c, "cyclotomic_factors": kronecker_factorization(c) }))
        .collect();
    let doc = json!({ "set": desc, "degree": degree, "polynomials": rows });
    let file = primary(cli, &doc, || {
        let mut s = String::from("coeffs,cyclotomic_factors\n");
        for c in &found {
            let cs: Vec<String> = c.iter().map(i64::to_string).collect();
            let ks = kronecker_factorization(c)
                .map(|v| v.iter().map(usize::to_string).collect::<Vec<_>>().join(";"))
                .unwrap_or_default();
            let _ = writeln!(s, "{},{ks}", cs.join(";"));
        }
        s
    });
    Ok(Output {
        files: vec![file],
        summary: json!({ "count": found.len() }),
    })
}

fn volume(cli: &Cli, set: &SetArgs, degree: usize, max_degree: Option<usize>, samples: u64) -> Result<Output, Failure> {
    let k = set.compact()?;
    let top = max_degree.unwrap_or(degree);
    if top < degree {
        return Err(Failure::invalid("--max-degree is below --degree"));
    }
    let mut results = Vec::new();
    for n in degree..=top {
        results.push((n, fn_volume_mc(&k, n, samples, cli.seed)?));
    }
    let doc = json!({
        "set": set_json(&k),
        "seed": cli.seed,
        "results": results.iter().map(|(n, v)| {
            let mut o = serde_json::to_value(v).expect("volume estimates serialize");
            o["degree"] = json!(n);
            o
        }).collect::<Vec<_>>(),
    });
    let file = primary(cli, &doc, || {
        let mut s = String::from("degree,volume,normalized_log,reference,hits,samples\n");
        for (n, v) in &results {
            let reference = v.reference.map_or(String::new(), |r| r.to_string());
            let _ = writeln!(
                s,
                "{n},{},{},{reference},{},{}",
                v.volume, v.normalized_log, v.hits, v.samples
            );
        }
        s
    });
    Ok(Output {
        files: vec![file],
        summary: json!({ "volumes": results.iter().map(|(_, v)| v.volume).collect::<Vec<_>>() }),
    })
}

fn bernstein_cmd(cli: &Cli, degree: usize, power: Option<u32>, values: Option<&[String]>) -> Result<Output, Failure> {
    if degree == 0 {
        return Err(Failure::invalid("degree must be at least 1"));
    }
    let vals = match (power, values) {
        (Some(k), None) => {
            let k = i32::try_from(k).map_err(|_| Failure::invalid("power too large"))?;
            (0..=degree as i64).map(|j| rat(j, degree as i64).pow(k)).collect::<Vec<_>>()
        }
        (None, Some(v)) => {
            if v.len() != degree + 1 {
                return Err(Failure::invalid(format!("expected {} values, got {}", degree + 1, v.len())));
            }
            v.iter()
                .map(|s| {
                    let z = parse_gaussian_rational(s)?;
                    if z.im != rat(0, 1) {
                        return Err(fekete_core::Error::Parse(format!("{s} is not real")));
                    }
                    Ok(z.re)
                })
                .collect::<fekete_core::Result<Vec<_>>>()?
        }
        _ => return Err(Failure::invalid("give exactly one of --power, --values")),
    };
    let p = bernstein(&vals)?;
    let coefficients = p.to_strings();
    let doc = json!({
        "degree": degree,
        "values": vals.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "coefficients": coefficients,
    });
    let file = primary(cli, &doc, || coefficient_csv("coefficient", &coefficients));
    Ok(Output {
        files: vec![file],
        summary: json!({ "degree": p.degree() }),
    })
}
