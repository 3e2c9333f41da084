use crate::output::{csv, emit, json, num, write_raster};
use crate::{CliError, PairArgs, RasterArgs};
use confdyn::config::{
    from_json, parse_complex, parse_real, ConjugacyConfig, PackingConfig, RationalMapConfig,
    SystemConfig,
};
use confdyn::conjugacy::{catalog_pair, ConjugacyMap};
use confdyn::numeric::wrap;
use confdyn::raster::{RasterSpec, Viewport};
use confdyn::suffridge::{self, Singular};
use confdyn::{holo, qc, reflection, schwarz};
use num_complex::Complex64 as C;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn looks_like_file(s: &str) -> bool {
    s.ends_with(".json") || Path::new(s).is_file()
}

fn raster_spec(a: &RasterArgs) -> Result<RasterSpec, CliError> {
    let v: Vec<f64> = a
        .viewport
        .split(',')
        .map(parse_real)
        .collect::<Result<_, _>>()?;
    if v.len() != 4 {
        return Err(CliError::Usage(
            "--viewport takes xmin,xmax,ymin,ymax".into(),
        ));
    }
    let (w, h) = a
        .size
        .split_once(['x', 'X'])
        .and_then(|(w, h)| {
            Some((
                w.trim().parse::<usize>().ok()?,
                h.trim().parse::<usize>().ok()?,
            ))
        })
        .ok_or_else(|| CliError::Usage("--size takes WxH".into()))?;
    Ok(RasterSpec::new(
        w,
        h,
        Viewport::new(v[0], v[1], v[2], v[3])?,
        a.max_iter,
    )?)
}

pub fn render(map: Option<String>, system: Option<String>, a: &RasterArgs) -> Result<(), CliError> {
    let spec = raster_spec(a)?;
    let raster = match (map, system) {
        (Some(m), None) => {
            let f = if looks_like_file(&m) {
                from_json::<RationalMapConfig>(&read(Path::new(&m))?)?.build()?
            } else {
                holo::catalog(&m)?
            };
            let att = f.attractors()?;
            f.render_julia(spec, &att)
        }
        (None, Some(s)) => {
            let sys = if looks_like_file(&s) {
                from_json::<SystemConfig>(&read(Path::new(&s))?)?.build()?
            } else {
                schwarz::catalog_system(&s)?
            };
            sys.render(spec, a.max_iter)
        }
        _ => {
            return Err(CliError::Usage(
                "render needs exactly one of --map or --system".into(),
            ))
        }
    };
    write_raster(&raster, &a.out)
}

pub fn limit_set(
    packing: Option<PathBuf>,
    n: Option<usize>,
    a: &RasterArgs,
) -> Result<(), CliError> {
    let spec = raster_spec(a)?;
    let p = match (packing, n) {
        (Some(path), None) => {
            from_json::<PackingConfig>(&read(&path)?)?.build(reflection::TANGENCY_TOL)?
        }
        (None, Some(n)) => reflection::regular_ideal_polygon(n)?,
        _ => {
            return Err(CliError::Usage(
                "limit-set needs exactly one of --packing or --ideal-polygon".into(),
            ))
        }
    };
    let r = p.render_limit(spec);
    eprintln!(
        "undecided fraction {}",
        num(r.fraction(confdyn::raster::UNDECIDED))
    );
    write_raster(&r, &a.out)
}

fn pair(a: &PairArgs) -> Result<ConjugacyMap, CliError> {
    match (&a.pair, &a.config) {
        (Some(name), None) => Ok(catalog_pair(name)?),
        (None, Some(path)) => Ok(from_json::<ConjugacyConfig>(&read(path)?)?.build()?),
        _ => Err(CliError::Usage(
            "exactly one of --pair or --config is required".into(),
        )),
    }
}

pub fn conjugacy(a: &PairArgs, levels: usize, out: Option<PathBuf>) -> Result<(), CliError> {
    let h = pair(a)?;
    let mut rows = Vec::new();
    for n in 1..=levels {
        for m in h.level(n).iter() {
            let word: Vec<String> = m.word.iter().map(|d| d.to_string()).collect();
            rows.push(vec![
                n.to_string(),
                word.join("-"),
                num(m.source_start),
                num(wrap(m.source_start + m.source_len)),
                num(m.target_start),
                num(wrap(m.target_start + m.target_len)),
            ]);
        }
    }
    let header = [
        "level",
        "word",
        "source_start",
        "source_end",
        "target_start",
        "target_end",
    ];
    emit(out.as_deref(), &csv(&header, rows))
}

pub fn distortion(
    a: &PairArgs,
    kmin: usize,
    kmax: usize,
    samples: usize,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    if kmin < 2 || kmax < kmin {
        return Err(CliError::Usage("need 2 <= kmin <= kmax".into()));
    }
    let h = pair(a)?;
    let p = h.distortion_profile(kmin, kmax, samples)?;
    eprintln!("model {:?}, slope {}", p.model, num(p.slope));
    let rows =
        p.ks.iter()
            .zip(&p.scales)
            .zip(&p.values)
            .map(|((k, t), v)| vec![k.to_string(), num(*t), num(*v)]);
    emit(out.as_deref(), &csv(&["k", "t", "rho"], rows))
}

pub fn ba_extend(
    a: &PairArgs,
    grid: usize,
    lift_samples: usize,
    max_level: f64,
    level_step: f64,
    out: Option<PathBuf>,
    tail: Option<PathBuf>,
) -> Result<(), CliError> {
    if grid < 128 {
        return Err(CliError::Usage("--grid must be at least 128".into()));
    }
    if !(level_step > 0.0) || !(max_level >= 1.0) {
        return Err(CliError::Usage(
            "need --level-step > 0 and --max-level >= 1".into(),
        ));
    }
    let h = pair(a)?;
    let line = qc::lift_to_line(&h, lift_samples)?;
    let samples = qc::sample_grid(&line, grid)?;
    let mut rows = Vec::with_capacity(samples.len());
    for s in &samples {
        let w = line.disk_extend(s.z)?;
        rows.push(vec![
            num(s.z.re),
            num(s.z.im),
            num(w.re),
            num(w.im),
            num(s.mu.norm()),
            num(s.k),
        ]);
    }
    emit(
        out.as_deref(),
        &csv(&["x", "y", "re_h", "im_h", "mu_abs", "k"], rows),
    )?;
    let ks: Vec<f64> = samples.iter().map(|s| s.k).collect();
    let t = qc::DavidTail::from_samples(&ks, &qc::default_levels(max_level, level_step));
    let fit = t.fit.as_ref();
    let report = json!({
        "levels": t.levels,
        "areas": t.areas,
        "max_k": t.max_k,
        "C": fit.map(|f| f.c),
        "alpha": fit.map(|f| f.alpha),
        "r2": fit.map(|f| f.r2),
        "window": fit.map(|f| vec![t.levels[f.window.0], t.levels[f.window.1]]),
        "reaches_zero": t.reaches_zero(),
    });
    match tail {
        Some(p) => emit(Some(&p), &json(&report)),
        None => {
            eprint!("{}", json(&report));
            Ok(())
        }
    }
}

pub fn verify_constants() -> Result<(), CliError> {
    let checks = schwarz::verify_constants()?;
    let mut s = format!(
        "{:<22} {:>24} {:>24} {:>12} {:>12}  {}\n",
        "name", "expected", "computed", "abs_error", "tolerance", "status"
    );
    for c in &checks {
        s.push_str(&format!(
            "{:<22} {:>24} {:>24} {:>12.3e} {:>12.1e}  {}\n",
            c.name,
            num(c.expected),
            num(c.computed),
            c.abs_error(),
            c.tolerance,
            if c.passes() { "ok" } else { "FAIL" }
        ));
    }
    emit(None, &s)?;
    match checks.iter().find(|c| !c.passes()) {
        Some(c) => Err(CliError::Core(confdyn::Error::IllConditioned(
            c.abs_error(),
        ))),
        None => Ok(()),
    }
}

fn point(z: C) -> Value {
    json!([z.re, z.im])
}

pub fn suffridge(degree: usize, coeffs: &str, out: Option<PathBuf>) -> Result<(), CliError> {
    let a: Vec<C> = coeffs
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_complex)
        .collect::<Result<_, _>>()?;
    let f = suffridge::make_sigma_star(degree, &a)?;
    let s = suffridge::curve_singularities(&f);
    let tiles = suffridge::tiles_from(degree, &s)?;
    let tree = suffridge::tree_from_tiles(&tiles);
    let mut angles = Vec::new();
    for v in 0..tree.vertices {
        let inc = tree.incident(v);
        for &e in &inc {
            for &g in &inc {
                if e != g {
                    let k = tree.angle(v, e, g).unwrap_or(0);
                    angles.push(json!({"vertex": v, "from": e, "to": g, "thirds_of_turn": k}));
                }
            }
        }
    }
    let report = json!({
        "degree": degree,
        "cusps": s.cusps.iter().map(|c| json!({"param": c.param, "point": point(c.point)})).collect::<Vec<_>>(),
        "double_points": s.double_points.iter().map(|d| json!({
            "params": [d.params.0, d.params.1],
            "point": point(d.point),
            "residual": d.residual,
        })).collect::<Vec<_>>(),
        "tiles": tiles.iter().map(|t| json!({
            "arcs": t.arcs.iter().map(|&(x, y)| json!([x, y])).collect::<Vec<_>>(),
            "boundary": t.boundary.iter().map(|b| match b {
                Singular::Cusp(k) => format!("cusp:{k}"),
                Singular::Double(k) => format!("double:{k}"),
            }).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "tree": {
            "vertices": tree.vertices,
            "edges": tree.edges.iter().map(|&(x, y)| json!([x, y])).collect::<Vec<_>>(),
            "angles": angles,
        },
    });
    emit(out.as_deref(), &json(&report))
}
