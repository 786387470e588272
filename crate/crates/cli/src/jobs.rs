//! Task implementations. Each returns a JSON result, CSV files and an instability flag.

use anyhow::{bail, Context, Result};
use evanslab::essential_spectrum::{
    border_curves, border_stability, c0_spectrum, default_k_max, front_speed_condition, lambda_grid, unstable_count, write_border_csv,
    write_region_csv, BorderClass, RegionMap, RegionPoint,
};
use evanslab::evans_closed_form::{pencil_essential_spectrum, piecewise_evans, PencilProblem};
use evanslab::linearization::{Chart, SpectralCase, SpectralProblem};
use evanslab::model::{
    catalog, far_field, residual, uniform_grid, validate_piecewise, zero_count_vprime, CatalogParams, FarFieldData, ReactionTerm, Side,
    WaveDocument, WaveProfile, CATALOG,
};
use evanslab::numerics::{find_real_roots, winding_adaptive, Contour, MAX_CONTOUR_SAMPLES};
use evanslab::riccati_evans::{default_chart, locate_poles, scan_real, winding, EvansSample, RootRecord, WindingRecord};
use num_complex::Complex64 as C;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::JobConfig;

/// Largest travelling-wave ODE residual accepted by the profile check.
pub const PROFILE_RESIDUAL_TOL: f64 = 1e-6;

pub struct Outcome {
    pub result: Value,
    /// File name and contents.
    pub csv: Vec<(&'static str, Vec<u8>)>,
    /// `Some(true)` when the task established an instability.
    pub unstable: Option<bool>,
    pub notes: Vec<String>,
}

impl Outcome {
    fn new(result: Value) -> Self {
        Self { result, csv: Vec::new(), unstable: None, notes: Vec::new() }
    }
}

pub struct Wave {
    pub reaction: ReactionTerm,
    pub profile: WaveProfile,
    pub example: Option<u8>,
}

impl Wave {
    pub fn load(cfg: &JobConfig) -> Result<Self> {
        let w = &cfg.wave;
        if let Some(path) = &w.document {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let doc = WaveDocument::from_toml(&text).with_context(|| format!("parsing {}", path.display()))?;
            return Ok(Self { reaction: doc.reaction, profile: doc.profile, example: None });
        }
        let id = w.example.context("no example selected")?;
        let params = CatalogParams { d: w.d, c: w.c, gamma: w.gamma, delta: w.delta, beta: w.beta, half_width: w.l };
        let (reaction, profile) = catalog(id, &params)?;
        Ok(Self { reaction, profile, example: Some(id) })
    }

    fn far(&self) -> FarFieldData {
        far_field(&self.reaction, &self.profile)
    }

    fn pencil(&self) -> Result<Option<PencilProblem>> {
        if self.profile.piecewise_data().is_none() {
            return Ok(None);
        }
        Ok(Some(PencilProblem::from_wave(&self.reaction, &self.profile)?))
    }

    pub fn spectral_problem(&self, chart: &str) -> Result<SpectralProblem> {
        let case = SpectralCase::for_parameters(self.profile.d, self.profile.c);
        let sp = SpectralProblem::build(&self.reaction, &self.profile, case)?;
        let chart = match chart {
            "default" => default_chart(&sp),
            name => Chart::by_name(name, sp.order())?,
        };
        Ok(sp.with_chart(chart)?)
    }
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Minus => "minus",
        Side::Plus => "plus",
    }
}

/// Outer radius `20·max(1, |ĝ|, c²)` of the default half-annulus.
pub fn default_outer_radius(far: &FarFieldData, c: f64) -> f64 {
    let g = [far.gu_plus, far.gv_plus, far.gu_minus, far.gv_minus].iter().map(|x| x.abs()).fold(1.0, f64::max);
    20.0 * g.max(c * c)
}

pub fn catalog_listing() -> Result<Outcome> {
    let mut entries = Vec::new();
    for (id, description) in CATALOG {
        let (r, p) = catalog(id, &CatalogParams::default())?;
        entries.push(json!({
            "id": id,
            "description": description,
            "kind": p.kind(),
            "profile": if p.is_closed_form() { "closed-form" } else { "piecewise" },
            "D": p.d,
            "c": p.c,
            "case": SpectralCase::for_parameters(p.d, p.c),
            "far_field": far_field(&r, &p),
        }));
    }
    Ok(Outcome::new(json!({ "entries": entries })))
}

pub fn profile_check(cfg: &JobConfig) -> Result<Outcome> {
    let wave = Wave::load(cfg)?;
    let p = &wave.profile;
    let mut out = json!({
        "example": wave.example,
        "kind": p.kind(),
        "D": p.d,
        "c": p.c,
        "far_field": wave.far(),
    });
    let valid = if p.is_closed_form() {
        let grid = uniform_grid(cfg.profile.interval[0], cfg.profile.interval[1], cfg.profile.points);
        let res = residual(&wave.reaction, p, &grid)?;
        let changes = zero_count_vprime(p, &grid)?;
        out["profile"] = json!("closed-form");
        out["residual"] = json!(res);
        out["residual_tolerance"] = json!(PROFILE_RESIDUAL_TOL);
        out["vprime_sign_changes"] = json!(changes);
        out["monotone"] = json!(changes == 0);
        res < PROFILE_RESIDUAL_TOL
    } else {
        let ok = validate_piecewise(&wave.reaction, p)?;
        out["profile"] = json!("piecewise");
        out["piecewise_consistent"] = json!(ok);
        ok
    };
    out["valid"] = json!(valid);
    Ok(Outcome::new(out))
}

pub fn essential(cfg: &JobConfig) -> Result<Outcome> {
    let wave = Wave::load(cfg)?;
    let far = wave.far();
    let (d, c) = (wave.profile.d, wave.profile.c);
    let es = &cfg.essential;
    let mut curves = Vec::new();
    let mut sides = Vec::new();
    let mut stable = true;
    for side in Side::BOTH {
        let st = border_stability(&far, d, side);
        stable &= st.class == BorderClass::Stable;
        let k_max = es.k_max.unwrap_or_else(|| default_k_max(&far, d, side));
        curves.extend(border_curves(&far, d, c, side, k_max, es.samples)?);
        let mut entry = json!({ "side": side_name(side), "class": st.class, "marginal": st.marginal, "k_max": k_max });
        if c == 0.0 {
            entry["stationary_spectrum"] = serde_json::to_value(c0_spectrum(&far, d, side, es.samples))?;
        }
        sides.push(entry);
    }
    let grid = lambda_grid(
        (es.region_re[0], es.region_re[1]),
        (es.region_im[0], es.region_im[1]),
        es.region_points[0],
        es.region_points[1],
    );
    let points = grid
        .par_iter()
        .map(|&lambda| {
            let plus = unstable_count(&far, d, c, lambda, Side::Plus)?;
            let minus = unstable_count(&far, d, c, lambda, Side::Minus)?;
            let index = plus.zip(minus).map(|(p, m)| m as i64 - p as i64);
            Ok(RegionPoint { lambda, count_plus: plus, count_minus: minus, index, border: index.is_none() })
        })
        .collect::<evanslab::Result<Vec<_>>>()?;
    let map = RegionMap { points };
    let mut out = json!({
        "example": wave.example,
        "D": d,
        "c": c,
        "far_field": far,
        "sides": sides,
        "stable": stable,
        "region": {
            "points": map.points.len(),
            "border_points": map.points.iter().filter(|p| p.border).count(),
            "nonzero_index_points": map.points.iter().filter(|p| p.index.is_some_and(|i| i != 0)).count(),
            "unstable_essential_points": map.points.iter().filter(|p| p.in_essential_spectrum() && p.lambda.re > 0.0).count(),
        },
    });
    let mut notes = Vec::new();
    if wave.example == Some(10) {
        out["speed_condition"] = json!(front_speed_condition(d, c));
        notes.push("speed condition (c-2)(C-2D) >= 0, (c+2)(C+2D) >= 0 evaluated with C = c; the far-field classification is authoritative".into());
    }
    if let Some(pp) = wave.pencil()? {
        out["pencil_intervals"] = json!(pencil_essential_spectrum(&pp));
    }
    let mut borders = Vec::new();
    write_border_csv(&mut borders, &curves)?;
    let mut region = Vec::new();
    write_region_csv(&mut region, &map)?;
    Ok(Outcome { result: out, csv: vec![("borders.csv", borders), ("region.csv", region)], unstable: Some(!stable), notes })
}

fn samples_csv(samples: &[EvansSample]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(["re_lambda", "im_lambda", "re_e", "im_e", "phase"])?;
        for s in samples {
            let (re, im, ph) = match s.value {
                Some(v) => (format!("{:e}", v.re), format!("{:e}", v.im), format!("{:e}", v.arg())),
                None => Default::default(),
            };
            w.write_record([format!("{:e}", s.lambda.re), format!("{:e}", s.lambda.im), re, im, ph])?;
        }
        w.flush()?;
    }
    Ok(buf)
}

fn closed_sample(pp: &PencilProblem, lambda: C) -> EvansSample {
    match piecewise_evans(pp, lambda) {
        Ok(v) => EvansSample { lambda, value: Some(v), error: None },
        Err(e) => EvansSample { lambda, value: None, error: Some(e.to_string()) },
    }
}

#[derive(Serialize)]
struct ClosedFormScan {
    method: &'static str,
    samples: Vec<EvansSample>,
    roots: Vec<RootRecord>,
    essential_intervals: Vec<(f64, f64)>,
}

pub fn evans_scan(cfg: &JobConfig) -> Result<Outcome> {
    let wave = Wave::load(cfg)?;
    let (a, b) = (cfg.scan.interval[0], cfg.scan.interval[1]);
    let n = cfg.scan.points;
    if let Some(pp) = wave.pencil()? {
        let samples: Vec<EvansSample> =
            (0..n).into_par_iter().map(|i| closed_sample(&pp, C::new(a + (b - a) * i as f64 / (n - 1) as f64, 0.0))).collect();
        let scan = find_real_roots(|x| piecewise_evans(&pp, C::new(x, 0.0)).ok(), (a, b), n, 1e-12);
        let roots = scan
            .roots
            .iter()
            .filter_map(|&x| piecewise_evans(&pp, C::new(x, 0.0)).ok().map(|e| RootRecord { lambda: C::new(x, 0.0), residual: e.norm() }))
            .collect::<Vec<_>>();
        let essential_intervals = pencil_essential_spectrum(&pp);
        let unstable = roots.iter().any(|r| r.lambda.re > 0.0);
        let csv = samples_csv(&samples)?;
        let result = ClosedFormScan { method: "closed-form", samples, roots, essential_intervals };
        return Ok(Outcome { result: serde_json::to_value(result)?, csv: vec![("scan.csv", csv)], unstable: Some(unstable), notes: Vec::new() });
    }
    let sp = wave.spectral_problem(&cfg.evans.chart)?;
    let report = scan_real(&sp, (a, b), n, &cfg.evans.options())?;
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    let unstable = report.has_unstable_root();
    let mut result = serde_json::to_value(&report)?;
    result["method"] = json!("riccati");
    Ok(Outcome { result, csv: vec![("scan.csv", csv)], unstable: Some(unstable), notes: Vec::new() })
}

fn inside_half_annulus(z: C, inner: f64, outer: f64) -> bool {
    z.re > 0.0 && z.norm() > inner && z.norm() < outer
}

pub fn winding_task(cfg: &JobConfig) -> Result<Outcome> {
    let wave = Wave::load(cfg)?;
    let far = wave.far();
    let inner = cfg.contour.inner;
    let outer = cfg.contour.outer.unwrap_or_else(|| default_outer_radius(&far, wave.profile.c));
    if !(outer > inner) {
        bail!("contour radii must satisfy 0 < inner < outer (got {inner}, {outer})");
    }
    let contour = Contour::right_half_annulus(outer, inner)?;
    let samples = cfg.contour.samples;
    let mut notes = Vec::new();
    if let Some(pp) = wave.pencil()? {
        let scan = winding_adaptive(|l| piecewise_evans(&pp, l), &contour, samples, MAX_CONTOUR_SAMPLES)?;
        let samples: Vec<EvansSample> =
            scan.vertices.iter().zip(&scan.values).map(|(v, &e)| EvansSample { lambda: v.point, value: Some(e), error: None }).collect();
        let record = WindingRecord { winding: scan.winding, residual: scan.residual, samples: samples.len() };
        let csv = samples_csv(&samples)?;
        // closed-form Evans functions of piecewise waves have no poles off the negative axis
        let result = json!({
            "method": "closed-form",
            "contour": { "inner": inner, "outer": outer },
            "winding": record,
            "roots_inside": scan.winding,
            "samples": samples,
        });
        return Ok(Outcome { result, csv: vec![("contour.csv", csv)], unstable: Some(scan.winding > 0), notes });
    }
    let sp = wave.spectral_problem(&cfg.evans.chart)?;
    let opts = cfg.evans.options();
    let report = winding(&sp, &contour, samples, &opts)?;
    let record = report.winding.context("winding record missing")?;
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    let mut result = serde_json::to_value(&report)?;
    result["method"] = json!("riccati");
    result["contour"] = json!({ "inner": inner, "outer": outer });
    let unstable = match cfg.contour.pole_search {
        Some([r0, r1, i0, i1]) => {
            let mut poles = locate_poles(&sp, (r0, r1), (i0, i1), 10, 12, &opts);
            if i0 >= 0.0 || i1 <= 0.0 {
                poles.extend(locate_poles(&sp, (r0, r1), (-i1, -i0), 10, 12, &opts));
            }
            poles.retain(|&p| inside_half_annulus(p, inner, outer));
            poles.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
            poles.dedup_by(|a, b| (*a - *b).norm() < 1e-6);
            let roots = record.winding + poles.len() as i64;
            result["poles"] = json!(poles);
            result["roots_inside"] = json!(roots);
            roots > 0
        }
        None => {
            if record.winding <= 0 {
                notes.push("winding counts roots minus poles; set contour.pole_search to separate them".into());
            }
            record.winding > 0
        }
    };
    Ok(Outcome { result, csv: vec![("contour.csv", csv)], unstable: Some(unstable), notes })
}
