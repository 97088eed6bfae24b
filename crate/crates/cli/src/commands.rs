//! One function per subcommand.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use duffing_core::closed_form::{
    closed_form_summary, locus_at, primary_phase_resonance, sub12_existence_window,
    super31_phase_resonance, super51_existence_window, Locus, RootSign,
};
use duffing_core::harmonic_balance::{
    continue_branch, detect_phase_resonance, linear_seed, trace_family, Branch, BranchPoint,
    HbProblem, PointTag,
};
use duffing_core::slow_flow::{SlowFlowSystem, SteadyState};
use duffing_core::time_oracle::{integrate, verify_point, PointRef, Tolerances};
use duffing_core::{Error, Forcing, HarmonicSolution, OscillatorConfig, ResonanceId, SlowFlowState, StepControl};
use serde_json::{json, Value};

use crate::args::{
    parse_rows, ClosedFormArgs, ExistenceArgs, NfrcArgs, PrnmArgs, SeedKind, SimulateArgs,
    SlowflowArgs, VerifyArgs,
};
use crate::output::{num, opt, opt_bool, sidecar_path, Payload, Table};

/// Result of one command, before it is written.
pub struct Outcome {
    pub payload: Payload,
    pub params: Value,
    /// An existence query found no window.
    pub empty: bool,
}

impl Outcome {
    fn new(payload: Payload, params: Value) -> Self {
        Self { payload, params, empty: false }
    }
}

fn check_forcing(f: f64) -> Result<()> {
    if !(f >= 0.0 && f.is_finite()) {
        return Err(Error::InvalidParameter(format!("forcing {f} must be finite and >= 0")).into());
    }
    Ok(())
}

fn check_range(lo: f64, hi: f64) -> Result<()> {
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::InvalidParameter(format!("frequency range [{lo}, {hi}] is empty")).into());
    }
    Ok(())
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let d = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    (0..n.max(1)).map(move |i| lo + d * i as f64)
}

pub fn closed_form(cfg: &OscillatorConfig, a: &ClosedFormArgs) -> Result<Outcome> {
    check_forcing(a.forcing)?;
    let rec = closed_form_summary(a.resonance, cfg, a.forcing)?;
    Ok(Outcome::new(
        Payload::Record(serde_json::to_value(rec)?),
        json!({ "resonance": a.resonance, "forcing": a.forcing }),
    ))
}

pub const SLOWFLOW_HEADER: [&str; 9] =
    ["omega", "r", "phi", "stable", "eig_re_1", "eig_im_1", "eig_re_2", "eig_im_2", "family"];

pub fn slowflow_row(s: &SteadyState, res: ResonanceId) -> Vec<Value> {
    let eig = |i: usize, re: bool| {
        opt(s.eigenvalues.map(|e| if re { e[i].re } else { e[i].im }))
    };
    vec![
        num(s.omega),
        num(s.state.r),
        num(s.state.phi),
        opt_bool(s.stable),
        eig(0, true),
        eig(0, false),
        eig(1, true),
        eig(1, false),
        json!(res.to_string()),
    ]
}

pub fn slowflow(cfg: &OscillatorConfig, a: &SlowflowArgs) -> Result<Outcome> {
    check_forcing(a.forcing)?;
    check_range(a.omega_min, a.omega_max)?;
    let sys = SlowFlowSystem::new(a.resonance)?;
    let mut t = Table::new(SLOWFLOW_HEADER);
    for w in linspace(a.omega_min, a.omega_max, a.steps) {
        match sys.find_steady_states(w, cfg, a.forcing) {
            Ok(states) => states.iter().for_each(|s| t.push(slowflow_row(s, a.resonance))),
            Err(Error::SingularFrequency { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Outcome::new(
        Payload::Table(t),
        json!({
            "resonance": a.resonance,
            "forcing": a.forcing,
            "omega_min": a.omega_min,
            "omega_max": a.omega_max,
            "steps": a.steps,
        }),
    ))
}

/// A traced response curve with its phase-resonance points merged in.
pub struct Nfrc {
    pub problem: HbProblem,
    pub branch: Branch,
    pub phase_resonances: Vec<BranchPoint>,
    pub ctrl: StepControl,
}

impl Nfrc {
    /// Branch points in order, with each phase resonance inserted between
    /// the neighbours it was refined from.
    pub fn rows(&self) -> Vec<BranchPoint> {
        let mut rows = self.branch.points.clone();
        for p in &self.phase_resonances {
            let y = state(p);
            let n = rows.len();
            let detour = |i: usize| {
                let (a, b) = (state(&rows[i]), state(&rows[(i + 1) % n]));
                distance(&a, &y) + distance(&y, &b) - distance(&a, &b)
            };
            let last = if self.branch.closed { n } else { n.saturating_sub(1) };
            let best = (0..last).min_by(|&i, &j| detour(i).total_cmp(&detour(j)));
            match best {
                Some(i) => rows.insert(i + 1, p.clone()),
                None => rows.push(p.clone()),
            }
        }
        rows
    }
}

pub fn state(p: &BranchPoint) -> Vec<f64> {
    let mut y = p.solution.to_flat();
    y.push(p.omega);
    y
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Shortest distance from `p` to the polyline through `pts`.
pub fn polyline_distance(pts: &[Vec<f64>], p: &[f64], closed: bool) -> f64 {
    let n = pts.len();
    if n == 1 {
        return distance(&pts[0], p);
    }
    let segs = if closed { n } else { n - 1 };
    (0..segs)
        .map(|i| {
            let (a, b) = (&pts[i], &pts[(i + 1) % n]);
            let ab: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
            let len2: f64 = ab.iter().map(|x| x * x).sum();
            let t = if len2 > 0.0 {
                (a.iter().zip(p).zip(&ab).map(|((x, q), d)| (q - x) * d).sum::<f64>() / len2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let c: Vec<f64> = a.iter().zip(&ab).map(|(x, d)| x + t * d).collect();
            distance(&c, p)
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn compute_nfrc(
    cfg: &OscillatorConfig,
    res: ResonanceId,
    f: f64,
    range: (f64, f64),
    n_harmonics: usize,
    samples: usize,
    seed: SeedKind,
    ctrl: StepControl,
) -> Result<Nfrc> {
    check_forcing(f)?;
    check_range(range.0, range.1)?;
    let problem = HbProblem::new(*cfg, f, res, n_harmonics, samples)?;
    let branch = match seed {
        SeedKind::Slowflow => trace_family(&problem, range, &ctrl)?,
        SeedKind::Linear => {
            let w = range.0;
            continue_branch(&problem, &linear_seed(&problem, w), w, range, &ctrl)?
        }
    };
    let phase_resonances = detect_phase_resonance(&problem, &branch);
    Ok(Nfrc { problem, branch, phase_resonances, ctrl })
}

pub fn nfrc_header(n: usize) -> Vec<String> {
    let mut h = vec!["omega".to_string(), "max_disp".into(), "A0".into()];
    for k in 1..=n {
        h.push(format!("A{k}"));
        h.push(format!("phi{k}"));
    }
    h.push("stable".into());
    h.push("tags".into());
    h
}

fn tag_text(tags: &[PointTag]) -> String {
    tags.iter()
        .map(|t| match t {
            PointTag::Fold => "fold".to_string(),
            PointTag::PhaseResonance(k) => format!("pr{k}"),
        })
        .collect::<Vec<_>>()
        .join(";")
}

pub fn nfrc_row(p: &BranchPoint) -> Vec<Value> {
    let s = &p.solution;
    let mut row = vec![num(p.omega), num(p.max_displacement), num(s.a0)];
    for k in 1..=s.n_harmonics() {
        row.push(num(s.amplitude(k)));
        row.push(num(s.phase(k)));
    }
    row.push(opt_bool(p.stable));
    row.push(json!(tag_text(&p.tags)));
    row
}

pub fn nfrc_table(points: &[BranchPoint], n: usize) -> Table {
    let mut t = Table::new(nfrc_header(n));
    points.iter().for_each(|p| t.push(nfrc_row(p)));
    t
}

fn nfrc_script(data: &Path, res: ResonanceId, f: f64, tags: usize) -> String {
    let k = res.k();
    let col_a = 3 + 2 * k;
    format!(
        "set datafile separator ','\n\
         set datafile columnheaders\n\
         set terminal pngcairo size 900,600\n\
         set output 'nfrc.png'\n\
         set xlabel 'omega (rad/s)'\n\
         set ylabel 'A{k} (m)'\n\
         set title '{res} response, f = {f} N'\n\
         plot '{d}' using 1:{col_a} with lines lc rgb 'black' title 'branch', \\\n\
         \x20    '{d}' using 1:(strstrt(strcol({tags}), 'pr') > 0 ? column({col_a}) : 1/0) with points pt 7 lc rgb 'red' title 'phase resonance'\n",
        d = data.display(),
    )
}

pub fn nfrc(cfg: &OscillatorConfig, a: &NfrcArgs, out: Option<&Path>) -> Result<Outcome> {
    let ctrl = StepControl { max: a.max_step, ..StepControl::default() };
    let run = compute_nfrc(
        cfg,
        a.resonance,
        a.forcing,
        (a.omega_min, a.omega_max),
        a.harmonics,
        a.samples,
        a.seed,
        ctrl,
    )?;
    let table = nfrc_table(&run.rows(), a.harmonics);
    if let Some(script) = &a.emit_plot {
        let data = match out {
            Some(p) => p.to_path_buf(),
            None => {
                let p = script.with_extension("csv");
                table.save(&p)?;
                p
            }
        };
        let text = nfrc_script(&data, a.resonance, a.forcing, table.header.len());
        fs::write(script, text).with_context(|| format!("writing {}", script.display()))?;
    }
    Ok(Outcome::new(
        Payload::Table(table),
        json!({
            "resonance": a.resonance,
            "forcing": a.forcing,
            "omega_min": a.omega_min,
            "omega_max": a.omega_max,
            "harmonics": a.harmonics,
            "samples": a.samples,
            "seed": format!("{:?}", a.seed).to_lowercase(),
            "step_control": ctrl,
            "closed": run.branch.closed,
            "folds": run.branch.folds().count(),
            "phase_resonances": run.phase_resonances.len(),
        }),
    ))
}

fn locus_of(res: ResonanceId) -> Option<Locus> {
    match (res.k(), res.nu()) {
        (1, 3) => Some(Locus::Sub13Phase),
        (1, 2) => Some(Locus::Sub12Phase),
        _ => None,
    }
}

/// Phase-resonance curve over forcing: `(f, omega_p, A_p)` per level for
/// the closed-form families, or the locus sampled in frequency.
pub fn prnm_table(
    cfg: &OscillatorConfig,
    res: ResonanceId,
    (f_min, f_max): (f64, f64),
    n: usize,
    omega_range: Option<(f64, f64)>,
) -> Result<Table> {
    check_forcing(f_min)?;
    if !(f_max >= f_min) {
        return Err(Error::InvalidParameter("f_max must be >= f_min".into()).into());
    }
    let mut t = Table::new(["f", "omega_p", "amp_p", "root"]);
    let point = |f: f64| match (res.k(), res.nu()) {
        (1, 1) => Some(primary_phase_resonance(cfg, f)),
        (3, 1) => Some(super31_phase_resonance(cfg, f)),
        _ => None,
    };
    if point(f_min).is_some() {
        for f in linspace(f_min, f_max, n) {
            let p = point(f).unwrap()?;
            t.push(vec![num(f), num(p.omega), num(p.amplitude), Value::Null]);
        }
        return Ok(t);
    }
    let locus = locus_of(res)
        .ok_or_else(|| Error::UnsupportedFamily(res.to_string()))
        .context("phase-resonance curves exist for 1:1, 3:1, 1:3 and 1:2")?;
    let nominal = res.nominal_frequency(cfg.omega0());
    let (lo, hi) = omega_range.unwrap_or((nominal * 1.0001, nominal * 5.0));
    check_range(lo, hi)?;
    for sign in [RootSign::Minus, RootSign::Plus] {
        for w in linspace(lo, hi, n) {
            let Ok(pair) = locus_at(locus, cfg, w) else { continue };
            let Some(p) = pair.iter().find(|p| p.root_sign == sign) else { continue };
            let f = p.forcing_gamma_bar * cfg.mass;
            if p.amplitude.is_finite() && f.is_finite() && (f_min..=f_max).contains(&f) {
                let root = if sign == RootSign::Plus { "plus" } else { "minus" };
                t.push(vec![num(f), num(p.omega_p), num(p.amplitude), json!(root)]);
            }
        }
    }
    Ok(t)
}

pub fn prnm_curve(cfg: &OscillatorConfig, a: &PrnmArgs) -> Result<Outcome> {
    let range = a.omega_min.zip(a.omega_max);
    let t = prnm_table(cfg, a.resonance, (a.f_min, a.f_max), a.n, range)?;
    Ok(Outcome::new(
        Payload::Table(t),
        json!({
            "resonance": a.resonance,
            "f_min": a.f_min,
            "f_max": a.f_max,
            "n": a.n,
            "omega_range": range,
        }),
    ))
}

pub fn existence_window(
    cfg: &OscillatorConfig,
    res: ResonanceId,
    f: f64,
    range: Option<(f64, f64)>,
) -> Result<((f64, f64), Option<(f64, f64)>)> {
    check_forcing(f)?;
    let nominal = res.nominal_frequency(cfg.omega0());
    let range = range.unwrap_or((0.75 * nominal, 3.0 * nominal));
    check_range(range.0, range.1)?;
    let window = match (res.k(), res.nu()) {
        (1, 2) => sub12_existence_window(cfg, f, range)?,
        (5, 1) => super51_existence_window(cfg, f, range)?,
        _ => {
            return Err(Error::UnsupportedFamily(res.to_string()))
                .context("existence windows exist for 1:2 and 5:1")
        }
    };
    Ok((range, window))
}

pub fn existence(cfg: &OscillatorConfig, a: &ExistenceArgs) -> Result<Outcome> {
    let (range, window) = existence_window(cfg, a.resonance, a.forcing, a.omega_min.zip(a.omega_max))?;
    let mut t = Table::new(["resonance", "forcing", "omega_inf", "omega_sup"]);
    t.push(vec![
        json!(a.resonance.to_string()),
        num(a.forcing),
        opt(window.map(|w| w.0)),
        opt(window.map(|w| w.1)),
    ]);
    let mut out = Outcome::new(
        Payload::Table(t),
        json!({ "resonance": a.resonance, "forcing": a.forcing, "omega_range": range }),
    );
    out.empty = window.is_none();
    Ok(out)
}

fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut rd = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let header = rd.headers()?.iter().map(str::to_string).collect();
    let rows = rd
        .records()
        .map(|r| r.map(|r| r.iter().map(str::to_string).collect()))
        .collect::<std::result::Result<_, _>>()?;
    Ok((header, rows))
}

fn column(header: &[String], name: &str) -> Result<usize> {
    header
        .iter()
        .position(|h| h == name)
        .with_context(|| format!("column `{name}` missing"))
}

fn field(row: &[String], i: usize) -> Result<f64> {
    row[i].parse().with_context(|| format!("bad number `{}`", row[i]))
}

fn stable_field(s: &str) -> Option<bool> {
    s.parse().ok()
}

enum VerifyPoint {
    Branch(BranchPoint),
    SlowFlow(SteadyState),
}

fn branch_point(header: &[String], row: &[String], nu: f64) -> Result<BranchPoint> {
    let omega = field(row, column(header, "omega")?)?;
    let n = header.iter().filter(|h| h.starts_with("phi")).count();
    let mut sol = HarmonicSolution::zeros(omega / nu, n);
    sol.a0 = field(row, column(header, "A0")?)?;
    for k in 1..=n {
        let a = field(row, column(header, &format!("A{k}"))?)?;
        let phi = field(row, column(header, &format!("phi{k}"))?)?;
        sol.set_polar(k, a, phi);
    }
    Ok(BranchPoint {
        omega,
        max_displacement: sol.max_displacement(),
        solution: sol,
        stable: stable_field(&row[column(header, "stable")?]),
        tags: Vec::new(),
    })
}

fn steady_state(header: &[String], row: &[String]) -> Result<SteadyState> {
    Ok(SteadyState {
        state: SlowFlowState {
            r: field(row, column(header, "r")?)?,
            phi: field(row, column(header, "phi")?)?,
        },
        omega: field(row, column(header, "omega")?)?,
        residual_norm: 0.0,
        stable: stable_field(&row[column(header, "stable")?]),
        eigenvalues: None,
    })
}

/// Reports for the rows of an `nfrc` or `slowflow` file. The sidecar
/// supplies the family, forcing and oscillator.
pub fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let meta_path = sidecar_path(&a.from_csv);
    let meta: Value = serde_json::from_str(
        &fs::read_to_string(&meta_path).with_context(|| format!("reading {}", meta_path.display()))?,
    )?;
    let cfg: OscillatorConfig = serde_json::from_value(meta["oscillator"].clone()).context("sidecar oscillator")?;
    cfg.validate()?;
    let params = &meta["parameters"];
    let res: ResonanceId = serde_json::from_value(params["resonance"].clone()).context("sidecar resonance")?;
    let f = params["forcing"].as_f64().context("sidecar forcing")?;
    let (header, rows) = read_csv(&a.from_csv)?;
    let (lo, hi) = match &a.rows {
        Some(s) => parse_rows(s).ok_or_else(|| Error::InvalidParameter(format!("row range `{s}`")))?,
        None => (0, usize::MAX),
    };
    let slow = header.iter().any(|h| h == "r");
    let points = rows[lo.min(rows.len())..hi.min(rows.len())]
        .iter()
        .map(|row| {
            Ok(if slow {
                VerifyPoint::SlowFlow(steady_state(&header, row)?)
            } else {
                VerifyPoint::Branch(branch_point(&header, row, res.nu() as f64)?)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let tol = Tolerances {
        amplitude: a.amplitude_tol,
        phase: a.phase_tol,
        steps_per_period: a.steps_per_period,
        ..Tolerances::default()
    };
    let reports: Vec<Value> = points
        .iter()
        .map(|p| {
            let r = match p {
                VerifyPoint::Branch(b) => verify_point(PointRef::Branch(b), &cfg, f, &tol),
                VerifyPoint::SlowFlow(s) => verify_point(PointRef::SlowFlow(s, res), &cfg, f, &tol),
            };
            serde_json::to_value(r)
        })
        .collect::<std::result::Result<_, _>>()?;
    Ok(Outcome::new(
        Payload::Record(Value::Array(reports)),
        json!({
            "source": a.from_csv,
            "rows": [lo, hi.min(rows.len())],
            "resonance": res,
            "forcing": f,
            "tolerances": tol,
        }),
    ))
}

pub fn simulate(cfg: &OscillatorConfig, a: &SimulateArgs) -> Result<Outcome> {
    check_forcing(a.forcing)?;
    if !(a.omega > 0.0) || a.periods == 0 {
        bail!(Error::InvalidParameter("omega must be > 0 and periods >= 1".into()));
    }
    let forcing = Forcing::new(a.forcing, a.omega)?;
    let traj = integrate(cfg, &forcing, a.x0, a.v0, a.periods, a.steps_per_period)?;
    let mut t = Table::new(["t", "x", "v"]);
    for i in 0..traj.len() {
        t.push(vec![num(traj.time(i)), num(traj.x[i]), num(traj.v[i])]);
    }
    Ok(Outcome::new(
        Payload::Table(t),
        json!({
            "forcing": a.forcing,
            "omega": a.omega,
            "x0": a.x0,
            "v0": a.v0,
            "periods": a.periods,
            "steps_per_period": a.steps_per_period,
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polyline_distance_to_segment() {
        let pts = vec![vec![0.0, 0.0], vec![2.0, 0.0]];
        assert!((polyline_distance(&pts, &[1.0, 1.0], false) - 1.0).abs() < 1e-15);
        assert!((polyline_distance(&pts, &[3.0, 0.0], false) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn primary_prnm_starts_at_natural_frequency() {
        let cfg = OscillatorConfig::default();
        let t = prnm_table(&cfg, ResonanceId::PRIMARY, (0.0, 0.01), 10, None).unwrap();
        assert_eq!(t.rows.len(), 10);
        assert!((t.rows[0][1].as_f64().unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(t.rows[0][2], json!(0.0));
        let last = t.rows[9][1].as_f64().unwrap();
        assert!((last - 1.5f64.sqrt()).abs() < 1e-9);
        let w: Vec<f64> = t.rows.iter().map(|r| r[1].as_f64().unwrap()).collect();
        assert!(w.windows(2).all(|p| p[1] > p[0]));
    }

    #[test]
    fn super31_prnm_row() {
        let cfg = OscillatorConfig::default();
        let t = prnm_table(&cfg, ResonanceId::new(3, 1).unwrap(), (0.2, 0.2), 1, None).unwrap();
        assert!((t.rows[0][1].as_f64().unwrap() - 0.35430).abs() < 5e-5);
        assert!((t.rows[0][2].as_f64().unwrap() - 0.2679).abs() < 5e-4);
    }

    #[test]
    fn prnm_rejects_other_families() {
        let cfg = OscillatorConfig::default();
        let err = prnm_table(&cfg, ResonanceId::new(5, 1).unwrap(), (0.1, 0.2), 3, None).unwrap_err();
        assert!(matches!(err.downcast_ref::<Error>(), Some(Error::UnsupportedFamily(_))));
    }

    #[test]
    fn sub12_window_threshold() {
        let cfg = OscillatorConfig::default();
        let res = ResonanceId::new(1, 2).unwrap();
        assert!(existence_window(&cfg, res, 0.8, None).unwrap().1.is_none());
        assert!(existence_window(&cfg, res, 1.0, None).unwrap().1.is_some());
    }
}
