//! Figure layouts: branch, locus and resonance-point files plus a gnuplot
//! script, with the property checks that stand in for a visual comparison.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use anyhow::{Context, Result};
use duffing_core::closed_form::{
    locus_at, locus_points_at_forcing, primary_phase_resonance, sub12_existence_window,
    sub12_inequality, super31_phase_resonance, Locus,
};
use duffing_core::slow_flow::{SlowFlowBranch, SlowFlowSystem, SteadyState};
use duffing_core::{OscillatorConfig, ResonanceId, StepControl};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{FigureId, SeedKind};
use crate::commands::{
    compute_nfrc, nfrc_table, polyline_distance, prnm_table, slowflow_row, state, Nfrc,
    SLOWFLOW_HEADER,
};
use crate::output::{num, opt, provenance, sidecar_path, version_string, write_json, Table};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    fn below(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, limit, pass: value < limit }
    }

    fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self { name: name.into(), value: ok as u8 as f64, limit: 1.0, pass: ok }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FigureReport {
    pub figure: String,
    pub dir: PathBuf,
    pub files: Vec<String>,
    pub checks: Vec<Check>,
}

impl FigureReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

struct Writer<'a> {
    dir: &'a Path,
    cfg: &'a OscillatorConfig,
    files: Vec<String>,
}

impl Writer<'_> {
    fn table(&mut self, name: &str, t: &Table) -> Result<()> {
        t.save(&self.dir.join(name))?;
        self.files.push(name.to_string());
        Ok(())
    }

    /// A table `verify --from-csv` can read back.
    fn verifiable(&mut self, name: &str, t: &Table, command: &str, res: ResonanceId, f: f64) -> Result<()> {
        self.table(name, t)?;
        let meta = provenance(command, json!({ "resonance": res, "forcing": f }), self.cfg);
        write_json(&sidecar_path(&self.dir.join(name)), &meta)
    }

    fn script(&mut self, body: &str, id: &str) -> Result<()> {
        let text = format!(
            "set datafile separator ','\nset datafile columnheaders\n\
             set terminal pngcairo size 1000,700\nset output '{id}.png'\n{body}"
        );
        fs::write(self.dir.join("plot.gp"), text)?;
        self.files.push("plot.gp".into());
        Ok(())
    }
}

fn uv(s: &SteadyState) -> Vec<f64> {
    vec![s.state.r * s.state.phi.cos(), s.state.r * s.state.phi.sin(), s.omega]
}

fn slow_branch_distance(b: &SlowFlowBranch, s: &SteadyState) -> f64 {
    let pts: Vec<Vec<f64>> = b.points.iter().map(uv).collect();
    polyline_distance(&pts, &uv(s), b.closed)
}

struct SlowLayout {
    res: ResonanceId,
    levels: [f64; 3],
    range: (f64, f64),
    /// Forcing span of the locus file.
    locus_forcing: (f64, f64),
    /// Closed-form quadrature frequencies at forcing `f`.
    locus_omegas: fn(&OscillatorConfig, f64) -> Vec<f64>,
    /// Check the crossings against the locus to this frequency tolerance.
    locus_tol: Option<f64>,
    ylabel: &'static str,
}

fn primary_omegas(cfg: &OscillatorConfig, f: f64) -> Vec<f64> {
    primary_phase_resonance(cfg, f).map(|p| vec![p.omega]).unwrap_or_default()
}

fn super31_omegas(cfg: &OscillatorConfig, f: f64) -> Vec<f64> {
    super31_phase_resonance(cfg, f).map(|p| vec![p.omega]).unwrap_or_default()
}

fn sub13_omegas(cfg: &OscillatorConfig, f: f64) -> Vec<f64> {
    let w = 3.0 * cfg.omega0();
    locus_points_at_forcing(Locus::Sub13Phase, cfg, f, (w * 1.0001, 5.0 * w), 4000)
        .iter()
        .map(|p| p.omega_p)
        .collect()
}

fn slow_flow_figure(id: &str, cfg: &OscillatorConfig, dir: &Path, layout: &SlowLayout) -> Result<FigureReport> {
    let sys = SlowFlowSystem::new(layout.res)?;
    let ctrl = StepControl::default();
    let runs: Vec<Result<(SlowFlowBranch, Vec<SteadyState>)>> = thread::scope(|s| {
        let handles: Vec<_> = layout
            .levels
            .iter()
            .map(|&f| {
                s.spawn(move || {
                    let b = sys.sweep_branch(layout.range.0, layout.range.1, cfg, f, &ctrl)?;
                    let pr = sys.phase_resonances(&b, cfg, f);
                    Ok((b, pr))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut w = Writer { dir, cfg, files: Vec::new() };
    let mut checks = Vec::new();
    let mut points = Table::new(["f", "omega", "r", "phi", "locus_omega", "branch_distance"]);
    let mut plot = format!(
        "set xlabel 'omega (rad/s)'\nset ylabel '{}'\nset title '{} response'\nplot \\\n",
        layout.ylabel, layout.res
    );
    for (&f, run) in layout.levels.iter().zip(runs) {
        let (branch, prs) = run.with_context(|| format!("{} at f = {f}", layout.res))?;
        let mut t = Table::new(SLOWFLOW_HEADER);
        branch.points.iter().for_each(|p| t.push(slowflow_row(p, layout.res)));
        let name = format!("branch_f{f}.csv");
        w.verifiable(&name, &t, "slowflow", layout.res, f)?;
        let _ = writeln!(plot, "  '{name}' using 1:2 with lines lc rgb 'black' title 'f = {f} N', \\");
        checks.push(Check::holds(format!("f={f}: phase resonance found"), !prs.is_empty()));
        let loci = (layout.locus_omegas)(cfg, f);
        for p in &prs {
            let near = loci
                .iter()
                .copied()
                .min_by(|a, b| (a - p.omega).abs().total_cmp(&(b - p.omega).abs()));
            let d = slow_branch_distance(&branch, p);
            checks.push(Check::below(format!("f={f}: crossing at {:.6} on branch", p.omega), d, ctrl.max));
            if let Some(tol) = layout.locus_tol {
                let off = near.map_or(f64::INFINITY, |n| (n - p.omega).abs());
                checks.push(Check::below(format!("f={f}: crossing at {:.6} on locus", p.omega), off, tol));
            }
            points.push(vec![num(f), num(p.omega), num(p.state.r), num(p.state.phi), opt(near), num(d)]);
        }
    }
    w.table("phase_resonance.csv", &points)?;
    let (f0, f1) = layout.locus_forcing;
    let locus = prnm_table(cfg, layout.res, (f0, f1), 400, None)?;
    w.table("locus.csv", &locus)?;
    let _ = writeln!(
        plot,
        "  'locus.csv' using 2:3 with lines lw 2 lc rgb 'orange' title 'phase resonance curve', \\\n  \
         'phase_resonance.csv' using 2:3 with points pt 7 lc rgb 'red' title 'quadrature points'"
    );
    w.script(&plot, id)?;
    Ok(FigureReport { figure: id.into(), dir: dir.into(), files: w.files, checks })
}

fn fig4(cfg: &OscillatorConfig, dir: &Path) -> Result<FigureReport> {
    let levels = [0.8, 1.0, 3.0];
    let range = (1.5, 6.0);
    let mut w = Writer { dir, cfg, files: Vec::new() };
    let mut scan = Table::new(["omega", "lhs", "rhs_f0.8", "rhs_f1", "rhs_f3"]);
    let n = 1500;
    for i in 0..=n {
        let om = range.0 + (range.1 - range.0) * i as f64 / n as f64;
        let sides: Vec<_> = levels.iter().map(|&f| sub12_inequality(cfg, f, om).ok()).collect();
        let lhs = sides.iter().flatten().next().map(|s| s.0);
        let mut row = vec![num(om), opt(lhs)];
        row.extend(sides.iter().map(|s| opt(s.map(|s| s.1))));
        scan.push(row);
    }
    w.table("inequality.csv", &scan)?;
    let mut windows = Table::new(["f", "omega_inf", "omega_sup"]);
    let mut checks = Vec::new();
    for &f in &levels {
        let win = sub12_existence_window(cfg, f, range)?;
        windows.push(vec![num(f), opt(win.map(|x| x.0)), opt(win.map(|x| x.1))]);
        let expect = f > 0.9;
        checks.push(Check::holds(
            format!("f={f}: window {}", if expect { "non-empty" } else { "empty" }),
            win.is_some() == expect,
        ));
    }
    w.table("windows.csv", &windows)?;
    let min_f = (0..=4000)
        .filter_map(|i| {
            let om = 2.0001 + 4.0 * i as f64 / 4000.0;
            locus_at(Locus::Sub12Phase, cfg, om).ok().map(|p| p[0].forcing_gamma_bar * cfg.mass)
        })
        .filter(|f| f.is_finite())
        .fold(f64::INFINITY, f64::min);
    checks.push(Check::holds(format!("minimum locus forcing {min_f:.4} in (0.8, 1.0)"), min_f > 0.8 && min_f < 1.0));
    let plot = "set xlabel 'omega (rad/s)'\nset ylabel 'inequality sides'\nset yrange [0:*]\n\
                set title '1:2 existence'\nplot 'inequality.csv' using 1:2 with lines lc rgb 'black' title 'lhs', \\\n  \
                '' using 1:3 with lines lc rgb 'blue' title 'f = 0.8 N', \\\n  \
                '' using 1:4 with lines lc rgb 'red' title 'f = 1 N', \\\n  \
                '' using 1:5 with lines lc rgb 'green' title 'f = 3 N'\n";
    w.script(plot, "fig4")?;
    Ok(FigureReport { figure: "fig4".into(), dir: dir.into(), files: w.files, checks })
}

/// Harmonic-balance cases: family, forcing and frequency window.
pub const FIG5_CASES: [((u32, u32), f64, (f64, f64)); 6] = [
    ((1, 1), 0.01, (0.8, 1.6)),
    ((3, 1), 0.2, (0.3, 0.4)),
    ((5, 1), 0.3, (0.15, 0.3)),
    ((7, 1), 0.45, (0.1, 0.2)),
    ((1, 3), 0.6, (2.5, 8.0)),
    ((1, 2), 2.0, (1.8, 5.0)),
];

fn fig5(cfg: &OscillatorConfig, dir: &Path) -> Result<FigureReport> {
    let ctrl = StepControl::default();
    let runs: Vec<Result<Nfrc>> = thread::scope(|s| {
        let handles: Vec<_> = FIG5_CASES
            .iter()
            .map(|&((k, nu), f, range)| {
                s.spawn(move || {
                    let res = ResonanceId::new(k, nu)?;
                    compute_nfrc(cfg, res, f, range, 15, 128, SeedKind::Slowflow, ctrl)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut w = Writer { dir, cfg, files: Vec::new() };
    let mut checks = Vec::new();
    let mut dots = Table::new(["family", "omega", "max_disp", "amplitude", "phase", "branch_distance"]);
    let mut plot = String::from(
        "set xlabel 'omega (rad/s)'\nset ylabel 'max |x| (m)'\nset logscale x\nset title 'response curves'\nplot \\\n",
    );
    for (&((k, nu), f, _), run) in FIG5_CASES.iter().zip(runs) {
        let run = run.with_context(|| format!("{k}:{nu} at f = {f}"))?;
        let res = run.problem.resonance;
        let name = format!("nfrc_{k}_{nu}.csv");
        w.verifiable(&name, &nfrc_table(&run.rows(), run.problem.n_harmonics()), "nfrc", res, f)?;
        let _ = writeln!(plot, "  '{name}' using 1:2 with lines title '{res}, f = {f} N', \\");
        let pts: Vec<Vec<f64>> = run.branch.points.iter().map(state).collect();
        checks.push(Check::holds(format!("{res}: phase resonance found"), !run.phase_resonances.is_empty()));
        for p in &run.phase_resonances {
            let d = polyline_distance(&pts, &state(p), run.branch.closed);
            checks.push(Check::below(format!("{res}: point at {:.6} on branch", p.omega), d, run.ctrl.max));
            let kk = run.problem.k();
            dots.push(vec![
                json!(res.to_string()),
                num(p.omega),
                num(p.max_displacement),
                num(p.amplitude(kk)),
                num(p.phase(kk)),
                num(d),
            ]);
        }
    }
    w.table("phase_resonance.csv", &dots)?;
    let _ = writeln!(plot, "  'phase_resonance.csv' using 2:3 with points pt 7 lc rgb 'red' title 'phase resonance'");
    w.script(&plot, "fig5")?;
    Ok(FigureReport { figure: "fig5".into(), dir: dir.into(), files: w.files, checks })
}

pub fn figure_name(id: FigureId) -> &'static str {
    match id {
        FigureId::Fig1 => "fig1",
        FigureId::Fig2 => "fig2",
        FigureId::Fig3 => "fig3",
        FigureId::Fig4 => "fig4",
        FigureId::Fig5 => "fig5",
    }
}

/// Run one figure pipeline into `dir` and write its `meta.json`.
pub fn render(id: FigureId, cfg: &OscillatorConfig, dir: &Path) -> Result<FigureReport> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let name = figure_name(id);
    let primary = SlowLayout {
        res: ResonanceId::PRIMARY,
        levels: [0.001, 0.005, 0.01],
        range: (0.8, 1.6),
        locus_forcing: (0.0, 0.012),
        locus_omegas: primary_omegas,
        locus_tol: Some(1e-3),
        ylabel: "A1 (m)",
    };
    let mut report = match id {
        FigureId::Fig1 => slow_flow_figure(name, cfg, dir, &primary)?,
        FigureId::Fig2 => slow_flow_figure(
            name,
            cfg,
            dir,
            &SlowLayout {
                res: ResonanceId::new(3, 1)?,
                levels: [0.1, 0.15, 0.2],
                range: (0.25, 0.45),
                locus_forcing: (0.0, 0.25),
                locus_omegas: super31_omegas,
                locus_tol: None,
                ylabel: "A3 (m)",
            },
        )?,
        FigureId::Fig3 => slow_flow_figure(
            name,
            cfg,
            dir,
            &SlowLayout {
                res: ResonanceId::new(1, 3)?,
                levels: [0.3, 0.6, 1.0],
                range: (2.5, 15.0),
                locus_forcing: (0.0, 1.2),
                locus_omegas: sub13_omegas,
                locus_tol: None,
                ylabel: "A1 (m)",
            },
        )?,
        FigureId::Fig4 => fig4(cfg, dir)?,
        FigureId::Fig5 => fig5(cfg, dir)?,
    };
    report.files.push("meta.json".into());
    write_json(
        &dir.join("meta.json"),
        &json!({
            "version": version_string(),
            "figure": name,
            "oscillator": cfg,
            "files": report.files,
            "checks": report.checks,
            "passed": report.passed(),
        }),
    )?;
    Ok(report)
}

pub fn report_json(r: &FigureReport) -> Value {
    serde_json::to_value(r).unwrap_or(Value::Null)
}
