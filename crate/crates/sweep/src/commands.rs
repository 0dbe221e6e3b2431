//! The sweep commands. Each evaluates its grid in parallel and gathers the
//! rows by grid index, so output order never depends on scheduling.

use ptdimer_core::{
    classify_regime, heff_spectrum, observables, order_parameter_general, stationary_gaussian, Error as CoreError,
    Mat2, SystemParams, Vec2, C64, DEFAULT_TOL,
};
use ptdimer_oracle::{coherent_first_moments, cutoff_scan, FockConfig, FockMoments, OdeOptions, OracleError};
use rayon::prelude::*;

use crate::error::{Result, SweepError};
use crate::spec::{Command, Engine, Scale, SweepSpec};
use crate::table::{Row, Status, SweepTable};

/// Tolerance of the phase-diagram markers (relative to `J`).
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Denominator floor of relative discrepancies.
const REL_FLOOR: f64 = 1e-12;

/// Run the command of a resolved spec.
pub fn run(spec: &SweepSpec) -> Result<SweepTable> {
    let mut table = match spec.command {
        Command::StabilityMap => cmd_stability_map(spec)?,
        Command::IntensityMap => cmd_intensity_map(spec)?,
        Command::Linecut => cmd_linecut(spec)?,
        Command::SnrMap => cmd_snr_map(spec)?,
        Command::Transient => cmd_transient(spec)?,
        Command::Verify => cmd_verify(spec)?,
    };
    table.metadata = metadata(spec);
    Ok(table)
}

/// Process exit code for a finished table: 2 if any analytic/oracle
/// comparison failed, else 3 if the oracle ran out of resources, else 0.
pub fn exit_code(table: &SweepTable) -> i32 {
    if table.count(Status::Mismatch) > 0 {
        2
    } else if table.count(Status::CutoffTooSmall) + table.count(Status::NotConverged) > 0 {
        3
    } else {
        0
    }
}

fn metadata(spec: &SweepSpec) -> Vec<(String, String)> {
    let mut m = vec![
        ("command".to_string(), spec.command.name().to_string()),
        ("version".into(), env!("CARGO_PKG_VERSION").into()),
        ("engine".into(), format!("{:?}", spec.engine).to_lowercase()),
        ("tolerance".into(), format!("{:e}", spec.tolerance)),
    ];
    if spec.engine != Engine::Analytic {
        m.push(("oracle.scan_tol".into(), format!("{:e}", spec.scan_tol)));
        m.push(("oracle.max_cutoff".into(), spec.max_cutoff.to_string()));
        if spec.command == Command::Transient {
            m.push(("transient.cutoff".into(), spec.transient_cutoff.to_string()));
        }
    }
    if spec.command == Command::Transient {
        m.push(("transient.a0".into(), format!("{:?}", spec.a0)));
    }
    for name in SystemParams::NAMES {
        if let Some(v) = spec.fixed.get(name) {
            m.push((format!("fixed.{name}"), format!("{v}")));
        }
    }
    for a in &spec.axes {
        let scale = if a.scale == Scale::Log { "log" } else { "linear" };
        m.push((format!("axis.{}", a.name), format!("{}:{}:{}:{scale}", a.min, a.max, a.count)));
    }
    m
}

fn par_map<T: Send>(spec: &SweepSpec, n: usize, f: impl Fn(usize) -> T + Sync) -> Result<Vec<T>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| SweepError::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(|| (0..n).into_par_iter().map(&f).collect()))
}

fn core_status(e: &CoreError) -> Status {
    match e {
        CoreError::Unstable => Status::Unstable,
        CoreError::SingularParameters(_) => Status::Singular,
        _ => Status::Error,
    }
}

fn oracle_status(e: &OracleError) -> Status {
    match e {
        OracleError::CutoffTooSmall(_) => Status::CutoffTooSmall,
        OracleError::Unstable => Status::Unstable,
        OracleError::NotConverged(_) | OracleError::DivergenceDetected { .. } => Status::NotConverged,
        OracleError::Model(m) => core_status(m),
        _ => Status::Error,
    }
}

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(REL_FLOOR)
}

fn ratio(num: f64, den2: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else {
        num / den2.max(0.0).sqrt()
    }
}

/// Stationary moments from either engine.
#[derive(Debug, Clone, Copy)]
struct Obs {
    mean: Vec2,
    rho: Mat2,
    i: [f64; 2],
    d: [f64; 2],
}

impl Obs {
    fn value(&self, name: &str) -> f64 {
        let snr1 = |n: usize| ratio(self.mean[n].norm(), self.i[n] - self.mean[n].norm_sqr());
        let snr2 = |n: usize| ratio(self.i[n], self.d[n]);
        match name {
            "i1" => self.i[0],
            "i2" => self.i[1],
            "d1" => self.d[0],
            "d2" => self.d[1],
            "snr1_1" => snr1(0),
            "snr1_2" | "snr1" => snr1(1),
            "snr2_1" => snr2(0),
            "snr2_2" | "snr2" => snr2(1),
            "band_lo" => self.i[1] - self.d[1].sqrt(),
            "band_hi" => self.i[1] + self.d[1].sqrt(),
            "band_ratio" => self.d[1].sqrt() / self.i[1],
            _ => unreachable!("unknown observable `{name}`"),
        }
    }
}

fn analytic(p: &SystemParams) -> std::result::Result<Obs, Status> {
    p.validate().map_err(|e| core_status(&e))?;
    let g = stationary_gaussian(p, DEFAULT_TOL).map_err(|e| core_status(&e))?;
    let o = observables(&g, p);
    Ok(Obs { mean: o.mean_a, rho: o.rho, i: o.intensity, d: o.dispersion })
}

fn oracle(p: &SystemParams, spec: &SweepSpec) -> std::result::Result<(usize, Obs), Status> {
    p.validate().map_err(|e| core_status(&e))?;
    let (cfg, state) =
        cutoff_scan(p, spec.scan_tol, &FockConfig::displaced(1), spec.max_cutoff).map_err(|e| oracle_status(&e))?;
    let m: FockMoments = state.moments();
    Ok((cfg.cutoff, Obs { mean: m.mean_a, rho: m.rho, i: m.intensity, d: m.dispersion }))
}

/// Columns produced by [`observable_rows`] for the given names and engine.
fn observable_columns(names: &[&str], engine: Engine) -> Vec<String> {
    let mut c: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    match engine {
        Engine::Analytic => {}
        Engine::Oracle => c.push("cutoff".into()),
        Engine::Both => {
            c.extend(names.iter().map(|s| format!("{s}_oracle")));
            c.push("max_rel".into());
            c.push("cutoff".into());
        }
    }
    c
}

/// Values and status of stationary observables at one point.
fn observable_values(p: &SystemParams, names: &[&str], spec: &SweepSpec) -> (Vec<Option<f64>>, Status) {
    let width = observable_columns(names, spec.engine).len();
    let fill = |v: &mut Vec<Option<f64>>| v.resize(width, None);
    let mut v = Vec::with_capacity(width);
    match spec.engine {
        Engine::Analytic => match analytic(p) {
            Ok(o) => (names.iter().map(|n| Some(o.value(n))).collect(), Status::Ok),
            Err(s) => (vec![None; width], s),
        },
        Engine::Oracle => match oracle(p, spec) {
            Ok((nc, o)) => {
                v.extend(names.iter().map(|n| Some(o.value(n))));
                v.push(Some(nc as f64));
                (v, Status::Ok)
            }
            Err(s) => (vec![None; width], s),
        },
        Engine::Both => {
            let a = match analytic(p) {
                Ok(a) => a,
                Err(s) => return (vec![None; width], s),
            };
            v.extend(names.iter().map(|n| Some(a.value(n))));
            let (nc, o) = match oracle(p, spec) {
                Ok(r) => r,
                Err(s) => {
                    fill(&mut v);
                    return (v, s);
                }
            };
            v.extend(names.iter().map(|n| Some(o.value(n))));
            let worst = names.iter().map(|n| rel(a.value(n), o.value(n))).fold(0.0, f64::max);
            v.push(Some(worst));
            v.push(Some(nc as f64));
            (v, if worst > spec.tolerance { Status::Mismatch } else { Status::Ok })
        }
    }
}

fn axis_columns(spec: &SweepSpec) -> Vec<String> {
    spec.param_axes().map(|a| a.name.clone()).collect()
}

/// Axis coordinates, then `extra(p)`, then the stationary observables.
fn observable_sweep(
    spec: &SweepSpec,
    extra_columns: &[&str],
    extra: impl Fn(&SystemParams) -> Vec<f64> + Sync,
    names: &[&str],
) -> Result<SweepTable> {
    let mut columns = axis_columns(spec);
    columns.extend(extra_columns.iter().map(|s| s.to_string()));
    columns.extend(observable_columns(names, spec.engine));
    let grid = spec.grid()?;
    let rows = par_map(spec, grid.len(), |k| {
        let (coords, p) = &grid[k];
        let (vals, status) = observable_values(p, names, spec);
        let values = coords.iter().copied().chain(extra(p)).map(Some).chain(vals).collect();
        Row { values, status }
    })?;
    let mut t = SweepTable::new(columns);
    t.rows = rows;
    Ok(t)
}

/// Phase diagram: stability, EP line and the two singular boundaries.
pub fn cmd_stability_map(spec: &SweepSpec) -> Result<SweepTable> {
    let mut columns = axis_columns(spec);
    columns.extend(
        ["stable", "on_ep_line", "pt_symmetric", "det_boundary", "boundary_distance"].map(String::from),
    );
    let grid = spec.grid()?;
    let rows = par_map(spec, grid.len(), |k| {
        let (coords, p) = &grid[k];
        let mut values: Vec<Option<f64>> = coords.iter().map(|&x| Some(x)).collect();
        if p.validate().is_err() {
            values.resize(values.len() + 5, None);
            return Row { values, status: Status::Error };
        }
        let r = classify_regime(p, BOUNDARY_TOL);
        let det = (p.j * p.j - p.gamma1 * p.gamma2).abs() <= BOUNDARY_TOL * p.j * p.j;
        let flag = |b: bool| Some(if b { 1.0 } else { 0.0 });
        values.extend([flag(r.stable), flag(r.on_ep_line), flag(r.pt_symmetric), flag(det), Some(r.boundary_distance)]);
        let status = if r.pt_symmetric || det {
            Status::Singular
        } else if r.stable {
            Status::Ok
        } else {
            Status::Unstable
        };
        Row { values, status }
    })?;
    let mut t = SweepTable::new(columns);
    t.rows = rows;
    Ok(t)
}

/// Real parts of the two eigenvalues of `H_eff`, larger first.
fn re_lambda(p: &SystemParams) -> Vec<f64> {
    let [a, b] = heff_spectrum(p).eigenvalues.map(|z| z.re);
    vec![a.max(b), a.min(b)]
}

/// Lossy-resonator intensity and dispersion with the pitchfork of `Re λ±`.
pub fn cmd_intensity_map(spec: &SweepSpec) -> Result<SweepTable> {
    observable_sweep(spec, &["re_lambda_plus", "re_lambda_minus"], re_lambda, &["i2", "d2"])
}

/// Noise band `I2 ± √D2` and the SNRs of the lossy resonator.
pub fn cmd_linecut(spec: &SweepSpec) -> Result<SweepTable> {
    observable_sweep(spec, &[], |_| vec![], &["i2", "band_lo", "band_hi", "snr1", "snr2", "band_ratio"])
}

/// Both SNR definitions for both resonators.
pub fn cmd_snr_map(spec: &SweepSpec) -> Result<SweepTable> {
    observable_sweep(spec, &[], |_| vec![], &["snr1_1", "snr1_2", "snr2_1", "snr2_2"])
}

/// Analytic-versus-oracle comparison of all stationary moments.
pub fn cmd_verify(spec: &SweepSpec) -> Result<SweepTable> {
    const REL: [&str; 8] =
        ["rel_mean_a1", "rel_mean_a2", "rel_i1", "rel_i2", "rel_d1", "rel_d2", "rel_rho", "max_rel"];
    let mut columns = axis_columns(spec);
    columns.extend(["i1", "i2", "d1", "d2"].map(String::from));
    columns.extend(REL.map(String::from));
    columns.push("cutoff".into());
    let grid = spec.grid()?;
    let width = columns.len();
    let rows = par_map(spec, grid.len(), |k| {
        let (coords, p) = &grid[k];
        let mut values: Vec<Option<f64>> = coords.iter().map(|&x| Some(x)).collect();
        let done = |mut values: Vec<Option<f64>>, status| {
            values.resize(width, None);
            Row { values, status }
        };
        let a = match analytic(p) {
            Ok(a) => a,
            Err(s) => return done(values, s),
        };
        values.extend([a.i[0], a.i[1], a.d[0], a.d[1]].map(Some));
        let (nc, o) = match oracle(p, spec) {
            Ok(r) => r,
            Err(s) => return done(values, s),
        };
        let crel = |x: C64, y: C64| (x - y).norm() / x.norm().max(REL_FLOOR);
        let rho_rel = (a.rho - o.rho).norm() / a.rho.norm().max(REL_FLOOR);
        let rels = [
            crel(a.mean[0], o.mean[0]),
            crel(a.mean[1], o.mean[1]),
            rel(a.i[0], o.i[0]),
            rel(a.i[1], o.i[1]),
            rel(a.d[0], o.d[0]),
            rel(a.d[1], o.d[1]),
            rho_rel,
        ];
        let worst = rels.iter().copied().fold(0.0, f64::max);
        values.extend(rels.map(Some));
        values.push(Some(worst));
        values.push(Some(nc as f64));
        Row { values, status: if worst > spec.tolerance { Status::Mismatch } else { Status::Ok } }
    })?;
    let mut t = SweepTable::new(columns);
    t.rows = rows;
    Ok(t)
}

fn split(a: &Vec2) -> [f64; 4] {
    [a[0].re, a[0].im, a[1].re, a[1].im]
}

/// Order parameter `<a(t)>` from the coherent initial state `a0`; with the
/// oracle, the exact truncated dynamics of that state.
pub fn cmd_transient(spec: &SweepSpec) -> Result<SweepTable> {
    const COMPONENTS: [&str; 4] = ["re_a1", "im_a1", "re_a2", "im_a2"];
    let times = spec.axes.iter().find(|a| a.name == "t").expect("validated").values();
    let (_, p) = spec.grid()?.remove(0);
    let a0 = Vec2::new(C64::new(spec.a0[0], spec.a0[1]), C64::new(spec.a0[2], spec.a0[3]));
    let q = p.validate().ok().and_then(|_| stationary_gaussian(&p, DEFAULT_TOL).ok()).map(|g| g.q);
    let analytic: Vec<[f64; 4]> = par_map(spec, times.len(), |k| split(&order_parameter_general(&p, &a0, times[k])))?;
    let oracle = match spec.engine {
        Engine::Analytic => None,
        _ => Some(if times.windows(2).all(|w| w[0] < w[1]) && times[0] >= 0.0 {
            coherent_first_moments(&p, &a0, &times, &FockConfig::displaced(spec.transient_cutoff), OdeOptions::default())
                .map(|v| v.iter().map(split).collect::<Vec<_>>())
                .map_err(|e| oracle_status(&e))
        } else {
            Err(Status::Error)
        }),
    };

    let mut columns = vec!["t".to_string()];
    if spec.engine != Engine::Oracle {
        columns.extend(COMPONENTS.map(String::from));
    }
    if spec.engine != Engine::Analytic {
        columns.extend(COMPONENTS.map(|c| if spec.engine == Engine::Both { format!("{c}_oracle") } else { c.into() }));
    }
    if spec.engine == Engine::Both {
        columns.push("max_abs".into());
    }
    columns.push("deviation".into());

    let mut table = SweepTable::new(columns);
    for (k, &t) in times.iter().enumerate() {
        let mut values = vec![Some(t)];
        let mut status = if q.is_some() { Status::Ok } else { Status::Unstable };
        let mut reference = analytic[k];
        if spec.engine != Engine::Oracle {
            values.extend(analytic[k].map(Some));
        }
        if let Some(o) = &oracle {
            match o {
                Ok(o) => {
                    values.extend(o[k].map(Some));
                    if spec.engine == Engine::Both {
                        let a = Vec2::new(C64::new(analytic[k][0], analytic[k][1]), C64::new(analytic[k][2], analytic[k][3]));
                        let b = Vec2::new(C64::new(o[k][0], o[k][1]), C64::new(o[k][2], o[k][3]));
                        let diff = (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max);
                        values.push(Some(diff));
                        if diff > spec.tolerance && status == Status::Ok {
                            status = Status::Mismatch;
                        }
                    } else {
                        reference = o[k];
                    }
                }
                Err(s) => {
                    values.resize(table.columns.len() - 1, None);
                    status = *s;
                }
            }
        }
        values.resize(table.columns.len() - 1, None);
        values.push(q.map(|q| {
            let a = Vec2::new(C64::new(reference[0], reference[1]), C64::new(reference[2], reference[3]));
            (a - q).norm()
        }));
        table.rows.push(Row { values, status });
    }
    Ok(table)
}
