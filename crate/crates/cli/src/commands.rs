use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};

use rayon::prelude::*;
use zenoscope::decay::{modified_rate_quadrature, DecayResult, QuadratureConfig, RWA_LIMIT};
use zenoscope::experiment::IonLine;
use zenoscope::oracle::{oracle_rate, OracleConfig, OracleError, OracleMethod};
use zenoscope::profile::MeasurementSchedule;
use zenoscope::reservoir::{
    builtin_transition, eta_for, frequency_ratio, mu_for, PhysicalConstants, SimpleReservoir, BUILTIN_NAMES,
};

use crate::args::{
    CaArgs, Command, ConstArgs, Figure2Args, Integrator, OracleArgs, QuadArgs, RateArgs, RateMethod, Spacing,
    SweepArgs, SweepMethod, Table1Args,
};
use crate::format::{csv_number, significant, JsonObject};
use crate::target::{decay_failure, Model, Target};
use crate::CliError;

pub const SWEEP_HEADER: &str = "nu_over_omega0,ratio_quadrature,ratio_analytic,rel_err,rwa_warning";

pub fn run(command: Command, out: &mut impl Write) -> Result<(), CliError> {
    match command {
        Command::Rate(a) => rate(&a, out),
        Command::Sweep(a) => sweep(&a, out),
        Command::Table1(a) => table1(&a, out),
        Command::Figure2(a) => figure2(&a, out),
        Command::Oracle(a) => oracle(&a, out),
        Command::Ca(a) => ca(&a, out),
    }
}

impl QuadArgs {
    fn config(&self) -> QuadratureConfig {
        QuadratureConfig {
            near_lobes: self.near_lobes,
            nodes_per_lobe: self.nodes_per_lobe,
            rel_tol: self.rel_tol,
            max_omega_factor: self.max_omega_factor,
        }
    }
}

impl ConstArgs {
    fn constants(&self) -> PhysicalConstants {
        let base = PhysicalConstants::default();
        self.alpha.map_or(base, |a| base.with_alpha(a))
    }
}

fn oracle_failure(e: OracleError) -> CliError {
    match e {
        OracleError::Config(_) | OracleError::Precondition(_) | OracleError::Reservoir(_) => {
            CliError::Usage(e.to_string())
        }
        _ => CliError::Numerical(e.to_string()),
    }
}

fn rate_document(r: &DecayResult) -> JsonObject {
    JsonObject::new()
        .field("ratio", r.ratio)
        .field("gamma0", r.gamma0)
        .field("method", r.method.as_str())
        .field("err_estimate", r.err_estimate)
        .field("rwa_warning", r.rwa_warning)
}

fn rate(a: &RateArgs, out: &mut impl Write) -> Result<(), CliError> {
    let target = Target::resolve(&a.transition, &a.consts.constants())?;
    let result = match a.method {
        RateMethod::Quadrature => target.quadrature(a.nu, &a.quad.config()).map_err(decay_failure)?,
        RateMethod::Analytic => target.analytic(a.nu).map_err(decay_failure)?,
        RateMethod::Oracle => {
            let m =
                MeasurementSchedule::new(a.nu * target.omega0).map_err(|e| CliError::Usage(e.to_string()))?;
            let cfg = OracleConfig { n_modes: a.n_modes, ..OracleConfig::default() };
            match &target.model {
                Model::Simple(r) => oracle_rate(r, target.omega0, &m, &cfg),
                Model::Full(r) => oracle_rate(r, target.omega0, &m, &cfg),
            }
            .map_err(oracle_failure)?
        }
    };
    writeln!(out, "{}", rate_document(&result).render())?;
    if !result.converged {
        return Err(CliError::Numerical(format!(
            "quadrature did not reach tolerance (estimated relative error {:e})",
            result.err_estimate
        )));
    }
    Ok(())
}

fn grid(min: f64, max: f64, points: usize, spacing: Spacing) -> Vec<f64> {
    let last = (points - 1) as f64;
    (0..points)
        .map(|i| {
            let t = i as f64 / last;
            match spacing {
                _ if i == 0 => min,
                _ if i == points - 1 => max,
                Spacing::Log => min * (max / min).powf(t),
                Spacing::Linear => min + (max - min) * t,
            }
        })
        .collect()
}

struct Row {
    nu: f64,
    quadrature: Option<f64>,
    analytic: Option<f64>,
    failures: Vec<String>,
}

fn evaluate(target: &Target, nu: f64, methods: &[SweepMethod], cfg: &QuadratureConfig) -> Row {
    let mut row = Row { nu, quadrature: None, analytic: None, failures: Vec::new() };
    if methods.contains(&SweepMethod::Quadrature) {
        match target.quadrature(nu, cfg) {
            Ok(r) => {
                if !r.converged {
                    row.failures.push(format!("quadrature unconverged (err {:e})", r.err_estimate));
                }
                row.quadrature = Some(r.ratio);
            }
            Err(e) => row.failures.push(format!("quadrature: {e}")),
        }
    }
    if methods.contains(&SweepMethod::Analytic) {
        match target.analytic(nu) {
            Ok(r) => row.analytic = Some(r.ratio),
            Err(e) => row.failures.push(format!("analytic: {e}")),
        }
    }
    row
}

struct SweepPlan<'a> {
    target: &'a Target,
    nus: Vec<f64>,
    methods: &'a [SweepMethod],
    quad: QuadratureConfig,
    with_status: bool,
}

fn thread_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    if jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))
}

/// Writes the CSV and returns the per-point failure messages.
fn write_sweep(
    plan: &SweepPlan,
    pool: &rayon::ThreadPool,
    out: &mut impl Write,
) -> Result<Vec<String>, CliError> {
    let rows: Vec<Row> = pool.install(|| {
        plan.nus.par_iter().map(|&nu| evaluate(plan.target, nu, plan.methods, &plan.quad)).collect()
    });
    let cell = |v: Option<f64>| v.map(csv_number).unwrap_or_default();
    write!(out, "{SWEEP_HEADER}")?;
    if plan.with_status {
        write!(out, ",status")?;
    }
    writeln!(out)?;
    let mut failures = Vec::new();
    for row in &rows {
        let rel_err = match (row.quadrature, row.analytic) {
            (Some(q), Some(a)) => Some((q - a).abs() / q.abs()),
            _ => None,
        };
        let rwa = row.nu >= RWA_LIMIT;
        write!(
            out,
            "{},{},{},{},{}",
            csv_number(row.nu),
            cell(row.quadrature),
            cell(row.analytic),
            cell(rel_err),
            rwa
        )?;
        if plan.with_status {
            let status = if row.failures.is_empty() {
                "ok".to_string()
            } else {
                row.failures.join("; ").replace([',', '\n', '\r'], " ")
            };
            write!(out, ",{status}")?;
        }
        writeln!(out)?;
        for f in &row.failures {
            failures.push(format!("{} at nu = {:e}: {f}", plan.target.name, row.nu));
        }
    }
    Ok(failures)
}

fn report(failures: Vec<String>) -> Result<(), CliError> {
    if failures.is_empty() {
        return Ok(());
    }
    for f in &failures {
        eprintln!("{f}");
    }
    Err(CliError::Numerical(format!("{} sweep point(s) failed", failures.len())))
}

fn sweep(a: &SweepArgs, out: &mut impl Write) -> Result<(), CliError> {
    if a.min >= a.max {
        return Err(CliError::Usage(format!("--min {} must be below --max {}", a.min, a.max)));
    }
    if a.points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let target = Target::resolve(&a.transition, &a.consts.constants())?;
    let pool = thread_pool(a.jobs.jobs)?;
    let quad = a.quad.config();
    quad.validate().map_err(decay_failure)?;
    let plan = SweepPlan {
        target: &target,
        nus: grid(a.min, a.max, a.points, a.spacing),
        methods: &a.methods,
        quad,
        with_status: a.with_status,
    };
    let failures = write_sweep(&plan, &pool, out)?;
    report(failures)
}

fn figure2(a: &Figure2Args, out: &mut impl Write) -> Result<(), CliError> {
    if a.points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let pool = thread_pool(a.jobs.jobs)?;
    let quad = a.quad.config();
    quad.validate().map_err(decay_failure)?;
    if let Some(dir) = &a.out_dir {
        std::fs::create_dir_all(dir)?;
    }
    let methods = [SweepMethod::Quadrature, SweepMethod::Analytic];
    let mut failures = Vec::new();
    for (i, name) in BUILTIN_NAMES.iter().enumerate() {
        let target = Target::resolve(name, &PhysicalConstants::default())?;
        let plan = SweepPlan {
            target: &target,
            nus: grid(1e-4, 1e-2, a.points, Spacing::Log),
            methods: &methods,
            quad,
            with_status: false,
        };
        match &a.out_dir {
            Some(dir) => {
                let mut file = BufWriter::new(File::create(dir.join(format!("figure2_{name}.csv")))?);
                failures.extend(write_sweep(&plan, &pool, &mut file)?);
                file.flush()?;
            }
            None => {
                if i > 0 {
                    writeln!(out)?;
                }
                writeln!(out, "# {name}")?;
                failures.extend(write_sweep(&plan, &pool, out)?);
            }
        }
    }
    report(failures)
}

fn table1(a: &Table1Args, out: &mut impl Write) -> Result<(), CliError> {
    let consts = PhysicalConstants::default().with_alpha(a.alpha);
    let usage = |e: zenoscope::reservoir::ReservoirError| CliError::Usage(e.to_string());
    consts.validate().map_err(usage)?;
    writeln!(out, "transition\teta\tmu\tomega_x_over_omega0")?;
    for name in BUILTIN_NAMES {
        let t = builtin_transition(name).map_err(usage)?.transition;
        let eta = eta_for(t.j_range().0, t.character).map_err(usage)?;
        let ratio = 1.0 / frequency_ratio(&t, &consts).map_err(usage)?;
        writeln!(out, "{name}\t{eta}\t{}\t{}", mu_for(&t), significant(ratio, 4))?;
    }
    Ok(())
}

fn oracle(a: &OracleArgs, out: &mut impl Write) -> Result<(), CliError> {
    let res =
        SimpleReservoir::new(1.0, a.eta, a.mu, a.omega_x).map_err(|e| CliError::Usage(e.to_string()))?;
    let m = MeasurementSchedule::new(a.nu).map_err(|e| CliError::Usage(e.to_string()))?;
    let method = match a.integrator {
        Integrator::Exact => OracleMethod::ExactDiagonalization,
        Integrator::Rk4 => OracleMethod::Rk4,
    };
    let cfg = OracleConfig {
        n_modes: a.n_modes,
        method,
        weak_coupling: a.weak_coupling,
        ..OracleConfig::default()
    };
    let o = oracle_rate(&res, 1.0, &m, &cfg).map_err(oracle_failure)?;
    let q = modified_rate_quadrature(&res, 1.0, &m, &a.quad.config()).map_err(decay_failure)?;
    let doc = JsonObject::new()
        .field("eta", a.eta as usize)
        .field("mu", a.mu as usize)
        .field("omega_x_over_omega0", a.omega_x)
        .field("nu_over_omega0", a.nu)
        .field("n_modes", a.n_modes)
        .field(
            "integrator",
            match a.integrator {
                Integrator::Exact => "exact_diagonalization",
                Integrator::Rk4 => "rk4",
            },
        )
        .field("ratio_oracle", o.ratio)
        .field("ratio_quadrature", q.ratio)
        .field("rel_diff", (o.ratio - q.ratio).abs() / q.ratio)
        .field("err_estimate_oracle", o.err_estimate)
        .field("err_estimate_quadrature", q.err_estimate);
    writeln!(out, "{}", doc.render())?;
    Ok(())
}

fn ca(a: &CaArgs, out: &mut impl Write) -> Result<(), CliError> {
    let base = PhysicalConstants::default();
    let consts = a.alpha.map_or(base, |al| base.with_alpha(al));
    let usage = |e: zenoscope::experiment::ExperimentError| CliError::Usage(e.to_string());
    let line = IonLine::new(IonLine::calcium().transition, 2.0 * PI * a.line_hz).map_err(usage)?;
    let e = line.estimate(a.precision, a.prefactor_a, &consts).map_err(usage)?;
    let doc = JsonObject::new()
        .field("omega0", e.omega0)
        .field("omega_x", e.omega_x)
        .field("ratio_sq", e.ratio_sq)
        .field("precision", a.precision)
        .field("prefactor_a", e.prefactor_a)
        .field("required_nu", e.required_nu);
    writeln!(out, "{}", doc.render())?;
    Ok(())
}
