use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use steerwit::steering::{tau1_alpha_threshold, tau2_alpha_threshold, SCAN_THETA_MIN};
use steerwit::tomo::monte_carlo_samples;
use steerwit::{
    bell_geom, boundary_bob_to_alice, classify_region, concurrence, construct_tau1, construct_tau2,
    infinite_setting_a_to_b_only, target_state, witness_steering, ErrorBar, StateFamilyParams,
    Statistic,
};

use crate::args::{BellArgs, Command, OutputArgs, PointArgs, SamplingArgs, ScanArgs, TomoArgs};
use crate::report::{Cell, Report};

#[derive(Debug)]
pub enum CliError {
    Parameter(String),
    Io(io::Error),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Parameter(_) => 2,
            CliError::Io(_) => 3,
            CliError::Numerical(_) => 4,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parameter(m) => write!(f, "parameter error: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
        }
    }
}

impl From<steerwit::Error> for CliError {
    fn from(e: steerwit::Error) -> Self {
        use steerwit::Error as E;
        match e {
            E::Parameter { .. } | E::InvalidState(_) | E::Dimension { .. } => {
                CliError::Parameter(e.to_string())
            }
            E::NotHermitian(_) | E::NotPsd(_) | E::DegenerateData(_) | E::NoConvergence(_) => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Classify(a) => emit(&classify(&a)?, &a.output),
        Command::Scan(a) => emit(&scan(&a)?, &a.output),
        Command::Tomo(a) => emit(&tomo(&a)?, &a.point.output),
        Command::Bellgeom(a) => emit(&bellgeom(&a)?, &a.point.output),
    }
}

fn emit(report: &Report, output: &OutputArgs) -> Result<(), CliError> {
    match &output.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            report.write(output.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let mut w = io::stdout().lock();
            report.write(output.format, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn params(p: &PointArgs) -> Result<StateFamilyParams, CliError> {
    Ok(StateFamilyParams::with_mu(
        p.alpha, p.theta, p.mu.mu1, p.mu.mu2,
    )?)
}

fn point_report(
    command: &'static str,
    p: &StateFamilyParams,
    columns: Vec<&'static str>,
) -> Report {
    Report::new(command, columns)
        .param("alpha", p.alpha)
        .param("theta", p.theta)
        .param("mu1", p.mu1)
        .param("mu2", p.mu2)
}

fn check_sampling(s: &SamplingArgs) -> Result<(), CliError> {
    if s.trials < 2 {
        return Err(CliError::Parameter(format!(
            "trials = {} but at least 2 are needed for a standard deviation",
            s.trials
        )));
    }
    if s.shots == 0 {
        return Err(CliError::Parameter("shots must be positive".into()));
    }
    Ok(())
}

pub fn classify(a: &PointArgs) -> Result<Report, CliError> {
    let p = params(a)?;
    let rho = target_state(&p)?;
    let v = witness_steering(&rho, p.mu1, p.mu2)?;
    let bell = bell_geom(&rho)?;
    let mut report = point_report(
        "classify",
        &p,
        vec![
            "alpha",
            "theta",
            "c_tau1",
            "c_tau2",
            "bob_steers_alice",
            "alice_steers_bob",
            "region",
            "analytic_region",
            "eq6_boundary",
            "tau1_threshold",
            "tau2_threshold",
            "inf_setting",
            "bell_lhs",
            "bell_rhs",
            "bell_violated",
        ],
    );
    report.push(vec![
        p.alpha.into(),
        p.theta.into(),
        v.c_tau1.into(),
        v.c_tau2.into(),
        v.bob_steers_alice.is_witnessed().into(),
        v.alice_steers_bob.is_witnessed().into(),
        v.region.as_str().into(),
        classify_region(p.alpha, p.theta, p.mu1, p.mu2)?
            .as_str()
            .into(),
        boundary_bob_to_alice(p.theta).into(),
        tau1_alpha_threshold(p.theta, p.mu1).into(),
        tau2_alpha_threshold(p.theta, p.mu2).into(),
        infinite_setting_a_to_b_only(p.alpha, p.theta).into(),
        bell.lhs.into(),
        bell.rhs.into(),
        bell.violated.into(),
    ]);
    Ok(report)
}

pub fn scan(a: &ScanArgs) -> Result<Report, CliError> {
    let points = steerwit::steering::scan_plane(a.grid_n, a.mu.mu1, a.mu.mu2)?;
    let mut report = Report::new(
        "scan",
        vec![
            "alpha",
            "theta",
            "c_tau1",
            "c_tau2",
            "region",
            "eq6_boundary",
            "inf_setting",
        ],
    )
    .param("grid_n", Cell::Int(a.grid_n as u64))
    .param("mu1", a.mu.mu1)
    .param("mu2", a.mu.mu2);
    report.notes.push(format!(
        "theta runs from {SCAN_THETA_MIN} to pi/4; theta = 0 is excluded because the boundaries are undefined there"
    ));
    for pt in points {
        report.push(vec![
            pt.alpha.into(),
            pt.theta.into(),
            pt.verdict.c_tau1.into(),
            pt.verdict.c_tau2.into(),
            pt.verdict.region.as_str().into(),
            pt.eq6_boundary.into(),
            pt.inf_setting.into(),
        ]);
    }
    Ok(report)
}

fn sampling_params(report: Report, s: &SamplingArgs) -> Report {
    let mut report = report
        .param("shots", Cell::Int(s.shots))
        .param("trials", Cell::Int(s.trials as u64));
    report.seed = Some(s.seed);
    report
}

pub fn tomo(a: &TomoArgs) -> Result<Report, CliError> {
    check_sampling(&a.sampling)?;
    let p = params(&a.point)?;
    let target = target_state(&p)?;
    let tau1 = construct_tau1(&target, p.mu1)?;
    let tau2 = construct_tau2(&target, p.mu2)?;
    let states = [("target", &target), ("tau1", &tau1), ("tau2", &tau2)];
    let mut report = sampling_params(
        point_report(
            "tomo",
            &p,
            vec![
                "state",
                "fidelity_mean",
                "fidelity_std",
                "concurrence_true",
                "concurrence_mean",
                "concurrence_std",
            ],
        ),
        &a.sampling,
    );
    let s = &a.sampling;
    for (name, rho) in states {
        let series = monte_carlo_samples(
            rho,
            s.shots,
            s.trials,
            &[Statistic::Fidelity, Statistic::Concurrence],
            s.seed,
        )?;
        let fid = ErrorBar::from_samples(&series[0]);
        let conc = ErrorBar::from_samples(&series[1]);
        report.push(vec![
            name.into(),
            fid.mean.into(),
            fid.stddev.into(),
            concurrence(rho)?.into(),
            conc.mean.into(),
            conc.stddev.into(),
        ]);
    }
    Ok(report)
}

pub fn bellgeom(a: &BellArgs) -> Result<Report, CliError> {
    let p = params(&a.point)?;
    let rho = target_state(&p)?;
    let exact = bell_geom(&rho)?;
    let mut columns = vec!["alpha", "theta", "lhs", "rhs", "violated"];
    let mut row: Vec<Cell> = vec![
        p.alpha.into(),
        p.theta.into(),
        exact.lhs.into(),
        exact.rhs.into(),
        exact.violated.into(),
    ];
    if a.errorbars {
        check_sampling(&a.sampling)?;
        let s = &a.sampling;
        let series = monte_carlo_samples(
            &rho,
            s.shots,
            s.trials,
            &[Statistic::BellGeomLhs, Statistic::BellGeomRhs],
            s.seed,
        )?;
        let (lhs, rhs) = (
            ErrorBar::from_samples(&series[0]),
            ErrorBar::from_samples(&series[1]),
        );
        columns.extend(["lhs_mean", "lhs_std", "rhs_mean", "rhs_std"]);
        row.extend([lhs.mean, lhs.stddev, rhs.mean, rhs.stddev].map(Cell::from));
    }
    let mut report = point_report("bellgeom", &p, columns);
    if a.errorbars {
        report = sampling_params(report, &a.sampling);
    }
    report.push(row);
    Ok(report)
}
