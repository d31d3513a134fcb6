//! Command-line front end.
//!
//! Every subcommand reads one problem file (`key = value` pairs under
//! `[section]` headers, see [`problem`]) and prints a plain-text report.
//! Exit codes: 0 when every printed verdict holds, 1 when some check fails
//! or cannot be decided at the stored truncation, 2 for unreadable input or
//! structural errors (those go to stderr, prefixed with `error:`).

pub mod problem;
pub mod render;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use orbidisc::degree::{
    enumerate_split_decompositions, hypothesis_warning, line_connection_exists, weil_atiyah_check,
};
use orbidisc::element::LieAlgebraElement;
use orbidisc::equivariant::{local_type, EquivariantConnection};
use orbidisc::error::Error;
use orbidisc::matrix::LaurentMatrix;
use orbidisc::parabolic::{
    is_connection_morphism, EquivariantMatrixConnection, ParabolicMatrixConnection,
};
use orbidisc::parahoric::{homogeneous_weight, LogahoricConnection, ParahoricAlgebra};
use orbidisc::series::{LaurentSeries, MuWeight, VarKind};

use problem::ProblemFile;
use render::{element_block, matrix_block, rational_list, residue_block, verdict_block};

#[derive(Parser)]
#[command(
    name = "orbidisc",
    version,
    about = "Logarithmic connections on mu_r-orbifold formal discs",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Truncated Laurent-series arithmetic
    #[command(subcommand)]
    Series(SeriesCmd),
    /// Root-system data and Lie brackets
    #[command(subcommand)]
    Rootsys(RootsysCmd),
    /// Parahoric membership and the residue condition
    #[command(subcommand)]
    Parahoric(ParahoricCmd),
    /// Equivariant forms upstairs and the gauge downstairs
    #[command(subcommand)]
    Equiv(EquivCmd),
    /// The GL_n matrix picture with parabolic weights
    #[command(subcommand)]
    Parab(ParabCmd),
    /// Parabolic degrees and the connection-existence criterion
    #[command(subcommand)]
    Degree(DegreeCmd),
}

#[derive(Args)]
pub struct InputArgs {
    /// Problem file
    pub file: PathBuf,
    /// Truncate every series in the file at this order
    #[arg(long, allow_hyphen_values = true)]
    pub truncation: Option<i64>,
}

#[derive(Subcommand)]
pub enum SeriesCmd {
    /// Sum of the two series in the file
    Add(InputArgs),
    /// Product of the two series in the file
    Mul(InputArgs),
    /// Multiplicative inverse
    Inverse(InputArgs),
    /// Term-by-term derivative
    Derivative(InputArgs),
    /// Substitute t^r -> z (the series must live in t)
    ToZ(InputArgs),
    /// Substitute z -> t^r (the series must live in z)
    FromZ(InputArgs),
    /// mu_r-weight of the series
    Weight(InputArgs),
}

#[derive(Subcommand)]
pub enum RootsysCmd {
    /// Cartan dimension, roots, and bracket availability
    Info(InputArgs),
    /// Lie bracket of the two elements in the file
    Bracket(InputArgs),
}

#[derive(Subcommand)]
pub enum ParahoricCmd {
    /// Membership of the element and both residue-condition routes
    Check(InputArgs),
}

#[derive(Subcommand)]
pub enum EquivCmd {
    /// mu_r-invariance of the form
    Check(InputArgs),
    /// Gauge the invariant form down to the coarse disc
    ToLogahoric(InputArgs),
    /// Lift the logahoric form back upstairs
    FromLogahoric(InputArgs),
    /// The local type cut out by the coweight
    LocalType(InputArgs),
}

#[derive(Subcommand)]
pub enum ParabCmd {
    /// Push the equivariant matrix form down to the coarse disc
    Push(InputArgs),
    /// Pull the downstairs matrix form back upstairs
    Pull(InputArgs),
    /// Equivariance (var t) or the parabolic residue condition (var z)
    Check(InputArgs),
    /// Residue matrix: closed form in t, constant term in z
    Residue(InputArgs),
    /// Is phi a morphism between the source and target connections?
    Morphism(InputArgs),
}

#[derive(Subcommand)]
pub enum DegreeCmd {
    /// Parabolic degree of the bundle in the file
    Pardeg(InputArgs),
    /// Existence of a compatible logarithmic connection
    Criterion(InputArgs),
}

/// The clap tree, for tooling and tests.
pub fn command() -> clap::Command {
    use clap::CommandFactory;
    Cli::command()
}

pub struct Report {
    pub text: String,
    pub ok: bool,
}

impl Report {
    fn new() -> Self {
        Report { text: String::new(), ok: true }
    }
}

pub fn run() -> i32 {
    dispatch(&Cli::parse())
}

pub fn dispatch(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(report) => {
            print!("{}", report.text);
            if report.ok {
                0
            } else {
                1
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

type CmdResult = Result<Report, String>;

fn load(args: &InputArgs) -> Result<(ProblemFile, Option<i64>), String> {
    let text = std::fs::read_to_string(&args.file)
        .map_err(|e| format!("cannot read {}: {e}", args.file.display()))?;
    let file = ProblemFile::parse(&text).map_err(|e| e.to_string())?;
    let trunc = file.effective_truncation(args.truncation);
    Ok((file, trunc))
}

pub fn execute(cli: &Cli) -> CmdResult {
    match &cli.command {
        Cmd::Series(op) => {
            let (args, f): (&InputArgs, SeriesOp) = match op {
                SeriesCmd::Add(a) => (a, SeriesOp::Add),
                SeriesCmd::Mul(a) => (a, SeriesOp::Mul),
                SeriesCmd::Inverse(a) => (a, SeriesOp::Inverse),
                SeriesCmd::Derivative(a) => (a, SeriesOp::Derivative),
                SeriesCmd::ToZ(a) => (a, SeriesOp::ToZ),
                SeriesCmd::FromZ(a) => (a, SeriesOp::FromZ),
                SeriesCmd::Weight(a) => (a, SeriesOp::Weight),
            };
            let (file, trunc) = load(args)?;
            cmd_series(&file, trunc, f)
        }
        Cmd::Rootsys(op) => match op {
            RootsysCmd::Info(a) => {
                let (file, _) = load(a)?;
                cmd_rootsys_info(&file)
            }
            RootsysCmd::Bracket(a) => {
                let (file, trunc) = load(a)?;
                cmd_rootsys_bracket(&file, trunc)
            }
        },
        Cmd::Parahoric(ParahoricCmd::Check(a)) => {
            let (file, trunc) = load(a)?;
            cmd_parahoric_check(&file, trunc)
        }
        Cmd::Equiv(op) => {
            let (args, f): (&InputArgs, EquivOp) = match op {
                EquivCmd::Check(a) => (a, EquivOp::Check),
                EquivCmd::ToLogahoric(a) => (a, EquivOp::ToLogahoric),
                EquivCmd::FromLogahoric(a) => (a, EquivOp::FromLogahoric),
                EquivCmd::LocalType(a) => (a, EquivOp::LocalType),
            };
            let (file, trunc) = load(args)?;
            cmd_equiv(&file, trunc, f)
        }
        Cmd::Parab(op) => {
            let (args, f): (&InputArgs, ParabOp) = match op {
                ParabCmd::Push(a) => (a, ParabOp::Push),
                ParabCmd::Pull(a) => (a, ParabOp::Pull),
                ParabCmd::Check(a) => (a, ParabOp::Check),
                ParabCmd::Residue(a) => (a, ParabOp::Residue),
                ParabCmd::Morphism(a) => (a, ParabOp::Morphism),
            };
            let (file, trunc) = load(args)?;
            cmd_parab(&file, trunc, f)
        }
        Cmd::Degree(op) => match op {
            DegreeCmd::Pardeg(a) => {
                let (file, _) = load(a)?;
                cmd_degree_pardeg(&file)
            }
            DegreeCmd::Criterion(a) => {
                let (file, _) = load(a)?;
                cmd_degree_criterion(&file)
            }
        },
    }
}

enum SeriesOp {
    Add,
    Mul,
    Inverse,
    Derivative,
    ToZ,
    FromZ,
    Weight,
}

enum EquivOp {
    Check,
    ToLogahoric,
    FromLogahoric,
    LocalType,
}

enum ParabOp {
    Push,
    Pull,
    Check,
    Residue,
    Morphism,
}

/// Input-domain failures are part of the mathematical answer and belong on
/// stdout with exit code 1; everything else is structural.
fn is_obstruction(e: &Error) -> bool {
    matches!(
        e,
        Error::NotParahoric(_)
            | Error::NotEquivariant(_)
            | Error::ResidueCondition(_)
            | Error::ParabolicCondition(_)
            | Error::UnexpectedPole { .. }
    )
}

/// Folds a library call into the report: obstruction errors are printed and
/// flip `ok`, structural errors abort the command.
fn absorb<T>(out: &mut String, ok: &mut bool, r: orbidisc::Result<T>) -> Result<Option<T>, String> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e) if is_obstruction(&e) => {
            let _ = writeln!(out, "obstruction: {e}");
            *ok = false;
            Ok(None)
        }
        Err(e) => Err(e.to_string()),
    }
}

fn series_name(sec: &problem::SeriesSec, position: usize) -> String {
    sec.label.clone().unwrap_or_else(|| format!("s{}", position + 1))
}

fn cmd_series(file: &ProblemFile, trunc: Option<i64>, op: SeriesOp) -> CmdResult {
    let mut rep = Report::new();
    let out = &mut rep.text;

    match op {
        SeriesOp::Add | SeriesOp::Mul => {
            if file.series.len() != 2 {
                return Err(format!(
                    "this command takes exactly two [series] sections, found {}",
                    file.series.len()
                ));
            }
            let a = file.build_series(&file.series[0], trunc).map_err(|e| e.to_string())?;
            let b = file.build_series(&file.series[1], trunc).map_err(|e| e.to_string())?;
            if a.var() != b.var() {
                return Err("the two series must use the same variable".into());
            }
            let na = series_name(&file.series[0], 0);
            let nb = series_name(&file.series[1], 1);
            let _ = writeln!(out, "{na} = {a}");
            let _ = writeln!(out, "{nb} = {b}");
            match op {
                SeriesOp::Add => {
                    let _ = writeln!(out, "sum = {}", &a + &b);
                }
                _ => {
                    let _ = writeln!(out, "product = {}", &a * &b);
                }
            }
        }
        SeriesOp::Inverse => {
            let s = single_series(file, trunc)?;
            let _ = writeln!(out, "input = {s}");
            let inv = s.inverse().map_err(|e| e.to_string())?;
            let _ = writeln!(out, "inverse = {inv}");
        }
        SeriesOp::Derivative => {
            let s = single_series(file, trunc)?;
            let _ = writeln!(out, "input = {s}");
            let _ = writeln!(out, "derivative = {}", s.derivative());
        }
        SeriesOp::ToZ => {
            let s = single_series(file, trunc)?;
            if s.var().kind() != VarKind::T {
                return Err("to-z expects a series in t".into());
            }
            let _ = writeln!(out, "input = {s}");
            let image = s.substitute_t_to_z().map_err(|e| e.to_string())?;
            let _ = writeln!(out, "result = {image}");
        }
        SeriesOp::FromZ => {
            let s = single_series(file, trunc)?;
            if s.var().kind() != VarKind::Z {
                return Err("from-z expects a series in z".into());
            }
            let _ = writeln!(out, "input = {s}");
            let _ = writeln!(out, "result = {}", s.substitute_z_to_t());
        }
        SeriesOp::Weight => {
            let s = single_series(file, trunc)?;
            let _ = writeln!(out, "input = {s}");
            let w = match s.mu_r_weight() {
                MuWeight::Any => "any".to_string(),
                MuWeight::Weight(k) => format!("{k} (mod {})", s.var().order()),
                MuWeight::NotHomogeneous => "not homogeneous".to_string(),
            };
            let _ = writeln!(out, "weight = {w}");
        }
    }
    Ok(rep)
}

fn single_series(file: &ProblemFile, trunc: Option<i64>) -> Result<LaurentSeries, String> {
    let sec = file.find_series(None).map_err(|e| e.to_string())?;
    file.build_series(sec, trunc).map_err(|e| e.to_string())
}

fn cmd_rootsys_info(file: &ProblemFile) -> CmdResult {
    let sys = file.require_rootsys().map_err(|e| e.to_string())?;
    let mut rep = Report::new();
    let out = &mut rep.text;
    let _ = writeln!(
        out,
        "system: {} (cartan dimension {}, {} roots)",
        sys.name(),
        sys.cartan_dim(),
        sys.root_count()
    );
    let cartan: Vec<String> = (0..sys.cartan_dim()).map(|m| sys.cartan_label(m)).collect();
    let _ = writeln!(out, "cartan: {}", cartan.join(", "));
    if sys.root_count() == 0 {
        let _ = writeln!(out, "roots: (none)");
    } else {
        let roots: Vec<String> = (0..sys.root_count()).map(|i| sys.root_label(i)).collect();
        let _ = writeln!(out, "roots: {}", roots.join(", "));
    }
    let _ = writeln!(
        out,
        "brackets: {}",
        if sys.has_brackets() { "available" } else { "not available" }
    );
    Ok(rep)
}

fn cmd_rootsys_bracket(file: &ProblemFile, trunc: Option<i64>) -> CmdResult {
    let sys = file.require_rootsys().map_err(|e| e.to_string())?;
    if file.elements.len() != 2 {
        return Err(format!(
            "bracket takes exactly two [element] sections, found {}",
            file.elements.len()
        ));
    }
    let a = file.build_element(&file.elements[0], &sys, trunc).map_err(|e| e.to_string())?;
    let b = file.build_element(&file.elements[1], &sys, trunc).map_err(|e| e.to_string())?;
    if a.var() != b.var() {
        return Err("the two elements must use the same variable".into());
    }
    let la = file.elements[0].label.clone().unwrap_or_else(|| "a".into());
    let lb = file.elements[1].label.clone().unwrap_or_else(|| "b".into());
    let bracket = a.bracket(&b).map_err(|e| e.to_string())?;
    let mut rep = Report::new();
    element_block(&mut rep.text, &format!("[{la}, {lb}]"), &bracket);
    Ok(rep)
}

/// The element together with the coweight it is to be checked against,
/// validated to live on the correct side of the cover.
fn element_for(
    file: &ProblemFile,
    trunc: Option<i64>,
    kind: VarKind,
) -> Result<(orbidisc::roots::Coweight, LieAlgebraElement), String> {
    let sys = file.require_rootsys().map_err(|e| e.to_string())?;
    let theta = file.require_coweight(&sys).map_err(|e| e.to_string())?;
    let sec = file.find_element(None).map_err(|e| e.to_string())?;
    let xi = file.build_element(sec, &sys, trunc).map_err(|e| e.to_string())?;
    let (want, side) = match kind {
        VarKind::T => ('t', "upstairs"),
        VarKind::Z => ('z', "downstairs"),
    };
    if xi.var().kind() != kind {
        return Err(format!("this command works {side}: the element must use var = {want}"));
    }
    if xi.var().order() != theta.r() {
        return Err(format!(
            "the element lives at order {} but the coweight has r = {}",
            xi.var().order(),
            theta.r()
        ));
    }
    Ok((theta, xi))
}

fn cmd_parahoric_check(file: &ProblemFile, trunc: Option<i64>) -> CmdResult {
    let (theta, xi) = element_for(file, trunc, VarKind::Z)?;
    let algebra = ParahoricAlgebra::new(theta.clone());
    let mut rep = Report::new();
    let ok = &mut rep.ok;
    let out = &mut rep.text;

    let _ = writeln!(
        out,
        "parahoric algebra over {} with theta = {}, r = {}",
        theta.system().name(),
        rational_list(theta.components()),
        theta.r()
    );
    if theta.system().root_count() > 0 {
        let orders: Vec<String> = algebra
            .orders()
            .iter()
            .enumerate()
            .map(|(idx, m)| format!("{} >= {m}", theta.system().root_label(idx)))
            .collect();
        let _ = writeln!(out, "orders: {}", orders.join(", "));
    }

    let member = verdict_block(out, ok, "membership", &algebra.membership(&xi));
    match homogeneous_weight(&theta, &xi) {
        Some(w) => {
            let _ = writeln!(out, "weight: homogeneous of weight {w}");
        }
        None => {
            let _ = writeln!(out, "weight: mixed");
        }
    }
    let basis: Vec<String> = algebra
        .weight_zero_basis()
        .iter()
        .map(|(label, k)| format!("{label} z^{k}"))
        .collect();
    let _ = writeln!(out, "weight-zero basis: {}", basis.join(", "));

    if member {
        verdict_block(
            out,
            ok,
            "residue condition (projection)",
            &orbidisc::parahoric::residue_condition_projection(&theta, &xi),
        );
        verdict_block(
            out,
            ok,
            "residue condition (pole orders)",
            &orbidisc::parahoric::residue_condition_pole_orders(&theta, &xi),
        );
    }
    Ok(rep)
}

fn cmd_equiv(file: &ProblemFile, trunc: Option<i64>, op: EquivOp) -> CmdResult {
    match op {
        EquivOp::LocalType => {
            let sys = file.require_rootsys().map_err(|e| e.to_string())?;
            let theta = file.require_coweight(&sys).map_err(|e| e.to_string())?;
            let mut rep = Report::new();
            let _ = writeln!(rep.text, "local type: {}", local_type(&theta));
            Ok(rep)
        }
        EquivOp::Check => {
            let (theta, xi) = element_for(file, trunc, VarKind::T)?;
            let conn = EquivariantConnection::new(theta, xi);
            let mut rep = Report::new();
            verdict_block(&mut rep.text, &mut rep.ok, "invariance", &conn.check_invariance());
            Ok(rep)
        }
        EquivOp::ToLogahoric => {
            let (theta, xi) = element_for(file, trunc, VarKind::T)?;
            let conn = EquivariantConnection::new(theta, xi);
            let mut rep = Report::new();
            let ok = &mut rep.ok;
            let out = &mut rep.text;
            if !verdict_block(out, ok, "invariance", &conn.check_invariance()) {
                return Ok(rep);
            }
            if let Some(down) = absorb(out, ok, conn.gauge_to_logahoric())? {
                element_block(out, "downstairs form", down.omega());
                verdict_block(out, ok, "membership", &down.algebra().membership(down.omega()));
                verdict_block(out, ok, "residue condition (projection)", &down.residue_condition());
                verdict_block(
                    out,
                    ok,
                    "residue condition (pole orders)",
                    &down.residue_condition_pole_orders(),
                );
            }
            Ok(rep)
        }
        EquivOp::FromLogahoric => {
            let (theta, xi) = element_for(file, trunc, VarKind::Z)?;
            let algebra = ParahoricAlgebra::new(theta.clone());
            let mut rep = Report::new();
            let ok = &mut rep.ok;
            let out = &mut rep.text;
            if !verdict_block(out, ok, "membership", &algebra.membership(&xi)) {
                return Ok(rep);
            }
            let conn = LogahoricConnection::new(theta, xi).map_err(|e| e.to_string())?;
            if !verdict_block(out, ok, "residue condition (projection)", &conn.residue_condition())
            {
                return Ok(rep);
            }
            if let Some(up) = absorb(out, ok, orbidisc::equivariant::from_logahoric(&conn))? {
                element_block(out, "upstairs form", up.omega());
                verdict_block(out, ok, "invariance", &up.check_invariance());
            }
            Ok(rep)
        }
    }
}

/// The matrix together with the parabolic datum, validated against it.
fn matrix_for(
    file: &ProblemFile,
    trunc: Option<i64>,
    kind: VarKind,
) -> Result<(orbidisc::parabolic::ParabolicLocalDatum, LaurentMatrix), String> {
    let datum = file.require_parab().map_err(|e| e.to_string())?;
    let sec = file.find_matrix(None).map_err(|e| e.to_string())?;
    let m = file.build_matrix(sec, trunc).map_err(|e| e.to_string())?;
    let (want, side) = match kind {
        VarKind::T => ('t', "upstairs"),
        VarKind::Z => ('z', "downstairs"),
    };
    if m.var().kind() != kind {
        return Err(format!("this command works {side}: the matrix must use var = {want}"));
    }
    if m.var().order() != datum.r() {
        return Err(format!(
            "the matrix lives at order {} but the datum has r = {}",
            m.var().order(),
            datum.r()
        ));
    }
    if m.size() != datum.n() {
        return Err(format!(
            "the matrix is {0}x{0} but the datum has {1} weights",
            m.size(),
            datum.n()
        ));
    }
    Ok((datum, m))
}

fn cmd_parab(file: &ProblemFile, trunc: Option<i64>, op: ParabOp) -> CmdResult {
    match op {
        ParabOp::Push => {
            let (datum, omega) = matrix_for(file, trunc, VarKind::T)?;
            let conn = EquivariantMatrixConnection::new(datum, omega);
            let mut rep = Report::new();
            let ok = &mut rep.ok;
            let out = &mut rep.text;
            if !verdict_block(out, ok, "equivariance", &conn.check_equivariance()) {
                return Ok(rep);
            }
            let residue = conn.residue_closed_form().map_err(|e| e.to_string())?;
            residue_block(out, "residue", &residue);
            if let Some(down) = absorb(out, ok, conn.pushforward())? {
                matrix_block(out, "downstairs form", "D", down.matrix());
                verdict_block(out, ok, "parabolic condition", &down.parabolic_condition());
            }
            Ok(rep)
        }
        ParabOp::Pull => {
            let (datum, d) = matrix_for(file, trunc, VarKind::Z)?;
            let mut rep = Report::new();
            let ok = &mut rep.ok;
            let out = &mut rep.text;
            let conn = match absorb(out, ok, ParabolicMatrixConnection::new(datum, d))? {
                Some(c) => c,
                None => return Ok(rep),
            };
            residue_block(out, "residue", conn.residue());
            if !verdict_block(out, ok, "parabolic condition", &conn.parabolic_condition()) {
                return Ok(rep);
            }
            if let Some(up) = absorb(out, ok, conn.pullback())? {
                matrix_block(out, "upstairs form", "omega", up.omega());
                verdict_block(out, ok, "equivariance", &up.check_equivariance());
            }
            Ok(rep)
        }
        ParabOp::Check => {
            let sec = file.find_matrix(None).map_err(|e| e.to_string())?;
            let mut rep = Report::new();
            match sec.var {
                't' => {
                    let (datum, omega) = matrix_for(file, trunc, VarKind::T)?;
                    let conn = EquivariantMatrixConnection::new(datum, omega);
                    verdict_block(
                        &mut rep.text,
                        &mut rep.ok,
                        "equivariance",
                        &conn.check_equivariance(),
                    );
                }
                _ => {
                    let (datum, d) = matrix_for(file, trunc, VarKind::Z)?;
                    let ok = &mut rep.ok;
                    let out = &mut rep.text;
                    if let Some(conn) = absorb(out, ok, ParabolicMatrixConnection::new(datum, d))? {
                        verdict_block(out, ok, "parabolic condition", &conn.parabolic_condition());
                    }
                }
            }
            Ok(rep)
        }
        ParabOp::Residue => {
            let sec = file.find_matrix(None).map_err(|e| e.to_string())?;
            let mut rep = Report::new();
            match sec.var {
                't' => {
                    let (datum, omega) = matrix_for(file, trunc, VarKind::T)?;
                    let conn = EquivariantMatrixConnection::new(datum, omega);
                    let residue = conn.residue_closed_form().map_err(|e| e.to_string())?;
                    residue_block(&mut rep.text, "residue", &residue);
                }
                _ => {
                    let (datum, d) = matrix_for(file, trunc, VarKind::Z)?;
                    let ok = &mut rep.ok;
                    let out = &mut rep.text;
                    if let Some(conn) = absorb(out, ok, ParabolicMatrixConnection::new(datum, d))? {
                        residue_block(out, "residue", conn.residue());
                    }
                }
            }
            Ok(rep)
        }
        ParabOp::Morphism => {
            let phi_sec = file.find_matrix(Some("phi")).map_err(|e| e.to_string())?;
            let src_sec = file.find_matrix(Some("source")).map_err(|e| e.to_string())?;
            let tgt_sec = file.find_matrix(Some("target")).map_err(|e| e.to_string())?;
            let phi = file.build_matrix(phi_sec, trunc).map_err(|e| e.to_string())?;
            let source = file.build_matrix(src_sec, trunc).map_err(|e| e.to_string())?;
            let target = file.build_matrix(tgt_sec, trunc).map_err(|e| e.to_string())?;
            if phi.var().kind() != VarKind::Z {
                return Err("morphisms are checked downstairs: use var = z".into());
            }
            if phi.var() != source.var() || phi.var() != target.var() {
                return Err("phi, source, and target must use the same variable".into());
            }
            if phi.size() != source.size() || phi.size() != target.size() {
                return Err("phi, source, and target must have the same size".into());
            }
            let mut rep = Report::new();
            verdict_block(
                &mut rep.text,
                &mut rep.ok,
                "morphism",
                &is_connection_morphism(&phi, &source, &target),
            );
            Ok(rep)
        }
    }
}

fn cmd_degree_pardeg(file: &ProblemFile) -> CmdResult {
    let bundle = file.require_bundle().map_err(|e| e.to_string())?;
    let mut rep = Report::new();
    let out = &mut rep.text;
    let _ = writeln!(
        out,
        "rank {}, degree {}, {} point(s)",
        bundle.rank(),
        bundle.degree(),
        bundle.points().len()
    );
    for pt in bundle.points() {
        let weights: Vec<String> = pt.datum.weights().iter().map(|w| w.to_string()).collect();
        let _ = writeln!(
            out,
            "point {}: r = {}, weights [{}]",
            pt.label,
            pt.datum.r(),
            weights.join(", ")
        );
        let flag: Vec<String> = pt
            .datum
            .flag()
            .iter()
            .map(|(dim, w)| format!("({dim}, {w})"))
            .collect();
        let _ = writeln!(out, "  flag: {}", flag.join(", "));
    }
    let _ = writeln!(out, "par-deg = {}", bundle.par_deg());
    Ok(rep)
}

fn cmd_degree_criterion(file: &ProblemFile) -> CmdResult {
    let mut rep = Report::new();
    if file.summands.is_empty() {
        let bundle = file.require_bundle().map_err(|e| e.to_string())?;
        if bundle.rank() != 1 {
            return Err(
                "the criterion beyond rank 1 needs the summands spelled out ([summand] sections)"
                    .into(),
            );
        }
        let report = line_connection_exists(&bundle).map_err(|e| e.to_string())?;
        let out = &mut rep.text;
        let _ = writeln!(out, "rank 1, degree {}, {} point(s)", bundle.degree(), bundle.points().len());
        let _ = writeln!(out, "par-deg = {}", report.par_deg);
        let _ = writeln!(out, "connection exists: {}", if report.exists { "yes" } else { "no" });
        rep.ok = report.exists;
        return Ok(rep);
    }

    let split = file.build_split().map_err(|e| e.to_string())?;
    let ambient = split.ambient().map_err(|e| e.to_string())?;
    let mut decomps = enumerate_split_decompositions(&split).map_err(|e| e.to_string())?;
    decomps.extend(file.build_decompositions(&split).map_err(|e| e.to_string())?);
    let report =
        weil_atiyah_check(&ambient, &decomps, file.genus).map_err(|e| e.to_string())?;

    let out = &mut rep.text;
    for (i, line) in split.lines().iter().enumerate() {
        let _ = writeln!(out, "summand {}: par-deg = {}", line.label, split.line_par_deg(i));
    }
    let _ = writeln!(
        out,
        "ambient: rank {}, degree {}, {} point(s), par-deg = {}",
        ambient.rank(),
        ambient.degree(),
        ambient.points().len(),
        ambient.par_deg()
    );
    let _ = writeln!(
        out,
        "decompositions checked: {} ({} characters)",
        decomps.len(),
        report.checks.len()
    );
    for c in report.failures() {
        let character: Vec<String> = c.character.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(
            out,
            "failure: decomposition '{}', character [{}], degree = {}",
            c.decomposition,
            character.join(", "),
            c.degree
        );
    }
    let exists = report.connection_exists();
    let _ = writeln!(out, "connection exists: {}", if exists { "yes" } else { "no" });
    if let Some(w) = hypothesis_warning(file.genus, ambient.points().len()) {
        let _ = writeln!(out, "warning: {w}");
    }
    rep.ok = exists;
    Ok(rep)
}
