//! Command line driver.
//!
//! Every subcommand produces a list of [`Table`]s. Exit codes: 0 on success,
//! 1 when a computation finished but an audit or identity failed, 2 on bad
//! usage or input.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use pdn_core::analysis::{
    condition_experiment, exactness_check, maxwell_mesh, maxwell_pencil, maxwell_report, ZERO_TOL,
};
use pdn_core::linalg::RANK_TOL;
use pdn_core::mesh::{
    clough_tocher_split, single_tet, single_triangle, two_tets, two_triangles, unit_cube,
    unit_square, worsey_farin_split, SimplicialMesh,
};
use pdn_core::orthopoly::quadrature::principal_lattice;
use pdn_core::refelem::{Family, ReferenceElement};
use pdn_core::spaces::{audit_dimension, ComplexTag, ConstrainOptions, SpaceTag, What};

use crate::meshio::read_mesh;
use crate::mtx::to_matrix_market;
use crate::report::{render, Cell, Format, Table};

#[derive(Debug, Parser)]
#[command(
    name = "pdn",
    version,
    about = "PDN finite element experiments and audits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format: csv, json or text.
    #[arg(long, global = true, default_value = "csv")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads (0 picks the number of cores).
    #[arg(long, global = true, env = "PDN_THREADS", default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Curl-curl eigenvalues on (0, pi)^2 with u x n = 0.
    Maxwell2d(MaxwellArgs),
    /// Curl-curl eigenvalues on (0, pi)^3 with u x n = 0.
    Maxwell3d(MaxwellArgs),
    /// Compare printed dimension formulas with numerical nullspace dimensions.
    DimAudit(AuditArgs),
    /// Rank identities of a discrete complex.
    Exactness(ExactnessArgs),
    /// Mass and stiffness condition numbers over a range of degrees.
    Condition(ConditionArgs),
    /// Values or derivatives of a reference basis at lattice points.
    TabulateBasis(TabulateArgs),
    /// Entity counts and geometry of a mesh.
    MeshInfo(MeshInfoArgs),
}

#[derive(Debug, Clone, Args)]
pub struct MeshArgs {
    /// Built-in mesh: single-triangle, two-triangles, single-tet, two-tets,
    /// square or cube (unit domains split into n^d boxes).
    #[arg(long, conflicts_with = "mesh_file")]
    pub mesh: Option<String>,
    /// ASCII mesh file (`dim V C`, coordinates, 0-based cells).
    #[arg(long)]
    pub mesh_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MaxwellArgs {
    /// Element family (hrot, vector-lagrange, zh, hcurl-wf).
    #[arg(long)]
    pub element: Option<String>,
    #[arg(long)]
    pub p: Option<usize>,
    /// Boxes per side of the structured mesh.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of retained eigenvalues to report.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Zero modes are eigenvalues at or below this times the largest one.
    #[arg(long, default_value_t = ZERO_TOL)]
    pub zero_tol: f64,
    /// Mesh file replacing the structured mesh.
    #[arg(long)]
    pub mesh_file: Option<PathBuf>,
    /// Directory for stiffness.mtx and mass.mtx.
    #[arg(long)]
    pub export: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct AuditArgs {
    /// Space tag (V0..V3, W0..W3) or `all` for the standard table.
    #[arg(long, default_value = "all")]
    pub space: String,
    /// Degrees: `3`, `3,4` or `3-5`.
    #[arg(long)]
    pub p: Option<String>,
    #[command(flatten)]
    pub mesh: MeshArgs,
    #[arg(long, default_value_t = RANK_TOL)]
    pub rank_tol: f64,
    /// Multiplier on the number of constraint sample points.
    #[arg(long, default_value_t = 1)]
    pub oversample: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ExactnessArgs {
    /// V, W or 2D.
    #[arg(long)]
    pub complex: String,
    #[arg(long)]
    pub p: usize,
    #[command(flatten)]
    pub mesh: MeshArgs,
    #[arg(long, default_value_t = RANK_TOL)]
    pub rank_tol: f64,
    #[arg(long, default_value_t = 1)]
    pub oversample: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ConditionArgs {
    #[arg(long, default_value = "hdiv")]
    pub element: String,
    /// Degrees: `3-9`, `3,5,7` or `4`.
    #[arg(long, default_value = "3-9")]
    pub p: String,
    #[command(flatten)]
    pub mesh: MeshArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TabulateArgs {
    #[arg(long)]
    pub element: String,
    #[arg(long)]
    pub p: usize,
    /// Spatial dimension for families that live in both.
    #[arg(long)]
    pub dim: Option<usize>,
    /// value, grad, curl or div.
    #[arg(long, default_value = "value")]
    pub what: String,
    /// Order of the principal lattice of sample points (defaults to p).
    #[arg(long)]
    pub order: Option<usize>,
    /// Cell of the reference split (0 unless the family uses one).
    #[arg(long, default_value_t = 0)]
    pub cell: usize,
}

#[derive(Debug, Clone, Args)]
pub struct MeshInfoArgs {
    #[command(flatten)]
    pub mesh: MeshArgs,
    /// Also report a split: wf (Worsey–Farin) or ct (Clough–Tocher).
    #[arg(long)]
    pub split: Option<String>,
}

/// Failure before a report could be produced.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(pdn_core::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "usage: {s}"),
            CliError::Compute(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<pdn_core::Error> for CliError {
    fn from(e: pdn_core::Error) -> Self {
        CliError::Compute(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Tables of a finished run and whether its audits passed.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub passed: bool,
}

impl Outcome {
    fn ok(tables: Vec<Table>) -> Self {
        Outcome {
            tables,
            passed: true,
        }
    }
}

/// Parses `3`, `3,4,7`, `3-9` or `3..9` (inclusive).
pub fn parse_degrees(s: &str) -> CliResult<Vec<usize>> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("bad degree {t:?}")))
    };
    let range = s.split_once("..").or_else(|| s.split_once('-'));
    let out = match range {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return usage(format!("empty degree range {s:?}"));
            }
            (a..=b).collect()
        }
        None => s.split(',').map(num).collect::<CliResult<Vec<_>>>()?,
    };
    if out.is_empty() {
        return usage("no degrees given");
    }
    Ok(out)
}

fn family(name: &str) -> CliResult<Family> {
    Family::from_name(name).ok_or_else(|| {
        let known: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
        CliError::Usage(format!("unknown element {name:?} ({})", known.join(", ")))
    })
}

/// Resolves `--mesh` / `--mesh-file`, falling back to `default`.
pub fn load_mesh(args: &MeshArgs, default: &str) -> CliResult<SimplicialMesh> {
    if let Some(path) = &args.mesh_file {
        return read_mesh_arg(path);
    }
    let name = args.mesh.as_deref().unwrap_or(default);
    builtin_mesh(name)
}

fn read_mesh_arg(path: &Path) -> CliResult<SimplicialMesh> {
    read_mesh(path).map_err(|e| CliError::Usage(e.to_string()))
}

fn builtin_mesh(name: &str) -> CliResult<SimplicialMesh> {
    let sized = |prefix: &str| -> Option<CliResult<usize>> {
        name.strip_prefix(prefix).map(|rest| {
            rest.trim_start_matches(['-', ':'])
                .parse()
                .map_err(|_| CliError::Usage(format!("bad mesh size in {name:?}")))
        })
    };
    Ok(match name {
        "single-triangle" => single_triangle(),
        "two-triangles" => two_triangles(),
        "single-tet" => single_tet(),
        "two-tets" => two_tets(),
        _ => {
            if let Some(n) = sized("square") {
                unit_square(n?)?
            } else if let Some(n) = sized("cube") {
                unit_cube(n?)?
            } else {
                return usage(format!(
                    "unknown mesh {name:?} (single-triangle, two-triangles, single-tet, two-tets, square-N, cube-N)"
                ));
            }
        }
    })
}

fn maxwell(args: &MaxwellArgs, d: usize) -> CliResult<Outcome> {
    let (default_element, default_p, default_n) =
        if d == 2 { ("hrot", 2, 8) } else { ("zh", 3, 2) };
    let fam = family(args.element.as_deref().unwrap_or(default_element))?;
    if let Some(fd) = fam.spatial_dim() {
        if fd != d {
            return usage(format!("{} lives in {fd}D", fam.name()));
        }
    }
    let p = args.p.unwrap_or(default_p);
    let (mesh, n) = match &args.mesh_file {
        Some(path) => {
            let m = read_mesh_arg(path)?;
            if m.dim() != d {
                return usage(format!("mesh file is {}D", m.dim()));
            }
            (m, 0)
        }
        None => {
            let n = args.n.unwrap_or(default_n);
            (maxwell_mesh(d, n)?, n)
        }
    };
    let pencil = maxwell_pencil(fam, p, &mesh)?;
    if let Some(dir) = &args.export {
        std::fs::create_dir_all(dir)?;
        std::fs::write(
            dir.join("stiffness.mtx"),
            to_matrix_market(&pencil.stiffness),
        )?;
        std::fs::write(dir.join("mass.mtx"), to_matrix_market(&pencil.mass))?;
    }
    let r = maxwell_report(fam, p, n, d, &pencil, args.count, args.zero_tol)?;

    let mut summary = Table::new(
        "summary",
        &[
            "element",
            "p",
            "n",
            "dim",
            "bc_dim",
            "zero_modes",
            "threshold",
            "max_rel_error",
        ],
    );
    summary.push(vec![
        fam.name().into(),
        p.into(),
        n.into(),
        r.dim.into(),
        r.constrained_dim.into(),
        r.spectrum.zero_modes.into(),
        r.spectrum.threshold.into(),
        r.max_relative_error().into(),
    ]);
    let mut eig = Table::new("eigenvalues", &["mode", "computed", "exact", "rel_error"]);
    for (i, ((c, &e), err)) in r
        .computed
        .iter()
        .zip(&r.exact)
        .zip(r.relative_errors())
        .enumerate()
    {
        eig.push(vec![(i + 1).into(), (*c).into(), e.into(), err.into()]);
    }
    Ok(Outcome::ok(vec![summary, eig]))
}

const STANDARD_AUDIT: [(SpaceTag, &[usize]); 7] = [
    (SpaceTag::V0, &[3, 4]),
    (SpaceTag::V1, &[2, 3]),
    (SpaceTag::V2, &[1, 2]),
    (SpaceTag::V3, &[0, 1]),
    (SpaceTag::W0, &[4, 5]),
    (SpaceTag::W1, &[4, 5]),
    (SpaceTag::W2, &[2, 3]),
];

fn dim_audit(args: &AuditArgs) -> CliResult<Outcome> {
    let mesh = load_mesh(&args.mesh, "single-tet")?;
    let jobs: Vec<(SpaceTag, usize)> = if args.space.eq_ignore_ascii_case("all") {
        if args.p.is_some() {
            return usage("--p needs a single --space");
        }
        STANDARD_AUDIT
            .iter()
            .flat_map(|(t, ps)| ps.iter().map(move |&p| (*t, p)))
            .collect()
    } else {
        let tag = SpaceTag::from_name(&args.space)
            .ok_or_else(|| CliError::Usage(format!("unknown space {:?}", args.space)))?;
        let Some(ps) = &args.p else {
            return usage("--p is required with --space");
        };
        parse_degrees(ps)?.into_iter().map(|p| (tag, p)).collect()
    };
    let opts = ConstrainOptions {
        rank_tol: args.rank_tol,
        oversample: args.oversample,
    };
    let rows = jobs
        .par_iter()
        .map(|&(tag, p)| audit_dimension(tag, p, &mesh, &opts))
        .collect::<Result<Vec<_>, _>>()?;

    let mut t = Table::new(
        "dimensions",
        &[
            "space",
            "p",
            "V",
            "E",
            "F",
            "T",
            "printed",
            "computed",
            "dof_formula",
            "status",
        ],
    );
    for r in &rows {
        let [v, e, f, c] = r.counts;
        t.push(vec![
            r.tag.name().into(),
            r.p.into(),
            v.into(),
            e.into(),
            f.into(),
            c.into(),
            r.printed.into(),
            r.computed.into(),
            r.dof_count.into(),
            if r.matches() { "MATCH" } else { "MISMATCH" }.into(),
        ]);
    }
    Ok(Outcome {
        tables: vec![t],
        passed: rows.iter().all(|r| r.matches()),
    })
}

/// Integral values (rank identities) print as integers.
fn number(x: f64) -> Cell {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        Cell::Int(x as i64)
    } else {
        Cell::Float(x)
    }
}

fn exactness(args: &ExactnessArgs) -> CliResult<Outcome> {
    let complex = ComplexTag::from_name(&args.complex)
        .ok_or_else(|| CliError::Usage(format!("unknown complex {:?} (V, W, 2D)", args.complex)))?;
    let default = if complex == ComplexTag::Plane {
        "two-triangles"
    } else {
        "single-tet"
    };
    let mesh = load_mesh(&args.mesh, default)?;
    let opts = ConstrainOptions {
        rank_tol: args.rank_tol,
        oversample: args.oversample,
    };
    let r = exactness_check(complex, args.p, &mesh, &opts)?;

    let mut spaces = Table::new("spaces", &["space", "degree", "dim"]);
    for ((tag, deg), dim) in r.spaces.iter().zip(&r.dims) {
        spaces.push(vec![tag.name().into(), (*deg).into(), (*dim).into()]);
    }
    let mut ops = Table::new("operators", &["operator", "rank", "kernel"]);
    for ((op, rank), ker) in r.ops.iter().zip(&r.ranks).zip(&r.kernels) {
        ops.push(vec![
            format!("{op:?}").to_lowercase().into(),
            (*rank).into(),
            (*ker).into(),
        ]);
    }
    let mut ids = Table::new("identities", &["identity", "expected", "actual", "passed"]);
    for id in &r.identities {
        ids.push(vec![
            id.name.clone().into(),
            number(id.expected),
            number(id.actual),
            id.passed.into(),
        ]);
    }
    Ok(Outcome {
        tables: vec![spaces, ops, ids],
        passed: r.passed(),
    })
}

fn condition(args: &ConditionArgs) -> CliResult<Outcome> {
    let fam = family(&args.element)?;
    let degrees = parse_degrees(&args.p)?;
    let default = if fam.spatial_dim() == Some(2) {
        "two-triangles"
    } else {
        "two-tets"
    };
    let mesh = load_mesh(&args.mesh, default)?;
    let reports = degrees
        .par_iter()
        .map(|&p| condition_experiment(fam, &mesh, &[p]))
        .collect::<Result<Vec<_>, _>>()?;
    let reports: Vec<_> = reports.into_iter().flatten().collect();

    let mut t = Table::new(
        "condition",
        &[
            "p",
            "dim",
            "kappa_m",
            "kappa_m_tilde",
            "kappa_s",
            "kappa_s_tilde",
        ],
    );
    for r in &reports {
        t.push(vec![
            r.p.into(),
            r.dim.into(),
            r.kappa_m.into(),
            r.kappa_m_tilde.into(),
            r.kappa_s.into(),
            r.kappa_s_tilde.into(),
        ]);
    }
    let s_tilde: Vec<f64> = reports.iter().map(|r| r.kappa_s_tilde).collect();
    let spread = s_tilde.iter().copied().fold(0.0, f64::max)
        / s_tilde.iter().copied().fold(f64::INFINITY, f64::min);
    let monotone = reports.windows(2).all(|w| w[1].kappa_m > w[0].kappa_m);
    let mut trend = Table::new("trend", &["quantity", "value"]);
    trend.push(vec!["kappa_s_tilde max/min".into(), spread.into()]);
    trend.push(vec!["kappa_m increasing".into(), monotone.into()]);
    Ok(Outcome::ok(vec![t, trend]))
}

fn tabulate(args: &TabulateArgs) -> CliResult<Outcome> {
    let fam = family(&args.element)?;
    let dim = match (fam.spatial_dim(), args.dim) {
        (Some(d), Some(given)) if d != given => {
            return usage(format!("{} lives in {d}D", fam.name()));
        }
        (Some(d), _) => d,
        (None, Some(d)) if d == 2 || d == 3 => d,
        (None, Some(d)) => return usage(format!("dimension {d} is not 2 or 3")),
        (None, None) => 2,
    };
    let what = What::from_name(&args.what)
        .ok_or_else(|| CliError::Usage(format!("unknown quantity {:?}", args.what)))?;
    let elem = ReferenceElement::new(fam, args.p, dim)?;
    if args.cell >= elem.num_cells() {
        return usage(format!("cell {} of {}", args.cell, elem.num_cells()));
    }
    let pts = principal_lattice(dim, args.order.unwrap_or(args.p));
    let tab = elem.tabulate(args.cell, &pts, what)?;
    let mesh = elem.space.layout().mesh();

    let mut funcs = Table::new(
        "functions",
        &[
            "function",
            "entity_dim",
            "entity",
            "profile",
            "direction",
            "shared",
        ],
    );
    for (i, f) in elem.functions().iter().enumerate() {
        funcs.push(vec![
            i.into(),
            f.entity.0.into(),
            f.entity.1.into(),
            format!("{:?}", f.profile).into(),
            format!("{:?}", f.direction).into(),
            f.is_shared().into(),
        ]);
    }
    let mut cols: Vec<String> = vec!["function".into(), "point".into()];
    cols.extend(["x", "y", "z"].iter().take(dim).map(|s| s.to_string()));
    cols.extend((0..tab.components).map(|c| format!("c{c}")));
    let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut values = Table::new("values", &col_refs);
    for f in 0..tab.functions {
        for (q, pt) in pts.iter().enumerate() {
            let x = mesh.point(args.cell, &pt[..=dim]);
            let mut row: Vec<Cell> = vec![f.into(), q.into()];
            row.extend(x[..dim].iter().map(|&v| Cell::from(v)));
            row.extend((0..tab.components).map(|c| Cell::from(tab.get(f, q, c))));
            values.push(row);
        }
    }
    Ok(Outcome::ok(vec![funcs, values]))
}

fn mesh_table(name: &str, mesh: &SimplicialMesh) -> Table {
    let [v, e, f, t] = mesh.counts();
    let d = mesh.dim();
    let boundary = (0..mesh.num_entities(d - 1))
        .filter(|&i| mesh.is_boundary(d - 1, i))
        .count();
    let volume: f64 = (0..mesh.num_cells()).map(|c| mesh.volume(c)).sum();
    let mut tab = Table::new(
        name,
        &[
            "dim",
            "V",
            "E",
            "F",
            "T",
            "euler",
            "boundary_facets",
            "diameter",
            "volume",
        ],
    );
    tab.push(vec![
        d.into(),
        v.into(),
        e.into(),
        f.into(),
        t.into(),
        mesh.euler_characteristic().into(),
        boundary.into(),
        mesh.diameter().into(),
        volume.into(),
    ]);
    tab
}

fn mesh_info(args: &MeshInfoArgs) -> CliResult<Outcome> {
    let mesh = load_mesh(&args.mesh, "two-tets")?;
    let mut tables = vec![mesh_table("mesh", &mesh)];
    if let Some(kind) = &args.split {
        let split = match kind.as_str() {
            "wf" => worsey_farin_split(&mesh)?,
            "ct" => clough_tocher_split(&mesh)?,
            _ => return usage(format!("unknown split {kind:?} (wf, ct)")),
        };
        tables.push(mesh_table("split", &split.child));
    }
    Ok(Outcome::ok(tables))
}

/// Runs a parsed command on a pool of `cli.threads` workers.
pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| match &cli.command {
        Command::Maxwell2d(a) => maxwell(a, 2),
        Command::Maxwell3d(a) => maxwell(a, 3),
        Command::DimAudit(a) => dim_audit(a),
        Command::Exactness(a) => exactness(a),
        Command::Condition(a) => condition(a),
        Command::TabulateBasis(a) => tabulate(a),
        Command::MeshInfo(a) => mesh_info(a),
    })
}

/// Full driver: parse, run, write the report. Returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let text = render(&outcome.tables, cli.format);
            let written = match &cli.output {
                Some(path) => std::fs::write(path, text),
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(text.as_bytes())
                }
            };
            if let Err(e) = written {
                eprintln!("pdn: {e}");
                return 2;
            }
            if outcome.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("pdn: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_lists() {
        assert_eq!(parse_degrees("3").unwrap(), vec![3]);
        assert_eq!(parse_degrees("3,5").unwrap(), vec![3, 5]);
        assert_eq!(parse_degrees("3-6").unwrap(), vec![3, 4, 5, 6]);
        assert_eq!(parse_degrees("2..3").unwrap(), vec![2, 3]);
        assert!(parse_degrees("5-3").is_err());
        assert!(parse_degrees("x").is_err());
    }

    #[test]
    fn builtin_meshes() {
        assert_eq!(builtin_mesh("square-2").unwrap().num_cells(), 8);
        assert_eq!(builtin_mesh("cube-1").unwrap().num_cells(), 6);
        assert_eq!(builtin_mesh("two-tets").unwrap().num_cells(), 2);
        assert!(builtin_mesh("torus").is_err());
        assert!(builtin_mesh("square-x").is_err());
    }

    #[test]
    fn parser_rejects_unknown_flags() {
        assert!(Cli::try_parse_from(["pdn", "mesh-info", "--bogus"]).is_err());
        assert!(
            Cli::try_parse_from(["pdn", "mesh-info", "--mesh", "a", "--mesh-file", "b"]).is_err()
        );
        let c = Cli::try_parse_from(["pdn", "condition", "--format", "json"]).unwrap();
        assert_eq!(c.format, Format::Json);
    }
}
