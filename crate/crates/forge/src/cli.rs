//! Command line: one subcommand per area plus `experiments NAME|all|list`.
//!
//! Exit codes: 0 when every applicable check passes, 1 when any fails,
//! 2 on usage errors (bad flags, unknown experiment, invalid parameters)
//! and on io failures.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use unital_core::unital::verify_unital;

use crate::cache::TableCache;
use crate::exec::Pool;
use crate::experiments::{self, Ctx, ForgeError, Params};
use crate::report::{Fingerprint, Recorder, Report, Status};
use crate::unitals::{build, Family, UnitalFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Order of the subfield: the plane is NP(N(2,q)) of order q².
    #[arg(long, global = true, default_value_t = 3)]
    pub q: u32,
    #[arg(long, global = true)]
    pub j: Option<u64>,
    /// Field element, e.g. `1+2i` or `#7` for an encoding.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, global = true, value_enum, ignore_case = true)]
    pub family: Option<Family>,
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Directory for cached log/exp tables.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub report: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(name = "unital-forge", version, about = "Verification runs for unitals in regular nearfield planes")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Field tables and constants of GF(q²).
    Field,
    /// Nearfield axioms and the multiplicative subgroups of N(2,q).
    Nearfield,
    /// Plane axioms and the linear collineation group.
    Plane,
    /// Build one point set by family and run the design check.
    Unital {
        /// Save the point set as JSON.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Verify a saved point set instead of building one.
        #[arg(long, conflicts_with = "export")]
        input: Option<PathBuf>,
    },
    /// O'Nan configuration searches and obstructions.
    Onan,
    /// The all-ones polynomial suite over GF(q).
    Poly,
    /// Run a named experiment, `all`, or `list` the names.
    Experiments { name: String },
}

impl Command {
    fn experiment_set(&self) -> &'static [&'static str] {
        match self {
            Command::Field => &["field-laws"],
            Command::Nearfield => &["nearfield-axioms", "subgroup-lattice"],
            Command::Plane => &["plane-axioms", "andre-linear-group"],
            Command::Onan => &["onan-absent-classical", "onan-absent-wantz", "onan-obstructions", "trace-criterion"],
            Command::Poly => &["poly-suite"],
            Command::Unital { .. } | Command::Experiments { .. } => &[],
        }
    }

    fn label(&self) -> String {
        match self {
            Command::Field => "field".into(),
            Command::Nearfield => "nearfield".into(),
            Command::Plane => "plane".into(),
            Command::Unital { .. } => "unital".into(),
            Command::Onan => "onan".into(),
            Command::Poly => "poly".into(),
            Command::Experiments { name } => name.clone(),
        }
    }
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if matches!(&cli.command, Command::Experiments { name } if name == "list") {
        for n in experiments::names() {
            println!("{n}");
        }
        return 0;
    }
    match execute(&cli) {
        Ok(report) => match emit(&cli.global, &report) {
            Ok(()) => i32::from(!report.passed()),
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn params(g: &Global) -> Params {
    Params { q: g.q, j: g.j, a: g.a.clone(), b: g.b.clone() }
}

/// Runs the command and builds the report; printing is left to the caller.
pub fn execute(cli: &Cli) -> Result<Report, ForgeError> {
    let g = &cli.global;
    experiments::odd_prime_power(g.q).ok_or_else(|| ForgeError::InvalidParameters(format!("q = {} is not an odd prime power", g.q)))?;
    let pool = Pool::new(g.threads).map_err(|e| ForgeError::InvalidParameters(e.to_string()))?;
    let cache = g.cache.as_ref().map(TableCache::new).transpose()?;
    let ctx = Ctx::new(pool, cache);
    let p = params(g);
    let mut rec = Recorder::new();
    let mut shown = p.to_json();
    match &cli.command {
        Command::Experiments { name } => experiments::run(&ctx, name, &p, &mut rec)?,
        Command::Unital { export, input } => {
            shown = unital(&ctx, g, &p, export.as_ref(), input.as_ref(), &mut rec)?;
        }
        other => {
            for name in other.experiment_set() {
                rec.scope(name);
                experiments::run(&ctx, name, &p, &mut rec)?;
            }
        }
    }
    let fp = Fingerprint::current(g.threads.max(1), ctx.cache.is_some());
    Ok(Report::new(&cli.command.label(), shown, rec.finish(), fp))
}

fn unital(
    ctx: &Ctx,
    g: &Global,
    p: &Params,
    export: Option<&PathBuf>,
    input: Option<&PathBuf>,
    rec: &mut Recorder,
) -> Result<serde_json::Value, ForgeError> {
    let (family, built, file) = match input {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            let file: UnitalFile =
                serde_json::from_str(&text).map_err(|e| ForgeError::InvalidParameters(format!("{}: {e}", path.display())))?;
            let built = build(ctx, file.family, &file.build_params())?;
            (file.family, built, Some(file))
        }
        None => {
            let family = g.family.unwrap_or(Family::U);
            (family, build(ctx, family, p)?, None)
        }
    };
    let pl = built.plane.clone();
    let set = match &file {
        Some(f) => {
            let set = f.point_set(&pl)?;
            rec.run("matches-family", || (Status::from_bool(set == built.set), None));
            set
        }
        None => built.set.clone(),
    };
    rec.run("design", || {
        if !family.is_candidate() {
            return (Status::Inapplicable, Some(format!("B(a,b) stratum with {} points", set.len())));
        }
        match verify_unital(&pl, &set, &ctx.pool) {
            Ok(r) => {
                let w = match r.witness {
                    Some((l, n)) => format!("line {} meets the set in {n} points", pl.format_line(l)),
                    None => format!("{} points, profile {:?}", r.size, r.profile),
                };
                (Status::from_bool(r.is_unital), Some(w))
            }
            Err(e) => (Status::Fail, Some(e.to_string())),
        }
    });
    if let Some(path) = export {
        let file = UnitalFile::from_built(p.q, family, &built);
        let text = serde_json::to_string(&file).expect("unital file serializes");
        fs::write(path, text + "\n")?;
    }
    let q = file.as_ref().map_or(p.q, |f| f.q);
    Ok(serde_json::json!({ "q": q, "family": family, "params": built.params }))
}

fn emit(g: &Global, report: &Report) -> std::io::Result<()> {
    let text = match g.report {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match &g.out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}
