//! The `rotlab` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::experiment::{run_experiment, ExperimentOptions};
use crate::fastpath::float_census;
use crate::io::{self, census_csv, CensusReport};
use crate::verify::{verify_suite, SUITES};
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use rotlab::census::{rotation_census, source_set, CensusOptions, Classification};
use rotlab::exact::{format_rational, PlanarPoint, PointSet, Rotation};
use rotlab::generators::{Family, FamilySpec};
use rotlab::lift::{is_joint_by_tangents, parabola_from_pair, HParabola};
use rotlab::polymethod::{fit_degree, fit_vanishing, TriPoly};
use rotlab::surfaces::{count_containments, dedup_surfaces, surface_from_rotation_line, surface_param, surface_sets};
use serde::Serialize;

type BoxResult<T> = Result<T, Box<dyn std::error::Error>>;

#[derive(Parser)]
#[command(
    name = "rotlab",
    version,
    about = "Exact rotation censuses, lifted parabolas and special surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Grid,
    Random,
    Collinear,
    LowerBound,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Grid => Family::Grid,
            FamilyArg::Random => Family::Random,
            FamilyArg::Collinear => Family::Collinear,
            FamilyArg::LowerBound => Family::LowerBound,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Seed for the random family.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random coordinates have |numerator/denominator| at most this.
    #[arg(long, default_value_t = 10)]
    range: i64,
    /// Largest denominator of random coordinates.
    #[arg(long, default_value_t = 1)]
    denom: i64,
}

impl FamilyArgs {
    fn spec(&self) -> FamilySpec {
        let mut spec = FamilySpec::new(self.family.into());
        spec.seed = self.seed;
        spec.coord_range = self.range;
        spec.denom_bound = self.denom;
        spec
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a point set; CSV when the output ends in `.csv`, JSON otherwise.
    Generate {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 1)]
        rows: usize,
        #[arg(long, default_value_t = 1)]
        cols: usize,
        /// Point count (random, collinear) or construction parameter (lower-bound).
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rotation census of a point set.
    Census {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        include_identity: bool,
        /// Floating-point census with tolerance 1e-9.
        #[arg(long)]
        float_fast: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write one CSV row per rotation (exact mode only).
        #[arg(long)]
        rotations_csv: Option<PathBuf>,
    },
    /// Rotations with k >= 3, classified by sources and by tangent rank.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Special surfaces through the flat rotations of a point set.
    Surfaces {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        from_flat_rotations: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Least-degree polynomial vanishing on lifted points.
    Polyfit {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Census tables over a range of sizes.
    Experiment {
        #[command(flatten)]
        family: FamilyArgs,
        /// Inclusive range `A..B`.
        #[arg(long, value_parser = parse_sizes)]
        sizes: std::ops::RangeInclusive<usize>,
        #[arg(long, default_value_t = 6)]
        kmax: u64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
        report: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall_ms as 0.
        #[arg(long)]
        no_timing: bool,
        /// Count rotation-parabola incidences per size.
        #[arg(long)]
        include_incidences: bool,
    },
    /// Randomized invariant suites; exits 1 on any failure.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn parse_sizes(s: &str) -> Result<std::ops::RangeInclusive<usize>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: usize = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok(a..=b)
}

fn emit(stdout: &mut dyn Write, out: Option<&Path>, text: &str) -> BoxResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display()).into()),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Runs the command line in `args` (program name first), writing results to
/// `out`. Errors come back as messages for exit code 2.
pub fn try_execute<I, T>(args: I, out: &mut dyn Write) -> Result<u8, String>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if e.use_stderr() => return Err(e.to_string()),
        Err(e) => {
            write!(out, "{e}").map_err(|e| e.to_string())?;
            return Ok(0);
        }
    };
    run(cli.command, out).map_err(|e| e.to_string())
}

/// [`try_execute`] with the error printed to stderr; returns the exit code.
pub fn execute<I, T>(args: I, out: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match try_execute(args, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.trim_end());
            2
        }
    }
}

fn run(cmd: Command, stdout: &mut dyn Write) -> BoxResult<u8> {
    match cmd {
        Command::Generate {
            family,
            rows,
            cols,
            s,
            out,
        } => {
            let mut spec = family.spec();
            spec.rows = rows;
            spec.cols = cols;
            spec.s = s;
            let set = spec.generate()?;
            let csv = out
                .as_ref()
                .is_some_and(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")));
            let text = if csv {
                io::points_to_csv(&set)
            } else {
                io::points_to_json(&set)
            };
            emit(stdout, out.as_deref(), &text)?;
        }
        Command::Census {
            input,
            include_identity,
            float_fast,
            out,
            rotations_csv,
        } => {
            let set = io::read_points(&input)?;
            if float_fast {
                if rotations_csv.is_some() {
                    return Err("--rotations-csv needs the exact census".into());
                }
                emit(stdout, out.as_deref(), &float_census(&set, include_identity).to_json())?;
            } else {
                let opts = CensusOptions {
                    include_identity,
                    workers: None,
                };
                let c = rotation_census(&set, opts)?;
                emit(stdout, out.as_deref(), &CensusReport::from_census(&c).to_json())?;
                if let Some(p) = rotations_csv {
                    emit(stdout, Some(&p), &census_csv(&c))?;
                }
            }
        }
        Command::Classify { input, out } => {
            let set = io::read_points(&input)?;
            emit(stdout, out.as_deref(), &classify_csv(&set)?)?;
        }
        Command::Surfaces {
            input,
            from_flat_rotations,
            out,
        } => {
            if !from_flat_rotations {
                return Err("no surface source selected; pass --from-flat-rotations".into());
            }
            let set = io::read_points(&input)?;
            emit(stdout, out.as_deref(), &json(&surfaces_report(&set)?))?;
        }
        Command::Polyfit { points, out } => {
            let pts = io::xyz_from_json(&io::read(&points)?)?;
            let p = fit_vanishing(&pts)?;
            let report = PolyfitReport {
                points: pts.len(),
                degree_bound: fit_degree(pts.len()),
                degree: p.degree(),
                vanishes: pts.iter().all(|q| p.eval(q).is_zero()),
                polynomial: p.canonical(),
            };
            emit(stdout, out.as_deref(), &json(&report))?;
        }
        Command::Experiment {
            family,
            sizes,
            kmax,
            report,
            out,
            no_timing,
            include_incidences,
        } => {
            let sizes: Vec<usize> = sizes.collect();
            let opts = ExperimentOptions {
                with_incidences: include_incidences,
                omit_timing: no_timing,
            };
            let rep = run_experiment(&family.spec(), &sizes, kmax, opts);
            let text = match report {
                ReportFormat::Csv => rep.to_csv(),
                ReportFormat::Json => rep.to_json(),
            };
            emit(stdout, out.as_deref(), &text)?;
            for (size, e) in rep.failures() {
                eprintln!("size {size}: {e}");
            }
            if !rep.failures().is_empty() {
                return Ok(1);
            }
        }
        Command::Verify { suite, cases, seed } => {
            let rep = verify_suite(&suite, cases, seed)
                .ok_or_else(|| format!("unknown suite {suite:?}; expected one of {}", SUITES.join(", ")))?;
            write!(stdout, "{rep}")?;
            if !rep.ok() {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct PolyfitReport {
    points: usize,
    degree_bound: usize,
    degree: Option<u32>,
    vanishes: bool,
    polynomial: TriPoly,
}

fn classify_csv(set: &PointSet) -> BoxResult<String> {
    let c = rotation_census(set, CensusOptions::default())?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["p1", "p2", "q1", "q2", "k", "class", "tangent_class"])?;
    for (rot, e) in c.entries.iter().filter(|(_, e)| e.multiplicity >= 3) {
        let tangent = if rot.is_half_turn() {
            "excluded"
        } else if is_joint_by_tangents(rot.p(), &source_set(rot, set)) {
            "joint"
        } else {
            "flat"
        };
        let [p1, p2, q1, q2] = rot.key().map(format_rational);
        w.write_record([
            p1,
            p2,
            q1,
            q2,
            e.multiplicity.to_string(),
            e.classification.as_str().into(),
            tangent.into(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[derive(Serialize)]
struct SurfaceRecord {
    rotation: Rotation,
    k: u64,
    source: PlanarPoint,
    direction: PlanarPoint,
    surface: rotlab::surfaces::SpecialSurface,
    param: rotlab::surfaces::SurfaceParam,
    /// `[α, β, σ]` when the axis is not vertical.
    alpha_beta_sigma: Option<[String; 3]>,
    /// Pairs `(a, b)` of the set with `h_{a,b}` on the surface.
    contained_pairs: Vec<(PlanarPoint, PlanarPoint)>,
}

#[derive(Serialize)]
struct SurfacesReport {
    s: usize,
    flat_rotations: usize,
    skipped_half_turns: usize,
    surfaces: Vec<SurfaceRecord>,
    distinct_surfaces: usize,
    /// `(h_{a,b}, Σ)` containments over all ordered pairs of the set and
    /// the distinct surfaces.
    containments: u64,
}

fn surfaces_report(set: &PointSet) -> BoxResult<SurfacesReport> {
    let c = rotation_census(set, CensusOptions::default())?;
    let mut records = Vec::new();
    let mut skipped = 0;
    let mut flat = 0;
    for (rot, e) in c
        .entries
        .iter()
        .filter(|(_, e)| e.classification == Classification::Flat)
    {
        flat += 1;
        if rot.is_half_turn() {
            skipped += 1;
            continue;
        }
        let src = source_set(rot, set);
        let direction = src[1].sub(&src[0]);
        let sigma = surface_from_rotation_line(rot, &src[0], &direction)?;
        let param = surface_param(&sigma);
        let abs = param
            .alpha_beta_sigma()
            .map(|(a, b, s)| [format_rational(&a), format_rational(&b), format_rational(&s)]);
        records.push(SurfaceRecord {
            rotation: rot.clone(),
            k: e.multiplicity,
            source: src[0].clone(),
            direction,
            contained_pairs: surface_sets(&sigma, set).pairs,
            surface: sigma,
            param,
            alpha_beta_sigma: abs,
        });
    }
    let distinct = dedup_surfaces(records.iter().map(|r| r.surface.clone()).collect());
    let parabolas: Vec<HParabola> = set
        .iter()
        .flat_map(|a| set.iter().filter(move |b| *b != a).map(move |b| (a, b)))
        .filter_map(|(a, b)| parabola_from_pair(a, b).ok())
        .collect();
    Ok(SurfacesReport {
        s: set.len(),
        flat_rotations: flat,
        skipped_half_turns: skipped,
        containments: count_containments(&parabolas, &distinct),
        distinct_surfaces: distinct.len(),
        surfaces: records,
    })
}
