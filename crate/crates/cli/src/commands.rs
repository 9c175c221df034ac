//! Clap surface and the per-command report builders.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use codense_core::codensity::{
    codensity_carrier, equivariant_maps, ultrafilter_comparison, ultrafilter_to_point,
    unit_is_evaluation, unit_point, zn_fields_codensity,
};
use codense_core::famset::{monad_laws_at, ultraproduct, ultraproduct_routes_agree, FamObject};
use codense_core::fincat::DiagramDump;
use codense_core::finset::FiniteSet;
use codense_core::report::{CheckRecord, Report};
use codense_core::rig::{enumerate_integrals, rig_three_neq_one, theorem_rig_bijection, RigSpec};
use codense_core::ultrafilter::{enumerate_ultrafilters, galvin_horn_exhaustive, Ultrafilter};
use codense_core::vect::{
    dual_monad_report, linearity_for_free, vect_codensity_carrier, vect_comparison,
    vect_unit_point, PrimeField, VectorSpace,
};
use codense_core::{Caps, Error, Result};

use crate::suite::{self, SuiteConfig};

#[derive(Debug, Parser)]
#[command(
    name = "codense",
    version,
    about = "Verification experiments on finite ultrafilters, integration, and codensity carriers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Rendering for standard output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Seed for the randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Record wall-clock milliseconds for each check.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exhaustively classify the subset families on a small carrier.
    GalvinHorn {
        /// Carrier size to scan.
        #[arg(long)]
        size: usize,
    },
    /// Compute a codensity carrier and compare it with the ultrafilters.
    Codensity {
        /// Codomain sizes of the subcategory, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        subcat: Vec<usize>,
        /// Carrier size.
        #[arg(long)]
        x: usize,
        /// Keep only identity connecting maps.
        #[arg(long)]
        non_full: bool,
        /// Write the category-of-elements diagram as JSON.
        #[arg(long, value_name = "PATH")]
        dump_diagram: Option<PathBuf>,
    },
    /// Count maps [X,B] -> B equivariant under every endo-map of B.
    Lawvere {
        /// Size of the fixed codomain B.
        #[arg(long)]
        b: usize,
        /// Carrier size.
        #[arg(long)]
        x: usize,
    },
    /// Compare linear integrals valued in a rig with the ultrafilters.
    Rig {
        /// Built-in rig: boolean, z<n>, or tropical<n>.
        #[arg(long, conflicts_with = "table")]
        name: Option<String>,
        /// Rig table file.
        #[arg(long, value_name = "PATH")]
        table: Option<PathBuf>,
        /// Carrier size.
        #[arg(long)]
        x: usize,
    },
    /// Chinese-remainder decomposition of Z/n and its nilpotent kernel.
    Zn {
        /// Modulus, at least 1.
        #[arg(long)]
        n: u64,
    },
    /// Double dualization of a finite-dimensional space over a prime field.
    Vect {
        /// Field order, a prime.
        #[arg(long)]
        p: usize,
        /// Dimension of the space.
        #[arg(long)]
        d: usize,
        /// Largest codomain dimension in the skeleton.
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
    },
    /// Ultraproduct of a finite family at a principal ultrafilter.
    Ultraproduct {
        /// Family literal, e.g. '{"index":3,"components":[2,0,1]}'.
        #[arg(long)]
        family: String,
        /// Index of the principal ultrafilter.
        #[arg(long)]
        witness: usize,
        /// Codomain sizes for the category-of-elements route.
        #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [1, 2, 3])]
        subcat: Vec<usize>,
    },
    /// Run the named verification checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run the full suite (the default).
    #[arg(long, conflicts_with = "only")]
    pub all: bool,

    /// Run only checks whose name starts with this prefix.
    #[arg(long, value_name = "PREFIX")]
    pub only: Option<String>,

    /// Largest carrier size for the exhaustive scans.
    #[arg(long, default_value_t = 4)]
    pub max_set: usize,

    /// Largest codomain size in subcategory shapes.
    #[arg(long, default_value_t = 4)]
    pub max_subcat: usize,

    /// Largest dimension for the vector-space scans.
    #[arg(long, default_value_t = 2)]
    pub max_field_dim: usize,

    /// Codomain dimension bound for the vector-space skeleton.
    #[arg(long, default_value_t = 2)]
    pub skeleton_cap: usize,

    /// Node budget for the limit solver.
    #[arg(long, default_value_t = 10_000_000)]
    pub solver_node_cap: u64,
}

/// Extra files a command asks to be written alongside the report.
type Artifacts = Vec<(PathBuf, String)>;

/// Writes to stdout, ignoring failures such as a pipe closed by `head`;
/// the exit code carries the verdict regardless.
pub fn write_stdout(text: &str) {
    use std::io::Write as _;
    let _ = std::io::stdout().write_all(text.as_bytes());
}

pub fn dispatch(cli: &Cli) -> i32 {
    match build_report(cli) {
        Ok((report, artifacts)) => {
            let rendered = match cli.format {
                Format::Table => report.render_table(),
                Format::Json => report.to_json(),
            };
            write_stdout(&rendered);
            for (path, contents) in artifacts {
                if let Err(e) = std::fs::write(&path, contents) {
                    eprintln!("codense: cannot write {}: {e}", path.display());
                    return 64;
                }
            }
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, report.to_json()) {
                    eprintln!("codense: cannot write {}: {e}", path.display());
                    return 64;
                }
            }
            if report.passed() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("codense: {e}");
            if e.is_sizing() {
                2
            } else {
                64
            }
        }
    }
}

fn build_report(cli: &Cli) -> Result<(Report, Artifacts)> {
    let caps = Caps::default();
    let start = Instant::now();
    let mut artifacts = Artifacts::new();
    let (command, checks) = match &cli.command {
        Command::GalvinHorn { size } => cmd_galvin_horn(*size)?,
        Command::Codensity {
            subcat,
            x,
            non_full,
            dump_diagram,
        } => cmd_codensity(
            subcat,
            *x,
            *non_full,
            dump_diagram.as_ref(),
            &caps,
            &mut artifacts,
        )?,
        Command::Lawvere { b, x } => cmd_lawvere(*b, *x, &caps)?,
        Command::Rig { name, table, x } => cmd_rig(name.as_deref(), table.as_deref(), *x, &caps)?,
        Command::Zn { n } => cmd_zn(*n)?,
        Command::Vect { p, d, max_dim } => cmd_vect(*p, *d, *max_dim, &caps)?,
        Command::Ultraproduct {
            family,
            witness,
            subcat,
        } => cmd_ultraproduct(family, *witness, subcat, &caps)?,
        Command::Verify(args) => {
            let config = SuiteConfig {
                seed: cli.seed,
                timings: cli.timings,
                only: args.only.clone(),
                max_set: args.max_set,
                max_subcat: args.max_subcat,
                max_field_dim: args.max_field_dim,
                skeleton_cap: args.skeleton_cap,
                caps: Caps {
                    solver_nodes: args.solver_node_cap,
                    ..caps
                },
            };
            (verify_echo(args), suite::run(&config)?)
        }
    };
    let checks = if cli.timings && !matches!(cli.command, Command::Verify(_)) {
        let ms = start.elapsed().as_millis() as u64;
        checks
            .into_iter()
            .map(|c| c.with_millis(Some(ms)))
            .collect()
    } else {
        checks
    };
    Ok((Report::new(command, cli.seed, checks), artifacts))
}

fn verify_echo(args: &VerifyArgs) -> String {
    let mut cmd = String::from("verify");
    match &args.only {
        Some(prefix) => write!(cmd, " --only {prefix}").unwrap(),
        None => cmd.push_str(" --all"),
    }
    write!(
        cmd,
        " --max-set {} --max-subcat {} --max-field-dim {} --skeleton-cap {} --solver-node-cap {}",
        args.max_set, args.max_subcat, args.max_field_dim, args.skeleton_cap, args.solver_node_cap
    )
    .unwrap();
    cmd
}

fn join_sizes(sizes: &[usize]) -> String {
    sizes
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn cmd_galvin_horn(size: usize) -> Result<(String, Vec<CheckRecord>)> {
    let report = galvin_horn_exhaustive(&FiniteSet::new(size))?;
    let inputs = format!("size={size}");
    let checks = vec![
        CheckRecord::compare(
            "galvin-horn.families-scanned",
            inputs.clone(),
            report.family_count.to_string(),
            report.family_count.to_string(),
        ),
        CheckRecord::compare(
            "galvin-horn.classifications-agree",
            inputs.clone(),
            "agree",
            if report.classifications_agree {
                "agree"
            } else {
                "disagree"
            },
        ),
        CheckRecord::compare(
            "galvin-horn.ultrafilters",
            inputs.clone(),
            format!("{size} principal"),
            format!(
                "{} {}",
                report.ultrafilter_count,
                if report.ultrafilters_principal {
                    "principal"
                } else {
                    "non-principal present"
                }
            ),
        ),
        CheckRecord::compare(
            "galvin-horn.partition-all",
            inputs.clone(),
            report.ultrafilter_count.to_string(),
            report.partition_all_count.to_string(),
        ),
        CheckRecord::compare(
            "galvin-horn.partition-three",
            inputs,
            report.ultrafilter_count.to_string(),
            report.partition_three_count.to_string(),
        ),
    ];
    Ok((format!("galvin-horn --size {size}"), checks))
}

fn cmd_codensity(
    sizes: &[usize],
    x: usize,
    non_full: bool,
    dump: Option<&PathBuf>,
    caps: &Caps,
    artifacts: &mut Artifacts,
) -> Result<(String, Vec<CheckRecord>)> {
    let set = FiniteSet::new(x);
    let full = !non_full;
    let carrier = codensity_carrier(sizes, &set, full, caps)?;
    if let Some(path) = dump {
        let dump_json =
            serde_json::to_string_pretty(&DiagramDump::from_elements(&carrier.elements))
                .expect("diagram dumps serialize");
        artifacts.push((path.clone(), dump_json + "\n"));
    }
    let inputs = format!("subcat=[{}] x={x} full={full}", join_sizes(sizes));
    let mut checks = vec![CheckRecord::compare(
        "codensity.carrier-size",
        inputs.clone(),
        carrier.size().to_string(),
        carrier.size().to_string(),
    )];
    if full && sizes.iter().max().copied().unwrap_or(0) >= 3 {
        let cmp = ultrafilter_comparison(sizes, &set, caps)?;
        checks.push(CheckRecord::compare(
            "codensity.ultrafilter-bijection",
            inputs.clone(),
            format!("{} points, bijective", cmp.ultrafilter_count),
            format!(
                "{} points, {}",
                cmp.codensity_size,
                if cmp.bijective() {
                    "bijective"
                } else {
                    "not bijective"
                }
            ),
        ));
        checks.push(CheckRecord::compare(
            "codensity.unit-is-evaluation",
            inputs,
            "evaluation",
            if unit_is_evaluation(sizes, &set, caps)? {
                "evaluation"
            } else {
                "not evaluation"
            },
        ));
    } else {
        let ultrafilters = enumerate_ultrafilters(&set)?;
        let mut points = Vec::with_capacity(ultrafilters.len());
        for u in &ultrafilters {
            points.push(ultrafilter_to_point(&carrier.elements, u)?);
        }
        let landed = points.iter().all(|p| carrier.contains(p));
        let mut distinct = true;
        for (i, a) in points.iter().enumerate() {
            if points.iter().skip(i + 1).any(|b| b == a) {
                distinct = false;
            }
        }
        checks.push(CheckRecord::compare(
            "codensity.ultrafilters-embed",
            inputs.clone(),
            format!("{} distinct points in the carrier", ultrafilters.len()),
            if landed && distinct {
                format!("{} distinct points in the carrier", points.len())
            } else {
                format!("landed={landed} distinct={distinct}")
            },
        ));
        let mut unit_inside = true;
        for i in 0..x {
            if !carrier.contains(&unit_point(&carrier.elements, i)?) {
                unit_inside = false;
            }
        }
        checks.push(CheckRecord::compare(
            "codensity.unit-in-carrier",
            inputs,
            "inside",
            if unit_inside { "inside" } else { "outside" },
        ));
    }
    let mut command = format!("codensity --subcat {} --x {x}", join_sizes(sizes));
    if non_full {
        command.push_str(" --non-full");
    }
    Ok((command, checks))
}

fn cmd_lawvere(b: usize, x: usize, caps: &Caps) -> Result<(String, Vec<CheckRecord>)> {
    let set = FiniteSet::new(x);
    let maps = equivariant_maps(b, &set, caps)?;
    let inputs = format!("b={b} x={x}");
    let checks = vec![
        CheckRecord::compare(
            "lawvere.equivariant-count",
            inputs.clone(),
            maps.len().to_string(),
            maps.len().to_string(),
        ),
        CheckRecord::compare(
            "lawvere.ultrafilter-count",
            inputs,
            x.to_string(),
            enumerate_ultrafilters(&set)?.len().to_string(),
        ),
    ];
    Ok((format!("lawvere --b {b} --x {x}"), checks))
}

fn builtin_rig(name: &str) -> Result<RigSpec> {
    let lower = name.to_ascii_lowercase();
    if lower == "boolean" {
        return Ok(RigSpec::boolean());
    }
    if let Some(rest) = lower.strip_prefix("tropical") {
        if let Ok(k) = rest.trim_start_matches('/').parse::<usize>() {
            return RigSpec::tropical(k);
        }
    }
    if let Some(rest) = lower.strip_prefix('z') {
        if let Ok(n) = rest.trim_start_matches('/').parse::<usize>() {
            return RigSpec::zmod(n);
        }
    }
    Err(Error::Parse(format!(
        "unknown rig name {name:?}; use boolean, z<n>, or tropical<n>"
    )))
}

fn cmd_rig(
    name: Option<&str>,
    table: Option<&std::path::Path>,
    x: usize,
    caps: &Caps,
) -> Result<(String, Vec<CheckRecord>)> {
    let (rig, echo) = match (name, table) {
        (Some(n), None) => (builtin_rig(n)?, format!("rig --name {n} --x {x}")),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            (
                RigSpec::parse(&text)?,
                format!("rig --table {} --x {x}", path.display()),
            )
        }
        _ => {
            return Err(Error::Parse(
                "provide exactly one of --name or --table".to_string(),
            ))
        }
    };
    let set = FiniteSet::new(x);
    let inputs = format!(
        "rig={} size={} x={x} three_neq_one={}",
        rig.name(),
        rig.size(),
        rig_three_neq_one(&rig)
    );
    let checks = if rig_three_neq_one(&rig) {
        let report = theorem_rig_bijection(&set, &rig, caps.enumeration)?;
        vec![
            CheckRecord::compare(
                "rig.integral-count",
                inputs.clone(),
                report.ultrafilter_count.to_string(),
                report.integral_count.to_string(),
            ),
            CheckRecord::compare(
                "rig.bijection",
                inputs,
                "bijective",
                if report.bijective() {
                    "bijective"
                } else {
                    "not bijective"
                },
            ),
        ]
    } else {
        let integrals = enumerate_integrals(&set, &rig, caps.enumeration)?;
        vec![
            CheckRecord::compare(
                "rig.integral-count",
                inputs.clone(),
                integrals.len().to_string(),
                integrals.len().to_string(),
            ),
            CheckRecord::compare(
                "rig.ultrafilter-count",
                inputs,
                x.to_string(),
                enumerate_ultrafilters(&set)?.len().to_string(),
            ),
        ]
    };
    Ok((echo, checks))
}

fn cmd_zn(n: u64) -> Result<(String, Vec<CheckRecord>)> {
    let report = zn_fields_codensity(n)?;
    let factors = report
        .prime_factors
        .iter()
        .map(|(p, k)| format!("{p}^{k}"))
        .collect::<Vec<_>>()
        .join(" * ");
    let inputs = format!("n={n} factors={factors}");
    let checks = vec![
        CheckRecord::compare(
            "zn.radical",
            inputs.clone(),
            report.radical.to_string(),
            report.radical.to_string(),
        ),
        CheckRecord::compare(
            "zn.crt-bijection",
            inputs.clone(),
            "bijective",
            if report.crt_bijective {
                "bijective"
            } else {
                "not bijective"
            },
        ),
        CheckRecord::compare(
            "zn.kernel-size",
            inputs.clone(),
            (n / report.radical).to_string(),
            report.kernel_size.to_string(),
        ),
        CheckRecord::compare(
            "zn.kernel-is-nilradical",
            inputs,
            "nilradical",
            if report.kernel_is_nilradical {
                "nilradical"
            } else {
                "not the nilradical"
            },
        ),
    ];
    Ok((format!("zn --n {n}"), checks))
}

fn cmd_vect(p: usize, d: usize, max_dim: usize, caps: &Caps) -> Result<(String, Vec<CheckRecord>)> {
    let field = PrimeField::new(p)?;
    let space = VectorSpace::new(field, d);
    let space_size = space.carrier_size(caps.enumeration)?;
    let inputs = format!("p={p} d={d} max_dim={max_dim}");
    let mut checks = Vec::new();
    if max_dim >= 2 {
        let cmp = vect_comparison(space, max_dim, caps)?;
        checks.push(CheckRecord::compare(
            "vect.carrier-size",
            inputs.clone(),
            cmp.space_size.to_string(),
            cmp.codensity_size.to_string(),
        ));
        checks.push(CheckRecord::compare(
            "vect.double-dual-bijection",
            inputs.clone(),
            "bijective",
            if cmp.bijective() {
                "bijective"
            } else {
                "not bijective"
            },
        ));
        let (elements, points) = vect_codensity_carrier(space, max_dim, caps)?;
        checks.push(CheckRecord::compare(
            "vect.linearity-for-free",
            inputs.clone(),
            "linear",
            if linearity_for_free(&elements, &points, caps.enumeration)? {
                "linear"
            } else {
                "not linear"
            },
        ));
    } else {
        let (elements, points) = vect_codensity_carrier(space, max_dim, caps)?;
        checks.push(CheckRecord::compare(
            "vect.carrier-size",
            inputs.clone(),
            points.len().to_string(),
            points.len().to_string(),
        ));
        let mut inside = true;
        for v in 0..space_size {
            if points
                .binary_search(&vect_unit_point(&elements, v))
                .is_err()
            {
                inside = false;
            }
        }
        checks.push(CheckRecord::compare(
            "vect.evaluation-in-carrier",
            inputs.clone(),
            "inside",
            if inside { "inside" } else { "outside" },
        ));
    }
    let monad = dual_monad_report(field, d, caps.enumeration)?;
    checks.push(CheckRecord::compare(
        "vect.dual-monad-laws",
        inputs,
        "hold",
        if monad.all_hold() { "hold" } else { "fail" },
    ));
    Ok((format!("vect --p {p} --d {d} --max-dim {max_dim}"), checks))
}

fn cmd_ultraproduct(
    family_json: &str,
    witness: usize,
    sizes: &[usize],
    caps: &Caps,
) -> Result<(String, Vec<CheckRecord>)> {
    let family = FamObject::from_json(family_json)?;
    let u = Ultrafilter::principal(family.index().clone(), witness)?;
    let up = ultraproduct(&family, &u, caps.enumeration)?;
    let inputs = format!(
        "family={} witness={witness} subcat=[{}]",
        family.to_json(),
        join_sizes(sizes)
    );
    let mut checks = vec![CheckRecord::compare(
        "ultraproduct.size",
        inputs.clone(),
        family.sizes()[witness].to_string(),
        up.size().to_string(),
    )];
    checks.push(CheckRecord::compare(
        "ultraproduct.collapse",
        inputs.clone(),
        "bijective onto the witness fiber",
        match up.collapse_to_witness() {
            Ok(_) => "bijective onto the witness fiber".to_string(),
            Err(e) => e.to_string(),
        },
    ));
    let routes = ultraproduct_routes_agree(&family, &u, sizes, caps)?;
    checks.push(CheckRecord::compare(
        "ultraproduct.routes-agree",
        inputs.clone(),
        format!("{} classes on both routes", routes.poset_size),
        if routes.agree() {
            format!("{} classes on both routes", routes.elements_size)
        } else {
            format!(
                "poset={} elements={} well_defined={} bijective={}",
                routes.poset_size, routes.elements_size, routes.well_defined, routes.bijective
            )
        },
    ));
    let laws = monad_laws_at(&family, caps.enumeration)?;
    checks.push(CheckRecord::compare(
        "ultraproduct.monad-laws",
        inputs,
        "hold",
        if laws.all_hold() { "hold" } else { "fail" },
    ));
    Ok((
        format!(
            "ultraproduct --family {} --witness {witness} --subcat {}",
            family.to_json(),
            join_sizes(sizes)
        ),
        checks,
    ))
}
