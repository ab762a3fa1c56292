use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use hfam_core::budget::{Budget, DEFAULT_BUDGET};
use hfam_core::critical::{
    contained_constellations, is_critical_with_horizon, verify_constellation_cover, verify_kpr,
    verify_partition_fraction, verify_star_speed, S_HORIZON,
};
use hfam_core::enumerate::{enumerate_family_members, speed_delta, EnumOptions};
use hfam_core::family::named_graph;
use hfam_core::stars::{
    find_template_with_budget, generate_constellations, is_member_pj_with_budget, is_s_star, minimal_core,
    spot_check_minimal_non_stars,
};
use hfam_core::structure::classify;
use hfam_core::{canonical_form, coloring_number, graph6, Constellation, Error, FamilyExpr, Graph};

/// Exact analysis of hereditary graph families.
#[derive(Parser, Serialize)]
#[command(name = "hfam", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Node budget for each membership or template search.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    /// Worker threads (defaults to all cores). Output does not depend on it.
    #[arg(long, global = true)]
    #[serde(skip)]
    threads: Option<usize>,

    /// Write the artifact to `<dir>/<command>-<config hash>.<ext>` instead of stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    out: Option<PathBuf>,

    /// Output format; commands without a table only produce JSON.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Exact speed table: unlabeled and labeled counts per n.
    Speed {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        /// Permit n_max up to 12.
        #[arg(long)]
        allow_large: bool,
        /// Also write every member as graph6 to this file.
        #[arg(long)]
        members: Option<PathBuf>,
        /// Cache finished levels here and reuse them on later runs.
        #[arg(long)]
        checkpoint_dir: Option<PathBuf>,
    },
    /// Colouring number of a forb(...) family.
    ChiC {
        #[arg(long)]
        family: String,
    },
    /// Colouring number, apex-freeness, meagerness and reduced members.
    Classify {
        #[arg(long)]
        family: String,
        /// Horizon for the reduced-member listing.
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
    /// Cores, star systems and templates.
    #[command(subcommand)]
    Stars(StarsCommand),
    /// Irreducible (l, s)-constellations up to equivalence.
    Constellations {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        s: usize,
        /// Keep only those whose P(J) lies inside this forb(...) family.
        #[arg(long)]
        family: Option<String>,
    },
    /// Criticality by the first-factor tuple scan.
    Critical {
        #[arg(long)]
        family: String,
        /// Largest n used when estimating s.
        #[arg(long, default_value_t = S_HORIZON)]
        horizon: usize,
    },
    /// Finite verification experiments.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// graph6 pipelines over stdin and stdout.
    #[command(subcommand)]
    Graph6(Graph6Command),
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum StarsCommand {
    /// Smallest core of a graph.
    Core {
        #[arg(long)]
        graph: String,
        /// Also report whether the graph is an s-star.
        #[arg(long)]
        s: Option<usize>,
    },
    /// Membership in P(J), with a certificate.
    Member {
        #[arg(long)]
        graph: String,
        /// Constellation JSON: {"j": g6, "phi": [...], "alpha": [0/1...], "beta": [0/1...]}.
        #[arg(long)]
        constellation: String,
    },
    /// A J-template on the graph itself.
    Template {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        constellation: String,
    },
    /// Seeded search for vertex-minimal non-s-stars.
    Scan {
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum VerifyCommand {
    /// |H(l)^n| / |Forb(K_{l+1})^n|.
    Kpr {
        #[arg(long, default_value_t = 2)]
        l: usize,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
    /// Fraction of the family admitting a partition into l parts from --parts.
    Partition {
        #[arg(long)]
        family: String,
        #[arg(long)]
        parts: String,
        /// Defaults to the colouring number.
        #[arg(long)]
        l: Option<usize>,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
    },
    /// Fraction of the family covered by contained constellations.
    Cover {
        #[arg(long)]
        family: String,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
    /// Speed of P(J) against |V(J)| log n.
    StarSpeed {
        #[arg(long)]
        constellation: String,
        /// First n of the drift window; defaults to ceil(n_max / 2).
        #[arg(long)]
        window_start: Option<usize>,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
    /// h(F, n) − h(H(l), n) with a fitted log coefficient.
    Delta {
        #[arg(long)]
        family: String,
        /// Defaults to the colouring number.
        #[arg(long)]
        l: Option<usize>,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Graph6Command {
    /// Lines `n u-v u-v ...` to graph6.
    Encode,
    /// graph6 lines to `n u-v u-v ...`.
    Decode,
    /// graph6 lines to the graph6 of their canonical form.
    Canon,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Budget { .. }) => 3,
            CliError::Core(Error::Io(_)) | CliError::Io(_) => 1,
            CliError::Core(_) | CliError::Usage(_) => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

struct Artifact {
    text: String,
    ext: &'static str,
}

fn json<T: Serialize>(value: &T) -> Artifact {
    Artifact { text: serde_json::to_string_pretty(value).expect("serializable") + "\n", ext: "json" }
}

fn csv(text: String) -> Artifact {
    Artifact { text, ext: "csv" }
}

fn family(text: &str) -> CliResult<FamilyExpr> {
    Ok(text.parse()?)
}

/// A graph name such as `C5`, or graph6 with an optional `g6:` prefix.
fn graph(text: &str) -> CliResult<Graph> {
    if let Some(g) = named_graph(text) {
        return Ok(g);
    }
    Ok(graph6::decode(text.strip_prefix("g6:").unwrap_or(text))?)
}

fn constellation(text: &str) -> CliResult<Constellation> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("bad constellation JSON: {e}")))
}

fn chi_c(f: &FamilyExpr) -> CliResult<usize> {
    coloring_number(f)?
        .chi_c
        .ok_or_else(|| CliError::Usage(format!("{f} has unbounded colouring number; pass --l")))
}

fn only_json(cli: &Cli, what: &str) -> CliResult<()> {
    match cli.format {
        Some(Format::Csv) => Err(CliError::Usage(format!("`{what}` has no CSV form; use --format json"))),
        _ => Ok(()),
    }
}

fn run(cli: &Cli) -> CliResult<Option<Artifact>> {
    let as_csv = |default_csv: bool| cli.format.map_or(default_csv, |f| f == Format::Csv);
    let artifact = match &cli.command {
        Command::Speed { family: text, n_max, allow_large, members, checkpoint_dir } => {
            let f = family(text)?;
            let mut opts = EnumOptions::new(*n_max);
            opts.allow_large = *allow_large;
            opts.checkpoint_dir = checkpoint_dir.clone();
            opts.budget = cli.budget;
            let e = enumerate_family_members(&f, &opts)?;
            if let Some(path) = members {
                e.write_graph6(io::BufWriter::new(fs::File::create(path)?))?;
            }
            let table = e.table(&f.to_string());
            if as_csv(true) {
                csv(table.to_csv())
            } else {
                json(&table)
            }
        }
        Command::ChiC { family: text } => {
            only_json(cli, "chi-c")?;
            json(&coloring_number(&family(text)?)?)
        }
        Command::Classify { family: text, n_max } => {
            only_json(cli, "classify")?;
            json(&classify(&family(text)?, *n_max)?)
        }
        Command::Stars(cmd) => {
            only_json(cli, "stars")?;
            stars(cmd, cli.budget)?
        }
        Command::Constellations { l, s, family: text } => {
            only_json(cli, "constellations")?;
            let list = match text {
                Some(t) => contained_constellations(&family(t)?, *l, *s)?,
                None => generate_constellations(*l, *s)?,
            };
            #[derive(Serialize)]
            struct Entry<'a> {
                hash: String,
                constellation: &'a Constellation,
            }
            json(&list.iter().map(|c| Entry { hash: c.stable_hash(), constellation: c }).collect::<Vec<_>>())
        }
        Command::Critical { family: text, horizon } => {
            only_json(cli, "critical")?;
            json(&is_critical_with_horizon(&family(text)?, *horizon)?)
        }
        Command::Verify(cmd) => {
            if let VerifyCommand::Delta { family: text, l, n_max } = cmd {
                let f = family(text)?;
                let l = match l {
                    Some(l) => *l,
                    None => chi_c(&f)?,
                };
                let d = speed_delta(&f, l, *n_max)?;
                return Ok(Some(if as_csv(false) { csv(d.to_csv()) } else { json(&d) }));
            }
            let report = match cmd {
                VerifyCommand::Kpr { l, n_max } => verify_kpr(*l, *n_max)?,
                VerifyCommand::Partition { family: text, parts, l, n_max, eps } => {
                    let f = family(text)?;
                    let l = match l {
                        Some(l) => *l,
                        None => chi_c(&f)?,
                    };
                    verify_partition_fraction(&f, &family(parts)?, l, *n_max, *eps)?
                }
                VerifyCommand::Cover { family: text, l, s, n_max } => verify_constellation_cover(&family(text)?, *l, *s, *n_max)?,
                VerifyCommand::StarSpeed { constellation: text, window_start, n_max } => {
                    let start = window_start.unwrap_or(n_max.div_ceil(2));
                    verify_star_speed(&constellation(text)?, start, *n_max)?
                }
                VerifyCommand::Delta { .. } => unreachable!(),
            };
            if as_csv(false) {
                csv(report.to_csv())
            } else {
                json(&report)
            }
        }
        Command::Graph6(cmd) => {
            graph6_pipe(cmd, io::stdin().lock(), &mut io::stdout().lock())?;
            return Ok(None);
        }
    };
    Ok(Some(artifact))
}

fn stars(cmd: &StarsCommand, budget: u64) -> CliResult<Artifact> {
    Ok(match cmd {
        StarsCommand::Core { graph: text, s } => {
            let g = graph(text)?;
            #[derive(Serialize)]
            struct CoreReport {
                graph: String,
                size: usize,
                core: Vec<usize>,
                #[serde(skip_serializing_if = "Option::is_none")]
                s: Option<usize>,
                #[serde(skip_serializing_if = "Option::is_none")]
                is_s_star: Option<bool>,
            }
            let c = minimal_core(&g);
            json(&CoreReport { graph: graph6::encode(&g), size: c.size, core: c.core, s: *s, is_s_star: s.map(|s| is_s_star(&g, s)) })
        }
        StarsCommand::Member { graph: text, constellation: c } => {
            let (g, c) = (graph(text)?, constellation(c)?);
            json(&is_member_pj_with_budget(&g, &c, &mut Budget::new(budget))?)
        }
        StarsCommand::Template { graph: text, constellation: c } => {
            let (g, c) = (graph(text)?, constellation(c)?);
            json(&find_template_with_budget(&g, &c, &mut Budget::new(budget))?)
        }
        StarsCommand::Scan { s, samples, n_max, seed } => json(&spot_check_minimal_non_stars(*s, *samples, *n_max, *seed)?),
    })
}

fn parse_edge_line(line: &str) -> CliResult<Graph> {
    let bad = || CliError::Usage(format!("expected `n u-v u-v ...`, got `{line}`"));
    let mut words = line.split_whitespace();
    let n: usize = words.next().and_then(|w| w.parse().ok()).ok_or_else(bad)?;
    let mut edges = Vec::new();
    for w in words {
        let (a, b) = w.split_once('-').ok_or_else(bad)?;
        edges.push((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?));
    }
    Ok(Graph::from_edges(n, &edges)?)
}

fn graph6_pipe<R: BufRead, W: Write>(cmd: &Graph6Command, input: R, out: &mut W) -> CliResult<()> {
    for line in input.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match cmd {
            Graph6Command::Encode => writeln!(out, "{}", graph6::encode(&parse_edge_line(line)?))?,
            Graph6Command::Decode => {
                let g = graph6::decode(line)?;
                let edges: Vec<String> = g.edges().map(|(a, b)| format!("{a}-{b}")).collect();
                writeln!(out, "{}", std::iter::once(g.n().to_string()).chain(edges).collect::<Vec<_>>().join(" "))?
            }
            Graph6Command::Canon => writeln!(out, "{}", graph6::encode(&canonical_form(&graph6::decode(line)?)?.canon.to_graph()))?,
        }
    }
    Ok(())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Speed { .. } => "speed",
        Command::ChiC { .. } => "chi-c",
        Command::Classify { .. } => "classify",
        Command::Stars(_) => "stars",
        Command::Constellations { .. } => "constellations",
        Command::Critical { .. } => "critical",
        Command::Verify(_) => "verify",
        Command::Graph6(_) => "graph6",
    }
}

fn emit(cli: &Cli, artifact: Artifact) -> CliResult<()> {
    match &cli.out {
        None => io::stdout().write_all(artifact.text.as_bytes())?,
        Some(dir) => {
            let config = serde_json::to_string(cli).expect("config serializes");
            let hash: String = Sha256::digest(config.as_bytes()).iter().take(8).map(|b| format!("{b:02x}")).collect();
            fs::create_dir_all(dir)?;
            let path = dir.join(format!("{}-{hash}.{}", command_name(&cli.command), artifact.ext));
            fs::write(&path, artifact.text)?;
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("hfam: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli).and_then(|a| a.map_or(Ok(()), |a| emit(&cli, a))) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hfam: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
