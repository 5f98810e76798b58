use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hisfan::catalog::symmetric_levels;
use hisfan::conditions::{
    format_g_table, g_table, g_value, guaranteed_monomials, necessary_box, necessary_subsets,
    necessary_total,
};
use hisfan::exact::parse_rational;
use hisfan::fan::{
    enumerate_greedy_fan, enumerate_statistical_fan, greedy_his, subset_fan, FanLimits, FanResult,
    PriorityPolicy,
};
use hisfan::groebner::{algebraic_fan, certify_vanishing_ideal, vanishing_ideal, SweepOptions};
use hisfan::search::search_factorial;
use hisfan::{load_design, Design, Model, Monomial, MonomialOrder, OrderKind, Rational};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Core(#[from] hisfan::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(hisfan::Error::CapExceeded(_)) => 3,
            CliError::Internal(_) => 1,
            _ => 2,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "hisfan",
    version,
    about = "Hierarchical identifiable models, statistical fans and vanishing ideals of experimental designs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Fallback monomial order used for deterministic iteration.
    #[arg(long, value_parser = parse_kind, default_value = "grevlex", global = true)]
    seed_order: OrderKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FanMode {
    /// One leaf, built greedily under the seed order.
    Single,
    /// Every branch of the greedy construction on the full design.
    Greedy,
    /// Greedy fans of projections onto proper subsets, lifted back.
    Subset,
    /// Greedy and subset leaves together.
    All,
    /// Every staircase in the level box (exact statistical fan).
    Exhaustive,
    /// Groebner quotient bases over lex/grlex/grevlex and all relabellings.
    Algebraic,
}

#[derive(Debug, Args)]
struct DesignArgs {
    /// Design table (CSV/TSV, one point per row).
    #[arg(long)]
    design: PathBuf,
    /// First row of the design table names the indeterminates.
    #[arg(long)]
    header: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank, identifiability and hierarchy of a model on a design.
    Check {
        #[command(flatten)]
        design: DesignArgs,
        /// Model file: one monomial per line, `(2,0,1)` or `x1^2*x3`.
        #[arg(long)]
        model: PathBuf,
    },
    /// List leaves of the statistical fan.
    Fan {
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long, value_enum, default_value_t = FanMode::All)]
        mode: FanMode,
        /// Stop after this many leaves (exit code 3 when reached).
        #[arg(long)]
        cap: Option<usize>,
        /// Order variable ranking for `single` mode, e.g. `2,3,4,1`.
        #[arg(long)]
        perm: Option<String>,
        /// Include projections in `algebraic` mode.
        #[arg(long)]
        subsets: bool,
        /// Also write each leaf as a model file into this directory.
        #[arg(long)]
        write_models: Option<PathBuf>,
    },
    /// Necessary conditions and G values for monomial inclusion.
    Conditions {
        /// Level counts, e.g. `2,2,3,3`.
        #[arg(long, conflicts_with = "design")]
        levels: Option<String>,
        #[arg(long)]
        design: Option<PathBuf>,
        #[arg(long, requires = "design")]
        header: bool,
        /// Monomial to test, e.g. `(1,1,0)` or `x1*x2`.
        #[arg(long)]
        monomial: Option<String>,
        /// Number of design points, for the guaranteed set and the total
        /// condition.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Reduced Groebner basis of the design's vanishing ideal.
    Groebner {
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long, value_parser = parse_kind, default_value = "grlex")]
        order: OrderKind,
        /// Variable ranking, one-based: `2,3,4,1` makes x2 the largest.
        #[arg(long)]
        perm: Option<String>,
    },
    /// Count n-point subsets of a full factorial that identify given models.
    Search {
        /// Level counts, e.g. `4,3`; levels are equally spaced in [-1, 1].
        #[arg(long, required_unless_present = "level_values")]
        levels: Option<String>,
        /// Explicit level values, factors separated by `;`, e.g. `0,1,2,3;0,1,2`.
        #[arg(long)]
        level_values: Option<String>,
        #[arg(long)]
        n: usize,
        /// Required models, one per line in `{1, x1, x2}` form or as
        /// blank-line separated blocks of monomials. Defaults to every
        /// staircase of n monomials in the level box.
        #[arg(long)]
        required: Option<PathBuf>,
        /// Maximum number of subsets to examine.
        #[arg(long, default_value_t = 10_000_000)]
        cap: u64,
    },
}

fn parse_kind(s: &str) -> Result<OrderKind, String> {
    s.parse::<OrderKind>().map_err(|e| e.to_string())
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_design(args: &DesignArgs) -> CliResult<Design> {
    Ok(load_design(&read(&args.design)?, args.header)?)
}

fn parse_list(text: &str) -> CliResult<Vec<usize>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("expected a list of counts, got {text:?}")))
        })
        .collect()
}

fn order_from(kind: OrderKind, perm: Option<&str>, r: usize) -> CliResult<MonomialOrder> {
    let order = match perm {
        Some(p) => MonomialOrder::parse_permutation(kind, p)?,
        None => MonomialOrder::new(kind, r),
    };
    if order.nvars() != r {
        return Err(hisfan::Error::DimensionMismatch {
            expected: r,
            found: order.nvars(),
        }
        .into());
    }
    Ok(order)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn emit(out: &mut impl Write, value: serde_json::Value) -> io::Result<()> {
    writeln!(out, "{value}")
}

fn cmd_check(common: &Common, design: &DesignArgs, model: &Path, out: &mut impl Write) -> CliResult<()> {
    let d = read_design(design)?;
    let m = Model::parse(&read(model)?, d.r())?;
    let report = d.check(&m)?;
    match common.format {
        Format::Text => {
            writeln!(out, "model: {m}").map_err(stdout_err)?;
            writeln!(out, "p: {}", report.p).map_err(stdout_err)?;
            writeln!(out, "n: {}", report.n).map_err(stdout_err)?;
            writeln!(out, "rank: {}", report.rank).map_err(stdout_err)?;
            writeln!(out, "identifiable: {}", yes_no(report.identifiable)).map_err(stdout_err)?;
            writeln!(out, "hierarchical: {}", yes_no(report.hierarchical)).map_err(stdout_err)?;
            writeln!(out, "saturated: {}", yes_no(report.saturated)).map_err(stdout_err)?;
        }
        Format::JsonLines => {
            let mut value = serde_json::to_value(report).expect("serializable");
            value["terms"] = serde_json::to_value(m.terms()).expect("serializable");
            emit(out, value).map_err(stdout_err)?;
        }
    }
    Ok(())
}

fn stdout_err(source: io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    }
}

fn model_file_text(m: &Model) -> String {
    m.terms().iter().map(|t| format!("{}\n", t.tuple_string())).collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_fan(
    common: &Common,
    design: &DesignArgs,
    mode: FanMode,
    cap: Option<usize>,
    perm: Option<&str>,
    subsets: bool,
    write_models: Option<&Path>,
    out: &mut impl Write,
) -> CliResult<()> {
    let d = read_design(design)?;
    let mut limits = FanLimits::default();
    if let Some(cap) = cap {
        if cap == 0 {
            return Err(CliError::Usage("--cap must be positive".into()));
        }
        limits.max_leaves = cap;
    }
    let fan = match mode {
        FanMode::Single => {
            let order = order_from(common.seed_order, perm, d.r())?;
            let mut fan = FanResult::new();
            fan.insert(
                greedy_his(&d, &PriorityPolicy::uniform(order))?,
                hisfan::Provenance::Greedy,
            );
            fan
        }
        FanMode::Greedy => enumerate_greedy_fan(&d, &limits)?,
        FanMode::Subset => subset_fan(&d, &limits)?,
        FanMode::All => {
            let mut fan = enumerate_greedy_fan(&d, &limits)?;
            fan.merge(subset_fan(&d, &limits)?);
            fan
        }
        FanMode::Exhaustive => enumerate_statistical_fan(&d, &limits)?,
        FanMode::Algebraic => algebraic_fan(
            &d,
            &SweepOptions {
                include_subsets: subsets,
                ..SweepOptions::default()
            },
        )?,
    };
    // A merge of two capped searches may overshoot; report at most `cap`.
    let records: Vec<_> = fan
        .records()
        .into_iter()
        .take(limits.max_leaves)
        .collect();
    if let Some(dir) = write_models {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        for (i, model) in fan.models().take(records.len()).enumerate() {
            let path = dir.join(format!("leaf{:04}.txt", i + 1));
            std::fs::write(&path, model_file_text(model))
                .map_err(|source| CliError::Io { path, source })?;
        }
    }
    let counts = fan.counts();
    let truncated = fan.is_truncated() || records.len() < fan.len();
    match common.format {
        Format::Text => {
            for rec in &records {
                writeln!(out, "{}\t{}", rec.pretty, provenance_text(&rec.provenance)).map_err(stdout_err)?;
            }
            let parts: Vec<String> = counts.iter().map(|(k, v)| format!("{k} {v}")).collect();
            writeln!(
                out,
                "# {} leaves ({}){}",
                records.len(),
                parts.join(", "),
                if truncated { ", truncated" } else { "" }
            )
            .map_err(stdout_err)?;
        }
        Format::JsonLines => {
            for rec in &records {
                emit(out, json!({ "record": "leaf", "leaf": rec })).map_err(stdout_err)?;
            }
            emit(
                out,
                json!({ "record": "summary", "leaves": records.len(), "counts": counts, "truncated": truncated }),
            )
            .map_err(stdout_err)?;
        }
    }
    if truncated {
        return Err(hisfan::Error::CapExceeded(format!(
            "stopped after {} leaves",
            records.len()
        ))
        .into());
    }
    Ok(())
}

fn provenance_text(p: &hisfan::Provenance) -> String {
    use hisfan::Provenance::*;
    let vars = |s: &[usize]| {
        s.iter()
            .map(|j| format!("x{}", j + 1))
            .collect::<Vec<_>>()
            .join(",")
    };
    match p {
        Greedy => "greedy".into(),
        Exhaustive => "exhaustive".into(),
        Subset { indeterminates } => format!("subset[{}]", vars(indeterminates)),
        Algebraic {
            order,
            indeterminates: None,
        } => format!("algebraic {order}"),
        Algebraic {
            order,
            indeterminates: Some(s),
        } => format!("algebraic {order} on [{}]", vars(s)),
    }
}

fn cmd_conditions(
    common: &Common,
    levels: Option<&str>,
    design: Option<&Path>,
    header: bool,
    monomial: Option<&str>,
    n: Option<usize>,
    out: &mut impl Write,
) -> CliResult<()> {
    let design = match design {
        Some(path) => Some(load_design(&read(path)?, header)?),
        None => None,
    };
    let levels: Vec<usize> = match (levels, &design) {
        (Some(text), _) => parse_list(text)?,
        (None, Some(d)) => d.level_counts().to_vec(),
        (None, None) => return Err(CliError::Usage("give --levels or --design".into())),
    };
    let n = n.or(design.as_ref().map(Design::n));
    let json_mode = common.format == Format::JsonLines;
    match monomial {
        None => {
            let table = g_table(&levels);
            if json_mode {
                for e in &table {
                    emit(out, json!({ "record": "g", "monomial": e.monomial, "pretty": e.monomial.to_string(), "degree": e.degree, "g": e.g_value.to_string() }))
                        .map_err(stdout_err)?;
                }
            } else {
                write!(out, "{}", format_g_table(&table)).map_err(stdout_err)?;
            }
            if let Some(n) = n {
                let sure = guaranteed_monomials(&levels, n);
                let model = Model::new(levels.len(), sure)?;
                if json_mode {
                    emit(out, json!({ "record": "guaranteed", "n": n, "terms": model.terms(), "pretty": model.to_string() }))
                        .map_err(stdout_err)?;
                } else {
                    writeln!(out, "guaranteed in every leaf with n = {n}: {model}").map_err(stdout_err)?;
                }
            }
        }
        Some(text) => {
            let m = Monomial::parse(text, levels.len())?;
            let boxed = necessary_box(&m, &levels)?;
            let total = n.map(|n| necessary_total(&m, n));
            let subsets = match &design {
                Some(d) => Some(necessary_subsets(d, &m)?),
                None => None,
            };
            let g = if boxed { Some(g_value(&levels, &m)?) } else { None };
            if json_mode {
                emit(
                    out,
                    json!({
                        "record": "verdict",
                        "monomial": m,
                        "pretty": m.to_string(),
                        "box": boxed,
                        "total": total,
                        "subsets": subsets,
                        "g": g.map(|g| g.to_string()),
                        "guaranteed": match (g, n) { (Some(g), Some(n)) => Some(g <= n as u128), _ => None },
                    }),
                )
                .map_err(stdout_err)?;
            } else {
                let pass = |b: bool| if b { "PASS" } else { "FAIL" };
                writeln!(out, "monomial: {m} {}", m.tuple_string()).map_err(stdout_err)?;
                writeln!(out, "box condition: {}", pass(boxed)).map_err(stdout_err)?;
                match total {
                    Some(t) => writeln!(out, "total condition: {}", pass(t)),
                    None => writeln!(out, "total condition: n unknown"),
                }
                .map_err(stdout_err)?;
                match &subsets {
                    Some(v) if v.holds => writeln!(out, "subset condition: PASS"),
                    Some(v) => {
                        let w: Vec<String> = v
                            .witness
                            .iter()
                            .flatten()
                            .map(|j| format!("x{}", j + 1))
                            .collect();
                        writeln!(out, "subset condition: FAIL (witness {{{}}})", w.join(","))
                    }
                    None => writeln!(out, "subset condition: needs --design"),
                }
                .map_err(stdout_err)?;
                match g {
                    Some(g) => writeln!(out, "G: {g}"),
                    None => writeln!(out, "G: undefined outside the level box"),
                }
                .map_err(stdout_err)?;
                if let (Some(g), Some(n)) = (g, n) {
                    writeln!(out, "guaranteed with n = {n}: {}", yes_no(g <= n as u128))
                        .map_err(stdout_err)?;
                }
            }
        }
    }
    Ok(())
}

fn cmd_groebner(
    common: &Common,
    design: &DesignArgs,
    kind: OrderKind,
    perm: Option<&str>,
    out: &mut impl Write,
) -> CliResult<()> {
    let d = read_design(design)?;
    let order = order_from(kind, perm, d.r())?;
    let (gb, quotient) = vanishing_ideal(&d, &order)?;
    if !certify_vanishing_ideal(&d, &gb)? {
        return Err(CliError::Internal(
            "computed basis failed verification on the design points".into(),
        ));
    }
    match common.format {
        Format::Text => {
            writeln!(out, "order: {}", order.describe()).map_err(stdout_err)?;
            writeln!(out, "generators ({}):", gb.len()).map_err(stdout_err)?;
            for g in gb.generators() {
                writeln!(out, "  {g}").map_err(stdout_err)?;
            }
            let lts: Vec<String> = gb.leading_monomials().iter().map(Monomial::to_string).collect();
            writeln!(out, "leading terms: {{{}}}", lts.join(", ")).map_err(stdout_err)?;
            writeln!(out, "standard monomials ({}): {quotient}", quotient.len()).map_err(stdout_err)?;
            writeln!(out, "verified: vanishes on all {} points", d.n()).map_err(stdout_err)?;
        }
        Format::JsonLines => {
            let mut value = serde_json::to_value(gb.to_record()).expect("serializable");
            value["record"] = json!("groebner");
            emit(out, value).map_err(stdout_err)?;
        }
    }
    Ok(())
}

/// Models one per line in `{...}` form, or as blank-line separated blocks of
/// monomials.
fn parse_model_set(text: &str, r: usize) -> CliResult<Vec<Model>> {
    let mut models = Vec::new();
    let mut block = Vec::new();
    let flush = |block: &mut Vec<&str>, models: &mut Vec<Model>| -> CliResult<()> {
        if !block.is_empty() {
            models.push(Model::parse(&block.join("\n"), r)?);
            block.clear();
        }
        Ok(())
    };
    for line in text.lines().map(str::trim) {
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            flush(&mut block, &mut models)?;
        } else if let Some(inner) = line.strip_prefix('{').and_then(|l| l.strip_suffix('}')) {
            flush(&mut block, &mut models)?;
            let terms = split_top_level(inner)
                .into_iter()
                .map(|t| Monomial::parse(t, r))
                .collect::<Result<Vec<_>, _>>()?;
            models.push(Model::new(r, terms)?);
        } else {
            block.push(line);
        }
    }
    flush(&mut block, &mut models)?;
    Ok(models)
}

/// Splits on commas outside parentheses, so tuple terms survive.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(s[start..].trim());
    parts.into_iter().filter(|p| !p.is_empty()).collect()
}

fn cmd_search(
    common: &Common,
    levels: Option<&str>,
    level_values: Option<&str>,
    n: usize,
    required: Option<&Path>,
    cap: u64,
    out: &mut impl Write,
) -> CliResult<()> {
    let values: Vec<Vec<Rational>> = match level_values {
        Some(text) => text
            .split(';')
            .map(|factor| {
                factor
                    .split(',')
                    .map(|v| parse_rational(v.trim()))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?,
        None => parse_list(levels.expect("clap requires levels"))?
            .into_iter()
            .map(symmetric_levels)
            .collect(),
    };
    if cap == 0 {
        return Err(CliError::Usage("--cap must be positive".into()));
    }
    let models = match required {
        Some(path) => Some(parse_model_set(&read(path)?, values.len())?),
        None => None,
    };
    let summary = search_factorial(&values, n, models.as_deref(), cap)?;
    match common.format {
        Format::Text => {
            writeln!(out, "designs evaluated: {}", summary.evaluated).map_err(stdout_err)?;
            writeln!(out, "required models: {}", summary.per_model.len()).map_err(stdout_err)?;
            for (i, count) in summary.per_model.iter().enumerate() {
                writeln!(out, "  model {}: supported by {count}", i + 1).map_err(stdout_err)?;
            }
            writeln!(out, "supporting all: {}", summary.supporting_all).map_err(stdout_err)?;
        }
        Format::JsonLines => {
            let mut value = serde_json::to_value(&summary).expect("serializable");
            value["record"] = json!("search");
            emit(out, value).map_err(stdout_err)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(jobs) = cli.common.jobs {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let common = &cli.common;
    match &cli.command {
        Command::Check { design, model } => cmd_check(common, design, model, &mut out)?,
        Command::Fan {
            design,
            mode,
            cap,
            perm,
            subsets,
            write_models,
        } => {
            let result = cmd_fan(
                common,
                design,
                *mode,
                *cap,
                perm.as_deref(),
                *subsets,
                write_models.as_deref(),
                &mut out,
            );
            out.flush().map_err(stdout_err)?;
            result?
        }
        Command::Conditions {
            levels,
            design,
            header,
            monomial,
            n,
        } => cmd_conditions(
            common,
            levels.as_deref(),
            design.as_deref(),
            *header,
            monomial.as_deref(),
            *n,
            &mut out,
        )?,
        Command::Groebner {
            design,
            order,
            perm,
        } => cmd_groebner(common, design, *order, perm.as_deref(), &mut out)?,
        Command::Search {
            levels,
            level_values,
            n,
            required,
            cap,
        } => cmd_search(
            common,
            levels.as_deref(),
            level_values.as_deref(),
            *n,
            required.as_deref(),
            *cap,
            &mut out,
        )?,
    }
    out.flush().map_err(stdout_err)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_sets_in_both_layouts() {
        let braced = "{1, x1, (0,1)}\n# comment\n{1, x2}\n";
        let models = parse_model_set(braced, 2).unwrap();
        assert_eq!(models.len(), 2);
        assert_eq!(models[0].len(), 3);
        let blocks = "1\nx1\n\n1\nx2\nx2^2\n";
        let models = parse_model_set(blocks, 2).unwrap();
        assert_eq!(models.len(), 2);
        assert_eq!(models[1].len(), 3);
        assert!(parse_model_set("", 2).unwrap().is_empty());
        assert!(parse_model_set("{1, x7}", 2).is_err());
    }

    #[test]
    fn tuple_commas_are_kept_together() {
        assert_eq!(split_top_level("(1,0), x2 ,1"), vec!["(1,0)", "x2", "1"]);
    }

    #[test]
    fn exit_code_mapping() {
        assert_eq!(CliError::Core(hisfan::Error::CapExceeded("x".into())).exit_code(), 3);
        assert_eq!(CliError::Core(hisfan::Error::EmptyModel).exit_code(), 2);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
    }
}
