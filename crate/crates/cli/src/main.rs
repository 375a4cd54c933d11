use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use clsc_sna::netgen::{generate, GenError, GenSpec};
use clsc_sna::network::{load_network, InputFormat, NetworkError, ValidationReport};
use clsc_sna::report::{
    render_findings_json, render_findings_md, render_metrics, FindingsDocument, MetricsFormat, ReportBundle,
    ReportError,
};
use clsc_sna::risk::RiskError;
use clsc_sna::{analyze, metrics_table, validate_flows, ClscNetwork, RiskConfig, Tolerances};

const CONFIG_ENV: &str = "CLSC_SNA_CONFIG";

#[derive(Parser)]
#[command(name = "clsc-sna", version, about = "Network metrics and risk flags for closed-loop supply chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check flow conservation, return rates and capacities.
    Validate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        tol: TolArgs,
        /// Print the full validation report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Degree, strength and reducing factor per facility and layer.
    Metrics {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        tol: TolArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Write metrics.<ext> into this directory instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Compute metrics even if the network fails validation.
        #[arg(long)]
        force: bool,
    },
    /// Flag critical and high-risk facilities.
    Risk {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        /// Write findings.json and findings.md into this directory instead of
        /// printing JSON to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Write the full report: metrics, findings, validation, DOT graphs and curves.
    Report {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        #[arg(long, default_value = "report")]
        out: PathBuf,
        #[arg(long)]
        force: bool,
    },
    /// Generate a synthetic network from a JSON spec.
    Gen {
        spec: PathBuf,
        /// Replace the spec's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Network file: JSON, or a CSV edge list (`from,to,layer,weight`).
    net: PathBuf,
    /// Facility table for CSV input; defaults to facilities.csv next to the edge list.
    #[arg(long)]
    facilities: Option<PathBuf>,
    /// Expected return rate for CSV input.
    #[arg(long)]
    return_rate: Option<f64>,
    /// Enforce single allocation for CSV input.
    #[arg(long)]
    single_allocation: bool,
}

#[derive(Args)]
struct TolArgs {
    /// Allowed absolute conservation gap at DCs.
    #[arg(long)]
    conservation_tol: Option<f64>,
    /// Allowed relative deviation from the return rate.
    #[arg(long)]
    return_rate_tol: Option<f64>,
}

#[derive(Args)]
struct ThresholdArgs {
    /// Risk config JSON; falls back to $CLSC_SNA_CONFIG.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    share_high: Option<f64>,
    #[arg(long)]
    share_low: Option<f64>,
    #[arg(long)]
    r_low: Option<f64>,
    #[arg(long)]
    fanout_min: Option<usize>,
    #[arg(long)]
    utilization_eps: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

impl Format {
    fn metrics_format(self) -> MetricsFormat {
        match self {
            Format::Table => MetricsFormat::Table,
            Format::Csv => MetricsFormat::Csv,
            Format::Json => MetricsFormat::Json,
        }
    }

    fn extension(self) -> &'static str {
        match self {
            Format::Table => "txt",
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

enum Failure {
    /// Flow validation failed; details already printed.
    Violations,
    Input(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Violations => 1,
            Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        Failure::Internal(e.to_string())
    }
}

impl From<RiskError> for Failure {
    fn from(e: RiskError) -> Self {
        match e {
            RiskError::InvalidConfig(_) => Failure::Input(e.to_string()),
            RiskError::UnknownFacility(_) => Failure::Internal(e.to_string()),
        }
    }
}

fn write_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Internal(format!("cannot write {}: {e}", path.display()))
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path).map(BufReader::new).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn load(input: &InputArgs) -> Result<ClscNetwork, Failure> {
    let is_csv = input.net.extension().is_some_and(|ext| ext.eq_ignore_ascii_case("csv"));
    let source = open(&input.net)?;
    let result = if is_csv {
        let facilities_path = input.facilities.clone().unwrap_or_else(|| input.net.with_file_name("facilities.csv"));
        let mut facilities = open(&facilities_path)?;
        load_network(
            source,
            InputFormat::CsvEdgeList {
                facilities: &mut facilities,
                return_rate: input.return_rate,
                single_allocation: input.single_allocation,
            },
        )
    } else {
        load_network(source, InputFormat::Json)
    };
    result.map_err(|e: NetworkError| Failure::Input(format!("{}: {e}", input.net.display())))
}

fn tolerances(args: &TolArgs) -> Tolerances {
    let mut tol = Tolerances::default();
    if let Some(v) = args.conservation_tol {
        tol.conservation_abs = v;
    }
    if let Some(v) = args.return_rate_tol {
        tol.return_rate_rel = v;
    }
    tol
}

fn risk_config(args: &ThresholdArgs) -> Result<RiskConfig, Failure> {
    let path = args.config.clone().or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let mut cfg = match path {
        Some(p) => {
            let text = fs::read_to_string(&p)
                .map_err(|e| Failure::Input(format!("cannot read config {}: {e}", p.display())))?;
            RiskConfig::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?
        }
        None => RiskConfig::default(),
    };
    if let Some(v) = args.share_high {
        cfg.share_high = v;
    }
    if let Some(v) = args.share_low {
        cfg.share_low = v;
    }
    if let Some(v) = args.r_low {
        cfg.r_low = v;
    }
    if let Some(v) = args.fanout_min {
        cfg.fanout_min = v;
    }
    if let Some(v) = args.utilization_eps {
        cfg.utilization_eps = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn print_violations(report: &ValidationReport) {
    for v in &report.violations {
        eprintln!("violation [{}] {}: {}", v.code, v.subject, v.message);
    }
}

/// Runs validation and decides whether to go on. Returns whether the
/// results are validation-dirty.
fn gate(net: &ClscNetwork, tol: &Tolerances, force: bool) -> Result<bool, Failure> {
    let report = validate_flows(net, tol);
    if report.ok {
        return Ok(false);
    }
    print_violations(&report);
    if force {
        eprintln!("warning: network failed validation; continuing because of --force");
        Ok(true)
    } else {
        eprintln!("error: network failed validation (use --force to compute anyway)");
        Err(Failure::Violations)
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| write_failure(parent, e))?;
    }
    fs::write(path, bytes).map_err(|e| write_failure(path, e))
}

fn emit(out: &mut dyn Write, bytes: &[u8]) -> Result<(), Failure> {
    out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| Failure::Internal(format!("stdout: {e}")))
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Validate { input, tol, json } => {
            let net = load(&input)?;
            let report = validate_flows(&net, &tolerances(&tol));
            if json {
                let mut text = serde_json::to_string_pretty(&report).map_err(|e| Failure::Internal(e.to_string()))?;
                text.push('\n');
                emit(out, text.as_bytes())?;
            } else {
                let mut text = String::new();
                for c in &report.checks {
                    let status = if !c.ran {
                        "skipped".to_owned()
                    } else if c.failed == 0 {
                        format!("ok ({} checked)", c.evaluated)
                    } else {
                        format!("FAILED ({} of {})", c.failed, c.evaluated)
                    };
                    text.push_str(&format!("{:<26} {status}\n", c.code.as_str()));
                }
                emit(out, text.as_bytes())?;
                print_violations(&report);
            }
            if report.ok {
                Ok(())
            } else {
                Err(Failure::Violations)
            }
        }
        Command::Metrics { input, tol, format, out: dest, force } => {
            let net = load(&input)?;
            gate(&net, &tolerances(&tol), force)?;
            let mut buf = Vec::new();
            render_metrics(&metrics_table(&net), format.metrics_format(), &mut buf)?;
            match dest {
                Some(dir) => write_file(&dir.join(format!("metrics.{}", format.extension())), &buf),
                None => emit(out, &buf),
            }
        }
        Command::Risk { input, tol, thresholds, out: dest, force } => {
            let cfg = risk_config(&thresholds)?;
            let net = load(&input)?;
            let dirty = gate(&net, &tolerances(&tol), force)?;
            let findings = analyze(&metrics_table(&net), &net, &cfg)?;
            let doc = FindingsDocument { validation_dirty: dirty, config: cfg, findings };
            let mut json = Vec::new();
            render_findings_json(&doc, &mut json)?;
            match dest {
                Some(dir) => {
                    let mut md = Vec::new();
                    render_findings_md(&doc, &mut md)?;
                    write_file(&dir.join("findings.json"), &json)?;
                    write_file(&dir.join("findings.md"), &md)
                }
                None => emit(out, &json),
            }
        }
        Command::Report { input, tol, thresholds, out: dest, force } => {
            let cfg = risk_config(&thresholds)?;
            let net = load(&input)?;
            let tol = tolerances(&tol);
            gate(&net, &tol, force)?;
            let bundle = ReportBundle::build(&net, &cfg, &tol)?;
            let written = bundle.write_to_dir(&net, &dest)?;
            let mut listing = String::new();
            for p in written {
                listing.push_str(&format!("{}\n", p.display()));
            }
            emit(out, listing.as_bytes())
        }
        Command::Gen { spec, seed, out: dest } => {
            let text = fs::read_to_string(&spec)
                .map_err(|e| Failure::Input(format!("cannot read {}: {e}", spec.display())))?;
            let mut gen_spec: GenSpec =
                serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", spec.display())))?;
            if let Some(s) = seed {
                gen_spec.seed = s;
            }
            let net = generate(&gen_spec).map_err(|e| match e {
                GenError::InvalidSpec(_) | GenError::Infeasible(_) => Failure::Input(e.to_string()),
            })?;
            let json = net.to_json();
            match dest {
                Some(path) => write_file(&path, json.as_bytes()),
                None => emit(out, json.as_bytes()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli, &mut io::stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Violations => {}
                Failure::Input(msg) | Failure::Internal(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(failure.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/casestudy_ohio.json")
    }

    fn exec(args: &[&str]) -> Result<(), u8> {
        let cli = Cli::try_parse_from(std::iter::once("clsc-sna").chain(args.iter().copied())).unwrap();
        run(cli, &mut io::sink()).map_err(|f| f.code())
    }

    fn p(path: &Path) -> &str {
        path.to_str().unwrap()
    }

    fn dirty_copy(dir: &Path) -> PathBuf {
        let text = fs::read_to_string(fixture()).unwrap();
        // Bump one DC8 -> R1 shipment so DC8 no longer balances.
        let net = load_network(text.as_bytes(), InputFormat::Json).unwrap();
        let mut edges = net.edges().to_vec();
        let e = edges.iter_mut().find(|e| e.from.as_str() == "DC8").unwrap();
        e.weight += 10.0;
        let dirty =
            ClscNetwork::new(net.facilities().to_vec(), edges, net.return_rate(), net.single_allocation()).unwrap();
        let path = dir.join("dirty.json");
        fs::write(&path, dirty.to_json()).unwrap();
        path
    }

    #[test]
    fn validate_exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(exec(&["validate", p(&fixture())]), Ok(()));
        let broken = dir.path().join("broken.json");
        fs::write(&broken, "{\"facilities\": [").unwrap();
        assert_eq!(exec(&["validate", p(&broken)]), Err(2));
        assert_eq!(exec(&["validate", p(&dir.path().join("missing.json"))]), Err(2));
        assert_eq!(exec(&["validate", p(&dirty_copy(dir.path()))]), Err(1));
    }

    #[test]
    fn metrics_requires_force_on_dirty_input() {
        let dir = tempfile::tempdir().unwrap();
        let dirty = dirty_copy(dir.path());
        let out = dir.path().join("out");
        assert_eq!(exec(&["metrics", p(&dirty), "--out", p(&out)]), Err(1));
        assert!(!out.exists());
        assert_eq!(exec(&["metrics", p(&dirty), "--force", "--format", "csv", "--out", p(&out)]), Ok(()));
        assert!(out.join("metrics.csv").exists());
    }

    #[test]
    fn metrics_table_matches_published_manufacturer_block() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(exec(&["metrics", p(&fixture()), "--out", p(dir.path())]), Ok(()));
        let text = fs::read_to_string(dir.path().join("metrics.txt")).unwrap();
        let m1: Vec<&str> = text.lines().find(|l| l.starts_with("M1 ")).unwrap().split_whitespace().collect();
        assert_eq!(&m1[4..7], ["2", "1100000", "0.90"]);
        let m5: Vec<&str> = text.lines().find(|l| l.starts_with("M5 ")).unwrap().split_whitespace().collect();
        assert_eq!(&m5[4..7], ["3", "1100000", "0.52"]);
    }

    #[test]
    fn risk_config_sources() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("risk");
        assert_eq!(exec(&["risk", p(&fixture()), "--out", p(&out)]), Ok(()));
        let doc: FindingsDocument = serde_json::from_slice(&fs::read(out.join("findings.json")).unwrap()).unwrap();
        let r2: Vec<&str> = doc
            .findings
            .iter()
            .filter(|f| f.rule == clsc_sna::risk::Rule::FanOutConcentration)
            .map(|f| f.facility.as_str())
            .collect();
        assert!(r2.contains(&"DC8") && r2.contains(&"DC33"));
        assert!(!doc.validation_dirty);

        let bad = dir.path().join("bad.json");
        fs::write(&bad, r#"{"fanout_min": 1}"#).unwrap();
        assert_eq!(exec(&["risk", p(&fixture()), "--config", p(&bad)]), Err(2));
        assert_eq!(exec(&["risk", p(&fixture()), "--share-high", "0.01"]), Err(2));

        let cfg = dir.path().join("cfg.json");
        fs::write(&cfg, r#"{"fanout_min": 25}"#).unwrap();
        std::env::set_var(CONFIG_ENV, &cfg);
        let via_env = dir.path().join("env");
        let result = exec(&["risk", p(&fixture()), "--out", p(&via_env)]);
        std::env::remove_var(CONFIG_ENV);
        assert_eq!(result, Ok(()));
        let doc: FindingsDocument = serde_json::from_slice(&fs::read(via_env.join("findings.json")).unwrap()).unwrap();
        assert_eq!(doc.config.fanout_min, 25);
        assert!(doc.findings.iter().all(|f| f.rule != clsc_sna::risk::Rule::FanOutConcentration));
    }

    #[test]
    fn forced_report_is_marked_dirty() {
        let dir = tempfile::tempdir().unwrap();
        let dirty = dirty_copy(dir.path());
        let out = dir.path().join("report");
        assert_eq!(exec(&["report", p(&dirty), "--out", p(&out)]), Err(1));
        assert_eq!(exec(&["report", p(&dirty), "--out", p(&out), "--force"]), Ok(()));
        let doc: FindingsDocument = serde_json::from_slice(&fs::read(out.join("findings.json")).unwrap()).unwrap();
        assert!(doc.validation_dirty);
        for name in clsc_sna::report::REPORT_FILES {
            assert!(out.join(name).exists(), "{name}");
        }
    }

    #[test]
    fn csv_input() {
        let dir = tempfile::tempdir().unwrap();
        let net = clsc_sna::fixtures::casestudy_ohio();
        let edges = dir.path().join("edges.csv");
        let facilities = dir.path().join("facilities.csv");
        net.write_csv(File::create(&edges).unwrap(), File::create(&facilities).unwrap()).unwrap();
        assert_eq!(exec(&["validate", p(&edges), "--return-rate", "0.1"]), Ok(()));
        // Without the rate the return check is skipped; with a wrong one it fails.
        assert_eq!(exec(&["validate", p(&edges)]), Ok(()));
        assert_eq!(exec(&["validate", p(&edges), "--return-rate", "0.2"]), Err(1));
        // Split returns break single allocation.
        assert_eq!(exec(&["validate", p(&edges), "--single-allocation"]), Err(2));
        fs::remove_file(&facilities).unwrap();
        assert_eq!(exec(&["validate", p(&edges)]), Err(2));
    }

    #[test]
    fn gen_seed_override() {
        let dir = tempfile::tempdir().unwrap();
        let spec = dir.path().join("spec.json");
        fs::write(&spec, serde_json::to_string(&GenSpec::case_study_shape(1)).unwrap()).unwrap();
        let run_gen = |seed: &str, name: &str| {
            let out = dir.path().join(name);
            assert_eq!(exec(&["gen", p(&spec), "--seed", seed, "--out", p(&out)]), Ok(()));
            fs::read(out).unwrap()
        };
        assert_eq!(run_gen("7", "a.json"), run_gen("7", "b.json"));
        assert_ne!(run_gen("7", "a.json"), run_gen("8", "c.json"));
        let bad = dir.path().join("bad.json");
        fs::write(&bad, r#"{"n_manufacturers": 0}"#).unwrap();
        assert_eq!(exec(&["gen", p(&bad)]), Err(2));
    }
}
