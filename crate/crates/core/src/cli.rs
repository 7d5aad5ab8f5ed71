//! The `rmtm` command line.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::ensemble::{moment, Beta, EnsembleSpec, Family, MomentQuery};
use crate::error::RmtError;
use crate::exactnum::{parse_rational, ExactReal, NumericValue, Rational};
use crate::oracle::{mc_moment, SamplerConfig};
use crate::physics::{
    charge_cumulants, delay_limit, delay_moment, limit_catalan, schroeder_series, transmission_moment,
    DelayQuery, TransportQuery,
};
use crate::verify::{run_suite, Check, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DIVERGENT: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Fixed CSV columns of value records.
pub const CSV_COLUMNS: [&str; 18] = [
    "command",
    "ensemble",
    "beta",
    "a",
    "b",
    "delta",
    "m",
    "n",
    "k",
    "order",
    "kind",
    "ratio",
    "diverges",
    "value_rational",
    "pi_half_power",
    "value_float",
    "estimate",
    "std_error",
];

/// Fixed CSV columns of `verify` records.
pub const VERIFY_COLUMNS: [&str; 4] = ["suite", "name", "passed", "detail"];

const AFTER_HELP: &str = "\
Orders (--k) accept a single value, a comma list (1,2,5) or an inclusive range (1..6).

Output is one record per line. JSON records carry the query, `diverges`, and unless
divergent `value_rational` (\"p/q\", null for non-exact values), `pi_half_power` and
`value_float` (17 significant digits); the value is value_rational·π^(pi_half_power/2).

CSV always starts with a header. Value records use the columns
  command,ensemble,beta,a,b,delta,m,n,k,order,kind,ratio,diverges,value_rational,
  pi_half_power,value_float,estimate,std_error
and verify records use suite,name,passed,detail. Unused fields are empty.

Exit status: 0 success, 2 divergent moment, 3 invalid parameters, 4 verification failure.
RMTM_THREADS bounds the number of worker threads.";

#[derive(Parser, Debug)]
#[command(name = "rmtm", version, about = "Exact finite-n moments of classical random matrix ensembles", after_help = AFTER_HELP)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Gaussian,
    Laguerre,
    Jacobi,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LimitKind {
    Catalan,
    Schroeder,
    Delay,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Quad,
    Mc,
    Brute,
    Duality,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// ⟨Σ xᵢᵏ⟩ for one ensemble
    Moment(MomentArgs),
    /// ⟨tr (tt†)ᵏ⟩ of a chaotic cavity
    Transmission(TransportArgs),
    /// ⟨tr Qᵏ⟩ of the Wigner–Smith matrix
    Delay(DelayArgs),
    /// Charge cumulants κ₁ … κ_order
    Cumulants(CumulantArgs),
    /// Large-n limits
    Limit(LimitArgs),
    /// Compare closed forms with the oracles
    Verify(VerifyArgs),
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("'{s}' is not a rational number"))
}

fn beta_arg(s: &str) -> Result<Beta, String> {
    s.parse::<u8>().map_err(|e| e.to_string()).and_then(|v| Beta::from_u8(v).map_err(|e| e.to_string()))
}

#[derive(Clone, Debug)]
struct Orders(Vec<Rational>);

#[derive(Clone, Debug)]
struct IntOrders(Vec<i64>);

fn orders_arg(s: &str) -> Result<Orders, String> {
    order_list(s).map(Orders)
}

/// "3", "1,2,5" or "1..6".
fn order_list(s: &str) -> Result<Vec<Rational>, String> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: i64 = lo.trim().parse().map_err(|_| format!("bad range start in '{s}'"))?;
        let hi: i64 = hi.trim().parse().map_err(|_| format!("bad range end in '{s}'"))?;
        if hi < lo {
            return Err(format!("empty range '{s}'"));
        }
        return Ok((lo..=hi).map(|v| Rational::from_integer(v.into())).collect());
    }
    s.split(',').map(|p| rational_arg(p.trim())).collect()
}

fn int_orders_arg(s: &str) -> Result<IntOrders, String> {
    order_list(s)?
        .into_iter()
        .map(|r| {
            if r.is_integer() {
                i64::try_from(r.to_integer()).map_err(|e| e.to_string())
            } else {
                Err(format!("order {r} must be an integer"))
            }
        })
        .collect::<Result<_, _>>()
        .map(IntOrders)
}

#[derive(Args, Debug)]
struct MomentArgs {
    #[arg(long, value_enum)]
    ensemble: FamilyArg,
    #[arg(long, value_parser = beta_arg)]
    beta: Beta,
    /// Jacobi exponent at x = 1
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    a: Option<Rational>,
    /// Laguerre or Jacobi exponent at x = 0
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    b: Option<Rational>,
    /// Matrix size; half-integers are accepted for β = 4 Laguerre and Jacobi
    #[arg(long, value_parser = rational_arg)]
    n: Rational,
    #[arg(long, value_parser = orders_arg, allow_hyphen_values = true)]
    k: Orders,
    /// Attach a Monte Carlo estimate with this many samples
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Debug)]
struct TransportArgs {
    #[arg(long, value_parser = beta_arg)]
    beta: Beta,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, default_value = "0")]
    delta: Rational,
    #[arg(long)]
    m: i64,
    #[arg(long)]
    n: i64,
    #[arg(long, value_parser = int_orders_arg, allow_hyphen_values = true)]
    k: IntOrders,
}

#[derive(Args, Debug)]
struct DelayArgs {
    #[arg(long, value_parser = beta_arg)]
    beta: Beta,
    #[arg(long)]
    n: i64,
    #[arg(long, value_parser = int_orders_arg, allow_hyphen_values = true)]
    k: IntOrders,
}

#[derive(Args, Debug)]
struct CumulantArgs {
    #[arg(long, value_parser = beta_arg)]
    beta: Beta,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, default_value = "0")]
    delta: Rational,
    #[arg(long)]
    m: i64,
    #[arg(long)]
    n: i64,
    #[arg(long)]
    order: usize,
}

#[derive(Args, Debug)]
struct LimitArgs {
    #[arg(long, value_enum)]
    kind: LimitKind,
    #[arg(long, value_parser = int_orders_arg, allow_hyphen_values = true)]
    k: IntOrders,
    /// m/n for the transmission limit
    #[arg(long, value_parser = rational_arg, default_value = "1")]
    ratio: Rational,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
}

/// One output line of a value-producing subcommand.
#[derive(Clone, Debug)]
pub struct OutputRecord {
    pub command: &'static str,
    pub query: Vec<(&'static str, String)>,
    /// `None` when the quantity diverges.
    pub value: Option<NumericValue>,
    pub estimate: Option<(f64, f64)>,
}

fn float17(v: &NumericValue) -> String {
    v.to_decimal(17)
}

impl OutputRecord {
    pub fn diverges(&self) -> bool {
        self.value.is_none()
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        let q: Map<String, Value> = self.query.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        m.insert("query".into(), Value::Object(q));
        m.insert("diverges".into(), json!(self.diverges()));
        if let Some(v) = &self.value {
            match v.as_exact() {
                Some(e) => {
                    m.insert("value_rational".into(), json!(rational_string(e.coefficient())));
                    m.insert("pi_half_power".into(), json!(e.pi_half_exp()));
                }
                None => {
                    m.insert("value_rational".into(), Value::Null);
                    m.insert("pi_half_power".into(), Value::Null);
                }
            }
            m.insert("value_float".into(), json!(float17(v)));
        }
        if let Some((est, se)) = self.estimate {
            m.insert("estimate".into(), json!(est));
            m.insert("std_error".into(), json!(se));
        }
        Value::Object(m)
    }

    pub fn csv_row(&self) -> Vec<String> {
        CSV_COLUMNS
            .iter()
            .map(|col| match *col {
                "command" => self.command.to_string(),
                "diverges" => self.diverges().to_string(),
                "value_rational" => {
                    self.value.as_ref().and_then(|v| v.as_exact()).map(|e| rational_string(e.coefficient())).unwrap_or_default()
                }
                "pi_half_power" => {
                    self.value.as_ref().and_then(|v| v.as_exact()).map(|e| e.pi_half_exp().to_string()).unwrap_or_default()
                }
                "value_float" => self.value.as_ref().map(float17).unwrap_or_default(),
                "estimate" => self.estimate.map(|e| e.0.to_string()).unwrap_or_default(),
                "std_error" => self.estimate.map(|e| e.1.to_string()).unwrap_or_default(),
                c => self.query.iter().find(|(k, _)| *k == c).map(|(_, v)| v.clone()).unwrap_or_default(),
            })
            .collect()
    }

    /// Rebuilds the exact value from the serialized JSON fields.
    pub fn exact_from_json(v: &Value) -> Option<ExactReal> {
        let r = parse_rational(v.get("value_rational")?.as_str()?)?;
        let e = i32::try_from(v.get("pi_half_power")?.as_i64()?).ok()?;
        Some(ExactReal::new(r, e))
    }
}

/// "p/q" with q ≥ 1, always including the denominator.
pub fn rational_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

enum Failure {
    Invalid(String),
    Verify,
}

impl From<RmtError> for Failure {
    fn from(e: RmtError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

/// Value of a query, with divergence mapped to `None`.
fn settle(r: crate::error::Result<crate::moments::MomentResult>) -> Result<Option<NumericValue>, Failure> {
    match r {
        Ok(m) if m.convergent => Ok(m.value),
        Ok(_) | Err(RmtError::Divergent(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn exact_value(r: crate::error::Result<ExactReal>) -> Result<Option<NumericValue>, Failure> {
    Ok(Some(NumericValue::Exact(r?)))
}

fn moment_records(a: &MomentArgs) -> Result<Vec<OutputRecord>, Failure> {
    let zero = || Rational::from_integer(0.into());
    let family = match a.ensemble {
        FamilyArg::Gaussian => {
            if a.a.is_some() || a.b.is_some() {
                return Err(Failure::Invalid("the Gaussian ensemble takes no --a or --b".into()));
            }
            Family::Gaussian
        }
        FamilyArg::Laguerre => {
            if a.a.is_some() {
                return Err(Failure::Invalid("the Laguerre ensemble takes no --a".into()));
            }
            Family::Laguerre { b: a.b.clone().unwrap_or_else(zero) }
        }
        FamilyArg::Jacobi => {
            Family::Jacobi { a: a.a.clone().unwrap_or_else(zero), b: a.b.clone().unwrap_or_else(zero) }
        }
    };
    let e = EnsembleSpec::new(family.clone(), a.beta, a.n.clone());
    e.validate()?;
    let mut out = Vec::new();
    for k in &a.k.0 {
        let value = settle(moment(&MomentQuery::new(e.clone(), k.clone())))?;
        let estimate = match (a.samples, &value) {
            (Some(s), Some(_)) => {
                let cfg = SamplerConfig::new(e.clone(), a.seed, s);
                let est = mc_moment(&cfg, crate::exactnum::rat_to_f64(k))?;
                Some((est.mean, est.std_error))
            }
            _ => None,
        };
        let mut query = vec![("ensemble", family.name().to_string()), ("beta", a.beta.to_string())];
        match &family {
            Family::Gaussian => {}
            Family::Laguerre { b } => query.push(("b", b.to_string())),
            Family::Jacobi { a, b } => {
                query.push(("a", a.to_string()));
                query.push(("b", b.to_string()));
            }
        }
        query.push(("n", a.n.to_string()));
        query.push(("k", k.to_string()));
        out.push(OutputRecord { command: "moment", query, value, estimate });
    }
    Ok(out)
}

fn transport_query_echo(beta: Beta, delta: &Rational, m: i64, n: i64) -> Vec<(&'static str, String)> {
    vec![("beta", beta.to_string()), ("delta", delta.to_string()), ("m", m.to_string()), ("n", n.to_string())]
}

fn records(cmd: &Command) -> Result<Vec<OutputRecord>, Failure> {
    match cmd {
        Command::Moment(a) => moment_records(a),
        Command::Transmission(a) => a
            .k
            .0
            .iter()
            .map(|&k| {
                let q = TransportQuery::new(a.beta, a.delta.clone(), a.m, a.n, k);
                q.validate()?;
                let mut query = transport_query_echo(a.beta, &a.delta, a.m, a.n);
                query.push(("k", k.to_string()));
                Ok(OutputRecord { command: "transmission", query, value: settle(transmission_moment(&q))?, estimate: None })
            })
            .collect(),
        Command::Delay(a) => a
            .k
            .0
            .iter()
            .map(|&k| {
                let q = DelayQuery::new(a.beta, a.n, k);
                let query = vec![("beta", a.beta.to_string()), ("n", a.n.to_string()), ("k", k.to_string())];
                Ok(OutputRecord { command: "delay", query, value: settle(delay_moment(&q))?, estimate: None })
            })
            .collect(),
        Command::Cumulants(a) => {
            let q = TransportQuery::new(a.beta, a.delta.clone(), a.m, a.n, 1);
            let series = charge_cumulants(&q, a.order)?;
            Ok(series
                .kappas
                .iter()
                .enumerate()
                .map(|(j, kappa)| {
                    let mut query = transport_query_echo(a.beta, &a.delta, a.m, a.n);
                    query.push(("order", (j + 1).to_string()));
                    OutputRecord {
                        command: "cumulants",
                        query,
                        value: Some(NumericValue::Exact(ExactReal::rational(kappa.clone()))),
                        estimate: None,
                    }
                })
                .collect())
        }
        Command::Limit(a) => a
            .k
            .0
            .iter()
            .map(|&k| {
                let (kind, value) = match a.kind {
                    LimitKind::Catalan => ("catalan", exact_value(limit_catalan(k, &a.ratio))?),
                    LimitKind::Schroeder => ("schroeder", exact_value(schroeder_series(k))?),
                    LimitKind::Delay => ("delay", exact_value(delay_limit(k))?),
                };
                let mut query = vec![("kind", kind.to_string()), ("k", k.to_string())];
                if matches!(a.kind, LimitKind::Catalan) {
                    query.push(("ratio", a.ratio.to_string()));
                }
                Ok(OutputRecord { command: "limit", query, value, estimate: None })
            })
            .collect(),
        Command::Verify(_) => Ok(Vec::new()),
    }
}

fn check_json(c: &Check) -> Value {
    json!({ "suite": c.suite.to_string(), "name": c.name, "passed": c.passed, "detail": c.detail })
}

fn emit(format: Format, header: &[&str], rows: Vec<(Value, Vec<String>)>, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            for (j, _) in rows {
                writeln!(out, "{j}")?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(header)?;
            for (_, r) in rows {
                w.write_record(&r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(s) = std::env::var("RMTM_THREADS") {
        let t: usize = s
            .trim()
            .parse()
            .ok()
            .filter(|t| *t > 0)
            .ok_or_else(|| Failure::Invalid(format!("RMTM_THREADS must be a positive integer, got '{s}'")))?;
        // a pool built earlier in the process stays in place
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    Ok(())
}

/// Runs the command line `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INVALID
                }
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(Failure::Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
        Err(Failure::Verify) => EXIT_VERIFY,
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    configure_threads()?;
    let io = |e: std::io::Error| Failure::Invalid(format!("write failed: {e}"));
    if let Command::Verify(v) = &cli.command {
        let suite = match v.suite {
            SuiteArg::Quad => Suite::Quad,
            SuiteArg::Mc => Suite::Mc,
            SuiteArg::Brute => Suite::Brute,
            SuiteArg::Duality => Suite::Duality,
            SuiteArg::All => Suite::All,
        };
        let checks = run_suite(suite, v.seed, v.samples);
        let failed = checks.iter().filter(|c| !c.passed).count();
        for c in checks.iter().filter(|c| !c.passed) {
            let _ = writeln!(err, "FAIL {} {}: {}", c.suite, c.name, c.detail);
        }
        let _ = writeln!(err, "{} checks, {failed} failed", checks.len());
        let rows = checks
            .iter()
            .map(|c| (check_json(c), vec![c.suite.to_string(), c.name.clone(), c.passed.to_string(), c.detail.clone()]))
            .collect();
        emit(cli.format, &VERIFY_COLUMNS, rows, out).map_err(io)?;
        return if failed > 0 { Err(Failure::Verify) } else { Ok(EXIT_OK) };
    }
    let recs = records(&cli.command)?;
    let divergent = recs.iter().any(OutputRecord::diverges);
    let rows = recs.iter().map(|r| (r.to_json(), r.csv_row())).collect();
    emit(cli.format, &CSV_COLUMNS, rows, out).map_err(io)?;
    Ok(if divergent { EXIT_DIVERGENT } else { EXIT_OK })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("rmtm").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn first_json(s: &str) -> Value {
        serde_json::from_str(s.lines().next().unwrap()).unwrap()
    }

    #[test]
    fn delay_mean_is_one() {
        let (code, out, _) = call(&["delay", "--beta", "2", "--n", "3", "--k", "1"]);
        assert_eq!(code, 0);
        assert_eq!(first_json(&out)["value_rational"], "1/1");
    }

    #[test]
    fn transmission_example() {
        let (code, out, _) = call(&["transmission", "--beta", "2", "--delta", "0", "--m", "2", "--n", "1", "--k", "1"]);
        assert_eq!(code, 0);
        let v = first_json(&out);
        assert_eq!(v["value_rational"], "2/3");
        assert_eq!(v["pi_half_power"], 0);
        assert_eq!(v["value_float"], "0.66666666666666667");
    }

    #[test]
    fn divergent_moment_exits_2() {
        let (code, out, _) = call(&["moment", "--ensemble", "laguerre", "--beta", "2", "--b", "0", "--n", "2", "--k", "-3"]);
        assert_eq!(code, 2);
        let v = first_json(&out);
        assert_eq!(v["diverges"], true);
        assert!(v.get("value_rational").is_none() && v.get("value_float").is_none());
    }

    #[test]
    fn invalid_input_exits_3_silently() {
        for args in [
            vec!["moment", "--ensemble", "laguerre", "--beta", "3", "--n", "2", "--k", "1"],
            vec!["moment", "--ensemble", "gaussian", "--beta", "1", "--n", "3", "--k", "2"],
            vec!["transmission", "--beta", "2", "--m", "1", "--n", "2", "--k", "1"],
            vec!["bogus"],
        ] {
            let (code, out, err) = call(&args);
            assert_eq!(code, 3, "{args:?}");
            assert!(out.is_empty());
            assert!(!err.is_empty());
        }
    }

    #[test]
    fn csv_has_fixed_header() {
        let (code, out, _) = call(&["--format", "csv", "moment", "--ensemble", "gaussian", "--beta", "2", "--n", "2", "--k", "1..4"]);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        assert_eq!(lines.count(), 4);
    }

    #[test]
    fn cumulants_rows() {
        let (code, out, _) = call(&["cumulants", "--beta", "2", "--m", "1", "--n", "1", "--order", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 3);
        assert_eq!(first_json(&out)["value_rational"], "1/2");
    }

    #[test]
    fn limits() {
        let (_, out, _) = call(&["limit", "--kind", "schroeder", "--k", "1..4"]);
        let v: Vec<String> = out.lines().map(|l| first_json(l)["value_rational"].as_str().unwrap().to_string()).collect();
        assert_eq!(v, ["2/1", "6/1", "22/1", "90/1"]);
        let (_, out, _) = call(&["limit", "--kind", "catalan", "--k", "2", "--ratio", "1"]);
        assert_eq!(first_json(&out)["value_rational"], "3/8");
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("value_rational"));
    }
}
