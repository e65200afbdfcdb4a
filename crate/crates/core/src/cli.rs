//! The `snfc` command line.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::bounds;
use crate::code::{CodeFile, SecureNetworkCode};
use crate::construct::{self, ConstructOptions, Family};
use crate::cuts::{self, Target};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::gf::Field;
use crate::network::Network;
use crate::verify::{self, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "snfc", version, about = "Secure network function computation for algebraic sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Upper and lower bounds on the secure computing capacity.
    Bound(BoundArgs),
    /// Minimum and primary minimum cuts.
    Cuts(CutsArgs),
    /// Build a secure sum code and write it to a file.
    Construct(ConstructArgs),
    /// Check a code file for computability and security.
    Verify(VerifyArgs),
    /// Run a subcommand on a built-in network or code.
    Example(ExampleArgs),
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[arg(long)]
    network: Option<PathBuf>,
    #[arg(long)]
    r: usize,
    /// Also run the brute-force oracle (at most 16 edges).
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct CutsArgs {
    #[arg(long, global = true)]
    network: Option<PathBuf>,
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    query: CutQuery,
}

#[derive(Debug, Subcommand)]
enum CutQuery {
    /// Minimum cut separating a node from a set of nodes.
    Mincut {
        #[arg(long, value_delimiter = ',', required = true)]
        from: Vec<String>,
        #[arg(long)]
        to: String,
    },
    /// Primary minimum cut separating a set of edges from a set of nodes.
    Primary {
        #[arg(long, value_delimiter = ',', required = true)]
        sources: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        edges: Vec<String>,
    },
}

#[derive(Debug, Args)]
struct ConstructArgs {
    #[arg(long)]
    network: Option<PathBuf>,
    #[arg(long)]
    r: usize,
    /// Code rate R; defaults to C_min.
    #[arg(long)]
    rate: Option<usize>,
    /// Working field as "p^m"; searched over GF(2^L) when absent.
    #[arg(long)]
    field: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Choose B against every wiretap set of size ≤ r instead of the
    /// primary sets of size r.
    #[arg(long)]
    all_wiretap_sets: bool,
    /// Output file; the code is printed when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    network: Option<PathBuf>,
    #[arg(long)]
    code: String,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    exhaustive: bool,
    /// Restrict the exhaustive security pass to primary wiretap sets.
    #[arg(long)]
    fast: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct ExampleArgs {
    /// Network (line, n1, butterfly, fig2) or code (fig1, example3, fig6).
    name: String,
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    rest: Vec<String>,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Built-in context for `example` runs.
#[derive(Default)]
struct Context {
    network: Option<Network>,
    code: Option<CodeFile>,
    force_json: bool,
}

/// Runs the CLI on `argv` (including the program name).
pub fn run(argv: &[String], env: &HashMap<String, String>) -> Output {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let status = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if status == 0 {
                Output { status, stdout: text, stderr: String::new() }
            } else {
                Output { status, stdout: String::new(), stderr: text }
            };
        }
    };
    dispatch(cli.command, env, Context::default())
}

fn dispatch(command: Command, env: &HashMap<String, String>, ctx: Context) -> Output {
    let json = ctx.force_json
        || match &command {
            Command::Bound(a) => a.json,
            Command::Cuts(a) => a.json,
            Command::Construct(a) => a.json,
            Command::Verify(a) => a.json,
            Command::Example(_) => false,
        };
    let result = match command {
        Command::Bound(a) => bound(a, &ctx, json),
        Command::Cuts(a) => cuts_cmd(a, &ctx, json),
        Command::Construct(a) => construct_cmd(a, &ctx, json),
        Command::Verify(a) => verify_cmd(a, &ctx, env, json),
        Command::Example(a) => return example(a, env),
    };
    match result {
        Ok((status, stdout)) => Output { status, stdout, stderr: String::new() },
        Err(CliError::Usage(msg)) => Output {
            status: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(CliError::Domain(e)) => {
            let stdout = if json {
                json_line(&json!({"error": e.code(), "message": e.to_string()}))
            } else {
                String::new()
            };
            Output {
                status: 1,
                stdout,
                stderr: format!("error [{}]: {e}\n", e.code()),
            }
        }
    }
}

enum CliError {
    Usage(String),
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

type CmdResult = std::result::Result<(i32, String), CliError>;

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_network(path: Option<&PathBuf>, ctx: &Context) -> std::result::Result<Network, CliError> {
    match (path, &ctx.network) {
        (Some(p), _) => Ok(Network::from_json(&read(p)?)?),
        (None, Some(net)) => Ok(net.clone()),
        (None, None) => Err(CliError::Usage("--network is required".into())),
    }
}

fn bound(a: BoundArgs, ctx: &Context, json: bool) -> CmdResult {
    let net = load_network(a.network.as_ref(), ctx)?;
    if a.r > net.edge_count() {
        return Err(CliError::Usage(format!("--r must be at most |E| = {}", net.edge_count())));
    }
    let rep = bounds::upper_bound(&net, a.r);
    let oracle = if a.oracle { Some(bounds::upper_bound_oracle(&net, a.r)?) } else { None };
    if json {
        let mut j = rep.to_json(&net);
        j.oracle = oracle;
        return Ok((0, json_line(&j)));
    }
    let mut out = String::new();
    let _ = writeln!(out, "r          {}", rep.r);
    let _ = writeln!(out, "upper      {}", rep.upper);
    let _ = writeln!(out, "lower      {}", rep.lower);
    let _ = writeln!(out, "c_min      {}", rep.c_min);
    let _ = writeln!(out, "c_min_bar  {}", rep.c_min_bar);
    let _ = writeln!(out, "witness W  {{{}}}", net.edge_names(&rep.witness_w).join(","));
    let _ = writeln!(out, "cut C*_W   {{{}}}", net.edge_names(&rep.witness_cut).join(","));
    match rep.exact {
        Some((v, reason)) => {
            let reason = serde_json::to_value(reason).unwrap();
            let _ = writeln!(out, "exact      {v} ({})", reason.as_str().unwrap());
        }
        None => out.push_str("exact      unknown\n"),
    }
    if let Some(o) = oracle {
        let _ = writeln!(out, "oracle     {o}");
    }
    Ok((0, out))
}

fn nodes(net: &Network, names: &[String]) -> Result<Vec<usize>> {
    names.iter().map(|n| net.node(n)).collect()
}

fn cuts_cmd(a: CutsArgs, ctx: &Context, json: bool) -> CmdResult {
    let net = load_network(a.network.as_ref(), ctx)?;
    let rep = match a.query {
        CutQuery::Mincut { from, to } => {
            let origin = nodes(&net, &from)?;
            cuts::min_cut(&net, &origin, net.node(&to)?)?
        }
        CutQuery::Primary { sources, edges } => {
            let origin = nodes(&net, &sources)?;
            let w = net.edge_set(&edges)?;
            cuts::Residual::full(&net).cut(&origin, Target::Edges(&w), None)?.expect("finite capacities")
        }
    };
    let j = rep.to_json(&net);
    if json {
        return Ok((0, json_line(&j)));
    }
    Ok((
        0,
        format!(
            "capacity     {}\ncut          {{{}}}\nsource side  {{{}}}\n",
            j.capacity,
            j.cut.join(","),
            j.source_side.join(",")
        ),
    ))
}

fn construct_cmd(a: ConstructArgs, ctx: &Context, json: bool) -> CmdResult {
    let net = load_network(a.network.as_ref(), ctx)?;
    let field = a.field.as_deref().map(Field::parse).transpose()?;
    let opts = ConstructOptions {
        rate: a.rate,
        field,
        seed: a.seed,
        family: if a.all_wiretap_sets { Family::All } else { Family::PrimaryExact },
        ..ConstructOptions::default()
    };
    let code = construct::construct(&net, a.r, &opts)?;
    let file = CodeFile::from_code(&code, &net);
    let text = file.to_json() + "\n";
    let lifted = if code.field().is_prime_field() {
        None
    } else {
        let l = construct::lift_extension(&code, &net)?;
        Some(json!({"base": l.base.to_string(), "ell": l.ell, "n": l.n}))
    };
    let summary = json!({
        "field": file.field,
        "rate": file.rate,
        "r": file.r,
        "ell": code.message_dim(),
        "n": 1,
        "B": file.b,
        "lifted": lifted,
        "out": a.out.as_ref().map(|p| p.display().to_string()),
    });
    match &a.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            if json {
                Ok((0, json_line(&summary)))
            } else {
                Ok((
                    0,
                    format!(
                        "wrote {} (GF({}), R = {}, r = {}, rate {}/1)\n",
                        path.display(),
                        file.field,
                        file.rate,
                        file.r,
                        code.message_dim()
                    ),
                ))
            }
        }
        None => Ok((0, text)),
    }
}

fn load_code(spec: &str, net: &Network, ctx: &Context) -> std::result::Result<SecureNetworkCode, CliError> {
    let path = Path::new(spec);
    let file = if path.exists() {
        CodeFile::from_json(&read(path)?)?
    } else if let Some((_, builtin)) = fixtures::code(spec) {
        builtin
    } else if spec == "-" && ctx.code.is_some() {
        ctx.code.clone().unwrap()
    } else {
        return Err(Error::Io(format!("{spec}: no such file or built-in code")).into());
    };
    Ok(file.to_code(net)?)
}

fn verify_cmd(a: VerifyArgs, ctx: &Context, env: &HashMap<String, String>, json: bool) -> CmdResult {
    let net = load_network(a.network.as_ref(), ctx)?;
    let code = load_code(&a.code, &net, ctx)?;
    let cap = verify::exhaustive_cap_from(env.get(verify::MAX_EXHAUSTIVE_ENV).map(String::as_str));
    let opts = VerifyOptions {
        exhaustive: a.exhaustive,
        fast: a.fast,
        cap,
    };
    let rep = verify::verify(&code, &net, a.r, &opts)?;
    let status = if rep.all_pass() { 0 } else { 1 };
    if json {
        return Ok((status, json_line(&rep.to_json(&net))));
    }
    let flag = |b: bool| if b { "yes" } else { "NO" };
    let mut out = String::new();
    let _ = writeln!(out, "computable        {}", flag(rep.computable));
    let _ = writeln!(out, "secure (rank)     {}", flag(rep.secure_rank));
    match rep.secure_exhaustive {
        Some(b) => {
            let _ = writeln!(out, "secure (brute)    {}", flag(b));
        }
        None => out.push_str("secure (brute)    skipped\n"),
    }
    if let Some(w) = &rep.failing_w {
        let _ = writeln!(out, "failing W         {{{}}}", net.edge_names(w).join(","));
    }
    let _ = writeln!(out, "rate              {}/{}", rep.ell, rep.n);
    let _ = writeln!(out, "within bound      {} (upper {})", flag(rep.bound_consistent), rep.upper);
    Ok((status, out))
}

fn example(a: ExampleArgs, env: &HashMap<String, String>) -> Output {
    let mut ctx = Context {
        force_json: true,
        ..Context::default()
    };
    if let Some(net) = fixtures::network(&a.name) {
        ctx.network = Some(net);
    } else if let Some((net, code)) = fixtures::code(&a.name) {
        ctx.network = Some(net);
        ctx.code = Some(code);
    } else {
        return Output {
            status: 2,
            stdout: String::new(),
            stderr: format!(
                "error: unknown example {:?}; networks: line, n1, butterfly, fig2; codes: fig1, example3, fig6\n",
                a.name
            ),
        };
    }
    let net = ctx.network.clone().unwrap();
    let mut rest = a.rest;
    if let Some(first) = rest.first_mut() {
        if let Some(stripped) = first.strip_prefix("--") {
            *first = stripped.to_string();
        }
    }
    let print = |text: String| Output { status: 0, stdout: text, stderr: String::new() };
    match rest.first().map(String::as_str) {
        None => {
            return print(match &ctx.code {
                Some(code) => code.to_json() + "\n",
                None => net.to_json() + "\n",
            })
        }
        Some("network") => return print(net.to_json() + "\n"),
        Some("dot") => return print(net.to_dot()),
        Some("code") => {
            return match &ctx.code {
                Some(code) => print(code.to_json() + "\n"),
                None => Output {
                    status: 2,
                    stdout: String::new(),
                    stderr: format!("error: {} is a network, not a code\n", a.name),
                },
            }
        }
        _ => {}
    }
    // a built-in code stands in for a missing --code
    if rest[0] == "verify" && ctx.code.is_some() && !rest.iter().any(|s| s == "--code") {
        rest.extend(["--code".to_string(), "-".to_string()]);
    }
    let mut argv = vec!["snfc".to_string()];
    argv.extend(rest);
    match Cli::try_parse_from(&argv) {
        Ok(cli) => {
            if matches!(cli.command, Command::Example(_)) {
                return Output {
                    status: 2,
                    stdout: String::new(),
                    stderr: "error: examples do not nest\n".into(),
                };
            }
            dispatch(cli.command, env, ctx)
        }
        Err(e) => Output {
            status: if e.use_stderr() { 2 } else { 0 },
            stdout: if e.use_stderr() { String::new() } else { e.render().to_string() },
            stderr: if e.use_stderr() { e.render().to_string() } else { String::new() },
        },
    }
}
