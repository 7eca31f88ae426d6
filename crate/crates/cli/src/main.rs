//! `hholo`: evaluate, differentiate and expand quaternionic functions, and
//! check them for holomorphy.
//!
//! Expressions use the grammar
//!
//! ```text
//! expr   := term (("+"|"-") term)* ;
//! term   := factor (("*"|"/") factor)* ;
//! factor := unary ("^" uint)? ;
//! unary  := "-" unary | atom ;
//! atom   := "p" | real | "(" expr ")" | ("exp"|"sin"|"cos") "(" expr ")" | ("i"|"j"|"k") ;
//! ```

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{Exit, GridSpec, Inputs, Report};

const GRAMMAR: &str = "\
Expression grammar:
  expr   := term ((\"+\"|\"-\") term)* ;
  term   := factor ((\"*\"|\"/\") factor)* ;
  factor := unary (\"^\" uint)? ;
  unary  := \"-\" unary | atom ;
  atom   := \"p\" | real | \"(\" expr \")\" | (\"exp\"|\"sin\"|\"cos\") \"(\" expr \")\" | (\"i\"|\"j\"|\"k\") ;

Exit codes: 0 pass, 1 check failed, 2 parse error, 3 evaluation error, 4 non-real coefficient.";

#[derive(Parser)]
#[command(name = "hholo", version, about = "Holomorphic functions of a quaternionic variable", after_help = GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate f and its Cayley-Dickson components
    Eval {
        #[command(flatten)]
        expr: ExprArg,
        #[command(flatten)]
        at: PointArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check the holomorphy equations on a point or grid
    Check {
        #[command(flatten)]
        expr: ExprArg,
        #[command(flatten)]
        at: PointArgs,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 1e-5)]
        step: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Extract Maclaurin coefficients and compare with known rules
    Series {
        #[command(flatten)]
        expr: ExprArg,
        #[command(flatten)]
        coeffs: CoeffArgs,
        #[command(flatten)]
        at: PointArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// k-th full derivative
    Derive {
        #[command(flatten)]
        expr: ExprArg,
        #[arg(long, default_value = "0 0 0 0", value_parser = parse_point)]
        point: [f64; 4],
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, default_value_t = 1e-5)]
        step: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Ratio-test radius of convergence of the Maclaurin series
    Radius {
        #[command(flatten)]
        expr: ExprArg,
        #[command(flatten)]
        coeffs: CoeffArgs,
        /// Also estimate the term ratio limit at this point
        #[arg(long, value_parser = parse_point)]
        point: Option<[f64; 4]>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Commutator |fg - gf| of two expressions
    Commute {
        /// Two expressions: --expr F --expr G
        #[arg(long = "expr", required = true, num_args = 1)]
        exprs: Vec<String>,
        #[command(flatten)]
        at: PointArgs,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct ExprArg {
    #[arg(long)]
    expr: String,
}

#[derive(Args)]
struct PointArgs {
    /// A point "x y z u"
    #[arg(long, value_parser = parse_point, conflicts_with = "grid")]
    point: Option<[f64; 4]>,
    /// Number of seeded random points in the ball of radius --radius
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long, default_value_t = 1.0, requires = "grid")]
    radius: f64,
    #[arg(long, default_value_t = 0, requires = "grid")]
    seed: u64,
}

impl PointArgs {
    fn apply(&self, inputs: &mut Inputs) {
        inputs.point = self.point;
        inputs.grid = self.grid.map(|n| GridSpec { n, radius: self.radius, seed: self.seed });
    }
}

#[derive(Args)]
struct CoeffArgs {
    /// Highest coefficient index
    #[arg(long, default_value_t = 32)]
    n: usize,
    #[arg(long, default_value_t = hholo::series::DEFAULT_RHO)]
    rho: f64,
    /// Samples on the circle [default: max(64, 8(n+1))]
    #[arg(long)]
    samples: Option<usize>,
}

impl CoeffArgs {
    fn apply(&self, inputs: &mut Inputs) {
        inputs.n = Some(self.n);
        inputs.rho = Some(self.rho);
        inputs.samples = Some(self.samples.unwrap_or_else(|| hholo::series::default_samples(self.n)));
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_point(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    if parts.len() != 4 {
        return Err(format!("expected four reals \"x y z u\", got {} values", parts.len()));
    }
    let mut out = [0.0; 4];
    for (slot, part) in out.iter_mut().zip(parts) {
        let v: f64 = part.parse().map_err(|_| format!("`{part}` is not a real number"))?;
        if !v.is_finite() {
            return Err(format!("`{part}` is not finite"));
        }
        *slot = v;
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut inputs = Inputs::default();
    let (name, run, out): (&'static str, fn(&Inputs) -> commands::Run, OutputArgs) = match cli.command {
        Command::Eval { expr, at, out } => {
            inputs.expr = vec![expr.expr];
            at.apply(&mut inputs);
            ("eval", commands::eval, out)
        }
        Command::Check { expr, at, tol, step, out } => {
            inputs.expr = vec![expr.expr];
            at.apply(&mut inputs);
            if inputs.point.is_none() && inputs.grid.is_none() {
                inputs.grid = Some(GridSpec { n: 16, radius: at.radius, seed: at.seed });
            }
            inputs.tol = Some(tol);
            inputs.step = Some(step);
            ("check", commands::check, out)
        }
        Command::Series { expr, coeffs, at, out } => {
            inputs.expr = vec![expr.expr];
            coeffs.apply(&mut inputs);
            at.apply(&mut inputs);
            ("series", commands::series, out)
        }
        Command::Derive { expr, point, k, step, out } => {
            inputs.expr = vec![expr.expr];
            inputs.point = Some(point);
            inputs.k = Some(k);
            inputs.step = Some(step);
            ("derive", commands::derive, out)
        }
        Command::Radius { expr, coeffs, point, out } => {
            inputs.expr = vec![expr.expr];
            coeffs.apply(&mut inputs);
            inputs.point = point;
            ("radius", commands::radius, out)
        }
        Command::Commute { exprs, at, tol, out } => {
            if exprs.len() != 2 {
                eprintln!("error: commute needs exactly two --expr arguments, got {}", exprs.len());
                return ExitCode::from(Exit::Parse as u8);
            }
            inputs.expr = exprs;
            at.apply(&mut inputs);
            if inputs.point.is_none() && inputs.grid.is_none() {
                inputs.grid = Some(GridSpec { n: 16, radius: at.radius, seed: at.seed });
            }
            inputs.tol = Some(tol);
            ("commute", commands::commute, out)
        }
    };

    let result = run(&inputs);
    let failed = matches!(result.exit, Exit::Parse | Exit::Eval | Exit::NonReal);
    let body = match out.format {
        Format::Machine => report::to_json(&Report { subcommand: name, inputs, results: result.machine, version: report::VERSION }),
        Format::Text if failed => {
            eprint!("{}", result.text);
            return ExitCode::from(result.exit as u8);
        }
        Format::Text => result.text,
    };
    if let Err(e) = report::emit(&body, out.out.as_deref()) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(Exit::Eval as u8);
    }
    ExitCode::from(result.exit as u8)
}
