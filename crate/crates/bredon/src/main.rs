use std::process::ExitCode;

use bredon::chart::{
    ell_squared_cells, render_ell_squared_json, render_ell_squared_text, render_slice_json, render_slice_text,
    slice_cells, square_root_prime, Axis,
};
use bredon::report::{group_report_json, group_report_text};
use bredon::verify::{oracle_sweep, ring_checks};
use bredon::{configure_threads, parse_list, parse_range};
use bredon_core::arith;
use bredon_core::cohomology::{self, parse_degree, GroupResult};
use bredon_core::ring::{multiply_explained, parse_element, SymbolicElement};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

/// Equivariant cohomology of a point for odd cyclic groups.
#[derive(Parser)]
#[command(name = "bredon", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// The group H^β at one level, with its Mackey functor and method.
    Group(GroupArgs),
    /// Like `group`, but always computed by the chain-level oracle.
    Oracle(GroupArgs),
    /// The least multiple of u_num/u_den that is an integral class.
    Integral {
        /// Order of the cyclic group (omit with --raw).
        #[arg(long)]
        n: Option<u64>,
        /// Numerator indices, comma separated.
        #[arg(long)]
        num: String,
        /// Denominator indices, comma separated.
        #[arg(long)]
        den: String,
        /// Treat the lists as plain integers, without checking them against n.
        #[arg(long)]
        raw: bool,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// The product of two elements of the ring.
    Mult {
        /// Order of the cyclic group.
        #[arg(long)]
        n: u64,
        /// First factor, e.g. `u[9:3]` or `omega(u:3,9; a:45)`.
        #[arg(allow_hyphen_values = true)]
        x: String,
        /// Second factor.
        #[arg(allow_hyphen_values = true)]
        y: String,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// A chart of top-level groups over a grid of degrees.
    Chart {
        /// Order of the cyclic group.
        #[arg(long)]
        n: u64,
        /// Output format.
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Range of the λ_ℓ coefficient (n = ℓ² layout).
        #[arg(long, default_value = "-2..2", allow_hyphen_values = true)]
        r: String,
        /// Range of the integer part (n = ℓ² layout).
        #[arg(long, default_value = "-6..6", allow_hyphen_values = true)]
        m: String,
        /// Horizontal axis of a slice: `m` or `lD`. Selects the slice layout.
        #[arg(long)]
        x: Option<String>,
        /// Vertical axis of a slice.
        #[arg(long)]
        y: Option<String>,
        /// Base degree of a slice.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        deg: String,
        /// Range of the horizontal multiple.
        #[arg(long, default_value = "-4..4", allow_hyphen_values = true)]
        x_range: String,
        /// Range of the vertical multiple.
        #[arg(long, default_value = "-4..4", allow_hyphen_values = true)]
        y_range: String,
    },
    /// Compares closed forms with the oracle on a sweep and checks the ring.
    Verify {
        /// Order of the cyclic group.
        #[arg(long)]
        n: u64,
        /// Largest total |coefficient| of the λ terms.
        #[arg(long, default_value_t = 2)]
        max_weight: i64,
        /// Largest |m|.
        #[arg(long, default_value_t = 6)]
        max_m: i64,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
}

#[derive(clap::Args)]
struct GroupArgs {
    /// Order of the cyclic group.
    #[arg(long)]
    n: u64,
    /// The degree, e.g. `3 - 2*l9 + l45`.
    #[arg(long, allow_hyphen_values = true)]
    deg: String,
    /// The level Θ_e (a divisor of n).
    #[arg(long, default_value_t = 1)]
    level: u64,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

/// Errors from bad input exit with status 2, failed checks with status 1.
enum Failure {
    Input(String),
    Check(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

fn require_odd(n: u64) -> Result<(), Failure> {
    if n == 0 || n % 2 == 0 {
        return Err(Failure::Input(format!("n must be odd, got {n}")));
    }
    Ok(())
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn cmd_group(args: &GroupArgs, force_oracle: bool) -> Result<(), Failure> {
    require_odd(args.n)?;
    let beta = parse_degree(args.n, &args.deg)?;
    if args.n % args.level != 0 {
        return Err(Failure::Input(format!("level {} does not divide {}", args.level, args.n)));
    }
    let res: GroupResult =
        if force_oracle { cohomology::oracle(args.n, &beta)? } else { cohomology::group(args.n, &beta)? };
    if args.json {
        print_json(&group_report_json(&res, args.level));
    } else {
        print!("{}", group_report_text(&res, args.level));
    }
    Ok(())
}

fn cmd_integral(n: Option<u64>, num: &str, den: &str, raw: bool, as_json: bool) -> Result<(), Failure> {
    let (num, den) = (parse_list(num)?, parse_list(den)?);
    let k = match (raw, n) {
        (true, _) => arith::integral_multiple(&num, &den)?,
        (false, Some(n)) => {
            require_odd(n)?;
            cohomology::integral_multiple(n, &num, &den)?
        }
        (false, None) => return Err(Failure::Input("--n is required unless --raw is given".into())),
    };
    if as_json {
        print_json(&json!({ "num": num, "den": den, "multiple": k, "integral": k == 1 }));
    } else {
        let fmt = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        let verdict = if k == 1 { "integral" } else { "not integral" };
        println!("{k}\nu[{}]/u[{}] is {verdict}", fmt(&num), fmt(&den));
    }
    Ok(())
}

fn cmd_mult(n: u64, x: &str, y: &str, as_json: bool) -> Result<(), Failure> {
    require_odd(n)?;
    let (x, y) = (parse_element(n, x)?, parse_element(n, y)?);
    let (z, rules) = multiply_explained(n, &x, &y)?;
    let value = match &z {
        SymbolicElement::Zero => "ZERO".to_string(),
        SymbolicElement::Unknown(reason) => format!("UNKNOWN: {reason}"),
        other => other.to_string(),
    };
    if as_json {
        print_json(&json!({
            "n": n,
            "x": x.to_string(),
            "y": y.to_string(),
            "product": z.to_string(),
            "status": match z {
                SymbolicElement::Zero => "zero",
                SymbolicElement::Unknown(_) => "unknown",
                _ => "value",
            },
            "rules": rules,
        }));
    } else {
        println!("{value}");
        if !rules.is_empty() {
            println!("rules: {}", rules.join("; "));
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_chart(
    n: u64,
    format: Format,
    r: &str,
    m: &str,
    x: Option<&str>,
    y: Option<&str>,
    deg: &str,
    x_range: &str,
    y_range: &str,
) -> Result<(), Failure> {
    require_odd(n)?;
    match (x, y) {
        (None, None) => {
            if square_root_prime(n).is_none() {
                return Err(Failure::Input(format!(
                    "n = {n} is not the square of a prime; choose a slice with --x and --y"
                )));
            }
            let m_range = parse_range(m)?;
            let cells = ell_squared_cells(n, parse_range(r)?, m_range.clone())?;
            match format {
                Format::Text => print!("{}", render_ell_squared_text(n, &cells, m_range)),
                Format::Json => print_json(&render_ell_squared_json(n, &cells)),
            }
        }
        (Some(x), Some(y)) => {
            let base = parse_degree(n, deg)?;
            let axes = (Axis::parse(n, x)?, Axis::parse(n, y)?);
            let cells = slice_cells(n, &base, axes, parse_range(x_range)?, parse_range(y_range)?)?;
            match format {
                Format::Text => print!("{}", render_slice_text(n, &base, axes, &cells)),
                Format::Json => print_json(&render_slice_json(n, &base, axes, &cells)),
            }
        }
        _ => return Err(Failure::Input("a slice needs both --x and --y".into())),
    }
    Ok(())
}

fn cmd_verify(n: u64, max_weight: i64, max_m: i64, as_json: bool) -> Result<(), Failure> {
    require_odd(n)?;
    if max_weight < 0 || max_m < 0 {
        return Err(Failure::Input("--max-weight and --max-m must be non-negative".into()));
    }
    let sweep = oracle_sweep(n, max_weight, max_m).map_err(Failure::Input)?;
    let ring = ring_checks(n);
    let passed = sweep.passed() && ring.is_empty();
    if as_json {
        let mut v = sweep.to_json();
        v["ring_failures"] = json!(ring);
        v["passed"] = json!(passed);
        print_json(&v);
    } else {
        println!(
            "n = {n}, weight <= {max_weight}, |m| <= {max_m}: {} degrees (closed-form {}, phi-image {}, oracle {})",
            sweep.cells, sweep.closed_form, sweep.phi_image, sweep.oracle
        );
        for m in &sweep.mismatches {
            println!(
                "MISMATCH {} at level {}: engine {} ({}), oracle {}; reductions: [{}]",
                m.degree,
                m.level,
                m.engine,
                m.method,
                m.oracle,
                m.reductions.join("; ")
            );
        }
        for d in &sweep.rank_law_failures {
            println!("RANK LAW FAILS at {d}");
        }
        for d in &sweep.assembly_failures {
            println!("ASSEMBLY DISAGREES at {d}");
        }
        for f in &ring {
            println!("RING {f}");
        }
        println!("{}", if passed { "PASS" } else { "FAIL" });
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Check(format!("verification failed for n = {n}")))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Group(args) => cmd_group(&args, false),
        Command::Oracle(args) => cmd_group(&args, true),
        Command::Integral { n, num, den, raw, json } => cmd_integral(n, &num, &den, raw, json),
        Command::Mult { n, x, y, json } => cmd_mult(n, &x, &y, json),
        Command::Chart { n, format, r, m, x, y, deg, x_range, y_range } => {
            cmd_chart(n, format, &r, &m, x.as_deref(), y.as_deref(), &deg, &x_range, &y_range)
        }
        Command::Verify { n, max_weight, max_m, json } => cmd_verify(n, max_weight, max_m, json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Check(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
