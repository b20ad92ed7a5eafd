//! Command-line surface.
//!
//! Exit codes: 0 success, 1 usage error, 2 mathematical verification
//! failure (a failed verdict, a route mismatch, or a failing self-test).
//! All JSON output has stable key order and no timestamps, so identical
//! invocations produce identical bytes.

use clap::{Args, Parser, Subcommand};

use crate::bruhat::{
    covers_in_quotient, enumerate_interval, DEFAULT_ELEMENT_CAP,
};
use crate::engine::PhiTable;
use crate::error::{Error, Result};
use crate::parabolic::{
    parabolic_constants_cosets, parabolic_constants_pullback, required_borel_bound,
};
use crate::root_datum::{build_realization, parabolic_type, RootDatum};
use crate::scan::{positivity_scan, verdict_entries, ScanConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;

#[derive(Parser)]
#[command(
    name = "kmk",
    about = "Exact equivariant K-theory of Kac-Moody flag varieties",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct DatumArgs {
    /// Preset name (A1, A2, B2, G2, affine:A1, affine:A2,
    /// hyperbolic:a,b,c,d) or a JSON matrix.
    #[arg(long = "type")]
    gcm: String,
    /// Comma-separated node labels of the parabolic subset.
    #[arg(long, value_delimiter = ',')]
    parabolic: Vec<String>,
    /// Interval element cap.
    #[arg(long, default_value_t = DEFAULT_ELEMENT_CAP)]
    element_cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a GCM and print its realization and parabolic data.
    Roots {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Enumerate a Bruhat interval, or inspect one element.
    Weyl {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long, default_value_t = 3)]
        max_length: usize,
        /// Inspect a single element (word like s1*s0, or e).
        #[arg(long)]
        w: Option<String>,
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Structure constants of one product pair.
    Constants {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long, default_value_t = 3)]
        max_length: usize,
        #[arg(long, default_value = "text")]
        format: String,
        /// Force the pullback shadow on or off (default: on up to cap 6).
        #[arg(long)]
        shadow: Option<bool>,
        /// Skip the table cache.
        #[arg(long, default_value_t = false)]
        no_cache: bool,
        /// Run the self-test battery first.
        #[arg(long, default_value_t = false)]
        verified: bool,
    },
    /// Run a positivity scan from a TOML config.
    Scan {
        #[arg(long)]
        config: std::path::PathBuf,
        #[arg(long, default_value = "text")]
        format: String,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<std::path::PathBuf>,
        #[arg(long, default_value_t = false)]
        verified: bool,
    },
    /// Dualizing-sheaf descriptor of one quotient element.
    Dualizing {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        w: String,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long, default_value_t = false)]
        verified: bool,
    },
    /// Run the convention self-tests.
    Selftest,
}

/// Entry point; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version with success exits
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                // input, configuration, and resource problems
                Error::Usage(_)
                | Error::Parse(_)
                | Error::Io(_)
                | Error::Cache(_)
                | Error::NotGcm(_)
                | Error::NotSymmetrizable(_)
                | Error::LeviNotFiniteType(_)
                | Error::NotFiniteType
                | Error::IntervalTooLarge(_)
                | Error::NotAReflection(_)
                | Error::NotACover(_, _) => EXIT_USAGE,
                // broken mathematics
                Error::DictionaryPinFailure(_)
                | Error::NonClearingEntry(_)
                | Error::ResidueNotPolynomial(_)
                | Error::NonZeroRemainder(_)
                | Error::NotInPolynomialSubring(_) => EXIT_VERIFICATION,
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Roots { datum, format } => roots_command(&datum, &format),
        Command::Weyl {
            datum,
            max_length,
            w,
            format,
        } => weyl_command(&datum, max_length, w.as_deref(), &format),
        Command::Constants {
            datum,
            u,
            v,
            max_length,
            format,
            shadow,
            no_cache,
            verified,
        } => {
            if verified && !run_verified_gate() {
                return Ok(EXIT_VERIFICATION);
            }
            constants_command(&datum, &u, &v, max_length, &format, shadow, no_cache)
        }
        Command::Scan {
            config,
            format,
            output,
            verified,
        } => {
            if verified && !run_verified_gate() {
                return Ok(EXIT_VERIFICATION);
            }
            scan_command(&config, &format, output.as_deref())
        }
        Command::Dualizing {
            datum,
            w,
            format,
            verified,
        } => {
            if verified && !run_verified_gate() {
                return Ok(EXIT_VERIFICATION);
            }
            dualizing_command(&datum, &w, &format)
        }
        Command::Selftest => Ok(selftest_command()),
    }
}

fn run_verified_gate() -> bool {
    let report = crate::selftest::run_selftest();
    if !report.all_pass() {
        for c in &report.checks {
            if !c.passed {
                eprintln!("selftest failed: {}: {}", c.name, c.detail);
            }
        }
    }
    report.all_pass()
}

fn resolve_datum(args: &DatumArgs) -> Result<(RootDatum, Vec<usize>)> {
    let gcm = crate::gcm::parse_gcm_spec(&args.gcm)?;
    let rd = build_realization(gcm);
    let mut y = Vec::new();
    for label in &args.parabolic {
        let Some(idx) = rd.gcm().index_of_label(label) else {
            return Err(Error::Usage(format!("unknown node label {label:?}")));
        };
        y.push(idx);
    }
    y.sort_unstable();
    y.dedup();
    Ok((rd, y))
}

fn weight_json(v: &[i64]) -> serde_json::Value {
    serde_json::json!(v)
}

fn roots_command(args: &DatumArgs, format: &str) -> Result<i32> {
    let (rd, y) = resolve_datum(args)?;
    let parabolic = if args.parabolic.is_empty() {
        None
    } else {
        Some(parabolic_type(&rd, &y)?)
    };
    match format {
        "json" => {
            let mut value = serde_json::json!({
                "version": crate::engine::SCHEMA_VERSION,
                "type": args.gcm,
                "rank": rd.rank(),
                "dim_h": rd.dim_h(),
                "gcm": rd.gcm().entries(),
                "labels": rd.gcm().labels(),
                "symmetrizer": rd.gcm().symmetrizer(),
                "finite_type": rd.gcm().is_finite_type(),
                "simple_roots": (0..rd.rank()).map(|i| weight_json(rd.simple_root(i))).collect::<Vec<_>>(),
                "simple_coroots": (0..rd.rank()).map(|i| weight_json(rd.simple_coroot(i))).collect::<Vec<_>>(),
                "fundamental_weights": (0..rd.rank()).map(|i| weight_json(rd.fundamental_weight(i))).collect::<Vec<_>>(),
                "rho": weight_json(rd.rho()),
            });
            if let Some(p) = &parabolic {
                value["parabolic"] = serde_json::json!({
                    "nodes": args.parabolic,
                    "rho_y": weight_json(p.rho_y()),
                    "rho_hat_y": weight_json(p.rho_hat_y()),
                    "two_rho_sup_y": weight_json(p.two_rho_sup_y()),
                    "bundle_weight": weight_json(&p.bundle_weight(&rd)),
                });
            }
            println!("{value}");
        }
        _ => {
            println!("type: {}", args.gcm);
            println!("rank: {}  dim_h: {}", rd.rank(), rd.dim_h());
            println!("labels: {:?}", rd.gcm().labels());
            println!("symmetrizer: {:?}", rd.gcm().symmetrizer());
            println!("finite type: {}", rd.gcm().is_finite_type());
            for i in 0..rd.rank() {
                println!(
                    "alpha_{}: {:?}   coroot: {:?}   fundamental: {:?}",
                    rd.gcm().label(i),
                    rd.simple_root(i),
                    rd.simple_coroot(i),
                    rd.fundamental_weight(i),
                );
            }
            println!("rho: {:?}", rd.rho());
            if let Some(p) = &parabolic {
                println!("parabolic nodes: {:?}", args.parabolic);
                println!("rho_Y: {:?}", p.rho_y());
                println!("rho_hat_Y: {:?}", p.rho_hat_y());
                println!("2*rho^Y: {:?}", p.two_rho_sup_y());
                println!("bundle weight: {:?}", p.bundle_weight(&rd));
            }
        }
    }
    Ok(EXIT_OK)
}

fn weyl_command(args: &DatumArgs, max_length: usize, word: Option<&str>, format: &str) -> Result<i32> {
    let (rd, y) = resolve_datum(args)?;
    if !y.is_empty() {
        parabolic_type(&rd, &y)?;
    }
    let parabolic = if y.is_empty() { None } else { Some(y.as_slice()) };
    if let Some(text) = word {
        let w = rd.parse_word(text)?;
        let interval = enumerate_interval(&rd, w.length() + 1, parabolic, args.element_cap)?;
        if !interval.contains(&w) {
            return Err(Error::Usage(format!(
                "{} is not a minimal coset representative",
                w.display(&rd)
            )));
        }
        let inversions: Vec<String> = rd
            .inversion_set(&w)
            .iter()
            .map(|r| r.display(&rd))
            .collect();
        let covers: Vec<(String, String)> = covers_in_quotient(&interval, &w)?
            .into_iter()
            .map(|(v, beta)| (v.display(&rd), beta.display(&rd)))
            .collect();
        if format == "json" {
            let value = serde_json::json!({
                "version": crate::engine::SCHEMA_VERSION,
                "element": w.display(&rd),
                "length": w.length(),
                "inversions": inversions,
                "covers": covers.iter().map(|(v, b)| serde_json::json!({"cover": v, "root": b})).collect::<Vec<_>>(),
            });
            println!("{value}");
        } else {
            println!("element: {}  (length {})", w.display(&rd), w.length());
            println!("inversions: {}", inversions.join(", "));
            for (v, b) in covers {
                println!("cover: {v}  root: {b}");
            }
        }
        return Ok(EXIT_OK);
    }
    let interval = enumerate_interval(&rd, max_length, parabolic, args.element_cap)?;
    if format == "json" {
        let elements: Vec<serde_json::Value> = interval
            .elements()
            .iter()
            .map(|w| serde_json::json!({"word": w.display(&rd), "length": w.length()}))
            .collect();
        let value = serde_json::json!({
            "version": crate::engine::SCHEMA_VERSION,
            "type": args.gcm,
            "parabolic": args.parabolic,
            "max_length": max_length,
            "count": interval.len(),
            "elements": elements,
        });
        println!("{value}");
    } else {
        println!(
            "{} elements up to length {}{}",
            interval.len(),
            max_length,
            if args.parabolic.is_empty() {
                String::new()
            } else {
                format!(" in the quotient by {{{}}}", args.parabolic.join(","))
            }
        );
        for w in interval.elements() {
            println!("  l={}  {}", w.length(), w.display(&rd));
        }
    }
    Ok(EXIT_OK)
}

fn constants_command(
    args: &DatumArgs,
    u_text: &str,
    v_text: &str,
    max_length: usize,
    format: &str,
    shadow: Option<bool>,
    no_cache: bool,
) -> Result<i32> {
    let (rd, y) = resolve_datum(args)?;
    parabolic_type(&rd, &y)?;
    let u = rd.parse_word(u_text)?;
    let v = rd.parse_word(v_text)?;
    if u.length() > max_length || v.length() > max_length {
        return Err(Error::Usage(
            "u and v must have length at most max-length".into(),
        ));
    }
    let widened = required_borel_bound(&rd, &y, max_length, args.element_cap)?;
    let table = match (!no_cache).then(|| crate::cache::cache_get(&rd, widened, args.element_cap)).flatten() {
        Some(t) => t,
        None => {
            let t = PhiTable::build(&rd, widened, args.element_cap)?;
            if !no_cache {
                if let Err(e) = crate::cache::cache_put(&t) {
                    eprintln!("warning: cache write failed: {e}");
                }
            }
            t
        }
    };
    let primary = parabolic_constants_cosets(&table, &y, &u, &v, max_length)?;
    let shadow_on = shadow.unwrap_or(max_length <= 6);
    let mut route_mismatch = None;
    if shadow_on {
        let check = parabolic_constants_pullback(&table, &y, &u, &v, max_length)?;
        if !primary.agrees_with(&check) {
            route_mismatch = Some("coset-sum and pullback tables disagree".to_string());
        }
    }
    let entries = verdict_entries(&rd, &primary)?;
    let failures =
        entries.iter().filter(|e| !e.passed()).count() + route_mismatch.iter().count();

    match format {
        "json" => {
            let entry_values: Vec<serde_json::Value> = entries
                .iter()
                .map(|e| {
                    let verdict = match &e.verdict {
                        crate::xpoly::SignVerdict::Pass => serde_json::json!({"pass": true}),
                        crate::xpoly::SignVerdict::Fail { witness, coefficient } => serde_json::json!({
                            "pass": false,
                            "witness": witness,
                            "coefficient": coefficient.to_string(),
                        }),
                    };
                    serde_json::json!({
                        "u": e.u.display(&rd),
                        "v": e.v.display(&rd),
                        "w": e.w.display(&rd),
                        "d_rt": e.d_rt.display(&rd),
                        "d_rt_terms": e.d_rt.to_json(),
                        "d_x": e.d_x.display(&rd),
                        "d_x_terms": e.d_x.to_json(),
                        "parity": e.parity,
                        "verdict": verdict,
                    })
                })
                .collect();
            let value = serde_json::json!({
                "version": crate::engine::SCHEMA_VERSION,
                "inputs": {
                    "type": args.gcm,
                    "parabolic": args.parabolic,
                    "u": u.display(&rd),
                    "v": v.display(&rd),
                    "max_length": max_length,
                    "route": primary.route.as_str(),
                    "shadow": shadow_on,
                },
                "entries": entry_values,
                "summary": {
                    "entries": entries.len(),
                    "failures": failures,
                    "route_mismatch": route_mismatch,
                },
            });
            println!("{value}");
        }
        _ => {
            println!(
                "[xi^{}] * [xi^{}]  ({}, route {}, cap {})",
                u.display(&rd),
                v.display(&rd),
                args.gcm,
                primary.route.as_str(),
                max_length
            );
            for e in &entries {
                println!(
                    "  d^{{{}}} = {}   x: {}   [{}]",
                    e.w.display(&rd),
                    e.d_rt.display(&rd),
                    e.d_x.display(&rd),
                    if e.passed() { "pass" } else { "FAIL" }
                );
            }
            if let Some(m) = &route_mismatch {
                println!("ROUTE MISMATCH: {m}");
            }
        }
    }
    Ok(if failures == 0 { EXIT_OK } else { EXIT_VERIFICATION })
}

fn scan_command(
    config_path: &std::path::Path,
    format: &str,
    output: Option<&std::path::Path>,
) -> Result<i32> {
    let text = std::fs::read_to_string(config_path)?;
    let cfg: ScanConfig = crate::scan::parse_config(&text)?;
    let report = positivity_scan(&cfg)?;
    let body = match format {
        "json" => report.to_json().to_string(),
        "csv" => report.to_csv(),
        _ => report.to_text(),
    };
    match output {
        Some(path) => std::fs::write(path, body.as_bytes())?,
        None => {
            print!("{body}");
            if !body.ends_with('\n') {
                println!();
            }
        }
    }
    for job in &report.jobs {
        eprintln!("job {} finished in {:?}", job.job.gcm_spec, job.elapsed);
    }
    Ok(if report.all_pass() { EXIT_OK } else { EXIT_VERIFICATION })
}

fn dualizing_command(args: &DatumArgs, w_text: &str, format: &str) -> Result<i32> {
    let (rd, y) = resolve_datum(args)?;
    let w = rd.parse_word(w_text)?;
    let desc = crate::dualizing::dualizing_descriptor(&rd, &y, &w, args.element_cap)?;
    let check = crate::dualizing::boundary_weight_check(&rd, &y, &w)?;
    if format == "json" {
        let divisor: Vec<serde_json::Value> = desc
            .divisor
            .iter()
            .map(|t| {
                serde_json::json!({
                    "cover": t.cover.display(&rd),
                    "root": t.root.display(&rd),
                    "root_coords": t.root.coords,
                    "m": t.coefficient,
                })
            })
            .collect();
        let value = serde_json::json!({
            "version": crate::engine::SCHEMA_VERSION,
            "inputs": {
                "type": args.gcm,
                "parabolic": args.parabolic,
                "w": desc.w.display(&rd),
            },
            "character": weight_json(&desc.character),
            "divisor": divisor,
            "bundle_weight": weight_json(&desc.bundle_weight),
            "rho": weight_json(&desc.rho),
            "boundary_check": check.holds(),
        });
        println!("{value}");
    } else {
        println!(
            "dualizing data for {} (type {}, parabolic {{{}}})",
            desc.w.display(&rd),
            args.gcm,
            args.parabolic.join(",")
        );
        println!("character rho - w rho_Y: {:?}", desc.character);
        for t in &desc.divisor {
            println!(
                "  divisor: cover {}  root {}  m = {}",
                t.cover.display(&rd),
                t.root.display(&rd),
                t.coefficient
            );
        }
        println!("bundle weight 2 rho^Y - rho - rho_Y: {:?}", desc.bundle_weight);
        println!("boundary weight identities: {}", if check.holds() { "ok" } else { "FAILED" });
    }
    if !check.holds() {
        return Ok(EXIT_VERIFICATION);
    }
    Ok(EXIT_OK)
}

fn selftest_command() -> i32 {
    let report = crate::selftest::run_selftest();
    for c in &report.checks {
        println!("{} {}", if c.passed { "pass" } else { "FAIL" }, c.name);
        if !c.passed {
            println!("      {}", c.detail);
        }
    }
    if report.all_pass() {
        println!("selftest: all {} checks passed", report.checks.len());
        EXIT_OK
    } else {
        println!("selftest: FAILURES present");
        EXIT_VERIFICATION
    }
}
