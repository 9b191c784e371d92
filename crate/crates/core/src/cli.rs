//! The `sparsediv` command line.
//!
//! Exit status: 0 divisible or success, 1 not divisible or verification
//! failed, 2 not applicable, 3 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bench::{self, BenchConfig};
use crate::divtest::{self, DivTestOptions, Verdict};
use crate::error::Error;
use crate::ff::{Fp, FpBig, Integers, PrimeField};
use crate::gen;
use crate::interp_div::{exact_division, verify_product, verify_product_z, DivOptions, ParamProfile};
use crate::io::{emit, parse, prime_ring, AnyPoly, IntoAny, PrimeRing, RingSpec};
use crate::sparse_poly::SparsePoly;
use crate::zdiv::exact_division_z;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_NOT_APPLICABLE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "sparsediv", version, about = "Exact division and divisibility testing of sparse polynomials")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Pair {
    /// Dividend file.
    #[arg(long)]
    dividend: PathBuf,
    /// Divisor file.
    #[arg(long)]
    divisor: PathBuf,
}

#[derive(Args, Debug, Clone)]
struct Run {
    /// Seed for all random choices. Without it the run is not reproducible.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 runs sequentially and deterministically.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact quotient of a divisible pair.
    Div {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        #[arg(long, default_value = "practical")]
        profile: ParamProfile,
        /// Write the quotient here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        run: Run,
    },
    /// Randomized check that dividend = divisor * quotient.
    Verify {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        quotient: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        #[command(flatten)]
        run: Run,
    },
    /// Deterministic divisibility test; prints true, false or not-applicable.
    Divides {
        #[command(flatten)]
        pair: Pair,
        /// Admission budget for the structured tests.
        #[arg(long)]
        budget: Option<usize>,
        /// Fall back to unbounded long division when no test applies.
        #[arg(long)]
        force_oracle: bool,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Classical long division; the quotient goes to stdout or --output.
    OracleDiv {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        remainder: Option<PathBuf>,
    },
    /// Writes a random exact instance F = G*Q as F.sp, G.sp and Q.sp.
    Gen {
        /// `Fq:<prime>` or `ZZ`.
        #[arg(long)]
        ring: String,
        /// Terms of the quotient.
        #[arg(long)]
        terms: usize,
        /// Degree of the dividend.
        #[arg(long)]
        degree: u64,
        /// Terms of the divisor (default: --terms).
        #[arg(long)]
        divisor_terms: Option<usize>,
        /// Degree of the divisor (default: half of --degree).
        #[arg(long)]
        divisor_degree: Option<u64>,
        /// Coefficient size over ZZ.
        #[arg(long, default_value_t = 64)]
        height_bits: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Times exact division over a grid and prints CSV.
    Bench {
        /// Comma-separated quotient sparsities.
        #[arg(long, value_delimiter = ',', default_values_t = [16usize, 32, 64])]
        terms: Vec<usize>,
        /// Comma-separated log2 of the dividend degree.
        #[arg(long, value_delimiter = ',', default_values_t = [20u32, 30])]
        log_degree: Vec<u32>,
        #[arg(long, default_value_t = 31)]
        q_bits: u32,
        #[arg(long, default_value_t = 4)]
        divisor_terms: usize,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        #[arg(long, default_value = "practical")]
        profile: ParamProfile,
        #[command(flatten)]
        run: Run,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn rng_for(seed: Option<u64>) -> ChaCha8Rng {
    match seed {
        Some(s) => ChaCha8Rng::seed_from_u64(s),
        None => ChaCha8Rng::from_entropy(),
    }
}

fn load(path: &Path) -> anyhow::Result<AnyPoly> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_poly(p: &AnyPoly, path: Option<&Path>, out: &mut dyn Write) -> anyhow::Result<()> {
    let text = emit(p);
    match path {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs `f` on a dedicated pool when `threads > 0`.
fn with_threads<T: Send>(threads: usize, f: impl FnOnce(bool) -> T + Send) -> anyhow::Result<T> {
    if threads == 0 {
        return Ok(f(false));
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    Ok(pool.install(|| f(true)))
}

/// Expands `$field` once per prime-field representation.
macro_rules! dispatch {
    (($($poly:expr),+), |$($name:ident),+| field => $field:expr, int => $int:expr) => {
        match ($($poly),+) {
            ($(AnyPoly::Fp($name)),+) => $field,
            ($(AnyPoly::FpBig($name)),+) => $field,
            ($(AnyPoly::Z($name)),+) => $int,
            #[allow(unreachable_patterns)]
            _ => Err(Error::RingMismatch),
        }
    };
}

fn same_ring(polys: &[&AnyPoly]) -> anyhow::Result<()> {
    let first = polys[0].ring_spec();
    if polys.iter().any(|p| p.ring_spec() != first) {
        return Err(Error::RingMismatch.into());
    }
    Ok(())
}

fn outcome_code(e: &Error) -> Option<i32> {
    matches!(e, Error::NotDivisible | Error::GaveUp(_) | Error::NonExactIntegerStep).then_some(EXIT_NO)
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<i32> {
    match cmd {
        Command::Div { pair, epsilon, profile, output, run } => {
            let (f, g) = (load(&pair.dividend)?, load(&pair.divisor)?);
            same_ring(&[&f, &g])?;
            let mut rng = rng_for(run.seed);
            let res = with_threads(run.threads, |parallel| {
                let opts = DivOptions { profile, parallel, ..DivOptions::default() };
                dispatch!((f, g), |f, g| field => exact_division(&f, &g, epsilon, &mut rng, &opts).map(IntoAny::into_any),
                    int => exact_division_z(&f, &g, epsilon, &mut rng, &opts).map(AnyPoly::Z))
            })?;
            match res {
                Ok(q) => {
                    write_poly(&q, output.as_deref(), out)?;
                    Ok(EXIT_OK)
                }
                Err(e) => match outcome_code(&e) {
                    Some(code) => {
                        writeln!(err, "{e}")?;
                        Ok(code)
                    }
                    None => Err(e.into()),
                },
            }
        }
        Command::Verify { pair, quotient, epsilon, run } => {
            let (f, g, q) = (load(&pair.dividend)?, load(&pair.divisor)?, load(&quotient)?);
            same_ring(&[&f, &g, &q])?;
            let mut rng = rng_for(run.seed);
            let ok = dispatch!((f, g, q), |f, g, q| field => Ok(verify_product(&f, &g, &q, epsilon, &mut rng)),
                int => Ok(verify_product_z(&f, &g, &q, epsilon, &mut rng)))?;
            writeln!(out, "{ok}")?;
            Ok(if ok { EXIT_OK } else { EXIT_NO })
        }
        Command::Divides { pair, budget, force_oracle, threads } => {
            let (f, g) = (load(&pair.dividend)?, load(&pair.divisor)?);
            same_ring(&[&f, &g])?;
            let opts = DivTestOptions { budget, ..DivTestOptions::default() };
            let verdict = with_threads(threads, |_| {
                dispatch!((f, g), |f, g| field => field_divides(&f, &g, &opts, force_oracle),
                    int => integer_divides(&f, &g, &opts, force_oracle))
            })??;
            writeln!(out, "{verdict}")?;
            Ok(match verdict {
                Verdict::Yes => EXIT_OK,
                Verdict::No => EXIT_NO,
                Verdict::NotApplicable => EXIT_NOT_APPLICABLE,
            })
        }
        Command::OracleDiv { pair, output, remainder } => {
            let (f, g) = (load(&pair.dividend)?, load(&pair.divisor)?);
            same_ring(&[&f, &g])?;
            let res = dispatch!((f, g), |f, g| field => f.classic_divrem(&g, None).map(|(q, r)| (q.into_any(), r.into_any())),
                int => f.classic_divrem(&g, None).map(|(q, r)| (AnyPoly::Z(q), AnyPoly::Z(r))));
            match res {
                Ok((q, r)) => {
                    write_poly(&q, output.as_deref(), out)?;
                    if let Some(path) = remainder {
                        write_poly(&r, Some(&path), out)?;
                    }
                    Ok(if r.num_terms() == 0 { EXIT_OK } else { EXIT_NO })
                }
                Err(Error::NonExactIntegerStep) => {
                    writeln!(err, "{}", Error::NonExactIntegerStep)?;
                    Ok(EXIT_NO)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Gen { ring, terms, degree, divisor_terms, divisor_degree, height_bits, out_dir, seed } => {
            let spec = RingSpec::parse(&ring)?;
            let g_degree = divisor_degree.unwrap_or(degree / 2);
            let q_degree = degree.checked_sub(g_degree).context("divisor degree exceeds dividend degree")?;
            let g_terms = divisor_terms.unwrap_or(terms).min(g_degree as usize + 1);
            let mut rng = rng_for(seed);
            let (f, g, q) = match spec {
                RingSpec::Z => {
                    let i = gen::integer_instance(terms, q_degree, g_terms, g_degree, height_bits, &mut rng)?;
                    (AnyPoly::Z(i.f), AnyPoly::Z(i.g), AnyPoly::Z(i.q))
                }
                RingSpec::Fq(q) => match prime_ring(&q)? {
                    PrimeRing::Fp(field) => field_triple::<Fp>(&field, terms, q_degree, g_terms, g_degree, &mut rng)?,
                    PrimeRing::FpBig(field) => field_triple::<FpBig>(&field, terms, q_degree, g_terms, g_degree, &mut rng)?,
                },
            };
            std::fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
            for (name, p) in [("F.sp", &f), ("G.sp", &g), ("Q.sp", &q)] {
                let path = out_dir.join(name);
                write_poly(p, Some(&path), out)?;
                writeln!(out, "{}", path.display())?;
            }
            Ok(EXIT_OK)
        }
        Command::Bench { terms, log_degree, q_bits, divisor_terms, reps, epsilon, profile, run } => {
            if log_degree.iter().any(|&l| !(1..=62).contains(&l)) {
                return Err(Error::InvalidArgument("log degree must lie in 1..=62".into()).into());
            }
            let mut rng = rng_for(run.seed);
            let rows = with_threads(run.threads, |parallel| {
                let opts = DivOptions { profile, parallel, ..DivOptions::default() };
                let cfg = BenchConfig { terms, log_degrees: log_degree, q_bits, g_terms: divisor_terms, reps, epsilon, opts };
                bench::run(&cfg, &mut rng)
            })??;
            out.write_all(bench::to_csv(&rows).as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

fn field_triple<P: PrimeField>(
    field: &P,
    terms: usize,
    q_degree: u64,
    g_terms: usize,
    g_degree: u64,
    rng: &mut ChaCha8Rng,
) -> anyhow::Result<(AnyPoly, AnyPoly, AnyPoly)>
where
    SparsePoly<P>: IntoAny,
{
    let i = gen::field_instance(field, terms, q_degree, g_terms, g_degree, rng)?;
    Ok((i.f.into_any(), i.g.into_any(), i.q.into_any()))
}

fn field_divides<P: PrimeField>(
    f: &SparsePoly<P>,
    g: &SparsePoly<P>,
    opts: &DivTestOptions,
    force_oracle: bool,
) -> Result<Verdict, Error> {
    match divtest::divides(f, g, opts)? {
        Verdict::NotApplicable if force_oracle => Ok(Verdict::from_bool(f.classic_divrem(g, None)?.1.is_zero())),
        v => Ok(v),
    }
}

/// Over `Z` only bounded long division is attempted; a step that is not
/// exact proves non-divisibility.
fn integer_divides(
    f: &SparsePoly<Integers>,
    g: &SparsePoly<Integers>,
    opts: &DivTestOptions,
    force_oracle: bool,
) -> Result<Verdict, Error> {
    let dg = g.degree().ok_or(Error::DivisionByZero)?;
    let Some(df) = f.degree() else {
        return Ok(Verdict::Yes);
    };
    if df < dg {
        return Ok(Verdict::No);
    }
    let budget = opts.budget.unwrap_or_else(|| divtest::default_budget(f, g)) as u64;
    if df - dg + 1 > budget && !force_oracle {
        return Ok(Verdict::NotApplicable);
    }
    match f.classic_divrem(g, None) {
        Ok((_, r)) => Ok(Verdict::from_bool(r.is_zero())),
        Err(Error::NonExactIntegerStep) => Ok(Verdict::No),
        Err(e) => Err(e),
    }
}
