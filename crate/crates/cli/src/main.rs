//! Command-line front end: per-discriminant reports, bulk tables,
//! verification sweeps, and raw utilities.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage/input error.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use fmcount::counting::{
    check_descriptor_lattice, enumerate_type_i, enumerate_type_ii, fm_count,
    fm_count_via_overlattices, glue_oracle_count, CountError, FMRecord, OverlatticeDescriptor,
    RecordOptions, ORACLE_BOUND,
};
use fmcount::modarith::{unit_square_root_count, unit_square_roots_bruteforce};
use fmcount::mukai::SpecialDiscriminant;

mod record;
use record::{OutputRecord, CSV_HEADER};

const DEFAULT_ENUM_LIMIT: u64 = ORACLE_BOUND;
const DEFAULT_GRAM_LIMIT: u64 = 50;

#[derive(Parser)]
#[command(
    name = "fmcount",
    version,
    about = "Counts Fourier-Mukai partners of very general special cubic fourfolds"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Report the partner count of a single discriminant
    Count {
        #[arg(long)]
        d: u64,
        #[arg(long, value_enum, default_value_t = CountFormat::Text)]
        format: CountFormat,
        /// Run the enumeration and oracle paths for d' up to this bound
        #[arg(long, default_value_t = DEFAULT_ENUM_LIMIT)]
        enum_limit: u64,
    },
    /// One record per admissible discriminant in a range
    Table {
        #[arg(long)]
        d_min: u64,
        #[arg(long)]
        d_max: u64,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Worker threads for the sweep (output order is unaffected)
        #[arg(long)]
        jobs: Option<usize>,
        /// Write to a file instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ENUM_LIMIT)]
        enum_limit: u64,
    },
    /// Re-derive every count along independent paths and compare
    Verify {
        #[arg(long)]
        d_max: u64,
        #[arg(long, value_enum, default_value_t = Depth::Oracle)]
        depth: Depth,
        #[arg(long)]
        jobs: Option<usize>,
        /// Assemble and certify overlattices for d' up to this bound
        #[arg(long, default_value_t = DEFAULT_GRAM_LIMIT)]
        gram_limit: u64,
    },
    /// Square roots of unity modulo n
    Roots {
        #[arg(long)]
        n: u64,
        /// Also list the residues (needs n within the scan bound)
        #[arg(long)]
        list: bool,
    },
    /// List the glue descriptors of d (requires 18 | d)
    Glue {
        #[arg(long)]
        d: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CountFormat {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum Depth {
    Formula,
    Enumeration,
    Oracle,
    Gram,
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Count {
            d,
            format,
            enum_limit,
        } => cmd_count(d, format, enum_limit),
        Cmd::Table {
            d_min,
            d_max,
            format,
            jobs,
            out,
            enum_limit,
        } => cmd_table(d_min, d_max, format, jobs, out, enum_limit),
        Cmd::Verify {
            d_max,
            depth,
            jobs,
            gram_limit,
        } => cmd_verify(d_max, depth, jobs, gram_limit),
        Cmd::Roots { n, list } => cmd_roots(n, list),
        Cmd::Glue { d } => cmd_glue(d),
    };
    std::process::exit(code);
}

fn input_error(e: impl std::fmt::Display) -> i32 {
    eprintln!("error: {e}");
    2
}

fn warn_enum_limit(enum_limit: u64) {
    if enum_limit > DEFAULT_ENUM_LIMIT {
        eprintln!(
            "warning: --enum-limit {enum_limit} is above the default {DEFAULT_ENUM_LIMIT}; \
             the oracle stays capped at d' <= {ORACLE_BOUND} and large sweeps may be slow"
        );
    }
}

fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match jobs {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        _ => f(),
    }
}

fn cmd_count(d: u64, format: CountFormat, enum_limit: u64) -> i32 {
    warn_enum_limit(enum_limit);
    let opts = RecordOptions {
        enumeration_limit: enum_limit,
    };
    let rec = match FMRecord::compute(d, &opts) {
        Ok(r) => r,
        Err(e) => return input_error(e),
    };
    let out = OutputRecord::from(&rec);
    match format {
        CountFormat::Text => {
            let mut line = format!("d={}", rec.d);
            if let Some(dp) = rec.d_prime {
                line.push_str(&format!(" d'={dp}"));
            }
            line.push_str(&format!(" u_2d={}", rec.u_2d));
            println!("{line}");
            if let Some(c) = rec.counts_by_type {
                println!(
                    "type_I={} type_II_k0={} type_II_k1={} type_II_k2={} M_ST={}",
                    c.type_i,
                    c.type_ii_k0,
                    c.type_ii_k1,
                    c.type_ii_k2,
                    c.total()
                );
            }
            let mut paths = format!("fm_formula={}", rec.count_formula);
            if let Some(e) = rec.count_enumeration {
                paths.push_str(&format!(" fm_enumeration={e}"));
            }
            if let Some(o) = rec.count_oracle {
                paths.push_str(&format!(" fm_oracle={o}"));
            }
            println!("{paths}");
            println!("FM={} agree={}", rec.count_formula, rec.agree);
        }
        CountFormat::Csv => {
            println!("{CSV_HEADER}");
            println!("{}", out.csv_row());
        }
        CountFormat::Json => println!("{}", out.json_line()),
    }
    0
}

fn cmd_table(
    d_min: u64,
    d_max: u64,
    format: TableFormat,
    jobs: Option<usize>,
    out: Option<PathBuf>,
    enum_limit: u64,
) -> i32 {
    if d_min < 8 || d_min > d_max {
        return input_error(format!(
            "bad range: require 8 <= d_min <= d_max, got {d_min}..{d_max}"
        ));
    }
    warn_enum_limit(enum_limit);
    let opts = RecordOptions {
        enumeration_limit: enum_limit,
    };
    let ds: Vec<u64> = (d_min..=d_max)
        .filter(|&d| SpecialDiscriminant::new(d).is_ok())
        .collect();
    let computed: Result<Vec<OutputRecord>, CountError> = with_jobs(jobs, || {
        ds.par_iter()
            .map(|&d| FMRecord::compute(d, &opts).map(|r| OutputRecord::from(&r)))
            .collect()
    });
    let records = match computed {
        Ok(r) => r,
        Err(e) => return input_error(e),
    };

    let mut lines = Vec::with_capacity(records.len() + 1);
    if matches!(format, TableFormat::Csv) {
        lines.push(CSV_HEADER.to_string());
    }
    for r in &records {
        lines.push(match format {
            TableFormat::Csv => r.csv_row(),
            TableFormat::Json => r.json_line(),
        });
    }
    let body = lines.join("\n") + "\n";
    match out {
        Some(path) => {
            let write = File::create(&path).and_then(|mut f| f.write_all(body.as_bytes()));
            if let Err(e) = write {
                return input_error(format!("cannot write {}: {e}", path.display()));
            }
        }
        None => {
            let _ = io::stdout().write_all(body.as_bytes());
        }
    }
    0
}

fn cmd_verify(d_max: u64, depth: Depth, jobs: Option<usize>, gram_limit: u64) -> i32 {
    if gram_limit > DEFAULT_GRAM_LIMIT {
        eprintln!(
            "warning: --gram-limit {gram_limit} is above the default {DEFAULT_GRAM_LIMIT}; \
             assembling rank-22 overlattices for large d' is slow"
        );
    }
    let ds: Vec<u64> = (18..=d_max).step_by(18).collect();
    let problems: Vec<Vec<String>> = with_jobs(jobs, || {
        ds.par_iter()
            .map(|&d| verify_one(d, depth, gram_limit))
            .collect()
    });
    let mut mismatches = 0usize;
    for p in problems.iter().flatten() {
        println!("MISMATCH {p}");
        mismatches += 1;
    }
    let depth_name = match depth {
        Depth::Formula => "formula",
        Depth::Enumeration => "enumeration",
        Depth::Oracle => "oracle",
        Depth::Gram => "gram",
    };
    let oracle_skipped = ds.iter().filter(|&&d| d / 18 > ORACLE_BOUND).count();
    let gram_skipped = ds.iter().filter(|&&d| d / 18 > gram_limit).count();
    let mut note = String::new();
    if depth >= Depth::Oracle && oracle_skipped > 0 {
        note.push_str(&format!(
            ", oracle skipped for {oracle_skipped} (bound {ORACLE_BOUND})"
        ));
    }
    if depth >= Depth::Gram && gram_skipped > 0 {
        note.push_str(&format!(
            ", gram skipped for {gram_skipped} (bound {gram_limit})"
        ));
    }
    println!(
        "verify depth={depth_name} d_max={d_max}: checked {} discriminants, {mismatches} mismatches{note}",
        ds.len()
    );
    if mismatches > 0 {
        1
    } else {
        0
    }
}

fn verify_one(d: u64, depth: Depth, gram_limit: u64) -> Vec<String> {
    let dp = d / 18;
    let mut problems = Vec::new();
    let formula = match fm_count(d) {
        Ok(v) => v,
        Err(e) => {
            problems.push(format!("d={d} d'={dp}: formula path failed: {e}"));
            return problems;
        }
    };
    if depth >= Depth::Enumeration {
        match fm_count_via_overlattices(d) {
            Ok(v) if v == formula => {}
            Ok(v) => problems.push(format!("d={d} d'={dp}: formula={formula} enumeration={v}")),
            Err(e) => problems.push(format!("d={d} d'={dp}: enumeration failed: {e}")),
        }
    }
    if depth >= Depth::Oracle && dp <= ORACLE_BOUND {
        match glue_oracle_count(dp) {
            Ok(m) if m == 2 * formula => {}
            Ok(m) => problems.push(format!(
                "d={d} d'={dp}: formula={formula} oracle_half={}",
                m / 2
            )),
            Err(e) => problems.push(format!("d={d} d'={dp}: oracle failed: {e}")),
        }
    }
    if depth >= Depth::Gram && dp <= gram_limit {
        let mut descriptors = enumerate_type_i(dp);
        for k in 0..3 {
            descriptors.extend(enumerate_type_ii(dp, k));
        }
        for desc in &descriptors {
            match check_descriptor_lattice(dp, desc) {
                Ok(check) if check.all_good(dp) => {}
                Ok(check) => problems.push(format!(
                    "d={d} d'={dp}: overlattice check failed for {desc:?}: {check:?}"
                )),
                Err(e) => problems.push(format!(
                    "d={d} d'={dp}: overlattice assembly failed for {desc:?}: {e}"
                )),
            }
        }
    }
    problems
}

fn cmd_roots(n: u64, list: bool) -> i32 {
    let count = match unit_square_root_count(n) {
        Ok(c) => c,
        Err(e) => return input_error(e),
    };
    if list {
        let roots = match unit_square_roots_bruteforce(n) {
            Ok(r) => r,
            Err(e) => return input_error(e),
        };
        debug_assert_eq!(roots.len() as u64, count);
        let rendered: Vec<String> = roots.iter().map(|r| r.to_string()).collect();
        println!("{count}: [{}]", rendered.join(", "));
    } else {
        println!("{count}");
    }
    0
}

fn cmd_glue(d: u64) -> i32 {
    if d == 0 || !d.is_multiple_of(18) {
        return input_error(CountError::NotDivisibleBy18(d));
    }
    let dp = d / 18;
    let mut descriptors = enumerate_type_i(dp);
    for k in 0..3 {
        descriptors.extend(enumerate_type_ii(dp, k));
    }
    println!("d={d} d'={dp}: {} glue descriptors", descriptors.len());
    for desc in &descriptors {
        match *desc {
            OverlatticeDescriptor::TypeI { b1, b2 } => println!(
                "I   b1={b1} b2={b2}  gens: ({b1}*l + t1)/3, ({b2}*l + t2)/{}",
                2 * dp
            ),
            OverlatticeDescriptor::TypeII { k, b3 } => println!(
                "II  k={k} b3={b3}  gen: ({b3}*l + {}*t1 + t2)/{}",
                2 * dp * k,
                6 * dp
            ),
        }
    }
    0
}
