//! Command-line front end. Every subcommand writes one JSON document to stdout.
//!
//! Exit status: 0 success, 1 malformed input, 2 violated precondition,
//! 3 failed identity or replay check.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::certify::{certify_cyclic, verify_certificate};
use crate::error::{Error, Result};
use crate::heisenberg::j_generator;
use crate::json::{self, CertificateWire, CmnWire, ExactFiberWire, FockWire, LambdaWire, NumericFiberWire, ReportWire, TypeWire};
use crate::relations::run_relations;
use crate::vertex::{cmn_table, omega};
use crate::whittaker::{fiber_dimension, solve_fiber, solve_fiber_numeric, verify_whittaker_vector, whittaker_type_of, FieldScalar, TopChoice};

#[derive(Parser, Debug)]
#[command(name = "fock-whittaker", version, about = "Whittaker modules of the free boson orbifold")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Whittaker type of λ.
    Type {
        #[arg(long)]
        lambda: PathBuf,
    },
    /// The two fiber points over ζ with sphere points ±e₁ and zero free parameters.
    Fiber {
        #[arg(long)]
        zeta: PathBuf,
        /// Rank ℓ.
        #[arg(long = "l")]
        rank: usize,
        /// Require exact arithmetic (fails if 2ζ_top has no root in Q(i)).
        #[arg(long, conflicts_with = "numeric")]
        exact: bool,
        /// Force floating-point arithmetic.
        #[arg(long)]
        numeric: bool,
    },
    /// Checks ω_i·1 against the type of λ for i up to the bound.
    Verify {
        #[arg(long)]
        lambda: PathBuf,
        #[arg(long)]
        bound: usize,
    },
    /// Builds a reduction certificate, or replays one with --check.
    Certify {
        #[arg(long)]
        lambda: PathBuf,
        #[arg(long)]
        vector: PathBuf,
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Seeded pass/fail run of the commutator, Virasoro and binomial identities.
    Relations {
        #[arg(long, default_value_t = 4)]
        bound: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The c_mn table.
    Cmn {
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Canonical vacuum-module vectors.
    Dump {
        #[arg(value_enum)]
        what: DumpTarget,
        #[arg(long = "l", default_value_t = 1)]
        rank: usize,
        /// Boson index for `j`.
        #[arg(long, default_value_t = 1)]
        boson: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DumpTarget {
    /// The conformal vector ω.
    Omega,
    /// The generator J_a.
    J,
}

/// Parses `args` (including the program name), runs, and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok((doc, status)) => {
            let _ = writeln!(out, "{doc}");
            status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn ok<T: Serialize>(v: &T) -> Result<(String, i32)> {
    Ok((json::to_pretty(v), 0))
}

#[derive(Serialize)]
struct FiberOutput<P> {
    sphere_dim: usize,
    affine_dim: usize,
    points: Vec<P>,
}

#[derive(Serialize)]
struct CheckOutput {
    valid: bool,
    steps: usize,
}

fn dispatch(cmd: Command) -> Result<(String, i32)> {
    match cmd {
        Command::Type { lambda } => {
            let l = json::read_file::<LambdaWire>(&lambda)?.to_lambda()?;
            ok(&TypeWire::from(&whittaker_type_of(&l)?))
        }
        Command::Fiber { zeta, rank, exact, numeric } => {
            if rank == 0 {
                return Err(Error::Schema("rank must be at least 1".into()));
            }
            let wire: TypeWire = json::read_file(&zeta)?;
            let t = wire.to_type()?;
            let (sphere_dim, affine_dim) = fiber_dimension(rank, t.r, t.sector);
            let top = t.zeta.last().expect("valid type");
            let representable = top.add(top).sqrt().is_some();
            if exact || (!numeric && representable) {
                let points = [1, -1]
                    .into_iter()
                    .map(|sign| {
                        let z = (0..rank).map(|k| crate::ExactScalar::from_int(if k == 0 { sign } else { 0 })).collect();
                        let p = solve_fiber(&t, rank, TopChoice::Sphere(z), None)?;
                        ExactFiberWire::new(&p, rank)
                    })
                    .collect::<Result<Vec<_>>>()?;
                ok(&FiberOutput { sphere_dim, affine_dim, points })
            } else {
                let tn = wire.to_numeric()?;
                let points = [1.0, -1.0]
                    .into_iter()
                    .map(|sign| {
                        let z = (0..rank).map(|k| Complex64::new(if k == 0 { sign } else { 0.0 }, 0.0)).collect();
                        let (p, res) = solve_fiber_numeric(&tn, rank, TopChoice::Sphere(z), None)?;
                        Ok(NumericFiberWire::new(&p, rank, res))
                    })
                    .collect::<Result<Vec<_>>>()?;
                ok(&FiberOutput { sphere_dim, affine_dim, points })
            }
        }
        Command::Verify { lambda, bound } => {
            let l = json::read_file::<LambdaWire>(&lambda)?.to_lambda()?;
            let report = verify_whittaker_vector(&l, bound)?;
            let status = match (report.zeta.is_some(), report.pass()) {
                (_, true) => 0,
                (false, _) => 2,
                (true, false) => 3,
            };
            Ok((json::to_pretty(&ReportWire::from(&report)), status))
        }
        Command::Certify { lambda, vector, check } => {
            let l = json::read_file::<LambdaWire>(&lambda)?.to_lambda()?;
            let a = json::read_file::<FockWire>(&vector)?.to_vector()?;
            match check {
                None => ok(&CertificateWire::from(&certify_cyclic(&l, &a)?)),
                Some(path) => {
                    let cert = json::read_file::<CertificateWire>(&path)?.to_certificate()?;
                    let valid = verify_certificate(&l, &a, &cert);
                    let doc = json::to_pretty(&CheckOutput { valid, steps: cert.steps.len() });
                    Ok((doc, if valid { 0 } else { 3 }))
                }
            }
        }
        Command::Relations { bound, seed } => {
            let report = run_relations(bound, seed)?;
            let status = if report.pass { 0 } else { 3 };
            Ok((json::to_pretty(&report), status))
        }
        Command::Cmn { order } => ok(&CmnWire::from(&cmn_table(order))),
        Command::Dump { what, rank, boson } => {
            if rank == 0 {
                return Err(Error::Schema("rank must be at least 1".into()));
            }
            let v = match what {
                DumpTarget::Omega => omega(rank),
                DumpTarget::J => j_generator(boson, rank)?,
            };
            ok(&FockWire::from(&v))
        }
    }
}
