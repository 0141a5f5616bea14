use krausforge::bench::{logspace, parse_methods, sweep_quadrature, sweep_time, to_csv, SweepRow};
use krausforge::kraus::io::{extraction_to_json, kraus_to_json};
use krausforge::kraus::{
    assemble, choi_reshuffle, closure_deficit, extract_canonical_kraus, midpoint_nodes,
    synthesize_with, trapezoid_interior_nodes,
};
use krausforge::model::{QuantumSystem, EPSILON_WARNING};
use krausforge::superop::{exact_map, first_order_map};
use krausforge::verify::{verify, VerifyOptions};

use crate::args::{ExtractArgs, QuadratureArg, SweepNArgs, SweepTimeArgs, SynthArgs, VerifyArgs};
use crate::output::{check_output, read_model, write_atomic, CliError, CliResult};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn positive_time(flag: &str, v: f64) -> CliResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(usage(format!("{flag} must be a positive time, got {v}")))
    }
}

fn describe(system: &QuantumSystem) -> String {
    let label = system.label.as_deref().unwrap_or("unnamed model");
    let n = system.channels.len();
    let s = if n == 1 { "" } else { "s" };
    format!("{label} (d = {}, {n} channel{s})", system.dimension)
}

fn warn_strong_noise(system: &QuantumSystem, tau: f64) {
    let eps = system.total_rate() * tau;
    if eps > EPSILON_WARNING {
        eprintln!("warning: total epsilon {eps} exceeds {EPSILON_WARNING}; the first-order expansion is unreliable");
    }
}

fn thread_pool(threads: Option<usize>) -> CliResult<rayon::ThreadPool> {
    if threads == Some(0) {
        return Err(usage("thread count must be positive"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Validation(format!("starting worker threads: {e}")))
}

pub fn synth(args: SynthArgs) -> CliResult<()> {
    let tau = positive_time("--tau", args.tau)?;
    if args.n == Some(0) {
        return Err(usage("--n must be at least 1"));
    }
    let mut system = read_model(args.model.model.as_deref())?;
    check_output(&args.out)?;
    if let Some(n) = args.n {
        system = system.with_quadrature(n);
    }
    warn_strong_noise(&system, tau);

    let schemes = system
        .channels
        .iter()
        .map(|c| match args.quadrature {
            QuadratureArg::Midpoint => midpoint_nodes(c.quadrature_count),
            QuadratureArg::TrapezoidInterior => trapezoid_interior_nodes(c.quadrature_count),
        })
        .collect::<krausforge::Result<Vec<_>>>()?;
    let ks = synthesize_with(&system, tau, &schemes)?;
    let assembled = assemble(&ks);
    let to_first = assembled.distance(&first_order_map(&system, tau)?)?;
    let to_exact = assembled.distance(&exact_map(&system, tau)?)?;

    write_atomic(&args.out, kraus_to_json(&ks).as_bytes())?;
    println!("model: {}", describe(&system));
    println!("tau_ns: {tau:?}");
    println!("epsilon: {:?}", ks.epsilons.iter().sum::<f64>());
    println!("operators: {}", ks.len());
    println!("closure_deficit: {:?}", closure_deficit(&ks));
    println!("distance_first_order: {to_first:?}");
    println!("distance_exact: {to_exact:?}");
    println!("wrote {}", args.out.display());
    Ok(())
}

fn write_rows(rows: &[SweepRow], out: &std::path::Path) -> CliResult<()> {
    write_atomic(out, to_csv(rows).as_bytes())?;
    eprintln!("wrote {} rows to {}", rows.len(), out.display());
    Ok(())
}

pub fn sweep_time_cmd(args: SweepTimeArgs, threads: Option<usize>) -> CliResult<()> {
    let methods = parse_methods(&args.methods).map_err(|e| usage(format!("--methods: {e}")))?;
    positive_time("--tau-min", args.tau_min)?;
    positive_time("--tau-max", args.tau_max)?;
    let grid =
        logspace(args.tau_min, args.tau_max, args.points).map_err(|e| usage(e.to_string()))?;
    let system = read_model(args.model.model.as_deref())?;
    check_output(&args.out)?;
    warn_strong_noise(&system, args.tau_max);

    let pool = thread_pool(threads)?;
    let rows = pool.install(|| sweep_time(&system, &grid, &methods))?;
    write_rows(&rows, &args.out)
}

pub fn sweep_n_cmd(args: SweepNArgs, threads: Option<usize>) -> CliResult<()> {
    for &t in &args.taus {
        positive_time("--taus", t)?;
    }
    if args.n_min == 0 || args.n_min > args.n_max {
        return Err(usage(format!(
            "need 1 <= --n-min <= --n-max, got {} and {}",
            args.n_min, args.n_max
        )));
    }
    let ns: Vec<usize> = (args.n_min..=args.n_max).collect();
    let system = read_model(args.model.model.as_deref())?;
    check_output(&args.out)?;

    let pool = thread_pool(threads)?;
    let rows = pool.install(|| sweep_quadrature(&system, &args.taus, &ns))?;
    write_rows(&rows, &args.out)
}

pub fn verify_cmd(args: VerifyArgs) -> CliResult<()> {
    let tau = positive_time("--tau", args.tau)?;
    if args.tol.is_nan() || args.tol < 0.0 {
        return Err(usage("--tol must be nonnegative"));
    }
    let system = read_model(args.model.model.as_deref())?;
    let opts = VerifyOptions {
        tau,
        seed: args.seed,
        tolerance: args.tol,
        ..VerifyOptions::default()
    };
    let report = verify(&system, &opts)?;
    println!("model: {}", describe(&system));
    println!("tau_ns: {tau:?}");
    print!("{report}");
    let failed = report.failures().count();
    if failed > 0 {
        return Err(CliError::Invariant(format!(
            "{failed} of {} checks failed",
            report.checks.len()
        )));
    }
    println!("all {} checks passed", report.checks.len());
    Ok(())
}

pub fn extract(args: ExtractArgs) -> CliResult<()> {
    let tau = positive_time("--tau", args.tau)?;
    if args.cutoff.is_nan() || args.cutoff < 0.0 {
        return Err(usage("--cutoff must be nonnegative"));
    }
    let system = read_model(args.model.model.as_deref())?;
    check_output(&args.out)?;

    let choi = choi_reshuffle(&exact_map(&system, tau)?);
    let terms = extract_canonical_kraus(&choi, args.cutoff)?;
    write_atomic(
        &args.out,
        extraction_to_json(&terms, system.dimension, args.cutoff).as_bytes(),
    )?;
    println!("model: {}", describe(&system));
    println!("tau_ns: {tau:?}");
    println!("terms: {}", terms.len());
    if let (Some(first), Some(last)) = (terms.first(), terms.last()) {
        println!("weights: {:?} .. {:?}", first.weight, last.weight);
    }
    println!("wrote {}", args.out.display());
    Ok(())
}
