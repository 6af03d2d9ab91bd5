//! Batch driver: read a JSON representation spec, run the requested
//! verdicts, certificates, or flows, and emit a JSON report.
//!
//! Exit codes: 0 when every requested check is consistent, 1 when a
//! consistency invariant fails (certificates disagreeing with each other or
//! with a verdict table), 2 on parse or resource failures. Environment
//! variables are never consulted; identical flags and seed give a
//! byte-identical report.

mod report;
mod spec;
mod witness;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use largeness::error::Error as CoreError;
use largeness::kempfness::{
    kempf_ness_flow, rank_sample, FlowConfig, FlowStatus, TraceRow,
};
use largeness::koszul::{
    component_analysis, default_degree_bound, fd_condition_check, graded_homology,
    koszul_term_dim, modularity_consistency, regular_sequence_check, CertConfig, HomologyTable,
};
use largeness::moment::{generic_rank, moment_system};
use largeness::oracle::{classical_verdict, sl2_verdict, OracleFamily, Sl2Verdict};
use largeness::repspec::{build, LieAction, RepSpec};
use largeness::torus::analyze;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use report::{
    AnalyzeSection, CheckRow, ComponentReport, ConfigEcho, FlowRow, FlowSection, KoszulSection,
    Report, Sl2Analyze, VerifySection,
};
use spec::{BuildTarget, ParsedSpec};
use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "largeness",
    version,
    about = "Moment-map largeness verdicts, Koszul certificates, and norm-minimizing flows"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Combinatorial and table verdicts for the representation.
    Analyze(RunArgs),
    /// Symbolic certificates: zero-scheme dimension, minor bounds, homology.
    Koszul(RunArgs),
    /// Numeric norm-minimizing flows from explicit or seeded starts.
    Flow(RunArgs),
    /// Run every applicable check and cross-validate the answers.
    Verify(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the JSON representation spec.
    spec: PathBuf,
    /// First prime for modular certificates.
    #[arg(long, default_value_t = 32003)]
    prime: u64,
    /// Independent second prime; certificates must agree on both.
    #[arg(long, default_value_t = 65537)]
    second_prime: u64,
    /// Degree cutoff for graded homology. `koszul` computes homology only
    /// when this is given; `verify` defaults to 2k+4.
    #[arg(long)]
    degree_bound: Option<u32>,
    /// Cap on enumerated weight supports (torus strata).
    #[arg(long, default_value_t = 4_194_304)]
    max_subsets: u64,
    /// Cap on symbolically expanded Jacobian minors.
    #[arg(long, default_value_t = 5000)]
    max_minors: usize,
    /// Convergence tolerance for the numeric flow.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// RNG seed for generic evaluation points and flow starts.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Iteration cap for the numeric flow.
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
    /// Largest d for the minor codimension bounds (runs d = 0..=fd).
    #[arg(long, default_value_t = 1)]
    fd: i64,
    /// Witness polynomial in x1..xn, y1..yn, e.g. "x1*y4 - x2*y3"; splits
    /// the zero scheme along its hypersurface.
    #[arg(long)]
    witness: Option<String>,
    /// Write per-flow CSV traces (flow, iter, norm_sq, moment_norm, step).
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Number of seeded flow starts when --v0 is not given.
    #[arg(long, default_value_t = 1)]
    flows: usize,
    /// Explicit start vector, coordinates separated by `;`, each "re" or
    /// "re,im".
    #[arg(long)]
    v0: Option<String>,
    /// Include wall-clock timings (breaks byte-reproducibility of reports).
    #[arg(long)]
    timing: bool,
}

fn main() {
    let cli = Cli::parse();
    let (command, args): (&'static str, &RunArgs) = match &cli.cmd {
        Cmd::Analyze(a) => ("analyze", a),
        Cmd::Koszul(a) => ("koszul", a),
        Cmd::Flow(a) => ("flow", a),
        Cmd::Verify(a) => ("verify", a),
    };
    match execute(command, args) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<CoreError>() {
                Some(CoreError::PrimeDisagreement { .. }) => 1,
                _ => 2,
            };
            std::process::exit(code);
        }
    }
}

fn cert_config(args: &RunArgs) -> CertConfig {
    CertConfig {
        p1: args.prime,
        p2: args.second_prime,
        max_minors: args.max_minors,
        ..CertConfig::default()
    }
}

fn config_echo(args: &RunArgs) -> ConfigEcho {
    ConfigEcho {
        prime: args.prime,
        second_prime: args.second_prime,
        degree_bound: args.degree_bound,
        max_subsets: args.max_subsets,
        max_minors: args.max_minors,
        tol: args.tol,
        seed: args.seed,
        max_iter: args.max_iter,
        fd: args.fd,
        flows: args.flows,
    }
}

fn execute(command: &'static str, args: &RunArgs) -> Result<i32> {
    let text = fs::read_to_string(&args.spec)
        .with_context(|| format!("reading {}", args.spec.display()))?;
    let parsed = spec::parse_spec(&text).map_err(|e| anyhow!(e))?;
    let cert = cert_config(args);
    let started = Instant::now();

    let mut rpt = Report {
        command,
        spec: parsed.echo.clone(),
        config: config_echo(args),
        analyze: None,
        koszul: None,
        flow: None,
        verify: None,
        timing_ms: None,
    };
    let mut exit = 0;

    match command {
        "analyze" => {
            rpt.analyze = Some(analyze_section(&parsed, args)?);
        }
        "koszul" => {
            let action = require_matrix(&parsed, command)?;
            let ms = moment_system(&action);
            let homology = match args.degree_bound {
                Some(b) => Some(graded_homology(&ms, b, &cert)?),
                None => None,
            };
            rpt.koszul = Some(koszul_section(&action, args, &cert, homology)?);
        }
        "flow" => {
            let action = require_matrix(&parsed, command)?;
            let (section, traces) = flow_section(&action, args, args.trace.is_some())?;
            if let Some(path) = &args.trace {
                write_traces(path, &traces)?;
            }
            let bad = section.flows.iter().any(|r| {
                r.status == FlowStatus::Converged.name()
                    && r.membership_defect > 10.0 * args.tol
            });
            if bad {
                exit = 1;
            }
            rpt.flow = Some(section);
        }
        "verify" => {
            exit = run_verify(&parsed, args, &cert, &mut rpt)?;
        }
        _ => unreachable!(),
    }

    if args.timing {
        let mut timing = BTreeMap::new();
        timing.insert("total", started.elapsed().as_millis());
        rpt.timing_ms = Some(timing);
    }

    let body = serde_json::to_string_pretty(&rpt)? + "\n";
    match &args.output {
        Some(path) => fs::write(path, body)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{body}"),
    }
    Ok(exit)
}

fn require_matrix(parsed: &ParsedSpec, command: &str) -> Result<LieAction> {
    match &parsed.target {
        BuildTarget::Matrix(spec) => Ok(build(spec)?),
        BuildTarget::TableOnly { family, .. } => Err(anyhow!(
            "{command}: {} has only a verdict table here, no matrix model; use analyze",
            family.name()
        )),
    }
}

// ---------------------------------------------------------------------------
// Section builders.

fn analyze_section(parsed: &ParsedSpec, args: &RunArgs) -> Result<AnalyzeSection> {
    match &parsed.target {
        BuildTarget::Matrix(RepSpec::Torus { weights }) => {
            let analysis = analyze(weights, args.max_subsets)?;
            let torus = analysis.report();
            Ok(AnalyzeSection {
                provenance: "combinatorial",
                dim_v: weights.n,
                dim_g: weights.k,
                one_large: Some(torus.one_large),
                torus: Some(torus),
                sl2: None,
                classical: None,
            })
        }
        BuildTarget::Matrix(RepSpec::Sl2 { degrees }) => {
            let action = build_action(parsed)?;
            let verdict = sl2_verdict(degrees);
            let one_large = match verdict {
                Sl2Verdict::OneLarge => Some(true),
                Sl2Verdict::NotOneLarge => Some(false),
                Sl2Verdict::OutsideTable => None,
            };
            Ok(AnalyzeSection {
                provenance: "oracle_table",
                dim_v: action.dim_v,
                dim_g: action.dim_g(),
                one_large,
                torus: None,
                sl2: Some(Sl2Analyze {
                    degrees: degrees.clone(),
                    verdict: verdict.name(),
                }),
                classical: None,
            })
        }
        BuildTarget::Matrix(RepSpec::Classical { family, n, p, q }) => {
            let action = build_action(parsed)?;
            let verdict = classical_verdict((*family).into(), *n, *p, *q)?;
            Ok(AnalyzeSection {
                provenance: "oracle_table",
                dim_v: action.dim_v,
                dim_g: action.dim_g(),
                one_large: Some(verdict.one_large),
                torus: None,
                sl2: None,
                classical: Some(verdict),
            })
        }
        BuildTarget::TableOnly { family, n, p, q } => {
            let verdict = classical_verdict(*family, *n, *p, *q)?;
            let dim_g = match family {
                OracleFamily::G2 => 14,
                OracleFamily::Spin7 => 21,
                _ => unreachable!("only exceptional families are table-only"),
            };
            Ok(AnalyzeSection {
                provenance: "oracle_table",
                dim_v: (p + q) * n,
                dim_g,
                one_large: Some(verdict.one_large),
                torus: None,
                sl2: None,
                classical: Some(verdict),
            })
        }
    }
}

fn build_action(parsed: &ParsedSpec) -> Result<LieAction> {
    match &parsed.target {
        BuildTarget::Matrix(spec) => Ok(build(spec)?),
        BuildTarget::TableOnly { .. } => unreachable!("caller checked for a matrix model"),
    }
}

fn koszul_section(
    action: &LieAction,
    args: &RunArgs,
    cert: &CertConfig,
    homology: Option<HomologyTable>,
) -> Result<KoszulSection> {
    let ms = moment_system(action);
    let regular_sequence = regular_sequence_check(&ms, cert)?;
    let mut fd = Vec::new();
    for d in 0..=args.fd.max(0) {
        fd.push(fd_condition_check(&ms, d, cert)?);
    }
    let components = match &args.witness {
        Some(text) => {
            let w = witness::parse_witness(text, ms.n).map_err(|e| anyhow!("--witness: {e}"))?;
            Some(ComponentReport {
                witness: text.clone(),
                outcome: component_analysis(&ms, &w, cert)?,
            })
        }
        None => None,
    };
    Ok(KoszulSection {
        provenance: "symbolic_certificate",
        primes: [cert.p1, cert.p2],
        n: ms.n,
        k: ms.k,
        variables: 2 * ms.n,
        generic_rank: generic_rank(&ms, args.seed),
        regular_sequence,
        fd,
        homology,
        components,
    })
}

fn parse_v0(text: &str, dim: usize) -> Result<Vec<Complex64>> {
    let coords: Vec<&str> = text.split(';').collect();
    if coords.len() != dim {
        return Err(anyhow!(
            "--v0: expected {dim} coordinates separated by `;`, found {}",
            coords.len()
        ));
    }
    coords
        .iter()
        .map(|c| {
            let parts: Vec<&str> = c.split(',').collect();
            let bad = || anyhow!("--v0: coordinate `{c}` is not \"re\" or \"re,im\"");
            match parts.as_slice() {
                [re] => Ok(Complex64::new(re.trim().parse().map_err(|_| bad())?, 0.0)),
                [re, im] => Ok(Complex64::new(
                    re.trim().parse().map_err(|_| bad())?,
                    im.trim().parse().map_err(|_| bad())?,
                )),
                _ => Err(bad()),
            }
        })
        .collect()
}

fn flow_starts(action: &LieAction, args: &RunArgs) -> Result<Vec<Vec<Complex64>>> {
    if let Some(text) = &args.v0 {
        return Ok(vec![parse_v0(text, action.dim_v)?]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    Ok((0..args.flows.max(1))
        .map(|_| {
            (0..action.dim_v)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect()
        })
        .collect())
}

#[allow(clippy::type_complexity)]
fn flow_section(
    action: &LieAction,
    args: &RunArgs,
    want_trace: bool,
) -> Result<(FlowSection, Vec<Option<Vec<TraceRow>>>)> {
    let cfg = FlowConfig {
        tol: args.tol,
        max_iter: args.max_iter,
        ..FlowConfig::default()
    };
    let starts = flow_starts(action, args)?;
    let mut flows = Vec::new();
    let mut traces = Vec::new();
    for (index, v0) in starts.iter().enumerate() {
        let res = kempf_ness_flow(action, v0, &cfg, want_trace)?;
        let rank = if res.status == FlowStatus::Converged {
            // The relative singular value cutoff is looser than the flow
            // tolerance; rank is a coarse integer readout.
            Some(rank_sample(action, &res.v, 1e-8))
        } else {
            None
        };
        flows.push(FlowRow {
            index,
            v0: v0.iter().map(|z| [z.re, z.im]).collect(),
            status: res.status.name(),
            iterations: res.iterations,
            norm_start: res.norm_start,
            norm_end: res.norm_end,
            norm_end_sq: res.norm_end * res.norm_end,
            moment_norm: res.moment_norm,
            membership_defect: res.membership_defect,
            rank_sample: rank,
        });
        traces.push(res.trace);
    }
    Ok((
        FlowSection {
            provenance: "numeric_evidence",
            tol: args.tol,
            flows,
        },
        traces,
    ))
}

fn write_traces(path: &PathBuf, traces: &[Option<Vec<TraceRow>>]) -> Result<()> {
    let mut body = String::from("flow,iter,norm_sq,moment_norm,step\n");
    for (index, trace) in traces.iter().enumerate() {
        if let Some(rows) = trace {
            for r in rows {
                body.push_str(&format!(
                    "{index},{},{},{},{}\n",
                    r.iter, r.norm_sq, r.moment_norm, r.step
                ));
            }
        }
    }
    fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// The verify command: run everything applicable, then cross-check.

fn euler_characteristic_matches(h: &HomologyTable, n: usize, k: usize) -> bool {
    for (d, row) in h.dims.iter().enumerate() {
        let from_table: i64 = row
            .iter()
            .enumerate()
            .map(|(i, &v)| if i % 2 == 0 { v as i64 } else { -(v as i64) })
            .sum();
        let from_counts: i64 = (0..=k)
            .map(|i| {
                let v = koszul_term_dim(n, k, i, d as u32) as i64;
                if i % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .sum();
        if from_table != from_counts {
            return false;
        }
    }
    true
}

fn flow_checks(
    checks: &mut Vec<CheckRow>,
    section: &FlowSection,
    traces: &[Option<Vec<TraceRow>>],
    stable: Option<bool>,
    expect_full_rank: Option<usize>,
    tol: f64,
) {
    let converged: Vec<&FlowRow> = section
        .flows
        .iter()
        .filter(|r| r.status == FlowStatus::Converged.name())
        .collect();
    if let Some(true) = stable {
        let collapsed = section
            .flows
            .iter()
            .filter(|r| r.status == FlowStatus::NullCone.name())
            .count();
        checks.push(CheckRow {
            name: "no_collapse_when_stable",
            holds: collapsed == 0,
            detail: format!("{collapsed} of {} flows hit the null cone", section.flows.len()),
        });
    }
    checks.push(CheckRow {
        name: "membership_small_at_converged",
        holds: converged.iter().all(|r| r.membership_defect <= 10.0 * tol),
        detail: format!(
            "worst defect {:e} over {} converged flows",
            converged
                .iter()
                .map(|r| r.membership_defect)
                .fold(0.0, f64::max),
            converged.len()
        ),
    });
    let monotone = traces.iter().flatten().all(|rows| {
        rows.windows(2)
            .all(|w| w[1].norm_sq <= w[0].norm_sq + 1e-12)
    });
    checks.push(CheckRow {
        name: "monotone_descent",
        holds: monotone,
        detail: "norm never increases along accepted steps".into(),
    });
    if let Some(k) = expect_full_rank {
        checks.push(CheckRow {
            name: "full_rank_at_converged_limits",
            holds: converged.iter().all(|r| r.rank_sample == Some(k)),
            detail: format!("expected rank {k} at {} converged limits", converged.len()),
        });
    }
}

fn run_verify(
    parsed: &ParsedSpec,
    args: &RunArgs,
    cert: &CertConfig,
    rpt: &mut Report,
) -> Result<i32> {
    rpt.analyze = Some(analyze_section(parsed, args)?);
    let mut checks: Vec<CheckRow> = Vec::new();
    let mut notes: Vec<String> = Vec::new();
    let mut modularity = None;

    let action = match &parsed.target {
        BuildTarget::TableOnly { .. } => {
            notes.push("verdict table only; no matrix model to cross-check".into());
            rpt.verify = Some(VerifySection {
                modularity: None,
                checks,
                notes,
                consistent: true,
            });
            return Ok(0);
        }
        BuildTarget::Matrix(spec) => build(spec)?,
    };
    let ms = moment_system(&action);

    // Homology through the default bound, skipped when slices get too big.
    let bound = args.degree_bound.unwrap_or_else(|| default_degree_bound(ms.k));
    let homology = match graded_homology(&ms, bound, cert) {
        Ok(h) => Some(h),
        Err(CoreError::ResourceLimit { what, detail }) => {
            notes.push(format!("homology skipped ({what}: {detail})"));
            None
        }
        Err(e) => return Err(e.into()),
    };

    // Symbolic section; always include d = 0 and d = 1 bounds.
    let mut fd_args_max = args.fd.max(1);
    if let BuildTarget::Matrix(RepSpec::Torus { .. }) = &parsed.target {
        fd_args_max = fd_args_max.max(2);
    }
    let section_args = RunArgs {
        fd: fd_args_max,
        ..clone_args(args)
    };
    let koszul = koszul_section(&action, &section_args, cert, homology)?;
    let regular = koszul.regular_sequence.is_regular;

    match &parsed.target {
        BuildTarget::Matrix(RepSpec::Torus { weights }) => {
            let analysis = analyze(weights, args.max_subsets)?;
            let m = modularity_consistency(&analysis, &ms, &[0, 1, 2], cert)?;
            checks.push(CheckRow {
                name: "regular_sequence_matches_local_freeness",
                holds: m.regular_agrees,
                detail: format!(
                    "regular = {}, locally_free = {}",
                    m.regular, m.locally_free
                ),
            });
            checks.push(CheckRow {
                name: "minor_bounds_match_modularity",
                holds: m.rows.iter().all(|r| r.agree),
                detail: if m.locally_free {
                    m.rows
                        .iter()
                        .map(|r| format!("d={}: bounds {} / strata {}", r.d, r.fd_holds, r.modular))
                        .collect::<Vec<_>>()
                        .join("; ")
                } else {
                    "not locally free; minor bounds do not read off modularity".into()
                },
            });
            if analysis.weight_rank == weights.k {
                checks.push(CheckRow {
                    name: "stability_matches_largeness",
                    holds: analysis.stability.stable == analysis.one_large,
                    detail: format!(
                        "stable = {}, one_large = {}",
                        analysis.stability.stable, analysis.one_large
                    ),
                });
            } else {
                checks.push(CheckRow {
                    name: "rank_deficient_is_not_large",
                    holds: !analysis.one_large,
                    detail: format!(
                        "weight rank {} < {}",
                        analysis.weight_rank, weights.k
                    ),
                });
            }
            let (flow_sec, traces) = flow_section(&action, args, true)?;
            let expect_rank = (analysis.stability.stable && analysis.locally_free)
                .then_some(weights.k);
            flow_checks(
                &mut checks,
                &flow_sec,
                &traces,
                Some(analysis.stability.stable),
                expect_rank,
                args.tol,
            );
            if let Some(path) = &args.trace {
                write_traces(path, &traces)?;
            }
            rpt.flow = Some(flow_sec);
            modularity = Some(m);
        }
        BuildTarget::Matrix(other) => {
            let one_large = rpt.analyze.as_ref().and_then(|a| a.one_large);
            let fd0 = &koszul.fd[0];
            let fd1 = &koszul.fd[1];
            match one_large {
                Some(expected) => {
                    let symbolic = regular && fd1.holds;
                    checks.push(CheckRow {
                        name: "oracle_matches_certificates",
                        holds: expected == symbolic,
                        detail: format!(
                            "table says {expected}; regular = {regular}, d=1 bounds = {}",
                            fd1.holds
                        ),
                    });
                }
                None => notes.push("verdict table does not apply here".into()),
            }
            if fd0.locally_free {
                checks.push(CheckRow {
                    name: "minors_at_d0_match_regular_sequence",
                    holds: fd0.holds == regular,
                    detail: format!("d=0 bounds {} / regular {}", fd0.holds, regular),
                });
            } else {
                checks.push(CheckRow {
                    name: "not_locally_free_blocks_regularity",
                    holds: !regular,
                    detail: format!(
                        "jacobian rank {} < {}, so the quadrics cannot be regular",
                        fd0.jacobian_rank, ms.k
                    ),
                });
            }
            let (flow_sec, traces) = flow_section(&action, args, true)?;
            let expect_rank =
                (one_large == Some(true) && fd0.locally_free).then_some(ms.k);
            flow_checks(
                &mut checks,
                &flow_sec,
                &traces,
                one_large,
                expect_rank,
                args.tol,
            );
            if let Some(path) = &args.trace {
                write_traces(path, &traces)?;
            }
            rpt.flow = Some(flow_sec);
            let _ = other;
        }
        BuildTarget::TableOnly { .. } => unreachable!(),
    }

    if let Some(h) = &koszul.homology {
        checks.push(CheckRow {
            name: "homology_vanishes_for_regular_sequences",
            holds: !regular || h.vanishing_above_zero,
            detail: match &h.first_positive {
                Some((i, d)) => format!("first nonzero slice at H_{i}, degree {d}"),
                None => format!("all H_i with i >= 1 vanish through degree {}", h.degree_bound),
            },
        });
        checks.push(CheckRow {
            name: "euler_characteristic_matches",
            holds: euler_characteristic_matches(h, ms.n, ms.k),
            detail: format!("alternating sums agree in degrees 0..={}", h.degree_bound),
        });
    }

    rpt.koszul = Some(koszul);
    let consistent = checks.iter().all(|c| c.holds);
    rpt.verify = Some(VerifySection {
        modularity,
        checks,
        notes,
        consistent,
    });
    Ok(if consistent { 0 } else { 1 })
}

fn clone_args(args: &RunArgs) -> RunArgs {
    RunArgs {
        spec: args.spec.clone(),
        prime: args.prime,
        second_prime: args.second_prime,
        degree_bound: args.degree_bound,
        max_subsets: args.max_subsets,
        max_minors: args.max_minors,
        tol: args.tol,
        seed: args.seed,
        output: args.output.clone(),
        max_iter: args.max_iter,
        fd: args.fd,
        witness: args.witness.clone(),
        trace: args.trace.clone(),
        flows: args.flows,
        v0: args.v0.clone(),
        timing: args.timing,
    }
}
