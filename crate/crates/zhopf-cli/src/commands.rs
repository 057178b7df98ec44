//! Command implementations: average, analyze, formula.
//!
//! Each command consumes already-loaded file texts and produces the output
//! text, an exit code (0 ordinary, 2 degenerate/flagged, 3 certification
//! failure) and a reproducibility manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};

use zhopf_core::averaging::{impose_vanishing, AveragingSession};
use zhopf_core::count::{count_positive_roots, BifurcationReport, CountOptions};
use zhopf_core::mixedvol::bkk_bound;
use zhopf_core::poly::Binding;
use zhopf_core::rational::Rat;
use zhopf_core::semialg::build_semialgebraic;
use zhopf_core::standard_form::{to_standard_form, StandardFormOptions};
use zhopf_core::system::SystemSpec;
use zhopf_core::template::order_k_template;
use zhopf_core::Error as CoreError;

use crate::dsl::{parse_basis, parse_constraints, parse_points, parse_system, SystemFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub struct RunOutcome {
    pub stdout: String,
    pub exit_code: i32,
    pub manifest: String,
}

pub struct AverageOptions<'a> {
    pub system_text: &'a str,
    pub basis_text: Option<&'a str>,
    pub constraints_text: Option<&'a str>,
    pub order: usize,
    pub psi_literal: bool,
    pub format: Format,
    pub emit_standard_form: bool,
}

pub struct AnalyzeOptions<'a> {
    pub system_text: &'a str,
    pub basis_text: Option<&'a str>,
    pub constraints_text: Option<&'a str>,
    pub points_text: &'a str,
    pub order: usize,
    pub psi_literal: bool,
    pub rho: bool,
    pub bkk: bool,
    pub jobs: usize,
    pub format: Format,
}

pub struct FormulaOptions {
    pub order: usize,
    pub dimension: usize,
    pub format: Format,
}

fn component_label(order: usize, comp: usize) -> String {
    let idx = if comp == 0 { 1 } else { comp + 2 };
    format!("f[{order},{idx}]")
}

/// Shared front half: parse, optional change of basis, validate, constrain.
fn prepare_spec(
    system_text: &str,
    basis_text: Option<&str>,
    constraints_text: Option<&str>,
    order: usize,
    psi_literal: bool,
) -> Result<(SystemFile, SystemSpec, BTreeMap<String, Binding>)> {
    let file = parse_system(system_text).map_err(|e| anyhow!("{e}"))?;
    if order == 0 || order > file.raw.order {
        bail!(
            "requested order {order} outside the declared range 1..={}",
            file.raw.order
        );
    }
    let raw = match basis_text {
        Some(text) => {
            let m = parse_basis(text, &file).map_err(|e| anyhow!("{e}"))?;
            file.raw
                .apply_linear_change(&m)
                .context("change of basis failed")?
        }
        None => file.raw.clone(),
    };
    let spec = raw.into_spec().context("system validation failed")?;
    let constraints = match constraints_text {
        Some(text) => parse_constraints(text).map_err(|e| anyhow!("{e}"))?,
        None => BTreeMap::new(),
    };
    let opts = StandardFormOptions { psi_literal };
    let constrained = impose_vanishing(&spec, &constraints, order - 1, opts).map_err(|e| {
        anyhow::Error::new(e).context(format!(
            "lower-order averaged functions must vanish before order {order}"
        ))
    })?;
    Ok((file, constrained, constraints))
}

/// Vanishing failures are flagged cases (exit 2 with a diagnostic), not
/// usage errors: the caller forgot or mis-stated the constraints.
fn vanishing_outcome(err: &anyhow::Error, system_text: &str) -> Option<RunOutcome> {
    let core = err.downcast_ref::<CoreError>()?;
    if let CoreError::VanishingFailed { detail } = core {
        let stdout = format!(
            "diagnostic: lower-order averaged functions are not identically zero; \
             supply the vanishing conditions via --constraints\nsurviving: {detail}\n"
        );
        let manifest = build_manifest("diagnostic", system_text, &BTreeMap::new(), &[], &stdout);
        return Some(RunOutcome {
            stdout,
            exit_code: 2,
            manifest,
        });
    }
    None
}

pub fn run_average(opts: &AverageOptions) -> Result<RunOutcome> {
    let (_file, spec, constraints) = match prepare_spec(
        opts.system_text,
        opts.basis_text,
        opts.constraints_text,
        opts.order,
        opts.psi_literal,
    ) {
        Ok(t) => t,
        Err(e) => {
            if let Some(outcome) = vanishing_outcome(&e, opts.system_text) {
                return Ok(outcome);
            }
            return Err(e);
        }
    };
    let sf_opts = StandardFormOptions {
        psi_literal: opts.psi_literal,
    };
    let sf = to_standard_form(&spec, sf_opts)?;
    let mut session = AveragingSession::new(&sf);
    let mut averaged = Vec::new();
    for i in 1..=opts.order {
        averaged.push(session.averaged(i)?);
    }

    let mut out = String::new();
    match opts.format {
        Format::Text => {
            if opts.emit_standard_form {
                for j in 1..=opts.order {
                    for comp in 0..(sf.n - 1) {
                        let idx = if comp == 0 { 1 } else { comp + 2 };
                        writeln!(out, "F[{j}][{idx}] = {}", sf.component(j, comp))?;
                    }
                }
            }
            for f in &averaged {
                for (comp, poly) in f.components.iter().enumerate() {
                    writeln!(out, "{} = {}", component_label(f.order, comp), poly)?;
                }
            }
        }
        Format::Json => {
            let mut orders = Vec::new();
            for f in &averaged {
                let comps: Vec<String> = f
                    .components
                    .iter()
                    .enumerate()
                    .map(|(comp, poly)| {
                        format!(
                            "{}: {}",
                            json_string(&component_label(f.order, comp)),
                            json_string(&poly.to_string())
                        )
                    })
                    .collect();
                orders.push(format!(
                    "{{\"order\": {}, \"components\": {{{}}}}}",
                    f.order,
                    comps.join(", ")
                ));
            }
            writeln!(out, "{{\"averaged\": [{}]}}", orders.join(", "))?;
        }
    }
    let manifest = build_manifest("average", opts.system_text, &constraints, &[], &out);
    Ok(RunOutcome {
        stdout: out,
        exit_code: 0,
        manifest,
    })
}

pub fn run_analyze(opts: &AnalyzeOptions) -> Result<RunOutcome> {
    let (file, spec, constraints) = match prepare_spec(
        opts.system_text,
        opts.basis_text,
        opts.constraints_text,
        opts.order,
        opts.psi_literal,
    ) {
        Ok(t) => t,
        Err(e) => {
            if let Some(outcome) = vanishing_outcome(&e, opts.system_text) {
                return Ok(outcome);
            }
            return Err(e);
        }
    };
    let sf_opts = StandardFormOptions {
        psi_literal: opts.psi_literal,
    };
    let sf = to_standard_form(&spec, sf_opts)?;
    let mut session = AveragingSession::new(&sf);
    let f = session.averaged(opts.order)?;
    let nonzero = file.nonzero_symbols();
    let sys = build_semialgebraic(&f, spec.n, &nonzero, &[], opts.rho)?;
    let bound = if opts.bkk {
        Some(bkk_bound(&sys.equations, &sys.unknowns)?)
    } else {
        None
    };
    let points = parse_points(opts.points_text).map_err(|e| anyhow!("{e}"))?;
    if points.is_empty() {
        bail!("no sample points given");
    }

    // Fan out over sample points.
    let count_opts = CountOptions::default();
    let results: Vec<(
        BTreeMap<String, Rat>,
        std::result::Result<BifurcationReport, CoreError>,
    )> = if opts.jobs > 1 && points.len() > 1 {
        std::thread::scope(|scope| {
            let sys_ref = &sys;
            let handles: Vec<_> = points
                .iter()
                .map(|p| {
                    let point = p.clone();
                    scope.spawn(move || {
                        let r = count_positive_roots(sys_ref, &point, count_opts);
                        (point, r)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    } else {
        points
            .iter()
            .map(|p| (p.clone(), count_positive_roots(&sys, p, count_opts)))
            .collect()
    };

    let mut exit_code = 0i32;
    if !sys.flags.is_empty() {
        exit_code = 2;
    }
    let mut out = String::new();
    let mut json_points = Vec::new();
    if opts.format == Format::Text {
        for (comp, eq) in sys.equations.iter().enumerate() {
            writeln!(out, "equation {}: {} = 0", comp + 1, eq)?;
        }
        writeln!(out, "positivity: {} > 0", sys.positive.name())?;
        writeln!(out, "jacobian numerator: {}", sys.jacobian)?;
        for flag in &sys.flags {
            writeln!(out, "flag: {flag}")?;
        }
        if let Some(b) = bound {
            writeln!(out, "bkk-bound: {b}")?;
        }
    }
    for (point, result) in &results {
        let point_text = point
            .iter()
            .map(|(k, v)| format!("{k} = {v}"))
            .collect::<Vec<_>>()
            .join(", ");
        match result {
            Ok(report) => {
                if !report.flags.is_empty() {
                    exit_code = exit_code.max(2);
                }
                match opts.format {
                    Format::Text => {
                        writeln!(out, "point: {point_text}")?;
                        writeln!(out, "count: {}", report.count)?;
                        for (i, root) in report.boxes.iter().enumerate() {
                            let coords = report
                                .unknowns
                                .iter()
                                .zip(root.coords.iter())
                                .map(|(name, iv)| format!("{name} in [{}, {}]", iv.lo, iv.hi))
                                .collect::<Vec<_>>()
                                .join(", ");
                            writeln!(
                                out,
                                "root {}: {coords}; jacobian sign {}",
                                i + 1,
                                root.jacobian_sign
                            )?;
                        }
                        for flag in &report.flags {
                            writeln!(out, "flag: {flag}")?;
                        }
                    }
                    Format::Json => {
                        let boxes: Vec<String> = report
                            .boxes
                            .iter()
                            .map(|root| {
                                let coords: Vec<String> = report
                                    .unknowns
                                    .iter()
                                    .zip(root.coords.iter())
                                    .map(|(name, iv)| {
                                        format!(
                                            "{}: [{}, {}]",
                                            json_string(name),
                                            json_string(&iv.lo.to_string()),
                                            json_string(&iv.hi.to_string())
                                        )
                                    })
                                    .collect();
                                format!(
                                    "{{\"interval\": {{{}}}, \"jacobian_sign\": {}}}",
                                    coords.join(", "),
                                    root.jacobian_sign
                                )
                            })
                            .collect();
                        let flags: Vec<String> =
                            report.flags.iter().map(|f| json_string(f)).collect();
                        json_points.push(format!(
                            "{{\"point\": {}, \"count\": {}, \"roots\": [{}], \"flags\": [{}]}}",
                            json_string(&point_text),
                            report.count,
                            boxes.join(", "),
                            flags.join(", ")
                        ));
                    }
                }
            }
            Err(err) => {
                let code = match err {
                    CoreError::NonIsolatedRoots | CoreError::DegenerateSystem { .. } => 2,
                    _ => 3,
                };
                exit_code = exit_code.max(code);
                match opts.format {
                    Format::Text => {
                        writeln!(out, "point: {point_text}")?;
                        writeln!(out, "error: {err}")?;
                    }
                    Format::Json => {
                        json_points.push(format!(
                            "{{\"point\": {}, \"error\": {}}}",
                            json_string(&point_text),
                            json_string(&err.to_string())
                        ));
                    }
                }
            }
        }
    }
    if opts.format == Format::Json {
        let flags: Vec<String> = sys.flags.iter().map(|f| json_string(f)).collect();
        let equations: Vec<String> = sys
            .equations
            .iter()
            .map(|eq| json_string(&eq.to_string()))
            .collect();
        let bkk_field = match bound {
            Some(b) => format!("{b}"),
            None => "null".into(),
        };
        out = format!(
            "{{\"equations\": [{}], \"positive\": {}, \"jacobian\": {}, \"bkk\": {}, \"flags\": [{}], \"points\": [{}]}}\n",
            equations.join(", "),
            json_string(sys.positive.name()),
            json_string(&sys.jacobian.to_string()),
            bkk_field,
            flags.join(", "),
            json_points.join(", ")
        );
    }
    let manifest = build_manifest("analyze", opts.system_text, &constraints, &points, &out);
    Ok(RunOutcome {
        stdout: out,
        exit_code,
        manifest,
    })
}

pub fn run_formula(opts: &FormulaOptions) -> Result<RunOutcome> {
    if opts.order == 0 || opts.dimension < 2 {
        bail!("formula needs order >= 1 and dimension >= 2");
    }
    let start = Instant::now();
    let template = order_k_template(opts.order, opts.dimension)?;
    let elapsed = start.elapsed();
    let mut out = String::new();
    match opts.format {
        Format::Text => {
            out.push_str(&template.render());
            writeln!(out, "terms-per-component: {}", template.term_count())?;
            writeln!(out, "elapsed-seconds: {:.6}", elapsed.as_secs_f64())?;
        }
        Format::Json => {
            writeln!(
                out,
                "{{\"order\": {}, \"dimension\": {}, \"terms_per_component\": {}, \"elapsed_seconds\": {:.6}, \"template\": {}}}",
                opts.order,
                opts.dimension,
                template.term_count(),
                elapsed.as_secs_f64(),
                json_string(&template.render())
            )?;
        }
    }
    let manifest = build_manifest(
        &format!("formula k={} n={}", opts.order, opts.dimension),
        "",
        &BTreeMap::new(),
        &[],
        &out,
    );
    Ok(RunOutcome {
        stdout: out,
        exit_code: 0,
        manifest,
    })
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

/// FNV-1a 64-bit content digest.
pub fn digest(text: &str) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in text.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("fnv1a:{h:016x}")
}

/// The manifest embeds everything needed to check that a re-run reproduces
/// the output byte for byte. Timing is deliberately excluded from analyze
/// and average manifests; formula output includes timing, so its manifest
/// hashes only the deterministic prefix.
fn build_manifest(
    command: &str,
    system_text: &str,
    constraints: &BTreeMap<String, Binding>,
    points: &[BTreeMap<String, Rat>],
    output: &str,
) -> String {
    let mut m = String::new();
    m.push_str("zhopf-manifest v1\n");
    m.push_str(&format!("command: {command}\n"));
    m.push_str(&format!("input-digest: {}\n", digest(system_text)));
    if !constraints.is_empty() {
        let rendered: Vec<String> = constraints
            .iter()
            .map(|(k, v)| match v {
                Binding::Const(q) => format!("{k} = {q}"),
                Binding::Poly(p) => format!("{k} = {p}"),
            })
            .collect();
        m.push_str(&format!("constraints: {}\n", rendered.join("; ")));
    }
    for point in points {
        let rendered: Vec<String> = point.iter().map(|(k, v)| format!("{k} = {v}")).collect();
        m.push_str(&format!("point: {}\n", rendered.join(", ")));
    }
    let deterministic: String = output
        .lines()
        .filter(|l| !l.starts_with("elapsed-seconds:"))
        .collect::<Vec<_>>()
        .join("\n");
    m.push_str(&format!("output-digest: {}\n", digest(&deterministic)));
    m.push_str("--- output ---\n");
    m.push_str(output);
    m
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
