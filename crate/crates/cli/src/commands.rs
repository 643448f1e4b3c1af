use std::fs;

use serde::Serialize;
use tenuniq::bounds::{aggregate, BoundTable, FieldSelection, ProblemDims};
use tenuniq::certify::{
    certify_cpd, certify_sfs, CertParams, Certificate, ConditionOutcome, Verdict,
};
use tenuniq::lab::{
    empirical_uniqueness, monte_carlo_generic_check, AlsOptions, EmpiricalReport,
    EmpiricalThresholds, GenericRoute, MonteCarloSummary, SampleSpec,
};
use tenuniq::{FactorSet, Field, FieldFactorSet, RankTolerance, Scalar};

use crate::args::{BoundsArgs, CertifyArgs, Cli, Command, EmpiricalArgs, GenericCheckArgs};
use crate::error::CliError;
use crate::factor_file::FactorFile;
use crate::report::{num, opt_num, ranges, table, tag, Output, ReportEnvelope};

/// Runs the parsed command and renders its report in the requested format.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Bounds(a) => bounds(a)?.render(a.format),
        Command::Certify(a) => certify(a)?.render(a.format),
        Command::GenericCheck(a) => generic_check(a)?.render(a.format),
        Command::Empirical(a) => empirical(a)?.render(a.format),
    }
}

fn dims_label(d: &ProblemDims) -> String {
    if d.sfs {
        format!("{}x{}x{} (SFS)", d.i, d.j, d.k)
    } else {
        format!("{}x{}x{}", d.i, d.j, d.k)
    }
}

fn strings<const N: usize>(xs: [&str; N]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

#[derive(Serialize)]
struct BoundsInputs {
    dims: ProblemDims,
    max_rank: usize,
    field: FieldSelection,
}

pub fn bounds(a: &BoundsArgs) -> Result<Output, CliError> {
    let dims = a.dims.resolve(a.sfs)?;
    if a.max_rank == 0 {
        return Err(CliError::Usage("--max-rank must be positive".into()));
    }
    let field: FieldSelection = a.field.into();
    let t = aggregate(dims, a.max_rank, field)?;
    let inputs = BoundsInputs {
        dims,
        max_rank: a.max_rank,
        field,
    };
    let envelope = ReportEnvelope::new("bounds", None, &inputs, &t)?;
    Ok(Output {
        envelope,
        table: bounds_table(&t),
        csv_header: strings([
            "i",
            "j",
            "k",
            "sfs",
            "field",
            "bound",
            "max_rank",
            "counted",
            "literature_only",
            "field_scope",
            "rank_set",
        ]),
        csv_rows: t
            .entries
            .iter()
            .map(|e| {
                let set: Vec<String> = e.rank_set.iter().map(usize::to_string).collect();
                vec![
                    t.dims.i.to_string(),
                    t.dims.j.to_string(),
                    t.dims.k.to_string(),
                    t.dims.sfs.to_string(),
                    tag(&t.field),
                    e.id.tag().into(),
                    e.max_rank.to_string(),
                    (!e.literature_only && t.field.admits(e.field)).to_string(),
                    e.literature_only.to_string(),
                    tag(&e.field),
                    set.join(" "),
                ]
            })
            .collect(),
    })
}

fn bounds_table(t: &BoundTable) -> String {
    let mut out = format!(
        "generic uniqueness bounds for {}, field {}, ranks 1..={}\n\n",
        dims_label(&t.dims),
        tag(&t.field),
        t.r_cap
    );
    let rows: Vec<Vec<String>> = t
        .entries
        .iter()
        .map(|e| {
            let kind = if e.literature_only {
                "literature"
            } else if !t.field.admits(e.field) {
                "other field"
            } else {
                "counted"
            };
            vec![
                e.id.tag().into(),
                e.max_rank.to_string(),
                ranges(&e.rank_set),
                tag(&e.field),
                kind.into(),
                e.reason.clone().unwrap_or_default(),
            ]
        })
        .collect();
    out += &table(&["bound", "max", "ranks", "field", "status", "note"], &rows);
    out += &format!("\nlargest guaranteed rank: {}\n", t.overall_max);
    out
}

#[derive(Serialize)]
struct CertifyInputs {
    input: String,
    field: Field,
    sfs: bool,
    dims: [usize; 3],
    rank: usize,
    tol: f64,
    falsify_trials: usize,
    seed: u64,
}

struct Certified {
    results: serde_json::Value,
    certificates: Vec<Certificate>,
    verdict: Verdict,
}

fn value(x: &impl Serialize) -> Result<serde_json::Value, CliError> {
    serde_json::to_value(x).map_err(|e| CliError::Render(e.to_string()))
}

fn certify_set<S: Scalar>(f: &FactorSet<S>, p: &CertParams) -> Result<Certified, CliError> {
    if f.is_sfs() {
        let c = certify_sfs(f.a(), f.c(), p)?;
        Ok(Certified {
            results: value(&c)?,
            certificates: vec![c.kruskal.clone(), c.prop43.clone(), c.prop61.clone()],
            verdict: c.verdict,
        })
    } else {
        let c = certify_cpd(f, p)?;
        Ok(Certified {
            results: value(&c)?,
            certificates: vec![c.kruskal.clone(), c.prop32.clone()],
            verdict: c.verdict,
        })
    }
}

fn outcome_details(o: &ConditionOutcome) -> String {
    let mut parts: Vec<String> = o
        .detail
        .values
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    if let Some(w) = &o.detail.witness {
        if let Ok(l) = serde_json::to_string(&w.lambda) {
            parts.push(format!("witness lambda={l}"));
        }
    }
    if let Some(t) = o.detail.falsify_trials {
        parts.push(format!("trials={t}"));
    }
    parts.join(" ")
}

pub fn certify(a: &CertifyArgs) -> Result<Output, CliError> {
    let path = a.input.display().to_string();
    let text = fs::read_to_string(&a.input).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    let file = FactorFile::parse(&text)?;
    let set = file.to_factors()?;
    let p = CertParams::new(RankTolerance::new(a.tol)?, a.falsify_trials, a.seed)?;
    log::info!(
        "certifying {path}: dims {:?}, R = {}",
        set.dims(),
        set.rank()
    );
    let c = match &set {
        FieldFactorSet::Real(f) => certify_set(f, &p)?,
        FieldFactorSet::Complex(f) => certify_set(f, &p)?,
    };
    let (i, j, k) = set.dims();
    let inputs = CertifyInputs {
        input: path,
        field: set.field(),
        sfs: set.is_sfs(),
        dims: [i, j, k],
        rank: set.rank(),
        tol: a.tol,
        falsify_trials: a.falsify_trials,
        seed: a.seed,
    };
    let envelope = ReportEnvelope::new("certify", Some(a.seed), &inputs, &c.results)?;

    let mut rows = Vec::new();
    let mut csv_rows = Vec::new();
    for cert in &c.certificates {
        for o in &cert.outcomes {
            let note = o.detail.note.clone().unwrap_or_default();
            rows.push(vec![
                tag(&cert.route),
                tag(&o.condition_id),
                tag(&o.status),
                outcome_details(o),
                note.clone(),
            ]);
            csv_rows.push(vec![
                tag(&cert.route),
                tag(&cert.verdict),
                tag(&o.condition_id),
                tag(&o.status),
                outcome_details(o),
                note,
            ]);
        }
    }
    let mut out = format!(
        "certificate for {}x{}x{}, R = {}, {}{}\n\n",
        i,
        j,
        k,
        inputs.rank,
        inputs.field,
        if inputs.sfs { ", SFS" } else { "" }
    );
    out += &table(&["route", "condition", "status", "details", "note"], &rows);
    out += "\n";
    for cert in &c.certificates {
        out += &format!("route {}: {}\n", tag(&cert.route), tag(&cert.verdict));
        if let Some(n) = &cert.note {
            out += &format!("  {n}\n");
        }
    }
    out += &format!("verdict: {}\n", tag(&c.verdict));
    Ok(Output {
        envelope,
        table: out,
        csv_header: strings([
            "route",
            "route_verdict",
            "condition",
            "status",
            "details",
            "note",
        ]),
        csv_rows,
    })
}

#[derive(Serialize)]
struct GenericCheckInputs {
    dims: ProblemDims,
    rank: usize,
    trials: usize,
    seed: u64,
    field: Field,
    tol: f64,
    route: GenericRoute,
}

pub fn generic_check(a: &GenericCheckArgs) -> Result<Output, CliError> {
    let dims = a.dims.resolve(a.sfs)?;
    let field: Field = a.field.into();
    let spec = SampleSpec::new(dims, a.rank, field, a.seed, a.trials)?;
    let route = if dims.sfs {
        GenericRoute::Prop13
    } else {
        GenericRoute::Prop17
    };
    let s = monte_carlo_generic_check(&spec, route, RankTolerance::new(a.tol)?)?;
    let inputs = GenericCheckInputs {
        dims,
        rank: a.rank,
        trials: a.trials,
        seed: a.seed,
        field,
        tol: a.tol,
        route,
    };
    let envelope = ReportEnvelope::new("generic-check", Some(a.seed), &inputs, &s)?;
    Ok(Output {
        envelope,
        table: generic_table(&s),
        csv_header: strings(["condition", "m", "passes", "trials", "gate"]),
        csv_rows: s
            .conditions
            .iter()
            .map(|c| {
                vec![
                    c.label.clone(),
                    c.m.to_string(),
                    c.passes.to_string(),
                    s.spec.trials.to_string(),
                    c.gate.clone().unwrap_or_default(),
                ]
            })
            .collect(),
    })
}

fn generic_table(s: &MonteCarloSummary) -> String {
    let trials = s.spec.trials;
    let mut out = format!(
        "{} check for {}, R = {}, {} trials, {} field, seed {}\n\n",
        tag(&s.route),
        dims_label(&s.spec.dims),
        s.spec.rank,
        trials,
        s.spec.field,
        s.spec.seed
    );
    let rows: Vec<Vec<String>> = s
        .conditions
        .iter()
        .map(|c| {
            vec![
                c.label.clone(),
                c.m.to_string(),
                format!("{}/{trials}", c.passes),
                c.gate.clone().unwrap_or_default(),
            ]
        })
        .collect();
    out += &table(&["condition", "m", "passes", "gate"], &rows);
    out += &format!(
        "\ntrials with a passing condition: {}/{trials}\ngeneric uniqueness evidence: {}\n",
        s.any_pass_trials,
        if s.generic_uniqueness_evidence {
            "yes"
        } else {
            "no"
        }
    );
    out
}

#[derive(Serialize)]
struct EmpiricalInputs {
    dims: ProblemDims,
    rank: usize,
    field: Field,
    seed: u64,
    inits: usize,
    max_iters: usize,
    fit_tol: f64,
    thresholds: EmpiricalThresholds,
}

pub fn empirical(a: &EmpiricalArgs) -> Result<Output, CliError> {
    let dims = a.dims.resolve(a.sfs)?;
    let field: Field = a.field.into();
    let spec = SampleSpec::new(dims, a.rank, field, a.seed, 1)?;
    let opts = AlsOptions::new(a.max_iters, a.fit_tol, a.inits, a.seed)?;
    let r = empirical_uniqueness(&spec, &opts)?;
    let inputs = EmpiricalInputs {
        dims,
        rank: a.rank,
        field,
        seed: a.seed,
        inits: a.inits,
        max_iters: a.max_iters,
        fit_tol: a.fit_tol,
        thresholds: r.thresholds,
    };
    let envelope = ReportEnvelope::new("empirical", Some(a.seed), &inputs, &r)?;
    let rows = run_rows(&r);
    Ok(Output {
        envelope,
        table: empirical_table(&r, &rows),
        csv_header: strings([
            "init",
            "fit",
            "iterations",
            "converged",
            "kept",
            "congruence_to_truth",
            "error",
        ]),
        csv_rows: rows,
    })
}

fn run_rows(r: &EmpiricalReport) -> Vec<Vec<String>> {
    r.runs
        .iter()
        .map(|x| {
            vec![
                x.init.to_string(),
                opt_num(x.fit),
                x.iterations.to_string(),
                x.converged.to_string(),
                x.kept.to_string(),
                opt_num(x.congruence_to_truth),
                x.error.clone().unwrap_or_default(),
            ]
        })
        .collect()
}

fn empirical_table(r: &EmpiricalReport, rows: &[Vec<String>]) -> String {
    let mut out = format!(
        "ALS fits of a random {} tensor, R = {}, {} field, seed {}\n\n",
        dims_label(&r.spec.dims),
        r.spec.rank,
        r.spec.field,
        r.spec.seed
    );
    out += &table(
        &[
            "init",
            "fit",
            "iterations",
            "converged",
            "kept",
            "congruence",
            "error",
        ],
        rows,
    );
    out += &format!(
        "\nkept runs: {} of {} (fit >= 1 - {})\nsmallest congruence between kept runs: {}\nverdict: {}\n",
        r.kept_runs,
        r.runs.len(),
        num(r.thresholds.fit_gate_factor * r.options.fit_tol),
        r.min_pairwise_congruence.map(num).unwrap_or_else(|| "-".into()),
        tag(&r.verdict)
    );
    out
}
