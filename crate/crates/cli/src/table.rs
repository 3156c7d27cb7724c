use a2k_core::coinv::{
    analyze, epsilon_lower_bound, matches_prediction, predicted_formula, TitsVariant,
};
use a2k_core::gf::PrimePower;
use rayon::prelude::*;
use serde::Serialize;

use crate::{generate, to_json, AnalysisOpts, Base, Failure, Output, Variant};

#[derive(Serialize)]
struct Row {
    q: u32,
    p: u32,
    r: u32,
    variant: &'static str,
    computed: Option<String>,
    predicted: String,
    epsilon_order: Option<String>,
    predicted_epsilon_order: u64,
    checks_passed: bool,
    verdict: &'static str,
    error: Option<String>,
}

#[derive(Serialize)]
struct Table {
    rows: Vec<Row>,
    all_match: bool,
}

fn row(pp: PrimePower, variant: TitsVariant, opts: &AnalysisOpts) -> Row {
    let (name, cli_variant) = match variant {
        TitsVariant::T0 => ("t0", Variant::T0),
        TitsVariant::T0Dual => ("t0dual", Variant::T0dual),
    };
    let result = generate(pp.q() as u64, cli_variant, Base::T0)
        .map_err(|e| match e {
            Failure::Usage(m) => m,
            Failure::Check => "check failed".into(),
        })
        .and_then(|t| analyze(&t, &opts.config()).map_err(|e| e.to_string()));
    let mut out = Row {
        q: pp.q(),
        p: pp.p(),
        r: pp.r(),
        variant: name,
        computed: None,
        predicted: predicted_formula(pp, variant),
        epsilon_order: None,
        predicted_epsilon_order: epsilon_lower_bound(pp.q()),
        checks_passed: false,
        verdict: "MISMATCH",
        error: None,
    };
    match result {
        Ok(report) => {
            out.computed = Some(report.group_string());
            out.epsilon_order = Some(report.epsilon_order.0.to_string());
            out.checks_passed = report.checks.all_passed();
            if matches_prediction(&report, pp, variant) {
                out.verdict = "MATCH";
            }
        }
        Err(e) => out.error = Some(e),
    }
    out
}

pub(crate) fn run(lo: u64, hi: u64, jobs: Option<usize>, opts: &AnalysisOpts) -> Result<(), Failure> {
    let qs = PrimePower::in_range(lo, hi);
    if qs.is_empty() {
        return Err(Failure::Usage(format!("no prime powers in {lo}..={hi}")));
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = pool.build()?;
    let per_q: Vec<[Row; 2]> = pool.install(|| {
        qs.par_iter()
            .map(|&pp| [row(pp, TitsVariant::T0, opts), row(pp, TitsVariant::T0Dual, opts)])
            .collect()
    });
    let rows: Vec<Row> = per_q.into_iter().flatten().collect();
    let all_match = rows.iter().all(|r| r.verdict == "MATCH");
    match opts.output {
        Output::Json => println!("{}", to_json(&Table { rows, all_match })),
        Output::Text => {
            let cell = |r: &Row| match (&r.computed, &r.error) {
                (Some(c), _) => c.clone(),
                (None, Some(e)) => format!("error: {e}"),
                (None, None) => "?".into(),
            };
            let cw = rows.iter().map(|r| cell(r).len()).max().unwrap_or(0).max(8);
            let pw = rows.iter().map(|r| r.predicted.len()).max().unwrap_or(0).max(9);
            println!(
                "{:>3}  {:<7}  {:<cw$}  {:<pw$}  {:>8}  verdict",
                "q", "variant", "computed", "predicted", "ord(eps)"
            );
            for r in &rows {
                println!(
                    "{:>3}  {:<7}  {:<cw$}  {:<pw$}  {:>8}  {}",
                    r.q,
                    r.variant,
                    cell(r),
                    r.predicted,
                    r.epsilon_order.as_deref().unwrap_or("-"),
                    r.verdict
                );
            }
        }
    }
    if all_match {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}
