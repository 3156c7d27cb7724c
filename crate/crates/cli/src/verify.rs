use a2k_core::coinv::{analyze, epsilon_lower_bound};
use a2k_core::gf::PrimePower;
use a2k_core::plane::PlaneContext;
use a2k_core::presentation::{is_s_invariant, validate, TrianglePresentation};
use serde::Serialize;

use crate::{to_json, AnalysisOpts, Failure, Output};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Status {
    Pass,
    Fail,
    /// Reported only; never affects the exit code.
    Info,
    Skip,
}

#[derive(Serialize)]
struct Line {
    name: &'static str,
    status: Status,
    detail: String,
}

#[derive(Serialize)]
struct VerifyReport {
    q: u32,
    origin: String,
    checks: Vec<Line>,
    conjecture: Option<&'static str>,
    passed: bool,
}

fn strict(name: &'static str, ok: bool, detail: impl Into<String>) -> Line {
    Line {
        name,
        status: if ok { Status::Pass } else { Status::Fail },
        detail: detail.into(),
    }
}

fn info(name: &'static str, detail: impl Into<String>) -> Line {
    Line {
        name,
        status: Status::Info,
        detail: detail.into(),
    }
}

fn decided(name: &'static str, v: Option<bool>, detail: &str) -> Line {
    match v {
        Some(ok) => strict(name, ok, detail),
        None => Line {
            name,
            status: Status::Skip,
            detail: "not decided".into(),
        },
    }
}

pub(crate) fn run(t: &TrianglePresentation, opts: &AnalysisOpts) -> Result<(), Failure> {
    let mut lines = Vec::new();
    let v = validate(t);
    lines.push(strict(
        "plane_axioms",
        v.lambda.passed,
        v.lambda
            .witness
            .as_ref()
            .map(|w| w.to_string())
            .unwrap_or_else(|| format!("{} lines of {} points", t.n(), t.q() + 1)),
    ));
    let singer = PrimePower::new(t.q() as u64)
        .map_err(|e| e.to_string())
        .and_then(|pp| PlaneContext::new(pp).map_err(|e| e.to_string()))
        .and_then(|pl| pl.verify().map_err(|e| e.to_string()));
    lines.push(strict(
        "difference_set",
        singer.is_ok(),
        singer.err().unwrap_or_else(|| "trace-zero set is a perfect difference set".into()),
    ));
    lines.push(strict(
        "triangle_axioms",
        v.is_valid(),
        v.first_failure()
            .unwrap_or_else(|| format!("|T| = {}", v.size)),
    ));
    lines.push(info(
        "s_invariance",
        if is_s_invariant(t) { "invariant" } else { "not invariant" },
    ));

    let mut conjecture = None;
    if v.is_valid() {
        let report = analyze(t, &opts.config())?;
        let c = &report.checks;
        let m_detail = match report.m_subset_size {
            Some(k) => format!("|M| = {k}"),
            None if report.warnings.iter().any(|w| w.contains("M-subset")) => {
                "search budget exhausted".into()
            }
            None => "none exists".into(),
        };
        if t.origin().is_generated() {
            lines.push(strict("m_subset", c.m_subset_found, m_detail));
        } else {
            lines.push(info("m_subset", m_detail));
        }
        lines.push(strict(
            "lemma_q2",
            c.lemma_q2,
            format!("ord(eps) = {}", report.epsilon_order.0),
        ));
        lines.push(strict(
            "lower_bound",
            c.lower_bound,
            format!("bound {}", epsilon_lower_bound(t.q())),
        ));
        lines.push(decided(
            "q_minus_1_kills_eps",
            c.q_minus_1_kills_epsilon,
            "ord(eps) | q-1",
        ));
        lines.push(decided("scheme_agreement", c.scheme_agreement, "acb = bcd"));
        lines.push(strict(
            "gamma_ab",
            c.gamma_ab_divisibility,
            "|A_T/<eps>| divides |Gamma_ab|",
        ));
        lines.push(decided(
            "order_methods",
            c.order_methods_agree,
            "quotient ratio = Smith transform",
        ));
        lines.push(info("group", format!("A_T = {}", report.group_string())));
        conjecture = Some(if report.conjecture_holds() {
            "CONJECTURE-HOLDS"
        } else {
            "CONJECTURE-FAILS"
        });
    }

    let passed = lines.iter().all(|l| l.status != Status::Fail);
    let out = VerifyReport {
        q: t.q(),
        origin: t.origin().to_string(),
        checks: lines,
        conjecture,
        passed,
    };
    match opts.output {
        Output::Json => println!("{}", to_json(&out)),
        Output::Text => {
            println!("verify q={} origin={}", out.q, out.origin);
            for l in &out.checks {
                let tag = match l.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Info => "INFO",
                    Status::Skip => "SKIP",
                };
                println!("{tag}  {:<20} {}", l.name, l.detail);
            }
            if let Some(c) = out.conjecture {
                println!("{c}");
            }
        }
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}
