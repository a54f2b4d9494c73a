//! JSON and plain-text renderings of command results.
//!
//! Big integers and rationals are emitted as strings ("3", "-1/4") so that
//! outputs stay exact; everything else uses plain JSON numbers and arrays.

use hyperbarrier::geometry::FpmOutcome;
use hyperbarrier::solver::BarrierReport;
use hyperbarrier::transferral::{EdgeMultiset, Transferral};
use hyperbarrier::Edge;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

pub fn rational(x: &BigRational) -> Value {
    Value::String(x.to_string())
}

pub fn bigint_row(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn edge_list(edges: &[Edge]) -> Value {
    json!(edges)
}

fn multiset(ms: &EdgeMultiset) -> Value {
    Value::Array(ms.iter().map(|(e, c)| json!({ "edge": e, "count": c })).collect())
}

fn multiset_text(ms: &EdgeMultiset) -> String {
    ms.iter().map(|(e, c)| format!("{c}x{e:?}")).collect::<Vec<_>>().join(" ")
}

pub fn report_json(report: &BarrierReport, n: usize, k: usize) -> Value {
    let space = report.space.as_ref().map(|c| {
        json!({
            "j": c.j,
            "s": c.s,
            "violation_count": c.violation_count,
            "regime": c.regime.as_str(),
        })
    });
    let divisibility = report.divisibility.as_ref().map(|c| {
        json!({
            "partition": c.partition.parts(),
            "lattice_basis": c.lattice.basis().iter().map(|r| bigint_row(r)).collect::<Vec<_>>(),
            "witness": bigint_row(&c.witness),
            "regime": c.regime.as_str(),
        })
    });
    json!({
        "command": "analyze",
        "n": n,
        "k": k,
        "params": {
            "beta": rational(&report.params.beta),
            "mu": rational(&report.params.mu),
            "min_part": report.params.min_part,
        },
        "outcome": report.outcome_label(),
        "exit_code": report.exit_code(),
        "matching": report.matching.as_ref().map(|m| json!({ "edges": edge_list(m.edges()) })),
        "space": space,
        "divisibility": divisibility,
    })
}

pub fn report_text(report: &BarrierReport, n: usize, k: usize) -> Vec<String> {
    let mut lines = vec![
        format!("instance: n={n} k={k}"),
        format!(
            "params: beta={} mu={} min_part={}",
            report.params.beta,
            report.params.mu,
            report.params.min_part.map_or_else(|| "auto".into(), |m| m.to_string()),
        ),
        format!("outcome: {}", report.outcome_label()),
    ];
    if let Some(m) = &report.matching {
        lines.push(format!("matching: {:?}", m.edges()));
    }
    if let Some(c) = &report.space {
        lines.push(format!(
            "space: j={} s={:?} violations={} regime={}",
            c.j,
            c.s,
            c.violation_count,
            c.regime.as_str()
        ));
    }
    if let Some(c) = &report.divisibility {
        lines.push(format!(
            "divisibility: partition={:?} witness={:?} regime={}",
            c.partition.parts(),
            c.witness.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            c.regime.as_str()
        ));
    }
    lines
}

pub fn fpm_json(outcome: &FpmOutcome, n: usize, k: usize) -> Value {
    match outcome {
        FpmOutcome::Matching(m) => {
            let weights: Vec<Value> = m
                .weights
                .iter()
                .map(|(e, w)| json!({ "edge": e, "weight": rational(w) }))
                .collect();
            json!({
                "command": "fpm",
                "n": n,
                "k": k,
                "outcome": "weights",
                "support_size": m.support_size(),
                "weights": weights,
            })
        }
        FpmOutcome::Certificate(c) => json!({
            "command": "fpm",
            "n": n,
            "k": k,
            "outcome": "farkas",
            "functional": c.a.iter().map(rational).collect::<Vec<_>>(),
        }),
    }
}

pub fn fpm_text(outcome: &FpmOutcome) -> Vec<String> {
    match outcome {
        FpmOutcome::Matching(m) => {
            let mut lines = vec![format!("outcome: weights (support {})", m.support_size())];
            for (e, w) in &m.weights {
                lines.push(format!("  {e:?}: {w}"));
            }
            lines
        }
        FpmOutcome::Certificate(c) => {
            let entries: Vec<String> = c.a.iter().map(|x| x.to_string()).collect();
            vec!["outcome: farkas".into(), format!("  functional: [{}]", entries.join(", "))]
        }
    }
}

pub fn transferral_json(
    u: usize,
    v: usize,
    b_max: usize,
    c_max: usize,
    found: Option<&Transferral>,
) -> Value {
    json!({
        "command": "transferral",
        "u": u,
        "v": v,
        "b_max": b_max,
        "c_max": c_max,
        "found": found.is_some(),
        "transferral": found.map(|t| json!({
            "b": t.b,
            "size": t.size(),
            "t": multiset(&t.t),
            "t_prime": multiset(&t.t_prime),
        })),
    })
}

pub fn transferral_text(u: usize, v: usize, b_max: usize, c_max: usize, found: Option<&Transferral>) -> Vec<String> {
    match found {
        Some(t) => vec![
            format!("({u},{v})-transferral: b={} size={}", t.b, t.size()),
            format!("  T : {}", multiset_text(&t.t)),
            format!("  T': {}", multiset_text(&t.t_prime)),
        ],
        None => vec![format!("no ({u},{v})-transferral with b<={b_max} size<={c_max}")],
    }
}
