//! `qml verify`: the structural checks run over every member of a class.

use qml_core::analysis::{clique_number, verify_energy, zero_part_cycles, zero_part_valency};
use qml_core::enumeration::{generate_members, mutation_class_with, ClassOptions};
use qml_core::json::quiver_to_value;
use qml_core::reduction::reduce_to_line;
use qml_core::{linear_quiver, mutate_power, CanonicalForm, ColouredQuiver};
use serde_json::{json, Value};

use crate::{CliResult, Report};

pub const DESK_CASES: [(usize, u32); 6] = [(2, 1), (3, 1), (4, 1), (2, 2), (3, 2), (4, 2)];

fn check(pass: bool, detail: Value) -> Value {
    let mut v = detail;
    v["pass"] = json!(pass);
    v
}

fn first_offender(qs: &[&ColouredQuiver]) -> Value {
    qs.first().map_or(Value::Null, |q| quiver_to_value(q))
}

pub fn verify_case(n: usize, m: u32, limit: usize, budget: u128) -> CliResult<Value> {
    let seed = linear_quiver(n, m, None)?;
    let opts = ClassOptions { limit, check_membership: true, ..ClassOptions::default() };
    let class = mutation_class_with(&seed, &opts)?;
    let members = &class.representatives;
    let mut checks = serde_json::Map::new();

    let generated = generate_members(n, m, budget)?;
    let reached = class.form_set();
    let only_in_class: Vec<ColouredQuiver> = reached.difference(&generated).map(CanonicalForm::to_quiver).collect();
    let only_generated: Vec<ColouredQuiver> = generated.difference(&reached).map(CanonicalForm::to_quiver).collect();
    checks.insert(
        "class_equals_members".into(),
        check(
            only_in_class.is_empty() && only_generated.is_empty(),
            json!({
                "class_size": reached.len(),
                "generated_size": generated.len(),
                "only_in_class": only_in_class.len(),
                "only_generated": only_generated.len(),
            }),
        ),
    );

    checks.insert(
        "closure".into(),
        check(
            class.closure_failures.is_empty(),
            json!({"checked": class.membership_checked, "failures": class.closure_failures.len()}),
        ),
    );

    let mut period_bad = Vec::new();
    for q in members {
        for v in 0..n {
            if mutate_power(q, v, u64::from(m) + 1)? != *q {
                period_bad.push(q);
                break;
            }
        }
    }
    checks.insert(
        "period".into(),
        check(period_bad.is_empty(), json!({"failures": period_bad.len(), "example": first_offender(&period_bad)})),
    );

    let mut energy_bad = Vec::new();
    let mut cliques = 0usize;
    let mut omega = 0usize;
    let mut cycle_bad = Vec::new();
    let mut valency_bad = Vec::new();
    for q in members {
        let report = verify_energy(q)?;
        cliques += report.cliques.len();
        if !report.all_pass() {
            energy_bad.push(q);
        }
        omega = omega.max(clique_number(q)?);
        if !zero_part_cycles(q)?.bad_cycles.is_empty() {
            cycle_bad.push(q);
        }
        if !zero_part_valency(q)?.bad_vertices.is_empty() {
            valency_bad.push(q);
        }
    }
    checks.insert(
        "energy".into(),
        check(
            energy_bad.is_empty(),
            json!({"cliques": cliques, "failures": energy_bad.len(), "example": first_offender(&energy_bad)}),
        ),
    );
    let bound = m as usize + 2;
    checks.insert("clique_bound".into(), check(omega <= bound, json!({"max_omega": omega, "bound": bound})));
    checks.insert(
        "zero_part".into(),
        check(
            cycle_bad.is_empty() && valency_bad.is_empty(),
            json!({"bad_cycles": cycle_bad.len(), "bad_valency": valency_bad.len()}),
        ),
    );

    let mut reduce_bad = Vec::new();
    let mut longest = 0usize;
    for q in members {
        let ok = match reduce_to_line(q) {
            Ok((line, seq)) => {
                longest = longest.max(seq.len());
                line.is_line() && seq.apply(q)? == line && seq.inverse_in_class(m).apply(&line)? == *q
            }
            Err(_) => false,
        };
        if !ok {
            reduce_bad.push(q);
        }
    }
    checks.insert(
        "reduction".into(),
        check(
            reduce_bad.is_empty(),
            json!({"failures": reduce_bad.len(), "longest_sequence": longest, "example": first_offender(&reduce_bad)}),
        ),
    );

    let pass = checks.values().all(|c| c["pass"] == json!(true));
    Ok(json!({"n": n, "m": m, "pass": pass, "checks": checks}))
}

pub fn run(cases: &[(usize, u32)], limit: usize, budget: u128) -> CliResult<Report> {
    let mut results = Vec::with_capacity(cases.len());
    let mut lines = Vec::new();
    for &(n, m) in cases {
        let r = verify_case(n, m, limit, budget)?;
        let failed: Vec<&str> = r["checks"]
            .as_object()
            .map(|o| o.iter().filter(|(_, c)| c["pass"] != json!(true)).map(|(k, _)| k.as_str()).collect())
            .unwrap_or_default();
        lines.push(if failed.is_empty() {
            format!("n={n} m={m}: ok ({} members)", r["checks"]["class_equals_members"]["class_size"])
        } else {
            format!("n={n} m={m}: FAILED {}", failed.join(", "))
        });
        results.push(r);
    }
    let pass = results.iter().all(|r| r["pass"] == json!(true));
    Ok(Report { json: json!({"pass": pass, "cases": results}), summary: lines.join("\n"), ok: pass })
}
