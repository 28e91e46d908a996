use std::path::Path;

use qml_core::analysis::{clique_number, energy_report, zero_part, zero_part_cycles, zero_part_valency};
use qml_core::enumeration::{mutation_class_with, ClassOptions, MutationClass};
use qml_core::json::{
    cycle_check_to_value, energy_to_value, quiver_from_str, quiver_to_value, sequence_from_str, sequence_to_value,
    valency_check_to_value, verdict_to_value, zero_part_to_value,
};
use qml_core::{is_member, linear_quiver, mutate_formula, mutate_power, ColouredQuiver, ExecMode, QuiverError};
use serde_json::{json, Value};

use crate::{read_input, CliError, CliResult, GraphFormat, Report};

/// A 1-based vertex label as an index, or a parse error naming the range.
pub fn vertex_index(label: usize, n: usize) -> Result<usize, QuiverError> {
    if label == 0 || label > n {
        Err(QuiverError::Parse(format!("vertex {label} is not in 1..={n}")))
    } else {
        Ok(label - 1)
    }
}

pub fn load_quiver(path: Option<&Path>) -> CliResult<ColouredQuiver> {
    Ok(quiver_from_str(&read_input(path)?)?)
}

pub fn mutate(
    input: Option<&Path>,
    vertex: Option<usize>,
    power: u64,
    sequence: Option<&Path>,
    formula: bool,
) -> CliResult<Report> {
    let q = load_quiver(input)?;
    let steps: Vec<(usize, u64)> = match (vertex, sequence) {
        (_, Some(path)) => {
            let seq = sequence_from_str(&read_input(Some(path))?)?;
            seq.steps.iter().map(|s| (s.vertex, u64::from(s.power))).collect()
        }
        (Some(v), None) => vec![(vertex_index(v, q.n())?, power)],
        (None, None) => unreachable!("clap requires --vertex or --sequence"),
    };
    let mut cur = q;
    for &(v, t) in &steps {
        vertex_index(v + 1, cur.n())?;
        cur = if formula {
            let mut x = cur;
            for _ in 0..t {
                x = mutate_formula(&x, v)?;
            }
            x
        } else {
            mutate_power(&cur, v, t)?
        };
    }
    let summary = format!("applied {} mutation step(s)", steps.len());
    Ok(Report::ok(quiver_to_value(&cur), summary))
}

pub fn classify(input: Option<&Path>) -> CliResult<Report> {
    let q = load_quiver(input)?;
    let verdict = is_member(&q)?;
    let summary = if verdict.member {
        format!("member of the class for n={}, m={}", q.n(), q.m())
    } else {
        format!("not a member: {verdict}")
    };
    Ok(Report::ok(verdict_to_value(&verdict), summary))
}

#[derive(Debug, Clone)]
pub struct EnumerateOptions {
    pub limit: usize,
    pub orbit_graph: Option<GraphFormat>,
    pub check_membership: bool,
    pub sequential: bool,
}

pub fn orbit_graph_value(class: &MutationClass) -> Value {
    let edges: Vec<Value> =
        class.edges.iter().map(|e| json!({"from": e.from, "vertex": e.vertex + 1, "to": e.to})).collect();
    json!({"nodes": class.len(), "edges": edges})
}

pub fn orbit_graph_dot(class: &MutationClass) -> String {
    let mut out = String::from("digraph orbit {\n");
    for i in 0..class.len() {
        out.push_str(&format!("  {i};\n"));
    }
    for e in &class.edges {
        out.push_str(&format!("  {} -> {} [label=\"{}\"];\n", e.from, e.to, e.vertex + 1));
    }
    out.push_str("}\n");
    out
}

pub fn class_value(class: &MutationClass) -> Value {
    let reps: Vec<Value> = class.representatives.iter().map(quiver_to_value).collect();
    json!({
        "n": class.seed.n(),
        "m": class.seed.m(),
        "count": class.len(),
        "representatives": reps,
    })
}

/// Enumerates from the line on `n` vertices or from a seed file.
pub fn enumerate(line: Option<(usize, u32)>, seed: Option<&Path>, opts: &EnumerateOptions) -> CliResult<Report> {
    let seed = match (line, seed) {
        (_, Some(path)) => load_quiver(Some(path))?,
        (Some((n, m)), None) => linear_quiver(n, m, None)?,
        (None, None) => unreachable!("clap requires --n/--m or --seed"),
    };
    let class_opts = ClassOptions {
        limit: opts.limit,
        check_membership: opts.check_membership,
        mode: if opts.sequential { ExecMode::Sequential } else { ExecMode::Parallel },
    };
    let class = mutation_class_with(&seed, &class_opts)?;
    let mut out = class_value(&class);
    if opts.check_membership {
        let failures: Vec<Value> =
            class.closure_failures.iter().map(|(i, v)| json!({"index": i, "verdict": verdict_to_value(v)})).collect();
        out["membership_checked"] = json!(class.membership_checked);
        out["closure_failures"] = json!(failures);
    }
    match opts.orbit_graph {
        Some(GraphFormat::Json) => out["orbit_graph"] = orbit_graph_value(&class),
        Some(GraphFormat::Dot) => out["orbit_graph"] = json!(orbit_graph_dot(&class)),
        None => {}
    }
    let summary = format!(
        "n={}, m={}: {} isomorphism classes, {} orbit edges",
        seed.n(),
        seed.m(),
        class.len(),
        class.edges.len()
    );
    let ok = class.closure_failures.is_empty();
    Ok(Report { json: out, summary, ok })
}

/// With no flags every analysis runs. The 0-part cycle and valency checks
/// only apply to members and are `null` otherwise.
pub fn analyze(input: Option<&Path>, energy: bool, zero: Option<GraphFormat>, omega: bool) -> CliResult<Report> {
    let q = load_quiver(input)?;
    let all = !energy && zero.is_none() && !omega;
    let verdict = is_member(&q)?;
    let mut out = json!({"n": q.n(), "m": q.m(), "member": verdict.member});
    let mut notes = vec![format!("member: {}", verdict.member)];
    if energy || all {
        let report = energy_report(&q)?;
        notes.push(format!("{} cliques checked, {} failing", report.cliques.len(), report.failures().count()));
        out["energy"] = energy_to_value(&report);
    }
    if omega || all {
        let w = clique_number(&q)?;
        let bound = q.m() as usize + 2;
        notes.push(format!("clique number {w} (bound {bound})"));
        out["clique_number"] = json!({"omega": w, "bound": bound, "within_bound": w <= bound});
    }
    if let Some(format) = zero.or(all.then_some(GraphFormat::Json)) {
        let z = zero_part(&q)?;
        let mut v = zero_part_to_value(&z);
        if verdict.member {
            v["cycle_check"] = cycle_check_to_value(&zero_part_cycles(&q)?);
            v["valency_check"] = valency_check_to_value(&zero_part_valency(&q)?);
        } else {
            v["cycle_check"] = Value::Null;
            v["valency_check"] = Value::Null;
        }
        if format == GraphFormat::Dot {
            v["dot"] = json!(z.to_dot());
        }
        notes.push(format!("0-part: {} arrows, {} cycles", z.arrows.len(), z.cycles().len()));
        out["zero_part"] = v;
    }
    Ok(Report::ok(out, notes.join("; ")))
}

pub fn reduce(input: Option<&Path>, verify: bool) -> CliResult<Report> {
    let q = load_quiver(input)?;
    let (line, seq) = qml_core::reduction::reduce_to_line(&q)?;
    let mut out = json!({"line": quiver_to_value(&line), "sequence": sequence_to_value(&seq)});
    if verify {
        let forward = seq.apply(&q)?;
        if forward != line {
            return Err(CliError::Check("forward replay does not reproduce the line".into()));
        }
        let back = seq.inverse_in_class(q.m()).apply(&line)?;
        if back != q {
            return Err(CliError::Check("inverse replay does not reproduce the input".into()));
        }
        out["verified"] = json!(true);
    }
    Ok(Report::ok(out, format!("reduced to a line in {} steps", seq.len())))
}
