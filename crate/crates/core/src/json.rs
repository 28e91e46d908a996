//! The JSON file formats. Vertices are 1-based.
//!
//! A quiver is `{"m":2,"n":3,"arrows":[{"from":1,"to":2,"colour":0,"mult":1}]}`
//! listing only arrows with `from < to`; the partner arrows follow from
//! skew-symmetry. Writers sort arrows by `(from, to, colour)` and emit no
//! whitespace, so equal quivers serialize to equal bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analysis::{CycleCheck, EnergyReport, ValencyCheck, ZeroPart};
use crate::classifier::{Failure, MembershipVerdict};
use crate::error::{QuiverError, Result};
use crate::mutation::{MutationSequence, MutationStep};
use crate::quiver::{ColouredQuiver, ValidationReport, Violation};
use crate::reduction::{CliqueKind, ExtremalWitness};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowDto {
    pub from: usize,
    pub to: usize,
    pub colour: u32,
    #[serde(default = "one")]
    pub mult: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverDto {
    pub m: u32,
    pub n: usize,
    #[serde(default)]
    pub arrows: Vec<ArrowDto>,
}

impl From<&ColouredQuiver> for QuiverDto {
    fn from(q: &ColouredQuiver) -> Self {
        let arrows =
            q.upper_arrows().map(|(i, j, c, mult)| ArrowDto { from: i + 1, to: j + 1, colour: c, mult }).collect();
        QuiverDto { m: q.m(), n: q.n(), arrows }
    }
}

impl TryFrom<&QuiverDto> for ColouredQuiver {
    type Error = QuiverError;

    /// Arrows given with `from > to` are read as their partner. Repeated
    /// entries for a pair must agree exactly.
    fn try_from(dto: &QuiverDto) -> Result<Self> {
        let mut q = ColouredQuiver::new(dto.m, dto.n)?;
        let mut seen: BTreeMap<(usize, usize), (u32, u32)> = BTreeMap::new();
        for a in &dto.arrows {
            for v in [a.from, a.to] {
                if v == 0 || v > dto.n {
                    return Err(QuiverError::Parse(format!("vertex {v} is not in 1..={}", dto.n)));
                }
            }
            if a.from == a.to {
                return Err(QuiverError::Parse(format!("loop at vertex {}", a.from)));
            }
            if a.colour > dto.m {
                return Err(QuiverError::Parse(format!("colour {} is not in 0..={}", a.colour, dto.m)));
            }
            if a.mult == 0 {
                continue;
            }
            let (i, j, c) = if a.from < a.to { (a.from, a.to, a.colour) } else { (a.to, a.from, dto.m - a.colour) };
            match seen.get(&(i, j)) {
                Some(&prev) if prev == (c, a.mult) => {}
                Some(&(pc, pm)) => {
                    return Err(QuiverError::Parse(format!(
                        "conflicting arrows between {i} and {j}: colour {pc} x{pm} from {i} to {j} and colour {c} x{} from {i} to {j}",
                        a.mult
                    )))
                }
                None => {
                    seen.insert((i, j), (c, a.mult));
                    q.add_pair(i - 1, j - 1, c, a.mult)?;
                }
            }
        }
        Ok(q)
    }
}

pub fn quiver_to_value(q: &ColouredQuiver) -> Value {
    serde_json::to_value(QuiverDto::from(q)).expect("quiver DTO serializes")
}

/// Canonical compact serialization.
pub fn quiver_to_string(q: &ColouredQuiver) -> String {
    serde_json::to_string(&QuiverDto::from(q)).expect("quiver DTO serializes")
}

pub fn quiver_from_str(s: &str) -> Result<ColouredQuiver> {
    let dto: QuiverDto = serde_json::from_str(s).map_err(|e| QuiverError::Parse(e.to_string()))?;
    ColouredQuiver::try_from(&dto)
}

pub fn quiver_from_value(v: &Value) -> Result<ColouredQuiver> {
    let dto: QuiverDto = serde_json::from_value(v.clone()).map_err(|e| QuiverError::Parse(e.to_string()))?;
    ColouredQuiver::try_from(&dto)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDto {
    pub vertex: usize,
    pub power: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceDto {
    pub steps: Vec<StepDto>,
}

impl From<&MutationSequence> for SequenceDto {
    fn from(s: &MutationSequence) -> Self {
        SequenceDto { steps: s.steps.iter().map(|st| StepDto { vertex: st.vertex + 1, power: st.power }).collect() }
    }
}

impl TryFrom<&SequenceDto> for MutationSequence {
    type Error = QuiverError;

    fn try_from(dto: &SequenceDto) -> Result<Self> {
        let mut steps = Vec::with_capacity(dto.steps.len());
        for s in &dto.steps {
            if s.vertex == 0 {
                return Err(QuiverError::Parse("vertices are numbered from 1".into()));
            }
            steps.push(MutationStep::new(s.vertex - 1, s.power));
        }
        Ok(MutationSequence { steps })
    }
}

pub fn sequence_to_value(s: &MutationSequence) -> Value {
    serde_json::to_value(SequenceDto::from(s)).expect("sequence DTO serializes")
}

pub fn sequence_from_str(s: &str) -> Result<MutationSequence> {
    let dto: SequenceDto = serde_json::from_str(s).map_err(|e| QuiverError::Parse(e.to_string()))?;
    MutationSequence::try_from(&dto)
}

fn labels(vs: &[usize]) -> Vec<usize> {
    vs.iter().map(|v| v + 1).collect()
}

pub fn failure_to_value(f: &Failure) -> Value {
    match f {
        Failure::NotSimple => json!({"kind": "not_simple"}),
        Failure::NotConnected => json!({"kind": "not_connected"}),
        Failure::Hole(c) => json!({"kind": "hole", "cycle": labels(c)}),
        Failure::BadVertexSplit(v) => json!({"kind": "bad_vertex_split", "vertex": v + 1}),
        Failure::BadTriangle { vertices, sums } => {
            json!({"kind": "bad_triangle", "vertices": labels(vertices), "sums": [sums.0, sums.1]})
        }
    }
}

pub fn verdict_to_value(v: &MembershipVerdict) -> Value {
    json!({
        "member": v.member,
        "failures": v.failures.iter().map(failure_to_value).collect::<Vec<_>>(),
    })
}

pub fn validation_to_value(r: &ValidationReport) -> Value {
    let violations: Vec<Value> = r
        .violations
        .iter()
        .map(|v| match v {
            Violation::Loop { vertex, colour, mult } => {
                json!({"kind": "loop", "vertex": vertex + 1, "colour": colour, "mult": mult})
            }
            Violation::Bichromatic { from, to, colours } => {
                json!({"kind": "bichromatic", "from": from + 1, "to": to + 1, "colours": colours})
            }
            Violation::SkewSymmetry { from, to, colour, mult, partner_mult } => json!({
                "kind": "skew_symmetry", "from": from + 1, "to": to + 1, "colour": colour,
                "mult": mult, "partner_mult": partner_mult,
            }),
        })
        .collect();
    json!({"valid": r.is_empty(), "violations": violations})
}

pub fn error_to_value(e: &QuiverError) -> Value {
    let mut v = json!({"error": e.to_string()});
    match e {
        QuiverError::Invalid(report) => v["validation"] = validation_to_value(report),
        QuiverError::NotMember(verdict) => v["verdict"] = verdict_to_value(verdict),
        QuiverError::BudgetExceeded { size, budget } => {
            v["search_size"] = json!(size.to_string());
            v["budget"] = json!(budget.to_string());
        }
        QuiverError::LimitExceeded { limit, explored } => {
            v["limit"] = json!(limit);
            v["explored"] = json!(explored);
        }
        _ => {}
    }
    v
}

pub fn energy_to_value(r: &EnergyReport) -> Value {
    let cliques: Vec<Value> = r
        .cliques
        .iter()
        .map(|c| {
            json!({
                "clique": labels(&c.clique),
                "k": c.clique.len(),
                "delta": c.delta,
                "expected_delta": c.expected_delta,
                "stray_weights": c.stray_weights,
                "pass": c.passes(),
            })
        })
        .collect();
    json!({"all_pass": r.all_pass(), "cliques": cliques})
}

pub fn zero_part_to_value(z: &ZeroPart) -> Value {
    let arrows: Vec<Value> = z.arrows.iter().map(|&(i, j)| json!({"from": i + 1, "to": j + 1})).collect();
    let cycles: Vec<Vec<usize>> = z.cycles().iter().map(|c| labels(c)).collect();
    let components: Vec<Vec<usize>> = z.components().iter().map(|c| labels(c)).collect();
    json!({"n": z.n, "arrows": arrows, "cycles": cycles, "components": components})
}

pub fn cycle_check_to_value(c: &CycleCheck) -> Value {
    json!({
        "cycles": c.cycles.iter().map(|x| labels(x)).collect::<Vec<_>>(),
        "bad_cycles": c.bad_cycles.iter().map(|x| labels(x)).collect::<Vec<_>>(),
        "pass": c.bad_cycles.is_empty(),
    })
}

pub fn valency_check_to_value(c: &ValencyCheck) -> Value {
    let bad: Vec<Value> = c.bad_vertices.iter().map(|&(v, i, o)| json!({"vertex": v + 1, "in": i, "out": o})).collect();
    json!({"max_in": c.max_in, "max_out": c.max_out, "bad_vertices": bad, "pass": bad.is_empty()})
}

pub fn witness_to_value(w: &ExtremalWitness) -> Value {
    let kind = match w.kind {
        CliqueKind::Extremal => "extremal",
        CliqueKind::AlmostExtremal => "almost_extremal",
    };
    json!({"clique": labels(&w.clique), "kind": kind, "tail": labels(&w.tail)})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::linear_quiver;

    #[test]
    fn writes_sorted_compact_arrows() {
        let line = linear_quiver(3, 2, Some(&[1, 0])).unwrap();
        assert_eq!(
            quiver_to_string(&line),
            r#"{"m":2,"n":3,"arrows":[{"from":1,"to":2,"colour":1,"mult":1},{"from":2,"to":3,"colour":0,"mult":1}]}"#
        );
    }

    #[test]
    fn reads_partner_arrows() {
        let text = r#"{"m":2,"n":2,"arrows":[{"from":2,"to":1,"colour":0},{"from":1,"to":2,"colour":2,"mult":1}]}"#;
        let q = quiver_from_str(text).unwrap();
        assert_eq!(q.colour(1, 0), Some(0));
        assert_eq!(q.colour(0, 1), Some(2));
    }

    #[test]
    fn rejects_conflicts_and_garbage() {
        let conflict = r#"{"m":2,"n":2,"arrows":[{"from":2,"to":1,"colour":0},{"from":1,"to":2,"colour":0}]}"#;
        assert!(matches!(quiver_from_str(conflict), Err(QuiverError::Parse(_))));
        let looped = r#"{"m":2,"n":2,"arrows":[{"from":2,"to":2,"colour":0}]}"#;
        assert!(matches!(quiver_from_str(looped), Err(QuiverError::Parse(_))));
        let range = r#"{"m":2,"n":2,"arrows":[{"from":1,"to":3,"colour":0}]}"#;
        assert!(matches!(quiver_from_str(range), Err(QuiverError::Parse(_))));
        let colour = r#"{"m":2,"n":2,"arrows":[{"from":1,"to":2,"colour":3}]}"#;
        assert!(matches!(quiver_from_str(colour), Err(QuiverError::Parse(_))));
        assert!(matches!(quiver_from_str("{"), Err(QuiverError::Parse(_))));
        assert!(quiver_from_str(r#"{"m":0,"n":2,"arrows":[]}"#).is_err());
    }

    #[test]
    fn multi_arrows_round_trip() {
        let mut q = ColouredQuiver::new(3, 3).unwrap();
        q.add_pair(2, 0, 1, 3).unwrap();
        let text = quiver_to_string(&q);
        assert!(text.contains(r#""colour":2,"mult":3"#));
        assert_eq!(quiver_from_str(&text).unwrap(), q);
    }

    #[test]
    fn sequences_are_one_based() {
        let mut s = MutationSequence::new();
        s.push_normalized(1, 2, 2);
        let v = sequence_to_value(&s);
        assert_eq!(v, json!({"steps": [{"vertex": 2, "power": 2}]}));
        assert_eq!(sequence_from_str(&v.to_string()).unwrap(), s);
        assert!(sequence_from_str(r#"{"steps":[{"vertex":0,"power":1}]}"#).is_err());
    }
}
