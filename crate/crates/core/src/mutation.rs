//! Coloured quiver mutation.
//!
//! Two independent routes compute `mu_j`:
//!
//! * [`mutate_steps`] runs the three-step procedure: compose every arrow into
//!   `j` with every colour-0 arrow out of `j`, cancel opposite colours until
//!   each ordered pair is monochromatic again, then rotate the colours of the
//!   arrows at `j`.
//! * [`mutate_formula`] evaluates the closed piecewise formula for each
//!   multiplicity `q~[i][k][c]`.
//!
//! All colour arithmetic is modulo `m + 1`.

use std::fmt;

use crate::classifier;
use crate::error::{QuiverError, Result};
use crate::quiver::{Colour, ColouredQuiver};

/// One mutation `mu_vertex^power`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MutationStep {
    pub vertex: usize,
    pub power: u32,
}

impl MutationStep {
    pub fn new(vertex: usize, power: u32) -> Self {
        Self { vertex, power }
    }
}

/// Steps applied left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MutationSequence {
    pub steps: Vec<MutationStep>,
}

impl MutationSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    /// Appends `mu_vertex^power` with the power reduced into `[0, m]`; a zero
    /// power is dropped and a repeat of the previous vertex is merged into it.
    pub fn push_normalized(&mut self, vertex: usize, power: u64, m: u32) {
        let period = u64::from(m) + 1;
        let mut power = (power % period) as u32;
        if let Some(last) = self.steps.last_mut() {
            if last.vertex == vertex {
                power = ((u64::from(last.power) + u64::from(power)) % period) as u32;
                self.steps.pop();
            }
        }
        if power != 0 {
            self.steps.push(MutationStep { vertex, power });
        }
    }

    pub fn extend_normalized(&mut self, other: &MutationSequence, m: u32) {
        for s in &other.steps {
            self.push_normalized(s.vertex, u64::from(s.power), m);
        }
    }

    /// The inverse on class members: steps reversed, each power `t` replaced
    /// by `m + 1 - t`.
    pub fn inverse_in_class(&self, m: u32) -> MutationSequence {
        let mut out = MutationSequence::new();
        for s in self.steps.iter().rev() {
            let t = s.power % (m + 1);
            out.push_normalized(s.vertex, u64::from(m + 1 - t), m);
        }
        out
    }

    /// Replays the sequence with [`mutate_steps`].
    pub fn apply(&self, q: &ColouredQuiver) -> Result<ColouredQuiver> {
        q.ensure_valid()?;
        let mut cur = q.clone();
        for s in &self.steps {
            check_vertex(&cur, s.vertex)?;
            for _ in 0..s.power {
                cur = mutate_unchecked(&cur, s.vertex)?;
            }
        }
        Ok(cur)
    }

    /// Every intermediate quiver, one per single mutation, starting with `q`.
    pub fn trace(&self, q: &ColouredQuiver) -> Result<Vec<ColouredQuiver>> {
        q.ensure_valid()?;
        let mut states = vec![q.clone()];
        for s in &self.steps {
            check_vertex(q, s.vertex)?;
            for _ in 0..s.power {
                let next = mutate_unchecked(states.last().unwrap(), s.vertex)?;
                states.push(next);
            }
        }
        Ok(states)
    }
}

impl fmt::Display for MutationSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return write!(f, "id");
        }
        for (k, s) in self.steps.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "mu{}^{}", s.vertex + 1, s.power)?;
        }
        Ok(())
    }
}

fn check_vertex(q: &ColouredQuiver, j: usize) -> Result<()> {
    if j >= q.n() {
        Err(QuiverError::VertexOutOfRange { vertex: j, n: q.n() })
    } else {
        Ok(())
    }
}

/// Coloured mutation at `j` by the three-step procedure.
pub fn mutate_steps(q: &ColouredQuiver, j: usize) -> Result<ColouredQuiver> {
    q.ensure_valid()?;
    check_vertex(q, j)?;
    mutate_unchecked(q, j)
}

/// [`mutate_steps`] without validating its input. The caller guarantees that
/// `q` is valid and `j` in range; mutation preserves validity.
pub(crate) fn mutate_unchecked(q: &ColouredQuiver, j: usize) -> Result<ColouredQuiver> {
    let n = q.n();
    let m = q.m();
    let mut next = q.clone();

    // (1) i -(c)-> j -(0)-> k with i != k contributes i -(c)-> k and k -(m-c)-> i.
    for i in (0..n).filter(|&i| i != j) {
        for c in 0..=m {
            let into = q.mult(i, j, c);
            if into == 0 {
                continue;
            }
            for k in (0..n).filter(|&k| k != j && k != i) {
                let out = q.mult(j, k, 0);
                if out == 0 {
                    continue;
                }
                let added = into.checked_mul(out).ok_or(QuiverError::MultiplicityOverflow)?;
                for (a, b, colour) in [(i, k, c), (k, i, m - c)] {
                    let sum = next.mult(a, b, colour).checked_add(added).ok_or(QuiverError::MultiplicityOverflow)?;
                    next.set_mult(a, b, colour, sum);
                }
            }
        }
    }

    // (2) cancel arrows of distinct colours pairwise. Only pairs avoiding j changed.
    for i in (0..n).filter(|&i| i != j) {
        for k in (0..n).filter(|&k| k != j && k != i) {
            cancel_pair(&mut next, i, k);
        }
    }

    // (3) rotate colours at j: +1 on arrows into j, -1 on arrows out of j.
    for i in (0..n).filter(|&i| i != j) {
        let into: Vec<u32> = (0..=m).map(|c| q.mult(i, j, c)).collect();
        let out: Vec<u32> = (0..=m).map(|c| q.mult(j, i, c)).collect();
        for c in 0..=m {
            next.set_mult(i, j, (c + 1) % (m + 1), into[c as usize]);
            next.set_mult(j, i, (c + m) % (m + 1), out[c as usize]);
        }
    }
    Ok(next)
}

/// Cancels arrows `i -> k` one against one across distinct colours until the
/// pair is monochromatic. With two colours present this subtracts the smaller
/// multiplicity from both. With more colours the surviving colour, if any, is
/// the one whose multiplicity exceeds all the others combined.
fn cancel_pair(q: &mut ColouredQuiver, i: usize, k: usize) {
    let m = q.m();
    let counts: Vec<u32> = (0..=m).map(|c| q.mult(i, k, c)).collect();
    let total: u32 = counts.iter().sum();
    if counts.iter().filter(|&&x| x > 0).count() <= 1 {
        return;
    }
    for c in 0..=m {
        let own = counts[c as usize];
        let rest = total - own;
        q.set_mult(i, k, c, own.saturating_sub(rest));
    }
}

/// Coloured mutation at `j` by the closed formula:
///
/// ```text
/// q~[i][j][c] = q[i][j][c-1]
/// q~[j][k][c] = q[j][k][c+1]
/// q~[i][k][c] = max(0, q[i][k][c] - sum_{t != c} q[i][k][t]
///                      + (q[i][j][c] - q[i][j][c-1]) q[j][k][0]
///                      + q[i][j][m] (q[j][k][c] - q[j][k][c+1]))   i, j, k distinct
/// ```
///
/// Superscripts are taken modulo `m + 1`.
pub fn mutate_formula(q: &ColouredQuiver, j: usize) -> Result<ColouredQuiver> {
    q.ensure_valid()?;
    check_vertex(q, j)?;
    let n = q.n();
    let m = q.m();
    let p = m + 1;
    let up = |c: Colour| (c + 1) % p;
    let down = |c: Colour| (c + m) % p;
    let get = |i: usize, k: usize, c: Colour| i64::from(q.mult(i, k, c));

    let mut out = ColouredQuiver::new(m, n)?;
    for i in 0..n {
        for k in 0..n {
            if i == k {
                continue;
            }
            for c in 0..=m {
                let value = if k == j {
                    get(i, j, down(c))
                } else if i == j {
                    get(j, k, up(c))
                } else {
                    let others: i64 = (0..=m).filter(|&t| t != c).map(|t| get(i, k, t)).sum();
                    let v = get(i, k, c) - others
                        + (get(i, j, c) - get(i, j, down(c))) * get(j, k, 0)
                        + get(i, j, m) * (get(j, k, c) - get(j, k, up(c)));
                    v.max(0)
                };
                let value = u32::try_from(value).map_err(|_| QuiverError::MultiplicityOverflow)?;
                out.set_mult(i, k, c, value);
            }
        }
    }
    Ok(out)
}

/// `mu_j` applied `t` times.
pub fn mutate_power(q: &ColouredQuiver, j: usize, t: u64) -> Result<ColouredQuiver> {
    q.ensure_valid()?;
    check_vertex(q, j)?;
    let mut cur = q.clone();
    for _ in 0..t {
        cur = mutate_unchecked(&cur, j)?;
    }
    Ok(cur)
}

/// `mu_j^t` for a quiver the caller asserts to be a class member, where
/// `mu_j^(m+1)` is the identity and the power can be reduced.
pub fn mutate_power_in_class(q: &ColouredQuiver, j: usize, t: u64) -> Result<ColouredQuiver> {
    mutate_power(q, j, t % (u64::from(q.m()) + 1))
}

/// Inverse of `mu_j` on class members, `mu_j^m`. Checks membership first
/// unless `check_membership` is false.
pub fn inverse_in_class(q: &ColouredQuiver, j: usize, check_membership: bool) -> Result<ColouredQuiver> {
    if check_membership {
        let verdict = classifier::is_member(q)?;
        if !verdict.member {
            return Err(QuiverError::NotMember(Box::new(verdict)));
        }
    }
    mutate_power(q, j, u64::from(q.m()))
}
