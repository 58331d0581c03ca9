//! Repair sets, sequential repair schedules and the exact-LRC predicate.
//!
//! Two independent routes answer the same questions. The span route
//! ([`find_repair_set`], [`is_e_r_repairable`]) tests span membership for
//! every candidate set directly. The index route ([`RepairIndex`]) lists all
//! inclusion-minimal repair sets once and answers queries by mask
//! containment; [`is_elrc`] runs on the index and cross-checks a sample of
//! erasure sets against the span route.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{in_span, BitVec, LinearCode};
use crate::report::braces;
use crate::subsets::{binomial, binomial_sum, check_mask_len, items_of, mask_of, Combinations, Mask};

fn check_coords(code: &LinearCode, coords: &[usize]) -> Result<()> {
    match coords.iter().find(|&&c| c >= code.n()) {
        Some(&c) => Err(Error::Coordinate {
            coord: c,
            len: code.n(),
        }),
        None => Ok(()),
    }
}

fn sorted_set(coords: &[usize]) -> Vec<usize> {
    let mut v = coords.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Smallest `R ⊆ allowed`, `|R| <= r`, whose generator columns span column
/// `i`; ties go to the lexicographically least set. The empty set repairs a
/// zero column.
pub fn find_repair_set(code: &LinearCode, i: usize, allowed: &[usize], r: usize) -> Result<Option<Vec<usize>>> {
    check_coords(code, &[i])?;
    check_coords(code, allowed)?;
    let allowed = sorted_set(allowed);
    if allowed.contains(&i) {
        return Err(Error::Invalid(format!(
            "coordinate {} cannot help repair itself",
            i + 1
        )));
    }
    let target = code.column(i);
    for size in 0..=r.min(allowed.len()) {
        for pick in Combinations::new(allowed.len(), size) {
            let cols: Vec<BitVec> = pick.iter().map(|&p| code.column(allowed[p]).clone()).collect();
            if in_span(target, &cols)? {
                return Ok(Some(pick.iter().map(|&p| allowed[p]).collect()));
            }
        }
    }
    Ok(None)
}

/// Sequential repair: `order[l]` is rebuilt from `sets[l]`, which may use
/// surviving coordinates and coordinates repaired earlier.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RepairSchedule {
    pub order: Vec<usize>,
    pub sets: Vec<Vec<usize>>,
}

impl RepairSchedule {
    /// Re-checks the schedule against the code from scratch.
    pub fn is_valid(&self, code: &LinearCode, erased: &[usize], r: usize) -> bool {
        let erased = sorted_set(erased);
        let mut order = self.order.clone();
        order.sort_unstable();
        if order != erased || self.sets.len() != self.order.len() {
            return false;
        }
        let mut live: Vec<bool> = (0..code.n()).map(|c| !erased.contains(&c)).collect();
        for (&i, set) in self.order.iter().zip(&self.sets) {
            if set.len() > r || set.iter().any(|&j| j >= code.n() || !live[j]) {
                return false;
            }
            let cols: Vec<BitVec> = set.iter().map(|&j| code.column(j).clone()).collect();
            if !in_span(code.column(i), &cols).unwrap_or(false) {
                return false;
            }
            live[i] = true;
        }
        true
    }
}

/// Greedy sequential repair over the span route: at each step the lowest
/// erased coordinate that has a repair set among the live coordinates is
/// repaired with its lexicographically least smallest set. Repairability
/// only grows as coordinates come back, so the greedy order never misses a
/// schedule.
pub fn is_e_r_repairable(code: &LinearCode, erased: &[usize], r: usize) -> Result<Option<RepairSchedule>> {
    check_coords(code, erased)?;
    let mut pending = sorted_set(erased);
    let mut live: Vec<usize> = (0..code.n()).filter(|c| !pending.contains(c)).collect();
    let mut schedule = RepairSchedule::default();
    while !pending.is_empty() {
        let mut step = None;
        for (pos, &i) in pending.iter().enumerate() {
            if let Some(set) = find_repair_set(code, i, &live, r)? {
                step = Some((pos, set));
                break;
            }
        }
        let Some((pos, set)) = step else {
            return Ok(None);
        };
        let i = pending.remove(pos);
        schedule.order.push(i);
        schedule.sets.push(set);
        live.push(i);
        live.sort_unstable();
    }
    Ok(Some(schedule))
}

/// All inclusion-minimal repair sets of size at most `r`, per coordinate.
///
/// A set is a minimal repair set of `i` exactly when it is minimal among
/// sets whose columns XOR to column `i`, so the index is built from the
/// zero-sum coordinate sets of size at most `r + 1`.
#[derive(Clone, Debug)]
pub struct RepairIndex {
    n: usize,
    r: usize,
    /// Sorted by size, then lexicographically.
    minimal: Vec<Vec<Mask>>,
}

impl RepairIndex {
    /// Requires `n <= 128`.
    pub fn build(code: &LinearCode, r: usize) -> Result<Self> {
        let n = code.n();
        check_mask_len(n)?;
        let cols: Vec<u128> = code
            .columns()
            .iter()
            .map(|c| {
                let w = c.words();
                w.first().copied().unwrap_or(0) as u128 | (w.get(1).copied().unwrap_or(0) as u128) << 64
            })
            .collect();
        let mut by_value: HashMap<u128, Vec<usize>> = HashMap::new();
        for (j, &v) in cols.iter().enumerate() {
            by_value.entry(v).or_default().push(j);
        }
        let mut candidates: Vec<Vec<Mask>> = vec![Vec::new(); n];
        let mut chosen = Vec::with_capacity(r);
        zero_sums(&cols, &by_value, r, 0, 0, &mut chosen, &mut |set: Mask| {
            for i in items_of(set) {
                candidates[i].push(set & !(1 << i));
            }
        });
        let minimal = candidates
            .into_iter()
            .map(|mut c| {
                c.sort_by_key(|&m| (m.count_ones(), items_of(m)));
                c.dedup();
                let mut kept: Vec<Mask> = Vec::new();
                for m in c {
                    if kept.iter().all(|&s| s & !m != 0) {
                        kept.push(m);
                    }
                }
                kept
            })
            .collect();
        Ok(RepairIndex { n, r, minimal })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Minimal repair sets of `i`, smallest first.
    pub fn minimal_sets(&self, i: usize) -> Vec<Vec<usize>> {
        self.minimal[i].iter().map(|&m| items_of(m)).collect()
    }

    pub(crate) fn first_within(&self, i: usize, live: Mask) -> Option<Mask> {
        self.minimal[i].iter().copied().find(|&s| s & live == s)
    }

    /// Smallest, then lexicographically least, repair set of `i` inside
    /// `allowed`. Agrees with [`find_repair_set`].
    pub fn find_within(&self, i: usize, allowed: &[usize]) -> Option<Vec<usize>> {
        self.first_within(i, mask_of(allowed) & !(1 << i)).map(items_of)
    }

    /// True iff some coordinate of `erased` has a repair set avoiding all of
    /// `erased`.
    pub fn some_repairable(&self, erased: &[usize]) -> bool {
        let live = !mask_of(erased);
        erased.iter().any(|&i| self.first_within(i, live).is_some())
    }

    /// True iff every nonempty subset of `erased` has a coordinate with a
    /// repair set avoiding that subset.
    pub fn peel_criterion(&self, erased: &[usize]) -> bool {
        let erased = sorted_set(erased);
        (1u64..1 << erased.len()).all(|sel| {
            let sub: Vec<usize> = (0..erased.len())
                .filter(|b| sel >> b & 1 == 1)
                .map(|b| erased[b])
                .collect();
            self.some_repairable(&sub)
        })
    }

    /// Greedy schedule from the index; same choices as
    /// [`is_e_r_repairable`].
    pub fn schedule(&self, erased: &[usize]) -> Option<RepairSchedule> {
        let mut pending = sorted_set(erased);
        let mut live = !mask_of(&pending);
        let mut schedule = RepairSchedule::default();
        while !pending.is_empty() {
            let (pos, set) = pending
                .iter()
                .enumerate()
                .find_map(|(pos, &i)| self.first_within(i, live).map(|s| (pos, s)))?;
            let i = pending.remove(pos);
            live |= 1 << i;
            schedule.order.push(i);
            schedule.sets.push(items_of(set));
        }
        Some(schedule)
    }
}

/// Depth-first search over ascending index lists of length at most `r`; each
/// list is closed by any later column equal to its XOR.
fn zero_sums(
    cols: &[u128],
    by_value: &HashMap<u128, Vec<usize>>,
    r: usize,
    start: usize,
    acc: u128,
    chosen: &mut Vec<usize>,
    emit: &mut impl FnMut(Mask),
) {
    if let Some(closers) = by_value.get(&acc) {
        let base = mask_of(chosen);
        for &j in closers.iter().filter(|&&j| j >= start) {
            emit(base | 1 << j);
        }
    }
    if chosen.len() == r {
        return;
    }
    for j in start..cols.len() {
        chosen.push(j);
        zero_sums(cols, by_value, r, j + 1, acc ^ cols[j], chosen, emit);
        chosen.pop();
    }
}

/// An erasure set that defeats the code, with the reason.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub erased: Vec<usize>,
    pub reason: String,
}

/// Per-coordinate count of minimal repair sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusEntry {
    pub coordinate: usize,
    pub minimal_sets: usize,
    pub smallest: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub verdict: bool,
    /// Nonempty erasure sets examined.
    pub checked: u64,
    /// In enumeration order: by size, then lexicographically.
    pub failures: Vec<Failure>,
    pub census: Vec<CensusEntry>,
    /// Erasure sets also decided by the span-route schedule search.
    pub cross_checked: usize,
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict={}", self.verdict)?;
        writeln!(f, "checked={}", self.checked)?;
        for fail in &self.failures {
            writeln!(f, "FAIL E={} reason={}", braces(&fail.erased), fail.reason)?;
        }
        Ok(())
    }
}

/// Erasure sets checked against the span route in [`is_elrc`].
pub const CROSS_CHECK_SAMPLES: usize = 16;

/// Work estimate used for the budget: `C(n, t) * C(n, r)` span checks.
pub fn elrc_work_estimate(n: usize, r: usize, t: usize) -> u64 {
    binomial(n, t).saturating_mul(binomial(n, r))
}

const NO_LOCAL_REPAIR: &str = "no erased coordinate has a repair set avoiding E";

/// Decides whether every erasure set of size at most `t` can be repaired
/// sequentially with repair sets of size at most `r`, by checking that each
/// such set has a coordinate repairable from outside it.
pub fn is_elrc(code: &LinearCode, r: usize, t: usize, budget: u64) -> Result<VerificationReport> {
    let n = code.n();
    let needed = elrc_work_estimate(n, r, t);
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    let index = RepairIndex::build(code, r)?;
    let sets: Vec<Vec<usize>> = (1..=t.min(n)).flat_map(|s| Combinations::new(n, s)).collect();
    let verdicts: Vec<bool> = sets.par_iter().map(|e| index.some_repairable(e)).collect();
    let mut failures: Vec<Failure> = sets
        .iter()
        .zip(&verdicts)
        .filter(|(_, &ok)| !ok)
        .map(|(e, _)| Failure {
            erased: e.clone(),
            reason: NO_LOCAL_REPAIR.to_string(),
        })
        .collect();

    // Evenly spaced sample of the largest erasure sets, plus the first
    // failure if any.
    let largest: Vec<&Vec<usize>> = sets.iter().filter(|e| e.len() == t.min(n)).collect();
    let step = largest.len().div_ceil(CROSS_CHECK_SAMPLES).max(1);
    let mut sample: Vec<&Vec<usize>> = largest.into_iter().step_by(step).collect();
    if let Some(f) = failures.first() {
        sample.push(&f.erased);
    }
    let disagreements: Vec<Failure> = sample
        .par_iter()
        .map(|e| -> Result<Option<Failure>> {
            let by_span = is_e_r_repairable(code, e, r)?.is_some();
            let by_peel = index.peel_criterion(e);
            Ok((by_span != by_peel).then(|| Failure {
                erased: (*e).clone(),
                reason: format!("oracles disagree: schedule={by_span} peel={by_peel}"),
            }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let cross_checked = sample.len();
    failures.extend(disagreements);

    let census = (0..n)
        .map(|i| CensusEntry {
            coordinate: i,
            minimal_sets: index.minimal[i].len(),
            smallest: index.minimal[i].first().map(|m| m.count_ones() as usize),
        })
        .collect();
    Ok(VerificationReport {
        verdict: failures.is_empty(),
        checked: binomial_sum(n, 1, t),
        failures,
        census,
        cross_checked,
    })
}

/// True iff `candidate` agrees with `original` once `erased` is deleted and
/// `candidate` can repair `erased` sequentially.
pub fn is_repair_code(candidate: &LinearCode, original: &LinearCode, erased: &[usize], r: usize) -> Result<bool> {
    if candidate.n() != original.n() || candidate.k() != original.k() {
        return Err(Error::Dimension(format!(
            "candidate is [{}, {}], original is [{}, {}]",
            candidate.n(),
            candidate.k(),
            original.n(),
            original.k()
        )));
    }
    check_coords(original, erased)?;
    let erased = sorted_set(erased);
    if candidate.puncture(&erased)? != original.puncture(&erased)? {
        return Ok(false);
    }
    Ok(is_e_r_repairable(candidate, &erased, r)?.is_some())
}

/// One newcomer in a simulated repair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairStep {
    pub newcomer: usize,
    pub set: Vec<usize>,
    pub value: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairTrace {
    pub steps: Vec<RepairStep>,
    /// Coordinates left unrepaired when no further step was possible.
    pub stuck: Option<Vec<usize>>,
    /// The rebuilt word when every erasure was repaired.
    pub recovered: Option<BitVec>,
}

impl RepairTrace {
    pub fn succeeded(&self) -> bool {
        self.stuck.is_none()
    }

    /// Total symbols read by all newcomers.
    pub fn downloaded(&self) -> usize {
        self.steps.iter().map(|s| s.set.len()).sum()
    }

    /// Largest number of symbols read by a single newcomer.
    pub fn max_locality(&self) -> usize {
        self.steps.iter().map(|s| s.set.len()).max().unwrap_or(0)
    }
}

impl fmt::Display for RepairTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(
                f,
                "REPAIR i={} R={} value={}",
                s.newcomer + 1,
                braces(&s.set),
                u8::from(s.value)
            )?;
        }
        if let Some(stuck) = &self.stuck {
            writeln!(f, "STUCK E={}", braces(stuck))?;
        }
        Ok(())
    }
}

/// Erases `erased` from `codeword` and rebuilds it one coordinate at a
/// time, each newcomer reading at most `r` symbols.
pub fn simulate_failures(code: &LinearCode, codeword: &BitVec, erased: &[usize], r: usize) -> Result<RepairTrace> {
    let index = RepairIndex::build(code, r)?;
    simulate_with_index(&index, code, codeword, erased)
}

/// [`simulate_failures`] with a prebuilt index for `code`.
pub fn simulate_with_index(
    index: &RepairIndex,
    code: &LinearCode,
    codeword: &BitVec,
    erased: &[usize],
) -> Result<RepairTrace> {
    if index.n() != code.n() || codeword.len() != code.n() {
        return Err(Error::Dimension(format!(
            "codeword length {} does not match code length {}",
            codeword.len(),
            code.n()
        )));
    }
    if !code.contains(codeword)? {
        return Err(Error::Invalid("word is not a codeword".into()));
    }
    check_coords(code, erased)?;
    let mut pending = sorted_set(erased);
    let mut live = !mask_of(&pending);
    let mut state = codeword.clone();
    for &i in &pending {
        state.set(i, false);
    }
    let mut steps = Vec::new();
    while !pending.is_empty() {
        let found = pending
            .iter()
            .enumerate()
            .find_map(|(pos, &i)| index.first_within(i, live).map(|s| (pos, s)));
        let Some((pos, set)) = found else {
            return Ok(RepairTrace {
                steps,
                stuck: Some(pending),
                recovered: None,
            });
        };
        let i = pending.remove(pos);
        let set = items_of(set);
        let value = set.iter().fold(false, |acc, &j| acc ^ state.get(j));
        state.set(i, value);
        live |= 1 << i;
        steps.push(RepairStep {
            newcomer: i,
            set,
            value,
        });
    }
    Ok(RepairTrace {
        steps,
        stuck: None,
        recovered: Some(state),
    })
}
