//! Re-derives closed forms from the family partitions and compares them with
//! the catalog in [`crate::theorems`].
//!
//! Symbolic differences are always reported as derived minus stated.

mod report;

pub use report::{AuditReport, Finding, NumericSample, Summary, Verdict};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::families::{degree_classes, negative_count_scan, partition_counts_at, symbolic_edge_total, FamilyRegistry, FamilySpec};
use crate::forms::FormError;
use crate::indices::{
    average_sombor_for_family, index_on_partition, symbolic_index, thm17_formula_eval, Builtin, EdgeCountSource,
    IndexDefinition,
};
use crate::theorems::{closed_form_claims, theorem_claims, thm17_entries, ClosedFormClaim18, TheoremClaim, Thm17Entry};
use crate::{PiecewiseForm, RadicalNumber};

/// Relative tolerance for exact-versus-float agreement.
pub const REL_TOL: f64 = 1e-9;
/// Absolute tolerance for closed forms given with two decimals.
pub const APPROX_TOL: f64 = 0.05;
/// Axis values of the sample grid attached to symbolic findings.
pub const SAMPLE_AXIS: [i64; 5] = [1, 2, 3, 5, 10];
/// Side of the square grid used for pointwise checks.
pub const GRID_MAX: i64 = 10;

/// `|a - b| <= REL_TOL * max(1, |a|, |b|)`.
pub fn within_rel(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * 1f64.max(a.abs()).max(b.abs())
}

pub fn sample_points() -> Vec<(i64, i64)> {
    SAMPLE_AXIS.iter().flat_map(|&p| SAMPLE_AXIS.iter().map(move |&q| (p, q))).collect()
}

pub fn grid(max: i64) -> Vec<(i64, i64)> {
    (1..=max).flat_map(|p| (1..=max).map(move |q| (p, q))).collect()
}

fn is_valid_point(f: &FamilySpec, p: i64, q: i64) -> bool {
    matches!(f.negative_count_at(p, q), Ok(None))
}

fn not_applicable(check_id: &str, family: &str, note: impl Into<String>) -> Finding {
    let mut finding = Finding::new(check_id, family, Verdict::NotApplicable);
    finding.note = note.into();
    finding
}

/// Lists the nonzero coefficients of a restricted difference.
fn describe_difference(diff: &PiecewiseForm) -> String {
    let multi = !diff.is_single();
    let mut parts = Vec::new();
    for (region, piece) in diff.pieces() {
        for (name, c) in [("pq", &piece.pq), ("p", &piece.p), ("q", &piece.q), ("constant", &piece.constant)] {
            if c.is_zero() {
                continue;
            }
            if multi {
                parts.push(format!("{name} {c} on {region}"));
            } else {
                parts.push(format!("{name} {c}"));
            }
        }
    }
    if parts.is_empty() {
        "identical".to_string()
    } else {
        format!("derived minus stated: {}", parts.join(", "))
    }
}

fn samples_between(lhs: &PiecewiseForm, rhs: &PiecewiseForm, points: &[(i64, i64)]) -> Vec<NumericSample> {
    points
        .iter()
        .filter_map(|&(p, q)| {
            let a = lhs.eval_float::<f64>(p, q).ok()?;
            let b = rhs.eval_float::<f64>(p, q).ok()?;
            Some(NumericSample::new(p, q, a, b))
        })
        .collect()
}

/// Downgrades a symbolic match whose samples disagree numerically.
fn enforce_soundness(finding: &mut Finding) {
    if finding.verdict == Verdict::Match && finding.numeric_samples.iter().any(|s| !within_rel(s.lhs, s.rhs)) {
        finding.verdict = Verdict::Mismatch;
        finding.note.push_str("; numeric samples disagree beyond tolerance");
    }
}

/// Sum of the partition counts against the claimed edge total.
pub fn check_edge_totals(f: &FamilySpec) -> Finding {
    const ID: &str = "edge-total";
    let derived = match symbolic_edge_total(f) {
        Ok(d) => d,
        Err(e) => return not_applicable(ID, &f.name, e.to_string()),
    };
    let claimed = PiecewiseForm::single(f.claimed_edge_form.clone());
    let diff = derived.sub(&claimed).expect("a single form aligns with any partition");
    let mut finding = Finding::new(ID, &f.name, if diff.is_zero() { Verdict::Match } else { Verdict::Mismatch });
    finding.numeric_samples = samples_between(&derived, &claimed, &sample_points());
    finding.note = if diff.is_zero() {
        "partition sum equals the claimed edge total".to_string()
    } else {
        let regions: Vec<String> = diff
            .pieces()
            .iter()
            .filter(|(_, piece)| !piece.is_zero())
            .map(|(r, _)| r.to_string())
            .collect();
        format!("partition sum differs from the claimed edge total on {}", regions.join("; "))
    };
    finding.symbolic_difference = Some(diff);
    enforce_soundness(&mut finding);
    finding
}

/// Re-derived Sombor or reduced Sombor form against a stated one.
pub fn check_theorem_vs_partition(claim: &TheoremClaim, family: Option<&FamilySpec>) -> Finding {
    let id = format!("theorem-{:02}", claim.id);
    let Some(f) = family else {
        return not_applicable(&id, &claim.family, "family is not registered");
    };
    let derived = match symbolic_index(&IndexDefinition::builtin(claim.index), f) {
        Ok(d) => d,
        Err(e) => return not_applicable(&id, &claim.family, e.to_string()),
    };
    let mut finding = match derived.sub(&claim.stated_form) {
        Ok(diff) => {
            let verdict = if diff.is_zero() { Verdict::Match } else { Verdict::Mismatch };
            let mut finding = Finding::new(&id, &claim.family, verdict);
            finding.note = describe_difference(&diff);
            finding.symbolic_difference = Some(diff);
            finding.numeric_samples = samples_between(&derived, &claim.stated_form, &sample_points());
            finding
        }
        Err(FormError::RegionMismatch { left, right }) => {
            let mut finding = Finding::new(&id, &claim.family, Verdict::RegionMismatch);
            finding.numeric_samples = samples_between(&derived, &claim.stated_form, &grid(GRID_MAX));
            let agree = finding.numeric_samples.iter().filter(|s| within_rel(s.lhs, s.rhs)).count();
            finding.note = format!(
                "derived form branches as [{left}], stated form as [{right}]; pointwise agreement at {agree} of {} points in [1,{GRID_MAX}]^2",
                finding.numeric_samples.len()
            );
            finding
        }
        Err(e) => return not_applicable(&id, &claim.family, e.to_string()),
    };
    finding.note = format!("{}: {}", claim.index.name(), finding.note);
    if let Some(t) = &claim.transcription_note {
        finding.note.push_str("; transcription: ");
        finding.note.push_str(t);
    }
    enforce_soundness(&mut finding);
    finding
}

const SOURCES: [EdgeCountSource; 2] = [EdgeCountSource::PartitionSum, EdgeCountSource::ClaimedTotal];

/// Whether `A = 3 - 2m/n` on `[1, GRID_MAX]^2` for the given edge count.
fn a_consistent(entry: &Thm17Entry, f: &FamilySpec, source: EdgeCountSource) -> bool {
    let Ok(total) = symbolic_edge_total(f) else { return false };
    let three = BigRational::from_integer(BigInt::from(3));
    grid(GRID_MAX).into_iter().all(|(p, q)| {
        let m = match source {
            EdgeCountSource::PartitionSum => total.eval(p, q).ok().and_then(|v| v.as_rational()),
            EdgeCountSource::ClaimedTotal => f.claimed_edge_form.eval(p, q).as_rational(),
        };
        let n = f.vertex_form.eval(p, q).as_rational();
        match (m, n) {
            (Some(m), Some(n)) if n != BigRational::from_integer(0.into()) => {
                entry.a_at(p, q) == &three - BigRational::from_integer(2.into()) * m / n
            }
            _ => false,
        }
    })
}

/// Table counts and `A` against the registry, and the simplified formula
/// against the definition under both edge-count choices.
pub fn check_thm17(entry: &Thm17Entry, family: Option<&FamilySpec>) -> Finding {
    const ID: &str = "thm17";
    let Some(f) = family else {
        return not_applicable(ID, &entry.family, "family is not registered");
    };
    let mut notes = Vec::new();
    let mut first_diff = None;
    let mut counts_agree = true;
    let mut region_error = false;
    for (k, class) in degree_classes().enumerate() {
        match f.count_form(class).sub(&entry.e[k]) {
            Ok(diff) if diff.is_zero() => {}
            Ok(diff) => {
                counts_agree = false;
                notes.push(format!("E{} {}: registry minus table = {}", k + 1, class, diff));
                first_diff.get_or_insert(diff);
            }
            Err(e) => {
                counts_agree = false;
                region_error = true;
                notes.push(format!("E{} {}: {}", k + 1, class, e));
            }
        }
    }
    let a_ok: Vec<bool> = SOURCES.iter().map(|&s| a_consistent(entry, f, s)).collect();
    let consistent: Vec<&str> = SOURCES.iter().zip(&a_ok).filter(|(_, ok)| **ok).map(|(s, _)| s.label()).collect();
    notes.push(if consistent.is_empty() {
        "A matches 3 - 2m/n for neither edge count".to_string()
    } else {
        format!("A matches 3 - 2m/n with m = {}", consistent.join(" and "))
    });

    let valid: Vec<(i64, i64)> = grid(GRID_MAX).into_iter().filter(|&(p, q)| is_valid_point(f, p, q)).collect();
    let mut per_source = Vec::new();
    for source in SOURCES {
        let mut samples = Vec::new();
        for &(p, q) in &valid {
            if let (Ok(lhs), Ok(rhs)) = (thm17_formula_eval(entry, p, q), average_sombor_for_family(f, p, q, source)) {
                samples.push(NumericSample::new(p, q, lhs, rhs));
            }
        }
        let agree = samples.iter().filter(|s| within_rel(s.lhs, s.rhs)).count();
        per_source.push((source, agree, samples));
    }
    // ties go to the partition sum, which is what the formula sums over
    let best = per_source.iter().enumerate().max_by_key(|(k, (_, agree, _))| (*agree, usize::MAX - k)).map(|(k, _)| k).unwrap_or(0);
    let (source, agree, samples) = &per_source[best];
    notes.push(format!(
        "m = {}: formula agrees with the definition at {agree} of {} valid points in [1,{GRID_MAX}]^2",
        source.label(),
        samples.len()
    ));
    let skipped = grid(GRID_MAX).len() - valid.len();
    if skipped > 0 {
        notes.push(format!("{skipped} points skipped where a class count is negative"));
    }
    let above_one = valid.iter().filter(|&&(p, q)| entry.a_at(p, q) > BigRational::from_integer(1.into())).count();
    notes.push(format!("{{2,2}} term uses |A - 1|; A > 1 at {above_one} valid points"));

    let numeric_ok = *agree == samples.len();
    let verdict = if region_error {
        Verdict::RegionMismatch
    } else if counts_agree && a_ok[best] && numeric_ok {
        Verdict::Match
    } else {
        Verdict::Mismatch
    };
    let mut finding = Finding::new(ID, &entry.family, verdict);
    let shown = sample_points();
    finding.numeric_samples = samples.iter().filter(|s| shown.contains(&(s.p, s.q))).copied().collect();
    finding.symbolic_difference = first_diff;
    finding.note = notes.join("; ");
    finding
}

fn coefficient_deltas(derived: &PiecewiseForm, stated: &crate::BilinearForm) -> String {
    let Ok(piece) = derived.piece_at(1, 1) else { return String::new() };
    let pairs = [
        ("pq", &piece.pq, &stated.pq),
        ("p", &piece.p, &stated.p),
        ("q", &piece.q, &stated.q),
        ("constant", &piece.constant, &stated.constant),
    ];
    pairs
        .iter()
        .map(|(name, a, b)| format!("{name} {:.4}", (*a - *b).to_f64()))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Exact or two-decimal closed form against the derived index.
pub fn check_closed_form(claim: &ClosedFormClaim18, family: Option<&FamilySpec>) -> Finding {
    let id = format!("thm18-{}", claim.target.name());
    let Some(f) = family else {
        return not_applicable(&id, &claim.family, "family is not registered");
    };
    let derived = match symbolic_index(&IndexDefinition::builtin(claim.target.index()), f) {
        Ok(d) => d,
        Err(e) => return not_applicable(&id, &claim.family, e.to_string()),
    };
    let stated = PiecewiseForm::single(claim.stated_form.clone());
    if !claim.approximate {
        let diff = derived.sub(&stated).expect("a single form aligns with any partition");
        let mut finding = Finding::new(&id, &claim.family, if diff.is_zero() { Verdict::Match } else { Verdict::Mismatch });
        finding.note = describe_difference(&diff);
        finding.symbolic_difference = Some(diff);
        finding.numeric_samples = samples_between(&derived, &stated, &sample_points());
        enforce_soundness(&mut finding);
        return finding;
    }
    let samples = samples_between(&derived, &stated, &grid(5));
    let worst = samples.iter().map(|s| s.abs_diff).fold(0.0, f64::max);
    let ok = samples.iter().all(|s| s.abs_diff <= APPROX_TOL);
    let mut finding = Finding::new(&id, &claim.family, if ok { Verdict::Match } else { Verdict::Mismatch });
    finding.note = format!(
        "approximate form, tolerance {APPROX_TOL} absolute on [1,5]^2; largest deviation {worst:.4}; coefficient deltas (derived minus stated): {}",
        coefficient_deltas(&derived, &claim.stated_form)
    );
    finding.numeric_samples = samples;
    finding
}

/// `So >= M1/2`, `So >= M2/3` and `So >= 2 ISI` at the valid sample points.
pub fn check_inequalities(f: &FamilySpec, samples: &[(i64, i64)]) -> Finding {
    const ID: &str = "inequalities";
    let idx = |b| IndexDefinition::builtin(b);
    let (so, m1, m2, isi) = (idx(Builtin::Sombor), idx(Builtin::M1), idx(Builtin::M2), idx(Builtin::Isi));
    let shown = sample_points();
    let mut checked = 0usize;
    let mut skipped = 0usize;
    let mut violations = Vec::new();
    let mut kept = Vec::new();
    for &(p, q) in samples {
        let Ok(part) = partition_counts_at(f, p, q) else {
            skipped += 1;
            continue;
        };
        let value = |i: &IndexDefinition| index_on_partition(i, &part).map(|v| v.to_f64());
        let (Ok(s), Ok(a), Ok(b), Ok(c)) = (value(&so), value(&m1), value(&m2), value(&isi)) else {
            skipped += 1;
            continue;
        };
        checked += 1;
        let bounds = [("M1/2", a / 2.0), ("M2/3", b / 3.0), ("2 ISI", 2.0 * c)];
        let failed: Vec<&str> = bounds.iter().filter(|(_, v)| s < *v).map(|(n, _)| *n).collect();
        let tightest = bounds.iter().map(|(_, v)| *v).fold(f64::MIN, f64::max);
        if !failed.is_empty() {
            violations.push(format!("({p},{q}) So < {}", failed.join(", ")));
        }
        if !failed.is_empty() || shown.contains(&(p, q)) {
            kept.push(NumericSample::new(p, q, s, tightest));
        }
    }
    let verdict = if checked == 0 {
        Verdict::NotApplicable
    } else if violations.is_empty() {
        Verdict::Match
    } else {
        Verdict::Mismatch
    };
    let mut finding = Finding::new(ID, &f.name, verdict);
    let mut note = format!("{checked} points checked, lhs = So, rhs = max(M1/2, M2/3, 2 ISI)");
    if skipped > 0 {
        note.push_str(&format!("; {skipped} points skipped where a class count is negative"));
    }
    if !violations.is_empty() {
        note.push_str(&format!("; violated at {}", violations.join(", ")));
    }
    finding.note = note;
    finding.numeric_samples = kept;
    finding
}

/// Whether every class count is nonnegative on `[1, GRID_MAX]^2`.
pub fn check_count_validity(f: &FamilySpec) -> Finding {
    const ID: &str = "nonnegativity";
    let bad = match negative_count_scan(f, GRID_MAX) {
        Ok(bad) => bad,
        Err(e) => return not_applicable(ID, &f.name, e.to_string()),
    };
    let mut finding = Finding::new(ID, &f.name, if bad.is_empty() { Verdict::Match } else { Verdict::Mismatch });
    finding.note = if bad.is_empty() {
        format!("all class counts nonnegative on [1,{GRID_MAX}]^2")
    } else {
        let first: Vec<String> = bad.iter().take(5).map(|(p, q, pair, c)| format!("({p},{q}) {pair} = {c}")).collect();
        format!("{} points in [1,{GRID_MAX}]^2 have a negative class count, first: {}", bad.len(), first.join(", "))
    };
    finding
}

enum Task<'a> {
    EdgeTotal(&'a FamilySpec),
    Theorem(&'a TheoremClaim),
    Table(&'a Thm17Entry),
    Closed(&'a ClosedFormClaim18),
    Inequalities(&'a FamilySpec),
    Validity(&'a FamilySpec),
}

/// Runs every check against a registry, optionally on a fixed number of
/// worker threads. The report does not depend on the worker count.
#[derive(Debug, Clone)]
pub struct Auditor {
    registry: FamilyRegistry,
    workers: Option<usize>,
    timestamp: Option<String>,
}

impl Default for Auditor {
    fn default() -> Self {
        Auditor::new(FamilyRegistry::builtin())
    }
}

impl Auditor {
    pub fn new(registry: FamilyRegistry) -> Self {
        Auditor { registry, workers: None, timestamp: None }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers.max(1));
        self
    }

    pub fn timestamp(mut self, timestamp: Option<String>) -> Self {
        self.timestamp = timestamp;
        self
    }

    pub fn registry(&self) -> &FamilyRegistry {
        &self.registry
    }

    fn family(&self, name: &str) -> Option<&FamilySpec> {
        self.registry.get(name).ok()
    }

    fn execute(&self, task: &Task<'_>) -> Finding {
        match task {
            Task::EdgeTotal(f) => check_edge_totals(f),
            Task::Theorem(c) => check_theorem_vs_partition(c, self.family(&c.family)),
            Task::Table(e) => check_thm17(e, self.family(&e.family)),
            Task::Closed(c) => check_closed_form(c, self.family(&c.family)),
            Task::Inequalities(f) => check_inequalities(f, &grid(GRID_MAX)),
            Task::Validity(f) => check_count_validity(f),
        }
    }

    fn run_tasks(&self, tasks: Vec<Task<'_>>) -> AuditReport {
        let run = || tasks.par_iter().map(|t| self.execute(t)).collect::<Vec<_>>();
        let findings = match self.workers {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map(|pool| pool.install(run))
                .unwrap_or_else(|_| tasks.iter().map(|t| self.execute(t)).collect()),
            None => run(),
        };
        AuditReport::new(findings, self.timestamp.clone())
    }

    /// Every check over every family and claim.
    pub fn run(&self) -> AuditReport {
        let mut tasks = Vec::new();
        for f in self.registry.iter() {
            tasks.push(Task::EdgeTotal(f));
            tasks.push(Task::Inequalities(f));
            tasks.push(Task::Validity(f));
        }
        tasks.extend(theorem_claims().iter().map(Task::Theorem));
        tasks.extend(thm17_entries().iter().map(Task::Table));
        tasks.extend(closed_form_claims().iter().map(Task::Closed));
        self.run_tasks(tasks)
    }

    /// Findings for one catalog id. For 17 the selector picks a family; for
    /// 18 it picks a target (or `inequalities`); without one all are run.
    pub fn verify(&self, id: u32, selector: Option<&str>) -> Result<AuditReport, crate::theorems::TheoremError> {
        use crate::families::normalize;
        use crate::theorems::{get_claim, Claim};
        let tasks: Vec<Task<'_>> = match (id, selector) {
            (17, None) => thm17_entries().iter().map(Task::Table).collect(),
            (18, None) => {
                let mut t: Vec<Task<'_>> = closed_form_claims().iter().map(Task::Closed).collect();
                t.extend(self.registry.iter().map(Task::Inequalities));
                t
            }
            (18, Some(s)) if s.trim().eq_ignore_ascii_case("inequalities") => {
                self.registry.iter().map(Task::Inequalities).collect()
            }
            _ => match get_claim(id, selector)? {
                Claim::Theorem(_) => vec![Task::Theorem(&theorem_claims()[id as usize - 1])],
                Claim::AverageTable(e) => thm17_entries()
                    .iter()
                    .filter(|x| normalize(&x.family) == normalize(&e.family))
                    .map(Task::Table)
                    .collect(),
                Claim::Closed(c) => closed_form_claims().iter().filter(|x| x.target == c.target).map(Task::Closed).collect(),
            },
        };
        Ok(self.run_tasks(tasks))
    }
}

/// Full audit of the built-in families on the global thread pool.
pub fn run_full_audit() -> AuditReport {
    Auditor::default().run()
}

/// Exact value of a family's index at `(p, q)`; a convenience for reports.
pub fn exact_index_at(f: &FamilySpec, index: Builtin, p: i64, q: i64) -> Option<RadicalNumber> {
    let part = partition_counts_at(f, p, q).ok()?;
    index_on_partition(&IndexDefinition::builtin(index), &part).ok()?.as_exact().cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::get_family;

    #[test]
    fn tolerance() {
        assert!(within_rel(1e12, 1e12 + 100.0));
        assert!(!within_rel(1.0, 1.0 + 2e-9));
        assert!(within_rel(0.0, 5e-10));
    }

    #[test]
    fn edge_total_examples() {
        let f = check_edge_totals(&get_family("SiC3-II").unwrap());
        assert_eq!(f.verdict, Verdict::Match);
        let f = check_edge_totals(&get_family("SiC3-III").unwrap());
        assert_eq!(f.verdict, Verdict::Mismatch);
        let diff = f.symbolic_difference.unwrap();
        assert_eq!(diff.pieces()[0].1, crate::BilinearForm::ints(0, -1, 1, 0));
        assert!(f.numeric_samples.iter().any(|s| s.abs_diff > 0.0));
    }

    #[test]
    fn theorem_examples() {
        let claims = theorem_claims();
        let lookup = |id: usize| {
            let c = &claims[id - 1];
            check_theorem_vs_partition(c, Some(&get_family(&c.family).unwrap()))
        };
        assert_eq!(lookup(7).verdict, Verdict::Match);
        assert_eq!(lookup(1).verdict, Verdict::Match);
        let t5 = lookup(5);
        assert_eq!(t5.verdict, Verdict::Mismatch);
        assert!(t5.note.contains("q 2*sqrt(2)"), "{}", t5.note);
        assert_eq!(lookup(15).verdict, Verdict::RegionMismatch);
        assert_eq!(lookup(15).numeric_samples.len(), 100);
        assert!(lookup(13).note.contains("transcription"));
    }

    #[test]
    fn missing_family_is_not_applicable() {
        let f = check_theorem_vs_partition(&theorem_claims()[0], None);
        assert_eq!(f.verdict, Verdict::NotApplicable);
    }

    #[test]
    fn inequality_on_a_path() {
        let text = "family: P3\nvertices: 3\nedges: 2\n1 2 : 2\n";
        let mut registry = FamilyRegistry::empty();
        registry.extend_from_text(text).unwrap();
        let f = registry.get("P3").unwrap();
        assert_eq!(check_inequalities(f, &[(1, 1)]).verdict, Verdict::Match);
    }
}
