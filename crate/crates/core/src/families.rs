//! The silicon-carbide family registry.
//!
//! Each family is recorded exactly as published: vertex count, claimed edge
//! count, and the piecewise cardinality of every degree-pair edge class.
//! Known inconsistencies are kept as printed; judging them is the auditor's
//! job.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::forms::{FormError, Region};
use crate::graph::{DegreePair, DegreePairPartition};
use crate::{BilinearForm, PiecewiseForm, RadicalNumber};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("{family}: count of {pair} edges is {value} at (p, q) = ({p}, {q})")]
    NegativeCount { family: String, pair: DegreePair, p: i64, q: i64, value: i64 },
    #[error("{family}: count of {pair} edges at (p, q) = ({p}, {q}) is not an integer: {value}")]
    NonIntegerCount { family: String, pair: DegreePair, p: i64, q: i64, value: String },
    #[error("{family}: vertex count at (p, q) = ({p}, {q}) is not a positive integer: {value}")]
    BadVertexCount { family: String, p: i64, q: i64, value: String },
    #[error("{family}: {source}")]
    Form { family: String, source: FormError },
    #[error("family file line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// The five degree classes that occur in these families, in table order.
pub const DEGREE_CLASSES: [(u32, u32); 5] = [(1, 2), (1, 3), (2, 2), (2, 3), (3, 3)];

pub fn degree_classes() -> impl Iterator<Item = DegreePair> {
    DEGREE_CLASSES.iter().map(|&(a, b)| DegreePair::new(a, b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub name: String,
    pub vertex_form: BilinearForm,
    pub claimed_edge_form: BilinearForm,
    /// Absent classes have count zero.
    pub partition: BTreeMap<DegreePair, PiecewiseForm>,
}

fn as_integer(value: &RadicalNumber) -> Option<i64> {
    let r = value.as_rational()?;
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

impl FamilySpec {
    /// The count form for `pair`, zero when the class is absent.
    pub fn count_form(&self, pair: DegreePair) -> PiecewiseForm {
        self.partition.get(&pair).cloned().unwrap_or_else(PiecewiseForm::zero)
    }

    pub fn vertex_count_at(&self, p: i64, q: i64) -> Result<u64, FamilyError> {
        let value = self.vertex_form.eval(p, q);
        as_integer(&value)
            .filter(|&n| n > 0)
            .map(|n| n as u64)
            .ok_or_else(|| FamilyError::BadVertexCount {
                family: self.name.clone(),
                p,
                q,
                value: value.to_string(),
            })
    }

    /// Edge counts at `(p, q)` without the sign check, so closed-form
    /// identities can be compared everywhere, including outside the range
    /// where the published counts are meaningful.
    pub fn signed_counts_at(&self, p: i64, q: i64) -> Result<BTreeMap<DegreePair, i64>, FamilyError> {
        let mut out = BTreeMap::new();
        for (pair, form) in &self.partition {
            let value = form
                .eval(p, q)
                .map_err(|source| FamilyError::Form { family: self.name.clone(), source })?;
            let count = as_integer(&value).ok_or_else(|| FamilyError::NonIntegerCount {
                family: self.name.clone(),
                pair: *pair,
                p,
                q,
                value: value.to_string(),
            })?;
            out.insert(*pair, count);
        }
        Ok(out)
    }

    /// First class with a negative count at `(p, q)`, if any.
    pub fn negative_count_at(&self, p: i64, q: i64) -> Result<Option<(DegreePair, i64)>, FamilyError> {
        Ok(self.signed_counts_at(p, q)?.into_iter().find(|(_, c)| *c < 0))
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "family: {}", self.name)?;
        writeln!(f, "vertices: {}", self.vertex_form)?;
        writeln!(f, "edges: {}", self.claimed_edge_form)?;
        for (pair, form) in &self.partition {
            for (region, piece) in form.pieces() {
                if region.is_full() {
                    writeln!(f, "{} {} : {}", pair.low(), pair.high(), piece)?;
                } else {
                    writeln!(f, "{} {} : {} [{}]", pair.low(), pair.high(), piece, region)?;
                }
            }
        }
        Ok(())
    }
}

/// Evaluates the published class counts at `(p, q)`. The total is the sum of
/// the counts, not the claimed edge count.
pub fn partition_counts_at(family: &FamilySpec, p: i64, q: i64) -> Result<DegreePairPartition, FamilyError> {
    let vertex_count = family.vertex_count_at(p, q)?;
    let signed = family.signed_counts_at(p, q)?;
    let mut counts = Vec::with_capacity(signed.len());
    for (pair, value) in signed {
        if value < 0 {
            return Err(FamilyError::NegativeCount { family: family.name.clone(), pair, p, q, value });
        }
        counts.push((pair, value as u64));
    }
    Ok(DegreePairPartition::from_counts(vertex_count, counts))
}

/// Region-aligned symbolic sum of all class counts.
pub fn symbolic_edge_total(family: &FamilySpec) -> Result<PiecewiseForm, FamilyError> {
    let mut total = PiecewiseForm::zero();
    for form in family.partition.values() {
        total = total
            .add(form)
            .map_err(|source| FamilyError::Form { family: family.name.clone(), source })?;
    }
    Ok(total)
}

/// Name normalisation for lookups: case and whitespace are ignored, and
/// `_` is dropped so `Si_2C_3-I` finds `Si2C3-I`.
pub(crate) fn normalize(name: &str) -> String {
    name.chars()
        .filter(|c| !c.is_whitespace() && *c != '_')
        .flat_map(char::to_lowercase)
        .collect()
}

/// Ordered collection of families; later registrations replace earlier ones
/// of the same name.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FamilyRegistry {
    families: Vec<FamilySpec>,
}

impl FamilyRegistry {
    pub fn empty() -> Self {
        FamilyRegistry::default()
    }

    /// The eight published families.
    pub fn builtin() -> Self {
        let mut registry = FamilyRegistry::empty();
        for family in builtin_families() {
            registry.register(family);
        }
        registry
    }

    pub fn register(&mut self, family: FamilySpec) {
        let key = normalize(&family.name);
        match self.families.iter_mut().find(|f| normalize(&f.name) == key) {
            Some(slot) => *slot = family,
            None => self.families.push(family),
        }
    }

    /// Registers every family from a family file, replacing same-named ones.
    pub fn extend_from_text(&mut self, text: &str) -> Result<(), FamilyError> {
        for family in parse_family_file(text)? {
            self.register(family);
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&FamilySpec, FamilyError> {
        let key = normalize(name);
        self.families
            .iter()
            .find(|f| normalize(&f.name) == key)
            .ok_or_else(|| FamilyError::UnknownFamily(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &FamilySpec> {
        self.families.iter()
    }

    pub fn names(&self) -> Vec<String> {
        self.families.iter().map(|f| f.name.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }
}

/// Looks a family up in the built-in registry.
pub fn get_family(name: &str) -> Result<FamilySpec, FamilyError> {
    FamilyRegistry::builtin().get(name).cloned()
}

fn single(pq: i64, p: i64, q: i64, c: i64) -> PiecewiseForm {
    PiecewiseForm::single(BilinearForm::ints(pq, p, q, c))
}

fn constant(c: i64) -> PiecewiseForm {
    single(0, 0, 0, c)
}

fn family(
    name: &str,
    vertices: BilinearForm,
    edges: BilinearForm,
    rows: Vec<((u32, u32), PiecewiseForm)>,
) -> FamilySpec {
    FamilySpec {
        name: name.to_string(),
        vertex_form: vertices,
        claimed_edge_form: edges,
        partition: rows.into_iter().map(|((a, b), f)| (DegreePair::new(a, b), f)).collect(),
    }
}

fn builtin_families() -> Vec<FamilySpec> {
    let f = BilinearForm::ints;
    vec![
        family(
            "SiC3-I",
            f(8, 0, 0, 0),
            f(12, -2, -3, 0),
            vec![
                ((1, 2), constant(2)),
                ((1, 3), constant(1)),
                ((2, 2), PiecewiseForm::split_p(f(0, 0, 3, -1), f(0, 2, 2, -3))),
                ((2, 3), PiecewiseForm::split_p(f(0, 0, 6, -4), f(0, 4, 8, -8))),
                ((3, 3), PiecewiseForm::split_p(f(12, -2, -12, 2), f(12, -13, -8, 8))),
            ],
        ),
        family(
            "SiC3-II",
            f(8, 0, 0, 0),
            f(12, -2, -2, 0),
            vec![
                ((1, 3), constant(2)),
                ((2, 2), single(0, 2, 0, 1)),
                ((2, 3), single(0, 4, 8, -10)),
                ((3, 3), single(12, -8, -10, 7)),
            ],
        ),
        family(
            "SiC3-III",
            f(8, 0, 0, 0),
            f(12, -2, -3, 0),
            vec![
                ((1, 2), constant(1)),
                ((1, 3), constant(2)),
                ((2, 2), single(0, 3, 2, -3)),
                ((2, 3), single(0, 6, 4, -8)),
                ((3, 3), single(12, -12, -8, 8)),
            ],
        ),
        family(
            "Si2C3-I",
            f(10, 0, 0, 0),
            f(15, -2, -3, 0),
            vec![
                ((1, 2), constant(1)),
                ((1, 3), constant(1)),
                ((2, 2), single(0, 1, 2, 0)),
                // printed as 6p - 1 + 8(q - 1)
                ((2, 3), single(0, 6, 8, -9)),
                ((3, 3), single(15, -9, -13, 7)),
            ],
        ),
        family(
            "Si2C3-II",
            f(10, 0, 0, 0),
            f(15, -2, -3, 0),
            vec![
                ((1, 2), constant(2)),
                ((1, 3), constant(1)),
                ((2, 2), single(0, 2, 2, 0)),
                ((2, 3), single(0, 8, 8, -14)),
                ((3, 3), single(15, -13, -13, 11)),
            ],
        ),
        family(
            "Si2C3-III",
            f(10, 0, 0, 0),
            f(15, -2, -3, 0),
            vec![
                ((1, 3), constant(2)),
                ((2, 2), single(0, 0, 2, 2)),
                ((2, 3), single(0, 8, 8, -12)),
                ((3, 3), single(15, -10, -13, 8)),
            ],
        ),
        family(
            "SiC4-I",
            f(10, 0, 0, 0),
            f(15, -4, -2, 1),
            vec![
                ((1, 2), constant(2)),
                ((1, 3), single(0, 3, 0, -2)),
                ((2, 2), single(0, 1, 2, -2)),
                ((2, 3), single(0, 2, 4, -2)),
                ((3, 3), single(14, -10, -8, 5)),
            ],
        ),
        family(
            "SiC4-II",
            f(10, 0, 0, 0),
            f(15, -4, -2, 0),
            vec![
                ((1, 2), constant(2)),
                ((2, 2), PiecewiseForm::split_q(f(0, 0, 5, 2), f(0, 2, 0, 2))),
                ((2, 3), PiecewiseForm::split_q(f(0, 6, 0, -6), f(0, 12, 8, -14))),
                ((3, 3), PiecewiseForm::split_q(f(15, -15, -2, 0), f(12, -10, -18, 0))),
            ],
        ),
    ]
}

#[derive(Default)]
struct PendingFamily {
    name: String,
    line: usize,
    vertices: Option<BilinearForm>,
    edges: Option<BilinearForm>,
    rows: BTreeMap<DegreePair, Vec<(Region, BilinearForm)>>,
}

impl PendingFamily {
    fn finish(self) -> Result<FamilySpec, FamilyError> {
        let missing = |what: &str| FamilyError::Parse {
            line: self.line,
            message: format!("family {:?} has no `{what}:` line", self.name),
        };
        let vertex_form = self.vertices.clone().ok_or_else(|| missing("vertices"))?;
        let claimed_edge_form = self.edges.clone().ok_or_else(|| missing("edges"))?;
        let mut partition = BTreeMap::new();
        for (pair, pieces) in self.rows {
            let form = PiecewiseForm::new(pieces).map_err(|source| FamilyError::Parse {
                line: self.line,
                message: format!("family {:?}, class {pair}: {source}", self.name),
            })?;
            partition.insert(pair, form);
        }
        Ok(FamilySpec { name: self.name, vertex_form, claimed_edge_form, partition })
    }
}

/// Parses a family file.
///
/// ```text
/// # comments and blank lines are ignored
/// family: SiC3-III
/// vertices: 8pq
/// edges: 12pq - 3p - 2q
/// 1 2 : 1
/// 2 2 : 3p + 2q - 3
/// 3 3 : 12pq - 2p - 12q + 2 [p = 1, q >= 1]
/// 3 3 : 12pq - 13p - 8q + 8 [p > 1, q >= 1]
/// ```
///
/// Each `family:` line starts a record. Rows read `i j : form [region]`; the
/// region defaults to all `p, q >= 1`, and the rows of one class must tile
/// that range. Classes must be among `{1,2} {1,3} {2,2} {2,3} {3,3}`.
pub fn parse_family_file(text: &str) -> Result<Vec<FamilySpec>, FamilyError> {
    let mut out = Vec::new();
    let mut current: Option<PendingFamily> = None;
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| FamilyError::Parse { line: line_no, message };
        let form_err = |e: FormError| FamilyError::Parse { line: line_no, message: e.to_string() };
        if let Some(name) = line.strip_prefix("family:") {
            if let Some(done) = current.take() {
                out.push(done.finish()?);
            }
            let name = name.trim();
            if name.is_empty() {
                return Err(parse_err("empty family name".into()));
            }
            current = Some(PendingFamily { name: name.to_string(), line: line_no, ..Default::default() });
            continue;
        }
        let pending = current
            .as_mut()
            .ok_or_else(|| parse_err("expected `family: NAME` before other records".into()))?;
        if let Some(form) = line.strip_prefix("vertices:") {
            pending.vertices = Some(form.trim().parse().map_err(form_err)?);
        } else if let Some(form) = line.strip_prefix("edges:") {
            pending.edges = Some(form.trim().parse().map_err(form_err)?);
        } else if let Some((lhs, rhs)) = line.split_once(':') {
            let degrees: Vec<u32> = lhs
                .split_whitespace()
                .map(|t| t.parse::<u32>())
                .collect::<Result<_, _>>()
                .map_err(|_| parse_err(format!("bad degree pair {lhs:?}")))?;
            let pair = match degrees.as_slice() {
                [a, b] => DegreePair::new(*a, *b),
                _ => return Err(parse_err(format!("expected two degrees, found {lhs:?}"))),
            };
            if !degree_classes().any(|c| c == pair) {
                return Err(parse_err(format!("degree class {pair} is not one of the five supported classes")));
            }
            let (form_text, region) = match rhs.split_once('[') {
                Some((form, region)) => {
                    let region = region
                        .trim()
                        .strip_suffix(']')
                        .ok_or_else(|| parse_err("unterminated region".into()))?;
                    (form, region.parse::<Region>().map_err(form_err)?)
                }
                None => (rhs, Region::FULL),
            };
            let form: BilinearForm = form_text.trim().parse().map_err(form_err)?;
            pending.rows.entry(pair).or_default().push((region, form));
        } else {
            return Err(parse_err(format!("unrecognised line {line:?}")));
        }
    }
    if let Some(done) = current.take() {
        out.push(done.finish()?);
    }
    Ok(out)
}

/// Whether every class count is non-negative at every grid point of
/// `[1, max]²`; returns the violations in row-major order.
pub fn negative_count_scan(family: &FamilySpec, max: i64) -> Result<Vec<(i64, i64, DegreePair, i64)>, FamilyError> {
    let mut out = Vec::new();
    for p in 1..=max {
        for q in 1..=max {
            for (pair, count) in family.signed_counts_at(p, q)? {
                if count.is_negative() {
                    out.push((p, q, pair, count));
                }
            }
        }
    }
    Ok(out)
}
