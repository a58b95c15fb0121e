//! Degree-based indices over explicit graphs, evaluated partitions and
//! symbolic family partitions.
//!
//! Weights are always evaluated on the degree pair sorted ascending, so a
//! user expression that is not symmetric in `du` and `dv` is symmetrised by
//! that convention.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::dsl::{eval_weight, DslError, Value, WeightExpr};
use crate::families::{partition_counts_at, FamilyError, FamilySpec};
use crate::forms::FormError;
use crate::graph::{degree_pair_partition, DegreePair, DegreePairPartition, Graph};
use crate::theorems::Thm17Entry;
use crate::{PiecewiseForm, RadicalNumber};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IndexError {
    #[error("index {0} does not stay within exact radicals")]
    NotRadicalClosed(String),
    #[error("weight at {pair}: {source}")]
    Weight { pair: DegreePair, source: DslError },
    #[error("average degree is undefined for a graph with no vertices")]
    ZeroVertices,
    #[error("unknown index {0:?}; expected one of sombor, reduced_sombor, m1, m2, isi, average_sombor")]
    UnknownIndex(String),
    #[error("{family}: claimed edge total at (p, q) = ({p}, {q}) is not a nonnegative integer: {value}")]
    ClaimedEdges { family: String, p: i64, q: i64, value: String },
    #[error("{0} is a graph-level index and has no edge weight")]
    GraphLevel(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Edge-local indices with hard-wired exact weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Builtin {
    Sombor,
    ReducedSombor,
    M1,
    M2,
    Isi,
}

impl Builtin {
    pub const ALL: [Builtin; 5] = [Builtin::Sombor, Builtin::ReducedSombor, Builtin::M1, Builtin::M2, Builtin::Isi];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Sombor => "sombor",
            Builtin::ReducedSombor => "reduced_sombor",
            Builtin::M1 => "m1",
            Builtin::M2 => "m2",
            Builtin::Isi => "isi",
        }
    }

    /// The same weight written in the expression language.
    pub fn expression(self) -> &'static str {
        match self {
            Builtin::Sombor => "sqrt(du^2 + dv^2)",
            Builtin::ReducedSombor => "sqrt((du - 1)^2 + (dv - 1)^2)",
            Builtin::M1 => "du + dv",
            Builtin::M2 => "du*dv",
            Builtin::Isi => "du*dv/(du + dv)",
        }
    }

    /// Exact weight at the pair `(i, j)`.
    pub fn weight(self, i: u32, j: u32) -> RadicalNumber {
        let (i, j) = (u64::from(i), u64::from(j));
        match self {
            Builtin::Sombor => RadicalNumber::sqrt_int(i * i + j * j),
            Builtin::ReducedSombor => {
                let (a, b) = (i.saturating_sub(1), j.saturating_sub(1));
                RadicalNumber::sqrt_int(a * a + b * b)
            }
            Builtin::M1 => RadicalNumber::rational(BigRational::from_integer((i + j).into())),
            Builtin::M2 => RadicalNumber::rational(BigRational::from_integer((i * j).into())),
            Builtin::Isi => RadicalNumber::rational(BigRational::new((i * j).into(), (i + j).into())),
        }
    }
}

impl FromStr for Builtin {
    type Err = IndexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == key)
            .ok_or_else(|| IndexError::UnknownIndex(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexKind {
    ClosedUnderRadicals,
    RealValued,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Weight {
    Builtin(Builtin),
    Expr(WeightExpr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexDefinition {
    pub name: String,
    pub weight: Weight,
    pub kind: IndexKind,
}

impl IndexDefinition {
    pub fn builtin(b: Builtin) -> Self {
        IndexDefinition { name: b.name().to_string(), weight: Weight::Builtin(b), kind: IndexKind::ClosedUnderRadicals }
    }

    /// A user weight; its kind follows from the shape of the expression.
    pub fn from_expr(name: impl Into<String>, expr: WeightExpr) -> Self {
        let kind = if expr.is_radical_closed() { IndexKind::ClosedUnderRadicals } else { IndexKind::RealValued };
        IndexDefinition { name: name.into(), weight: Weight::Expr(expr), kind }
    }

    /// Looks up a built-in by name. `average_sombor` is graph-level and is
    /// rejected here.
    pub fn by_name(name: &str) -> Result<Self, IndexError> {
        if is_average_sombor(name) {
            return Err(IndexError::GraphLevel(name.to_string()));
        }
        Ok(Self::builtin(name.parse()?))
    }

    /// Weight at the unordered pair `{a, b}`.
    pub fn weight(&self, a: u32, b: u32) -> Result<Value, IndexError> {
        let pair = DegreePair::new(a, b);
        match &self.weight {
            Weight::Builtin(builtin) => Ok(Value::Exact(builtin.weight(pair.low(), pair.high()))),
            Weight::Expr(expr) => {
                eval_weight(expr, pair.low(), pair.high()).map_err(|source| IndexError::Weight { pair, source })
            }
        }
    }

    fn exact_weight(&self, pair: DegreePair) -> Result<RadicalNumber, IndexError> {
        match self.weight(pair.low(), pair.high())? {
            Value::Exact(r) => Ok(r),
            Value::Real(_) => Err(IndexError::NotRadicalClosed(self.name.clone())),
        }
    }
}

pub fn is_average_sombor(name: &str) -> bool {
    matches!(name.trim().to_ascii_lowercase().replace('-', "_").as_str(), "average_sombor" | "avg_sombor")
}

/// Sums the weight edge by edge.
pub fn index_on_graph(idx: &IndexDefinition, g: &Graph) -> Result<Value, IndexError> {
    let mut total = Value::int(0);
    for (u, v) in g.edges() {
        total = total.add(&idx.weight(g.degree(u), g.degree(v))?);
    }
    Ok(total)
}

/// `sum count * weight` over the classes of a partition.
pub fn index_on_partition(idx: &IndexDefinition, part: &DegreePairPartition) -> Result<Value, IndexError> {
    let counts = part.counts.iter().map(|(pair, c)| (*pair, *c as i64));
    index_on_counts(idx, counts)
}

/// Like [`index_on_partition`] but accepts signed counts, for evaluating
/// closed-form identities outside the range where counts are nonnegative.
pub fn index_on_counts<I>(idx: &IndexDefinition, counts: I) -> Result<Value, IndexError>
where
    I: IntoIterator<Item = (DegreePair, i64)>,
{
    let mut total = Value::int(0);
    for (pair, count) in counts {
        if count == 0 {
            continue;
        }
        let w = idx.weight(pair.low(), pair.high())?;
        total = total.add(&w.mul(&Value::int(count)));
    }
    Ok(total)
}

/// Closed form of the index over a family: each class count form scaled by
/// the class weight, summed region by region.
pub fn symbolic_index(idx: &IndexDefinition, family: &FamilySpec) -> Result<PiecewiseForm, IndexError> {
    if idx.kind != IndexKind::ClosedUnderRadicals {
        return Err(IndexError::NotRadicalClosed(idx.name.clone()));
    }
    let mut total = PiecewiseForm::zero();
    for (pair, form) in &family.partition {
        let w = idx.exact_weight(*pair)?;
        total = total.add(&form.scale(&w))?;
    }
    Ok(total)
}

/// Which edge count defines the average degree `2m/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MChoice {
    /// `m` is the sum of the partition counts.
    PartitionSum,
    /// `m` is supplied externally, e.g. a family's claimed edge total.
    Claimed(u64),
}

/// `sum count * sqrt((i - t)^2 + (j - t)^2)` with `t = 2m/n`. The squared
/// distances are formed exactly, so a regular graph gives exactly zero.
pub fn average_sombor_on_partition(part: &DegreePairPartition, m_choice: MChoice) -> Result<f64, IndexError> {
    if part.vertex_count == 0 {
        return Err(IndexError::ZeroVertices);
    }
    let m = match m_choice {
        MChoice::PartitionSum => part.total_edges,
        MChoice::Claimed(m) => m,
    };
    let t = BigRational::new(BigInt::from(2 * m), BigInt::from(part.vertex_count));
    let mut total = 0.0;
    for (pair, count) in &part.counts {
        let a = BigRational::from_integer(pair.low().into()) - &t;
        let b = BigRational::from_integer(pair.high().into()) - &t;
        let squared = &a * &a + &b * &b;
        total += *count as f64 * sqrt_rational(&squared);
    }
    Ok(total)
}

pub fn average_sombor_on_graph(g: &Graph) -> Result<f64, IndexError> {
    average_sombor_on_partition(&degree_pair_partition(g), MChoice::PartitionSum)
}

/// Source of `m` when the partition comes from a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeCountSource {
    PartitionSum,
    ClaimedTotal,
}

impl EdgeCountSource {
    pub fn label(self) -> &'static str {
        match self {
            EdgeCountSource::PartitionSum => "partition-sum",
            EdgeCountSource::ClaimedTotal => "claimed",
        }
    }
}

impl FromStr for EdgeCountSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "partition-sum" | "partition" | "sum" => Ok(EdgeCountSource::PartitionSum),
            "claimed" => Ok(EdgeCountSource::ClaimedTotal),
            other => Err(format!("unknown m choice {other:?}; expected partition-sum or claimed")),
        }
    }
}

/// Average-Sombor value of a family member; requires nonnegative counts.
pub fn average_sombor_for_family(
    family: &FamilySpec,
    p: i64,
    q: i64,
    source: EdgeCountSource,
) -> Result<f64, IndexError> {
    let part = partition_counts_at(family, p, q)?;
    let choice = match source {
        EdgeCountSource::PartitionSum => MChoice::PartitionSum,
        EdgeCountSource::ClaimedTotal => {
            let claimed = family.claimed_edge_form.eval(p, q);
            let m = claimed
                .as_rational()
                .filter(|r| r.is_integer() && !r.is_negative())
                .and_then(|r| num_traits::ToPrimitive::to_u64(&r.to_integer()))
                .ok_or_else(|| IndexError::ClaimedEdges {
                    family: family.name.clone(),
                    p,
                    q,
                    value: claimed.to_string(),
                })?;
            MChoice::Claimed(m)
        }
    };
    average_sombor_on_partition(&part, choice)
}

fn sqrt_rational(r: &BigRational) -> f64 {
    if r.is_zero() {
        0.0
    } else {
        crate::dsl::rational_to_f64(r).sqrt()
    }
}

/// Simplified average-Sombor formula in terms of the five class counts and
/// `A = 3 - 2m/n`:
///
/// `sqrt2 (E1 sqrt((A-3/2)^2+1/4) + E2 sqrt((A-1)^2+1) + E3 |A-1| + E4 sqrt((A-1/2)^2+1/4) + E5 A)`
///
/// The `{2,2}` term is `sqrt(2 (A-1)^2) = sqrt2 |A-1|`; dropping the absolute
/// value undercounts whenever `A > 1`.
pub fn thm17_formula(counts: [i64; 5], a: &BigRational) -> f64 {
    let half = BigRational::new(1.into(), 2.into());
    let quarter = BigRational::new(1.into(), 4.into());
    let one = BigRational::from_integer(1.into());
    let d1 = a - &one - &half;
    let d2 = a - &one;
    let d4 = a - &half;
    let terms = [
        sqrt_rational(&(&d1 * &d1 + &quarter)),
        sqrt_rational(&(&d2 * &d2 + &one)),
        crate::dsl::rational_to_f64(&d2.abs()),
        sqrt_rational(&(&d4 * &d4 + &quarter)),
        crate::dsl::rational_to_f64(a),
    ];
    let inner: f64 = counts.iter().zip(terms).map(|(&c, t)| c as f64 * t).sum();
    std::f64::consts::SQRT_2 * inner
}

/// Evaluates a table entry's counts and `A` at `(p, q)`.
pub fn thm17_formula_eval(entry: &Thm17Entry, p: i64, q: i64) -> Result<f64, IndexError> {
    let (counts, a) = entry.eval(p, q)?;
    Ok(thm17_formula(counts, &a))
}

/// Exact values of every built-in at one family point, keyed by name.
pub fn builtin_values_at(family: &FamilySpec, p: i64, q: i64) -> Result<BTreeMap<&'static str, Value>, IndexError> {
    let part = partition_counts_at(family, p, q)?;
    let mut out = BTreeMap::new();
    for b in Builtin::ALL {
        out.insert(b.name(), index_on_partition(&IndexDefinition::builtin(b), &part)?);
    }
    Ok(out)
}

impl fmt::Display for IndexDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.weight {
            Weight::Builtin(b) => write!(f, "{}: {}", self.name, b.expression()),
            Weight::Expr(e) => write!(f, "{}: {}", self.name, e),
        }
    }
}
