//! Catalog of the published closed forms, transcribed verbatim.
//!
//! Nothing here is re-derived or corrected; the [`crate::audit`] module
//! compares these claims with forms computed from the family partitions.

use std::fmt;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::families::normalize;
use crate::forms::FormError;
use crate::indices::Builtin;
use crate::{BilinearForm, PiecewiseForm, RadicalNumber};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoremError {
    #[error("unknown theorem {0}; the catalog covers 1 to 18")]
    UnknownTheorem(u32),
    #[error("theorem {id} needs a selector, one of: {}", options.join(", "))]
    SelectorRequired { id: u32, options: Vec<String> },
    #[error("theorem {id} has no entry {selector:?}; expected one of: {}", options.join(", "))]
    UnknownSelector { id: u32, selector: String, options: Vec<String> },
}

/// A stated closed form for the Sombor or reduced Sombor index of a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremClaim {
    pub id: u32,
    pub family: String,
    pub index: Builtin,
    pub stated_form: PiecewiseForm,
    /// Set when the statement is inconsistent about which family it covers.
    pub transcription_note: Option<String>,
}

/// One row of the average-Sombor table: the five class counts in the order
/// `{1,2}, {1,3}, {2,2}, {2,3}, {3,3}` and `A = a_num / a_den`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thm17Entry {
    pub family: String,
    pub e: [PiecewiseForm; 5],
    pub a_num: BilinearForm,
    pub a_den: BilinearForm,
}

impl Thm17Entry {
    /// Counts and `A` at `(p, q)`.
    pub fn eval(&self, p: i64, q: i64) -> Result<([i64; 5], BigRational), FormError> {
        let mut counts = [0i64; 5];
        for (slot, form) in counts.iter_mut().zip(&self.e) {
            let value = form.eval(p, q)?;
            *slot = value
                .as_rational()
                .filter(|r| r.is_integer())
                .and_then(|r| r.to_integer().to_i64())
                .expect("table counts have integer coefficients");
        }
        Ok((counts, self.a_at(p, q)))
    }

    pub fn a_at(&self, p: i64, q: i64) -> BigRational {
        let num = self.a_num.eval(p, q).as_rational().expect("rational numerator");
        let den = self.a_den.eval(p, q).as_rational().expect("rational denominator");
        num / den
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Claim18Target {
    M1,
    M2,
    Isi,
    SomborApprox,
}

impl Claim18Target {
    pub const ALL: [Claim18Target; 4] =
        [Claim18Target::M1, Claim18Target::M2, Claim18Target::Isi, Claim18Target::SomborApprox];

    pub fn name(self) -> &'static str {
        match self {
            Claim18Target::M1 => "m1",
            Claim18Target::M2 => "m2",
            Claim18Target::Isi => "isi",
            Claim18Target::SomborApprox => "sombor-approx",
        }
    }

    /// The index whose exact value the claim approximates or states.
    pub fn index(self) -> Builtin {
        match self {
            Claim18Target::M1 => Builtin::M1,
            Claim18Target::M2 => Builtin::M2,
            Claim18Target::Isi => Builtin::Isi,
            Claim18Target::SomborApprox => Builtin::Sombor,
        }
    }
}

/// Closed forms stated for one family alongside the inequality chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedFormClaim18 {
    pub target: Claim18Target,
    pub family: String,
    pub stated_form: BilinearForm,
    /// Decimal coefficients given to two places.
    pub approximate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Claim {
    Theorem(TheoremClaim),
    AverageTable(Box<Thm17Entry>),
    Closed(ClosedFormClaim18),
}

fn rad(terms: &[(i64, u64)]) -> RadicalNumber {
    terms
        .iter()
        .map(|&(c, k)| RadicalNumber::term(BigRational::from_integer(c.into()), k))
        .sum()
}

/// Coefficients in the published order: `pq`, `q`, `p`, constant.
fn stated(pq: &[(i64, u64)], q: &[(i64, u64)], p: &[(i64, u64)], c: &[(i64, u64)]) -> BilinearForm {
    BilinearForm::new(rad(pq), rad(p), rad(q), rad(c))
}

fn claim(id: u32, family: &str, index: Builtin, form: PiecewiseForm, note: Option<&str>) -> TheoremClaim {
    TheoremClaim {
        id,
        family: family.to_string(),
        index,
        stated_form: form,
        transcription_note: note.map(str::to_string),
    }
}

fn build_theorems() -> Vec<TheoremClaim> {
    use Builtin::{ReducedSombor as Red, Sombor as So};
    let single = PiecewiseForm::single;
    vec![
        claim(
            1,
            "SiC3-I",
            So,
            PiecewiseForm::split_p(
                stated(&[(36, 2)], &[(6, 13), (-30, 2)], &[(-6, 2)], &[(4, 2), (2, 5), (1, 10), (-4, 13)]),
                stated(&[(36, 2)], &[(8, 13), (-20, 2)], &[(4, 13), (-35, 2)], &[(18, 2), (2, 5), (1, 10), (-8, 13)]),
            ),
            None,
        ),
        claim(
            2,
            "SiC3-I",
            Red,
            PiecewiseForm::split_p(
                stated(&[(24, 2)], &[(6, 5), (-21, 2)], &[(-4, 2)], &[(4, 1), (3, 2), (-4, 5)]),
                stated(&[(24, 2)], &[(8, 5), (-14, 2)], &[(4, 5), (-24, 2)], &[(4, 1), (-8, 5), (13, 2)]),
            ),
            None,
        ),
        claim(
            3,
            "SiC3-II",
            So,
            single(stated(&[(36, 2)], &[(8, 13), (-30, 2)], &[(4, 13), (-20, 2)], &[(2, 10), (-10, 13), (23, 2)])),
            None,
        ),
        claim(
            4,
            "SiC3-II",
            Red,
            single(stated(&[(36, 2)], &[(8, 5), (-20, 2)], &[(4, 5), (-14, 2)], &[(4, 1), (-10, 5), (15, 2)])),
            None,
        ),
        claim(
            5,
            "SiC3-III",
            So,
            single(stated(
                &[(36, 2)],
                &[(4, 13), (-22, 2)],
                &[(6, 13), (-30, 2)],
                &[(2, 10), (-8, 13), (18, 2), (1, 5)],
            )),
            None,
        ),
        claim(
            6,
            "SiC3-III",
            Red,
            single(stated(&[(24, 2)], &[(4, 5), (-14, 2)], &[(6, 5), (-21, 2)], &[(5, 1), (-8, 5), (13, 2)])),
            None,
        ),
        claim(
            7,
            "Si2C3-I",
            So,
            single(stated(
                &[(45, 2)],
                &[(8, 13), (-35, 2)],
                &[(6, 13), (-25, 2)],
                &[(21, 2), (1, 5), (1, 10), (-9, 13)],
            )),
            Some("hypothesis names Si2C3-II; the formula is stated for Si2C3-I"),
        ),
        claim(
            8,
            "Si2C3-I",
            Red,
            single(stated(&[(30, 2)], &[(8, 5), (-16, 2)], &[(6, 5), (-17, 2)], &[(3, 1), (14, 2), (-9, 5)])),
            Some("hypothesis names Si2C3-II; the formula is stated for Si2C3-I"),
        ),
        claim(
            9,
            "Si2C3-II",
            So,
            single(stated(
                &[(45, 2)],
                &[(8, 13), (-35, 2)],
                &[(8, 13), (-35, 2)],
                &[(35, 2), (2, 5), (1, 10), (-14, 13)],
            )),
            None,
        ),
        claim(
            10,
            "Si2C3-II",
            Red,
            single(stated(&[(30, 2)], &[(8, 5), (-24, 2)], &[(8, 5), (-24, 2)], &[(3, 1), (22, 2), (-14, 5)])),
            None,
        ),
        claim(
            11,
            "Si2C3-III",
            So,
            single(stated(&[(45, 2)], &[(8, 13), (-35, 2)], &[(8, 13), (-30, 2)], &[(28, 2), (2, 10), (-12, 13)])),
            None,
        ),
        claim(
            12,
            "Si2C3-III",
            Red,
            single(stated(&[(30, 2)], &[(8, 5), (-24, 2)], &[(8, 5), (-20, 2)], &[(4, 1), (18, 2), (-12, 5)])),
            Some("hypothesis names Si2C3-II; the formula is stated for Si2C3-III"),
        ),
        claim(
            13,
            "SiC4-I",
            So,
            single(stated(
                &[(42, 2)],
                &[(4, 13), (-20, 2)],
                &[(2, 13), (3, 10), (-1, 2)],
                &[(11, 2), (2, 5), (-2, 10), (-2, 13)],
            )),
            Some("hypothesis names SiC4-II and the formula line names Si2C3-I; filed under SiC4-I"),
        ),
        claim(
            14,
            "SiC4-I",
            Red,
            single(stated(&[(28, 2)], &[(4, 5), (-14, 2)], &[(6, 1), (2, 5), (-14, 2)], &[(8, 2), (-2, 5), (-2, 1)])),
            Some("hypothesis names SiC4-I and the formula line names SiC4-II; filed under SiC4-I"),
        ),
        claim(
            15,
            "SiC4-II",
            So,
            PiecewiseForm::split_p(
                // the p = 1 constant is written as "(6√13 − 35√2p)"; read literally,
                // its √13 parts cancel against the preceding −6√13
                stated(&[(45, 2)], &[(-6, 2)], &[(-35, 2)], &[(4, 2), (2, 5), (-6, 13), (6, 13)]),
                stated(&[(45, 2)], &[(8, 13), (-30, 2)], &[(12, 13), (-50, 2)], &[(4, 2), (2, 5), (-14, 13)]),
            ),
            Some("p = 1 branch contains a term written as (6√13 − 35√2p), read as 6√13 − 35√2·p"),
        ),
        claim(
            16,
            "SiC4-II",
            Red,
            PiecewiseForm::split_p(
                stated(&[(30, 2)], &[(-4, 2)], &[(6, 5), (-25, 2)], &[(2, 1), (2, 2), (-6, 5)]),
                stated(&[(30, 2)], &[(8, 5), (-20, 2)], &[(12, 5), (-34, 2)], &[(2, 1), (-14, 5), (2, 2)]),
            ),
            None,
        ),
    ]
}

fn build_table() -> Vec<Thm17Entry> {
    let c = |n: i64| PiecewiseForm::single(BilinearForm::ints(0, 0, 0, n));
    let f = |pq, p, q, k| PiecewiseForm::single(BilinearForm::ints(pq, p, q, k));
    let split_p = |a: [i64; 4], b: [i64; 4]| {
        PiecewiseForm::split_p(BilinearForm::ints(a[0], a[1], a[2], a[3]), BilinearForm::ints(b[0], b[1], b[2], b[3]))
    };
    let split_q = |a: [i64; 4], b: [i64; 4]| {
        PiecewiseForm::split_q(BilinearForm::ints(a[0], a[1], a[2], a[3]), BilinearForm::ints(b[0], b[1], b[2], b[3]))
    };
    // A = (num p + num q + num c) / (den pq)
    let entry = |family: &str, e: [PiecewiseForm; 5], a_num: [i64; 3], a_den: i64| Thm17Entry {
        family: family.to_string(),
        e,
        a_num: BilinearForm::ints(0, a_num[0], a_num[1], a_num[2]),
        a_den: BilinearForm::ints(a_den, 0, 0, 0),
    };
    vec![
        entry(
            "SiC3-I",
            [
                c(2),
                c(1),
                split_p([0, 0, 2, -1], [0, 2, 2, -3]),
                split_p([0, 0, 6, -4], [0, 4, 8, -8]),
                split_p([12, -2, -12, 2], [12, -13, -8, 8]),
            ],
            [2, 3, 0],
            4,
        ),
        entry("SiC3-II", [c(0), c(2), f(0, 2, 0, 1), f(0, 4, 8, -10), f(12, -8, -10, 7)], [1, 1, 0], 2),
        entry("SiC3-III", [c(1), c(2), f(0, 3, 2, -3), f(0, 6, 4, -8), f(12, -12, -8, 8)], [3, 2, 0], 4),
        entry("Si2C3-I", [c(1), c(1), f(0, 1, 2, 0), f(0, 6, 8, -9), f(15, -9, -13, 7)], [2, 3, 0], 5),
        entry("Si2C3-II", [c(2), c(1), f(0, 2, 2, 0), f(0, 8, 8, -14), f(15, -13, -13, 11)], [3, 3, 0], 5),
        entry("Si2C3-III", [c(0), c(2), f(0, 0, 2, 2), f(0, 8, 8, -12), f(15, -10, -13, 8)], [2, 3, 0], 5),
        entry("SiC4-I", [c(2), f(0, 3, 0, -2), f(0, 1, 2, -2), f(0, 2, 4, -2), f(14, -10, -8, 5)], [4, 1, -1], 5),
        entry(
            "SiC4-II",
            [
                c(2),
                c(0),
                split_q([0, 0, 5, 2], [0, 2, 0, 2]),
                split_q([0, 6, 0, -6], [0, 12, 8, -14]),
                split_q([15, -15, -2, 0], [12, -10, -18, 0]),
            ],
            [4, 2, 0],
            5,
        ),
    ]
}

fn build_closed_forms() -> Vec<ClosedFormClaim18> {
    let ratio = |n: i64, d: i64| RadicalNumber::rational(BigRational::new(n.into(), d.into()));
    let decimal = |pq: (i64, i64), p: (i64, i64), q: (i64, i64), c: (i64, i64)| {
        BilinearForm::new(ratio(pq.0, pq.1), ratio(p.0, p.1), ratio(q.0, q.1), ratio(c.0, c.1))
    };
    let make = |target, stated_form, approximate| ClosedFormClaim18 {
        target,
        family: "Si2C3-I".to_string(),
        stated_form,
        approximate,
    };
    vec![
        make(Claim18Target::M1, BilinearForm::ints(90, -20, -30, 4), false),
        make(Claim18Target::M2, BilinearForm::ints(135, -41, -61, 14), false),
        // 22.5pq − 5.3p − 7.9q + 1.11
        make(Claim18Target::Isi, decimal((45, 2), (-53, 10), (-79, 10), (111, 100)), true),
        // 42.45pq − 10.63p − 16.1q + 38.45
        make(Claim18Target::SomborApprox, decimal((849, 20), (-1063, 100), (-161, 10), (769, 20)), true),
    ]
}

/// The sixteen Sombor and reduced Sombor closed forms, by id.
pub fn theorem_claims() -> &'static [TheoremClaim] {
    static CELL: OnceLock<Vec<TheoremClaim>> = OnceLock::new();
    CELL.get_or_init(build_theorems)
}

/// Average-Sombor table rows in family order.
pub fn thm17_entries() -> &'static [Thm17Entry] {
    static CELL: OnceLock<Vec<Thm17Entry>> = OnceLock::new();
    CELL.get_or_init(build_table)
}

pub fn closed_form_claims() -> &'static [ClosedFormClaim18] {
    static CELL: OnceLock<Vec<ClosedFormClaim18>> = OnceLock::new();
    CELL.get_or_init(build_closed_forms)
}

/// Looks up a claim. Ids 1 to 16 ignore the selector; 17 selects a family
/// and 18 selects one of `m1`, `m2`, `isi`, `sombor-approx`.
pub fn get_claim(id: u32, selector: Option<&str>) -> Result<Claim, TheoremError> {
    match id {
        1..=16 => Ok(Claim::Theorem(theorem_claims()[id as usize - 1].clone())),
        17 => {
            let options: Vec<String> = thm17_entries().iter().map(|e| e.family.clone()).collect();
            let selector = selector.ok_or_else(|| TheoremError::SelectorRequired { id, options: options.clone() })?;
            thm17_entries()
                .iter()
                .find(|e| normalize(&e.family) == normalize(selector))
                .map(|e| Claim::AverageTable(Box::new(e.clone())))
                .ok_or_else(|| TheoremError::UnknownSelector { id, selector: selector.to_string(), options })
        }
        18 => {
            let options: Vec<String> = Claim18Target::ALL.iter().map(|t| t.name().to_string()).collect();
            let selector = selector.ok_or_else(|| TheoremError::SelectorRequired { id, options: options.clone() })?;
            let key = selector.trim().to_ascii_lowercase().replace('_', "-");
            closed_form_claims()
                .iter()
                .find(|c| c.target.name() == key)
                .map(|c| Claim::Closed(c.clone()))
                .ok_or_else(|| TheoremError::UnknownSelector { id, selector: selector.to_string(), options })
        }
        _ => Err(TheoremError::UnknownTheorem(id)),
    }
}

impl fmt::Display for TheoremClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} = {}", self.index.name(), self.family, self.stated_form)
    }
}

impl fmt::Display for Thm17Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.family)?;
        for (k, e) in self.e.iter().enumerate() {
            write!(f, " E{} = {};", k + 1, e)?;
        }
        write!(f, " A = ({}) / ({})", self.a_num, self.a_den)
    }
}

impl fmt::Display for ClosedFormClaim18 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.approximate { "~=" } else { "=" };
        write!(f, "{} {} {} {}", self.target.name(), self.family, rel, self.stated_form)
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Theorem(c) => c.fmt(f),
            Claim::AverageTable(e) => e.fmt(f),
            Claim::Closed(c) => c.fmt(f),
        }
    }
}

/// True when every denominator of the table's `A` is positive on `[1, n]^2`.
pub fn a_denominators_positive(n: i64) -> bool {
    thm17_entries().iter().all(|e| {
        (1..=n).all(|p| (1..=n).all(|q| e.a_den.eval(p, q).as_rational().is_some_and(|d| d.is_positive())))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_complete() {
        assert_eq!(theorem_claims().len(), 16);
        assert_eq!(thm17_entries().len(), 8);
        assert_eq!(closed_form_claims().len(), 4);
        for (k, c) in theorem_claims().iter().enumerate() {
            assert_eq!(c.id as usize, k + 1);
            let expected = if c.id % 2 == 1 { Builtin::Sombor } else { Builtin::ReducedSombor };
            assert_eq!(c.index, expected);
        }
        assert!(a_denominators_positive(30));
    }

    #[test]
    fn family_pairing() {
        let families: Vec<&str> = theorem_claims().iter().map(|c| c.family.as_str()).collect();
        assert_eq!(
            families,
            [
                "SiC3-I", "SiC3-I", "SiC3-II", "SiC3-II", "SiC3-III", "SiC3-III", "Si2C3-I", "Si2C3-I", "Si2C3-II",
                "Si2C3-II", "Si2C3-III", "Si2C3-III", "SiC4-I", "SiC4-I", "SiC4-II", "SiC4-II"
            ]
        );
        assert!(theorem_claims()[12].transcription_note.is_some());
        assert!(theorem_claims()[13].transcription_note.is_some());
    }

    #[test]
    fn lookup_examples() {
        match get_claim(7, None).unwrap() {
            Claim::Theorem(c) => {
                assert_eq!(c.family, "Si2C3-I");
                assert_eq!(c.stated_form.pieces()[0].1.pq, rad(&[(45, 2)]));
            }
            other => panic!("{other:?}"),
        }
        match get_claim(17, Some("si2c3-ii")).unwrap() {
            Claim::AverageTable(e) => {
                assert_eq!(e.a_at(1, 1), BigRational::new(6.into(), 5.into()));
                assert_eq!(e.a_at(2, 3), BigRational::new(15.into(), 30.into()));
            }
            other => panic!("{other:?}"),
        }
        match get_claim(18, Some("m1")).unwrap() {
            Claim::Closed(c) => assert_eq!(c.stated_form.to_string(), "90*pq - 20*p - 30*q + 4"),
            other => panic!("{other:?}"),
        }
        assert_eq!(get_claim(19, None), Err(TheoremError::UnknownTheorem(19)));
        assert_eq!(get_claim(0, None), Err(TheoremError::UnknownTheorem(0)));
        assert!(matches!(get_claim(17, None), Err(TheoremError::SelectorRequired { .. })));
        assert!(matches!(get_claim(18, Some("randic")), Err(TheoremError::UnknownSelector { .. })));
    }

    #[test]
    fn table_row_values() {
        let (counts, a) = thm17_entries()[0].eval(1, 1).unwrap();
        assert_eq!(counts, [2, 1, 1, 2, 0]);
        assert_eq!(a, BigRational::new(5.into(), 4.into()));
        let (counts, _) = thm17_entries()[7].eval(3, 2).unwrap();
        assert_eq!(counts, [2, 0, 8, 38, 6]);
    }

    #[test]
    fn approximate_forms_are_flagged() {
        let flags: Vec<bool> = closed_form_claims().iter().map(|c| c.approximate).collect();
        assert_eq!(flags, [false, false, true, true]);
        let isi = &closed_form_claims()[2].stated_form;
        assert!((isi.eval_float::<f64>(1, 1) - 10.41).abs() < 1e-12);
    }
}
