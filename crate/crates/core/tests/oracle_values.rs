//! Closed forms and values computed independently with a computer-algebra
//! summation over the published class counts, frozen here.

use num_rational::BigRational;
use sombor_core::families::{get_family, partition_counts_at, FamilyRegistry};
use sombor_core::forms::Region;
use sombor_core::indices::{
    average_sombor_for_family, index_on_partition, symbolic_index, Builtin, EdgeCountSource, IndexDefinition,
};
use sombor_core::theorems::theorem_claims;
use sombor_core::RadicalNumber;

type Terms = &'static [(i64, i64, u64)];

fn rad(terms: Terms) -> RadicalNumber {
    terms
        .iter()
        .map(|&(n, d, k)| RadicalNumber::term(BigRational::new(n.into(), d.into()), k))
        .sum()
}

/// (family, index, region, restricted [pq, p, q, constant])
const SYMBOLIC: &[(&str, Builtin, Region, [Terms; 4])] = &[
    ("SiC3-I", Builtin::Sombor, Region::P_ONE, [&[], &[], &[(6, 1, 2), (6, 1, 13)], &[(-2, 1, 2), (2, 1, 5), (1, 1, 10), (-4, 1, 13)]]),
    ("SiC3-I", Builtin::Sombor, Region::P_MANY, [&[(36, 1, 2)], &[(-35, 1, 2), (4, 1, 13)], &[(-20, 1, 2), (8, 1, 13)], &[(18, 1, 2), (2, 1, 5), (1, 1, 10), (-8, 1, 13)]]),
    ("SiC3-I", Builtin::ReducedSombor, Region::P_ONE, [&[], &[], &[(3, 1, 2), (6, 1, 5)], &[(4, 1, 1), (-1, 1, 2), (-4, 1, 5)]]),
    ("SiC3-I", Builtin::ReducedSombor, Region::P_MANY, [&[(24, 1, 2)], &[(-24, 1, 2), (4, 1, 5)], &[(-14, 1, 2), (8, 1, 5)], &[(4, 1, 1), (13, 1, 2), (-8, 1, 5)]]),
    ("SiC3-I", Builtin::M1, Region::P_ONE, [&[], &[], &[(42, 1, 1)], &[(-14, 1, 1)]]),
    ("SiC3-I", Builtin::M1, Region::P_MANY, [&[(72, 1, 1)], &[(-50, 1, 1)], &[], &[(6, 1, 1)]]),
    ("SiC3-I", Builtin::M2, Region::P_ONE, [&[], &[], &[(48, 1, 1)], &[(-21, 1, 1)]]),
    ("SiC3-I", Builtin::M2, Region::P_MANY, [&[(108, 1, 1)], &[(-85, 1, 1)], &[(-16, 1, 1)], &[(19, 1, 1)]]),
    ("SiC3-I", Builtin::Isi, Region::P_ONE, [&[], &[], &[(51, 5, 1)], &[(-223, 60, 1)]]),
    ("SiC3-I", Builtin::Isi, Region::P_MANY, [&[(18, 1, 1)], &[(-127, 10, 1)], &[(-2, 5, 1)], &[(89, 60, 1)]]),
    ("SiC3-II", Builtin::Sombor, Region::FULL, [&[(36, 1, 2)], &[(-20, 1, 2), (4, 1, 13)], &[(-30, 1, 2), (8, 1, 13)], &[(23, 1, 2), (2, 1, 10), (-10, 1, 13)]]),
    ("SiC3-II", Builtin::ReducedSombor, Region::FULL, [&[(24, 1, 2)], &[(-14, 1, 2), (4, 1, 5)], &[(-20, 1, 2), (8, 1, 5)], &[(4, 1, 1), (15, 1, 2), (-10, 1, 5)]]),
    ("SiC3-II", Builtin::M1, Region::FULL, [&[(72, 1, 1)], &[(-20, 1, 1)], &[(-20, 1, 1)], &[(4, 1, 1)]]),
    ("SiC3-II", Builtin::M2, Region::FULL, [&[(108, 1, 1)], &[(-40, 1, 1)], &[(-42, 1, 1)], &[(13, 1, 1)]]),
    ("SiC3-II", Builtin::Isi, Region::FULL, [&[(18, 1, 1)], &[(-26, 5, 1)], &[(-27, 5, 1)], &[(1, 1, 1)]]),
    ("SiC3-III", Builtin::Sombor, Region::FULL, [&[(36, 1, 2)], &[(-30, 1, 2), (6, 1, 13)], &[(-20, 1, 2), (4, 1, 13)], &[(18, 1, 2), (1, 1, 5), (2, 1, 10), (-8, 1, 13)]]),
    ("SiC3-III", Builtin::ReducedSombor, Region::FULL, [&[(24, 1, 2)], &[(-21, 1, 2), (6, 1, 5)], &[(-14, 1, 2), (4, 1, 5)], &[(5, 1, 1), (13, 1, 2), (-8, 1, 5)]]),
    ("SiC3-III", Builtin::M1, Region::FULL, [&[(72, 1, 1)], &[(-30, 1, 1)], &[(-20, 1, 1)], &[(7, 1, 1)]]),
    ("SiC3-III", Builtin::M2, Region::FULL, [&[(108, 1, 1)], &[(-60, 1, 1)], &[(-40, 1, 1)], &[(20, 1, 1)]]),
    ("SiC3-III", Builtin::Isi, Region::FULL, [&[(18, 1, 1)], &[(-39, 5, 1)], &[(-26, 5, 1)], &[(47, 30, 1)]]),
    ("Si2C3-I", Builtin::Sombor, Region::FULL, [&[(45, 1, 2)], &[(-25, 1, 2), (6, 1, 13)], &[(-35, 1, 2), (8, 1, 13)], &[(21, 1, 2), (1, 1, 5), (1, 1, 10), (-9, 1, 13)]]),
    ("Si2C3-I", Builtin::ReducedSombor, Region::FULL, [&[(30, 1, 2)], &[(-17, 1, 2), (6, 1, 5)], &[(-24, 1, 2), (8, 1, 5)], &[(3, 1, 1), (14, 1, 2), (-9, 1, 5)]]),
    ("Si2C3-I", Builtin::M1, Region::FULL, [&[(90, 1, 1)], &[(-20, 1, 1)], &[(-30, 1, 1)], &[(4, 1, 1)]]),
    ("Si2C3-I", Builtin::M2, Region::FULL, [&[(135, 1, 1)], &[(-41, 1, 1)], &[(-61, 1, 1)], &[(14, 1, 1)]]),
    ("Si2C3-I", Builtin::Isi, Region::FULL, [&[(45, 2, 1)], &[(-53, 10, 1)], &[(-79, 10, 1)], &[(67, 60, 1)]]),
    ("Si2C3-II", Builtin::Sombor, Region::FULL, [&[(45, 1, 2)], &[(-35, 1, 2), (8, 1, 13)], &[(-35, 1, 2), (8, 1, 13)], &[(33, 1, 2), (2, 1, 5), (1, 1, 10), (-14, 1, 13)]]),
    ("Si2C3-II", Builtin::ReducedSombor, Region::FULL, [&[(30, 1, 2)], &[(-24, 1, 2), (8, 1, 5)], &[(-24, 1, 2), (8, 1, 5)], &[(4, 1, 1), (22, 1, 2), (-14, 1, 5)]]),
    ("Si2C3-II", Builtin::M1, Region::FULL, [&[(90, 1, 1)], &[(-30, 1, 1)], &[(-30, 1, 1)], &[(6, 1, 1)]]),
    ("Si2C3-II", Builtin::M2, Region::FULL, [&[(135, 1, 1)], &[(-61, 1, 1)], &[(-61, 1, 1)], &[(22, 1, 1)]]),
    ("Si2C3-II", Builtin::Isi, Region::FULL, [&[(45, 2, 1)], &[(-79, 10, 1)], &[(-79, 10, 1)], &[(107, 60, 1)]]),
    ("Si2C3-III", Builtin::Sombor, Region::FULL, [&[(45, 1, 2)], &[(-30, 1, 2), (8, 1, 13)], &[(-35, 1, 2), (8, 1, 13)], &[(28, 1, 2), (2, 1, 10), (-12, 1, 13)]]),
    ("Si2C3-III", Builtin::ReducedSombor, Region::FULL, [&[(30, 1, 2)], &[(-20, 1, 2), (8, 1, 5)], &[(-24, 1, 2), (8, 1, 5)], &[(4, 1, 1), (18, 1, 2), (-12, 1, 5)]]),
    ("Si2C3-III", Builtin::M1, Region::FULL, [&[(90, 1, 1)], &[(-20, 1, 1)], &[(-30, 1, 1)], &[(4, 1, 1)]]),
    ("Si2C3-III", Builtin::M2, Region::FULL, [&[(135, 1, 1)], &[(-42, 1, 1)], &[(-61, 1, 1)], &[(14, 1, 1)]]),
    ("Si2C3-III", Builtin::Isi, Region::FULL, [&[(45, 2, 1)], &[(-27, 5, 1)], &[(-79, 10, 1)], &[(11, 10, 1)]]),
    ("SiC4-I", Builtin::Sombor, Region::FULL, [&[(42, 1, 2)], &[(-28, 1, 2), (3, 1, 10), (2, 1, 13)], &[(-20, 1, 2), (4, 1, 13)], &[(11, 1, 2), (2, 1, 5), (-2, 1, 10), (-2, 1, 13)]]),
    ("SiC4-I", Builtin::ReducedSombor, Region::FULL, [&[(28, 1, 2)], &[(6, 1, 1), (-19, 1, 2), (2, 1, 5)], &[(-14, 1, 2), (4, 1, 5)], &[(-2, 1, 1), (8, 1, 2), (-2, 1, 5)]]),
    ("SiC4-I", Builtin::M1, Region::FULL, [&[(84, 1, 1)], &[(-34, 1, 1)], &[(-20, 1, 1)], &[(10, 1, 1)]]),
    ("SiC4-I", Builtin::M2, Region::FULL, [&[(126, 1, 1)], &[(-65, 1, 1)], &[(-40, 1, 1)], &[(23, 1, 1)]]),
    ("SiC4-I", Builtin::Isi, Region::FULL, [&[(21, 1, 1)], &[(-187, 20, 1)], &[(-26, 5, 1)], &[(44, 15, 1)]]),
    ("SiC4-II", Builtin::Sombor, Region::Q_ONE, [&[], &[(6, 1, 13)], &[], &[(8, 1, 2), (2, 1, 5), (-6, 1, 13)]]),
    ("SiC4-II", Builtin::Sombor, Region::Q_MANY, [&[(36, 1, 2)], &[(-26, 1, 2), (12, 1, 13)], &[(-54, 1, 2), (8, 1, 13)], &[(4, 1, 2), (2, 1, 5), (-14, 1, 13)]]),
    ("SiC4-II", Builtin::ReducedSombor, Region::Q_ONE, [&[], &[(6, 1, 5)], &[], &[(2, 1, 1), (3, 1, 2), (-6, 1, 5)]]),
    ("SiC4-II", Builtin::ReducedSombor, Region::Q_MANY, [&[(24, 1, 2)], &[(-18, 1, 2), (12, 1, 5)], &[(-36, 1, 2), (8, 1, 5)], &[(2, 1, 1), (2, 1, 2), (-14, 1, 5)]]),
    ("SiC4-II", Builtin::M1, Region::Q_ONE, [&[], &[(30, 1, 1)], &[], &[(-8, 1, 1)]]),
    ("SiC4-II", Builtin::M1, Region::Q_MANY, [&[(72, 1, 1)], &[(8, 1, 1)], &[(-68, 1, 1)], &[(-56, 1, 1)]]),
    ("SiC4-II", Builtin::M2, Region::Q_ONE, [&[], &[(36, 1, 1)], &[], &[(-22, 1, 1)]]),
    ("SiC4-II", Builtin::M2, Region::Q_MANY, [&[(108, 1, 1)], &[(-10, 1, 1)], &[(-114, 1, 1)], &[(-72, 1, 1)]]),
    ("SiC4-II", Builtin::Isi, Region::Q_ONE, [&[], &[(36, 5, 1)], &[], &[(-28, 15, 1)]]),
    ("SiC4-II", Builtin::Isi, Region::Q_MANY, [&[(18, 1, 1)], &[(7, 5, 1)], &[(-87, 5, 1)], &[(-202, 15, 1)]]),

];

#[test]
fn symbolic_indices_match_frozen_forms() {
    for (family, index, region, coefficients) in SYMBOLIC {
        let f = get_family(family).unwrap();
        let form = symbolic_index(&IndexDefinition::builtin(*index), &f).unwrap().restricted();
        let piece = form
            .pieces()
            .iter()
            .find(|(r, _)| r == region)
            .map(|(_, b)| b)
            .unwrap_or_else(|| panic!("{family} {index:?} has no piece on {region}"));
        let got = [&piece.pq, &piece.p, &piece.q, &piece.constant];
        for (k, expected) in coefficients.iter().enumerate() {
            assert_eq!(got[k], &rad(expected), "{family} {index:?} {region} coefficient {k}");
        }
    }
    assert_eq!(SYMBOLIC.len(), 50);
}

/// Derived minus stated, as [pq, p, q, constant], for the single-region
/// comparisons and both branches of the first two.
const THEOREM_DIFFERENCES: &[(u32, [Terms; 4])] = &[
    (1, [&[], &[], &[], &[]]),
    (2, [&[], &[], &[], &[]]),
    (3, [&[], &[], &[], &[]]),
    (4, [&[(-12, 1, 2)], &[], &[], &[]]),
    (5, [&[], &[], &[(2, 1, 2)], &[]]),
    (6, [&[], &[], &[], &[]]),
    (7, [&[], &[], &[], &[]]),
    (8, [&[], &[], &[(-8, 1, 2)], &[]]),
    (9, [&[], &[], &[], &[(-2, 1, 2)]]),
    (10, [&[], &[], &[], &[(1, 1, 1)]]),
    (11, [&[], &[], &[], &[]]),
    (12, [&[], &[], &[], &[]]),
    (13, [&[], &[(-27, 1, 2)], &[], &[]]),
    (14, [&[], &[(-5, 1, 2)], &[], &[]]),
];

#[test]
fn theorem_differences_match_frozen_values() {
    for (id, expected) in THEOREM_DIFFERENCES {
        let claim = &theorem_claims()[*id as usize - 1];
        let f = get_family(&claim.family).unwrap();
        let derived = symbolic_index(&IndexDefinition::builtin(claim.index), &f).unwrap();
        let diff = derived.sub(&claim.stated_form).unwrap();
        for (region, piece) in diff.pieces() {
            let got = [&piece.pq, &piece.p, &piece.q, &piece.constant];
            for (k, e) in expected.iter().enumerate() {
                assert_eq!(got[k], &rad(e), "theorem {id} on {region} coefficient {k}");
            }
        }
    }
}

#[test]
fn split_structures_do_not_align_for_sic4_ii() {
    for id in [15, 16] {
        let claim = &theorem_claims()[id - 1];
        let f = get_family(&claim.family).unwrap();
        let derived = symbolic_index(&IndexDefinition::builtin(claim.index), &f).unwrap();
        assert!(derived.sub(&claim.stated_form).is_err());
    }
}

#[test]
fn counts_at_origin() {
    type Counts = &'static [((u32, u32), u64)];
    let expected: &[(&str, Counts)] = &[
        ("SiC3-I", &[((1, 2), 2), ((1, 3), 1), ((2, 2), 2), ((2, 3), 2), ((3, 3), 0)]),
        ("SiC3-II", &[((1, 3), 2), ((2, 2), 3), ((2, 3), 2), ((3, 3), 1)]),
        ("SiC3-III", &[((1, 2), 1), ((1, 3), 2), ((2, 2), 2), ((2, 3), 2), ((3, 3), 0)]),
        ("Si2C3-I", &[((1, 2), 1), ((1, 3), 1), ((2, 2), 3), ((2, 3), 5), ((3, 3), 0)]),
        ("Si2C3-II", &[((1, 2), 2), ((1, 3), 1), ((2, 2), 4), ((2, 3), 2), ((3, 3), 0)]),
        ("Si2C3-III", &[((1, 3), 2), ((2, 2), 4), ((2, 3), 4), ((3, 3), 0)]),
        ("SiC4-I", &[((1, 2), 2), ((1, 3), 1), ((2, 2), 1), ((2, 3), 4), ((3, 3), 1)]),
    ];
    for (name, counts) in expected {
        let f = get_family(name).unwrap();
        let part = partition_counts_at(&f, 1, 1).unwrap();
        for &((a, b), c) in *counts {
            assert_eq!(part.count(sombor_core::graph::DegreePair::new(a, b)), c, "{name} {{{a},{b}}}");
        }
    }
    assert!(partition_counts_at(&get_family("SiC4-II").unwrap(), 1, 1).is_err());
}

#[test]
fn numeric_anchors() {
    let f = get_family("Si2C3-I").unwrap();
    let part = partition_counts_at(&f, 1, 1).unwrap();
    let value = |b| index_on_partition(&IndexDefinition::builtin(b), &part).unwrap().to_f64();
    let close = |a: f64, b: f64| (a - b).abs() < 1e-12 * b.abs().max(1.0);
    assert!(close(value(Builtin::Sombor), 31.9113833892267));
    assert!(close(value(Builtin::ReducedSombor), 18.4229805746182));
    assert_eq!(value(Builtin::M1), 44.0);
    assert_eq!(value(Builtin::M2), 47.0);
    assert!(close(value(Builtin::Isi), 10.4166666666667));

    let sic3_ii = get_family("SiC3-II").unwrap();
    let avg = average_sombor_for_family(&sic3_ii, 1, 1, EdgeCountSource::PartitionSum).unwrap();
    assert!(close(avg, 6.24264068711928));
    let sic3_i = get_family("SiC3-I").unwrap();
    let avg = average_sombor_for_family(&sic3_i, 1, 1, EdgeCountSource::ClaimedTotal).unwrap();
    assert!(close(avg, 6.29549334177845));

    let constant = rad(&[(21, 1, 2), (1, 1, 5), (1, 1, 10), (-9, 1, 13)]);
    assert!(close(constant.to_f64(), 2.64686896832726));
}

#[test]
fn registry_has_eight_families_in_order() {
    assert_eq!(
        FamilyRegistry::builtin().names(),
        ["SiC3-I", "SiC3-II", "SiC3-III", "Si2C3-I", "Si2C3-II", "Si2C3-III", "SiC4-I", "SiC4-II"]
    );
}
