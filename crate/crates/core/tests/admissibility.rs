mod common;

use common::admissible_suite;
use hardy_core::admissibility::{
    check_cartan_hadamard, check_homogeneous, check_hyperbolic, check_space, cross_validate, region_scan,
    AdmissibilityError, PowerWeightParams, Sweep, SweptParam,
};
use hardy_core::exponents::ExponentConfig;
use hardy_core::spaces::SpaceModel;
use proptest::prelude::*;

const PARAMS: [SweptParam; 3] = [SweptParam::Alpha1, SweptParam::Alpha2, SweptParam::Beta];

fn exponents() -> impl Strategy<Value = ExponentConfig> {
    (1.1f64..6.0, 0.05f64..0.95).prop_map(|(p, frac)| ExponentConfig::new(p, frac * p).unwrap())
}

fn params() -> impl Strategy<Value = PowerWeightParams> {
    (-8.0f64..4.0, -8.0f64..4.0, -4.0f64..4.0).prop_map(|(a, b, c)| PowerWeightParams::new(a, b, c))
}

#[test]
fn suite_is_admissible_and_agrees_numerically() {
    for case in admissible_suite() {
        let v = check_space(case.params, &case.space, &case.exponents()).unwrap();
        assert!(v.admissible && !v.boundary, "{}: {v:?}", case.label);
        let cv = cross_validate(case.params, &case.space, &case.exponents()).unwrap();
        assert_eq!(cv.agree, Some(true), "{}: {:?}", case.label, cv.numeric);
    }
}

#[test]
fn scan_rows_are_lexicographic() {
    let space = SpaceModel::hyperbolic(3).unwrap();
    let e = ExponentConfig::new(3.0, 1.5).unwrap();
    let sweeps = [
        Sweep {
            param: SweptParam::Alpha2,
            start: -6.0,
            stop: -4.0,
            step: 1.0,
        },
        Sweep {
            param: SweptParam::Beta,
            start: -1.0,
            stop: 1.0,
            step: 1.0,
        },
    ];
    let table = region_scan(&space, PowerWeightParams::default(), &sweeps, &e).unwrap();
    let got: Vec<_> = table.rows.iter().map(|r| (r.values[0], r.values[1])).collect();
    let mut want = Vec::new();
    for a in [-6.0, -5.0, -4.0] {
        for b in [-1.0, 0.0, 1.0] {
            want.push((a, b));
        }
    }
    assert_eq!(got, want);
    for row in &table.rows {
        let direct = check_space(PowerWeightParams::new(0.0, row.values[0], row.values[1]), &space, &e).unwrap();
        assert_eq!(row.verdict, direct);
    }
    assert_eq!(table.condition_names(), ["H1", "H2", "H3", "H4"]);
}

#[test]
fn single_point_scan() {
    let space = SpaceModel::homogeneous(2.0).unwrap();
    let e = ExponentConfig::new(2.0, 1.0).unwrap();
    let sweeps = [Sweep {
        param: SweptParam::Beta,
        start: 0.5,
        stop: 0.5,
        step: 0.1,
    }];
    let table = region_scan(&space, PowerWeightParams::new(0.0, -4.0, 0.0), &sweeps, &e).unwrap();
    assert_eq!(table.rows.len(), 1);
    assert_eq!(table.rows[0].values, [0.5]);
}

#[test]
fn scan_errors() {
    let space = SpaceModel::homogeneous(2.0).unwrap();
    let e = ExponentConfig::new(2.0, 1.0).unwrap();
    let base = PowerWeightParams::default();
    let empty = [Sweep {
        param: SweptParam::Beta,
        start: 1.0,
        stop: 0.0,
        step: 0.5,
    }];
    assert!(matches!(
        region_scan(&space, base, &empty, &e),
        Err(AdmissibilityError::EmptyRange { .. })
    ));
    let twice = [
        Sweep {
            param: SweptParam::Beta,
            start: 0.0,
            stop: 1.0,
            step: 0.5,
        },
        Sweep {
            param: SweptParam::Beta,
            start: 0.0,
            stop: 1.0,
            step: 0.5,
        },
    ];
    assert!(matches!(
        region_scan(&space, base, &twice, &e),
        Err(AdmissibilityError::DuplicateParam(_))
    ));
    assert!(matches!(
        region_scan(&space, base, &[], &e),
        Err(AdmissibilityError::SweepCount(0))
    ));
}

#[test]
fn crossing_the_inner_critical_plane_is_unsupported() {
    let space = SpaceModel::homogeneous(3.0).unwrap();
    let e = ExponentConfig::new(2.0, 1.0).unwrap();
    let sweeps = [Sweep {
        param: SweptParam::Alpha1,
        start: -4.0,
        stop: -2.0,
        step: 0.5,
    }];
    let table = region_scan(&space, PowerWeightParams::new(0.0, -6.0, 0.0), &sweeps, &e).unwrap();
    let flags: Vec<_> = table.rows.iter().map(|r| r.verdict.unsupported.is_some()).collect();
    assert_eq!(flags, [false, false, true, false, false]);
    assert!(table
        .rows
        .iter()
        .filter(|r| r.verdict.unsupported.is_some())
        .all(|r| !r.verdict.admissible));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn flat_curvature_matches_homogeneous(params in params(), e in exponents(), n in 1u32..8) {
        prop_assert_eq!(check_cartan_hadamard(params, n, 0.0, &e), check_homogeneous(params, f64::from(n), &e));
        let curved = check_cartan_hadamard(params, n, 2.5, &e);
        prop_assert_eq!(curved, check_hyperbolic(params, n, &e));
    }

    #[test]
    fn condition_values_are_affine(params in params(), e in exponents(), dim in 1.0f64..6.0, h in 0.01f64..1.0) {
        let base = check_homogeneous(params, dim, &e);
        for (k, &param) in PARAMS.iter().enumerate() {
            let moved = check_homogeneous(params.with(param, params.get(param) + h), dim, &e);
            for (c0, c1) in base.conditions.iter().zip(&moved.conditions) {
                let slope = (c1.value - c0.value) / h;
                prop_assert!((slope - c0.gradient[k]).abs() < 1e-9 * (1.0 + c0.gradient[k].abs()) / h.min(1.0),
                    "{} along {}: {} vs {}", c0.name, param, slope, c0.gradient[k]);
            }
        }
    }

    #[test]
    fn hyperbolic_offsets_shift_by_one(params in params(), e in exponents(), n in 2u32..8) {
        let flat = check_homogeneous(params, f64::from(n), &e);
        let curved = check_hyperbolic(params, n, &e);
        let outer = params.alpha2 + f64::from(n);
        prop_assert!((flat.conditions[0].value - outer).abs() < 1e-12);
        prop_assert!((curved.conditions[0].value - (outer - 1.0)).abs() < 1e-12);
        prop_assert!((flat.conditions[1].value - curved.conditions[1].value).abs() < 1e-12);
        prop_assert!((flat.conditions[2].value - curved.conditions[2].value).abs() < 1e-12);
    }
}
