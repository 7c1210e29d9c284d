//! Values fixed by exhaustive scans, frozen so that changes in scan order or
//! semantics show up as test failures.

use topofilt::enumeration::enumerate_topologies;
use topofilt::filtration::{is_filtration, is_weak_filtration, FiltrationSeq};
use topofilt::verify::explore::{explore, weak_not_full, Query};
use topofilt::verify::{check_all, CheckConfig, Outcome};

#[test]
fn pair_counts() {
    let counts: Vec<usize> = (0..=4).map(|n| enumerate_topologies(n).unwrap().pairs().count()).collect();
    assert_eq!(counts, vec![1, 1, 9, 192, 9040]);
}

#[test]
fn first_weak_but_not_full_filtration() {
    assert!(weak_not_full(&enumerate_topologies(2).unwrap()).unwrap().is_none());
    let seq = weak_not_full(&enumerate_topologies(3).unwrap()).unwrap().expect("a witness exists at n = 3");
    let want: FiltrationSeq =
        serde_json::from_str(r#"{"n":3,"stages":[[0,1,2,3,7],[0,1,2,3,7]],"target":[0,1,2,3,5,7]}"#).unwrap();
    assert_eq!(seq, want);
    assert!(is_weak_filtration(&seq).is_pass());
    assert!(!is_filtration(&seq).is_pass());
}

#[test]
fn unreached_and_solid_gap_counts() {
    let counts: Vec<usize> = (1..=3).map(|n| explore(Query::UnreachedPairs, n).unwrap().count).collect();
    assert_eq!(counts, vec![0, 3, 91]);
    let gap = explore(Query::SolidGap, 3).unwrap();
    assert_eq!(gap.count, 1290);
    assert!(gap.truncated);
}

#[test]
fn instance_counts_at_three_points() {
    let reports = check_all(3, &CheckConfig::default()).unwrap();
    let got: Vec<(String, usize, usize)> =
        reports.iter().map(|r| (r.property_id.to_string(), r.instances_checked, r.hypothesis_met)).collect();
    let want = [
        ("L_OPB_I", 192, 192),
        ("L_OPB_II", 1611, 1611),
        ("P_SLO_I", 192, 192),
        ("P_SLO_II", 1611, 1611),
        ("T_STS", 192, 32),
        ("C_TST_II", 192, 29),
        ("L_FRTH_I", 1707, 1707),
        ("L_FRTH_II", 1707, 1707),
        ("L_ONSL", 951, 951),
        ("L_OBV", 951, 951),
        ("L_SLAL_C", 1611, 1611),
        ("E_DOWN", 960, 960),
        ("DISCRETE_STAGE_TRIVIALIZATIONS", 1707, 1707),
    ];
    let want: Vec<(String, usize, usize)> = want.iter().map(|&(p, a, b)| (p.to_string(), a, b)).collect();
    assert_eq!(got, want);
    assert!(reports.iter().all(|r| !r.outcome.is_fail()));
    assert!(matches!(reports.last().unwrap().outcome, Outcome::Trivialized { .. }));
}
