use std::fs::File;
use std::path::PathBuf;

use chrono::NaiveDate;
use hiddencode_core::baseball::{
    code_b_expected, estimate_bang_rate, group_by_game, parse_pitch_csv, per_game_evidence, PitchRecord,
    PitchTaxonomy, RowPolicy,
};
use hiddencode_core::evidence::log10_lr;
use hiddencode_core::{CodedModel, MatchSummary, RandomModel, Signal};
use proptest::prelude::*;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn date(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

fn pitch(game: &str, seq: u32, pitch_type: &str, bangs: u32) -> PitchRecord {
    PitchRecord {
        game_id: game.into(),
        date: date(2017, 7, 1),
        opponent: "NYY".into(),
        inning: 1,
        pitch_seq: seq,
        pitch_type: pitch_type.into(),
        bangs,
    }
}

#[test]
fn quiet_period_statistics() {
    let log = parse_pitch_csv(File::open(fixture("quiet_period.csv")).unwrap(), RowPolicy::Fail).unwrap();
    assert_eq!(log.records.len(), 1100);
    let rate = estimate_bang_rate(&log.records, date(2017, 4, 3), date(2017, 5, 24)).unwrap();
    assert_eq!(rate.per_pitch_rate, 0.015);
    assert_eq!(rate.per_game_max_rate, 0.03);
    assert_eq!(rate.games, 22);
    assert_eq!(rate.pitches, 1000);
}

#[test]
fn malformed_rows_are_skipped_with_warnings() {
    let path = fixture("pitches10.csv");
    assert!(parse_pitch_csv(File::open(&path).unwrap(), RowPolicy::Fail).is_err());
    let log = parse_pitch_csv(File::open(&path).unwrap(), RowPolicy::SkipWithWarning).unwrap();
    assert_eq!(log.records.len(), 8);
    assert_eq!(log.warnings.len(), 2);
    assert!(log.warnings[0].starts_with("line 5:"), "{}", log.warnings[0]);
    assert!(log.warnings[1].starts_with("line 8:"), "{}", log.warnings[1]);
}

#[test]
fn per_game_log_additivity() {
    let log = parse_pitch_csv(
        File::open(fixture("pitches10.csv")).unwrap(),
        RowPolicy::SkipWithWarning,
    )
    .unwrap();
    let t = PitchTaxonomy::default();
    let coded = CodedModel::new(0.8).unwrap();
    let random = RandomModel::new(0.1, false).unwrap();
    let ev = per_game_evidence(&log.records, &t, RowPolicy::Fail, &coded, &random).unwrap();
    assert_eq!(ev.games.len(), 2);

    let g1: Vec<_> = log
        .records
        .iter()
        .filter(|r| r.game_id == "G1")
        .cloned()
        .collect();
    let g2: Vec<_> = log
        .records
        .iter()
        .filter(|r| r.game_id == "G2")
        .cloned()
        .collect();
    let x = per_game_evidence(&g1, &t, RowPolicy::Fail, &coded, &random)
        .unwrap()
        .combined_log10_lr;
    let y = per_game_evidence(&g2, &t, RowPolicy::Fail, &coded, &random)
        .unwrap()
        .combined_log10_lr;
    assert_eq!(ev.games[0].log10_lr, x);
    assert_eq!(ev.games[1].log10_lr, y);
    assert_eq!(ev.combined_log10_lr, x + y);

    // G1 keeps FF0 SL1 CH2 FT0: four matches, two bangs
    let s = ev.games[0].summary;
    assert_eq!((s.n, s.m, s.positives), (4, 4, 2));
}

#[test]
fn yankees_series_as_one_group() {
    let s = MatchSummary::new(267, 201, 85).unwrap();
    let lr = log10_lr(
        &s,
        &CodedModel::new(0.8).unwrap(),
        &RandomModel::new(0.1, false).unwrap(),
    )
    .unwrap();
    assert!((lr - 30.53).abs() < 0.05);
}

#[test]
fn taxonomy_partition_is_total() {
    let t = PitchTaxonomy::default();
    for tok in t.fastball_types() {
        assert_eq!(code_b_expected(tok, &t).unwrap(), Signal::Zero);
    }
    for tok in t.offspeed_types() {
        assert_eq!(code_b_expected(tok, &t).unwrap(), Signal::One);
    }
}

fn arb_records() -> impl Strategy<Value = Vec<PitchRecord>> {
    let types = ["FF", "SL", "CH", "SI", "CU", "FC"];
    proptest::collection::vec((0usize..5, 0usize..6, 0u32..3), 1..200).prop_map(move |rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, (g, ty, b))| pitch(&format!("G{g}"), i as u32 + 1, types[ty], b))
            .collect()
    })
}

proptest! {
    #[test]
    fn grouping_preserves_records(recs in arb_records()) {
        let groups = group_by_game(&recs);
        prop_assert_eq!(groups.iter().map(|g| g.records.len()).sum::<usize>(), recs.len());
        for g in &groups {
            prop_assert!(g.records.iter().all(|r| r.game_id == g.game_id));
            prop_assert!(g.records.windows(2).all(|w| w[0].pitch_seq < w[1].pitch_seq));
        }
    }

    #[test]
    fn combined_is_exact_sum(recs in arb_records(), p in 0.55f64..0.95, q_max in 0.05f64..=1.0) {
        let ev = per_game_evidence(
            &recs,
            &PitchTaxonomy::default(),
            RowPolicy::Fail,
            &CodedModel::new(p).unwrap(),
            &RandomModel::new(q_max, false).unwrap(),
        ).unwrap();
        let sum: f64 = ev.games.iter().map(|g| g.log10_lr).sum();
        prop_assert_eq!(ev.combined_log10_lr, sum);
    }

    #[test]
    fn pooled_rate_never_exceeds_peak(recs in arb_records()) {
        let r = estimate_bang_rate(&recs, date(2017, 7, 1), date(2017, 7, 1)).unwrap();
        prop_assert!(r.per_pitch_rate <= r.per_game_max_rate);
        prop_assert_eq!(r.pitches, recs.len());
    }
}
