mod support;

use modeclass_core::{estimate_activity, ActivityTally};
use support::oracles::literal_activity_estimation;

#[test]
fn vote_matches_literal_procedure_on_all_small_tallies() {
    let mut checked = 0;
    for vehicle in 0..=6u32 {
        for bicycle in 0..=6u32 {
            for on_foot in 0..=6u32 {
                for still in 0..=6u32 {
                    for unknown in 0..=6u32 {
                        let tally = ActivityTally {
                            vehicle,
                            bicycle,
                            on_foot,
                            still,
                            unknown,
                        };
                        let expected = literal_activity_estimation(
                            on_foot as i64,
                            bicycle as i64,
                            still as i64,
                            vehicle as i64,
                            unknown as i64,
                        );
                        assert_eq!(estimate_activity(&tally).name(), expected, "{tally:?}");
                        checked += 1;
                    }
                }
            }
        }
    }
    assert_eq!(checked, 16_807);
}

#[test]
fn margin_cases_beyond_six() {
    for (bicycle, vehicle, expected) in [(10, 8, "vehicle"), (10, 7, "vehicle"), (10, 6, "bicycle")]
    {
        let tally = ActivityTally {
            vehicle,
            bicycle,
            ..Default::default()
        };
        assert_eq!(estimate_activity(&tally).name(), expected);
        assert_eq!(
            literal_activity_estimation(0, bicycle as i64, 0, vehicle as i64, 0),
            expected
        );
    }
}
