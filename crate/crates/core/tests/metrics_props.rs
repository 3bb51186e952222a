use proptest::prelude::*;
use risray_core::metrics::receiver_statistics;
use risray_core::{
    compare_traces, db_statistics, satisfaction_fraction, Point2, Receiver, Role, SimulationTrace,
};

fn trace(series: &[f64]) -> SimulationTrace {
    SimulationTrace {
        receiver_ids: vec!["R".into()],
        settings: vec![0; series.len()],
        powers: series.iter().map(|&p| vec![p]).collect(),
    }
}

fn series() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-150.0..-20.0f64, 1..64)
}

proptest! {
    #[test]
    fn fractions_are_complementary(s in series(), thr in -150.0..-20.0f64, skip_frac in 0.0..1.0f64) {
        prop_assume!(s.iter().all(|&v| v != thr));
        let t = trace(&s);
        let skip = ((s.len() as f64) * skip_frac) as usize;
        let sub = Receiver::new("R", Point2::new(0.0, 0.0), Role::Subscriber, thr);
        let vic = Receiver::new("R", Point2::new(0.0, 0.0), Role::Victim, thr);
        let a = satisfaction_fraction(&t, &sub, skip).unwrap();
        let b = satisfaction_fraction(&t, &vic, skip).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!((a + b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn statistics_are_ordered(s in series()) {
        let st = db_statistics(&s).unwrap();
        let min = s.iter().cloned().fold(f64::MAX, f64::min);
        let max = s.iter().cloned().fold(f64::MIN, f64::max);
        prop_assert!(min <= st.p10 && st.p10 <= st.median && st.median <= st.p90 && st.p90 <= max);
        prop_assert!(min <= st.mean && st.mean <= max);
    }

    #[test]
    fn self_comparison_is_zero(s in series()) {
        let t = trace(&s);
        let d = compare_traces(&t, &t, "R", 0).unwrap();
        prop_assert_eq!((d.mean, d.median, d.p10, d.p90), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn common_shift_leaves_deltas(a in series(), shift in -30.0..30.0f64) {
        let b: Vec<f64> = a.iter().rev().map(|v| v - 3.0).collect();
        let d0 = compare_traces(&trace(&a), &trace(&b), "R", 0).unwrap();
        let sa: Vec<f64> = a.iter().map(|v| v + shift).collect();
        let sb: Vec<f64> = b.iter().map(|v| v + shift).collect();
        let d1 = compare_traces(&trace(&sa), &trace(&sb), "R", 0).unwrap();
        for (x, y) in [(d0.mean, d1.mean), (d0.median, d1.median), (d0.p10, d1.p10), (d0.p90, d1.p90)] {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }
}

#[test]
fn skip_restricts_the_window() {
    let t = trace(&[-10.0, -10.0, -50.0, -70.0]);
    let st = receiver_statistics(&t, "R", 2).unwrap();
    assert_eq!(st.mean, -60.0);
    assert!(receiver_statistics(&t, "R", 4).is_err());
}
