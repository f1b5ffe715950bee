use proptest::prelude::*;
use qcthreshold::frame::AffineFrame;
use qcthreshold::momentum::{l1_distance, MomentumDistribution};

fn dist() -> impl Strategy<Value = MomentumDistribution> {
    prop::collection::vec(0.0f64..1.0, 32).prop_map(|v| {
        let s: f64 = v.iter().sum::<f64>() * 0.25;
        let v = if s > 0.0 { v.into_iter().map(|x| x / s).collect() } else { vec![4.0 / 32.0; 32] };
        MomentumDistribution::new(-4.0, 0.25, v).unwrap()
    })
}

proptest! {
    #[test]
    fn l1_is_a_bounded_metric(a in dist(), b in dist(), c in dist()) {
        let ab = l1_distance(&a, &b).unwrap();
        let ba = l1_distance(&b, &a).unwrap();
        let bc = l1_distance(&b, &c).unwrap();
        let ac = l1_distance(&a, &c).unwrap();
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!(ac <= ab + bc + 1e-12);
        prop_assert!(ab <= 2.0 + 1e-12);
    }

    #[test]
    fn frames_stay_symplectic(a in -20.0f64..20.0, b in -20.0f64..20.0) {
        let f = AffineFrame::new(a).compose(AffineFrame::new(b));
        prop_assert!((f.s_x() * f.s_p() - 1.0).abs() < 1e-12);
        prop_assert_eq!(f.a, a + b);
    }
}
