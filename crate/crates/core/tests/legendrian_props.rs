use handlecalc::legendrian::{
    classical_invariants, stabilize, stabilize_component, to_kirby, validate_front, FrontDiagram, FrontEvent,
};
use proptest::prelude::*;

/// Random closed fronts: random events while strands are open, then the
/// remaining strands are closed with right cusps at slot 0.
fn front() -> impl Strategy<Value = FrontDiagram> {
    prop::collection::vec((0u8..3, 0usize..8), 1..16).prop_map(|steps| {
        let mut events = vec![FrontEvent::LeftCusp(0)];
        let mut n = 2usize;
        for (kind, s) in steps {
            match kind {
                0 if n < 8 => {
                    events.push(FrontEvent::LeftCusp(s % (n + 1)));
                    n += 2;
                }
                1 if n >= 2 => {
                    events.push(FrontEvent::Crossing(s % (n - 1)));
                }
                2 if n >= 4 => {
                    events.push(FrontEvent::RightCusp(s % (n - 1)));
                    n -= 2;
                }
                _ => {}
            }
        }
        while n > 0 {
            events.push(FrontEvent::RightCusp(0));
            n -= 2;
        }
        FrontDiagram::new(events)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn generated_fronts_are_valid(f in front()) {
        prop_assert!(validate_front(&f).is_ok());
    }

    #[test]
    fn stabilization_lowers_tb(f in front(), pos in any::<bool>(), comp in 0usize..4) {
        let before = classical_invariants(&f).unwrap();
        let comp = comp % before.len();
        let sign = if pos { 1 } else { -1 };
        let g = stabilize_component(&f, comp, sign).unwrap();
        let after = classical_invariants(&g).unwrap();
        prop_assert_eq!(after.len(), before.len());
        for (c, (a, b)) in after.iter().zip(&before).enumerate() {
            if c == comp {
                prop_assert_eq!(a.tb, b.tb - 1);
                prop_assert_eq!(a.rotation, b.rotation + sign as i64);
            } else {
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn tb_plus_rot_is_odd(f in front()) {
        for c in classical_invariants(&f).unwrap() {
            prop_assert_eq!((c.tb + c.rotation).rem_euclid(2), 1);
        }
    }

    #[test]
    fn kirby_framing_is_tb_minus_one(f in front()) {
        let inv = classical_invariants(&f).unwrap();
        let k = to_kirby(std::slice::from_ref(&f)).unwrap();
        prop_assert_eq!(k.two_handle_count(), inv.len());
        for (i, c) in inv.iter().enumerate() {
            prop_assert_eq!(k.linking().get(i, i).clone(), (c.tb - 1).into());
        }
        prop_assert!(k.linking().is_symmetric());
    }

    #[test]
    fn reversal_keeps_tb(f in front()) {
        let n = f.component_count().unwrap();
        let g = f.reverse_component(0).unwrap();
        let (a, b) = (classical_invariants(&f).unwrap(), classical_invariants(&g).unwrap());
        prop_assert_eq!(a[0].tb, b[0].tb);
        prop_assert_eq!(a[0].rotation, -b[0].rotation);
        prop_assert_eq!(n, g.component_count().unwrap());
    }
}

#[test]
fn fixtures() {
    let u = FrontDiagram::standard_unknot();
    let t = FrontDiagram::right_handed_trefoil();
    for f in [
        u.clone(),
        t.clone(),
        stabilize(&u, 1).unwrap(),
        stabilize(&t, -1).unwrap(),
    ] {
        let c = classical_invariants(&f).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].tb + c[0].rotation).rem_euclid(2), 1, "{f}");
    }
    assert_eq!(classical_invariants(&t).unwrap()[0].tb, 1);
}
