use curriculum_lab::pacing::{default_grid, PacingFamily, PacingSpec};
use proptest::prelude::*;

const N: usize = 1000;
const T: usize = 200;

#[test]
fn default_grid_has_180_specs() {
    assert_eq!(default_grid(N, T).unwrap().len(), 180);
}

#[test]
fn bounds_monotonicity_and_endpoints_over_default_grid() {
    for spec in default_grid(N, T).unwrap() {
        let floor = ((spec.b * N as f64).round() as usize).max(1);
        let sched = spec.schedule();
        assert_eq!(sched.len(), T);
        for (i, &g) in sched.iter().enumerate() {
            assert!((floor..=N).contains(&g), "{spec:?} t={} g={g}", i + 1);
        }
        assert!(sched.windows(2).all(|w| w[0] <= w[1]), "{spec:?} not monotone");
        if spec.a <= 1.0 {
            let reach = (spec.a * T as f64).ceil() as usize;
            assert!(sched[reach.max(1) - 1] + 1 >= N, "{spec:?} misses N at ceil(aT)");
        } else {
            assert!(sched[T - 1] < N, "{spec:?} reaches N although a > 1");
        }
    }
}

#[test]
fn degenerate_parameters_mean_full_set() {
    for family in PacingFamily::ALL {
        let zero_a = PacingSpec::new(family, 0.0, 0.3, N, T).unwrap();
        let unit_b = PacingSpec::new(family, 0.5, 1.0, N, T).unwrap();
        assert!(zero_a.is_standard() && unit_b.is_standard());
        assert!(zero_a.schedule().iter().chain(&unit_b.schedule()).all(|&g| g == N));
    }
}

#[test]
fn step_switches_once() {
    let spec = PacingSpec::new(PacingFamily::Step, 0.5, 0.2, N, T).unwrap();
    let s = spec.schedule();
    assert!(s[..99].iter().all(|&g| g == 200));
    assert!(s[99..].iter().all(|&g| g == N));
}

proptest! {
    #[test]
    fn arbitrary_specs_stay_in_bounds(
        fam in 0usize..6,
        a in 0.0f64..2.0,
        b in 0.0f64..=1.0,
        n in 1usize..5000,
        t in 1usize..400,
    ) {
        let spec = PacingSpec::new(PacingFamily::ALL[fam], a, b, n, t).unwrap();
        let sched = spec.schedule();
        prop_assert!(sched.iter().all(|&g| g >= 1 && g <= n));
        prop_assert!(sched.windows(2).all(|w| w[0] <= w[1]));
    }
}
