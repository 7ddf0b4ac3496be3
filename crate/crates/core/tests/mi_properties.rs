use noncoh_core::channel::{derive_params, ChannelParams, TwoPointInput};
use noncoh_core::mi::{
    conditional_entropy, input_entropy, j_case1, j_case2, j_case3, mi_derivative_a2, mutual_information,
};
use noncoh_core::oracle::{fd_derivative, j_quadrature, FdOrder, QuadratureConfig};
use proptest::prelude::*;

const FAULT: bool = cfg!(feature = "inject-fault");

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn beta_monotone(a2 in 0.01f64..0.98, x2 in 0.05f64..20.0, s in 0.1f64..5.0, da in 0.001f64..0.01, dx in 0.01f64..1.0) {
        let ch = ChannelParams::new(s).unwrap();
        let b = |a2: f64, x2: f64| derive_params(0.0, &TwoPointInput::new(a2, x2).unwrap(), &ch).unwrap().beta;
        prop_assert!(b(a2 + da, x2) > b(a2, x2));
        prop_assert!(b(a2, x2 + dx) < b(a2, x2));
    }

    #[test]
    fn scale_invariance(a2 in 0.02f64..0.98, x2 in 0.1f64..30.0, c in 0.01f64..100.0) {
        let one = ChannelParams::new(1.0).unwrap();
        let scaled = ChannelParams::new(c).unwrap();
        let i1 = mutual_information(&TwoPointInput::new(a2, x2).unwrap(), &one).unwrap().nats;
        let i2 = mutual_information(&TwoPointInput::new(a2, c.sqrt() * x2).unwrap(), &scaled).unwrap().nats;
        prop_assert!((i1 - i2).abs() <= 1e-12, "{} vs {}", i1, i2);
    }

    #[test]
    fn bounds(a2 in 0.0f64..=1.0, x2 in 0.0f64..50.0, s in 0.1f64..4.0) {
        let inp = TwoPointInput::new(a2, x2).unwrap();
        let ch = ChannelParams::new(s).unwrap();
        let i = mutual_information(&inp, &ch).unwrap().nats;
        prop_assert!(i >= 0.0);
        prop_assert!(i <= input_entropy(&inp) + 1e-12);
        prop_assert!(i <= 2f64.ln());
        prop_assert!(conditional_entropy(&inp, &ch).unwrap() >= 0.0);
    }
}

#[test]
fn route_consistency() {
    if FAULT {
        return;
    }
    let mut worst = 0.0f64;
    let mut compared = 0;
    for i in 0..25 {
        let a2 = 0.03 + 0.94 * i as f64 / 24.0;
        for j in 0..16 {
            let x2 = 0.1 * 300f64.powf(j as f64 / 15.0);
            let inp = TwoPointInput::new(a2, x2).unwrap();
            let ch = ChannelParams::new(1.0).unwrap();
            for x in [0.0, x2] {
                let d = derive_params(x, &inp, &ch).unwrap();
                let pole = std::f64::consts::PI * (d.beta.ln() / d.alpha).exp() / (std::f64::consts::PI / d.alpha).sin().abs();
                let (Ok(a), Ok(b)) = (j_case2(x, &inp, &ch), j_case3(x, &inp, &ch)) else { continue };
                if pole > 1e4 {
                    continue;
                }
                compared += 1;
                worst = worst.max((a - b).abs());
            }
        }
    }
    eprintln!("route consistency: {compared} points, worst {worst:e}");
    assert!(compared > 500);
    assert!(worst <= 1e-8);
}

#[test]
fn case1_is_limit_of_case2() {
    let cfg = QuadratureConfig::default();
    let ch = ChannelParams::new(1.0).unwrap();
    for n in [1u32, 2, 3] {
        let at = |alpha: f64| {
            // n = 1 uses x = x2 (α = x2²/σ²); n ≥ 2 uses x = 0 (α = x2²/(x2²+σ²)).
            let (x2, x_is_x2) = if n == 1 { (alpha.sqrt(), true) } else { ((alpha / (1.0 - alpha)).sqrt(), false) };
            let inp = TwoPointInput::new(0.4, x2).unwrap();
            let x = if x_is_x2 { x2 } else { 0.0 };
            (inp, x)
        };
        let target = 1.0 / n as f64;
        let (inp0, x0) = at(target);
        let centre = j_case1(x0, &inp0, &ch).unwrap();
        let mut sides = Vec::new();
        for delta in [-1e-4, 1e-4] {
            let (inp, x) = at(target + delta);
            let c2 = j_case2(x, &inp, &ch).unwrap();
            let q = j_quadrature(x, &inp, &ch, &cfg).unwrap();
            assert!((c2 - q).abs() < 1e-8, "n={n} delta={delta}");
            sides.push(c2);
        }
        let (lo, hi) = (sides[0].min(sides[1]), sides[0].max(sides[1]));
        assert!(lo <= centre && centre <= hi, "n={n}: {lo} {centre} {hi}");
    }
}

#[test]
fn derivative_random_points() {
    // Deterministic pseudo-random points: a2 ∈ [0.05, 0.95], x2 ∈ [0.2, 10].
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..50 {
        let a2 = 0.05 + 0.9 * next();
        let x2 = 0.2 + 9.8 * next();
        let s = 0.5 + next();
        let capacity = next() < 0.5;
        let ch = if capacity {
            ChannelParams::with_power(s, a2 * x2 * x2).unwrap()
        } else {
            ChannelParams::new(s).unwrap()
        };
        let p = ch.power_budget;
        let f = |a: f64| {
            let x = p.map_or(x2, |p| (p / a).sqrt());
            mutual_information(&TwoPointInput::new(a, x).unwrap(), &ch).unwrap().nats
        };
        let fd = fd_derivative(f, a2, FdOrder::Central5);
        let an = mi_derivative_a2(&TwoPointInput::new(a2, x2).unwrap(), &ch).unwrap();
        assert!((an - fd).abs() <= 1e-5 * fd.abs().max(1e-4), "a2={a2} x2={x2} s={s} cap={capacity}: {an} vs {fd}");
    }
}

#[test]
fn large_x2_sequence() {
    if FAULT {
        return;
    }
    let ch = ChannelParams::new(1.0).unwrap();
    let hb = input_entropy(&TwoPointInput::new(0.3, 1.0).unwrap());
    let gaps: Vec<f64> = [1.0, 10.0, 100.0, 1000.0]
        .iter()
        .map(|&x2| hb - mutual_information(&TwoPointInput::new(0.3, x2).unwrap(), &ch).unwrap().nats)
        .collect();
    eprintln!("gaps {gaps:?}");
    assert!(gaps.iter().all(|&g| g > 0.0));
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));
    assert!(gaps[3] <= 2e-3);
}
