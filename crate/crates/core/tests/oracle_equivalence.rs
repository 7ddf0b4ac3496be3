use noncoh_core::channel::{ChannelParams, TwoPointInput};
use noncoh_core::mi::{j_routed, mutual_information};
use noncoh_core::oracle::{j_quadrature, mi_quadrature, QuadratureConfig};

fn grid() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    let sig = [1.0f64, 0.5, 2.0];
    for i in 0..20 {
        let a2 = 0.02 + 0.96 * i as f64 / 19.0;
        for j in 0..10 {
            let ratio = 0.1 * 300f64.powf(j as f64 / 9.0);
            let s = sig[(i + j) % 3];
            out.push((a2, ratio * s.sqrt(), s));
        }
    }
    out
}

#[test]
fn closed_forms_match_quadrature_on_grid() {
    if cfg!(feature = "inject-fault") {
        return;
    }
    let cfg = QuadratureConfig::default();
    let mut worst_j: (f64, String) = (0.0, String::new());
    let mut worst_i: (f64, String) = (0.0, String::new());
    for (a2, x2, s) in grid() {
        let inp = TwoPointInput::new(a2, x2).unwrap();
        let ch = ChannelParams::new(s).unwrap();
        for x in [0.0, x2] {
            let e = j_routed(x, &inp, &ch).unwrap();
            let q = j_quadrature(x, &inp, &ch, &cfg).unwrap();
            let d = (e.value - q).abs();
            if d > worst_j.0 {
                worst_j = (d, format!("{a2} {x2} {s} x={x} {:?}", e.route));
            }
        }
        let i = mutual_information(&inp, &ch).unwrap().nats;
        let iq = mi_quadrature(&inp, &ch, &cfg).unwrap();
        if (i - iq).abs() > worst_i.0 {
            worst_i = ((i - iq).abs(), format!("{a2} {x2} {s}"));
        }
    }
    eprintln!("worst J {:?} worst I {:?}", worst_j, worst_i);
    assert!(worst_j.0 <= 1e-8);
    assert!(worst_i.0 <= 1e-7);
}
