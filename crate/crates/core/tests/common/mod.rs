#![allow(dead_code)]

/// Γ(z) via upward shift and the Stirling series; independent of the
/// library's Lanczos route.
pub fn gamma_oracle(z: f64) -> f64 {
    assert!(z > 0.0);
    let shift = 24usize;
    let w = z + shift as f64;
    let ln_w = w.ln();
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let series = inv / 12.0 - inv * inv2 / 360.0 + inv * inv2 * inv2 / 1260.0
        - inv * inv2 * inv2 * inv2 / 1680.0;
    let ln_gamma_w = (w - 0.5) * ln_w - w + 0.5 * (2.0 * std::f64::consts::PI).ln() + series;
    let denom: f64 = (0..shift).map(|k| z + k as f64).product();
    ln_gamma_w.exp() / denom
}

/// Plain forward Euler for the SIS system.
pub fn forward_euler_sis(
    beta: f64,
    gamma: f64,
    s0: f64,
    i0: f64,
    t_end: f64,
    n: usize,
) -> Vec<(f64, f64)> {
    let dt = t_end / n as f64;
    let mut out = vec![(s0, i0)];
    let (mut s, mut i) = (s0, i0);
    for _ in 0..n {
        let f = (gamma - beta * s / (s + i)) * i;
        s += dt * f;
        i -= dt * f;
        out.push((s, i));
    }
    out
}

pub fn argmax(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |best, k| if v[k] > v[best] { k } else { best })
}

pub fn argmin(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |best, k| if v[k] < v[best] { k } else { best })
}
