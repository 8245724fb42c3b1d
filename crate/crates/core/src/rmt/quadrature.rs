use std::f64::consts::PI;

/// Gauss–Chebyshev node count used for arcsine-law integrals.
///
/// Exact for polynomial integrands up to degree `2 * ARCSINE_NODES - 1`.
pub const ARCSINE_NODES: usize = 256;

/// Nodes `cos((2j−1)π / 2k)`, `j = 1..=k`, of the `k`-point Gauss–Chebyshev
/// rule. Every node carries weight `1/k` against the arcsine law.
pub fn gauss_chebyshev_nodes(k: usize) -> Vec<f64> {
    (1..=k)
        .map(|j| ((2 * j - 1) as f64 * PI / (2 * k) as f64).cos())
        .collect()
}

/// `∫ f dH` for the arcsine law `H'(t) = 1/(π√(1−t²))` on (−1, 1).
pub fn arcsine_integral(f: impl Fn(f64) -> f64) -> f64 {
    arcsine_integral_with(f, ARCSINE_NODES)
}

pub fn arcsine_integral_with(f: impl Fn(f64) -> f64, k: usize) -> f64 {
    let nodes = gauss_chebyshev_nodes(k);
    nodes.iter().map(|&t| f(t)).sum::<f64>() / k as f64
}

/// Gauss–Legendre nodes and weights on [−1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(k: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(k >= 1, "Gauss–Legendre rule needs at least one node");
    let mut nodes = vec![0.0; k];
    let mut weights = vec![0.0; k];
    let kf = k as f64;
    for i in 0..k.div_ceil(2) {
        // Tricomi initial guess
        let mut x = (PI * (i as f64 + 0.75) / (kf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(k, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(k, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[k - 1 - i] = x;
        weights[i] = w;
        weights[k - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(k: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for j in 2..=k {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if k == 0 {
        return (1.0, 0.0);
    }
    let d = k as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
