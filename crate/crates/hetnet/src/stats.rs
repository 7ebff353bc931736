//! Small statistics helpers shared by the simulators and the test suites.

/// Two-sample Kolmogorov-Smirnov distance: the sup-norm gap between the two
/// empirical CDFs. Ties and infinities are handled by right-continuous
/// counting.
pub fn ks_distance_two_sample(xs: &[f64], ys: &[f64]) -> f64 {
    assert!(!xs.is_empty() && !ys.is_empty());
    let mut a: Vec<f64> = xs.to_vec();
    let mut b: Vec<f64> = ys.to_vec();
    a.sort_unstable_by(|p, q| p.total_cmp(q));
    b.sort_unstable_by(|p, q| p.total_cmp(q));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Standard error of a binomial proportion.
pub fn binomial_stderr(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}
