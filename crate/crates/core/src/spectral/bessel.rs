//! Bessel function of the first kind, order one.

const SERIES_LIMIT: f64 = 12.0;

/// Ascending power series `Σ (−1)^k (z/2)^{2k+1} / (k!(k+1)!)`.
pub fn bessel_j1_series(z: f64) -> f64 {
    let h = 0.5 * z;
    let h2 = h * h;
    let mut term = h;
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -h2 / (k * (k + 1.0));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) && k > h {
            break;
        }
        if k > 500.0 {
            break;
        }
    }
    sum
}

/// Hankel asymptotic expansion for large positive `z`, truncated at its
/// smallest term.
pub fn bessel_j1_asymptotic(z: f64) -> f64 {
    let mu = 4.0_f64;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut last = f64::INFINITY;
    let mut k = 0;
    loop {
        if term.abs() > last {
            break;
        }
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        last = term.abs();
        if last < 1e-18 {
            break;
        }
        k += 1;
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * z);
        if k > 60 {
            break;
        }
    }
    let chi = z - 0.75 * std::f64::consts::PI;
    (2.0 / (std::f64::consts::PI * z)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// `J₁(z)` for real `z`: series for `|z| ≤ 12`, asymptotic expansion beyond.
pub fn bessel_j1(z: f64) -> f64 {
    let a = z.abs();
    let v = if a <= SERIES_LIMIT {
        bessel_j1_series(a)
    } else {
        bessel_j1_asymptotic(a)
    };
    if z < 0.0 {
        -v
    } else {
        v
    }
}
