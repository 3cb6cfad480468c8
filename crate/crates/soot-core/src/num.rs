//! Compensated (Neumaier) summation and norms. The solver's descent
//! assertions run at 1e-9..1e-10 absolute slack, so plain left-to-right
//! accumulation is not good enough for objective values.

/// Neumaier-compensated sum.
pub fn sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = 0.0;
    let mut c = 0.0;
    for v in values {
        let t = s + v;
        if s.abs() >= v.abs() {
            c += (s - t) + v;
        } else {
            c += (v - t) + s;
        }
        s = t;
    }
    s + c
}

pub fn sum_sq(xs: &[f64]) -> f64 {
    sum(xs.iter().map(|&v| v * v))
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    sum(a.iter().zip(b).map(|(&x, &y)| x * y))
}

pub fn norm2(xs: &[f64]) -> f64 {
    sum_sq(xs).sqrt()
}

pub fn norm1(xs: &[f64]) -> f64 {
    sum(xs.iter().map(|&v| v.abs()))
}

/// ‖a − b‖₂
pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    sum(a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y))).sqrt()
}
