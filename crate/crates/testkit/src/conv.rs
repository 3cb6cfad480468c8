//! Brute-force linear convolution, the reference for every boundary and
//! offset convention in the workspace.

/// Zero-padded convolution with an explicit center offset:
/// `out[i] = sum_j k[j] * x[i + center - j]`, indices outside `x` read as 0.
pub fn conv_with_center_brute(k: &[f64], x: &[f64], center: usize) -> Vec<f64> {
    let n = x.len();
    let mut out = vec![0.0; n];
    for i in 0..n {
        let mut acc = 0.0;
        for (j, &kj) in k.iter().enumerate() {
            let idx = i as isize + center as isize - j as isize;
            if idx >= 0 && (idx as usize) < n {
                acc += kj * x[idx as usize];
            }
        }
        out[i] = acc;
    }
    out
}

/// "Same" convolution: center offset `⌊len(k)/2⌋`.
pub fn conv_same_brute(k: &[f64], x: &[f64]) -> Vec<f64> {
    conv_with_center_brute(k, x, k.len() / 2)
}
