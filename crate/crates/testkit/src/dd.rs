//! Double-double accumulation (error-free transformations), used as a
//! higher-precision summation oracle against the library's compensated sums.

#[derive(Clone, Copy, Debug, Default)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

/// Knuth's TwoSum: s + e == a + b exactly.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bp = s - a;
    let e = (a - (s - bp)) + (b - bp);
    (s, e)
}

/// Fast TwoSum, valid when |a| >= |b|.
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn add_f64(self, v: f64) -> Dd {
        let (s, e) = two_sum(self.hi, v);
        let lo = self.lo + e;
        let (hi, lo) = quick_two_sum(s, lo);
        Dd { hi, lo }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// Sum of arbitrary f64 terms with double-double accumulation.
pub fn exact_sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    terms
        .into_iter()
        .fold(Dd::ZERO, |acc, t| acc.add_f64(t))
        .value()
}

/// Sum of squares with TwoProd term splitting (x*x plus its fma residual).
pub fn exact_sum_sq(x: &[f64]) -> f64 {
    let mut acc = Dd::ZERO;
    for &v in x {
        let p = v * v;
        let e = v.mul_add(v, -p);
        acc = acc.add_f64(p).add_f64(e);
    }
    acc.value()
}
