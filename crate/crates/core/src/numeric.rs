//! Small numerical helpers shared across modules.

/// `ln(sum(exp(xs)))` without overflow. Returns `-inf` for an empty or all `-inf` input.
pub(crate) fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// `ln(exp(a) + exp(b))`.
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Normalized `exp(xs - max)`, i.e. a softmax over log weights.
pub(crate) fn softmax<const K: usize>(xs: [f64; K]) -> [f64; K] {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out = xs.map(|x| (x - max).exp());
    let total: f64 = out.iter().sum();
    for v in &mut out {
        *v /= total;
    }
    out
}
