use num_complex::Complex;

use crate::{cast, Scalar};

/// Centered first derivative with second-order one-sided stencils at the two
/// edge points.
pub fn first_derivative<T: Scalar>(values: &[Complex<T>], h: T) -> Vec<Complex<T>> {
    let n = values.len();
    debug_assert!(n >= 3);
    let two_h = Complex::new(cast::<T>(2.0) * h, T::zero());
    let mut out = Vec::with_capacity(n);
    let three = Complex::new(cast::<T>(3.0), T::zero());
    let four = Complex::new(cast::<T>(4.0), T::zero());
    out.push((-three * values[0] + four * values[1] - values[2]) / two_h);
    for i in 1..n - 1 {
        out.push((values[i + 1] - values[i - 1]) / two_h);
    }
    out.push((three * values[n - 1] - four * values[n - 2] + values[n - 3]) / two_h);
    out
}

/// Centered second difference `(f_{i+1} - 2 f_i + f_{i-1}) / h²` on the
/// interior; the output is aligned with offsets `1 ..= n - 2` of the input.
pub fn second_difference<T: Scalar>(values: &[Complex<T>], h: T) -> Vec<Complex<T>> {
    let n = values.len();
    debug_assert!(n >= 3);
    let h2 = Complex::new(h * h, T::zero());
    let two = Complex::new(cast::<T>(2.0), T::zero());
    (1..n - 1)
        .map(|i| (values[i + 1] - two * values[i] + values[i - 1]) / h2)
        .collect()
}
