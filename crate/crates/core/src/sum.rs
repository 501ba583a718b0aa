//! Deterministic compensated summation.
//!
//! Every reduction in the crate goes through [`NeumaierSum`] over values
//! collected in a fixed order, so results are bit-identical regardless of
//! how many threads produced the terms.

use num_complex::Complex64;

/// Neumaier (improved Kahan–Babuška) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of a sequence, in iteration order.
pub fn sum(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().collect::<NeumaierSum>().value()
}

/// Compensated complex sum, real and imaginary parts accumulated separately.
pub fn sum_complex(values: impl IntoIterator<Item = Complex64>) -> Complex64 {
    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    for z in values {
        re.add(z.re);
        im.add(z.im);
    }
    Complex64::new(re.value(), im.value())
}

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
///
/// The output preserves input order, which is what makes the downstream
/// reductions deterministic.
pub fn ordered_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_lost_by_naive_sum() {
        let values = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(values.iter().sum::<f64>(), 0.0);
        assert_eq!(sum(values), 2.0);
    }

    #[test]
    fn many_tenths() {
        let s = sum(std::iter::repeat_n(0.1, 1_000_000));
        assert!((s - 100_000.0).abs() < 1e-9);
    }

    #[test]
    fn complex_parts_are_independent() {
        let z = sum_complex([
            Complex64::new(1.0, 1e100),
            Complex64::new(1e100, 1.0),
            Complex64::new(-1e100, -1e100),
        ]);
        assert_eq!(z, Complex64::new(1.0, 1.0));
    }

    #[test]
    fn ordered_map_keeps_order() {
        let xs: Vec<usize> = (0..10_000).collect();
        let ys = ordered_map(&xs, |&x| x * 2);
        assert!(ys.iter().enumerate().all(|(i, &y)| y == 2 * i));
    }
}
