//! Small numerical helpers shared across modules.

/// Neumaier's variant of Kahan compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
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

/// Compensated sum of an iterator of reals.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = CompensatedSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Ordinary least-squares fit `y ≈ intercept + slope·x`. Returns `(slope, intercept)`.
///
/// Returns `None` for fewer than two points or a degenerate abscissa.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let mean_x = compensated_sum(xs.iter().copied()) / n as f64;
    let mean_y = compensated_sum(ys.iter().copied()) / n as f64;
    let sxx = compensated_sum(xs.iter().map(|x| (x - mean_x) * (x - mean_x)));
    let sxy = compensated_sum(xs.iter().zip(ys).map(|(x, y)| (x - mean_x) * (y - mean_y)));
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, mean_y - slope * mean_x))
}

/// Largest `x` with `e^x` finite in double precision.
pub const MAX_EXP_ARG: f64 = 709.78;
