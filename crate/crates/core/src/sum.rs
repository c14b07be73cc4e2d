//! Accumulators for long floating-point sums.

use std::iter::Sum;
use std::ops::AddAssign;

/// Neumaier (improved Kahan–Babuška) compensated sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub const fn new() -> Self {
        CompensatedSum { sum: 0.0, carry: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another partial sum in, keeping both carries.
    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.carry);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl AddAssign<f64> for CompensatedSum {
    fn add_assign(&mut self, x: f64) {
        self.add(x);
    }
}

impl Sum<f64> for CompensatedSum {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator of reals.
pub fn csum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().sum::<CompensatedSum>().value()
}

/// Exactly rounded sum kept as a list of non-overlapping partials
/// (Shewchuk's algorithm, as in Python's `math.fsum`).
///
/// [`ExactSum::value`] is the exact sum of all terms rounded once to the
/// nearest double, so it does not depend on the order of additions or on
/// how partial sums were grouped before [`ExactSum::merge`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExactSum {
    partials: Vec<f64>,
    /// Running sum of infinities and NaNs, which the partials cannot hold.
    special: f64,
}

impl ExactSum {
    pub const fn new() -> Self {
        ExactSum { partials: Vec::new(), special: 0.0 }
    }

    pub fn add(&mut self, mut x: f64) {
        if !x.is_finite() {
            self.special += x;
            return;
        }
        let mut i = 0;
        for j in 0..self.partials.len() {
            let mut y = self.partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        self.partials.truncate(i);
        self.partials.push(x);
    }

    pub fn merge(&mut self, other: &ExactSum) {
        for &p in &other.partials {
            self.add(p);
        }
        self.special += other.special;
    }

    pub fn value(&self) -> f64 {
        if self.special != 0.0 || self.special.is_nan() {
            return self.special;
        }
        let p = &self.partials;
        let mut n = p.len();
        if n == 0 {
            return 0.0;
        }
        n -= 1;
        let mut hi = p[n];
        let mut lo = 0.0;
        while n > 0 {
            let x = hi;
            n -= 1;
            let y = p[n];
            hi = x + y;
            lo = y - (hi - x);
            if lo != 0.0 {
                break;
            }
        }
        // Round half-way cases using the sign of the next partial down.
        if n > 0 && ((lo < 0.0 && p[n - 1] < 0.0) || (lo > 0.0 && p[n - 1] > 0.0)) {
            let y = lo * 2.0;
            let x = hi + y;
            if y == x - hi {
                hi = x;
            }
        }
        hi
    }
}

/// Exactly rounded sum of an iterator of reals.
pub fn esum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = ExactSum::new();
    for x in iter {
        acc.add(x);
    }
    acc.value()
}

/// Exact fixed-point accumulator with 64 fractional bits.
///
/// Terms are rounded once to a multiple of 2^-64 on entry; after that,
/// addition is exact integer arithmetic and therefore independent of order.
/// Terms must satisfy |x| < 2^62 and the running total must stay below 2^63.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FixedSum(i128);

const FRAC_BITS: i32 = 64;

impl FixedSum {
    pub const ZERO: FixedSum = FixedSum(0);

    pub fn from_f64(x: f64) -> Self {
        debug_assert!(x.is_finite() && x.abs() < (1u64 << 62) as f64);
        // Scaling by a power of two is exact; the cast rounds toward zero,
        // so round first.
        FixedSum((x * 2f64.powi(FRAC_BITS)).round() as i128)
    }

    #[inline]
    pub fn add_f64(&mut self, x: f64) {
        self.0 += FixedSum::from_f64(x).0;
    }

    pub fn to_f64(self) -> f64 {
        // Split to keep the conversion correctly rounded for large totals.
        let hi = (self.0 >> FRAC_BITS) as f64;
        let lo = (self.0 & ((1i128 << FRAC_BITS) - 1)) as f64 / 2f64.powi(FRAC_BITS);
        hi + lo
    }

    pub fn raw(self) -> i128 {
        self.0
    }
}

impl std::ops::Add for FixedSum {
    type Output = FixedSum;
    fn add(self, rhs: FixedSum) -> FixedSum {
        FixedSum(self.0 + rhs.0)
    }
}

impl AddAssign for FixedSum {
    fn add_assign(&mut self, rhs: FixedSum) {
        self.0 += rhs.0;
    }
}

impl Sum for FixedSum {
    fn sum<I: Iterator<Item = FixedSum>>(iter: I) -> Self {
        iter.fold(FixedSum::ZERO, |a, b| a + b)
    }
}
