//! Compensated (Neumaier) summation, component-wise for complex values.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }
}

pub(crate) trait Summand: Copy {
    type Acc: Default + Copy;
    fn push(acc: &mut Self::Acc, x: Self);
    fn total(acc: &Self::Acc) -> Self;
}

impl Summand for f64 {
    type Acc = Neumaier;
    fn push(acc: &mut Neumaier, x: f64) {
        acc.add(x);
    }
    fn total(acc: &Neumaier) -> f64 {
        acc.sum + acc.comp
    }
}

impl Summand for Complex64 {
    type Acc = (Neumaier, Neumaier);
    fn push(acc: &mut (Neumaier, Neumaier), x: Complex64) {
        acc.0.add(x.re);
        acc.1.add(x.im);
    }
    fn total(acc: &(Neumaier, Neumaier)) -> Complex64 {
        Complex64::new(acc.0.sum + acc.0.comp, acc.1.sum + acc.1.comp)
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct KahanSum<T: Summand> {
    acc: T::Acc,
}

impl<T: Summand> Default for KahanSum<T> {
    fn default() -> Self {
        KahanSum { acc: T::Acc::default() }
    }
}

impl<T: Summand> KahanSum<T> {
    #[inline]
    pub(crate) fn add(&mut self, x: T) {
        T::push(&mut self.acc, x);
    }

    pub(crate) fn value(&self) -> T {
        T::total(&self.acc)
    }
}
