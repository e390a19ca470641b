//! Small numeric helpers shared across modules: exact-in-double factorials,
//! integer powers of complex numbers, compensated summation, matrix norms.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Largest particle number supported by the double-precision factorial table.
pub const MAX_PARTICLES: u32 = 20;

/// n! as f64. Exact for n <= 20 (bit pattern of the integer value).
pub fn factorial(n: u32) -> f64 {
    debug_assert!(
        n <= MAX_PARTICLES,
        "factorial table bounded at {MAX_PARTICLES}"
    );
    let mut acc = 1.0f64;
    for k in 2..=n {
        acc *= k as f64;
    }
    acc
}

/// Binomial coefficient as f64, multiplicative form.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// z^n for non-negative integer n by binary exponentiation, with 0^0 = 1.
pub fn cpowi(z: Complex64, n: u32) -> Complex64 {
    let mut result = Complex64::new(1.0, 0.0);
    let mut base = z;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result *= base;
        }
        base *= base;
        e >>= 1;
    }
    result
}

/// Neumaier-compensated accumulator for complex sums with 2^n terms.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: Complex64) {
        self.sum.re = add_comp(self.sum.re, v.re, &mut self.comp.re);
        self.sum.im = add_comp(self.sum.im, v.im, &mut self.comp.im);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

fn add_comp(sum: f64, v: f64, comp: &mut f64) -> f64 {
    let t = sum + v;
    if sum.abs() >= v.abs() {
        *comp += (sum - t) + v;
    } else {
        *comp += (v - t) + sum;
    }
    t
}

/// Max absolute entry of a complex matrix.
pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// ||A - B||_max.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// ||U^H U - I||_max, the unitarity defect.
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let n = u.nrows();
    let gram = u.adjoint() * u;
    let eye = DMatrix::<Complex64>::identity(n, n);
    max_abs_diff(&gram, &eye)
}

/// ||A - A^H||_max, the Hermiticity defect.
pub fn hermiticity_defect(a: &DMatrix<Complex64>) -> f64 {
    max_abs_diff(a, &a.adjoint())
}
