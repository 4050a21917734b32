//! Floating-point helpers shared by the exact and spectral routes.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = KahanSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

pub fn kahan_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<KahanSum>().value()
}

/// `x * 2^e` without intermediate overflow or premature underflow.
pub fn ldexp(mut x: f64, mut e: i64) -> f64 {
    const STEP: i64 = 1000;
    while e > STEP {
        x *= 2f64.powi(STEP as i32);
        e -= STEP;
    }
    while e < -STEP {
        x *= 2f64.powi(-STEP as i32);
        e += STEP;
    }
    x * 2f64.powi(e as i32)
}

/// `count / 2^e` rounded to within one ulp, valid for counts far beyond f64 range.
pub fn ratio_pow2(count: &BigUint, e: u64) -> f64 {
    let bits = count.bits();
    if bits == 0 {
        return 0.0;
    }
    if bits <= 64 {
        let v = count.to_u64().expect("fits in 64 bits") as f64;
        return ldexp(v, -(e as i64));
    }
    let shift = bits - 64;
    let top = (count >> shift).to_u64().expect("fits in 64 bits") as f64;
    ldexp(top, shift as i64 - e as i64)
}

/// `cos(pi * num / den)` with the argument reduced exactly in integers to
/// [0, pi/4], so quarter periods give exact zeros.
pub fn cos_pi_frac(num: i128, den: u64) -> f64 {
    use std::f64::consts::PI;
    let den = den as i128;
    let mut r = num.rem_euclid(2 * den);
    if r > den {
        r = 2 * den - r;
    }
    let (r, sign) = if 2 * r > den { (den - r, -1.0) } else { (r, 1.0) };
    if 2 * r == den {
        return 0.0;
    }
    // r/den in [0, 1/2): cos directly up to pi/4, sin of the complement beyond.
    let v = if 4 * r <= den {
        (PI * r as f64 / den as f64).cos()
    } else {
        (PI * (den - 2 * r) as f64 / (2 * den) as f64).sin()
    };
    sign * v
}

/// `c^n` evaluated as sign * exp(n ln|c|); zero bases give zero for n >= 1.
pub fn signed_pow(c: f64, n: u64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    if c == 0.0 {
        return 0.0;
    }
    let mag = (n as f64 * c.abs().ln()).exp();
    if c < 0.0 && n % 2 == 1 {
        -mag
    } else {
        mag
    }
}
