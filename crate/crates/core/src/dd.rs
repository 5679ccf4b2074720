//! Double-double floats and a minimal complex type over them.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::ToPrimitive;

use crate::poly::Rational;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Dd {
    pub(crate) fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub(crate) fn from_rational(r: &Rational) -> Self {
        let hi = r.to_f64().unwrap_or(f64::NAN);
        let Some(exact_hi) = Rational::from_float(hi) else {
            return Dd::from_f64(hi);
        };
        let lo = (r - exact_hi).to_f64().unwrap_or(0.0);
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub(crate) fn div_f64(self, c: f64) -> Self {
        let q1 = self.hi / c;
        let r = self - Dd::from_f64(c) * Dd::from_f64(q1);
        let q2 = r.hi / c;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    pub(crate) fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::default();
        }
        let x = self.hi.sqrt();
        let err = self - Dd::from_f64(x) * Dd::from_f64(x);
        let (hi, lo) = quick_two_sum(x, err.hi / (2.0 * x));
        Dd { hi, lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Cdd {
    pub(crate) re: Dd,
    pub(crate) im: Dd,
}

impl Cdd {
    pub(crate) fn real(re: Dd) -> Self {
        Cdd { re, im: Dd::default() }
    }

    pub(crate) fn one() -> Self {
        Cdd::real(Dd::from_f64(1.0))
    }

    pub(crate) fn powu(self, n: usize) -> Self {
        (0..n).fold(Cdd::one(), |acc, _| acc * self)
    }

    pub(crate) fn scale(self, c: Dd) -> Self {
        Cdd {
            re: self.re * c,
            im: self.im * c,
        }
    }

    pub(crate) fn abs(self) -> f64 {
        (self.re * self.re + self.im * self.im).sqrt().to_f64()
    }

    /// `exp(2 pi i / k)`, refined past f64 accuracy by Newton steps on `z^k = 1`.
    pub(crate) fn root_of_unity(k: usize) -> Self {
        let theta = std::f64::consts::TAU / k as f64;
        let mut z = Cdd {
            re: Dd::from_f64(theta.cos()),
            im: Dd::from_f64(theta.sin()),
        };
        for _ in 0..3 {
            // z^(k-1) ~ 1/z near the root, so the Newton step is z - z (z^k - 1) / k
            let residual = z.powu(k) - Cdd::one();
            let step = z * residual;
            z = z - Cdd {
                re: step.re.div_f64(k as f64),
                im: step.im.div_f64(k as f64),
            };
        }
        z
    }
}

impl Add for Cdd {
    type Output = Cdd;
    fn add(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Sub for Cdd {
    type Output = Cdd;
    fn sub(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;

    #[test]
    fn thirds_carry_extra_precision() {
        let third = Dd::from_rational(&ratio(1, 3));
        let one = third * Dd::from_f64(3.0);
        assert!((one - Dd::from_f64(1.0)).to_f64().abs() < 1e-30);
    }

    #[test]
    fn roots_of_unity_close_up() {
        for k in 1..=12 {
            let z = Cdd::root_of_unity(k);
            assert!((z.powu(k) - Cdd::one()).abs() < 1e-28, "k = {k}");
        }
        let i = Cdd::root_of_unity(4);
        assert!(i.re.to_f64().abs() < 1e-30);
    }
}
