//! Double-double complex arithmetic (about 106 bits), used to accumulate long
//! products of q-numbers so that the result is correctly rounded to `f64`
//! regardless of evaluation order.

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let r = quick_two_sum(s, e + t);
        quick_two_sum(r.hi, r.lo + f)
    }

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p) + (self.hi * o.lo + self.lo * o.hi);
        quick_two_sum(p, e)
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::from(q2)));
        let q3 = r.hi / o.hi;
        quick_two_sum(q1, q2).add(Dd::from(q3))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct DdComplex {
    re: Dd,
    im: Dd,
}

impl DdComplex {
    pub(crate) fn from(z: Complex64) -> Self {
        Self { re: Dd::from(z.re), im: Dd::from(z.im) }
    }

    pub(crate) fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.hi + self.re.lo, self.im.hi + self.im.lo)
    }

    pub(crate) fn neg(self) -> Self {
        Self { re: self.re.neg(), im: self.im.neg() }
    }

    pub(crate) fn mul(self, o: Self) -> Self {
        Self {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub(crate) fn div(self, o: Self) -> Self {
        let den = o.re.mul(o.re).add(o.im.mul(o.im));
        let re = self.re.mul(o.re).add(self.im.mul(o.im));
        let im = self.im.mul(o.re).sub(self.re.mul(o.im));
        Self { re: re.div(den), im: im.div(den) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn third_is_exact_to_double_double() {
        let t = Dd::from(1.0).div(Dd::from(3.0));
        let back = t.mul(Dd::from(3.0)).sub(Dd::from(1.0));
        assert!(back.hi.abs() < 1e-31);
    }

    #[test]
    fn complex_round_trip() {
        let a = DdComplex::from(Complex64::new(0.3, -1.7));
        let b = DdComplex::from(Complex64::new(-2.1, 0.4));
        let back = a.mul(b).div(b).to_c64();
        assert_eq!(back, Complex64::new(0.3, -1.7));
    }

    #[test]
    fn order_of_products_does_not_matter() {
        let xs: Vec<Complex64> = (1..9).map(|k| Complex64::new(1.0 + 0.37 * k as f64, 0.11 * k as f64 - 0.5)).collect();
        let fwd = xs.iter().fold(DdComplex::from(Complex64::new(1.0, 0.0)), |a, &x| a.mul(DdComplex::from(x)));
        let bwd = xs.iter().rev().fold(DdComplex::from(Complex64::new(1.0, 0.0)), |a, &x| a.mul(DdComplex::from(x)));
        assert_eq!(fwd.to_c64(), bwd.to_c64());
    }
}
