//! Rational functions `N/D` on the Riemann sphere.

use super::{is_inf, Poly, INF};
use num_complex::Complex64 as C;

#[derive(Debug, Clone, PartialEq)]
pub struct Rational {
    pub num: Poly,
    pub den: Poly,
}

impl Rational {
    pub fn new(num: Poly, den: Poly) -> Rational {
        Rational { num, den }
    }

    pub fn poly(p: Poly) -> Rational {
        Rational::new(p, Poly::real(&[1.0]))
    }

    pub fn identity() -> Rational {
        Rational::poly(Poly::real(&[0.0, 1.0]))
    }

    /// Möbius map `(a z + b) / (c z + d)`.
    pub fn mobius(a: C, b: C, c: C, d: C) -> Rational {
        Rational::new(Poly::new(vec![b, a]), Poly::new(vec![d, c]))
    }

    pub fn degree(&self) -> usize {
        self.num.degree().max(self.den.degree())
    }

    /// Finite evaluation; poles give a non-finite value.
    pub fn eval(&self, z: C) -> C {
        let d = self.den.eval(z);
        let n = self.num.eval(z);
        if d.norm() == 0.0 {
            return INF;
        }
        n / d
    }

    /// Value at `∞` from the leading coefficients.
    pub fn at_infinity(&self) -> C {
        let (dn, dd) = (self.num.degree(), self.den.degree());
        if dn > dd {
            INF
        } else if dn < dd {
            C::new(0.0, 0.0)
        } else {
            self.num.leading() / self.den.leading()
        }
    }

    /// Evaluation on the sphere: `∞` in and out is handled, and large
    /// arguments are evaluated through `1/z` to avoid overflow.
    pub fn eval_sphere(&self, z: C) -> C {
        if is_inf(z) {
            return self.at_infinity();
        }
        if z.norm() > 1e6 {
            let w = C::new(1.0, 0.0) / z;
            let n = self.degree();
            let num = self.num.reversed(n).eval(w);
            let den = self.den.reversed(n).eval(w);
            if den.norm() == 0.0 {
                return INF;
            }
            return num / den;
        }
        let v = self.eval(z);
        if is_inf(v) {
            INF
        } else {
            v
        }
    }

    /// `R'` as a rational function.
    pub fn derivative(&self) -> Rational {
        let n = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        Rational::new(n, self.den.mul(&self.den))
    }

    /// `R'(z)` evaluated without forming the squared denominator.
    pub fn deriv_at(&self, z: C) -> C {
        let (n, d) = (self.num.eval(z), self.den.eval(z));
        let (n1, d1) = (self.num.derivative().eval(z), self.den.derivative().eval(z));
        (n1 * d - n * d1) / (d * d)
    }

    /// `z R'(z) / R(z)`.
    pub fn log_deriv(&self, z: C) -> C {
        let (n, d) = (self.num.eval(z), self.den.eval(z));
        let (n1, d1) = (self.num.derivative().eval(z), self.den.derivative().eval(z));
        z * (n1 / n - d1 / d)
    }

    /// `R(z0 + h) - R(z0)`, accurate when `h` is tiny.
    pub fn delta(&self, z0: C, h: C) -> C {
        let (n0, d0) = (self.num.eval(z0), self.den.eval(z0));
        let (dn, dd) = (self.num.delta(z0, h), self.den.delta(z0, h));
        (dn * d0 - n0 * dd) / ((d0 + dd) * d0)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Rational) -> Rational {
        let n = self.degree();
        let (a, b) = (&inner.num, &inner.den);
        let powa: Vec<Poly> = (0..=n)
            .scan(Poly::real(&[1.0]), |acc, k| {
                let cur = acc.clone();
                if k < n {
                    *acc = acc.mul(a);
                }
                Some(cur)
            })
            .collect();
        let powb: Vec<Poly> = (0..=n)
            .scan(Poly::real(&[1.0]), |acc, k| {
                let cur = acc.clone();
                if k < n {
                    *acc = acc.mul(b);
                }
                Some(cur)
            })
            .collect();
        let homog = |p: &Poly| {
            (0..=n).fold(Poly::real(&[0.0]), |s, k| {
                s.add(&powa[k].mul(&powb[n - k]).scale(p.coeff(k)))
            })
        };
        Rational::new(homog(&self.num), homog(&self.den))
    }

    /// Rational function with conjugated coefficients, `z ↦ conj(R(conj z))`.
    pub fn conj(&self) -> Rational {
        Rational::new(self.num.conj(), self.den.conj())
    }

    /// Normalise so the largest coefficient of the denominator has modulus 1.
    pub fn normalized(&self) -> Rational {
        let s = self
            .den
            .coeffs()
            .iter()
            .chain(self.num.coeffs())
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if s == 0.0 {
            return self.clone();
        }
        let k = C::new(1.0 / s, 0.0);
        Rational::new(self.num.scale(k), self.den.scale(k))
    }
}
