//! Second-order forward-mode jets along one direction: value, first and
//! second directional derivatives.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d: f64,
    pub dd: f64,
}

impl Jet {
    pub const fn constant(v: f64) -> Self {
        Self { v, d: 0.0, dd: 0.0 }
    }

    pub const fn variable(v: f64) -> Self {
        Self { v, d: 1.0, dd: 0.0 }
    }

    /// Applies a scalar function given `f, f', f''` at `self.v`.
    pub fn chain(self, f: f64, f1: f64, f2: f64) -> Self {
        Self {
            v: f,
            d: f1 * self.d,
            dd: f2 * self.d * self.d + f1 * self.dd,
        }
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn powi(self, n: i32) -> Self {
        let nf = f64::from(n);
        self.chain(
            self.v.powi(n),
            nf * self.v.powi(n - 1),
            nf * (nf - 1.0) * self.v.powi(n - 2),
        )
    }

    pub fn recip(self) -> Self {
        let r = 1.0 / self.v;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }

    pub fn scale(self, c: f64) -> Self {
        Self {
            v: c * self.v,
            d: c * self.d,
            dd: c * self.dd,
        }
    }

    pub fn shift(self, c: f64) -> Self {
        Self {
            v: self.v + c,
            ..self
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            d: self.d + o.d,
            dd: self.dd + o.dd,
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            d: self.d * o.v + self.v * o.d,
            dd: self.dd * o.v + 2.0 * self.d * o.d + self.v * o.dd,
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

/// `exp(-1/u)` for `u > 0`, zero otherwise.
pub fn smooth_step_jet(u: Jet) -> Jet {
    if u.v <= 0.0 {
        return Jet::constant(0.0);
    }
    // g = -1/u, f = exp(g)
    let g = -u.recip();
    g.exp()
}

/// Radial bump `exp(-1/(1 - r^2/R^2))` from the squared radius.
pub fn bump_jet(r2: Jet, radius: f64) -> Jet {
    let t = r2.scale(1.0 / (radius * radius));
    if t.v >= 1.0 {
        return Jet::constant(0.0);
    }
    smooth_step_jet(-t.shift(-1.0))
}

/// Smooth transition equal to 0 for `u <= 0` and 1 for `u >= 1`.
pub fn transition_jet(u: Jet) -> Jet {
    let a = smooth_step_jet(u);
    let b = smooth_step_jet(-u.shift(-1.0));
    a / (a + b)
}
