//! Exponents of the weighted commutator inequality, kept as exact rationals.

use num_rational::Rational64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// `1/2 < a < a0 <= 1` and
/// `1/q = 1/p - (a - 1/2)/n = 1/p0 - (a0 - 1/2)/n`, `1/q = 1/r - a/n`,
/// `1/r0 = 1/2 + (a0 - 1/2)/n`; every exponent in `(1, inf)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorExponents {
    n: u32,
    a: Rational64,
    a0: Rational64,
    inv_p: Rational64,
    inv_p0: Rational64,
    inv_q: Rational64,
    inv_r: Rational64,
    inv_r0: Rational64,
}

fn half() -> Rational64 {
    Rational64::new(1, 2)
}

fn inside(what: &str, v: Rational64) -> Result<()> {
    let (zero, one) = (Rational64::from_integer(0), Rational64::from_integer(1));
    if v > zero && v < one {
        Ok(())
    } else {
        Err(Error::InvalidExponents(format!(
            "1/{what} = {v} is outside (0, 1)"
        )))
    }
}

impl CommutatorExponents {
    /// Derives `p0, q, r, r0` from `(n, a, a0, p)`.
    pub fn new(n: u32, a: Rational64, a0: Rational64, inv_p: Rational64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidExponents("dimension must be positive".into()));
        }
        let nn = Rational64::from_integer(n as i64);
        let inv_q = inv_p - (a - half()) / nn;
        let inv_p0 = inv_q + (a0 - half()) / nn;
        let inv_r = inv_q + a / nn;
        let inv_r0 = half() + (a0 - half()) / nn;
        Self::with_all(n, a, a0, inv_p, inv_p0, inv_q, inv_r, inv_r0)
    }

    /// Validates a complete set of inverse exponents.
    #[allow(clippy::too_many_arguments)]
    pub fn with_all(
        n: u32,
        a: Rational64,
        a0: Rational64,
        inv_p: Rational64,
        inv_p0: Rational64,
        inv_q: Rational64,
        inv_r: Rational64,
        inv_r0: Rational64,
    ) -> Result<Self> {
        if !(a > half() && a < a0 && a0 <= Rational64::from_integer(1)) {
            return Err(Error::InvalidExponents(format!(
                "need 1/2 < a < a0 <= 1, got a = {a}, a0 = {a0}"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidExponents("dimension must be positive".into()));
        }
        for (what, v) in [
            ("p", inv_p),
            ("p0", inv_p0),
            ("q", inv_q),
            ("r", inv_r),
            ("r0", inv_r0),
        ] {
            inside(what, v)?;
        }
        let nn = Rational64::from_integer(n as i64);
        let checks = [
            (
                "1/q = 1/p - (a - 1/2)/n",
                inv_q == inv_p - (a - half()) / nn,
            ),
            (
                "1/q = 1/p0 - (a0 - 1/2)/n",
                inv_q == inv_p0 - (a0 - half()) / nn,
            ),
            ("1/q = 1/r - a/n", inv_q == inv_r - a / nn),
            (
                "1/r0 = 1/2 + (a0 - 1/2)/n",
                inv_r0 == half() + (a0 - half()) / nn,
            ),
        ];
        if let Some((rule, _)) = checks.iter().find(|c| !c.1) {
            return Err(Error::InvalidExponents(format!("relation {rule} fails")));
        }
        Ok(Self {
            n,
            a,
            a0,
            inv_p,
            inv_p0,
            inv_q,
            inv_r,
            inv_r0,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a(&self) -> Rational64 {
        self.a
    }

    pub fn a0(&self) -> Rational64 {
        self.a0
    }

    /// Inverse exponents `(1/p, 1/p0, 1/q, 1/r, 1/r0)`.
    pub fn inverses(&self) -> [Rational64; 5] {
        [self.inv_p, self.inv_p0, self.inv_q, self.inv_r, self.inv_r0]
    }

    fn value(v: Rational64) -> f64 {
        *v.denom() as f64 / *v.numer() as f64
    }

    pub fn p(&self) -> f64 {
        Self::value(self.inv_p)
    }

    pub fn p0(&self) -> f64 {
        Self::value(self.inv_p0)
    }

    pub fn q(&self) -> f64 {
        Self::value(self.inv_q)
    }

    pub fn r(&self) -> f64 {
        Self::value(self.inv_r)
    }

    pub fn r0(&self) -> f64 {
        Self::value(self.inv_r0)
    }

    pub fn a_f64(&self) -> f64 {
        *self.a.numer() as f64 / *self.a.denom() as f64
    }

    pub fn a0_f64(&self) -> f64 {
        *self.a0.numer() as f64 / *self.a0.denom() as f64
    }
}

impl Serialize for CommutatorExponents {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CommutatorExponents", 8)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("a", &self.a.to_string())?;
        st.serialize_field("a0", &self.a0.to_string())?;
        st.serialize_field("p", &self.p())?;
        st.serialize_field("p0", &self.p0())?;
        st.serialize_field("q", &self.q())?;
        st.serialize_field("r", &self.r())?;
        st.serialize_field("r0", &self.r0())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn plane_example() {
        let e = CommutatorExponents::new(2, r(3, 5), r(4, 5), r(1, 2)).unwrap();
        assert_eq!(
            e.inverses(),
            [r(1, 2), r(3, 5), r(9, 20), r(3, 4), r(13, 20)]
        );
    }

    #[test]
    fn rejects_bad_orders_and_relations() {
        assert!(CommutatorExponents::new(2, r(0, 1), r(4, 5), r(1, 2)).is_err());
        assert!(CommutatorExponents::new(2, r(4, 5), r(3, 5), r(1, 2)).is_err());
        assert!(CommutatorExponents::new(1, r(3, 5), r(1, 1), r(9, 10)).is_err());
        let bad = CommutatorExponents::with_all(
            2,
            r(3, 5),
            r(4, 5),
            r(1, 2),
            r(3, 5),
            r(9, 20),
            r(3, 4),
            r(1, 2),
        );
        assert!(bad.is_err());
    }
}
