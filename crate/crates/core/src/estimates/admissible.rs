//! Admissible exponents `2/p + n/q = n/2 - s`, kept in exact rationals.

use std::fmt;

use num_rational::Rational64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// `(s, p, q)` stored through `1/p` and `1/q`; `1/p = 0` means `p = inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdmissibleTriple {
    n: u32,
    s: Rational64,
    inv_p: Rational64,
    inv_q: Rational64,
}

fn half() -> Rational64 {
    Rational64::new(1, 2)
}

fn zero() -> Rational64 {
    Rational64::from_integer(0)
}

fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn exponent(inv: Rational64) -> f64 {
    if inv == zero() {
        f64::INFINITY
    } else {
        to_f64(inv.recip())
    }
}

fn check_regularity(n: u32, s: Rational64) -> Result<()> {
    if n == 0 {
        return Err(Error::NotAdmissible("dimension must be positive".into()));
    }
    let top = Rational64::new(n as i64, 2);
    if s < zero() || s >= top {
        return Err(Error::NotAdmissible(format!(
            "regularity s = {s} must lie in [0, {top}) for n = {n}"
        )));
    }
    Ok(())
}

impl AdmissibleTriple {
    /// Builds the triple with the given `1/p`; `1/q` follows from the
    /// scaling relation.
    pub fn from_inv_p(n: u32, s: Rational64, inv_p: Rational64) -> Result<Self> {
        check_regularity(n, s)?;
        let nn = Rational64::from_integer(n as i64);
        let inv_q = (nn * half() - s - inv_p * 2) / nn;
        Self::new(n, s, inv_p, inv_q)
    }

    pub fn new(n: u32, s: Rational64, inv_p: Rational64, inv_q: Rational64) -> Result<Self> {
        check_regularity(n, s)?;
        for (name, v) in [("1/p", inv_p), ("1/q", inv_q)] {
            if v < zero() || v > half() {
                return Err(Error::NotAdmissible(format!(
                    "{name} = {v} must lie in [0, 1/2]"
                )));
            }
        }
        let nn = Rational64::from_integer(n as i64);
        if inv_p * 2 + nn * inv_q != nn * half() - s {
            return Err(Error::NotAdmissible(format!(
                "2/p + n/q = {} differs from n/2 - s = {}",
                inv_p * 2 + nn * inv_q,
                nn * half() - s
            )));
        }
        if n == 2 && inv_q == zero() {
            return Err(Error::NotAdmissible(
                "q = inf is excluded when n = 2 (the endpoint (2, inf) fails in the plane)".into(),
            ));
        }
        Ok(Self { n, s, inv_p, inv_q })
    }

    /// `(s, p, q)` from integer exponents; `None` stands for infinity.
    pub fn from_exponents(n: u32, s: Rational64, p: Option<i64>, q: Option<i64>) -> Result<Self> {
        let inv = |e: Option<i64>| match e {
            None => Ok(zero()),
            Some(v) if v > 0 => Ok(Rational64::new(1, v)),
            Some(v) => Err(Error::NotAdmissible(format!(
                "exponent {v} must be positive"
            ))),
        };
        Self::new(n, s, inv(p)?, inv(q)?)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn s(&self) -> Rational64 {
        self.s
    }

    pub fn inv_p(&self) -> Rational64 {
        self.inv_p
    }

    pub fn inv_q(&self) -> Rational64 {
        self.inv_q
    }

    pub fn s_f64(&self) -> f64 {
        to_f64(self.s)
    }

    pub fn p(&self) -> f64 {
        exponent(self.inv_p)
    }

    pub fn q(&self) -> f64 {
        exponent(self.inv_q)
    }

    /// `2/p + n/q - (n/2 - s)`, exactly zero for every constructed triple.
    pub fn defect(&self) -> Rational64 {
        let nn = Rational64::from_integer(self.n as i64);
        self.inv_p * 2 + nn * self.inv_q - (nn * half() - self.s)
    }

    pub fn is_endpoint(&self) -> bool {
        self.inv_p == half()
    }
}

impl fmt::Display for AdmissibleTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |inv: Rational64| {
            if inv == zero() {
                "inf".to_string()
            } else {
                inv.recip().to_string()
            }
        };
        write!(
            f,
            "(s={}, p={}, q={})",
            self.s,
            show(self.inv_p),
            show(self.inv_q)
        )
    }
}

impl Serialize for AdmissibleTriple {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("AdmissibleTriple", 6)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("s", &self.s.to_string())?;
        st.serialize_field("inv_p", &self.inv_p.to_string())?;
        st.serialize_field("inv_q", &self.inv_q.to_string())?;
        st.serialize_field("p", &self.p())?;
        st.serialize_field("q", &self.q())?;
        st.end()
    }
}

/// Both ends of the admissible segment plus `count` interior points evenly
/// spaced in `1/p`. For `n = 2` the end with `q = inf` is left out.
pub fn enumerate_admissible(n: u32, s: Rational64, count: usize) -> Result<Vec<AdmissibleTriple>> {
    check_regularity(n, s)?;
    let nn = Rational64::from_integer(n as i64);
    let reach = (nn * half() - s) / 2;
    let top = if reach < half() { reach } else { half() };
    let steps = count as i64 + 1;
    let mut out = Vec::with_capacity(count + 2);
    for j in 0..=steps {
        let inv_p = top * Rational64::new(j, steps);
        match AdmissibleTriple::from_inv_p(n, s, inv_p) {
            Ok(t) => out.push(t),
            Err(_) if j == steps && n == 2 => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
