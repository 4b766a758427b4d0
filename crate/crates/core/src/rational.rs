//! Exact rational scalars and the few complex-exponential kernels that sit
//! on top of them.
//!
//! Every geometric quantity in the crate (box corners, lattice generators,
//! spectral shifts) is a [`Rational`]. Floating point enters only when a
//! phase `e^{2πi r}` is evaluated, and [`unit_phase`] reduces `r` modulo 1
//! exactly before doing so.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(value)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| *r.numer() as f64 / *r.denom() as f64)
}

/// Parses `"p/q"` or `"p"`, with optional surrounding whitespace.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(text.to_string());
    let trimmed = text.trim();
    match trimmed.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => trimmed.parse::<i64>().map(int).map_err(|_| bad()),
    }
}

/// Canonical `"p/q"` form (reduced, positive denominator, `q` always written).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn format_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

/// Fractional part in `[0, 1)`.
pub fn fract(r: &Rational) -> Rational {
    r - r.floor()
}

pub fn is_integer(r: &Rational) -> bool {
    r.is_integer()
}

/// `e^{2πi r}` with `r` reduced modulo 1 in exact arithmetic first.
///
/// Quarter turns are returned exactly so that sums such as `1 + e^{πi}`
/// cancel to an exact zero.
pub fn unit_phase(r: &Rational) -> Complex64 {
    let f = fract(r);
    if f.is_zero() {
        return Complex64::new(1.0, 0.0);
    }
    match (*f.numer(), *f.denom()) {
        (1, 4) => return Complex64::new(0.0, 1.0),
        (1, 2) => return Complex64::new(-1.0, 0.0),
        (3, 4) => return Complex64::new(0.0, -1.0),
        _ => {}
    }
    // fold into (-1/2, 1/2] to keep the angle small
    let folded = if f > rat(1, 2) { f - Rational::one() } else { f };
    Complex64::from_polar(1.0, 2.0 * PI * to_f64(&folded))
}

/// `ω^e` for `ω = e^{-2πi/N}`, with the integer exponent reduced mod `N`.
pub fn root_of_unity(exponent: i64, modulus: u64) -> Complex64 {
    let n = modulus as i64;
    unit_phase(&Rational::new(-exponent.mod_floor(&n), n))
}

/// `∫_lo^hi e^{2πi t x} dx` in closed form (`hi - lo` when `t = 0`).
pub fn exponential_integral(lo: &Rational, hi: &Rational, t: &Rational) -> Complex64 {
    if t.is_zero() {
        return Complex64::new(to_f64(&(hi - lo)), 0.0);
    }
    let numerator = unit_phase(&(t * hi)) - unit_phase(&(t * lo));
    numerator / Complex64::new(0.0, 2.0 * PI * to_f64(t))
}

pub fn dot(u: &[Rational], v: &[Rational]) -> Rational {
    u.iter().zip(v).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(u: &[Rational], v: &[i64]) -> Rational {
    u.iter()
        .zip(v)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * int(*y))
}

pub fn max_abs(v: &[Rational]) -> Rational {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
}

/// Square rational matrix stored as rows.
pub type RationalMatrix = Vec<Vec<Rational>>;

pub fn mat_vec(m: &RationalMatrix, v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_vec_int(m: &RationalMatrix, v: &[i64]) -> Vec<Rational> {
    m.iter().map(|row| dot_int(row, v)).collect()
}

/// Gauss-Jordan inverse over the rationals; `None` when singular.
pub fn invert(m: &RationalMatrix) -> Option<RationalMatrix> {
    let n = m.len();
    let mut work: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !work[r][col].is_zero())?;
        work.swap(col, pivot);
        let p = work[col][col];
        for x in work[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !work[r][col].is_zero() {
                let factor = work[r][col];
                let pivot_row = work[col].clone();
                for (x, y) in work[r].iter_mut().zip(pivot_row) {
                    *x -= factor * y;
                }
            }
        }
    }
    Some(work.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn determinant(m: &RationalMatrix) -> Rational {
    let n = m.len();
    let mut work = m.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !work[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            work.swap(col, pivot);
            det = -det;
        }
        let p = work[col][col];
        det *= p;
        for r in col + 1..n {
            let factor = work[r][col] / p;
            if factor.is_zero() {
                continue;
            }
            let pivot_row = work[col].clone();
            for (x, y) in work[r].iter_mut().zip(pivot_row) {
                *x -= factor * y;
            }
        }
    }
    det
}

/// Serde adapters writing rationals as `"p/q"` strings.
pub mod serde_rational {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&format_rational(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter()
                .map(|t| parse_rational(t).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod matrix {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(m.len()))?;
            for row in m {
                let strings: Vec<String> = row.iter().map(format_rational).collect();
                seq.serialize_element(&strings)?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<Vec<Vec<Rational>>, D::Error> {
            let raw = Vec::<Vec<String>>::deserialize(d)?;
            raw.iter()
                .map(|row| {
                    row.iter()
                        .map(|t| parse_rational(t).map_err(D::Error::custom))
                        .collect()
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational(" -6/8 ").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational("5").unwrap(), int(5));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
        assert_eq!(format_rational(&rat(-2, 4)), "-1/2");
        assert_eq!(format_rational(&int(3)), "3/1");
    }

    #[test]
    fn phase_is_exact_on_quarter_turns() {
        assert_eq!(unit_phase(&rat(1, 2)), Complex64::new(-1.0, 0.0));
        assert_eq!(unit_phase(&rat(-7, 4)), Complex64::new(0.0, 1.0));
        assert_eq!(unit_phase(&int(17)), Complex64::new(1.0, 0.0));
        let z = unit_phase(&rat(1, 3));
        assert!((z - Complex64::from_polar(1.0, 2.0 * PI / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn root_of_unity_reduces_exponent() {
        // ω = e^{-2πi/6}, ω^3 = -1
        assert_eq!(root_of_unity(3, 6), Complex64::new(-1.0, 0.0));
        assert_eq!(root_of_unity(-3, 6), Complex64::new(-1.0, 0.0));
        assert_eq!(root_of_unity(4, 4), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn exponential_integral_matches_antiderivative() {
        // ∫_0^1 e^{2πi x/4} dx = (e^{πi/2} - 1) / (2πi/4)
        let got = exponential_integral(&int(0), &int(1), &rat(1, 4));
        let expected = (Complex64::new(0.0, 1.0) - 1.0) / Complex64::new(0.0, 2.0 * PI / 4.0);
        assert!((got - expected).norm() < 1e-15);
        assert_eq!(exponential_integral(&int(2), &int(5), &int(0)), Complex64::new(3.0, 0.0));
        assert!(exponential_integral(&int(0), &int(1), &int(1)).norm() < 1e-15);
    }

    #[test]
    fn inverse_and_determinant() {
        let m = vec![vec![int(2), int(1)], vec![int(1), int(1)]];
        let inv = invert(&m).unwrap();
        assert_eq!(inv, vec![vec![int(1), int(-1)], vec![int(-1), int(2)]]);
        assert_eq!(determinant(&m), int(1));
        let singular = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(invert(&singular).is_none());
        assert_eq!(determinant(&singular), int(0));
        let half = vec![vec![rat(1, 2)]];
        assert_eq!(determinant(&half), rat(1, 2));
    }
}
