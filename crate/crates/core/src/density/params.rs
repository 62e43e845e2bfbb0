use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Order ν of the time derivative. Named cases (`1`, `2/3`, `1/2^n`, ...)
/// carry an exact rational tag so closed-form dispatch never compares floats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Order {
    value: f64,
    ratio: Option<(u64, u64)>,
}

impl Order {
    pub fn rational(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 {
            return Err(Error::InvalidParams(format!("order {num}/{den} is not a positive fraction")));
        }
        let g = gcd(num, den);
        Ok(Self { value: num as f64 / den as f64, ratio: Some((num / g, den / g)) })
    }

    pub fn real(value: f64) -> Result<Self> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidParams(format!("order must be positive and finite, got {value}")));
        }
        Ok(Self { value, ratio: None })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn ratio(&self) -> Option<(u64, u64)> {
        self.ratio
    }

    /// True when the order carries the exact tag `num/den` (in lowest terms).
    pub fn is(&self, num: u64, den: u64) -> bool {
        let g = gcd(num, den);
        self.ratio == Some((num / g, den / g))
    }

    /// `(num/den)·ν`, keeping the rational tag when there is one.
    pub fn times(&self, num: u64, den: u64) -> Result<Self> {
        match self.ratio {
            Some((p, q)) => Order::rational(p * num, q * den),
            None => Order::real(self.value * num as f64 / den as f64),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ratio {
            Some((p, 1)) => write!(f, "{p}"),
            Some((p, q)) => write!(f, "{p}/{q}"),
            None => write!(f, "{}", self.value),
        }
    }
}

fn parse_uint(s: &str) -> Result<u64> {
    let s = s.trim();
    if let Some((base, exp)) = s.split_once('^') {
        let b: u64 = base.trim().parse().map_err(|_| bad(s))?;
        let e: u32 = exp.trim().parse().map_err(|_| bad(s))?;
        return b.checked_pow(e).ok_or_else(|| bad(s));
    }
    s.parse().map_err(|_| bad(s))
}

fn bad(s: &str) -> Error {
    Error::InvalidParams(format!("cannot parse order '{s}'"))
}

impl FromStr for Order {
    type Err = Error;

    /// Accepts `p/q` (with `q` optionally written `a^b`), integers (exact),
    /// and decimals (real).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            return Order::rational(parse_uint(num)?, parse_uint(den)?);
        }
        if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
            return Order::rational(parse_uint(s)?, 1);
        }
        Order::real(s.parse().map_err(|_| bad(s))?)
    }
}

/// `(ν, λ, t)` for one evaluation of `u_ν(x, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionalParams {
    pub nu: Order,
    pub lambda: f64,
    pub t: f64,
}

impl FractionalParams {
    pub fn new(nu: Order, lambda: f64, t: f64) -> Result<Self> {
        let v = nu.value();
        if !(v > 0.0 && v < 2.0) {
            return Err(Error::InvalidParams(format!(
                "order must satisfy 0 < nu < 2, got {nu} (nu = 2 is the wave case, not a density)"
            )));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParams(format!("lambda must be positive, got {lambda}")));
        }
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidParams(format!("t must be positive, got {t}")));
        }
        Ok(Self { nu, lambda, t })
    }

    /// Convenience constructor for a real order.
    pub fn real(nu: f64, lambda: f64, t: f64) -> Result<Self> {
        Self::new(Order::real(nu)?, lambda, t)
    }

    pub fn nu(&self) -> f64 {
        self.nu.value()
    }

    /// `λ t^{ν/2}`: the natural length scale.
    pub fn length_scale(&self) -> f64 {
        self.lambda * self.t.powf(0.5 * self.nu())
    }

    /// Reduced argument `|x| / (λ t^{ν/2})`.
    pub fn reduced(&self, x: f64) -> f64 {
        x.abs() / self.length_scale()
    }

    /// Same order and diffusivity at another time.
    pub fn at_time(&self, t: f64) -> Result<Self> {
        Self::new(self.nu, self.lambda, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_and_reals() {
        let o: Order = "2/3".parse().unwrap();
        assert!(o.is(2, 3) && o.is(4, 6));
        let o: Order = "1".parse().unwrap();
        assert!(o.is(1, 1));
        let o: Order = "1/2^3".parse().unwrap();
        assert!(o.is(1, 8));
        let o: Order = "0.5".parse().unwrap();
        assert_eq!(o.ratio(), None);
        assert_eq!(o.value(), 0.5);
        assert!("abc".parse::<Order>().is_err());
        assert!("1/0".parse::<Order>().is_err());
    }

    #[test]
    fn rational_arithmetic_keeps_tags() {
        let o = Order::rational(1, 3).unwrap().times(2, 1).unwrap();
        assert!(o.is(2, 3));
        assert_eq!(o.to_string(), "2/3");
    }

    #[test]
    fn rejects_inadmissible_params() {
        assert!(FractionalParams::real(2.0, 1.0, 1.0).is_err());
        assert!(FractionalParams::real(0.0, 1.0, 1.0).is_err());
        assert!(FractionalParams::real(0.5, 0.0, 1.0).is_err());
        assert!(FractionalParams::real(0.5, 1.0, -1.0).is_err());
        assert!(FractionalParams::real(1.99, 1.0, 1.0).is_ok());
    }
}
