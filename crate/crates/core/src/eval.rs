use std::fmt;

use serde::{Deserialize, Serialize};

/// Which representation produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    Series,
    Integral,
    IntegralByParts,
    ClosedForm,
    Stable,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::Integral => "integral",
            Method::IntegralByParts => "integral-by-parts",
            Method::ClosedForm => "closed-form",
            Method::Stable => "stable",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A numerical value with an absolute error estimate and the method used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub abs_err: f64,
    pub method: Method,
}

impl EvalResult {
    pub fn new(value: f64, abs_err: f64, method: Method) -> Self {
        debug_assert!(abs_err >= 0.0 || abs_err.is_nan());
        Self { value, abs_err: abs_err.abs(), method }
    }

    pub fn exact(value: f64, method: Method) -> Self {
        Self::new(value, f64::EPSILON * value.abs(), method)
    }

    /// Multiply value and error by a known positive constant.
    pub fn scale(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            abs_err: self.abs_err * factor.abs() + f64::EPSILON * (self.value * factor).abs(),
            method: self.method,
        }
    }

    pub fn with_method(self, method: Method) -> Self {
        Self { method, ..self }
    }
}
