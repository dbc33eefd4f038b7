use num_complex::Complex64;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

/// Default tolerance for comparing scalars.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Tolerance used when none is given explicitly. Reads `LINLAM_EPS` once.
pub fn default_eps() -> f64 {
    static EPS: OnceLock<f64> = OnceLock::new();
    *EPS.get_or_init(|| {
        std::env::var("LINLAM_EPS")
            .ok()
            .and_then(|s| s.parse::<f64>().ok())
            .filter(|e| e.is_finite() && *e >= 0.0)
            .unwrap_or(DEFAULT_EPS)
    })
}

/// A complex coefficient.
///
/// `==` and `Ord` are exact (with `-0.0 == 0.0`), so that scalars inside
/// binder bodies take part in structural comparison. Tolerant comparison is
/// [`Scalar::approx_eq`].
#[derive(Clone, Copy, Debug, Default)]
pub struct Scalar(pub Complex64);

impl Scalar {
    pub const ZERO: Scalar = Scalar(Complex64 { re: 0.0, im: 0.0 });
    pub const ONE: Scalar = Scalar(Complex64 { re: 1.0, im: 0.0 });
    pub const I: Scalar = Scalar(Complex64 { re: 0.0, im: 1.0 });

    pub fn new(re: f64, im: f64) -> Scalar {
        Scalar(Complex64::new(re, im))
    }

    pub fn real(re: f64) -> Scalar {
        Scalar::new(re, 0.0)
    }

    pub fn re(self) -> f64 {
        self.0.re
    }

    pub fn im(self) -> f64 {
        self.0.im
    }

    pub fn abs(self) -> f64 {
        self.0.norm()
    }

    pub fn norm_sqr(self) -> f64 {
        self.0.norm_sqr()
    }

    pub fn conj(self) -> Scalar {
        Scalar(self.0.conj())
    }

    pub fn is_finite(self) -> bool {
        self.0.re.is_finite() && self.0.im.is_finite()
    }

    pub fn approx_eq(self, other: Scalar, eps: f64) -> bool {
        (self.0 - other.0).norm() <= eps
    }

    pub fn is_zero_within(self, eps: f64) -> bool {
        self.abs() <= eps
    }

    /// Formats with 8 significant digits, trailing zeros dropped.
    pub fn to_json(self) -> serde_json::Value {
        serde_json::json!({"re": self.re(), "im": self.im()})
    }

    pub fn display(self) -> String {
        let (re, im) = (self.0.re, self.0.im);
        if im == 0.0 {
            sig8(re)
        } else if re == 0.0 {
            format!("{}i", sig8(im))
        } else if im < 0.0 {
            format!("({}-{}i)", sig8(re), sig8(-im))
        } else {
            format!("({}+{}i)", sig8(re), sig8(im))
        }
    }
}

/// Formats a float with 8 significant digits, trailing zeros dropped.
pub fn sig8(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (7 - mag).clamp(0, 40) as usize;
    let mut s = format!("{:.*}", decimals, x);
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

fn cmp_f64(a: f64, b: f64) -> Ordering {
    // -0.0 and 0.0 compare equal under partial_cmp; NaN is never constructed
    a.partial_cmp(&b).unwrap_or_else(|| a.total_cmp(&b))
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_f64(self.0.re, other.0.re).then_with(|| cmp_f64(self.0.im, other.0.im))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Scalar {
        Scalar::real(x)
    }
}

impl From<Complex64> for Scalar {
    fn from(c: Complex64) -> Scalar {
        Scalar(c)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        Scalar(self.0 + o.0)
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        self.0 += o.0;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        Scalar(self.0 - o.0)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        Scalar(self.0 * o.0)
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, o: Scalar) -> Scalar {
        Scalar(self.0 / o.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eight_significant_digits() {
        assert_eq!(sig8(std::f64::consts::FRAC_1_SQRT_2), "0.70710678");
        assert_eq!(sig8(1.4), "1.4");
        assert_eq!(sig8(1.0), "1");
        assert_eq!(sig8(0.7291666666666666), "0.72916667");
        assert_eq!(sig8(-0.5), "-0.5");
        assert_eq!(Scalar::new(0.5, -0.25).display(), "(0.5-0.25i)");
    }

    #[test]
    fn negative_zero_is_zero() {
        assert_eq!(Scalar::new(-0.0, 0.0), Scalar::ZERO);
    }

    #[test]
    fn tolerant_comparison() {
        assert!(Scalar::real(1.0).approx_eq(Scalar::real(1.0 + 1e-12), DEFAULT_EPS));
        assert!(!Scalar::real(1.0).approx_eq(Scalar::real(1.0 + 1e-6), DEFAULT_EPS));
    }
}
